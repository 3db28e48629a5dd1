//! Closed forms: the `λ_q` sandwich for `nb(q)`, skew-line expectations,
//! point-count laws and their moments, the smooth density main term, and
//! the lower bounds on nontrivial blocking sets.
//!
//! Everything is exact except quantities involving `e`, which are `f64`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::prime_power;
use crate::rational::ExactRational;

fn r(n: i64, d: i64) -> ExactRational {
    ExactRational::new(n, d)
}

fn plane_points(q: u32) -> u32 {
    q * q + q + 1
}

/// `λ_q(x) = x(1 - (1-x^q)^(q+1)) + x Σ_{j=1..q} (1-x)^j (1 - (1-x^q)^q)`.
pub fn lambda_q(q: u32, x: &ExactRational) -> Result<ExactRational> {
    if x.is_negative() || *x > ExactRational::one() {
        return Err(Error::OutOfRange(format!("x = {x} is outside [0, 1]")));
    }
    let one = ExactRational::one();
    let miss = &one - &x.powu(q);
    let y = &one - x;
    let first = x * &(&one - &miss.powu(q + 1));
    let geometric: ExactRational = (1..=q).map(|j| y.powu(j)).sum();
    let second = x * &geometric * (&one - &miss.powu(q));
    Ok(first + second)
}

/// Explicit stand-in for the non-constructive upper bound on the blocking
/// fraction: `1 - λ_q(1 - 1/q)`.
pub fn blocking_upper_bound(q: u32) -> ExactRational {
    let x = r(q as i64 - 1, q as i64);
    ExactRational::one() - lambda_q(q, &x).expect("1 - 1/q lies in [0, 1]")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub q: u32,
    /// `λ_q(1 - 1/q)`
    pub lower: ExactRational,
    /// `1 - λ_q(1/q)`
    pub upper: ExactRational,
    pub exact: Option<ExactRational>,
}

impl BoundsReport {
    pub fn new(q: u32, exact: Option<ExactRational>) -> Self {
        let qi = q as i64;
        BoundsReport {
            q,
            lower: lambda_q(q, &r(qi - 1, qi)).expect("in range"),
            upper: ExactRational::one() - lambda_q(q, &r(1, qi)).expect("in range"),
            exact,
        }
    }

    /// `lower <= upper`, and `lower <= exact <= upper` when the exact value is known.
    pub fn holds(&self) -> bool {
        self.lower <= self.upper
            && self
                .exact
                .as_ref()
                .is_none_or(|e| self.lower <= *e && *e <= self.upper)
    }
}

/// Expected number of lines with no rational point on a random curve of
/// degree `d >= q`: `(q^2+q+1)(1 - 1/q)^(q+1)`.
pub fn skew_expectation_exact(q: u32, d: u32) -> Result<ExactRational> {
    if d < q {
        return Err(Error::DegreeTooLow { d, min: q });
    }
    let qi = q as i64;
    Ok(ExactRational::from(plane_points(q) as i64) * r(qi - 1, qi).powu(q + 1))
}

/// `q^2/e - q/(2e) - 5/(24e)`.
pub fn skew_expectation_asymptotic(q: u32) -> f64 {
    let q = q as f64;
    (q * q - q / 2.0 - 5.0 / 24.0) / std::f64::consts::E
}

/// `(1 - 1/q)(1 - 1/q^2)(1 - 1/q^3)`.
pub fn smooth_density_main_term(q: u32) -> ExactRational {
    let qi = q as i64;
    (1..=3u32)
        .map(|k| {
            let qk = qi.pow(k);
            r(qk - 1, qk)
        })
        .product()
}

/// `P(Binomial(n, p) = t)`.
pub fn binomial_pmf(n: u32, p: &ExactRational, t: u32) -> ExactRational {
    if t > n {
        return ExactRational::zero();
    }
    let c = num_integer::binomial(num_bigint::BigInt::from(n), num_bigint::BigInt::from(t));
    ExactRational::from_integer(c) * p.powu(t) * (ExactRational::one() - p).powu(n - t)
}

/// Law of the number of rational points of a random curve of degree
/// `d >= 2q - 1`: `Binomial(q^2+q+1, 1/q)`.
pub fn point_count_pmf(q: u32, t: u32) -> Result<ExactRational> {
    let n = plane_points(q);
    if t > n {
        return Err(Error::OutOfRange(format!("t = {t} exceeds {n} points")));
    }
    Ok(binomial_pmf(n, &r(1, q as i64), t))
}

/// Law of the number of rational points on a fixed line: `Binomial(q+1, 1/q)`.
pub fn line_count_pmf(q: u32, t: u32) -> Result<ExactRational> {
    if t > q + 1 {
        return Err(Error::OutOfRange(format!(
            "t = {t} exceeds {} points",
            q + 1
        )));
    }
    Ok(binomial_pmf(q + 1, &r(1, q as i64), t))
}

/// `e^{-1} / k!`
pub fn poisson_pmf(k: u32) -> f64 {
    let fact: f64 = (1..=k).map(f64::from).product();
    (-1.0f64).exp() / fact
}

/// Limiting density of lines meeting a random curve in exactly `k` rational points.
pub fn k_point_line_density(k: u32) -> f64 {
    poisson_pmf(k)
}

/// `!d / d! = Σ_{i=0..d} (-1)^i / i!`.
pub fn derangement_ratio(d: u32) -> ExactRational {
    let mut term = ExactRational::one();
    let mut acc = ExactRational::one();
    for i in 1..=d {
        term = -(term * r(1, i as i64));
        acc = acc + &term;
    }
    acc
}

/// Central moment of the point-count model, `E[(S - (q+1))^k] / (q+1)^{k/2}`,
/// where `S` is a sum of `q^2+q+1` Bernoulli variables of mean `(q+1)/(q^2+q+1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelMoment {
    pub k: u32,
    /// `E[(S - (q+1))^k]`
    pub central: ExactRational,
    /// `q + 1`
    pub scale: u32,
}

impl ModelMoment {
    /// The scaled value, exact when `k` is even.
    pub fn exact(&self) -> Option<ExactRational> {
        (self.k % 2 == 0)
            .then(|| &self.central / &ExactRational::from(self.scale as u64).powu(self.k / 2))
    }

    pub fn to_f64(&self) -> f64 {
        self.central.to_f64() / (self.scale as f64).powf(self.k as f64 / 2.0)
    }
}

pub const MAX_MOMENT: u32 = 8;

pub fn model_moment(q: u32, k: u32) -> Result<ModelMoment> {
    if k > MAX_MOMENT {
        return Err(Error::OutOfRange(format!(
            "moment order {k} exceeds {MAX_MOMENT}"
        )));
    }
    let n = plane_points(q);
    let p = r(q as i64 + 1, n as i64);
    let one = ExactRational::one();
    let pc = &one - &p;
    let neg_p = -p.clone();
    let k = k as usize;
    // Raw moments of one centered Bernoulli.
    let single: Vec<ExactRational> = (0..=k)
        .map(|j| &p * &pc.powu(j as u32) + &pc * &neg_p.powu(j as u32))
        .collect();
    let binom = |a: usize, b: usize| -> ExactRational {
        ExactRational::from(num_integer::binomial(a as u64, b as u64))
    };
    // Moments to cumulants, scale by n, and back.
    let mut kappa = vec![ExactRational::zero(); k + 1];
    for m in 1..=k {
        let mut v = single[m].clone();
        for i in 1..m {
            v = v - binom(m - 1, i - 1) * &kappa[i] * &single[m - i];
        }
        kappa[m] = v;
    }
    let nk = ExactRational::from(n as u64);
    let kappa_sum: Vec<ExactRational> = kappa.iter().map(|c| c * &nk).collect();
    let mut moments = vec![ExactRational::one(); k + 1];
    for m in 1..=k {
        moments[m] = (1..=m)
            .map(|i| binom(m - 1, i - 1) * &kappa_sum[i] * &moments[m - i])
            .sum();
    }
    Ok(ModelMoment {
        k: k as u32,
        central: moments[k].clone(),
        scale: q + 1,
    })
}

/// Ratio of the smooth and unrestricted weights of a point set of size `t`:
/// `(1 - 1/q^2)^t (1 + 1/(q^3-1))^(q^2+q+1)`.
pub fn nu_ratio(q: u32, t: u32) -> Result<ExactRational> {
    let n = plane_points(q);
    if t > n {
        return Err(Error::OutOfRange(format!("t = {t} exceeds {n} points")));
    }
    let qi = q as i64;
    let q2 = qi * qi;
    let q3 = q2 * qi;
    Ok(r(q2 - 1, q2).powu(t) * r(q3, q3 - 1).powu(n))
}

/// Fraction of all conics (zero included) that are unions of two rational
/// lines, possibly equal: `((n(n-1)/2 + n)(q-1) + 1) / q^6` with `n = q^2+q+1`.
pub fn conic_blocking_proportion(q: u32) -> ExactRational {
    let n = plane_points(q) as i64;
    let qi = q as i64;
    r((n * (n - 1) / 2 + n) * (qi - 1) + 1, qi.pow(6))
}

/// Strongest lower bound on the size of a nontrivial blocking set of
/// `PG(2, q)` that holds for every such set, rounded up.
///
/// Cases used: `q + √q + 1` always; `3(q+1)/2` for odd primes; and
/// `q + 1 + c_p q^{2/3}` for odd exponent, with `c_2 = c_3 = 2^{-1/3}` and
/// `c_p = 1` otherwise. Cases that exclude sets containing a Baer subplane
/// are not applied.
pub fn min_nontrivial_blocking_bound(q: u32) -> Result<u64> {
    let (p, r) = prime_power(q as u64).ok_or(Error::NotPrime(q as u64))?;
    let q = q as u64;
    let ceil_sqrt = {
        let s = (q as f64).sqrt() as u64;
        (s.saturating_sub(1)..=s + 1).find(|&s| s * s >= q).unwrap()
    };
    let mut bound = q + 1 + ceil_sqrt;
    if r == 1 && p > 2 {
        bound = bound.max((3 * (q + 1)).div_ceil(2));
    }
    if r % 2 == 1 {
        // Smallest m with m >= c_p q^{2/3}, i.e. m^3 >= c_p^3 q^2.
        let (num, den) = if p <= 3 { (1u128, 2u128) } else { (1, 1) };
        let target = (q as u128).pow(2) * num;
        let m = (0u128..).find(|&m| m.pow(3) * den >= target).unwrap();
        bound = bound.max(q + 1 + m as u64);
    }
    Ok(bound)
}
