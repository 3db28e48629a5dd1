//! Monte Carlo samplers over random plane curves, with goodness-of-fit
//! verdicts against the exact finite-`q` laws.
//!
//! Sample `i` draws from its own ChaCha8 stream seeded by mixing the master
//! seed with `i`. Samples are processed in fixed-size chunks whose integer
//! tallies are merged in chunk order, so every result depends only on the
//! configuration and never on the thread count.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::formulas;
use crate::gf::{field_of_order, Fe, FieldSpec};
use crate::pg2::Plane;
use crate::poly::{HomogPoly, PointEvaluator};
use crate::smooth::is_smooth;

const CHUNK: u64 = 256;
/// Quantile of the chi-square distribution used as the rejection threshold.
pub const CHI_SQUARE_QUANTILE: f64 = 0.999;
/// Pooled cells must expect at least this many observations.
pub const MIN_EXPECTED: f64 = 5.0;
/// Rejection sampling gives up on a sample after this many singular draws.
const MAX_REJECTIONS: u32 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    pub q: u64,
    pub d: u32,
    pub samples: u64,
    pub seed: u64,
    /// Worker threads; 0 uses all cores. Does not affect results, so it is
    /// left out of serialized configs.
    #[serde(skip)]
    pub threads: usize,
}

impl McConfig {
    pub fn new(q: u64, d: u32, samples: u64, seed: u64) -> Self {
        McConfig {
            q,
            d,
            samples,
            seed,
            threads: 0,
        }
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    pub fn field(&self) -> Result<FieldSpec> {
        field_of_order(self.q)
    }

    fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::OutOfRange("samples must be at least 1".into()));
        }
        if self.d == 0 {
            return Err(Error::DegreeTooLow { d: 0, min: 1 });
        }
        Ok(())
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// The random stream of sample `index` under `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(index)))
}

/// Runs `visit` on every sample index with its own stream, chunked and
/// merged in index order.
fn run_samples<A: Send>(
    samples: u64,
    seed: u64,
    threads: usize,
    init: impl Fn() -> A + Sync,
    visit: impl Fn(&mut A, &mut ChaCha8Rng) -> Result<()> + Sync,
    merge: impl Fn(&mut A, A),
) -> Result<A> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::OutOfRange(format!("thread pool: {e}")))?;
    let chunks = samples.div_ceil(CHUNK);
    let parts: Vec<Result<A>> = pool.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut acc = init();
                for i in c * CHUNK..((c + 1) * CHUNK).min(samples) {
                    visit(&mut acc, &mut sample_rng(seed, i))?;
                }
                Ok(acc)
            })
            .collect()
    });
    let mut acc = init();
    for p in parts {
        merge(&mut acc, p?);
    }
    Ok(acc)
}

fn merge_counts(a: &mut BTreeMap<u64, u64>, b: BTreeMap<u64, u64>) {
    for (k, v) in b {
        *a.entry(k).or_insert(0) += v;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub counts: BTreeMap<u64, u64>,
    pub total: u64,
    pub mean: f64,
    /// Sample variance (denominator `total - 1`); zero for a single observation.
    pub variance: f64,
}

impl Histogram {
    pub fn from_counts(counts: BTreeMap<u64, u64>) -> Self {
        let total: u64 = counts.values().sum();
        let n = total as f64;
        let mean = if total == 0 {
            0.0
        } else {
            counts
                .iter()
                .map(|(&v, &c)| v as f64 * c as f64)
                .sum::<f64>()
                / n
        };
        let variance = if total < 2 {
            0.0
        } else {
            counts
                .iter()
                .map(|(&v, &c)| c as f64 * (v as f64 - mean).powi(2))
                .sum::<f64>()
                / (n - 1.0)
        };
        Histogram {
            counts,
            total,
            mean,
            variance,
        }
    }

    pub fn frequency(&self, v: u64) -> f64 {
        self.counts.get(&v).copied().unwrap_or(0) as f64 / self.total as f64
    }

    /// Standard error of the mean.
    pub fn stderr(&self) -> f64 {
        (self.variance / self.total as f64).sqrt()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("value,count\n");
        for (v, c) in &self.counts {
            s.push_str(&format!("{v},{c}\n"));
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TestKind {
    ChiSquare,
    ZScore,
    TotalVariation,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestVerdict {
    pub test: TestKind,
    pub statistic: f64,
    pub threshold: f64,
    pub pass: bool,
    /// Degrees of freedom after pooling, for chi-square tests.
    pub dof: Option<u32>,
}

impl TestVerdict {
    fn new(test: TestKind, statistic: f64, threshold: f64, dof: Option<u32>) -> Self {
        TestVerdict {
            test,
            statistic,
            threshold,
            pass: statistic <= threshold,
            dof,
        }
    }
}

/// The `CHI_SQUARE_QUANTILE` quantile of chi-square with `dof` degrees of freedom.
pub fn chi_square_threshold(dof: u32) -> f64 {
    if dof == 0 {
        return 0.0;
    }
    ChiSquared::new(dof as f64)
        .expect("positive degrees of freedom")
        .inverse_cdf(CHI_SQUARE_QUANTILE)
}

/// Pearson goodness of fit of `hist` against `pmf` on `0..=max`.
///
/// Adjacent cells are pooled from the left until each expects at least
/// `MIN_EXPECTED` observations; a short remainder joins the last cell.
/// Any observation outside the support makes the statistic infinite.
pub fn chi_square_gof(hist: &Histogram, pmf: &[f64]) -> TestVerdict {
    let n = hist.total as f64;
    if hist
        .counts
        .keys()
        .any(|&v| v as usize >= pmf.len() || pmf[v as usize] == 0.0)
    {
        return TestVerdict::new(
            TestKind::ChiSquare,
            f64::INFINITY,
            chi_square_threshold(1),
            None,
        );
    }
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let (mut e, mut o) = (0.0, 0.0);
    for (v, p) in pmf.iter().enumerate() {
        e += n * p;
        o += hist.counts.get(&(v as u64)).copied().unwrap_or(0) as f64;
        if e >= MIN_EXPECTED {
            cells.push((o, e));
            e = 0.0;
            o = 0.0;
        }
    }
    if e > 0.0 || o > 0.0 {
        match cells.last_mut() {
            Some(last) => {
                last.0 += o;
                last.1 += e;
            }
            None => cells.push((o, e)),
        }
    }
    let stat: f64 = cells.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
    let dof = cells.len().saturating_sub(1) as u32;
    TestVerdict::new(
        TestKind::ChiSquare,
        stat,
        chi_square_threshold(dof),
        Some(dof),
    )
}

/// `|estimate - target| <= z * stderr`.
pub fn z_score_verdict(estimate: f64, stderr: f64, target: f64, z: f64) -> TestVerdict {
    let stat = if stderr > 0.0 {
        (estimate - target).abs() / stderr
    } else if estimate == target {
        0.0
    } else {
        f64::INFINITY
    };
    TestVerdict::new(TestKind::ZScore, stat, z, None)
}

/// Total variation distance `½ Σ |a_i - b_i|`, the shorter input padded with zeros.
pub fn tv_distance(a: &[f64], b: &[f64]) -> f64 {
    let len = a.len().max(b.len());
    let at = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
    0.5 * (0..len).map(|i| (at(a, i) - at(b, i)).abs()).sum::<f64>()
}

/// Poisson(1) masses on `0..len`.
pub fn poisson_masses(len: usize) -> Vec<f64> {
    (0..len as u32).map(formulas::poisson_pmf).collect()
}

/// `Binomial(n, p)` masses as floats.
pub fn binomial_masses(n: u32, p: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut ln_c = 0.0f64;
    for t in 0..=n {
        if t > 0 {
            ln_c += ((n - t + 1) as f64).ln() - (t as f64).ln();
        }
        let lp = if p == 0.0 {
            if t == 0 {
                0.0
            } else {
                f64::NEG_INFINITY
            }
        } else if p == 1.0 {
            if t == n {
                0.0
            } else {
                f64::NEG_INFINITY
            }
        } else {
            t as f64 * p.ln() + (n - t) as f64 * (1.0 - p).ln()
        };
        out.push((ln_c + lp).exp());
    }
    out
}

/// `TV(Binomial(q+1, 1/q), Poisson(1))`, with the Poisson tail beyond `q+1`
/// counted in full.
pub fn tv_binomial_poisson(q: u32) -> f64 {
    let b = binomial_masses(q + 1, 1.0 / q as f64);
    let p = poisson_masses(b.len());
    let tail = 1.0 - p.iter().sum::<f64>();
    tv_distance(&b, &p) + 0.5 * tail
}

/// A proportion estimate with its binomial standard error.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Proportion {
    pub hits: u64,
    pub trials: u64,
    pub estimate: f64,
    pub stderr: f64,
}

impl Proportion {
    pub fn new(hits: u64, trials: u64) -> Self {
        let p = if trials == 0 {
            f64::NAN
        } else {
            hits as f64 / trials as f64
        };
        Proportion {
            hits,
            trials,
            estimate: p,
            stderr: (p * (1.0 - p) / trials as f64).sqrt(),
        }
    }

    pub fn within(&self, target: f64, z: f64) -> TestVerdict {
        z_score_verdict(self.estimate, self.stderr, target, z)
    }
}

struct Sampler {
    spec: FieldSpec,
    plane: Plane,
    eval: PointEvaluator,
    d: u32,
}

impl Sampler {
    fn new(cfg: &McConfig) -> Result<Self> {
        cfg.validate()?;
        let spec = cfg.field()?;
        let plane = Plane::new(&spec);
        let eval = PointEvaluator::new(&plane, cfg.d);
        Ok(Sampler {
            spec,
            plane,
            eval,
            d: cfg.d,
        })
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> HomogPoly {
        HomogPoly::random(&self.spec, self.d, rng)
    }

    /// `zeros[p]` is true when the curve passes through point `p`.
    fn zeros(&self, f: &HomogPoly) -> Vec<bool> {
        (0..self.plane.size())
            .map(|p| self.eval.eval(f, p).is_zero())
            .collect()
    }

    fn line_hits(&self, zeros: &[bool], line: usize) -> u64 {
        self.plane
            .line(line)
            .incidence
            .iter()
            .filter(|&p| zeros[p])
            .count() as u64
    }
}

/// Fraction of sampled curves whose rational points form a blocking set.
pub fn mc_blocking_proportion(cfg: &McConfig) -> Result<Proportion> {
    let s = Sampler::new(cfg)?;
    let lines = s.plane.size();
    let hits = run_samples(
        cfg.samples,
        cfg.seed,
        cfg.threads,
        || 0u64,
        |acc, rng| {
            let z = s.zeros(&s.draw(rng));
            if (0..lines).all(|l| s.line_hits(&z, l) > 0) {
                *acc += 1;
            }
            Ok(())
        },
        |a, b| *a += b,
    )?;
    Ok(Proportion::new(hits, cfg.samples))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionResult {
    pub histogram: Histogram,
    /// Chi-square against the exact finite-`q` law.
    pub verdict: TestVerdict,
    /// Whether the degree is large enough for that law to hold.
    pub law_applies: bool,
}

fn histogram_of(
    cfg: &McConfig,
    observe: impl Fn(&mut ChaCha8Rng) -> Result<u64> + Sync,
) -> Result<Histogram> {
    let counts = run_samples(
        cfg.samples,
        cfg.seed,
        cfg.threads,
        BTreeMap::new,
        |acc, rng| {
            *acc.entry(observe(rng)?).or_insert(0) += 1;
            Ok(())
        },
        merge_counts,
    )?;
    Ok(Histogram::from_counts(counts))
}

/// Number of rational points of random curves against `Binomial(q^2+q+1, 1/q)`.
pub fn mc_point_count(cfg: &McConfig) -> Result<DistributionResult> {
    let s = Sampler::new(cfg)?;
    let histogram = histogram_of(cfg, |rng| {
        Ok(s.zeros(&s.draw(rng)).iter().filter(|&&z| z).count() as u64)
    })?;
    let q = cfg.q as u32;
    let law = binomial_masses(q * q + q + 1, 1.0 / q as f64);
    Ok(DistributionResult {
        verdict: chi_square_gof(&histogram, &law),
        histogram,
        law_applies: cfg.d + 1 >= 2 * q,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineIntersectionResult {
    pub line: usize,
    pub histogram: Histogram,
    /// Chi-square against `Binomial(q+1, 1/q)`.
    pub verdict: TestVerdict,
    /// Distance from the empirical law to Poisson(1).
    pub tv_poisson: f64,
    /// Distance from `Binomial(q+1, 1/q)` to Poisson(1).
    pub tv_law_poisson: f64,
    /// Empirical `P(no rational point on the line)` against `(1-1/q)^(q+1)`.
    pub empty_verdict: TestVerdict,
}

/// Rational points of random curves on one fixed line.
pub fn mc_line_intersection(cfg: &McConfig, line: usize) -> Result<LineIntersectionResult> {
    let q = cfg.q as u32;
    if cfg.d < q {
        return Err(Error::DegreeTooLow { d: cfg.d, min: q });
    }
    let s = Sampler::new(cfg)?;
    if line >= s.plane.size() {
        return Err(Error::OutOfRange(format!("line index {line}")));
    }
    let pts: Vec<usize> = s.plane.line(line).incidence.iter().collect();
    let histogram = histogram_of(cfg, |rng| {
        let f = s.draw(rng);
        Ok(pts
            .iter()
            .filter(|&&p| s.eval.eval(&f, p).is_zero())
            .count() as u64)
    })?;
    let law = binomial_masses(q + 1, 1.0 / q as f64);
    let empirical: Vec<f64> = (0..=q as u64 + 1).map(|t| histogram.frequency(t)).collect();
    let poisson = poisson_masses(empirical.len());
    let tail = 1.0 - poisson.iter().sum::<f64>();
    let p0 = Proportion::new(
        histogram.counts.get(&0).copied().unwrap_or(0),
        histogram.total,
    );
    Ok(LineIntersectionResult {
        line,
        verdict: chi_square_gof(&histogram, &law),
        tv_poisson: tv_distance(&empirical, &poisson) + 0.5 * tail,
        tv_law_poisson: tv_binomial_poisson(q),
        empty_verdict: p0.within(law[0], 3.0),
        histogram,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkewLinesResult {
    pub histogram: Histogram,
    pub mean: f64,
    pub stderr: f64,
    /// `(q^2+q+1)(1-1/q)^(q+1)`
    pub expected: f64,
    pub verdict: TestVerdict,
}

/// Number of lines containing no rational point of a random curve.
pub fn mc_skew_lines(cfg: &McConfig) -> Result<SkewLinesResult> {
    let q = cfg.q as u32;
    let expected = formulas::skew_expectation_exact(q, cfg.d)?.to_f64();
    let s = Sampler::new(cfg)?;
    let histogram = histogram_of(cfg, |rng| {
        let z = s.zeros(&s.draw(rng));
        Ok((0..s.plane.size())
            .filter(|&l| s.line_hits(&z, l) == 0)
            .count() as u64)
    })?;
    let (mean, stderr) = (histogram.mean, histogram.stderr());
    Ok(SkewLinesResult {
        verdict: z_score_verdict(mean, stderr, expected, 3.0),
        histogram,
        mean,
        stderr,
        expected,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KPointLinesResult {
    pub k: u32,
    /// Mean over curves of the fraction of lines meeting the curve in exactly `k` points.
    pub estimate: f64,
    pub stderr: f64,
    /// `P(Binomial(q+1, 1/q) = k)`
    pub exact: f64,
    /// `1/(e k!)`
    pub limit: f64,
    pub verdict: TestVerdict,
}

/// Density of lines meeting a random curve in exactly `k` rational points.
pub fn mc_k_point_lines(cfg: &McConfig, k: u32) -> Result<KPointLinesResult> {
    let q = cfg.q as u32;
    if cfg.d < q {
        return Err(Error::DegreeTooLow { d: cfg.d, min: q });
    }
    let s = Sampler::new(cfg)?;
    let n = s.plane.size() as f64;
    let histogram = histogram_of(cfg, |rng| {
        let z = s.zeros(&s.draw(rng));
        Ok((0..s.plane.size())
            .filter(|&l| s.line_hits(&z, l) == k as u64)
            .count() as u64)
    })?;
    let estimate = histogram.mean / n;
    let stderr = histogram.stderr() / n;
    let exact = if k <= q + 1 {
        formulas::line_count_pmf(q, k)?.to_f64()
    } else {
        0.0
    };
    Ok(KPointLinesResult {
        k,
        estimate,
        stderr,
        exact,
        limit: formulas::k_point_line_density(k),
        verdict: z_score_verdict(estimate, stderr, exact, 3.0),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothResult {
    pub smooth: Proportion,
    /// Blocking fraction among the smooth samples.
    pub blocking_given_smooth: Proportion,
    /// `(1-1/q)(1-1/q^2)(1-1/q^3)`
    pub main_term: f64,
}

/// Smooth density and the blocking fraction among smooth curves.
pub fn mc_smooth(cfg: &McConfig) -> Result<SmoothResult> {
    let s = Sampler::new(cfg)?;
    let lines = s.plane.size();
    let (smooth, blocking) = run_samples(
        cfg.samples,
        cfg.seed,
        cfg.threads,
        || (0u64, 0u64),
        |acc, rng| {
            let f = s.draw(rng);
            if f.is_zero() || !is_smooth(&f, rng)?.smooth {
                return Ok(());
            }
            acc.0 += 1;
            let z = s.zeros(&f);
            if (0..lines).all(|l| s.line_hits(&z, l) > 0) {
                acc.1 += 1;
            }
            Ok(())
        },
        |a, b| {
            a.0 += b.0;
            a.1 += b.1;
        },
    )?;
    Ok(SmoothResult {
        smooth: Proportion::new(smooth, cfg.samples),
        blocking_given_smooth: Proportion::new(blocking, smooth),
        main_term: formulas::smooth_density_main_term(cfg.q as u32).to_f64(),
    })
}

/// Distinct roots in `F_q` of uniform polynomials of degree at most `q-1`
/// (zero included), against `Binomial(q, 1/q)`.
pub fn mc_unipoly_roots(
    q: u64,
    samples: u64,
    seed: u64,
    threads: usize,
) -> Result<DistributionResult> {
    if samples == 0 {
        return Err(Error::OutOfRange("samples must be at least 1".into()));
    }
    let spec = field_of_order(q)?;
    let elements: Vec<Fe> = spec.elements().collect();
    let counts = run_samples(
        samples,
        seed,
        threads,
        BTreeMap::new,
        |acc, rng| {
            let coeffs: Vec<Fe> = (0..q).map(|_| Fe(rng.random_range(0..q as u32))).collect();
            let roots = elements
                .iter()
                .filter(|&&x| {
                    coeffs
                        .iter()
                        .rev()
                        .fold(Fe::ZERO, |s, &c| spec.add(spec.mul(s, x), c))
                        .is_zero()
                })
                .count() as u64;
            *acc.entry(roots).or_insert(0) += 1;
            Ok(())
        },
        merge_counts,
    )?;
    let histogram = Histogram::from_counts(counts);
    let law = binomial_masses(q as u32, 1.0 / q as f64);
    Ok(DistributionResult {
        verdict: chi_square_gof(&histogram, &law),
        histogram,
        law_applies: true,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub k: u32,
    pub estimate: f64,
    /// Undefined for a single sample.
    pub stderr: Option<f64>,
    /// The same moment of the independent-points model.
    pub model: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentsResult {
    /// Point counts of the accepted smooth curves.
    pub histogram: Histogram,
    /// Total curves drawn, rejected ones included.
    pub draws: u64,
    pub moments: Vec<MomentEstimate>,
}

/// Empirical `E[((#C(F_q) - (q+1)) / sqrt(q+1))^k]` over smooth curves,
/// `k = 1..=k_max`, by rejection sampling.
pub fn mc_moments(cfg: &McConfig, k_max: u32) -> Result<MomentsResult> {
    if k_max == 0 || k_max > formulas::MAX_MOMENT {
        return Err(Error::OutOfRange(format!(
            "k_max = {k_max} outside 1..={}",
            formulas::MAX_MOMENT
        )));
    }
    let s = Sampler::new(cfg)?;
    let (counts, draws) = run_samples(
        cfg.samples,
        cfg.seed,
        cfg.threads,
        || (BTreeMap::new(), 0u64),
        |acc, rng| {
            for _ in 0..MAX_REJECTIONS {
                acc.1 += 1;
                let f = s.draw(rng);
                if f.is_zero() || !is_smooth(&f, rng)?.smooth {
                    continue;
                }
                let t = s.zeros(&f).iter().filter(|&&z| z).count() as u64;
                *acc.0.entry(t).or_insert(0) += 1;
                return Ok(());
            }
            Err(Error::RetriesExhausted(MAX_REJECTIONS))
        },
        |a, b| {
            merge_counts(&mut a.0, b.0);
            a.1 += b.1;
        },
    )?;
    let histogram = Histogram::from_counts(counts);
    let q = cfg.q as f64;
    let n = histogram.total as f64;
    let mut moments = Vec::new();
    for k in 1..=k_max {
        let vals: Vec<(f64, f64)> = histogram
            .counts
            .iter()
            .map(|(&t, &c)| {
                (
                    ((t as f64 - (q + 1.0)) / (q + 1.0).sqrt()).powi(k as i32),
                    c as f64,
                )
            })
            .collect();
        let mean = vals.iter().map(|(v, c)| v * c).sum::<f64>() / n;
        let stderr = (histogram.total > 1).then(|| {
            let var = vals
                .iter()
                .map(|(v, c)| c * (v - mean).powi(2))
                .sum::<f64>()
                / (n - 1.0);
            (var / n).sqrt()
        });
        moments.push(MomentEstimate {
            k,
            estimate: mean,
            stderr,
            model: formulas::model_moment(cfg.q as u32, k)?.to_f64(),
        });
    }
    Ok(MomentsResult {
        histogram,
        draws,
        moments,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Inverse-CDF draw from a finite law.
    fn draw_from(pmf: &[f64], rng: &mut ChaCha8Rng) -> u64 {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (i, p) in pmf.iter().enumerate() {
            acc += p;
            if u < acc {
                return i as u64;
            }
        }
        pmf.len() as u64 - 1
    }

    fn synthetic(pmf: &[f64], n: u64, seed: u64) -> Histogram {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut counts = BTreeMap::new();
        for _ in 0..n {
            *counts.entry(draw_from(pmf, &mut rng)).or_insert(0) += 1;
        }
        Histogram::from_counts(counts)
    }

    #[test]
    fn chi_square_accepts_its_own_law() {
        for (n, p) in [
            (7u32, 0.5),
            (13, 1.0 / 3.0),
            (17, 1.0 / 16.0),
            (25, 1.0 / 25.0),
        ] {
            let law = binomial_masses(n, p);
            for seed in 0..5 {
                let v = chi_square_gof(&synthetic(&law, 20_000, seed), &law);
                assert!(v.pass, "n={n} seed={seed}: {v:?}");
            }
        }
    }

    #[test]
    fn chi_square_rejects_wrong_law() {
        let law = binomial_masses(17, 1.0 / 16.0);
        let other = binomial_masses(17, 1.0 / 12.0);
        assert!(!chi_square_gof(&synthetic(&other, 20_000, 1), &law).pass);
    }

    #[test]
    fn thresholds() {
        // Known 0.999 quantiles.
        assert!((chi_square_threshold(1) - 10.828).abs() < 1e-3);
        assert!((chi_square_threshold(5) - 20.515).abs() < 1e-3);
        assert_eq!(chi_square_threshold(0), 0.0);
    }

    #[test]
    fn binomial_masses_sum_to_one() {
        for (n, p) in [(7, 0.5), (91, 1.0 / 9.0), (651, 0.04)] {
            let m = binomial_masses(n, p);
            assert!((m.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        let exact = formulas::point_count_pmf(3, 4).unwrap().to_f64();
        assert!((binomial_masses(13, 1.0 / 3.0)[4] - exact).abs() < 1e-14);
    }

    #[test]
    fn tv_decreases() {
        let tv: Vec<f64> = [4, 9, 16, 25]
            .iter()
            .map(|&q| tv_binomial_poisson(q))
            .collect();
        assert!(tv.windows(2).all(|w| w[0] > w[1]), "{tv:?}");
    }

    #[test]
    fn single_sample() {
        let r = mc_blocking_proportion(&McConfig::new(2, 3, 1, 9)).unwrap();
        assert!(r.estimate == 0.0 || r.estimate == 1.0);
        let m = mc_moments(&McConfig::new(2, 3, 1, 9), 2).unwrap();
        assert!(m.moments.iter().all(|e| e.stderr.is_none()));
    }

    #[test]
    fn point_count_below_threshold_fails() {
        let r = mc_point_count(&McConfig::new(2, 1, 2000, 3)).unwrap();
        assert!(!r.law_applies);
        assert!(!r.verdict.pass);
        let r = mc_point_count(&McConfig::new(2, 3, 20_000, 3)).unwrap();
        assert!(r.law_applies && r.verdict.pass, "{:?}", r.verdict);
    }

    #[test]
    fn thread_count_invariance() {
        let cfg = McConfig::new(3, 4, 3000, 77);
        let a = mc_point_count(&cfg.clone().with_threads(1)).unwrap();
        let b = mc_point_count(&cfg.clone().with_threads(3)).unwrap();
        assert_eq!(a, b);
        let a = mc_smooth(&McConfig::new(2, 3, 600, 5).with_threads(1)).unwrap();
        let b = mc_smooth(&McConfig::new(2, 3, 600, 5).with_threads(4)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn line_degree_guard() {
        assert!(mc_line_intersection(&McConfig::new(4, 3, 10, 1), 0).is_err());
        assert!(mc_skew_lines(&McConfig::new(4, 3, 10, 1)).is_err());
        assert!(mc_blocking_proportion(&McConfig::new(2, 3, 0, 1)).is_err());
    }

    #[test]
    fn roots_q2_exhaustive() {
        // 0 has two roots, 1 has none, t and t+1 have one each.
        let law = binomial_masses(2, 0.5);
        for (a, b) in law.iter().zip([0.25, 0.5, 0.25]) {
            assert!((a - b).abs() < 1e-15);
        }
        let r = mc_unipoly_roots(2, 4000, 1, 2).unwrap();
        assert!(r.verdict.pass);
        assert_eq!(
            r.histogram.counts.keys().copied().collect::<Vec<_>>(),
            vec![0, 1, 2]
        );
    }
}
