//! Homogeneous polynomials in `x, y, z` over a finite field, i.e. plane curves.
//!
//! A degree-`d` form has `N = (d+1)(d+2)/2` coefficients. The coefficient of
//! `x^i y^j z^(d-i-j)` sits at index `i(d+1) - i(i-1)/2 + j`, so the order is
//! lexicographic in `(i, j)` and index 0 is `z^d`.
//!
//! ```
//! use blocking_curves::gf::{field_of_order, Fe};
//! use blocking_curves::pg2::Plane;
//! use blocking_curves::poly::HomogPoly;
//!
//! let f2 = field_of_order(2).unwrap();
//! let plane = Plane::new(&f2);
//! let x = HomogPoly::monomial(&f2, 1, 1, 0, Fe::ONE);
//! assert_eq!(x.point_set(&plane).len(), 3);
//! ```

pub mod uni;

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf::{field_of_order, Fe, FieldSpec};
use crate::pg2::{Plane, PointSet, ProjLine, ProjPoint};
pub use uni::UniPoly;

/// Number of monomials of degree `d` in three variables.
pub fn monomial_count(d: u32) -> usize {
    let d = d as usize;
    (d + 1) * (d + 2) / 2
}

/// Index of `x^i y^j z^(d-i-j)`.
#[inline]
pub fn monomial_index(d: u32, i: u32, j: u32) -> usize {
    let (d, i, j) = (d as usize, i as usize, j as usize);
    debug_assert!(i + j <= d);
    i * (d + 1) - i * i.saturating_sub(1) / 2 + j
}

/// Exponents `(i, j)` of the monomial at `index`.
pub fn monomial_exponents(d: u32, index: usize) -> (u32, u32) {
    let mut start = 0;
    for i in 0..=d {
        let len = (d - i + 1) as usize;
        if index < start + len {
            return (i, (index - start) as u32);
        }
        start += len;
    }
    panic!("monomial index {index} out of range for degree {d}");
}

/// Iterator over `(index, i, j)` for all monomials of degree `d`.
pub fn monomials(d: u32) -> impl Iterator<Item = (usize, u32, u32)> {
    (0..=d)
        .flat_map(move |i| (0..=d - i).map(move |j| (i, j)))
        .enumerate()
        .map(|(k, (i, j))| (k, i, j))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
    Z,
}

#[derive(Clone, PartialEq, Eq)]
pub struct HomogPoly {
    spec: FieldSpec,
    d: u32,
    coeffs: Vec<Fe>,
}

impl fmt::Debug for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HomogPoly({})", self.to_text())
    }
}

impl fmt::Display for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, i, j) in monomials(self.d).collect::<Vec<_>>().into_iter().rev() {
            let c = self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let l = self.d - i - j;
            let mut parts = Vec::new();
            if c != Fe::ONE || i + j + l == 0 {
                parts.push(c.to_string());
            }
            for (name, e) in [("x", i), ("y", j), ("z", l)] {
                match e {
                    0 => {}
                    1 => parts.push(name.to_string()),
                    _ => parts.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl HomogPoly {
    pub fn new(spec: &FieldSpec, d: u32, coeffs: Vec<Fe>) -> Result<Self> {
        let n = monomial_count(d);
        if coeffs.len() != n {
            return Err(Error::OutOfRange(format!(
                "{} coefficients for degree {d} (expected {n})",
                coeffs.len()
            )));
        }
        if let Some(c) = coeffs.iter().find(|c| !spec.contains(**c)) {
            return Err(Error::OutOfRange(format!("coefficient {c} in {spec:?}")));
        }
        Ok(HomogPoly {
            spec: spec.clone(),
            d,
            coeffs,
        })
    }

    pub fn zero(spec: &FieldSpec, d: u32) -> Self {
        HomogPoly {
            spec: spec.clone(),
            d,
            coeffs: vec![Fe::ZERO; monomial_count(d)],
        }
    }

    /// `c x^i y^j z^(d-i-j)`.
    pub fn monomial(spec: &FieldSpec, d: u32, i: u32, j: u32, c: Fe) -> Self {
        let mut p = Self::zero(spec, d);
        p.coeffs[monomial_index(d, i, j)] = c;
        p
    }

    /// The linear form `a x + b y + c z`.
    pub fn linear(spec: &FieldSpec, abc: [Fe; 3]) -> Self {
        let mut p = Self::zero(spec, 1);
        p.coeffs[monomial_index(1, 1, 0)] = abc[0];
        p.coeffs[monomial_index(1, 0, 1)] = abc[1];
        p.coeffs[monomial_index(1, 0, 0)] = abc[2];
        p
    }

    /// Uniform over all `q^N` coefficient vectors, the zero form included.
    pub fn random<R: Rng + ?Sized>(spec: &FieldSpec, d: u32, rng: &mut R) -> Self {
        let q = spec.q();
        HomogPoly {
            spec: spec.clone(),
            d,
            coeffs: (0..monomial_count(d))
                .map(|_| Fe(rng.random_range(0..q)))
                .collect(),
        }
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Fe] {
        &mut self.coeffs
    }

    pub fn coeff(&self, i: u32, j: u32) -> Fe {
        self.coeffs[monomial_index(self.d, i, j)]
    }

    pub fn set_coeff(&mut self, i: u32, j: u32, c: Fe) {
        self.coeffs[monomial_index(self.d, i, j)] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Value at a coordinate triple.
    pub fn eval(&self, v: [Fe; 3]) -> Fe {
        let f = &self.spec;
        let d = self.d as usize;
        let powers = |a: Fe| {
            let mut p = Vec::with_capacity(d + 1);
            let mut acc = Fe::ONE;
            for _ in 0..=d {
                p.push(acc);
                acc = f.mul(acc, a);
            }
            p
        };
        let (px, py, pz) = (powers(v[0]), powers(v[1]), powers(v[2]));
        let mut s = Fe::ZERO;
        for (k, i, j) in monomials(self.d) {
            let c = self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            let m = f.mul(
                f.mul(px[i as usize], py[j as usize]),
                pz[d - (i + j) as usize],
            );
            s = f.add(s, f.mul(c, m));
        }
        s
    }

    /// Value at the normalized representative of a point.
    pub fn evaluate(&self, p: &ProjPoint) -> Fe {
        self.eval(p.coords)
    }

    /// Rational points of the curve. The zero form gives the whole plane.
    pub fn point_set(&self, plane: &Plane) -> PointSet {
        PointSet::from_indices(
            plane.size(),
            plane
                .points()
                .iter()
                .filter(|p| self.evaluate(p).is_zero())
                .map(|p| p.index),
        )
    }

    pub fn partial(&self, var: Var) -> HomogPoly {
        let f = &self.spec;
        if self.d == 0 {
            return Self::zero(f, 0);
        }
        let mut out = Self::zero(f, self.d - 1);
        for (k, i, j) in monomials(self.d) {
            let c = self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            let l = self.d - i - j;
            let (e, ni, nj) = match var {
                Var::X if i > 0 => (i, i - 1, j),
                Var::Y if j > 0 => (j, i, j - 1),
                Var::Z if l > 0 => (l, i, j),
                _ => continue,
            };
            let v = f.mul(c, f.from_int(e as i64));
            let idx = monomial_index(self.d - 1, ni, nj);
            out.coeffs[idx] = f.add(out.coeffs[idx], v);
        }
        out
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        let c = self
            .coeffs
            .iter()
            .zip(&o.coeffs)
            .map(|(&a, &b)| self.spec.add(a, b))
            .collect();
        Ok(HomogPoly {
            coeffs: c,
            ..self.clone()
        })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        let c = self
            .coeffs
            .iter()
            .zip(&o.coeffs)
            .map(|(&a, &b)| self.spec.sub(a, b))
            .collect();
        Ok(HomogPoly {
            coeffs: c,
            ..self.clone()
        })
    }

    pub fn scale(&self, c: Fe) -> Self {
        HomogPoly {
            coeffs: self.coeffs.iter().map(|&a| self.spec.mul(a, c)).collect(),
            ..self.clone()
        }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.spec != o.spec {
            return Err(Error::FieldMismatch);
        }
        let f = &self.spec;
        let mut out = Self::zero(f, self.d + o.d);
        for (ka, ia, ja) in monomials(self.d) {
            let a = self.coeffs[ka];
            if a.is_zero() {
                continue;
            }
            for (kb, ib, jb) in monomials(o.d) {
                let b = o.coeffs[kb];
                if b.is_zero() {
                    continue;
                }
                let idx = monomial_index(out.d, ia + ib, ja + jb);
                out.coeffs[idx] = f.add(out.coeffs[idx], f.mul(a, b));
            }
        }
        Ok(out)
    }

    /// Product with the linear form `a x + b y + c z`.
    pub fn mul_linear(&self, abc: [Fe; 3]) -> Self {
        let f = &self.spec;
        let [a, b, c] = abc;
        let d = self.d + 1;
        let mut out = Self::zero(f, d);
        for (k, i, j) in monomials(self.d) {
            let v = self.coeffs[k];
            if v.is_zero() {
                continue;
            }
            for (coef, ni, nj) in [(a, i + 1, j), (b, i, j + 1), (c, i, j)] {
                if !coef.is_zero() {
                    let idx = monomial_index(d, ni, nj);
                    out.coeffs[idx] = f.add(out.coeffs[idx], f.mul(coef, v));
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::monomial(&self.spec, 0, 0, 0, Fe::ONE);
        for _ in 0..e {
            acc = acc.mul(self).expect("same field");
        }
        acc
    }

    /// `F(M v)`: substitutes `x <- m[0]·v`, `y <- m[1]·v`, `z <- m[2]·v`.
    pub fn compose_linear(&self, m: &[[Fe; 3]; 3]) -> Self {
        let f = &self.spec;
        let d = self.d;
        // q_m[j] = l_y^j l_z^(m - j) for m = 0..=d.
        let one = Self::monomial(f, 0, 0, 0, Fe::ONE);
        let mut q_by_deg: Vec<Vec<HomogPoly>> = vec![vec![one.clone()]];
        for deg in 1..=d as usize {
            let prev = &q_by_deg[deg - 1];
            let mut row: Vec<HomogPoly> = prev.iter().map(|p| p.mul_linear(m[2])).collect();
            row.push(prev[deg - 1].mul_linear(m[1]));
            q_by_deg.push(row);
        }
        // F = sum_i x^i P_i(y, z); Horner in l_x.
        let p_sub = |i: u32| -> HomogPoly {
            let deg = d - i;
            let mut acc = Self::zero(f, deg);
            for j in 0..=deg {
                let c = self.coeff(i, j);
                if c.is_zero() {
                    continue;
                }
                let t = &q_by_deg[deg as usize][j as usize];
                for (a, b) in acc.coeffs.iter_mut().zip(&t.coeffs) {
                    *a = f.add(*a, f.mul(c, *b));
                }
            }
            acc
        };
        let mut r = p_sub(d);
        for i in (0..d).rev() {
            r = r.mul_linear(m[0]).add(&p_sub(i)).expect("same degree");
        }
        r
    }

    /// Restriction to a line, parametrized through its two smallest-index points.
    pub fn restrict_to_line(&self, plane: &Plane, line: &ProjLine) -> LineRestriction {
        let mut it = line.incidence.iter();
        let p0 = it.next().expect("line has points");
        let p1 = it.next().expect("line has at least two points");
        let (a, b) = (plane.point(p0).coords, plane.point(p1).coords);
        let f = &self.spec;
        // Coordinates along the line as polynomials in u: a_k + u b_k.
        let lin: Vec<Vec<Fe>> = (0..3).map(|k| vec![a[k], b[k]]).collect();
        let powers = |l: &Vec<Fe>| {
            let mut p: Vec<Vec<Fe>> = vec![vec![Fe::ONE]];
            for e in 1..=self.d as usize {
                let next = uni::mul(f, &p[e - 1], l);
                p.push(next);
            }
            p
        };
        let (px, py, pz) = (powers(&lin[0]), powers(&lin[1]), powers(&lin[2]));
        let mut acc: Vec<Fe> = Vec::new();
        for (k, i, j) in monomials(self.d) {
            let c = self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            let l = (self.d - i - j) as usize;
            let term = uni::mul(f, &uni::mul(f, &px[i as usize], &py[j as usize]), &pz[l]);
            acc = uni::add(f, &acc, &uni::scale(f, &term, &c));
        }
        LineRestriction {
            poly: UniPoly::new(f, acc),
            degree: self.d,
            base: p0,
            direction: p1,
        }
    }

    /// `x^(d-2q+2) (y^(q-1) - x^(q-1)) (z^(q-1) - x^(q-1))`, moved so that the
    /// only rational point where it does not vanish is `target`.
    pub fn homma_kim(spec: &FieldSpec, d: u32, target: &ProjPoint) -> Result<Self> {
        let q = spec.q();
        let min = 2 * q - 1;
        if d < min {
            return Err(Error::DegreeTooLow { d, min });
        }
        let e = q - 1;
        let neg1 = spec.neg(Fe::ONE);
        let mut yx = Self::monomial(spec, e, 0, e, Fe::ONE);
        yx.set_coeff(e, 0, neg1);
        let mut zx = Self::monomial(spec, e, 0, 0, Fe::ONE);
        zx.set_coeff(e, 0, neg1);
        let h = Self::monomial(spec, d - 2 * e, d - 2 * e, 0, Fe::ONE)
            .mul(&yx)?
            .mul(&zx)?;
        // M sends e1 to the target; compose with its inverse.
        let t = target.coords;
        let lead = t
            .iter()
            .position(|c| !c.is_zero())
            .expect("points are nonzero");
        let others: Vec<usize> = (0..3).filter(|&k| k != lead).collect();
        let mut m = [[Fe::ZERO; 3]; 3];
        for r in 0..3 {
            m[r][0] = t[r];
        }
        m[others[0]][1] = Fe::ONE;
        m[others[1]][2] = Fe::ONE;
        let inv = invert3(spec, &m).expect("columns are independent");
        Ok(h.compose_linear(&inv))
    }

    /// The same form with coefficients mapped into an extension field.
    pub fn embed_into(&self, target: &FieldSpec) -> Result<Self> {
        if target == &self.spec {
            return Ok(self.clone());
        }
        let table = self.spec.embedding_table(target)?;
        Ok(HomogPoly {
            spec: target.clone(),
            d: self.d,
            coeffs: self.coeffs.iter().map(|c| table[c.0 as usize]).collect(),
        })
    }

    /// `q d c0 c1 ... cN-1`.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}", self.spec.q(), self.d);
        for c in &self.coeffs {
            s.push(' ');
            s.push_str(&c.0.to_string());
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let nums: Vec<u64> = text
            .split_whitespace()
            .map(|t| {
                t.parse::<u64>()
                    .map_err(|e| Error::Parse(format!("{t:?}: {e}")))
            })
            .collect::<Result<_>>()?;
        if nums.len() < 2 {
            return Err(Error::Parse("expected `q d c0 ... cN-1`".into()));
        }
        let spec = field_of_order(nums[0])?;
        let d = u32::try_from(nums[1]).map_err(|_| Error::Parse("degree too large".into()))?;
        let coeffs = nums[2..]
            .iter()
            .map(|&c| {
                u32::try_from(c)
                    .map(Fe)
                    .map_err(|_| Error::Parse(format!("coefficient {c}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(&spec, d, coeffs)
    }

    fn check_same(&self, o: &Self) -> Result<()> {
        if self.spec != o.spec {
            return Err(Error::FieldMismatch);
        }
        if self.d != o.d {
            return Err(Error::OutOfRange(format!("degree {} vs {}", self.d, o.d)));
        }
        Ok(())
    }
}

impl FromStr for HomogPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// Inverse of a 3x3 matrix via the adjugate.
pub fn invert3(f: &FieldSpec, m: &[[Fe; 3]; 3]) -> Option<[[Fe; 3]; 3]> {
    let cof = |r: usize, c: usize| -> Fe {
        let (r1, r2) = ((r + 1) % 3, (r + 2) % 3);
        let (c1, c2) = ((c + 1) % 3, (c + 2) % 3);
        f.sub(f.mul(m[r1][c1], m[r2][c2]), f.mul(m[r1][c2], m[r2][c1]))
    };
    let det = (0..3).fold(Fe::ZERO, |s, c| f.add(s, f.mul(m[0][c], cof(0, c))));
    let inv = f.inv(det).ok()?;
    let mut out = [[Fe::ZERO; 3]; 3];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, v) in row.iter_mut().enumerate() {
            *v = f.mul(cof(c, r), inv);
        }
    }
    Some(out)
}

/// A curve restricted to a line `{P0 + u P1}`; `u = ∞` stands for `P1`.
#[derive(Clone, Debug)]
pub struct LineRestriction {
    pub poly: UniPoly,
    pub degree: u32,
    /// Point index at `u = 0`.
    pub base: usize,
    /// Point index at `u = ∞`.
    pub direction: usize,
}

impl LineRestriction {
    /// True iff the whole line lies on the curve.
    pub fn is_identically_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// The point at infinity is a zero iff the `u^d` coefficient vanishes.
    pub fn vanishes_at_infinity(&self) -> bool {
        self.poly.degree().is_none_or(|k| k < self.degree as usize)
    }

    /// Number of rational points of the curve on the line.
    pub fn rational_zero_count(&self) -> usize {
        let q = self.poly.spec().q() as usize;
        if self.is_identically_zero() {
            return q + 1;
        }
        self.poly.count_distinct_roots() + usize::from(self.vanishes_at_infinity())
    }
}

/// Monomial values at every point of a plane, for evaluating many forms of
/// one degree quickly.
#[derive(Clone, Debug)]
pub struct PointEvaluator {
    spec: FieldSpec,
    d: u32,
    n_monomials: usize,
    /// Row-major: point index, then monomial index.
    values: Vec<Fe>,
}

impl PointEvaluator {
    pub fn new(plane: &Plane, d: u32) -> Self {
        let spec = plane.spec().clone();
        let n_monomials = monomial_count(d);
        let mut values = Vec::with_capacity(plane.size() * n_monomials);
        for p in plane.points() {
            for (k, _, _) in monomials(d) {
                let mut e = HomogPoly::zero(&spec, d);
                e.coeffs[k] = Fe::ONE;
                values.push(e.evaluate(p));
            }
        }
        PointEvaluator {
            spec,
            d,
            n_monomials,
            values,
        }
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    /// Monomial values at one point.
    pub fn row(&self, point: usize) -> &[Fe] {
        &self.values[point * self.n_monomials..(point + 1) * self.n_monomials]
    }

    /// `F(P)` from a raw coefficient slice.
    #[inline]
    pub fn eval_coeffs(&self, coeffs: &[Fe], point: usize) -> Fe {
        let f = &self.spec;
        self.row(point)
            .iter()
            .zip(coeffs)
            .fold(Fe::ZERO, |s, (&m, &c)| {
                if c.is_zero() {
                    s
                } else {
                    f.add(s, f.mul(m, c))
                }
            })
    }

    pub fn eval(&self, poly: &HomogPoly, point: usize) -> Fe {
        self.eval_coeffs(&poly.coeffs, point)
    }

    pub fn zero_set(&self, poly: &HomogPoly) -> PointSet {
        let n = self.values.len() / self.n_monomials;
        PointSet::from_indices(n, (0..n).filter(|&p| self.eval(poly, p).is_zero()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::field_of_order;
    use proptest::prelude::{any, prop_assert_eq, proptest};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(q: u64) -> FieldSpec {
        field_of_order(q).unwrap()
    }

    #[test]
    fn monomial_index_roundtrip() {
        for d in 0..=30 {
            let n = monomial_count(d);
            let mut seen = vec![false; n];
            for (k, i, j) in monomials(d) {
                assert_eq!(monomial_index(d, i, j), k);
                assert_eq!(monomial_exponents(d, k), (i, j));
                seen[k] = true;
            }
            assert!(seen.iter().all(|&s| s));
        }
        assert_eq!(monomial_index(3, 0, 0), 0);
    }

    #[test]
    fn evaluate_examples() {
        let f2 = f(2);
        let plane = Plane::new(&f2);
        let x = HomogPoly::monomial(&f2, 1, 1, 0, Fe::ONE);
        let zeros: Vec<[Fe; 3]> = x
            .point_set(&plane)
            .iter()
            .map(|i| plane.point(i).coords)
            .collect();
        assert_eq!(
            zeros,
            vec![
                [Fe(0), Fe(0), Fe(1)],
                [Fe(0), Fe(1), Fe(0)],
                [Fe(0), Fe(1), Fe(1)]
            ]
        );
        let z3 = HomogPoly::zero(&f2, 3);
        assert_eq!(z3.point_set(&plane).len(), 7);
        // x(x+y)(x+z)
        let g = HomogPoly::linear(&f2, [Fe(1), Fe(0), Fe(0)])
            .mul_linear([Fe(1), Fe(1), Fe(0)])
            .mul_linear([Fe(1), Fe(0), Fe(1)]);
        let nonzero: Vec<usize> = (0..7)
            .filter(|&i| !g.evaluate(plane.point(i)).is_zero())
            .collect();
        assert_eq!(
            nonzero,
            vec![plane.point_index([Fe(1), Fe(0), Fe(0)]).unwrap()]
        );
    }

    #[test]
    fn homma_kim_examples() {
        let f2 = f(2);
        let plane = Plane::new(&f2);
        let e1 = plane.point(plane.point_index([Fe(1), Fe(0), Fe(0)]).unwrap());
        let hk = HomogPoly::homma_kim(&f2, 3, e1).unwrap();
        let expected = HomogPoly::linear(&f2, [Fe(1), Fe(0), Fe(0)])
            .mul_linear([Fe(1), Fe(1), Fe(0)])
            .mul_linear([Fe(1), Fe(0), Fe(1)]);
        assert_eq!(hk, expected);
        assert_eq!(hk.point_set(&plane).len(), 6);
        assert_eq!(
            HomogPoly::homma_kim(&f2, 2, e1).unwrap_err(),
            Error::DegreeTooLow { d: 2, min: 3 }
        );
        let f3 = f(3);
        let plane3 = Plane::new(&f3);
        for p in plane3.points() {
            let hk = HomogPoly::homma_kim(&f3, 5, p).unwrap();
            let zs = hk.point_set(&plane3);
            assert_eq!(zs.len(), 12);
            assert!(!zs.contains(p.index));
        }
    }

    #[test]
    fn partial_examples() {
        let f3 = f(3);
        let x3 = HomogPoly::monomial(&f3, 3, 3, 0, Fe::ONE);
        assert!(x3.partial(Var::X).is_zero());
        let f2 = f(2);
        let mut c = HomogPoly::monomial(&f2, 2, 2, 0, Fe::ONE);
        c.set_coeff(0, 1, Fe::ONE); // + yz
        assert_eq!(
            c.partial(Var::Y),
            HomogPoly::monomial(&f2, 1, 0, 0, Fe::ONE)
        );
    }

    #[test]
    fn euler_relation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for q in [2u64, 3, 4, 5, 7, 9] {
            let k = f(q);
            for d in 1..6 {
                let p = HomogPoly::random(&k, d, &mut rng);
                let lhs = p
                    .partial(Var::X)
                    .mul_linear([Fe(1), Fe(0), Fe(0)])
                    .add(&p.partial(Var::Y).mul_linear([Fe(0), Fe(1), Fe(0)]))
                    .unwrap()
                    .add(&p.partial(Var::Z).mul_linear([Fe(0), Fe(0), Fe(1)]))
                    .unwrap();
                assert_eq!(lhs, p.scale(k.from_int(d as i64)));
            }
        }
    }

    #[test]
    fn restriction_counts_match_point_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for q in [2u64, 3, 4, 5] {
            let k = f(q);
            let plane = Plane::new(&k);
            for _ in 0..100 {
                let d = rng.random_range(1..6);
                let p = HomogPoly::random(&k, d, &mut rng);
                let zs = p.point_set(&plane);
                for line in plane.lines() {
                    let r = p.restrict_to_line(&plane, line);
                    assert_eq!(
                        r.rational_zero_count(),
                        zs.intersection(&line.incidence).len()
                    );
                    // A nonzero binary form of degree d <= q has at most d < q + 1 zeros.
                    if r.is_identically_zero() || d <= q as u32 {
                        assert_eq!(r.is_identically_zero(), line.incidence.is_subset(&zs));
                    }
                }
            }
        }
        // x on z = 0: only [0:1:0].
        let f2 = f(2);
        let plane = Plane::new(&f2);
        let z0 = plane.line(plane.line_index([Fe(0), Fe(0), Fe(1)]).unwrap());
        let x = HomogPoly::monomial(&f2, 1, 1, 0, Fe::ONE);
        let r = x.restrict_to_line(&plane, z0);
        assert_eq!(r.rational_zero_count(), 1);
    }

    #[test]
    fn random_poly_uniform_and_deterministic() {
        let k = f(2);
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut counts = [0u32; 8];
        let n = 100_000;
        for _ in 0..n {
            let p = HomogPoly::random(&k, 1, &mut rng);
            let idx = p
                .coeffs()
                .iter()
                .enumerate()
                .map(|(i, c)| (c.0 as usize) << i)
                .sum::<usize>();
            counts[idx] += 1;
        }
        let (mean, sd) = (
            n as f64 / 8.0,
            (n as f64 * (1.0 / 8.0) * (7.0 / 8.0)).sqrt(),
        );
        assert!(
            counts.iter().all(|&c| (c as f64 - mean).abs() < 3.0 * sd),
            "{counts:?}"
        );

        let a = HomogPoly::random(&f(9), 4, &mut ChaCha8Rng::seed_from_u64(1));
        let b = HomogPoly::random(&f(9), 4, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(a, b);

        let k3 = f(3);
        let plane = Plane::new(&k3);
        let p0 = plane.point(4);
        let trials = 30_000;
        let hits = (0..trials)
            .filter(|_| HomogPoly::random(&k3, 2, &mut rng).evaluate(p0).is_zero())
            .count();
        let sd = (trials as f64 * (1.0 / 3.0) * (2.0 / 3.0)).sqrt();
        assert!((hits as f64 - trials as f64 / 3.0).abs() < 3.0 * sd);
    }

    #[test]
    fn text_roundtrip() {
        let k = f(4);
        let p = HomogPoly::random(&k, 3, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(HomogPoly::parse(&p.to_text()).unwrap(), p);
        assert!(HomogPoly::parse("4 2 1 2 3").is_err());
        assert!(HomogPoly::parse("4 1 0 0 4").is_err());
        assert!(HomogPoly::parse("6 1 0 0 1").is_err());
        assert_eq!(HomogPoly::monomial(&k, 2, 1, 1, Fe(3)).to_string(), "3*x*y");
    }

    #[test]
    fn compose_matches_pointwise_substitution() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for q in [2u64, 3, 4, 7, 8] {
            let k = f(q);
            for _ in 0..20 {
                let d = rng.random_range(0..7);
                let p = HomogPoly::random(&k, d, &mut rng);
                let m: [[Fe; 3]; 3] = std::array::from_fn(|_| {
                    std::array::from_fn(|_| Fe(rng.random_range(0..k.q())))
                });
                let g = p.compose_linear(&m);
                for _ in 0..10 {
                    let v: [Fe; 3] = std::array::from_fn(|_| Fe(rng.random_range(0..k.q())));
                    let mv = [0, 1, 2].map(|r| crate::pg2::dot(&k, m[r], v));
                    assert_eq!(g.eval(v), p.eval(mv));
                }
            }
        }
    }

    #[test]
    fn point_evaluator_agrees() {
        let k = f(5);
        let plane = Plane::new(&k);
        let ev = PointEvaluator::new(&plane, 4);
        let p = HomogPoly::random(&k, 4, &mut ChaCha8Rng::seed_from_u64(8));
        assert_eq!(ev.zero_set(&p), p.point_set(&plane));
    }

    proptest! {
        #[test]
        fn zero_loci_multiply(seed in any::<u64>(), qi in 0usize..4, da in 1u32..4, db in 1u32..4) {
            let q = [2u64, 3, 4, 5][qi];
            let k = f(q);
            let plane = Plane::new(&k);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = HomogPoly::random(&k, da, &mut rng);
            let b = HomogPoly::random(&k, db, &mut rng);
            let prod = a.mul(&b).unwrap();
            prop_assert_eq!(prod.point_set(&plane), a.point_set(&plane).union(&b.point_set(&plane)));
        }

        #[test]
        fn restriction_is_linear(seed in any::<u64>(), d in 1u32..5, line in 0usize..13) {
            let k = f(3);
            let plane = Plane::new(&k);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = HomogPoly::random(&k, d, &mut rng);
            let b = HomogPoly::random(&k, d, &mut rng);
            let c = Fe(rng.random_range(0..3));
            let l = plane.line(line);
            let lhs = a.add(&b.scale(c)).unwrap().restrict_to_line(&plane, l).poly;
            let rhs = a.restrict_to_line(&plane, l).poly.add(&b.restrict_to_line(&plane, l).poly.scale(c));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
