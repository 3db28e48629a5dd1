//! Deciding whether a plane curve `F = 0` is smooth over the algebraic closure.
//!
//! A point is singular when `F`, `F_x`, `F_y` and `F_z` all vanish there. `F`
//! is kept among the generators because the Euler relation
//! `x F_x + y F_y + z F_z = d F` says nothing when `p | d`.
//!
//! [`is_smooth_exact`] works in three stages:
//!
//! 1. On the line `z = 0` the generators restrict to binary forms, and they
//!    share a zero there iff the gcd of those forms is nonconstant.
//! 2. If they do not, every common zero lies in the chart `z = 1` and there
//!    are finitely many (a curve of common zeros would meet `z = 0`). A random
//!    change of the affine coordinates `(x, y) = A (u, v)` makes the
//!    generators monic in `v` up to a constant.
//! 3. Resultants in `v` against a pivot generator vanish at the `u`-coordinate
//!    of every common zero. Their gcd `h` is factored, and for each irreducible
//!    factor `p` the generators are tested for a common `v`-root over
//!    `B[t]/(p)`.
//!
//! [`is_smooth_oracle`] enumerates points of `P^2(F_{q^m})` instead and is used
//! as ground truth for small inputs.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Fe, FieldSpec, TABLE_LIMIT};
use crate::pg2::{normalize, plane_size, triple_at};
use crate::poly::uni::{self, QuotientField, UniPoly};
use crate::poly::{HomogPoly, Var};

/// Coordinate changes tried before giving up.
pub const MAX_ATTEMPTS: u32 = 64;
/// Attempts made over the ground field before moving to an extension.
pub const GROUND_FIELD_ATTEMPTS: u32 = 8;
/// Bound on `q^(3 m_max)` for the enumeration oracle.
pub const ORACLE_LIMIT: u64 = 1 << 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ExactElimination,
    OracleEnumeration,
}

/// A singular point with coordinates in `F_{q^m}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub extension_degree: u32,
    pub field: FieldSpec,
    pub point: [Fe; 3],
}

impl Serialize for Witness {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            extension_degree: u32,
            field_order: u64,
            point: [u32; 3],
        }
        Wire {
            extension_degree: self.extension_degree,
            field_order: self.field.q() as u64,
            point: self.point.map(|c| c.0),
        }
        .serialize(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmoothnessVerdict {
    pub smooth: bool,
    pub witness: Option<Witness>,
    pub method: Method,
}

impl SmoothnessVerdict {
    fn smooth(method: Method) -> Self {
        SmoothnessVerdict {
            smooth: true,
            witness: None,
            method,
        }
    }

    fn singular(witness: Option<Witness>, method: Method) -> Self {
        SmoothnessVerdict {
            smooth: false,
            witness,
            method,
        }
    }
}

fn generators(f: &HomogPoly) -> Vec<HomogPoly> {
    [
        f.clone(),
        f.partial(Var::X),
        f.partial(Var::Y),
        f.partial(Var::Z),
    ]
    .into_iter()
    .filter(|g| !g.is_zero())
    .collect()
}

/// Checks that a witness satisfies `F = F_x = F_y = F_z = 0`.
pub fn verify_witness(f: &HomogPoly, w: &Witness) -> bool {
    if w.point.iter().all(|c| c.is_zero()) || !f.spec().is_subfield_of(&w.field) {
        return false;
    }
    [
        f.clone(),
        f.partial(Var::X),
        f.partial(Var::Y),
        f.partial(Var::Z),
    ]
    .iter()
    .all(|g| {
        g.embed_into(&w.field)
            .is_ok_and(|g| g.eval(w.point).is_zero())
    })
}

/// Exact decision by elimination; see the module docs.
///
/// Fails with [`Error::RetriesExhausted`] if no usable coordinate change is
/// found; callers can then fall back to [`is_smooth_oracle`].
pub fn is_smooth_exact<R: Rng + ?Sized>(f: &HomogPoly, rng: &mut R) -> Result<SmoothnessVerdict> {
    const M: Method = Method::ExactElimination;
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let gens = generators(f);
    if gens.iter().any(|g| g.degree() == 0) {
        return Ok(SmoothnessVerdict::smooth(M));
    }
    if let Some(v) = line_at_infinity(f.spec(), &gens, rng)? {
        return Ok(v);
    }
    let spec = f.spec();
    let d = f.degree();
    for attempt in 0..MAX_ATTEMPTS {
        let base = if attempt < GROUND_FIELD_ATTEMPTS {
            spec.clone()
        } else {
            wide_base(spec, d)?
        };
        if let Some(v) = eliminate(spec, &gens, &base, rng)? {
            return Ok(v);
        }
    }
    Err(Error::RetriesExhausted(MAX_ATTEMPTS))
}

/// Ground truth by enumerating `P^2(F_{q^m})` for `m = 1..=m_max`.
///
/// Exact when `m_max >= (d-1)^2`: the singular points of a curve with
/// isolated singularities number at most `(d-1)^2`, so each Frobenius orbit
/// among them is defined over such an extension, and curves with a repeated
/// component have singular points over small fields in the degrees used here.
pub fn is_smooth_oracle(f: &HomogPoly, m_max: u32) -> Result<SmoothnessVerdict> {
    const M: Method = Method::OracleEnumeration;
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let d = f.degree();
    let need = (d.saturating_sub(1)).pow(2).max(1);
    if m_max < need {
        return Err(Error::OutOfRange(format!(
            "m_max = {m_max} is below (d-1)^2 = {need}"
        )));
    }
    let spec = f.spec();
    let cost = (spec.q() as u64).checked_pow(3 * m_max);
    if cost.is_none_or(|c| c > ORACLE_LIMIT) {
        return Err(Error::SizeGuard(format!(
            "q^(3 m_max) = {}^{} exceeds 2^26",
            spec.q(),
            3 * m_max
        )));
    }
    let gens = generators(f);
    if gens.iter().any(|g| g.degree() == 0) {
        return Ok(SmoothnessVerdict::smooth(M));
    }
    for m in 1..=m_max {
        let e = spec.extension(m)?;
        let lifted: Vec<HomogPoly> = gens
            .iter()
            .map(|g| g.embed_into(&e))
            .collect::<Result<_>>()?;
        for idx in 0..plane_size(e.q()) {
            let pt = triple_at(e.q(), idx);
            if lifted.iter().all(|g| g.eval(pt).is_zero()) {
                return Ok(SmoothnessVerdict::singular(
                    Some(Witness {
                        extension_degree: m,
                        field: e,
                        point: pt,
                    }),
                    M,
                ));
            }
        }
    }
    Ok(SmoothnessVerdict::smooth(M))
}

/// Exact decision with a fallback to the oracle when elimination gives up.
pub fn is_smooth<R: Rng + ?Sized>(f: &HomogPoly, rng: &mut R) -> Result<SmoothnessVerdict> {
    match is_smooth_exact(f, rng) {
        Err(Error::RetriesExhausted(_)) => {
            let d = f.degree();
            is_smooth_oracle(f, d.saturating_sub(1).pow(2).max(1))
        }
        other => other,
    }
}

/// Smallest extension with enough directions for a regular coordinate change.
fn wide_base(spec: &FieldSpec, d: u32) -> Result<FieldSpec> {
    let mut e = 2;
    while (spec.q() as u64).pow(e) <= 4 * d as u64
        && (spec.q() as u64).pow(e + 1) <= TABLE_LIMIT as u64
    {
        e += 1;
    }
    spec.extension(e)
}

/// Stage 1: common zeros on `z = 0`.
fn line_at_infinity<R: Rng + ?Sized>(
    spec: &FieldSpec,
    gens: &[HomogPoly],
    rng: &mut R,
) -> Result<Option<SmoothnessVerdict>> {
    const M: Method = Method::ExactElimination;
    let e1 = [Fe::ONE, Fe::ZERO, Fe::ZERO];
    let rational = |point| Witness {
        extension_degree: 1,
        field: spec.clone(),
        point,
    };
    // Binary form of g on z = 0, dehomogenized at y = 1: sum_i c(i, D-i) x^i.
    let forms: Vec<Vec<Fe>> = gens
        .iter()
        .map(|g| {
            let d = g.degree();
            let mut c: Vec<Fe> = (0..=d).map(|i| g.coeff(i, d - i)).collect();
            uni::trim(spec, &mut c);
            c
        })
        .filter(|c| !c.is_empty())
        .collect();
    if forms.is_empty() {
        // The whole line z = 0 is singular.
        return Ok(Some(SmoothnessVerdict::singular(Some(rational(e1)), M)));
    }
    if gens.iter().all(|g| g.eval(e1).is_zero()) {
        return Ok(Some(SmoothnessVerdict::singular(Some(rational(e1)), M)));
    }
    let mut g = forms[0].clone();
    for c in &forms[1..] {
        g = uni::gcd(spec, &g, c);
    }
    if g.len() <= 1 {
        return Ok(None);
    }
    // A root r of the gcd gives the singular point [r : 1 : 0].
    let witness = smallest_factor_root(&UniPoly::new(spec, g), rng)?.map(|(w, r)| Witness {
        extension_degree: w.n() / spec.n(),
        point: [r, Fe::ONE, Fe::ZERO],
        field: w,
    });
    Ok(Some(SmoothnessVerdict::singular(witness, M)))
}

/// A root of `p`'s lowest-degree irreducible factor, in the smallest field
/// containing one, when that field has at most [`TABLE_LIMIT`] elements.
fn smallest_factor_root<R: Rng + ?Sized>(
    p: &UniPoly,
    rng: &mut R,
) -> Result<Option<(FieldSpec, Fe)>> {
    let spec = p.spec();
    let factors = match p.factor(rng) {
        Ok(f) => f,
        Err(Error::RetriesExhausted(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let Some((g, _)) = factors.first() else {
        return Ok(None);
    };
    let e = g.degree().unwrap_or(1) as u32;
    if (spec.q() as u64).pow(e) > TABLE_LIMIT as u64 {
        return Ok(None);
    }
    let w = spec.extension(e)?;
    let table = spec.embedding_table(&w)?;
    let lifted: Vec<Fe> = g.coeffs().iter().map(|c| table[c.0 as usize]).collect();
    Ok(w.elements()
        .find(|x| uni::eval(&w, &lifted, x).is_zero())
        .map(|r| (w, r)))
}

/// A polynomial in `u, v`, stored by powers of `v` with coefficients in `B[u]`.
#[derive(Clone, Debug)]
struct Bivar {
    by_v: Vec<Vec<Fe>>,
    total_degree: usize,
}

impl Bivar {
    /// `G(u, v, 1)`.
    fn dehomogenize(g: &HomogPoly) -> Bivar {
        let spec = g.spec();
        let d = g.degree();
        let mut by_v = vec![vec![Fe::ZERO; d as usize + 1]; d as usize + 1];
        let mut total = 0;
        for (k, i, j) in crate::poly::monomials(d) {
            let c = g.coeffs()[k];
            if !c.is_zero() {
                by_v[j as usize][i as usize] = c;
                total = total.max((i + j) as usize);
            }
        }
        for row in by_v.iter_mut() {
            uni::trim(spec, row);
        }
        while by_v.last().is_some_and(|r| r.is_empty()) {
            by_v.pop();
        }
        Bivar {
            by_v,
            total_degree: total,
        }
    }

    fn v_degree(&self) -> usize {
        self.by_v.len().saturating_sub(1)
    }

    /// The `v^D` coefficient is a nonzero constant, `D` the total degree.
    fn is_regular(&self) -> bool {
        self.v_degree() == self.total_degree && self.by_v.last().is_some_and(|c| c.len() == 1)
    }

    fn is_nonzero_constant(&self) -> bool {
        self.total_degree == 0 && !self.by_v.is_empty()
    }

    fn map(&self, table: &[Fe]) -> Bivar {
        Bivar {
            by_v: self
                .by_v
                .iter()
                .map(|r| r.iter().map(|c| table[c.0 as usize]).collect())
                .collect(),
            total_degree: self.total_degree,
        }
    }

    /// The polynomial in `v` obtained by fixing `u`.
    fn at_u(&self, k: &FieldSpec, u: Fe) -> Vec<Fe> {
        let mut out: Vec<Fe> = self.by_v.iter().map(|r| uni::eval(k, r, &u)).collect();
        uni::trim(k, &mut out);
        out
    }

    fn combine(k: &FieldSpec, parts: &[(Fe, &Bivar)]) -> Bivar {
        let len = parts.iter().map(|(_, b)| b.by_v.len()).max().unwrap_or(0);
        let mut by_v: Vec<Vec<Fe>> = vec![Vec::new(); len];
        let mut total = 0;
        for (c, b) in parts {
            for (j, r) in b.by_v.iter().enumerate() {
                by_v[j] = uni::add(k, &by_v[j], &uni::scale(k, r, c));
            }
            total = total.max(b.total_degree);
        }
        while by_v.last().is_some_and(|r| r.is_empty()) {
            by_v.pop();
        }
        Bivar {
            by_v,
            total_degree: total,
        }
    }
}

/// `Res_v(pivot, other)` as a polynomial in `u`, by evaluation at enough
/// points of an extension `E` and interpolation. The pivot must be regular;
/// `other` is treated with its formal `v`-degree.
fn resultant_v(base: &FieldSpec, pivot: &Bivar, other: &Bivar) -> Result<Vec<Fe>> {
    let bound = pivot.total_degree * other.total_degree;
    let npts = bound + 1;
    let mut m = 1;
    while (base.q() as usize).pow(m) < npts {
        m += 1;
    }
    let e = base.extension(m)?;
    let (up, uo) = if m == 1 {
        (pivot.clone(), other.clone())
    } else {
        let t = base.embedding_table(&e)?;
        (pivot.map(&t), other.map(&t))
    };
    let formal_n = other.v_degree();
    let lead = up
        .by_v
        .last()
        .and_then(|c| c.first())
        .copied()
        .unwrap_or(Fe::ONE);
    let xs: Vec<Fe> = (0..npts as u32).map(Fe).collect();
    let ys: Vec<Fe> = xs
        .iter()
        .map(|&u| {
            let a = up.at_u(&e, u);
            let b = uo.at_u(&e, u);
            if b.is_empty() {
                return Fe::ZERO;
            }
            // Res_{m,n}(A, B) = lc(A)^(n - deg B) Res(A, B).
            let drop = (formal_n - (b.len() - 1)) as u64;
            e.mul(e.pow(lead, drop), uni::resultant(&e, &a, &b))
        })
        .collect();
    let coeffs = interpolate(&e, &xs, &ys);
    if m == 1 {
        return Ok(coeffs);
    }
    let table = base.embedding_table(&e)?;
    let mut back = vec![None; e.q() as usize];
    for (i, t) in table.iter().enumerate() {
        back[t.0 as usize] = Some(Fe(i as u32));
    }
    Ok(coeffs
        .iter()
        .map(|c| back[c.0 as usize].expect("resultant coefficients lie in the base field"))
        .collect())
}

/// Newton interpolation through `(xs[i], ys[i])`.
fn interpolate(k: &FieldSpec, xs: &[Fe], ys: &[Fe]) -> Vec<Fe> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = k.sub(dd[i], dd[i - 1]);
            let den = k.sub(xs[i], xs[i - level]);
            dd[i] = k.div(num, den).expect("distinct nodes");
        }
    }
    let mut out: Vec<Fe> = vec![dd[n - 1]];
    for i in (0..n - 1).rev() {
        // out = out * (t - xs[i]) + dd[i]
        out = uni::mul(k, &out, &[k.neg(xs[i]), Fe::ONE]);
        out = uni::add(k, &out, &[dd[i]]);
    }
    uni::trim(k, &mut out);
    out
}

fn random_invertible<R: Rng + ?Sized>(k: &FieldSpec, rng: &mut R) -> [[Fe; 3]; 3] {
    loop {
        let mut r = || Fe(rng.random_range(0..k.q()));
        let (a, b, c, d) = (r(), r(), r(), r());
        if !k.sub(k.mul(a, d), k.mul(b, c)).is_zero() {
            return [
                [a, b, Fe::ZERO],
                [c, d, Fe::ZERO],
                [Fe::ZERO, Fe::ZERO, Fe::ONE],
            ];
        }
    }
}

/// One coordinate change and elimination. `None` asks for another attempt.
fn eliminate<R: Rng + ?Sized>(
    spec: &FieldSpec,
    gens: &[HomogPoly],
    base: &FieldSpec,
    rng: &mut R,
) -> Result<Option<SmoothnessVerdict>> {
    const M: Method = Method::ExactElimination;
    let a = random_invertible(base, rng);
    let mut g = Vec::with_capacity(gens.len());
    for h in gens {
        g.push(Bivar::dehomogenize(&h.embed_into(base)?.compose_linear(&a)));
    }
    if g.iter().any(|b| b.is_nonzero_constant()) {
        return Ok(Some(SmoothnessVerdict::smooth(M)));
    }
    if !g.iter().all(|b| b.is_regular()) {
        return Ok(None);
    }
    let Some(h) = eliminant(base, &g, rng)? else {
        return Ok(None);
    };
    if h.len() <= 1 {
        return Ok(Some(SmoothnessVerdict::smooth(M)));
    }
    let factors = match UniPoly::new(base, h).factor(rng) {
        Ok(f) => f,
        Err(Error::RetriesExhausted(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    for (p, _) in factors {
        let k = QuotientField::new(base, p.coeffs());
        let over_k: Vec<Vec<Vec<Fe>>> = g
            .iter()
            .map(|b| {
                let mut r: Vec<Vec<Fe>> = b.by_v.iter().map(|c| k.reduce(c)).collect();
                uni::trim(&k, &mut r);
                r
            })
            .collect();
        let mut common = over_k[0].clone();
        for r in &over_k[1..] {
            common = uni::gcd(&k, &common, r);
        }
        if common.len() > 1 {
            let witness = affine_witness(spec, base, &a, &p, &g, rng)?;
            return Ok(Some(SmoothnessVerdict::singular(witness, M)));
        }
    }
    Ok(Some(SmoothnessVerdict::smooth(M)))
}

/// gcd of the resultants against a pivot, or `None` if every choice gives
/// identically zero resultants.
fn eliminant<R: Rng + ?Sized>(
    base: &FieldSpec,
    g: &[Bivar],
    rng: &mut R,
) -> Result<Option<Vec<Fe>>> {
    let fold = |h: Option<Vec<Fe>>, r: Vec<Fe>| -> Option<Vec<Fe>> {
        if r.is_empty() {
            return h;
        }
        Some(match h {
            None => uni::monic(base, &r),
            Some(h) => uni::gcd(base, &h, &r),
        })
    };
    for pivot in 0..g.len() {
        let mut h = None;
        for (i, other) in g.iter().enumerate() {
            if i == pivot {
                continue;
            }
            h = fold(h, resultant_v(base, &g[pivot], other)?);
            if h.as_ref().is_some_and(|h| h.len() <= 1) {
                return Ok(h);
            }
        }
        if h.is_some() {
            return Ok(h);
        }
    }
    // Every pair shares a factor; random combinations of the others usually do not.
    let mut h = None;
    for _ in 0..4 {
        let parts: Vec<(Fe, &Bivar)> = g[1..]
            .iter()
            .map(|b| (Fe(rng.random_range(0..base.q())), b))
            .collect();
        let combo = Bivar::combine(base, &parts);
        if combo.by_v.is_empty() {
            continue;
        }
        h = fold(h, resultant_v(base, &g[0], &combo)?);
        if h.as_ref().is_some_and(|h| h.len() <= 1) {
            break;
        }
    }
    Ok(h)
}

/// Recovers a singular point `(u0, v0)` over a small extension, mapped back
/// through the coordinate change.
fn affine_witness<R: Rng + ?Sized>(
    spec: &FieldSpec,
    base: &FieldSpec,
    a: &[[Fe; 3]; 3],
    p: &UniPoly,
    g: &[Bivar],
    rng: &mut R,
) -> Result<Option<Witness>> {
    let Some((w, u0)) = smallest_factor_root(p, rng)? else {
        return Ok(None);
    };
    let t = base.embedding_table(&w)?;
    let in_v: Vec<Vec<Fe>> = g.iter().map(|b| b.map(&t).at_u(&w, u0)).collect();
    let mut common = in_v[0].clone();
    for r in &in_v[1..] {
        common = uni::gcd(&w, &common, r);
    }
    if common.len() <= 1 {
        return Ok(None);
    }
    let Some((w2, v0)) = smallest_factor_root(&UniPoly::new(&w, common), rng)? else {
        return Ok(None);
    };
    let t2 = base.embedding_table(&w2)?;
    let u0 = w.embed(u0, &w2)?;
    let e = |c: Fe| t2[c.0 as usize];
    let x = w2.add(w2.mul(e(a[0][0]), u0), w2.mul(e(a[0][1]), v0));
    let y = w2.add(w2.mul(e(a[1][0]), u0), w2.mul(e(a[1][1]), v0));
    let point = normalize(&w2, [x, y, Fe::ONE]).expect("z = 1");
    Ok(Some(Witness {
        extension_degree: w2.n() / spec.n(),
        field: w2,
        point,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::field_of_order;
    use crate::poly::monomial_count;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn poly(q: u64, d: u32, terms: &[(u32, u32, u32)]) -> HomogPoly {
        let f = field_of_order(q).unwrap();
        let mut p = HomogPoly::zero(&f, d);
        for &(c, i, j) in terms {
            p.set_coeff(i, j, Fe(c));
        }
        p
    }

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(17)
    }

    #[test]
    fn node_at_origin() {
        let f = poly(3, 2, &[(1, 1, 1)]); // xy
        let v = is_smooth_exact(&f, &mut rng()).unwrap();
        assert!(!v.smooth);
        let w = v.witness.unwrap();
        assert!(verify_witness(&f, &w));
        assert_eq!(w.point, [Fe(0), Fe(0), Fe(1)]);
    }

    #[test]
    fn double_line_is_singular() {
        for q in [2u64, 3, 4, 5, 7] {
            let f = poly(q, 2, &[(1, 2, 0)]);
            let v = is_smooth_exact(&f, &mut rng()).unwrap();
            assert!(!v.smooth);
            assert!(verify_witness(&f, v.witness.as_ref().unwrap()));
        }
    }

    #[test]
    fn conic_in_characteristic_two() {
        let f = poly(2, 2, &[(1, 2, 0), (1, 0, 1)]); // x^2 + yz
        assert!(is_smooth_exact(&f, &mut rng()).unwrap().smooth);
        assert!(is_smooth_oracle(&f, 1).unwrap().smooth);
    }

    #[test]
    fn lines_are_smooth() {
        let mut r = rng();
        for q in [2u64, 3, 4] {
            let f = field_of_order(q).unwrap();
            for _ in 0..20 {
                let l = HomogPoly::random(&f, 1, &mut r);
                if l.is_zero() {
                    continue;
                }
                assert!(is_smooth_exact(&l, &mut r).unwrap().smooth);
                assert!(is_smooth_oracle(&l, 1).unwrap().smooth);
            }
        }
    }

    #[test]
    fn zero_polynomial_rejected() {
        let z = poly(2, 3, &[]);
        assert_eq!(
            is_smooth_exact(&z, &mut rng()).unwrap_err(),
            Error::ZeroPolynomial
        );
        assert_eq!(is_smooth_oracle(&z, 4).unwrap_err(), Error::ZeroPolynomial);
    }

    #[test]
    fn oracle_guards() {
        let f = poly(3, 3, &[(1, 3, 0), (1, 0, 3), (1, 0, 0)]);
        assert!(matches!(is_smooth_oracle(&f, 3), Err(Error::OutOfRange(_))));
        let g = poly(16, 3, &[(1, 3, 0), (1, 0, 3), (1, 0, 0)]);
        assert!(is_smooth_oracle(&g, 4).unwrap_err().is_size_guard());
    }

    #[test]
    fn all_conics_over_f2() {
        let f2 = field_of_order(2).unwrap();
        let mut r = rng();
        let mut smooth = 0;
        for mask in 1u32..64 {
            let coeffs = (0..6).map(|k| Fe(mask >> k & 1)).collect();
            let c = HomogPoly::new(&f2, 2, coeffs).unwrap();
            let exact = is_smooth_exact(&c, &mut r).unwrap();
            let oracle = is_smooth_oracle(&c, 1).unwrap();
            assert_eq!(exact.smooth, oracle.smooth, "{c}");
            if let Some(w) = &exact.witness {
                assert!(verify_witness(&c, w));
            }
            smooth += exact.smooth as u32;
        }
        // Smooth conics over F_2: |PGL(3,2)| / |PGL(2,2)| = 168 / 6 = 28.
        assert_eq!(smooth, 28);
    }

    #[test]
    fn agrees_with_oracle_on_random_curves() {
        let mut r = ChaCha8Rng::seed_from_u64(99);
        for q in [2u64, 3] {
            let f = field_of_order(q).unwrap();
            for _ in 0..150 {
                let d = r.random_range(1..=3);
                let c = HomogPoly::random(&f, d, &mut r);
                if c.is_zero() {
                    continue;
                }
                let exact = is_smooth_exact(&c, &mut r).unwrap();
                let oracle = is_smooth_oracle(&c, 4).unwrap();
                assert_eq!(exact.smooth, oracle.smooth, "{}", c.to_text());
                for w in exact.witness.iter().chain(oracle.witness.iter()) {
                    assert!(verify_witness(&c, w));
                }
            }
        }
    }

    #[test]
    fn invariant_under_coordinate_change() {
        let mut r = ChaCha8Rng::seed_from_u64(5);
        let f = field_of_order(5).unwrap();
        for _ in 0..10 {
            let c = HomogPoly::random(&f, 4, &mut r);
            if c.is_zero() {
                continue;
            }
            let base = is_smooth_exact(&c, &mut r).unwrap().smooth;
            for _ in 0..20 {
                let m: [[Fe; 3]; 3] =
                    std::array::from_fn(|_| std::array::from_fn(|_| Fe(r.random_range(0..5))));
                if crate::poly::invert3(&f, &m).is_none() {
                    continue;
                }
                let moved = c.compose_linear(&m);
                assert_eq!(is_smooth_exact(&moved, &mut r).unwrap().smooth, base);
            }
        }
    }

    #[test]
    fn singular_points_off_the_rational_plane() {
        // Three conjugate lines over F_8 through no common point: singular
        // points are the pairwise intersections, defined over F_8 only.
        let f2 = field_of_order(2).unwrap();
        let mut r = rng();
        let mut found = false;
        for _ in 0..2000 {
            let c = HomogPoly::random(&f2, 3, &mut r);
            if c.is_zero() {
                continue;
            }
            let v = is_smooth_exact(&c, &mut r).unwrap();
            if let Some(w) = &v.witness {
                assert!(verify_witness(&c, w));
                found |= w.extension_degree > 1;
            }
        }
        assert!(found, "expected some witness outside F_2");
    }

    #[test]
    fn interpolation_roundtrip() {
        let f = field_of_order(7).unwrap();
        let p = vec![Fe(3), Fe(0), Fe(5), Fe(1)];
        let xs: Vec<Fe> = (0..4).map(Fe).collect();
        let ys: Vec<Fe> = xs.iter().map(|x| uni::eval(&f, &p, x)).collect();
        assert_eq!(interpolate(&f, &xs, &ys), p);
        assert_eq!(monomial_count(2), 6);
    }
}
