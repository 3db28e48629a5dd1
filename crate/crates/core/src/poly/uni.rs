//! Univariate polynomials over a finite field: gcd, resultant, squarefree
//! decomposition and Cantor–Zassenhaus factorization.
//!
//! The free functions work over any [`FieldOps`] coefficient field on plain
//! coefficient vectors (constant term first, no trailing zeros, the zero
//! polynomial is the empty vector). [`UniPoly`] wraps them for
//! [`FieldSpec`] coefficients.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf::{Fe, FieldOps, FieldSpec};

/// Split attempts allowed per equal-degree split before giving up.
pub const SPLIT_RETRIES: u32 = 64;

pub fn trim<K: FieldOps>(k: &K, v: &mut Vec<K::El>) {
    while v.last().is_some_and(|c| k.is_zero(c)) {
        v.pop();
    }
}

pub fn degree<El>(a: &[El]) -> Option<usize> {
    a.len().checked_sub(1)
}

pub fn add<K: FieldOps>(k: &K, a: &[K::El], b: &[K::El]) -> Vec<K::El> {
    let n = a.len().max(b.len());
    let mut out: Vec<K::El> = (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => k.add(x, y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        })
        .collect();
    trim(k, &mut out);
    out
}

pub fn sub<K: FieldOps>(k: &K, a: &[K::El], b: &[K::El]) -> Vec<K::El> {
    let nb: Vec<K::El> = b.iter().map(|c| k.neg(c)).collect();
    add(k, a, &nb)
}

pub fn scale<K: FieldOps>(k: &K, a: &[K::El], c: &K::El) -> Vec<K::El> {
    let mut out: Vec<K::El> = a.iter().map(|x| k.mul(x, c)).collect();
    trim(k, &mut out);
    out
}

pub fn mul<K: FieldOps>(k: &K, a: &[K::El], b: &[K::El]) -> Vec<K::El> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![k.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if k.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = k.add(&out[i + j], &k.mul(x, y));
        }
    }
    trim(k, &mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem<K: FieldOps>(k: &K, a: &[K::El], b: &[K::El]) -> (Vec<K::El>, Vec<K::El>) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = k.inv(&b[db]).expect("leading coefficient is nonzero");
    let mut r = a.to_vec();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut quot = vec![k.zero(); r.len() - db];
    for i in (db..r.len()).rev() {
        if k.is_zero(&r[i]) {
            continue;
        }
        let c = k.mul(&r[i], &lead_inv);
        for (j, bj) in b.iter().enumerate() {
            let idx = i - db + j;
            r[idx] = k.sub(&r[idx], &k.mul(&c, bj));
        }
        quot[i - db] = c;
    }
    r.truncate(db);
    trim(k, &mut r);
    trim(k, &mut quot);
    (quot, r)
}

pub fn rem<K: FieldOps>(k: &K, a: &[K::El], b: &[K::El]) -> Vec<K::El> {
    divrem(k, a, b).1
}

pub fn monic<K: FieldOps>(k: &K, a: &[K::El]) -> Vec<K::El> {
    match a.last() {
        None => Vec::new(),
        Some(l) => scale(k, a, &k.inv(l).expect("nonzero leading coefficient")),
    }
}

/// Monic gcd; `gcd(0, 0) = 0`.
pub fn gcd<K: FieldOps>(k: &K, a: &[K::El], b: &[K::El]) -> Vec<K::El> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    while !b.is_empty() {
        let r = rem(k, &a, &b);
        a = b;
        b = r;
    }
    monic(k, &a)
}

pub fn derivative<K: FieldOps>(k: &K, a: &[K::El]) -> Vec<K::El> {
    let mut out: Vec<K::El> = Vec::with_capacity(a.len().saturating_sub(1));
    let mut n = k.zero();
    for c in a.iter() {
        out.push(k.mul(&n, c));
        n = k.add(&n, &k.one());
    }
    if !out.is_empty() {
        out.remove(0);
    }
    trim(k, &mut out);
    out
}

pub fn eval<K: FieldOps>(k: &K, a: &[K::El], x: &K::El) -> K::El {
    a.iter()
        .rev()
        .fold(k.zero(), |acc, c| k.add(&k.mul(&acc, x), c))
}

/// Resultant with the Sylvester-matrix sign convention, so that
/// `Res(t - a, t - b) = a - b`. Zero if either input is zero.
pub fn resultant<K: FieldOps>(k: &K, a: &[K::El], b: &[K::El]) -> K::El {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    let mut acc = k.one();
    loop {
        if a.is_empty() || b.is_empty() {
            return k.zero();
        }
        let (m, n) = (a.len() - 1, b.len() - 1);
        if n == 0 {
            return k.mul(&acc, &pow_el(k, &b[0], m as u64));
        }
        if m == 0 {
            return k.mul(&acc, &pow_el(k, &a[0], n as u64));
        }
        let r = rem(k, &a, &b);
        if r.is_empty() {
            return k.zero();
        }
        let kdeg = r.len() - 1;
        // Res(a, b) = (-1)^{mn} lc(b)^{m - deg r} Res(b, r)
        if m * n % 2 == 1 {
            acc = k.neg(&acc);
        }
        acc = k.mul(&acc, &pow_el(k, &b[n], (m - kdeg) as u64));
        a = b;
        b = r;
    }
}

fn pow_el<K: FieldOps>(k: &K, x: &K::El, mut e: u64) -> K::El {
    let (mut base, mut acc) = (x.clone(), k.one());
    while e > 0 {
        if e & 1 == 1 {
            acc = k.mul(&acc, &base);
        }
        base = k.mul(&base, &base);
        e >>= 1;
    }
    acc
}

/// `base^e mod m`.
pub fn powmod<K: FieldOps>(k: &K, base: &[K::El], mut e: u64, m: &[K::El]) -> Vec<K::El> {
    let mut b = rem(k, base, m);
    let mut acc = rem(k, &[k.one()], m);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(k, &mul(k, &acc, &b), m);
        }
        e >>= 1;
        if e > 0 {
            b = rem(k, &mul(k, &b, &b), m);
        }
    }
    acc
}

/// The residue field `B[t]/(m)` for an irreducible `m` over a [`FieldSpec`].
#[derive(Clone, Debug)]
pub struct QuotientField {
    base: FieldSpec,
    modulus: Vec<Fe>,
}

impl QuotientField {
    /// `modulus` must be irreducible; it is made monic here.
    pub fn new(base: &FieldSpec, modulus: &[Fe]) -> Self {
        QuotientField {
            base: base.clone(),
            modulus: monic(base, modulus),
        }
    }

    pub fn base(&self) -> &FieldSpec {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    /// Reduces a base polynomial into the field.
    pub fn reduce(&self, a: &[Fe]) -> Vec<Fe> {
        rem(&self.base, a, &self.modulus)
    }

    pub fn from_base(&self, c: Fe) -> Vec<Fe> {
        if c.is_zero() {
            Vec::new()
        } else {
            vec![c]
        }
    }

    /// The class of `t`.
    pub fn generator(&self) -> Vec<Fe> {
        self.reduce(&[Fe::ZERO, Fe::ONE])
    }
}

impl FieldOps for QuotientField {
    type El = Vec<Fe>;

    fn zero(&self) -> Vec<Fe> {
        Vec::new()
    }
    fn one(&self) -> Vec<Fe> {
        self.reduce(&[Fe::ONE])
    }
    fn is_zero(&self, a: &Vec<Fe>) -> bool {
        a.is_empty()
    }
    fn add(&self, a: &Vec<Fe>, b: &Vec<Fe>) -> Vec<Fe> {
        add(&self.base, a, b)
    }
    fn sub(&self, a: &Vec<Fe>, b: &Vec<Fe>) -> Vec<Fe> {
        sub(&self.base, a, b)
    }
    fn neg(&self, a: &Vec<Fe>) -> Vec<Fe> {
        sub(&self.base, &[], a)
    }
    fn mul(&self, a: &Vec<Fe>, b: &Vec<Fe>) -> Vec<Fe> {
        self.reduce(&mul(&self.base, a, b))
    }
    fn inv(&self, a: &Vec<Fe>) -> Option<Vec<Fe>> {
        // Extended Euclid: track s with s*a = r (mod m).
        let k = &self.base;
        let (mut r0, mut r1) = (self.modulus.clone(), a.clone());
        let (mut s0, mut s1): (Vec<Fe>, Vec<Fe>) = (Vec::new(), vec![Fe::ONE]);
        while !r1.is_empty() {
            let (qt, r) = divrem(k, &r0, &r1);
            let s = sub(k, &s0, &mul(k, &qt, &s1));
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s);
        }
        if r0.len() != 1 {
            return None;
        }
        let c = k.inv(r0[0]).ok()?;
        Some(self.reduce(&scale(k, &s0, &c)))
    }
}

/// A univariate polynomial over a [`FieldSpec`].
#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly {
    spec: FieldSpec,
    coeffs: Vec<Fe>,
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "UniPoly({:?}, {:?})",
            self.spec,
            self.coeffs.iter().map(|c| c.0).collect::<Vec<_>>()
        )
    }
}

impl UniPoly {
    pub fn new(spec: &FieldSpec, mut coeffs: Vec<Fe>) -> Self {
        trim(spec, &mut coeffs);
        UniPoly {
            spec: spec.clone(),
            coeffs,
        }
    }

    /// From coefficient indices, constant term first.
    pub fn from_indices(spec: &FieldSpec, coeffs: &[u32]) -> Self {
        Self::new(spec, coeffs.iter().map(|&c| Fe(c)).collect())
    }

    pub fn zero(spec: &FieldSpec) -> Self {
        Self::new(spec, Vec::new())
    }

    pub fn constant(spec: &FieldSpec, c: Fe) -> Self {
        Self::new(spec, vec![c])
    }

    /// `t - a`.
    pub fn linear_root(spec: &FieldSpec, a: Fe) -> Self {
        Self::new(spec, vec![spec.neg(a), Fe::ONE])
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        degree(&self.coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Fe {
        self.coeffs.last().copied().unwrap_or(Fe::ZERO)
    }

    fn wrap(&self, coeffs: Vec<Fe>) -> Self {
        UniPoly {
            spec: self.spec.clone(),
            coeffs,
        }
    }

    pub fn eval(&self, x: Fe) -> Fe {
        eval(&self.spec, &self.coeffs, &x)
    }

    pub fn add(&self, o: &Self) -> Self {
        self.wrap(add(&self.spec, &self.coeffs, &o.coeffs))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.wrap(sub(&self.spec, &self.coeffs, &o.coeffs))
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.wrap(mul(&self.spec, &self.coeffs, &o.coeffs))
    }

    pub fn scale(&self, c: Fe) -> Self {
        self.wrap(scale(&self.spec, &self.coeffs, &c))
    }

    pub fn divrem(&self, o: &Self) -> Result<(Self, Self)> {
        if o.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let (q, r) = divrem(&self.spec, &self.coeffs, &o.coeffs);
        Ok((self.wrap(q), self.wrap(r)))
    }

    pub fn monic(&self) -> Self {
        self.wrap(monic(&self.spec, &self.coeffs))
    }

    pub fn derivative(&self) -> Self {
        self.wrap(derivative(&self.spec, &self.coeffs))
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(&self.spec, Fe::ONE), |acc, _| acc.mul(self))
    }

    /// Monic gcd; fails only when both inputs are zero.
    pub fn gcd(&self, o: &Self) -> Result<Self> {
        if self.is_zero() && o.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(self.wrap(gcd(&self.spec, &self.coeffs, &o.coeffs)))
    }

    pub fn resultant(&self, o: &Self) -> Result<Fe> {
        if self.is_zero() || o.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(resultant(&self.spec, &self.coeffs, &o.coeffs))
    }

    /// Number of distinct roots in the coefficient field.
    pub fn count_distinct_roots(&self) -> usize {
        self.spec
            .elements()
            .filter(|&x| self.eval(x).is_zero())
            .count()
    }

    /// Squarefree decomposition: monic pairwise coprime `(g_i, i)` with
    /// `self = lc * prod g_i^i`.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(UniPoly, u32)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut out: Vec<(UniPoly, u32)> =
            squarefree_parts(&self.spec, &monic(&self.spec, &self.coeffs))
                .into_iter()
                .map(|(g, m)| (self.wrap(g), m))
                .collect();
        out.sort_by(|a, b| (a.1, &a.0.coeffs).cmp(&(b.1, &b.0.coeffs)));
        Ok(out)
    }

    /// The product of the distinct monic irreducible factors.
    pub fn squarefree(&self) -> Result<Self> {
        let parts = self.squarefree_decomposition()?;
        Ok(parts
            .into_iter()
            .fold(Self::constant(&self.spec, Fe::ONE), |acc, (g, _)| {
                acc.mul(&g)
            }))
    }

    /// Irreducibility via `gcd(self, t^{q^e} - t) = 1` for `e <= deg/2`.
    pub fn is_irreducible(&self) -> bool {
        let Some(deg) = self.degree() else {
            return false;
        };
        if deg == 0 {
            return false;
        }
        let f = monic(&self.spec, &self.coeffs);
        let x = vec![Fe::ZERO, Fe::ONE];
        let mut h = rem(&self.spec, &x, &f);
        for _ in 1..=deg / 2 {
            h = powmod(&self.spec, &h, self.spec.q() as u64, &f);
            let g = gcd(&self.spec, &f, &sub(&self.spec, &h, &x));
            if g.len() != 1 {
                return false;
            }
        }
        true
    }

    /// Factors into monic irreducibles with multiplicities, sorted by
    /// (degree, coefficients). Deterministic for a given rng state.
    pub fn factor<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<(UniPoly, u32)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let k = &self.spec;
        let mut out = Vec::new();
        for (g, m) in squarefree_parts(k, &monic(k, &self.coeffs)) {
            for (h, e) in distinct_degree(k, &g) {
                for f in equal_degree(k, &h, e, rng)? {
                    out.push((self.wrap(f), m));
                }
            }
        }
        out.sort_by(|a, b| {
            (a.0.coeffs.len(), &a.0.coeffs, a.1).cmp(&(b.0.coeffs.len(), &b.0.coeffs, b.1))
        });
        Ok(out)
    }
}

fn pth_root(k: &FieldSpec, a: &[Fe]) -> Vec<Fe> {
    // a is a polynomial in t^p; the p-th root of a coefficient c is c^(q/p).
    let p = k.p() as usize;
    let e = (k.q() / k.p()) as u64;
    let mut out: Vec<Fe> = a.iter().step_by(p).map(|&c| k.pow(c, e)).collect();
    trim(k, &mut out);
    out
}

fn squarefree_parts(k: &FieldSpec, f: &[Fe]) -> Vec<(Vec<Fe>, u32)> {
    let one = vec![Fe::ONE];
    let mut out = Vec::new();
    if f.len() <= 1 {
        return out;
    }
    let mut c = gcd(k, f, &derivative(k, f));
    let mut w = divrem(k, f, &c).0;
    let mut i = 1;
    while w != one {
        let y = gcd(k, &w, &c);
        let fac = divrem(k, &w, &y).0;
        if fac != one {
            out.push((fac, i));
        }
        c = divrem(k, &c, &y).0;
        w = y;
        i += 1;
    }
    if c != one {
        let root = pth_root(k, &c);
        for (g, m) in squarefree_parts(k, &root) {
            out.push((g, m * k.p()));
        }
    }
    out
}

/// Splits a squarefree monic polynomial into products of irreducibles of equal degree.
fn distinct_degree(k: &FieldSpec, f: &[Fe]) -> Vec<(Vec<Fe>, usize)> {
    let x = vec![Fe::ZERO, Fe::ONE];
    let mut f = f.to_vec();
    let mut out = Vec::new();
    let mut h = rem(k, &x, &f);
    let mut i = 1;
    while f.len() > 2 * i {
        h = powmod(k, &h, k.q() as u64, &f);
        let g = gcd(k, &f, &sub(k, &h, &x));
        if g.len() > 1 {
            f = divrem(k, &f, &g).0;
            h = rem(k, &h, &f);
            out.push((g, i));
        }
        i += 1;
    }
    if f.len() > 1 {
        let d = f.len() - 1;
        out.push((f, d));
    }
    out
}

fn equal_degree<R: Rng + ?Sized>(
    k: &FieldSpec,
    f: &[Fe],
    e: usize,
    rng: &mut R,
) -> Result<Vec<Vec<Fe>>> {
    let n = f.len() - 1;
    if n == e {
        return Ok(vec![f.to_vec()]);
    }
    let q = k.q() as u64;
    for _ in 0..SPLIT_RETRIES {
        let mut a: Vec<Fe> = (0..n).map(|_| Fe(rng.random_range(0..k.q()))).collect();
        trim(k, &mut a);
        if a.len() <= 1 {
            continue;
        }
        let b = if k.p() == 2 {
            // Trace map to F_2: sum of a^(2^j), j < n_field * e.
            let steps = k.n() as usize * e;
            let mut term = rem(k, &a, f);
            let mut acc = term.clone();
            for _ in 1..steps {
                term = rem(k, &mul(k, &term, &term), f);
                acc = add(k, &acc, &term);
            }
            acc
        } else {
            // a^((q^e - 1)/2) = (prod_{i<e} a^(q^i))^((q - 1)/2)
            let mut term = rem(k, &a, f);
            let mut norm = term.clone();
            for _ in 1..e {
                term = powmod(k, &term, q, f);
                norm = rem(k, &mul(k, &norm, &term), f);
            }
            let half = powmod(k, &norm, (q - 1) / 2, f);
            sub(k, &half, &[Fe::ONE])
        };
        let g = gcd(k, f, &b);
        if g.len() > 1 && g.len() < f.len() {
            let h = divrem(k, f, &g).0;
            let mut parts = equal_degree(k, &g, e, rng)?;
            parts.extend(equal_degree(k, &h, e, rng)?);
            return Ok(parts);
        }
    }
    Err(Error::RetriesExhausted(SPLIT_RETRIES))
}
