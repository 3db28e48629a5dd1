//! Arithmetic in small finite fields `F_{p^n}`.
//!
//! A field is identified by `(p, n)`. Its elements are integers in `[0, q)`
//! whose base-`p` digits are the coefficients (constant term first) of a
//! residue polynomial modulo the field's defining polynomial. The defining
//! polynomial is always the smallest monic irreducible of degree `n` when
//! candidates are ordered by the integer encoding of their lower
//! coefficients, so every `(p, n)` has exactly one [`FieldSpec`].
//!
//! Each field also fixes a primitive element used as the base of its
//! log/antilog tables. These generators are chosen so that
//! `gen_N^((p^N - 1)/(p^n - 1))` has the same minimal polynomial as
//! `gen_n` whenever `n | N`. Mapping `gen_n^k` to `gen_N^(k (p^N-1)/(p^n-1))`
//! is then a field embedding, and embeddings compose along towers.
//!
//! ```
//! use blocking_curves::gf::{make_field, Fe};
//!
//! let f4 = make_field(2, 2).unwrap();
//! let t = Fe(2); // the residue class of t
//! assert_eq!(f4.mul(t, t), Fe(3)); // t^2 = t + 1
//! ```

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field order this module will construct.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;
/// Largest order that gets dense log/antilog tables.
pub const TABLE_LIMIT: u32 = 1 << 16;
const ADD_TABLE_LIMIT: u32 = 256;

/// A field element, stored as its index in `[0, q)`.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct Fe(pub u32);

pub type FieldElement = Fe;

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The operations a coefficient field must offer to the generic polynomial
/// kernels in [`crate::poly::uni`].
pub trait FieldOps {
    type El: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::El;
    fn one(&self) -> Self::El;
    fn is_zero(&self, a: &Self::El) -> bool;
    fn add(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn sub(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn neg(&self, a: &Self::El) -> Self::El;
    fn mul(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn inv(&self, a: &Self::El) -> Option<Self::El>;
}

/// One of the primitive operations, for callers that dispatch on a tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add(Fe, Fe),
    Mul(Fe, Fe),
    Neg(Fe),
    Inv(Fe),
    Pow(Fe, u64),
}

struct Tables {
    /// `exp[i] = gen^i`, doubled in length so a sum of two logs needs no reduction.
    exp: Vec<u32>,
    /// `log[x]` for `x != 0`; `log[0]` is unused.
    log: Vec<u32>,
    add: Option<Vec<u32>>,
    neg: Vec<u32>,
}

enum Repr {
    Prime,
    Tables(Tables),
    Poly,
}

struct Inner {
    p: u32,
    n: u32,
    q: u32,
    modulus: Option<Vec<u32>>,
    raw: Raw,
    repr: Repr,
    gen: u32,
    gen_minpoly: Vec<u32>,
}

/// A finite field `F_{p^n}` with its arithmetic tables. Cheap to clone.
#[derive(Clone)]
pub struct FieldSpec(Arc<Inner>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.n == other.0.n
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.n == 1 {
            write!(f, "GF({})", self.0.p)
        } else {
            write!(f, "GF({}^{})", self.0.p, self.0.n)
        }
    }
}

static FIELDS: OnceLock<Mutex<HashMap<(u32, u32), FieldSpec>>> = OnceLock::new();

/// Returns the field `F_{p^n}`.
///
/// Fields are built once and cached; repeated calls share tables.
pub fn make_field(p: u64, n: u32) -> Result<FieldSpec> {
    if n < 1 {
        return Err(Error::InvalidDegree);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let q = p.checked_pow(n).filter(|&q| q <= MAX_FIELD_ORDER);
    if q.is_none() {
        return Err(Error::FieldTooLarge { p, n });
    }
    let key = (p as u32, n);
    let cache = FIELDS.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(f) = cache.lock().unwrap().get(&key) {
        return Ok(f.clone());
    }
    // Built outside the lock: construction recurses into subfields.
    let built = FieldSpec(Arc::new(build(p as u32, n)?));
    let mut guard = cache.lock().unwrap();
    Ok(guard.entry(key).or_insert(built).clone())
}

/// Returns the field of order `q`, which must be a prime power.
pub fn field_of_order(q: u64) -> Result<FieldSpec> {
    let (p, n) = prime_power(q).ok_or(Error::NotPrime(q))?;
    make_field(p, n)
}

/// Splits `q` as `p^n`, or `None` if it is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = smallest_factor(q);
    let (mut r, mut n) = (q, 0);
    while r % p == 0 {
        r /= p;
        n += 1;
    }
    (r == 1).then_some((p, n))
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && smallest_factor(n) == n
}

fn smallest_factor(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return d;
        }
        d += 2;
    }
    n
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while n > 1 {
        let f = smallest_factor(n);
        out.push(f);
        while n % f == 0 {
            n /= f;
        }
    }
    out
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Digit-level arithmetic used to bootstrap the tables and for fields
/// above [`TABLE_LIMIT`].
#[derive(Clone)]
struct Raw {
    p: u32,
    n: u32,
    q: u32,
    /// Monic modulus, constant term first, length `n + 1`.
    modulus: Vec<u32>,
}

impl Raw {
    fn digits(&self, x: u32) -> Vec<u32> {
        let mut x = x;
        (0..self.n)
            .map(|_| {
                let d = x % self.p;
                x /= self.p;
                d
            })
            .collect()
    }

    fn undigits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.n {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    fn neg(&self, a: u32) -> u32 {
        let mut a = a;
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.n {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        if self.n == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        let p = self.p as u64;
        let (da, db) = (self.digits(a), self.digits(b));
        let n = self.n as usize;
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for k in (n..2 * n - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for (i, &m) in self.modulus[..n].iter().enumerate() {
                prod[k - n + i] = (prod[k - n + i] + (p - c) * m as u64) % p;
            }
        }
        let d: Vec<u32> = prod[..n].iter().map(|&c| c as u32).collect();
        self.undigits(&d)
    }

    fn pow(&self, a: u32, mut e: u64) -> u32 {
        let (mut base, mut acc) = (a, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn is_primitive(&self, a: u32, factors: &[u64]) -> bool {
        let order = (self.q - 1) as u64;
        a != 0 && factors.iter().all(|&r| self.pow(a, order / r) != 1)
    }

    /// Evaluates a polynomial with `F_p` coefficients at `x`.
    fn eval_prime_poly(&self, coeffs: &[u32], x: u32) -> u32 {
        coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }
}

fn build(p: u32, n: u32) -> Result<Inner> {
    let q = p.pow(n);
    let modulus = (n > 1).then(|| smallest_irreducible(p, n));
    let raw = Raw {
        p,
        n,
        q,
        modulus: modulus.clone().unwrap_or_else(|| vec![0, 1]),
    };
    let factors = prime_factors((q - 1) as u64);
    let alpha = (1..q).find(|&a| raw.is_primitive(a, &factors)).unwrap_or(1);

    // Subfield generators constrain the choice of ours.
    let mut constraints = Vec::new();
    for m in (1..n).filter(|m| n % m == 0) {
        let sub = make_field(p as u64, m)?;
        let exponent = ((q - 1) / (sub.q() - 1)) as u64;
        constraints.push((exponent, sub.0.gen_minpoly.clone()));
    }

    let use_tables = n > 1 && q <= TABLE_LIMIT;
    let order = (q - 1) as u64;
    let (gen, repr) = if use_tables {
        let mut exp = vec![0u32; q as usize - 1];
        let mut x = 1;
        for e in exp.iter_mut() {
            *e = x;
            x = raw.mul(x, alpha);
        }
        let mut log = vec![0u32; q as usize];
        for (i, &e) in exp.iter().enumerate() {
            log[e as usize] = i as u32;
        }
        let tmul = |a: u32, b: u32| -> u32 {
            if a == 0 || b == 0 {
                0
            } else {
                exp[((log[a as usize] as u64 + log[b as usize] as u64) % order) as usize]
            }
        };
        let tpow = |a: u32, e: u64| -> u32 {
            if a == 0 {
                return if e == 0 { 1 } else { 0 };
            }
            exp[((log[a as usize] as u64 * (e % order)) % order) as usize]
        };
        let eval = |coeffs: &[u32], x: u32| -> u32 {
            coeffs
                .iter()
                .rev()
                .fold(0, |acc, &c| raw.add(tmul(acc, x), c))
        };
        let k = (1..order)
            .filter(|&k| gcd_u64(k, order) == 1)
            .find(|&k| {
                let cand = exp[k as usize];
                constraints
                    .iter()
                    .all(|(e, mp)| eval(mp, tpow(cand, *e)) == 0)
            })
            .expect("compatible generator exists");
        let gen = exp[k as usize];
        // Re-base the tables on the chosen generator.
        let mut exp2 = vec![0u32; 2 * (q as usize - 1)];
        let mut x = 1;
        for e in exp2.iter_mut() {
            *e = x;
            x = tmul(x, gen);
        }
        let mut log2 = vec![0u32; q as usize];
        for (i, &e) in exp2[..q as usize - 1].iter().enumerate() {
            log2[e as usize] = i as u32;
        }
        let add = (p != 2 && q <= ADD_TABLE_LIMIT).then(|| {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = raw.add(a, b);
                }
            }
            t
        });
        let neg = (0..q).map(|a| raw.neg(a)).collect();
        (
            gen,
            Repr::Tables(Tables {
                exp: exp2,
                log: log2,
                add,
                neg,
            }),
        )
    } else if n == 1 {
        (alpha, Repr::Prime)
    } else {
        let gen = (1..order)
            .filter(|&k| gcd_u64(k, order) == 1)
            .map(|k| raw.pow(alpha, k))
            .find(|&cand| {
                constraints
                    .iter()
                    .all(|(e, mp)| raw.eval_prime_poly(mp, raw.pow(cand, *e)) == 0)
            })
            .expect("compatible generator exists");
        (gen, Repr::Poly)
    };

    // Minimal polynomial of the generator over F_p, from its conjugates.
    let mut mp = vec![1u32];
    let mut conj = gen;
    for _ in 0..n {
        let neg_c = raw.neg(conj);
        let mut next = vec![0u32; mp.len() + 1];
        for (i, &c) in mp.iter().enumerate() {
            next[i + 1] = raw.add(next[i + 1], c);
            next[i] = raw.add(next[i], raw.mul(c, neg_c));
        }
        mp = next;
        conj = raw.pow(conj, p as u64);
    }
    debug_assert!(mp.iter().all(|&c| c < p));

    Ok(Inner {
        p,
        n,
        q,
        modulus,
        raw,
        repr,
        gen,
        gen_minpoly: mp,
    })
}

/// Smallest monic irreducible of degree `n` over `F_p`, ordered by the
/// integer whose base-`p` digits are the non-leading coefficients.
fn smallest_irreducible(p: u32, n: u32) -> Vec<u32> {
    let count = (p as u64).pow(n);
    for code in 0..count {
        let mut c = code;
        let mut poly: Vec<u32> = (0..n)
            .map(|_| {
                let d = (c % p as u64) as u32;
                c /= p as u64;
                d
            })
            .collect();
        poly.push(1);
        if is_irreducible_prime_poly(&poly, p) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Exhaustive factor search: no monic divisor of degree `1..=deg/2`.
pub(crate) fn is_irreducible_prime_poly(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    if poly[0] == 0 {
        return false;
    }
    for k in 1..=deg / 2 {
        let count = (p as u64).pow(k as u32);
        for code in 0..count {
            let mut c = code;
            let mut div: Vec<u32> = (0..k)
                .map(|_| {
                    let d = (c % p as u64) as u32;
                    c /= p as u64;
                    d
                })
                .collect();
            div.push(1);
            if prime_poly_rem_is_zero(poly, &div, p) {
                return false;
            }
        }
    }
    true
}

fn prime_poly_rem_is_zero(num: &[u32], monic_div: &[u32], p: u32) -> bool {
    let p64 = p as u64;
    let mut r: Vec<u64> = num.iter().map(|&c| c as u64).collect();
    let dd = monic_div.len() - 1;
    for k in (dd..r.len()).rev() {
        let c = r[k] % p64;
        if c == 0 {
            continue;
        }
        for (i, &m) in monic_div.iter().enumerate() {
            let idx = k - dd + i;
            r[idx] = (r[idx] + (p64 - c) * m as u64) % p64;
        }
    }
    r[..dd].iter().all(|&c| c % p64 == 0)
}

impl FieldSpec {
    #[inline]
    pub fn p(&self) -> u32 {
        self.0.p
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.0.n
    }

    /// Field order `p^n`.
    #[inline]
    pub fn q(&self) -> u32 {
        self.0.q
    }

    /// Defining polynomial, constant term first; `None` for prime fields.
    pub fn modulus(&self) -> Option<&[u32]> {
        self.0.modulus.as_deref()
    }

    /// The primitive element the log tables are built on.
    pub fn generator(&self) -> Fe {
        Fe(self.0.gen)
    }

    /// Minimal polynomial of [`Self::generator`] over the prime field.
    pub fn generator_minpoly(&self) -> &[u32] {
        &self.0.gen_minpoly
    }

    pub fn zero(&self) -> Fe {
        Fe::ZERO
    }

    pub fn one(&self) -> Fe {
        Fe::ONE
    }

    pub fn element(&self, index: u32) -> Result<Fe> {
        if index < self.q() {
            Ok(Fe(index))
        } else {
            Err(Error::OutOfRange(format!(
                "element index {index} in {self:?}"
            )))
        }
    }

    pub fn contains(&self, a: Fe) -> bool {
        a.0 < self.q()
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.q()).map(Fe)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> Fe {
        Fe(v.rem_euclid(self.p() as i64) as u32)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        match &self.0.repr {
            Repr::Prime => {
                let s = a.0 + b.0;
                Fe(if s >= self.0.p { s - self.0.p } else { s })
            }
            Repr::Tables(t) => {
                if self.0.p == 2 {
                    Fe(a.0 ^ b.0)
                } else if let Some(add) = &t.add {
                    Fe(add[(a.0 * self.0.q + b.0) as usize])
                } else {
                    Fe(self.0.raw.add(a.0, b.0))
                }
            }
            Repr::Poly => Fe(self.0.raw.add(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        match &self.0.repr {
            Repr::Prime => Fe(if a.0 == 0 { 0 } else { self.0.p - a.0 }),
            Repr::Tables(t) => Fe(t.neg[a.0 as usize]),
            Repr::Poly => Fe(self.0.raw.neg(a.0)),
        }
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        match &self.0.repr {
            Repr::Prime => Fe(((a.0 as u64 * b.0 as u64) % self.0.p as u64) as u32),
            Repr::Tables(t) => {
                if a.0 == 0 || b.0 == 0 {
                    Fe(0)
                } else {
                    Fe(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize])
                }
            }
            Repr::Poly => Fe(self.0.raw.mul(a.0, b.0)),
        }
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(match &self.0.repr {
            Repr::Tables(t) => {
                let l = t.log[a.0 as usize];
                Fe(t.exp[((self.0.q - 1 - l) % (self.0.q - 1)) as usize])
            }
            _ => self.pow(a, self.0.q as u64 - 2),
        })
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.is_zero() {
            return Fe::ZERO;
        }
        match &self.0.repr {
            Repr::Tables(t) => {
                let order = (self.0.q - 1) as u64;
                let l = t.log[a.0 as usize] as u64;
                Fe(t.exp[((l * (e % order)) % order) as usize])
            }
            _ => {
                let (mut base, mut acc, mut e) = (a, Fe::ONE, e);
                while e > 0 {
                    if e & 1 == 1 {
                        acc = self.mul(acc, base);
                    }
                    base = self.mul(base, base);
                    e >>= 1;
                }
                acc
            }
        }
    }

    /// Discrete logarithm to the base [`Self::generator`].
    pub fn log(&self, a: Fe) -> Option<u64> {
        if a.is_zero() {
            return None;
        }
        match &self.0.repr {
            Repr::Tables(t) => Some(t.log[a.0 as usize] as u64),
            _ => {
                let g = self.generator();
                let mut x = Fe::ONE;
                for k in 0..(self.q() as u64 - 1) {
                    if x == a {
                        return Some(k);
                    }
                    x = self.mul(x, g);
                }
                None
            }
        }
    }

    /// `gen^k`.
    pub fn gen_pow(&self, k: u64) -> Fe {
        match &self.0.repr {
            Repr::Tables(t) => Fe(t.exp[(k % (self.q() as u64 - 1)) as usize]),
            _ => self.pow(self.generator(), k),
        }
    }

    /// The absolute Frobenius `x -> x^p`.
    pub fn frobenius(&self, a: Fe) -> Fe {
        self.pow(a, self.p() as u64)
    }

    pub fn eval(&self, op: ArithOp) -> Result<Fe> {
        let check = |a: Fe| {
            if self.contains(a) {
                Ok(a)
            } else {
                Err(Error::OutOfRange(format!("element {a} in {self:?}")))
            }
        };
        Ok(match op {
            ArithOp::Add(a, b) => self.add(check(a)?, check(b)?),
            ArithOp::Mul(a, b) => self.mul(check(a)?, check(b)?),
            ArithOp::Neg(a) => self.neg(check(a)?),
            ArithOp::Inv(a) => self.inv(check(a)?)?,
            ArithOp::Pow(a, e) => self.pow(check(a)?, e),
        })
    }

    /// True if `target` is `F_{q^m}` for some `m >= 1`.
    pub fn is_subfield_of(&self, target: &FieldSpec) -> bool {
        self.p() == target.p() && target.n() % self.n() == 0
    }

    /// The field `F_{q^m}`.
    pub fn extension(&self, m: u32) -> Result<FieldSpec> {
        make_field(self.p() as u64, self.n() * m)
    }

    /// Maps `x` into `target` along the canonical embedding.
    pub fn embed(&self, x: Fe, target: &FieldSpec) -> Result<Fe> {
        if !self.is_subfield_of(target) {
            return Err(Error::NotAnExtension {
                base: self.q() as u64,
                target: target.q() as u64,
            });
        }
        if !self.contains(x) {
            return Err(Error::OutOfRange(format!("element {x} in {self:?}")));
        }
        if x.is_zero() || self.n() == target.n() || self.n() == 1 {
            // Prime-subfield elements have the same index in every extension.
            return Ok(x);
        }
        let k = self.log(x).expect("nonzero element has a logarithm");
        let e = (target.q() as u64 - 1) / (self.q() as u64 - 1);
        Ok(target.gen_pow(k * e))
    }

    /// Precomputed embedding table, indexed by source element.
    pub fn embedding_table(&self, target: &FieldSpec) -> Result<Vec<Fe>> {
        self.elements().map(|x| self.embed(x, target)).collect()
    }
}

impl FieldOps for FieldSpec {
    type El = Fe;

    fn zero(&self) -> Fe {
        Fe::ZERO
    }
    fn one(&self) -> Fe {
        Fe::ONE
    }
    fn is_zero(&self, a: &Fe) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Fe, b: &Fe) -> Fe {
        FieldSpec::add(self, *a, *b)
    }
    fn sub(&self, a: &Fe, b: &Fe) -> Fe {
        FieldSpec::sub(self, *a, *b)
    }
    fn neg(&self, a: &Fe) -> Fe {
        FieldSpec::neg(self, *a)
    }
    fn mul(&self, a: &Fe, b: &Fe) -> Fe {
        FieldSpec::mul(self, *a, *b)
    }
    fn inv(&self, a: &Fe) -> Option<Fe> {
        FieldSpec::inv(self, *a).ok()
    }
}
