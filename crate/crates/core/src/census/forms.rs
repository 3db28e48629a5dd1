use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::EngineOptions;
use crate::error::{Error, Result};
use crate::gf::{Fe, FieldSpec};
use crate::pg2::Plane;
use crate::poly::{monomial_count, PointEvaluator};
use crate::rational::ExactRational;

/// Bound on the number of forms `q^N` walked by the brute-force engines.
pub const FORMS_LIMIT: u64 = 1 << 24;

/// Properties of a curve that depend only on its rational points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "arg")]
pub enum CurvePredicate {
    Blocking,
    NonBlocking,
    /// The line with this index contains no rational point of the curve.
    SkewTo(usize),
    /// Exactly this many rational points.
    PointCount(u32),
}

impl CurvePredicate {
    pub fn holds(&self, lines: &[u64], zeros: u64) -> bool {
        match *self {
            CurvePredicate::Blocking => lines.iter().all(|&l| l & zeros != 0),
            CurvePredicate::NonBlocking => lines.iter().any(|&l| l & zeros == 0),
            CurvePredicate::SkewTo(i) => lines[i] & zeros == 0,
            CurvePredicate::PointCount(t) => zeros.count_ones() == t,
        }
    }
}

/// Visits the rational point set (as a mask) of every form of degree `d`,
/// the zero form included.
fn walk_forms<A: Send>(
    spec: &FieldSpec,
    d: u32,
    opts: &EngineOptions,
    init: impl Fn() -> A + Sync,
    visit: impl Fn(&mut A, u64) + Sync,
    merge: impl Fn(&mut A, A),
) -> Result<A> {
    let q = spec.q() as u64;
    let n_mono = monomial_count(d);
    let total = q.checked_pow(n_mono as u32);
    if total.is_none_or(|t| t > FORMS_LIMIT) && !opts.force {
        return Err(Error::SizeGuard(format!(
            "q^N = {q}^{n_mono} forms exceeds 2^24; pass force to run it"
        )));
    }
    let plane = Plane::new(spec);
    let n = plane.size();
    if n > 64 {
        return Err(Error::SizeGuard(format!(
            "q = {q}: planes above 64 points are not supported"
        )));
    }
    let ev = PointEvaluator::new(&plane, d);
    // mono[k][p]: value of monomial k at point p.
    let mono: Vec<Vec<Fe>> = (0..n_mono)
        .map(|k| (0..n).map(|p| ev.row(p)[k]).collect())
        .collect();

    // Shards fix the top `s` coefficients.
    let max_shards = 1u64 << opts.shard_bits(64);
    let mut s = 0;
    while s < n_mono && q.pow(s as u32 + 1) <= max_shards {
        s += 1;
    }
    let low = n_mono - s;

    let per_shard = |shard: u64| -> A {
        let mut acc = init();
        let mut coeffs = vec![Fe::ZERO; n_mono];
        let mut rest = shard;
        for c in coeffs[low..].iter_mut() {
            *c = Fe((rest % q) as u32);
            rest /= q;
        }
        let mut values = vec![Fe::ZERO; n];
        for k in low..n_mono {
            let c = coeffs[k];
            if !c.is_zero() {
                for (v, &m) in values.iter_mut().zip(&mono[k]) {
                    *v = spec.add(*v, spec.mul(c, m));
                }
            }
        }
        loop {
            let zeros =
                values.iter().enumerate().fold(
                    0u64,
                    |acc, (p, v)| if v.is_zero() { acc | 1 << p } else { acc },
                );
            visit(&mut acc, zeros);
            // Odometer step on the low coefficients.
            let mut k = 0;
            loop {
                if k == low {
                    return acc;
                }
                let old = coeffs[k];
                let new = Fe((old.0 + 1) % q as u32);
                coeffs[k] = new;
                let delta = spec.sub(new, old);
                for (v, &m) in values.iter_mut().zip(&mono[k]) {
                    *v = spec.add(*v, spec.mul(delta, m));
                }
                if new.is_zero() {
                    k += 1;
                } else {
                    break;
                }
            }
        }
    };
    let parts: Vec<A> = opts.run(|| {
        (0..q.pow(s as u32))
            .into_par_iter()
            .map(per_shard)
            .collect()
    })?;
    let mut it = parts.into_iter();
    let mut acc = it.next().unwrap_or_else(&init);
    for p in it {
        merge(&mut acc, p);
    }
    Ok(acc)
}

/// Number of forms of degree `d` satisfying the predicate, and the total.
pub fn brute_force_count(
    spec: &FieldSpec,
    d: u32,
    pred: CurvePredicate,
    opts: &EngineOptions,
) -> Result<(u64, u64)> {
    let plane = Plane::new(spec);
    let lines = plane.line_masks().unwrap_or_default();
    if let CurvePredicate::SkewTo(i) = pred {
        if i >= plane.size() {
            return Err(Error::OutOfRange(format!("line index {i}")));
        }
    }
    walk_forms(
        spec,
        d,
        opts,
        || (0u64, 0u64),
        |acc, zeros| {
            acc.1 += 1;
            if pred.holds(&lines, zeros) {
                acc.0 += 1;
            }
        },
        |a, b| {
            a.0 += b.0;
            a.1 += b.1;
        },
    )
}

/// Exact fraction of all forms of degree `d` (zero included) satisfying the predicate.
pub fn brute_force_density(
    spec: &FieldSpec,
    d: u32,
    pred: CurvePredicate,
    opts: &EngineOptions,
) -> Result<ExactRational> {
    let (hits, total) = brute_force_count(spec, d, pred, opts)?;
    Ok(ExactRational::new(hits, total))
}

/// Number of forms of degree `d` with exactly `t` rational points, for each `t`.
pub fn point_count_histogram_exact(
    spec: &FieldSpec,
    d: u32,
    opts: &EngineOptions,
) -> Result<BTreeMap<u32, u64>> {
    let n = crate::pg2::plane_size(spec.q());
    let counts = walk_forms(
        spec,
        d,
        opts,
        || vec![0u64; n + 1],
        |acc, zeros| acc[zeros.count_ones() as usize] += 1,
        |a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        },
    )?;
    Ok(counts
        .into_iter()
        .enumerate()
        .filter(|(_, c)| *c > 0)
        .map(|(t, c)| (t as u32, c))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::field_of_order;
    use crate::poly::HomogPoly;
    use crate::rational::ratio;

    fn opts() -> EngineOptions {
        EngineOptions::with_threads(2)
    }

    #[test]
    fn cubics_over_f2() {
        let f = field_of_order(2).unwrap();
        assert_eq!(
            brute_force_density(&f, 3, CurvePredicate::Blocking, &opts()).unwrap(),
            ratio(1, 2)
        );
        for line in 0..7 {
            assert_eq!(
                brute_force_density(&f, 3, CurvePredicate::SkewTo(line), &opts()).unwrap(),
                ratio(1, 8)
            );
        }
        let h = point_count_histogram_exact(&f, 3, &opts()).unwrap();
        let binom7 = [1u64, 7, 21, 35, 35, 21, 7, 1];
        for t in 0..=7u32 {
            assert_eq!(h.get(&t).copied().unwrap_or(0), 8 * binom7[t as usize]);
        }
    }

    #[test]
    fn conics_over_f2() {
        let f = field_of_order(2).unwrap();
        assert_eq!(
            brute_force_density(&f, 2, CurvePredicate::Blocking, &opts()).unwrap(),
            ratio(29, 64)
        );
    }

    #[test]
    fn lines_below_threshold() {
        // Seven nonzero linear forms over F_2, each with 3 points; the zero form has 7.
        let f = field_of_order(2).unwrap();
        let h = point_count_histogram_exact(&f, 1, &opts()).unwrap();
        assert_eq!(h, BTreeMap::from([(3, 7), (7, 1)]));
    }

    #[test]
    fn matches_direct_evaluation() {
        // Independent count by evaluating every form point by point.
        let f = field_of_order(3).unwrap();
        let plane = Plane::new(&f);
        let mut direct = BTreeMap::new();
        let n_mono = monomial_count(2);
        for code in 0..3u32.pow(n_mono as u32) {
            let mut c = code;
            let coeffs = (0..n_mono)
                .map(|_| {
                    let v = c % 3;
                    c /= 3;
                    Fe(v)
                })
                .collect();
            let p = HomogPoly::new(&f, 2, coeffs).unwrap();
            *direct
                .entry(p.point_set(&plane).len() as u32)
                .or_insert(0u64) += 1;
        }
        assert_eq!(point_count_histogram_exact(&f, 2, &opts()).unwrap(), direct);
        let single = EngineOptions {
            threads: 1,
            shard_bits: 0,
            force: false,
        };
        assert_eq!(point_count_histogram_exact(&f, 2, &single).unwrap(), direct);
    }

    #[test]
    fn guard() {
        let f = field_of_order(4).unwrap();
        assert!(
            brute_force_density(&f, 4, CurvePredicate::Blocking, &opts())
                .unwrap_err()
                .is_size_guard()
        );
    }
}
