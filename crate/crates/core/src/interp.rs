//! Linear independence of point-evaluation conditions on forms of degree `d`.
//!
//! Distinct points `P_1..P_k` impose independent conditions on degree `d`
//! forms whenever `d >= min(k - 1, 2q - 1)`. The checks here compute the
//! rank of the `k x N` matrix of monomial values directly.

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Fe, FieldSpec};
use crate::pg2::Plane;
use crate::poly::{monomial_count, HomogPoly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalMatrix {
    spec: FieldSpec,
    pub d: u32,
    /// Point indices, one per row.
    pub points: Vec<usize>,
    /// Row `r` holds every monomial evaluated at point `points[r]`.
    pub rows: Vec<Vec<Fe>>,
}

impl EvalMatrix {
    pub fn q(&self) -> u32 {
        self.spec.q()
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn columns(&self) -> usize {
        monomial_count(self.d)
    }
}

pub fn evaluation_matrix(plane: &Plane, points: &[usize], d: u32) -> Result<EvalMatrix> {
    let n = plane.size();
    let mut seen = vec![false; n];
    for &p in points {
        if p >= n {
            return Err(Error::OutOfRange(format!("point index {p}")));
        }
        if std::mem::replace(&mut seen[p], true) {
            return Err(Error::DuplicatePoint(p));
        }
    }
    let spec = plane.spec().clone();
    let monos: Vec<HomogPoly> = (0..monomial_count(d))
        .map(|k| {
            let mut m = HomogPoly::zero(&spec, d);
            m.coeffs_mut()[k] = Fe::ONE;
            m
        })
        .collect();
    let rows = points
        .iter()
        .map(|&p| monos.iter().map(|m| m.evaluate(plane.point(p))).collect())
        .collect();
    Ok(EvalMatrix {
        spec,
        d,
        points: points.to_vec(),
        rows,
    })
}

/// Ranks of the leading `1, 2, ..., k` rows, by one elimination pass that
/// reduces each new row against the pivots found so far.
pub fn rank_ladder(m: &EvalMatrix) -> Vec<usize> {
    let f = &m.spec;
    // Pivot rows, normalized so the pivot entry is one.
    let mut basis: Vec<(usize, Vec<Fe>)> = Vec::new();
    let mut ladder = Vec::with_capacity(m.k());
    for row in &m.rows {
        let mut v = row.clone();
        for (col, b) in &basis {
            let c = v[*col];
            if !c.is_zero() {
                for (x, y) in v.iter_mut().zip(b) {
                    *x = f.sub(*x, f.mul(c, *y));
                }
            }
        }
        if let Some(col) = v.iter().position(|x| !x.is_zero()) {
            let inv = f.inv(v[col]).expect("nonzero pivot");
            for x in v.iter_mut() {
                *x = f.mul(*x, inv);
            }
            basis.push((col, v));
        }
        ladder.push(basis.len());
    }
    ladder
}

/// Rank over `F_q` by Gaussian elimination, pivoting on the first nonzero entry.
pub fn rank_mod_q(m: &EvalMatrix) -> usize {
    let f = &m.spec;
    let mut a = m.rows.clone();
    let (rows, cols) = (a.len(), m.columns());
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot);
        let inv = f.inv(a[rank][col]).expect("nonzero pivot");
        let (top, rest) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in rest {
            let c = f.mul(row[col], inv);
            if c.is_zero() {
                continue;
            }
            for (x, &p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x = f.sub(*x, f.mul(c, p));
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// `d >= min(k - 1, 2q - 1)`.
pub fn independence_hypothesis(q: u32, d: u32, k: usize) -> bool {
    d as usize >= (k.saturating_sub(1)).min(2 * q as usize - 1)
}

/// Whether the points impose `k` independent conditions on degree `d` forms.
pub fn check_independence(plane: &Plane, d: u32, points: &[usize]) -> Result<bool> {
    let available = plane.size();
    if points.len() > available {
        return Err(Error::TooManyPoints {
            k: points.len(),
            available,
        });
    }
    let m = evaluation_matrix(plane, points, d)?;
    Ok(rank_mod_q(&m) == points.len())
}

/// `k` distinct points chosen uniformly.
pub fn random_points<R: Rng + ?Sized>(plane: &Plane, k: usize, rng: &mut R) -> Result<Vec<usize>> {
    let available = plane.size();
    if k > available {
        return Err(Error::TooManyPoints { k, available });
    }
    Ok(sample(rng, available, k).into_vec())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trial {
    pub q: u32,
    pub d: u32,
    pub points: Vec<usize>,
    pub rank: usize,
    /// Every step of the rank ladder adds zero or one.
    pub ladder_ok: bool,
}

impl Trial {
    pub fn independent(&self) -> bool {
        self.rank == self.points.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub trials: usize,
    pub independent: usize,
    pub ladder_ok: usize,
    /// Trials that came out dependent; empty when the property holds.
    pub failures: Vec<Trial>,
}

/// Random trials over the given fields: `k` uniform in `1..=k_max` (capped
/// by the plane size), `d` between `min(k-1, 2q-1)` and two above it.
/// Trial `i` uses its own stream, so the summary depends only on `seed`,
/// never on `threads` (0 = all cores).
pub fn run_trials(
    qs: &[u64],
    trials: usize,
    k_max: usize,
    seed: u64,
    threads: usize,
) -> Result<TrialSummary> {
    let planes: Vec<Plane> = qs
        .iter()
        .map(|&q| Ok(Plane::new(&crate::gf::field_of_order(q)?)))
        .collect::<Result<_>>()?;
    if planes.is_empty() {
        return Err(Error::OutOfRange("no fields given".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::OutOfRange(format!("thread pool: {e}")))?;
    let results: Vec<Trial> = pool.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|i| {
                let mut rng = crate::stats::sample_rng(seed, i as u64);
                let plane = &planes[rng.random_range(0..planes.len())];
                let q = plane.q();
                let k = rng.random_range(1..=k_max.min(plane.size()).max(1));
                let base = (k as u32 - 1).min(2 * q - 1);
                let d = (base + rng.random_range(0..=2)).max(1);
                let points = random_points(plane, k, &mut rng)?;
                let m = evaluation_matrix(plane, &points, d)?;
                let ladder = rank_ladder(&m);
                let steps_ok = ladder
                    .iter()
                    .zip(std::iter::once(&0).chain(&ladder))
                    .all(|(a, b)| a - b <= 1);
                let rank = rank_mod_q(&m);
                Ok(Trial {
                    q,
                    d,
                    points,
                    rank,
                    ladder_ok: steps_ok && ladder.last() == Some(&rank),
                })
            })
            .collect::<Result<_>>()
    })?;
    let independent = results.iter().filter(|t| t.independent()).count();
    let ladder_ok = results.iter().filter(|t| t.ladder_ok).count();
    Ok(TrialSummary {
        trials,
        independent,
        ladder_ok,
        failures: results.into_iter().filter(|t| !t.independent()).collect(),
    })
}
