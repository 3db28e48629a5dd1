use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{binomials, EngineOptions, FrequencyTable};
use crate::error::{Error, Result};
use crate::gf::FieldSpec;
use crate::pg2::Plane;

/// Largest `q` walked without `force`.
pub const TABLE_GUARD_Q: u32 = 5;

struct Walk<'a> {
    masks: &'a [u64],
    full: u64,
    n: usize,
    binom: &'a [Vec<u64>],
    /// `acc[k * (n + 1) + t]`.
    acc: Vec<u64>,
}

impl Walk<'_> {
    fn visit(&mut self, idx: usize, union: u64, k: usize) {
        if union == self.full {
            // Every completion keeps the union full.
            let r = self.n - idx;
            for j in 0..=r {
                self.acc[(k + j) * (self.n + 1) + self.n] += self.binom[r][j];
            }
            return;
        }
        if idx == self.n {
            self.acc[k * (self.n + 1) + union.count_ones() as usize] += 1;
            return;
        }
        self.visit(idx + 1, union | self.masks[idx], k + 1);
        self.visit(idx + 1, union, k);
    }
}

/// For each `k >= 1` and `t`, the number of `k`-sets of lines whose union
/// has exactly `t` points.
///
/// Walks the include/exclude tree over the lines in index order, stopping
/// early once the union covers the plane. Refuses `q > 5` unless forced, and
/// planes with more than 64 points always.
pub fn line_union_table(spec: &FieldSpec, opts: &EngineOptions) -> Result<FrequencyTable> {
    let q = spec.q();
    if q > TABLE_GUARD_Q && !opts.force {
        return Err(Error::SizeGuard(format!(
            "line-union table for q = {q} walks 2^{} subsets; pass force to run it",
            crate::pg2::plane_size(q)
        )));
    }
    let plane = Plane::new(spec);
    let masks = plane.line_masks().ok_or_else(|| {
        Error::SizeGuard(format!("q = {q}: planes above 64 points are not supported"))
    })?;
    let n = masks.len();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let binom = binomials();
    let s = opts.shard_bits(n) as usize;

    let per_shard = |shard: u64| -> Vec<u64> {
        let mut union = 0;
        let mut k = 0;
        for (i, m) in masks[..s].iter().enumerate() {
            if shard >> i & 1 == 1 {
                union |= m;
                k += 1;
            }
        }
        let mut w = Walk {
            masks: &masks,
            full,
            n,
            binom: &binom,
            acc: vec![0; (n + 1) * (n + 1)],
        };
        w.visit(s, union, k);
        w.acc
    };
    let parts: Vec<Vec<u64>> =
        opts.run(|| (0..1u64 << s).into_par_iter().map(per_shard).collect())?;

    let mut total = vec![0u64; (n + 1) * (n + 1)];
    for p in &parts {
        for (a, b) in total.iter_mut().zip(p) {
            *a += b;
        }
    }
    let mut entries = BTreeMap::new();
    for k in 1..=n {
        for t in 0..=n {
            let c = total[k * (n + 1) + t];
            if c > 0 {
                entries.insert((k as u32, t as u32), c);
            }
        }
    }
    Ok(FrequencyTable { q, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::field_of_order;

    #[test]
    fn row_sums_are_binomials() {
        let b = binomials();
        for q in [2u64, 3, 4] {
            let f = field_of_order(q).unwrap();
            let t = line_union_table(&f, &EngineOptions::default()).unwrap();
            let n = crate::pg2::plane_size(q as u32);
            for k in 1..=n as u32 {
                let sum: u64 = (0..=n as u32).map(|p| t.entry(k, p)).sum();
                assert_eq!(sum, b[n][k as usize]);
            }
            assert_eq!(t.entry(1, q as u32 + 1), n as u64);
        }
    }

    #[test]
    fn shard_count_does_not_matter() {
        let f = field_of_order(3).unwrap();
        let base = line_union_table(
            &f,
            &EngineOptions {
                threads: 1,
                shard_bits: 0,
                force: false,
            },
        )
        .unwrap();
        for bits in [1, 5, 12] {
            let o = EngineOptions {
                threads: 3,
                shard_bits: bits,
                force: false,
            };
            assert_eq!(line_union_table(&f, &o).unwrap(), base);
        }
    }

    #[test]
    fn guard() {
        let f = field_of_order(7).unwrap();
        assert!(line_union_table(&f, &EngineOptions::default())
            .unwrap_err()
            .is_size_guard());
        let f = field_of_order(8).unwrap();
        let forced = EngineOptions {
            force: true,
            ..EngineOptions::default()
        };
        assert!(line_union_table(&f, &forced).unwrap_err().is_size_guard());
    }
}
