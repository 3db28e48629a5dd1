use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::EngineOptions;
use crate::error::{Error, Result};
use crate::gf::FieldSpec;
use crate::pg2::{Plane, PointSet};

/// Largest `q` walked without `force`.
pub const CENSUS_GUARD_Q: u32 = 4;

/// Blocking point sets of `PG(2, q)` counted by size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockingCensus {
    pub q: u32,
    pub by_size: BTreeMap<u32, u64>,
    pub nontrivial_by_size: BTreeMap<u32, u64>,
    /// The nontrivial blocking sets of the smallest size, as point masks in
    /// increasing order.
    pub smallest_nontrivial: Vec<u64>,
}

impl BlockingCensus {
    pub fn min_nontrivial_size(&self) -> Option<u32> {
        self.nontrivial_by_size
            .iter()
            .find(|(_, &c)| c > 0)
            .map(|(&t, _)| t)
    }

    pub fn smallest_nontrivial_sets(&self) -> Vec<PointSet> {
        let n = crate::pg2::plane_size(self.q);
        self.smallest_nontrivial
            .iter()
            .map(|&m| PointSet::from_mask(n, m))
            .collect()
    }

    pub fn total_blocking(&self) -> u64 {
        self.by_size.values().sum()
    }
}

#[derive(Default)]
struct Shard {
    by_size: Vec<u64>,
    nontrivial: Vec<u64>,
    smallest: Vec<u64>,
    smallest_size: u32,
}

/// Walks all `2^(q^2+q+1)` point sets, classifying each as blocking and, if
/// so, trivial or not. Refuses `q > 4` unless forced.
pub fn blocking_census(spec: &FieldSpec, opts: &EngineOptions) -> Result<BlockingCensus> {
    let q = spec.q();
    if q > CENSUS_GUARD_Q && !opts.force {
        return Err(Error::SizeGuard(format!(
            "blocking census for q = {q} walks 2^{} point sets; pass force to run it",
            crate::pg2::plane_size(q)
        )));
    }
    let plane = Plane::new(spec);
    let lines = plane.line_masks().ok_or_else(|| {
        Error::SizeGuard(format!("q = {q}: planes above 64 points are not supported"))
    })?;
    let n = lines.len();
    if n >= 64 {
        return Err(Error::SizeGuard(format!(
            "q = {q}: 2^{n} subsets cannot be indexed"
        )));
    }
    let s = opts.shard_bits(n) as usize;
    let low = n - s;

    let per_shard = |shard: u64| -> Shard {
        let mut out = Shard {
            by_size: vec![0; n + 1],
            nontrivial: vec![0; n + 1],
            smallest: Vec::new(),
            smallest_size: u32::MAX,
        };
        let start = shard << low;
        for mask in start..start + (1u64 << low) {
            if !lines.iter().all(|&l| l & mask != 0) {
                continue;
            }
            let size = mask.count_ones();
            out.by_size[size as usize] += 1;
            if lines.iter().any(|&l| l & !mask == 0) {
                continue;
            }
            out.nontrivial[size as usize] += 1;
            if size < out.smallest_size {
                out.smallest_size = size;
                out.smallest.clear();
            }
            if size == out.smallest_size {
                out.smallest.push(mask);
            }
        }
        out
    };
    let parts: Vec<Shard> = opts.run(|| (0..1u64 << s).into_par_iter().map(per_shard).collect())?;

    let mut by_size = vec![0u64; n + 1];
    let mut nontrivial = vec![0u64; n + 1];
    let min = parts
        .iter()
        .map(|p| p.smallest_size)
        .min()
        .unwrap_or(u32::MAX);
    let mut smallest = Vec::new();
    for p in parts {
        for t in 0..=n {
            by_size[t] += p.by_size[t];
            nontrivial[t] += p.nontrivial[t];
        }
        if p.smallest_size == min {
            smallest.extend(p.smallest);
        }
    }
    smallest.sort_unstable();
    let to_map = |v: Vec<u64>| -> BTreeMap<u32, u64> {
        v.into_iter()
            .enumerate()
            .filter(|(_, c)| *c > 0)
            .map(|(t, c)| (t as u32, c))
            .collect()
    };
    Ok(BlockingCensus {
        q,
        by_size: to_map(by_size),
        nontrivial_by_size: to_map(nontrivial),
        smallest_nontrivial: smallest,
    })
}
