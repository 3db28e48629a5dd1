//! Exact enumeration engines.
//!
//! * [`line_union_table`] counts, for every `k`, the `k`-subsets of lines by
//!   the size of their union. Inclusion–exclusion over that table gives the
//!   density of non-blocking curves ([`nb_from_table`]).
//! * [`blocking_census`] counts blocking point sets by size; weighting each by
//!   the probability that a random curve has exactly that point set gives
//!   the same density by a different route ([`nb_from_census`]).
//! * [`brute_force_density`] and [`point_count_histogram_exact`] enumerate
//!   every form of a fixed small degree.
//!
//! All engines split their work into shards keyed by a fixed prefix of the
//! search and add the per-shard integer counts, so results do not depend on
//! the thread count.

mod forms;
mod lines;
mod subsets;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::FieldSpec;
use crate::rational::ExactRational;

pub use forms::{
    brute_force_count, brute_force_density, point_count_histogram_exact, CurvePredicate,
};
pub use lines::line_union_table;
pub use subsets::{blocking_census, BlockingCensus};

/// Threading and guard settings shared by the engines.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineOptions {
    /// Worker threads; 0 uses all available cores.
    pub threads: usize,
    /// The search is split into `2^shard_bits` shards (at most 12).
    pub shard_bits: u32,
    /// Lift the default size guards.
    pub force: bool,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            threads: 0,
            shard_bits: 10,
            force: false,
        }
    }
}

impl EngineOptions {
    pub fn with_threads(threads: usize) -> Self {
        EngineOptions {
            threads,
            ..Self::default()
        }
    }

    pub(crate) fn shard_bits(&self, max: usize) -> u32 {
        self.shard_bits.min(12).min(max as u32)
    }

    pub(crate) fn run<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads)
            .build()
            .map_err(|e| Error::OutOfRange(format!("thread pool: {e}")))?;
        Ok(pool.install(f))
    }
}

/// `binom[n][k]` for `n <= 64`.
pub(crate) fn binomials() -> Vec<Vec<u64>> {
    let mut b = vec![vec![0u64; 65]; 65];
    for n in 0..=64 {
        b[n][0] = 1;
        for k in 1..=n {
            b[n][k] = b[n - 1][k - 1].wrapping_add(b[n - 1][k]);
        }
    }
    b
}

/// Counts of `k`-subsets of lines by the number of points in their union.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrequencyTable {
    pub q: u32,
    pub entries: BTreeMap<(u32, u32), u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyRow {
    pub k: u32,
    pub points: u32,
    pub frequency: u64,
}

impl FrequencyTable {
    pub fn entry(&self, k: u32, t: u32) -> u64 {
        self.entries.get(&(k, t)).copied().unwrap_or(0)
    }

    /// Rows ordered by `k`, then by number of points.
    pub fn rows(&self) -> Vec<FrequencyRow> {
        self.entries
            .iter()
            .map(|(&(k, points), &frequency)| FrequencyRow {
                k,
                points,
                frequency,
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("k,points,frequency\n");
        for r in self.rows() {
            s.push_str(&format!("{},{},{}\n", r.k, r.points, r.frequency));
        }
        s
    }

    pub fn from_csv(q: u32, text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (n == 0 && line.starts_with('k')) {
                continue;
            }
            let f: Vec<&str> = line.split(',').collect();
            let parse = |s: &str| {
                s.trim()
                    .parse::<u64>()
                    .map_err(|e| Error::Parse(format!("{s:?}: {e}")))
            };
            if f.len() != 3 {
                return Err(Error::Parse(format!(
                    "line {}: expected k,points,frequency",
                    n + 1
                )));
            }
            entries.insert((parse(f[0])? as u32, parse(f[1])? as u32), parse(f[2])?);
        }
        Ok(FrequencyTable { q, entries })
    }
}

#[derive(Serialize, Deserialize)]
struct TableWire {
    q: u32,
    rows: Vec<FrequencyRow>,
}

impl Serialize for FrequencyTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TableWire {
            q: self.q,
            rows: self.rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FrequencyTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = TableWire::deserialize(d)?;
        Ok(FrequencyTable {
            q: w.q,
            entries: w
                .rows
                .into_iter()
                .map(|r| ((r.k, r.points), r.frequency))
                .collect(),
        })
    }
}

/// `sum_{k,t} (-1)^(k+1) entry(k, t) (1 - p)^t`: the probability that some
/// line misses a random point set in which each point is present
/// independently with probability `p`.
pub fn nb_weighted(table: &FrequencyTable, p: &ExactRational) -> ExactRational {
    let miss = ExactRational::one() - p;
    let n = crate::pg2::plane_size(table.q) as u32;
    let powers: Vec<ExactRational> = (0..=n).map(|t| miss.powu(t)).collect();
    let mut acc = ExactRational::zero();
    for (&(k, t), &c) in &table.entries {
        let term = &powers[t as usize] * &ExactRational::from(c);
        acc = if k % 2 == 1 { acc + term } else { acc - term };
    }
    acc
}

/// Density of non-blocking curves by inclusion–exclusion over the table:
/// each point lies on a random curve with probability `1/q`.
pub fn nb_from_table(table: &FrequencyTable) -> ExactRational {
    nb_weighted(table, &ExactRational::new(1, table.q as i64))
}

/// The smooth-curve analogue, where each point lies on the curve with
/// probability `(q+1)/(q^2+q+1)`.
pub fn nb_ns_from_table(table: &FrequencyTable) -> ExactRational {
    let q = table.q as i64;
    nb_weighted(table, &ExactRational::new(q + 1, q * q + q + 1))
}

pub fn nb_inclusion_exclusion(spec: &FieldSpec, opts: &EngineOptions) -> Result<ExactRational> {
    Ok(nb_from_table(&line_union_table(spec, opts)?))
}

/// `1 - sum_t by_size(t) x^t (1-x)^(n-t)`.
fn one_minus_weighted(census: &BlockingCensus, x: &ExactRational) -> ExactRational {
    let n = crate::pg2::plane_size(census.q) as u32;
    let y = ExactRational::one() - x;
    let blocking: ExactRational = census
        .by_size
        .iter()
        .map(|(&t, &c)| x.powu(t) * y.powu(n - t) * ExactRational::from(c))
        .sum();
    ExactRational::one() - blocking
}

/// The weight of a point set of size `t` for a random curve: `(1/q)^t (1-1/q)^(n-t)`.
pub fn nu_weight(q: u32, t: u32) -> ExactRational {
    let n = crate::pg2::plane_size(q) as u32;
    let x = ExactRational::new(1, q as i64);
    x.powu(t) * (ExactRational::one() - x).powu(n - t)
}

/// The weight for a random smooth curve: `((q+1)/n)^t (q^2/n)^(n-t)`.
pub fn nu_ns_weight(q: u32, t: u32) -> ExactRational {
    let n = crate::pg2::plane_size(q) as u32;
    let qi = q as i64;
    let x = ExactRational::new(qi + 1, n as i64);
    let y = ExactRational::new(qi * qi, n as i64);
    x.powu(t) * y.powu(n - t)
}

pub fn nb_from_census(census: &BlockingCensus) -> ExactRational {
    one_minus_weighted(census, &ExactRational::new(1, census.q as i64))
}

pub fn nb_ns_from_census(census: &BlockingCensus) -> ExactRational {
    let q = census.q as i64;
    one_minus_weighted(census, &ExactRational::new(q + 1, q * q + q + 1))
}
