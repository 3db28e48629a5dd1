//! The projective plane `PG(2, q)`.
//!
//! Points are stored with their first nonzero coordinate equal to 1 and are
//! numbered in lexicographic order of their coordinate indices:
//! `[0:0:1]` is point 0, `[0:1:z]` are points `1..=q`, and `[1:y:z]` follow.
//! Lines `[a:b:c]` (the zero set of `ax + by + cz`) use the same numbering on
//! their coefficient triples.

use std::collections::BTreeSet;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::gf::{Fe, FieldSpec};

/// A set of points of the plane, as a bitset of width `q^2 + q + 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointSet {
    words: SmallVec<[u64; 2]>,
    width: usize,
}

impl PointSet {
    pub fn empty(width: usize) -> Self {
        PointSet {
            words: SmallVec::from_elem(0, width.div_ceil(64)),
            width,
        }
    }

    pub fn full(width: usize) -> Self {
        let mut s = Self::empty(width);
        for i in 0..width {
            s.insert(i);
        }
        s
    }

    pub fn from_indices(width: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(width);
        for i in indices {
            s.insert(i);
        }
        s
    }

    /// Builds a set from the low `width` bits of a mask.
    pub fn from_mask(width: usize, mask: u64) -> Self {
        let mut s = Self::empty(width);
        if width > 0 {
            s.words[0] = if width >= 64 {
                mask
            } else {
                mask & ((1u64 << width) - 1)
            };
        }
        s
    }

    /// The set as a single word, if it fits.
    pub fn as_mask(&self) -> Option<u64> {
        (self.width <= 64).then(|| self.words.first().copied().unwrap_or(0))
    }

    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        assert!(
            i < self.width,
            "point {i} outside a plane of {} points",
            self.width
        );
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        if i < self.width {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.width && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> Self {
        Self::full(self.width).difference(self)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.width).filter(move |&i| self.contains(i))
    }

    fn zip(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        assert_eq!(self.width, other.width, "point sets from different planes");
        PointSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| f(a, b))
                .collect(),
            width: self.width,
        }
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    pub coords: [Fe; 3],
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjLine {
    pub coeffs: [Fe; 3],
    pub index: usize,
    pub incidence: PointSet,
}

/// Number of points (and of lines) of `PG(2, q)`.
pub fn plane_size(q: u32) -> usize {
    let q = q as usize;
    q * q + q + 1
}

/// Scales a nonzero triple so its first nonzero entry is 1.
pub fn normalize(f: &FieldSpec, v: [Fe; 3]) -> Option<[Fe; 3]> {
    let lead = *v.iter().find(|c| !c.is_zero())?;
    let inv = f.inv(lead).ok()?;
    Some(v.map(|c| f.mul(c, inv)))
}

/// Position of a normalized triple in the canonical order.
pub fn triple_index(q: u32, v: [Fe; 3]) -> usize {
    let q = q as usize;
    let [x, y, z] = v.map(|c| c.0 as usize);
    match (x, y) {
        (0, 0) => 0,
        (0, _) => 1 + z,
        _ => 1 + q + y * q + z,
    }
}

/// Inverse of [`triple_index`].
pub fn triple_at(q: u32, index: usize) -> [Fe; 3] {
    let qu = q as usize;
    let t = |i: usize| Fe(i as u32);
    if index == 0 {
        [t(0), t(0), t(1)]
    } else if index <= qu {
        [t(0), t(1), t(index - 1)]
    } else {
        let r = index - 1 - qu;
        [t(1), t(r / qu), t(r % qu)]
    }
}

pub fn enumerate_points(spec: &FieldSpec) -> Vec<ProjPoint> {
    (0..plane_size(spec.q()))
        .map(|index| ProjPoint {
            coords: triple_at(spec.q(), index),
            index,
        })
        .collect()
}

pub fn enumerate_lines(spec: &FieldSpec) -> Vec<ProjLine> {
    let points = enumerate_points(spec);
    let n = points.len();
    (0..n)
        .map(|index| {
            let coeffs = triple_at(spec.q(), index);
            let incidence = PointSet::from_indices(
                n,
                points
                    .iter()
                    .filter(|p| dot(spec, coeffs, p.coords).is_zero())
                    .map(|p| p.index),
            );
            ProjLine {
                coeffs,
                index,
                incidence,
            }
        })
        .collect()
}

pub fn dot(f: &FieldSpec, a: [Fe; 3], b: [Fe; 3]) -> Fe {
    let mut s = f.mul(a[0], b[0]);
    s = f.add(s, f.mul(a[1], b[1]));
    f.add(s, f.mul(a[2], b[2]))
}

pub fn cross(f: &FieldSpec, a: [Fe; 3], b: [Fe; 3]) -> [Fe; 3] {
    let m = |i: usize, j: usize| f.sub(f.mul(a[i], b[j]), f.mul(a[j], b[i]));
    [m(1, 2), m(2, 0), m(0, 1)]
}

pub fn det3(f: &FieldSpec, r: [[Fe; 3]; 3]) -> Fe {
    dot(f, r[0], cross(f, r[1], r[2]))
}

/// True iff `s` meets every line.
pub fn is_blocking(s: &PointSet, lines: &[ProjLine]) -> bool {
    lines.iter().all(|l| l.incidence.intersects(s))
}

/// True iff `s` contains every point of some line.
pub fn is_trivial_blocking(s: &PointSet, lines: &[ProjLine]) -> bool {
    lines.iter().any(|l| l.incidence.is_subset(s))
}

/// The plane over a fixed field, with its points, lines and pencils.
#[derive(Clone, Debug)]
pub struct Plane {
    spec: FieldSpec,
    points: Vec<ProjPoint>,
    lines: Vec<ProjLine>,
    pencils: Vec<Vec<usize>>,
}

impl Plane {
    pub fn new(spec: &FieldSpec) -> Self {
        let points = enumerate_points(spec);
        let lines = enumerate_lines(spec);
        let mut pencils = vec![Vec::new(); points.len()];
        for l in &lines {
            for p in l.incidence.iter() {
                pencils[p].push(l.index);
            }
        }
        Plane {
            spec: spec.clone(),
            points,
            lines,
            pencils,
        }
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn q(&self) -> u32 {
        self.spec.q()
    }

    /// Number of points, which is also the number of lines.
    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn lines(&self) -> &[ProjLine] {
        &self.lines
    }

    pub fn point(&self, i: usize) -> &ProjPoint {
        &self.points[i]
    }

    pub fn line(&self, i: usize) -> &ProjLine {
        &self.lines[i]
    }

    /// Indices of the lines through a point.
    pub fn pencil(&self, point: usize) -> &[usize] {
        &self.pencils[point]
    }

    /// Index of the point with the given (not necessarily normalized) coordinates.
    pub fn point_index(&self, v: [Fe; 3]) -> Result<usize> {
        let n = normalize(&self.spec, v).ok_or_else(|| Error::OutOfRange("zero vector".into()))?;
        Ok(triple_index(self.q(), n))
    }

    pub fn line_index(&self, coeffs: [Fe; 3]) -> Result<usize> {
        self.point_index(coeffs)
    }

    /// The line through two distinct points.
    pub fn join(&self, a: usize, b: usize) -> usize {
        let c = cross(&self.spec, self.points[a].coords, self.points[b].coords);
        self.line_index(c).expect("distinct points span a line")
    }

    pub fn collinear(&self, a: usize, b: usize, c: usize) -> bool {
        let m = [a, b, c].map(|i| self.points[i].coords);
        det3(&self.spec, m).is_zero()
    }

    pub fn empty_set(&self) -> PointSet {
        PointSet::empty(self.size())
    }

    pub fn full_set(&self) -> PointSet {
        PointSet::full(self.size())
    }

    pub fn is_blocking(&self, s: &PointSet) -> bool {
        is_blocking(s, &self.lines)
    }

    pub fn is_trivial_blocking(&self, s: &PointSet) -> bool {
        is_trivial_blocking(s, &self.lines)
    }

    /// Line incidence sets as single words, when the plane has at most 64 points.
    pub fn line_masks(&self) -> Option<Vec<u64>> {
        self.lines.iter().map(|l| l.incidence.as_mask()).collect()
    }
}

/// All Baer subplanes of `PG(2, q)`, each as a set of `q + sqrt(q) + 1` points.
///
/// Every subplane is the image of the standard `PG(2, sqrt q)` under some
/// projectivity, so this walks all ordered 4-point frames, maps the standard
/// frame onto each, and deduplicates the images. Only `q = 4` is accepted.
pub fn baer_subplanes(spec: &FieldSpec) -> Result<Vec<PointSet>> {
    let q = spec.q();
    let s = (q as f64).sqrt().round() as u32;
    if s * s != q {
        return Err(Error::NotSquare(q));
    }
    if q > 4 {
        return Err(Error::SizeGuard(format!(
            "Baer subplane enumeration is limited to q = 4, got q = {q}"
        )));
    }
    let plane = Plane::new(spec);
    let sub = crate::gf::field_of_order(s as u64)?;
    let sub_elems: Vec<Fe> = sub.embedding_table(spec)?;
    let std_points: Vec<[Fe; 3]> = enumerate_points(&sub)
        .iter()
        .map(|p| p.coords.map(|c| sub_elems[c.0 as usize]))
        .collect();

    let n = plane.size();
    let mut found: BTreeSet<PointSet> = BTreeSet::new();
    for a in 0..n {
        for b in 0..n {
            if b == a {
                continue;
            }
            for c in 0..n {
                if c == a || c == b || plane.collinear(a, b, c) {
                    continue;
                }
                for d in 0..n {
                    if [a, b, c].contains(&d)
                        || plane.collinear(a, b, d)
                        || plane.collinear(a, c, d)
                        || plane.collinear(b, c, d)
                    {
                        continue;
                    }
                    let m = frame_map(spec, [a, b, c, d].map(|i| plane.point(i).coords));
                    let image = PointSet::from_indices(
                        n,
                        std_points
                            .iter()
                            .map(|&v| plane.point_index(apply(spec, &m, v)).unwrap()),
                    );
                    found.insert(image);
                }
            }
        }
    }
    Ok(found.into_iter().collect())
}

/// Matrix sending `e1, e2, e3, (1,1,1)` to multiples of the four frame points.
fn frame_map(f: &FieldSpec, frame: [[Fe; 3]; 4]) -> [[Fe; 3]; 3] {
    // Solve [P1 P2 P3] (l1, l2, l3)^T = P4 by Cramer's rule.
    let cols = [frame[0], frame[1], frame[2]];
    let rows = |c: [[Fe; 3]; 3]| -> [[Fe; 3]; 3] { [0, 1, 2].map(|i| [c[0][i], c[1][i], c[2][i]]) };
    let det = det3(f, rows(cols));
    let inv = f.inv(det).expect("frame points are in general position");
    let mut lambda = [Fe::ZERO; 3];
    for (j, l) in lambda.iter_mut().enumerate() {
        let mut c = cols;
        c[j] = frame[3];
        *l = f.mul(det3(f, rows(c)), inv);
    }
    let scaled = [0, 1, 2].map(|j| cols[j].map(|x| f.mul(x, lambda[j])));
    rows(scaled)
}

fn apply(f: &FieldSpec, m: &[[Fe; 3]; 3], v: [Fe; 3]) -> [Fe; 3] {
    [0, 1, 2].map(|i| dot(f, m[i], v))
}
