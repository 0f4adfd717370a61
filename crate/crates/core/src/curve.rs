//! Closed polygonal curves, partitions and p-variation.
//!
//! A [`ClosedCurve`] with `n` vertices is parameterized over `[0, 1]` with
//! vertex `i` at parameter `i / n`; index `n` is the closing copy of vertex 0.
//! Partitions and intervals are expressed in that index space.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::geom::{to_f64, Point, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedCurve {
    vertices: Vec<Point>,
}

impl ClosedCurve {
    /// At least three vertices, no zero-length edge (the closing edge included).
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidCurve(format!(
                "need at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        let n = vertices.len();
        for i in 0..n {
            if vertices[i] == vertices[(i + 1) % n] {
                return Err(Error::InvalidCurve(format!(
                    "zero-length edge between vertices {} and {}",
                    i,
                    (i + 1) % n
                )));
            }
        }
        Ok(ClosedCurve { vertices })
    }

    /// Drops consecutive repeats (cyclically) before validating.
    pub fn from_points_collapsed(points: Vec<Point>) -> Result<Self> {
        let pts = collapse_repeats(points);
        if pts.len() < 3 {
            return Err(Error::DegenerateCurve(pts.len()));
        }
        ClosedCurve::new(pts)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Vertex at index `i` in `0..=n`; index `n` wraps to vertex 0.
    pub fn vertex(&self, i: usize) -> &Point {
        &self.vertices[i % self.vertices.len()]
    }

    pub fn edges(&self) -> impl Iterator<Item = (&Point, &Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (&self.vertices[i], &self.vertices[(i + 1) % n]))
    }

    pub fn translated(&self, by: &Point) -> ClosedCurve {
        ClosedCurve {
            vertices: self.vertices.iter().map(|v| v.add(by)).collect(),
        }
    }

    /// Uniform scaling about the origin; `k` must be nonzero.
    pub fn scaled(&self, k: &Rational) -> Result<ClosedCurve> {
        if k.is_zero() {
            return Err(Error::InvalidCurve("scale factor is zero".into()));
        }
        Ok(ClosedCurve {
            vertices: self.vertices.iter().map(|v| v.scale(k)).collect(),
        })
    }

    /// Same image, opposite orientation, basepoint kept at index 0.
    pub fn reversed(&self) -> ClosedCurve {
        let mut vertices = Vec::with_capacity(self.len());
        vertices.push(self.vertices[0].clone());
        vertices.extend(self.vertices[1..].iter().rev().cloned());
        ClosedCurve { vertices }
    }

    /// Axis-aligned bounding box as (min corner, max corner).
    pub fn bbox(&self) -> (Point, Point) {
        bbox_of(&self.vertices)
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b)| pvar_term(a, b, 1.0)).sum()
    }
}

pub(crate) fn bbox_of(points: &[Point]) -> (Point, Point) {
    let mut lo = points[0].clone();
    let mut hi = points[0].clone();
    for p in &points[1..] {
        if p.x < lo.x {
            lo.x = p.x.clone();
        }
        if p.y < lo.y {
            lo.y = p.y.clone();
        }
        if p.x > hi.x {
            hi.x = p.x.clone();
        }
        if p.y > hi.y {
            hi.y = p.y.clone();
        }
    }
    (lo, hi)
}

/// Removes consecutive duplicates, including a trailing run equal to the first point.
pub(crate) fn collapse_repeats(points: Vec<Point>) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::with_capacity(points.len());
    for p in points {
        if out.last() != Some(&p) {
            out.push(p);
        }
    }
    while out.len() > 1 && out.last() == out.first() {
        out.pop();
    }
    out
}

/// Strictly increasing vertex indices into a curve of `n` vertices, always
/// containing 0 and the closing index `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    indices: Vec<usize>,
}

impl Partition {
    pub fn new(indices: Vec<usize>, curve_len: usize) -> Result<Self> {
        if indices.first() != Some(&0) || indices.last() != Some(&curve_len) {
            return Err(Error::InvalidPartition(format!(
                "must start at 0 and end at {curve_len}"
            )));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPartition("indices not strictly increasing".into()));
        }
        Ok(Partition { indices })
    }

    pub fn full(curve_len: usize) -> Self {
        Partition {
            indices: (0..=curve_len).collect(),
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }
}

/// Index interval `[lo, hi]` with `lo < hi <= n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: usize,
    hi: usize,
}

impl Interval {
    pub fn new(lo: usize, hi: usize, curve: &ClosedCurve) -> Result<Self> {
        if lo >= hi || hi > curve.len() {
            return Err(Error::InvalidPartition(format!(
                "interval [{lo}, {hi}] invalid for a curve with {} vertices",
                curve.len()
            )));
        }
        Ok(Interval { lo, hi })
    }

    pub fn whole(curve: &ClosedCurve) -> Self {
        Interval {
            lo: 0,
            hi: curve.len(),
        }
    }

    pub fn lo(&self) -> usize {
        self.lo
    }

    pub fn hi(&self) -> usize {
        self.hi
    }
}

/// Polygonal interpolation through the partition's vertices.
///
/// For a polygonal curve this is vertex subsampling. Consecutive repeats are
/// collapsed; fewer than three remaining points is [`Error::DegenerateCurve`],
/// whose winding field is identically zero.
pub fn interpolate(curve: &ClosedCurve, partition: &Partition) -> Result<ClosedCurve> {
    let idx = partition.indices();
    if *idx.last().unwrap() != curve.len() {
        return Err(Error::InvalidPartition(
            "partition does not match the curve".into(),
        ));
    }
    let pts = idx[..idx.len() - 1]
        .iter()
        .map(|&i| curve.vertex(i).clone())
        .collect();
    ClosedCurve::from_points_collapsed(pts)
}

/// `|b - a|^p` evaluated from the exact squared length.
///
/// Every p-variation value in the crate goes through this function, so
/// independent maximizers over the same vertex subsets agree bit for bit.
pub fn pvar_term(a: &Point, b: &Point, p: f64) -> f64 {
    let d2 = to_f64(&b.sub(a).norm_sq());
    if p == 1.0 {
        d2.sqrt()
    } else if p == 2.0 {
        d2
    } else {
        d2.powf(p / 2.0)
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(1.0..2.0).contains(&p) {
        return Err(Error::POutOfRange(p));
    }
    Ok(())
}

/// `max Σ |Δ|^p` over vertex subsequences of `points` that keep both ends.
///
/// O(n²) time, O(n) space. The p range is not checked here.
pub fn polyline_pvar_pow(points: &[Point], p: f64) -> f64 {
    let m = points.len();
    if m < 2 {
        return 0.0;
    }
    let mut best = vec![f64::NEG_INFINITY; m];
    best[0] = 0.0;
    for j in 1..m {
        let mut b = f64::NEG_INFINITY;
        for i in 0..j {
            let v = best[i] + pvar_term(&points[i], &points[j], p);
            if v > b {
                b = v;
            }
        }
        best[j] = b;
    }
    best[m - 1]
}

/// p-th power of the p-variation on `interval` (the whole curve if `None`).
pub fn p_variation_pow(curve: &ClosedCurve, p: f64, interval: Option<Interval>) -> Result<f64> {
    check_p(p)?;
    let iv = interval.unwrap_or_else(|| Interval::whole(curve));
    let pts: Vec<Point> = (iv.lo..=iv.hi).map(|i| curve.vertex(i).clone()).collect();
    Ok(polyline_pvar_pow(&pts, p))
}

/// p-variation of the curve on `interval` (the whole closed curve if `None`).
///
/// The supremum over all partitions is attained on vertex subsets for a
/// polygonal curve: a partition point inside a straight edge can slide to an
/// edge endpoint without decreasing the sum, since `(x+y)^p >= x^p + y^p`.
pub fn p_variation(curve: &ClosedCurve, p: f64, interval: Option<Interval>) -> Result<f64> {
    Ok(p_variation_pow(curve, p, interval)?.powf(1.0 / p))
}

/// `c1` followed by `c2` translated so that it starts where `c1` starts (and ends).
pub fn concat(c1: &ClosedCurve, c2: &ClosedCurve) -> ClosedCurve {
    let shift = c1.vertex(0).sub(c2.vertex(0));
    let mut vertices = c1.vertices.clone();
    vertices.extend(c2.vertices.iter().map(|v| v.add(&shift)));
    ClosedCurve { vertices }
}

/// Parameters `i / n` mapped to the nearest vertex index (ties to the lower).
pub fn uniform_partition(n: usize, curve: &ClosedCurve) -> Result<Partition> {
    if n < 2 {
        return Err(Error::InvalidPartition(format!("n = {n} must be at least 2")));
    }
    let len = curve.len() as i64;
    let n = n as i64;
    let mut indices: Vec<usize> = (0..=n)
        .map(|i| (2 * i * len - n + 2 * n - 1).div_euclid(2 * n) as usize)
        .collect();
    indices.dedup();
    Partition::new(indices, curve.len())
}
