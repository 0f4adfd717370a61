//! Winding numbers of closed polygonal curves.
//!
//! Point queries count signed crossings of a ray with exact predicates. The
//! full field comes from a slab (trapezoidal) decomposition: cutting the
//! plane at the x-coordinate of every vertex and every pairwise intersection
//! leaves, inside each open vertical slab, a stack of non-crossing segment
//! pieces. The gaps between consecutive pieces are trapezoids of constant
//! winding, with exact rational areas.

mod lattice;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;

pub use lattice::LatticeCurve;

use crate::curve::{bbox_of, collapse_repeats, ClosedCurve};
use crate::error::{Error, Result};
use crate::geom::{rat, segment_intersection, to_f64, tree_sum, Intersection, Point, Rational, Segment};

/// Winding number of `curve` around `point` by signed crossings of the
/// rightward horizontal ray. An edge counts iff exactly one endpoint lies
/// strictly above the ray.
pub fn winding_at(curve: &ClosedCurve, point: &Point) -> Result<i64> {
    winding_at_ring(curve.vertices(), point)
}

pub(crate) fn winding_at_ring(ring: &[Point], point: &Point) -> Result<i64> {
    let n = ring.len();
    let mut w = 0;
    for i in 0..n {
        let (a, b) = (&ring[i], &ring[(i + 1) % n]);
        if a == b {
            continue;
        }
        let a_above = a.y > point.y;
        let b_above = b.y > point.y;
        let spans = a_above != b_above || (a.y == point.y || b.y == point.y);
        if !spans {
            continue;
        }
        let o = crate::geom::orient(a, b, point);
        if o == 0 && on_segment_box(a, b, point) {
            return Err(Error::OnCurve(point.to_string()));
        }
        if !a_above && b_above && o > 0 {
            w += 1;
        } else if a_above && !b_above && o < 0 {
            w -= 1;
        }
    }
    Ok(w)
}

/// Same count with an upward vertical ray. Agrees with [`winding_at`]
/// wherever both are defined.
pub fn winding_at_vertical(curve: &ClosedCurve, point: &Point) -> Result<i64> {
    let ring = curve.vertices();
    let n = ring.len();
    let mut w = 0;
    for i in 0..n {
        let (a, b) = (&ring[i], &ring[(i + 1) % n]);
        let a_right = a.x > point.x;
        let b_right = b.x > point.x;
        let spans = a_right != b_right || (a.x == point.x || b.x == point.x);
        if !spans {
            continue;
        }
        let o = crate::geom::orient(a, b, point);
        if o == 0 && on_segment_box(a, b, point) {
            return Err(Error::OnCurve(point.to_string()));
        }
        // An edge passing above the point counts -1 heading +x, +1 heading -x.
        if !a_right && b_right && o < 0 {
            w -= 1;
        } else if a_right && !b_right && o > 0 {
            w += 1;
        }
    }
    Ok(w)
}

fn on_segment_box(a: &Point, b: &Point, p: &Point) -> bool {
    let (xlo, xhi) = if a.x <= b.x { (&a.x, &b.x) } else { (&b.x, &a.x) };
    let (ylo, yhi) = if a.y <= b.y { (&a.y, &b.y) } else { (&b.y, &a.y) };
    *xlo <= p.x && p.x <= *xhi && *ylo <= p.y && p.y <= *yhi
}

/// A trapezoid (or triangle) of constant winding. The polygon is listed
/// counterclockwise without repeated vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub polygon: Vec<Point>,
    pub winding: i64,
    pub area: Rational,
}

impl Cell {
    /// True when `p` lies in the open interior of the cell.
    pub fn contains_strictly(&self, p: &Point) -> bool {
        let n = self.polygon.len();
        n >= 3
            && (0..n).all(|i| crate::geom::orient(&self.polygon[i], &self.polygon[(i + 1) % n], p) > 0)
    }

    /// Exact vertex average, which lies inside the (convex) cell.
    pub fn centroid(&self) -> Point {
        let k = rat(self.polygon.len() as i64);
        let sx = tree_sum(self.polygon.iter().map(|p| p.x.clone()).collect());
        let sy = tree_sum(self.polygon.iter().map(|p| p.y.clone()).collect());
        Point::new(sx / &k, sy / &k)
    }
}

/// The function `z -> winding(curve, z)` over the curve's bounding box, as
/// cells with pairwise disjoint interiors. Cells are not merged across slab
/// boundaries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindingField {
    pub cells: Vec<Cell>,
    pub bbox: (Point, Point),
}

impl WindingField {
    /// Σ winding · area, exactly. Equals the curve's shoelace area.
    pub fn signed_measure(&self) -> Rational {
        tree_sum(
            self.cells
                .iter()
                .filter(|c| c.winding != 0)
                .map(|c| &c.area * rat(c.winding))
                .collect(),
        )
    }

    /// Σ |winding|^k · area for integer `k`, exactly.
    pub fn abs_moment(&self, k: u32) -> Rational {
        tree_sum(
            self.cells
                .iter()
                .filter(|c| c.winding != 0)
                .map(|c| &c.area * Rational::from_integer(BigInt::from(c.winding.abs()).pow(k)))
                .collect(),
        )
    }

    pub fn total_area(&self) -> Rational {
        tree_sum(self.cells.iter().map(|c| c.area.clone()).collect())
    }

    /// The cell whose open interior contains `p`, if any.
    pub fn cell_at(&self, p: &Point) -> Option<&Cell> {
        self.cells.iter().find(|c| c.contains_strictly(p))
    }

    pub fn is_zero(&self) -> bool {
        self.cells.iter().all(|c| c.winding == 0)
    }
}

pub fn winding_field(curve: &ClosedCurve) -> WindingField {
    winding_field_of_ring(curve.vertices())
}

/// Field of a closed vertex ring that may repeat points or be degenerate.
pub fn winding_field_of_ring(ring: &[Point]) -> WindingField {
    let ring = collapse_repeats(ring.to_vec());
    if ring.is_empty() {
        let o = Point::from_ints(0, 0);
        return WindingField {
            cells: vec![],
            bbox: (o.clone(), o),
        };
    }
    let bbox = bbox_of(&ring);
    if ring.len() < 3 {
        return WindingField { cells: vec![], bbox };
    }

    let n = ring.len();
    let segments: Vec<Segment> = (0..n)
        .map(|i| Segment::new(ring[i].clone(), ring[(i + 1) % n].clone()).expect("repeats collapsed"))
        .collect();

    let events = event_abscissae(&segments);
    let pieces: Vec<SlabPiece> = segments
        .par_iter()
        .filter_map(|s| SlabPiece::new(s, &events))
        .collect();

    let slab_count = events.len() - 1;
    let mut active: Vec<Vec<usize>> = vec![Vec::new(); slab_count];
    for (idx, piece) in pieces.iter().enumerate() {
        for slab in active.iter_mut().take(piece.last).skip(piece.first) {
            slab.push(idx);
        }
    }

    let cells: Vec<Vec<Cell>> = (0..slab_count)
        .into_par_iter()
        .map(|k| slab_cells(k, &events, &pieces, &active[k], &bbox))
        .collect();

    WindingField {
        cells: cells.into_iter().flatten().collect(),
        bbox,
    }
}

/// Sorted, deduplicated x-coordinates of all vertices and pairwise intersections.
fn event_abscissae(segments: &[Segment]) -> Vec<Rational> {
    let boxes: Vec<(Point, Point)> = segments
        .iter()
        .map(|s| bbox_of(&[s.a().clone(), s.b().clone()]))
        .collect();
    let mut xs: Vec<Rational> = (0..segments.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut out = vec![segments[i].a().x.clone()];
            for j in (i + 1)..segments.len() {
                let (lo1, hi1) = &boxes[i];
                let (lo2, hi2) = &boxes[j];
                if hi1.x < lo2.x || hi2.x < lo1.x || hi1.y < lo2.y || hi2.y < lo1.y {
                    continue;
                }
                match segment_intersection(&segments[i], &segments[j]) {
                    Intersection::None => {}
                    Intersection::Point(p) => out.push(p.x),
                    Intersection::Overlap(s) => {
                        out.push(s.a().x.clone());
                        out.push(s.b().x.clone());
                    }
                }
            }
            out
        })
        .collect();
    xs.par_sort_unstable();
    xs.dedup();
    xs
}

/// A non-vertical segment cut at the event abscissae it spans.
struct SlabPiece {
    first: usize,
    last: usize,
    /// y at events[first..=last]
    ys: Vec<Rational>,
    /// Winding change when passing the segment downward.
    down_delta: i64,
}

impl SlabPiece {
    fn new(s: &Segment, events: &[Rational]) -> Option<Self> {
        let (a, b) = (s.a(), s.b());
        let (l, r, down_delta) = match a.x.cmp(&b.x) {
            Ordering::Equal => return None,
            Ordering::Less => (a, b, -1),
            Ordering::Greater => (b, a, 1),
        };
        let first = events.binary_search(&l.x).expect("vertex is an event");
        let last = events.binary_search(&r.x).expect("vertex is an event");
        let slope = (&r.y - &l.y) / (&r.x - &l.x);
        let mut ys = Vec::with_capacity(last - first + 1);
        ys.push(l.y.clone());
        for e in &events[first + 1..last] {
            ys.push(&l.y + (e - &l.x) * &slope);
        }
        ys.push(r.y.clone());
        Some(SlabPiece {
            first,
            last,
            ys,
            down_delta,
        })
    }

    fn heights(&self, slab: usize) -> (&Rational, &Rational) {
        (&self.ys[slab - self.first], &self.ys[slab + 1 - self.first])
    }
}

fn slab_cells(
    k: usize,
    events: &[Rational],
    pieces: &[SlabPiece],
    active: &[usize],
    bbox: &(Point, Point),
) -> Vec<Cell> {
    let (x0, x1) = (&events[k], &events[k + 1]);
    let width = x1 - x0;

    // Pieces never cross inside the open slab, so y0 + y1 orders them.
    let mut order: Vec<(Rational, usize)> = active
        .iter()
        .map(|&i| {
            let (y0, y1) = pieces[i].heights(k);
            (y0 + y1, i)
        })
        .collect();
    order.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));

    let top = &bbox.1.y;
    let bottom = &bbox.0.y;
    let mut cells = Vec::with_capacity(order.len() + 1);
    let mut winding = 0i64;
    let mut upper: (Rational, Rational) = (top.clone(), top.clone());
    for (_, i) in &order {
        let (y0, y1) = pieces[*i].heights(k);
        push_trapezoid(&mut cells, x0, x1, &width, (y0, y1), (&upper.0, &upper.1), winding);
        winding += pieces[*i].down_delta;
        upper = (y0.clone(), y1.clone());
    }
    debug_assert_eq!(winding, 0, "closed curve must net zero crossings");
    push_trapezoid(&mut cells, x0, x1, &width, (bottom, bottom), (&upper.0, &upper.1), winding);
    cells
}

fn push_trapezoid(
    cells: &mut Vec<Cell>,
    x0: &Rational,
    x1: &Rational,
    width: &Rational,
    lower: (&Rational, &Rational),
    upper: (&Rational, &Rational),
    winding: i64,
) {
    let h0 = upper.0 - lower.0;
    let h1 = upper.1 - lower.1;
    let area = width * (&h0 + &h1) / rat(2);
    if !area.is_positive() {
        return;
    }
    let polygon = collapse_repeats(vec![
        Point::new(x0.clone(), lower.0.clone()),
        Point::new(x1.clone(), lower.1.clone()),
        Point::new(x1.clone(), upper.1.clone()),
        Point::new(x0.clone(), upper.0.clone()),
    ]);
    cells.push(Cell {
        polygon,
        winding,
        area,
    });
}

/// `(Σ |winding|^q · area)^(1/q)` over a field.
#[derive(Clone, Debug, PartialEq)]
pub struct LqNorm {
    pub q: f64,
    pub value: f64,
    /// `Σ |winding|^q · area` as a float.
    pub sum: f64,
    /// The same sum kept exact, available when `q` is an integer.
    pub exact_sum: Option<Rational>,
}

pub fn lq_norm(field: &WindingField, q: f64) -> Result<LqNorm> {
    if q.is_nan() || q < 1.0 {
        return Err(Error::QBelowOne(q));
    }
    if q.fract() == 0.0 && q <= 64.0 {
        let exact = field.abs_moment(q as u32);
        let sum = to_f64(&exact);
        return Ok(LqNorm {
            q,
            value: if q == 1.0 { sum } else { sum.powf(1.0 / q) },
            sum,
            exact_sum: Some(exact),
        });
    }
    // |w|^q is the only irrational ingredient; group areas by |w| exactly first.
    let mut by_winding: Vec<(u64, Rational)> = Vec::new();
    let mut ws: Vec<u64> = field.cells.iter().filter(|c| c.winding != 0).map(|c| c.winding.unsigned_abs()).collect();
    ws.sort_unstable();
    ws.dedup();
    for w in ws {
        let area = tree_sum(
            field
                .cells
                .iter()
                .filter(|c| c.winding.unsigned_abs() == w)
                .map(|c| c.area.clone())
                .collect(),
        );
        by_winding.push((w, area));
    }
    let sum: f64 = by_winding
        .iter()
        .map(|(w, a)| (*w as f64).powf(q) * to_f64(a))
        .sum();
    Ok(LqNorm {
        q,
        value: sum.powf(1.0 / q),
        sum,
        exact_sum: None,
    })
}

/// Monte Carlo estimate of the L^q norm of the winding field, with its
/// delta-method standard error. Independent of the slab decomposition.
///
/// Points are drawn uniformly from a 2^32 x 2^32 grid over the bounding box;
/// points landing on the curve are redrawn.
pub fn lq_norm_grid_oracle(curve: &ClosedCurve, q: f64, samples: usize, seed: u64) -> Result<(f64, f64)> {
    if q.is_nan() || q < 1.0 {
        return Err(Error::QBelowOne(q));
    }
    if samples < 100 {
        return Err(Error::InvalidCurve(format!(
            "oracle needs at least 100 samples, got {samples}"
        )));
    }
    let (lo, hi) = curve.bbox();
    let w = &hi.x - &lo.x;
    let h = &hi.y - &lo.y;
    let box_area = to_f64(&(&w * &h));
    if box_area == 0.0 {
        return Ok((0.0, 0.0));
    }

    let grid = BigInt::one() << 32usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || (rng.next_u64() >> 32, rng.next_u64() >> 32);

    let lattice = LatticeCurve::new(curve.vertices(), &grid);
    let mut values = Vec::with_capacity(samples);
    match &lattice {
        Some(lc) => {
            // x = lo.x + u/2^32 * w, in lattice units (scale = lcm * 2^32)
            let (lx, ly) = lc.to_lattice(&lo).expect("vertex coordinate");
            let base = lc.scale() / &grid;
            let wl = lattice_len(&(&w * Rational::from_integer(base.clone())));
            let hl = lattice_len(&(&h * Rational::from_integer(base)));
            while values.len() < samples {
                let (u, v) = draw();
                let px = lx + u as i128 * wl;
                let py = ly + v as i128 * hl;
                if let Some(k) = lc.winding(px, py) {
                    values.push((k.unsigned_abs() as f64).powf(q));
                }
            }
        }
        None => {
            let g = Rational::from_integer(grid);
            while values.len() < samples {
                let (u, v) = draw();
                let p = Point::new(
                    &lo.x + &w * Rational::from_integer(u.into()) / &g,
                    &lo.y + &h * Rational::from_integer(v.into()) / &g,
                );
                if let Ok(k) = winding_at(curve, &p) {
                    values.push((k.unsigned_abs() as f64).powf(q));
                }
            }
        }
    }

    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let integral = box_area * mean;
    let se_integral = box_area * (var / n).sqrt();
    if integral == 0.0 {
        return Ok((0.0, 0.0));
    }
    let value = integral.powf(1.0 / q);
    let se = value / (q * integral) * se_integral;
    Ok((value, se))
}

fn lattice_len(r: &Rational) -> i128 {
    use num_traits::ToPrimitive;
    debug_assert!(r.is_integer());
    r.to_integer().to_i128().expect("lattice range checked")
}

/// Winding numbers at the centers of a `width x height` pixel grid over the
/// curve's bounding box, rows top to bottom. `None` marks centers on the curve.
pub fn sample_grid(curve: &ClosedCurve, width: usize, height: usize) -> Vec<Option<i64>> {
    let (lo, hi) = curve.bbox();
    let w = &hi.x - &lo.x;
    let h = &hi.y - &lo.y;
    let center = |i: usize, j: usize| {
        Point::new(
            &lo.x + &w * Rational::new(BigInt::from(2 * i + 1), BigInt::from(2 * width)),
            &hi.y - &h * Rational::new(BigInt::from(2 * j + 1), BigInt::from(2 * height)),
        )
    };
    let refine = BigInt::from(2 * width) * BigInt::from(2 * height);
    let lattice = LatticeCurve::new(curve.vertices(), &refine);
    (0..height)
        .into_par_iter()
        .flat_map_iter(|j| {
            let lattice = lattice.as_ref();
            (0..width).map(move |i| {
                let p = center(i, j);
                match lattice.and_then(|lc| lc.to_lattice(&p)) {
                    Some((x, y)) => lattice.unwrap().winding(x, y),
                    None => winding_at(curve, &p).ok(),
                }
            })
        })
        .collect()
}

impl LqNorm {
    pub fn is_zero(&self) -> bool {
        self.sum.is_zero()
    }
}
