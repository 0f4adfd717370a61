//! Exact planar primitives.
//!
//! Every coordinate is an arbitrary-precision rational, so orientation,
//! intersection and area are computed without rounding. Nothing in this
//! module touches floating point.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{CheckedDiv, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn checked_div(a: &Rational, b: &Rational) -> Result<Rational> {
    a.checked_div(b).ok_or(Error::DivisionByZero)
}

/// Pairwise (balanced) summation.
///
/// Cell areas carry unrelated denominators; summing them left to right makes
/// every partial sum carry the lcm of all denominators seen so far. A
/// balanced tree keeps the expensive additions near the root.
pub fn tree_sum(mut terms: Vec<Rational>) -> Rational {
    if terms.is_empty() {
        return Rational::zero();
    }
    while terms.len() > 1 {
        let mut next = Vec::with_capacity(terms.len().div_ceil(2));
        let mut it = terms.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a + b),
                None => next.push(a),
            }
        }
        terms = next;
    }
    terms.pop().unwrap()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(rat(x), rat(y))
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point::new(&self.x - &other.x, &self.y - &other.y)
    }

    pub fn add(&self, other: &Point) -> Point {
        Point::new(&self.x + &other.x, &self.y + &other.y)
    }

    pub fn scale(&self, k: &Rational) -> Point {
        Point::new(&self.x * k, &self.y * k)
    }

    /// Exact squared Euclidean norm of the point viewed as a vector.
    pub fn norm_sq(&self) -> Rational {
        &self.x * &self.x + &self.y * &self.y
    }

    /// Lexicographic (x, then y) order; a total order along any line.
    pub fn lex_cmp(&self, other: &Point) -> Ordering {
        self.x.cmp(&other.x).then_with(|| self.y.cmp(&other.y))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.x), to_f64(&self.y))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}, {}", self.x, self.y)
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    num_traits::ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    a: Point,
    b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Result<Self> {
        if a == b {
            return Err(Error::DegenerateSegment(a.to_string()));
        }
        Ok(Segment { a, b })
    }

    pub fn a(&self) -> &Point {
        &self.a
    }

    pub fn b(&self) -> &Point {
        &self.b
    }

    /// Closed-segment membership test.
    pub fn contains(&self, p: &Point) -> bool {
        orient(&self.a, &self.b, p) == 0 && in_box(&self.a, &self.b, p)
    }
}

fn in_box(a: &Point, b: &Point, p: &Point) -> bool {
    let (xlo, xhi) = if a.x <= b.x { (&a.x, &b.x) } else { (&b.x, &a.x) };
    let (ylo, yhi) = if a.y <= b.y { (&a.y, &b.y) } else { (&b.y, &a.y) };
    *xlo <= p.x && p.x <= *xhi && *ylo <= p.y && p.y <= *yhi
}

/// Exact cross product (b - a) x (c - a).
pub fn cross(a: &Point, b: &Point, c: &Point) -> Rational {
    (&b.x - &a.x) * (&c.y - &a.y) - (&b.y - &a.y) * (&c.x - &a.x)
}

/// Sign of (b - a) x (c - a): +1 counterclockwise, 0 collinear, -1 clockwise.
pub fn orient(a: &Point, b: &Point, c: &Point) -> i32 {
    let c = cross(a, b, c);
    if c.is_positive() {
        1
    } else if c.is_negative() {
        -1
    } else {
        0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Intersection {
    None,
    Point(Point),
    Overlap(Segment),
}

/// Exact classification of how two closed segments meet. Shared endpoints
/// are reported as point intersections.
pub fn segment_intersection(s1: &Segment, s2: &Segment) -> Intersection {
    let (a, b, c, d) = (&s1.a, &s1.b, &s2.a, &s2.b);
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);

    if o1 == 0 && o2 == 0 {
        let (p1, p2) = lex_sorted(a, b);
        let (q1, q2) = lex_sorted(c, d);
        let lo = if p1.lex_cmp(q1) == Ordering::Less { q1 } else { p1 };
        let hi = if p2.lex_cmp(q2) == Ordering::Less { p2 } else { q2 };
        return match lo.lex_cmp(hi) {
            Ordering::Greater => Intersection::None,
            Ordering::Equal => Intersection::Point(lo.clone()),
            Ordering::Less => Intersection::Overlap(Segment {
                a: lo.clone(),
                b: hi.clone(),
            }),
        };
    }

    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 * o2 > 0 || o3 * o4 > 0 {
        return Intersection::None;
    }

    // Not parallel here: parallel + touching would have been collinear.
    let ab = b.sub(a);
    let cd = d.sub(c);
    let ac = c.sub(a);
    let denom = &ab.x * &cd.y - &ab.y * &cd.x;
    let t = (&ac.x * &cd.y - &ac.y * &cd.x) / denom;
    Intersection::Point(a.add(&ab.scale(&t)))
}

fn lex_sorted<'a>(p: &'a Point, q: &'a Point) -> (&'a Point, &'a Point) {
    if p.lex_cmp(q) == Ordering::Greater {
        (q, p)
    } else {
        (p, q)
    }
}

/// Exact shoelace value: positive for counterclockwise simple polygons.
pub fn polygon_signed_area(vertices: &[Point]) -> Result<Rational> {
    if vertices.len() < 3 {
        return Err(Error::TooFewVertices(vertices.len()));
    }
    Ok(shoelace(vertices))
}

/// Shoelace without the length check; zero for fewer than three points.
pub(crate) fn shoelace(vertices: &[Point]) -> Rational {
    let n = vertices.len();
    let terms: Vec<Rational> = (0..n)
        .map(|i| {
            let p = &vertices[i];
            let q = &vertices[(i + 1) % n];
            &p.x * &q.y - &q.x * &p.y
        })
        .collect();
    tree_sum(terms) / rat(2)
}
