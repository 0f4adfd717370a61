//! Young's point-removal cascade and the L^q bound it certifies.
//!
//! Starting from a closed polygon with `r` vertices, the vertex whose
//! two-edge window has the smallest p-variation is deleted, repeatedly,
//! until only the basepoint and one other point remain. Each deletion
//! changes the winding field by exactly ±1 on the deleted corner triangle,
//! so the field of the original curve telescopes into `r - 2` triangle
//! indicators. Minkowski's inequality then bounds its L^q norm by the sum of
//! the triangles' `area^(1/q)`, and the per-step area bounds sum to a zeta
//! tail:
//!
//! ```text
//! ‖η‖_q  <=  Σ area_k^(1/q)  <=  2^(-1/q) Σ_{m=2}^{r-1} (‖γ‖_p^p / m)^(2/(pq))
//!        <=  2^(-1/q) (ζ(2/(pq)) - 1) ‖γ‖_p^(2/q)
//! ```
//!
//! The basepoint (parameter 0 = parameter 1) is never removed.

use num_traits::{Signed, Zero};

use crate::curve::{p_variation_pow, pvar_term, ClosedCurve};
use crate::error::{Error, Result};
use crate::geom::{orient, shoelace, to_f64, Point, Rational};
use crate::numerics::zeta;
use crate::winding::{lq_norm, winding_at_ring, winding_field, winding_field_of_ring, WindingField};

/// Relative slack for comparisons between a floating bound and an exactly
/// computed quantity.
pub const BOUND_TOL: f64 = 1e-12;

/// Relative slack on `lhs <= rhs` and `lhs <= telescoping sum`.
pub const PASS_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundParams {
    p: f64,
    q: f64,
}

impl BoundParams {
    /// Requires `1 <= p < 2` and `1 <= q < 2/p`.
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(1.0..2.0).contains(&p) {
            return Err(Error::POutOfRange(p));
        }
        if !(q >= 1.0 && q < 2.0 / p) {
            return Err(Error::QOutOfRange { p, q });
        }
        Ok(BoundParams { p, q })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// The zeta argument `2 / (pq)`, always > 1.
    pub fn zeta_arg(&self) -> f64 {
        2.0 / (self.p * self.q)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RemovalStep {
    /// Index of the removed vertex in the original curve.
    pub removed_index: usize,
    /// Its position in the reduced vertex list at the time of removal.
    pub position: usize,
    /// (previous, removed, next) in the reduced curve.
    pub triangle: [Point; 3],
    /// |signed area| of the triangle, exact.
    pub area: Rational,
    /// p-variation of the two-edge window around the removed vertex.
    pub local_pvar: f64,
    /// `local_pvar² / (2 · 2^(2/p))`
    pub lemma_bound: f64,
    /// Vertex count of the reduced curve before this removal.
    pub points_before: usize,
}

impl RemovalStep {
    /// Right-hand side of the existence bound at this stage:
    /// `2 / (points_before - 1) · ‖γ‖_p^p`.
    pub fn theorem_bound_pow(&self, initial_pvar: f64, p: f64) -> f64 {
        2.0 / (self.points_before as f64 - 1.0) * initial_pvar.powf(p)
    }

    pub fn signed_triangle_area(&self) -> Rational {
        shoelace(&self.triangle)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReductionCertificate {
    pub steps: Vec<RemovalStep>,
    /// ‖γ‖_p over the whole curve.
    pub initial_pvar: f64,
    pub p: f64,
    pub q: f64,
    /// Vertex count of the input curve.
    pub initial_points: usize,
}

impl ReductionCertificate {
    /// `Σ area^(1/q)`: the Minkowski bound on the L^q norm of the field.
    pub fn telescoping_sum(&self) -> f64 {
        let inv_q = 1.0 / self.q;
        self.steps
            .iter()
            .map(|s| to_f64(&s.area).powf(inv_q))
            .sum()
    }

    /// `Σ_steps 2^(-1/q) (‖γ‖_p^p / (points_before - 1))^(2/(pq))`, the
    /// per-step bounds before they are dominated by the zeta tail.
    pub fn cascade_bound(&self) -> f64 {
        let (p, q) = (self.p, self.q);
        let pow = self.initial_pvar.powf(p);
        self.steps
            .iter()
            .map(|s| 0.5f64.powf(1.0 / q) * (pow / (s.points_before as f64 - 1.0)).powf(2.0 / (p * q)))
            .sum()
    }

    pub fn max_step_area(&self) -> Rational {
        self.steps
            .iter()
            .map(|s| s.area.clone())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Reduced vertex ring right before step `k` (after all `k` earlier removals).
    pub fn ring_before(&self, curve: &ClosedCurve, k: usize) -> Vec<Point> {
        let mut ring: Vec<Point> = curve.vertices().to_vec();
        for s in &self.steps[..k] {
            ring.remove(s.position);
        }
        ring
    }

    /// Checks every invariant the cascade promises. The first violation is
    /// returned as [`Error::TheoremViolation`].
    pub fn verify(&self) -> Result<()> {
        let expected = self.initial_points.saturating_sub(2);
        if self.steps.len() != expected {
            return violation(format!("{} steps, expected {expected}", self.steps.len()));
        }
        for (k, s) in self.steps.iter().enumerate() {
            if s.points_before != self.initial_points - k {
                return violation(format!("step {k}: points_before = {}", s.points_before));
            }
            if s.area != s.signed_triangle_area().abs() {
                return violation(format!("step {k}: area is not the triangle's area"));
            }
            if to_f64(&s.area) > s.lemma_bound * (1.0 + BOUND_TOL) {
                return violation(format!(
                    "step {k}: triangle area {} exceeds {}",
                    to_f64(&s.area),
                    s.lemma_bound
                ));
            }
            let bound = s.theorem_bound_pow(self.initial_pvar, self.p);
            if s.local_pvar.powf(self.p) > bound * (1.0 + BOUND_TOL) {
                return violation(format!(
                    "step {k}: window variation^p {} exceeds {bound}",
                    s.local_pvar.powf(self.p)
                ));
            }
        }
        Ok(())
    }
}

fn violation<T>(msg: String) -> Result<T> {
    Err(Error::TheoremViolation(msg))
}

/// p-th power of the window variation around `cur`:
/// `max(|a|^p + |b|^p, |a + b|^p)` with `a = cur - prev`, `b = next - cur`.
pub fn window_pvar_pow(prev: &Point, cur: &Point, next: &Point, p: f64) -> f64 {
    let legs = pvar_term(prev, cur, p) + pvar_term(cur, next, p);
    let chord = pvar_term(prev, next, p);
    legs.max(chord)
}

/// p-variation of the curve restricted to the two edges around vertex `j`.
pub fn local_pvar_after_removal_window(curve: &ClosedCurve, j: usize, p: f64) -> Result<f64> {
    let n = curve.len();
    if j == 0 || j >= n {
        return Err(Error::BadRemovalIndex(j));
    }
    if !(1.0..2.0).contains(&p) {
        return Err(Error::POutOfRange(p));
    }
    Ok(window_pvar_pow(curve.vertex(j - 1), curve.vertex(j), curve.vertex(j + 1), p).powf(1.0 / p))
}

/// Argmin over `j in 1..len` of the window variation (smallest index on
/// ties), together with its p-th power.
fn argmin_window(ring: &[Point], p: f64) -> (usize, f64) {
    let k = ring.len();
    let mut best = (1, f64::INFINITY);
    for j in 1..k {
        let w = window_pvar_pow(&ring[j - 1], &ring[j], &ring[(j + 1) % k], p);
        if w < best.1 {
            best = (j, w);
        }
    }
    best
}

fn removal_in_ring(ring: &[Point], p: f64, initial_pow: f64) -> Result<(usize, f64)> {
    let k = ring.len();
    let (j, w) = argmin_window(ring, p);
    let bound = 2.0 / (k as f64 - 1.0) * initial_pow;
    if w > bound * (1.0 + BOUND_TOL) {
        return violation(format!(
            "no removable point among {} candidates: min window variation^p {w} > {bound}",
            k - 1
        ));
    }
    Ok((j, w))
}

/// The vertex to delete next: the interior vertex with the smallest window
/// p-variation, checked against `2/(k-1) · ‖γ‖_p^p` for a curve of `k`
/// vertices.
pub fn find_removal_point(curve: &ClosedCurve, p: f64) -> Result<usize> {
    let initial_pow = p_variation_pow(curve, p, None)?;
    removal_in_ring(curve.vertices(), p, initial_pow).map(|(j, _)| j)
}

/// Runs the cascade to completion: `r - 2` removals for `r` vertices, ending
/// with two points whose winding field vanishes.
pub fn reduce(curve: &ClosedCurve, params: BoundParams) -> Result<ReductionCertificate> {
    let p = params.p;
    let initial_pow = p_variation_pow(curve, p, None)?;
    let two_pow = 2f64.powf(2.0 / p);

    let mut ring: Vec<(usize, Point)> = curve.vertices().iter().cloned().enumerate().collect();
    let mut steps = Vec::with_capacity(curve.len().saturating_sub(2));
    while ring.len() >= 3 {
        let pts: Vec<Point> = ring.iter().map(|(_, v)| v.clone()).collect();
        let k = pts.len();
        let (j, w) = removal_in_ring(&pts, p, initial_pow)?;
        let triangle = [pts[j - 1].clone(), pts[j].clone(), pts[(j + 1) % k].clone()];
        let area = shoelace(&triangle).abs();
        let local_pvar = w.powf(1.0 / p);
        steps.push(RemovalStep {
            removed_index: ring[j].0,
            position: j,
            triangle,
            area,
            local_pvar,
            lemma_bound: local_pvar * local_pvar / (2.0 * two_pow),
            points_before: k,
        });
        ring.remove(j);
    }

    Ok(ReductionCertificate {
        steps,
        initial_pvar: initial_pow.powf(1.0 / p),
        p,
        q: params.q,
        initial_points: curve.len(),
    })
}

/// `2^(-1/q) (ζ(2/(pq)) - 1) pvar^(2/q)`
pub fn rhs_bound(params: BoundParams, pvar: f64) -> Result<f64> {
    if pvar.is_nan() || pvar < 0.0 {
        return Err(Error::InvalidCurve(format!("p-variation {pvar} is negative")));
    }
    let z = zeta(params.zeta_arg())?;
    let q = params.q;
    Ok(0.5f64.powf(1.0 / q) * (z.value - 1.0) * pvar.powf(2.0 / q))
}

#[derive(Clone, Debug, PartialEq)]
pub struct InequalityReport {
    pub params: BoundParams,
    /// ‖γ‖_p over the whole curve.
    pub pvar: f64,
    /// L^q norm of the winding field.
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub telescoping_sum: f64,
    pub cascade_bound: f64,
    /// `lhs <= rhs (1 + 1e-9)`
    pub pass: bool,
    /// `lhs <= telescoping_sum (1 + 1e-9)`
    pub telescoping_ok: bool,
    pub certificate: ReductionCertificate,
}

pub fn check_inequality(curve: &ClosedCurve, params: BoundParams) -> Result<InequalityReport> {
    check_with_field(curve, &winding_field(curve), params, 1.0)
}

/// As [`check_inequality`] with a precomputed field. `rhs_scale` multiplies
/// the bound before the comparison (1.0 for a faithful check; other values
/// exist to exercise failure handling).
pub fn check_with_field(
    curve: &ClosedCurve,
    field: &WindingField,
    params: BoundParams,
    rhs_scale: f64,
) -> Result<InequalityReport> {
    let certificate = reduce(curve, params)?;
    certificate.verify()?;
    let lhs = lq_norm(field, params.q)?.value;
    let pvar = certificate.initial_pvar;
    let rhs = rhs_bound(params, pvar)? * rhs_scale;
    let telescoping_sum = certificate.telescoping_sum();
    let ratio = if rhs > 0.0 {
        lhs / rhs
    } else if lhs == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(InequalityReport {
        params,
        pvar,
        lhs,
        rhs,
        ratio,
        telescoping_sum,
        cascade_bound: certificate.cascade_bound(),
        pass: lhs <= rhs * (1.0 + PASS_TOL),
        telescoping_ok: lhs <= telescoping_sum * (1.0 + PASS_TOL),
        certificate,
    })
}

/// Recomputes the field change of step `k` from scratch and checks that it
/// is the indicator of the step's triangle, signed by its orientation.
///
/// The difference `η(before) - η(after)` is the field of `before` followed
/// by `after` reversed (both share the basepoint).
pub fn verify_step_by_differencing(curve: &ClosedCurve, cert: &ReductionCertificate, k: usize) -> Result<()> {
    let step = &cert.steps[k];
    let before = cert.ring_before(curve, k);
    let mut after = before.clone();
    after.remove(step.position);

    let mut ring = before;
    ring.push(after[0].clone());
    ring.extend(after[1..].iter().rev().cloned());
    let diff = winding_field_of_ring(&ring);

    let tri_sign = orient(&step.triangle[0], &step.triangle[1], &step.triangle[2]) as i64;
    for cell in diff.cells.iter().filter(|c| c.winding != 0) {
        if cell.winding != tri_sign {
            return violation(format!(
                "step {k}: difference field takes value {} (triangle sign {tri_sign})",
                cell.winding
            ));
        }
        let c = cell.centroid();
        if winding_at_ring(&step.triangle, &c)? != tri_sign {
            return violation(format!("step {k}: difference field is nonzero outside the triangle"));
        }
    }
    if diff.abs_moment(1) != step.area {
        return violation(format!("step {k}: difference field does not cover the triangle"));
    }
    Ok(())
}
