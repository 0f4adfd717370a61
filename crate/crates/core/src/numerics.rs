//! Riemann zeta on the real half-line s > 1.
//!
//! Euler–Maclaurin summation: a head sum up to N - 1, the integral tail,
//! the half term at N and Bernoulli corrections through B6. For real s the
//! remainder is bounded by the magnitude of the first omitted (B8) term, so N
//! is increased until that bound drops below the target.

use crate::error::{Error, Result};

/// Smallest admissible distance from the pole at s = 1.
pub const POLE_GUARD: f64 = 1e-6;

/// Truncation target for the remainder term.
const TRUNCATION_TARGET: f64 = 1e-14;

// B2/2!, B4/4!, B6/6!, B8/8!
const BERNOULLI_OVER_FACTORIAL: [f64; 4] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZetaResult {
    pub s: f64,
    pub value: f64,
    /// Truncation bound plus an estimate of floating-point rounding.
    pub abs_error_bound: f64,
    /// Number of head terms used (N).
    pub terms: usize,
}

/// `s (s+1) ... (s+k-1)`
fn rising(s: f64, k: usize) -> f64 {
    (0..k).map(|i| s + i as f64).product()
}

fn remainder_bound(s: f64, n: f64) -> f64 {
    (BERNOULLI_OVER_FACTORIAL[3] * rising(s, 7)).abs() * n.powf(-s - 7.0)
}

pub fn zeta(s: f64) -> Result<ZetaResult> {
    if !s.is_finite() || s <= 1.0 + POLE_GUARD {
        return Err(Error::ZetaDomain(s));
    }

    let mut n: usize = 8;
    while remainder_bound(s, n as f64) > TRUNCATION_TARGET {
        n *= 2;
    }
    // back off to the smallest adequate N to keep the head sum short
    let (mut lo, mut hi) = (n / 2, n);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if remainder_bound(s, mid as f64) > TRUNCATION_TARGET {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let n = hi.max(2);
    let nf = n as f64;

    // smallest terms first
    let head: f64 = (1..n).rev().map(|k| (k as f64).powf(-s)).sum();
    let mut tail = nf.powf(1.0 - s) / (s - 1.0) + 0.5 * nf.powf(-s);
    for (j, c) in BERNOULLI_OVER_FACTORIAL[..3].iter().enumerate() {
        let k = 2 * (j + 1);
        tail += c * rising(s, k - 1) * nf.powf(1.0 - s - k as f64);
    }
    let value = head + tail;
    let rounding = (n as f64 + 8.0) * f64::EPSILON * value;
    Ok(ZetaResult {
        s,
        value,
        abs_error_bound: remainder_bound(s, nf) + rounding,
        terms: n,
    })
}
