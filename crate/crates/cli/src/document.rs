//! Curve documents: `{"version": 1, "vertices": [["x", "y"], ...]}`.
//!
//! Coordinates are strings, either `"num/den"` or a plain decimal such as
//! `"-0.125"`. Decimals are read exactly by place value; exponents are
//! rejected.

use std::path::Path;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use isowind::{ClosedCurve, Point, Rational};

use crate::exit::CliError;

pub const CURVE_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveDocument {
    pub version: u32,
    pub vertices: Vec<[String; 2]>,
}

impl CurveDocument {
    pub fn from_curve(curve: &ClosedCurve) -> Self {
        CurveDocument {
            version: CURVE_VERSION,
            vertices: curve
                .vertices()
                .iter()
                .map(|p| [format_rational(&p.x), format_rational(&p.y)])
                .collect(),
        }
    }

    pub fn to_curve(&self) -> Result<ClosedCurve, CliError> {
        if self.version != CURVE_VERSION {
            return Err(CliError::Usage(format!(
                "unsupported curve document version {}",
                self.version
            )));
        }
        let pts = self
            .vertices
            .iter()
            .map(|[x, y]| Ok(Point::new(parse_rational(x)?, parse_rational(y)?)))
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(ClosedCurve::new(pts)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("curve document serializes") + "\n"
    }
}

pub fn read_curve(path: &Path) -> Result<ClosedCurve, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let doc: CurveDocument = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    doc.to_curve()
}

/// `"n"` for integers, `"num/den"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn parse_rational(s: &str) -> Result<Rational, CliError> {
    let bad = || CliError::Usage(format!("invalid coordinate {s:?}"));
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_integer(num).ok_or_else(bad)?;
        let den = parse_integer(den).ok_or_else(bad)?;
        if den.is_zero() || den < BigInt::zero() {
            return Err(bad());
        }
        return Ok(Rational::new(num, den));
    }
    let (neg, body) = match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        _ => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    let digits = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
    if int.len() + frac.len() == 0 || !digits(int) || !digits(frac) {
        return Err(bad());
    }
    let mantissa: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let scale = num_traits::pow(BigInt::from(10), frac.len());
    let value = Rational::new(mantissa, scale);
    Ok(if neg { -value } else { value })
}

fn parse_integer(t: &str) -> Option<BigInt> {
    let t = t.trim();
    let body = t.strip_prefix(['-', '+']).unwrap_or(t);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    t.parse().ok()
}

/// Positive rational from a command-line flag.
pub fn parse_scale(s: &str) -> Result<Rational, CliError> {
    let r = parse_rational(s)?;
    if r <= Rational::zero() {
        return Err(CliError::Usage(format!("scale {s} must be positive")));
    }
    Ok(r)
}
