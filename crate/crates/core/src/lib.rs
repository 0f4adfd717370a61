//! Exact winding-number fields of closed polygonal curves, their p-variation,
//! and a point-removal cascade certifying the bound
//! `||w||_q <= C(p, q) * ||gamma||_p^2` for `1 <= p < 2`, `1 <= q < 2/p`.
//!
//! Geometry is carried out in arbitrary-precision rationals; only the final
//! norms and p-variations are reported in `f64`.

pub mod curve;
pub mod error;
pub mod families;
pub mod geom;
pub mod numerics;
pub mod winding;
pub mod young;

pub use curve::{p_variation, p_variation_pow, ClosedCurve, Interval, Partition};
pub use error::{Error, Result};
pub use families::{sweep, FamilyRegistry, FamilySpec, SweepConfig, SweepOptions, SweepRow};
pub use geom::{Point, Rational, Segment};
pub use numerics::{zeta, ZetaResult};
pub use winding::{lq_norm, winding_at, winding_field, Cell, LqNorm, WindingField};
pub use young::{check_inequality, reduce, BoundParams, InequalityReport, ReductionCertificate};
