//! Deterministic curve generators and the (p, q) sweep harness.
//!
//! Each generator is a [`CurveFamily`] registered by name in a
//! [`FamilyRegistry`]; callers pick one at runtime with a [`FamilySpec`].
//! Randomized families draw from ChaCha8 seeded with `seed`, using stream
//! `attempt` so that a degenerate draw can be retried reproducibly.
//!
//! Regular polygons use vertices rounded to the 2^-20 grid. The roots of
//! unity are evaluated with a fixed Taylor polynomial built only from IEEE
//! basic operations, so the rounded table is the same on every platform.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;

use crate::curve::ClosedCurve;
use crate::error::{Error, Result};
use crate::geom::{rat, ratio, Point, Rational};
use crate::winding::winding_field;
use crate::young::{check_with_field, BoundParams, InequalityReport};

/// Attempts made before a randomized family gives up on degenerate output.
pub const MAX_ATTEMPTS: u64 = 16;

/// Denominator of regular-polygon vertex coordinates.
pub const ROOT_GRID_BITS: u32 = 20;

/// Denominator of random-walk and perturbation coordinates.
pub const WALK_GRID_BITS: u32 = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub family: String,
    pub n: usize,
    pub seed: u64,
    pub scale: Rational,
    /// Star polygons only: vertex `i` sits at root `i * step mod n`.
    pub step: Option<usize>,
}

impl FamilySpec {
    pub fn new(family: &str, n: usize) -> Self {
        FamilySpec {
            family: normalize_name(family),
            n,
            seed: 0,
            scale: rat(1),
            step: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_scale(mut self, scale: Rational) -> Self {
        self.scale = scale;
        self
    }

    pub fn with_step(mut self, step: usize) -> Self {
        self.step = Some(step);
        self
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} n={} seed={}", self.family, self.n, self.seed)
    }
}

/// Family names are kebab-case; snake-case spellings are accepted.
pub fn normalize_name(name: &str) -> String {
    name.trim().to_ascii_lowercase().replace('_', "-")
}

pub trait CurveFamily: Send + Sync {
    fn name(&self) -> &'static str;

    /// Other names accepted for this family.
    fn aliases(&self) -> &'static [&'static str] {
        &[]
    }

    fn validate(&self, spec: &FamilySpec) -> Result<()>;

    /// Raw vertex list before scaling and repeat collapsing. Deterministic
    /// families ignore `rng`.
    fn points(&self, spec: &FamilySpec, rng: &mut ChaCha8Rng) -> Vec<Point>;
}

pub struct FamilyRegistry {
    families: BTreeMap<&'static str, Box<dyn CurveFamily>>,
    aliases: BTreeMap<&'static str, &'static str>,
}

impl FamilyRegistry {
    pub fn empty() -> Self {
        FamilyRegistry {
            families: BTreeMap::new(),
            aliases: BTreeMap::new(),
        }
    }

    pub fn with_builtins() -> Self {
        let mut r = FamilyRegistry::empty();
        r.register(Box::new(RegularPolygon));
        r.register(Box::new(ClosedRandomWalk));
        r.register(Box::new(StarPolygon));
        r.register(Box::new(FigureEight));
        r.register(Box::new(PerturbedPolygon));
        r
    }

    pub fn register(&mut self, family: Box<dyn CurveFamily>) {
        for alias in family.aliases() {
            self.aliases.insert(alias, family.name());
        }
        self.families.insert(family.name(), family);
    }

    pub fn get(&self, name: &str) -> Result<&dyn CurveFamily> {
        let key = normalize_name(name);
        let canonical = self.aliases.get(key.as_str()).copied().unwrap_or(key.as_str());
        self.families
            .get(canonical)
            .map(|b| b.as_ref())
            .ok_or(Error::UnknownFamily(key))
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.families.keys().copied()
    }

    pub fn generate(&self, spec: &FamilySpec) -> Result<ClosedCurve> {
        let family = self.get(&spec.family)?;
        family.validate(spec)?;
        if spec.scale <= rat(0) {
            return Err(Error::InvalidFamily(format!("scale {} must be positive", spec.scale)));
        }
        for attempt in 0..MAX_ATTEMPTS {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            rng.set_stream(attempt);
            let pts = family
                .points(spec, &mut rng)
                .into_iter()
                .map(|p| p.scale(&spec.scale))
                .collect();
            match ClosedCurve::from_points_collapsed(pts) {
                Ok(c) => return Ok(c),
                Err(Error::DegenerateCurve(_)) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(Error::InvalidFamily(format!(
            "{spec}: still degenerate after {MAX_ATTEMPTS} attempts"
        )))
    }
}

impl Default for FamilyRegistry {
    fn default() -> Self {
        FamilyRegistry::with_builtins()
    }
}

fn require_n(spec: &FamilySpec, min: usize) -> Result<()> {
    if spec.n < min || spec.n > 1 << 16 {
        return Err(Error::InvalidFamily(format!(
            "{}: n = {} outside [{min}, 65536]",
            spec.family, spec.n
        )));
    }
    Ok(())
}

/// `sin` and `cos` of `r`, |r| <= pi/4, from fixed Taylor polynomials.
fn sin_cos_reduced(r: f64) -> (f64, f64) {
    let r2 = r * r;
    // Horner through r^23 / r^22; terms beyond are below 1e-30 on the range.
    let mut s = 0.0;
    let mut c = 0.0;
    for k in (0..12).rev() {
        let sk = (2 * k + 2) as f64 * (2 * k + 3) as f64;
        let ck = (2 * k + 1) as f64 * (2 * k + 2) as f64;
        s = 1.0 - r2 / sk * s;
        c = 1.0 - r2 / ck * c;
    }
    (r * s, c)
}

/// `(cos, sin)` of `2 pi m / n`, platform independent.
pub fn unit_root_f64(m: usize, n: usize) -> (f64, f64) {
    let m = (m % n) as i64;
    let n = n as i64;
    // nearest quarter turn k, remainder angle 2 pi (4m - kn) / (4n)
    let k = (8 * m + n).div_euclid(2 * n);
    let r = 2.0 * std::f64::consts::PI * (4 * m - k * n) as f64 / (4 * n) as f64;
    let (s, c) = sin_cos_reduced(r);
    match k.rem_euclid(4) {
        0 => (c, s),
        1 => (-s, c),
        2 => (-c, -s),
        _ => (s, -c),
    }
}

fn grid_round(v: f64, bits: u32) -> Rational {
    let d = 1i64 << bits;
    ratio((v * d as f64).round() as i64, d)
}

/// The `m`-th of `n` roots of unity, rounded to the 2^-20 grid.
pub fn unit_root(m: usize, n: usize) -> Point {
    let (c, s) = unit_root_f64(m, n);
    Point::new(grid_round(c, ROOT_GRID_BITS), grid_round(s, ROOT_GRID_BITS))
}

/// Uniform integer in `[-half, half]`.
fn symmetric_draw(rng: &mut ChaCha8Rng, half: u64) -> i64 {
    let span = 2 * half + 1;
    // rejection sampling keeps the draw exactly uniform
    let zone = u64::MAX - u64::MAX % span;
    loop {
        let v = rng.next_u64();
        if v < zone {
            return (v % span) as i64 - half as i64;
        }
    }
}

pub struct RegularPolygon;

impl CurveFamily for RegularPolygon {
    fn name(&self) -> &'static str {
        "regular-polygon"
    }

    fn validate(&self, spec: &FamilySpec) -> Result<()> {
        require_n(spec, 3)
    }

    fn points(&self, spec: &FamilySpec, _: &mut ChaCha8Rng) -> Vec<Point> {
        (0..spec.n).map(|i| unit_root(i, spec.n)).collect()
    }
}

pub struct StarPolygon;

impl StarPolygon {
    /// Smallest step >= 2 below n/2 coprime to n, else 1.
    pub fn default_step(n: usize) -> usize {
        (2..n.div_ceil(2)).find(|&s| s.gcd(&n) == 1).unwrap_or(1)
    }
}

impl CurveFamily for StarPolygon {
    fn name(&self) -> &'static str {
        "star"
    }

    fn aliases(&self) -> &'static [&'static str] {
        &["star-polygon"]
    }

    fn validate(&self, spec: &FamilySpec) -> Result<()> {
        require_n(spec, 3)?;
        let step = spec.step.unwrap_or_else(|| StarPolygon::default_step(spec.n));
        if step == 0 || step >= spec.n || step.gcd(&spec.n) != 1 {
            return Err(Error::InvalidFamily(format!(
                "star: step {step} must lie in [1, n) with gcd(n, step) = 1 (n = {})",
                spec.n
            )));
        }
        Ok(())
    }

    fn points(&self, spec: &FamilySpec, _: &mut ChaCha8Rng) -> Vec<Point> {
        let step = spec.step.unwrap_or_else(|| StarPolygon::default_step(spec.n));
        (0..spec.n).map(|i| unit_root(i * step, spec.n)).collect()
    }
}

/// The bowtie (0,0), (1,1), (1,0), (0,1); for n > 4 its edges carry extra
/// collinear vertices so the curve has exactly n vertices.
pub struct FigureEight;

impl CurveFamily for FigureEight {
    fn name(&self) -> &'static str {
        "figure-eight"
    }

    fn validate(&self, spec: &FamilySpec) -> Result<()> {
        require_n(spec, 4)
    }

    fn points(&self, spec: &FamilySpec, _: &mut ChaCha8Rng) -> Vec<Point> {
        let corners = [(0, 0), (1, 1), (1, 0), (0, 1)].map(|(x, y)| Point::from_ints(x, y));
        let mut out = Vec::with_capacity(spec.n);
        for e in 0..4 {
            // edge e gets ceil/floor share of the n vertices (its start included)
            let pieces = (spec.n + 3 - e) / 4;
            let (a, b) = (&corners[e], &corners[(e + 1) % 4]);
            let d = b.sub(a);
            for s in 0..pieces {
                out.push(a.add(&d.scale(&ratio(s as i64, pieces as i64))));
            }
        }
        out
    }
}

/// Origin plus n - 1 steps with coordinates uniform on the 2^-16 grid in
/// [-1, 1]; the closing edge returns to the origin.
pub struct ClosedRandomWalk;

impl CurveFamily for ClosedRandomWalk {
    fn name(&self) -> &'static str {
        "closed-random-walk"
    }

    fn validate(&self, spec: &FamilySpec) -> Result<()> {
        require_n(spec, 3)
    }

    fn points(&self, spec: &FamilySpec, rng: &mut ChaCha8Rng) -> Vec<Point> {
        let half = 1u64 << WALK_GRID_BITS;
        let den = half as i64;
        let (mut x, mut y) = (0i64, 0i64);
        let mut out = vec![Point::from_ints(0, 0)];
        for _ in 1..spec.n {
            x += symmetric_draw(rng, half);
            y += symmetric_draw(rng, half);
            out.push(Point::new(ratio(x, den), ratio(y, den)));
        }
        out
    }
}

/// Regular polygon with each vertex displaced by up to 30% of the edge
/// length per axis, on the 2^-16 grid.
pub struct PerturbedPolygon;

impl CurveFamily for PerturbedPolygon {
    fn name(&self) -> &'static str {
        "perturbed-polygon"
    }

    fn validate(&self, spec: &FamilySpec) -> Result<()> {
        require_n(spec, 3)
    }

    fn points(&self, spec: &FamilySpec, rng: &mut ChaCha8Rng) -> Vec<Point> {
        let grid = 1i64 << WALK_GRID_BITS;
        let (_, s) = unit_root_f64(1, 2 * spec.n);
        let edge = 2.0 * s;
        let half = ((0.3 * edge * grid as f64).floor() as u64).max(1);
        (0..spec.n)
            .map(|i| {
                let dx = ratio(symmetric_draw(rng, half), grid);
                let dy = ratio(symmetric_draw(rng, half), grid);
                unit_root(i, spec.n).add(&Point::new(dx, dy))
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub families: Vec<FamilySpec>,
    pub p_grid: Vec<f64>,
    /// Number of q values per p, evenly spaced over `[1, 2/p - guard]`.
    pub q_count: usize,
    pub guard: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            families: vec![],
            p_grid: vec![1.0],
            q_count: 1,
            guard: 0.05,
        }
    }
}

impl SweepConfig {
    /// Five families, n in {8, 16, 32, 64}, p in {1, 1.25, 1.5, 1.75, 1.9},
    /// four q values per p.
    pub fn acceptance() -> Self {
        let names = [
            "regular-polygon",
            "closed-random-walk",
            "star",
            "figure-eight",
            "perturbed-polygon",
        ];
        let mut families = Vec::new();
        for name in names {
            for n in [8, 16, 32, 64] {
                families.push(FamilySpec::new(name, n).with_seed(42));
            }
        }
        SweepConfig {
            families,
            p_grid: vec![1.0, 1.25, 1.5, 1.75, 1.9],
            q_count: 4,
            guard: 0.05,
        }
    }
}

/// `count` values evenly spaced over `[1, 2/p - guard]`, clamped so that
/// every value is a valid [`BoundParams`] with zeta argument clear of the
/// pole. Empty when the interval is empty.
pub fn q_grid(p: f64, guard: f64, count: usize) -> Vec<f64> {
    let limit = 2.0 / p;
    let pole_safe = limit / (1.0 + 2.0 * crate::numerics::POLE_GUARD);
    let hi = (limit - guard).min(pole_safe);
    if count == 0 || hi < 1.0 {
        return vec![];
    }
    if count == 1 || hi == 1.0 {
        return vec![1.0];
    }
    (0..count)
        .map(|i| {
            if i + 1 == count {
                hi
            } else {
                1.0 + (hi - 1.0) * i as f64 / (count - 1) as f64
            }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepOptions {
    /// Spread work over the rayon pool; otherwise run on a single thread.
    pub parallel: bool,
    /// Multiplies every bound before comparison; 1.0 for a faithful sweep.
    pub rhs_scale: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            parallel: true,
            rhs_scale: 1.0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepRow {
    pub spec: FamilySpec,
    pub report: InequalityReport,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{spec} p={p} q={q}: {source}")]
pub struct SweepError {
    pub spec: String,
    pub p: f64,
    pub q: f64,
    pub source: Error,
}

/// One report per (curve, p, q), ordered by family entry, then p, then q.
/// Failed inequalities are returned in the rows; errors (including theorem
/// violations) abort with the offending triple.
pub fn sweep(
    registry: &FamilyRegistry,
    config: &SweepConfig,
    options: SweepOptions,
) -> std::result::Result<Vec<SweepRow>, SweepError> {
    let run = || -> std::result::Result<Vec<SweepRow>, SweepError> {
        let per_curve: Vec<_> = config
            .families
            .par_iter()
            .map(|spec| sweep_one(registry, config, options, spec))
            .collect();
        let mut rows = Vec::new();
        for r in per_curve {
            rows.extend(r?);
        }
        Ok(rows)
    };
    if options.parallel {
        run()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .expect("single-thread pool");
        pool.install(run)
    }
}

fn sweep_one(
    registry: &FamilyRegistry,
    config: &SweepConfig,
    options: SweepOptions,
    spec: &FamilySpec,
) -> std::result::Result<Vec<SweepRow>, SweepError> {
    let fail = |p: f64, q: f64, source: Error| SweepError {
        spec: spec.to_string(),
        p,
        q,
        source,
    };
    let curve = registry.generate(spec).map_err(|e| fail(f64::NAN, f64::NAN, e))?;
    let field = winding_field(&curve);
    let mut rows = Vec::new();
    for &p in &config.p_grid {
        for q in q_grid(p, config.guard, config.q_count) {
            let params = BoundParams::new(p, q).map_err(|e| fail(p, q, e))?;
            let report =
                check_with_field(&curve, &field, params, options.rhs_scale).map_err(|e| fail(p, q, e))?;
            rows.push(SweepRow {
                spec: spec.clone(),
                report,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::polygon_signed_area;

    #[test]
    fn unit_roots_are_accurate() {
        for n in 3..=64 {
            for m in 0..n {
                let (c, s) = unit_root_f64(m, n);
                let t = 2.0 * std::f64::consts::PI * m as f64 / n as f64;
                assert!((c - t.cos()).abs() < 1e-14 && (s - t.sin()).abs() < 1e-14, "{m}/{n}");
                let p = unit_root(m, n);
                let (x, y) = p.to_f64();
                assert!((x - t.cos()).abs() <= 2f64.powi(-20) && (y - t.sin()).abs() <= 2f64.powi(-20));
            }
        }
    }

    #[test]
    fn square_is_exact() {
        let reg = FamilyRegistry::with_builtins();
        let sq = reg.generate(&FamilySpec::new("regular_polygon", 4)).unwrap();
        let expect: Vec<Point> = [(1, 0), (0, 1), (-1, 0), (0, -1)]
            .iter()
            .map(|&(x, y)| Point::from_ints(x, y))
            .collect();
        assert_eq!(sq.vertices(), &expect[..]);
    }

    #[test]
    fn figure_eight_is_the_bowtie() {
        let reg = FamilyRegistry::with_builtins();
        let c = reg.generate(&FamilySpec::new("figure-eight", 4).with_scale(rat(3))).unwrap();
        let expect: Vec<Point> = [(0, 0), (3, 3), (3, 0), (0, 3)]
            .iter()
            .map(|&(x, y)| Point::from_ints(x, y))
            .collect();
        assert_eq!(c.vertices(), &expect[..]);
        for n in [5, 8, 13, 64] {
            let c = reg.generate(&FamilySpec::new("figure-eight", n)).unwrap();
            assert_eq!(c.len(), n);
            assert_eq!(polygon_signed_area(c.vertices()).unwrap(), rat(0));
        }
    }

    #[test]
    fn star_validation() {
        let reg = FamilyRegistry::with_builtins();
        assert!(matches!(
            reg.generate(&FamilySpec::new("star", 4).with_step(2)),
            Err(Error::InvalidFamily(_))
        ));
        assert_eq!(StarPolygon::default_step(8), 3);
        assert_eq!(StarPolygon::default_step(5), 2);
        assert_eq!(StarPolygon::default_step(4), 1);
        let c = reg.generate(&FamilySpec::new("star_polygon", 5)).unwrap();
        assert_eq!(c.vertex(1), &unit_root(2, 5));
    }

    #[test]
    fn unknown_family_and_bad_n() {
        let reg = FamilyRegistry::with_builtins();
        assert!(matches!(reg.generate(&FamilySpec::new("spiral", 8)), Err(Error::UnknownFamily(_))));
        assert!(matches!(
            reg.generate(&FamilySpec::new("regular-polygon", 2)),
            Err(Error::InvalidFamily(_))
        ));
        assert!(reg.generate(&FamilySpec::new("regular-polygon", 5).with_scale(rat(0))).is_err());
    }

    #[test]
    fn random_families_are_deterministic() {
        let reg = FamilyRegistry::with_builtins();
        for name in ["closed-random-walk", "perturbed-polygon"] {
            let spec = FamilySpec::new(name, 32).with_seed(9);
            assert_eq!(reg.generate(&spec).unwrap(), reg.generate(&spec).unwrap());
            let other = reg.generate(&spec.clone().with_seed(10)).unwrap();
            assert_ne!(reg.generate(&spec).unwrap(), other);
        }
    }

    #[test]
    fn walk_coordinates_on_grid() {
        let reg = FamilyRegistry::with_builtins();
        let c = reg.generate(&FamilySpec::new("closed-random-walk", 50).with_seed(1)).unwrap();
        let den = num_bigint::BigInt::from(1u64 << WALK_GRID_BITS);
        for v in c.vertices() {
            assert!((&den % v.x.denom()) == num_bigint::BigInt::from(0));
            assert!((&den % v.y.denom()) == num_bigint::BigInt::from(0));
        }
        assert_eq!(c.vertex(0), &Point::from_ints(0, 0));
    }

    #[test]
    fn registry_names() {
        let names: Vec<_> = FamilyRegistry::with_builtins().names().collect();
        assert_eq!(
            names,
            ["closed-random-walk", "figure-eight", "perturbed-polygon", "regular-polygon", "star"]
        );
    }

    #[test]
    fn q_grid_rules() {
        assert_eq!(q_grid(1.0, 0.05, 4), vec![1.0, 1.3166666666666667, 1.6333333333333333, 1.95]);
        assert_eq!(q_grid(1.0, 0.05, 1), vec![1.0]);
        assert!(q_grid(1.99, 0.05, 4).is_empty());
        let g = q_grid(1.9, 0.05, 4);
        assert_eq!(g.len(), 4);
        assert!(g.iter().all(|&q| BoundParams::new(1.9, q).is_ok()));
        // no guard: the grid stops short of the pole
        let g = q_grid(1.0, 0.0, 3);
        assert!(BoundParams::new(1.0, *g.last().unwrap()).is_ok());
        assert!(crate::numerics::zeta(2.0 / g.last().unwrap()).is_ok());
    }

    #[test]
    fn small_sweeps() {
        let reg = FamilyRegistry::with_builtins();
        let cfg = SweepConfig {
            families: vec![FamilySpec::new("regular-polygon", 4)],
            ..SweepConfig::default()
        };
        let rows = sweep(&reg, &cfg, SweepOptions::default()).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].report.pass);

        let empty = SweepConfig::default();
        assert!(sweep(&reg, &empty, SweepOptions::default()).unwrap().is_empty());

        let bad = SweepConfig {
            families: vec![FamilySpec::new("nope", 4)],
            ..SweepConfig::default()
        };
        let err = sweep(&reg, &bad, SweepOptions::default()).unwrap_err();
        assert!(err.to_string().contains("nope"));
    }
}
