//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Oracles are implemented here, independently of the library code paths
//! they check. Exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use isowind::curve::{polyline_pvar_pow, pvar_term};
use isowind::geom::{ratio, to_f64};
use isowind::winding::lq_norm_grid_oracle;
use isowind::young::{check_with_field, verify_step_by_differencing};
use isowind::{
    lq_norm, p_variation_pow, reduce, winding_at, winding_field, zeta, BoundParams, ClosedCurve, FamilyRegistry,
    FamilySpec, Point, Rational, SweepConfig,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn secs(d: Duration) -> String {
    format!("{:.2} s", d.as_secs_f64())
}

// ---------------------------------------------------------------- oracles

/// Twice the signed area, by the shoelace formula over exact coordinates.
fn shoelace2(pts: &[Point]) -> Rational {
    let n = pts.len();
    let mut acc = Rational::zero();
    for i in 0..n {
        let (a, b) = (&pts[i], &pts[(i + 1) % n]);
        acc += &a.x * &b.y - &b.x * &a.y;
    }
    acc
}

fn exact_area(pts: &[Point]) -> Rational {
    shoelace2(pts) / Rational::from_integer(2.into())
}

/// Winding number by summing the turning angles seen from `(x, y)`.
fn angle_winding(pts: &[(f64, f64)], x: f64, y: f64) -> i64 {
    let n = pts.len();
    let mut total = 0.0;
    for i in 0..n {
        let (ax, ay) = (pts[i].0 - x, pts[i].1 - y);
        let (bx, by) = (pts[(i + 1) % n].0 - x, pts[(i + 1) % n].1 - y);
        total += (ax * by - ay * bx).atan2(ax * bx + ay * by);
    }
    (total / (2.0 * PI)).round() as i64
}

fn segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0);
    let (cx, cy) = (a.0 + t * dx, a.1 + t * dy);
    ((p.0 - cx).powi(2) + (p.1 - cy).powi(2)).sqrt()
}

/// Max over every vertex subset containing both ends, summed left to right.
fn brute_pvar_pow(pts: &[Point], p: f64) -> f64 {
    let m = pts.len();
    let inner = m - 2;
    let mut best = f64::NEG_INFINITY;
    for mask in 0u32..(1 << inner) {
        let mut prev = 0;
        let mut sum = 0.0;
        for k in 0..inner {
            if mask & (1 << k) != 0 {
                sum += pvar_term(&pts[prev], &pts[k + 1], p);
                prev = k + 1;
            }
        }
        sum += pvar_term(&pts[prev], &pts[m - 1], p);
        best = best.max(sum);
    }
    best
}

/// Two-edge window variation from f64 coordinates.
fn window_oracle(a: &Point, b: &Point, c: &Point, p: f64) -> f64 {
    let (ax, ay) = a.to_f64();
    let (bx, by) = b.to_f64();
    let (cx, cy) = c.to_f64();
    let len = |x: f64, y: f64| x.hypot(y);
    let u = len(bx - ax, by - ay);
    let v = len(cx - bx, cy - by);
    let w = len(cx - ax, cy - ay);
    (u.powf(p) + v.powf(p)).max(w.powf(p))
}

fn rel_le(a: f64, b: f64, tol: f64) -> bool {
    a <= b + tol * b.abs()
}

fn closed(curve: &ClosedCurve) -> Vec<Point> {
    let mut pts = curve.vertices().to_vec();
    pts.push(pts[0].clone());
    pts
}

fn walk(registry: &FamilyRegistry, n: usize, seed: u64) -> ClosedCurve {
    registry
        .generate(&FamilySpec::new("closed-random-walk", n).with_seed(seed))
        .expect("walk generates")
}

/// The curves of the acceptance sweep, plus random walks.
fn corpus(registry: &FamilyRegistry) -> Vec<ClosedCurve> {
    let mut out: Vec<ClosedCurve> = SweepConfig::acceptance()
        .families
        .iter()
        .map(|s| registry.generate(s).expect("sweep curve generates"))
        .collect();
    out.extend((0..30).map(|i| walk(registry, 5 + 2 * i as usize, 1000 + i)));
    out
}

// ---------------------------------------------------------------- criteria

fn c01_exact_area(registry: &FamilyRegistry) -> Outcome {
    let mut worst = 0.0f64;
    let mut slowest = Duration::ZERO;
    let mut ok = true;
    for n in [3, 4, 6, 8, 16, 64] {
        let t = Instant::now();
        let c = registry.generate(&FamilySpec::new("regular-polygon", n)).unwrap();
        let norm = lq_norm(&winding_field(&c), 1.0).unwrap();
        let area = exact_area(c.vertices()).abs();
        slowest = slowest.max(t.elapsed());
        ok &= norm.exact_sum.as_ref() == Some(&area);
        worst = worst.max((norm.value - to_f64(&area)).abs() / to_f64(&area));
    }
    let pass = ok && worst < 1e-12 && slowest < Duration::from_secs(1);
    outcome(
        pass,
        format!("n in {{3,4,6,8,16,64}}: exact sums equal {ok}, max rel err {worst:.1e}, slowest {}", secs(slowest)),
    )
}

fn c02_conservation(registry: &FamilyRegistry) -> Outcome {
    let t = Instant::now();
    let mut bad = 0;
    for i in 0..200u64 {
        let c = walk(registry, 3 + (i as usize % 62), i);
        if winding_field(&c).signed_measure() != exact_area(c.vertices()) {
            bad += 1;
        }
    }
    let el = t.elapsed();
    outcome(
        bad == 0 && el < Duration::from_secs(60),
        format!("200 random walks, n <= 64: {bad} mismatches, {}", secs(el)),
    )
}

fn c03_pvar_oracle(registry: &FamilyRegistry) -> Outcome {
    let mut bad = 0;
    let mut checked = 0;
    for i in 0..100u64 {
        let c = walk(registry, 3 + (i as usize % 10), 5000 + i);
        let pts = closed(&c);
        for p in [1.0, 1.3, 1.7, 1.9] {
            checked += 1;
            let dp = p_variation_pow(&c, p, None).unwrap();
            if dp.to_bits() != brute_pvar_pow(&pts, p).to_bits() || dp != polyline_pvar_pow(&pts, p) {
                bad += 1;
            }
        }
    }
    outcome(bad == 0, format!("{checked} (curve, p) pairs, n <= 12: {bad} bitwise mismatches"))
}

fn c04_winding_oracle(registry: &FamilyRegistry) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut bad = 0;
    let mut skipped = 0;
    for i in 0..50u64 {
        let c = walk(registry, 4 + (i as usize % 40), 7000 + i);
        let fpts: Vec<(f64, f64)> = c.vertices().iter().map(|p| p.to_f64()).collect();
        let (lo, hi) = c.bbox();
        let (lo, hi) = (lo.to_f64(), hi.to_f64());
        let mut done = 0;
        while done < 1000 {
            // dyadic points over the bbox padded by 10%, exact in both paths
            let u = (rng.next_u64() >> 40) as i64;
            let v = (rng.next_u64() >> 40) as i64;
            let den = 1i64 << 24;
            let x = lo.0 - 0.1 * (hi.0 - lo.0) + 1.2 * (hi.0 - lo.0) * u as f64 / den as f64;
            let y = lo.1 - 0.1 * (hi.1 - lo.1) + 1.2 * (hi.1 - lo.1) * v as f64 / den as f64;
            let near = (0..fpts.len()).any(|k| segment_distance((x, y), fpts[k], fpts[(k + 1) % fpts.len()]) < 1e-9);
            if near {
                skipped += 1;
                continue;
            }
            let pt = Point::new(Rational::from_float(x).unwrap(), Rational::from_float(y).unwrap());
            match winding_at(&c, &pt) {
                Ok(w) if w == angle_winding(&fpts, x, y) => {}
                _ => bad += 1,
            }
            done += 1;
        }
    }
    outcome(
        bad == 0,
        format!("50 curves x 1000 points: {bad} disagreements ({skipped} near-curve draws replaced)"),
    )
}

fn c05_c06_c07(registry: &FamilyRegistry) -> [Outcome; 3] {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut steps, mut lemma_bad, mut stages, mut exist_bad) = (0, 0, 0, 0);
    let (mut reports, mut tele_bad, mut diffed, mut diff_bad) = (0, 0, 0, 0);
    let p_grid = [1.0, 1.25, 1.5, 1.75, 1.9];
    for c in corpus(registry) {
        let field = winding_field(&c);
        for p in p_grid {
            let cert = reduce(&c, BoundParams::new(p, 1.0).unwrap()).unwrap();
            let initial_pow = p_variation_pow(&c, p, None).unwrap();
            for (k, step) in cert.steps.iter().enumerate() {
                let ring = cert.ring_before(&c, k);
                let m = ring.len();

                // per-step area bound, everything recomputed here
                steps += 1;
                let j = step.position;
                let tri = [&ring[j - 1], &ring[j], &ring[(j + 1) % m]];
                let area = to_f64(&exact_area(&[tri[0].clone(), tri[1].clone(), tri[2].clone()]).abs());
                let local = window_oracle(tri[0], tri[1], tri[2], p).powf(1.0 / p);
                if !rel_le(area, local * local / (2.0 * 2f64.powf(2.0 / p)), 1e-12) {
                    lemma_bad += 1;
                }

                // some interior vertex satisfies the existence bound
                stages += 1;
                let bound = 2.0 / (m as f64 - 1.0) * initial_pow;
                let any = (1..m).any(|j| {
                    rel_le(window_oracle(&ring[j - 1], &ring[j], &ring[(j + 1) % m], p), bound, 1e-12)
                });
                if !any {
                    exist_bad += 1;
                }
            }
            let q_hi = 2.0 / p - 0.05;
            let qs = [1.0, 1.0 + (q_hi - 1.0) / 3.0, 1.0 + 2.0 * (q_hi - 1.0) / 3.0, q_hi];
            for q in qs.into_iter().filter(|&q| q >= 1.0) {
                reports += 1;
                let r = check_with_field(&c, &field, BoundParams::new(p, q).unwrap(), 1.0).unwrap();
                let sum: f64 = r.certificate.steps.iter().map(|s| to_f64(&s.area).powf(1.0 / q)).sum();
                if !rel_le(r.lhs, sum, 1e-9) {
                    tele_bad += 1;
                }
            }
            if p == 1.0 && !cert.steps.is_empty() {
                for _ in 0..5 {
                    let k = (rng.next_u64() % cert.steps.len() as u64) as usize;
                    diffed += 1;
                    if verify_step_by_differencing(&c, &cert, k).is_err() {
                        diff_bad += 1;
                    }
                }
            }
        }
    }
    [
        outcome(lemma_bad == 0, format!("{steps} removal steps: {lemma_bad} area-bound violations")),
        outcome(exist_bad == 0, format!("{stages} cascade stages searched exhaustively: {exist_bad} without a removable point")),
        outcome(
            tele_bad == 0 && diff_bad == 0,
            format!(
                "{reports} reports: {tele_bad} above the telescoping sum; {diffed} steps re-differenced: {diff_bad} not the signed triangle indicator"
            ),
        ),
    ]
}

/// Parallel runs use four workers so the comparison is meaningful on any host.
fn run_sweep(extra: &[&str]) -> (Option<i32>, Vec<u8>, String, Duration) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let t = Instant::now();
    let res = Command::new(env!("CARGO_BIN_EXE_isowind"))
        .args(["sweep", "--acceptance", "-o"])
        .arg(&out)
        .args(extra)
        .env("RAYON_NUM_THREADS", "4")
        .output()
        .expect("binary runs");
    let el = t.elapsed();
    let csv = std::fs::read(&out).unwrap_or_default();
    (res.status.code(), csv, String::from_utf8_lossy(&res.stderr).into_owned(), el)
}

fn c08_c12_sweep() -> [Outcome; 2] {
    let (code, csv, stderr, el) = run_sweep(&[]);
    let text = String::from_utf8_lossy(&csv);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    let fails = rows.iter().filter(|r| !r.ends_with(",true")).count();
    let max_ratio = rows
        .iter()
        .filter_map(|r| r.split(',').nth(8)?.parse::<f64>().ok())
        .fold(0.0, f64::max);
    let c08 = outcome(
        code == Some(0) && fails == 0 && rows.len() == 400 && el < Duration::from_secs(600),
        format!(
            "{} reports, {fails} failing, max ratio {max_ratio:.6}, exit {code:?}, {} [{}]",
            rows.len(),
            secs(el),
            stderr.trim()
        ),
    );
    let (code2, csv2, _, el2) = run_sweep(&["--sequential"]);
    let c12 = outcome(
        code2 == Some(0) && !csv.is_empty() && csv == csv2,
        format!(
            "parallel vs sequential CSV: {} bytes, identical = {}, sequential {}",
            csv.len(),
            csv == csv2,
            secs(el2)
        ),
    );
    [c08, c12]
}

fn c09_zeta() -> Outcome {
    let z2 = zeta(2.0).unwrap().value;
    let z4 = zeta(4.0).unwrap().value;
    let e2 = (z2 - PI * PI / 6.0).abs();
    let e4 = (z4 - PI.powi(4) / 90.0).abs();

    // ζ(s) lies between S_N + (N+1)^(1-s)/(s-1) and S_N + N^(1-s)/(s-1)
    let s = 4.0 / 3.0;
    let n = 10_000_000u64;
    let partial: f64 = (1..=n).rev().map(|k| (k as f64).powf(-s)).sum();
    let lower = partial + ((n + 1) as f64).powf(1.0 - s) / (s - 1.0);
    let upper = partial + (n as f64).powf(1.0 - s) / (s - 1.0);
    let z = zeta(s).unwrap().value;
    let off = (lower - z).max(z - upper).max(0.0);

    let grid: Vec<f64> = (0..50).map(|i| 1.01 + (10.0 - 1.01) * (i as f64 + 0.5) / 50.0).collect();
    let vals: Vec<f64> = grid.iter().map(|&s| zeta(s).unwrap().value).collect();
    let monotone = vals.windows(2).all(|w| w[1] < w[0]);
    outcome(
        e2 < 1e-12 && e4 < 1e-12 && off < 1e-8 && monotone,
        format!(
            "|ζ(2) err| {e2:.1e}, |ζ(4) err| {e4:.1e}, ζ(4/3) outside [{lower:.12}, {upper:.12}] by {off:.1e}, decreasing on 50 points: {monotone}"
        ),
    )
}

fn c10_monte_carlo(registry: &FamilyRegistry) -> Outcome {
    let mut worst = 0.0f64;
    let mut bad = 0;
    for i in 0..50u64 {
        let c = walk(registry, 4 + (i as usize % 40), 9000 + i);
        let exact = lq_norm(&winding_field(&c), 1.0).unwrap().value;
        let (est, se) = lq_norm_grid_oracle(&c, 1.0, 100_000, i).unwrap();
        let z = if se > 0.0 { (est - exact).abs() / se } else if est == exact { 0.0 } else { f64::INFINITY };
        worst = worst.max(z);
        if z > 4.0 {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("50 curves x 1e5 samples: {bad} beyond 4 SE, worst {worst:.2} SE"))
}

fn c11_scale(registry: &FamilyRegistry) -> Outcome {
    let mut worst = 0.0f64;
    for i in 0..20u64 {
        let c = walk(registry, 4 + 3 * i as usize, 11_000 + i);
        for (p, q) in [(1.0, 1.0), (1.5, 1.2), (1.9, 1.0)] {
            let params = BoundParams::new(p, q).unwrap();
            let base = check_with_field(&c, &winding_field(&c), params, 1.0).unwrap().ratio;
            for lambda in [ratio(1, 3), ratio(2, 1), ratio(10, 1)] {
                let s = c.scaled(&lambda).unwrap();
                let r = check_with_field(&s, &winding_field(&s), params, 1.0).unwrap().ratio;
                worst = worst.max((r - base).abs() / base);
            }
        }
    }
    outcome(worst < 1e-9, format!("20 curves x 3 (p, q) x λ in {{1/3, 2, 10}}: max rel ratio change {worst:.1e}"))
}

fn main() -> ExitCode {
    let registry = FamilyRegistry::with_builtins();
    let mut results = Vec::new();
    let mut record = |id: u32, name: &str, o: Outcome| {
        println!("{} {id:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        results.push(o.pass);
    };
    record(1, "exact area of regular n-gons", c01_exact_area(&registry));
    record(2, "conservation of signed area", c02_conservation(&registry));
    record(3, "p-variation DP vs brute force", c03_pvar_oracle(&registry));
    record(4, "winding vs angle summation", c04_winding_oracle(&registry));
    let [c5, c6, c7] = c05_c06_c07(&registry);
    record(5, "triangle area bound per step", c5);
    record(6, "removable point at every stage", c6);
    record(7, "telescoping sum and differencing", c7);
    let [c8, c12] = c08_c12_sweep();
    record(8, "main bound over the sweep", c8);
    record(9, "zeta accuracy", c09_zeta());
    record(10, "Monte Carlo cross-check", c10_monte_carlo(&registry));
    record(11, "scale covariance", c11_scale(&registry));
    record(12, "deterministic sweep output", c12);

    let failed = results.iter().filter(|&&p| !p).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
