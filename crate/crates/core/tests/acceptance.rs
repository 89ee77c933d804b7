//! Acceptance suite: one test per criterion, each printing a single
//! `criterion N ... PASS|FAIL` line. Criteria run one at a time so that
//! their wall-clock budgets are measured without interference.
//!
//! Run with `cargo test -p hadwiger-core --test acceptance -- --nocapture`.

mod common;

use std::sync::{Mutex, MutexGuard, OnceLock};
use std::time::{Duration, Instant};

use hadwiger::asymptotics::{gap_set, perimeter_limit, second_order, sweep, Schedule, SweepTable};
use hadwiger::curves::{generate_shape, perimeter, ClosedCurve, ShapeSpec};
use hadwiger::gauge::{alpha_angle, self_perimeter, SymmetricOval};
use hadwiger::necklace::{hadwiger_count_with, oracle_count, CountOptions, NecklaceStatus};
use hadwiger::offset::{cone_check, level_set, offset_perimeter, offset_polygon, LevelSource};
use hadwiger::point::Point2;
use hadwiger::{hadwiger_count, hadwiger_dimension};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

static SERIAL: Mutex<()> = Mutex::new(());

fn serial() -> MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

fn report(n: u32, name: &str, ok: bool, elapsed: Duration, detail: &str) {
    println!(
        "criterion {n:>2} {name:<32} {} [{:.2} s] {detail}",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
}

/// `F = B`: the ball's own boundary as a curve.
fn ball_curve(b: &SymmetricOval<f64>) -> ClosedCurve<f64> {
    ClosedCurve::new(b.vertices().to_vec()).unwrap()
}

fn floor_inv(lam: f64) -> usize {
    (1.0 / lam).floor() as usize
}

/// The four convergence pairs: `(name, F, B)`.
fn convergence_pairs() -> Vec<(&'static str, ClosedCurve<f64>, SymmetricOval<f64>)> {
    let disk = SymmetricOval::disk(512).unwrap();
    let square = SymmetricOval::square();
    let hex = SymmetricOval::hexagon();
    vec![
        ("disk/disk", ball_curve(&disk), disk),
        ("square/square", ball_curve(&square), square),
        ("hexagon/hexagon", ball_curve(&hex), hex.clone()),
        ("heptagon/hexagon", common::random_convex(7, 2024), hex),
    ]
}

/// Dense geometric schedule over `[1e-3, 1e-2]`: 1001 values.
fn dense_schedule() -> Schedule<f64> {
    Schedule::geometric(1e-2, 1e-3, 10f64.powf(-1.0 / 1000.0))
}

struct CachedSweep {
    name: &'static str,
    b: SymmetricOval<f64>,
    p_ref: f64,
    table: SweepTable<f64>,
    elapsed: Duration,
}

/// Dense sweeps of the convergence pairs, computed once per run.
fn dense_sweeps() -> &'static [CachedSweep] {
    static CACHE: OnceLock<Vec<CachedSweep>> = OnceLock::new();
    CACHE.get_or_init(|| {
        convergence_pairs()
            .into_iter()
            .map(|(name, f, b)| {
                let p_ref = perimeter(&b, &f);
                let t = Instant::now();
                let table = sweep(&f, &b, &dense_schedule(), Some(p_ref)).unwrap();
                CachedSweep { name, b, p_ref, table, elapsed: t.elapsed() }
            })
            .collect()
    })
}

/// Coarse sweeps over `(0, 1]` down to `floor` for the value-set checks.
fn coarse_sweep(f: &ClosedCurve<f64>, b: &SymmetricOval<f64>, floor: f64) -> SweepTable<f64> {
    sweep(f, b, &Schedule::geometric(1.0, floor, 0.97), Some(perimeter(b, f))).unwrap()
}

#[test]
fn criterion_01_parallelogram_exactness() {
    let _g = serial();
    let b = SymmetricOval::<f64>::square();
    let f = ball_curve(&b);
    let t = Instant::now();
    let mut bad = Vec::new();
    for lam in [0.5, 1.0 / 3.0, 0.3, 0.25, 0.2, 0.1] {
        let n = hadwiger_count(&f, &b, lam).unwrap();
        if n != 4 * floor_inv(lam) + 4 {
            bad.push((lam, n));
        }
    }
    let el = t.elapsed();
    let ok = bad.is_empty() && el < Duration::from_secs(1);
    report(1, "parallelogram exactness", ok, el, &format!("mismatches {bad:?}"));
    assert!(ok, "{bad:?} in {el:?}");
}

#[test]
fn criterion_02_staircase_exactness() {
    let _g = serial();
    let b = SymmetricOval::<f64>::square();
    let t = Instant::now();
    let mut bad = Vec::new();
    for k in 1..=3 {
        let f = common::staircase(k, 2.0);
        for lam in [0.5, 0.25] {
            let n = hadwiger_count(&f, &b, lam).unwrap();
            if n != 4 * k * floor_inv(lam) + 4 {
                bad.push((k, lam, n));
            }
        }
    }
    let el = t.elapsed();
    let ok = bad.is_empty() && el < Duration::from_secs(1);
    report(2, "staircase exactness", ok, el, &format!("mismatches {bad:?}"));
    assert!(ok, "{bad:?} in {el:?}");
}

#[test]
fn criterion_03_perimeter_convergence() {
    let _g = serial();
    let mut ok = true;
    let mut details = Vec::new();
    let mut total = Duration::ZERO;
    for s in dense_sweeps() {
        let est = perimeter_limit(&s.table).unwrap();
        let rel = (est.value - s.p_ref).abs() / s.p_ref;
        // the estimate must fall inside the sandwich window at the smallest λ
        let lam = s.table.rows.last().unwrap().lambda;
        let window = (s.p_ref - 2.0 * lam, s.p_ref + lam * self_perimeter(&s.b));
        let inside = est.value >= window.0 && est.value <= window.1;
        let pass = rel < 0.01 && inside && s.elapsed < Duration::from_secs(60);
        ok &= pass;
        total += s.elapsed;
        details.push(format!(
            "{} {:.6}±{:.4} vs {:.6} ({:.2e}, {:.1} s)",
            s.name,
            est.value,
            est.half_width,
            s.p_ref,
            rel,
            s.elapsed.as_secs_f64()
        ));
    }
    report(3, "perimeter convergence", ok, total, &details.join("; "));
    assert!(ok, "{details:?}");
}

#[test]
fn criterion_04_sandwich_inequality() {
    let _g = serial();
    let t = Instant::now();
    let mut rows = 0;
    let mut violations = Vec::new();
    for s in dense_sweeps() {
        rows += s.table.len();
        for lam in s.table.sandwich_violations(s.p_ref, self_perimeter(&s.b)) {
            violations.push((s.name, lam));
        }
    }
    for (name, f, b) in convergence_pairs() {
        let table = coarse_sweep(&f, &b, 0.01);
        rows += table.len();
        for lam in table.sandwich_violations(perimeter(&b, &f), self_perimeter(&b)) {
            violations.push((name, lam));
        }
    }
    let el = t.elapsed();
    let ok = violations.is_empty();
    report(4, "sandwich inequality", ok, el, &format!("{rows} rows, {} violations", violations.len()));
    assert!(ok, "{violations:?}");
}

#[test]
fn criterion_05_gap_bound() {
    let _g = serial();
    let t = Instant::now();
    let mut checked = 0;
    let mut violations = Vec::new();
    for s in dense_sweeps() {
        for r in &s.table.rows {
            if r.certified && r.status == Some(NecklaceStatus::AlmostComplete) {
                checked += 1;
                if r.gap.unwrap() >= 3.0 * r.lambda {
                    violations.push((s.name.to_string(), r.lambda, r.gap));
                }
            }
        }
    }
    for (bn, b) in common::matrix_balls() {
        for (fname, f) in common::matrix_shapes() {
            if !f.is_convex() {
                continue;
            }
            for lam in common::MATRIX_LAMBDAS {
                let rep = hadwiger_count_with(&f, &b, lam, &CountOptions::default()).unwrap();
                if rep.certified() && rep.necklace.status == NecklaceStatus::AlmostComplete {
                    checked += 1;
                    if rep.necklace.gap >= 3.0 * lam {
                        violations.push((format!("{fname}/{bn}"), lam, Some(rep.necklace.gap)));
                    }
                }
            }
        }
    }
    let el = t.elapsed();
    let ok = violations.is_empty() && checked > 0;
    report(5, "gap bound", ok, el, &format!("{checked} almost complete necklaces, {} violations", violations.len()));
    assert!(ok, "{violations:?}");
}

#[test]
fn criterion_06_second_order_values() {
    let _g = serial();
    let expected = [("disk/disk", -2.0, 0.0), ("square/square", 0.0, 4.0), ("hexagon/hexagon", 0.0, 3.0)];
    let mut ok = true;
    let mut details = Vec::new();
    let mut total = Duration::ZERO;
    for (name, lm, lp) in expected {
        let s = dense_sweeps().iter().find(|s| s.name == name).unwrap();
        let so = second_order(&s.table, s.p_ref).unwrap();
        let pass = so.dense
            && (so.l_minus - lm).abs() <= 0.1
            && (so.l_plus - lp).abs() <= 0.1
            && s.elapsed < Duration::from_secs(120);
        ok &= pass;
        total += s.elapsed;
        details.push(format!("{name} ({:.4}, {:.4}) expected ({lm}, {lp})", so.l_minus, so.l_plus));
    }
    report(6, "second-order values", ok, total, &details.join("; "));
    assert!(ok, "{details:?}");
}

/// Nonconvex polygons for the tube inequality.
fn nonconvex_fixtures() -> Vec<(&'static str, ClosedCurve<f64>)> {
    let p = |pts: &[(f64, f64)]| ClosedCurve::new(pts.iter().map(|&(x, y)| Point2::new(x, y)).collect()).unwrap();
    let star = |n: usize, inner: f64| {
        let pts: Vec<Point2<f64>> = (0..2 * n)
            .map(|i| {
                let r = if i % 2 == 0 { 1.0 } else { inner };
                Point2::from_angle(std::f64::consts::PI * i as f64 / n as f64) * r
            })
            .collect();
        ClosedCurve::new(pts).unwrap()
    };
    vec![
        ("staircase2", common::staircase(2, 1.0)),
        ("staircase3", common::staircase(3, 1.0)),
        ("staircase4", common::staircase(4, 1.0)),
        ("staircase2_wide", common::staircase(2, 2.0)),
        ("staircase3_fine", common::staircase(3, 0.8)),
        ("l_shape", p(&[(0.0, 0.0), (3.0, 0.0), (3.0, 1.0), (1.0, 1.0), (1.0, 3.0), (0.0, 3.0)])),
        ("t_shape", p(&[(0.0, 2.0), (0.0, 3.0), (3.0, 3.0), (3.0, 2.0), (2.0, 2.0), (2.0, 0.0), (1.0, 0.0), (1.0, 2.0)])),
        ("u_shape", p(&[(0.0, 0.0), (3.0, 0.0), (3.0, 3.0), (2.0, 3.0), (2.0, 1.0), (1.0, 1.0), (1.0, 3.0), (0.0, 3.0)])),
        ("star5", star(5, 0.6)),
        ("star7", star(7, 0.75)),
    ]
}

#[test]
fn criterion_07_tube_formula() {
    let _g = serial();
    let t = Instant::now();
    let balls = [SymmetricOval::<f64>::hexagon(), SymmetricOval::square(), SymmetricOval::disk(512).unwrap()];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    for i in 0..20 {
        let n = rng.gen_range(3..=12);
        let q = hadwiger::curves::random_convex_polygon(n, 1.5, 1.0, &mut rng);
        let b = &balls[i % balls.len()];
        for lam in [0.05, 0.1, 0.2] {
            let w = offset_polygon(&q, b, lam);
            let expect = perimeter(b, &q) + lam * self_perimeter(b);
            let rel = (offset_perimeter(&w, b) - expect).abs() / expect;
            worst = worst.max(rel);
            if rel > 1e-6 {
                bad.push(format!("convex {i} λ={lam}: {rel:.2e}"));
            }
        }
    }
    for (i, (name, q)) in nonconvex_fixtures().into_iter().enumerate() {
        let b = &balls[i % balls.len()];
        for lam in [0.05, 0.1, 0.2] {
            let w = offset_polygon(&q, b, lam);
            let bound = perimeter(b, &q) + lam * self_perimeter(b);
            let len = offset_perimeter(&w, b);
            if len > bound * (1.0 + 1e-12) {
                bad.push(format!("{name} λ={lam}: {len} > {bound}"));
            }
        }
    }
    let el = t.elapsed();
    let ok = bad.is_empty() && el < Duration::from_secs(5);
    report(7, "tube formula", ok, el, &format!("worst convex deviation {worst:.2e}"));
    assert!(ok, "{bad:?}");
}

#[test]
fn criterion_08_gap_set_structure() {
    let _g = serial();
    let t = Instant::now();
    let floor = 0.02;
    let sq = SymmetricOval::<f64>::square();
    let f = ball_curve(&sq);
    let table = coarse_sweep(&f, &sq, floor);
    let g = gap_set(&f, &sq, &table).unwrap();
    // values of 4⌊1/λ⌋ + 4 down to the smallest swept λ
    let smallest = table.rows.last().unwrap().lambda;
    let expect: Vec<usize> = (1..=floor_inv(smallest)).map(|m| 4 * m + 4).collect();
    let square_ok = g.values == expect && g.density_certified;
    let disk = SymmetricOval::<f64>::disk(512).unwrap();
    let fd = ball_curve(&disk);
    let gd = gap_set(&fd, &disk, &coarse_sweep(&fd, &disk, floor)).unwrap();
    let disk_ok = gd.max_consecutive_gap <= 4 && gd.density_certified;
    let el = t.elapsed();
    let ok = square_ok && disk_ok && el < Duration::from_secs(120);
    report(
        8,
        "gap-set structure",
        ok,
        el,
        &format!(
            "square {} values up to {:?} (max gap {}); disk {} values, max gap {}",
            g.values.len(),
            g.values.last(),
            g.max_consecutive_gap,
            gd.values.len(),
            gd.max_consecutive_gap
        ),
    );
    assert!(square_ok, "square values {:?}", g.values);
    assert!(disk_ok, "disk values {:?}", gd.values);
}

#[test]
fn criterion_09_oracle_equivalence() {
    let _g = serial();
    let t = Instant::now();
    let mut certified = 0;
    let mut disagreements = Vec::new();
    for (bn, b) in common::matrix_balls() {
        for (fname, f) in common::matrix_shapes() {
            for lam in common::MATRIX_LAMBDAS {
                let rep = hadwiger_count_with(&f, &b, lam, &CountOptions::default()).unwrap();
                let o = oracle_count(&f, &b, lam, 2048);
                if rep.certified() {
                    certified += 1;
                    if rep.count != o {
                        disagreements.push((bn, fname, lam, rep.count, o));
                    }
                }
            }
        }
    }
    let el = t.elapsed();
    let ok = disagreements.is_empty();
    report(9, "oracle equivalence", ok, el, &format!("{certified}/100 certified, {} disagreements", disagreements.len()));
    assert!(ok, "{disagreements:?}");
}

#[test]
fn criterion_10_level_set_regularity() {
    let _g = serial();
    let t = Instant::now();
    let eps = 0.1;
    let balls = [
        ("disk", SymmetricOval::<f64>::disk(512).unwrap()),
        ("square", SymmetricOval::square()),
        ("hexagon", SymmetricOval::hexagon()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut bad = Vec::new();
    let mut worst = f64::NEG_INFINITY;
    for cloud in 0..10 {
        let pts: Vec<Point2<f64>> = (0..20)
            .map(|_| {
                let r = rng.gen::<f64>().sqrt();
                Point2::from_angle(rng.gen::<f64>() * std::f64::consts::TAU) * r
            })
            .collect();
        let m = LevelSource::Points(pts);
        for (name, b) in &balls {
            let s = level_set(&m, b, 100.0, 512).unwrap();
            let rep = cone_check(&s, b, Point2::zero(), eps);
            let bound = 1.0 / (std::f64::consts::PI - alpha_angle(b) - eps).tan() + 0.05;
            worst = worst.max(rep.lipschitz - bound);
            if rep.violations > 0 || rep.lipschitz > bound {
                bad.push(format!("cloud {cloud} {name}: {} violations, lipschitz {} > {bound}", rep.violations, rep.lipschitz));
            }
        }
    }
    let el = t.elapsed();
    let ok = bad.is_empty() && el < Duration::from_secs(60);
    report(10, "level-set regularity", ok, el, &format!("max lipschitz minus bound {worst:+.4}"));
    assert!(ok, "{bad:?} in {el:?}");
}

#[test]
fn criterion_11_hadwiger_dimension() {
    let _g = serial();
    let t = Instant::now();
    let sq = SymmetricOval::<f64>::square();
    let window = Schedule::geometric(1e-2, 1e-3, 0.9);
    let polygons = [
        ("square", ball_curve(&sq)),
        ("staircase4", common::staircase(4, 1.0)),
        ("hexagon", common::ngon_f(6)),
        ("pentagon", common::ngon_f(5)),
        ("heptagon", common::random_convex(7, 2024)),
    ];
    let mut bad = Vec::new();
    let mut slopes = Vec::new();
    for (name, f) in &polygons {
        let table = sweep(f, &sq, &window, None).unwrap();
        let d = hadwiger_dimension(f, &table, 1e-3, 1e-2).unwrap();
        slopes.push(format!("{name} {:.4}", d.slope));
        if (d.slope - 1.0).abs() > 0.05 {
            bad.push((name, d.slope));
        }
    }
    let de_rham = generate_shape(&ShapeSpec::DeRham { depth: 8, ratio: 0.25 }).unwrap();
    let table = sweep(&de_rham, &sq, &Schedule::geometric(5e-2, 5e-3, 0.9), None).unwrap();
    let d = hadwiger_dimension(&de_rham, &table, 5e-3, 5e-2).unwrap();
    slopes.push(format!("de_rham {:.4} (box counting {:.4})", d.slope, d.box_counting.unwrap_or(f64::NAN)));
    let el = t.elapsed();
    let ok = bad.is_empty();
    report(11, "hadwiger dimension", ok, el, &slopes.join("; "));
    assert!(ok, "{bad:?}");
}
