//! Acceptance criteria, one PASS/FAIL line each.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use setvi_core::analysis::{classify_path, diewert_witness, dini_lower, DiniConfig, Side};
use setvi_core::order::{ll_margin, relation_ll, relation_lt};
use setvi_core::problem::Settings;
use setvi_core::report::to_json;
use setvi_core::scalarize::{uniform_grid, LinearPiece, PiecewiseLinear, ScalarPath};
use setvi_core::suite::{run_suite, SuiteReport};
use setvi_core::vi::{mvi_check, svi_check};
use setvi_core::{builtin_map, Cone, Error, ExtReal, Position, SetMap, SetValue, Verdict, POS_INF};

const TAU: f64 = 1e-9;
const SUITE_SEED: u64 = 20240601;
const SUITE_INSTANCES: u64 = 200;

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { ok: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { ok: false, detail: detail.into() }
}

fn det(m: &[Vec<f64>]) -> f64 {
    match m.len() {
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        3 => {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
        _ => unreachable!(),
    }
}

/// Cramer's rule for `cols · λ = b`, with `cols[k]` the k-th column.
fn solve(cols: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let n = cols.len();
    let matrix = |cs: &[Vec<f64>]| -> Vec<Vec<f64>> { (0..n).map(|i| cs.iter().map(|c| c[i]).collect()).collect() };
    let d = det(&matrix(cols));
    (0..n)
        .map(|k| {
            let mut cs = cols.to_vec();
            cs[k] = b.to_vec();
            det(&matrix(&cs)) / d
        })
        .collect()
}

/// A simplicial cone from primal rays `r_k`, with dual generators the rows of
/// the inverse ray matrix and interior point `Σ r_k`.
struct RayCone {
    rays: Vec<Vec<f64>>,
    cone: Cone,
}

fn random_ray_cone(rng: &mut ChaCha8Rng, m: usize) -> RayCone {
    loop {
        let rays: Vec<Vec<f64>> = (0..m)
            .map(|k| (0..m).map(|i| if i == k { 1.0 } else { rng.gen_range(-0.4..0.4) }).collect())
            .collect();
        let matrix: Vec<Vec<f64>> = (0..m).map(|i| rays.iter().map(|r| r[i]).collect()).collect();
        if det(&matrix).abs() < 0.2 {
            continue;
        }
        let unit = |j: usize| (0..m).map(|i| if i == j { 1.0 } else { 0.0 }).collect::<Vec<f64>>();
        // Row j of the inverse solves Rᵀ g_j = e_j.
        let generators: Vec<Vec<f64>> = (0..m).map(|j| solve(&matrix, &unit(j))).collect();
        let e: Vec<f64> = (0..m).map(|i| rays.iter().map(|r| r[i]).sum()).collect();
        let cone = Cone::new(generators, e).expect("simplicial cone is valid");
        return RayCone { rays, cone };
    }
}

fn random_cloud(rng: &mut ChaCha8Rng, m: usize, max_count: usize, half: f64) -> Vec<Vec<f64>> {
    let count = rng.gen_range(1..=max_count);
    (0..count).map(|_| (0..m).map(|_| rng.gen_range(-half..half)).collect()).collect()
}

/// `z ∈ A + C` (strictly inside when `strict`) via the ray coordinates.
fn oracle_member(rc: &RayCone, a: &[Vec<f64>], z: &[f64], strict: bool) -> bool {
    a.iter().any(|p| {
        let d: Vec<f64> = z.iter().zip(p).map(|(zi, pi)| zi - pi).collect();
        solve(&rc.rays, &d).iter().all(|&l| if strict { l > 0.0 } else { l >= 0.0 })
    })
}

fn unit_directions(rng: &mut ChaCha8Rng, m: usize, count: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-3 && n <= 1.0 {
            out.push(v.iter().map(|x| x / n).collect());
        }
    }
    out
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut trials, mut banded, mut disagreements) = (0, 0, 0);
    for trial in 0..1200 {
        let m = 2 + trial % 2;
        let rc = random_ray_cone(&mut rng, m);
        let a = random_cloud(&mut rng, m, 5, 1.0);
        let y: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.5..1.5)).collect();
        let mem = rc.cone.extended_member(&a, &y, TAU).unwrap();
        trials += 1;
        if mem.margin.abs() <= TAU {
            banded += 1;
            continue;
        }
        let r = mem.margin.abs() / 2.0;
        for u in unit_directions(&mut rng, m, 200) {
            let z: Vec<f64> = y.iter().zip(&u).map(|(yi, ui)| yi + r * ui).collect();
            let agrees = match mem.position {
                Position::Interior => oracle_member(&rc, &a, &z, true),
                Position::Outside => !oracle_member(&rc, &a, &z, false),
                Position::Boundary => true,
            };
            if !agrees {
                disagreements += 1;
            }
        }
    }
    let d = format!("{trials} trials, {banded} inside the tolerance band, {disagreements} disagreements");
    if disagreements == 0 { pass(d) } else { fail(d) }
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut decisive, mut violations, mut positive) = (0, 0, 0);
    for trial in 0..1500 {
        let m = 2 + trial % 2;
        let rc = random_ray_cone(&mut rng, m);
        let a = SetValue::new(random_cloud(&mut rng, m, 4, 1.0));
        let shift = rng.gen_range(0.0..1.5);
        let b = SetValue::new(
            random_cloud(&mut rng, m, 4, 0.75)
                .into_iter()
                .map(|p| p.iter().zip(rc.cone.interior_point()).map(|(x, e)| x + shift * e).collect())
                .collect(),
        );
        let lt = relation_lt(&a, &b, &rc.cone, TAU).unwrap();
        let (ll, margin) = relation_ll(&a, &b, &rc.cone, TAU).unwrap();
        let oracle_lt = b.points.iter().all(|q| oracle_member(&rc, &a.points, q, true));
        if ll && !lt {
            violations += 1;
        }
        if margin.abs() > 10.0 * TAU {
            decisive += 1;
            if ll != lt || lt != oracle_lt {
                violations += 1;
            }
        }
        positive += usize::from(lt);
    }
    let d = format!("1500 pairs, {decisive} outside 10·τ, {positive} with A < B, {violations} violations");
    if violations == 0 { pass(d) } else { fail(d) }
}

fn criterion_3() -> Outcome {
    let origin = SetValue::singleton(vec![0.0, 0.0]);
    let cone = Cone::orthant(2);
    let mut margins = Vec::new();
    for t in [10.0, 100.0, 1000.0] {
        let g = builtin_map("hyperbola_truncation", &json!({ "T": t, "samples": 41 })).unwrap();
        let b = g.eval(&[0.0]);
        if !relation_lt(&origin, &b, &cone, TAU).unwrap() {
            return fail(format!("A < B is false at T = {t}"));
        }
        let margin = ll_margin(&origin, &b, &cone).unwrap();
        if (margin - 1.0 / t).abs() > 1e-12 {
            return fail(format!("≪ margin {margin:e} differs from 1/T at T = {t}"));
        }
        margins.push(margin);
    }
    if margins.windows(2).all(|w| w[1] < w[0]) {
        pass(format!("margins {margins:?} equal 1/T and decrease"))
    } else {
        fail("margins do not decrease")
    }
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let cfg = DiniConfig::default();
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (alpha, beta) = (rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        let t = rng.gen_range(cfg.t_max..1.0 - cfg.t_max);
        let path = ScalarPath::from_fn(vec![0.0, 1.0], move |s| ExtReal::finite(alpha * s * s + beta * s)).unwrap();
        for dir in [1i8, -1] {
            let analytic = f64::from(dir) * (2.0 * alpha * t + beta);
            let numeric = dini_lower(&path, t, dir, &cfg).unwrap().to_f64();
            worst = worst.max((numeric - analytic).abs());
        }
    }
    let mut exact_error: f64 = 0.0;
    for _ in 0..100 {
        let k = rng.gen_range(2..8);
        let mut knots: Vec<f64> = (0..k - 1).map(|_| rng.gen_range(1..64) as f64 / 64.0).collect();
        knots.extend([0.0, 1.0]);
        knots.sort_by(f64::total_cmp);
        knots.dedup();
        let nodes: Vec<(f64, f64)> = knots.iter().map(|&t| (t, rng.gen_range(-5.0..5.0))).collect();
        let path = ScalarPath::from_piecewise(PiecewiseLinear::interpolate(&nodes), uniform_grid(64)).unwrap();
        for w in nodes.windows(2) {
            let slope = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
            let mid = 0.5 * (w[0].0 + w[1].0);
            for (t, dir, expected) in [(w[0].0, 1i8, slope), (mid, 1, slope), (mid, -1, -slope), (w[1].0, -1, -slope)] {
                let got = dini_lower(&path, t, dir, &cfg).unwrap().to_f64();
                exact_error = exact_error.max((got - expected).abs());
            }
        }
    }
    let d = format!("max numeric error {worst:.3e}, max exact error {exact_error:e}");
    if worst <= 1e-5 && exact_error == 0.0 { pass(d) } else { fail(d) }
}

/// A lower semicontinuous piecewise-linear path on `[lo, hi]` (`+∞`
/// elsewhere) with breakpoints on the 1/64 grid and occasional jumps.
fn random_lsc_path(rng: &mut ChaCha8Rng) -> ScalarPath {
    let (lo, hi) = match rng.gen_range(0..4) {
        0 => (rng.gen_range(1..32), 64),
        1 => (0, rng.gen_range(33..64)),
        2 => (rng.gen_range(1..32), rng.gen_range(33..64)),
        _ => (0, 64),
    };
    let mut knots: Vec<i32> = (0..rng.gen_range(0..6)).map(|_| rng.gen_range(lo..=hi)).collect();
    knots.extend([lo, hi]);
    knots.sort_unstable();
    knots.dedup();
    let mut pieces = Vec::new();
    let mut v = rng.gen_range(-2.0..2.0);
    for w in knots.windows(2) {
        if rng.gen_bool(0.3) {
            v = rng.gen_range(-2.0..2.0);
        }
        let next = rng.gen_range(-2.0..2.0);
        pieces.push(LinearPiece::new(w[0] as f64 / 64.0, w[1] as f64 / 64.0, v, next));
        v = next;
    }
    if pieces.is_empty() {
        pieces.push(LinearPiece::new(lo as f64 / 64.0, lo as f64 / 64.0, v, v));
    }
    ScalarPath::from_piecewise(PiecewiseLinear::new(pieces), uniform_grid(64)).unwrap()
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cfg = DiniConfig::default();
    let (mut infinite_ends, mut missing) = (0, 0);
    for _ in 0..600 {
        let path = random_lsc_path(&mut rng);
        let v = path.values();
        infinite_ends += usize::from(v[0] == POS_INF || v[v.len() - 1] == POS_INF);
        for side in [Side::Forward, Side::Backward] {
            match diewert_witness(&path, side, &cfg, TAU) {
                Ok(_) => {}
                Err(Error::NoWitnessFound) => missing += 1,
                Err(e) => return fail(format!("unexpected error: {e}")),
            }
        }
    }
    let d = format!("600 paths ({infinite_ends} with +inf endpoints), {missing} without witness");
    if missing == 0 { pass(d) } else { fail(d) }
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let cfg = DiniConfig::default();
    let grid = uniform_grid(1000);
    let step = 1e-3;
    let mut misses = 0;
    for i in 0..220 {
        let mut s0 = rng.gen_range(0.0..1.0);
        let mut t0 = rng.gen_range(0.0..1.0);
        if s0 > t0 {
            std::mem::swap(&mut s0, &mut t0);
        }
        match i % 4 {
            1 => s0 = 0.0,
            2 => t0 = 1.0,
            3 => t0 = s0,
            _ => {}
        }
        let (a, b, c) = (rng.gen_range(0.5..5.0), rng.gen_range(0.5..5.0), rng.gen_range(-1.0..1.0));
        let mut nodes = vec![(0.0, c + a * s0)];
        if s0 > 0.0 {
            nodes.push((s0, c));
        }
        if t0 > s0 {
            nodes.push((t0, c));
        }
        if t0 < 1.0 {
            nodes.push((1.0, c + b * (1.0 - t0)));
        }
        let path = ScalarPath::from_piecewise(PiecewiseLinear::interpolate(&nodes), grid.clone()).unwrap();
        let r = classify_path(&path, &cfg, TAU).unwrap();
        let near = |got: Option<f64>, want: f64| got.is_some_and(|g| (g - want).abs() <= step + 1e-12);
        if !(near(r.s0, s0) && near(r.t0, t0)) {
            misses += 1;
        }
    }
    let d = format!("220 splices on a 1e-3 grid, {misses} outside one grid step");
    if misses == 0 { pass(d) } else { fail(d) }
}

/// Unimodal piecewise-linear path: strictly decreasing, flat, strictly
/// increasing, each part possibly empty, with random nonlinear knots.
fn random_pseudoconvex_path(rng: &mut ChaCha8Rng) -> ScalarPath {
    let mut cuts = [rng.gen_range(0..=64), rng.gen_range(0..=64)];
    cuts.sort_unstable();
    let (s, t) = (cuts[0], cuts[1]);
    let floor = rng.gen_range(-1.0..1.0);
    let mut nodes = Vec::new();
    let mut v = floor;
    let mut left = Vec::new();
    for k in (0..s).rev() {
        if k == 0 || rng.gen_bool(0.3) {
            v += rng.gen_range(0.01..1.0) * (s - k) as f64 / 64.0;
            left.push((k as f64 / 64.0, v));
        }
    }
    left.reverse();
    nodes.extend(left);
    nodes.push((s as f64 / 64.0, floor));
    if t > s {
        nodes.push((t as f64 / 64.0, floor));
    }
    let mut v = floor;
    let mut last = t;
    for k in t + 1..=64 {
        if k == 64 || rng.gen_bool(0.3) {
            v += rng.gen_range(0.01..1.0) * (k - last) as f64 / 64.0;
            nodes.push((k as f64 / 64.0, v));
            last = k;
        }
    }
    ScalarPath::from_piecewise(PiecewiseLinear::interpolate(&nodes), uniform_grid(64)).unwrap()
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cfg = DiniConfig::default();
    let (mut not_pseudoconvex, mut failures) = (0, 0);
    for _ in 0..600 {
        let path = random_pseudoconvex_path(&mut rng);
        let r = classify_path(&path, &cfg, TAU).unwrap();
        if r.pseudoconvex != Verdict::Holds {
            not_pseudoconvex += 1;
        }
        if r.semistrictly_quasiconvex != Verdict::Holds {
            failures += 1;
        }
    }
    let d = format!("600 paths, {not_pseudoconvex} not classified pseudoconvex, {failures} ssqc failures");
    if failures == 0 && not_pseudoconvex == 0 { pass(d) } else { fail(d) }
}

fn criterion_8() -> (Outcome, Option<SuiteReport>) {
    let report = match run_suite(SUITE_SEED, SUITE_INSTANCES, Some(1)) {
        Ok(r) => r,
        Err(e) => return (fail(format!("suite error: {e}")), None),
    };
    let t = report.totals;
    let d = format!(
        "{} instances: {} confirmed, {} not applicable, {} undetermined, {} violated; {} witnesses replayed, {} mismatches",
        report.instances, t.confirmed, t.not_applicable, t.undetermined, t.violated, report.replay.checked, report.replay.mismatches
    );
    let ok = !report.violated() && report.replay_ok() && report.replay.checked > 0;
    (Outcome { ok, detail: d }, Some(report))
}

fn criterion_9() -> Outcome {
    let domain: Vec<Vec<f64>> = (0..=12).map(|k| vec![-1.0 + 0.25 * k as f64]).collect();
    let map = SetMap::from_generator("quadratic_vector", json!({ "targets": [0.0, 1.0] }), domain.clone()).unwrap();
    let cone = Cone::orthant(2);
    let settings = Settings::default();
    let wstar = cone.dual_base(settings.wstar_density);
    let f = |x: f64| [x * x, (x - 1.0) * (x - 1.0)];
    let brute: Vec<f64> = domain
        .iter()
        .map(|x| x[0])
        .filter(|&x0| !domain.iter().any(|x| f(x[0])[0] < f(x0)[0] && f(x[0])[1] < f(x0)[1]))
        .collect();
    let expected: Vec<f64> = (0..=4).map(|k| 0.25 * k as f64).collect();
    if brute != expected {
        return fail(format!("dominance scan gave {brute:?}"));
    }
    let mut from_mvi = Vec::new();
    let mut from_svi = Vec::new();
    for x0 in &domain {
        let probes = setvi_core::order::probe_points(&map, x0, settings.ray_steps);
        if mvi_check(&map, x0, &wstar, &probes, &settings).unwrap().verdict.holds() {
            from_mvi.push(x0[0]);
        }
        if svi_check(&map, x0, &wstar, &probes, &settings).unwrap().verdict.holds() {
            from_svi.push(x0[0]);
        }
    }
    if from_mvi != brute || from_svi != brute {
        return fail(format!("mvi set {from_mvi:?}, svi set {from_svi:?}"));
    }
    let svi = svi_check(&map, &[0.5], &wstar, &domain, &settings).unwrap();
    let at2 = svi.per_x.iter().find(|e| e.x == [2.0]).unwrap();
    if at2.w.as_deref() != Some(&[0.5, 0.5][..]) || at2.value.to_f64().abs() > TAU {
        return fail(format!("svi at x0 = 0.5, x = 2: witness {:?}, derivative {}", at2.w, at2.value));
    }
    pass(format!("weakly efficient set {brute:?}; svi witness (0.5, 0.5) with derivative {}", at2.value))
}

fn criterion_10(single: Option<&SuiteReport>) -> Outcome {
    let Some(single) = single else {
        return fail("single-worker suite unavailable");
    };
    let many = match run_suite(SUITE_SEED, SUITE_INSTANCES, Some(8)) {
        Ok(r) => r,
        Err(e) => return fail(format!("suite error: {e}")),
    };
    let (a, b) = (to_json(single), to_json(&many));
    if a == b {
        pass(format!("1 and 8 workers: {} identical bytes", a.len()))
    } else {
        fail("reports differ between 1 and 8 workers")
    }
}

fn report(n: usize, budget: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let mut outcome = f();
    let elapsed = start.elapsed();
    if let Some(b) = budget {
        if elapsed >= b {
            outcome.ok = false;
            outcome.detail.push_str(&format!("; over the {b:?} budget"));
        }
    }
    println!(
        "criterion {n:>2}: {} ({:.2?}) {}",
        if outcome.ok { "PASS" } else { "FAIL" },
        elapsed,
        outcome.detail
    );
    outcome.ok
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let mut ok = true;
    ok &= report(1, Some(secs(5)), criterion_1);
    ok &= report(2, Some(secs(5)), criterion_2);
    ok &= report(3, Some(secs(1)), criterion_3);
    ok &= report(4, Some(secs(1)), criterion_4);
    ok &= report(5, Some(secs(2)), criterion_5);
    ok &= report(6, Some(secs(5)), criterion_6);
    ok &= report(7, Some(secs(5)), criterion_7);
    let mut suite = None;
    ok &= report(8, Some(secs(60)), || {
        let (o, r) = criterion_8();
        suite = r;
        o
    });
    ok &= report(9, Some(secs(1)), criterion_9);
    ok &= report(10, None, || criterion_10(suite.as_ref()));
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
