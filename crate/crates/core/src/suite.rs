//! Randomized theorem-chain suite over C-convex, compact-valued instances
//! drawn from the builtin generator catalog.
//!
//! Instance `i` of seed `s` is a pure function of `(s, i)`:
//!
//! * image dimension `m ∈ {2, 3}`, sample dimension `n ∈ {1, 2}`;
//! * cone: the orthant, or dual generators `e_j + p_j` with `p_j` entries in
//!   `{0, 1/8, 1/4}` and interior point `(1, …, 1)`;
//! * map: `quadratic_vector` with targets on the quarter grid of the domain
//!   box, or `segment_shift` with a cloud `p + k/4·(1, …, 1)`, `k < K ≤ 4`,
//!   linear coefficients in `[-1/2, 1/2]` and quadratic coefficients in
//!   `[0, 1]` (quarter steps);
//! * domain: `[-1, 2]` with 12 steps (`n = 1`) or `[-1, 1]²` with 4 × 4 steps;
//! * three distinct base points among the samples;
//! * `W*` density 17 for `m = 2` and 9 for `m = 3`.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::problem::Problem;
use crate::vi::{chain_problem, replay_chain, ImplicationStatus, ReplayOutcome};

pub const BASE_POINTS_PER_INSTANCE: usize = 3;

fn quarter(rng: &mut ChaCha8Rng, lo: i32, hi: i32) -> f64 {
    rng.gen_range(lo..=hi) as f64 / 4.0
}

/// The problem document of instance `index` for `seed`.
pub fn instance_document(seed: u64, index: u64) -> Value {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let m: usize = rng.gen_range(2..=3);
    let n: usize = rng.gen_range(1..=2);

    let generators: Vec<Vec<f64>> = if rng.gen_bool(0.5) {
        (0..m).map(|j| (0..m).map(|l| if l == j { 1.0 } else { 0.0 }).collect()).collect()
    } else {
        (0..m)
            .map(|j| {
                (0..m)
                    .map(|l| if l == j { 1.0 } else { rng.gen_range(0..=2) as f64 / 8.0 })
                    .collect()
            })
            .collect()
    };

    let (lo, hi, steps, domain_samples) = if n == 1 { (-4, 8, 12, 13) } else { (-4, 4, 4, 25) };
    let params = if rng.gen_bool(0.5) {
        let targets: Vec<Vec<f64>> = (0..m).map(|_| (0..n).map(|_| quarter(&mut rng, lo, hi)).collect()).collect();
        ("quadratic_vector", json!({ "targets": targets }))
    } else {
        let base: Vec<f64> = (0..m).map(|_| quarter(&mut rng, -4, 4)).collect();
        let count = rng.gen_range(1..=4);
        let points: Vec<Vec<f64>> = (0..count).map(|k| base.iter().map(|b| b + k as f64 / 4.0).collect()).collect();
        let linear: Vec<Vec<f64>> = (0..m).map(|_| (0..n).map(|_| quarter(&mut rng, -2, 2)).collect()).collect();
        let quadratic: Vec<Vec<f64>> = (0..m).map(|_| (0..n).map(|_| quarter(&mut rng, 0, 4)).collect()).collect();
        (
            "segment_shift",
            json!({ "points": points, "linear": linear, "quadratic": quadratic, "offset": vec![0.0; m] }),
        )
    };

    let grid = |from: f64, to: f64| (vec![from; n], vec![to; n]);
    let (from, to) = grid(lo as f64 / 4.0, hi as f64 / 4.0);
    let mut picks = sample(&mut rng, domain_samples, BASE_POINTS_PER_INSTANCE).into_vec();
    picks.sort_unstable();
    let base_points: Vec<Vec<f64>> = picks
        .into_iter()
        .map(|k| {
            if n == 1 {
                vec![from[0] + k as f64 * (to[0] - from[0]) / steps as f64]
            } else {
                let h = (to[0] - from[0]) / steps as f64;
                vec![from[0] + (k / (steps + 1)) as f64 * h, from[1] + (k % (steps + 1)) as f64 * h]
            }
        })
        .collect();

    json!({
        "cone": { "dual_generators": generators, "interior_point": vec![1.0; m] },
        "map": { "generator": {
            "name": params.0,
            "params": params.1,
            "domain_grid": { "from": from, "to": to, "steps": steps },
        }},
        "base_points": base_points,
        "settings": { "wstar_density": if m == 2 { 17 } else { 9 } },
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct StatusCounts {
    pub confirmed: usize,
    pub violated: usize,
    pub not_applicable: usize,
    pub undetermined: usize,
}

impl StatusCounts {
    fn record(&mut self, s: ImplicationStatus) {
        match s {
            ImplicationStatus::Confirmed => self.confirmed += 1,
            ImplicationStatus::Violated => self.violated += 1,
            ImplicationStatus::NotApplicable => self.not_applicable += 1,
            ImplicationStatus::Undetermined => self.undetermined += 1,
        }
    }

    fn merge(&mut self, o: StatusCounts) {
        self.confirmed += o.confirmed;
        self.violated += o.violated;
        self.not_applicable += o.not_applicable;
        self.undetermined += o.undetermined;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub base_point: usize,
    pub antecedent: &'static str,
    pub consequent: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceRecord {
    pub index: u64,
    pub document: Value,
    pub statuses: StatusCounts,
    pub violations: Vec<Violation>,
    pub replay: ReplayOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub instances: u64,
    pub totals: StatusCounts,
    pub replay: ReplayOutcome,
    pub records: Vec<InstanceRecord>,
}

impl SuiteReport {
    pub fn violated(&self) -> bool {
        self.totals.violated > 0
    }

    pub fn replay_ok(&self) -> bool {
        self.replay.mismatches == 0
    }
}

/// Runs `f` on a pool of `threads` workers (all cores when `None`).
pub fn with_workers<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        if t == 0 {
            return Err(Error::InvalidSettings("worker count must be positive".into()));
        }
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidSettings(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}

/// Runs the chain on instance `index` and replays its witnesses.
pub fn run_instance(seed: u64, index: u64) -> Result<InstanceRecord> {
    let document = instance_document(seed, index);
    let problem = Problem::from_value(document.clone())?;
    let (reports, wstar) = chain_problem(&problem)?;
    let mut statuses = StatusCounts::default();
    let mut violations = Vec::new();
    let mut replay = ReplayOutcome::default();
    for (b, r) in reports.iter().enumerate() {
        for i in &r.implications {
            statuses.record(i.status);
            if i.status == ImplicationStatus::Violated {
                violations.push(Violation {
                    base_point: b,
                    antecedent: i.antecedent,
                    consequent: i.consequent,
                });
            }
        }
        let o = replay_chain(&problem.map, r, &wstar, &problem.settings)?;
        replay.checked += o.checked;
        replay.mismatches += o.mismatches;
    }
    Ok(InstanceRecord {
        index,
        document,
        statuses,
        violations,
        replay,
    })
}

/// Runs instances `0..instances` on `threads` workers (all cores when
/// `None`). The report does not depend on the worker count.
pub fn run_suite(seed: u64, instances: u64, threads: Option<usize>) -> Result<SuiteReport> {
    let records = with_workers(threads, || {
        (0..instances)
            .into_par_iter()
            .map(|i| run_instance(seed, i))
            .collect::<Result<Vec<_>>>()
    })??;
    let mut totals = StatusCounts::default();
    let mut replay = ReplayOutcome::default();
    for r in &records {
        totals.merge(r.statuses);
        replay.checked += r.replay.checked;
        replay.mismatches += r.replay.mismatches;
    }
    Ok(SuiteReport {
        seed,
        instances,
        totals,
        replay,
        records,
    })
}
