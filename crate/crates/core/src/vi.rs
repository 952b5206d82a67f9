//! Scalarized Minty and Stampacchia variational inequalities and the
//! implication chain linking them to weak minimality.

use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{c_convexity_check, classify_path, dini_lower, CConvexityReport, DiniConfig};
use crate::cone::{Cone, WStarSample};
use crate::error::{Error, Result};
use crate::extreal::{ExtReal, NEG_INF};
use crate::order::{classify_weak_min, probe_points, MinimalityVerdict, VectorEfficiency};
use crate::problem::{InstanceSummary, Problem, Settings};
use crate::report::{ser_f64, ser_opt_vec, ser_vec};
use crate::scalarize::{radial_hausdorff_check, scalarize, RadialReport, RayPaths};
use crate::setmap::{ray_point, SetMap};
use crate::verdict::Verdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VIKind {
    Mvi,
    Svi,
    Mvi2,
    Svi2,
}

impl VIKind {
    pub const ALL: [VIKind; 4] = [VIKind::Mvi, VIKind::Svi, VIKind::Mvi2, VIKind::Svi2];

    pub fn as_str(self) -> &'static str {
        match self {
            VIKind::Mvi => "mvi",
            VIKind::Svi => "svi",
            VIKind::Mvi2 => "mvi2",
            VIKind::Svi2 => "svi2",
        }
    }

    pub fn parse(s: &str) -> Option<VIKind> {
        VIKind::ALL.into_iter().find(|k| k.as_str() == s)
    }

    /// Minty forms take the derivative at `x` toward `x0`.
    fn is_minty(self) -> bool {
        matches!(self, VIKind::Mvi | VIKind::Mvi2)
    }
}

impl std::fmt::Display for VIKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VIEntry {
    #[serde(serialize_with = "ser_vec")]
    pub x: Vec<f64>,
    pub status: Verdict,
    pub w_index: Option<usize>,
    #[serde(serialize_with = "ser_opt_vec")]
    pub w: Option<Vec<f64>>,
    /// Derivative at the witness, or the value closest to passing.
    pub value: ExtReal,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VIResolution {
    pub wstar_density: usize,
    pub wstar_size: usize,
    pub x_grid_size: usize,
    pub dini: DiniConfig,
    #[serde(serialize_with = "ser_f64")]
    pub tau_strict: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VIVerdict {
    pub kind: VIKind,
    #[serde(serialize_with = "ser_vec")]
    pub x0: Vec<f64>,
    pub verdict: Verdict,
    /// Set when `F(x0) + C = Y` decided the verdict.
    pub whole_space: bool,
    pub per_x: Vec<VIEntry>,
    pub resolution: VIResolution,
}

/// The lower Dini derivative entering the inequality of `kind` at `(x0, x)`.
pub fn vi_derivative(kind: VIKind, map: &SetMap, x0: &[f64], x: &[f64], w: &[f64], cfg: &DiniConfig, steps: usize) -> Result<ExtReal> {
    VIRay::new(kind, map, x0, x, steps).derivative(w, cfg)
}

/// The ray of one `(x0, x)` pair, shared by every weight.
struct VIRay<'a> {
    paths: RayPaths<'a>,
    grid: Vec<f64>,
}

impl<'a> VIRay<'a> {
    fn new(kind: VIKind, map: &'a SetMap, x0: &'a [f64], x: &'a [f64], steps: usize) -> Self {
        let (from, to) = if kind.is_minty() { (x, x0) } else { (x0, x) };
        let grid = if map.is_generator() { vec![0.0, 1.0] } else { map.ray_grid(from, to, steps) };
        VIRay {
            paths: RayPaths::new(map, from, to),
            grid,
        }
    }

    fn derivative(&self, w: &[f64], cfg: &DiniConfig) -> Result<ExtReal> {
        dini_lower(&self.paths.path(w, &self.grid)?, 0.0, 1, cfg)
    }
}

/// Witness and clear-failure tests for one derivative value.
fn classify_value(kind: VIKind, d: ExtReal, tau: f64) -> (bool, bool) {
    if kind.is_minty() {
        (d <= ExtReal::finite(tau), d > ExtReal::finite(2.0 * tau))
    } else {
        (d >= ExtReal::finite(-tau), d < ExtReal::finite(-2.0 * tau))
    }
}

/// Checks one variational inequality at `x0` over the probe points.
///
/// Per `x` the first sampled `w` clearing the inequality within `tau` is the
/// witness; `x` fails when every `w` misses it by more than `2·tau`.
pub fn vi_check(
    kind: VIKind,
    map: &SetMap,
    x0: &[f64],
    wstar: &WStarSample,
    probes: &[Vec<f64>],
    settings: &Settings,
) -> Result<VIVerdict> {
    let tau = settings.tau_strict;
    let v0 = map.evaluate(x0)?;
    if v0.is_empty() {
        return Err(Error::BasePointOutsideDomain(x0.to_vec()));
    }
    let resolution = VIResolution {
        wstar_density: wstar.density,
        wstar_size: wstar.len(),
        x_grid_size: probes.len(),
        dini: settings.dini,
        tau_strict: tau,
    };
    if v0.whole_space && matches!(kind, VIKind::Svi2 | VIKind::Mvi2) {
        return Ok(VIVerdict {
            kind,
            x0: x0.to_vec(),
            verdict: Verdict::Holds,
            whole_space: true,
            per_x: Vec::new(),
            resolution,
        });
    }
    let dom_only = match kind {
        VIKind::Svi => true,
        VIKind::Mvi => settings.mvi_over_dom_only,
        VIKind::Mvi2 | VIKind::Svi2 => false,
    };
    let mut verdict = Verdict::Holds;
    let mut per_x = Vec::new();
    for x in probes {
        let value = map.evaluate(x)?;
        if dom_only && value.is_empty() {
            continue;
        }
        let mut entry = VIEntry {
            x: x.clone(),
            status: Verdict::Fails,
            w_index: None,
            w: None,
            value: if kind.is_minty() { ExtReal::PosInf } else { ExtReal::NegInf },
        };
        let mut all_clear = true;
        let ray = VIRay::new(kind, map, x0, x, settings.ray_steps);
        for (j, w) in wstar.iter().enumerate() {
            let d = ray.derivative(w, &settings.dini)?;
            let guard_ok = kind != VIKind::Mvi2 || scalarize(&value, w)? != NEG_INF;
            let (pass, clear_fail) = classify_value(kind, d, tau);
            if pass && guard_ok {
                entry.status = Verdict::Holds;
                entry.w_index = Some(j);
                entry.w = Some(w.clone());
                entry.value = d;
                break;
            }
            all_clear &= clear_fail || !guard_ok;
            let closer = if kind.is_minty() { d < entry.value } else { d > entry.value };
            if closer && guard_ok {
                entry.value = d;
            }
        }
        if entry.status != Verdict::Holds && !all_clear {
            entry.status = Verdict::Undetermined;
        }
        verdict = verdict.and(entry.status);
        per_x.push(entry);
    }
    Ok(VIVerdict {
        kind,
        x0: x0.to_vec(),
        verdict,
        whole_space: false,
        per_x,
        resolution,
    })
}

pub fn mvi_check(map: &SetMap, x0: &[f64], wstar: &WStarSample, probes: &[Vec<f64>], settings: &Settings) -> Result<VIVerdict> {
    vi_check(VIKind::Mvi, map, x0, wstar, probes, settings)
}

pub fn svi_check(map: &SetMap, x0: &[f64], wstar: &WStarSample, probes: &[Vec<f64>], settings: &Settings) -> Result<VIVerdict> {
    vi_check(VIKind::Svi, map, x0, wstar, probes, settings)
}

/// Returns the (svi2) and (mvi2) verdicts.
pub fn svi2_mvi2_check(
    map: &SetMap,
    x0: &[f64],
    wstar: &WStarSample,
    probes: &[Vec<f64>],
    settings: &Settings,
) -> Result<(VIVerdict, VIVerdict)> {
    Ok((
        vi_check(VIKind::Svi2, map, x0, wstar, probes, settings)?,
        vi_check(VIKind::Mvi2, map, x0, wstar, probes, settings)?,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointCheck {
    pub verdict: Verdict,
    #[serde(serialize_with = "ser_opt_vec")]
    pub witness: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialClassification {
    pub semistrictly_quasiconvex: Verdict,
    pub pseudoconvex: Verdict,
    pub pseudoconcave: Verdict,
    pub paths: usize,
    #[serde(serialize_with = "ser_opt_vec")]
    pub ssqc_witness_x: Option<Vec<f64>>,
    #[serde(serialize_with = "ser_opt_vec")]
    pub pseudoconvex_witness_x: Option<Vec<f64>>,
    #[serde(serialize_with = "ser_opt_vec")]
    pub pseudoconcave_witness_x: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hypotheses {
    pub compactness: Verdict,
    pub c_convexity: CConvexityReport,
    pub radial_hausdorff: RadialReport,
    pub properness: PointCheck,
    pub star_shaped: PointCheck,
    /// Quantifiers see points between samples (generator maps only).
    pub ray_resolution: Verdict,
    pub radial: RadialClassification,
}

impl Hypotheses {
    pub fn get(&self, name: &str) -> Verdict {
        match name {
            "compactness" => self.compactness,
            "c_convexity" => self.c_convexity.verdict,
            "radial_hausdorff" => self.radial_hausdorff.verdict,
            "properness" => self.properness.verdict,
            "star_shaped" => self.star_shaped.verdict,
            "ray_resolution" => self.ray_resolution,
            "radial_ssqc" => self.radial.semistrictly_quasiconvex,
            "radial_pseudoconvex" => self.radial.pseudoconvex,
            "radial_pseudoconcave" => self.radial.pseudoconcave,
            other => panic!("unknown hypothesis `{other}`"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ImplicationStatus {
    Confirmed,
    Violated,
    NotApplicable,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Implication {
    pub antecedent: &'static str,
    pub consequent: &'static str,
    pub status: ImplicationStatus,
    /// Hypothesis route used, when several are available.
    pub route: Option<&'static str>,
    pub requires: Vec<&'static str>,
    /// Required hypotheses that did not hold.
    pub missing: Vec<&'static str>,
    pub antecedent_verdict: Verdict,
    pub consequent_verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainVerdicts {
    pub svi: VIVerdict,
    pub mvi: VIVerdict,
    pub svi2: VIVerdict,
    pub mvi2: VIVerdict,
    pub minimality: MinimalityVerdict,
    /// Present when every probed value is a singleton.
    pub vector: Option<VectorEfficiency>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainReport {
    #[serde(serialize_with = "ser_vec")]
    pub x0: Vec<f64>,
    pub hypotheses: Hypotheses,
    pub verdicts: ChainVerdicts,
    pub implications: Vec<Implication>,
    pub probes: usize,
}

impl ChainReport {
    pub fn worst_status(&self) -> Option<ImplicationStatus> {
        if self.implications.iter().any(|i| i.status == ImplicationStatus::Violated) {
            Some(ImplicationStatus::Violated)
        } else if self.implications.iter().any(|i| i.status == ImplicationStatus::Undetermined) {
            Some(ImplicationStatus::Undetermined)
        } else {
            None
        }
    }

    fn named(&self, name: &str) -> Verdict {
        let v = &self.verdicts;
        match name {
            "svi" => v.svi.verdict,
            "mvi" => v.mvi.verdict,
            "svi2" => v.svi2.verdict,
            "mvi2" => v.mvi2.verdict,
            "w-l-Min" => v.minimality.w_l_min,
            "w-sc-Min" => v.minimality.w_sc_min,
            "w-Min" => v.minimality.w_min,
            "weakly-efficient" => match &v.vector {
                Some(e) if e.efficient => Verdict::Holds,
                Some(_) => Verdict::Fails,
                None => Verdict::Undetermined,
            },
            other => panic!("unknown statement `{other}`"),
        }
    }
}

fn implication_status(antecedent: Verdict, consequent: Verdict) -> ImplicationStatus {
    match (antecedent, consequent) {
        (_, Verdict::Holds) | (Verdict::Fails, _) => ImplicationStatus::Confirmed,
        (Verdict::Holds, Verdict::Fails) => ImplicationStatus::Violated,
        _ => ImplicationStatus::Undetermined,
    }
}

const CONVEX_ROUTE: &[&str] = &["c_convexity"];
const MINTY_PSEUDO_ROUTE: &[&str] = &[
    "compactness",
    "radial_hausdorff",
    "star_shaped",
    "properness",
    "radial_pseudoconvex",
    "radial_pseudoconcave",
    "ray_resolution",
];
const MINTY_CONVEX_ROUTE: &[&str] = &["compactness", "radial_hausdorff", "star_shaped", "c_convexity", "ray_resolution"];
const STAMPACCHIA_ROUTE: &[&str] = &["compactness", "radial_ssqc", "radial_hausdorff", "ray_resolution"];
const COMPACT_CONVEX_ROUTE: &[&str] = &["compactness", "c_convexity"];

/// `(antecedent, consequent, routes)`; each route is a named hypothesis list.
type Rule = (&'static str, &'static str, &'static [(&'static str, &'static [&'static str])]);

const RULES: &[Rule] = &[
    ("svi", "w-sc-Min", &[("radial C-convexity", CONVEX_ROUTE)]),
    ("w-sc-Min", "mvi", &[("radial C-convexity", CONVEX_ROUTE)]),
    ("svi2", "w-sc-Min", &[("C-convexity", CONVEX_ROUTE)]),
    ("w-sc-Min", "mvi2", &[("C-convexity", CONVEX_ROUTE)]),
    ("w-sc-Min", "w-Min", &[("unconditional", &[])]),
    ("w-l-Min", "w-Min", &[("unconditional", &[])]),
    ("w-Min", "w-sc-Min", &[("compact convex values", COMPACT_CONVEX_ROUTE)]),
    (
        "mvi",
        "w-Min",
        &[("pseudoconvex and pseudoconcave", MINTY_PSEUDO_ROUTE), ("C-convexity", MINTY_CONVEX_ROUTE)],
    ),
    ("w-Min", "svi", &[("semistrictly quasiconvex, l.s.c.", STAMPACCHIA_ROUTE)]),
];

const VECTOR_RULES: &[Rule] = &[
    (
        "mvi",
        "weakly-efficient",
        &[("pseudoconvex and pseudoconcave", MINTY_PSEUDO_ROUTE), ("radially convex", MINTY_CONVEX_ROUTE)],
    ),
    ("weakly-efficient", "svi", &[("radially C-convex", &["c_convexity", "radial_hausdorff", "ray_resolution"])]),
];

fn evaluate_rules(report: &ChainReport) -> Vec<Implication> {
    let rules = RULES
        .iter()
        .chain(if report.verdicts.vector.is_some() { VECTOR_RULES.iter() } else { [].iter() });
    rules
        .map(|&(ante, cons, routes)| {
            let a = report.named(ante);
            let c = report.named(cons);
            let usable = routes
                .iter()
                .find(|(_, req)| req.iter().all(|h| report.hypotheses.get(h).holds()));
            match usable {
                Some(&(route, req)) => Implication {
                    antecedent: ante,
                    consequent: cons,
                    status: implication_status(a, c),
                    route: Some(route),
                    requires: req.to_vec(),
                    missing: Vec::new(),
                    antecedent_verdict: a,
                    consequent_verdict: c,
                },
                None => {
                    let (route, req) = routes[0];
                    Implication {
                        antecedent: ante,
                        consequent: cons,
                        status: ImplicationStatus::NotApplicable,
                        route: Some(route),
                        requires: req.to_vec(),
                        missing: req.iter().copied().filter(|h| !report.hypotheses.get(h).holds()).collect(),
                        antecedent_verdict: a,
                        consequent_verdict: c,
                    }
                }
            }
        })
        .collect()
}

/// Classifies every scalarized ray path from `x0` to the other samples.
pub fn radial_classification(map: &SetMap, x0: &[f64], wstar: &WStarSample, settings: &Settings) -> Result<RadialClassification> {
    let mut out = RadialClassification {
        semistrictly_quasiconvex: Verdict::Holds,
        pseudoconvex: Verdict::Holds,
        pseudoconcave: Verdict::Holds,
        paths: 0,
        ssqc_witness_x: None,
        pseudoconvex_witness_x: None,
        pseudoconcave_witness_x: None,
    };
    for x in map.domain() {
        if x.as_slice() == x0 {
            continue;
        }
        let grid = map.ray_grid(x0, x, settings.ray_steps);
        if grid.len() < 3 {
            continue;
        }
        let paths = RayPaths::new(map, x0, x);
        for w in wstar.iter() {
            let path = paths.path(w, &grid)?;
            let r = classify_path(&path, &settings.dini, settings.tau_strict)?;
            out.paths += 1;
            let note = |current: &mut Verdict, new: Verdict, slot: &mut Option<Vec<f64>>| {
                if new != Verdict::Holds && (slot.is_none() || new == Verdict::Fails && *current != Verdict::Fails) {
                    *slot = Some(x.clone());
                }
                *current = current.and(new);
            };
            note(&mut out.semistrictly_quasiconvex, r.semistrictly_quasiconvex, &mut out.ssqc_witness_x);
            note(&mut out.pseudoconvex, r.pseudoconvex, &mut out.pseudoconvex_witness_x);
            note(&mut out.pseudoconcave, r.pseudoconcave, &mut out.pseudoconcave_witness_x);
        }
    }
    Ok(out)
}

/// C-convexity on the pairs `(x, x0)` and the self pairs `(x, x)`.
pub fn radial_c_convexity(map: &SetMap, x0: &[f64], cone: &Cone, wstar: &WStarSample, settings: &Settings) -> Result<CConvexityReport> {
    let tau = settings.tau_strict;
    let self_pairs: Vec<(Vec<f64>, Vec<f64>)> = map.domain().iter().map(|x| (x.clone(), x.clone())).collect();
    let mut total = c_convexity_check(map, cone, wstar, &self_pairs, &[0.5], tau)?;
    for x in map.domain() {
        if x.as_slice() == x0 {
            continue;
        }
        let ts: Vec<f64> = if map.is_generator() {
            settings.convexity_t.clone()
        } else {
            let g = map.ray_grid(x0, x, settings.ray_steps);
            g[1..g.len() - 1].to_vec()
        };
        if ts.is_empty() {
            continue;
        }
        let r = c_convexity_check(map, cone, wstar, &[(x.clone(), x0.to_vec())], &ts, tau)?;
        total.minkowski = total.minkowski.and(r.minkowski);
        total.scalarized = total.scalarized.and(r.scalarized);
        total.verdict = total.minkowski;
        total.combinations += r.combinations;
        total.witness = total.witness.or(r.witness);
        total.scalar_witness = total.scalar_witness.or(r.scalar_witness);
    }
    Ok(total)
}

fn star_shaped(map: &SetMap, x0: &[f64], steps: usize) -> Result<PointCheck> {
    for i in map.dom_indices() {
        let x = &map.domain()[i];
        for t in map.ray_grid(x0, x, steps) {
            let p = ray_point(x0, x, t);
            if map.evaluate(&p)?.is_empty() {
                return Ok(PointCheck {
                    verdict: Verdict::Fails,
                    witness: Some(p),
                });
            }
        }
    }
    Ok(PointCheck {
        verdict: Verdict::Holds,
        witness: None,
    })
}

fn properness(map: &SetMap, probes: &[Vec<f64>]) -> Result<PointCheck> {
    for x in probes {
        if map.evaluate(x)?.whole_space {
            return Ok(PointCheck {
                verdict: Verdict::Fails,
                witness: Some(x.clone()),
            });
        }
    }
    Ok(PointCheck {
        verdict: Verdict::Holds,
        witness: None,
    })
}

fn vector_efficiency(map: &SetMap, x0: &[f64], cone: &Cone, probes: &[Vec<f64>], tau: f64) -> Result<Option<VectorEfficiency>> {
    for x in probes {
        if map.evaluate(x)?.singleton_point().is_none() {
            return Ok(None);
        }
    }
    crate::order::vector_weak_efficient_over(map, x0, cone, probes, tau).map(Some)
}

/// Runs the hypothesis checks, both inequality pairs and the minimality
/// classification at `x0`, and records each implication's status.
pub fn theorem_chain(map: &SetMap, x0: &[f64], cone: &Cone, wstar: &WStarSample, settings: &Settings) -> Result<ChainReport> {
    let v0 = map.evaluate(x0)?;
    if v0.is_empty() {
        return Err(Error::BasePointOutsideDomain(x0.to_vec()));
    }
    let tau = settings.tau_strict;
    let probes = probe_points(map, x0, settings.ray_steps);
    let hypotheses = Hypotheses {
        compactness: if v0.whole_space { Verdict::Fails } else { Verdict::Holds },
        c_convexity: radial_c_convexity(map, x0, cone, wstar, settings)?,
        radial_hausdorff: radial_hausdorff_check(map, x0, settings.hausdorff_eps, settings.ray_steps, tau)?,
        properness: properness(map, &probes)?,
        star_shaped: star_shaped(map, x0, settings.ray_steps)?,
        ray_resolution: if map.is_generator() { Verdict::Holds } else { Verdict::Undetermined },
        radial: radial_classification(map, x0, wstar, settings)?,
    };
    let (svi2, mvi2) = svi2_mvi2_check(map, x0, wstar, &probes, settings)?;
    let verdicts = ChainVerdicts {
        svi: svi_check(map, x0, wstar, &probes, settings)?,
        mvi: mvi_check(map, x0, wstar, &probes, settings)?,
        svi2,
        mvi2,
        minimality: classify_weak_min(map, x0, cone, wstar, &probes, tau)?,
        vector: vector_efficiency(map, x0, cone, &probes, tau)?,
    };
    let mut report = ChainReport {
        x0: x0.to_vec(),
        hypotheses,
        verdicts,
        implications: Vec::new(),
        probes: probes.len(),
    };
    report.implications = evaluate_rules(&report);
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ReplayOutcome {
    pub checked: usize,
    pub mismatches: usize,
}

impl ReplayOutcome {
    pub fn ok(&self) -> bool {
        self.mismatches == 0
    }

    fn merge(&mut self, other: ReplayOutcome) {
        self.checked += other.checked;
        self.mismatches += other.mismatches;
    }
}

fn same_bits(a: ExtReal, b: ExtReal) -> bool {
    a.to_f64().to_bits() == b.to_f64().to_bits()
}

/// Re-evaluates every witnessed entry of a VI verdict.
pub fn replay_vi(map: &SetMap, verdict: &VIVerdict, wstar: &WStarSample, settings: &Settings) -> Result<ReplayOutcome> {
    let mut out = ReplayOutcome::default();
    for e in &verdict.per_x {
        let Some(j) = e.w_index else { continue };
        let d = vi_derivative(verdict.kind, map, &verdict.x0, &e.x, &wstar.weights[j], &settings.dini, settings.ray_steps)?;
        out.checked += 1;
        if !same_bits(d, e.value) {
            out.mismatches += 1;
        }
    }
    Ok(out)
}

/// Re-evaluates every (w-sc-Min) witness gap.
pub fn replay_minimality(map: &SetMap, m: &MinimalityVerdict, wstar: &WStarSample) -> Result<ReplayOutcome> {
    let mut out = ReplayOutcome::default();
    let v0 = map.evaluate(&m.x0)?;
    for e in &m.sc_entries {
        let Some(j) = e.w_index else { continue };
        let w = &wstar.weights[j];
        let v = map.evaluate(&e.x)?;
        let gap = crate::order::sc_gap(scalarize(&v0, w)?, scalarize(&v, w)?);
        out.checked += 1;
        if gap.to_bits() != e.gap.to_bits() {
            out.mismatches += 1;
        }
    }
    Ok(out)
}

/// Replays every witness recorded in a chain report.
pub fn replay_chain(map: &SetMap, report: &ChainReport, wstar: &WStarSample, settings: &Settings) -> Result<ReplayOutcome> {
    let mut out = ReplayOutcome::default();
    let v = &report.verdicts;
    for vi in [&v.svi, &v.mvi, &v.svi2, &v.mvi2] {
        out.merge(replay_vi(map, vi, wstar, settings)?);
    }
    out.merge(replay_minimality(map, &v.minimality, wstar)?);
    Ok(out)
}

/// The JSON layout of a chain run over every base point of a problem.
#[derive(Debug, Clone, Serialize)]
pub struct ChainDocument {
    pub instance: InstanceSummary,
    pub hypotheses: Vec<BasePointHypotheses>,
    pub verdicts: Vec<BasePointVerdicts>,
    pub implications: Vec<BasePointImplications>,
    pub resolution: ChainResolution,
    pub witnesses: Vec<BasePointWitnesses>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BasePointHypotheses {
    #[serde(serialize_with = "ser_vec")]
    pub x0: Vec<f64>,
    #[serde(flatten)]
    pub checks: Hypotheses,
}

#[derive(Debug, Clone, Serialize)]
pub struct BasePointVerdicts {
    #[serde(serialize_with = "ser_vec")]
    pub x0: Vec<f64>,
    pub svi: Verdict,
    pub mvi: Verdict,
    pub svi2: Verdict,
    pub mvi2: Verdict,
    #[serde(rename = "w-l-Min")]
    pub w_l_min: Verdict,
    #[serde(rename = "w-sc-Min")]
    pub w_sc_min: Verdict,
    #[serde(rename = "w-Min")]
    pub w_min: Verdict,
    #[serde(rename = "weakly-efficient", skip_serializing_if = "Option::is_none")]
    pub weakly_efficient: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BasePointImplications {
    #[serde(serialize_with = "ser_vec")]
    pub x0: Vec<f64>,
    pub implications: Vec<Implication>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BasePointWitnesses {
    #[serde(serialize_with = "ser_vec")]
    pub x0: Vec<f64>,
    #[serde(flatten)]
    pub verdicts: ChainVerdicts,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainResolution {
    pub settings: Settings,
    pub wstar_size: usize,
    pub probes: Vec<usize>,
}

impl ChainDocument {
    pub fn new(instance: InstanceSummary, settings: &Settings, wstar: &WStarSample, reports: &[ChainReport]) -> ChainDocument {
        ChainDocument {
            instance,
            hypotheses: reports
                .iter()
                .map(|r| BasePointHypotheses { x0: r.x0.clone(), checks: r.hypotheses.clone() })
                .collect(),
            verdicts: reports
                .iter()
                .map(|r| {
                    let v = &r.verdicts;
                    BasePointVerdicts {
                        x0: r.x0.clone(),
                        svi: v.svi.verdict,
                        mvi: v.mvi.verdict,
                        svi2: v.svi2.verdict,
                        mvi2: v.mvi2.verdict,
                        w_l_min: v.minimality.w_l_min,
                        w_sc_min: v.minimality.w_sc_min,
                        w_min: v.minimality.w_min,
                        weakly_efficient: v.vector.as_ref().map(|e| e.efficient),
                    }
                })
                .collect(),
            implications: reports
                .iter()
                .map(|r| BasePointImplications { x0: r.x0.clone(), implications: r.implications.clone() })
                .collect(),
            resolution: ChainResolution {
                settings: settings.clone(),
                wstar_size: wstar.len(),
                probes: reports.iter().map(|r| r.probes).collect(),
            },
            witnesses: reports
                .iter()
                .map(|r| BasePointWitnesses { x0: r.x0.clone(), verdicts: r.verdicts.clone() })
                .collect(),
        }
    }
}

/// Runs [`theorem_chain`] at every base point of `problem`, in parallel on
/// the current rayon pool, returning reports in base-point order.
pub fn chain_problem(problem: &Problem) -> Result<(Vec<ChainReport>, WStarSample)> {
    let wstar = problem.cone.dual_base(problem.settings.wstar_density);
    let reports = problem
        .base_points
        .par_iter()
        .map(|x0| theorem_chain(&problem.map, x0, &problem.cone, &wstar, &problem.settings))
        .collect::<Result<Vec<_>>>()?;
    Ok((reports, wstar))
}
