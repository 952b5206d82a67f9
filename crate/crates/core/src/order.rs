//! Set order relations, scalar separation and weak minimality.

use serde::Serialize;

use crate::cone::{Cone, Position, WStarSample};
use crate::error::{Error, Result};
use crate::extreal::{ExtReal, NEG_INF, POS_INF};
use crate::linalg::sub;
use crate::report::{ser_f64, ser_opt_vec, ser_vec};
use crate::scalarize::scalarize;
use crate::setmap::{member_of_extension, ray_point, SetMap, SetValue};
use crate::verdict::Verdict;

fn require_cloud(v: &SetValue) -> Result<()> {
    if v.is_empty() {
        Err(Error::EmptySet)
    } else {
        Ok(())
    }
}

/// `min_{b ∈ B} max_{a ∈ A} min_j ĝ_j·(b − a)`: the largest `ε` with
/// `B + εB ⊆ A + C` when positive.
pub fn ll_margin(a: &SetValue, b: &SetValue, cone: &Cone) -> Result<f64> {
    require_cloud(a)?;
    require_cloud(b)?;
    if a.whole_space {
        return Ok(f64::INFINITY);
    }
    if b.whole_space {
        return Ok(f64::NEG_INFINITY);
    }
    let mut margin = f64::INFINITY;
    for y in &b.points {
        margin = margin.min(member_of_extension(cone, a, y, 0.0)?.margin);
    }
    Ok(margin)
}

/// `A < B ⟺ B ⊆ A + Int C`.
pub fn relation_lt(a: &SetValue, b: &SetValue, cone: &Cone, tau: f64) -> Result<bool> {
    require_cloud(a)?;
    require_cloud(b)?;
    if a.whole_space {
        return Ok(true);
    }
    if b.whole_space {
        return Ok(false);
    }
    for y in &b.points {
        if member_of_extension(cone, a, y, tau)?.position != Position::Interior {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `A ≪ B ⟺ B + U ⊆ A + C` for some ball `U`; holds iff the margin exceeds `tau`.
pub fn relation_ll(a: &SetValue, b: &SetValue, cone: &Cone, tau: f64) -> Result<(bool, f64)> {
    let m = ll_margin(a, b, cone)?;
    Ok((m > tau, m))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationReport {
    pub verdict: Verdict,
    pub w_index: Option<usize>,
    #[serde(serialize_with = "ser_opt_vec")]
    pub w: Option<Vec<f64>>,
}

/// HOLDS iff every sampled `w` has `φ_w(A) = −∞` or `φ_w(A) < φ_w(B) − tau`.
pub fn scalar_strict_separation(a: &SetValue, b: &SetValue, wstar: &WStarSample, tau: f64) -> Result<SeparationReport> {
    require_cloud(a)?;
    require_cloud(b)?;
    for (j, w) in wstar.iter().enumerate() {
        let fa = scalarize(a, w)?;
        let fb = scalarize(b, w)?;
        let separated = match (fa, fb) {
            (NEG_INF, _) => true,
            (_, NEG_INF) => false,
            (ExtReal::Finite(x), ExtReal::Finite(y)) => x < y - tau,
            _ => fa < fb,
        };
        if !separated {
            return Ok(SeparationReport {
                verdict: Verdict::Fails,
                w_index: Some(j),
                w: Some(w.clone()),
            });
        }
    }
    Ok(SeparationReport {
        verdict: Verdict::Holds,
        w_index: None,
        w: None,
    })
}

/// Finest geometric ray parameter `2^-GEOMETRIC_DEPTH` in the probe set.
pub const GEOMETRIC_DEPTH: i32 = 16;

/// Points standing in for `∀x ∈ X` around `x0`.
///
/// Tabulated maps: the samples. Generator maps: the samples, plus the points
/// `x0 + t(x − x0)` for every sample `x`, with `t = k/ray_steps` and
/// `t = 2^-j`, so that dominating points between `x0` and a sample are seen.
pub fn probe_points(map: &SetMap, x0: &[f64], ray_steps: usize) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = map.domain().to_vec();
    if !map.is_generator() {
        return out;
    }
    let mut ts: Vec<f64> = (1..ray_steps).map(|k| k as f64 / ray_steps as f64).collect();
    ts.extend((1..=GEOMETRIC_DEPTH).map(|j| 0.5f64.powi(j)));
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    for x in map.domain() {
        if x.as_slice() == x0 {
            continue;
        }
        for &t in &ts {
            out.push(ray_point(x0, x, t));
        }
    }
    let mut seen = std::collections::HashSet::new();
    out.retain(|p| seen.insert(p.iter().map(|c| c.to_bits()).collect::<Vec<_>>()));
    out
}

/// Per-x outcome of the (w-sc-Min) existential.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScEntry {
    #[serde(serialize_with = "ser_vec")]
    pub x: Vec<f64>,
    pub status: Verdict,
    pub w_index: Option<usize>,
    /// `φ_w(x0) − φ_w(x)` at the witness, or the smallest gap when none.
    #[serde(serialize_with = "ser_f64")]
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominanceWitness {
    #[serde(serialize_with = "ser_vec")]
    pub x: Vec<f64>,
    #[serde(serialize_with = "ser_f64")]
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimalityVerdict {
    #[serde(serialize_with = "ser_vec")]
    pub x0: Vec<f64>,
    pub w_l_min: Verdict,
    pub w_sc_min: Verdict,
    pub w_min: Verdict,
    pub degenerate_whole_space: bool,
    pub probed: usize,
    /// Probe point with the largest `≪` margin over `F(x0)`.
    pub worst: Option<DominanceWitness>,
    pub sc_entries: Vec<ScEntry>,
}

/// `φ_w(x0) − φ_w(x)` for the (w-sc-Min) inequality, `+∞` when the guard
/// `φ_w(x) ≠ −∞` fails, `−∞` when `x ∉ dom F`.
pub(crate) fn sc_gap(phi0: ExtReal, phi: ExtReal) -> f64 {
    match (phi0, phi) {
        (_, NEG_INF) => f64::INFINITY,
        (_, POS_INF) => f64::NEG_INFINITY,
        (NEG_INF, _) => f64::NEG_INFINITY,
        (a, b) => a.to_f64() - b.to_f64(),
    }
}

/// The three weak-minimality notions at `x0`, quantified over `probes`.
///
/// (w-l-Min) and (w-Min) share the margin of `F(x) ≪ F(x0)` on finite clouds.
/// (w-sc-Min) takes per `x` the first sampled `w` with gap at most `tau`;
/// `x` fails when every gap exceeds `2·tau`.
pub fn classify_weak_min(
    map: &SetMap,
    x0: &[f64],
    cone: &Cone,
    wstar: &WStarSample,
    probes: &[Vec<f64>],
    tau: f64,
) -> Result<MinimalityVerdict> {
    let v0 = map.evaluate(x0)?;
    if v0.is_empty() {
        return Err(Error::BasePointOutsideDomain(x0.to_vec()));
    }
    if v0.whole_space {
        return Ok(MinimalityVerdict {
            x0: x0.to_vec(),
            w_l_min: Verdict::Holds,
            w_sc_min: Verdict::Holds,
            w_min: Verdict::Holds,
            degenerate_whole_space: true,
            probed: probes.len(),
            worst: None,
            sc_entries: Vec::new(),
        });
    }
    let phi0: Vec<ExtReal> = wstar.iter().map(|w| scalarize(&v0, w)).collect::<Result<_>>()?;
    let mut worst: Option<DominanceWitness> = None;
    let mut w_l = Verdict::Holds;
    let mut w_sc = Verdict::Holds;
    let mut w_min = Verdict::Holds;
    let mut sc_entries = Vec::with_capacity(probes.len());
    for x in probes {
        let v = map.evaluate(x)?;
        let margin = if v.is_empty() { f64::NEG_INFINITY } else { ll_margin(&v, &v0, cone)? };
        if margin > tau {
            w_min = Verdict::Fails;
        }
        if !v.is_empty() && relation_lt(&v, &v0, cone, tau)? {
            w_l = Verdict::Fails;
        }
        if worst.as_ref().is_none_or(|w| margin > w.margin) {
            worst = Some(DominanceWitness {
                x: x.clone(),
                margin,
            });
        }

        let mut entry = ScEntry {
            x: x.clone(),
            status: Verdict::Fails,
            w_index: None,
            gap: f64::INFINITY,
        };
        for (j, w) in wstar.iter().enumerate() {
            let gap = sc_gap(phi0[j], scalarize(&v, w)?);
            if gap <= tau {
                entry.status = Verdict::Holds;
                entry.w_index = Some(j);
                entry.gap = gap;
                break;
            }
            if gap < entry.gap {
                entry.gap = gap;
            }
        }
        if entry.status != Verdict::Holds && entry.gap <= 2.0 * tau {
            entry.status = Verdict::Undetermined;
        }
        w_sc = w_sc.and(entry.status);
        sc_entries.push(entry);
    }
    if let Some(w) = &worst {
        if w_sc.holds() && w.margin * wstar.min_norm() > 2.0 * tau {
            return Err(Error::Inconsistent(format!(
                "scalarized minimality holds at {x0:?} but F({:?}) dominates with margin {}",
                w.x, w.margin
            )));
        }
    }
    if w_l != w_min {
        return Err(Error::Inconsistent(format!(
            "set-relation minimality verdicts disagree at {x0:?}: w-l-Min {w_l}, w-Min {w_min}"
        )));
    }
    Ok(MinimalityVerdict {
        x0: x0.to_vec(),
        w_l_min: w_l,
        w_sc_min: w_sc,
        w_min,
        degenerate_whole_space: false,
        probed: probes.len(),
        worst,
        sc_entries,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VectorEfficiency {
    pub efficient: bool,
    #[serde(serialize_with = "ser_opt_vec")]
    pub witness: Option<Vec<f64>>,
}

/// No sampled `x` has `F(x0) − F(x) ∈ Int C` (singleton-valued maps).
///
/// The witness is the dominating sample with the largest margin.
pub fn vector_weak_efficient(map: &SetMap, x0: &[f64], cone: &Cone, tau: f64) -> Result<VectorEfficiency> {
    vector_weak_efficient_over(map, x0, cone, map.domain(), tau)
}

/// [`vector_weak_efficient`] quantified over `points` instead of the samples.
pub fn vector_weak_efficient_over(
    map: &SetMap,
    x0: &[f64],
    cone: &Cone,
    points: &[Vec<f64>],
    tau: f64,
) -> Result<VectorEfficiency> {
    let v0 = map.evaluate(x0)?;
    let y0 = v0.singleton_point().ok_or_else(|| Error::NonSingletonValue(x0.to_vec()))?.to_vec();
    let mut best: Option<(f64, &Vec<f64>)> = None;
    for x in points {
        let v = map.evaluate(x)?;
        let y = v.singleton_point().ok_or_else(|| Error::NonSingletonValue(x.clone()))?;
        let m = cone.membership(&sub(&y0, y), tau)?;
        if m.position == Position::Interior && best.is_none_or(|(b, _)| m.margin > b) {
            best = Some((m.margin, x));
        }
    }
    Ok(VectorEfficiency {
        efficient: best.is_none(),
        witness: best.map(|(_, x)| x.clone()),
    })
}
