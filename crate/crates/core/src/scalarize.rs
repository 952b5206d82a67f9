//! Scalarizations `φ_w(x) = inf{w·y : y ∈ F(x)}`, scalar paths along rays,
//! and the sampled continuity checks attached to the scalarization family.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::cone::WStarSample;
use crate::error::{Error, Result};
use crate::extreal::{ExtReal, NEG_INF, POS_INF};
use crate::linalg::{dist, dot};
use crate::report::{ser_f64, ser_opt_f64, ser_opt_vec, ser_vec};
use crate::setmap::{ray_point, Generator, MapSource, SetMap, SetValue};
use crate::verdict::Verdict;

/// `min_{p ∈ value} w·p`; `+∞` for the empty set, `-∞` for the whole space.
pub fn scalarize(value: &SetValue, w: &[f64]) -> Result<ExtReal> {
    if value.whole_space {
        return Ok(NEG_INF);
    }
    let mut best = f64::INFINITY;
    for p in &value.points {
        if p.len() != w.len() {
            return Err(Error::DimensionMismatch {
                context: "scalarize",
                expected: w.len(),
                found: p.len(),
            });
        }
        best = best.min(dot(p, w));
    }
    Ok(ExtReal::finite(best))
}

/// A closed linear piece `[t0, t1]` with end values `v0`, `v1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearPiece {
    #[serde(serialize_with = "ser_f64")]
    pub t0: f64,
    #[serde(serialize_with = "ser_f64")]
    pub t1: f64,
    #[serde(serialize_with = "ser_f64")]
    pub v0: f64,
    #[serde(serialize_with = "ser_f64")]
    pub v1: f64,
}

impl LinearPiece {
    pub fn new(t0: f64, t1: f64, v0: f64, v1: f64) -> LinearPiece {
        assert!(t0 <= t1, "piece interval reversed");
        LinearPiece { t0, t1, v0, v1 }
    }

    pub fn covers(&self, t: f64) -> bool {
        self.t0 <= t && t <= self.t1
    }

    pub fn slope(&self) -> f64 {
        if self.t1 > self.t0 {
            (self.v1 - self.v0) / (self.t1 - self.t0)
        } else {
            0.0
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        if t == self.t0 {
            self.v0
        } else if t == self.t1 {
            self.v1
        } else {
            self.v0 + self.slope() * (t - self.t0)
        }
    }
}

/// Minimum of closed linear pieces over `[0, 1]`, `+∞` where no piece covers.
///
/// A minimum of finitely many closed pieces is lower semicontinuous.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiecewiseLinear {
    pub pieces: Vec<LinearPiece>,
}

impl PiecewiseLinear {
    pub fn new(pieces: Vec<LinearPiece>) -> PiecewiseLinear {
        PiecewiseLinear { pieces }
    }

    /// The continuous interpolant of `(t_i, v_i)` nodes.
    pub fn interpolate(nodes: &[(f64, f64)]) -> PiecewiseLinear {
        PiecewiseLinear::new(
            nodes
                .windows(2)
                .map(|w| LinearPiece::new(w[0].0, w[1].0, w[0].1, w[1].1))
                .collect(),
        )
    }

    pub fn eval(&self, t: f64) -> ExtReal {
        if !(0.0..=1.0).contains(&t) {
            return POS_INF;
        }
        self.pieces
            .iter()
            .filter(|p| p.covers(t))
            .map(|p| ExtReal::finite(p.value(t)))
            .min()
            .unwrap_or(POS_INF)
    }

    /// Exact lower Dini derivative `liminf_{s↓0} (φ(t + dir·s) ∸ φ(t)) / s`.
    pub fn lower_derivative(&self, t: f64, direction: i8) -> ExtReal {
        let here = self.eval(t);
        let Some(v) = here.as_finite() else {
            // φ(t) = +∞ makes every quotient -∞.
            return NEG_INF;
        };
        let dir = f64::from(direction.signum());
        let touch = 1e-12 * (1.0 + v.abs());
        self.pieces
            .iter()
            .filter(|p| {
                let on_side = if dir > 0.0 {
                    p.t0 <= t && t < p.t1
                } else {
                    p.t0 < t && t <= p.t1
                };
                on_side && (p.value(t) - v).abs() <= touch
            })
            .map(|p| ExtReal::finite(dir * p.slope()))
            .min()
            .unwrap_or(POS_INF)
    }
}

pub type PathFn = Arc<dyn Fn(f64) -> ExtReal + Send + Sync>;

/// How a path is evaluated off its grid.
#[derive(Clone)]
pub enum PathEval {
    /// Only the grid values are known.
    Sampled,
    /// A closed-form function of `t`, `+∞` outside `[0, 1]`.
    Function(PathFn),
    /// Exact piecewise-linear description.
    Exact(PiecewiseLinear),
}

impl fmt::Debug for PathEval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathEval::Sampled => f.write_str("Sampled"),
            PathEval::Function(_) => f.write_str("Function(..)"),
            PathEval::Exact(pl) => f.debug_tuple("Exact").field(pl).finish(),
        }
    }
}

/// An extended-real function of `t ∈ [0, 1]` known on a grid.
#[derive(Debug, Clone)]
pub struct ScalarPath {
    t_grid: Vec<f64>,
    values: Vec<ExtReal>,
    eval: PathEval,
}

fn check_grid(t_grid: &[f64]) -> Result<()> {
    let increasing = t_grid.windows(2).all(|w| w[0] < w[1]);
    if !increasing || t_grid.first() != Some(&0.0) || t_grid.last() != Some(&1.0) {
        return Err(Error::InvalidSettings(
            "path grid must be strictly increasing from 0 to 1".into(),
        ));
    }
    Ok(())
}

/// `k / n` for `k = 0..=n`.
pub fn uniform_grid(n: usize) -> Vec<f64> {
    let n = n.max(1);
    (0..=n).map(|k| k as f64 / n as f64).collect()
}

impl ScalarPath {
    pub fn from_samples(t_grid: Vec<f64>, values: Vec<ExtReal>) -> Result<ScalarPath> {
        check_grid(&t_grid)?;
        if values.len() != t_grid.len() {
            return Err(Error::DimensionMismatch {
                context: "path values",
                expected: t_grid.len(),
                found: values.len(),
            });
        }
        Ok(ScalarPath {
            t_grid,
            values,
            eval: PathEval::Sampled,
        })
    }

    pub fn from_fn<F>(t_grid: Vec<f64>, f: F) -> Result<ScalarPath>
    where
        F: Fn(f64) -> ExtReal + Send + Sync + 'static,
    {
        check_grid(&t_grid)?;
        let f: PathFn = Arc::new(move |t| if (0.0..=1.0).contains(&t) { f(t) } else { POS_INF });
        let values = t_grid.iter().map(|&t| f(t)).collect();
        Ok(ScalarPath {
            t_grid,
            values,
            eval: PathEval::Function(f),
        })
    }

    pub fn from_piecewise(pl: PiecewiseLinear, t_grid: Vec<f64>) -> Result<ScalarPath> {
        check_grid(&t_grid)?;
        let values = t_grid.iter().map(|&t| pl.eval(t)).collect();
        Ok(ScalarPath {
            t_grid,
            values,
            eval: PathEval::Exact(pl),
        })
    }

    pub fn t_grid(&self) -> &[f64] {
        &self.t_grid
    }

    pub fn values(&self) -> &[ExtReal] {
        &self.values
    }

    pub fn eval_mode(&self) -> &PathEval {
        &self.eval
    }

    pub fn len(&self) -> usize {
        self.t_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t_grid.is_empty()
    }

    pub fn grid_index(&self, t: f64) -> Option<usize> {
        self.t_grid.binary_search_by(|g| g.total_cmp(&t)).ok()
    }

    /// `φ(t)`: `+∞` outside `[0, 1]`; `None` off the grid of a sampled path.
    pub fn value_at(&self, t: f64) -> Option<ExtReal> {
        if !(0.0..=1.0).contains(&t) {
            return Some(POS_INF);
        }
        match &self.eval {
            PathEval::Function(f) => Some(f(t)),
            PathEval::Exact(pl) => Some(pl.eval(t)),
            PathEval::Sampled => self.grid_index(t).map(|i| self.values[i]),
        }
    }
}

/// `t ↦ φ_w(x0 + t(x − x0))` on `[0, 1]`.
///
/// Generator maps give a closed-form path; tabulated maps give grid samples.
pub fn scalar_path(map: &SetMap, x0: &[f64], x: &[f64], w: &[f64], t_grid: &[f64]) -> Result<ScalarPath> {
    RayPaths::new(map, x0, x).path(w, t_grid)
}

/// Scalar paths along one ray for many weights.
///
/// Generator values are memoized by `t`, so each point of the ray is
/// evaluated once however many weights are scalarized against it.
pub struct RayPaths<'a> {
    map: &'a SetMap,
    x0: &'a [f64],
    x: &'a [f64],
    cache: Option<Arc<RayCache>>,
}

struct RayCache {
    generator: Generator,
    x0: Vec<f64>,
    x: Vec<f64>,
    values: Mutex<HashMap<u64, Arc<SetValue>>>,
}

impl RayCache {
    fn value(&self, t: f64) -> Arc<SetValue> {
        let mut values = self.values.lock().expect("ray cache lock");
        values
            .entry(t.to_bits())
            .or_insert_with(|| Arc::new(self.generator.eval(&ray_point(&self.x0, &self.x, t))))
            .clone()
    }
}

impl<'a> RayPaths<'a> {
    pub fn new(map: &'a SetMap, x0: &'a [f64], x: &'a [f64]) -> Self {
        let cache = match map.source() {
            MapSource::Generator { generator, .. } => Some(Arc::new(RayCache {
                generator: generator.clone(),
                x0: x0.to_vec(),
                x: x.to_vec(),
                values: Mutex::new(HashMap::new()),
            })),
            MapSource::Tabulated(_) => None,
        };
        RayPaths { map, x0, x, cache }
    }

    pub fn path(&self, w: &[f64], t_grid: &[f64]) -> Result<ScalarPath> {
        let map = self.map;
        if w.len() != map.output_dim() && map.output_dim() != 0 {
            return Err(Error::DimensionMismatch {
                context: "scalar_path weight",
                expected: map.output_dim(),
                found: w.len(),
            });
        }
        match &self.cache {
            Some(cache) => {
                let cache = Arc::clone(cache);
                let w = w.to_vec();
                let f = move |t: f64| scalarize(&cache.value(t), &w).expect("generator output matches weight dimension");
                ScalarPath::from_fn(t_grid.to_vec(), f)
            }
            None => {
                let rays = map.ray_restriction(self.x0, self.x, t_grid)?;
                let values = rays
                    .values
                    .iter()
                    .map(|v| scalarize(v, w))
                    .collect::<Result<Vec<_>>>()?;
                ScalarPath::from_samples(t_grid.to_vec(), values)
            }
        }
    }
}

/// Outcome of one resolution-stamped continuity check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuityReport {
    pub verdict: Verdict,
    #[serde(serialize_with = "ser_f64")]
    pub eps: f64,
    /// Certifying radius when the verdict holds on a nonempty probe set.
    #[serde(serialize_with = "ser_opt_f64")]
    pub radius: Option<f64>,
    #[serde(serialize_with = "ser_vec")]
    pub probe_radii: Vec<f64>,
    /// Sampled points within the largest probe radius.
    pub probed: usize,
    pub vacuous: bool,
    pub witness: Option<ContinuityWitness>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuityWitness {
    #[serde(serialize_with = "ser_vec")]
    pub x: Vec<f64>,
    pub w_index: Option<usize>,
    #[serde(serialize_with = "ser_opt_vec")]
    pub w: Option<Vec<f64>>,
    /// Amount by which the inequality is violated (before subtracting eps).
    #[serde(serialize_with = "ser_f64")]
    pub gap: f64,
}

/// Radii `d, 2d` around `x0`, where `d` is the distance to the nearest other sample.
pub fn default_probe_radii(map: &SetMap, x0: &[f64]) -> Vec<f64> {
    let d = map
        .domain()
        .iter()
        .map(|s| dist(s, x0))
        .filter(|&d| d > 0.0)
        .fold(f64::INFINITY, f64::min);
    if d.is_finite() {
        vec![d * (1.0 + 1e-9), 2.0 * d * (1.0 + 1e-9)]
    } else {
        Vec::new()
    }
}

/// Shared radius scan: `gap_of(x)` returns the worst `(gap, w index)` at `x`.
fn radius_scan<G>(map: &SetMap, x0: &[f64], probe_radii: &[f64], eps: f64, tau: f64, gap_of: G) -> ContinuityReport
where
    G: Fn(&[f64]) -> (f64, Option<usize>),
{
    let mut radii: Vec<f64> = probe_radii.to_vec();
    radii.sort_by(f64::total_cmp);
    let rmax = radii.last().copied().unwrap_or(0.0);
    let near: Vec<(f64, &Vec<f64>)> = map
        .domain()
        .iter()
        .map(|s| (dist(s, x0), s))
        .filter(|&(d, _)| d > 0.0 && d <= rmax)
        .collect();
    let gaps: Vec<(f64, f64, Option<usize>)> = near
        .iter()
        .map(|&(d, s)| {
            let (g, wi) = gap_of(s);
            (d, g, wi)
        })
        .collect();

    let mut any_nonvacuous = false;
    let mut all_fail = true;
    let mut first_fail: Option<(usize, f64)> = None;
    for &r in &radii {
        let inside: Vec<usize> = (0..gaps.len()).filter(|&i| gaps[i].0 <= r).collect();
        if inside.is_empty() {
            continue;
        }
        any_nonvacuous = true;
        let (worst_i, worst) = inside
            .iter()
            .map(|&i| (i, gaps[i].1))
            .fold((inside[0], f64::NEG_INFINITY), |acc, (i, g)| if g > acc.1 { (i, g) } else { acc });
        if worst <= eps {
            return ContinuityReport {
                verdict: Verdict::Holds,
                eps,
                radius: Some(r),
                probe_radii: radii,
                probed: near.len(),
                vacuous: false,
                witness: None,
            };
        }
        if worst <= eps + tau {
            all_fail = false;
        } else if first_fail.is_none() {
            first_fail = Some((worst_i, worst));
        }
    }
    if !any_nonvacuous {
        return ContinuityReport {
            verdict: Verdict::Holds,
            eps,
            radius: None,
            probe_radii: radii,
            probed: 0,
            vacuous: true,
            witness: None,
        };
    }
    let witness = first_fail.map(|(i, g)| ContinuityWitness {
        x: near[i].1.clone(),
        w_index: gaps[i].2,
        w: None,
        gap: g,
    });
    ContinuityReport {
        verdict: if all_fail { Verdict::Fails } else { Verdict::Undetermined },
        eps,
        radius: None,
        probe_radii: radii,
        probed: near.len(),
        vacuous: false,
        witness,
    }
}

fn base_value(map: &SetMap, x0: &[f64]) -> Result<SetValue> {
    let v = map.evaluate(x0)?;
    if v.is_empty() {
        return Err(Error::BasePointOutsideDomain(x0.to_vec()));
    }
    Ok(v)
}

/// Lower equicontinuity of `{φ_w}` at `x0`: `φ_w(x0) ≤ φ_w(x) + eps` near `x0`.
pub fn equicontinuity_check(
    map: &SetMap,
    x0: &[f64],
    wstar: &WStarSample,
    probe_radii: &[f64],
    eps: f64,
    tau: f64,
) -> Result<ContinuityReport> {
    let v0 = base_value(map, x0)?;
    let phi0: Vec<ExtReal> = wstar.iter().map(|w| scalarize(&v0, w)).collect::<Result<_>>()?;
    let mut report = radius_scan(map, x0, probe_radii, eps, tau, |x| {
        let v = map.evaluate(x).expect("sample evaluates");
        let mut worst = (f64::NEG_INFINITY, None);
        for (j, w) in wstar.iter().enumerate() {
            let phi = scalarize(&v, w).expect("dimensions checked");
            let gap = match (phi0[j], phi) {
                (NEG_INF, _) | (_, POS_INF) => f64::NEG_INFINITY,
                (_, NEG_INF) | (POS_INF, _) => f64::INFINITY,
                (a, b) => a.to_f64() - b.to_f64(),
            };
            if gap > worst.0 {
                worst = (gap, Some(j));
            }
        }
        worst
    });
    if let Some(wit) = report.witness.as_mut() {
        wit.w = wit.w_index.map(|j| wstar.weights[j].clone());
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HausdorffReport {
    pub verdict: Verdict,
    pub per_eps: Vec<ContinuityReport>,
}

/// Upper Hausdorff continuity at `x0`: `F(x) ⊆ F(x0) + eps·B` near `x0`, per eps.
pub fn hausdorff_check(
    map: &SetMap,
    x0: &[f64],
    eps_list: &[f64],
    probe_radii: &[f64],
    tau: f64,
) -> Result<HausdorffReport> {
    let v0 = base_value(map, x0)?;
    let per_eps: Vec<ContinuityReport> = eps_list
        .iter()
        .map(|&eps| {
            radius_scan(map, x0, probe_radii, eps, tau, |x| {
                let v = map.evaluate(x).expect("sample evaluates");
                (v0.excess_of(&v), None)
            })
        })
        .collect();
    Ok(HausdorffReport {
        verdict: Verdict::all(per_eps.iter().map(|r| r.verdict)),
        per_eps,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialWitness {
    #[serde(serialize_with = "ser_vec")]
    pub x: Vec<f64>,
    #[serde(serialize_with = "ser_f64")]
    pub t: f64,
    #[serde(serialize_with = "ser_f64")]
    pub excess: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialReport {
    pub verdict: Verdict,
    #[serde(serialize_with = "ser_f64")]
    pub eps: f64,
    pub rays: usize,
    pub grid_points: usize,
    pub witness: Option<RadialWitness>,
}

/// Number of halvings of the ray step tried by the radial check on generator maps.
pub const RADIAL_REFINEMENTS: u32 = 4;

/// Upper Hausdorff continuity of every ray restriction `F_{x0,x}` on its grid.
///
/// At each grid `t` the neighbours at distance `δ` must satisfy
/// `F(t') ⊆ F(t) + eps·B`. Generator maps try `δ = h, h/2, …` for the grid
/// step `h`; tabulated maps use the adjacent samples only.
pub fn radial_hausdorff_check(map: &SetMap, x0: &[f64], eps: f64, steps: usize, tau: f64) -> Result<RadialReport> {
    base_value(map, x0)?;
    let mut verdict = Verdict::Holds;
    let mut witness: Option<RadialWitness> = None;
    let mut rays = 0;
    let mut grid_points = 0;
    for x in map.domain() {
        if x.as_slice() == x0 {
            continue;
        }
        rays += 1;
        let grid = map.ray_grid(x0, x, steps);
        grid_points += grid.len();
        let rv = map.ray_restriction(x0, x, &grid)?;
        for (i, &t) in grid.iter().enumerate() {
            let here = &rv.values[i];
            let excess_at = |delta_idx: Option<u32>| -> Result<f64> {
                let mut worst: f64 = 0.0;
                match delta_idx {
                    None => {
                        for j in [i.wrapping_sub(1), i + 1] {
                            if let Some(v) = rv.values.get(j) {
                                worst = worst.max(here.excess_of(v));
                            }
                        }
                    }
                    Some(k) => {
                        let h = 1.0 / steps.max(1) as f64 / f64::from(1u32 << k);
                        for tp in [t - h, t + h] {
                            if (0.0..=1.0).contains(&tp) {
                                let v = map.evaluate(&ray_point(x0, x, tp))?;
                                worst = worst.max(here.excess_of(&v));
                            }
                        }
                    }
                }
                Ok(worst)
            };
            let probes: Vec<Option<u32>> = if map.is_generator() {
                (0..=RADIAL_REFINEMENTS).map(Some).collect()
            } else {
                vec![None]
            };
            let mut best = f64::INFINITY;
            for p in probes {
                best = best.min(excess_at(p)?);
                if best <= eps {
                    break;
                }
            }
            let local = if best <= eps {
                Verdict::Holds
            } else if best <= eps + tau {
                Verdict::Undetermined
            } else {
                Verdict::Fails
            };
            if local != Verdict::Holds && (witness.is_none() || local == Verdict::Fails && verdict != Verdict::Fails) {
                witness = Some(RadialWitness {
                    x: x.clone(),
                    t,
                    excess: best,
                });
            }
            verdict = verdict.and(local);
        }
    }
    Ok(RadialReport {
        verdict,
        eps,
        rays,
        grid_points,
        witness,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupportProfile {
    pub values: Vec<ExtReal>,
    pub concave: Verdict,
}

/// `w ↦ φ_w(value)` along `segment` and its midpoint-concavity verdict.
pub fn support_profile(value: &SetValue, segment: &[Vec<f64>], tau: f64) -> Result<SupportProfile> {
    if !value.is_compact_cloud() {
        return Err(Error::EmptySet);
    }
    let values: Vec<ExtReal> = segment.iter().map(|w| scalarize(value, w)).collect::<Result<_>>()?;
    let mut concave = Verdict::Holds;
    for i in 1..segment.len().saturating_sub(1) {
        let (a, b, c) = (&segment[i - 1], &segment[i], &segment[i + 1]);
        let ac = dist(a, c);
        let lambda = if ac > 0.0 { dist(b, c) / ac } else { 0.5 };
        let chord = lambda * values[i - 1].to_f64() + (1.0 - lambda) * values[i + 1].to_f64();
        if values[i].to_f64() < chord - tau {
            concave = Verdict::Fails;
        }
    }
    Ok(SupportProfile { values, concave })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::Cone;
    use serde_json::json;

    fn cloud(pts: &[[f64; 2]]) -> SetValue {
        SetValue::new(pts.iter().map(|p| p.to_vec()).collect())
    }

    #[test]
    fn scalarize_examples() {
        let v = cloud(&[[1.0, 2.0], [3.0, 0.0]]);
        assert_eq!(scalarize(&v, &[1.0, 0.0]).unwrap(), ExtReal::finite(1.0));
        assert_eq!(scalarize(&v, &[0.5, 0.5]).unwrap(), ExtReal::finite(1.5));
        assert_eq!(scalarize(&SetValue::empty(), &[0.3, 0.7]).unwrap(), POS_INF);
        assert_eq!(scalarize(&SetValue::whole_space(), &[0.3, 0.7]).unwrap(), NEG_INF);
        assert!(matches!(scalarize(&v, &[1.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn scalar_path_examples() {
        let map = SetMap::from_generator("quadratic_vector", json!({"targets": [0.0, 1.0]}), vec![vec![0.0]]).unwrap();
        let grid = uniform_grid(4);
        let p = scalar_path(&map, &[0.0], &[1.0], &[0.5, 0.5], &grid).unwrap();
        for (t, v) in grid.iter().zip(p.values()) {
            let expect = 0.5 * t * t + 0.5 * (t - 1.0) * (t - 1.0);
            assert!((v.to_f64() - expect).abs() < 1e-15);
        }

        let c = SetMap::from_generator("constant_cloud", json!({"points": [[0.0, 0.0]]}), vec![vec![0.0]]).unwrap();
        let p = scalar_path(&c, &[0.0], &[1.0], &[0.25, 0.75], &grid).unwrap();
        assert!(p.values().iter().all(|v| *v == ExtReal::ZERO));
    }

    #[test]
    fn tabulated_path_is_infinite_off_domain() {
        let dom: Vec<Vec<f64>> = [0.0, 0.5, 1.0].iter().map(|&x| vec![x]).collect();
        let vals = vec![cloud(&[[0.0, 0.0]]), SetValue::empty(), SetValue::empty()];
        let map = SetMap::tabulated(dom, vals).unwrap();
        let p = scalar_path(&map, &[0.0], &[1.0], &[1.0, 0.0], &[0.0, 0.5, 1.0]).unwrap();
        assert_eq!(p.values(), &[ExtReal::ZERO, POS_INF, POS_INF]);
    }

    #[test]
    fn piecewise_exact_slopes() {
        let pl = PiecewiseLinear::interpolate(&[(0.0, 0.5), (0.5, 0.0), (1.0, 1.0)]);
        assert_eq!(pl.lower_derivative(0.5, 1), ExtReal::finite(2.0));
        assert_eq!(pl.lower_derivative(0.5, -1), ExtReal::finite(1.0));
        assert_eq!(pl.lower_derivative(1.0, 1), POS_INF);
        let jump = PiecewiseLinear::new(vec![LinearPiece::new(0.0, 0.5, 0.0, 0.0), LinearPiece::new(0.5, 1.0, 1.0, 1.0)]);
        assert_eq!(jump.eval(0.5), ExtReal::ZERO);
        assert_eq!(jump.lower_derivative(0.5, 1), POS_INF);
        assert_eq!(jump.lower_derivative(0.5, -1), ExtReal::ZERO);
    }

    #[test]
    fn grid_must_span_unit_interval() {
        assert!(ScalarPath::from_samples(vec![0.0, 0.5], vec![ExtReal::ZERO; 2]).is_err());
        assert!(ScalarPath::from_samples(vec![0.0, 0.5, 0.5, 1.0], vec![ExtReal::ZERO; 4]).is_err());
    }

    fn jump_map() -> SetMap {
        let dom: Vec<Vec<f64>> = (0..=8).map(|k| vec![k as f64 / 8.0]).collect();
        SetMap::from_generator(
            "jump_map",
            json!({"at": 0.5, "left": [[0.0, 0.0]], "right": [[-1.0, -1.0]]}),
            dom,
        )
        .unwrap()
    }

    #[test]
    fn equicontinuity_examples() {
        let cone = Cone::orthant(2);
        let ws = cone.dual_base(1);
        let map = jump_map();
        let radii = default_probe_radii(&map, &[0.5]);
        let r = equicontinuity_check(&map, &[0.5], &ws, &radii, 0.5, 1e-9).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        let wit = r.witness.unwrap();
        assert_eq!(wit.x, vec![0.625]);
        assert_eq!(wit.gap, 1.0);
        let r = equicontinuity_check(&map, &[0.5], &ws, &radii, 2.0, 1e-9).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);

        let c = SetMap::from_generator("constant_cloud", json!({"points": [[1.0, 2.0]]}), map.domain().to_vec()).unwrap();
        for eps in [0.0, 0.1, 5.0] {
            assert_eq!(equicontinuity_check(&c, &[0.5], &ws, &radii, eps, 1e-9).unwrap().verdict, Verdict::Holds);
        }
    }

    #[test]
    fn hausdorff_examples() {
        let map = jump_map();
        let radii = default_probe_radii(&map, &[0.5]);
        let r = hausdorff_check(&map, &[0.5], &[0.5, 1.0], &radii, 1e-9).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        let r = hausdorff_check(&map, &[0.5], &[2.0], &radii, 1e-9).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);

        let dom: Vec<Vec<f64>> = (0..=100).map(|k| vec![k as f64 / 100.0]).collect();
        let vals = dom.iter().map(|x| SetValue::singleton(vec![x[0], x[0]])).collect();
        let diag = SetMap::tabulated(dom, vals).unwrap();
        let radii = default_probe_radii(&diag, &[0.3]);
        assert_eq!(hausdorff_check(&diag, &[0.3], &[0.1], &radii, 1e-9).unwrap().verdict, Verdict::Holds);

        let single = SetMap::tabulated(vec![vec![0.0]], vec![SetValue::singleton(vec![0.0, 0.0])]).unwrap();
        let r = hausdorff_check(&single, &[0.0], &[0.1], &default_probe_radii(&single, &[0.0]), 1e-9).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert!(r.per_eps[0].vacuous);
    }

    #[test]
    fn radial_hausdorff_detects_jump() {
        let map = jump_map();
        assert_eq!(radial_hausdorff_check(&map, &[0.0], 0.25, 16, 1e-9).unwrap().verdict, Verdict::Fails);
        let q = SetMap::from_generator("quadratic_vector", json!({"targets": [0.0, 1.0]}), map.domain().to_vec()).unwrap();
        assert_eq!(radial_hausdorff_check(&q, &[0.5], 0.25, 16, 1e-9).unwrap().verdict, Verdict::Holds);
    }

    #[test]
    fn base_point_must_be_in_domain() {
        let map = SetMap::tabulated(vec![vec![0.0]], vec![SetValue::empty()]).unwrap();
        let ws = Cone::orthant(2).dual_base(3);
        assert_eq!(
            equicontinuity_check(&map, &[0.0], &ws, &[1.0], 0.1, 1e-9),
            Err(Error::BasePointOutsideDomain(vec![0.0]))
        );
    }

    #[test]
    fn support_profile_examples() {
        let seg: Vec<Vec<f64>> = Cone::orthant(2).dual_base(5).weights;
        let p = support_profile(&cloud(&[[1.0, 0.0], [0.0, 1.0]]), &seg, 1e-9).unwrap();
        assert_eq!(p.concave, Verdict::Holds);
        for (w, v) in seg.iter().zip(&p.values) {
            assert_eq!(v.to_f64(), w[0].min(w[1]));
        }
        assert_eq!(support_profile(&cloud(&[[2.0, 3.0]]), &seg, 1e-9).unwrap().concave, Verdict::Holds);
        assert_eq!(support_profile(&SetValue::empty(), &seg, 1e-9), Err(Error::EmptySet));
    }

    proptest::proptest! {
        #[test]
        fn scalarize_is_positively_homogeneous(
            pts in proptest::collection::vec(proptest::collection::vec(-10.0f64..10.0, 2), 1..6),
            w in proptest::collection::vec(0.0f64..1.0, 2),
            lambda in 0.125f64..8.0,
        ) {
            let v = SetValue::new(pts);
            let a = scalarize(&v, &w).unwrap().to_f64();
            let ws: Vec<f64> = w.iter().map(|x| x * lambda).collect();
            let b = scalarize(&v, &ws).unwrap().to_f64();
            proptest::prop_assert!((b - lambda * a).abs() <= 1e-12 * (1.0 + b.abs()));
        }

        #[test]
        fn support_profiles_are_concave(
            pts in proptest::collection::vec(proptest::collection::vec(-10.0f64..10.0, 2), 1..8),
        ) {
            let seg = Cone::orthant(2).dual_base(17).weights;
            let p = support_profile(&SetValue::new(pts), &seg, 1e-9).unwrap();
            proptest::prop_assert_eq!(p.concave, Verdict::Holds);
        }
    }
}
