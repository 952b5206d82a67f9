//! Lower Dini derivatives along scalar paths, generalized-convexity
//! classification, C-convexity of maps and the Diewert mean-value witness.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::cone::{Cone, WStarSample};
use crate::error::{Error, Result};
use crate::extreal::{inf_residual, ExtReal, NEG_INF, POS_INF};
use crate::linalg::{combine, dot};
use crate::report::{ser_f64, ser_opt_f64, ser_opt_vec, ser_vec};
use crate::scalarize::{scalarize, PathEval, ScalarPath};
use crate::setmap::{SetMap, SetValue};
use crate::verdict::Verdict;

/// Step grid for the liminf of difference quotients.
///
/// Steps are `t_max · ratio^k` for `k = 0..=steps`. The estimate uses the
/// finest `window + 1` steps: Richardson-extrapolated quotients when they are
/// all finite, the plain minimum otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiniConfig {
    #[serde(serialize_with = "ser_f64")]
    pub t_max: f64,
    #[serde(serialize_with = "ser_f64")]
    pub ratio: f64,
    pub steps: u32,
    pub window: u32,
}

impl Default for DiniConfig {
    fn default() -> Self {
        DiniConfig {
            t_max: 0.1,
            ratio: 0.5,
            steps: 10,
            window: 3,
        }
    }
}

impl DiniConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidSettings(format!("dini: {m}")));
        if !(self.t_max > 0.0 && self.t_max <= 1.0) {
            return bad("t_max must lie in (0, 1]");
        }
        if !(self.ratio > 0.0 && self.ratio < 1.0) {
            return bad("ratio must lie in (0, 1)");
        }
        if self.window == 0 || self.window > self.steps {
            return bad("window must lie in 1..=steps");
        }
        if self.finest_step() < 1e-300 {
            return bad("finest step underflows");
        }
        Ok(())
    }

    pub fn step(&self, k: u32) -> f64 {
        self.t_max * self.ratio.powi(k as i32)
    }

    pub fn finest_step(&self) -> f64 {
        self.step(self.steps)
    }
}

/// `liminf_{s↓0} (φ(t + dir·s) ∸ φ(t)) / s`.
///
/// Exact on piecewise-linear paths; on sampled paths the adjacent grid point
/// on that side is the only probe. Points outside `[0, 1]` have value `+∞`.
pub fn dini_lower(path: &ScalarPath, t: f64, direction: i8, cfg: &DiniConfig) -> Result<ExtReal> {
    let dir = direction.signum();
    if !(0.0..=1.0).contains(&t) || dir == 0 {
        return Err(Error::StepOutsideDomain { t, direction });
    }
    match path.eval_mode() {
        PathEval::Exact(pl) => Ok(pl.lower_derivative(t, dir)),
        PathEval::Sampled => {
            let i = path.grid_index(t).ok_or(Error::StepOutsideDomain { t, direction })?;
            let here = path.values()[i];
            let j = if dir > 0 { i + 1 } else { i.wrapping_sub(1) };
            Ok(match path.t_grid().get(j) {
                Some(&tj) => quotient(path.values()[j], here, (tj - t).abs()),
                None => quotient(POS_INF, here, 1.0),
            })
        }
        PathEval::Function(f) => {
            let here = f(t);
            let d = f64::from(dir);
            let first = cfg.steps - cfg.window;
            let q: Vec<ExtReal> = (first..=cfg.steps)
                .map(|k| {
                    let s = cfg.step(k);
                    quotient(f(t + d * s), here, s)
                })
                .collect();
            if q.iter().all(|v| v.is_finite()) {
                let rho = cfg.ratio;
                let est = q
                    .windows(2)
                    .map(|p| (p[1].to_f64() - rho * p[0].to_f64()) / (1.0 - rho))
                    .fold(f64::INFINITY, f64::min);
                Ok(ExtReal::finite(est))
            } else {
                Ok(q.into_iter().min().expect("window is nonempty"))
            }
        }
    }
}

fn quotient(there: ExtReal, here: ExtReal, s: f64) -> ExtReal {
    inf_residual(there, here).scale(1.0 / s)
}

/// `a > b` by more than `tau` (exact comparison when either is infinite).
fn clearly_greater(a: ExtReal, b: ExtReal, tau: f64) -> bool {
    match (a.as_finite(), b.as_finite()) {
        (Some(x), Some(y)) => x - y > tau,
        _ => a > b,
    }
}

/// Sign class of a derivative estimate against the strictness band.
fn sign_class(d: ExtReal, tau: f64) -> i8 {
    match d {
        NEG_INF => -1,
        POS_INF => 1,
        ExtReal::Finite(v) if v < -tau => -1,
        ExtReal::Finite(v) if v > tau => 1,
        _ => 0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathPointWitness {
    #[serde(serialize_with = "ser_f64")]
    pub t: f64,
    pub direction: i8,
    pub derivative: ExtReal,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityReport {
    pub semistrictly_quasiconvex: Verdict,
    pub pseudoconvex: Verdict,
    pub pseudoconcave: Verdict,
    #[serde(serialize_with = "ser_opt_f64")]
    pub s0: Option<f64>,
    #[serde(serialize_with = "ser_opt_f64")]
    pub t0: Option<f64>,
    pub grid_points: usize,
    /// Ordered grid pairs `(a, b)` whose premise was strict.
    pub pairs: usize,
    /// `t` values of a triple violating semistrict quasiconvexity.
    #[serde(serialize_with = "ser_opt_vec")]
    pub ssqc_witness: Option<Vec<f64>>,
    pub pseudoconvex_witness: Option<PathPointWitness>,
    pub pseudoconcave_witness: Option<PathPointWitness>,
}

/// Order-preserving key for extended reals.
fn key(v: ExtReal) -> i64 {
    let bits = v.to_f64().to_bits() as i64;
    bits ^ ((((bits >> 63) as u64) >> 1) as i64)
}

/// Looks for `i < j < k` with `φ_i, φ_k ≤ bound(φ_j)` and `|φ_i − φ_k| > tau`.
fn find_triple(values: &[ExtReal], tau: f64, bound: impl Fn(ExtReal) -> ExtReal) -> Option<(usize, usize, usize)> {
    let n = values.len();
    let mut left: BTreeSet<(i64, usize)> = BTreeSet::new();
    let mut right: BTreeSet<(i64, usize)> = (1..n).map(|k| (key(values[k]), k)).collect();
    for j in 1..n.saturating_sub(1) {
        left.insert((key(values[j - 1]), j - 1));
        right.remove(&(key(values[j]), j));
        let cap = (key(bound(values[j])), usize::MAX);
        let (Some(&lmin), Some(&rmin)) = (left.first(), right.first()) else {
            continue;
        };
        if lmin > cap || rmin > cap {
            continue;
        }
        let lmax = *left.range(..=cap).next_back().expect("lmin qualifies");
        let rmax = *right.range(..=cap).next_back().expect("rmin qualifies");
        if clearly_greater(values[lmax.1], values[rmin.1], tau) {
            return Some((lmax.1, j, rmin.1));
        }
        if clearly_greater(values[rmax.1], values[lmin.1], tau) {
            return Some((lmin.1, j, rmax.1));
        }
    }
    None
}

/// Semistrict quasiconvexity on all grid triples, pseudoconvexity and
/// pseudoconcavity on all grid pairs, and the monotone-structure points
/// `s0 ≤ t0` (end of the strictly decreasing prefix, start of the strictly
/// increasing suffix).
pub fn classify_path(path: &ScalarPath, cfg: &DiniConfig, tau: f64) -> Result<ConvexityReport> {
    let n = path.len();
    if n < 3 {
        return Err(Error::GridTooCoarse(n));
    }
    let v = path.values();
    let t = path.t_grid();

    let (ssqc, ssqc_witness) = match find_triple(v, tau, |x| x) {
        Some((i, j, k)) => (Verdict::Fails, Some(vec![t[i], t[j], t[k]])),
        None => match find_triple(v, tau, |x| x.add(tau)) {
            Some((i, j, k)) => (Verdict::Undetermined, Some(vec![t[i], t[j], t[k]])),
            None => (Verdict::Holds, None),
        },
    };

    // Prefix/suffix extremes decide the premises of the pair conditions.
    let mut pre_min = vec![POS_INF; n];
    let mut pre_max = vec![NEG_INF; n];
    for i in 1..n {
        pre_min[i] = pre_min[i - 1].min(v[i - 1]);
        pre_max[i] = pre_max[i - 1].max(v[i - 1]);
    }
    let mut suf_min = vec![POS_INF; n];
    let mut suf_max = vec![NEG_INF; n];
    for i in (0..n - 1).rev() {
        suf_min[i] = suf_min[i + 1].min(v[i + 1]);
        suf_max[i] = suf_max[i + 1].max(v[i + 1]);
    }

    let mut pcx = Verdict::Holds;
    let mut pcv = Verdict::Holds;
    let mut pcx_w = None;
    let mut pcv_w = None;
    let mut pairs = 0;
    for j in 0..n {
        for (dir, lo, hi) in [(-1i8, pre_min[j], pre_max[j]), (1i8, suf_min[j], suf_max[j])] {
            let needs_descent = clearly_greater(v[j], lo, tau);
            let needs_ascent = clearly_greater(hi, v[j], tau);
            if !needs_descent && !needs_ascent {
                continue;
            }
            pairs += 1;
            let d = dini_lower(path, t[j], dir, cfg)?;
            let class = sign_class(d, tau);
            let wit = || PathPointWitness {
                t: t[j],
                direction: dir,
                derivative: d,
            };
            if needs_descent && class != -1 {
                let local = if class == 1 { Verdict::Fails } else { Verdict::Undetermined };
                if pcx_w.is_none() || (local == Verdict::Fails && pcx != Verdict::Fails) {
                    pcx_w = Some(wit());
                }
                pcx = pcx.and(local);
            }
            if needs_ascent && class != 1 {
                let local = if class == -1 { Verdict::Fails } else { Verdict::Undetermined };
                if pcv_w.is_none() || (local == Verdict::Fails && pcv != Verdict::Fails) {
                    pcv_w = Some(wit());
                }
                pcv = pcv.and(local);
            }
        }
    }

    let (s0, t0) = if ssqc == Verdict::Fails {
        (None, None)
    } else {
        let p = (1..n).take_while(|&i| v[i] < v[i - 1]).last().unwrap_or(0);
        let q = (0..n - 1).rev().take_while(|&i| v[i] < v[i + 1]).last().unwrap_or(n - 1);
        (Some(t[p]), Some(t[q]))
    };

    Ok(ConvexityReport {
        semistrictly_quasiconvex: ssqc,
        pseudoconvex: pcx,
        pseudoconcave: pcv,
        s0,
        t0,
        grid_points: n,
        pairs,
        ssqc_witness,
        pseudoconvex_witness: pcx_w,
        pseudoconcave_witness: pcv_w,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Forward,
    Backward,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiewertWitness {
    pub side: Side,
    #[serde(serialize_with = "ser_f64")]
    pub t: f64,
    pub derivative: ExtReal,
    pub difference: ExtReal,
    /// `derivative ∸ difference`.
    pub residual: ExtReal,
}

/// First grid point satisfying the mean-value inequality.
///
/// Forward: `t ∈ [0, 1)` with `φ(1) ∸ φ(0) ≤ φ^↓(t; +1) + tau`.
/// Backward: `s ∈ (0, 1]` with `φ(0) ∸ φ(1) ≤ φ^↓(s; −1) + tau`.
pub fn diewert_witness(path: &ScalarPath, side: Side, cfg: &DiniConfig, tau: f64) -> Result<DiewertWitness> {
    let v = path.values();
    let (first, last) = (v[0], v[v.len() - 1]);
    let (difference, dir) = match side {
        Side::Forward => (inf_residual(last, first), 1i8),
        Side::Backward => (inf_residual(first, last), -1i8),
    };
    let grid = path.t_grid();
    let candidates: Box<dyn Iterator<Item = &f64>> = match side {
        Side::Forward => Box::new(grid[..grid.len() - 1].iter()),
        Side::Backward => Box::new(grid[1..].iter()),
    };
    for &t in candidates {
        let d = dini_lower(path, t, dir, cfg)?;
        let bound = match d {
            ExtReal::Finite(x) => ExtReal::finite(x + tau),
            inf => inf,
        };
        if difference <= bound {
            return Ok(DiewertWitness {
                side,
                t,
                derivative: d,
                difference,
                residual: inf_residual(d, difference),
            });
        }
    }
    Err(Error::NoWitnessFound)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CConvexityWitness {
    #[serde(serialize_with = "ser_vec")]
    pub x1: Vec<f64>,
    #[serde(serialize_with = "ser_vec")]
    pub x2: Vec<f64>,
    #[serde(serialize_with = "ser_f64")]
    pub t: f64,
    /// Point of `tF(x1) + (1−t)F(x2)` outside `F(x_t) + C`.
    #[serde(serialize_with = "ser_opt_vec")]
    pub point: Option<Vec<f64>>,
    #[serde(serialize_with = "ser_f64")]
    pub margin: f64,
    #[serde(serialize_with = "ser_opt_vec")]
    pub w: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CConvexityReport {
    pub verdict: Verdict,
    pub minkowski: Verdict,
    pub scalarized: Verdict,
    pub combinations: usize,
    pub witness: Option<CConvexityWitness>,
    pub scalar_witness: Option<CConvexityWitness>,
}

/// `min_j ĝ_j·e`: `margin ≥ −tau` moves a point into `C` by `(tau/κ)·e`.
fn interior_depth(cone: &Cone) -> f64 {
    cone.normals()
        .iter()
        .map(|g| dot(g, cone.interior_point()))
        .fold(f64::INFINITY, f64::min)
}

fn minkowski_margin(cone: &Cone, a: &SetValue, b: &SetValue, mid: &SetValue, t: f64) -> Result<(f64, Option<Vec<f64>>)> {
    if a.is_empty() || b.is_empty() || mid.whole_space {
        return Ok((f64::INFINITY, None));
    }
    if a.whole_space || b.whole_space || mid.is_empty() {
        return Ok((f64::NEG_INFINITY, None));
    }
    let mut worst = (f64::INFINITY, None);
    for p in &a.points {
        for q in &b.points {
            let y = combine(p, q, t);
            let m = cone.extended_member(&mid.points, &y, 0.0)?.margin;
            if m < worst.0 {
                worst = (m, Some(y));
            }
        }
    }
    Ok(worst)
}

/// Convexity gap `φ(x_t) − (tφ(x1) + (1−t)φ(x2))`; `-inf` when trivially convex.
fn scalar_gap(a: ExtReal, b: ExtReal, mid: ExtReal, t: f64) -> f64 {
    if a == POS_INF || b == POS_INF || mid == NEG_INF {
        return f64::NEG_INFINITY;
    }
    if a == NEG_INF || b == NEG_INF || mid == POS_INF {
        return f64::INFINITY;
    }
    mid.to_f64() - (t * a.to_f64() + (1.0 - t) * b.to_f64())
}

/// `tF(x1) + (1−t)F(x2) ⊆ F(tx1 + (1−t)x2) + C` on the sampled pairs, with
/// convexity of every sampled scalarization as a cross-check.
///
/// The verdict is the Minkowski test. The scalar test is implied by it, so a
/// Minkowski HOLDS with a scalar FAILS is reported as an inconsistency.
pub fn c_convexity_check(
    map: &SetMap,
    cone: &Cone,
    wstar: &WStarSample,
    pairs: &[(Vec<f64>, Vec<f64>)],
    t_samples: &[f64],
    tau: f64,
) -> Result<CConvexityReport> {
    let scalar_tau = tau * (1.0 / interior_depth(cone)).max(1.0);
    let mut minkowski = Verdict::Holds;
    let mut scalarized = Verdict::Holds;
    let mut witness = None;
    let mut scalar_witness = None;
    let mut combinations = 0;
    for (x1, x2) in pairs {
        let a = map.evaluate(x1)?;
        let b = map.evaluate(x2)?;
        let phi_a: Vec<ExtReal> = wstar.iter().map(|w| scalarize(&a, w)).collect::<Result<_>>()?;
        let phi_b: Vec<ExtReal> = wstar.iter().map(|w| scalarize(&b, w)).collect::<Result<_>>()?;
        for &t in t_samples {
            combinations += 1;
            let xt = combine(x1, x2, t);
            let mid = map.evaluate(&xt)?;
            let (m, y) = minkowski_margin(cone, &a, &b, &mid, t)?;
            let local = if m >= -tau { Verdict::Holds } else { Verdict::Fails };
            if local == Verdict::Fails && witness.is_none() {
                witness = Some(CConvexityWitness {
                    x1: x1.clone(),
                    x2: x2.clone(),
                    t,
                    point: y,
                    margin: m,
                    w: None,
                });
            }
            minkowski = minkowski.and(local);
            for (j, w) in wstar.iter().enumerate() {
                let gap = scalar_gap(phi_a[j], phi_b[j], scalarize(&mid, w)?, t);
                if gap > scalar_tau {
                    scalarized = Verdict::Fails;
                    if scalar_witness.is_none() {
                        scalar_witness = Some(CConvexityWitness {
                            x1: x1.clone(),
                            x2: x2.clone(),
                            t,
                            point: None,
                            margin: -gap,
                            w: Some(w.clone()),
                        });
                    }
                }
            }
        }
    }
    if minkowski.holds() && scalarized.fails() {
        let w = scalar_witness.expect("scalar failure records a witness");
        return Err(Error::Inconsistent(format!(
            "Minkowski test holds but scalarization with w = {:?} is not convex at x1 = {:?}, x2 = {:?}, t = {}",
            w.w, w.x1, w.x2, w.t
        )));
    }
    Ok(CConvexityReport {
        verdict: minkowski,
        minkowski,
        scalarized,
        combinations,
        witness,
        scalar_witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalarize::{uniform_grid, LinearPiece, PiecewiseLinear};
    use serde_json::json;

    fn fn_path<F: Fn(f64) -> f64 + Send + Sync + 'static>(n: usize, f: F) -> ScalarPath {
        ScalarPath::from_fn(uniform_grid(n), move |t| ExtReal::finite(f(t))).unwrap()
    }

    fn pl(nodes: &[(f64, f64)]) -> ScalarPath {
        ScalarPath::from_piecewise(PiecewiseLinear::interpolate(nodes), uniform_grid(8)).unwrap()
    }

    #[test]
    fn default_config_is_valid() {
        DiniConfig::default().validate().unwrap();
        let bad = DiniConfig {
            ratio: 1.5,
            ..DiniConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn dini_examples() {
        let cfg = DiniConfig::default();
        let sq = fn_path(10, |t| t * t);
        assert!(dini_lower(&sq, 0.0, 1, &cfg).unwrap().to_f64().abs() <= 1e-5);

        let abs = ScalarPath::from_piecewise(
            PiecewiseLinear::interpolate(&[(0.0, 0.5), (0.5, 0.0), (1.0, 0.5)]),
            uniform_grid(4),
        )
        .unwrap();
        assert_eq!(dini_lower(&abs, 0.5, 1, &cfg).unwrap(), ExtReal::finite(1.0));

        let vee = pl(&[(0.0, 0.5), (0.5, 0.0), (1.0, 1.0)]);
        assert_eq!(dini_lower(&vee, 0.5, -1, &cfg).unwrap(), ExtReal::finite(1.0));
    }

    #[test]
    fn dini_infinity_conventions() {
        let cfg = DiniConfig::default();
        let p = ScalarPath::from_samples(vec![0.0, 0.5, 1.0], vec![ExtReal::ZERO, POS_INF, POS_INF]).unwrap();
        assert_eq!(dini_lower(&p, 0.0, 1, &cfg).unwrap(), POS_INF);
        assert_eq!(dini_lower(&p, 0.5, 1, &cfg).unwrap(), NEG_INF);
        assert_eq!(dini_lower(&p, 0.0, -1, &cfg).unwrap(), POS_INF);
        assert!(matches!(dini_lower(&p, 0.25, 1, &cfg), Err(Error::StepOutsideDomain { .. })));
        let f = fn_path(4, |t| t);
        assert_eq!(dini_lower(&f, 1.0, 1, &cfg).unwrap(), POS_INF);
    }

    #[test]
    fn dini_matches_exact_on_piecewise_linear() {
        let cfg = DiniConfig::default();
        let nodes = [(0.0, 1.0), (0.25, -0.5), (0.5, 0.75), (0.75, 0.75), (1.0, 2.0)];
        let exact = pl(&nodes);
        let pw = PiecewiseLinear::interpolate(&nodes);
        let numeric = ScalarPath::from_fn(uniform_grid(8), move |t| pw.eval(t)).unwrap();
        for &t in exact.t_grid() {
            for dir in [-1, 1] {
                let a = dini_lower(&exact, t, dir, &cfg).unwrap();
                let b = dini_lower(&numeric, t, dir, &cfg).unwrap();
                match (a.as_finite(), b.as_finite()) {
                    (Some(x), Some(y)) => assert!((x - y).abs() < 1e-9, "t={t} dir={dir}: {x} vs {y}"),
                    _ => assert_eq!(a, b),
                }
            }
        }
    }

    #[test]
    fn dini_positive_homogeneity() {
        // ψ(t) = φ(λt) has one-sided derivative λ·φ'(λt).
        let cfg = DiniConfig::default();
        let pw = PiecewiseLinear::interpolate(&[(0.0, 0.0), (0.25, 1.0), (1.0, -0.5)]);
        let lambda = 0.5;
        let scaled = PiecewiseLinear::new(
            pw.pieces
                .iter()
                .map(|p| LinearPiece::new(p.t0 / lambda, (p.t1 / lambda).min(1.0), p.v0, p.value((p.t1).min(lambda))))
                .filter(|p| p.t0 <= 1.0)
                .collect(),
        );
        let psi = ScalarPath::from_piecewise(scaled, uniform_grid(8)).unwrap();
        let phi = ScalarPath::from_piecewise(pw, uniform_grid(8)).unwrap();
        for &t in &[0.0, 0.25, 0.375] {
            let a = dini_lower(&psi, t, 1, &cfg).unwrap().to_f64();
            let b = dini_lower(&phi, lambda * t, 1, &cfg).unwrap().to_f64();
            assert_eq!(a, lambda * b);
        }
    }

    #[test]
    fn classify_examples() {
        let cfg = DiniConfig::default();
        let tub = fn_path(100, |t| (0.3 - t).max(0.0).max(t - 0.7));
        let r = classify_path(&tub, &cfg, 1e-9).unwrap();
        assert_eq!(r.semistrictly_quasiconvex, Verdict::Holds);
        assert!((r.s0.unwrap() - 0.3).abs() <= 0.01 + 1e-12);
        assert!((r.t0.unwrap() - 0.7).abs() <= 0.01 + 1e-12);

        let sq = fn_path(100, |t| t * t);
        let r = classify_path(&sq, &cfg, 1e-9).unwrap();
        assert_eq!(r.semistrictly_quasiconvex, Verdict::Holds);
        assert_eq!(r.pseudoconvex, Verdict::Holds);
        assert_eq!((r.s0, r.t0), (Some(0.0), Some(0.0)));

        let peak = pl(&[(0.0, -0.5), (0.5, 0.0), (1.0, -0.5)]);
        let r = classify_path(&peak, &cfg, 1e-9).unwrap();
        assert_eq!(r.semistrictly_quasiconvex, Verdict::Fails);
        let w = r.ssqc_witness.unwrap();
        let f = |t: f64| peak.value_at(t).unwrap();
        assert!(w[0] < w[1] && w[1] < w[2]);
        assert!(f(w[1]) >= f(w[0]).max(f(w[2])) && f(w[0]) != f(w[2]));
        assert_eq!(r.pseudoconvex, Verdict::Fails);

        assert_eq!(
            classify_path(&ScalarPath::from_samples(vec![0.0, 1.0], vec![ExtReal::ZERO; 2]).unwrap(), &cfg, 1e-9)
                .unwrap_err(),
            Error::GridTooCoarse(2)
        );
    }

    #[test]
    fn monotone_paths_are_pseudoconvex_and_pseudoconcave() {
        let cfg = DiniConfig::default();
        let r = classify_path(&fn_path(50, |t| 3.0 * t - 1.0), &cfg, 1e-9).unwrap();
        assert_eq!(
            (r.semistrictly_quasiconvex, r.pseudoconvex, r.pseudoconcave),
            (Verdict::Holds, Verdict::Holds, Verdict::Holds)
        );
        assert_eq!((r.s0, r.t0), (Some(0.0), Some(0.0)));
        let r = classify_path(&fn_path(50, |t| -t), &cfg, 1e-9).unwrap();
        assert_eq!((r.s0, r.t0), (Some(1.0), Some(1.0)));
    }

    #[test]
    fn increasing_then_flat_is_not_semistrict() {
        let r = classify_path(&pl(&[(0.0, 0.0), (0.5, 1.0), (1.0, 1.0)]), &DiniConfig::default(), 1e-9).unwrap();
        assert_eq!(r.semistrictly_quasiconvex, Verdict::Fails);
    }

    #[test]
    fn diewert_examples() {
        let cfg = DiniConfig::default();
        let id = pl(&[(0.0, 0.0), (1.0, 1.0)]);
        let w = diewert_witness(&id, Side::Forward, &cfg, 1e-9).unwrap();
        assert_eq!((w.t, w.residual), (0.0, ExtReal::ZERO));

        let vee = pl(&[(0.0, 0.5), (0.5, 0.0), (1.0, 1.0)]);
        let w = diewert_witness(&vee, Side::Forward, &cfg, 1e-9).unwrap();
        assert_eq!(w.difference, ExtReal::finite(0.5));
        assert_eq!(w.t, 0.5);
        assert_eq!(w.derivative, ExtReal::finite(2.0));

        let trunc = ScalarPath::from_piecewise(
            PiecewiseLinear::new(vec![LinearPiece::new(0.25, 1.0, 0.0, 1.0)]),
            uniform_grid(4),
        )
        .unwrap();
        let w = diewert_witness(&trunc, Side::Forward, &cfg, 1e-9).unwrap();
        assert_eq!((w.t, w.difference), (0.0, NEG_INF));
        let w = diewert_witness(&trunc, Side::Backward, &cfg, 1e-9).unwrap();
        assert_eq!(w.difference, POS_INF);
        assert_eq!(w.t, 0.25);
    }

    fn quad_map() -> SetMap {
        let dom: Vec<Vec<f64>> = (-4..=4).map(|k| vec![k as f64 / 4.0]).collect();
        SetMap::from_generator("quadratic_vector", json!({"targets": [0.0, 1.0]}), dom).unwrap()
    }

    fn symmetric_pairs(map: &SetMap) -> Vec<(Vec<f64>, Vec<f64>)> {
        let d = map.domain();
        vec![(d[0].clone(), d[8].clone()), (d[2].clone(), d[6].clone()), (d[1].clone(), d[7].clone())]
    }

    #[test]
    fn c_convexity_examples() {
        let cone = Cone::orthant(2);
        let ws = cone.dual_base(9);
        let q = quad_map();
        let ts = [0.25, 0.5, 0.75];
        let pairs = symmetric_pairs(&q);
        assert_eq!(c_convexity_check(&q, &cone, &ws, &pairs, &ts, 1e-9).unwrap().verdict, Verdict::Holds);

        let c = SetMap::from_generator("constant_cloud", json!({"points": [[0.0, 1.0], [2.0, 3.0]]}), q.domain().to_vec())
            .unwrap();
        assert_eq!(c_convexity_check(&c, &cone, &ws, &pairs, &ts, 1e-9).unwrap().verdict, Verdict::Holds);

        let neg = SetMap::from_generator(
            "segment_shift",
            json!({"points": [[0.0, 0.0]], "linear": [[0.0], [0.0]], "quadratic": [[-1.0], [0.0]]}),
            q.domain().to_vec(),
        )
        .unwrap();
        let r = c_convexity_check(&neg, &cone, &ws, &pairs, &[0.5], 1e-9).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        assert_eq!(r.scalarized, Verdict::Fails);
        let w = r.witness.unwrap();
        assert_eq!((w.x1.clone(), w.x2.clone(), w.margin), (vec![-1.0], vec![1.0], -1.0));
        let sw = r.scalar_witness.unwrap().w.unwrap();
        assert!(sw[0] > 0.0);
    }
}
