//! Set-valued maps on finite sample domains.
//!
//! Values are finite point clouds (compact by construction). A value may also
//! carry the `whole_space` flag, which stands for `F(x) + C = Y`; no finite
//! cloud can express that case.

use serde::Serialize;
use serde_json::Value;

use crate::cone::{Cone, Membership, Position};
use crate::error::{Error, Result};
use crate::linalg::{approx_eq_point, dist, lerp, sub};
use crate::report::{ser_vec, ser_vecs};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SetValue {
    #[serde(serialize_with = "ser_vecs")]
    pub points: Vec<Vec<f64>>,
    pub whole_space: bool,
}

impl SetValue {
    pub fn new(points: Vec<Vec<f64>>) -> SetValue {
        SetValue {
            points,
            whole_space: false,
        }
    }

    pub fn empty() -> SetValue {
        SetValue::new(Vec::new())
    }

    pub fn whole_space() -> SetValue {
        SetValue {
            points: Vec::new(),
            whole_space: true,
        }
    }

    pub fn singleton(p: Vec<f64>) -> SetValue {
        SetValue::new(vec![p])
    }

    /// `F(x) ≠ ∅`.
    pub fn is_nonempty(&self) -> bool {
        self.whole_space || !self.points.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        !self.is_nonempty()
    }

    /// A nonempty finite cloud (not the whole-space flag).
    pub fn is_compact_cloud(&self) -> bool {
        !self.whole_space && !self.points.is_empty()
    }

    pub fn singleton_point(&self) -> Option<&[f64]> {
        match (&self.points[..], self.whole_space) {
            ([p], false) => Some(p),
            _ => None,
        }
    }

    /// Euclidean distance from `y` to the cloud; `+inf` when empty.
    pub fn distance_to(&self, y: &[f64]) -> f64 {
        if self.whole_space {
            return 0.0;
        }
        self.points.iter().map(|p| dist(p, y)).fold(f64::INFINITY, f64::min)
    }

    /// Excess `sup_{y ∈ other} d(y, self)`: the smallest ε with `other ⊆ self + εB`.
    pub fn excess_of(&self, other: &SetValue) -> f64 {
        if self.whole_space {
            return 0.0;
        }
        if other.whole_space {
            return f64::INFINITY;
        }
        other
            .points
            .iter()
            .map(|y| self.distance_to(y))
            .fold(0.0, f64::max)
    }
}

/// Named instance generators.
#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    /// `x ↦ {(‖x − a_1‖², …, ‖x − a_m‖²)}`.
    QuadraticVector { targets: Vec<Vec<f64>> },
    /// `x ↦ P + s(x)` with `s_l(x) = offset_l + Σ_i linear_li x_i + quadratic_li x_i²`.
    SegmentShift {
        points: Vec<Vec<f64>>,
        linear: Vec<Vec<f64>>,
        quadratic: Vec<Vec<f64>>,
        offset: Vec<f64>,
    },
    ConstantCloud { points: Vec<Vec<f64>> },
    /// Constant value `{(s, 1/s)}` for `s` on a log grid over `[1/T, T]`.
    HyperbolaTruncation { t: f64, samples: usize },
    /// `left` for `x[axis] ≤ at`, `right` otherwise.
    JumpMap {
        at: f64,
        axis: usize,
        left: Vec<Vec<f64>>,
        right: Vec<Vec<f64>>,
    },
}

pub const GENERATOR_NAMES: [&str; 5] = [
    "quadratic_vector",
    "segment_shift",
    "constant_cloud",
    "hyperbola_truncation",
    "jump_map",
];

fn param<'a>(params: &'a Value, key: &str) -> Option<&'a Value> {
    params.get(key).filter(|v| !v.is_null())
}

fn as_f64(v: &Value, what: &str) -> Result<f64> {
    v.as_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| Error::BadParameters(format!("`{what}` must be a finite number")))
}

/// A number is read as a one-dimensional point.
fn as_point(v: &Value, what: &str) -> Result<Vec<f64>> {
    match v {
        Value::Number(_) => Ok(vec![as_f64(v, what)?]),
        Value::Array(items) => items.iter().map(|x| as_f64(x, what)).collect(),
        _ => Err(Error::BadParameters(format!("`{what}` must be a number or array"))),
    }
}

fn as_points(v: &Value, what: &str) -> Result<Vec<Vec<f64>>> {
    let items = v
        .as_array()
        .ok_or_else(|| Error::BadParameters(format!("`{what}` must be an array")))?;
    let pts: Vec<Vec<f64>> = items.iter().map(|p| as_point(p, what)).collect::<Result<_>>()?;
    check_cloud(&pts, what)?;
    Ok(pts)
}

fn check_cloud(pts: &[Vec<f64>], what: &str) -> Result<()> {
    if let Some(first) = pts.first() {
        if pts.iter().any(|p| p.len() != first.len()) {
            return Err(Error::BadParameters(format!("`{what}` mixes point dimensions")));
        }
    }
    Ok(())
}

fn required<'a>(params: &'a Value, key: &str) -> Result<&'a Value> {
    param(params, key).ok_or_else(|| Error::BadParameters(format!("missing `{key}`")))
}

/// Builds a generator from its catalog name and JSON parameters.
pub fn builtin_map(name: &str, params: &Value) -> Result<Generator> {
    let gen = match name {
        "quadratic_vector" => {
            let targets = required(params, "targets")?
                .as_array()
                .ok_or_else(|| Error::BadParameters("`targets` must be an array".into()))?
                .iter()
                .map(|t| as_point(t, "targets"))
                .collect::<Result<Vec<_>>>()?;
            if targets.is_empty() {
                return Err(Error::BadParameters("`targets` is empty".into()));
            }
            check_cloud(&targets, "targets")?;
            Generator::QuadraticVector { targets }
        }
        "segment_shift" => {
            let points = match (param(params, "points"), param(params, "segment")) {
                (Some(p), _) => as_points(p, "points")?,
                (None, Some(seg)) => {
                    let from = as_point(required(seg, "from")?, "segment.from")?;
                    let to = as_point(required(seg, "to")?, "segment.to")?;
                    let count = required(seg, "count")?
                        .as_u64()
                        .filter(|&c| c >= 1)
                        .ok_or_else(|| Error::BadParameters("`segment.count` must be ≥ 1".into()))?
                        as usize;
                    if from.len() != to.len() {
                        return Err(Error::BadParameters("segment endpoints differ in dimension".into()));
                    }
                    (0..count)
                        .map(|k| {
                            let t = if count == 1 { 0.0 } else { k as f64 / (count - 1) as f64 };
                            lerp(&from, &to, t)
                        })
                        .collect()
                }
                (None, None) => return Err(Error::BadParameters("missing `points` or `segment`".into())),
            };
            if points.is_empty() {
                return Err(Error::BadParameters("segment_shift needs at least one point".into()));
            }
            let m = points[0].len();
            let linear = as_points(required(params, "linear")?, "linear")?;
            let n = linear.first().map_or(0, Vec::len);
            let quadratic = match param(params, "quadratic") {
                Some(q) => as_points(q, "quadratic")?,
                None => vec![vec![0.0; n]; m],
            };
            let offset = match param(params, "offset") {
                Some(o) => as_point(o, "offset")?,
                None => vec![0.0; m],
            };
            if linear.len() != m || quadratic.len() != m || offset.len() != m {
                return Err(Error::BadParameters(format!(
                    "segment_shift coefficient rows must number {m} (the point dimension)"
                )));
            }
            if quadratic.iter().any(|r| r.len() != n) || n == 0 {
                return Err(Error::BadParameters("`linear` and `quadratic` rows must share a length ≥ 1".into()));
            }
            Generator::SegmentShift {
                points,
                linear,
                quadratic,
                offset,
            }
        }
        "constant_cloud" => Generator::ConstantCloud {
            points: as_points(required(params, "points")?, "points")?,
        },
        "hyperbola_truncation" => {
            let t = as_f64(required(params, "T")?, "T")?;
            if t <= 1.0 {
                return Err(Error::BadParameters("`T` must exceed 1".into()));
            }
            let samples = match param(params, "samples") {
                Some(s) => s
                    .as_u64()
                    .filter(|&s| s >= 2)
                    .ok_or_else(|| Error::BadParameters("`samples` must be an integer ≥ 2".into()))?
                    as usize,
                None => 5,
            };
            Generator::HyperbolaTruncation { t, samples }
        }
        "jump_map" => {
            let at = as_f64(required(params, "at")?, "at")?;
            let axis = match param(params, "axis") {
                Some(a) => a
                    .as_u64()
                    .ok_or_else(|| Error::BadParameters("`axis` must be a nonnegative integer".into()))?
                    as usize,
                None => 0,
            };
            let left = as_points(required(params, "left")?, "left")?;
            let right = as_points(required(params, "right")?, "right")?;
            if let (Some(l), Some(r)) = (left.first(), right.first()) {
                if l.len() != r.len() {
                    return Err(Error::BadParameters("`left` and `right` differ in dimension".into()));
                }
            }
            Generator::JumpMap { at, axis, left, right }
        }
        other => return Err(Error::UnknownGenerator(other.to_owned())),
    };
    Ok(gen)
}

impl Generator {
    /// Image dimension, when the parameters fix it.
    pub fn output_dim(&self) -> Option<usize> {
        match self {
            Generator::QuadraticVector { targets } => Some(targets.len()),
            Generator::SegmentShift { points, .. } | Generator::ConstantCloud { points } => {
                points.first().map(Vec::len)
            }
            Generator::HyperbolaTruncation { .. } => Some(2),
            Generator::JumpMap { left, right, .. } => left.first().or(right.first()).map(Vec::len),
        }
    }

    /// Input dimension, when the parameters fix it.
    pub fn input_dim(&self) -> Option<usize> {
        match self {
            Generator::QuadraticVector { targets } => Some(targets[0].len()),
            Generator::SegmentShift { linear, .. } => Some(linear[0].len()),
            _ => None,
        }
    }

    pub fn eval(&self, x: &[f64]) -> SetValue {
        match self {
            Generator::QuadraticVector { targets } => SetValue::singleton(
                targets
                    .iter()
                    .map(|a| a.iter().zip(x).map(|(ai, xi)| (xi - ai) * (xi - ai)).sum())
                    .collect(),
            ),
            Generator::SegmentShift {
                points,
                linear,
                quadratic,
                offset,
            } => {
                let shift: Vec<f64> = (0..offset.len())
                    .map(|l| {
                        offset[l]
                            + x.iter()
                                .enumerate()
                                .map(|(i, xi)| linear[l][i] * xi + quadratic[l][i] * xi * xi)
                                .sum::<f64>()
                    })
                    .collect();
                SetValue::new(
                    points
                        .iter()
                        .map(|p| p.iter().zip(&shift).map(|(a, b)| a + b).collect())
                        .collect(),
                )
            }
            Generator::ConstantCloud { points } => SetValue::new(points.clone()),
            Generator::HyperbolaTruncation { t, samples } => SetValue::new(hyperbola_points(*t, *samples)),
            Generator::JumpMap { at, axis, left, right } => {
                let coord = x.get(*axis).copied().unwrap_or(0.0);
                SetValue::new(if coord <= *at { left.clone() } else { right.clone() })
            }
        }
    }
}

/// `(s, 1/s)` for `s` log-spaced over `[1/T, T]`; the ends are exactly `1/T` and `T`.
pub fn hyperbola_points(t: f64, samples: usize) -> Vec<Vec<f64>> {
    let lo = 1.0 / t;
    (0..samples)
        .map(|k| {
            let s = if k == 0 {
                lo
            } else if k + 1 == samples {
                t
            } else {
                let u = k as f64 / (samples - 1) as f64;
                (lo.ln() + u * (t.ln() - lo.ln())).exp()
            };
            vec![s, 1.0 / s]
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum MapSource {
    Tabulated(Vec<SetValue>),
    Generator {
        name: String,
        params: Value,
        generator: Generator,
    },
}

/// A set-valued map known on a finite ordered list of sample points.
#[derive(Debug, Clone, PartialEq)]
pub struct SetMap {
    input_dim: usize,
    output_dim: usize,
    domain: Vec<Vec<f64>>,
    source: MapSource,
}

/// Distance below which a query point is identified with a tabulated sample.
const SAMPLE_MATCH_TOL: f64 = 1e-12;

impl SetMap {
    pub fn tabulated(domain: Vec<Vec<f64>>, values: Vec<SetValue>) -> Result<SetMap> {
        if domain.is_empty() {
            return Err(Error::EmptyDomain);
        }
        if domain.len() != values.len() {
            return Err(Error::DimensionMismatch {
                context: "tabulated values",
                expected: domain.len(),
                found: values.len(),
            });
        }
        let input_dim = domain[0].len();
        let output_dim = values
            .iter()
            .flat_map(|v| v.points.first())
            .map(Vec::len)
            .next()
            .unwrap_or(0);
        let map = SetMap {
            input_dim,
            output_dim,
            domain,
            source: MapSource::Tabulated(values),
        };
        map.validate()?;
        Ok(map)
    }

    pub fn from_generator(name: &str, params: Value, domain: Vec<Vec<f64>>) -> Result<SetMap> {
        let generator = builtin_map(name, &params)?;
        if domain.is_empty() {
            return Err(Error::EmptyDomain);
        }
        let input_dim = domain[0].len();
        if let Some(n) = generator.input_dim() {
            if n != input_dim {
                return Err(Error::DimensionMismatch {
                    context: "generator input",
                    expected: n,
                    found: input_dim,
                });
            }
        }
        let output_dim = generator.output_dim().unwrap_or(0);
        let map = SetMap {
            input_dim,
            output_dim,
            domain,
            source: MapSource::Generator {
                name: name.to_owned(),
                params,
                generator,
            },
        };
        map.validate()?;
        Ok(map)
    }

    fn validate(&self) -> Result<()> {
        for x in &self.domain {
            if x.len() != self.input_dim {
                return Err(Error::DimensionMismatch {
                    context: "domain sample",
                    expected: self.input_dim,
                    found: x.len(),
                });
            }
            if x.iter().any(|v| !v.is_finite()) {
                return Err(Error::Schema("domain samples must be finite".into()));
            }
        }
        if let MapSource::Tabulated(values) = &self.source {
            for v in values {
                for p in &v.points {
                    if p.len() != self.output_dim {
                        return Err(Error::DimensionMismatch {
                            context: "set value point",
                            expected: self.output_dim,
                            found: p.len(),
                        });
                    }
                    if p.iter().any(|c| !c.is_finite()) {
                        return Err(Error::Schema("set value points must be finite".into()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.output_dim
    }

    pub fn domain(&self) -> &[Vec<f64>] {
        &self.domain
    }

    pub fn source(&self) -> &MapSource {
        &self.source
    }

    pub fn is_generator(&self) -> bool {
        matches!(self.source, MapSource::Generator { .. })
    }

    pub fn generator_name(&self) -> Option<&str> {
        match &self.source {
            MapSource::Generator { name, .. } => Some(name),
            MapSource::Tabulated(_) => None,
        }
    }

    /// Index of the sample equal to `x`, if any.
    pub fn sample_index(&self, x: &[f64]) -> Option<usize> {
        self.domain
            .iter()
            .position(|s| s.as_slice() == x)
            .or_else(|| self.domain.iter().position(|s| approx_eq_point(s, x, SAMPLE_MATCH_TOL)))
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<SetValue> {
        if x.len() != self.input_dim {
            return Err(Error::DimensionMismatch {
                context: "evaluate",
                expected: self.input_dim,
                found: x.len(),
            });
        }
        match &self.source {
            MapSource::Tabulated(values) => self
                .sample_index(x)
                .map(|i| values[i].clone())
                .ok_or_else(|| Error::OutsideSampleDomain(x.to_vec())),
            MapSource::Generator { generator, .. } => Ok(generator.eval(x)),
        }
    }

    /// The value at sample `i`.
    pub fn value_at(&self, i: usize) -> SetValue {
        match &self.source {
            MapSource::Tabulated(values) => values[i].clone(),
            MapSource::Generator { generator, .. } => generator.eval(&self.domain[i]),
        }
    }

    /// `dom F` as sample indices.
    pub fn dom_indices(&self) -> Vec<usize> {
        (0..self.domain.len()).filter(|&i| self.value_at(i).is_nonempty()).collect()
    }

    pub fn in_dom(&self, x: &[f64]) -> Result<bool> {
        Ok(self.evaluate(x)?.is_nonempty())
    }

    /// Parameters `t ∈ [0, 1]` available on the segment from `x0` to `x`.
    ///
    /// Generator maps use the uniform grid `k / steps`. Tabulated maps use the
    /// samples lying on the segment.
    pub fn ray_grid(&self, x0: &[f64], x: &[f64], steps: usize) -> Vec<f64> {
        if self.is_generator() {
            let steps = steps.max(1);
            return (0..=steps).map(|k| k as f64 / steps as f64).collect();
        }
        let d = sub(x, x0);
        let dd: f64 = d.iter().map(|v| v * v).sum();
        if dd == 0.0 {
            return vec![0.0, 1.0];
        }
        let mut ts: Vec<f64> = self
            .domain
            .iter()
            .filter_map(|s| {
                let r = sub(s, x0);
                let t = r.iter().zip(&d).map(|(a, b)| a * b).sum::<f64>() / dd;
                if !(-SAMPLE_MATCH_TOL..=1.0 + SAMPLE_MATCH_TOL).contains(&t) {
                    return None;
                }
                let on_line = approx_eq_point(&lerp(x0, x, t), s, 1e-9 * (1.0 + dd.sqrt()));
                on_line.then_some(t.clamp(0.0, 1.0))
            })
            .collect();
        ts.sort_by(f64::total_cmp);
        ts.dedup_by(|a, b| (*a - *b).abs() <= SAMPLE_MATCH_TOL);
        if let Some(first) = ts.first_mut() {
            *first = 0.0;
        }
        if let Some(last) = ts.last_mut() {
            *last = 1.0;
        }
        ts
    }

    /// `F_{x0,x}` on the given parameters; the restriction is `∅` outside `[0, 1]`.
    pub fn ray_restriction(&self, x0: &[f64], x: &[f64], t_grid: &[f64]) -> Result<RayValues> {
        let values = t_grid
            .iter()
            .map(|&t| {
                if (0.0..=1.0).contains(&t) {
                    self.evaluate(&ray_point(x0, x, t))
                } else {
                    Ok(SetValue::empty())
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RayValues {
            x0: x0.to_vec(),
            x: x.to_vec(),
            t_grid: t_grid.to_vec(),
            values,
        })
    }

    pub fn cone_extension<'a>(&'a self, cone: &'a Cone) -> ConeExtension<'a> {
        ConeExtension { map: self, cone }
    }
}

/// `x0 + t (x − x0)` with the endpoints returned exactly.
pub fn ray_point(x0: &[f64], x: &[f64], t: f64) -> Vec<f64> {
    if t == 0.0 {
        x0.to_vec()
    } else if t == 1.0 {
        x.to_vec()
    } else {
        lerp(x0, x, t)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RayValues {
    #[serde(serialize_with = "ser_vec")]
    pub x0: Vec<f64>,
    #[serde(serialize_with = "ser_vec")]
    pub x: Vec<f64>,
    #[serde(serialize_with = "ser_vec")]
    pub t_grid: Vec<f64>,
    pub values: Vec<SetValue>,
}

/// Membership queries against `F^C(x) = F(x) + C` (empty where `F(x)` is).
#[derive(Debug, Clone, Copy)]
pub struct ConeExtension<'a> {
    map: &'a SetMap,
    cone: &'a Cone,
}

impl ConeExtension<'_> {
    pub fn query(&self, x: &[f64], y: &[f64], tau_strict: f64) -> Result<Membership> {
        let value = self.map.evaluate(x)?;
        member_of_extension(self.cone, &value, y, tau_strict)
    }
}

/// Membership of `y` in `value + C`, with the empty and whole-space cases.
pub fn member_of_extension(cone: &Cone, value: &SetValue, y: &[f64], tau_strict: f64) -> Result<Membership> {
    if value.whole_space {
        return Ok(Membership {
            position: Position::Interior,
            margin: f64::INFINITY,
            witness: None,
        });
    }
    if value.points.is_empty() {
        return Ok(Membership {
            position: Position::Outside,
            margin: f64::NEG_INFINITY,
            witness: None,
        });
    }
    cone.extended_member(&value.points, y, tau_strict)
}
