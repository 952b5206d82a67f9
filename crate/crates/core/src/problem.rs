//! Problem documents: cone, map, base points and settings.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::analysis::DiniConfig;
use crate::cone::{Cone, ConeSpec, DEFAULT_TAU_STRICT, DEFAULT_WSTAR_DENSITY};
use crate::error::{Error, Result};
use crate::report::{ser_f64, ser_vec, ser_vecs};
use crate::setmap::{SetMap, SetValue};

/// Tolerances and resolutions shared by every check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Settings {
    #[serde(serialize_with = "ser_f64")]
    pub tau_strict: f64,
    pub wstar_density: usize,
    pub dini: DiniConfig,
    /// Uniform steps on each ray `x0 + t(x − x0)` of a generator map.
    pub ray_steps: usize,
    #[serde(serialize_with = "ser_f64")]
    pub hausdorff_eps: f64,
    /// Restrict the (mvi) quantifier to `x ∈ dom F`.
    pub mvi_over_dom_only: bool,
    /// Combination weights `t` used by the C-convexity test.
    #[serde(serialize_with = "ser_vec")]
    pub convexity_t: Vec<f64>,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            tau_strict: DEFAULT_TAU_STRICT,
            wstar_density: DEFAULT_WSTAR_DENSITY,
            dini: DiniConfig::default(),
            ray_steps: 16,
            hausdorff_eps: 0.25,
            mvi_over_dom_only: false,
            convexity_t: vec![0.25, 0.5, 0.75],
        }
    }
}

impl Settings {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidSettings(m.to_owned()));
        if !(self.tau_strict > 0.0 && self.tau_strict.is_finite()) {
            return bad("tau_strict must be positive");
        }
        if self.wstar_density == 0 {
            return bad("wstar_density must be at least 1");
        }
        if self.ray_steps == 0 {
            return bad("ray_steps must be at least 1");
        }
        if !(self.hausdorff_eps > 0.0 && self.hausdorff_eps.is_finite()) {
            return bad("hausdorff_eps must be positive");
        }
        if self.convexity_t.iter().any(|t| !(0.0..=1.0).contains(t)) {
            return bad("convexity_t entries must lie in [0, 1]");
        }
        self.dini.validate()
    }
}

#[derive(Debug, Clone)]
pub struct Problem {
    pub cone: Cone,
    pub map: SetMap,
    pub base_points: Vec<Vec<f64>>,
    pub settings: Settings,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PointRepr {
    Scalar(f64),
    Vector(Vec<f64>),
}

impl PointRepr {
    fn into_vec(self) -> Vec<f64> {
        match self {
            PointRepr::Scalar(x) => vec![x],
            PointRepr::Vector(v) => v,
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum StepsRepr {
    Uniform(usize),
    PerAxis(Vec<usize>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GridDoc {
    from: PointRepr,
    to: PointRepr,
    steps: StepsRepr,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TabEntry {
    x: PointRepr,
    #[serde(default)]
    points: Vec<PointRepr>,
    #[serde(default)]
    whole_space: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorDoc {
    name: String,
    #[serde(default)]
    params: Value,
    domain_grid: Option<GridDoc>,
    domain: Option<Vec<PointRepr>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "lowercase")]
enum MapDoc {
    Tabulated(Vec<TabEntry>),
    Generator(GeneratorDoc),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemDoc {
    cone: ConeSpec,
    map: MapDoc,
    #[serde(default)]
    base_points: Vec<PointRepr>,
    #[serde(default)]
    settings: Settings,
}

/// The points of a rectangular grid, last axis varying fastest.
fn grid_points(grid: GridDoc) -> Result<Vec<Vec<f64>>> {
    let from = grid.from.into_vec();
    let to = grid.to.into_vec();
    if from.len() != to.len() {
        return Err(Error::DimensionMismatch {
            context: "domain_grid.to",
            expected: from.len(),
            found: to.len(),
        });
    }
    let steps = match grid.steps {
        StepsRepr::Uniform(s) => vec![s; from.len()],
        StepsRepr::PerAxis(s) => s,
    };
    if steps.len() != from.len() {
        return Err(Error::DimensionMismatch {
            context: "domain_grid.steps",
            expected: from.len(),
            found: steps.len(),
        });
    }
    let axes: Vec<Vec<f64>> = (0..from.len())
        .map(|i| {
            let n = steps[i];
            if n == 0 {
                return vec![from[i]];
            }
            (0..=n)
                .map(|k| {
                    if k == n {
                        to[i]
                    } else {
                        from[i] + (to[i] - from[i]) * (k as f64 / n as f64)
                    }
                })
                .collect()
        })
        .collect();
    let mut points = vec![Vec::new()];
    for axis in &axes {
        points = points
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |&c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    Ok(points)
}

/// Keeps the first occurrence of every point.
fn dedup_first<T>(items: Vec<(Vec<f64>, T)>) -> Vec<(Vec<f64>, T)> {
    let mut out: Vec<(Vec<f64>, T)> = Vec::with_capacity(items.len());
    for (x, v) in items {
        if !out.iter().any(|(y, _)| *y == x) {
            out.push((x, v));
        }
    }
    out
}

impl Problem {
    pub fn from_value(document: Value) -> Result<Problem> {
        let doc: ProblemDoc = serde_json::from_value(document).map_err(|e| Error::Schema(e.to_string()))?;
        let cone = Cone::from_spec(&doc.cone)?;
        let map = match doc.map {
            MapDoc::Tabulated(entries) => {
                let items = entries
                    .into_iter()
                    .map(|e| {
                        let value = if e.whole_space {
                            SetValue::whole_space()
                        } else {
                            SetValue::new(e.points.into_iter().map(PointRepr::into_vec).collect())
                        };
                        (e.x.into_vec(), value)
                    })
                    .collect();
                let (domain, values): (Vec<_>, Vec<_>) = dedup_first(items).into_iter().unzip();
                SetMap::tabulated(domain, values)?
            }
            MapDoc::Generator(g) => {
                let domain = match (g.domain, g.domain_grid) {
                    (Some(list), _) => list.into_iter().map(PointRepr::into_vec).collect(),
                    (None, Some(grid)) => grid_points(grid)?,
                    (None, None) => return Err(Error::Schema("generator needs `domain` or `domain_grid`".into())),
                };
                let domain = dedup_first(domain.into_iter().map(|x| (x, ())).collect())
                    .into_iter()
                    .map(|(x, _)| x)
                    .collect();
                SetMap::from_generator(&g.name, g.params, domain)?
            }
        };
        if map.output_dim() != 0 && map.output_dim() != cone.dim() {
            return Err(Error::DimensionMismatch {
                context: "map values vs cone",
                expected: cone.dim(),
                found: map.output_dim(),
            });
        }
        let base_points: Vec<Vec<f64>> = if doc.base_points.is_empty() {
            map.dom_indices().into_iter().map(|i| map.domain()[i].clone()).collect()
        } else {
            doc.base_points.into_iter().map(PointRepr::into_vec).collect()
        };
        for x in &base_points {
            if x.len() != map.input_dim() {
                return Err(Error::DimensionMismatch {
                    context: "base point",
                    expected: map.input_dim(),
                    found: x.len(),
                });
            }
        }
        doc.settings.validate()?;
        Ok(Problem {
            cone,
            map,
            base_points,
            settings: doc.settings,
        })
    }

    pub fn from_json_str(text: &str) -> Result<Problem> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        Problem::from_value(value)
    }

    pub fn from_file(path: impl AsRef<Path>) -> std::io::Result<Result<Problem>> {
        let text = std::fs::read_to_string(path)?;
        Ok(Problem::from_json_str(&text))
    }

    /// A description of the instance for reports.
    pub fn instance(&self) -> InstanceSummary {
        InstanceSummary::new(&self.cone, &self.map, &self.base_points)
    }
}

/// Parses a problem document.
pub fn load_problem(document: Value) -> Result<Problem> {
    Problem::from_value(document)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceSummary {
    pub cone: ConeSpec,
    pub map: MapSummary,
    #[serde(serialize_with = "ser_vecs")]
    pub domain: Vec<Vec<f64>>,
    #[serde(serialize_with = "ser_vecs")]
    pub base_points: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MapSummary {
    Tabulated { values: Vec<SetValue> },
    Generator { name: String, params: Value },
}

impl InstanceSummary {
    pub fn new(cone: &Cone, map: &SetMap, base_points: &[Vec<f64>]) -> InstanceSummary {
        let summary = match map.source() {
            crate::setmap::MapSource::Tabulated(values) => MapSummary::Tabulated { values: values.clone() },
            crate::setmap::MapSource::Generator { name, params, .. } => MapSummary::Generator {
                name: name.clone(),
                params: params.clone(),
            },
        };
        InstanceSummary {
            cone: cone.spec(),
            map: summary,
            domain: map.domain().to_vec(),
            base_points: base_points.to_vec(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    const ORTHANT: &str = r#""cone": {"dual_generators": [[1, 0], [0, 1]], "interior_point": [1, 1]}"#;

    #[test]
    fn minimal_tabulated_document() {
        let text = format!(r#"{{{ORTHANT}, "map": {{"tabulated": [{{"x": [0], "points": [[1, 2]]}}]}}}}"#);
        let p = Problem::from_json_str(&text).unwrap();
        assert_eq!(p.map.domain().len(), 1);
        assert_eq!(p.settings, Settings::default());
        assert_eq!(p.base_points, vec![vec![0.0]]);
    }

    #[test]
    fn missing_cone_is_schema_error() {
        let doc = json!({"map": {"tabulated": [{"x": [0], "points": [[1, 2]]}]}});
        assert!(matches!(load_problem(doc), Err(Error::Schema(_))));
    }

    #[test]
    fn empty_points_leave_dom() {
        let text = format!(
            r#"{{{ORTHANT}, "map": {{"tabulated": [
                {{"x": [0], "points": [[1, 2]]}},
                {{"x": [1], "points": [], "whole_space": false}}]}}}}"#
        );
        let p = Problem::from_json_str(&text).unwrap();
        assert_eq!(p.map.domain().len(), 2);
        assert_eq!(p.map.dom_indices(), vec![0]);
    }

    #[test]
    fn duplicates_keep_first_occurrence() {
        let text = format!(
            r#"{{{ORTHANT}, "map": {{"tabulated": [
                {{"x": 0, "points": [[1, 2]]}},
                {{"x": 0, "points": [[5, 5]]}},
                {{"x": 1, "points": [[0, 0]]}}]}}}}"#
        );
        let p = Problem::from_json_str(&text).unwrap();
        assert_eq!(p.map.domain(), &[vec![0.0], vec![1.0]]);
        assert_eq!(p.map.evaluate(&[0.0]).unwrap(), SetValue::singleton(vec![1.0, 2.0]));
    }

    #[test]
    fn generator_grid_document() {
        let text = format!(
            r#"{{{ORTHANT}, "map": {{"generator": {{"name": "quadratic_vector", "params": {{"targets": [0, 1]}},
                "domain_grid": {{"from": [-1], "to": [2], "steps": 12}}}}}},
                "base_points": [0.5], "settings": {{"wstar_density": 5}}}}"#
        );
        let p = Problem::from_json_str(&text).unwrap();
        assert_eq!(p.map.domain().len(), 13);
        assert_eq!(p.map.domain()[12], vec![2.0]);
        assert_eq!(p.settings.wstar_density, 5);
        assert_eq!(p.base_points, vec![vec![0.5]]);
    }

    #[test]
    fn two_dimensional_grid() {
        let g = GridDoc {
            from: PointRepr::Vector(vec![0.0, 0.0]),
            to: PointRepr::Vector(vec![1.0, 2.0]),
            steps: StepsRepr::PerAxis(vec![1, 2]),
        };
        let pts = grid_points(g).unwrap();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[1], vec![0.0, 1.0]);
    }

    #[test]
    fn load_errors() {
        let unknown = format!(
            r#"{{{ORTHANT}, "map": {{"generator": {{"name": "nope", "domain": [0]}}}}}}"#
        );
        assert_eq!(Problem::from_json_str(&unknown).unwrap_err(), Error::UnknownGenerator("nope".into()));
        let empty = format!(r#"{{{ORTHANT}, "map": {{"tabulated": []}}}}"#);
        assert_eq!(Problem::from_json_str(&empty).unwrap_err(), Error::EmptyDomain);
        let mismatch = format!(r#"{{{ORTHANT}, "map": {{"tabulated": [{{"x": [0], "points": [[1, 2, 3]]}}]}}}}"#);
        assert!(matches!(Problem::from_json_str(&mismatch), Err(Error::DimensionMismatch { .. })));
        let bad_settings = format!(
            r#"{{{ORTHANT}, "map": {{"tabulated": [{{"x": [0], "points": [[1, 2]]}}]}}, "settings": {{"tau_strict": -1}}}}"#
        );
        assert!(matches!(Problem::from_json_str(&bad_settings), Err(Error::InvalidSettings(_))));
    }
}
