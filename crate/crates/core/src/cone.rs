//! Polyhedral ordering cones `C = {y : g_j·y ≥ 0}` given by dual generators.
//!
//! A point's margin against `C` is `min_j ĝ_j·y` with unit normals `ĝ_j`; when
//! positive it is the radius of the largest Euclidean ball around `y` inside
//! `C`. The margin against `A + C` for a finite `A` is the best margin over
//! the translates `a + C`, which is positive exactly on `A + Int C`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, norm};
use crate::report::{ser_vec, ser_vecs};

/// Default strictness tolerance separating INTERIOR from BOUNDARY.
pub const DEFAULT_TAU_STRICT: f64 = 1e-9;

/// Default number of W* points per one-dimensional base edge.
pub const DEFAULT_WSTAR_DENSITY: usize = 33;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Position {
    Interior,
    Boundary,
    Outside,
}

impl Position {
    pub fn classify(margin: f64, tau_strict: f64) -> Position {
        if margin > tau_strict {
            Position::Interior
        } else if margin >= -tau_strict {
            Position::Boundary
        } else {
            Position::Outside
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Membership {
    pub position: Position,
    pub margin: f64,
    /// Index of the point of `A` realizing the margin, for `A + C` queries.
    pub witness: Option<usize>,
}

/// The JSON form of a cone inside problem files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeSpec {
    pub dual_generators: Vec<Vec<f64>>,
    pub interior_point: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cone {
    generators: Vec<Vec<f64>>,
    interior: Vec<f64>,
    normals: Vec<Vec<f64>>,
}

impl Cone {
    pub fn new(dual_generators: Vec<Vec<f64>>, interior_point: Vec<f64>) -> Result<Cone> {
        let m = interior_point.len();
        if m == 0 || dual_generators.is_empty() {
            return Err(Error::DimensionMismatch {
                context: "cone",
                expected: 1,
                found: 0,
            });
        }
        let mut normals = Vec::with_capacity(dual_generators.len());
        for (index, g) in dual_generators.iter().enumerate() {
            if g.len() != m {
                return Err(Error::DimensionMismatch {
                    context: "cone dual generator",
                    expected: m,
                    found: g.len(),
                });
            }
            if g.iter().chain(&interior_point).any(|x| !x.is_finite()) {
                return Err(Error::Schema("cone data must be finite".into()));
            }
            let n = norm(g);
            if n == 0.0 {
                return Err(Error::ZeroGenerator { index });
            }
            let value = dot(g, &interior_point);
            if value <= 0.0 {
                return Err(Error::InteriorWitnessInvalid { index, value });
            }
            normals.push(g.iter().map(|x| x / n).collect());
        }
        Ok(Cone {
            generators: dual_generators,
            interior: interior_point,
            normals,
        })
    }

    pub fn from_spec(spec: &ConeSpec) -> Result<Cone> {
        Cone::new(spec.dual_generators.clone(), spec.interior_point.clone())
    }

    /// The nonnegative orthant of `R^m` with `e = (1, …, 1)`.
    pub fn orthant(m: usize) -> Cone {
        let gens = (0..m)
            .map(|i| (0..m).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Cone::new(gens, vec![1.0; m]).expect("orthant is a valid cone")
    }

    pub fn spec(&self) -> ConeSpec {
        ConeSpec {
            dual_generators: self.generators.clone(),
            interior_point: self.interior.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.interior.len()
    }

    pub fn dual_generators(&self) -> &[Vec<f64>] {
        &self.generators
    }

    pub fn interior_point(&self) -> &[f64] {
        &self.interior
    }

    pub fn normals(&self) -> &[Vec<f64>] {
        &self.normals
    }

    fn check_dim(&self, y: &[f64]) -> Result<()> {
        if y.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                context: "cone query",
                expected: self.dim(),
                found: y.len(),
            });
        }
        Ok(())
    }

    /// `min_j ĝ_j·y`, without dimension checks.
    pub fn margin_unchecked(&self, y: &[f64]) -> f64 {
        self.normals
            .iter()
            .map(|g| dot(g, y))
            .fold(f64::INFINITY, f64::min)
    }

    /// Margin of `y - a` without allocating the difference.
    fn shifted_margin(&self, y: &[f64], a: &[f64]) -> f64 {
        self.normals
            .iter()
            .map(|g| g.iter().zip(y.iter().zip(a)).map(|(gi, (yi, ai))| gi * (yi - ai)).sum::<f64>())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn membership(&self, y: &[f64], tau_strict: f64) -> Result<Membership> {
        self.check_dim(y)?;
        let margin = self.margin_unchecked(y);
        Ok(Membership {
            position: Position::classify(margin, tau_strict),
            margin,
            witness: None,
        })
    }

    /// Membership of `y` in `A + C`; `INTERIOR` certifies `y ∈ A + Int C`.
    pub fn extended_member(&self, points: &[Vec<f64>], y: &[f64], tau_strict: f64) -> Result<Membership> {
        self.check_dim(y)?;
        if points.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut best = f64::NEG_INFINITY;
        let mut witness = 0;
        for (i, a) in points.iter().enumerate() {
            self.check_dim(a)?;
            let m = self.shifted_margin(y, a);
            if m > best {
                best = m;
                witness = i;
            }
        }
        Ok(Membership {
            position: Position::classify(best, tau_strict),
            margin: best,
            witness: Some(witness),
        })
    }

    /// A finite sample of the base `W* = {w ∈ C+ : w·e = 1}`.
    ///
    /// The base is the convex hull of `g_j / (g_j·e)`. `density` counts the
    /// points per edge including both ends; `1` yields only the vertices.
    /// Points are ordered lexicographically by their barycentric weights.
    pub fn dual_base(&self, density: usize) -> WStarSample {
        let vertices: Vec<Vec<f64>> = self
            .generators
            .iter()
            .map(|g| {
                let s = dot(g, &self.interior);
                g.iter().map(|x| x / s).collect()
            })
            .collect();
        let weights = if density <= 1 || vertices.len() == 1 {
            vertices
        } else {
            let n = density - 1;
            let mut out = Vec::new();
            let mut parts = vec![0usize; vertices.len()];
            compositions(n, 0, &mut parts, &mut |parts| {
                let mut w = vec![0.0; self.dim()];
                for (lam, v) in parts.iter().zip(&vertices) {
                    if *lam == 0 {
                        continue;
                    }
                    let l = *lam as f64 / n as f64;
                    for (wi, vi) in w.iter_mut().zip(v) {
                        *wi += l * vi;
                    }
                }
                out.push(w);
            });
            out
        };
        WStarSample {
            weights,
            normalization_point: self.interior.clone(),
            density: density.max(1),
        }
    }
}

fn compositions(remaining: usize, idx: usize, parts: &mut Vec<usize>, emit: &mut dyn FnMut(&[usize])) {
    if idx + 1 == parts.len() {
        parts[idx] = remaining;
        emit(parts);
        return;
    }
    for k in 0..=remaining {
        parts[idx] = k;
        compositions(remaining - k, idx + 1, parts, emit);
    }
}

/// Finite sample of the dual-cone base W*.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WStarSample {
    #[serde(serialize_with = "ser_vecs")]
    pub weights: Vec<Vec<f64>>,
    #[serde(serialize_with = "ser_vec")]
    pub normalization_point: Vec<f64>,
    pub density: usize,
}

impl WStarSample {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Vec<f64>> {
        self.weights.iter()
    }

    pub fn max_norm(&self) -> f64 {
        self.weights.iter().map(|w| norm(w)).fold(0.0, f64::max)
    }

    pub fn min_norm(&self) -> f64 {
        self.weights.iter().map(|w| norm(w)).fold(f64::INFINITY, f64::min)
    }

    /// `sup_w inf_{‖u‖ ≤ eps} w·u = -eps · min_w ‖w‖`.
    pub fn ball_support_bound(&self, eps: f64) -> f64 {
        -eps * self.min_norm()
    }
}
