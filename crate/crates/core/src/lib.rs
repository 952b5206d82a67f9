//! Set order relations, scalarizations, lower Dini derivatives and the
//! scalarized Minty/Stampacchia variational inequalities for set-valued maps
//! with finite point-cloud values.

pub mod analysis;
pub mod cone;
pub mod error;
pub mod extreal;
pub mod linalg;
pub mod order;
pub mod problem;
pub mod report;
pub mod scalarize;
pub mod setmap;
pub mod suite;
pub mod verdict;
pub mod vi;

pub use analysis::DiniConfig;
pub use cone::{Cone, ConeSpec, Membership, Position, WStarSample, DEFAULT_TAU_STRICT, DEFAULT_WSTAR_DENSITY};
pub use error::{Error, Result};
pub use extreal::{ext_add, inf_residual, ExtReal, NEG_INF, POS_INF};
pub use setmap::{builtin_map, RayValues, SetMap, SetValue};
pub use problem::{Problem, Settings};
pub use verdict::Verdict;
pub use vi::{theorem_chain, ChainDocument, ChainReport, ImplicationStatus, VIKind, VIVerdict};
