//! Numerical and symbolic tools for the universal embedding space of
//! almost complex manifolds over `ℂ²ᵏ`: flag charts, the torsion of the
//! canonical distribution, the octonionic structure on `S⁶` and its
//! embedding, and Chern class arithmetic by formal roots.

pub mod chern;
pub mod cxlinalg;
pub mod embed;
pub mod error;
pub mod flags;
pub mod octonion;
pub mod oracle;
pub mod sample;
pub mod zspace;

pub use chern::{BundleSymbol, GradedPoly};
pub use cxlinalg::{CMatrix, CSubspace, CVector, LinMap, Tolerances, C64};
pub use error::{AcxError, Result};
pub use flags::{ChartCoords, Flag, FlagChart};
pub use octonion::{Octonion, S6Point};
pub use zspace::{Chart, PointCoords, QuotientVec, TangentVec, ZPoint};
