//! Brute-force oracle: division points as Puiseux series, measured
//! independently of the closed forms and compared against them.

pub mod puiseux;
pub mod roots;
pub mod series;
pub mod tower;

pub use puiseux::{newton_puiseux_roots, RootSeries};
pub use roots::residual_roots;
pub use series::{PuiseuxSeries, SeriesValuation};
pub use tower::{
    division_tower, expand_at, verify_model, verify_module, verify_profile, LocalModel, OracleConfig, OracleReport, Prediction,
    TowerMeasurement,
};

use crate::valtower::TowerError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    /// Internal: a residual equation needs an extension of this degree.
    #[error("residual roots need an extension of degree {degree}")]
    NeedExtension { degree: u32 },
    #[error("coefficient extension of degree {needed} exceeds the cap {cap}")]
    ExtensionCapExceeded { needed: u32, cap: u32 },
    #[error("precision stall: {0}")]
    PrecisionStall(String),
    #[error("unsupported place: {0}")]
    UnsupportedPlace(String),
    #[error(transparent)]
    Tower(#[from] TowerError),
}
