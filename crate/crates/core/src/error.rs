use thiserror::Error;

use crate::model::SurfaceModel;
use crate::moves::MoveKind;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("model mismatch: expected {expected}, found {found}")]
    ModelMismatch {
        expected: SurfaceModel,
        found: SurfaceModel,
    },

    #[error("{model} expects {expected} {what}, got {found}")]
    Arity {
        model: SurfaceModel,
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("sector tags violated at coordinate {index}")]
    SectorViolation { index: usize },

    #[error("point is not real within tolerance")]
    NotReal,

    #[error("Euler characteristic {chi} is not negative")]
    NonNegativeEuler { chi: i64 },

    #[error("cone angles must be positive, got {0}")]
    NonPositiveConeAngle(f64),

    #[error("point is outside the Fricke region: {0}")]
    OutsideFricke(&'static str),

    #[error("{0:?} is not induced by a single free-group automorphism")]
    NoSingleAutomorphism(MoveKind),

    #[error("{kind:?} is not defined on {model}")]
    UnsupportedMove { kind: MoveKind, model: SurfaceModel },

    #[error("generator index {index} out of range for rank {rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },

    #[error("matrix determinant {det_re}+{det_im}i is not 1")]
    NotUnimodular { det_re: f64, det_im: f64 },

    #[error("Lie algebra element has trace of modulus {0}")]
    NotTraceless(f64),

    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),

    #[error("chart ({0}, {1}) is degenerate at this point")]
    DegenerateChart(usize, usize),

    #[error("gradient evaluation failed: {0}")]
    Gradient(String),

    #[error("numerical drift {drift:e} exceeds tolerance {tolerance:e} at step {step}")]
    NumericalDrift {
        step: u64,
        drift: f64,
        tolerance: f64,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("level {0} is outside the SU(2) range (-2, 2)")]
    LevelOutOfRange(f64),

    #[error("insufficient samples: no bin reaches an expected count of {threshold}")]
    InsufficientSamples { threshold: f64 },

    #[error("sector {0} has no mixed-sector regime")]
    NotMixedSector(String),

    #[error("integer census exceeded {limit} states")]
    BoundOverflow { limit: usize },
}
