pub mod airy;
pub mod error;
pub mod metrics;
pub mod problem;
pub mod quadrature;
pub mod quasi_uniform;
pub mod reference;
pub mod roots;
pub mod spectral;
pub mod tables;
pub mod verify;
pub mod wavefunction;

pub use error::{Error, Result};
pub use metrics::MetricsReport;
pub use problem::{EffectiveProfile, LevelKey, ProblemSetup};
pub use reference::{ExactState, GridSpec, Provenance};
pub use spectral::{solve_level, QuantizationResult};
pub use tables::{TableKind, TableRow};
pub use wavefunction::{ApproxState, PsiSample, Region};
