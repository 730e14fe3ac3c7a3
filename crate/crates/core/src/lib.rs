//! Three-level V-atom simulator for lasing without inversion: bare and
//! dressed-state density-matrix dynamics, secular closed forms and gain
//! classification.

pub mod bare;
pub mod compare;
pub mod density;
pub mod dressed;
pub mod dressed_basis;
pub mod error;
pub mod exec;
pub mod export;
pub mod gain;
pub mod integrator;
pub mod params;
pub mod secular;
pub mod spectrum;
pub mod steady;

pub use bare::{bare_derivative, bare_rhs, bare_steady_state, integrate_bare};
pub use density::{Basis, CMatrix3, DensityMatrix};
pub use dressed::{dressed_derivative, dressed_rhs, dressed_steady_state, integrate_dressed};
pub use dressed_basis::{build_dressed_basis, to_bare, to_dressed, DressedBasis};
pub use error::{Error, Result};
pub use integrator::{StepControl, StepMode, Trajectory};
pub use params::{derive_rates, DressedRates, FieldRegime, ParamName, SystemParams};
