//! Quantized-field input-output relations for dispersing and absorbing planar
//! multilayers: generalized Fresnel coefficients, noise couplings, commutator
//! coefficients, bosonization, thermal emission and windowed real-space kernels.

pub mod cli;
pub mod commutators;
pub mod constants;
pub mod error;
pub mod fresnel;
pub mod green;
pub mod io;
pub mod kernels;
pub mod kinematics;
pub mod quad;
pub mod sampler;
pub mod stack;
pub mod thermal;
pub mod tolerances;
pub mod units;

pub use error::{Error, Result};
pub use fresnel::{scatter_set, ScatterSet};
pub use kinematics::{ModeContext, Polarization, Side};
pub use stack::{load_stack, Stack};
