use thiserror::Error;

use crate::kinematics::Side;

#[derive(Debug, Error)]
pub enum Error {
    #[error("config parse error: {0}")]
    Parse(String),

    #[error("passivity violated ({context}): Im eps = {im:e} at omega = {omega:e} rad/s")]
    Passivity { context: String, omega: f64, im: f64 },

    #[error("layer {index}: thickness must be positive and finite, got {value:e} m")]
    Thickness { index: usize, value: f64 },

    #[error("omega = {omega:e} rad/s outside tabulated range [{lo:e}, {hi:e}]")]
    OutOfTable { omega: f64, lo: f64, hi: f64 },

    #[error("invalid tabulated permittivity: {0}")]
    Table(String),

    #[error("region index {index} out of range (regions 0..={n})")]
    Region { index: usize, n: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("singular interface between regions {i} and {j}")]
    SingularInterface { i: usize, j: usize },

    #[error("z = {z:e} m lies outside region {region}")]
    OutsideRegion { z: f64, region: usize },

    #[error("outer media must be absorbing (set Im eps > 0 in {0}) so the half-space integrals converge")]
    NonAbsorbingOuter(String),

    #[error("intraplate matrix of layer {layer} is not positive semidefinite (radicand {value:e})")]
    NotPsd { layer: usize, value: f64 },

    #[error("no bosonic input operators exist on side {side}: input commutator {c_in:e} vanishes (evanescent regime)")]
    NoBosonicInput { side: Side, c_in: f64 },

    #[error("output commutator on side {side} is not positive ({c_out:e})")]
    NonPositiveOutput { side: Side, c_out: f64 },

    #[error("regime precondition failed: {0}")]
    Regime(String),

    #[error("negative emission {value:e} beyond tolerance on side {side}")]
    NegativeEmission { side: Side, value: f64 },

    #[error("kernel quadrature did not converge: {0}")]
    Accuracy(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
