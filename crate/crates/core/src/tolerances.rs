//! Tolerances shared by the verification suites, the CLI and the tests.

/// Bosonized unitarity, lossless vacuum-clad stacks.
pub const UNITARITY_LOSSLESS: f64 = 1e-12;
/// Bosonized unitarity with absorbing layers.
pub const UNITARITY_ABSORBING: f64 = 1e-10;
/// Closed-form versus assembled output commutators (relative).
pub const COMMUTATOR_CLOSURE: f64 = 1e-10;
/// Vacuum limits c_out = c_in and vanishing cross commutator (relative to 1/beta).
pub const VACUUM_LIMIT: f64 = 1e-12;
/// Evanescent-vacuum output commutator against 2 Im r / |beta| (relative).
pub const EVANESCENT_LIMIT: f64 = 1e-10;
/// Kirchhoff balance w/(n c_in) + |r|^2 + |t|^2 = 1.
pub const KIRCHHOFF: f64 = 1e-8;
/// Green integral identity residual.
pub const GREEN_IDENTITY: f64 = 1e-6;
/// Slab reference values.
pub const SLAB_REFERENCE: f64 = 1e-12;
/// s/p agreement at normal incidence.
pub const NORMAL_INCIDENCE: f64 = 1e-12;
/// PSD floor for the intraplate matrices, as a fraction of the trace.
pub const PSD_FLOOR: f64 = 1e-14;
/// tau tau^dagger = C (relative).
pub const TAU_RECONSTRUCTION: f64 = 1e-10;
/// Windowed kernel round trip (relative).
pub const KERNEL_ROUND_TRIP: f64 = 1e-4;
/// Monte Carlo agreement in standard errors.
pub const MONTE_CARLO_SIGMAS: f64 = 3.0;
/// Reciprocity t_{0/n} beta_n = t_{n/0} beta_0 (relative).
pub const RECIPROCITY: f64 = 1e-12;
