//! Physical constants (CODATA 2018 exact or recommended values, SI).

/// Speed of light in vacuum, m/s.
pub const C0: f64 = 299_792_458.0;
/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;
/// Vacuum permittivity, F/m.
pub const EPS0: f64 = 8.854_187_812_8e-12;
/// Vacuum permeability, H/m.
pub const MU0: f64 = 1.256_637_062_12e-6;
/// Elementary charge, C (used for eV conversions).
pub const E_CHARGE: f64 = 1.602_176_634e-19;

/// Commutator normalization N0 = (pi hbar / eps0) (omega/c)^2.
///
/// Every c-coefficient in [`crate::commutators`] is stored divided by this.
pub fn n0(omega: f64) -> f64 {
    let k0 = omega / C0;
    std::f64::consts::PI * HBAR / EPS0 * k0 * k0
}
