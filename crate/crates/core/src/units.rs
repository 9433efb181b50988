//! Grid and unit parsing for sweeps.
//!
//! A grid is `start:stop:count` (inclusive linspace) or a comma list, with an
//! optional `@unit` suffix:
//!
//! * omega: `rad/s` (default), `eV`, `um` (vacuum wavelength in micrometres)
//! * k: `1/m` (default), `1/um`, `k0` (multiples of omega/c), `deg` (incidence
//!   angle in region 0)

use std::str::FromStr;

use crate::constants::{C0, E_CHARGE, HBAR};
use crate::error::{Error, Result};
use crate::kinematics::sqrt_eps;
use crate::stack::Stack;

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

/// Values of a `start:stop:count` or `v1,v2,...` expression (no unit).
pub fn parse_values(s: &str) -> Result<Vec<f64>> {
    let s = s.trim();
    if s.is_empty() {
        return Err(usage("empty grid"));
    }
    let num = |t: &str| -> Result<f64> {
        let v: f64 = t.trim().parse().map_err(|_| usage(format!("not a number: '{t}'")))?;
        if !v.is_finite() {
            return Err(usage(format!("non-finite grid value '{t}'")));
        }
        Ok(v)
    };
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(usage(format!("range '{s}' must be start:stop:count")));
        }
        let (a, b) = (num(parts[0])?, num(parts[1])?);
        let n: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| usage(format!("bad point count '{}'", parts[2])))?;
        if n == 0 {
            return Err(usage("range needs at least one point"));
        }
        if n == 1 {
            return Ok(vec![a]);
        }
        let h = (b - a) / (n - 1) as f64;
        return Ok((0..n).map(|i| if i == n - 1 { b } else { a + h * i as f64 }).collect());
    }
    s.split(',').map(num).collect()
}

fn split_unit(s: &str) -> (&str, Option<&str>) {
    match s.rsplit_once('@') {
        Some((v, u)) => (v, Some(u.trim())),
        None => (s, None),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmegaUnit {
    RadPerSecond,
    ElectronVolt,
    Micrometre,
}

impl FromStr for OmegaUnit {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rad/s" => Ok(OmegaUnit::RadPerSecond),
            "eV" | "ev" => Ok(OmegaUnit::ElectronVolt),
            "um" | "µm" => Ok(OmegaUnit::Micrometre),
            _ => Err(usage(format!("unknown frequency unit '{s}' (rad/s, eV, um)"))),
        }
    }
}

impl OmegaUnit {
    pub fn to_rad_per_s(self, v: f64) -> Result<f64> {
        let w = match self {
            OmegaUnit::RadPerSecond => v,
            OmegaUnit::ElectronVolt => v * E_CHARGE / HBAR,
            OmegaUnit::Micrometre => {
                if v <= 0.0 {
                    return Err(usage(format!("wavelength must be positive, got {v}")));
                }
                2.0 * std::f64::consts::PI * C0 / (v * 1e-6)
            }
        };
        if !(w > 0.0) {
            return Err(usage(format!("angular frequency must be positive, got {w}")));
        }
        Ok(w)
    }
}

/// Angular frequencies in rad/s.
pub fn parse_omega_grid(s: &str) -> Result<Vec<f64>> {
    let (v, u) = split_unit(s);
    let unit = u.map(OmegaUnit::from_str).transpose()?.unwrap_or(OmegaUnit::RadPerSecond);
    parse_values(v)?.into_iter().map(|x| unit.to_rad_per_s(x)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KUnit {
    PerMetre,
    PerMicrometre,
    VacuumMultiple,
    Degrees,
}

impl FromStr for KUnit {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1/m" => Ok(KUnit::PerMetre),
            "1/um" | "1/µm" => Ok(KUnit::PerMicrometre),
            "k0" => Ok(KUnit::VacuumMultiple),
            "deg" => Ok(KUnit::Degrees),
            _ => Err(usage(format!("unknown wavenumber unit '{s}' (1/m, 1/um, k0, deg)"))),
        }
    }
}

/// k-grid whose physical values may depend on omega.
#[derive(Debug, Clone, PartialEq)]
pub struct KGrid {
    pub values: Vec<f64>,
    pub unit: KUnit,
}

impl FromStr for KGrid {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (v, u) = split_unit(s);
        let unit = u.map(KUnit::from_str).transpose()?.unwrap_or(KUnit::PerMetre);
        let values = parse_values(v)?;
        if unit == KUnit::Degrees && values.iter().any(|a| !(0.0..90.0).contains(a)) {
            return Err(usage("incidence angles must lie in [0, 90) degrees"));
        }
        if values.iter().any(|x| *x < 0.0) {
            return Err(usage("in-plane wavenumbers must be non-negative"));
        }
        Ok(KGrid { values, unit })
    }
}

impl KGrid {
    /// In-plane wavenumbers in 1/m at angular frequency omega.
    pub fn resolve(&self, stack: &Stack, omega: f64) -> Result<Vec<f64>> {
        let k0 = omega / C0;
        match self.unit {
            KUnit::PerMetre => Ok(self.values.clone()),
            KUnit::PerMicrometre => Ok(self.values.iter().map(|v| v * 1e6).collect()),
            KUnit::VacuumMultiple => Ok(self.values.iter().map(|v| v * k0).collect()),
            KUnit::Degrees => {
                let n0 = sqrt_eps(stack.epsilon(0, omega)?).re;
                Ok(self.values.iter().map(|a| n0 * k0 * a.to_radians().sin()).collect())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_includes_endpoints() {
        assert_eq!(parse_values("1:2:3").unwrap(), vec![1.0, 1.5, 2.0]);
        assert_eq!(parse_values("0.5, 2").unwrap(), vec![0.5, 2.0]);
        assert_eq!(parse_values("4:9:1").unwrap(), vec![4.0]);
    }

    #[test]
    fn malformed_grids() {
        for bad in ["", "1:2", "1:2:0", "a,b", "1:2:x", "nan"] {
            assert!(parse_values(bad).is_err(), "{bad}");
        }
        assert!(parse_omega_grid("1@furlong").is_err());
        assert!("1@k1".parse::<KGrid>().is_err());
        assert!("95@deg".parse::<KGrid>().is_err());
    }

    #[test]
    fn wavelength_to_frequency() {
        let w = parse_omega_grid("1@um").unwrap()[0];
        assert!((w - 2.0 * std::f64::consts::PI * C0 / 1e-6).abs() < 1.0);
        let ev = parse_omega_grid("1@eV").unwrap()[0];
        assert!((ev * HBAR / E_CHARGE - 1.0).abs() < 1e-15);
    }

    #[test]
    fn vacuum_multiples() {
        let g: KGrid = "0.5@k0".parse().unwrap();
        let k = g.resolve(&Stack::vacuum(), 3e15).unwrap();
        assert!((k[0] - 0.5 * 3e15 / C0).abs() < 1e-6);
        let d: KGrid = "30@deg".parse().unwrap();
        let k = d.resolve(&Stack::vacuum(), 3e15).unwrap();
        assert!((k[0] - 0.5 * 3e15 / C0).abs() < 1e-3);
    }
}
