//! Per-(omega, k) wavenumbers, propagation constants and polarization vectors.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::C0;
use crate::error::{Error, Result};
use crate::stack::{DevFault, Stack};

pub type Vec3 = [Complex64; 3];

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "lowercase")]
pub enum Polarization {
    S,
    P,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::S, Polarization::P];

    /// Sign attached to each polarization in the Green kernel: +1 for p, -1 for s.
    pub fn sigma(self) -> f64 {
        match self {
            Polarization::S => -1.0,
            Polarization::P => 1.0,
        }
    }
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarization::S => "s",
            Polarization::P => "p",
        })
    }
}

/// Travel direction along z: `Plus` is toward region n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dir {
    Plus,
    Minus,
}

impl Dir {
    pub fn sign(self) -> f64 {
        match self {
            Dir::Plus => 1.0,
            Dir::Minus => -1.0,
        }
    }
}

/// Side of the plate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Zero,
    N,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Zero => "0",
            Side::N => "n",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Propagating,
    Evanescent,
    Lossy,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub eps: Complex64,
    /// k_j = sqrt(eps_j) omega / c
    pub kj: Complex64,
    /// beta_j = sqrt(k_j^2 - k^2), first quadrant
    pub beta: Complex64,
    pub d: f64,
}

/// Principal square root of a permittivity, with the lossless negative case
/// pinned to the positive imaginary axis.
pub fn sqrt_eps(eps: Complex64) -> Complex64 {
    if eps.im == 0.0 {
        if eps.re >= 0.0 {
            Complex64::new(eps.re.sqrt(), 0.0)
        } else {
            Complex64::new(0.0, (-eps.re).sqrt())
        }
    } else {
        eps.sqrt()
    }
}

/// beta = sqrt(eps k0^2 - k^2) with Re, Im >= 0.
pub fn propagation_constant(eps: Complex64, k0: f64, k: f64) -> Complex64 {
    let arg = eps * (k0 * k0) - k * k;
    if eps.im == 0.0 {
        if arg.re >= 0.0 {
            Complex64::new(arg.re.sqrt(), 0.0)
        } else {
            Complex64::new(0.0, (-arg.re).sqrt())
        }
    } else {
        let b = arg.sqrt();
        // Im arg > 0 puts the principal root in the open first quadrant already.
        Complex64::new(b.re.abs(), b.im.abs())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeContext {
    pub omega: f64,
    pub k: f64,
    pub khat: [f64; 2],
    pub regions: Vec<Region>,
    pub fault: Option<DevFault>,
}

impl ModeContext {
    pub fn new(stack: &Stack, omega: f64, k: f64) -> Result<Self> {
        Self::with_direction(stack, omega, k, [1.0, 0.0])
    }

    pub fn with_direction(stack: &Stack, omega: f64, k: f64, khat: [f64; 2]) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::InvalidArgument(format!("omega must be > 0, got {omega}")));
        }
        if !(k >= 0.0) || !k.is_finite() {
            return Err(Error::InvalidArgument(format!("k must be >= 0, got {k}")));
        }
        let norm = (khat[0] * khat[0] + khat[1] * khat[1]).sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("khat must be a unit vector, |khat| = {norm}")));
        }
        let k0 = omega / C0;
        let n = stack.n();
        let mut regions = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let eps = stack.epsilon(j, omega)?;
            regions.push(Region {
                eps,
                kj: sqrt_eps(eps) * k0,
                beta: propagation_constant(eps, k0, k),
                d: stack.thickness(j),
            });
        }
        Ok(ModeContext {
            omega,
            k,
            khat,
            regions,
            fault: stack.dev_fault,
        })
    }

    /// Index of the right half-space.
    pub fn n(&self) -> usize {
        self.regions.len() - 1
    }

    /// Vacuum wavenumber omega / c.
    pub fn k0(&self) -> f64 {
        self.omega / C0
    }

    pub fn region(&self, j: usize) -> Result<&Region> {
        self.regions.get(j).ok_or(Error::Region {
            index: j,
            n: self.n(),
        })
    }

    pub fn beta(&self, j: usize) -> Complex64 {
        self.regions[j].beta
    }

    /// Same mode with the in-plane wavevector reversed (k -> -k).
    pub fn reversed(&self) -> Self {
        let mut out = self.clone();
        out.khat = [-self.khat[0], -self.khat[1]];
        out
    }

    /// Polarization unit vector e_{q,dir} in region j for the context's khat.
    pub fn e_vec(&self, j: usize, q: Polarization, dir: Dir) -> Vec3 {
        self.e_vec_along(j, q, dir, self.khat)
    }

    /// Polarization vector for an arbitrary in-plane direction (used for -k).
    pub fn e_vec_along(&self, j: usize, q: Polarization, dir: Dir, khat: [f64; 2]) -> Vec3 {
        match q {
            // khat x e_z
            Polarization::S => [
                Complex64::new(khat[1], 0.0),
                Complex64::new(-khat[0], 0.0),
                ZERO,
            ],
            Polarization::P => {
                let r = &self.regions[j];
                let a = -dir.sign() * r.beta / r.kj;
                [a * khat[0], a * khat[1], Complex64::new(self.k, 0.0) / r.kj]
            }
        }
    }

    pub fn regime(&self, j: usize) -> Result<Regime> {
        let b = self.region(j)?.beta;
        Ok(if b.im == 0.0 && b.re > 0.0 {
            Regime::Propagating
        } else if b.re == 0.0 {
            Regime::Evanescent
        } else {
            Regime::Lossy
        })
    }

    /// True when region j is exactly lossless and the mode propagates in it.
    pub fn is_propagating_vacuum_like(&self, j: usize) -> bool {
        let r = &self.regions[j];
        r.eps.im == 0.0 && r.beta.im == 0.0 && r.beta.re > 0.0
    }
}

pub fn dot(a: &Vec3, b: &Vec3) -> Complex64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn dot_conj(a: &Vec3, b: &Vec3) -> Complex64 {
    a[0] * b[0].conj() + a[1] * b[1].conj() + a[2] * b[2].conj()
}
