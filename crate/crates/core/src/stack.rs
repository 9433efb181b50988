//! Multilayer geometry and material dispersion.
//!
//! Regions are numbered 0..=n: region 0 is the left half-space, regions
//! 1..n-1 are the finite layers and region n is the right half-space.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One Lorentz oscillator term `strength * omega0^2 / (omega0^2 - omega^2 - i gamma omega)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Oscillator {
    pub strength: f64,
    /// Resonance frequency in rad/s.
    pub omega0: f64,
    /// Damping rate in rad/s.
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum PermittivityModel {
    Constant {
        eps_re: f64,
        #[serde(default)]
        eps_im: f64,
    },
    DrudeLorentz {
        eps_inf: f64,
        #[serde(default)]
        oscillators: Vec<Oscillator>,
    },
    /// Rows of `[omega (rad/s), Re eps, Im eps]`, strictly increasing in omega.
    /// Linear interpolation, no extrapolation.
    Tabulated { samples: Vec<[f64; 3]> },
}

impl PermittivityModel {
    pub fn vacuum() -> Self {
        PermittivityModel::Constant {
            eps_re: 1.0,
            eps_im: 0.0,
        }
    }

    pub fn constant(eps: Complex64) -> Self {
        PermittivityModel::Constant {
            eps_re: eps.re,
            eps_im: eps.im,
        }
    }

    pub fn validate(&self, context: &str) -> Result<()> {
        match self {
            PermittivityModel::Constant { eps_re, eps_im } => {
                if !eps_re.is_finite() || !eps_im.is_finite() {
                    return Err(Error::InvalidArgument(format!(
                        "{context}: permittivity must be finite"
                    )));
                }
                if *eps_im < 0.0 {
                    return Err(Error::Passivity {
                        context: context.to_string(),
                        omega: f64::NAN,
                        im: *eps_im,
                    });
                }
            }
            PermittivityModel::DrudeLorentz {
                eps_inf,
                oscillators,
            } => {
                if !eps_inf.is_finite() {
                    return Err(Error::InvalidArgument(format!(
                        "{context}: eps_inf must be finite"
                    )));
                }
                for (m, osc) in oscillators.iter().enumerate() {
                    if !(osc.strength.is_finite() && osc.omega0.is_finite() && osc.gamma.is_finite())
                    {
                        return Err(Error::InvalidArgument(format!(
                            "{context}: oscillator {m} has non-finite parameters"
                        )));
                    }
                    // Im of the oscillator term has the sign of strength * gamma.
                    if osc.strength < 0.0 || osc.gamma < 0.0 {
                        return Err(Error::Passivity {
                            context: format!("{context}, oscillator {m}"),
                            omega: osc.omega0,
                            im: osc.strength * osc.gamma,
                        });
                    }
                }
            }
            PermittivityModel::Tabulated { samples } => {
                if samples.len() < 2 {
                    return Err(Error::Table(format!(
                        "{context}: need at least two samples"
                    )));
                }
                for w in samples.windows(2) {
                    if !(w[1][0] > w[0][0]) {
                        return Err(Error::Table(format!(
                            "{context}: omega must be strictly increasing ({} then {})",
                            w[0][0], w[1][0]
                        )));
                    }
                }
                for s in samples {
                    if !(s[0].is_finite() && s[1].is_finite() && s[2].is_finite()) {
                        return Err(Error::Table(format!("{context}: non-finite sample")));
                    }
                    if s[2] < 0.0 {
                        return Err(Error::Passivity {
                            context: context.to_string(),
                            omega: s[0],
                            im: s[2],
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Permittivity at angular frequency `omega` (rad/s).
    pub fn eval(&self, omega: f64) -> Result<Complex64> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "omega must be positive and finite, got {omega}"
            )));
        }
        match self {
            PermittivityModel::Constant { eps_re, eps_im } => Ok(Complex64::new(*eps_re, *eps_im)),
            PermittivityModel::DrudeLorentz {
                eps_inf,
                oscillators,
            } => {
                let mut eps = Complex64::new(*eps_inf, 0.0);
                for osc in oscillators {
                    let w02 = osc.omega0 * osc.omega0;
                    let den = Complex64::new(w02 - omega * omega, -osc.gamma * omega);
                    eps += osc.strength * w02 / den;
                }
                Ok(eps)
            }
            PermittivityModel::Tabulated { samples } => {
                let lo = samples[0][0];
                let hi = samples[samples.len() - 1][0];
                if omega < lo || omega > hi {
                    return Err(Error::OutOfTable { omega, lo, hi });
                }
                let idx = samples.partition_point(|s| s[0] <= omega);
                if idx >= samples.len() {
                    let s = samples[samples.len() - 1];
                    return Ok(Complex64::new(s[1], s[2]));
                }
                let a = samples[idx - 1];
                let b = samples[idx];
                let f = (omega - a[0]) / (b[0] - a[0]);
                Ok(Complex64::new(
                    a[1] + f * (b[1] - a[1]),
                    a[2] + f * (b[2] - a[2]),
                ))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub thickness_m: f64,
    pub material: PermittivityModel,
}

/// Deliberate convention faults used as negative controls by the verification suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DevFault {
    /// Flip the sign of the forward transmission coefficient of the first interface.
    FlipForwardT,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stack {
    pub medium0: PermittivityModel,
    #[serde(default)]
    pub layers: Vec<Layer>,
    #[serde(rename = "mediumN")]
    pub medium_n: PermittivityModel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dev_fault: Option<DevFault>,
}

impl Stack {
    pub fn new(
        medium0: PermittivityModel,
        layers: Vec<Layer>,
        medium_n: PermittivityModel,
    ) -> Result<Self> {
        let stack = Stack {
            medium0,
            layers,
            medium_n,
            dev_fault: None,
        };
        stack.validate()?;
        Ok(stack)
    }

    /// Uniform vacuum (single interface between identical media).
    pub fn vacuum() -> Self {
        Stack {
            medium0: PermittivityModel::vacuum(),
            layers: Vec::new(),
            medium_n: PermittivityModel::vacuum(),
            dev_fault: None,
        }
    }

    /// Single slab of constant permittivity `eps` and thickness `d` between two
    /// constant outer media.
    pub fn slab(eps: Complex64, d: f64, outer0: Complex64, outer_n: Complex64) -> Result<Self> {
        Stack::new(
            PermittivityModel::constant(outer0),
            vec![Layer {
                thickness_m: d,
                material: PermittivityModel::constant(eps),
            }],
            PermittivityModel::constant(outer_n),
        )
    }

    /// Stack of constant-permittivity layers `(eps, d)`.
    pub fn from_constants(
        outer0: Complex64,
        layers: &[(Complex64, f64)],
        outer_n: Complex64,
    ) -> Result<Self> {
        Stack::new(
            PermittivityModel::constant(outer0),
            layers
                .iter()
                .map(|&(eps, d)| Layer {
                    thickness_m: d,
                    material: PermittivityModel::constant(eps),
                })
                .collect(),
            PermittivityModel::constant(outer_n),
        )
    }

    pub fn with_fault(mut self, fault: DevFault) -> Self {
        self.dev_fault = Some(fault);
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.medium0.validate("medium0")?;
        self.medium_n.validate("mediumN")?;
        for (i, layer) in self.layers.iter().enumerate() {
            let d = layer.thickness_m;
            if !(d > 0.0) || !d.is_finite() {
                return Err(Error::Thickness {
                    index: i + 1,
                    value: d,
                });
            }
            layer.material.validate(&format!("layer {}", i + 1))?;
        }
        Ok(())
    }

    /// Index of the right half-space (number of interfaces).
    pub fn n(&self) -> usize {
        self.layers.len() + 1
    }

    pub fn material(&self, j: usize) -> Result<&PermittivityModel> {
        let n = self.n();
        if j == 0 {
            Ok(&self.medium0)
        } else if j == n {
            Ok(&self.medium_n)
        } else if j < n {
            Ok(&self.layers[j - 1].material)
        } else {
            Err(Error::Region { index: j, n })
        }
    }

    pub fn epsilon(&self, j: usize, omega: f64) -> Result<Complex64> {
        let eps = self.material(j)?.eval(omega)?;
        if eps.im < 0.0 {
            return Err(Error::Passivity {
                context: format!("region {j}"),
                omega,
                im: eps.im,
            });
        }
        Ok(eps)
    }

    /// Thickness of region `j`; zero for the two half-spaces.
    pub fn thickness(&self, j: usize) -> f64 {
        if j == 0 || j >= self.n() {
            0.0
        } else {
            self.layers[j - 1].thickness_m
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("stack serializes to TOML")
    }
}

/// Parse and validate a TOML stack definition.
pub fn load_stack(config_text: &str) -> Result<Stack> {
    let stack: Stack = toml::from_str(config_text).map_err(|e| Error::Parse(e.to_string()))?;
    stack.validate()?;
    Ok(stack)
}

pub fn load_stack_file(path: &std::path::Path) -> Result<Stack> {
    let text = std::fs::read_to_string(path)?;
    load_stack(&text)
}
