//! Window-convolved coordinate-space reflection, transmission and noise kernels.
//!
//! The k-space dyads are reduced analytically over the in-plane angle, leaving
//! Hankel transforms of orders 0, 1 and 2:
//!
//! K(rho) = (1/4pi)[(H0[Fs] - H2[Fs] + H0[Fpp] + H2[Fpp]) I2 + 2(H2[Fs] - H2[Fpp]) rr]
//!        + (i/2pi) H1[Fpz] r z + (i/2pi) H1[Fzp] z r + (1/2pi) H0[Fzz] z z
//!
//! with H_m[F](rho) = int k F(k) J_m(k rho) dk and r the in-plane unit vector.
//! The exact kernels contain distributional large-k parts; only windowed
//! versions are computed here.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fresnel::scatter_set;
use crate::green::{Mat3, MAT3_ZERO};
use crate::io::IoMatrix;
use crate::kinematics::{Dir, ModeContext, Polarization};
use crate::quad::{integrate_vec, AdaptiveOptions};
use crate::stack::Stack;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelKind {
    R0n,
    Rn0,
    T0n,
    Tn0,
    Phi0 { layer: usize, dir: Dir },
    PhiN { layer: usize, dir: Dir },
}

impl fmt::Display for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sgn = |d: &Dir| if *d == Dir::Plus { '+' } else { '-' };
        match self {
            KernelKind::R0n => write!(f, "r0n"),
            KernelKind::Rn0 => write!(f, "rn0"),
            KernelKind::T0n => write!(f, "t0n"),
            KernelKind::Tn0 => write!(f, "tn0"),
            KernelKind::Phi0 { layer, dir } => write!(f, "phi0{}:{layer}", sgn(dir)),
            KernelKind::PhiN { layer, dir } => write!(f, "phin{}:{layer}", sgn(dir)),
        }
    }
}

impl FromStr for KernelKind {
    type Err = Error;

    /// `r0n`, `rn0`, `t0n`, `tn0`, `phi0+:J`, `phi0-:J`, `phin+:J`, `phin-:J`
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "r0n" => return Ok(KernelKind::R0n),
            "rn0" => return Ok(KernelKind::Rn0),
            "t0n" => return Ok(KernelKind::T0n),
            "tn0" => return Ok(KernelKind::Tn0),
            _ => {}
        }
        let bad = || Error::InvalidArgument(format!("unknown kernel kind '{s}'"));
        let (head, layer) = lower.split_once(':').ok_or_else(bad)?;
        let layer: usize = layer.parse().map_err(|_| bad())?;
        let (side, dir) = head.split_at(head.len().saturating_sub(1));
        let dir = match dir {
            "+" => Dir::Plus,
            "-" => Dir::Minus,
            _ => return Err(bad()),
        };
        match side {
            "phi0" => Ok(KernelKind::Phi0 { layer, dir }),
            "phin" => Ok(KernelKind::PhiN { layer, dir }),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Window {
    /// exp(-k^2 / (2 k_w^2))
    Gaussian { k_w: f64 },
}

impl Window {
    pub fn value(&self, k: f64) -> f64 {
        match *self {
            Window::Gaussian { k_w } => (-0.5 * (k / k_w).powi(2)).exp(),
        }
    }

    /// Upper integration limit; the window is below 1e-18 beyond it.
    pub fn k_max(&self) -> f64 {
        match *self {
            Window::Gaussian { k_w } => 9.2 * k_w,
        }
    }
}

/// Scalar radial coefficient functions of the dyad at one k.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RadialCoefficients {
    pub fs: Complex64,
    pub fpp: Complex64,
    pub fpz: Complex64,
    pub fzp: Complex64,
    pub fzz: Complex64,
}

impl RadialCoefficients {
    /// k-space tensor for an in-plane wavevector along x.
    pub fn tensor_x(&self) -> Mat3 {
        let mut m = MAT3_ZERO;
        m[1][1] = self.fs;
        m[0][0] = self.fpp;
        m[0][2] = self.fpz;
        m[2][0] = self.fzp;
        m[2][2] = self.fzz;
        m
    }

    fn scaled(&self, w: f64) -> Self {
        RadialCoefficients {
            fs: self.fs * w,
            fpp: self.fpp * w,
            fpz: self.fpz * w,
            fzp: self.fzp * w,
            fzz: self.fzz * w,
        }
    }
}

/// Left and right (region, direction) of the dyad and its scalar coefficient.
fn dyad_parts(ctx: &ModeContext, io: &IoMatrix, kind: KernelKind) -> Result<((usize, Dir), Complex64, (usize, Dir))> {
    let n = ctx.n();
    let phi = |layer: usize| {
        io.phi
            .iter()
            .find(|p| p.j == layer)
            .copied()
            .ok_or(Error::Region { index: layer, n })
    };
    let idx = |d: Dir| if d == Dir::Plus { 0 } else { 1 };
    Ok(match kind {
        KernelKind::R0n => ((0, Dir::Minus), io.r0n(), (0, Dir::Plus)),
        KernelKind::Rn0 => ((n, Dir::Plus), io.rn0(), (n, Dir::Minus)),
        KernelKind::T0n => ((n, Dir::Plus), io.t0n(), (0, Dir::Plus)),
        KernelKind::Tn0 => ((0, Dir::Minus), io.tn0(), (n, Dir::Minus)),
        KernelKind::Phi0 { layer, dir } => ((0, Dir::Minus), phi(layer)?.zero[idx(dir)], (layer, dir)),
        KernelKind::PhiN { layer, dir } => ((n, Dir::Plus), phi(layer)?.n[idx(dir)], (layer, dir)),
    })
}

/// Radial coefficients of `kind` for the mode `ctx`, restricted to `pols`.
pub fn radial_coefficients(ctx: &ModeContext, kind: KernelKind, pols: &[Polarization]) -> Result<RadialCoefficients> {
    let mut out = RadialCoefficients::default();
    for &q in pols {
        let io = IoMatrix::from_scatter(&scatter_set(ctx, q)?);
        let ((jl, dl), coef, (jr, dr)) = dyad_parts(ctx, &io, kind)?;
        match q {
            Polarization::S => out.fs += coef,
            Polarization::P => {
                let (l, r) = (&ctx.regions[jl], &ctx.regions[jr]);
                let al = -dl.sign() * l.beta / l.kj;
                let ar = -dr.sign() * r.beta / r.kj;
                let bl = ctx.k / l.kj;
                let br = ctx.k / r.kj;
                out.fpp += coef * al * ar;
                out.fpz += coef * al * br;
                out.fzp += coef * bl * ar;
                out.fzz += coef * bl * br;
            }
        }
    }
    Ok(out)
}

/// Window times the k-space coefficients at wavevector magnitude k.
pub fn windowed_coefficients(
    stack: &Stack,
    omega: f64,
    k: f64,
    kind: KernelKind,
    window: &Window,
    pols: &[Polarization],
) -> Result<RadialCoefficients> {
    let ctx = ModeContext::new(stack, omega, k)?;
    Ok(radial_coefficients(&ctx, kind, pols)?.scaled(window.value(k)))
}

/// Hankel transforms per rho node, in the order
/// H0[Fs], H2[Fs], H0[Fpp], H2[Fpp], H1[Fpz], H1[Fzp], H0[Fzz].
pub type HankelSet = [Complex64; 7];

#[derive(Debug, Clone, PartialEq)]
pub struct KernelField {
    pub kind: KernelKind,
    pub omega: f64,
    pub window: Window,
    pub rho: Vec<f64>,
    pub hankel: Vec<HankelSet>,
}

impl KernelField {
    /// Kernel tensor at node i for in-plane separation direction `dir` (unit 2-vector).
    pub fn tensor(&self, i: usize, dir: [f64; 2]) -> Mat3 {
        let h = &self.hankel[i];
        let iso = (h[0] - h[1] + h[2] + h[3]) / (4.0 * PI);
        let aniso = (h[1] - h[3]) / (2.0 * PI);
        let rz = Complex64::i() * h[4] / (2.0 * PI);
        let zr = Complex64::i() * h[5] / (2.0 * PI);
        let zz = h[6] / (2.0 * PI);
        let mut m = MAT3_ZERO;
        for a in 0..2 {
            for b in 0..2 {
                let delta = if a == b { 1.0 } else { 0.0 };
                m[a][b] = iso * delta + aniso * dir[a] * dir[b];
            }
            m[a][2] = rz * dir[a];
            m[2][a] = zr * dir[a];
        }
        m[2][2] = zz;
        m
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelOptions {
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for KernelOptions {
    fn default() -> Self {
        KernelOptions {
            rel_tol: 1e-9,
            max_intervals: 40_000,
        }
    }
}

fn bessel012(x: f64) -> (f64, f64, f64) {
    (libm::j0(x), libm::j1(x), libm::jn(2, x))
}

/// Windowed coordinate-space kernel on a radial grid.
pub fn kernel_radial(
    stack: &Stack,
    omega: f64,
    kind: KernelKind,
    window: Window,
    rho: &[f64],
    pols: &[Polarization],
    opts: KernelOptions,
) -> Result<KernelField> {
    if rho.iter().any(|r| !(*r >= 0.0) || !r.is_finite()) {
        return Err(Error::InvalidArgument("rho grid must be non-negative and finite".into()));
    }
    let k_max = window.k_max();
    // probe once so configuration errors surface before quadrature
    windowed_coefficients(stack, omega, 0.5 * k_max, kind, &window, pols)?;

    let mut breaks = vec![0.0, k_max];
    let k0 = omega / crate::constants::C0;
    for j in 0..=stack.n() {
        let kr = (crate::kinematics::sqrt_eps(stack.epsilon(j, omega)?) * k0).re;
        if kr > 0.0 && kr < k_max {
            breaks.push(kr);
        }
    }
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup();

    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let dim = 7 * rho.len();
    let integrand = |k: f64, out: &mut [Complex64]| {
        let c = match windowed_coefficients(stack, omega, k, kind, &window, pols) {
            Ok(c) if c.fs.is_finite() && c.fpp.is_finite() && c.fzz.is_finite() && c.fpz.is_finite() && c.fzp.is_finite() => c,
            Ok(_) => {
                failure.borrow_mut().get_or_insert(Error::Accuracy(format!("non-finite integrand at k = {k:e}")));
                out.fill(ZERO);
                return;
            }
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                out.fill(ZERO);
                return;
            }
        };
        for (i, &r) in rho.iter().enumerate() {
            let (j0, j1, j2) = bessel012(k * r);
            let o = &mut out[7 * i..7 * i + 7];
            o[0] = k * c.fs * j0;
            o[1] = k * c.fs * j2;
            o[2] = k * c.fpp * j0;
            o[3] = k * c.fpp * j2;
            o[4] = k * c.fpz * j1;
            o[5] = k * c.fzp * j1;
            o[6] = k * c.fzz * j0;
        }
    };
    let flat = integrate_vec(
        integrand,
        &breaks,
        dim,
        AdaptiveOptions {
            rel_tol: opts.rel_tol,
            abs_tol: 0.0,
            max_intervals: opts.max_intervals,
        },
    )?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let hankel = flat
        .chunks_exact(7)
        .map(|c| [c[0], c[1], c[2], c[3], c[4], c[5], c[6]])
        .collect();
    Ok(KernelField {
        kind,
        omega,
        window,
        rho: rho.to_vec(),
        hankel,
    })
}

/// Composite Gauss-Legendre nodes and weights on [0, rho_max].
pub fn rho_grid(rho_max: f64, panels: usize, order: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(rho_max > 0.0) || panels == 0 {
        return Err(Error::InvalidArgument("rho grid needs rho_max > 0 and panels > 0".into()));
    }
    let rule = GaussLegendre::new(order.max(2)).map_err(|e| Error::InvalidArgument(format!("{e:?}")))?;
    let h = rho_max / panels as f64;
    let mut nodes = Vec::with_capacity(panels * order);
    let mut weights = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let a = p as f64 * h;
        for &(x, w) in rule.as_node_weight_pairs() {
            nodes.push(a + 0.5 * h * (x + 1.0));
            weights.push(0.5 * h * w);
        }
    }
    Ok((nodes, weights))
}

/// 2D Fourier transform of a kernel field back to k-space (in-plane wavevector
/// along x), using `weights` as quadrature weights for the field's rho nodes.
pub fn forward_transform(field: &KernelField, weights: &[f64], k: f64) -> Result<Mat3> {
    if weights.len() != field.rho.len() {
        return Err(Error::Dimension(format!(
            "{} weights for {} rho nodes",
            weights.len(),
            field.rho.len()
        )));
    }
    let mut m = MAT3_ZERO;
    let mi = Complex64::new(0.0, -2.0 * PI);
    for (i, (&r, &w)) in field.rho.iter().zip(weights).enumerate() {
        let t = field.tensor(i, [1.0, 0.0]);
        let a = t[1][1];
        let b = t[0][0] - t[1][1];
        let (j0, j1, j2) = bessel012(k * r);
        let wr = w * r;
        m[0][0] += wr * (2.0 * PI * a * j0 + PI * b * (j0 - j2));
        m[1][1] += wr * (2.0 * PI * a * j0 + PI * b * (j0 + j2));
        m[0][2] += wr * mi * t[0][2] * j1;
        m[2][0] += wr * mi * t[2][0] * j1;
        m[2][2] += wr * 2.0 * PI * t[2][2] * j0;
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_round_trips_through_text() {
        for k in [
            KernelKind::R0n,
            KernelKind::Tn0,
            KernelKind::Phi0 { layer: 2, dir: Dir::Minus },
            KernelKind::PhiN { layer: 1, dir: Dir::Plus },
        ] {
            assert_eq!(k.to_string().parse::<KernelKind>().unwrap(), k);
        }
        assert!("phix+:1".parse::<KernelKind>().is_err());
    }

    #[test]
    fn empty_stack_has_no_reflection_kernel() {
        let omega = 1e6 * crate::constants::C0;
        let f = kernel_radial(
            &Stack::vacuum(),
            omega,
            KernelKind::R0n,
            Window::Gaussian { k_w: 0.25e6 },
            &[0.0, 1e-6, 5e-6],
            &Polarization::BOTH,
            KernelOptions::default(),
        )
        .unwrap();
        for h in &f.hankel {
            assert!(h.iter().all(|v| *v == ZERO));
        }
    }
}
