//! Interface Fresnel coefficients and generalized multilayer coefficients by
//! scattering-matrix (star product) composition.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kinematics::{ModeContext, Polarization};
use crate::stack::DevFault;

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// |D| below this is reported as a near-resonance conditioning warning.
pub const POLE_WARN: f64 = 1e-14;

/// Two-port scattering matrix of a segment between a left and a right reference plane.
///
/// `r_left` reflects waves arriving from the left, `t_lr` transmits left to right,
/// `r_right` and `t_rl` likewise for waves arriving from the right.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SMatrix {
    pub r_left: Complex64,
    pub t_lr: Complex64,
    pub r_right: Complex64,
    pub t_rl: Complex64,
}

impl SMatrix {
    pub fn identity() -> Self {
        SMatrix {
            r_left: ZERO,
            t_lr: ONE,
            r_right: ZERO,
            t_rl: ONE,
        }
    }

    /// Homogeneous propagation over a layer: phase factor `p = exp(i beta d)` both ways.
    pub fn phase(p: Complex64) -> Self {
        SMatrix {
            r_left: ZERO,
            t_lr: p,
            r_right: ZERO,
            t_rl: p,
        }
    }

    /// Redheffer star product: `self` on the left, `other` on the right.
    pub fn star(&self, other: &SMatrix) -> SMatrix {
        let inv = ONE / (ONE - self.r_right * other.r_left);
        SMatrix {
            r_left: self.r_left + self.t_lr * other.r_left * self.t_rl * inv,
            t_lr: self.t_lr * other.t_lr * inv,
            r_right: other.r_right + other.t_rl * self.r_right * other.t_lr * inv,
            t_rl: other.t_rl * self.t_rl * inv,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceCoeffs {
    pub r: Complex64,
    pub t: Complex64,
}

/// Fresnel coefficients for a wave going from region `i` into region `j`.
pub fn interface_rt(ctx: &ModeContext, i: usize, j: usize, q: Polarization) -> Result<InterfaceCoeffs> {
    let ri = ctx.region(i)?;
    let rj = ctx.region(j)?;
    if i.abs_diff(j) != 1 {
        return Err(Error::InvalidArgument(format!(
            "regions {i} and {j} are not adjacent"
        )));
    }
    let (bi, bj) = (ri.beta, rj.beta);
    let (num, t_num, den) = match q {
        Polarization::S => (bi - bj, 2.0 * bi, bi + bj),
        Polarization::P => {
            let k0 = ctx.k0();
            // sqrt(eps_i eps_j) as the product of the individual roots
            let root = ri.kj * rj.kj / (k0 * k0);
            let den = rj.eps * bi + ri.eps * bj;
            (rj.eps * bi - ri.eps * bj, 2.0 * bi * root, den)
        }
    };
    if den.norm() == 0.0 || !den.is_finite() {
        return Err(Error::SingularInterface { i, j });
    }
    Ok(InterfaceCoeffs {
        r: num / den,
        t: t_num / den,
    })
}

/// Scattering matrix of interface (j, j+1).
pub fn interface_smatrix(ctx: &ModeContext, j: usize, q: Polarization) -> Result<SMatrix> {
    let fwd = interface_rt(ctx, j, j + 1, q)?;
    let bwd = interface_rt(ctx, j + 1, j, q)?;
    let mut t_lr = fwd.t;
    if j == 0 && ctx.fault == Some(DevFault::FlipForwardT) {
        t_lr = -t_lr;
    }
    Ok(SMatrix {
        r_left: fwd.r,
        t_lr,
        r_right: bwd.r,
        t_rl: bwd.t,
    })
}

/// Outer reflections of a stack whose permittivities are all real, by an
/// admittance recursion in tan/tanh form.
///
/// With real permittivities every propagation constant is exactly real or
/// exactly imaginary, and this evaluation keeps those zero parts exact. An
/// evanescent outer region facing a lossless stack then gets an exactly real
/// reflection coefficient instead of one with round-off in its imaginary part,
/// which near guided-mode poles is amplified by 1/|D|. Returns `None` when some
/// permittivity is complex or some propagation constant is exactly zero.
pub fn lossless_outer_reflections(ctx: &ModeContext, q: Polarization) -> Option<(Complex64, Complex64)> {
    let n = ctx.n();
    if n == 0 || ctx.regions.iter().any(|r| r.eps.im != 0.0 || r.beta == ZERO) {
        return None;
    }
    let y: Vec<Complex64> = ctx
        .regions
        .iter()
        .map(|r| match q {
            Polarization::S => r.beta,
            Polarization::P => r.beta / r.eps,
        })
        .collect();
    let i = Complex64::i();
    // load admittance seen through layer l, given the load behind it
    let through = |l: usize, load: Complex64| -> Complex64 {
        let reg = &ctx.regions[l];
        let yl = y[l];
        if reg.beta.im == 0.0 {
            let (sn, cs) = (reg.beta.re * reg.d).sin_cos();
            if sn.abs() <= cs.abs() {
                let t = Complex64::new(sn / cs, 0.0);
                yl * (load - i * yl * t) / (yl - i * load * t)
            } else {
                let ct = Complex64::new(cs / sn, 0.0);
                yl * (load * ct - i * yl) / (yl * ct - i * load)
            }
        } else {
            let t = Complex64::new(0.0, (reg.beta.im * reg.d).tanh());
            yl * (load - i * yl * t) / (yl - i * load * t)
        }
    };
    let mut from_left = y[n];
    for l in (1..n).rev() {
        from_left = through(l, from_left);
    }
    let mut from_right = y[0];
    for l in 1..n {
        from_right = through(l, from_right);
    }
    let r0n = (y[0] - from_left) / (y[0] + from_left);
    let rn0 = (y[n] - from_right) / (y[n] + from_right);
    (r0n.is_finite() && rn0.is_finite()).then_some((r0n, rn0))
}

/// Generalized coefficients seen from region j.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionCoeffs {
    /// reflection toward region 0 (at the left boundary of j)
    pub r_j0: Complex64,
    /// reflection toward region n (at the right boundary of j)
    pub r_jn: Complex64,
    pub t_0j: Complex64,
    pub t_nj: Complex64,
    pub t_j0: Complex64,
    pub t_jn: Complex64,
    /// exp(i beta_j d_j)
    pub phase: Complex64,
    /// Fabry-Perot denominator 1 - r_j0 r_jn exp(2 i beta_j d_j)
    pub d_fp: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Warning {
    pub region: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScatterSet {
    pub q: Polarization,
    pub r0n: Complex64,
    pub t0n: Complex64,
    pub rn0: Complex64,
    pub tn0: Complex64,
    /// Indexed by region 0..=n.
    pub regions: Vec<RegionCoeffs>,
    pub betas: Vec<Complex64>,
    interfaces: Vec<SMatrix>,
    pub warnings: Vec<Warning>,
}

pub fn scatter_set(ctx: &ModeContext, q: Polarization) -> Result<ScatterSet> {
    let n = ctx.n();
    let interfaces: Vec<SMatrix> = (0..n)
        .map(|j| interface_smatrix(ctx, j, q))
        .collect::<Result<_>>()?;
    let phases: Vec<Complex64> = ctx
        .regions
        .iter()
        .map(|r| (Complex64::i() * r.beta * r.d).exp())
        .collect();

    // left[j]: region 0 up to the left boundary of region j
    let mut left = vec![SMatrix::identity(); n + 1];
    for j in 1..=n {
        let mut acc = left[j - 1];
        if j - 1 > 0 {
            acc = acc.star(&SMatrix::phase(phases[j - 1]));
        }
        left[j] = acc.star(&interfaces[j - 1]);
    }
    // right[j]: right boundary of region j up to region n
    let mut right = vec![SMatrix::identity(); n + 1];
    for j in (0..n).rev() {
        let mut acc = right[j + 1];
        if j + 1 < n {
            acc = SMatrix::phase(phases[j + 1]).star(&acc);
        }
        right[j] = interfaces[j].star(&acc);
    }

    let betas: Vec<Complex64> = ctx.regions.iter().map(|r| r.beta).collect();
    let mut warnings = Vec::new();
    let mut regions = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let r_j0 = left[j].r_right;
        let t_0j = left[j].t_lr;
        let r_jn = right[j].r_left;
        let t_nj = right[j].t_rl;
        let phase = phases[j];
        let d_fp = ONE - r_j0 * r_jn * phase * phase;
        if d_fp.norm() < POLE_WARN {
            warnings.push(Warning {
                region: j,
                message: format!("|D| = {:e} near a resonance pole", d_fp.norm()),
            });
        }
        regions.push(RegionCoeffs {
            r_j0,
            r_jn,
            t_0j,
            t_nj,
            t_j0: betas[j] / betas[0] * t_0j,
            t_jn: betas[j] / betas[n] * t_nj,
            phase,
            d_fp,
        });
    }
    let whole = right[0];
    let (r0n, rn0) = lossless_outer_reflections(ctx, q).unwrap_or((whole.r_left, whole.r_right));
    regions[0].r_jn = r0n;
    regions[n].r_j0 = rn0;
    Ok(ScatterSet {
        q,
        r0n,
        t0n: whole.t_lr,
        rn0,
        tn0: whole.t_rl,
        regions,
        betas,
        interfaces,
        warnings,
    })
}

impl ScatterSet {
    pub fn n(&self) -> usize {
        self.regions.len() - 1
    }

    /// Ratio t_{0/j} / t_{0/jp} for j >= jp, without dividing two small numbers.
    fn t0_ratio(&self, j: usize, jp: usize) -> Complex64 {
        if j == jp {
            return ONE;
        }
        // segment from the left boundary of jp to the left boundary of j
        let mut m = SMatrix::phase(self.regions[jp].phase);
        if jp == 0 {
            m = SMatrix::identity();
        }
        m = m.star(&self.interfaces[jp]);
        for l in jp + 1..j {
            m = m.star(&SMatrix::phase(self.regions[l].phase));
            m = m.star(&self.interfaces[l]);
        }
        m.t_lr / (ONE - self.regions[jp].r_j0 * m.r_left)
    }

    /// Green-kernel amplitude factor for the ordered pair (max(j, jp), min(j, jp)).
    pub fn xi(&self, j: usize, jp: usize) -> Complex64 {
        let (hi, lo) = if j >= jp { (j, jp) } else { (jp, j) };
        let reg = &self.regions[hi];
        self.t0_ratio(hi, lo) * reg.phase / (self.betas[lo] * reg.d_fp)
    }

    /// Direct product form of the same factor (overflow-prone for thick lossy stacks).
    pub fn xi_product_form(&self, j: usize, jp: usize) -> Complex64 {
        let (hi, lo) = if j >= jp { (j, jp) } else { (jp, j) };
        let n = self.n();
        let a = &self.regions[hi];
        let b = &self.regions[lo];
        a.t_0j * a.phase * b.t_nj * b.phase / (self.betas[n] * self.t0n * a.d_fp * b.d_fp)
    }
}
