//! k-space input-output matrix, mean-field propagation and fields outside the plate.

use num_complex::Complex64;

use crate::constants::MU0;
use crate::error::{Error, Result};
use crate::fresnel::{scatter_set, ScatterSet};
use crate::kinematics::{ModeContext, Polarization, Side};

/// Noise couplings of one layer. Index 0 is the `+` amplitude, index 1 the `-` amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerPhi {
    pub j: usize,
    pub zero: [Complex64; 2],
    pub n: [Complex64; 2],
}

impl LayerPhi {
    pub fn row(&self, side: Side) -> [Complex64; 2] {
        match side {
            Side::Zero => self.zero,
            Side::N => self.n,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IoMatrix {
    pub q: Polarization,
    /// rows: out(0), out(n); columns: in(0), in(n)
    pub s: [[Complex64; 2]; 2],
    pub phi: Vec<LayerPhi>,
}

impl IoMatrix {
    pub fn from_scatter(ss: &ScatterSet) -> Self {
        let n = ss.n();
        let phi = (1..n)
            .map(|j| {
                let rc = &ss.regions[j];
                let e2 = rc.phase * rc.phase;
                let zm = rc.t_j0 / rc.d_fp;
                let np = rc.t_jn * rc.phase / rc.d_fp;
                LayerPhi {
                    j,
                    zero: [zm * e2 * rc.r_jn, zm],
                    n: [np, np * rc.r_j0],
                }
            })
            .collect();
        IoMatrix {
            q: ss.q,
            s: [[ss.r0n, ss.tn0], [ss.t0n, ss.rn0]],
            phi,
        }
    }

    pub fn r0n(&self) -> Complex64 {
        self.s[0][0]
    }
    pub fn tn0(&self) -> Complex64 {
        self.s[0][1]
    }
    pub fn t0n(&self) -> Complex64 {
        self.s[1][0]
    }
    pub fn rn0(&self) -> Complex64 {
        self.s[1][1]
    }
}

pub fn io_matrix(ctx: &ModeContext, q: Polarization) -> Result<IoMatrix> {
    Ok(IoMatrix::from_scatter(&scatter_set(ctx, q)?))
}

/// Mean input amplitudes and per-layer intraplate amplitudes `(+, -)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeVector {
    pub input: [Complex64; 2],
    pub intraplate: Vec<[Complex64; 2]>,
}

impl AmplitudeVector {
    pub fn inputs_only(in0: Complex64, in_n: Complex64, layers: usize) -> Self {
        AmplitudeVector {
            input: [in0, in_n],
            intraplate: vec![[Complex64::new(0.0, 0.0); 2]; layers],
        }
    }
}

/// Mean outputs `(out(0), out(n))`.
pub fn mean_out(io: &IoMatrix, amps: &AmplitudeVector) -> Result<[Complex64; 2]> {
    if amps.intraplate.len() != io.phi.len() {
        return Err(Error::Dimension(format!(
            "{} intraplate amplitude pairs for {} layers",
            amps.intraplate.len(),
            io.phi.len()
        )));
    }
    let mut out = [Complex64::new(0.0, 0.0); 2];
    for (row, o) in out.iter_mut().enumerate() {
        *o = io.s[row][0] * amps.input[0] + io.s[row][1] * amps.input[1];
    }
    for (ph, a) in io.phi.iter().zip(&amps.intraplate) {
        out[0] += ph.zero[0] * a[0] + ph.zero[1] * a[1];
        out[1] += ph.n[0] * a[0] + ph.n[1] * a[1];
    }
    Ok(out)
}

/// Constant current block in an outer half-space.
///
/// `j_plus` and `j_minus` are the projections j . e_{q+} and j . e_{q-} of the
/// current density amplitude onto the polarization vectors of that region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceBlock {
    pub z_start: f64,
    pub z_end: f64,
    pub j_plus: Complex64,
    pub j_minus: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InOut {
    pub input: Complex64,
    pub output: Complex64,
}

/// integral of exp(s * x) over [a, b]
fn exp_integral(s: Complex64, a: f64, b: f64) -> Complex64 {
    if s.norm() * (b - a).abs() < 1e-8 {
        // series to second order keeps full precision for tiny arguments
        let ea = (s * a).exp();
        let h = b - a;
        return ea * h * (1.0 + s * h / 2.0 + s * s * h * h / 6.0);
    }
    ((s * b).exp() - (s * a).exp()) / s
}

/// Input and output amplitudes at position `z` in an outer half-space, given
/// their boundary values and piecewise-constant sources between the boundary and `z`.
pub fn field_outside(
    ctx: &ModeContext,
    side: Side,
    z: f64,
    boundary: InOut,
    sources: &[SourceBlock],
) -> Result<InOut> {
    let (j, ok) = match side {
        Side::Zero => (0, z <= 0.0),
        Side::N => (ctx.n(), z >= 0.0),
    };
    if !ok || !z.is_finite() {
        return Err(Error::OutsideRegion { z, region: j });
    }
    let beta = ctx.regions[j].beta;
    let kappa = MU0 * ctx.omega / (2.0 * beta);
    let i = Complex64::i();
    let mut src_in = Complex64::new(0.0, 0.0);
    let mut src_out = Complex64::new(0.0, 0.0);
    for b in sources {
        let (lo, hi) = (b.z_start.min(b.z_end), b.z_start.max(b.z_end));
        let inside = match side {
            Side::Zero => hi <= 0.0,
            Side::N => lo >= 0.0,
        };
        if !inside {
            return Err(Error::OutsideRegion { z: lo, region: j });
        }
        // overlap with the segment between z and the boundary
        let (a, c) = match side {
            Side::Zero => (lo.max(z), hi.min(0.0)),
            Side::N => (lo.max(0.0), hi.min(z)),
        };
        if c <= a {
            continue;
        }
        match side {
            Side::Zero => {
                src_in += b.j_plus * exp_integral(-i * beta, a, c);
                src_out += b.j_minus * exp_integral(i * beta, a, c);
            }
            Side::N => {
                src_in += b.j_minus * exp_integral(i * beta, a, c);
                src_out += b.j_plus * exp_integral(-i * beta, a, c);
            }
        }
    }
    Ok(match side {
        Side::Zero => InOut {
            input: (i * beta * z).exp() * (boundary.input + kappa * src_in),
            output: (-i * beta * z).exp() * (boundary.output - kappa * src_out),
        },
        Side::N => InOut {
            input: (-i * beta * z).exp() * (boundary.input + kappa * src_in),
            output: (i * beta * z).exp() * (boundary.output - kappa * src_out),
        },
    })
}
