//! Thermal emission of the plate at a single equilibrium temperature.

use crate::commutators::{commutator_set_from, CommutatorSet};
use crate::constants::{HBAR, K_B};
use crate::error::{Error, Result};
use crate::fresnel::scatter_set;
use crate::io::IoMatrix;
use crate::kinematics::{ModeContext, Polarization, Side};

/// Relative slack for round-off negative emission before it is reported as an error.
pub const NEGATIVE_SLACK: f64 = 1e-12;

/// Bose-Einstein occupation as a function of x = hbar omega / (k_B T).
pub fn bose_ratio(x: f64) -> f64 {
    if x.is_infinite() {
        return 0.0;
    }
    1.0 / x.exp_m1()
}

/// Mean photon number n(omega, T); exactly 0 at T = 0.
pub fn bose(omega: f64, temperature: f64) -> f64 {
    bose_with(omega, temperature, HBAR, K_B)
}

/// Same as [`bose`] with caller-supplied hbar and k_B (dimensionless test units).
pub fn bose_with(omega: f64, temperature: f64, hbar: f64, kb: f64) -> f64 {
    if temperature <= 0.0 {
        return 0.0;
    }
    bose_ratio(hbar * omega / (kb * temperature))
}

/// Sum over layers of phi C phi^dagger on one side (N0-normalized, per unit occupation).
pub fn emission_per_quantum(cs: &CommutatorSet, io: &IoMatrix, side: Side) -> f64 {
    let mut acc = 0.0;
    for (ph, blk) in io.phi.iter().zip(&cs.layers) {
        let r = ph.row(side);
        for l in 0..2 {
            for m in 0..2 {
                acc += (r[l] * blk.c[l][m] * r[m].conj()).re;
            }
        }
    }
    acc
}

/// Emitted spectral intensity on one side, N0-normalized.
pub fn emission_w(ctx: &ModeContext, q: Polarization, temperature: f64, side: Side) -> Result<f64> {
    let ss = scatter_set(ctx, q)?;
    let cs = commutator_set_from(ctx, &ss)?;
    let io = IoMatrix::from_scatter(&ss);
    let per = emission_per_quantum(&cs, &io, side);
    let scale: f64 = cs
        .layers
        .iter()
        .map(|b| b.c[0][0].re.abs() + b.c[1][1].re.abs())
        .fold(0.0, f64::max);
    if per < -NEGATIVE_SLACK * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NegativeEmission { side, value: per });
    }
    Ok(bose(ctx.omega, temperature) * per.max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KirchhoffReport {
    /// w/(n c_in) + |r|^2 + |t|^2 - 1 on each side
    pub balance: [f64; 2],
    /// |w - n c_in (1 - |r|^2 - |t|^2)| / max(w, tiny) on each side
    pub relative: [f64; 2],
}

impl KirchhoffReport {
    pub fn worst_balance(&self) -> f64 {
        self.balance[0].abs().max(self.balance[1].abs())
    }
}

/// Emissivity-absorptivity balance; requires propagating, lossless outer media.
pub fn kirchhoff(ctx: &ModeContext, q: Polarization, temperature: f64) -> Result<KirchhoffReport> {
    let n = ctx.n();
    for j in [0, n] {
        if !ctx.is_propagating_vacuum_like(j) {
            return Err(Error::Regime(format!(
                "Kirchhoff balance needs propagating lossless outer media (region {j} is not)"
            )));
        }
    }
    let nb = bose(ctx.omega, temperature);
    if !(nb > 0.0) {
        return Err(Error::InvalidArgument("occupation is zero; use T > 0".into()));
    }
    let ss = scatter_set(ctx, q)?;
    let cs = commutator_set_from(ctx, &ss)?;
    let io = IoMatrix::from_scatter(&ss);
    let mut balance = [0.0; 2];
    let mut relative = [0.0; 2];
    for (k, side) in [Side::Zero, Side::N].into_iter().enumerate() {
        // photons leaving on this side come from reflection on this side and
        // transmission from the other side; |t|^2 is weighted by the input
        // commutators so media of different index balance correctly
        let (r, t, cin_here, cin_other) = match side {
            Side::Zero => (ss.r0n, ss.tn0, cs.c_in[0], cs.c_in[1]),
            Side::N => (ss.rn0, ss.t0n, cs.c_in[1], cs.c_in[0]),
        };
        let trans = t.norm_sqr() * cin_other / cin_here;
        let w = nb * emission_per_quantum(&cs, &io, side);
        let expect = nb * cin_here * (1.0 - r.norm_sqr() - trans);
        balance[k] = w / (nb * cin_here) + r.norm_sqr() + trans - 1.0;
        relative[k] = (w - expect).abs() / w.abs().max(f64::MIN_POSITIVE);
    }
    Ok(KirchhoffReport { balance, relative })
}
