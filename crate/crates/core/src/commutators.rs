//! Commutator coefficients of the input, output and intraplate amplitudes,
//! the intraplate factorization and the bosonized input-output relation.
//!
//! All c-coefficients are divided by N0 = (pi hbar/eps0)(omega/c)^2 and so
//! carry units of length.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fresnel::{scatter_set, ScatterSet};
use crate::io::{IoMatrix, LayerPhi};
use crate::kinematics::{ModeContext, Polarization, Side};

pub type C2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Input commutators below this multiple of 1/|beta| count as evanescent.
pub const BOSONIC_FLOOR: f64 = 1e-14;

/// Scalar products of the polarization vectors of one region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolProducts {
    /// e+ . e-  (bilinear)
    pub pm: Complex64,
    /// e+ . e+*  (= e- . e-*)
    pub pp_conj: f64,
    /// e+ . e-*  (= e- . e+*)
    pub pm_conj: f64,
    /// |e_z|^2
    pub ez2: f64,
}

pub fn pol_products(ctx: &ModeContext, j: usize, q: Polarization) -> PolProducts {
    match q {
        Polarization::S => PolProducts {
            pm: Complex64::new(1.0, 0.0),
            pp_conj: 1.0,
            pm_conj: 1.0,
            ez2: 0.0,
        },
        Polarization::P => {
            let r = &ctx.regions[j];
            let k2 = ctx.k * ctx.k;
            let b2 = r.beta.norm_sqr();
            let kj2 = r.kj.norm_sqr();
            PolProducts {
                pm: (k2 - r.beta * r.beta) / (r.kj * r.kj),
                pp_conj: (b2 + k2) / kj2,
                pm_conj: (k2 - b2) / kj2,
                ez2: k2 / kj2,
            }
        }
    }
}

fn side_region(ctx: &ModeContext, side: Side) -> usize {
    match side {
        Side::Zero => 0,
        Side::N => ctx.n(),
    }
}

/// Input commutator coefficient of one side.
pub fn c_in(ctx: &ModeContext, side: Side, q: Polarization) -> f64 {
    let j = side_region(ctx, side);
    let b = ctx.regions[j].beta;
    b.re / b.norm_sqr() * pol_products(ctx, j, q).pp_conj
}

/// Closed-form output commutator of one side. Depends on the stack only
/// through the reflection coefficient seen from that side.
pub fn c_out_closed(ctx: &ModeContext, ss: &ScatterSet, side: Side) -> f64 {
    let j = side_region(ctx, side);
    let r = match side {
        Side::Zero => ss.r0n,
        Side::N => ss.rn0,
    };
    let reg = &ctx.regions[j];
    let pp = pol_products(ctx, j, ss.q);
    let cin = c_in(ctx, side, ss.q);
    let loss = reg.eps.im / reg.eps.conj();
    let i = Complex64::i();
    let bracket = (pp.pm + 2.0 * r) * pp.pm_conj
        + pp.pp_conj
        + 2.0 * i * loss * pp.ez2 * (1.0 + pp.pm + 2.0 * r);
    cin * (r.norm_sqr() - (pp.pm + r).norm_sqr()) + (bracket / reg.beta).re
}

/// Closed-form commutator between the two output amplitudes, [out(0), out(n)^dagger].
pub fn cross_closed(ctx: &ModeContext, ss: &ScatterSet) -> Complex64 {
    let n = ctx.n();
    let q = ss.q;
    let (r0, rn) = (&ctx.regions[0], &ctx.regions[n]);
    let (p0, pn) = (pol_products(ctx, 0, q), pol_products(ctx, n, q));
    let tau = ss.t0n / r0.beta;
    let i = Complex64::i();
    let cin0 = c_in(ctx, Side::Zero, q);
    let cinn = c_in(ctx, Side::N, q);
    tau * pn.pm_conj + tau.conj() * p0.pm_conj
        + 2.0 * i * tau * (rn.eps.im / rn.eps.conj()) * pn.ez2
        - 2.0 * i * tau.conj() * (r0.eps.im / r0.eps) * p0.ez2
        - cin0 * p0.pm * r0.beta.conj() * tau.conj()
        - cinn * pn.pm.conj() * rn.beta * tau
}

/// Commutator matrix of the intraplate amplitudes (+, -) of layer j.
pub fn intraplate_matrix(ctx: &ModeContext, j: usize, q: Polarization) -> C2 {
    let reg = &ctx.regions[j];
    let (bp, bpp, d) = (reg.beta.re, reg.beta.im, reg.d);
    let b2 = reg.beta.norm_sqr();
    let pp = pol_products(ctx, j, q);
    let i = Complex64::i();
    let cpp = bp / b2 * (2.0 * bpp * d).exp_m1() * pp.pp_conj;
    let cmm = -bp / b2 * (-2.0 * bpp * d).exp_m1() * pp.pp_conj;
    let cpm = i * (bpp / b2) * ((-2.0 * i * bp * d).exp() - 1.0) * pp.pm_conj;
    [[Complex64::new(cpp, 0.0), cpm], [cpm.conj(), Complex64::new(cmm, 0.0)]]
}

/// Real factors xi_(+,-) and the 2x2 matrix tau with tau tau^dagger = C.
pub fn xi_tau(ctx: &ModeContext, j: usize, q: Polarization) -> Result<([f64; 2], C2)> {
    let reg = &ctx.regions[j];
    let (bp, bpp, d) = (reg.beta.re, reg.beta.im, reg.d);
    let pp = pol_products(ctx, j, q);
    let even = bp * (bpp * d).sinh() * pp.pp_conj;
    let odd = bpp * (bp * d).sin() * pp.pm_conj;
    let pref = 2.0 / reg.beta.norm() * (-0.5 * bpp * d).exp();
    let mut xi = [0.0; 2];
    for (slot, rad) in xi.iter_mut().zip([even + odd, even - odd]) {
        if rad < 0.0 {
            if rad < -1e-12 * even.abs() {
                return Err(Error::NotPsd { layer: j, value: rad });
            }
            *slot = 0.0;
        } else {
            *slot = pref * rad.sqrt();
        }
    }
    let ph = (-Complex64::i() * reg.beta * d).exp();
    let tau = [
        [0.5 * xi[0] * ph, 0.5 * xi[1] * ph],
        [Complex64::new(0.5 * xi[0], 0.0), Complex64::new(-0.5 * xi[1], 0.0)],
    ];
    Ok((xi, tau))
}

/// Smallest eigenvalue of a 2x2 Hermitian matrix.
pub fn min_eigenvalue(c: &C2) -> f64 {
    let a = c[0][0].re;
    let d = c[1][1].re;
    let off = c[0][1].norm();
    0.5 * (a + d - ((a - d) * (a - d) + 4.0 * off * off).sqrt())
}

pub fn mul2(a: &C2, b: &C2) -> C2 {
    let mut m = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    m
}

pub fn adjoint2(a: &C2) -> C2 {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntraplateBlock {
    pub j: usize,
    pub c: C2,
    pub xi: [f64; 2],
    pub tau: C2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommutatorSet {
    pub q: Polarization,
    /// index 0: side 0, index 1: side n
    pub c_in: [f64; 2],
    pub c_out: [f64; 2],
    pub c_cross: Complex64,
    pub layers: Vec<IntraplateBlock>,
    /// 1/|beta| of the outer regions, the natural scale of the c-coefficients
    pub scale: [f64; 2],
}

impl CommutatorSet {
    pub fn side(&self, side: Side) -> (f64, f64) {
        match side {
            Side::Zero => (self.c_in[0], self.c_out[0]),
            Side::N => (self.c_in[1], self.c_out[1]),
        }
    }
}

pub fn commutator_set_from(ctx: &ModeContext, ss: &ScatterSet) -> Result<CommutatorSet> {
    let q = ss.q;
    let n = ctx.n();
    let layers = (1..n)
        .map(|j| {
            let (xi, tau) = xi_tau(ctx, j, q)?;
            Ok(IntraplateBlock {
                j,
                c: intraplate_matrix(ctx, j, q),
                xi,
                tau,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CommutatorSet {
        q,
        c_in: [c_in(ctx, Side::Zero, q), c_in(ctx, Side::N, q)],
        c_out: [c_out_closed(ctx, ss, Side::Zero), c_out_closed(ctx, ss, Side::N)],
        c_cross: cross_closed(ctx, ss),
        layers,
        scale: [1.0 / ctx.regions[0].beta.norm(), 1.0 / ctx.regions[n].beta.norm()],
    })
}

pub fn commutator_set(ctx: &ModeContext, q: Polarization) -> Result<CommutatorSet> {
    commutator_set_from(ctx, &scatter_set(ctx, q)?)
}

fn phi_c_phi(a: &[Complex64; 2], c: &C2, b: &[Complex64; 2]) -> Complex64 {
    let mut acc = ZERO;
    for l in 0..2 {
        for m in 0..2 {
            acc += a[l] * c[l][m] * b[m].conj();
        }
    }
    acc
}

/// Output commutator assembled term by term from the input and intraplate pieces.
pub fn assembled_c_out(cs: &CommutatorSet, io: &IoMatrix, side: Side) -> Complex64 {
    let row = match side {
        Side::Zero => 0,
        Side::N => 1,
    };
    let mut acc = Complex64::new(
        io.s[row][0].norm_sqr() * cs.c_in[0] + io.s[row][1].norm_sqr() * cs.c_in[1],
        0.0,
    );
    for (ph, blk) in io.phi.iter().zip(&cs.layers) {
        let r = ph.row(side);
        acc += phi_c_phi(&r, &blk.c, &r);
    }
    acc
}

/// Cross commutator [out(0), out(n)^dagger] assembled from the pieces.
pub fn assembled_cross(cs: &CommutatorSet, io: &IoMatrix) -> Complex64 {
    let mut acc = cs.c_in[0] * io.s[0][0] * io.s[1][0].conj() + cs.c_in[1] * io.s[0][1] * io.s[1][1].conj();
    for (ph, blk) in io.phi.iter().zip(&cs.layers) {
        acc += phi_c_phi(&ph.zero, &blk.c, &ph.n);
    }
    acc
}

/// Input-output relation in terms of bosonic operators.
#[derive(Debug, Clone, PartialEq)]
pub struct Bosonized {
    pub q: Polarization,
    pub r0n: Complex64,
    pub tn0: Complex64,
    pub t0n: Complex64,
    pub rn0: Complex64,
    pub phi: Vec<LayerPhi>,
}

impl Bosonized {
    pub fn s_matrix(&self) -> C2 {
        [[self.r0n, self.tn0], [self.t0n, self.rn0]]
    }
}

pub fn bosonize(cs: &CommutatorSet, io: &IoMatrix) -> Result<Bosonized> {
    for (k, side) in [Side::Zero, Side::N].into_iter().enumerate() {
        let (cin, cout) = cs.side(side);
        if !(cin > BOSONIC_FLOOR * cs.scale[k]) {
            return Err(Error::NoBosonicInput { side, c_in: cin });
        }
        if !(cout > 0.0) {
            return Err(Error::NonPositiveOutput { side, c_out: cout });
        }
    }
    let [ci0, cin] = cs.c_in;
    let [co0, con] = cs.c_out;
    let (f0, fn_) = (co0.sqrt().recip(), con.sqrt().recip());
    let phi = io
        .phi
        .iter()
        .zip(&cs.layers)
        .map(|(ph, blk)| {
            let mix = |row: &[Complex64; 2], f: f64| -> [Complex64; 2] {
                [
                    f * (row[0] * blk.tau[0][0] + row[1] * blk.tau[1][0]),
                    f * (row[0] * blk.tau[0][1] + row[1] * blk.tau[1][1]),
                ]
            };
            LayerPhi {
                j: ph.j,
                zero: mix(&ph.zero, f0),
                n: mix(&ph.n, fn_),
            }
        })
        .collect();
    Ok(Bosonized {
        q: cs.q,
        r0n: (ci0 / co0).sqrt() * io.r0n(),
        tn0: (cin / co0).sqrt() * io.tn0(),
        t0n: (ci0 / con).sqrt() * io.t0n(),
        rn0: (cin / con).sqrt() * io.rn0(),
        phi,
    })
}

/// S~ S~^dagger + sum_j Phi~ Phi~^dagger.
pub fn unitarity_matrix(b: &Bosonized) -> C2 {
    let s = b.s_matrix();
    let mut u = mul2(&s, &adjoint2(&s));
    for ph in &b.phi {
        let p = [ph.zero, ph.n];
        for i in 0..2 {
            for j in 0..2 {
                u[i][j] += p[i][0] * p[j][0].conj() + p[i][1] * p[j][1].conj();
            }
        }
    }
    u
}

/// Value the unitarity sum must take: unit diagonal, and off-diagonal
/// c_cross / sqrt(c_out(0) c_out(n)), which vanishes for lossless outer media.
pub fn unitarity_target(cs: &CommutatorSet) -> C2 {
    let off = cs.c_cross / (cs.c_out[0] * cs.c_out[1]).sqrt();
    [[Complex64::new(1.0, 0.0), off], [off.conj(), Complex64::new(1.0, 0.0)]]
}

/// max |S~ S~^dagger + sum Phi~ Phi~^dagger - target| with the target of [`unitarity_target`].
pub fn unitarity_defect(b: &Bosonized, cs: &CommutatorSet) -> f64 {
    let u = unitarity_matrix(b);
    let t = unitarity_target(cs);
    let mut worst = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            worst = worst.max((u[i][j] - t[i][j]).norm());
        }
    }
    worst
}

/// max |S~ S~^dagger + sum Phi~ Phi~^dagger - I|
pub fn unitarity_residual(b: &Bosonized) -> f64 {
    let u = unitarity_matrix(b);
    let mut worst = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            let id = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((u[i][j] - id).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::C0;
    use crate::io::IoMatrix;
    use crate::stack::Stack;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn vacuum_propagating_in_equals_out() {
        let k0 = 1e7;
        let ctx = ModeContext::new(&Stack::vacuum(), k0 * C0, 0.3 * k0).unwrap();
        for q in Polarization::BOTH {
            let cs = commutator_set(&ctx, q).unwrap();
            let expect = 1.0 / ctx.beta(0).re;
            assert!((cs.c_in[0] - expect).abs() < 1e-12 * expect);
            assert!((cs.c_out[0] - expect).abs() < 1e-12 * expect);
            assert!(cs.c_cross.norm() < 1e-12 * expect);
        }
    }

    #[test]
    fn lossless_layer_has_no_noise() {
        let s = Stack::slab(c(2.25, 0.0), 3e-7, c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        let ctx = ModeContext::new(&s, 2e15, 1e6).unwrap();
        for q in Polarization::BOTH {
            let m = intraplate_matrix(&ctx, 1, q);
            assert_eq!(m[0][0], ZERO);
            assert_eq!(m[1][1], ZERO);
            assert_eq!(m[0][1], ZERO);
        }
    }

    #[test]
    fn tau_reconstructs_c() {
        let s = Stack::slab(c(3.0, 0.7), 4e-7, c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        let ctx = ModeContext::new(&s, 3e15, 2e7).unwrap();
        for q in Polarization::BOTH {
            let cm = intraplate_matrix(&ctx, 1, q);
            let (_, tau) = xi_tau(&ctx, 1, q).unwrap();
            let rec = mul2(&tau, &adjoint2(&tau));
            let scale = cm[0][0].norm();
            for i in 0..2 {
                for j in 0..2 {
                    assert!((rec[i][j] - cm[i][j]).norm() < 1e-12 * scale);
                }
            }
        }
    }

    #[test]
    fn evanescent_vacuum_guard() {
        let k0 = 1e7;
        let s = Stack::slab(c(2.0, 0.5), 1e-7, c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        let ctx = ModeContext::new(&s, k0 * C0, 1.5 * k0).unwrap();
        let ss = scatter_set(&ctx, Polarization::S).unwrap();
        let cs = commutator_set_from(&ctx, &ss).unwrap();
        assert_eq!(cs.c_in, [0.0, 0.0]);
        let io = IoMatrix::from_scatter(&ss);
        assert!(matches!(bosonize(&cs, &io), Err(Error::NoBosonicInput { .. })));
    }
}
