mod common;

use common::*;
use iorel::commutators::{
    adjoint2, assembled_c_out, assembled_cross, bosonize, commutator_set_from, min_eigenvalue, mul2, unitarity_defect,
    unitarity_residual,
};
use iorel::fresnel::scatter_set;
use iorel::io::IoMatrix;
use iorel::kinematics::{ModeContext, Polarization, Side};
use iorel::{Error, Stack};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sets(stack: &Stack, k: f64, q: Polarization) -> (ModeContext, iorel::commutators::CommutatorSet, IoMatrix) {
    let ctx = ModeContext::new(stack, OMEGA, k).unwrap();
    let ss = scatter_set(&ctx, q).unwrap();
    let cs = commutator_set_from(&ctx, &ss).unwrap();
    (ctx, cs, IoMatrix::from_scatter(&ss))
}

#[test]
fn closed_output_commutators_match_assembly() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..2000 {
        let s = random_stack(&mut rng, trial % 3 == 0);
        let k = rng.gen_range(0.0..3.0) * k0();
        for q in Polarization::BOTH {
            let (_, cs, io) = sets(&s, k, q);
            for (i, side) in [Side::Zero, Side::N].into_iter().enumerate() {
                let asm = assembled_c_out(&cs, &io, side);
                let scale = cs.scale[i].max(asm.norm());
                assert!(rel(asm, cs.c_out[i].into(), scale) < 1e-10, "trial {trial} {q} {side}: {} vs {asm}", cs.c_out[i]);
            }
            let asm = assembled_cross(&cs, &io);
            let scale = (cs.scale[0] * cs.scale[1]).sqrt().max(asm.norm());
            assert!(rel(asm, cs.c_cross, scale) < 1e-10, "trial {trial} {q} cross: {} vs {asm}", cs.c_cross);
        }
    }
}

#[test]
fn vacuum_propagating_limits() {
    let s = Stack::slab(c(2.0, 0.5), 2e-7, c(1.0, 0.0), c(1.0, 0.0)).unwrap();
    for i in 0..40 {
        let k = 0.99 * k0() * i as f64 / 40.0;
        for q in Polarization::BOTH {
            let (_, cs, _) = sets(&s, k, q);
            for side in 0..2 {
                assert!((cs.c_out[side] - cs.c_in[side]).abs() < 1e-12 * cs.c_in[side]);
            }
            assert!(cs.c_cross.norm() < 1e-12 * cs.c_in[0]);
        }
    }
}

#[test]
fn evanescent_vacuum_output_from_reflection() {
    let s = Stack::from_constants(c(1.0, 0.0), &[(c(3.0, 0.4), 1.2e-7), (c(2.0, 0.0), 6e-8)], c(1.0, 0.0)).unwrap();
    for kf in [1.01, 1.3, 1.6, 2.5, 4.0] {
        for q in Polarization::BOTH {
            let (ctx, cs, io) = sets(&s, kf * k0(), q);
            assert_eq!(cs.c_in, [0.0, 0.0]);
            let want = 2.0 * io.r0n().im / ctx.beta(0).norm();
            assert!((cs.c_out[0] - want).abs() < 1e-10 * want.abs(), "{kf} {q}");
        }
    }
    let lossless = Stack::slab(c(3.0, 0.0), 1e-7, c(1.0, 0.0), c(1.0, 0.0)).unwrap();
    let (_, cs, _) = sets(&lossless, 1.4 * k0(), Polarization::P);
    assert!(cs.c_out[0].abs() < 1e-12 && cs.c_cross.norm() < 1e-12);
}

#[test]
fn lossless_layers_carry_no_noise() {
    let s = Stack::slab(c(2.25, 0.0), 3e-7, c(1.0, 0.0), c(1.0, 0.0)).unwrap();
    let (_, cs, _) = sets(&s, 0.5 * k0(), Polarization::P);
    let zero = c(0.0, 0.0);
    assert_eq!(cs.layers[0].c, [[zero, zero], [zero, zero]]);
}

#[test]
fn intraplate_blocks_are_psd_and_factorized() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..500 {
        let s = random_stack(&mut rng, false);
        let k = rng.gen_range(0.0..3.0) * k0();
        for q in Polarization::BOTH {
            let (_, cs, _) = sets(&s, k, q);
            for blk in &cs.layers {
                let tr = blk.c[0][0].re + blk.c[1][1].re;
                assert!(min_eigenvalue(&blk.c) >= -1e-14 * tr);
                let tt = mul2(&blk.tau, &adjoint2(&blk.tau));
                for a in 0..2 {
                    for b in 0..2 {
                        assert!((tt[a][b] - blk.c[a][b]).norm() <= 1e-10 * tr.max(f64::MIN_POSITIVE));
                    }
                }
            }
        }
    }
}

#[test]
fn lossless_slab_is_unitary() {
    let s = Stack::slab(c(2.25, 0.0), 3e-7, c(1.0, 0.0), c(1.0, 0.0)).unwrap();
    for i in 0..30 {
        let k = 0.98 * k0() * i as f64 / 30.0;
        for q in Polarization::BOTH {
            let (_, cs, io) = sets(&s, k, q);
            let b = bosonize(&cs, &io).unwrap();
            assert!(unitarity_residual(&b) < 1e-12);
        }
    }
}

#[test]
fn absorbing_clad_unitarity_with_cross_term() {
    let s = Stack::from_constants(c(1.5, 0.1), &[(c(2.0, 0.5), 2e-7)], c(2.2, 0.05)).unwrap();
    for kf in [0.0, 0.4, 1.1, 1.6] {
        for q in Polarization::BOTH {
            let (_, cs, io) = sets(&s, kf * k0(), q);
            let b = bosonize(&cs, &io).unwrap();
            assert!(unitarity_defect(&b, &cs) < 1e-10, "{kf} {q}");
            assert!((b.r0n.norm() - io.r0n().norm()).abs() > 1e-6);
        }
    }
}

#[test]
fn evanescent_vacuum_has_no_bosonic_inputs() {
    let s = Stack::slab(c(2.0, 0.5), 2e-7, c(1.0, 0.0), c(1.0, 0.0)).unwrap();
    let (_, cs, io) = sets(&s, 1.5 * k0(), Polarization::S);
    assert!(matches!(bosonize(&cs, &io), Err(Error::NoBosonicInput { side: Side::Zero, .. })));
}

#[test]
fn empty_stack_is_exactly_unitary() {
    let (_, cs, io) = sets(&Stack::vacuum(), 0.3 * k0(), Polarization::P);
    assert_eq!(unitarity_residual(&bosonize(&cs, &io).unwrap()), 0.0);
}
