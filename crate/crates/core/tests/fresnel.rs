mod common;

use common::*;
use iorel::fresnel::scatter_set;
use iorel::kinematics::{ModeContext, Polarization};
use iorel::Stack;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Interface coefficients written out independently: s uses beta, p uses eps-weighted beta.
fn interface(q: Polarization, ei: Complex64, ej: Complex64, bi: Complex64, bj: Complex64, k0: f64) -> (Complex64, Complex64) {
    match q {
        Polarization::S => ((bi - bj) / (bi + bj), 2.0 * bi / (bi + bj)),
        Polarization::P => {
            let den = ej * bi + ei * bj;
            let ki = ei.sqrt() * k0;
            let kj = ej.sqrt() * k0;
            ((ej * bi - ei * bj) / den, 2.0 * bi * ki * kj / (k0 * k0) / den)
        }
    }
}

fn beta(eps: Complex64, k0: f64, k: f64) -> Complex64 {
    let b = (eps * k0 * k0 - k * k).sqrt();
    if b.im < 0.0 {
        -b
    } else {
        b
    }
}

/// Airy formula for one layer between two half-spaces.
fn airy(q: Polarization, e0: Complex64, e1: Complex64, e2: Complex64, d: f64, k: f64) -> (Complex64, Complex64) {
    let k0 = k0();
    let (b0, b1, b2) = (beta(e0, k0, k), beta(e1, k0, k), beta(e2, k0, k));
    let (r01, t01) = interface(q, e0, e1, b0, b1, k0);
    let (r12, t12) = interface(q, e1, e2, b1, b2, k0);
    let ph = (Complex64::i() * b1 * d).exp();
    let den = 1.0 + r01 * r12 * ph * ph;
    ((r01 + r12 * ph * ph) / den, t01 * t12 * ph / den)
}

#[test]
fn quarter_wave_slab() {
    let k0 = k0();
    let d = std::f64::consts::PI / 2.0 / (2.0 * k0);
    let s = Stack::slab(c(4.0, 0.0), d, c(1.0, 0.0), c(1.0, 0.0)).unwrap();
    let ctx = ModeContext::new(&s, OMEGA, 0.0).unwrap();
    for q in Polarization::BOTH {
        let ss = scatter_set(&ctx, q).unwrap();
        assert!((ss.r0n.norm() - 0.6).abs() < 1e-12);
        assert!((ss.t0n.norm_sqr() - 0.64).abs() < 1e-12);
    }
}

#[test]
fn single_layer_matches_airy_formula() {
    let cases = [
        (c(1.0, 0.0), c(2.5, 0.3), c(1.7, 0.0), 2.3e-7, 0.4),
        (c(1.0, 0.0), c(4.0, 0.0), c(2.25, 0.1), 1.1e-7, 1.3),
        (c(1.5, 0.02), c(2.0, 0.8), c(1.0, 0.0), 3.0e-7, 0.9),
        (c(1.0, 0.0), c(3.0, 0.0), c(1.0, 0.0), 5.0e-7, 1.5),
    ];
    for (e0, e1, e2, d, kf) in cases {
        let s = Stack::slab(e1, d, e0, e2).unwrap();
        let k = kf * k0();
        let ctx = ModeContext::new(&s, OMEGA, k).unwrap();
        for q in Polarization::BOTH {
            let ss = scatter_set(&ctx, q).unwrap();
            let (r, t) = airy(q, e0, e1, e2, d, k);
            assert!((ss.r0n - r).norm() < 1e-12 * r.norm().max(1.0), "{q} r {} vs {r}", ss.r0n);
            assert!((ss.t0n - t).norm() < 1e-12 * t.norm().max(1.0), "{q} t {} vs {t}", ss.t0n);
            let (rr, _) = airy(q, e2, e1, e0, d, k);
            assert!((ss.rn0 - rr).norm() < 1e-12 * rr.norm().max(1.0));
        }
    }
}

#[test]
fn splitting_a_layer_changes_nothing() {
    let whole = Stack::from_constants(c(1.0, 0.0), &[(c(2.0, 0.3), 3e-7), (c(5.0, 0.0), 1e-7)], c(2.0, 0.0)).unwrap();
    let split = Stack::from_constants(
        c(1.0, 0.0),
        &[(c(2.0, 0.3), 1.2e-7), (c(2.0, 0.3), 1.8e-7), (c(5.0, 0.0), 1e-7)],
        c(2.0, 0.0),
    )
    .unwrap();
    for kf in [0.0, 0.7, 1.2, 3.0] {
        let a = ModeContext::new(&whole, OMEGA, kf * k0()).unwrap();
        let b = ModeContext::new(&split, OMEGA, kf * k0()).unwrap();
        for q in Polarization::BOTH {
            let (x, y) = (scatter_set(&a, q).unwrap(), scatter_set(&b, q).unwrap());
            for (u, v) in [(x.r0n, y.r0n), (x.t0n, y.t0n), (x.rn0, y.rn0), (x.tn0, y.tn0)] {
                assert!((u - v).norm() < 1e-12 * u.norm().max(1.0), "k={kf} {q}");
            }
        }
    }
}

#[test]
fn transmission_reciprocity() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let s = random_stack(&mut rng, false);
        let kf: f64 = rand::Rng::gen_range(&mut rng, 0.0..3.0);
        let ctx = ModeContext::new(&s, OMEGA, kf * k0()).unwrap();
        for q in Polarization::BOTH {
            let ss = scatter_set(&ctx, q).unwrap();
            let lhs = ss.tn0 * ctx.beta(0);
            let rhs = ss.t0n * ctx.beta(ctx.n());
            assert!((lhs - rhs).norm() <= 1e-10 * lhs.norm().max(rhs.norm()));
        }
    }
}

#[test]
fn reversed_stack_swaps_sides() {
    let fwd = Stack::from_constants(c(1.2, 0.0), &[(c(2.0, 0.3), 1e-7), (c(3.5, 0.1), 2e-7)], c(2.0, 0.05)).unwrap();
    let rev = Stack::from_constants(c(2.0, 0.05), &[(c(3.5, 0.1), 2e-7), (c(2.0, 0.3), 1e-7)], c(1.2, 0.0)).unwrap();
    let a = ModeContext::new(&fwd, OMEGA, 0.8 * k0()).unwrap();
    let b = ModeContext::new(&rev, OMEGA, 0.8 * k0()).unwrap();
    for q in Polarization::BOTH {
        let (x, y) = (scatter_set(&a, q).unwrap(), scatter_set(&b, q).unwrap());
        assert!((x.r0n - y.rn0).norm() < 1e-12);
        assert!((x.t0n - y.tn0).norm() < 1e-12);
    }
}

#[test]
fn stable_and_product_forms_of_xi_agree() {
    let s = Stack::from_constants(c(1.0, 0.0), &[(c(2.0, 0.3), 1e-7), (c(4.0, 0.0), 1.5e-7), (c(2.5, 0.6), 8e-8)], c(1.5, 0.0)).unwrap();
    let ctx = ModeContext::new(&s, OMEGA, 0.6 * k0()).unwrap();
    for q in Polarization::BOTH {
        let ss = scatter_set(&ctx, q).unwrap();
        for j in 1..4 {
            for jp in 0..=j {
                let (a, b) = (ss.xi(j, jp), ss.xi_product_form(j, jp));
                assert!((a - b).norm() < 1e-11 * a.norm(), "({j},{jp}) {a} vs {b}");
            }
        }
    }
}

#[test]
fn normal_incidence_polarizations_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let s = random_stack(&mut rng, false);
        let ctx = ModeContext::new(&s, OMEGA, 0.0).unwrap();
        let (a, b) = (scatter_set(&ctx, Polarization::S).unwrap(), scatter_set(&ctx, Polarization::P).unwrap());
        for (u, v) in [(a.r0n, b.r0n), (a.t0n, b.t0n), (a.rn0, b.rn0), (a.tn0, b.tn0)] {
            assert!((u.norm() - v.norm()).abs() < 1e-12);
        }
    }
}

#[test]
fn thick_absorber_does_not_overflow() {
    let s = Stack::slab(c(2.0, 1.0), 1e-3, c(1.0, 0.0), c(1.0, 0.0)).unwrap();
    let ctx = ModeContext::new(&s, OMEGA, 0.5 * k0()).unwrap();
    for q in Polarization::BOTH {
        let ss = scatter_set(&ctx, q).unwrap();
        assert!(ss.r0n.is_finite() && ss.t0n.norm() < 1e-100);
        assert!(ss.xi(1, 0).is_finite());
    }
}
