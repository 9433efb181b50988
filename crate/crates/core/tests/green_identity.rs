use iorel::green::{max_abs_diff, transpose, Green, OuterTreatment, QuadratureSpec};
use iorel::kinematics::ModeContext;
use iorel::{Error, Stack};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

const OMEGA: f64 = 2.0e15;

fn absorbing_slab(outer_im: f64) -> Stack {
    Stack::slab(c(2.0, 0.2), 2.0e-7, c(1.0, outer_im), c(1.0, outer_im)).unwrap()
}

fn residual(stack: &Stack, k_frac: f64, nodes: usize, j: usize, jp: usize, z: f64, zp: f64) -> f64 {
    let k0 = OMEGA / iorel::constants::C0;
    let ctx = ModeContext::new(stack, OMEGA, k_frac * k0).unwrap();
    let g = Green::new(&ctx).unwrap();
    g.verify_identity(
        j,
        jp,
        z,
        zp,
        QuadratureSpec {
            nodes_per_layer: nodes,
            outer: OuterTreatment::Analytic,
        },
    )
    .unwrap()
    .residual
}

#[test]
fn identity_holds_at_the_left_surface() {
    let r = residual(&absorbing_slab(0.01), 0.5, 200, 0, 0, 0.0, 0.0);
    eprintln!("residual {r:e}");
    assert!(r < 1e-6, "{r:e}");
}

#[test]
fn identity_holds_for_mixed_regions() {
    let s = absorbing_slab(0.01);
    for (k, j, jp, z, zp) in [
        (0.3, 1, 1, 5e-8, 1.5e-7),
        (0.8, 0, 2, -1e-7, 2e-7),
        (1.4, 1, 0, 1e-7, -3e-8),
        (2.5, 2, 2, 1e-8, 4e-8),
    ] {
        let r = residual(&s, k, 400, j, jp, z, zp);
        eprintln!("k={k} ({j},{jp}) residual {r:e}");
        assert!(r < 1e-6, "k={k} ({j},{jp}): {r:e}");
    }
}

#[test]
fn convergence_order_under_node_doubling() {
    let s = absorbing_slab(0.01);
    let reference = residual(&s, 0.5, 3200, 0, 0, 0.0, 0.0);
    let coarse: Vec<f64> = [25, 50, 100].iter().map(|&n| residual(&s, 0.5, n, 0, 0, 0.0, 0.0)).collect();
    eprintln!("reference {reference:e} coarse {coarse:?}");
    for w in coarse.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!(order > 1.8, "observed order {order}");
    }
}

#[test]
fn stronger_outer_loss_reduces_residual() {
    let weak = residual(&absorbing_slab(0.01), 0.5, 100, 0, 0, 0.0, 0.0);
    let strong = residual(&absorbing_slab(0.1), 0.5, 100, 0, 0, 0.0, 0.0);
    eprintln!("weak {weak:e} strong {strong:e}");
    assert!(strong <= weak);
}

#[test]
fn homogeneous_lossy_space() {
    let s = Stack::from_constants(c(1.0, 0.01), &[], c(1.0, 0.01)).unwrap();
    let r = residual(&s, 0.5, 200, 0, 1, -1e-7, 2e-7);
    assert!(r < 1e-8, "{r:e}");
}

#[test]
fn lossless_outer_medium_is_rejected() {
    let s = absorbing_slab(0.0);
    let ctx = ModeContext::new(&s, OMEGA, 1e6).unwrap();
    let g = Green::new(&ctx).unwrap();
    let spec = QuadratureSpec {
        nodes_per_layer: 50,
        outer: OuterTreatment::Analytic,
    };
    assert!(matches!(g.verify_identity(0, 0, 0.0, 0.0, spec), Err(Error::NonAbsorbingOuter(_))));
}

#[test]
fn reciprocity_under_k_reversal() {
    let s = Stack::from_constants(c(1.0, 0.0), &[(c(2.0, 0.3), 1.5e-7), (c(3.1, 0.0), 8e-8)], c(1.7, 0.05)).unwrap();
    let k0 = OMEGA / iorel::constants::C0;
    let ctx = ModeContext::with_direction(&s, OMEGA, 0.7 * k0, [0.6, 0.8]).unwrap();
    let rev = ctx.reversed();
    let g = Green::new(&ctx).unwrap();
    let gr = Green::new(&rev).unwrap();
    for (j, jp, z, zp) in [(0, 3, -1e-7, 2e-7), (1, 2, 3e-8, 5e-8), (2, 2, 1e-8, 6e-8), (3, 1, 4e-8, 1e-7)] {
        let a = g.kernel(j, jp, z, zp).unwrap();
        let b = transpose(&gr.kernel(jp, j, zp, z).unwrap());
        let scale = iorel::green::max_abs(&a);
        assert!(max_abs_diff(&a, &b) <= 1e-12 * scale, "({j},{jp})");
    }
}
