mod common;

use common::*;
use iorel::kinematics::{ModeContext, Polarization, Side};
use iorel::sampler::{discrete_expectation, sample_emission, with_worker_count, SamplePlan};
use iorel::thermal::{bose, emission_w, kirchhoff};
use iorel::{Error, Stack};

fn slab() -> Stack {
    Stack::slab(c(2.0, 0.5), 2e-7, c(1.0, 0.0), c(1.0, 0.0)).unwrap()
}

#[test]
fn kirchhoff_balance_over_propagating_grid() {
    let s = slab();
    for i in 0..50 {
        let k = 0.99 * k0() * i as f64 / 50.0;
        let ctx = ModeContext::new(&s, OMEGA, k).unwrap();
        for q in Polarization::BOTH {
            let rep = kirchhoff(&ctx, q, 300.0).unwrap();
            assert!(rep.worst_balance() < 1e-8, "k={k} {q}: {:?}", rep.balance);
        }
    }
}

#[test]
fn kirchhoff_with_unequal_outer_media() {
    let s = Stack::from_constants(c(1.0, 0.0), &[(c(2.0, 0.5), 2e-7), (c(3.0, 0.1), 1e-7)], c(2.25, 0.0)).unwrap();
    for kf in [0.0, 0.5, 0.9] {
        let ctx = ModeContext::new(&s, OMEGA, kf * k0()).unwrap();
        for q in Polarization::BOTH {
            assert!(kirchhoff(&ctx, q, 500.0).unwrap().worst_balance() < 1e-8);
        }
    }
}

#[test]
fn kirchhoff_rejects_evanescent_modes() {
    let ctx = ModeContext::new(&slab(), OMEGA, 1.5 * k0()).unwrap();
    assert!(matches!(kirchhoff(&ctx, Polarization::S, 300.0), Err(Error::Regime(_))));
}

#[test]
fn lossless_and_cold_emit_nothing() {
    let lossless = Stack::slab(c(2.0, 0.0), 2e-7, c(1.0, 0.0), c(1.0, 0.0)).unwrap();
    let ctx = ModeContext::new(&lossless, OMEGA, 0.3 * k0()).unwrap();
    assert_eq!(emission_w(&ctx, Polarization::P, 300.0, Side::Zero).unwrap(), 0.0);
    let ctx = ModeContext::new(&slab(), OMEGA, 0.3 * k0()).unwrap();
    assert_eq!(emission_w(&ctx, Polarization::P, 0.0, Side::N).unwrap(), 0.0);
}

#[test]
fn evanescent_emission_is_positive() {
    let ctx = ModeContext::new(&slab(), OMEGA, 1.7 * k0()).unwrap();
    for q in Polarization::BOTH {
        assert!(emission_w(&ctx, q, 300.0, Side::Zero).unwrap() > 0.0);
    }
}

fn plan(n: usize) -> SamplePlan {
    SamplePlan {
        omega: OMEGA,
        k: 0.4 * k0(),
        q: Polarization::P,
        temperature: 3000.0,
        side: Side::Zero,
        nodes_per_layer: 64,
        realizations: n,
        seed: 0x5eed,
    }
}

#[test]
fn monte_carlo_reproduces_closed_form() {
    let s = slab();
    let p = plan(100_000);
    let est = sample_emission(&s, &p).unwrap();
    let ctx = ModeContext::new(&s, p.omega, p.k).unwrap();
    let w = emission_w(&ctx, p.q, p.temperature, p.side).unwrap();
    assert!((est.mean - w).abs() < 3.0 * est.std_error, "{} vs {w} (se {})", est.mean, est.std_error);
    assert!(bose(p.omega, p.temperature) > 0.0);
}

#[test]
fn monte_carlo_evanescent_side_n() {
    let s = Stack::from_constants(c(1.0, 0.0), &[(c(2.0, 0.5), 1e-7), (c(3.0, 0.2), 1.5e-7)], c(1.0, 0.0)).unwrap();
    let p = SamplePlan { k: 1.3 * k0(), q: Polarization::S, side: Side::N, realizations: 40_000, ..plan(1) };
    let est = sample_emission(&s, &p).unwrap();
    let ctx = ModeContext::new(&s, p.omega, p.k).unwrap();
    let w = emission_w(&ctx, p.q, p.temperature, p.side).unwrap();
    assert!((est.mean - w).abs() < 3.0 * est.std_error, "{} vs {w}", est.mean);
}

#[test]
fn standard_error_scales_as_inverse_root_n() {
    let s = slab();
    let a = sample_emission(&s, &plan(20_000)).unwrap();
    let b = sample_emission(&s, &SamplePlan { seed: 99, ..plan(80_000) }).unwrap();
    let ratio = a.std_error / b.std_error;
    assert!((ratio - 2.0).abs() < 0.4, "ratio {ratio}");
}

#[test]
fn identical_results_for_any_worker_count() {
    let s = slab();
    let p = plan(5_000);
    let one = with_worker_count(Some(1), || sample_emission(&s, &p).unwrap());
    let four = with_worker_count(Some(4), || sample_emission(&s, &p).unwrap());
    assert_eq!(one.mean.to_bits(), four.mean.to_bits());
    assert_eq!(one.std_error.to_bits(), four.std_error.to_bits());
}

#[test]
fn midpoint_bias_is_below_statistical_error() {
    let s = slab();
    let ctx = ModeContext::new(&s, OMEGA, 0.4 * k0()).unwrap();
    let w = emission_w(&ctx, Polarization::P, 3000.0, Side::Zero).unwrap();
    let p = plan(100_000);
    let se = sample_emission(&s, &p).unwrap().std_error;
    let mut last = f64::INFINITY;
    for nodes in [8, 16, 32, 64, 128] {
        let bias = (discrete_expectation(&s, &SamplePlan { nodes_per_layer: nodes, ..p.clone() }).unwrap() - w).abs();
        assert!(bias < last, "bias must shrink with refinement");
        last = bias;
        if nodes >= 64 {
            assert!(bias < se, "{nodes} nodes: bias {bias:e}, se {se:e}");
        }
    }
}
