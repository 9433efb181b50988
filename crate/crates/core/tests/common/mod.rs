#![allow(dead_code)]

use iorel::Stack;
use num_complex::Complex64;
use rand::Rng;

pub const OMEGA: f64 = 2.0e15;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn k0() -> f64 {
    OMEGA / iorel::constants::C0
}

/// Random stack with 1 to 5 interior layers and vacuum or random outer media.
pub fn random_stack<R: Rng>(rng: &mut R, vacuum_clad: bool) -> Stack {
    let layers: Vec<(Complex64, f64)> = (0..rng.gen_range(1..=5))
        .map(|_| {
            let eps = c(rng.gen_range(1.0..6.0), rng.gen_range(0.0..1.0));
            (eps, rng.gen_range(2e-8..4e-7))
        })
        .collect();
    let outer = |rng: &mut R| {
        if vacuum_clad {
            c(1.0, 0.0)
        } else {
            c(rng.gen_range(1.0..4.0), rng.gen_range(0.0..0.5))
        }
    };
    let e0 = outer(rng);
    let en = outer(rng);
    Stack::from_constants(e0, &layers, en).unwrap()
}

pub fn rel(a: Complex64, b: Complex64, scale: f64) -> f64 {
    (a - b).norm() / scale
}
