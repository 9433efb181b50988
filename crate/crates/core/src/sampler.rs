//! Monte Carlo estimate of thermal emission from sampled Langevin noise.
//!
//! Each layer is cut into equal cells. Every cell carries a complex circular
//! Gaussian noise vector with variance n(omega, T)/dz per Cartesian component,
//! the discrete stand-in for a delta-correlated normally ordered source. The
//! layer amplitudes are midpoint-rule sums of the source against exp(-+ i beta z)
//! and the outputs follow from the noise couplings with the inputs set to zero.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fresnel::scatter_set;
use crate::io::IoMatrix;
use crate::kinematics::{Dir, ModeContext, Polarization, Side, Vec3};
use crate::stack::Stack;
use crate::thermal::bose;

/// Environment variable holding the worker count for parallel sections.
pub const WORKERS_ENV: &str = "IOREL_WORKERS";

#[derive(Debug, Clone, PartialEq)]
pub struct SamplePlan {
    pub omega: f64,
    pub k: f64,
    pub q: Polarization,
    pub temperature: f64,
    pub side: Side,
    /// z cells per interior layer
    pub nodes_per_layer: usize,
    pub realizations: usize,
    pub seed: u64,
}

impl SamplePlan {
    pub fn validate(&self) -> Result<()> {
        if self.realizations == 0 {
            return Err(Error::InvalidArgument("at least one realization is required".into()));
        }
        if self.nodes_per_layer < 2 {
            return Err(Error::InvalidArgument("at least two z nodes per layer are required".into()));
        }
        if !(self.temperature >= 0.0) || !self.temperature.is_finite() {
            return Err(Error::InvalidArgument(format!("temperature {} K", self.temperature)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub realizations: usize,
    pub warnings: Vec<String>,
}

/// Number of workers requested through [`WORKERS_ENV`], if set and valid.
pub fn requested_workers() -> Option<usize> {
    std::env::var(WORKERS_ENV).ok()?.trim().parse().ok().filter(|n| *n > 0)
}

/// Run `f` inside a pool sized by [`WORKERS_ENV`] (rayon's default otherwise).
pub fn with_workers<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    with_worker_count(requested_workers(), f)
}

pub fn with_worker_count<R: Send>(workers: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        builder = builder.num_threads(n);
    }
    match builder.build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Pairwise summation; result depends only on the order of `xs`.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 16 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

struct Cells {
    /// per cell: combined output weight vector u_c
    weights: Vec<Vec3>,
    /// per cell: standard deviation of each real quadrature
    sigma: Vec<f64>,
}

fn build_cells(ctx: &ModeContext, io: &IoMatrix, plan: &SamplePlan, n_occ: f64, warnings: &mut Vec<String>) -> Result<Cells> {
    let k0 = ctx.k0();
    let i = Complex64::i();
    let mut weights = Vec::new();
    let mut sigma = Vec::new();
    for ph in &io.phi {
        let j = ph.j;
        let reg = &ctx.regions[j];
        if reg.eps.im <= 0.0 {
            warnings.push(format!("layer {j} is lossless and contributes no noise"));
            continue;
        }
        let dz = reg.d / plan.nodes_per_layer as f64;
        if !(dz > 0.0) || !dz.is_finite() {
            return Err(Error::InvalidArgument(format!("degenerate cell size {dz:e} m in layer {j}")));
        }
        let row = ph.row(plan.side);
        let ep = ctx.e_vec(j, plan.q, Dir::Plus);
        let em = ctx.e_vec(j, plan.q, Dir::Minus);
        let pref = k0 * reg.eps.im.sqrt() / reg.beta * dz;
        let sd = (n_occ / (2.0 * dz)).sqrt();
        for c in 0..plan.nodes_per_layer {
            let z = (c as f64 + 0.5) * dz;
            let wp = row[0] * pref * (-i * reg.beta * z).exp();
            let wm = row[1] * pref * (i * reg.beta * z).exp();
            let u = [
                wp * ep[0] + wm * em[0],
                wp * ep[1] + wm * em[1],
                wp * ep[2] + wm * em[2],
            ];
            weights.push(u);
            sigma.push(sd);
        }
    }
    Ok(Cells { weights, sigma })
}

fn one_realization(cells: &Cells, seed: u64, index: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let mut acc = Complex64::new(0.0, 0.0);
    for (u, &sd) in cells.weights.iter().zip(&cells.sigma) {
        for comp in u {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            acc += Complex64::new(re * sd, im * sd) * comp;
        }
    }
    acc.norm_sqr()
}

/// Sample-mean estimate of the emitted intensity on `plan.side` (same
/// normalization as [`crate::thermal::emission_w`]) and its standard error.
pub fn sample_emission(stack: &Stack, plan: &SamplePlan) -> Result<SampleEstimate> {
    plan.validate()?;
    let ctx = ModeContext::new(stack, plan.omega, plan.k)?;
    let io = IoMatrix::from_scatter(&scatter_set(&ctx, plan.q)?);
    let n_occ = bose(plan.omega, plan.temperature);
    let mut warnings = Vec::new();
    let cells = build_cells(&ctx, &io, plan, n_occ, &mut warnings)?;
    let n = plan.realizations;
    if n_occ == 0.0 || cells.weights.is_empty() {
        return Ok(SampleEstimate {
            mean: 0.0,
            std_error: 0.0,
            realizations: n,
            warnings,
        });
    }
    let samples: Vec<f64> = with_workers(|| {
        (0..n as u64)
            .into_par_iter()
            .map(|r| one_realization(&cells, plan.seed, r))
            .collect()
    });
    let mean = pairwise_sum(&samples) / n as f64;
    let dev: Vec<f64> = samples.iter().map(|x| (x - mean).powi(2)).collect();
    let var = if n > 1 { pairwise_sum(&dev) / (n - 1) as f64 } else { 0.0 };
    Ok(SampleEstimate {
        mean,
        std_error: (var / n as f64).sqrt(),
        realizations: n,
        warnings,
    })
}

/// Exact expectation of the discretized estimator (no sampling noise).
///
/// Its distance from the continuum emission is the midpoint-rule bias.
pub fn discrete_expectation(stack: &Stack, plan: &SamplePlan) -> Result<f64> {
    plan.validate()?;
    let ctx = ModeContext::new(stack, plan.omega, plan.k)?;
    let io = IoMatrix::from_scatter(&scatter_set(&ctx, plan.q)?);
    let n_occ = bose(plan.omega, plan.temperature);
    let cells = build_cells(&ctx, &io, plan, n_occ, &mut Vec::new())?;
    let terms: Vec<f64> = cells
        .weights
        .iter()
        .zip(&cells.sigma)
        .map(|(u, sd)| 2.0 * sd * sd * u.iter().map(|x| x.norm_sqr()).sum::<f64>())
        .collect();
    Ok(pairwise_sum(&terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plan() -> SamplePlan {
        SamplePlan {
            omega: 2e15,
            k: 1e6,
            q: Polarization::S,
            temperature: 3000.0,
            side: Side::Zero,
            nodes_per_layer: 8,
            realizations: 64,
            seed: 7,
        }
    }

    #[test]
    fn zero_temperature_is_exactly_zero() {
        let s = Stack::slab(Complex64::new(2.0, 0.5), 2e-7, Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)).unwrap();
        let est = sample_emission(&s, &SamplePlan { temperature: 0.0, ..plan() }).unwrap();
        assert_eq!(est.mean, 0.0);
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn plan_validation() {
        assert!(SamplePlan { realizations: 0, ..plan() }.validate().is_err());
        assert!(SamplePlan { nodes_per_layer: 1, ..plan() }.validate().is_err());
    }

    #[test]
    fn lossless_layer_warns() {
        let s = Stack::slab(Complex64::new(2.0, 0.0), 2e-7, Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)).unwrap();
        let est = sample_emission(&s, &plan()).unwrap();
        assert_eq!(est.mean, 0.0);
        assert_eq!(est.warnings.len(), 1);
    }

    #[test]
    fn pairwise_matches_naive_sum_for_integers() {
        let xs: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 499_500.0);
    }
}
