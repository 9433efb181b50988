//! Adaptive Gauss-Kronrod (7/15) quadrature for vector-valued complex integrands.

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        AdaptiveOptions {
            rel_tol: 1e-10,
            abs_tol: 0.0,
            max_intervals: 20_000,
        }
    }
}

struct Piece {
    a: f64,
    b: f64,
    value: Vec<Complex64>,
    err: f64,
}

fn gk15<F: FnMut(f64, &mut [Complex64])>(f: &mut F, a: f64, b: f64, dim: usize, buf: &mut [Complex64]) -> (Vec<Complex64>, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut k = vec![Complex64::new(0.0, 0.0); dim];
    let mut g = vec![Complex64::new(0.0, 0.0); dim];
    let mut eval = |x: f64, wk: f64, wg: f64, k: &mut [Complex64], g: &mut [Complex64], buf: &mut [Complex64]| {
        f(x, buf);
        for i in 0..dim {
            k[i] += wk * buf[i];
            if wg != 0.0 {
                g[i] += wg * buf[i];
            }
        }
    };
    eval(c, WGK[7], WG[3], &mut k, &mut g, buf);
    for j in 0..7 {
        let wg = if j % 2 == 1 { WG[j / 2] } else { 0.0 };
        let dx = h * XGK[j];
        eval(c - dx, WGK[j], wg, &mut k, &mut g, buf);
        eval(c + dx, WGK[j], wg, &mut k, &mut g, buf);
    }
    let mut err = 0.0f64;
    for i in 0..dim {
        k[i] *= h;
        g[i] *= h;
        err = err.max((k[i] - g[i]).norm());
    }
    (k, err)
}

/// Integrate a vector-valued function over the union of `[breaks[i], breaks[i+1]]`.
///
/// `f(x, out)` writes `dim` values. Convergence is judged on the max-norm of the
/// componentwise error against the max-norm of the integral.
pub fn integrate_vec<F: FnMut(f64, &mut [Complex64])>(
    mut f: F,
    breaks: &[f64],
    dim: usize,
    opts: AdaptiveOptions,
) -> Result<Vec<Complex64>> {
    let mut buf = vec![Complex64::new(0.0, 0.0); dim];
    let mut pieces: Vec<Piece> = Vec::new();
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            let (value, err) = gk15(&mut f, w[0], w[1], dim, &mut buf);
            pieces.push(Piece { a: w[0], b: w[1], value, err });
        }
    }
    loop {
        let mut total = vec![Complex64::new(0.0, 0.0); dim];
        let mut err_total = 0.0;
        for p in &pieces {
            for i in 0..dim {
                total[i] += p.value[i];
            }
            err_total += p.err;
        }
        let scale = total.iter().fold(0.0f64, |m, v| m.max(v.norm()));
        if err_total <= opts.abs_tol.max(opts.rel_tol * scale) {
            return Ok(total);
        }
        if pieces.len() >= opts.max_intervals {
            return Err(Error::Accuracy(format!(
                "error estimate {err_total:e} vs integral scale {scale:e} after {} intervals",
                pieces.len()
            )));
        }
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.partial_cmp(&y.1.err).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        let p = pieces.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        for (a, b) in [(p.a, mid), (mid, p.b)] {
            let (value, err) = gk15(&mut f, a, b, dim, &mut buf);
            pieces.push(Piece { a, b, value, err });
        }
    }
}
