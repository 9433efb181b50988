//! Planar Green kernel g^(jj')(z, z'; k, omega) in the 2D Fourier domain and a
//! quadrature check of its integral identity.
//!
//! Local coordinates: z <= 0 in region 0, 0 <= z <= d_j in layer j, z >= 0 in region n.
//! The local delta term of the full Green tensor is not included.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fresnel::{scatter_set, ScatterSet};
use crate::kinematics::{Dir, ModeContext, Polarization, Vec3};

pub type Mat3 = [[Complex64; 3]; 3];

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const MAT3_ZERO: Mat3 = [[ZERO; 3]; 3];

/// Which unit-strength wave of region j.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wave {
    /// Excited from the left; satisfies the boundary condition toward region n.
    Right,
    /// Excited from the right; satisfies the boundary condition toward region 0.
    Left,
}

/// Branch selection for the same-region kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ordering {
    /// Use the step function, with the mean of both branches at z = z'.
    Auto,
    /// Field point above the source (z > z').
    Above,
    /// Field point below the source (z < z').
    Below,
}

pub fn outer(a: &Vec3, b: &Vec3) -> Mat3 {
    let mut m = MAT3_ZERO;
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = a[i] * b[j];
        }
    }
    m
}

pub fn mat_add(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut m = *a;
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] += b[i][j];
        }
    }
    m
}

pub fn mat_scale(a: &Mat3, s: Complex64) -> Mat3 {
    let mut m = *a;
    for row in m.iter_mut() {
        for v in row.iter_mut() {
            *v *= s;
        }
    }
    m
}

pub fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut m = MAT3_ZERO;
    for i in 0..3 {
        for j in 0..3 {
            for l in 0..3 {
                m[i][j] += a[i][l] * b[l][j];
            }
        }
    }
    m
}

pub fn adjoint(a: &Mat3) -> Mat3 {
    let mut m = MAT3_ZERO;
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = a[j][i].conj();
        }
    }
    m
}

pub fn transpose(a: &Mat3) -> Mat3 {
    let mut m = MAT3_ZERO;
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = a[j][i];
        }
    }
    m
}

pub fn max_abs(a: &Mat3) -> f64 {
    a.iter().flatten().fold(0.0, |acc, v| acc.max(v.norm()))
}

pub fn max_abs_diff(a: &Mat3, b: &Mat3) -> f64 {
    let mut d = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            d = d.max((a[i][j] - b[i][j]).norm());
        }
    }
    d
}

/// Green kernel of one mode with both polarizations precomputed.
#[derive(Debug, Clone)]
pub struct Green {
    pub ctx: ModeContext,
    pub s: ScatterSet,
    pub p: ScatterSet,
}

impl Green {
    pub fn new(ctx: &ModeContext) -> Result<Self> {
        Ok(Green {
            ctx: ctx.clone(),
            s: scatter_set(ctx, Polarization::S)?,
            p: scatter_set(ctx, Polarization::P)?,
        })
    }

    pub fn scatter(&self, q: Polarization) -> &ScatterSet {
        match q {
            Polarization::S => &self.s,
            Polarization::P => &self.p,
        }
    }

    fn check_z(&self, j: usize, z: f64) -> Result<()> {
        let n = self.ctx.n();
        let r = self.ctx.region(j)?;
        let ok = if j == 0 {
            z <= 0.0
        } else if j == n {
            z >= 0.0
        } else {
            (0.0..=r.d).contains(&z)
        };
        if ok && z.is_finite() {
            Ok(())
        } else {
            Err(Error::OutsideRegion { z, region: j })
        }
    }

    /// Unit-strength wave of region j for in-plane direction `khat`.
    pub fn wavefun_along(&self, q: Polarization, j: usize, wave: Wave, z: f64, khat: [f64; 2]) -> Result<Vec3> {
        self.check_z(j, z)?;
        let ss = self.scatter(q);
        let rc = &ss.regions[j];
        let beta = self.ctx.regions[j].beta;
        let d = self.ctx.regions[j].d;
        let i = Complex64::i();
        let ep = self.ctx.e_vec_along(j, q, Dir::Plus, khat);
        let em = self.ctx.e_vec_along(j, q, Dir::Minus, khat);
        let (a, ea, b, eb) = match wave {
            Wave::Right => (
                (i * beta * (z - d)).exp(),
                ep,
                rc.r_jn * (-i * beta * (z - d)).exp(),
                em,
            ),
            Wave::Left => ((-i * beta * z).exp(), em, rc.r_j0 * (i * beta * z).exp(), ep),
        };
        Ok([
            a * ea[0] + b * eb[0],
            a * ea[1] + b * eb[1],
            a * ea[2] + b * eb[2],
        ])
    }

    pub fn wavefun(&self, q: Polarization, j: usize, wave: Wave, z: f64) -> Result<Vec3> {
        self.wavefun_along(q, j, wave, z, self.ctx.khat)
    }

    /// g^(j jp)(z, zp) summed over both polarizations.
    pub fn kernel(&self, j: usize, jp: usize, z: f64, zp: f64) -> Result<Mat3> {
        self.kernel_ordered(j, jp, z, zp, Ordering::Auto)
    }

    pub fn kernel_ordered(&self, j: usize, jp: usize, z: f64, zp: f64, ord: Ordering) -> Result<Mat3> {
        self.check_z(j, z)?;
        self.check_z(jp, zp)?;
        let mut g = MAT3_ZERO;
        for q in Polarization::BOTH {
            g = mat_add(&g, &self.kernel_pol(q, j, jp, z, zp, ord)?);
        }
        Ok(g)
    }

    /// Single-polarization contribution to the kernel.
    pub fn kernel_pol(&self, q: Polarization, j: usize, jp: usize, z: f64, zp: f64, ord: Ordering) -> Result<Mat3> {
        let ss = self.scatter(q);
        let xi = ss.xi(j, jp);
        let rev = [-self.ctx.khat[0], -self.ctx.khat[1]];
        let pref = Complex64::new(0.0, 0.5 * q.sigma()) * xi;
        let upper = |s: &Self| -> Result<Mat3> {
            let a = s.wavefun(q, j, Wave::Right, z)?;
            let b = s.wavefun_along(q, jp, Wave::Left, zp, rev)?;
            Ok(mat_scale(&outer(&a, &b), pref))
        };
        let lower = |s: &Self| -> Result<Mat3> {
            let a = s.wavefun(q, j, Wave::Left, z)?;
            let b = s.wavefun_along(q, jp, Wave::Right, zp, rev)?;
            Ok(mat_scale(&outer(&a, &b), pref))
        };
        if j > jp {
            return upper(self);
        }
        if j < jp {
            return lower(self);
        }
        let ord = match ord {
            Ordering::Auto if z > zp => Ordering::Above,
            Ordering::Auto if z < zp => Ordering::Below,
            o => o,
        };
        match ord {
            Ordering::Above => upper(self),
            Ordering::Below => lower(self),
            Ordering::Auto => Ok(mat_scale(
                &mat_add(&upper(self)?, &lower(self)?),
                Complex64::new(0.5, 0.0),
            )),
        }
    }
}

/// Treatment of the semi-infinite z'' integrals over the outer regions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OuterTreatment {
    /// Exact exponential tails; needs Im eps > 0 in both outer media.
    Analytic,
    /// Quadrature over a finite depth (metres) into each outer medium, tails dropped.
    Truncated { depth: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Simpson intervals per layer and per finite outer piece (rounded up to even).
    pub nodes_per_layer: usize,
    pub outer: OuterTreatment,
}

#[derive(Debug, Clone)]
pub struct IdentityResidual {
    pub lhs: Mat3,
    pub rhs: Mat3,
    /// max |lhs - rhs| / max |rhs|
    pub residual: f64,
}

fn simpson<F: FnMut(f64) -> Result<Mat3>>(a: f64, b: f64, n: usize, mut f: F) -> Result<Mat3> {
    let n = if n % 2 == 1 { n + 1 } else { n.max(2) };
    let h = (b - a) / n as f64;
    let mut acc = MAT3_ZERO;
    for i in 0..=n {
        let w = if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let x = if i == n { b } else { a + h * i as f64 };
        acc = mat_add(&acc, &mat_scale(&f(x)?, Complex64::new(w * h / 3.0, 0.0)));
    }
    Ok(acc)
}

impl Green {
    /// (omega/c)^2 eps''_{jpp} g^(j jpp)(z, zpp) [g^(jp jpp)(zp, zpp)]^dagger
    fn identity_integrand(
        &self,
        j: usize,
        jp: usize,
        jpp: usize,
        z: f64,
        zp: f64,
        zpp: f64,
        ord_a: Ordering,
        ord_b: Ordering,
    ) -> Result<Mat3> {
        let k0 = self.ctx.k0();
        let w = k0 * k0 * self.ctx.regions[jpp].eps.im;
        let a = self.kernel_ordered(j, jpp, z, zpp, ord_a)?;
        let b = self.kernel_ordered(jp, jpp, zp, zpp, ord_b)?;
        Ok(mat_scale(&mat_mul(&a, &adjoint(&b)), Complex64::new(w, 0.0)))
    }

    /// Both sides of the integral identity
    /// sum_j'' int (omega/c)^2 eps'' g g^dagger dz'' = (g - g^dagger)/2i + boundary terms.
    pub fn verify_identity(&self, j: usize, jp: usize, z: f64, zp: f64, spec: QuadratureSpec) -> Result<IdentityResidual> {
        self.check_z(j, z)?;
        self.check_z(jp, zp)?;
        let n = self.ctx.n();
        if spec.outer == OuterTreatment::Analytic {
            for (idx, name) in [(0, "medium0"), (n, "mediumN")] {
                if !(self.ctx.regions[idx].eps.im > 0.0) {
                    return Err(Error::NonAbsorbingOuter(name.to_string()));
                }
            }
        }
        let nodes = spec.nodes_per_layer.max(2);

        // branch of g^(a jpp)(za, zpp) on a piece lying entirely on one side of za
        let branch = |a: usize, za: f64, jpp: usize, lo: f64, hi: f64| -> Ordering {
            if a != jpp {
                Ordering::Auto
            } else if hi <= za {
                Ordering::Above
            } else if lo >= za {
                Ordering::Below
            } else {
                Ordering::Auto
            }
        };

        let mut lhs = MAT3_ZERO;
        for jpp in 0..=n {
            let reg = self.ctx.regions[jpp];
            if reg.eps.im == 0.0 {
                continue;
            }
            let (lo, hi) = if jpp == 0 {
                (f64::NEG_INFINITY, 0.0)
            } else if jpp == n {
                (0.0, f64::INFINITY)
            } else {
                (0.0, reg.d)
            };
            let mut cuts = vec![lo, hi];
            if j == jpp {
                cuts.push(z);
            }
            if jp == jpp {
                cuts.push(zp);
            }
            cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
            cuts.dedup();
            for w in cuts.windows(2) {
                let (a, b) = (w[0], w[1]);
                let oa = branch(j, z, jpp, a, b);
                let ob = branch(jp, zp, jpp, a, b);
                let f = |x: f64| self.identity_integrand(j, jp, jpp, z, zp, x, oa, ob);
                let piece = if a.is_infinite() {
                    match spec.outer {
                        // integrand ~ exp(2 beta'' z'') toward -inf
                        OuterTreatment::Analytic => mat_scale(&f(b)?, Complex64::new(0.5 / reg.beta.im, 0.0)),
                        OuterTreatment::Truncated { depth } => simpson(b - depth, b, nodes, f)?,
                    }
                } else if b.is_infinite() {
                    match spec.outer {
                        OuterTreatment::Analytic => mat_scale(&f(a)?, Complex64::new(0.5 / reg.beta.im, 0.0)),
                        OuterTreatment::Truncated { depth } => simpson(a, a + depth, nodes, f)?,
                    }
                } else if b > a {
                    simpson(a, b, nodes, f)?
                } else {
                    MAT3_ZERO
                };
                lhs = mat_add(&lhs, &piece);
            }
        }

        let g = self.kernel(j, jp, z, zp)?;
        let gt = self.kernel(jp, j, zp, z)?;
        let gt_dag = adjoint(&gt);
        let half_i = Complex64::new(0.0, -0.5); // 1/(2i)
        let mut rhs = MAT3_ZERO;
        let e_j = self.ctx.regions[j].eps;
        let e_jp = self.ctx.regions[jp].eps;
        let c_jp = e_jp.im / e_jp.conj();
        let c_j = e_j.im / e_j;
        for mu in 0..3 {
            for nu in 0..3 {
                rhs[mu][nu] = half_i * (g[mu][nu] - gt_dag[mu][nu]);
                if nu == 2 {
                    rhs[mu][nu] += c_jp * g[mu][2];
                }
                if mu == 2 {
                    rhs[mu][nu] += c_j * gt[nu][2].conj();
                }
            }
        }
        let scale = max_abs(&rhs).max(max_abs(&lhs));
        Ok(IdentityResidual {
            residual: max_abs_diff(&lhs, &rhs) / scale,
            lhs,
            rhs,
        })
    }
}
