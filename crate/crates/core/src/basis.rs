//! Orthonormal polynomial bases, graded by degree, for each domain.
//!
//! The classical separation-of-variables bases are used: orthonormal Jacobi
//! polynomials on the interval, real spherical harmonics on `S^1`/`S^2`,
//! radial-Jacobi-times-harmonic on the ball, the Jacobi product basis on the
//! simplex, and Jacobi-in-`t` times solid harmonics on the conic surface.
//! Factors are evaluated raw by stable recurrences (homogenized where a
//! division would be unstable), and the normalization constants are fixed
//! *discretely*, by one streaming pass of a reference quadrature exact for
//! the squared basis — that sidesteps transcription risk in closed-form
//! norms and automatically matches the crate's unit-mass convention.
//!
//! The crate's addition-formula kernels and these bases are two independent
//! routes to the same reproducing kernels; their agreement is asserted in
//! the test suites.

use crate::domains::{Domain, DomainSpec, PointOnDomain};
use crate::error::{Error, Result};
use crate::orthopoly::{jacobi_all, JacobiParams};

/// A degree-graded orthonormal basis on a domain, valid through
/// `max_degree`.
#[derive(Debug)]
pub struct OrthoBasis {
    family: Family,
    max_degree: usize,
    /// `offsets[k]..offsets[k+1]` indexes the degree-`k` functions.
    offsets: Vec<usize>,
    inv_norms: Vec<f64>,
}

#[derive(Debug, Clone)]
enum Family {
    Interval { params: JacobiParams },
    Circle,
    Sphere3,
    Ball { dim: usize, mu: f64 },
    Simplex2 { gamma: [f64; 3] },
    Cone { dim: usize, gamma: f64 },
}

impl OrthoBasis {
    /// Build the basis and fix its normalization against a quadrature exact
    /// for products of basis elements (degree `2 · max_degree`).
    pub fn new(domain: &Domain, max_degree: usize) -> Result<Self> {
        let family = match domain.spec() {
            DomainSpec::Interval { params } => Family::Interval { params: *params },
            DomainSpec::Sphere { dim: 2 } => Family::Circle,
            DomainSpec::Sphere { dim: 3 } => Family::Sphere3,
            DomainSpec::Ball { dim, mu } if *dim == 2 || *dim == 3 => {
                Family::Ball { dim: *dim, mu: *mu }
            }
            DomainSpec::Simplex { dim: 2, gamma } => Family::Simplex2 {
                gamma: [gamma[0], gamma[1], gamma[2]],
            },
            DomainSpec::ConicSurface { dim, gamma } if *dim == 2 || *dim == 3 => Family::Cone {
                dim: *dim,
                gamma: *gamma,
            },
            other => {
                return Err(Error::Unsupported(format!(
                    "no explicit orthonormal basis for {other:?}"
                )))
            }
        };
        let mut offsets = Vec::with_capacity(max_degree + 2);
        offsets.push(0);
        for n in 0..=max_degree {
            offsets.push(offsets[n] + domain.dimension_vn(n));
        }
        let dim_total = *offsets.last().unwrap();

        let mut basis = Self {
            family,
            max_degree,
            offsets,
            inv_norms: vec![1.0; dim_total],
        };
        // Streaming norm pass: Σ w φ_raw(z)².
        let rule = domain.reference_quadrature(2 * max_degree)?;
        let mut sums = vec![0.0; dim_total];
        let mut vals = vec![0.0; dim_total];
        for (p, &w) in rule.nodes.iter().zip(&rule.weights) {
            basis.eval_raw(p, &mut vals);
            for (s, v) in sums.iter_mut().zip(&vals) {
                *s += w * v * v;
            }
        }
        for (inv, s) in basis.inv_norms.iter_mut().zip(&sums) {
            if *s <= 0.0 {
                return Err(Error::Resolution(
                    "basis normalization produced a nonpositive norm".into(),
                ));
            }
            *inv = 1.0 / s.sqrt();
        }
        Ok(basis)
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Total number of functions through `degree`.
    pub fn dim_through(&self, degree: usize) -> usize {
        self.offsets[degree.min(self.max_degree) + 1]
    }

    /// Index range of the degree-`k` block.
    pub fn degree_range(&self, k: usize) -> std::ops::Range<usize> {
        self.offsets[k]..self.offsets[k + 1]
    }

    /// Evaluate all normalized basis functions at `p`.
    pub fn eval_into(&self, p: &PointOnDomain, out: &mut [f64]) {
        self.eval_raw(p, out);
        for (v, inv) in out.iter_mut().zip(&self.inv_norms) {
            *v *= inv;
        }
    }

    /// Column-major value matrix: `dim_through(max_degree) × points`.
    pub fn eval_columns(&self, pts: &[PointOnDomain]) -> Vec<f64> {
        let dim = self.dim_through(self.max_degree);
        let mut data = vec![0.0; dim * pts.len()];
        for (j, p) in pts.iter().enumerate() {
            self.eval_into(p, &mut data[j * dim..(j + 1) * dim]);
        }
        data
    }

    fn eval_raw(&self, p: &PointOnDomain, out: &mut [f64]) {
        let c = p.coords();
        match &self.family {
            Family::Interval { params } => jacobi_all(*params, c[0], out),
            Family::Circle => eval_circle(self.max_degree, c[0], c[1], out),
            Family::Sphere3 => eval_sphere3(self.max_degree, c, out),
            Family::Ball { dim, mu } => eval_ball(self.max_degree, *dim, *mu, c, out),
            Family::Simplex2 { gamma } => eval_simplex2(self.max_degree, gamma, c, out),
            Family::Cone { dim, gamma } => eval_cone(self.max_degree, *dim, *gamma, c, out),
        }
    }
}

/// cos(nθ), sin(nθ) from (cos θ, sin θ) by the angle-addition recurrence.
fn trig_powers(nmax: usize, x: f64, y: f64) -> (Vec<f64>, Vec<f64>) {
    let mut cs = vec![0.0; nmax + 1];
    let mut sn = vec![0.0; nmax + 1];
    cs[0] = 1.0;
    for n in 1..=nmax {
        cs[n] = cs[n - 1] * x - sn[n - 1] * y;
        sn[n] = sn[n - 1] * x + cs[n - 1] * y;
    }
    (cs, sn)
}

fn eval_circle(nmax: usize, x: f64, y: f64, out: &mut [f64]) {
    let (cs, sn) = trig_powers(nmax, x, y);
    out[0] = 1.0;
    let mut idx = 1;
    for n in 1..=nmax {
        out[idx] = cs[n];
        out[idx + 1] = sn[n];
        idx += 2;
    }
}

/// Real solid harmonics of `R³` through degree `lmax`, evaluated at
/// `(x, y, z)` with `r² = x²+y²+z²` passed explicitly (so the same code
/// serves `S²`, the ball, and the cone). Layout per degree `l`:
/// `m = 0`, then `(m, cos), (m, sin)` for `m = 1..l`. Magnitudes follow the
/// fully normalized associated-Legendre recurrence, so they stay bounded
/// on the unit sphere.
fn solid_harmonics(lmax: usize, x: f64, y: f64, z: f64, r2: f64, out: &mut [Vec<f64>]) {
    let (cs, sn) = trig_powers(lmax, x, y);
    let mut g_prev: Vec<f64> = Vec::new(); // G_{l−2, ·}
    let mut g_cur: Vec<f64> = Vec::new(); // G_{l−1, ·}
    let mut diag = 1.0;
    for l in 0..=lmax {
        let mut g_next: Vec<f64> = Vec::with_capacity(l + 1);
        for m in 0..=l {
            let v = if m == l {
                if m > 0 {
                    diag *= ((2 * m + 1) as f64 / (2 * m) as f64).sqrt();
                }
                diag
            } else if m + 1 == l {
                ((2 * m + 3) as f64).sqrt() * z * g_cur[m]
            } else {
                let lf = l as f64;
                let mf = m as f64;
                let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
                let b = (((2.0 * lf + 1.0) * (lf + mf - 1.0) * (lf - mf - 1.0))
                    / ((2.0 * lf - 3.0) * (lf * lf - mf * mf)))
                    .sqrt();
                a * z * g_cur[m] - b * r2 * g_prev[m]
            };
            g_next.push(v);
        }
        let row = &mut out[l];
        row.clear();
        row.push(g_next[0] * cs[0]);
        for m in 1..=l {
            row.push(g_next[m] * cs[m]);
            row.push(g_next[m] * sn[m]);
        }
        g_prev = std::mem::take(&mut g_cur);
        g_cur = g_next;
    }
}

fn eval_sphere3(nmax: usize, c: &[f64], out: &mut [f64]) {
    let mut rows: Vec<Vec<f64>> = vec![Vec::new(); nmax + 1];
    solid_harmonics(nmax, c[0], c[1], c[2], 1.0, &mut rows);
    let mut idx = 0;
    for row in rows {
        for v in row {
            out[idx] = v;
            idx += 1;
        }
    }
}

fn eval_ball(nmax: usize, dim: usize, mu: f64, c: &[f64], out: &mut [f64]) {
    let r2: f64 = c.iter().map(|v| v * v).sum();
    let v = (2.0 * r2 - 1.0).clamp(-1.0, 1.0);
    if dim == 2 {
        let (cs, sn) = trig_powers(nmax, c[0], c[1]);
        let mut radial: Vec<Vec<f64>> = Vec::with_capacity(nmax + 1);
        for l in 0..=nmax {
            let jmax = (nmax - l) / 2;
            let mut vals = vec![0.0; jmax + 1];
            jacobi_all(
                JacobiParams {
                    alpha: mu - 0.5,
                    beta: l as f64,
                },
                v,
                &mut vals,
            );
            radial.push(vals);
        }
        let mut idx = 0;
        for n in 0..=nmax {
            for m in 0..=(n / 2) {
                let l = n - 2 * m;
                let p = radial[l][m];
                if l == 0 {
                    out[idx] = p;
                    idx += 1;
                } else {
                    out[idx] = p * cs[l];
                    out[idx + 1] = p * sn[l];
                    idx += 2;
                }
            }
        }
    } else {
        let mut rows: Vec<Vec<f64>> = vec![Vec::new(); nmax + 1];
        solid_harmonics(nmax, c[0], c[1], c[2], r2, &mut rows);
        let mut radial: Vec<Vec<f64>> = Vec::with_capacity(nmax + 1);
        for l in 0..=nmax {
            let jmax = (nmax - l) / 2;
            let mut vals = vec![0.0; jmax + 1];
            jacobi_all(
                JacobiParams {
                    alpha: mu - 0.5,
                    beta: l as f64 + 0.5,
                },
                v,
                &mut vals,
            );
            radial.push(vals);
        }
        let mut idx = 0;
        for n in 0..=nmax {
            for m in 0..=(n / 2) {
                let l = n - 2 * m;
                let p = radial[l][m];
                for h in &rows[l] {
                    out[idx] = p * h;
                    idx += 1;
                }
            }
        }
    }
}

/// Homogenized Jacobi values `q_k(a, b) = b^k P_k^{(A,B)}(a/b)`, stable for
/// all `(a, b)` including `b = 0`.
fn jacobi_homogenized(kmax: usize, big_a: f64, big_b: f64, a: f64, b: f64, out: &mut [f64]) {
    out[0] = 1.0;
    if kmax == 0 {
        return;
    }
    out[1] = 0.5 * ((big_a + big_b + 2.0) * a + (big_a - big_b) * b);
    for k in 1..kmax {
        let kf = k as f64;
        let c = 2.0 * kf + big_a + big_b;
        let a1 = 2.0 * (kf + 1.0) * (kf + big_a + big_b + 1.0) * c;
        let a2 = (c + 1.0) * (big_a * big_a - big_b * big_b);
        let a3 = (c + 1.0) * (c + 2.0) * c;
        let a4 = 2.0 * (kf + big_a) * (kf + big_b) * (c + 2.0);
        out[k + 1] = ((a2 * b + a3 * a) * out[k] - a4 * b * b * out[k - 1]) / a1;
    }
}

fn eval_simplex2(nmax: usize, gamma: &[f64; 3], c: &[f64], out: &mut [f64]) {
    let (x1, x2) = (c[0], c[1]);
    // Inner factor: b^k P_k^{(γ3, γ2)}((2x2 − b)/b) with b = 1 − x1.
    let b = 1.0 - x1;
    let a = 2.0 * x2 - b;
    let mut inner = vec![0.0; nmax + 1];
    jacobi_homogenized(nmax, gamma[2], gamma[1], a, b, &mut inner);
    // Outer factor per k: P_{n−k}^{(2k+γ2+γ3+1, γ1)}(2x1−1).
    let mut outer: Vec<Vec<f64>> = Vec::with_capacity(nmax + 1);
    let w = (2.0 * x1 - 1.0).clamp(-1.0, 1.0);
    for k in 0..=nmax {
        let mut vals = vec![0.0; nmax - k + 1];
        jacobi_all(
            JacobiParams {
                alpha: 2.0 * k as f64 + gamma[1] + gamma[2] + 1.0,
                beta: gamma[0],
            },
            w,
            &mut vals,
        );
        outer.push(vals);
    }
    let mut idx = 0;
    for n in 0..=nmax {
        for k in 0..=n {
            out[idx] = outer[k][n - k] * inner[k];
            idx += 1;
        }
    }
}

fn eval_cone(nmax: usize, dim: usize, gamma: f64, c: &[f64], out: &mut [f64]) {
    let t = c[dim];
    let w = (2.0 * t - 1.0).clamp(-1.0, 1.0);
    if dim == 2 {
        // The harmonic factor Re/Im (x1 + i x2)^m carries the t^m weight.
        let (cs, sn) = trig_powers(nmax, c[0], c[1]);
        let mut radial: Vec<Vec<f64>> = Vec::with_capacity(nmax + 1);
        for m in 0..=nmax {
            let mut vals = vec![0.0; nmax - m + 1];
            jacobi_all(
                JacobiParams {
                    alpha: gamma,
                    beta: 2.0 * m as f64,
                },
                w,
                &mut vals,
            );
            radial.push(vals);
        }
        let mut idx = 0;
        for n in 0..=nmax {
            for m in 0..=n {
                let p = radial[m][n - m];
                if m == 0 {
                    out[idx] = p;
                    idx += 1;
                } else {
                    out[idx] = p * cs[m];
                    out[idx + 1] = p * sn[m];
                    idx += 2;
                }
            }
        }
    } else {
        let r2 = t * t;
        let mut rows: Vec<Vec<f64>> = vec![Vec::new(); nmax + 1];
        solid_harmonics(nmax, c[0], c[1], c[2], r2, &mut rows);
        let mut radial: Vec<Vec<f64>> = Vec::with_capacity(nmax + 1);
        for m in 0..=nmax {
            let mut vals = vec![0.0; nmax - m + 1];
            jacobi_all(
                JacobiParams {
                    alpha: gamma,
                    beta: 2.0 * m as f64 + 1.0,
                },
                w,
                &mut vals,
            );
            radial.push(vals);
        }
        let mut idx = 0;
        for n in 0..=nmax {
            for m in 0..=n {
                let p = radial[m][n - m];
                for h in &rows[m] {
                    out[idx] = p * h;
                    idx += 1;
                }
            }
        }
    }
}
