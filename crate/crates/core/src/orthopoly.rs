//! One-dimensional orthogonal polynomial primitives.
//!
//! Jacobi polynomials `P_n^{(α,β)}` for the weight `(1−t)^α (1+t)^β` on
//! `[−1, 1]`, their norms, the reproducing-kernel normalizations `Z_n`,
//! Gegenbauer polynomials, and Gauss–Jacobi quadrature.
//!
//! Everything is evaluated by forward three-term recurrence, which is well
//! conditioned on `[−1, 1]` for the degree range this crate targets
//! (`n ≤ 512`). Gamma-function ratios go through `ln_gamma` so that norms
//! stay finite for large `α + β + 2n`.

use crate::error::{Error, Result};
use crate::special::{jacobi_weight_mass, ln_gamma};

/// Exponents `(α, β)` of the Jacobi weight `(1−t)^α (1+t)^β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    pub alpha: f64,
    pub beta: f64,
}

impl JacobiParams {
    /// Both exponents must exceed −1 for the weight to be integrable.
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() || alpha <= -1.0 || beta <= -1.0 {
            return Err(Error::InvalidParameter(format!(
                "jacobi exponents must be finite and > -1, got alpha={alpha}, beta={beta}"
            )));
        }
        Ok(Self { alpha, beta })
    }

    /// Total mass `∫ (1−t)^α (1+t)^β dt = 2^{α+β+1} B(α+1, β+1)`.
    pub fn mass(&self) -> f64 {
        jacobi_weight_mass(self.alpha, self.beta)
    }
}

/// `P_n^{(α,β)}(t)` on `[−1, 1]`.
pub fn jacobi(n: usize, p: JacobiParams, t: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&t) {
        return Err(Error::InvalidParameter(format!(
            "jacobi argument {t} outside [-1, 1]"
        )));
    }
    Ok(jacobi_unchecked(n, p, t))
}

/// Forward recurrence without the range check; used by inner integrals whose
/// arguments are in `[−1, 1]` by construction (up to rounding).
pub fn jacobi_unchecked(n: usize, p: JacobiParams, t: f64) -> f64 {
    let (a, b) = (p.alpha, p.beta);
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 0.5 * ((a + b + 2.0) * t + (a - b));
    for k in 1..n {
        let kf = k as f64;
        let c = 2.0 * kf + a + b;
        let a1 = 2.0 * (kf + 1.0) * (kf + a + b + 1.0) * c;
        let a2 = (c + 1.0) * (a * a - b * b);
        let a3 = (c + 1.0) * (c + 2.0) * c;
        let a4 = 2.0 * (kf + a) * (kf + b) * (c + 2.0);
        let next = ((a2 + a3 * t) * cur - a4 * prev) / a1;
        prev = cur;
        cur = next;
    }
    cur
}

/// All of `P_0 .. P_nmax` at one argument, written into `out`
/// (`out.len() == nmax + 1`).
pub fn jacobi_all(p: JacobiParams, t: f64, out: &mut [f64]) {
    let (a, b) = (p.alpha, p.beta);
    let nmax = out.len() - 1;
    out[0] = 1.0;
    if nmax == 0 {
        return;
    }
    out[1] = 0.5 * ((a + b + 2.0) * t + (a - b));
    for k in 1..nmax {
        let kf = k as f64;
        let c = 2.0 * kf + a + b;
        let a1 = 2.0 * (kf + 1.0) * (kf + a + b + 1.0) * c;
        let a2 = (c + 1.0) * (a * a - b * b);
        let a3 = (c + 1.0) * (c + 2.0) * c;
        let a4 = 2.0 * (kf + a) * (kf + b) * (c + 2.0);
        out[k + 1] = ((a2 + a3 * t) * out[k] - a4 * out[k - 1]) / a1;
    }
}

/// `d/dt P_n^{(α,β)}(t) = (n+α+β+1)/2 · P_{n−1}^{(α+1,β+1)}(t)`.
pub fn jacobi_deriv(n: usize, p: JacobiParams, t: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let shifted = JacobiParams {
        alpha: p.alpha + 1.0,
        beta: p.beta + 1.0,
    };
    0.5 * (n as f64 + p.alpha + p.beta + 1.0) * jacobi_unchecked(n - 1, shifted, t)
}

/// `P_n^{(α,β)}(1) = binom(n+α, n)`, always positive for `α > −1`.
pub fn jacobi_at_one(n: usize, p: JacobiParams) -> f64 {
    let nf = n as f64;
    (ln_gamma(nf + p.alpha + 1.0) - ln_gamma(p.alpha + 1.0) - ln_gamma(nf + 1.0)).exp()
}

/// Norm square `h_n = ∫ [P_n^{(α,β)}]² (1−t)^α (1+t)^β dt`.
pub fn jacobi_norm(n: usize, p: JacobiParams) -> f64 {
    let (a, b) = (p.alpha, p.beta);
    if n == 0 {
        // The generic formula divides 0/0 when α + β = −1.
        return p.mass();
    }
    let nf = n as f64;
    let ln = (a + b + 1.0) * std::f64::consts::LN_2 - (2.0 * nf + a + b + 1.0).ln()
        + ln_gamma(nf + a + 1.0)
        + ln_gamma(nf + b + 1.0)
        - ln_gamma(nf + a + b + 1.0)
        - ln_gamma(nf + 1.0);
    ln.exp()
}

/// Kernel-normalized Jacobi polynomial
/// `Z_n^{(α,β)}(t) = P_n(1) P_n(t) / h_n`.
pub fn z_jacobi(n: usize, p: JacobiParams, t: f64) -> Result<f64> {
    Ok(jacobi_at_one(n, p) * jacobi(n, p, t)? / jacobi_norm(n, p))
}

/// Chebyshev polynomial of the first kind.
pub fn chebyshev_t(n: usize, t: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = t;
    for _ in 1..n {
        let next = 2.0 * t * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Gegenbauer polynomial `C_n^λ(t)` for `λ > 0`.
pub fn gegenbauer(n: usize, lambda: f64, t: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * lambda * t;
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 * (kf + lambda) * t * cur - (kf + 2.0 * lambda - 1.0) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Kernel-normalized Gegenbauer polynomial `Z_n^λ = ((n+λ)/λ) C_n^λ`.
///
/// `Z_n^λ(⟨ξ,η⟩)` with `λ = (d−2)/2` is the reproducing kernel of the
/// degree-`n` spherical harmonics on `S^{d−1}` under the unit-mass surface
/// measure, so `Z_n^λ(1)` equals the harmonic-space dimension.
///
/// At `λ = 0` (the circle) the limit is `Z_n^0 = 2 T_n` for `n ≥ 1`: the limit
/// of `((n+λ)/λ) C_n^λ` is `n · (2/n) T_n`, and the factor 2 is exactly what
/// makes the circle kernel reproduce degree-`n` trigonometric polynomials
/// under the normalized arc measure.
pub fn z_gegenbauer(n: usize, lambda: f64, t: f64) -> Result<f64> {
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "gegenbauer index must be >= 0, got {lambda}"
        )));
    }
    if n == 0 {
        return Ok(1.0);
    }
    if lambda == 0.0 {
        return Ok(2.0 * chebyshev_t(n, t));
    }
    Ok((n as f64 + lambda) / lambda * gegenbauer(n, lambda, t))
}

/// All of `Z_0^λ .. Z_nmax^λ` at one argument.
pub fn z_gegenbauer_all(lambda: f64, t: f64, out: &mut [f64]) {
    let nmax = out.len() - 1;
    out[0] = 1.0;
    if nmax == 0 {
        return;
    }
    if lambda == 0.0 {
        let mut prev = 1.0;
        let mut cur = t;
        for k in 1..=nmax {
            out[k] = 2.0 * cur;
            let next = 2.0 * t * cur - prev;
            prev = cur;
            cur = next;
        }
        return;
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * lambda * t;
    for k in 1..=nmax {
        out[k] = (k as f64 + lambda) / lambda * cur;
        let kf = k as f64;
        let next = (2.0 * (kf + lambda) * t * cur - (kf + 2.0 * lambda - 1.0) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
}

/// A Gauss–Jacobi rule: `m` nodes in `(−1, 1)`, positive weights, exact for
/// polynomial integrands of degree up to `2m − 1` against
/// `(1−t)^α (1+t)^β dt`.
#[derive(Debug, Clone)]
pub struct QuadratureRule1D {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub params: JacobiParams,
    pub exact_degree: usize,
}

impl QuadratureRule1D {
    /// `∫ f(t) (1−t)^α (1+t)^β dt`, exact when `f` is a polynomial of degree
    /// at most `exact_degree`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Gauss–Jacobi nodes and weights.
///
/// Nodes are the roots of `P_m^{(α,β)}`, isolated by sign changes on a
/// Chebyshev-point grid and polished with Newton iterations that fall back to
/// bisection whenever a step leaves the bracket. Weights come from the
/// Christoffel identity `w_i = 1 / Σ_{k<m} p̂_k(x_i)²` with `p̂_k` the
/// orthonormal Jacobi polynomials.
pub fn gauss_jacobi(m: usize, p: JacobiParams) -> Result<QuadratureRule1D> {
    if m == 0 {
        return Err(Error::InvalidParameter(
            "quadrature needs at least one node".into(),
        ));
    }
    let mut nodes = Vec::with_capacity(m);
    if m == 1 {
        // Single root of the degree-1 polynomial.
        nodes.push((p.beta - p.alpha) / (p.alpha + p.beta + 2.0));
    } else {
        let mut grid_count = 16 * m + 31;
        let mut brackets: Vec<(f64, f64, f64, f64)> = Vec::new();
        for _ in 0..4 {
            brackets.clear();
            let mut prev_t = -1.0_f64;
            let mut prev_v = 0.0_f64;
            for i in 0..=grid_count {
                // Chebyshev points sweep from −1 to 1 and cluster at the ends,
                // where Jacobi roots accumulate.
                let theta = std::f64::consts::PI * (1.0 - i as f64 / grid_count as f64);
                let t = theta.cos();
                let v = jacobi_unchecked(m, p, t);
                if i > 0 && prev_v != 0.0 && v != 0.0 && prev_v.signum() != v.signum() {
                    brackets.push((prev_t, t, prev_v, v));
                } else if v == 0.0 {
                    brackets.push((t, t, 0.0, 0.0));
                }
                prev_t = t;
                prev_v = v;
            }
            if brackets.len() == m {
                break;
            }
            grid_count *= 2;
        }
        if brackets.len() != m {
            return Err(Error::Resolution(format!(
                "found {} of {m} jacobi roots (alpha={}, beta={})",
                brackets.len(),
                p.alpha,
                p.beta
            )));
        }
        for &(mut lo, mut hi, mut flo, _) in &brackets {
            if lo == hi {
                nodes.push(lo);
                continue;
            }
            let mut x = 0.5 * (lo + hi);
            for _ in 0..100 {
                let f = jacobi_unchecked(m, p, x);
                if f == 0.0 {
                    break;
                }
                if f.signum() == flo.signum() {
                    lo = x;
                    flo = f;
                } else {
                    hi = x;
                }
                let df = jacobi_deriv(m, p, x);
                let newton = x - f / df;
                let next = if df != 0.0 && newton > lo && newton < hi {
                    newton
                } else {
                    0.5 * (lo + hi)
                };
                if (next - x).abs() <= 1e-15 * x.abs().max(1.0) {
                    x = next;
                    break;
                }
                x = next;
            }
            nodes.push(x);
        }
    }

    // Christoffel-function weights from the orthonormal recurrence values.
    let inv_norms: Vec<f64> = (0..m).map(|k| 1.0 / jacobi_norm(k, p)).collect();
    let mut vals = vec![0.0; m];
    let weights: Vec<f64> = nodes
        .iter()
        .map(|&x| {
            jacobi_all(p, x, &mut vals);
            let k_sum: f64 = vals
                .iter()
                .zip(&inv_norms)
                .map(|(&v, &inv)| v * v * inv)
                .sum();
            1.0 / k_sum
        })
        .collect();

    Ok(QuadratureRule1D {
        nodes,
        weights,
        params: p,
        exact_degree: 2 * m - 1,
    })
}
