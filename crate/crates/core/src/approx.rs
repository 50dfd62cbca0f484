//! Translation operator, even-order differences, modulus of smoothness, and
//! `L²` best approximation.
//!
//! The translation `S_θ` acts diagonally on the orthogonal decomposition
//! with multipliers `P_n^{(a,b)}(cos θ) / P_n^{(a,b)}(1)`, where `(a, b)` is
//! the Jacobi pair of the domain's addition formula. In `L²` the best
//! degree-`n` approximation is the truncated expansion, so `E_n(f)` is the
//! tail norm of the coefficient sequence.

use crate::domains::DomainSpec;
use crate::error::{Error, Result};
use crate::kernels::{BandlimitedFunction, KernelEvaluator};
use crate::orthopoly::{jacobi_at_one, jacobi_unchecked, JacobiParams};

/// Jacobi parameters of the one-variable kernel in the domain's addition
/// formula.
pub fn multiplier_params(spec: &DomainSpec) -> JacobiParams {
    match spec {
        DomainSpec::Interval { params } => *params,
        DomainSpec::Sphere { dim } => {
            let l = (*dim as f64 - 3.0) / 2.0;
            JacobiParams { alpha: l, beta: l }
        }
        DomainSpec::Ball { dim, mu } => {
            let l = mu + (*dim as f64 - 2.0) / 2.0;
            JacobiParams { alpha: l, beta: l }
        }
        DomainSpec::Simplex { dim, gamma } => JacobiParams {
            alpha: gamma.iter().sum::<f64>() + *dim as f64 - 0.5,
            beta: -0.5,
        },
        DomainSpec::ConicSurface { dim, gamma } => JacobiParams {
            alpha: gamma + *dim as f64 - 1.5,
            beta: -0.5,
        },
    }
}

/// The translation multipliers `m_k = P_k(cos θ)/P_k(1)`, `k = 0..=degree`.
pub fn translation_multipliers(ev: &KernelEvaluator, theta: f64, degree: usize) -> Vec<f64> {
    let params = multiplier_params(ev.domain().spec());
    let c = theta.cos().clamp(-1.0, 1.0);
    (0..=degree)
        .map(|k| jacobi_unchecked(k, params, c) / jacobi_at_one(k, params))
        .collect()
}

/// Translation operator `S_θ f`.
pub fn translate(
    ev: &KernelEvaluator,
    theta: f64,
    f: &BandlimitedFunction,
) -> Result<BandlimitedFunction> {
    if !(0.0..std::f64::consts::PI).contains(&theta) {
        return Err(Error::InvalidParameter(format!(
            "translation angle must lie in [0, pi), got {theta}"
        )));
    }
    let mult = translation_multipliers(ev, theta, f.degree());
    Ok(f.apply_multipliers(ev, &mult))
}

/// `r`-th difference operator `(I − S_θ)^{r/2} f` for even `r`, expanded as
/// the finite binomial sum `Σ_k (−1)^k binom(r/2, k) S_θ^k f`.
pub fn difference(
    ev: &KernelEvaluator,
    theta: f64,
    r: usize,
    f: &BandlimitedFunction,
) -> Result<BandlimitedFunction> {
    if r == 0 || r % 2 != 0 {
        return Err(Error::Unsupported(format!(
            "difference order must be a positive even integer, got {r}"
        )));
    }
    let half = r / 2;
    let base = translation_multipliers(ev, theta, f.degree());
    let mult: Vec<f64> = base
        .iter()
        .map(|&m| {
            let mut acc = 0.0;
            let mut binom = 1.0;
            let mut power = 1.0;
            for k in 0..=half {
                acc += if k % 2 == 0 { binom * power } else { -binom * power };
                binom *= (half - k) as f64 / (k + 1) as f64;
                power *= m;
            }
            acc
        })
        .collect();
    Ok(f.apply_multipliers(ev, &mult))
}

/// Modulus of smoothness `ω_r(f, t) = sup_{0 < θ ≤ t} ‖Δ_θ^r f‖₂`, the sup
/// taken over a 32-point geometric grid of `(0, t]` that includes `t`.
pub fn modulus(ev: &KernelEvaluator, t: f64, r: usize, f: &BandlimitedFunction) -> Result<f64> {
    if !(0.0..std::f64::consts::PI).contains(&t) || t <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "modulus scale must lie in (0, pi), got {t}"
        )));
    }
    let mut sup = 0.0_f64;
    for k in 0..32 {
        let theta = t * 0.5_f64.powf(k as f64 / 4.0);
        let d = difference(ev, theta, r, f)?;
        sup = sup.max(d.norm());
    }
    Ok(sup)
}

/// `L²` best-approximation error `E_n(f)₂ = ‖f − Σ_{k≤n} proj_k f‖₂`.
pub fn best_approx_l2(ev: &KernelEvaluator, n: usize, f: &BandlimitedFunction) -> f64 {
    f.tail_norm(ev, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::{Domain, DomainSpec};
    use std::sync::Arc;

    fn evaluator(spec: DomainSpec, deg: usize) -> KernelEvaluator {
        KernelEvaluator::new(Arc::new(Domain::new(spec)), deg).unwrap()
    }

    #[test]
    fn constants_are_fixed_points() {
        let ev = evaluator(DomainSpec::sphere(3).unwrap(), 8);
        let f = BandlimitedFunction::from_fn(&ev, 0, |_| 1.0).unwrap();
        let g = translate(&ev, 0.3, &f).unwrap();
        assert!((g.coeffs()[0] - f.coeffs()[0]).abs() < 1e-14);
    }

    #[test]
    fn chebyshev_translation_closed_form() {
        // On the Chebyshev interval, S_θ T₁ = cos(θ) T₁.
        let ev = evaluator(DomainSpec::interval(-0.5, -0.5).unwrap(), 8);
        let f = BandlimitedFunction::from_fn(&ev, 1, |p| p.coords()[0]).unwrap();
        let theta = 0.7;
        let g = translate(&ev, theta, &f).unwrap();
        let pts = ev.domain().quasi_uniform_points(7).unwrap();
        let fv = f.eval_many(&ev, &pts);
        let gv = g.eval_many(&ev, &pts);
        for (a, b) in fv.iter().zip(&gv) {
            assert!((b - theta.cos() * a).abs() < 1e-12);
        }
    }

    #[test]
    fn difference_kills_constants_and_composes() {
        let ev = evaluator(DomainSpec::ball(2, 0.5).unwrap(), 8);
        let one = BandlimitedFunction::from_fn(&ev, 0, |_| 1.0).unwrap();
        let d = difference(&ev, 0.4, 2, &one).unwrap();
        assert!(d.norm() < 1e-14);

        let f = BandlimitedFunction::from_fn(&ev, 4, |p| {
            let c = p.coords();
            c[0] + 0.3 * c[0] * c[1] - c[1].powi(3)
        })
        .unwrap();
        let d4 = difference(&ev, 0.4, 4, &f).unwrap();
        let d22 = difference(&ev, 0.4, 2, &difference(&ev, 0.4, 2, &f).unwrap()).unwrap();
        for (a, b) in d4.coeffs().iter().zip(d22.coeffs()) {
            assert!((a - b).abs() < 1e-13);
        }
        assert!(difference(&ev, 0.4, 3, &f).is_err());
        assert!(difference(&ev, 0.4, 0, &f).is_err());
    }

    #[test]
    fn chebyshev_modulus_closed_form() {
        // ω₂(T₁, t) = (1 − cos t) ‖T₁‖ with the sup attained at θ = t.
        let ev = evaluator(DomainSpec::interval(-0.5, -0.5).unwrap(), 8);
        let f = BandlimitedFunction::from_fn(&ev, 1, |p| p.coords()[0]).unwrap();
        let t = 0.6;
        let m = modulus(&ev, t, 2, &f).unwrap();
        let expected = (1.0 - t.cos()) * f.norm();
        assert!((m - expected).abs() < 1e-12, "{m} vs {expected}");
    }

    #[test]
    fn modulus_monotone_in_scale() {
        let ev = evaluator(DomainSpec::conic_surface(2, 0.5).unwrap(), 8);
        let f = BandlimitedFunction::from_fn(&ev, 3, |p| p.coords()[2].powi(3) - p.coords()[0])
            .unwrap();
        let m1 = modulus(&ev, 0.2, 2, &f).unwrap();
        let m2 = modulus(&ev, 0.5, 2, &f).unwrap();
        assert!(m1 <= m2 + 1e-14);
    }

    #[test]
    fn best_approx_tail_behavior() {
        let ev = evaluator(DomainSpec::interval(0.0, 0.0).unwrap(), 12);
        let f = BandlimitedFunction::from_fn(&ev, 7, |p| p.coords()[0].powi(7)).unwrap();
        assert!(best_approx_l2(&ev, 7, &f) < 1e-12);
        let mut prev = f64::INFINITY;
        for n in 0..=7 {
            let e = best_approx_l2(&ev, n, &f);
            assert!(e <= prev + 1e-15);
            prev = e;
        }
        assert!(best_approx_l2(&ev, 2, &f) > 1e-3);
    }

    #[test]
    fn contraction_on_random_trials() {
        let ev = evaluator(DomainSpec::sphere(3).unwrap(), 10);
        let mut state = 7u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            ((state >> 32) as f64) / (u32::MAX as f64) * 2.0 - 1.0
        };
        for _ in 0..20 {
            let dim = ev.basis().dim_through(6);
            let coeffs: Vec<f64> = (0..dim).map(|_| next()).collect();
            let f = BandlimitedFunction::from_coeffs(&ev, 6, coeffs).unwrap();
            let theta = 0.05 + 0.45 * (next() + 1.0);
            let g = translate(&ev, theta, &f).unwrap();
            assert!(g.norm() <= f.norm() + 1e-9);
        }
    }
}
