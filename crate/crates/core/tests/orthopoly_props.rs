//! Property tests and independent oracles for the 1-D polynomial layer.

use lockern::orthopoly::{
    chebyshev_t, gauss_jacobi, jacobi, jacobi_norm, jacobi_unchecked, z_gegenbauer, z_jacobi,
    JacobiParams,
};
use proptest::prelude::*;

/// Independent moment oracle: `I_k = ∫ t^k (1−t)^α (1+t)^β dt` by the
/// integration-by-parts recurrence
/// `I_k = ((k−1) I_{k−2} + (β−α) I_{k−1}) / (k+1+α+β)`.
fn monomial_moments(p: JacobiParams, kmax: usize) -> Vec<f64> {
    let mut m = vec![0.0; kmax + 1];
    m[0] = p.mass();
    if kmax == 0 {
        return m;
    }
    m[1] = (p.beta - p.alpha) / (p.alpha + p.beta + 2.0) * m[0];
    for k in 2..=kmax {
        m[k] = ((k as f64 - 1.0) * m[k - 2] + (p.beta - p.alpha) * m[k - 1])
            / (k as f64 + 1.0 + p.alpha + p.beta);
    }
    m
}

fn params_strategy() -> impl Strategy<Value = JacobiParams> {
    (-0.5f64..3.0, -0.5f64..3.0).prop_map(|(a, b)| JacobiParams::new(a, b).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The three-term recurrence residual stays small along the whole sweep.
    #[test]
    fn recurrence_residual_small(p in params_strategy(), t in -1.0f64..1.0) {
        let nmax = 256usize;
        let mut vals = vec![0.0; nmax + 1];
        lockern::orthopoly::jacobi_all(p, t, &mut vals);
        let (a, b) = (p.alpha, p.beta);
        for n in 1..nmax {
            let nf = n as f64;
            let c = 2.0 * nf + a + b;
            let a1 = 2.0 * (nf + 1.0) * (nf + a + b + 1.0) * c;
            let a2 = (c + 1.0) * (a * a - b * b);
            let a3 = (c + 1.0) * (c + 2.0) * c;
            let a4 = 2.0 * (nf + a) * (nf + b) * (c + 2.0);
            let resid = a1 * vals[n + 1] - (a2 + a3 * t) * vals[n] + a4 * vals[n - 1];
            let scale = a1.abs() * vals[n + 1].abs().max(1.0);
            prop_assert!(resid.abs() <= 1e-10 * scale, "n={n}: residual {resid}");
        }
    }

    /// Quadrature orthogonality of distinct degrees.
    #[test]
    fn orthogonality_under_quadrature(p in params_strategy(), n in 0usize..40, m in 0usize..40) {
        prop_assume!(n != m);
        let rule = gauss_jacobi(64, p).unwrap();
        let v = rule.integrate(|t| jacobi_unchecked(n, p, t) * jacobi_unchecked(m, p, t));
        let hn = jacobi_norm(n, p);
        let hm = jacobi_norm(m, p);
        prop_assert!(v.abs() <= 1e-10 * (hn * hm).sqrt(), "inner product {v}");
    }

    /// Gauss–Jacobi rules hit the monomial-moment oracle over the whole
    /// exactness range.
    #[test]
    fn gauss_exactness_against_moment_oracle(p in params_strategy(), m in 1usize..=64) {
        let rule = gauss_jacobi(m, p).unwrap();
        let moments = monomial_moments(p, 2 * m - 1);
        for k in (0..=2 * m - 1).step_by(((2 * m) / 8).max(1)) {
            let v = rule.integrate(|t| t.powi(k as i32));
            let scale = moments[0].max(moments[k].abs());
            prop_assert!(
                (v - moments[k]).abs() <= 1e-12 * scale,
                "k={k}: {v} vs {}",
                moments[k]
            );
        }
    }

    /// The Gegenbauer and symmetric-Jacobi kernel normalizations agree up to
    /// a t-independent constant under λ ↔ (λ−1/2, λ−1/2).
    #[test]
    fn gegenbauer_jacobi_correspondence(lam in 0.25f64..3.0, t in -1.0f64..1.0) {
        let p = JacobiParams::new(lam - 0.5, lam - 0.5).unwrap();
        let mut ratio_at_one = None;
        for n in 0..=20usize {
            let zg = z_gegenbauer(n, lam, 1.0).unwrap();
            let zj = z_jacobi(n, p, 1.0).unwrap();
            let r = zg / zj;
            match ratio_at_one {
                None => ratio_at_one = Some(r),
                Some(r0) => prop_assert!((r - r0).abs() <= 1e-8 * r0.abs(), "n={n}"),
            }
            let vg = z_gegenbauer(n, lam, t).unwrap();
            let vj = z_jacobi(n, p, t).unwrap();
            prop_assert!(
                (vg - r * vj).abs() <= 1e-8 * vg.abs().max(1.0),
                "n={n} t={t}: {vg} vs {}",
                r * vj
            );
        }
    }
}

#[test]
fn chebyshev_limit_constant() {
    // λ → 0⁺ of ((n+λ)/λ) C_n^λ approaches 2 T_n for n ≥ 1; the λ = 0 branch
    // uses exactly that constant.
    for n in 1..=8usize {
        for &t in &[-0.9, -0.3, 0.2, 0.8] {
            let lim = z_gegenbauer(n, 1e-9, t).unwrap();
            let branch = z_gegenbauer(n, 0.0, t).unwrap();
            assert!(
                (lim - branch).abs() < 1e-5 * branch.abs().max(1.0),
                "n={n} t={t}: {lim} vs {branch}"
            );
            assert!((branch - 2.0 * chebyshev_t(n, t)).abs() < 1e-12);
        }
    }
}

#[test]
fn gauss_rules_match_closed_norm() {
    // jacobi_norm (closed form) against quadrature of P_n².
    for &(a, b) in &[(0.0, 0.0), (-0.5, -0.5), (1.5, -0.25), (2.0, 3.0)] {
        let p = JacobiParams::new(a, b).unwrap();
        let rule = gauss_jacobi(48, p).unwrap();
        for n in [0usize, 1, 5, 17, 40] {
            let v = rule.integrate(|t| {
                let x = jacobi_unchecked(n, p, t);
                x * x
            });
            let h = jacobi_norm(n, p);
            assert!(
                (v - h).abs() <= 1e-11 * h,
                "(a,b)=({a},{b}) n={n}: {v} vs {h}"
            );
        }
    }
}

#[test]
fn jacobi_argument_validation() {
    let p = JacobiParams::new(0.3, 0.3).unwrap();
    assert!(jacobi(2, p, 1.0000001).is_err());
    assert!(jacobi(2, p, -2.0).is_err());
}
