//! Positive cubature rules on separated point sets, and Christoffel
//! functions with their ball-measure comparison.
//!
//! Weights are fitted by nonnegative least squares on the orthonormal-basis
//! moment system: the rows of the design matrix are the basis functions
//! through the target degree evaluated at the nodes, and the moment vector
//! is `e₁` (all higher basis functions integrate to zero under the unit-mass
//! measure). A rule is certified when the residual is at most `1e-8` and all
//! retained weights are strictly positive; at too-coarse separation the fit
//! is infeasible and the caller retries with a halved separation parameter.

use crate::domains::{PointOnDomain, SeparatedSet};
use crate::error::{Error, Result};
use crate::kernels::KernelEvaluator;
use crate::nnls::{nnls, ColMatrix, NnlsOptions};

/// Certified residual bound for a valid rule.
pub const CUBATURE_RESIDUAL_BOUND: f64 = 1e-8;

/// A positive cubature rule exact (to the certified residual) through
/// `degree` on its node set.
#[derive(Debug, Clone)]
pub struct CubatureRule {
    pub degree: usize,
    /// Separation parameter δ, with nodes `δ/n`-separated (for the
    /// degree-`n` rule; frames place `δ/2^j`-separated nodes at level `j`).
    pub delta: f64,
    /// Metric separation of the node set.
    pub separation: f64,
    pub nodes: Vec<PointOnDomain>,
    pub weights: Vec<f64>,
    /// Achieved moment residual `‖Aλ − e₁‖`.
    pub residual: f64,
    /// Nodes of the separated set that received zero weight and were pruned.
    pub pruned: usize,
}

impl CubatureRule {
    /// Apply the rule to a function.
    pub fn integrate(&self, mut f: impl FnMut(&PointOnDomain) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(p, &w)| w * f(p))
            .sum()
    }

    pub fn weight_sum(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Conjugate gradients on the seminormal system `(A D Aᵀ) y = r`.
fn cg_weighted_normal(
    a: &ColMatrix,
    d: &[f64],
    rhs: &[f64],
    tol: f64,
    max_iter: usize,
) -> Vec<f64> {
    let rows = a.rows;
    let matvec = |v: &[f64], out: &mut Vec<f64>| {
        out.clear();
        out.resize(rows, 0.0);
        for (j, &dj) in d.iter().enumerate() {
            let col = a.col(j);
            let mut s = 0.0;
            for (ci, vi) in col.iter().zip(v) {
                s += ci * vi;
            }
            s *= dj;
            for (oi, ci) in out.iter_mut().zip(col) {
                *oi += s * ci;
            }
        }
    };
    let mut y = vec![0.0; rows];
    let mut r = rhs.to_vec();
    let mut p = r.clone();
    let mut ap = Vec::new();
    let rhs_norm: f64 = rhs.iter().map(|t| t * t).sum::<f64>().sqrt();
    let mut rr: f64 = r.iter().map(|t| t * t).sum();
    for _ in 0..max_iter {
        if rr.sqrt() <= tol * rhs_norm.max(1e-300) {
            break;
        }
        matvec(&p, &mut ap);
        let pap: f64 = p.iter().zip(&ap).map(|(&u, &v)| u * v).sum();
        if pap <= 0.0 {
            break;
        }
        let alpha = rr / pap;
        for ((yi, ri), (&pi, &api)) in y.iter_mut().zip(r.iter_mut()).zip(p.iter().zip(&ap)) {
            *yi += alpha * pi;
            *ri -= alpha * api;
        }
        let rr_new: f64 = r.iter().map(|t| t * t).sum();
        let beta = rr_new / rr;
        rr = rr_new;
        for (pi, &ri) in p.iter_mut().zip(&r) {
            *pi = ri + beta * *pi;
        }
    }
    y
}

/// Partition-of-mass seed: a quadrature fine enough to resolve the node
/// spacing is built and each of its weights is assigned to the nearest node,
/// giving the Riemann-sum rule of the nodes' metric cells.
fn voronoi_seed(
    ev: &KernelEvaluator,
    degree: usize,
    nodes: &[PointOnDomain],
    separation: f64,
) -> Option<Vec<f64>> {
    let fine_degree = (2 * degree)
        .max((12.0 / separation.max(1e-3)).ceil() as usize)
        .min(1200);
    let fine = ev.domain().reference_quadrature(fine_degree).ok()?;
    let owners = ev.domain().assign_to_nearest(nodes, &fine.nodes).ok()?;
    let mut seed = vec![0.0; nodes.len()];
    for (&owner, &w) in owners.iter().zip(&fine.weights) {
        seed[owner] += w;
    }
    // Cells that caught no quadrature node keep only a vanishing floor, so
    // the projection diagonal stays nonsingular without distorting cells
    // whose true mass is genuinely tiny (corners of singular weights).
    let floor = 1e-10 / nodes.len() as f64;
    let mut total = 0.0;
    for s in seed.iter_mut() {
        *s = s.max(floor);
        total += *s;
    }
    for s in seed.iter_mut() {
        *s /= total;
    }
    Some(seed)
}

/// Perturb the seed onto the moment manifold:
/// `λ = λ⁰ + D Aᵀ (A D Aᵀ)^{-1} (m − A λ⁰)` with `D = diag(λ⁰)`.
/// The result solves the moments but may leave the positive cone; the
/// caller accepts it only when every weight stays strictly positive — the
/// constructive form of "positive weights exist below the critical
/// separation".
fn seeded_projection(a: &ColMatrix, b: &[f64], seed: &[f64]) -> (Vec<f64>, f64) {
    let rows = a.rows;
    let mut residual = b.to_vec();
    for (j, &s) in seed.iter().enumerate() {
        for (ri, ci) in residual.iter_mut().zip(a.col(j)) {
            *ri -= s * ci;
        }
    }
    let y = cg_weighted_normal(a, seed, &residual, 1e-14, 40 * rows.max(50));
    let mut lambda = seed.to_vec();
    for (j, l) in lambda.iter_mut().enumerate() {
        let col = a.col(j);
        let mut corr = 0.0;
        for (ci, yi) in col.iter().zip(&y) {
            corr += ci * yi;
        }
        *l += seed[j] * corr;
    }
    let mut res = b.to_vec();
    for (j, &l) in lambda.iter().enumerate() {
        for (ri, ci) in res.iter_mut().zip(a.col(j)) {
            *ri -= l * ci;
        }
    }
    let rnorm = res.iter().map(|t| t * t).sum::<f64>().sqrt();
    (lambda, rnorm)
}

/// Fit nonnegative weights on an explicit node set so that all orthonormal
/// basis functions through `degree` are integrated exactly.
///
/// Two constructions are tried in order: the surrogate-seeded projection
/// above (keeps every node with a weight comparable to its ball measure),
/// then active-set nonnegative least squares (sparse, always nonnegative).
pub fn solve_on_nodes(
    ev: &KernelEvaluator,
    degree: usize,
    nodes: &[PointOnDomain],
    delta: f64,
    separation: f64,
) -> Result<CubatureRule> {
    let dim = ev.basis().dim_through(degree);
    if degree > ev.max_degree() {
        return Err(Error::Capacity {
            requested: degree,
            capacity: ev.max_degree(),
        });
    }
    // Design matrix: one column per node holding the basis values.
    let full = ev.basis().dim_through(ev.max_degree());
    let mut data = vec![0.0; dim * nodes.len()];
    let mut scratch = vec![0.0; full];
    for (j, p) in nodes.iter().enumerate() {
        ev.basis().eval_into(p, &mut scratch);
        data[j * dim..(j + 1) * dim].copy_from_slice(&scratch[..dim]);
    }
    let mut b = vec![0.0; dim];
    b[0] = 1.0;
    let a = ColMatrix {
        rows: dim,
        cols: nodes.len(),
        data: &data,
    };

    if nodes.len() >= dim {
        if let Some(seed0) = voronoi_seed(ev, degree, nodes, separation) {
            // Marginal negatives get clipped back toward the seed and the
            // projection repeated; a few rounds usually land strictly inside
            // the positive cone.
            let mut seed = seed0.clone();
            for _round in 0..8 {
                let (lambda, rnorm) = seeded_projection(&a, &b, &seed);
                let feasible = lambda.iter().all(|&l| l > 0.0);
                if feasible && rnorm <= CUBATURE_RESIDUAL_BOUND {
                    return Ok(CubatureRule {
                        degree,
                        delta,
                        separation,
                        nodes: nodes.to_vec(),
                        weights: lambda,
                        residual: rnorm,
                        pruned: 0,
                    });
                }
                if !feasible {
                    seed = lambda
                        .iter()
                        .zip(&seed0)
                        .map(|(&l, &s0)| l.max(0.3 * s0))
                        .collect();
                } else {
                    break;
                }
            }
        }
    }
    let opts = NnlsOptions {
        residual_target: 1e-11,
        block_size: (dim / 8).clamp(16, 256),
        max_passes: 20_000,
    };
    let mut sol = nnls(&a, &b, &opts);
    if sol.residual > CUBATURE_RESIDUAL_BOUND {
        return Err(Error::Infeasible {
            delta,
            residual: sol.residual,
        });
    }
    // Consolidate the support: weights far below the mean are artifacts of
    // the active-set selection, not of the measure geometry. Refit without
    // them as long as the residual stays certified.
    for _ in 0..3 {
        let mean = 1.0 / sol.support.len() as f64;
        let keep: Vec<usize> = sol
            .support
            .iter()
            .copied()
            .filter(|&j| sol.x[j] >= 1e-3 * mean)
            .collect();
        if keep.len() == sol.support.len() || keep.is_empty() {
            break;
        }
        let mut sub = vec![0.0; dim * keep.len()];
        for (cj, &j) in keep.iter().enumerate() {
            sub[cj * dim..(cj + 1) * dim].copy_from_slice(&data[j * dim..(j + 1) * dim]);
        }
        let asub = ColMatrix {
            rows: dim,
            cols: keep.len(),
            data: &sub,
        };
        let refit = nnls(&asub, &b, &opts);
        if refit.residual > CUBATURE_RESIDUAL_BOUND {
            break;
        }
        let mut x = vec![0.0; nodes.len()];
        let mut support = Vec::new();
        for &cj in &refit.support {
            x[keep[cj]] = refit.x[cj];
            support.push(keep[cj]);
        }
        support.sort_unstable();
        sol.x = x;
        sol.support = support;
        sol.residual = refit.residual;
    }
    let mut kept_nodes = Vec::with_capacity(sol.support.len());
    let mut weights = Vec::with_capacity(sol.support.len());
    for &j in &sol.support {
        kept_nodes.push(nodes[j].clone());
        weights.push(sol.x[j]);
    }
    Ok(CubatureRule {
        degree,
        delta,
        separation,
        nodes: kept_nodes,
        weights,
        residual: sol.residual,
        pruned: nodes.len() - sol.support.len(),
    })
}

/// Positive cubature of degree `n` on a maximal `δ/n`-separated set.
pub fn compute_cubature(ev: &KernelEvaluator, n: usize, delta: f64) -> Result<CubatureRule> {
    if !(delta > 0.0 && delta < 1.0 + 1e-12) {
        return Err(Error::InvalidParameter(format!(
            "separation parameter must lie in (0, 1), got {delta}"
        )));
    }
    if n == 0 {
        let node = &ev.domain().quasi_uniform_points(1)?[0];
        return Ok(CubatureRule {
            degree: 0,
            delta,
            separation: std::f64::consts::PI,
            nodes: vec![node.clone()],
            weights: vec![1.0],
            residual: 0.0,
            pruned: 0,
        });
    }
    let eps = delta / n as f64;
    let set = ev.domain().maximal_separated_set(eps)?;
    if set.points.len() < ev.basis().dim_through(n) {
        // Too few nodes can never carry a degree-n rule; never silently
        // reduce the degree — the caller retries with a smaller δ.
        return Err(Error::Infeasible {
            delta,
            residual: f64::INFINITY,
        });
    }
    solve_on_nodes(ev, n, &set.points, delta, eps)
}

/// Separation-explicit variant used by the frame builder, where the
/// exactness degree and the separation scale differ.
pub fn compute_cubature_with_separation(
    ev: &KernelEvaluator,
    degree: usize,
    eps: f64,
    delta: f64,
) -> Result<CubatureRule> {
    let set: SeparatedSet = ev.domain().maximal_separated_set(eps)?;
    if set.points.len() < ev.basis().dim_through(degree) {
        return Err(Error::Infeasible {
            delta,
            residual: f64::INFINITY,
        });
    }
    solve_on_nodes(ev, degree, &set.points, delta, eps)
}

/// Retry wrapper: halve δ until the weight fit certifies, up to `retries`
/// extra attempts.
pub fn compute_cubature_adaptive(
    ev: &KernelEvaluator,
    n: usize,
    delta0: f64,
    retries: usize,
) -> Result<(CubatureRule, usize)> {
    let mut delta = delta0;
    let mut last_err = None;
    for attempt in 0..=retries {
        match compute_cubature(ev, n, delta) {
            Ok(rule) => return Ok((rule, attempt)),
            Err(e @ Error::Infeasible { .. }) => {
                last_err = Some(e);
                delta *= 0.5;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap())
}

/// Two-sided comparison of cubature weights against the ball-measure
/// surrogate at the separation scale.
#[derive(Debug, Clone)]
pub struct WeightRatioReport {
    pub radius: f64,
    pub min_ratio: f64,
    pub max_ratio: f64,
}

pub fn weight_ratio_report(ev: &KernelEvaluator, rule: &CubatureRule) -> Result<WeightRatioReport> {
    let radius = if rule.degree == 0 {
        std::f64::consts::PI
    } else {
        (rule.delta / rule.degree as f64).min(std::f64::consts::PI)
    };
    let mut min_ratio = f64::INFINITY;
    let mut max_ratio = 0.0_f64;
    for (p, &w) in rule.nodes.iter().zip(&rule.weights) {
        let surr = ev.domain().ball_measure_surrogate(p, radius)?;
        let ratio = w / surr;
        min_ratio = min_ratio.min(ratio);
        max_ratio = max_ratio.max(ratio);
    }
    Ok(WeightRatioReport {
        radius,
        min_ratio,
        max_ratio,
    })
}

/// Christoffel function `λ_n(w; p) = 1 / K_n(w; p, p)`.
pub fn christoffel(ev: &KernelEvaluator, n: usize, p: &PointOnDomain) -> Result<f64> {
    Ok(1.0 / ev.kernel_diag_sum(n, p)?)
}

/// Variational upper certificate for the Christoffel function: the weighted
/// `L²` mass of the localized candidate `g = [L_m(p,·)/L_m(p,p)]²` with
/// `m = ⌊n/4⌋`, a nonnegative polynomial of degree `4m ≤ n` normalized to
/// `g(p) = 1`. Always at least `λ_n(w; p)`.
pub fn christoffel_upper(ev: &KernelEvaluator, n: usize, p: &PointOnDomain) -> Result<f64> {
    let m = n / 4;
    if m == 0 {
        // Degree-0 candidate: g ≡ 1, so the bound is the λ₀ value.
        return Ok(1.0);
    }
    let mult = ev.localized_multipliers(m)?;
    let diag = ev.kernel_sum(&mult, p, p)?;
    let quad = ev.reference_quadrature();
    let values = ev.kernel_matrix_via_basis(&mult, std::slice::from_ref(p), &quad.nodes)?;
    let mut acc = 0.0;
    for (&v, &w) in values.iter().zip(&quad.weights) {
        let g = (v / diag) * (v / diag);
        acc += w * g * g;
    }
    Ok(acc)
}

/// One row of a Christoffel profile: the function value, the surrogate ball
/// measure at radius `1/n`, and their ratio.
#[derive(Debug, Clone)]
pub struct ChristoffelSample {
    pub point: PointOnDomain,
    pub lambda: f64,
    pub surrogate: f64,
    pub ratio: f64,
}

pub fn christoffel_profile(
    ev: &KernelEvaluator,
    n: usize,
    pts: &[PointOnDomain],
) -> Result<Vec<ChristoffelSample>> {
    let radius = 1.0 / n.max(1) as f64;
    pts.iter()
        .map(|p| {
            let lambda = christoffel(ev, n, p)?;
            let surrogate = ev.domain().ball_measure_surrogate(p, radius)?;
            Ok(ChristoffelSample {
                point: p.clone(),
                lambda,
                surrogate,
                ratio: lambda / surrogate,
            })
        })
        .collect()
}
