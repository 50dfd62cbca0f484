//! Nonnegative least squares by an active-set method.
//!
//! Lawson–Hanson with two engineering changes for the large, wide systems
//! produced by cubature-weight fitting (a few thousand rows, tens of
//! thousands of columns):
//!
//! * several candidate columns are admitted per outer pass (largest dual
//!   values first) instead of one, which cuts the number of full gradient
//!   sweeps from `O(support)` to a few dozen;
//! * the passive-set factorization is an updating Householder QR; removals
//!   roll the factorization back to the lowest removed position and replay
//!   the surviving columns.
//!
//! Termination is by the usual dual test, or early once the residual drops
//! below `residual_target` — callers here only need a feasible solution with
//! a certified residual, not the exact minimizer.

/// Column-major dense matrix view used by the solver.
pub struct ColMatrix<'a> {
    pub rows: usize,
    pub cols: usize,
    pub data: &'a [f64],
}

impl ColMatrix<'_> {
    pub fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }
}

pub struct NnlsOptions {
    /// Early-exit residual (‖Aλ − b‖).
    pub residual_target: f64,
    /// Columns admitted per outer pass.
    pub block_size: usize,
    /// Hard cap on outer passes.
    pub max_passes: usize,
}

impl Default for NnlsOptions {
    fn default() -> Self {
        Self {
            residual_target: 1e-11,
            block_size: 64,
            max_passes: 10_000,
        }
    }
}

#[derive(Debug)]
pub struct NnlsSolution {
    /// Dense solution, zero on the active set.
    pub x: Vec<f64>,
    /// Final residual norm ‖Ax − b‖.
    pub residual: f64,
    /// Indices with strictly positive weights.
    pub support: Vec<usize>,
}

/// Updating Householder QR of the passive columns.
struct UpdatingQr {
    rows: usize,
    /// Per passive column: the reflector for that column (v, with v[0]
    /// implicitly adjusted) stored full-length below its pivot, plus the R
    /// column above.
    r_cols: Vec<Vec<f64>>,
    reflectors: Vec<(usize, Vec<f64>, f64)>, // (pivot, v, tau)
    qtb: Vec<f64>,
}

impl UpdatingQr {
    fn new(rows: usize, b: &[f64]) -> Self {
        Self {
            rows,
            r_cols: Vec::new(),
            reflectors: Vec::new(),
            qtb: b.to_vec(),
        }
    }

    fn size(&self) -> usize {
        self.r_cols.len()
    }

    fn apply_reflector(pivot: usize, v: &[f64], tau: f64, target: &mut [f64]) {
        let mut dot = 0.0;
        for (i, &vi) in v.iter().enumerate() {
            dot += vi * target[pivot + i];
        }
        dot *= tau;
        for (i, &vi) in v.iter().enumerate() {
            target[pivot + i] -= dot * vi;
        }
    }

    /// Try to append a column; returns false when the column is numerically
    /// dependent on the current passive set.
    fn push_col(&mut self, col: &[f64]) -> bool {
        let p = self.size();
        if p >= self.rows {
            return false;
        }
        let mut work = col.to_vec();
        for (pivot, v, tau) in &self.reflectors {
            Self::apply_reflector(*pivot, v, *tau, &mut work);
        }
        // Householder for work[p..].
        let tail = &work[p..];
        let norm: f64 = tail.iter().map(|t| t * t).sum::<f64>().sqrt();
        let col_norm: f64 = col.iter().map(|t| t * t).sum::<f64>().sqrt();
        if norm <= 1e-13 * col_norm.max(1.0) {
            return false;
        }
        let alpha = if tail[0] >= 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = tail.to_vec();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|t| t * t).sum();
        if vnorm2 <= 0.0 {
            return false;
        }
        let tau = 2.0 / vnorm2;
        Self::apply_reflector(p, &v, tau, &mut self.qtb);
        let mut r_col = work[..p].to_vec();
        r_col.push(alpha);
        self.r_cols.push(r_col);
        self.reflectors.push((p, v, tau));
        true
    }

    /// Roll the factorization back to `keep` columns (reflectors are
    /// involutions, so re-applying undoes them in reverse order).
    fn truncate(&mut self, keep: usize) {
        while self.size() > keep {
            let (pivot, v, tau) = self.reflectors.pop().unwrap();
            Self::apply_reflector(pivot, &v, tau, &mut self.qtb);
            self.r_cols.pop();
        }
    }

    /// Solve `R z = (Qᵀ b)[..p]` by back substitution.
    fn solve(&self) -> Vec<f64> {
        let p = self.size();
        let mut z = self.qtb[..p].to_vec();
        for i in (0..p).rev() {
            for k in (i + 1)..p {
                z[i] -= self.r_cols[k][i] * z[k];
            }
            z[i] /= self.r_cols[i][i];
        }
        z
    }
}

pub fn nnls(a: &ColMatrix, b: &[f64], opts: &NnlsOptions) -> NnlsSolution {
    let (rows, cols) = (a.rows, a.cols);
    assert_eq!(b.len(), rows);
    let mut passive: Vec<usize> = Vec::new();
    let mut in_passive = vec![false; cols];
    let mut blocked = vec![false; cols];
    let mut x_passive: Vec<f64> = Vec::new();
    let mut qr = UpdatingQr::new(rows, b);

    let grad_scale: f64 = {
        let mut m = 0.0_f64;
        for j in 0..cols {
            let g: f64 = a.col(j).iter().zip(b).map(|(&c, &r)| c * r).sum();
            m = m.max(g.abs());
        }
        m.max(1e-300)
    };
    let grad_tol = 1e-12 * grad_scale;

    let mut residual = vec![0.0; rows];
    let mut prev_rnorm = f64::INFINITY;
    let mut best: Option<(f64, Vec<usize>, Vec<f64>)> = None;
    let mut effective_block = opts.block_size.max(1);
    'outer: for _pass in 0..opts.max_passes {
        // r = b − A_P x_P
        residual.copy_from_slice(b);
        for (idx, &j) in passive.iter().enumerate() {
            let xj = x_passive[idx];
            if xj != 0.0 {
                for (ri, &ci) in residual.iter_mut().zip(a.col(j)) {
                    *ri -= xj * ci;
                }
            }
        }
        let rnorm: f64 = residual.iter().map(|t| t * t).sum::<f64>().sqrt();
        if std::env::var("NNLS_DEBUG").is_ok() {
            eprintln!("pass {_pass}: rnorm {rnorm:.3e} support {}", passive.len());
        }
        if best.as_ref().is_none_or(|(r, _, _)| rnorm < *r) {
            best = Some((rnorm, passive.clone(), x_passive.clone()));
        }
        if rnorm <= opts.residual_target {
            break;
        }
        if rnorm >= prev_rnorm * (1.0 - 1e-14) {
            if effective_block > 1 {
                // Stale block duals can stall; classic one-column admission
                // is immune, so finish in that mode.
                effective_block = 1;
            } else {
                // A pass without strict progress would repeat itself.
                break;
            }
        }
        prev_rnorm = rnorm.min(prev_rnorm);

        // Dual vector on the active set; a block of admission candidates per
        // gradient sweep. Rejections (`blocked`) last only within the pass.
        for b in blocked.iter_mut() {
            *b = false;
        }
        let mut candidates: Vec<(f64, usize)> = Vec::new();
        for j in 0..cols {
            if in_passive[j] {
                continue;
            }
            let g: f64 = a.col(j).iter().zip(&residual).map(|(&c, &r)| c * r).sum();
            if g > grad_tol {
                candidates.push((g, j));
            }
        }
        if candidates.is_empty() {
            break;
        }
        candidates.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap().then(x.1.cmp(&y.1)));
        let take = candidates.len().min(effective_block);
        let mut support_changed = false;

        'candidates: for &(_, j) in candidates.iter().take(take) {
            if in_passive[j] || blocked[j] || qr.size() >= rows {
                continue;
            }
            // Duals are stale after earlier admissions in the block; the
            // ztest below rejects any candidate that no longer helps.
            if !qr.push_col(a.col(j)) {
                blocked[j] = true;
                continue;
            }
            passive.push(j);
            in_passive[j] = true;
            x_passive.push(0.0);
            // Classic feasibility restoration. Invariants: the freshly
            // admitted column sits last while its weight is still zero, and
            // every other entry is strictly positive.
            loop {
                let z = qr.solve();
                let last = passive.len() - 1;
                if passive[last] == j && x_passive[last] == 0.0 && z[last] <= 0.0 {
                    // The new column does not help at this support: reject
                    // it for this pass before any weights move.
                    in_passive[j] = false;
                    blocked[j] = true;
                    qr.truncate(last);
                    passive.truncate(last);
                    x_passive.truncate(last);
                    continue 'candidates;
                }
                let neg: Vec<usize> = (0..z.len()).filter(|&i| z[i] <= 0.0).collect();
                if neg.is_empty() {
                    x_passive = z;
                    support_changed = true;
                    continue 'candidates;
                }
                // Every negative entry now has positive current weight.
                let mut alpha = 1.0_f64;
                let mut pivot = neg[0];
                for &i in &neg {
                    let step = x_passive[i] / (x_passive[i] - z[i]);
                    if step < alpha {
                        alpha = step;
                        pivot = i;
                    }
                }
                let alpha = alpha.clamp(0.0, 1.0);
                for i in 0..z.len() {
                    x_passive[i] += alpha * (z[i] - x_passive[i]);
                }
                x_passive[pivot] = 0.0;
                // Drop everything that landed at zero and replay survivors.
                let removed: Vec<usize> = (0..x_passive.len())
                    .filter(|&i| x_passive[i] <= 1e-14)
                    .collect();
                if removed.is_empty() {
                    continue;
                }
                support_changed = true;
                let first = removed[0];
                let survivors: Vec<(usize, f64)> = (first..passive.len())
                    .filter(|i| !removed.contains(i))
                    .map(|i| (passive[i], x_passive[i]))
                    .collect();
                for &i in &removed {
                    in_passive[passive[i]] = false;
                }
                qr.truncate(first);
                passive.truncate(first);
                x_passive.truncate(first);
                for (jj, xj) in survivors {
                    if qr.push_col(a.col(jj)) {
                        passive.push(jj);
                        in_passive[jj] = true;
                        x_passive.push(xj);
                    } else {
                        blocked[jj] = true;
                    }
                }
            }
        }
        if !support_changed {
            break 'outer;
        }
    }

    // Final pass may have ended worse than an earlier state; keep the best.
    residual.copy_from_slice(b);
    for (idx, &j) in passive.iter().enumerate() {
        let xj = x_passive[idx];
        if xj != 0.0 {
            for (ri, &ci) in residual.iter_mut().zip(a.col(j)) {
                *ri -= xj * ci;
            }
        }
    }
    let final_rnorm: f64 = residual.iter().map(|t| t * t).sum::<f64>().sqrt();
    if let Some((r, p, x)) = best {
        if r < final_rnorm {
            passive = p;
            x_passive = x;
        }
    }
    let mut x = vec![0.0; cols];
    let mut support = Vec::new();
    for (&j, &v) in passive.iter().zip(&x_passive) {
        if v > 0.0 {
            x[j] = v;
            support.push(j);
        }
    }
    support.sort_unstable();
    // Final residual from scratch.
    let mut res = b.to_vec();
    for &j in &support {
        let xj = x[j];
        for (ri, &ci) in res.iter_mut().zip(a.col(j)) {
            *ri -= xj * ci;
        }
    }
    let residual = res.iter().map(|t| t * t).sum::<f64>().sqrt();
    NnlsSolution {
        x,
        residual,
        support,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(rows: usize, cols: usize, data: &[f64], b: &[f64]) -> NnlsSolution {
        let a = ColMatrix {
            rows,
            cols,
            data,
        };
        nnls(&a, b, &NnlsOptions::default())
    }

    #[test]
    fn identity_projects_positive_part() {
        // A = I₃, b = (1, −2, 3) → x = (1, 0, 3).
        let data = vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0];
        let sol = solve(3, 3, &data, &[1.0, -2.0, 3.0]);
        assert!((sol.x[0] - 1.0).abs() < 1e-12);
        assert_eq!(sol.x[1], 0.0);
        assert!((sol.x[2] - 3.0).abs() < 1e-12);
        assert!((sol.residual - 2.0).abs() < 1e-12);
    }

    #[test]
    fn consistent_overdetermined_system() {
        // Two columns spanning b exactly with positive coefficients.
        let data = vec![1.0, 1.0, 0.0, /* col2 */ 0.0, 1.0, 1.0];
        let sol = solve(3, 2, &data, &[2.0, 5.0, 3.0]);
        assert!(sol.residual < 1e-12, "residual {}", sol.residual);
        assert!((sol.x[0] - 2.0).abs() < 1e-12);
        assert!((sol.x[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn matches_exhaustive_search_on_random_problems() {
        // Deterministic LCG-generated small problems; compare against brute
        // force over all support patterns (the support solution solved by
        // unconstrained normal equations, feasibility enforced).
        let mut state = 0x2545F4914F6CDD1D_u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 32) as f64) / (u32::MAX as f64) * 2.0 - 1.0
        };
        for trial in 0..40 {
            let rows = 5;
            let cols = 6;
            let data: Vec<f64> = (0..rows * cols).map(|_| next()).collect();
            let b: Vec<f64> = (0..rows).map(|_| next()).collect();
            let a = ColMatrix {
                rows,
                cols,
                data: &data,
            };
            let sol = nnls(&a, &b, &NnlsOptions::default());

            // Brute force.
            let mut best = f64::INFINITY;
            for mask in 0..(1u32 << cols) {
                let idx: Vec<usize> = (0..cols).filter(|j| mask >> j & 1 == 1).collect();
                if idx.len() > rows {
                    continue;
                }
                // Normal equations on the subset.
                let k = idx.len();
                let mut g = vec![0.0; k * k];
                let mut rhs = vec![0.0; k];
                for (ii, &ci) in idx.iter().enumerate() {
                    for (jj, &cj) in idx.iter().enumerate() {
                        g[ii * k + jj] = a
                            .col(ci)
                            .iter()
                            .zip(a.col(cj))
                            .map(|(&u, &v)| u * v)
                            .sum();
                    }
                    rhs[ii] = a.col(ci).iter().zip(&b).map(|(&u, &v)| u * v).sum();
                }
                // Gaussian elimination.
                let mut ok = true;
                for p in 0..k {
                    let mut piv = p;
                    for r in p + 1..k {
                        if g[r * k + p].abs() > g[piv * k + p].abs() {
                            piv = r;
                        }
                    }
                    if g[piv * k + p].abs() < 1e-12 {
                        ok = false;
                        break;
                    }
                    if piv != p {
                        for c in 0..k {
                            g.swap(p * k + c, piv * k + c);
                        }
                        rhs.swap(p, piv);
                    }
                    for r in p + 1..k {
                        let f = g[r * k + p] / g[p * k + p];
                        for c in p..k {
                            g[r * k + c] -= f * g[p * k + c];
                        }
                        rhs[r] -= f * rhs[p];
                    }
                }
                if !ok {
                    continue;
                }
                let mut xs = vec![0.0; k];
                for i in (0..k).rev() {
                    let mut v = rhs[i];
                    for c in i + 1..k {
                        v -= g[i * k + c] * xs[c];
                    }
                    xs[i] = v / g[i * k + i];
                }
                if xs.iter().any(|&v| v < 0.0) {
                    continue;
                }
                let mut res = b.clone();
                for (ii, &ci) in idx.iter().enumerate() {
                    for (rp, &av) in res.iter_mut().zip(a.col(ci)) {
                        *rp -= xs[ii] * av;
                    }
                }
                let rn = res.iter().map(|t| t * t).sum::<f64>().sqrt();
                best = best.min(rn);
            }
            assert!(
                sol.residual <= best + 1e-8,
                "trial {trial}: nnls {} vs exhaustive {}",
                sol.residual,
                best
            );
            // KKT feasibility of the returned point.
            assert!(sol.x.iter().all(|&v| v >= 0.0));
        }
    }

    #[test]
    fn wide_system_unit_moment() {
        // A cubature-shaped toy: first row all ones, remaining rows random
        // zero-mean; b = e₁. Plenty of columns — a nonnegative exact solution
        // exists (e.g. uniform weights would nearly work).
        let rows = 6;
        let cols = 40;
        let mut state = 999_u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            ((state >> 32) as f64) / (u32::MAX as f64) * 2.0 - 1.0
        };
        let mut data = vec![0.0; rows * cols];
        for j in 0..cols {
            data[j * rows] = 1.0;
            for i in 1..rows {
                data[j * rows + i] = next();
            }
        }
        let mut b = vec![0.0; rows];
        b[0] = 1.0;
        let a = ColMatrix {
            rows,
            cols,
            data: &data,
        };
        let sol = nnls(&a, &b, &NnlsOptions::default());
        assert!(sol.residual < 1e-10, "residual {}", sol.residual);
        let total: f64 = sol.x.iter().sum();
        assert!((total - 1.0).abs() < 1e-10);
    }
}
