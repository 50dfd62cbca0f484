//! Needlet-type tight frames.
//!
//! Level kernels are `F_0 ≡ 1` and `F_j = Σ_k b(k/2^{j−1}) P_k` for `j ≥ 1`,
//! where `b` is the frame generator with `Σ_j b(t/2^j)² = 1`; the degree-`k`
//! content of level `j` is confined to `2^{j−2} < k < 2^j`. Discretizing the
//! semi-discrete Calderón decomposition `f = Σ_j F_j * F_j * f` with one
//! positive cubature rule per level produces the frame elements
//! `ψ_{z,j} = √λ_{z,j} F_j(·, z)`, and the family is a Parseval frame on
//! band-limited functions once each level's rule integrates products
//! `F_j(x,·) F_j(·,y)` exactly — degree `2^{j+1} − 2`, which is why the
//! level-`j` rule is built with exactness degree `2^{j+1}` while its nodes
//! stay `δ/2^j`-separated.

use crate::cubature::{compute_cubature_with_separation, CubatureRule};
use crate::cutoff::{CutoffFunction, CutoffKind};
use crate::domains::PointOnDomain;
use crate::error::{Error, Result};
use crate::kernels::{BandlimitedFunction, KernelEvaluator};

/// One frequency level of the frame.
#[derive(Debug)]
pub struct FrameLevel {
    pub j: usize,
    /// Generator samples indexed by polynomial degree (empty beyond the
    /// level band).
    pub multipliers: Vec<f64>,
    pub rule: CubatureRule,
}

/// A tight frame with levels `0..=max_level`.
#[derive(Debug)]
pub struct FrameSystem {
    pub levels: Vec<FrameLevel>,
    pub delta: f64,
    /// Certified positivity floor of the generator on `[3/5, 5/3]`.
    pub rho: f64,
    /// Retries spent while certifying per-level cubature.
    pub retries_used: usize,
}

/// Frame coefficients `⟨f, ψ_{z,j}⟩`, grouped by level in node order.
#[derive(Debug, Clone)]
pub struct FrameCoefficients {
    pub levels: Vec<Vec<f64>>,
}

impl FrameCoefficients {
    /// Total squared coefficient mass.
    pub fn energy(&self) -> f64 {
        self.levels
            .iter()
            .map(|l| l.iter().map(|c| c * c).sum::<f64>())
            .sum()
    }

    pub fn level_energy(&self, j: usize) -> f64 {
        self.levels[j].iter().map(|c| c * c).sum()
    }
}

/// Generator samples `b(k / 2^{j−1})` for `k = 0..2^j` (the value at
/// `k = 2^j` is zero and is dropped).
fn level_multipliers(generator: &CutoffFunction, j: usize) -> Vec<f64> {
    if j == 0 {
        return vec![1.0];
    }
    let scale = 2f64.powi(j as i32 - 1);
    (0..(1usize << j))
        .map(|k| generator.eval(k as f64 / scale).unwrap())
        .collect()
}

impl FrameSystem {
    /// Build a frame with levels `0..=max_level`, nodes `δ/2^j`-separated at
    /// level `j`, each level's cubature certified at exactness degree
    /// `2^{j+1}` (retrying with halved δ at most 4 times per level).
    pub fn build(ev: &KernelEvaluator, max_level: usize, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta <= 2.0) {
            return Err(Error::InvalidParameter(format!(
                "frame separation parameter must lie in (0, 2], got {delta}"
            )));
        }
        let needed = 1usize << (max_level + 1);
        if needed > ev.max_degree() {
            return Err(Error::Capacity {
                requested: needed,
                capacity: ev.max_degree(),
            });
        }
        let generator = CutoffFunction::new(CutoffKind::FrameGenerator);
        let rho = generator.rho_certificate();
        let mut levels = Vec::with_capacity(max_level + 1);
        let mut retries_used = 0;
        for j in 0..=max_level {
            let degree = 1usize << (j + 1);
            let base_eps = delta / 2f64.powi(j as i32);
            let mut eps = base_eps.min(std::f64::consts::PI);
            let mut built = None;
            for _ in 0..=4 {
                match compute_cubature_with_separation(ev, degree, eps, delta) {
                    Ok(rule) => {
                        built = Some(rule);
                        break;
                    }
                    Err(Error::Infeasible { .. }) => {
                        eps *= 0.5;
                        retries_used += 1;
                    }
                    Err(e) => return Err(e),
                }
            }
            let rule = built.ok_or(Error::Infeasible {
                delta,
                residual: f64::INFINITY,
            })?;
            levels.push(FrameLevel {
                j,
                multipliers: level_multipliers(&generator, j),
                rule,
            });
        }
        Ok(Self {
            levels,
            delta,
            rho,
            retries_used,
        })
    }

    pub fn max_level(&self) -> usize {
        self.levels.len() - 1
    }

    /// Largest band-limit degree analyzable exactly: `deg f < 2^{J−1}`.
    pub fn band_limit(&self) -> usize {
        if self.max_level() == 0 {
            1
        } else {
            1usize << (self.max_level() - 1)
        }
    }

    /// Level kernel `F_j(p, q)`.
    pub fn level_kernel(
        &self,
        ev: &KernelEvaluator,
        j: usize,
        p: &PointOnDomain,
        q: &PointOnDomain,
    ) -> Result<f64> {
        let level = self
            .levels
            .get(j)
            .ok_or_else(|| Error::InvalidParameter(format!("level {j} not built")))?;
        ev.kernel_sum(&level.multipliers, p, q)
    }

    /// The frame element `ψ_{z,j}` at points `pts`.
    pub fn frame_element(
        &self,
        ev: &KernelEvaluator,
        j: usize,
        z_index: usize,
        pts: &[PointOnDomain],
    ) -> Result<Vec<f64>> {
        let level = self
            .levels
            .get(j)
            .ok_or_else(|| Error::InvalidParameter(format!("level {j} not built")))?;
        let z = level
            .rule
            .nodes
            .get(z_index)
            .ok_or_else(|| Error::InvalidParameter(format!("node {z_index} out of range")))?;
        let values =
            ev.kernel_matrix_via_basis(&level.multipliers, std::slice::from_ref(z), pts)?;
        let scale = level.rule.weights[z_index].sqrt();
        Ok(values.iter().map(|v| scale * v).collect())
    }

    /// Analysis transform: `⟨f, ψ_{z,j}⟩ = √λ_{z,j} (F_j * f)(z)`.
    pub fn analyze(
        &self,
        ev: &KernelEvaluator,
        f: &BandlimitedFunction,
    ) -> Result<FrameCoefficients> {
        if f.degree() >= self.band_limit() {
            return Err(Error::Capacity {
                requested: f.degree(),
                capacity: self.band_limit().saturating_sub(1),
            });
        }
        let mut levels = Vec::with_capacity(self.levels.len());
        for level in &self.levels {
            let filtered = f.apply_multipliers(ev, &level.multipliers);
            let vals = filtered.eval_many(ev, &level.rule.nodes);
            levels.push(
                vals.iter()
                    .zip(&level.rule.weights)
                    .map(|(&v, &w)| w.sqrt() * v)
                    .collect(),
            );
        }
        Ok(FrameCoefficients { levels })
    }

    /// Synthesis transform: `Σ_{j,z} c_{z,j} ψ_{z,j}` as a band-limited
    /// function.
    pub fn synthesize(
        &self,
        ev: &KernelEvaluator,
        coeffs: &FrameCoefficients,
    ) -> Result<BandlimitedFunction> {
        if coeffs.levels.len() != self.levels.len() {
            return Err(Error::Mismatch(format!(
                "{} coefficient levels for a frame with {} levels",
                coeffs.levels.len(),
                self.levels.len()
            )));
        }
        let degree = (1usize << self.max_level()) - 1;
        let dim = ev.basis().dim_through(degree);
        let full = ev.basis().dim_through(ev.max_degree());
        let mut acc = vec![0.0; dim];
        let mut scratch = vec![0.0; full];
        for (level, cs) in self.levels.iter().zip(&coeffs.levels) {
            if cs.len() != level.rule.nodes.len() {
                return Err(Error::Mismatch(format!(
                    "level {}: {} coefficients for {} nodes",
                    level.j,
                    cs.len(),
                    level.rule.nodes.len()
                )));
            }
            // Σ_z c_z √λ_z φ_ν(z), then one multiplier application.
            let mut inner = vec![0.0; dim];
            for ((z, &w), &c) in level.rule.nodes.iter().zip(&level.rule.weights).zip(cs) {
                if c == 0.0 {
                    continue;
                }
                ev.basis().eval_into(z, &mut scratch);
                let s = c * w.sqrt();
                for (iv, &phi) in inner.iter_mut().zip(&scratch[..dim]) {
                    *iv += s * phi;
                }
            }
            for (k, &m) in level.multipliers.iter().enumerate() {
                if k > degree || m == 0.0 {
                    continue;
                }
                for i in ev.basis().degree_range(k) {
                    acc[i] += m * inner[i];
                }
            }
        }
        BandlimitedFunction::from_coeffs(ev, degree, acc)
    }

    /// Decay constant of one frame element:
    /// `sup_x |ψ_{z,j}(x)| √w(B(z, 2^{−j})) (1 + 2^j d(x,z))^κ`.
    pub fn decay_constant(
        &self,
        ev: &KernelEvaluator,
        j: usize,
        z_index: usize,
        kappa: f64,
    ) -> Result<f64> {
        let far = ev.domain().quasi_uniform_points(256)?;
        let values = self.frame_element(ev, j, z_index, &far)?;
        let level = &self.levels[j];
        let z = &level.rule.nodes[z_index];
        let scale = 2f64.powi(j as i32);
        let surr = ev
            .domain()
            .ball_measure_surrogate(z, (1.0 / scale).min(std::f64::consts::PI))?
            .sqrt();
        let mut bound = 0.0_f64;
        for (x, &v) in far.iter().zip(&values) {
            let dist = ev.domain().distance(x, z);
            bound = bound.max(v.abs() * surr * (1.0 + scale * dist).powf(kappa));
        }
        Ok(bound)
    }
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
    fn level_zero_kernel_is_one() {
        let ev = evaluator(DomainSpec::interval(0.0, 0.0).unwrap(), 8);
        let fs = FrameSystem::build(&ev, 2, 1.0).unwrap();
        let p = ev.domain().point(&[0.3]).unwrap();
        let q = ev.domain().point(&[-0.7]).unwrap();
        assert_eq!(fs.level_kernel(&ev, 0, &p, &q).unwrap(), 1.0);
        assert!(fs.rho > 0.2);
    }

    #[test]
    fn level_kernels_annihilate_constants() {
        let ev = evaluator(DomainSpec::ball(2, 0.5).unwrap(), 8);
        let fs = FrameSystem::build(&ev, 2, 1.0).unwrap();
        let p = ev.domain().point(&[0.2, 0.1]).unwrap();
        let quad = ev.reference_quadrature();
        for j in 1..=2 {
            let mut acc = 0.0;
            for (z, &w) in quad.nodes.iter().zip(&quad.weights) {
                acc += w * fs.level_kernel(&ev, j, &p, z).unwrap();
            }
            assert!(acc.abs() < 1e-10, "level {j}: mean {acc}");
        }
    }

    #[test]
    fn multiplier_band_support() {
        let gen = CutoffFunction::new(CutoffKind::FrameGenerator);
        for j in 1..=4usize {
            let m = level_multipliers(&gen, j);
            assert_eq!(m.len(), 1 << j);
            for (k, &v) in m.iter().enumerate() {
                let inside = k as f64 > 2f64.powi(j as i32 - 2) && k < (1 << j);
                if !inside {
                    assert_eq!(v, 0.0, "j={j} k={k}");
                }
            }
        }
    }

    #[test]
    fn parseval_and_roundtrip_small() {
        let ev = evaluator(DomainSpec::interval(0.0, 0.0).unwrap(), 16);
        let fs = FrameSystem::build(&ev, 3, 0.8).unwrap();
        // deg f < 2^{J−1} = 4.
        let f = BandlimitedFunction::from_fn(&ev, 3, |p| {
            let t = p.coords()[0];
            0.3 - t + 0.5 * t * t + t * t * t
        })
        .unwrap();
        let coeffs = fs.analyze(&ev, &f).unwrap();
        let energy = coeffs.energy();
        let norm2 = f.norm() * f.norm();
        assert!(
            (energy - norm2).abs() <= 1e-8 * norm2,
            "energy {energy} vs {norm2}"
        );
        let g = fs.synthesize(&ev, &coeffs).unwrap();
        let pts = ev.domain().quasi_uniform_points(9).unwrap();
        let fv = f.eval_many(&ev, &pts);
        let gv = g.eval_many(&ev, &pts);
        for (a, b) in fv.iter().zip(&gv) {
            assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        }
    }

    #[test]
    fn constants_live_on_level_zero() {
        let ev = evaluator(DomainSpec::sphere(3).unwrap(), 16);
        let fs = FrameSystem::build(&ev, 3, 1.0).unwrap();
        let f = BandlimitedFunction::from_fn(&ev, 0, |_| 1.0).unwrap();
        let coeffs = fs.analyze(&ev, &f).unwrap();
        assert!(coeffs.level_energy(0) > 0.99);
        for j in 1..=3 {
            assert!(coeffs.level_energy(j) < 1e-18, "level {j}");
        }
    }

    #[test]
    fn degree_too_high_for_frame() {
        let ev = evaluator(DomainSpec::interval(0.0, 0.0).unwrap(), 16);
        let fs = FrameSystem::build(&ev, 3, 0.8).unwrap();
        let f = BandlimitedFunction::from_fn(&ev, 6, |p| p.coords()[0].powi(6)).unwrap();
        assert!(matches!(
            fs.analyze(&ev, &f),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn zero_coefficients_synthesize_zero() {
        let ev = evaluator(DomainSpec::interval(0.0, 0.0).unwrap(), 8);
        let fs = FrameSystem::build(&ev, 2, 0.8).unwrap();
        let zero = FrameCoefficients {
            levels: fs
                .levels
                .iter()
                .map(|l| vec![0.0; l.rule.nodes.len()])
                .collect(),
        };
        let g = fs.synthesize(&ev, &zero).unwrap();
        assert!(g.norm() < 1e-15);
    }

    #[test]
    fn mismatched_coefficients_error() {
        let ev = evaluator(DomainSpec::interval(0.0, 0.0).unwrap(), 8);
        let fs = FrameSystem::build(&ev, 2, 0.8).unwrap();
        let bad = FrameCoefficients {
            levels: vec![vec![0.0]; 1],
        };
        assert!(matches!(
            fs.synthesize(&ev, &bad),
            Err(Error::Mismatch(_))
        ));
    }

    #[test]
    fn frame_element_centered_positive() {
        let ev = evaluator(DomainSpec::sphere(3).unwrap(), 16);
        let fs = FrameSystem::build(&ev, 3, 1.0).unwrap();
        for j in 1..=3usize {
            let z = fs.levels[j].rule.nodes[0].clone();
            let v = fs.frame_element(&ev, j, 0, &[z]).unwrap()[0];
            assert!(v > 0.0, "psi at own center, level {j}: {v}");
        }
    }
}
