//! Product-form reference quadrature, exact to a requested degree against
//! the normalized weighted measure of each domain.

use super::{Domain, DomainSpec, PointOnDomain};
use crate::error::Result;
use crate::orthopoly::{gauss_jacobi, JacobiParams};

/// Nodes and positive weights summing to one; integrates every polynomial of
/// degree at most `exact_degree` exactly.
#[derive(Debug, Clone)]
pub struct ReferenceQuadrature {
    pub nodes: Vec<PointOnDomain>,
    pub weights: Vec<f64>,
    pub exact_degree: usize,
}

impl ReferenceQuadrature {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∫ f dμ̂` by the rule.
    pub fn integrate(&self, mut f: impl FnMut(&PointOnDomain) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(p, &w)| w * f(p))
            .sum()
    }

    /// Discrete inner product of two node-value vectors.
    pub fn dot(&self, f: &[f64], g: &[f64]) -> f64 {
        f.iter()
            .zip(g)
            .zip(&self.weights)
            .map(|((&a, &b), &w)| w * a * b)
            .sum()
    }

    /// Discrete `L²` norm of a node-value vector.
    pub fn norm(&self, f: &[f64]) -> f64 {
        self.dot(f, f).max(0.0).sqrt()
    }
}

/// A rule on `S^{d−1}`: coordinate rows and normalized weights.
pub(crate) fn sphere_rule(d: usize, degree: usize) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    if d == 2 {
        let n = (degree + 1).max(3);
        let mut pts = Vec::with_capacity(n);
        let w = 1.0 / n as f64;
        for j in 0..n {
            let phi = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / n as f64;
            pts.push(vec![phi.cos(), phi.sin()]);
        }
        return Ok((pts, vec![w; n]));
    }
    // Slice off the last coordinate: u = cos θ carries the weight
    // (1−u²)^{(d−3)/2}, the rest is a sphere rule one dimension down.
    let lam = (d as f64 - 3.0) / 2.0;
    let rule = gauss_jacobi(degree / 2 + 1, JacobiParams::new(lam, lam)?)?;
    let mass: f64 = rule.weights.iter().sum();
    let (sub_pts, sub_w) = sphere_rule(d - 1, degree)?;
    let mut pts = Vec::with_capacity(rule.nodes.len() * sub_pts.len());
    let mut wts = Vec::with_capacity(pts.capacity());
    for (&u, &wu) in rule.nodes.iter().zip(&rule.weights) {
        let s = (1.0 - u * u).max(0.0).sqrt();
        for (xi, &wxi) in sub_pts.iter().zip(&sub_w) {
            let mut p = Vec::with_capacity(d);
            p.extend(xi.iter().map(|&c| s * c));
            p.push(u);
            pts.push(p);
            wts.push(wu / mass * wxi);
        }
    }
    Ok((pts, wts))
}

pub(super) fn reference_quadrature(domain: &Domain, degree: usize) -> Result<ReferenceQuadrature> {
    let (coords, weights): (Vec<Vec<f64>>, Vec<f64>) = match domain.spec() {
        DomainSpec::Interval { params } => {
            let rule = gauss_jacobi(degree / 2 + 1, *params)?;
            let mass: f64 = rule.weights.iter().sum();
            (
                rule.nodes.iter().map(|&t| vec![t]).collect(),
                rule.weights.iter().map(|&w| w / mass).collect(),
            )
        }
        DomainSpec::Sphere { dim } => sphere_rule(*dim, degree)?,
        DomainSpec::Ball { dim, mu } => {
            // x = r ξ with v = 2r²−1 Gauss–Jacobi distributed.
            let radial = gauss_jacobi(
                degree / 2 + 1,
                JacobiParams::new(mu - 0.5, (*dim as f64 - 2.0) / 2.0)?,
            )?;
            let rmass: f64 = radial.weights.iter().sum();
            let (sp, sw) = sphere_rule(*dim, degree)?;
            let mut coords = Vec::new();
            let mut weights = Vec::new();
            for (&v, &wv) in radial.nodes.iter().zip(&radial.weights) {
                let r = (0.5 * (1.0 + v)).max(0.0).sqrt();
                for (xi, &wxi) in sp.iter().zip(&sw) {
                    coords.push(xi.iter().map(|&c| r * c).collect());
                    weights.push(wv / rmass * wxi);
                }
            }
            (coords, weights)
        }
        DomainSpec::Simplex { dim, gamma } => {
            // Iterated Dirichlet coordinates: x_i = v_i Π_{j<i} (1−v_j) with
            // each v_i an independent Jacobi variable on [0, 1].
            let d = *dim;
            let mut axis_rules = Vec::with_capacity(d);
            for i in 0..d {
                let trailing: f64 = gamma[i + 1..].iter().sum::<f64>() + (d - 1 - i) as f64;
                let rule = gauss_jacobi(degree / 2 + 1, JacobiParams::new(trailing, gamma[i])?)?;
                let mass: f64 = rule.weights.iter().sum();
                let vw: Vec<(f64, f64)> = rule
                    .nodes
                    .iter()
                    .zip(&rule.weights)
                    .map(|(&s, &w)| (0.5 * (1.0 + s), w / mass))
                    .collect();
                axis_rules.push(vw);
            }
            let mut coords = vec![Vec::new()];
            let mut weights = vec![1.0];
            for axis in &axis_rules {
                let mut new_coords = Vec::with_capacity(coords.len() * axis.len());
                let mut new_weights = Vec::with_capacity(new_coords.capacity());
                for (partial, &wp) in coords.iter().zip(&weights) {
                    let used: f64 = partial.iter().sum();
                    let scale = 1.0 - used;
                    for &(v, wv) in axis {
                        let mut c = partial.clone();
                        c.push(v * scale);
                        new_coords.push(c);
                        new_weights.push(wp * wv);
                    }
                }
                coords = new_coords;
                weights = new_weights;
            }
            (coords, weights)
        }
        DomainSpec::ConicSurface { dim, gamma } => {
            let trule = gauss_jacobi(
                degree / 2 + 1,
                JacobiParams::new(*gamma, (*dim - 2) as f64)?,
            )?;
            let tmass: f64 = trule.weights.iter().sum();
            let (sp, sw) = sphere_rule(*dim, degree)?;
            let mut coords = Vec::new();
            let mut weights = Vec::new();
            for (&s, &wt) in trule.nodes.iter().zip(&trule.weights) {
                let t = 0.5 * (1.0 + s);
                for (xi, &wxi) in sp.iter().zip(&sw) {
                    let mut c: Vec<f64> = xi.iter().map(|&x| t * x).collect();
                    c.push(t);
                    coords.push(c);
                    weights.push(wt / tmass * wxi);
                }
            }
            (coords, weights)
        }
    };
    Ok(ReferenceQuadrature {
        nodes: coords
            .into_iter()
            .map(PointOnDomain::from_coords_unchecked)
            .collect(),
        weights,
        exact_degree: degree,
    })
}
