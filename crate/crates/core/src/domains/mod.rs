//! The five weighted domains: metric, weight, measure normalization,
//! reference quadrature, ball-measure surrogates, and separated point sets.
//!
//! Every domain carries an arccos-form intrinsic distance that factors
//! through a lift onto a low-dimensional sphere; that single fact drives the
//! grid machinery in [`lift`] and keeps the metric axioms exact.
//!
//! All weighted measures are normalized to total mass one, so reproducing
//! kernels satisfy `P_0 ≡ 1` and cubature weights sum to one.

mod lift;
mod measure;
mod quadrature;

pub use lift::SeparatedSet;
pub use quadrature::ReferenceQuadrature;

use crate::error::{Error, Result};
use crate::orthopoly::JacobiParams;
use crate::special::{ln_gamma, sphere_surface};
use std::sync::OnceLock;

const MEMBERSHIP_TOL: f64 = 1e-12;

/// Which domain, together with its weight parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum DomainSpec {
    /// `[−1, 1]` with the Jacobi weight `(1−t)^α (1+t)^β`.
    Interval { params: JacobiParams },
    /// Unit sphere `S^{d−1} ⊂ R^d` with the surface measure, `d ≥ 2`.
    Sphere { dim: usize },
    /// Unit ball `B^d` with the weight `(1−‖x‖²)^{μ−1/2}`, `μ ≥ 0`.
    Ball { dim: usize, mu: f64 },
    /// Simplex `{x_i ≥ 0, |x| ≤ 1} ⊂ R^d` with `Π x_i^{γ_i} (1−|x|)^{γ_{d+1}}`.
    Simplex { dim: usize, gamma: Vec<f64> },
    /// Conic surface `{(x, t): ‖x‖ = t, 0 ≤ t ≤ 1} ⊂ R^{d+1}` with
    /// `t^{−1} (1−t)^γ` against the surface measure.
    ConicSurface { dim: usize, gamma: f64 },
}

impl DomainSpec {
    pub fn interval(alpha: f64, beta: f64) -> Result<Self> {
        Ok(Self::Interval {
            params: JacobiParams::new(alpha, beta)?,
        })
    }

    pub fn sphere(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter(
                "sphere needs ambient dimension >= 2".into(),
            ));
        }
        Ok(Self::Sphere { dim })
    }

    pub fn ball(dim: usize, mu: f64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter("ball needs dimension >= 2".into()));
        }
        if !mu.is_finite() || mu < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "ball weight exponent must be >= 0, got {mu}"
            )));
        }
        // The inner-integral weight (1−u²)^{μ−1} is numerically unusable for
        // tiny positive μ; μ = 0 has its own two-point limit branch.
        if mu > 0.0 && mu < 1e-8 {
            return Err(Error::InvalidParameter(format!(
                "ball weight exponent {mu} in (0, 1e-8); use mu = 0 or mu >= 1e-8"
            )));
        }
        Ok(Self::Ball { dim, mu })
    }

    pub fn simplex(dim: usize, gamma: Vec<f64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter(
                "simplex needs dimension >= 2".into(),
            ));
        }
        if gamma.len() != dim + 1 {
            return Err(Error::InvalidParameter(format!(
                "simplex in dimension {dim} needs {} weight exponents, got {}",
                dim + 1,
                gamma.len()
            )));
        }
        if gamma.iter().any(|g| !g.is_finite() || *g < 0.0) {
            return Err(Error::InvalidParameter(
                "simplex weight exponents must be >= 0".into(),
            ));
        }
        Ok(Self::Simplex { dim, gamma })
    }

    pub fn conic_surface(dim: usize, gamma: f64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter(
                "conic surface needs base dimension >= 2".into(),
            ));
        }
        if !gamma.is_finite() || gamma <= -0.5 {
            return Err(Error::InvalidParameter(format!(
                "conic weight exponent must be > -1/2, got {gamma}"
            )));
        }
        Ok(Self::ConicSurface { dim, gamma })
    }

    /// Number of ambient coordinates a point carries.
    pub fn ambient_dim(&self) -> usize {
        match self {
            Self::Interval { .. } => 1,
            Self::Sphere { dim } => *dim,
            Self::Ball { dim, .. } | Self::Simplex { dim, .. } => *dim,
            Self::ConicSurface { dim, .. } => dim + 1,
        }
    }

    /// Whether the weight parameters lie in the range for which localized
    /// kernels carry the full off-diagonal decay. Only the interval admits
    /// integrable weights outside that range (`−1 < α, β < −1/2`).
    pub fn is_localizable_range(&self) -> bool {
        match self {
            Self::Interval { params } => params.alpha >= -0.5 && params.beta >= -0.5,
            _ => true,
        }
    }

    /// Short stable name, used in reports and file names.
    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::Interval { .. } => "interval",
            Self::Sphere { .. } => "sphere",
            Self::Ball { .. } => "ball",
            Self::Simplex { .. } => "simplex",
            Self::ConicSurface { .. } => "conic-surface",
        }
    }
}

/// A point with validated membership.
#[derive(Debug, Clone, PartialEq)]
pub struct PointOnDomain {
    coords: Vec<f64>,
}

impl PointOnDomain {
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub(crate) fn from_coords_unchecked(coords: Vec<f64>) -> Self {
        Self { coords }
    }
}

/// A domain together with its derived constants (total weighted mass, the
/// calibration constant of the ball-measure surrogate). Cheap to clone
/// conceptually but typically shared by reference.
#[derive(Debug)]
pub struct Domain {
    spec: DomainSpec,
    mass: f64,
    surrogate_scale: OnceLock<f64>,
    local_scale: OnceLock<f64>,
}

impl Domain {
    pub fn new(spec: DomainSpec) -> Self {
        let mass = measure::total_mass(&spec);
        Self {
            spec,
            mass,
            surrogate_scale: OnceLock::new(),
            local_scale: OnceLock::new(),
        }
    }

    pub fn spec(&self) -> &DomainSpec {
        &self.spec
    }

    /// Total mass of the weight against the canonical base measure
    /// (Lebesgue for interval/ball/simplex, normalized surface measure for
    /// the sphere, `t^{d−1} dt dσ̂` for the conic surface).
    pub fn total_mass(&self) -> f64 {
        self.mass
    }

    /// Validate coordinates as a point of this domain.
    pub fn point(&self, coords: &[f64]) -> Result<PointOnDomain> {
        if coords.len() != self.spec.ambient_dim() {
            return Err(Error::OffDomain(format!(
                "expected {} coordinates, got {}",
                self.spec.ambient_dim(),
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::OffDomain("non-finite coordinate".into()));
        }
        let residual = self.membership_residual(coords);
        if residual > MEMBERSHIP_TOL {
            return Err(Error::OffDomain(format!(
                "membership residual {residual:.3e} exceeds {MEMBERSHIP_TOL:.0e}"
            )));
        }
        Ok(PointOnDomain {
            coords: coords.to_vec(),
        })
    }

    fn membership_residual(&self, c: &[f64]) -> f64 {
        match &self.spec {
            DomainSpec::Interval { .. } => {
                let t = c[0];
                (t - 1.0).max(-1.0 - t).max(0.0)
            }
            DomainSpec::Sphere { .. } => {
                let norm: f64 = c.iter().map(|x| x * x).sum::<f64>().sqrt();
                (norm - 1.0).abs()
            }
            DomainSpec::Ball { .. } => {
                let norm: f64 = c.iter().map(|x| x * x).sum::<f64>().sqrt();
                (norm - 1.0).max(0.0)
            }
            DomainSpec::Simplex { .. } => {
                let neg = c.iter().fold(0.0_f64, |acc, x| acc.max(-x));
                let sum: f64 = c.iter().sum();
                neg.max(sum - 1.0).max(0.0)
            }
            DomainSpec::ConicSurface { dim, .. } => {
                let t = c[*dim];
                let norm: f64 = c[..*dim].iter().map(|x| x * x).sum::<f64>().sqrt();
                (norm - t).abs().max(-t).max(t - 1.0)
            }
        }
    }

    /// Cosine of the intrinsic distance; may overshoot `[−1, 1]` by rounding.
    pub(crate) fn cos_distance(&self, p: &PointOnDomain, q: &PointOnDomain) -> f64 {
        let a = &p.coords;
        let b = &q.coords;
        match &self.spec {
            DomainSpec::Interval { .. } => {
                let (t, s) = (a[0], b[0]);
                t * s + (1.0 - t * t).max(0.0).sqrt() * (1.0 - s * s).max(0.0).sqrt()
            }
            DomainSpec::Sphere { .. } => dot(a, b),
            DomainSpec::Ball { .. } => {
                let na: f64 = 1.0 - dot(a, a);
                let nb: f64 = 1.0 - dot(b, b);
                dot(a, b) + na.max(0.0).sqrt() * nb.max(0.0).sqrt()
            }
            DomainSpec::Simplex { .. } => {
                let mut s: f64 = a
                    .iter()
                    .zip(b)
                    .map(|(&x, &y)| (x.max(0.0) * y.max(0.0)).sqrt())
                    .sum();
                let ra = (1.0 - a.iter().sum::<f64>()).max(0.0);
                let rb = (1.0 - b.iter().sum::<f64>()).max(0.0);
                s += ra.sqrt() * rb.sqrt();
                s
            }
            DomainSpec::ConicSurface { dim, .. } => {
                let d = *dim;
                let (t, s) = (a[d], b[d]);
                let xy = dot(&a[..d], &b[..d]);
                (0.5 * (xy + t * s)).max(0.0).sqrt()
                    + (1.0 - t).max(0.0).sqrt() * (1.0 - s).max(0.0).sqrt()
            }
        }
    }

    /// Intrinsic distance. The arccos argument is clamped to `[−1, 1]`.
    pub fn distance(&self, p: &PointOnDomain, q: &PointOnDomain) -> f64 {
        self.distance_flagged(p, q).0
    }

    /// Distance plus a flag that is true when the arccos argument had to be
    /// clamped (useful for flagging near-diagonal pairs in sweep reports).
    pub fn distance_flagged(&self, p: &PointOnDomain, q: &PointOnDomain) -> (f64, bool) {
        let c = self.cos_distance(p, q);
        let clamped = !(-1.0..=1.0).contains(&c);
        (c.clamp(-1.0, 1.0).acos(), clamped)
    }

    /// Normalized weight density at `p` (the density of the unit-mass
    /// measure against the canonical base measure). Signals an error at
    /// points where the weight itself is infinite.
    pub fn weight_density(&self, p: &PointOnDomain) -> Result<f64> {
        let c = &p.coords;
        let raw = match &self.spec {
            DomainSpec::Interval { params } => {
                let t = c[0];
                let (a, b) = (params.alpha, params.beta);
                if (t >= 1.0 && a < 0.0) || (t <= -1.0 && b < 0.0) {
                    return Err(Error::SingularWeight(format!("t = {t}")));
                }
                (1.0 - t).powf(a) * (1.0 + t).powf(b)
            }
            DomainSpec::Sphere { .. } => 1.0,
            DomainSpec::Ball { mu, .. } => {
                let r2: f64 = dot(c, c);
                let one_minus = (1.0 - r2).max(0.0);
                if one_minus == 0.0 && *mu < 0.5 {
                    return Err(Error::SingularWeight("boundary of the ball".into()));
                }
                one_minus.powf(mu - 0.5)
            }
            DomainSpec::Simplex { gamma, .. } => {
                let mut v = 1.0;
                for (x, g) in c.iter().zip(gamma) {
                    v *= x.max(0.0).powf(*g);
                }
                let rest = (1.0 - c.iter().sum::<f64>()).max(0.0);
                v * rest.powf(gamma[c.len()])
            }
            DomainSpec::ConicSurface { dim, gamma } => {
                let t = c[*dim];
                if t == 0.0 {
                    return Err(Error::SingularWeight("cone apex t = 0".into()));
                }
                if t >= 1.0 && *gamma < 0.0 {
                    return Err(Error::SingularWeight("cone rim t = 1".into()));
                }
                (1.0 - t).max(0.0).powf(*gamma) / t
            }
        };
        Ok(raw / self.mass)
    }

    /// Dimension of the degree-`n` orthogonal polynomial space.
    pub fn dimension_vn(&self, n: usize) -> usize {
        match &self.spec {
            DomainSpec::Interval { .. } => 1,
            DomainSpec::Ball { dim, .. } | DomainSpec::Simplex { dim, .. } => {
                binom(n + dim - 1, n)
            }
            // Quadratic algebraic surfaces in ambient dimension D:
            // binom(n+D−2, n) + binom(n+D−3, n−1).
            DomainSpec::Sphere { dim } => surface_vn_dim(*dim, n),
            DomainSpec::ConicSurface { dim, .. } => surface_vn_dim(dim + 1, n),
        }
    }

    /// Dimension of the full polynomial space `Π_n` restricted to the domain.
    pub fn dimension_pi(&self, n: usize) -> usize {
        (0..=n).map(|k| self.dimension_vn(k)).sum()
    }

    /// Metric diameter of the domain.
    pub fn diameter(&self) -> f64 {
        match &self.spec {
            DomainSpec::Interval { .. } | DomainSpec::Sphere { .. } | DomainSpec::Ball { .. } => {
                std::f64::consts::PI
            }
            DomainSpec::Simplex { .. } | DomainSpec::ConicSurface { .. } => {
                std::f64::consts::FRAC_PI_2
            }
        }
    }

    /// Closed-form ball-measure surrogate `≈ w(B(p, r))` under the unit-mass
    /// normalization. The overall constant is fixed once per domain by
    /// matching the quadrature ball measure at a single calibration point.
    pub fn ball_measure_surrogate(&self, p: &PointOnDomain, r: f64) -> Result<f64> {
        if !(r > 0.0 && r <= std::f64::consts::PI) {
            return Err(Error::InvalidParameter(format!(
                "radius must lie in (0, pi], got {r}"
            )));
        }
        let scale = self.surrogate_scale.get_or_init(|| {
            let (p0, r0) = measure::calibration_point(&self.spec);
            let numeric = measure::ball_measure_numeric(self, &p0, r0)
                .expect("calibration ball measure");
            numeric / measure::surrogate_shape(&self.spec, &p0, r0)
        });
        Ok(scale * measure::surrogate_shape(&self.spec, p, r))
    }

    /// Ball measure of `B(p, r)` by quadrature of the indicator against the
    /// normalized weighted measure. Ground truth for the surrogate, accurate
    /// to about a percent for `r ≥ 1/64`.
    pub fn ball_measure_numeric(&self, p: &PointOnDomain, r: f64) -> Result<f64> {
        measure::ball_measure_numeric(self, p, r)
    }

    /// Transient-corrected local ball-measure estimate used inside tail
    /// integrals; identical to the surrogate except on the simplex, where
    /// the linear boundary factors are radially averaged.
    pub fn ball_measure_local(&self, p: &PointOnDomain, r: f64) -> Result<f64> {
        if !(r > 0.0 && r <= std::f64::consts::PI) {
            return Err(Error::InvalidParameter(format!(
                "radius must lie in (0, pi], got {r}"
            )));
        }
        let scale = self.local_scale.get_or_init(|| {
            let (p0, r0) = measure::calibration_point(&self.spec);
            let numeric = measure::ball_measure_numeric(self, &p0, r0)
                .expect("calibration ball measure");
            numeric / measure::local_shape(&self.spec, &p0, r0)
        });
        Ok(scale * measure::local_shape(&self.spec, p, r))
    }

    /// Empirical doubling-comparison exponent: the smallest `A` such that
    /// surrogate ball-measure ratios observed on random pairs obey
    /// `(1+n d)^{−A} ≤ w(B(y,1/n))/w(B(x,1/n)) ≤ (1+n d)^{A}`.
    pub fn doubling_exponent_estimate(&self, rng: &mut impl rand::Rng) -> Result<f64> {
        measure::doubling_exponent_estimate(self, rng)
    }

    /// Product-form reference quadrature, exact to `degree`, weights
    /// normalized to sum one.
    pub fn reference_quadrature(&self, degree: usize) -> Result<ReferenceQuadrature> {
        quadrature::reference_quadrature(self, degree)
    }

    /// Greedy farthest-point maximal `epsilon`-separated set over a candidate
    /// grid of mesh `epsilon/4`.
    pub fn maximal_separated_set(&self, epsilon: f64) -> Result<SeparatedSet> {
        lift::maximal_separated_set(self, epsilon)
    }

    /// A deterministic quasi-uniform sample of `count` points (the first
    /// `count` picks of farthest-point selection on a moderate grid).
    pub fn quasi_uniform_points(&self, count: usize) -> Result<Vec<PointOnDomain>> {
        lift::quasi_uniform_points(self, count)
    }

    /// Draw a random point from the candidate-grid machinery.
    pub fn random_point(&self, rng: &mut impl rand::Rng) -> PointOnDomain {
        lift::random_point(self, rng)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    // Exact integer arithmetic is fine for the sizes here; fall back to
    // the rounded gamma form only if it would overflow.
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    if acc <= usize::MAX as u128 {
        acc as usize
    } else {
        (ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0))
            .exp()
            .round() as usize
    }
}

fn surface_vn_dim(ambient: usize, n: usize) -> usize {
    if n == 0 {
        return 1;
    }
    let first = binom(n + ambient - 2, n);
    let second = if n >= 1 { binom(n + ambient - 3, n - 1) } else { 0 };
    first + second
}

/// Surface area of `S^{d-1}`; re-exported for the measure helpers.
pub(crate) fn sphere_area(d: usize) -> f64 {
    sphere_surface(d)
}
