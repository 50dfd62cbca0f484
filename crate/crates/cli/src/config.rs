//! Flag parsing and validated run configuration.

use clap::Args;
use lockern::domains::{Domain, DomainSpec};
use std::path::PathBuf;
use std::sync::Arc;

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Domain: interval | sphere | ball | simplex | conic-surface
    #[arg(long)]
    pub domain: String,

    /// Interval weight exponent on (1−t).
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,

    /// Interval weight exponent on (1+t).
    #[arg(long, default_value_t = 0.0)]
    pub beta: f64,

    /// Ball weight exponent (weight (1−‖x‖²)^{μ−1/2}).
    #[arg(long, default_value_t = 0.5)]
    pub mu: f64,

    /// Weight exponent(s): repeat d+1 times for the simplex, once for the
    /// conic surface.
    #[arg(long)]
    pub gamma: Vec<f64>,

    /// Dimension (ambient for the sphere, base otherwise); 0 = domain default.
    #[arg(long, default_value_t = 0)]
    pub dim: usize,

    /// Largest degree in sweeps.
    #[arg(long, default_value_t = 32)]
    pub nmax: usize,

    /// Decay exponent for kernel reports.
    #[arg(long, default_value_t = 4.0)]
    pub kappa: f64,

    /// Separation parameter; default is domain-tuned.
    #[arg(long)]
    pub delta: Option<f64>,

    /// Number of frame levels J (levels 0..=J).
    #[arg(long, default_value_t = 3)]
    pub levels: usize,

    /// Seed for all sampling.
    #[arg(long, default_value_t = 7)]
    pub seed: u64,

    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,

    /// Accept interval weights outside the localizable range
    /// (α or β below −1/2) with a warning instead of rejecting them.
    #[arg(long)]
    pub lenient_weights: bool,

    /// Stability gate on sweep constants (max/min).
    #[arg(long, default_value_t = 4.0)]
    pub max_ratio: f64,
}

pub struct Setup {
    pub domain: Arc<Domain>,
    pub args: CommonArgs,
    pub delta: f64,
    pub label: String,
}

impl Setup {
    pub fn from_args(args: &CommonArgs) -> Result<Self, String> {
        let spec = match args.domain.as_str() {
            "interval" => {
                let spec = DomainSpec::interval(args.alpha, args.beta)
                    .map_err(|e| e.to_string())?;
                if !spec.is_localizable_range() {
                    if args.lenient_weights {
                        eprintln!(
                            "warning: interval weights ({}, {}) lie outside the localizable \
                             range [-1/2, inf); decay certificates are not expected to hold",
                            args.alpha, args.beta
                        );
                    } else {
                        return Err(format!(
                            "interval weights ({}, {}) outside the localizable range; \
                             pass --lenient-weights to proceed anyway",
                            args.alpha, args.beta
                        ));
                    }
                }
                spec
            }
            "sphere" => DomainSpec::sphere(if args.dim == 0 { 3 } else { args.dim })
                .map_err(|e| e.to_string())?,
            "ball" => DomainSpec::ball(if args.dim == 0 { 2 } else { args.dim }, args.mu)
                .map_err(|e| e.to_string())?,
            "simplex" => {
                let dim = if args.dim == 0 { 2 } else { args.dim };
                let gamma = if args.gamma.is_empty() {
                    vec![0.5; dim + 1]
                } else {
                    args.gamma.clone()
                };
                DomainSpec::simplex(dim, gamma).map_err(|e| e.to_string())?
            }
            "conic-surface" => {
                let dim = if args.dim == 0 { 2 } else { args.dim };
                let gamma = args.gamma.first().copied().unwrap_or(0.5);
                DomainSpec::conic_surface(dim, gamma).map_err(|e| e.to_string())?
            }
            other => {
                return Err(format!(
                    "unknown domain '{other}' (expected interval, sphere, ball, simplex, \
                     or conic-surface)"
                ))
            }
        };

        let delta = args.delta.unwrap_or(match &spec {
            DomainSpec::Simplex { .. } => 0.25,
            _ => 0.6,
        });
        if !(delta > 0.0 && delta <= 2.0) {
            return Err(format!("delta must lie in (0, 2], got {delta}"));
        }
        std::fs::create_dir_all(&args.out)
            .map_err(|e| format!("cannot create output directory: {e}"))?;
        let label = spec.kind_name().to_string();
        Ok(Self {
            domain: Arc::new(Domain::new(spec)),
            args: args.clone(),
            delta,
            label,
        })
    }

    /// Degree sweep: powers of two from 8 through `nmax` (or just `nmax`
    /// when it is smaller).
    pub fn degree_sweep(&self) -> Vec<usize> {
        let mut v = Vec::new();
        let mut n = 8usize;
        while n <= self.args.nmax {
            v.push(n);
            n *= 2;
        }
        if v.is_empty() {
            v.push(self.args.nmax);
        }
        v
    }
}
