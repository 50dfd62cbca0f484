//! Localized polynomial kernels on weighted domains.
//!
//! This crate implements, and numerically certifies, the standard harmonic-
//! analysis toolkit built from orthogonal polynomial expansions on five
//! compact domains — the interval with a Jacobi weight, the unit sphere, the
//! unit ball, the simplex, and the conic surface:
//!
//! * reproducing kernels of the degree-`n` orthogonal polynomial spaces,
//!   evaluated through their one-dimensional addition formulas;
//! * smoothly cut off localized kernels `L_n` and the near-best approximation
//!   operators they induce;
//! * maximal separated point sets, positive cubature rules on them, and
//!   Christoffel functions with their ball-measure comparisons;
//! * needlet-type tight frames with analysis/synthesis transforms;
//! * translation operators, difference operators, and moduli of smoothness.
//!
//! All weighted measures are normalized to unit mass, so `P_0 ≡ 1` and every
//! degree-0 kernel reproduces constants; each domain's metric is the arccos
//! form induced by its sphere lift.

pub mod approx;
pub mod basis;
pub mod cubature;
pub mod cutoff;
pub mod domains;
pub mod error;
pub mod export;
pub mod frames;
pub mod kernels;
pub mod nnls;
pub mod orthopoly;
pub mod special;

pub use cutoff::{CutoffFunction, CutoffKind};
pub use domains::{Domain, DomainSpec, PointOnDomain, SeparatedSet};
pub use error::{Error, Result};
pub use frames::{FrameCoefficients, FrameSystem};
pub use kernels::{BandlimitedFunction, KernelEvaluator};
