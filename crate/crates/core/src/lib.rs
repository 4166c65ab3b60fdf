//! Continuum surface flux (CSF) models for diffuse-interface two-phase heat
//! transfer, together with the finite element solvers and benchmark drivers
//! used to assess them against sharp-interface references.
//!
//! The crate is organized around the pipeline of a melt-pool-style heat
//! transfer study:
//!
//! * [`geometry`] — signed-distance descriptions of the interface midplane
//!   and closest point projection onto it,
//! * [`indicator`] — the smoothed phase indicator and regularized level set
//!   conversions,
//! * [`delta`] — classical and parameter-scaled regularized delta functions
//!   with their normalization factors,
//! * [`material`] — two-phase material data and effective-property rules,
//! * [`mesh`] / [`field`] — interval and Cartesian meshes with nodal fields,
//! * [`fem`] — implicit Euler finite element solvers (1D linear elements, 2D
//!   bilinear quadrilaterals) including the sharp-interface reference solver,
//! * [`evaporation`] — Knight/Anisimov evaporation models, laser sources and
//!   the continuous (CE) / interface-value (IV) flux evaluation variants,
//! * [`benchmarks`] — scenario definitions B1–B4, parameter sweeps, error
//!   metrics and convergence-order estimation.

pub mod benchmarks;
pub mod delta;
pub mod error;
pub mod evaporation;
pub mod fem;
pub mod field;
pub mod geometry;
pub mod indicator;
pub mod material;
pub mod mesh;
pub mod quadrature;

pub use delta::{CaseKind, CorrectionFactor, InterpolationCase, PhasePair, ScaledDelta};
pub use error::{CsfError, Result};
pub use evaporation::{CoolingVariant, EvaporationModel, FluxEval, LaserModel};
pub use field::{DiscreteField, FieldUnit};
pub use geometry::{DiffuseInterfaceParams, InterfaceGeometry, Point2};
pub use material::MaterialSet;
pub use mesh::{Mesh, Mesh1d, Mesh2d};
