//! Triangle-mesh evolution under curvature-driven geometric flows.
//!
//! `geoflow` evolves closed or bounded triangle meshes under four flows:
//!
//! - **Surface diffusion** (`sdf`): fourth-order, area-decreasing,
//!   volume-preserving.
//! - **Willmore** (`wf`): gradient flow of the integrated squared mean
//!   curvature; round spheres are stationary.
//! - **Quasi surface diffusion** (`qsdf`): biharmonic flow of the immersion,
//!   neither area- nor volume-preserving.
//! - **Mean curvature** (`mcf`): second-order baseline, steepest descent of
//!   area.
//!
//! The discretization is the cotangent Laplace–Beltrami operator with a
//! lumped barycentric mass matrix. Time stepping is either explicit Euler or
//! a semi-implicit scheme that freezes the operators at the current positions
//! and treats the stiff leading term implicitly. Boundary vertices can be
//! left free, clamped in position (`g0`), or clamped together with their
//! one-ring so the boundary tangent planes are pinned (`g1`).
//!
//! Every run records a per-step [`diagnostics::DiagnosticsSeries`] (area,
//! enclosed volume, Willmore energy, Dirichlet energy of the mean curvature,
//! biharmonic energy, mesh-quality indicators) and can check the structural
//! identities each flow is expected to satisfy.
//!
//! The `geoflow` binary exposes all of this as `gen`, `evolve`, `smooth`,
//! `compare`, and `validate` subcommands; see the crate README.

pub mod boundary;
pub mod cli;
pub mod ddg;
pub mod diagnostics;
pub mod flow;
pub mod io;
pub mod mesh;
pub mod shapes;
pub mod solve;
pub mod sparse;

mod error;

pub use error::{Error, Result};

/// 3-component position / direction vector used throughout the crate.
pub type Vec3 = nalgebra::Vector3<f64>;
