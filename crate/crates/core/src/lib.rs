//! Eigenvalue bounds for the two-dimensional magnetic Laplacian `(-i∇ + A)²`
//! on bounded planar domains, with Dirichlet or Neumann boundary conditions,
//! together with a gauge-covariant finite-difference eigensolver that checks
//! every bound against a direct computation.
//!
//! Module map:
//!
//! - [`geometry`]: planar domains and their in-radius, minimal width,
//!   diameter, distance to the boundary and disc packings.
//! - [`fields`]: magnetic fields, super potentials `Ψ` with `ΔΨ = B`, the
//!   logarithmic (Newtonian) potential, oscillation and flux.
//! - [`spectral`]: lattice-gauge discretization, sparse Cholesky,
//!   shift-invert block Lanczos and Richardson extrapolation.
//! - [`flux_lemma`]: the local flux constants `μ₀, ν₀, r₀, c₀, c₁` and the
//!   certified local Neumann bound `F₁ = 1/c₁`.
//! - [`bounds`]: every eigenvalue bound as a validity-guarded [`bounds::BoundReport`].
//! - [`harness`]: JSON case configuration, verification runs, sweeps,
//!   convergence studies, CSV and SVG output.

pub mod bounds;
pub mod error;
pub mod fields;
pub mod flux_lemma;
pub mod geometry;
pub mod harness;
pub mod par;
pub mod quadrature;
pub mod spectral;

pub use error::{Error, Result};
pub use geometry::{Domain, Point};

/// First positive zero of the Bessel function `J₀`.
pub const J0_1: f64 = 2.404_825_557_695_773;

/// First positive zero of the Bessel function `J₁`.
pub const J1_1: f64 = 3.831_705_970_207_512;
