//! Spectral geometry of Riemannian cone links and the weighted Fredholm
//! calculus of the Laplacian on manifolds with conical singularities.
//!
//! The crate is organised bottom-up:
//!
//! * [`mesh`], [`sparse`], [`eigen`], [`lattice`]: discretisation plumbing
//!   (triangle meshes, sparse matrices, a shift-invert symmetric eigensolver,
//!   flat-torus lattices).
//! * [`spectrum`]: eigenvalue tables of the link Laplacian, analytic or
//!   computed by piecewise-linear finite elements.
//! * [`indicial`]: indicial roots, exceptional weights, growth counts,
//!   Fredholm windows and indices, rate admissibility and rigidity.
//! * [`radial`]: per-mode radial analysis on the cone.
//! * [`norms`]: weighted Hölder-type and Sobolev-type norms on cone annuli.
//! * [`sl_graph`]: the flat special Lagrangian graph operator.
//! * [`decay`]: power-law versus log-power decay classification.
//!
//! The Laplacian is the positive operator `d*d` throughout.

// `!(x > 0.0)` rejects NaN along with the out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod decay;
pub mod eigen;
pub mod error;
pub mod indicial;
pub mod lattice;
pub mod mesh;
pub mod norms;
pub mod radial;
pub mod sl_graph;
pub mod sparse;
pub mod spectrum;

pub use error::{Error, Result};
