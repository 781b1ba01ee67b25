//! Ground states of the discrete p-Laplacian Choquard system on finite boxes of `Z^N`.
//!
//! The system couples two scalar fields `(u, v)` through a homogeneous nonlinearity `F`
//! and a Riesz-type kernel built from the heat kernel of the lattice Laplacian:
//!
//! ```text
//! -Δ_p u + (λ a + 1)|u|^{p-2} u = (1/γ) (R_α * F(u, v)) F_u(u, v)
//! -Δ_p v + (λ b + 1)|v|^{p-2} v = (1/γ) (R_α * F(u, v)) F_v(u, v)
//! ```
//!
//! Ground states are computed by minimizing the energy over the Nehari manifold, both for
//! finite coupling `λ` and for the Dirichlet limit problem posed on the potential wells.
//!
//! Module map:
//!
//! - [`lattice`]: box geometry, neighbors, potential wells, vertex boundaries.
//! - [`kernel`]: heat kernel, Riesz kernel tables, convolution, HLS ratios, table cache.
//! - [`nonlinearity`]: the homogeneous coupling `F` and its partial derivatives.
//! - [`energy`]: norms, energy functionals, gradients, Nehari projection.
//! - [`solver`]: Nehari-constrained descent, limit problem, λ-sweep.
//! - [`cli`]: run configuration, batch runs, validation and the self-test suite.

pub mod cli;
pub mod energy;
pub mod error;
pub mod kernel;
pub mod lattice;
pub mod nonlinearity;
pub mod solver;

pub use error::{Error, Result};
