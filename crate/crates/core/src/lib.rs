//! Eigenvalues and eigenfunctions of the bulk-boundary Bilaplacian
//!
//! ```text
//!   Δ²u = λ⁴u         in Ω
//!   ∂νu = 0           on ∂Ω
//!   −∂ν(Δu) = γλ⁴u    on ∂Ω
//! ```
//!
//! on balls, annuli and punctured balls. Throughout the crate `lambda`
//! denotes the fourth root of the eigenvalue; tables carry both `lambda` and
//! `lambda4`, and orderings are always taken on `lambda4`.
//!
//! Module map:
//!
//! * [`specfun`]: ultraspherical Bessel kernel and zeros of `j'_ℓ`.
//! * [`ball`]: secular equation, limits and eigenfunctions on the unit ball.
//! * [`annulus`]: 4×4 boundary determinant, zero modes and the small-λ
//!   bifurcation analysis on `a < |x| < 1`.
//! * [`spectrum`]: globally ordered spectra and γ-sweeps.
//! * [`varoracle`]: Rayleigh–Ritz oracle that never touches a Bessel function.
//! * [`dynamics`]: eigen-expansion of the parabolic dynamic-boundary problem.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod annulus;
pub mod ball;
pub mod dynamics;
pub mod eigenfunction;
mod error;
pub mod linalg;
pub mod problem;
pub mod quadrature;
pub mod roots;
pub mod specfun;
pub mod spectrum;
pub mod varoracle;

pub use error::{Error, Result};
pub use problem::{Coupling, EigenResult, Geometry, ModeIndex, ProblemSpec, Source};
