//! Seminorms on a finite-dimensional real vector space, their projective
//! extensions to the polynomial algebra, Gelfand-spectrum balls, 2d-power
//! modules with membership certificates, and moment functionals represented
//! by atomic measures.

pub mod algebra;
pub mod cli;
pub mod extension;
pub mod feasibility;
pub mod hilbert_scale;
pub mod modules2d;
pub mod moments;
pub mod rational;
pub mod seminorm;
pub mod spectrum;

pub use algebra::{GradedParts, Monomial, Polynomial};
pub use rational::{Rational, Real};
