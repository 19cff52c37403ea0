//! Bidirectional-transformation categories over finite carriers.
//!
//! The crate builds a ladder of structures, each checked against brute-force
//! oracles rather than trusted:
//!
//! - [`fincat`]: finite sets and functions, finite-support stochastic kernels
//!   with exact rational weights, product/coproduct witnesses and a generic
//!   category-law checker.
//! - [`lens`]: lenses and dependent lenses (container morphisms), with
//!   counting and enumeration oracles.
//! - [`optic`]: mixed optics with explicit residuals, the sliding relation and
//!   equivalence by connected components.
//! - [`indexed`]: set-indexed optics with residual matrices, and their
//!   normalisation to dependent lenses.
//! - [`fibre`]: fibre optics over bifibrations of bundles (families of sets and
//!   finite Markov kernels over a base).
//! - [`pullback`]: parametrised and coparametrised hom-categories, their
//!   pullbacks, connected-component quotients and the cube checks relating
//!   optics to lenses.
//!
//! Elements of every carrier are the indices `0..n`. Products are encoded
//! row-major and coproducts by offset, so every composite is bit-exact.

pub mod error;
pub mod fibre;
pub mod fincat;
pub mod indexed;
pub mod lens;
pub mod optic;
pub mod pullback;
mod unionfind;

/// Default refusal threshold for enumerations.
pub const DEFAULT_CEILING: usize = 1_000_000;

pub use error::{Error, Result};
pub use fincat::{
    compose_fn, compose_kernel, distribute, CoproductWitness, FinSet, FinSetCat, FinStochCat, FiniteCategory,
    FiniteDistribution, FiniteFunction, FiniteKernel, LawReport, Morphism, ProductWitness, Rational,
};
pub use lens::{Boundary, Container, DepLens, Lens};
pub use optic::{ActionInstance, Optic, SlidingEdge};
