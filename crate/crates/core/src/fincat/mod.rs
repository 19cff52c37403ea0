//! Finite base categories: sets and functions, sets and finite-support
//! stochastic kernels, their monoidal and coproduct witnesses, and a generic
//! law checker.

mod category;
mod finset;
mod kernel;
mod laws;
mod rational;
mod witness;

pub use category::{FinSetCat, FinStochCat, FiniteCategory};
pub(crate) use finset::{cartesian, pow, tuples};
pub use finset::{compose_fn, FinSet, FiniteFunction, Morphism};
pub use kernel::{compose_kernel, FiniteDistribution, FiniteKernel};
pub use laws::{check_category_laws, EnumerableCategory, LawReport, Violation, MAX_WITNESSES};
pub use rational::Rational;
pub use witness::{distribute, Coproduct, CoproductWitness, ProductWitness, Tag};
