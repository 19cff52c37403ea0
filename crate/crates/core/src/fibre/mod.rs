//! Fibre optics over bifibrations of bundles on finite sets.
//!
//! A [`Bifibration`] supplies fibres over each finite base set, pullback and
//! pushforward along base functions, the adjunction between them, a fibrewise
//! symmetric monoidal product and the structure isomorphisms relating these.
//! Everything else (transposition, Frobenius maps, Beck–Chevalley mates,
//! composition of fibre optics) is derived from those primitives, so both
//! instances, [`Fam`] and [`DMark`], share a single composition routine.

mod base;
mod dmark;
mod fam;
mod laws;
mod optic;

use std::fmt::Debug;
use std::hash::Hash;

use rand::Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub use base::{diagonal, pair_projections, triple_projections, PullbackSquare, TripleProjections};
pub use dmark::{validate_dmark, DMark, DMarkMorphism, DMarkObject, SupportViolation};
pub use fam::{Fam, FamObject};
pub use laws::{
    bc_mate, check_adjunction, check_beck_chevalley, frobenius_left, frobenius_right, transpose, untranspose,
    FibreCategory,
};
pub use optic::{
    backward_object, equal_up_to_residual_iso, fibre_optic_compose, fibre_to_indexed, forward_object,
    identity_fibre_optic, indexed_to_fibre, residual_compose, sample_fibre_optic, FibreBoundary, FibreOptic,
    FibreOpticOf,
};

use crate::error::Result;
use crate::fincat::{FinSet, FiniteFunction};

/// A morphism in a fibre, carrying its endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FibreArrow<O, M> {
    pub dom: O,
    pub cod: O,
    pub map: M,
}

/// Fibre morphisms of a bifibration.
pub type Arrow<B> = FibreArrow<<B as Bifibration>::Obj, <B as Bifibration>::Map>;

/// A monoidal bifibration over finite sets, presented by its fibres and
/// concrete structure maps.
///
/// Conventions: `f: I → J` is a base function; `pullback(f, -)` maps the fibre
/// over `J` to the fibre over `I` and `pushforward(f, -)` goes the other way.
/// `pullback_compose(f, g, x): f^* g^* x → (f;g)^* x` and
/// `pushforward_compose(f, g, x): (f;g)_! x → g_! f_! x`, where `f;g` is `f`
/// followed by `g`.
pub trait Bifibration: Clone + Send + Sync {
    type Obj: Clone + Eq + Hash + Debug + Serialize + DeserializeOwned + Send + Sync;
    type Map: Clone + Eq + Hash + Debug + Serialize + DeserializeOwned + Send + Sync;

    fn name(&self) -> &'static str;

    fn base(&self, x: &Self::Obj) -> FinSet;

    /// Number of points of the total space of `x`.
    fn carrier_size(&self, x: &Self::Obj) -> usize;

    /// Objects over `base` whose fibres (Fam) or carrier (DMark) have size at
    /// most `bound`.
    fn objects_over(&self, base: &FinSet, bound: usize) -> Vec<Self::Obj>;

    fn hom_count(&self, a: &Self::Obj, b: &Self::Obj) -> u128;

    fn hom(&self, a: &Self::Obj, b: &Self::Obj, ceiling: usize) -> Result<Vec<Arrow<Self>>>;

    /// A fibre arrow `a → b` drawn uniformly from the enumerated hom-set, or
    /// `None` when it is empty.
    fn sample<R: Rng + ?Sized>(&self, a: &Self::Obj, b: &Self::Obj, rng: &mut R) -> Option<Arrow<Self>>;

    fn identity(&self, a: &Self::Obj) -> Arrow<Self>;

    /// `f` followed by `g`.
    fn compose(&self, f: &Arrow<Self>, g: &Arrow<Self>) -> Result<Arrow<Self>>;

    fn inverse(&self, f: &Arrow<Self>) -> Option<Arrow<Self>>;

    fn pullback(&self, f: &FiniteFunction, x: &Self::Obj) -> Result<Self::Obj>;

    fn pullback_arrow(&self, f: &FiniteFunction, m: &Arrow<Self>) -> Result<Arrow<Self>>;

    fn pushforward(&self, f: &FiniteFunction, x: &Self::Obj) -> Result<Self::Obj>;

    fn pushforward_arrow(&self, f: &FiniteFunction, m: &Arrow<Self>) -> Result<Arrow<Self>>;

    /// `η: x → f^* f_! x`.
    fn unit(&self, f: &FiniteFunction, x: &Self::Obj) -> Result<Arrow<Self>>;

    /// `ε: f_! f^* z → z`.
    fn counit(&self, f: &FiniteFunction, z: &Self::Obj) -> Result<Arrow<Self>>;

    fn tensor(&self, a: &Self::Obj, b: &Self::Obj) -> Result<Self::Obj>;

    fn tensor_arrow(&self, f: &Arrow<Self>, g: &Arrow<Self>) -> Result<Arrow<Self>>;

    fn tensor_unit(&self, base: &FinSet) -> Self::Obj;

    /// `(a ⊗ b) ⊗ c → a ⊗ (b ⊗ c)`.
    fn associator(&self, a: &Self::Obj, b: &Self::Obj, c: &Self::Obj) -> Result<Arrow<Self>>;

    /// `a ⊗ b → b ⊗ a`.
    fn symmetry(&self, a: &Self::Obj, b: &Self::Obj) -> Result<Arrow<Self>>;

    /// `U ⊗ a → a`.
    fn left_unitor(&self, a: &Self::Obj) -> Result<Arrow<Self>>;

    /// `f^* a ⊗ f^* b → f^* (a ⊗ b)`.
    fn pullback_tensor(&self, f: &FiniteFunction, a: &Self::Obj, b: &Self::Obj) -> Result<Arrow<Self>>;

    /// `f^* g^* x → (f;g)^* x`.
    fn pullback_compose(&self, f: &FiniteFunction, g: &FiniteFunction, x: &Self::Obj) -> Result<Arrow<Self>>;

    /// `id^* x → x`.
    fn pullback_identity(&self, x: &Self::Obj) -> Result<Arrow<Self>>;

    /// `(f;g)_! x → g_! f_! x`.
    fn pushforward_compose(&self, f: &FiniteFunction, g: &FiniteFunction, x: &Self::Obj) -> Result<Arrow<Self>>;

    /// `id_! x → x`.
    fn pushforward_identity(&self, x: &Self::Obj) -> Result<Arrow<Self>>;

    /// Composes a chain of arrows left to right.
    fn chain(&self, parts: &[Arrow<Self>]) -> Result<Arrow<Self>> {
        let (first, rest) = parts.split_first().expect("non-empty chain");
        rest.iter().try_fold(first.clone(), |acc, p| self.compose(&acc, p))
    }

    /// Inverse of a structure map that must be an isomorphism.
    fn invert(&self, f: &Arrow<Self>, what: &str) -> Result<Arrow<Self>> {
        self.inverse(f).ok_or_else(|| crate::Error::NotIso(format!("{what} in {}", self.name())))
    }
}
