use serde_json::json;

use super::{Arrow, Bifibration, PullbackSquare};
use crate::error::{Error, Result};
use crate::fincat::{EnumerableCategory, FinSet, FiniteFunction, LawReport, Morphism};

/// `φ: f_! x → z` ↦ `η_x ; f^* φ : x → f^* z`.
pub fn transpose<B: Bifibration>(inst: &B, f: &FiniteFunction, x: &B::Obj, phi: &Arrow<B>) -> Result<Arrow<B>> {
    inst.compose(&inst.unit(f, x)?, &inst.pullback_arrow(f, phi)?)
}

/// `ψ: x → f^* z` ↦ `f_! ψ ; ε_z : f_! x → z`.
pub fn untranspose<B: Bifibration>(inst: &B, f: &FiniteFunction, z: &B::Obj, psi: &Arrow<B>) -> Result<Arrow<B>> {
    inst.compose(&inst.pushforward_arrow(f, psi)?, &inst.counit(f, z)?)
}

/// The projection-formula map `p_!(p^* a ⊗ v) → a ⊗ p_! v`.
pub fn frobenius_left<B: Bifibration>(inst: &B, p: &FiniteFunction, a: &B::Obj, v: &B::Obj) -> Result<Arrow<B>> {
    let pa = inst.pullback(p, a)?;
    let pv = inst.pushforward(p, v)?;
    let into =
        inst.compose(&inst.tensor_arrow(&inst.identity(&pa), &inst.unit(p, v)?)?, &inst.pullback_tensor(p, a, &pv)?)?;
    untranspose(inst, p, &inst.tensor(a, &pv)?, &into)
}

/// The projection-formula map `p_!(v ⊗ p^* w) → p_! v ⊗ w`.
pub fn frobenius_right<B: Bifibration>(inst: &B, p: &FiniteFunction, v: &B::Obj, w: &B::Obj) -> Result<Arrow<B>> {
    let pw = inst.pullback(p, w)?;
    let pv = inst.pushforward(p, v)?;
    let into =
        inst.compose(&inst.tensor_arrow(&inst.unit(p, v)?, &inst.identity(&pw))?, &inst.pullback_tensor(p, &pv, w)?)?;
    untranspose(inst, p, &inst.tensor(&pv, w)?, &into)
}

/// The Beck–Chevalley mate `q_! p^* x → g^* f_! x` of a commutative square,
/// for `x` over the corner `A`.
pub fn bc_mate<B: Bifibration>(inst: &B, sq: &PullbackSquare, x: &B::Obj) -> Result<Arrow<B>> {
    if !sq.commutes() {
        return Err(Error::NotPullback("square does not commute".into()));
    }
    let fx = inst.pushforward(&sq.f, x)?;
    let inner = inst.chain(&[
        inst.pullback_arrow(&sq.p, &inst.unit(&sq.f, x)?)?,
        inst.pullback_compose(&sq.p, &sq.f, &fx)?,
        inst.invert(&inst.pullback_compose(&sq.q, &sq.g, &fx)?, "pullback composite")?,
    ])?;
    untranspose(inst, &sq.q, &inst.pullback(&sq.g, &fx)?, &inner)
}

/// Checks `f_! ⊣ f^*` at `x` over `dom f` and `z` over `cod f`: the hom-sets
/// have equal size, transposition is a bijection with inverse
/// untransposition, and the triangle identities hold.
pub fn check_adjunction<B: Bifibration>(
    inst: &B,
    f: &FiniteFunction,
    x: &B::Obj,
    z: &B::Obj,
    ceiling: usize,
) -> Result<LawReport> {
    let mut report = LawReport::new(format!("{}-adjunction", inst.name()));
    let fx = inst.pushforward(f, x)?;
    let fz = inst.pullback(f, z)?;
    let witness = || json!({ "f": f, "x": x, "z": z });
    let left = inst.hom(&fx, z, ceiling)?;
    let right = inst.hom(x, &fz, ceiling)?;
    report.check(
        left.len() == right.len(),
        "hom-count",
        || json!({ "f": f, "x": x, "z": z, "pushed": left.len(), "pulled": right.len() }),
    );
    for phi in &left {
        let psi = transpose(inst, f, x, phi)?;
        let back = untranspose(inst, f, z, &psi)?;
        report.check(
            back == *phi && right.contains(&psi),
            "untranspose-after-transpose",
            || json!({ "f": f, "x": x, "z": z, "phi": phi }),
        );
    }
    for psi in &right {
        let phi = untranspose(inst, f, z, psi)?;
        let back = transpose(inst, f, x, &phi)?;
        report.check(back == *psi, "transpose-after-untranspose", || json!({ "f": f, "x": x, "z": z, "psi": psi }));
    }
    let tri = inst.compose(&inst.pushforward_arrow(f, &inst.unit(f, x)?)?, &inst.counit(f, &fx)?)?;
    report.check(tri == inst.identity(&fx), "triangle-pushforward", witness);
    let tri = inst.compose(&inst.unit(f, &fz)?, &inst.pullback_arrow(f, &inst.counit(f, z)?)?)?;
    report.check(tri == inst.identity(&fz), "triangle-pullback", witness);
    Ok(report)
}

/// Checks that the mate of a pullback square is invertible on every object
/// over its corner `A` of size at most `object_bound`.
pub fn check_beck_chevalley<B: Bifibration>(inst: &B, sq: &PullbackSquare, object_bound: usize) -> Result<LawReport> {
    if !sq.is_pullback() {
        return Err(Error::NotPullback(format!(
            "{:?} → {:?} ← {:?} with corner {:?}",
            sq.f.dom(),
            sq.f.cod(),
            sq.g.dom(),
            sq.p.dom()
        )));
    }
    let mut report = LawReport::new(format!("{}-beck-chevalley", inst.name()));
    for x in inst.objects_over(sq.f.dom(), object_bound) {
        let mate = bc_mate(inst, sq, &x)?;
        let ok = match inst.inverse(&mate) {
            Some(inv) => {
                inst.compose(&mate, &inv)? == inst.identity(&mate.dom)
                    && inst.compose(&inv, &mate)? == inst.identity(&mate.cod)
            }
            None => false,
        };
        report.check(ok, "mate-invertible", || json!({ "square": sq, "object": x, "mate": mate }));
    }
    Ok(report)
}

/// The fibre over a fixed base set, as an enumerable category.
#[derive(Clone, Debug)]
pub struct FibreCategory<B> {
    pub instance: B,
    pub base: FinSet,
}

impl<B: Bifibration> EnumerableCategory for FibreCategory<B> {
    type Obj = B::Obj;
    type Mor = Arrow<B>;

    fn objects(&self, size_bound: usize) -> Vec<B::Obj> {
        self.instance.objects_over(&self.base, size_bound)
    }

    fn hom(&self, a: &B::Obj, b: &B::Obj, ceiling: usize) -> Result<Vec<Arrow<B>>> {
        self.instance.hom(a, b, ceiling)
    }

    fn identity(&self, a: &B::Obj) -> Arrow<B> {
        self.instance.identity(a)
    }

    fn compose(&self, f: &Arrow<B>, g: &Arrow<B>) -> Result<Arrow<B>> {
        self.instance.compose(f, g)
    }
}
