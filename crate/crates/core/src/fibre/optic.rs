use rand::Rng;
use serde::{Deserialize, Serialize};

use super::laws::bc_mate;
use super::{
    diagonal, frobenius_left, frobenius_right, pair_projections, triple_projections, Arrow, Bifibration, Fam,
    FamObject, FibreArrow, PullbackSquare,
};
use crate::error::{Error, Result};
use crate::fincat::{FinSet, FiniteFunction, Morphism};
use crate::indexed::{IndexedFamily, IndexedOptic, ResidualMatrix};
use crate::lens::Boundary;

/// A pair of objects over the same base.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FibreBoundary<O> {
    pub view: O,
    pub update: O,
}

/// A fibre optic `(I, X, X') → (J, Y, Y')`: a residual `M` over `I×J` with
/// `forward: X → π_I!(M ⊗ π_J^* Y)` and `backward: π_I!(π_J^* Y' ⊗ M) → X'`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(bound(serialize = "O: Serialize, M: Serialize", deserialize = "O: Deserialize<'de>, M: Deserialize<'de>"))]
pub struct FibreOptic<O, M> {
    pub instance: String,
    pub source: FibreBoundary<O>,
    pub target: FibreBoundary<O>,
    pub residual: O,
    pub forward: FibreArrow<O, M>,
    pub backward: FibreArrow<O, M>,
}

/// Fibre optics of a given instance.
pub type FibreOpticOf<B> = FibreOptic<<B as Bifibration>::Obj, <B as Bifibration>::Map>;

fn boundary_base<B: Bifibration>(inst: &B, b: &FibreBoundary<B::Obj>) -> Result<FinSet> {
    let base = inst.base(&b.view);
    if inst.base(&b.update) != base {
        return Err(Error::mismatch("view and update lie over different bases"));
    }
    Ok(base)
}

/// `π_I!(m ⊗ π_J^* y)` for `m` over `I×J` and `y` over `J`.
pub fn forward_object<B: Bifibration>(inst: &B, i: &FinSet, j: &FinSet, m: &B::Obj, y: &B::Obj) -> Result<B::Obj> {
    let (pi, pj) = pair_projections(i, j);
    inst.pushforward(&pi, &inst.tensor(m, &inst.pullback(&pj, y)?)?)
}

/// `π_I!(π_J^* y' ⊗ m)` for `m` over `I×J` and `y'` over `J`.
pub fn backward_object<B: Bifibration>(inst: &B, i: &FinSet, j: &FinSet, m: &B::Obj, yp: &B::Obj) -> Result<B::Obj> {
    let (pi, pj) = pair_projections(i, j);
    inst.pushforward(&pi, &inst.tensor(&inst.pullback(&pj, yp)?, m)?)
}

/// `π_IK!(π_IJ^* m ⊗ π_JK^* n)`: the residual of a composite.
pub fn residual_compose<B: Bifibration>(
    inst: &B,
    (i, j, k): (&FinSet, &FinSet, &FinSet),
    m: &B::Obj,
    n: &B::Obj,
) -> Result<B::Obj> {
    let t = triple_projections(i, j, k);
    inst.pushforward(&t.ik, &inst.tensor(&inst.pullback(&t.ij, m)?, &inst.pullback(&t.jk, n)?)?)
}

impl<O: Clone + Eq, M: Clone + Eq> FibreOptic<O, M> {
    /// Builds a fibre optic, checking every endpoint against `inst`.
    pub fn new<B: Bifibration<Obj = O, Map = M>>(
        inst: &B,
        source: FibreBoundary<O>,
        target: FibreBoundary<O>,
        residual: O,
        forward: FibreArrow<O, M>,
        backward: FibreArrow<O, M>,
    ) -> Result<Self> {
        let o = FibreOptic { instance: inst.name().to_string(), source, target, residual, forward, backward };
        o.validate(inst)?;
        Ok(o)
    }

    pub fn validate<B: Bifibration<Obj = O, Map = M>>(&self, inst: &B) -> Result<()> {
        if self.instance != inst.name() {
            return Err(Error::mismatch(format!("optic of instance {} used with {}", self.instance, inst.name())));
        }
        let i = boundary_base(inst, &self.source)?;
        let j = boundary_base(inst, &self.target)?;
        if inst.base(&self.residual).size() != i.size() * j.size() {
            return Err(Error::invalid("fibre optic", "residual does not lie over I×J"));
        }
        let fwd = forward_object(inst, &i, &j, &self.residual, &self.target.view)?;
        if self.forward.dom != self.source.view || self.forward.cod != fwd {
            return Err(Error::invalid("fibre optic", "forward part has the wrong endpoints"));
        }
        let bwd = backward_object(inst, &i, &j, &self.residual, &self.target.update)?;
        if self.backward.dom != bwd || self.backward.cod != self.source.update {
            return Err(Error::invalid("fibre optic", "backward part has the wrong endpoints"));
        }
        Ok(())
    }
}

/// The identity on `(I, X, X')`, with residual `Δ_! U_I`.
///
/// Forward: `X → U⊗X → U⊗Δ^*π_2^*X → id_!(…) → π_1!Δ_!(…) → π_1!(Δ_!U ⊗ π_2^*X)`.
/// Backward: `π_1!(π_2^*X' ⊗ Δ_!U) → π_1!Δ_!(Δ^*π_2^*X' ⊗ U) → id_!(…) → X'⊗U → U⊗X' → X'`.
pub fn identity_fibre_optic<B: Bifibration>(inst: &B, boundary: &FibreBoundary<B::Obj>) -> Result<FibreOpticOf<B>> {
    let i = boundary_base(inst, boundary)?;
    let (p1, p2) = pair_projections(&i, &i);
    let d = diagonal(&i);
    let u = inst.tensor_unit(&i);
    let residual = inst.pushforward(&d, &u)?;
    let (x, xp) = (&boundary.view, &boundary.update);

    let dx = inst.pullback(&d, &inst.pullback(&p2, x)?)?;
    let v = inst.tensor(&u, &dx)?;
    let forward = inst.chain(&[
        inst.invert(&inst.left_unitor(x)?, "left unitor")?,
        inst.tensor_arrow(
            &inst.identity(&u),
            &inst.chain(&[
                inst.invert(&inst.pullback_identity(x)?, "pullback identity")?,
                inst.invert(&inst.pullback_compose(&d, &p2, x)?, "pullback composite")?,
            ])?,
        )?,
        inst.invert(&inst.pushforward_identity(&v)?, "pushforward identity")?,
        inst.pushforward_compose(&d, &p1, &v)?,
        inst.pushforward_arrow(&p1, &frobenius_right(inst, &d, &u, &inst.pullback(&p2, x)?)?)?,
    ])?;

    let p2xp = inst.pullback(&p2, xp)?;
    let dxp = inst.pullback(&d, &p2xp)?;
    let vp = inst.tensor(&dxp, &u)?;
    let backward = inst.chain(&[
        inst.pushforward_arrow(&p1, &inst.invert(&frobenius_left(inst, &d, &p2xp, &u)?, "projection formula")?)?,
        inst.invert(&inst.pushforward_compose(&d, &p1, &vp)?, "pushforward composite")?,
        inst.pushforward_identity(&vp)?,
        inst.tensor_arrow(
            &inst.chain(&[inst.pullback_compose(&d, &p2, xp)?, inst.pullback_identity(xp)?])?,
            &inst.identity(&u),
        )?,
        inst.symmetry(xp, &u)?,
        inst.left_unitor(xp)?,
    ])?;
    FibreOptic::new(inst, boundary.clone(), boundary.clone(), residual, forward, backward)
}

/// Composes `o1: (I,X,X') → (J,Y,Y')` with `o2: (J,Y,Y') → (K,Z,Z')`.
///
/// With `t_IJ, t_JK, t_IK` the projections out of `I×J×K`, the residual is
/// `R = t_IK!(t_IJ^* M ⊗ t_JK^* N)`. The forward part runs, left to right:
///
/// 1. `f1: X → π_I!(M ⊗ π_J^* Y)`
/// 2. `π_I!(M ⊗ π_J^* f2)`, landing in `π_I!(M ⊗ π_J^* π_J! W)` with `W = N ⊗ π_K^* Z`
/// 3. the inverse Beck–Chevalley mate `π_J^* π_J! W ≅ t_IJ! t_JK^* W`
/// 4. the inverse projection formula `M ⊗ t_IJ! V ≅ t_IJ!(t_IJ^* M ⊗ V)`
/// 5. `π_I! t_IJ! ≅ (π_I ∘ t_IJ)! = (π_I ∘ t_IK)! ≅ π_I! t_IK!`
/// 6. strong monoidality and pseudofunctoriality of pullback:
///    `t_JK^*(N ⊗ π_K^* Z) ≅ t_JK^* N ⊗ t_IK^* π_K^* Z`
/// 7. the inverse associator
/// 8. the projection formula along `t_IK`, landing in `π_I!(R ⊗ π_K^* Z)`.
///
/// The backward part runs the mirror image: projection formula along `t_IK`
/// backwards, the reindexing of `Z'`, a symmetry and associator moving
/// `t_IJ^* M` to the right, strong monoidality of `t_JK^*`, the regrouping
/// of pushforwards, the projection formula along `t_IJ`, the Beck–Chevalley
/// mate, `π_J^* b2`, and finally `b1`.
pub fn fibre_optic_compose<B: Bifibration>(
    o1: &FibreOpticOf<B>,
    o2: &FibreOpticOf<B>,
    inst: &B,
) -> Result<FibreOpticOf<B>> {
    o1.validate(inst)?;
    o2.validate(inst)?;
    if o1.target != o2.source {
        return Err(Error::mismatch(format!(
            "fibre optic into {:?} composed with one out of {:?}",
            o1.target, o2.source
        )));
    }
    let bi = boundary_base(inst, &o1.source)?;
    let bj = boundary_base(inst, &o1.target)?;
    let bk = boundary_base(inst, &o2.target)?;
    let (pi_i, pi_j) = pair_projections(&bi, &bj);
    let (pj2, pk2) = pair_projections(&bj, &bk);
    let (pi3, pk3) = pair_projections(&bi, &bk);
    let t = triple_projections(&bi, &bj, &bk);
    let sq = PullbackSquare { p: t.jk.clone(), q: t.ij.clone(), f: pj2.clone(), g: pi_j.clone() };
    let (m, n) = (&o1.residual, &o2.residual);
    let (z, zp) = (&o2.target.view, &o2.target.update);
    let id = |x: &B::Obj| inst.identity(x);
    let under = |p: &FiniteFunction, a: &Arrow<B>| inst.pushforward_arrow(p, a);
    let under2 = |a: &Arrow<B>| inst.pushforward_arrow(&pi3, &inst.pushforward_arrow(&t.ik, a)?);

    let a = inst.pullback(&t.ij, m)?;
    let bn = inst.pullback(&t.jk, n)?;
    let q = inst.tensor(&a, &bn)?;
    let residual = inst.pushforward(&t.ik, &q)?;

    // forward
    let pk2z = inst.pullback(&pk2, z)?;
    let w = inst.tensor(n, &pk2z)?;
    let v = inst.pullback(&t.jk, &w)?;
    let tt = inst.tensor(&a, &v)?;
    let pk3z = inst.pullback(&pk3, z)?;
    let c = inst.pullback(&t.ik, &pk3z)?;
    let rho = inst.chain(&[
        inst.invert(&inst.pullback_tensor(&t.jk, n, &pk2z)?, "pullback of a tensor")?,
        inst.tensor_arrow(
            &id(&bn),
            &inst.chain(&[
                inst.pullback_compose(&t.jk, &pk2, z)?,
                inst.invert(&inst.pullback_compose(&t.ik, &pk3, z)?, "pullback composite")?,
            ])?,
        )?,
    ])?;
    let forward = inst.chain(&[
        o1.forward.clone(),
        under(&pi_i, &inst.tensor_arrow(&id(m), &inst.pullback_arrow(&pi_j, &o2.forward)?)?)?,
        under(&pi_i, &inst.tensor_arrow(&id(m), &inst.invert(&bc_mate(inst, &sq, &w)?, "Beck–Chevalley mate")?)?)?,
        under(&pi_i, &inst.invert(&frobenius_left(inst, &t.ij, m, &v)?, "projection formula")?)?,
        inst.invert(&inst.pushforward_compose(&t.ij, &pi_i, &tt)?, "pushforward composite")?,
        inst.pushforward_compose(&t.ik, &pi3, &tt)?,
        under2(&inst.tensor_arrow(&id(&a), &rho)?)?,
        under2(&inst.invert(&inst.associator(&a, &bn, &c)?, "associator")?)?,
        under(&pi3, &frobenius_right(inst, &t.ik, &q, &pk3z)?)?,
    ])?;

    // backward
    let pk3zp = inst.pullback(&pk3, zp)?;
    let pk2zp = inst.pullback(&pk2, zp)?;
    let ap = inst.pullback(&t.jk, &pk2zp)?;
    let wp = inst.tensor(&pk2zp, n)?;
    let jw = inst.pullback(&t.jk, &wp)?;
    let tp = inst.tensor(&jw, &a)?;
    let zeta = inst.chain(&[
        inst.pullback_compose(&t.ik, &pk3, zp)?,
        inst.invert(&inst.pullback_compose(&t.jk, &pk2, zp)?, "pullback composite")?,
    ])?;
    let backward = inst.chain(&[
        under(&pi3, &inst.invert(&frobenius_left(inst, &t.ik, &pk3zp, &q)?, "projection formula")?)?,
        under2(&inst.tensor_arrow(&zeta, &id(&q))?)?,
        under2(&inst.chain(&[
            inst.tensor_arrow(&id(&ap), &inst.symmetry(&a, &bn)?)?,
            inst.invert(&inst.associator(&ap, &bn, &a)?, "associator")?,
        ])?)?,
        under2(&inst.tensor_arrow(&inst.pullback_tensor(&t.jk, &pk2zp, n)?, &id(&a))?)?,
        inst.invert(&inst.pushforward_compose(&t.ik, &pi3, &tp)?, "pushforward composite")?,
        inst.pushforward_compose(&t.ij, &pi_i, &tp)?,
        under(&pi_i, &frobenius_right(inst, &t.ij, &jw, m)?)?,
        under(&pi_i, &inst.tensor_arrow(&bc_mate(inst, &sq, &wp)?, &id(m))?)?,
        under(&pi_i, &inst.tensor_arrow(&inst.pullback_arrow(&pi_j, &o2.backward)?, &id(m))?)?,
        o1.backward.clone(),
    ])?;
    FibreOptic::new(inst, o1.source.clone(), o2.target.clone(), residual, forward, backward)
}

/// A random fibre optic `source → target` with the given residual, if one exists.
pub fn sample_fibre_optic<B: Bifibration, R: Rng + ?Sized>(
    inst: &B,
    source: &FibreBoundary<B::Obj>,
    target: &FibreBoundary<B::Obj>,
    residual: &B::Obj,
    rng: &mut R,
) -> Result<Option<FibreOpticOf<B>>> {
    let i = boundary_base(inst, source)?;
    let j = boundary_base(inst, target)?;
    let fwd = forward_object(inst, &i, &j, residual, &target.view)?;
    let bwd = backward_object(inst, &i, &j, residual, &target.update)?;
    let (Some(forward), Some(backward)) =
        (inst.sample(&source.view, &fwd, rng), inst.sample(&bwd, &source.update, rng))
    else {
        return Ok(None);
    };
    FibreOptic::new(inst, source.clone(), target.clone(), residual.clone(), forward, backward).map(Some)
}

/// Whether `o2` is obtained from `o1` by sliding along an isomorphism of
/// residuals, found by search over the invertible fibre arrows `M → M'`.
pub fn equal_up_to_residual_iso<B: Bifibration>(
    inst: &B,
    o1: &FibreOpticOf<B>,
    o2: &FibreOpticOf<B>,
    ceiling: usize,
) -> Result<bool> {
    if o1.source != o2.source || o1.target != o2.target {
        return Ok(false);
    }
    if o1 == o2 {
        return Ok(true);
    }
    if inst.carrier_size(&o1.residual) != inst.carrier_size(&o2.residual) {
        return Ok(false);
    }
    let i = boundary_base(inst, &o1.source)?;
    let j = boundary_base(inst, &o1.target)?;
    let (pi, pj) = pair_projections(&i, &j);
    let py = inst.identity(&inst.pullback(&pj, &o1.target.view)?);
    let pyp = inst.identity(&inst.pullback(&pj, &o1.target.update)?);
    for sigma in inst.hom(&o1.residual, &o2.residual, ceiling)? {
        if inst.inverse(&sigma).is_none() {
            continue;
        }
        let fwd = inst.compose(&o1.forward, &inst.pushforward_arrow(&pi, &inst.tensor_arrow(&sigma, &py)?)?)?;
        if fwd != o2.forward {
            continue;
        }
        let bwd = inst.compose(&inst.pushforward_arrow(&pi, &inst.tensor_arrow(&pyp, &sigma)?)?, &o2.backward)?;
        if bwd == o1.backward {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Unpacks a Fam fibre optic into an indexed optic: the residual over `I×J`
/// becomes the grid `M_i^j` and each part is read off componentwise.
pub fn fibre_to_indexed(o: &FibreOptic<FamObject, Vec<FiniteFunction>>) -> Result<IndexedOptic<FiniteFunction>> {
    if o.instance != Fam.name() {
        return Err(Error::Unsupported(format!("only fam fibre optics unpack to indexed optics, not {}", o.instance)));
    }
    o.validate(&Fam)?;
    let family = |b: &FibreBoundary<FamObject>| {
        IndexedFamily::new(
            b.view.base().clone(),
            b.view.family().iter().zip(b.update.family()).map(|(v, u)| Boundary::new(v.clone(), u.clone())).collect(),
        )
    };
    let source = family(&o.source)?;
    let target = family(&o.target)?;
    let (ni, nj) = (source.len(), target.len());
    let entries = (0..ni).map(|i| (0..nj).map(|j| o.residual.component(i * nj + j).clone()).collect()).collect();
    let matrix = ResidualMatrix::new(source.index().clone(), target.index().clone(), entries)?;
    IndexedOptic::new(source, target, matrix, o.forward.map.clone(), o.backward.map.clone())
}

/// The inverse of [`fibre_to_indexed`].
pub fn indexed_to_fibre(o: &IndexedOptic<FiniteFunction>) -> Result<FibreOptic<FamObject, Vec<FiniteFunction>>> {
    let boundary = |f: &IndexedFamily| -> Result<FibreBoundary<FamObject>> {
        Ok(FibreBoundary {
            view: FamObject::new(f.index().clone(), f.views())?,
            update: FamObject::new(f.index().clone(), f.updates())?,
        })
    };
    let source = boundary(o.source())?;
    let target = boundary(o.target())?;
    let m = o.matrix();
    let residual = FamObject::new(
        FinSet::new(m.rows().size() * m.cols().size()),
        m.rows().elements().flat_map(|i| m.row(i).to_vec()).collect(),
    )?;
    let (i, j) = (source.view.base().clone(), target.view.base().clone());
    let forward = FibreArrow {
        dom: source.view.clone(),
        cod: forward_object(&Fam, &i, &j, &residual, &target.view)?,
        map: o.forwards().to_vec(),
    };
    let backward = FibreArrow {
        dom: backward_object(&Fam, &i, &j, &residual, &target.update)?,
        cod: source.update.clone(),
        map: o.backwards().to_vec(),
    };
    for (k, f) in forward.map.iter().enumerate() {
        if f.cod() != forward.cod.component(k) || f.dom() != forward.dom.component(k) {
            return Err(Error::invalid("fibre optic", format!("forward component {k} has the wrong endpoints")));
        }
    }
    for (k, f) in backward.map.iter().enumerate() {
        if f.dom() != backward.dom.component(k) || f.cod() != backward.cod.component(k) {
            return Err(Error::invalid("fibre optic", format!("backward component {k} has the wrong endpoints")));
        }
    }
    FibreOptic::new(&Fam, source, target, residual, forward, backward)
}
