use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{
    component_count, copara_hom, copy_functor, dom_hom, para_hom, pi0_quotient, pullback_homcat, CoparaCell,
    HomCategory, HomEdge, Orientation,
};
use crate::error::{guard, Result};
use crate::fincat::{cartesian, Coproduct, FinSet, FiniteFunction, LawReport, Morphism};
use crate::lens::{count_dlens_hom, Boundary, Container, Lens};
use crate::optic::ActionInstance;

/// One face of one cube instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceRecord {
    pub face: String,
    pub object_sizes: Vec<usize>,
    pub left_count: u128,
    pub right_count: u128,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CubeReport {
    pub report: LawReport,
    pub faces: Vec<FaceRecord>,
}

/// Checks the cartesian cube on every pair of boundaries with sizes at most
/// `size_bound`, residuals bounded by `max(size_bound, |X|)`.
pub fn check_cosmic_cube(size_bound: usize, ceiling: usize) -> Result<CubeReport> {
    check_cosmic_cube_with(size_bound, ceiling, &copy_functor)
}

/// As [`check_cosmic_cube`] with a replacement for the copy functor on the
/// vertical face.
pub fn check_cosmic_cube_with(
    size_bound: usize,
    ceiling: usize,
    copy: &dyn Fn(&FiniteFunction) -> CoparaCell<FiniteFunction>,
) -> Result<CubeReport> {
    let mut out = CubeReport { report: LawReport::new("cosmic cube"), faces: Vec::new() };
    let boundaries = Boundary::up_to(size_bound);
    for src in &boundaries {
        for tgt in &boundaries {
            let one = check_cosmic_cube_at(src, tgt, size_bound.max(src.view.size()), ceiling, copy)?;
            out.report.absorb(one.report);
            out.faces.extend(one.faces);
        }
    }
    Ok(out)
}

/// The three faces for lenses `src → tgt`.
pub fn check_cosmic_cube_at(
    src: &Boundary,
    tgt: &Boundary,
    residual_bound: usize,
    ceiling: usize,
    copy: &dyn Fn(&FiniteFunction) -> CoparaCell<FiniteFunction>,
) -> Result<CubeReport> {
    let act = ActionInstance::cartesian();
    let (x, xp, y, yp) = (&src.view, &src.update, &tgt.view, &tgt.update);
    let sizes = vec![x.size(), xp.size(), y.size(), yp.size()];
    let lenses = Lens::count(src, tgt);
    let mut report = LawReport::new("cosmic cube");
    let mut faces = Vec::new();
    let mut face = |report: &mut LawReport, name: &str, left: u128, right: u128, ok: bool| {
        report.check(
            ok,
            &format!("{name} face"),
            || json!({"object_sizes": sizes, "left_count": left, "right_count": right}),
        );
        faces.push(FaceRecord {
            face: name.to_string(),
            object_sizes: sizes.clone(),
            left_count: left,
            right_count: right,
            pass: ok,
        });
    };

    let updates = para_hom(&act, yp, xp, residual_bound, ceiling)?.coop();

    // bottom: views over their domain, paired with updates over the same residual
    let bottom = pullback_homcat(&dom_hom(x, y, ceiling)?, &updates)?;
    let mut distinct = std::collections::HashSet::new();
    let mut well_formed = true;
    for (f, b) in &bottom.vertices {
        match Lens::new(src.clone(), tgt.clone(), f.clone(), b.map.clone()) {
            Ok(l) => {
                distinct.insert(l);
            }
            Err(_) => well_formed = false,
        }
    }
    let discrete = bottom.edges.iter().all(|e| e.from == e.to);
    let left = bottom.vertex_count() as u128;
    face(
        &mut report,
        "bottom",
        left,
        lenses,
        well_formed && discrete && distinct.len() as u128 == left && left == lenses,
    );

    // top: all coparametrised views against all parametrised updates
    let top = pullback_homcat(&copara_hom(&act, x, y, residual_bound, ceiling)?, &updates)?;
    let labels = pi0_quotient(&top);
    let components = component_count(&labels);
    face(&mut report, "top", components as u128, lenses, components as u128 == lenses);

    // vertical: (f, b) ↦ (copy f, b), which must be a bijection on components
    let index: HashMap<_, _> = top.vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut hit = vec![0usize; components];
    let mut landed = true;
    for (f, b) in &bottom.vertices {
        match index.get(&(copy(f), b.clone())) {
            Some(&i) => hit[labels[i]] += 1,
            None => landed = false,
        }
    }
    let covered = hit.iter().filter(|&&h| h > 0).count();
    face(
        &mut report,
        "vertical",
        bottom.vertex_count() as u128,
        covered as u128,
        landed && hit.iter().all(|&h| h == 1),
    );
    Ok(CubeReport { report, faces })
}

/// One dependent-cube instance: containers `(A, X') → (B, Y')`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DependentCubeRecord {
    pub source: Vec<usize>,
    pub target: Vec<usize>,
    pub vertices: usize,
    pub edges: usize,
    pub components: u128,
    pub dlens_count: u128,
    pub agree: bool,
    pub consistent: bool,
}

/// Experimental: counts are recorded, not asserted. The law report only
/// covers internal consistency.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DependentCubeReport {
    pub report: LawReport,
    pub records: Vec<DependentCubeRecord>,
    pub all_agree: bool,
}

/// Runs [`check_dependent_cube_at`] on every pair of containers with at most
/// `size_bound` positions and directions.
pub fn check_dependent_cube(size_bound: usize, ceiling: usize) -> Result<DependentCubeReport> {
    let mut report = LawReport::new("dependent cube (experimental)");
    let mut records = Vec::new();
    let containers = Container::up_to(size_bound);
    for src in &containers {
        for tgt in &containers {
            let r = check_dependent_cube_at(src, tgt, size_bound.max(src.positions().size()), ceiling)?;
            report.check(r.consistent, "dependent cube consistency", || json!(r));
            records.push(r);
        }
    }
    let all_agree = records.iter().all(|r| r.agree);
    Ok(DependentCubeReport { report, records, all_agree })
}

/// A bundle `p: M → A` with a fibre-preserving map into another bundle.
type Bundle = FiniteFunction;

/// Fibrewise Copara and Para over the slice on `A = src.positions()`, for
/// each `f: A → B`: residuals are bundles over `A` with at most
/// `residual_bound` elements, views are sections of the residual, updates are
/// fibre-preserving maps `M ×_A f^*Y' → X'`, and 2-cells are fibre-preserving
/// maps of residuals. Components are summed over `f`.
pub fn check_dependent_cube_at(
    src: &Container,
    tgt: &Container,
    residual_bound: usize,
    ceiling: usize,
) -> Result<DependentCubeRecord> {
    let a = src.positions();
    let bundles: Vec<Bundle> = FinSet::up_to(residual_bound)
        .iter()
        .map(|m| FiniteFunction::enumerate(m, a, ceiling))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let mediators = bundle_maps(&bundles, ceiling)?;
    let (mut vertices, mut edges, mut components) = (0, 0, 0u128);
    let mut consistent = true;
    for f in FiniteFunction::enumerate(a, tgt.positions(), ceiling)? {
        let views = slice_views(&bundles, &mediators, ceiling)?;
        let updates = slice_updates(src, tgt, &f, &bundles, &mediators, ceiling)?.coop();
        let top = pullback_homcat(&views, &updates)?;
        let labels = pi0_quotient(&top);
        let n = component_count(&labels);
        let identity = FiniteFunction::identity(a);
        let mut copies = vec![0usize; n];
        for (i, ((p, s), _)) in top.vertices.iter().enumerate() {
            if *p == identity && *s == identity {
                copies[labels[i]] += 1;
            }
        }
        consistent &= copies.iter().all(|&c| c == 1);
        vertices += top.vertex_count();
        edges += top.edge_count();
        components += n as u128;
    }
    let dlens_count = count_dlens_hom(src, tgt);
    Ok(DependentCubeRecord {
        source: src.direction_sizes(),
        target: tgt.direction_sizes(),
        vertices,
        edges,
        components,
        dlens_count,
        agree: components == dlens_count,
        consistent,
    })
}

/// For each ordered pair of bundles, the maps `r` with `r ; q = p`.
fn bundle_maps(bundles: &[Bundle], ceiling: usize) -> Result<Vec<Vec<Vec<FiniteFunction>>>> {
    bundles
        .iter()
        .map(|p| {
            bundles
                .iter()
                .map(|q| {
                    Ok(FiniteFunction::enumerate(p.dom(), q.dom(), ceiling)?
                        .into_iter()
                        .filter(|r| (0..p.dom().size()).all(|m| q.apply(r.apply(m)) == p.apply(m)))
                        .collect())
                })
                .collect()
        })
        .collect()
}

/// Copara over the slice with view `1_A → f^*1_B = 1_A`: vertex `(p, s)` with `s` a section of `p`.
fn slice_views(
    bundles: &[Bundle],
    mediators: &[Vec<Vec<FiniteFunction>>],
    ceiling: usize,
) -> Result<HomCategory<(Bundle, FiniteFunction), Bundle, FiniteFunction>> {
    let mut vertices = Vec::new();
    let mut params = Vec::new();
    let mut at = HashMap::new();
    for (i, p) in bundles.iter().enumerate() {
        for s in FiniteFunction::enumerate(p.cod(), p.dom(), ceiling)? {
            if s.then(p)? == FiniteFunction::identity(p.cod()) {
                at.insert((i, s.clone()), vertices.len());
                vertices.push((p.clone(), s));
                params.push(p.clone());
            }
        }
    }
    let mut edges = Vec::new();
    for (v, (p, s)) in vertices.iter().enumerate() {
        let i = bundles.iter().position(|b| b == p).expect("vertex over a listed bundle");
        for (j, rs) in mediators[i].iter().enumerate() {
            for r in rs {
                edges.push(HomEdge { from: v, to: at[&(j, s.then(r)?)], mediator: r.clone() });
            }
        }
    }
    Ok(HomCategory { vertices, params, edges, orientation: Orientation::default() })
}

/// Para over the slice: vertex `(p, b)` with `b` sending `(m, y')`,
/// `y' ∈ Y'(f(p m))`, to an element of `X'(p m)`, both stored as local indices.
fn slice_updates(
    src: &Container,
    tgt: &Container,
    f: &FiniteFunction,
    bundles: &[Bundle],
    mediators: &[Vec<Vec<FiniteFunction>>],
    ceiling: usize,
) -> Result<HomCategory<(Bundle, FiniteFunction), Bundle, FiniteFunction>> {
    // the fibre product M ×_A f^*Y' as a coproduct over m of Y'(f(p m))
    let pairs =
        |p: &Bundle| Coproduct::from_sizes(p.dom().elements().map(|m| tgt.direction(f.apply(p.apply(m))).size()));
    let local = FinSet::new(src.direction_sizes().into_iter().max().unwrap_or(0));
    let mut vertices = Vec::new();
    let mut params = Vec::new();
    let mut at = HashMap::new();
    for (i, p) in bundles.iter().enumerate() {
        let c = pairs(p);
        let choices: Vec<Vec<usize>> =
            (0..c.carrier().size()).map(|k| (0..src.direction(p.apply(c.case(k).0)).size()).collect()).collect();
        let count = choices.iter().map(|o| o.len() as u128).product::<u128>();
        guard(count, ceiling)?;
        for table in cartesian(&choices) {
            let b = FiniteFunction::new(c.carrier().clone(), local.clone(), table)?;
            at.insert((i, b.clone()), vertices.len());
            vertices.push((p.clone(), b));
            params.push(p.clone());
        }
    }
    // r: M → N over A sends (N, b) to (M, (r ×_A id) ; b)
    let mut edges = Vec::new();
    for (v, (q, b)) in vertices.iter().enumerate() {
        let j = bundles.iter().position(|x| x == q).expect("vertex over a listed bundle");
        let cq = pairs(q);
        for (i, p) in bundles.iter().enumerate() {
            let cp = pairs(p);
            for r in &mediators[i][j] {
                let table = (0..cp.carrier().size())
                    .map(|k| {
                        let (m, y) = cp.case(k);
                        b.apply(cq.inj(r.apply(m), y))
                    })
                    .collect();
                let pulled = FiniteFunction::new(cp.carrier().clone(), b.cod().clone(), table)?;
                edges.push(HomEdge { from: v, to: at[&(i, pulled)], mediator: r.clone() });
            }
        }
    }
    Ok(HomCategory { vertices, params, edges, orientation: Orientation::default() })
}
