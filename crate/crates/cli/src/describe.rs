//! Human-readable summaries of instance files, detected by their JSON keys.

use std::fmt::Write as _;
use std::path::Path;

use fiboptic_core::fibre::{validate_dmark, DMark, DMarkMorphism, DMarkObject, Fam, FamObject, FibreOptic};
use fiboptic_core::indexed::{IndexedFamily, IndexedOptic, ResidualMatrix};
use fiboptic_core::{Container, DepLens, FinSet, FiniteFunction, FiniteKernel, Lens, Morphism, Optic};
use serde::Deserialize;
use serde_json::Value;

use crate::error::CliError;
use crate::suites::parse_json;

/// A DMark morphism file carries its endpoints so it can be validated.
#[derive(Deserialize)]
struct DMarkFile {
    source: DMarkObject,
    target: DMarkObject,
    kernel: FiniteKernel,
    base_map: FiniteFunction,
}

pub fn describe_file(path: &Path) -> Result<String, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    describe(&path.display().to_string(), &text)
}

/// Renders the entity in `text`; `name` is used in error positions.
pub fn describe(name: &str, text: &str) -> Result<String, CliError> {
    let value: Value = parse_json(name, text)?;
    let has = |keys: &[&str]| keys.iter().all(|k| value.get(k).is_some());
    let out = if has(&["kernel", "base_map"]) {
        dmark_morphism(&parse_json::<DMarkFile>(name, text)?)?
    } else if has(&["instance", "residual", "forward", "backward"]) {
        fibre_optic(name, text, &value)?
    } else if has(&["matrix", "forwards", "backwards"]) {
        indexed_optic(&parse_json::<IndexedOptic<FiniteFunction>>(name, text)?)
    } else if has(&["get", "put"]) {
        lens(&parse_json::<Lens>(name, text)?)
    } else if has(&["residual", "forward", "backward"]) {
        optic(name, text, &value)?
    } else if has(&["forward", "backward"]) {
        dlens(&parse_json::<DepLens>(name, text)?)
    } else if has(&["positions", "directions"]) {
        let c: Container = parse_json(name, text)?;
        format!("Container with {} positions; direction sizes {:?}", c.positions().size(), c.direction_sizes())
    } else if has(&["index", "components"]) {
        let f: IndexedFamily = parse_json(name, text)?;
        family(&f)
    } else if has(&["rows", "cols", "entries"]) {
        let m: ResidualMatrix = parse_json(name, text)?;
        format!("ResidualMatrix {}×{}; entry sizes {:?}", m.rows().size(), m.cols().size(), m.sizes())
    } else if has(&["base", "family"]) {
        let f: FamObject = parse_json(name, text)?;
        format!("FamObject over {}; fibre sizes {:?}", f.base().size(), f.sizes())
    } else if has(&["bundle"]) {
        let d: DMarkObject = parse_json(name, text)?;
        bundle(&d)
    } else if has(&["dom", "cod", "rows"]) {
        let k: FiniteKernel = parse_json(name, text)?;
        kernel(&k)
    } else if has(&["dom", "cod", "table"]) {
        let f: FiniteFunction = parse_json(name, text)?;
        format!("FiniteFunction {} → {}; table {:?}", f.dom().size(), f.cod().size(), f.table())
    } else if has(&["size"]) {
        let s: FinSet = parse_json(name, text)?;
        format!("FinSet of size {}", s.size())
    } else {
        return Err(unknown(name, "no known entity has these keys"));
    };
    Ok(out)
}

fn unknown(name: &str, why: &str) -> CliError {
    CliError::Config(format!("{name}: cannot tell what this file describes ({why})"))
}

fn lens(l: &Lens) -> String {
    format!("Lens {} → {}; get table {:?}; put table {:?}", l.source(), l.target(), l.get().table(), l.put().table())
}

fn dlens(d: &DepLens) -> String {
    let back: Vec<&[usize]> = d.backward().iter().map(|b| b.table()).collect();
    format!(
        "DepLens {:?} → {:?}; forward table {:?}; backward tables {:?}",
        d.source().direction_sizes(),
        d.target().direction_sizes(),
        d.forward().table(),
        back
    )
}

fn family(f: &IndexedFamily) -> String {
    let parts: Vec<String> = f.components().iter().map(ToString::to_string).collect();
    format!("IndexedFamily over {}: [{}]", f.len(), parts.join(", "))
}

fn indexed_optic(o: &IndexedOptic<FiniteFunction>) -> String {
    let m = o.matrix();
    format!(
        "IndexedOptic {} → {}; residual grid {}×{}; entry sizes {:?}",
        family(o.source()),
        family(o.target()),
        m.rows().size(),
        m.cols().size(),
        m.sizes()
    )
}

fn kernel(k: &FiniteKernel) -> String {
    let mut s = format!("FiniteKernel {} → {}", k.dom().size(), k.cod().size());
    for a in k.dom().elements() {
        let row: Vec<String> = k.row(a).support().map(|(b, w)| format!("{b}:{w}")).collect();
        write!(s, "; row {a} {{{}}}", row.join(", ")).unwrap();
    }
    s
}

fn bundle(d: &DMarkObject) -> String {
    format!("DMarkObject {} → {}; projection {:?}", d.carrier().size(), d.base().size(), d.bundle.table())
}

fn dmark_morphism(f: &DMarkFile) -> Result<String, CliError> {
    let m = DMarkMorphism { kernel: f.kernel.clone(), base_map: f.base_map.clone() };
    let mut s = format!(
        "DMarkMorphism {} → {}; base map {:?}; {}",
        bundle(&f.source),
        bundle(&f.target),
        m.base_map.table(),
        kernel(&m.kernel)
    );
    if validate_dmark(&m, &f.source, &f.target)? {
        s.push_str("\nvalid: every row is supported on its fibre");
    } else {
        s.push_str("\nINVALID: mass outside the fibre");
        for v in m.support_violations(&f.source, &f.target)? {
            write!(s, "\n  (a={}, b={}) weight {}", v.a, v.b, v.weight).unwrap();
        }
    }
    Ok(s)
}

fn optic(name: &str, text: &str, value: &Value) -> Result<String, CliError> {
    // kernels carry rows, functions tables
    let stochastic = value["forward"].get("rows").is_some();
    let (source, target, residual) = if stochastic {
        let o: Optic<FiniteKernel> = parse_json(name, text)?;
        (o.source().clone(), o.target().clone(), o.residual().size())
    } else {
        let o: Optic<FiniteFunction> = parse_json(name, text)?;
        (o.source().clone(), o.target().clone(), o.residual().size())
    };
    Ok(format!(
        "Optic {source} → {target}; residual of size {residual}; {}",
        if stochastic { "stochastic" } else { "deterministic" }
    ))
}

fn fibre_optic(name: &str, text: &str, value: &Value) -> Result<String, CliError> {
    match value["instance"].as_str() {
        Some("fam") => {
            let o: FibreOptic<FamObject, Vec<FiniteFunction>> = parse_json(name, text)?;
            let valid = o.validate(&Fam).is_ok();
            Ok(format!(
                "FibreOptic (fam) view {:?} update {:?} → view {:?} update {:?}; residual fibre sizes {:?}; {}",
                o.source.view.sizes(),
                o.source.update.sizes(),
                o.target.view.sizes(),
                o.target.update.sizes(),
                o.residual.sizes(),
                if valid { "valid" } else { "INVALID" }
            ))
        }
        Some("dmark") => {
            let o: FibreOptic<DMarkObject, FiniteKernel> = parse_json(name, text)?;
            let valid = o.validate(&DMark::default()).is_ok();
            Ok(format!(
                "FibreOptic (dmark) {} / {} → {} / {}; residual {}; {}",
                bundle(&o.source.view),
                bundle(&o.source.update),
                bundle(&o.target.view),
                bundle(&o.target.update),
                bundle(&o.residual),
                if valid { "valid" } else { "INVALID" }
            ))
        }
        other => Err(unknown(name, &format!("unknown fibre instance {other:?}"))),
    }
}
