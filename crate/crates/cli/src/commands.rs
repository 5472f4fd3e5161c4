//! One function per subcommand; each returns the JSON report.

use serde_json::{json, Value};

use weilres::algebra::AlgebraElement;
use weilres::galois::{fixed_points as engine_fixed_points, validate_action};
use weilres::norms::{non_quasicompact_witness, spectral_radius};
use weilres::ring::{Elem, FieldSpec, Poly};
use weilres::weil::{
    coordinate_block, disc_generators_with_radius, points_over, restrict as engine_restrict, DiscBlock,
};

use crate::document::{
    action_json, extension_json, field_json, parse_element, parse_lognorm, presentation_json, Document,
};
use crate::error::{CliError, CliResult};
use crate::suites;

fn strings(ps: &[Poly]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

/// Renders in the order `x_block, y_variables` when possible.
fn ordered(ps: &[Poly], vars: &[String]) -> Vec<String> {
    ps.iter().map(|p| p.with_vars(vars).unwrap_or_else(|_| p.clone()).to_string()).collect()
}

fn disc_json(d: &DiscBlock) -> Value {
    let vars: Vec<String> = d.x_block.iter().chain(&d.y_variables).cloned().collect();
    let mut v = json!({
        "x_block": d.x_block,
        "y_variables": d.y_variables,
        "generators": ordered(&d.generators, &vars),
        "adic_radii": d.adic_radii.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
    });
    if let Some(b) = &d.berkovich_radii {
        v["berkovich_radii"] = json!(b.iter().map(|r| r.to_string()).collect::<Vec<_>>());
    }
    v
}

pub fn restrict(doc: &Document, name: Option<&str>) -> CliResult<Value> {
    let ext = doc.extension()?;
    let (name, p) = doc.presentation(name)?;
    let mut r = engine_restrict(&p, &ext)?;
    if let Some(ex) = &doc.options.exhaustion {
        let elements = ex.elements.iter().map(|s| parse_element(&ext, s)).collect::<CliResult<Vec<_>>>()?;
        r = r.with_exhaustion(elements, ex.lambda)?;
    }
    let coordinate_map: Vec<Value> =
        r.coordinate_map.iter().map(|(v, block)| json!({"variable": v, "coordinates": block})).collect();
    let coefficient_index: Vec<Value> = p
        .generators()
        .iter()
        .zip(&r.coefficient_index)
        .map(|(g, cs)| json!({"generator": g.to_string(), "coefficients": ordered(cs, r.variables())}))
        .collect();
    let mut out = json!({
        "command": "restrict",
        "presentation": name,
        "extension": extension_json(&ext),
        "result": presentation_json(&r.presentation),
        "coordinate_map": coordinate_map,
        "coefficient_index": coefficient_index,
        "discs": r.discs.iter().map(disc_json).collect::<Vec<_>>(),
    });
    if r.exhaustion.is_some() {
        out["integrality_constraints"] = r
            .integrality_constraints()
            .iter()
            .map(|c| {
                json!({
                    "multiplier": c.multiplier.to_text(),
                    "variable": c.variable,
                    "coordinates": strings(&c.coordinates),
                })
            })
            .collect();
    }
    Ok(out)
}

pub fn disc(doc: &Document, radius_flag: &[String], s_flag: Option<&str>) -> CliResult<Value> {
    let ext = doc.extension()?;
    let radii = doc.radii(&ext, radius_flag)?;
    let s = s_flag.or(doc.options.disc_radius.as_deref()).map(parse_lognorm).transpose()?;
    let block = coordinate_block("x", ext.rank());
    let d = disc_generators_with_radius(&ext, &radii, &block, "y", s.clone())?;
    Ok(json!({
        "command": "disc",
        "extension": extension_json(&ext),
        "radii": radii.iter().map(AlgebraElement::to_text).collect::<Vec<_>>(),
        "disc_radius": s.map(|x| x.to_string()),
        "block": disc_json(&d),
    }))
}

fn element(doc: &Document, text: Option<&str>) -> CliResult<AlgebraElement> {
    let text = text.ok_or_else(|| CliError::Input("--element is required".into()))?;
    parse_element(&doc.extension()?, text)
}

pub fn charpoly(doc: &Document, text: Option<&str>) -> CliResult<Value> {
    let b = element(doc, text)?;
    Ok(json!({
        "command": "charpoly",
        "element": b.to_text(),
        "charpoly": b.charpoly().to_string(),
        "coefficients": strings(&b.charpoly_coefficients()),
        "trace": (-&b.charpoly_coefficients()[0]).to_string(),
    }))
}

pub fn integrality(doc: &Document, text: Option<&str>) -> CliResult<Value> {
    let b = element(doc, text)?;
    let f = b.ext().base().clone();
    let norms = b
        .charpoly_coefficients()
        .iter()
        .map(|c| {
            let c = c.constant_value().ok_or_else(|| CliError::Input("element has parameters".into()))?;
            Ok(f.lognorm(&c)?.to_string())
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(json!({
        "command": "integrality",
        "element": b.to_text(),
        "charpoly": b.charpoly().to_string(),
        "coefficient_lognorms": norms,
        "integral": b.is_integral()?,
    }))
}

/// The spectral radius of `--element`, or the non-quasi-compactness
/// witness for the threshold when no element is given.
pub fn spectral(doc: &Document, text: Option<&str>, threshold: Option<&str>) -> CliResult<Value> {
    if text.is_some() {
        let b = element(doc, text)?;
        return Ok(json!({
            "command": "spectral",
            "element": b.to_text(),
            "charpoly": b.charpoly().to_string(),
            "spectral_radius": spectral_radius(&b)?.to_string(),
        }));
    }
    let ext = doc.extension()?;
    let t =
        doc.threshold(threshold)?.ok_or_else(|| CliError::Input("spectral: give --element or --threshold".into()))?;
    let w = non_quasicompact_witness(&ext, &t)?;
    Ok(json!({
        "command": "spectral",
        "witness": {
            "k": w.k,
            "element": w.element.to_text(),
            "nilpotency_order": w.nilpotency_order,
            "lognorm_xk": w.lognorm_xk.to_string(),
            "threshold": w.threshold.to_string(),
            "spectral_radius": w.spectral_radius.to_string(),
            "holds": w.holds(),
        },
    }))
}

pub fn fixed_points(doc: &Document, name: Option<&str>, allow_wild: bool) -> CliResult<Value> {
    let ext = doc.extension()?;
    let act = doc.action(&ext)?;
    let report = validate_action(&act, &ext);
    if !report.ok {
        return Err(CliError::Input(format!("invalid action: {}", report.diagnostics.join("; "))));
    }
    let (name, p) = doc.presentation(name)?;
    let r = engine_restrict(&p, &ext)?;
    let fixed = engine_fixed_points(&act, &r, allow_wild || doc.options.allow_wild)?;
    Ok(json!({
        "command": "fixed-points",
        "presentation": name,
        "action": action_json(&act, ext.base()),
        "restriction": presentation_json(&r.presentation),
        "fixed": presentation_json(&fixed.presentation),
        "linear_relations": strings(&fixed.linear_relations),
        "eliminated": fixed.eliminated.iter().map(|(v, e)| json!({"variable": v, "value": e.to_string()})).collect::<Vec<_>>(),
    }))
}

fn point_json(field: &FieldSpec, pt: &[Elem]) -> Vec<String> {
    pt.iter().map(|e| field.format_elem(e)).collect()
}

/// Points of a presentation, or of its restriction when `restricted` is
/// set, over each requested finite field.
pub fn points(doc: &Document, name: Option<&str>, fields: &[String], restricted: bool) -> CliResult<Value> {
    let (name, mut p) = doc.presentation(name)?;
    if restricted {
        p = engine_restrict(&p, &doc.extension()?)?.presentation;
    }
    let fields = doc.test_fields(fields)?;
    if fields.is_empty() {
        return Err(CliError::Input("points: give --field or options.test_fields".into()));
    }
    let mut rows = Vec::with_capacity(fields.len());
    for f in &fields {
        let pts = points_over(&p, f)?;
        rows.push(json!({
            "field": field_json(f),
            "count": pts.len(),
            "points": pts.iter().map(|pt| point_json(f, pt)).collect::<Vec<_>>(),
        }));
    }
    Ok(json!({
        "command": "points",
        "presentation": name,
        "restricted": restricted,
        "variables": p.variables(),
        "fields": rows,
    }))
}

pub fn verify(doc: &Document, suite: &str, seed: Option<u64>) -> CliResult<(Value, bool)> {
    let report = suites::run(doc, suite, doc.seed(seed))?;
    Ok((report.to_json(), report.passed()))
}
