//! The input document: a JSON record naming a field, an optional extension
//! and group action, named presentations and run options.

use std::sync::Arc;

use num_rational::BigRational;
use serde::Deserialize;
use serde_json::{json, Value};

use weilres::algebra::{AlgebraElement, FreeExtension};
use weilres::galois::GroupAction;
use weilres::ring::{FieldKind, FieldSpec, LogNorm, Poly};
use weilres::weil::{evaluate_in_algebra, Presentation, PresentationBase};

use crate::error::{CliError, CliResult};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub version: u32,
    pub field: FieldDoc,
    #[serde(default)]
    pub extension: Option<ExtensionDoc>,
    #[serde(default)]
    pub action: Option<ActionDoc>,
    #[serde(default)]
    pub presentations: Vec<PresentationDoc>,
    #[serde(default)]
    pub options: Options,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldDoc {
    Prime {
        p: u64,
    },
    /// `GF(q)` with the default modulus.
    Gf {
        q: u64,
    },
    /// `GF(p^m)` with an explicit modulus, lowest coefficient first.
    Finite {
        p: u64,
        modulus: Vec<u64>,
        #[serde(default)]
        symbol: Option<String>,
    },
    Rational,
    Padic {
        p: u64,
    },
    FunctionField {
        p: u64,
        r: String,
    },
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionDoc {
    #[serde(default)]
    pub minimal_polynomial: Option<String>,
    #[serde(default)]
    pub symbol: Option<String>,
    #[serde(default)]
    pub rank: Option<usize>,
    #[serde(default)]
    pub basis: Option<Vec<String>>,
    /// `c_ijk` flattened at index `(i·n + j)·n + k`.
    #[serde(default)]
    pub structure_constants: Option<Vec<String>>,
    #[serde(default)]
    pub unit: Option<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ActionDoc {
    Named(String),
    Explicit(ExplicitAction),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitAction {
    pub elements: Vec<String>,
    pub table: Vec<Vec<usize>>,
    /// One matrix per element; column `j` holds the coordinates of `g(e_j)`.
    pub matrices: Vec<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationDoc {
    pub name: String,
    /// `"field"` or `"extension"`; defaults to the extension when present.
    #[serde(default)]
    pub over: Option<String>,
    pub variables: Vec<String>,
    #[serde(default)]
    pub generators: Vec<String>,
    #[serde(default)]
    pub radii: Option<Vec<String>>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Options {
    pub seed: Option<u64>,
    /// Radius elements of the extension for disc generators.
    pub radii: Vec<String>,
    /// Log-radius `s` of the disc for Berkovich radii.
    pub disc_radius: Option<String>,
    pub threshold: Option<String>,
    pub test_fields: Vec<String>,
    pub systems: Option<usize>,
    pub pairs: Option<usize>,
    pub allow_wild: bool,
    pub exhaustion: Option<ExhaustionDoc>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExhaustionDoc {
    pub elements: Vec<String>,
    pub lambda: u32,
}

impl Document {
    pub fn from_json(text: &str) -> CliResult<Document> {
        let doc: Document = serde_json::from_str(text).map_err(|e| CliError::Input(format!("schema: {e}")))?;
        if doc.version != FORMAT_VERSION {
            return Err(CliError::Input(format!(
                "unsupported document version {} (expected {FORMAT_VERSION})",
                doc.version
            )));
        }
        let mut names: Vec<&str> = doc.presentations.iter().map(|p| p.name.as_str()).collect();
        names.sort_unstable();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(CliError::Input(format!("duplicate presentation name {:?}", w[0])));
        }
        Ok(doc)
    }

    pub fn field(&self) -> CliResult<FieldSpec> {
        Ok(match &self.field {
            FieldDoc::Prime { p } => FieldSpec::prime(*p)?,
            FieldDoc::Gf { q } => FieldSpec::gf(*q)?,
            FieldDoc::Finite { p, modulus, symbol } => {
                FieldSpec::finite_with_symbol(*p, modulus.clone(), symbol.as_deref().unwrap_or("a"))?
            }
            FieldDoc::Rational => FieldSpec::rational(),
            FieldDoc::Padic { p } => FieldSpec::padic(*p)?,
            FieldDoc::FunctionField { p, r } => FieldSpec::function_field(*p, parse_rational(r)?)?,
        })
    }

    pub fn extension(&self) -> CliResult<Arc<FreeExtension>> {
        let doc = self.extension.as_ref().ok_or_else(|| CliError::Input("document has no extension".into()))?;
        build_extension(&self.field()?, doc)
    }

    pub fn has_extension(&self) -> bool {
        self.extension.is_some()
    }

    /// The named presentation, or the first one when `name` is `None`.
    pub fn presentation(&self, name: Option<&str>) -> CliResult<(String, Presentation)> {
        let pd = match name {
            Some(n) => self
                .presentations
                .iter()
                .find(|p| p.name == n)
                .ok_or_else(|| CliError::Input(format!("no presentation named {n:?}")))?,
            None => {
                self.presentations.first().ok_or_else(|| CliError::Input("document has no presentations".into()))?
            }
        };
        Ok((pd.name.clone(), self.build_presentation(pd)?))
    }

    pub fn presentations(&self) -> CliResult<Vec<(String, Presentation)>> {
        self.presentations.iter().map(|pd| Ok((pd.name.clone(), self.build_presentation(pd)?))).collect()
    }

    fn build_presentation(&self, pd: &PresentationDoc) -> CliResult<Presentation> {
        let field = self.field()?;
        let base = match pd.over.as_deref() {
            Some("field") => PresentationBase::Field(field.clone()),
            Some("extension") => PresentationBase::Extension(self.extension()?),
            None if self.has_extension() => PresentationBase::Extension(self.extension()?),
            None => PresentationBase::Field(field.clone()),
            Some(other) => {
                return Err(CliError::Input(format!(
                    "presentation {:?}: `over` must be \"field\" or \"extension\", got {other:?}",
                    pd.name
                )))
            }
        };
        let mut vars = pd.variables.clone();
        vars.extend(base.symbols());
        let gens = pd
            .generators
            .iter()
            .map(|g| Poly::parse_with_vars(&field, g, &vars))
            .collect::<weilres::Result<Vec<_>>>()?;
        let mut p = Presentation::new(base, pd.variables.clone(), gens)?.with_provenance(pd.name.clone());
        if let Some(radii) = &pd.radii {
            p = p.with_radii(radii.iter().map(|r| parse_lognorm(r)).collect::<CliResult<_>>()?)?;
        }
        Ok(p)
    }

    pub fn action(&self, ext: &Arc<FreeExtension>) -> CliResult<GroupAction> {
        match &self.action {
            None => Ok(GroupAction::frobenius(ext)?),
            Some(ActionDoc::Named(n)) => match n.as_str() {
                "frobenius" => Ok(GroupAction::frobenius(ext)?),
                "trivial" => Ok(GroupAction::trivial(ext)),
                other => Err(CliError::Input(format!("unknown action {other:?}"))),
            },
            Some(ActionDoc::Explicit(a)) => {
                let f = ext.base();
                let matrices = a
                    .matrices
                    .iter()
                    .map(|m| {
                        m.iter()
                            .map(|row| row.iter().map(|c| f.parse_elem(c)).collect::<weilres::Result<Vec<_>>>())
                            .collect::<weilres::Result<Vec<_>>>()
                    })
                    .collect::<weilres::Result<Vec<_>>>()?;
                Ok(GroupAction::new(a.elements.clone(), a.table.clone(), matrices))
            }
        }
    }

    pub fn seed(&self, flag: Option<u64>) -> u64 {
        flag.or(self.options.seed).unwrap_or(1)
    }

    pub fn threshold(&self, flag: Option<&str>) -> CliResult<Option<LogNorm>> {
        flag.or(self.options.threshold.as_deref()).map(parse_lognorm).transpose()
    }

    pub fn test_fields(&self, flag: &[String]) -> CliResult<Vec<FieldSpec>> {
        let src = if flag.is_empty() { &self.options.test_fields } else { flag };
        src.iter().map(|s| parse_field_arg(s)).collect()
    }

    /// Radius elements, from the command line or the options.
    pub fn radii(&self, ext: &Arc<FreeExtension>, flag: &[String]) -> CliResult<Vec<AlgebraElement>> {
        let src = if flag.is_empty() { &self.options.radii } else { flag };
        src.iter().map(|s| parse_element(ext, s)).collect()
    }
}

pub fn build_extension(field: &FieldSpec, doc: &ExtensionDoc) -> CliResult<Arc<FreeExtension>> {
    match (&doc.minimal_polynomial, &doc.structure_constants) {
        (Some(m), None) => {
            if doc.rank.is_some() || doc.basis.is_some() || doc.unit.is_some() {
                return Err(CliError::Input(
                    "extension: give either minimal_polynomial or rank/structure_constants/unit".into(),
                ));
            }
            let symbol = doc.symbol.as_deref().unwrap_or("t");
            let m = Poly::parse_with_vars(field, m, &[symbol.to_string()])?;
            Ok(FreeExtension::from_minimal_polynomial(field, &m, symbol)?)
        }
        (None, Some(sc)) => {
            let n = doc.rank.ok_or_else(|| CliError::Input("extension: structure constants need a rank".into()))?;
            if doc.symbol.is_some() {
                return Err(CliError::Input("extension: symbol applies only to minimal_polynomial".into()));
            }
            let names = match &doc.basis {
                Some(b) if b.len() == n => b.clone(),
                Some(b) => return Err(CliError::Input(format!("extension: rank {n} but {} basis names", b.len()))),
                None => (1..=n).map(|i| format!("e{i}")).collect(),
            };
            let unit = doc
                .unit
                .as_ref()
                .ok_or_else(|| CliError::Input("extension: structure constants need a unit".into()))?;
            let parse = |s: &String| Poly::parse(field, s);
            let sc = sc.iter().map(parse).collect::<weilres::Result<Vec<_>>>()?;
            let unit = unit.iter().map(parse).collect::<weilres::Result<Vec<_>>>()?;
            Ok(FreeExtension::from_structure_constants(field, names, sc, unit)?)
        }
        _ => Err(CliError::Input("extension: give exactly one of minimal_polynomial or structure_constants".into())),
    }
}

/// Parses an element of `ext` written in its symbols, e.g. `1 + t` or
/// `x1 + x2*t` (unknown identifiers become parameters).
pub fn parse_element(ext: &Arc<FreeExtension>, text: &str) -> CliResult<AlgebraElement> {
    let f = Poly::parse_with_vars(ext.base(), text, &ext.symbol_names())?;
    Ok(evaluate_in_algebra(&f, ext, &[])?)
}

pub fn parse_rational(text: &str) -> CliResult<BigRational> {
    text.trim().parse::<BigRational>().map_err(|_| CliError::Input(format!("not a rational number: {text:?}")))
}

/// `-inf` or a rational.
pub fn parse_lognorm(text: &str) -> CliResult<LogNorm> {
    text.parse::<LogNorm>().map_err(|_| CliError::Input(format!("not a log-norm: {text:?}")))
}

/// A finite field: `q` for `GF(q)` with the default modulus, or
/// `p^m:c0,c1,...,cm` for an explicit modulus.
pub fn parse_field_arg(text: &str) -> CliResult<FieldSpec> {
    let bad = || CliError::Input(format!("bad field {text:?}: expected q or p^m:c0,c1,...,cm"));
    let text = text.trim();
    match text.split_once(':') {
        None => Ok(FieldSpec::gf(text.parse().map_err(|_| bad())?)?),
        Some((head, coeffs)) => {
            let (p, m) = head.split_once('^').ok_or_else(bad)?;
            let p: u64 = p.trim().parse().map_err(|_| bad())?;
            let m: usize = m.trim().parse().map_err(|_| bad())?;
            let modulus =
                coeffs.split(',').map(|c| c.trim().parse::<u64>().map_err(|_| bad())).collect::<CliResult<Vec<_>>>()?;
            if modulus.len() != m + 1 {
                return Err(CliError::Input(format!("{text:?}: modulus needs {} coefficients", m + 1)));
            }
            if m == 1 {
                return Ok(FieldSpec::prime(p)?);
            }
            Ok(FieldSpec::finite(p, modulus)?)
        }
    }
}

/// The tagged-record form of a field.
pub fn field_json(f: &FieldSpec) -> Value {
    match f.kind() {
        FieldKind::Prime { p } => json!({"kind": "prime", "p": p}),
        FieldKind::Finite { p, modulus, symbol } => {
            json!({"kind": "finite", "p": p, "modulus": modulus, "symbol": symbol})
        }
        FieldKind::Rational => json!({"kind": "rational"}),
        FieldKind::PAdic { p } => json!({"kind": "padic", "p": p}),
        FieldKind::FunctionField { p, r, .. } => json!({"kind": "function_field", "p": p, "r": r.to_string()}),
    }
}

pub fn extension_json(ext: &FreeExtension) -> Value {
    match (ext.minimal_polynomial(), ext.generator()) {
        (Some(m), Some(sym)) => json!({"minimal_polynomial": m.to_string(), "symbol": sym}),
        _ => {
            let n = ext.rank();
            let mut sc = Vec::with_capacity(n * n * n);
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        sc.push(ext.structure_constant(i, j, k).to_string());
                    }
                }
            }
            json!({
                "rank": n,
                "basis": ext.basis_names(),
                "structure_constants": sc,
                "unit": ext.unit_coords().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            })
        }
    }
}

pub fn action_json(act: &GroupAction, field: &FieldSpec) -> Value {
    let matrices: Vec<Vec<Vec<String>>> = act
        .matrices()
        .iter()
        .map(|m| m.iter().map(|row| row.iter().map(|c| field.format_elem(c)).collect()).collect())
        .collect();
    json!({"elements": act.names(), "table": act.table(), "matrices": matrices})
}

pub fn presentation_json(p: &Presentation) -> Value {
    let mut v = json!({
        "field": field_json(p.field()),
        "variables": p.variables(),
        "generators": p.generators().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
        "provenance": p.provenance(),
    });
    if let PresentationBase::Extension(e) = p.base() {
        v["extension"] = extension_json(e);
    }
    if let Some(r) = p.radii() {
        v["radii"] = json!(r.iter().map(|x| x.to_string()).collect::<Vec<_>>());
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_arguments() {
        assert_eq!(parse_field_arg("7").unwrap(), FieldSpec::prime(7).unwrap());
        assert_eq!(parse_field_arg("9").unwrap(), FieldSpec::gf(9).unwrap());
        assert_eq!(parse_field_arg("3^2:1,0,1").unwrap(), FieldSpec::finite(3, vec![1, 0, 1]).unwrap());
        assert!(parse_field_arg("3^2:1,1").is_err());
        assert!(parse_field_arg("6").is_err());
        assert!(parse_field_arg("x").is_err());
    }

    #[test]
    fn lognorm_arguments() {
        assert_eq!(parse_lognorm("-inf").unwrap(), LogNorm::NegInf);
        assert_eq!(parse_lognorm("5/2").unwrap(), LogNorm::from_ratio(5, 2));
        assert!(parse_lognorm("abc").is_err());
    }

    #[test]
    fn extension_needs_one_shape() {
        let f = FieldSpec::rational();
        let both = ExtensionDoc {
            minimal_polynomial: Some("t^2 + 1".into()),
            structure_constants: Some(vec![]),
            ..Default::default()
        };
        assert!(build_extension(&f, &both).is_err());
        assert!(build_extension(&f, &ExtensionDoc::default()).is_err());
    }

    #[test]
    fn field_records_round_trip() {
        for f in [
            FieldSpec::prime(5).unwrap(),
            FieldSpec::gf(8).unwrap(),
            FieldSpec::rational(),
            FieldSpec::padic(3).unwrap(),
            FieldSpec::function_field(2, BigRational::new(1.into(), 3.into())).unwrap(),
        ] {
            let text = serde_json::json!({"version": 1, "field": field_json(&f)}).to_string();
            assert_eq!(Document::from_json(&text).unwrap().field().unwrap(), f);
        }
    }
}
