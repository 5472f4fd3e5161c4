use std::fmt;
use std::sync::Arc;

use crate::algebra::FreeExtension;
use crate::error::{Error, Result};
use crate::ring::{FieldEmbedding, FieldSpec, LogNorm, Poly};

/// Where a presentation lives: directly over a field, or over a free
/// extension of one, in which case generators may mention the extension's
/// symbols (its generator and identifier-like basis labels) as constants.
#[derive(Clone, Debug, PartialEq)]
pub enum PresentationBase {
    Field(FieldSpec),
    Extension(Arc<FreeExtension>),
}

impl PresentationBase {
    /// Field in which generator coefficients live.
    pub fn coefficient_field(&self) -> &FieldSpec {
        match self {
            PresentationBase::Field(f) => f,
            PresentationBase::Extension(e) => e.base(),
        }
    }

    pub fn symbols(&self) -> Vec<String> {
        match self {
            PresentationBase::Field(_) => Vec::new(),
            PresentationBase::Extension(e) => e.symbol_names(),
        }
    }
}

/// A polynomially presented affine space: `V(generators)` in the listed
/// variables, optionally a polydisc with one log-radius per variable.
#[derive(Clone, Debug, PartialEq)]
pub struct Presentation {
    base: PresentationBase,
    variables: Vec<String>,
    generators: Vec<Poly>,
    radii: Option<Vec<LogNorm>>,
    provenance: String,
}

impl Presentation {
    pub fn new(base: PresentationBase, variables: Vec<String>, generators: Vec<Poly>) -> Result<Self> {
        let symbols = base.symbols();
        for (i, v) in variables.iter().enumerate() {
            if variables[..i].contains(v) {
                return Err(Error::invalid(format!("variable {v} declared twice")));
            }
            if symbols.contains(v) {
                return Err(Error::invalid(format!("variable {v} clashes with an extension symbol")));
            }
        }
        let field = base.coefficient_field();
        for g in &generators {
            if g.field() != field {
                return Err(Error::IncompatibleField(g.field().describe(), field.describe()));
            }
            if let Some(v) = g.used_vars().into_iter().find(|v| !variables.contains(v) && !symbols.contains(v)) {
                return Err(Error::invalid(format!("generator {g} uses undeclared variable {v}")));
            }
        }
        Ok(Presentation { base, variables, generators, radii: None, provenance: String::new() })
    }

    /// Parses generator strings over the coefficient field of `base`.
    pub fn parse(base: PresentationBase, variables: &[&str], generators: &[&str]) -> Result<Self> {
        let vars: Vec<String> = variables.iter().map(|s| s.to_string()).collect();
        let field = base.coefficient_field().clone();
        let gens = generators.iter().map(|g| Poly::parse(&field, g)).collect::<Result<Vec<_>>>()?;
        Self::new(base, vars, gens)
    }

    pub fn affine_space(base: PresentationBase, variables: Vec<String>) -> Result<Self> {
        Self::new(base, variables, Vec::new())
    }

    pub fn with_radii(mut self, radii: Vec<LogNorm>) -> Result<Self> {
        if radii.len() != self.variables.len() {
            return Err(Error::invalid(format!("{} radii for {} variables", radii.len(), self.variables.len())));
        }
        self.radii = Some(radii);
        Ok(self)
    }

    pub fn with_provenance(mut self, tag: impl Into<String>) -> Self {
        self.provenance = tag.into();
        self
    }

    pub fn base(&self) -> &PresentationBase {
        &self.base
    }

    pub fn field(&self) -> &FieldSpec {
        self.base.coefficient_field()
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn radii(&self) -> Option<&[LogNorm]> {
        self.radii.as_deref()
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// `X ×_K K'`: the same equations read over an extension of the base
    /// field.
    pub fn extend_to(&self, ext: &Arc<FreeExtension>) -> Result<Presentation> {
        match &self.base {
            PresentationBase::Field(f) if f == ext.base() => {}
            PresentationBase::Field(f) => return Err(Error::IncompatibleField(f.describe(), ext.base().describe())),
            PresentationBase::Extension(_) => {
                return Err(Error::invalid("presentation already lives over an extension"))
            }
        }
        let mut out = Presentation::new(
            PresentationBase::Extension(ext.clone()),
            self.variables.clone(),
            self.generators.clone(),
        )?;
        out.radii = self.radii.clone();
        out.provenance = self.provenance.clone();
        Ok(out)
    }

    /// Maps all coefficients along a field embedding of the base.
    pub fn base_change(&self, embed: &FieldEmbedding) -> Result<Presentation> {
        if embed.source() != self.field() {
            return Err(Error::IncompatibleField(embed.source().describe(), self.field().describe()));
        }
        let base = match &self.base {
            PresentationBase::Field(_) => PresentationBase::Field(embed.target().clone()),
            PresentationBase::Extension(e) => PresentationBase::Extension(e.base_change(embed)?),
        };
        Ok(Presentation {
            base,
            variables: self.variables.clone(),
            generators: self.generators.iter().map(|g| embed.apply_poly(g)).collect(),
            radii: self.radii.clone(),
            provenance: self.provenance.clone(),
        })
    }

    /// Renames variables; the map must be injective on the variable list.
    pub fn rename(&self, f: impl Fn(&str) -> String) -> Presentation {
        let symbols = self.base.symbols();
        let g = |v: &str| if symbols.iter().any(|s| s == v) { v.to_string() } else { f(v) };
        Presentation {
            base: self.base.clone(),
            variables: self.variables.iter().map(|v| g(v)).collect(),
            generators: self.generators.iter().map(|p| p.rename(g)).collect(),
            radii: self.radii.clone(),
            provenance: self.provenance.clone(),
        }
    }

    /// `X_1 × X_2`. Variables of the second factor that collide with the
    /// first are renamed `v` → `v_b` (repeatedly, until fresh).
    pub fn product(&self, other: &Presentation) -> Result<Presentation> {
        if self.base != other.base {
            return Err(Error::IncompatibleField(self.field().describe(), other.field().describe()));
        }
        let renames = disjoint_names(&self.variables, &other.variables, |_| Vec::new());
        let other = other.rename(|v| lookup(&renames, v));
        let radii = match (&self.radii, &other.radii) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).cloned().collect()),
            (None, None) => None,
            _ => return Err(Error::invalid("product of a polydisc with a presentation without radii")),
        };
        let mut variables = self.variables.clone();
        variables.extend(other.variables.iter().cloned());
        let mut generators = self.generators.clone();
        generators.extend(other.generators.iter().cloned());
        Ok(Presentation { base: self.base.clone(), variables, generators, radii, provenance: self.provenance.clone() })
    }

    /// Generators as canonical strings, sorted and deduplicated.
    pub fn canonical_generators(&self) -> Vec<String> {
        let mut out: Vec<String> = self.generators.iter().map(Poly::canonical_key).collect();
        out.sort();
        out.dedup();
        out
    }
}

/// Chooses fresh names for `right` against `left`: each clashing `v`
/// becomes `v_b`, `v_b_b`, … until neither it nor any of its derived names
/// (`derived(v)`) clash with the taken set.
pub(crate) fn disjoint_names(
    left: &[String],
    right: &[String],
    derived: impl Fn(&str) -> Vec<String>,
) -> Vec<(String, String)> {
    let mut taken: Vec<String> = left.iter().flat_map(|v| std::iter::once(v.clone()).chain(derived(v))).collect();
    let others: Vec<String> = right.to_vec();
    let mut out = Vec::with_capacity(right.len());
    for v in right {
        let mut name = v.clone();
        let clash = |n: &str, taken: &[String]| {
            taken.iter().any(|t| t == n)
                || derived(n).iter().any(|d| taken.contains(d))
                || (n != v && others.iter().any(|o| o == n))
        };
        while clash(&name, &taken) {
            name.push_str("_b");
        }
        taken.push(name.clone());
        taken.extend(derived(&name));
        out.push((v.clone(), name));
    }
    out
}

pub(crate) fn lookup(renames: &[(String, String)], v: &str) -> String {
    renames.iter().find(|(from, _)| from == v).map_or_else(|| v.to_string(), |(_, to)| to.clone())
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        write!(f, "V({}) in ({}) over {}", gens.join(", "), self.variables.join(", "), self.field())
    }
}
