use std::collections::HashMap;
use std::sync::Arc;

use super::disc::{disc_generators_with_radius, DiscBlock};
use super::presentation::{disjoint_names, lookup, Presentation, PresentationBase};
use crate::algebra::{AlgebraElement, FreeExtension};
use crate::error::{Error, Result};
use crate::ring::{FieldEmbedding, Poly};

/// Names of the coordinate block of `var`: `var_1, …, var_n`.
pub fn coordinate_block(var: &str, n: usize) -> Vec<String> {
    (1..=n).map(|j| format!("{var}_{j}")).collect()
}

/// `Σ_j var_j e_j` with fresh base variables as coordinates.
pub fn generic_element(ext: &Arc<FreeExtension>, var: &str) -> AlgebraElement {
    let coords = coordinate_block(var, ext.rank()).iter().map(|v| Poly::var(ext.base(), v)).collect();
    AlgebraElement::new(ext.clone(), coords).expect("rank-sized coordinates")
}

/// Evaluates `f` in the algebra: bound variables map to the given elements,
/// extension symbols to their elements, and every other variable stays a
/// parameter (a base polynomial times the unit).
pub fn evaluate_in_algebra(
    f: &Poly,
    ext: &Arc<FreeExtension>,
    bindings: &[(String, AlgebraElement)],
) -> Result<AlgebraElement> {
    if f.field() != ext.base() {
        return Err(Error::IncompatibleField(f.field().describe(), ext.base().describe()));
    }
    let symbols = ext.symbols();
    let vars = f.vars().to_vec();
    let images: Vec<Option<&AlgebraElement>> = vars
        .iter()
        .map(|v| bindings.iter().find(|(n, _)| n == v).or_else(|| symbols.iter().find(|(n, _)| n == v)).map(|(_, e)| e))
        .collect();
    let mut cache: HashMap<(usize, u32), AlgebraElement> = HashMap::new();
    let mut acc = ext.zero();
    for (m, c) in f.terms() {
        let mut scalar = Poly::constant(ext.base(), c.clone());
        let mut elem: Option<AlgebraElement> = None;
        for (i, &e) in m.iter().enumerate() {
            if e == 0 {
                continue;
            }
            match images[i] {
                None => scalar = &scalar * &Poly::var(ext.base(), &vars[i]).pow(e),
                Some(img) => {
                    let pw = cache.entry((i, e)).or_insert_with(|| img.pow(e)).clone();
                    elem = Some(match elem {
                        None => pw,
                        Some(x) => x.mul(&pw),
                    });
                }
            }
        }
        let term = elem.unwrap_or_else(|| ext.one()).scale(&scalar);
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// Substitutes `x ↦ Σ_j x_j e_j` for each listed variable and returns the
/// basis coordinates of the result.
pub fn expand_element(f: &Poly, ext: &Arc<FreeExtension>, variables: &[String]) -> Result<Vec<Poly>> {
    let bindings: Vec<(String, AlgebraElement)> =
        variables.iter().map(|v| (v.clone(), generic_element(ext, v))).collect();
    Ok(evaluate_in_algebra(f, ext, &bindings)?.coords().to_vec())
}

/// Metadata of the exhaustion index: a finite set `M` of topologically
/// nilpotent elements and the level `λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Exhaustion {
    pub elements: Vec<AlgebraElement>,
    pub lambda: u32,
}

/// The condition that `multiplier · variable` is integral, with the
/// coordinates of the product.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegralityConstraint {
    pub multiplier: AlgebraElement,
    pub variable: String,
    pub coordinates: Vec<Poly>,
}

impl Exhaustion {
    /// `M(λ)`: all products of `λ` elements of `M` (with repetition),
    /// deduplicated.
    pub fn m_lambda(&self) -> Vec<AlgebraElement> {
        let Some(first) = self.elements.first() else {
            return Vec::new();
        };
        let mut out: Vec<AlgebraElement> = Vec::new();
        let k = self.elements.len();
        // nondecreasing index sequences of length λ
        let mut idx = vec![0usize; self.lambda as usize];
        loop {
            let prod = idx.iter().fold(first.ext().one(), |acc, &i| acc.mul(&self.elements[i]));
            if !out.contains(&prod) {
                out.push(prod);
            }
            let Some(pos) = idx.iter().rposition(|&i| i + 1 < k) else {
                break;
            };
            let next = idx[pos] + 1;
            for slot in &mut idx[pos..] {
                *slot = next;
            }
        }
        out
    }

    fn constraints(&self, vars: &[String]) -> Vec<IntegralityConstraint> {
        let mut out = Vec::new();
        for m in self.m_lambda() {
            for v in vars {
                let x = generic_element(m.ext(), v);
                out.push(IntegralityConstraint {
                    multiplier: m.clone(),
                    variable: v.clone(),
                    coordinates: m.mul(&x).coords().to_vec(),
                });
            }
        }
        out
    }
}

/// The restriction of a presentation along a free extension.
#[derive(Clone, Debug, PartialEq)]
pub struct RestrictionResult {
    pub source: Presentation,
    pub ext: Arc<FreeExtension>,
    /// Presentation over the base field in the block variables.
    pub presentation: Presentation,
    /// For each original variable, its block `x_1, …, x_n`
    /// (`x ↦ Σ_j x_j e_j`).
    pub coordinate_map: Vec<(String, Vec<String>)>,
    /// For each original generator, its `n` basis coordinates.
    pub coefficient_index: Vec<Vec<Poly>>,
    /// Disc bookkeeping, one block per variable when the source has radii.
    pub discs: Vec<DiscBlock>,
    pub exhaustion: Option<Exhaustion>,
}

/// Restricts `p` along `ext`. A presentation over the base field of `ext`
/// is first read over `ext`.
pub fn restrict(p: &Presentation, ext: &Arc<FreeExtension>) -> Result<RestrictionResult> {
    let source = match p.base() {
        PresentationBase::Extension(e) if e == ext => p.clone(),
        PresentationBase::Extension(_) => return Err(Error::invalid("presentation lives over a different extension")),
        PresentationBase::Field(_) => p.extend_to(ext)?,
    };
    let n = ext.rank();
    let base = ext.base();
    let coordinate_map: Vec<(String, Vec<String>)> =
        source.variables().iter().map(|v| (v.clone(), coordinate_block(v, n))).collect();
    let bindings: Vec<(String, AlgebraElement)> =
        source.variables().iter().map(|v| (v.clone(), generic_element(ext, v))).collect();
    let mut coefficient_index = Vec::with_capacity(source.generators().len());
    for g in source.generators() {
        coefficient_index.push(evaluate_in_algebra(g, ext, &bindings)?.coords().to_vec());
    }
    let block_vars: Vec<String> = coordinate_map.iter().flat_map(|(_, b)| b.iter().cloned()).collect();
    let generators = coefficient_index
        .iter()
        .flatten()
        .filter(|c| !c.is_zero())
        .map(|c| c.with_vars(&block_vars))
        .collect::<Result<Vec<_>>>()?;
    let presentation = Presentation::new(PresentationBase::Field(base.clone()), block_vars, generators)?
        .with_provenance(match source.provenance() {
            "" => "restriction".to_string(),
            tag => format!("restriction of {tag}"),
        });
    let mut discs = Vec::new();
    if let Some(radii) = source.radii() {
        for ((v, block), r) in coordinate_map.iter().zip(radii) {
            discs.push(disc_generators_with_radius(ext, &[ext.one()], block, &format!("{v}_y"), Some(r.clone()))?);
        }
    }
    Ok(RestrictionResult {
        source,
        ext: ext.clone(),
        presentation,
        coordinate_map,
        coefficient_index,
        discs,
        exhaustion: None,
    })
}

impl RestrictionResult {
    /// Attaches exhaustion metadata; `M` must live in the same extension.
    pub fn with_exhaustion(mut self, elements: Vec<AlgebraElement>, lambda: u32) -> Result<Self> {
        if elements.iter().any(|e| e.ext() != &self.ext) {
            return Err(Error::invalid("exhaustion elements must lie in the restricting extension"));
        }
        self.exhaustion = Some(Exhaustion { elements, lambda });
        Ok(self)
    }

    /// Integrality conditions `m·x` for `m ∈ M(λ)` and each original
    /// variable. Empty without exhaustion metadata.
    pub fn integrality_constraints(&self) -> Vec<IntegralityConstraint> {
        match &self.exhaustion {
            None => Vec::new(),
            Some(e) => e.constraints(self.source.variables()),
        }
    }

    pub fn variables(&self) -> &[String] {
        self.presentation.variables()
    }

    pub fn generators(&self) -> &[Poly] {
        self.presentation.generators()
    }

    /// `R(X_1) × R(X_2)`, renaming the second factor's variables like
    /// [`Presentation::product`].
    pub fn product(&self, other: &RestrictionResult) -> Result<RestrictionResult> {
        if self.ext != other.ext {
            return Err(Error::invalid("restrictions along different extensions"));
        }
        let n = self.ext.rank();
        let renames = disjoint_names(self.source.variables(), other.source.variables(), |v| {
            let mut d = coordinate_block(v, n);
            d.push(format!("{v}_y"));
            d
        });
        let mut table: Vec<(String, String)> = Vec::new();
        for (from, to) in renames.iter().filter(|(a, b)| a != b) {
            table.push((from.clone(), to.clone()));
            table.extend(coordinate_block(from, n).into_iter().zip(coordinate_block(to, n)));
            let prefix = format!("{from}_y");
            for d in &other.discs {
                for y in &d.y_variables {
                    if let Some(rest) = y.strip_prefix(&prefix) {
                        table.push((y.clone(), format!("{to}_y{rest}")));
                    }
                }
            }
        }
        let map_var = |v: &str| lookup(&table, v);
        let source = self.source.product(&other.source)?;
        let presentation = self.presentation.product(&other.presentation.rename(map_var))?;
        let mut coordinate_map = self.coordinate_map.clone();
        coordinate_map.extend(
            other.coordinate_map.iter().map(|(v, b)| (lookup(&renames, v), b.iter().map(|x| map_var(x)).collect())),
        );
        let mut coefficient_index = self.coefficient_index.clone();
        coefficient_index
            .extend(other.coefficient_index.iter().map(|cs| cs.iter().map(|c| c.rename(map_var)).collect()));
        let mut discs = self.discs.clone();
        discs.extend(other.discs.iter().map(|d| d.rename(map_var)));
        Ok(RestrictionResult {
            source,
            ext: self.ext.clone(),
            presentation: presentation.with_provenance(self.presentation.provenance()),
            coordinate_map,
            coefficient_index,
            discs,
            exhaustion: if self.exhaustion == other.exhaustion { self.exhaustion.clone() } else { None },
        })
    }

    /// Maps everything along an embedding of the base field.
    pub fn base_change(&self, embed: &FieldEmbedding) -> Result<RestrictionResult> {
        let ext = self.ext.base_change(embed)?;
        let map_elem = |e: &AlgebraElement| {
            AlgebraElement::new(ext.clone(), e.coords().iter().map(|c| embed.apply_poly(c)).collect())
        };
        let source = match self.source.base() {
            PresentationBase::Extension(_) => {
                let mut gens = Vec::new();
                for g in self.source.generators() {
                    gens.push(embed.apply_poly(g));
                }
                let mut s = Presentation::new(
                    PresentationBase::Extension(ext.clone()),
                    self.source.variables().to_vec(),
                    gens,
                )?
                .with_provenance(self.source.provenance());
                if let Some(r) = self.source.radii() {
                    s = s.with_radii(r.to_vec())?;
                }
                s
            }
            PresentationBase::Field(_) => unreachable!("restriction sources live over the extension"),
        };
        let exhaustion = match &self.exhaustion {
            None => None,
            Some(e) => Some(Exhaustion {
                elements: e.elements.iter().map(map_elem).collect::<Result<Vec<_>>>()?,
                lambda: e.lambda,
            }),
        };
        Ok(RestrictionResult {
            source,
            presentation: self.presentation.base_change(embed)?,
            coordinate_map: self.coordinate_map.clone(),
            coefficient_index: self
                .coefficient_index
                .iter()
                .map(|cs| cs.iter().map(|c| embed.apply_poly(c)).collect())
                .collect(),
            discs: self.discs.iter().map(|d| d.base_change(embed)).collect(),
            exhaustion,
            ext,
        })
    }
}
