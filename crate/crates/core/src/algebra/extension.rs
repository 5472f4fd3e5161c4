use std::sync::Arc;

use super::element::AlgebraElement;
use crate::error::{Error, Result};
use crate::ring::{Elem, FieldEmbedding, FieldKind, FieldSpec, Poly};

/// Largest supported rank (tensor squares of rank-4 extensions).
pub const MAX_RANK: usize = 16;

/// A finite free commutative algebra `B` over a field `A`, given by a basis
/// `e_1, …, e_n` and structure constants `e_i e_j = Σ_k c_ijk e_k`.
///
/// Structure constants are polynomials over the base field so that
/// parametric families such as `A[t]/(t² − d)` with symbolic `d` fit the same
/// type; most extensions have constant entries.
#[derive(Clone, Debug)]
pub struct FreeExtension {
    base: FieldSpec,
    rank: usize,
    basis_names: Vec<String>,
    generator: Option<String>,
    minimal_polynomial: Option<Poly>,
    structure: Vec<Poly>,
    /// Constant structure constants, when all of them are.
    scalar_structure: Option<Vec<Elem>>,
    unit: Vec<Poly>,
}

impl PartialEq for FreeExtension {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base
            && self.rank == other.rank
            && self.basis_names == other.basis_names
            && self.structure == other.structure
            && self.unit == other.unit
    }
}

impl FreeExtension {
    /// `A[t]/(m)` with basis `1, t, …, t^(n−1)`.
    pub fn from_minimal_polynomial(base: &FieldSpec, m: &Poly, symbol: &str) -> Result<Arc<Self>> {
        if m.field() != base {
            return Err(Error::IncompatibleField(m.field().describe(), base.describe()));
        }
        let cs = m.coefficients_in(symbol);
        let n = cs.len() - 1;
        if n == 0 {
            return Err(Error::invalid(format!("minimal polynomial {m} has degree 0 in {symbol}")));
        }
        if n > MAX_RANK {
            return Err(Error::ResourceBound(format!("rank {n} exceeds {MAX_RANK}")));
        }
        if cs[n] != Poly::one(base) {
            return Err(Error::invalid(format!("minimal polynomial {m} is not monic in {symbol}")));
        }
        let zero = Poly::zero(base, Vec::new());
        // powers[k] = coordinates of t^k for k <= 2n - 2
        let mut powers: Vec<Vec<Poly>> = Vec::with_capacity(2 * n - 1);
        let mut cur = vec![zero.clone(); n];
        cur[0] = Poly::one(base);
        powers.push(cur.clone());
        for _ in 1..(2 * n - 1).max(2) {
            let top = cur[n - 1].clone();
            let mut next = vec![zero.clone(); n];
            for j in 0..n {
                let shifted = if j == 0 { zero.clone() } else { cur[j - 1].clone() };
                next[j] = &shifted - &(&top * &cs[j]);
            }
            cur = next;
            powers.push(cur.clone());
        }
        let mut structure = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                structure.extend(powers[i + j].iter().cloned());
            }
        }
        let mut unit = vec![zero; n];
        unit[0] = Poly::one(base);
        let basis_names = (0..n)
            .map(|k| match k {
                0 => "1".to_string(),
                1 => symbol.to_string(),
                k => format!("{symbol}^{k}"),
            })
            .collect();
        let ext = FreeExtension {
            base: base.clone(),
            rank: n,
            basis_names,
            generator: Some(symbol.to_string()),
            minimal_polynomial: Some(m.clone()),
            scalar_structure: scalar_entries(&structure),
            structure,
            unit,
        };
        Ok(Arc::new(ext))
    }

    /// Builds an extension from explicit structure constants
    /// (`structure[(i·n + j)·n + k] = c_ijk`) and unit coordinates, checking
    /// commutativity, the unit law and associativity.
    pub fn from_structure_constants(
        base: &FieldSpec,
        basis_names: Vec<String>,
        structure: Vec<Poly>,
        unit: Vec<Poly>,
    ) -> Result<Arc<Self>> {
        let n = basis_names.len();
        if n == 0 {
            return Err(Error::invalid("rank must be positive"));
        }
        if n > MAX_RANK {
            return Err(Error::ResourceBound(format!("rank {n} exceeds {MAX_RANK}")));
        }
        if structure.len() != n * n * n || unit.len() != n {
            return Err(Error::invalid(format!(
                "rank {n} needs {} structure constants and {n} unit coordinates",
                n * n * n
            )));
        }
        if let Some(p) = structure.iter().chain(&unit).find(|p| p.field() != base) {
            return Err(Error::IncompatibleField(p.field().describe(), base.describe()));
        }
        let ext = Arc::new(FreeExtension {
            base: base.clone(),
            rank: n,
            basis_names,
            generator: None,
            minimal_polynomial: None,
            scalar_structure: scalar_entries(&structure),
            structure,
            unit,
        });
        ext.validate()?;
        Ok(ext)
    }

    fn validate(self: &Arc<Self>) -> Result<()> {
        let n = self.rank;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.structure_constant(i, j, k) != self.structure_constant(j, i, k) {
                        return Err(Error::invalid(format!("not commutative: c[{i}][{j}][{k}] != c[{j}][{i}][{k}]")));
                    }
                }
            }
        }
        let one = self.one();
        for i in 0..n {
            let e = self.basis(i);
            if one.mul(&e) != e {
                return Err(Error::invalid(format!("unit law fails on basis element {i}")));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let eij = self.basis(i).mul(&self.basis(j));
                for k in 0..n {
                    let left = eij.mul(&self.basis(k));
                    let right = self.basis(i).mul(&self.basis(j).mul(&self.basis(k)));
                    if left != right {
                        return Err(Error::invalid(format!("not associative on basis triple ({i}, {j}, {k})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &FieldSpec {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    /// Symbol of the adjoined root for extensions built from a minimal
    /// polynomial.
    pub fn generator(&self) -> Option<&str> {
        self.generator.as_deref()
    }

    pub fn minimal_polynomial(&self) -> Option<&Poly> {
        self.minimal_polynomial.as_ref()
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &Poly {
        &self.structure[(i * self.rank + j) * self.rank + k]
    }

    pub(crate) fn scalar_structure(&self) -> Option<&[Elem]> {
        self.scalar_structure.as_deref()
    }

    pub fn unit_coords(&self) -> &[Poly] {
        &self.unit
    }

    /// True when every structure constant lies in the base field.
    pub fn has_scalar_structure(&self) -> bool {
        self.scalar_structure.is_some()
    }

    pub fn one(self: &Arc<Self>) -> AlgebraElement {
        AlgebraElement::from_parts(self.clone(), self.unit.clone())
    }

    pub fn zero(self: &Arc<Self>) -> AlgebraElement {
        AlgebraElement::from_parts(self.clone(), vec![Poly::zero(&self.base, Vec::new()); self.rank])
    }

    pub fn basis(self: &Arc<Self>, i: usize) -> AlgebraElement {
        let mut c = vec![Poly::zero(&self.base, Vec::new()); self.rank];
        c[i] = Poly::one(&self.base);
        AlgebraElement::from_parts(self.clone(), c)
    }

    /// Names usable as constants inside presentations over this extension:
    /// the generator symbol and every basis label that is an identifier.
    pub fn symbols(self: &Arc<Self>) -> Vec<(String, AlgebraElement)> {
        let mut out = Vec::new();
        if let Some(g) = &self.generator {
            let t = if self.rank >= 2 {
                self.basis(1)
            } else {
                let c0 = self.minimal_polynomial.as_ref().expect("monogenic").coefficients_in(g)[0].clone();
                self.one().scale(&-&c0)
            };
            out.push((g.clone(), t));
        }
        for (i, name) in self.basis_names.iter().enumerate() {
            if is_identifier(name) && !out.iter().any(|(n, _)| n == name) {
                out.push((name.clone(), self.basis(i)));
            }
        }
        out
    }

    pub fn symbol_names(self: &Arc<Self>) -> Vec<String> {
        self.symbols().into_iter().map(|(n, _)| n).collect()
    }

    /// Maps the extension along a field embedding of its base.
    pub fn base_change(self: &Arc<Self>, embed: &FieldEmbedding) -> Result<Arc<Self>> {
        if embed.source() != &self.base {
            return Err(Error::IncompatibleField(embed.source().describe(), self.base.describe()));
        }
        if embed.is_identity() {
            return Ok(self.clone());
        }
        let structure: Vec<Poly> = self.structure.iter().map(|p| embed.apply_poly(p)).collect();
        Ok(Arc::new(FreeExtension {
            base: embed.target().clone(),
            rank: self.rank,
            basis_names: self.basis_names.clone(),
            generator: self.generator.clone(),
            minimal_polynomial: self.minimal_polynomial.as_ref().map(|m| embed.apply_poly(m)),
            scalar_structure: scalar_entries(&structure),
            structure,
            unit: self.unit.iter().map(|p| embed.apply_poly(p)).collect(),
        }))
    }

    /// Identifies `F_p[t]/(m)` with the field `GF(p^n)` when `m` is
    /// irreducible: returns the field together with the images of the basis.
    pub fn as_finite_field(self: &Arc<Self>) -> Result<FiniteFieldModel> {
        let p = match self.base.kind() {
            FieldKind::Prime { p } => *p,
            _ => return Err(Error::unsupported("field model needs a prime base field")),
        };
        if self.rank == 1 {
            return Ok(FiniteFieldModel { field: self.base.clone(), basis_images: vec![self.base.one()] });
        }
        let (Some(m), Some(g)) = (&self.minimal_polynomial, &self.generator) else {
            return Err(Error::unsupported("field model needs an extension given by a minimal polynomial"));
        };
        let modulus = m
            .coefficients_in(g)
            .iter()
            .map(|c| match c.constant_value() {
                Some(Elem::Mod(v)) => Ok(v),
                _ => Err(Error::unsupported("minimal polynomial has non-constant coefficients")),
            })
            .collect::<Result<Vec<u64>>>()?;
        let field = FieldSpec::finite_with_symbol(p, modulus, g)?;
        let a = field.generator().expect("extension field");
        let basis_images = (0..self.rank).map(|k| field.pow(&a, k as u128)).collect();
        Ok(FiniteFieldModel { field, basis_images })
    }
}

/// `F_p[t]/(m)` seen as the finite field `GF(p^n)`.
#[derive(Clone, Debug)]
pub struct FiniteFieldModel {
    pub field: FieldSpec,
    pub basis_images: Vec<Elem>,
}

impl FiniteFieldModel {
    /// Image of an element with constant coordinates.
    pub fn to_field(&self, b: &AlgebraElement) -> Result<Elem> {
        let f = &self.field;
        let mut acc = f.zero();
        for (c, img) in b.coords().iter().zip(&self.basis_images) {
            let v = c.constant_value().ok_or_else(|| Error::invalid("element has non-constant coordinates"))?;
            let v = match v {
                Elem::Mod(v) => f.from_int(v as i64),
                other => other,
            };
            acc = f.add(&acc, &f.mul(&v, img));
        }
        Ok(acc)
    }
}

fn scalar_entries(ps: &[Poly]) -> Option<Vec<Elem>> {
    ps.iter().map(Poly::constant_value).collect()
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// `B_1 ⊗_A B_2` with basis `e_i ⊗ f_j` in lexicographic order
/// (index `i·n_2 + j`).
pub fn tensor_product(b1: &Arc<FreeExtension>, b2: &Arc<FreeExtension>) -> Result<Arc<FreeExtension>> {
    if b1.base != b2.base {
        return Err(Error::IncompatibleField(b1.base.describe(), b2.base.describe()));
    }
    let (n1, n2) = (b1.rank, b2.rank);
    let n = n1 * n2;
    if n > MAX_RANK {
        return Err(Error::ResourceBound(format!("tensor rank {n} exceeds {MAX_RANK}")));
    }
    let mut structure = Vec::with_capacity(n * n * n);
    for i1 in 0..n1 {
        for j1 in 0..n2 {
            for i2 in 0..n1 {
                for j2 in 0..n2 {
                    for k1 in 0..n1 {
                        for k2 in 0..n2 {
                            structure.push(b1.structure_constant(i1, i2, k1) * b2.structure_constant(j1, j2, k2));
                        }
                    }
                }
            }
        }
    }
    let mut unit = Vec::with_capacity(n);
    let mut names = Vec::with_capacity(n);
    for i in 0..n1 {
        for j in 0..n2 {
            unit.push(&b1.unit[i] * &b2.unit[j]);
            names.push(format!("{}⊗{}", b1.basis_names[i], b2.basis_names[j]));
        }
    }
    Ok(Arc::new(FreeExtension {
        base: b1.base.clone(),
        rank: n,
        basis_names: names,
        generator: None,
        minimal_polynomial: None,
        scalar_structure: scalar_entries(&structure),
        structure,
        unit,
    }))
}

/// `b ↦ b ⊗ 1` into `B_1 ⊗ B_2`.
pub fn embed_left(
    b: &AlgebraElement,
    right: &Arc<FreeExtension>,
    tensor: &Arc<FreeExtension>,
) -> Result<AlgebraElement> {
    let n2 = right.rank;
    if tensor.rank != b.ext().rank * n2 {
        return Err(Error::invalid("tensor rank does not match the factors"));
    }
    let coords = (0..tensor.rank).map(|idx| &b.coords()[idx / n2] * &right.unit[idx % n2]).collect();
    AlgebraElement::new(tensor.clone(), coords)
}

/// `b ↦ 1 ⊗ b` into `B_1 ⊗ B_2`.
pub fn embed_right(
    left: &Arc<FreeExtension>,
    b: &AlgebraElement,
    tensor: &Arc<FreeExtension>,
) -> Result<AlgebraElement> {
    let n2 = b.ext().rank;
    if tensor.rank != left.rank * n2 {
        return Err(Error::invalid("tensor rank does not match the factors"));
    }
    let coords = (0..tensor.rank).map(|idx| &left.unit[idx / n2] * &b.coords()[idx % n2]).collect();
    AlgebraElement::new(tensor.clone(), coords)
}
