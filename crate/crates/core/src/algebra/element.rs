use std::fmt;
use std::sync::Arc;

use super::charpoly::berkowitz;
use super::extension::FreeExtension;
use super::matrix::Matrix;
use crate::error::{Error, Result};
use crate::ring::lognorm::is_integral_norm;
use crate::ring::{Elem, FieldSpec, Poly};

/// `b = Σ b_i e_i` in a free extension. Coordinates are polynomials over the
/// base field; scalar elements have constant coordinates.
#[derive(Clone, Debug)]
pub struct AlgebraElement {
    ext: Arc<FreeExtension>,
    coords: Vec<Poly>,
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ext, &other.ext) || self.ext == other.ext) && self.coords == other.coords
    }
}

impl AlgebraElement {
    pub fn new(ext: Arc<FreeExtension>, coords: Vec<Poly>) -> Result<Self> {
        if coords.len() != ext.rank() {
            return Err(Error::invalid(format!("expected {} coordinates, got {}", ext.rank(), coords.len())));
        }
        if let Some(c) = coords.iter().find(|c| c.field() != ext.base()) {
            return Err(Error::IncompatibleField(c.field().describe(), ext.base().describe()));
        }
        Ok(Self::from_parts(ext, coords))
    }

    pub(crate) fn from_parts(ext: Arc<FreeExtension>, coords: Vec<Poly>) -> Self {
        AlgebraElement { ext, coords }
    }

    pub fn from_scalars(ext: Arc<FreeExtension>, coords: &[Elem]) -> Result<Self> {
        let base = ext.base().clone();
        Self::new(ext, coords.iter().map(|c| Poly::constant(&base, c.clone())).collect())
    }

    pub fn ext(&self) -> &Arc<FreeExtension> {
        &self.ext
    }

    pub fn coords(&self) -> &[Poly] {
        &self.coords
    }

    fn field(&self) -> &FieldSpec {
        self.ext.base()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Poly::is_zero)
    }

    /// All coordinates are constants of the base field.
    pub fn is_scalar(&self) -> bool {
        self.coords.iter().all(Poly::is_constant)
    }

    pub fn scalar_coords(&self) -> Option<Vec<Elem>> {
        self.coords.iter().map(Poly::constant_value).collect()
    }

    fn same_ext(&self, other: &AlgebraElement) {
        assert!(Arc::ptr_eq(&self.ext, &other.ext) || self.ext == other.ext, "elements of different extensions");
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        self.same_ext(other);
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Self::from_parts(self.ext.clone(), coords)
    }

    pub fn sub(&self, other: &AlgebraElement) -> AlgebraElement {
        self.same_ext(other);
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect();
        Self::from_parts(self.ext.clone(), coords)
    }

    pub fn neg(&self) -> AlgebraElement {
        Self::from_parts(self.ext.clone(), self.coords.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, c: &Poly) -> AlgebraElement {
        Self::from_parts(self.ext.clone(), self.coords.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &AlgebraElement) -> AlgebraElement {
        self.same_ext(other);
        let n = self.ext.rank();
        let field = self.field();
        let mut out = vec![Poly::zero(field, Vec::new()); n];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (k, slot) in out.iter_mut().enumerate() {
                    let term = match self.ext.scalar_structure() {
                        Some(s) => {
                            let c = &s[(i * n + j) * n + k];
                            if field.is_zero(c) {
                                continue;
                            }
                            ab.scale(c)
                        }
                        None => {
                            let c = self.ext.structure_constant(i, j, k);
                            if c.is_zero() {
                                continue;
                            }
                            &ab * c
                        }
                    };
                    *slot = &*slot + &term;
                }
            }
        }
        Self::from_parts(self.ext.clone(), out)
    }

    pub fn pow(&self, mut e: u32) -> AlgebraElement {
        let mut base = self.clone();
        let mut acc = self.ext.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Matrix of multiplication by `b`: column `j` holds the coordinates of
    /// `b·e_j`.
    pub fn mult_matrix(&self) -> Matrix {
        let n = self.ext.rank();
        let mut m = Matrix::zeros(self.field(), n, n);
        for j in 0..n {
            let col = self.mul(&self.ext.basis(j));
            for (k, c) in col.coords.into_iter().enumerate() {
                m.set(k, j, c);
            }
        }
        m
    }

    /// Coefficients `c_1, …, c_n` of `χ_b(z) = z^n + c_1 z^(n−1) + … + c_n`.
    pub fn charpoly_coefficients(&self) -> Vec<Poly> {
        let mut c = berkowitz(&self.mult_matrix());
        c.remove(0);
        c
    }

    /// Characteristic polynomial as a polynomial in `z` (or the first of
    /// `z`, `z_`, `z__`, … not already used by the coordinates).
    pub fn charpoly(&self) -> Poly {
        let used: Vec<String> = self.coords.iter().flat_map(|c| c.used_vars()).collect();
        let mut var = "z".to_string();
        while used.contains(&var) {
            var.push('_');
        }
        let coeffs = self.charpoly_coefficients();
        let n = coeffs.len();
        let z = Poly::var(self.field(), &var);
        let mut out = z.pow(n as u32);
        for (i, c) in coeffs.iter().enumerate() {
            out = &out + &(c * &z.pow((n - 1 - i) as u32));
        }
        out
    }

    /// Integrality over the valuation ring of the base: every coefficient of
    /// the characteristic polynomial has norm at most one.
    pub fn is_integral(&self) -> Result<bool> {
        let field = self.field();
        if !field.has_valuation() {
            return Err(Error::unsupported(format!("{field} carries no valuation")));
        }
        if !self.is_scalar() || !self.ext.has_scalar_structure() {
            return Err(Error::unsupported("integrality needs scalar coordinates and structure constants"));
        }
        for c in self.charpoly_coefficients() {
            let v = field.lognorm(&c.constant_value().expect("scalar"))?;
            if !is_integral_norm(&v) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `M_b^n = 0`.
    pub fn is_nilpotent(&self) -> bool {
        self.mult_matrix().pow(self.ext.rank() as u32).is_zero()
    }

    /// Least `m ≥ 1` with `b^m = 0`, if `b` is nilpotent.
    pub fn nilpotency_order(&self) -> Option<u32> {
        let mut acc = self.clone();
        for m in 1..=self.ext.rank() as u32 {
            if acc.is_zero() {
                return Some(m);
            }
            acc = acc.mul(self);
        }
        None
    }

    /// Readable form: a polynomial in the generator for monogenic
    /// extensions, otherwise `(c_1)*e_1 + …` over the basis labels.
    pub fn to_text(&self) -> String {
        if let Some(g) = self.ext.generator() {
            let t = Poly::var(self.field(), g);
            let p = self
                .coords
                .iter()
                .enumerate()
                .fold(Poly::zero(self.field(), Vec::new()), |acc, (k, c)| &acc + &(c * &t.pow(k as u32)));
            return p.to_string();
        }
        let parts: Vec<String> = self
            .coords
            .iter()
            .zip(self.ext.basis_names())
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, name)| match c.num_terms() {
                1 if c.is_constant() && c.constant_value() == Some(self.field().one()) => name.clone(),
                1 if c.is_constant() => format!("{c}*{name}"),
                _ => format!("({c})*{name}"),
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
