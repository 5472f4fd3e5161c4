use super::field::{Elem, FieldKind, FieldSpec, RatFn};
use super::poly::Poly;
use crate::error::{Error, Result};

/// Upper bound on the target size when searching for a root of a modulus.
const MAX_ROOT_SEARCH: u64 = 1 << 20;

/// A field homomorphism `source -> target` compatible with valuations.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldEmbedding {
    source: FieldSpec,
    target: FieldSpec,
    /// Image of the source generator for `GF(p^m)` sources.
    generator_image: Option<Elem>,
}

impl FieldEmbedding {
    pub fn identity(field: &FieldSpec) -> Self {
        FieldEmbedding { source: field.clone(), target: field.clone(), generator_image: None }
    }

    /// Finds the canonical embedding between two supported fields.
    ///
    /// Prime fields and `Q` embed canonically. `GF(p^a) -> GF(p^b)` needs
    /// `a | b` and sends the generator to the smallest root (by canonical
    /// index) of its modulus. Valued fields only embed into fields with the
    /// same normalisation.
    pub fn find(source: &FieldSpec, target: &FieldSpec) -> Result<Self> {
        if source == target {
            return Ok(Self::identity(source));
        }
        let incompatible = || Error::IncompatibleField(source.describe(), target.describe());
        let canonical = || FieldEmbedding { source: source.clone(), target: target.clone(), generator_image: None };
        match (source.kind(), target.kind()) {
            (FieldKind::Prime { p }, FieldKind::Finite { p: q, .. })
            | (FieldKind::Prime { p }, FieldKind::FunctionField { p: q, .. }) => {
                if p == q {
                    Ok(canonical())
                } else {
                    Err(incompatible())
                }
            }
            (FieldKind::Rational, FieldKind::PAdic { .. }) => Ok(canonical()),
            (FieldKind::PAdic { .. }, _) | (FieldKind::FunctionField { .. }, _) => Err(Error::IncompatibleField(
                source.describe(),
                format!("{} (valuation normalisations differ)", target.describe()),
            )),
            (FieldKind::Finite { p, modulus, .. }, FieldKind::Finite { p: q, modulus: m2, .. }) => {
                let (a, b) = (modulus.len() - 1, m2.len() - 1);
                if p != q || b % a != 0 {
                    return Err(incompatible());
                }
                let size = target.order().unwrap_or(u64::MAX);
                if size > MAX_ROOT_SEARCH {
                    return Err(Error::ResourceBound(format!("root search in {target}")));
                }
                let lifted = Poly::from_terms(
                    target,
                    vec!["s".into()],
                    modulus.iter().enumerate().map(|(k, &c)| (vec![k as u32], target.from_int(c as i64))),
                )?;
                let root = (0..size)
                    .map(|i| target.element_at(i))
                    .find(|r| target.is_zero(&lifted.eval(std::slice::from_ref(r))))
                    .ok_or_else(incompatible)?;
                Ok(FieldEmbedding { source: source.clone(), target: target.clone(), generator_image: Some(root) })
            }
            _ => Err(incompatible()),
        }
    }

    pub fn source(&self) -> &FieldSpec {
        &self.source
    }

    pub fn target(&self) -> &FieldSpec {
        &self.target
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target
    }

    pub fn apply(&self, a: &Elem) -> Elem {
        if self.is_identity() {
            return a.clone();
        }
        let t = &self.target;
        match a {
            Elem::Mod(v) => t.from_int(*v as i64),
            Elem::Rat(q) => t.from_rational(q).expect("characteristic zero target"),
            Elem::Ext(c) => {
                let g = self.generator_image.as_ref().expect("generator image for GF(p^m)");
                let mut acc = t.zero();
                for &ci in c.iter().rev() {
                    acc = t.add(&t.mul(&acc, g), &t.from_int(ci as i64));
                }
                acc
            }
            Elem::RatFn(RatFn { .. }) => unreachable!("function fields embed only into themselves"),
        }
    }

    pub fn apply_poly(&self, p: &Poly) -> Poly {
        if self.is_identity() {
            return p.clone();
        }
        p.map_coefficients(&self.target, |c| self.apply(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf4_into_gf16() {
        let f4 = FieldSpec::gf(4).unwrap();
        let f16 = FieldSpec::gf(16).unwrap();
        let e = FieldEmbedding::find(&f4, &f16).unwrap();
        let els = f4.elements().unwrap();
        for x in &els {
            for y in &els {
                assert_eq!(e.apply(&f4.mul(x, y)), f16.mul(&e.apply(x), &e.apply(y)));
                assert_eq!(e.apply(&f4.add(x, y)), f16.add(&e.apply(x), &e.apply(y)));
            }
        }
        assert!(FieldEmbedding::find(&f4, &FieldSpec::gf(8).unwrap()).is_err());
    }

    #[test]
    fn valuation_normalisations_must_agree() {
        let q2 = FieldSpec::padic(2).unwrap();
        let q3 = FieldSpec::padic(3).unwrap();
        assert!(FieldEmbedding::find(&q2, &q3).is_err());
        assert!(FieldEmbedding::find(&FieldSpec::rational(), &q3).is_ok());
    }
}
