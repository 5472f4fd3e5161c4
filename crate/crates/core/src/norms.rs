//! Spectral values of monic polynomials, spectral radii of algebra elements
//! and the nilpotent witnesses attached to purely inseparable extensions.

use std::fmt;
use std::sync::Arc;

use crate::algebra::{embed_left, embed_right, tensor_product, AlgebraElement, FreeExtension};
use crate::error::{Error, Result};
use crate::ring::{Elem, FieldKind, FieldSpec, LogNorm, Poly};

/// `z^n + c_1 z^(n−1) + … + c_n` over a field.
#[derive(Clone, Debug, PartialEq)]
pub struct MonicPoly {
    field: FieldSpec,
    coeffs: Vec<Elem>,
}

impl MonicPoly {
    /// From `[c_1, …, c_n]`, `n ≥ 1`.
    pub fn new(field: &FieldSpec, coeffs: Vec<Elem>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("a monic polynomial needs degree at least 1"));
        }
        if let Some(c) = coeffs.iter().find(|c| !field.contains(c)) {
            return Err(Error::invalid(format!("{c:?} is not an element of {field}")));
        }
        Ok(MonicPoly { field: field.clone(), coeffs })
    }

    /// Reads a univariate polynomial in `var` with constant coefficients.
    pub fn from_poly(p: &Poly, var: &str) -> Result<Self> {
        let cs = p.coefficients_in(var);
        let n = cs.len() - 1;
        if cs[n] != Poly::one(p.field()) {
            return Err(Error::invalid(format!("{p} is not monic in {var}")));
        }
        let coeffs = cs[..n]
            .iter()
            .rev()
            .map(|c| c.constant_value().ok_or_else(|| Error::invalid(format!("{p} has non-constant coefficients"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(p.field(), coeffs)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// `[c_1, …, c_n]`.
    pub fn coefficients(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn to_poly(&self, var: &str) -> Poly {
        let z = Poly::var(&self.field, var);
        let n = self.degree();
        self.coeffs.iter().enumerate().fold(z.pow(n as u32), |acc, (i, c)| &acc + &z.pow((n - 1 - i) as u32).scale(c))
    }

    pub fn mul(&self, other: &MonicPoly) -> Result<MonicPoly> {
        if self.field != other.field {
            return Err(Error::IncompatibleField(self.field.describe(), other.field.describe()));
        }
        let f = &self.field;
        let a: Vec<Elem> = std::iter::once(f.one()).chain(self.coeffs.iter().cloned()).collect();
        let b: Vec<Elem> = std::iter::once(f.one()).chain(other.coeffs.iter().cloned()).collect();
        let mut out = vec![f.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(x, y));
            }
        }
        out.remove(0);
        MonicPoly::new(f, out)
    }
}

impl fmt::Display for MonicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly("z"))
    }
}

/// `σ(p) = max_i lognorm(c_i)/i`, and `-inf` when every `c_i` vanishes.
pub fn spectral_value(p: &MonicPoly) -> Result<LogNorm> {
    let mut best = LogNorm::NegInf;
    for (i, c) in p.coeffs.iter().enumerate() {
        best = best.max(p.field.lognorm(c)?.div_int(i as u64 + 1));
    }
    Ok(best)
}

/// Spectral value of `z^n + Σ c_i z^(n−i)` given constant polynomials.
pub(crate) fn spectral_value_of(field: &FieldSpec, coeffs: &[Poly]) -> Result<LogNorm> {
    let cs = coeffs
        .iter()
        .map(|c| c.constant_value().ok_or_else(|| Error::unsupported("spectral value of a non-constant polynomial")))
        .collect::<Result<Vec<_>>>()?;
    if cs.is_empty() {
        return Ok(LogNorm::NegInf);
    }
    spectral_value(&MonicPoly::new(field, cs)?)
}

/// Whether `σ(pq) = max(σ(p), σ(q))`.
pub fn spectral_value_product_check(p: &MonicPoly, q: &MonicPoly) -> Result<bool> {
    let pq = p.mul(q)?;
    Ok(spectral_value(&pq)? == spectral_value(p)?.max(spectral_value(q)?))
}

/// `ρ(b) = σ(χ_b)`.
pub fn spectral_radius(b: &AlgebraElement) -> Result<LogNorm> {
    let field = b.ext().base();
    if !field.has_valuation() {
        return Err(Error::unsupported(format!("{field} carries no valuation")));
    }
    if !b.is_scalar() || !b.ext().has_scalar_structure() {
        return Err(Error::unsupported("spectral radius needs scalar coordinates and structure constants"));
    }
    spectral_value_of(field, &b.charpoly_coefficients())
}

/// A nilpotent element of `K' ⊗_K K'` with large coefficient norm.
#[derive(Clone, Debug)]
pub struct Witness {
    pub k: u64,
    pub tensor: Arc<FreeExtension>,
    /// `b_k = x^(−k)·(y − t̄)` with `t̄ = t ⊗ 1` and `y = 1 ⊗ t`.
    pub element: AlgebraElement,
    pub nilpotent: bool,
    pub nilpotency_order: Option<u32>,
    pub spectral_radius: LogNorm,
    pub lognorm_xk: LogNorm,
    pub threshold: LogNorm,
}

impl Witness {
    /// All certificates hold.
    pub fn holds(&self) -> bool {
        self.nilpotent && self.spectral_radius.is_neg_inf() && self.lognorm_xk > self.threshold
    }
}

/// Least `k ≥ 1` with `k > threshold`.
fn least_k_above(threshold: &LogNorm) -> u64 {
    match threshold.finite() {
        None => 1,
        Some(q) => {
            let fl = q.floor().to_integer();
            if fl < 0.into() {
                1
            } else {
                u64::try_from(fl + 1).expect("threshold fits in u64")
            }
        }
    }
}

/// For `K' = K[t]/(t^p − c)` over `K = F_p(x)` with `c` not a `p`-th power,
/// returns the least `k ≥ 1` with `lognorm(x^(−k)) > threshold` and the
/// nilpotent element `b_k = x^(−k)(y − t̄)` of `K' ⊗_K K'` with its
/// certificates.
pub fn non_quasicompact_witness(ext: &Arc<FreeExtension>, threshold: &LogNorm) -> Result<Witness> {
    let field = ext.base();
    let p = match field.kind() {
        FieldKind::FunctionField { p, .. } => *p,
        _ => return Err(Error::Shape(format!("base {field} is not a rational function field"))),
    };
    let (Some(m), Some(t)) = (ext.minimal_polynomial(), ext.generator()) else {
        return Err(Error::Shape("extension is not given by a minimal polynomial".into()));
    };
    let cs = m.coefficients_in(t);
    let n = cs.len() - 1;
    let separable = cs.iter().enumerate().skip(1).any(|(k, c)| !(k as u64).is_multiple_of(p) && !c.is_zero());
    if separable {
        return Err(Error::Shape(format!(
            "{m} is separable; restrictions of closed discs along separable extensions are quasi-compact, so no witness exists"
        )));
    }
    let constant = cs[0].constant_value();
    let c = match constant {
        Some(c) if n as u64 == p && cs[1..n].iter().all(Poly::is_zero) => field.neg(&c),
        _ => return Err(Error::Shape(format!("expected a minimal polynomial {t}^{p} - c, got {m}"))),
    };
    if is_pth_power(&c, p) {
        return Err(Error::Shape(format!("{} is a {p}-th power, so {m} is reducible", field.format_elem(&c))));
    }
    let k = least_k_above(threshold);
    let x = field.generator().expect("function field variable");
    let x_inv_k = field.pow(&field.inv(&x)?, k as u128);
    let tensor = tensor_product(ext, ext)?;
    let t_elem = ext.basis(1);
    let tbar = embed_left(&t_elem, ext, &tensor)?;
    let y = embed_right(ext, &t_elem, &tensor)?;
    let element = y.sub(&tbar).scale(&Poly::constant(field, x_inv_k.clone()));
    Ok(Witness {
        k,
        nilpotent: element.is_nilpotent(),
        nilpotency_order: element.nilpotency_order(),
        spectral_radius: spectral_radius(&element)?,
        lognorm_xk: field.lognorm(&x_inv_k)?,
        threshold: threshold.clone(),
        element,
        tensor,
    })
}

/// In `F_p(x)` a reduced fraction is a `p`-th power iff numerator and
/// denominator only involve powers of `x^p`.
fn is_pth_power(c: &Elem, p: u64) -> bool {
    match c {
        Elem::RatFn(f) => [f.numerator(), f.denominator()]
            .iter()
            .all(|d| d.iter().enumerate().all(|(i, &a)| a == 0 || (i as u64).is_multiple_of(p))),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q2() -> FieldSpec {
        FieldSpec::padic(2).unwrap()
    }

    #[test]
    fn spectral_value_examples() {
        let f = q2();
        let half = f.parse_elem("1/2").unwrap();
        let p = MonicPoly::new(&f, vec![f.zero(), f.neg(&half)]).unwrap();
        assert_eq!(spectral_value(&p).unwrap(), LogNorm::from_ratio(1, 2));
        let zn = MonicPoly::new(&f, vec![f.zero(); 3]).unwrap();
        assert!(spectral_value(&zn).unwrap().is_neg_inf());
    }

    #[test]
    fn product_example() {
        let f = q2();
        let p = MonicPoly::new(&f, vec![f.from_int(-2)]).unwrap();
        let q = MonicPoly::new(&f, vec![f.parse_elem("-1/2").unwrap()]).unwrap();
        let pq = p.mul(&q).unwrap();
        assert_eq!(pq.to_string(), "z^2 - 5/2*z + 1");
        assert_eq!(spectral_value(&pq).unwrap(), LogNorm::from_int(1));
        assert!(spectral_value_product_check(&p, &q).unwrap());
    }

    #[test]
    fn spectral_radius_of_sqrt2() {
        let f = q2();
        let ext = FreeExtension::from_minimal_polynomial(&f, &Poly::parse(&f, "t^2 - 2").unwrap(), "t").unwrap();
        assert_eq!(spectral_radius(&ext.basis(1)).unwrap(), LogNorm::from_ratio(-1, 2));
        assert_eq!(spectral_radius(&ext.one()).unwrap(), LogNorm::zero());
        assert!(spectral_radius(&ext.zero()).unwrap().is_neg_inf());
    }

    fn inseparable(p: u64) -> Arc<FreeExtension> {
        let f = FieldSpec::function_field(p, BigRational::new(1.into(), 2.into())).unwrap();
        let m = Poly::parse(&f, &format!("t^{p} - [x]")).unwrap();
        FreeExtension::from_minimal_polynomial(&f, &m, "t").unwrap()
    }

    #[test]
    fn witness_for_threshold_three() {
        let w = non_quasicompact_witness(&inseparable(2), &LogNorm::from_int(3)).unwrap();
        assert_eq!(w.k, 4);
        assert_eq!(w.lognorm_xk, LogNorm::from_int(4));
        assert_eq!(w.nilpotency_order, Some(2));
        assert!(w.holds());
        let w = non_quasicompact_witness(&inseparable(2), &LogNorm::NegInf).unwrap();
        assert_eq!(w.k, 1);
    }

    #[test]
    fn witness_in_characteristic_three() {
        let w = non_quasicompact_witness(&inseparable(3), &LogNorm::from_ratio(5, 2)).unwrap();
        assert_eq!(w.k, 3);
        assert_eq!(w.nilpotency_order, Some(3));
        assert!(w.holds());
    }

    #[test]
    fn witness_rejects_separable_and_split() {
        let f = FieldSpec::function_field(3, BigRational::new(1.into(), 2.into())).unwrap();
        let sep = FreeExtension::from_minimal_polynomial(&f, &Poly::parse(&f, "t^2 - [x]").unwrap(), "t").unwrap();
        let err = non_quasicompact_witness(&sep, &LogNorm::zero()).unwrap_err();
        assert!(err.to_string().contains("separable"));
        let split = FreeExtension::from_minimal_polynomial(&f, &Poly::parse(&f, "t^3 - [x^3]").unwrap(), "t").unwrap();
        assert!(non_quasicompact_witness(&split, &LogNorm::zero()).is_err());
    }
}
