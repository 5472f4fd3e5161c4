use std::borrow::Cow;
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::{Elem, FieldSpec};
use super::lognorm::LogNorm;
use crate::error::{Error, Result};

/// Exponent vector aligned with a polynomial's variable list.
pub type Monomial = Vec<u32>;

/// A sparse multivariate polynomial over an exact field.
///
/// The variable list is an ordered ambient context; it may contain
/// variables that do not occur. Binary operations merge variable lists by
/// name, so polynomials built in different contexts combine freely.
/// Equality is semantic: unused variables and list order are ignored.
#[derive(Clone, Debug)]
pub struct Poly {
    field: FieldSpec,
    vars: Vec<String>,
    terms: BTreeMap<Monomial, Elem>,
}

/// Graded lexicographic order, larger first.
fn grlex_desc(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    db.cmp(&da).then_with(|| b.cmp(a))
}

impl Poly {
    pub fn zero(field: &FieldSpec, vars: Vec<String>) -> Self {
        Poly { field: field.clone(), vars, terms: BTreeMap::new() }
    }

    pub fn constant(field: &FieldSpec, c: Elem) -> Self {
        let mut p = Poly::zero(field, Vec::new());
        if !field.is_zero(&c) {
            p.terms.insert(Vec::new(), c);
        }
        p
    }

    pub fn from_int(field: &FieldSpec, v: i64) -> Self {
        Poly::constant(field, field.from_int(v))
    }

    pub fn one(field: &FieldSpec) -> Self {
        Poly::from_int(field, 1)
    }

    pub fn var(field: &FieldSpec, name: &str) -> Self {
        let mut p = Poly::zero(field, vec![name.to_string()]);
        p.terms.insert(vec![1], field.one());
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing
    /// repeated monomials and dropping zeros.
    pub fn from_terms(
        field: &FieldSpec,
        vars: Vec<String>,
        terms: impl IntoIterator<Item = (Monomial, Elem)>,
    ) -> Result<Self> {
        let mut p = Poly::zero(field, vars);
        for (m, c) in terms {
            if m.len() != p.vars.len() {
                return Err(Error::invalid("exponent vector length differs from variable count"));
            }
            if !field.contains(&c) {
                return Err(Error::invalid(format!("coefficient {c:?} is not in {field}")));
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: Elem) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                if !self.field.is_zero(&c) {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let s = self.field.add(o.get(), &c);
                if self.field.is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Elem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value of a constant polynomial (including zero).
    pub fn constant_value(&self) -> Option<Elem> {
        match self.terms.len() {
            0 => Some(self.field.zero()),
            1 => {
                let (m, c) = self.terms.iter().next().expect("one term");
                m.iter().all(|&e| e == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    pub fn degree_in(&self, var: &str) -> u32 {
        match self.vars.iter().position(|v| v == var) {
            None => 0,
            Some(i) => self.terms.keys().map(|m| m[i]).max().unwrap_or(0),
        }
    }

    /// Variables with a nonzero exponent somewhere, in list order.
    pub fn used_vars(&self) -> Vec<String> {
        self.vars
            .iter()
            .enumerate()
            .filter(|(i, _)| self.terms.keys().any(|m| m[*i] > 0))
            .map(|(_, v)| v.clone())
            .collect()
    }

    /// Drops variables that do not occur.
    pub fn compact(&self) -> Poly {
        let used = self.used_vars();
        self.embed(&used)
    }

    /// Re-expresses the polynomial over `vars`, which must contain every
    /// variable that occurs.
    pub fn with_vars(&self, vars: &[String]) -> Result<Poly> {
        for v in self.used_vars() {
            if !vars.contains(&v) {
                return Err(Error::invalid(format!("variable {v} is not among {vars:?}")));
            }
        }
        Ok(self.embed(vars))
    }

    fn embed(&self, vars: &[String]) -> Poly {
        if self.vars == vars {
            return self.clone();
        }
        let pos: Vec<Option<usize>> = self.vars.iter().map(|v| vars.iter().position(|w| w == v)).collect();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0; vars.len()];
                for (i, &x) in m.iter().enumerate() {
                    if x > 0 {
                        e[pos[i].expect("occurring variable present")] = x;
                    }
                }
                (e, c.clone())
            })
            .collect();
        Poly { field: self.field.clone(), vars: vars.to_vec(), terms }
    }

    /// Renames variables; the map must not merge two distinct variables.
    pub fn rename(&self, f: impl Fn(&str) -> String) -> Poly {
        Poly { field: self.field.clone(), vars: self.vars.iter().map(|v| f(v)).collect(), terms: self.terms.clone() }
    }

    fn check_field(&self, other: &Poly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::IncompatibleField(self.field.describe(), other.field.describe()));
        }
        Ok(())
    }

    fn aligned<'a>(&'a self, other: &'a Poly) -> (Cow<'a, Poly>, Cow<'a, Poly>) {
        if self.vars == other.vars {
            return (Cow::Borrowed(self), Cow::Borrowed(other));
        }
        let mut vars = self.vars.clone();
        for v in &other.vars {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
        let a = if vars == self.vars { Cow::Borrowed(self) } else { Cow::Owned(self.embed(&vars)) };
        (a, Cow::Owned(other.embed(&vars)))
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.check_field(other)?;
        let (a, b) = self.aligned(other);
        let mut out = a.into_owned();
        for (m, c) in b.terms.iter() {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_field(other)?;
        let (a, b) = self.aligned(other);
        let mut out = Poly::zero(&self.field, a.vars.clone());
        for (ma, ca) in a.terms.iter() {
            for (mb, cb) in b.terms.iter() {
                let m: Monomial = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                out.add_term(m, self.field.mul(ca, cb));
            }
        }
        Ok(out)
    }

    fn neg_ref(&self) -> Poly {
        Poly {
            field: self.field.clone(),
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), self.field.neg(c))).collect(),
        }
    }

    pub fn scale(&self, c: &Elem) -> Poly {
        if self.field.is_zero(c) {
            return Poly::zero(&self.field, self.vars.clone());
        }
        Poly {
            field: self.field.clone(),
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), self.field.mul(x, c))).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.field).embed(&self.vars);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Simultaneous substitution of variables by polynomials. Unbound
    /// variables are left in place.
    pub fn substitute(&self, bindings: &[(String, Poly)]) -> Result<Poly> {
        for (_, b) in bindings {
            self.check_field(b)?;
        }
        let image: Vec<Poly> = self
            .vars
            .iter()
            .map(|v| match bindings.iter().find(|(name, _)| name == v) {
                Some((_, b)) => b.clone(),
                None => Poly::var(&self.field, v),
            })
            .collect();
        let mut cache: HashMap<(usize, u32), Poly> = HashMap::new();
        let mut out = Poly::zero(&self.field, Vec::new());
        for (m, c) in self.terms.iter() {
            let mut term = Poly::constant(&self.field, c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = cache.entry((i, e)).or_insert_with(|| image[i].pow(e)).clone();
                term = &term * &pw;
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Evaluates at a point given in the order of [`Poly::vars`].
    pub fn eval(&self, point: &[Elem]) -> Elem {
        assert_eq!(point.len(), self.vars.len(), "point length differs from variable count");
        let f = &self.field;
        let mut acc = f.zero();
        for (m, c) in self.terms.iter() {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m) {
                if e > 0 {
                    t = f.mul(&t, &f.pow(x, e as u128));
                }
            }
            acc = f.add(&acc, &t);
        }
        acc
    }

    /// Evaluates at named values; every occurring variable must be bound.
    pub fn eval_named(&self, values: &[(String, Elem)]) -> Result<Elem> {
        let point = self
            .vars
            .iter()
            .enumerate()
            .map(|(i, v)| match values.iter().find(|(n, _)| n == v) {
                Some((_, x)) => Ok(x.clone()),
                None if self.terms.keys().all(|m| m[i] == 0) => Ok(self.field.zero()),
                None => Err(Error::invalid(format!("no value for variable {v}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.eval(&point))
    }

    /// Applies a coefficient map into another field.
    pub fn map_coefficients(&self, target: &FieldSpec, f: impl Fn(&Elem) -> Elem) -> Poly {
        let mut out = Poly::zero(target, self.vars.clone());
        for (m, c) in self.terms.iter() {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Coefficients with respect to one variable: entry `k` is the
    /// coefficient of `var^k`, a polynomial in the remaining variables.
    pub fn coefficients_in(&self, var: &str) -> Vec<Poly> {
        let rest: Vec<String> = self.vars.iter().filter(|v| *v != var).cloned().collect();
        let Some(idx) = self.vars.iter().position(|v| v == var) else {
            return vec![self.clone()];
        };
        let deg = self.degree_in(var) as usize;
        let mut out = vec![Poly::zero(&self.field, rest.clone()); deg + 1];
        for (m, c) in self.terms.iter() {
            let mut e = m.clone();
            let k = e.remove(idx) as usize;
            out[k].add_term(e, c.clone());
        }
        out
    }

    /// Gauss norm on the polydisc with the given log-radii (one per
    /// variable): the maximum over terms of `lognorm(c) + Σ e_i·radius_i`.
    /// The zero polynomial has norm `-inf`.
    pub fn gauss_norm(&self, radii: &[LogNorm]) -> Result<LogNorm> {
        if radii.len() != self.vars.len() {
            return Err(Error::invalid(format!("expected {} radii, got {}", self.vars.len(), radii.len())));
        }
        if !self.field.has_valuation() {
            return Err(Error::unsupported(format!("{} carries no valuation", self.field)));
        }
        let mut best = LogNorm::NegInf;
        for (m, c) in self.terms.iter() {
            let mut v = self.field.lognorm(c)?;
            for (&e, r) in m.iter().zip(radii) {
                v = v + r.mul_int(e as u64);
            }
            best = best.max(v);
        }
        Ok(best)
    }

    fn named_terms(&self) -> BTreeMap<Vec<(&str, u32)>, &Elem> {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut key: Vec<(&str, u32)> =
                    self.vars.iter().zip(m).filter(|(_, &e)| e > 0).map(|(v, &e)| (v.as_str(), e)).collect();
                key.sort();
                (key, c)
            })
            .collect()
    }

    /// Canonical text independent of the ambient variable list: unused
    /// variables dropped, the rest ordered by name.
    pub fn canonical_key(&self) -> String {
        let mut used = self.used_vars();
        used.sort();
        self.embed(&used).to_string()
    }

    fn sorted_terms(&self) -> Vec<(&Monomial, &Elem)> {
        let mut t: Vec<_> = self.terms.iter().collect();
        t.sort_by(|a, b| grlex_desc(a.0, b.0));
        t
    }
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.named_terms() == other.named_terms()
    }
}

impl Eq for Poly {}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let (neg, abs) = self.field.sign_split(c);
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mono: Vec<String> = self
                .vars
                .iter()
                .zip(m)
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
                .collect();
            if mono.is_empty() {
                f.write_str(&self.field.format_elem(&abs))?;
            } else {
                if !self.field.is_one(&abs) {
                    write!(f, "{}*", self.field.format_elem(&abs))?;
                }
                f.write_str(&mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    /// Panics on mismatched fields; use [`Poly::checked_add`] otherwise.
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).expect("polynomials over the same field")
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_sub(rhs).expect("polynomials over the same field")
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).expect("polynomials over the same field")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::rational()
    }

    #[test]
    fn difference_of_squares() {
        let f = q();
        let u = Poly::var(&f, "u");
        let one = Poly::one(&f);
        let prod = &(&u + &one) * &(&u - &one);
        assert_eq!(prod.to_string(), "u^2 - 1");
    }

    #[test]
    fn zero_absorbs() {
        let f = q();
        let p = Poly::parse(&f, "3*u^2*v - 1/2*v + 7").unwrap();
        let z = Poly::zero(&f, vec![]);
        assert!((&p * &z).is_zero());
    }

    #[test]
    fn frobenius_in_characteristic_two() {
        let f = FieldSpec::prime(2).unwrap();
        let s = Poly::parse(&f, "u0 + u1").unwrap();
        assert_eq!(s.pow(2), Poly::parse(&f, "u0^2 + u1^2").unwrap());
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let a = Poly::var(&q(), "u");
        let b = Poly::var(&FieldSpec::prime(5).unwrap(), "u");
        assert!(matches!(a.checked_add(&b), Err(Error::IncompatibleField(..))));
        assert!(matches!(a.checked_mul(&b), Err(Error::IncompatibleField(..))));
    }

    #[test]
    fn variable_lists_merge_by_name() {
        let f = q();
        let a = Poly::parse(&f, "u + v").unwrap();
        let b = Poly::parse(&f, "v + w").unwrap();
        let s = &a + &b;
        assert_eq!(s.vars(), ["u", "v", "w"]);
        assert_eq!(s, Poly::parse(&f, "u + 2*v + w").unwrap());
    }

    #[test]
    fn substitution_cases() {
        let f = q();
        let p = Poly::parse(&f, "u^2 + u + 1").unwrap();
        let zero = Poly::zero(&f, vec![]);
        assert_eq!(p.substitute(&[("u".into(), zero)]).unwrap(), Poly::one(&f));
        let ident = Poly::var(&f, "u");
        assert_eq!(p.substitute(&[("u".into(), ident)]).unwrap(), p);
        let shifted = p.substitute(&[("u".into(), Poly::parse(&f, "w - 1").unwrap())]).unwrap();
        assert_eq!(shifted, Poly::parse(&f, "w^2 - w + 1").unwrap());
    }

    #[test]
    fn coefficients_in_one_variable() {
        let f = q();
        let p = Poly::parse(&f, "z^2 - 2*x*z + x^2 - 3*y^2").unwrap();
        let c = p.coefficients_in("z");
        assert_eq!(c.len(), 3);
        assert_eq!(c[2], Poly::one(&f));
        assert_eq!(c[1], Poly::parse(&f, "-2*x").unwrap());
        assert_eq!(c[0], Poly::parse(&f, "x^2 - 3*y^2").unwrap());
    }

    #[test]
    fn display_is_graded_lex() {
        let f = q();
        let p = Poly::parse_with_vars(&f, "-2 - u1^2 + u0^2", &["u0".into(), "u1".into()]).unwrap();
        assert_eq!(p.to_string(), "u0^2 - u1^2 - 2");
        let g = FieldSpec::prime(3).unwrap();
        let p = Poly::parse(&g, "u^2 - 2").unwrap();
        assert_eq!(p.to_string(), "u^2 + 1");
    }

    #[test]
    fn gauss_norm_basic() {
        let f = FieldSpec::function_field(2, num_rational::BigRational::new(1.into(), 2.into())).unwrap();
        let c = Poly::constant(&f, f.generator().unwrap());
        assert_eq!(c.gauss_norm(&[]).unwrap(), LogNorm::from_int(-1));
        let x = Poly::var(&f, "X");
        let r = LogNorm::from_ratio(-3, 2);
        assert_eq!(x.gauss_norm(std::slice::from_ref(&r)).unwrap(), r);
        assert_eq!(Poly::zero(&f, vec!["X".into()]).gauss_norm(&[r]).unwrap(), LogNorm::NegInf);
        assert!(Poly::var(&q(), "X").gauss_norm(&[LogNorm::zero()]).is_err());
    }
}
