use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::dense::{self, Dense};
use super::lognorm::LogNorm;
use crate::error::{Error, Result};

/// Largest prime accepted for the modular kinds, so products fit in `u64`
/// intermediates comfortably.
pub const MAX_PRIME: u64 = 1 << 31;

/// Largest extension degree for presented finite fields.
pub const MAX_FINITE_DEGREE: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    /// `F_p`.
    Prime { p: u64 },
    /// `F_p[a]/(modulus)` with `modulus` monic irreducible of degree `m`,
    /// stored lowest coefficient first.
    Finite { p: u64, modulus: Vec<u64>, symbol: String },
    /// `Q` without a valuation.
    Rational,
    /// `Q` with the `p`-adic valuation. One log-unit is `|1/p|`.
    PAdic { p: u64 },
    /// `F_p(x)` with `|x| = r`, normalised at `x = 0`:
    /// `|f/g| = r^(ord f - ord g)` where `ord` is the `x`-adic order. One
    /// log-unit is `1/r`.
    FunctionField { p: u64, r: BigRational, symbol: String },
}

/// An exact coefficient field. Cheap to clone.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec(Arc<FieldKind>);

/// A rational function `num/den` over `F_p`, reduced with `den` monic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: Dense,
    den: Dense,
}

impl RatFn {
    pub fn numerator(&self) -> &[u64] {
        &self.num
    }

    pub fn denominator(&self) -> &[u64] {
        &self.den
    }
}

/// A field element. The variant always matches the owning [`FieldSpec`]:
/// `Mod` for `Prime`, `Ext` for `Finite`, `Rat` for `Rational`/`PAdic` and
/// `RatFn` for `FunctionField`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Elem {
    Mod(u64),
    /// Coefficients in the power basis `1, a, …, a^(m-1)`, always length `m`.
    Ext(Vec<u64>),
    Rat(BigRational),
    RatFn(RatFn),
}

fn check_prime(p: u64) -> Result<()> {
    if !dense::is_prime(p) || p >= MAX_PRIME {
        return Err(Error::invalid(format!("{p} is not a supported prime")));
    }
    Ok(())
}

fn p_valuation(n: &BigInt, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    while !n.is_zero() && (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    v
}

impl FieldSpec {
    fn new(kind: FieldKind) -> Self {
        FieldSpec(Arc::new(kind))
    }

    pub fn prime(p: u64) -> Result<Self> {
        check_prime(p)?;
        Ok(Self::new(FieldKind::Prime { p }))
    }

    /// `GF(p^m)` presented by a monic irreducible `modulus` (lowest
    /// coefficient first); irreducibility is checked by brute force.
    pub fn finite(p: u64, modulus: Vec<u64>) -> Result<Self> {
        Self::finite_with_symbol(p, modulus, "a")
    }

    pub fn finite_with_symbol(p: u64, modulus: Vec<u64>, symbol: &str) -> Result<Self> {
        check_prime(p)?;
        let modulus = dense::trim(modulus.into_iter().map(|c| c % p).collect());
        let m = dense::degree(&modulus).unwrap_or(0);
        if !(2..=MAX_FINITE_DEGREE).contains(&m) {
            return Err(Error::invalid(format!(
                "finite field modulus must have degree 2..={MAX_FINITE_DEGREE}, got {m}"
            )));
        }
        if modulus[m] != 1 {
            return Err(Error::invalid("finite field modulus must be monic"));
        }
        if !dense::is_irreducible(&modulus, p) {
            return Err(Error::invalid(format!(
                "modulus {} is reducible over GF({p})",
                dense_to_string(&modulus, symbol)
            )));
        }
        Ok(Self::new(FieldKind::Finite { p, modulus, symbol: symbol.to_string() }))
    }

    /// `GF(q)` for a prime power `q`, using the lexicographically first monic
    /// irreducible polynomial as modulus when `q` is not prime.
    pub fn gf(q: u64) -> Result<Self> {
        let p = (2..=q)
            .find(|d| q.is_multiple_of(*d))
            .ok_or_else(|| Error::invalid(format!("{q} is not a prime power")))?;
        let mut m = 0usize;
        let mut r = q;
        while r.is_multiple_of(p) {
            r /= p;
            m += 1;
        }
        if r != 1 {
            return Err(Error::invalid(format!("{q} is not a prime power")));
        }
        if m == 1 {
            Self::prime(p)
        } else {
            if m > MAX_FINITE_DEGREE {
                return Err(Error::invalid(format!("GF({q}) exceeds degree {MAX_FINITE_DEGREE}")));
            }
            Self::finite(p, dense::first_irreducible(m, p))
        }
    }

    pub fn rational() -> Self {
        Self::new(FieldKind::Rational)
    }

    pub fn padic(p: u64) -> Result<Self> {
        check_prime(p)?;
        Ok(Self::new(FieldKind::PAdic { p }))
    }

    /// `F_p(x)` with the `x`-adic absolute value, `|x| = r`.
    pub fn function_field(p: u64, r: BigRational) -> Result<Self> {
        check_prime(p)?;
        if !r.is_positive() || r >= BigRational::one() {
            return Err(Error::invalid(format!("base constant {r} must lie in (0, 1)")));
        }
        Ok(Self::new(FieldKind::FunctionField { p, r, symbol: "x".into() }))
    }

    pub fn kind(&self) -> &FieldKind {
        &self.0
    }

    pub fn characteristic(&self) -> u64 {
        match self.kind() {
            FieldKind::Prime { p } | FieldKind::Finite { p, .. } | FieldKind::FunctionField { p, .. } => *p,
            FieldKind::Rational | FieldKind::PAdic { .. } => 0,
        }
    }

    /// Number of elements for finite kinds.
    pub fn order(&self) -> Option<u64> {
        match self.kind() {
            FieldKind::Prime { p } => Some(*p),
            FieldKind::Finite { p, modulus, .. } => p.checked_pow((modulus.len() - 1) as u32),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.kind(), FieldKind::Prime { .. } | FieldKind::Finite { .. })
    }

    pub fn has_valuation(&self) -> bool {
        matches!(self.kind(), FieldKind::PAdic { .. } | FieldKind::FunctionField { .. })
    }

    /// Name of the adjoined symbol for `GF(p^m)` and `F_p(x)`.
    pub fn symbol(&self) -> Option<&str> {
        match self.kind() {
            FieldKind::Finite { symbol, .. } | FieldKind::FunctionField { symbol, .. } => Some(symbol),
            _ => None,
        }
    }

    /// The adjoined element `a` of `GF(p^m)` or `x` of `F_p(x)`.
    pub fn generator(&self) -> Option<Elem> {
        match self.kind() {
            FieldKind::Finite { modulus, .. } => {
                let mut v = vec![0; modulus.len() - 1];
                v[1] = 1;
                Some(Elem::Ext(v))
            }
            FieldKind::FunctionField { .. } => Some(Elem::RatFn(RatFn { num: vec![0, 1], den: vec![1] })),
            _ => None,
        }
    }

    pub fn zero(&self) -> Elem {
        self.from_int(0)
    }

    pub fn one(&self) -> Elem {
        self.from_int(1)
    }

    pub fn from_int(&self, v: i64) -> Elem {
        match self.kind() {
            FieldKind::Prime { p } => Elem::Mod(v.rem_euclid(*p as i64) as u64),
            FieldKind::Finite { p, modulus, .. } => {
                let mut c = vec![0; modulus.len() - 1];
                c[0] = v.rem_euclid(*p as i64) as u64;
                Elem::Ext(c)
            }
            FieldKind::Rational | FieldKind::PAdic { .. } => Elem::Rat(BigRational::from_integer(v.into())),
            FieldKind::FunctionField { p, .. } => {
                Elem::RatFn(RatFn { num: dense::trim(vec![v.rem_euclid(*p as i64) as u64]), den: vec![1] })
            }
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Elem {
        match self.kind() {
            FieldKind::Rational | FieldKind::PAdic { .. } => Elem::Rat(BigRational::from_integer(v.clone())),
            _ => {
                let p = BigInt::from(self.characteristic());
                let r = v.mod_floor(&p).to_i64().expect("reduced below p");
                self.from_int(r)
            }
        }
    }

    /// Image of a rational number; fails when the denominator vanishes in
    /// positive characteristic.
    pub fn from_rational(&self, q: &BigRational) -> Result<Elem> {
        let n = self.from_bigint(q.numer());
        let d = self.from_bigint(q.denom());
        self.div(&n, &d)
    }

    /// Builds `num/den` in `F_p(x)` from dense coefficient lists.
    pub fn ratfn(&self, num: &[u64], den: &[u64]) -> Result<Elem> {
        let FieldKind::FunctionField { p, .. } = self.kind() else {
            return Err(Error::unsupported("rational functions need a function field"));
        };
        let num: Dense = dense::trim(num.iter().map(|c| c % p).collect());
        let den: Dense = dense::trim(den.iter().map(|c| c % p).collect());
        if den.is_empty() {
            return Err(Error::DivisionByZero);
        }
        Ok(Elem::RatFn(normalize_ratfn(num, den, *p)))
    }

    fn assert_member(&self, a: &Elem) {
        let ok = matches!(
            (self.kind(), a),
            (FieldKind::Prime { .. }, Elem::Mod(_))
                | (FieldKind::Finite { .. }, Elem::Ext(_))
                | (FieldKind::Rational, Elem::Rat(_))
                | (FieldKind::PAdic { .. }, Elem::Rat(_))
                | (FieldKind::FunctionField { .. }, Elem::RatFn(_))
        );
        assert!(ok, "element {a:?} does not belong to {self}");
    }

    pub fn contains(&self, a: &Elem) -> bool {
        match (self.kind(), a) {
            (FieldKind::Prime { p }, Elem::Mod(v)) => v < p,
            (FieldKind::Finite { p, modulus, .. }, Elem::Ext(c)) => {
                c.len() + 1 == modulus.len() && c.iter().all(|x| x < p)
            }
            (FieldKind::Rational | FieldKind::PAdic { .. }, Elem::Rat(_)) => true,
            (FieldKind::FunctionField { .. }, Elem::RatFn(_)) => true,
            _ => false,
        }
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        match a {
            Elem::Mod(v) => *v == 0,
            Elem::Ext(c) => c.iter().all(|&x| x == 0),
            Elem::Rat(q) => q.is_zero(),
            Elem::RatFn(f) => f.num.is_empty(),
        }
    }

    pub fn is_one(&self, a: &Elem) -> bool {
        *a == self.one()
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        self.assert_member(a);
        self.assert_member(b);
        match (self.kind(), a, b) {
            (FieldKind::Prime { p }, Elem::Mod(x), Elem::Mod(y)) => Elem::Mod(dense::add_mod(*x, *y, *p)),
            (FieldKind::Finite { p, .. }, Elem::Ext(x), Elem::Ext(y)) => {
                Elem::Ext(x.iter().zip(y).map(|(u, v)| dense::add_mod(*u, *v, *p)).collect())
            }
            (_, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x + y),
            (FieldKind::FunctionField { p, .. }, Elem::RatFn(x), Elem::RatFn(y)) => {
                let num = dense::add(&dense::mul(&x.num, &y.den, *p), &dense::mul(&y.num, &x.den, *p), *p);
                Elem::RatFn(normalize_ratfn(num, dense::mul(&x.den, &y.den, *p), *p))
            }
            _ => unreachable!(),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        self.assert_member(a);
        match (self.kind(), a) {
            (FieldKind::Prime { p }, Elem::Mod(x)) => Elem::Mod(dense::neg_mod(*x, *p)),
            (FieldKind::Finite { p, .. }, Elem::Ext(x)) => {
                Elem::Ext(x.iter().map(|u| dense::neg_mod(*u, *p)).collect())
            }
            (_, Elem::Rat(x)) => Elem::Rat(-x),
            (FieldKind::FunctionField { p, .. }, Elem::RatFn(x)) => {
                Elem::RatFn(RatFn { num: x.num.iter().map(|u| dense::neg_mod(*u, *p)).collect(), den: x.den.clone() })
            }
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        self.assert_member(a);
        self.assert_member(b);
        match (self.kind(), a, b) {
            (FieldKind::Prime { p }, Elem::Mod(x), Elem::Mod(y)) => Elem::Mod(dense::mul_mod(*x, *y, *p)),
            (FieldKind::Finite { p, modulus, .. }, Elem::Ext(x), Elem::Ext(y)) => {
                let prod = dense::rem(&dense::mul(x, y, *p), modulus, *p);
                Elem::Ext(pad(prod, modulus.len() - 1))
            }
            (_, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x * y),
            (FieldKind::FunctionField { p, .. }, Elem::RatFn(x), Elem::RatFn(y)) => {
                let num = dense::mul(&x.num, &y.num, *p);
                Elem::RatFn(normalize_ratfn(num, dense::mul(&x.den, &y.den, *p), *p))
            }
            _ => unreachable!(),
        }
    }

    pub fn pow(&self, a: &Elem, mut e: u128) -> Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn inv(&self, a: &Elem) -> Result<Elem> {
        self.assert_member(a);
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        Ok(match (self.kind(), a) {
            (FieldKind::Prime { p }, Elem::Mod(x)) => Elem::Mod(dense::inv_mod(*x, *p).expect("nonzero")),
            (FieldKind::Finite { p, modulus, .. }, Elem::Ext(_)) => {
                let q = (*p as u128).pow((modulus.len() - 1) as u32);
                self.pow(a, q - 2)
            }
            (_, Elem::Rat(x)) => Elem::Rat(x.recip()),
            (FieldKind::FunctionField { p, .. }, Elem::RatFn(x)) => {
                Elem::RatFn(normalize_ratfn(x.den.clone(), x.num.clone(), *p))
            }
            _ => unreachable!(),
        })
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Log-norm of a scalar: `-v_p(a)` for the p-adic kind and
    /// `ord(den) - ord(num)` (`x`-adic orders) for the function-field kind;
    /// `-inf` for zero.
    pub fn lognorm(&self, a: &Elem) -> Result<LogNorm> {
        self.assert_member(a);
        match (self.kind(), a) {
            (FieldKind::PAdic { p }, Elem::Rat(q)) => {
                if q.is_zero() {
                    return Ok(LogNorm::NegInf);
                }
                let v = p_valuation(q.numer(), *p) - p_valuation(q.denom(), *p);
                Ok(LogNorm::from_int(-v))
            }
            (FieldKind::FunctionField { .. }, Elem::RatFn(f)) => {
                if f.num.is_empty() {
                    return Ok(LogNorm::NegInf);
                }
                let ord = |d: &[u64]| d.iter().position(|&c| c != 0).expect("nonzero") as i64;
                Ok(LogNorm::from_int(ord(&f.den) - ord(&f.num)))
            }
            _ => Err(Error::unsupported(format!("{self} carries no valuation"))),
        }
    }

    /// Canonical index of an element of a finite field: the base-`p` digits
    /// are the power-basis coordinates.
    pub fn index_of(&self, a: &Elem) -> u64 {
        match (self.kind(), a) {
            (FieldKind::Prime { .. }, Elem::Mod(v)) => *v,
            (FieldKind::Finite { p, .. }, Elem::Ext(c)) => c.iter().rev().fold(0, |acc, d| acc * p + d),
            _ => panic!("index_of needs a finite field element"),
        }
    }

    pub fn element_at(&self, mut idx: u64) -> Elem {
        match self.kind() {
            FieldKind::Prime { p } => Elem::Mod(idx % p),
            FieldKind::Finite { p, modulus, .. } => {
                let mut c = Vec::with_capacity(modulus.len() - 1);
                for _ in 0..modulus.len() - 1 {
                    c.push(idx % p);
                    idx /= p;
                }
                Elem::Ext(c)
            }
            _ => panic!("element_at needs a finite field"),
        }
    }

    /// All elements in canonical index order.
    pub fn elements(&self) -> Result<Vec<Elem>> {
        let q = self.order().ok_or_else(|| Error::unsupported(format!("{self} is not finite")))?;
        Ok((0..q).map(|i| self.element_at(i)).collect())
    }

    /// The value as an integer or fraction when it lies in the prime field
    /// (or `Q`).
    fn scalar_literal(&self, a: &Elem) -> Option<String> {
        match a {
            Elem::Mod(v) => Some(v.to_string()),
            Elem::Rat(q) => Some(q.to_string()),
            Elem::Ext(c) => c[1..].iter().all(|&x| x == 0).then(|| c[0].to_string()),
            Elem::RatFn(f) => {
                (f.den == [1] && f.num.len() <= 1).then(|| f.num.first().copied().unwrap_or(0).to_string())
            }
        }
    }

    /// Canonical text: plain integers and fractions for prime-field values,
    /// otherwise a bracketed expression in the field's symbol, e.g. `[a + 1]`
    /// or `[(x + 1)/x^2]`.
    pub fn format_elem(&self, a: &Elem) -> String {
        if let Some(s) = self.scalar_literal(a) {
            return s;
        }
        let sym = self.symbol().unwrap_or("?");
        match a {
            Elem::Ext(c) => format!("[{}]", dense_to_string(&dense::trim(c.clone()), sym)),
            Elem::RatFn(f) if f.den == [1] => format!("[{}]", dense_to_string(&f.num, sym)),
            Elem::RatFn(f) => {
                let wrap = |d: &Dense| {
                    let s = dense_to_string(d, sym);
                    if d.iter().filter(|&&c| c != 0).count() > 1 {
                        format!("({s})")
                    } else {
                        s
                    }
                };
                format!("[{}/{}]", wrap(&f.num), wrap(&f.den))
            }
            _ => unreachable!(),
        }
    }

    /// Splits off a sign for display; only the rational kinds have one.
    pub(crate) fn sign_split(&self, a: &Elem) -> (bool, Elem) {
        match a {
            Elem::Rat(q) if q.is_negative() => (true, Elem::Rat(-q)),
            _ => (false, a.clone()),
        }
    }

    /// Short description such as `GF(3)`, `GF(3^2)`, `Q_2`, `F_2(x)`.
    pub fn describe(&self) -> String {
        match self.kind() {
            FieldKind::Prime { p } => format!("GF({p})"),
            FieldKind::Finite { p, modulus, symbol } => {
                format!("GF({p}^{})[{}]", modulus.len() - 1, dense_to_string(modulus, symbol))
            }
            FieldKind::Rational => "Q".into(),
            FieldKind::PAdic { p } => format!("Q_{p}"),
            FieldKind::FunctionField { p, r, symbol } => format!("F_{p}({symbol}), r = {r}"),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

fn pad(mut v: Dense, m: usize) -> Vec<u64> {
    v.resize(m, 0);
    v
}

fn normalize_ratfn(num: Dense, den: Dense, p: u64) -> RatFn {
    if num.is_empty() {
        return RatFn { num, den: vec![1] };
    }
    let g = dense::gcd(&num, &den, p);
    let (num, _) = dense::divrem(&num, &g, p);
    let (den, _) = dense::divrem(&den, &g, p);
    let lc_inv = dense::inv_mod(*den.last().expect("nonzero"), p).expect("unit");
    RatFn { num: dense::scale(&num, lc_inv, p), den: dense::scale(&den, lc_inv, p) }
}

/// Prints a dense polynomial over `F_p` highest degree first.
pub(crate) fn dense_to_string(c: &[u64], sym: &str) -> String {
    let mut parts = Vec::new();
    for (k, &v) in c.iter().enumerate().rev() {
        if v == 0 {
            continue;
        }
        let s = match (k, v) {
            (0, v) => v.to_string(),
            (1, 1) => sym.to_string(),
            (1, v) => format!("{v}*{sym}"),
            (k, 1) => format!("{sym}^{k}"),
            (k, v) => format!("{v}*{sym}^{k}"),
        };
        parts.push(s);
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}
