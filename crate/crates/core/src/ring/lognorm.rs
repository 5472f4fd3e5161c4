use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// A norm value on an additive log scale: `Finite(q)` stands for `c^q` for a
/// fixed base `c > 1`, and `NegInf` stands for the norm value `0`.
///
/// Larger values mean larger norms. The derived order puts `NegInf` below
/// every finite value.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LogNorm {
    NegInf,
    Finite(BigRational),
}

impl LogNorm {
    pub fn zero() -> Self {
        LogNorm::Finite(BigRational::zero())
    }

    pub fn from_int(v: i64) -> Self {
        LogNorm::Finite(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        LogNorm::Finite(BigRational::new(num.into(), den.into()))
    }

    pub fn is_neg_inf(&self) -> bool {
        matches!(self, LogNorm::NegInf)
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            LogNorm::NegInf => None,
            LogNorm::Finite(q) => Some(q),
        }
    }

    /// The `i`-th root on the multiplicative scale.
    pub fn div_int(&self, i: u64) -> Self {
        assert!(i > 0, "root of order zero");
        match self {
            LogNorm::NegInf => LogNorm::NegInf,
            LogNorm::Finite(q) => LogNorm::Finite(q / BigRational::from_integer(i.into())),
        }
    }

    /// The `i`-th power on the multiplicative scale; `x^0 = 1` even for `x = 0`.
    pub fn mul_int(&self, i: u64) -> Self {
        if i == 0 {
            return LogNorm::zero();
        }
        match self {
            LogNorm::NegInf => LogNorm::NegInf,
            LogNorm::Finite(q) => LogNorm::Finite(q * BigRational::from_integer(i.into())),
        }
    }

    pub fn neg(&self) -> Result<Self> {
        match self {
            LogNorm::NegInf => Err(Error::DivisionByZero),
            LogNorm::Finite(q) => Ok(LogNorm::Finite(-q)),
        }
    }

    /// `self - other`, defined when `other` is finite.
    pub fn minus(&self, other: &LogNorm) -> Result<Self> {
        Ok(self.clone() + other.neg()?)
    }
}

impl Add for LogNorm {
    type Output = LogNorm;
    fn add(self, rhs: LogNorm) -> LogNorm {
        match (self, rhs) {
            (LogNorm::Finite(a), LogNorm::Finite(b)) => LogNorm::Finite(a + b),
            _ => LogNorm::NegInf,
        }
    }
}

impl<'a> Add<&'a LogNorm> for &'a LogNorm {
    type Output = LogNorm;
    fn add(self, rhs: &LogNorm) -> LogNorm {
        self.clone() + rhs.clone()
    }
}

impl fmt::Display for LogNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogNorm::NegInf => write!(f, "-inf"),
            LogNorm::Finite(q) => write!(f, "{q}"),
        }
    }
}

impl FromStr for LogNorm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "-inf" || t == "-∞" {
            return Ok(LogNorm::NegInf);
        }
        let bad = || Error::invalid(format!("not a log-norm value: {s:?}"));
        let q = match t.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                BigRational::new(n, d)
            }
            None => BigRational::from_integer(t.parse().map_err(|_| bad())?),
        };
        Ok(LogNorm::Finite(q))
    }
}

/// True when the log-norm is at most zero, i.e. the norm is at most one.
pub fn is_integral_norm(v: &LogNorm) -> bool {
    match v {
        LogNorm::NegInf => true,
        LogNorm::Finite(q) => !q.is_positive(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neg_inf_is_bottom_and_absorbing() {
        assert!(LogNorm::NegInf < LogNorm::from_int(-1000));
        assert_eq!(LogNorm::NegInf + LogNorm::from_int(5), LogNorm::NegInf);
        assert_eq!(LogNorm::NegInf.div_int(3), LogNorm::NegInf);
        assert_eq!(LogNorm::NegInf.mul_int(0), LogNorm::zero());
    }

    #[test]
    fn roots_divide() {
        assert_eq!(LogNorm::from_int(1).div_int(2), LogNorm::from_ratio(1, 2));
        assert_eq!(LogNorm::from_ratio(3, 2).mul_int(2), LogNorm::from_int(3));
    }

    #[test]
    fn parse_round_trip() {
        for s in ["-inf", "0", "-1/2", "7"] {
            let v: LogNorm = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
        }
        assert!("1/0".parse::<LogNorm>().is_err());
    }
}
