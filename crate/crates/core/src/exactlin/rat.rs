use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

/// An exact rational number, always stored in reduced form with a positive
/// denominator. Serialized as the string `"a/b"` (or `"a"` for integers).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(BigRational);

impl Rat {
    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Rat(BigRational::new(num, den))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn inv(&self) -> Rat {
        assert!(!self.is_zero(), "inverse of zero");
        Rat(self.0.recip())
    }

    pub fn pow(&self, e: i32) -> Rat {
        if e == 0 {
            return Rat::one();
        }
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut acc = Rat::one();
        for _ in 0..e.unsigned_abs() {
            acc *= base.clone();
        }
        acc
    }

    /// Exact p-adic valuation; `None` for the zero element.
    pub fn valuation(&self, p: u64) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let p = BigInt::from(p);
        Some(int_valuation(self.numer(), &p) - int_valuation(self.denom(), &p))
    }

    /// Integer power of p times this, i.e. self * p^e.
    pub fn shift_p(&self, p: u64, e: i32) -> Rat {
        self.clone() * Rat::from_int(p as i64).pow(e)
    }
}

fn int_valuation(n: &BigInt, p: &BigInt) -> i64 {
    assert!(!n.is_zero());
    let mut v = 0i64;
    let mut m = n.abs();
    loop {
        let (q, r) = num_integer::Integer::div_rem(&m, p);
        if r.is_zero() {
            v += 1;
            m = q;
        } else {
            return v;
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, thiserror::Error)]
#[error("malformed rational `{0}`: expected `a` or `a/b` with b > 0")]
pub struct ParseRatError(String);

impl FromStr for Rat {
    type Err = ParseRatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseRatError(s.to_string());
        let (num_s, den_s) = match s.split_once('/') {
            Some((a, b)) => (a, b),
            None => (s, "1"),
        };
        let num = BigInt::from_str(num_s.trim()).map_err(|_| bad())?;
        let den = BigInt::from_str(den_s.trim()).map_err(|_| bad())?;
        if den.sign() != Sign::Plus {
            return Err(bad());
        }
        Ok(Rat(BigRational::new(num, den)))
    }
}

impl serde::Serialize for Rat {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Rat {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(self.0 / rhs.0)
    }
}

impl<'a> Div<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn div(self, rhs: &'a Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(&self.0 / &rhs.0)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl AddAssign for Rat {
    fn add_assign(&mut self, rhs: Rat) {
        self.0 += rhs.0;
    }
}

impl SubAssign for Rat {
    fn sub_assign(&mut self, rhs: Rat) {
        self.0 -= rhs.0;
    }
}

impl MulAssign for Rat {
    fn mul_assign(&mut self, rhs: Rat) {
        self.0 *= rhs.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_form() {
        let r = Rat::new(6, -4);
        assert_eq!(r.to_string(), "-3/2");
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["0", "7", "-3/2", "22/7"] {
            let r: Rat = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert!("1/-2".parse::<Rat>().is_err());
        assert!("1/0".parse::<Rat>().is_err());
        assert!("x".parse::<Rat>().is_err());
    }

    #[test]
    fn valuation() {
        assert_eq!(Rat::new(1, 5).valuation(5), Some(-1));
        assert_eq!(Rat::from_int(50).valuation(5), Some(2));
        assert_eq!(Rat::from_int(3).valuation(5), Some(0));
        assert_eq!(Rat::zero().valuation(5), None);
    }
}
