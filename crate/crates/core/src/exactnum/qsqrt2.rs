use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use super::Rational;
use crate::error::{Error, Result};

/// An element `rat + sqrt2·√2` of the field ℚ(√2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QSqrt2 {
    pub rat: Rational,
    pub sqrt2: Rational,
}

impl QSqrt2 {
    pub fn new(rat: Rational, sqrt2: Rational) -> Self {
        QSqrt2 { rat, sqrt2 }
    }

    pub fn zero() -> Self {
        QSqrt2::default()
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::ONE)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_int(n))
    }

    pub fn from_rational(r: Rational) -> Self {
        QSqrt2 { rat: r, sqrt2: Rational::ZERO }
    }

    /// `p/q`; panics only on `q == 0`, which callers never pass as a literal.
    pub fn frac(p: i64, q: i64) -> Self {
        Self::from_rational(Rational::new(p, q).expect("nonzero literal denominator"))
    }

    /// √2 itself.
    pub fn sqrt2() -> Self {
        QSqrt2 { rat: Rational::ZERO, sqrt2: Rational::ONE }
    }

    /// 1/√2 = √2/2.
    pub fn inv_sqrt2() -> Self {
        QSqrt2 { rat: Rational::ZERO, sqrt2: Rational::new(1, 2).unwrap() }
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.sqrt2.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.rat.is_one() && self.sqrt2.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.sqrt2.is_zero()
    }

    /// The value as an integer when it is one.
    pub fn as_integer(&self) -> Option<i64> {
        if self.is_rational() {
            self.rat.as_integer()
        } else {
            None
        }
    }

    /// Galois conjugate √2 ↦ −√2.
    pub fn conj(&self) -> Self {
        QSqrt2 { rat: self.rat.clone(), sqrt2: -&self.sqrt2 }
    }

    /// Field norm `a² − 2b²`, always rational.
    pub fn norm(&self) -> Rational {
        let a2 = &self.rat * &self.rat;
        let b2 = &self.sqrt2 * &self.sqrt2;
        &a2 - &b2.mul_int(2)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // √2 is irrational, so the norm of a nonzero element is nonzero.
        let n = self.norm().recip()?;
        let c = self.conj();
        Ok(QSqrt2 { rat: &c.rat * &n, sqrt2: &c.sqrt2 * &n })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn mul_int(&self, k: i64) -> Self {
        match k {
            0 => QSqrt2::zero(),
            1 => self.clone(),
            _ => QSqrt2 { rat: self.rat.mul_int(k), sqrt2: self.sqrt2.mul_int(k) },
        }
    }

    pub fn mul_rational(&self, r: &Rational) -> Self {
        QSqrt2 { rat: &self.rat * r, sqrt2: &self.sqrt2 * r }
    }
}

impl From<i64> for QSqrt2 {
    fn from(n: i64) -> Self {
        QSqrt2::from_int(n)
    }
}

impl From<Rational> for QSqrt2 {
    fn from(r: Rational) -> Self {
        QSqrt2::from_rational(r)
    }
}

impl<'a> Add<&'a QSqrt2> for &'a QSqrt2 {
    type Output = QSqrt2;
    fn add(self, rhs: &'a QSqrt2) -> QSqrt2 {
        QSqrt2 { rat: &self.rat + &rhs.rat, sqrt2: &self.sqrt2 + &rhs.sqrt2 }
    }
}

impl<'a> Sub<&'a QSqrt2> for &'a QSqrt2 {
    type Output = QSqrt2;
    fn sub(self, rhs: &'a QSqrt2) -> QSqrt2 {
        QSqrt2 { rat: &self.rat - &rhs.rat, sqrt2: &self.sqrt2 - &rhs.sqrt2 }
    }
}

impl<'a> Mul<&'a QSqrt2> for &'a QSqrt2 {
    type Output = QSqrt2;
    fn mul(self, rhs: &'a QSqrt2) -> QSqrt2 {
        if self.sqrt2.is_zero() && rhs.sqrt2.is_zero() {
            return QSqrt2::from_rational(&self.rat * &rhs.rat);
        }
        // (a + b√2)(c + d√2) = (ac + 2bd) + (ad + bc)√2
        let ac = &self.rat * &rhs.rat;
        let bd = &self.sqrt2 * &rhs.sqrt2;
        let ad = &self.rat * &rhs.sqrt2;
        let bc = &self.sqrt2 * &rhs.rat;
        QSqrt2 { rat: &ac + &bd.mul_int(2), sqrt2: &ad + &bc }
    }
}

impl Neg for &QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2 { rat: -&self.rat, sqrt2: -&self.sqrt2 }
    }
}

impl Neg for QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<QSqrt2> for QSqrt2 {
            type Output = QSqrt2;
            fn $method(self, rhs: QSqrt2) -> QSqrt2 {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a QSqrt2> for QSqrt2 {
            type Output = QSqrt2;
            fn $method(self, rhs: &'a QSqrt2) -> QSqrt2 {
                (&self).$method(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&QSqrt2> for QSqrt2 {
    fn add_assign(&mut self, rhs: &QSqrt2) {
        if !rhs.rat.is_zero() {
            self.rat = &self.rat + &rhs.rat;
        }
        if !rhs.sqrt2.is_zero() {
            self.sqrt2 = &self.sqrt2 + &rhs.sqrt2;
        }
    }
}

impl fmt::Display for QSqrt2 {
    /// Renders as `p/q`, `r/s*sqrt2`, or `p/q + r/s*sqrt2` (`-` when the
    /// irrational part is negative).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sqrt2.is_zero() {
            return write!(f, "{}", self.rat);
        }
        if self.rat.is_zero() {
            return write!(f, "{}*sqrt2", self.sqrt2);
        }
        if self.sqrt2.is_negative() {
            write!(f, "{} - {}*sqrt2", self.rat, self.sqrt2.abs())
        } else {
            write!(f, "{} + {}*sqrt2", self.rat, self.sqrt2)
        }
    }
}

impl serde::Serialize for QSqrt2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Debug for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_sqrt2_part(s: &str, whole: &str) -> Result<Rational> {
    let t = s.trim();
    let coeff = t.strip_suffix("sqrt2").ok_or_else(|| Error::parse(whole, "expected `r/s*sqrt2`"))?.trim_end();
    let coeff = match coeff.strip_suffix('*') {
        Some(c) => c.trim_end(),
        None if coeff.is_empty() || coeff == "-" || coeff == "+" => coeff,
        None => return Err(Error::parse(whole, "expected `*` before sqrt2")),
    };
    match coeff {
        "" | "+" => Ok(Rational::ONE),
        "-" => Ok(-Rational::ONE),
        c => c.parse(),
    }
}

impl FromStr for QSqrt2 {
    type Err = Error;

    /// Inverse of `Display`; also accepts a bare `sqrt2` / `-sqrt2`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.is_empty() {
            return Err(Error::parse(s, "empty scalar"));
        }
        if !t.contains("sqrt2") {
            return Ok(QSqrt2::from_rational(t.parse()?));
        }
        // Split at a binary +/- (one preceded by a space).
        let split = t.char_indices().skip(1).find(|&(i, c)| (c == '+' || c == '-') && t[..i].ends_with(' '));
        match split {
            None => Ok(QSqrt2 { rat: Rational::ZERO, sqrt2: parse_sqrt2_part(t, s)? }),
            Some((i, op)) => {
                let rat: Rational = t[..i].trim().parse()?;
                let mut irr = parse_sqrt2_part(&t[i + 1..], s)?;
                if op == '-' {
                    irr = -irr;
                }
                Ok(QSqrt2 { rat, sqrt2: irr })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qs(s: &str) -> QSqrt2 {
        s.parse().unwrap()
    }

    #[test]
    fn silver_units_multiply_to_one() {
        // (1 + √2)(−1 + √2) = 2 − 1
        let a = QSqrt2::new(Rational::ONE, Rational::ONE);
        let b = QSqrt2::new(-Rational::ONE, Rational::ONE);
        assert_eq!(&a * &b, QSqrt2::one());
    }

    #[test]
    fn half_plus_half() {
        assert_eq!(&QSqrt2::frac(1, 2) + &QSqrt2::frac(1, 2), QSqrt2::one());
    }

    #[test]
    fn inverse_sqrt2_squared_is_half() {
        let h = QSqrt2::inv_sqrt2();
        assert_eq!(&h * &h, QSqrt2::frac(1, 2));
    }

    #[test]
    fn inverses() {
        assert_eq!(qs("3 + 2*sqrt2").inv().unwrap(), qs("3 - 2*sqrt2"));
        assert_eq!(QSqrt2::from_int(2).inv().unwrap(), QSqrt2::frac(1, 2));
        assert_eq!(qs("1/2*sqrt2").inv().unwrap(), QSqrt2::sqrt2());
        assert!(matches!(QSqrt2::zero().inv(), Err(Error::DivisionByZero)));
    }

    #[test]
    fn conjugation() {
        assert_eq!(qs("3 + 2*sqrt2").conj(), qs("3 - 2*sqrt2"));
        assert_eq!(QSqrt2::from_int(5).conj(), QSqrt2::from_int(5));
    }

    #[test]
    fn render_and_parse() {
        for s in ["0", "-7/3", "1/2*sqrt2", "-1*sqrt2", "1 + 1/2*sqrt2", "1/4 - 3*sqrt2"] {
            assert_eq!(qs(s).to_string(), s);
        }
        assert_eq!(qs("sqrt2"), QSqrt2::sqrt2());
        assert_eq!(qs("-sqrt2"), -QSqrt2::sqrt2());
        assert_eq!(qs("2 - sqrt2").to_string(), "2 - 1*sqrt2");
        for bad in ["", "sqrt", "1 +", "1 + 2", "2sqrt2", "1 + 1/0*sqrt2", "x*sqrt2"] {
            assert!(bad.parse::<QSqrt2>().is_err(), "{bad}");
        }
    }
}
