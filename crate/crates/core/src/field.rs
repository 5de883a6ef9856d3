//! Exact scalars over a prime field `F_p` or the rationals.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest admissible prime modulus (exclusive). Products of two residues fit in `u64`.
pub const MODULUS_LIMIT: u32 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Kind {
    Prime(u32),
    Rationals,
}

/// The field a [`Scalar`] lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldSpec(Kind);

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    /// `F_p`; the modulus must be a prime below [`MODULUS_LIMIT`].
    pub fn prime(p: u32) -> Result<Self> {
        if p >= MODULUS_LIMIT || !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not a prime below {MODULUS_LIMIT}")));
        }
        Ok(FieldSpec(Kind::Prime(p)))
    }

    pub const fn rationals() -> Self {
        FieldSpec(Kind::Rationals)
    }

    pub fn modulus(self) -> Option<u32> {
        match self.0 {
            Kind::Prime(p) => Some(p),
            Kind::Rationals => None,
        }
    }

    pub fn is_prime_field(self) -> bool {
        matches!(self.0, Kind::Prime(_))
    }

    pub fn zero(self) -> Scalar {
        Scalar::from_i64(self, 0)
    }

    pub fn one(self) -> Scalar {
        Scalar::from_i64(self, 1)
    }

    /// All field elements in canonical order `0, 1, ..., p-1`. `None` for `Q`.
    pub fn elements(self) -> Option<impl Iterator<Item = Scalar> + Clone> {
        let p = self.modulus()?;
        Some((0..p).map(move |v| Scalar(Repr::Mod { v, p })))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Kind::Prime(p) => write!(f, "F{p}"),
            Kind::Rationals => write!(f, "Q"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldSpec::rationals());
        }
        let digits =
            s.strip_prefix('F').ok_or_else(|| Error::InvalidField(format!("expected `Q` or `F<p>`, got `{s}`")))?;
        let p: u32 = digits.parse().map_err(|_| Error::InvalidField(format!("bad modulus in `{s}`")))?;
        FieldSpec::prime(p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Mod { v: u32, p: u32 },
    Rat(BigRational),
}

/// An element of a [`FieldSpec`] in canonical form, so `==` is value equality.
///
/// Binary operators panic when the operands come from different fields; the
/// matrix layer validates fields up front so this only fires on programmer error.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar(Repr);

fn mod_inverse(v: u32, p: u32) -> u32 {
    // extended Euclid on (v, p)
    let (mut r0, mut r1) = (p as i64, v as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    t0.rem_euclid(p as i64) as u32
}

impl Scalar {
    pub fn from_i64(field: FieldSpec, value: i64) -> Self {
        match field.0 {
            Kind::Prime(p) => Scalar(Repr::Mod { v: value.rem_euclid(p as i64) as u32, p }),
            Kind::Rationals => Scalar(Repr::Rat(BigRational::from_integer(value.into()))),
        }
    }

    /// `num/den` in the given field; errors when `den` is zero in that field.
    pub fn from_ratio(field: FieldSpec, num: i64, den: i64) -> Result<Self> {
        let d = Scalar::from_i64(field, den);
        let inv = d.inverse().ok_or(Error::DivisionByZero)?;
        Ok(Scalar::from_i64(field, num) * inv)
    }

    pub fn from_rational(value: BigRational) -> Self {
        Scalar(Repr::Rat(value))
    }

    pub fn field(&self) -> FieldSpec {
        match &self.0 {
            Repr::Mod { p, .. } => FieldSpec(Kind::Prime(*p)),
            Repr::Rat(_) => FieldSpec::rationals(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Mod { v, .. } => *v == 0,
            Repr::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Mod { v, .. } => *v == 1,
            Repr::Rat(r) => r.is_one(),
        }
    }

    /// The residue in `[0, p)` for prime-field scalars.
    pub fn residue(&self) -> Option<u32> {
        match &self.0 {
            Repr::Mod { v, .. } => Some(*v),
            Repr::Rat(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.0 {
            Repr::Rat(r) => Some(r),
            Repr::Mod { .. } => None,
        }
    }

    pub fn inverse(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match &self.0 {
            Repr::Mod { v, p } => Scalar(Repr::Mod { v: mod_inverse(*v, *p), p: *p }),
            Repr::Rat(r) => Scalar(Repr::Rat(r.recip())),
        })
    }

    /// `(-1)^e` in `field`.
    pub fn sign_power(field: FieldSpec, e: usize) -> Scalar {
        Scalar::from_i64(field, if e % 2 == 0 { 1 } else { -1 })
    }

    /// Parses an integer, or `a/b` for rationals.
    pub fn parse(field: FieldSpec, token: &str) -> Result<Self> {
        let bad = || Error::Parse { line: 0, message: format!("bad scalar `{token}` for {field}") };
        match field.0 {
            Kind::Prime(p) => {
                let n: BigInt = token.parse().map_err(|_| bad())?;
                let r = (n % BigInt::from(p) + BigInt::from(p)) % BigInt::from(p);
                Ok(Scalar(Repr::Mod { v: r.to_u32().ok_or_else(bad)?, p }))
            }
            Kind::Rationals => {
                let r = match token.split_once('/') {
                    Some((a, b)) => {
                        let a: BigInt = a.parse().map_err(|_| bad())?;
                        let b: BigInt = b.parse().map_err(|_| bad())?;
                        if b.is_zero() {
                            return Err(bad());
                        }
                        BigRational::new(a, b)
                    }
                    None => BigRational::from_integer(token.parse().map_err(|_| bad())?),
                };
                Ok(Scalar(Repr::Rat(r)))
            }
        }
    }

    fn check_same(&self, other: &Scalar) -> u32 {
        match (&self.0, &other.0) {
            (Repr::Mod { p, .. }, Repr::Mod { p: q, .. }) if p == q => *p,
            (Repr::Rat(_), Repr::Rat(_)) => 0,
            _ => panic!("scalar field mismatch: {} vs {}", self.field(), other.field()),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Mod { v, .. } => write!(f, "{v}"),
            Repr::Rat(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Repr::Rat(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let p = self.check_same(rhs);
        match (&self.0, &rhs.0) {
            (Repr::Mod { v: a, .. }, Repr::Mod { v: b, .. }) => {
                Scalar(Repr::Mod { v: ((*a as u64 + *b as u64) % p as u64) as u32, p })
            }
            (Repr::Rat(a), Repr::Rat(b)) => Scalar(Repr::Rat(a + b)),
            _ => unreachable!(),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let p = self.check_same(rhs);
        match (&self.0, &rhs.0) {
            (Repr::Mod { v: a, .. }, Repr::Mod { v: b, .. }) => {
                Scalar(Repr::Mod { v: ((*a as u64 + p as u64 - *b as u64) % p as u64) as u32, p })
            }
            (Repr::Rat(a), Repr::Rat(b)) => Scalar(Repr::Rat(a - b)),
            _ => unreachable!(),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let p = self.check_same(rhs);
        match (&self.0, &rhs.0) {
            (Repr::Mod { v: a, .. }, Repr::Mod { v: b, .. }) => {
                Scalar(Repr::Mod { v: ((*a as u64 * *b as u64) % p as u64) as u32, p })
            }
            (Repr::Rat(a), Repr::Rat(b)) => Scalar(Repr::Rat(a * b)),
            _ => unreachable!(),
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    /// Panics on division by zero.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Scalar) -> Scalar {
        let inv = rhs.inverse().expect("division by zero scalar");
        self * &inv
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match &self.0 {
            Repr::Mod { v, p } => Scalar(Repr::Mod { v: (p - v) % p, p: *p }),
            Repr::Rat(r) => Scalar(Repr::Rat(-r)),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar { (&self).$m(rhs) }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_is_checked() {
        assert!(FieldSpec::prime(2).is_ok());
        assert!(FieldSpec::prime(65521).is_ok());
        assert!(FieldSpec::prime(4).is_err());
        assert!(FieldSpec::prime(1).is_err());
        assert!(FieldSpec::prime(65537).is_err());
    }

    #[test]
    fn field_names_round_trip() {
        for s in ["Q", "F2", "F3", "F65521"] {
            assert_eq!(s.parse::<FieldSpec>().unwrap().to_string(), s);
        }
        assert!("F9".parse::<FieldSpec>().is_err());
        assert!("R".parse::<FieldSpec>().is_err());
    }

    #[test]
    fn prime_arithmetic() {
        let f = FieldSpec::prime(7).unwrap();
        let a = Scalar::from_i64(f, 5);
        let b = Scalar::from_i64(f, -4);
        assert_eq!((&a + &b).residue(), Some(1));
        assert_eq!((&a * &b).residue(), Some(1));
        assert_eq!((&a - &b).residue(), Some(2));
        assert_eq!(a.inverse().unwrap().residue(), Some(3));
        assert_eq!((-a).residue(), Some(2));
        assert!(f.zero().inverse().is_none());
    }

    #[test]
    fn rationals_are_reduced() {
        let q = FieldSpec::rationals();
        let a = Scalar::parse(q, "6/-4").unwrap();
        assert_eq!(a.to_string(), "-3/2");
        assert_eq!(Scalar::parse(q, "4/2").unwrap().to_string(), "2");
        assert!(Scalar::parse(q, "1/0").is_err());
        assert_eq!((&a * &a.inverse().unwrap()), q.one());
    }

    #[test]
    #[should_panic(expected = "field mismatch")]
    fn mixing_fields_panics() {
        let _ = Scalar::from_i64(FieldSpec::prime(3).unwrap(), 1) + Scalar::from_i64(FieldSpec::rationals(), 1);
    }

    #[test]
    fn prime_parse_reduces() {
        let f = FieldSpec::prime(3).unwrap();
        assert_eq!(Scalar::parse(f, "-1").unwrap().to_string(), "2");
        assert_eq!(Scalar::parse(f, "100000000000000000000").unwrap().residue(), Some(1));
    }
}
