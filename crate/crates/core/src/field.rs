//! Exact coefficient fields.
//!
//! Two backends implement [`Field`]: arbitrary-precision rationals
//! ([`num_rational::BigRational`]) and prime fields [`Fp`] with the modulus
//! fixed at compile time. All arithmetic is exact.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Rem, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which coefficient field an instance lives over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Rational,
    Prime,
}

/// Serializable description of a coefficient field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub kind: FieldKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
}

impl FieldSpec {
    pub const RATIONAL: FieldSpec = FieldSpec {
        kind: FieldKind::Rational,
        p: None,
    };

    pub fn prime(p: u64) -> FieldSpec {
        FieldSpec {
            kind: FieldKind::Prime,
            p: Some(p),
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.p.unwrap_or(0)
    }

    /// Checks the field against an instance with socle degree `socle`.
    ///
    /// The modulus must be an odd prime strictly above the socle degree so
    /// that every factorial used by the differentiation action is a unit.
    pub fn validate_for(&self, socle: usize) -> Result<()> {
        match (self.kind, self.p) {
            (FieldKind::Rational, None) => Ok(()),
            (FieldKind::Rational, Some(_)) => {
                Err(Error::Field("rational field must not carry a modulus".into()))
            }
            (FieldKind::Prime, None) => Err(Error::Field("prime field needs a modulus".into())),
            (FieldKind::Prime, Some(p)) => {
                if !is_prime(p) {
                    Err(Error::Field(format!("{p} is not prime")))
                } else if p == 2 {
                    Err(Error::Field("characteristic 2 is not supported".into()))
                } else if p <= socle as u64 {
                    Err(Error::Field(format!(
                        "p = {p} must exceed the socle degree {socle}"
                    )))
                } else {
                    Ok(())
                }
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FieldKind::Rational => write!(f, "rational"),
            FieldKind::Prime => write!(f, "prime:{}", self.p.unwrap_or(0)),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "rational" {
            return Ok(FieldSpec::RATIONAL);
        }
        if let Some(rest) = s.strip_prefix("prime:") {
            let p = rest
                .parse::<u64>()
                .map_err(|_| Error::Field(format!("bad modulus in `{s}`")))?;
            return Ok(FieldSpec::prime(p));
        }
        Err(Error::Field(format!(
            "expected `rational` or `prime:P`, got `{s}`"
        )))
    }
}

/// Deterministic trial-division primality test (moduli here are below 2^32).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut i = 3u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            return false;
        }
        i += 2;
    }
    true
}

/// An exact field usable as the scalar type of every computation.
pub trait Field:
    Num
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + Clone
    + Eq
    + std::hash::Hash
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
{
    /// Field description used in instance files.
    fn spec() -> FieldSpec;

    /// 0 for the rationals, `p` for a prime field.
    fn characteristic() -> u64 {
        Self::spec().characteristic()
    }

    fn from_i64(n: i64) -> Self;

    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    /// Draws a random element. Prime fields sample uniformly; rationals draw
    /// small integers in `[-9, 9]`.
    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Size of the set [`Field::sample`] draws from.
    fn sample_space_size() -> u64;

    /// Parses a coefficient written as a decimal integer or `a/b`.
    fn parse_coef(s: &str) -> Result<Self>;

    /// Reduction modulo a small prime `q`; `None` when a denominator is not
    /// invertible mod `q`.
    fn reduce_mod(&self, q: u64) -> Option<u64>;

    /// True when the canonical text form starts with a minus sign.
    fn is_negative(&self) -> bool {
        false
    }
}

// ---------------------------------------------------------------------------
// Prime fields
// ---------------------------------------------------------------------------

/// Residue class modulo the prime `P` (with `P < 2^32`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    pub const MODULUS: u64 = P;

    pub fn new(v: u64) -> Self {
        Fp(v % P)
    }

    /// Canonical representative in `0..P`.
    pub fn value(self) -> u64 {
        self.0
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp(1 % P);
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl<const P: u64> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let s = self.0 + rhs.0;
        Fp(if s >= P { s - P } else { s })
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp(if self.0 >= rhs.0 {
            self.0 - rhs.0
        } else {
            self.0 + P - rhs.0
        })
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(self.0 * rhs.0 % P)
    }
}

impl<const P: u64> Div for Fp<P> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.inv().expect("division by zero in prime field")
    }
}

impl<const P: u64> Rem for Fp<P> {
    type Output = Self;
    // Every nonzero element is a unit, so the remainder is always zero.
    fn rem(self, rhs: Self) -> Self {
        assert!(rhs.0 != 0, "remainder by zero in prime field");
        Fp(0)
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }
}

impl<const P: u64> AddAssign for Fp<P> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<const P: u64> SubAssign for Fp<P> {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<const P: u64> MulAssign for Fp<P> {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u64> Num for Fp<P> {
    type FromStrRadixErr = Error;

    fn from_str_radix(s: &str, radix: u32) -> Result<Self> {
        let s = s.trim();
        let (neg, digits) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        if digits.is_empty() {
            return Err(Error::Malformed("empty coefficient".into()));
        }
        let mut acc = 0u64;
        for c in digits.chars() {
            let d = c
                .to_digit(radix)
                .ok_or_else(|| Error::Malformed(format!("bad digit in `{s}`")))?;
            acc = (acc * radix as u64 + d as u64) % P;
        }
        let v = Fp(acc);
        Ok(if neg { -v } else { v })
    }
}

impl<const P: u64> Field for Fp<P> {
    fn spec() -> FieldSpec {
        FieldSpec::prime(P)
    }

    fn from_i64(n: i64) -> Self {
        let r = n.rem_euclid(P as i64);
        Fp(r as u64)
    }

    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            return None;
        }
        // Extended Euclid on (a, P).
        let (mut r0, mut r1) = (P as i64, self.0 as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Some(Self::from_i64(t0))
    }

    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Fp(rng.gen_range(0..P))
    }

    fn sample_space_size() -> u64 {
        P
    }

    fn parse_coef(s: &str) -> Result<Self> {
        match s.split_once('/') {
            Some((a, b)) => {
                let a = Self::from_str_radix(a, 10)?;
                let b = Self::from_str_radix(b, 10)?;
                let bi = b
                    .inv()
                    .ok_or_else(|| Error::Malformed(format!("denominator of `{s}` vanishes mod {P}")))?;
                Ok(a * bi)
            }
            None => Self::from_str_radix(s, 10),
        }
    }

    fn reduce_mod(&self, q: u64) -> Option<u64> {
        Some(self.0 % q)
    }
}

// ---------------------------------------------------------------------------
// Rationals
// ---------------------------------------------------------------------------

impl Field for BigRational {
    fn spec() -> FieldSpec {
        FieldSpec::RATIONAL
    }

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::from_i64(rng.gen_range(-9..=9))
    }

    fn sample_space_size() -> u64 {
        19
    }

    fn parse_coef(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse_int = |t: &str| {
            BigInt::from_str(t).map_err(|_| Error::Malformed(format!("bad rational `{s}`")))
        };
        match s.split_once('/') {
            Some((a, b)) => {
                let den = parse_int(b)?;
                if den.is_zero() {
                    return Err(Error::Malformed(format!("zero denominator in `{s}`")));
                }
                Ok(BigRational::new(parse_int(a)?, den))
            }
            None => Ok(BigRational::from_integer(parse_int(s)?)),
        }
    }

    fn reduce_mod(&self, q: u64) -> Option<u64> {
        let qb = BigInt::from(q);
        let num = self.numer().mod_floor(&qb).to_u64()?;
        let den = self.denom().mod_floor(&qb).to_u64()?;
        if den == 0 {
            return None;
        }
        // Fermat inverse: q is prime.
        let mut inv = 1u64;
        let mut base = den;
        let mut e = q - 2;
        while e > 0 {
            if e & 1 == 1 {
                inv = inv * base % q;
            }
            base = base * base % q;
            e >>= 1;
        }
        Some(num * inv % q)
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}
