//! Exact coefficient fields.
//!
//! Everything downstream is generic over [`Field`], a small "field as an
//! object" trait: the field value carries its runtime parameters (the prime
//! for [`PrimeField`]) and elements are plain data. Two implementations are
//! provided, residues modulo a word-sized prime (the default working mode) and
//! arbitrary-precision rationals (the audit mode).

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::AlgebraError;

/// Default characteristic of the working field.
pub const DEFAULT_PRIME: u32 = 32003;

#[allow(clippy::wrong_self_convention)]
pub trait Field: Clone + Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Send + Sync;

    /// `p` for prime fields, `0` for the rationals.
    fn characteristic(&self) -> u64;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_bigint(&self, v: &BigInt) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem {
        self.from_bigint(&BigInt::from(v))
    }
    /// Parses a decimal integer (and `a/b` in the rational field).
    fn parse(&self, s: &str) -> Result<Self::Elem, AlgebraError>;
    /// Canonical decimal rendering, inverse of [`Field::parse`].
    fn format(&self, a: &Self::Elem) -> String;

    /// `a - b * c`
    fn sub_mul(&self, a: &Self::Elem, b: &Self::Elem, c: &Self::Elem) -> Self::Elem {
        self.sub(a, &self.mul(b, c))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn pow(&self, a: &Self::Elem, mut e: u32) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

/// Integers modulo a prime `p < 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, AlgebraError> {
        if p >= 1 << 31 || !is_prime(p) {
            return Err(AlgebraError::NotPrime(p));
        }
        Ok(PrimeField { p: p as u32 })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    #[inline]
    fn reduce_i128(&self, v: i128) -> u32 {
        v.rem_euclid(self.p as i128) as u32
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: DEFAULT_PRIME }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

impl Field for PrimeField {
    type Elem = u32;

    fn characteristic(&self) -> u64 {
        self.p as u64
    }
    #[inline]
    fn zero(&self) -> u32 {
        0
    }
    #[inline]
    fn one(&self) -> u32 {
        1
    }
    #[inline]
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        // Fermat: a^(p-2)
        Some(self.pow(a, self.p - 2))
    }
    fn from_bigint(&self, v: &BigInt) -> u32 {
        let r = v.mod_floor(&BigInt::from(self.p));
        r.to_u32().expect("residue fits in u32")
    }
    fn from_i64(&self, v: i64) -> u32 {
        self.reduce_i128(v as i128)
    }
    fn parse(&self, s: &str) -> Result<u32, AlgebraError> {
        let v: BigInt = s
            .trim()
            .parse()
            .map_err(|_| AlgebraError::BadCoefficient(s.to_string()))?;
        Ok(self.from_bigint(&v))
    }
    fn format(&self, a: &u32) -> String {
        a.to_string()
    }
    #[inline]
    fn sub_mul(&self, a: &u32, b: &u32, c: &u32) -> u32 {
        let prod = (*b as u64 * *c as u64) % self.p as u64;
        self.sub(a, &(prod as u32))
    }
}

/// The field of rational numbers with arbitrary-precision numerators and
/// denominators.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RationalField;

impl Field for RationalField {
    type Elem = BigRational;

    fn characteristic(&self) -> u64 {
        0
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn from_bigint(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }
    fn parse(&self, s: &str) -> Result<BigRational, AlgebraError> {
        let bad = || AlgebraError::BadCoefficient(s.to_string());
        let s = s.trim();
        match s.split_once('/') {
            Some((num, den)) => {
                let num: BigInt = num.trim().parse().map_err(|_| bad())?;
                let den: BigInt = den.trim().parse().map_err(|_| bad())?;
                if den.is_zero() {
                    return Err(bad());
                }
                Ok(BigRational::new(num, den))
            }
            None => {
                let v: BigInt = s.parse().map_err(|_| bad())?;
                Ok(BigRational::from_integer(v))
            }
        }
    }
    fn format(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            let (n, d) = (a.numer(), a.denom());
            if d.is_negative() {
                format!("{}/{}", -n, -d)
            } else {
                format!("{}/{}", n, d)
            }
        }
    }
}

/// Runtime choice of coefficient field, as selected on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase", tag = "mode")]
pub enum Coefficients {
    Prime { p: u32 },
    Rational,
}

impl Coefficients {
    /// `0` selects the rationals, anything else must be a prime.
    pub fn from_characteristic(c: u64) -> Result<Self, AlgebraError> {
        if c == 0 {
            Ok(Coefficients::Rational)
        } else {
            let f = PrimeField::new(c)?;
            Ok(Coefficients::Prime { p: f.modulus() })
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Coefficients::Prime { p } => *p as u64,
            Coefficients::Rational => 0,
        }
    }
}

impl Default for Coefficients {
    fn default() -> Self {
        Coefficients::Prime { p: DEFAULT_PRIME }
    }
}
