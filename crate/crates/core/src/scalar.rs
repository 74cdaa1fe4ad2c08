//! Exact scalar fields: prime fields `F_p` (p ≤ 251) and the rationals.
//!
//! All linear algebra in this crate is generic over [`Field`]. Because the
//! prime of `F_p` is a runtime value, every field element knows its own
//! [`Field::Domain`], and constructors that need a zero or one take the
//! domain explicitly.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Inv, One, Signed, Zero};

use crate::error::{Error, Result};

/// Largest prime accepted as a modulus.
pub const MAX_PRIME: u32 = 251;

/// An exact field with a runtime domain descriptor.
pub trait Field:
    Clone
    + PartialEq
    + Eq
    + Hash
    + Debug
    + Display
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Runtime descriptor of the field (the prime for `F_p`, unit for `Q`).
    type Domain: Clone + PartialEq + Eq + Hash + Debug + Send + Sync;

    fn domain(&self) -> Self::Domain;
    fn zero(domain: &Self::Domain) -> Self;
    fn one(domain: &Self::Domain) -> Self;
    fn from_i64(domain: &Self::Domain, value: i64) -> Self;
    fn is_zero(&self) -> bool;
    /// Multiplicative inverse, `None` for zero.
    fn inverse(&self) -> Option<Self>;
    /// 0 for the rationals, p for `F_p`.
    fn characteristic(domain: &Self::Domain) -> u32;

    fn is_one(&self) -> bool {
        *self == Self::one(&self.domain())
    }

    /// `self^e` by repeated squaring.
    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.domain());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Validated prime modulus for `F_p`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Prime(u8);

impl Prime {
    pub fn new(p: u32) -> Result<Self> {
        if p > MAX_PRIME || !is_prime(p) {
            return Err(Error::Domain(format!("{p} is not a prime <= {MAX_PRIME}")));
        }
        Ok(Prime(p as u8))
    }

    pub fn get(self) -> u32 {
        self.0 as u32
    }

    /// Elements `0, 1, …, p−1`.
    pub fn elements(self) -> impl Iterator<Item = Fp> {
        (0..self.get()).map(move |r| Fp::new(r as i64, self))
    }

    /// Smallest generator of the cyclic group `F_p^×`.
    pub fn primitive_root(self) -> Fp {
        let p = self.get();
        for g in 1..p {
            let x = Fp::new(g as i64, self);
            let mut y = x;
            let mut order = 1;
            while !y.is_one() {
                y = y * x;
                order += 1;
            }
            if order == p - 1 {
                return x;
            }
        }
        unreachable!("F_p^x is cyclic")
    }
}

impl Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Element of `F_p`, stored as its residue in `[0, p)` together with `p`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    residue: u8,
    modulus: Prime,
}

impl Fp {
    pub fn new(value: i64, modulus: Prime) -> Self {
        let p = modulus.get() as i64;
        Fp {
            residue: value.rem_euclid(p) as u8,
            modulus,
        }
    }

    pub fn residue(self) -> u32 {
        self.residue as u32
    }

    pub fn modulus(self) -> Prime {
        self.modulus
    }

    #[inline]
    fn check(self, other: Fp) {
        assert_eq!(
            self.modulus, other.modulus,
            "mixed moduli in F_p arithmetic"
        );
    }
}

impl Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(mod {})", self.residue, self.modulus)
    }
}

impl Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residue)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        self.check(rhs);
        let p = self.modulus.get();
        Fp {
            residue: ((self.residue() + rhs.residue()) % p) as u8,
            modulus: self.modulus,
        }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        self.check(rhs);
        let p = self.modulus.get();
        Fp {
            residue: ((self.residue() + p - rhs.residue()) % p) as u8,
            modulus: self.modulus,
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        self.check(rhs);
        let p = self.modulus.get();
        Fp {
            residue: ((self.residue() * rhs.residue()) % p) as u8,
            modulus: self.modulus,
        }
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        let p = self.modulus.get();
        Fp {
            residue: ((p - self.residue()) % p) as u8,
            modulus: self.modulus,
        }
    }
}

impl Inv for Fp {
    type Output = Option<Fp>;
    fn inv(self) -> Option<Fp> {
        if self.residue == 0 {
            return None;
        }
        // Fermat: a^(p-2)
        Some(Field::pow(&self, self.modulus.get() as u64 - 2))
    }
}

impl Field for Fp {
    type Domain = Prime;

    fn domain(&self) -> Prime {
        self.modulus
    }
    fn zero(domain: &Prime) -> Self {
        Fp::new(0, *domain)
    }
    fn one(domain: &Prime) -> Self {
        Fp::new(1, *domain)
    }
    fn from_i64(domain: &Prime, value: i64) -> Self {
        Fp::new(value, *domain)
    }
    fn is_zero(&self) -> bool {
        self.residue == 0
    }
    fn inverse(&self) -> Option<Self> {
        self.inv()
    }
    fn characteristic(domain: &Prime) -> u32 {
        domain.get()
    }
}

/// Arbitrary-precision rational number, always in lowest terms.
pub type Rational = BigRational;

impl Field for BigRational {
    type Domain = ();

    fn domain(&self) {}
    fn zero(_: &()) -> Self {
        <BigRational as Zero>::zero()
    }
    fn one(_: &()) -> Self {
        <BigRational as One>::one()
    }
    fn from_i64(_: &(), value: i64) -> Self {
        BigRational::from_integer(BigInt::from(value))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn inverse(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(Inv::inv(self.clone()))
        }
    }
    fn characteristic(_: &()) -> u32 {
        0
    }
}

/// Parse a rational from `"a"` or `"a/b"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational literal {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if Zero::is_zero(&den) {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// Render a rational as `"a"` or `"a/b"`.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else if q.is_negative() {
        format!("-{}/{}", q.numer().abs(), q.denom())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_are_validated() {
        assert!(Prime::new(2).is_ok());
        assert!(Prime::new(251).is_ok());
        assert!(Prime::new(1).is_err());
        assert!(Prime::new(9).is_err());
        assert!(Prime::new(257).is_err());
    }

    #[test]
    fn fp_inverse_table() {
        let p = Prime::new(7).unwrap();
        for a in 1..7 {
            let x = Fp::new(a, p);
            assert!((x * x.inverse().unwrap()).is_one());
        }
        assert!(Fp::new(0, p).inverse().is_none());
        // 1/2 = 2 in F_3
        let p3 = Prime::new(3).unwrap();
        assert_eq!(Fp::new(2, p3).inverse().unwrap(), Fp::new(2, p3));
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(Prime::new(2).unwrap().primitive_root().residue(), 1);
        assert_eq!(Prime::new(3).unwrap().primitive_root().residue(), 2);
        assert_eq!(Prime::new(5).unwrap().primitive_root().residue(), 2);
        assert_eq!(Prime::new(7).unwrap().primitive_root().residue(), 3);
    }

    #[test]
    fn rational_literals() {
        let q = parse_rational("-6/4").unwrap();
        assert_eq!(format_rational(&q), "-3/2");
        assert_eq!(format_rational(&parse_rational("5").unwrap()), "5");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
