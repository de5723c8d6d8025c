//! Exact coefficient arithmetic over Z, Q and prime fields F_p.
//!
//! Every scalar operation goes through a [`RingSpec`], which owns the
//! arithmetic rules; a [`Scalar`] is just a value in the chosen
//! representation. No floating point is used anywhere.

use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// The supported coefficient rings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RingSpec {
    Integers,
    Rationals,
    PrimeField(u64),
}

/// An exact scalar. The variant must match the ambient [`RingSpec`];
/// all operations check this and panic on an internal mismatch.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scalar {
    Int(BigInt),
    Rat(BigRational),
    Fp(u64),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl RingSpec {
    /// Builds a prime field spec, verifying primality.
    pub fn prime_field(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(RingSpec::PrimeField(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, RingSpec::Integers)
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            RingSpec::Integers => Scalar::Int(BigInt::from(n)),
            RingSpec::Rationals => Scalar::Rat(BigRational::from(BigInt::from(n))),
            RingSpec::PrimeField(p) => {
                let m = n.rem_euclid(*p as i64);
                Scalar::Fp(m as u64)
            }
        }
    }

    pub fn check(&self, s: &Scalar) -> bool {
        matches!(
            (self, s),
            (RingSpec::Integers, Scalar::Int(_))
                | (RingSpec::Rationals, Scalar::Rat(_))
                | (RingSpec::PrimeField(_), Scalar::Fp(_))
        )
    }

    fn expect(&self, s: &Scalar) {
        assert!(
            self.check(s),
            "scalar {s:?} does not belong to ring {self:?}"
        );
    }

    pub fn is_zero(&self, s: &Scalar) -> bool {
        self.expect(s);
        match s {
            Scalar::Int(n) => n.is_zero(),
            Scalar::Rat(q) => q.is_zero(),
            Scalar::Fp(v) => *v == 0,
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.expect(a);
        self.expect(b);
        match (self, a, b) {
            (RingSpec::Integers, Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x + y),
            (RingSpec::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (RingSpec::PrimeField(p), Scalar::Fp(x), Scalar::Fp(y)) => Scalar::Fp((x + y) % p),
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        self.expect(a);
        match (self, a) {
            (RingSpec::Integers, Scalar::Int(x)) => Scalar::Int(-x),
            (RingSpec::Rationals, Scalar::Rat(x)) => Scalar::Rat(-x),
            (RingSpec::PrimeField(p), Scalar::Fp(x)) => Scalar::Fp(if *x == 0 { 0 } else { p - x }),
            _ => unreachable!(),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.expect(a);
        self.expect(b);
        match (self, a, b) {
            (RingSpec::Integers, Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x * y),
            (RingSpec::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (RingSpec::PrimeField(p), Scalar::Fp(x), Scalar::Fp(y)) => {
                Scalar::Fp(((*x as u128 * *y as u128) % *p as u128) as u64)
            }
            _ => unreachable!(),
        }
    }

    /// Multiplicative inverse. `None` for zero and for non-units of Z.
    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        self.expect(a);
        if self.is_zero(a) {
            return None;
        }
        match (self, a) {
            (RingSpec::Integers, Scalar::Int(x)) => {
                if x.abs().is_one() {
                    Some(Scalar::Int(x.clone()))
                } else {
                    None
                }
            }
            (RingSpec::Rationals, Scalar::Rat(x)) => Some(Scalar::Rat(x.recip())),
            (RingSpec::PrimeField(p), Scalar::Fp(x)) => {
                // extended Euclid on (x, p)
                let (mut r0, mut r1) = (*x as i128, *p as i128);
                let (mut s0, mut s1) = (1i128, 0i128);
                while r1 != 0 {
                    let q = r0 / r1;
                    (r0, r1) = (r1, r0 - q * r1);
                    (s0, s1) = (s1, s0 - q * s1);
                }
                debug_assert_eq!(r0, 1);
                Some(Scalar::Fp(s0.rem_euclid(*p as i128) as u64))
            }
            _ => unreachable!(),
        }
    }

    /// True for scalars with a multiplicative inverse in the ring.
    pub fn is_unit(&self, a: &Scalar) -> bool {
        self.inv(a).is_some()
    }

    /// Exact division; `None` when `b` does not divide `a` in the ring.
    pub fn div_exact(&self, a: &Scalar, b: &Scalar) -> Option<Scalar> {
        self.expect(a);
        self.expect(b);
        if self.is_zero(b) {
            return None;
        }
        match (self, a, b) {
            (RingSpec::Integers, Scalar::Int(x), Scalar::Int(y)) => {
                let (q, r) = x.div_rem(y);
                if r.is_zero() {
                    Some(Scalar::Int(q))
                } else {
                    None
                }
            }
            _ => Some(self.mul(a, &self.inv(b)?)),
        }
    }

    pub fn format(&self, s: &Scalar) -> String {
        match s {
            Scalar::Int(n) => n.to_string(),
            Scalar::Rat(q) => {
                if q.denom().is_one() {
                    q.numer().to_string()
                } else {
                    format!("{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Fp(v) => v.to_string(),
        }
    }

    /// Parses a scalar literal: an integer, or `a/b` over the rationals.
    pub fn parse(&self, text: &str) -> Result<Scalar> {
        let text = text.trim();
        let bad = || Error::Parse(format!("invalid scalar literal `{text}`"));
        match self {
            RingSpec::Integers => {
                let n: BigInt = text.parse().map_err(|_| bad())?;
                Ok(Scalar::Int(n))
            }
            RingSpec::Rationals => {
                if let Some((num, den)) = text.split_once('/') {
                    let n: BigInt = num.trim().parse().map_err(|_| bad())?;
                    let d: BigInt = den.trim().parse().map_err(|_| bad())?;
                    if d.is_zero() {
                        return Err(bad());
                    }
                    Ok(Scalar::Rat(BigRational::new(n, d)))
                } else {
                    let n: BigInt = text.parse().map_err(|_| bad())?;
                    Ok(Scalar::Rat(BigRational::from(n)))
                }
            }
            RingSpec::PrimeField(p) => {
                let n: i64 = text.parse().map_err(|_| bad())?;
                Ok(Scalar::Fp(n.rem_euclid(*p as i64) as u64))
            }
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Integers => write!(f, "z"),
            RingSpec::Rationals => write!(f, "q"),
            RingSpec::PrimeField(p) => write!(f, "fp:{p}"),
        }
    }
}

impl std::str::FromStr for RingSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "z" => Ok(RingSpec::Integers),
            "q" => Ok(RingSpec::Rationals),
            other => {
                if let Some(p) = other.strip_prefix("fp:") {
                    let p: u64 = p
                        .parse()
                        .map_err(|_| Error::Parse(format!("invalid ring `{s}`")))?;
                    RingSpec::prime_field(p)
                } else {
                    Err(Error::Parse(format!("invalid ring `{s}`")))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_rejects_composites() {
        assert!(RingSpec::prime_field(2).is_ok());
        assert!(RingSpec::prime_field(97).is_ok());
        assert!(RingSpec::prime_field(1).is_err());
        assert!(RingSpec::prime_field(91).is_err()); // 7 * 13
    }

    #[test]
    fn fp_inverse() {
        let f7 = RingSpec::prime_field(7).unwrap();
        for v in 1..7 {
            let a = f7.from_i64(v);
            let inv = f7.inv(&a).unwrap();
            assert_eq!(f7.mul(&a, &inv), f7.one());
        }
        assert_eq!(f7.inv(&f7.zero()), None);
    }

    #[test]
    fn integer_units() {
        let z = RingSpec::Integers;
        assert!(z.is_unit(&z.from_i64(-1)));
        assert!(!z.is_unit(&z.from_i64(2)));
        assert_eq!(z.div_exact(&z.from_i64(6), &z.from_i64(3)), Some(z.from_i64(2)));
        assert_eq!(z.div_exact(&z.from_i64(5), &z.from_i64(3)), None);
    }

    #[test]
    fn rational_parsing() {
        let q = RingSpec::Rationals;
        let half = q.parse("1/2").unwrap();
        assert_eq!(q.add(&half, &half), q.one());
        assert!(q.parse("1/0").is_err());
    }

    #[test]
    fn ring_round_trip() {
        for r in ["z", "q", "fp:5"] {
            let ring: RingSpec = r.parse().unwrap();
            assert_eq!(ring.to_string(), r);
        }
    }
}
