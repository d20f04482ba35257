use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, ToPrimitive, Zero};

/// Largest modulus accepted for `F_p` and `Z/p^m`. Products are formed in `u128`.
pub(crate) const MAX_MODULUS: u64 = 1 << 62;

/// The residue field `k` of a coefficient ring: a prime field or the rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BaseField {
    Prime(u64),
    Rationals,
}

/// An element of a [`BaseField`], always reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Mod(u64),
    Rat(BigRational),
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

pub(crate) fn neg_mod(a: u64, m: u64) -> u64 {
    if a == 0 {
        0
    } else {
        m - a
    }
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub(crate) fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

pub(crate) fn reduce_i64(n: i64, m: u64) -> u64 {
    (n as i128).rem_euclid(m as i128) as u64
}

pub(crate) fn reduce_bigint(n: &BigInt, m: u64) -> u64 {
    n.mod_floor(&BigInt::from(m))
        .to_u64()
        .expect("residue fits in u64")
}

impl BaseField {
    pub fn characteristic(&self) -> u64 {
        match self {
            BaseField::Prime(p) => *p,
            BaseField::Rationals => 0,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            BaseField::Prime(_) => Scalar::Mod(0),
            BaseField::Rationals => Scalar::Rat(BigRational::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            BaseField::Prime(_) => Scalar::Mod(1),
            BaseField::Rationals => Scalar::Rat(BigRational::one()),
        }
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            BaseField::Prime(p) => Scalar::Mod(reduce_i64(n, *p)),
            BaseField::Rationals => Scalar::Rat(BigRational::from_integer(n.into())),
        }
    }

    /// `num / den`, or `None` when `den` vanishes in this field.
    pub fn from_fraction(&self, num: &BigInt, den: &BigInt) -> Option<Scalar> {
        match self {
            BaseField::Prime(p) => {
                let d = reduce_bigint(den, *p);
                let inv = inv_mod(d, *p)?;
                Some(Scalar::Mod(mul_mod(reduce_bigint(num, *p), inv, *p)))
            }
            BaseField::Rationals => {
                if den.is_zero() {
                    None
                } else {
                    Some(Scalar::Rat(BigRational::new(num.clone(), den.clone())))
                }
            }
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Mod(v) => *v == 0,
            Scalar::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Mod(v) => *v == 1,
            Scalar::Rat(r) => r.is_one(),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (BaseField::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod(add_mod(*x, *y, *p)),
            (BaseField::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            _ => panic!("scalar does not belong to {self:?}"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (BaseField::Prime(p), Scalar::Mod(x)) => Scalar::Mod(neg_mod(*x, *p)),
            (BaseField::Rationals, Scalar::Rat(x)) => Scalar::Rat(-x),
            _ => panic!("scalar does not belong to {self:?}"),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (BaseField::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod(mul_mod(*x, *y, *p)),
            (BaseField::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            _ => panic!("scalar does not belong to {self:?}"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        match (self, a) {
            (BaseField::Prime(p), Scalar::Mod(x)) => inv_mod(*x, *p).map(Scalar::Mod),
            (BaseField::Rationals, Scalar::Rat(x)) => {
                if x.is_zero() {
                    None
                } else {
                    Some(Scalar::Rat(x.recip()))
                }
            }
            _ => panic!("scalar does not belong to {self:?}"),
        }
    }

    pub(crate) fn contains(&self, a: &Scalar) -> bool {
        match (self, a) {
            (BaseField::Prime(p), Scalar::Mod(x)) => x < p,
            (BaseField::Rationals, Scalar::Rat(_)) => true,
            _ => false,
        }
    }
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseField::Prime(p) => write!(f, "F{p}"),
            BaseField::Rationals => f.write_str("Q"),
        }
    }
}

impl Scalar {
    /// True for rationals with a negative sign; prime-field elements print
    /// as their least non-negative representative.
    pub(crate) fn is_negative(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_negative())
    }

    pub(crate) fn abs_string(&self) -> String {
        match self {
            Scalar::Mod(v) => v.to_string(),
            Scalar::Rat(r) => r.abs().to_string(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Mod(v) => write!(f, "{v}"),
            Scalar::Rat(r) => write!(f, "{r}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn modular_inverse() {
        assert_eq!(inv_mod(3, 5), Some(2));
        assert_eq!(inv_mod(7, 25), Some(18));
        assert_eq!(inv_mod(5, 25), None);
        for a in 1..97 {
            assert_eq!(mul_mod(a, inv_mod(a, 97).unwrap(), 97), 1);
        }
    }

    #[test]
    fn fractions_in_prime_field() {
        let f5 = BaseField::Prime(5);
        let half = f5.from_fraction(&BigInt::from(1), &BigInt::from(2)).unwrap();
        assert_eq!(half, Scalar::Mod(3));
        assert!(f5.from_fraction(&BigInt::from(1), &BigInt::from(10)).is_none());
        assert_eq!(f5.from_i64(-1), Scalar::Mod(4));
    }
}
