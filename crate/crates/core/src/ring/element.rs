use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::scalar::{add_mod, inv_mod, mul_mod, neg_mod};
use super::{BaseField, Ring, RingKind, Scalar};
use crate::error::{Error, Result};

/// Canonical representation of a ring element, interpreted by its [`Ring`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Value {
    Scalar(Scalar),
    /// Coefficients of `1, e, ..., e^(m-1)`; always of length `m`.
    Poly(Vec<Scalar>),
    Residue(u64),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingElement {
    ring: Ring,
    value: Value,
}

impl Ring {
    pub(crate) fn add_v(&self, a: &Value, b: &Value) -> Value {
        match (self.kind(), a, b) {
            (RingKind::PrimeField(_) | RingKind::Rationals, Value::Scalar(x), Value::Scalar(y)) => {
                Value::Scalar(self.residue_field().add(x, y))
            }
            (RingKind::TruncatedPoly { base, .. }, Value::Poly(x), Value::Poly(y)) => {
                Value::Poly(x.iter().zip(y).map(|(u, v)| base.add(u, v)).collect())
            }
            (RingKind::PrimePowerResidues { .. }, Value::Residue(x), Value::Residue(y)) => {
                Value::Residue(add_mod(*x, *y, self.modulus()))
            }
            _ => panic!("value does not belong to {self}"),
        }
    }

    pub(crate) fn neg_v(&self, a: &Value) -> Value {
        match (self.kind(), a) {
            (_, Value::Scalar(x)) => Value::Scalar(self.residue_field().neg(x)),
            (RingKind::TruncatedPoly { base, .. }, Value::Poly(x)) => {
                Value::Poly(x.iter().map(|u| base.neg(u)).collect())
            }
            (_, Value::Residue(x)) => Value::Residue(neg_mod(*x, self.modulus())),
            _ => panic!("value does not belong to {self}"),
        }
    }

    pub(crate) fn sub_v(&self, a: &Value, b: &Value) -> Value {
        self.add_v(a, &self.neg_v(b))
    }

    pub(crate) fn mul_v(&self, a: &Value, b: &Value) -> Value {
        match (self.kind(), a, b) {
            (RingKind::PrimeField(_) | RingKind::Rationals, Value::Scalar(x), Value::Scalar(y)) => {
                Value::Scalar(self.residue_field().mul(x, y))
            }
            (RingKind::TruncatedPoly { base, .. }, Value::Poly(x), Value::Poly(y)) => {
                let m = x.len();
                let mut out = vec![base.zero(); m];
                for (i, u) in x.iter().enumerate() {
                    if base.is_zero(u) {
                        continue;
                    }
                    for (j, v) in y.iter().take(m - i).enumerate() {
                        if !base.is_zero(v) {
                            out[i + j] = base.add(&out[i + j], &base.mul(u, v));
                        }
                    }
                }
                Value::Poly(out)
            }
            (RingKind::PrimePowerResidues { .. }, Value::Residue(x), Value::Residue(y)) => {
                Value::Residue(mul_mod(*x, *y, self.modulus()))
            }
            _ => panic!("value does not belong to {self}"),
        }
    }

    pub(crate) fn inv_v(&self, a: &Value) -> Option<Value> {
        match (self.kind(), a) {
            (_, Value::Scalar(x)) => self.residue_field().inv(x).map(Value::Scalar),
            (RingKind::TruncatedPoly { base, .. }, Value::Poly(x)) => {
                let c0 = base.inv(&x[0])?;
                let m = x.len();
                let mut out = Vec::with_capacity(m);
                out.push(c0.clone());
                for k in 1..m {
                    let mut acc = base.zero();
                    for j in 1..=k {
                        if !base.is_zero(&x[j]) {
                            acc = base.add(&acc, &base.mul(&x[j], &out[k - j]));
                        }
                    }
                    out.push(base.neg(&base.mul(&c0, &acc)));
                }
                Some(Value::Poly(out))
            }
            (_, Value::Residue(x)) => inv_mod(*x, self.modulus()).map(Value::Residue),
            _ => panic!("value does not belong to {self}"),
        }
    }

    pub(crate) fn is_zero_v(&self, a: &Value) -> bool {
        match a {
            Value::Scalar(x) => self.residue_field().is_zero(x),
            Value::Poly(x) => {
                let base = self.residue_field();
                x.iter().all(|u| base.is_zero(u))
            }
            Value::Residue(x) => *x == 0,
        }
    }

    pub(crate) fn residue_v(&self, a: &Value) -> Scalar {
        match (self.kind(), a) {
            (_, Value::Scalar(x)) => x.clone(),
            (_, Value::Poly(x)) => x[0].clone(),
            (RingKind::PrimePowerResidues { p, .. }, Value::Residue(x)) => Scalar::Mod(x % p),
            _ => panic!("value does not belong to {self}"),
        }
    }

    pub(crate) fn is_unit_v(&self, a: &Value) -> bool {
        !self.residue_field().is_zero(&self.residue_v(a))
    }

    pub(crate) fn pow_v(&self, a: &Value, mut n: u64) -> Value {
        let mut result = self.one_value();
        let mut base = a.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = self.mul_v(&result, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul_v(&base, &base);
            }
        }
        result
    }

    pub(crate) fn int_v(&self, n: i64) -> Value {
        self.from_i64(n).into_value()
    }
}

impl RingElement {
    pub(crate) fn from_value(ring: Ring, value: Value) -> RingElement {
        RingElement { ring, value }
    }

    pub(crate) fn value(&self) -> &Value {
        &self.value
    }

    pub(crate) fn into_value(self) -> Value {
        self.value
    }

    fn with(&self, value: Value) -> RingElement {
        RingElement {
            ring: self.ring.clone(),
            value,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.ring.is_zero_v(&self.value)
    }

    pub fn is_one(&self) -> bool {
        self.value == self.ring.one_value()
    }

    pub fn is_unit(&self) -> bool {
        self.ring.is_unit_v(&self.value)
    }

    pub fn is_nilpotent(&self) -> bool {
        !self.is_unit()
    }

    /// Image in the residue field.
    pub fn residue(&self) -> RingElement {
        let k = self.ring.residue_ring();
        let v = Value::Scalar(self.ring.residue_v(&self.value));
        RingElement::from_value(k, v)
    }

    /// Coefficients in the nilpotent generator, for truncated polynomial rings.
    pub fn poly_coefficients(&self) -> Option<&[Scalar]> {
        match &self.value {
            Value::Poly(c) => Some(c),
            _ => None,
        }
    }

    /// The representative in `0..p^m` of an element of `Z/p^m`.
    pub fn residue_class(&self) -> Option<u64> {
        match &self.value {
            Value::Residue(v) => Some(*v),
            _ => None,
        }
    }

    pub fn scalar(&self) -> Option<&Scalar> {
        match &self.value {
            Value::Scalar(s) => Some(s),
            _ => None,
        }
    }

    fn check_same(&self, other: &RingElement) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::MixedRings(self.ring.to_string(), other.ring.to_string()));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &RingElement) -> Result<RingElement> {
        self.check_same(other)?;
        Ok(self.with(self.ring.add_v(&self.value, &other.value)))
    }

    pub fn checked_sub(&self, other: &RingElement) -> Result<RingElement> {
        self.check_same(other)?;
        Ok(self.with(self.ring.sub_v(&self.value, &other.value)))
    }

    pub fn checked_mul(&self, other: &RingElement) -> Result<RingElement> {
        self.check_same(other)?;
        Ok(self.with(self.ring.mul_v(&self.value, &other.value)))
    }

    pub fn checked_div(&self, other: &RingElement) -> Result<RingElement> {
        self.check_same(other)?;
        self.checked_mul(&other.inv()?)
    }

    pub fn inv(&self) -> Result<RingElement> {
        self.ring
            .inv_v(&self.value)
            .map(|v| self.with(v))
            .ok_or_else(|| Error::NonUnit(self.to_string()))
    }

    /// Integer power; negative exponents require a unit.
    pub fn pow(&self, n: i64) -> Result<RingElement> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        Ok(self.with(self.ring.pow_v(&base.value, n.unsigned_abs())))
    }

    pub fn scale(&self, n: i64) -> RingElement {
        self.with(self.ring.mul_v(&self.value, &self.ring.int_v(n)))
    }

    /// Formal derivative with respect to the nilpotent generator.
    pub fn d_epsilon(&self) -> Result<RingElement> {
        match (self.ring.kind(), &self.value) {
            (RingKind::TruncatedPoly { base, .. }, Value::Poly(c)) => {
                let m = c.len();
                let mut out = vec![base.zero(); m];
                for i in 1..m {
                    out[i - 1] = base.mul(&c[i], &base.from_i64(i as i64));
                }
                Ok(self.with(Value::Poly(out)))
            }
            _ => Err(Error::UnsupportedRing {
                op: "d_epsilon",
                ring: self.ring.to_string(),
            }),
        }
    }

    /// Order of the element in the maximal ideal filtration: the lowest
    /// degree in `e`, or the `p`-adic valuation in `Z/p^m`. Zero has
    /// valuation equal to the nilpotency index.
    pub fn valuation(&self) -> u32 {
        let e = self.ring.nilpotency_index();
        match (self.ring.kind(), &self.value) {
            (_, Value::Scalar(s)) => {
                if self.ring.residue_field().is_zero(s) {
                    e
                } else {
                    0
                }
            }
            (RingKind::TruncatedPoly { base, .. }, Value::Poly(c)) => {
                c.iter().position(|u| !base.is_zero(u)).map_or(e, |i| i as u32)
            }
            (RingKind::PrimePowerResidues { p, .. }, Value::Residue(x)) => {
                if *x == 0 {
                    return e;
                }
                let mut v = 0;
                let mut y = *x;
                while y % p == 0 {
                    y /= p;
                    v += 1;
                }
                v
            }
            _ => unreachable!(),
        }
    }

    /// Least `r >= 1` with `x^r = 0`, or `None` for units.
    pub fn nilpotency_order(&self) -> Option<u32> {
        if self.is_unit() {
            return None;
        }
        let e = self.ring.nilpotency_index();
        let v = self.valuation();
        Some(e.div_ceil(v))
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Value::Scalar(s) => write!(f, "{s}"),
            Value::Residue(x) => write!(f, "{x}"),
            Value::Poly(c) => {
                let var = self.ring.variable().unwrap_or("e");
                let base = self.ring.residue_field();
                f.write_str(&format_poly(&base, c, var))
            }
        }
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} in {}", self.ring)
    }
}

pub(crate) fn format_poly(base: &BaseField, c: &[Scalar], var: &str) -> String {
    let mut out = String::new();
    for (i, s) in c.iter().enumerate() {
        if base.is_zero(s) {
            continue;
        }
        let neg = s.is_negative();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push(if neg { '-' } else { '+' });
        }
        let mag = s.abs_string();
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        if i == 0 {
            out.push_str(&mag);
        } else if mag == "1" {
            out.push_str(&mono);
        } else {
            out.push_str(&mag);
            out.push('*');
            out.push_str(&mono);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&RingElement> for &RingElement {
            type Output = RingElement;
            fn $method(self, rhs: &RingElement) -> RingElement {
                self.$checked(rhs).expect("ring operation on mixed rings")
            }
        }
        impl $tr<RingElement> for RingElement {
            type Output = RingElement;
            fn $method(self, rhs: RingElement) -> RingElement {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&RingElement> for RingElement {
            type Output = RingElement;
            fn $method(self, rhs: &RingElement) -> RingElement {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        self.with(self.ring.neg_v(&self.value))
    }
}

impl Neg for RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3e2() -> Ring {
        Ring::truncated(BaseField::Prime(3), 2).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let r = f3e2();
        let one_plus = r.poly(&[1, 1]).unwrap();
        let one_minus = r.poly(&[1, -1]).unwrap();
        assert!((&one_plus * &one_minus).is_one());
        let f5 = Ring::prime_field(5).unwrap();
        assert_eq!(f5.from_i64(3) * f5.from_i64(4), f5.from_i64(2));
        let z25 = Ring::prime_power(5, 2).unwrap();
        assert!((z25.from_i64(5) * z25.from_i64(5)).is_zero());
    }

    #[test]
    fn inverses() {
        let r = f3e2();
        assert_eq!(r.poly(&[1, -1]).unwrap().inv().unwrap(), r.poly(&[1, 1]).unwrap());
        let f5 = Ring::prime_field(5).unwrap();
        assert_eq!(f5.from_i64(3).inv().unwrap(), f5.from_i64(2));
        assert!(matches!(r.poly(&[0, 1]).unwrap().inv(), Err(Error::NonUnit(_))));
    }

    #[test]
    fn residues() {
        let r = f3e2();
        assert_eq!(r.poly(&[1, 2]).unwrap().residue(), Ring::prime_field(3).unwrap().one());
    }

    #[test]
    fn derivative_examples() {
        let r = f3e2();
        assert_eq!(r.poly(&[1, 2]).unwrap().d_epsilon().unwrap(), r.from_i64(2));
        let q = Ring::truncated(BaseField::Rationals, 3).unwrap();
        assert_eq!(q.poly(&[0, 0, 1]).unwrap().d_epsilon().unwrap(), q.poly(&[0, 2]).unwrap());
        assert!(q.from_i64(5).d_epsilon().unwrap().is_zero());
        let z = Ring::prime_power(5, 2).unwrap();
        assert!(matches!(z.one().d_epsilon(), Err(Error::UnsupportedRing { .. })));
    }

    #[test]
    fn display_forms() {
        let r = f3e2();
        assert_eq!(r.poly(&[1, 1]).unwrap().to_string(), "1+e");
        assert_eq!(r.poly(&[2, 2]).unwrap().to_string(), "2+2*e");
        assert_eq!(r.zero().to_string(), "0");
        let q = Ring::truncated(BaseField::Rationals, 3).unwrap();
        assert_eq!(q.poly(&[1, -1, 3]).unwrap().to_string(), "1-e+3*e^2");
        assert_eq!(q.poly(&[0, -1]).unwrap().to_string(), "-e");
    }

    #[test]
    fn nilpotency_orders() {
        let r = Ring::truncated(BaseField::Prime(5), 3).unwrap();
        assert_eq!(r.poly(&[0, 1]).unwrap().nilpotency_order(), Some(3));
        assert_eq!(r.poly(&[0, 0, 4]).unwrap().nilpotency_order(), Some(2));
        assert_eq!(r.zero().nilpotency_order(), Some(1));
        assert_eq!(r.one().nilpotency_order(), None);
        let z = Ring::prime_power(2, 3).unwrap();
        assert_eq!(z.from_i64(2).nilpotency_order(), Some(3));
        assert_eq!(z.from_i64(4).nilpotency_order(), Some(2));
    }

    #[test]
    fn mixed_rings_are_rejected() {
        let a = Ring::prime_field(3).unwrap().one();
        let b = Ring::prime_field(5).unwrap().one();
        assert!(matches!(a.checked_add(&b), Err(Error::MixedRings(..))));
    }
}
