//! Local Artinian coefficient rings: prime fields, the rationals, truncated
//! polynomial rings `k[e]/(e^m)` and `Z/p^m`.

mod element;
mod map;
mod scalar;

use std::fmt;
use std::sync::Arc;

use num::bigint::BigInt;

pub use element::RingElement;
pub use map::RingMap;
pub use scalar::{BaseField, Scalar};

pub(crate) use element::Value;
pub(crate) use scalar::{inv_mod, is_prime, mul_mod, reduce_bigint, reduce_i64};

use crate::error::{Error, Result};
use scalar::MAX_MODULUS;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingKind {
    PrimeField(u64),
    Rationals,
    TruncatedPoly {
        base: BaseField,
        var: String,
        order: u32,
    },
    PrimePowerResidues {
        p: u64,
        exponent: u32,
    },
}

/// A shared handle to a ring description. Cloning is cheap.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ring(Arc<RingKind>);

impl Ring {
    pub fn new(kind: RingKind) -> Result<Ring> {
        match &kind {
            RingKind::PrimeField(p) => check_prime(*p)?,
            RingKind::Rationals => {}
            RingKind::TruncatedPoly { base, var, order } => {
                if let BaseField::Prime(p) = base {
                    check_prime(*p)?;
                }
                if *order == 0 {
                    return Err(Error::InvalidRing("truncation order must be at least 1".into()));
                }
                if var.is_empty() || !var.chars().all(|c| c.is_ascii_alphabetic()) {
                    return Err(Error::InvalidRing(format!("bad generator name {var:?}")));
                }
            }
            RingKind::PrimePowerResidues { p, exponent } => {
                check_prime(*p)?;
                if *exponent == 0 {
                    return Err(Error::InvalidRing("exponent must be at least 1".into()));
                }
                let fits = p
                    .checked_pow(*exponent)
                    .is_some_and(|q| q < MAX_MODULUS);
                if !fits {
                    return Err(Error::InvalidRing(format!("{p}^{exponent} is too large")));
                }
            }
        }
        Ok(Ring(Arc::new(kind)))
    }

    pub fn prime_field(p: u64) -> Result<Ring> {
        Ring::new(RingKind::PrimeField(p))
    }

    pub fn rationals() -> Ring {
        Ring(Arc::new(RingKind::Rationals))
    }

    /// `base[e]/(e^order)` with generator named `e`.
    pub fn truncated(base: BaseField, order: u32) -> Result<Ring> {
        Ring::truncated_in(base, "e", order)
    }

    pub fn truncated_in(base: BaseField, var: &str, order: u32) -> Result<Ring> {
        Ring::new(RingKind::TruncatedPoly {
            base,
            var: var.to_string(),
            order,
        })
    }

    pub fn prime_power(p: u64, exponent: u32) -> Result<Ring> {
        Ring::new(RingKind::PrimePowerResidues { p, exponent })
    }

    pub fn kind(&self) -> &RingKind {
        &self.0
    }

    /// Characteristic of the ring (`p^m` for `Z/p^m`, `0` for rings over `Q`).
    pub fn characteristic(&self) -> u64 {
        match self.kind() {
            RingKind::PrimeField(p) => *p,
            RingKind::Rationals => 0,
            RingKind::TruncatedPoly { base, .. } => base.characteristic(),
            RingKind::PrimePowerResidues { .. } => self.modulus(),
        }
    }

    /// Least `e` with `m^e = 0`.
    pub fn nilpotency_index(&self) -> u32 {
        match self.kind() {
            RingKind::PrimeField(_) | RingKind::Rationals => 1,
            RingKind::TruncatedPoly { order, .. } => *order,
            RingKind::PrimePowerResidues { exponent, .. } => *exponent,
        }
    }

    pub fn is_field(&self) -> bool {
        self.nilpotency_index() == 1
    }

    /// Whether the residue map has a ring-homomorphism section, which the
    /// differential-form layer needs.
    pub fn supports_forms(&self) -> bool {
        !matches!(self.kind(), RingKind::PrimePowerResidues { .. })
    }

    pub fn residue_field(&self) -> BaseField {
        match self.kind() {
            RingKind::PrimeField(p) => BaseField::Prime(*p),
            RingKind::Rationals => BaseField::Rationals,
            RingKind::TruncatedPoly { base, .. } => base.clone(),
            RingKind::PrimePowerResidues { p, .. } => BaseField::Prime(*p),
        }
    }

    pub fn residue_ring(&self) -> Ring {
        match self.residue_field() {
            BaseField::Prime(p) => Ring(Arc::new(RingKind::PrimeField(p))),
            BaseField::Rationals => Ring::rationals(),
        }
    }

    /// Name of the nilpotent generator for truncated polynomial rings.
    pub fn variable(&self) -> Option<&str> {
        match self.kind() {
            RingKind::TruncatedPoly { var, .. } => Some(var),
            _ => None,
        }
    }

    pub(crate) fn modulus(&self) -> u64 {
        match self.kind() {
            RingKind::PrimePowerResidues { p, exponent } => p.pow(*exponent),
            RingKind::PrimeField(p) => *p,
            _ => 0,
        }
    }

    pub fn zero(&self) -> RingElement {
        RingElement::from_value(self.clone(), self.zero_value())
    }

    pub fn one(&self) -> RingElement {
        RingElement::from_value(self.clone(), self.one_value())
    }

    pub fn from_i64(&self, n: i64) -> RingElement {
        let v = match self.kind() {
            RingKind::PrimeField(_) | RingKind::Rationals => Value::Scalar(self.residue_field().from_i64(n)),
            RingKind::TruncatedPoly { base, order, .. } => {
                let mut c = vec![base.zero(); *order as usize];
                c[0] = base.from_i64(n);
                Value::Poly(c)
            }
            RingKind::PrimePowerResidues { .. } => Value::Residue(reduce_i64(n, self.modulus())),
        };
        RingElement::from_value(self.clone(), v)
    }

    /// `num / den`, or `NonUnit` when `den` is not invertible in the ring.
    pub fn from_fraction(&self, num: &BigInt, den: &BigInt) -> Result<RingElement> {
        match self.kind() {
            RingKind::PrimePowerResidues { .. } => {
                let m = self.modulus();
                let d = inv_mod(reduce_bigint(den, m), m)
                    .ok_or_else(|| Error::NonUnit(den.to_string()))?;
                let v = mul_mod(reduce_bigint(num, m), d, m);
                Ok(RingElement::from_value(self.clone(), Value::Residue(v)))
            }
            _ => {
                let s = self
                    .residue_field()
                    .from_fraction(num, den)
                    .ok_or_else(|| Error::NonUnit(den.to_string()))?;
                Ok(self.from_scalar(s))
            }
        }
    }

    pub(crate) fn from_scalar(&self, s: Scalar) -> RingElement {
        let v = match self.kind() {
            RingKind::TruncatedPoly { base, order, .. } => {
                let mut c = vec![base.zero(); *order as usize];
                c[0] = s;
                Value::Poly(c)
            }
            RingKind::PrimePowerResidues { .. } => match s {
                Scalar::Mod(v) => Value::Residue(v),
                Scalar::Rat(_) => unreachable!("Z/p^m has a prime residue field"),
            },
            _ => Value::Scalar(s),
        };
        RingElement::from_value(self.clone(), v)
    }

    /// The generator `e` of a truncated polynomial ring, or `p` in `Z/p^m`.
    /// `None` for fields.
    pub fn maximal_ideal_generator(&self) -> Option<RingElement> {
        match self.kind() {
            RingKind::TruncatedPoly { base, order, .. } if *order > 1 => {
                let mut c = vec![base.zero(); *order as usize];
                c[1] = base.one();
                Some(RingElement::from_value(self.clone(), Value::Poly(c)))
            }
            RingKind::PrimePowerResidues { p, exponent } if *exponent > 1 => {
                Some(RingElement::from_value(self.clone(), Value::Residue(*p)))
            }
            _ => None,
        }
    }

    /// Element `sum c_i e^i` of a truncated polynomial ring. Missing
    /// coefficients are zero; coefficients beyond the order are dropped.
    pub fn poly(&self, coeffs: &[i64]) -> Result<RingElement> {
        match self.kind() {
            RingKind::TruncatedPoly { base, order, .. } => {
                let mut c = vec![base.zero(); *order as usize];
                for (slot, &x) in c.iter_mut().zip(coeffs) {
                    *slot = base.from_i64(x);
                }
                Ok(RingElement::from_value(self.clone(), Value::Poly(c)))
            }
            _ => Err(Error::UnsupportedRing {
                op: "poly",
                ring: self.to_string(),
            }),
        }
    }

    pub fn from_scalars(&self, coeffs: Vec<Scalar>) -> Result<RingElement> {
        match self.kind() {
            RingKind::TruncatedPoly { base, order, .. } => {
                if coeffs.len() > *order as usize || !coeffs.iter().all(|c| base.contains(c)) {
                    return Err(Error::InvalidRing(format!("coefficients do not fit {self}")));
                }
                let mut c = coeffs;
                c.resize(*order as usize, base.zero());
                Ok(RingElement::from_value(self.clone(), Value::Poly(c)))
            }
            _ => Err(Error::UnsupportedRing {
                op: "from_scalars",
                ring: self.to_string(),
            }),
        }
    }

    /// Section of the residue map: `k -> A`. On `Z/p^m` this picks the
    /// least non-negative representative, which is not multiplicative.
    pub fn lift(&self, c: &RingElement) -> Result<RingElement> {
        let k = self.residue_ring();
        if c.ring() != &k {
            return Err(Error::MixedRings(c.ring().to_string(), k.to_string()));
        }
        match c.value() {
            Value::Scalar(s) => Ok(self.from_scalar(s.clone())),
            _ => unreachable!("residue rings are fields"),
        }
    }

    /// Every element, for finite rings small enough to enumerate.
    pub fn elements(&self) -> Option<Vec<RingElement>> {
        const LIMIT: u64 = 1 << 16;
        match self.kind() {
            RingKind::Rationals => None,
            RingKind::TruncatedPoly { base: BaseField::Rationals, .. } => None,
            RingKind::PrimeField(p) => {
                if *p > LIMIT {
                    return None;
                }
                Some((0..*p).map(|v| self.from_scalar(Scalar::Mod(v))).collect())
            }
            RingKind::PrimePowerResidues { .. } => {
                let m = self.modulus();
                if m > LIMIT {
                    return None;
                }
                Some(
                    (0..m)
                        .map(|v| RingElement::from_value(self.clone(), Value::Residue(v)))
                        .collect(),
                )
            }
            RingKind::TruncatedPoly {
                base: BaseField::Prime(p),
                order,
                ..
            } => {
                let total = p.checked_pow(*order).filter(|&n| n <= LIMIT)?;
                let order = *order as usize;
                let out = (0..total)
                    .map(|mut n| {
                        let mut c = Vec::with_capacity(order);
                        for _ in 0..order {
                            c.push(Scalar::Mod(n % p));
                            n /= p;
                        }
                        RingElement::from_value(self.clone(), Value::Poly(c))
                    })
                    .collect();
                Some(out)
            }
        }
    }

    pub(crate) fn zero_value(&self) -> Value {
        match self.kind() {
            RingKind::TruncatedPoly { base, order, .. } => Value::Poly(vec![base.zero(); *order as usize]),
            RingKind::PrimePowerResidues { .. } => Value::Residue(0),
            _ => Value::Scalar(self.residue_field().zero()),
        }
    }

    pub(crate) fn one_value(&self) -> Value {
        self.from_i64(1).into_value()
    }
}

fn check_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::InvalidRing(format!("{p} is not prime")));
    }
    if p >= MAX_MODULUS {
        return Err(Error::InvalidRing(format!("prime {p} is too large")));
    }
    Ok(())
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            RingKind::PrimeField(p) => write!(f, "F{p}"),
            RingKind::Rationals => f.write_str("Q"),
            RingKind::TruncatedPoly { base, var, order } => write!(f, "{base}[{var}]/({var}^{order})"),
            RingKind::PrimePowerResidues { p, exponent } => write!(f, "Z/{}", p.pow(*exponent)),
        }
    }
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariants_of_kinds() {
        let r = Ring::truncated(BaseField::Prime(3), 2).unwrap();
        assert_eq!(r.nilpotency_index(), 2);
        assert_eq!(r.characteristic(), 3);
        assert!(r.supports_forms());
        let z = Ring::prime_power(5, 2).unwrap();
        assert_eq!(z.nilpotency_index(), 2);
        assert_eq!(z.characteristic(), 25);
        assert!(!z.supports_forms());
        assert_eq!(z.residue_ring(), Ring::prime_field(5).unwrap());
        assert!(Ring::rationals().is_field());
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(Ring::prime_field(4).is_err());
        assert!(Ring::truncated(BaseField::Prime(3), 0).is_err());
        assert!(Ring::prime_power(1, 2).is_err());
        assert!(Ring::prime_power(2, 70).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(Ring::truncated(BaseField::Rationals, 3).unwrap().to_string(), "Q[e]/(e^3)");
        assert_eq!(Ring::prime_power(5, 2).unwrap().to_string(), "Z/25");
        assert_eq!(Ring::prime_field(7).unwrap().to_string(), "F7");
    }

    #[test]
    fn enumeration() {
        let r = Ring::truncated(BaseField::Prime(2), 3).unwrap();
        let all = r.elements().unwrap();
        assert_eq!(all.len(), 8);
        assert_eq!(all.iter().filter(|x| x.is_unit()).count(), 4);
        assert!(Ring::rationals().elements().is_none());
    }

    #[test]
    fn lift_and_residue() {
        let r = Ring::truncated(BaseField::Rationals, 3).unwrap();
        let two = Ring::rationals().from_i64(2);
        let lifted = r.lift(&two).unwrap();
        assert_eq!(lifted, r.from_i64(2));
        assert_eq!(lifted.residue(), two);
        let z = Ring::prime_power(5, 2).unwrap();
        assert_eq!(z.from_i64(7).residue(), Ring::prime_field(5).unwrap().from_i64(2));
    }
}
