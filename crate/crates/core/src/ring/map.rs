use std::fmt;

use super::{Ring, RingElement, RingKind, Scalar, Value};
use crate::error::{Error, Result};

/// A local homomorphism between supported coefficient rings.
#[derive(Clone, PartialEq, Eq)]
pub enum RingMap {
    /// `A -> k`.
    Residue { source: Ring },
    /// `k[e]/(e^m) -> k[e']/(e'^m')` determined by the image of `e`.
    Substitution { source: Ring, image: RingElement },
    /// `Z/p^m -> Z/p^m'` with `m' <= m`.
    Truncation { source: Ring, target: Ring },
}

impl RingMap {
    pub fn residue(source: &Ring) -> RingMap {
        RingMap::Residue {
            source: source.clone(),
        }
    }

    /// `e -> image`. The image must be nilpotent of order at most the
    /// truncation order of the source, over the same base field.
    pub fn substitution(source: &Ring, image: RingElement) -> Result<RingMap> {
        let RingKind::TruncatedPoly { base, order, .. } = source.kind() else {
            return Err(Error::NotAHomomorphism(format!("{source} has no generator to substitute")));
        };
        let target = image.ring();
        if target.residue_field() != *base || matches!(target.kind(), RingKind::PrimePowerResidues { .. }) {
            return Err(Error::NotAHomomorphism(format!("{source} -> {target} changes the base field")));
        }
        if image.is_unit() {
            return Err(Error::NotAHomomorphism(format!("image {image} of the generator is not nilpotent")));
        }
        if !image.pow(*order as i64)?.is_zero() {
            return Err(Error::NotAHomomorphism(format!(
                "image {image} does not satisfy the relation of {source}"
            )));
        }
        Ok(RingMap::Substitution {
            source: source.clone(),
            image,
        })
    }

    /// `k[e]/(e^m) -> k[e]/(e^order)` with `e -> e`, for `order <= m`.
    pub fn reduce_order(source: &Ring, order: u32) -> Result<RingMap> {
        let RingKind::TruncatedPoly { base, var, order: m } = source.kind() else {
            return Err(Error::NotAHomomorphism(format!("{source} is not a truncated polynomial ring")));
        };
        if order == 0 || order > *m {
            return Err(Error::NotAHomomorphism(format!("cannot reduce {source} to order {order}")));
        }
        let target = Ring::truncated_in(base.clone(), var, order)?;
        let image = target
            .maximal_ideal_generator()
            .unwrap_or_else(|| target.zero());
        RingMap::substitution(source, image)
    }

    pub fn truncation(source: &Ring, exponent: u32) -> Result<RingMap> {
        let RingKind::PrimePowerResidues { p, exponent: m } = source.kind() else {
            return Err(Error::NotAHomomorphism(format!("{source} is not Z/p^m")));
        };
        if exponent == 0 || exponent > *m {
            return Err(Error::NotAHomomorphism(format!("cannot truncate {source} to exponent {exponent}")));
        }
        let target = if exponent == 1 {
            Ring::prime_field(*p)?
        } else {
            Ring::prime_power(*p, exponent)?
        };
        Ok(RingMap::Truncation {
            source: source.clone(),
            target,
        })
    }

    pub fn source(&self) -> &Ring {
        match self {
            RingMap::Residue { source } | RingMap::Substitution { source, .. } | RingMap::Truncation { source, .. } => {
                source
            }
        }
    }

    pub fn target(&self) -> Ring {
        match self {
            RingMap::Residue { source } => source.residue_ring(),
            RingMap::Substitution { image, .. } => image.ring().clone(),
            RingMap::Truncation { target, .. } => target.clone(),
        }
    }

    pub fn apply(&self, x: &RingElement) -> Result<RingElement> {
        if x.ring() != self.source() {
            return Err(Error::MixedRings(x.ring().to_string(), self.source().to_string()));
        }
        Ok(match self {
            RingMap::Residue { .. } => x.residue(),
            RingMap::Substitution { image, .. } => {
                let target = image.ring();
                let coeffs = x.poly_coefficients().expect("truncated polynomial");
                let mut acc = target.zero();
                for c in coeffs.iter().rev() {
                    acc = &(&acc * image) + &target.from_scalar(c.clone());
                }
                acc
            }
            RingMap::Truncation { target, .. } => {
                let v = x.residue_class().expect("Z/p^m element");
                let m = target.modulus();
                let value = match target.kind() {
                    RingKind::PrimeField(_) => Value::Scalar(Scalar::Mod(v % m)),
                    _ => Value::Residue(v % m),
                };
                RingElement::from_value(target.clone(), value)
            }
        })
    }
}

impl fmt::Display for RingMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingMap::Residue { source } => write!(f, "{source} -> {}", source.residue_ring()),
            RingMap::Substitution { source, image } => {
                let var = source.variable().unwrap_or("e");
                write!(f, "{source} -> {}: {var} |-> {image}", image.ring())
            }
            RingMap::Truncation { source, target } => write!(f, "{source} -> {target}"),
        }
    }
}

impl fmt::Debug for RingMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingMap({self})")
    }
}
