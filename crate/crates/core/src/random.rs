//! Random elements, units, series and rational functions for property tests
//! and verification suites.

use num::bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::forms::AOneForm;
use crate::projective::{GlobalTwoForm, SplitRationalFunction};
use crate::ring::{BaseField, Ring, RingElement, RingKind, Scalar};
use crate::series::LaurentSeries;

fn random_scalar<R: Rng + ?Sized>(base: &BaseField, rng: &mut R) -> Scalar {
    match base {
        BaseField::Prime(p) => Scalar::Mod(rng.gen_range(0..*p)),
        BaseField::Rationals => {
            let num = BigInt::from(rng.gen_range(-5i64..=5));
            let den = BigInt::from(rng.gen_range(1i64..=3));
            base.from_fraction(&num, &den).expect("nonzero denominator")
        }
    }
}

/// A uniformly random element for finite rings; small rationals otherwise.
pub fn element<R: Rng + ?Sized>(ring: &Ring, rng: &mut R) -> RingElement {
    match ring.kind() {
        RingKind::TruncatedPoly { base, order, .. } => {
            let c = (0..*order).map(|_| random_scalar(base, rng)).collect();
            ring.from_scalars(c).expect("coefficients fit")
        }
        RingKind::PrimePowerResidues { .. } => {
            let m = ring.characteristic() as i64;
            ring.from_i64(rng.gen_range(0..m))
        }
        _ => {
            let base = ring.residue_field();
            ring.from_scalar(random_scalar(&base, rng))
        }
    }
}

/// A random element of the maximal ideal (zero for fields).
pub fn nilpotent<R: Rng + ?Sized>(ring: &Ring, rng: &mut R) -> RingElement {
    match ring.kind() {
        RingKind::TruncatedPoly { base, order, .. } => {
            let mut c: Vec<Scalar> = (0..*order).map(|_| random_scalar(base, rng)).collect();
            c[0] = base.zero();
            ring.from_scalars(c).expect("coefficients fit")
        }
        RingKind::PrimePowerResidues { p, .. } => {
            let m = ring.characteristic() as i64;
            ring.from_i64(rng.gen_range(0..m / *p as i64) * *p as i64)
        }
        _ => ring.zero(),
    }
}

/// A random nonzero element of the maximal ideal, or zero for fields.
pub fn nonzero_nilpotent<R: Rng + ?Sized>(ring: &Ring, rng: &mut R) -> RingElement {
    if ring.is_field() {
        return ring.zero();
    }
    loop {
        let x = nilpotent(ring, rng);
        if !x.is_zero() {
            return x;
        }
    }
}

pub fn unit<R: Rng + ?Sized>(ring: &Ring, rng: &mut R) -> RingElement {
    loop {
        let x = element(ring, rng);
        if x.is_unit() {
            return x;
        }
    }
}

/// Shape of random unit series.
#[derive(Clone, Copy, Debug)]
pub struct SeriesShape {
    /// Winding numbers are drawn from `-max_winding..=max_winding`.
    pub max_winding: i64,
    /// Number of coefficients known above the winding index.
    pub terms: i64,
    /// Depth of the nilpotent part below the winding index.
    pub max_polar_depth: i64,
    /// Attach `O(t^(w + terms))` rather than returning a polynomial.
    pub with_precision: bool,
}

impl Default for SeriesShape {
    fn default() -> Self {
        SeriesShape {
            max_winding: 2,
            terms: 8,
            max_polar_depth: 2,
            with_precision: true,
        }
    }
}

/// `t^w (u + c_1 t + ...) + (nilpotent terms below t^w)`.
pub fn unit_series<R: Rng + ?Sized>(ring: &Ring, shape: &SeriesShape, rng: &mut R) -> LaurentSeries {
    let w = rng.gen_range(-shape.max_winding..=shape.max_winding);
    let depth = if ring.is_field() {
        0
    } else {
        rng.gen_range(0..=shape.max_polar_depth)
    };
    let mut coeffs = Vec::new();
    for _ in 0..depth {
        coeffs.push(nilpotent(ring, rng));
    }
    coeffs.push(unit(ring, rng));
    for _ in 1..shape.terms.max(1) {
        coeffs.push(element(ring, rng));
    }
    let prec = shape.with_precision.then_some(w + shape.terms.max(1));
    LaurentSeries::new(ring, w - depth, coeffs, prec).expect("same ring")
}

/// A uniformizer `c t + t^2 h` with `h` a polynomial of degree below `degree`.
pub fn uniformizer<R: Rng + ?Sized>(ring: &Ring, degree: usize, rng: &mut R) -> LaurentSeries {
    let mut coeffs = vec![unit(ring, rng)];
    for _ in 0..degree {
        coeffs.push(element(ring, rng));
    }
    LaurentSeries::new(ring, 1, coeffs, None).expect("same ring")
}

/// A split rational function with at most `max_sections` factors and
/// exponents bounded by `max_exponent` in absolute value.
pub fn split_function<R: Rng + ?Sized>(
    ring: &Ring,
    max_sections: usize,
    max_exponent: i64,
    rng: &mut R,
) -> SplitRationalFunction {
    let count = rng.gen_range(0..=max_sections);
    let mut factors = Vec::with_capacity(count);
    for _ in 0..count {
        let mut n = 0;
        while n == 0 {
            n = rng.gen_range(-max_exponent..=max_exponent);
        }
        factors.push((element(ring, rng), n));
    }
    SplitRationalFunction::new(unit(ring, rng), factors).expect("unit constant")
}

/// A simple-pole two-form with up to `max_poles` poles of distinct reduction.
pub fn simple_pole_form<R: Rng + ?Sized>(ring: &Ring, max_poles: usize, rng: &mut R) -> GlobalTwoForm {
    let k = ring.residue_ring();
    let mut residues: Vec<RingElement> = match k.elements() {
        Some(all) => all,
        None => (-20..=20).map(|n| k.from_i64(n)).collect(),
    };
    residues.shuffle(rng);
    let count = rng.gen_range(0..=max_poles.min(residues.len()));
    let poles = residues
        .into_iter()
        .take(count)
        .map(|r| {
            let s = ring.lift(&r).expect("residue field element") + nilpotent(ring, rng);
            let w = AOneForm::new(element(ring, rng)).expect("forms supported");
            (s, w)
        })
        .collect();
    GlobalTwoForm::simple(ring, poles).expect("distinct reductions")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_units_are_units() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for ring in [
            Ring::truncated(BaseField::Prime(3), 3).unwrap(),
            Ring::prime_power(5, 2).unwrap(),
            Ring::truncated(BaseField::Rationals, 2).unwrap(),
        ] {
            for _ in 0..50 {
                assert!(unit(&ring, &mut rng).is_unit());
                assert!(nilpotent(&ring, &mut rng).is_nilpotent());
                let f = unit_series(&ring, &SeriesShape::default(), &mut rng);
                assert_eq!(f.is_unit(), Ok(true));
                assert!(uniformizer(&ring, 2, &mut rng).check_uniformizer().is_ok());
            }
        }
    }
}
