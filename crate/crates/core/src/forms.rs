//! Kähler one- and two-forms over `A((t))` relative to `k`, and their residues.
//!
//! For `A = k[e]/(e^m)` the module `Omega^1_A` is `A de` modulo
//! `m e^(m-1) de`; two-forms are written `h de^dt`.

use std::fmt;

use crate::error::{Error, Result};
use crate::ring::{Ring, RingElement, RingKind, RingMap, Value};
use crate::series::LaurentSeries;
use crate::symbol::{contou_carrere, kato_residue, MHatElement};

fn check_forms(ring: &Ring) -> Result<()> {
    if ring.supports_forms() {
        Ok(())
    } else {
        Err(Error::UnsupportedRing {
            op: "differential forms",
            ring: ring.to_string(),
        })
    }
}

/// Number of leading `e`-coefficients that survive in `Omega^1_A`.
fn kept_terms(ring: &Ring) -> usize {
    match ring.kind() {
        RingKind::TruncatedPoly { base, order, .. } => {
            let m = *order as u64;
            if m == 1 {
                0
            } else {
                let p = base.characteristic();
                if p != 0 && m % p == 0 {
                    m as usize
                } else {
                    m as usize - 1
                }
            }
        }
        _ => 0,
    }
}

fn reduce_value(ring: &Ring, v: &Value) -> Value {
    let keep = kept_terms(ring);
    match v {
        Value::Poly(c) => {
            let base = ring.residue_field();
            let c = c
                .iter()
                .enumerate()
                .map(|(i, s)| if i < keep { s.clone() } else { base.zero() })
                .collect();
            Value::Poly(c)
        }
        _ => ring.zero_value(),
    }
}

fn reduce_element(a: &RingElement) -> RingElement {
    RingElement::from_value(a.ring().clone(), reduce_value(a.ring(), a.value()))
}

fn reduce_series(f: &LaurentSeries) -> LaurentSeries {
    let ring = f.ring();
    let start = f.support().map_or(0, |(lo, _)| lo);
    let coeffs = (start..f.end())
        .map(|i| reduce_value(ring, &f.value_at(i).expect("stored")))
        .collect();
    LaurentSeries::from_values(ring.clone(), start, coeffs, f.precision())
}

fn d_epsilon_series(f: &LaurentSeries) -> Result<LaurentSeries> {
    let ring = f.ring();
    if !matches!(ring.kind(), RingKind::TruncatedPoly { .. }) {
        return Ok(match f.precision() {
            Some(n) => LaurentSeries::big_o(ring, n),
            None => LaurentSeries::zero(ring),
        });
    }
    let start = f.support().map_or(0, |(lo, _)| lo);
    let mut coeffs = Vec::new();
    for i in start..f.end() {
        coeffs.push(f.coeff(i).expect("stored").d_epsilon()?);
    }
    LaurentSeries::new(ring, start, coeffs, f.precision())
}

fn component(f: &LaurentSeries, var: &str, suffix: &str) -> Option<String> {
    if f.is_zero() && f.is_exact() {
        return None;
    }
    let s = f.display_in(var);
    let single = f.terms().count() <= 1 && f.is_exact() && !s.starts_with('-') && !s.contains(['+', ' ']);
    Some(if s == "1" {
        suffix.to_string()
    } else if single {
        format!("{s}*{suffix}")
    } else {
        format!("({s})*{suffix}")
    })
}

fn eps_name(ring: &Ring) -> &str {
    ring.variable().unwrap_or("e")
}

/// An element `c de` of `Omega^1_A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AOneForm {
    coeff: RingElement,
}

impl AOneForm {
    pub fn new(coeff: RingElement) -> Result<AOneForm> {
        check_forms(coeff.ring())?;
        Ok(AOneForm {
            coeff: reduce_element(&coeff),
        })
    }

    pub fn zero(ring: &Ring) -> Result<AOneForm> {
        AOneForm::new(ring.zero())
    }

    /// `da` for `a` in `A`.
    pub fn d(a: &RingElement) -> Result<AOneForm> {
        check_forms(a.ring())?;
        if a.ring().is_field() {
            return AOneForm::zero(a.ring());
        }
        AOneForm::new(a.d_epsilon()?)
    }

    pub fn ring(&self) -> &Ring {
        self.coeff.ring()
    }

    /// The normal-form coefficient of `de`.
    pub fn coeff(&self) -> &RingElement {
        &self.coeff
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn checked_add(&self, other: &AOneForm) -> Result<AOneForm> {
        AOneForm::new(self.coeff.checked_add(&other.coeff)?)
    }

    pub fn neg(&self) -> AOneForm {
        AOneForm {
            coeff: -&self.coeff,
        }
    }

    pub fn scale(&self, a: &RingElement) -> Result<AOneForm> {
        AOneForm::new(self.coeff.checked_mul(a)?)
    }

    /// `(c de) ^ omega` for a one-form `omega` over `A((t))`.
    pub fn wedge_one_form(&self, omega: &OneForm) -> Result<TwoForm> {
        TwoForm::new(omega.dt.scale(&self.coeff)?)
    }

    /// Image under a ring map `h`: `c de -> h(c) d(h(e))`.
    pub fn map(&self, h: &RingMap) -> Result<AOneForm> {
        let target = h.target();
        check_forms(&target)?;
        let factor = differential_factor(h)?;
        AOneForm::new(h.apply(&self.coeff)?.checked_mul(&factor)?)
    }
}

/// `d(h(e)) / de'` for a ring map `h`, as an element of the target.
fn differential_factor(h: &RingMap) -> Result<RingElement> {
    match h {
        RingMap::Residue { source } => Ok(source.residue_ring().zero()),
        RingMap::Substitution { image, .. } => {
            if image.ring().is_field() {
                Ok(image.ring().zero())
            } else {
                image.d_epsilon()
            }
        }
        RingMap::Truncation { source, .. } => Err(Error::UnsupportedRing {
            op: "differential forms",
            ring: source.to_string(),
        }),
    }
}

impl fmt::Display for AOneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = format!("d{}", eps_name(self.ring()));
        let c = LaurentSeries::constant(&self.coeff);
        match component(&c, "t", &d) {
            Some(s) => f.write_str(&s),
            None => f.write_str("0"),
        }
    }
}

/// `f dt + g de` over `A((t))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneForm {
    dt: LaurentSeries,
    de: LaurentSeries,
}

impl OneForm {
    pub fn new(dt: LaurentSeries, de: LaurentSeries) -> Result<OneForm> {
        check_forms(dt.ring())?;
        if dt.ring() != de.ring() {
            return Err(Error::MixedRings(dt.ring().to_string(), de.ring().to_string()));
        }
        Ok(OneForm {
            de: reduce_series(&de),
            dt,
        })
    }

    pub fn ring(&self) -> &Ring {
        self.dt.ring()
    }

    pub fn dt_part(&self) -> &LaurentSeries {
        &self.dt
    }

    pub fn de_part(&self) -> &LaurentSeries {
        &self.de
    }

    pub fn checked_add(&self, other: &OneForm) -> Result<OneForm> {
        OneForm::new(self.dt.checked_add(&other.dt)?, self.de.checked_add(&other.de)?)
    }

    /// Multiply by a function.
    pub fn mul_series(&self, f: &LaurentSeries) -> Result<OneForm> {
        OneForm::new(self.dt.checked_mul(f)?, self.de.checked_mul(f)?)
    }

    pub fn agrees_with(&self, other: &OneForm) -> bool {
        self.dt.agrees_with(&other.dt) && self.de.agrees_with(&other.de)
    }

    pub fn map(&self, h: &RingMap) -> Result<OneForm> {
        check_forms(&h.target())?;
        let factor = differential_factor(h)?;
        OneForm::new(
            self.dt.map_coefficients(h)?,
            self.de.map_coefficients(h)?.scale(&factor)?,
        )
    }
}

impl fmt::Display for OneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = format!("d{}", eps_name(self.ring()));
        let parts: Vec<String> = [component(&self.dt, "t", "dt"), component(&self.de, "t", &d)]
            .into_iter()
            .flatten()
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// `h de^dt` over `A((t))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoForm {
    h: LaurentSeries,
}

impl TwoForm {
    pub fn new(h: LaurentSeries) -> Result<TwoForm> {
        check_forms(h.ring())?;
        Ok(TwoForm { h: reduce_series(&h) })
    }

    pub fn ring(&self) -> &Ring {
        self.h.ring()
    }

    pub fn coefficient(&self) -> &LaurentSeries {
        &self.h
    }

    pub fn is_zero(&self) -> bool {
        self.h.is_zero()
    }

    pub fn checked_add(&self, other: &TwoForm) -> Result<TwoForm> {
        TwoForm::new(self.h.checked_add(&other.h)?)
    }

    pub fn scale(&self, a: &RingElement) -> Result<TwoForm> {
        TwoForm::new(self.h.scale(a)?)
    }

    pub fn map(&self, h: &RingMap) -> Result<TwoForm> {
        check_forms(&h.target())?;
        let factor = differential_factor(h)?;
        TwoForm::new(self.h.map_coefficients(h)?.scale(&factor)?)
    }
}

impl fmt::Display for TwoForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = format!("d{}^dt", eps_name(self.ring()));
        match component(&self.h, "t", &d) {
            Some(s) => f.write_str(&s),
            None => f.write_str("0"),
        }
    }
}

/// `df = f' dt + (d f / de) de`.
pub fn d_series(f: &LaurentSeries) -> Result<OneForm> {
    check_forms(f.ring())?;
    OneForm::new(f.derivative(), d_epsilon_series(f)?)
}

/// `f^-1 df`.
pub fn dlog(f: &LaurentSeries) -> Result<OneForm> {
    d_series(f)?.mul_series(&f.inverse()?)
}

/// `a^-1 da` in `Omega^1_A`.
pub fn dlog_a(a: &RingElement) -> Result<AOneForm> {
    AOneForm::d(a)?.scale(&a.inv()?)
}

/// `alpha ^ beta` in the normal form `h de^dt`.
pub fn wedge(alpha: &OneForm, beta: &OneForm) -> Result<TwoForm> {
    let h = alpha.de.checked_mul(&beta.dt)? - alpha.dt.checked_mul(&beta.de)?;
    TwoForm::new(h)
}

pub fn dlog2(f: &LaurentSeries, g: &LaurentSeries) -> Result<TwoForm> {
    wedge(&dlog(f)?, &dlog(g)?)
}

fn coefficient_of_inverse_t(f: &LaurentSeries) -> Result<RingElement> {
    f.coeff(-1).ok_or_else(|| {
        Error::IndeterminateAtPrecision(format!("the coefficient of t^-1 in {f} lies beyond the precision"))
    })
}

/// Coefficient of `dt/t` in a one-form.
pub fn res1(alpha: &OneForm) -> Result<RingElement> {
    coefficient_of_inverse_t(&alpha.dt)
}

/// Coefficient of `de^dt/t`, as an element of `Omega^1_A`.
pub fn res2(omega: &TwoForm) -> Result<AOneForm> {
    AOneForm::new(coefficient_of_inverse_t(&omega.h)?)
}

/// `Res^2(dlog^2(f, g))`, checked against `dlog <f, g>`.
pub fn res2_dlog2(f: &LaurentSeries, g: &LaurentSeries) -> Result<AOneForm> {
    let (residue, symbol) = dlog_square(f, g)?;
    if residue != symbol {
        return Err(Error::SquareMismatch {
            residue: residue.to_string(),
            symbol: symbol.to_string(),
        });
    }
    Ok(residue)
}

/// Both routes around the square: `Res^2(dlog^2(f, g))` and `dlog <f, g>`.
pub fn dlog_square(f: &LaurentSeries, g: &LaurentSeries) -> Result<(AOneForm, AOneForm)> {
    let residue = res2(&dlog2(f, g)?)?;
    let symbol = dlog_a(&contou_carrere(f, g)?)?;
    Ok((residue, symbol))
}

/// Pull back along `t -> sigma(t)`, fixing `A`.
pub fn form_substitute(sigma: &LaurentSeries, omega: &OneForm) -> Result<OneForm> {
    sigma.check_uniformizer()?;
    let ds = d_series(sigma)?;
    let f = omega.dt.substitute(sigma)?;
    let g = omega.de.substitute(sigma)?;
    OneForm::new(f.checked_mul(&ds.dt)?, g.checked_add(&f.checked_mul(&ds.de)?)?)
}

pub fn two_form_substitute(sigma: &LaurentSeries, omega: &TwoForm) -> Result<TwoForm> {
    sigma.check_uniformizer()?;
    TwoForm::new(omega.h.substitute(sigma)?.checked_mul(&sigma.derivative())?)
}

/// An element `c dx/x + omega` of the logarithmic differentials of
/// `k[x]/(x^m)`, with `c` an integer image and `omega` regular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KatoDifferential {
    pub log: RingElement,
    pub regular: AOneForm,
}

impl fmt::Display for KatoDifferential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = eps_name(self.log.ring());
        match (self.log.is_zero(), self.regular.is_zero()) {
            (true, _) => write!(f, "{}", self.regular),
            (false, true) => write!(f, "({})*d{x}/{x}", self.log),
            (false, false) => write!(f, "({})*d{x}/{x} + {}", self.log, self.regular),
        }
    }
}

/// Both routes around the square for Kato's residue symbol at level `m`:
/// the residue of `dlog^2(f, g)` in `z` and `dlog {f, g}`. The `dx/x` part
/// of the residue side is computed from residues of `dlog` of the unit parts.
pub fn kato_square(f: &MHatElement, g: &MHatElement) -> Result<(KatoDifferential, KatoDifferential)> {
    let ring = f.ring().clone();
    let du1 = dlog(f.unit())?;
    let du2 = dlog(g.unit())?;
    let log = ring.from_i64(f.exponent()) * res1(&du2)? - ring.from_i64(g.exponent()) * res1(&du1)?;
    let residue = KatoDifferential {
        log,
        regular: res2(&wedge(&du1, &du2)?)?,
    };
    let value = kato_residue(f, g)?;
    let symbol = KatoDifferential {
        log: ring.from_i64(value.exponent),
        regular: dlog_a(&value.unit)?,
    };
    Ok((residue, symbol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::BaseField;

    fn f3e2() -> Ring {
        Ring::truncated(BaseField::Prime(3), 2).unwrap()
    }

    fn eps(r: &Ring) -> RingElement {
        r.maximal_ideal_generator().unwrap()
    }

    #[test]
    fn normal_form_of_one_forms() {
        let r = f3e2();
        // 2 e de = 0 in F3[e]/(e^2) since 2 is invertible
        let w = AOneForm::new(r.poly(&[1, 2]).unwrap()).unwrap();
        assert_eq!(w, AOneForm::new(r.one()).unwrap());
        // in F2[e]/(e^2) no relation
        let r2 = Ring::truncated(BaseField::Prime(2), 2).unwrap();
        let w = AOneForm::new(eps(&r2)).unwrap();
        assert!(!w.is_zero());
        assert!(AOneForm::new(Ring::rationals().one()).unwrap().is_zero());
        let z = Ring::prime_power(3, 2).unwrap();
        assert!(matches!(AOneForm::new(z.one()), Err(Error::UnsupportedRing { .. })));
    }

    #[test]
    fn d_series_examples() {
        let q = Ring::truncated(BaseField::Rationals, 2).unwrap();
        let t2 = LaurentSeries::monomial(&q.one(), 2);
        let d = d_series(&t2).unwrap();
        assert_eq!(d.dt_part(), &LaurentSeries::monomial(&q.from_i64(2), 1));
        assert!(d.de_part().is_zero());

        let r = Ring::truncated(BaseField::Rationals, 3).unwrap();
        let et = LaurentSeries::monomial(&eps(&r), 1);
        let d = d_series(&et).unwrap();
        assert_eq!(d.dt_part(), &LaurentSeries::constant(&eps(&r)));
        assert_eq!(d.de_part(), &LaurentSeries::t(&r));
        assert_eq!(d.to_string(), "e*dt + t*de");

        let c = LaurentSeries::constant(&r.from_i64(7));
        let d = d_series(&c).unwrap();
        assert!(d.dt_part().is_zero() && d.de_part().is_zero());
    }

    #[test]
    fn dlog_examples() {
        let r = f3e2();
        let d = dlog(&LaurentSeries::t(&r)).unwrap();
        assert_eq!(d.dt_part(), &LaurentSeries::monomial(&r.one(), -1));

        let q = Ring::rationals();
        let f = LaurentSeries::new(&q, 0, vec![q.one(), -q.one()], Some(4)).unwrap();
        let d = dlog(&f).unwrap();
        let expected = LaurentSeries::new(&q, 0, vec![-q.one(), -q.one(), -q.one()], Some(3)).unwrap();
        assert_eq!(d.dt_part(), &expected);

        let w = dlog_a(&r.poly(&[1, -1]).unwrap()).unwrap();
        assert_eq!(w, AOneForm::new(r.poly(&[2, 2]).unwrap()).unwrap());
    }

    #[test]
    fn wedge_examples() {
        let r = f3e2();
        let dt = OneForm::new(LaurentSeries::one(&r), LaurentSeries::zero(&r)).unwrap();
        let de = OneForm::new(LaurentSeries::zero(&r), LaurentSeries::one(&r)).unwrap();
        let w = wedge(&dt, &de).unwrap();
        assert_eq!(w.coefficient(), &-LaurentSeries::one(&r));
        assert!(dlog2(&LaurentSeries::t(&r), &LaurentSeries::t(&r)).unwrap().is_zero());
    }

    #[test]
    fn residue_examples() {
        let q = Ring::truncated(BaseField::Rationals, 3).unwrap();
        let dt_over_t = OneForm::new(LaurentSeries::monomial(&q.one(), -1), LaurentSeries::zero(&q)).unwrap();
        assert!(res1(&dt_over_t).unwrap().is_one());
        for n in 1..5 {
            let d = d_series(&LaurentSeries::monomial(&q.one(), -n)).unwrap();
            assert!(res1(&d).unwrap().is_zero());
        }
        let w = TwoForm::new(LaurentSeries::monomial(&q.one(), -1)).unwrap();
        assert_eq!(res2(&w).unwrap(), AOneForm::new(q.one()).unwrap());
        assert_eq!(res2(&w).unwrap().to_string(), "de");
    }

    #[test]
    fn square_examples() {
        let r = f3e2();
        let e = eps(&r);
        let f = LaurentSeries::monomial(&(r.one() + &e), 1);
        let g = LaurentSeries::monomial(&r.from_i64(2), 1);
        assert_eq!(res2_dlog2(&f, &g).unwrap(), AOneForm::new(r.poly(&[1, 2]).unwrap()).unwrap());

        let f = (LaurentSeries::one(&r) - LaurentSeries::t(&r)).with_precision(6);
        let g = LaurentSeries::one(&r) - LaurentSeries::monomial(&e, -1);
        assert_eq!(res2_dlog2(&f, &g).unwrap(), AOneForm::new(r.poly(&[2, 2]).unwrap()).unwrap());

        let a = r.poly(&[2, 1]).unwrap();
        let b = r.poly(&[1, 1]).unwrap();
        let f = (LaurentSeries::one(&r) - LaurentSeries::monomial(&a, 1)).with_precision(6);
        let g = (LaurentSeries::one(&r) - LaurentSeries::monomial(&b, 1)).with_precision(6);
        assert!(res2_dlog2(&f, &g).unwrap().is_zero());
    }

    #[test]
    fn substitution_keeps_residues() {
        let q = Ring::rationals();
        let sigma = LaurentSeries::new(&q, 1, vec![q.one(), q.one()], None).unwrap();
        let dt_over_t = OneForm::new(LaurentSeries::monomial(&q.one(), -1), LaurentSeries::zero(&q)).unwrap();
        let pulled = form_substitute(&sigma.with_precision(8), &dt_over_t).unwrap();
        assert!(res1(&pulled).unwrap().is_one());
    }

    #[test]
    fn kato_square_with_valuation() {
        let a = Ring::truncated_in(BaseField::Prime(5), "x", 3).unwrap();
        let x = eps(&a);
        let f = MHatElement::new(1, LaurentSeries::monomial(&(a.one() + &x), 2)).unwrap();
        let g = MHatElement::new(
            -2,
            (LaurentSeries::one(&a) - LaurentSeries::monomial(&x, -1) + LaurentSeries::t(&a)).with_precision(10),
        )
        .unwrap();
        let (lhs, rhs) = kato_square(&f, &g).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.log, a.from_i64(4));
    }
}
