//! Laurent series over a coefficient ring with explicit `O(t^N)` precision.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::ring::{Ring, RingElement, RingMap, Value};

/// An element of `A((t))` known up to `O(t^N)`, or exactly when `prec` is `None`.
///
/// Stored coefficients cover `start..start + coeffs.len()`; the first and last
/// stored coefficients are nonzero. Coefficients at indices `>= N` are unknown.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentSeries {
    ring: Ring,
    start: i64,
    coeffs: Vec<Value>,
    prec: Option<i64>,
}

fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl LaurentSeries {
    pub(crate) fn from_values(ring: Ring, start: i64, mut coeffs: Vec<Value>, prec: Option<i64>) -> LaurentSeries {
        if let Some(n) = prec {
            let keep = (n - start).clamp(0, coeffs.len() as i64) as usize;
            coeffs.truncate(keep);
        }
        while coeffs.last().is_some_and(|v| ring.is_zero_v(v)) {
            coeffs.pop();
        }
        let lead = coeffs.iter().position(|v| !ring.is_zero_v(v)).unwrap_or(coeffs.len());
        coeffs.drain(..lead);
        let start = if coeffs.is_empty() {
            prec.unwrap_or(0)
        } else {
            start + lead as i64
        };
        LaurentSeries {
            ring,
            start,
            coeffs,
            prec,
        }
    }

    /// Series with coefficients `coeffs[k]` at index `start + k`.
    pub fn new(ring: &Ring, start: i64, coeffs: Vec<RingElement>, prec: Option<i64>) -> Result<LaurentSeries> {
        let mut values = Vec::with_capacity(coeffs.len());
        for c in coeffs {
            if c.ring() != ring {
                return Err(Error::MixedRings(c.ring().to_string(), ring.to_string()));
            }
            values.push(c.into_value());
        }
        Ok(LaurentSeries::from_values(ring.clone(), start, values, prec))
    }

    pub fn zero(ring: &Ring) -> LaurentSeries {
        LaurentSeries::from_values(ring.clone(), 0, Vec::new(), None)
    }

    pub fn one(ring: &Ring) -> LaurentSeries {
        LaurentSeries::constant(&ring.one())
    }

    pub fn constant(c: &RingElement) -> LaurentSeries {
        LaurentSeries::monomial(c, 0)
    }

    /// `c * t^k`, exact.
    pub fn monomial(c: &RingElement, k: i64) -> LaurentSeries {
        LaurentSeries::from_values(c.ring().clone(), k, vec![c.value().clone()], None)
    }

    /// The variable `t`.
    pub fn t(ring: &Ring) -> LaurentSeries {
        LaurentSeries::monomial(&ring.one(), 1)
    }

    /// `O(t^n)`.
    pub fn big_o(ring: &Ring, n: i64) -> LaurentSeries {
        LaurentSeries::from_values(ring.clone(), n, Vec::new(), Some(n))
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// The precision bound `N`, or `None` for an exact Laurent polynomial.
    pub fn precision(&self) -> Option<i64> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    /// No stored nonzero coefficient: the exact zero or `O(t^N)`.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Index of the first nonzero coefficient. For `O(t^N)` this is `N`;
    /// for the exact zero it is `None`.
    pub fn lowest_index(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            self.prec
        } else {
            Some(self.start)
        }
    }

    /// One past the index of the last stored nonzero coefficient.
    pub fn end(&self) -> i64 {
        self.start + self.coeffs.len() as i64
    }

    /// Lowest and highest stored nonzero indices.
    pub fn support(&self) -> Option<(i64, i64)> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some((self.start, self.end() - 1))
        }
    }

    pub(crate) fn value_at(&self, i: i64) -> Option<Value> {
        if self.prec.is_some_and(|n| i >= n) {
            return None;
        }
        let k = i - self.start;
        if k < 0 || k >= self.coeffs.len() as i64 {
            Some(self.ring.zero_value())
        } else {
            Some(self.coeffs[k as usize].clone())
        }
    }

    /// Coefficient of `t^i`, or `None` if it lies beyond the precision.
    pub fn coeff(&self, i: i64) -> Option<RingElement> {
        self.value_at(i).map(|v| RingElement::from_value(self.ring.clone(), v))
    }

    /// Nonzero stored coefficients in increasing index order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, RingElement)> + '_ {
        self.coeffs.iter().enumerate().filter_map(move |(k, v)| {
            if self.ring.is_zero_v(v) {
                None
            } else {
                Some((self.start + k as i64, RingElement::from_value(self.ring.clone(), v.clone())))
            }
        })
    }

    fn check_same(&self, other: &LaurentSeries) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::MixedRings(self.ring.to_string(), other.ring.to_string()));
        }
        Ok(())
    }

    pub fn with_precision(&self, n: i64) -> LaurentSeries {
        let prec = min_prec(self.prec, Some(n));
        LaurentSeries::from_values(self.ring.clone(), self.start, self.coeffs.clone(), prec)
    }

    /// Whether both series agree on every index known to both.
    pub fn agrees_with(&self, other: &LaurentSeries) -> bool {
        if self.ring != other.ring {
            return false;
        }
        let bound = min_prec(self.prec, other.prec);
        let lo = self.start.min(other.start);
        let hi = self.end().max(other.end());
        let hi = bound.map_or(hi, |b| hi.min(b));
        (lo..hi).all(|i| self.value_at(i) == other.value_at(i))
    }

    pub fn checked_add(&self, other: &LaurentSeries) -> Result<LaurentSeries> {
        self.check_same(other)?;
        let prec = min_prec(self.prec, other.prec);
        if self.coeffs.is_empty() {
            return Ok(other.with_prec_opt(prec));
        }
        if other.coeffs.is_empty() {
            return Ok(self.with_prec_opt(prec));
        }
        let lo = self.start.min(other.start);
        let hi = self.end().max(other.end());
        let hi = prec.map_or(hi, |n| hi.min(n));
        let zero = self.ring.zero_value();
        let coeffs = (lo..hi.max(lo))
            .map(|i| {
                let a = self.stored(i).unwrap_or(&zero);
                let b = other.stored(i).unwrap_or(&zero);
                self.ring.add_v(a, b)
            })
            .collect();
        Ok(LaurentSeries::from_values(self.ring.clone(), lo, coeffs, prec))
    }

    fn with_prec_opt(&self, prec: Option<i64>) -> LaurentSeries {
        match prec {
            Some(n) => self.with_precision(n),
            None => self.clone(),
        }
    }

    fn stored(&self, i: i64) -> Option<&Value> {
        let k = i - self.start;
        if k < 0 {
            None
        } else {
            self.coeffs.get(k as usize)
        }
    }

    pub fn checked_sub(&self, other: &LaurentSeries) -> Result<LaurentSeries> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &LaurentSeries) -> Result<LaurentSeries> {
        self.check_same(other)?;
        let (lf, lg) = match (self.lowest_index(), other.lowest_index()) {
            (None, _) | (_, None) => return Ok(LaurentSeries::zero(&self.ring)),
            (Some(a), Some(b)) => (a, b),
        };
        let prec = min_prec(self.prec.map(|n| n + lg), other.prec.map(|n| n + lf));
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Ok(LaurentSeries::from_values(self.ring.clone(), 0, Vec::new(), prec));
        }
        let lo = self.start + other.start;
        let hi = self.end() + other.end() - 1;
        let hi = prec.map_or(hi, |n| hi.min(n));
        let len = (hi - lo).max(0) as usize;
        let mut out = vec![self.ring.zero_value(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len || self.ring.is_zero_v(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(len - i).enumerate() {
                if !self.ring.is_zero_v(b) {
                    out[i + j] = self.ring.add_v(&out[i + j], &self.ring.mul_v(a, b));
                }
            }
        }
        Ok(LaurentSeries::from_values(self.ring.clone(), lo, out, prec))
    }

    /// Multiply every coefficient by `c`.
    pub fn scale(&self, c: &RingElement) -> Result<LaurentSeries> {
        if c.ring() != &self.ring {
            return Err(Error::MixedRings(c.ring().to_string(), self.ring.to_string()));
        }
        let coeffs = self.coeffs.iter().map(|v| self.ring.mul_v(v, c.value())).collect();
        // Scaling by a nilpotent keeps the known range: unknown terms stay unknown.
        Ok(LaurentSeries::from_values(self.ring.clone(), self.start, coeffs, self.prec))
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: i64) -> LaurentSeries {
        LaurentSeries {
            ring: self.ring.clone(),
            start: self.start + k,
            coeffs: self.coeffs.clone(),
            prec: self.prec.map(|n| n + k),
        }
    }

    /// Terms of negative index, as an exact Laurent polynomial.
    pub fn polar_part(&self) -> LaurentSeries {
        let coeffs = self.coeffs.iter().take((-self.start).max(0) as usize).cloned().collect();
        LaurentSeries::from_values(self.ring.clone(), self.start, coeffs, None)
    }

    /// Terms of non-negative index, with the original precision.
    pub fn regular_part(&self) -> LaurentSeries {
        let skip = (-self.start).max(0) as usize;
        let coeffs = self.coeffs.iter().skip(skip).cloned().collect();
        LaurentSeries::from_values(self.ring.clone(), self.start.max(0), coeffs, self.prec)
    }

    /// Whether every stored coefficient lies in the maximal ideal.
    pub fn is_nilpotent(&self) -> bool {
        self.coeffs.iter().all(|v| !self.ring.is_unit_v(v))
    }

    /// Whether the reduction to `k((t))` is nonzero.
    pub fn is_unit(&self) -> Result<bool> {
        if self.coeffs.iter().any(|v| self.ring.is_unit_v(v)) {
            return Ok(true);
        }
        match self.prec {
            None => Ok(false),
            Some(n) => Err(Error::IndeterminateAtPrecision(format!(
                "every coefficient of {self} below t^{n} is nilpotent"
            ))),
        }
    }

    /// Order of the reduction of `self` in `k((t))`.
    pub fn winding_number(&self) -> Result<i64> {
        if let Some(k) = self.coeffs.iter().position(|v| self.ring.is_unit_v(v)) {
            return Ok(self.start + k as i64);
        }
        match self.is_unit() {
            Ok(_) => Err(Error::NonUnit(self.to_string())),
            Err(e) => Err(e),
        }
    }

    pub fn inverse(&self) -> Result<LaurentSeries> {
        let w = self.winding_number()?;
        let u = self.coeff(w).expect("winding index is known");
        let u_inv = u.inv()?;
        let g = self.scale(&u_inv)?.shift(-w);
        let polar = g.polar_part();
        let regular = g.regular_part();
        let inv_regular = regular.inverse_normalized()?;
        let result = if polar.is_zero() {
            inv_regular
        } else {
            let s = inv_regular.checked_mul(&polar)?;
            inv_regular.checked_mul(&s.inverse_one_plus_nilpotent()?)?
        };
        result.scale(&u_inv).map(|r| r.shift(-w))
    }

    /// `(1 + s)^-1` for `s` with nilpotent coefficients, by the finite
    /// geometric series.
    fn inverse_one_plus_nilpotent(&self) -> Result<LaurentSeries> {
        let e = self.ring.nilpotency_index();
        let minus_s = -self;
        let mut term = LaurentSeries::one(&self.ring);
        let mut sum = term.clone();
        for _ in 1..e {
            term = term.checked_mul(&minus_s)?;
            if term.is_zero() && term.is_exact() {
                break;
            }
            sum = sum.checked_add(&term)?;
        }
        Ok(sum)
    }

    /// Inverse of a power series with constant term 1.
    fn inverse_normalized(&self) -> Result<LaurentSeries> {
        let one = LaurentSeries::one(&self.ring);
        let s = self.checked_sub(&one)?;
        if s.is_nilpotent() {
            return s.inverse_one_plus_nilpotent();
        }
        let Some(n) = self.prec else {
            return Err(Error::IndeterminateAtPrecision(format!(
                "the inverse of {self} is an infinite series; attach a precision O(t^N)"
            )));
        };
        let n = n.max(0) as usize;
        let ring = &self.ring;
        let g: Vec<Value> = (0..n as i64).map(|i| self.value_at(i).expect("below precision")).collect();
        let mut h: Vec<Value> = Vec::with_capacity(n);
        for k in 0..n {
            if k == 0 {
                h.push(ring.one_value());
                continue;
            }
            let mut acc = ring.zero_value();
            for i in 1..=k {
                if !ring.is_zero_v(&g[i]) {
                    acc = ring.add_v(&acc, &ring.mul_v(&g[i], &h[k - i]));
                }
            }
            h.push(ring.neg_v(&acc));
        }
        Ok(LaurentSeries::from_values(ring.clone(), 0, h, Some(n as i64)))
    }

    /// `d/dt`, termwise.
    pub fn derivative(&self) -> LaurentSeries {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, v)| {
                let i = self.start + k as i64;
                self.ring.mul_v(v, &self.ring.int_v(i))
            })
            .collect();
        LaurentSeries::from_values(self.ring.clone(), self.start - 1, coeffs, self.prec.map(|n| n - 1))
    }

    pub fn pow(&self, n: i64) -> Result<LaurentSeries> {
        let base = if n < 0 { self.inverse()? } else { self.clone() };
        let mut k = n.unsigned_abs();
        let mut result = LaurentSeries::one(&self.ring);
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                result = result.checked_mul(&sq)?;
            }
            k >>= 1;
            if k > 0 {
                sq = sq.checked_mul(&sq)?;
            }
        }
        Ok(result)
    }

    /// Check that `self` has the form `c t + t^2 h` with `c` a unit and `h`
    /// a power series.
    pub fn check_uniformizer(&self) -> Result<()> {
        let reason = if self.coeffs.is_empty() || self.start < 1 {
            Some("expected a series c*t + O(t^2) with no terms of index <= 0")
        } else if self.prec.is_some_and(|n| n < 2) {
            Some("linear coefficient is not known")
        } else if !self.coeff(1).is_some_and(|c| c.is_unit()) {
            Some("linear coefficient is not a unit")
        } else {
            None
        };
        match reason {
            Some(r) => Err(Error::NotAUniformizer(format!("{self}: {r}"))),
            None => Ok(()),
        }
    }

    /// `f(sigma)` for a uniformizer `sigma`.
    pub fn substitute(&self, sigma: &LaurentSeries) -> Result<LaurentSeries> {
        self.check_same(sigma)?;
        sigma.check_uniformizer()?;
        if self.coeffs.is_empty() {
            return Ok(self.clone());
        }
        // sigma = t * unit, so O(t^N) maps to O(t^N).
        let cap = |s: LaurentSeries| match self.prec {
            Some(n) => s.with_precision(n),
            None => s,
        };
        let mut result = LaurentSeries::zero(&self.ring);
        let lo = self.start;
        let hi = self.end();
        if lo < 0 {
            let sigma_inv = match (self.prec, sigma.prec) {
                (Some(n), None) => sigma.with_precision(n - lo + 1).inverse()?,
                _ => sigma.inverse()?,
            };
            // each step down costs one degree, so carry the extra headroom
            let cap_neg = |s: LaurentSeries| match self.prec {
                Some(n) => s.with_precision(n - lo),
                None => s,
            };
            let mut power = LaurentSeries::one(&self.ring);
            for i in (lo..0).rev() {
                power = cap_neg(power.checked_mul(&sigma_inv)?);
                if let Some(v) = self.stored(i) {
                    let c = RingElement::from_value(self.ring.clone(), v.clone());
                    result = result.checked_add(&power.scale(&c)?)?;
                }
            }
        }
        let mut power = LaurentSeries::one(&self.ring);
        for i in 0..hi {
            if i > 0 {
                power = cap(power.checked_mul(sigma)?);
            }
            if i < lo {
                continue;
            }
            if let Some(v) = self.stored(i) {
                let c = RingElement::from_value(self.ring.clone(), v.clone());
                result = result.checked_add(&power.scale(&c)?)?;
            }
        }
        Ok(cap(result))
    }

    /// Apply a ring homomorphism to every coefficient.
    pub fn map_coefficients(&self, h: &RingMap) -> Result<LaurentSeries> {
        if h.source() != &self.ring {
            return Err(Error::MixedRings(self.ring.to_string(), h.source().to_string()));
        }
        let target = h.target();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for v in &self.coeffs {
            let x = RingElement::from_value(self.ring.clone(), v.clone());
            coeffs.push(h.apply(&x)?.into_value());
        }
        Ok(LaurentSeries::from_values(target, self.start, coeffs, self.prec))
    }

    /// Text form in the variable `var`, e.g. `1 + 2*e*t^-1 + O(t^8)`.
    pub fn display_in(&self, var: &str) -> String {
        let mut out = String::new();
        for (i, c) in self.terms() {
            let s = c.to_string();
            let (neg, mag) = match s.strip_prefix('-') {
                Some(rest) if !rest.contains(['+', '-']) => (true, rest.to_string()),
                _ => (false, s),
            };
            let compound = mag.contains(['+', '-']);
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let term = if i == 0 {
                mag
            } else if mag == "1" {
                mono
            } else if compound {
                format!("({mag})*{mono}")
            } else {
                format!("{mag}*{mono}")
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&term);
        }
        match self.prec {
            Some(n) => {
                let o = if n == 1 {
                    format!("O({var})")
                } else {
                    format!("O({var}^{n})")
                };
                if out.is_empty() {
                    out = o;
                } else {
                    out.push_str(" + ");
                    out.push_str(&o);
                }
            }
            None if out.is_empty() => out.push('0'),
            None => {}
        }
        out
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("t"))
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} over {}", self.ring)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&LaurentSeries> for &LaurentSeries {
            type Output = LaurentSeries;
            fn $method(self, rhs: &LaurentSeries) -> LaurentSeries {
                self.$checked(rhs).expect("series operation on mixed rings")
            }
        }
        impl $tr<LaurentSeries> for LaurentSeries {
            type Output = LaurentSeries;
            fn $method(self, rhs: LaurentSeries) -> LaurentSeries {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&LaurentSeries> for LaurentSeries {
            type Output = LaurentSeries;
            fn $method(self, rhs: &LaurentSeries) -> LaurentSeries {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        LaurentSeries {
            ring: self.ring.clone(),
            start: self.start,
            coeffs: self.coeffs.iter().map(|v| self.ring.neg_v(v)).collect(),
            prec: self.prec,
        }
    }
}

impl Neg for LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::BaseField;

    fn f3e2() -> Ring {
        Ring::truncated(BaseField::Prime(3), 2).unwrap()
    }

    fn series(ring: &Ring, start: i64, c: &[i64], prec: Option<i64>) -> LaurentSeries {
        let coeffs = c.iter().map(|&x| ring.from_i64(x)).collect();
        LaurentSeries::new(ring, start, coeffs, prec).unwrap()
    }

    fn eps(ring: &Ring) -> RingElement {
        ring.maximal_ideal_generator().unwrap()
    }

    #[test]
    fn multiplication_examples() {
        let q = Ring::rationals();
        let a = series(&q, 0, &[1, 1], Some(5));
        let b = series(&q, 0, &[1, -1], Some(5));
        assert_eq!(&a * &b, series(&q, 0, &[1, 0, -1], Some(5)));

        let r = f3e2();
        let e_over_t = LaurentSeries::monomial(&eps(&r), -1);
        assert!((&e_over_t * &e_over_t).is_zero());

        let c = series(&q, -1, &[1, 0, 1], Some(3));
        assert_eq!(c.to_string(), "t^-1 + t + O(t^3)");
    }

    #[test]
    fn precision_rule_for_products() {
        let q = Ring::rationals();
        let f = series(&q, -2, &[1], Some(4));
        let g = series(&q, 1, &[1, 1], Some(6));
        // min(-2 + 6, 1 + 4) = 4
        assert_eq!((&f * &g).precision(), Some(4));
    }

    #[test]
    fn unit_tests_and_winding() {
        let r = f3e2();
        let one_plus = &LaurentSeries::one(&r) + &LaurentSeries::monomial(&eps(&r), -1);
        assert_eq!(one_plus.is_unit(), Ok(true));
        assert_eq!(LaurentSeries::monomial(&eps(&r), -1).is_unit(), Ok(false));
        assert_eq!(LaurentSeries::monomial(&r.one(), -1).is_unit(), Ok(true));
        let nil = LaurentSeries::monomial(&eps(&r), -1).with_precision(4);
        assert!(matches!(nil.is_unit(), Err(Error::IndeterminateAtPrecision(_))));

        let f5 = Ring::prime_field(5).unwrap();
        assert_eq!(series(&f5, 1, &[2, 1], None).winding_number(), Ok(1));
        let one_minus = &LaurentSeries::one(&r) - &LaurentSeries::monomial(&eps(&r), -1);
        assert_eq!(one_minus.winding_number(), Ok(0));
        let r5 = Ring::truncated(BaseField::Prime(5), 2).unwrap();
        let f = &LaurentSeries::monomial(&eps(&r5), -1) + &LaurentSeries::monomial(&r5.from_i64(3), 2);
        assert_eq!(f.winding_number(), Ok(2));
    }

    #[test]
    fn inversion_examples() {
        let q = Ring::rationals();
        let f = series(&q, 0, &[1, -1], Some(3));
        assert_eq!(f.inverse().unwrap(), series(&q, 0, &[1, 1, 1], Some(3)));

        let r = f3e2();
        let e_t = LaurentSeries::monomial(&eps(&r), -1);
        let f = &LaurentSeries::one(&r) - &e_t;
        assert_eq!(f.inverse().unwrap(), &LaurentSeries::one(&r) + &e_t);

        let et = LaurentSeries::monomial(&eps(&r), 1);
        assert!(matches!(et.inverse(), Err(Error::NonUnit(_))));

        let exact = series(&q, 0, &[1, -1], None);
        assert!(matches!(exact.inverse(), Err(Error::IndeterminateAtPrecision(_))));
    }

    #[test]
    fn inverse_with_polar_tail() {
        let r = Ring::truncated(BaseField::Prime(5), 3).unwrap();
        let e = eps(&r);
        let f = LaurentSeries::new(
            &r,
            -2,
            vec![e.clone(), r.from_i64(2) * &e, r.from_i64(3), r.one(), e.clone()],
            Some(8),
        )
        .unwrap();
        let inv = f.inverse().unwrap();
        let prod = &f * &inv;
        assert_eq!(inv.precision(), Some(4));
        assert!(prod.agrees_with(&LaurentSeries::one(&r)));
        assert_eq!(prod.precision(), Some(2));
    }

    #[test]
    fn derivative_examples() {
        let q = Ring::rationals();
        assert_eq!(series(&q, 2, &[1], None).derivative(), series(&q, 1, &[2], None));
        assert_eq!(series(&q, -1, &[1], None).derivative(), series(&q, -2, &[-1], None));
        let r = f3e2();
        assert!(LaurentSeries::constant(&eps(&r)).derivative().is_zero());
    }

    #[test]
    fn substitution_examples() {
        let q = Ring::rationals();
        let t = LaurentSeries::t(&q);
        let sigma = series(&q, 1, &[1, 1], None);
        assert_eq!(t.substitute(&sigma).unwrap(), sigma);

        let f5 = Ring::prime_field(5).unwrap();
        let sigma = series(&f5, 1, &[1, -1], Some(4));
        let f = series(&f5, -1, &[1], None);
        assert_eq!(f.substitute(&sigma).unwrap(), series(&f5, -1, &[1, 1, 1], Some(2)));

        let bad = series(&f5, 0, &[1, 1], None);
        assert!(matches!(f.substitute(&bad), Err(Error::NotAUniformizer(_))));
        let r = f3e2();
        let nil_linear = LaurentSeries::new(&r, 1, vec![eps(&r), r.one()], None).unwrap();
        assert!(matches!(
            LaurentSeries::t(&r).substitute(&nil_linear),
            Err(Error::NotAUniformizer(_))
        ));
    }

    #[test]
    fn coefficient_maps() {
        let r = f3e2();
        let f = &(&LaurentSeries::one(&r) + &LaurentSeries::monomial(&eps(&r), -1)) + &LaurentSeries::t(&r);
        let h = RingMap::substitution(&r, r.zero()).unwrap();
        assert_eq!(f.map_coefficients(&h).unwrap(), series(&r, 0, &[1, 1], None));

        let z = Ring::prime_power(5, 2).unwrap();
        let g = series(&z, 0, &[5, 1], Some(6));
        let h = RingMap::truncation(&z, 1).unwrap();
        let f5 = Ring::prime_field(5).unwrap();
        assert_eq!(g.map_coefficients(&h).unwrap(), series(&f5, 1, &[1], Some(6)));
    }

    #[test]
    fn display() {
        let q = Ring::truncated(BaseField::Rationals, 2).unwrap();
        let e = eps(&q);
        let f = LaurentSeries::new(
            &q,
            -1,
            vec![-e.clone(), q.one(), q.zero(), q.zero(), q.from_i64(2)],
            Some(8),
        )
        .unwrap();
        assert_eq!(f.to_string(), "-e*t^-1 + 1 + 2*t^3 + O(t^8)");
        let g = LaurentSeries::monomial(&(q.one() + e), 2);
        assert_eq!(g.to_string(), "(1+e)*t^2");
        assert_eq!(LaurentSeries::big_o(&q, 3).to_string(), "O(t^3)");
        assert_eq!(LaurentSeries::zero(&q).to_string(), "0");
    }
}
