//! Witt decomposition of units of `A((t))`, the Contou-Carrère symbol and
//! Kato's residue symbol at finite `x`-adic precision.

use std::fmt;

use num::integer::gcd;

use crate::error::{Argument, Error, Result};
use crate::ring::{Ring, RingElement, RingKind, RingMap, Value};
use crate::series::LaurentSeries;

/// `f = a0 * t^w * prod_{i>0} (1 - a_i t^i) * prod_{i>0} (1 - a_{-i} t^{-i})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitDecomposition {
    ring: Ring,
    winding: i64,
    a0: RingElement,
    /// `positive[i - 1] = a_i`.
    positive: Vec<RingElement>,
    /// `(i, a_{-i})` for the nonzero negative coordinates, by increasing `i`.
    negative: Vec<(u64, RingElement)>,
    /// Coordinates `a_i` are known for `1 <= i < N`; `None` when all
    /// coordinates beyond `positive` are zero.
    precision: Option<usize>,
}

impl UnitDecomposition {
    /// Build a decomposition from explicit coordinates.
    pub fn new(
        ring: &Ring,
        winding: i64,
        a0: RingElement,
        positive: Vec<RingElement>,
        negative: Vec<(u64, RingElement)>,
        precision: Option<usize>,
    ) -> Result<UnitDecomposition> {
        if !a0.is_unit() {
            return Err(Error::NonUnit(a0.to_string()));
        }
        let mut negative: Vec<_> = negative.into_iter().filter(|(_, a)| !a.is_zero()).collect();
        negative.sort_by_key(|(i, _)| *i);
        for (i, a) in &negative {
            if *i == 0 || a.is_unit() {
                return Err(Error::NonUnit(format!("negative coordinate a_-{i} = {a} must be nilpotent")));
            }
        }
        for (i, a) in negative.iter().zip(negative.iter().skip(1)) {
            if i.0 == a.0 {
                return Err(Error::InvalidRing(format!("repeated negative coordinate index {}", i.0)));
            }
        }
        let all = std::iter::once(&a0)
            .chain(&positive)
            .chain(negative.iter().map(|(_, a)| a));
        if let Some(bad) = all.into_iter().find(|a| a.ring() != ring) {
            return Err(Error::MixedRings(bad.ring().to_string(), ring.to_string()));
        }
        let mut positive = positive;
        match precision {
            Some(n) => positive.truncate(n.saturating_sub(1)),
            None => {
                while positive.last().is_some_and(|a| a.is_zero()) {
                    positive.pop();
                }
            }
        }
        Ok(UnitDecomposition {
            ring: ring.clone(),
            winding,
            a0,
            positive,
            negative,
            precision,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn winding(&self) -> i64 {
        self.winding
    }

    pub fn a0(&self) -> &RingElement {
        &self.a0
    }

    pub fn positive(&self) -> &[RingElement] {
        &self.positive
    }

    pub fn negative(&self) -> &[(u64, RingElement)] {
        &self.negative
    }

    /// Coordinate precision `N`: `a_i` is known for `1 <= i < N`.
    pub fn precision(&self) -> Option<usize> {
        self.precision
    }

    /// Number of known positive coordinates, or `None` if all are known.
    fn known(&self) -> Option<usize> {
        self.precision.map(|n| n.saturating_sub(1))
    }

    /// `a_i` for any integer `i` (`a_0` for `i = 0`), or `None` beyond the
    /// coordinate precision.
    pub fn coordinate(&self, i: i64) -> Option<RingElement> {
        if i == 0 {
            return Some(self.a0.clone());
        }
        if i < 0 {
            let j = i.unsigned_abs();
            let found = self.negative.iter().find(|(k, _)| *k == j);
            return Some(found.map_or_else(|| self.ring.zero(), |(_, a)| a.clone()));
        }
        let k = i as usize;
        if self.known().is_some_and(|n| k > n) {
            return None;
        }
        Some(self.positive.get(k - 1).cloned().unwrap_or_else(|| self.ring.zero()))
    }

    /// Deepest index `j` with `a_{-j} != 0`.
    pub fn polar_depth(&self) -> u64 {
        self.negative.last().map_or(0, |(i, _)| *i)
    }

    fn negative_product(&self) -> Result<LaurentSeries> {
        let mut out = LaurentSeries::one(&self.ring);
        for (i, a) in &self.negative {
            let factor = LaurentSeries::one(&self.ring) - LaurentSeries::monomial(a, -(*i as i64));
            out = out.checked_mul(&factor)?;
        }
        Ok(out)
    }

    /// `a0 t^w prod_{i<n} (1 - a_i t^i) prod (1 - a_{-i} t^{-i})`, where the
    /// positive product is known modulo `t^n`. The polar factors lower the
    /// resulting precision by the depth of their product.
    pub fn recompose(&self, n: usize) -> Result<LaurentSeries> {
        if let Some(known) = self.precision {
            if n > known {
                return Err(Error::IndeterminateAtPrecision(format!(
                    "recompose to t^{n} needs coordinates below index {n}, only those below {known} are known"
                )));
            }
        }
        Ok(self.finite_product(n)?.with_precision(self.winding + n as i64))
    }

    /// The exact product over `a_i` with `i < n` and all negative coordinates.
    fn finite_product(&self, n: usize) -> Result<LaurentSeries> {
        let mut pos = LaurentSeries::one(&self.ring);
        for (k, a) in self.positive.iter().enumerate().take(n.saturating_sub(1)) {
            if !a.is_zero() {
                let factor = LaurentSeries::one(&self.ring) - LaurentSeries::monomial(a, k as i64 + 1);
                pos = pos.checked_mul(&factor)?;
            }
        }
        self.finish(pos)
    }

    /// Recompose from all known coordinates. Exact decompositions give an
    /// exact Laurent polynomial.
    pub fn recompose_full(&self) -> Result<LaurentSeries> {
        match self.precision {
            Some(n) => self.recompose(n),
            None => self.finite_product(self.positive.len() + 1),
        }
    }

    fn finish(&self, pos: LaurentSeries) -> Result<LaurentSeries> {
        let s = pos.checked_mul(&self.negative_product()?)?;
        Ok(s.scale(&self.a0)?.shift(self.winding))
    }
}

impl fmt::Display for UnitDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w = {}, a0 = {}", self.winding, self.a0)?;
        for (i, a) in self.negative.iter().rev() {
            write!(f, ", a_-{i} = {a}")?;
        }
        for (k, a) in self.positive.iter().enumerate() {
            if !a.is_zero() {
                write!(f, ", a_{} = {a}", k + 1)?;
            }
        }
        match self.precision {
            Some(n) => write!(f, " (coordinates known below index {n})"),
            None => write!(f, " (exact)"),
        }
    }
}

/// Split `g` (constant term 1 at the winding index, already normalized) as
/// `h * Q` with `h` a power series and `Q` in `1 + t^-1 m[t^-1]`.
fn split_polar(g: &LaurentSeries) -> Result<(LaurentSeries, LaurentSeries)> {
    let ring = g.ring();
    let one = LaurentSeries::one(ring);
    let mut q = one.clone();
    let mut h = g.clone();
    // Each round squares the ideal containing the polar part of `h`.
    for _ in 0..64 {
        let polar = h.polar_part();
        let Some((lo, _)) = polar.support() else {
            return Ok((h, q));
        };
        let depth = -lo;
        let reg = h.regular_part().with_precision(depth + 1);
        let c = reg.inverse()?.checked_mul(&polar)?;
        if c.precision().is_some_and(|n| n < 0) {
            return Err(Error::IndeterminateAtPrecision(format!(
                "polar part of {g} is not determined at this precision"
            )));
        }
        q = q.checked_mul(&(&one + &c.polar_part()))?;
        h = g.checked_mul(&q.inverse()?)?;
    }
    Err(Error::IndeterminateAtPrecision(format!("polar splitting of {g} did not terminate")))
}

/// Peel `P = prod_{1 <= i < n} (1 - a_i t^i) mod t^n` for a power series
/// `P` with constant term 1, returning `a_1, ..., a_{n-1}`.
fn peel_positive(ring: &Ring, p: &LaurentSeries, n: usize) -> Vec<RingElement> {
    let mut y: Vec<Value> = (0..n as i64)
        .map(|i| p.value_at(i).unwrap_or_else(|| ring.zero_value()))
        .collect();
    let mut coords = Vec::with_capacity(n.saturating_sub(1));
    for i in 1..n {
        let a = ring.neg_v(&y[i]);
        if !ring.is_zero_v(&a) {
            // Y / (1 - a t^i): Y_j += a * Y_{j-i}, in increasing j.
            for j in i..n {
                if !ring.is_zero_v(&y[j - i]) {
                    let d = ring.mul_v(&a, &y[j - i]);
                    y[j] = ring.add_v(&y[j], &d);
                }
            }
        }
        coords.push(RingElement::from_value(ring.clone(), a));
    }
    coords
}

/// Peel the exact polar factor `Q = prod (1 - a_{-i} t^{-i})`.
fn peel_negative(q: &LaurentSeries) -> Result<Vec<(u64, RingElement)>> {
    let ring = q.ring();
    let one = LaurentSeries::one(ring);
    let mut rest = q.clone();
    let mut out = Vec::new();
    let mut i = 1u64;
    while rest != one {
        let Some((lo, _)) = rest.support() else {
            break;
        };
        let depth = (-lo).max(0) as u64;
        if i > depth.max(1) * ring.nilpotency_index() as u64 + 1 {
            return Err(Error::IndeterminateAtPrecision(format!("negative coordinates of {q} do not terminate")));
        }
        let a = -rest.coeff(-(i as i64)).expect("exact");
        if !a.is_zero() {
            let factor = &one - &LaurentSeries::monomial(&a, -(i as i64));
            rest = rest.checked_mul(&factor.inverse()?)?;
            out.push((i, a));
        }
        i += 1;
    }
    Ok(out)
}

struct Normalized {
    winding: i64,
    a0: RingElement,
    /// Power series with constant term 1.
    p: LaurentSeries,
    negative: Vec<(u64, RingElement)>,
}

fn normalize(f: &LaurentSeries) -> Result<Normalized> {
    let w = f.winding_number()?;
    let u = f.coeff(w).expect("winding coefficient is known");
    let g = f.scale(&u.inv()?)?.shift(-w);
    let (h, q) = split_polar(&g)?;
    let c0 = h.coeff(0).ok_or_else(|| {
        Error::IndeterminateAtPrecision(format!("constant term of the regular factor of {f} is unknown"))
    })?;
    let p = h.scale(&c0.inv()?)?;
    Ok(Normalized {
        winding: w,
        a0: &u * &c0,
        p,
        negative: peel_negative(&q)?,
    })
}

/// Witt decomposition of a unit. Exact inputs must have finitely many
/// nonzero coordinates; otherwise attach a precision or use
/// [`witt_decompose_to`].
pub fn witt_decompose(f: &LaurentSeries) -> Result<UnitDecomposition> {
    let norm = normalize(f)?;
    let ring = f.ring();
    match norm.p.precision() {
        Some(_) => lift_decompose(f),
        None => {
            let deg = norm.p.support().map_or(0, |(_, hi)| hi.max(0)) as usize;
            let cap = (deg + 1) * ring.nilpotency_index() as usize + 1;
            let pos = peel_positive(ring, &norm.p, cap);
            let mut product = LaurentSeries::one(ring);
            for (k, a) in pos.iter().enumerate() {
                if !a.is_zero() {
                    product = product * (LaurentSeries::one(ring) - LaurentSeries::monomial(a, k as i64 + 1));
                }
            }
            if product != norm.p {
                return Err(Error::IndeterminateAtPrecision(format!(
                    "the Witt coordinates of {f} do not terminate; attach a precision O(t^N)"
                )));
            }
            UnitDecomposition::new(ring, norm.winding, norm.a0, pos, norm.negative, None)
        }
    }
}

/// Decomposition of a series known to `O(t^{w+N})`, taken from the lift of
/// `f` whose coordinates `a_i` vanish for `i >= N`. When `f` has a polar
/// tail the truncation alone does not fix every coordinate; this lift is
/// the one the finite product of [`UnitDecomposition::recompose`] returns.
fn lift_decompose(f: &LaurentSeries) -> Result<UnitDecomposition> {
    let ring = f.ring();
    let prec = f.precision().expect("inexact input");
    let w = f.winding_number()?;
    let n = (prec - w).max(1) as usize;
    let exact = |s: &LaurentSeries, keep: &dyn Fn(i64) -> bool| -> Result<LaurentSeries> {
        let Some((lo, hi)) = s.support() else {
            return Ok(LaurentSeries::zero(ring));
        };
        let coeffs = (lo..=hi)
            .map(|i| match s.coeff(i) {
                Some(c) if keep(i) => c,
                _ => ring.zero(),
            })
            .collect();
        LaurentSeries::new(ring, lo, coeffs, None)
    };
    let head = exact(f, &|i| i < prec)?;
    let mut lift = head.clone();
    // Each round moves the mismatch below t^{w+N} one power of the maximal
    // ideal deeper.
    for _ in 0..=2 * ring.nilpotency_index() + 2 {
        let d = witt_decompose_to(&lift, n)?;
        let model = d.finite_product(n)?;
        if model.with_precision(prec).agrees_with(&head) {
            return Ok(d);
        }
        lift = head.checked_add(&exact(&model, &|i| i >= prec)?)?;
    }
    Err(Error::IndeterminateAtPrecision(format!("no lift of {f} with finitely many coordinates found")))
}

/// Witt decomposition computing at most the coordinates `a_i` with `i < n`.
/// Exact inputs are treated as known to all orders.
pub fn witt_decompose_to(f: &LaurentSeries, n: usize) -> Result<UnitDecomposition> {
    let norm = normalize(f)?;
    let ring = f.ring();
    let avail = norm.p.precision().map_or(n, |k| (k.max(1) as usize).min(n)).max(1);
    let pos = peel_positive(ring, &norm.p, avail);
    UnitDecomposition::new(ring, norm.winding, norm.a0, pos, norm.negative, Some(avail))
}

/// Highest positive-coordinate index of each argument that enters the
/// symbol; `0` when no positive coordinate is needed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RequiredPrecision {
    pub first: usize,
    pub second: usize,
}

/// Largest `i` such that the term `(1 - a_i^{j/d} b^{i/d})` can differ from 1
/// for some nonzero negative coordinate `b = b_{-j}` of the other argument.
fn needed_against(negative: &[(u64, RingElement)]) -> usize {
    let mut best = 0usize;
    for (j, b) in negative {
        let r = b.nilpotency_order().expect("negative coordinates are nilpotent") as u64;
        // i / gcd(i, j) < r; the largest such i is below r * j.
        for i in (1..r * j).rev() {
            if i / gcd(i, *j) < r {
                best = best.max(i as usize);
                break;
            }
        }
    }
    best
}

fn required_from(df: &UnitDecomposition, dg: &UnitDecomposition) -> RequiredPrecision {
    RequiredPrecision {
        first: needed_against(dg.negative()),
        second: needed_against(df.negative()),
    }
}

/// Positive Witt coordinates of each argument needed by `<f, g>`.
pub fn required_precision(f: &LaurentSeries, g: &LaurentSeries) -> Result<RequiredPrecision> {
    let df = witt_decompose_to(f, 1)?;
    let dg = witt_decompose_to(g, 1)?;
    Ok(required_from(&df, &dg))
}

fn check_available(d: &UnitDecomposition, needed: usize, argument: Argument) -> Result<()> {
    if let Some(n) = d.precision() {
        if needed >= n {
            return Err(Error::InsufficientPrecision {
                argument,
                needed,
                available: n,
            });
        }
    }
    Ok(())
}

/// `(1 - x^p y^q)^d` for the pairing of a positive and a negative coordinate.
fn pair_term(x: &RingElement, y: &RingElement, i: u64, j: u64) -> Result<RingElement> {
    let d = gcd(i, j);
    let xy = x.pow((j / d) as i64)? * y.pow((i / d) as i64)?;
    (x.ring().one() - xy).pow(d as i64)
}

fn cross_product(pos: &UnitDecomposition, neg: &UnitDecomposition) -> Result<RingElement> {
    let mut acc = pos.ring().one();
    for (j, b) in neg.negative() {
        let r = b.nilpotency_order().expect("nilpotent") as u64;
        for i in 1..r * j {
            if i / gcd(i, *j) >= r {
                continue;
            }
            let a = pos.coordinate(i as i64).expect("availability checked");
            if a.is_zero() {
                continue;
            }
            acc = acc * pair_term(&a, b, i, *j)?;
        }
    }
    Ok(acc)
}

/// The Contou-Carrère symbol from decompositions.
pub fn contou_carrere_decomposed(df: &UnitDecomposition, dg: &UnitDecomposition) -> Result<RingElement> {
    if df.ring() != dg.ring() {
        return Err(Error::MixedRings(df.ring().to_string(), dg.ring().to_string()));
    }
    let need = required_from(df, dg);
    check_available(df, need.first, Argument::First)?;
    check_available(dg, need.second, Argument::Second)?;
    let ring = df.ring();
    let sign = if (df.winding() * dg.winding()).rem_euclid(2) == 1 {
        -ring.one()
    } else {
        ring.one()
    };
    let num = df.a0().pow(dg.winding())? * cross_product(df, dg)?;
    let den = dg.a0().pow(df.winding())? * cross_product(dg, df)?;
    Ok(sign * num * den.inv()?)
}

/// The Contou-Carrère symbol `<f, g>`.
pub fn contou_carrere(f: &LaurentSeries, g: &LaurentSeries) -> Result<RingElement> {
    if f.ring() != g.ring() {
        return Err(Error::MixedRings(f.ring().to_string(), g.ring().to_string()));
    }
    // Only coordinates below e times the polar depth of the other argument
    // enter, so try short inputs first; a value determined by a truncation
    // is the value.
    let (tf, tg) = (trimmed(f, g)?, trimmed(g, f)?);
    if tf.precision() != f.precision() || tg.precision() != g.precision() {
        match symbol_of(&tf, &tg) {
            Err(Error::IndeterminateAtPrecision(_) | Error::InsufficientPrecision { .. }) => {}
            other => return other,
        }
    }
    symbol_of(f, g)
}

fn symbol_of(f: &LaurentSeries, g: &LaurentSeries) -> Result<RingElement> {
    let need = required_precision(f, g)?;
    let df = witt_decompose_to(f, need.first + 1)?;
    let dg = witt_decompose_to(g, need.second + 1)?;
    contou_carrere_decomposed(&df, &dg)
}

fn polar_depth(f: &LaurentSeries) -> Result<i64> {
    Ok(f.winding_number()? - f.lowest_index().unwrap_or(0))
}

fn trimmed(f: &LaurentSeries, other: &LaurentSeries) -> Result<LaurentSeries> {
    let e = f.ring().nilpotency_index() as i64;
    let keep = e * polar_depth(other)? + 2 * e * polar_depth(f)? + 2;
    Ok(f.with_precision(f.winding_number()? + keep))
}

/// An element `x^e * u` of the two-dimensional local field at `x`-precision
/// `m`, where `u` is a unit series in `z` over `k[x]/(x^m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MHatElement {
    exponent: i64,
    unit: LaurentSeries,
}

impl MHatElement {
    pub fn new(exponent: i64, unit: LaurentSeries) -> Result<MHatElement> {
        match unit.ring().kind() {
            RingKind::TruncatedPoly { .. } => {}
            _ => {
                return Err(Error::UnsupportedRing {
                    op: "kato residue",
                    ring: unit.ring().to_string(),
                })
            }
        }
        if !unit.is_unit()? {
            return Err(Error::NonUnit(unit.display_in("z")));
        }
        Ok(MHatElement { exponent, unit })
    }

    /// The ring `k[x]/(x^m)` of coefficients.
    pub fn ring(&self) -> &Ring {
        self.unit.ring()
    }

    pub fn x_precision(&self) -> u32 {
        self.ring().nilpotency_index()
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn unit(&self) -> &LaurentSeries {
        &self.unit
    }

    /// The `z`-order of the reduction of the unit part modulo `x`.
    pub fn deg(&self) -> i64 {
        self.unit.winding_number().expect("unit part is a unit")
    }

    pub fn checked_mul(&self, other: &MHatElement) -> Result<MHatElement> {
        check_fields(self.ring(), other.ring())?;
        MHatElement::new(self.exponent + other.exponent, self.unit.checked_mul(&other.unit)?)
    }

    /// Reduce to `x`-precision `m`.
    pub fn truncate(&self, m: u32) -> Result<MHatElement> {
        let h = RingMap::reduce_order(self.ring(), m)?;
        MHatElement::new(self.exponent, self.unit.map_coefficients(&h)?)
    }

    /// Change of the uniformizer `z -> sigma(z)` over `k[x]/(x^m)`.
    pub fn substitute(&self, sigma: &LaurentSeries) -> Result<MHatElement> {
        MHatElement::new(self.exponent, self.unit.substitute(sigma)?)
    }
}

impl fmt::Display for MHatElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{} * ({})", self.exponent, self.unit.display_in("z"))
    }
}

/// An element `x^e * u` of `k((x))^*` modulo `1 + x^m k[[x]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KatoValue {
    pub exponent: i64,
    pub unit: RingElement,
}

impl KatoValue {
    pub fn is_one(&self) -> bool {
        self.exponent == 0 && self.unit.is_one()
    }

    pub fn truncate(&self, m: u32) -> Result<KatoValue> {
        let h = RingMap::reduce_order(self.unit.ring(), m)?;
        Ok(KatoValue {
            exponent: self.exponent,
            unit: h.apply(&self.unit)?,
        })
    }

    pub fn checked_mul(&self, other: &KatoValue) -> Result<KatoValue> {
        Ok(KatoValue {
            exponent: self.exponent + other.exponent,
            unit: self.unit.checked_mul(&other.unit)?,
        })
    }

    pub fn inv(&self) -> Result<KatoValue> {
        Ok(KatoValue {
            exponent: -self.exponent,
            unit: self.unit.inv()?,
        })
    }
}

impl fmt::Display for KatoValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = self.unit.ring().variable().unwrap_or("x");
        let unit = self.unit.to_string();
        match (self.exponent, self.unit.is_one()) {
            (0, _) => write!(f, "{unit}"),
            (1, true) => write!(f, "{x}"),
            (e, true) => write!(f, "{x}^{e}"),
            (1, false) => write!(f, "{x}*({unit})"),
            (e, false) => write!(f, "{x}^{e}*({unit})"),
        }
    }
}

fn check_fields(a: &Ring, b: &Ring) -> Result<()> {
    if a != b {
        return Err(Error::MixedFields(format!("{a} and {b}")));
    }
    Ok(())
}

/// Kato's residue symbol `{f, g}` at finite `x`-precision.
pub fn kato_residue(f: &MHatElement, g: &MHatElement) -> Result<KatoValue> {
    check_fields(f.ring(), g.ring())?;
    let exponent = f.exponent * g.deg() - g.exponent * f.deg();
    let unit = contou_carrere(&f.unit, &g.unit)?;
    Ok(KatoValue { exponent, unit })
}
