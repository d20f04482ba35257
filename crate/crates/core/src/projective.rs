//! Split rational functions and two-forms on the projective line over `A`,
//! their local expansions at sections, and the reciprocity laws.

use std::fmt;

use crate::error::{Error, Result};
use crate::forms::{res2, two_form_substitute, AOneForm, TwoForm};
use crate::ring::{Ring, RingElement, RingMap};
use crate::series::LaurentSeries;
use crate::symbol::contou_carrere;

/// A section `Spec A -> P^1_A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SectionPoint {
    Affine(RingElement),
    Infinity,
}

impl SectionPoint {
    fn same_reduction(&self, other: &SectionPoint) -> bool {
        match (self, other) {
            (SectionPoint::Infinity, SectionPoint::Infinity) => true,
            (SectionPoint::Affine(a), SectionPoint::Affine(b)) => a.residue() == b.residue(),
            _ => false,
        }
    }
}

impl fmt::Display for SectionPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SectionPoint::Affine(s) => write!(f, "{s}"),
            SectionPoint::Infinity => f.write_str("inf"),
        }
    }
}

fn check_distinct(points: &[SectionPoint]) -> Result<()> {
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            if a.same_reduction(b) {
                return Err(Error::SectionCollision(a.to_string(), b.to_string()));
            }
        }
    }
    Ok(())
}

/// `c * prod (x - s_i)^(n_i)` with `c` a unit and sections `s_i` in `A`.
/// Several sections may share a reduction; their factors then meet at the
/// same closed point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitRationalFunction {
    constant: RingElement,
    factors: Vec<(RingElement, i64)>,
}

impl SplitRationalFunction {
    pub fn new(constant: RingElement, factors: Vec<(RingElement, i64)>) -> Result<SplitRationalFunction> {
        if !constant.is_unit() {
            return Err(Error::NonUnit(constant.to_string()));
        }
        let ring = constant.ring().clone();
        let mut merged: Vec<(RingElement, i64)> = Vec::new();
        for (s, n) in factors {
            if s.ring() != &ring {
                return Err(Error::MixedRings(s.ring().to_string(), ring.to_string()));
            }
            match merged.iter_mut().find(|(t, _)| *t == s) {
                Some(slot) => slot.1 += n,
                None => merged.push((s, n)),
            }
        }
        merged.retain(|(_, n)| *n != 0);
        Ok(SplitRationalFunction {
            constant,
            factors: merged,
        })
    }

    pub fn constant_function(c: RingElement) -> Result<SplitRationalFunction> {
        SplitRationalFunction::new(c, Vec::new())
    }

    pub fn ring(&self) -> &Ring {
        self.constant.ring()
    }

    pub fn constant(&self) -> &RingElement {
        &self.constant
    }

    pub fn factors(&self) -> &[(RingElement, i64)] {
        &self.factors
    }

    /// Order at infinity.
    pub fn order_at_infinity(&self) -> i64 {
        -self.factors.iter().map(|(_, n)| n).sum::<i64>()
    }

    pub fn checked_mul(&self, other: &SplitRationalFunction) -> Result<SplitRationalFunction> {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        SplitRationalFunction::new(self.constant.checked_mul(&other.constant)?, factors)
    }

    pub fn map(&self, h: &RingMap) -> Result<SplitRationalFunction> {
        let factors = self
            .factors
            .iter()
            .map(|(s, n)| Ok((h.apply(s)?, *n)))
            .collect::<Result<Vec<_>>>()?;
        SplitRationalFunction::new(h.apply(&self.constant)?, factors)
    }

    /// Affine sections occurring in the factor list.
    pub fn sections(&self) -> impl Iterator<Item = &RingElement> {
        self.factors.iter().map(|(s, _)| s)
    }

    /// Image in `A((t))` with `t = x - r`, or `t = 1/x` at infinity, known
    /// modulo `t^n`. The result is exact when no factor needs an infinite
    /// expansion.
    pub fn local_expansion(&self, at: &SectionPoint, n: i64) -> Result<LaurentSeries> {
        let ring = self.ring();
        let one = LaurentSeries::one(ring);
        let mut exact = LaurentSeries::constant(&self.constant);
        let mut infinite: Vec<(LaurentSeries, i64)> = Vec::new();
        for (s, k) in &self.factors {
            match at {
                SectionPoint::Affine(r) => {
                    let delta = r - s;
                    if delta.is_unit() {
                        // (t + d)^k = d^k (1 + t/d)^k
                        exact = exact.scale(&delta.pow(*k)?)?;
                        let base = &one + &LaurentSeries::monomial(&delta.inv()?, 1);
                        if *k > 0 {
                            exact = exact.checked_mul(&base.pow(*k)?)?;
                        } else {
                            infinite.push((base, *k));
                        }
                    } else {
                        // (t + d)^k = t^k (1 + d/t)^k, finite since d is nilpotent
                        let base = &one + &LaurentSeries::monomial(&delta, -1);
                        exact = exact.checked_mul(&base.pow(*k)?.shift(*k))?;
                    }
                }
                SectionPoint::Infinity => {
                    // (x - s)^k = t^-k (1 - s t)^k
                    let base = &one - &LaurentSeries::monomial(s, 1);
                    if *k > 0 || s.is_nilpotent() {
                        exact = exact.checked_mul(&base.pow(*k)?.shift(-*k))?;
                    } else {
                        exact = exact.shift(-*k);
                        infinite.push((base, *k));
                    }
                }
            }
        }
        if infinite.is_empty() {
            return Ok(exact);
        }
        let lowest = exact.lowest_index().unwrap_or(0);
        let relative = (n - lowest).max(1);
        let mut series = one.with_precision(relative);
        for (base, k) in infinite {
            series = series.checked_mul(&base.with_precision(relative).pow(k)?)?;
        }
        Ok(exact.checked_mul(&series)?.with_precision(n))
    }

    /// Order of vanishing at a point, counting every section with the same
    /// reduction.
    fn order_at(&self, at: &SectionPoint) -> i64 {
        match at {
            SectionPoint::Infinity => self.order_at_infinity(),
            SectionPoint::Affine(r) => self
                .factors
                .iter()
                .filter(|(s, _)| s.residue() == r.residue())
                .map(|(_, n)| n)
                .sum(),
        }
    }

    /// Value at `pt` of `f / (x - pt)^v`, for field coefficients.
    fn leading_value(&self, at: &SectionPoint) -> Result<RingElement> {
        let mut value = self.constant.clone();
        if let SectionPoint::Affine(r) = at {
            for (s, n) in &self.factors {
                if s != r {
                    value = value * (r - s).pow(*n)?;
                }
            }
        }
        Ok(value)
    }
}

impl fmt::Display for SplitRationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.constant.is_one() || self.factors.is_empty() {
            let c = self.constant.to_string();
            parts.push(if c.contains(['+', '-']) { format!("({c})") } else { c });
        }
        for (s, n) in &self.factors {
            let sv = s.to_string();
            let lin = if s.is_zero() {
                "x".to_string()
            } else if let Some(rest) = sv.strip_prefix('-').filter(|r| !r.contains(['+', '-'])) {
                format!("(x + {rest})")
            } else if sv.contains(['+', '-']) {
                format!("(x - ({sv}))")
            } else {
                format!("(x - {sv})")
            };
            parts.push(if *n == 1 { lin } else { format!("{lin}^{n}") });
        }
        f.write_str(&parts.join(" * "))
    }
}

fn require_field(ring: &Ring) -> Result<()> {
    if ring.is_field() {
        Ok(())
    } else {
        Err(Error::UnsupportedRing {
            op: "tame symbol",
            ring: ring.to_string(),
        })
    }
}

/// `(-1)^(v(f)v(g)) (f^v(g) / g^v(f))(pt)` over a field.
pub fn tame_symbol_at_point(
    f: &SplitRationalFunction,
    g: &SplitRationalFunction,
    at: &SectionPoint,
) -> Result<RingElement> {
    require_field(f.ring())?;
    if f.ring() != g.ring() {
        return Err(Error::MixedRings(f.ring().to_string(), g.ring().to_string()));
    }
    let (vf, vg) = (f.order_at(at), g.order_at(at));
    let ring = f.ring();
    let sign = if (vf * vg).rem_euclid(2) == 1 { -ring.one() } else { ring.one() };
    let num = f.leading_value(at)?.pow(vg)?;
    let den = g.leading_value(at)?.pow(vf)?;
    Ok(sign * num * den.inv()?)
}

/// The outcome of a reciprocity check: the local symbols and their product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReciprocityReport {
    pub symbols: Vec<(SectionPoint, RingElement)>,
    pub product: RingElement,
}

impl ReciprocityReport {
    pub fn passes(&self) -> bool {
        self.product.is_one()
    }

    fn from_symbols(ring: &Ring, symbols: Vec<(SectionPoint, RingElement)>) -> ReciprocityReport {
        let product = symbols.iter().fold(ring.one(), |acc, (_, v)| acc * v);
        ReciprocityReport { symbols, product }
    }
}

/// One representative section per closed point carrying a factor of `f` or
/// `g`, in order of first occurrence, followed by infinity.
pub fn closed_points(f: &SplitRationalFunction, g: &SplitRationalFunction) -> Vec<SectionPoint> {
    let mut points: Vec<SectionPoint> = Vec::new();
    for s in f.sections().chain(g.sections()) {
        let p = SectionPoint::Affine(s.clone());
        if !points.iter().any(|q| q.same_reduction(&p)) {
            points.push(p);
        }
    }
    points.push(SectionPoint::Infinity);
    points
}

/// Weil reciprocity over a field: the product of all tame symbols.
pub fn weil_check(f: &SplitRationalFunction, g: &SplitRationalFunction) -> Result<ReciprocityReport> {
    require_field(f.ring())?;
    let symbols = closed_points(f, g)
        .into_iter()
        .map(|p| {
            let v = tame_symbol_at_point(f, g, &p)?;
            Ok((p, v))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ReciprocityReport::from_symbols(f.ring(), symbols))
}

/// Total exponent of the factors that put a nilpotent polar tail on the
/// expansion at `at`: sections congruent to `at` but different from it.
/// Expansions at infinity are `t^-n` times a power series.
fn polar_weight(f: &SplitRationalFunction, at: &SectionPoint) -> i64 {
    match at {
        SectionPoint::Infinity => 0,
        SectionPoint::Affine(r) => f
            .factors
            .iter()
            .filter(|(s, _)| s != r && s.residue() == r.residue())
            .map(|(_, n)| n.abs())
            .sum(),
    }
}

/// `<f, g>` at a section, choosing the working precision from the local
/// polar data and doubling it while the symbol is undetermined.
pub fn contou_carrere_at(
    f: &SplitRationalFunction,
    g: &SplitRationalFunction,
    at: &SectionPoint,
) -> Result<RingElement> {
    let e = f.ring().nilpotency_index() as i64;
    let weight = polar_weight(f, at) + polar_weight(g, at);
    let mut n = 4 + 2 * e * (weight + 1);
    let mut last = None;
    for _ in 0..6 {
        let fl = f.local_expansion(at, n)?;
        let gl = g.local_expansion(at, n)?;
        match contou_carrere(&fl, &gl) {
            Err(err @ (Error::InsufficientPrecision { .. } | Error::IndeterminateAtPrecision(_))) => last = Some(err),
            other => return other,
        }
        n *= 2;
    }
    Err(last.expect("at least one attempt"))
}

/// Anderson-Romo reciprocity: the product of Contou-Carrère symbols over one
/// section per closed point in the support of `f` and `g`, and infinity.
pub fn anderson_romo_check(f: &SplitRationalFunction, g: &SplitRationalFunction) -> Result<ReciprocityReport> {
    anderson_romo_check_on(f, g, &closed_points(f, g))
}

/// The same product over an explicit working set of sections with pairwise
/// distinct reductions.
pub fn anderson_romo_check_on(
    f: &SplitRationalFunction,
    g: &SplitRationalFunction,
    points: &[SectionPoint],
) -> Result<ReciprocityReport> {
    if f.ring() != g.ring() {
        return Err(Error::MixedRings(f.ring().to_string(), g.ring().to_string()));
    }
    check_distinct(points)?;
    let symbols = points
        .iter()
        .map(|p| Ok((p.clone(), contou_carrere_at(f, g, p)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ReciprocityReport::from_symbols(f.ring(), symbols))
}

/// `sum_s sum_k w_{s,k} dx/(x - s)^k + sum_j w_{inf,j} x^j dx`, where each
/// `w` lies in `Omega^1_A` and the product is `w ^ dx`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalTwoForm {
    ring: Ring,
    /// `(s, [w_{s,1}, w_{s,2}, ...])`.
    poles: Vec<(RingElement, Vec<AOneForm>)>,
    /// `[w_{inf,0}, w_{inf,1}, ...]`.
    tail: Vec<AOneForm>,
}

impl GlobalTwoForm {
    pub fn new(
        ring: &Ring,
        poles: Vec<(RingElement, Vec<AOneForm>)>,
        tail: Vec<AOneForm>,
    ) -> Result<GlobalTwoForm> {
        let points: Vec<SectionPoint> = poles.iter().map(|(s, _)| SectionPoint::Affine(s.clone())).collect();
        check_distinct(&points)?;
        let forms = poles.iter().flat_map(|(_, w)| w).chain(&tail);
        for w in forms {
            if w.ring() != ring {
                return Err(Error::MixedRings(w.ring().to_string(), ring.to_string()));
            }
        }
        Ok(GlobalTwoForm {
            ring: ring.clone(),
            poles,
            tail,
        })
    }

    /// Simple poles only.
    pub fn simple(ring: &Ring, poles: Vec<(RingElement, AOneForm)>) -> Result<GlobalTwoForm> {
        GlobalTwoForm::new(ring, poles.into_iter().map(|(s, w)| (s, vec![w])).collect(), Vec::new())
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn poles(&self) -> &[(RingElement, Vec<AOneForm>)] {
        &self.poles
    }

    pub fn tail(&self) -> &[AOneForm] {
        &self.tail
    }

    /// The pole set together with infinity.
    pub fn points(&self) -> Vec<SectionPoint> {
        let mut pts: Vec<SectionPoint> = self.poles.iter().map(|(s, _)| SectionPoint::Affine(s.clone())).collect();
        pts.push(SectionPoint::Infinity);
        pts
    }

    /// The local expansion `h de^dt` in the coordinate `t = x - r`, or
    /// `t = 1/x` at infinity (where `dx = -t^-2 dt`), known modulo `t^n`.
    pub fn local_expansion(&self, at: &SectionPoint, n: i64) -> Result<TwoForm> {
        let ring = &self.ring;
        let one = LaurentSeries::one(ring);
        let mut h = LaurentSeries::zero(ring).with_precision(n);
        for (s, ws) in &self.poles {
            for (k, w) in ws.iter().enumerate() {
                let k = k as i64 + 1;
                let term = match at {
                    SectionPoint::Affine(r) => {
                        let delta = r - s;
                        if delta.is_unit() {
                            let base = (&one + &LaurentSeries::monomial(&delta.inv()?, 1)).with_precision(n.max(1));
                            base.pow(-k)?.scale(&delta.pow(-k)?)?
                        } else {
                            let base = &one + &LaurentSeries::monomial(&delta, -1);
                            base.pow(-k)?.shift(-k)
                        }
                    }
                    SectionPoint::Infinity => {
                        // t^k (1 - s t)^-k * (-t^-2)
                        let base = (&one - &LaurentSeries::monomial(s, 1)).with_precision((n - k + 2).max(1));
                        -base.pow(-k)?.shift(k - 2)
                    }
                };
                h = h.checked_add(&term.scale(w.coeff())?)?;
            }
        }
        for (j, w) in self.tail.iter().enumerate() {
            let j = j as i64;
            let term = match at {
                SectionPoint::Affine(r) => (&LaurentSeries::t(ring) + &LaurentSeries::constant(r)).pow(j)?,
                SectionPoint::Infinity => -LaurentSeries::monomial(&ring.one(), -j - 2),
            };
            h = h.checked_add(&term.scale(w.coeff())?)?;
        }
        TwoForm::new(h)
    }

    /// `Res^2_s` at a section.
    pub fn residue_at(&self, at: &SectionPoint) -> Result<AOneForm> {
        res2(&self.local_expansion(at, 0)?)
    }

    /// `Res^2_s` computed after changing the local coordinate by `sigma`.
    pub fn residue_at_with(&self, at: &SectionPoint, sigma: &LaurentSeries) -> Result<AOneForm> {
        let depth = self.poles.iter().map(|(_, w)| w.len()).max().unwrap_or(0) as i64 + self.tail.len() as i64;
        let local = self.local_expansion(at, depth + 2)?;
        res2(&two_form_substitute(sigma, &local)?)
    }
}

impl fmt::Display for GlobalTwoForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (s, ws) in &self.poles {
            for (k, w) in ws.iter().enumerate() {
                if w.is_zero() {
                    continue;
                }
                let k = k + 1;
                let pole = if k == 1 {
                    format!("(x - ({s}))")
                } else {
                    format!("(x - ({s}))^{k}")
                };
                parts.push(format!("[{w}] ^ dx/{pole}"));
            }
        }
        for (j, w) in self.tail.iter().enumerate() {
            if !w.is_zero() {
                parts.push(format!("[{w}] ^ x^{j}*dx"));
            }
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Residues at every pole and at infinity, and their sum.
pub fn residue_sum_check(omega: &GlobalTwoForm) -> Result<(Vec<(SectionPoint, AOneForm)>, AOneForm)> {
    let mut sum = AOneForm::zero(omega.ring())?;
    let mut residues = Vec::new();
    for p in omega.points() {
        let r = omega.residue_at(&p)?;
        sum = sum.checked_add(&r)?;
        residues.push((p, r));
    }
    Ok((residues, sum))
}

/// The simple-pole form `sum_s eta_s dx/(x - s)` whose residues are the
/// given assignment; the assignment must sum to zero.
pub fn realize_residues(ring: &Ring, assignment: &[(SectionPoint, AOneForm)]) -> Result<GlobalTwoForm> {
    let mut sum = AOneForm::zero(ring)?;
    for (_, w) in assignment {
        sum = sum.checked_add(w)?;
    }
    if !sum.is_zero() {
        return Err(Error::NonZeroSum(sum.to_string()));
    }
    let points: Vec<SectionPoint> = assignment.iter().map(|(p, _)| p.clone()).collect();
    check_distinct(&points)?;
    let poles = assignment
        .iter()
        .filter_map(|(p, w)| match p {
            SectionPoint::Affine(s) if !w.is_zero() => Some((s.clone(), w.clone())),
            _ => None,
        })
        .collect();
    GlobalTwoForm::simple(ring, poles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::BaseField;

    fn f3e2() -> Ring {
        Ring::truncated(BaseField::Prime(3), 2).unwrap()
    }

    fn linear(ring: &Ring, s: RingElement, n: i64) -> SplitRationalFunction {
        SplitRationalFunction::new(ring.one(), vec![(s, n)]).unwrap()
    }

    fn affine(x: RingElement) -> SectionPoint {
        SectionPoint::Affine(x)
    }

    #[test]
    fn local_expansion_examples() {
        let f5 = Ring::prime_field(5).unwrap();
        let f = linear(&f5, f5.one(), 1);
        let at0 = f.local_expansion(&affine(f5.zero()), 3).unwrap();
        assert_eq!(at0, LaurentSeries::new(&f5, 0, vec![-f5.one(), f5.one()], None).unwrap());
        let inf = f.local_expansion(&SectionPoint::Infinity, 3).unwrap();
        assert_eq!(inf, LaurentSeries::new(&f5, -1, vec![f5.one(), -f5.one()], None).unwrap());

        let r = f3e2();
        let e = r.maximal_ideal_generator().unwrap();
        let f = SplitRationalFunction::new(r.one(), vec![(e.clone(), 1), (r.zero(), -1)]).unwrap();
        let local = f.local_expansion(&affine(r.zero()), 4).unwrap();
        assert_eq!(local, LaurentSeries::one(&r) - LaurentSeries::monomial(&e, -1));
    }

    #[test]
    fn tame_symbol_examples() {
        let f5 = Ring::prime_field(5).unwrap();
        let t = linear(&f5, f5.zero(), 1);
        let one_minus = SplitRationalFunction::new(-f5.one(), vec![(f5.one(), 1)]).unwrap();
        assert!(tame_symbol_at_point(&t, &one_minus, &affine(f5.zero())).unwrap().is_one());
        assert_eq!(tame_symbol_at_point(&t, &t, &affine(f5.zero())).unwrap(), -f5.one());
        assert!(tame_symbol_at_point(&one_minus, &one_minus, &affine(f5.from_i64(3))).unwrap().is_one());
    }

    #[test]
    fn weil_examples() {
        let f5 = Ring::prime_field(5).unwrap();
        let t = linear(&f5, f5.zero(), 1);
        let one_minus = SplitRationalFunction::new(-f5.one(), vec![(f5.one(), 1)]).unwrap();
        assert!(weil_check(&t, &one_minus).unwrap().passes());

        let f7 = Ring::prime_field(7).unwrap();
        let f = SplitRationalFunction::new(f7.one(), vec![(f7.from_i64(1), 1), (f7.from_i64(2), -1)]).unwrap();
        let g = linear(&f7, f7.from_i64(3), 1);
        let report = weil_check(&f, &g).unwrap();
        assert_eq!(report.symbols.len(), 4);
        assert!(report.passes());

        let c = SplitRationalFunction::constant_function(f7.from_i64(3)).unwrap();
        assert!(weil_check(&c, &f).unwrap().passes());
    }

    #[test]
    fn anderson_romo_examples() {
        let r = f3e2();
        let e = r.maximal_ideal_generator().unwrap();
        let x = linear(&r, r.zero(), 1);
        let one_minus = SplitRationalFunction::new(-r.one(), vec![(r.one(), 1)]).unwrap();
        assert!(anderson_romo_check(&x, &one_minus).unwrap().passes());

        let f = linear(&r, e.clone(), 1);
        let g = linear(&r, r.one(), 1);
        let points = [affine(e.clone()), affine(r.one()), SectionPoint::Infinity];
        let report = anderson_romo_check_on(&f, &g, &points).unwrap();
        assert!(report.passes());
        assert_eq!(report.symbols[0].1, (&e - &r.one()).inv().unwrap());

        let collide = [affine(e), affine(r.zero())];
        assert!(matches!(
            anderson_romo_check_on(&f, &g, &collide),
            Err(Error::SectionCollision(..))
        ));
    }

    #[test]
    fn residues_of_global_forms() {
        let r = f3e2();
        let s = r.one();
        let w = AOneForm::new(r.one()).unwrap();
        let omega = GlobalTwoForm::simple(&r, vec![(s.clone(), w.clone())]).unwrap();
        assert_eq!(omega.residue_at(&affine(s)).unwrap(), w);
        assert_eq!(omega.residue_at(&SectionPoint::Infinity).unwrap(), w.neg());
        assert!(omega.residue_at(&affine(r.from_i64(2))).unwrap().is_zero());
        let (_, sum) = residue_sum_check(&omega).unwrap();
        assert!(sum.is_zero());
    }

    #[test]
    fn realize_examples() {
        let r = f3e2();
        let w = AOneForm::new(r.one()).unwrap();
        let s1 = affine(r.from_i64(2));
        let omega = realize_residues(&r, &[(s1.clone(), w.clone()), (SectionPoint::Infinity, w.neg())]).unwrap();
        assert_eq!(omega.residue_at(&s1).unwrap(), w);
        assert_eq!(omega.residue_at(&SectionPoint::Infinity).unwrap(), w.neg());
        assert!(realize_residues(&r, &[]).unwrap().poles().is_empty());
        assert!(matches!(
            realize_residues(&r, &[(s1, w)]),
            Err(Error::NonZeroSum(_))
        ));
    }

    #[test]
    fn display() {
        let q = Ring::rationals();
        let f = SplitRationalFunction::new(q.from_i64(2), vec![(q.from_i64(-1), 2), (q.zero(), -1)]).unwrap();
        assert_eq!(f.to_string(), "2 * (x + 1)^2 * x^-1");
    }
}
