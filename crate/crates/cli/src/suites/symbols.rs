use num::integer::gcd;
use rand::Rng;

use residue_symbols::random;
use residue_symbols::{
    contou_carrere, kato_residue, res1, res2, witt_decompose, KatoValue, LaurentSeries, MHatElement, Result, Ring,
    RingElement,
};

use super::{run_indexed, SuiteConfig};
use crate::report::CaseRecord;

fn is_kato(ring: &Ring) -> bool {
    ring.variable() == Some("x")
}

/// `1 - c t^k`, exact.
fn one_minus(c: &RingElement, k: i64) -> LaurentSeries {
    LaurentSeries::one(c.ring()) - LaurentSeries::monomial(c, k)
}

/// `(1 - a^(m/d) b^(n/d))^d` with `d = gcd(n, m)`.
fn pair_closed_form(a: &RingElement, b: &RingElement, n: i64, m: i64) -> Result<RingElement> {
    let d = gcd(n, m);
    (a.ring().one() - a.pow(m / d)? * b.pow(n / d)?).pow(d)
}

/// The symbol on `A((t))`, or Kato's residue of the unit parts when the
/// ring is `k[x]/(x^m)`.
fn symbol(f: &LaurentSeries, g: &LaurentSeries) -> Result<KatoValue> {
    if is_kato(f.ring()) {
        kato_residue(&MHatElement::new(0, f.clone())?, &MHatElement::new(0, g.clone())?)
    } else {
        Ok(KatoValue {
            exponent: 0,
            unit: contou_carrere(f, g)?,
        })
    }
}

fn unit_value(u: RingElement) -> KatoValue {
    KatoValue { exponent: 0, unit: u }
}

pub(super) fn lemma34(cfg: &SuiteConfig) -> Vec<CaseRecord> {
    run_indexed(cfg, cfg.cases, |case, rng| {
        let ring = cfg.pick_ring(rng);
        let clause = rng.gen_range(1..=4);
        let n = rng.gen_range(1..=cfg.max_exp);
        let m = rng.gen_range(1..=cfg.max_exp);
        let nil = |rng: &mut _| random::nilpotent(&ring, rng);
        let any = |rng: &mut _| random::element(&ring, rng);
        let (a, b, sn, sm) = match clause {
            1 => (nil(rng), nil(rng), -n, -m),
            2 => (any(rng), any(rng), n, m),
            3 => (any(rng), nil(rng), n, -m),
            _ => (nil(rng), any(rng), -n, m),
        };
        let f = one_minus(&a, sn);
        let g = one_minus(&b, sm);
        case.input("ring", &ring);
        case.input("clause", clause);
        case.input("f", &f);
        case.input("g", &g);
        let expected = match clause {
            1 | 2 => ring.one(),
            3 => pair_closed_form(&a, &b, n, m)?,
            _ => pair_closed_form(&a, &b, n, m)?.inv()?,
        };
        let fg = symbol(&f, &g)?;
        case.check("symbol", &unit_value(expected), &fg);
        if clause >= 3 {
            // the two mixed clauses are computed independently and must be
            // inverse to each other
            let gf = symbol(&g, &f)?;
            case.check("antisymmetry", &unit_value(ring.one()), &fg.checked_mul(&gf)?);
        }
        Ok(())
    })
}

pub(super) fn lemma35(cfg: &SuiteConfig) -> Vec<CaseRecord> {
    run_indexed(cfg, cfg.cases, |case, rng| {
        let ring = cfg.pick_ring(rng);
        let z = |c: &RingElement, k: i64| LaurentSeries::monomial(c, k);
        // an element x^v u of k((x))^*, with x itself drawn often
        let scalar = |rng: &mut rand_chacha::ChaCha8Rng| -> (i64, RingElement) {
            if rng.gen_bool(0.25) {
                (1, ring.one())
            } else {
                (rng.gen_range(-2..=2), random::unit(&ring, rng))
            }
        };
        let clause = rng.gen_range(1..=2);
        let n = rng.gen_range(-cfg.max_exp..=cfg.max_exp);
        let (va, ua) = scalar(rng);
        let f = MHatElement::new(va, z(&ua, n))?;
        let (g, expected) = if clause == 1 {
            let m = rng.gen_range(-cfg.max_exp..=cfg.max_exp);
            let (vb, ub) = scalar(rng);
            let sign = if (n * m).rem_euclid(2) == 1 { -ring.one() } else { ring.one() };
            let expected = KatoValue {
                exponent: va * m - vb * n,
                unit: sign * ua.pow(m)? * ub.pow(-n)?,
            };
            (MHatElement::new(vb, z(&ub, m))?, expected)
        } else {
            let mut m = 0;
            while m == 0 {
                m = rng.gen_range(-cfg.max_exp..=cfg.max_exp);
            }
            let b = if m > 0 {
                random::element(&ring, rng)
            } else {
                random::nilpotent(&ring, rng)
            };
            (MHatElement::new(0, one_minus(&b, m))?, unit_value(ring.one()))
        };
        case.input("ring", &ring);
        case.input("clause", clause);
        case.input("f", &f);
        case.input("g", &g);
        case.check("symbol", &expected, &kato_residue(&f, &g)?);
        Ok(())
    })
}

/// A unit `s` with `1 - s` also a unit whose nilpotent tail is no deeper
/// than the configured polar depth, so that `<s, 1 - s>` is determined.
fn steinberg_unit(cfg: &SuiteConfig, ring: &Ring, rng: &mut rand_chacha::ChaCha8Rng) -> LaurentSeries {
    loop {
        let s = cfg.unit_series(ring, rng);
        let r = LaurentSeries::one(ring) - &s;
        if r.is_unit() != Ok(true) {
            continue;
        }
        if let (Ok(w), Some(lo)) = (r.winding_number(), r.lowest_index()) {
            if w - lo <= cfg.polar_depth {
                return s;
            }
        }
    }
}

pub(super) fn bilinearity_steinberg(cfg: &SuiteConfig) -> Vec<CaseRecord> {
    run_indexed(cfg, cfg.cases, |case, rng| {
        let ring = cfg.pick_ring(rng);
        let f = cfg.unit_series(&ring, rng);
        let g = cfg.unit_series(&ring, rng);
        let h = cfg.unit_series(&ring, rng);
        let s = steinberg_unit(cfg, &ring, rng);
        case.input("ring", &ring);
        case.input("f", &f);
        case.input("g", &g);
        case.input("h", &h);
        case.input("s", &s);
        let cc = contou_carrere;
        let fh = cc(&f, &h)?;
        let gh = cc(&g, &h)?;
        let fg = cc(&f, &g)?;
        case.check("<fg,h>", &(&fh * &gh), &cc(&(&f * &g), &h)?);
        case.check("<f,gh>", &(&fg * &fh), &cc(&f, &(&g * &h))?);
        case.check("<f,g><g,f>", &ring.one(), &(&fg * &cc(&g, &f)?));
        let one_minus_s = LaurentSeries::one(&ring) - &s;
        case.check("<s,1-s>", &ring.one(), &cc(&s, &one_minus_s)?);
        Ok(())
    })
}

pub(super) fn uniformizer_invariance(cfg: &SuiteConfig) -> Vec<CaseRecord> {
    run_indexed(cfg, cfg.cases, |case, rng| {
        let ring = cfg.pick_ring(rng);
        let sigma = random::uniformizer(&ring, 3, rng);
        case.input("ring", &ring);
        if is_kato(&ring) {
            let f = cfg.mhat(&ring, rng)?;
            let g = cfg.mhat(&ring, rng)?;
            case.input("f", &f);
            case.input("g", &g);
            case.input("sigma", sigma.display_in("z"));
            let moved = kato_residue(&f.substitute(&sigma)?, &g.substitute(&sigma)?)?;
            case.check("{f,g}", &kato_residue(&f, &g)?, &moved);
            return Ok(());
        }
        let f = cfg.unit_series(&ring, rng);
        let g = cfg.unit_series(&ring, rng);
        case.input("f", &f);
        case.input("g", &g);
        case.input("sigma", &sigma);
        let moved = contou_carrere(&f.substitute(&sigma)?, &g.substitute(&sigma)?)?;
        case.check("<f,g>", &contou_carrere(&f, &g)?, &moved);
        if ring.supports_forms() {
            use residue_symbols::{dlog, dlog2, form_substitute, two_form_substitute};
            let w = dlog2(&f, &g)?;
            case.check("res2", &res2(&w)?, &res2(&two_form_substitute(&sigma, &w)?)?);
            let a = dlog(&f)?;
            case.check("res1", &res1(&a)?, &res1(&form_substitute(&sigma, &a)?)?);
        }
        Ok(())
    })
}

pub(super) fn decompose_roundtrip(cfg: &SuiteConfig) -> Vec<CaseRecord> {
    run_indexed(cfg, cfg.cases, |case, rng| {
        let ring = cfg.pick_ring(rng);
        let f = cfg.unit_series(&ring, rng);
        let g = cfg.unit_series(&ring, rng);
        case.input("ring", &ring);
        case.input("f", &f);
        case.input("g", &g);
        let d = witt_decompose(&f)?;
        let back = d.recompose_full()?;
        case.holds("agrees", back.agrees_with(&f), &back);
        let show = |p: Option<i64>| p.map_or("exact".to_string(), |n| n.to_string());
        case.check("precision", &show(f.precision()), &show(back.precision()));
        let w = |s: &LaurentSeries| s.winding_number();
        case.check("w(fg)", &(w(&f)? + w(&g)?), &w(&(&f * &g))?);
        Ok(())
    })
}

pub(super) fn precision_coherence(cfg: &SuiteConfig) -> Vec<CaseRecord> {
    run_indexed(cfg, cfg.cases, |case, rng| {
        let ring = cfg.pick_ring(rng);
        let f = cfg.mhat(&ring, rng)?;
        let g = cfg.mhat(&ring, rng)?;
        case.input("ring", &ring);
        case.input("f", &f);
        case.input("g", &g);
        let full = kato_residue(&f, &g)?;
        for m in 1..f.x_precision() {
            let low = kato_residue(&f.truncate(m)?, &g.truncate(m)?)?;
            case.check(&format!("m'={m}"), &full.truncate(m)?, &low);
        }
        Ok(())
    })
}
