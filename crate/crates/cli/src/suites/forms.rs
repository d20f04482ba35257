use num::integer::gcd;
use rand::seq::SliceRandom;
use rand::Rng;

use residue_symbols::random;
use residue_symbols::{
    dlog2, dlog_a, kato_square, realize_residues, res2, residue_sum_check, AOneForm, Error,
    KatoDifferential, LaurentSeries, Result, Ring, RingElement, RingMap, SectionPoint,
};

use super::{case_rng, run_indexed, SuiteConfig};
use crate::report::CaseRecord;

pub(super) fn dlog_square(cfg: &SuiteConfig) -> Vec<CaseRecord> {
    run_indexed(cfg, cfg.cases, |case, rng| {
        let ring = cfg.pick_ring(rng);
        case.input("ring", &ring);
        if ring.variable() != Some("x") {
            let f = cfg.unit_series(&ring, rng);
            let g = cfg.unit_series(&ring, rng);
            case.input("f", &f);
            case.input("g", &g);
            let (residue, symbol) = residue_symbols::dlog_square(&f, &g)?;
            case.check("square", &symbol, &residue);
            return Ok(());
        }
        // levelwise over k[x]/(x^n) in the variable z, and compatibility
        // with every lower level
        let f = cfg.mhat(&ring, rng)?;
        let g = cfg.mhat(&ring, rng)?;
        case.input("f", &f);
        case.input("g", &g);
        let (residue, symbol) = kato_square(&f, &g)?;
        case.check("square", &symbol, &residue);
        for m in 1..f.x_precision() {
            let h = RingMap::reduce_order(&ring, m)?;
            let lower = |d: &KatoDifferential| -> Result<KatoDifferential> {
                Ok(KatoDifferential {
                    log: h.apply(&d.log)?,
                    regular: d.regular.map(&h)?,
                })
            };
            let (r, s) = kato_square(&f.truncate(m)?, &g.truncate(m)?)?;
            case.check(&format!("residue at n={m}"), &lower(&residue)?, &r);
            case.check(&format!("symbol at n={m}"), &lower(&symbol)?, &s);
        }
        Ok(())
    })
}

/// `Res^2(dlog^2(f, g))` for exact inputs, raising the working precision
/// until the residue is determined.
fn exact_residue(f: &LaurentSeries, g: &LaurentSeries, start: i64) -> Result<AOneForm> {
    let mut n = start;
    loop {
        match dlog2(&f.with_precision(n), &g.with_precision(n)).and_then(|w| res2(&w)) {
            Err(Error::IndeterminateAtPrecision(_)) if n < 64 * start => n *= 2,
            r => return r,
        }
    }
}

/// Coefficient domains of the seven identities.
#[derive(Clone, Copy)]
enum Domain {
    All,
    Units,
    Ideal,
}

fn domain(ring: &Ring, d: Domain) -> Option<Vec<RingElement>> {
    let all = ring.elements()?;
    Some(match d {
        Domain::All => all,
        Domain::Units => all.into_iter().filter(|x| x.is_unit()).collect(),
        Domain::Ideal => all.into_iter().filter(|x| x.is_nilpotent()).collect(),
    })
}

fn draw<R: Rng>(ring: &Ring, d: Domain, rng: &mut R) -> RingElement {
    match d {
        Domain::All => random::element(ring, rng),
        Domain::Units => random::unit(ring, rng),
        Domain::Ideal => random::nilpotent(ring, rng),
    }
}

/// One block of the enumeration: identity, ring and exponents.
struct Block {
    ring: Ring,
    clause: u8,
    n: i64,
    m: i64,
}

fn clause_domains(clause: u8) -> (Domain, Domain) {
    match clause {
        1 => (Domain::All, Domain::All),
        2 => (Domain::Ideal, Domain::Ideal),
        3 => (Domain::Units, Domain::All),
        4 => (Domain::Units, Domain::Ideal),
        5 => (Domain::Units, Domain::Units),
        6 => (Domain::All, Domain::Ideal),
        _ => (Domain::All, Domain::Ideal),
    }
}

fn clause_exponents(clause: u8, k: i64) -> Vec<(i64, i64)> {
    let pos: Vec<i64> = (1..=k).collect();
    let any: Vec<i64> = (-k..=k).collect();
    let neg: Vec<i64> = (-k..=-1).collect();
    let grid = |xs: &[i64], ys: &[i64]| -> Vec<(i64, i64)> {
        xs.iter().flat_map(|&x| ys.iter().map(move |&y| (x, y))).collect()
    };
    match clause {
        1 | 2 | 6 => grid(&pos, &pos),
        3 => grid(&any, &pos),
        4 => grid(&any, &neg),
        5 => grid(&any, &any),
        _ => grid(&pos, &[0]),
    }
}

/// The identity's two arguments and its closed-form value.
fn instance(block: &Block, a: &RingElement, b: &RingElement) -> Result<(LaurentSeries, LaurentSeries, AOneForm)> {
    let ring = &block.ring;
    let (n, m) = (block.n, block.m);
    let one = LaurentSeries::one(ring);
    let mono = LaurentSeries::monomial;
    let zero = AOneForm::zero(ring)?;
    Ok(match block.clause {
        1 => (&one - &mono(a, n), &one - &mono(b, m), zero),
        2 => (&one - &mono(a, -n), &one - &mono(b, -m), zero),
        3 | 4 => (mono(a, n), &one - &mono(b, m), zero),
        5 => {
            let expected = dlog_a(a)?
                .scale(&ring.from_i64(m))?
                .checked_add(&dlog_a(b)?.scale(&ring.from_i64(-n))?)?;
            (mono(a, n), mono(b, m), expected)
        }
        6 => {
            let d = gcd(n, m);
            let c = (ring.one() - a.pow(m / d)? * b.pow(n / d)?).pow(d)?;
            (&one - &mono(a, n), &one - &mono(b, -m), dlog_a(&c)?)
        }
        _ => {
            // the power series is f = a + a^2 t
            let big_m = ring.nilpotency_index() as i64;
            let f = mono(a, 0) + mono(&(a * a), 1);
            (&one - &(f * mono(&ring.one(), big_m * n + 1)), &one - &mono(b, -n), zero)
        }
    })
}

/// The seven closed-form identities behind the commuting square, for every
/// exponent pair in range and every coefficient pair when there are at most
/// `cases` of them (a seeded sample of `cases` pairs otherwise).
pub(super) fn prop54(cfg: &SuiteConfig) -> Result<Vec<CaseRecord>> {
    let mut blocks = Vec::new();
    for ring in &cfg.rings {
        if !ring.supports_forms() {
            return Err(Error::UnsupportedRing {
                op: "prop54",
                ring: ring.to_string(),
            });
        }
        for clause in 1..=7u8 {
            for (n, m) in clause_exponents(clause, cfg.max_exp) {
                blocks.push(Block {
                    ring: ring.clone(),
                    clause,
                    n,
                    m,
                });
            }
        }
    }
    // coefficient pairs per block, fixed before the parallel run
    let mut work = Vec::new();
    for (bi, block) in blocks.iter().enumerate() {
        let (da, db) = clause_domains(block.clause);
        let mut rng = case_rng(cfg.seed ^ 0x5eed, bi);
        let pairs: Vec<(RingElement, RingElement)> =
            match (domain(&block.ring, da), domain(&block.ring, db)) {
                (Some(xs), Some(ys)) if xs.len() * ys.len() <= cfg.cases => xs
                    .iter()
                    .flat_map(|x| ys.iter().map(move |y| (x.clone(), y.clone())))
                    .collect(),
                _ => {
                    let mut v: Vec<_> = (0..cfg.cases)
                        .map(|_| (draw(&block.ring, da, &mut rng), draw(&block.ring, db, &mut rng)))
                        .collect();
                    v.shuffle(&mut rng);
                    v
                }
            };
        work.extend(pairs.into_iter().map(|(a, b)| (bi, a, b)));
    }
    Ok(run_indexed(cfg, work.len(), |case, _| {
        let (bi, a, b) = &work[case.index()];
        let block = &blocks[*bi];
        let (f, g, expected) = instance(block, a, b)?;
        case.input("ring", &block.ring);
        case.input("clause", block.clause);
        case.input("f", &f);
        case.input("g", &g);
        let e = block.ring.nilpotency_index() as i64;
        let start = 4 + 2 * e * (block.n.abs() + block.m.abs() + 1);
        case.check("res2", &expected, &exact_residue(&f, &g, start)?);
        Ok(())
    }))
}

pub(super) fn residue_sum(cfg: &SuiteConfig) -> Vec<CaseRecord> {
    run_indexed(cfg, cfg.cases, |case, rng| {
        let ring = cfg.pick_ring(rng);
        let omega = random::simple_pole_form(&ring, 5, rng);
        case.input("ring", &ring);
        case.input("omega", &omega);
        let (residues, sum) = residue_sum_check(&omega)?;
        case.check("sum", &AOneForm::zero(&ring)?, &sum);
        // a fresh assignment: random residues at random points, balanced at
        // infinity
        let donor = random::simple_pole_form(&ring, 4, rng);
        let mut assignment: Vec<(SectionPoint, AOneForm)> = Vec::new();
        let mut total = AOneForm::zero(&ring)?;
        for (s, _) in donor.poles() {
            let w = AOneForm::new(random::element(&ring, rng))?;
            total = total.checked_add(&w)?;
            assignment.push((SectionPoint::Affine(s.clone()), w));
        }
        assignment.push((SectionPoint::Infinity, total.neg()));
        for (label, assign) in [("omega", residues), ("assignment", assignment)] {
            let realized = realize_residues(&ring, &assign)?;
            let back = assign
                .iter()
                .map(|(pt, _)| Ok((pt.clone(), realized.residue_at(pt)?)))
                .collect::<Result<Vec<_>>>()?;
            let show = |v: &[(SectionPoint, AOneForm)]| {
                v.iter().map(|(p, w)| format!("{p}: {w}")).collect::<Vec<_>>().join(", ")
            };
            case.check(&format!("realize {label}"), &show(&assign), &show(&back));
        }
        Ok(())
    })
}
