//! Randomized and enumerated verification suites.

mod forms;
mod reciprocity;
mod symbols;

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use residue_symbols::random::{self, SeriesShape};
use residue_symbols::{BaseField, LaurentSeries, MHatElement, Result, Ring};

use crate::report::{Case, CaseRecord, Report};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Lemma34,
    Lemma35,
    DlogSquare,
    Prop54,
    BilinearitySteinberg,
    UniformizerInvariance,
    ReciprocityAr,
    Weil,
    ResidueSum,
    DecomposeRoundtrip,
    PrecisionCoherence,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Lemma34,
        Suite::Lemma35,
        Suite::DlogSquare,
        Suite::Prop54,
        Suite::BilinearitySteinberg,
        Suite::UniformizerInvariance,
        Suite::ReciprocityAr,
        Suite::Weil,
        Suite::ResidueSum,
        Suite::DecomposeRoundtrip,
        Suite::PrecisionCoherence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma34 => "lemma34",
            Suite::Lemma35 => "lemma35",
            Suite::DlogSquare => "dlog-square",
            Suite::Prop54 => "prop54",
            Suite::BilinearitySteinberg => "bilinearity-steinberg",
            Suite::UniformizerInvariance => "uniformizer-invariance",
            Suite::ReciprocityAr => "reciprocity-ar",
            Suite::Weil => "weil",
            Suite::ResidueSum => "residue-sum",
            Suite::DecomposeRoundtrip => "decompose-roundtrip",
            Suite::PrecisionCoherence => "precision-coherence",
        }
    }

    /// Default primes, nilpotency orders and exponent bound.
    fn defaults(self) -> (&'static [u64], &'static [u32], i64) {
        match self {
            Suite::Lemma34 => (&[2, 3, 5], &[2, 3], 6),
            Suite::Lemma35 => (&[2, 3, 5, 7], &[], 6),
            Suite::DlogSquare => (&[2, 3, 5, 7], &[2, 3, 4], 3),
            Suite::Prop54 => (&[2, 3, 5], &[2, 3], 5),
            Suite::BilinearitySteinberg | Suite::UniformizerInvariance | Suite::DecomposeRoundtrip => {
                (&[2, 3, 5], &[2, 3], 3)
            }
            Suite::ReciprocityAr | Suite::ResidueSum => (&[2, 3, 5], &[2, 3], 3),
            Suite::Weil => (&[2, 3, 5, 7], &[], 3),
            Suite::PrecisionCoherence => (&[2, 3, 5, 7], &[], 3),
        }
    }

    fn default_rings(self, primes: &[u64], orders: &[u32], xprec: u32) -> Result<Vec<Ring>> {
        let mut rings = Vec::new();
        let trunc = |p: u64, m: u32| Ring::truncated(BaseField::Prime(p), m);
        let kato = |p: u64, m: u32| Ring::truncated_in(BaseField::Prime(p), "x", m);
        match self {
            Suite::Lemma34 => {
                for &p in primes {
                    for &m in orders {
                        rings.push(trunc(p, m)?);
                    }
                    rings.push(Ring::prime_power(p, 2)?);
                    rings.push(kato(p, xprec)?);
                }
            }
            Suite::Lemma35 | Suite::PrecisionCoherence => {
                for &p in primes {
                    rings.push(kato(p, xprec)?);
                }
            }
            Suite::DlogSquare => {
                for &p in primes {
                    for &m in orders {
                        rings.push(trunc(p, m)?);
                    }
                    for n in 1..=xprec {
                        rings.push(kato(p, n)?);
                    }
                }
                for &m in orders {
                    rings.push(Ring::truncated(BaseField::Rationals, m)?);
                }
            }
            Suite::Prop54 | Suite::ResidueSum => {
                for &p in primes {
                    for &m in orders {
                        rings.push(trunc(p, m)?);
                    }
                }
                rings.push(Ring::truncated(BaseField::Rationals, 2)?);
                if self == Suite::ResidueSum {
                    rings.push(Ring::prime_field(primes.first().copied().unwrap_or(2))?);
                    rings.push(Ring::rationals());
                }
            }
            Suite::BilinearitySteinberg
            | Suite::UniformizerInvariance
            | Suite::ReciprocityAr
            | Suite::DecomposeRoundtrip => {
                for &p in primes {
                    rings.push(Ring::prime_field(p)?);
                    for &m in orders {
                        rings.push(trunc(p, m)?);
                    }
                    rings.push(Ring::prime_power(p, 2)?);
                }
                rings.push(Ring::rationals());
                rings.push(Ring::truncated(BaseField::Rationals, 2)?);
                if self == Suite::UniformizerInvariance {
                    for &p in primes {
                        rings.push(kato(p, xprec)?);
                    }
                }
            }
            Suite::Weil => {
                for &p in primes {
                    rings.push(Ring::prime_field(p)?);
                }
                rings.push(Ring::rationals());
            }
        }
        Ok(rings)
    }
}

/// Options for a suite run; unset fields take the suite's defaults.
#[derive(Clone, Debug, Default)]
pub struct SuiteOptions {
    pub rings: Vec<Ring>,
    pub primes: Vec<u64>,
    pub orders: Vec<u32>,
    pub max_exp: Option<i64>,
    pub cases: Option<usize>,
    pub seed: u64,
    pub tprec: Option<i64>,
    pub xprec: Option<u32>,
    pub polar_depth: Option<i64>,
    pub only_case: Option<usize>,
    pub timing: bool,
}

/// A fully resolved suite configuration.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub rings: Vec<Ring>,
    pub primes: Vec<u64>,
    pub orders: Vec<u32>,
    pub max_exp: i64,
    pub cases: usize,
    pub seed: u64,
    /// Coefficients drawn above the winding index; `None` scales with the ring.
    pub tprec: Option<i64>,
    pub xprec: u32,
    pub polar_depth: i64,
    pub only_case: Option<usize>,
    pub timing: bool,
}

impl SuiteConfig {
    pub fn resolve(suite: Suite, opts: SuiteOptions) -> Result<SuiteConfig> {
        let (primes, orders, max_exp) = suite.defaults();
        let primes = if opts.primes.is_empty() { primes.to_vec() } else { opts.primes };
        let orders = if opts.orders.is_empty() { orders.to_vec() } else { opts.orders };
        let xprec = opts.xprec.unwrap_or(match suite {
            Suite::Lemma35 | Suite::DlogSquare | Suite::PrecisionCoherence => 4,
            _ => 3,
        });
        let rings = if opts.rings.is_empty() {
            suite.default_rings(&primes, &orders, xprec)?
        } else {
            opts.rings
        };
        let cases = opts.cases.unwrap_or(match suite {
            Suite::Prop54 => 16,
            _ => 100,
        });
        Ok(SuiteConfig {
            suite,
            rings,
            primes,
            orders,
            max_exp: opts.max_exp.unwrap_or(max_exp),
            cases,
            seed: opts.seed,
            tprec: opts.tprec,
            xprec,
            polar_depth: opts.polar_depth.unwrap_or(2),
            only_case: opts.only_case,
            timing: opts.timing,
        })
    }

    fn echo(&self) -> serde_json::Value {
        json!({
            "rings": self.rings.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
            "primes": self.primes,
            "orders": self.orders,
            "max_exp": self.max_exp,
            "cases": self.cases,
            "seed": self.seed,
            "tprec": self.tprec,
            "xprec": self.xprec,
            "polar_depth": self.polar_depth,
        })
    }

    pub(crate) fn pick_ring<R: Rng>(&self, rng: &mut R) -> Ring {
        self.rings[rng.gen_range(0..self.rings.len())].clone()
    }

    /// Shape of random unit series over `ring`: enough coefficients that
    /// every symbol of two such units is determined.
    pub(crate) fn shape(&self, ring: &Ring) -> SeriesShape {
        let e = ring.nilpotency_index() as i64;
        SeriesShape {
            max_winding: 2,
            terms: self.tprec.unwrap_or(4 + e * (self.polar_depth + 2)),
            max_polar_depth: self.polar_depth,
            with_precision: true,
        }
    }

    pub(crate) fn unit_series<R: Rng>(&self, ring: &Ring, rng: &mut R) -> LaurentSeries {
        random::unit_series(ring, &self.shape(ring), rng)
    }

    /// `x^a * u` with `a` in `[-2, 2]` and `u` a random unit series in `z`.
    pub(crate) fn mhat<R: Rng>(&self, ring: &Ring, rng: &mut R) -> Result<MHatElement> {
        let a = rng.gen_range(-2..=2);
        MHatElement::new(a, self.unit_series(ring, rng))
    }
}

fn case_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Run `count` cases in parallel; records come back ordered by index.
pub(crate) fn run_indexed<F>(cfg: &SuiteConfig, count: usize, body: F) -> Vec<CaseRecord>
where
    F: Fn(&mut Case, &mut ChaCha8Rng) -> Result<()> + Sync,
{
    let run_one = |i: usize| {
        let mut rng = case_rng(cfg.seed, i);
        let mut case = Case::new(i);
        if let Err(e) = body(&mut case, &mut rng) {
            case.fail(&e);
        }
        case.finish()
    };
    match cfg.only_case {
        Some(i) => vec![run_one(i)],
        None => (0..count).into_par_iter().map(run_one).collect(),
    }
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<Report> {
    let start = Instant::now();
    let cases = match cfg.suite {
        Suite::Lemma34 => symbols::lemma34(cfg),
        Suite::Lemma35 => symbols::lemma35(cfg),
        Suite::BilinearitySteinberg => symbols::bilinearity_steinberg(cfg),
        Suite::UniformizerInvariance => symbols::uniformizer_invariance(cfg),
        Suite::DecomposeRoundtrip => symbols::decompose_roundtrip(cfg),
        Suite::PrecisionCoherence => symbols::precision_coherence(cfg),
        Suite::DlogSquare => forms::dlog_square(cfg),
        Suite::Prop54 => forms::prop54(cfg)?,
        Suite::ResidueSum => forms::residue_sum(cfg),
        Suite::ReciprocityAr => reciprocity::reciprocity_ar(cfg),
        Suite::Weil => reciprocity::weil(cfg),
    };
    let elapsed = cfg.timing.then(|| start.elapsed().as_millis());
    Ok(Report::new(cfg.suite.name(), cfg.echo(), cases, elapsed))
}
