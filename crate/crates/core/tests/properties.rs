use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use residue_symbols::random::{self, SeriesShape};
use residue_symbols::{
    contou_carrere, d_series, dlog, dlog_square, kato_residue, witt_decompose, BaseField, LaurentSeries, MHatElement,
    Ring, RingMap,
};

fn rings() -> Vec<Ring> {
    let mut out = vec![Ring::rationals(), Ring::truncated(BaseField::Rationals, 2).unwrap()];
    for p in [2, 3, 5] {
        out.push(Ring::prime_field(p).unwrap());
        out.push(Ring::truncated(BaseField::Prime(p), 2).unwrap());
        out.push(Ring::truncated(BaseField::Prime(p), 3).unwrap());
        out.push(Ring::prime_power(p, 2).unwrap());
    }
    out
}

fn form_rings() -> Vec<Ring> {
    rings().into_iter().filter(|r| r.supports_forms()).collect()
}

/// Enough coefficients that symbols of two draws are determined.
fn shape(ring: &Ring) -> SeriesShape {
    SeriesShape {
        terms: 4 + 4 * ring.nilpotency_index() as i64,
        ..SeriesShape::default()
    }
}

fn setup(seed: u64, pool: &[Ring]) -> (Ring, ChaCha8Rng) {
    let ring = pool[(seed % pool.len() as u64) as usize].clone();
    (ring, ChaCha8Rng::seed_from_u64(seed))
}

fn units(ring: &Ring, rng: &mut ChaCha8Rng, n: usize) -> Vec<LaurentSeries> {
    (0..n).map(|_| random::unit_series(ring, &shape(ring), rng)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn symbol_is_bilinear(seed: u64) {
        let (ring, mut rng) = setup(seed, &rings());
        let v = units(&ring, &mut rng, 3);
        let (f, g, h) = (&v[0], &v[1], &v[2]);
        let cc = |a: &LaurentSeries, b: &LaurentSeries| contou_carrere(a, b).unwrap();
        prop_assert_eq!(cc(&(f * g), h), cc(f, h) * cc(g, h));
        prop_assert_eq!(cc(f, &(g * h)), cc(f, g) * cc(f, h));
    }

    #[test]
    fn symbol_is_alternating(seed: u64) {
        let (ring, mut rng) = setup(seed, &rings());
        let v = units(&ring, &mut rng, 2);
        let (f, g) = (&v[0], &v[1]);
        prop_assert!((contou_carrere(f, g).unwrap() * contou_carrere(g, f).unwrap()).is_one());
        prop_assert!(contou_carrere(f, &-f).unwrap().is_one());
    }

    #[test]
    fn steinberg_relation(seed: u64) {
        let (ring, mut rng) = setup(seed, &rings());
        let one = LaurentSeries::one(&ring);
        let s = loop {
            let s = random::unit_series(&ring, &shape(&ring), &mut rng);
            let r = &one - &s;
            // both units, with the polar tail of 1 - s no deeper than that of s
            if r.is_unit() == Ok(true) && r.winding_number().unwrap() - r.lowest_index().unwrap() <= 2 {
                break s;
            }
        };
        prop_assert!(contou_carrere(&s, &(&one - &s)).unwrap().is_one());
    }

    #[test]
    fn symbol_is_functorial(seed: u64) {
        let pool: Vec<Ring> = rings().into_iter().filter(|r| r.nilpotency_index() > 1).collect();
        let (ring, mut rng) = setup(seed, &pool);
        let v = units(&ring, &mut rng, 2);
        let mut maps = vec![RingMap::residue(&ring)];
        if ring.variable().is_some() {
            maps.push(RingMap::reduce_order(&ring, ring.nilpotency_index() - 1).unwrap());
        }
        for h in maps {
            let hf = v[0].map_coefficients(&h).unwrap();
            let hg = v[1].map_coefficients(&h).unwrap();
            let image = h.apply(&contou_carrere(&v[0], &v[1]).unwrap()).unwrap();
            prop_assert_eq!(contou_carrere(&hf, &hg).unwrap(), image);
        }
    }

    #[test]
    fn symbol_ignores_change_of_uniformizer(seed: u64) {
        let (ring, mut rng) = setup(seed, &rings());
        let v = units(&ring, &mut rng, 2);
        let sigma = random::uniformizer(&ring, 3, &mut rng);
        let moved = contou_carrere(&v[0].substitute(&sigma).unwrap(), &v[1].substitute(&sigma).unwrap()).unwrap();
        prop_assert_eq!(moved, contou_carrere(&v[0], &v[1]).unwrap());
    }

    #[test]
    fn winding_is_additive(seed: u64) {
        let (ring, mut rng) = setup(seed, &rings());
        let v = units(&ring, &mut rng, 2);
        let w = |s: &LaurentSeries| s.winding_number().unwrap();
        prop_assert_eq!(w(&(&v[0] * &v[1])), w(&v[0]) + w(&v[1]));
    }

    #[test]
    fn decomposition_round_trips(seed: u64) {
        let (ring, mut rng) = setup(seed, &rings());
        let f = random::unit_series(&ring, &shape(&ring), &mut rng);
        let back = witt_decompose(&f).unwrap().recompose_full().unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn differential_obeys_leibniz(seed: u64) {
        let (ring, mut rng) = setup(seed, &form_rings());
        let v = units(&ring, &mut rng, 2);
        let (f, g) = (&v[0], &v[1]);
        let lhs = d_series(&(f * g)).unwrap();
        let rhs = d_series(g).unwrap().mul_series(f).unwrap()
            .checked_add(&d_series(f).unwrap().mul_series(g).unwrap()).unwrap();
        prop_assert!(lhs.agrees_with(&rhs), "{} vs {}", lhs, rhs);
        let sum = dlog(f).unwrap().checked_add(&dlog(g).unwrap()).unwrap();
        prop_assert!(dlog(&(f * g)).unwrap().agrees_with(&sum));
    }

    #[test]
    fn residue_square_commutes(seed: u64) {
        let (ring, mut rng) = setup(seed, &form_rings());
        let v = units(&ring, &mut rng, 2);
        let (residue, symbol) = dlog_square(&v[0], &v[1]).unwrap();
        prop_assert_eq!(residue, symbol);
    }

    #[test]
    fn kato_symbol_is_coherent_under_truncation(seed: u64, p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let ring = Ring::truncated_in(BaseField::Prime(p), "x", 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let draw = |rng: &mut ChaCha8Rng, e: i64| {
            MHatElement::new(e, random::unit_series(&ring, &shape(&ring), rng)).unwrap()
        };
        let f = draw(&mut rng, (seed % 5) as i64 - 2);
        let g = draw(&mut rng, (seed / 5 % 5) as i64 - 2);
        let full = kato_residue(&f, &g).unwrap();
        for m in 1..3 {
            let low = kato_residue(&f.truncate(m).unwrap(), &g.truncate(m).unwrap()).unwrap();
            prop_assert_eq!(full.truncate(m).unwrap(), low);
        }
    }
}
