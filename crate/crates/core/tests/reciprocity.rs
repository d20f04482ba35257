use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use residue_symbols::random;
use residue_symbols::{
    anderson_romo_check, realize_residues, residue_sum_check, weil_check, AOneForm, BaseField, Ring, SectionPoint,
};

fn artinian(seed: u64) -> Ring {
    let p = [2, 3, 5][(seed % 3) as usize];
    match seed / 3 % 3 {
        0 => Ring::truncated(BaseField::Prime(p), 2).unwrap(),
        1 => Ring::truncated(BaseField::Prime(p), 3).unwrap(),
        _ => Ring::prime_power(p, 2).unwrap(),
    }
}

/// Rings carrying differential forms: `k[e]/(e^m)` over `F_p` and `Q`.
fn with_forms(seed: u64) -> Ring {
    match seed % 4 {
        3 => Ring::truncated(BaseField::Rationals, 2).unwrap(),
        k => Ring::truncated(BaseField::Prime([2, 3, 5][k as usize]), 2 + (seed / 4 % 2) as u32).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn anderson_romo_product_is_one(seed: u64) {
        let ring = artinian(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random::split_function(&ring, 4, 2, &mut rng);
        let g = random::split_function(&ring, 4, 2, &mut rng);
        let report = anderson_romo_check(&f, &g).unwrap();
        prop_assert!(report.passes(), "{} {} -> {}", f, g, report.product);
    }

    #[test]
    fn weil_product_is_one(seed: u64, p in prop::sample::select(vec![2u64, 3, 5, 7, 11])) {
        let ring = Ring::prime_field(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random::split_function(&ring, 5, 3, &mut rng);
        let g = random::split_function(&ring, 5, 3, &mut rng);
        prop_assert!(weil_check(&f, &g).unwrap().passes());
    }

    #[test]
    fn residues_sum_to_zero_and_realize(seed: u64) {
        let ring = with_forms(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let omega = random::simple_pole_form(&ring, 4, &mut rng);
        let (residues, sum) = residue_sum_check(&omega).unwrap();
        prop_assert!(sum.is_zero());
        let back = realize_residues(&ring, &residues).unwrap();
        for (pt, w) in &residues {
            prop_assert_eq!(&back.residue_at(pt).unwrap(), w);
        }
        let infinity = back.residue_at(&SectionPoint::Infinity).unwrap();
        let total = residues.iter().filter(|(pt, _)| *pt != SectionPoint::Infinity)
            .fold(AOneForm::zero(&ring).unwrap(), |acc, (_, w)| acc.checked_add(w).unwrap());
        prop_assert_eq!(infinity, total.neg());
    }
}
