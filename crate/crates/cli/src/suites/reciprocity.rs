use residue_symbols::random;
use residue_symbols::{anderson_romo_check, weil_check, ReciprocityReport};

use super::{run_indexed, SuiteConfig};
use crate::report::{Case, CaseRecord};

fn record(case: &mut Case, report: &ReciprocityReport) {
    let symbols: Vec<String> = report.symbols.iter().map(|(p, v)| format!("{p}: {v}")).collect();
    case.input("symbols", symbols.join(", "));
    case.check("product", &report.product.ring().one(), &report.product);
}

pub(super) fn reciprocity_ar(cfg: &SuiteConfig) -> Vec<CaseRecord> {
    run_indexed(cfg, cfg.cases, |case, rng| {
        let ring = cfg.pick_ring(rng);
        let f = random::split_function(&ring, 5, cfg.max_exp, rng);
        let g = random::split_function(&ring, 5, cfg.max_exp, rng);
        case.input("ring", &ring);
        case.input("f", &f);
        case.input("g", &g);
        record(case, &anderson_romo_check(&f, &g)?);
        Ok(())
    })
}

pub(super) fn weil(cfg: &SuiteConfig) -> Vec<CaseRecord> {
    run_indexed(cfg, cfg.cases, |case, rng| {
        let ring = cfg.pick_ring(rng);
        let f = random::split_function(&ring, 5, cfg.max_exp, rng);
        let g = random::split_function(&ring, 5, cfg.max_exp, rng);
        case.input("ring", &ring);
        case.input("f", &f);
        case.input("g", &g);
        record(case, &weil_check(&f, &g)?);
        Ok(())
    })
}
