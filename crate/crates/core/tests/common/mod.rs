#![allow(dead_code)]

use rauzy_core::adic::SubstitutionSet;
use rauzy_core::spectral::{SpectralData, DEFAULT_TOL};
use rauzy_core::subst::parse_substitution_set;

pub fn tribonacci() -> SubstitutionSet {
    SubstitutionSet::from(
        parse_substitution_set(include_str!("../../../../data/tribonacci.subs")).unwrap(),
    )
}

pub fn sturmian() -> SubstitutionSet {
    SubstitutionSet::from(
        parse_substitution_set(include_str!("../../../../data/sturmian.subs")).unwrap(),
    )
}

pub fn tribonacci_spectral() -> (SubstitutionSet, SpectralData) {
    let set = tribonacci();
    let sd = SpectralData::new(set.matrix(0), DEFAULT_TOL).unwrap();
    (set, sd)
}
