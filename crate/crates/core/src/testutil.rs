//! Shared proptest strategies.

use proptest::prelude::*;

use crate::scalar::{rat, GaussianRational};
use crate::tensor::{Basis, TensorSeries};
use crate::word::Word;

pub fn series_strategy(basis: Basis, level: usize) -> impl Strategy<Value = TensorSeries> {
    let word = (0..=level).prop_flat_map(|len| {
        proptest::collection::vec(1u8..=2, len).prop_map(|ls| Word::from_letters(&ls).unwrap())
    });
    let coeff = (-5i64..=5, -5i64..=5, 1i64..=4)
        .prop_map(|(a, b, d)| GaussianRational::new(rat(a, d), rat(b, d)));
    proptest::collection::vec((word, coeff), 0..12)
        .prop_map(move |terms| TensorSeries::from_terms(basis, level, terms).unwrap())
}

pub fn real_e_series(level: usize) -> impl Strategy<Value = TensorSeries> {
    series_strategy(Basis::E, level).prop_map(|s| {
        let terms: Vec<_> = s
            .terms()
            .map(|(w, c)| (*w, GaussianRational::real(c.re.clone())))
            .collect();
        TensorSeries::from_terms(Basis::E, s.level(), terms).unwrap()
    })
}

