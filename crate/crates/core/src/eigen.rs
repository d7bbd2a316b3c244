//! The quarter-turn eigenbasis `v₁ = (i,1)ᵀ`, `v₂ = (−i,1)ᵀ` and the grading
//! it induces.
//!
//! Every `v`-word `w` is an eigenvector of the rotation derivation `f` with
//! eigenvalue `β(w)·i`, where `β(w) = #1s − #2s`. `V_j^β` is spanned by the
//! length-`j` words with index `β`, and `V^β` collects them over all levels.
//!
//! The inverse substitution is `e₁ = −i(v₁ − v₂)/2`, `e₂ = (v₁ + v₂)/2`. Some
//! printed accounts write `e₁ = −i/2·(v₁ + v₂)`; that version is inconsistent
//! with the definition of `v₁, v₂` (it would make `e₁` and `e₂` parallel) and
//! is not used here.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{rat, GaussianRational};
use crate::tensor::{Basis, Mat2, TensorSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisChange {
    EtoV,
    VtoE,
}

impl BasisChange {
    /// Columns are the images of the source basis vectors in the target basis.
    pub fn matrix(self) -> Mat2 {
        let g = |re: (i64, i64), im: (i64, i64)| {
            GaussianRational::new(rat(re.0, re.1), rat(im.0, im.1))
        };
        match self {
            // v₁ = i e₁ + e₂, v₂ = −i e₁ + e₂
            BasisChange::VtoE => Mat2([
                [g((0, 1), (1, 1)), g((0, 1), (-1, 1))],
                [g((1, 1), (0, 1)), g((1, 1), (0, 1))],
            ]),
            // e₁ = −i/2 v₁ + i/2 v₂, e₂ = ½ v₁ + ½ v₂
            BasisChange::EtoV => Mat2([
                [g((0, 1), (-1, 2)), g((1, 2), (0, 1))],
                [g((0, 1), (1, 2)), g((1, 2), (0, 1))],
            ]),
        }
    }

    fn source(self) -> Basis {
        match self {
            BasisChange::EtoV => Basis::E,
            BasisChange::VtoE => Basis::V,
        }
    }

    fn target(self) -> Basis {
        match self {
            BasisChange::EtoV => Basis::V,
            BasisChange::VtoE => Basis::E,
        }
    }

    pub fn apply(self, a: &TensorSeries) -> Result<TensorSeries> {
        if a.basis() != self.source() {
            return Err(Error::usage(format!(
                "basis change {self:?} needs a series in the {} basis, got {}",
                self.source(),
                a.basis()
            )));
        }
        Ok(a.apply_pointwise_linear(&self.matrix()).retagged(self.target()))
    }
}

pub fn to_v_basis(a: &TensorSeries) -> Result<TensorSeries> {
    BasisChange::EtoV.apply(a)
}

pub fn to_e_basis(a: &TensorSeries) -> Result<TensorSeries> {
    BasisChange::VtoE.apply(a)
}

/// Converts to the `v` basis if needed.
pub fn as_v_basis(a: &TensorSeries) -> TensorSeries {
    match a.basis() {
        Basis::V => a.clone(),
        Basis::E => to_v_basis(a).expect("basis checked"),
    }
}

/// The rotation derivation `f`: the quarter turn applied to one slot at a
/// time, summed over slots, with `f[𝟏] = 0`.
///
/// Computed diagonally in the eigenbasis, where each word is scaled by
/// `β(w)·i`. Input in the `e` basis is converted there and back.
pub fn f_op(a: &TensorSeries) -> TensorSeries {
    match a.basis() {
        Basis::V => f_diag(a),
        Basis::E => {
            let v = to_v_basis(a).expect("basis checked");
            to_e_basis(&f_diag(&v)).expect("basis checked")
        }
    }
}

fn f_diag(a: &TensorSeries) -> TensorSeries {
    let mut out = TensorSeries::zero(Basis::V, a.level());
    for (w, c) in a.terms() {
        let beta = w.beta() as i64;
        out.add_term(*w, &c.scale(&crate::scalar::int(beta)).mul_i());
    }
    out
}

/// A series split into its `V^β` components (all in the `v` basis).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenGradedSeries {
    pub level: usize,
    pub components: BTreeMap<i32, TensorSeries>,
}

impl EigenGradedSeries {
    pub fn component(&self, beta: i32) -> TensorSeries {
        self.components
            .get(&beta)
            .cloned()
            .unwrap_or_else(|| TensorSeries::zero(Basis::V, self.level))
    }

    /// Sum of all components.
    pub fn recombine(&self) -> TensorSeries {
        let mut out = TensorSeries::zero(Basis::V, self.level);
        for c in self.components.values() {
            out.add_assign_unchecked(c);
        }
        out
    }
}

pub fn eigen_decompose(a: &TensorSeries) -> EigenGradedSeries {
    let v = as_v_basis(a);
    let mut components: BTreeMap<i32, TensorSeries> = BTreeMap::new();
    for (w, c) in v.terms() {
        components
            .entry(w.beta())
            .or_insert_with(|| TensorSeries::zero(Basis::V, v.level()))
            .add_term(*w, c);
    }
    EigenGradedSeries { level: v.level(), components }
}

/// `ρᵢ^β`: the length-`i` words with eigenvalue index `β`, in the `v` basis.
/// Out-of-range arguments give zero.
pub fn eigen_project(a: &TensorSeries, i: usize, beta: i32) -> TensorSeries {
    let v = as_v_basis(a);
    let mut out = TensorSeries::zero(Basis::V, v.level());
    if beta.unsigned_abs() as usize > i {
        return out;
    }
    for (w, c) in v.terms_of_len(i) {
        if w.beta() == beta {
            out.add_term(*w, c);
        }
    }
    out
}

/// `ρ^β`: all words with eigenvalue index `β`, in the `v` basis.
pub fn eigen_component(a: &TensorSeries, beta: i32) -> TensorSeries {
    as_v_basis(a).filter_words(|w| w.beta() == beta)
}

#[derive(Serialize, Deserialize)]
struct GradedJson {
    beta: i32,
    series: TensorSeries,
}

impl Serialize for EigenGradedSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let list: Vec<GradedJson> = self
            .components
            .iter()
            .map(|(b, t)| GradedJson { beta: *b, series: t.clone() })
            .collect();
        list.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Word;
    use crate::testutil::{real_e_series, series_strategy};
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn g(re: (i64, i64), im: (i64, i64)) -> GaussianRational {
        GaussianRational::new(rat(re.0, re.1), rat(im.0, im.1))
    }

    /// Slotwise definition of `f` in the `e` basis: the quarter turn
    /// `e₁ ↦ e₂`, `e₂ ↦ −e₁` applied to each slot in turn.
    fn f_slotwise(a: &TensorSeries) -> TensorSeries {
        assert_eq!(a.basis(), Basis::E);
        let mut out = TensorSeries::zero(Basis::E, a.level());
        for (word, c) in a.terms() {
            for pos in 0..word.len() {
                let (nl, sign) = match word.letter_at(pos) {
                    1 => (2, 1),
                    _ => (1, -1),
                };
                out.add_term(
                    word.with_letter_at(pos, nl),
                    &c.scale(&crate::scalar::int(sign)),
                );
            }
        }
        out
    }

    #[test]
    fn v1_in_e_basis() {
        let v1 = TensorSeries::letter(Basis::V, 1, 1);
        let expected = TensorSeries::from_terms(
            Basis::E,
            1,
            [(w("1"), GaussianRational::i()), (w("2"), GaussianRational::one())],
        )
        .unwrap();
        assert_eq!(to_e_basis(&v1).unwrap(), expected);
    }

    #[test]
    fn q_is_the_euclidean_metric() {
        let half = g((1, 2), (0, 1));
        let q = TensorSeries::from_terms(Basis::V, 2, [(w("12"), half.clone()), (w("21"), half)])
            .unwrap();
        let metric = TensorSeries::from_int_terms(Basis::E, 2, &[("11", 1), ("22", 1)]).unwrap();
        assert_eq!(to_e_basis(&q).unwrap(), metric);
        assert_eq!(to_v_basis(&metric).unwrap(), q);
    }

    #[test]
    fn wrong_basis_is_rejected() {
        let v = TensorSeries::one(Basis::V, 1);
        assert!(matches!(to_v_basis(&v), Err(Error::Usage(_))));
        assert!(to_e_basis(&TensorSeries::one(Basis::E, 1)).is_err());
    }

    #[test]
    fn f_on_basis_words() {
        assert!(f_op(&TensorSeries::one(Basis::V, 3)).is_zero());
        let v11 = TensorSeries::monomial(Basis::V, 2, w("11"), GaussianRational::one());
        assert_eq!(f_op(&v11), v11.scale(&g((0, 1), (2, 1))));
        let v12 = TensorSeries::monomial(Basis::V, 2, w("12"), GaussianRational::one());
        assert!(f_op(&v12).is_zero());
    }

    #[test]
    fn decompose_cases() {
        let one = eigen_decompose(&TensorSeries::one(Basis::E, 2));
        assert_eq!(one.components.len(), 1);
        assert_eq!(one.component(0), TensorSeries::one(Basis::V, 2));

        // e₁ = −i/2 v₁ + i/2 v₂
        let e1 = eigen_decompose(&TensorSeries::letter(Basis::E, 2, 1));
        assert_eq!(e1.components.len(), 2);
        assert_eq!(
            e1.component(1),
            TensorSeries::monomial(Basis::V, 2, w("1"), g((0, 1), (-1, 2)))
        );
        assert_eq!(
            e1.component(-1),
            TensorSeries::monomial(Basis::V, 2, w("2"), g((0, 1), (1, 2)))
        );

        let half = g((1, 2), (0, 1));
        let q = TensorSeries::from_terms(Basis::V, 2, [(w("12"), half.clone()), (w("21"), half)])
            .unwrap();
        let dq = eigen_decompose(&q);
        assert_eq!(dq.components.len(), 1);
        assert_eq!(dq.component(0), q);
    }

    #[test]
    fn projections_by_level_and_index() {
        let half = g((1, 2), (0, 1));
        let q = TensorSeries::from_terms(Basis::V, 3, [(w("12"), half.clone()), (w("21"), half)])
            .unwrap();
        assert_eq!(eigen_project(&q, 2, 0), q);
        assert!(eigen_project(&q, 2, 2).is_zero());
        assert!(eigen_project(&q, 1, 3).is_zero());
        let all = TensorSeries::from_terms(
            Basis::V,
            3,
            Word::all_of_len(3).map(|x| (x, GaussianRational::one())),
        )
        .unwrap();
        assert!(eigen_project(&all, 3, 0).is_zero());
        assert_eq!(eigen_project(&all, 3, 3).num_terms(), 1);
        assert_eq!(eigen_project(&all, 3, 1).num_terms(), 3);
    }

    proptest! {
        #[test]
        fn basis_round_trip(a in series_strategy(Basis::V, 4)) {
            prop_assert_eq!(to_v_basis(&to_e_basis(&a).unwrap()).unwrap(), a);
        }

        #[test]
        fn f_diagonal_matches_slotwise(a in real_e_series(4)) {
            prop_assert_eq!(f_op(&a), f_slotwise(&a));
        }

        #[test]
        fn f_is_a_derivation(
            x in series_strategy(Basis::V, 5),
            y in series_strategy(Basis::V, 5),
            i in 0usize..=2,
            j in 0usize..=3,
        ) {
            let a = x.level_part(i);
            let b = y.level_part(j);
            let lhs = f_op(&a.tensor(&b).unwrap());
            let rhs = f_op(&a).tensor(&b).unwrap().add(&a.tensor(&f_op(&b)).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn grading_is_consistent(a in series_strategy(Basis::E, 4)) {
            let d = eigen_decompose(&a);
            prop_assert_eq!(d.recombine(), to_v_basis(&a).unwrap());
            for (beta, comp) in &d.components {
                for (word, _) in comp.terms() {
                    prop_assert_eq!(word.beta(), *beta);
                    prop_assert!(word.beta().unsigned_abs() as usize <= word.len());
                }
            }
            for i in 0..=4usize {
                let mut sum = TensorSeries::zero(Basis::V, 4);
                for beta in -(i as i32)..=(i as i32) {
                    sum = sum.add(&eigen_project(&a, i, beta)).unwrap();
                }
                prop_assert_eq!(sum, to_v_basis(&a).unwrap().project(i).unwrap().value);
            }
        }
    }
}
