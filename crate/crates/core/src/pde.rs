//! Independent oracle: the expected signature field solved directly from its
//! defining elliptic system
//!
//! ```text
//! Δu = −(Σᵢ eᵢ⊗eᵢ) ⊗ u − 2 Σᵢ eᵢ ⊗ ∂u/∂zᵢ   in the disc,   u = 𝟏 on the circle,
//! ```
//!
//! one tensor level at a time. Level `n` only sees levels `n−1` and `n−2`, so
//! each word is a scalar Dirichlet problem with polynomial data.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{CartesianField, FieldDiff};
use crate::linalg;
use crate::poly::{Monomial, ScalarPoly};
use crate::scalar::Rational;
use crate::word::{Word, MAX_WORD_LEN};

/// The unique polynomial `u` with `Δu = g` in the disc and `u = 0` on its
/// boundary.
pub fn poisson_solve_disc(g: &ScalarPoly) -> Result<ScalarPoly> {
    Ok(poisson_solve_batch(std::slice::from_ref(g))?.pop().expect("one solution"))
}

/// [`poisson_solve_disc`] for several right-hand sides sharing one system.
///
/// With `u = (z₁² + z₂² − 1)·q` and `deg q ≤ D = max deg g`, matching the
/// coefficients of `Δu` and `g` on monomials of degree `≤ D` is a square
/// system in the coefficients of `q`. It is nonsingular because
/// `q ↦ Δ((|z|² − 1) q)` is injective (a harmonic function vanishing on the
/// circle is zero).
pub fn poisson_solve_batch(gs: &[ScalarPoly]) -> Result<Vec<ScalarPoly>> {
    let Some(d) = gs.iter().filter_map(ScalarPoly::degree).max() else {
        return Ok(vec![ScalarPoly::zero(); gs.len()]);
    };
    let monos = Monomial::up_to_degree(d);
    let index: BTreeMap<Monomial, usize> = monos.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let n = monos.len();
    let circle = ScalarPoly::circle();

    let mut a = vec![vec![Rational::default(); n]; n];
    for (col, m) in monos.iter().enumerate() {
        let image = circle.mul(&ScalarPoly::monomial(Rational::from_integer(1.into()), *m)).laplacian();
        for (em, c) in image.terms() {
            a[index[em]][col] = c.clone();
        }
    }
    let mut b = vec![vec![Rational::default(); gs.len()]; n];
    for (k, g) in gs.iter().enumerate() {
        for (m, c) in g.terms() {
            b[index[m]][k] = c.clone();
        }
    }
    let x = linalg::solve(&a, &b).map_err(|e| match e {
        Error::Singular { .. } => Error::consistency(format!("Poisson system of degree {d} singular")),
        other => other,
    })?;

    gs.iter()
        .enumerate()
        .map(|(k, g)| {
            let q = ScalarPoly::from_terms(monos.iter().zip(&x).map(|(m, row)| (*m, row[k].clone())));
            let u = circle.mul(&q);
            if &u.laplacian() != g {
                return Err(Error::consistency("Poisson solution fails its own residual"));
            }
            Ok(u)
        })
        .collect()
}

/// Right-hand side `−Σᵢ u_{n−2}[w'] at w = ii·w'  − 2 Σᵢ ∂ᵢu_{n−1}[w'] at w = i·w'`.
fn hierarchy_rhs(field: &CartesianField, n: usize) -> BTreeMap<Word, ScalarPoly> {
    let mut rhs: BTreeMap<Word, ScalarPoly> = BTreeMap::new();
    let two = Rational::from_integer(2.into());
    for l in 1..=2u8 {
        let letter = Word::letter(l);
        if n >= 2 {
            for (w, p) in field.level_components(n - 2) {
                let target = letter.concat(&letter).concat(w);
                rhs.entry(target).or_default().add_assign(&p.neg());
            }
        }
        for (w, p) in field.level_components(n - 1) {
            let target = letter.concat(w);
            rhs.entry(target).or_default().add_assign(&p.derivative(l).scale(&-two.clone()));
        }
    }
    rhs.retain(|_, p| !p.is_zero());
    rhs
}

/// Solves the hierarchy up to level `n_max`.
pub fn lyons_ni_hierarchy(n_max: usize) -> Result<CartesianField> {
    if n_max > MAX_WORD_LEN {
        return Err(Error::usage(format!("truncation level {n_max} too large")));
    }
    let mut field = CartesianField::zero(n_max);
    field.set_component(Word::EMPTY, ScalarPoly::one());
    for n in 2..=n_max {
        let rhs = hierarchy_rhs(&field, n);
        let (words, gs): (Vec<Word>, Vec<ScalarPoly>) = rhs.into_iter().unzip();
        for (w, u) in words.into_iter().zip(poisson_solve_batch(&gs)?) {
            field.set_component(w, u);
        }
    }
    Ok(field)
}

/// Words whose component violates the system at its level, with the
/// residual `Δu + (Σ eᵢ⊗eᵢ)⊗u + 2Σ eᵢ⊗∂ᵢu`. Level 0 must be `1` and level 1
/// must vanish; [`CartesianField::check_invariants`] covers the boundary.
pub fn hierarchy_residuals(field: &CartesianField) -> Vec<(Word, ScalarPoly)> {
    let mut out = Vec::new();
    let one_residual = field.component(&Word::EMPTY).sub(&ScalarPoly::one());
    if !one_residual.is_zero() {
        out.push((Word::EMPTY, one_residual));
    }
    for (w, p) in field.level_components(1) {
        out.push((*w, p.clone()));
    }
    for n in 2..=field.level() {
        let rhs = hierarchy_rhs(field, n);
        let mut words: std::collections::BTreeSet<Word> = rhs.keys().copied().collect();
        words.extend(field.level_components(n).map(|(w, _)| *w));
        for w in words {
            let r = field
                .component(&w)
                .laplacian()
                .sub(&rhs.get(&w).cloned().unwrap_or_default());
            if !r.is_zero() {
                out.push((w, r));
            }
        }
    }
    out
}

/// Exact coefficientwise comparison; empty means equal.
pub fn oracle_compare(a: &CartesianField, b: &CartesianField) -> Vec<FieldDiff> {
    a.diff(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluator::cartesianize;
    use crate::recurrence::solve;
    use crate::scalar::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn poisson_examples() {
        assert_eq!(poisson_solve_disc(&ScalarPoly::zero()).unwrap(), ScalarPoly::zero());
        assert_eq!(
            poisson_solve_disc(&ScalarPoly::constant(int(4))).unwrap(),
            ScalarPoly::circle()
        );
        assert_eq!(
            poisson_solve_disc(&ScalarPoly::constant(int(-2))).unwrap(),
            ScalarPoly::circle().scale(&rat(-1, 2))
        );
        // Δ(z₁(|z|²−1)) = 8 z₁
        assert_eq!(
            poisson_solve_disc(&ScalarPoly::z1()).unwrap(),
            ScalarPoly::circle().mul(&ScalarPoly::z1()).scale(&rat(1, 8))
        );
    }

    #[test]
    fn hierarchy_low_levels() {
        let f = lyons_ni_hierarchy(3).unwrap();
        assert_eq!(f.component(&Word::EMPTY), ScalarPoly::one());
        assert!(f.level_components(1).next().is_none());
        let lvl2 = ScalarPoly::circle().scale(&rat(-1, 4));
        let lvl2_words: Vec<_> = f.level_components(2).map(|(w, p)| (w.to_string(), p.clone())).collect();
        assert_eq!(lvl2_words, vec![("11".to_string(), lvl2.clone()), ("22".to_string(), lvl2)]);
        for (w, p) in f.level_components(3) {
            assert!(p.degree().unwrap() <= 3, "{w}");
        }
        assert!(hierarchy_residuals(&f).is_empty());
        f.check_invariants().unwrap();
        assert!(lyons_ni_hierarchy(0).unwrap().components().count() == 1);
    }

    #[test]
    fn residuals_catch_corruption() {
        let clean = lyons_ni_hierarchy(4).unwrap();
        let w = Word::parse("1122").unwrap();
        let mut f = clean.clone();
        f.add_to_component(w, Monomial::new(2, 0), &int(1));
        assert!(!hierarchy_residuals(&f).is_empty());
        // A harmonic perturbation passes the interior residual; only the
        // boundary check sees it.
        let mut h = clean;
        h.add_to_component(w, Monomial::new(1, 1), &int(1));
        assert!(hierarchy_residuals(&h).is_empty());
        assert!(h.check_invariants().is_err());
    }

    #[test]
    fn oracle_matches_evaluator() {
        for n in 0..=6 {
            let oracle = lyons_ni_hierarchy(n).unwrap();
            let field = cartesianize(&solve(n).unwrap().a).unwrap();
            assert!(oracle_compare(&field, &oracle).is_empty(), "N = {n}");
        }
    }

    #[test]
    fn compare_reports_single_perturbation() {
        let f = lyons_ni_hierarchy(4).unwrap();
        let mut g = f.clone();
        g.add_to_component(Word::parse("11").unwrap(), Monomial::new(0, 2), &rat(1, 3));
        let d = oracle_compare(&f, &g);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].word, Word::parse("11").unwrap());
        assert!(oracle_compare(&f, &f).is_empty());
    }

    #[test]
    fn oracle_levels_have_parity() {
        let f = lyons_ni_hierarchy(6).unwrap();
        for (w, p) in f.components() {
            for (m, _) in p.terms() {
                assert_eq!(m.degree() as usize % 2, w.len() % 2, "{w}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn poisson_solution_is_exact(
            ts in proptest::collection::vec((0u32..=4, 0u32..=4, -6i64..=6, 1i64..=4), 0..6)
        ) {
            let g = ScalarPoly::from_terms(ts.into_iter().map(|(a, b, p, q)| (Monomial::new(a, b), rat(p, q))));
            let u = poisson_solve_disc(&g).unwrap();
            prop_assert_eq!(&u.laplacian(), &g);
            prop_assert!(u.divide_by_circle().is_some());
        }
    }
}
