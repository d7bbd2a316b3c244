//! Tensor-valued polynomial fields on the plane: one exact polynomial in
//! `(z₁, z₂)` per word, all words written in the `e` basis.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Monomial, ScalarPoly};
use crate::scalar::{format_rational, GaussianRational, Rational};
use crate::tensor::{Basis, TensorSeries, TermJson};
use crate::word::{Word, MAX_WORD_LEN};

/// `z ↦ Σ_w p_w(z) e_w` for words of length at most `level`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "CartesianFieldJson", try_from = "CartesianFieldJson")]
pub struct CartesianField {
    level: usize,
    components: BTreeMap<Word, ScalarPoly>,
}

impl CartesianField {
    pub fn zero(level: usize) -> Self {
        assert!(level <= MAX_WORD_LEN, "truncation level {level} too large");
        CartesianField { level, components: BTreeMap::new() }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn component(&self, w: &Word) -> ScalarPoly {
        self.components.get(w).cloned().unwrap_or_default()
    }

    pub fn components(&self) -> impl Iterator<Item = (&Word, &ScalarPoly)> {
        self.components.iter()
    }

    /// Nonzero components at tensor level `i`.
    pub fn level_components(&self, i: usize) -> impl Iterator<Item = (&Word, &ScalarPoly)> {
        self.components.iter().filter(move |(w, _)| w.len() == i)
    }

    pub fn set_component(&mut self, w: Word, p: ScalarPoly) {
        assert!(w.len() <= self.level, "word {w} exceeds level {}", self.level);
        if p.is_zero() {
            self.components.remove(&w);
        } else {
            self.components.insert(w, p);
        }
    }

    pub fn add_to_component(&mut self, w: Word, m: Monomial, c: &Rational) {
        let mut p = self.component(&w);
        p.add_term(m, c);
        self.set_component(w, p);
    }

    /// Keeps only the terms of total degree `d` at tensor level `i`.
    pub fn homogeneous_part(&self, i: usize, d: u32) -> BTreeMap<Word, ScalarPoly> {
        self.level_components(i)
            .map(|(w, p)| (*w, p.homogeneous_part(d)))
            .filter(|(_, p)| !p.is_zero())
            .collect()
    }

    /// `z ↦ F(−z)`.
    pub fn negate_argument(&self) -> Self {
        CartesianField {
            level: self.level,
            components: self
                .components
                .iter()
                .map(|(w, p)| (*w, p.negate_argument()))
                .collect(),
        }
    }

    /// Exact value at a rational point, as an `e`-basis series.
    pub fn eval_exact(&self, z1: &Rational, z2: &Rational) -> TensorSeries {
        let terms = self
            .components
            .iter()
            .map(|(w, p)| (*w, GaussianRational::real(p.eval_exact(z1, z2))));
        TensorSeries::from_terms(Basis::E, self.level, terms).expect("words fit the level")
    }

    /// Checks the structural properties every exit-signature field has:
    /// degree at most `i` at level `i`, and boundary values `𝟏` on the unit
    /// circle as exact divisibility by `z₁² + z₂² − 1`.
    pub fn check_invariants(&self) -> Result<()> {
        for (w, p) in &self.components {
            let i = w.len();
            if p.degree().unwrap_or(0) as usize > i {
                return Err(Error::consistency(format!(
                    "component {w} has degree {} above its level {i}",
                    p.degree().unwrap_or(0)
                )));
            }
        }
        let level0 = self.component(&Word::EMPTY).sub(&ScalarPoly::one());
        if level0.divide_by_circle().is_none() {
            return Err(Error::consistency("level 0 is not 1 on the unit circle"));
        }
        for (w, p) in &self.components {
            if !w.is_empty() && p.divide_by_circle().is_none() {
                return Err(Error::consistency(format!(
                    "component {w} does not vanish on the unit circle"
                )));
            }
        }
        Ok(())
    }

    /// Every `(word, monomial)` whose coefficients differ.
    pub fn diff(&self, other: &CartesianField) -> Vec<FieldDiff> {
        let mut out = Vec::new();
        let words: std::collections::BTreeSet<&Word> =
            self.components.keys().chain(other.components.keys()).collect();
        for w in words {
            let a = self.component(w);
            let b = other.component(w);
            let monos: std::collections::BTreeSet<Monomial> =
                a.terms().chain(b.terms()).map(|(m, _)| *m).collect();
            for m in monos {
                let (ca, cb) = (a.coeff(&m), b.coeff(&m));
                if ca != cb {
                    out.push(FieldDiff { word: *w, monomial: m, left: ca, right: cb });
                }
            }
        }
        out
    }
}

/// One mismatching coefficient between two fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldDiff {
    pub word: Word,
    pub monomial: Monomial,
    pub left: Rational,
    pub right: Rational,
}

#[derive(Serialize)]
struct FieldDiffJson {
    level: usize,
    word: String,
    d1: u32,
    d2: u32,
    left: String,
    right: String,
}

impl Serialize for FieldDiff {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FieldDiffJson {
            level: self.word.len(),
            word: self.word.to_string(),
            d1: self.monomial.d1,
            d2: self.monomial.d2,
            left: format_rational(&self.left),
            right: format_rational(&self.right),
        }
        .serialize(s)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CartesianFieldJson {
    pub truncation_level: usize,
    pub levels: Vec<LevelJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LevelJson {
    pub level: usize,
    pub monomials: Vec<MonomialJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MonomialJson {
    pub d1: u32,
    pub d2: u32,
    pub tensor: Vec<TermJson>,
}

impl From<CartesianField> for CartesianFieldJson {
    fn from(f: CartesianField) -> Self {
        let levels = (0..=f.level)
            .map(|i| {
                let mut by_mono: BTreeMap<(u32, std::cmp::Reverse<u32>), Vec<TermJson>> =
                    BTreeMap::new();
                for (w, p) in f.level_components(i) {
                    for (m, c) in p.terms() {
                        by_mono
                            .entry((m.degree(), std::cmp::Reverse(m.d1)))
                            .or_default()
                            .push(TermJson::new(w, &GaussianRational::real(c.clone())));
                    }
                }
                let monomials = by_mono
                    .into_iter()
                    .map(|((deg, std::cmp::Reverse(d1)), tensor)| MonomialJson {
                        d1,
                        d2: deg - d1,
                        tensor,
                    })
                    .collect();
                LevelJson { level: i, monomials }
            })
            .collect();
        CartesianFieldJson { truncation_level: f.level, levels }
    }
}

impl TryFrom<CartesianFieldJson> for CartesianField {
    type Error = Error;

    fn try_from(j: CartesianFieldJson) -> Result<Self> {
        if j.truncation_level > MAX_WORD_LEN {
            return Err(Error::Parse(format!(
                "truncation level {} too large",
                j.truncation_level
            )));
        }
        let mut f = CartesianField::zero(j.truncation_level);
        let mut seen = std::collections::BTreeSet::new();
        for level in &j.levels {
            for mono in &level.monomials {
                let m = Monomial::new(mono.d1, mono.d2);
                for t in &mono.tensor {
                    let (w, c) = t.parse()?;
                    if w.len() != level.level || w.len() > j.truncation_level {
                        return Err(Error::Parse(format!(
                            "word {w} listed under level {}",
                            level.level
                        )));
                    }
                    if !c.is_real() {
                        return Err(Error::Parse(format!("word {w} has an imaginary part")));
                    }
                    if !seen.insert((w, m)) {
                        return Err(Error::Parse(format!("duplicate entry for word {w}")));
                    }
                    f.add_to_component(w, m, &c.re);
                }
            }
        }
        Ok(f)
    }
}
