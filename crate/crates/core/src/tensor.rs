//! Truncated tensor series over a plane with exact Gaussian-rational
//! coefficients.
//!
//! A [`TensorSeries`] is a finite sparse map from [`Word`]s of length at most
//! `N` to nonzero coefficients. Every series carries the basis its words are
//! written in (standard `e₁, e₂` or rotation eigenbasis `v₁, v₂`) and its
//! truncation level; binary operations require both to agree.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational, GaussianRational, Rational};
use crate::word::{Word, MAX_WORD_LEN};

/// Which basis of the plane the letters of a series refer to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Basis {
    /// Standard basis `e₁ = (1,0)ᵀ`, `e₂ = (0,1)ᵀ`.
    #[serde(rename = "e")]
    E,
    /// Eigenbasis of the quarter turn, `v₁ = (i,1)ᵀ`, `v₂ = (−i,1)ᵀ`.
    #[serde(rename = "v")]
    V,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::E => write!(f, "e"),
            Basis::V => write!(f, "v"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "TensorSeriesJson", into = "TensorSeriesJson")]
pub struct TensorSeries {
    level: usize,
    basis: Basis,
    terms: BTreeMap<Word, GaussianRational>,
}

/// The restriction of a series to words of one fixed length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelComponent {
    pub level: usize,
    pub value: TensorSeries,
}

/// A 2×2 matrix acting on the plane, `A·b_col = Σ_row m[row][col]·b_row` in
/// whichever basis the series it is applied to is written in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat2(pub [[GaussianRational; 2]; 2]);

impl Mat2 {
    pub fn from_ints(m: [[i64; 2]; 2]) -> Mat2 {
        Mat2(m.map(|row| row.map(|x| GaussianRational::from_ints(x, 0))))
    }

    pub fn identity() -> Mat2 {
        Mat2::from_ints([[1, 0], [0, 1]])
    }

    /// Rotation by a quarter turn, `[[0, −1], [1, 0]]`.
    pub fn quarter_turn() -> Mat2 {
        Mat2::from_ints([[0, -1], [1, 0]])
    }

    /// Matrix product `self · rhs`.
    pub fn compose(&self, rhs: &Mat2) -> Mat2 {
        let mut out: [[GaussianRational; 2]; 2] = Default::default();
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = &(&self.0[r][0] * &rhs.0[0][c]) + &(&self.0[r][1] * &rhs.0[1][c]);
            }
        }
        Mat2(out)
    }
}

fn word_range(len: usize) -> std::ops::RangeInclusive<Word> {
    Word::from_index(len, 0)..=Word::from_index(len, (1u64 << len) - 1)
}

impl TensorSeries {
    /// The zero series. Panics if `level` exceeds [`MAX_WORD_LEN`].
    pub fn zero(basis: Basis, level: usize) -> Self {
        assert!(level <= MAX_WORD_LEN, "truncation level {level} exceeds {MAX_WORD_LEN}");
        Self { level, basis, terms: BTreeMap::new() }
    }

    /// The unit `𝟏 = (1, 0, 0, …)`.
    pub fn one(basis: Basis, level: usize) -> Self {
        Self::monomial(basis, level, Word::EMPTY, GaussianRational::one())
    }

    /// `c · word`; zero if the word is longer than `level`.
    pub fn monomial(basis: Basis, level: usize, word: Word, c: GaussianRational) -> Self {
        let mut s = Self::zero(basis, level);
        s.add_term(word, &c);
        s
    }

    /// The single letter `b_l` (`l` ∈ {1, 2}).
    pub fn letter(basis: Basis, level: usize, l: u8) -> Self {
        Self::monomial(basis, level, Word::letter(l), GaussianRational::one())
    }

    /// Builds a series from `(word, coefficient)` pairs; repeated words are
    /// summed. Words longer than `level` are rejected.
    pub fn from_terms<I>(basis: Basis, level: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, GaussianRational)>,
    {
        let mut s = Self::zero(basis, level);
        for (w, c) in terms {
            if w.len() > level {
                return Err(Error::usage(format!(
                    "word {w} longer than truncation level {level}"
                )));
            }
            s.add_term(w, &c);
        }
        Ok(s)
    }

    /// Parses a compact description like `[("12", 1), ("", -3)]` with
    /// integer coefficients. Mostly useful in tests.
    pub fn from_int_terms(basis: Basis, level: usize, terms: &[(&str, i64)]) -> Result<Self> {
        Self::from_terms(
            basis,
            level,
            terms
                .iter()
                .map(|(w, c)| Ok((Word::parse(w)?, GaussianRational::from_ints(*c, 0))))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Nonzero terms in canonical word order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &GaussianRational)> {
        self.terms.iter()
    }

    /// Nonzero terms of words with exactly `len` letters.
    pub fn terms_of_len(&self, len: usize) -> impl Iterator<Item = (&Word, &GaussianRational)> {
        let range = (len <= self.level).then(|| self.terms.range(word_range(len)));
        range.into_iter().flatten()
    }

    pub fn coeff(&self, w: &Word) -> GaussianRational {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    /// Smallest word length carrying a nonzero coefficient.
    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().next().map(|w| w.len())
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(|w| w.len())
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(GaussianRational::is_real)
    }

    /// Adds `c · w` in place, dropping the word if it falls outside the
    /// truncation and removing entries that cancel to zero.
    pub(crate) fn add_term(&mut self, w: Word, c: &GaussianRational) {
        if w.len() > self.level || c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Reinterprets the words in another basis without changing coefficients.
    pub(crate) fn retagged(mut self, basis: Basis) -> Self {
        self.basis = basis;
        self
    }

    fn check_compatible(&self, other: &Self, op: &str) -> Result<()> {
        if self.basis != other.basis {
            return Err(Error::usage(format!(
                "{op}: basis mismatch ({} vs {})",
                self.basis, other.basis
            )));
        }
        if self.level != other.level {
            return Err(Error::usage(format!(
                "{op}: truncation level mismatch ({} vs {})",
                self.level, other.level
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other, "add")?;
        let mut out = self.clone();
        out.add_assign_unchecked(other);
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other, "sub")?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(*w, &-c);
        }
        Ok(out)
    }

    pub(crate) fn add_assign_unchecked(&mut self, other: &Self) {
        for (w, c) in &other.terms {
            self.add_term(*w, c);
        }
    }

    /// In-place `self += other`.
    pub fn add_assign(&mut self, other: &Self) -> Result<()> {
        self.check_compatible(other, "add")?;
        self.add_assign_unchecked(other);
        Ok(())
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.basis, self.level);
        }
        let terms = self.terms.iter().map(|(w, x)| (*w, x * c)).collect();
        Self { level: self.level, basis: self.basis, terms }
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        self.scale(&GaussianRational::real(r.clone()))
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(w, x)| (*w, -x)).collect();
        Self { level: self.level, basis: self.basis, terms }
    }

    /// Concatenation product, discarding words longer than the truncation.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other, "tensor")?;
        let mut out = Self::zero(self.basis, self.level);
        for (wa, ca) in &self.terms {
            let room = self.level - wa.len();
            for (wb, cb) in &other.terms {
                // terms are ordered by length, so nothing further fits
                if wb.len() > room {
                    break;
                }
                out.add_term(wa.concat(wb), &(ca * cb));
            }
        }
        Ok(out)
    }

    /// `ρᵢ`, the level-`i` component.
    pub fn project(&self, i: usize) -> Result<LevelComponent> {
        if i > self.level {
            return Err(Error::usage(format!(
                "projection level {i} exceeds truncation level {}",
                self.level
            )));
        }
        Ok(LevelComponent { level: i, value: self.level_part(i) })
    }

    /// Level-`i` part as a series (zero when `i` is out of range).
    pub fn level_part(&self, i: usize) -> Self {
        let terms = self.terms_of_len(i).map(|(w, c)| (*w, c.clone())).collect();
        Self { level: self.level, basis: self.basis, terms }
    }

    /// Keeps only terms whose word satisfies the predicate.
    pub fn filter_words(&self, mut keep: impl FnMut(&Word) -> bool) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(w, _)| keep(w))
            .map(|(w, c)| (*w, c.clone()))
            .collect();
        Self { level: self.level, basis: self.basis, terms }
    }

    /// Same series viewed at a lower (or equal) truncation level.
    pub fn truncate(&self, level: usize) -> Self {
        let level = level.min(self.level);
        self.filter_words(|w| w.len() <= level).with_level_unchecked(level)
    }

    /// Same series at a higher truncation level (no new terms appear).
    pub fn extend_level(&self, level: usize) -> Self {
        assert!(level >= self.level && level <= MAX_WORD_LEN);
        self.clone().with_level_unchecked(level)
    }

    fn with_level_unchecked(mut self, level: usize) -> Self {
        self.level = level;
        self
    }

    /// Inverse of a unital series `1 − s` via the geometric series
    /// `Σ_{l ≤ N} s^{⊗l}`, which is exact at truncation `N` because `s` has no
    /// level-0 part.
    pub fn geometric_inverse(&self) -> Result<Self> {
        if self.coeff(&Word::EMPTY) != GaussianRational::one() {
            return Err(Error::usage(
                "geometric inverse needs a series with constant term 1",
            ));
        }
        let one = Self::one(self.basis, self.level);
        let s = one.sub(self)?;
        let mut result = one.clone();
        let mut power = one;
        for _ in 0..self.level {
            power = power.tensor(&s)?;
            if power.is_zero() {
                break;
            }
            result.add_assign_unchecked(&power);
        }
        Ok(result)
    }

    /// The extension of a linear map of the plane to the tensor algebra,
    /// `𝐀[u₁⊗…⊗uₙ] = A u₁ ⊗ … ⊗ A uₙ`, `𝐀[𝟏] = 𝟏`.
    pub fn apply_pointwise_linear(&self, m: &Mat2) -> Self {
        let mut out = Self::zero(self.basis, self.level);
        for len in 0..=self.level {
            let dense = self.dense_level(len);
            if dense.iter().all(GaussianRational::is_zero) {
                continue;
            }
            let dense = apply_modewise(dense, len, m);
            for (idx, c) in dense.into_iter().enumerate() {
                out.add_term(Word::from_index(len, idx as u64), &c);
            }
        }
        out
    }

    /// Level `len` as a dense vector indexed by [`Word::index`].
    pub(crate) fn dense_level(&self, len: usize) -> Vec<GaussianRational> {
        let mut v = vec![GaussianRational::zero(); 1usize << len];
        for (w, c) in self.terms_of_len(len) {
            v[w.index() as usize] = c.clone();
        }
        v
    }
}

/// Applies `m` to every slot of a dense level-`len` tensor.
fn apply_modewise(mut v: Vec<GaussianRational>, len: usize, m: &Mat2) -> Vec<GaussianRational> {
    for pos in 0..len {
        let shift = len - 1 - pos;
        let bit = 1usize << shift;
        let mut next = vec![GaussianRational::zero(); v.len()];
        for (idx, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let col = (idx >> shift) & 1;
            let base = idx & !bit;
            for (row, entry) in m.0.iter().enumerate() {
                let a = &entry[col];
                if !a.is_zero() {
                    next[base | (row << shift)] += &(a * c);
                }
            }
        }
        v = next;
    }
    v
}

impl LevelComponent {
    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

impl fmt::Display for TensorSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if w.is_empty() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})·{}{w}", self.basis)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TensorSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TensorSeries[{}; N={}]{{{self}}}", self.basis, self.level)
    }
}

/// One `{"word", "re", "im"}` entry of the JSON form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub word: String,
    pub re: String,
    pub im: String,
}

impl TermJson {
    pub fn new(w: &Word, c: &GaussianRational) -> Self {
        TermJson {
            word: w.to_string(),
            re: format_rational(&c.re),
            im: format_rational(&c.im),
        }
    }

    pub fn parse(&self) -> Result<(Word, GaussianRational)> {
        let w = Word::parse(&self.word)?;
        let c = GaussianRational::new(parse_rational(&self.re)?, parse_rational(&self.im)?);
        Ok((w, c))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TensorSeriesJson {
    pub basis: Basis,
    pub level: usize,
    pub terms: Vec<TermJson>,
}

impl From<TensorSeries> for TensorSeriesJson {
    fn from(s: TensorSeries) -> Self {
        TensorSeriesJson {
            basis: s.basis,
            level: s.level,
            terms: s.terms.iter().map(|(w, c)| TermJson::new(w, c)).collect(),
        }
    }
}

impl TryFrom<TensorSeriesJson> for TensorSeries {
    type Error = Error;

    fn try_from(j: TensorSeriesJson) -> Result<Self> {
        if j.level > MAX_WORD_LEN {
            return Err(Error::Parse(format!("truncation level {} too large", j.level)));
        }
        let mut s = TensorSeries::zero(j.basis, j.level);
        for t in &j.terms {
            let (w, c) = t.parse()?;
            if w.len() > j.level {
                return Err(Error::Parse(format!("word {w} exceeds level {}", j.level)));
            }
            if s.terms.contains_key(&w) {
                return Err(Error::Parse(format!("duplicate word {w}")));
            }
            if !c.is_zero() {
                s.terms.insert(w, c);
            }
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn e(terms: &[(&str, i64)], n: usize) -> TensorSeries {
        TensorSeries::from_int_terms(Basis::E, n, terms).unwrap()
    }

    #[test]
    fn add_identity_and_letters() {
        let one = TensorSeries::one(Basis::E, 3);
        let zero = TensorSeries::zero(Basis::E, 3);
        assert_eq!(one.add(&zero).unwrap(), one);

        let s = TensorSeries::letter(Basis::E, 3, 1)
            .add(&TensorSeries::letter(Basis::E, 3, 2))
            .unwrap();
        assert_eq!(s, e(&[("1", 1), ("2", 1)], 3));
    }

    #[test]
    fn mismatched_operands_are_usage_errors() {
        let a = TensorSeries::one(Basis::E, 2);
        let b = TensorSeries::one(Basis::V, 2);
        let c = TensorSeries::one(Basis::E, 3);
        assert!(matches!(a.add(&b), Err(Error::Usage(_))));
        assert!(matches!(a.tensor(&c), Err(Error::Usage(_))));
    }

    #[test]
    fn scaling() {
        let a = e(&[("", 2), ("12", -1)], 2);
        assert!(a.scale(&GaussianRational::zero()).is_zero());
        assert_eq!(a.scale(&GaussianRational::one()), a);
        let i = GaussianRational::i();
        assert_eq!(a.scale(&i).scale(&i), a.neg());
    }

    #[test]
    fn tensor_products() {
        let a = e(&[("12", 3), ("1", 1)], 4);
        let one = TensorSeries::one(Basis::E, 4);
        assert_eq!(one.tensor(&a).unwrap(), a);

        let e1 = TensorSeries::letter(Basis::E, 2, 1);
        let e2 = TensorSeries::letter(Basis::E, 2, 2);
        assert_eq!(e1.tensor(&e2).unwrap(), e(&[("12", 1)], 2));

        // (e₁+e₂)⊗(e₁−e₂), expanded over the four letter pairs
        let lhs = e(&[("1", 1), ("2", 1)], 2);
        let rhs = e(&[("1", 1), ("2", -1)], 2);
        let mut expected = TensorSeries::zero(Basis::E, 2);
        for (la, ca) in [(1u8, 1i64), (2, 1)] {
            for (lb, cb) in [(1u8, 1i64), (2, -1)] {
                let w = Word::from_letters(&[la, lb]).unwrap();
                expected.add_term(w, &GaussianRational::from_ints(ca * cb, 0));
            }
        }
        let got = lhs.tensor(&rhs).unwrap();
        assert_eq!(got, expected);
        assert_eq!(got, e(&[("11", 1), ("12", -1), ("21", 1), ("22", -1)], 2));
    }

    #[test]
    fn tensor_truncates() {
        let a = e(&[("12", 1)], 3);
        assert!(a.tensor(&a).unwrap().is_zero());
        assert_eq!(a.tensor(&e(&[("1", 1)], 3)).unwrap(), e(&[("121", 1)], 3));
    }

    #[test]
    fn projections() {
        let one = TensorSeries::one(Basis::E, 2);
        assert_eq!(one.project(0).unwrap().value, one);
        assert!(one.project(1).unwrap().is_zero());
        let s = e(&[("1", 1), ("2", 1)], 2);
        let sq = s.tensor(&s).unwrap();
        assert_eq!(sq.project(2).unwrap().value, sq);
        assert!(matches!(sq.project(3), Err(Error::Usage(_))));
    }

    #[test]
    fn geometric_inverse_cases() {
        let one = TensorSeries::one(Basis::E, 4);
        assert_eq!(one.geometric_inverse().unwrap(), one);

        let a = e(&[("", 1), ("1", -1)], 4);
        let expected = e(&[("", 1), ("1", 1), ("11", 1), ("111", 1), ("1111", 1)], 4);
        assert_eq!(a.geometric_inverse().unwrap(), expected);

        assert!(matches!(
            e(&[("", 2)], 2).geometric_inverse(),
            Err(Error::Usage(_))
        ));
        assert!(e(&[("1", 1)], 2).geometric_inverse().is_err());
    }

    #[test]
    fn geometric_inverse_of_u_at_level_two() {
        // u = 1 − i(v₁+v₂) − ½(v₁⊗v₂+v₂⊗v₁)
        let i = GaussianRational::i();
        let half = GaussianRational::real(rat(1, 2));
        let w = |s: &str| Word::parse(s).unwrap();
        let u = TensorSeries::from_terms(
            Basis::V,
            2,
            [
                (w(""), GaussianRational::one()),
                (w("1"), -&i),
                (w("2"), -&i),
                (w("12"), -&half),
                (w("21"), -&half),
            ],
        )
        .unwrap();
        let inv = u.geometric_inverse().unwrap();
        let iv = TensorSeries::from_terms(Basis::V, 2, [(w("1"), i.clone()), (w("2"), i.clone())])
            .unwrap();
        let q = TensorSeries::from_terms(Basis::V, 2, [(w("12"), half.clone()), (w("21"), half)])
            .unwrap();
        let expected = iv.tensor(&iv).unwrap().add(&q).unwrap();
        assert_eq!(inv.project(2).unwrap().value, expected);
        assert_eq!(u.tensor(&inv).unwrap(), TensorSeries::one(Basis::V, 2));
    }

    #[test]
    fn pointwise_linear_maps() {
        let a = e(&[("", 1), ("12", 5), ("211", -2)], 3);
        assert_eq!(a.apply_pointwise_linear(&Mat2::identity()), a);

        let minus = Mat2::from_ints([[-1, 0], [0, -1]]);
        let e12 = e(&[("12", 1)], 2);
        assert_eq!(e12.apply_pointwise_linear(&minus), e12);

        let e1 = e(&[("1", 1)], 1);
        assert_eq!(e1.apply_pointwise_linear(&Mat2::quarter_turn()), e(&[("2", 1)], 1));
    }

    #[test]
    fn json_shape() {
        let a = TensorSeries::from_terms(
            Basis::V,
            2,
            [
                (Word::parse("21").unwrap(), GaussianRational::new(rat(-1, 2), rat(3, 1))),
                (Word::EMPTY, GaussianRational::one()),
            ],
        )
        .unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(
            s,
            r#"{"basis":"v","level":2,"terms":[{"word":"","re":"1/1","im":"0/1"},{"word":"21","re":"-1/2","im":"3/1"}]}"#
        );
        let back: TensorSeries = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn json_rejects_bad_input() {
        let too_long = r#"{"basis":"e","level":1,"terms":[{"word":"12","re":"1/1","im":"0/1"}]}"#;
        assert!(serde_json::from_str::<TensorSeries>(too_long).is_err());
        let dup = r#"{"basis":"e","level":1,"terms":[{"word":"1","re":"1/1","im":"0/1"},{"word":"1","re":"1/1","im":"0/1"}]}"#;
        assert!(serde_json::from_str::<TensorSeries>(dup).is_err());
        let junk = r#"{"basis":"x","level":1,"terms":[]}"#;
        assert!(serde_json::from_str::<TensorSeries>(junk).is_err());
    }

    mod props {
        use super::super::*;
        use crate::testutil::series_strategy;
        use proptest::prelude::*;

        fn mat() -> impl Strategy<Value = Mat2> {
            proptest::array::uniform4(-3i64..=3)
                .prop_map(|[a, b, c, d]| Mat2::from_ints([[a, b], [c, d]]))
        }

        fn unit_constant(a: TensorSeries) -> TensorSeries {
            let c0 = a.level_part(0);
            a.sub(&c0).unwrap().add(&TensorSeries::one(a.basis(), a.level())).unwrap()
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn tensor_is_associative(
                a in series_strategy(Basis::E, 4),
                b in series_strategy(Basis::E, 4),
                c in series_strategy(Basis::E, 4),
            ) {
                let l = a.tensor(&b).unwrap().tensor(&c).unwrap();
                let r = a.tensor(&b.tensor(&c).unwrap()).unwrap();
                prop_assert_eq!(l, r);
            }

            #[test]
            fn tensor_distributes_over_addition(
                a in series_strategy(Basis::V, 4),
                b in series_strategy(Basis::V, 4),
                c in series_strategy(Basis::V, 4),
            ) {
                let l = a.tensor(&b.add(&c).unwrap()).unwrap();
                let r = a.tensor(&b).unwrap().add(&a.tensor(&c).unwrap()).unwrap();
                prop_assert_eq!(l, r);
                let l = a.add(&b).unwrap().tensor(&c).unwrap();
                let r = a.tensor(&c).unwrap().add(&b.tensor(&c).unwrap()).unwrap();
                prop_assert_eq!(l, r);
            }

            #[test]
            fn inverse_is_two_sided(a in series_strategy(Basis::E, 4)) {
                let a = unit_constant(a);
                let inv = a.geometric_inverse().unwrap();
                let one = TensorSeries::one(Basis::E, 4);
                prop_assert_eq!(a.tensor(&inv).unwrap(), one.clone());
                prop_assert_eq!(inv.tensor(&a).unwrap(), one);
            }

            #[test]
            fn linear_maps_compose_and_are_multiplicative(
                a in series_strategy(Basis::E, 3),
                b in series_strategy(Basis::E, 3),
                m in mat(),
                n in mat(),
            ) {
                let lhs = a.apply_pointwise_linear(&n).apply_pointwise_linear(&m);
                prop_assert_eq!(lhs, a.apply_pointwise_linear(&m.compose(&n)));
                let ab = a.tensor(&b).unwrap().apply_pointwise_linear(&m);
                let r = a.apply_pointwise_linear(&m).tensor(&b.apply_pointwise_linear(&m)).unwrap();
                prop_assert_eq!(ab, r);
            }

            #[test]
            fn json_round_trip(a in series_strategy(Basis::V, 5)) {
                let s = serde_json::to_string(&a).unwrap();
                let back: TensorSeries = serde_json::from_str(&s).unwrap();
                prop_assert_eq!(back, a);
            }

            #[test]
            fn projections_reassemble(a in series_strategy(Basis::E, 5)) {
                let mut sum = TensorSeries::zero(Basis::E, 5);
                for i in 0..=5 {
                    sum.add_assign(&a.level_part(i)).unwrap();
                }
                prop_assert_eq!(sum, a);
            }
        }
    }
}
