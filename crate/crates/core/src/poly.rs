//! Exact bivariate polynomials in `(z₁, z₂)` with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::scalar::{int, rational_to_f64, Rational};

/// `z₁^d1 · z₂^d2`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub d1: u32,
    pub d2: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { d1: 0, d2: 0 };

    pub fn new(d1: u32, d2: u32) -> Self {
        Monomial { d1, d2 }
    }

    pub fn degree(&self) -> u32 {
        self.d1 + self.d2
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.d1 + other.d1, self.d2 + other.d2)
    }

    /// All monomials of total degree at most `d`, ordered by degree.
    pub fn up_to_degree(d: u32) -> Vec<Monomial> {
        (0..=d)
            .flat_map(|k| (0..=k).rev().map(move |d1| Monomial::new(d1, k - d1)))
            .collect()
    }
}

/// A polynomial stored without zero coefficients.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct ScalarPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl ScalarPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, Monomial::ONE)
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn monomial(c: Rational, m: Monomial) -> Self {
        let mut p = Self::zero();
        p.add_term(m, &c);
        p
    }

    pub fn z1() -> Self {
        Self::monomial(Rational::one(), Monomial::new(1, 0))
    }

    pub fn z2() -> Self {
        Self::monomial(Rational::one(), Monomial::new(0, 1))
    }

    /// `z₁² + z₂² − 1`.
    pub fn circle() -> Self {
        Self::from_terms([
            (Monomial::new(2, 0), int(1)),
            (Monomial::new(0, 2), int(1)),
            (Monomial::ONE, int(-1)),
        ])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn add_term(&mut self, m: Monomial, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.add_term(*m, c);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&int(-1))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ma, a) in &self.terms {
            for (mb, b) in &other.terms {
                out.add_term(ma.mul(mb), &(a * b));
            }
        }
        out
    }

    /// `∂/∂z₁` for `var = 1`, `∂/∂z₂` for `var = 2`.
    pub fn derivative(&self, var: u8) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let (d, lowered) = match var {
                1 => (m.d1, Monomial::new(m.d1.wrapping_sub(1), m.d2)),
                2 => (m.d2, Monomial::new(m.d1, m.d2.wrapping_sub(1))),
                _ => panic!("variable must be 1 or 2"),
            };
            if d > 0 {
                out.add_term(lowered, &(c * int(d as i64)));
            }
        }
        out
    }

    pub fn laplacian(&self) -> Self {
        let mut out = self.derivative(1).derivative(1);
        out.add_assign(&self.derivative(2).derivative(2));
        out
    }

    /// Exact division by `z₁² + z₂² − 1`, or `None` if it leaves a remainder.
    ///
    /// The divisor is monic in `z₁`, so long division in `z₁` over `ℚ[z₂]`
    /// gives a unique remainder of `z₁`-degree at most one.
    pub fn divide_by_circle(&self) -> Option<Self> {
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some((&m, c)) = rem.terms.iter().next_back() {
            if m.d1 < 2 {
                break;
            }
            let c = c.clone();
            let qm = Monomial::new(m.d1 - 2, m.d2);
            quot.add_term(qm, &c);
            rem.add_term(m, &-c.clone());
            rem.add_term(Monomial::new(qm.d1, qm.d2 + 2), &-c.clone());
            rem.add_term(qm, &c);
        }
        rem.is_zero().then_some(quot)
    }

    /// `p(−z₁, −z₂)`.
    pub fn negate_argument(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, if m.degree() % 2 == 0 { c.clone() } else { -c.clone() }))
                .collect(),
        }
    }

    /// The homogeneous part of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn eval_exact(&self, z1: &Rational, z2: &Rational) -> Rational {
        let mut sum = Rational::zero();
        for (m, c) in &self.terms {
            sum += c * num_traits::pow(z1.clone(), m.d1 as usize) * num_traits::pow(z2.clone(), m.d2 as usize);
        }
        sum
    }

    pub fn eval(&self, z1: f64, z2: f64) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| rational_to_f64(c) * z1.powi(m.d1 as i32) * z2.powi(m.d2 as i32))
            .sum()
    }
}

impl fmt::Display for ScalarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            if m.d1 > 0 {
                write!(f, "·z1^{}", m.d1)?;
            }
            if m.d2 > 0 {
                write!(f, "·z2^{}", m.d2)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ScalarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScalarPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use proptest::prelude::*;

    fn poly_strategy(max_deg: u32) -> impl Strategy<Value = ScalarPoly> {
        proptest::collection::vec((0..=max_deg, 0..=max_deg, -6i64..=6, 1i64..=3), 0..8).prop_map(
            |ts| {
                ScalarPoly::from_terms(
                    ts.into_iter().map(|(a, b, n, d)| (Monomial::new(a, b), rat(n, d))),
                )
            },
        )
    }

    #[test]
    fn laplacian_of_circle_is_four() {
        assert_eq!(ScalarPoly::circle().laplacian(), ScalarPoly::constant(int(4)));
        let p = ScalarPoly::circle().mul(&ScalarPoly::z1());
        assert_eq!(p.laplacian(), ScalarPoly::z1().scale(&int(8)));
    }

    #[test]
    fn circle_division() {
        let q = ScalarPoly::from_terms([(Monomial::new(1, 2), rat(3, 2)), (Monomial::ONE, int(1))]);
        let p = q.mul(&ScalarPoly::circle());
        assert_eq!(p.divide_by_circle(), Some(q));
        assert_eq!(ScalarPoly::one().divide_by_circle(), None);
        assert_eq!(ScalarPoly::z1().mul(&ScalarPoly::z1()).divide_by_circle(), None);
        assert_eq!(ScalarPoly::zero().divide_by_circle(), Some(ScalarPoly::zero()));
    }

    #[test]
    fn degrees_and_parts() {
        let p = ScalarPoly::circle();
        assert_eq!(p.degree(), Some(2));
        assert_eq!(ScalarPoly::zero().degree(), None);
        assert_eq!(p.homogeneous_part(0), ScalarPoly::constant(int(-1)));
        assert_eq!(p.negate_argument(), p);
        assert_eq!(ScalarPoly::z2().negate_argument(), ScalarPoly::z2().neg());
        assert_eq!(Monomial::up_to_degree(2).len(), 6);
    }

    proptest! {
        #[test]
        fn product_is_divisible(p in poly_strategy(4)) {
            let prod = p.mul(&ScalarPoly::circle());
            prop_assert_eq!(prod.divide_by_circle(), Some(p));
        }

        #[test]
        fn leibniz_rule(p in poly_strategy(3), q in poly_strategy(3)) {
            let lhs = p.mul(&q).derivative(1);
            let rhs = p.derivative(1).mul(&q).add(&p.mul(&q.derivative(1)));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn exact_and_float_evaluation_agree(p in poly_strategy(4), a in -4i64..=4, b in -4i64..=4) {
            let (x, y) = (rat(a, 4), rat(b, 4));
            let exact = rational_to_f64(&p.eval_exact(&x, &y));
            let float = p.eval(a as f64 / 4.0, b as f64 / 4.0);
            prop_assert!((exact - float).abs() < 1e-9);
        }
    }
}
