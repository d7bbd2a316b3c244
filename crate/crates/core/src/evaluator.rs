//! From the graded radial table to the expected signature as a function of
//! the starting point.
//!
//! A rotation by `θ` multiplies every `v`-word in `V^β` by `e^{iβθ}`, so the
//! `(n, β)` term of the table contributes
//! `aₙ^β · rⁿ e^{iβθ} = aₙ^β · (z₁² + z₂²)^((n−|β|)/2) · (z₁ + i·sgn(β)·z₂)^|β|`
//! at `z = r e^{iθ}`. Expanding these products exactly gives one real
//! polynomial per `e`-basis word.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::eigen::to_e_basis;
use crate::error::{Error, Result};
use crate::field::CartesianField;
use crate::poly::Monomial;
use crate::recurrence::BetaTable;
use crate::scalar::{rational_to_f64, GaussianRational};
use crate::tensor::{Basis, TensorSeries};
use crate::word::{Word, MAX_WORD_LEN};

/// Points this far outside the closed disc are still accepted by
/// [`evaluate`], to absorb rounding in polar input.
pub const DISC_TOLERANCE: f64 = 1e-12;

/// A truncated tensor series in the `e` basis with `f64` coefficients, stored
/// densely per level.
#[derive(Clone, Debug, PartialEq)]
pub struct RealSeries {
    levels: Vec<Vec<f64>>,
}

impl RealSeries {
    pub fn zero(level: usize) -> Self {
        assert!(level <= MAX_WORD_LEN.min(24), "level {level} too large for dense storage");
        RealSeries { levels: (0..=level).map(|i| vec![0.0; 1 << i]).collect() }
    }

    pub fn level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn get(&self, w: &Word) -> f64 {
        self.levels.get(w.len()).map_or(0.0, |l| l[w.index() as usize])
    }

    pub fn set(&mut self, w: &Word, x: f64) {
        self.levels[w.len()][w.index() as usize] = x;
    }

    /// Dense coefficients of level `i`, indexed by [`Word::index`].
    pub fn level_values(&self, i: usize) -> &[f64] {
        &self.levels[i]
    }

    pub fn level_values_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.levels[i]
    }

    /// Real parts of an exact `e`-basis series.
    pub fn from_exact(a: &TensorSeries) -> Result<Self> {
        if a.basis() != Basis::E {
            return Err(Error::usage("numeric series are kept in the e basis"));
        }
        let mut out = RealSeries::zero(a.level());
        for (w, c) in a.terms() {
            if !c.is_real() {
                return Err(Error::usage(format!("coefficient of {w} is not real")));
            }
            out.set(w, rational_to_f64(&c.re));
        }
        Ok(out)
    }

    /// Applies the plane map `m` to every slot.
    pub fn apply_linear(&self, m: &[[f64; 2]; 2]) -> Self {
        let mut out = self.clone();
        for (i, v) in out.levels.iter_mut().enumerate() {
            for pos in 0..i {
                let bit = 1usize << (i - 1 - pos);
                for idx in 0..v.len() {
                    if idx & bit != 0 {
                        continue;
                    }
                    let (x, y) = (v[idx], v[idx | bit]);
                    v[idx] = m[0][0] * x + m[0][1] * y;
                    v[idx | bit] = m[1][0] * x + m[1][1] * y;
                }
            }
        }
        out
    }

    pub fn rotate(&self, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        self.apply_linear(&[[c, -s], [s, c]])
    }

    /// Largest componentwise difference over the common levels.
    pub fn max_abs_diff(&self, other: &RealSeries) -> f64 {
        self.levels
            .iter()
            .zip(&other.levels)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }
}

/// `𝐑(θ)[a]` in binary64, for `a` real and in the `e` basis.
pub fn rotate(theta: f64, a: &TensorSeries) -> Result<RealSeries> {
    Ok(RealSeries::from_exact(a)?.rotate(theta))
}

type ComplexPoly = BTreeMap<Monomial, GaussianRational>;

fn cpoly_mul(a: &ComplexPoly, b: &ComplexPoly) -> ComplexPoly {
    let mut out = ComplexPoly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            *out.entry(ma.mul(mb)).or_default() += &(ca * cb);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn cpoly_pow(base: &ComplexPoly, k: u32) -> ComplexPoly {
    let mut out = ComplexPoly::from([(Monomial::ONE, GaussianRational::one())]);
    for _ in 0..k {
        out = cpoly_mul(&out, base);
    }
    out
}

/// `(z₁² + z₂²)^m (z₁ + i·sgn(β)·z₂)^|β|`.
fn polar_monomial(m: u32, beta: i32) -> ComplexPoly {
    let r2 = ComplexPoly::from([
        (Monomial::new(2, 0), GaussianRational::one()),
        (Monomial::new(0, 2), GaussianRational::one()),
    ]);
    let sgn = beta.signum() as i64;
    let lin = ComplexPoly::from([
        (Monomial::new(1, 0), GaussianRational::one()),
        (Monomial::new(0, 1), GaussianRational::from_ints(0, sgn)),
    ]);
    cpoly_mul(&cpoly_pow(&r2, m), &cpoly_pow(&lin, beta.unsigned_abs()))
}

/// Exact Cartesian form of `z ↦ Σ_{n,β} aₙ^β rⁿ e^{iβθ}`.
pub fn cartesianize(a: &BetaTable) -> Result<CartesianField> {
    let mut acc: BTreeMap<Word, ComplexPoly> = BTreeMap::new();
    for (&(n, beta), s) in &a.entries {
        let abs_b = beta.unsigned_abs() as usize;
        if abs_b > n || !(n - abs_b).is_multiple_of(2) {
            return Err(Error::consistency(format!("table entry ({n},{beta}) out of range")));
        }
        let radial = polar_monomial(((n - abs_b) / 2) as u32, beta);
        for (w, c) in to_e_basis(s)?.terms() {
            let slot = acc.entry(*w).or_default();
            for (m, p) in &radial {
                *slot.entry(*m).or_default() += &(c * p);
            }
        }
    }
    let mut field = CartesianField::zero(a.level);
    for (w, poly) in acc {
        for (m, c) in poly {
            if !c.is_real() {
                return Err(Error::consistency(format!(
                    "word {w}, monomial z1^{} z2^{} keeps imaginary part {}",
                    m.d1, m.d2, c.im
                )));
            }
            field.add_to_component(w, m, &c.re);
        }
    }
    Ok(field)
}

/// A field evaluated at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct PointEvaluation {
    pub z: (f64, f64),
    pub values: RealSeries,
}

/// Numeric value of every component at `z`, for `|z| ≤ 1`.
pub fn evaluate(field: &CartesianField, z: (f64, f64)) -> Result<PointEvaluation> {
    let (x, y) = z;
    if !(x.is_finite() && y.is_finite()) || x.hypot(y) > 1.0 + DISC_TOLERANCE {
        return Err(Error::usage(format!("point ({x}, {y}) lies outside the closed unit disc")));
    }
    let level = field.level();
    let max_deg = level.max(1);
    let px: Vec<f64> = (0..=max_deg).map(|k| x.powi(k as i32)).collect();
    let py: Vec<f64> = (0..=max_deg).map(|k| y.powi(k as i32)).collect();
    let mut values = RealSeries::zero(level);
    for (w, p) in field.components() {
        let v = p
            .terms()
            .map(|(m, c)| {
                rational_to_f64(c)
                    * px.get(m.d1 as usize).copied().unwrap_or_else(|| x.powi(m.d1 as i32))
                    * py.get(m.d2 as usize).copied().unwrap_or_else(|| y.powi(m.d2 as i32))
            })
            .sum();
        values.set(w, v);
    }
    Ok(PointEvaluation { z, values })
}

#[derive(Serialize)]
struct PointJson<'a> {
    z: [f64; 2],
    levels: Vec<PointLevelJson<'a>>,
}

#[derive(Serialize)]
struct PointLevelJson<'a> {
    level: usize,
    values: Vec<PointTermJson<'a>>,
}

#[derive(Serialize)]
struct PointTermJson<'a> {
    word: String,
    value: &'a f64,
}

impl Serialize for PointEvaluation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let levels = (0..=self.values.level())
            .map(|i| PointLevelJson {
                level: i,
                values: self
                    .values
                    .level_values(i)
                    .iter()
                    .enumerate()
                    .map(|(idx, value)| PointTermJson {
                        word: Word::from_index(i, idx as u64).to_string(),
                        value,
                    })
                    .collect(),
            })
            .collect();
        PointJson { z: [self.z.0, self.z.1], levels }.serialize(s)
    }
}
