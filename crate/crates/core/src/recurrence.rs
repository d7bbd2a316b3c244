//! Radial coefficients of the expected signature along the positive axis.
//!
//! Writing `φ(r) = Σₙ aₙ rⁿ` and splitting each `aₙ` into its `V^β`
//! components `aₙ^β`, the rescaled coefficients
//!
//! ```text
//! aₙ^β = (−1)^((n−β)/2) / ( ((n−β)/2)! · ((n+β)/2)! · 2ⁿ ) · bₙ^β
//! ```
//!
//! are given in closed form by
//!
//! ```text
//! bₙ^β = b_{|β|}^β·1{n=|β|} + Σ_k ρ_{n−|k|}^{β−k}( u⁻¹ ⊗ [q + i v₂·1{k≥1} + i v₁·1{k≤−1}] ) ⊗ b_{|k|}^k
//! ```
//!
//! with `q = ½(v₁⊗v₂ + v₂⊗v₁)` and `u = 𝟏 − i(v₁+v₂) − q`. The boundary data
//! `b_{|k|}^k = ρ^k[Σ_l (−1)^l S^l(𝟏)]` come from a Neumann series for the
//! operator `S` (see [`s_apply`]).
//!
//! The radial recurrences themselves are never solved by division (their
//! leading factor `n² − β²` vanishes at `n = |β|`); they are only evaluated as
//! residual checks, see [`eigen_recurrence_residuals`] and
//! [`radial_recurrence_residuals`].

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;

use crate::eigen::{eigen_decompose, eigen_project, f_op, to_e_basis};
use crate::error::{Error, Result};
use crate::scalar::{factorial, int, pow2, GaussianRational, Rational};
use crate::tensor::{Basis, LevelComponent, TensorSeries};
use crate::word::{Word, MAX_WORD_LEN};

/// The fixed series `u`, `q`, `u⁻¹` at a truncation level, together with the
/// derived prefactors every later stage multiplies by.
#[derive(Clone, Debug)]
pub struct SConstants {
    pub level: usize,
    pub u: TensorSeries,
    pub q: TensorSeries,
    pub u_inv: TensorSeries,
    /// `u⁻¹⊗(q + i v₁)`, `u⁻¹⊗q`, `u⁻¹⊗(q + i v₂)` for `k < 0`, `k = 0`, `k > 0`.
    prefactors: [TensorSeries; 3],
    /// Per `k`, the weighted sum `Σ_{β,n} w(n,β) ρ_{n−|k|}^{β−k}(prefactor(k))`.
    s_kernels: BTreeMap<i32, TensorSeries>,
}

fn v_series(level: usize, terms: &[(&str, GaussianRational)]) -> TensorSeries {
    TensorSeries::from_terms(
        Basis::V,
        MAX_WORD_LEN,
        terms
            .iter()
            .map(|(w, c)| (Word::parse(w).expect("static word"), c.clone())),
    )
    .expect("static series")
    .truncate(level)
}

impl SConstants {
    pub fn new(level: usize) -> Result<Self> {
        if level > MAX_WORD_LEN {
            return Err(Error::usage(format!("truncation level {level} too large")));
        }
        let i = GaussianRational::i();
        let half = GaussianRational::real(Rational::new(1.into(), 2.into()));
        let q = v_series(level, &[("12", half.clone()), ("21", half)]);
        let iv1 = v_series(level, &[("1", i.clone())]);
        let iv2 = v_series(level, &[("2", i)]);
        let u = TensorSeries::one(Basis::V, level)
            .sub(&iv1)?
            .sub(&iv2)?
            .sub(&q)?;
        let u_inv = u.geometric_inverse()?;
        let prefactors = [
            u_inv.tensor(&q.add(&iv1)?)?,
            u_inv.tensor(&q)?,
            u_inv.tensor(&q.add(&iv2)?)?,
        ];
        let mut consts = SConstants {
            level,
            u,
            q,
            u_inv,
            prefactors,
            s_kernels: BTreeMap::new(),
        };
        let n = level as i32;
        for k in -n..=n {
            let kernel = consts.build_s_kernel(k)?;
            consts.s_kernels.insert(k, kernel);
        }
        Ok(consts)
    }

    /// `u⁻¹ ⊗ [q + i v₂·1{k≥1} + i v₁·1{k≤−1}]`.
    pub fn prefactor(&self, k: i32) -> &TensorSeries {
        &self.prefactors[(k.signum() + 1) as usize]
    }

    // A prefactor word of length j and index γ lands in the (n, β) slot with
    // n = j + |k|, β = γ + k. Then n ≥ |β| and n ≡ β (mod 2) hold
    // automatically, so every term is weighted and the sum over (n, β) is
    // just a sum over the prefactor's terms with n ≤ N.
    fn build_s_kernel(&self, k: i32) -> Result<TensorSeries> {
        let mut out = TensorSeries::zero(Basis::V, self.level);
        for (w, c) in self.prefactor(k).terms() {
            let n = w.len() + k.unsigned_abs() as usize;
            if n > self.level {
                continue;
            }
            let weight = s_factorial_weight(n, w.beta() + k)?;
            out.add_term(*w, &c.scale(&weight));
        }
        Ok(out)
    }
}

fn check_parity(n: usize, beta: i32) -> Result<(u32, u32)> {
    let n = n as i64;
    let b = beta as i64;
    if b.abs() > n || (n - b).rem_euclid(2) != 0 {
        return Err(Error::usage(format!(
            "(n, β) = ({n}, {beta}) needs n ≥ |β| and n − β even"
        )));
    }
    Ok((((n - b) / 2) as u32, ((n + b) / 2) as u32))
}

fn sign(exp: u32) -> BigInt {
    if exp.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// `(−1)^((n−|β|)/2) · |β|! · 2^|β| / ( ((n−β)/2)! · ((n+β)/2)! · 2ⁿ )`, the
/// weight with which `S` collects the `(n, β)` slot.
pub fn s_factorial_weight(n: usize, beta: i32) -> Result<Rational> {
    let (lo, hi) = check_parity(n, beta)?;
    let abs_b = beta.unsigned_abs();
    let num = sign((n as u32 - abs_b) / 2) * factorial(abs_b);
    let den = factorial(lo) * factorial(hi);
    Ok(Rational::new(num, den) * pow2(abs_b) / pow2(n as u32))
}

/// `(−1)^((n−β)/2) / ( ((n−β)/2)! · ((n+β)/2)! · 2ⁿ )`, the factor turning
/// `bₙ^β` into `aₙ^β`.
pub fn b_to_a_weight(n: usize, beta: i32) -> Result<Rational> {
    let (lo, hi) = check_parity(n, beta)?;
    let den = factorial(lo) * factorial(hi);
    Ok(Rational::new(sign(lo), den) / pow2(n as u32))
}

/// The linear map
///
/// ```text
/// S(a) = Σ_β Σ_k Σ_{n ≥ |β|∨|k|} w(n,β) · ρ_{n−|k|}^{β−k}(u⁻¹ ⊗ [q + i v₂·1{k≥1} + i v₁·1{k≤−1}]) ⊗ ρ^k(a)
/// ```
///
/// with `w` = [`s_factorial_weight`]. Only `n ≤ N` contributes at truncation
/// `N`, since `ρ^k(a)` starts at level `|k|`.
pub fn s_apply(a: &TensorSeries, consts: &SConstants) -> Result<TensorSeries> {
    if a.basis() != Basis::V {
        return Err(Error::usage("S acts on series in the v basis"));
    }
    if a.level() != consts.level {
        return Err(Error::usage(format!(
            "S built for level {}, series has level {}",
            consts.level,
            a.level()
        )));
    }
    let mut out = TensorSeries::zero(Basis::V, consts.level);
    for (k, component) in eigen_decompose(a).components {
        if let Some(kernel) = consts.s_kernels.get(&k) {
            out.add_assign_unchecked(&kernel.tensor(&component)?);
        }
    }
    Ok(out)
}

/// `b_{|k|}^k = ρ^k[Σ_l (−1)^l S^l(𝟏)]` for `k ∈ [−N, N]`.
///
/// Every prefactor of `S` lacks a level-0 part, so `S` strictly raises the
/// lowest occupied level. Hence `S^l(𝟏)` vanishes at truncation `N` for some
/// `l ≤ N + 1` and the Neumann series is a finite sum.
pub fn boundary_coefficients(consts: &SConstants) -> Result<BTreeMap<i32, TensorSeries>> {
    let n = consts.level;
    let mut total = TensorSeries::zero(Basis::V, n);
    let mut term = TensorSeries::one(Basis::V, n);
    let mut l = 0usize;
    while !term.is_zero() {
        if l > n + 1 {
            return Err(Error::consistency("Neumann series for S did not terminate"));
        }
        if l.is_multiple_of(2) {
            total.add_assign_unchecked(&term);
        } else {
            total.add_assign_unchecked(&term.neg());
        }
        let next = s_apply(&term, consts)?;
        debug_assert!(next.min_degree().unwrap_or(usize::MAX) > term.min_degree().unwrap());
        term = next;
        l += 1;
    }
    let graded = eigen_decompose(&total);
    let n = n as i32;
    Ok((-n..=n).map(|k| (k, graded.component(k))).collect())
}

/// Coefficients indexed by `(n, β)`, all in the `v` basis; absent entries are
/// zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaTable {
    pub level: usize,
    pub entries: BTreeMap<(usize, i32), TensorSeries>,
}

impl BetaTable {
    pub fn get(&self, n: usize, beta: i32) -> TensorSeries {
        self.entries
            .get(&(n, beta))
            .cloned()
            .unwrap_or_else(|| TensorSeries::zero(Basis::V, self.level))
    }

    /// Component `(n, β)` or zero, tolerant of out-of-range indices.
    fn get_signed(&self, n: i64, beta: i32) -> TensorSeries {
        if n < 0 {
            TensorSeries::zero(Basis::V, self.level)
        } else {
            self.get(n as usize, beta)
        }
    }

    /// Checks the structural support rules: `n ≥ |β|`, `n − β` even, every
    /// entry in `V^β` and supported on levels `≥ |β|`.
    pub fn check_support(&self) -> Result<()> {
        for (&(n, beta), s) in &self.entries {
            if beta.unsigned_abs() as usize > n {
                return Err(Error::consistency(format!("entry ({n},{beta}) has n < |β|")));
            }
            if (n as i64 - beta as i64).rem_euclid(2) != 0 {
                return Err(Error::consistency(format!("entry ({n},{beta}) has n − β odd")));
            }
            if s.basis() != Basis::V {
                return Err(Error::consistency(format!("entry ({n},{beta}) not in v basis")));
            }
            if let Some((w, _)) = s.terms().find(|(w, _)| w.beta() != beta) {
                return Err(Error::consistency(format!(
                    "entry ({n},{beta}) contains word {w} outside V^β"
                )));
            }
        }
        Ok(())
    }
}

pub fn b_table(consts: &SConstants, bk: &BTreeMap<i32, TensorSeries>) -> Result<BetaTable> {
    let level = consts.level;
    let mut entries = BTreeMap::new();
    for n in 0..=level {
        let mut acc = TensorSeries::zero(Basis::V, level);
        let span = n as i32;
        for k in -span..=span {
            let Some(boundary) = bk.get(&k) else { continue };
            if boundary.is_zero() {
                continue;
            }
            let pre = consts.prefactor(k).level_part(n - k.unsigned_abs() as usize);
            acc.add_assign_unchecked(&pre.tensor(boundary)?);
        }
        let mut graded = eigen_decompose(&acc).components;
        for beta in [-span, span] {
            if let Some(boundary) = bk.get(&beta) {
                graded
                    .entry(beta)
                    .or_insert_with(|| TensorSeries::zero(Basis::V, level))
                    .add_assign_unchecked(boundary);
            }
            if span == 0 {
                break;
            }
        }
        for (beta, s) in graded {
            if !s.is_zero() {
                entries.insert((n, beta), s);
            }
        }
    }
    let table = BetaTable { level, entries };
    table.check_support()?;
    Ok(table)
}

pub fn a_table(b: &BetaTable) -> BetaTable {
    let entries = b
        .entries
        .iter()
        .filter_map(|(&(n, beta), s)| {
            let w = b_to_a_weight(n, beta).ok()?;
            Some(((n, beta), s.scale_rational(&w)))
        })
        .collect();
    BetaTable { level: b.level, entries }
}

/// `φ(r) = Σₙ aₙ rⁿ` with each `aₙ` in the `e` basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadialExpansion {
    pub level: usize,
    pub coefficients: BTreeMap<usize, TensorSeries>,
}

impl RadialExpansion {
    pub fn coefficient(&self, n: usize) -> TensorSeries {
        self.coefficients
            .get(&n)
            .cloned()
            .unwrap_or_else(|| TensorSeries::zero(Basis::E, self.level))
    }

    /// Exact `φ(r)` at a rational radius.
    pub fn at(&self, r: &Rational) -> TensorSeries {
        let mut out = TensorSeries::zero(Basis::E, self.level);
        let mut power = Rational::one();
        for n in 0..=self.level {
            out.add_assign_unchecked(&self.coefficient(n).scale_rational(&power));
            power *= r;
        }
        out
    }
}

/// Sums the graded table into `aₙ = Σ_β aₙ^β`, converts to the `e` basis and
/// verifies realness, the support bound `ρᵢ[aₙ] = 0` for `i < n`, and the
/// boundary condition `Σₙ aₙ = 𝟏`.
pub fn assemble_phi(a: &BetaTable) -> Result<RadialExpansion> {
    let level = a.level;
    let mut coefficients = BTreeMap::new();
    for n in 0..=level {
        let mut sum = TensorSeries::zero(Basis::V, level);
        for ((_, _), s) in a.entries.range((n, i32::MIN)..=(n, i32::MAX)) {
            sum.add_assign_unchecked(s);
        }
        let an = to_e_basis(&sum)?;
        if !an.is_real() {
            return Err(Error::consistency(format!("a_{n} has an imaginary part")));
        }
        if let Some(d) = an.min_degree() {
            if d < n {
                return Err(Error::consistency(format!(
                    "a_{n} has a nonzero level-{d} component"
                )));
            }
        }
        coefficients.insert(n, an);
    }
    let phi = RadialExpansion { level, coefficients };
    if phi.at(&Rational::one()) != TensorSeries::one(Basis::E, level) {
        return Err(Error::consistency("boundary condition φ(1) = 𝟏 fails"));
    }
    Ok(phi)
}

/// `ρₙ[aₙ]` in closed form, in the `e` basis:
/// `1` for `n = 0`, `0` for `n = 1`, and for `n ≥ 2`
/// `2⁻ⁿ Σ_{m=1}^{n−1} (−1)^m / (m!(n−m)!) · ρ_{n−2}^{n−2m}[u⁻¹] ⊗ q`.
pub fn leading_term(n: usize, consts: &SConstants) -> Result<LevelComponent> {
    let level = consts.level;
    if n > level {
        return Err(Error::usage(format!(
            "leading term of order {n} needs truncation level ≥ {n}, have {level}"
        )));
    }
    let value = match n {
        0 => TensorSeries::one(Basis::V, level),
        1 => TensorSeries::zero(Basis::V, level),
        _ => {
            let mut acc = TensorSeries::zero(Basis::V, level);
            for m in 1..n {
                let beta = n as i32 - 2 * m as i32;
                let weight = Rational::new(sign(m as u32), factorial(m as u32))
                    / Rational::from_integer(factorial((n - m) as u32));
                let part = eigen_project(&consts.u_inv, n - 2, beta);
                acc.add_assign_unchecked(&part.scale_rational(&weight));
            }
            acc.tensor(&consts.q)?.scale_rational(&(Rational::one() / pow2(n as u32)))
        }
    };
    Ok(LevelComponent { level: n, value: to_e_basis(&value)? })
}

/// The whole pipeline at one truncation level.
#[derive(Clone, Debug)]
pub struct RadialSolution {
    pub consts: SConstants,
    pub boundary: BTreeMap<i32, TensorSeries>,
    pub b: BetaTable,
    pub a: BetaTable,
    pub phi: RadialExpansion,
}

pub fn solve(level: usize) -> Result<RadialSolution> {
    let consts = SConstants::new(level)?;
    let boundary = boundary_coefficients(&consts)?;
    let b = b_table(&consts, &boundary)?;
    let a = a_table(&b);
    let phi = assemble_phi(&a)?;
    Ok(RadialSolution { consts, boundary, b, a, phi })
}

fn gi(re: i64, im: i64) -> GaussianRational {
    GaussianRational::from_ints(re, im)
}

/// Residuals of the graded recurrence
///
/// ```text
/// (n² − β²) aₙ^β = −q ⊗ a_{n−2}^β + (n−β) i v₁ ⊗ a_{n−1}^{β−1} − (n+β) i v₂ ⊗ a_{n−1}^{β+1}
/// ```
///
/// for `2 ≤ n ≤ N`, together with `a₀^β = 0` (`β ≠ 0`) and `a₁^β = 0`
/// (`β² ≠ 1`). Returns only the nonzero residuals.
pub fn eigen_recurrence_residuals(a: &BetaTable) -> Result<Vec<((usize, i32), TensorSeries)>> {
    let level = a.level;
    let v1 = TensorSeries::letter(Basis::V, level, 1);
    let v2 = TensorSeries::letter(Basis::V, level, 2);
    let half = GaussianRational::real(Rational::new(1.into(), 2.into()));
    let q = v_series(level, &[("12", half.clone()), ("21", half)]);
    let mut out = Vec::new();
    for (&(n, beta), s) in &a.entries {
        let bad = match n {
            0 => beta != 0,
            1 => beta * beta != 1,
            _ => false,
        };
        if bad {
            out.push(((n, beta), s.clone()));
        }
    }
    for n in 2..=level {
        let span = n as i32;
        for beta in -span..=span {
            let ni = n as i64;
            let bi = beta as i64;
            let mut r = a.get(n, beta).scale(&gi(ni * ni - bi * bi, 0));
            r.add_assign(&q.tensor(&a.get_signed(ni - 2, beta))?)?;
            r.add_assign(&v1.tensor(&a.get_signed(ni - 1, beta - 1))?.scale(&gi(0, -(ni - bi))))?;
            r.add_assign(&v2.tensor(&a.get_signed(ni - 1, beta + 1))?.scale(&gi(0, ni + bi)))?;
            if !r.is_zero() {
                out.push(((n, beta), r));
            }
        }
    }
    Ok(out)
}

/// Residuals of the ungraded recurrence in the `e` basis,
///
/// ```text
/// n² aₙ + f²[aₙ] = −(e₁⊗e₁ + e₂⊗e₂) ⊗ a_{n−2} − 2((n−1) e₁ ⊗ a_{n−1} + e₂ ⊗ f[a_{n−1}])
/// ```
///
/// for `n ≥ 2`, plus `f²[a₀] = 0` and `a₁ + f²[a₁] = −2 e₂ ⊗ f[a₀]`. Returns
/// only the nonzero residuals.
pub fn radial_recurrence_residuals(phi: &RadialExpansion) -> Result<Vec<(usize, TensorSeries)>> {
    let level = phi.level;
    let e1 = TensorSeries::letter(Basis::E, level, 1);
    let e2 = TensorSeries::letter(Basis::E, level, 2);
    let metric = TensorSeries::from_int_terms(Basis::E, level.max(2), &[("11", 1), ("22", 1)])?
        .truncate(level);
    let zero = TensorSeries::zero(Basis::E, level);
    let mut out = Vec::new();
    for n in 0..=level {
        let an = phi.coefficient(n);
        let prev = if n >= 1 { phi.coefficient(n - 1) } else { zero.clone() };
        let prev2 = if n >= 2 { phi.coefficient(n - 2) } else { zero.clone() };
        let nn = int((n * n) as i64);
        let mut r = an.scale_rational(&nn).add(&f_op(&f_op(&an)))?;
        r.add_assign(&metric.tensor(&prev2)?)?;
        r.add_assign(&e1.tensor(&prev)?.scale_rational(&int(2 * (n as i64 - 1))))?;
        r.add_assign(&e2.tensor(&f_op(&prev))?.scale_rational(&int(2)))?;
        if !r.is_zero() {
            out.push((n, r));
        }
    }
    Ok(out)
}

/// `𝐀[x]` for `A = −I` maps `V^β` to `(−1)^β V^β`; useful when checking
/// the parity symmetry `𝐀[φ(r)] = φ(−r)`.
pub fn negate_letters(a: &TensorSeries) -> TensorSeries {
    a.apply_pointwise_linear(&crate::tensor::Mat2::from_ints([[-1, 0], [0, -1]]))
}
