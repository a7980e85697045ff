//! Sturm bounds on the Hilbert modular surface of `ℚ(√5)` with full level
//! structure at an auxiliary ideal: cusp resolution cycles, the intersection
//! numbers `K·K` and `K·D`, and the resulting trace bound.

mod weights;

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::rqfield::{factor_principal, zeta_minus_one, IntElem, RqError};

pub use weights::{weight_plan, SidePlan, Weight, WeightPlan, WeightRules, DEFAULT_PLAN_LIMIT};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SturmError {
    #[error("unit index must be at least 1")]
    UnitIndex,
    #[error("cusp cycle {0:?} is degenerate")]
    Degenerate(Vec<u32>),
    #[error("inconsistent cusp data: d = {d} is not n² = {n_sq} times unit index {unit_index} times a cusp count")]
    Inconsistent { d: u64, n_sq: u64, unit_index: u32 },
    #[error("cusp cycle repeats {got} times but the unit index is {want}")]
    CycleLength { got: u32, want: u32 },
    #[error("K·D must be positive")]
    NonPositiveKd,
    #[error("weight_half and J must be positive")]
    NonPositiveInput,
    #[error("no weight plan with power <= {0}")]
    NoPlan(u32),
    #[error("weight plans are implemented for l = 5 ramified and l = 2 inert, got l = {0}")]
    UnsupportedPrime(u64),
    #[error(transparent)]
    Field(#[from] RqError),
}

/// Self-intersection numbers `−b_j` of one cusp resolution, as the period
/// of a minus continued fraction repeated `repetitions` times.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspCycle {
    pub cycle: Vec<u32>,
    pub repetitions: u32,
}

impl CuspCycle {
    /// The full cycle `b_1, …, b_r`.
    pub fn entries(&self) -> Vec<u32> {
        (0..self.repetitions).flat_map(|_| self.cycle.iter().copied()).collect()
    }

    /// `Σ (b_j − 2)` over the full cycle.
    pub fn excess(&self) -> u64 {
        self.entries().iter().map(|&b| u64::from(b - 2)).sum()
    }
}

fn isqrt(n: i64) -> i64 {
    let mut r = libm::sqrt(n as f64) as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Period of the minus continued fraction `x = b₁ − 1/(b₂ − 1/(…))` of the
/// purely periodic quadratic irrationality `x = (p + √d)/q`, with
/// `q | d − p²`; `None` if the expansion does not return to `x` within 64
/// steps (so `x` is not reduced: `x > 1 > x' > 0` fails).
pub fn minus_cf_period(p: i64, q: i64, d: i64) -> Option<Vec<u32>> {
    let s = isqrt(d);
    let start = (p, q);
    let (mut p, mut q) = (p, q);
    let mut out = Vec::new();
    loop {
        // b = ⌈x⌉ = ⌊x⌋ + 1 for irrational x > 0
        let b = Integer::div_floor(&(p + s), &q) + 1;
        out.push(b as u32);
        // 1/(b − x) = (p' + √d)/q' with p' = bq − p, q' = (p'² − d)/q
        let p1 = b * q - p;
        q = (p1 * p1 - d) / q;
        p = p1;
        if (p, q) == start {
            return Some(out);
        }
        if out.len() > 64 {
            return None;
        }
    }
}

/// The cusp resolution cycle for `ℚ(√5)`: the minus continued fraction of
/// the totally positive fundamental unit `(3 + √5)/2`, repeated
/// `unit_index` times.
pub fn hj_cusp_cycle(unit_index: u32) -> Result<CuspCycle, SturmError> {
    if unit_index == 0 {
        return Err(SturmError::UnitIndex);
    }
    let cycle = minus_cf_period(3, 2, 5).ok_or(SturmError::Degenerate(Vec::new()))?;
    let c = CuspCycle { cycle, repetitions: unit_index };
    if c.cycle.iter().any(|&b| b < 2) || c.cycle.iter().all(|&b| b == 2) {
        return Err(SturmError::Degenerate(c.cycle));
    }
    Ok(c)
}

/// Numerical invariants of the compactified surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceInvariants {
    /// `½ #SL₂(O_F/𝔞)`.
    pub d: u64,
    /// `N(𝔞)`.
    pub n_sq: u64,
    /// Order of `(3 + √5)/2` modulo `𝔞`.
    pub unit_index: u32,
    pub num_cusps: u64,
    pub zeta_m1: BigRational,
    pub kk: BigRational,
    pub kd: BigRational,
    pub cycle: CuspCycle,
}

/// Multiplicative order of `x` in `(O_F/(n))^×`, `n ≥ 2`.
fn order_mod(x: IntElem, n: i64) -> Option<u32> {
    let red = |e: IntElem| IntElem::new(e.a.rem_euclid(n), e.b.rem_euclid(n));
    let x = red(x);
    let mut y = x;
    for k in 1..=(n * n) as u32 {
        if y == IntElem::ONE {
            return Some(k);
        }
        y = red(y * x);
    }
    None
}

/// Invariants for full level structure at the ideal `(aux)`, `aux ≥ 3`.
pub fn surface_invariants(aux: u64, cycle: &CuspCycle) -> Result<SurfaceInvariants, SturmError> {
    let n = aux as i64;
    // #SL₂(O/𝔭^e) = N(𝔭)^{3e} (1 − N(𝔭)^{−2})
    let mut sl2 = 1u64;
    for (p, e) in factor_principal(&IntElem::new(n, 0))? {
        let q = p.norm;
        sl2 *= q.pow(3 * e - 2) * (q * q - 1);
    }
    let d = sl2 / 2;
    let n_sq = aux * aux;
    let unit_index = order_mod(IntElem::new(1, 1), n).ok_or(SturmError::UnitIndex)?;
    if cycle.repetitions != unit_index {
        return Err(SturmError::CycleLength { got: cycle.repetitions, want: unit_index });
    }
    let per = n_sq * u64::from(unit_index);
    if !d.is_multiple_of(per) {
        return Err(SturmError::Inconsistent { d, n_sq, unit_index });
    }
    let zeta_m1 = zeta_minus_one();
    let dn = BigRational::new(BigInt::from(d), BigInt::from(n_sq));
    let excess = BigInt::from(cycle.excess());
    let kd = &dn * &excess;
    let kk = &zeta_m1 * BigInt::from(4 * d) - &dn * &excess;
    Ok(SurfaceInvariants { d, n_sq, unit_index, num_cusps: d / per, zeta_m1, kk, kd, cycle: cycle.clone() })
}

impl SurfaceInvariants {
    /// `1 + K·K / K·D`.
    pub fn ratio(&self) -> Result<BigRational, SturmError> {
        if !self.kd.is_positive() {
            return Err(SturmError::NonPositiveKd);
        }
        Ok(BigRational::from_integer(BigInt::from(1)) + &self.kk / &self.kd)
    }

    /// `4 n² ζ_F(−1) / Σ(b − 2)`, which equals [`Self::ratio`].
    pub fn ratio_from_zeta(&self) -> BigRational {
        &self.zeta_m1 * BigInt::from(4 * self.n_sq) / BigInt::from(self.cycle.excess())
    }
}

/// Largest `C` with `C ≤ weight_half · J · (1 + K·K/K·D)`. Coefficients must
/// then be compared for all `ξ` with `tr(ξ) < C + 1`.
pub fn sturm_bound(weight_half: u64, j: u64, inv: &SurfaceInvariants) -> Result<u64, SturmError> {
    if weight_half == 0 || j == 0 {
        return Err(SturmError::NonPositiveInput);
    }
    let c = inv.ratio()? * BigInt::from(weight_half * j);
    let f = c.floor().to_integer();
    if f.is_negative() || f.is_zero() {
        return Ok(0);
    }
    f.to_u64().ok_or(SturmError::NonPositiveInput)
}

/// `#ℙ¹(O_F/𝔫)` for a prime `𝔫` of norm `norm`.
pub fn projective_line_size(norm: u64) -> u64 {
    norm + 1
}

#[cfg(test)]
mod tests;
