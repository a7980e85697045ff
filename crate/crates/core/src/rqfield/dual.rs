//! Totally positive elements of the inverse different `𝔡⁻¹ = (1/√5)·O_F`,
//! the primes they involve, and `ζ_F(−1)`.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{factor_principal, FieldElem, IntElem, PrimeIdealF, RqError};

/// `x ∈ O_F` with `ξ = x/√5 ≫ 0` and `tr(ξ) < trace_bound`.
///
/// For `x = a + b·φ` one has `tr(x/√5) = b`, and `x/√5 ≫ 0` iff
/// `σ₁(x) > 0 > σ₂(x)`.
pub fn tp_numerators(trace_bound: i64) -> Vec<IntElem> {
    let mut out = Vec::new();
    for b in 1..trace_bound {
        // σ₁(x) > 0 forces a > −φb > −2b; σ₂(x) < 0 forces a < b
        for a in -2 * b..b {
            let x = IntElem::new(a, b);
            if x.signs() == (Ordering::Greater, Ordering::Less) {
                out.push(x);
            }
        }
    }
    out
}

/// All totally positive `ξ ∈ 𝔡⁻¹` with `tr(ξ) < trace_bound`, sorted by
/// trace and then by coordinates.
pub fn tp_enum_inverse_different(trace_bound: i64) -> Vec<FieldElem> {
    let s5 = FieldElem::sqrt5();
    let five = BigRational::from_integer(BigInt::from(5));
    let mut v: Vec<FieldElem> = tp_numerators(trace_bound)
        .into_iter()
        .map(|x| {
            // x/√5 = x·√5/5
            let y = &FieldElem::from(x) * &s5;
            FieldElem::new(y.a / &five, y.b / &five)
        })
        .collect();
    v.sort_by(|x, y| (x.trace(), &x.a, &x.b).cmp(&(y.trace(), &y.a, &y.b)));
    v
}

/// Primes not in `excluded` dividing `√5·ξ` for some totally positive
/// `ξ ∈ 𝔡⁻¹` with `tr(ξ) < trace_bound`, sorted.
pub fn primes_for_sturm(trace_bound: i64, excluded: &[PrimeIdealF]) -> Result<Vec<PrimeIdealF>, RqError> {
    let mut set = BTreeSet::new();
    for x in tp_numerators(trace_bound) {
        for (p, _) in factor_principal(&x)? {
            if !excluded.contains(&p) {
                set.insert(p);
            }
        }
    }
    Ok(set.into_iter().collect())
}

fn sigma1(n: u64) -> u64 {
    (1..=n).filter(|d| n.is_multiple_of(*d)).sum()
}

/// `ζ_K(−1)` for the real quadratic field of discriminant `disc`, by
/// Siegel's formula `(1/60)·Σ σ₁((D − b²)/4)` over `b ≡ D (mod 2)`, `b² < D`.
pub fn zeta_minus_one_disc(disc: u64) -> BigRational {
    let mut s = 0u64;
    let m = libm::sqrt(disc as f64) as i64 + 1;
    for b in -m..=m {
        let b2 = (b * b) as u64;
        if b2 < disc && (disc - b2).is_multiple_of(4) {
            s += sigma1((disc - b2) / 4);
        }
    }
    BigRational::new(BigInt::from(s), BigInt::from(60))
}

/// `ζ_F(−1)` for `F = ℚ(√5)`.
pub fn zeta_minus_one() -> BigRational {
    zeta_minus_one_disc(super::DISC as u64)
}
