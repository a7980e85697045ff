//! Prime ideals of `O_F` and factorization of principal ideals.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{IntElem, RqError};
use crate::exactlin::is_prime_u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SplitKind {
    Split,
    Inert,
    Ramified,
}

/// A nonzero prime ideal, named by its canonical generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeIdealF {
    /// Residue characteristic.
    pub p: u64,
    pub kind: SplitKind,
    pub gen: IntElem,
    /// `p` or `p²`.
    pub norm: u64,
}

impl PartialOrd for PrimeIdealF {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PrimeIdealF {
    /// By norm, then by generator coordinates.
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        (self.norm, self.gen.a, self.gen.b).cmp(&(other.norm, other.gen.a, other.gen.b))
    }
}

impl PrimeIdealF {
    fn from_gen(p: u64, kind: SplitKind, gen: IntElem) -> Self {
        let norm = if kind == SplitKind::Inert { p * p } else { p };
        PrimeIdealF { p, kind, gen: gen.canonical_associate(), norm }
    }

    /// The ideal `(√5)`.
    pub fn sqrt5() -> Self {
        Self::from_gen(5, SplitKind::Ramified, IntElem::SQRT5)
    }

    /// The conjugate ideal; equal to `self` unless `p` splits.
    pub fn conj(&self) -> Self {
        Self::from_gen(self.p, self.kind, self.gen.conj())
    }

    /// `v_𝔭(x)` for `x ≠ 0`.
    pub fn valuation(&self, x: &IntElem) -> u32 {
        let mut v = 0;
        let mut y = *x;
        while !y.is_zero() {
            match y.div_exact(&self.gen) {
                Some(q) => {
                    y = q;
                    v += 1;
                }
                None => break,
            }
        }
        v
    }

    /// Label `norm:a:b` for the ideal generated by `a + b·φ`.
    pub fn label(&self) -> alloc::string::String {
        alloc::format!("{}:{}:{}", self.norm, self.gen.a, self.gen.b)
    }
}

impl fmt::Display for PrimeIdealF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.norm, self.gen.a, self.gen.b)
    }
}

impl FromStr for PrimeIdealF {
    type Err = RqError;

    /// Parses `norm:a:b`; the generator may be any generator of a prime
    /// ideal of that norm.
    fn from_str(s: &str) -> Result<Self, RqError> {
        let bad = || RqError::Label(s.to_string());
        let parts: Vec<&str> = s.trim().split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let norm: u64 = parts[0].parse().map_err(|_| bad())?;
        let gen = IntElem::new(parts[1].parse().map_err(|_| bad())?, parts[2].parse().map_err(|_| bad())?);
        if gen.norm().unsigned_abs() != norm {
            return Err(bad());
        }
        let (_, primes) = splitting_type(small_prime_of(norm).ok_or_else(bad)?)?;
        primes.into_iter().find(|q| q.norm == norm && q.valuation(&gen) == 1).ok_or_else(bad)
    }
}

/// The prime `p` with `norm ∈ {p, p²}`.
fn small_prime_of(norm: u64) -> Option<u64> {
    if is_prime_u64(norm) {
        return Some(norm);
    }
    let r = libm::sqrt(norm as f64) as u64;
    (r.saturating_sub(1)..=r + 1).find(|&q| q * q == norm && is_prime_u64(q))
}

fn isqrt(n: i64) -> Option<i64> {
    if n < 0 {
        return None;
    }
    let mut r = libm::sqrt(n as f64) as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    Some(r)
}

/// An element of norm `±p` for a split or ramified `p`.
fn element_of_norm(p: i64) -> IntElem {
    // a² + ab − b² = ±p  ⇔  (2a + b)² = 5b² ± 4p
    for b in 0.. {
        for s in [4 * p, -4 * p] {
            if let Some(r) = isqrt(5 * b * b + s) {
                if r * r == 5 * b * b + s && (r - b) % 2 == 0 {
                    return IntElem::new((r - b) / 2, b);
                }
            }
        }
    }
    unreachable!()
}

/// Splitting type of a rational prime and the primes above it, sorted.
pub fn splitting_type(p: u64) -> Result<(SplitKind, Vec<PrimeIdealF>), RqError> {
    if !is_prime_u64(p) {
        return Err(RqError::NotPrime(p));
    }
    Ok(match p % 5 {
        0 => (SplitKind::Ramified, alloc::vec![PrimeIdealF::sqrt5()]),
        1 | 4 => {
            let g = element_of_norm(p as i64);
            let mut v = alloc::vec![
                PrimeIdealF::from_gen(p, SplitKind::Split, g),
                PrimeIdealF::from_gen(p, SplitKind::Split, g.conj()),
            ];
            v.sort();
            (SplitKind::Split, v)
        }
        _ => (SplitKind::Inert, alloc::vec![PrimeIdealF::from_gen(p, SplitKind::Inert, IntElem::new(p as i64, 0))]),
    })
}

/// Prime factorization of the principal ideal `(x)`, sorted by prime.
pub fn factor_principal(x: &IntElem) -> Result<Vec<(PrimeIdealF, u32)>, RqError> {
    if x.is_zero() {
        return Err(RqError::Zero);
    }
    let mut n = x.norm().unsigned_abs();
    let mut out = Vec::new();
    let mut q = 2u64;
    while n > 1 {
        if q * q > n {
            q = n;
        }
        if n.is_multiple_of(q) {
            while n.is_multiple_of(q) {
                n /= q;
            }
            for pr in splitting_type(q)?.1 {
                let v = pr.valuation(x);
                if v > 0 {
                    out.push((pr, v));
                }
            }
        }
        q += 1;
    }
    out.sort();
    Ok(out)
}
