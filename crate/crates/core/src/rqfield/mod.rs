//! Arithmetic of `F = ℚ(√5)` with integral basis `{1, φ}`, `φ = (1+√5)/2`,
//! and of the cubic coefficient field of the weight-(2,4) eigenform.
//!
//! `O_F` is a principal ideal domain with fundamental unit `φ` of norm `-1`,
//! so every ideal is named by a canonical generator.

mod cubic;
mod ideal;
mod residue;
mod dual;

use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use cubic::{CoeffField, CoeffFieldElem};
pub use ideal::{factor_principal, splitting_type, PrimeIdealF, SplitKind};
pub use residue::{Fq, ResidueField, ResidueMap};
pub use dual::{primes_for_sturm, tp_enum_inverse_different, tp_numerators, zeta_minus_one, zeta_minus_one_disc};

/// Discriminant of `F`.
pub const DISC: i64 = 5;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RqError {
    #[error("zero has no factorization")]
    Zero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("element is not integral at the residue characteristic")]
    NotIntegral,
    #[error("reduced minimal polynomial has no root of multiplicity >= {0}")]
    NoRoot(u32),
    #[error("reduced minimal polynomial has several roots of multiplicity >= {0}")]
    AmbiguousRoot(u32),
    #[error("malformed prime label {0:?}")]
    Label(alloc::string::String),
}

/// Sign of `u + v·√5`, exactly.
pub(crate) fn sign_surd(u: &BigInt, v: &BigInt) -> Ordering {
    let su = u.sign();
    let sv = v.sign();
    use num_bigint::Sign::*;
    match (su, sv) {
        (NoSign, NoSign) => Ordering::Equal,
        (Plus, Plus) | (Plus, NoSign) | (NoSign, Plus) => Ordering::Greater,
        (Minus, Minus) | (Minus, NoSign) | (NoSign, Minus) => Ordering::Less,
        (Plus, Minus) => (u * u).cmp(&(v * v * BigInt::from(5))),
        (Minus, Plus) => (v * v * BigInt::from(5)).cmp(&(u * u)),
    }
}

/// An integral element `a + b·φ` with machine-word coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct IntElem {
    pub a: i64,
    pub b: i64,
}

impl IntElem {
    pub const ZERO: IntElem = IntElem { a: 0, b: 0 };
    pub const ONE: IntElem = IntElem { a: 1, b: 0 };
    pub const PHI: IntElem = IntElem { a: 0, b: 1 };
    /// `√5 = 2φ − 1`.
    pub const SQRT5: IntElem = IntElem { a: -1, b: 2 };

    pub const fn new(a: i64, b: i64) -> Self {
        IntElem { a, b }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// Galois conjugate `a + b·φ'` with `φ' = 1 − φ`.
    pub fn conj(&self) -> Self {
        IntElem { a: self.a + self.b, b: -self.b }
    }

    pub fn trace(&self) -> i64 {
        2 * self.a + self.b
    }

    pub fn norm(&self) -> i64 {
        self.a * self.a + self.a * self.b - self.b * self.b
    }

    /// `self / d` when the quotient is integral.
    pub fn div_exact(&self, d: &IntElem) -> Option<IntElem> {
        let n = d.norm();
        if n == 0 {
            return None;
        }
        let t = *self * d.conj();
        (t.a % n == 0 && t.b % n == 0).then(|| IntElem { a: t.a / n, b: t.b / n })
    }

    /// `φᵏ` for any integer `k`.
    pub fn phi_pow(k: i32) -> Self {
        let step = if k >= 0 { IntElem::PHI } else { IntElem::new(-1, 1) };
        (0..k.unsigned_abs()).fold(IntElem::ONE, |acc, _| acc * step)
    }

    /// Real embeddings `(σ₁, σ₂)` with `σ₁(√5) > 0`.
    pub fn embeddings(&self) -> (f64, f64) {
        let s = libm::sqrt(5.0);
        let (p1, p2) = ((1.0 + s) / 2.0, (1.0 - s) / 2.0);
        (self.a as f64 + self.b as f64 * p1, self.a as f64 + self.b as f64 * p2)
    }

    /// Exact signs of both embeddings.
    pub fn signs(&self) -> (Ordering, Ordering) {
        let (u, v) = (BigInt::from(2 * self.a + self.b), BigInt::from(self.b));
        (sign_surd(&u, &v), sign_surd(&u, &-v))
    }

    /// The associate `±φᵏ·self` minimizing `(|a|, |b|)`, with the first
    /// nonzero coordinate positive.
    pub fn canonical_associate(&self) -> IntElem {
        if self.is_zero() {
            return *self;
        }
        let (s1, s2) = self.embeddings();
        let k0 = (libm::log(libm::fabs(s2) / libm::fabs(s1)) / (2.0 * libm::log((1.0 + libm::sqrt(5.0)) / 2.0))) as i32;
        let mut best: Option<IntElem> = None;
        for k in k0 - 4..=k0 + 4 {
            let c = *self * IntElem::phi_pow(k);
            let c = if c.a < 0 || (c.a == 0 && c.b < 0) { -c } else { c };
            let key = |e: &IntElem| (e.a.abs(), e.b.abs());
            if best.is_none_or(|b| key(&c) < key(&b)) {
                best = Some(c);
            }
        }
        best.unwrap_or(*self)
    }
}

impl Add for IntElem {
    type Output = IntElem;
    fn add(self, o: IntElem) -> IntElem {
        IntElem { a: self.a + o.a, b: self.b + o.b }
    }
}

impl Sub for IntElem {
    type Output = IntElem;
    fn sub(self, o: IntElem) -> IntElem {
        IntElem { a: self.a - o.a, b: self.b - o.b }
    }
}

impl Neg for IntElem {
    type Output = IntElem;
    fn neg(self) -> IntElem {
        IntElem { a: -self.a, b: -self.b }
    }
}

impl Mul for IntElem {
    type Output = IntElem;
    /// Uses `φ² = φ + 1`.
    fn mul(self, o: IntElem) -> IntElem {
        let bb = self.b * o.b;
        IntElem { a: self.a * o.a + bb, b: self.a * o.b + self.b * o.a + bb }
    }
}

impl fmt::Display for IntElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.a, self.b)
    }
}

/// An element `a + b·φ` of `F` with rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    pub a: BigRational,
    pub b: BigRational,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl FieldElem {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        FieldElem { a, b }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        FieldElem { a: rat(a), b: rat(b) }
    }

    pub fn zero() -> Self {
        Self::from_ints(0, 0)
    }

    pub fn one() -> Self {
        Self::from_ints(1, 0)
    }

    pub fn sqrt5() -> Self {
        Self::from_ints(-1, 2)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn conj(&self) -> Self {
        FieldElem { a: &self.a + &self.b, b: -&self.b }
    }

    pub fn trace(&self) -> BigRational {
        &self.a * BigInt::from(2) + &self.b
    }

    pub fn norm(&self) -> BigRational {
        &self.a * &self.a + &self.a * &self.b - &self.b * &self.b
    }

    pub fn is_integral(&self) -> bool {
        self.a.is_integer() && self.b.is_integer()
    }

    /// Machine-word coordinates when integral and in range.
    pub fn to_int_elem(&self) -> Option<IntElem> {
        use num_traits::ToPrimitive;
        if !self.is_integral() {
            return None;
        }
        Some(IntElem { a: self.a.to_integer().to_i64()?, b: self.b.to_integer().to_i64()? })
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        let c = self.conj();
        Some(FieldElem { a: c.a / &n, b: c.b / &n })
    }

    /// Both real embeddings positive, decided exactly.
    pub fn is_totally_positive(&self) -> bool {
        // clear denominators with a positive integer
        let d = num_integer::lcm(self.a.denom().clone(), self.b.denom().clone());
        let a = (&self.a * &d).to_integer();
        let b = (&self.b * &d).to_integer();
        let u = &a * 2 + &b;
        sign_surd(&u, &b) == Ordering::Greater && sign_surd(&u, &-&b) == Ordering::Greater
    }
}

impl From<IntElem> for FieldElem {
    fn from(e: IntElem) -> Self {
        FieldElem::from_ints(e.a, e.b)
    }
}

impl<'a> Add<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn add(self, o: &FieldElem) -> FieldElem {
        FieldElem { a: &self.a + &o.a, b: &self.b + &o.b }
    }
}

impl<'a> Sub<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn sub(self, o: &FieldElem) -> FieldElem {
        FieldElem { a: &self.a - &o.a, b: &self.b - &o.b }
    }
}

impl<'a> Mul<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn mul(self, o: &FieldElem) -> FieldElem {
        let bb = &self.b * &o.b;
        FieldElem { a: &self.a * &o.a + &bb, b: &self.a * &o.b + &self.b * &o.a + bb }
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem { a: -&self.a, b: -&self.b }
    }
}

impl Add for FieldElem {
    type Output = FieldElem;
    fn add(self, o: FieldElem) -> FieldElem {
        &self + &o
    }
}

impl Sub for FieldElem {
    type Output = FieldElem;
    fn sub(self, o: FieldElem) -> FieldElem {
        &self - &o
    }
}

impl Mul for FieldElem {
    type Output = FieldElem;
    fn mul(self, o: FieldElem) -> FieldElem {
        &self * &o
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*phi", self.a, self.b)
    }
}

impl One for FieldElem {
    fn one() -> Self {
        FieldElem::one()
    }
}

impl Zero for FieldElem {
    fn zero() -> Self {
        FieldElem::zero()
    }
    fn is_zero(&self) -> bool {
        FieldElem::is_zero(self)
    }
}
