//! Elliptic curves over `F` and traces of Frobenius by point counting.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::rqfield::{factor_principal, Fq, IntElem, PrimeIdealF, ResidueField};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CurveError {
    #[error("singular Weierstrass equation")]
    Singular,
    #[error("conductor {0} does not divide the discriminant {1}")]
    Conductor(IntElem, IntElem),
    #[error("{0} is a prime of bad reduction")]
    BadPrime(alloc::string::String),
}

/// `y² + a₁xy + a₃y = x³ + a₂x² + a₄x + a₆` with integral coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllipticCurveF {
    /// `[a₁, a₂, a₃, a₄, a₆]`.
    pub a: [IntElem; 5],
    /// A generator of the conductor.
    pub conductor: IntElem,
}

impl EllipticCurveF {
    pub fn new(a: [IntElem; 5], conductor: IntElem) -> Result<Self, CurveError> {
        let e = EllipticCurveF { a, conductor };
        let d = e.discriminant();
        if d.is_zero() {
            return Err(CurveError::Singular);
        }
        // every prime of the conductor divides the discriminant
        let cf = factor_principal(&conductor).map_err(|_| CurveError::Conductor(conductor, d))?;
        if cf.iter().any(|(p, _)| p.valuation(&d) == 0) {
            return Err(CurveError::Conductor(conductor, d));
        }
        Ok(e)
    }

    pub fn discriminant(&self) -> IntElem {
        let [a1, a2, a3, a4, a6] = self.a;
        let k = |n: i64| IntElem::new(n, 0);
        let b2 = a1 * a1 + k(4) * a2;
        let b4 = a1 * a3 + k(2) * a4;
        let b6 = a3 * a3 + k(4) * a6;
        let b8 = a1 * a1 * a6 + k(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        -(b2 * b2 * b8) - k(8) * b4 * b4 * b4 - k(27) * b6 * b6 + k(9) * b2 * b4 * b6
    }

    /// The Galois-conjugate curve.
    pub fn conjugate(&self) -> Self {
        EllipticCurveF { a: self.a.map(|x| x.conj()), conductor: self.conductor.conj() }
    }

    /// Norm of the conductor.
    pub fn conductor_norm(&self) -> u64 {
        self.conductor.norm().unsigned_abs()
    }

    /// Points of the reduction mod `P`, including the point at infinity and
    /// any singular point.
    pub fn count_points(&self, prime: &PrimeIdealF) -> u64 {
        let k = ResidueField::of(prime);
        let [a1, a2, a3, a4, a6] = self.a.map(|x| k.reduce(&x));
        let rhs = |x: Fq| k.add(k.mul(k.add(k.mul(k.add(x, a2), x), a4), x), a6);
        let mut n = 1u64;
        if k.characteristic() == 2 {
            let els: Vec<Fq> = k.elements().collect();
            for &x in &els {
                let r = rhs(x);
                let lin = k.add(k.mul(a1, x), a3);
                n += els.iter().filter(|&&y| k.add(k.mul(y, y), k.mul(lin, y)) == r).count() as u64;
            }
            return n;
        }
        // y solutions: 1 + χ((a₁x + a₃)² + 4·rhs(x))
        let chi = square_table(&k);
        let p = k.characteristic();
        let four = k.from_int(4);
        for x in k.elements() {
            let lin = k.add(k.mul(a1, x), a3);
            let d = k.add(k.mul(lin, lin), k.mul(four, rhs(x)));
            n += (1 + chi[(d.c0 + p * d.c1) as usize]) as u64;
        }
        n
    }

    /// `a_P = Norm(P) + 1 − #E(O_F/P)` at a prime of good reduction.
    pub fn ap(&self, prime: &PrimeIdealF) -> Result<i64, CurveError> {
        if prime.valuation(&self.discriminant()) > 0 {
            return Err(CurveError::BadPrime(prime.label()));
        }
        Ok(self.reduction_ap(prime))
    }

    /// `Norm(P) + 1 − #Ẽ(O_F/P)` for any prime; at a prime of multiplicative
    /// reduction this is `+1` (split) or `−1` (non-split).
    pub fn reduction_ap(&self, prime: &PrimeIdealF) -> i64 {
        prime.norm as i64 + 1 - self.count_points(prime) as i64
    }
}

/// `χ(x)` indexed by `c0 + p·c1`, with `χ(0) = 0`.
fn square_table(k: &ResidueField) -> Vec<i8> {
    let p = k.characteristic();
    let mut chi = alloc::vec![-1i8; k.size() as usize];
    chi[0] = 0;
    for x in k.elements().skip(1) {
        let s = k.mul(x, x);
        chi[(s.c0 + p * s.c1) as usize] = 1;
    }
    chi
}
