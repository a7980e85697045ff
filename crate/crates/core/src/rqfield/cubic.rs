//! Cubic extensions `F(w)` given by a monic minimal polynomial over `F`.

use super::FieldElem;

/// `F(w)` with `w³ + c₂w² + c₁w + c₀ = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffField {
    minpoly: [FieldElem; 3],
}

/// `c₀ + c₁w + c₂w²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffFieldElem {
    c: [FieldElem; 3],
}

impl CoeffField {
    /// The field with minimal polynomial `x³ + c₂x² + c₁x + c₀`.
    pub fn new(c0: FieldElem, c1: FieldElem, c2: FieldElem) -> Self {
        CoeffField { minpoly: [c0, c1, c2] }
    }

    /// Eigenvalue field of the weight-(2,4) form of level norm 79:
    /// `x³ + (√5 − 13)x² − 32x − 144√5 + 304`.
    pub fn h79() -> Self {
        let s5 = FieldElem::sqrt5();
        let c2 = &s5 - &FieldElem::from_ints(13, 0);
        let c1 = FieldElem::from_ints(-32, 0);
        let c0 = &FieldElem::from_ints(304, 0) - &(&FieldElem::from_ints(144, 0) * &s5);
        Self::new(c0, c1, c2)
    }

    /// Non-leading coefficients, constant term first.
    pub fn minpoly(&self) -> &[FieldElem; 3] {
        &self.minpoly
    }

    pub fn elem(&self, c0: FieldElem, c1: FieldElem, c2: FieldElem) -> CoeffFieldElem {
        CoeffFieldElem { c: [c0, c1, c2] }
    }

    pub fn from_base(&self, x: FieldElem) -> CoeffFieldElem {
        CoeffFieldElem { c: [x, FieldElem::zero(), FieldElem::zero()] }
    }

    /// The generator `w`.
    pub fn gen(&self) -> CoeffFieldElem {
        CoeffFieldElem { c: [FieldElem::zero(), FieldElem::one(), FieldElem::zero()] }
    }

    pub fn add(&self, x: &CoeffFieldElem, y: &CoeffFieldElem) -> CoeffFieldElem {
        CoeffFieldElem { c: [&x.c[0] + &y.c[0], &x.c[1] + &y.c[1], &x.c[2] + &y.c[2]] }
    }

    pub fn sub(&self, x: &CoeffFieldElem, y: &CoeffFieldElem) -> CoeffFieldElem {
        CoeffFieldElem { c: [&x.c[0] - &y.c[0], &x.c[1] - &y.c[1], &x.c[2] - &y.c[2]] }
    }

    pub fn mul(&self, x: &CoeffFieldElem, y: &CoeffFieldElem) -> CoeffFieldElem {
        let mut prod: [FieldElem; 5] = core::array::from_fn(|_| FieldElem::zero());
        for i in 0..3 {
            for j in 0..3 {
                prod[i + j] = &prod[i + j] + &(&x.c[i] * &y.c[j]);
            }
        }
        // w^k = −(c₂w^{k−1} + c₁w^{k−2} + c₀w^{k−3}) for k = 4, 3
        for k in (3..5).rev() {
            let top = core::mem::replace(&mut prod[k], FieldElem::zero());
            for (t, c) in self.minpoly.iter().enumerate() {
                prod[k - 3 + t] = &prod[k - 3 + t] - &(&top * c);
            }
        }
        let [a, b, c, _, _] = prod;
        CoeffFieldElem { c: [a, b, c] }
    }
}

impl CoeffFieldElem {
    /// The element with coordinates `c` in the basis `1, w, w²`.
    pub fn from_coords(c: [FieldElem; 3]) -> Self {
        CoeffFieldElem { c }
    }

    /// Coordinates in the basis `1, w, w²`.
    pub fn coords(&self) -> &[FieldElem; 3] {
        &self.c
    }
}
