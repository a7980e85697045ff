//! Integral positive-definite quinary quadratic forms.
//!
//! A form is stored by its Hessian `H` (symmetric, integral, even diagonal),
//! so that `Q(x) = xᵀHx / 2` and the bilinear form is `B(x, y) = xᵀHy`.

mod enumerate;
mod isometry;
mod local;
mod reduce;

use core::fmt;

use serde::{Deserialize, Serialize};

pub use enumerate::{for_each_short_vector, short_vectors, ShortVector};
pub use isometry::{automorphism_order, is_isometric, IsometrySearch};
pub use local::{bad_primes, hasse_invariant, hilbert_symbol, rational_diagonal};
pub use reduce::lll_reduce;

/// Rank of every lattice handled by this module.
pub const RANK: usize = 5;

pub type Vec5 = [i64; RANK];
pub type Mat5 = [[i64; RANK]; RANK];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormError {
    #[error("expected 15 upper-triangular coefficients, got {0}")]
    CoefficientCount(usize),
    #[error("Hessian is not symmetric")]
    NotSymmetric,
    #[error("Hessian has an odd diagonal entry")]
    OddDiagonal,
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("malformed form text: {0}")]
    Parse(alloc::string::String),
}

/// A positive-definite integral quadratic form in five variables.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadForm {
    gram: Mat5,
}

impl fmt::Debug for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadForm{:?}", self.coeffs())
    }
}

impl fmt::Display for QuadForm {
    /// The 15-coefficient line format `q00 q01 q02 q03 q04 q11 ... q44`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coeffs().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl core::str::FromStr for QuadForm {
    type Err = FormError;

    fn from_str(s: &str) -> Result<Self, FormError> {
        let mut coeffs = alloc::vec::Vec::with_capacity(15);
        for tok in s.split_whitespace() {
            let c: i64 = tok
                .parse()
                .map_err(|_| FormError::Parse(alloc::format!("bad integer {tok:?}")))?;
            coeffs.push(c);
        }
        Self::from_polynomial_coeffs(&coeffs)
    }
}

impl QuadForm {
    /// Builds a form from the coefficients of
    /// `Σ_{i≤j} q_ij x_i x_j`, listed row by row from the upper triangle.
    pub fn from_polynomial_coeffs(coeffs: &[i64]) -> Result<Self, FormError> {
        if coeffs.len() != 15 {
            return Err(FormError::CoefficientCount(coeffs.len()));
        }
        let mut gram = [[0i64; RANK]; RANK];
        let mut it = coeffs.iter();
        for i in 0..RANK {
            for j in i..RANK {
                let c = *it.next().unwrap();
                if i == j {
                    gram[i][i] = 2 * c;
                } else {
                    gram[i][j] = c;
                    gram[j][i] = c;
                }
            }
        }
        Self::from_hessian(gram)
    }

    pub fn from_hessian(gram: Mat5) -> Result<Self, FormError> {
        for i in 0..RANK {
            if gram[i][i] % 2 != 0 {
                return Err(FormError::OddDiagonal);
            }
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(FormError::NotSymmetric);
                }
            }
        }
        let form = QuadForm { gram };
        if !form.is_positive_definite() {
            return Err(FormError::NotPositiveDefinite);
        }
        Ok(form)
    }

    /// Wraps a Hessian already known to be valid (e.g. a unimodular image of a valid form).
    pub(crate) fn from_hessian_unchecked(gram: Mat5) -> Self {
        debug_assert!(Self::from_hessian(gram).is_ok());
        QuadForm { gram }
    }

    /// The sum of five squares.
    pub fn sum_of_squares() -> Self {
        Self::diagonal([1, 1, 1, 1, 1]).unwrap()
    }

    /// `Σ d_i x_i²`.
    pub fn diagonal(d: [i64; RANK]) -> Result<Self, FormError> {
        let mut gram = [[0i64; RANK]; RANK];
        for i in 0..RANK {
            gram[i][i] = 2 * d[i];
        }
        Self::from_hessian(gram)
    }

    pub fn hessian(&self) -> &Mat5 {
        &self.gram
    }

    pub fn coeffs(&self) -> [i64; 15] {
        let mut out = [0i64; 15];
        let mut k = 0;
        for i in 0..RANK {
            for j in i..RANK {
                out[k] = if i == j { self.gram[i][i] / 2 } else { self.gram[i][j] };
                k += 1;
            }
        }
        out
    }

    /// `Q(v)`.
    #[inline]
    pub fn eval(&self, v: &Vec5) -> i64 {
        let mut acc = 0i64;
        for i in 0..RANK {
            if v[i] == 0 {
                continue;
            }
            acc += (self.gram[i][i] / 2) * v[i] * v[i];
            for j in (i + 1)..RANK {
                acc += self.gram[i][j] * v[i] * v[j];
            }
        }
        acc
    }

    /// `B(v, w) = vᵀHw`, so that `B(v, v) = 2Q(v)`.
    #[inline]
    pub fn bilinear(&self, v: &Vec5, w: &Vec5) -> i64 {
        let hw = self.apply(w);
        dot(v, &hw)
    }

    /// `Hv`.
    #[inline]
    pub fn apply(&self, v: &Vec5) -> Vec5 {
        let mut out = [0i64; RANK];
        for (i, row) in self.gram.iter().enumerate() {
            out[i] = dot(row, v);
        }
        out
    }

    /// `det(H)`.
    pub fn det(&self) -> i128 {
        let mut m = [[0i128; RANK]; RANK];
        for i in 0..RANK {
            for j in 0..RANK {
                m[i][j] = self.gram[i][j] as i128;
            }
        }
        bareiss_det(m)
    }

    /// `det(H) / 2`.
    pub fn halfdisc(&self) -> i64 {
        (self.det() / 2) as i64
    }

    fn is_positive_definite(&self) -> bool {
        // Sylvester's criterion on leading principal minors.
        for k in 1..=RANK {
            let mut m = [[0i128; RANK]; RANK];
            for i in 0..RANK {
                for j in 0..RANK {
                    m[i][j] = if i < k && j < k {
                        self.gram[i][j] as i128
                    } else if i == j {
                        1
                    } else {
                        0
                    };
                }
            }
            if bareiss_det(m) <= 0 {
                return false;
            }
        }
        true
    }

    /// The form in the basis given by the columns of `u`: `uᵀHu`.
    pub fn transform(&self, u: &Mat5) -> QuadForm {
        let mut hu = [[0i64; RANK]; RANK];
        for i in 0..RANK {
            for j in 0..RANK {
                let mut s = 0;
                for k in 0..RANK {
                    s += self.gram[i][k] * u[k][j];
                }
                hu[i][j] = s;
            }
        }
        let mut out = [[0i64; RANK]; RANK];
        for i in 0..RANK {
            for j in 0..RANK {
                let mut s = 0;
                for k in 0..RANK {
                    s += u[k][i] * hu[k][j];
                }
                out[i][j] = s;
            }
        }
        QuadForm { gram: out }
    }

    /// LLL-reduced equivalent form together with the change of basis
    /// (columns are the new basis vectors in old coordinates).
    pub fn reduced(&self) -> (QuadForm, Mat5) {
        lll_reduce(self)
    }

    /// Invariants used to bucket classes before exact isometry testing.
    pub fn invariants(&self, theta_len: usize) -> ClassInvariants {
        let (red, _) = self.reduced();
        let vs = short_vectors(&red, theta_len as i64);
        let mut theta_prefix = alloc::vec![0u64; theta_len];
        for sv in &vs {
            // ±pairs count twice in a representation number
            theta_prefix[(sv.value - 1) as usize] += 2;
        }
        ClassInvariants {
            aut_order: automorphism_order(&red),
            theta_prefix,
            halfdisc: self.halfdisc(),
        }
    }
}

/// Cheap isometry invariants of a class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassInvariants {
    pub aut_order: u64,
    /// Representation numbers `r_Q(1), ..., r_Q(T)`.
    pub theta_prefix: alloc::vec::Vec<u64>,
    pub halfdisc: i64,
}

#[inline]
pub(crate) fn dot(a: &Vec5, b: &Vec5) -> i64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3] + a[4] * b[4]
}

pub(crate) fn bareiss_det(mut m: [[i128; RANK]; RANK]) -> i128 {
    let n = RANK;
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let Some(swap) = (k + 1..n).find(|&i| m[i][k] != 0) else {
                return 0;
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

pub(crate) fn identity5() -> Mat5 {
    let mut u = [[0i64; RANK]; RANK];
    for (i, row) in u.iter_mut().enumerate() {
        row[i] = 1;
    }
    u
}

pub(crate) fn mat_mul(a: &Mat5, b: &Mat5) -> Mat5 {
    let mut out = [[0i64; RANK]; RANK];
    for i in 0..RANK {
        for k in 0..RANK {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..RANK {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

/// Inverse of a unimodular matrix via the adjugate.
pub(crate) fn unimodular_inverse(a: &Mat5) -> Option<Mat5> {
    let mut m = [[0i128; RANK]; RANK];
    for i in 0..RANK {
        for j in 0..RANK {
            m[i][j] = a[i][j] as i128;
        }
    }
    let det = bareiss_det(m);
    if det != 1 && det != -1 {
        return None;
    }
    let mut inv = [[0i64; RANK]; RANK];
    for i in 0..RANK {
        for j in 0..RANK {
            // cofactor C_ji
            let mut minor = [[0i128; RANK]; RANK];
            for r in 0..RANK {
                for c in 0..RANK {
                    minor[r][c] = if r == j && c == i {
                        1
                    } else if r == j || c == i {
                        0
                    } else {
                        m[r][c]
                    };
                }
            }
            inv[i][j] = (bareiss_det(minor) * det) as i64;
        }
    }
    Some(inv)
}

/// The named builtin `q1975`: half-discriminant `79 · 5²`.
pub fn builtin_q1975() -> QuadForm {
    QuadForm::from_polynomial_coeffs(&[1, 1, 0, 0, 0, 1, 0, 0, 5, 1, 0, 5, 2, 5, 100]).unwrap()
}

/// Half-discriminant 79 form whose genus has nine classes.
pub fn builtin_q79() -> QuadForm {
    QuadForm::from_polynomial_coeffs(&[1, 1, 0, 0, 0, 1, 0, 0, 1, 1, 0, 1, 2, 1, 4]).unwrap()
}

/// Resolves a builtin selector such as `q1975`.
pub fn builtin(name: &str) -> Option<QuadForm> {
    match name {
        "q1975" => Some(builtin_q1975()),
        "q79" => Some(builtin_q79()),
        "sum-of-squares" => Some(QuadForm::sum_of_squares()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_halfdisc() {
        assert_eq!(builtin_q1975().halfdisc(), 1975);
        assert_eq!(builtin_q79().halfdisc(), 79);
        assert_eq!(QuadForm::sum_of_squares().halfdisc(), 16);
    }

    #[test]
    fn rejects_indefinite() {
        let c = [1, 0, 0, 0, 0, -1, 0, 0, 0, 1, 0, 0, 1, 0, 1];
        assert_eq!(QuadForm::from_polynomial_coeffs(&c), Err(FormError::NotPositiveDefinite));
        assert_eq!(
            QuadForm::from_polynomial_coeffs(&[1, 2, 3]),
            Err(FormError::CoefficientCount(3))
        );
    }

    #[test]
    fn coefficient_text_round_trip() {
        let q = builtin_q1975();
        let s = alloc::format!("{q}");
        assert_eq!(s, "1 1 0 0 0 1 0 0 5 1 0 5 2 5 100");
        assert_eq!(s.parse::<QuadForm>().unwrap(), q);
    }

    #[test]
    fn eval_matches_polynomial() {
        let q = builtin_q1975();
        let x = [1, -2, 3, 1, 1];
        // x0²+x0x1+x1²+x2²+2x3²+5x1x4+5x2x4+5x3x4+100x4²
        let expect = 1 - 2 + 4 + 9 + 2 - 10 + 15 + 5 + 100;
        assert_eq!(q.eval(&x), expect);
        assert_eq!(q.bilinear(&x, &x), 2 * expect);
    }

    #[test]
    fn unimodular_inverse_round_trip() {
        let u = [[1, 2, 0, 0, 0], [0, 1, 0, 0, 3], [0, 0, 1, 0, 0], [0, 0, 1, 1, 0], [0, 0, 0, 0, 1]];
        let inv = unimodular_inverse(&u).unwrap();
        assert_eq!(mat_mul(&u, &inv), identity5());
    }
}
