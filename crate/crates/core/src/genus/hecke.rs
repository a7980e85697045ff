//! Hecke operators as neighbor-count matrices.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::exactlin::{restrict, IntMatrix, IntSubspace, LinError};

use super::{check_prime, keyed_neighbors, GenusData, GenusError, ParMap};

/// Largest `p` for which degree-2 operators are computed by default.
pub const DEGREE2_LIMIT: u64 = 3;

/// Which side the matrix acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BasisConvention {
    /// Entry `(i, j)` counts neighbors of class `i` isometric to class `j`;
    /// the operator acts on column vectors of class values.
    Natural,
    /// The transpose, acting on formal sums of classes.
    Dual,
}

/// A Hecke operator on the classes of a genus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeckeOp {
    pub p: u64,
    pub degree: u8,
    pub matrix: IntMatrix,
    pub convention: BasisConvention,
}

impl HeckeOp {
    /// The same operator in the other convention.
    pub fn transposed(&self) -> HeckeOp {
        let convention = match self.convention {
            BasisConvention::Natural => BasisConvention::Dual,
            BasisConvention::Dual => BasisConvention::Natural,
        };
        HeckeOp { p: self.p, degree: self.degree, matrix: self.matrix.transpose(), convention }
    }
}

/// Rows `i ∈ rows` of the natural-convention matrix, as sparse `(j, count)`.
pub fn hecke_rows<P: ParMap>(
    g: &GenusData,
    p: u64,
    degree: u8,
    rows: &[usize],
    par: &P,
) -> Result<Vec<Vec<(usize, u64)>>, GenusError> {
    if g.is_empty() {
        return Ok(Vec::new());
    }
    check_prime(&g.reps[0], p)?;
    if degree == 1 && p == g.base_prime && g.adjacency.len() == g.len() {
        return Ok(rows.iter().map(|&i| g.adjacency[i].clone()).collect());
    }
    par.map_indexed(rows.len(), &|k| {
        let i = rows[k];
        let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
        for n in keyed_neighbors(&g.reps[i], p, degree)? {
            let j = g.lookup(&n, true).ok_or(GenusError::NotClosed(i))?;
            *counts.entry(j).or_default() += 1;
        }
        Ok(counts.into_iter().collect())
    })
    .into_iter()
    .collect()
}

/// Full matrix of `T_p` (degree 1) or of the degree-2 neighbor operator,
/// with degree 2 limited to `p ≤ DEGREE2_LIMIT`.
pub fn hecke_matrix<P: ParMap>(g: &GenusData, p: u64, degree: u8, par: &P) -> Result<HeckeOp, GenusError> {
    hecke_matrix_limited(g, p, degree, DEGREE2_LIMIT, par)
}

/// [`hecke_matrix`] with an explicit degree-2 limit.
pub fn hecke_matrix_limited<P: ParMap>(
    g: &GenusData,
    p: u64,
    degree: u8,
    limit: u64,
    par: &P,
) -> Result<HeckeOp, GenusError> {
    match degree {
        1 => {}
        2 if p <= limit => {}
        2 => return Err(GenusError::Degree2Limit { p, limit }),
        d => return Err(GenusError::Degree(d)),
    }
    let all: Vec<usize> = (0..g.len()).collect();
    let rows = hecke_rows(g, p, degree, &all, par)?;
    let sparse = rows.into_iter().map(|r| r.into_iter().map(|(j, c)| (j, BigInt::from(c))).collect()).collect();
    let matrix = IntMatrix::from_sparse_rows(g.len(), sparse).map_err(|_| GenusError::Internal("matrix shape"))?;
    Ok(HeckeOp { p, degree, matrix, convention: BasisConvention::Natural })
}

/// Affine normalization `T = A·N + B` between a degree-2 neighbor operator
/// `N` and a target operator `T`, fitted on two eigenvalue pairs `(n, t)`.
pub fn calibrate_affine(a: (i64, i64), b: (i64, i64)) -> Option<(num_rational::BigRational, num_rational::BigRational)> {
    use num_rational::BigRational;
    if a.0 == b.0 {
        return None;
    }
    let slope = BigRational::new(BigInt::from(a.1 - b.1), BigInt::from(a.0 - b.0));
    let shift = BigRational::from_integer(BigInt::from(a.1)) - &slope * BigInt::from(a.0);
    Some((slope, shift))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("operator does not act as a scalar; restricted matrix {0:?}")]
    NonScalar(IntMatrix),
    #[error(transparent)]
    Lin(#[from] LinError),
}

fn scalar_of(r: IntMatrix) -> Result<BigInt, ScalarError> {
    let k = r.rows();
    if k == 0 {
        return Err(ScalarError::Lin(LinError::Shape));
    }
    let c = r.get(0, 0)?;
    for i in 0..k {
        for j in 0..k {
            let want = if i == j { c.clone() } else { BigInt::zero() };
            if r.get(i, j)? != want {
                return Err(ScalarError::NonScalar(r));
            }
        }
    }
    Ok(c)
}

/// The scalar by which `op` acts on the invariant subspace `s`.
pub fn eigen_scalar_on(g: &GenusData, op: &HeckeOp, s: &IntSubspace) -> Result<BigInt, ScalarError> {
    if s.ambient() != g.len() || op.matrix.rows() != g.len() {
        return Err(ScalarError::Lin(LinError::Shape));
    }
    let m = match op.convention {
        BasisConvention::Natural => restrict(&op.matrix, s)?,
        BasisConvention::Dual => restrict(&op.matrix.transpose(), s)?,
    };
    scalar_of(m)
}

/// The scalar of an operator on `s` from its natural-convention rows at the
/// pivot columns of `s` alone.
///
/// Valid when `s` is known to be invariant (for instance an eigenspace of a
/// commuting operator): an element of `s` is determined by its pivot
/// coordinates, so these rows determine the restriction.
pub fn scalar_from_pivot_rows(rows: &[Vec<(usize, u64)>], s: &IntSubspace) -> Result<BigInt, ScalarError> {
    let piv = s.pivots();
    if rows.len() != piv.len() {
        return Err(ScalarError::Lin(LinError::Shape));
    }
    let k = s.dim();
    // images of basis vectors at the pivot coordinates, then back-substitution
    let mut r = alloc::vec![alloc::vec![BigInt::zero(); k]; k];
    for (j, b) in s.basis().iter().enumerate() {
        let img: Vec<BigInt> =
            rows.iter().map(|row| row.iter().fold(BigInt::zero(), |acc, &(c, n)| acc + &b[c] * BigInt::from(n))).collect();
        let mut rest = img;
        for i in 0..k {
            let bi = &s.basis()[i];
            let (q, rem) = num_integer::Integer::div_rem(&rest[i], &bi[piv[i]]);
            if !rem.is_zero() {
                return Err(ScalarError::Lin(LinError::NotInvariant));
            }
            for t in i..k {
                rest[t] -= &q * &bi[piv[t]];
            }
            r[i][j] = q;
        }
    }
    scalar_of(IntMatrix::from_dense(&r)?)
}
