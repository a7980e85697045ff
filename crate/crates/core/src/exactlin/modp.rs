//! Dense matrices over prime fields `𝔽_p` with `p < 2⁶³`.

use alloc::vec::Vec;

use super::LinError;

#[inline]
pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

#[inline]
pub(crate) fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Dense `rows × cols` matrix over `𝔽_modulus`, entries reduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModpMatrix {
    modulus: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl ModpMatrix {
    pub fn zeros(modulus: u64, rows: usize, cols: usize) -> Result<Self, LinError> {
        if modulus >= 1 << 63 || !is_prime_u64(modulus) {
            return Err(LinError::NotPrime(modulus));
        }
        Ok(ModpMatrix { modulus, rows, cols, data: alloc::vec![0; rows * cols] })
    }

    /// Builds a matrix from rows of signed integers, reducing them.
    pub fn from_rows(modulus: u64, rows: &[Vec<i64>]) -> Result<Self, LinError> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(modulus, rows.len(), cols)?;
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(LinError::Shape);
            }
            for (j, &x) in r.iter().enumerate() {
                m.data[i * cols + j] = x.rem_euclid(modulus as i64) as u64;
            }
        }
        Ok(m)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Result<u64, LinError> {
        if i >= self.rows || j >= self.cols {
            return Err(LinError::OutOfBounds { row: i, col: j });
        }
        Ok(self.data[i * self.cols + j])
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) -> Result<(), LinError> {
        if i >= self.rows || j >= self.cols {
            return Err(LinError::OutOfBounds { row: i, col: j });
        }
        self.data[i * self.cols + j] = v % self.modulus;
        Ok(())
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let p = self.modulus;
        let c = self.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..c {
            if r == self.rows {
                break;
            }
            let Some(sel) = (r..self.rows).find(|&i| self.data[i * c + col] != 0) else {
                continue;
            };
            if sel != r {
                for k in 0..c {
                    self.data.swap(sel * c + k, r * c + k);
                }
            }
            let inv = invmod(self.data[r * c + col], p);
            for k in col..c {
                self.data[r * c + k] = mulmod(self.data[r * c + k], inv, p);
            }
            let (before, rest) = self.data.split_at_mut(r * c);
            let (prow, after) = rest.split_at_mut(c);
            let small = p < 1 << 31;
            let eliminate = |row: &mut [u64]| {
                let f = row[col];
                if f != 0 {
                    let nf = p - f;
                    for k in col..c {
                        if prow[k] != 0 {
                            row[k] = if small {
                                (row[k] + nf * prow[k]) % p
                            } else {
                                ((row[k] as u128 + nf as u128 * prow[k] as u128) % p as u128) as u64
                            };
                        }
                    }
                }
            };
            before.chunks_mut(c).for_each(eliminate);
            after.chunks_mut(c).for_each(eliminate);
            pivots.push(col);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right kernel `{x : Mx = 0}`, one vector per free column
    /// (that coordinate 1, other free coordinates 0).
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let p = self.modulus;
        let mut out = Vec::new();
        for f in (0..self.cols).filter(|c| pivots.binary_search(c).is_err()) {
            let mut v = alloc::vec![0u64; self.cols];
            v[f] = 1;
            for (k, &pc) in pivots.iter().enumerate() {
                let e = m.data[k * self.cols + f];
                v[pc] = (p - e) % p;
            }
            out.push(v);
        }
        out
    }
}
