//! Exact linear algebra over `ℤ` and prime fields.
//!
//! Integer kernels are computed modularly: row reduction modulo word-size
//! primes, Chinese remaindering with rational reconstruction, and an exact
//! check of every candidate before it is accepted.

pub(crate) mod modp;

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use modp::{is_prime_u64, ModpMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinError {
    #[error("index ({row}, {col}) out of bounds")]
    OutOfBounds { row: usize, col: usize },
    #[error("inconsistent dimensions")]
    Shape,
    #[error("{0} is not a prime below 2^63")]
    NotPrime(u64),
    #[error("subspace is not invariant under the operator")]
    NotInvariant,
    #[error("modular reconstruction did not converge")]
    NoConvergence,
}

/// Sparse integer matrix; each row holds `(column, value)` pairs with
/// strictly increasing columns and nonzero values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, BigInt)>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: alloc::vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i].push((i, BigInt::one()));
        }
        m
    }

    pub fn from_dense<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self, LinError> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(LinError::Shape);
            }
            for (j, x) in r.iter().enumerate() {
                let x: BigInt = x.clone().into();
                if !x.is_zero() {
                    m.data[i].push((j, x));
                }
            }
        }
        Ok(m)
    }

    /// Builds a matrix from sparse rows; entries are sorted and summed.
    pub fn from_sparse_rows(cols: usize, rows: Vec<Vec<(usize, BigInt)>>) -> Result<Self, LinError> {
        let mut data = Vec::with_capacity(rows.len());
        for mut r in rows {
            r.sort_by_key(|e| e.0);
            let mut out: Vec<(usize, BigInt)> = Vec::with_capacity(r.len());
            for (j, v) in r {
                if j >= cols {
                    return Err(LinError::OutOfBounds { row: data.len(), col: j });
                }
                match out.last_mut() {
                    Some(last) if last.0 == j => last.1 += v,
                    _ => out.push((j, v)),
                }
            }
            out.retain(|e| !e.1.is_zero());
            data.push(out);
        }
        Ok(IntMatrix { rows: data.len(), cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[(usize, BigInt)] {
        &self.data[i]
    }

    pub fn get(&self, i: usize, j: usize) -> Result<BigInt, LinError> {
        if i >= self.rows || j >= self.cols {
            return Err(LinError::OutOfBounds { row: i, col: j });
        }
        Ok(match self.data[i].binary_search_by_key(&j, |e| e.0) {
            Ok(k) => self.data[i][k].1.clone(),
            Err(_) => BigInt::zero(),
        })
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) -> Result<(), LinError> {
        if i >= self.rows || j >= self.cols {
            return Err(LinError::OutOfBounds { row: i, col: j });
        }
        let row = &mut self.data[i];
        match row.binary_search_by_key(&j, |e| e.0) {
            Ok(k) if v.is_zero() => {
                row.remove(k);
            }
            Ok(k) => row[k].1 = v,
            Err(_) if v.is_zero() => {}
            Err(k) => row.insert(k, (j, v)),
        }
        Ok(())
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut out = alloc::vec![alloc::vec![BigInt::zero(); self.cols]; self.rows];
        for (i, r) in self.data.iter().enumerate() {
            for (j, v) in r {
                out[i][*j] = v.clone();
            }
        }
        out
    }

    /// `self + c·I`.
    pub fn add_scalar(&self, c: &BigInt) -> Result<Self, LinError> {
        if self.rows != self.cols {
            return Err(LinError::Shape);
        }
        let mut m = self.clone();
        for i in 0..self.rows {
            let v = m.get(i, i)? + c;
            m.set(i, i, v)?;
        }
        Ok(m)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut m = self.clone();
        for r in m.data.iter_mut() {
            for e in r.iter_mut() {
                e.1 *= c;
            }
            r.retain(|e| !e.1.is_zero());
        }
        m
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinError::Shape);
        }
        let rows = self.data.iter().zip(&other.data).map(|(a, b)| a.iter().chain(b).cloned().collect()).collect();
        Self::from_sparse_rows(self.cols, rows)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinError> {
        if self.cols != other.rows {
            return Err(LinError::Shape);
        }
        let mut rows = Vec::with_capacity(self.rows);
        for r in &self.data {
            let mut acc: Vec<(usize, BigInt)> = Vec::new();
            for (k, a) in r {
                for (j, b) in &other.data[*k] {
                    acc.push((*j, a * b));
                }
            }
            rows.push(acc);
        }
        Self::from_sparse_rows(other.cols, rows)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>, LinError> {
        if v.len() != self.cols {
            return Err(LinError::Shape);
        }
        Ok(self
            .data
            .iter()
            .map(|r| r.iter().fold(BigInt::zero(), |acc, (j, a)| acc + a * &v[*j]))
            .collect())
    }

    pub fn transpose(&self) -> Self {
        let mut rows = alloc::vec![Vec::new(); self.cols];
        for (i, r) in self.data.iter().enumerate() {
            for (j, v) in r {
                rows[*j].push((i, v.clone()));
            }
        }
        IntMatrix { rows: self.cols, cols: self.rows, data: rows }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    /// Reduction modulo a prime.
    pub fn to_modp(&self, p: u64) -> Result<ModpMatrix, LinError> {
        let mut m = ModpMatrix::zeros(p, self.rows, self.cols)?;
        let pb = BigInt::from(p);
        for (i, r) in self.data.iter().enumerate() {
            for (j, v) in r {
                m.set(i, *j, v.mod_floor(&pb).to_u64().unwrap())?;
            }
        }
        Ok(m)
    }
}

/// A saturated sublattice `S = W ∩ ℤⁿ` of `ℤⁿ`, stored by its row Hermite
/// normal form basis (positive pivots, entries above pivots reduced).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntSubspace {
    ambient: usize,
    basis: Vec<Vec<BigInt>>,
}

impl IntSubspace {
    /// Saturation of the span of `gens` in `ℤⁿ`.
    pub fn saturate(ambient: usize, gens: &[Vec<BigInt>]) -> Result<Self, LinError> {
        if gens.iter().any(|g| g.len() != ambient) {
            return Err(LinError::Shape);
        }
        let h = hnf_rows(gens);
        if h.is_empty() {
            return Ok(IntSubspace { ambient, basis: h });
        }
        // the kernel of the kernel is the saturation
        let m = IntMatrix::from_dense(&h)?;
        let perp = kernel_int(&m)?;
        let back = IntMatrix::from_dense(&perp.basis)?;
        let sat = if perp.basis.is_empty() { IntSubspace::full(ambient) } else { kernel_int(&back)? };
        Ok(sat)
    }

    pub fn full(ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| (0..ambient).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        IntSubspace { ambient, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    /// Reduction modulo `p` as a basis of a subspace of `𝔽_pⁿ`; saturation
    /// keeps the dimension.
    pub fn reduce_mod(&self, p: u64) -> Vec<Vec<u64>> {
        let pb = BigInt::from(p);
        self.basis.iter().map(|r| r.iter().map(|x| x.mod_floor(&pb).to_u64().unwrap()).collect()).collect()
    }

    /// Pivot column of each basis row.
    pub fn pivots(&self) -> Vec<usize> {
        self.basis.iter().map(|r| r.iter().position(|x| !x.is_zero()).unwrap()).collect()
    }

    /// Coordinates of `v` in the basis, or `None` when `v ∉ S`.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut rest: Vec<BigInt> = v.to_vec();
        let mut out = Vec::with_capacity(self.dim());
        for (b, piv) in self.basis.iter().zip(self.pivots()) {
            let (c, r) = rest[piv].div_rem(&b[piv]);
            if !r.is_zero() {
                return None;
            }
            if !c.is_zero() {
                for (x, y) in rest.iter_mut().zip(b) {
                    *x -= &c * y;
                }
            }
            out.push(c);
        }
        rest.iter().all(|x| x.is_zero()).then_some(out)
    }
}

/// Row HNF of the lattice spanned by `gens` (zero rows dropped).
pub fn hnf_rows(gens: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = gens.iter().filter(|g| g.iter().any(|x| !x.is_zero())).cloned().collect();
    let n = m.first().map_or(0, |r| r.len());
    let mut top = 0;
    for c in 0..n {
        if top == m.len() {
            break;
        }
        loop {
            let nz: Vec<usize> = (top..m.len()).filter(|&i| !m[i][c].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            let piv = *nz.iter().min_by(|&&a, &&b| m[a][c].abs().cmp(&m[b][c].abs())).unwrap();
            for &i in &nz {
                if i != piv {
                    let q = m[i][c].div_floor(&m[piv][c]);
                    let pr = m[piv].clone();
                    for (x, y) in m[i].iter_mut().zip(&pr) {
                        *x -= &q * y;
                    }
                }
            }
        }
        let Some(sel) = (top..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(top, sel);
        if m[top][c].is_negative() {
            for x in m[top].iter_mut() {
                *x = -&*x;
            }
        }
        let pr = m[top].clone();
        for i in 0..top {
            let q = m[i][c].div_floor(&pr[c]);
            if !q.is_zero() {
                for (x, y) in m[i].iter_mut().zip(&pr) {
                    *x -= &q * y;
                }
            }
        }
        top += 1;
    }
    m.truncate(top);
    m
}

/// Word-size primes below `2³¹`, descending.
fn primes() -> impl Iterator<Item = u64> {
    (1u64 << 30..1u64 << 31).rev().filter(|&n| n % 2 == 1 && is_prime_u64(n))
}

/// `n/d` with `n ≡ a d (mod m)`, `|n|, d ≤ √(m/2)`, if it exists.
pub fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<(BigInt, BigInt)> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        (r0, r1) = (r1, r2);
        (t0, t1) = (t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    if !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(if t1.is_negative() { (-r1, -t1) } else { (r1, t1) })
}

/// `ker(A) ∩ ℤⁿ` for the right kernel `{x : Ax = 0}`.
pub fn kernel_int(a: &IntMatrix) -> Result<IntSubspace, LinError> {
    let n = a.cols();
    // pivot structure from the primes of maximal rank seen so far
    let mut pivots: Option<Vec<usize>> = None;
    let mut modulus = BigInt::one();
    let mut residues: Vec<BigInt> = Vec::new();
    for (round, p) in primes().enumerate() {
        if round > 400 {
            return Err(LinError::NoConvergence);
        }
        let mut m = a.to_modp(p)?;
        let piv = m.rref();
        match &pivots {
            Some(old) if old.len() > piv.len() || (old.len() == piv.len() && old != &piv) => continue,
            Some(old) if old.len() < piv.len() => {
                modulus = BigInt::one();
                residues.clear();
                pivots = Some(piv.clone());
            }
            None => pivots = Some(piv.clone()),
            _ => {}
        }
        let piv = pivots.clone().unwrap();
        let free: Vec<usize> = (0..n).filter(|c| piv.binary_search(c).is_err()).collect();
        if free.is_empty() {
            return Ok(IntSubspace { ambient: n, basis: Vec::new() });
        }
        // entries E[k][f] of the reduced rows on free columns
        let vals: Vec<u64> =
            (0..piv.len()).flat_map(|k| free.iter().map(move |&f| (k, f))).map(|(k, f)| m.get(k, f).unwrap()).collect();
        let pb = BigInt::from(p);
        if residues.is_empty() {
            residues = vals.iter().map(|&v| BigInt::from(v)).collect();
            modulus = pb;
        } else {
            // CRT: x ≡ r (mod M), x ≡ v (mod p)
            let minv = BigInt::from(modp::invmod((&modulus % &pb).to_u64().unwrap(), p));
            for (r, &v) in residues.iter_mut().zip(&vals) {
                let diff = (BigInt::from(v) - (&*r % &pb)).mod_floor(&pb);
                let t = (diff * &minv).mod_floor(&pb);
                *r += &modulus * t;
            }
            modulus *= &pb;
        }
        if let Some(cand) = reconstruct_kernel(&residues, &modulus, &piv, &free, n) {
            if verify_kernel(a, &cand) {
                return Ok(saturate_from_free(&cand, &free, &piv, n));
            }
        }
    }
    Err(LinError::NoConvergence)
}

/// Kernel vectors `x_f` (one per free column), scaled to be integral and
/// primitive, from reconstructed reduced-row entries.
fn reconstruct_kernel(
    residues: &[BigInt],
    modulus: &BigInt,
    piv: &[usize],
    free: &[usize],
    n: usize,
) -> Option<Vec<Vec<BigInt>>> {
    let nf = free.len();
    let mut out = Vec::with_capacity(nf);
    for (fi, &f) in free.iter().enumerate() {
        let mut nums = Vec::with_capacity(piv.len());
        let mut den = BigInt::one();
        for k in 0..piv.len() {
            let (nu, de) = rational_reconstruct(&residues[k * nf + fi], modulus)?;
            den = den.lcm(&de);
            nums.push((nu, de));
        }
        let mut v = alloc::vec![BigInt::zero(); n];
        v[f] = den.clone();
        for (k, (nu, de)) in nums.into_iter().enumerate() {
            v[piv[k]] = -(nu * (&den / de));
        }
        out.push(v);
    }
    Some(out)
}

fn verify_kernel(a: &IntMatrix, vs: &[Vec<BigInt>]) -> bool {
    vs.iter().all(|v| a.mul_vec(v).map(|r| r.iter().all(|x| x.is_zero())).unwrap_or(false))
}

/// The integral points of the rational span of `vs`, where `vs[i]` has
/// free coordinate `free[i]` nonzero and the other free coordinates zero.
fn saturate_from_free(vs: &[Vec<BigInt>], free: &[usize], piv: &[usize], n: usize) -> IntSubspace {
    let k = free.len();
    // x = Σ a_i vs[i] / vs[i][free[i]]; integral iff a ∈ ℤᵏ and the pivot
    // coordinates Σ a_i c_{r,i} / d_i are integral. Clear to a common d.
    let mut d = BigInt::one();
    for (i, v) in vs.iter().enumerate() {
        d = d.lcm(&v[free[i]]);
    }
    // rows: N a ≡ 0 (mod d)
    let nrows: Vec<Vec<BigInt>> = piv
        .iter()
        .map(|&r| (0..k).map(|i| &vs[i][r] * (&d / &vs[i][free[i]])).collect())
        .collect();
    // lattice basis (columns of m) of {a : N a ≡ 0 mod d}
    let mut m: Vec<Vec<BigInt>> = (0..k)
        .map(|i| (0..k).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    for row in &nrows {
        // c_j = row · (column j of m) mod d
        let mut c: Vec<BigInt> = (0..k)
            .map(|j| (0..k).fold(BigInt::zero(), |acc, i| acc + &row[i] * &m[i][j]).mod_floor(&d))
            .collect();
        if c.iter().all(|x| x.is_zero()) {
            continue;
        }
        // unimodular column operations bringing c to (g, 0, ..., 0)
        for j in 1..k {
            while !c[j].is_zero() {
                let q = c[0].div_floor(&c[j]);
                let t = &q * &c[j];
                c[0] -= t;
                for r in m.iter_mut() {
                    let t = &q * &r[j];
                    r[0] -= t;
                }
                c.swap(0, j);
                for r in m.iter_mut() {
                    r.swap(0, j);
                }
            }
        }
        let g = c[0].gcd(&d);
        let scale = &d / g;
        for r in m.iter_mut() {
            r[0] *= &scale;
        }
        // keep entries small: rows are columns of m, reduce as a lattice
        let cols: Vec<Vec<BigInt>> = (0..k).map(|j| (0..k).map(|i| m[i][j].clone()).collect()).collect();
        let mut gens = cols;
        for i in 0..k {
            gens.push((0..k).map(|j| if i == j { d.clone() } else { BigInt::zero() }).collect());
        }
        let h = hnf_rows(&gens);
        for i in 0..k {
            for j in 0..k {
                m[i][j] = h[j][i].clone();
            }
        }
    }
    let gens: Vec<Vec<BigInt>> = (0..k)
        .map(|j| {
            let mut x = alloc::vec![BigInt::zero(); n];
            for i in 0..k {
                let coef = &m[i][j] * (&d / &vs[i][free[i]]);
                for (t, y) in x.iter_mut().zip(&vs[i]) {
                    *t += &coef * y;
                }
            }
            x.iter().map(|y| y / &d).collect()
        })
        .collect();
    IntSubspace { ambient: n, basis: hnf_rows(&gens) }
}

/// Right kernel of a matrix over `𝔽_p`.
pub fn kernel_modp(a: &ModpMatrix) -> Vec<Vec<u64>> {
    a.kernel()
}

/// `(S₁ ⊗ 𝔽_ℓ) ∩ (S₂ ⊗ 𝔽_ℓ)`, as a basis in reduced echelon form.
pub fn intersect_modp(s1: &IntSubspace, s2: &IntSubspace, ell: u64) -> Result<Vec<Vec<u64>>, LinError> {
    if s1.ambient() != s2.ambient() {
        return Err(LinError::Shape);
    }
    let n = s1.ambient();
    let b1 = s1.reduce_mod(ell);
    let b2 = s2.reduce_mod(ell);
    let (k1, k2) = (b1.len(), b2.len());
    if k1 == 0 || k2 == 0 {
        return Ok(Vec::new());
    }
    // x·B1 = y·B2: kernel of the n × (k1+k2) system [B1ᵀ | −B2ᵀ]
    let mut sys = ModpMatrix::zeros(ell, n, k1 + k2)?;
    for c in 0..n {
        for i in 0..k1 {
            sys.set(c, i, b1[i][c])?;
        }
        for j in 0..k2 {
            sys.set(c, k1 + j, (ell - b2[j][c]) % ell)?;
        }
    }
    let mut vecs = Vec::new();
    for sol in sys.kernel() {
        let v: Vec<u64> = (0..n)
            .map(|c| (0..k1).fold(0u64, |acc, i| (acc + modp::mulmod(sol[i], b1[i][c], ell)) % ell))
            .collect();
        vecs.push(v);
    }
    if vecs.is_empty() {
        return Ok(vecs);
    }
    let mut m = ModpMatrix::zeros(ell, vecs.len(), n)?;
    for (i, v) in vecs.iter().enumerate() {
        for (j, &x) in v.iter().enumerate() {
            m.set(i, j, x)?;
        }
    }
    let r = m.rref().len();
    Ok((0..r).map(|i| m.row(i).to_vec()).collect())
}

/// Matrix `R` of `A` on an invariant subspace: `A b_j = Σ_i R_ij b_i` for
/// the basis rows `b_j` of `S`.
pub fn restrict(a: &IntMatrix, s: &IntSubspace) -> Result<IntMatrix, LinError> {
    if a.rows() != a.cols() || a.cols() != s.ambient() {
        return Err(LinError::Shape);
    }
    let k = s.dim();
    let mut r = alloc::vec![alloc::vec![BigInt::zero(); k]; k];
    for (j, b) in s.basis().iter().enumerate() {
        let img = a.mul_vec(b)?;
        let coords = s.coordinates(&img).ok_or(LinError::NotInvariant)?;
        for (i, c) in coords.into_iter().enumerate() {
            r[i][j] = c;
        }
    }
    IntMatrix::from_dense(&r)
}

/// Characteristic polynomial `det(xI − M)`, coefficients from the constant
/// term up, by the division-free Berkowitz algorithm.
pub fn charpoly(m: &IntMatrix) -> Result<Vec<BigInt>, LinError> {
    if m.rows() != m.cols() {
        return Err(LinError::Shape);
    }
    let n = m.rows();
    let a = m.to_dense();
    // vect holds coefficients from the leading term down
    let mut vect: Vec<BigInt> = alloc::vec![BigInt::one()];
    for r in 0..n {
        // principal r×r block A_r, column C = a[0..r][r], row R = a[r][0..r]
        let mut toeplitz_col = Vec::with_capacity(r + 2);
        toeplitz_col.push(BigInt::one());
        toeplitz_col.push(-a[r][r].clone());
        let mut x: Vec<BigInt> = (0..r).map(|i| a[i][r].clone()).collect();
        for _ in 0..r {
            let t = (0..r).fold(BigInt::zero(), |acc, i| acc + &a[r][i] * &x[i]);
            toeplitz_col.push(-t);
            x = (0..r).map(|i| (0..r).fold(BigInt::zero(), |acc, j| acc + &a[i][j] * &x[j])).collect();
        }
        let mut next = alloc::vec![BigInt::zero(); vect.len() + 1];
        for (i, nx) in next.iter_mut().enumerate() {
            for (j, v) in vect.iter().enumerate() {
                if i >= j && i - j < toeplitz_col.len() {
                    *nx += &toeplitz_col[i - j] * v;
                }
            }
        }
        vect = next;
    }
    vect.reverse();
    Ok(vect)
}

#[cfg(test)]
mod tests;
