//! Kneser neighbors of degree 1 (isotropic lines) and degree 2 (isotropic
//! planes).

use alloc::vec::Vec;

use crate::quinlat::{dot, QuadForm, Vec5, RANK};

use super::GenusError;

pub(crate) fn mod_inv(a: i64, p: i64) -> i64 {
    let (mut r0, mut r1) = (a.rem_euclid(p), p);
    let (mut s0, mut s1) = (1i64, 0i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1);
    s0.rem_euclid(p)
}

/// Checks that `p` is a prime for which neighbors are defined on `form`.
pub fn check_prime(form: &QuadForm, p: u64) -> Result<(), GenusError> {
    if p < 2 || !(2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d)) {
        return Err(GenusError::NotPrime(p));
    }
    if form.halfdisc() % (p as i64) == 0 {
        return Err(GenusError::BadPrime(p));
    }
    Ok(())
}

/// Projective points of `𝔽_p⁵` (first nonzero coordinate 1) with `Q ≡ 0`.
pub fn isotropic_lines(form: &QuadForm, p: i64) -> Vec<Vec5> {
    let mut out = Vec::new();
    for lead in 0..RANK {
        let free = RANK - lead - 1;
        let total = p.pow(free as u32);
        for mut idx in 0..total {
            let mut v = [0i64; RANK];
            v[lead] = 1;
            for c in (lead + 1..RANK).rev() {
                v[c] = idx % p;
                idx /= p;
            }
            if form.eval(&v).rem_euclid(p) == 0 {
                out.push(v);
            }
        }
    }
    out
}

/// Totally isotropic planes of `𝔽_p⁵` in reduced row echelon form.
pub fn isotropic_planes(form: &QuadForm, p: i64) -> Vec<[Vec5; 2]> {
    let mut out = Vec::new();
    for i in 0..RANK {
        for j in i + 1..RANK {
            // v1: pivot i, free in (i, RANK) \ {j}; v2: pivot j, free in (j, RANK)
            let free1: Vec<usize> = (i + 1..RANK).filter(|&c| c != j).collect();
            let free2: Vec<usize> = (j + 1..RANK).collect();
            let n1 = p.pow(free1.len() as u32);
            let n2 = p.pow(free2.len() as u32);
            for a in 0..n1 {
                let mut v1 = [0i64; RANK];
                v1[i] = 1;
                let mut t = a;
                for &c in &free1 {
                    v1[c] = t % p;
                    t /= p;
                }
                if form.eval(&v1).rem_euclid(p) != 0 {
                    continue;
                }
                for b in 0..n2 {
                    let mut v2 = [0i64; RANK];
                    v2[j] = 1;
                    let mut t = b;
                    for &c in &free2 {
                        v2[c] = t % p;
                        t /= p;
                    }
                    if form.eval(&v2).rem_euclid(p) == 0 && form.bilinear(&v1, &v2).rem_euclid(p) == 0 {
                        out.push([v1, v2]);
                    }
                }
            }
        }
    }
    out
}

/// Basis of the kernel of `x ↦ (rows[k]·x mod p)_k` in `𝔽_p⁵`, together with
/// pivot columns of the row-reduced system.
fn kernel_mod_p(rows: &[Vec5], p: i64) -> (Vec<Vec5>, Vec<usize>) {
    let mut m: Vec<Vec5> = rows.iter().map(|r| r.map(|x| x.rem_euclid(p))).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..RANK {
        let Some(sel) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, sel);
        let inv = mod_inv(m[r][c], p);
        for x in m[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for k in 0..RANK {
                    m[i][k] = (m[i][k] - f * m[r][k]).rem_euclid(p);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    let mut basis = Vec::new();
    for f in (0..RANK).filter(|c| !pivots.contains(c)) {
        let mut v = [0i64; RANK];
        v[f] = 1;
        for (k, &pc) in pivots.iter().enumerate() {
            v[pc] = (-m[k][f]).rem_euclid(p);
        }
        basis.push(v);
    }
    (basis, pivots)
}

/// Row Hermite normal form of the lattice spanned by `gens`, assumed of
/// full rank 5. Pivots positive, entries above a pivot reduced into `[0, pivot)`.
pub(crate) fn hnf(gens: &[Vec5]) -> [Vec5; RANK] {
    let mut m: Vec<[i128; RANK]> = gens.iter().map(|g| g.map(|x| x as i128)).collect();
    let mut out = [[0i64; RANK]; RANK];
    let mut top = 0;
    for c in 0..RANK {
        // gcd-combine the column below `top`
        loop {
            let nz: Vec<usize> = (top..m.len()).filter(|&i| m[i][c] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let piv = *nz.iter().min_by_key(|&&i| m[i][c].abs()).unwrap();
            for &i in &nz {
                if i != piv {
                    let q = m[i][c].div_euclid(m[piv][c]);
                    for k in 0..RANK {
                        m[i][k] -= q * m[piv][k];
                    }
                }
            }
        }
        let sel = (top..m.len()).find(|&i| m[i][c] != 0).expect("generators span a full-rank lattice");
        m.swap(top, sel);
        if m[top][c] < 0 {
            for x in m[top].iter_mut() {
                *x = -*x;
            }
        }
        for i in 0..top {
            let q = m[i][c].div_euclid(m[top][c]);
            if q != 0 {
                for k in 0..RANK {
                    m[i][k] -= q * m[top][k];
                }
            }
        }
        top += 1;
    }
    for (i, row) in m.iter().take(RANK).enumerate() {
        out[i] = row.map(|x| x as i64);
    }
    out
}

/// Form on the lattice `N` given the HNF basis (rows) of `pN`.
fn scaled_form(form: &QuadForm, basis_pn: &[Vec5; RANK], p: i64) -> QuadForm {
    let h = form.hessian();
    let mut g = [[0i64; RANK]; RANK];
    let p2 = (p * p) as i128;
    for i in 0..RANK {
        let hb: Vec5 = core::array::from_fn(|r| (0..RANK).map(|k| h[r][k] * basis_pn[i][k]).sum());
        for j in 0..RANK {
            let v: i128 = (0..RANK).map(|k| hb[k] as i128 * basis_pn[j][k] as i128).sum();
            debug_assert_eq!(v % p2, 0);
            g[i][j] = (v / p2) as i64;
        }
    }
    QuadForm::from_hessian_unchecked(g)
}

/// Generators of `p·L_X` where `L_X = {x : B(x, v) ≡ 0 mod p for v in vs}`.
fn scaled_orthogonal_gens(form: &QuadForm, vs: &[Vec5], p: i64) -> Vec<Vec5> {
    let rows: Vec<Vec5> = vs.iter().map(|v| form.apply(v)).collect();
    let (ker, _) = kernel_mod_p(&rows, p);
    let mut gens = Vec::with_capacity(RANK + ker.len() + 2);
    for i in 0..RANK {
        let mut e = [0i64; RANK];
        e[i] = p * p;
        gens.push(e);
    }
    for k in ker {
        gens.push(k.map(|x| x * p));
    }
    gens
}

/// The neighbor of `form` attached to the isotropic line through `v`.
pub(crate) fn neighbor_of_line(form: &QuadForm, v: &Vec5, p: i64) -> QuadForm {
    let hv = form.apply(v);
    let k = (0..RANK).find(|&i| hv[i].rem_euclid(p) != 0).expect("isotropic vector outside the radical");
    let q = form.eval(v);
    debug_assert_eq!(q.rem_euclid(p), 0);
    let c = (-(q / p) * mod_inv(hv[k], p)).rem_euclid(p);
    let mut lift = *v;
    lift[k] += p * c;
    debug_assert_eq!(form.eval(&lift).rem_euclid(p * p), 0);
    let mut gens = scaled_orthogonal_gens(form, &[*v], p);
    gens.push(lift);
    scaled_form(form, &hnf(&gens), p)
}

/// All `p`-neighbors of `form`, one per isotropic line of `L/pL`.
pub fn p_neighbors(form: &QuadForm, p: u64) -> Result<Vec<QuadForm>, GenusError> {
    check_prime(form, p)?;
    let p = p as i64;
    let lines = isotropic_lines(form, p);
    if lines.is_empty() {
        return Err(GenusError::Internal("no isotropic vectors"));
    }
    Ok(lines.iter().map(|v| neighbor_of_line(form, v, p)).collect())
}

/// The degree-2 neighbors attached to one isotropic plane.
pub(crate) fn neighbors_of_plane(form: &QuadForm, plane: &[Vec5; 2], p: i64) -> Vec<QuadForm> {
    let [v1, v2] = *plane;
    let h1 = form.apply(&v1);
    let h2 = form.apply(&v2);
    // coordinates a, b on which (B(·, v1), B(·, v2)) is invertible mod p
    let mut ab = None;
    'outer: for a in 0..RANK {
        for b in a + 1..RANK {
            if (h1[a] * h2[b] - h1[b] * h2[a]).rem_euclid(p) != 0 {
                ab = Some((a, b));
                break 'outer;
            }
        }
    }
    let (a, b) = ab.expect("isotropic plane meets the radical");
    let base = scaled_orthogonal_gens(form, &plane[..], p);
    let p2 = p * p;
    let q1 = form.eval(&v1);
    let q2 = form.eval(&v2);
    let b12 = form.bilinear(&v1, &v2);
    let mut seen: Vec<[Vec5; RANK]> = Vec::new();
    let mut out = Vec::new();
    let rep = |s: i64, t: i64| {
        let mut w = [0i64; RANK];
        w[a] = s;
        w[b] = t;
        w
    };
    for s1 in 0..p {
        for t1 in 0..p {
            let w1 = rep(s1, t1);
            if (q1 + p * dot(&h1, &w1)).rem_euclid(p2) != 0 {
                continue;
            }
            for s2 in 0..p {
                for t2 in 0..p {
                    let w2 = rep(s2, t2);
                    if (q2 + p * dot(&h2, &w2)).rem_euclid(p2) != 0 {
                        continue;
                    }
                    let cross = b12 + p * (dot(&h1, &w2) + dot(&h2, &w1));
                    if cross.rem_euclid(p2) != 0 {
                        continue;
                    }
                    let l1: Vec5 = core::array::from_fn(|i| v1[i] + p * w1[i]);
                    let l2: Vec5 = core::array::from_fn(|i| v2[i] + p * w2[i]);
                    let mut gens = base.clone();
                    gens.push(l1);
                    gens.push(l2);
                    let basis = hnf(&gens);
                    if !seen.contains(&basis) {
                        seen.push(basis);
                        out.push(scaled_form(form, &basis, p));
                    }
                }
            }
        }
    }
    out
}

/// All degree-2 neighbors of `form`: lattices `N` with `L ∩ N` of index `p²`
/// in both, attached to the totally isotropic planes of `L/pL`.
pub fn second_neighbors(form: &QuadForm, p: u64) -> Result<Vec<QuadForm>, GenusError> {
    check_prime(form, p)?;
    let p = p as i64;
    let mut out = Vec::new();
    for plane in isotropic_planes(form, p) {
        out.extend(neighbors_of_plane(form, &plane, p));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quinlat::{builtin_q1975, builtin_q79};

    /// Isotropic projective points by brute force over all of `𝔽_p⁵`.
    fn brute_isotropic_count(form: &QuadForm, p: i64) -> usize {
        let mut n = 0;
        let total = p.pow(5);
        for mut idx in 1..total {
            let mut v = [0i64; 5];
            for c in 0..5 {
                v[c] = idx % p;
                idx /= p;
            }
            if form.eval(&v).rem_euclid(p) == 0 {
                n += 1;
            }
        }
        n / (p as usize - 1)
    }

    #[test]
    fn line_counts() {
        for q in [builtin_q1975(), builtin_q79()] {
            for p in [2i64, 3] {
                let expect = (p * p * p + p * p + p + 1) as usize;
                assert_eq!(brute_isotropic_count(&q, p), expect);
                assert_eq!(p_neighbors(&q, p as u64).unwrap().len(), expect);
            }
        }
        assert_eq!(p_neighbors(&builtin_q1975(), 2).unwrap().len(), 15);
    }

    #[test]
    fn neighbors_keep_halfdisc() {
        let q = builtin_q1975();
        for p in [2u64, 3, 7] {
            for n in p_neighbors(&q, p).unwrap() {
                assert_eq!(n.halfdisc(), 1975);
                assert!(n.hessian().iter().enumerate().all(|(i, r)| r[i] % 2 == 0));
            }
        }
    }

    #[test]
    fn bad_primes_rejected() {
        let q = builtin_q1975();
        assert_eq!(p_neighbors(&q, 5), Err(GenusError::BadPrime(5)));
        assert_eq!(p_neighbors(&q, 4), Err(GenusError::NotPrime(4)));
    }

    #[test]
    fn second_neighbor_counts() {
        for q in [builtin_q1975(), builtin_q79()] {
            for p in [2i64, 3] {
                // totally isotropic planes: (p+1)(p²+1), each with p neighbors
                assert_eq!(isotropic_planes(&q, p).len() as i64, (p + 1) * (p * p + 1));
                let ns = second_neighbors(&q, p as u64).unwrap();
                assert_eq!(ns.len() as i64, p * (p + 1) * (p * p + 1));
                assert!(ns.iter().all(|n| n.halfdisc() == q.halfdisc()));
            }
        }
    }

    #[test]
    fn hnf_is_canonical() {
        let a = hnf(&[[2, 0, 0, 0, 0], [1, 1, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1]]);
        let b = hnf(&[[3, 1, 0, 0, 0], [0, 0, 1, 0, 0], [1, 1, 0, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1], [4, 0, 0, 0, 0]]);
        assert_eq!(a, b);
    }
}
