//! LLL reduction of a Gram matrix with exact integer updates.

use super::{identity5, Mat5, QuadForm, RANK};

const DELTA: f64 = 0.99;

/// Replaces basis vector `k` by `b_k + r·b_j`, updating Gram and transform.
#[inline]
fn add_multiple(g: &mut Mat5, u: &mut Mat5, k: usize, j: usize, r: i64) {
    for i in 0..RANK {
        g[i][k] += r * g[i][j];
    }
    for i in 0..RANK {
        g[k][i] += r * g[j][i];
    }
    for row in u.iter_mut() {
        row[k] += r * row[j];
    }
}

#[inline]
fn swap_basis(g: &mut Mat5, u: &mut Mat5, a: usize, b: usize) {
    g.swap(a, b);
    for row in g.iter_mut() {
        row.swap(a, b);
    }
    for row in u.iter_mut() {
        row.swap(a, b);
    }
}

/// Gram–Schmidt data (μ, squared lengths) of the first `upto` vectors.
fn gso(g: &Mat5, mu: &mut [[f64; RANK]; RANK], bstar: &mut [f64; RANK], upto: usize) {
    for i in 0..upto {
        for j in 0..i {
            let mut s = g[i][j] as f64;
            for k in 0..j {
                s -= mu[j][k] * mu[i][k] * bstar[k];
            }
            mu[i][j] = s / bstar[j];
        }
        let mut s = g[i][i] as f64;
        for k in 0..i {
            s -= mu[i][k] * mu[i][k] * bstar[k];
        }
        bstar[i] = s;
    }
}

/// LLL-reduces `form`; returns the reduced form and the basis change `U`
/// with `reduced = Uᵀ H U`.
/// Superdiagonal signs are normalized so that `H[i][i+1] ≤ 0`.
pub fn lll_reduce(form: &QuadForm) -> (QuadForm, Mat5) {
    let mut g = *form.hessian();
    let mut u = identity5();
    let mut mu = [[0f64; RANK]; RANK];
    let mut bstar = [0f64; RANK];
    let mut k = 1;
    let mut guard = 0usize;
    while k < RANK {
        guard += 1;
        if guard > 100_000 {
            break;
        }
        gso(&g, &mut mu, &mut bstar, k + 1);
        for j in (0..k).rev() {
            let r = libm::round(mu[k][j]);
            if r != 0.0 {
                add_multiple(&mut g, &mut u, k, j, -(r as i64));
                gso(&g, &mut mu, &mut bstar, k + 1);
            }
        }
        if bstar[k] < (DELTA - mu[k][k - 1] * mu[k][k - 1]) * bstar[k - 1] {
            swap_basis(&mut g, &mut u, k, k - 1);
            k = if k > 1 { k - 1 } else { 1 };
        } else {
            k += 1;
        }
    }
    // sign normalization along the superdiagonal
    for i in 1..RANK {
        if g[i - 1][i] > 0 {
            for j in 0..RANK {
                g[i][j] = -g[i][j];
            }
            for j in 0..RANK {
                g[j][i] = -g[j][i];
            }
            for row in u.iter_mut() {
                row[i] = -row[i];
            }
        }
    }
    (QuadForm::from_hessian_unchecked(g), u)
}
