//! Fincke–Pohst enumeration of short vectors.

use alloc::vec::Vec;

use super::{QuadForm, Vec5, RANK};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ShortVector {
    pub value: i64,
    pub vector: Vec5,
}

struct Cholesky {
    // Q(x) = Σ q[i] (x_i + Σ_{j>i} mu[i][j] x_j)²
    q: [f64; RANK],
    mu: [[f64; RANK]; RANK],
}

fn cholesky(form: &QuadForm) -> Cholesky {
    let h = form.hessian();
    let mut a = [[0f64; RANK]; RANK];
    for i in 0..RANK {
        for j in 0..RANK {
            a[i][j] = h[i][j] as f64 / 2.0;
        }
    }
    let mut q = [0f64; RANK];
    let mut mu = [[0f64; RANK]; RANK];
    for i in 0..RANK {
        q[i] = a[i][i];
        for j in (i + 1)..RANK {
            mu[i][j] = a[i][j] / a[i][i];
        }
        for j in (i + 1)..RANK {
            for k in j..RANK {
                a[j][k] -= mu[i][j] * a[i][k];
            }
        }
    }
    Cholesky { q, mu }
}

/// Calls `f(v, Q(v))` for every nonzero `v` with `Q(v) ≤ bound`, one
/// vector out of each `±` pair.
pub fn for_each_short_vector<F: FnMut(&Vec5, i64)>(form: &QuadForm, bound: i64, mut f: F) {
    if bound <= 0 {
        return;
    }
    let ch = cholesky(form);
    let slack = 1e-7 * (bound as f64 + 1.0);
    let mut x = [0i64; RANK];
    descend(form, &ch, bound, bound as f64 + slack, RANK - 1, 0.0, true, &mut x, &mut f);
}

#[allow(clippy::too_many_arguments)]
fn descend<F: FnMut(&Vec5, i64)>(
    form: &QuadForm,
    ch: &Cholesky,
    bound: i64,
    fbound: f64,
    level: usize,
    partial: f64,
    upper_zero: bool,
    x: &mut Vec5,
    f: &mut F,
) {
    let mut center = 0f64;
    for j in (level + 1)..RANK {
        center -= ch.mu[level][j] * x[j] as f64;
    }
    let room = fbound - partial;
    if room < 0.0 {
        return;
    }
    let radius = libm::sqrt(room / ch.q[level]);
    let lo = if upper_zero { 0 } else { libm::ceil(center - radius) as i64 };
    let hi = libm::floor(center + radius) as i64;
    for xi in lo..=hi {
        x[level] = xi;
        let d = xi as f64 - center;
        let p = partial + ch.q[level] * d * d;
        if p > fbound {
            continue;
        }
        let zero_here = upper_zero && xi == 0;
        if level == 0 {
            if zero_here {
                continue;
            }
            let v = form.eval(x);
            if v <= bound {
                f(x, v);
            }
        } else {
            descend(form, ch, bound, fbound, level - 1, p, zero_here, x, f);
        }
    }
    x[level] = 0;
}

/// Flips `v` so that its first nonzero coordinate is positive.
pub(crate) fn sign_normalize(v: &mut Vec5) {
    if let Some(&c) = v.iter().find(|&&c| c != 0) {
        if c < 0 {
            for c in v.iter_mut() {
                *c = -*c;
            }
        }
    }
}

/// All nonzero `v` with `Q(v) ≤ bound`, one per `±` pair (first nonzero
/// coordinate positive), sorted by `(value, entries)`.
pub fn short_vectors(form: &QuadForm, bound: i64) -> Vec<ShortVector> {
    let mut out = Vec::new();
    for_each_short_vector(form, bound, |v, value| {
        let mut vector = *v;
        sign_normalize(&mut vector);
        out.push(ShortVector { value, vector });
    });
    out.sort();
    out
}
