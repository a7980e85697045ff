//! Local invariants: rational diagonalization and Hasse–Witt invariants.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{QuadForm, RANK};

/// Diagonal entries `d_i` of `Q ≅ Σ d_i x_i²` over ℚ, from the leading
/// principal minors of the Gram matrix `H/2`.
pub fn rational_diagonal(q: &QuadForm) -> Vec<BigRational> {
    let h = q.hessian();
    let mut a: Vec<Vec<BigRational>> = (0..RANK)
        .map(|i| {
            (0..RANK)
                .map(|j| BigRational::new(BigInt::from(h[i][j]), BigInt::from(2)))
                .collect()
        })
        .collect();
    let mut out = Vec::with_capacity(RANK);
    for k in 0..RANK {
        let pivot = a[k][k].clone();
        out.push(pivot.clone());
        for i in (k + 1)..RANK {
            let f = &a[i][k] / &pivot;
            for j in k..RANK {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
        }
    }
    out
}

/// An integer in the same square class as `x`.
fn square_class(x: &BigRational) -> BigInt {
    x.numer() * x.denom()
}

fn valuation(x: &mut BigInt, p: u64) -> u32 {
    let pb = BigInt::from(p);
    let mut v = 0;
    while !x.is_zero() && (&*x % &pb).is_zero() {
        *x /= &pb;
        v += 1;
    }
    v
}

fn legendre(u: &BigInt, p: u64) -> i32 {
    let r = u.mod_floor(&BigInt::from(p)).to_u64().unwrap();
    if r == 0 {
        return 0;
    }
    let e = (p - 1) / 2;
    let mut base = r as u128;
    let mut acc = 1u128;
    let mut k = e;
    let m = p as u128;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        k >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}

/// Hilbert symbol `(a, b)_p` of nonzero integers; `p = 0` denotes the real place.
pub fn hilbert_symbol(a: &BigInt, b: &BigInt, p: u64) -> i32 {
    assert!(!a.is_zero() && !b.is_zero());
    if p == 0 {
        return if a.is_negative() && b.is_negative() { -1 } else { 1 };
    }
    let mut u = a.clone();
    let mut v = b.clone();
    let alpha = valuation(&mut u, p);
    let beta = valuation(&mut v, p);
    if p == 2 {
        let m8 = |x: &BigInt| x.mod_floor(&BigInt::from(8)).to_u32().unwrap();
        let eps = |r: u32| ((r - 1) / 2) % 2;
        let omega = |r: u32| ((r * r - 1) / 8) % 2;
        let (ru, rv) = (m8(&u), m8(&v));
        let e = eps(ru) * eps(rv) + alpha * omega(rv) + beta * omega(ru);
        return if e.is_multiple_of(2) { 1 } else { -1 };
    }
    let mut s = 1;
    if (alpha * beta) % 2 == 1 && (p % 4 == 3) {
        s = -s;
    }
    if beta % 2 == 1 {
        s *= legendre(&u, p);
    }
    if alpha % 2 == 1 {
        s *= legendre(&v, p);
    }
    s
}

/// Hasse–Witt invariant `∏_{i<j} (d_i, d_j)_p` of `Q ⊗ ℚ_p`
/// (`p = 0` for the real place).
pub fn hasse_invariant(q: &QuadForm, p: u64) -> i32 {
    let d: Vec<BigInt> = rational_diagonal(q).iter().map(square_class).collect();
    let mut s = 1;
    for i in 0..d.len() {
        for j in (i + 1)..d.len() {
            s *= hilbert_symbol(&d[i], &d[j], p);
        }
    }
    s
}

/// Primes at which `q` may have a nontrivial local invariant: 2 and the
/// prime divisors of the half-discriminant.
pub fn bad_primes(q: &QuadForm) -> Vec<u64> {
    let mut n = q.halfdisc().unsigned_abs();
    let mut out = alloc::vec![2u64];
    let mut f = 2u64;
    while f * f <= n {
        while n.is_multiple_of(f) {
            if !out.contains(&f) {
                out.push(f);
            }
            n /= f;
        }
        f += 1;
    }
    if n > 1 && !out.contains(&n) {
        out.push(n);
    }
    out.sort_unstable();
    out
}
