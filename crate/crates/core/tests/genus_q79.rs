//! The 9-class genus of half-discriminant 79.

use congruence_kit_core::exactlin::{charpoly, kernel_int, IntMatrix};
use congruence_kit_core::genus::{eigen_scalar_on, enumerate_genus, hecke_matrix, GenusData, Sequential};
use congruence_kit_core::quinlat::{builtin_q1975, builtin_q79, hasse_invariant, is_isometric};
use num_bigint::BigInt;

fn genus() -> GenusData {
    enumerate_genus(&builtin_q79(), 2, &Sequential).unwrap()
}

fn to_i64(p: &[BigInt]) -> Vec<i64> {
    p.iter().map(|c| i64::try_from(c).unwrap()).collect()
}

/// Exact division by a monic polynomial (constant term first).
fn div_monic(p: &[i64], d: &[i64]) -> Option<Vec<i64>> {
    let mut r = p.to_vec();
    let (n, m) = (p.len() - 1, d.len() - 1);
    let mut q = vec![0; n - m + 1];
    for k in (0..=n - m).rev() {
        let c = r[k + m];
        q[k] = c;
        for j in 0..=m {
            r[k + j] -= c * d[j];
        }
    }
    r.iter().all(|&x| x == 0).then_some(q)
}

/// Monic factors of degree 1 or 2 with roots of absolute value at most `rho`.
fn small_factors(p: &[i64], rho: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for a in -rho..=rho {
        if div_monic(p, &[-a, 1]).is_some() {
            out.push(vec![-a, 1]);
        }
    }
    for b in -2 * rho..=2 * rho {
        for c in -rho * rho..=rho * rho {
            if div_monic(p, &[c, b, 1]).is_some() {
                out.push(vec![c, b, 1]);
            }
        }
    }
    out
}

#[test]
fn automorphism_orders() {
    let mut a = genus().aut_orders;
    a.sort_unstable();
    assert_eq!(a, [8, 12, 12, 12, 24, 24, 24, 48, 48]);
}

#[test]
fn dual_eigenvectors() {
    let g = genus();
    let t2 = hecke_matrix(&g, 2, 1, &Sequential).unwrap().transposed();
    // an eigenvector for -5 in the dual convention: entries ±1 three times each
    let k = kernel_int(&t2.matrix.add_scalar(&BigInt::from(5)).unwrap()).unwrap();
    assert_eq!(k.dim(), 1);
    let mut v: Vec<i64> = to_i64(&k.basis()[0]);
    v.sort_unstable();
    assert_eq!(v, [-1, -1, -1, 0, 0, 0, 1, 1, 1]);
    // the Eisenstein vector in the dual convention is proportional to 1/|Aut|
    let k = kernel_int(&t2.matrix.add_scalar(&BigInt::from(-15)).unwrap()).unwrap();
    assert_eq!(k.dim(), 1);
    for (x, a) in k.basis()[0].iter().zip(&g.aut_orders) {
        assert_eq!(x * BigInt::from(*a), BigInt::from(48));
    }
}

#[test]
fn decomposition_ranks() {
    let g = genus();
    let t2 = hecke_matrix(&g, 2, 1, &Sequential).unwrap();
    let cp = to_i64(&charpoly(&t2.matrix).unwrap());
    let rest = div_monic(&cp, &[-15, 1]).and_then(|r| div_monic(&r, &[5, 1])).unwrap();
    // the spectral radius is the row sum 15
    let quads = small_factors(&rest, 15);
    assert_eq!(quads.len(), 1, "{quads:?}");
    let quad = &quads[0];
    assert_eq!(quad.len(), 3);
    let disc = quad[1] * quad[1] - 4 * quad[0];
    assert!(disc < 0 || (disc as f64).sqrt().round().powi(2) != disc as f64);
    let quint = div_monic(&rest, quad).unwrap();
    assert!(small_factors(&quint, 15).is_empty());
    // each factor is simple, so the eigenspaces have ranks 1, 1, 2, 5
    let m = |f: &[i64]| {
        let mut acc = IntMatrix::zeros(9, 9);
        let mut pow = IntMatrix::identity(9);
        for c in f {
            acc = acc.add(&pow.scale(&BigInt::from(*c))).unwrap();
            pow = pow.mul(&t2.matrix).unwrap();
        }
        acc
    };
    assert_eq!(kernel_int(&m(quad)).unwrap().dim(), 2);
    assert_eq!(kernel_int(&m(&quint)).unwrap().dim(), 5);
}

#[test]
fn eigenvalues_of_the_cusp_line() {
    let g = genus();
    let t2 = hecke_matrix(&g, 2, 1, &Sequential).unwrap();
    let line = kernel_int(&t2.matrix.add_scalar(&BigInt::from(5)).unwrap()).unwrap();
    for (p, nu) in [(3u64, -5i64), (5, 3), (7, 15), (11, 26)] {
        let t = hecke_matrix(&g, p, 1, &Sequential).unwrap();
        assert_eq!(eigen_scalar_on(&g, &t, &line).unwrap(), BigInt::from(nu), "p = {p}");
    }
    // inert degree-2 values satisfy -p(ν + 1 + p²) = -14, -42
    for (p, want) in [(2u64, -14i64), (3, -42)] {
        let n = hecke_matrix(&g, p, 2, &Sequential).unwrap();
        let nu = eigen_scalar_on(&g, &n, &line).unwrap();
        let p = p as i64;
        assert_eq!(-BigInt::from(p) * (nu + 1 + p * p), BigInt::from(want));
    }
}

#[test]
fn level_1975_sublattice() {
    let q5 = builtin_q79().transform(&[
        [1, 0, 0, 0, 0],
        [0, 1, 0, 0, 0],
        [0, 0, 1, 0, 0],
        [0, 0, 0, 1, 0],
        [0, 0, 0, 0, 5],
    ]);
    assert!(is_isometric(&q5, &builtin_q1975()).is_some());
    for p in [0u64, 2, 3, 5, 79] {
        assert_eq!(hasse_invariant(&q5, p), hasse_invariant(&builtin_q79(), p));
    }
}
