use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use super::*;

fn bi(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

fn mat(rows: &[&[i64]]) -> IntMatrix {
    IntMatrix::from_dense(&bi(rows)).unwrap()
}

/// Rank over ℚ by fraction-based Gaussian elimination.
fn rank_q(m: &IntMatrix) -> usize {
    let mut a: Vec<Vec<BigRational>> =
        m.to_dense().into_iter().map(|r| r.into_iter().map(BigRational::from_integer).collect()).collect();
    let (rows, cols) = (m.rows(), m.cols());
    let mut r = 0;
    for c in 0..cols {
        let Some(sel) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, sel);
        for i in r + 1..rows {
            let f = &a[i][c] / &a[r][c];
            for k in c..cols {
                let t = &f * &a[r][k];
                a[i][k] -= t;
            }
        }
        r += 1;
    }
    r
}

/// det(xI − M) by evaluating determinants at n+1 integer points and
/// interpolating.
fn charpoly_oracle(m: &IntMatrix) -> Vec<BigInt> {
    let n = m.rows();
    let d = m.to_dense();
    let det = |x: i64| -> BigRational {
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let v = if i == j { BigInt::from(x) - &d[i][j] } else { -d[i][j].clone() };
                        BigRational::from_integer(v)
                    })
                    .collect()
            })
            .collect();
        let mut acc = BigRational::one();
        for c in 0..n {
            let Some(sel) = (c..n).find(|&i| !a[i][c].is_zero()) else { return BigRational::zero() };
            if sel != c {
                a.swap(c, sel);
                acc = -acc;
            }
            acc *= a[c][c].clone();
            for i in c + 1..n {
                let f = &a[i][c] / &a[c][c];
                for k in c..n {
                    let t = &f * &a[c][k];
                    a[i][k] -= t;
                }
            }
        }
        acc
    };
    // Lagrange interpolation through x = 0..=n
    let xs: Vec<i64> = (0..=n as i64).collect();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    for (i, &xi) in xs.iter().enumerate() {
        let yi = det(xi);
        let mut basis = vec![BigRational::one()];
        let mut den = BigRational::one();
        for (j, &xj) in xs.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (k, b) in basis.iter().enumerate() {
                next[k + 1] += b.clone();
                next[k] -= b * BigRational::from_integer(BigInt::from(xj));
            }
            basis = next;
            den *= BigRational::from_integer(BigInt::from(xi - xj));
        }
        for (k, b) in basis.iter().enumerate() {
            coeffs[k] += &yi * b / &den;
        }
    }
    coeffs.into_iter().map(|c| c.to_integer()).collect()
}

#[test]
fn out_of_bounds() {
    let m = IntMatrix::zeros(2, 3);
    assert!(m.get(2, 0).is_err());
    assert!(m.get(0, 3).is_err());
    assert_eq!(m.get(1, 2).unwrap(), BigInt::zero());
}

#[test]
fn kernel_needs_saturation() {
    // y = −z, x = −3z; the rational reduced form has denominator 3
    let a = mat(&[&[1, -1, 2], &[0, 3, 3]]);
    let k = kernel_int(&a).unwrap();
    assert_eq!(k.dim(), 1);
    assert_eq!(k.basis(), bi(&[&[3, 1, -1]]).as_slice());
    // kernel vector (1, 1, 1)/… of a matrix whose RREF has denominators
    let b = mat(&[&[2, 0, -2], &[0, 4, -4]]);
    assert_eq!(kernel_int(&b).unwrap().basis(), bi(&[&[1, 1, 1]]).as_slice());
}

#[test]
fn saturation_of_non_primitive_span() {
    let s = IntSubspace::saturate(3, &bi(&[&[2, 4, 6], &[0, 0, 3]])).unwrap();
    assert_eq!(s.basis(), bi(&[&[1, 2, 0], &[0, 0, 1]]).as_slice());
    let s = IntSubspace::saturate(2, &bi(&[&[3, 0], &[0, 5]])).unwrap();
    assert_eq!(s, IntSubspace::full(2));
}

#[test]
fn restriction_and_charpoly() {
    // invariant plane spanned by e0, e1
    let a = mat(&[&[1, 2, 5], &[3, 4, 7], &[0, 0, 9]]);
    let s = IntSubspace::saturate(3, &bi(&[&[1, 0, 0], &[0, 1, 0]])).unwrap();
    let r = restrict(&a, &s).unwrap();
    assert_eq!(r.to_dense(), bi(&[&[1, 2], &[3, 4]]));
    assert_eq!(charpoly(&r).unwrap(), bi(&[&[-2, -5, 1]])[0]);
    let t = IntSubspace::saturate(3, &bi(&[&[0, 0, 1]])).unwrap();
    assert_eq!(restrict(&a, &t), Err(LinError::NotInvariant));
}

#[test]
fn intersection_mod_5() {
    let s1 = IntSubspace::saturate(3, &bi(&[&[1, 0, 0], &[0, 1, 0]])).unwrap();
    let s2 = IntSubspace::saturate(3, &bi(&[&[1, 5, 5]])).unwrap();
    assert_eq!(intersect_modp(&s1, &s2, 5).unwrap(), vec![vec![1u64, 0, 0]]);
    assert_eq!(intersect_modp(&s1, &s2, 7).unwrap().len(), 0);
}

#[test]
fn rational_reconstruction() {
    let m = BigInt::from(1_000_003u64);
    // 3/7 mod m
    let inv7 = BigInt::from(modp::invmod(7, 1_000_003));
    let a = (BigInt::from(3) * inv7) % &m;
    assert_eq!(rational_reconstruct(&a, &m), Some((BigInt::from(3), BigInt::from(7))));
}

#[test]
fn large_kernel_with_big_entries() {
    // a 40×41 matrix whose kernel vector has entries well beyond one word
    let n = 40;
    let mut rows = Vec::new();
    for i in 0..n {
        let mut r = vec![0i64; n + 1];
        r[i] = 1000 + i as i64;
        r[i + 1] = -(997 + 3 * i as i64);
        rows.push(r);
    }
    let a = IntMatrix::from_dense(&rows).unwrap();
    let k = kernel_int(&a).unwrap();
    assert_eq!(k.dim(), 1);
    let v = &k.basis()[0];
    assert!(a.mul_vec(v).unwrap().iter().all(|x| x.is_zero()));
    assert!(v.iter().any(|x| x.bits() > 200));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernel_is_exact_and_saturated(
        entries in proptest::collection::vec(-4i64..=4, 4 * 6),
        rows in 1usize..=4,
    ) {
        let dense: Vec<Vec<i64>> = entries.chunks(6).take(rows).map(|c| c.to_vec()).collect();
        let a = IntMatrix::from_dense(&dense).unwrap();
        let k = kernel_int(&a).unwrap();
        prop_assert_eq!(k.dim(), 6 - rank_q(&a));
        for v in k.basis() {
            prop_assert!(a.mul_vec(v).unwrap().iter().all(|x| x.is_zero()));
        }
        // saturated: the HNF of the basis has unit elementary divisors, so
        // mod-p reduction keeps the dimension for every small p
        for p in [2u64, 3, 5] {
            let red = k.reduce_mod(p);
            if !red.is_empty() {
                let m = ModpMatrix::from_rows(p, &red.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect::<Vec<_>>()).unwrap();
                prop_assert_eq!(m.rank(), k.dim());
            }
        }
    }

    #[test]
    fn charpoly_matches_interpolation(entries in proptest::collection::vec(-9i64..=9, 25), n in 1usize..=5) {
        let dense: Vec<Vec<i64>> = (0..n).map(|i| entries[i * 5..i * 5 + n].to_vec()).collect();
        let a = IntMatrix::from_dense(&dense).unwrap();
        prop_assert_eq!(charpoly(&a).unwrap(), charpoly_oracle(&a));
    }
}
