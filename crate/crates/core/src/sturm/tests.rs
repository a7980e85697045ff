use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use super::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn level3_surface() -> SurfaceInvariants {
    surface_invariants(3, &hj_cusp_cycle(4).unwrap()).unwrap()
}

#[test]
fn cusp_cycles() {
    assert_eq!(hj_cusp_cycle(1).unwrap().entries(), [3]);
    assert_eq!(hj_cusp_cycle(4).unwrap().entries(), [3, 3, 3, 3]);
    assert_eq!(hj_cusp_cycle(0), Err(SturmError::UnitIndex));
    // x = (3 + √5)/2 satisfies x = 3 − 1/x
    let x = (3.0 + libm::sqrt(5.0)) / 2.0;
    assert!((3.0 - 1.0 / x - x).abs() < 1e-12);
}

#[test]
fn minus_continued_fractions() {
    // 2 + √3 = 4 − 1/(2 + √3)
    assert_eq!(minus_cf_period(2, 1, 3).unwrap(), [4]);
    // 1 + √2 has conjugate below 0, so it is not reduced
    assert_eq!(minus_cf_period(1, 1, 2), None);
    let period = minus_cf_period(2, 1, 2).unwrap();
    assert_eq!(period, [4, 2]);
    let x0 = 2.0 + libm::sqrt(2.0);
    let mut x = x0;
    for &b in &period {
        x = 1.0 / (f64::from(b) - x);
    }
    assert!((x - x0).abs() < 1e-9, "{period:?}");
}

#[test]
fn surface_for_full_level_three() {
    let s = level3_surface();
    assert_eq!(s.d, 360);
    assert_eq!(s.n_sq, 9);
    assert_eq!(s.unit_index, 4);
    assert_eq!(s.num_cusps, 10);
    assert_eq!(s.zeta_m1, q(1, 30));
    assert_eq!(s.kd, q(160, 1));
    assert_eq!(s.kk, q(-112, 1));
    assert_eq!(s.ratio().unwrap(), q(3, 10));
    assert_eq!(s.ratio().unwrap(), s.ratio_from_zeta());
}

#[test]
fn inconsistent_cycles_rejected() {
    assert_eq!(
        surface_invariants(3, &hj_cusp_cycle(2).unwrap()),
        Err(SturmError::CycleLength { got: 2, want: 4 })
    );
}

#[test]
fn bounds() {
    let s = level3_surface();
    let j = projective_line_size(79);
    assert_eq!(j, 80);
    assert_eq!(sturm_bound(4, j, &s).unwrap(), 96);
    assert_eq!(sturm_bound(6, j, &s).unwrap(), 144);
    assert_eq!(sturm_bound(0, j, &s), Err(SturmError::NonPositiveInput));
    let mut bad = s.clone();
    bad.kd = q(0, 1);
    assert_eq!(sturm_bound(4, j, &bad), Err(SturmError::NonPositiveKd));
}

proptest! {
    #[test]
    fn bound_is_monotone(w in 1u64..20, j in 1u64..500) {
        let s = level3_surface();
        let c = sturm_bound(w, j, &s).unwrap();
        prop_assert!(sturm_bound(w + 1, j, &s).unwrap() >= c);
        prop_assert!(sturm_bound(w, j + 1, &s).unwrap() >= c);
    }
}

#[test]
fn ramified_plan() {
    let f = Weight::new([2, 2], [0, 0]);
    let h = Weight::new([2, 4], [1, 0]);
    let p = weight_plan(f, h, 5, true, DEFAULT_PLAN_LIMIT).unwrap();
    assert!(p.verify());
    assert_eq!(p.power, 2);
    assert_eq!(p.f.hasse, [1, 3]);
    assert_eq!(p.h.hasse, [0, 2]);
    assert_eq!(p.final_f, Weight::new([8, 8], [0, -2]));
    assert_eq!(p.final_h, Weight::new([8, 8], [2, -2]));
}

#[test]
fn inert_plan() {
    let f = Weight::new([2, 2], [0, 0]);
    let h = Weight::new([2, 4], [1, 0]);
    let p = weight_plan(f, h, 2, false, DEFAULT_PLAN_LIMIT).unwrap();
    assert!(p.verify());
    assert_eq!(p.power, 3);
    assert!(p.f.divide_h1 && p.h.divide_h1);
    assert_eq!(p.f.hasse, [4, 2]);
    assert_eq!(p.h.hasse, [0, 0]);
    assert_eq!(p.final_f, Weight::new([12, 12], [-3, 0]));
    assert_eq!(p.final_h, Weight::new([12, 12], [0, 0]));
}

#[test]
fn trivial_and_failing_plans() {
    let f = Weight::new([2, 2], [0, 0]);
    let p = weight_plan(f, f, 5, true, DEFAULT_PLAN_LIMIT).unwrap();
    assert_eq!((p.power, p.f.theta, p.f.hasse, p.h.hasse), (1, 0, [0, 0], [0, 0]));
    assert_eq!(weight_plan(f, f, 3, false, 6), Err(SturmError::UnsupportedPrime(3)));
    let h = Weight::new([2, 4], [1, 0]);
    assert_eq!(weight_plan(f, h, 5, true, 1), Err(SturmError::NoPlan(1)));
}
