use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec::Vec;
use alloc::{format, vec};

use proptest::prelude::*;

use super::*;
use crate::rqfield::{primes_for_sturm, splitting_type, CoeffField, FieldElem, IntElem, PrimeIdealF, ResidueMap, SplitKind};

fn pr(label: &str) -> PrimeIdealF {
    label.parse().unwrap()
}

/// `y² + φxy + y·0 = x³ + (1+φ)x² + (1+φ)x`, conductor `−3 + 8φ`.
fn curve79() -> EllipticCurveF {
    let e = |a, b| IntElem::new(a, b);
    EllipticCurveF::new([e(0, 1), e(1, 1), e(0, 0), e(1, 1), e(0, 0)], e(-3, 8)).unwrap()
}

/// The weight-(2,2) eigenvalue table at norms 4 to 49, one entry per prime.
const F79_ROW: [(&str, i64); 14] = [
    ("4:0:2", 1),
    ("5:1:-2", -2),
    ("9:0:3", -2),
    ("11:1:-3", 0),
    ("11:1:4", -4),
    ("19:1:-4", 8),
    ("19:1:5", 4),
    ("29:1:-5", -2),
    ("29:1:6", 6),
    ("31:2:-5", 0),
    ("31:2:7", -8),
    ("41:1:-6", -2),
    ("41:1:7", 2),
    ("49:0:7", -2),
];

#[test]
fn empty_table_is_valid() {
    let t = parse_table("").unwrap();
    assert!(t.values.is_empty());
}

#[test]
fn rational_table_rejects_cubic_rows() {
    let text = "field: x^2-5\ncoeff_field: rational\nform: f weight 2,2 level 79\nprime 5:1:-2 ev 1 0 2 0 3 0\n";
    let err = parse_table(text).unwrap_err();
    assert_eq!(err.line, 4);
    assert_eq!(err.kind, TableError::Arity { expected: 2, got: 6 });
}

#[test]
fn table_errors_carry_line_numbers() {
    let head = "field: x^2-5\ncoeff_field: rational\nform: f weight 2,2 level 79\n";
    let dup = format!("{head}prime 4:0:2 ev 1 0\nprime 4:0:2 ev 1 0\n");
    assert_eq!(parse_table(&dup).unwrap_err().line, 5);
    let unknown = format!("{head}prime 6:0:2 ev 1 0\n");
    assert!(matches!(parse_table(&unknown).unwrap_err().kind, TableError::UnknownPrime(_)));
    let bad = format!("{head}prime 4:0:2 ev 1 x\n");
    assert!(matches!(parse_table(&bad).unwrap_err().kind, TableError::Number(_)));
    let field = "field: x^2-2\n";
    assert!(matches!(parse_table(field).unwrap_err().kind, TableError::BaseField(_)));
}

#[test]
fn norm5_row_reads_minus_two() {
    let text = "field: x^2-5\ncoeff_field: rational\nform: f79 weight 2,2 level 79\nprime 5:1:-2 ev -2 0\n";
    let t = parse_table(text).unwrap();
    assert_eq!(t.get(&PrimeIdealF::sqrt5()).unwrap().coords()[0], FieldElem::from_ints(-2, 0));
}

#[test]
fn sqrt5_basis_round_trip() {
    let x = FieldElem::from_ints(3, -7);
    let (a, b) = to_sqrt5_basis(&x);
    assert_eq!(from_sqrt5_basis(a, b), x);
}

#[test]
fn curve_examples() {
    let e = curve79();
    assert_eq!(e.conductor_norm(), 79);
    assert_eq!(e.discriminant().norm(), -79);
    assert_eq!(e.ap(&pr("4:0:2")).unwrap(), 1);
    assert_eq!(e.ap(&pr("5:1:-2")).unwrap(), -2);
    let mut at11: Vec<i64> = splitting_type(11).unwrap().1.iter().map(|p| e.ap(p).unwrap()).collect();
    at11.sort();
    assert_eq!(at11, vec![-4, 0]);
}

#[test]
fn curve_reproduces_table_row() {
    let e = curve79();
    for (label, v) in F79_ROW {
        assert_eq!(e.ap(&pr(label)).unwrap(), v, "{label}");
    }
}

#[test]
fn curve_bad_prime_is_rejected() {
    let e = curve79();
    let n = pr("79:3:-8");
    assert!(matches!(e.ap(&n), Err(CurveError::BadPrime(_))));
    // non-split multiplicative reduction
    assert_eq!(e.reduction_ap(&n), -1);
    assert_eq!(e.conjugate().reduction_ap(&n.conj()), -1);
}

#[test]
fn singular_curve_is_rejected() {
    let z = IntElem::new(0, 0);
    assert_eq!(EllipticCurveF::new([z; 5], IntElem::new(1, 0)), Err(CurveError::Singular));
}

#[test]
fn hasse_bound_and_conjugate_multiset() {
    let e = curve79();
    let c = e.conjugate();
    let n = pr("79:3:-8");
    let primes = primes_for_sturm(30, &[n, n.conj()]).unwrap();
    let mut by_norm: BTreeMap<u64, (Vec<i64>, Vec<i64>)> = BTreeMap::new();
    for p in &primes {
        let a = e.ap(p).unwrap();
        assert!((a * a) as u64 <= 4 * p.norm, "{}", p.label());
        let slot = by_norm.entry(p.norm).or_default();
        slot.0.push(a);
        slot.1.push(c.ap(&p.conj()).unwrap());
    }
    for (_, (mut a, mut b)) in by_norm {
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }
}

/// `w` stands for itself; other primes get small multiples of `w` and `1`.
fn toy_h() -> EigenvalueTable {
    let cf = CoeffField::h79();
    let mut t = EigenvalueTable::new("h", (2, 4), 79, CoeffDescriptor::Cubic(cf.clone()));
    for p in [2u64, 3, 5, 11, 19] {
        for (i, q) in splitting_type(p).unwrap().1.into_iter().enumerate() {
            let v = cf.add(&cf.gen(), &cf.from_base(FieldElem::from_ints(p as i64 + i as i64, 0)));
            t.values.insert(q, v);
        }
    }
    t.atkin_lehner.insert(pr("79:3:-8"), -1);
    t
}

#[test]
fn jr_cases() {
    let h = toy_h();
    let cf = CoeffField::h79();
    let jr = jr_compose(&h, &[2, 3, 5, 11], 1).unwrap();
    assert!(jr.nu[&2].coords().iter().all(FieldElem::is_zero));
    assert!(jr.nu[&3].coords().iter().all(FieldElem::is_zero));
    assert_eq!(jr.nu[&5], *h.get(&PrimeIdealF::sqrt5()).unwrap());
    let ps = splitting_type(11).unwrap().1;
    assert_eq!(jr.nu[&11], cf.add(h.get(&ps[0]).unwrap(), h.get(&ps[1]).unwrap()));
    assert_eq!((jr.eps5, jr.eps79), (1, -1));
}

#[test]
fn jr_is_symmetric_at_split_primes() {
    let mut h = toy_h();
    let ps = splitting_type(19).unwrap().1;
    let a = jr_compose(&h, &[19], 1).unwrap();
    let (x, y) = (h.values[&ps[0]].clone(), h.values[&ps[1]].clone());
    h.values.insert(ps[0], y);
    h.values.insert(ps[1], x);
    assert_eq!(jr_compose(&h, &[19], 1).unwrap().nu, a.nu);
}

#[test]
fn jr_reports_missing_data() {
    let h = toy_h();
    assert!(matches!(jr_compose(&h, &[29], 1), Err(CongruenceError::MissingPrime { .. })));
    let mut bare = h.clone();
    bare.atkin_lehner.clear();
    assert!(matches!(jr_compose(&bare, &[2], 1), Err(CongruenceError::MissingAtkinLehner(_))));
}

fn rational(form: &str, vals: &[(PrimeIdealF, i64)], fixed: bool) -> EigenvalueTable {
    let mut t = EigenvalueTable::new(form, (2, 2), 79, CoeffDescriptor::Rational);
    for (p, v) in vals {
        t.insert_base(*p, FieldElem::from_ints(*v, 0));
    }
    t.labels_fixed = fixed;
    t
}

#[test]
fn split_pairs_compare_unordered_unless_both_fixed() {
    let cf = CoeffField::h79();
    let map = ResidueMap::lambda(&cf).unwrap();
    let ps = splitting_type(11).unwrap().1;
    let l = rational("l", &[(ps[0], 0), (ps[1], 1)], true);
    let r_fixed = rational("r", &[(ps[0], 1), (ps[1], 0)], true);
    let r_free = rational("r", &[(ps[0], 1), (ps[1], 0)], false);
    let opts = CompareOptions::default();
    assert!(!verify_congruence(&l, &r_fixed, &map, &opts).unwrap().passed());
    let rep = verify_congruence(&l, &r_free, &map, &opts).unwrap();
    assert!(rep.passed());
    assert_eq!(rep.rows.len(), 1);
}

#[test]
fn excluded_primes_are_skipped_and_named() {
    let map = ResidueMap::lambda(&CoeffField::h79()).unwrap();
    let s5 = PrimeIdealF::sqrt5();
    let l = rational("f", &[(s5, -2), (pr("4:0:2"), 1)], true);
    let r = rational("h", &[(s5, 0), (pr("4:0:2"), 6)], true);
    let all = verify_congruence(&l, &r, &map, &CompareOptions::default()).unwrap();
    assert!(!all.passed());
    assert_eq!(all.rows.iter().filter(|r| !r.pass).map(|r| r.prime.as_str()).collect::<Vec<_>>(), ["5:1:-2"]);
    let opts = CompareOptions { excluded: vec![s5], ..Default::default() };
    let rep = verify_congruence(&l, &r, &map, &opts).unwrap();
    assert!(rep.passed() && rep.is_consistent());
    assert_eq!(rep.excluded, vec!["5:1:-2".to_string()]);
}

#[test]
fn twisting_multiplies_by_the_norm() {
    let map = ResidueMap::lambda(&CoeffField::h79()).unwrap();
    let p = pr("11:1:4");
    let l = rational("h", &[(p, 11 * 3)], true);
    let r = rational("g", &[(p, 3)], true);
    let opts = CompareOptions { twist_right_by_norm: true, ..Default::default() };
    assert!(verify_congruence(&l, &r, &map, &opts).unwrap().passed());
}

#[test]
fn theorem1_on_a_toy_lift() {
    let cf = CoeffField::h79();
    let map = ResidueMap::lambda(&cf).unwrap();
    let h = toy_h();
    let jr = jr_compose(&h, &[2, 3, 11], 1).unwrap();
    let r11 = map.apply(&jr.nu[&11]).unwrap();
    let nu11 = (0..5).find(|&n| map.field.from_int(n) == r11).unwrap();
    let para = ParamodularTable {
        form: "F".to_string(),
        weight: 3,
        level: 79,
        nu: [(2, -5), (3, -5), (5, 3), (11, nu11 + 25)].into_iter().collect(),
        nu2: BTreeMap::new(),
        atkin_lehner: [(79, -1)].into_iter().collect(),
    };
    let mut inputs = Theorem1Inputs { class_count: 612, dim_v1: 3, dim_v2: 6, dim_meet_mod5: 1, scalars: BTreeMap::new() };
    inputs.scalars.insert(2, -5);
    let rep = verify_theorem1(&inputs, &para, &jr, &map).unwrap();
    assert!(rep.passed(), "{}", rep.render_text());
    assert_eq!(rep.rows.len(), 3);
    inputs.dim_v2 = 5;
    assert!(!verify_theorem1(&inputs, &para, &jr, &map).unwrap().passed());
}

#[test]
fn incompatible_residue_map_is_an_error() {
    // w ↦ 1 is not a root of x³ − 2 mod λ
    let two = FieldElem::from_ints(2, 0);
    let cf = CoeffField::new(-&two, FieldElem::zero(), FieldElem::zero());
    let t = EigenvalueTable::new("t", (2, 4), 79, CoeffDescriptor::Cubic(cf));
    let map = ResidueMap::lambda(&CoeffField::h79()).unwrap();
    assert!(matches!(
        verify_congruence(&t, &t, &map, &CompareOptions::default()),
        Err(CongruenceError::Incompatible(_))
    ));
}

#[test]
fn qexp_examples() {
    let mut f = QExp::default();
    let mut g = QExp { constant: 3, ..Default::default() };
    for (i, x) in crate::rqfield::tp_numerators(12).into_iter().enumerate() {
        if x.b >= 5 {
            f.coeffs.insert(x, i as i128 + 1);
        }
        g.coeffs.insert(x, 2 * i as i128 - 7);
    }
    assert!(qexp_product_check(&f, &g, 5, 12));
    assert!(qexp_product(&f, &g, 12).vanishes_below(5));
    // constant-free factors: the product starts at trace 2
    let h = QExp { constant: 0, coeffs: g.coeffs.clone() };
    let p = qexp_product(&h, &h, 12);
    assert!(p.vanishes_below(2));
    assert!(!p.vanishes_below(3));
}

fn naive_product(f: &QExp, g: &QExp, bound: i64) -> BTreeMap<IntElem, i128> {
    let mut fs: Vec<(IntElem, i128)> = f.coeffs.iter().map(|(k, v)| (*k, *v)).collect();
    let mut gs: Vec<(IntElem, i128)> = g.coeffs.iter().map(|(k, v)| (*k, *v)).collect();
    fs.push((IntElem::new(0, 0), f.constant));
    gs.push((IntElem::new(0, 0), g.constant));
    let mut out = BTreeMap::new();
    for (x, a) in &fs {
        for (y, b) in &gs {
            let s = *x + *y;
            if s.is_zero() || s.b >= bound {
                continue;
            }
            *out.entry(s).or_insert(0) += a * b;
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

fn sparse_qexp(bound: i64) -> impl Strategy<Value = QExp> {
    let keys = crate::rqfield::tp_numerators(bound);
    let n = keys.len();
    (-3i128..4, proptest::collection::vec((0..n, -5i128..6), 0..12)).prop_map(move |(c, entries)| {
        let mut q = QExp { constant: c, coeffs: BTreeMap::new() };
        for (i, v) in entries {
            q.coeffs.insert(keys[i], v);
        }
        q
    })
}

proptest! {
    #[test]
    fn qexp_matches_double_loop(f in sparse_qexp(9), g in sparse_qexp(9), bound in 1i64..9) {
        let p = qexp_product(&f, &g, bound);
        prop_assert_eq!(p.constant, f.constant * g.constant);
        prop_assert_eq!(p.coeffs, naive_product(&f, &g, bound));
    }

    #[test]
    fn qexp_vanishing_propagates(f in sparse_qexp(9), g in sparse_qexp(9), b in 0i64..9) {
        let mut f = f;
        f.constant = 0;
        f.coeffs.retain(|x, _| x.b >= b);
        prop_assert!(qexp_product_check(&f, &g, b, 9));
    }

    #[test]
    fn verify_is_symmetric(vals in proptest::collection::vec((-20i64..20, -20i64..20), 8), fixed in any::<bool>()) {
        let map = ResidueMap::lambda(&CoeffField::h79()).unwrap();
        let primes = primes_for_sturm(8, &[]).unwrap();
        let l: Vec<(PrimeIdealF, i64)> = primes.iter().zip(&vals).map(|(p, v)| (*p, v.0)).collect();
        let r: Vec<(PrimeIdealF, i64)> = primes.iter().zip(&vals).map(|(p, v)| (*p, v.1)).collect();
        let (a, b) = (rational("a", &l, fixed), rational("b", &r, fixed));
        let ab = verify_congruence(&a, &b, &map, &CompareOptions::default()).unwrap();
        let ba = verify_congruence(&b, &a, &map, &CompareOptions::default()).unwrap();
        prop_assert_eq!(ab.verdict, ba.verdict);
        prop_assert_eq!(ab.failures, ba.failures);
        prop_assert!(ab.is_consistent());
    }

    #[test]
    fn table_render_round_trips(vals in proptest::collection::vec((-50i64..50, -50i64..50, 1i64..4), 6), unordered in any::<bool>()) {
        let cf = CoeffField::h79();
        let mut t = EigenvalueTable::new("h", (2, 4), 79, CoeffDescriptor::Cubic(cf.clone()));
        for (p, (a, b, d)) in primes_for_sturm(8, &[]).unwrap().into_iter().zip(vals) {
            let x = FieldElem::from_ints(a, b);
            let y = FieldElem::new(num_rational::BigRational::new(a.into(), d.into()), num_rational::BigRational::from_integer(b.into()));
            t.values.insert(p, cf.elem(x, y, FieldElem::from_ints(d, -a)));
        }
        t.atkin_lehner.insert(pr("79:3:-8"), -1);
        t.labels_fixed = !unordered;
        prop_assert_eq!(parse_table(&t.render()).unwrap(), t);
    }
}

#[test]
fn split_kinds_of_level_prime() {
    assert_eq!(pr("79:3:-8").kind, SplitKind::Split);
}
