//! Published reference rows and independent oracles shared by the
//! integration tests and the acceptance target.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use congruence_kit::formats::load_table;
use congruence_kit::mirror::Mirror;
use congruence_kit::stages;
use congruence_kit_core::congruence::{jr_compose, EigenvalueTable};
use congruence_kit_core::rqfield::{splitting_type, PrimeIdealF, ResidueMap, SplitKind};
use num_traits::Zero;

pub fn fixtures() -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures"))
}

pub fn table(name: &str) -> EigenvalueTable {
    load_table(&fixtures().join(name)).unwrap()
}

pub fn mirror() -> Mirror {
    Mirror { dir: fixtures().join("mirror") }
}

/// Column norms of the published eigenvalue table, split primes twice.
pub const NORMS: [u64; 14] = [4, 5, 9, 11, 11, 19, 19, 29, 29, 31, 31, 41, 41, 49];
/// `μ_𝔭(f₇₉)` per column.
pub const F_ROW: [i64; 14] = [1, -2, -2, 0, -4, 8, 4, 6, -2, -8, 0, 2, -2, -2];
/// `μ_𝔭(h₇₉) mod λ` per column.
pub const H_MOD_LAMBDA: [i64; 14] = [1, 0, 3, 0, 1, 3, 4, 1, 3, 2, 0, 2, 3, 3];
/// `μ_𝔭(g₇₉) mod √5` per column.
pub const G_MOD_SQRT5: [i64; 14] = [-1, 0, -3, 0, 1, -3, -4, -1, -3, 2, 0, 2, 3, -3];

pub const RATIONAL_PRIMES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
/// `ν_p(JR(h₇₉)) mod λ`.
pub const JR_MOD_LAMBDA: [u64; 13] = [0, 0, 0, 0, 1, 0, 0, 2, 0, 4, 2, 0, 0];
/// `ν_p(F₇₉)`.
pub const NU: [i64; 13] = [-5, -5, 3, 15, 26, -15, -60, 32, 50, 24, 142, -500, 240];
/// `ν_{1,p²}(F₇₉)`.
pub const NU2: [i64; 13] = [2, 4, -10, -24, 0, -158, -156, -712, -256, -988, -640, 2668, 876];

/// Primes of `F` of norm at most 49, i.e. the published columns.
pub fn column_primes() -> Vec<PrimeIdealF> {
    let mut out = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let (_, ps) = splitting_type(p).unwrap();
        out.extend(ps.into_iter().filter(|q| q.norm <= 49));
    }
    out
}

fn int_of(t: &EigenvalueTable, p: &PrimeIdealF) -> i64 {
    let c = &t.get(p).unwrap().coords()[0];
    assert!(c.a.is_integer() && c.b.is_zero());
    i64::try_from(c.a.to_integer()).unwrap()
}

fn residue(map: &ResidueMap, t: &EigenvalueTable, p: &PrimeIdealF) -> i64 {
    map.apply(t.get(p).unwrap()).unwrap().c0 as i64
}

/// Multisets per norm of `(μ(f), μ(h) mod λ, μ(g) mod λ)`, residues in `0..5`.
pub fn computed_columns(f: &EigenvalueTable, h: &EigenvalueTable, g: &EigenvalueTable) -> BTreeMap<u64, Vec<(i64, i64, i64)>> {
    let map = stages::residue_map("lambda5", &[h]).unwrap();
    let mut out: BTreeMap<u64, Vec<(i64, i64, i64)>> = BTreeMap::new();
    for p in column_primes() {
        out.entry(p.norm).or_default().push((int_of(f, &p), residue(&map, h, &p), residue(&map, g, &p)));
    }
    out.values_mut().for_each(|v| v.sort());
    out
}

pub fn published_columns() -> BTreeMap<u64, Vec<(i64, i64, i64)>> {
    let mut out: BTreeMap<u64, Vec<(i64, i64, i64)>> = BTreeMap::new();
    for i in 0..NORMS.len() {
        out.entry(NORMS[i]).or_default().push((F_ROW[i], H_MOD_LAMBDA[i].rem_euclid(5), G_MOD_SQRT5[i].rem_euclid(5)));
    }
    out.values_mut().for_each(|v| v.sort());
    out
}

/// Multisets per norm of traces of Frobenius of the mirrored curve.
pub fn curve_columns(label: &str) -> BTreeMap<u64, Vec<i64>> {
    let c = mirror().fetch_curve(label).unwrap().curve;
    let mut out: BTreeMap<u64, Vec<i64>> = BTreeMap::new();
    for p in column_primes() {
        out.entry(p.norm).or_default().push(c.ap(&p).unwrap());
    }
    out.values_mut().for_each(|v| v.sort());
    out
}

pub fn published_f_columns() -> BTreeMap<u64, Vec<i64>> {
    let mut out: BTreeMap<u64, Vec<i64>> = BTreeMap::new();
    for i in 0..NORMS.len() {
        out.entry(NORMS[i]).or_default().push(F_ROW[i]);
    }
    out.values_mut().for_each(|v| v.sort());
    out
}

/// `ν_p(JR(h)) mod λ` for `RATIONAL_PRIMES`.
pub fn jr_row(h: &EigenvalueTable) -> Vec<u64> {
    let map = stages::residue_map("lambda5", &[h]).unwrap();
    let jr = jr_compose(h, &RATIONAL_PRIMES, 1).unwrap();
    RATIONAL_PRIMES.iter().map(|p| map.apply(&jr.nu[p]).unwrap().c0).collect()
}

/// A prime ideal as `(p, r)`: `r` is the root of `t² − t − 1` mod `p` with
/// `𝔭 = (p, φ − r)` at split primes, and `None` otherwise.
pub type PrimeKey = (u64, Option<u64>);

pub fn key(q: &PrimeIdealF) -> PrimeKey {
    if q.kind != SplitKind::Split {
        return (q.p, None);
    }
    let p = q.p as i128;
    let (a, b) = (q.gen.a as i128, q.gen.b as i128);
    // a + bφ ≡ 0 mod 𝔭 = (p, φ − r) means a + br ≡ 0
    let r = (0..p).find(|r| (r * r - r - 1).rem_euclid(p) == 0 && (a + b * r).rem_euclid(p) == 0).unwrap();
    (q.p, Some(r as u64))
}

fn factor(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn pow_mod(x: i64, mut e: i64, m: i64) -> i64 {
    let (mut acc, mut x, m) = (1i128, x as i128, m as i128);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * x % m;
        }
        x = x * x % m;
        e >>= 1;
    }
    acc as i64
}

/// Prime ideals dividing some `y = a + bφ` with `y/√5 ≫ 0` and
/// `tr(y/√5) = b < trace_bound`, found by factoring norms over ℤ.
pub fn oracle_primes(trace_bound: i64, skip_sqrt5: bool) -> BTreeSet<PrimeKey> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut out = BTreeSet::new();
    for b in 1..trace_bound {
        // a + bφ > 0 > a + bφ'
        let lo = (-(b as f64) * phi).floor() as i64 - 1;
        let hi = ((b as f64) / phi).ceil() as i64 + 1;
        for a in lo..=hi {
            let (x, y) = (a as f64 + b as f64 * phi, a as f64 + b as f64 * (1.0 - phi));
            if !(x > 0.0 && y < 0.0) {
                continue;
            }
            let n = (a * a + a * b - b * b).unsigned_abs();
            for q in factor(n) {
                let qi = q as i64;
                match q % 5 {
                    0 => {
                        if !skip_sqrt5 {
                            out.insert((5, None));
                        }
                    }
                    2 | 3 => {
                        out.insert((q, None));
                    }
                    _ if b % qi == 0 => {
                        // q | y: both primes above q
                        for r in (0..qi).filter(|r| (r * r - r - 1).rem_euclid(qi) == 0) {
                            out.insert((q, Some(r as u64)));
                        }
                    }
                    _ => {
                        // r = −a/b mod q, by Fermat inversion
                        let inv = pow_mod(b.rem_euclid(qi), qi - 2, qi);
                        let r = ((-a).rem_euclid(qi) as i128 * inv as i128 % qi as i128) as i64;
                        assert_eq!((r * r - r - 1).rem_euclid(qi), 0);
                        out.insert((q, Some(r as u64)));
                    }
                }
            }
        }
    }
    out
}
