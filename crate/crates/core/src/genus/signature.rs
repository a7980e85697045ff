//! Isometry-invariant fingerprints used to bucket classes.

use alloc::vec::Vec;

use crate::quinlat::{QuadForm, Vec5};

/// Representation numbers up to `theta_len`, then a sorted histogram of
/// `(Q(v), Q(w), |B(v, w)|)` over pairs of short vectors with
/// `Q ≤ pair_bound`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Signature(pub Vec<u32>);

/// Default theta length of a signature.
pub const THETA_LEN: i64 = 8;
/// Default norm bound for the pair histogram.
pub const PAIR_BOUND: i64 = 4;

/// Fingerprint of a reduced form.
pub fn signature(reduced: &QuadForm, theta_len: i64, pair_bound: i64) -> Signature {
    let mut theta = alloc::vec![0u32; theta_len as usize];
    let mut short: Vec<(i64, Vec5, Vec5)> = Vec::new();
    crate::quinlat::for_each_short_vector(reduced, theta_len, |v, value| {
        theta[(value - 1) as usize] += 1;
        if value <= pair_bound {
            short.push((value, *v, reduced.apply(v)));
        }
    });
    let mut pairs: Vec<u32> = Vec::with_capacity(short.len() * short.len() / 2);
    for i in 0..short.len() {
        for j in i + 1..short.len() {
            let (a, b) = if short[i].0 <= short[j].0 { (i, j) } else { (j, i) };
            let ip = crate::quinlat::dot(&short[a].1, &short[b].2).unsigned_abs() as u32;
            pairs.push(((short[a].0 as u32) << 24) | ((short[b].0 as u32) << 16) | ip.min(0xffff));
        }
    }
    pairs.sort_unstable();
    let mut out = theta;
    out.push(u32::MAX);
    // run-length encode the histogram
    let mut k = 0;
    while k < pairs.len() {
        let mut e = k;
        while e < pairs.len() && pairs[e] == pairs[k] {
            e += 1;
        }
        out.push(pairs[k]);
        out.push((e - k) as u32);
        k = e;
    }
    Signature(out)
}
