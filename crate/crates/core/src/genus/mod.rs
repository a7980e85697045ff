//! Genus enumeration by Kneser neighbors and Hecke operators on the free
//! module spanned by the classes of a genus.
//!
//! Matrices use the natural convention: entry `(i, j)` is the number of
//! neighbors of class `i` isometric to class `j`, so that the operator acts
//! on column vectors of class values.

mod hecke;
mod neighbor;
mod signature;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::quinlat::{automorphism_order, IsometrySearch, QuadForm};

pub use hecke::{
    calibrate_affine, eigen_scalar_on, hecke_matrix, hecke_matrix_limited, hecke_rows, scalar_from_pivot_rows, BasisConvention, HeckeOp,
    ScalarError, DEGREE2_LIMIT,
};
pub use neighbor::{check_prime, isotropic_lines, isotropic_planes, p_neighbors, second_neighbors};
pub use signature::{signature, Signature, PAIR_BOUND, THETA_LEN};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenusError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p = {0} divides the half-discriminant")]
    BadPrime(u64),
    #[error("degree-2 operators are limited to p <= {limit}, got {p}")]
    Degree2Limit { p: u64, limit: u64 },
    #[error("degree must be 1 or 2, got {0}")]
    Degree(u8),
    #[error("a neighbor of class {0} is not isometric to any known class")]
    NotClosed(usize),
    #[error("internal error: {0}")]
    Internal(&'static str),
}

/// Maps a function over `0..n`, possibly in parallel. Results come back in
/// index order.
pub trait ParMap: Sync {
    fn map_indexed<R: Send>(&self, n: usize, f: &(dyn Fn(usize) -> R + Sync)) -> Vec<R>;
}

/// Single-threaded [`ParMap`].
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl ParMap for Sequential {
    fn map_indexed<R: Send>(&self, n: usize, f: &(dyn Fn(usize) -> R + Sync)) -> Vec<R> {
        (0..n).map(f).collect()
    }
}

/// Class representatives of a genus with their invariants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusData {
    /// LLL-reduced representatives in discovery order.
    pub reps: Vec<QuadForm>,
    pub aut_orders: Vec<u64>,
    pub base_prime: u64,
    /// Sparse rows `(j, count)` of the base-prime operator found during closure.
    pub adjacency: Vec<Vec<(usize, u64)>>,
    #[serde(skip)]
    index: BTreeMap<Signature, Vec<usize>>,
}

/// A neighbor, reduced and fingerprinted.
pub(crate) struct Keyed {
    pub sig: Signature,
    pub form: QuadForm,
}

impl Keyed {
    pub fn new(form: &QuadForm) -> Self {
        let (r, _) = form.reduced();
        Keyed { sig: signature(&r, THETA_LEN, PAIR_BOUND), form: r }
    }
}

impl GenusData {
    /// Rebuilds a genus from stored representatives.
    pub fn from_parts(reps: Vec<QuadForm>, aut_orders: Vec<u64>, base_prime: u64, adjacency: Vec<Vec<(usize, u64)>>) -> Self {
        let mut g = GenusData { reps: Vec::new(), aut_orders, base_prime, adjacency, index: BTreeMap::new() };
        for r in reps {
            let k = Keyed::new(&r);
            g.index.entry(k.sig).or_default().push(g.reps.len());
            g.reps.push(k.form);
        }
        g
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Signature of class `i`.
    pub fn signature_of(&self, i: usize) -> Signature {
        signature(&self.reps[i], THETA_LEN, PAIR_BOUND)
    }

    /// Index of the class of `k`. With `closed`, a fingerprint matching a
    /// single class is accepted without an isometry test.
    pub(crate) fn lookup(&self, k: &Keyed, closed: bool) -> Option<usize> {
        let cands = self.index.get(&k.sig)?;
        if closed && cands.len() == 1 {
            return Some(cands[0]);
        }
        cands
            .iter()
            .copied()
            .find(|&c| self.reps[c] == k.form || IsometrySearch::new(&self.reps[c], &k.form).find().is_some())
    }

    fn push(&mut self, k: Keyed) -> usize {
        let i = self.reps.len();
        self.aut_orders.push(automorphism_order(&k.form));
        self.index.entry(k.sig).or_default().push(i);
        self.reps.push(k.form);
        self.adjacency.push(Vec::new());
        i
    }

    /// Number of distinct fingerprints; equals `len()` when every class is
    /// identified by its fingerprint alone.
    pub fn distinct_signatures(&self) -> usize {
        self.index.len()
    }
}

/// Neighbors of `form`, reduced, fingerprinted and sorted canonically.
pub(crate) fn keyed_neighbors(form: &QuadForm, p: u64, degree: u8) -> Result<Vec<Keyed>, GenusError> {
    let ns = match degree {
        1 => p_neighbors(form, p)?,
        2 => second_neighbors(form, p)?,
        d => return Err(GenusError::Degree(d)),
    };
    let mut ks: Vec<Keyed> = ns.iter().map(Keyed::new).collect();
    ks.sort_by(|a, b| a.sig.cmp(&b.sig).then_with(|| a.form.coeffs().cmp(&b.form.coeffs())));
    Ok(ks)
}

/// Order in which the neighbors of a class are merged during closure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NeighborOrder {
    /// Sorted by fingerprint, then by reduced coefficients.
    Canonical,
    /// A pseudorandom permutation determined by the seed.
    Shuffled(u64),
}

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Closes `seed` under `p`-neighbors up to isometry, breadth first, merging
/// neighbors in canonical order.
pub fn enumerate_genus<P: ParMap>(seed: &QuadForm, p: u64, par: &P) -> Result<GenusData, GenusError> {
    enumerate_genus_ordered(seed, p, NeighborOrder::Canonical, par)
}

/// [`enumerate_genus`] with an explicit merge order.
pub fn enumerate_genus_ordered<P: ParMap>(
    seed: &QuadForm,
    p: u64,
    order: NeighborOrder,
    par: &P,
) -> Result<GenusData, GenusError> {
    check_prime(seed, p)?;
    let mut g = GenusData {
        reps: Vec::new(),
        aut_orders: Vec::new(),
        base_prime: p,
        adjacency: Vec::new(),
        index: BTreeMap::new(),
    };
    g.push(Keyed::new(seed));
    let mut rng = match order {
        NeighborOrder::Canonical => 0,
        NeighborOrder::Shuffled(s) => s,
    };
    let mut done = 0;
    while done < g.len() {
        let frontier: Vec<QuadForm> = g.reps[done..].to_vec();
        let expanded = par.map_indexed(frontier.len(), &|i| keyed_neighbors(&frontier[i], p, 1));
        for (off, ks) in expanded.into_iter().enumerate() {
            let src = done + off;
            let mut ks = ks?;
            if let NeighborOrder::Shuffled(_) = order {
                for i in (1..ks.len()).rev() {
                    let j = (splitmix(&mut rng) % (i as u64 + 1)) as usize;
                    ks.swap(i, j);
                }
            }
            let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
            for k in ks {
                let j = match g.lookup(&k, false) {
                    Some(j) => j,
                    None => g.push(k),
                };
                *counts.entry(j).or_default() += 1;
            }
            g.adjacency[src] = counts.into_iter().collect();
        }
        done += frontier.len();
    }
    Ok(g)
}

/// For each class of `b`, the index of the isometric class of `a`.
pub fn match_classes(a: &GenusData, b: &GenusData) -> Option<Vec<usize>> {
    let mut out = Vec::with_capacity(b.len());
    for r in &b.reps {
        out.push(a.lookup(&Keyed::new(r), false)?);
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quinlat::{builtin_q79, is_isometric};

    #[test]
    fn sum_of_squares_is_one_class() {
        let g = enumerate_genus(&QuadForm::sum_of_squares(), 3, &Sequential).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.adjacency[0], [(0, 40)]);
    }

    #[test]
    fn level_79_genus() {
        let g = enumerate_genus(&builtin_q79(), 2, &Sequential).unwrap();
        assert_eq!(g.len(), 9);
        for i in 0..g.len() {
            for j in 0..i {
                assert!(is_isometric(&g.reps[i], &g.reps[j]).is_none());
            }
            assert_eq!(g.adjacency[i].iter().map(|e| e.1).sum::<u64>(), 15);
        }
    }
}
