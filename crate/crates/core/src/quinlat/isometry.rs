//! Isometry testing and automorphism counting by backtracking over
//! short-vector images of a reduced basis.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::enumerate::for_each_short_vector;
use super::{dot, mat_mul, unimodular_inverse, Mat5, QuadForm, Vec5, RANK};

/// Candidate images for the basis vectors of a target form, drawn from the
/// short vectors of a source form.
///
/// The basis vector with the largest norm is never enumerated: once the
/// other four images are fixed, its image lies on a line and is found by
/// solving a quadratic.
pub struct IsometrySearch {
    source: QuadForm,
    target: QuadForm,
    // per target basis index: candidate vectors of the source and their H-images,
    // stored as consecutive (v, −v) pairs
    cands: [Vec<(Vec5, Vec5)>; RANK],
    // order[RANK - 1] is the solved index
    order: [usize; RANK],
}

impl IsometrySearch {
    /// Prepares a search for `W` with `Wᵀ H_source W = H_target`.
    /// Both forms should be reduced for the search to be fast.
    pub fn new(source: &QuadForm, target: &QuadForm) -> Self {
        let t = target.hessian();
        let last = (0..RANK).max_by_key(|&i| (t[i][i], i)).unwrap();
        let max_norm = (0..RANK).filter(|&i| i != last).map(|i| t[i][i] / 2).max().unwrap();
        let mut cands: [Vec<(Vec5, Vec5)>; RANK] = Default::default();
        for_each_short_vector(source, max_norm, |v, value| {
            for i in 0..RANK {
                if i != last && t[i][i] / 2 == value {
                    let hv = source.apply(v);
                    cands[i].push((*v, hv));
                    let neg = [-v[0], -v[1], -v[2], -v[3], -v[4]];
                    let hneg = [-hv[0], -hv[1], -hv[2], -hv[3], -hv[4]];
                    cands[i].push((neg, hneg));
                }
            }
        });
        let mut head: Vec<usize> = (0..RANK).filter(|&i| i != last).collect();
        head.sort_by_key(|&i| (cands[i].len(), i));
        let order = [head[0], head[1], head[2], head[3], last];
        IsometrySearch { source: source.clone(), target: target.clone(), cands, order }
    }

    /// First isometry found in the deterministic search order.
    pub fn find(&self) -> Option<Mat5> {
        let mut found = None;
        self.run(true, &mut |w| {
            found = Some(*w);
            false
        });
        found
    }

    /// Number of isometries source → target.
    pub fn count(&self) -> u64 {
        let mut n = 0u64;
        self.run(false, &mut |_| {
            n += 1;
            true
        });
        n
    }

    fn run(&self, fix_sign: bool, visit: &mut dyn FnMut(&Mat5) -> bool) {
        if self.source.halfdisc() != self.target.halfdisc() {
            return;
        }
        if self.order[..RANK - 1].iter().any(|&i| self.cands[i].is_empty()) {
            return;
        }
        let mut chosen = [[0i64; RANK]; RANK];
        self.step(0, fix_sign, &mut chosen, visit);
    }

    /// `chosen[i]` is the image of basis vector `i`. Returns false once the
    /// visitor asks to stop.
    fn step(
        &self,
        level: usize,
        fix_sign: bool,
        chosen: &mut Mat5,
        visit: &mut dyn FnMut(&Mat5) -> bool,
    ) -> bool {
        let t = self.target.hessian();
        if level == RANK - 1 {
            let idx = self.order[level];
            for w in self.solve_last(chosen) {
                chosen[idx] = w;
                let mut m = [[0i64; RANK]; RANK];
                for (col, vec) in chosen.iter().enumerate() {
                    for row in 0..RANK {
                        m[row][col] = vec[row];
                    }
                }
                if !visit(&m) {
                    return false;
                }
            }
            return true;
        }
        let idx = self.order[level];
        for (ci, (v, hv)) in self.cands[idx].iter().enumerate() {
            // −1 is an isometry, so the first image may be taken with either sign
            if level == 0 && fix_sign && ci % 2 == 1 {
                continue;
            }
            let ok = (0..level).all(|j| {
                let prev = self.order[j];
                dot(hv, &chosen[prev]) == t[idx][prev]
            });
            if !ok {
                continue;
            }
            chosen[idx] = *v;
            if !self.step(level + 1, fix_sign, chosen, visit) {
                return false;
            }
        }
        true
    }

    /// All integral `w` with `B(w, chosen[j]) = H_t[last][j]` for the four
    /// fixed images and `Q(w) = H_t[last][last] / 2`.
    fn solve_last(&self, chosen: &Mat5) -> Vec<Vec5> {
        let t = self.target.hessian();
        let last = self.order[RANK - 1];
        let mut a = [[0i128; RANK]; RANK - 1];
        let mut rhs = [0i128; RANK - 1];
        for k in 0..RANK - 1 {
            let j = self.order[k];
            let hw = self.source.apply(&chosen[j]);
            for c in 0..RANK {
                a[k][c] = hw[c] as i128;
            }
            rhs[k] = t[last][j] as i128;
        }
        // kernel generator by signed maximal minors
        let mut n = [0i128; RANK];
        for (c, nc) in n.iter_mut().enumerate() {
            let m = minor4(&a, c, None);
            *nc = if c % 2 == 0 { m } else { -m };
        }
        // the four fixed images are independent, since their Gram matrix is
        // a principal minor of a positive-definite target
        let Some(j0) = (0..RANK).find(|&c| n[c] != 0) else {
            return Vec::new();
        };
        let d = minor4(&a, j0, None);
        // Cramer: particular solution with coordinate j0 zero, scaled by d
        let mut wd = [0i128; RANK];
        for (c, wc) in wd.iter_mut().enumerate() {
            if c != j0 {
                *wc = minor4(&a, j0, Some((c, &rhs)));
            }
        }
        let h = self.source.hessian();
        let big = |x: i128| BigInt::from(x);
        let quad = |x: &[i128; RANK], y: &[i128; RANK]| -> BigInt {
            let mut acc = BigInt::zero();
            for i in 0..RANK {
                let mut row = BigInt::zero();
                for j in 0..RANK {
                    row += big(h[i][j] as i128) * big(y[j]);
                }
                acc += big(x[i]) * row;
            }
            acc
        };
        // Q(wd + u n) = c d², i.e. B(n,n) u² + 2 B(wd,n) u + B(wd,wd) − 2c d² = 0
        let qa: BigInt = quad(&n, &n);
        let qb: BigInt = quad(&wd, &n) * 2;
        let qc: BigInt = quad(&wd, &wd) - big(t[last][last] as i128) * big(d) * big(d);
        let disc: BigInt = &qb * &qb - BigInt::from(4) * &qa * &qc;
        if disc.is_negative() {
            return Vec::new();
        }
        let r = disc.sqrt();
        if &r * &r != disc {
            return Vec::new();
        }
        let mut roots = Vec::new();
        let den = BigInt::from(2) * &qa;
        for num in [-&qb + &r, -&qb - &r] {
            if (&num % &den).is_zero() {
                let u = num / &den;
                if !roots.contains(&u) {
                    roots.push(u);
                }
            }
        }
        let mut out = Vec::new();
        for u in roots {
            let mut w = [0i64; RANK];
            let mut ok = true;
            for c in 0..RANK {
                let num = big(wd[c]) + &u * big(n[c]);
                let bd = big(d);
                if !(&num % &bd).is_zero() {
                    ok = false;
                    break;
                }
                match (num / bd).to_i64() {
                    Some(x) => w[c] = x,
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                out.push(w);
            }
        }
        out
    }
}

/// Determinant of the 4×4 matrix obtained from `a` by deleting column `skip`,
/// optionally replacing column `c` by `col` first.
fn minor4(a: &[[i128; RANK]; RANK - 1], skip: usize, replace: Option<(usize, &[i128; RANK - 1])>) -> i128 {
    let mut m = [[0i128; RANK - 1]; RANK - 1];
    for r in 0..RANK - 1 {
        let mut k = 0;
        for c in 0..RANK {
            if c == skip {
                continue;
            }
            m[r][k] = match replace {
                Some((rc, col)) if rc == c => col[r],
                _ => a[r][c],
            };
            k += 1;
        }
    }
    det4(m)
}

fn det4(mut m: [[i128; 4]; 4]) -> i128 {
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..3 {
        if m[k][k] == 0 {
            let Some(sw) = (k + 1..4).find(|&i| m[i][k] != 0) else {
                return 0;
            };
            m.swap(k, sw);
            sign = -sign;
        }
        for i in k + 1..4 {
            for j in k + 1..4 {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[3][3]
}

/// Returns `U` with `Uᵀ H₁ U = H₂` when the forms are integrally equivalent.
pub fn is_isometric(q1: &QuadForm, q2: &QuadForm) -> Option<Mat5> {
    if q1.halfdisc() != q2.halfdisc() {
        return None;
    }
    if q1 == q2 {
        return Some(super::identity5());
    }
    let (r1, p1) = q1.reduced();
    let (r2, p2) = q2.reduced();
    let w = IsometrySearch::new(&r1, &r2).find()?;
    let p2inv = unimodular_inverse(&p2).expect("reduction transform is unimodular");
    let u = mat_mul(&mat_mul(&p1, &w), &p2inv);
    debug_assert_eq!(&q1.transform(&u), q2);
    Some(u)
}

/// Order of the integral orthogonal group of `q`.
pub fn automorphism_order(q: &QuadForm) -> u64 {
    let (r, _) = q.reduced();
    IsometrySearch::new(&r, &r).count()
}
