//! Weight bookkeeping that brings two mod-ℓ eigenforms of different weights
//! into one space of parallel weight, using a theta operator, powers, and
//! monomials in the partial Hasse invariants `H₁`, `H₂`.

use serde::{Deserialize, Serialize};

use super::SturmError;

/// Default largest power tried by [`weight_plan`].
pub const DEFAULT_PLAN_LIMIT: u32 = 6;

/// A weight `(k, l)` with `k, l ∈ ℤ²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Weight {
    pub k: [i64; 2],
    pub l: [i64; 2],
}

impl Weight {
    pub const fn new(k: [i64; 2], l: [i64; 2]) -> Self {
        Weight { k, l }
    }

    fn add(self, o: Weight) -> Weight {
        Weight { k: [self.k[0] + o.k[0], self.k[1] + o.k[1]], l: [self.l[0] + o.l[0], self.l[1] + o.l[1]] }
    }

    fn scale(self, m: i64) -> Weight {
        Weight { k: [self.k[0] * m, self.k[1] * m], l: [self.l[0] * m, self.l[1] * m] }
    }

    fn neg(self) -> Weight {
        self.scale(-1)
    }

    pub fn is_parallel(&self) -> bool {
        self.k[0] == self.k[1]
    }
}

/// Weight shifts in characteristic `ℓ` for `F = ℚ(√5)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightRules {
    pub ell: u64,
    pub ramified: bool,
    pub theta: Weight,
    pub h1: Weight,
    pub h2: Weight,
    /// `l` is significant only modulo this integer in each component.
    pub l_modulus: i64,
}

impl WeightRules {
    pub fn new(ell: u64, ramified: bool) -> Result<Self, SturmError> {
        let e = ell as i64;
        match (ell, ramified) {
            // totally positive units are squares and square to 1 mod √5
            (5, true) => Ok(WeightRules {
                ell,
                ramified,
                theta: Weight::new([1, 1], [0, -1]),
                h1: Weight::new([-1, e], [0, 0]),
                h2: Weight::new([1, -1], [0, 0]),
                l_modulus: 2,
            }),
            // units cube to 1 mod (2); Θ₁ is the operator used
            (2, false) => Ok(WeightRules {
                ell,
                ramified,
                theta: Weight::new([1, 2], [-1, 0]),
                h1: Weight::new([-1, e], [0, 0]),
                h2: Weight::new([e, -1], [0, 0]),
                l_modulus: 3,
            }),
            _ => Err(SturmError::UnsupportedPrime(ell)),
        }
    }
}

/// What is applied to one form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SidePlan {
    pub start: Weight,
    pub theta: u32,
    /// Whether the theta image is divided by `H₁`.
    pub divide_h1: bool,
    /// Exponents of `H₁` and `H₂` in the multiplier.
    pub hasse: [u32; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightPlan {
    pub ell: u64,
    pub power: u32,
    pub f: SidePlan,
    pub h: SidePlan,
    pub final_f: Weight,
    pub final_h: Weight,
    pub l_modulus: i64,
}

impl SidePlan {
    fn after_theta(&self, r: &WeightRules) -> Weight {
        let mut w = self.start;
        for _ in 0..self.theta {
            w = w.add(r.theta);
        }
        if self.divide_h1 {
            w = w.add(r.h1.neg());
        }
        w
    }

    fn final_weight(&self, r: &WeightRules, power: u32) -> Weight {
        self.after_theta(r)
            .scale(i64::from(power))
            .add(r.h1.scale(i64::from(self.hasse[0])))
            .add(r.h2.scale(i64::from(self.hasse[1])))
    }
}

impl WeightPlan {
    /// Recomputes both final weights from the rules and checks that they
    /// agree, are parallel, and have `l` congruent modulo the unit lattice.
    pub fn verify(&self) -> bool {
        let Ok(r) = WeightRules::new(self.ell, self.ell == 5) else {
            return false;
        };
        let wf = self.f.final_weight(&r, self.power);
        let wh = self.h.final_weight(&r, self.power);
        wf == self.final_f
            && wh == self.final_h
            && wf.k == wh.k
            && wf.is_parallel()
            && (0..2).all(|i| (wf.l[i] - wh.l[i]).rem_euclid(r.l_modulus) == 0)
    }
}

/// Smallest power `m ≤ limit`, then smallest final weight, then fewest Hasse
/// factors, bringing forms of weights `f` and `h` to one parallel weight.
///
/// Theta is applied when the weights differ. In the inert case the theta
/// image is divided by `H₁` whenever the first component of `k` is divisible
/// by `ℓ`, where that division is forced.
pub fn weight_plan(f: Weight, h: Weight, ell: u64, ramified: bool, limit: u32) -> Result<WeightPlan, SturmError> {
    let r = WeightRules::new(ell, ramified)?;
    let theta = u32::from(f != h);
    let side = |w: Weight| SidePlan {
        start: w,
        theta,
        divide_h1: theta > 0 && !ramified && w.k[0].rem_euclid(ell as i64) == 0,
        hasse: [0, 0],
    };
    let (sf, sh) = (side(f), side(h));
    for m in 1..=limit {
        let bound = 4 * m + 8;
        let mut best: Option<(i64, u32, WeightPlan)> = None;
        for a1 in 0..=bound {
            for a2 in 0..=bound {
                let pf = SidePlan { hasse: [a1, a2], ..sf };
                let wf = pf.final_weight(&r, m);
                if !wf.is_parallel() {
                    continue;
                }
                for b1 in 0..=bound {
                    for b2 in 0..=bound {
                        let ph = SidePlan { hasse: [b1, b2], ..sh };
                        let plan = WeightPlan {
                            ell,
                            power: m,
                            f: pf,
                            h: ph,
                            final_f: wf,
                            final_h: ph.final_weight(&r, m),
                            l_modulus: r.l_modulus,
                        };
                        if !plan.verify() {
                            continue;
                        }
                        let key = (wf.k[0], a1 + a2 + b1 + b2);
                        if best.as_ref().is_none_or(|(k, t, _)| key < (*k, *t)) {
                            best = Some((key.0, key.1, plan));
                        }
                    }
                }
            }
        }
        if let Some((_, _, plan)) = best {
            return Ok(plan);
        }
    }
    Err(SturmError::NoPlan(limit))
}
