//! Truncated formal `q`-expansions indexed by totally positive `ξ ∈ 𝔡⁻¹`.

use alloc::collections::BTreeMap;

use crate::rqfield::{tp_numerators, IntElem};

/// `c₀ + Σ c_ξ q^ξ`, keyed by `x = √5·ξ`; `tr(ξ)` is the `φ`-coordinate of
/// `x`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QExp {
    pub constant: i128,
    pub coeffs: BTreeMap<IntElem, i128>,
}

impl QExp {
    /// Coefficient at `x = √5·ξ`; the zero key is the constant term.
    pub fn coeff(&self, x: &IntElem) -> i128 {
        if x.is_zero() {
            self.constant
        } else {
            self.coeffs.get(x).copied().unwrap_or(0)
        }
    }

    /// Whether every coefficient with `tr(ξ) < bound` vanishes, the
    /// constant term included.
    pub fn vanishes_below(&self, bound: i64) -> bool {
        (bound <= 0 || self.constant == 0) && self.coeffs.iter().all(|(x, &c)| c == 0 || x.b >= bound)
    }
}

fn trace(x: &IntElem) -> i64 {
    x.b
}

/// The product truncated to `tr(ξ) < trace_bound`:
/// `c_ξ = Σ_{η + ζ = ξ} a_η b_ζ` over `η, ζ` totally positive or zero.
pub fn qexp_product(f: &QExp, g: &QExp, trace_bound: i64) -> QExp {
    let mut out = QExp { constant: if trace_bound > 0 { f.constant * g.constant } else { 0 }, coeffs: BTreeMap::new() };
    for xi in tp_numerators(trace_bound) {
        let mut c = f.constant * g.coeff(&xi) + f.coeff(&xi) * g.constant;
        for (eta, &a) in f.coeffs.range(..) {
            if a == 0 || trace(eta) >= trace(&xi) {
                continue;
            }
            let rest = xi - *eta;
            // ξ − η must itself be totally positive
            if rest.signs() == (core::cmp::Ordering::Greater, core::cmp::Ordering::Less) {
                c += a * g.coeff(&rest);
            }
        }
        if c != 0 {
            out.coeffs.insert(xi, c);
        }
    }
    out
}

/// The vanishing statement for products: if `f` vanishes below trace `b`,
/// so does `f·g` (truncated at `trace_bound`). Returns whether the
/// implication holds for these inputs.
pub fn qexp_product_check(f: &QExp, g: &QExp, b: i64, trace_bound: i64) -> bool {
    if !f.vanishes_below(b) {
        return true;
    }
    qexp_product(f, g, trace_bound).vanishes_below(b.min(trace_bound))
}
