//! Spin-`L` coefficients of the lift of a weight-(2,4) Hilbert eigenform to a
//! paramodular form.

use alloc::collections::BTreeMap;
use alloc::string::String;

use crate::rqfield::{splitting_type, CoeffFieldElem, FieldElem, PrimeIdealF, SplitKind};

use super::{CongruenceError, EigenvalueTable};

/// `ν_p` of the lift for rational primes `p`, in the coefficient field of
/// the source table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JRLiftTable {
    pub source: String,
    pub nu: BTreeMap<u64, CoeffFieldElem>,
    pub eps5: i8,
    pub eps79: i8,
}

fn sum(x: &CoeffFieldElem, y: &CoeffFieldElem) -> CoeffFieldElem {
    let (a, b) = (x.coords(), y.coords());
    CoeffFieldElem::from_coords([&a[0] + &b[0], &a[1] + &b[1], &a[2] + &b[2]])
}

/// `a_p` of the spin `L`-function: `0` for inert `p`, `μ_𝔭₁ + μ_𝔭₂` for
/// split `p`, `μ_(√5)` for `p = 5`. This equals the `T_p` eigenvalue for
/// `p` prime to the level.
///
/// `eps79` is the Atkin–Lehner sign of `h` at its level prime; `eps5` is
/// supplied by the caller.
pub fn jr_compose(h: &EigenvalueTable, primes: &[u64], eps5: i8) -> Result<JRLiftTable, CongruenceError> {
    let get = |p: PrimeIdealF| h.get(&p).ok_or_else(|| CongruenceError::MissingPrime { form: h.form.clone(), prime: p.label() });
    let mut nu = BTreeMap::new();
    for &p in primes {
        let (kind, ps) = splitting_type(p)?;
        let v = match kind {
            SplitKind::Inert => CoeffFieldElem::from_coords(core::array::from_fn(|_| FieldElem::zero())),
            SplitKind::Split => sum(get(ps[0])?, get(ps[1])?),
            SplitKind::Ramified => get(ps[0])?.clone(),
        };
        nu.insert(p, v);
    }
    let eps79 = h
        .atkin_lehner
        .iter()
        .find(|(p, _)| p.norm == h.level)
        .map(|(_, &e)| e)
        .ok_or_else(|| CongruenceError::MissingAtkinLehner(h.form.clone()))?;
    Ok(JRLiftTable { source: h.form.clone(), nu, eps5, eps79 })
}
