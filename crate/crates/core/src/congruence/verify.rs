//! Prime-by-prime comparison of eigenvalues in a residue field.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::rqfield::{splitting_type, FieldElem, Fq, PrimeIdealF, ResidueField, ResidueMap, SplitKind};

use super::{CoeffDescriptor, CongruenceError, EigenvalueTable, JRLiftTable, ParamodularTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// One compared prime, or a conjugate pair compared as an unordered pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub prime: String,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

/// A named side condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceReport {
    pub left: String,
    pub right: String,
    pub residue: String,
    pub excluded: Vec<String>,
    pub rows: Vec<ReportRow>,
    pub subchecks: Vec<SubCheck>,
    pub checked: usize,
    /// Failing rows plus failing subchecks.
    pub failures: usize,
    pub verdict: Verdict,
}

impl CongruenceReport {
    /// An empty report; add rows and subchecks, then call [`Self::finish`].
    pub fn new(left: &str, right: &str, residue: String, excluded: Vec<String>) -> Self {
        CongruenceReport {
            left: left.to_string(),
            right: right.to_string(),
            residue,
            excluded,
            rows: Vec::new(),
            subchecks: Vec::new(),
            checked: 0,
            failures: 0,
            verdict: Verdict::Fail,
        }
    }

    pub fn check(&mut self, name: &str, pass: bool, detail: String) {
        self.subchecks.push(SubCheck { name: name.to_string(), pass, detail });
    }

    /// Sets counts and verdict from the rows and subchecks.
    pub fn finish(mut self) -> Self {
        self.checked = self.rows.len();
        self.failures = self.rows.iter().filter(|r| !r.pass).count() + self.subchecks.iter().filter(|c| !c.pass).count();
        self.verdict = if self.failures == 0 { Verdict::Pass } else { Verdict::Fail };
        self
    }

    /// Recomputes counts and verdict from the rows and subchecks.
    pub fn is_consistent(&self) -> bool {
        let again = self.clone().finish();
        again.checked == self.checked && again.failures == self.failures && again.verdict == self.verdict
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Human-readable rendering: summary, subchecks, failing rows.
    pub fn render_text(&self) -> String {
        let mut s = format!("{} vs {} in {}\n", self.left, self.right, self.residue);
        if !self.excluded.is_empty() {
            s.push_str(&format!("excluded: {}\n", self.excluded.join(", ")));
        }
        let bad_rows = self.rows.iter().filter(|r| !r.pass).count();
        s.push_str(&format!("primes: {} compared, {} failed\n", self.checked, bad_rows));
        for c in &self.subchecks {
            s.push_str(&format!("  [{}] {}: {}\n", if c.pass { "ok" } else { "FAIL" }, c.name, c.detail));
        }
        for r in self.rows.iter().filter(|r| !r.pass) {
            s.push_str(&format!("  FAIL {}: {} vs {}\n", r.prime, r.lhs, r.rhs));
        }
        s.push_str(match self.verdict {
            Verdict::Pass => "verdict: pass\n",
            Verdict::Fail => "verdict: fail\n",
        });
        s
    }
}

/// Residue as text: `c0` over a prime field, `c0+c1*t` over `𝔽_p[t]/(t²−t−1)`.
pub fn render_residue(k: &ResidueField, x: Fq) -> String {
    if k.degree() == 1 || x.c1 == 0 {
        return x.c0.to_string();
    }
    let t = if x.c1 == 1 { "t".to_string() } else { format!("{}*t", x.c1) };
    if x.c0 == 0 {
        t
    } else {
        format!("{}+{}", x.c0, t)
    }
}

fn all_zero(rendered: &str) -> bool {
    rendered.chars().all(|c| matches!(c, '0' | '{' | '}' | ',' | ' '))
}

/// Description of a residue map for reports.
pub fn describe_map(map: &ResidueMap) -> String {
    let image = if map.scale == 0 {
        format!("w -> {}", render_residue(&map.field, map.w))
    } else {
        format!("w/{}^{} -> {}", map.prime.p, map.scale, render_residue(&map.field, map.root))
    };
    format!("O/{} = F_{} with {} (multiplicity {})", map.prime.label(), map.field.size(), image, map.multiplicity)
}

fn check_compatible(t: &EigenvalueTable, map: &ResidueMap) -> Result<(), CongruenceError> {
    if let CoeffDescriptor::Cubic(cf) = &t.field {
        let poly = map.reduced_minpoly(cf)?;
        let k = &map.field;
        let v = poly.iter().rev().fold(k.zero(), |acc, &c| k.add(k.mul(acc, map.w), c));
        if v != k.zero() {
            return Err(CongruenceError::Incompatible(t.form.clone()));
        }
    }
    Ok(())
}

/// Image of a table entry under `map`.
pub fn reduce_entry(t: &EigenvalueTable, map: &ResidueMap, p: &PrimeIdealF) -> Result<Fq, CongruenceError> {
    let v = t.get(p).ok_or_else(|| CongruenceError::MissingPrime { form: t.form.clone(), prime: p.label() })?;
    Ok(match t.field {
        CoeffDescriptor::Rational => map.apply_base(&v.coords()[0])?,
        CoeffDescriptor::Cubic(_) => map.apply(v)?,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CompareOptions {
    pub excluded: Vec<PrimeIdealF>,
    /// Comparison set; defaults to the primes of the left table.
    pub primes: Option<Vec<PrimeIdealF>>,
    /// Multiply right-hand eigenvalues by `Norm(𝔭)` before reducing.
    pub twist_right_by_norm: bool,
}

/// Compares `left` and `right` prime by prime after reduction by `map`.
///
/// Conjugate primes above a split `p` are compared as unordered pairs
/// unless both tables attach values to specific generators.
pub fn verify_congruence(
    left: &EigenvalueTable,
    right: &EigenvalueTable,
    map: &ResidueMap,
    opts: &CompareOptions,
) -> Result<CongruenceReport, CongruenceError> {
    check_compatible(left, map)?;
    check_compatible(right, map)?;
    let k = map.field;
    let primes: Vec<PrimeIdealF> = match &opts.primes {
        Some(v) => v.clone(),
        None => left.values.keys().copied().collect(),
    };
    let primes: Vec<PrimeIdealF> = primes.into_iter().filter(|p| !opts.excluded.contains(p)).collect();
    let rhs_of = |p: &PrimeIdealF| -> Result<Fq, CongruenceError> {
        let r = reduce_entry(right, map, p)?;
        Ok(if opts.twist_right_by_norm { k.mul(r, k.from_int(p.norm as i64)) } else { r })
    };
    let mut rep = CongruenceReport::new(
        &left.form,
        &right.form,
        describe_map(map),
        opts.excluded.iter().map(|p| p.label()).collect(),
    );
    let paired = !(left.labels_fixed && right.labels_fixed);
    let mut order: Vec<Vec<PrimeIdealF>> = Vec::new();
    let mut pair_slot: BTreeMap<u64, usize> = BTreeMap::new();
    for p in &primes {
        if paired && p.kind == SplitKind::Split {
            if let Some(&i) = pair_slot.get(&p.p) {
                order[i].push(*p);
                continue;
            }
            pair_slot.insert(p.p, order.len());
        }
        order.push(alloc::vec![*p]);
    }
    for g in order {
        let mut l: Vec<Fq> = g.iter().map(|p| reduce_entry(left, map, p)).collect::<Result<_, _>>()?;
        let mut r: Vec<Fq> = g.iter().map(rhs_of).collect::<Result<_, _>>()?;
        if g.len() > 1 {
            l.sort();
            r.sort();
        }
        let show = |v: &[Fq]| {
            let parts: Vec<String> = v.iter().map(|&x| render_residue(&k, x)).collect();
            if parts.len() == 1 {
                parts[0].clone()
            } else {
                format!("{{{}}}", parts.join(", "))
            }
        };
        let label: Vec<String> = g.iter().map(|p| p.label()).collect();
        rep.rows.push(ReportRow { prime: label.join(","), lhs: show(&l), rhs: show(&r), pass: l == r });
    }
    Ok(rep.finish())
}

/// Quantities computed on the genus side for the paramodular comparison.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Theorem1Inputs {
    pub class_count: usize,
    pub dim_v1: usize,
    pub dim_v2: usize,
    pub dim_meet_mod5: usize,
    /// Scalar of `T_p` on `V₁`.
    pub scalars: BTreeMap<u64, i64>,
}

/// Class count, `dim ker(T₂+5)`, `dim ker T₂`, and the mod-5 intersection.
pub const THEOREM1_DIMS: [usize; 4] = [612, 3, 6, 1];

/// Checks `ν_p(F) ≡ ν_p(JR(h)) mod λ` for the primes of `para` other than
/// 5 and the level, with the genus-side dimensions, scalars, inert-prime
/// divisibility and Atkin–Lehner agreement as subchecks.
pub fn verify_theorem1(
    inputs: &Theorem1Inputs,
    para: &ParamodularTable,
    jr: &JRLiftTable,
    map: &ResidueMap,
) -> Result<CongruenceReport, CongruenceError> {
    let k = map.field;
    let mut rep = CongruenceReport::new(&para.form, &format!("JR({})", jr.source), describe_map(map), alloc::vec!["5".to_string()]);
    let dims = [inputs.class_count, inputs.dim_v1, inputs.dim_v2, inputs.dim_meet_mod5];
    rep.check("genus dimensions", dims == THEOREM1_DIMS, format!("{dims:?}, expected {THEOREM1_DIMS:?}"));
    for (&p, &s) in &inputs.scalars {
        let want = para.nu.get(&p);
        rep.check(&format!("T_{p} scalar on V1"), want == Some(&s), format!("computed {s}, table {want:?}"));
    }
    for (&p, &n) in &para.nu {
        if p == 5 || p == para.level {
            continue;
        }
        let v = jr.nu.get(&p).ok_or_else(|| CongruenceError::MissingPrime { form: rep.right.clone(), prime: p.to_string() })?;
        let l = k.from_int(n);
        let r = map.apply(v)?;
        rep.rows.push(ReportRow {
            prime: p.to_string(),
            lhs: render_residue(&k, l),
            rhs: render_residue(&k, r),
            pass: l == r,
        });
        if splitting_type(p)?.0 == SplitKind::Inert {
            rep.check(&format!("inert {p}: 5 | nu_p"), n % 5 == 0, format!("nu_{p} = {n}"));
        }
    }
    let al = para.atkin_lehner.get(&para.level).copied();
    rep.check(
        "Atkin-Lehner sign at the level",
        al == Some(jr.eps79),
        format!("{} {:?}, lift {}", para.form, al, jr.eps79),
    );
    Ok(rep.finish())
}

/// Mod-`𝔮₁` comparison of `f` and `h` away from `(2)`, with the special
/// values at the level prime and at `(2)` as subchecks.
pub fn verify_mod2(
    f: &EigenvalueTable,
    h: &EigenvalueTable,
    map: &ResidueMap,
    level: &PrimeIdealF,
    primes: Option<Vec<PrimeIdealF>>,
) -> Result<CongruenceReport, CongruenceError> {
    let two = splitting_type(2)?.1[0];
    let opts = CompareOptions { excluded: alloc::vec![two], primes, twist_right_by_norm: false };
    let mut rep = verify_congruence(f, h, map, &opts)?;
    let k = map.field;
    let show = |x: Fq| render_residue(&k, x);
    let (fl, hl) = (reduce_entry(f, map, level)?, reduce_entry(h, map, level)?);
    rep.check("level prime: both residues 1", fl == k.one() && hl == k.one(), format!("{} and {}", show(fl), show(hl)));
    let f2 = f.get(&two).ok_or_else(|| CongruenceError::MissingPrime { form: f.form.clone(), prime: two.label() })?;
    let exact_one = f2.coords()[0] == FieldElem::one() && f2.coords()[1..].iter().all(Zero::is_zero);
    rep.check("mu_(2)(f) = 1", exact_one, format!("{}", f2.coords()[0]));
    let h2 = reduce_entry(h, map, &two)?;
    rep.check("mu_(2)(h) = 0 mod q1", h2 == k.zero(), show(h2));
    let level_label = level.label();
    let nonzero: Vec<&ReportRow> =
        rep.rows.iter().filter(|r| !r.prime.split(',').any(|l| l == level_label) && !(all_zero(&r.lhs) && all_zero(&r.rhs))).collect();
    let others = rep.rows.len() - rep.rows.iter().filter(|r| r.prime.split(',').any(|l| l == level_label)).count();
    rep.check(
        "other primes: both residues 0",
        nonzero.is_empty(),
        match nonzero.first() {
            None => format!("{others} primes"),
            Some(r) => format!("{} nonzero, first {}", nonzero.len(), r.prime),
        },
    );
    Ok(rep.finish())
}
