//! Line-oriented eigenvalue tables.
//!
//! Hilbert tables:
//!
//! ```text
//! # comment
//! field: x^2-5
//! coeff_field: rational | <c0a> <c0b> <c1a> <c1b> <c2a> <c2b>
//! form: <id> weight <k1>,<k2> level <norm>
//! al: <prime label> <+1|-1>
//! labels: unordered
//! prime <norm>:<a>:<b> ev <c0a> <c0b> [<c1a> <c1b> <c2a> <c2b>]
//! ```
//!
//! Every pair `a b` is `a + b·t` with `t = √5`; entries are integers or
//! fractions `n/d`. A cubic `coeff_field` is the minimal polynomial
//! `x³ + c₂x² + c₁x + c₀` of the generator `w`, and `ev` lists the
//! coordinates of an eigenvalue in the basis `1, w, w²`. Rational tables carry
//! one pair per prime. `labels: unordered` marks a table whose values at the
//! two primes above a split `p` are not attached to specific generators.
//!
//! Paramodular tables use `form: <id> weight <k> level <N>` and data lines
//! `nu <p> <n>`, `nu2 <p> <n>` (for `T_{1,p²}`) and `al <p> <±1>`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::rqfield::{CoeffField, CoeffFieldElem, FieldElem, PrimeIdealF};

/// A table error with its 1-based line number (0 for whole-file errors).
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: TableError,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TableError {
    #[error("missing header `{0}`")]
    MissingHeader(&'static str),
    #[error("header `{0}` given twice")]
    DuplicateHeader(String),
    #[error("malformed line: {0}")]
    Malformed(String),
    #[error("unsupported base field `{0}`; expected x^2-5")]
    BaseField(String),
    #[error("not a number: `{0}`")]
    Number(String),
    #[error("`{0}` is not a prime ideal label")]
    UnknownPrime(String),
    #[error("prime {0} listed twice")]
    Duplicate(String),
    #[error("expected {expected} numbers after `ev` for this coefficient field, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("Atkin–Lehner sign must be +1 or -1, got `{0}`")]
    Sign(String),
}

/// Field generated by the eigenvalues over `F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoeffDescriptor {
    /// Eigenvalues lie in `F` itself.
    Rational,
    Cubic(CoeffField),
}

impl CoeffDescriptor {
    /// Number of `F`-coordinates of an eigenvalue.
    pub fn degree(&self) -> usize {
        match self {
            CoeffDescriptor::Rational => 1,
            CoeffDescriptor::Cubic(_) => 3,
        }
    }
}

/// Hecke eigenvalues of a Hilbert eigenform, indexed by prime ideals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenvalueTable {
    pub form: String,
    pub weight: (u32, u32),
    pub level: u64,
    pub field: CoeffDescriptor,
    /// Coordinates in `1, w, w²`; rational tables use the first only.
    pub values: BTreeMap<PrimeIdealF, CoeffFieldElem>,
    pub atkin_lehner: BTreeMap<PrimeIdealF, i8>,
    /// Whether conjugate primes carry their own values.
    pub labels_fixed: bool,
}

impl EigenvalueTable {
    pub fn new(form: &str, weight: (u32, u32), level: u64, field: CoeffDescriptor) -> Self {
        EigenvalueTable {
            form: form.to_string(),
            weight,
            level,
            field,
            values: BTreeMap::new(),
            atkin_lehner: BTreeMap::new(),
            labels_fixed: true,
        }
    }

    pub fn get(&self, p: &PrimeIdealF) -> Option<&CoeffFieldElem> {
        self.values.get(p)
    }

    /// Inserts a value in `F`.
    pub fn insert_base(&mut self, p: PrimeIdealF, x: FieldElem) {
        self.values.insert(p, base_elem(x));
    }

    /// Renders the table in the fixture grammar; [`parse_table`] inverts it.
    pub fn render(&self) -> String {
        let mut s = String::from("field: x^2-5\n");
        match &self.field {
            CoeffDescriptor::Rational => s.push_str("coeff_field: rational\n"),
            CoeffDescriptor::Cubic(cf) => {
                s.push_str("coeff_field:");
                for c in cf.minpoly() {
                    push_pair(&mut s, c);
                }
                s.push('\n');
            }
        }
        s.push_str(&format!("form: {} weight {},{} level {}\n", self.form, self.weight.0, self.weight.1, self.level));
        for (p, e) in &self.atkin_lehner {
            s.push_str(&format!("al: {} {:+}\n", p.label(), e));
        }
        if !self.labels_fixed {
            s.push_str("labels: unordered\n");
        }
        let k = self.field.degree();
        for (p, v) in &self.values {
            s.push_str(&format!("prime {} ev", p.label()));
            for c in &v.coords()[..k] {
                push_pair(&mut s, c);
            }
            s.push('\n');
        }
        s
    }
}

pub(crate) fn base_elem(x: FieldElem) -> CoeffFieldElem {
    CoeffFieldElem::from_coords([x, FieldElem::zero(), FieldElem::zero()])
}

/// `a + b√5` in the basis `1, φ`.
pub fn from_sqrt5_basis(a: BigRational, b: BigRational) -> FieldElem {
    let b2 = &b + &b;
    FieldElem::new(a - b, b2)
}

/// Coordinates of `x` in the basis `1, √5`.
pub fn to_sqrt5_basis(x: &FieldElem) -> (BigRational, BigRational) {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let b = &x.b * &half;
    (&x.a + &b, b)
}

fn push_pair(s: &mut String, x: &FieldElem) {
    let (a, b) = to_sqrt5_basis(x);
    s.push_str(&format!(" {} {}", a, b));
}

fn number(tok: &str) -> Result<BigRational, TableError> {
    let bad = || TableError::Number(tok.to_string());
    match tok.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().map_err(|_| bad())?;
            let d: BigInt = d.parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(tok.parse().map_err(|_| bad())?)),
    }
}

fn pairs(toks: &[&str]) -> Result<Vec<FieldElem>, TableError> {
    if !toks.len().is_multiple_of(2) {
        return Err(TableError::Malformed(toks.join(" ")));
    }
    toks.chunks(2).map(|c| Ok(from_sqrt5_basis(number(c[0])?, number(c[1])?))).collect()
}

fn sign(tok: &str) -> Result<i8, TableError> {
    match tok {
        "+1" | "1" => Ok(1),
        "-1" => Ok(-1),
        _ => Err(TableError::Sign(tok.to_string())),
    }
}

fn prime(tok: &str) -> Result<PrimeIdealF, TableError> {
    tok.parse().map_err(|_| TableError::UnknownPrime(tok.to_string()))
}

/// Content lines with their 1-based numbers, comments and blanks removed.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn set_once<T>(slot: &mut Option<T>, v: T, key: &str, line: usize) -> Result<(), ParseError> {
    if slot.is_some() {
        return Err(ParseError { line, kind: TableError::DuplicateHeader(key.to_string()) });
    }
    *slot = Some(v);
    Ok(())
}

/// Parses a Hilbert eigenvalue table. Empty input yields an empty table
/// with placeholder metadata.
pub fn parse_table(text: &str) -> Result<EigenvalueTable, ParseError> {
    let mut field_seen: Option<()> = None;
    let mut coeff: Option<CoeffDescriptor> = None;
    let mut form: Option<(String, (u32, u32), u64)> = None;
    let mut al = BTreeMap::new();
    let mut labels_fixed = true;
    let mut values = BTreeMap::new();
    let mut any = false;
    for (line, l) in content_lines(text) {
        any = true;
        let err = |kind| ParseError { line, kind };
        let malformed = || err(TableError::Malformed(l.to_string()));
        if let Some(rest) = l.strip_prefix("field:") {
            let f: String = rest.chars().filter(|c| !c.is_whitespace()).collect();
            if f != "x^2-5" {
                return Err(err(TableError::BaseField(f)));
            }
            set_once(&mut field_seen, (), "field", line)?;
        } else if let Some(rest) = l.strip_prefix("coeff_field:") {
            let rest = rest.trim();
            let d = if rest == "rational" {
                CoeffDescriptor::Rational
            } else {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                if toks.len() != 6 {
                    return Err(malformed());
                }
                let c = pairs(&toks).map_err(err)?;
                CoeffDescriptor::Cubic(CoeffField::new(c[0].clone(), c[1].clone(), c[2].clone()))
            };
            set_once(&mut coeff, d, "coeff_field", line)?;
        } else if let Some(rest) = l.strip_prefix("form:") {
            let toks: Vec<&str> = rest.split_whitespace().collect();
            let [id, "weight", w, "level", n] = toks.as_slice() else { return Err(malformed()) };
            let (k1, k2) = w.split_once(',').ok_or_else(malformed)?;
            let weight = (k1.parse().map_err(|_| malformed())?, k2.parse().map_err(|_| malformed())?);
            let level = n.parse().map_err(|_| malformed())?;
            set_once(&mut form, (id.to_string(), weight, level), "form", line)?;
        } else if let Some(rest) = l.strip_prefix("al:") {
            let toks: Vec<&str> = rest.split_whitespace().collect();
            let [p, s] = toks.as_slice() else { return Err(malformed()) };
            let p = prime(p).map_err(err)?;
            if al.insert(p, sign(s).map_err(err)?).is_some() {
                return Err(err(TableError::Duplicate(p.label())));
            }
        } else if let Some(rest) = l.strip_prefix("labels:") {
            if rest.trim() != "unordered" {
                return Err(malformed());
            }
            labels_fixed = false;
        } else if let Some(rest) = l.strip_prefix("prime ") {
            let toks: Vec<&str> = rest.split_whitespace().collect();
            if toks.len() < 2 || toks[1] != "ev" {
                return Err(malformed());
            }
            let p = prime(toks[0]).map_err(err)?;
            let d = coeff.as_ref().ok_or(err(TableError::MissingHeader("coeff_field")))?;
            let got = toks.len() - 2;
            if got != 2 * d.degree() {
                return Err(err(TableError::Arity { expected: 2 * d.degree(), got }));
            }
            let c = pairs(&toks[2..]).map_err(err)?;
            let v = match c.len() {
                1 => base_elem(c[0].clone()),
                _ => CoeffFieldElem::from_coords([c[0].clone(), c[1].clone(), c[2].clone()]),
            };
            if values.insert(p, v).is_some() {
                return Err(err(TableError::Duplicate(p.label())));
            }
        } else {
            return Err(malformed());
        }
    }
    if !any {
        return Ok(EigenvalueTable::new("", (0, 0), 0, CoeffDescriptor::Rational));
    }
    let whole = |h| ParseError { line: 0, kind: TableError::MissingHeader(h) };
    field_seen.ok_or(whole("field"))?;
    let field = coeff.ok_or(whole("coeff_field"))?;
    let (form, weight, level) = form.ok_or(whole("form"))?;
    Ok(EigenvalueTable { form, weight, level, field, values, atkin_lehner: al, labels_fixed })
}

/// Hecke eigenvalues of a Siegel paramodular eigenform, indexed by rational
/// primes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParamodularTable {
    pub form: String,
    pub weight: u32,
    pub level: u64,
    /// `T_p` eigenvalues.
    pub nu: BTreeMap<u64, i64>,
    /// `T_{1,p²}` eigenvalues.
    pub nu2: BTreeMap<u64, i64>,
    pub atkin_lehner: BTreeMap<u64, i8>,
}

impl ParamodularTable {
    pub fn render(&self) -> String {
        let mut s = format!("form: {} weight {} level {}\n", self.form, self.weight, self.level);
        for (p, e) in &self.atkin_lehner {
            s.push_str(&format!("al {} {:+}\n", p, e));
        }
        for (p, v) in &self.nu {
            s.push_str(&format!("nu {} {}\n", p, v));
        }
        for (p, v) in &self.nu2 {
            s.push_str(&format!("nu2 {} {}\n", p, v));
        }
        s
    }
}

/// Parses a paramodular table.
pub fn parse_paramodular(text: &str) -> Result<ParamodularTable, ParseError> {
    let mut t = ParamodularTable::default();
    let mut form_seen = false;
    for (line, l) in content_lines(text) {
        let err = |kind| ParseError { line, kind };
        let malformed = || err(TableError::Malformed(l.to_string()));
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks.as_slice() {
            ["form:", id, "weight", k, "level", n] => {
                if form_seen {
                    return Err(err(TableError::DuplicateHeader("form".to_string())));
                }
                form_seen = true;
                t.form = id.to_string();
                t.weight = k.parse().map_err(|_| malformed())?;
                t.level = n.parse().map_err(|_| malformed())?;
            }
            [kw @ ("nu" | "nu2" | "al"), p, v] => {
                let p: u64 = p.parse().map_err(|_| malformed())?;
                if !crate::exactlin::is_prime_u64(p) {
                    return Err(err(TableError::UnknownPrime(p.to_string())));
                }
                let dup = match *kw {
                    "al" => t.atkin_lehner.insert(p, sign(v).map_err(err)?).is_some(),
                    kw => {
                        let n: i64 = v.parse().map_err(|_| err(TableError::Number(v.to_string())))?;
                        let m = if kw == "nu" { &mut t.nu } else { &mut t.nu2 };
                        m.insert(p, n).is_some()
                    }
                };
                if dup {
                    return Err(err(TableError::Duplicate(format!("{kw} {p}"))));
                }
            }
            _ => return Err(malformed()),
        }
    }
    if !form_seen && !(t.nu.is_empty() && t.nu2.is_empty() && t.atkin_lehner.is_empty()) {
        return Err(ParseError { line: 0, kind: TableError::MissingHeader("form") });
    }
    Ok(t)
}
