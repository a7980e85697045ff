//! Elliptic curves over `F` by label, read from a local mirror directory
//! laid out as `<dir>/<label>.json`.
//!
//! An optional `<dir>/SHA256SUMS` in `sha256sum` format pins the bytes of
//! each record; a listed file whose digest differs is rejected. Records are
//! read verbatim and never rewritten.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use congruence_kit_core::congruence::EllipticCurveF;
use congruence_kit_core::rqfield::{factor_principal, IntElem};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{KitError, Result};

pub const MIRROR_ENV: &str = "CONGRUENCE_KIT_MIRROR";

/// One curve record. Elements of `O_F` are written `"a,b"` for `a + bφ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveRecord {
    pub label: String,
    pub field: String,
    /// `[a₁, a₂, a₃, a₄, a₆]`.
    pub ainvs: Vec<String>,
    pub conductor_label: String,
    pub conductor_norm: u64,
    /// A generator of the conductor.
    pub conductor_ideal: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fetched {
    pub label: String,
    pub curve: EllipticCurveF,
    pub path: PathBuf,
    pub sha256: String,
}

fn parse_elem(s: &str) -> Option<IntElem> {
    let (a, b) = s.split_once(',')?;
    Some(IntElem::new(a.trim().parse().ok()?, b.trim().parse().ok()?))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// The ideals `(1 ± 4√5)`, both of norm 79.
fn expected_conductors() -> [IntElem; 2] {
    // 1 + 4√5 = −3 + 8φ, 1 − 4√5 = 5 − 8φ
    [IntElem::new(-3, 8), IntElem::new(5, -8)]
}

fn same_ideal(x: &IntElem, y: &IntElem) -> bool {
    matches!((factor_principal(x), factor_principal(y)), (Ok(a), Ok(b)) if a == b)
}

#[derive(Debug, Clone)]
pub struct Mirror {
    pub dir: PathBuf,
}

impl Mirror {
    /// `flag`, then the environment variable, then `default`.
    pub fn locate(flag: Option<PathBuf>, default: PathBuf) -> Self {
        let dir = flag.or_else(|| std::env::var_os(MIRROR_ENV).map(PathBuf::from)).unwrap_or(default);
        Mirror { dir }
    }

    fn checksums(&self) -> Result<BTreeMap<String, String>> {
        let path = self.dir.join("SHA256SUMS");
        if !path.exists() {
            return Ok(BTreeMap::new());
        }
        let text = std::fs::read_to_string(&path).map_err(|e| KitError::io(&path, e))?;
        let mut out = BTreeMap::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let (digest, name) = line.split_once(char::is_whitespace).ok_or_else(|| KitError::format(&path, "malformed line"))?;
            out.insert(name.trim().trim_start_matches('*').to_string(), digest.to_string());
        }
        Ok(out)
    }

    /// Reads and validates the record for `label`.
    pub fn fetch_curve(&self, label: &str) -> Result<Fetched> {
        if label.contains('/') || label.contains("..") {
            return Err(KitError::Usage(format!("invalid curve label {label:?}")));
        }
        let name = format!("{label}.json");
        let path = self.dir.join(&name);
        if !path.exists() {
            return Err(KitError::Usage(format!("unknown curve label {label}: no {} in the mirror", path.display())));
        }
        let bytes = std::fs::read(&path).map_err(|e| KitError::io(&path, e))?;
        let sha256 = sha256_hex(&bytes);
        if let Some(want) = self.checksums()?.get(&name) {
            if *want != sha256 {
                return Err(KitError::format(&path, format!("checksum mismatch: {sha256}, expected {want}")));
            }
        }
        let rec: CurveRecord = serde_json::from_slice(&bytes).map_err(|e| KitError::format(&path, e))?;
        let curve = Self::to_curve(&rec).map_err(|m| KitError::format(&path, m))?;
        Ok(Fetched { label: label.to_string(), curve, path, sha256 })
    }

    fn to_curve(rec: &CurveRecord) -> std::result::Result<EllipticCurveF, String> {
        if rec.field != "2.2.5.1" {
            return Err(format!("field {} is not 2.2.5.1", rec.field));
        }
        let a: Vec<IntElem> = rec.ainvs.iter().map(|s| parse_elem(s).ok_or(format!("bad a-invariant {s:?}"))).collect::<std::result::Result<_, _>>()?;
        let a: [IntElem; 5] = a.try_into().map_err(|_| "expected five a-invariants".to_string())?;
        let n = parse_elem(&rec.conductor_ideal).ok_or(format!("bad conductor {:?}", rec.conductor_ideal))?;
        let curve = EllipticCurveF::new(a, n).map_err(|e| e.to_string())?;
        if curve.conductor_norm() != rec.conductor_norm || !expected_conductors().iter().any(|c| same_ideal(c, &n)) {
            return Err(format!("conductor {} is not (1 ± 4√5)", rec.conductor_ideal));
        }
        Ok(curve)
    }
}

/// The default mirror inside a fixtures directory.
pub fn default_dir(fixtures: &Path) -> PathBuf {
    fixtures.join("mirror")
}
