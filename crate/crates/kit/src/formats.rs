//! Stage artifacts on disk: eigenvalue tables in the line grammar of
//! `congruence::table`, and JSON files for everything else.

use std::path::Path;

use congruence_kit_core::congruence::{parse_paramodular, parse_table, EigenvalueTable, ParamodularTable};
use congruence_kit_core::genus::GenusData;
use congruence_kit_core::quinlat::QuadForm;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{KitError, Result};

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| KitError::io(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| KitError::io(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| KitError::io(path, e))
}

/// Pretty JSON with a trailing newline; field order is fixed by the types,
/// so equal values give identical bytes.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_text(path, &to_json(value))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_str(&read_text(path)?).map_err(|e| KitError::format(path, e))
}

pub fn load_table(path: &Path) -> Result<EigenvalueTable> {
    parse_table(&read_text(path)?).map_err(|e| KitError::format(path, e))
}

pub fn load_paramodular(path: &Path) -> Result<ParamodularTable> {
    parse_paramodular(&read_text(path)?).map_err(|e| KitError::format(path, e))
}

/// A genus with its neighbor graph at the base prime. Forms use the
/// 15-coefficient line format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusFile {
    pub seed: String,
    pub base_prime: u64,
    pub class_count: usize,
    pub classes: Vec<String>,
    pub aut_orders: Vec<u64>,
    pub adjacency: Vec<Vec<(usize, u64)>>,
}

impl GenusFile {
    pub fn from_genus(seed: &QuadForm, g: &GenusData) -> Self {
        GenusFile {
            seed: seed.to_string(),
            base_prime: g.base_prime,
            class_count: g.len(),
            classes: g.reps.iter().map(ToString::to_string).collect(),
            aut_orders: g.aut_orders.clone(),
            adjacency: g.adjacency.clone(),
        }
    }

    pub fn to_genus(&self, origin: &Path) -> Result<GenusData> {
        let reps = self
            .classes
            .iter()
            .map(|s| s.parse::<QuadForm>().map_err(|e| KitError::format(origin, e)))
            .collect::<Result<Vec<_>>>()?;
        if reps.len() != self.class_count || self.aut_orders.len() != reps.len() || self.adjacency.len() != reps.len() {
            return Err(KitError::format(origin, "class, automorphism and adjacency counts differ"));
        }
        Ok(GenusData::from_parts(reps, self.aut_orders.clone(), self.base_prime, self.adjacency.clone()))
    }
}

/// Subspace dimensions attached to `T₂`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelDims {
    /// `dim ker(T₂ + 5)`.
    pub v1: usize,
    /// `dim ker T₂`.
    pub v2: usize,
    /// Dimension of the intersection of their reductions mod 5.
    pub meet_mod5: usize,
}

/// A Hecke matrix in sparse rows, natural convention.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeckeFile {
    pub p: u64,
    pub degree: u8,
    pub size: usize,
    pub rows: Vec<Vec<(usize, u64)>>,
    pub dims: Option<KernelDims>,
    /// Scalar on `ker(T₂ + 5)`.
    pub scalar_v1: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub ell: u64,
    pub final_weight: (i64, i64),
    pub weight_half: u64,
    pub bound: u64,
    /// Coefficients are compared for `tr(ξ) < trace_bound = bound + 1`.
    pub trace_bound: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SturmFile {
    pub aux_level: u64,
    pub d: u64,
    pub n_sq: u64,
    pub unit_index: u32,
    pub cusps: u64,
    pub cycle: Vec<u32>,
    pub zeta_minus_one: String,
    pub kd: String,
    pub kk: String,
    pub ratio: String,
    pub j: u64,
    pub bounds: Vec<BoundEntry>,
}

impl SturmFile {
    pub fn trace_bound(&self, ell: u64) -> Option<i64> {
        self.bounds.iter().find(|b| b.ell == ell).map(|b| b.trace_bound)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimesFile {
    pub trace_bound: i64,
    pub excluded: Vec<String>,
    pub count: usize,
    pub primes: Vec<String>,
}
