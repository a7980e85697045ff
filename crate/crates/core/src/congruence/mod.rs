//! Eigenvalue tables, an elliptic-curve oracle for the weight-(2,2) form,
//! the spin lift to a paramodular form, and congruence certificates.

mod curve;
mod jr;
mod qexp;
mod table;
mod verify;

#[cfg(test)]
mod tests;

use alloc::string::String;

use crate::rqfield::RqError;

pub use curve::{CurveError, EllipticCurveF};
pub use jr::{jr_compose, JRLiftTable};
pub use qexp::{qexp_product, qexp_product_check, QExp};
pub use table::{
    from_sqrt5_basis, parse_paramodular, parse_table, to_sqrt5_basis, CoeffDescriptor, EigenvalueTable, ParamodularTable, ParseError,
    TableError,
};
pub use verify::{
    describe_map, reduce_entry, render_residue, verify_congruence, verify_mod2, verify_theorem1, CompareOptions, CongruenceReport,
    ReportRow, SubCheck, Theorem1Inputs, Verdict, THEOREM1_DIMS,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CongruenceError {
    #[error("{form} has no eigenvalue at {prime}")]
    MissingPrime { form: String, prime: String },
    #[error("{0} has no Atkin–Lehner sign at its level")]
    MissingAtkinLehner(String),
    #[error("residue map does not reduce the coefficient field of {0}")]
    Incompatible(String),
    #[error(transparent)]
    Field(#[from] RqError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}
