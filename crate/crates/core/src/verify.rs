//! The standard verification suite.

use std::collections::BTreeMap;
use std::time::Instant;

use serde_json::{json, Value};
use thiserror::Error;

use crate::complex::ComplexError;
use crate::enumerate::{enumerate, EnumerationError, Limits, TailOrder};
use crate::homology::{auto_mode, boundary_matrices, d_squared_defect, homology, HomologyResult};
use crate::signature::Signature;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Signatures checked by `verify --suite standard`.
pub fn standard_suite() -> Vec<Signature> {
    let mut out = Vec::new();
    let mut push = |g, h, r, s| out.push(Signature::new(g, h, r, s).expect("suite signatures are valid"));
    (3..=8).for_each(|r| push(0, 1, r, 0));
    (1..=5).for_each(|r| push(0, 1, r, 1));
    (1..=3).for_each(|r| push(0, 1, r, 2));
    (1..=4).for_each(|r| push(0, 2, r, 0));
    push(0, 2, 0, 1);
    push(0, 3, 0, 0);
    (0..=3).for_each(|r| push(1, 1, r, 0));
    push(1, 1, 0, 1);
    out
}

#[derive(Debug, Clone)]
pub struct SuiteEntry {
    pub homology: HomologyResult,
    /// First nonzero entry of some `∂_d∘∂_{d+1}` as `(d, row, col, value)`.
    pub d_squared_defect: Option<(u32, usize, usize, i128)>,
    /// Classes whose dimension differs from `dim N − E`.
    pub dimension_defects: usize,
    pub seconds: f64,
}

impl SuiteEntry {
    /// Plain Euler characteristic against the Betti numbers; checked only
    /// with tails, where every class is a chain generator.
    pub fn euler_consistent(&self) -> Option<bool> {
        (self.homology.signature.r > 0).then(|| self.homology.euler == self.homology.betti_euler())
    }

    pub fn passed(&self) -> bool {
        self.d_squared_defect.is_none() && self.dimension_defects == 0 && self.euler_consistent() != Some(false)
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.homology.to_json();
        v["d_squared_zero"] = json!(self.d_squared_defect.is_none());
        v["dimension_identity"] = json!(self.dimension_defects == 0);
        v["euler_consistent"] = json!(self.euler_consistent());
        v["passed"] = json!(self.passed());
        v
    }
}

pub fn verify_signature(sig: Signature, order: TailOrder, limits: &Limits) -> Result<SuiteEntry, VerifyError> {
    let clock = Instant::now();
    let basis = enumerate(sig, order, limits)?;
    let top = sig.moduli_dim();
    let dimension_defects = basis
        .iter()
        .filter(|c| c.graph.cell_dimension() as i64 != top - c.graph.internal_edges() as i64 || c.dim != c.graph.cell_dimension())
        .count();
    let mode = auto_mode(sig);
    let matrices = boundary_matrices(&basis, mode)?;
    let d_squared_defect = d_squared_defect(&matrices);
    let homology = homology(&basis, &matrices, mode)?;
    Ok(SuiteEntry { homology, d_squared_defect, dimension_defects, seconds: clock.elapsed().as_secs_f64() })
}

/// Runs every suite signature, stopping at the first hard error.
pub fn run_suite(order: TailOrder, limits: &Limits) -> Result<BTreeMap<[u32; 4], SuiteEntry>, VerifyError> {
    standard_suite()
        .into_iter()
        .map(|sig| Ok((sig.as_array(), verify_signature(sig, order, limits)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_shape() {
        let suite = standard_suite();
        assert_eq!(suite.len(), 25);
        assert!(suite.iter().all(|s| !s.is_excluded()));
    }

    #[test]
    fn small_entry_passes() {
        let e = verify_signature(Signature::new_unchecked(0, 1, 5, 0), TailOrder::Boundary, &Limits::unlimited()).unwrap();
        assert!(e.passed());
        assert_eq!(e.euler_consistent(), Some(true));
        let e = verify_signature(Signature::new_unchecked(1, 1, 0, 0), TailOrder::Boundary, &Limits::unlimited()).unwrap();
        assert_eq!(e.euler_consistent(), None);
        assert!(e.passed());
    }
}
