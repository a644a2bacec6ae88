//! Dual ribbon graph complexes of moduli spaces of bordered Riemann surfaces.
//!
//! Cells are indexed by two-colored ribbon graphs: unmarked vertices are
//! discs, marked vertices are discs with one interior marked point, internal
//! edges are boundary nodes and tails are boundary marked points. The chain
//! differential sums over vertex splittings with orientation signs, and the
//! homology is computed exactly via Smith normal form.

pub mod canonical;
pub mod catalog;
pub mod complex;
pub mod enumerate;
pub mod graph;
pub mod homology;
pub mod oracles;
pub mod signature;
pub mod verify;

pub use canonical::{canonical_code, canonical_form, is_isomorphic, CanonicalCode};
pub use complex::{boundary_matrix, is_orientable, splittings, BoundaryMatrix, Coefficients};
pub use enumerate::{enumerate, CellBasis, Limits, TailOrder};
pub use homology::{auto_mode, homology, smith_normal_form, HomologyResult, IntMatrix};
pub use graph::{GraphJson, RibbonGraph, ValidationError, ViolationKind};
pub use signature::Signature;
