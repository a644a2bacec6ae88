//! Enumeration of Γ_{g,h,r,s} by cell dimension.
//!
//! Contracting an internal edge that is not a loop and does not join two
//! marked vertices is the inverse of a vertex splitting, and it never leaves
//! Γ_{g,h,r,s}. Graphs without such an edge are *seeds*: a lone unmarked
//! vertex carrying loops and tails when `s = 0`, or graphs whose vertices
//! are all marked when `s > 0`. Every class is therefore reached from the
//! seeds by repeated splitting, one internal edge (one dimension down) per
//! round. Each round deduplicates by canonical code.

use std::collections::{BTreeMap, HashMap};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canonical::{canonical_form, CanonicalCode};
use crate::complex::{is_orientable, splittings};
use crate::graph::{HalfEdge, RibbonGraph};
use crate::signature::{Signature, SignatureError};

/// Which labelings of the tails along the boundary are enumerated.
///
/// Splitting never changes the cyclic sequence of tail labels met along a
/// boundary cycle, so the complex is a direct sum over these arrangements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TailOrder {
    /// Tail labels increase cyclically along every boundary cycle.
    #[default]
    Boundary,
    /// Every labeling.
    Free,
}

impl TailOrder {
    pub fn admits(self, g: &RibbonGraph) -> bool {
        match self {
            TailOrder::Free => true,
            TailOrder::Boundary => g.boundary_tail_sequences().iter().all(|seq| cyclically_increasing(seq)),
        }
    }
}

pub(crate) fn cyclically_increasing(seq: &[u32]) -> bool {
    let m = seq.len();
    (0..m).filter(|&j| seq[j] > seq[(j + 1) % m]).count() <= 1
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Limits {
    pub max_cells: Option<usize>,
    pub max_seconds: Option<f64>,
}

impl Limits {
    pub fn unlimited() -> Self {
        Limits::default()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnumerationError {
    #[error("invalid signature: {0}")]
    Signature(#[from] SignatureError),
    #[error("BUDGET_EXCEEDED: {cells} cells after {seconds:.1}s; the partial basis is unusable")]
    BudgetExceeded { cells: usize, seconds: f64 },
}

/// One orbi-cell: an isomorphism class stored in its canonical labeling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub code: CanonicalCode,
    pub graph: RibbonGraph,
    pub dim: u32,
    pub orientable: bool,
}

impl Cell {
    pub fn aut_order(&self) -> u64 {
        self.code.aut_order
    }
}

/// Cells of one signature, stratified by dimension and sorted by code.
#[derive(Debug, Clone)]
pub struct CellBasis {
    signature: Signature,
    tail_order: TailOrder,
    strata: BTreeMap<u32, Vec<Cell>>,
    index: HashMap<Vec<u32>, (u32, usize)>,
}

impl CellBasis {
    /// Assembles a basis from cells in any order.
    pub fn from_cells(signature: Signature, tail_order: TailOrder, cells: Vec<Cell>) -> Self {
        let mut strata: BTreeMap<u32, Vec<Cell>> = BTreeMap::new();
        for cell in cells {
            strata.entry(cell.dim).or_default().push(cell);
        }
        let mut index = HashMap::new();
        for (&d, cells) in strata.iter_mut() {
            cells.sort_by(|a, b| a.code.code.cmp(&b.code.code));
            cells.dedup_by(|a, b| a.code.code == b.code.code);
            for (k, c) in cells.iter().enumerate() {
                index.insert(c.code.code.clone(), (d, k));
            }
        }
        CellBasis { signature, tail_order, strata, index }
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn tail_order(&self) -> TailOrder {
        self.tail_order
    }

    pub fn cells(&self, d: u32) -> &[Cell] {
        self.strata.get(&d).map_or(&[], Vec::as_slice)
    }

    pub fn strata(&self) -> &BTreeMap<u32, Vec<Cell>> {
        &self.strata
    }

    pub fn iter(&self) -> impl Iterator<Item = &Cell> {
        self.strata.values().flatten()
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn max_dim(&self) -> Option<u32> {
        self.strata.keys().next_back().copied()
    }

    /// Indices (within `cells(d)`) of the orientable classes, which span `C_d`.
    pub fn generators(&self, d: u32) -> Vec<usize> {
        self.cells(d).iter().enumerate().filter(|(_, c)| c.orientable).map(|(k, _)| k).collect()
    }

    /// `(dimension, index)` of the class with this code.
    pub fn locate(&self, code: &[u32]) -> Option<(u32, usize)> {
        self.index.get(code).copied()
    }

    pub fn counts_by_dimension(&self) -> BTreeMap<u32, usize> {
        self.strata.iter().map(|(&d, c)| (d, c.len())).collect()
    }
}

pub fn counts_by_dimension(basis: &CellBasis) -> BTreeMap<u32, usize> {
    basis.counts_by_dimension()
}

type Found = (CanonicalCode, RibbonGraph);

fn canonicalized(g: &RibbonGraph) -> Found {
    let form = canonical_form(g);
    (form.code, g.relabel(&form.relabel))
}

fn dedup(mut found: Vec<Found>) -> Vec<Found> {
    found.par_sort_unstable_by(|a, b| a.0.code.cmp(&b.0.code));
    found.dedup_by(|a, b| a.0.code == b.0.code);
    found
}

/// Ordered valence vectors of length `parts`, entries ≥ `min`, summing to `total`.
fn compositions(total: usize, parts: usize, min: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, parts: usize, min: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let mut v = min;
        while v + min * (parts - 1) <= left {
            cur.push(v);
            rec(left - v, parts - 1, min, cur, out);
            cur.pop();
            v += 1;
        }
    }
    let mut out = Vec::new();
    rec(total, parts, min, &mut Vec::new(), &mut out);
    out
}

/// Pairings of the half-edges of fixed vertex blocks, with `r` labeled tails.
fn glue_blocks(next: &[HalfEdge], r: usize, mut emit: impl FnMut(Vec<HalfEdge>, Vec<HalfEdge>)) {
    const UNSET: u32 = u32::MAX;
    fn rec(
        pair: &mut Vec<u32>,
        tails: &mut Vec<u32>,
        free: usize,
        tails_left: usize,
        emit: &mut dyn FnMut(Vec<HalfEdge>, Vec<HalfEdge>),
    ) {
        let Some(x) = pair.iter().position(|&p| p == UNSET) else {
            emit(pair.clone(), tails.clone());
            return;
        };
        if tails_left > 0 {
            for j in 0..tails.len() {
                if tails[j] == UNSET {
                    tails[j] = x as u32;
                    pair[x] = x as u32;
                    rec(pair, tails, free - 1, tails_left - 1, emit);
                    pair[x] = UNSET;
                    tails[j] = UNSET;
                }
            }
        }
        if free - 1 > tails_left {
            for y in x + 1..pair.len() {
                if pair[y] == UNSET {
                    pair[x] = y as u32;
                    pair[y] = x as u32;
                    rec(pair, tails, free - 2, tails_left, emit);
                    pair[x] = UNSET;
                    pair[y] = UNSET;
                }
            }
        }
    }
    let n = next.len();
    let mut pair = vec![UNSET; n];
    let mut tails = vec![UNSET; r];
    rec(&mut pair, &mut tails, n, r, &mut emit);
}

/// Graphs of `sig` with no contractible edge, canonicalized and deduplicated.
pub fn seeds(sig: Signature, order: TailOrder) -> Vec<(CanonicalCode, RibbonGraph)> {
    let e = sig.min_edges();
    if e < 0 {
        return Vec::new();
    }
    let total = (2 * e + sig.r as i64) as usize;
    let valence_vectors = if sig.s == 0 {
        if total < 3 {
            Vec::new()
        } else {
            vec![vec![total]]
        }
    } else {
        compositions(total, sig.s as usize, 1)
    };
    let mut found = Vec::new();
    for vals in valence_vectors {
        let mut next = Vec::with_capacity(total);
        let mut starts = Vec::new();
        for &n in &vals {
            let base = next.len() as u32;
            starts.push(base);
            next.extend((0..n as u32).map(|j| base + (j + 1) % n as u32));
        }
        let mark_edges = if sig.s == 0 { Vec::new() } else { starts };
        glue_blocks(&next, sig.r as usize, |pair, tails| {
            let Ok(g) = RibbonGraph::from_parts(next.clone(), pair, tails, mark_edges.clone()) else {
                return;
            };
            if g.signature() == sig && order.admits(&g) {
                found.push(canonicalized(&g));
            }
        });
    }
    dedup(found)
}

/// All classes of Γ_{g,h,r,s} admitted by `order`.
pub fn enumerate(sig: Signature, order: TailOrder, limits: &Limits) -> Result<CellBasis, EnumerationError> {
    let sig = Signature::new(sig.g, sig.h, sig.r, sig.s)?;
    let clock = Instant::now();
    let over_budget = |cells: usize| {
        let seconds = clock.elapsed().as_secs_f64();
        let too_many = limits.max_cells.is_some_and(|m| cells > m);
        let too_slow = limits.max_seconds.is_some_and(|m| seconds > m);
        if too_many || too_slow {
            Err(EnumerationError::BudgetExceeded { cells, seconds })
        } else {
            Ok(())
        }
    };

    let mut level = seeds(sig, order);
    let mut all: Vec<Found> = Vec::new();
    while !level.is_empty() {
        over_budget(all.len() + level.len())?;
        let children: Vec<Found> = level
            .par_iter()
            .flat_map_iter(|(_, g)| splittings(g).into_iter().map(|sp| canonicalized(&sp.graph)))
            .collect();
        all.append(&mut level);
        level = dedup(children);
    }
    over_budget(all.len())?;

    let dim_n = sig.moduli_dim();
    let cells: Vec<Cell> = all
        .into_par_iter()
        .map(|(code, graph)| {
            let dim = graph.cell_dimension();
            debug_assert_eq!(dim as i64, dim_n - graph.internal_edges() as i64);
            let orientable = is_orientable(&graph);
            Cell { code, graph, dim, orientable }
        })
        .collect();
    Ok(CellBasis::from_cells(sig, order, cells))
}
