//! Orientations, vertex splittings and the boundary operator.
//!
//! An orientation of the cell of a graph is an ordering of its slot list:
//! for each vertex in turn, its germs followed by gauge slots (three for an
//! unmarked vertex, one for a marked vertex). A block of a vertex has the
//! parity of that vertex's cell factor, so permuting slots changes the
//! orientation by the sign of the permutation.
//!
//! Splitting vertex `v` with germs `c_0 … c_{n−1}` at offset `i` and arc
//! length `k` yields `v′ = (c_i … c_{i+k−1}, e′)` and
//! `v″ = (e″, c_{i+k} … c_{i+n−1})` joined by the new edge `{e′, e″}`. The
//! split cell is a codimension-one face; with the outward normal first, its
//! induced orientation is `(−1)^{i(n−i) + k + S}` times the declared slot
//! list in which the block of `v` is replaced by the blocks of `v′` and
//! `v″`, where `S` is the number of slots preceding the block of `v`.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canonical::{automorphisms, canonical_form, canonical_isomorphisms};
use crate::enumerate::CellBasis;
use crate::graph::{HalfEdge, RibbonGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Germ(HalfEdge),
    /// `(vertex, index)` of a gauge symbol.
    Gauge(u32, u8),
}

pub type SlotList = Vec<Slot>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coefficients {
    Integer,
    Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("NOT_AUTOMORPHISM: the map does not preserve the graph structure")]
    NotAutomorphism,
    #[error("MODE_ERROR: integer coefficients need r > 0 (r = 0 has orbifold cells)")]
    IntegerModeWithoutTails,
    #[error("split graph {0} is missing from the cell basis")]
    MissingClass(String),
}

fn gauge_count(g: &RibbonGraph, v: u32) -> usize {
    if g.is_marked(v) {
        1
    } else {
        3
    }
}

fn block_len(g: &RibbonGraph, v: u32) -> usize {
    g.valence(v) + gauge_count(g, v)
}

/// Reference slot list: vertices in order, germs from the minimal half-edge.
pub fn reference_slots(g: &RibbonGraph) -> SlotList {
    let mut slots = Vec::with_capacity(g.half_edges() as usize + 3 * g.vertex_count());
    for (v, germs) in g.vertices().iter().enumerate() {
        slots.extend(germs.iter().map(|&x| Slot::Germ(x)));
        for j in 0..gauge_count(g, v as u32) {
            slots.push(Slot::Gauge(v as u32, j as u8));
        }
    }
    slots
}

fn permutation_sign(positions: &[usize]) -> i8 {
    let mut seen = vec![false; positions.len()];
    let mut transpositions = 0;
    for start in 0..positions.len() {
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = positions[x];
            len += 1;
        }
        if len > 0 {
            transpositions += len - 1;
        }
    }
    if transpositions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Sign of the permutation carrying `declared` (already expressed in the
/// slots of `target`) onto the reference slot list of `target`.
pub fn slot_sign(target: &RibbonGraph, declared: &[Slot]) -> i8 {
    let reference = reference_slots(target);
    assert_eq!(reference.len(), declared.len(), "slot lists of different graphs");
    let index: HashMap<Slot, usize> = reference.iter().enumerate().map(|(k, &s)| (s, k)).collect();
    let positions: Vec<usize> = declared.iter().map(|s| index[s]).collect();
    permutation_sign(&positions)
}

/// Pushes a slot list of `source` through an isomorphism `phi` onto `target`.
pub fn transport_slots(source: &RibbonGraph, target: &RibbonGraph, phi: &[HalfEdge], slots: &[Slot]) -> SlotList {
    slots
        .iter()
        .map(|&s| match s {
            Slot::Germ(x) => Slot::Germ(phi[x as usize]),
            Slot::Gauge(v, j) => {
                let x = source.vertices()[v as usize][0];
                Slot::Gauge(target.vertex_of(phi[x as usize]), j)
            }
        })
        .collect()
}

fn is_automorphism(g: &RibbonGraph, phi: &[HalfEdge]) -> bool {
    let n = g.half_edges() as usize;
    if phi.len() != n {
        return false;
    }
    let mut hit = vec![false; n];
    for &y in phi {
        if y as usize >= n || hit[y as usize] {
            return false;
        }
        hit[y as usize] = true;
    }
    (0..n as u32).all(|x| {
        phi[g.next(x) as usize] == g.next(phi[x as usize])
            && phi[g.pair(x) as usize] == g.pair(phi[x as usize])
            && g.tail_label(x) == g.tail_label(phi[x as usize])
            && g.mark_at(g.vertex_of(x)) == g.mark_at(g.vertex_of(phi[x as usize]))
    })
}

/// Orientation character of an automorphism.
pub fn automorphism_sign(g: &RibbonGraph, phi: &[HalfEdge]) -> Result<i8, ComplexError> {
    if !is_automorphism(g, phi) {
        return Err(ComplexError::NotAutomorphism);
    }
    let moved = transport_slots(g, g, phi, &reference_slots(g));
    Ok(slot_sign(g, &moved))
}

/// A cell contributes a generator iff no automorphism reverses it.
pub fn is_orientable(g: &RibbonGraph) -> bool {
    automorphisms(g).iter().skip(1).all(|phi| automorphism_sign(g, phi) == Ok(1))
}

#[derive(Debug, Clone)]
pub struct Splitting {
    pub vertex: u32,
    pub offset: u32,
    pub arc: u32,
    pub graph: RibbonGraph,
    /// Declared orientation of `graph`, in its own slots.
    pub declared: SlotList,
    /// Outward-normal correction `(−1)^{i(n−i) + k + S}`.
    pub face_sign: i8,
}

fn admissible_arcs(n: usize, marked: bool) -> Vec<(usize, usize)> {
    let mut arcs = Vec::new();
    if marked {
        if n >= 2 {
            for k in 0..=n - 2 {
                for i in 0..n {
                    arcs.push((k, i));
                }
            }
        }
    } else if n >= 4 {
        for k in 2..=n - 2 {
            for i in 0..n {
                // (k, i) and (n − k, i + k) describe the same split.
                if (k, i) < (n - k, (i + k) % n) {
                    arcs.push((k, i));
                }
            }
        }
    }
    arcs
}

/// Every admissible vertex splitting of `g`.
pub fn splittings(g: &RibbonGraph) -> Vec<Splitting> {
    let h = g.half_edges();
    let (e1, e2) = (h, h + 1);
    let mut out = Vec::new();
    let mut preceding = 0usize;
    for v in 0..g.vertex_count() as u32 {
        let germs = &g.vertices()[v as usize];
        let n = germs.len();
        let marked = g.is_marked(v);
        for (k, i) in admissible_arcs(n, marked) {
            let c = |j: usize| germs[(i + j) % n];
            let mut next = g.sigma().to_vec();
            next.extend([0, 0]);
            let mut pair = g.alpha().to_vec();
            pair.extend([e2, e1]);
            // v′ = (c_i … c_{i+k−1}, e′)
            let mut first: Vec<HalfEdge> = (0..k).map(c).collect();
            first.push(e1);
            // v″ = (e″, c_{i+k} … c_{i+n−1})
            let mut second = vec![e2];
            second.extend((k..n).map(c));
            for cycle in [&first, &second] {
                for (a, &x) in cycle.iter().enumerate() {
                    next[x as usize] = cycle[(a + 1) % cycle.len()];
                }
            }
            let mut mark_edges = g.mark_edges();
            if let Some(j) = g.mark_at(v) {
                mark_edges[j as usize] = e1;
            }
            let split = RibbonGraph::from_parts(next, pair, g.tails().to_vec(), mark_edges)
                .expect("splitting preserves validity");

            let mut declared = Vec::with_capacity(split.half_edges() as usize + 3 * split.vertex_count());
            for w in 0..g.vertex_count() as u32 {
                if w == v {
                    for part in [&first, &second] {
                        declared.extend(part.iter().map(|&x| Slot::Germ(x)));
                        let nv = split.vertex_of(part[0]);
                        for j in 0..gauge_count(&split, nv) {
                            declared.push(Slot::Gauge(nv, j as u8));
                        }
                    }
                } else {
                    let wg = &g.vertices()[w as usize];
                    declared.extend(wg.iter().map(|&x| Slot::Germ(x)));
                    let nw = split.vertex_of(wg[0]);
                    for j in 0..gauge_count(&split, nw) {
                        declared.push(Slot::Gauge(nw, j as u8));
                    }
                }
            }
            let parity = i * (n - i) + k + preceding;
            out.push(Splitting {
                vertex: v,
                offset: i as u32,
                arc: k as u32,
                graph: split,
                declared,
                face_sign: if parity.is_multiple_of(2) { 1 } else { -1 },
            });
        }
        preceding += block_len(g, v);
    }
    out
}

/// Incidence of a splitting on the stored representative of its class.
///
/// `representative` must be the canonical relabeling of `split.graph`.
pub fn incidence(split: &Splitting, representative: &RibbonGraph, relabel: &[HalfEdge]) -> i8 {
    let moved = transport_slots(&split.graph, representative, relabel, &split.declared);
    split.face_sign * slot_sign(representative, &moved)
}

/// Sparse exact-integer matrix of `∂_d : C_d → C_{d−1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryMatrix {
    pub dim: u32,
    pub rows: usize,
    pub cols: usize,
    /// `(row, col, value)` with nonzero values, sorted by column then row.
    pub entries: Vec<(usize, usize, i64)>,
}

impl BoundaryMatrix {
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn column(&self, c: usize) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.entries.iter().filter(move |e| e.1 == c).map(|e| (e.0, e.2))
    }

    /// `self ∘ rhs` as a dense check; both factors must be composable.
    pub fn compose(&self, rhs: &BoundaryMatrix) -> Vec<(usize, usize, i128)> {
        assert_eq!(self.cols, rhs.rows, "matrices are not composable");
        let mut by_row: Vec<Vec<(usize, i64)>> = vec![Vec::new(); self.cols];
        for &(r, c, v) in &self.entries {
            by_row[c].push((r, v));
        }
        let mut acc: HashMap<(usize, usize), i128> = HashMap::new();
        for &(mid, c, v) in &rhs.entries {
            for &(r, w) in &by_row[mid] {
                *acc.entry((r, c)).or_default() += v as i128 * w as i128;
            }
        }
        let mut out: Vec<_> = acc.into_iter().filter(|&(_, v)| v != 0).map(|((r, c), v)| (r, c, v)).collect();
        out.sort_unstable();
        out
    }

    /// Coordinate text: header `%dims d rows cols`, then `row col value`.
    pub fn to_coordinate_text(&self) -> String {
        let mut s = format!("%dims {} {} {}\n", self.dim, self.rows, self.cols);
        for &(r, c, v) in &self.entries {
            s.push_str(&format!("{r} {c} {v}\n"));
        }
        s
    }
}

/// Which orientation bookkeeping to use when assembling `∂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum SignRule {
    /// Slot permutation times the outward-normal factor.
    Geometric,
    /// Slot permutation alone.
    #[cfg_attr(not(test), allow(dead_code))]
    SlotOnly,
}

/// Builds `∂_d` over the chain basis of `basis` (orientable classes).
pub fn boundary_matrix(basis: &CellBasis, d: u32, mode: Coefficients) -> Result<BoundaryMatrix, ComplexError> {
    boundary_matrix_with(basis, d, mode, SignRule::Geometric)
}

pub(crate) fn boundary_matrix_with(
    basis: &CellBasis,
    d: u32,
    mode: Coefficients,
    rule: SignRule,
) -> Result<BoundaryMatrix, ComplexError> {
    if mode == Coefficients::Integer && basis.signature().r == 0 {
        return Err(ComplexError::IntegerModeWithoutTails);
    }
    let cols = basis.generators(d);
    let rows = if d == 0 { Vec::new() } else { basis.generators(d - 1) };
    let row_index: HashMap<usize, usize> = rows.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let cells = basis.cells(d);
    let lower = if d == 0 { &[][..] } else { basis.cells(d - 1) };

    let columns: Result<Vec<Vec<(usize, i64)>>, ComplexError> = cols
        .par_iter()
        .map(|&ci| {
            let mut col: HashMap<usize, i64> = HashMap::new();
            for split in splittings(&cells[ci].graph) {
                let form = canonical_form(&split.graph);
                let Some(target) = basis.locate(&form.code.code) else {
                    return Err(ComplexError::MissingClass(split.graph.to_string()));
                };
                debug_assert_eq!(target.0, d - 1);
                let Some(&row) = row_index.get(&target.1) else {
                    continue; // non-orientable target
                };
                let rep = &lower[target.1].graph;
                let eps = match rule {
                    SignRule::Geometric => incidence(&split, rep, &form.relabel),
                    SignRule::SlotOnly => {
                        let moved = transport_slots(&split.graph, rep, &form.relabel, &split.declared);
                        slot_sign(rep, &moved)
                    }
                };
                *col.entry(row).or_default() += eps as i64;
            }
            let mut col: Vec<(usize, i64)> = col.into_iter().filter(|&(_, v)| v != 0).collect();
            col.sort_unstable();
            Ok(col)
        })
        .collect();

    let mut entries = Vec::new();
    for (c, col) in columns?.into_iter().enumerate() {
        entries.extend(col.into_iter().map(|(r, v)| (r, c, v)));
    }
    Ok(BoundaryMatrix { dim: d, rows: rows.len(), cols: cols.len(), entries })
}

/// Checks that an incidence does not depend on the isomorphism chosen onto
/// the representative. Returns every sign obtained.
pub fn incidence_signs_all_isomorphisms(split: &Splitting) -> Vec<i8> {
    let form = canonical_form(&split.graph);
    let rep = split.graph.relabel(&form.relabel);
    canonical_isomorphisms(&split.graph, &form).iter().map(|iso| incidence(split, &rep, iso)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::is_isomorphic;
    use crate::graph::fixtures::*;

    #[test]
    fn automorphism_signs() {
        let g = four_valent_torus();
        let rotation: Vec<u32> = (0..4).map(|x| g.next(x)).collect();
        assert_eq!(automorphism_sign(&g, &rotation), Ok(-1));
        let id: Vec<u32> = (0..4).collect();
        assert_eq!(automorphism_sign(&g, &id), Ok(1));
        assert!(!is_orientable(&g));

        let t = theta_one_boundary();
        // Vertex swap 0↔3, 1↔4, 2↔5.
        let swap = vec![3, 4, 5, 0, 1, 2];
        assert_eq!(automorphism_sign(&t, &swap), Ok(1));
        assert!(is_orientable(&t));

        assert!(is_orientable(&corolla(5)));
        assert_eq!(automorphism_sign(&t, &[1, 0, 2, 3, 4, 5]), Err(ComplexError::NotAutomorphism));
    }

    #[test]
    fn corolla_splittings() {
        for n in 4..9u32 {
            let s = splittings(&corolla(n));
            assert_eq!(s.len() as u32, n * (n - 3) / 2);
            for sp in &s {
                assert_eq!(sp.graph.signature(), corolla(n).signature());
                assert_eq!(sp.graph.cell_dimension() + 1, corolla(n).cell_dimension());
            }
        }
        let s = splittings(&corolla(5));
        for a in 0..s.len() {
            for b in a + 1..s.len() {
                assert!(!is_isomorphic(&s[a].graph, &s[b].graph));
            }
        }
    }

    #[test]
    fn torus_vertex_splits_into_theta() {
        let s = splittings(&four_valent_torus());
        assert_eq!(s.len(), 2);
        for sp in &s {
            assert!(is_isomorphic(&sp.graph, &theta_one_boundary()));
        }
    }

    #[test]
    fn marked_vertex_with_two_tails() {
        let g = graph(&[&[0, 1]], &[], &[0, 1], &[0]);
        let s = splittings(&g);
        assert_eq!(s.len(), 2);
        assert!(s.iter().all(|sp| sp.arc == 0));
        assert!(!is_isomorphic(&s[0].graph, &s[1].graph));
        for sp in &s {
            assert_eq!(sp.graph.cell_dimension(), 0);
            assert_eq!(sp.graph.signature(), g.signature());
        }
    }

    #[test]
    fn trivalent_graphs_do_not_split() {
        assert!(splittings(&theta_one_boundary()).is_empty());
        assert!(splittings(&corolla(3)).is_empty());
        // A univalent marked vertex has no admissible arc either.
        assert!(splittings(&graph(&[&[0]], &[], &[0], &[0])).is_empty());
    }

    #[test]
    fn both_arc_parametrizations_agree() {
        // Recompute the face orientation for the complementary description
        // (n − k, i + k) and check it matches the one kept.
        let g = corolla(6);
        let n = 6usize;
        for sp in splittings(&g) {
            let (k, i) = (sp.arc as usize, sp.offset as usize);
            let (k2, i2) = (n - k, (i + k) % n);
            let parity = i2 * (n - i2) + k2;
            let other_face: i8 = if parity.is_multiple_of(2) { 1 } else { -1 };
            let germs = &g.vertices()[0];
            let c = |j: usize| germs[(i2 + j) % n];
            // Locate e′/e″ as the two new half-edges and rebuild the declared
            // list (c_{i2} …, e″, gauge(v_a)) (e′, c_{i2+k2} …, gauge(v_b)).
            let h = g.half_edges();
            let va = sp.graph.vertex_of(h + 1);
            let vb = sp.graph.vertex_of(h);
            let mut declared: Vec<Slot> = (0..k2).map(|j| Slot::Germ(c(j))).collect();
            declared.push(Slot::Germ(h + 1));
            declared.extend((0..3).map(|j| Slot::Gauge(va, j)));
            declared.push(Slot::Germ(h));
            declared.extend((k2..n).map(|j| Slot::Germ(c(j))));
            declared.extend((0..3).map(|j| Slot::Gauge(vb, j)));
            let ours = sp.face_sign * slot_sign(&sp.graph, &sp.declared);
            let theirs = other_face * slot_sign(&sp.graph, &declared);
            assert_eq!(ours, theirs, "arc ({k},{i})");
        }
    }

    #[test]
    fn incidence_is_independent_of_isomorphism() {
        // Splits of the torus vertex land on theta, which has 6 automorphisms.
        for sp in splittings(&four_valent_torus()) {
            let signs = incidence_signs_all_isomorphisms(&sp);
            assert_eq!(signs.len(), 6);
            assert!(signs.iter().all(|&s| s == signs[0]));
        }
    }
}
