//! Two-colored ribbon graphs in half-edge form.
//!
//! A graph on `H` half-edges is a pair of permutations: `next` (σ), whose
//! cycles are the vertices with their cyclic order of germs, and `pair` (α),
//! an involution whose 2-cycles are internal edges and whose fixed points are
//! the labeled tails. Vertices carrying an interior mark form `V₁`; the rest
//! form `V₀`.
//!
//! Vertex `v` is the `v`-th cycle of σ when cycles are listed with their
//! minimal half-edge first and sorted by that minimum.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::signature::Signature;

pub type HalfEdge = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ViolationKind {
    NonPermutation,
    NonInvolution,
    TailMismatch,
    MarkIndex,
    ValenceV0,
    ValenceV1,
    Disconnected,
    BadSignature,
}

impl ViolationKind {
    pub fn code(self) -> &'static str {
        match self {
            ViolationKind::NonPermutation => "NON_PERMUTATION",
            ViolationKind::NonInvolution => "NON_INVOLUTION",
            ViolationKind::TailMismatch => "TAIL_MISMATCH",
            ViolationKind::MarkIndex => "MARK_INDEX",
            ViolationKind::ValenceV0 => "VALENCE_V0",
            ViolationKind::ValenceV1 => "VALENCE_V1",
            ViolationKind::Disconnected => "DISCONNECTED",
            ViolationKind::BadSignature => "BAD_SIGNATURE",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub detail: String,
}

impl Violation {
    fn new(kind: ViolationKind, detail: impl Into<String>) -> Self {
        Violation { kind, detail: detail.into() }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind.code(), self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid ribbon graph: {}", .violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
pub struct ValidationError {
    pub violations: Vec<Violation>,
}

impl ValidationError {
    pub fn kinds(&self) -> Vec<ViolationKind> {
        self.violations.iter().map(|v| v.kind).collect()
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }
}

/// On-disk graph record.
///
/// `sigma` lists vertex cycles, `alpha` the internal edges, `tails[j]` the
/// half-edge of tail `j + 1`, and `marks[j]` the index (into `sigma`) of the
/// vertex carrying interior mark `j + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub sigma: Vec<Vec<u32>>,
    pub alpha: Vec<Vec<u32>>,
    pub tails: Vec<u32>,
    pub marks: Vec<u32>,
}

/// A validated member of Γ_{g,h,r,s}. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RibbonGraph {
    next: Vec<HalfEdge>,
    pair: Vec<HalfEdge>,
    tails: Vec<HalfEdge>,
    marks: Vec<u32>,
    vertex_of: Vec<u32>,
    vertices: Vec<Vec<HalfEdge>>,
    mark_of_vertex: Vec<Option<u32>>,
    signature: Signature,
}

fn permutation_cycles(perm: &[HalfEdge]) -> Vec<Vec<HalfEdge>> {
    let mut seen = vec![false; perm.len()];
    let mut cycles = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cycle.push(x as HalfEdge);
            x = perm[x] as usize;
        }
        cycles.push(cycle);
    }
    // Scanning starts in increasing order already yields min-first cycles
    // sorted by their minimum.
    cycles
}

impl RibbonGraph {
    /// Builds and validates a graph from raw permutations.
    ///
    /// `mark_edges[j]` is any half-edge at the vertex carrying interior mark
    /// `j + 1`; this keeps marks stable under relabeling.
    pub fn from_parts(
        next: Vec<HalfEdge>,
        pair: Vec<HalfEdge>,
        tails: Vec<HalfEdge>,
        mark_edges: Vec<HalfEdge>,
    ) -> Result<Self, ValidationError> {
        use ViolationKind::*;
        let n = next.len();
        let mut violations = Vec::new();

        if n == 0 {
            violations.push(Violation::new(NonPermutation, "no half-edges"));
            return Err(ValidationError { violations });
        }
        let mut hit = vec![false; n];
        for (x, &y) in next.iter().enumerate() {
            if (y as usize) >= n || hit[y as usize] {
                violations.push(Violation::new(
                    NonPermutation,
                    format!("sigma maps {x} to {y}, which is out of range or repeated"),
                ));
                return Err(ValidationError { violations });
            }
            hit[y as usize] = true;
        }
        if pair.len() != n {
            violations.push(Violation::new(NonInvolution, "alpha has the wrong length"));
            return Err(ValidationError { violations });
        }
        for (x, &y) in pair.iter().enumerate() {
            if (y as usize) >= n || pair[y as usize] as usize != x {
                violations.push(Violation::new(
                    NonInvolution,
                    format!("alpha is not an involution at half-edge {x}"),
                ));
                return Err(ValidationError { violations });
            }
        }

        let fixed: Vec<HalfEdge> = (0..n as HalfEdge).filter(|&x| pair[x as usize] == x).collect();
        let mut sorted_tails = tails.clone();
        sorted_tails.sort_unstable();
        let distinct = sorted_tails.windows(2).all(|w| w[0] != w[1]);
        if !distinct || sorted_tails != fixed {
            violations.push(Violation::new(
                TailMismatch,
                format!("tails {tails:?} differ from the fixed points {fixed:?} of alpha"),
            ));
        }

        let vertices = permutation_cycles(&next);
        let mut vertex_of = vec![0u32; n];
        for (v, cycle) in vertices.iter().enumerate() {
            for &x in cycle {
                vertex_of[x as usize] = v as u32;
            }
        }

        let mut marks = Vec::with_capacity(mark_edges.len());
        let mut mark_of_vertex = vec![None; vertices.len()];
        let mut marks_ok = true;
        for (j, &x) in mark_edges.iter().enumerate() {
            if (x as usize) >= n {
                violations.push(Violation::new(MarkIndex, format!("mark {} is out of range", j + 1)));
                marks_ok = false;
                continue;
            }
            let v = vertex_of[x as usize];
            if mark_of_vertex[v as usize].is_some() {
                violations.push(Violation::new(
                    MarkIndex,
                    format!("vertex {v} carries more than one interior mark"),
                ));
                marks_ok = false;
                continue;
            }
            mark_of_vertex[v as usize] = Some(j as u32);
            marks.push(v);
        }

        if marks_ok {
            for (v, cycle) in vertices.iter().enumerate() {
                let (need, kind) = match mark_of_vertex[v] {
                    None => (3, ValenceV0),
                    Some(_) => (1, ValenceV1),
                };
                if cycle.len() < need {
                    violations.push(Violation::new(
                        kind,
                        format!("vertex {v} has valence {} < {need}", cycle.len()),
                    ));
                }
            }
        }

        // Transitivity of <σ, α>.
        let mut reached = vec![false; n];
        let mut stack = vec![0usize];
        reached[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for y in [next[x] as usize, pair[x] as usize] {
                if !reached[y] {
                    reached[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        let connected = count == n;
        if !connected {
            violations.push(Violation::new(Disconnected, "sigma and alpha do not act transitively"));
        }

        let r = fixed.len();
        let mut signature = Signature::new_unchecked(0, 0, r as u32, marks.len() as u32);
        if connected {
            let boundary = boundary_perm(&next, &pair);
            let h = permutation_cycles(&boundary).len() as i64;
            let e = ((n - r) / 2) as i64;
            let chi = vertices.len() as i64 - e;
            let two_g = 2 - h - chi;
            if two_g < 0 || two_g % 2 != 0 {
                violations.push(Violation::new(
                    BadSignature,
                    format!("derived genus (2 - {h} - {chi})/2 is not a non-negative integer"),
                ));
            } else {
                signature = Signature::new_unchecked((two_g / 2) as u32, h as u32, r as u32, marks.len() as u32);
                if signature.is_excluded() {
                    violations.push(Violation::new(
                        BadSignature,
                        format!("{signature} is an excluded unstable signature"),
                    ));
                }
            }
        }

        if !violations.is_empty() {
            return Err(ValidationError { violations });
        }
        Ok(RibbonGraph { next, pair, tails, marks, vertex_of, vertices, mark_of_vertex, signature })
    }

    /// Validates a graph record. Marks index into `sigma` as written.
    pub fn from_json(raw: &GraphJson) -> Result<Self, ValidationError> {
        use ViolationKind::*;
        let n: usize = raw.sigma.iter().map(Vec::len).sum();
        let mut next = vec![u32::MAX; n];
        for cycle in &raw.sigma {
            if cycle.is_empty() {
                return Err(ValidationError {
                    violations: vec![Violation::new(NonPermutation, "empty sigma cycle")],
                });
            }
            for (k, &x) in cycle.iter().enumerate() {
                if (x as usize) >= n || next[x as usize] != u32::MAX {
                    return Err(ValidationError {
                        violations: vec![Violation::new(
                            NonPermutation,
                            format!("half-edge {x} is out of range or appears twice in sigma"),
                        )],
                    });
                }
                next[x as usize] = cycle[(k + 1) % cycle.len()];
            }
        }
        let mut pair: Vec<u32> = (0..n as u32).collect();
        let mut paired = vec![false; n];
        for edge in &raw.alpha {
            let ok = edge.len() == 2
                && edge[0] != edge[1]
                && edge.iter().all(|&x| (x as usize) < n && !paired[x as usize]);
            if !ok {
                return Err(ValidationError {
                    violations: vec![Violation::new(NonInvolution, format!("bad alpha entry {edge:?}"))],
                });
            }
            let (a, b) = (edge[0], edge[1]);
            pair[a as usize] = b;
            pair[b as usize] = a;
            paired[a as usize] = true;
            paired[b as usize] = true;
        }
        let mut mark_edges = Vec::with_capacity(raw.marks.len());
        for (j, &v) in raw.marks.iter().enumerate() {
            match raw.sigma.get(v as usize) {
                Some(cycle) => mark_edges.push(cycle[0]),
                None => {
                    return Err(ValidationError {
                        violations: vec![Violation::new(
                            MarkIndex,
                            format!("mark {} names vertex {v}, which does not exist", j + 1),
                        )],
                    })
                }
            }
        }
        RibbonGraph::from_parts(next, pair, raw.tails.clone(), mark_edges)
    }

    pub fn to_json(&self) -> GraphJson {
        let mut alpha = Vec::new();
        for x in 0..self.half_edges() {
            let y = self.pair(x);
            if x < y {
                alpha.push(vec![x, y]);
            }
        }
        GraphJson {
            sigma: self.vertices.clone(),
            alpha,
            tails: self.tails.clone(),
            marks: self.marks.clone(),
        }
    }

    pub fn half_edges(&self) -> u32 {
        self.next.len() as u32
    }

    #[inline]
    pub fn next(&self, x: HalfEdge) -> HalfEdge {
        self.next[x as usize]
    }

    #[inline]
    pub fn pair(&self, x: HalfEdge) -> HalfEdge {
        self.pair[x as usize]
    }

    pub fn sigma(&self) -> &[HalfEdge] {
        &self.next
    }

    pub fn alpha(&self) -> &[HalfEdge] {
        &self.pair
    }

    #[inline]
    pub fn is_tail(&self, x: HalfEdge) -> bool {
        self.pair[x as usize] == x
    }

    pub fn tails(&self) -> &[HalfEdge] {
        &self.tails
    }

    /// 1-based label of a tail, 0 for internal half-edges.
    pub fn tail_label(&self, x: HalfEdge) -> u32 {
        if !self.is_tail(x) {
            return 0;
        }
        self.tails.iter().position(|&t| t == x).map_or(0, |j| j as u32 + 1)
    }

    /// `marks()[j]` is the vertex carrying interior mark `j + 1`.
    pub fn marks(&self) -> &[u32] {
        &self.marks
    }

    pub fn vertices(&self) -> &[Vec<HalfEdge>] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    #[inline]
    pub fn vertex_of(&self, x: HalfEdge) -> u32 {
        self.vertex_of[x as usize]
    }

    pub fn valence(&self, v: u32) -> usize {
        self.vertices[v as usize].len()
    }

    /// Index `j` of the interior mark (label `j + 1`) at `v`, if any.
    pub fn mark_at(&self, v: u32) -> Option<u32> {
        self.mark_of_vertex[v as usize]
    }

    pub fn is_marked(&self, v: u32) -> bool {
        self.mark_of_vertex[v as usize].is_some()
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn internal_edges(&self) -> u32 {
        (self.half_edges() - self.tails.len() as u32) / 2
    }

    pub fn euler_char(&self) -> i64 {
        self.vertex_count() as i64 - self.internal_edges() as i64
    }

    /// Dimension of the cell: `Σ_{V₀}(val − 3) + Σ_{V₁}(val − 1)`.
    pub fn cell_dimension(&self) -> u32 {
        (0..self.vertex_count() as u32)
            .map(|v| {
                let gauge = if self.is_marked(v) { 1 } else { 3 };
                (self.valence(v) - gauge) as u32
            })
            .sum()
    }

    /// Cycles of `σ∘α` (apply α, then σ), each listed from its minimal
    /// half-edge, sorted by that minimum.
    pub fn boundary_cycles(&self) -> Vec<Vec<HalfEdge>> {
        permutation_cycles(&boundary_perm(&self.next, &self.pair))
    }

    /// Tail labels met along each boundary cycle, in boundary order.
    pub fn boundary_tail_sequences(&self) -> Vec<Vec<u32>> {
        self.boundary_cycles()
            .iter()
            .map(|c| c.iter().filter(|&&x| self.is_tail(x)).map(|&x| self.tail_label(x)).collect())
            .collect()
    }

    /// Applies a relabeling `perm[old] = new` of half-edge ids.
    pub fn relabel(&self, perm: &[HalfEdge]) -> RibbonGraph {
        let n = self.next.len();
        assert_eq!(perm.len(), n, "relabeling has the wrong size");
        let mut next = vec![0; n];
        let mut pair = vec![0; n];
        for x in 0..n {
            next[perm[x] as usize] = perm[self.next[x] as usize];
            pair[perm[x] as usize] = perm[self.pair[x] as usize];
        }
        let tails = self.tails.iter().map(|&t| perm[t as usize]).collect();
        let mark_edges = self.marks.iter().map(|&v| perm[self.vertices[v as usize][0] as usize]).collect();
        RibbonGraph::from_parts(next, pair, tails, mark_edges)
            .expect("relabeling preserves validity")
    }

    /// Half-edges at each mark's vertex, one per mark, for rebuilding.
    pub fn mark_edges(&self) -> Vec<HalfEdge> {
        self.marks.iter().map(|&v| self.vertices[v as usize][0]).collect()
    }
}

pub(crate) fn boundary_perm(next: &[HalfEdge], pair: &[HalfEdge]) -> Vec<HalfEdge> {
    (0..next.len()).map(|x| next[pair[x] as usize]).collect()
}

impl fmt::Display for RibbonGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", serde_json::to_string(&self.to_json()).map_err(|_| fmt::Error)?)
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn raw(sigma: &[&[u32]], alpha: &[&[u32]], tails: &[u32], marks: &[u32]) -> GraphJson {
        GraphJson {
            sigma: sigma.iter().map(|c| c.to_vec()).collect(),
            alpha: alpha.iter().map(|e| e.to_vec()).collect(),
            tails: tails.to_vec(),
            marks: marks.to_vec(),
        }
    }

    #[test]
    fn corolla_is_the_minimal_disc() {
        let g = corolla(3);
        assert_eq!(g.signature(), Signature::new_unchecked(0, 1, 3, 0));
        assert_eq!(g.cell_dimension(), 0);
        assert_eq!(g.boundary_cycles(), vec![vec![0, 1, 2]]);
        assert_eq!(corolla(5).cell_dimension(), 2);
    }

    #[test]
    fn two_valent_corolla_is_rejected() {
        let err = RibbonGraph::from_json(&raw(&[&[0, 1]], &[], &[0, 1], &[])).unwrap_err();
        assert!(err.has(ViolationKind::ValenceV0));
    }

    #[test]
    fn theta_boundaries() {
        let t1 = theta_one_boundary();
        assert_eq!(t1.boundary_cycles(), vec![vec![0, 4, 2, 3, 1, 5]]);
        assert_eq!(t1.signature(), Signature::new_unchecked(1, 1, 0, 0));
        assert_eq!(t1.cell_dimension(), 0);
        let t3 = theta_three_boundaries();
        assert_eq!(t3.boundary_cycles().len(), 3);
        assert_eq!(t3.signature(), Signature::new_unchecked(0, 3, 0, 0));
    }

    #[test]
    fn dumbbell_has_three_boundaries() {
        // (a1 a2 c1)(b1 b2 c2) with loops a, b and bridge c
        let g = graph(&[&[0, 1, 2], &[3, 4, 5]], &[[0, 1], [3, 4], [2, 5]], &[], &[]);
        assert_eq!(g.boundary_cycles().len(), 3);
        assert_eq!(g.signature(), Signature::new_unchecked(0, 3, 0, 0));
    }

    #[test]
    fn four_valent_vertex_is_a_torus() {
        let g = four_valent_torus();
        assert_eq!(g.boundary_cycles(), vec![vec![0, 3, 2, 1]]);
        assert_eq!(g.signature(), Signature::new_unchecked(1, 1, 0, 0));
        assert_eq!(g.cell_dimension(), 1);
    }

    #[test]
    fn three_discs_glued_pairwise() {
        let g = three_discs();
        assert_eq!(g.signature(), Signature::new_unchecked(0, 2, 4, 2));
        assert_eq!(g.cell_dimension(), 5);
        assert_eq!(g.signature().moduli_dim() - g.internal_edges() as i64, 5);
        let total: usize = g.boundary_tail_sequences().iter().map(Vec::len).sum();
        assert_eq!(total, 4);
    }

    #[test]
    fn structural_errors() {
        let e = RibbonGraph::from_json(&raw(&[&[0, 1, 1]], &[], &[], &[])).unwrap_err();
        assert_eq!(e.kinds(), vec![ViolationKind::NonPermutation]);
        let e = RibbonGraph::from_json(&raw(&[&[0, 1, 2]], &[&[0, 1], &[1, 2]], &[2], &[])).unwrap_err();
        assert_eq!(e.kinds(), vec![ViolationKind::NonInvolution]);
        let e = RibbonGraph::from_json(&raw(&[&[0, 1, 2]], &[&[0, 0]], &[1, 2], &[])).unwrap_err();
        assert_eq!(e.kinds(), vec![ViolationKind::NonInvolution]);
        let e = RibbonGraph::from_json(&raw(&[&[0, 1, 2]], &[], &[0, 1], &[])).unwrap_err();
        assert!(e.has(ViolationKind::TailMismatch));
        let e = RibbonGraph::from_json(&raw(&[&[0, 1, 2]], &[], &[0, 1, 2], &[3])).unwrap_err();
        assert!(e.has(ViolationKind::MarkIndex));
    }

    #[test]
    fn disconnected_and_unstable() {
        let e = RibbonGraph::from_json(&raw(&[&[0, 1, 2], &[3, 4, 5]], &[], &[0, 1, 2, 3, 4, 5], &[]))
            .unwrap_err();
        assert!(e.has(ViolationKind::Disconnected));
        // Bare annulus: one vertex with a loop and nothing else is 2-valent.
        let e = RibbonGraph::from_json(&raw(&[&[0, 1]], &[&[0, 1]], &[], &[])).unwrap_err();
        assert!(e.has(ViolationKind::ValenceV0));
        // A marked univalent vertex with one tail: (0,1,1,1), valid.
        let g = graph(&[&[0]], &[], &[0], &[0]);
        assert_eq!(g.signature(), Signature::new_unchecked(0, 1, 1, 1));
        // A marked vertex with a single loop is the punctured annulus (0,2,0,1).
        let g = graph(&[&[0, 1]], &[[0, 1]], &[], &[0]);
        assert_eq!(g.signature(), Signature::new_unchecked(0, 2, 0, 1));
        // Excluded: one marked 1-valent vertex without anything, (0,1,0,1), cannot
        // be formed; a marked vertex with two tails is (0,1,2,1).
        let g = graph(&[&[0, 1]], &[], &[0, 1], &[0]);
        assert_eq!(g.signature(), Signature::new_unchecked(0, 1, 2, 1));
    }

    #[test]
    fn json_round_trip() {
        let g = three_discs();
        let back = RibbonGraph::from_json(&g.to_json()).unwrap();
        assert_eq!(back, g);
        let text = serde_json::to_string(&corolla(3).to_json()).unwrap();
        assert_eq!(text, r#"{"sigma":[[0,1,2]],"alpha":[],"tails":[0,1,2],"marks":[]}"#);
    }

    #[test]
    fn relabel_preserves_type() {
        let g = three_discs();
        let n = g.half_edges();
        let perm: Vec<u32> = (0..n).map(|x| (x * 7 + 3) % n).collect();
        let h = g.relabel(&perm);
        assert_eq!(h.signature(), g.signature());
        assert_eq!(h.cell_dimension(), g.cell_dimension());
        assert_eq!(h.boundary_tail_sequences().len(), g.boundary_tail_sequences().len());
    }
}
