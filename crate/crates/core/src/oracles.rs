//! Brute-force reference implementations.
//!
//! Nothing here shares enumeration logic with the splitting closure in
//! [`crate::enumerate`]; only the graph type and canonical codes are common.
//! All routines are single-threaded.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use crate::canonical::{canonical_code, CanonicalCode};
use crate::enumerate::{EnumerationError, Limits, TailOrder};
use crate::graph::{HalfEdge, RibbonGraph};
use crate::signature::Signature;

/// Planted plane tree: a leaf, or a vertex with at least two ordered children.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TreeShape {
    Leaf,
    Node(Vec<TreeShape>),
}

impl TreeShape {
    pub fn leaves(&self) -> usize {
        match self {
            TreeShape::Leaf => 1,
            TreeShape::Node(children) => children.iter().map(TreeShape::leaves).sum(),
        }
    }

    /// Internal edges below the root vertex.
    pub fn internal_edges(&self) -> usize {
        match self {
            TreeShape::Leaf => 0,
            TreeShape::Node(children) => children
                .iter()
                .map(|c| match c {
                    TreeShape::Leaf => 0,
                    node => 1 + node.internal_edges(),
                })
                .sum(),
        }
    }

    /// All planted trees with `n` leaves.
    pub fn all(n: usize) -> Vec<TreeShape> {
        let mut memo: Vec<Vec<TreeShape>> = vec![Vec::new(), vec![TreeShape::Leaf]];
        for m in 2..=n {
            let mut out = Vec::new();
            for parts in ordered_splits(m) {
                let mut acc: Vec<Vec<TreeShape>> = vec![Vec::new()];
                for &p in &parts {
                    acc = acc
                        .into_iter()
                        .flat_map(|prefix| {
                            memo[p].iter().map(move |t| {
                                let mut v = prefix.clone();
                                v.push(t.clone());
                                v
                            })
                        })
                        .collect();
                }
                out.extend(acc.into_iter().map(TreeShape::Node));
            }
            memo.push(out);
        }
        memo.swap_remove(n)
    }

    /// The disc graph with tail 1 on the root edge and tails `2..=r` on the
    /// leaves from left to right.
    pub fn to_graph(&self) -> RibbonGraph {
        assert!(matches!(self, TreeShape::Node(_)), "a bare leaf is not a disc graph");
        let mut b = TreeBuilder::default();
        b.vertex(self, None);
        RibbonGraph::from_parts(b.next, b.pair, b.tails, Vec::new()).expect("trees are valid disc graphs")
    }
}

#[derive(Default)]
struct TreeBuilder {
    next: Vec<HalfEdge>,
    pair: Vec<HalfEdge>,
    tails: Vec<HalfEdge>,
}

impl TreeBuilder {
    fn fresh(&mut self) -> HalfEdge {
        let x = self.next.len() as HalfEdge;
        self.next.push(x);
        self.pair.push(x);
        x
    }

    /// Builds the vertex of `node` below the half-edge `up`, or carrying
    /// tail 1 at the root. Leaves are labeled left to right.
    fn vertex(&mut self, node: &TreeShape, up: Option<HalfEdge>) {
        let TreeShape::Node(children) = node else { unreachable!() };
        let parent = self.fresh();
        match up {
            Some(u) => {
                self.pair[parent as usize] = u;
                self.pair[u as usize] = parent;
            }
            None => self.tails.push(parent),
        }
        let ring: Vec<HalfEdge> = std::iter::once(parent).chain(children.iter().map(|_| self.fresh())).collect();
        for k in 0..ring.len() {
            self.next[ring[k] as usize] = ring[(k + 1) % ring.len()];
        }
        for (&x, child) in ring[1..].iter().zip(children) {
            match child {
                TreeShape::Leaf => self.tails.push(x),
                node => self.vertex(node, Some(x)),
            }
        }
    }
}

/// Compositions of `m` into at least two positive parts.
fn ordered_splits(m: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            if cur.len() >= 2 {
                out.push(cur.clone());
            }
            return;
        }
        for p in 1..=left {
            cur.push(p);
            rec(left - p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, &mut Vec::new(), &mut out);
    out
}

/// Number of disc graphs with `r` cyclically ordered tails, by internal
/// edge count. The root vertex carries tail 1.
pub fn tree_counts(r: usize) -> BTreeMap<usize, usize> {
    assert!(r >= 3, "disc graphs need at least three tails");
    let mut counts = BTreeMap::new();
    for t in TreeShape::all(r - 1) {
        *counts.entry(t.internal_edges()).or_insert(0) += 1;
    }
    counts
}

/// Every bijection commuting with σ and α and preserving tail and mark
/// labels, found by propagating each candidate image of half-edge 0.
pub fn brute_automorphisms(g: &RibbonGraph) -> Vec<Vec<HalfEdge>> {
    let n = g.half_edges() as usize;
    let label = |x: HalfEdge| (g.tail_label(x), g.mark_at(g.vertex_of(x)));
    let mut out = Vec::new();
    'image: for y0 in 0..n as HalfEdge {
        let mut phi = vec![HalfEdge::MAX; n];
        let mut used = vec![false; n];
        let mut stack = vec![(0, y0)];
        while let Some((x, y)) = stack.pop() {
            let cur = phi[x as usize];
            if cur != HalfEdge::MAX {
                if cur != y {
                    continue 'image;
                }
                continue;
            }
            if used[y as usize] || label(x) != label(y) {
                continue 'image;
            }
            phi[x as usize] = y;
            used[y as usize] = true;
            stack.push((g.next(x), g.next(y)));
            stack.push((g.pair(x), g.pair(y)));
        }
        if phi.iter().all(|&y| y != HalfEdge::MAX) {
            out.push(phi);
        }
    }
    out
}

const UNSET: u32 = u32::MAX;

/// Generator for connected maps in breadth-first normal form: labels are
/// assigned in discovery order, processing `σ(x)` then `α(x)` for each
/// `x` in turn, so every rooted map arises exactly once.
struct RootedMaps<'a> {
    h: usize,
    tails: usize,
    edges: usize,
    vertices: usize,
    short_ok: usize,
    next: Vec<u32>,
    prev: Vec<u32>,
    pair: Vec<u32>,
    emit: &'a mut dyn FnMut(&[u32], &[u32]) -> bool,
}

/// Counters along one branch of the generator.
#[derive(Clone, Copy, Default)]
struct Progress {
    /// Labels handed out so far.
    count: usize,
    tails: usize,
    edges: usize,
    /// Closed vertex cycles, those of valence below three, and the
    /// half-edges they hold.
    closed: usize,
    short: usize,
    used: usize,
}

impl RootedMaps<'_> {
    /// Largest valence one more vertex may have, given that every other
    /// vertex still to close needs three half-edges unless it takes a mark.
    fn valence_room(&self, closed: usize, short: usize, used: usize) -> Option<usize> {
        let left = self.vertices.checked_sub(closed + 1)?;
        let marks_left = self.short_ok.checked_sub(short)?;
        let need = 3 * left - 2 * marks_left.min(left);
        (self.h - used).checked_sub(need)
    }

    fn chain_back(&self, x: usize) -> usize {
        let (mut z, mut len) = (x, 1);
        while self.prev[z] != UNSET {
            z = self.prev[z] as usize;
            len += 1;
        }
        len
    }

    /// Returns false once the consumer asks to stop.
    fn run(&mut self, x: usize, p: Progress) -> bool {
        if x == self.h {
            return (self.emit)(&self.next, &self.pair);
        }
        if x >= p.count {
            return true; // disconnected
        }
        let mut targets: Vec<usize> = (0..p.count).filter(|&y| self.prev[y] == UNSET).collect();
        if p.count < self.h {
            targets.push(p.count);
        }
        let back = self.chain_back(x);
        for y in targets {
            let mut q = p;
            if y == p.count {
                q.count += 1;
                if self.valence_room(p.closed, p.short, p.used).is_none_or(|room| back + 1 > room) {
                    continue;
                }
            } else {
                // Following y's chain either reaches x, closing a vertex,
                // or ends elsewhere and the two chains merge.
                let (mut z, mut len) = (y, 1);
                while z != x && self.next[z] != UNSET {
                    z = self.next[z] as usize;
                    len += 1;
                }
                if z == x {
                    q.closed += 1;
                    q.short += usize::from(len < 3);
                    q.used += len;
                    if q.closed > self.vertices || q.short > self.short_ok {
                        continue;
                    }
                    let rest = self.h - q.used;
                    if q.closed == self.vertices {
                        if rest != 0 {
                            continue;
                        }
                    } else if self.valence_room(q.closed, q.short, q.used).is_none_or(|room| room < 1) {
                        continue;
                    }
                } else if self.valence_room(p.closed, p.short, p.used).is_none_or(|room| back + len > room) {
                    continue;
                }
            }
            self.next[x] = y as u32;
            self.prev[y] = x as u32;
            if !self.choose_pair(x, q) {
                return false;
            }
            self.prev[y] = UNSET;
            self.next[x] = UNSET;
        }
        true
    }

    fn choose_pair(&mut self, x: usize, p: Progress) -> bool {
        if self.pair[x] != UNSET {
            return self.run(x + 1, p);
        }
        if p.tails < self.tails {
            self.pair[x] = x as u32;
            if !self.run(x + 1, Progress { tails: p.tails + 1, ..p }) {
                return false;
            }
        }
        if p.edges < self.edges {
            let mut partners: Vec<usize> = (x + 1..p.count).filter(|&y| self.pair[y] == UNSET).collect();
            if p.count < self.h {
                partners.push(p.count);
            }
            for y in partners {
                let count = if y == p.count { p.count + 1 } else { p.count };
                self.pair[x] = y as u32;
                self.pair[y] = x as u32;
                if !self.run(x + 1, Progress { count, edges: p.edges + 1, ..p }) {
                    return false;
                }
                self.pair[y] = UNSET;
            }
        }
        self.pair[x] = UNSET;
        true
    }
}

/// Ordered choices of `s` distinct vertices covering every vertex of
/// valence below three.
fn mark_assignments(g: &RibbonGraph, s: usize) -> Vec<Vec<u32>> {
    let nv = g.vertex_count();
    let required: Vec<u32> = (0..nv as u32).filter(|&v| g.valence(v) < 3).collect();
    let mut out = Vec::new();
    fn rec(nv: usize, s: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == s {
            out.push(cur.clone());
            return;
        }
        for v in 0..nv as u32 {
            if !cur.contains(&v) {
                cur.push(v);
                rec(nv, s, cur, out);
                cur.pop();
            }
        }
    }
    rec(nv, s, &mut Vec::new(), &mut out);
    out.retain(|m| required.iter().all(|v| m.contains(v)));
    out
}

/// Assignments `label → tail half-edge` allowed by `order`.
fn tail_assignments(g: &RibbonGraph, order: TailOrder) -> Vec<Vec<HalfEdge>> {
    let slots: Vec<HalfEdge> = g.tails().to_vec();
    let r = slots.len();
    match order {
        TailOrder::Free => {
            let mut out = Vec::new();
            permutations(&slots, &mut Vec::new(), &mut vec![false; r], &mut out);
            out
        }
        TailOrder::Boundary => {
            // Tails met along each boundary cycle, in boundary order.
            let cycles: Vec<Vec<HalfEdge>> = g
                .boundary_cycles()
                .into_iter()
                .map(|c| c.into_iter().filter(|&x| g.is_tail(x)).collect::<Vec<_>>())
                .filter(|c| !c.is_empty())
                .collect();
            let mut out = Vec::new();
            let mut owner = vec![usize::MAX; r];
            distribute(&cycles, 0, &mut owner, &mut out);
            out
        }
    }
}

fn permutations(items: &[HalfEdge], cur: &mut Vec<HalfEdge>, used: &mut Vec<bool>, out: &mut Vec<Vec<HalfEdge>>) {
    if cur.len() == items.len() {
        out.push(cur.clone());
        return;
    }
    for i in 0..items.len() {
        if !used[i] {
            used[i] = true;
            cur.push(items[i]);
            permutations(items, cur, used, out);
            cur.pop();
            used[i] = false;
        }
    }
}

/// Splits the labels among the boundary cycles (sorted within each), then
/// places each sorted block on its cycle at every rotation.
fn distribute(cycles: &[Vec<HalfEdge>], label: usize, owner: &mut Vec<usize>, out: &mut Vec<Vec<HalfEdge>>) {
    let r = owner.len();
    if label == r {
        let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); cycles.len()];
        for (l, &c) in owner.iter().enumerate() {
            blocks[c].push(l);
        }
        if blocks.iter().zip(cycles).any(|(b, c)| b.len() != c.len()) {
            return;
        }
        let mut partial = vec![vec![HalfEdge::MAX; r]];
        for (block, cycle) in blocks.iter().zip(cycles) {
            let m = cycle.len();
            partial = partial
                .into_iter()
                .flat_map(|p| {
                    (0..m).map(move |shift| {
                        let mut q = p.clone();
                        for (k, &l) in block.iter().enumerate() {
                            q[l] = cycle[(k + shift) % m];
                        }
                        q
                    })
                })
                .collect();
        }
        out.extend(partial);
        return;
    }
    for c in 0..cycles.len() {
        owner[label] = c;
        distribute(cycles, label + 1, owner, out);
    }
    owner[label] = usize::MAX;
}

/// Every class of Γ_{g,h,r,s} admitted by `order`, by exhaustive generation
/// of rooted maps with unlabeled tails followed by all admissible labelings.
/// Excluded signatures give the empty set.
pub fn naive_enumerate(sig: Signature, order: TailOrder, limits: &Limits) -> Result<BTreeSet<CanonicalCode>, EnumerationError> {
    let mut found = BTreeSet::new();
    if sig.is_excluded() || sig.h == 0 {
        return Ok(found);
    }
    let clock = Instant::now();
    let chi = sig.euler_char();
    let mut budget_hit: Option<EnumerationError> = None;
    let mut leaves = 0usize;
    for e in sig.min_edges().max(0)..=sig.max_edges() {
        let vertices = chi + e;
        if vertices < 1 {
            continue;
        }
        let h = (2 * e + sig.r as i64) as usize;
        let mut emit = |next: &[u32], pair: &[u32]| -> bool {
            leaves += 1;
            if leaves.is_multiple_of(1024) {
                let seconds = clock.elapsed().as_secs_f64();
                if limits.max_seconds.is_some_and(|m| seconds > m) || limits.max_cells.is_some_and(|m| found.len() > m) {
                    budget_hit = Some(EnumerationError::BudgetExceeded { cells: found.len(), seconds });
                    return false;
                }
            }
            let Ok(bare) = unmarked_shape(next, pair) else {
                return true;
            };
            if bare.vertex_count() as i64 != vertices || bare.boundary_cycles().len() != sig.h as usize {
                return true;
            }
            for labeling in tail_assignments(&bare, order) {
                for marks in mark_assignments(&bare, sig.s as usize) {
                    let mark_edges = marks.iter().map(|&v| bare.vertices()[v as usize][0]).collect();
                    let Ok(g) = RibbonGraph::from_parts(next.to_vec(), pair.to_vec(), labeling.clone(), mark_edges) else {
                        continue;
                    };
                    if g.signature() == sig && order.admits(&g) {
                        found.insert(canonical_code(&g));
                    }
                }
            }
            true
        };
        let mut gen = RootedMaps {
            h,
            tails: sig.r as usize,
            edges: e as usize,
            vertices: vertices as usize,
            short_ok: sig.s as usize,
            next: vec![UNSET; h],
            prev: vec![UNSET; h],
            pair: vec![UNSET; h],
            emit: &mut emit,
        };
        gen.run(0, Progress { count: 1, ..Progress::default() });
        if let Some(err) = budget_hit.take() {
            return Err(err);
        }
    }
    Ok(found)
}

/// Structural view of a map before labeling: every vertex is marked so
/// that valence bounds do not apply yet.
fn unmarked_shape(next: &[u32], pair: &[u32]) -> Result<RibbonGraph, ()> {
    let n = next.len();
    let mut seen = vec![false; n];
    let mut reps = Vec::new();
    for x in 0..n {
        if !seen[x] {
            reps.push(x as u32);
            let mut y = x;
            while !seen[y] {
                seen[y] = true;
                y = next[y] as usize;
            }
        }
    }
    let tails: Vec<HalfEdge> = (0..n as u32).filter(|&x| pair[x as usize] == x).collect();
    RibbonGraph::from_parts(next.to_vec(), pair.to_vec(), tails, reps).map_err(|_| ())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::canonical_code;
    use crate::enumerate::enumerate;
    use crate::graph::fixtures::*;

    #[test]
    fn tree_count_examples() {
        assert_eq!(tree_counts(3), BTreeMap::from([(0, 1)]));
        assert_eq!(tree_counts(4), BTreeMap::from([(0, 1), (1, 2)]));
        assert_eq!(tree_counts(5), BTreeMap::from([(0, 1), (1, 5), (2, 5)]));
    }

    #[test]
    fn trees_match_disc_graphs() {
        for r in 3..=7 {
            let basis = enumerate(Signature::new_unchecked(0, 1, r as u32, 0), TailOrder::Boundary, &Limits::unlimited()).unwrap();
            let from_trees: BTreeSet<Vec<u32>> = TreeShape::all(r - 1)
                .iter()
                .map(|t| {
                    let g = t.to_graph();
                    assert!(TailOrder::Boundary.admits(&g), "{g}");
                    canonical_code(&g).code
                })
                .collect();
            let enumerated: BTreeSet<Vec<u32>> = basis.iter().map(|c| c.code.code.clone()).collect();
            assert_eq!(from_trees, enumerated, "r = {r}");
        }
    }

    #[test]
    fn automorphism_examples() {
        assert_eq!(brute_automorphisms(&theta_one_boundary()).len(), 6);
        assert_eq!(brute_automorphisms(&theta_three_boundaries()).len(), 6);
        assert_eq!(brute_automorphisms(&corolla(3)).len(), 1);
        assert_eq!(brute_automorphisms(&four_valent_torus()).len(), 4);
    }

    #[test]
    fn naive_examples() {
        let none = Limits::unlimited();
        let codes = |g, h, r, s, o| naive_enumerate(Signature::new_unchecked(g, h, r, s), o, &none).unwrap();
        assert_eq!(codes(0, 1, 4, 0, TailOrder::Boundary).len(), 3);
        assert_eq!(codes(0, 2, 0, 0, TailOrder::Boundary).len(), 0);
        let torus = codes(1, 1, 0, 0, TailOrder::Boundary);
        let fast = enumerate(Signature::new_unchecked(1, 1, 0, 0), TailOrder::Boundary, &none).unwrap();
        assert_eq!(torus, fast.iter().map(|c| c.code.clone()).collect());
        assert_eq!(codes(0, 1, 4, 0, TailOrder::Free).len(), 18);
    }

    #[test]
    fn naive_budget() {
        let limits = Limits { max_cells: None, max_seconds: Some(0.0) };
        let err = naive_enumerate(Signature::new_unchecked(0, 1, 8, 0), TailOrder::Boundary, &limits);
        assert!(matches!(err, Err(EnumerationError::BudgetExceeded { .. })));
    }
}
