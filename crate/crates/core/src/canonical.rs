//! Canonical forms for ribbon graphs.
//!
//! A connected combinatorial map is relabeled breadth-first from a starting
//! half-edge: half-edges are numbered in order of discovery, visiting `σ(x)`
//! then `α(x)` for each already-numbered `x`. The resulting code lists, per
//! half-edge, the labels of its σ- and α-images plus its tail label and the
//! mark label of its vertex. The canonical code is the lexicographic minimum
//! over admissible starts; an automorphism is determined by the image of one
//! half-edge, so the starts attaining the minimum are in bijection with the
//! automorphism group.

use std::cmp::Ordering;

use crate::graph::{HalfEdge, RibbonGraph};

const UNSEEN: u32 = u32::MAX;

/// Isomorphism-class identifier plus the automorphism count.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode {
    pub code: Vec<u32>,
    pub aut_order: u64,
}

/// Canonical code together with the relabelings realizing it.
#[derive(Debug, Clone)]
pub struct CanonicalForm {
    pub code: CanonicalCode,
    /// `relabel[old] = new` for the first minimal start.
    pub relabel: Vec<HalfEdge>,
    /// Every start attaining the minimum, in increasing order.
    pub minimal_starts: Vec<HalfEdge>,
}

struct Labeler {
    label: Vec<u32>,
    order: Vec<HalfEdge>,
    tail_label: Vec<u32>,
    mark_label: Vec<u32>,
}

impl Labeler {
    fn new(g: &RibbonGraph) -> Self {
        let n = g.half_edges() as usize;
        let mut tail_label = vec![0; n];
        for (j, &t) in g.tails().iter().enumerate() {
            tail_label[t as usize] = j as u32 + 1;
        }
        let mark_label = (0..n as u32)
            .map(|x| g.mark_at(g.vertex_of(x)).map_or(0, |j| j + 1))
            .collect();
        Labeler { label: vec![UNSEEN; n], order: Vec::with_capacity(n), tail_label, mark_label }
    }

    /// Writes the code for `start` into `out`, stopping early as soon as it
    /// exceeds `best`. Returns the comparison against `best`.
    fn run(&mut self, g: &RibbonGraph, start: HalfEdge, best: Option<&[u32]>, out: &mut Vec<u32>) -> Ordering {
        self.label.iter_mut().for_each(|l| *l = UNSEEN);
        self.order.clear();
        out.clear();
        let header = [g.half_edges(), g.tails().len() as u32, g.marks().len() as u32];
        out.extend_from_slice(&header);
        let mut state = Ordering::Equal;
        if let Some(b) = best {
            state = header.as_slice().cmp(&b[..3]);
            if state == Ordering::Greater {
                return state;
            }
        }
        self.label[start as usize] = 0;
        self.order.push(start);
        let mut i = 0;
        while i < self.order.len() {
            let x = self.order[i];
            for y in [g.next(x), g.pair(x)] {
                if self.label[y as usize] == UNSEEN {
                    self.label[y as usize] = self.order.len() as u32;
                    self.order.push(y);
                }
            }
            let entry = [
                self.label[g.next(x) as usize],
                self.label[g.pair(x) as usize],
                self.tail_label[x as usize],
                self.mark_label[x as usize],
            ];
            let at = out.len();
            out.extend_from_slice(&entry);
            if state == Ordering::Equal {
                if let Some(b) = best {
                    state = entry.as_slice().cmp(&b[at..at + 4]);
                    if state == Ordering::Greater {
                        return state;
                    }
                }
            }
            i += 1;
        }
        debug_assert_eq!(self.order.len(), g.half_edges() as usize, "graph must be connected");
        if best.is_none() {
            Ordering::Less
        } else {
            state
        }
    }
}

/// Starts that any label-preserving isomorphism must map among themselves.
fn admissible_starts(g: &RibbonGraph) -> Vec<HalfEdge> {
    if let Some(&t) = g.tails().first() {
        vec![t]
    } else if let Some(&v) = g.marks().first() {
        g.vertices()[v as usize].clone()
    } else {
        (0..g.half_edges()).collect()
    }
}

pub fn canonical_form(g: &RibbonGraph) -> CanonicalForm {
    let mut labeler = Labeler::new(g);
    let mut best: Vec<u32> = Vec::new();
    let mut best_relabel: Vec<u32> = Vec::new();
    let mut scratch = Vec::new();
    let mut minimal = Vec::new();
    for start in admissible_starts(g) {
        let cmp = labeler.run(g, start, if minimal.is_empty() { None } else { Some(&best) }, &mut scratch);
        match cmp {
            Ordering::Less => {
                std::mem::swap(&mut best, &mut scratch);
                best_relabel.clone_from(&labeler.label);
                minimal.clear();
                minimal.push(start);
            }
            Ordering::Equal => minimal.push(start),
            Ordering::Greater => {}
        }
    }
    CanonicalForm {
        code: CanonicalCode { code: best, aut_order: minimal.len() as u64 },
        relabel: best_relabel,
        minimal_starts: minimal,
    }
}

pub fn canonical_code(g: &RibbonGraph) -> CanonicalCode {
    canonical_form(g).code
}

pub fn is_isomorphic(a: &RibbonGraph, b: &RibbonGraph) -> bool {
    a.half_edges() == b.half_edges() && canonical_code(a).code == canonical_code(b).code
}

/// Relabeling of `g` obtained by breadth-first numbering from `start`.
pub fn bfs_relabel(g: &RibbonGraph, start: HalfEdge) -> Vec<HalfEdge> {
    let mut labeler = Labeler::new(g);
    let mut scratch = Vec::new();
    labeler.run(g, start, None, &mut scratch);
    labeler.label
}

/// Every relabeling of `g` onto its canonical form, first one included.
pub fn canonical_isomorphisms(g: &RibbonGraph, form: &CanonicalForm) -> Vec<Vec<HalfEdge>> {
    form.minimal_starts.iter().map(|&s| bfs_relabel(g, s)).collect()
}

/// Automorphism group of `g` as half-edge permutations, identity first.
pub fn automorphisms(g: &RibbonGraph) -> Vec<Vec<HalfEdge>> {
    let form = canonical_form(g);
    let isos = canonical_isomorphisms(g, &form);
    // φ = iso_0⁻¹ ∘ iso_k carries x to the half-edge with the same canonical label.
    let mut inverse0 = vec![0; isos[0].len()];
    for (x, &l) in isos[0].iter().enumerate() {
        inverse0[l as usize] = x as HalfEdge;
    }
    let mut auts: Vec<Vec<HalfEdge>> =
        isos.iter().map(|iso| iso.iter().map(|&l| inverse0[l as usize]).collect()).collect();
    auts.sort_by_key(|p| p.iter().enumerate().any(|(x, &y)| x as u32 != y));
    auts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn automorphism_orders() {
        assert_eq!(canonical_code(&theta_one_boundary()).aut_order, 6);
        assert_eq!(canonical_code(&theta_three_boundaries()).aut_order, 6);
        assert_eq!(canonical_code(&four_valent_torus()).aut_order, 4);
        assert_eq!(canonical_code(&corolla(3)).aut_order, 1);
        assert_eq!(canonical_code(&three_discs()).aut_order, 1);
    }

    #[test]
    fn loop_with_tail_presentations_agree() {
        // σ = (ℓ₁ ℓ₂ t) versus σ = (ℓ₁ t ℓ₂)
        let a = graph(&[&[0, 1, 2]], &[[0, 1]], &[2], &[]);
        let b = graph(&[&[0, 1, 2]], &[[0, 2]], &[1], &[]);
        assert!(is_isomorphic(&a, &b));
        assert!(is_isomorphic(&a, &a));
        assert!(!is_isomorphic(&theta_one_boundary(), &theta_three_boundaries()));
    }

    #[test]
    fn canonical_relabel_reproduces_code() {
        let g = three_discs();
        let form = canonical_form(&g);
        let c = g.relabel(&form.relabel);
        let again = canonical_form(&c);
        assert_eq!(again.code, form.code);
        // The canonical representative is a fixed point of canonicalization.
        assert_eq!(c.relabel(&again.relabel), c);
    }

    #[test]
    fn automorphisms_commute_with_structure() {
        for g in [theta_one_boundary(), theta_three_boundaries(), four_valent_torus()] {
            let auts = automorphisms(&g);
            assert_eq!(auts.len() as u64, canonical_code(&g).aut_order);
            assert!(auts[0].iter().enumerate().all(|(x, &y)| x as u32 == y));
            for phi in &auts {
                for x in 0..g.half_edges() {
                    assert_eq!(phi[g.next(x) as usize], g.next(phi[x as usize]));
                    assert_eq!(phi[g.pair(x) as usize], g.pair(phi[x as usize]));
                }
            }
        }
    }
}
