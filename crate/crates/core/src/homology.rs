//! Exact homology over ℤ and ℚ.
//!
//! Ranks and torsion come from a sparse Smith normal form over
//! arbitrary-precision integers; the rational rank is the number of nonzero
//! invariant factors.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::complex::{boundary_matrix, BoundaryMatrix, Coefficients, ComplexError};
use crate::enumerate::CellBasis;
use crate::signature::Signature;

/// Sparse integer matrix in coordinate form. Repeated coordinates add up.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, BigInt)>,
}

impl IntMatrix {
    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::new();
        for (r, row) in rows.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                if v != 0 {
                    entries.push((r, c, BigInt::from(v)));
                }
            }
        }
        IntMatrix { rows: rows.len(), cols, entries }
    }
}

impl From<&BoundaryMatrix> for IntMatrix {
    fn from(m: &BoundaryMatrix) -> Self {
        IntMatrix {
            rows: m.rows,
            cols: m.cols,
            entries: m.entries.iter().map(|&(r, c, v)| (r, c, BigInt::from(v))).collect(),
        }
    }
}

struct Eliminator {
    rows: Vec<BTreeMap<usize, BigInt>>,
    cols: Vec<BTreeSet<usize>>,
}

impl Eliminator {
    fn new(m: &IntMatrix) -> Self {
        let mut rows: Vec<BTreeMap<usize, BigInt>> = vec![BTreeMap::new(); m.rows];
        for (r, c, v) in &m.entries {
            *rows[*r].entry(*c).or_insert_with(BigInt::zero) += v;
        }
        let mut cols = vec![BTreeSet::new(); m.cols];
        for (r, row) in rows.iter_mut().enumerate() {
            row.retain(|_, v| !v.is_zero());
            for &c in row.keys() {
                cols[c].insert(r);
            }
        }
        Eliminator { rows, cols }
    }

    fn set(&mut self, r: usize, c: usize, v: BigInt) {
        if v.is_zero() {
            self.rows[r].remove(&c);
            self.cols[c].remove(&r);
        } else {
            self.rows[r].insert(c, v);
            self.cols[c].insert(r);
        }
    }

    /// `row[target] -= factor · row[source]`
    fn sub_row_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        let src: Vec<(usize, BigInt)> = self.rows[source].iter().map(|(&c, v)| (c, v.clone())).collect();
        for (c, v) in src {
            let cur = self.rows[target].get(&c).cloned().unwrap_or_else(BigInt::zero);
            self.set(target, c, cur - factor * v);
        }
    }

    /// Picks the sparsest column, then its best row: unit entries first,
    /// shortest rows next.
    fn choose_pivot(&self) -> Option<(usize, usize)> {
        let c = (0..self.cols.len())
            .filter(|&c| !self.cols[c].is_empty())
            .min_by_key(|&c| self.cols[c].len())?;
        let r = self.cols[c]
            .iter()
            .copied()
            .min_by(|&a, &b| {
                let (va, vb) = (self.rows[a][&c].abs(), self.rows[b][&c].abs());
                va.cmp(&vb).then(self.rows[a].len().cmp(&self.rows[b].len()))
            })
            .expect("nonempty column");
        Some((r, c))
    }

    /// Reduces around `(p, c)` until the pivot is alone in its row and
    /// column, then removes both. Returns the absolute pivot.
    fn eliminate(&mut self, mut p: usize, mut c: usize) -> BigInt {
        loop {
            let pv = self.rows[p][&c].clone();
            let others: Vec<usize> = self.cols[c].iter().copied().filter(|&r| r != p).collect();
            let mut smaller: Option<(usize, BigInt)> = None;
            for r in others {
                let a = self.rows[r][&c].clone();
                let (q, rem) = a.div_rem(&pv);
                if !q.is_zero() {
                    self.sub_row_multiple(r, p, &q);
                }
                if !rem.is_zero() && smaller.as_ref().is_none_or(|(_, s)| rem.abs() < *s) {
                    smaller = Some((r, rem.abs()));
                }
            }
            if let Some((r, _)) = smaller {
                p = r;
                continue;
            }
            // Column c now holds only the pivot, so column operations against
            // it touch row p alone.
            let rest: Vec<(usize, BigInt)> =
                self.rows[p].iter().filter(|(&k, _)| k != c).map(|(&k, v)| (k, v.clone())).collect();
            let mut smaller: Option<(usize, BigInt)> = None;
            for (k, a) in rest {
                let rem = a.div_rem(&pv).1;
                if !rem.is_zero() && smaller.as_ref().is_none_or(|(_, s)| rem.abs() < *s) {
                    smaller = Some((k, rem.abs()));
                }
                self.set(p, k, rem);
            }
            if let Some((k, _)) = smaller {
                c = k;
                continue;
            }
            self.set(p, c, BigInt::zero());
            return pv.abs();
        }
    }
}

/// Invariant factors `d₁ | d₂ | …` of an integer matrix (nonzero ones only).
pub fn smith_normal_form(m: &IntMatrix) -> Vec<BigInt> {
    let mut e = Eliminator::new(m);
    let mut units = 0usize;
    let mut others = Vec::new();
    while let Some((p, c)) = e.choose_pivot() {
        let d = e.eliminate(p, c);
        if d.is_one() {
            units += 1;
        } else {
            others.push(d);
        }
    }
    // diag(a, b) ~ diag(gcd, lcm)
    for i in 0..others.len() {
        for j in i + 1..others.len() {
            let g = others[i].gcd(&others[j]);
            let l = &others[i] / &g * &others[j];
            others[i] = g;
            others[j] = l;
        }
    }
    let mut out = vec![BigInt::one(); units];
    out.extend(others);
    out
}

pub fn rank(m: &IntMatrix) -> usize {
    smith_normal_form(m).len()
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomologyResult {
    pub signature: Signature,
    pub mode: Coefficients,
    /// Class counts per dimension, orientable or not.
    pub cells: BTreeMap<u32, usize>,
    /// Chain-group ranks: orientable classes per dimension.
    pub generators: BTreeMap<u32, usize>,
    pub betti: BTreeMap<u32, usize>,
    /// Invariant factors > 1 of `H_d` (integer mode only).
    pub torsion: BTreeMap<u32, Vec<BigInt>>,
    pub euler: i64,
    pub euler_orbifold: BigRational,
}

impl HomologyResult {
    pub fn betti_euler(&self) -> i64 {
        self.betti.iter().map(|(&d, &b)| if d % 2 == 0 { b as i64 } else { -(b as i64) }).sum()
    }

    /// Report with nonzero Betti numbers and nontrivial torsion only.
    pub fn to_json(&self) -> Value {
        let betti: BTreeMap<u32, usize> = self.betti.iter().filter(|(_, &b)| b > 0).map(|(&d, &b)| (d, b)).collect();
        let torsion: BTreeMap<u32, Vec<Value>> = self
            .torsion
            .iter()
            .filter(|(_, fs)| !fs.is_empty())
            .map(|(&d, fs)| {
                let vals = fs
                    .iter()
                    .map(|f| match u64::try_from(f) {
                        Ok(v) => json!(v),
                        Err(_) => json!(f.to_string()),
                    })
                    .collect();
                (d, vals)
            })
            .collect();
        json!({
            "signature": self.signature.as_array(),
            "mode": self.mode,
            "cells": self.cells,
            "generators": self.generators,
            "betti": betti,
            "torsion": torsion,
            "euler": self.euler,
            "euler_orbifold": format!("{}/{}", self.euler_orbifold.numer(), self.euler_orbifold.denom()),
        })
    }
}

/// Plain and orbifold Euler characteristics over all classes.
pub fn euler_characteristics(basis: &CellBasis) -> (i64, BigRational) {
    let mut plain = 0i64;
    let mut orbifold = BigRational::zero();
    for cell in basis.iter() {
        let sign = if cell.dim % 2 == 0 { 1 } else { -1 };
        plain += sign;
        orbifold += BigRational::new(BigInt::from(sign), BigInt::from(cell.aut_order()));
    }
    (plain, orbifold)
}

/// Resolves `auto` coefficients: integers iff there are tails.
pub fn auto_mode(sig: Signature) -> Coefficients {
    if sig.r > 0 {
        Coefficients::Integer
    } else {
        Coefficients::Rational
    }
}

/// `∂_d` for every `d` from 1 to the top dimension.
pub fn boundary_matrices(basis: &CellBasis, mode: Coefficients) -> Result<Vec<BoundaryMatrix>, ComplexError> {
    let top = basis.max_dim().unwrap_or(0);
    (1..=top).map(|d| boundary_matrix(basis, d, mode)).collect()
}

/// First nonzero entry of some `∂_d ∘ ∂_{d+1}`, as `(d, row, col, value)`.
pub fn d_squared_defect(matrices: &[BoundaryMatrix]) -> Option<(u32, usize, usize, i128)> {
    matrices.windows(2).find_map(|w| {
        let prod = w[0].compose(&w[1]);
        prod.first().map(|&(r, c, v)| (w[0].dim, r, c, v))
    })
}

pub fn homology(basis: &CellBasis, matrices: &[BoundaryMatrix], mode: Coefficients) -> Result<HomologyResult, ComplexError> {
    let sig = basis.signature();
    if mode == Coefficients::Integer && sig.r == 0 {
        return Err(ComplexError::IntegerModeWithoutTails);
    }
    let factors: BTreeMap<u32, Vec<BigInt>> = matrices
        .par_iter()
        .map(|m| (m.dim, smith_normal_form(&IntMatrix::from(m))))
        .collect();
    let rank_of = |d: u32| factors.get(&d).map_or(0, Vec::len);

    let cells = basis.counts_by_dimension();
    let top = basis.max_dim().unwrap_or(0);
    let mut generators = BTreeMap::new();
    let mut betti = BTreeMap::new();
    let mut torsion = BTreeMap::new();
    for d in 0..=top {
        let c = basis.generators(d).len();
        generators.insert(d, c);
        betti.insert(d, c - rank_of(d) - rank_of(d + 1));
        if mode == Coefficients::Integer {
            let t: Vec<BigInt> = factors.get(&(d + 1)).map_or(Vec::new(), |f| f.iter().filter(|x| !x.is_one()).cloned().collect());
            torsion.insert(d, t);
        }
    }
    let (euler, euler_orbifold) = euler_characteristics(basis);
    Ok(HomologyResult { signature: sig, mode, cells, generators, betti, torsion, euler, euler_orbifold })
}
