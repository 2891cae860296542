//! Koszul homology of the Artinian reduction.
//!
//! With `V = R̄_1` (which equals the degree-one part of the reduced
//! polynomial ring) and `M = R̄`, `K_{p,q}` is the middle homology of
//!
//! ```text
//! ∧^{p+1} V ⊗ R̄_{q-1}  ->  ∧^p V ⊗ R̄_q  ->  ∧^{p-1} V ⊗ R̄_{q+1}
//! ```
//!
//! and its dimension is computed by rank-nullity from the two differentials.
//! Both differentials preserve the total weight (sum of the weights of the
//! wedge factors plus the rank of the monomial), so each one is block
//! diagonal and ranks are taken block by block.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{basis_r1, DimVector, MultiIndex};
use crate::linalg::{RankBackend, SparseIntMatrix, SparseVec};
use crate::straighten::ArtinianRing;

/// Default cap on `sum over blocks of rows * cols` for one differential.
pub const DEFAULT_BUDGET: u128 = 50_000_000;

/// A wedge of distinct degree-one basis elements, as a bitmask over the
/// positions in [`KoszulComplex::b1`].
pub type Subset = u64;

/// Basis vector `z_{s_1} ∧ ... ∧ z_{s_p} ⊗ m` of `∧^p B_1 ⊗ R̄_q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KoszulBasisVector {
    pub subset: Subset,
    /// Index of the standard monomial within degree `q`.
    pub monomial: usize,
}

/// One weight-homogeneous block of a differential. `cols` and `rows` list the
/// global basis positions of the block's columns and rows.
#[derive(Clone, Debug)]
pub struct Block {
    pub weight: usize,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub matrix: SparseIntMatrix,
}

fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k as u128).fold(1u128, |acc, i| acc * (n as u128 - i) / (i + 1))
}

/// All `k`-subsets of `{0..n}`, lexicographic in the sorted element lists.
pub fn subsets(n: usize, k: usize) -> Vec<Subset> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().fold(0u64, |m, &i| m | 1 << i));
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

pub fn subset_elements(s: Subset) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| s >> i & 1 == 1)
}

/// The Koszul complex of `R̄` for one dimension vector, with the products
/// `z_b * m` of degree-one basis elements and standard monomials precomputed.
pub struct KoszulComplex {
    ring: Arc<ArtinianRing>,
    b1: Vec<MultiIndex>,
    b1_weights: Vec<usize>,
    /// `mult[q][b][m]`: coordinates of `z_b * m` in degree `q + 1`.
    mult: Vec<Vec<Vec<SparseVec>>>,
    budget: u128,
}

impl std::fmt::Debug for KoszulComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("KoszulComplex").field("dims", self.ring.dims()).finish_non_exhaustive()
    }
}

impl KoszulComplex {
    pub fn new(a: DimVector) -> Result<Self> {
        Self::with_ring(Arc::new(ArtinianRing::new(a)))
    }

    pub fn with_ring(ring: Arc<ArtinianRing>) -> Result<Self> {
        let a = ring.dims().clone();
        let b1 = basis_r1(&a);
        if b1.len() > 64 {
            return Err(Error::OutOfRange(format!(
                "{} degree-one generators; at most 64 supported",
                b1.len()
            )));
        }
        let reg = a.regularity();
        let mut mult = Vec::with_capacity(reg);
        for q in 0..reg {
            let target = ring.basis(q + 1);
            let per_b: Vec<Vec<SparseVec>> = b1
                .iter()
                .map(|v| {
                    ring.basis(q)
                        .monomials
                        .iter()
                        .map(|m| {
                            let prod = ring.multiply(v, m)?;
                            Ok(prod
                                .terms()
                                .map(|(t, c)| {
                                    let idx = target.index_of(t).expect("straighten output is standard");
                                    (idx, c.clone())
                                })
                                .collect())
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            mult.push(per_b);
        }
        let b1_weights = b1.iter().map(MultiIndex::weight).collect();
        Ok(KoszulComplex { ring, b1, b1_weights, mult, budget: DEFAULT_BUDGET })
    }

    pub fn with_budget(mut self, budget: u128) -> Self {
        self.budget = budget;
        self
    }

    pub fn budget(&self) -> u128 {
        self.budget
    }

    pub fn ring(&self) -> &Arc<ArtinianRing> {
        &self.ring
    }

    pub fn dims(&self) -> &DimVector {
        self.ring.dims()
    }

    /// Degree-one basis `B_1`, lexicographic.
    pub fn b1(&self) -> &[MultiIndex] {
        &self.b1
    }

    pub fn b1_position(&self, v: &MultiIndex) -> Option<usize> {
        self.b1.iter().position(|x| x == v)
    }

    /// `N = |B_1|`, the number of variables of the reduced polynomial ring.
    pub fn num_generators(&self) -> usize {
        self.b1.len()
    }

    pub fn regularity(&self) -> usize {
        self.dims().regularity()
    }

    pub fn hilbert_function(&self) -> Vec<usize> {
        self.ring.hilbert_function()
    }

    /// `dim ∧^p B_1 ⊗ R̄_q`.
    pub fn chain_dim(&self, p: usize, q: usize) -> u128 {
        binom(self.b1.len(), p) * self.ring.basis(q).len() as u128
    }

    /// Basis of `∧^p B_1 ⊗ R̄_q`, ordered by (subset, monomial).
    pub fn chain_basis(&self, p: usize, q: usize) -> Vec<KoszulBasisVector> {
        let nm = self.ring.basis(q).len();
        if nm == 0 {
            return Vec::new();
        }
        subsets(self.b1.len(), p)
            .into_iter()
            .flat_map(|s| (0..nm).map(move |m| KoszulBasisVector { subset: s, monomial: m }))
            .collect()
    }

    /// Total weight of a chain basis vector in degree `q`.
    pub fn weight_of(&self, q: usize, v: &KoszulBasisVector) -> usize {
        let w: usize = subset_elements(v.subset).map(|i| self.b1_weights[i]).sum();
        w + self.ring.basis(q).monomials[v.monomial].rank()
    }

    /// Image of one chain basis vector under `d: ∧^p ⊗ R̄_q -> ∧^{p-1} ⊗ R̄_{q+1}`.
    pub fn image(&self, q: usize, v: &KoszulBasisVector) -> Vec<(KoszulBasisVector, BigInt)> {
        let Some(table) = self.mult.get(q) else { return Vec::new() };
        let mut out = Vec::new();
        for (pos, s) in subset_elements(v.subset).enumerate() {
            let rest = v.subset & !(1u64 << s);
            for (m2, c) in &table[s][v.monomial] {
                let c = if pos % 2 == 0 { c.clone() } else { -c.clone() };
                out.push((KoszulBasisVector { subset: rest, monomial: *m2 }, c));
            }
        }
        out
    }

    fn potential_entries(&self, p: usize, q: usize) -> u128 {
        if p == 0 || p > self.b1.len() || q + 1 > self.regularity() {
            return 0;
        }
        let mut cols: HashMap<usize, u128> = HashMap::new();
        let mut rows: HashMap<usize, u128> = HashMap::new();
        for s in subsets(self.b1.len(), p) {
            let ws: usize = subset_elements(s).map(|i| self.b1_weights[i]).sum();
            for m in &self.ring.basis(q).monomials {
                *cols.entry(ws + m.rank()).or_default() += 1;
            }
        }
        for s in subsets(self.b1.len(), p - 1) {
            let ws: usize = subset_elements(s).map(|i| self.b1_weights[i]).sum();
            for m in &self.ring.basis(q + 1).monomials {
                *rows.entry(ws + m.rank()).or_default() += 1;
            }
        }
        cols.iter().map(|(w, c)| c * rows.get(w).copied().unwrap_or(0)).sum()
    }

    fn check_budget(&self, p: usize, q: usize) -> Result<()> {
        let needed = self.potential_entries(p, q);
        if needed > self.budget {
            Err(Error::BudgetExceeded { needed, budget: self.budget })
        } else {
            Ok(())
        }
    }

    /// The differential `∧^p B_1 ⊗ R̄_q -> ∧^{p-1} B_1 ⊗ R̄_{q+1}` in the
    /// ordered chain bases. Zero-sized when out of range.
    pub fn differential(&self, p: usize, q: usize) -> Result<SparseIntMatrix> {
        if p == 0 || p > self.b1.len() {
            return Ok(SparseIntMatrix::zeros(
                self.chain_basis(p.saturating_sub(1), q + 1).len(),
                self.chain_basis(p, q).len(),
            ));
        }
        self.check_budget(p, q)?;
        let dom = self.chain_basis(p, q);
        let cod = self.chain_basis(p - 1, q + 1);
        let index: HashMap<KoszulBasisVector, usize> =
            cod.iter().copied().enumerate().map(|(i, v)| (v, i)).collect();
        let cols = dom
            .iter()
            .map(|v| self.image(q, v).into_iter().map(|(w, c)| (index[&w], c)).collect())
            .collect();
        Ok(SparseIntMatrix::from_columns(cod.len(), cols))
    }

    /// The differential split into weight blocks. Positions refer to the
    /// bases returned by [`Self::chain_basis`].
    pub fn differential_blocks(&self, p: usize, q: usize) -> Result<Vec<Block>> {
        if p == 0 || p > self.b1.len() || q + 1 > self.regularity() {
            return Ok(Vec::new());
        }
        self.check_budget(p, q)?;
        let dom = self.chain_basis(p, q);
        let cod = self.chain_basis(p - 1, q + 1);
        let mut col_groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, v) in dom.iter().enumerate() {
            col_groups.entry(self.weight_of(q, v)).or_default().push(i);
        }
        let mut row_groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, v) in cod.iter().enumerate() {
            row_groups.entry(self.weight_of(q + 1, v)).or_default().push(i);
        }
        let global: HashMap<KoszulBasisVector, usize> =
            cod.iter().copied().enumerate().map(|(i, v)| (v, i)).collect();
        let mut blocks = Vec::new();
        for (w, cols) in col_groups {
            let Some(rows) = row_groups.remove(&w) else { continue };
            let local: HashMap<usize, usize> = rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
            let matrix_cols = cols
                .iter()
                .map(|&c| {
                    self.image(q, &dom[c])
                        .into_iter()
                        .map(|(v, x)| (local[&global[&v]], x))
                        .collect()
                })
                .collect();
            let matrix = SparseIntMatrix::from_columns(rows.len(), matrix_cols);
            blocks.push(Block { weight: w, rows, cols, matrix });
        }
        Ok(blocks)
    }

    /// Rank of `d_{p,q}`.
    pub fn differential_rank(&self, p: usize, q: usize, backend: RankBackend) -> Result<usize> {
        Ok(self
            .differential_blocks(p, q)?
            .iter()
            .map(|b| b.matrix.rank(backend))
            .sum())
    }

    /// `dim K_{p,q}`.
    pub fn kpq_dim(&self, p: usize, q: usize, backend: RankBackend) -> Result<u128> {
        let total = self.chain_dim(p, q);
        if total == 0 {
            return Ok(0);
        }
        let out = self.differential_rank(p, q, backend)? as u128;
        let inc = if q == 0 { 0 } else { self.differential_rank(p + 1, q - 1, backend)? as u128 };
        Ok(total - out - inc)
    }

    /// Applies `d_{p,q}` to a coordinate vector in the chain basis.
    pub fn apply_differential(&self, p: usize, q: usize, v: &[(usize, BigInt)]) -> SparseVec {
        if p == 0 {
            return Vec::new();
        }
        let dom = self.chain_basis(p, q);
        let cod = self.chain_basis(p - 1, q + 1);
        let index: HashMap<KoszulBasisVector, usize> =
            cod.iter().copied().enumerate().map(|(i, v)| (v, i)).collect();
        let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
        for (j, x) in v {
            for (w, c) in self.image(q, &dom[*j]) {
                *acc.entry(index[&w]).or_default() += c * x;
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    /// Computes the Betti table over `0..=pmax x 0..=qmax` (defaults: `N` and
    /// the regularity). Independent cells run in parallel on the current
    /// rayon pool; the result does not depend on scheduling.
    pub fn betti_table(&self, opts: &TableOptions) -> Result<BettiTable> {
        let n = self.num_generators();
        let pmax = opts.pmax.unwrap_or(n);
        let qmax = opts.qmax.unwrap_or(self.regularity());
        let mut needed = Vec::new();
        for q in 0..=qmax {
            for p in 1..=(pmax + 1).min(n) {
                needed.push((p, q));
            }
        }
        let ranks: HashMap<(usize, usize), usize> = needed
            .into_par_iter()
            .map(|(p, q)| self.differential_rank(p, q, opts.backend).map(|r| ((p, q), r)))
            .collect::<Result<_>>()?;
        let rank = |p: usize, q: usize| ranks.get(&(p, q)).copied().unwrap_or(0) as u128;
        let mut dims = BTreeMap::new();
        for q in 0..=qmax {
            for p in 0..=pmax {
                let total = self.chain_dim(p, q);
                let inc = if q == 0 { 0 } else { rank(p + 1, q - 1) };
                dims.insert((p, q), total - rank(p, q) - inc);
            }
        }
        Ok(BettiTable { dims: dims.into_iter().collect(), a: self.dims().clone(), pmax, qmax })
    }
}

#[derive(Clone, Debug, Default)]
pub struct TableOptions {
    pub pmax: Option<usize>,
    pub qmax: Option<usize>,
    pub backend: RankBackend,
}

/// Graded Betti numbers `dim K_{p,q}` for `0 <= p <= pmax`, `0 <= q <= qmax`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    dims: BTreeMap<(usize, usize), u128>,
    pub a: DimVector,
    pub pmax: usize,
    pub qmax: usize,
}

#[derive(Serialize)]
struct JsonTable<'a> {
    dims: Vec<[u128; 3]>,
    a: &'a DimVector,
}

impl BettiTable {
    /// Table from rows indexed by `q`, each listing `p = 0, 1, ...`.
    pub fn from_rows(a: DimVector, rows: &[&[u128]]) -> Self {
        let pmax = rows.iter().map(|r| r.len()).max().unwrap_or(1).saturating_sub(1);
        let mut dims = BTreeMap::new();
        for (q, row) in rows.iter().enumerate() {
            for p in 0..=pmax {
                dims.insert((p, q), row.get(p).copied().unwrap_or(0));
            }
        }
        BettiTable { dims, a, pmax, qmax: rows.len().saturating_sub(1) }
    }

    pub fn get(&self, p: usize, q: usize) -> u128 {
        self.dims.get(&(p, q)).copied().unwrap_or(0)
    }

    pub fn set(&mut self, p: usize, q: usize, v: u128) {
        self.dims.insert((p, q), v);
    }

    pub fn column_total(&self, p: usize) -> u128 {
        (0..=self.qmax).map(|q| self.get(p, q)).sum()
    }

    /// Cells in `(q, p)` order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, u128)> + '_ {
        (0..=self.qmax).flat_map(move |q| (0..=self.pmax).map(move |p| (p, q, self.get(p, q))))
    }

    /// Macaulay2-style layout: header of column indices, a `total:` row,
    /// then one row per `q`; zeros print as `.`.
    pub fn to_m2(&self) -> String {
        let cell = |x: u128| if x == 0 { ".".to_string() } else { x.to_string() };
        let widths: Vec<usize> = (0..=self.pmax)
            .map(|p| {
                let mut w = p.to_string().len().max(self.column_total(p).to_string().len());
                for q in 0..=self.qmax {
                    w = w.max(cell(self.get(p, q)).len());
                }
                w
            })
            .collect();
        let mut out = String::new();
        out.push_str("      ");
        for (p, w) in widths.iter().enumerate() {
            let _ = write!(out, " {p:>w$}");
        }
        out.push('\n');
        out.push_str("total:");
        for (p, w) in widths.iter().enumerate() {
            let _ = write!(out, " {:>w$}", self.column_total(p));
        }
        out.push('\n');
        for q in 0..=self.qmax {
            let _ = write!(out, "{q:>5}:");
            for (p, w) in widths.iter().enumerate() {
                let _ = write!(out, " {:>w$}", cell(self.get(p, q)));
            }
            out.push('\n');
        }
        out
    }

    /// `{"dims": [[p, q, dim], ...], "a": [...]}`, every cell in range,
    /// sorted by `(q, p)`.
    pub fn to_json(&self) -> String {
        let t = JsonTable { dims: self.cells().map(|(p, q, d)| [p as u128, q as u128, d]).collect(), a: &self.a };
        serde_json::to_string(&t).expect("table serializes")
    }
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Checks `sum_j dim(R̄_j) t^j (1-t)^N = sum_{p,q} (-1)^p dim K_{p,q} t^{p+q}`.
///
/// `hilbert` is `dim R̄_j` by degree and `n` the number of variables. The
/// table must cover every nonzero cell.
pub fn euler_identity_holds(hilbert: &[usize], n: usize, t: &BettiTable) -> bool {
    if t.get(0, 0) != 1 {
        return false;
    }
    let mut lhs: Vec<BigInt> = hilbert.iter().map(|&h| BigInt::from(h)).collect();
    let one_minus_t = [BigInt::one(), -BigInt::one()];
    for _ in 0..n {
        lhs = poly_mul(&lhs, &one_minus_t);
    }
    let mut rhs = vec![BigInt::zero(); t.pmax + t.qmax + 1];
    for (p, q, d) in t.cells() {
        let d = BigInt::from(d);
        if p % 2 == 0 {
            rhs[p + q] += d;
        } else {
            rhs[p + q] -= d;
        }
    }
    let len = lhs.len().max(rhs.len());
    lhs.resize(len, BigInt::zero());
    rhs.resize(len, BigInt::zero());
    lhs == rhs
}

/// [`euler_identity_holds`] for the table of `a`, reading the Hilbert
/// function off the standard basis. Incomplete tables fail.
pub fn hilbert_consistency(a: &DimVector, t: &BettiTable) -> bool {
    let b1 = basis_r1(a).len();
    if t.pmax < b1 || t.qmax < a.regularity() || &t.a != a {
        return false;
    }
    let hilbert: Vec<usize> = crate::lattice::standard_basis_indices(a).values().map(Vec::len).collect();
    euler_identity_holds(&hilbert, b1, t)
}
