//! Explicit Koszul cycles that certify `K_{p,q} != 0`, and an exact check
//! that they are cycles but not boundaries.
//!
//! Two families are built here:
//!
//! * row one, any `a`: `(z_{w_1} ∧ ... ∧ z_{w_p}) ⊗ z_{(0,...,0,1)}` with the
//!   `w_i` taken from the annihilator of `z_{(0,...,0,1)}`;
//! * every row, `a = 1^n`: the core `z_{(0^{n-1},1)} ⋯ z_{(0^{n-q},1^q)}`
//!   wedged against a set between `D` and `A` (see [`divisor_set`] and
//!   [`annihilator_set`]).
//!
//! Support elements need not lie in `B_1`; they are expanded first and the
//! wedge is multiplied out. The wedge is taken in ascending order of the
//! support, which fixes the overall sign.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::koszul::{subsets, KoszulComplex, Subset};
use crate::lattice::{z_set_independent, DimVector, MultiIndex};
use crate::linalg::SparseVec;
use crate::straighten::{ArtinianRing, Monomial};

fn cube_point(bits: impl IntoIterator<Item = u8>) -> MultiIndex {
    MultiIndex::new(bits.into_iter().collect())
}

fn check_row(n: usize, q: usize) -> Result<()> {
    if q == 0 || q >= n {
        return Err(Error::OutOfRange(format!("row q = {q} needs 1 <= q <= n - 1 = {}", n.saturating_sub(1))));
    }
    Ok(())
}

fn all_cube_points(n: usize) -> impl Iterator<Item = MultiIndex> {
    (0u32..1 << n).map(move |m| cube_point((0..n).map(|i| (m >> (n - 1 - i) & 1) as u8)))
}

/// `z_{(0^{n-1},1)} · z_{(0^{n-2},1^2)} ⋯ z_{(0^{n-q},1^q)}` on `1^n`.
pub fn witness_core(n: usize, q: usize) -> Result<Monomial> {
    check_row(n, q)?;
    Ok(Monomial::new(
        (1..=q).map(|k| cube_point((0..n).map(|i| u8::from(i >= n - k)))).collect(),
    ))
}

/// The points of `1^n` whose `z` kills [`witness_core`]: those with a zero
/// among the last `q` coordinates, plus `(0^{n-q},1^q)`, minus the chain
/// `(0,1^i,0^{n-i-1})` for `i = 0..=q`. Sorted.
pub fn annihilator_set(n: usize, q: usize) -> Result<Vec<MultiIndex>> {
    check_row(n, q)?;
    let excluded: Vec<MultiIndex> = (0..=q)
        .map(|i| cube_point((0..n).map(|k| u8::from(k >= 1 && k <= i))))
        .collect();
    let full_tail = cube_point((0..n).map(|k| u8::from(k >= n - q)));
    Ok(all_cube_points(n)
        .filter(|v| v.coords()[n - q..].contains(&0) || *v == full_tail)
        .filter(|v| !excluded.contains(v))
        .collect())
}

/// `(v_1, 0^{n-q-1}, v_{n-q+1}, ..., v_n)` other than `0` and
/// `(1, 0^{n-q-1}, 1^q)`. Sorted.
pub fn divisor_set(n: usize, q: usize) -> Result<Vec<MultiIndex>> {
    check_row(n, q)?;
    let top = cube_point((0..n).map(|k| u8::from(k == 0 || k >= n - q)));
    Ok(all_cube_points(n)
        .filter(|v| v.coords()[1..n - q].iter().all(|&x| x == 0))
        .filter(|v| v.weight() > 0 && *v != top)
        .collect())
}

/// Points whose `z` kills `z_{(0,...,0,1)}`: `(i_1,...,i_{n-1},0)` not all
/// zero, and `(0,...,0,j)` for `2 <= j <= a_n`. Sorted.
pub fn kp1_annihilator_set(a: &DimVector) -> Result<Vec<MultiIndex>> {
    let n = a.len();
    if n < 2 {
        return Err(Error::OutOfRange("the row-one witness needs at least two factors".into()));
    }
    let last = a.entries()[n - 1];
    let mut out: Vec<MultiIndex> = a
        .poset()
        .into_iter()
        .filter(|v| {
            let c = v.coords();
            (c[n - 1] == 0 && c[..n - 1].iter().any(|&x| x > 0))
                || (c[..n - 1].iter().all(|&x| x == 0) && c[n - 1] >= 2 && c[n - 1] <= last)
        })
        .collect();
    out.sort();
    Ok(out)
}

/// `(z_{v^1} ∧ ... ∧ z_{v^p}) ⊗ core` in `∧^p R̄_1 ⊗ R̄_q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleSpec {
    pub a: DimVector,
    pub p: usize,
    pub q: usize,
    pub support: Vec<MultiIndex>,
    #[serde(serialize_with = "display_str")]
    pub core: Monomial,
}

fn display_str<S: serde::Serializer>(m: &Monomial, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(m)
}

impl CycleSpec {
    /// Row-one witness on `a`: the first `p` points of
    /// [`kp1_annihilator_set`] against `z_{(0,...,0,1)}`.
    pub fn row_one(a: &DimVector, p: usize) -> Result<Self> {
        let v = kp1_annihilator_set(a)?;
        if p == 0 || p > v.len() {
            return Err(Error::OutOfRange(format!("p = {p} outside 1..={}", v.len())));
        }
        let n = a.len();
        let core = Monomial::new(vec![MultiIndex::new((0..n).map(|i| u8::from(i == n - 1)).collect())]);
        Ok(CycleSpec { a: a.clone(), p, q: 1, support: v[..p].to_vec(), core })
    }

    /// Row-`q` witness on `1^n`: `D` extended by the smallest points of
    /// `A \ D`, for `2^{q+1} - 2 <= p <= |A|`. Needs `q <= n - 2`, otherwise
    /// `D` is not contained in `A`.
    pub fn cube(n: usize, q: usize, p: usize) -> Result<Self> {
        if q + 2 > n {
            return Err(Error::OutOfRange(format!("row q = {q} needs q <= n - 2")));
        }
        let a_set = annihilator_set(n, q)?;
        let d_set = divisor_set(n, q)?;
        if p < d_set.len() || p > a_set.len() {
            return Err(Error::OutOfRange(format!("p = {p} outside {}..={}", d_set.len(), a_set.len())));
        }
        let mut support = d_set.clone();
        support.extend(a_set.iter().filter(|v| !d_set.contains(v)).take(p - d_set.len()).cloned());
        support.sort();
        let a = DimVector::new(&vec![1; n])?;
        Ok(CycleSpec { a, p, q, support, core: witness_core(n, q)? })
    }

    /// Checks sizes and membership; annihilation is left to the cycle test.
    pub fn check(&self) -> Result<()> {
        if self.support.len() != self.p {
            return Err(Error::LengthMismatch { expected: self.p, got: self.support.len() });
        }
        if self.core.degree() != self.q {
            return Err(Error::LengthMismatch { expected: self.q, got: self.core.degree() });
        }
        for v in self.support.iter().chain(self.core.factors()) {
            self.a.check(v)?;
        }
        Ok(())
    }
}

impl fmt::Display for CycleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "a = {}, p = {}, q = {}", self.a, self.p, self.q)?;
        let wedge: Vec<String> = self.support.iter().map(|v| format!("z[{v}]")).collect();
        write!(f, "({}) ⊗ {}", wedge.join(" ∧ "), self.core)
    }
}

/// Coordinates of the cycle in the chain basis `complex.chain_basis(p, q)`.
pub fn build_cycle(complex: &KoszulComplex, spec: &CycleSpec) -> Result<SparseVec> {
    spec.check()?;
    if &spec.a != complex.dims() {
        return Err(Error::OutOfRange(format!("cycle on {} given a complex on {}", spec.a, complex.dims())));
    }
    if !z_set_independent(&spec.a, &spec.support) {
        return Err(Error::DependentSupport);
    }
    let ring = complex.ring();
    let mut support = spec.support.clone();
    support.sort();

    // Multiply out the wedge, keeping subsets in ascending order.
    let mut wedge: HashMap<Subset, BigInt> = HashMap::from([(0, BigInt::one())]);
    for v in &support {
        let expansion: Vec<(usize, BigInt)> = ring
            .expand_in_b1(v)?
            .terms()
            .map(|(m, c)| (complex.b1_position(&m.factors()[0]).expect("degree-one normal form"), c.clone()))
            .collect();
        let mut next: HashMap<Subset, BigInt> = HashMap::new();
        for (s, c) in &wedge {
            for (b, x) in &expansion {
                if s >> b & 1 == 1 {
                    continue;
                }
                let swaps = (s >> b).count_ones();
                let term = if swaps % 2 == 0 { c * x } else { -(c * x) };
                *next.entry(s | 1 << b).or_default() += term;
            }
        }
        next.retain(|_, c| !c.is_zero());
        wedge = next;
    }

    let core = ring.straighten(&spec.core)?;
    let nm = ring.basis(spec.q).len();
    let rank: HashMap<Subset, usize> =
        subsets(complex.num_generators(), spec.p).into_iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut out: BTreeMap<usize, BigInt> = BTreeMap::new();
    for (s, c) in &wedge {
        for (m, x) in core.terms() {
            let mi = ring.basis(spec.q).index_of(m).expect("standard monomial");
            *out.entry(rank[s] * nm + mi).or_default() += c * x;
        }
    }
    let out: SparseVec = out.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    if out.is_empty() {
        return Err(Error::OutOfRange("the cycle vanishes".into()));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub is_cycle: bool,
    pub is_boundary: bool,
}

impl WitnessReport {
    /// A cycle that is not a boundary: a nonzero class.
    pub fn certifies_nonzero(&self) -> bool {
        self.is_cycle && !self.is_boundary
    }
}

/// Whether a chain vector in `∧^p ⊗ R̄_q` is a cycle, and whether it is a
/// boundary. The boundary test is an exact span computation inside the
/// relevant weight block, whatever backend is used elsewhere.
pub fn check_chain(complex: &KoszulComplex, p: usize, q: usize, v: &SparseVec) -> Result<WitnessReport> {
    let is_cycle = complex.apply_differential(p, q, v).is_empty();
    if v.is_empty() {
        return Ok(WitnessReport { is_cycle, is_boundary: true });
    }
    if q == 0 {
        return Ok(WitnessReport { is_cycle, is_boundary: false });
    }
    let basis = complex.chain_basis(p, q);
    let weights: Vec<usize> = v.iter().map(|(i, _)| complex.weight_of(q, &basis[*i])).collect();
    if weights.iter().any(|&w| w != weights[0]) {
        // Split by weight: a boundary iff every homogeneous piece is.
        let mut parts: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for ((i, c), w) in v.iter().zip(&weights) {
            parts.entry(*w).or_default().push((*i, c.clone()));
        }
        let mut is_boundary = true;
        for part in parts.values() {
            is_boundary &= check_chain(complex, p, q, part)?.is_boundary;
        }
        return Ok(WitnessReport { is_cycle, is_boundary });
    }
    let blocks = complex.differential_blocks(p + 1, q - 1)?;
    let Some(block) = blocks.iter().find(|b| b.weight == weights[0]) else {
        return Ok(WitnessReport { is_cycle, is_boundary: false });
    };
    let local: HashMap<usize, usize> = block.rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let target: SparseVec = v.iter().map(|(i, c)| (local[i], c.clone())).collect();
    let mut target = target;
    target.sort_by_key(|(i, _)| *i);
    Ok(WitnessReport { is_cycle, is_boundary: block.matrix.in_column_span(&target) })
}

pub fn verify_witness(complex: &KoszulComplex, spec: &CycleSpec) -> Result<WitnessReport> {
    let v = build_cycle(complex, spec)?;
    check_chain(complex, spec.p, spec.q, &v)
}

/// `u` with `z_u in B_1` dividing `m`.
pub fn b1_divisors(complex: &KoszulComplex, m: &Monomial) -> Result<Vec<MultiIndex>> {
    let ring: &ArtinianRing = complex.ring();
    let mut out = Vec::new();
    for u in complex.b1() {
        if ring.divides(u, m)? {
            out.push(u.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(s: &str) -> MultiIndex {
        s.parse().unwrap()
    }

    #[test]
    fn cores() {
        let m = witness_core(4, 2).unwrap();
        assert_eq!(m.factors(), [mi("0,0,0,1"), mi("0,0,1,1")]);
        assert_eq!(witness_core(3, 1).unwrap().factors(), [mi("0,0,1")]);
        for n in 2..7 {
            for q in 1..n {
                assert_eq!(witness_core(n, q).unwrap().rank(), q * (q + 1) / 2);
            }
        }
        assert!(witness_core(3, 3).is_err());
        assert!(witness_core(3, 0).is_err());
    }

    #[test]
    fn set_sizes() {
        assert_eq!(annihilator_set(4, 2).unwrap().len(), 10);
        assert_eq!(annihilator_set(3, 1).unwrap().len(), 3);
        assert_eq!(divisor_set(4, 2).unwrap().len(), 6);
        for n in 2..=5usize {
            for q in 1..n {
                let a = annihilator_set(n, q).unwrap();
                let d = divisor_set(n, q).unwrap();
                assert_eq!(a.len(), (1 << n) - (1 << (n - q)) - q);
                assert_eq!(d.len(), (1 << (q + 1)) - 2);
                // With no zero block between v_1 and the tail, D picks up the
                // excluded chain points, so the inclusion needs q <= n - 2.
                assert_eq!(d.iter().all(|v| a.contains(v)), q + 2 <= n, "n={n} q={q}");
            }
        }
    }

    #[test]
    fn row_one_sets() {
        let a: DimVector = "2,2,1".parse().unwrap();
        assert_eq!(kp1_annihilator_set(&a).unwrap().len(), 8);
        let a: DimVector = "1,1,1".parse().unwrap();
        assert_eq!(kp1_annihilator_set(&a).unwrap().len(), 3);
        let a: DimVector = "3,2,2".parse().unwrap();
        assert_eq!(kp1_annihilator_set(&a).unwrap().len(), 4 * 3 + 2 - 2);
        assert!(kp1_annihilator_set(&"3".parse().unwrap()).is_err());
    }

    #[test]
    fn small_witnesses() {
        let k = KoszulComplex::new("1,1,1".parse().unwrap()).unwrap();
        for p in 1..=3 {
            let spec = CycleSpec::row_one(k.dims(), p).unwrap();
            let r = verify_witness(&k, &spec).unwrap();
            assert!(r.certifies_nonzero(), "p={p}");
        }
        let spec = CycleSpec::cube(3, 1, 2).unwrap();
        assert!(verify_witness(&k, &spec).unwrap().certifies_nonzero());
        assert!(CycleSpec::cube(3, 2, 4).is_err());
    }

    #[test]
    fn dependent_support_rejected() {
        let k = KoszulComplex::new("1,1".parse().unwrap()).unwrap();
        let spec = CycleSpec {
            a: k.dims().clone(),
            p: 2,
            q: 1,
            support: vec![mi("0,1"), mi("1,0")],
            core: Monomial::new(vec![mi("0,1")]),
        };
        assert!(matches!(build_cycle(&k, &spec), Err(Error::DependentSupport)));
    }
}
