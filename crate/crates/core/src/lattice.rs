//! The product-of-chains poset `P(a)`, increasing lattice paths and their
//! descents, and the index sets of the standard basis.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dimension vector `(a_1, ..., a_n)` of a Segre product `P^{a_1} x ... x P^{a_n}`.
///
/// Always normalized: entries sorted descending, zeros removed. Entries are
/// capped at 255 so that multi-indices fit in bytes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct DimVector(Vec<u8>);

impl DimVector {
    pub fn new(raw: &[u32]) -> Result<Self> {
        Self::normalize(raw).map(|(d, _)| d)
    }

    /// Normalizes `raw`, also reporting whether the normalized vector differs
    /// from the input (reordering or dropped zeros).
    pub fn normalize(raw: &[u32]) -> Result<(Self, bool)> {
        let mut entries = Vec::with_capacity(raw.len());
        for &x in raw {
            if x > 255 {
                return Err(Error::EntryTooLarge(x));
            }
            if x > 0 {
                entries.push(x as u8);
            }
        }
        if entries.is_empty() {
            return Err(Error::EmptyDimVector);
        }
        entries.sort_unstable_by(|a, b| b.cmp(a));
        let changed = entries.len() != raw.len()
            || entries.iter().zip(raw).any(|(&e, &r)| e as u32 != r);
        Ok((DimVector(entries), changed))
    }

    pub fn entries(&self) -> &[u8] {
        &self.0
    }

    /// Number of factors `n`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|a| = a_1 + ... + a_n`.
    pub fn total(&self) -> usize {
        self.0.iter().map(|&x| x as usize).sum()
    }

    /// Castelnuovo-Mumford regularity `a_2 + ... + a_n`.
    pub fn regularity(&self) -> usize {
        self.total() - self.0[0] as usize
    }

    /// Number of points of the poset, `prod (a_k + 1)`.
    pub fn poset_size(&self) -> usize {
        self.0.iter().map(|&x| x as usize + 1).product()
    }

    pub fn zero(&self) -> MultiIndex {
        MultiIndex(vec![0; self.len()])
    }

    pub fn top(&self) -> MultiIndex {
        MultiIndex(self.0.clone())
    }

    pub fn contains(&self, v: &MultiIndex) -> bool {
        v.0.len() == self.0.len() && v.0.iter().zip(&self.0).all(|(x, a)| x <= a)
    }

    pub fn check(&self, v: &MultiIndex) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::OutOfPoset {
                index: v.0.clone(),
                dims: self.0.clone(),
            })
        }
    }

    /// All points of `P(a)` in lexicographic order.
    pub fn poset(&self) -> Vec<MultiIndex> {
        let mut out = Vec::with_capacity(self.poset_size());
        let mut cur = vec![0u8; self.len()];
        loop {
            out.push(MultiIndex(cur.clone()));
            let mut k = self.len();
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if cur[k] < self.0[k] {
                    cur[k] += 1;
                    for c in &mut cur[k + 1..] {
                        *c = 0;
                    }
                    break;
                }
            }
        }
    }

    /// Points of `P(a)` grouped by weight `|v|`, each group in lexicographic order.
    pub fn weight_classes(&self) -> Vec<Vec<MultiIndex>> {
        let mut classes = vec![Vec::new(); self.total() + 1];
        for v in self.poset() {
            classes[v.weight()].push(v);
        }
        classes
    }

    /// `multinomial(|a|; a_1, ..., a_n)`, the degree of the Segre variety.
    pub fn multinomial(&self) -> u128 {
        let mut acc: u128 = 1;
        let mut filled: u128 = 0;
        for &x in &self.0 {
            for i in 1..=x as u128 {
                filled += 1;
                acc = acc * filled / i;
            }
        }
        acc
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

impl FromStr for DimVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DimVector::new(&parse_u32_list(s)?)
    }
}

impl TryFrom<Vec<u32>> for DimVector {
    type Error = Error;

    fn try_from(v: Vec<u32>) -> Result<Self> {
        DimVector::new(&v)
    }
}

impl From<DimVector> for Vec<u32> {
    fn from(d: DimVector) -> Self {
        d.0.into_iter().map(u32::from).collect()
    }
}

pub(crate) fn parse_u32_list(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("expected a non-negative integer, got {t:?}")))
        })
        .collect()
}

fn write_tuple(f: &mut fmt::Formatter<'_>, xs: &[u8]) -> fmt::Result {
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

/// A point `(i_1, ..., i_n)` of `P(a)`; indexes one Segre variable `z_i`.
///
/// The derived `Ord` (lexicographic) is the fixed total order used to break
/// ties between points of equal weight.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex(pub Vec<u8>);

impl MultiIndex {
    pub fn new(coords: Vec<u8>) -> Self {
        MultiIndex(coords)
    }

    pub fn coords(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().map(|&x| x as usize).sum()
    }

    fn same_len(&self, other: &MultiIndex) -> Result<()> {
        if self.len() == other.len() {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                expected: self.len(),
                got: other.len(),
            })
        }
    }

    /// Componentwise order `u <= v`.
    pub fn leq(&self, other: &MultiIndex) -> Result<bool> {
        self.same_len(other)?;
        Ok(self.le_unchecked(other))
    }

    pub(crate) fn le_unchecked(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(x, y)| x <= y)
    }

    /// Componentwise `(min, max)`.
    pub fn meet_join(&self, other: &MultiIndex) -> Result<(MultiIndex, MultiIndex)> {
        self.same_len(other)?;
        Ok(self.meet_join_unchecked(other))
    }

    pub(crate) fn meet_join_unchecked(&self, other: &MultiIndex) -> (MultiIndex, MultiIndex) {
        let (lo, hi) = self
            .0
            .iter()
            .zip(&other.0)
            .map(|(&x, &y)| (x.min(y), x.max(y)))
            .unzip();
        (MultiIndex(lo), MultiIndex(hi))
    }

    fn strictly_below(&self, other: &MultiIndex) -> Result<()> {
        self.same_len(other)?;
        if self != other && self.le_unchecked(other) {
            Ok(())
        } else {
            Err(Error::NotStrictlyLess(self.0.clone(), other.0.clone()))
        }
    }

    /// First (1-based) coordinate where `self < other` differ. Requires `self < other`.
    pub fn first_diff(&self, other: &MultiIndex) -> Result<usize> {
        self.strictly_below(other)?;
        Ok(self.first_diff_unchecked(other))
    }

    /// Last (1-based) coordinate where `self < other` differ. Requires `self < other`.
    pub fn last_diff(&self, other: &MultiIndex) -> Result<usize> {
        self.strictly_below(other)?;
        Ok(self.last_diff_unchecked(other))
    }

    /// 1-based; `usize::MAX` when the two points agree.
    pub(crate) fn first_diff_unchecked(&self, other: &MultiIndex) -> usize {
        self.0
            .iter()
            .zip(&other.0)
            .position(|(x, y)| x != y)
            .map_or(usize::MAX, |i| i + 1)
    }

    /// 1-based; `0` when the two points agree.
    pub(crate) fn last_diff_unchecked(&self, other: &MultiIndex) -> usize {
        self.0
            .iter()
            .zip(&other.0)
            .rposition(|(x, y)| x != y)
            .map_or(0, |i| i + 1)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

impl FromStr for MultiIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let raw = parse_u32_list(s)?;
        raw.iter()
            .map(|&x| u8::try_from(x).map_err(|_| Error::EntryTooLarge(x)))
            .collect::<Result<Vec<u8>>>()
            .map(MultiIndex)
    }
}

/// An increasing lattice path from `0` to `a`, stored as its step sequence:
/// `steps[t-1]` is the (1-based) coordinate that increases at time `t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePath {
    steps: Vec<u8>,
    dims: usize,
}

impl LatticePath {
    /// Builds a path in `L(a)` from a step sequence, checking step counts.
    pub fn from_steps(a: &DimVector, steps: Vec<u8>) -> Result<Self> {
        let mut counts = vec![0u8; a.len()];
        for &s in &steps {
            if s == 0 || s as usize > a.len() {
                return Err(Error::OutOfRange(format!("step {s} for {} factors", a.len())));
            }
            counts[s as usize - 1] += 1;
        }
        if counts != a.entries() {
            return Err(Error::OutOfRange(
                "step multiplicities do not match the dimension vector".into(),
            ));
        }
        Ok(LatticePath { steps, dims: a.len() })
    }

    pub fn steps(&self) -> &[u8] {
        &self.steps
    }

    pub fn length(&self) -> usize {
        self.steps.len()
    }

    /// `gamma(t)` for `0 <= t <= |a|`.
    pub fn point(&self, t: usize) -> MultiIndex {
        let mut p = vec![0u8; self.dims];
        for &s in &self.steps[..t] {
            p[s as usize - 1] += 1;
        }
        MultiIndex(p)
    }

    pub fn points(&self) -> Vec<MultiIndex> {
        let mut cur = vec![0u8; self.dims];
        let mut out = vec![MultiIndex(cur.clone())];
        for &s in &self.steps {
            cur[s as usize - 1] += 1;
            out.push(MultiIndex(cur.clone()));
        }
        out
    }

    /// Positions `t` (1-based) with `s_t > s_{t+1}`.
    pub fn descents(&self) -> Vec<usize> {
        self.steps
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0] > w[1])
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// The points `gamma(t)` at the descents; the factors of `m_gamma`.
    pub fn descent_points(&self) -> Vec<MultiIndex> {
        let pts = self.points();
        self.descents().into_iter().map(|t| pts[t].clone()).collect()
    }
}

impl fmt::Display for LatticePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// All paths in `L(a)`, lexicographic in the step sequence.
pub fn enumerate_paths(a: &DimVector) -> Vec<LatticePath> {
    let mut steps: Vec<u8> = a
        .entries()
        .iter()
        .enumerate()
        .flat_map(|(k, &x)| std::iter::repeat_n(k as u8 + 1, x as usize))
        .collect();
    let mut out = vec![LatticePath { steps: steps.clone(), dims: a.len() }];
    while next_permutation(&mut steps) {
        out.push(LatticePath { steps: steps.clone(), dims: a.len() });
    }
    out
}

fn next_permutation(xs: &mut [u8]) -> bool {
    if xs.len() < 2 {
        return false;
    }
    let mut i = xs.len() - 1;
    while i > 0 && xs[i - 1] >= xs[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = xs.len() - 1;
    while xs[j] <= xs[i - 1] {
        j -= 1;
    }
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

/// The unique descent-free path from `0` to `v`: coordinates filled in order.
pub fn no_descent_path(v: &MultiIndex) -> LatticePath {
    let steps = v
        .coords()
        .iter()
        .enumerate()
        .flat_map(|(k, &x)| std::iter::repeat_n(k as u8 + 1, x as usize))
        .collect();
    LatticePath { steps, dims: v.len() }
}

/// Concatenates the descent-free paths between consecutive points of a chain
/// `0 = u^0 < u^1 < ... < u^{r+1}`. The result ends at the last point.
pub fn concat_paths(points: &[MultiIndex]) -> Result<LatticePath> {
    let first = points.first().ok_or(Error::InvalidChain)?;
    if first.coords().iter().any(|&x| x != 0) {
        return Err(Error::InvalidChain);
    }
    let mut steps = Vec::new();
    for w in points.windows(2) {
        w[0].same_len(&w[1])?;
        if w[0] == w[1] || !w[0].le_unchecked(&w[1]) {
            return Err(Error::InvalidChain);
        }
        let diff = MultiIndex(w[1].0.iter().zip(&w[0].0).map(|(x, y)| x - y).collect());
        steps.extend_from_slice(no_descent_path(&diff).steps());
    }
    Ok(LatticePath { steps, dims: first.len() })
}

/// Standard basis index data: for every path, the support of `m_gamma`,
/// grouped by degree `|Desc(gamma)|`. Paths within a degree keep the
/// lexicographic enumeration order.
pub fn standard_basis_indices(a: &DimVector) -> BTreeMap<usize, Vec<(LatticePath, Vec<MultiIndex>)>> {
    let mut out: BTreeMap<usize, Vec<_>> = BTreeMap::new();
    for path in enumerate_paths(a) {
        let support = path.descent_points();
        out.entry(support.len()).or_default().push((path, support));
    }
    out
}

/// Points `v` with `l(0, v) > f(v, a)`: the `z_v` forming the degree-one
/// standard basis. Listed in lexicographic order.
pub fn basis_r1(a: &DimVector) -> Vec<MultiIndex> {
    let zero = a.zero();
    let top = a.top();
    a.poset()
        .into_iter()
        .filter(|v| *v != zero && *v != top)
        .filter(|v| zero.last_diff_unchecked(v) > v.first_diff_unchecked(&top))
        .collect()
}

/// Whether `{z_v : v in set}` is linearly independent in the degree-one part
/// of the Artinian reduction: every weight class must keep a point outside `set`.
pub fn z_set_independent(a: &DimVector, set: &[MultiIndex]) -> bool {
    let classes = a.weight_classes();
    classes
        .iter()
        .all(|class| class.iter().any(|v| !set.contains(v)))
}
