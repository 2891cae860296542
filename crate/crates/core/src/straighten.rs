//! Monomials in the Artinian reduction `R̄ = R / (x_0, ..., x_{|a|})` of the
//! Segre coordinate ring, and the straightening algorithm that rewrites any
//! monomial in the standard basis `{m_gamma}`.
//!
//! Two families of relations are used:
//!
//! * the straightening law `z_u z_v = z_{min(u,v)} z_{max(u,v)}`;
//! * the linear relations `sum_{|v| = k} z_v = 0` coming from the
//!   parameters `x_k`, used as `z_v = -sum_{v' != v, |v'| = |v|} z_{v'}`.
//!
//! Both are homogeneous for degree and for rank (sum of factor weights), so
//! every term of a straightened expression has the bidegree of its input.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use parking_lot::RwLock;

use crate::error::{Error, Result};
use crate::lattice::{standard_basis_indices, DimVector, MultiIndex};

/// A product `z_{v^1} ... z_{v^r}` kept sorted by weight, ties broken by the
/// lexicographic order on multi-indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    factors: Vec<MultiIndex>,
}

fn factor_key(v: &MultiIndex) -> (usize, &MultiIndex) {
    (v.weight(), v)
}

impl Monomial {
    pub fn new(mut factors: Vec<MultiIndex>) -> Self {
        factors.sort_by(|x, y| factor_key(x).cmp(&factor_key(y)));
        Monomial { factors }
    }

    pub fn one() -> Self {
        Monomial { factors: Vec::new() }
    }

    pub fn factors(&self) -> &[MultiIndex] {
        &self.factors
    }

    pub fn degree(&self) -> usize {
        self.factors.len()
    }

    /// Sum of factor weights.
    pub fn rank(&self) -> usize {
        self.factors.iter().map(MultiIndex::weight).sum()
    }

    /// Sorted weight sequence `(|v^1|, ..., |v^r|)`.
    pub fn lexrk(&self) -> Vec<usize> {
        self.factors.iter().map(MultiIndex::weight).collect()
    }

    pub fn times(&self, v: &MultiIndex) -> Monomial {
        let mut factors = self.factors.clone();
        let pos = factors.partition_point(|x| factor_key(x) <= factor_key(v));
        factors.insert(pos, v.clone());
        Monomial { factors }
    }

    fn replaced(&self, i: usize, v: &MultiIndex) -> Monomial {
        let mut factors = self.factors.clone();
        factors[i] = v.clone();
        Monomial::new(factors)
    }

    /// Parses whitespace-separated comma tuples, e.g. `"0,0,0,1 0,1,0,1"`.
    /// An empty string or `"1"` is the unit monomial.
    pub fn parse_in(a: &DimVector, s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Monomial::one());
        }
        let factors = s
            .split_whitespace()
            .map(|t| {
                let v: MultiIndex = t.parse()?;
                a.check(&v)?;
                Ok(v)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Monomial::new(factors))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, v) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("·")?;
            }
            write!(f, "z[{v}]")?;
        }
        Ok(())
    }
}

impl FromStr for Monomial {
    type Err = Error;

    /// Parses without a poset bounds check; see [`Monomial::parse_in`].
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Monomial::one());
        }
        let factors = s
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<Vec<MultiIndex>>>()?;
        Ok(Monomial::new(factors))
    }
}

/// Integer linear combination of monomials. No zero coefficients are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinComb {
    terms: BTreeMap<Monomial, BigInt>,
}

impl LinComb {
    pub fn zero() -> Self {
        LinComb::default()
    }

    pub fn monomial(m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(m, BigInt::one());
        LinComb { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, m: Monomial, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &LinComb, c: &BigInt) {
        for (m, x) in &other.terms {
            self.add_term(m.clone(), &(x * c));
        }
    }
}

impl fmt::Display for LinComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            let sign = if c.is_negative() { '-' } else { '+' };
            write!(f, "{sign}{} · {m}", c.abs())?;
        }
        Ok(())
    }
}

/// Degree and rank of a homogeneous element of `R̄`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bidegree {
    pub degree: usize,
    pub rank: usize,
}

impl Bidegree {
    pub fn of(m: &Monomial) -> Self {
        Bidegree { degree: m.degree(), rank: m.rank() }
    }

    /// Whether `R̄` can be nonzero here: rank must reach `C(degree + 1, 2)`.
    pub fn can_be_nonzero(&self) -> bool {
        self.rank >= self.degree * (self.degree + 1) / 2
    }
}

/// Standard monomials of one degree, with an index lookup.
#[derive(Clone, Debug, Default)]
pub struct DegreeBasis {
    pub monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl DegreeBasis {
    fn new(monomials: Vec<Monomial>) -> Self {
        let index = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        DegreeBasis { monomials, index }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

/// The Artinian reduction for a fixed dimension vector, with a shared
/// straightening cache. Safe to share between threads.
pub struct ArtinianRing {
    dims: DimVector,
    zero: MultiIndex,
    top: MultiIndex,
    classes: Vec<Vec<MultiIndex>>,
    basis: Vec<DegreeBasis>,
    cache: RwLock<HashMap<Monomial, LinComb>>,
}

impl fmt::Debug for ArtinianRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ArtinianRing").field("dims", &self.dims).finish_non_exhaustive()
    }
}

impl ArtinianRing {
    pub fn new(dims: DimVector) -> Self {
        let mut basis: Vec<DegreeBasis> = Vec::new();
        for (deg, entries) in standard_basis_indices(&dims) {
            let mut ms: Vec<Monomial> =
                entries.into_iter().map(|(_, sup)| Monomial::new(sup)).collect();
            ms.sort();
            if basis.len() <= deg {
                basis.resize_with(deg + 1, DegreeBasis::default);
            }
            basis[deg] = DegreeBasis::new(ms);
        }
        ArtinianRing {
            zero: dims.zero(),
            top: dims.top(),
            classes: dims.weight_classes(),
            basis,
            cache: RwLock::new(HashMap::new()),
            dims,
        }
    }

    pub fn dims(&self) -> &DimVector {
        &self.dims
    }

    /// Standard basis in degree `q` (empty above the regularity).
    pub fn basis(&self, q: usize) -> &DegreeBasis {
        static EMPTY: std::sync::OnceLock<DegreeBasis> = std::sync::OnceLock::new();
        self.basis.get(q).unwrap_or_else(|| EMPTY.get_or_init(DegreeBasis::default))
    }

    /// `dim R̄_q` for every `q` from 0 to the regularity.
    pub fn hilbert_function(&self) -> Vec<usize> {
        self.basis.iter().map(DegreeBasis::len).collect()
    }

    /// Standard monomials of degree `q` and the given rank.
    pub fn basis_of_bidegree(&self, bd: Bidegree) -> impl Iterator<Item = &Monomial> {
        self.basis(bd.degree).monomials.iter().filter(move |m| m.rank() == bd.rank)
    }

    fn check_monomial(&self, m: &Monomial) -> Result<()> {
        m.factors().iter().try_for_each(|v| self.dims.check(v))
    }

    /// Whether `m = m_gamma` for some lattice path: a strict chain
    /// `u^1 < ... < u^r` with `f(u^i, u^{i+1}) < l(u^{i-1}, u^i)` at every
    /// `i`, where `u^0 = 0` and `u^{r+1} = a`.
    pub fn is_standard(&self, m: &Monomial) -> bool {
        let f = m.factors();
        if f.iter().any(|v| !self.dims.contains(v)) {
            return false;
        }
        (0..f.len()).all(|i| {
            let prev = if i == 0 { &self.zero } else { &f[i - 1] };
            let next = f.get(i + 1).unwrap_or(&self.top);
            prev != &f[i]
                && f[i] != *next
                && prev.le_unchecked(&f[i])
                && f[i].le_unchecked(next)
                && f[i].first_diff_unchecked(next) < prev.last_diff_unchecked(&f[i])
        })
    }

    /// Normal form of `m` in the standard basis.
    pub fn straighten(&self, m: &Monomial) -> Result<LinComb> {
        self.check_monomial(m)?;
        if let Some(hit) = self.cache.read().get(m) {
            return Ok(hit.clone());
        }
        let mut memo = HashMap::new();
        let mut stack = HashSet::new();
        let out = self.straighten_rec(m, &mut memo, &mut stack)?;
        self.cache.write().extend(memo);
        Ok(out)
    }

    fn straighten_rec(
        &self,
        m: &Monomial,
        memo: &mut HashMap<Monomial, LinComb>,
        stack: &mut HashSet<Monomial>,
    ) -> Result<LinComb> {
        let f = m.factors();
        // z_0 = x_0 and z_a = x_{|a|} vanish.
        if f.first() == Some(&self.zero) || f.last() == Some(&self.top) {
            return Ok(LinComb::zero());
        }
        if let Some(hit) = memo.get(m) {
            return Ok(hit.clone());
        }
        if let Some(hit) = self.cache.read().get(m) {
            return Ok(hit.clone());
        }
        if !stack.insert(m.clone()) {
            return Err(Error::StraighteningLoop(m.to_string()));
        }

        let result = if let Some(i) = (0..f.len().saturating_sub(1)).find(|&i| !f[i].le_unchecked(&f[i + 1])) {
            // Step 1: straightening law on an incomparable adjacent pair.
            let (lo, hi) = f[i].meet_join_unchecked(&f[i + 1]);
            let mut factors = f.to_vec();
            factors[i] = lo;
            factors[i + 1] = hi;
            let next = Monomial::new(factors);
            if next.lexrk() >= m.lexrk() {
                return Err(Error::StraighteningLoop(m.to_string()));
            }
            self.straighten_rec(&next, memo, stack)?
        } else if let Some(i) = (0..f.len()).rev().find(|&i| self.violates(f, i)) {
            // Step 2: rewrite the factor at the largest violating index with
            // the linear relation of its weight class.
            let mut acc = LinComb::zero();
            let minus_one = -BigInt::one();
            for v in &self.classes[f[i].weight()] {
                if *v == f[i] {
                    continue;
                }
                let sub = self.straighten_rec(&m.replaced(i, v), memo, stack)?;
                acc.add_scaled(&sub, &minus_one);
            }
            acc
        } else {
            // Step 3: m is some m_gamma.
            LinComb::monomial(m.clone())
        };

        stack.remove(m);
        memo.insert(m.clone(), result.clone());
        Ok(result)
    }

    /// Chain condition at factor `i` (0-based) of a weakly increasing chain.
    /// Repeated factors always violate it.
    fn violates(&self, f: &[MultiIndex], i: usize) -> bool {
        let prev = if i == 0 { &self.zero } else { &f[i - 1] };
        let next = f.get(i + 1).unwrap_or(&self.top);
        if prev == &f[i] || f[i] == *next {
            return true;
        }
        f[i].first_diff_unchecked(next) >= prev.last_diff_unchecked(&f[i])
    }

    /// Normal form of `z_v * m`.
    pub fn multiply(&self, v: &MultiIndex, m: &Monomial) -> Result<LinComb> {
        self.dims.check(v)?;
        self.straighten(&m.times(v))
    }

    /// Coordinates of `z_v` in the degree-one standard basis.
    pub fn expand_in_b1(&self, v: &MultiIndex) -> Result<LinComb> {
        self.straighten(&Monomial::new(vec![v.clone()]))
    }

    /// Whether `z_u` divides the standard monomial `m`: some standard `m'` of
    /// one lower degree has `m` in the support of `z_u * m'`.
    pub fn divides(&self, u: &MultiIndex, m: &Monomial) -> Result<bool> {
        self.dims.check(u)?;
        if m.degree() == 0 || m.rank() < u.weight() {
            return Ok(false);
        }
        let bd = Bidegree { degree: m.degree() - 1, rank: m.rank() - u.weight() };
        for cand in self.basis_of_bidegree(bd) {
            if !self.multiply(u, cand)?.coeff(m).is_zero() {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(s: &str) -> ArtinianRing {
        ArtinianRing::new(s.parse().unwrap())
    }

    fn mono(s: &str) -> Monomial {
        s.parse().unwrap()
    }

    #[test]
    fn example_monomials_standardness() {
        let r = ring("1,1,1,1");
        assert!(r.is_standard(&mono("0,0,0,1 0,0,1,1 0,1,1,1")));
        assert!(!r.is_standard(&mono("0,0,0,1 0,1,0,1 1,1,0,1")));
        assert!(r.is_standard(&Monomial::one()));
    }

    #[test]
    fn example_straightening() {
        let r = ring("1,1,1,1");
        let out = r.straighten(&mono("0,0,0,1 0,1,0,1 1,1,0,1")).unwrap();
        assert_eq!(out, LinComb::monomial(mono("0,0,0,1 0,0,1,1 0,1,1,1")));
        assert_eq!(out.to_string(), "+1 · z[0,0,0,1]·z[0,0,1,1]·z[0,1,1,1]");
        // intermediate step of the worked example
        let mid = r.straighten(&mono("0,0,0,1 0,1,0,1 0,1,1,1")).unwrap();
        let mut expect = LinComb::zero();
        expect.add_term(mono("0,0,0,1 0,0,1,1 0,1,1,1"), &BigInt::from(-1));
        assert_eq!(mid, expect);
    }

    #[test]
    fn extremal_factors_vanish() {
        let r = ring("2,1");
        assert!(r.straighten(&mono("0,0 1,0")).unwrap().is_zero());
        assert!(r.straighten(&mono("1,0 2,1")).unwrap().is_zero());
        let r = ring("1,1");
        assert!(r.straighten(&mono("0,1 0,1")).unwrap().is_zero());
    }

    #[test]
    fn multiply_and_expand() {
        let r = ring("1,1");
        let one = Monomial::one();
        let v: MultiIndex = "0,1".parse().unwrap();
        assert_eq!(r.multiply(&v, &one).unwrap(), LinComb::monomial(mono("0,1")));

        let mut minus = LinComb::zero();
        minus.add_term(mono("0,1"), &BigInt::from(-1));
        assert_eq!(r.expand_in_b1(&"1,0".parse().unwrap()).unwrap(), minus);
        assert!(r.expand_in_b1(&"0,0".parse().unwrap()).unwrap().is_zero());
        assert!(r.expand_in_b1(&"1,1".parse().unwrap()).unwrap().is_zero());

        let r = ring("1,1,1,1");
        let m = mono("0,0,1,1 0,1,1,1");
        let prod = r.multiply(&"0,0,0,1".parse().unwrap(), &m).unwrap();
        assert_eq!(prod, LinComb::monomial(mono("0,0,0,1 0,0,1,1 0,1,1,1")));
        let prod = r.multiply(&"1,1,0,1".parse().unwrap(), &mono("0,0,0,1 0,1,0,1")).unwrap();
        assert_eq!(prod, r.straighten(&mono("0,0,0,1 0,1,0,1 1,1,0,1")).unwrap());
    }

    #[test]
    fn divisibility_examples() {
        let r = ring("1,1,1,1");
        let m = mono("0,0,0,1 0,0,1,1 0,1,1,1");
        assert!(r.divides(&"0,1,0,1".parse().unwrap(), &m).unwrap());
        assert!(r.divides(&"1,1,0,1".parse().unwrap(), &m).unwrap());
        // weight 4 exceeds what rank 6 minus any degree-2 standard rank allows
        assert!(!r.divides(&"1,1,1,1".parse().unwrap(), &m).unwrap());
    }

    #[test]
    fn out_of_poset_is_rejected() {
        let r = ring("1,1");
        assert!(matches!(r.straighten(&mono("2,0")), Err(Error::OutOfPoset { .. })));
        assert!(Monomial::parse_in(r.dims(), "0,1 0,2").is_err());
    }

    #[test]
    fn standard_monomials_are_fixed() {
        for s in ["1,1,1", "2,1,1", "2,2,1", "1,1,1,1"] {
            let r = ring(s);
            for q in 0..=r.dims().regularity() {
                for m in &r.basis(q).monomials {
                    assert!(r.is_standard(m));
                    assert_eq!(r.straighten(m).unwrap(), LinComb::monomial(m.clone()));
                }
            }
        }
    }

    #[test]
    fn lincomb_display() {
        let mut c = LinComb::zero();
        assert_eq!(c.to_string(), "0");
        c.add_term(mono("0,1"), &BigInt::from(2));
        c.add_term(mono("1,0"), &BigInt::from(-3));
        assert_eq!(c.to_string(), "+2 · z[0,1] -3 · z[1,0]");
        c.add_term(mono("0,1"), &BigInt::from(-2));
        assert_eq!(c.len(), 1);
    }
}
