//! Sparse integer matrices and their rank over `Q`.
//!
//! Two backends: fraction-free elimination over `Z` (exact), and elimination
//! modulo random 62-bit primes. The modular backend runs two independent
//! primes; a disagreement means one prime divides a relevant minor and the
//! rank is recomputed exactly.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{rngs::StdRng, Rng, SeedableRng};
use serde::{Deserialize, Serialize};

/// Sparse column vector: `(row, value)` pairs, sorted by row, no zeros.
pub type SparseVec = Vec<(usize, BigInt)>;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RankBackend {
    Exact,
    #[default]
    Modular,
}

impl std::str::FromStr for RankBackend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exact" => Ok(RankBackend::Exact),
            "modular" => Ok(RankBackend::Modular),
            other => Err(format!("unknown rank backend {other:?} (expected exact|modular)")),
        }
    }
}

/// Integer matrix stored by columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseIntMatrix {
    nrows: usize,
    cols: Vec<SparseVec>,
}

impl SparseIntMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseIntMatrix { nrows, cols: vec![Vec::new(); ncols] }
    }

    /// Builds from columns; entries are sorted, merged and zeros dropped.
    pub fn from_columns(nrows: usize, cols: Vec<Vec<(usize, BigInt)>>) -> Self {
        let cols = cols
            .into_iter()
            .map(|c| {
                let mut merged: BTreeMap<usize, BigInt> = BTreeMap::new();
                for (r, v) in c {
                    assert!(r < nrows, "row {r} out of range {nrows}");
                    *merged.entry(r).or_default() += v;
                }
                merged.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        SparseIntMatrix { nrows, cols }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn column(&self, j: usize) -> &[(usize, BigInt)] {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        self.cols[c]
            .binary_search_by_key(&r, |(i, _)| *i)
            .map(|k| self.cols[c][k].1.clone())
            .unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    /// `self * v` for a sparse vector indexed by columns.
    pub fn apply(&self, v: &[(usize, BigInt)]) -> SparseVec {
        let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
        for (j, x) in v {
            for (i, y) in &self.cols[*j] {
                *acc.entry(*i).or_default() += x * y;
            }
        }
        acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &SparseIntMatrix) -> SparseIntMatrix {
        assert_eq!(self.ncols(), rhs.nrows, "dimension mismatch");
        SparseIntMatrix {
            nrows: self.nrows,
            cols: rhs.cols.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn rank(&self, backend: RankBackend) -> usize {
        match backend {
            RankBackend::Exact => self.rank_exact(),
            RankBackend::Modular => {
                let [p1, p2] = *modular_primes();
                let r1 = self.rank_mod(p1);
                let r2 = self.rank_mod(p2);
                if r1 == r2 {
                    r1
                } else {
                    self.rank_exact()
                }
            }
        }
    }

    pub fn rank_exact(&self) -> usize {
        let mut ech = ExactEchelon::default();
        for c in &self.cols {
            ech.insert(c.iter().cloned().collect());
        }
        ech.rank()
    }

    pub fn rank_mod(&self, p: u64) -> usize {
        let mut ech = ModEchelon::new(self.nrows, p);
        for c in &self.cols {
            let v: Vec<(usize, u64)> = c.iter().map(|(i, x)| (*i, reduce_mod(x, p))).collect();
            ech.insert(&v);
        }
        ech.rank()
    }

    /// Whether `v` lies in the column span over `Q`. Always exact.
    pub fn in_column_span(&self, v: &[(usize, BigInt)]) -> bool {
        let mut ech = ExactEchelon::default();
        for c in &self.cols {
            ech.insert(c.iter().cloned().collect());
        }
        ech.reduce(v.iter().cloned().collect()).is_empty()
    }
}

fn reduce_mod(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits in u64")
}

/// The two primes used by the modular backend, drawn once per process from
/// a fixed seed so that runs are reproducible.
pub fn modular_primes() -> &'static [u64; 2] {
    static PRIMES: OnceLock<[u64; 2]> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut rng = StdRng::seed_from_u64(0x5e62_e5e6_2e00_0001);
        let p1 = random_prime_62(&mut rng);
        let mut p2 = random_prime_62(&mut rng);
        while p2 == p1 {
            p2 = random_prime_62(&mut rng);
        }
        [p1, p2]
    })
}

/// A uniformly drawn prime in `[2^61, 2^62)`.
pub fn random_prime_62<R: Rng>(rng: &mut R) -> u64 {
    loop {
        let candidate = rng.gen_range((1u64 << 61)..(1u64 << 62)) | 1;
        if is_prime_u64(candidate) {
            return candidate;
        }
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &b in &BASES {
        let mut x = pow_mod(b, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Row echelon form mod `p`, built one vector at a time. Each stored pivot
/// vector has leading entry 1 at its key.
struct ModEchelon {
    p: u64,
    pivots: HashMap<usize, Vec<(usize, u64)>>,
    acc: Vec<u64>,
}

impl ModEchelon {
    fn new(dim: usize, p: u64) -> Self {
        ModEchelon { p, pivots: HashMap::new(), acc: vec![0; dim] }
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }

    fn insert(&mut self, v: &[(usize, u64)]) -> bool {
        let p = self.p;
        let mut heap = BinaryHeap::with_capacity(v.len());
        for &(i, x) in v {
            if x != 0 {
                self.acc[i] = x;
                heap.push(Reverse(i));
            }
        }
        let mut last = usize::MAX;
        while let Some(Reverse(i)) = heap.pop() {
            if i == last {
                continue;
            }
            last = i;
            let c = self.acc[i];
            if c == 0 {
                continue;
            }
            match self.pivots.get(&i) {
                Some(piv) => {
                    let neg = p - c;
                    for &(j, y) in piv {
                        let before = self.acc[j];
                        let after = (before as u128 + mul_mod(neg, y, p) as u128) % p as u128;
                        self.acc[j] = after as u64;
                        if before == 0 && j != i {
                            heap.push(Reverse(j));
                        }
                    }
                    self.acc[i] = 0;
                }
                None => {
                    let inv = pow_mod(c, p - 2, p);
                    let mut idx: Vec<usize> = heap.into_iter().map(|Reverse(j)| j).collect();
                    idx.push(i);
                    idx.sort_unstable();
                    idx.dedup();
                    let mut piv = Vec::with_capacity(idx.len());
                    for j in idx {
                        let x = std::mem::take(&mut self.acc[j]);
                        if x != 0 {
                            piv.push((j, mul_mod(x, inv, p)));
                        }
                    }
                    self.pivots.insert(i, piv);
                    return true;
                }
            }
        }
        false
    }
}

/// Fraction-free echelon form over `Z`; every stored vector is primitive.
#[derive(Default)]
struct ExactEchelon {
    pivots: HashMap<usize, BTreeMap<usize, BigInt>>,
}

fn make_primitive(v: &mut BTreeMap<usize, BigInt>) {
    let g = v.values().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.values_mut() {
            *x /= &g;
        }
    }
}

impl ExactEchelon {
    fn rank(&self) -> usize {
        self.pivots.len()
    }

    fn reduce(&self, mut v: BTreeMap<usize, BigInt>) -> BTreeMap<usize, BigInt> {
        v.retain(|_, x| !x.is_zero());
        let mut cursor = 0;
        while let Some((&i, _)) = v.range(cursor..).next() {
            cursor = i + 1;
            let Some(piv) = self.pivots.get(&i) else { continue };
            let a = v[&i].clone();
            let b = piv[&i].clone();
            let g = a.gcd(&b);
            let (sv, sp) = (&b / &g, &a / &g);
            if !sv.is_one() {
                for x in v.values_mut() {
                    *x *= &sv;
                }
            }
            for (j, y) in piv {
                *v.entry(*j).or_default() -= y * &sp;
            }
            v.retain(|_, x| !x.is_zero());
            make_primitive(&mut v);
        }
        v
    }

    fn insert(&mut self, v: BTreeMap<usize, BigInt>) -> bool {
        let mut r = self.reduce(v);
        let Some((&lead, _)) = r.iter().next() else { return false };
        make_primitive(&mut r);
        self.pivots.insert(lead, r);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::ChaCha8Rng;

    fn dense(rows: &[&[i64]]) -> SparseIntMatrix {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let cols = (0..ncols)
            .map(|j| (0..nrows).map(|i| (i, BigInt::from(rows[i][j]))).collect())
            .collect();
        SparseIntMatrix::from_columns(nrows, cols)
    }

    #[test]
    fn small_ranks() {
        let m = dense(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank_exact(), 2);
        assert_eq!(m.rank(RankBackend::Modular), 2);
        assert_eq!(dense(&[&[0, 0], &[0, 0]]).rank_exact(), 0);
        assert_eq!(SparseIntMatrix::zeros(0, 5).rank_exact(), 0);
    }

    #[test]
    fn rank_over_q_not_z() {
        // determinant 2: full rank over Q even though not unimodular
        let m = dense(&[&[1, 1], &[1, -1]]);
        assert_eq!(m.rank_exact(), 2);
        // a prime dividing a minor lowers the modular rank
        let m = dense(&[&[3, 0], &[0, 5]]);
        assert_eq!(m.rank_mod(5), 1);
        assert_eq!(m.rank_exact(), 2);
    }

    #[test]
    fn span_membership() {
        let m = dense(&[&[1, 0], &[1, 2], &[0, 4]]);
        let inside = vec![(0, BigInt::from(3)), (1, BigInt::from(5)), (2, BigInt::from(4))];
        let outside = vec![(0, BigInt::from(1))];
        assert!(m.in_column_span(&inside));
        assert!(!m.in_column_span(&outside));
    }

    #[test]
    fn product_and_apply() {
        let a = dense(&[&[1, 2], &[0, 1]]);
        let b = dense(&[&[1, -2], &[0, 1]]);
        assert_eq!(a.mul(&b), dense(&[&[1, 0], &[0, 1]]));
        assert_eq!(a.get(0, 1), BigInt::from(2));
        assert_eq!(a.get(1, 0), BigInt::zero());
    }

    #[test]
    fn primes() {
        assert!(is_prime_u64(2_305_843_009_213_693_951)); // 2^61 - 1
        assert!(!is_prime_u64(2_305_843_009_213_693_953));
        let [p, q] = *modular_primes();
        assert!(p != q && is_prime_u64(p) && is_prime_u64(q));
        assert!(p >> 61 == 1 && q >> 61 == 1);
    }

    #[test]
    fn modular_agrees_with_exact_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let r = rng.gen_range(1..12);
            let c = rng.gen_range(1..12);
            let k = rng.gen_range(1..5);
            // low-rank product of random r x k and k x c integer matrices
            let left: Vec<Vec<i64>> = (0..r).map(|_| (0..k).map(|_| rng.gen_range(-3..4)).collect()).collect();
            let right: Vec<Vec<i64>> = (0..k).map(|_| (0..c).map(|_| rng.gen_range(-3..4)).collect()).collect();
            let prod: Vec<Vec<i64>> = (0..r)
                .map(|i| (0..c).map(|j| (0..k).map(|t| left[i][t] * right[t][j]).sum()).collect())
                .collect();
            let rows: Vec<&[i64]> = prod.iter().map(Vec::as_slice).collect();
            let m = dense(&rows);
            let exact = m.rank_exact();
            assert!(exact <= k);
            assert_eq!(m.rank(RankBackend::Modular), exact);
        }
    }
}
