//! Independent ground truth for the Artinian reduction: the degree-q piece of
//! `Sym(S_1) / (I + (x_0, ..., x_{|a|}))` built by exact integer row
//! reduction over the full monomial space. Shares nothing with the
//! straightening code except the lattice types.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use segre_syz::{DimVector, LinComb, Monomial, MultiIndex};

type Row = BTreeMap<usize, BigInt>;

/// Echelon form over Z with distinct leading columns; rank over Q.
#[derive(Default)]
pub struct Echelon {
    rows: BTreeMap<usize, Row>,
}

fn normalize(row: &mut Row) {
    let g = row.values().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && g != BigInt::from(1) {
        for x in row.values_mut() {
            *x /= &g;
        }
    }
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, mut row: Row) -> Row {
        let mut cursor = 0usize;
        while let Some((&c, _)) = row.range(cursor..).next() {
            cursor = c + 1;
            let Some(piv) = self.rows.get(&c) else { continue };
            let lead = row[&c].clone();
            let plead = piv[&c].clone();
            let g = lead.gcd(&plead);
            let (ml, mp) = (&plead / &g, &lead / &g);
            for x in row.values_mut() {
                *x *= &ml;
            }
            for (k, v) in piv {
                let e = row.entry(*k).or_insert_with(BigInt::zero);
                *e -= v * &mp;
            }
            row.retain(|_, x| !x.is_zero());
            normalize(&mut row);
        }
        row
    }

    /// Returns whether the row was independent of what is already stored.
    pub fn insert(&mut self, row: Row) -> bool {
        let mut r = self.reduce(row);
        if r.is_empty() {
            return false;
        }
        normalize(&mut r);
        if r.values().next().unwrap().is_negative() {
            for x in r.values_mut() {
                *x = -x.clone();
            }
        }
        let lead = *r.keys().next().unwrap();
        self.rows.insert(lead, r);
        true
    }
}

/// Degree-q slice of the quotient, with monomials indexed as sorted tuples of
/// poset indices.
pub struct QuotientOracle {
    pub points: Vec<MultiIndex>,
    pub monomials: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    pub relations: Echelon,
}

fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(n, k, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, k, 0, &mut Vec::new(), &mut out);
    out
}

fn comparable(u: &MultiIndex, v: &MultiIndex) -> bool {
    let le = u.coords().iter().zip(v.coords()).all(|(x, y)| x <= y);
    let ge = u.coords().iter().zip(v.coords()).all(|(x, y)| x >= y);
    le || ge
}

impl QuotientOracle {
    pub fn new(a: &DimVector, q: usize) -> Self {
        let points = a.poset();
        let pos: HashMap<MultiIndex, usize> =
            points.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let n = points.len();
        let monomials = multisets(n, q);
        let index: HashMap<Vec<usize>, usize> =
            monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let key = |mut m: Vec<usize>| {
            m.sort_unstable();
            index[&m]
        };
        let mut relations = Echelon::default();
        // parameters x_r times everything of degree q-1
        if q >= 1 {
            for mu in multisets(n, q - 1) {
                for r in 0..=a.total() {
                    let mut row = Row::new();
                    for (i, p) in points.iter().enumerate() {
                        if p.weight() == r {
                            let mut m = mu.clone();
                            m.push(i);
                            *row.entry(key(m)).or_insert_with(BigInt::zero) += 1;
                        }
                    }
                    relations.insert(row);
                }
            }
        }
        // binomials z_u z_v - z_min z_max times everything of degree q-2
        if q >= 2 {
            let mut pairs = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if !comparable(&points[i], &points[j]) {
                        let lo: Vec<u8> = points[i].coords().iter().zip(points[j].coords()).map(|(x, y)| *x.min(y)).collect();
                        let hi: Vec<u8> = points[i].coords().iter().zip(points[j].coords()).map(|(x, y)| *x.max(y)).collect();
                        pairs.push((i, j, pos[&MultiIndex::new(lo)], pos[&MultiIndex::new(hi)]));
                    }
                }
            }
            for mu in multisets(n, q - 2) {
                for &(i, j, lo, hi) in &pairs {
                    let mut m1 = mu.clone();
                    m1.extend([i, j]);
                    let mut m2 = mu.clone();
                    m2.extend([lo, hi]);
                    let mut row = Row::new();
                    row.insert(key(m1), BigInt::from(1));
                    *row.entry(key(m2)).or_insert_with(BigInt::zero) -= 1;
                    row.retain(|_, x| !x.is_zero());
                    relations.insert(row);
                }
            }
        }
        QuotientOracle { points, monomials, index, relations }
    }

    pub fn quotient_dim(&self) -> usize {
        self.monomials.len() - self.relations.rank()
    }

    pub fn monomial(&self, idx: usize) -> Monomial {
        Monomial::new(self.monomials[idx].iter().map(|&i| self.points[i].clone()).collect())
    }

    fn column_of(&self, m: &Monomial) -> usize {
        let mut key: Vec<usize> = m
            .factors()
            .iter()
            .map(|v| self.points.iter().position(|p| p == v).unwrap())
            .collect();
        key.sort_unstable();
        self.index[&key]
    }

    /// Whether `m - expr` lies in the relation span, i.e. `m == expr` in the quotient.
    pub fn equal_in_quotient(&self, m: &Monomial, expr: &LinComb) -> bool {
        let mut row = Row::new();
        *row.entry(self.column_of(m)).or_insert_with(BigInt::zero) += 1;
        for (t, c) in expr.terms() {
            *row.entry(self.column_of(t)).or_insert_with(BigInt::zero) -= c;
        }
        row.retain(|_, x| !x.is_zero());
        self.relations.reduce(row).is_empty()
    }

    /// Rank of the images of the given degree-one variables in the quotient.
    pub fn independent_linear_forms(&self, vs: &[MultiIndex]) -> bool {
        let mut e = Echelon::default();
        for r in self.relations.rows.values() {
            e.insert(r.clone());
        }
        let base = e.rank();
        for v in vs {
            let mut row = Row::new();
            row.insert(self.column_of(&Monomial::new(vec![v.clone()])), BigInt::from(1));
            e.insert(row);
        }
        e.rank() - base == vs.len()
    }
}
