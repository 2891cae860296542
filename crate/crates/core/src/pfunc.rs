//! The recursive vanishing bound `P(a; q)`.
//!
//! `P(a_1; 0) = 0`, `P(a_1; q) = inf` for `q > 0`, and for `n > 1`
//!
//! ```text
//! P(a_1..a_n; q) = min_{0 <= j <= min(q, a_n)} h(P(a_1..a_{n-1}; q - j), j),
//! h(x, j) = (x + j)(j + 1).
//! ```
//!
//! `K_{p,q}(a)` vanishes for `p < P(a; q) - q`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::lattice::DimVector;

/// A non-negative integer or infinity. Infinity is the top element and
/// absorbs arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExtNat {
    Finite(u128),
    Infinity,
}

impl ExtNat {
    pub fn is_infinite(self) -> bool {
        matches!(self, ExtNat::Infinity)
    }

    pub fn finite(self) -> Option<u128> {
        match self {
            ExtNat::Finite(x) => Some(x),
            ExtNat::Infinity => None,
        }
    }

    /// `self - k`, saturating at zero; infinity stays infinite.
    pub fn minus(self, k: u128) -> ExtNat {
        match self {
            ExtNat::Finite(x) => ExtNat::Finite(x.saturating_sub(k)),
            ExtNat::Infinity => ExtNat::Infinity,
        }
    }
}

impl PartialOrd for ExtNat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtNat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtNat::Finite(a), ExtNat::Finite(b)) => a.cmp(b),
            (ExtNat::Finite(_), ExtNat::Infinity) => Ordering::Less,
            (ExtNat::Infinity, ExtNat::Finite(_)) => Ordering::Greater,
            (ExtNat::Infinity, ExtNat::Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Finite(x) => write!(f, "{x}"),
            ExtNat::Infinity => f.write_str("∞"),
        }
    }
}

impl serde::Serialize for ExtNat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtNat::Finite(x) => s.serialize_u128(*x),
            ExtNat::Infinity => s.serialize_none(),
        }
    }
}

pub fn h(x: ExtNat, j: u128) -> ExtNat {
    match x {
        ExtNat::Finite(x) => ExtNat::Finite(
            (x + j).checked_mul(j + 1).expect("P-function value overflowed u128"),
        ),
        ExtNat::Infinity => ExtNat::Infinity,
    }
}

/// `P(a; q)`.
pub fn p_function(a: &DimVector, q: usize) -> ExtNat {
    let mut memo = HashMap::new();
    p_prefix(a.entries(), a.len(), q, &mut memo)
}

fn p_prefix(a: &[u8], k: usize, q: usize, memo: &mut HashMap<(usize, usize), ExtNat>) -> ExtNat {
    if k == 1 {
        return if q == 0 { ExtNat::Finite(0) } else { ExtNat::Infinity };
    }
    if let Some(&v) = memo.get(&(k, q)) {
        return v;
    }
    let last = a[k - 1] as usize;
    let v = (0..=q.min(last))
        .map(|j| h(p_prefix(a, k - 1, q - j, memo), j as u128))
        .min()
        .expect("range contains j = 0");
    memo.insert((k, q), v);
    v
}

/// Closed form of `P(a^n; q)` for `n` equal entries `a >= 1`.
pub fn p_closed_equal(a: u32, n: u32, q: u32) -> ExtNat {
    assert!(a >= 1 && n >= 1, "closed form needs a >= 1 and n >= 1");
    if q == 0 {
        return ExtNat::Finite(0);
    }
    let r = q.div_ceil(a);
    if n <= r {
        return ExtNat::Infinity;
    }
    let q0 = (q - (r - 1) * a) as u128;
    let b = a as u128 + 1;
    ExtNat::Finite((q0 * q0 + q0) * b.pow(r - 1) + b.pow(r) - b)
}

/// `P(a; q) - q`: the first column where row `q` may be nonzero.
pub fn vanishing_bound(a: &DimVector, q: usize) -> ExtNat {
    p_function(a, q).minus(q as u128)
}

/// Whether `K_{p,q}(a) = 0` is forced by the bound. Negative rows are empty.
pub fn predicts_zero(a: &DimVector, p: usize, q: i64) -> bool {
    if q < 0 {
        return true;
    }
    vanishing_bound(a, q as usize) > ExtNat::Finite(p as u128)
}
