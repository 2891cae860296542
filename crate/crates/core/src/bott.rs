//! Borel-Weil-Bott on projective space via the dotted Weyl action
//! `σ • v = σ(v + ρ) - ρ`, `ρ = (m-1, ..., 1, 0)`, and Weyl's dimension
//! formula for `S_λ` of an `m`-dimensional space.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};

/// A weight of `GL_m`, not necessarily dominant.
pub type Weight = Vec<i64>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BottResult {
    /// Some nontrivial `σ` fixes `v`; all cohomology vanishes.
    Singular,
    /// `H^degree = S_dominant`, everything else zero.
    Regular { degree: usize, dominant: Weight },
}

impl fmt::Display for BottResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BottResult::Singular => f.write_str("SINGULAR"),
            BottResult::Regular { degree, dominant } => {
                let b: Vec<String> = dominant.iter().map(i64::to_string).collect();
                write!(f, "H^{degree} = S_({})", b.join(","))
            }
        }
    }
}

pub fn is_dominant(v: &[i64]) -> bool {
    v.windows(2).all(|w| w[0] >= w[1])
}

/// Sorts `v + ρ` into strictly decreasing order. A repeated entry means the
/// weight is singular; otherwise the degree is the inversion count.
pub fn dotted_sort(v: &[i64]) -> BottResult {
    let m = v.len() as i64;
    let shifted: Vec<i64> = v.iter().enumerate().map(|(i, x)| x + m - 1 - i as i64).collect();
    let mut inversions = 0;
    for i in 0..shifted.len() {
        for j in i + 1..shifted.len() {
            if shifted[i] < shifted[j] {
                inversions += 1;
            }
        }
    }
    let mut sorted = shifted;
    sorted.sort_by(|a, b| b.cmp(a));
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return BottResult::Singular;
    }
    let dominant = sorted.iter().enumerate().map(|(i, x)| x - (m - 1 - i as i64)).collect();
    BottResult::Regular { degree: inversions, dominant }
}

/// Cohomology of `Q^d ⊗ S_α R` on `PV`, `dim V = m`, where `R` is the
/// tautological subbundle of rank `m - 1`.
pub fn bwb_cohomology(d: i64, alpha: &[i64], m: usize) -> Result<BottResult> {
    if alpha.len() + 1 != m {
        return Err(Error::LengthMismatch { expected: m - 1, got: alpha.len() });
    }
    if !is_dominant(alpha) {
        return Err(Error::NotDominant(alpha.to_vec()));
    }
    let mut v = Vec::with_capacity(m);
    v.push(d);
    v.extend_from_slice(alpha);
    Ok(dotted_sort(&v))
}

/// `dim S_λ C^m = Π_{i<j} (λ_i - λ_j + j - i) / (j - i)`. Shorter `λ` are
/// padded with zeros.
pub fn schur_dim(lambda: &[i64], m: usize) -> Result<BigInt> {
    if lambda.len() > m {
        return Err(Error::LengthMismatch { expected: m, got: lambda.len() });
    }
    if !is_dominant(lambda) {
        return Err(Error::NotDominant(lambda.to_vec()));
    }
    let mut l = lambda.to_vec();
    l.resize(m, lambda.last().copied().filter(|&x| x < 0).unwrap_or(0));
    if !is_dominant(&l) {
        return Err(Error::NotDominant(lambda.to_vec()));
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..m {
        for j in i + 1..m {
            num *= BigInt::from(l[i] - l[j] + (j - i) as i64);
            den *= BigInt::from((j - i) as i64);
        }
    }
    let (q, r) = num.div_rem(&den);
    debug_assert!(r == BigInt::from(0));
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dotted_examples() {
        assert_eq!(dotted_sort(&[3, 1, 1]), BottResult::Regular { degree: 0, dominant: vec![3, 1, 1] });
        assert_eq!(dotted_sort(&[-1, 0]), BottResult::Singular);
        assert_eq!(dotted_sort(&[-2, 0]), BottResult::Regular { degree: 1, dominant: vec![-1, -1] });
    }

    #[test]
    fn bwb_examples() {
        assert_eq!(
            bwb_cohomology(4, &[2, 1], 3).unwrap(),
            BottResult::Regular { degree: 0, dominant: vec![4, 2, 1] }
        );
        assert_eq!(bwb_cohomology(-1, &[0, 0], 3).unwrap(), BottResult::Singular);
        assert!(matches!(bwb_cohomology(0, &[0, 1], 3), Err(Error::NotDominant(_))));
    }

    #[test]
    fn schur_examples() {
        assert_eq!(schur_dim(&[8, 1], 2).unwrap(), 8.into());
        assert_eq!(schur_dim(&[7, 1], 2).unwrap(), 7.into());
        assert_eq!(schur_dim(&[3, 3, 2], 3).unwrap(), 3.into());
        assert_eq!(schur_dim(&[0, 0, 0], 3).unwrap(), 1.into());
        assert_eq!(schur_dim(&[], 4).unwrap(), 1.into());
        for m in 1..8 {
            assert_eq!(schur_dim(&[1], m).unwrap(), BigInt::from(m));
        }
        // Sym^2 and ∧^2 of C^4.
        assert_eq!(schur_dim(&[2], 4).unwrap(), 10.into());
        assert_eq!(schur_dim(&[1, 1], 4).unwrap(), 6.into());
        assert_eq!(schur_dim(&[-1, -1], 2).unwrap(), 1.into());
    }

    #[test]
    fn display() {
        assert_eq!(dotted_sort(&[-2, 0]).to_string(), "H^1 = S_(-1,-1)");
        assert_eq!(BottResult::Singular.to_string(), "SINGULAR");
    }
}
