//! Graded Betti tables of Segre embeddings `P^{a_1} x ... x P^{a_n}`,
//! computed over the Artinian reduction of the coordinate ring with an
//! explicit standard basis and straightening algorithm.

pub mod bott;
pub mod error;
pub mod golden;
pub mod koszul;
pub mod lattice;
pub mod linalg;
pub mod pfunc;
pub mod straighten;
pub mod witness;

pub use error::{Error, Result};
pub use linalg::{RankBackend, SparseIntMatrix};
pub use koszul::{BettiTable, KoszulComplex, TableOptions};
pub use lattice::{DimVector, LatticePath, MultiIndex};
pub use pfunc::ExtNat;
pub use straighten::{ArtinianRing, Bidegree, LinComb, Monomial};
