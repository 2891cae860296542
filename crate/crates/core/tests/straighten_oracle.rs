mod common;

use common::QuotientOracle;
use rand::{seq::SliceRandom, Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use segre_syz::{ArtinianRing, Bidegree, DimVector, LinComb, Monomial, MultiIndex};

const DIMS: [&str; 5] = ["1,1", "1,1,1", "2,1", "2,1,1", "2,2"];

fn check_against_oracle(a: &DimVector, ring: &ArtinianRing, q: usize) {
    let oracle = QuotientOracle::new(a, q);
    assert_eq!(
        oracle.quotient_dim(),
        ring.basis(q).len(),
        "quotient dimension for {a} in degree {q}"
    );
    for idx in 0..oracle.monomials.len() {
        let m = oracle.monomial(idx);
        let nf = ring.straighten(&m).unwrap();
        let bd = Bidegree::of(&m);
        for (t, _) in nf.terms() {
            assert!(ring.is_standard(t), "{t} not standard");
            assert_eq!(Bidegree::of(t), bd);
        }
        if !bd.can_be_nonzero() {
            assert!(nf.is_zero(), "rank vanishing fails for {m}");
        }
        assert!(oracle.equal_in_quotient(&m, &nf), "{a}: {m} != {nf}");
    }
}

#[test]
fn straighten_matches_linear_algebra_quotient() {
    for s in DIMS {
        let a: DimVector = s.parse().unwrap();
        let ring = ArtinianRing::new(a.clone());
        for q in 0..=3 {
            check_against_oracle(&a, &ring, q);
        }
    }
}

#[test]
fn straighten_matches_quotient_on_1111_degree_two() {
    let a: DimVector = "1,1,1,1".parse().unwrap();
    let ring = ArtinianRing::new(a.clone());
    check_against_oracle(&a, &ring, 2);
}

/// Straightening the product one factor at a time must agree with
/// straightening it all at once, whatever order the factors arrive in.
#[test]
fn factor_insertion_order_is_irrelevant() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for s in ["1,1,1", "2,1,1", "2,2,1", "1,1,1,1"] {
        let a: DimVector = s.parse().unwrap();
        let ring = ArtinianRing::new(a.clone());
        let pts = a.poset();
        for _ in 0..200 {
            let deg = rng.gen_range(1..=4);
            let mut factors: Vec<MultiIndex> =
                (0..deg).map(|_| pts.choose(&mut rng).unwrap().clone()).collect();
            let whole = ring.straighten(&Monomial::new(factors.clone())).unwrap();
            factors.shuffle(&mut rng);
            let mut acc = LinComb::monomial(Monomial::one());
            for v in &factors {
                let mut next = LinComb::zero();
                for (m, c) in acc.terms() {
                    next.add_scaled(&ring.multiply(v, m).unwrap(), c);
                }
                acc = next;
            }
            assert_eq!(acc, whole, "{s}: {factors:?}");
        }
    }
}

#[test]
fn idempotent_on_outputs() {
    let a: DimVector = "2,2,1".parse().unwrap();
    let ring = ArtinianRing::new(a.clone());
    let pts = a.poset();
    for u in &pts {
        for v in &pts {
            let nf = ring.straighten(&Monomial::new(vec![u.clone(), v.clone()])).unwrap();
            for (t, _) in nf.terms() {
                assert_eq!(ring.straighten(t).unwrap(), LinComb::monomial(t.clone()));
            }
        }
    }
}

#[test]
fn rank_vanishing_exhaustive_low_degree() {
    for s in ["1,1", "1,1,1", "2,1"] {
        let a: DimVector = s.parse().unwrap();
        let ring = ArtinianRing::new(a.clone());
        let pts = a.poset();
        let n = pts.len();
        for i in 0..n {
            for j in i..n {
                for k in j..n {
                    for deg in 1..=3 {
                        let f: Vec<MultiIndex> =
                            [i, j, k][..deg].iter().map(|&x| pts[x].clone()).collect();
                        let m = Monomial::new(f);
                        if !Bidegree::of(&m).can_be_nonzero() {
                            assert!(ring.straighten(&m).unwrap().is_zero(), "{m}");
                        }
                    }
                }
            }
        }
    }
}

/// Z(V) is independent in degree one iff every weight class keeps a point
/// outside V; checked against the quotient on random subsets.
#[test]
fn degree_one_independence_criterion() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for s in ["1,1", "1,1,1", "2,1"] {
        let a: DimVector = s.parse().unwrap();
        let oracle = QuotientOracle::new(&a, 1);
        let pts = a.poset();
        for _ in 0..100 {
            let set: Vec<MultiIndex> = pts.iter().filter(|_| rng.gen_bool(0.4)).cloned().collect();
            assert_eq!(
                segre_syz::lattice::z_set_independent(&a, &set),
                oracle.independent_linear_forms(&set),
                "{s}: {set:?}"
            );
        }
    }
}
