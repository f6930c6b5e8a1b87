use grassblow_core::matrix::ExactMatrix;
use grassblow_core::rational::{frac, q, RationalSampler, Q};
use num_traits::Zero;
use proptest::prelude::*;

/// Laplace expansion along the first row.
fn cofactor_det(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    if n == 0 {
        return q(1);
    }
    let mut total = Q::zero();
    for c in 0..n {
        let minor: Vec<Vec<Q>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != c).map(|(_, v)| v.clone()).collect())
            .collect();
        let term = &m[0][c] * cofactor_det(&minor);
        if c % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

#[test]
fn small_determinants() {
    let m = ExactMatrix::from_i64(&[&[2, 1], &[6, 5]]).unwrap();
    assert_eq!(m.determinant().unwrap(), q(4));
    let m = ExactMatrix::from_rows(vec![vec![frac(1, 2), frac(1, 3)], vec![frac(1, 4), frac(1, 5)]]).unwrap();
    assert_eq!(m.determinant().unwrap(), frac(1, 10) - frac(1, 12));
    let m = ExactMatrix::from_i64(&[&[0, 1], &[1, 0]]).unwrap();
    assert_eq!(m.determinant().unwrap(), q(-1));
    assert!(ExactMatrix::zeros(2, 3).determinant().is_err());
    assert_eq!(ExactMatrix::identity(4).determinant().unwrap(), q(1));
}

#[test]
fn rank_of_dependent_rows() {
    let m = ExactMatrix::from_i64(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]).unwrap();
    assert_eq!(m.rank(), 2);
    assert_eq!(ExactMatrix::zeros(3, 3).rank(), 0);
}

proptest! {
    #[test]
    fn determinant_matches_cofactor_expansion(n in 1usize..=5, seed in any::<u64>(), sparse in any::<bool>()) {
        let mut rng = RationalSampler::new(seed);
        let rows: Vec<Vec<Q>> = (0..n)
            .map(|_| (0..n).map(|_| if sparse && rng.next_index(3) == 0 { Q::zero() } else { rng.next() }).collect())
            .collect();
        let m = ExactMatrix::from_rows(rows.clone()).unwrap();
        let det = m.determinant().unwrap();
        prop_assert_eq!(&det, &cofactor_det(&rows));
        prop_assert_eq!(det.is_zero(), m.rank() < n);
    }
}
