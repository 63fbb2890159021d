//! Ranks and order statistics.
//!
//! The rank of `x_k` is `#{j : x_j <= x_k}`. Equal values are ranked by
//! position (the earlier index gets the smaller rank) so that the result is
//! always a permutation of `1..=n`; the number of collisions is reported in
//! [`RankSequence::tie_count`].

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankSequence {
    /// 1-based ranks, `ranks[k]` belongs to `x[k]`.
    pub ranks: Vec<usize>,
    /// `n` minus the number of distinct values.
    pub tie_count: usize,
}

impl RankSequence {
    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    /// 64-bit FNV-1a over the little-endian ranks.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for &r in &self.ranks {
            for b in (r as u64).to_le_bytes() {
                h ^= u64::from(b);
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        }
        h
    }
}

fn check_input(x: &[f64]) -> Result<()> {
    if x.is_empty() {
        return Err(Error::domain("rank input is empty"));
    }
    if let Some(k) = x.iter().position(|v| !v.is_finite()) {
        return Err(Error::domain(alloc::format!("non-finite entry {} at index {k}", x[k])));
    }
    Ok(())
}

fn by_value(a: &f64, b: &f64) -> Ordering {
    // finite inputs only, so this is total
    a.partial_cmp(b).unwrap_or(Ordering::Equal)
}

/// Ranks of `x` in O(n log n).
pub fn compute_ranks(x: &[f64]) -> Result<RankSequence> {
    check_input(x)?;
    let mut order: Vec<usize> = (0..x.len()).collect();
    // stable sort keeps index order among equal values
    order.sort_by(|&i, &j| by_value(&x[i], &x[j]));
    let mut ranks = alloc::vec![0; x.len()];
    let mut tie_count = 0;
    for (pos, &idx) in order.iter().enumerate() {
        ranks[idx] = pos + 1;
        if pos > 0 && x[order[pos - 1]] == x[idx] {
            tie_count += 1;
        }
    }
    Ok(RankSequence { ranks, tie_count })
}

/// Sorted copy of `x`.
pub fn order_statistics(x: &[f64]) -> Result<Vec<f64>> {
    check_input(x)?;
    let mut sorted = x.to_vec();
    sorted.sort_unstable_by(by_value);
    Ok(sorted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    /// Definition with the index tie-break, O(n²).
    fn brute_ranks(x: &[f64]) -> Vec<usize> {
        (0..x.len())
            .map(|k| x.iter().filter(|&&v| v < x[k]).count() + x[..=k].iter().filter(|&&v| v == x[k]).count())
            .collect()
    }

    #[test]
    fn examples() {
        let r = compute_ranks(&[0.4, -1.2, 0.7]).unwrap();
        assert_eq!(r.ranks, vec![2, 1, 3]);
        assert_eq!(r.tie_count, 0);
        assert_eq!(compute_ranks(&[5.0]).unwrap().ranks, vec![1]);
        let r = compute_ranks(&[1.0, 1.0, 0.0]).unwrap();
        assert_eq!(r.ranks, vec![2, 3, 1]);
        assert_eq!(r.ranks, brute_ranks(&[1.0, 1.0, 0.0]));
        assert_eq!(r.tie_count, 1);
    }

    #[test]
    fn order_statistic_examples() {
        assert_eq!(order_statistics(&[3.0, 1.0, 2.0]).unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(order_statistics(&[-1.0, -1.0]).unwrap(), vec![-1.0, -1.0]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(compute_ranks(&[]).is_err());
        assert!(compute_ranks(&[1.0, f64::NAN]).is_err());
        assert!(order_statistics(&[f64::INFINITY]).is_err());
    }

    #[test]
    fn signed_zeros_tie() {
        let r = compute_ranks(&[0.0, -0.0]).unwrap();
        assert_eq!(r.ranks, vec![1, 2]);
        assert_eq!(r.tie_count, 1);
    }

    proptest! {
        #[test]
        fn matches_definition(x in prop::collection::vec(prop::sample::select(vec![-2.0, -0.5, 0.0, 1.0, 3.5]), 1..60)) {
            let r = compute_ranks(&x).unwrap();
            prop_assert_eq!(&r.ranks, &brute_ranks(&x));
            let mut distinct = x.clone();
            distinct.sort_by(f64::total_cmp);
            distinct.dedup();
            prop_assert_eq!(r.tie_count, x.len() - distinct.len());
        }

        #[test]
        fn duality_and_permutation(x in prop::collection::vec(-1e3f64..1e3, 1..200)) {
            let r = compute_ranks(&x).unwrap();
            let sorted = order_statistics(&x).unwrap();
            for (k, &rank) in r.ranks.iter().enumerate() {
                prop_assert_eq!(sorted[rank - 1], x[k]);
            }
            let mut perm = r.ranks.clone();
            perm.sort_unstable();
            prop_assert!(perm.iter().enumerate().all(|(i, &v)| v == i + 1));
            let mut oracle = x.clone();
            oracle.sort_by(f64::total_cmp);
            prop_assert_eq!(sorted, oracle);
        }

        #[test]
        fn invariant_under_increasing_affine_maps(
            x in prop::collection::vec(-10.0f64..10.0, 1..100),
            a in -5.0f64..5.0,
            c in 0.5f64..4.0,
        ) {
            let y: Vec<f64> = x.iter().map(|v| a + c * v).collect();
            let (rx, ry) = (compute_ranks(&x).unwrap(), compute_ranks(&y).unwrap());
            // rounding may merge neighbours; only tie-free images are comparable
            prop_assume!(ry.tie_count == rx.tie_count);
            prop_assert_eq!(rx.ranks, ry.ranks);
        }
    }
}
