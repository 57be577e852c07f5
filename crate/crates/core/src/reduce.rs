//! Deterministic reductions over per-mode contributions.
//!
//! Every sum over modes in this crate goes through [`pairwise_sum`] so that
//! repeated runs are bit-identical regardless of thread count: the summation
//! tree is fixed by the slice length alone, and parallel execution only
//! changes *when* subtrees are evaluated, never how they are combined.

use num_traits::Zero;
use rayon::join;

/// Below this length the recursion bottoms out into a sequential fold.
const SEQ_CUTOFF: usize = 32;

/// Above this length the two halves are evaluated on the rayon pool.
const PAR_CUTOFF: usize = 8192;

/// Fixed-tree pairwise summation. Splits at the midpoint all the way down,
/// so the floating-point result depends only on the input order.
pub fn pairwise_sum<T>(terms: &[T]) -> T
where
    T: Zero + Copy + Send + Sync,
{
    if terms.len() <= SEQ_CUTOFF {
        return terms.iter().fold(T::zero(), |acc, &t| acc + t);
    }
    let (lo, hi) = terms.split_at(terms.len() / 2);
    let (a, b) = if terms.len() >= PAR_CUTOFF {
        join(|| pairwise_sum(lo), || pairwise_sum(hi))
    } else {
        (pairwise_sum(lo), pairwise_sum(hi))
    };
    a + b
}

/// Maximum of a slice of already-nonnegative magnitudes; empty slices give 0.
/// Max is order-insensitive, so a plain fold is fine.
pub fn max_magnitude(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn matches_naive_sum_for_integers_exactly() {
        let xs: Vec<f64> = (1..=1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 500500.0);
    }

    #[test]
    fn empty_and_singleton() {
        let none: [f64; 0] = [];
        assert_eq!(pairwise_sum(&none), 0.0);
        assert_eq!(pairwise_sum(&[3.5]), 3.5);
    }

    #[test]
    fn complex_sum() {
        let xs: Vec<Complex64> = (0..100).map(|i| Complex64::new(1.0, i as f64)).collect();
        let s = pairwise_sum(&xs);
        assert_eq!(s.re, 100.0);
        assert_eq!(s.im, 4950.0);
    }

    #[test]
    fn deterministic_across_calls() {
        let xs: Vec<f64> = (0..100_000).map(|i| ((i * 2654435761u64 as usize) % 1000) as f64 * 1e-3 - 0.5).collect();
        let a = pairwise_sum(&xs);
        let b = pairwise_sum(&xs);
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
