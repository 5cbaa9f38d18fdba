//! Deterministic reductions.
//!
//! Sums run either strictly left to right (`Serial`) or over a fixed-shape
//! pairwise tree (`Tree`). The tree shape depends only on the slice length,
//! so parallel evaluation over the same tree returns the same bits for any
//! worker count. Max reductions are order-independent in floating point and
//! need no special care.

use rayon::prelude::*;

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReduceMode {
    Serial,
    Tree,
}

const TREE_LEAF: usize = 64;
const PAR_THRESHOLD: usize = 1 << 14;

fn tree_sum_seq<T: Scalar>(xs: &[T]) -> T {
    if xs.len() <= TREE_LEAF {
        let mut acc = T::zero();
        for &x in xs {
            acc += x;
        }
        return acc;
    }
    let mid = xs.len() / 2;
    tree_sum_seq(&xs[..mid]) + tree_sum_seq(&xs[mid..])
}

fn tree_sum_par<T: Scalar>(xs: &[T]) -> T {
    if xs.len() <= PAR_THRESHOLD {
        return tree_sum_seq(xs);
    }
    let mid = xs.len() / 2;
    let (a, b) = rayon::join(|| tree_sum_par(&xs[..mid]), || tree_sum_par(&xs[mid..]));
    a + b
}

/// Sum of a slice in the requested mode. `parallel` only affects how the
/// tree is evaluated, never its shape or result.
pub fn sum<T: Scalar>(xs: &[T], mode: ReduceMode, parallel: bool) -> T {
    match mode {
        ReduceMode::Serial => {
            let mut acc = T::zero();
            for &x in xs {
                acc += x;
            }
            acc
        }
        ReduceMode::Tree => {
            if parallel {
                tree_sum_par(xs)
            } else {
                tree_sum_seq(xs)
            }
        }
    }
}

/// Max of a slice (order-independent).
pub fn max<T: Scalar>(xs: &[T], parallel: bool) -> T {
    if parallel && xs.len() > PAR_THRESHOLD {
        xs.par_iter()
            .copied()
            .reduce(|| T::from_f64(f64::NEG_INFINITY), |a, b| a.max(b))
    } else {
        xs.iter()
            .copied()
            .fold(T::from_f64(f64::NEG_INFINITY), |a, b| a.max(b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_shape_is_worker_independent() {
        let xs: Vec<f64> = (0..100_000)
            .map(|i| ((i * 2654435761u64 as usize) % 1000) as f64 * 1e-3 - 0.5)
            .collect();
        let seq = sum(&xs, ReduceMode::Tree, false);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let par = pool.install(|| sum(&xs, ReduceMode::Tree, true));
        assert_eq!(seq.to_bits(), par.to_bits());
    }

    #[test]
    fn serial_and_tree_agree_to_roundoff() {
        let xs: Vec<f64> = (0..9999).map(|i| (i as f64).sin()).collect();
        let a = sum(&xs, ReduceMode::Serial, false);
        let b = sum(&xs, ReduceMode::Tree, false);
        assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn max_matches_fold() {
        let xs: Vec<f64> = (0..50_000).map(|i| ((i * 97) % 1013) as f64).collect();
        assert_eq!(max(&xs, false), 1012.0);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        assert_eq!(pool.install(|| max(&xs, true)), 1012.0);
    }
}
