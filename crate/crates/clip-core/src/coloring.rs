//! Node colorings over an attribute partition.
//!
//! A coloring assigns, within every group of attribute-identical nodes, a
//! distinct color index to each node, so the color indices of a group of
//! size `s` form a permutation of `0..s`. The set of all colorings of a
//! partition therefore has exactly `prod_k |V_k|!` elements; this module
//! counts it exactly, enumerates it below a cap, and samples distinct
//! colorings uniformly.

use crate::graph::{Graph, Partition};
use crate::linalg::Mat;
use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

/// Failed uniform-rejection rounds tolerated before giving up.
pub const REJECTION_BUDGET: usize = 100_000;

/// Default cap on exhaustive enumeration in the all-colorings mode.
pub const DEFAULT_ENUMERATION_CAP: usize = 10_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColoringError {
    #[error("coloring set has {count} elements, above the enumeration cap {cap}")]
    EnumerationCapExceeded { count: BigUint, cap: usize },
    #[error("could not draw {k} distinct colorings after {budget} rejection rounds")]
    RejectionBudgetExhausted { k: usize, budget: usize },
    #[error("color dimension {color_dim} is below the maximum color index ({needed})")]
    ColorDimTooSmall { color_dim: usize, needed: usize },
}

/// Per-node color indices; node `i` holds a 0-based index into its group's
/// color alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coloring {
    colors: Vec<usize>,
}

impl Coloring {
    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    /// The trivial coloring of an all-singleton partition.
    pub fn trivial(n: usize) -> Coloring {
        Coloring { colors: vec![0; n] }
    }

    /// True iff, inside every group of `p`, the color indices form a
    /// permutation of `0..group_size`.
    pub fn is_valid_for(&self, p: &Partition) -> bool {
        if self.colors.len() != p.node_count() {
            return false;
        }
        for group in p.groups() {
            let mut seen = vec![false; group.len()];
            for &i in group {
                let c = self.colors[i];
                if c >= group.len() || seen[c] {
                    return false;
                }
                seen[c] = true;
            }
        }
        true
    }
}

/// A set of distinct colorings drawn from one partition's coloring set.
#[derive(Debug, Clone)]
pub struct ColoringSample {
    pub colorings: Vec<Coloring>,
    /// True iff `colorings` is the entire coloring set.
    pub exhaustive: bool,
}

/// Exact size of the coloring set: the product of group-size factorials.
pub fn coloring_count(p: &Partition) -> BigUint {
    let mut count = BigUint::one();
    for size in p.group_sizes() {
        for f in 2..=size {
            count *= BigUint::from(f);
        }
    }
    count
}

/// All colorings of `p`, or an error if there are more than `cap`.
///
/// Groups are scanned in partition order and each group's permutations in
/// lexicographic order, so the output order is deterministic.
pub fn enumerate_colorings(p: &Partition, cap: usize) -> Result<Vec<Coloring>, ColoringError> {
    let count = coloring_count(p);
    if count > BigUint::from(cap) {
        return Err(ColoringError::EnumerationCapExceeded { count, cap });
    }
    let n = p.node_count();
    let mut result = vec![Coloring { colors: vec![0; n] }];
    for group in p.groups() {
        let mut next = Vec::with_capacity(result.len());
        for perm in (0..group.len()).permutations(group.len()) {
            for base in &result {
                let mut c = base.clone();
                for (slot, &node) in group.iter().enumerate() {
                    c.colors[node] = perm[slot];
                }
                next.push(c);
            }
        }
        result = next;
    }
    Ok(result)
}

/// Draws `k` distinct colorings uniformly at random, or the full coloring
/// set when it has at most `k` elements.
///
/// Each draw shuffles every group's color alphabet independently (unbiased
/// Fisher-Yates); distinctness is enforced by rejection.
pub fn sample_colorings<R: Rng>(
    p: &Partition,
    k: usize,
    rng: &mut R,
) -> Result<ColoringSample, ColoringError> {
    assert!(k >= 1, "sample size must be at least 1");
    let count = coloring_count(p);
    if count <= BigUint::from(k) {
        // The cap equals the exact count, so enumeration cannot fail.
        let colorings = enumerate_colorings(p, k)?;
        return Ok(ColoringSample { colorings, exhaustive: true });
    }
    let n = p.node_count();
    let mut chosen: Vec<Coloring> = Vec::with_capacity(k);
    let mut rejections = 0;
    while chosen.len() < k {
        let mut colors = vec![0; n];
        for group in p.groups() {
            let mut alphabet: Vec<usize> = (0..group.len()).collect();
            alphabet.shuffle(rng);
            for (slot, &node) in group.iter().enumerate() {
                colors[node] = alphabet[slot];
            }
        }
        let candidate = Coloring { colors };
        if chosen.contains(&candidate) {
            rejections += 1;
            if rejections >= REJECTION_BUDGET {
                return Err(ColoringError::RejectionBudgetExhausted {
                    k,
                    budget: REJECTION_BUDGET,
                });
            }
        } else {
            chosen.push(candidate);
        }
    }
    Ok(ColoringSample { colorings: chosen, exhaustive: false })
}

/// Concatenates each node's attributes with the one-hot encoding of its
/// color, zero-padded to `color_dim`. With `color_dim == 0` the result is
/// the attribute matrix itself (the no-coloring mode).
pub fn apply_coloring(
    g: &Graph,
    c: &Coloring,
    color_dim: usize,
) -> Result<Mat, ColoringError> {
    let n = g.node_count();
    let m = g.attr_dim();
    if color_dim > 0 {
        if let Some(&max_color) = c.colors().iter().max() {
            if max_color >= color_dim {
                return Err(ColoringError::ColorDimTooSmall {
                    color_dim,
                    needed: max_color + 1,
                });
            }
        }
    } else if c.colors().iter().any(|&ci| ci > 0) {
        return Err(ColoringError::ColorDimTooSmall { color_dim: 0, needed: 1 });
    }
    let mut out = Mat::zeros(n, m + color_dim);
    for i in 0..n {
        let row = out.row_mut(i);
        row[..m].copy_from_slice(g.attr(i));
        if color_dim > 0 {
            row[m + c.colors()[i]] = 1.0;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::rng::stream;
    use std::collections::HashSet;

    fn partition(sizes: &[usize]) -> Partition {
        let mut groups = Vec::new();
        let mut next = 0;
        for &s in sizes {
            groups.push((next..next + s).collect());
            next += s;
        }
        Partition::from_groups(groups)
    }

    #[test]
    fn count_is_product_of_factorials() {
        assert_eq!(coloring_count(&partition(&[2, 3])), BigUint::from(12u32));
        assert_eq!(coloring_count(&partition(&[1, 1, 1])), BigUint::from(1u32));
        assert_eq!(coloring_count(&partition(&[10])), BigUint::from(3_628_800u32));
    }

    #[test]
    fn enumerate_pair_swap() {
        let cs = enumerate_colorings(&partition(&[2]), 10).unwrap();
        assert_eq!(cs.len(), 2);
        let set: HashSet<_> = cs.iter().map(|c| c.colors().to_vec()).collect();
        assert!(set.contains(&vec![0, 1]));
        assert!(set.contains(&vec![1, 0]));
    }

    #[test]
    fn enumerate_singletons() {
        let cs = enumerate_colorings(&partition(&[1, 1, 1]), 10).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].colors(), &[0, 0, 0]);
    }

    #[test]
    fn enumerate_matches_count_and_is_distinct() {
        for sizes in [vec![2, 2], vec![3, 2], vec![4], vec![2, 1, 3]] {
            let p = partition(&sizes);
            let expected: usize = sizes.iter().map(|&s| (1..=s).product::<usize>()).product();
            let cs = enumerate_colorings(&p, 10_000).unwrap();
            assert_eq!(cs.len(), expected);
            assert_eq!(BigUint::from(expected), coloring_count(&p));
            let set: HashSet<_> = cs.iter().collect();
            assert_eq!(set.len(), cs.len());
            for c in &cs {
                assert!(c.is_valid_for(&p));
            }
        }
    }

    #[test]
    fn enumeration_cap() {
        let err = enumerate_colorings(&partition(&[10]), 100).unwrap_err();
        assert!(matches!(err, ColoringError::EnumerationCapExceeded { .. }));
    }

    #[test]
    fn sample_all_singletons_is_exhaustive() {
        let mut rng = stream(1, &[]);
        let s = sample_colorings(&partition(&[1; 6]), 8, &mut rng).unwrap();
        assert!(s.exhaustive);
        assert_eq!(s.colorings.len(), 1);
        assert_eq!(s.colorings[0].colors(), &[0; 6]);
    }

    #[test]
    fn sample_returns_full_set_when_k_covers_it() {
        let mut rng = stream(2, &[]);
        let s = sample_colorings(&partition(&[2]), 16, &mut rng).unwrap();
        assert!(s.exhaustive);
        assert_eq!(s.colorings.len(), 2);
    }

    #[test]
    fn sample_distinct_and_valid() {
        let p = partition(&[3, 3]);
        for trial in 0..1000 {
            let mut rng = stream(3, &[trial]);
            let s = sample_colorings(&p, 4, &mut rng).unwrap();
            assert!(!s.exhaustive);
            assert_eq!(s.colorings.len(), 4);
            let set: HashSet<_> = s.colorings.iter().collect();
            assert_eq!(set.len(), 4);
            for c in &s.colorings {
                assert!(c.is_valid_for(&p));
            }
        }
    }

    #[test]
    fn sampled_group_colors_are_permutations() {
        let p = partition(&[4, 2, 5]);
        let mut rng = stream(4, &[]);
        let s = sample_colorings(&p, 8, &mut rng).unwrap();
        for c in &s.colorings {
            for group in p.groups() {
                let mut cs: Vec<usize> = group.iter().map(|&i| c.colors()[i]).collect();
                cs.sort_unstable();
                assert_eq!(cs, (0..group.len()).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn rejection_budget_path_succeeds_near_full_set() {
        // k equal to |C| - 1 forces heavy rejection but stays feasible.
        let p = partition(&[3]);
        let mut rng = stream(5, &[]);
        let s = sample_colorings(&p, 5, &mut rng).unwrap();
        assert_eq!(s.colorings.len(), 5);
        assert!(!s.exhaustive);
    }

    #[test]
    fn apply_coloring_concatenates_one_hot() {
        let g = Graph::new(vec![vec![5.0], vec![5.0]], vec![vec![0, 0], vec![0, 0]]).unwrap();
        let c = enumerate_colorings(&g.attribute_groups(), 10).unwrap();
        let first = c.iter().find(|c| c.colors() == [0, 1]).unwrap();
        let x = apply_coloring(&g, first, 2).unwrap();
        assert_eq!(x.row(0), &[5.0, 1.0, 0.0]);
        assert_eq!(x.row(1), &[5.0, 0.0, 1.0]);
    }

    #[test]
    fn apply_coloring_zero_dim_returns_attrs() {
        let g = Graph::new(vec![vec![1.5, 2.5]], vec![vec![0]]).unwrap();
        let x = apply_coloring(&g, &Coloring::trivial(1), 0).unwrap();
        assert_eq!(x.row(0), &[1.5, 2.5]);
    }

    #[test]
    fn apply_coloring_pads_to_color_dim() {
        let g = Graph::new(vec![vec![0.0]], vec![vec![0]]).unwrap();
        // 0-based index 1 == second color of a 3-wide alphabet.
        let c = Coloring { colors: vec![1] };
        let x = apply_coloring(&g, &c, 3).unwrap();
        assert_eq!(x.row(0), &[0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn apply_coloring_rejects_small_dim() {
        let g = Graph::new(vec![vec![0.0]], vec![vec![0]]).unwrap();
        let c = Coloring { colors: vec![2] };
        let err = apply_coloring(&g, &c, 2).unwrap_err();
        assert_eq!(err, ColoringError::ColorDimTooSmall { color_dim: 2, needed: 3 });
    }

    #[test]
    fn strip_suffix_recovers_attrs() {
        let g = Graph::new(
            vec![vec![1.0, -2.0], vec![1.0, -2.0], vec![3.0, 0.5]],
            vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 0]],
        )
        .unwrap();
        let p = g.attribute_groups();
        let mut rng = stream(6, &[]);
        let s = sample_colorings(&p, 2, &mut rng).unwrap();
        for c in &s.colorings {
            let x = apply_coloring(&g, c, p.max_group_size()).unwrap();
            for i in 0..g.node_count() {
                assert_eq!(&x.row(i)[..2], g.attr(i));
            }
        }
    }
}
