//! Stratified fold planning for cross-validation.

use super::{DataError, LabeledDataset};
use rand::seq::SliceRandom;
use rand::Rng;

/// Disjoint index sets covering a dataset, one per fold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldPlan {
    folds: Vec<Vec<usize>>,
}

impl FoldPlan {
    pub fn fold_count(&self) -> usize {
        self.folds.len()
    }

    /// Held-out indices of fold `f`, ascending.
    pub fn test_indices(&self, f: usize) -> &[usize] {
        &self.folds[f]
    }

    /// Training indices of fold `f`: everything outside the fold, ascending.
    pub fn train_indices(&self, f: usize, total: usize) -> Vec<usize> {
        let mut held = vec![false; total];
        for &i in &self.folds[f] {
            held[i] = true;
        }
        (0..total).filter(|&i| !held[i]).collect()
    }

    pub fn folds(&self) -> &[Vec<usize>] {
        &self.folds
    }
}

/// Splits the dataset into `folds` stratified disjoint parts: within every
/// class, fold counts differ by at most one. Deterministic for a fixed RNG.
pub fn stratified_folds<R: Rng>(
    dataset: &LabeledDataset,
    folds: usize,
    rng: &mut R,
) -> Result<FoldPlan, DataError> {
    assert!(folds >= 2, "need at least two folds");
    let counts = dataset.class_counts();
    for (class, &count) in counts.iter().enumerate() {
        if count < folds {
            return Err(DataError::ClassTooSmall { class, count, folds });
        }
    }
    let mut plan = vec![Vec::new(); folds];
    // Rotate the starting fold across classes so the leftover examples of
    // each class land on different folds and fold sizes stay balanced.
    let mut start = 0usize;
    for class in 0..counts.len() {
        let mut members: Vec<usize> = (0..dataset.len())
            .filter(|&i| dataset.labels[i] == class)
            .collect();
        members.shuffle(rng);
        for (offset, idx) in members.iter().enumerate() {
            plan[(start + offset) % folds].push(*idx);
        }
        start = (start + counts[class]) % folds;
    }
    for fold in &mut plan {
        fold.sort_unstable();
    }
    Ok(FoldPlan { folds: plan })
}
