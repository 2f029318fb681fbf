//! Softmax cross-entropy with a numerically stable max-shift.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LossError {
    #[error("label {label} out of range for {classes} classes")]
    LabelOutOfRange { label: usize, classes: usize },
    #[error("non-finite logit")]
    NonFiniteLogit,
}

/// Returns `(-log softmax(logits)[label], softmax(logits) - one_hot(label))`.
pub fn softmax_cross_entropy(
    logits: &[f64],
    label: usize,
) -> Result<(f64, Vec<f64>), LossError> {
    if label >= logits.len() {
        return Err(LossError::LabelOutOfRange { label, classes: logits.len() });
    }
    if logits.iter().any(|v| !v.is_finite()) {
        return Err(LossError::NonFiniteLogit);
    }
    let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|&z| (z - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    let loss = sum.ln() - (logits[label] - max);
    let mut grad: Vec<f64> = exps.iter().map(|e| e / sum).collect();
    grad[label] -= 1.0;
    Ok((loss, grad))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_logits_give_ln_classes() {
        let (loss, _) = softmax_cross_entropy(&[0.3, 0.3], 1).unwrap();
        assert!((loss - 2.0f64.ln()).abs() < 1e-15);
        let (loss3, _) = softmax_cross_entropy(&[-1.0, -1.0, -1.0], 0).unwrap();
        assert!((loss3 - 3.0f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn extreme_logits_do_not_overflow() {
        let (loss, grad) = softmax_cross_entropy(&[1000.0, 0.0], 0).unwrap();
        assert!(loss.is_finite());
        assert!(loss.abs() < 1e-10);
        assert!(grad.iter().all(|g| g.is_finite()));
    }

    #[test]
    fn gradient_sums_to_zero() {
        for (logits, label) in [
            (vec![0.1, -0.4, 2.0], 2usize),
            (vec![5.0, 5.0], 0),
            (vec![-3.0, 0.0, 3.0, 1.0], 1),
        ] {
            let (_, grad) = softmax_cross_entropy(&logits, label).unwrap();
            let s: f64 = grad.iter().sum();
            assert!(s.abs() < 1e-12);
        }
    }

    #[test]
    fn label_out_of_range() {
        let err = softmax_cross_entropy(&[0.0, 0.0], 2).unwrap_err();
        assert_eq!(err, LossError::LabelOutOfRange { label: 2, classes: 2 });
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let logits = vec![0.7, -0.2, 1.4];
        let (_, grad) = softmax_cross_entropy(&logits, 1).unwrap();
        let h = 1e-6;
        for j in 0..3 {
            let mut up = logits.clone();
            up[j] += h;
            let mut down = logits.clone();
            down[j] -= h;
            let (lu, _) = softmax_cross_entropy(&up, 1).unwrap();
            let (ld, _) = softmax_cross_entropy(&down, 1).unwrap();
            let numeric = (lu - ld) / (2.0 * h);
            assert!((grad[j] - numeric).abs() < 1e-8);
        }
    }
}
