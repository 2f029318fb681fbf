//! Multi-layer perceptrons over the row-major [`Mat`] type.
//!
//! Forward passes come in two shapes: a single input vector, and a batched
//! variant that treats every row of a matrix as an independent input (used
//! for per-node computations inside one graph). The batched tape records the
//! post-activation values of every layer, which is enough to run the exact
//! reverse pass for both supported activations.

use crate::linalg::Mat;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NnError {
    #[error("input has dimension {got}, expected {expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("non-finite input value")]
    NonFiniteInput,
    #[error("gradient shape does not match parameter shape")]
    ShapeMismatch,
}

/// Activation applied after every layer except the last.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Relu,
    Tanh,
}

impl Activation {
    #[inline]
    fn apply(self, x: f64) -> f64 {
        match self {
            Activation::Relu => {
                if x > 0.0 {
                    x
                } else {
                    0.0
                }
            }
            Activation::Tanh => x.tanh(),
        }
    }

    /// Derivative expressed through the post-activation value.
    #[inline]
    fn derivative_from_output(self, y: f64) -> f64 {
        match self {
            Activation::Relu => {
                if y > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Tanh => 1.0 - y * y,
        }
    }
}

/// One affine layer, `y = W x + b`, with `W` stored out-by-in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub w: Mat,
    pub b: Vec<f64>,
}

impl Layer {
    /// Glorot-uniform weights (`±sqrt(6 / (fan_in + fan_out))`), zero biases.
    pub fn glorot<R: Rng>(out_dim: usize, in_dim: usize, rng: &mut R) -> Layer {
        let bound = (6.0 / (in_dim + out_dim) as f64).sqrt();
        let mut w = Mat::zeros(out_dim, in_dim);
        for v in w.data_mut() {
            *v = rng.gen_range(-bound..bound);
        }
        Layer { w, b: vec![0.0; out_dim] }
    }

    pub fn out_dim(&self) -> usize {
        self.w.rows()
    }

    pub fn in_dim(&self) -> usize {
        self.w.cols()
    }

    /// `X W^T + b` for row-stacked inputs.
    pub fn forward_batch(&self, x: &Mat) -> Mat {
        let mut y = x.mul_bt(&self.w);
        y.add_row_broadcast(&self.b);
        y
    }
}

/// An MLP with a fixed activation between layers and a linear last layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mlp {
    pub layers: Vec<Layer>,
    pub activation: Activation,
}

/// Post-activation values per layer for one batched forward pass; entry 0 is
/// the input itself.
#[derive(Debug, Clone)]
pub struct MlpBatchTape {
    activations: Vec<Mat>,
}

/// Parameter gradients matching an [`Mlp`]'s layer shapes.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpGrads {
    pub layers: Vec<(Mat, Vec<f64>)>,
}

impl MlpGrads {
    pub fn zeros_like(mlp: &Mlp) -> MlpGrads {
        MlpGrads {
            layers: mlp
                .layers
                .iter()
                .map(|l| (Mat::zeros(l.w.rows(), l.w.cols()), vec![0.0; l.b.len()]))
                .collect(),
        }
    }

    pub fn add_assign(&mut self, other: &MlpGrads) {
        for ((w, b), (ow, ob)) in self.layers.iter_mut().zip(&other.layers) {
            w.add_assign(ow);
            crate::linalg::vec_add_assign(b, ob);
        }
    }

    pub fn scale(&mut self, s: f64) {
        for (w, b) in &mut self.layers {
            w.scale(s);
            crate::linalg::vec_scale(b, s);
        }
    }
}

impl Mlp {
    /// Builds an MLP with the given layer dimensions, e.g. `[in, hidden, out]`
    /// for one hidden layer. Requires at least one weight layer.
    pub fn new<R: Rng>(dims: &[usize], activation: Activation, rng: &mut R) -> Mlp {
        assert!(dims.len() >= 2, "an MLP needs at least one weight layer");
        let layers = dims
            .windows(2)
            .map(|w| Layer::glorot(w[1], w[0], rng))
            .collect();
        Mlp { layers, activation }
    }

    pub fn in_dim(&self) -> usize {
        self.layers.first().expect("nonempty").in_dim()
    }

    pub fn out_dim(&self) -> usize {
        self.layers.last().expect("nonempty").out_dim()
    }

    /// Forward pass for a single input vector.
    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>, NnError> {
        if x.len() != self.in_dim() {
            return Err(NnError::DimensionMismatch { got: x.len(), expected: self.in_dim() });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(NnError::NonFiniteInput);
        }
        let m = Mat::from_rows(&[x.to_vec()]);
        Ok(self.forward_batch(&m).row(0).to_vec())
    }

    /// Batched forward pass without a tape.
    pub fn forward_batch(&self, x: &Mat) -> Mat {
        let mut a = None;
        let last = self.layers.len() - 1;
        for (l, layer) in self.layers.iter().enumerate() {
            let mut z = layer.forward_batch(a.as_ref().unwrap_or(x));
            if l != last {
                for v in z.data_mut() {
                    *v = self.activation.apply(*v);
                }
            }
            a = Some(z);
        }
        a.expect("nonempty")
    }

    /// Batched forward pass recording the tape for [`Mlp::backward_batch`].
    pub fn forward_batch_tape(&self, x: &Mat) -> (Mat, MlpBatchTape) {
        let mut activations = Vec::with_capacity(self.layers.len() + 1);
        activations.push(x.clone());
        let last = self.layers.len() - 1;
        for (l, layer) in self.layers.iter().enumerate() {
            let mut z = layer.forward_batch(activations.last().unwrap());
            if l != last {
                for v in z.data_mut() {
                    *v = self.activation.apply(*v);
                }
            }
            activations.push(z);
        }
        let out = activations.last().unwrap().clone();
        (out, MlpBatchTape { activations })
    }

    /// Reverse pass. Accumulates parameter gradients into `grads` and
    /// returns the gradient with respect to the input rows.
    pub fn backward_batch(&self, tape: &MlpBatchTape, dy: &Mat, grads: &mut MlpGrads) -> Mat {
        assert_eq!(grads.layers.len(), self.layers.len(), "gradient shape mismatch");
        let mut delta = dy.clone();
        for l in (0..self.layers.len()).rev() {
            if l != self.layers.len() - 1 {
                // Chain through the activation using its recorded output.
                let out = &tape.activations[l + 1];
                for (d, &y) in delta.data_mut().iter_mut().zip(out.data()) {
                    *d *= self.activation.derivative_from_output(y);
                }
            }
            let input = &tape.activations[l];
            // dW = delta^T * input, db = column sums of delta.
            delta.t_mul_acc(input, &mut grads.layers[l].0);
            crate::linalg::vec_add_assign(&mut grads.layers[l].1, &delta.col_sums());
            if l > 0 {
                delta = delta.mul(&self.layers[l].w);
            } else {
                return delta.mul(&self.layers[l].w);
            }
        }
        unreachable!("loop returns at l == 0")
    }
}
