//! MLPs with reverse-mode gradients, the Adam optimizer, and the step-decay
//! learning-rate schedule.

mod adam;
mod loss;
mod mlp;

pub use adam::{lr_at, AdamParams, AdamState};
pub use loss::{softmax_cross_entropy, LossError};
pub use mlp::{Activation, Layer, Mlp, MlpBatchTape, MlpGrads, NnError};
