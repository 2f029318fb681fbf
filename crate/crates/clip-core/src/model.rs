//! The CLIP network: colored initialization, iterated neighborhood
//! aggregation, coloring-max readout, and classification.
//!
//! One forward pass runs an independent MPNN branch per coloring:
//!
//! 1. node representations start as the node attributes concatenated with
//!    the coloring's one-hot colors,
//! 2. each hop updates node `i` to `psi(x_i, sum_{j in N_i} phi(x_j))`,
//! 3. final node representations are summed in ascending node order, the
//!    per-branch sums are reduced by a coefficient-wise max over colorings,
//!    and a readout MLP plus an affine head produce class logits.
//!
//! With no colorings the single branch skips the max entirely; this is the
//! plain-MPNN baseline. Branches of one pass and examples of one batch are
//! mapped in parallel through [`crate::exec`] and reduced in index order, so
//! results are identical to sequential execution.

use crate::coloring::{self, Coloring, ColoringError, ColoringSample};
use crate::exec;
use crate::graph::Graph;
use crate::linalg::{vec_add_assign, vec_scale, Mat};
use crate::nn::{
    softmax_cross_entropy, Activation, Layer, LossError, Mlp, MlpBatchTape, MlpGrads, NnError,
};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("coloring {index} is not valid for this graph's attribute partition")]
    ColoringMismatch { index: usize },
    #[error("graph attribute dimension {got} does not match model ({expected})")]
    AttrDimMismatch { got: usize, expected: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Nn(#[from] NnError),
    #[error(transparent)]
    Loss(#[from] LossError),
    #[error("checkpoint I/O: {0}")]
    Io(#[from] std::io::Error),
    #[error("checkpoint decode: {0}")]
    Decode(#[from] serde_json::Error),
    #[error("checkpoint format tag or version not recognized")]
    BadCheckpoint,
}

/// Number of colorings per forward pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColorBudget {
    /// No colorings at all: plain MPNN on the raw attributes.
    None,
    /// `k` colorings drawn uniformly without replacement.
    Sampled(usize),
    /// The entire coloring set, capped by `enumeration_cap`.
    Full,
}

impl ColorBudget {
    pub fn is_none(&self) -> bool {
        matches!(self, ColorBudget::None)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClipConfig {
    /// Number of aggregation hops (T).
    pub hops: usize,
    /// Colorings per forward pass (k).
    pub budget: ColorBudget,
    /// Hidden width of every MLP.
    pub hidden: usize,
    /// Node attribute dimension (m).
    pub attr_dim: usize,
    /// One-hot color dimension; at least the largest attribute group in the
    /// dataset, or 0 when `budget` is `None`.
    pub color_dim: usize,
    pub num_classes: usize,
    /// Coloring samples averaged at prediction time.
    pub eval_samples: usize,
    /// Concatenate node-sum representations from every hop at readout
    /// instead of using only the final hop.
    #[serde(default)]
    pub jumping_knowledge: bool,
    /// Cap on exhaustive enumeration in `Full` mode.
    #[serde(default = "default_enumeration_cap")]
    pub enumeration_cap: usize,
    #[serde(default = "default_activation")]
    pub activation: Activation,
}

fn default_enumeration_cap() -> usize {
    coloring::DEFAULT_ENUMERATION_CAP
}

fn default_activation() -> Activation {
    Activation::Relu
}

impl ClipConfig {
    pub fn validate(&self) -> Result<(), ModelError> {
        if self.hops == 0 {
            return Err(ModelError::InvalidConfig("hops must be at least 1".into()));
        }
        if self.hidden == 0 || self.num_classes == 0 || self.eval_samples == 0 {
            return Err(ModelError::InvalidConfig(
                "hidden, num_classes and eval_samples must be positive".into(),
            ));
        }
        match self.budget {
            ColorBudget::None if self.color_dim != 0 => Err(ModelError::InvalidConfig(
                "the no-coloring mode requires color_dim = 0".into(),
            )),
            ColorBudget::Sampled(0) => Err(ModelError::InvalidConfig(
                "sampled budget must be at least 1".into(),
            )),
            _ => Ok(()),
        }
    }

    /// Input dimension of the first hop.
    fn input_dim(&self) -> usize {
        self.attr_dim + self.color_dim
    }

    /// Dimension of one branch vector before the readout MLP.
    fn branch_dim(&self) -> usize {
        if self.jumping_knowledge {
            self.hops * self.hidden
        } else {
            self.hidden
        }
    }
}

/// One aggregation hop: `phi` embeds neighbors, `psi` combines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HopLayer {
    pub phi: Mlp,
    pub psi: Mlp,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClipModel {
    pub hops: Vec<HopLayer>,
    pub readout: Mlp,
    pub head: Layer,
    pub config: ClipConfig,
}

/// Gradients for every parameter of a [`ClipModel`].
#[derive(Debug, Clone)]
pub struct ModelGrads {
    pub hops: Vec<(MlpGrads, MlpGrads)>,
    pub readout: MlpGrads,
    pub head_w: Mat,
    pub head_b: Vec<f64>,
}

impl ModelGrads {
    pub fn zeros_like(model: &ClipModel) -> ModelGrads {
        ModelGrads {
            hops: model
                .hops
                .iter()
                .map(|h| (MlpGrads::zeros_like(&h.phi), MlpGrads::zeros_like(&h.psi)))
                .collect(),
            readout: MlpGrads::zeros_like(&model.readout),
            head_w: Mat::zeros(model.head.w.rows(), model.head.w.cols()),
            head_b: vec![0.0; model.head.b.len()],
        }
    }

    pub fn add_assign(&mut self, other: &ModelGrads) {
        for ((p, s), (op, os)) in self.hops.iter_mut().zip(&other.hops) {
            p.add_assign(op);
            s.add_assign(os);
        }
        self.readout.add_assign(&other.readout);
        self.head_w.add_assign(&other.head_w);
        vec_add_assign(&mut self.head_b, &other.head_b);
    }

    pub fn scale(&mut self, s: f64) {
        for (p, q) in &mut self.hops {
            p.scale(s);
            q.scale(s);
        }
        self.readout.scale(s);
        self.head_w.scale(s);
        vec_scale(&mut self.head_b, s);
    }

    /// Row-major flattening in the same order as [`ClipModel::params_flat`].
    pub fn to_flat(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for (p, q) in &self.hops {
            for (w, b) in &p.layers {
                out.extend_from_slice(w.data());
                out.extend_from_slice(b);
            }
            for (w, b) in &q.layers {
                out.extend_from_slice(w.data());
                out.extend_from_slice(b);
            }
        }
        for (w, b) in &self.readout.layers {
            out.extend_from_slice(w.data());
            out.extend_from_slice(b);
        }
        out.extend_from_slice(self.head_w.data());
        out.extend_from_slice(&self.head_b);
        out
    }
}

/// Per-branch tapes of one traced forward pass.
#[derive(Debug)]
struct BranchTape {
    hops: Vec<(MlpBatchTape, MlpBatchTape)>,
}

/// Everything the reverse pass needs from a forward pass.
#[derive(Debug)]
pub struct ForwardTrace {
    branch_vectors: Vec<Vec<f64>>,
    branch_tapes: Vec<BranchTape>,
    /// Winning branch per output coordinate (lowest index on ties).
    argmax: Vec<usize>,
    /// Smallest gap between the best and second-best branch over all
    /// coordinates; infinite for a single branch.
    pub tie_margin: f64,
    readout_tape: MlpBatchTape,
    readout_out: Vec<f64>,
    pub logits: Vec<f64>,
}

impl ClipModel {
    pub fn new<R: Rng>(config: ClipConfig, rng: &mut R) -> Result<ClipModel, ModelError> {
        config.validate()?;
        let h = config.hidden;
        let mut hops = Vec::with_capacity(config.hops);
        for t in 0..config.hops {
            let in_dim = if t == 0 { config.input_dim() } else { h };
            let phi = Mlp::new(&[in_dim, h, h], config.activation, rng);
            let psi = Mlp::new(&[in_dim + h, h, h], config.activation, rng);
            hops.push(HopLayer { phi, psi });
        }
        let readout = Mlp::new(&[config.branch_dim(), h, h], config.activation, rng);
        let head = Layer::glorot(config.num_classes, h, rng);
        Ok(ClipModel { hops, readout, head, config })
    }

    /// Initial node-feature matrices, one per branch.
    fn branch_inputs(
        &self,
        g: &Graph,
        sample: &ColoringSample,
    ) -> Result<Vec<Mat>, ModelError> {
        if g.attr_dim() != self.config.attr_dim {
            return Err(ModelError::AttrDimMismatch {
                got: g.attr_dim(),
                expected: self.config.attr_dim,
            });
        }
        if self.config.budget.is_none() {
            let rows: Vec<Vec<f64>> = (0..g.node_count()).map(|i| g.attr(i).to_vec()).collect();
            return Ok(vec![Mat::from_rows(&rows)]);
        }
        let partition = g.attribute_groups();
        let mut inputs = Vec::with_capacity(sample.colorings.len());
        for (index, c) in sample.colorings.iter().enumerate() {
            if !c.is_valid_for(&partition) {
                return Err(ModelError::ColoringMismatch { index });
            }
            inputs.push(coloring::apply_coloring(g, c, self.config.color_dim)?);
        }
        if inputs.is_empty() {
            return Err(ModelError::InvalidConfig("empty coloring sample".into()));
        }
        Ok(inputs)
    }

    /// One MPNN branch; returns the branch vector (node sums, ascending
    /// node order, optionally concatenated across hops).
    fn forward_branch(&self, g: &Graph, x0: Mat) -> Vec<f64> {
        let n = g.node_count();
        let h = self.config.hidden;
        let mut x = x0;
        let mut jk = Vec::new();
        for hop in &self.hops {
            let phi_out = hop.phi.forward_batch(&x);
            let mut s = Mat::zeros(n, h);
            for i in 0..n {
                let row = s.row_mut(i);
                for &j in g.neighbors_unchecked(i) {
                    vec_add_assign(row, phi_out.row(j));
                }
            }
            x = hop.psi.forward_batch(&x.hcat(&s));
            if self.config.jumping_knowledge {
                jk.push(x.col_sums());
            }
        }
        if self.config.jumping_knowledge {
            jk.concat()
        } else {
            x.col_sums()
        }
    }

    fn forward_branch_traced(&self, g: &Graph, x0: Mat) -> (Vec<f64>, BranchTape) {
        let n = g.node_count();
        let h = self.config.hidden;
        let mut x = x0;
        let mut jk = Vec::new();
        let mut tapes = Vec::with_capacity(self.hops.len());
        for hop in &self.hops {
            let (phi_out, phi_tape) = hop.phi.forward_batch_tape(&x);
            let mut s = Mat::zeros(n, h);
            for i in 0..n {
                let row = s.row_mut(i);
                for &j in g.neighbors_unchecked(i) {
                    vec_add_assign(row, phi_out.row(j));
                }
            }
            let (next, psi_tape) = hop.psi.forward_batch_tape(&x.hcat(&s));
            tapes.push((phi_tape, psi_tape));
            x = next;
            if self.config.jumping_knowledge {
                jk.push(x.col_sums());
            }
        }
        let v = if self.config.jumping_knowledge { jk.concat() } else { x.col_sums() };
        (v, BranchTape { hops: tapes })
    }

    /// Reverse pass of one branch from the gradient of its branch vector.
    fn backward_branch(
        &self,
        g: &Graph,
        tape: &BranchTape,
        d_branch: &[f64],
        grads: &mut ModelGrads,
    ) {
        let n = g.node_count();
        let h = self.config.hidden;
        let t_max = self.hops.len();
        let chunk = |t: usize| -> &[f64] {
            if self.config.jumping_knowledge {
                &d_branch[t * h..(t + 1) * h]
            } else {
                d_branch
            }
        };
        // Node-sum backward: every node receives the chunk gradient.
        let broadcast = |c: &[f64]| -> Mat {
            let mut m = Mat::zeros(n, h);
            for i in 0..n {
                m.row_mut(i).copy_from_slice(c);
            }
            m
        };
        let mut dx = broadcast(chunk(t_max - 1));
        for t in (0..t_max).rev() {
            let (phi_tape, psi_tape) = &tape.hops[t];
            let in_dim = self.hops[t].psi.in_dim() - h;
            let dc = self.hops[t].psi.backward_batch(psi_tape, &dx, &mut grads.hops[t].1);
            let (dxa, ds) = dc.hsplit(in_dim);
            // phi(x_j) feeds the sum of every neighbor i of j.
            let mut dphi = Mat::zeros(n, h);
            for j in 0..n {
                let row = dphi.row_mut(j);
                for &i in g.neighbors_unchecked(j) {
                    vec_add_assign(row, ds.row(i));
                }
            }
            let dxb = self.hops[t].phi.backward_batch(phi_tape, &dphi, &mut grads.hops[t].0);
            dx = dxa;
            dx.add_assign(&dxb);
            if self.config.jumping_knowledge && t > 0 {
                dx.add_assign(&broadcast(chunk(t - 1)));
            }
        }
    }

    /// Class logits for one graph under one coloring sample.
    pub fn forward(&self, g: &Graph, sample: &ColoringSample) -> Result<Vec<f64>, ModelError> {
        let inputs = self.branch_inputs(g, sample)?;
        let vectors = exec::map_collect(inputs.len(), |b| self.forward_branch(g, inputs[b].clone()));
        let (max_vec, _, _) = coefficientwise_max(&vectors);
        Ok(self.readout_and_head(&max_vec).0)
    }

    /// Forward pass that also records everything needed for the reverse
    /// pass, including the max tie margin.
    pub fn forward_traced(
        &self,
        g: &Graph,
        sample: &ColoringSample,
    ) -> Result<ForwardTrace, ModelError> {
        let inputs = self.branch_inputs(g, sample)?;
        let results =
            exec::map_collect(inputs.len(), |b| self.forward_branch_traced(g, inputs[b].clone()));
        let mut branch_vectors = Vec::with_capacity(results.len());
        let mut branch_tapes = Vec::with_capacity(results.len());
        for (v, t) in results {
            branch_vectors.push(v);
            branch_tapes.push(t);
        }
        let (max_vec, argmax, tie_margin) = coefficientwise_max(&branch_vectors);
        let (logits, readout_tape, readout_out) = self.readout_and_head_traced(&max_vec);
        Ok(ForwardTrace {
            branch_vectors,
            branch_tapes,
            argmax,
            tie_margin,
            readout_tape,
            readout_out,
            logits,
        })
    }

    fn readout_and_head(&self, branch_max: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let r = self.readout.forward_batch(&Mat::from_rows(&[branch_max.to_vec()]));
        let out = r.row(0).to_vec();
        let logits = self.head.forward_batch(&r).row(0).to_vec();
        (logits, out)
    }

    fn readout_and_head_traced(&self, branch_max: &[f64]) -> (Vec<f64>, MlpBatchTape, Vec<f64>) {
        let (r, tape) = self.readout.forward_batch_tape(&Mat::from_rows(&[branch_max.to_vec()]));
        let logits = self.head.forward_batch(&r).row(0).to_vec();
        (logits, tape, r.row(0).to_vec())
    }

    /// Reverse pass from a logit gradient; accumulates into `grads`.
    ///
    /// The coefficient-wise max routes each coordinate's gradient to the
    /// single branch that achieved it (lowest index on ties).
    pub fn backward(
        &self,
        g: &Graph,
        trace: &ForwardTrace,
        d_logits: &[f64],
        grads: &mut ModelGrads,
    ) {
        // Head: logits = W r + b.
        let r = Mat::from_rows(&[trace.readout_out.clone()]);
        let dl = Mat::from_rows(&[d_logits.to_vec()]);
        dl.t_mul_acc(&r, &mut grads.head_w);
        vec_add_assign(&mut grads.head_b, d_logits);
        let dr = dl.mul(&self.head.w);
        // Readout MLP.
        let dmax = self.readout.backward_batch(&trace.readout_tape, &dr, &mut grads.readout);
        // Route per coordinate to the winning branch, then run the branch
        // reverse passes and merge in ascending branch order.
        let branches = trace.branch_vectors.len();
        let dim = trace.branch_vectors[0].len();
        let mut per_branch: Vec<Vec<f64>> = vec![vec![0.0; dim]; branches];
        let mut touched = vec![false; branches];
        for j in 0..dim {
            let b = trace.argmax[j];
            per_branch[b][j] = dmax.row(0)[j];
            touched[b] = true;
        }
        let branch_grads = exec::map_collect(branches, |b| {
            if !touched[b] {
                return None;
            }
            let mut local = ModelGrads::zeros_like(self);
            self.backward_branch(g, &trace.branch_tapes[b], &per_branch[b], &mut local);
            Some(local)
        });
        for bg in branch_grads.into_iter().flatten() {
            grads.add_assign(&bg);
        }
    }

    /// Mean cross-entropy and gradients over a batch; examples are mapped
    /// in parallel and reduced in ascending batch order.
    pub fn loss_and_grads(
        &self,
        examples: &[(&Graph, usize, &ColoringSample)],
    ) -> Result<(f64, ModelGrads), ModelError> {
        assert!(!examples.is_empty(), "empty batch");
        let per_example = exec::map_collect(examples.len(), |i| {
            let (g, label, sample) = examples[i];
            let trace = self.forward_traced(g, sample)?;
            let (loss, d_logits) = softmax_cross_entropy(&trace.logits, label)?;
            let mut grads = ModelGrads::zeros_like(self);
            self.backward(g, &trace, &d_logits, &mut grads);
            Ok::<(f64, ModelGrads), ModelError>((loss, grads))
        });
        let mut total = ModelGrads::zeros_like(self);
        let mut loss_sum = 0.0;
        for r in per_example {
            let (loss, grads) = r?;
            loss_sum += loss;
            total.add_assign(&grads);
        }
        let scale = 1.0 / examples.len() as f64;
        total.scale(scale);
        Ok((loss_sum * scale, total))
    }

    /// Mean cross-entropy only (used by the finite-difference oracle).
    pub fn loss(&self, examples: &[(&Graph, usize, &ColoringSample)]) -> Result<f64, ModelError> {
        let mut sum = 0.0;
        for &(g, label, sample) in examples {
            let logits = self.forward(g, sample)?;
            sum += softmax_cross_entropy(&logits, label)?.0;
        }
        Ok(sum / examples.len() as f64)
    }

    /// Draws the coloring sample this model's budget prescribes.
    pub fn draw_sample<R: Rng>(
        &self,
        g: &Graph,
        rng: &mut R,
    ) -> Result<ColoringSample, ModelError> {
        match self.config.budget {
            ColorBudget::None => Ok(ColoringSample {
                colorings: vec![Coloring::trivial(g.node_count())],
                exhaustive: false,
            }),
            ColorBudget::Sampled(k) => {
                Ok(coloring::sample_colorings(&g.attribute_groups(), k, rng)?)
            }
            ColorBudget::Full => {
                let all = coloring::enumerate_colorings(
                    &g.attribute_groups(),
                    self.config.enumeration_cap,
                )?;
                Ok(ColoringSample { colorings: all, exhaustive: true })
            }
        }
    }

    /// Predicted class: logits averaged over `eval_samples` independent
    /// coloring samples, argmax with ties broken toward the lowest class.
    ///
    /// The no-coloring and all-colorings modes are deterministic and ignore
    /// both the RNG and `eval_samples`.
    pub fn predict<R: Rng>(
        &self,
        g: &Graph,
        eval_samples: usize,
        rng: &mut R,
    ) -> Result<usize, ModelError> {
        assert!(eval_samples >= 1, "eval_samples must be at least 1");
        let deterministic = !matches!(self.config.budget, ColorBudget::Sampled(_));
        let rounds = if deterministic { 1 } else { eval_samples };
        let mut acc = vec![0.0; self.config.num_classes];
        for _ in 0..rounds {
            let sample = self.draw_sample(g, rng)?;
            vec_add_assign(&mut acc, &self.forward(g, &sample)?);
        }
        vec_scale(&mut acc, 1.0 / rounds as f64);
        Ok(argmax_lowest(&acc))
    }

    /// Averaged logits over `eval_samples` draws (the vector [`Self::predict`]
    /// takes the argmax of).
    pub fn mean_logits<R: Rng>(
        &self,
        g: &Graph,
        eval_samples: usize,
        rng: &mut R,
    ) -> Result<Vec<f64>, ModelError> {
        let deterministic = !matches!(self.config.budget, ColorBudget::Sampled(_));
        let rounds = if deterministic { 1 } else { eval_samples };
        let mut acc = vec![0.0; self.config.num_classes];
        for _ in 0..rounds {
            let sample = self.draw_sample(g, rng)?;
            vec_add_assign(&mut acc, &self.forward(g, &sample)?);
        }
        vec_scale(&mut acc, 1.0 / rounds as f64);
        Ok(acc)
    }

    pub fn param_count(&self) -> usize {
        self.params_flat().len()
    }

    /// Row-major parameter flattening; the layout matches
    /// [`ModelGrads::to_flat`].
    pub fn params_flat(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for hop in &self.hops {
            for mlp in [&hop.phi, &hop.psi] {
                for layer in &mlp.layers {
                    out.extend_from_slice(layer.w.data());
                    out.extend_from_slice(&layer.b);
                }
            }
        }
        for layer in &self.readout.layers {
            out.extend_from_slice(layer.w.data());
            out.extend_from_slice(&layer.b);
        }
        out.extend_from_slice(self.head.w.data());
        out.extend_from_slice(&self.head.b);
        out
    }

    /// Loads a flat parameter vector produced by [`Self::params_flat`].
    pub fn set_params_flat(&mut self, flat: &[f64]) {
        let mut pos = 0;
        let mut take = |dst: &mut [f64]| {
            dst.copy_from_slice(&flat[pos..pos + dst.len()]);
            pos += dst.len();
        };
        for hop in &mut self.hops {
            for mlp in [&mut hop.phi, &mut hop.psi] {
                for layer in &mut mlp.layers {
                    take(layer.w.data_mut());
                    take(&mut layer.b);
                }
            }
        }
        for layer in &mut self.readout.layers {
            take(layer.w.data_mut());
            take(&mut layer.b);
        }
        take(self.head.w.data_mut());
        take(&mut self.head.b);
        assert_eq!(pos, flat.len(), "flat parameter length mismatch");
    }

    pub fn save_checkpoint(&self, path: &Path) -> Result<(), ModelError> {
        let wrapper = Checkpoint { format: FORMAT_TAG.into(), version: 1, model: self.clone() };
        let json = serde_json::to_string_pretty(&wrapper)?;
        std::fs::write(path, json)?;
        Ok(())
    }

    pub fn load_checkpoint(path: &Path) -> Result<ClipModel, ModelError> {
        let raw = std::fs::read_to_string(path)?;
        let wrapper: Checkpoint = serde_json::from_str(&raw)?;
        if wrapper.format != FORMAT_TAG || wrapper.version != 1 {
            return Err(ModelError::BadCheckpoint);
        }
        wrapper.model.config.validate()?;
        Ok(wrapper.model)
    }
}

const FORMAT_TAG: &str = "clip-model-checkpoint";

#[derive(Serialize, Deserialize)]
struct Checkpoint {
    format: String,
    version: u32,
    model: ClipModel,
}

/// DeepSet-style neighborhood update: `psi(x, sum_{y in S} phi(y))`.
///
/// Neighbor vectors are summed in the order supplied; callers that need
/// exact order independence pass them in a canonical (index-sorted) order,
/// which is what the model does internally. An empty neighbor set
/// contributes the zero vector.
pub fn node_aggregation(
    phi: &Mlp,
    psi: &Mlp,
    x: &[f64],
    neighbors: &[Vec<f64>],
) -> Result<Vec<f64>, NnError> {
    let mut sum = vec![0.0; phi.out_dim()];
    for y in neighbors {
        vec_add_assign(&mut sum, &phi.forward(y)?);
    }
    let mut concat = Vec::with_capacity(x.len() + sum.len());
    concat.extend_from_slice(x);
    concat.extend_from_slice(&sum);
    psi.forward(&concat)
}

/// Coefficient-wise max over branch vectors. Returns the max vector, the
/// winning branch per coordinate (lowest index on ties), and the smallest
/// best-to-second gap (infinite for a single branch).
fn coefficientwise_max(vectors: &[Vec<f64>]) -> (Vec<f64>, Vec<usize>, f64) {
    let dim = vectors[0].len();
    let mut max_vec = vectors[0].clone();
    let mut argmax = vec![0usize; dim];
    let mut second = vec![f64::NEG_INFINITY; dim];
    for (b, v) in vectors.iter().enumerate().skip(1) {
        for j in 0..dim {
            if v[j] > max_vec[j] {
                second[j] = max_vec[j];
                max_vec[j] = v[j];
                argmax[j] = b;
            } else if v[j] > second[j] {
                second[j] = v[j];
            }
        }
    }
    let margin = if vectors.len() == 1 {
        f64::INFINITY
    } else {
        (0..dim).map(|j| max_vec[j] - second[j]).fold(f64::INFINITY, f64::min)
    };
    (max_vec, argmax, margin)
}

/// Index of the largest value, lowest index on exact ties.
pub fn argmax_lowest(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::sample_colorings;
    use crate::rng::stream;

    fn small_config(budget: ColorBudget, color_dim: usize) -> ClipConfig {
        ClipConfig {
            hops: 2,
            budget,
            hidden: 4,
            attr_dim: 1,
            color_dim,
            num_classes: 3,
            eval_samples: 2,
            jumping_knowledge: false,
            enumeration_cap: coloring::DEFAULT_ENUMERATION_CAP,
            activation: Activation::Relu,
        }
    }

    fn path4() -> Graph {
        Graph::new(
            vec![vec![1.0]; 4],
            vec![
                vec![0, 1, 0, 0],
                vec![1, 0, 1, 0],
                vec![0, 1, 0, 1],
                vec![0, 0, 1, 0],
            ],
        )
        .unwrap()
    }

    #[test]
    fn config_validation() {
        let mut c = small_config(ColorBudget::None, 0);
        assert!(c.validate().is_ok());
        c.color_dim = 3;
        assert!(c.validate().is_err());
        let mut c2 = small_config(ColorBudget::Sampled(2), 4);
        assert!(c2.validate().is_ok());
        c2.hops = 0;
        assert!(c2.validate().is_err());
        let c3 = small_config(ColorBudget::Sampled(0), 4);
        assert!(c3.validate().is_err());
    }

    #[test]
    fn node_aggregation_empty_neighborhood_uses_zero_sum() {
        let mut rng = stream(21, &[]);
        let phi = Mlp::new(&[2, 3, 3], Activation::Relu, &mut rng);
        let psi = Mlp::new(&[5, 3, 2], Activation::Relu, &mut rng);
        let x = [0.5, -1.0];
        let got = node_aggregation(&phi, &psi, &x, &[]).unwrap();
        let expected = psi.forward(&[0.5, -1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(got, expected);
    }

    #[test]
    fn node_aggregation_two_equal_neighbors_double_phi() {
        let mut rng = stream(22, &[]);
        let phi = Mlp::new(&[1, 2, 2], Activation::Tanh, &mut rng);
        let psi = Mlp::new(&[3, 2, 2], Activation::Tanh, &mut rng);
        let y = vec![0.7];
        let two = node_aggregation(&phi, &psi, &[0.1], &[y.clone(), y.clone()]).unwrap();
        let phi_y = phi.forward(&y).unwrap();
        let direct = psi
            .forward(&[0.1, 2.0 * phi_y[0], 2.0 * phi_y[1]])
            .unwrap();
        for (a, b) in two.iter().zip(&direct) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn node_aggregation_pairwise_reorder_is_exact() {
        let mut rng = stream(23, &[]);
        let phi = Mlp::new(&[1, 2, 2], Activation::Relu, &mut rng);
        let psi = Mlp::new(&[3, 2, 1], Activation::Relu, &mut rng);
        let a = vec![0.3];
        let b = vec![-0.8];
        let ab = node_aggregation(&phi, &psi, &[0.0], &[a.clone(), b.clone()]).unwrap();
        let ba = node_aggregation(&phi, &psi, &[0.0], &[b, a]).unwrap();
        assert_eq!(ab, ba);
    }

    #[test]
    fn single_coloring_max_is_identity() {
        // With one branch the max must pass the branch vector through.
        let g = path4();
        let mut rng = stream(24, &[]);
        let model = ClipModel::new(small_config(ColorBudget::Sampled(1), 4), &mut rng).unwrap();
        let sample = sample_colorings(&g.attribute_groups(), 1, &mut rng).unwrap();
        let trace = model.forward_traced(&g, &sample).unwrap();
        assert!(trace.argmax.iter().all(|&b| b == 0));
        assert!(trace.tie_margin.is_infinite());
        let logits = model.forward(&g, &sample).unwrap();
        assert_eq!(logits, trace.logits);
    }

    #[test]
    fn forward_is_deterministic_and_order_independent_of_parallelism() {
        let g = path4();
        let mut rng = stream(25, &[]);
        let model = ClipModel::new(small_config(ColorBudget::Sampled(4), 4), &mut rng).unwrap();
        let sample = sample_colorings(&g.attribute_groups(), 4, &mut rng).unwrap();
        let a = model.forward(&g, &sample).unwrap();
        let b = model.forward(&g, &sample).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn coloring_mismatch_detected() {
        let g = path4();
        let other = Graph::new(
            vec![vec![1.0], vec![2.0]],
            vec![vec![0, 1], vec![1, 0]],
        )
        .unwrap();
        let mut rng = stream(26, &[]);
        let model = ClipModel::new(small_config(ColorBudget::Sampled(1), 4), &mut rng).unwrap();
        let sample = sample_colorings(&other.attribute_groups(), 1, &mut rng).unwrap();
        let err = model.forward(&g, &sample).unwrap_err();
        assert!(matches!(err, ModelError::ColoringMismatch { .. }));
    }

    #[test]
    fn zero_budget_predict_is_rng_independent() {
        let g = path4();
        let mut rng = stream(27, &[]);
        let model = ClipModel::new(small_config(ColorBudget::None, 0), &mut rng).unwrap();
        let p1 = model.predict(&g, 5, &mut stream(1, &[])).unwrap();
        let p2 = model.predict(&g, 1, &mut stream(999, &[])).unwrap();
        assert_eq!(p1, p2);
    }

    #[test]
    fn full_budget_predict_is_rng_independent() {
        let g = path4();
        let mut rng = stream(28, &[]);
        let model = ClipModel::new(small_config(ColorBudget::Full, 4), &mut rng).unwrap();
        let p1 = model.predict(&g, 3, &mut stream(4, &[])).unwrap();
        let p2 = model.predict(&g, 7, &mut stream(5, &[])).unwrap();
        assert_eq!(p1, p2);
    }

    #[test]
    fn duplicated_example_keeps_mean_loss() {
        let g = path4();
        let mut rng = stream(29, &[]);
        let model = ClipModel::new(small_config(ColorBudget::Sampled(2), 4), &mut rng).unwrap();
        let sample = sample_colorings(&g.attribute_groups(), 2, &mut rng).unwrap();
        let single = model.loss(&[(&g, 1, &sample)]).unwrap();
        let doubled = model.loss(&[(&g, 1, &sample), (&g, 1, &sample)]).unwrap();
        assert!((single - doubled).abs() < 1e-15);
    }

    #[test]
    fn saturated_softmax_has_tiny_loss_and_grads() {
        let g = path4();
        let mut rng = stream(30, &[]);
        let mut model =
            ClipModel::new(small_config(ColorBudget::Sampled(1), 4), &mut rng).unwrap();
        let sample = sample_colorings(&g.attribute_groups(), 1, &mut rng).unwrap();
        // Force an extreme bias toward class 0.
        model.head.b = vec![50.0, -50.0, -50.0];
        let (loss, grads) = model.loss_and_grads(&[(&g, 0, &sample)]).unwrap();
        assert!(loss < 1e-12);
        assert!(grads.to_flat().iter().all(|g| g.abs() < 1e-12));
    }

    #[test]
    fn params_flat_roundtrip() {
        let mut rng = stream(31, &[]);
        let model = ClipModel::new(small_config(ColorBudget::Sampled(2), 4), &mut rng).unwrap();
        let flat = model.params_flat();
        let mut other =
            ClipModel::new(small_config(ColorBudget::Sampled(2), 4), &mut rng).unwrap();
        assert_ne!(other.params_flat(), flat);
        other.set_params_flat(&flat);
        assert_eq!(other.params_flat(), flat);
        assert_eq!(other, model);
    }

    #[test]
    fn grads_flat_matches_param_layout() {
        let mut rng = stream(32, &[]);
        let model = ClipModel::new(small_config(ColorBudget::Sampled(2), 4), &mut rng).unwrap();
        let grads = ModelGrads::zeros_like(&model);
        assert_eq!(grads.to_flat().len(), model.param_count());
    }

    #[test]
    fn checkpoint_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        let mut rng = stream(33, &[]);
        let model = ClipModel::new(small_config(ColorBudget::Sampled(3), 4), &mut rng).unwrap();
        model.save_checkpoint(&path).unwrap();
        let loaded = ClipModel::load_checkpoint(&path).unwrap();
        assert_eq!(loaded, model);
    }

    #[test]
    fn checkpoint_rejects_bad_tag() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        std::fs::write(&path, r#"{"format":"other","version":1,"model":{}}"#).unwrap();
        assert!(ClipModel::load_checkpoint(&path).is_err());
    }

    #[test]
    fn argmax_breaks_ties_low() {
        assert_eq!(argmax_lowest(&[1.0, 1.0, 0.5]), 0);
        assert_eq!(argmax_lowest(&[0.0, 2.0, 2.0]), 1);
        assert_eq!(argmax_lowest(&[-1.0]), 0);
    }

    #[test]
    fn coefficientwise_max_routes_lowest_on_ties() {
        let (m, am, margin) =
            coefficientwise_max(&[vec![1.0, 5.0], vec![1.0, 7.0], vec![0.0, 7.0]]);
        assert_eq!(m, vec![1.0, 7.0]);
        assert_eq!(am, vec![0, 1]);
        assert_eq!(margin, 0.0);
    }
}
