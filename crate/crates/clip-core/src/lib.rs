//! Colored message-passing graph networks.
//!
//! The library implements a message passing neural network (MPNN) whose
//! initial node features are augmented with node colorings that disambiguate
//! identical attributes (CLIP, short for Colored Local Iterative Procedure),
//! together with everything needed to evaluate it on graph property testing
//! tasks:
//!
//! * [`graph`] — immutable attributed graphs, the permutation action, and
//!   attribute-group partitioning,
//! * [`coloring`] — enumeration, counting, and uniform sampling of node
//!   colorings over an attribute partition,
//! * [`nn`] — minimal dense linear algebra, MLPs with reverse-mode
//!   gradients, Adam, and the step-decay learning-rate schedule,
//! * [`model`] — the CLIP network itself: colored initialization, iterated
//!   neighborhood aggregation, coloring-max readout, loss/gradients, and
//!   sample-averaged prediction,
//! * [`datasets`] — synthetic property-testing datasets with independent
//!   brute-force oracles, circular skip link graphs, a TU-format parser, and
//!   stratified fold planning,
//! * [`harness`] — the training loop, 10-fold cross-validation with epoch
//!   selection, and grid search.
//!
//! Per-coloring branches, per-graph batch gradients, and per-fold
//! cross-validation runs execute in parallel through [`exec`] when the
//! `parallel` feature (on by default) is enabled; results are bit-identical
//! to the sequential fallback.

pub mod coloring;
pub mod datasets;
pub mod exec;
pub mod graph;
pub mod harness;
pub mod linalg;
pub mod model;
pub mod nn;
pub mod rng;

pub use coloring::{Coloring, ColoringSample};
pub use graph::{Graph, Partition};
pub use model::{ClipConfig, ClipModel, ColorBudget};
