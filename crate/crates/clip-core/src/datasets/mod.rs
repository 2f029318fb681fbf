//! Labeled graph datasets: synthetic property-testing generators with
//! independent brute-force oracles, circular skip link graphs, the TU
//! line-oriented file format, and stratified fold planning.

mod folds;
mod gen;
mod oracles;
mod tu;

pub use folds::{stratified_folds, FoldPlan};
pub use gen::{
    csl_graph, gen_bipartiteness_dataset, gen_connectivity_dataset, gen_csl_dataset, gen_er,
    gen_trianglefree_dataset, DEFAULT_CSL_NODES, DEFAULT_CSL_SKIPS,
};
pub use oracles::{oracle_bipartite, oracle_connected, oracle_triangle_free};
pub use tu::{parse_tu_dataset, write_tu_dataset};

use crate::graph::{Graph, GraphError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("skip link {k} is degenerate for {n} nodes (need 2 <= k <= (n-1)/2)")]
    DegenerateSkipLink { n: usize, k: usize },
    #[error("skip links {a} and {b} give isomorphic circulant graphs")]
    IsomorphicSkipValues { a: usize, b: usize },
    #[error("class {class} has {count} members, fewer than {folds} folds")]
    ClassTooSmall { class: usize, count: usize, folds: usize },
    #[error("missing file: {0}")]
    MissingFile(String),
    #[error("{file}: malformed line {line}")]
    MalformedLine { file: String, line: usize },
    #[error("edge ({u}, {v}) spans two graphs ({gu} and {gv})")]
    DanglingEdge { u: usize, v: usize, gu: usize, gv: usize },
    #[error("graph ids are not contiguous starting at 1")]
    NonContiguousGraphIds,
    #[error("node attributes are not one-hot rows; cannot serialize node labels")]
    NonOneHotAttributes,
    #[error("labels and graphs differ in length")]
    LabelCountMismatch,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("I/O: {0}")]
    Io(#[from] std::io::Error),
    #[error("meta decode: {0}")]
    Meta(#[from] serde_json::Error),
}

/// Descriptive metadata carried by every dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetMeta {
    pub name: String,
    pub num_classes: usize,
    /// Largest attribute group over all graphs; the one-hot color dimension
    /// shared by every model trained on this dataset.
    pub color_dim: usize,
    /// Largest node degree over all graphs.
    pub max_degree: usize,
    /// Generation seed, when the dataset is synthetic.
    pub seed: Option<u64>,
    /// Generator parameters, free-form.
    pub params: serde_json::Value,
}

/// Graphs with class labels and dataset-level metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    pub graphs: Vec<Graph>,
    pub labels: Vec<usize>,
    pub meta: DatasetMeta,
}

impl LabeledDataset {
    /// Assembles a dataset, deriving `num_classes`, `color_dim`, and
    /// `max_degree` from the data.
    pub fn from_parts(
        name: &str,
        graphs: Vec<Graph>,
        labels: Vec<usize>,
        seed: Option<u64>,
        params: serde_json::Value,
    ) -> Result<LabeledDataset, DataError> {
        if graphs.len() != labels.len() {
            return Err(DataError::LabelCountMismatch);
        }
        let num_classes = labels.iter().max().map_or(0, |&m| m + 1);
        let color_dim = graphs
            .iter()
            .map(|g| g.attribute_groups().max_group_size())
            .max()
            .unwrap_or(0);
        let max_degree = graphs
            .iter()
            .flat_map(|g| (0..g.node_count()).map(|i| g.degree(i)))
            .max()
            .unwrap_or(0);
        Ok(LabeledDataset {
            graphs,
            labels,
            meta: DatasetMeta {
                name: name.to_string(),
                num_classes,
                color_dim,
                max_degree,
                seed,
                params,
            },
        })
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    /// Per-class example counts, indexed by label.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.meta.num_classes];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }
}
