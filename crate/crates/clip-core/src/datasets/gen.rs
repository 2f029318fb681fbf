//! Synthetic dataset generators.
//!
//! Each property dataset holds 1000 20-node graphs, 500 per class. Positive
//! samples exhibit the property by construction; each negative is its source
//! positive with edges added to destroy exactly that property, so the two
//! classes differ in nothing else. Every generated label is re-checked
//! against the independent oracle before the dataset is returned.
//!
//! All synthetic graphs share the constant scalar attribute `1.0`, i.e.
//! uninformative features: the tasks are purely structural.

use super::oracles::{oracle_bipartite, oracle_connected, oracle_triangle_free};
use super::{DataError, LabeledDataset};
use crate::graph::Graph;
use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::json;

/// Node count of the circular skip link graphs.
pub const DEFAULT_CSL_NODES: usize = 41;

/// Canonical skip values: ten pairwise non-isomorphic classes on 41 nodes.
pub const DEFAULT_CSL_SKIPS: [usize; 10] = [2, 3, 4, 5, 6, 9, 11, 12, 13, 16];

const PROPERTY_NODES: usize = 20;
const PROPERTY_SAMPLES_PER_CLASS: usize = 500;

fn constant_attrs(n: usize) -> Vec<Vec<f64>> {
    vec![vec![1.0]; n]
}

fn graph_from_adj(adj: Vec<Vec<u8>>) -> Graph {
    let n = adj.len();
    Graph::new(constant_attrs(n), adj).expect("generator produced an invalid graph")
}

/// Erdős–Rényi G(n, p): each unordered pair is an edge independently with
/// probability `p`. Nodes carry the constant attribute `1.0`.
pub fn gen_er<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    assert!((0.0..=1.0).contains(&p), "edge probability out of range");
    let mut adj = vec![vec![0u8; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_bool(p) {
                adj[i][j] = 1;
                adj[j][i] = 1;
            }
        }
    }
    graph_from_adj(adj)
}

/// A connected 10-node ER(0.5) component, resampled until connected.
fn connected_component<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    loop {
        let g = gen_er(n, p, rng);
        if oracle_connected(&g) {
            return g;
        }
    }
}

/// Disjoint union placing `b`'s nodes after `a`'s.
fn disjoint_union(a: &Graph, b: &Graph) -> Vec<Vec<u8>> {
    let n = a.node_count() + b.node_count();
    let offset = a.node_count();
    let mut adj = vec![vec![0u8; n]; n];
    for (i, j) in a.edges() {
        adj[i][j] = 1;
        adj[j][i] = 1;
    }
    for (i, j) in b.edges() {
        adj[i + offset][j + offset] = 1;
        adj[j + offset][i + offset] = 1;
    }
    adj
}

/// Connectivity dataset: positives are disjoint unions of two connected
/// 10-node ER(0.5) components; each negative adds one random edge between
/// its positive's two components, connecting the graph.
pub fn gen_connectivity_dataset<R: Rng>(rng: &mut R) -> LabeledDataset {
    let half = PROPERTY_NODES / 2;
    let mut graphs = Vec::with_capacity(2 * PROPERTY_SAMPLES_PER_CLASS);
    let mut labels = Vec::with_capacity(2 * PROPERTY_SAMPLES_PER_CLASS);
    let mut negatives = Vec::with_capacity(PROPERTY_SAMPLES_PER_CLASS);
    for _ in 0..PROPERTY_SAMPLES_PER_CLASS {
        let a = connected_component(half, 0.5, rng);
        let b = connected_component(half, 0.5, rng);
        let adj = disjoint_union(&a, &b);
        let positive = graph_from_adj(adj.clone());
        debug_assert!(!oracle_connected(&positive));
        let u = rng.gen_range(0..half);
        let v = half + rng.gen_range(0..half);
        let mut neg_adj = adj;
        neg_adj[u][v] = 1;
        neg_adj[v][u] = 1;
        let negative = graph_from_adj(neg_adj);
        debug_assert!(oracle_connected(&negative));
        graphs.push(positive);
        labels.push(1);
        negatives.push(negative);
    }
    graphs.extend(negatives);
    labels.extend(std::iter::repeat(0).take(PROPERTY_SAMPLES_PER_CLASS));
    LabeledDataset::from_parts(
        "connectivity",
        graphs,
        labels,
        None,
        json!({"task": "connectivity", "nodes": PROPERTY_NODES, "p": 0.5, "positive_label": 1,
               "positive_means": "two connected components"}),
    )
    .expect("generator invariants")
}

/// Bipartite ER graph: two 10-node sides, cross edges with probability `p`.
fn bipartite_er<R: Rng>(side: usize, p: f64, rng: &mut R) -> Vec<Vec<u8>> {
    let n = 2 * side;
    let mut adj = vec![vec![0u8; n]; n];
    for i in 0..side {
        for j in side..n {
            if rng.gen_bool(p) {
                adj[i][j] = 1;
                adj[j][i] = 1;
            }
        }
    }
    adj
}

/// Connected component ids via BFS.
fn component_ids(g: &Graph) -> Vec<usize> {
    let n = g.node_count();
    let mut comp = vec![usize::MAX; n];
    let mut next = 0;
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        comp[start] = next;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for &j in g.neighbors_unchecked(i) {
                if comp[j] == usize::MAX {
                    comp[j] = next;
                    stack.push(j);
                }
            }
        }
        next += 1;
    }
    comp
}

/// Bipartiteness dataset: positives are bipartite ER graphs (two 10-node
/// sides, cross probability 0.5); each negative adds one edge inside a
/// randomly chosen side between two nodes of the same connected component,
/// closing an odd cycle.
pub fn gen_bipartiteness_dataset<R: Rng>(rng: &mut R) -> LabeledDataset {
    let side = PROPERTY_NODES / 2;
    let mut graphs = Vec::with_capacity(2 * PROPERTY_SAMPLES_PER_CLASS);
    let mut labels = Vec::with_capacity(2 * PROPERTY_SAMPLES_PER_CLASS);
    let mut negatives = Vec::with_capacity(PROPERTY_SAMPLES_PER_CLASS);
    'outer: for _ in 0..PROPERTY_SAMPLES_PER_CLASS {
        loop {
            let adj = bipartite_er(side, 0.5, rng);
            let positive = graph_from_adj(adj.clone());
            debug_assert!(oracle_bipartite(&positive));
            let comp = component_ids(&positive);
            // Draw same-side endpoint pairs until they share a component.
            for _ in 0..10_000 {
                let base = if rng.gen_bool(0.5) { 0 } else { side };
                let u = base + rng.gen_range(0..side);
                let v = base + rng.gen_range(0..side);
                if u == v || comp[u] != comp[v] {
                    continue;
                }
                let mut neg_adj = adj.clone();
                neg_adj[u][v] = 1;
                neg_adj[v][u] = 1;
                let negative = graph_from_adj(neg_adj);
                debug_assert!(!oracle_bipartite(&negative));
                graphs.push(positive);
                labels.push(1);
                negatives.push(negative);
                continue 'outer;
            }
            // No same-component pair found (degenerate draw); resample.
        }
    }
    graphs.extend(negatives);
    labels.extend(std::iter::repeat(0).take(PROPERTY_SAMPLES_PER_CLASS));
    LabeledDataset::from_parts(
        "bipartiteness",
        graphs,
        labels,
        None,
        json!({"task": "bipartiteness", "nodes": PROPERTY_NODES, "p": 0.5, "positive_label": 1,
               "positive_means": "bipartite"}),
    )
    .expect("generator invariants")
}

/// Triangle-freeness dataset: positives are ER(20, 0.1) graphs resampled
/// until triangle-free; each negative adds uniformly random missing edges
/// one at a time until at least one triangle exists.
pub fn gen_trianglefree_dataset<R: Rng>(rng: &mut R) -> LabeledDataset {
    let n = PROPERTY_NODES;
    let mut graphs = Vec::with_capacity(2 * PROPERTY_SAMPLES_PER_CLASS);
    let mut labels = Vec::with_capacity(2 * PROPERTY_SAMPLES_PER_CLASS);
    let mut negatives = Vec::with_capacity(PROPERTY_SAMPLES_PER_CLASS);
    for _ in 0..PROPERTY_SAMPLES_PER_CLASS {
        let positive = loop {
            let g = gen_er(n, 0.1, rng);
            if oracle_triangle_free(&g) {
                break g;
            }
        };
        let mut adj = vec![vec![0u8; n]; n];
        for (i, j) in positive.edges() {
            adj[i][j] = 1;
            adj[j][i] = 1;
        }
        let negative = loop {
            let missing: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
                .filter(|&(i, j)| adj[i][j] == 0)
                .collect();
            let &(i, j) = missing.choose(rng).expect("complete graph has triangles");
            adj[i][j] = 1;
            adj[j][i] = 1;
            let candidate = graph_from_adj(adj.clone());
            if !oracle_triangle_free(&candidate) {
                break candidate;
            }
        };
        graphs.push(positive);
        labels.push(1);
        negatives.push(negative);
    }
    graphs.extend(negatives);
    labels.extend(std::iter::repeat(0).take(PROPERTY_SAMPLES_PER_CLASS));
    LabeledDataset::from_parts(
        "trianglefree",
        graphs,
        labels,
        None,
        json!({"task": "trianglefree", "nodes": PROPERTY_NODES, "p": 0.1, "positive_label": 1,
               "positive_means": "triangle-free"}),
    )
    .expect("generator invariants")
}

/// Circular skip link graph: nodes `0..n` with edges wherever
/// `|i - j| ≡ 1 or k (mod n)`. 4-regular for `2 <= k <= (n-1)/2`,
/// constant node attributes.
pub fn csl_graph(n: usize, k: usize) -> Result<Graph, DataError> {
    if n < 5 || k < 2 || 2 * k > n - 1 {
        return Err(DataError::DegenerateSkipLink { n, k });
    }
    let mut adj = vec![vec![0u8; n]; n];
    for i in 0..n {
        for d in [1, k] {
            let j = (i + d) % n;
            adj[i][j] = 1;
            adj[j][i] = 1;
        }
    }
    Ok(graph_from_adj(adj))
}

/// Eigenvalues of the circulant adjacency with connection set `{±1, ±k}`:
/// `λ_j = 2cos(2πj/n) + 2cos(2πkj/n)`, sorted ascending.
fn circulant_spectrum(n: usize, k: usize) -> Vec<f64> {
    let tau = 2.0 * std::f64::consts::PI / n as f64;
    let mut eig: Vec<f64> = (0..n)
        .map(|j| 2.0 * (tau * j as f64).cos() + 2.0 * (tau * ((k * j) % n) as f64).cos())
        .collect();
    eig.sort_by(|a, b| a.total_cmp(b));
    eig
}

/// Circular skip link dataset: for each skip value, `copies` uniformly
/// random relabelings of the same 41-node circulant; the class label is the
/// skip value's position. Skip values whose spectra coincide are rejected.
pub fn gen_csl_dataset<R: Rng>(
    ks: &[usize],
    copies: usize,
    rng: &mut R,
) -> Result<LabeledDataset, DataError> {
    let n = DEFAULT_CSL_NODES;
    // Pairwise spectral check: equal spectra would mean (possibly)
    // isomorphic classes, which the labels cannot tolerate.
    let spectra: Vec<Vec<f64>> = ks.iter().map(|&k| circulant_spectrum(n, k)).collect();
    for a in 0..ks.len() {
        for b in (a + 1)..ks.len() {
            let max_gap = spectra[a]
                .iter()
                .zip(&spectra[b])
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            if max_gap < 1e-9 {
                return Err(DataError::IsomorphicSkipValues { a: ks[a], b: ks[b] });
            }
        }
    }
    let mut graphs = Vec::with_capacity(ks.len() * copies);
    let mut labels = Vec::with_capacity(ks.len() * copies);
    for (label, &k) in ks.iter().enumerate() {
        let base = csl_graph(n, k)?;
        for _ in 0..copies {
            let mut p: Vec<usize> = (0..n).collect();
            p.shuffle(rng);
            graphs.push(base.permute(&p).expect("valid permutation"));
            labels.push(label);
        }
    }
    Ok(LabeledDataset::from_parts(
        "csl",
        graphs,
        labels,
        None,
        json!({"task": "csl", "nodes": n, "skips": ks, "copies": copies}),
    )
    .expect("generator invariants"))
}
