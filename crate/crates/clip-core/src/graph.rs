//! Immutable attributed graphs and attribute-group partitioning.
//!
//! A [`Graph`] is a validated pair of a node-attribute matrix and a symmetric
//! 0/1 adjacency matrix without self-loops. Graphs are plain values: every
//! operation returns a new graph, and relabeling acts by
//! `(v, A) -> (Pv, PAP^T)` for a permutation `P` of the node indices.
//!
//! Node indices are 0-based throughout the crate; file formats that use
//! 1-based indices convert at the parsing boundary.

use thiserror::Error;

/// Default cap on the number of nodes accepted by [`Graph::new`].
pub const DEFAULT_MAX_NODES: usize = 1000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("adjacency matrix is not symmetric at ({0}, {1})")]
    AsymmetricAdjacency(usize, usize),
    #[error("self-loop at node {0}")]
    SelfLoop(usize),
    #[error("adjacency entry at ({0}, {1}) is not 0 or 1")]
    NonBinaryEntry(usize, usize),
    #[error("attribute rows ({attrs}) do not match adjacency order ({adj})")]
    DimensionMismatch { attrs: usize, adj: usize },
    #[error("graph has {n} nodes, exceeding the cap of {cap}")]
    SizeCapExceeded { n: usize, cap: usize },
    #[error("permutation is not a bijection on 0..{0}")]
    InvalidPermutation(usize),
    #[error("node index {index} out of range for {n} nodes")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("node {node} has degree {degree}, above the max degree {max_degree}")]
    DegreeOverflow { node: usize, degree: usize, max_degree: usize },
}

/// An undirected graph with real-valued node attributes.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    attr_dim: usize,
    /// Row-major `n x attr_dim` node attributes.
    attrs: Vec<f64>,
    /// Dense symmetric adjacency, `adj[i * n + j] == 1` iff `{i, j}` is an edge.
    adj: Vec<u8>,
    /// Sorted neighbor lists, derived from `adj` at construction.
    neighbors: Vec<Vec<usize>>,
}

impl Graph {
    /// Validates and builds a graph. The adjacency must be square, 0/1,
    /// symmetric, and zero on the diagonal; it is never repaired.
    pub fn new(attrs: Vec<Vec<f64>>, adj: Vec<Vec<u8>>) -> Result<Graph, GraphError> {
        Graph::with_cap(attrs, adj, DEFAULT_MAX_NODES)
    }

    /// Like [`Graph::new`] with an explicit node-count cap.
    pub fn with_cap(
        attrs: Vec<Vec<f64>>,
        adj: Vec<Vec<u8>>,
        cap: usize,
    ) -> Result<Graph, GraphError> {
        let n = adj.len();
        if n > cap {
            return Err(GraphError::SizeCapExceeded { n, cap });
        }
        if attrs.len() != n {
            return Err(GraphError::DimensionMismatch { attrs: attrs.len(), adj: n });
        }
        for (i, row) in adj.iter().enumerate() {
            if row.len() != n {
                return Err(GraphError::DimensionMismatch { attrs: attrs.len(), adj: row.len() });
            }
            for (j, &e) in row.iter().enumerate() {
                if e > 1 {
                    return Err(GraphError::NonBinaryEntry(i, j));
                }
            }
        }
        for i in 0..n {
            if adj[i][i] != 0 {
                return Err(GraphError::SelfLoop(i));
            }
            for j in (i + 1)..n {
                if adj[i][j] != adj[j][i] {
                    return Err(GraphError::AsymmetricAdjacency(i, j));
                }
            }
        }
        let attr_dim = attrs.first().map_or(0, Vec::len);
        for row in &attrs {
            if row.len() != attr_dim {
                return Err(GraphError::DimensionMismatch { attrs: row.len(), adj: n });
            }
        }
        let mut flat_attrs = Vec::with_capacity(n * attr_dim);
        for row in &attrs {
            flat_attrs.extend_from_slice(row);
        }
        let mut flat_adj = Vec::with_capacity(n * n);
        for row in &adj {
            flat_adj.extend_from_slice(row);
        }
        let neighbors = (0..n)
            .map(|i| (0..n).filter(|&j| flat_adj[i * n + j] == 1).collect())
            .collect();
        Ok(Graph { n, attr_dim, attrs: flat_attrs, adj: flat_adj, neighbors })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn attr_dim(&self) -> usize {
        self.attr_dim
    }

    /// Attribute row of node `i`.
    pub fn attr(&self, i: usize) -> &[f64] {
        &self.attrs[i * self.attr_dim..(i + 1) * self.attr_dim]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i * self.n + j] == 1
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|&e| e as usize).sum::<usize>() / 2
    }

    /// Sorted neighbor indices of node `i`.
    pub fn neighbors(&self, i: usize) -> Result<&[usize], GraphError> {
        if i >= self.n {
            return Err(GraphError::IndexOutOfRange { index: i, n: self.n });
        }
        Ok(&self.neighbors[i])
    }

    /// Neighbor list without the bounds check; `i` must be a valid node.
    pub fn neighbors_unchecked(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors[i].len()
    }

    /// Undirected edge list `{i, j}` with `i < j`, ascending.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for &j in &self.neighbors[i] {
                if i < j {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Applies the relabeling `i -> p[i]`: node `i`'s attribute row and
    /// incident edges move to index `p[i]`.
    pub fn permute(&self, p: &[usize]) -> Result<Graph, GraphError> {
        if p.len() != self.n {
            return Err(GraphError::InvalidPermutation(self.n));
        }
        let mut seen = vec![false; self.n];
        for &t in p {
            if t >= self.n || seen[t] {
                return Err(GraphError::InvalidPermutation(self.n));
            }
            seen[t] = true;
        }
        let mut attrs = vec![0.0; self.n * self.attr_dim];
        for i in 0..self.n {
            attrs[p[i] * self.attr_dim..(p[i] + 1) * self.attr_dim]
                .copy_from_slice(self.attr(i));
        }
        let mut adj = vec![0u8; self.n * self.n];
        for i in 0..self.n {
            for &j in &self.neighbors[i] {
                adj[p[i] * self.n + p[j]] = 1;
            }
        }
        let neighbors = (0..self.n)
            .map(|i| {
                let mut ns: Vec<usize> =
                    (0..self.n).filter(|&j| adj[i * self.n + j] == 1).collect();
                ns.sort_unstable();
                ns
            })
            .collect();
        Ok(Graph {
            n: self.n,
            attr_dim: self.attr_dim,
            attrs,
            adj,
            neighbors,
        })
    }

    /// Partitions nodes into groups of bitwise-identical attribute rows.
    pub fn attribute_groups(&self) -> Partition {
        // Bitwise equality on the raw f64 representation; groups ordered
        // lexicographically by the IEEE total order of their attribute row.
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by(|&a, &b| {
            let (ra, rb) = (self.attr(a), self.attr(b));
            for (x, y) in ra.iter().zip(rb) {
                match x.total_cmp(y) {
                    std::cmp::Ordering::Equal => continue,
                    o => return o,
                }
            }
            a.cmp(&b)
        });
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for &i in &order {
            let same = groups.last().is_some_and(|g: &Vec<usize>| {
                let r = self.attr(g[0]);
                r.len() == self.attr_dim
                    && r.iter()
                        .zip(self.attr(i))
                        .all(|(x, y)| x.to_bits() == y.to_bits())
            });
            if same {
                groups.last_mut().unwrap().push(i);
            } else {
                groups.push(vec![i]);
            }
        }
        for g in &mut groups {
            g.sort_unstable();
        }
        Partition { groups, n: self.n }
    }

    /// Replaces node attributes with one-hot encoded degrees of dimension
    /// `max_degree + 1`.
    pub fn degree_one_hot(&self, max_degree: usize) -> Result<Graph, GraphError> {
        let mut attrs = vec![0.0; self.n * (max_degree + 1)];
        for i in 0..self.n {
            let d = self.degree(i);
            if d > max_degree {
                return Err(GraphError::DegreeOverflow { node: i, degree: d, max_degree });
            }
            attrs[i * (max_degree + 1) + d] = 1.0;
        }
        Ok(Graph {
            n: self.n,
            attr_dim: max_degree + 1,
            attrs,
            adj: self.adj.clone(),
            neighbors: self.neighbors.clone(),
        })
    }
}

/// Node groups of identical attribute rows, ordered lexicographically by the
/// shared attribute vector; indices inside each group ascend.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    groups: Vec<Vec<usize>>,
    n: usize,
}

impl Partition {
    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn group_sizes(&self) -> Vec<usize> {
        self.groups.iter().map(Vec::len).collect()
    }

    pub fn max_group_size(&self) -> usize {
        self.groups.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Builds a partition directly from group index sets. Test helper for
    /// coloring routines; validates disjointness and coverage.
    pub fn from_groups(groups: Vec<Vec<usize>>) -> Partition {
        let n: usize = groups.iter().map(Vec::len).sum();
        let mut seen = vec![false; n];
        for g in &groups {
            assert!(!g.is_empty(), "empty group");
            for &i in g {
                assert!(i < n && !seen[i], "groups must partition 0..n");
                seen[i] = true;
            }
        }
        Partition { groups, n }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::new(
            vec![vec![1.0], vec![2.0], vec![3.0]],
            vec![vec![0, 1, 0], vec![1, 0, 1], vec![0, 1, 0]],
        )
        .unwrap()
    }

    #[test]
    fn smallest_edge() {
        let g = Graph::new(vec![vec![1.0], vec![1.0]], vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 0));
    }

    #[test]
    fn asymmetric_adjacency_rejected() {
        let err = Graph::new(vec![vec![0.0], vec![0.0]], vec![vec![0, 1], vec![0, 0]]);
        assert_eq!(err.unwrap_err(), GraphError::AsymmetricAdjacency(0, 1));
    }

    #[test]
    fn self_loop_rejected() {
        let err = Graph::new(vec![vec![0.0]], vec![vec![1]]);
        assert_eq!(err.unwrap_err(), GraphError::SelfLoop(0));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let err = Graph::new(vec![vec![0.0]], vec![vec![0, 1], vec![1, 0]]);
        assert!(matches!(err.unwrap_err(), GraphError::DimensionMismatch { .. }));
    }

    #[test]
    fn size_cap_enforced() {
        let attrs = vec![vec![0.0]; 3];
        let adj = vec![vec![0, 0, 0], vec![0, 0, 0], vec![0, 0, 0]];
        let err = Graph::with_cap(attrs, adj, 2);
        assert!(matches!(err.unwrap_err(), GraphError::SizeCapExceeded { n: 3, cap: 2 }));
    }

    #[test]
    fn identity_permutation_is_noop() {
        let g = path3();
        let h = g.permute(&[0, 1, 2]).unwrap();
        assert_eq!(g, h);
    }

    #[test]
    fn path_reversal() {
        let g = path3();
        let h = g.permute(&[2, 1, 0]).unwrap();
        assert_eq!(h.attr(0), &[3.0]);
        assert_eq!(h.attr(2), &[1.0]);
        assert!(h.has_edge(0, 1) && h.has_edge(1, 2) && !h.has_edge(0, 2));
    }

    #[test]
    fn permutation_roundtrip() {
        let g = path3();
        let p = [1, 2, 0];
        let mut inv = [0usize; 3];
        for (i, &t) in p.iter().enumerate() {
            inv[t] = i;
        }
        assert_eq!(g.permute(&p).unwrap().permute(&inv).unwrap(), g);
    }

    #[test]
    fn non_bijective_permutation_rejected() {
        let g = path3();
        assert_eq!(g.permute(&[0, 0, 1]).unwrap_err(), GraphError::InvalidPermutation(3));
        assert_eq!(g.permute(&[0, 1]).unwrap_err(), GraphError::InvalidPermutation(3));
    }

    #[test]
    fn attribute_groups_by_identical_rows() {
        let g = Graph::new(
            vec![vec![1.0], vec![2.0], vec![1.0]],
            vec![vec![0, 0, 0], vec![0, 0, 0], vec![0, 0, 0]],
        )
        .unwrap();
        let p = g.attribute_groups();
        assert_eq!(p.groups(), &[vec![0, 2], vec![1]]);
    }

    #[test]
    fn single_group_when_all_identical() {
        let g = Graph::new(vec![vec![7.0]; 5], vec![vec![0; 5]; 5]).unwrap();
        let p = g.attribute_groups();
        assert_eq!(p.group_sizes(), vec![5]);
        assert_eq!(p.groups()[0], vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn singletons_when_all_distinct() {
        let g = path3();
        assert_eq!(g.attribute_groups().group_sizes(), vec![1, 1, 1]);
    }

    #[test]
    fn degree_one_hot_triangle() {
        let g = Graph::new(
            vec![vec![]; 3],
            vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]],
        )
        .unwrap();
        let h = g.degree_one_hot(2).unwrap();
        for i in 0..3 {
            assert_eq!(h.attr(i), &[0.0, 0.0, 1.0]);
        }
    }

    #[test]
    fn degree_one_hot_star() {
        // K_{1,3}: center node 0.
        let g = Graph::new(
            vec![vec![]; 4],
            vec![
                vec![0, 1, 1, 1],
                vec![1, 0, 0, 0],
                vec![1, 0, 0, 0],
                vec![1, 0, 0, 0],
            ],
        )
        .unwrap();
        let h = g.degree_one_hot(3).unwrap();
        assert_eq!(h.attr(0), &[0.0, 0.0, 0.0, 1.0]);
        for i in 1..4 {
            assert_eq!(h.attr(i), &[0.0, 1.0, 0.0, 0.0]);
        }
    }

    #[test]
    fn degree_overflow() {
        let g = Graph::new(vec![vec![]; 2], vec![vec![0, 1], vec![1, 0]]).unwrap();
        let err = g.degree_one_hot(0).unwrap_err();
        assert!(matches!(err, GraphError::DegreeOverflow { degree: 1, max_degree: 0, .. }));
    }

    #[test]
    fn neighbors_of_cycle_and_isolated() {
        let c4 = Graph::new(
            vec![vec![]; 4],
            vec![
                vec![0, 1, 0, 1],
                vec![1, 0, 1, 0],
                vec![0, 1, 0, 1],
                vec![1, 0, 1, 0],
            ],
        )
        .unwrap();
        assert_eq!(c4.neighbors(0).unwrap(), &[1, 3]);
        let isolated = Graph::new(vec![vec![]], vec![vec![0]]).unwrap();
        assert!(isolated.neighbors(0).unwrap().is_empty());
        assert!(matches!(
            isolated.neighbors(1),
            Err(GraphError::IndexOutOfRange { index: 1, n: 1 })
        ));
    }

    #[test]
    fn group_action_composition() {
        let g = path3();
        let p = [2, 0, 1];
        let q = [1, 2, 0];
        // i -> q[p[i]]
        let qp: Vec<usize> = (0..3).map(|i| q[p[i]]).collect();
        assert_eq!(
            g.permute(&p).unwrap().permute(&q).unwrap(),
            g.permute(&qp).unwrap()
        );
    }

    #[test]
    fn groups_invariant_under_permutation() {
        let g = Graph::new(
            vec![vec![1.0], vec![2.0], vec![1.0], vec![2.0]],
            vec![vec![0; 4]; 4],
        )
        .unwrap();
        let mut sizes_a = g.attribute_groups().group_sizes();
        let mut sizes_b = g.permute(&[3, 1, 0, 2]).unwrap().attribute_groups().group_sizes();
        sizes_a.sort_unstable();
        sizes_b.sort_unstable();
        assert_eq!(sizes_a, sizes_b);
    }

    #[test]
    fn negative_zero_is_a_distinct_group() {
        // Bitwise row equality distinguishes -0.0 from 0.0.
        let g = Graph::new(vec![vec![0.0], vec![-0.0]], vec![vec![0, 0], vec![0, 0]]).unwrap();
        assert_eq!(g.attribute_groups().group_sizes(), vec![1, 1]);
    }
}
