//! Brute-force property checkers, independent of the generators they
//! validate: BFS reachability, BFS 2-coloring, and an exhaustive triple
//! scan.

use crate::graph::Graph;
use std::collections::VecDeque;

/// True iff every node is reachable from node 0 (vacuously true for the
/// empty graph; a single node is connected).
pub fn oracle_connected(g: &Graph) -> bool {
    let n = g.node_count();
    if n <= 1 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    let mut count = 1;
    while let Some(i) = queue.pop_front() {
        for &j in g.neighbors_unchecked(i) {
            if !seen[j] {
                seen[j] = true;
                count += 1;
                queue.push_back(j);
            }
        }
    }
    count == n
}

/// True iff the graph is 2-colorable, checked by BFS per component.
pub fn oracle_bipartite(g: &Graph) -> bool {
    let n = g.node_count();
    let mut color = vec![u8::MAX; n];
    for start in 0..n {
        if color[start] != u8::MAX {
            continue;
        }
        color[start] = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for &j in g.neighbors_unchecked(i) {
                if color[j] == u8::MAX {
                    color[j] = 1 - color[i];
                    queue.push_back(j);
                } else if color[j] == color[i] {
                    return false;
                }
            }
        }
    }
    true
}

/// True iff no triple of nodes is mutually adjacent.
pub fn oracle_triangle_free(g: &Graph) -> bool {
    let n = g.node_count();
    for i in 0..n {
        for j in (i + 1)..n {
            if !g.has_edge(i, j) {
                continue;
            }
            for l in (j + 1)..n {
                if g.has_edge(j, l) && g.has_edge(i, l) {
                    return false;
                }
            }
        }
    }
    true
}
