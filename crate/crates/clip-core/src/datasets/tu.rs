//! The TU line-oriented dataset layout.
//!
//! A dataset `NAME` in directory `root` consists of:
//!
//! * `NAME_A.txt` — comma-separated 1-based edge pairs; either direction or
//!   both may be listed, the parsed adjacency is always symmetric,
//! * `NAME_graph_indicator.txt` — one 1-based graph id per node line,
//! * `NAME_graph_labels.txt` — one integer class per graph line (remapped to
//!   contiguous 0-based classes on parse),
//! * `NAME_node_labels.txt` — optional; one integer label per node line,
//!   one-hot encoded into node attributes. Absent node labels fall back to
//!   one-hot encoded node degrees.
//!
//! The serializer additionally writes `NAME_meta.json` with the dataset
//! metadata so that generated datasets round-trip bit-exactly.

use super::{DataError, DatasetMeta, LabeledDataset};
use crate::graph::Graph;
use std::fs;
use std::path::Path;

fn read_lines(path: &Path) -> Result<Vec<(usize, String)>, DataError> {
    let raw = fs::read_to_string(path)
        .map_err(|_| DataError::MissingFile(path.display().to_string()))?;
    Ok(raw
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim().to_string()))
        .filter(|(_, l)| !l.is_empty())
        .collect())
}

fn parse_int(file: &str, line: usize, token: &str) -> Result<i64, DataError> {
    token
        .trim()
        .parse::<i64>()
        .map_err(|_| DataError::MalformedLine { file: file.to_string(), line })
}

/// Parses a TU-layout dataset from `root`.
pub fn parse_tu_dataset(root: &Path, name: &str) -> Result<LabeledDataset, DataError> {
    let file = |suffix: &str| root.join(format!("{name}_{suffix}.txt"));

    // Node -> graph assignment (1-based ids in the file).
    let indicator_name = format!("{name}_graph_indicator.txt");
    let mut node_graph = Vec::new();
    for (line, text) in read_lines(&file("graph_indicator"))? {
        let id = parse_int(&indicator_name, line, &text)?;
        if id < 1 {
            return Err(DataError::MalformedLine { file: indicator_name, line });
        }
        node_graph.push((id - 1) as usize);
    }
    let num_graphs = node_graph.iter().max().map_or(0, |&g| g + 1);
    {
        let mut seen = vec![false; num_graphs];
        for &g in &node_graph {
            seen[g] = true;
        }
        if seen.iter().any(|&s| !s) {
            return Err(DataError::NonContiguousGraphIds);
        }
    }

    // Local node index within each graph, in file order.
    let mut local_index = Vec::with_capacity(node_graph.len());
    let mut graph_sizes = vec![0usize; num_graphs];
    for &g in &node_graph {
        local_index.push(graph_sizes[g]);
        graph_sizes[g] += 1;
    }

    // Edges.
    let a_name = format!("{name}_A.txt");
    let mut adjs: Vec<Vec<Vec<u8>>> =
        graph_sizes.iter().map(|&s| vec![vec![0u8; s]; s]).collect();
    let a_path = file("A");
    if !a_path.exists() {
        return Err(DataError::MissingFile(a_path.display().to_string()));
    }
    for (line, text) in read_lines(&a_path)? {
        let mut parts = text.split(',');
        let (u, v) = match (parts.next(), parts.next(), parts.next()) {
            (Some(a), Some(b), None) => {
                (parse_int(&a_name, line, a)?, parse_int(&a_name, line, b)?)
            }
            _ => return Err(DataError::MalformedLine { file: a_name, line }),
        };
        if u < 1 || v < 1 || u as usize > node_graph.len() || v as usize > node_graph.len() {
            return Err(DataError::MalformedLine { file: a_name, line });
        }
        let (u, v) = ((u - 1) as usize, (v - 1) as usize);
        if node_graph[u] != node_graph[v] {
            return Err(DataError::DanglingEdge {
                u: u + 1,
                v: v + 1,
                gu: node_graph[u] + 1,
                gv: node_graph[v] + 1,
            });
        }
        let g = node_graph[u];
        let (lu, lv) = (local_index[u], local_index[v]);
        if lu == lv {
            // A self-loop cannot become a valid simple graph.
            return Err(DataError::MalformedLine { file: a_name, line });
        }
        adjs[g][lu][lv] = 1;
        adjs[g][lv][lu] = 1;
    }

    // Graph labels, remapped to contiguous 0-based classes.
    let labels_name = format!("{name}_graph_labels.txt");
    let mut raw_labels = Vec::new();
    for (line, text) in read_lines(&file("graph_labels"))? {
        raw_labels.push(parse_int(&labels_name, line, &text)?);
    }
    if raw_labels.len() != num_graphs {
        return Err(DataError::MalformedLine {
            file: labels_name,
            line: raw_labels.len().max(1),
        });
    }
    let mut distinct: Vec<i64> = raw_labels.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let labels: Vec<usize> = raw_labels
        .iter()
        .map(|l| distinct.binary_search(l).expect("label present") )
        .collect();

    // Node labels, optional.
    let node_labels_path = file("node_labels");
    let node_labels: Option<Vec<usize>> = if node_labels_path.exists() {
        let nl_name = format!("{name}_node_labels.txt");
        let mut out = Vec::new();
        for (line, text) in read_lines(&node_labels_path)? {
            let v = parse_int(&nl_name, line, &text)?;
            if v < 0 {
                return Err(DataError::MalformedLine { file: nl_name, line });
            }
            out.push(v as usize);
        }
        if out.len() != node_graph.len() {
            return Err(DataError::MalformedLine { file: nl_name, line: out.len().max(1) });
        }
        Some(out)
    } else {
        None
    };

    // Assemble graphs: one-hot node labels, or one-hot degrees as fallback.
    let mut graphs = Vec::with_capacity(num_graphs);
    match node_labels {
        Some(nl) => {
            let dim = nl.iter().max().map_or(1, |&m| m + 1);
            let mut per_graph: Vec<Vec<usize>> = vec![Vec::new(); num_graphs];
            for (node, &label) in nl.iter().enumerate() {
                per_graph[node_graph[node]].push(label);
            }
            for (g, adj) in adjs.into_iter().enumerate() {
                let attrs = per_graph[g]
                    .iter()
                    .map(|&l| {
                        let mut row = vec![0.0; dim];
                        row[l] = 1.0;
                        row
                    })
                    .collect();
                graphs.push(Graph::new(attrs, adj)?);
            }
        }
        None => {
            let bare: Vec<Graph> = adjs
                .into_iter()
                .map(|adj| {
                    let n = adj.len();
                    Graph::new(vec![vec![]; n], adj)
                })
                .collect::<Result<_, _>>()?;
            let max_degree = bare
                .iter()
                .flat_map(|g| (0..g.node_count()).map(|i| g.degree(i)))
                .max()
                .unwrap_or(0);
            for g in bare {
                graphs.push(g.degree_one_hot(max_degree)?);
            }
        }
    }

    let mut dataset = LabeledDataset::from_parts(
        name,
        graphs,
        labels,
        None,
        serde_json::Value::Null,
    )?;
    // A generated dataset ships its metadata; prefer it so that
    // parse(write(d)) == d including seed and generator parameters.
    let meta_path = root.join(format!("{name}_meta.json"));
    if meta_path.exists() {
        let meta: DatasetMeta = serde_json::from_str(&fs::read_to_string(&meta_path)?)?;
        if meta.num_classes == dataset.meta.num_classes
            && meta.color_dim == dataset.meta.color_dim
            && meta.max_degree == dataset.meta.max_degree
        {
            dataset.meta = meta;
        }
    }
    Ok(dataset)
}

/// Writes `dataset` in the TU layout (both edge directions listed) plus a
/// `NAME_meta.json`. Node attributes must be one-hot rows; their argmax is
/// written as the node label.
pub fn write_tu_dataset(dataset: &LabeledDataset, root: &Path) -> Result<(), DataError> {
    fs::create_dir_all(root)?;
    let name = &dataset.meta.name;
    let mut a = String::new();
    let mut indicator = String::new();
    let mut node_labels = String::new();
    let mut offset = 0usize;
    for (gi, g) in dataset.graphs.iter().enumerate() {
        for i in 0..g.node_count() {
            indicator.push_str(&format!("{}\n", gi + 1));
            node_labels.push_str(&format!("{}\n", one_hot_label(g.attr(i))?));
            for &j in g.neighbors_unchecked(i) {
                a.push_str(&format!("{}, {}\n", offset + i + 1, offset + j + 1));
            }
        }
        offset += g.node_count();
    }
    let labels: String = dataset.labels.iter().map(|l| format!("{l}\n")).collect();
    fs::write(root.join(format!("{name}_A.txt")), a)?;
    fs::write(root.join(format!("{name}_graph_indicator.txt")), indicator)?;
    fs::write(root.join(format!("{name}_graph_labels.txt")), labels)?;
    fs::write(root.join(format!("{name}_node_labels.txt")), node_labels)?;
    fs::write(
        root.join(format!("{name}_meta.json")),
        serde_json::to_string_pretty(&dataset.meta)?,
    )?;
    Ok(())
}

fn one_hot_label(row: &[f64]) -> Result<usize, DataError> {
    let mut label = None;
    for (i, &v) in row.iter().enumerate() {
        if v == 1.0 && label.is_none() {
            label = Some(i);
        } else if v != 0.0 {
            return Err(DataError::NonOneHotAttributes);
        }
    }
    label.ok_or(DataError::NonOneHotAttributes)
}
