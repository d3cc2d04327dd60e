//! Plain node/edge topology files.
//!
//! ```text
//! # comment
//! NODES
//! Paris
//! Lyon
//! EDGES
//! Paris Lyon 12
//! ```
//!
//! Edges are undirected and become two arcs. The third column of an edge,
//! if present, is its cost; missing costs and every resource value are
//! drawn from the generator range. Without a `NODES` section, nodes are
//! created in order of first appearance. SNDlib native sections
//! (`NODES (` / `LINKS (` with `id ( a b ) ...` link lines) are accepted too;
//! their numeric link columns are capacities and are ignored.

use std::collections::HashMap;

use acg_core::graph::{ArcSpec, Graph};
use acg_core::instgen::{rng, uniform_int, VALUE_MAX, VALUE_MIN};

use crate::format::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    pub names: Vec<String>,
    /// Undirected edges with an optional cost.
    pub edges: Vec<(usize, usize, Option<u32>)>,
}

#[derive(PartialEq)]
enum Section {
    None,
    Nodes,
    Edges,
}

fn err(line: usize, message: impl std::fmt::Display) -> ParseError {
    ParseError { context: format!("line {line}"), message: message.to_string() }
}

pub fn parse_topology(text: &str) -> Result<Topology, ParseError> {
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut declared = false;
    let mut edges = Vec::new();
    let mut section = Section::None;
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() || line == ")" {
            continue;
        }
        let mut head = line.split_whitespace();
        let first = head.next().unwrap_or("");
        match first.to_ascii_uppercase().as_str() {
            "NODES" => {
                section = Section::Nodes;
                declared = true;
                continue;
            }
            "EDGES" | "LINKS" => {
                section = Section::Edges;
                continue;
            }
            _ => {}
        }
        match section {
            Section::None => return Err(err(line_no, "expected a NODES or EDGES header")),
            Section::Nodes => {
                if index.contains_key(first) {
                    return Err(err(line_no, format!("duplicate node {first:?}")));
                }
                index.insert(first.to_string(), names.len());
                names.push(first.to_string());
            }
            Section::Edges => {
                let sndlib = line.contains('(');
                let tokens: Vec<&str> = line.split_whitespace().filter(|t| *t != "(" && *t != ")").collect();
                let (ends, cost_token) = if sndlib {
                    (tokens.get(1..3), None)
                } else {
                    (tokens.get(0..2), tokens.get(2).copied())
                };
                let ends = ends.ok_or_else(|| err(line_no, "edge needs two endpoints"))?;
                let mut ids = [0usize; 2];
                for (k, name) in ends.iter().enumerate() {
                    ids[k] = match index.get(*name) {
                        Some(&i) => i,
                        None if !declared => {
                            index.insert(name.to_string(), names.len());
                            names.push(name.to_string());
                            names.len() - 1
                        }
                        None => return Err(err(line_no, format!("unknown node {name:?}"))),
                    };
                }
                if ids[0] == ids[1] {
                    return Err(err(line_no, "self-loop"));
                }
                let cost = match cost_token {
                    Some(t) => Some(t.parse::<u32>().map_err(|_| err(line_no, format!("bad cost {t:?}")))?),
                    None => None,
                };
                edges.push((ids[0], ids[1], cost));
            }
        }
    }
    if names.len() < 2 {
        return Err(err(text.lines().count(), "topology needs at least two nodes"));
    }
    Ok(Topology { names, edges })
}

impl Topology {
    /// Bidirected graph with `resource_count` drawn resources per arc and
    /// terminals 0 and n−1 (the instance generator moves them).
    pub fn to_graph(&self, resource_count: usize, seed: u64) -> Graph {
        let mut r = rng(seed);
        let mut arcs = Vec::with_capacity(2 * self.edges.len());
        for &(u, v, cost) in &self.edges {
            for (tail, head) in [(u, v), (v, u)] {
                let c = match cost {
                    Some(c) => c,
                    None => uniform_int(&mut r, VALUE_MIN, VALUE_MAX),
                };
                let res = (0..resource_count).map(|_| uniform_int(&mut r, VALUE_MIN, VALUE_MAX) as f64).collect();
                arcs.push(ArcSpec::new(tail, head, c as f64, res));
            }
        }
        let n = self.names.len();
        Graph::build(n, arcs, 0, n - 1, resource_count).expect("endpoints are in range and distinct")
    }
}
