//! JSON instance and solution files.
//!
//! Field order is fixed by the struct definitions below, so writing the same
//! value twice gives the same bytes. Non-finite numbers (an infeasible cost,
//! an unbounded lower bound) are written as `null`.

use std::fmt;

use acg_core::atomic::{ConstraintKind, ConstraintSpec};
use acg_core::branch::{Solution, SolveStatus, Stats};
use acg_core::graph::{ArcSpec, Graph, Path};
use acg_core::instgen::{Instance, InstanceError, InstanceMeta};
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;

/// Malformed input, with the location or field it was found at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub context: String,
    pub message: String,
}

impl ParseError {
    fn at(context: impl Into<String>, message: impl fmt::Display) -> Self {
        ParseError { context: context.into(), message: message.to_string() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.context, self.message)
    }
}

impl std::error::Error for ParseError {}

impl From<serde_json::Error> for ParseError {
    fn from(e: serde_json::Error) -> Self {
        let msg = e.to_string();
        // serde_json appends " at line L column C"; keep the location in the context instead.
        let message = match msg.rfind(" at line ") {
            Some(i) => msg[..i].to_string(),
            None => msg,
        };
        ParseError { context: format!("line {}, column {}", e.line(), e.column()), message }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    version: u32,
    nodes: usize,
    source: usize,
    target: usize,
    resource_count: usize,
    arcs: Vec<ArcRecord>,
    constraints: Vec<ConstraintRecord>,
    grouping: Vec<Vec<usize>>,
    #[serde(default)]
    meta: MetaRecord,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArcRecord {
    tail: usize,
    head: usize,
    cost: f64,
    resources: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstraintRecord {
    kind: String,
    resource: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lower: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    upper: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    node: Option<usize>,
}

#[derive(Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct MetaRecord {
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    generator: String,
    #[serde(default)]
    path_size: Option<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SolutionFile {
    status: String,
    cost: Option<f64>,
    lower_bound: Option<f64>,
    path: Vec<usize>,
    resource_totals: Vec<f64>,
    stats: StatsRecord,
}

#[derive(Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct StatsRecord {
    columns: usize,
    nodes_expanded: usize,
    atomic_calls: usize,
    cg_calls: usize,
    wall_ms: u64,
}

fn kind_name(kind: ConstraintKind) -> &'static str {
    match kind {
        ConstraintKind::Upper => "upper",
        ConstraintKind::Range => "range",
        ConstraintKind::Include => "include",
    }
}

pub fn status_name(status: SolveStatus) -> &'static str {
    match status {
        SolveStatus::Optimal => "optimal",
        SolveStatus::Infeasible => "infeasible",
        SolveStatus::TimeLimit => "time_limit",
    }
}

fn parse_status(s: &str) -> Result<SolveStatus, ParseError> {
    match s {
        "optimal" => Ok(SolveStatus::Optimal),
        "infeasible" => Ok(SolveStatus::Infeasible),
        "time_limit" => Ok(SolveStatus::TimeLimit),
        other => Err(ParseError::at("status", format!("unknown status {other:?}"))),
    }
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data always serializes");
    s.push('\n');
    s
}

fn constraint_from(i: usize, r: ConstraintRecord) -> Result<ConstraintSpec, ParseError> {
    let field = |name: &str| format!("constraints[{i}].{name}");
    let need = |v: Option<f64>, name: &str| v.ok_or_else(|| ParseError::at(field(name), "missing"));
    match r.kind.as_str() {
        "upper" => Ok(ConstraintSpec::upper(r.resource, need(r.upper, "upper")?)),
        "range" => Ok(ConstraintSpec::range(r.resource, need(r.lower, "lower")?, need(r.upper, "upper")?)),
        "include" => {
            let node = r.node.ok_or_else(|| ParseError::at(field("node"), "missing"))?;
            Ok(ConstraintSpec::include(r.resource, node))
        }
        other => Err(ParseError::at(field("kind"), format!("unknown constraint kind {other:?}"))),
    }
}

pub fn read_instance(text: &str) -> Result<Instance, ParseError> {
    let file: InstanceFile = serde_json::from_str(text)?;
    if file.version != FORMAT_VERSION {
        return Err(ParseError::at("version", format!("unsupported version {}", file.version)));
    }
    for (i, a) in file.arcs.iter().enumerate() {
        if a.resources.len() != file.resource_count {
            return Err(ParseError::at(
                format!("arcs[{i}].resources"),
                format!("expected {} values, found {}", file.resource_count, a.resources.len()),
            ));
        }
    }
    let arcs = file.arcs.into_iter().map(|a| ArcSpec::new(a.tail, a.head, a.cost, a.resources)).collect();
    let graph = Graph::build(file.nodes, arcs, file.source, file.target, file.resource_count)
        .map_err(|e| ParseError::at("arcs", e))?;
    let constraints =
        file.constraints.into_iter().enumerate().map(|(i, r)| constraint_from(i, r)).collect::<Result<_, _>>()?;
    let meta = InstanceMeta { seed: file.meta.seed, generator: file.meta.generator, path_size: file.meta.path_size };
    let inst = Instance { graph, constraints, grouping: file.grouping, meta };
    inst.validate().map_err(|e| match e {
        InstanceError::Constraint { index, source } => ParseError::at(format!("constraints[{index}]"), source),
        other => ParseError::at("grouping", other),
    })?;
    Ok(inst)
}

pub fn write_instance(inst: &Instance) -> String {
    let g = &inst.graph;
    let file = InstanceFile {
        version: FORMAT_VERSION,
        nodes: g.node_count(),
        source: g.source(),
        target: g.target(),
        resource_count: g.resource_count(),
        arcs: g
            .arcs()
            .iter()
            .map(|a| ArcRecord { tail: a.tail, head: a.head, cost: a.cost, resources: a.resources.clone() })
            .collect(),
        constraints: inst
            .constraints
            .iter()
            .map(|c| {
                let bounds = c.kind != ConstraintKind::Include;
                ConstraintRecord {
                    kind: kind_name(c.kind).into(),
                    resource: c.resource,
                    lower: c.lower.filter(|_| bounds),
                    upper: c.upper.filter(|_| bounds),
                    node: c.node,
                }
            })
            .collect(),
        grouping: inst.grouping.clone(),
        meta: MetaRecord {
            seed: inst.meta.seed,
            generator: inst.meta.generator.clone(),
            path_size: inst.meta.path_size,
        },
    };
    to_json(&file)
}

pub fn write_solution(sol: &Solution, g: &Graph) -> String {
    let resource_totals = if sol.path.is_empty() { Vec::new() } else { g.evaluate(&sol.path).resource_totals };
    let file = SolutionFile {
        status: status_name(sol.status).into(),
        cost: finite(sol.cost),
        lower_bound: finite(sol.lower_bound),
        path: sol.path.arcs.clone(),
        resource_totals,
        stats: StatsRecord {
            columns: sol.stats.columns,
            nodes_expanded: sol.stats.nodes_expanded,
            atomic_calls: sol.stats.atomic_calls,
            cg_calls: sol.stats.cg_calls,
            wall_ms: sol.stats.wall_ms,
        },
    };
    to_json(&file)
}

/// Reads a solution file. A missing cost reads as `+∞`; a missing lower
/// bound as `+∞` for infeasible solutions and `−∞` otherwise.
/// `resource_totals` is not kept since it is derived from the path.
pub fn read_solution(text: &str) -> Result<Solution, ParseError> {
    let file: SolutionFile = serde_json::from_str(text)?;
    let status = parse_status(&file.status)?;
    let no_bound = if status == SolveStatus::Infeasible { f64::INFINITY } else { f64::NEG_INFINITY };
    let s = file.stats;
    Ok(Solution {
        status,
        path: Path::new(file.path),
        cost: file.cost.unwrap_or(f64::INFINITY),
        lower_bound: file.lower_bound.unwrap_or(no_bound),
        stats: Stats {
            columns: s.columns,
            nodes_expanded: s.nodes_expanded,
            atomic_calls: s.atomic_calls,
            cg_calls: s.cg_calls,
            wall_ms: s.wall_ms,
        },
    })
}
