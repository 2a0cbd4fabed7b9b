//! Directed edge multisets, degree tables and per-edge degree pairs.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

pub type NodeId = u32;

/// Largest external node id accepted by [`load_edge_list`].
pub const MAX_EXTERNAL_ID: u64 = i64::MAX as u64;

/// Directed graph stored as an immutable edge multiset over dense node ids.
///
/// Self-loops and parallel edges are kept exactly as given.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    node_count: usize,
    edges: Vec<(NodeId, NodeId)>,
}

impl DirectedGraph {
    pub fn new(node_count: usize, edges: Vec<(NodeId, NodeId)>) -> Result<Self> {
        if node_count > NodeId::MAX as usize + 1 {
            return Err(Error::InvalidParameter(format!(
                "node count {node_count} exceeds the id range"
            )));
        }
        if let Some(&(s, t)) = edges
            .iter()
            .find(|&&(s, t)| s as usize >= node_count || t as usize >= node_count)
        {
            return Err(Error::InvalidParameter(format!(
                "edge ({s}, {t}) out of range for {node_count} nodes"
            )));
        }
        Ok(Self { node_count, edges })
    }

    /// Caller guarantees every endpoint is below `node_count`.
    pub(crate) fn from_parts(node_count: usize, edges: Vec<(NodeId, NodeId)>) -> Self {
        debug_assert!(edges
            .iter()
            .all(|&(s, t)| (s as usize) < node_count && (t as usize) < node_count));
        Self { node_count, edges }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn self_loop_count(&self) -> usize {
        self.edges.iter().filter(|(s, t)| s == t).count()
    }

    /// Number of edges that repeat an earlier (source, target) pair.
    pub fn duplicate_edge_count(&self) -> usize {
        let mut seen = HashSet::with_capacity(self.edges.len());
        self.edges.iter().filter(|e| !seen.insert(**e)).count()
    }

    pub fn is_simple(&self) -> bool {
        self.self_loop_count() == 0 && self.duplicate_edge_count() == 0
    }

    /// Relabels nodes in order of first appearance in the edge sequence and
    /// drops isolated nodes. This is the form [`load_edge_list`] produces,
    /// so a canonical graph survives a write/load cycle unchanged.
    pub fn canonical(&self) -> DirectedGraph {
        let mut map: Vec<Option<NodeId>> = vec![None; self.node_count];
        let mut next: NodeId = 0;
        let mut id = |v: NodeId| -> NodeId {
            *map[v as usize].get_or_insert_with(|| {
                next += 1;
                next - 1
            })
        };
        let edges: Vec<_> = self.edges.iter().map(|&(s, t)| {
            let s = id(s);
            (s, id(t))
        }).collect();
        DirectedGraph::from_parts(next as usize, edges)
    }
}

/// A graph read from text together with the external id of every node.
#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: DirectedGraph,
    /// `external_ids[v]` is the id node `v` carried in the input.
    pub external_ids: Vec<u64>,
}

/// Reads a whitespace-separated edge list.
///
/// One `src dst` pair per line; lines starting with `#` and blank lines are
/// skipped. External ids are remapped to `0..n` in order of first
/// appearance. An input without edges yields the empty graph.
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<LoadedGraph> {
    let mut index: HashMap<u64, NodeId> = HashMap::new();
    let mut external_ids = Vec::new();
    let mut edges = Vec::new();

    for (lineno, line) in reader.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line.map_err(|e| match e.kind() {
            std::io::ErrorKind::InvalidData => Error::Parse {
                line: lineno,
                message: "invalid UTF-8".into(),
            },
            _ => Error::Io(e),
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::Parse {
                line: lineno,
                message: format!("expected two node ids, got {trimmed:?}"),
            });
        };
        let mut endpoint = |tok: &str| -> Result<NodeId> {
            let ext: u64 = tok.parse().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("invalid node id {tok:?}"),
            })?;
            if ext > MAX_EXTERNAL_ID {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("node id {ext} exceeds 2^63-1"),
                });
            }
            match index.entry(ext) {
                Entry::Occupied(o) => Ok(*o.get()),
                Entry::Vacant(v) => {
                    let id = NodeId::try_from(external_ids.len()).map_err(|_| Error::Parse {
                        line: lineno,
                        message: "too many distinct nodes".into(),
                    })?;
                    external_ids.push(ext);
                    Ok(*v.insert(id))
                }
            }
        };
        let s = endpoint(a)?;
        let t = endpoint(b)?;
        edges.push((s, t));
    }

    Ok(LoadedGraph {
        graph: DirectedGraph::from_parts(external_ids.len(), edges),
        external_ids,
    })
}

/// Writes the graph in the edge-list format, one `src dst` line per edge.
pub fn write_edge_list<W: Write>(g: &DirectedGraph, mut out: W) -> std::io::Result<()> {
    for &(s, t) in g.edges() {
        writeln!(out, "{s} {t}")?;
    }
    out.flush()
}

/// Out- or in-degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DegreeKind {
    Out,
    In,
}

impl fmt::Display for DegreeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DegreeKind::Out => "out",
            DegreeKind::In => "in",
        })
    }
}

/// Choice of degree kind at the source and at the target of an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DependencyType {
    pub source: DegreeKind,
    pub target: DegreeKind,
}

impl DependencyType {
    pub const OUT_IN: Self = Self::new(DegreeKind::Out, DegreeKind::In);
    pub const OUT_OUT: Self = Self::new(DegreeKind::Out, DegreeKind::Out);
    pub const IN_IN: Self = Self::new(DegreeKind::In, DegreeKind::In);
    pub const IN_OUT: Self = Self::new(DegreeKind::In, DegreeKind::Out);

    /// Out/In, Out/Out, In/In, In/Out.
    pub const ALL: [Self; 4] = [Self::OUT_IN, Self::OUT_OUT, Self::IN_IN, Self::IN_OUT];

    pub const fn new(source: DegreeKind, target: DegreeKind) -> Self {
        Self { source, target }
    }

    /// Wire name such as `out_in`; the first word is the source-side kind.
    pub fn name(&self) -> &'static str {
        match (self.source, self.target) {
            (DegreeKind::Out, DegreeKind::In) => "out_in",
            (DegreeKind::Out, DegreeKind::Out) => "out_out",
            (DegreeKind::In, DegreeKind::In) => "in_in",
            (DegreeKind::In, DegreeKind::Out) => "in_out",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.name() == name)
    }
}

impl fmt::Display for DependencyType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Out- and in-degree of every node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeTable {
    pub out_degree: Vec<u64>,
    pub in_degree: Vec<u64>,
}

impl DegreeTable {
    pub fn node_count(&self) -> usize {
        self.out_degree.len()
    }

    pub fn of_kind(&self, kind: DegreeKind) -> &[u64] {
        match kind {
            DegreeKind::Out => &self.out_degree,
            DegreeKind::In => &self.in_degree,
        }
    }

    /// Number of edges of the graph the table came from.
    pub fn edge_count(&self) -> u64 {
        self.out_degree.iter().sum()
    }

    /// `(out, in)` per node.
    pub fn pairs(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.out_degree.iter().copied().zip(self.in_degree.iter().copied())
    }

    /// Exact `Σ_v out(v)^p · in(v)^q` with `0^0 = 1`.
    pub fn moment_exact(&self, p: u32, q: u32) -> u128 {
        self.pairs()
            .map(|(o, i)| (o as u128).pow(p) * (i as u128).pow(q))
            .sum()
    }
}

pub fn degrees(g: &DirectedGraph) -> DegreeTable {
    let mut out_degree = vec![0u64; g.node_count()];
    let mut in_degree = vec![0u64; g.node_count()];
    for &(s, t) in g.edges() {
        out_degree[s as usize] += 1;
        in_degree[t as usize] += 1;
    }
    DegreeTable {
        out_degree,
        in_degree,
    }
}

/// `Σ_v out(v)^p · in(v)^q` with `0^0 = 1`.
///
/// Integer exponents up to 3 are summed exactly in `u128` and converted once;
/// other exponents are summed in `f64` in node order.
pub fn vertex_moment_sum(d: &DegreeTable, p: f64, q: f64) -> f64 {
    let small_int = |x: f64| x.fract() == 0.0 && (0.0..=3.0).contains(&x);
    if small_int(p) && small_int(q) {
        return d.moment_exact(p as u32, q as u32) as f64;
    }
    let pow = |base: u64, e: f64| if e == 0.0 { 1.0 } else { (base as f64).powf(e) };
    d.pairs().map(|(o, i)| pow(o, p) * pow(i, q)).sum()
}

/// Per-edge `(x, y)` observations, in edge order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairSeries {
    pub pairs: Vec<(u64, u64)>,
}

impl PairSeries {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn xs(&self) -> Vec<u64> {
        self.pairs.iter().map(|p| p.0).collect()
    }

    pub fn ys(&self) -> Vec<u64> {
        self.pairs.iter().map(|p| p.1).collect()
    }
}

impl From<Vec<(u64, u64)>> for PairSeries {
    fn from(pairs: Vec<(u64, u64)>) -> Self {
        Self { pairs }
    }
}

/// `(D^α(source), D^β(target))` for every edge, α/β taken from `t`.
pub fn edge_degree_pairs(g: &DirectedGraph, t: DependencyType) -> PairSeries {
    pairs_with_degrees(g, &degrees(g), t)
}

pub(crate) fn pairs_with_degrees(g: &DirectedGraph, d: &DegreeTable, t: DependencyType) -> PairSeries {
    let src = d.of_kind(t.source);
    let dst = d.of_kind(t.target);
    PairSeries {
        pairs: g
            .edges()
            .iter()
            .map(|&(s, e)| (src[s as usize], dst[e as usize]))
            .collect(),
    }
}
