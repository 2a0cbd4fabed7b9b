//! Synthetic graph families: in/out bridge graphs, their disconnected
//! variant, random bridge collections, and i.i.d. power-law degree pairs.

use rand_distr::{Distribution, Pareto};

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, NodeId};
use crate::seeds;

/// Sizes of a bridge graph: `k` sources feed hub `v`, hub `w` feeds `m` sinks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BridgeParams {
    k: u64,
    m: u64,
}

impl BridgeParams {
    pub fn new(k: u64, m: u64) -> Result<Self> {
        if k == 0 || m == 0 {
            return Err(Error::InvalidParameter(format!(
                "bridge sizes must be positive, got k={k}, m={m}"
            )));
        }
        Ok(Self { k, m })
    }

    /// The `(n, a)` family member `G(n, a·n)`.
    pub fn family(n: u64, a: u64) -> Result<Self> {
        Self::new(n, a.checked_mul(n).ok_or_else(|| Error::InvalidParameter("a·n overflows".into()))?)
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    fn node_count(&self, disconnected: bool) -> u64 {
        self.k + self.m + 2 + disconnected as u64
    }
}

/// Appends one bridge graph whose node ids start at `base`.
///
/// Local ids: `v = 0`, `w = 1`, sources `2..k+2`, sinks `k+2..k+m+2`, and
/// for the disconnected variant the middle node `u = k+m+2`. Edge order is
/// `e_1..e_k` (source → v), `f_1..f_m` (w → sink), then `g = (v, w)` or
/// `g_1 = (v, u), g_2 = (u, w)`.
fn push_bridge(edges: &mut Vec<(NodeId, NodeId)>, base: u64, p: BridgeParams, disconnected: bool) {
    let id = |local: u64| (base + local) as NodeId;
    let (v, w) = (id(0), id(1));
    edges.extend((0..p.k).map(|i| (id(2 + i), v)));
    edges.extend((0..p.m).map(|j| (w, id(2 + p.k + j))));
    if disconnected {
        let u = id(p.k + p.m + 2);
        edges.push((v, u));
        edges.push((u, w));
    } else {
        edges.push((v, w));
    }
}

fn check_ids(nodes: u64) {
    assert!(
        nodes <= NodeId::MAX as u64 + 1,
        "graph with {nodes} nodes exceeds the node id range"
    );
}

/// The bridge graph `G(k, m)`: `k + m + 2` nodes and `k + m + 1` edges.
pub fn bridge_graph(p: BridgeParams) -> DirectedGraph {
    let nodes = p.node_count(false);
    check_ids(nodes);
    let mut edges = Vec::with_capacity((p.k + p.m + 1) as usize);
    push_bridge(&mut edges, 0, p, false);
    DirectedGraph::from_parts(nodes as usize, edges)
}

/// `G(k, m)` with the bridge edge split through an extra node `u`.
pub fn disconnected_bridge_graph(p: BridgeParams) -> DirectedGraph {
    let nodes = p.node_count(true);
    check_ids(nodes);
    let mut edges = Vec::with_capacity((p.k + p.m + 2) as usize);
    push_bridge(&mut edges, 0, p, true);
    DirectedGraph::from_parts(nodes as usize, edges)
}

/// Pareto tail `P(X > t) = (x_min / t)^gamma` for `t ≥ x_min`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawSpec {
    pub gamma: f64,
    pub x_min: u64,
}

impl PowerLawSpec {
    pub fn new(gamma: f64, x_min: u64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidParameter(format!("gamma must be positive, got {gamma}")));
        }
        if x_min == 0 {
            return Err(Error::InvalidParameter("x_min must be at least 1".into()));
        }
        Ok(Self { gamma, x_min })
    }

    fn distribution(&self) -> Pareto<f64> {
        Pareto::new(self.x_min as f64, self.gamma).expect("validated Pareto parameters")
    }
}

/// `count` i.i.d. draws of `floor(x_min · U^{-1/gamma})`.
///
/// The floor keeps the tail index: `P(floor(X) > t) ~ (x_min / t)^gamma`.
/// Values beyond `u64::MAX` saturate.
pub fn sample_integer_power_law(spec: PowerLawSpec, seed: u64, count: usize) -> Vec<u64> {
    let dist = spec.distribution();
    let mut rng = seeds::rng(seed, 0);
    (0..count).map(|_| dist.sample(&mut rng).floor() as u64).collect()
}

/// `n` independent `(out, in)` pairs; the two coordinates use separate
/// sub-seeds. The sums of the two coordinates generally differ.
pub fn iid_degree_sequence(
    n: usize,
    spec_out: PowerLawSpec,
    spec_in: PowerLawSpec,
    seed: u64,
) -> Vec<(u64, u64)> {
    let outs = sample_integer_power_law(spec_out, seeds::derive(seed, 0), n);
    let ins = sample_integer_power_law(spec_in, seeds::derive(seed, 1), n);
    outs.into_iter().zip(ins).collect()
}

/// Disjoint union of bridge graphs `G(X_i + Y_i, floor(X_i + a·Y_i))`.
#[derive(Debug, Clone)]
pub struct BridgeCollection {
    pub graph: DirectedGraph,
    /// Component sizes in node-id order; component `i` occupies a contiguous
    /// block of `k + m + 2` ids.
    pub components: Vec<BridgeParams>,
    /// Set when `gamma` lies outside `(1, 2)`.
    pub warning: Option<String>,
}

pub fn random_bridge_collection(n: usize, a: f64, spec: PowerLawSpec, seed: u64) -> Result<BridgeCollection> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidParameter(format!("a must be positive, got {a}")));
    }
    let warning = (!(spec.gamma > 1.0 && spec.gamma < 2.0)).then(|| {
        format!("gamma = {} is outside the heavy-tail regime (1, 2)", spec.gamma)
    });
    let xs = sample_integer_power_law(spec, seeds::derive(seed, 0), n);
    let ys = sample_integer_power_law(spec, seeds::derive(seed, 1), n);
    let components: Vec<BridgeParams> = xs
        .iter()
        .zip(&ys)
        .map(|(&x, &y)| {
            let k = x.saturating_add(y);
            let m = (x as f64 + a * y as f64).floor() as u64;
            BridgeParams::new(k, m)
        })
        .collect::<Result<_>>()?;

    let nodes: u64 = components.iter().map(|p| p.node_count(false)).sum();
    if nodes > NodeId::MAX as u64 + 1 {
        return Err(Error::InvalidParameter(format!("collection needs {nodes} nodes")));
    }
    let edge_total: u64 = components.iter().map(|p| p.k + p.m + 1).sum();
    let mut edges = Vec::with_capacity(edge_total as usize);
    let mut base = 0;
    for &p in &components {
        push_bridge(&mut edges, base, p, false);
        base += p.node_count(false);
    }
    Ok(BridgeCollection {
        graph: DirectedGraph::from_parts(nodes as usize, edges),
        components,
        warning,
    })
}
