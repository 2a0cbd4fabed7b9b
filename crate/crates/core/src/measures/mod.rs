//! Degree-degree dependency measures.
//!
//! All rank-based measures use the descending convention (rank 1 is the
//! largest degree). Spearman and Kendall values are unchanged when both
//! sides are reversed jointly, so signs agree with ascending conventions.

mod kendall;
mod pearson;
mod rank;
mod spearman;

use std::fmt;

pub use kendall::{concordance_counts, kendall_tau};
pub use pearson::{variance_gap, pearson, pearson_edge_form};
pub use rank::{rank_with_ties, RankVector, TiePolicy};
pub use spearman::{
    spearman_average, spearman_average_parts, spearman_ranked, spearman_uniform,
    spearman_uniform_mean, spearman_uniform_repeated, SpearmanAverageParts,
};

use crate::graph::{degrees, DegreeTable, DependencyType, DirectedGraph};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Measure {
    Pearson,
    SpearmanUniform,
    SpearmanAverage,
    Kendall,
}

impl Measure {
    pub const ALL: [Measure; 4] = [
        Measure::Pearson,
        Measure::SpearmanUniform,
        Measure::SpearmanAverage,
        Measure::Kendall,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Measure::Pearson => "pearson",
            Measure::SpearmanUniform => "spearman_uniform",
            Measure::SpearmanAverage => "spearman_average",
            Measure::Kendall => "kendall",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.name() == name)
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A computed correlation, always within `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureValue {
    pub value: f64,
    pub measure: Measure,
    pub dependency: DependencyType,
}

impl MeasureValue {
    pub(crate) fn new(value: f64, measure: Measure, dependency: DependencyType) -> Self {
        Self {
            value: value.clamp(-1.0, 1.0),
            measure,
            dependency,
        }
    }
}

/// Settings shared by batch evaluation of several measures.
#[derive(Debug, Clone, Copy)]
pub struct EvalOptions {
    pub seed: u64,
    /// Number of random tie-break instances averaged for `spearman_uniform`.
    pub rho_reps: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self { seed: 0, rho_reps: 3 }
    }
}

/// One evaluated cell of the type × measure grid.
#[derive(Debug)]
pub struct Cell {
    pub dependency: DependencyType,
    pub measure: Measure,
    pub value: Result<f64>,
}

/// Evaluates every requested (type, measure) combination in the given order.
///
/// `spearman_uniform` cells report the mean over `opts.rho_reps` tie-break
/// instances; the seed of each type is derived from `opts.seed` and the
/// type's position in [`DependencyType::ALL`].
pub fn evaluate(
    g: &DirectedGraph,
    types: &[DependencyType],
    measures: &[Measure],
    opts: EvalOptions,
) -> Vec<Cell> {
    let d = degrees(g);
    let mut cells = Vec::with_capacity(types.len() * measures.len());
    for &t in types {
        for &m in measures {
            cells.push(Cell {
                dependency: t,
                measure: m,
                value: evaluate_one(g, &d, t, m, opts),
            });
        }
    }
    cells
}

fn evaluate_one(
    g: &DirectedGraph,
    d: &DegreeTable,
    t: DependencyType,
    m: Measure,
    opts: EvalOptions,
) -> Result<f64> {
    match m {
        Measure::Pearson => pearson::pearson_with(g, d, t).map(|v| v.value),
        Measure::SpearmanAverage => spearman::spearman_average_with(g, d, t).map(|v| v.value),
        Measure::Kendall => kendall::kendall_with(g, d, t).map(|v| v.value),
        Measure::SpearmanUniform => {
            let type_index = DependencyType::ALL.iter().position(|x| *x == t).unwrap_or(0);
            let seed = crate::seeds::derive(opts.seed, type_index as u64);
            let values = spearman::spearman_uniform_repeated_with(g, d, t, opts.rho_reps.max(1), seed)?;
            Ok(values.iter().sum::<f64>() / values.len() as f64)
        }
    }
}
