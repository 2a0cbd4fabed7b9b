use rayon::prelude::*;

use crate::error::{Error, Result, Side};
use crate::graph::{degrees, pairs_with_degrees, DegreeTable, DependencyType, DirectedGraph};
use crate::seeds;

use super::rank::{rank_with_ties, uniform_ranks, RankVector, TiePolicy};
use super::{Measure, MeasureValue};

fn check_size(m: usize) -> Result<()> {
    match m {
        0 => Err(Error::EmptyGraph),
        1 => Err(Error::DegenerateSize { edges: 1 }),
        _ => Ok(()),
    }
}

/// `(12 Σ R_x R_y − 3m(m+1)²) / (m³ − m)` for permutation ranks, exact up
/// to the final division.
fn rho_from_ranks(rx: &RankVector, ry: &RankVector) -> f64 {
    let m = rx.len() as i128;
    // doubled ranks: 12 Σ R R = 3 Σ (2R)(2R)
    let cross: i128 = rx
        .doubled()
        .iter()
        .zip(ry.doubled())
        .map(|(&a, &b)| a as i128 * b as i128)
        .sum();
    let num = 3 * (cross - m * (m + 1) * (m + 1));
    num as f64 / (m * m * m - m) as f64
}

/// Spearman's rho with ties resolved by `source_policy` on the source-side
/// series and by `target_policy` on the target-side series.
pub fn spearman_ranked(
    g: &DirectedGraph,
    t: DependencyType,
    source_policy: TiePolicy,
    target_policy: TiePolicy,
) -> Result<MeasureValue> {
    check_size(g.edge_count())?;
    let p = pairs_with_degrees(g, &degrees(g), t);
    let rx = rank_with_ties(&p.xs(), source_policy);
    let ry = rank_with_ties(&p.ys(), target_policy);
    Ok(MeasureValue::new(rho_from_ranks(&rx, &ry), Measure::SpearmanUniform, t))
}

/// Spearman's rho with ties broken uniformly at random.
///
/// Source-side and target-side keys come from two independent ChaCha streams
/// of `seed` ([`seeds::SOURCE_STREAM`], [`seeds::TARGET_STREAM`]).
pub fn spearman_uniform(g: &DirectedGraph, t: DependencyType, seed: u64) -> Result<MeasureValue> {
    spearman_uniform_with(g, &degrees(g), t, seed)
}

fn spearman_uniform_with(
    g: &DirectedGraph,
    d: &DegreeTable,
    t: DependencyType,
    seed: u64,
) -> Result<MeasureValue> {
    check_size(g.edge_count())?;
    let p = pairs_with_degrees(g, d, t);
    let rx = uniform_ranks(&p.xs(), seed, seeds::SOURCE_STREAM);
    let ry = uniform_ranks(&p.ys(), seed, seeds::TARGET_STREAM);
    Ok(MeasureValue::new(rho_from_ranks(&rx, &ry), Measure::SpearmanUniform, t))
}

/// `spearman_uniform` for `repetitions` seeds derived from `seed`, in
/// repetition order.
pub fn spearman_uniform_repeated(
    g: &DirectedGraph,
    t: DependencyType,
    repetitions: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    spearman_uniform_repeated_with(g, &degrees(g), t, repetitions, seed)
}

pub(crate) fn spearman_uniform_repeated_with(
    g: &DirectedGraph,
    d: &DegreeTable,
    t: DependencyType,
    repetitions: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    check_size(g.edge_count())?;
    (0..repetitions as u64)
        .into_par_iter()
        .map(|i| spearman_uniform_with(g, d, t, seeds::derive(seed, i)).map(|v| v.value))
        .collect()
}

/// Mean and standard error of `spearman_uniform` over independent seeds.
pub fn spearman_uniform_mean(
    g: &DirectedGraph,
    t: DependencyType,
    repetitions: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if repetitions < 2 {
        return Err(Error::InvalidParameter("repetitions must be at least 2".into()));
    }
    let values = spearman_uniform_repeated(g, t, repetitions, seed)?;
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok((mean, (var / n).sqrt()))
}

/// Exact integer parts of the average-rank Spearman's rho:
/// `numerator = 4 Σ R̄_x R̄_y − m(m+1)²` and `σ̄² = 4 Σ R̄² − m(m+1)²` per side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpearmanAverageParts {
    pub edges: u64,
    pub numerator: i128,
    pub sigma_source_sq: i128,
    pub sigma_target_sq: i128,
}

impl SpearmanAverageParts {
    /// `3 σ̄_x σ̄_y / (m³ − m)`, the factor linking the expected random-tie
    /// rho to the average-rank rho.
    pub fn tie_factor(&self) -> f64 {
        let m = self.edges as f64;
        3.0 * (self.sigma_source_sq as f64).sqrt() * (self.sigma_target_sq as f64).sqrt() / (m * m * m - m)
    }
}

pub fn spearman_average_parts(g: &DirectedGraph, t: DependencyType) -> Result<SpearmanAverageParts> {
    parts_with(g, &degrees(g), t)
}

fn parts_with(g: &DirectedGraph, d: &DegreeTable, t: DependencyType) -> Result<SpearmanAverageParts> {
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let p = pairs_with_degrees(g, d, t);
    let rx = rank_with_ties(&p.xs(), TiePolicy::Average);
    let ry = rank_with_ties(&p.ys(), TiePolicy::Average);
    let m = p.len() as i128;
    let offset = m * (m + 1) * (m + 1);
    let dot = |a: &[u64], b: &[u64]| -> i128 { a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum() };
    Ok(SpearmanAverageParts {
        edges: p.len() as u64,
        numerator: dot(rx.doubled(), ry.doubled()) - offset,
        sigma_source_sq: dot(rx.doubled(), rx.doubled()) - offset,
        sigma_target_sq: dot(ry.doubled(), ry.doubled()) - offset,
    })
}

/// Spearman's rho with tied degrees sharing their average rank.
pub fn spearman_average(g: &DirectedGraph, t: DependencyType) -> Result<MeasureValue> {
    spearman_average_with(g, &degrees(g), t)
}

pub(crate) fn spearman_average_with(
    g: &DirectedGraph,
    d: &DegreeTable,
    t: DependencyType,
) -> Result<MeasureValue> {
    let parts = parts_with(g, d, t)?;
    if parts.sigma_source_sq == 0 {
        return Err(Error::ZeroVariance(Side::Source(t.source)));
    }
    if parts.sigma_target_sq == 0 {
        return Err(Error::ZeroVariance(Side::Target(t.target)));
    }
    let value = parts.numerator as f64
        / ((parts.sigma_source_sq as f64).sqrt() * (parts.sigma_target_sq as f64).sqrt());
    Ok(MeasureValue::new(value, Measure::SpearmanAverage, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{bridge_graph, disconnected_bridge_graph, BridgeParams};

    fn g(k: u64, m: u64) -> DirectedGraph {
        bridge_graph(BridgeParams::new(k, m).unwrap())
    }

    #[test]
    fn bridge_average_rank_rho() {
        let v = spearman_average(&g(2, 2), DependencyType::IN_OUT).unwrap().value;
        assert!((v - 1.0 / 9.0).abs() < 1e-15);
        let h = disconnected_bridge_graph(BridgeParams::new(2, 2).unwrap());
        let parts = spearman_average_parts(&h, DependencyType::IN_OUT).unwrap();
        assert_eq!((parts.numerator, parts.sigma_source_sq, parts.sigma_target_sq), (-6, 60, 60));
        let v = spearman_average(&h, DependencyType::IN_OUT).unwrap().value;
        assert!((v + 0.1).abs() < 1e-15);
    }

    #[test]
    fn bridge_tie_orderings() {
        let t = DependencyType::IN_OUT;
        let by_index = spearman_ranked(&g(2, 2), t, TiePolicy::ByIndex, TiePolicy::ByIndex).unwrap();
        assert!((by_index.value - 0.2).abs() < 1e-15);
        let reversed = spearman_ranked(&g(2, 2), t, TiePolicy::ByIndex, TiePolicy::ByReverseIndex).unwrap();
        assert!(reversed.value.abs() < 1e-15);
    }

    #[test]
    fn cycle_is_degenerate_for_average() {
        let c = DirectedGraph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(matches!(
            spearman_average(&c, DependencyType::OUT_IN),
            Err(Error::ZeroVariance(_))
        ));
    }

    #[test]
    fn size_errors() {
        let empty = DirectedGraph::new(1, vec![]).unwrap();
        let single = DirectedGraph::new(2, vec![(0, 1)]).unwrap();
        assert!(matches!(spearman_uniform(&empty, DependencyType::OUT_IN, 0), Err(Error::EmptyGraph)));
        assert!(matches!(
            spearman_uniform(&single, DependencyType::OUT_IN, 0),
            Err(Error::DegenerateSize { edges: 1 })
        ));
        assert!(matches!(spearman_average(&empty, DependencyType::OUT_IN), Err(Error::EmptyGraph)));
        assert!(spearman_uniform_mean(&g(2, 2), DependencyType::OUT_IN, 1, 0).is_err());
    }

    #[test]
    fn perfect_agreement_without_ties() {
        // out-degrees 3,2,1 at sources; in-degrees 3,2,1 at targets on the same edges
        let e = vec![(0, 3), (0, 3), (0, 3), (1, 4), (1, 4), (2, 5)];
        let c = DirectedGraph::new(6, e).unwrap();
        // ties exist, but the two sides tie on exactly the same edges
        let v = spearman_average(&c, DependencyType::OUT_IN).unwrap().value;
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn uniform_is_seed_deterministic() {
        let b = g(5, 7);
        let a = spearman_uniform(&b, DependencyType::IN_OUT, 17).unwrap();
        let c = spearman_uniform(&b, DependencyType::IN_OUT, 17).unwrap();
        assert_eq!(a, c);
        let reps = spearman_uniform_repeated(&b, DependencyType::IN_OUT, 8, 3).unwrap();
        assert_eq!(reps, spearman_uniform_repeated(&b, DependencyType::IN_OUT, 8, 3).unwrap());
    }
}
