//! Erased directed configuration model and randomized baselines.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::generators::{iid_degree_sequence, PowerLawSpec};
use crate::graph::{degrees, DependencyType, DirectedGraph, NodeId};
use crate::measures::{evaluate, EvalOptions, Measure};
use crate::seeds;

/// What erasure removed from a stub matching.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RewireReport {
    pub self_loops_removed: u64,
    pub multi_edges_collapsed: u64,
    pub edges_before: u64,
    pub edges_after: u64,
}

/// Matches out-stubs to in-stubs uniformly at random, then removes
/// self-loops and collapses parallel edges.
///
/// Out-stubs are listed in node order and zipped against a uniformly
/// shuffled in-stub list, which is distributed as sequential uniform
/// selection. The result is simple and no node exceeds its prescribed
/// degrees.
pub fn erased_configuration_model(
    degree_pairs: &[(u64, u64)],
    seed: u64,
) -> Result<(DirectedGraph, RewireReport)> {
    let out_total: u64 = degree_pairs.iter().map(|p| p.0).sum();
    let in_total: u64 = degree_pairs.iter().map(|p| p.1).sum();
    if out_total != in_total {
        return Err(Error::UnbalancedStubs { out_total, in_total });
    }
    if degree_pairs.len() > NodeId::MAX as usize + 1 {
        return Err(Error::InvalidParameter("too many nodes".into()));
    }

    let stubs = |pick: fn(&(u64, u64)) -> u64| -> Vec<NodeId> {
        let mut v = Vec::with_capacity(out_total as usize);
        for (node, p) in degree_pairs.iter().enumerate() {
            v.extend(std::iter::repeat_n(node as NodeId, pick(p) as usize));
        }
        v
    };
    let out_stubs = stubs(|p| p.0);
    let mut in_stubs = stubs(|p| p.1);
    in_stubs.shuffle(&mut seeds::rng(seed, 0));

    let mut report = RewireReport {
        edges_before: out_total,
        ..Default::default()
    };
    let mut seen = HashSet::with_capacity(out_stubs.len());
    let mut edges = Vec::with_capacity(out_stubs.len());
    for (s, t) in out_stubs.into_iter().zip(in_stubs) {
        if s == t {
            report.self_loops_removed += 1;
        } else if !seen.insert((s, t)) {
            report.multi_edges_collapsed += 1;
        } else {
            edges.push((s, t));
        }
    }
    report.edges_after = edges.len() as u64;
    Ok((DirectedGraph::from_parts(degree_pairs.len(), edges), report))
}

/// Draws i.i.d. `(out, in)` sequences of a fixed length.
#[derive(Debug, Clone, Copy)]
pub struct IidSampler {
    pub n: usize,
    pub spec_out: PowerLawSpec,
    pub spec_in: PowerLawSpec,
}

impl IidSampler {
    pub fn sample(&self, seed: u64) -> Vec<(u64, u64)> {
        iid_degree_sequence(self.n, self.spec_out, self.spec_in, seed)
    }
}

#[derive(Debug, Clone)]
pub struct Balanced {
    pub pairs: Vec<(u64, u64)>,
    /// Number of full resamples needed; 0 when the input was balanced.
    pub resamples: u64,
}

fn is_balanced(pairs: &[(u64, u64)]) -> bool {
    let (o, i) = pairs
        .iter()
        .fold((0u128, 0u128), |(o, i), p| (o + p.0 as u128, i + p.1 as u128));
    o == i
}

/// Returns `pairs` if its out and in totals agree, otherwise resamples the
/// whole sequence from `sampler` (attempt `i` uses sub-seed `i` of `seed`)
/// until they do.
pub fn balance_iid_sequence(
    pairs: Vec<(u64, u64)>,
    sampler: &IidSampler,
    seed: u64,
    max_attempts: u64,
) -> Result<Balanced> {
    if max_attempts == 0 {
        return Err(Error::InvalidParameter("max_attempts must be at least 1".into()));
    }
    if is_balanced(&pairs) {
        return Ok(Balanced { pairs, resamples: 0 });
    }
    for attempt in 0..max_attempts {
        let candidate = sampler.sample(seeds::derive(seed, attempt));
        if is_balanced(&candidate) {
            return Ok(Balanced {
                pairs: candidate,
                resamples: attempt + 1,
            });
        }
    }
    Err(Error::BalanceFailed { attempts: max_attempts })
}

/// A simple graph from i.i.d. power-law degrees: sample, balance, match, erase.
#[derive(Debug, Clone)]
pub struct IidConfigurationGraph {
    pub graph: DirectedGraph,
    pub report: RewireReport,
    pub resamples: u64,
}

pub fn iid_configuration_graph(
    sampler: &IidSampler,
    seed: u64,
    max_attempts: u64,
) -> Result<IidConfigurationGraph> {
    let initial = sampler.sample(seeds::derive(seed, 0));
    let balanced = balance_iid_sequence(initial, sampler, seeds::derive(seed, 1), max_attempts)?;
    let (graph, report) = erased_configuration_model(&balanced.pairs, seeds::derive(seed, 2))?;
    Ok(IidConfigurationGraph {
        graph,
        report,
        resamples: balanced.resamples,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct RandomizationOptions {
    pub repetitions: usize,
    pub seed: u64,
    /// Tie-break instances averaged per `spearman_uniform` evaluation.
    pub rho_reps: usize,
}

impl Default for RandomizationOptions {
    fn default() -> Self {
        Self {
            repetitions: 20,
            seed: 0,
            rho_reps: 3,
        }
    }
}

/// Mean and sample standard deviation of one (type, measure) cell across
/// rewirings. Undefined evaluations are excluded and counted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselineCell {
    pub dependency: DependencyType,
    pub measure: Measure,
    /// `None` when fewer than two repetitions were defined.
    pub mean: Option<f64>,
    pub sigma: Option<f64>,
    /// Repetitions that produced a value.
    pub repetitions: usize,
    pub undefined: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomizationSummary {
    /// Types in [`DependencyType::ALL`] order, measures in [`Measure::ALL`] order.
    pub cells: Vec<BaselineCell>,
    pub repetitions: usize,
}

impl RandomizationSummary {
    pub fn cell(&self, t: DependencyType, m: Measure) -> Option<&BaselineCell> {
        self.cells.iter().find(|c| c.dependency == t && c.measure == m)
    }
}

/// Rewires `g` with the erased configuration model on its own degree
/// sequence `repetitions` times and summarizes all 16 type × measure cells.
pub fn randomization_study(g: &DirectedGraph, opts: RandomizationOptions) -> Result<RandomizationSummary> {
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    if opts.repetitions < 2 {
        return Err(Error::InvalidParameter("repetitions must be at least 2".into()));
    }
    let d = degrees(g);
    let pairs: Vec<(u64, u64)> = d.pairs().collect();

    let runs: Vec<Vec<Result<f64>>> = (0..opts.repetitions as u64)
        .into_par_iter()
        .map(|i| -> Result<Vec<Result<f64>>> {
            let rep_seed = seeds::derive(opts.seed, i);
            let (h, _) = erased_configuration_model(&pairs, seeds::derive(rep_seed, 0))?;
            assert!(h.is_simple(), "erased configuration model produced a non-simple graph");
            let eval = EvalOptions {
                seed: seeds::derive(rep_seed, 1),
                rho_reps: opts.rho_reps,
            };
            Ok(evaluate(&h, &DependencyType::ALL, &Measure::ALL, eval)
                .into_iter()
                .map(|c| c.value)
                .collect())
        })
        .collect::<Result<_>>()?;

    let mut cells = Vec::with_capacity(16);
    let mut idx = 0;
    for t in DependencyType::ALL {
        for m in Measure::ALL {
            let values: Vec<f64> = runs
                .iter()
                .filter_map(|run| run[idx].as_ref().ok().copied())
                .collect();
            let defined = values.len();
            let (mean, sigma) = if defined >= 2 {
                let mean = values.iter().sum::<f64>() / defined as f64;
                let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (defined - 1) as f64;
                (Some(mean), Some(var.sqrt()))
            } else {
                (None, None)
            };
            cells.push(BaselineCell {
                dependency: t,
                measure: m,
                mean,
                sigma,
                repetitions: defined,
                undefined: opts.repetitions - defined,
            });
            idx += 1;
        }
    }
    Ok(RandomizationSummary {
        cells,
        repetitions: opts.repetitions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forced_matching() {
        let (g, r) = erased_configuration_model(&[(1, 0), (0, 1)], 3).unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);
        assert_eq!(r, RewireReport { edges_before: 1, edges_after: 1, ..Default::default() });
    }

    #[test]
    fn lone_self_loop_is_erased() {
        let (g, r) = erased_configuration_model(&[(1, 1)], 0).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.node_count(), 1);
        assert_eq!(r.self_loops_removed, 1);
        assert_eq!(r.edges_after, 0);
    }

    #[test]
    fn parallel_stubs_collapse() {
        let (g, r) = erased_configuration_model(&[(3, 0), (0, 3)], 1).unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);
        assert_eq!(r.multi_edges_collapsed, 2);
        assert_eq!(r.edges_after, r.edges_before - r.self_loops_removed - r.multi_edges_collapsed);
    }

    #[test]
    fn unbalanced_is_rejected() {
        assert!(matches!(
            erased_configuration_model(&[(2, 1)], 0),
            Err(Error::UnbalancedStubs { out_total: 2, in_total: 1 })
        ));
    }

    #[test]
    fn balance_passthrough_and_failure() {
        let spec = PowerLawSpec::new(2.5, 1).unwrap();
        let sampler = IidSampler { n: 2, spec_out: spec, spec_in: spec };
        let b = balance_iid_sequence(vec![(1, 2), (2, 1)], &sampler, 0, 1).unwrap();
        assert_eq!(b.resamples, 0);
        assert_eq!(b.pairs, vec![(1, 2), (2, 1)]);

        let sampler = IidSampler {
            n: 1,
            spec_out: PowerLawSpec::new(1e12, 2).unwrap(),
            spec_in: PowerLawSpec::new(1e12, 1).unwrap(),
        };
        assert!(matches!(
            balance_iid_sequence(vec![(2, 1)], &sampler, 0, 50),
            Err(Error::BalanceFailed { attempts: 50 })
        ));
        assert!(balance_iid_sequence(vec![(2, 1)], &sampler, 0, 0).is_err());
    }

    #[test]
    fn smallest_randomization_run() {
        let g = DirectedGraph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        let s = randomization_study(&g, RandomizationOptions { repetitions: 2, seed: 0, rho_reps: 3 }).unwrap();
        assert_eq!(s.cells.len(), 16);
        for c in &s.cells {
            assert_eq!(c.repetitions + c.undefined, 2);
            if let Some(sigma) = c.sigma {
                assert!(sigma >= 0.0);
                assert_eq!(c.repetitions, 2);
            }
        }
        let pearson = s.cell(DependencyType::OUT_IN, Measure::Pearson).unwrap();
        assert_eq!(pearson.undefined, 2);
        assert!(pearson.mean.is_none());
        let tau = s.cell(DependencyType::OUT_IN, Measure::Kendall).unwrap();
        assert_eq!((tau.mean, tau.sigma), (Some(0.0), Some(0.0)));
    }

    #[test]
    fn randomization_errors() {
        let empty = DirectedGraph::new(3, vec![]).unwrap();
        assert!(matches!(randomization_study(&empty, RandomizationOptions::default()), Err(Error::EmptyGraph)));
        let g = DirectedGraph::new(2, vec![(0, 1)]).unwrap();
        let opts = RandomizationOptions { repetitions: 1, ..Default::default() };
        assert!(randomization_study(&g, opts).is_err());
    }
}
