//! Degree-degree dependencies in directed graphs.
//!
//! The crate computes the four directed dependency types (Out/In, Out/Out,
//! In/In, In/Out) under Pearson's r, Spearman's rho with random or average
//! tie resolution, and Kendall's tau. It also generates the bridge-graph
//! families and erased configuration-model null models used to study how
//! these measures behave on graphs with heavy-tailed degrees.
//!
//! Rank convention throughout is descending: the largest degree has rank 1.

pub mod config_model;
pub mod error;
pub mod generators;
pub mod graph;
pub mod measures;
pub mod seeds;
pub mod theory;

pub use error::{Error, Result};
pub use graph::{
    degrees, edge_degree_pairs, load_edge_list, vertex_moment_sum, write_edge_list, DegreeKind,
    DegreeTable, DependencyType, DirectedGraph, LoadedGraph, NodeId, PairSeries,
};
pub use measures::{Measure, MeasureValue};
