//! Command implementations behind the `dirassort` binary. Every command
//! writes to a caller-supplied sink so output can be captured and compared.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde_json::{Map, Number, Value};
use thiserror::Error;

use dirassort::config_model::{
    iid_configuration_graph, randomization_study, IidSampler, RandomizationOptions, RandomizationSummary,
};
use dirassort::generators::{
    bridge_graph, disconnected_bridge_graph, random_bridge_collection, BridgeParams, PowerLawSpec,
};
use dirassort::graph::{load_edge_list, write_edge_list, DependencyType, DirectedGraph};
use dirassort::measures::{evaluate, kendall_tau, pearson, spearman_average, Cell, EvalOptions, Measure};
use dirassort::seeds;
use dirassort::theory::{
    closed_form_pearson_bridge, closed_form_pearson_disconnected_bridge, closed_form_spearman_bridge,
    closed_form_tau_bridge, scaling_study, BridgeVariant, GammaPair, ScalingStudy,
};

pub const SCHEMA_VERSION: &str = "1.0";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Input {
        path: PathBuf,
        #[source]
        source: dirassort::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] dirassort::Error),
    #[error("output: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    /// 2 for bad input or parameters, 3 for failures that indicate a bug.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input { .. } | CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                dirassort::Error::UnbalancedStubs { .. } => 3,
                _ => 2,
            },
            CliError::Output(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// 17 significant digits, enough to round-trip an `f64`.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn number(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(format_float(x).parse::<Number>().expect("formatted float is a JSON number"))
    } else {
        Value::Null
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(CliError::Usage(format!("unknown format {s:?} (json, csv)"))),
        }
    }
}

pub fn parse_types(list: Option<&str>) -> Result<Vec<DependencyType>> {
    match list {
        None => Ok(DependencyType::ALL.to_vec()),
        Some(s) => s
            .split(',')
            .map(|t| {
                DependencyType::from_name(t.trim())
                    .ok_or_else(|| CliError::Usage(format!("unknown type {t:?} (out_in, out_out, in_in, in_out)")))
            })
            .collect(),
    }
}

pub fn parse_measures(list: Option<&str>) -> Result<Vec<Measure>> {
    match list {
        None => Ok(Measure::ALL.to_vec()),
        Some(s) => s
            .split(',')
            .map(|m| {
                Measure::from_name(m.trim()).ok_or_else(|| {
                    CliError::Usage(format!(
                        "unknown measure {m:?} (pearson, spearman_uniform, spearman_average, kendall)"
                    ))
                })
            })
            .collect(),
    }
}

pub fn load(path: &Path) -> Result<DirectedGraph> {
    let input = |source| CliError::Input { path: path.to_owned(), source };
    let file = File::open(path).map_err(|e| input(e.into()))?;
    Ok(load_edge_list(BufReader::new(file)).map_err(input)?.graph)
}

/// Per-cell values of one graph, optionally with a randomized baseline.
pub struct CorrelationReport<'a> {
    pub path: &'a Path,
    pub graph: &'a DirectedGraph,
    pub seed: u64,
    pub rho_reps: usize,
    pub cells: Vec<Cell>,
    pub baseline: Option<(RandomizationSummary, u64)>,
}

impl CorrelationReport<'_> {
    fn cell_value(cell: &Cell) -> (Option<f64>, Option<&'static str>) {
        match &cell.value {
            Ok(v) => (Some(*v), None),
            Err(e) => (None, Some(e.undefined_reason().unwrap_or("degenerate_size"))),
        }
    }

    pub fn to_json(&self) -> Value {
        let g = self.graph;
        let mut graph = Map::new();
        graph.insert("path".into(), Value::String(self.path.display().to_string()));
        graph.insert("nodes".into(), g.node_count().into());
        graph.insert("edges".into(), g.edge_count().into());
        graph.insert("self_loops".into(), g.self_loop_count().into());
        graph.insert("duplicates".into(), g.duplicate_edge_count().into());

        let mut cells = Map::new();
        for cell in &self.cells {
            let (value, reason) = Self::cell_value(cell);
            let mut entry = Map::new();
            entry.insert("value".into(), value.map_or(Value::Null, number));
            entry.insert("reason".into(), reason.map_or(Value::Null, |r| Value::String(r.into())));
            if let Some((summary, _)) = &self.baseline {
                let b = summary.cell(cell.dependency, cell.measure).expect("baseline covers every cell");
                let mut base = Map::new();
                base.insert("mean".into(), b.mean.map_or(Value::Null, number));
                base.insert("sigma".into(), b.sigma.map_or(Value::Null, number));
                base.insert("repetitions".into(), b.repetitions.into());
                base.insert("undefined".into(), b.undefined.into());
                entry.insert("baseline".into(), Value::Object(base));
            }
            let per_type = cells
                .entry(cell.dependency.name())
                .or_insert_with(|| Value::Object(Map::new()));
            per_type
                .as_object_mut()
                .expect("type entry is an object")
                .insert(cell.measure.name().into(), Value::Object(entry));
        }

        let mut root = Map::new();
        root.insert("schema_version".into(), SCHEMA_VERSION.into());
        root.insert("graph".into(), Value::Object(graph));
        root.insert("seed".into(), self.seed.into());
        root.insert("rho_reps".into(), self.rho_reps.into());
        if let Some((summary, seed)) = &self.baseline {
            let mut r = Map::new();
            r.insert("repetitions".into(), summary.repetitions.into());
            r.insert("seed".into(), (*seed).into());
            root.insert("randomization".into(), Value::Object(r));
        }
        root.insert("cells".into(), Value::Object(cells));
        Value::Object(root)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let opt = |x: Option<f64>| x.map(format_float).unwrap_or_default();
        write!(out, "type,measure,value,reason")?;
        if self.baseline.is_some() {
            write!(out, ",baseline_mean,baseline_sigma,baseline_repetitions,baseline_undefined")?;
        }
        writeln!(out)?;
        for cell in &self.cells {
            let (value, reason) = Self::cell_value(cell);
            write!(
                out,
                "{},{},{},{}",
                cell.dependency.name(),
                cell.measure.name(),
                opt(value),
                reason.unwrap_or("")
            )?;
            if let Some((summary, _)) = &self.baseline {
                let b = summary.cell(cell.dependency, cell.measure).expect("baseline covers every cell");
                write!(out, ",{},{},{},{}", opt(b.mean), opt(b.sigma), b.repetitions, b.undefined)?;
            }
            writeln!(out)?;
        }
        Ok(())
    }

    pub fn write<W: Write>(&self, format: Format, mut out: W) -> Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut out, &self.to_json()).map_err(std::io::Error::from)?;
                writeln!(out)?;
            }
            Format::Csv => self.write_csv(out)?,
        }
        Ok(())
    }
}

pub struct ComputeArgs {
    pub input: PathBuf,
    pub measures: Option<String>,
    pub types: Option<String>,
    pub seed: u64,
    pub rho_reps: usize,
    pub format: Format,
}

pub fn cmd_compute<W: Write>(args: &ComputeArgs, out: W) -> Result<()> {
    let types = parse_types(args.types.as_deref())?;
    let measures = parse_measures(args.measures.as_deref())?;
    if args.rho_reps == 0 {
        return Err(CliError::Usage("--rho-reps must be at least 1".into()));
    }
    let g = load(&args.input)?;
    let opts = EvalOptions { seed: args.seed, rho_reps: args.rho_reps };
    let report = CorrelationReport {
        path: &args.input,
        graph: &g,
        seed: args.seed,
        rho_reps: args.rho_reps,
        cells: evaluate(&g, &types, &measures, opts),
        baseline: None,
    };
    report.write(args.format, out)
}

pub struct RandomizeArgs {
    pub input: PathBuf,
    pub reps: usize,
    pub seed: u64,
    pub rho_reps: usize,
    pub format: Format,
}

/// Values of the graph itself plus the erased configuration model baseline,
/// always over all 16 cells.
pub fn cmd_randomize<W: Write>(args: &RandomizeArgs, out: W) -> Result<()> {
    if args.rho_reps == 0 {
        return Err(CliError::Usage("--rho-reps must be at least 1".into()));
    }
    let g = load(&args.input)?;
    let opts = RandomizationOptions { repetitions: args.reps, seed: args.seed, rho_reps: args.rho_reps };
    let summary = randomization_study(&g, opts).map_err(|source| match source {
        dirassort::Error::EmptyGraph => CliError::Input { path: args.input.clone(), source },
        other => CliError::Core(other),
    })?;
    let eval = EvalOptions { seed: args.seed, rho_reps: args.rho_reps };
    let report = CorrelationReport {
        path: &args.input,
        graph: &g,
        seed: args.seed,
        rho_reps: args.rho_reps,
        cells: evaluate(&g, &DependencyType::ALL, &Measure::ALL, eval),
        baseline: Some((summary, args.seed)),
    };
    report.write(args.format, out)
}

pub enum Family {
    Bridge { k: u64, m: u64 },
    BridgeDisconnected { k: u64, m: u64 },
    BridgeCollection { n: usize, a: f64, gamma: f64, x_min: u64 },
    IidCm { n: usize, gamma_out: f64, gamma_in: f64, x_min: u64, max_attempts: u64 },
}

/// Builds the requested graph, relabelled so that reading the written edge
/// list back yields the identical graph. Warnings go to `log`.
pub fn generate(family: &Family, seed: u64, log: &mut dyn Write) -> Result<DirectedGraph> {
    let g = match *family {
        Family::Bridge { k, m } => bridge_graph(BridgeParams::new(k, m)?),
        Family::BridgeDisconnected { k, m } => disconnected_bridge_graph(BridgeParams::new(k, m)?),
        Family::BridgeCollection { n, a, gamma, x_min } => {
            let c = random_bridge_collection(n, a, PowerLawSpec::new(gamma, x_min)?, seed)?;
            if let Some(w) = &c.warning {
                writeln!(log, "warning: {w}")?;
            }
            c.graph
        }
        Family::IidCm { n, gamma_out, gamma_in, x_min, max_attempts } => {
            if n == 0 {
                return Err(CliError::Usage("--n must be positive".into()));
            }
            let sampler = IidSampler {
                n,
                spec_out: PowerLawSpec::new(gamma_out, x_min)?,
                spec_in: PowerLawSpec::new(gamma_in, x_min)?,
            };
            let built = iid_configuration_graph(&sampler, seed, max_attempts)?;
            let r = built.report;
            writeln!(
                log,
                "balanced after {} resamples; {} self-loops and {} parallel edges erased, {} edges kept",
                built.resamples, r.self_loops_removed, r.multi_edges_collapsed, r.edges_after
            )?;
            built.graph
        }
    };
    Ok(g.canonical())
}

pub fn cmd_generate(family: &Family, seed: u64, path: &Path, log: &mut dyn Write) -> Result<()> {
    let g = generate(family, seed, log)?;
    let mut w = BufWriter::new(File::create(path)?);
    write_edge_list(&g, &mut w)?;
    w.flush()?;
    Ok(())
}

/// CSV `n,p,q,sum,predicted_exponent,fitted_slope` for i.i.d. power-law
/// degree sequences.
pub fn cmd_study_scaling<W: Write>(
    gammas: GammaPair,
    x_min: u64,
    exponents: Vec<(f64, f64)>,
    sizes: Vec<usize>,
    reps: usize,
    seed: u64,
    mut out: W,
) -> Result<()> {
    let spec_out = PowerLawSpec::new(gammas.gamma_out, x_min)?;
    let spec_in = PowerLawSpec::new(gammas.gamma_in, x_min)?;
    let study = ScalingStudy { sizes, repetitions: reps, seed, exponents, gammas };
    let rows = scaling_study(
        |n, s| Ok(dirassort::generators::iid_degree_sequence(n, spec_out, spec_in, s)),
        &study,
    )?;
    writeln!(out, "n,p,q,sum,predicted_exponent,fitted_slope")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.n,
            r.p,
            r.q,
            format_float(r.sum),
            format_float(r.predicted_exponent),
            format_float(r.fitted_slope)
        )?;
    }
    Ok(())
}

/// CSV `graph,n,measure,value,closed_form_value` on `G(n, an)` and its
/// disconnected variant, In/Out type.
pub fn cmd_study_bridge_convergence<W: Write>(a: u64, sizes: &[u64], mut out: W) -> Result<()> {
    if a == 0 || sizes.contains(&0) {
        return Err(CliError::Usage("--a and every grid size must be positive".into()));
    }
    let t = DependencyType::IN_OUT;
    writeln!(out, "graph,n,measure,value,closed_form_value")?;
    for variant in [BridgeVariant::Connected, BridgeVariant::Disconnected] {
        let label = match variant {
            BridgeVariant::Connected => "bridge",
            BridgeVariant::Disconnected => "bridge_disconnected",
        };
        for &n in sizes {
            let p = BridgeParams::family(n, a)?;
            let (g, closed_r) = match variant {
                BridgeVariant::Connected => (bridge_graph(p), closed_form_pearson_bridge(n, a)),
                BridgeVariant::Disconnected => {
                    (disconnected_bridge_graph(p), closed_form_pearson_disconnected_bridge(n, a))
                }
            };
            let rows = [
                (Measure::Pearson, pearson(&g, t)?.value, closed_r),
                (
                    Measure::SpearmanAverage,
                    spearman_average(&g, t)?.value,
                    closed_form_spearman_bridge(n, a, variant),
                ),
                (Measure::Kendall, kendall_tau(&g, t)?.value, closed_form_tau_bridge(n, a, variant)),
            ];
            for (m, value, closed) in rows {
                writeln!(out, "{label},{n},{},{},{}", m.name(), format_float(value), format_float(closed))?;
            }
        }
    }
    Ok(())
}

/// CSV `realization,pearson`: In/Out Pearson's r of independent random
/// bridge collections.
pub fn cmd_study_bridge_distribution<W: Write>(
    n: usize,
    a: f64,
    spec: PowerLawSpec,
    realizations: usize,
    seed: u64,
    mut out: W,
) -> Result<()> {
    use rayon::prelude::*;
    let values = (0..realizations as u64)
        .into_par_iter()
        .map(|i| {
            let c = random_bridge_collection(n, a, spec, seeds::derive(seed, i))?;
            pearson(&c.graph, DependencyType::IN_OUT).map(|v| v.value)
        })
        .collect::<dirassort::Result<Vec<f64>>>()?;
    writeln!(out, "realization,pearson")?;
    for (i, v) in values.iter().enumerate() {
        writeln!(out, "{i},{}", format_float(*v))?;
    }
    Ok(())
}
