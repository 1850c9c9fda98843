//! Command-line driver: exact analysis, simulation and parameter sweeps.
//!
//! Settings come from an optional TOML file (`--config`) overridden by
//! flags. Output files go to `--output`, else `$EPOA_OUTPUT_DIR`, else the
//! working directory.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::star_diagnostics;
use crate::dynamics::{DynamicsKind, DynamicsSpec, InitialState, SimulationOptions};
use crate::error::{Error, Result};
use crate::graph::{Graph, Topology};
use crate::metrics::{abundance_ranking, analyze_exact, analyze_simulated, EPoAReport, Source};
use crate::payoffs::CostVector;

pub const OUTPUT_DIR_ENV: &str = "EPOA_OUTPUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "epoa", version, about = "Evolutionary price of anarchy of the virus inoculation game")]
pub struct Cli {
    /// TOML file with run settings; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact stationary distribution and ePoA (clique and star).
    Analyze(RunArgs),
    /// Monte Carlo run of the dynamics on any topology.
    Simulate(RunArgs),
    /// ePoA over a grid of mutation rates, sizes and dynamics.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TopologyArg {
    Clique,
    Star,
    TwoClique,
    TwoStar,
    Cycle,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KindArg {
    MoranDb,
    MoranBd,
    Pairwise,
}

impl From<KindArg> for DynamicsKind {
    fn from(k: KindArg) -> DynamicsKind {
        match k {
            KindArg::MoranDb => DynamicsKind::MoranDb,
            KindArg::MoranBd => DynamicsKind::MoranBd,
            KindArg::Pairwise => DynamicsKind::Pairwise,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// Exact for clique and star, simulation otherwise.
    #[default]
    Auto,
    Exact,
    Simulate,
}

/// Every run setting; unset fields fall back to the config file, then to
/// defaults.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunArgs {
    #[arg(long, value_enum)]
    pub topology: Option<TopologyArg>,
    /// Total number of nodes (two-block kinds: both sides together).
    #[arg(long)]
    pub size: Option<usize>,
    /// Edge-list file for the custom topology.
    #[arg(long)]
    pub edges: Option<PathBuf>,
    /// Infection cost I.
    #[arg(long)]
    pub infection: Option<f64>,
    /// Inoculation cost V.
    #[arg(long)]
    pub inoculation: Option<f64>,
    #[arg(long, value_enum)]
    pub dynamics: Option<KindArg>,
    /// Mutation rate.
    #[arg(long)]
    pub mu: Option<f64>,
    /// Selection strength of pairwise comparison.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Exponent s of the Moran fitness e^{s π}.
    #[arg(long)]
    pub fitness_exponent: Option<f64>,
    /// Exclude the focal node from its own candidate pool on cliques.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub no_self_replacement: Option<bool>,
    /// Counted simulation steps k.
    #[arg(long)]
    pub steps: Option<u64>,
    #[arg(long)]
    pub burn_in: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub replicas: Option<u64>,
    /// Output directory.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// File-name stem of the outputs.
    #[arg(long)]
    pub name: Option<String>,
    /// Format of the distribution / visit table.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Also write the transition matrix (analyze only).
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub matrix: Option<bool>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Mutation rates, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub mu_grid: Option<Vec<f64>>,
    /// Sizes, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub size_grid: Option<Vec<usize>>,
    /// Dynamics kinds, comma separated.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub dynamics_grid: Option<Vec<KindArg>>,
    #[arg(long, value_enum)]
    pub route: Option<Route>,
}

macro_rules! overlay {
    ($base:expr, $top:expr; $($field:ident),* $(,)?) => {
        $( if $top.$field.is_some() { $base.$field = $top.$field.clone(); } )*
    };
}

impl RunArgs {
    /// `self` with every field set in `flags` replaced.
    pub fn overridden_by(mut self, flags: &RunArgs) -> RunArgs {
        overlay!(self, flags; topology, size, edges, infection, inoculation, dynamics, mu, beta,
            fitness_exponent, no_self_replacement, steps, burn_in, seed, replicas, output, name, format, matrix);
        self
    }
}

impl SweepArgs {
    pub fn overridden_by(mut self, flags: &SweepArgs) -> SweepArgs {
        self.run = self.run.overridden_by(&flags.run);
        overlay!(self, flags; mu_grid, size_grid, dynamics_grid, route);
        self
    }
}

/// Fully resolved settings of one run.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub topology: TopologyArg,
    pub size: usize,
    pub edges: Option<PathBuf>,
    pub infection: f64,
    pub inoculation: f64,
    pub spec: DynamicsSpec,
    pub steps: u64,
    pub burn_in: u64,
    pub seed: u64,
    pub replicas: u64,
    pub output: PathBuf,
    pub name: Option<String>,
    pub format: Format,
    pub matrix: bool,
}

impl RunConfig {
    pub fn resolve(args: &RunArgs) -> Result<RunConfig> {
        let topology = args.topology.ok_or_else(|| Error::Config("topology is required".into()))?;
        let size = match (topology, args.size) {
            (TopologyArg::Custom, _) => 0,
            (_, Some(n)) => n,
            (_, None) => return Err(Error::Config("size is required".into())),
        };
        if topology == TopologyArg::Custom && args.edges.is_none() {
            return Err(Error::Config("the custom topology needs --edges".into()));
        }
        let output = match &args.output {
            Some(p) => p.clone(),
            None => std::env::var_os(OUTPUT_DIR_ENV).map_or_else(|| PathBuf::from("."), PathBuf::from),
        };
        let spec = DynamicsSpec {
            kind: args.dynamics.unwrap_or(KindArg::Pairwise).into(),
            mutation_rate: args.mu.unwrap_or(0.001),
            selection_strength: args.beta.unwrap_or(1.0),
            fitness_exponent: args.fitness_exponent.unwrap_or(1.0),
            self_replacement: !args.no_self_replacement.unwrap_or(false),
        };
        let cfg = RunConfig {
            topology,
            size,
            edges: args.edges.clone(),
            infection: args.infection.unwrap_or(2.0),
            inoculation: args.inoculation.unwrap_or(1.0),
            spec,
            steps: args.steps.unwrap_or(500_000),
            burn_in: args.burn_in.unwrap_or(0),
            seed: args.seed.unwrap_or(0),
            replicas: args.replicas.unwrap_or(1),
            output,
            name: args.name.clone(),
            format: args.format.unwrap_or_default(),
            matrix: args.matrix.unwrap_or(false),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        self.costs()?;
        self.spec.validate()?;
        if self.steps == 0 {
            return Err(Error::InvalidParameter("steps must be at least 1".into()));
        }
        if self.replicas == 0 {
            return Err(Error::InvalidParameter("replicas must be at least 1".into()));
        }
        Ok(())
    }

    pub fn costs(&self) -> Result<CostVector> {
        CostVector::new(self.infection, self.inoculation)
    }

    pub fn graph(&self) -> Result<Graph> {
        let n = self.size;
        let half = |n: usize| {
            if n % 2 == 1 {
                Err(Error::InvalidParameter(format!("two-block topologies need an even size, got {n}")))
            } else {
                Ok(n / 2)
            }
        };
        let topology = match self.topology {
            TopologyArg::Clique => Topology::Clique(n),
            TopologyArg::Star => Topology::Star(n),
            TopologyArg::Cycle => Topology::Cycle(n),
            TopologyArg::TwoClique => Topology::TwoClique(half(n)?),
            TopologyArg::TwoStar => Topology::TwoStar(half(n)?),
            TopologyArg::Custom => {
                let path = self.edges.as_ref().expect("validated");
                return Graph::parse_edge_list(&fs::read_to_string(path)?);
            }
        };
        Graph::build(topology)
    }

    pub fn simulation_options(&self) -> SimulationOptions {
        SimulationOptions { steps: self.steps, burn_in: self.burn_in, seed: self.seed, initial: InitialState::Uniform }
    }

    fn stem(&self, g: &Graph) -> String {
        self.name
            .clone()
            .unwrap_or_else(|| format!("{}_n{}_{}", g.topology().name(), g.node_count(), self.spec.kind))
    }

    fn path(&self, stem: &str, suffix: &str) -> PathBuf {
        self.output.join(format!("{stem}_{suffix}"))
    }
}

const SWEEP_KEYS: [&str; 4] = ["mu_grid", "size_grid", "dynamics_grid", "route"];

#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepFileKeys {
    mu_grid: Option<Vec<f64>>,
    size_grid: Option<Vec<usize>>,
    dynamics_grid: Option<Vec<KindArg>>,
    route: Option<Route>,
}

fn load_sweep_file(path: Option<&Path>) -> Result<SweepArgs> {
    let Some(p) = path else { return Ok(SweepArgs::default()) };
    let config_error = |e: &dyn std::fmt::Display| Error::Config(format!("{}: {e}", p.display()));
    let text = fs::read_to_string(p).map_err(|e| config_error(&e))?;
    let mut table: toml::Table = toml::from_str(&text).map_err(|e| config_error(&e))?;
    let mut grid = toml::Table::new();
    for key in SWEEP_KEYS {
        if let Some(v) = table.remove(key) {
            grid.insert(key.to_string(), v);
        }
    }
    let run: RunArgs = table.try_into().map_err(|e| config_error(&e))?;
    let keys: SweepFileKeys = grid.try_into().map_err(|e| config_error(&e))?;
    Ok(SweepArgs {
        run,
        mu_grid: keys.mu_grid,
        size_grid: keys.size_grid,
        dynamics_grid: keys.dynamics_grid,
        route: keys.route,
    })
}

fn load_file<T: for<'de> Deserialize<'de> + Default>(path: Option<&Path>) -> Result<T> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
            toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", p.display())))
        }
    }
}

#[derive(Serialize)]
struct ReportFile<'a> {
    config: &'a RunConfig,
    report: &'a EPoAReport,
    nash: Vec<String>,
    nash_complete: bool,
}

#[derive(Serialize)]
struct DistributionRow {
    state: String,
    probability: f64,
}

#[derive(Serialize)]
struct VisitRow {
    state: String,
    count: u64,
    frequency: f64,
}

fn write_table<T: Serialize>(path: &Path, rows: &[T], format: Format) -> Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_path(path)?;
            for row in rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
        Format::Json => write_json(path, &rows)?,
    }
    Ok(())
}

fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut f = fs::File::create(path)?;
    serde_json::to_writer_pretty(&mut f, value)?;
    writeln!(f)?;
    Ok(())
}

fn table_ext(format: Format) -> &'static str {
    match format {
        Format::Csv => "csv",
        Format::Json => "json",
    }
}

/// Files written by a command.
pub type Written = Vec<PathBuf>;

pub fn cmd_analyze(cfg: &RunConfig) -> Result<(EPoAReport, Written)> {
    if cfg.spec.mutation_rate == 0.0 {
        return Err(Error::InvalidParameter(
            "mutation rate 0 makes the chain absorbing: no unique stationary distribution".into(),
        ));
    }
    let g = cfg.graph()?;
    let ct = cfg.costs()?;
    let analysis = analyze_exact(&g, &ct, &cfg.spec)?;
    fs::create_dir_all(&cfg.output)?;
    let stem = cfg.stem(&g);
    let mut written = Vec::new();

    let rows: Vec<DistributionRow> = analysis
        .distribution
        .states
        .iter()
        .zip(&analysis.distribution.x)
        .map(|(s, &p)| DistributionRow { state: s.to_string(), probability: p })
        .collect();
    let dist_path = cfg.path(&stem, &format!("distribution.{}", table_ext(cfg.format)));
    write_table(&dist_path, &rows, cfg.format)?;
    written.push(dist_path);

    let report_path = cfg.path(&stem, "report.json");
    write_json(
        &report_path,
        &ReportFile {
            config: cfg,
            report: &analysis.report,
            nash: analysis.equilibria.nash.iter().map(|k| k.to_string()).collect(),
            nash_complete: analysis.equilibria.complete,
        },
    )?;
    written.push(report_path);

    if let Topology::Star(n) = g.topology() {
        let diagnostics = star_diagnostics(n, &ct, &cfg.spec)?;
        let path = cfg.path(&stem, "diagnostics.json");
        write_json(&path, &diagnostics)?;
        written.push(path);
    }
    if cfg.matrix {
        let path = cfg.path(&stem, "matrix.csv");
        let mut w = csv::Writer::from_path(&path)?;
        for entry in analysis.matrix.entries() {
            w.serialize(entry)?;
        }
        w.flush()?;
        written.push(path);
    }
    Ok((analysis.report, written))
}

pub fn cmd_simulate(cfg: &RunConfig) -> Result<(EPoAReport, Written)> {
    let g = cfg.graph()?;
    let ct = cfg.costs()?;
    let analysis = analyze_simulated(&g, &ct, &cfg.spec, &cfg.simulation_options(), cfg.replicas)?;
    fs::create_dir_all(&cfg.output)?;
    let stem = cfg.stem(&g);
    let pooled = &analysis.pooled;
    let rows: Vec<VisitRow> = pooled
        .visits
        .iter()
        .map(|(k, v)| VisitRow { state: k.to_string(), count: v.count, frequency: v.count as f64 / pooled.steps as f64 })
        .collect();
    let visits_path = cfg.path(&stem, &format!("visits.{}", table_ext(cfg.format)));
    write_table(&visits_path, &rows, cfg.format)?;
    let report_path = cfg.path(&stem, "report.json");
    write_json(
        &report_path,
        &ReportFile {
            config: cfg,
            report: &analysis.report,
            nash: analysis.equilibria.nash.iter().map(|k| k.to_string()).collect(),
            nash_complete: analysis.equilibria.complete,
        },
    )?;
    Ok((analysis.report, vec![visits_path, report_path]))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub topology: String,
    pub kind: String,
    pub mu: f64,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "V/I")]
    pub v_over_i: f64,
    pub epoa: f64,
    pub poa: f64,
    pub epoa_over_poa: f64,
    #[serde(rename = "S_hat")]
    pub s_hat: f64,
    pub omega: f64,
    pub k: Option<u64>,
    pub seed: Option<u64>,
    pub source: Source,
}

impl SweepRow {
    fn from_report(r: &EPoAReport) -> SweepRow {
        SweepRow {
            topology: r.topology.name().to_string(),
            kind: r.dynamics.kind.to_string(),
            mu: r.dynamics.mutation_rate,
            n: r.nodes,
            v_over_i: r.inoculation_cost / r.infection_cost,
            epoa: r.epoa,
            poa: r.poa,
            epoa_over_poa: r.epoa_over_poa,
            s_hat: r.s_hat,
            omega: r.omega,
            k: r.steps,
            seed: r.seed,
            source: r.source,
        }
    }
}

fn point(cfg: &RunConfig, route: Route) -> Result<EPoAReport> {
    let g = cfg.graph()?;
    let ct = cfg.costs()?;
    let exact = match route {
        Route::Exact => true,
        Route::Simulate => false,
        Route::Auto => matches!(g.topology(), Topology::Clique(_) | Topology::Star(_)),
    };
    if exact {
        if cfg.spec.mutation_rate == 0.0 {
            return Err(Error::InvalidParameter("mutation rate 0: no unique stationary distribution".into()));
        }
        Ok(analyze_exact(&g, &ct, &cfg.spec)?.report)
    } else {
        Ok(analyze_simulated(&g, &ct, &cfg.spec, &cfg.simulation_options(), cfg.replicas)?.report)
    }
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<(Vec<SweepRow>, Written)> {
    let base = RunConfig::resolve(&RunArgs { size: args.run.size.or(Some(0)), ..args.run.clone() })?;
    let mus = args.mu_grid.clone().unwrap_or_else(|| vec![base.spec.mutation_rate]);
    let sizes = match (&args.size_grid, args.run.size) {
        (Some(g), _) => g.clone(),
        (None, Some(n)) => vec![n],
        (None, None) if base.topology == TopologyArg::Custom => vec![0],
        (None, None) => return Err(Error::Config("sweep needs size or size_grid".into())),
    };
    let kinds: Vec<DynamicsKind> = args
        .dynamics_grid
        .clone()
        .map_or_else(|| vec![base.spec.kind], |ks| ks.into_iter().map(Into::into).collect());
    if mus.is_empty() || sizes.is_empty() || kinds.is_empty() {
        return Err(Error::Config("sweep grid is empty".into()));
    }
    let route = args.route.unwrap_or_default();
    let mut points = Vec::new();
    for &n in &sizes {
        for &kind in &kinds {
            for &mu in &mus {
                let mut cfg = base.clone();
                cfg.size = n;
                cfg.spec.kind = kind;
                cfg.spec.mutation_rate = mu;
                cfg.validate()?;
                points.push(cfg);
            }
        }
    }
    let reports: Vec<EPoAReport> = points.par_iter().map(|cfg| point(cfg, route)).collect::<Result<_>>()?;
    let rows: Vec<SweepRow> = reports.iter().map(SweepRow::from_report).collect();
    fs::create_dir_all(&base.output)?;
    let stem = base.name.clone().unwrap_or_else(|| "sweep".into());
    let path = base.output.join(format!("{stem}.csv"));
    let mut w = csv::Writer::from_path(&path)?;
    for row in &rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok((rows, vec![path]))
}

/// Runs a parsed command line; returns the files written.
pub fn run(cli: Cli) -> Result<Written> {
    let file = cli.config.as_deref();
    match cli.command {
        Command::Analyze(flags) => {
            let args = load_file::<RunArgs>(file)?.overridden_by(&flags);
            let cfg = RunConfig::resolve(&args)?;
            let (report, written) = cmd_analyze(&cfg)?;
            print_summary(&report);
            Ok(written)
        }
        Command::Simulate(flags) => {
            let args = load_file::<RunArgs>(file)?.overridden_by(&flags);
            let cfg = RunConfig::resolve(&args)?;
            let (report, written) = cmd_simulate(&cfg)?;
            print_summary(&report);
            Ok(written)
        }
        Command::Sweep(flags) => {
            let args = load_sweep_file(file)?.overridden_by(&flags);
            let (rows, written) = cmd_sweep(&args)?;
            println!("{} grid points", rows.len());
            Ok(written)
        }
    }
}

fn print_summary(r: &EPoAReport) {
    println!(
        "{} N={} {}: S_hat={:.6} omega={:.6} epoa={:.6} poa={:.6} epoa/poa={:.6} most abundant {}",
        r.topology.name(),
        r.nodes,
        r.dynamics.kind,
        r.s_hat,
        r.omega,
        r.epoa,
        r.poa,
        r.epoa_over_poa,
        r.most_abundant
    );
}

/// Top `count` states of an exact distribution, for display.
pub fn top_states(dist: &crate::chain::StationaryDistribution, count: usize) -> Vec<(String, f64)> {
    abundance_ranking(dist).into_iter().take(count).map(|(k, p)| (k.to_string(), p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(topology: TopologyArg, size: usize) -> RunArgs {
        RunArgs { topology: Some(topology), size: Some(size), ..RunArgs::default() }
    }

    #[test]
    fn flags_override_file() {
        let file: RunArgs = toml::from_str("topology = \"star\"\nsize = 12\nmu = 0.01\nseed = 4").unwrap();
        let flags = RunArgs { mu: Some(0.002), ..RunArgs::default() };
        let merged = file.overridden_by(&flags);
        assert_eq!(merged.topology, Some(TopologyArg::Star));
        assert_eq!(merged.mu, Some(0.002));
        assert_eq!(merged.seed, Some(4));
    }

    #[test]
    fn sweep_file_splits_grid_keys() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sweep.toml");
        fs::write(&path, "topology = \"clique\"\nsize_grid = [10, 20]\nmu_grid = [0.001]\nroute = \"exact\"").unwrap();
        let args = load_sweep_file(Some(&path)).unwrap();
        assert_eq!(args.run.topology, Some(TopologyArg::Clique));
        assert_eq!(args.size_grid, Some(vec![10, 20]));
        assert_eq!(args.route, Some(Route::Exact));
        fs::write(&path, "topology = \"clique\"\nsize_gird = [10]").unwrap();
        assert!(load_sweep_file(Some(&path)).is_err());
    }

    #[test]
    fn unknown_file_keys_are_rejected() {
        assert!(toml::from_str::<RunArgs>("sise = 3").is_err());
    }

    #[test]
    fn defaults_and_validation() {
        let cfg = RunConfig::resolve(&args(TopologyArg::Clique, 30)).unwrap();
        assert_eq!(cfg.steps, 500_000);
        assert_eq!(cfg.spec.mutation_rate, 0.001);
        assert_eq!(cfg.spec.selection_strength, 1.0);
        assert_eq!(cfg.burn_in, 0);
        let bad = RunArgs { infection: Some(1.0), inoculation: Some(2.0), ..args(TopologyArg::Clique, 5) };
        assert_eq!(RunConfig::resolve(&bad).unwrap_err().exit_code(), 1);
        assert!(RunConfig::resolve(&RunArgs::default()).is_err());
    }

    #[test]
    fn two_block_size_is_total() {
        let cfg = RunConfig::resolve(&args(TopologyArg::TwoStar, 20)).unwrap();
        assert_eq!(cfg.graph().unwrap().topology(), Topology::TwoStar(10));
        let odd = RunConfig::resolve(&args(TopologyArg::TwoClique, 11)).unwrap();
        assert!(odd.graph().is_err());
    }

    #[test]
    fn analyze_refuses_zero_mutation() {
        let cfg = RunConfig::resolve(&RunArgs { mu: Some(0.0), ..args(TopologyArg::Clique, 5) }).unwrap();
        assert!(cmd_analyze(&cfg).unwrap_err().to_string().contains("no unique stationary distribution"));
    }

    #[test]
    fn analyze_refuses_cycle() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = RunConfig::resolve(&RunArgs {
            output: Some(dir.path().to_path_buf()),
            ..args(TopologyArg::Cycle, 6)
        })
        .unwrap();
        assert!(matches!(cmd_analyze(&cfg), Err(Error::Unsupported(_))));
    }
}
