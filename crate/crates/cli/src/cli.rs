use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "blockade", version, about = "Independent-set solvers, samplers, reductions and a Rydberg-blockade simulator")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Global {
    /// Root seed; every stage draws from a named substream of it.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write artifacts and manifest.json into this directory instead of
    /// printing the main result.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads for batch work (1 = sequential).
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// Also write long-format plot data (series,x,y) where available.
    #[arg(long, global = true)]
    pub emit_plot_data: bool,
    #[command(flatten)]
    pub caps: Caps,
}

#[derive(Debug, Args, Clone, Default)]
pub struct Caps {
    /// Largest graph for independent-set enumeration.
    #[arg(long, global = true)]
    pub enum_cap: Option<usize>,
    /// Largest graph for branch and bound (at most 64).
    #[arg(long, global = true)]
    pub bnb_cap: Option<usize>,
    /// Largest graph for exhaustive domination searches.
    #[arg(long, global = true)]
    pub subset_cap: Option<usize>,
    /// Largest graph for the exact chromatic number.
    #[arg(long, global = true)]
    pub chromatic_cap: Option<usize>,
    /// Branch-and-bound time limit in seconds.
    #[arg(long, global = true)]
    pub time_limit: Option<f64>,
    /// Partition-function memo budget in bytes.
    #[arg(long, global = true)]
    pub memo_budget: Option<usize>,
    /// Largest register for full-basis simulation.
    #[arg(long, global = true)]
    pub full_basis_cap: Option<usize>,
    /// Largest blockaded basis (number of independent sets).
    #[arg(long, global = true)]
    pub blockaded_basis_cap: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random or lattice instance.
    Gen(GenArgs),
    /// Solve a problem exactly.
    Solve {
        #[arg(value_enum)]
        problem: SolveProblem,
        #[arg(long)]
        graph: PathBuf,
    },
    /// Evaluate the partition function (counts independent sets at ν = 1).
    Count {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        nu: f64,
    },
    /// Reduce a problem to (weighted) independent set.
    Reduce(ReduceArgs),
    /// Decode a derived-graph solution through a reduction certificate.
    Decode {
        #[arg(long)]
        cert: PathBuf,
        /// Solution JSON (`{"set": [...]}` or a plain list); solved exactly
        /// when omitted.
        #[arg(long)]
        solution: Option<PathBuf>,
    },
    /// Draw independent-set samples.
    Sample(SampleArgs),
    /// Classical post-processing pipelines.
    Pipeline(PipelineArgs),
    /// Rydberg-blockade simulation.
    Sim(SimArgs),
    /// Application scenarios.
    App(AppArgs),
    /// Re-run the command recorded in a manifest, checking its input hashes.
    Replay {
        manifest: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(subcommand)]
    pub kind: GenKind,
    /// Draw vertex weights uniformly from [lo, hi] ("lo,hi").
    #[arg(long, global = true, value_parser = parse_range)]
    pub weights: Option<(f64, f64)>,
}

#[derive(Debug, Subcommand)]
pub enum GenKind {
    /// Erdős–Rényi G(n, p).
    Er {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
    },
    /// Uniform points in a square, unit-disk edges.
    Udg {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        side: f64,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        /// Resample until connected.
        #[arg(long)]
        connected: bool,
    },
    /// Square lattice with unit-disk edges.
    Lattice {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long, default_value_t = 1.0)]
        spacing: f64,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolveProblem {
    Mis,
    Mwis,
    Clique,
    Vcover,
    Mds,
    Mcds,
    Chromatic,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    #[command(subcommand)]
    pub kind: ReduceKind,
}

#[derive(Debug, Subcommand)]
pub enum ReduceKind {
    Coloring {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        colors: usize,
    },
    /// DIMACS CNF input.
    Sat {
        #[arg(long)]
        cnf: PathBuf,
    },
    Paintshop {
        /// Car word, e.g. ABAB, or whitespace-separated names.
        #[arg(long, conflicts_with = "sequence_file")]
        sequence: Option<String>,
        #[arg(long)]
        sequence_file: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(subcommand)]
    pub kind: SampleKind,
}

#[derive(Debug, Subcommand)]
pub enum SampleKind {
    /// Random-order greedy maximal independent sets.
    Greedy {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long)]
        min_degree_first: bool,
    },
    /// Hard-core Gibbs samples from Metropolis chains.
    Gibbs {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 1.0)]
        nu: f64,
        #[arg(long)]
        burn_in: Option<usize>,
        #[arg(long)]
        thinning: Option<usize>,
        /// Independent chains; samples are split evenly across them.
        #[arg(long, default_value_t = 1)]
        chains: usize,
    },
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    #[command(subcommand)]
    pub kind: PipelineKind,
}

#[derive(Debug, Subcommand)]
pub enum PipelineKind {
    /// Repair and complete a set (default: a greedy sample) to a maximal
    /// independent, hence dominating, set.
    Dominate {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        set: Option<PathBuf>,
    },
    /// Connect a dominating set (default: an exact minimum one).
    Connect {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        set: Option<PathBuf>,
    },
    /// Choose at most `budget` vertices to immunize.
    Immunize {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        budget: usize,
    },
}

#[derive(Debug, Args)]
pub struct SimArgs {
    #[command(subcommand)]
    pub kind: SimKind,
    #[arg(long, global = true, value_enum, default_value_t = SimMode::HardBlockade)]
    pub mode: SimMode,
    /// Step control `h · rate ≤ step_scale`.
    #[arg(long, global = true, default_value_t = 0.1)]
    pub step_scale: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimMode {
    Physical,
    HardBlockade,
}

#[derive(Debug, Args, Clone)]
pub struct SweepParams {
    #[arg(long, default_value_t = 10.0)]
    pub duration: f64,
    #[arg(long, default_value_t = 1.0)]
    pub omega_max: f64,
    #[arg(long, default_value_t = 3.0)]
    pub delta_initial: f64,
    #[arg(long, default_value_t = 3.0)]
    pub delta_final: f64,
}

#[derive(Debug, Subcommand)]
pub enum SimKind {
    /// Evolve a register under a schedule and measure.
    Evolve {
        #[arg(long)]
        register: PathBuf,
        #[arg(long)]
        schedule: PathBuf,
        /// Initial basis state as a bitstring (`1` ground, `r` Rydberg).
        #[arg(long)]
        initial: Option<String>,
        #[arg(long, default_value_t = 1000)]
        shots: usize,
    },
    /// Compile a unit-disk graph and run the adiabatic sweep.
    Adiabatic {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        params: SweepParams,
        #[arg(long, default_value_t = 1000)]
        shots: usize,
        /// JSON list of sweep parameter sets; runs a parameter sweep instead.
        #[arg(long)]
        grid: Option<PathBuf>,
        /// Activity of the Gibbs reference distribution in sweeps.
        #[arg(long, default_value_t = 1.0)]
        gibbs_nu: f64,
    },
    /// Exact Ω = 0 ground states at the end of the schedule.
    Groundstate {
        /// Unit-disk graph to compile (alternative to --register/--schedule).
        #[arg(long, conflicts_with_all = ["register", "schedule"])]
        graph: Option<PathBuf>,
        #[arg(long, requires = "schedule")]
        register: Option<PathBuf>,
        #[arg(long, requires = "register")]
        schedule: Option<PathBuf>,
        #[command(flatten)]
        params: SweepParams,
    },
}

#[derive(Debug, Args)]
pub struct AppArgs {
    #[command(subcommand)]
    pub kind: AppKind,
}

#[derive(Debug, Subcommand)]
pub enum AppKind {
    /// Loss-network success probabilities per route.
    Lossnet {
        #[arg(long)]
        routes: PathBuf,
        /// Comma-separated activities to sweep instead of the file's value.
        #[arg(long, value_delimiter = ',')]
        nu: Vec<f64>,
    },
    /// Rank candidate store sites by expected plan value.
    Siteplan {
        #[arg(long)]
        problem: PathBuf,
        /// Use importance-weighted greedy samples instead of enumeration.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 18)]
        exact_cap: usize,
        /// Normalize by plans containing the site rather than all plans.
        #[arg(long)]
        conditional: bool,
    },
    /// Correlation graph and its maximum clique.
    Market {
        #[arg(long)]
        returns: PathBuf,
    },
    /// Spread tasks over rounds.
    Schedule {
        #[arg(long)]
        tasks: PathBuf,
    },
    /// Place antennas of maximum total value.
    Antenna {
        #[arg(long)]
        problem: PathBuf,
    },
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected lo,hi")?;
    let lo: f64 = a.trim().parse().map_err(|_| format!("bad number {a:?}"))?;
    let hi: f64 = b.trim().parse().map_err(|_| format!("bad number {b:?}"))?;
    if !(lo > 0.0 && hi >= lo) {
        return Err("need 0 < lo <= hi".into());
    }
    Ok((lo, hi))
}
