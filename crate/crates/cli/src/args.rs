//! Command-line flags. Each subcommand turns its flags into a partial
//! [`RunConfig`] that overrides the config file.

use std::path::PathBuf;

use brickwork_core::analytics::Region;
use brickwork_core::memory_lab::Placement;
use brickwork_core::qudit_sim::EntropyKind;
use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;

use crate::config::{BoundName, Command, DepthSpec, Format, PerturbationKind, RunConfig};

fn parse_serde<T: DeserializeOwned>(s: &str) -> Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.replace('-', "_"))).map_err(|e| e.to_string())
}

fn parse_entropy(s: &str) -> Result<EntropyKind, String> {
    parse_serde(s)
}

fn parse_placement(s: &str) -> Result<Placement, String> {
    parse_serde(s)
}

fn parse_region(s: &str) -> Result<Region, String> {
    parse_serde(s)
}

#[derive(Debug, Parser)]
#[command(name = "brickwork", version, about = "Random brickwork circuits: exact purity, simulation and random-projector statistics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Ensemble-averaged purity of an interval: exact domain-wall values,
    /// their bounds and optional Monte Carlo estimates.
    Purity(PurityArgs),
    /// Mutual information between the two parts of an interval cut at every x.
    MiProfile(MiArgs),
    /// Fidelity statistics of pairs of random rank-r projector states.
    ProjectorStats(ProjectorArgs),
    /// Greedy packing of rank-r states with pairwise fidelity below eps.
    Packing(PackingArgs),
    /// Fidelity between interval states of circuits differing in one brick.
    Memory(MemoryArgs),
    /// Evaluate one closed-form bound.
    Bounds(BoundsArgs),
}

#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    /// Flat key = value file; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Monte Carlo trials (>= 1 for sampling commands; 0 gives exact-only purity tables).
    #[arg(long)]
    pub trials: Option<usize>,
    /// Master seed (u64). Without it BRICKWORK_SEED is read, else 0.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Statevector memory cap in bytes (default 2 GiB).
    #[arg(long)]
    pub mem_cap: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub workers: Option<usize>,
    /// Exit with code 4 when a statistical or exact check fails.
    #[arg(long)]
    pub assert: bool,
    /// Record wall time in the header (output is then not byte-reproducible).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args, Default)]
pub struct ChainArgs {
    /// Local dimension q (integer >= 2 for simulation; >= 1 for exact purity).
    #[arg(long)]
    pub q: Option<f64>,
    /// Ring size L (even).
    #[arg(long)]
    pub sites: Option<usize>,
    /// First site of the interval; must have the parity of the depth.
    /// Defaults to the aligned start for each depth.
    #[arg(long)]
    pub interval_start: Option<usize>,
    /// Interval length l (even, >= 2).
    #[arg(long)]
    pub interval_len: Option<usize>,
    /// Depths: `3`, `1,2,4` or inclusive range `0..3`.
    #[arg(long)]
    pub depth: Option<DepthSpec>,
}

#[derive(Debug, Args)]
pub struct PurityArgs {
    #[command(flatten)]
    pub chain: ChainArgs,
    /// Allow Monte Carlo on rings smaller than l + 2T + 2.
    #[arg(long)]
    pub allow_lightcone: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct MiArgs {
    #[command(flatten)]
    pub chain: ChainArgs,
    /// Entropy used for the mutual information: renyi2 (default) or von-neumann.
    #[arg(long, value_parser = parse_entropy)]
    pub entropy: Option<EntropyKind>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct ProjectorArgs {
    /// Hilbert-space dimension d >= 1.
    #[arg(long)]
    pub d: Option<usize>,
    /// Projector rank 1 <= r <= d; closed forms need r/d <= 1/2.
    #[arg(long)]
    pub r: Option<usize>,
    /// Number of independent projector pairs.
    #[arg(long)]
    pub pairs: Option<usize>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct PackingArgs {
    /// Hilbert-space dimension d >= 1.
    #[arg(long)]
    pub d: Option<usize>,
    /// Rank 1 <= r <= d.
    #[arg(long)]
    pub r: Option<usize>,
    /// Fidelity threshold, 0 < eps < 1.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Candidate draws.
    #[arg(long)]
    pub max_draws: Option<usize>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct MemoryArgs {
    #[command(flatten)]
    pub chain: ChainArgs,
    /// Dimension Q of the odd sites (integer >= 2).
    #[arg(long = "bigQ")]
    pub big_q: Option<u64>,
    /// Wedge placement of the perturbed brick: inside, outside or adjacent.
    #[arg(long, value_parser = parse_placement)]
    pub placement: Option<Placement>,
    /// Layer (1..=T) of the perturbed brick; give with --bond.
    #[arg(long)]
    pub layer: Option<usize>,
    /// Bond (left site) of the perturbed brick; give with --layer.
    #[arg(long)]
    pub bond: Option<usize>,
    #[arg(long, value_enum)]
    pub perturbation: Option<PerturbationKind>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Which bound to evaluate.
    #[arg(long, value_enum)]
    pub bound: Option<BoundName>,
    /// Local dimension q (real >= 1; integer for prop2).
    #[arg(long)]
    pub q: Option<f64>,
    /// Chain length L.
    #[arg(long)]
    pub sites: Option<usize>,
    /// Interval length l.
    #[arg(long)]
    pub interval_len: Option<usize>,
    /// Integer depth (prop2).
    #[arg(long)]
    pub depth: Option<DepthSpec>,
    /// Real time T (thermalization-free bounds).
    #[arg(long)]
    pub time: Option<f64>,
    /// Design order k >= 0.
    #[arg(long)]
    pub k: Option<u64>,
    #[arg(long)]
    pub eps: Option<f64>,
    /// Design error eps_design >= 0.
    #[arg(long)]
    pub eps_design: Option<f64>,
    /// Fidelity deficit, 0 < delta < 1.
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Dimension d.
    #[arg(long)]
    pub d: Option<usize>,
    /// Rank r.
    #[arg(long)]
    pub r: Option<usize>,
    /// Number of gates m crossing the cut.
    #[arg(long)]
    pub gates: Option<f64>,
    /// Smaller subsystem dimension for MI continuity.
    #[arg(long)]
    pub d_min: Option<f64>,
    /// Exponent of the polynomial in L (required for gate-count; never defaulted).
    #[arg(long)]
    pub poly_exponent: Option<f64>,
    /// Entropy density s > 0.
    #[arg(long)]
    pub entropy_density: Option<f64>,
    /// Inverse temperature beta > 0 for the holographic formulas.
    #[arg(long)]
    pub inv_temp: Option<f64>,
    /// small (the interval) or large (its complement).
    #[arg(long, value_parser = parse_region)]
    pub region: Option<Region>,
    #[command(flatten)]
    pub common: CommonArgs,
}

fn flag(b: bool) -> Option<bool> {
    b.then_some(true)
}

impl CommonArgs {
    fn apply(&self, cfg: &mut RunConfig) {
        cfg.trials = self.trials;
        cfg.seed = self.seed;
        cfg.out = self.out.clone();
        cfg.format = self.format;
        cfg.mem_cap = self.mem_cap;
        cfg.workers = self.workers;
        cfg.assert = flag(self.assert);
        cfg.timing = flag(self.timing);
    }
}

impl ChainArgs {
    fn apply(&self, cfg: &mut RunConfig) {
        cfg.q = self.q;
        cfg.sites = self.sites;
        cfg.interval_start = self.interval_start;
        cfg.interval_len = self.interval_len;
        cfg.depth = self.depth.clone();
    }
}

impl Sub {
    pub fn common(&self) -> &CommonArgs {
        match self {
            Sub::Purity(a) => &a.common,
            Sub::MiProfile(a) => &a.common,
            Sub::ProjectorStats(a) => &a.common,
            Sub::Packing(a) => &a.common,
            Sub::Memory(a) => &a.common,
            Sub::Bounds(a) => &a.common,
        }
    }

    /// The flags given on the command line, as a partial config.
    pub fn to_config(&self) -> RunConfig {
        let mut c = RunConfig::default();
        self.common().apply(&mut c);
        match self {
            Sub::Purity(a) => {
                c.command = Some(Command::Purity);
                a.chain.apply(&mut c);
                c.allow_lightcone = flag(a.allow_lightcone);
            }
            Sub::MiProfile(a) => {
                c.command = Some(Command::MiProfile);
                a.chain.apply(&mut c);
                c.entropy = a.entropy;
            }
            Sub::ProjectorStats(a) => {
                c.command = Some(Command::ProjectorStats);
                (c.d, c.r, c.pairs) = (a.d, a.r, a.pairs);
            }
            Sub::Packing(a) => {
                c.command = Some(Command::Packing);
                (c.d, c.r, c.eps, c.max_draws) = (a.d, a.r, a.eps, a.max_draws);
            }
            Sub::Memory(a) => {
                c.command = Some(Command::Memory);
                a.chain.apply(&mut c);
                c.big_q = a.big_q;
                c.placement = a.placement;
                c.layer = a.layer;
                c.bond = a.bond;
                c.perturbation = a.perturbation;
            }
            Sub::Bounds(a) => {
                c.command = Some(Command::Bounds);
                c.bound = a.bound;
                c.q = a.q;
                c.sites = a.sites;
                c.interval_len = a.interval_len;
                c.depth = a.depth.clone();
                c.time = a.time;
                c.k = a.k;
                c.eps = a.eps;
                c.eps_design = a.eps_design;
                c.delta = a.delta;
                c.alpha = a.alpha;
                c.beta = a.beta;
                c.d = a.d;
                c.r = a.r;
                c.gates = a.gates;
                c.d_min = a.d_min;
                c.poly_exponent = a.poly_exponent;
                c.entropy_density = a.entropy_density;
                c.inv_temp = a.inv_temp;
                c.region = a.region;
            }
        }
        c
    }
}
