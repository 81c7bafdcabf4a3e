//! Argument parsing and command dispatch. Commands write their report to
//! the given sink and return an error carrying the process exit code.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use gencomp::bench::{bench_inference_rate, bench_query_scaling, bench_subsample_isotropy};
use gencomp::forster::{forster_transform, ForsterError};
use gencomp::instances::{self, Distribution};
use gencomp::ldt::{
    bruteforce_locate, build_tree, ldt_fix, locate_randomized, round_transform, universal_set, verify_universal,
    BuildMode, DecisionTree, LdtError, LocateConfig,
};
use gencomp::oracle::PointOracle;
use gencomp::SignVector;

use crate::dataset::{Dataset, DatasetError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Inconsistent(String),
    #[error("{0}")]
    Forster(String),
    #[error("{0}")]
    SizeGuard(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Inconsistent(_) => 3,
            CliError::Forster(_) => 4,
            CliError::SizeGuard(_) => 5,
            CliError::Failed(_) => 1,
        }
    }
}

impl From<DatasetError> for CliError {
    fn from(e: DatasetError) -> CliError {
        CliError::Input(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError::Failed(e.to_string())
    }
}

impl From<LdtError> for CliError {
    fn from(e: LdtError) -> CliError {
        let msg = e.to_string();
        match e {
            LdtError::InconsistentOracle
            | LdtError::NonRedundantViolation { .. }
            | LdtError::Undetermined { .. }
            | LdtError::MissingBranch { .. } => CliError::Inconsistent(msg),
            LdtError::SizeGuardExceeded { .. } | LdtError::VerificationTooLarge { .. } => CliError::SizeGuard(msg),
            LdtError::SearchExhausted { .. } => CliError::Failed(msg),
            _ => CliError::Input(msg),
        }
    }
}

impl From<ForsterError> for CliError {
    fn from(e: ForsterError) -> CliError {
        match e {
            ForsterError::ConvergenceFailure { .. } | ForsterError::Linalg(_) => CliError::Forster(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "gencomp", version, about = "Point location in hyperplane arrangements with generalized comparison queries")]
pub struct Cli {
    /// Seed for every random choice (default: fixed).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// TOML file with locator settings.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Cross-check results against direct evaluation.
    #[arg(long, global = true)]
    pub check: bool,
    /// Write the query transcript (CSV) here.
    #[arg(long, global = true)]
    pub transcript: Option<PathBuf>,
    /// Read the dataset as CSV, one hyperplane per row.
    #[arg(long, global = true)]
    pub csv: bool,
    /// Isotropy target for Forster transforms.
    #[arg(long, global = true)]
    pub target_c: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the sign vector of a point.
    Locate {
        dataset: PathBuf,
        /// Coordinates, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x: Option<Vec<f64>>,
        /// Index of a dataset point (default: every point).
        #[arg(long)]
        point: Option<usize>,
    },
    /// Compute a Forster transform of the hyperplanes.
    Forster {
        dataset: PathBuf,
        /// Also print the matrix.
        #[arg(long)]
        matrix: bool,
    },
    /// Build a decision tree and print it as JSON.
    Build {
        dataset: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = TreeMode::Fixed)]
        mode: TreeMode,
    },
    /// Evaluate a stored tree against direct evaluation.
    Verify {
        #[arg(long)]
        tree: PathBuf,
        /// Number of random points.
        #[arg(long, default_value_t = 100)]
        random: usize,
        /// Dataset whose points are evaluated as well.
        #[arg(long)]
        points: Option<PathBuf>,
    },
    /// Find or check a universal subset.
    Universal {
        dataset: PathBuf,
        /// Indices of the subset to check, comma separated.
        #[arg(long, value_delimiter = ',')]
        subset: Option<Vec<usize>>,
    },
    /// Run an experiment.
    Bench(BenchArgs),
    /// Write a random dataset.
    Generate {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        points: usize,
        #[arg(long, default_value = "sphere")]
        dist: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TreeMode {
    /// Build on nonzero answers, then add zero branches.
    Fixed,
    /// Branch on every realizable answer directly.
    Everywhere,
    /// Nonzero answers only; wrong on some lower-dimensional cells.
    AlmostEverywhere,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(subcommand)]
    pub kind: BenchKind,
    /// Write the CSV report here.
    #[arg(long, global = true)]
    pub csv_out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum BenchKind {
    /// Query counts over a grid of dimensions and sizes.
    Scaling {
        #[arg(long, value_delimiter = ',', default_value = "2")]
        dims: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "64,256")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long, default_value = "sphere")]
        dist: String,
        /// Sort with unit scales (plain comparisons) as a baseline.
        #[arg(long)]
        plain: bool,
    },
    /// Fraction inferred by one round.
    Rate {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
    /// Frequency of isotropic subsamples.
    Subsample {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 400)]
        trials: usize,
    },
}

impl Cli {
    fn locate_config(&self) -> Result<LocateConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                toml::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
            }
            None => LocateConfig::default(),
        };
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(c) = self.target_c {
            cfg.target_c = c;
        }
        Ok(cfg)
    }

    fn dataset(&self, path: &Path) -> Result<Dataset, CliError> {
        Ok(Dataset::load(path, self.csv)?)
    }
}

fn parse_dist(s: &str) -> Result<Distribution, CliError> {
    Distribution::parse(s).ok_or_else(|| CliError::Input(format!("unknown distribution {s:?} (sphere, sparseK, exp-scales)")))
}

fn sign_line(signs: &[gencomp::Sign]) -> String {
    SignVector::from_signs(signs.iter().copied()).to_string()
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = cli.locate_config()?;
    match &cli.command {
        Command::Locate { dataset, x, point } => {
            let ds = cli.dataset(dataset)?;
            let points: Vec<Vec<f64>> = match (x, point) {
                (Some(x), _) => vec![x.clone()],
                (None, Some(i)) => {
                    let pts = ds.points.as_deref().unwrap_or(&[]);
                    vec![pts.get(*i).cloned().ok_or_else(|| {
                        CliError::Input(format!("point {i} out of range ({} points)", pts.len()))
                    })?]
                }
                (None, None) => ds.points.clone().unwrap_or_default(),
            };
            if points.is_empty() {
                return Err(CliError::Input("no point given: use --x or a dataset with points".into()));
            }
            if cli.transcript.is_some() && points.len() > 1 {
                return Err(CliError::Input("--transcript needs a single point".into()));
            }
            for p in &points {
                if p.len() != ds.d || p.iter().any(|v| !v.is_finite()) {
                    return Err(CliError::Input(format!("point must have {} finite coordinates", ds.d)));
                }
                let located = locate_randomized(&ds.hyperplanes, &PointOracle::new(p.clone()), &cfg)?;
                let t = &located.transcript;
                writeln!(out, "{}", sign_line(&located.signs))?;
                writeln!(
                    out,
                    "queries: {} (labels {}, comparisons {}, generalized {}), rounds {}",
                    t.len(),
                    t.labels,
                    t.comparisons,
                    t.generalized,
                    located.progress.rounds.len()
                )?;
                if let Some(path) = &cli.transcript {
                    std::fs::write(path, t.to_csv())?;
                }
                if cli.check {
                    if located.signs != bruteforce_locate(&ds.hyperplanes, p) {
                        return Err(CliError::Inconsistent("MISMATCH against direct evaluation".into()));
                    }
                    writeln!(out, "OK")?;
                }
            }
        }
        Command::Forster { dataset, matrix } => {
            let ds = cli.dataset(dataset)?;
            let unit: Vec<Vec<f64>> = ds.hyperplanes.iter().map(|h| gencomp::linalg::normalize(h)).collect();
            let cert = forster_transform(&unit, cfg.target_c, cfg.forster_max_iters)?;
            writeln!(out, "achieved_c: {:?}", cert.achieved_c)?;
            writeln!(out, "iterations: {}", cert.iterations)?;
            if *matrix {
                for row in cert.transform.rows() {
                    let r: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
                    writeln!(out, "{}", r.join(" "))?;
                }
            }
        }
        Command::Build { dataset, out: path, mode } => {
            let ds = cli.dataset(dataset)?;
            let tree = match mode {
                TreeMode::Everywhere => build_tree(&ds.hyperplanes, &cfg, BuildMode::Everywhere)?,
                TreeMode::AlmostEverywhere => build_tree(&ds.hyperplanes, &cfg, BuildMode::AlmostEverywhere)?,
                TreeMode::Fixed => ldt_fix(&build_tree(&ds.hyperplanes, &cfg, BuildMode::AlmostEverywhere)?, &cfg)?,
            };
            let s = tree.stats();
            let summary = format!("nodes {}, leaves {}, depth {}", s.nodes, s.leaves, s.depth);
            match path {
                Some(p) => {
                    std::fs::write(p, tree.to_json())?;
                    writeln!(out, "{summary}")?;
                }
                None => {
                    eprintln!("{summary}");
                    out.write_all(tree.to_json().as_bytes())?;
                }
            }
        }
        Command::Verify { tree, random, points } => {
            let text = std::fs::read_to_string(tree).map_err(|e| CliError::Input(format!("{}: {e}", tree.display())))?;
            let tree = DecisionTree::from_json(&text).map_err(|e| CliError::Input(e.to_string()))?;
            let d = tree.dim();
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let mut xs: Vec<Vec<f64>> = (0..*random).map(|_| instances::gaussian(d, &mut rng)).collect();
            if let Some(p) = points {
                let ds = cli.dataset(p)?;
                if ds.d != d {
                    return Err(CliError::Input(format!("points have dimension {}, tree has {d}", ds.d)));
                }
                xs.extend(ds.points.unwrap_or_default());
            }
            let mut ok = 0;
            for x in &xs {
                if tree.evaluate(x).is_ok_and(|s| s == bruteforce_locate(&tree.h, x)) {
                    ok += 1;
                }
            }
            writeln!(out, "{ok}/{} OK", xs.len())?;
            if ok != xs.len() {
                return Err(CliError::Inconsistent(format!("{} points disagree", xs.len() - ok)));
            }
        }
        Command::Universal { dataset, subset } => {
            let ds = cli.dataset(dataset)?;
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let t = round_transform(&ds.hyperplanes, &cfg, &mut rng);
            let images = t.images(&ds.hyperplanes);
            let indices = match subset {
                Some(s) => {
                    if let Some(bad) = s.iter().find(|&&i| i >= images.len()) {
                        return Err(CliError::Input(format!("index {bad} out of range")));
                    }
                    s.clone()
                }
                None => {
                    let u = universal_set(&images, &cfg, &mut rng)?;
                    writeln!(out, "candidates tried: {}", u.candidates)?;
                    u.indices
                }
            };
            let r = verify_universal(&indices, &images, cfg.node_limit)?;
            let list: Vec<String> = indices.iter().map(usize::to_string).collect();
            writeln!(out, "subset: {}", list.join(","))?;
            writeln!(out, "cells: {}, min inferred: {}, required: {:.3}", r.cells, r.min_inferred, r.required)?;
            if r.certified {
                writeln!(out, "certified")?;
            } else {
                writeln!(out, "not certified")?;
                return Err(CliError::Failed("subset is not universal".into()));
            }
        }
        Command::Bench(args) => {
            let seed = cli.seed.unwrap_or(gencomp::ldt::DEFAULT_SEED);
            let (table, csv) = match &args.kind {
                BenchKind::Scaling { dims, sizes, trials, dist, plain } => {
                    let run_cfg = LocateConfig { unit_scales: *plain, ..cfg.clone() };
                    let r = bench_query_scaling(dims, sizes, *trials, parse_dist(dist)?, &run_cfg, seed)?;
                    if cli.check && r.cells.iter().any(|c| c.mismatches > 0) {
                        return Err(CliError::Inconsistent("a trial disagreed with direct evaluation".into()));
                    }
                    (r.table(), r.to_csv())
                }
                BenchKind::Rate { d, n, trials } => {
                    let r = bench_inference_rate(*d, *n, *trials, &cfg, seed)?;
                    (r.table(), r.to_csv())
                }
                BenchKind::Subsample { d, n, k, trials } => {
                    let r = bench_subsample_isotropy(*d, *n, *k, *trials, seed)?;
                    (r.table(), r.to_csv())
                }
            };
            out.write_all(table.as_bytes())?;
            if let Some(p) = &args.csv_out {
                std::fs::write(p, csv)?;
            }
        }
        Command::Generate { d, n, points, dist } => {
            if *d == 0 || *n == 0 {
                return Err(CliError::Input("d and n must be positive".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let dist = parse_dist(dist)?;
            let mut ds = Dataset::new(dist.sample(*d, *n, &mut rng))?;
            if *points > 0 {
                ds.points = Some((0..*points).map(|_| instances::gaussian(*d, &mut rng)).collect());
            }
            ds.metadata.insert("generator".into(), format!("{dist}, seed {}", cfg.seed));
            out.write_all(ds.to_json().as_bytes())?;
        }
    }
    Ok(())
}
