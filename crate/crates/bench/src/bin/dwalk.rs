use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use dwalk_bench::cuckoo_run::{run_cuckoo_trials, ProviderKind};
use dwalk_bench::orient_run::{algo_seed, run_orient_variants};
use dwalk_bench::verify::{verify_edges, verify_script};
use dwalk_bench::{
    generate_workload, scaling_report, write_rows, CuckooParams, Format, Row, ScriptKind, WorkloadKind,
    WorkloadSpec,
};
use dwalk_core::script::{parse_script, Op};
use dwalk_core::{AlgoConfig, Variant};

#[derive(Parser)]
#[command(name = "dwalk", version, about = "Dancing-walk orientation and cuckoo table experiments")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run forest workloads through orientation algorithms.
    OrientBench(OrientArgs),
    /// Replay hash-table scripts through the cuckoo table.
    CuckooBench(CuckooArgs),
    /// Mean walk steps and flips per insertion across several n.
    Scaling(ScalingArgs),
    /// Check a workload or script with the brute-force oracles.
    Verify(VerifyArgs),
}

#[derive(Args, Clone)]
struct AlgoArgs {
    /// never-flip, flip-all, dancing-size, dancing-rank, or all.
    #[arg(long, default_value = "dancing-rank")]
    algo: String,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 4.0)]
    c: f64,
    #[arg(long, default_value_t = 4.0)]
    d: f64,
}

impl AlgoArgs {
    fn variants(&self) -> Result<Vec<Variant>> {
        if self.algo == "all" {
            return Ok(Variant::ALL.to_vec());
        }
        self.algo
            .split(',')
            .map(|s| s.trim().parse::<Variant>().map_err(anyhow::Error::msg))
            .collect()
    }

    fn config(&self, variant: Variant, n: usize) -> AlgoConfig {
        AlgoConfig::new(variant, n).with_k(self.k).with_constants(self.c, self.d)
    }
}

#[derive(Args, Clone)]
struct OutArgs {
    /// Write results here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: Format,
}

impl OutArgs {
    fn emit<T: Row>(&self, rows: &[T]) -> Result<()> {
        match &self.out {
            Some(path) => {
                let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
                write_rows(rows, self.format, BufWriter::new(f))
            }
            None => write_rows(rows, self.format, io::stdout().lock()),
        }
    }
}

#[derive(Args)]
struct OrientArgs {
    #[command(flatten)]
    algo: AlgoArgs,
    #[arg(long, default_value_t = 1 << 16)]
    n: usize,
    /// First trial seed; trial r uses seed + r.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    reps: usize,
    #[arg(long, default_value = "random-recursive-tree")]
    workload: WorkloadKind,
    /// Edge list for `--workload file`.
    #[arg(long)]
    file: Option<PathBuf>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct CuckooArgs {
    #[arg(long, default_value_t = 1 << 14)]
    n: usize,
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    #[arg(long, default_value_t = 0)]
    stash: usize,
    #[arg(long, default_value_t = 4.0)]
    c: f64,
    #[arg(long, default_value_t = 4.0)]
    d: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    reps: usize,
    /// Operation script; without it each trial generates one.
    #[arg(long)]
    script: Option<PathBuf>,
    /// Generated scripts: `churn` or `insert-only`.
    #[arg(long, default_value = "churn")]
    workload: String,
    /// Fill level for generated scripts, as a fraction of n.
    #[arg(long, default_value_t = 0.2)]
    load: f64,
    /// Length of generated churn scripts.
    #[arg(long, default_value_t = 100_000)]
    ops: usize,
    #[arg(long, default_value_t = 0.4)]
    query_frac: f64,
    /// seeded or tabulation.
    #[arg(long, default_value = "seeded")]
    provider: ProviderKind,
    /// Cross-check every query against a reference map.
    #[arg(long)]
    oracle: bool,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct ScalingArgs {
    #[command(flatten)]
    algo: AlgoArgs,
    /// Comma-separated sizes.
    #[arg(long, value_delimiter = ',', default_value = "4096,16384,65536,262144")]
    n: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    reps: usize,
    #[arg(long, default_value = "random-recursive-tree")]
    workload: WorkloadKind,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    algo: AlgoArgs,
    #[arg(long, default_value_t = 1 << 12)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "random-recursive-tree")]
    workload: WorkloadKind,
    /// Edge list for `--workload file`.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Verify a cuckoo operation script instead of an edge workload.
    #[arg(long)]
    script: Option<PathBuf>,
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    #[arg(long, default_value_t = 0)]
    stash: usize,
    #[arg(long, default_value = "seeded")]
    provider: ProviderKind,
}

fn load_script(path: &PathBuf) -> Result<Vec<Op>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_script(&text).with_context(|| format!("parsing {}", path.display()))
}

fn workload_spec(kind: WorkloadKind, n: usize, seed: u64, file: &Option<PathBuf>) -> Result<WorkloadSpec> {
    if kind == WorkloadKind::File && file.is_none() {
        bail!("--workload file needs --file <path>");
    }
    Ok(WorkloadSpec {
        file: file.clone(),
        ..WorkloadSpec::new(kind, n, seed)
    })
}

/// Returns whether every run was clean.
fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::OrientBench(a) => {
            let spec = workload_spec(a.workload, a.n, a.seed, &a.file)?;
            let variants = a.algo.variants()?;
            let rows = run_orient_variants(&spec, a.algo.config(variants[0], a.n), &variants, a.reps)?;
            a.out.emit(&rows)?;
            Ok(rows.iter().all(|r| r.failures == 0))
        }
        Cmd::CuckooBench(a) => {
            let params = CuckooParams {
                c: a.c,
                d: a.d,
                provider: a.provider,
                oracle: a.oracle,
                ..CuckooParams::new(a.n, a.epsilon, a.stash)
            };
            let kind = match a.workload.as_str() {
                "churn" => ScriptKind::Churn {
                    load: a.load,
                    ops: a.ops,
                    query_frac: a.query_frac,
                },
                "insert-only" => ScriptKind::InsertOnly { load: a.load },
                other => bail!("unknown script workload {other:?}, expected churn or insert-only"),
            };
            let script = a.script.as_ref().map(load_script).transpose()?;
            let rows = run_cuckoo_trials(script.as_deref(), kind, &params, a.seed, a.reps)?;
            a.out.emit(&rows)?;
            Ok(rows.iter().all(|r| !r.flagged()))
        }
        Cmd::Scaling(a) => {
            let variants = a.algo.variants()?;
            if variants.len() != 1 {
                bail!("scaling takes a single --algo");
            }
            let rows = scaling_report(&a.n, a.algo.config(variants[0], 0), a.workload, a.seed, a.reps)?;
            a.out.emit(&rows)?;
            Ok(rows.iter().all(|r| r.failures == 0))
        }
        Cmd::Verify(a) => {
            let mut out = io::stdout().lock();
            let mut ok = true;
            if let Some(path) = &a.script {
                let ops = load_script(path)?;
                let params = CuckooParams {
                    c: a.algo.c,
                    d: a.algo.d,
                    provider: a.provider,
                    ..CuckooParams::new(a.n, a.epsilon, a.stash)
                };
                let report = verify_script(&ops, &params, a.seed);
                writeln!(out, "script {} (n = {}, eps = {}, stash = {})", path.display(), a.n, a.epsilon, a.stash)?;
                for line in &report.lines {
                    writeln!(out, "  {line}")?;
                }
                ok &= report.ok;
            } else {
                let spec = workload_spec(a.workload, a.n, a.seed, &a.file)?;
                let edges = generate_workload(&spec)?;
                for variant in a.algo.variants()? {
                    let config = a.algo.config(variant, a.n).with_seed(algo_seed(a.seed));
                    let report = verify_edges(&edges, config);
                    writeln!(out, "{} on {} (n = {}, seed = {})", variant.name(), spec.kind, a.n, a.seed)?;
                    for line in &report.lines {
                        writeln!(out, "  {line}")?;
                    }
                    ok &= report.ok;
                }
            }
            writeln!(out, "{}", if ok { "ok" } else { "violations found" })?;
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
