use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::json;

use lattice_simplex::ehrhart::HStarVector;
use lattice_simplex::family::verify_family;
use lattice_simplex::json::{ints, Int};
use lattice_simplex::lefschetz::{graded_basis, multiplication_patterns};
use lattice_simplex::search::{run_search_to_path, OutputFormat, SearchConfig, SearchError, DEFAULT_WL_TRIALS};
use lattice_simplex::simplex::SimplexJson;
use lattice_simplex::strategy::{hstar_methods, rank_estimators};
use lattice_simplex::weights::{
    enumerate_reduced_weights, parse_weight_list, sample_random_weights_bounded, type_decompositions,
};
use lattice_simplex::{
    build_delta_q, free_sum, is_integrally_closed, simplex_type, weak_lefschetz_verdict, Error, LatticeSimplex,
    SimplexType, WeightVector,
};

const EXIT_INPUT: u8 = 1;
const EXIT_INVARIANT: u8 = 2;
const EXIT_CLAIM: u8 = 3;

#[derive(Parser)]
#[command(name = "lattice-simplex", version, about = "Reflexive lattice simplices: Ehrhart h*, integral closure, weak Lefschetz")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduced weight vectors satisfying the admissibility condition.
    Weights {
        #[command(subcommand)]
        command: WeightsCommand,
    },
    /// Build a simplex from weights or read off its type.
    Simplex {
        #[command(subcommand)]
        command: SimplexCommand,
    },
    /// h*-vector of a simplex.
    Hstar {
        #[command(flatten)]
        input: SimplexInput,
        /// Cross-check against brute-force dilate counting.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value = "fpp")]
        method: String,
    },
    /// Integral closure test with a witness on failure.
    IdpCheck {
        #[command(flatten)]
        input: SimplexInput,
    },
    /// Weak Lefschetz verdict for a reflexive simplex.
    WlCheck {
        #[command(flatten)]
        input: SimplexInput,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_WL_TRIALS)]
        trials: usize,
        /// Also report per-degree ranks from this estimator
        /// (structural, random-prime, symbolic).
        #[arg(long)]
        ranks: Option<String>,
    },
    /// Free sum of two weight-built simplices at vertex INDEX of the right one.
    Freesum {
        #[arg(long)]
        left_weights: String,
        #[arg(long)]
        right_weights: String,
        #[arg(long)]
        index: usize,
    },
    /// All ways of writing a type as a composition.
    DecomposeType {
        #[arg(long = "type")]
        q_red: String,
        #[arg(long, default_value = "1")]
        lambda: BigInt,
    },
    /// Seeded random search writing one record per accepted candidate.
    Search(SearchArgs),
    /// Check the five claims for the family (1, d, d+1, ..., d+1).
    VerifyFamily {
        #[arg(long)]
        d: usize,
    },
}

#[derive(Subcommand)]
enum WeightsCommand {
    Enum {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        json: bool,
    },
    Sample {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        max_volume: Option<BigInt>,
    },
}

#[derive(Subcommand)]
enum SimplexCommand {
    Build {
        #[arg(long)]
        weights: String,
    },
    Type {
        #[arg(long)]
        vertices_file: PathBuf,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SimplexInput {
    /// Comma-separated admissible weights; the simplex is Delta_Q.
    #[arg(long)]
    weights: Option<String>,
    /// JSON file: {"dim": .., "vertices": [[..], ..]} or a bare vertex list.
    #[arg(long)]
    vertices_file: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Jsonl,
    Csv,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    count: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    require_idp: bool,
    #[arg(long)]
    skip_decomposable: bool,
    #[arg(long)]
    skip_wl: bool,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "jsonl")]
    format: Format,
    /// 0 uses every core.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[arg(long, default_value_t = DEFAULT_WL_TRIALS)]
    wl_trials: usize,
    /// Skip sampled weights whose sum exceeds this.
    #[arg(long)]
    max_volume: Option<BigInt>,
    /// Fill elapsed_ms (output is then no longer byte-reproducible).
    #[arg(long)]
    record_timing: bool,
    /// Summary as JSON instead of text.
    #[arg(long)]
    json_summary: bool,
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure {
            code: EXIT_INPUT,
            error: e.into(),
        }
    }
}

fn fail(code: u8, error: anyhow::Error) -> Failure {
    Failure { code, error }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_INPUT) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure { code, error }) => {
            eprintln!("error: {error:#}");
            ExitCode::from(code)
        }
    }
}

fn print_json<T: Serialize>(v: &T) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string(v)?);
    Ok(())
}

fn weights_arg(text: &str) -> anyhow::Result<WeightVector> {
    Ok(WeightVector::from_unsorted(parse_weight_list(text)?)?)
}

fn delta_q(text: &str) -> anyhow::Result<LatticeSimplex> {
    Ok(build_delta_q(&weights_arg(text)?)?)
}

fn read_simplex(path: &Path) -> anyhow::Result<LatticeSimplex> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let json: SimplexJson = if value.is_array() {
        let vertices: Vec<Vec<Int>> = serde_json::from_value(value)?;
        SimplexJson {
            dim: vertices.first().map_or(0, Vec::len),
            vertices,
        }
    } else {
        serde_json::from_value(value)?
    };
    Ok(LatticeSimplex::from_json(json)?)
}

impl SimplexInput {
    fn load(&self) -> anyhow::Result<LatticeSimplex> {
        match (&self.weights, &self.vertices_file) {
            (Some(w), _) => delta_q(w),
            (None, Some(path)) => read_simplex(path),
            (None, None) => bail!("one of --weights or --vertices-file is required"),
        }
    }
}

fn hstar_json(h: &HStarVector) -> serde_json::Value {
    json!({
        "hstar": h,
        "unimodal": h.is_unimodal(),
        "palindromic": h.is_palindromic(),
    })
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Weights { command } => match command {
            WeightsCommand::Enum { dim, json } => {
                if dim < 1 {
                    return Err(Error::Precondition("dimension must be at least 1".into()).into());
                }
                let all = enumerate_reduced_weights(dim);
                if json {
                    let rows: Vec<Vec<Int>> = all.iter().map(|w| ints(w.entries())).collect();
                    print_json(&rows)?;
                } else {
                    for w in &all {
                        println!("{w}");
                    }
                }
            }
            WeightsCommand::Sample {
                dim,
                count,
                seed,
                max_volume,
            } => {
                if dim < 1 {
                    return Err(Error::Precondition("dimension must be at least 1".into()).into());
                }
                for w in sample_random_weights_bounded(dim, count, seed, max_volume.as_ref()) {
                    println!("{w}");
                }
            }
        },
        Command::Simplex { command } => match command {
            SimplexCommand::Build { weights } => print_json(&delta_q(&weights)?.to_json())?,
            SimplexCommand::Type { vertices_file } => {
                let s = read_simplex(&vertices_file)?;
                print_json(&simplex_type(&s)?.to_json())?;
            }
        },
        Command::Hstar { input, oracle, method } => {
            let s = input.load()?;
            let methods = hstar_methods();
            let h = methods.get(&method)?.compute(&s)?;
            let mut out = hstar_json(&h);
            if oracle {
                let other = if method == "interpolation" { "fpp" } else { "interpolation" };
                let check = methods.get(other)?.compute(&s)?;
                out["oracle"] = json!({ "method": other, "hstar": check, "agree": check == h });
                if check != h {
                    print_json(&out)?;
                    return Err(fail(
                        EXIT_INVARIANT,
                        anyhow::anyhow!("h* methods disagree: {method} {h:?}, {other} {check:?}"),
                    ));
                }
            }
            print_json(&out)?;
        }
        Command::IdpCheck { input } => {
            let s = input.load()?;
            print_json(&is_integrally_closed(&s)?.to_json())?;
        }
        Command::WlCheck {
            input,
            seed,
            trials,
            ranks,
        } => {
            let s = input.load()?;
            let report = weak_lefschetz_verdict(&s, seed, trials)?;
            let mut out = serde_json::to_value(report.to_json())?;
            if let Some(name) = ranks {
                let registry = rank_estimators();
                let estimator = registry.get(&name)?;
                let patterns = multiplication_patterns(&graded_basis(&s)?);
                let per_degree: Vec<_> = patterns
                    .iter()
                    .map(|m| {
                        json!({
                            "degree": m.degree,
                            "target": m.target_rank(),
                            "rank": estimator.rank(m, seed, trials),
                        })
                    })
                    .collect();
                out["ranks"] = json!({ "estimator": name, "degrees": per_degree });
            }
            print_json(&out)?;
        }
        Command::Freesum {
            left_weights,
            right_weights,
            index,
        } => {
            let p = delta_q(&left_weights)?;
            let q = delta_q(&right_weights)?;
            let s = free_sum(&p, &q, index)?;
            let json = s.to_json();
            print_json(&json!({
                "dim": json.dim,
                "vertices": json.vertices,
                "type": simplex_type(&s)?.to_json(),
            }))?;
        }
        Command::DecomposeType { q_red, lambda } => {
            let t = SimplexType::new(weights_arg(&q_red)?, lambda)?;
            let all: Vec<_> = type_decompositions(&t).iter().map(|d| d.to_json()).collect();
            print_json(&all)?;
        }
        Command::Search(args) => search(args)?,
        Command::VerifyFamily { d } => {
            let report = verify_family(d)?;
            for c in &report.claims {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            let failed: Vec<&str> = report.failed().iter().map(|c| c.name).collect();
            if !failed.is_empty() {
                return Err(fail(
                    EXIT_CLAIM,
                    anyhow::anyhow!("family d={d}: failed claims: {}", failed.join(", ")),
                ));
            }
        }
    }
    Ok(())
}

fn search(args: SearchArgs) -> Result<(), Failure> {
    let mut config = SearchConfig::new(args.dim, args.count, args.seed);
    config.require_idp = args.require_idp;
    config.skip_decomposable = args.skip_decomposable;
    config.skip_wl = args.skip_wl;
    config.format = match args.format {
        Format::Jsonl => OutputFormat::Jsonl,
        Format::Csv => OutputFormat::Csv,
    };
    config.workers = args.workers;
    config.wl_trials = args.wl_trials;
    config.max_volume = args.max_volume;
    config.record_timing = args.record_timing;

    match run_search_to_path(&config, &args.out) {
        Ok(summary) => {
            if args.json_summary {
                print_json(&json!({
                    "dim": summary.dim,
                    "seed": summary.seed,
                    "accepted": summary.accepted,
                    "candidates": summary.candidates,
                    "skipped_decomposable": summary.skipped_decomposable,
                    "skipped_not_idp": summary.skipped_not_idp,
                    "skipped_too_large": summary.skipped_too_large,
                    "unimodal": summary.unimodal,
                    "unimodality_fraction": summary.unimodality_fraction(),
                    "idp": summary.idp,
                    "type_decomposable": summary.type_decomposable,
                    "wl": summary.wl,
                    "non_unimodal": summary.non_unimodal,
                }))?;
            } else {
                println!("{summary}");
            }
            Ok(())
        }
        Err(e @ SearchError::Invariant { .. }) => Err(fail(EXIT_INVARIANT, e.into())),
        Err(e) => Err(e.into()),
    }
}
