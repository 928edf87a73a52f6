use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use omnivocal::commands::{self, OmnivocalityMethod, Output, RunConfig};
use omnivocal::hunt::{run_hunt, write_log, HuntConfig};
use omnivocal::io::{load_graph, load_source};
use omnivocal::report::Render;
use omnivocal::CliError;
use omnivocal_core::{complete_graph, Classification, MinimizerMethod, Normalization, SealedSource};
use serde_json::json;

/// Secret-key capacity and omnivocality analysis for multiterminal sources.
#[derive(Parser)]
#[command(name = "omnivocal", version)]
struct Cli {
    /// Emit a single JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Tie tolerance for comparisons between computed quantities.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Rescale source probabilities to sum to one instead of rejecting them.
    #[arg(long, global = true)]
    renormalize: bool,
    /// Compensated entropy sums and tightened LP pivoting.
    #[arg(long, global = true)]
    precise: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SingletonMethod {
    Brute,
    Prop1,
}

#[derive(Subcommand)]
enum Command {
    /// Secret-key capacity by partition minimization.
    Capacity { file: PathBuf },
    /// Exact capacity and omnivocality of a PIN graph.
    Pin {
        #[arg(required_unless_present = "complete", conflicts_with = "complete")]
        file: Option<PathBuf>,
        /// Use the complete graph on this many vertices.
        #[arg(long)]
        complete: Option<usize>,
    },
    /// Is the singleton partition the (unique) minimizer?
    Singleton {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "prop1")]
        method: SingletonMethod,
    },
    /// Capacity when only the given terminals speak.
    Silent {
        file: PathBuf,
        /// Comma-separated 1-indexed terminals, e.g. 1,3.
        #[arg(long)]
        speakers: String,
    },
    /// Whether every terminal must speak to reach capacity.
    Omnivocality {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        method: OmnivocalityMethod,
    },
    /// Isentropy profile and the g(k)/k monotonicity check.
    Isentropy { file: PathBuf },
    /// Random search comparing the minimizer condition with the LP decision.
    Hunt {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// One alphabet size for all terminals, or a comma-separated list.
        #[arg(long, default_value = "2")]
        alphabet: String,
        /// JSONL log path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
}

fn parse_alphabet(text: &str, m: usize) -> Result<Vec<u32>, CliError> {
    let sizes = text
        .split(',')
        .map(|s| s.trim().parse::<u32>().ok().filter(|&n| n > 0))
        .collect::<Option<Vec<u32>>>()
        .ok_or_else(|| CliError::Input(format!("--alphabet {text:?}: expected positive integers")))?;
    match sizes.len() {
        1 => Ok(vec![sizes[0]; m]),
        n if n == m => Ok(sizes),
        n => Err(CliError::Input(format!("--alphabet lists {n} sizes for m = {m}"))),
    }
}

fn run(cli: Cli) -> Result<Output, CliError> {
    let mut config = RunConfig::new(cli.tol)?;
    if cli.precise {
        config = config.precise();
    }
    if cli.renormalize {
        config.normalization = Normalization::Renormalize;
    }
    let open = |file: &PathBuf| -> Result<SealedSource, CliError> {
        config.seal(load_source(file, config.normalization)?)
    };
    match &cli.command {
        Command::Capacity { file } => commands::capacity(&open(file)?, &config),
        Command::Pin { file, complete } => {
            let graph = match (file, complete) {
                (Some(f), _) => load_graph(f)?,
                (None, Some(m)) => complete_graph(*m)?,
                (None, None) => unreachable!("clap requires one of them"),
            };
            commands::pin(&graph, &config)
        }
        Command::Singleton { file, method } => {
            let method = match method {
                SingletonMethod::Brute => MinimizerMethod::Brute,
                SingletonMethod::Prop1 => MinimizerMethod::Prop1,
            };
            commands::singleton(&open(file)?, method, &config)
        }
        Command::Silent { file, speakers } => commands::silent(&open(file)?, speakers, &config),
        Command::Omnivocality { file, method } => commands::omnivocality(&open(file)?, *method, &config),
        Command::Isentropy { file } => commands::isentropy(&open(file)?, &config),
        Command::Hunt { m, trials, seed, alphabet, out, jobs } => {
            let hunt = HuntConfig {
                m: *m,
                trials: *trials,
                seed: *seed,
                alphabet: parse_alphabet(alphabet, *m)?,
                jobs: *jobs,
                tol: config.tol,
                lp: config.lp,
            };
            let summary = run_hunt(&hunt)?;
            if let Some(path) = out {
                let io_err = |source| CliError::Io { path: path.clone(), source };
                let file = File::create(path).map_err(io_err)?;
                write_log(&summary.records, BufWriter::new(file)).map_err(io_err)?;
            }
            let counts: Vec<String> =
                summary.counts.iter().map(|(c, n)| format!("{}: {n}", c.name())).collect();
            let mut text = format!("trials: {}; {}", summary.records.len(), counts.join("; "));
            if let Some(path) = out {
                text.push_str(&format!("\nlog: {}", path.display()));
            }
            let candidates = summary.count(Classification::CandidateCounterexample);
            if candidates > 0 {
                text.push_str(&format!("\n{candidates} candidate line(s) carry the full source for review"));
            }
            let mut json = json!({
                "trials": summary.records.len(),
                "m": m,
                "seed": seed,
                "log": out.as_ref().map(|p| p.display().to_string()),
            });
            for (c, n) in &summary.counts {
                json[c.name()] = json!(n);
            }
            let max_capacity = summary.records.iter().map(|r| r.capacity).fold(0.0, f64::max);
            json["max_capacity"] = max_capacity.json();
            Ok(Output { text, json })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(output) => {
            match writeln!(std::io::stdout(), "{}", output.render(json)) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    eprintln!("error: writing output: {e}");
                    ExitCode::from(2)
                }
                _ => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
