//! `sl2tree`: classify representations, compute length spectra, and query
//! the Bruhat–Tits tree from the command line.
//!
//! Exit status is 0 on success, 1 when an input fails validation or a
//! computation fails, and 2 for usage errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sl2tree_core::classify::{classify, DEFAULT_SATURATION_CAP};
use sl2tree_core::isometry::axis_segment;
use sl2tree_core::repfile::{parse_representation, RepresentationFile};
use sl2tree_core::spectrum::{length_of, spectrum, DEFAULT_MAX_WORDS};
use sl2tree_core::traces::{TraceCalculus, DEFAULT_REWRITE_BUDGET};
use sl2tree_core::tree::{distance, geodesic, tree_ball, DEFAULT_MAX_NODES};
use sl2tree_core::{Error, Presentation, PrimeContext, Representation, TreeVertex};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] Error),
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser)]
#[command(
    name = "sl2tree",
    version,
    about = "SL2 representations acting on the Bruhat-Tits tree"
)]
struct Cli {
    /// Worker threads for parallel enumeration (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the classification report of a representation file.
    Classify {
        file: PathBuf,
        /// Lattice saturation rounds.
        #[arg(long, default_value_t = DEFAULT_SATURATION_CAP)]
        max_iterations: usize,
    },
    /// Length spectrum on the ball of freely reduced words.
    Spectrum {
        file: PathBuf,
        #[arg(long)]
        max_len: usize,
        /// Write the TSV here instead of standard output.
        #[arg(long)]
        tsv: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_MAX_WORDS)]
        max_words: usize,
    },
    /// Translation length of one word.
    Length { file: PathBuf, word: String },
    /// Tree queries.
    #[command(subcommand)]
    Tree(TreeCommand),
    /// Integer polynomial in fundamental traces for a word.
    TracePoly {
        word: String,
        /// Generator names, comma separated.
        #[arg(long, default_value = "a,b", conflicts_with = "file")]
        generators: String,
        /// Take generator names from this file and also print the value.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Rewriting budget.
        #[arg(long, default_value_t = DEFAULT_REWRITE_BUDGET)]
        max_iterations: usize,
    },
    /// Re-emit a representation file in canonical form.
    Normalize { file: PathBuf },
}

#[derive(Args)]
struct PrimeArg {
    #[arg(long)]
    prime: u64,
}

#[derive(Subcommand)]
enum TreeCommand {
    /// Vertices (or DOT graph) of a ball.
    Ball {
        #[command(flatten)]
        prime: PrimeArg,
        #[arg(long, default_value = "(0; 0)")]
        center: String,
        #[arg(long)]
        radius: u32,
        #[arg(long)]
        dot: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_NODES)]
        max_nodes: usize,
    },
    /// Distance between two vertices.
    Distance {
        #[command(flatten)]
        prime: PrimeArg,
        u: String,
        v: String,
    },
    /// Vertices on the geodesic between two vertices.
    Geodesic {
        #[command(flatten)]
        prime: PrimeArg,
        u: String,
        v: String,
    },
    /// A segment of the axis of a hyperbolic word.
    Axis {
        file: PathBuf,
        word: String,
        #[arg(long, default_value_t = 2)]
        window: u32,
    },
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_owned(),
        source,
    })
}

fn load(path: &Path) -> CliResult<Representation> {
    Ok(parse_representation(&read(path)?)?)
}

fn vertex(text: &str, ctx: PrimeContext) -> CliResult<TreeVertex> {
    Ok(TreeVertex::parse(text, ctx)?)
}

fn run(command: Command) -> CliResult<String> {
    match command {
        Command::Classify {
            file,
            max_iterations,
        } => {
            let rep = load(&file)?;
            Ok(classify(&rep, max_iterations)?.to_kv(rep.presentation()))
        }
        Command::Spectrum {
            file,
            max_len,
            tsv,
            max_words,
        } => {
            let rep = load(&file)?;
            let text = spectrum(&rep, max_len, max_words)?.to_tsv();
            match tsv {
                Some(path) => {
                    fs::write(&path, text).map_err(|source| CliError::Write { path, source })?;
                    Ok(String::new())
                }
                None => Ok(text),
            }
        }
        Command::Length { file, word } => {
            let rep = load(&file)?;
            let w = rep.presentation().parse_word(&word)?;
            Ok(format!("{}\n", length_of(&rep, &w)?))
        }
        Command::Tree(t) => run_tree(t),
        Command::TracePoly {
            word,
            generators,
            file,
            max_iterations,
        } => {
            let (presentation, rep) = match file {
                Some(path) => {
                    let rep = load(&path)?;
                    (rep.presentation().clone(), Some(rep))
                }
                None => {
                    let names = generators.split(',').map(|s| s.trim().to_owned()).collect();
                    (Presentation::free_named(names)?, None)
                }
            };
            let w = presentation.parse_word(&word)?;
            let poly = TraceCalculus::with_budget(presentation.rank(), max_iterations)
                .trace_polynomial(&w)?;
            let mut out = format!("{poly}\n");
            if let Some(rep) = rep {
                out.push_str(&format!(
                    "value={}\n",
                    poly.evaluate(&rep.fundamental_traces())
                ));
            }
            Ok(out)
        }
        Command::Normalize { file } => {
            let rep = load(&file)?;
            Ok(RepresentationFile::from_representation(&rep).to_json())
        }
    }
}

fn run_tree(command: TreeCommand) -> CliResult<String> {
    match command {
        TreeCommand::Ball {
            prime,
            center,
            radius,
            dot,
            max_nodes,
        } => {
            let ctx = PrimeContext::new(prime.prime)?;
            let ball = tree_ball(&vertex(&center, ctx)?, radius, max_nodes)?;
            if dot {
                Ok(ball.to_dot())
            } else {
                Ok(ball.vertices.iter().map(|v| format!("{v}\n")).collect())
            }
        }
        TreeCommand::Distance { prime, u, v } => {
            let ctx = PrimeContext::new(prime.prime)?;
            Ok(format!(
                "{}\n",
                distance(&vertex(&u, ctx)?, &vertex(&v, ctx)?)?
            ))
        }
        TreeCommand::Geodesic { prime, u, v } => {
            let ctx = PrimeContext::new(prime.prime)?;
            let path = geodesic(&vertex(&u, ctx)?, &vertex(&v, ctx)?)?;
            Ok(path.iter().map(|x| format!("{x}\n")).collect())
        }
        TreeCommand::Axis { file, word, window } => {
            let rep = load(&file)?;
            let w = rep.presentation().parse_word(&word)?;
            Ok(axis_segment(&rep.evaluate(&w)?, window)?.to_text())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
