use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use complrover::report::{run, OutputFormat, Subcommand as Command, WorkspaceConfig};
use complrover::oracle::{DEFAULT_CANDIDATE_CAP, DEFAULT_FRESH_CONSTANTS};

/// Evaluate SPARQL queries with NOT EXISTS over RDF graphs and classify
/// their answers using completeness statements.
#[derive(Parser, Debug)]
#[command(name = "complrover", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Evaluate the query and print its solutions.
    Eval(Opts),
    /// Evaluate and classify the answers as certain and/or complete.
    Classify(Opts),
    /// Decide whether the statements entail the statement in --query.
    Entails(Opts),
    /// Classify, then cross-check against bounded brute-force answers.
    Oracle(Opts),
}

#[derive(Args, Debug)]
struct Opts {
    /// Graph in the N-Triples subset.
    #[arg(long)]
    graph: PathBuf,
    /// Query file (for `entails`, a single COMPLETE statement).
    #[arg(long)]
    query: PathBuf,
    /// Completeness statements.
    #[arg(long)]
    statements: Option<PathBuf>,
    /// Explicit candidate pool for `oracle`, in N-Triples.
    #[arg(long)]
    candidates: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_FRESH_CONSTANTS)]
    fresh_constants: usize,
    #[arg(long, default_value_t = DEFAULT_CANDIDATE_CAP)]
    candidate_cap: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

fn seed_from_env() -> Result<Option<u64>, String> {
    match std::env::var("COMPLROVER_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| format!("COMPLROVER_SEED must be an unsigned integer, got `{s}`")),
        Err(_) => Ok(None),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, opts) = match cli.command {
        Cmd::Eval(o) => (Command::Eval, o),
        Cmd::Classify(o) => (Command::Classify, o),
        Cmd::Entails(o) => (Command::Entails, o),
        Cmd::Oracle(o) => (Command::Oracle, o),
    };
    let seed = match seed_from_env() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let format = match opts.format {
        Format::Json => OutputFormat::Json,
        Format::Text => OutputFormat::Text,
    };
    let config = WorkspaceConfig {
        graph_path: opts.graph,
        statements_path: opts.statements,
        query_path: opts.query,
        candidates_path: opts.candidates,
        fresh_constants: opts.fresh_constants,
        candidate_cap: opts.candidate_cap,
        output_format: format,
        seed,
    };

    match run(&config, command) {
        Ok(report) => {
            print!("{}", report.render(format));
            for d in &report.diagnostics {
                eprintln!("warning: {d}");
            }
            let code = report.exit_code();
            if code != 0 {
                eprintln!("error: oracle contradicts a classifier guarantee");
            }
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
