//! Command-line front end.
//!
//! Exit status: 0 on success, 2 for bad input (unknown ids or contexts,
//! parse or validation failures), 1 for IO and other runtime failures.

use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ctxsim_core::{ApplicationContext, Engine, Ontology};

use crate::case_study::{self, PART_CONTEXT_FILE, USAGE_CONTEXT_FILE};
use crate::format::{self, LoadError};
use crate::render::{self, MatrixRendering, RankingView};

#[derive(Debug, Parser)]
#[command(
    name = "ctxsim",
    version,
    about = "Context-dependent similarity between ontology instances"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank every other instance of the query's class by similarity.
    Rank(RankArgs),
    /// Full similarity matrix over the instances a context applies to.
    Matrix(MatrixArgs),
    /// Check an ontology and any number of contexts.
    Validate(ValidateArgs),
    /// Run the HTTP service.
    Serve(ServeArgs),
}

#[derive(Debug, clap::Args)]
pub struct OntologyArg {
    /// Ontology file; the bundled Alessi ontology when omitted.
    #[arg(long, value_name = "FILE")]
    pub ontology: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RankFormat {
    Table,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MatrixFormat {
    Csv,
    Pgm,
}

#[derive(Debug, clap::Args)]
pub struct RankArgs {
    #[command(flatten)]
    pub ontology: OntologyArg,
    /// Context file, or `part` / `usage` for a bundled one.
    #[arg(long)]
    pub context: String,
    #[arg(long)]
    pub query: String,
    #[arg(long, value_enum, default_value_t = RankFormat::Table)]
    pub format: RankFormat,
}

#[derive(Debug, clap::Args)]
pub struct MatrixArgs {
    #[command(flatten)]
    pub ontology: OntologyArg,
    #[arg(long)]
    pub context: String,
    #[arg(long, value_enum, default_value_t = MatrixFormat::Csv)]
    pub format: MatrixFormat,
    /// Write here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub ontology: OntologyArg,
    #[arg(long)]
    pub context: Vec<String>,
}

#[derive(Debug, clap::Args)]
pub struct ServeArgs {
    #[command(flatten)]
    pub ontology: OntologyArg,
    /// Contexts to preload; both bundled contexts when omitted.
    #[arg(long)]
    pub context: Vec<String>,
    #[arg(long, default_value = "127.0.0.1:8080")]
    pub bind: SocketAddr,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad input; exit status 2.
    Input(Vec<String>),
    /// Exit status 1.
    Runtime(String),
}

impl CliError {
    fn input(msg: impl Into<String>) -> Self {
        CliError::Input(vec![msg.into()])
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Input(_) => ExitCode::from(2),
            CliError::Runtime(_) => ExitCode::from(1),
        }
    }

    pub fn messages(&self) -> Vec<String> {
        match self {
            CliError::Input(m) => m.clone(),
            CliError::Runtime(m) => vec![m.clone()],
        }
    }
}

impl From<ctxsim_core::Error> for CliError {
    fn from(err: ctxsim_core::Error) -> Self {
        CliError::input(err.to_string())
    }
}

fn io_error(what: &Path, err: std::io::Error) -> CliError {
    CliError::Runtime(format!("{}: {err}", what.display()))
}

fn load_error(source: &str, err: LoadError) -> CliError {
    CliError::Input(
        err.diagnostics()
            .into_iter()
            .map(|d| format!("{source}: {d}"))
            .collect(),
    )
}

fn load_ontology(arg: &OntologyArg) -> Result<Ontology, CliError> {
    match &arg.ontology {
        None => case_study::load_case_study()
            .map(|c| c.ontology)
            .map_err(|e| CliError::Runtime(e.to_string())),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
            format::load_ontology(&text).map_err(|e| load_error(&path.display().to_string(), e))
        }
    }
}

fn bundled_context(name: &str) -> Option<&'static str> {
    match name {
        "part" | PART_CONTEXT_FILE => case_study::resource(PART_CONTEXT_FILE),
        "usage" | USAGE_CONTEXT_FILE => case_study::resource(USAGE_CONTEXT_FILE),
        _ => None,
    }
}

/// A path to a context file, or the name of a bundled context when no such
/// file exists.
pub fn load_context(arg: &str, ontology: &Ontology) -> Result<ApplicationContext, CliError> {
    let path = Path::new(arg);
    let text = if path.is_file() {
        std::fs::read_to_string(path).map_err(|e| io_error(path, e))?
    } else if let Some(text) = bundled_context(arg) {
        text.to_string()
    } else {
        return Err(CliError::input(format!(
            "context `{arg}` is neither a file nor a bundled context (part, usage)"
        )));
    };
    format::parse_context(&text, ontology).map_err(|e| load_error(arg, e))
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| io_error(p, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Runtime(format!("stdout: {e}")))
        }
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Rank(args) => rank(args),
        Command::Matrix(args) => matrix(args),
        Command::Validate(args) => validate(args),
        Command::Serve(args) => serve(args),
    }
}

fn rank(args: RankArgs) -> Result<(), CliError> {
    let ontology = load_ontology(&args.ontology)?;
    let context = load_context(&args.context, &ontology)?;
    let ranking = Engine::new(&ontology).rank(&context, &args.query)?;
    let text = match args.format {
        RankFormat::Table => render::ranking_table(&ranking),
        RankFormat::Json => {
            let mut s = serde_json::to_string_pretty(&RankingView::from(&ranking))
                .map_err(|e| CliError::Runtime(e.to_string()))?;
            s.push('\n');
            s
        }
    };
    write_output(None, text.as_bytes())
}

fn matrix(args: MatrixArgs) -> Result<(), CliError> {
    let ontology = load_ontology(&args.ontology)?;
    let context = load_context(&args.context, &ontology)?;
    let ids = crate::matrix_ids(&ontology, &context);
    let m = crate::par_similarity_matrix(&Engine::new(&ontology), &context, &ids)?;
    let bytes = match args.format {
        MatrixFormat::Csv => render::matrix_csv(&m).into_bytes(),
        MatrixFormat::Pgm => MatrixRendering::new(&m).to_pgm(),
    };
    write_output(args.output.as_deref(), &bytes)
}

fn validate(args: ValidateArgs) -> Result<(), CliError> {
    let ontology = load_ontology(&args.ontology)?;
    let mut problems = Vec::new();
    for arg in &args.context {
        match load_context(arg, &ontology) {
            Ok(_) => {}
            Err(CliError::Input(msgs)) => problems.extend(msgs),
            Err(e) => return Err(e),
        }
    }
    if problems.is_empty() {
        write_output(None, b"OK\n")
    } else {
        Err(CliError::Input(problems))
    }
}

fn serve(args: ServeArgs) -> Result<(), CliError> {
    let ontology = load_ontology(&args.ontology)?;
    let names = if args.context.is_empty() {
        vec!["part".to_string(), "usage".to_string()]
    } else {
        args.context
    };
    let contexts = names
        .iter()
        .map(|n| load_context(n, &ontology))
        .collect::<Result<Vec<_>, _>>()?;
    let state = crate::server::AppState::new(ontology, contexts);
    let runtime = tokio::runtime::Runtime::new().map_err(|e| CliError::Runtime(e.to_string()))?;
    runtime
        .block_on(crate::server::serve(args.bind, state))
        .map_err(|e| CliError::Runtime(format!("{}: {e}", args.bind)))
}
