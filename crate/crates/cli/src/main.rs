use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use cnlwiki::grammar::tokenize;
use cnlwiki::reasoner::{Reasoner, DEFAULT_NODE_BUDGET};
use cnlwiki::{corpus, WikiState};

/// Batch tool for wiki stores.
#[derive(Debug, Parser)]
#[command(name = "cnlwiki", version)]
struct Cli {
    /// Store file.
    #[arg(long, global = true)]
    store: Option<PathBuf>,
    /// Tableau node limit per reasoning call.
    #[arg(long, global = true, default_value_t = DEFAULT_NODE_BUDGET)]
    node_budget: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Apply a corpus file to the store (created if missing) and print a line-by-line report.
    Import { corpus: PathBuf },
    /// Print consistency, hierarchy, memberships and counts.
    Report,
    /// Answer a question against the store.
    Ask { question: String },
    /// Write the store as a corpus.
    Export {
        /// Output file; stdout when omitted.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

fn store(cli: &Cli) -> Result<&Path> {
    cli.store.as_deref().context("--store <path> is required")
}

fn load(cli: &Cli) -> Result<WikiState> {
    let path = store(cli)?;
    let state = WikiState::load(path).with_context(|| format!("loading {}", path.display()))?;
    Ok(state.with_reasoner(Reasoner::new(cli.node_budget)))
}

/// `Ok(false)` when the command ran but reported errors.
fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Import { corpus: file } => {
            let path = store(cli)?;
            let mut state = WikiState::open(path)
                .with_context(|| format!("loading {}", path.display()))?
                .with_reasoner(Reasoner::new(cli.node_budget));
            let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
            let report = corpus::import(&mut state, &text);
            print!("{report}");
            state.save(path)?;
            Ok(report.is_ok())
        }
        Command::Report => {
            print!("{}", corpus::report(&load(cli)?)?);
            Ok(true)
        }
        Command::Ask { question } => {
            let state = load(cli)?;
            let tokens = tokenize(question, state.lexicon())?;
            for answer in state.ask(&tokens)? {
                println!("{}", answer.text);
            }
            Ok(true)
        }
        Command::Export { out } => {
            let text = corpus::export(&load(cli)?);
            match out {
                Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
                None => print!("{text}"),
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
