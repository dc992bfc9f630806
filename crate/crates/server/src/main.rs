use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{bail, Context};
use clap::Parser;
use cnlwiki::reasoner::{Reasoner, DEFAULT_NODE_BUDGET};
use cnlwiki::Wiki;

/// Serves a wiki store over HTTP.
#[derive(Debug, Parser)]
#[command(name = "cnlwiki-server", version)]
struct Args {
    /// Store file; created on the first change if missing. CNLWIKI_STORE takes precedence.
    #[arg(long)]
    store: Option<PathBuf>,
    #[arg(long, default_value = "127.0.0.1:8710")]
    bind: SocketAddr,
    /// Directory with the editor bundle, served at `/`.
    #[arg(long = "static")]
    static_dir: Option<PathBuf>,
    /// Tableau node limit per reasoning call.
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    node_budget: usize,
}

#[tokio::main]
async fn main() -> anyhow::Result<()> {
    let args = Args::parse();
    let store = match std::env::var_os("CNLWIKI_STORE") {
        Some(path) if !path.is_empty() => PathBuf::from(path),
        _ => match args.store {
            Some(path) => path,
            None => bail!("no store given: pass --store <path> or set CNLWIKI_STORE"),
        },
    };
    let wiki = Wiki::open(&store, Reasoner::new(args.node_budget))
        .with_context(|| format!("opening {}", store.display()))?;
    let app = cnlwiki_server::router(Arc::new(wiki), args.static_dir);
    let listener = tokio::net::TcpListener::bind(args.bind).await.with_context(|| format!("binding {}", args.bind))?;
    eprintln!("serving {} on http://{}", store.display(), listener.local_addr()?);
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
