use std::net::IpAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use mathworld_server::{serve, ServiceConfig};
use tracing_subscriber::EnvFilter;

/// Arithmetic practice game service.
///
/// Every flag can also be set through the environment variable shown next
/// to it; flags win over the environment, which wins over the config file.
#[derive(Debug, Parser)]
#[command(name = "mathworld-server", version)]
struct Cli {
    /// TOML configuration file.
    #[arg(long, env = "MATHWORLD_CONFIG")]
    config: Option<PathBuf>,
    #[arg(long, env = "MATHWORLD_HOST")]
    host: Option<IpAddr>,
    #[arg(long, env = "MATHWORLD_PORT", value_parser = clap::value_parser!(u16).range(1..))]
    port: Option<u16>,
    /// Directory holding learner journals and session snapshots.
    #[arg(long, env = "MATHWORLD_DATA_DIR")]
    data_dir: Option<PathBuf>,
    /// Fixed seed for session ids and questions (reproducible runs).
    #[arg(long, env = "MATHWORLD_SEED")]
    seed: Option<u64>,
    /// Interpretation band preset: equal-width or effectiveness.
    #[arg(long, env = "MATHWORLD_BANDS")]
    bands: Option<String>,
}

impl Cli {
    fn into_config(self) -> Result<ServiceConfig, mathworld_server::StartupError> {
        let mut config = match &self.config {
            Some(path) => ServiceConfig::from_toml_file(path)?,
            None => ServiceConfig::default(),
        };
        if let Some(host) = self.host {
            config.host = host;
        }
        if let Some(port) = self.port {
            config.port = port;
        }
        if let Some(dir) = self.data_dir {
            config.data_dir = dir;
        }
        if let Some(seed) = self.seed {
            config.seed = Some(seed);
        }
        if let Some(bands) = self.bands {
            config.bands = bands;
        }
        Ok(config)
    }
}

async fn shutdown_signal() {
    let ctrl_c = tokio::signal::ctrl_c();
    #[cfg(unix)]
    {
        let mut term = tokio::signal::unix::signal(tokio::signal::unix::SignalKind::terminate())
            .expect("SIGTERM handler");
        tokio::select! {
            _ = ctrl_c => {}
            _ = term.recv() => {}
        }
    }
    #[cfg(not(unix))]
    {
        let _ = ctrl_c.await;
    }
}

#[tokio::main]
async fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(EnvFilter::try_from_env("MATHWORLD_LOG").unwrap_or_else(|_| EnvFilter::new("info")))
        .with_writer(std::io::stderr)
        .init();

    let handle = match Cli::parse().into_config() {
        Ok(config) => serve(config).await,
        Err(e) => Err(e),
    };
    let handle = match handle {
        Ok(h) => h,
        Err(e) => {
            eprintln!("mathworld-server: {e}");
            return ExitCode::FAILURE;
        }
    };
    // machine-readable line for supervising scripts
    println!("listening on {}", handle.local_addr());
    shutdown_signal().await;
    tracing::info!("shutting down");
    match handle.shutdown().await {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mathworld-server: {e}");
            ExitCode::FAILURE
        }
    }
}
