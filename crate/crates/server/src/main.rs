use std::net::{IpAddr, SocketAddr};

use aquameter_server::{router, DEFAULT_CORS_ORIGIN};
use clap::Parser;
use tracing_subscriber::EnvFilter;

#[derive(Debug, Parser)]
#[command(
    name = "aquameter-server",
    version,
    about = "HTTP service for the aquameter estimator"
)]
struct Args {
    #[arg(long, default_value_t = 8080)]
    port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    bind: IpAddr,
    /// Allowed browser origin; repeat for several.
    #[arg(long = "cors-origin", value_name = "ORIGIN", default_values_t = [DEFAULT_CORS_ORIGIN.to_string()])]
    cors_origin: Vec<String>,
}

#[tokio::main]
async fn main() -> std::io::Result<()> {
    tracing_subscriber::fmt()
        .json()
        .with_writer(std::io::stdout)
        .with_env_filter(EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new("info,tower_http=debug")))
        .init();
    let args = Args::parse();
    let addr = SocketAddr::new(args.bind, args.port);
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!(%addr, origins = ?args.cors_origin, "listening");
    axum::serve(listener, router(&args.cors_origin)).await
}
