//! Serve the sample dataset over HTTP.
//!
//!     cargo run --example serve_sample -- data/sample/config.toml 8080
//!     curl 'http://127.0.0.1:8080/api/stats?year=2050'

use tidelens::AppConfig;

#[tokio::main]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let mut config = AppConfig::load(args.next().unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/data/sample/config.toml").into()
    }))?;
    if let Some(port) = args.next() {
        config.listen.port = port.parse()?;
    }
    tidelens::service::serve(&config).await?;
    Ok(())
}
