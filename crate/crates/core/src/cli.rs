//! Batch entry points. Exit codes: 0 success, 1 data error, 2 usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::engine::{AppConfig, Engine, CONFIG_ENV};
use crate::sealevel::{END_YEAR, START_YEAR};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DATA: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "tidelens", version, about = "Sea-level-rise inundation engine")]
pub struct Cli {
    /// Dataset configuration (TOML).
    #[arg(long, global = true, env = CONFIG_ENV)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Summarize the DEM, curve and POI catalog.
    Info,
    /// Write the flood mask (PGM) and stats (JSON) for one year.
    Flood {
        #[arg(long, value_parser = year_parser())]
        year: i64,
        #[arg(long)]
        out_mask: PathBuf,
        /// Stats JSON destination; printed to stdout when omitted.
        #[arg(long)]
        out_stats: Option<PathBuf>,
    },
    /// Write terrain.obj and ocean_<year>.obj.
    Mesh {
        #[arg(long, value_parser = year_parser())]
        year: i64,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long)]
        exaggeration: Option<f64>,
    },
    /// Print the year,level table for every slider position.
    Curve,
    /// Run the HTTP service.
    Serve {
        #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
        port: Option<u16>,
    },
}

fn year_parser() -> clap::builder::RangedI64ValueParser<i64> {
    clap::value_parser!(i64).range(START_YEAR as i64..=END_YEAR as i64)
}

enum Failure {
    Usage(String),
    Data(String),
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match execute(cli, out) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Data(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_DATA
        }
    }
}

fn data<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Data(e.to_string())
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    std::fs::write(path, bytes).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    let config_path = cli.config.ok_or_else(|| {
        Failure::Usage(format!(
            "no configuration given; pass --config or set {CONFIG_ENV}"
        ))
    })?;
    let mut config = AppConfig::load(&config_path).map_err(data)?;

    if let Command::Serve { port } = cli.command {
        if let Some(port) = port {
            config.listen.port = port;
        }
        let runtime = tokio::runtime::Runtime::new().map_err(data)?;
        return runtime
            .block_on(crate::service::serve(&config))
            .map_err(data);
    }

    let engine = Engine::load(&config).map_err(data)?;
    match cli.command {
        Command::Info => info(&engine, out).map_err(data),
        Command::Flood {
            year,
            out_mask,
            out_stats,
        } => {
            write_file(&out_mask, &engine.flood_pgm(year).map_err(data)?)?;
            let stats = engine.stats_json(year).map_err(data)?;
            match out_stats {
                Some(path) => write_file(&path, stats.as_bytes()),
                None => writeln!(out, "{stats}").map_err(data),
            }
        }
        Command::Mesh {
            year,
            out_dir,
            exaggeration,
        } => {
            let cfg = match exaggeration {
                Some(k) => engine
                    .scene()
                    .clone()
                    .with_exaggeration(k)
                    .map_err(|e| Failure::Usage(e.to_string()))?,
                None => engine.scene().clone(),
            };
            std::fs::create_dir_all(&out_dir)
                .map_err(|e| Failure::Data(format!("{}: {e}", out_dir.display())))?;
            write_file(
                &out_dir.join("terrain.obj"),
                engine.terrain_obj_with(&cfg).as_bytes(),
            )?;
            let ocean = engine.ocean_obj_with(year, &cfg).map_err(data)?;
            write_file(&out_dir.join(format!("ocean_{year}.obj")), ocean.as_bytes())
        }
        Command::Curve => out.write_all(engine.curve_table().as_bytes()).map_err(data),
        Command::Serve { .. } => unreachable!("handled above"),
    }
}

fn info(engine: &Engine, out: &mut dyn Write) -> std::io::Result<()> {
    let dem = engine.dem();
    let h = dem.header();
    let e = dem.extent();
    writeln!(
        out,
        "DEM: {} rows x {} cols, cellsize {} m",
        h.nrows, h.ncols, h.cellsize
    )?;
    writeln!(
        out,
        "  extent: x {}..{}, y {}..{}",
        e.xmin, e.xmax, e.ymin, e.ymax
    )?;
    writeln!(
        out,
        "  valid cells: {} of {}",
        dem.valid_cell_count(),
        dem.len()
    )?;
    let anchors = engine.curve().anchors();
    writeln!(
        out,
        "Curve: {} anchors, {}..{}",
        anchors.len(),
        anchors[0].year,
        anchors[anchors.len() - 1].year
    )?;
    writeln!(
        out,
        "  level {START_YEAR}: {} m, {END_YEAR}: {} m",
        engine.curve().level_for_year(START_YEAR as f64),
        engine.curve().level_for_year(END_YEAR as f64)
    )?;
    writeln!(out, "POIs: {}", engine.catalog().len())?;
    for poi in engine.catalog().iter() {
        writeln!(
            out,
            "  {} ({}, {}): {}",
            poi.id, poi.position.lat, poi.position.lon, poi.name
        )?;
    }
    Ok(())
}
