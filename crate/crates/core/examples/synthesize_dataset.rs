//! Writes the synthetic sample dataset: a 120x160 coastal DEM, a
//! projection curve, five POIs and a config file.
//!
//!     cargo run --example synthesize_dataset -- data/sample

use std::path::PathBuf;

use tidelens::geodata::{Dem, GeoAnchor, GeoCoord, GridHeader, LocalCoord, DEFAULT_NODATA};

const NROWS: usize = 120;
const NCOLS: usize = 160;
const CELL: f64 = 5.0;
const ANCHOR_LAT: f64 = 53.4930;
const ANCHOR_LON: f64 = -6.1080;
const ANCHOR_X: f64 = 400.0;
const ANCHOR_Y: f64 = 300.0;

fn gauss(d: f64, sigma: f64) -> f64 {
    (-(d * d) / (2.0 * sigma * sigma)).exp()
}

/// Land to the west, open sea to the east, a dune ridge with one inlet,
/// a low marsh behind it and a closed inland hollow.
fn elevation(x: f64, y: f64) -> f64 {
    let u = x / (NCOLS as f64 * CELL);
    let mut z = 5.0 * (0.75 - u) / 0.75;
    let inlet = gauss(y - 300.0, 18.0);
    z += 2.6 * gauss(x - 545.0, 12.0) * (1.0 - inlet);
    z -= 1.6 * gauss(x - 470.0, 45.0) * gauss(y - 300.0, 140.0);
    z -= 4.2 * gauss(((x - 200.0).powi(2) + (y - 450.0).powi(2)).sqrt(), 28.0);
    z += 0.15 * (x / 23.0).sin() * (y / 31.0).cos();
    (z * 1000.0).round() / 1000.0
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out: PathBuf = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/sample").into())
        .into();
    std::fs::create_dir_all(out.join("static/media"))?;

    let header = GridHeader {
        ncols: NCOLS,
        nrows: NROWS,
        xllcorner: 0.0,
        yllcorner: 0.0,
        cellsize: CELL,
        nodata_value: DEFAULT_NODATA,
    };
    let mut values = Vec::with_capacity(NROWS * NCOLS);
    for r in 0..NROWS {
        for c in 0..NCOLS {
            let x = (c as f64 + 0.5) * CELL;
            let y = ((NROWS - r) as f64 - 0.5) * CELL;
            // Survey gaps: a building footprint inland and a pier offshore.
            let gap = (10..15).contains(&r) && (20..27).contains(&c)
                || (88..91).contains(&r) && (118..150).contains(&c);
            values.push(if gap { DEFAULT_NODATA } else { elevation(x, y) });
        }
    }
    let dem = Dem::new(header, values)?;
    std::fs::write(out.join("dem.asc"), dem.to_ascii_grid())?;

    std::fs::write(
        out.join("curve.csv"),
        "# SYNTHETIC sample projection curve for demonstration only.\n\
         # Not a published projection. Levels in meters relative to the 2021 datum.\n\
         year,level_m\n\
         2020,-0.004\n2021,0.0\n2030,0.045\n2040,0.1\n2050,0.17\n2060,0.26\n\
         2070,0.37\n2080,0.5\n2090,0.65\n2100,0.82\n",
    )?;

    let anchor = GeoAnchor::new(
        GeoCoord::new(ANCHOR_LAT, ANCHOR_LON)?,
        LocalCoord {
            x: ANCHOR_X,
            y: ANCHOR_Y,
        },
    )?;
    let pois = [
        (
            "beach",
            "Beach Walk",
            577.5,
            72.5,
            "Sandy foreshore seaward of the dunes.",
        ),
        (
            "marsh",
            "Salt Marsh",
            472.5,
            302.5,
            "Low marsh behind the dune line, fed through the inlet.",
        ),
        ("dune", "Dune Crest", 547.5, 452.5, "Top of the dune ridge."),
        (
            "village",
            "Village Green",
            252.5,
            302.5,
            "Inland settlement on higher ground.",
        ),
        (
            "hollow",
            "Inland Hollow",
            202.5,
            452.5,
            "Closed depression below sea level with no path to the sea.",
        ),
    ];
    let mut records = Vec::new();
    for (id, name, x, y, blurb) in pois {
        let g = anchor.local_to_geo(LocalCoord { x, y })?;
        let media = format!("media/{id}.txt");
        std::fs::write(
            out.join("static").join(&media),
            format!("{name}\n\nPlaceholder media for the sample dataset.\n"),
        )?;
        records.push(serde_json::json!({
            "id": id,
            "name": name,
            "position": { "lat": (g.lat * 1e9).round() / 1e9, "lon": (g.lon * 1e9).round() / 1e9 },
            "blurb": blurb,
            "media_refs": [media],
        }));
    }
    std::fs::write(
        out.join("pois.json"),
        serde_json::to_string_pretty(&records)? + "\n",
    )?;

    std::fs::write(
        out.join("config.toml"),
        format!(
            "# Synthetic sample site.\n\
             dem_path = \"dem.asc\"\n\
             curve_path = \"curve.csv\"\n\
             pois_path = \"pois.json\"\n\
             static_dir = \"static\"\n\n\
             [anchor]\nlat = {ANCHOR_LAT}\nlon = {ANCHOR_LON}\nx = {ANCHOR_X:?}\ny = {ANCHOR_Y:?}\n\n\
             [scene]\nexaggeration = 1.0\nconnectivity = 4\n\n\
             [listen]\naddress = \"127.0.0.1\"\nport = 8080\n"
        ),
    )?;
    println!("wrote sample dataset to {}", out.display());
    Ok(())
}
