//! Parse an ASCII grid and query it.
//!
//!     cargo run --example inspect_dem -- data/sample/dem.asc

use tidelens::geodata::{parse_ascii_grid, LocalCoord};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/sample/dem.asc").into());
    let dem = parse_ascii_grid(&std::fs::read_to_string(&path)?)?;
    let h = dem.header();
    println!(
        "{path}: {}x{} cells of {} m, NoData = {}",
        h.nrows, h.ncols, h.cellsize, h.nodata_value
    );
    println!("extent: {:?}", dem.extent());
    println!("valid cells: {} / {}", dem.valid_cell_count(), dem.len());

    let (min, max) = dem
        .values()
        .iter()
        .filter(|v| !dem.is_nodata_value(**v))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    println!("elevation range: {min} .. {max} m");

    let e = dem.extent();
    for (fx, fy) in [(0.25, 0.5), (0.5, 0.5), (0.75, 0.5), (0.9, 0.1)] {
        let p = LocalCoord {
            x: e.xmin + fx * (e.xmax - e.xmin),
            y: e.ymin + fy * (e.ymax - e.ymin),
        };
        match dem.sample_elevation(p) {
            Ok(z) => println!("z({:.1}, {:.1}) = {z:.3} m", p.x, p.y),
            Err(err) => println!("z({:.1}, {:.1}): {err}", p.x, p.y),
        }
    }
    Ok(())
}
