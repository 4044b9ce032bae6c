//! Per-year POI views plus navigation from a visitor's GPS fix to each POI.
//!
//!     cargo run --example poi_tour -- data/sample/config.toml

use tidelens::geodata::{bearing_distance, GeoCoord};
use tidelens::{AppConfig, Engine};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/sample/config.toml").into());
    let engine = Engine::load(&AppConfig::load(path)?)?;
    let anchor = engine.scene().anchor;
    // Stand at the scene anchor, as a visitor with a phone would.
    let visitor: GeoCoord = anchor.origin_geo();

    println!(
        "{:<8} {:>8} {:>9}  {:>6} {:>6} {:>6}  depth@2100",
        "poi", "bearing", "distance", "2021", "2050", "2100"
    );
    for poi in engine.catalog().iter() {
        let nav = bearing_distance(visitor, poi.position);
        let mut states = Vec::new();
        let mut depth = 0.0;
        for year in [2021, 2050, 2100] {
            let entry = engine.year_entry(year)?;
            let view = tidelens::poi_view(
                poi,
                engine.dem(),
                &anchor,
                engine.curve(),
                entry.year,
                &entry.mask,
            )?;
            states.push(if view.flooded { "wet" } else { "dry" });
            depth = view.depth;
        }
        println!(
            "{:<8} {:>7.1}° {:>8.1}m  {:>6} {:>6} {:>6}  {:.3} m",
            poi.id, nav.bearing, nav.distance, states[0], states[1], states[2], depth
        );
    }
    Ok(())
}
