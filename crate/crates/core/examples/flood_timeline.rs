//! Sweep the 80-year timeline: connected bathtub versus naive threshold,
//! and the land newly lost each decade.
//!
//!     cargo run --release --example flood_timeline -- data/sample/config.toml

use tidelens::inundation::{mask_diff, mask_stats, threshold_mask, SpillLevels};
use tidelens::sealevel::{year_for_slider, STEP_COUNT};
use tidelens::{AppConfig, Engine};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/sample/config.toml").into());
    let engine = Engine::load(&AppConfig::load(path)?)?;
    let dem = engine.dem();
    let scene = engine.scene();

    // One priority flood answers every year; check it against the BFS path.
    let spill = SpillLevels::compute(dem, scene.seed_overrides.as_deref(), scene.connectivity)?;

    println!("year  level   connected_m2  threshold_m2  new_since_prev_decade");
    let mut previous = None;
    for index in 0..STEP_COUNT as i64 {
        let entry = engine.get_mask_cached(index)?;
        assert_eq!(spill.mask_at(entry.level), entry.mask);
        if index % 10 != 0 && index != STEP_COUNT as i64 - 1 {
            continue;
        }
        let naive = mask_stats(&threshold_mask(dem, entry.level), dem)?;
        let gained = match &previous {
            Some(prev) => mask_diff(prev, &entry.mask)?.len(),
            None => 0,
        };
        println!(
            "{}  {:>5.3}  {:>12.0}  {:>12.0}  {:>6} cells",
            year_for_slider(index)?,
            entry.level,
            entry.stats.flooded_area,
            naive.flooded_area,
            gained
        );
        previous = Some(entry.mask.clone());
    }
    println!("cache holds {} years", engine.cache().len());
    Ok(())
}
