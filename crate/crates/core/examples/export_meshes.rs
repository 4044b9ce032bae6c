//! Terrain and ocean meshes as Wavefront OBJ for external 3-D/AR clients.
//!
//!     cargo run --example export_meshes -- data/sample/config.toml /tmp/tidelens-meshes 2.0

use std::path::PathBuf;

use tidelens::scene::{export_obj, ocean_surface, terrain_mesh};
use tidelens::{AppConfig, Engine};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let config = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/sample/config.toml").into());
    let out: PathBuf = args.next().unwrap_or_else(|| "target/meshes".into()).into();
    let exaggeration: f64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1.0);

    let engine = Engine::load(&AppConfig::load(config)?)?;
    let cfg = engine.scene().clone().with_exaggeration(exaggeration)?;
    std::fs::create_dir_all(&out)?;

    let terrain = terrain_mesh(engine.dem(), &cfg);
    std::fs::write(out.join("terrain.obj"), export_obj(&terrain))?;
    println!(
        "terrain.obj: {} vertices, {} triangles",
        terrain.vertex_count(),
        terrain.triangle_count()
    );

    for year in [2021, 2050, 2100] {
        let level = engine.curve().level_for_year(year as f64);
        let ocean = ocean_surface(engine.dem(), level, &cfg);
        std::fs::write(out.join(format!("ocean_{year}.obj")), export_obj(&ocean))?;
        println!("ocean_{year}.obj at z = {:.3}", level * exaggeration);
    }
    Ok(())
}
