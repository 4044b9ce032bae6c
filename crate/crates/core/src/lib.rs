//! Sea-level-rise inundation engine.
//!
//! The pipeline reads an ESRI ASCII grid DEM and a year/level projection
//! curve, floods the DEM for every year of the 2021–2100 timeline with a
//! hydrologically connected bathtub model, and turns the results into
//! masks, meshes and per-POI views. [`engine::Engine`] ties the pieces
//! together; [`service`] and [`cli`] are thin front ends over it.
//!
//! See `examples/` for one runnable program per capability.

pub mod catalog;
pub mod cli;
pub mod engine;
pub mod geodata;
pub mod inundation;
pub mod scene;
pub mod sealevel;
pub mod service;

pub use catalog::{load_pois, poi_view, Catalog, Poi, PoiView};
pub use engine::{AppConfig, Engine};
pub use geodata::{bearing_distance, parse_ascii_grid, Dem, GeoAnchor, GeoCoord, LocalCoord};
pub use inundation::{
    boundary_seeds, flood_mask, mask_diff, mask_stats, threshold_mask, Connectivity, FloodMask,
    FloodStats, SpillLevels,
};
pub use scene::{
    encode_mask_pgm, encode_mask_rle, export_obj, ocean_surface, terrain_mesh, SceneConfig,
    TerrainMesh,
};
pub use sealevel::{parse_curve, slider_for_year, year_for_slider, SeaLevelCurve};
