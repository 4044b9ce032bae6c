//! Dataset loading and the single output path shared by the CLI and the
//! HTTP service. Both front ends call the methods here, so equivalent
//! requests produce byte-identical bodies.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{self, Catalog, ViewError};
use crate::geodata::{self, Dem, Extent, GeoAnchor, GeoCoord, GridHeader, LocalCoord};
use crate::inundation::{self, Cell, Connectivity, FloodMask, FloodStats, InundationError};
use crate::scene::{self, SceneConfig, SceneError};
use crate::sealevel::{self, SeaLevelCurve, TimelineError, TimelineSpec, STEP_COUNT, TIMELINE};

pub const CONFIG_ENV: &str = "TIDELENS_CONFIG";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{path}: {message}")]
    Invalid { path: PathBuf, message: String },
}

/// Failures while loading the dataset named by an [`AppConfig`].
#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Data { path: PathBuf, message: String },
    #[error("invalid scene configuration: {0}")]
    Scene(String),
}

/// Per-request failures.
#[derive(Debug, Error, PartialEq)]
pub enum RequestError {
    #[error(transparent)]
    Timeline(#[from] TimelineError),
    #[error("unknown POI `{0}`")]
    UnknownPoi(String),
    #[error(transparent)]
    View(#[from] ViewError),
    #[error(transparent)]
    Scene(#[from] SceneError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnchorConfig {
    pub lat: f64,
    pub lon: f64,
    /// Scene-space position of the anchor, in the DEM's coordinate frame.
    #[serde(default)]
    pub x: f64,
    #[serde(default)]
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneSettings {
    #[serde(default = "default_exaggeration")]
    pub exaggeration: f64,
    #[serde(default)]
    pub connectivity: Connectivity,
    #[serde(default)]
    pub seed_overrides: Option<Vec<Cell>>,
}

impl Default for SceneSettings {
    fn default() -> Self {
        Self {
            exaggeration: 1.0,
            connectivity: Connectivity::Four,
            seed_overrides: None,
        }
    }
}

fn default_exaggeration() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ListenConfig {
    #[serde(default = "default_address")]
    pub address: String,
    #[serde(default = "default_port")]
    pub port: u16,
}

impl Default for ListenConfig {
    fn default() -> Self {
        Self {
            address: default_address(),
            port: default_port(),
        }
    }
}

fn default_address() -> String {
    "127.0.0.1".into()
}

fn default_port() -> u16 {
    8080
}

/// Deployment configuration, read from TOML. Relative paths resolve
/// against the directory holding the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AppConfig {
    pub dem_path: PathBuf,
    pub curve_path: PathBuf,
    pub pois_path: PathBuf,
    #[serde(default)]
    pub static_dir: Option<PathBuf>,
    pub anchor: AnchorConfig,
    #[serde(default)]
    pub scene: SceneSettings,
    #[serde(default)]
    pub listen: ListenConfig,
}

impl AppConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::from_toml(&text, base).map_err(|e| match e {
            ConfigError::Parse { message, .. } => ConfigError::Parse {
                path: path.to_path_buf(),
                message,
            },
            ConfigError::Invalid { message, .. } => ConfigError::Invalid {
                path: path.to_path_buf(),
                message,
            },
            other => other,
        })
    }

    /// Parses TOML text, resolving relative paths against `base`.
    pub fn from_toml(text: &str, base: &Path) -> Result<Self, ConfigError> {
        let mut cfg: AppConfig = toml::from_str(text).map_err(|e| ConfigError::Parse {
            path: PathBuf::new(),
            message: e.to_string(),
        })?;
        let resolve = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        resolve(&mut cfg.dem_path);
        resolve(&mut cfg.curve_path);
        resolve(&mut cfg.pois_path);
        if let Some(dir) = cfg.static_dir.as_mut() {
            resolve(dir);
        }
        if cfg.listen.port == 0 {
            return Err(ConfigError::Invalid {
                path: PathBuf::new(),
                message: "listen.port must be in 1..=65535".into(),
            });
        }
        Ok(cfg)
    }
}

/// Everything derived from one slider position.
#[derive(Debug, Clone, PartialEq)]
pub struct YearEntry {
    pub year: i32,
    pub level: f64,
    pub mask: FloodMask,
    pub stats: FloodStats,
}

/// Memoized per-year results, one slot per slider index.
///
/// Concurrent misses on the same index compute once; the other callers
/// block until the value is published.
#[derive(Debug)]
pub struct YearCache {
    slots: Vec<OnceLock<Arc<YearEntry>>>,
    computations: AtomicUsize,
}

impl Default for YearCache {
    fn default() -> Self {
        Self::new()
    }
}

impl YearCache {
    pub fn new() -> Self {
        Self {
            slots: (0..STEP_COUNT).map(|_| OnceLock::new()).collect(),
            computations: AtomicUsize::new(0),
        }
    }

    pub fn get_or_compute(
        &self,
        index: i64,
        compute: impl FnOnce(usize) -> YearEntry,
    ) -> Result<Arc<YearEntry>, TimelineError> {
        sealevel::year_for_slider(index)?;
        let i = index as usize;
        Ok(Arc::clone(self.slots[i].get_or_init(|| {
            self.computations.fetch_add(1, Ordering::Relaxed);
            Arc::new(compute(i))
        })))
    }

    pub fn len(&self) -> usize {
        self.slots.iter().filter(|s| s.get().is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// How many entries have been computed so far.
    pub fn computations(&self) -> usize {
        self.computations.load(Ordering::Relaxed)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub dem: DemMeta,
    pub anchor: AnchorMeta,
    pub timeline: TimelineSpec,
    pub scene: SceneMeta,
}

#[derive(Debug, Clone, Serialize)]
pub struct DemMeta {
    #[serde(flatten)]
    pub header: GridHeader,
    pub extent: Extent,
    pub valid_cells: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnchorMeta {
    pub lat: f64,
    pub lon: f64,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SceneMeta {
    pub vertical_exaggeration: f64,
    pub connectivity: Connectivity,
}

#[derive(Debug, Clone, Serialize)]
pub struct YearStats {
    pub year: i32,
    pub level: f64,
    #[serde(flatten)]
    pub stats: FloodStats,
}

/// A loaded, immutable dataset plus its year cache.
#[derive(Debug)]
pub struct Engine {
    dem: Dem,
    curve: SeaLevelCurve,
    curve_text: String,
    catalog: Catalog,
    scene: SceneConfig,
    static_dir: Option<PathBuf>,
    cache: YearCache,
    terrain_obj: OnceLock<String>,
}

fn read(path: &Path) -> Result<String, LoadError> {
    std::fs::read_to_string(path).map_err(|source| LoadError::Read {
        path: path.to_path_buf(),
        source,
    })
}

fn data_err(path: &Path, e: impl std::fmt::Display) -> LoadError {
    LoadError::Data {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

impl Engine {
    pub fn load(cfg: &AppConfig) -> Result<Self, LoadError> {
        let dem = geodata::parse_ascii_grid(&read(&cfg.dem_path)?)
            .map_err(|e| data_err(&cfg.dem_path, e))?;
        let curve_text = read(&cfg.curve_path)?;
        let curve = sealevel::parse_curve(&curve_text).map_err(|e| data_err(&cfg.curve_path, e))?;

        let a = cfg.anchor;
        let anchor = GeoCoord::new(a.lat, a.lon)
            .and_then(|g| GeoAnchor::new(g, LocalCoord { x: a.x, y: a.y }))
            .map_err(|e| LoadError::Scene(format!("anchor: {e}")))?;
        let mut scene = SceneConfig::new(anchor)
            .with_exaggeration(cfg.scene.exaggeration)
            .map_err(|e| LoadError::Scene(e.to_string()))?;
        scene.connectivity = cfg.scene.connectivity;
        if let Some(seeds) = &cfg.scene.seed_overrides {
            if let Some(&(row, col)) = seeds.iter().find(|&&(r, c)| !dem.in_bounds(r, c)) {
                return Err(LoadError::Scene(
                    InundationError::SeedOutOfBounds {
                        row,
                        col,
                        nrows: dem.nrows(),
                        ncols: dem.ncols(),
                    }
                    .to_string(),
                ));
            }
            scene.seed_overrides = Some(seeds.clone());
        }

        let catalog = catalog::load_pois(&read(&cfg.pois_path)?, &dem, &anchor)
            .map_err(|e| data_err(&cfg.pois_path, e))?;

        Ok(Self {
            dem,
            curve,
            curve_text,
            catalog,
            scene,
            static_dir: cfg.static_dir.clone(),
            cache: YearCache::new(),
            terrain_obj: OnceLock::new(),
        })
    }

    /// Assembles an engine from already-parsed parts.
    pub fn from_parts(
        dem: Dem,
        curve: SeaLevelCurve,
        curve_text: String,
        catalog: Catalog,
        scene: SceneConfig,
    ) -> Self {
        Self {
            dem,
            curve,
            curve_text,
            catalog,
            scene,
            static_dir: None,
            cache: YearCache::new(),
            terrain_obj: OnceLock::new(),
        }
    }

    pub fn dem(&self) -> &Dem {
        &self.dem
    }

    pub fn curve(&self) -> &SeaLevelCurve {
        &self.curve
    }

    pub fn catalog(&self) -> &Catalog {
        &self.catalog
    }

    pub fn scene(&self) -> &SceneConfig {
        &self.scene
    }

    pub fn static_dir(&self) -> Option<&Path> {
        self.static_dir.as_deref()
    }

    pub fn cache(&self) -> &YearCache {
        &self.cache
    }

    /// Uncached mask computation for `level` under this engine's seeding
    /// and connectivity.
    pub fn compute_mask(&self, level: f64) -> FloodMask {
        let seeds =
            inundation::boundary_seeds(&self.dem, level, self.scene.seed_overrides.as_deref())
                .expect("seed overrides validated at load");
        inundation::flood_mask(&self.dem, level, &seeds, self.scene.connectivity)
            .expect("seeds are in bounds")
    }

    /// Cached entry for a slider index.
    pub fn get_mask_cached(&self, index: i64) -> Result<Arc<YearEntry>, TimelineError> {
        self.cache.get_or_compute(index, |i| {
            let year = sealevel::START_YEAR + i as i32;
            let level = self.curve.level_for_year(year as f64);
            let mask = self.compute_mask(level);
            let stats = inundation::mask_stats(&mask, &self.dem).expect("mask matches DEM");
            YearEntry {
                year,
                level,
                mask,
                stats,
            }
        })
    }

    pub fn year_entry(&self, year: i64) -> Result<Arc<YearEntry>, TimelineError> {
        let index = sealevel::slider_for_year(year)?;
        self.get_mask_cached(index as i64)
    }

    pub fn meta(&self) -> Meta {
        let o = self.scene.anchor.origin_geo();
        let l = self.scene.anchor.origin_local();
        Meta {
            dem: DemMeta {
                header: *self.dem.header(),
                extent: self.dem.extent(),
                valid_cells: self.dem.valid_cell_count(),
            },
            anchor: AnchorMeta {
                lat: o.lat,
                lon: o.lon,
                x: l.x,
                y: l.y,
            },
            timeline: TIMELINE,
            scene: SceneMeta {
                vertical_exaggeration: self.scene.vertical_exaggeration(),
                connectivity: self.scene.connectivity,
            },
        }
    }

    pub fn meta_json(&self) -> String {
        to_json(&self.meta())
    }

    /// The curve file exactly as it was read.
    pub fn curve_csv(&self) -> &str {
        &self.curve_text
    }

    /// One `year,level` line per slider position.
    pub fn curve_table(&self) -> String {
        let mut out = String::new();
        for i in 0..STEP_COUNT as i64 {
            let year = sealevel::year_for_slider(i).expect("index in range");
            out.push_str(&format!(
                "{year},{}\n",
                self.curve.level_for_year(year as f64)
            ));
        }
        out
    }

    pub fn pois_json(&self) -> String {
        to_json(&self.catalog.iter().collect::<Vec<_>>())
    }

    pub fn poi_view_json(&self, id: &str, year: i64) -> Result<String, RequestError> {
        let poi = self
            .catalog
            .get(id)
            .ok_or_else(|| RequestError::UnknownPoi(id.to_string()))?;
        let entry = self.year_entry(year)?;
        let view = catalog::poi_view(
            poi,
            &self.dem,
            &self.scene.anchor,
            &self.curve,
            entry.year,
            &entry.mask,
        )?;
        Ok(to_json(&view))
    }

    pub fn flood_rle(&self, year: i64) -> Result<String, RequestError> {
        Ok(scene::encode_mask_rle(&self.year_entry(year)?.mask))
    }

    pub fn flood_pgm(&self, year: i64) -> Result<Vec<u8>, RequestError> {
        Ok(scene::encode_mask_pgm(&self.year_entry(year)?.mask))
    }

    pub fn stats(&self, year: i64) -> Result<YearStats, RequestError> {
        let e = self.year_entry(year)?;
        Ok(YearStats {
            year: e.year,
            level: e.level,
            stats: e.stats,
        })
    }

    pub fn stats_json(&self, year: i64) -> Result<String, RequestError> {
        Ok(to_json(&self.stats(year)?))
    }

    pub fn terrain_obj(&self) -> &str {
        self.terrain_obj
            .get_or_init(|| scene::export_obj(&scene::terrain_mesh(&self.dem, &self.scene)))
    }

    pub fn ocean_obj(&self, year: i64) -> Result<String, RequestError> {
        self.ocean_obj_with(year, &self.scene)
    }

    pub fn terrain_obj_with(&self, cfg: &SceneConfig) -> String {
        scene::export_obj(&scene::terrain_mesh(&self.dem, cfg))
    }

    pub fn ocean_obj_with(&self, year: i64, cfg: &SceneConfig) -> Result<String, RequestError> {
        sealevel::slider_for_year(year)?;
        let level = self.curve.level_for_year(year as f64);
        Ok(scene::export_obj(&scene::ocean_surface(
            &self.dem, level, cfg,
        )))
    }
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string(value).expect("response types serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    const CONFIG: &str = r#"
dem_path = "dem.asc"
curve_path = "curve.csv"
pois_path = "pois.json"
static_dir = "static"

[anchor]
lat = 53.49
lon = -6.11
x = 15.0
y = 15.0

[scene]
exaggeration = 2.0
connectivity = 8
seed_overrides = [[0, 0]]

[listen]
port = 9000
"#;

    #[test]
    fn config_resolves_relative_paths() {
        let cfg = AppConfig::from_toml(CONFIG, Path::new("/data/site")).unwrap();
        assert_eq!(cfg.dem_path, Path::new("/data/site/dem.asc"));
        assert_eq!(
            cfg.static_dir.as_deref(),
            Some(Path::new("/data/site/static"))
        );
        assert_eq!(cfg.scene.connectivity, Connectivity::Eight);
        assert_eq!(cfg.scene.seed_overrides, Some(vec![(0, 0)]));
        assert_eq!(cfg.listen.port, 9000);
        assert_eq!(cfg.listen.address, "127.0.0.1");
    }

    #[test]
    fn config_rejects_bad_values() {
        let bad_conn = CONFIG.replace("connectivity = 8", "connectivity = 6");
        assert!(AppConfig::from_toml(&bad_conn, Path::new(".")).is_err());
        let bad_port = CONFIG.replace("port = 9000", "port = 0");
        assert!(AppConfig::from_toml(&bad_port, Path::new(".")).is_err());
        let unknown = format!("{CONFIG}\n[extra]\nx = 1\n");
        assert!(AppConfig::from_toml(&unknown, Path::new(".")).is_err());
    }

    #[test]
    fn load_reports_the_offending_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = |n: &str| dir.path().join(n);
        std::fs::write(
            p("dem.asc"),
            "ncols 3\nnrows 3\nxllcorner 0\nyllcorner 0\ncellsize 10\n0 0 0\n0 0 0\n0 0 0\n",
        )
        .unwrap();
        std::fs::write(p("curve.csv"), "2021,0\n2100,oops\n").unwrap();
        std::fs::write(p("pois.json"), "[]").unwrap();
        std::fs::write(p("app.toml"), CONFIG).unwrap();
        let cfg = AppConfig::load(p("app.toml")).unwrap();
        let err = Engine::load(&cfg).unwrap_err().to_string();
        assert!(err.contains("curve.csv") && err.contains("line 2"), "{err}");

        std::fs::write(p("curve.csv"), "2021,0\n2100,1\n").unwrap();
        let engine = Engine::load(&cfg).unwrap();
        assert_eq!(engine.scene().vertical_exaggeration(), 2.0);

        let off_grid = CONFIG.replace("[[0, 0]]", "[[5, 0]]");
        std::fs::write(p("app.toml"), off_grid).unwrap();
        let cfg = AppConfig::load(p("app.toml")).unwrap();
        assert!(matches!(Engine::load(&cfg), Err(LoadError::Scene(_))));
    }

    #[test]
    fn cache_computes_each_index_once() {
        let cache = YearCache::new();
        let make = |i: usize| YearEntry {
            year: 2021 + i as i32,
            level: i as f64,
            mask: FloodMask::empty(2, 2, i as f64),
            stats: FloodStats {
                flooded_cells: 0,
                flooded_area: 0.0,
                flooded_fraction: 0.0,
            },
        };
        let a = cache.get_or_compute(29, make).unwrap();
        let b = cache.get_or_compute(29, make).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(cache.computations(), 1);
        assert_eq!(
            cache.get_or_compute(80, make),
            Err(TimelineError::IndexOutOfRange(80))
        );
        for i in 0..80 {
            cache.get_or_compute(i, make).unwrap();
        }
        assert_eq!(cache.len(), 80);
        assert_eq!(cache.computations(), 80);
    }
}
