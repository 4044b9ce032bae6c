//! Terrain and ocean meshes, plus the mask and mesh interchange encodings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geodata::{Dem, GeoAnchor};
use crate::inundation::{Cell, Connectivity, FloodMask};

#[derive(Debug, Error, PartialEq)]
pub enum SceneError {
    #[error("vertical exaggeration must be finite and positive, got {0}")]
    InvalidExaggeration(f64),
    #[error("malformed PGM: {0}")]
    MalformedPgm(String),
    #[error("malformed mask RLE: {0}")]
    MalformedRle(String),
}

/// Render tuning shared by the mesh generators and the flood engine.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneConfig {
    vertical_exaggeration: f64,
    pub anchor: GeoAnchor,
    pub seed_overrides: Option<Vec<Cell>>,
    pub connectivity: Connectivity,
}

impl SceneConfig {
    pub fn new(anchor: GeoAnchor) -> Self {
        Self {
            vertical_exaggeration: 1.0,
            anchor,
            seed_overrides: None,
            connectivity: Connectivity::Four,
        }
    }

    pub fn with_exaggeration(mut self, factor: f64) -> Result<Self, SceneError> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(SceneError::InvalidExaggeration(factor));
        }
        self.vertical_exaggeration = factor;
        Ok(self)
    }

    pub fn vertical_exaggeration(&self) -> f64 {
        self.vertical_exaggeration
    }
}

/// Indexed triangle mesh in scene space. Triangles wind counter-clockwise
/// seen from +z.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TerrainMesh {
    pub vertices: Vec<[f64; 3]>,
    pub triangles: Vec<[u32; 3]>,
    pub uv: Vec<[f64; 2]>,
}

impl TerrainMesh {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }
}

/// One vertex per cell center and two triangles per fully-valid cell quad.
///
/// NoData vertices are kept (at z = 0) so that vertex `(r, c)` is always
/// index `r * ncols + c`; no triangle references them.
pub fn terrain_mesh(dem: &Dem, cfg: &SceneConfig) -> TerrainMesh {
    let (nr, nc) = (dem.nrows(), dem.ncols());
    let k = cfg.vertical_exaggeration;
    let mut mesh = TerrainMesh {
        vertices: Vec::with_capacity(nr * nc),
        triangles: Vec::with_capacity(2 * (nr - 1) * (nc - 1)),
        uv: Vec::with_capacity(nr * nc),
    };
    for r in 0..nr {
        for c in 0..nc {
            let p = dem.cell_center(r, c);
            let z = dem.elevation(r, c).map_or(0.0, |z| z * k);
            mesh.vertices.push([p.x, p.y, z]);
            mesh.uv.push([
                c as f64 / (nc - 1) as f64,
                (nr - 1 - r) as f64 / (nr - 1) as f64,
            ]);
        }
    }
    for r in 0..nr - 1 {
        for c in 0..nc - 1 {
            if [(r, c), (r, c + 1), (r + 1, c), (r + 1, c + 1)]
                .iter()
                .any(|&(rr, cc)| dem.elevation(rr, cc).is_none())
            {
                continue;
            }
            let nw = (r * nc + c) as u32;
            let ne = nw + 1;
            let sw = ((r + 1) * nc + c) as u32;
            let se = sw + 1;
            mesh.triangles.push([sw, se, ne]);
            mesh.triangles.push([sw, ne, nw]);
        }
    }
    mesh
}

/// Flat quad over the full DEM extent at the given water level.
pub fn ocean_surface(dem: &Dem, level: f64, cfg: &SceneConfig) -> TerrainMesh {
    let e = dem.extent();
    let z = level * cfg.vertical_exaggeration;
    TerrainMesh {
        vertices: vec![
            [e.xmin, e.ymin, z],
            [e.xmax, e.ymin, z],
            [e.xmax, e.ymax, z],
            [e.xmin, e.ymax, z],
        ],
        triangles: vec![[0, 1, 2], [0, 2, 3]],
        uv: vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
    }
}

fn push_fixed(out: &mut String, v: f64) {
    let start = out.len();
    let _ = write!(out, "{v:.6}");
    if &out[start..] == "-0.000000" {
        out.truncate(start);
        out.push_str("0.000000");
    }
}

/// Wavefront OBJ text with `v`, `vt` and `f a/a b/b c/c` records.
pub fn export_obj(mesh: &TerrainMesh) -> String {
    let mut out = String::with_capacity(mesh.vertices.len() * 64 + mesh.triangles.len() * 24);
    let _ = writeln!(
        out,
        "# tidelens mesh: {} vertices, {} triangles",
        mesh.vertices.len(),
        mesh.triangles.len()
    );
    for v in &mesh.vertices {
        out.push('v');
        for &x in v {
            out.push(' ');
            push_fixed(&mut out, x);
        }
        out.push('\n');
    }
    for t in &mesh.uv {
        out.push_str("vt");
        for &x in t {
            out.push(' ');
            push_fixed(&mut out, x);
        }
        out.push('\n');
    }
    for t in &mesh.triangles {
        let [a, b, c] = t.map(|i| i + 1);
        let _ = writeln!(out, "f {a}/{a} {b}/{b} {c}/{c}");
    }
    out
}

/// Binary PGM (P5): 255 flooded, 0 dry.
pub fn encode_mask_pgm(mask: &FloodMask) -> Vec<u8> {
    let header = format!("P5\n{} {}\n255\n", mask.ncols(), mask.nrows());
    let mut out = Vec::with_capacity(header.len() + mask.cells().len());
    out.extend_from_slice(header.as_bytes());
    out.extend(mask.cells().iter().map(|&f| if f { 255u8 } else { 0 }));
    out
}

/// Reads back the output of [`encode_mask_pgm`]. Any non-zero byte counts
/// as flooded.
pub fn decode_mask_pgm(bytes: &[u8], level: f64) -> Result<FloodMask, SceneError> {
    let bad = |m: &str| SceneError::MalformedPgm(m.to_string());
    let mut fields = Vec::with_capacity(4);
    let mut pos = 0;
    while fields.len() < 4 {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(bad("truncated header"));
        }
        fields.push(std::str::from_utf8(&bytes[start..pos]).map_err(|_| bad("non-ASCII header"))?);
    }
    // Exactly one whitespace byte separates the header from the raster.
    pos += 1;
    if fields[0] != "P5" {
        return Err(bad("missing P5 magic"));
    }
    let parse = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| bad("non-numeric header field"))
    };
    let (ncols, nrows, maxval) = (parse(fields[1])?, parse(fields[2])?, parse(fields[3])?);
    if maxval != 255 {
        return Err(bad("maxval must be 255"));
    }
    let body = bytes.get(pos..).unwrap_or_default();
    if body.len() != nrows * ncols {
        return Err(bad("raster length does not match header"));
    }
    let cells = body.iter().map(|&b| b != 0).collect();
    FloodMask::from_cells(nrows, ncols, level, cells).ok_or_else(|| bad("dimension overflow"))
}

/// JSON form of a run-length encoded mask.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaskRle {
    pub nrows: usize,
    pub ncols: usize,
    pub level: f64,
    /// Alternating dry/wet run lengths over the row-major cells, dry first.
    pub runs: Vec<usize>,
}

impl MaskRle {
    pub fn from_mask(mask: &FloodMask) -> Self {
        let mut runs = Vec::new();
        let mut current = false;
        let mut len = 0usize;
        for &cell in mask.cells() {
            if cell == current {
                len += 1;
            } else {
                runs.push(len);
                current = cell;
                len = 1;
            }
        }
        runs.push(len);
        Self {
            nrows: mask.nrows(),
            ncols: mask.ncols(),
            level: mask.level(),
            runs,
        }
    }

    pub fn to_mask(&self) -> Result<FloodMask, SceneError> {
        let total = self.nrows * self.ncols;
        let sum: usize = self.runs.iter().sum();
        if sum != total {
            return Err(SceneError::MalformedRle(format!(
                "runs sum to {sum}, expected {total}"
            )));
        }
        let mut cells = Vec::with_capacity(total);
        for (i, &run) in self.runs.iter().enumerate() {
            cells.extend(std::iter::repeat_n(i % 2 == 1, run));
        }
        FloodMask::from_cells(self.nrows, self.ncols, self.level, cells)
            .ok_or_else(|| SceneError::MalformedRle("dimension overflow".into()))
    }
}

pub fn encode_mask_rle(mask: &FloodMask) -> String {
    // Serializing plain integers and one finite float cannot fail.
    serde_json::to_string(&MaskRle::from_mask(mask)).expect("mask RLE serializes")
}

pub fn decode_mask_rle(text: &str) -> Result<FloodMask, SceneError> {
    let rle: MaskRle =
        serde_json::from_str(text).map_err(|e| SceneError::MalformedRle(e.to_string()))?;
    rle.to_mask()
}
