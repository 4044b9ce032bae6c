//! Independent oracles and fixtures shared by the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use rand::Rng;
use tidelens::geodata::{Dem, GridHeader};

pub const NODATA: f64 = -9999.0;

pub fn sample_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/sample")
}

pub fn sample_config() -> PathBuf {
    sample_dir().join("config.toml")
}

pub fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

pub fn grid(nrows: usize, ncols: usize, values: Vec<f64>) -> Dem {
    let header = GridHeader {
        ncols,
        nrows,
        xllcorner: 0.0,
        yllcorner: 0.0,
        cellsize: 10.0,
        nodata_value: NODATA,
    };
    Dem::new(header, values).unwrap()
}

/// Random grid up to `max`x`max` with about `nodata_share` NoData cells.
pub fn random_grid(rng: &mut impl Rng, max: usize, nodata_share: f64) -> Dem {
    let nrows = rng.random_range(2..=max);
    let ncols = rng.random_range(2..=max);
    let values = (0..nrows * ncols)
        .map(|_| {
            if rng.random_bool(nodata_share) {
                NODATA
            } else {
                // Quantized so that exact-equality cases with the level occur.
                (rng.random_range(-20..=80) as f64) / 10.0
            }
        })
        .collect();
    grid(nrows, ncols, values)
}

/// Disjoint-set forest, deliberately unrelated to the BFS under test.
struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Threshold, label components, keep the components holding a qualifying
/// seed. Seeds default to the wet border cells.
pub fn oracle_flood(
    dem: &Dem,
    level: f64,
    seeds: Option<&[(usize, usize)]>,
    eight: bool,
) -> Vec<bool> {
    let (nr, nc) = (dem.nrows(), dem.ncols());
    let raw = dem.values();
    let wet: Vec<bool> = raw.iter().map(|&z| z != NODATA && z <= level).collect();
    let mut uf = UnionFind::new(nr * nc);
    for r in 0..nr {
        for c in 0..nc {
            let i = r * nc + c;
            if !wet[i] {
                continue;
            }
            let mut link = |rr: usize, cc: usize| {
                let j = rr * nc + cc;
                if wet[j] {
                    uf.union(i, j);
                }
            };
            if c + 1 < nc {
                link(r, c + 1);
            }
            if r + 1 < nr {
                link(r + 1, c);
            }
            if eight && r + 1 < nr {
                if c + 1 < nc {
                    link(r + 1, c + 1);
                }
                if c > 0 {
                    link(r + 1, c - 1);
                }
            }
        }
    }
    let seed_cells: Vec<usize> = match seeds {
        Some(list) => list.iter().map(|&(r, c)| r * nc + c).collect(),
        None => (0..nr * nc)
            .filter(|i| {
                let (r, c) = (i / nc, i % nc);
                r == 0 || c == 0 || r == nr - 1 || c == nc - 1
            })
            .collect(),
    };
    let mut ocean_roots = std::collections::HashSet::new();
    for i in seed_cells {
        if wet[i] {
            ocean_roots.insert(uf.find(i));
        }
    }
    (0..nr * nc)
        .map(|i| wet[i] && ocean_roots.contains(&uf.find(i)))
        .collect()
}

/// Naive per-cell threshold, for the subset checks.
pub fn oracle_threshold(dem: &Dem, level: f64) -> Vec<bool> {
    dem.values()
        .iter()
        .map(|&z| z != NODATA && z <= level)
        .collect()
}

pub const R: f64 = 6_371_008.8;

/// Unit vector for a geodetic position.
fn unit(lat: f64, lon: f64) -> [f64; 3] {
    let (la, lo) = (lat.to_radians(), lon.to_radians());
    [la.cos() * lo.cos(), la.cos() * lo.sin(), la.sin()]
}

/// Haversine in the atan2 form.
pub fn oracle_distance(lat1: f64, lon1: f64, lat2: f64, lon2: f64) -> f64 {
    let p1 = lat1.to_radians();
    let p2 = lat2.to_radians();
    let dp = p2 - p1;
    let dl = (lon2 - lon1).to_radians();
    let a = (dp / 2.0).sin().powi(2) + p1.cos() * p2.cos() * (dl / 2.0).sin().powi(2);
    2.0 * R * a.sqrt().atan2((1.0 - a).max(0.0).sqrt())
}

/// Initial bearing from the local east/north frame at the start point.
pub fn oracle_bearing(lat1: f64, lon1: f64, lat2: f64, lon2: f64) -> f64 {
    let a = unit(lat1, lon1);
    let b = unit(lat2, lon2);
    let (la, lo) = (lat1.to_radians(), lon1.to_radians());
    let east = [-lo.sin(), lo.cos(), 0.0];
    let north = [-la.sin() * lo.cos(), -la.sin() * lo.sin(), la.cos()];
    // Direction of the great circle at `a` is b projected onto a's tangent plane.
    let dot_ab: f64 = (0..3).map(|i| a[i] * b[i]).sum();
    let t: Vec<f64> = (0..3).map(|i| b[i] - dot_ab * a[i]).collect();
    let e: f64 = (0..3).map(|i| t[i] * east[i]).sum();
    let n: f64 = (0..3).map(|i| t[i] * north[i]).sum();
    let deg = e.atan2(n).to_degrees();
    if deg < 0.0 {
        deg + 360.0
    } else {
        deg
    }
}

/// Smallest signed difference between two bearings, in degrees.
pub fn bearing_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(360.0);
    d.min(360.0 - d)
}

/// Minimal OBJ reader: vertices, texture coordinates, 0-based faces.
pub struct ParsedObj {
    pub vertices: Vec<[f64; 3]>,
    pub uvs: Vec<[f64; 2]>,
    pub faces: Vec<[usize; 3]>,
}

pub fn parse_obj(text: &str) -> ParsedObj {
    let mut obj = ParsedObj {
        vertices: vec![],
        uvs: vec![],
        faces: vec![],
    };
    for line in text.lines() {
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("v") => {
                let v: Vec<f64> = parts.map(|p| p.parse().unwrap()).collect();
                obj.vertices.push([v[0], v[1], v[2]]);
            }
            Some("vt") => {
                let v: Vec<f64> = parts.map(|p| p.parse().unwrap()).collect();
                obj.uvs.push([v[0], v[1]]);
            }
            Some("f") => {
                let idx: Vec<usize> = parts
                    .map(|p| {
                        let (v, t) = p.split_once('/').unwrap();
                        assert_eq!(v, t);
                        v.parse::<usize>().unwrap() - 1
                    })
                    .collect();
                obj.faces.push([idx[0], idx[1], idx[2]]);
            }
            _ => {}
        }
    }
    obj
}

/// Independent PGM reader returning flooded flags.
pub fn read_pgm(bytes: &[u8]) -> (usize, usize, Vec<bool>) {
    let text_end = {
        let mut newlines = 0;
        let mut i = 0;
        while newlines < 3 {
            if bytes[i] == b'\n' {
                newlines += 1;
            }
            i += 1;
        }
        i
    };
    let header = std::str::from_utf8(&bytes[..text_end]).unwrap();
    let mut tokens = header.split_whitespace();
    assert_eq!(tokens.next(), Some("P5"));
    let ncols: usize = tokens.next().unwrap().parse().unwrap();
    let nrows: usize = tokens.next().unwrap().parse().unwrap();
    assert_eq!(tokens.next(), Some("255"));
    let body = &bytes[text_end..];
    assert_eq!(body.len(), nrows * ncols);
    (nrows, ncols, body.iter().map(|&b| b == 255).collect())
}

/// Independent RLE decoder working from raw JSON.
pub fn read_rle(json: &str) -> (usize, usize, f64, Vec<bool>) {
    let v: serde_json::Value = serde_json::from_str(json).unwrap();
    let nrows = v["nrows"].as_u64().unwrap() as usize;
    let ncols = v["ncols"].as_u64().unwrap() as usize;
    let level = v["level"].as_f64().unwrap();
    let mut cells = Vec::new();
    let mut wet = false;
    for run in v["runs"].as_array().unwrap() {
        for _ in 0..run.as_u64().unwrap() {
            cells.push(wet);
        }
        wet = !wet;
    }
    (nrows, ncols, level, cells)
}
