//! Points of interest and their per-year flood views.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geodata::{Dem, GeoAnchor, GeoCoord, GeoError, LocalCoord, SampleError};
use crate::inundation::FloodMask;
use crate::sealevel::{self, SeaLevelCurve, TimelineError};

#[derive(Debug, Error, PartialEq)]
pub enum CatalogError {
    #[error("invalid POI catalog JSON: {0}")]
    InvalidJson(String),
    #[error("record {index}: missing field `{field}`")]
    MissingField { index: usize, field: &'static str },
    #[error("duplicate POI id `{0}`")]
    DuplicateId(String),
    #[error("POI `{id}` lies outside the scene: {reason}")]
    PositionOutsideScene { id: String, reason: String },
}

#[derive(Debug, Error, PartialEq)]
pub enum ViewError {
    #[error(transparent)]
    Timeline(#[from] TimelineError),
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error(transparent)]
    Geo(#[from] GeoError),
    #[error("POI `{0}` is not inside any DEM cell")]
    OutsideGrid(String),
    #[error("mask is {found_rows}x{found_cols}, DEM is {nrows}x{ncols}")]
    DimensionMismatch {
        nrows: usize,
        ncols: usize,
        found_rows: usize,
        found_cols: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Poi {
    pub id: String,
    pub name: String,
    pub position: GeoCoord,
    pub blurb: String,
    #[serde(default)]
    pub media_refs: Vec<String>,
}

#[derive(Deserialize)]
struct PoiRecord {
    id: Option<String>,
    name: Option<String>,
    position: Option<GeoCoord>,
    blurb: Option<String>,
    #[serde(default)]
    media_refs: Option<Vec<String>>,
}

/// POIs keyed by id.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Catalog {
    pois: BTreeMap<String, Poi>,
}

impl Catalog {
    pub fn len(&self) -> usize {
        self.pois.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pois.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Poi> {
        self.pois.get(id)
    }

    /// POIs in id order.
    pub fn iter(&self) -> impl Iterator<Item = &Poi> {
        self.pois.values()
    }
}

/// Loads a JSON array of POI records and checks that each one projects
/// into the DEM.
pub fn load_pois(text: &str, dem: &Dem, anchor: &GeoAnchor) -> Result<Catalog, CatalogError> {
    let records: Vec<PoiRecord> =
        serde_json::from_str(text).map_err(|e| CatalogError::InvalidJson(e.to_string()))?;
    let mut pois = BTreeMap::new();
    for (index, rec) in records.into_iter().enumerate() {
        let missing = |field| CatalogError::MissingField { index, field };
        let poi = Poi {
            id: rec.id.ok_or_else(|| missing("id"))?,
            name: rec.name.ok_or_else(|| missing("name"))?,
            position: rec.position.ok_or_else(|| missing("position"))?,
            blurb: rec.blurb.ok_or_else(|| missing("blurb"))?,
            media_refs: rec.media_refs.unwrap_or_default(),
        };
        let outside = |reason: String| CatalogError::PositionOutsideScene {
            id: poi.id.clone(),
            reason,
        };
        let local = anchor
            .geo_to_local(poi.position)
            .map_err(|e| outside(e.to_string()))?;
        if dem.containing_cell(local).is_none() {
            return Err(outside(format!(
                "projects to ({:.3}, {:.3})",
                local.x, local.y
            )));
        }
        if pois.contains_key(&poi.id) {
            return Err(CatalogError::DuplicateId(poi.id));
        }
        pois.insert(poi.id.clone(), poi);
    }
    Ok(Catalog { pois })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoiView {
    pub poi: Poi,
    pub local: LocalCoord,
    pub ground_elevation: f64,
    pub year: i32,
    pub water_level: f64,
    pub flooded: bool,
    /// Meters of water over the ground, zero when dry.
    pub depth: f64,
}

/// Combines a POI with the flood state of its containing cell in `mask`.
///
/// `mask` must have been computed at `curve.level_for_year(year)`.
pub fn poi_view(
    poi: &Poi,
    dem: &Dem,
    anchor: &GeoAnchor,
    curve: &SeaLevelCurve,
    year: i32,
    mask: &FloodMask,
) -> Result<PoiView, ViewError> {
    sealevel::slider_for_year(year as i64)?;
    if mask.nrows() != dem.nrows() || mask.ncols() != dem.ncols() {
        return Err(ViewError::DimensionMismatch {
            nrows: dem.nrows(),
            ncols: dem.ncols(),
            found_rows: mask.nrows(),
            found_cols: mask.ncols(),
        });
    }
    let local = anchor.geo_to_local(poi.position)?;
    let (row, col) = dem
        .containing_cell(local)
        .ok_or_else(|| ViewError::OutsideGrid(poi.id.clone()))?;
    let ground_elevation = dem.sample_elevation(local)?;
    let water_level = curve.level_for_year(year as f64);
    let flooded = mask.is_flooded(row, col);
    let depth = if flooded {
        (water_level - ground_elevation).max(0.0)
    } else {
        0.0
    };
    Ok(PoiView {
        poi: poi.clone(),
        local,
        ground_elevation,
        year,
        water_level,
        flooded,
        depth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodata::parse_ascii_grid;
    use crate::inundation::threshold_mask;
    use crate::sealevel::parse_curve;

    fn fixture() -> (Dem, GeoAnchor) {
        // 4x4 grid, 10 m cells, lower-left at (0, 0).
        let dem = parse_ascii_grid(
            "ncols 4\nnrows 4\nxllcorner 0\nyllcorner 0\ncellsize 10\n\
             3 3 3 3\n2 2 2 2\n1 1 1 1\n0.5 0.5 0.5 0.5\n",
        )
        .unwrap();
        let anchor = GeoAnchor::new(
            GeoCoord {
                lat: 53.5,
                lon: -6.1,
            },
            LocalCoord { x: 20.0, y: 20.0 },
        )
        .unwrap();
        (dem, anchor)
    }

    fn record(id: &str, lat: f64) -> String {
        format!(
            r#"{{"id":"{id}","name":"n","position":{{"lat":{lat},"lon":-6.1}},"blurb":"b","media_refs":["media/x.txt"]}}"#
        )
    }

    #[test]
    fn loads_five_records() {
        let (dem, anchor) = fixture();
        let recs: Vec<String> = ["a", "b", "c", "d", "e"]
            .iter()
            .map(|id| record(id, 53.5))
            .collect();
        let cat = load_pois(&format!("[{}]", recs.join(",")), &dem, &anchor).unwrap();
        assert_eq!(cat.len(), 5);
        assert_eq!(cat.get("c").unwrap().media_refs, vec!["media/x.txt"]);
    }

    #[test]
    fn load_errors() {
        let (dem, anchor) = fixture();
        let dup = format!("[{},{}]", record("a", 53.5), record("a", 53.5));
        assert_eq!(
            load_pois(&dup, &dem, &anchor),
            Err(CatalogError::DuplicateId("a".into()))
        );

        // 0.001 deg north is ~111 m, far outside a 40 m grid.
        let far = format!("[{}]", record("far", 53.501));
        assert!(matches!(
            load_pois(&far, &dem, &anchor),
            Err(CatalogError::PositionOutsideScene { .. })
        ));

        let missing = r#"[{"id":"a","name":"n","blurb":"b"}]"#;
        assert_eq!(
            load_pois(missing, &dem, &anchor),
            Err(CatalogError::MissingField {
                index: 0,
                field: "position"
            })
        );
        assert!(matches!(
            load_pois("{", &dem, &anchor),
            Err(CatalogError::InvalidJson(_))
        ));
    }

    #[test]
    fn views_report_depth_only_when_flooded() {
        let (dem, anchor) = fixture();
        let curve = parse_curve("2021,0\n2100,1.0").unwrap();
        let poi = Poi {
            id: "p".into(),
            name: "p".into(),
            // Anchor sits on the corner shared by four cells; lat offset moves
            // it to the center of cell (3, 1) at (15, 5).
            position: anchor.local_to_geo(LocalCoord { x: 15.0, y: 5.0 }).unwrap(),
            blurb: String::new(),
            media_refs: vec![],
        };
        let dry = threshold_mask(&dem, 0.0);
        let v = poi_view(&poi, &dem, &anchor, &curve, 2021, &dry).unwrap();
        assert!(!v.flooded);
        assert_eq!(v.depth, 0.0);

        let wet = threshold_mask(&dem, 1.0);
        let v = poi_view(&poi, &dem, &anchor, &curve, 2100, &wet).unwrap();
        assert!(v.flooded);
        assert!((v.ground_elevation - 0.5).abs() < 1e-9);
        assert!((v.depth - 0.5).abs() < 1e-9);

        let rainy = parse_curve("2021,0\n2100,0.5").unwrap();
        let at_level = threshold_mask(&dem, 0.5);
        let v = poi_view(&poi, &dem, &anchor, &rainy, 2100, &at_level).unwrap();
        assert!(v.flooded);
        assert!(v.depth.abs() < 1e-9);

        assert!(matches!(
            poi_view(&poi, &dem, &anchor, &curve, 2101, &wet),
            Err(ViewError::Timeline(TimelineError::YearOutOfRange(2101)))
        ));
    }
}
