//! DEM ingestion and geodetic helpers.

mod dem;
mod geo;

pub use dem::{parse_ascii_grid, Dem, Extent, GridError, GridHeader, SampleError, DEFAULT_NODATA};
pub use geo::{
    bearing_distance, BearingDistance, GeoAnchor, GeoCoord, GeoError, LocalCoord, EARTH_RADIUS_M,
    MAX_ANCHOR_LAT_OFFSET_DEG,
};
