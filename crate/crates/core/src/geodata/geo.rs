//! Geodetic positions, the scene anchor and great-circle navigation.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// IUGG mean Earth radius in meters.
pub const EARTH_RADIUS_M: f64 = 6_371_008.8;

/// Maximum latitude offset from the anchor for the tangent-plane projection.
pub const MAX_ANCHOR_LAT_OFFSET_DEG: f64 = 1.0;

#[derive(Debug, Error, PartialEq)]
pub enum GeoError {
    #[error("latitude {0} outside [-90, 90]")]
    InvalidLatitude(f64),
    #[error("longitude {0} outside (-180, 180]")]
    InvalidLongitude(f64),
    #[error("{lat} is more than 1 degree of latitude from the anchor at {anchor_lat}")]
    AnchorTooFar { lat: f64, anchor_lat: f64 },
    #[error("non-finite local coordinate ({x}, {y})")]
    NonFinite { x: f64, y: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoCoord {
    pub lat: f64,
    pub lon: f64,
}

impl GeoCoord {
    pub fn new(lat: f64, lon: f64) -> Result<Self, GeoError> {
        let c = Self { lat, lon };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), GeoError> {
        if !(-90.0..=90.0).contains(&self.lat) {
            return Err(GeoError::InvalidLatitude(self.lat));
        }
        if !(self.lon > -180.0 && self.lon <= 180.0) {
            return Err(GeoError::InvalidLongitude(self.lon));
        }
        Ok(())
    }
}

/// Scene-space position in meters: x east, y north.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalCoord {
    pub x: f64,
    pub y: f64,
}

/// Ties one geodetic position to one scene position. Scene north is +y.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeoAnchor {
    origin_geo: GeoCoord,
    origin_local: LocalCoord,
}

impl GeoAnchor {
    pub fn new(origin_geo: GeoCoord, origin_local: LocalCoord) -> Result<Self, GeoError> {
        origin_geo.validate()?;
        if !origin_local.x.is_finite() || !origin_local.y.is_finite() {
            return Err(GeoError::NonFinite {
                x: origin_local.x,
                y: origin_local.y,
            });
        }
        Ok(Self {
            origin_geo,
            origin_local,
        })
    }

    pub fn origin_geo(&self) -> GeoCoord {
        self.origin_geo
    }

    pub fn origin_local(&self) -> LocalCoord {
        self.origin_local
    }

    /// Equirectangular projection onto the anchor's tangent plane.
    pub fn geo_to_local(&self, g: GeoCoord) -> Result<LocalCoord, GeoError> {
        g.validate()?;
        let o = self.origin_geo;
        if (g.lat - o.lat).abs() >= MAX_ANCHOR_LAT_OFFSET_DEG {
            return Err(GeoError::AnchorTooFar {
                lat: g.lat,
                anchor_lat: o.lat,
            });
        }
        let dlon = wrap_lon_delta(g.lon - o.lon);
        let x = EARTH_RADIUS_M * dlon.to_radians() * o.lat.to_radians().cos();
        let y = EARTH_RADIUS_M * (g.lat - o.lat).to_radians();
        Ok(LocalCoord {
            x: x + self.origin_local.x,
            y: y + self.origin_local.y,
        })
    }

    /// Inverse of [`GeoAnchor::geo_to_local`].
    pub fn local_to_geo(&self, p: LocalCoord) -> Result<GeoCoord, GeoError> {
        if !p.x.is_finite() || !p.y.is_finite() {
            return Err(GeoError::NonFinite { x: p.x, y: p.y });
        }
        let o = self.origin_geo;
        let dx = p.x - self.origin_local.x;
        let dy = p.y - self.origin_local.y;
        let lat = o.lat + (dy / EARTH_RADIUS_M).to_degrees();
        let lon = o.lon + (dx / (EARTH_RADIUS_M * o.lat.to_radians().cos())).to_degrees();
        Ok(GeoCoord {
            lat,
            lon: normalize_lon(lon),
        })
    }
}

fn wrap_lon_delta(d: f64) -> f64 {
    if d > 180.0 {
        d - 360.0
    } else if d <= -180.0 {
        d + 360.0
    } else {
        d
    }
}

fn normalize_lon(lon: f64) -> f64 {
    if lon > 180.0 {
        lon - 360.0
    } else if lon <= -180.0 {
        lon + 360.0
    } else {
        lon
    }
}

/// Initial great-circle bearing and haversine distance from `a` to `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BearingDistance {
    /// Degrees clockwise from north in `[0, 360)`.
    pub bearing: f64,
    /// Meters along the sphere.
    pub distance: f64,
}

pub fn bearing_distance(a: GeoCoord, b: GeoCoord) -> BearingDistance {
    if a == b {
        return BearingDistance {
            bearing: 0.0,
            distance: 0.0,
        };
    }
    let (lat1, lon1) = (a.lat.to_radians(), a.lon.to_radians());
    let (lat2, lon2) = (b.lat.to_radians(), b.lon.to_radians());
    let dlat = lat2 - lat1;
    let dlon = lon2 - lon1;

    let h = (dlat / 2.0).sin().powi(2) + lat1.cos() * lat2.cos() * (dlon / 2.0).sin().powi(2);
    let distance = 2.0 * EARTH_RADIUS_M * h.sqrt().min(1.0).asin();

    let y = dlon.sin() * lat2.cos();
    let x = lat1.cos() * lat2.sin() - lat1.sin() * lat2.cos() * dlon.cos();
    let mut bearing = y.atan2(x).to_degrees().rem_euclid(360.0);
    if bearing >= 360.0 {
        bearing = 0.0;
    }
    BearingDistance { bearing, distance }
}
