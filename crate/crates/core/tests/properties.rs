mod common;

use std::collections::VecDeque;

use proptest::prelude::*;
use tidelens::geodata::{bearing_distance, GeoAnchor, GeoCoord, LocalCoord};
use tidelens::inundation::{
    boundary_seeds, flood_mask, threshold_mask, Connectivity, FloodMask, SpillLevels,
};
use tidelens::scene::{decode_mask_pgm, decode_mask_rle, encode_mask_pgm, encode_mask_rle};
use tidelens::sealevel::{parse_curve, slider_for_year, year_for_slider};

use common::{grid, oracle_flood, NODATA};

fn dem_strategy() -> impl Strategy<Value = tidelens::Dem> {
    (2usize..=12, 2usize..=12).prop_flat_map(|(nr, nc)| {
        prop::collection::vec(
            prop_oneof![1 => Just(NODATA), 9 => (-10i32..=40).prop_map(|v| v as f64 / 10.0)],
            nr * nc,
        )
        .prop_map(move |values| grid(nr, nc, values))
    })
}

fn connectivity() -> impl Strategy<Value = Connectivity> {
    prop_oneof![Just(Connectivity::Four), Just(Connectivity::Eight)]
}

fn connected(dem: &tidelens::Dem, level: f64, conn: Connectivity) -> FloodMask {
    let seeds = boundary_seeds(dem, level, None).unwrap();
    flood_mask(dem, level, &seeds, conn).unwrap()
}

proptest! {
    #[test]
    fn connected_flood_is_subset_of_threshold(dem in dem_strategy(), level in -1.5f64..4.5, conn in connectivity()) {
        let m = connected(&dem, level, conn);
        prop_assert!(m.is_subset_of(&threshold_mask(&dem, level)));
        for (r, c) in m.flooded() {
            let z = dem.elevation(r, c);
            prop_assert!(matches!(z, Some(z) if z <= level));
        }
    }

    #[test]
    fn flooding_is_monotone_in_level(dem in dem_strategy(), a in -1.5f64..4.5, b in -1.5f64..4.5, conn in connectivity()) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(connected(&dem, lo, conn).is_subset_of(&connected(&dem, hi, conn)));
    }

    #[test]
    fn every_flooded_cell_reaches_a_seed(dem in dem_strategy(), level in -1.5f64..4.5, conn in connectivity()) {
        let m = connected(&dem, level, conn);
        let seeds = boundary_seeds(&dem, level, None).unwrap();
        // Walk backwards from the seeds through flooded cells only.
        let (nr, nc) = (dem.nrows(), dem.ncols());
        let mut seen = vec![false; nr * nc];
        let mut queue: VecDeque<(usize, usize)> = seeds.iter().copied().filter(|&(r, c)| m.is_flooded(r, c)).collect();
        for &(r, c) in &queue {
            seen[r * nc + c] = true;
        }
        let diag = conn == Connectivity::Eight;
        while let Some((r, c)) = queue.pop_front() {
            for dr in -1isize..=1 {
                for dc in -1isize..=1 {
                    if (dr == 0 && dc == 0) || (!diag && dr != 0 && dc != 0) {
                        continue;
                    }
                    let (Some(rr), Some(cc)) = (r.checked_add_signed(dr), c.checked_add_signed(dc)) else { continue };
                    if rr < nr && cc < nc && !seen[rr * nc + cc] && m.is_flooded(rr, cc) {
                        seen[rr * nc + cc] = true;
                        queue.push_back((rr, cc));
                    }
                }
            }
        }
        prop_assert_eq!(seen, m.cells().to_vec());
    }

    #[test]
    fn flood_matches_union_find_oracle(dem in dem_strategy(), level in -1.5f64..4.5, conn in connectivity()) {
        let m = connected(&dem, level, conn);
        let expected = oracle_flood(&dem, level, None, conn == Connectivity::Eight);
        prop_assert_eq!(m.cells(), &expected[..]);
    }

    #[test]
    fn seed_order_does_not_matter(dem in dem_strategy(), level in -1.5f64..4.5, conn in connectivity()) {
        let mut seeds = boundary_seeds(&dem, level, None).unwrap();
        let a = flood_mask(&dem, level, &seeds, conn).unwrap();
        seeds.reverse();
        let b = flood_mask(&dem, level, &seeds, conn).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn spill_levels_agree_with_bfs(dem in dem_strategy(), level in -1.5f64..4.5, conn in connectivity()) {
        let spill = SpillLevels::compute(&dem, None, conn).unwrap();
        prop_assert_eq!(spill.mask_at(level), connected(&dem, level, conn));
    }

    #[test]
    fn spill_levels_agree_with_bfs_for_override_seeds(dem in dem_strategy(), level in -1.5f64..4.5, pick in 0usize..1000) {
        let cell = (pick % dem.nrows(), (pick / 7) % dem.ncols());
        let overrides = [cell];
        let seeds = boundary_seeds(&dem, level, Some(&overrides)).unwrap();
        let bfs = flood_mask(&dem, level, &seeds, Connectivity::Four).unwrap();
        let spill = SpillLevels::compute(&dem, Some(&overrides), Connectivity::Four).unwrap();
        prop_assert_eq!(spill.mask_at(level), bfs);
    }

    #[test]
    fn mask_encodings_round_trip(nr in 1usize..20, nc in 1usize..20, bits in prop::collection::vec(any::<bool>(), 400), level in -2.0f64..2.0) {
        let cells = bits[..nr * nc].to_vec();
        let mask = FloodMask::from_cells(nr, nc, level, cells).unwrap();
        prop_assert_eq!(&decode_mask_rle(&encode_mask_rle(&mask)).unwrap(), &mask);
        prop_assert_eq!(&decode_mask_pgm(&encode_mask_pgm(&mask), level).unwrap(), &mask);
    }

    #[test]
    fn geo_local_round_trip(lat0 in -80.0f64..80.0, lon0 in -179.0f64..179.0, dlat in -0.99f64..0.99, dlon in -0.9f64..0.9, ox in -1e5f64..1e5, oy in -1e5f64..1e5) {
        let anchor = GeoAnchor::new(GeoCoord::new(lat0, lon0).unwrap(), LocalCoord { x: ox, y: oy }).unwrap();
        let g = GeoCoord::new(lat0 + dlat, lon0 + dlon).unwrap();
        let p = anchor.geo_to_local(g).unwrap();
        let back = anchor.local_to_geo(p).unwrap();
        prop_assert!((back.lat - g.lat).abs() < 1e-9);
        prop_assert!((back.lon - g.lon).abs() < 1e-9);
        let again = anchor.geo_to_local(back).unwrap();
        prop_assert!((again.x - p.x).abs() < 1e-4 && (again.y - p.y).abs() < 1e-4);
    }

    #[test]
    fn haversine_is_symmetric(lat1 in -89.0f64..89.0, lon1 in -179.0f64..180.0, lat2 in -89.0f64..89.0, lon2 in -179.0f64..180.0) {
        let a = GeoCoord::new(lat1, lon1).unwrap();
        let b = GeoCoord::new(lat2, lon2).unwrap();
        let ab = bearing_distance(a, b);
        let ba = bearing_distance(b, a);
        prop_assert!(ab.distance >= 0.0);
        prop_assert!((ab.distance - ba.distance).abs() <= 1e-9 * ab.distance.max(1.0));
        prop_assert!((0.0..360.0).contains(&ab.bearing));
    }

    #[test]
    fn monotone_curves_interpolate_monotonically(steps in prop::collection::vec(0.0f64..0.3, 2..12), y1 in 2021.0f64..2100.0, y2 in 2021.0f64..2100.0) {
        let n = steps.len();
        let mut level = 0.0;
        let mut csv = String::new();
        for (i, s) in steps.iter().enumerate() {
            level += s;
            let year = 2021 + (79 * i / (n - 1)) as i32;
            csv.push_str(&format!("{year},{level}\n"));
        }
        let curve = parse_curve(&csv).unwrap();
        let (lo, hi) = if y1 <= y2 { (y1, y2) } else { (y2, y1) };
        prop_assert!(curve.level_for_year(lo) <= curve.level_for_year(hi));
    }
}

#[test]
fn slider_round_trips_everywhere() {
    for i in 0..80 {
        assert_eq!(
            slider_for_year(year_for_slider(i).unwrap() as i64).unwrap(),
            i as usize
        );
    }
}
