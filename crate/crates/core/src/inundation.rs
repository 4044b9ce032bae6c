//! Connected bathtub inundation.
//!
//! A cell is flooded at level `L` when it holds data, its elevation is
//! `<= L`, and it connects to an ocean seed through cells that satisfy the
//! same test. NoData is impassable.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geodata::Dem;

/// `(row, col)`
pub type Cell = (usize, usize);

#[derive(Debug, Error, PartialEq)]
pub enum InundationError {
    #[error("seed ({row}, {col}) outside the {nrows}x{ncols} grid")]
    SeedOutOfBounds {
        row: usize,
        col: usize,
        nrows: usize,
        ncols: usize,
    },
    #[error("mask is {found_rows}x{found_cols} but expected {nrows}x{ncols}")]
    DimensionMismatch {
        nrows: usize,
        ncols: usize,
        found_rows: usize,
        found_cols: usize,
    },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Connectivity {
    #[default]
    Four,
    Eight,
}

impl Connectivity {
    fn offsets(self) -> &'static [(isize, isize)] {
        const FOUR: [(isize, isize); 4] = [(-1, 0), (0, -1), (0, 1), (1, 0)];
        const EIGHT: [(isize, isize); 8] = [
            (-1, -1),
            (-1, 0),
            (-1, 1),
            (0, -1),
            (0, 1),
            (1, -1),
            (1, 0),
            (1, 1),
        ];
        match self {
            Connectivity::Four => &FOUR,
            Connectivity::Eight => &EIGHT,
        }
    }

    pub fn as_u8(self) -> u8 {
        match self {
            Connectivity::Four => 4,
            Connectivity::Eight => 8,
        }
    }
}

impl TryFrom<u8> for Connectivity {
    type Error = String;

    fn try_from(v: u8) -> Result<Self, Self::Error> {
        match v {
            4 => Ok(Connectivity::Four),
            8 => Ok(Connectivity::Eight),
            other => Err(format!("connectivity must be 4 or 8, got {other}")),
        }
    }
}

impl From<Connectivity> for u8 {
    fn from(c: Connectivity) -> u8 {
        c.as_u8()
    }
}

#[inline]
fn neighbours(
    nrows: usize,
    ncols: usize,
    row: usize,
    col: usize,
    conn: Connectivity,
) -> impl Iterator<Item = Cell> {
    conn.offsets().iter().filter_map(move |&(dr, dc)| {
        let r = row.checked_add_signed(dr)?;
        let c = col.checked_add_signed(dc)?;
        (r < nrows && c < ncols).then_some((r, c))
    })
}

/// Row-major flooded/dry grid computed at one water level.
#[derive(Debug, Clone, PartialEq)]
pub struct FloodMask {
    nrows: usize,
    ncols: usize,
    level: f64,
    cells: Vec<bool>,
}

impl FloodMask {
    pub fn empty(nrows: usize, ncols: usize, level: f64) -> Self {
        Self {
            nrows,
            ncols,
            level,
            cells: vec![false; nrows * ncols],
        }
    }

    /// Wraps raw row-major cells. Returns `None` on a length mismatch.
    pub fn from_cells(nrows: usize, ncols: usize, level: f64, cells: Vec<bool>) -> Option<Self> {
        (cells.len() == nrows * ncols).then_some(Self {
            nrows,
            ncols,
            level,
            cells,
        })
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn level(&self) -> f64 {
        self.level
    }

    pub fn cells(&self) -> &[bool] {
        &self.cells
    }

    #[inline]
    pub fn is_flooded(&self, row: usize, col: usize) -> bool {
        self.cells[row * self.ncols + col]
    }

    pub fn flooded_count(&self) -> usize {
        self.cells.iter().filter(|&&f| f).count()
    }

    /// Flooded cells in row-major order.
    pub fn flooded(&self) -> impl Iterator<Item = Cell> + '_ {
        let ncols = self.ncols;
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, &f)| f)
            .map(move |(i, _)| (i / ncols, i % ncols))
    }

    /// True when every cell flooded here is also flooded in `other`.
    pub fn is_subset_of(&self, other: &FloodMask) -> bool {
        self.cells.len() == other.cells.len()
            && self.cells.iter().zip(&other.cells).all(|(&a, &b)| !a || b)
    }

    fn check_dims(&self, nrows: usize, ncols: usize) -> Result<(), InundationError> {
        if self.nrows == nrows && self.ncols == ncols {
            Ok(())
        } else {
            Err(InundationError::DimensionMismatch {
                nrows,
                ncols,
                found_rows: self.nrows,
                found_cols: self.ncols,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FloodStats {
    pub flooded_cells: usize,
    /// Square meters.
    pub flooded_area: f64,
    /// Share of the non-NoData cells that are flooded.
    pub flooded_fraction: f64,
}

#[inline]
fn wet(dem: &Dem, row: usize, col: usize, level: f64) -> bool {
    matches!(dem.elevation(row, col), Some(z) if z <= level)
}

fn check_seed(dem: &Dem, (row, col): Cell) -> Result<(), InundationError> {
    if dem.in_bounds(row, col) {
        Ok(())
    } else {
        Err(InundationError::SeedOutOfBounds {
            row,
            col,
            nrows: dem.nrows(),
            ncols: dem.ncols(),
        })
    }
}

fn border_cells(dem: &Dem) -> impl Iterator<Item = Cell> + '_ {
    let (nr, nc) = (dem.nrows(), dem.ncols());
    (0..nr).flat_map(move |r| {
        let edge_row = r == 0 || r == nr - 1;
        let cols: Box<dyn Iterator<Item = usize>> = if edge_row {
            Box::new(0..nc)
        } else {
            Box::new([0, nc - 1].into_iter())
        };
        cols.map(move |c| (r, c))
    })
}

/// Ocean entry cells for `level`.
///
/// By default these are the grid-border cells that are wet at `level`. An
/// override list replaces the border entirely; override cells still have to
/// be wet to seed. The result is sorted and free of duplicates.
pub fn boundary_seeds(
    dem: &Dem,
    level: f64,
    overrides: Option<&[Cell]>,
) -> Result<Vec<Cell>, InundationError> {
    let mut seeds: Vec<Cell> = match overrides {
        Some(list) => {
            for &cell in list {
                check_seed(dem, cell)?;
            }
            list.iter()
                .copied()
                .filter(|&(r, c)| wet(dem, r, c, level))
                .collect()
        }
        None => border_cells(dem)
            .filter(|&(r, c)| wet(dem, r, c, level))
            .collect(),
    };
    seeds.sort_unstable();
    seeds.dedup();
    Ok(seeds)
}

/// Breadth-first flood from `seeds` through wet cells. Seeds that are not
/// themselves wet are ignored.
pub fn flood_mask(
    dem: &Dem,
    level: f64,
    seeds: &[Cell],
    connectivity: Connectivity,
) -> Result<FloodMask, InundationError> {
    let (nr, nc) = (dem.nrows(), dem.ncols());
    let mut mask = FloodMask::empty(nr, nc, level);
    let mut queue = VecDeque::new();
    for &seed in seeds {
        check_seed(dem, seed)?;
        let i = dem.index(seed.0, seed.1);
        if !mask.cells[i] && wet(dem, seed.0, seed.1, level) {
            mask.cells[i] = true;
            queue.push_back(seed);
        }
    }
    while let Some((r, c)) = queue.pop_front() {
        for (nr_, nc_) in neighbours(nr, nc, r, c, connectivity) {
            let i = dem.index(nr_, nc_);
            if !mask.cells[i] && wet(dem, nr_, nc_, level) {
                mask.cells[i] = true;
                queue.push_back((nr_, nc_));
            }
        }
    }
    Ok(mask)
}

/// Naive overlay: every data cell at or below `level`, connected or not.
pub fn threshold_mask(dem: &Dem, level: f64) -> FloodMask {
    let cells = dem
        .values()
        .iter()
        .map(|&z| !dem.is_nodata_value(z) && z <= level)
        .collect();
    FloodMask {
        nrows: dem.nrows(),
        ncols: dem.ncols(),
        level,
        cells,
    }
}

pub fn mask_stats(mask: &FloodMask, dem: &Dem) -> Result<FloodStats, InundationError> {
    mask.check_dims(dem.nrows(), dem.ncols())?;
    let flooded_cells = mask.flooded_count();
    let valid = dem.valid_cell_count();
    let cs = dem.cellsize();
    Ok(FloodStats {
        flooded_cells,
        flooded_area: flooded_cells as f64 * cs * cs,
        flooded_fraction: if valid == 0 {
            0.0
        } else {
            flooded_cells as f64 / valid as f64
        },
    })
}

/// Cells flooded in `b` but not in `a`, row-major.
pub fn mask_diff(a: &FloodMask, b: &FloodMask) -> Result<Vec<Cell>, InundationError> {
    a.check_dims(b.nrows, b.ncols)?;
    Ok(b.flooded().filter(|&(r, c)| !a.is_flooded(r, c)).collect())
}

#[derive(Clone, Copy, PartialEq)]
struct Key(f64);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Per-cell spill level: the lowest water level at which each cell floods.
///
/// Computed once by a priority flood from every potential seed; the mask
/// at any level is then a single comparison per cell and agrees exactly
/// with [`flood_mask`] using the same seeding rule. Useful for sweeping
/// the whole timeline.
#[derive(Debug, Clone)]
pub struct SpillLevels {
    nrows: usize,
    ncols: usize,
    /// `+inf` for cells that never flood (NoData or unreachable).
    levels: Vec<f64>,
}

impl SpillLevels {
    pub fn compute(
        dem: &Dem,
        overrides: Option<&[Cell]>,
        connectivity: Connectivity,
    ) -> Result<Self, InundationError> {
        let (nr, nc) = (dem.nrows(), dem.ncols());
        let mut levels = vec![f64::INFINITY; nr * nc];
        let mut done = vec![false; nr * nc];
        let mut heap = BinaryHeap::new();

        let seeds: Vec<Cell> = match overrides {
            Some(list) => {
                for &cell in list {
                    check_seed(dem, cell)?;
                }
                list.to_vec()
            }
            None => border_cells(dem).collect(),
        };
        for (r, c) in seeds {
            if let Some(z) = dem.elevation(r, c) {
                let i = dem.index(r, c);
                if z < levels[i] {
                    levels[i] = z;
                    heap.push(Reverse((Key(z), i)));
                }
            }
        }
        while let Some(Reverse((Key(spill), i))) = heap.pop() {
            if done[i] {
                continue;
            }
            done[i] = true;
            let (r, c) = (i / nc, i % nc);
            for (rr, cc) in neighbours(nr, nc, r, c, connectivity) {
                let j = dem.index(rr, cc);
                if done[j] {
                    continue;
                }
                if let Some(z) = dem.elevation(rr, cc) {
                    let candidate = spill.max(z);
                    if candidate < levels[j] {
                        levels[j] = candidate;
                        heap.push(Reverse((Key(candidate), j)));
                    }
                }
            }
        }
        Ok(Self {
            nrows: nr,
            ncols: nc,
            levels,
        })
    }

    pub fn spill_level(&self, row: usize, col: usize) -> f64 {
        self.levels[row * self.ncols + col]
    }

    pub fn mask_at(&self, level: f64) -> FloodMask {
        FloodMask {
            nrows: self.nrows,
            ncols: self.ncols,
            level,
            cells: self.levels.iter().map(|&s| s <= level).collect(),
        }
    }
}
