//! Region lattice geometry shared by every pipeline stage.
//!
//! The map is a `width x height` grid of rectangular cells. Region IDs
//! are 1-based and assigned sequentially from the lower-left corner to
//! the upper-right, row by row: region 1 sits at `(0, 0)`, region
//! `width` at `(width-1, 0)`, region `width+1` at `(0, 1)`.

use crate::{Error, Result};

/// A region identifier, 1-based. Validity against a particular grid is
/// checked by the [`Grid`] methods that consume it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RegionId(u32);

impl RegionId {
    /// Creates an ID. IDs start at 1; zero is rejected.
    pub fn new(id: u32) -> Result<Self> {
        if id == 0 {
            return Err(Error::RegionOutOfRange { id, regions: 0 });
        }
        Ok(RegionId(id))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// 0-based index for vector lookups.
    pub fn index(self) -> usize {
        (self.0 - 1) as usize
    }

    /// Inverse of [`RegionId::index`].
    pub fn from_index(index: usize) -> Self {
        RegionId(index as u32 + 1)
    }
}

impl std::fmt::Display for RegionId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Rectangular region lattice with physical cell dimensions in meters.
///
/// Cells are not necessarily square; width and height are stored
/// separately. Immutable after construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    width: u32,
    height: u32,
    cell_width_m: f64,
    cell_height_m: f64,
}

impl Grid {
    pub fn new(width: u32, height: u32, cell_width_m: f64, cell_height_m: f64) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Config(format!(
                "grid dimensions must be at least 1x1, got {width}x{height}"
            )));
        }
        if !(cell_width_m > 0.0) || !(cell_height_m > 0.0) {
            return Err(Error::Config(format!(
                "cell dimensions must be positive, got {cell_width_m}m x {cell_height_m}m"
            )));
        }
        Ok(Grid {
            width,
            height,
            cell_width_m,
            cell_height_m,
        })
    }

    /// The 32x32 lattice of 341m-wide, 347m-high cells.
    pub fn contest_default() -> Self {
        Grid {
            width: 32,
            height: 32,
            cell_width_m: 341.0,
            cell_height_m: 347.0,
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn cell_width_m(&self) -> f64 {
        self.cell_width_m
    }

    pub fn cell_height_m(&self) -> f64 {
        self.cell_height_m
    }

    pub fn region_count(&self) -> u32 {
        self.width * self.height
    }

    pub fn contains(&self, r: RegionId) -> bool {
        r.get() >= 1 && r.get() <= self.region_count()
    }

    pub fn check(&self, r: RegionId) -> Result<()> {
        if self.contains(r) {
            Ok(())
        } else {
            Err(Error::RegionOutOfRange {
                id: r.get(),
                regions: self.region_count(),
            })
        }
    }

    /// Column/row of a region, both 0-based.
    pub fn coords(&self, r: RegionId) -> Result<(u32, u32)> {
        self.check(r)?;
        let i = r.get() - 1;
        Ok((i % self.width, i / self.width))
    }

    /// Region at column `x`, row `y`.
    pub fn region_at(&self, x: u32, y: u32) -> Result<RegionId> {
        if x >= self.width || y >= self.height {
            return Err(Error::CoordsOutOfRange {
                x,
                y,
                width: self.width,
                height: self.height,
            });
        }
        Ok(RegionId(1 + x + y * self.width))
    }

    /// Center point of a region in meters from the grid origin.
    pub fn center_m(&self, r: RegionId) -> Result<(f64, f64)> {
        let (x, y) = self.coords(r)?;
        Ok((
            (x as f64 + 0.5) * self.cell_width_m,
            (y as f64 + 0.5) * self.cell_height_m,
        ))
    }

    /// Euclidean distance between region center points, in meters.
    pub fn distance(&self, a: RegionId, b: RegionId) -> Result<f64> {
        let (ax, ay) = self.coords(a)?;
        let (bx, by) = self.coords(b)?;
        let dx = (ax as f64 - bx as f64) * self.cell_width_m;
        let dy = (ay as f64 - by as f64) * self.cell_height_m;
        Ok((dx * dx + dy * dy).sqrt())
    }

    /// The up-to-8 surrounding regions of `r` together with their
    /// lattice distance normalized so orthogonal neighbors are at 1
    /// (diagonal neighbors at sqrt(2)). Edge regions get only in-grid
    /// neighbors.
    pub fn neighbors8(&self, r: RegionId) -> Result<Vec<(RegionId, f64)>> {
        let (x, y) = self.coords(r)?;
        let mut out = Vec::with_capacity(8);
        for dy in -1i64..=1 {
            for dx in -1i64..=1 {
                if dx == 0 && dy == 0 {
                    continue;
                }
                let nx = x as i64 + dx;
                let ny = y as i64 + dy;
                if nx < 0 || ny < 0 || nx >= self.width as i64 || ny >= self.height as i64 {
                    continue;
                }
                let d = if dx != 0 && dy != 0 {
                    std::f64::consts::SQRT_2
                } else {
                    1.0
                };
                out.push((self.region_at(nx as u32, ny as u32)?, d));
            }
        }
        Ok(out)
    }

    /// All regions in ascending ID order.
    pub fn regions(&self) -> impl Iterator<Item = RegionId> {
        (1..=self.region_count()).map(RegionId)
    }
}
