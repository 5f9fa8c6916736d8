//! Digital Elevation Model: rasterize a point cloud onto a plane through
//! its centroid, and reconstruct a cloud from a DEM.
//!
//! The grid is axis-aligned. Heights are stored relative to `plane_z`;
//! unoccupied cells hold exactly 0 so the spectral path sees a hole-free
//! grid, and the occupancy mask keeps reconstruction from fabricating
//! points there.

use crate::error::{Error, Result};
use crate::io::{Point3, PointCloud};

/// Guard for quotients that land one ulp below an integer (e.g.
/// 0.3/0.1 = 2.9999999999999996). Keeps cell-center clouds binning back
/// into their own cells.
const CELL_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Dem {
    /// Cell count along x.
    pub width: usize,
    /// Cell count along y.
    pub height: usize,
    /// Meters per cell side.
    pub resolution: f64,
    /// World coordinates of the minimum corner of cell (0, 0).
    pub origin_x: f64,
    pub origin_y: f64,
    /// z of the projection plane (centroid z of the source cloud).
    pub plane_z: f64,
    /// Heights relative to `plane_z`, row-major (y outer, x inner).
    pub heights: Vec<f64>,
    /// Row-major occupancy mask, same layout as `heights`.
    pub occupancy: Vec<bool>,
}

impl Dem {
    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.width + i
    }

    pub fn cells(&self) -> usize {
        self.width * self.height
    }

    pub fn occupied_cells(&self) -> usize {
        self.occupancy.iter().filter(|&&o| o).count()
    }
}

/// Rasterize `cloud` at `resolution` meters per cell. Cells hit by several
/// points store the mean height; points landing exactly on the max edge
/// are clamped into the last cell.
pub fn build_dem(cloud: &PointCloud, resolution: f64) -> Result<Dem> {
    if cloud.is_empty() {
        return Err(Error::EmptyCloud);
    }
    if resolution.is_nan() || resolution <= 0.0 {
        return Err(Error::NonPositiveResolution);
    }

    let mut min_x = f64::INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    let mut sum_z = 0.0;
    for p in &cloud.points {
        min_x = min_x.min(p.x);
        min_y = min_y.min(p.y);
        max_x = max_x.max(p.x);
        max_y = max_y.max(p.y);
        sum_z += p.z;
    }
    let plane_z = sum_z / cloud.len() as f64;
    let width = (((max_x - min_x) / resolution + CELL_EPS).floor() as usize + 1).max(1);
    let height = (((max_y - min_y) / resolution + CELL_EPS).floor() as usize + 1).max(1);

    let cells = width * height;
    let mut sums = vec![0.0f64; cells];
    let mut counts = vec![0u32; cells];
    for p in &cloud.points {
        let i = (((p.x - min_x) / resolution + CELL_EPS).floor() as usize).min(width - 1);
        let j = (((p.y - min_y) / resolution + CELL_EPS).floor() as usize).min(height - 1);
        let idx = j * width + i;
        sums[idx] += p.z - plane_z;
        counts[idx] += 1;
    }

    let mut heights = vec![0.0f64; cells];
    let mut occupancy = vec![false; cells];
    for idx in 0..cells {
        if counts[idx] > 0 {
            heights[idx] = sums[idx] / counts[idx] as f64;
            occupancy[idx] = true;
        }
    }

    Ok(Dem {
        width,
        height,
        resolution,
        origin_x: min_x,
        origin_y: min_y,
        plane_z,
        heights,
        occupancy,
    })
}

/// One point per occupied cell, at the cell center, emitted row-major
/// (y outer, x inner).
pub fn reconstruct_cloud(dem: &Dem) -> PointCloud {
    let mut points = Vec::with_capacity(dem.occupied_cells());
    for j in 0..dem.height {
        for i in 0..dem.width {
            let idx = dem.idx(i, j);
            if dem.occupancy[idx] {
                points.push(Point3::new(
                    dem.origin_x + (i as f64 + 0.5) * dem.resolution,
                    dem.origin_y + (j as f64 + 0.5) * dem.resolution,
                    dem.plane_z + dem.heights[idx],
                ));
            }
        }
    }
    PointCloud::new(points)
}
