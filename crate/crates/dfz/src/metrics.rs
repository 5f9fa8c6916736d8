//! Rate-distortion quantities: height RMSE between a reference and a
//! reconstructed DEM, and bits per point of the serialized container.
//!
//! The RMSE reference is the unfiltered DEM, so the metric isolates
//! filter loss from rasterization loss; the cell-aligned correspondence
//! reduces the per-point deviation to a height difference.

use crate::codec;
use crate::dem::{build_dem, Dem};
use crate::error::{Error, Result};
use crate::io::PointCloud;

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub cutoff_ratio: f64,
    /// Meters.
    pub rmse: f64,
    /// 8 * file_bytes / original_points.
    pub bpp: f64,
    pub file_bytes: u64,
    /// Stored (canonical) coefficient count.
    pub kept_coeffs: u64,
    pub original_points: u64,
}

/// RMS height difference over occupied cells. Both DEMs must share
/// geometry and occupancy.
pub fn rmse_dem(reference: &Dem, reconstructed: &Dem) -> Result<f64> {
    if reference.width != reconstructed.width
        || reference.height != reconstructed.height
        || reference.resolution != reconstructed.resolution
        || reference.origin_x != reconstructed.origin_x
        || reference.origin_y != reconstructed.origin_y
        || reference.occupancy != reconstructed.occupancy
    {
        return Err(Error::GridMismatch);
    }
    let mut sum = 0.0;
    let mut count = 0usize;
    for idx in 0..reference.cells() {
        if reference.occupancy[idx] {
            let a = reference.plane_z + reference.heights[idx];
            let b = reconstructed.plane_z + reconstructed.heights[idx];
            sum += (a - b) * (a - b);
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::NoOccupiedCells);
    }
    Ok((sum / count as f64).sqrt())
}

pub fn bits_per_point(file_bytes: u64, original_points: u64) -> Result<f64> {
    if original_points == 0 {
        return Err(Error::ZeroPoints);
    }
    Ok(8.0 * file_bytes as f64 / original_points as f64)
}

/// Run the full pipeline (build_dem -> encode -> serialize -> deserialize
/// -> decode) and report RMSE against the pre-filter DEM plus the size
/// metrics of the container.
pub fn evaluate(cloud: &PointCloud, resolution: f64, cutoff_ratio: f64) -> Result<MetricsReport> {
    let dem = build_dem(cloud, resolution)?;
    let map = codec::encode(&dem, cutoff_ratio, cloud.len() as u64)?;
    let bytes = codec::serialize(&map);
    let decoded = codec::decode(&codec::deserialize(&bytes)?)?;
    let rmse = rmse_dem(&dem, &decoded)?;
    let file_bytes = bytes.len() as u64;
    Ok(MetricsReport {
        cutoff_ratio,
        rmse,
        bpp: bits_per_point(file_bytes, cloud.len() as u64)?,
        file_bytes,
        kept_coeffs: map.coefficients.len() as u64,
        original_points: cloud.len() as u64,
    })
}

/// Diagnostic nearest-neighbor RMSE of the raw cloud against the cloud
/// reconstructed from `dem`. Unlike `rmse_dem` this includes
/// rasterization loss.
pub fn rmse_against_raw(cloud: &PointCloud, dem: &Dem) -> Result<f64> {
    if cloud.is_empty() {
        return Err(Error::ZeroPoints);
    }
    if dem.occupied_cells() == 0 {
        return Err(Error::NoOccupiedCells);
    }
    let res = dem.resolution;
    let max_ring = dem.width.max(dem.height);
    let mut sum = 0.0;
    for p in &cloud.points {
        let ci = (((p.x - dem.origin_x) / res).floor() as isize).clamp(0, dem.width as isize - 1);
        let cj = (((p.y - dem.origin_y) / res).floor() as isize).clamp(0, dem.height as isize - 1);
        let mut best = f64::INFINITY;
        for ring in 0..=max_ring as isize {
            // candidates farther than `best` cannot appear in later rings
            if best.is_finite() && ((ring - 1).max(0) as f64) * res > best.sqrt() {
                break;
            }
            for dj in -ring..=ring {
                for di in -ring..=ring {
                    if di.abs().max(dj.abs()) != ring {
                        continue;
                    }
                    let (i, j) = (ci + di, cj + dj);
                    if i < 0 || j < 0 || i >= dem.width as isize || j >= dem.height as isize {
                        continue;
                    }
                    let idx = dem.idx(i as usize, j as usize);
                    if !dem.occupancy[idx] {
                        continue;
                    }
                    let x = dem.origin_x + (i as f64 + 0.5) * res;
                    let y = dem.origin_y + (j as f64 + 0.5) * res;
                    let z = dem.plane_z + dem.heights[idx];
                    let d2 = (p.x - x).powi(2) + (p.y - y).powi(2) + (p.z - z).powi(2);
                    best = best.min(d2);
                }
            }
        }
        sum += best;
    }
    Ok((sum / cloud.len() as f64).sqrt())
}
