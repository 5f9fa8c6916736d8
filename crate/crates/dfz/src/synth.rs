//! Deterministic synthetic terrain clouds: a flat sandy plain, smooth
//! dunes, and a dune field strewn with hemispherical rocks.
//!
//! Randomness comes from ChaCha8 seeded with the spec's 64-bit seed. The
//! draw order is normative so clouds are bit-identical across platforms:
//! rock centers and radii first (rocky only), then per point, row-major,
//! the x jitter, y jitter, and (flat only) the height noise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::io::{Point3, PointCloud};

/// Jitter half-width as a fraction of point spacing.
const JITTER_FRAC: f64 = 0.3;
/// Height noise half-width for the flat terrain, meters.
const FLAT_NOISE: f64 = 0.005;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerrainKind {
    Flat,
    Dunes,
    Rocky,
}

impl std::str::FromStr for TerrainKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "flat" => Ok(TerrainKind::Flat),
            "dunes" => Ok(TerrainKind::Dunes),
            "rocky" => Ok(TerrainKind::Rocky),
            other => Err(Error::InvalidSpec(format!("unknown kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TerrainSpec {
    pub kind: TerrainKind,
    pub extent_x: f64,
    pub extent_y: f64,
    pub point_spacing: f64,
    pub seed: u64,
    /// Dune amplitude, meters (dunes and rocky).
    pub amplitude: f64,
    /// Rocky only.
    pub rock_count: u32,
    pub rock_radius_min: f64,
    pub rock_radius_max: f64,
}

impl TerrainSpec {
    pub fn new(kind: TerrainKind) -> Self {
        TerrainSpec {
            kind,
            extent_x: 20.0,
            extent_y: 20.0,
            point_spacing: 0.1,
            seed: 7,
            amplitude: 0.4,
            rock_count: 40,
            rock_radius_min: 0.2,
            rock_radius_max: 0.6,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.extent_x > 0.0 && self.extent_y > 0.0) {
            return Err(Error::InvalidSpec("extent must be positive".into()));
        }
        if self.point_spacing.is_nan() || self.point_spacing <= 0.0 {
            return Err(Error::InvalidSpec("point spacing must be positive".into()));
        }
        if self.kind != TerrainKind::Flat && (self.amplitude.is_nan() || self.amplitude <= 0.0) {
            return Err(Error::InvalidSpec("amplitude must be positive".into()));
        }
        if self.kind == TerrainKind::Rocky {
            if self.rock_count == 0 {
                return Err(Error::InvalidSpec("rock count must be positive".into()));
            }
            if !(self.rock_radius_min > 0.0 && self.rock_radius_max >= self.rock_radius_min) {
                return Err(Error::InvalidSpec("bad rock radius range".into()));
            }
        }
        Ok(())
    }
}

/// Generate the cloud for `spec`; equal specs yield bit-identical clouds.
pub fn generate(spec: &TerrainSpec) -> Result<PointCloud> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let rocks: Vec<(f64, f64, f64)> = if spec.kind == TerrainKind::Rocky {
        (0..spec.rock_count)
            .map(|_| {
                let cx = rng.gen_range(0.0..spec.extent_x);
                let cy = rng.gen_range(0.0..spec.extent_y);
                let radius = rng.gen_range(spec.rock_radius_min..=spec.rock_radius_max);
                (cx, cy, radius)
            })
            .collect()
    } else {
        Vec::new()
    };

    // dune wavelength is a quarter of the extent in each axis
    let lx = spec.extent_x / 4.0;
    let ly = spec.extent_y / 4.0;
    let dune = |x: f64, y: f64| {
        spec.amplitude
            * (std::f64::consts::TAU * x / lx).sin()
            * (std::f64::consts::TAU * y / ly).sin()
    };

    let nx = ((spec.extent_x / spec.point_spacing).round() as usize).max(1);
    let ny = ((spec.extent_y / spec.point_spacing).round() as usize).max(1);
    let jitter = JITTER_FRAC * spec.point_spacing;

    let mut points = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let x = i as f64 * spec.point_spacing + rng.gen_range(-jitter..=jitter);
            let y = j as f64 * spec.point_spacing + rng.gen_range(-jitter..=jitter);
            let z = match spec.kind {
                TerrainKind::Flat => rng.gen_range(-FLAT_NOISE..=FLAT_NOISE),
                TerrainKind::Dunes => dune(x, y),
                TerrainKind::Rocky => {
                    let mut z = dune(x, y);
                    for &(cx, cy, radius) in &rocks {
                        let d2 = (x - cx).powi(2) + (y - cy).powi(2);
                        z += (radius * radius - d2).max(0.0).sqrt();
                    }
                    z
                }
            };
            points.push(Point3::new(x, y, z));
        }
    }
    Ok(PointCloud::new(points))
}
