//! The `.dfz` container: retained spectrum coefficients plus DEM metadata
//! and an RLE'd occupancy mask, all little-endian.
//!
//! Real input grids have a Hermitian spectrum, so only one member of each
//! conjugate pair is stored (flags bit 0 set); the partner is mirrored back
//! on decode. Coefficients are quantized to 32-bit floats.

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use rustfft::num_complex::Complex;

use crate::dem::Dem;
use crate::error::{Error, Result};
use crate::spectral::{self, CutoffSpec, Spectrum};

pub const MAGIC: [u8; 4] = *b"DFZ1";
pub const VERSION: u16 = 1;
/// flags bit 0: coefficients cover only canonical Hermitian representatives.
pub const FLAG_SYMMETRIC: u16 = 1;

/// Decoded container contents.
#[derive(Debug, Clone, PartialEq)]
pub struct CompressedMap {
    pub version: u16,
    pub flags: u16,
    pub width: u32,
    pub height: u32,
    pub resolution: f64,
    pub origin_x: f64,
    pub origin_y: f64,
    pub plane_z: f64,
    /// Cutoff radius in frequency-index units.
    pub r: f64,
    /// Size of the original cloud, kept so bits-per-point is computable
    /// from the file alone.
    pub point_count: u64,
    /// Row-major RLE of the occupancy mask; first run counts occupied
    /// cells (possibly 0), runs alternate thereafter.
    pub occupancy_runs: Vec<u32>,
    pub coefficients: Vec<Complex<f32>>,
}

/// Hermitian partner of (u, v).
#[inline]
pub fn partner(u: usize, v: usize, width: usize, height: usize) -> (usize, usize) {
    ((width - u) % width, (height - v) % height)
}

/// Kept indices restricted to one representative per conjugate pair:
/// (u, v) is canonical iff it is lexicographically <= its partner.
/// Expanding by conjugation reproduces the full in-circle set.
pub fn canonical_kept(width: usize, height: usize, r: f64) -> Vec<(usize, usize)> {
    let spec = CutoffSpec::from_radius(r, width, height);
    spectral::kept_indices(width, height, &spec)
        .into_iter()
        .filter(|&(u, v)| (u, v) <= partner(u, v, width, height))
        .collect()
}

fn rle_encode(mask: &[bool]) -> Vec<u32> {
    let mut runs = Vec::new();
    let mut current = true; // first run counts occupied cells
    let mut len: u64 = 0;
    for &cell in mask {
        if cell != current {
            push_run(&mut runs, len);
            current = cell;
            len = 0;
        }
        len += 1;
    }
    push_run(&mut runs, len);
    runs
}

fn push_run(runs: &mut Vec<u32>, mut len: u64) {
    // split runs longer than u32::MAX with zero-length spacers
    while len > u32::MAX as u64 {
        runs.push(u32::MAX);
        runs.push(0);
        len -= u32::MAX as u64;
    }
    runs.push(len as u32);
}

fn rle_decode(runs: &[u32], cells: usize) -> Result<Vec<bool>> {
    let total: u64 = runs.iter().map(|&r| r as u64).sum();
    if total != cells as u64 {
        return Err(Error::InconsistentRuns);
    }
    let mut mask = Vec::with_capacity(cells);
    let mut state = true;
    for &run in runs {
        mask.extend(std::iter::repeat_n(state, run as usize));
        state = !state;
    }
    Ok(mask)
}

/// Transform the DEM heights and keep the in-circle canonical coefficients.
pub fn encode(dem: &Dem, cutoff_ratio: f64, original_point_count: u64) -> Result<CompressedMap> {
    let spec = CutoffSpec::new(cutoff_ratio, dem.width, dem.height)?;
    let spectrum = spectral::dft2(&dem.heights, dem.width, dem.height)?;

    let canonical = canonical_kept(dem.width, dem.height, spec.radius);
    let max_mag = canonical
        .iter()
        .map(|&(u, v)| spectrum.at(u, v).norm())
        .fold(0.0f64, f64::max);
    let mut coefficients = Vec::with_capacity(canonical.len());
    for &(u, v) in &canonical {
        let c = spectrum.at(u, v);
        if (u, v) == partner(u, v, dem.width, dem.height) {
            // self-paired coefficients of a real grid are real up to rounding
            assert!(c.im.abs() <= 1e-3 * max_mag.max(f64::MIN_POSITIVE));
        }
        coefficients.push(Complex::new(c.re as f32, c.im as f32));
    }

    Ok(CompressedMap {
        version: VERSION,
        flags: FLAG_SYMMETRIC,
        width: dem.width as u32,
        height: dem.height as u32,
        resolution: dem.resolution,
        origin_x: dem.origin_x,
        origin_y: dem.origin_y,
        plane_z: dem.plane_z,
        r: spec.radius,
        point_count: original_point_count,
        occupancy_runs: rle_encode(&dem.occupancy),
        coefficients,
    })
}

/// Rebuild the full spectrum (mirroring conjugates when symmetric packing
/// is flagged), invert it, and attach the header geometry and occupancy.
pub fn decode(map: &CompressedMap) -> Result<Dem> {
    let width = map.width as usize;
    let height = map.height as usize;
    let cells = width
        .checked_mul(height)
        .filter(|&c| c > 0)
        .ok_or(Error::EmptyGrid)?;
    let occupancy = rle_decode(&map.occupancy_runs, cells)?;

    let symmetric = map.flags & FLAG_SYMMETRIC != 0;
    let indices = if symmetric {
        canonical_kept(width, height, map.r)
    } else {
        let spec = CutoffSpec::from_radius(map.r, width, height);
        spectral::kept_indices(width, height, &spec)
    };
    if indices.len() != map.coefficients.len() {
        return Err(Error::CoefficientCountMismatch);
    }

    let mut spectrum = Spectrum {
        width,
        height,
        coeffs: vec![Complex::new(0.0, 0.0); cells],
    };
    for (&(u, v), c) in indices.iter().zip(&map.coefficients) {
        let c = Complex::new(c.re as f64, c.im as f64);
        *spectrum.at_mut(u, v) = c;
        if symmetric {
            let (pu, pv) = partner(u, v, width, height);
            if (pu, pv) != (u, v) {
                *spectrum.at_mut(pu, pv) = c.conj();
            }
        }
    }

    let heights = spectral::idft2(&spectrum)?;
    Ok(Dem {
        width,
        height,
        resolution: map.resolution,
        origin_x: map.origin_x,
        origin_y: map.origin_y,
        plane_z: map.plane_z,
        heights,
        occupancy,
    })
}

/// Bit-exact container layout; equal maps serialize to identical bytes.
pub fn serialize(map: &CompressedMap) -> Vec<u8> {
    let mut out = Vec::with_capacity(
        68 + map.occupancy_runs.len() * 4 + 8 + map.coefficients.len() * 8,
    );
    out.extend_from_slice(&MAGIC);
    out.write_u16::<LittleEndian>(map.version).unwrap();
    out.write_u16::<LittleEndian>(map.flags).unwrap();
    out.write_u32::<LittleEndian>(map.width).unwrap();
    out.write_u32::<LittleEndian>(map.height).unwrap();
    out.write_f64::<LittleEndian>(map.resolution).unwrap();
    out.write_f64::<LittleEndian>(map.origin_x).unwrap();
    out.write_f64::<LittleEndian>(map.origin_y).unwrap();
    out.write_f64::<LittleEndian>(map.plane_z).unwrap();
    out.write_f64::<LittleEndian>(map.r).unwrap();
    out.write_u64::<LittleEndian>(map.point_count).unwrap();
    out.write_u32::<LittleEndian>(map.occupancy_runs.len() as u32)
        .unwrap();
    for &run in &map.occupancy_runs {
        out.write_u32::<LittleEndian>(run).unwrap();
    }
    out.write_u64::<LittleEndian>(map.coefficients.len() as u64)
        .unwrap();
    for c in &map.coefficients {
        out.write_f32::<LittleEndian>(c.re).unwrap();
        out.write_f32::<LittleEndian>(c.im).unwrap();
    }
    out
}

/// Largest grid the decoder will rebuild; keeps fuzzed headers from
/// requesting absurd allocations.
const MAX_CELLS: u64 = 1 << 30;

/// Parse arbitrary bytes into a CompressedMap. Never panics; allocation
/// is bounded by the input length and MAX_CELLS.
pub fn deserialize(bytes: &[u8]) -> Result<CompressedMap> {
    let mut cur = std::io::Cursor::new(bytes);
    let mut magic = [0u8; 4];
    std::io::Read::read_exact(&mut cur, &mut magic).map_err(|_| Error::Truncated)?;
    if magic != MAGIC {
        return Err(Error::BadMagic);
    }
    let version = cur.read_u16::<LittleEndian>().map_err(|_| Error::Truncated)?;
    if version != VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    let flags = cur.read_u16::<LittleEndian>().map_err(|_| Error::Truncated)?;
    let width = cur.read_u32::<LittleEndian>().map_err(|_| Error::Truncated)?;
    let height = cur.read_u32::<LittleEndian>().map_err(|_| Error::Truncated)?;
    if width as u64 * height as u64 > MAX_CELLS {
        return Err(Error::GridTooLarge);
    }
    let resolution = cur.read_f64::<LittleEndian>().map_err(|_| Error::Truncated)?;
    let origin_x = cur.read_f64::<LittleEndian>().map_err(|_| Error::Truncated)?;
    let origin_y = cur.read_f64::<LittleEndian>().map_err(|_| Error::Truncated)?;
    let plane_z = cur.read_f64::<LittleEndian>().map_err(|_| Error::Truncated)?;
    let r = cur.read_f64::<LittleEndian>().map_err(|_| Error::Truncated)?;
    let point_count = cur.read_u64::<LittleEndian>().map_err(|_| Error::Truncated)?;

    let run_count = cur.read_u32::<LittleEndian>().map_err(|_| Error::Truncated)? as usize;
    let remaining = bytes.len().saturating_sub(cur.position() as usize);
    if run_count.checked_mul(4).is_none_or(|n| n > remaining) {
        return Err(Error::Truncated);
    }
    let mut occupancy_runs = Vec::with_capacity(run_count);
    for _ in 0..run_count {
        occupancy_runs.push(cur.read_u32::<LittleEndian>().map_err(|_| Error::Truncated)?);
    }
    let run_sum: u64 = occupancy_runs.iter().map(|&x| x as u64).sum();
    if run_sum != width as u64 * height as u64 {
        return Err(Error::InconsistentRuns);
    }

    let coeff_count = cur.read_u64::<LittleEndian>().map_err(|_| Error::Truncated)?;
    let remaining = bytes.len().saturating_sub(cur.position() as usize);
    let coeff_count: usize = coeff_count.try_into().map_err(|_| Error::Truncated)?;
    if coeff_count.checked_mul(8).is_none_or(|n| n > remaining) {
        return Err(Error::Truncated);
    }
    let mut coefficients = Vec::with_capacity(coeff_count);
    for _ in 0..coeff_count {
        let re = cur.read_f32::<LittleEndian>().map_err(|_| Error::Truncated)?;
        let im = cur.read_f32::<LittleEndian>().map_err(|_| Error::Truncated)?;
        coefficients.push(Complex::new(re, im));
    }

    Ok(CompressedMap {
        version,
        flags,
        width,
        height,
        resolution,
        origin_x,
        origin_y,
        plane_z,
        r,
        point_count,
        occupancy_runs,
        coefficients,
    })
}
