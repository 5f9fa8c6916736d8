//! Exact 2D DFT/IDFT over height grids and the circular low-pass filter.
//!
//! The transforms are backed by a fast mixed-radix/Bluestein FFT and match
//! the direct double sum
//!   F(u,v) = sum_n sum_m f(n,m) exp(-j2pi(un/N + vm/M))
//! to within 1e-9 relative on any grid size, powers of two or not.
//!
//! The filter works in unshifted frequency coordinates via the wrapped
//! distance to DC; this is identical to masking the re-centered spectrum
//! shown by visualization tools.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub width: usize,
    pub height: usize,
    /// Row-major (v outer, u inner), same layout as DEM heights.
    pub coeffs: Vec<Complex<f64>>,
}

impl Spectrum {
    #[inline]
    pub fn at(&self, u: usize, v: usize) -> Complex<f64> {
        self.coeffs[v * self.width + u]
    }

    #[inline]
    pub fn at_mut(&mut self, u: usize, v: usize) -> &mut Complex<f64> {
        &mut self.coeffs[v * self.width + u]
    }
}

/// Cutoff ratio and the frequency radius it implies for one grid size:
/// radius = (1 - ratio) * max_radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffSpec {
    pub cutoff_ratio: f64,
    pub radius: f64,
    pub max_radius: f64,
}

impl CutoffSpec {
    pub fn new(cutoff_ratio: f64, width: usize, height: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&cutoff_ratio) {
            return Err(Error::InvalidCutoff(cutoff_ratio));
        }
        let max_radius = max_radius(width, height);
        Ok(CutoffSpec {
            cutoff_ratio,
            radius: (1.0 - cutoff_ratio) * max_radius,
            max_radius,
        })
    }

    /// Rebuild from a stored radius (container decode path).
    pub fn from_radius(radius: f64, width: usize, height: usize) -> Self {
        let max_radius = max_radius(width, height);
        let cutoff_ratio = if max_radius > 0.0 {
            1.0 - radius / max_radius
        } else {
            0.0
        };
        CutoffSpec {
            cutoff_ratio,
            radius,
            max_radius,
        }
    }
}

/// Center-to-corner distance of the frequency grid: the largest wrapped
/// distance any coefficient can have.
pub fn max_radius(width: usize, height: usize) -> f64 {
    let hu = (width / 2) as f64;
    let hv = (height / 2) as f64;
    (hu * hu + hv * hv).sqrt()
}

/// Distance from (u, v) to DC in unshifted coordinates.
pub fn wrapped_distance(u: usize, v: usize, width: usize, height: usize) -> f64 {
    let du = u.min(width - u) as f64;
    let dv = v.min(height - v) as f64;
    (du * du + dv * dv).sqrt()
}

fn fft_2d(coeffs: &mut [Complex<f64>], width: usize, height: usize, inverse: bool) {
    let mut planner = FftPlanner::new();
    let row_fft = if inverse {
        planner.plan_fft_inverse(width)
    } else {
        planner.plan_fft_forward(width)
    };
    for row in coeffs.chunks_exact_mut(width) {
        row_fft.process(row);
    }
    let col_fft = if inverse {
        planner.plan_fft_inverse(height)
    } else {
        planner.plan_fft_forward(height)
    };
    let mut col = vec![Complex::default(); height];
    for u in 0..width {
        for v in 0..height {
            col[v] = coeffs[v * width + u];
        }
        col_fft.process(&mut col);
        for v in 0..height {
            coeffs[v * width + u] = col[v];
        }
    }
}

/// Forward 2D DFT of a row-major real grid.
pub fn dft2(values: &[f64], width: usize, height: usize) -> Result<Spectrum> {
    if width == 0 || height == 0 || values.is_empty() {
        return Err(Error::EmptyGrid);
    }
    assert_eq!(values.len(), width * height);
    let mut coeffs: Vec<Complex<f64>> = values.iter().map(|&x| Complex::new(x, 0.0)).collect();
    fft_2d(&mut coeffs, width, height, false);
    Ok(Spectrum {
        width,
        height,
        coeffs,
    })
}

/// Inverse 2D DFT; returns the real part of each output cell. For a
/// Hermitian spectrum the imaginary residue is at rounding level and is
/// discarded.
pub fn idft2(spectrum: &Spectrum) -> Result<Vec<f64>> {
    let (width, height) = (spectrum.width, spectrum.height);
    if width == 0 || height == 0 {
        return Err(Error::EmptyGrid);
    }
    let mut coeffs = spectrum.coeffs.clone();
    fft_2d(&mut coeffs, width, height, true);
    let scale = 1.0 / (width * height) as f64;
    Ok(coeffs.iter().map(|c| c.re * scale).collect())
}

/// Ideal radial low-pass: zero every coefficient farther than the cutoff
/// radius from DC (boundary inclusive).
pub fn apply_lpf(spectrum: &Spectrum, spec: &CutoffSpec) -> Spectrum {
    let mut out = spectrum.clone();
    for v in 0..out.height {
        for u in 0..out.width {
            if wrapped_distance(u, v, out.width, out.height) > spec.radius {
                *out.at_mut(u, v) = Complex::new(0.0, 0.0);
            }
        }
    }
    out
}

/// All kept (u, v) indices in row-major order (u outer, v inner). This
/// ordering is the codec's canonical coefficient order.
pub fn kept_indices(width: usize, height: usize, spec: &CutoffSpec) -> Vec<(usize, usize)> {
    let mut kept = Vec::new();
    for u in 0..width {
        for v in 0..height {
            if wrapped_distance(u, v, width, height) <= spec.radius {
                kept.push((u, v));
            }
        }
    }
    kept
}
