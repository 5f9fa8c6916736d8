//! Grayscale PGM (P5) views of a DEM and its spectrum. The spectrum view
//! is the one place the DC term is relocated to the image center.

use crate::dem::Dem;
use crate::spectral::Spectrum;

fn pgm(width: usize, height: usize, pixels: Vec<u8>) -> Vec<u8> {
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend_from_slice(&pixels);
    out
}

/// Heights min-max normalized over occupied cells; unoccupied cells are
/// black. A constant-height DEM renders mid-gray.
pub fn render_dem(dem: &Dem) -> Vec<u8> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for idx in 0..dem.cells() {
        if dem.occupancy[idx] {
            lo = lo.min(dem.heights[idx]);
            hi = hi.max(dem.heights[idx]);
        }
    }
    let span = hi - lo;
    let pixels = (0..dem.cells())
        .map(|idx| {
            if !dem.occupancy[idx] {
                0
            } else if span > 0.0 {
                (255.0 * (dem.heights[idx] - lo) / span).round() as u8
            } else {
                128
            }
        })
        .collect();
    pgm(dem.width, dem.height, pixels)
}

/// log(1 + |F|), normalized, with DC shifted to the image center.
pub fn render_spectrum(spectrum: &Spectrum) -> Vec<u8> {
    let (w, h) = (spectrum.width, spectrum.height);
    let mags: Vec<f64> = spectrum.coeffs.iter().map(|c| c.norm().ln_1p()).collect();
    let peak = mags.iter().cloned().fold(0.0f64, f64::max);
    let mut pixels = vec![0u8; w * h];
    for row in 0..h {
        for col in 0..w {
            // image center (w/2, h/2) shows the DC coefficient
            let u = (col + w - w / 2) % w;
            let v = (row + h - h / 2) % h;
            let m = mags[v * w + u];
            pixels[row * w + col] = if peak > 0.0 {
                (255.0 * m / peak).round() as u8
            } else {
                0
            };
        }
    }
    pgm(w, h, pixels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::dft2;

    fn flat_dem() -> Dem {
        Dem {
            width: 3,
            height: 2,
            resolution: 0.1,
            origin_x: 0.0,
            origin_y: 0.0,
            plane_z: 0.0,
            heights: vec![1.5; 6],
            occupancy: vec![true; 6],
        }
    }

    #[test]
    fn constant_dem_is_uniform_gray() {
        let img = render_dem(&flat_dem());
        assert!(img.starts_with(b"P5\n3 2\n255\n"));
        assert!(img[b"P5\n3 2\n255\n".len()..].iter().all(|&p| p == 128));
    }

    #[test]
    fn unoccupied_cells_are_black() {
        let mut dem = flat_dem();
        dem.occupancy[4] = false;
        dem.heights[0] = 0.0; // give the span a nonzero range
        let img = render_dem(&dem);
        let body = &img[b"P5\n3 2\n255\n".len()..];
        assert_eq!(body[4], 0);
        assert_eq!(body[0], 0); // min height also maps to 0
        assert_eq!(body[1], 255);
    }

    #[test]
    fn constant_grid_spectrum_is_single_center_pixel() {
        let spec = dft2(&[2.0; 25], 5, 5).unwrap();
        let img = render_spectrum(&spec);
        let body = &img[b"P5\n5 5\n255\n".len()..];
        for (idx, &p) in body.iter().enumerate() {
            if idx == 2 * 5 + 2 {
                assert_eq!(p, 255);
            } else {
                assert_eq!(p, 0);
            }
        }
    }
}
