//! Test-only oracles, independent of the library's transform path.

#![allow(dead_code)]

use dfz::Spectrum;
use rand::Rng;
use rustfft::num_complex::Complex;

/// Direct double-sum forward DFT, O((NM)^2).
pub fn naive_dft2(values: &[f64], width: usize, height: usize) -> Spectrum {
    assert_eq!(values.len(), width * height);
    let mut coeffs = vec![Complex::new(0.0, 0.0); width * height];
    for v in 0..height {
        for u in 0..width {
            let mut acc = Complex::new(0.0, 0.0);
            for m in 0..height {
                for n in 0..width {
                    let phase = -std::f64::consts::TAU
                        * (u as f64 * n as f64 / width as f64
                            + v as f64 * m as f64 / height as f64);
                    acc += values[m * width + n] * Complex::new(phase.cos(), phase.sin());
                }
            }
            coeffs[v * width + u] = acc;
        }
    }
    Spectrum {
        width,
        height,
        coeffs,
    }
}

/// Direct double-sum inverse DFT.
pub fn naive_idft2(spectrum: &Spectrum) -> Vec<f64> {
    let (width, height) = (spectrum.width, spectrum.height);
    let scale = 1.0 / (width * height) as f64;
    let mut out = vec![0.0; width * height];
    for m in 0..height {
        for n in 0..width {
            let mut acc = Complex::new(0.0, 0.0);
            for v in 0..height {
                for u in 0..width {
                    let phase = std::f64::consts::TAU
                        * (u as f64 * n as f64 / width as f64
                            + v as f64 * m as f64 / height as f64);
                    acc += spectrum.coeffs[v * width + u] * Complex::new(phase.cos(), phase.sin());
                }
            }
            out[m * width + n] = acc.re * scale;
        }
    }
    out
}

/// All (u, v) whose wrapped distance to DC is <= r, by brute force.
pub fn brute_force_in_circle(width: usize, height: usize, r: f64) -> Vec<(usize, usize)> {
    let mut kept = Vec::new();
    for u in 0..width {
        for v in 0..height {
            let du = u.min(width - u) as f64;
            let dv = v.min(height - v) as f64;
            if (du * du + dv * dv).sqrt() <= r {
                kept.push((u, v));
            }
        }
    }
    kept
}

pub fn random_grid<R: Rng>(rng: &mut R, width: usize, height: usize) -> Vec<f64> {
    (0..width * height).map(|_| rng.gen_range(-5.0..5.0)).collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn relative_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}
