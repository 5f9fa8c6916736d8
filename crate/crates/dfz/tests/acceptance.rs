//! Acceptance suite: one test per release criterion, each printing a
//! single pass/fail line. Run with
//!   cargo test -p dfz --test acceptance -- --nocapture

mod common;

use common::*;
use dfz::codec::{canonical_kept, deserialize, partner, serialize};
use dfz::spectral::{apply_lpf, dft2, idft2, max_radius, wrapped_distance, CutoffSpec};
use dfz::{evaluate, generate, parse_ply, write_ply, TerrainKind, TerrainSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::time::Instant;

struct Criterion(&'static str);

impl Criterion {
    fn pass(self) {
        println!("[PASS] {}", self.0);
    }
}

impl Drop for Criterion {
    fn drop(&mut self) {
        if std::thread::panicking() {
            println!("[FAIL] {}", self.0);
        }
    }
}

fn sweep_cutoffs() -> Vec<f64> {
    (0..20).map(|k| k as f64 * 0.05).collect()
}

#[test]
fn c01_dft_oracle_equivalence() {
    let c = Criterion("C1 dft/idft match the naive double-sum oracle (50 grids, N,M in 1..12)");
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..50 {
        let w = rng.gen_range(1..=12usize);
        let h = rng.gen_range(1..=12usize);
        let grid = random_grid(&mut rng, w, h);
        let fast = dft2(&grid, w, h).unwrap();
        let slow = naive_dft2(&grid, w, h);
        let scale = slow.coeffs.iter().map(|z| z.norm()).fold(1.0, f64::max);
        for (a, b) in fast.coeffs.iter().zip(&slow.coeffs) {
            assert!((a - b).norm() <= 1e-9 * scale);
        }
        let back_fast = idft2(&fast).unwrap();
        let back_slow = naive_idft2(&slow);
        let bound = 1e-9 * grid.iter().fold(1.0f64, |m, &x| m.max(x.abs()));
        assert!(max_abs_diff(&back_fast, &grid) <= bound);
        assert!(max_abs_diff(&back_slow, &grid) <= 1e-7);
    }
    assert!(start.elapsed().as_secs() < 10, "oracle check too slow");
    c.pass();
}

#[test]
fn c02_parseval_and_lpf_energy_identity() {
    let c = Criterion("C2 Parseval and LPF energy identity on 20 random DEM grids");
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for _ in 0..20 {
        let w = rng.gen_range(2..=64usize);
        let h = rng.gen_range(2..=64usize);
        let grid = random_grid(&mut rng, w, h);
        let spectrum = dft2(&grid, w, h).unwrap();

        let spatial: f64 = grid.iter().map(|x| x * x).sum();
        let spectral: f64 =
            spectrum.coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>() / (w * h) as f64;
        assert!(relative_close(spatial, spectral, 1e-6));

        let fc = rng.gen_range(0.1..0.9);
        let cutoff = CutoffSpec::new(fc, w, h).unwrap();
        let filtered = apply_lpf(&spectrum, &cutoff);
        let back = idft2(&filtered).unwrap();
        let rmse = {
            let mse: f64 = grid
                .iter()
                .zip(&back)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                / (w * h) as f64;
            mse.sqrt()
        };
        let removed: f64 = (0..h)
            .flat_map(|v| (0..w).map(move |u| (u, v)))
            .filter(|&(u, v)| wrapped_distance(u, v, w, h) > cutoff.radius)
            .map(|(u, v)| spectrum.at(u, v).norm_sqr())
            .sum();
        let lhs = rmse * rmse * ((w * h) as f64).powi(2);
        if removed > 0.0 {
            assert!(relative_close(lhs, removed, 1e-6), "{lhs} vs {removed}");
        } else {
            assert!(lhs <= 1e-12);
        }
    }
    assert!(start.elapsed().as_secs() < 10, "energy check too slow");
    c.pass();
}

#[test]
fn c03_lossless_limit_at_zero_cutoff() {
    let c = Criterion("C3 full pipeline at cutoff 0 keeps height RMSE under 1 mm on all terrains");
    for kind in [TerrainKind::Flat, TerrainKind::Dunes, TerrainKind::Rocky] {
        let cloud = generate(&TerrainSpec::new(kind)).unwrap();
        let report = evaluate(&cloud, 0.1, 0.0).unwrap();
        assert!(report.rmse <= 1e-3, "{kind:?}: rmse {}", report.rmse);
    }
    c.pass();
}

#[test]
fn c04_monotone_trade_off_on_rocky_terrain() {
    let c = Criterion("C4 rocky sweep: RMSE non-decreasing, bpp non-increasing over 20 cutoffs");
    let cloud = generate(&TerrainSpec::new(TerrainKind::Rocky)).unwrap();
    let mut last_rmse = -1.0;
    let mut last_bpp = f64::INFINITY;
    for fc in sweep_cutoffs() {
        let report = evaluate(&cloud, 0.1, fc).unwrap();
        assert!(
            report.rmse >= last_rmse,
            "rmse fell at fc={fc}: {} < {last_rmse}",
            report.rmse
        );
        assert!(
            report.bpp <= last_bpp,
            "bpp rose at fc={fc}: {} > {last_bpp}",
            report.bpp
        );
        last_rmse = report.rmse;
        last_bpp = report.bpp;
    }
    c.pass();
}

#[test]
fn c05_terrain_contrast() {
    let c = Criterion("C5 flat RMSE <= rocky RMSE at every cutoff, and < half at cutoff 0.8");
    let flat = generate(&TerrainSpec::new(TerrainKind::Flat)).unwrap();
    let rocky = generate(&TerrainSpec::new(TerrainKind::Rocky)).unwrap();
    for fc in sweep_cutoffs() {
        let rf = evaluate(&flat, 0.1, fc).unwrap();
        let rr = evaluate(&rocky, 0.1, fc).unwrap();
        assert!(
            rf.rmse <= rr.rmse,
            "flat {} > rocky {} at fc={fc}",
            rf.rmse,
            rr.rmse
        );
    }
    let rf = evaluate(&flat, 0.1, 0.8).unwrap();
    let rr = evaluate(&rocky, 0.1, 0.8).unwrap();
    assert!(rf.rmse < 0.5 * rr.rmse, "{} vs {}", rf.rmse, rr.rmse);
    c.pass();
}

#[test]
fn c06_canonical_kept_set_correctness() {
    let c = Criterion("C6 canonical set + conjugates equals brute-force circle, 100 random dims");
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    for _ in 0..100 {
        let w = rng.gen_range(1..=32usize);
        let h = rng.gen_range(1..=32usize);
        let fc = rng.gen_range(0.0..=1.0);
        let r = (1.0 - fc) * max_radius(w, h);
        let mut expanded = BTreeSet::new();
        for (u, v) in canonical_kept(w, h, r) {
            expanded.insert((u, v));
            expanded.insert(partner(u, v, w, h));
        }
        let full: BTreeSet<_> = brute_force_in_circle(w, h, r).into_iter().collect();
        assert_eq!(expanded, full, "w={w} h={h} fc={fc}");
    }
    c.pass();
}

#[test]
fn c07_container_round_trip_and_fuzz() {
    let c = Criterion("C7 serialize/deserialize byte-identical on 100 maps; mutations never crash");
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    for _ in 0..100 {
        // random DEM through the real encoder keeps the map structurally valid
        let w = rng.gen_range(1..=10usize);
        let h = rng.gen_range(1..=10usize);
        let dem = dfz::dem::Dem {
            width: w,
            height: h,
            resolution: rng.gen_range(0.01..1.0),
            origin_x: rng.gen_range(-10.0..10.0),
            origin_y: rng.gen_range(-10.0..10.0),
            plane_z: rng.gen_range(-5.0..5.0),
            heights: (0..w * h).map(|_| rng.gen_range(-2.0..2.0)).collect(),
            occupancy: (0..w * h).map(|_| rng.gen_bool(0.8)).collect(),
        };
        let map = dfz::encode(&dem, rng.gen_range(0.0..=1.0), rng.gen_range(1..1000)).unwrap();
        let bytes = serialize(&map);
        let back = deserialize(&bytes).unwrap();
        assert_eq!(serialize(&back), bytes);

        for _ in 0..20 {
            let mut mutated = bytes.clone();
            for _ in 0..rng.gen_range(1..=6) {
                let idx = rng.gen_range(0..mutated.len());
                mutated[idx] = rng.gen();
            }
            if let Ok(parsed) = deserialize(&mutated) {
                let _ = dfz::decode(&parsed);
            }
        }
    }
    c.pass();
}

#[test]
fn c08_io_round_trip_and_fuzz() {
    let c = Criterion("C8 binary PLY round trip exact on 1000 points; parser fuzz never crashes");
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    let cloud = dfz::PointCloud::new(
        (0..1000)
            .map(|_| {
                dfz::Point3::new(
                    rng.gen_range(-1e6..1e6),
                    rng.gen_range(-1e6..1e6),
                    rng.gen_range(-1e4..1e4),
                )
            })
            .collect(),
    );
    assert_eq!(parse_ply(&write_ply(&cloud, true).unwrap()).unwrap(), cloud);

    let valid = write_ply(&cloud, true).unwrap();
    for _ in 0..200 {
        let len = rng.gen_range(0..200usize);
        let garbage: Vec<u8> = (0..len).map(|_| rng.gen()).collect();
        let _ = dfz::parse_xyz(&garbage);
        let _ = parse_ply(&garbage);

        let mut mutated = valid.clone();
        for _ in 0..rng.gen_range(1..=6) {
            let idx = rng.gen_range(0..mutated.len());
            mutated[idx] = rng.gen();
        }
        let _ = parse_ply(&mutated);
    }
    c.pass();
}

#[test]
fn c09_determinism_of_sweep_and_synth() {
    let c = Criterion("C9 repeated sweep runs emit identical CSVs; equal seeds give identical PLYs");
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_dfz");
    let run = |args: &[&str]| {
        let out = std::process::Command::new(bin)
            .args(args)
            .current_dir(dir.path())
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    };
    run(&["synth", "--kind", "rocky", "--extent", "5", "-o", "a.ply"]);
    run(&["synth", "--kind", "rocky", "--extent", "5", "-o", "b.ply"]);
    let a = std::fs::read(dir.path().join("a.ply")).unwrap();
    let b = std::fs::read(dir.path().join("b.ply")).unwrap();
    assert_eq!(a, b);

    run(&["sweep", "a.ply", "--cutoffs", "0.0:0.95:0.05", "--csv", "s1.csv"]);
    run(&["sweep", "a.ply", "--cutoffs", "0.0:0.95:0.05", "--csv", "s2.csv"]);
    let s1 = std::fs::read(dir.path().join("s1.csv")).unwrap();
    let s2 = std::fs::read(dir.path().join("s2.csv")).unwrap();
    assert_eq!(s1, s2);
    c.pass();
}

#[test]
fn c10_desk_scale_performance_envelope() {
    let c = Criterion("C10 20-cutoff sweep of a 100x100 m rocky terrain finishes in 5 minutes");
    let mut spec = TerrainSpec::new(TerrainKind::Rocky);
    spec.extent_x = 100.0;
    spec.extent_y = 100.0;
    spec.rock_count = 200;
    spec.seed = 11;
    let cloud = generate(&spec).unwrap();
    let start = Instant::now();
    let mut last_bpp = f64::INFINITY;
    for fc in sweep_cutoffs() {
        let report = evaluate(&cloud, 0.1, fc).unwrap();
        assert!(report.bpp <= last_bpp);
        last_bpp = report.bpp;
    }
    let elapsed = start.elapsed();
    println!(
        "  sweep of {} points (~1000x1000 DEM) took {:.1} s",
        cloud.len(),
        elapsed.as_secs_f64()
    );
    assert!(elapsed.as_secs_f64() < 300.0, "sweep took {elapsed:?}");
    c.pass();
}
