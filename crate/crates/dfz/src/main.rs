use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use dfz::{codec, dem, io, metrics, render, spectral, synth};

#[derive(Parser)]
#[command(name = "dfz", version, about = "DFT-based terrain point-cloud codec")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum CloudFormat {
    Xyz,
    Ply,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum RenderWhat {
    Dem,
    Spectrum,
}

#[derive(Args)]
struct CloudInput {
    /// Input point cloud (.xyz or .ply)
    input: PathBuf,
    /// Override format detection by extension
    #[arg(long, value_enum)]
    format: Option<CloudFormat>,
}

#[derive(Subcommand)]
enum Command {
    /// Compress a point cloud into a .dfz container
    Compress {
        #[command(flatten)]
        cloud: CloudInput,
        /// Output .dfz path
        output: PathBuf,
        /// Cutoff ratio in [0, 1]; 0 keeps all coefficients
        #[arg(long, default_value_t = 0.8)]
        cutoff: f64,
        /// DEM cell size in meters
        #[arg(long, default_value_t = 0.1)]
        resolution: f64,
    },
    /// Reconstruct a binary PLY cloud from a .dfz container
    Decompress {
        /// Input .dfz path
        input: PathBuf,
        /// Output .ply path
        output: PathBuf,
    },
    /// Evaluate RMSE and bits-per-point over a range of cutoffs
    Sweep {
        #[command(flatten)]
        cloud: CloudInput,
        /// Cutoff range as start:stop:step, inclusive of both ends
        #[arg(long, default_value = "0.0:0.95:0.05")]
        cutoffs: String,
        /// Output CSV path
        #[arg(long)]
        csv: PathBuf,
        /// DEM cell size in meters
        #[arg(long, default_value_t = 0.1)]
        resolution: f64,
        /// Append a nearest-neighbor RMSE column measured against the raw
        /// cloud (includes rasterization loss)
        #[arg(long)]
        against_raw: bool,
    },
    /// Generate a deterministic synthetic terrain cloud
    Synth {
        /// flat | dunes | rocky
        #[arg(long)]
        kind: String,
        /// Output .ply (binary) or .xyz path
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, default_value_t = 20.0)]
        extent: f64,
        #[arg(long, default_value_t = 0.1)]
        spacing: f64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 0.4)]
        amplitude: f64,
        #[arg(long, default_value_t = 40)]
        rocks: u32,
        /// Rock radius range in meters, as min:max
        #[arg(long, default_value = "0.2:0.6")]
        rock_radius: String,
    },
    /// Render a cloud or container as an 8-bit grayscale PGM
    Render {
        /// Input cloud (.xyz/.ply) or container (.dfz)
        input: PathBuf,
        /// Output .pgm path
        output: PathBuf,
        /// What to draw
        #[arg(long, value_enum, default_value_t = RenderWhat::Dem)]
        what: RenderWhat,
        /// DEM cell size for cloud inputs
        #[arg(long, default_value_t = 0.1)]
        resolution: f64,
    },
    /// Print the header and derived statistics of a .dfz container
    Info {
        /// Input .dfz path
        input: PathBuf,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn load_cloud(input: &CloudInput) -> Result<io::PointCloud> {
    let bytes = std::fs::read(&input.input)
        .with_context(|| format!("reading {}", input.input.display()))?;
    let format = match input.format {
        Some(f) => f,
        None => match extension(&input.input) {
            Some("xyz") | Some("txt") => CloudFormat::Xyz,
            Some("ply") => CloudFormat::Ply,
            _ => bail!(
                "cannot infer format of {} (use --format xyz|ply)",
                input.input.display()
            ),
        },
    };
    let cloud = match format {
        CloudFormat::Xyz => io::parse_xyz(&bytes)?,
        CloudFormat::Ply => io::parse_ply(&bytes)?,
    };
    Ok(cloud)
}

fn extension(path: &Path) -> Option<&str> {
    path.extension().and_then(|e| e.to_str())
}

fn parse_range(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        bail!("range must be start:stop:step, got {spec:?}");
    }
    let start: f64 = parts[0].parse().context("bad range start")?;
    let stop: f64 = parts[1].parse().context("bad range stop")?;
    let step: f64 = parts[2].parse().context("bad range step")?;
    if step.is_nan() || step <= 0.0 || stop < start {
        bail!("empty cutoff range {spec:?}");
    }
    let mut values = Vec::new();
    let mut k = 0u32;
    loop {
        let value = start + k as f64 * step;
        if value > stop + 1e-12 {
            break;
        }
        values.push(value);
        k += 1;
    }
    if values.iter().any(|&v| !(0.0..=1.0).contains(&v)) {
        bail!("cutoff must be in [0,1]");
    }
    Ok(values)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Compress {
            cloud,
            output,
            cutoff,
            resolution,
        } => {
            if !(0.0..=1.0).contains(&cutoff) {
                bail!("cutoff must be in [0,1]");
            }
            let points = load_cloud(&cloud)?;
            let dem = dem::build_dem(&points, resolution)?;
            let map = codec::encode(&dem, cutoff, points.len() as u64)?;
            let bytes = codec::serialize(&map);
            std::fs::write(&output, &bytes)
                .with_context(|| format!("writing {}", output.display()))?;
            let bpp = metrics::bits_per_point(bytes.len() as u64, points.len() as u64)?;
            println!(
                "wrote {}: {} bytes, {} kept coefficients, {:.4} bits/point",
                output.display(),
                bytes.len(),
                map.coefficients.len(),
                bpp
            );
        }
        Command::Decompress { input, output } => {
            let bytes =
                std::fs::read(&input).with_context(|| format!("reading {}", input.display()))?;
            let map = codec::deserialize(&bytes)?;
            let dem = codec::decode(&map)?;
            let cloud = dem::reconstruct_cloud(&dem);
            let ply = io::write_ply(&cloud, true)?;
            std::fs::write(&output, ply)
                .with_context(|| format!("writing {}", output.display()))?;
            println!("wrote {}: {} points", output.display(), cloud.len());
        }
        Command::Sweep {
            cloud,
            cutoffs,
            csv,
            resolution,
            against_raw,
        } => {
            let points = load_cloud(&cloud)?;
            let values = parse_range(&cutoffs)?;
            let mut out = String::from("cutoff,rmse_m,bpp,file_bytes,kept_coeffs");
            if against_raw {
                out.push_str(",rmse_raw_m");
            }
            out.push('\n');
            for &fc in &values {
                let report = metrics::evaluate(&points, resolution, fc)?;
                out.push_str(&format!(
                    "{},{},{},{},{}",
                    report.cutoff_ratio,
                    report.rmse,
                    report.bpp,
                    report.file_bytes,
                    report.kept_coeffs
                ));
                if against_raw {
                    let map = codec::encode(
                        &dem::build_dem(&points, resolution)?,
                        fc,
                        points.len() as u64,
                    )?;
                    let raw = metrics::rmse_against_raw(&points, &codec::decode(&map)?)?;
                    out.push_str(&format!(",{raw}"));
                }
                out.push('\n');
                println!(
                    "cutoff {:.3}: rmse {:.6} m, {:.4} bits/point",
                    fc, report.rmse, report.bpp
                );
            }
            std::fs::write(&csv, out).with_context(|| format!("writing {}", csv.display()))?;
        }
        Command::Synth {
            kind,
            output,
            extent,
            spacing,
            seed,
            amplitude,
            rocks,
            rock_radius,
        } => {
            let (rmin, rmax) = rock_radius
                .split_once(':')
                .and_then(|(a, b)| Some((a.parse::<f64>().ok()?, b.parse::<f64>().ok()?)))
                .ok_or_else(|| anyhow!("rock radius must be min:max"))?;
            let spec = synth::TerrainSpec {
                kind: kind.parse()?,
                extent_x: extent,
                extent_y: extent,
                point_spacing: spacing,
                seed,
                amplitude,
                rock_count: rocks,
                rock_radius_min: rmin,
                rock_radius_max: rmax,
            };
            let cloud = synth::generate(&spec)?;
            let bytes = match extension(&output) {
                Some("xyz") => cloud
                    .points
                    .iter()
                    .map(|p| format!("{} {} {}\n", p.x, p.y, p.z))
                    .collect::<String>()
                    .into_bytes(),
                _ => io::write_ply(&cloud, true)?,
            };
            std::fs::write(&output, bytes)
                .with_context(|| format!("writing {}", output.display()))?;
            println!("wrote {}: {} points", output.display(), cloud.len());
        }
        Command::Render {
            input,
            output,
            what,
            resolution,
        } => {
            let dem = if extension(&input) == Some("dfz") {
                let bytes = std::fs::read(&input)
                    .with_context(|| format!("reading {}", input.display()))?;
                codec::decode(&codec::deserialize(&bytes)?)?
            } else {
                let cloud = load_cloud(&CloudInput {
                    input: input.clone(),
                    format: None,
                })?;
                dem::build_dem(&cloud, resolution)?
            };
            let pgm = match what {
                RenderWhat::Dem => render::render_dem(&dem),
                RenderWhat::Spectrum => {
                    let spectrum = spectral::dft2(&dem.heights, dem.width, dem.height)?;
                    render::render_spectrum(&spectrum)
                }
            };
            std::fs::write(&output, pgm)
                .with_context(|| format!("writing {}", output.display()))?;
            println!("wrote {}", output.display());
        }
        Command::Info { input } => {
            let bytes =
                std::fs::read(&input).with_context(|| format!("reading {}", input.display()))?;
            let map = codec::deserialize(&bytes)?;
            let cells = map.width as u64 * map.height as u64;
            let occupied: u64 = map
                .occupancy_runs
                .iter()
                .step_by(2)
                .map(|&r| r as u64)
                .sum();
            let max_r = spectral::max_radius(map.width as usize, map.height as usize);
            let fc = if max_r > 0.0 { 1.0 - map.r / max_r } else { 0.0 };
            println!("version: {}", map.version);
            println!("flags: {:#06x}", map.flags);
            println!("grid: {} x {}", map.width, map.height);
            println!("resolution: {} m", map.resolution);
            println!("origin: ({}, {})", map.origin_x, map.origin_y);
            println!("plane_z: {}", map.plane_z);
            println!("r: {}", map.r);
            println!("cutoff_ratio: {}", fc);
            println!("point_count: {}", map.point_count);
            println!("kept_coeffs: {}", map.coefficients.len());
            println!(
                "occupancy_fill: {}",
                if cells > 0 {
                    occupied as f64 / cells as f64
                } else {
                    0.0
                }
            );
            println!(
                "bpp: {}",
                metrics::bits_per_point(bytes.len() as u64, map.point_count.max(1))?
            );
        }
    }
    Ok(())
}
