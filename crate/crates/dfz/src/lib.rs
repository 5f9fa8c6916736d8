//! Lossy compression for terrain point clouds.
//!
//! The pipeline rasterizes a cloud onto a Digital Elevation Model through
//! its centroid plane, transforms the height grid with an exact 2D DFT,
//! drops every coefficient outside a radial cutoff, and serializes the
//! survivors into the `.dfz` container. Decoding mirrors the conjugate
//! half-spectrum back, inverts the transform, and re-emits one point per
//! occupied cell.

pub mod codec;
pub mod dem;
pub mod error;
pub mod io;
pub mod metrics;
pub mod render;
pub mod spectral;
pub mod synth;

pub use codec::{decode, deserialize, encode, serialize, CompressedMap};
pub use dem::{build_dem, reconstruct_cloud, Dem};
pub use error::{Error, Result};
pub use io::{parse_ply, parse_xyz, write_ply, Point3, PointCloud};
pub use metrics::{bits_per_point, evaluate, rmse_dem, MetricsReport};
pub use spectral::{apply_lpf, dft2, idft2, CutoffSpec, Spectrum};
pub use synth::{generate, TerrainKind, TerrainSpec};
