#![allow(dead_code)]

use coverax_core::geometry::io::write_obj;
use coverax_core::geometry::TriangleMesh;
use std::path::{Path, PathBuf};

pub fn write_mesh(dir: &Path, name: &str, mesh: &TriangleMesh) -> PathBuf {
    let path = dir.join(format!("{name}.obj"));
    write_obj(&path, mesh).expect("write obj");
    path
}

/// Small-scale evaluation settings so a full pipeline run takes well under a
/// second.
pub fn quick(mut config: coverax::RunConfig) -> coverax::RunConfig {
    config.candidates = 3000;
    config.eval_surface_samples = 20_000;
    config.eval_envelope_samples = 5_000;
    config
}
