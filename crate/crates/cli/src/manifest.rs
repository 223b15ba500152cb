//! `manifest.json`: what is needed to reproduce the outputs in a directory.

use serde::Serialize;

use crate::stages::{Context, Stage};
use sensecast::seed::derive_seed;

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Manifest<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub config_path: String,
    pub config_sha256: &'a str,
    pub master_seed: u64,
    pub seeds: Seeds,
    pub threads: Option<usize>,
    pub face_stub: Option<String>,
    pub stages: Vec<&'static str>,
    /// The parsed configuration, defaults filled in.
    pub config: &'a crate::config::Config,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Seeds {
    /// Seed of the synthetic scenario, if one is generated.
    pub scenario: Option<u64>,
    pub forest: u64,
    /// Subsamples draw from streams keyed by this seed, the percentage and the repeat index.
    pub subsample: u64,
}

pub fn write_manifest(ctx: &Context, stages: &[Stage], threads: Option<usize>) -> std::io::Result<()> {
    let m = Manifest {
        tool: "sensecast",
        version: env!("CARGO_PKG_VERSION"),
        config_path: ctx.loaded.path.display().to_string(),
        config_sha256: &ctx.loaded.sha256,
        master_seed: ctx.seed,
        seeds: Seeds { scenario: ctx.scenario().map(|s| s.seed), forest: derive_seed(ctx.seed, "forest", 0), subsample: ctx.seed },
        threads,
        face_stub: ctx.face_stub.as_ref().map(|p| p.display().to_string()),
        stages: stages.iter().map(|s| s.name()).collect(),
        config: ctx.config(),
    };
    let mut text = serde_json::to_string_pretty(&m).map_err(std::io::Error::other)?;
    text.push('\n');
    std::fs::write(ctx.out.join("manifest.json"), text)
}
