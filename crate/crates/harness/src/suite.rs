//! Resolved-suite persistence and lookup.
//!
//! The CLI can either rebuild the default suite from its manifest on
//! every invocation or read a previously built suite file. A suite file
//! stores fully resolved instances, so loading one skips construction
//! but still re-validates every code.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use stabbench_core::code::{
    build_default_manifest, load_suite, validate_code, CodeInstance, LoadedSuite,
};
use std::path::Path;

pub const SUITE_FILE_VERSION: u32 = 1;

/// Environment variable naming a suite file to use when `--suite` is not
/// given.
pub const SUITE_ENV: &str = "STABBENCH_SUITE";

#[derive(Serialize, Deserialize)]
pub struct SuiteFile {
    pub version: u32,
    pub base_count: usize,
    pub declared_total_generators: u64,
    pub instances: Vec<CodeInstance>,
}

impl SuiteFile {
    pub fn from_suite(suite: &LoadedSuite) -> SuiteFile {
        SuiteFile {
            version: SUITE_FILE_VERSION,
            base_count: suite.base_count,
            declared_total_generators: suite.declared_total_generators,
            instances: suite.instances.clone(),
        }
    }
}

pub fn save_suite(suite: &LoadedSuite, path: &Path) -> Result<()> {
    let file = SuiteFile::from_suite(suite);
    let json = serde_json::to_string_pretty(&file)?;
    std::fs::write(path, json).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn load_suite_file(path: &Path) -> Result<LoadedSuite> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: SuiteFile =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if file.version != SUITE_FILE_VERSION {
        bail!(
            "suite file {} has version {}, this build reads {}",
            path.display(),
            file.version,
            SUITE_FILE_VERSION
        );
    }
    if file.base_count > file.instances.len() {
        bail!("suite file base_count exceeds instance count");
    }
    let mut seen = std::collections::BTreeSet::new();
    for inst in &file.instances {
        if !seen.insert(inst.id.clone()) {
            bail!("suite file repeats code id {}", inst.id);
        }
        let report = validate_code(inst);
        if !report.valid {
            bail!("suite file code {} fails validation: {report:?}", inst.id);
        }
    }
    let total_generators = file
        .instances
        .iter()
        .map(|c| c.generators.len() as u64)
        .sum();
    Ok(LoadedSuite {
        instances: file.instances,
        base_count: file.base_count,
        total_generators,
        declared_total_generators: file.declared_total_generators,
    })
}

/// `--suite` beats `STABBENCH_SUITE` beats the built-in default manifest.
pub fn resolve_suite(path: Option<&Path>) -> Result<LoadedSuite> {
    if let Some(p) = path {
        return load_suite_file(p);
    }
    if let Ok(env_path) = std::env::var(SUITE_ENV) {
        if !env_path.is_empty() {
            return load_suite_file(Path::new(&env_path));
        }
    }
    load_suite(&build_default_manifest()).context("building the default suite")
}
