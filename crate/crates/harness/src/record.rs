//! On-disk run artifacts.
//!
//! A run directory holds `records/<code_id>.json`, one full transcript
//! per instance, and `run.json`, the scoreable summary. Transcripts
//! carry no wall-clock data, so two runs of a deterministic agent
//! produce bit-identical record files; timestamps live only in the run
//! summary's `meta` block.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use stabbench_core::score::{InstanceResult, Task};
use std::path::Path;

pub const RUN_FILE_VERSION: u32 = 1;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Success,
    /// Attempts exhausted without a successful submission.
    Failed,
    GaveUp,
    Timeout,
    /// The agent process or connection broke mid-instance.
    AgentError,
}

#[derive(Clone, Serialize, Deserialize)]
pub struct AttemptRecord {
    /// 1-based.
    pub attempt: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub circuit: Option<String>,
    pub gave_up: bool,
    pub success: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub feedback: Option<serde_json::Value>,
}

#[derive(Clone, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub instance_id: String,
    pub task: Task,
    pub outcome: Outcome,
    pub result: InstanceResult,
    pub attempts: Vec<AttemptRecord>,
}

#[derive(Clone, Serialize, Deserialize)]
pub struct RunMeta {
    pub agent: String,
    pub task: Task,
    pub max_attempts: u32,
    pub timeout_secs: u64,
    pub workers: usize,
    pub suite_codes: usize,
    pub instances_run: usize,
    pub started_at: String,
    pub finished_at: String,
}

#[derive(Serialize, Deserialize)]
pub struct RunFile {
    pub version: u32,
    pub meta: RunMeta,
    pub results: Vec<InstanceResult>,
}

/// Write `value` as pretty JSON via a temp file in the target directory,
/// then rename into place, so readers never see a half-written file.
pub fn write_json_atomic<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let dir = path.parent().context("artifact path has no parent")?;
    std::fs::create_dir_all(dir)?;
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    let json = serde_json::to_string_pretty(value)?;
    std::fs::write(&tmp, json.as_bytes())
        .with_context(|| format!("writing {}", tmp.display()))?;
    std::fs::rename(&tmp, path)
        .with_context(|| format!("moving {} into place", path.display()))?;
    Ok(())
}

pub fn load_run_file(path: &Path) -> Result<RunFile> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: RunFile =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if file.version != RUN_FILE_VERSION {
        bail!(
            "run file {} has version {}, this build reads {}",
            path.display(),
            file.version,
            RUN_FILE_VERSION
        );
    }
    Ok(file)
}
