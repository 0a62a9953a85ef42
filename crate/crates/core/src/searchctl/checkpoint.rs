use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::arith::{smallest_odd_prime_divisor, Natural, OddPrime};

use super::{SearchError, SearchTask};

pub const FORMAT_VERSION: u32 = 1;

/// Resumable progress of one [`SearchTask`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Checkpoint {
    pub format_version: u32,
    pub task: SearchTask,
    /// Smallest even multiplier not yet fully processed. Every multiplier
    /// below it has been tested.
    pub next_multiplier: Natural,
    pub best_found: Option<OddPrime>,
    pub shards_done: u64,
    pub wall_seconds: f64,
}

impl Checkpoint {
    pub fn fresh(task: SearchTask) -> Self {
        Checkpoint {
            format_version: FORMAT_VERSION,
            task,
            next_multiplier: Natural::from(2u64),
            best_found: None,
            shards_done: 0,
            wall_seconds: 0.0,
        }
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        let corrupt = |msg: String| Err(SearchError::Corrupt(msg));
        if self.format_version != FORMAT_VERSION {
            return corrupt(format!(
                "unsupported format_version {}",
                self.format_version
            ));
        }
        self.task.validate()?;
        if self.next_multiplier.is_odd() || self.next_multiplier < Natural::from(2u64) {
            return corrupt(format!(
                "next_multiplier {} is not an even number ≥ 2",
                self.next_multiplier
            ));
        }
        if !self.wall_seconds.is_finite() || self.wall_seconds < 0.0 {
            return corrupt(format!(
                "wall_seconds {} is not a duration",
                self.wall_seconds
            ));
        }
        if let Some(r) = &self.best_found {
            let constraint = self.task.constraint_prime.value();
            let sum = r.value() + self.task.partner.value();
            let least = smallest_odd_prime_divisor(&sum)
                .map_err(|e| SearchError::Corrupt(format!("best_found {r}: {e}")))?;
            if least.as_ref() != Some(&self.task.constraint_prime) {
                return corrupt(format!(
                    "best_found {r}: smallest odd prime divisor of {sum} is not {constraint}"
                ));
            }
            let m = &sum / constraint;
            if m >= self.next_multiplier {
                return corrupt(format!(
                    "best_found {r} comes from multiplier {m}, not below next_multiplier {}",
                    self.next_multiplier
                ));
            }
            if r.value() > &self.task.bound {
                return corrupt(format!("best_found {r} exceeds bound {}", self.task.bound));
            }
        }
        Ok(())
    }
}

fn temp_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".tmp");
    path.with_file_name(name)
}

/// Writes `cp` to a sibling temporary file and renames it over `path`.
pub fn save_checkpoint(cp: &Checkpoint, path: &Path) -> Result<(), SearchError> {
    cp.validate()?;
    let io_err = |source| SearchError::Io {
        path: path.to_path_buf(),
        source,
    };
    let body = serde_json::to_string_pretty(cp).expect("checkpoint serializes");
    let tmp = temp_path(path);
    let mut file = fs::File::create(&tmp).map_err(io_err)?;
    file.write_all(body.as_bytes()).map_err(io_err)?;
    file.write_all(b"\n").map_err(io_err)?;
    file.sync_all().map_err(io_err)?;
    drop(file);
    fs::rename(&tmp, path).map_err(io_err)
}

pub fn load_checkpoint(path: &Path) -> Result<Checkpoint, SearchError> {
    let body = fs::read_to_string(path).map_err(|source| SearchError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let cp: Checkpoint =
        serde_json::from_str(&body).map_err(|e| SearchError::Corrupt(e.to_string()))?;
    cp.validate()?;
    Ok(cp)
}
