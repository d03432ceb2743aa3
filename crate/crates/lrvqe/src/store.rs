//! On-disk result store.
//!
//! Layout under the store root:
//!
//! ```text
//! resolved-config.json
//! runs/<alpha>_<lambda>_<N>_<kind>_p<p>_s<restarts>.json
//! scaling.csv
//! fits.csv
//! plotdata/*.dat
//! ```
//!
//! Every run file is one complete JSON document. Run files are never
//! rewritten: writing a key that already exists is a no-op, which is what
//! makes interrupted sweeps resumable.

use std::fs;
use std::io::ErrorKind;
use std::path::{Path, PathBuf};

use crate::circuit::AnsatzKind;
use crate::error::{Error, Result};
use crate::sweep::RunRecord;

/// Identity of one run file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunKey {
    pub alpha: f64,
    pub lambda: f64,
    pub n: usize,
    pub kind: AnsatzKind,
    pub p: usize,
    pub restarts: usize,
}

/// Shortest decimal form, e.g. 0.5 -> "0.5", 10.0 -> "10".
fn fmt_key_number(x: f64) -> String {
    format!("{x}")
}

impl RunKey {
    pub fn file_name(&self) -> String {
        format!(
            "{}_{}_{}_{}_p{}_s{}.json",
            fmt_key_number(self.alpha),
            fmt_key_number(self.lambda),
            self.n,
            self.kind.token(),
            self.p,
            self.restarts
        )
    }
}

#[derive(Debug, Clone)]
pub struct ResultStore {
    root: PathBuf,
}

impl ResultStore {
    /// Open (creating if needed) a store rooted at `root`.
    pub fn open(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        let runs = root.join("runs");
        fs::create_dir_all(&runs).map_err(|e| Error::io(&runs, e))?;
        Ok(Self { root })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn runs_dir(&self) -> PathBuf {
        self.root.join("runs")
    }

    pub fn run_path(&self, key: &RunKey) -> PathBuf {
        self.runs_dir().join(key.file_name())
    }

    pub fn resolved_config_path(&self) -> PathBuf {
        self.root.join("resolved-config.json")
    }

    pub fn scaling_csv_path(&self) -> PathBuf {
        self.root.join("scaling.csv")
    }

    pub fn fits_csv_path(&self) -> PathBuf {
        self.root.join("fits.csv")
    }

    pub fn plotdata_dir(&self) -> PathBuf {
        self.root.join("plotdata")
    }

    pub fn has_run(&self, key: &RunKey) -> bool {
        self.run_path(key).exists()
    }

    /// True when at least one run file exists.
    pub fn has_any_runs(&self) -> Result<bool> {
        let dir = self.runs_dir();
        let entries = fs::read_dir(&dir).map_err(|e| Error::io(&dir, e))?;
        for entry in entries {
            let entry = entry.map_err(|e| Error::io(&dir, e))?;
            if entry.path().extension().is_some_and(|e| e == "json") {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Persist one record. Existing files are left untouched.
    pub fn write_run(&self, key: &RunKey, record: &RunRecord) -> Result<()> {
        let path = self.run_path(key);
        let json = serde_json::to_string_pretty(record)
            .map_err(|e| Error::Config(format!("serializing run record: {e}")))?;
        match fs::OpenOptions::new()
            .write(true)
            .create_new(true)
            .open(&path)
        {
            Ok(mut file) => {
                use std::io::Write;
                file.write_all(json.as_bytes())
                    .and_then(|()| file.write_all(b"\n"))
                    .map_err(|e| Error::io(&path, e))
            }
            Err(e) if e.kind() == ErrorKind::AlreadyExists => Ok(()),
            Err(e) => Err(Error::io(&path, e)),
        }
    }

    pub fn read_run(&self, key: &RunKey) -> Result<RunRecord> {
        let path = self.run_path(key);
        let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("parsing {}: {e}", path.display())))
    }

    /// Load every run record, sorted by (alpha, lambda, n, kind, p).
    pub fn load_all_runs(&self) -> Result<Vec<RunRecord>> {
        let dir = self.runs_dir();
        let mut records = Vec::new();
        let entries = fs::read_dir(&dir).map_err(|e| Error::io(&dir, e))?;
        for entry in entries {
            let entry = entry.map_err(|e| Error::io(&dir, e))?;
            let path = entry.path();
            if path.extension().is_none_or(|e| e != "json") {
                continue;
            }
            let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
            let record: RunRecord = serde_json::from_str(&text)
                .map_err(|e| Error::Config(format!("parsing {}: {e}", path.display())))?;
            records.push(record);
        }
        records.sort_by(|a, b| {
            a.alpha
                .total_cmp(&b.alpha)
                .then(a.lambda.total_cmp(&b.lambda))
                .then(a.n.cmp(&b.n))
                .then(a.kind.cmp(&b.kind))
                .then(a.p.cmp(&b.p))
        });
        Ok(records)
    }

    pub fn write_resolved_config(&self, json: &str) -> Result<()> {
        let path = self.resolved_config_path();
        fs::write(&path, json).map_err(|e| Error::io(&path, e))
    }

    pub fn read_resolved_config(&self) -> Result<String> {
        let path = self.resolved_config_path();
        fs::read_to_string(&path).map_err(|e| Error::io(&path, e))
    }
}
