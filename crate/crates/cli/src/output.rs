use std::cell::RefCell;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use blockade::hash::content_hash;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cli::Format;
use crate::error::{CliError, Result};

pub const MANIFEST_NAME: &str = "manifest.json";

/// A file a run produces.
#[derive(Debug, Clone)]
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

impl Artifact {
    pub fn json(name: impl Into<String>, value: &impl Serialize) -> Self {
        let mut text = serde_json::to_string_pretty(value).expect("artifact serializes");
        text.push('\n');
        Artifact {
            name: name.into(),
            bytes: text.into_bytes(),
        }
    }

    pub fn text(name: impl Into<String>, text: String) -> Self {
        Artifact {
            name: name.into(),
            bytes: text.into_bytes(),
        }
    }
}

/// Result of one subcommand before it is rendered.
pub struct Outcome {
    /// File stem of the main result.
    pub stem: &'static str,
    pub json: Value,
    /// JSON-lines text used in place of `json` (written as `<stem>.jsonl`).
    pub jsonl: Option<String>,
    /// CSV rendering; falls back to a key/value table of `json`.
    pub csv: Option<String>,
    pub plot: Option<String>,
    pub extras: Vec<Artifact>,
    /// Resolved parameters recorded in the manifest.
    pub config: Value,
}

impl Outcome {
    pub fn new(stem: &'static str, json: Value, config: Value) -> Self {
        Outcome {
            stem,
            json,
            jsonl: None,
            csv: None,
            plot: None,
            extras: Vec::new(),
            config,
        }
    }

    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }

    pub fn with_plot(mut self, plot: String) -> Self {
        self.plot = Some(plot);
        self
    }

    pub fn with_extra(mut self, a: Artifact) -> Self {
        self.extras.push(a);
        self
    }

    /// Main artifact first, then extras, then plot data if requested.
    pub fn artifacts(self, format: Format, emit_plot: bool) -> Vec<Artifact> {
        let main = match (format, self.jsonl) {
            (Format::Csv, _) => {
                let csv = self.csv.unwrap_or_else(|| kv_csv(&self.json));
                Artifact::text(format!("{}.csv", self.stem), csv)
            }
            (Format::Json, Some(lines)) => Artifact::text(format!("{}.jsonl", self.stem), lines),
            (Format::Json, None) => Artifact::json(format!("{}.json", self.stem), &self.json),
        };
        let mut out = vec![main];
        out.extend(self.extras);
        if emit_plot {
            if let Some(p) = self.plot {
                out.push(Artifact::text("plot_data.csv", p));
            }
        }
        out
    }
}

/// Two-column `key,value` table of a JSON object's top-level fields.
pub fn kv_csv(value: &Value) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["key", "value"]).expect("in-memory write");
    let scalar = |v: &Value| match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                w.write_record([k.as_str(), &scalar(v)]).expect("in-memory write");
            }
        }
        other => w.write_record(["value", &scalar(other)]).expect("in-memory write"),
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HashedFile {
    pub path: String,
    pub hash: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub subcommand: String,
    /// Arguments after the program name; `replay` re-runs exactly these.
    pub argv: Vec<String>,
    pub seed: u64,
    pub threads: usize,
    pub inputs: Vec<HashedFile>,
    pub config: Value,
    pub artifacts: Vec<HashedFile>,
    pub wall_time_seconds: f64,
}

/// Reads input files and remembers their content hashes.
#[derive(Default)]
pub struct InputLog {
    files: RefCell<Vec<HashedFile>>,
}

impl InputLog {
    pub fn read(&self, path: &Path) -> Result<String> {
        let bytes = fs::read(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        self.files.borrow_mut().push(HashedFile {
            path: path.display().to_string(),
            hash: content_hash(&bytes),
        });
        String::from_utf8(bytes).map_err(|_| CliError::Parse {
            path: path.to_path_buf(),
            message: "not valid UTF-8".into(),
        })
    }

    pub fn read_json<T: serde::de::DeserializeOwned>(&self, path: &Path) -> Result<T> {
        let text = self.read(path)?;
        serde_json::from_str(&text).map_err(|e| CliError::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    pub fn into_files(self) -> Vec<HashedFile> {
        self.files.into_inner()
    }
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Write artifacts and the manifest into `dir`.
pub fn write_tree(dir: &Path, artifacts: &[Artifact], manifest: &RunManifest) -> Result<()> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    for a in artifacts {
        write_file(&dir.join(&a.name), &a.bytes)?;
    }
    let manifest_art = Artifact::json(MANIFEST_NAME, manifest);
    write_file(&dir.join(MANIFEST_NAME), &manifest_art.bytes)
}

/// Print the main artifact on stdout and the manifest on stderr.
pub fn print_run(artifacts: &[Artifact], manifest: &RunManifest) -> Result<()> {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    let io_err = |source| CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    };
    lock.write_all(&artifacts[0].bytes).map_err(io_err)?;
    lock.flush().map_err(io_err)?;
    eprintln!("{}", serde_json::to_string(manifest).expect("manifest serializes"));
    Ok(())
}

pub fn hashed_artifacts(artifacts: &[Artifact]) -> Vec<HashedFile> {
    artifacts
        .iter()
        .map(|a| HashedFile {
            path: a.name.clone(),
            hash: content_hash(&a.bytes),
        })
        .collect()
}
