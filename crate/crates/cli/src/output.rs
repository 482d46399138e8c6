use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use crate::CliError;

/// Output directory with atomic writes and a manifest of everything written.
pub struct Output {
    dir: PathBuf,
    files: Vec<String>,
}

impl Output {
    pub fn create(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        Ok(Output { dir: dir.to_path_buf(), files: Vec::new() })
    }

    /// Writes to a temporary file in the target directory, then renames.
    pub fn write(&mut self, name: &str, contents: &str) -> Result<PathBuf, CliError> {
        let target = self.dir.join(name);
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(|e| CliError::io(&self.dir, e))?;
        tmp.write_all(contents.as_bytes()).map_err(|e| CliError::io(&target, e))?;
        tmp.persist(&target).map_err(|e| CliError::io(&target, e.error))?;
        if !self.files.iter().any(|f| f == name) {
            self.files.push(name.to_string());
        }
        Ok(target)
    }

    /// Writes the config echo and the manifest.
    pub fn finish<C: Serialize>(mut self, command: &str, config: &C, status: &str, summary: &str) -> Result<(), CliError> {
        let echo = serde_json::to_string_pretty(&json!({
            "command": command,
            "version": env!("CARGO_PKG_VERSION"),
            "args": config,
        }))
        .expect("serializable config");
        self.write("config.json", &(echo + "\n"))?;
        let manifest = serde_json::to_string_pretty(&json!({
            "command": command,
            "version": env!("CARGO_PKG_VERSION"),
            "status": status,
            "summary": summary,
            "files": self.files,
        }))
        .expect("serializable manifest");
        self.write("manifest.json", &(manifest + "\n"))?;
        Ok(())
    }
}
