//! Output files are written to a hidden staging directory inside the target
//! and moved into place only once the whole command has succeeded. A failed
//! run therefore leaves no partial outputs behind.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use tempfile::TempDir;

pub struct Staging {
    target: PathBuf,
    created_target: bool,
    dir: Option<TempDir>,
    names: Vec<String>,
}

impl Staging {
    pub fn new(target: &Path) -> Result<Self> {
        let created_target = !target.exists();
        std::fs::create_dir_all(target)
            .with_context(|| format!("cannot create output directory {}", target.display()))?;
        let dir = tempfile::Builder::new()
            .prefix(".bounce-lab-")
            .tempdir_in(target)
            .with_context(|| format!("output directory {} is not writable", target.display()))?;
        Ok(Self {
            target: target.to_path_buf(),
            created_target,
            dir: Some(dir),
            names: Vec::new(),
        })
    }

    /// Opens `name` for writing in the staging area.
    pub fn create(&mut self, name: &str) -> Result<BufWriter<File>> {
        let dir = self.dir.as_ref().expect("staging directory is live until commit");
        let file = File::create(dir.path().join(name))
            .with_context(|| format!("cannot create {name}"))?;
        self.names.push(name.to_string());
        Ok(BufWriter::new(file))
    }

    pub fn write_with(
        &mut self,
        name: &str,
        body: impl FnOnce(&mut BufWriter<File>) -> Result<()>,
    ) -> Result<()> {
        let mut out = self.create(name)?;
        body(&mut out)?;
        out.flush().with_context(|| format!("cannot write {name}"))?;
        Ok(())
    }

    pub fn write_json(&mut self, name: &str, value: &impl Serialize) -> Result<()> {
        self.write_with(name, |out| {
            serde_json::to_writer_pretty(&mut *out, value)?;
            writeln!(out)?;
            Ok(())
        })
    }

    /// Moves every staged file into the target directory.
    pub fn commit(mut self) -> Result<Vec<PathBuf>> {
        let dir = self.dir.take().expect("commit runs once");
        let mut written = Vec::with_capacity(self.names.len());
        for name in &self.names {
            let to = self.target.join(name);
            std::fs::rename(dir.path().join(name), &to)
                .with_context(|| format!("cannot move {name} into {}", self.target.display()))?;
            written.push(to);
        }
        dir.close()?;
        Ok(written)
    }
}

impl Drop for Staging {
    fn drop(&mut self) {
        if let Some(dir) = self.dir.take() {
            let _ = dir.close();
            if self.created_target {
                let _ = std::fs::remove_dir(&self.target);
            }
        }
    }
}
