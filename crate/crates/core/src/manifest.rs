//! Run manifests: everything needed to replay a command bit-exactly.

use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::config::SimulationConfig;
use crate::error::{Error, Result};

pub const TOOL_NAME: &str = "uape";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputFile {
    pub role: String,
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub params: Vec<(String, String)>,
    pub inputs: Vec<InputFile>,
    pub config: Option<SimulationConfig>,
    /// `(file name, sha256)` of every output written next to the manifest.
    pub outputs: Vec<(String, String)>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn file_digest(path: &Path) -> Result<String> {
    Ok(sha256_hex(&fs::read(path)?))
}

impl RunManifest {
    pub fn new(command: impl Into<String>) -> Self {
        RunManifest {
            command: command.into(),
            version: TOOL_VERSION.to_owned(),
            params: Vec::new(),
            inputs: Vec::new(),
            config: None,
            outputs: Vec::new(),
        }
    }

    pub fn param(&self, key: &str) -> Option<&str> {
        self.params
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn input(&self, role: &str) -> Option<&InputFile> {
        self.inputs.iter().find(|i| i.role == role)
    }

    /// Records an input file together with its current digest.
    pub fn add_input(&mut self, role: &str, path: &Path) -> Result<()> {
        self.inputs.push(InputFile {
            role: role.to_owned(),
            path: path.display().to_string(),
            sha256: file_digest(path)?,
        });
        Ok(())
    }

    /// Fails if any input changed since the manifest was written.
    pub fn verify_inputs(&self) -> Result<()> {
        for input in &self.inputs {
            let actual = file_digest(Path::new(&input.path))?;
            if actual != input.sha256 {
                return Err(Error::Manifest(format!(
                    "{} input `{}` has digest {actual}, manifest records {}",
                    input.role, input.path, input.sha256
                )));
            }
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# run manifest\n");
        out.push_str(&format!(
            "tool = {TOOL_NAME}\nversion = {}\ncommand = {}\n",
            self.version, self.command
        ));
        for (k, v) in &self.params {
            out.push_str(&format!("param.{k} = {v}\n"));
        }
        for i in &self.inputs {
            out.push_str(&format!("input.{}.path = {}\n", i.role, i.path));
            out.push_str(&format!("input.{}.sha256 = {}\n", i.role, i.sha256));
        }
        if let Some(c) = &self.config {
            for (k, v) in c.entries() {
                out.push_str(&format!("config.{k} = {v}\n"));
            }
        }
        for (name, digest) in &self.outputs {
            out.push_str(&format!("output.{name}.sha256 = {digest}\n"));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut m = RunManifest::new(String::new());
        let mut config: Option<SimulationConfig> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |msg: String| Error::parse(idx + 1, msg);
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad("expected `key = value`".into()))?;
            let (key, value) = (key.trim(), value.trim());
            if let Some(k) = key.strip_prefix("param.") {
                m.params.push((k.to_owned(), value.to_owned()));
            } else if let Some(rest) = key.strip_prefix("input.") {
                if let Some(role) = rest.strip_suffix(".path") {
                    m.inputs.push(InputFile {
                        role: role.to_owned(),
                        path: value.to_owned(),
                        sha256: String::new(),
                    });
                } else if let Some(role) = rest.strip_suffix(".sha256") {
                    let input = m
                        .inputs
                        .iter_mut()
                        .find(|i| i.role == role)
                        .ok_or_else(|| bad(format!("digest for undeclared input `{role}`")))?;
                    input.sha256 = value.to_owned();
                } else {
                    return Err(bad(format!("unknown manifest key `{key}`")));
                }
            } else if let Some(k) = key.strip_prefix("config.") {
                config
                    .get_or_insert_with(SimulationConfig::default)
                    .set(k, value)
                    .map_err(|e| bad(e.to_string()))?;
            } else if let Some(rest) = key.strip_prefix("output.") {
                let name = rest
                    .strip_suffix(".sha256")
                    .ok_or_else(|| bad(format!("unknown manifest key `{key}`")))?;
                m.outputs.push((name.to_owned(), value.to_owned()));
            } else {
                match key {
                    "tool" if value == TOOL_NAME => {}
                    "tool" => return Err(bad(format!("manifest written by `{value}`"))),
                    "version" => m.version = value.to_owned(),
                    "command" => m.command = value.to_owned(),
                    _ => return Err(bad(format!("unknown manifest key `{key}`"))),
                }
            }
        }
        if m.command.is_empty() {
            return Err(Error::Manifest("no command recorded".into()));
        }
        m.config = config;
        Ok(m)
    }
}
