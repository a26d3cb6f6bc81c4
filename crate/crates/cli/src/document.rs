//! Versioned JSON envelope shared by every output document.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub const DOCUMENT_VERSION: u32 = 1;
pub const TOOL_NAME: &str = "qcx";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tool {
    pub name: String,
    pub version: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputFile {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub kind: String,
    pub version: u32,
    pub tool: Tool,
    pub config: Value,
    pub inputs: BTreeMap<String, InputFile>,
    pub result: Value,
}

impl Document {
    pub fn new(
        kind: &str,
        config: &impl Serialize,
        inputs: BTreeMap<String, InputFile>,
        result: &impl Serialize,
    ) -> Self {
        Document {
            kind: kind.into(),
            version: DOCUMENT_VERSION,
            tool: Tool { name: TOOL_NAME.into(), version: TOOL_VERSION.into() },
            config: serde_json::to_value(config).expect("config serializes"),
            inputs,
            result: serde_json::to_value(result).expect("result serializes"),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn read(path: &Path, kind: &str) -> CliResult<Document> {
        let text = fs::read_to_string(path).map_err(|e| CliError::read(path, e))?;
        let doc: Document = serde_json::from_str(&text)
            .map_err(|e| CliError::input(format!("{}: not a result document: {e}", path.display())))?;
        if doc.kind != kind {
            return Err(CliError::input(format!(
                "{}: expected a {kind:?} document, found {:?}",
                path.display(),
                doc.kind
            )));
        }
        if doc.version != DOCUMENT_VERSION {
            return Err(CliError::input(format!("{}: unsupported document version {}", path.display(), doc.version)));
        }
        Ok(doc)
    }

    pub fn result_as<T: for<'de> Deserialize<'de>>(&self, path: &Path) -> CliResult<T> {
        serde_json::from_value(self.result.clone())
            .map_err(|e| CliError::input(format!("{}: malformed result section: {e}", path.display())))
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// A validated input file, read once.
#[derive(Clone, Debug)]
pub struct Input {
    pub path: PathBuf,
    pub text: String,
}

impl Input {
    pub fn read(path: &Path) -> CliResult<Input> {
        let text = fs::read_to_string(path).map_err(|e| CliError::read(path, e))?;
        Ok(Input { path: path.to_path_buf(), text })
    }

    pub fn record(&self) -> InputFile {
        InputFile { path: self.path.display().to_string(), sha256: sha256_hex(self.text.as_bytes()) }
    }
}

/// Fail early if an output path cannot be created.
pub fn check_output(path: &Path) -> CliResult<()> {
    let parent = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    if !parent.is_dir() {
        return Err(CliError::input(format!("output directory {} does not exist", parent.display())));
    }
    if path.is_dir() {
        return Err(CliError::input(format!("output path {} is a directory", path.display())));
    }
    Ok(())
}

/// Write to `path`, or stdout when absent.
pub fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::write(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
