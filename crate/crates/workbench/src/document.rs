//! Reading the JSON documents the workbench exchanges.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;

use crate::error::{Error, Result};

/// Decodes `text`, reporting the document path of the first bad value.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let field = if path == "." { String::new() } else { path };
        Error::input(field, e.into_inner())
    })
}

/// Resolves a document path, allowing the `.json` extension to be left off.
pub fn resolve(path: &Path) -> Result<PathBuf> {
    if path.is_file() {
        return Ok(path.to_path_buf());
    }
    if path.extension().is_none() {
        let with_ext = path.with_extension("json");
        if with_ext.is_file() {
            return Ok(with_ext);
        }
    }
    Err(Error::input("", format!("{}: file not found", path.display())))
}

pub fn read_text(path: &Path) -> Result<String> {
    let path = resolve(path)?;
    std::fs::read_to_string(&path).map_err(|e| Error::input("", format!("{}: {e}", path.display())))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    from_json(&read_text(path)?)
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("documents serialize");
    text.push('\n');
    text
}
