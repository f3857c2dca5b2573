//! Append-only directory of snapshot documents.
//!
//! Layout: one `<id>.json` per snapshot plus `index.json`, a derived listing
//! that is rebuilt whenever it disagrees with the directory.

use std::fs::{self, OpenOptions};
use std::io::{ErrorKind, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use chrono::{DateTime, Utc};
use quasar_core::assessment::AssessmentSnapshot;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::clock::Clock;
use crate::document::{from_json, to_json};
use crate::error::{Error, Result};

const INDEX_FILE: &str = "index.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexEntry {
    pub id: String,
    pub timestamp: DateTime<Utc>,
    pub label: String,
}

#[derive(Debug)]
pub struct SnapshotStore {
    root: PathBuf,
    // single writer within the process; create_new guards across processes
    writer: Mutex<()>,
}

fn valid_id(id: &str) -> bool {
    !id.is_empty()
        && id.len() <= 128
        && !id.starts_with('.')
        && id != "index"
        && id
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::internal(format!("{}: {e}", path.display()))
}

impl SnapshotStore {
    /// Opens the store at `root`, creating the directory if needed.
    pub fn open(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        fs::create_dir_all(&root).map_err(|e| io_error(&root, e))?;
        Ok(Self {
            root,
            writer: Mutex::new(()),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn path_of(&self, id: &str) -> PathBuf {
        self.root.join(format!("{id}.json"))
    }

    fn snapshot_files(&self) -> Result<Vec<PathBuf>> {
        let mut files = Vec::new();
        for entry in fs::read_dir(&self.root).map_err(|e| io_error(&self.root, e))? {
            let path = entry.map_err(|e| io_error(&self.root, e))?.path();
            let is_doc = path.extension().is_some_and(|e| e == "json")
                && path.file_name().is_some_and(|n| n != INDEX_FILE);
            if is_doc && path.is_file() {
                files.push(path);
            }
        }
        files.sort();
        Ok(files)
    }

    fn load(path: &Path) -> Result<AssessmentSnapshot> {
        let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
        from_json(&text).map_err(|e| Error::internal(format!("{}: corrupt snapshot: {e}", path.display())))
    }

    /// Validates and persists `snapshot`, assigning an id and timestamp when
    /// absent. Returns the document as stored.
    pub fn add(&self, mut snapshot: AssessmentSnapshot, clock: &dyn Clock) -> Result<AssessmentSnapshot> {
        snapshot.validate()?;
        let _guard = self
            .writer
            .lock()
            .map_err(|_| Error::internal("store lock poisoned"))?;

        if snapshot.timestamp.is_none() {
            snapshot.timestamp = Some(clock.now());
        }
        let id = match snapshot.id.take() {
            Some(id) => {
                if !valid_id(&id) {
                    return Err(Error::input(
                        "id",
                        format!("'{id}' may only contain letters, digits, '-', '_' and '.'"),
                    ));
                }
                id
            }
            None => {
                let digest = Sha256::digest(to_json(&snapshot).as_bytes());
                let hex: String = digest[..4].iter().map(|b| format!("{b:02x}")).collect();
                format!("{:04}-{hex}", self.snapshot_files()?.len() + 1)
            }
        };
        snapshot.id = Some(id.clone());

        let path = self.path_of(&id);
        let mut file = match OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(f) => f,
            Err(e) if e.kind() == ErrorKind::AlreadyExists => {
                return Err(Error::Conflict(format!(
                    "snapshot '{id}' already exists; stored snapshots are never rewritten"
                )))
            }
            Err(e) => return Err(io_error(&path, e)),
        };
        file.write_all(to_json(&snapshot).as_bytes())
            .and_then(|_| file.sync_all())
            .map_err(|e| io_error(&path, e))?;
        self.refresh_index()?;
        Ok(snapshot)
    }

    pub fn get(&self, id: &str) -> Result<AssessmentSnapshot> {
        if !valid_id(id) {
            return Err(Error::NotFound(format!("snapshot '{id}'")));
        }
        let path = self.path_of(id);
        if !path.is_file() {
            return Err(Error::NotFound(format!("snapshot '{id}'")));
        }
        Self::load(&path)
    }

    /// Index entries ordered by timestamp, then id.
    pub fn list(&self) -> Result<Vec<IndexEntry>> {
        let _guard = self
            .writer
            .lock()
            .map_err(|_| Error::internal("store lock poisoned"))?;
        self.refresh_index()
    }

    fn refresh_index(&self) -> Result<Vec<IndexEntry>> {
        let mut entries = Vec::new();
        for path in self.snapshot_files()? {
            let snapshot = Self::load(&path)?;
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
            entries.push(IndexEntry {
                id: snapshot.id.unwrap_or_else(|| stem.to_string()),
                timestamp: snapshot.timestamp.unwrap_or(DateTime::<Utc>::MIN_UTC),
                label: snapshot.label,
            });
        }
        entries.sort_by(|a, b| a.timestamp.cmp(&b.timestamp).then_with(|| a.id.cmp(&b.id)));

        let index_path = self.root.join(INDEX_FILE);
        let wanted = to_json(&entries);
        if fs::read_to_string(&index_path).ok().as_deref() != Some(wanted.as_str()) {
            let tmp = self.root.join(".index.json.tmp");
            fs::write(&tmp, &wanted).map_err(|e| io_error(&tmp, e))?;
            fs::rename(&tmp, &index_path).map_err(|e| io_error(&index_path, e))?;
        }
        Ok(entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clock::FixedClock;

    fn snapshot(label: &str) -> AssessmentSnapshot {
        from_json(&format!(
            r#"{{"label":"{label}","domainScores":{{"technical":[0.5],"security":[0.5],"operational":[0.5]}},"domainWeights":[1]}}"#
        ))
        .unwrap()
    }

    fn clock() -> FixedClock {
        FixedClock("2026-03-01T12:00:00Z".parse().unwrap())
    }

    #[test]
    fn add_assigns_id_and_timestamp() {
        let dir = tempfile::tempdir().unwrap();
        let store = SnapshotStore::open(dir.path()).unwrap();
        let stored = store.add(snapshot("q1"), &clock()).unwrap();
        let id = stored.id.clone().unwrap();
        assert!(id.starts_with("0001-"));
        assert_eq!(stored.timestamp, Some(clock().0));
        assert_eq!(store.get(&id).unwrap(), stored);
        let second = store.add(snapshot("q2"), &clock()).unwrap();
        assert!(second.id.unwrap().starts_with("0002-"));
    }

    #[test]
    fn explicit_ids_are_never_overwritten() {
        let dir = tempfile::tempdir().unwrap();
        let store = SnapshotStore::open(dir.path()).unwrap();
        let mut s = snapshot("a");
        s.id = Some("baseline".into());
        store.add(s.clone(), &clock()).unwrap();
        assert!(matches!(store.add(s, &clock()), Err(Error::Conflict(_))));
        let mut bad = snapshot("b");
        bad.id = Some("../escape".into());
        assert_eq!(store.add(bad, &clock()).unwrap_err().field(), "id");
    }

    #[test]
    fn stale_index_is_rebuilt() {
        let dir = tempfile::tempdir().unwrap();
        let store = SnapshotStore::open(dir.path()).unwrap();
        store.add(snapshot("a"), &clock()).unwrap();
        fs::write(dir.path().join(INDEX_FILE), "[]").unwrap();
        assert_eq!(store.list().unwrap().len(), 1);
        let index: Vec<IndexEntry> =
            serde_json::from_str(&fs::read_to_string(dir.path().join(INDEX_FILE)).unwrap()).unwrap();
        assert_eq!(index.len(), 1);
    }

    #[test]
    fn unknown_id_is_not_found() {
        let dir = tempfile::tempdir().unwrap();
        let store = SnapshotStore::open(dir.path()).unwrap();
        assert!(matches!(store.get("nope"), Err(Error::NotFound(_))));
    }

    #[test]
    fn invalid_snapshot_is_rejected_before_writing() {
        let dir = tempfile::tempdir().unwrap();
        let store = SnapshotStore::open(dir.path()).unwrap();
        let mut s = snapshot("bad");
        s.domain_weights = vec![0.9];
        assert_eq!(store.add(s, &clock()).unwrap_err().field(), "domainWeights");
        assert!(store.list().unwrap().is_empty());
    }
}
