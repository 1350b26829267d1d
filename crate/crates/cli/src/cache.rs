//! On-disk report cache keyed by the sha256 of command, configuration and input bytes.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

const MAGIC: &str = "kmd-cache/1";

pub struct Cache {
    dir: PathBuf,
}

/// A stored report with the exit status it produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub exit: u8,
    pub body: String,
}

pub fn digest(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        // length prefixes keep ("ab","c") and ("a","bc") apart
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    hex::encode(h.finalize())
}

impl Cache {
    pub fn new(dir: &Path) -> std::io::Result<Cache> {
        fs::create_dir_all(dir)?;
        Ok(Cache { dir: dir.to_path_buf() })
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.report"))
    }

    /// The stored entry, or `None` on a miss; corrupt entries are removed with a warning.
    pub fn get(&self, key: &str) -> Option<Entry> {
        let path = self.path(key);
        let bytes = fs::read(&path).ok()?;
        match decode(&bytes) {
            Some(e) => Some(e),
            None => {
                eprintln!("warning: discarding corrupt cache entry {}", path.display());
                let _ = fs::remove_file(&path);
                None
            }
        }
    }

    /// Writes to a temporary file in the cache directory, then renames it into place.
    pub fn put(&self, key: &str, entry: &Entry) -> std::io::Result<()> {
        let tmp = self.dir.join(format!(".{key}.{}.tmp", std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(encode(entry).as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, self.path(key))
    }
}

fn encode(e: &Entry) -> String {
    format!("{MAGIC} exit={} sha256={}\n{}", e.exit, digest(&[e.body.as_bytes()]), e.body)
}

fn decode(bytes: &[u8]) -> Option<Entry> {
    let text = std::str::from_utf8(bytes).ok()?;
    let (header, body) = text.split_once('\n')?;
    let mut parts = header.split(' ');
    if parts.next()? != MAGIC {
        return None;
    }
    let exit: u8 = parts.next()?.strip_prefix("exit=")?.parse().ok()?;
    let sum = parts.next()?.strip_prefix("sha256=")?;
    if parts.next().is_some() || sum != digest(&[body.as_bytes()]) {
        return None;
    }
    Some(Entry { exit, body: body.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path()).unwrap();
        let e = Entry { exit: 1, body: "report\nlines\n".into() };
        cache.put("k", &e).unwrap();
        assert_eq!(cache.get("k"), Some(e));
        let path = dir.path().join("k.report");
        let mut bytes = fs::read(&path).unwrap();
        let last = bytes.len() - 2;
        bytes[last] ^= 1;
        fs::write(&path, bytes).unwrap();
        assert_eq!(cache.get("k"), None);
        assert!(!path.exists());
    }

    #[test]
    fn digests_separate_parts() {
        assert_ne!(digest(&[b"ab", b"c"]), digest(&[b"a", b"bc"]));
    }
}
