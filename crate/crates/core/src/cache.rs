//! `CHEVCACHE v1` cache files.
//!
//! A cache file is line oriented:
//!
//! ```text
//! CHEVCACHE v1 <kind> <key> <count>
//! <record 1>
//! ...
//! <record count>
//! ```
//!
//! Records are whitespace-separated integers whose meaning depends on the
//! kind (`weyl`: root permutation then length; `group`: matrix entries in
//! row-major order; `subspaces`: dimension then row-major RREF entries).
//! Files are written to a temporary sibling and renamed into place, so a
//! reader never observes a partial file.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

pub const MAGIC: &str = "CHEVCACHE v1";

/// A directory holding cache files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, kind: &str, key: &str) -> PathBuf {
        self.dir.join(format!("{kind}-{key}.chevcache"))
    }

    /// Writes `records` atomically. Each record becomes one line.
    pub fn store<I, R>(&self, kind: &str, key: &str, records: I) -> Result<()>
    where
        I: ExactSizeIterator<Item = R>,
        R: AsRef<[i64]>,
    {
        let path = self.path_for(kind, key);
        let err = |e: std::io::Error| Error::Cache { path: path.display().to_string(), reason: e.to_string() };
        fs::create_dir_all(&self.dir).map_err(err)?;
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        {
            let file = fs::File::create(&tmp).map_err(err)?;
            let mut out = BufWriter::new(file);
            writeln!(out, "{MAGIC} {kind} {key} {}", records.len()).map_err(err)?;
            let mut line = String::new();
            for rec in records {
                line.clear();
                for (i, v) in rec.as_ref().iter().enumerate() {
                    if i > 0 {
                        line.push(' ');
                    }
                    line.push_str(&v.to_string());
                }
                writeln!(out, "{line}").map_err(err)?;
            }
            out.flush().map_err(err)?;
        }
        fs::rename(&tmp, &path).map_err(err)?;
        Ok(())
    }

    /// Reads the records of a cache file, or `None` if it does not exist.
    ///
    /// A file with a wrong header or a truncated body is an error, not a miss.
    pub fn load(&self, kind: &str, key: &str) -> Result<Option<Vec<Vec<i64>>>> {
        let path = self.path_for(kind, key);
        let bad = |reason: String| Error::Cache { path: path.display().to_string(), reason };
        let file = match fs::File::open(&path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(bad(e.to_string())),
        };
        let mut lines = BufReader::new(file).lines();
        let header = lines.next().ok_or_else(|| bad("empty file".into()))?.map_err(|e| bad(e.to_string()))?;
        let expected = format!("{MAGIC} {kind} {key} ");
        let count: usize = header
            .strip_prefix(&expected)
            .ok_or_else(|| bad(format!("unexpected header {header:?}")))?
            .trim()
            .parse()
            .map_err(|_| bad(format!("bad record count in {header:?}")))?;
        let mut records = Vec::with_capacity(count);
        for line in lines {
            let line = line.map_err(|e| bad(e.to_string()))?;
            let rec = line
                .split_ascii_whitespace()
                .map(|t| t.parse::<i64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| bad(e.to_string()))?;
            records.push(rec);
        }
        if records.len() != count {
            return Err(bad(format!("header promises {count} records, found {}", records.len())));
        }
        Ok(Some(records))
    }
}
