//! Persistent A_k(n) results as a versioned, sorted CSV file.
//!
//! ```text
//! schema_version,1
//! k,n,A,types,elapsed_us
//! 2,5,4,,181
//! 3,7,6,1:3;2:6,902
//! ```

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;
const VERSION_LINE: &str = "schema_version,1";
const HEADER: &str = "k,n,A,types,elapsed_us";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CacheEntry {
    pub k: usize,
    pub n: u64,
    pub a: u64,
    pub per_type: Option<BTreeMap<usize, u64>>,
    /// Wall time of the original computation, replayed on reuse.
    pub elapsed_us: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Cache {
    entries: BTreeMap<(usize, u64), CacheEntry>,
}

impl Cache {
    /// Reads `path`; a missing file is an empty cache.
    pub fn load(path: &Path) -> Result<Cache, CliError> {
        match File::open(path) {
            Ok(file) => Cache::parse(BufReader::new(file), path),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(Cache::default()),
            Err(e) => Err(CliError::io(path, e)),
        }
    }

    fn parse(reader: impl BufRead, path: &Path) -> Result<Cache, CliError> {
        let corrupt = |line: usize, reason: String| CliError::CorruptCache {
            path: path.to_path_buf(),
            line,
            reason,
        };
        let mut lines = reader.lines();
        let mut next = |no: usize| -> Result<Option<String>, CliError> {
            lines.next().transpose().map_err(|e| corrupt(no, e.to_string()))
        };
        match next(1)? {
            Some(l) if l == VERSION_LINE => {}
            Some(l) => match l.strip_prefix("schema_version,") {
                Some(v) => {
                    return Err(CliError::CacheVersion {
                        path: path.to_path_buf(),
                        found: v.to_string(),
                        expected: SCHEMA_VERSION,
                    })
                }
                None => return Err(corrupt(1, format!("expected {VERSION_LINE:?}, found {l:?}"))),
            },
            None => return Err(corrupt(1, "empty file".into())),
        }
        match next(2)? {
            Some(l) if l == HEADER => {}
            other => return Err(corrupt(2, format!("expected header {HEADER:?}, found {other:?}"))),
        }
        let mut cache = Cache::default();
        let mut last_key = None;
        let mut no = 2;
        while let Some(line) = next(no + 1)? {
            no += 1;
            let entry = parse_row(&line).map_err(|r| corrupt(no, r))?;
            let key = (entry.k, entry.n);
            if last_key.is_some_and(|prev| prev >= key) {
                return Err(corrupt(no, format!("row ({}, {}) out of order or repeated", key.0, key.1)));
            }
            last_key = Some(key);
            cache.entries.insert(key, entry);
        }
        Ok(cache)
    }

    pub fn get(&self, k: usize, n: u64) -> Option<&CacheEntry> {
        self.entries.get(&(k, n))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Adds an entry. An existing entry is never replaced; a conflicting
    /// value for the same `(k, n)` is an error.
    pub fn insert(&mut self, entry: CacheEntry) -> Result<(), CliError> {
        let key = (entry.k, entry.n);
        match self.entries.get(&key) {
            Some(old) if old.a != entry.a => Err(CliError::CacheConflict {
                k: entry.k,
                n: entry.n,
                cached: old.a,
                computed: entry.a,
            }),
            Some(_) => Ok(()),
            None => {
                self.entries.insert(key, entry);
                Ok(())
            }
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("{VERSION_LINE}\n{HEADER}\n");
        for e in self.entries.values() {
            let types = e
                .per_type
                .as_ref()
                .map(|t| t.iter().map(|(j, c)| format!("{j}:{c}")).collect::<Vec<_>>().join(";"))
                .unwrap_or_default();
            out.push_str(&format!("{},{},{},{},{}\n", e.k, e.n, e.a, types, e.elapsed_us));
        }
        out
    }

    /// Writes the whole cache to a temporary file and renames it over `path`.
    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        write_atomically(path, self.to_csv().as_bytes())
    }
}

fn parse_row(line: &str) -> Result<CacheEntry, String> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != 5 {
        return Err(format!("expected 5 fields, found {}", fields.len()));
    }
    let int = |s: &str, what: &str| s.parse::<u64>().map_err(|_| format!("bad {what} {s:?}"));
    let k = int(fields[0], "k")? as usize;
    let n = int(fields[1], "n")?;
    let a = int(fields[2], "A")?;
    if k == 0 || n == 0 || a > n {
        return Err(format!("inconsistent row k={k} n={n} A={a}"));
    }
    let per_type = if fields[3].is_empty() {
        None
    } else {
        let mut map = BTreeMap::new();
        for pair in fields[3].split(';') {
            let (j, c) = pair.split_once(':').ok_or_else(|| format!("bad type count {pair:?}"))?;
            map.insert(int(j, "type")? as usize, int(c, "type count")?);
        }
        Some(map)
    };
    Ok(CacheEntry { k, n, a, per_type, elapsed_us: int(fields[4], "elapsed_us")? })
}

/// Replaces `path` with `bytes` via a sibling temporary file, so readers
/// never see a partial write.
pub fn write_atomically(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(path, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}
