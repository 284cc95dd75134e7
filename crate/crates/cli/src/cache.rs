//! Persistent store for Kazhdan-Lusztig elements: one JSON object keyed
//! `"n:one-line"` (e.g. `"3:2,3,1"`), each value the element's coordinates
//! `{"one-line": laurent}`. Writes go through a temp file and a rename.
//! A missing or unreadable file is treated as empty.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use canontl::hecke::{HeckeAlgebra, HeckeElement};
use canontl::{LaurentPoly, Permutation};
use serde_json::{Map, Value};

pub struct KlCache {
    path: PathBuf,
    entries: BTreeMap<String, Value>,
}

fn one_line(w: &Permutation) -> String {
    w.one_line().iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_one_line(s: &str) -> Option<Permutation> {
    let images: Option<Vec<usize>> = s.split(',').map(|x| x.trim().parse().ok()).collect();
    Permutation::from_one_line(&images?).ok()
}

impl KlCache {
    pub fn open(path: &Path) -> Self {
        let entries = match std::fs::read_to_string(path) {
            Ok(text) => match serde_json::from_str::<BTreeMap<String, Value>>(&text) {
                Ok(map) => map,
                Err(e) => {
                    eprintln!("warning: ignoring unreadable cache {}: {e}", path.display());
                    BTreeMap::new()
                }
            },
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => BTreeMap::new(),
            Err(e) => {
                eprintln!("warning: ignoring unreadable cache {}: {e}", path.display());
                BTreeMap::new()
            }
        };
        Self {
            path: path.to_path_buf(),
            entries,
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Entries per rank.
    pub fn ranks(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for key in self.entries.keys() {
            if let Some(n) = key.split(':').next().and_then(|n| n.parse().ok()) {
                *out.entry(n).or_insert(0) += 1;
            }
        }
        out
    }

    fn decode(n: usize, value: &Value) -> Option<HeckeElement> {
        let mut h = HeckeElement::zero(n);
        for (w, c) in value.as_object()? {
            let w = parse_one_line(w).filter(|w| w.rank() == n)?;
            let c: LaurentPoly = serde_json::from_value(c.clone()).ok()?;
            h.add_term(w, &c);
        }
        Some(h)
    }

    /// Seeds the engine with every stored element of its rank. Malformed
    /// entries are skipped with a warning.
    pub fn preload(&self, hecke: &HeckeAlgebra) {
        let n = hecke.rank();
        let prefix = format!("{n}:");
        for (key, value) in &self.entries {
            let Some(rest) = key.strip_prefix(&prefix) else {
                continue;
            };
            match (parse_one_line(rest), Self::decode(n, value)) {
                (Some(w), Some(h)) if w.rank() == n => hecke.preload_kl(w, h),
                _ => eprintln!("warning: skipping malformed cache entry {key}"),
            }
        }
    }

    /// Records everything the engine has computed. Returns whether anything
    /// new was added.
    pub fn absorb(&mut self, hecke: &HeckeAlgebra) -> bool {
        let n = hecke.rank();
        let mut changed = false;
        for (w, h) in hecke.cached_kl() {
            let key = format!("{n}:{}", one_line(&w));
            if self.entries.contains_key(&key) {
                continue;
            }
            let mut coords = Map::new();
            for (x, c) in h.terms() {
                coords.insert(one_line(x), serde_json::to_value(c).expect("serializable"));
            }
            self.entries.insert(key, Value::Object(coords));
            changed = true;
        }
        changed
    }

    pub fn clear(&mut self) {
        self.entries.clear();
    }

    pub fn save(&self) -> std::io::Result<()> {
        let dir = match self.path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
            _ => PathBuf::from("."),
        };
        std::fs::create_dir_all(&dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
        serde_json::to_writer(&mut tmp, &self.entries)?;
        tmp.flush()?;
        tmp.persist(&self.path).map_err(|e| e.error)?;
        Ok(())
    }
}
