use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::canonical::CanonicalKey;
use crate::matrix::IntMatrix;
use crate::nash::{Characteristic, DEFAULT_BASIS_CAP};
use crate::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

/// Which digraph a store holds: semigroups under Nash blowups, or cones
/// under normalized Nash blowups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Nash,
    Normalized,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Nash => "nash",
            Mode::Normalized => "normalized",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nash" => Ok(Mode::Nash),
            "normalized" => Ok(Mode::Normalized),
            other => Err(Error::InvalidArgument(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StoreMeta {
    pub mode: Mode,
    pub characteristic: Characteristic,
    pub rank: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum Record {
    Meta {
        version: u32,
        mode: Mode,
        characteristic: u64,
        rank: usize,
    },
    Vertex {
        key: String,
        matrix: IntMatrix,
    },
    Edge {
        from: String,
        to: String,
    },
}

/// Partial knowledge of a Nash digraph: canonical vertices with payload
/// matrices and the edges found so far.
#[derive(Clone, Debug)]
pub struct DigraphStore {
    pub(super) meta: StoreMeta,
    pub(super) vertices: BTreeMap<String, IntMatrix>,
    pub(super) edges: BTreeSet<(String, String)>,
    /// Vertices whose expansion produced no children at all.
    pub(super) barren: BTreeSet<String>,
    pub(super) basis_cap: usize,
}

impl PartialEq for DigraphStore {
    fn eq(&self, other: &Self) -> bool {
        self.meta == other.meta && self.vertices == other.vertices && self.edges == other.edges
    }
}

impl DigraphStore {
    /// A store holding the unimodular vertex and its loop.
    pub fn new(meta: StoreMeta) -> Self {
        let mut s = Self::empty(meta);
        let eps = CanonicalKey::unimodular(meta.rank);
        let k = eps.to_string();
        s.vertices.insert(k.clone(), eps.into_matrix());
        s.edges.insert((k.clone(), k));
        s
    }

    fn empty(meta: StoreMeta) -> Self {
        DigraphStore {
            meta,
            vertices: BTreeMap::new(),
            edges: BTreeSet::new(),
            barren: BTreeSet::new(),
            basis_cap: DEFAULT_BASIS_CAP,
        }
    }

    pub fn meta(&self) -> StoreMeta {
        self.meta
    }

    /// Bound on the number of bases per Nash blowup.
    pub fn set_basis_cap(&mut self, cap: usize) {
        self.basis_cap = cap;
    }

    pub fn epsilon_key(&self) -> String {
        CanonicalKey::unimodular(self.meta.rank).to_string()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, key: &str) -> bool {
        self.vertices.contains_key(key)
    }

    pub fn payload(&self, key: &str) -> Option<&IntMatrix> {
        self.vertices.get(key)
    }

    /// Vertex keys in sorted order.
    pub fn vertex_keys(&self) -> impl Iterator<Item = &str> {
        self.vertices.keys().map(String::as_str)
    }

    pub fn vertices(&self) -> impl Iterator<Item = (&str, &IntMatrix)> {
        self.vertices.iter().map(|(k, m)| (k.as_str(), m))
    }

    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> {
        self.edges.iter().map(|(a, b)| (a.as_str(), b.as_str()))
    }

    pub fn has_edge(&self, from: &str, to: &str) -> bool {
        self.edges.contains(&(from.to_string(), to.to_string()))
    }

    /// Known children of `key`, sorted.
    pub fn children(&self, key: &str) -> Vec<&str> {
        self.edges
            .range((key.to_string(), String::new())..)
            .take_while(|(a, _)| a == key)
            .map(|(_, b)| b.as_str())
            .collect()
    }

    /// Whether the children of `key` are known.
    pub fn is_expanded(&self, key: &str) -> bool {
        self.barren.contains(key) || !self.children(key).is_empty()
    }

    /// Vertices whose blowup had no pointed chart.
    pub fn barren_vertices(&self) -> &BTreeSet<String> {
        &self.barren
    }

    pub fn insert_vertex(&mut self, key: String, matrix: IntMatrix) {
        self.vertices.entry(key).or_insert(matrix);
    }

    pub fn insert_edge(&mut self, from: &str, to: &str) -> Result<()> {
        for k in [from, to] {
            if !self.contains(k) {
                return Err(Error::UnknownVertex(k.to_string()));
            }
        }
        self.edges.insert((from.to_string(), to.to_string()));
        Ok(())
    }

    /// Set union with a store of the same meta.
    pub fn merge(&mut self, other: &DigraphStore) -> Result<()> {
        if self.meta != other.meta {
            return Err(Error::StoreMismatch(format!(
                "cannot merge {:?} into {:?}",
                other.meta, self.meta
            )));
        }
        for (k, m) in &other.vertices {
            self.insert_vertex(k.clone(), m.clone());
        }
        self.edges.extend(other.edges.iter().cloned());
        self.barren.extend(other.barren.iter().cloned());
        Ok(())
    }

    pub fn write_to<W: Write>(&self, w: W) -> Result<()> {
        let mut w = BufWriter::new(w);
        let mut line = |r: &Record| -> Result<()> {
            serde_json::to_writer(&mut w, r).map_err(std::io::Error::from)?;
            w.write_all(b"\n")?;
            Ok(())
        };
        line(&Record::Meta {
            version: FORMAT_VERSION,
            mode: self.meta.mode,
            characteristic: self.meta.characteristic.value(),
            rank: self.meta.rank,
        })?;
        for (key, matrix) in &self.vertices {
            line(&Record::Vertex {
                key: key.clone(),
                matrix: matrix.clone(),
            })?;
        }
        for (from, to) in &self.edges {
            line(&Record::Edge {
                from: from.clone(),
                to: to.clone(),
            })?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads JSON lines; repeated records merge idempotently and repeated
    /// meta lines must agree with the first.
    pub fn read_from<R: Read>(r: R) -> Result<DigraphStore> {
        let mut store: Option<DigraphStore> = None;
        let mut pending_edges = Vec::new();
        for (i, line) in BufReader::new(r).lines().enumerate() {
            let lineno = i + 1;
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: Record = serde_json::from_str(&line).map_err(|e| Error::StoreFormat {
                line: lineno,
                message: e.to_string(),
            })?;
            match rec {
                Record::Meta {
                    version,
                    mode,
                    characteristic,
                    rank,
                } => {
                    if version != FORMAT_VERSION {
                        return Err(Error::StoreFormat {
                            line: lineno,
                            message: format!("unsupported version {version}"),
                        });
                    }
                    let characteristic =
                        Characteristic::new(characteristic).map_err(|e| Error::StoreFormat {
                            line: lineno,
                            message: e.to_string(),
                        })?;
                    let meta = StoreMeta {
                        mode,
                        characteristic,
                        rank,
                    };
                    match &store {
                        None => store = Some(DigraphStore::empty(meta)),
                        Some(s) if s.meta == meta => {}
                        Some(s) => {
                            return Err(Error::StoreMismatch(format!(
                                "line {lineno}: {meta:?} conflicts with {:?}",
                                s.meta
                            )))
                        }
                    }
                }
                Record::Vertex { key, matrix } => {
                    let s = store.as_mut().ok_or(Error::StoreFormat {
                        line: lineno,
                        message: "vertex before meta".into(),
                    })?;
                    if matrix.rows() != s.meta.rank {
                        return Err(Error::StoreFormat {
                            line: lineno,
                            message: format!(
                                "matrix has {} rows, store rank is {}",
                                matrix.rows(),
                                s.meta.rank
                            ),
                        });
                    }
                    s.insert_vertex(key, matrix);
                }
                Record::Edge { from, to } => {
                    if store.is_none() {
                        return Err(Error::StoreFormat {
                            line: lineno,
                            message: "edge before meta".into(),
                        });
                    }
                    pending_edges.push((lineno, from, to));
                }
            }
        }
        let mut s = store.ok_or(Error::StoreFormat {
            line: 1,
            message: "missing meta record".into(),
        })?;
        for (lineno, from, to) in pending_edges {
            s.insert_edge(&from, &to).map_err(|e| Error::StoreFormat {
                line: lineno,
                message: e.to_string(),
            })?;
        }
        let eps = s.epsilon_key();
        if s.contains(&eps) {
            s.edges.insert((eps.clone(), eps));
        }
        Ok(s)
    }

    /// Writes the whole store, replacing `path` atomically.
    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        self.write_to(fs::File::create(&tmp)?)?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<DigraphStore> {
        DigraphStore::read_from(fs::File::open(path)?)
    }
}
