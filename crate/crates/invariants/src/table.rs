//! Loading pair tables from structured text.
//!
//! A table is a sequence of records separated by blank lines. Each record
//! is a list of `key: value` lines with keys `side` (`chi` or `c`),
//! `group`, `index` (written `k mod n`), `rank`, any number of `gen`
//! lines (row-major, rows separated by `/`) and `order`. Text after `#` is
//! a comment.

use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::group::{closure, det, IntMatrix, DEFAULT_CEILING};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Chi,
    C,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Chi => "chi",
            Side::C => "c",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairDatum {
    pub side: Side,
    pub group: String,
    /// `index` modulo `modulus`, the order of the center (resp. of the
    /// fundamental group).
    pub index: u32,
    pub modulus: u32,
    pub rank: usize,
    pub generators: Vec<IntMatrix>,
    pub order: usize,
}

impl PairDatum {
    pub fn label(&self) -> String {
        format!("{}[{} mod {}]", self.group, self.index, self.modulus)
    }

    /// All group elements (closure of the generators).
    pub fn elements(&self) -> Vec<IntMatrix> {
        closure(self.rank, &self.generators, DEFAULT_CEILING).expect("validated at load time")
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TableError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("record at line {line} ({label}): {msg}")]
    Invalid { line: usize, label: String, msg: String },
    #[error("record at line {line} ({label}): generated group exceeds {ceiling} elements")]
    Infinite { line: usize, label: String, ceiling: usize },
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
}

#[derive(Default)]
struct Draft {
    start: usize,
    side: Option<Side>,
    group: Option<String>,
    index: Option<(u32, u32)>,
    rank: Option<usize>,
    gens: Vec<(usize, IntMatrix)>,
    order: Option<usize>,
}

fn malformed(line: usize, msg: impl Into<String>) -> TableError {
    TableError::Malformed { line, msg: msg.into() }
}

fn parse_matrix(line: usize, s: &str) -> Result<IntMatrix, TableError> {
    s.split('/')
        .map(|row| {
            row.split_whitespace()
                .map(|x| x.parse::<i64>().map_err(|_| malformed(line, format!("bad matrix entry '{x}'"))))
                .collect()
        })
        .collect()
}

impl Draft {
    fn is_empty(&self) -> bool {
        self.side.is_none() && self.group.is_none() && self.index.is_none() && self.rank.is_none() && self.gens.is_empty() && self.order.is_none()
    }

    fn finish(self, ceiling: usize) -> Result<PairDatum, TableError> {
        let line = self.start;
        let side = self.side.ok_or_else(|| malformed(line, "record without side"))?;
        let group = self.group.ok_or_else(|| malformed(line, "record without group"))?;
        let (index, modulus) = self.index.ok_or_else(|| malformed(line, "record without index"))?;
        let rank = self.rank.ok_or_else(|| malformed(line, "record without rank"))?;
        let order = self.order.ok_or_else(|| malformed(line, "record without order"))?;
        let label = format!("{group}[{index} mod {modulus}]");
        let invalid = |msg: String| TableError::Invalid { line, label: label.clone(), msg };
        let mut generators = Vec::new();
        for (gl, g) in self.gens {
            if g.len() != rank || g.iter().any(|r| r.len() != rank) {
                return Err(malformed(gl, format!("generator is not {rank}x{rank}")));
            }
            if det(&g).abs() != 1 {
                return Err(invalid(format!("generator at line {gl} is not a lattice automorphism")));
            }
            generators.push(g);
        }
        let elements = closure(rank, &generators, ceiling).ok_or_else(|| TableError::Infinite { line, label: label.clone(), ceiling })?;
        if elements.len() != order {
            return Err(invalid(format!("generated group has order {}, stated {order}", elements.len())));
        }
        Ok(PairDatum { side, group, index, modulus, rank, generators, order })
    }
}

/// Parse a table. The empty string gives the empty table.
pub fn load_pair_tables(source: &str) -> Result<Vec<PairDatum>, TableError> {
    load_with_ceiling(source, DEFAULT_CEILING)
}

pub fn load_with_ceiling(source: &str, ceiling: usize) -> Result<Vec<PairDatum>, TableError> {
    let mut out = Vec::new();
    let mut draft = Draft::default();
    for (i, raw) in source.lines().enumerate() {
        let line = i + 1;
        let text = raw.split('#').next().unwrap().trim();
        if text.is_empty() {
            // a comment line does not end a record
            if raw.trim().is_empty() && !draft.is_empty() {
                out.push(std::mem::take(&mut draft).finish(ceiling)?);
            }
            continue;
        }
        if draft.is_empty() {
            draft.start = line;
        }
        let (key, value) = text.split_once(':').ok_or_else(|| malformed(line, "expected 'key: value'"))?;
        let value = value.trim();
        let dup = |set: bool| if set { Err(malformed(line, format!("duplicate key '{}'", key.trim()))) } else { Ok(()) };
        match key.trim() {
            "side" => {
                dup(draft.side.is_some())?;
                draft.side = Some(match value {
                    "chi" => Side::Chi,
                    "c" => Side::C,
                    _ => return Err(malformed(line, format!("unknown side '{value}'"))),
                });
            }
            "group" => {
                dup(draft.group.is_some())?;
                if value.is_empty() {
                    return Err(malformed(line, "empty group label"));
                }
                draft.group = Some(value.to_string());
            }
            "index" => {
                dup(draft.index.is_some())?;
                let parts: Vec<&str> = value.split_whitespace().collect();
                let parsed = match parts.as_slice() {
                    [k, "mod", n] => k.parse::<u32>().ok().zip(n.parse::<u32>().ok()),
                    _ => None,
                };
                match parsed {
                    Some((k, n)) if n > 0 && k < n => draft.index = Some((k, n)),
                    _ => return Err(malformed(line, format!("index must read 'k mod n' with k < n, got '{value}'"))),
                }
            }
            "rank" => {
                dup(draft.rank.is_some())?;
                draft.rank = Some(value.parse().map_err(|_| malformed(line, format!("bad rank '{value}'")))?);
            }
            "gen" => draft.gens.push((line, parse_matrix(line, value)?)),
            "order" => {
                dup(draft.order.is_some())?;
                draft.order = Some(value.parse().map_err(|_| malformed(line, format!("bad order '{value}'")))?);
            }
            other => return Err(malformed(line, format!("unknown key '{other}'"))),
        }
    }
    if !draft.is_empty() {
        out.push(draft.finish(ceiling)?);
    }
    Ok(out)
}

pub fn load_pair_tables_file(path: &Path) -> Result<Vec<PairDatum>, TableError> {
    let text = std::fs::read_to_string(path).map_err(|e| TableError::Io { path: path.display().to_string(), msg: e.to_string() })?;
    load_pair_tables(&text).map_err(|e| match e {
        TableError::Io { .. } => e,
        other => TableError::Io { path: path.display().to_string(), msg: other.to_string() },
    })
}

/// Load `chi.txt` and `c.txt` from a directory.
pub fn load_table_dir(dir: &Path) -> Result<Vec<PairDatum>, TableError> {
    let mut out = Vec::new();
    for name in ["chi.txt", "c.txt"] {
        out.extend(load_pair_tables_file(&dir.join(name))?);
    }
    Ok(out)
}

/// The tables compiled into the crate.
pub fn shipped_tables() -> Vec<PairDatum> {
    let mut out = load_pair_tables(include_str!("../data/chi.txt")).expect("shipped chi table");
    out.extend(load_pair_tables(include_str!("../data/c.txt")).expect("shipped c table"));
    out
}
