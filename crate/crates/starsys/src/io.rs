//! Text file formats and JSON export.
//!
//! System files:
//!
//! ```text
//! ESS 1 e=3 n=6 blocks=5
//! 1: 3 5 6
//! 2: 1 3 6
//! ...
//! ```
//!
//! Colouring files:
//!
//! ```text
//! COL 1 n=6 k=2
//! 1 1
//! 2 2
//! ...
//! ```
//!
//! Lines starting with `#` are ignored; ids are 1-based; files are ASCII
//! with LF line endings. Emission is canonical (blocks in system order,
//! leaves ascending), so parse ∘ serialize is byte-identical on canonical
//! files.

use std::fmt::Write as _;

use thiserror::Error;

use crate::baranyai::SubsetPartition;
use crate::constructions::Claims;
use crate::system::{Colouring, StarSystem, SystemError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("header declares {declared} blocks, file has {got}")]
    BlockCountMismatch { declared: usize, got: usize },
    #[error("colouring covers {got} vertices, header declares n={declared}")]
    VertexCountMismatch { declared: u32, got: usize },
    #[error(transparent)]
    System(#[from] SystemError),
    #[error("class {0} out of range 1..={1}")]
    ClassOutOfRange(u32, u32),
}

pub fn write_system(sys: &StarSystem) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "ESS 1 e={} n={} blocks={}",
        sys.e(),
        sys.n(),
        sys.block_count()
    )
    .unwrap();
    for b in sys.blocks() {
        write!(out, "{}:", b.center()).unwrap();
        for l in b.leaves() {
            write!(out, " {l}").unwrap();
        }
        out.push('\n');
    }
    out
}

fn parse_kv(token: &str, key: &str, line: usize) -> Result<u64, IoError> {
    token
        .strip_prefix(key)
        .and_then(|v| v.strip_prefix('='))
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| IoError::Malformed {
            line,
            msg: format!("expected {key}=<integer>, got {token:?}"),
        })
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_system(text: &str) -> Result<StarSystem, IoError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or(IoError::Malformed {
        line: 0,
        msg: "empty file".into(),
    })?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 5 || tokens[0] != "ESS" || tokens[1] != "1" {
        return Err(IoError::Malformed {
            line: hline,
            msg: format!("expected header `ESS 1 e=<e> n=<n> blocks=<b>`, got {header:?}"),
        });
    }
    let e = parse_kv(tokens[2], "e", hline)? as u32;
    let n = parse_kv(tokens[3], "n", hline)? as u32;
    let declared = parse_kv(tokens[4], "blocks", hline)? as usize;
    let mut sys = StarSystem::with_capacity(e, n, declared)?;
    let mut got = 0usize;
    for (lno, line) in lines {
        let (center, rest) = line.split_once(':').ok_or_else(|| IoError::Malformed {
            line: lno,
            msg: "expected `<center>: <leaf> ...`".into(),
        })?;
        let center = center.trim().parse().map_err(|_| IoError::Malformed {
            line: lno,
            msg: format!("bad center {center:?}"),
        })?;
        let leaves: Result<Vec<u32>, _> = rest
            .split_whitespace()
            .map(|t| {
                t.parse::<u32>().map_err(|_| IoError::Malformed {
                    line: lno,
                    msg: format!("bad leaf {t:?}"),
                })
            })
            .collect();
        sys.push_block(center, &leaves?)?;
        got += 1;
    }
    if got != declared {
        return Err(IoError::BlockCountMismatch { declared, got });
    }
    Ok(sys)
}

pub fn write_colouring(col: &Colouring) -> String {
    let mut out = String::new();
    writeln!(out, "COL 1 n={} k={}", col.n(), col.k()).unwrap();
    for v in 1..=col.n() {
        writeln!(out, "{v} {}", col.class_of(v)).unwrap();
    }
    out
}

pub fn parse_colouring(text: &str) -> Result<Colouring, IoError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or(IoError::Malformed {
        line: 0,
        msg: "empty file".into(),
    })?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 4 || tokens[0] != "COL" || tokens[1] != "1" {
        return Err(IoError::Malformed {
            line: hline,
            msg: format!("expected header `COL 1 n=<n> k=<k>`, got {header:?}"),
        });
    }
    let n = parse_kv(tokens[2], "n", hline)? as u32;
    let k = parse_kv(tokens[3], "k", hline)? as u32;
    let mut assign = vec![0u32; n as usize];
    let mut seen = vec![false; n as usize];
    let mut got = 0usize;
    for (lno, line) in lines {
        let mut it = line.split_whitespace();
        let (v, c) = match (it.next(), it.next(), it.next()) {
            (Some(v), Some(c), None) => (v, c),
            _ => {
                return Err(IoError::Malformed {
                    line: lno,
                    msg: "expected `<vertex> <class>`".into(),
                })
            }
        };
        let v: u32 = v.parse().map_err(|_| IoError::Malformed {
            line: lno,
            msg: format!("bad vertex {v:?}"),
        })?;
        let c: u32 = c.parse().map_err(|_| IoError::Malformed {
            line: lno,
            msg: format!("bad class {c:?}"),
        })?;
        if v < 1 || v > n {
            return Err(IoError::Malformed {
                line: lno,
                msg: format!("vertex {v} outside 1..={n}"),
            });
        }
        if c < 1 || c > k {
            return Err(IoError::ClassOutOfRange(c, k));
        }
        if !seen[v as usize - 1] {
            seen[v as usize - 1] = true;
            got += 1;
        }
        assign[v as usize - 1] = c;
    }
    if got != n as usize {
        return Err(IoError::VertexCountMismatch { declared: n, got });
    }
    Ok(Colouring::new(k, assign).expect("classes validated above"))
}

/// `class <i>: {a b c} {d e f} ...` lines, classes 1-based.
pub fn write_partition(p: &SubsetPartition) -> String {
    let mut out = String::new();
    for (i, class) in p.classes.iter().enumerate() {
        write!(out, "class {}:", i + 1).unwrap();
        for subset in class {
            out.push_str(" {");
            for (j, v) in subset.iter().enumerate() {
                if j > 0 {
                    out.push(' ');
                }
                write!(out, "{v}").unwrap();
            }
            out.push('}');
        }
        out.push('\n');
    }
    out
}

/// JSON document: `{format, version, e, n, blocks: [[center, [leaves]]], claims?}`.
pub fn system_to_json(sys: &StarSystem, claims: Option<&Claims>) -> serde_json::Value {
    let blocks: Vec<serde_json::Value> = sys
        .blocks()
        .map(|b| serde_json::json!([b.center(), b.leaves()]))
        .collect();
    let mut doc = serde_json::json!({
        "format": "ESS",
        "version": 1,
        "e": sys.e(),
        "n": sys.n(),
        "blocks": blocks,
    });
    if let Some(claims) = claims {
        doc["claims"] = serde_json::to_value(claims).expect("claims serialize");
    }
    doc
}
