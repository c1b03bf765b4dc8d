//! Plain-text databases of multiplication tables.
//!
//! One record per line: `n:e11 e12 ... enn`, entries 1-based, row-major,
//! single spaces. All database operations stream their input; only
//! [`dedup`] keeps state, one canonical form per distinct class.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::algebra::MulTable;
use crate::class::AlgebraClass;
use crate::error::{Error, Result};

pub fn serialize(m: &MulTable) -> String {
    let body: Vec<String> = m.entries().iter().map(|&v| (v as usize + 1).to_string()).collect();
    format!("{}:{}", m.size(), body.join(" "))
}

/// Parses one record; `line` is only used in error messages.
pub fn parse_record(text: &str, line: usize) -> Result<MulTable> {
    let err = |msg: String| Error::Parse { line, msg };
    let (head, body) = text
        .trim_end_matches(['\n', '\r'])
        .split_once(':')
        .ok_or_else(|| err("missing ':' after size".into()))?;
    let n: usize = head.parse().map_err(|_| err(format!("bad size {head:?}")))?;
    let mut entries = Vec::with_capacity(n * n);
    for tok in body.split(' ') {
        let v: usize = tok.parse().map_err(|_| err(format!("bad entry {tok:?}")))?;
        if v == 0 || v > n {
            return Err(err(format!("entry {v} outside 1..={n}")));
        }
        entries.push((v - 1) as u8);
    }
    MulTable::new(n, entries).map_err(|e| err(e.to_string()))
}

pub fn parse(text: &str) -> Result<MulTable> {
    parse_record(text, 1)
}

/// Streaming reader over records; blank lines are ignored.
pub struct Records<R> {
    reader: R,
    line: usize,
    buf: String,
}

impl<R: BufRead> Records<R> {
    pub fn new(reader: R) -> Self {
        Records {
            reader,
            line: 0,
            buf: String::new(),
        }
    }
}

impl<R: BufRead> Iterator for Records<R> {
    /// `(line number, parsed table)`
    type Item = (usize, Result<MulTable>);

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            self.buf.clear();
            self.line += 1;
            match self.reader.read_line(&mut self.buf) {
                Ok(0) => return None,
                Ok(_) if self.buf.trim().is_empty() => continue,
                Ok(_) => return Some((self.line, parse_record(&self.buf, self.line))),
                Err(e) => {
                    return Some((
                        self.line,
                        Err(Error::Parse {
                            line: self.line,
                            msg: e.to_string(),
                        }),
                    ))
                }
            }
        }
    }
}

/// A record that was not processed, with its line number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skipped {
    pub line: usize,
    pub reason: String,
}

/// Result of a streaming database pass.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DbSummary {
    /// Records that matched (count) or were written (filter, dedup).
    pub matched: u64,
    pub skipped: Vec<Skipped>,
}

impl DbSummary {
    pub fn matched_decimal(&self) -> String {
        self.matched.to_string()
    }
}

/// Walks all records, skipping malformed ones and ones failing the
/// L-algebra axioms (unless `raw`), and hands the rest to `f`.
fn scan<R: BufRead>(reader: R, raw: bool, summary: &mut DbSummary, mut f: impl FnMut(&MulTable) -> Result<()>) -> Result<()> {
    for (line, rec) in Records::new(reader) {
        let m = match rec {
            Ok(m) => m,
            Err(e) => {
                summary.skipped.push(Skipped {
                    line,
                    reason: e.to_string(),
                });
                continue;
            }
        };
        if !raw {
            if let Some(v) = m.verify().first_violation {
                summary.skipped.push(Skipped {
                    line,
                    reason: v.to_string(),
                });
                continue;
            }
        }
        f(&m)?;
    }
    Ok(())
}

pub fn count<R: BufRead>(reader: R, class: AlgebraClass) -> Result<DbSummary> {
    let mut s = DbSummary::default();
    let mut matched = 0;
    scan(reader, false, &mut s, |m| {
        if class.contains(m) {
            matched += 1;
        }
        Ok(())
    })?;
    s.matched = matched;
    Ok(s)
}

pub fn filter<R: BufRead, W: Write>(reader: R, class: AlgebraClass, mut out: W) -> Result<DbSummary> {
    let mut s = DbSummary::default();
    let mut matched = 0;
    scan(reader, false, &mut s, |m| {
        if class.contains(m) {
            matched += 1;
            writeln!(out, "{}", serialize(m)).map_err(io_err("output"))?;
        }
        Ok(())
    })?;
    s.matched = matched;
    Ok(s)
}

/// Keeps the first record of each isomorphism class, unchanged.
pub fn dedup<R: BufRead, W: Write>(reader: R, mut out: W) -> Result<DbSummary> {
    let mut s = DbSummary::default();
    let mut seen = HashSet::new();
    let mut matched = 0;
    scan(reader, false, &mut s, |m| {
        if seen.insert(m.canonical_form()) {
            matched += 1;
            writeln!(out, "{}", serialize(m)).map_err(io_err("output"))?;
        }
        Ok(())
    })?;
    s.matched = matched;
    Ok(s)
}

fn io_err(path: &str) -> impl Fn(std::io::Error) -> Error + '_ {
    move |e| Error::Io {
        path: path.to_string(),
        msg: e.to_string(),
    }
}

pub fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(io_err(&path.display().to_string()))
}

pub fn count_path(path: &Path, class: AlgebraClass) -> Result<DbSummary> {
    count(open(path)?, class)
}

pub fn filter_path(path: &Path, class: AlgebraClass, out: &Path) -> Result<DbSummary> {
    let w = File::create(out).map_err(io_err(&out.display().to_string()))?;
    let mut w = std::io::BufWriter::new(w);
    let s = filter(open(path)?, class, &mut w)?;
    w.flush().map_err(io_err(&out.display().to_string()))?;
    Ok(s)
}

pub fn dedup_path(path: &Path, out: &Path) -> Result<DbSummary> {
    let w = File::create(out).map_err(io_err(&out.display().to_string()))?;
    let mut w = std::io::BufWriter::new(w);
    let s = dedup(open(path)?, &mut w)?;
    w.flush().map_err(io_err(&out.display().to_string()))?;
    Ok(s)
}
