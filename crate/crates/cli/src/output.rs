//! Report formatting and the single file collector.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

/// Decimal notation with 17 significant digits; `nan`/`inf` spelled out.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0.0000000000000000".into();
    }
    let exp = x.abs().log10().floor() as i32;
    let decimals = (16 - exp).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // Rounding can carry into a new leading digit; one fewer decimal restores 17 digits.
    let digits = s.chars().filter(|c| c.is_ascii_digit()).skip_while(|&c| c == '0').count();
    if digits > 17 && decimals > 0 {
        format!("{x:.prec$}", prec = decimals - 1)
    } else {
        s
    }
}

/// RFC 4180 table held in memory until the collector writes it.
pub struct Table {
    writer: csv::Writer<Vec<u8>>,
}

pub enum Cell {
    F(f64),
    U(usize),
    S(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::F(x) => fmt_f64(*x),
            Cell::U(u) => u.to_string(),
            Cell::S(s) => s.clone(),
        }
    }
}

impl Table {
    pub fn new(header: &[&str]) -> Table {
        let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
        writer.write_record(header).expect("in-memory write");
        Table { writer }
    }

    pub fn row(&mut self, cells: &[Cell]) {
        self.writer.write_record(cells.iter().map(Cell::render)).expect("in-memory write");
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.writer.into_inner().expect("in-memory flush")
    }
}

/// UTF-8 JSON with sorted keys and a trailing newline.
pub fn json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    // Going through `Value` sorts object keys.
    let v = serde_json::to_value(value).expect("report serializes");
    let mut out = serde_json::to_vec_pretty(&v).expect("value serializes");
    out.push(b'\n');
    out
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, Serialize)]
pub struct FileRecord {
    pub path: String,
    pub bytes: usize,
    pub sha256: String,
}

/// Writes every emitted file under one directory, in order, and remembers its checksum.
pub struct Collector {
    root: PathBuf,
    pub files: Vec<FileRecord>,
}

impl Collector {
    pub fn new(root: &Path) -> io::Result<Collector> {
        fs::create_dir_all(root)?;
        Ok(Collector { root: root.to_path_buf(), files: Vec::new() })
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> io::Result<()> {
        fs::write(self.root.join(name), bytes)?;
        self.files.push(FileRecord { path: name.to_string(), bytes: bytes.len(), sha256: sha256_hex(bytes) });
        Ok(())
    }

    pub fn root(&self) -> &Path {
        &self.root
    }
}
