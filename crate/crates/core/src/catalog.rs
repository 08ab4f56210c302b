//! JSON structure files.
//!
//! ```json
//! {"name": "Z3_RING", "order": 3, "add": [[0,1,2],...], "mul": [[0,0,0],...]}
//! ```
//!
//! Tables are row-major with the row index as the left operand. `name` and
//! `notes` are optional.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::algebra::{validate_near_ring, CayleyTable, NearRing, StructureError};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed structure file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("ragged table at row {row} of {table:?}")]
    Ragged { table: &'static str, row: usize },
    #[error("{table:?} table is {rows}x{cols} but order is {order}")]
    Shape {
        table: &'static str,
        rows: usize,
        cols: usize,
        order: usize,
    },
    #[error("{table:?}: {source}")]
    Table {
        table: &'static str,
        #[source]
        source: StructureError,
    },
    #[error(transparent)]
    Invalid(#[from] StructureError),
    #[error("{path}: {source}")]
    InFile {
        path: PathBuf,
        #[source]
        source: Box<CatalogError>,
    },
}

#[derive(Debug, Deserialize)]
struct StructureFile {
    #[serde(default)]
    name: Option<String>,
    order: usize,
    add: Vec<Vec<usize>>,
    mul: Vec<Vec<usize>>,
    #[serde(default)]
    #[allow(dead_code)]
    notes: Option<String>,
}

fn table(name: &'static str, rows: &[Vec<usize>], order: usize) -> Result<CayleyTable, CatalogError> {
    if let Some(first) = rows.first() {
        if let Some(row) = rows.iter().position(|r| r.len() != first.len()) {
            return Err(CatalogError::Ragged { table: name, row });
        }
    }
    let cols = rows.first().map_or(0, Vec::len);
    if rows.len() != order || cols != order {
        return Err(CatalogError::Shape {
            table: name,
            rows: rows.len(),
            cols,
            order,
        });
    }
    CayleyTable::from_rows(rows).map_err(|source| CatalogError::Table { table: name, source })
}

/// Parses and validates a structure from JSON text.
pub fn parse_structure(text: &str) -> Result<NearRing, CatalogError> {
    let file: StructureFile = serde_json::from_str(text)?;
    let add = table("add", &file.add, file.order)?;
    let mul = table("mul", &file.mul, file.order)?;
    let n = validate_near_ring(add, mul)?;
    Ok(match file.name {
        Some(name) => n.with_name(name),
        None => n,
    })
}

fn write_rows(out: &mut String, rows: &[Vec<usize>]) {
    out.push_str("[\n");
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
        let sep = if i + 1 < rows.len() { "," } else { "" };
        let _ = writeln!(out, "    [{}]{sep}", cells.join(", "));
    }
    out.push_str("  ]");
}

/// JSON text for `n`, one table row per line.
pub fn structure_to_json(n: &NearRing) -> String {
    let mut out = String::from("{\n");
    if let Some(name) = n.name() {
        let _ = writeln!(out, "  \"name\": {},", serde_json::to_string(name).expect("string"));
    }
    let _ = writeln!(out, "  \"order\": {},", n.order());
    out.push_str("  \"add\": ");
    write_rows(&mut out, &n.add_table().rows());
    out.push_str(",\n  \"mul\": ");
    write_rows(&mut out, &n.mul_table().rows());
    out.push_str("\n}\n");
    out
}

pub fn read_structure(path: impl AsRef<Path>) -> Result<NearRing, CatalogError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| CatalogError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let n = parse_structure(&text).map_err(|e| CatalogError::InFile {
        path: path.to_path_buf(),
        source: Box::new(e),
    })?;
    Ok(match n.name() {
        Some(_) => n,
        None => {
            let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned());
            n.with_name(stem.unwrap_or_default())
        }
    })
}

pub fn write_structure(n: &NearRing, path: impl AsRef<Path>) -> Result<(), CatalogError> {
    let path = path.as_ref();
    fs::write(path, structure_to_json(n)).map_err(|source| CatalogError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Every `*.json` structure in `dir`, sorted by file name.
pub fn read_catalog(dir: impl AsRef<Path>) -> Result<Vec<NearRing>, CatalogError> {
    let dir = dir.as_ref();
    let io_err = |source| CatalogError::Io {
        path: dir.to_path_buf(),
        source,
    };
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io_err)?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()
        .map_err(io_err)?;
    paths.retain(|p| p.extension().is_some_and(|e| e == "json"));
    paths.sort();
    paths.iter().map(read_structure).collect()
}

/// Writes each structure to `dir/<name>.json`, creating `dir` if needed.
pub fn write_catalog(catalog: &[NearRing], dir: impl AsRef<Path>) -> Result<Vec<PathBuf>, CatalogError> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|source| CatalogError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    catalog
        .iter()
        .enumerate()
        .map(|(i, n)| {
            let stem = n.name().map_or_else(|| format!("structure_{i:05}"), str::to_string);
            let path = dir.join(format!("{stem}.json"));
            write_structure(n, &path).map(|()| path)
        })
        .collect()
}
