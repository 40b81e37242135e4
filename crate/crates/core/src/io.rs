//! Point-set CSV files and construction sidecars.
//!
//! One point per line as `x,y`; each field is an integer, a fraction
//! `num/den` with `den > 0`, or a decimal literal read exactly. Blank lines
//! and lines starting with `#` are skipped. Repeated points are rejected.

use std::fs;
use std::io::Read;
use std::path::Path;

use crate::constructions::ConstructionSpec;
use crate::error::{Error, Result};
use crate::geometry::{Point, PointSet};
use crate::rational::Rational;

pub fn parse_points<R: Read>(mut reader: R, provenance: &str) -> Result<PointSet> {
    let mut text = String::new();
    reader
        .read_to_string(&mut text)
        .map_err(|e| Error::PointsFile {
            line: 0,
            message: e.to_string(),
        })?;
    parse_points_str(&text, provenance)
}

pub fn parse_points_str(text: &str, provenance: &str) -> Result<PointSet> {
    let mut points = Vec::new();
    let mut lines = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx as u64 + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').collect();
        if fields.len() != 2 {
            return Err(Error::PointsFile {
                line,
                message: format!("expected 2 fields x,y, found {}", fields.len()),
            });
        }
        let field = |f: &str| {
            f.parse::<Rational>().map_err(|e| Error::PointsFile {
                line,
                message: e.to_string(),
            })
        };
        points.push(Point::new(field(fields[0])?, field(fields[1])?));
        lines.push(line);
    }
    PointSet::new(points, provenance).map_err(|e| match e {
        Error::DuplicatePoint { index, point } => Error::PointsFile {
            line: lines[index],
            message: format!("duplicate point {point}"),
        },
        other => other,
    })
}

pub fn read_points(path: &Path) -> Result<PointSet> {
    let file = fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_points(file, &path.display().to_string())
}

/// CSV text with the provenance as a leading comment.
pub fn format_points(set: &PointSet) -> String {
    let mut out = String::new();
    if !set.provenance().is_empty() {
        for line in set.provenance().lines() {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
    }
    for p in set {
        out.push_str(&format!("{},{}\n", p.x, p.y));
    }
    out
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_points(path: &Path, set: &PointSet) -> Result<()> {
    write_text(path, &format_points(set))
}

/// Sidecar path for a generated CSV: `<file>.json`.
pub fn sidecar_path(csv_path: &Path) -> std::path::PathBuf {
    let mut name = csv_path.as_os_str().to_owned();
    name.push(".json");
    name.into()
}

pub fn write_sidecar(csv_path: &Path, spec: &ConstructionSpec) -> Result<()> {
    let json = serde_json::to_string_pretty(spec).expect("spec serializes");
    write_text(&sidecar_path(csv_path), &json)
}
