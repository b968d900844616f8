//! Points CSV: one point per record, `x,y` in the plane or `x` on the line.
//! A first record that does not parse as numbers is taken as a header.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::metric::{Point, PointCloud};

pub fn read_points<R: Read>(input: R) -> Result<PointCloud> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(input);
    let mut pts = Vec::new();
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::Io(io),
            other => Error::Parse { line: k + 1, message: format!("{other:?}") },
        })?;
        let line = rec.position().map_or(k + 1, |p| p.line() as usize);
        if rec.iter().all(str::is_empty) {
            continue;
        }
        let coords: std::result::Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        let coords = match coords {
            Ok(c) => c,
            Err(_) if pts.is_empty() && k == 0 => continue,
            Err(e) => return Err(Error::Parse { line, message: e.to_string() }),
        };
        let p = Point::try_new(&coords).map_err(|e| Error::Parse { line, message: e.to_string() })?;
        pts.push(p);
    }
    PointCloud::new(pts)
}

pub fn read_points_file(path: &Path) -> Result<PointCloud> {
    read_points(std::fs::File::open(path)?)
}

/// Writes `x,y` (or `x`) records with full round-trip precision.
pub fn write_points<W: Write>(a: &PointCloud, header: bool, mut out: W) -> Result<()> {
    if header {
        writeln!(out, "{}", if a.dim() == 1 { "x" } else { "x,y" })?;
    }
    for p in a.iter() {
        writeln!(out, "{p}")?;
    }
    out.flush()?;
    Ok(())
}
