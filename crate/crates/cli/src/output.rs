//! File formats: the per-step series CSV, error tables, and legacy VTK
//! snapshots of `|u1|`, `|u2|`. Readers are provided for every writer so the
//! schemas can be checked round-trip.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use pauli_core::{EvolutionSink, Grid, PauliError, SeriesRecord, SpinorField};

use crate::error::CliError;

pub const SERIES_FILE: &str = "series.csv";
pub const SERIES_HEADER: &str = "t,mass,l2_u1,l2_u2,alpha,energy";
pub const CONVERGE_FILE: &str = "converge.csv";
pub const CONVERGE_HEADER: &str = "dt,max_abs_error,max_rel_error";
pub const ORACLE_FILE: &str = "oracle.csv";
pub const ORACLE_HEADER: &str = "dt,alpha_error";

pub fn snapshot_file_name(step: usize) -> String {
    format!("snapshot_{step:05}.vtk")
}

pub fn series_row(r: &SeriesRecord<f64>) -> String {
    format!(
        "{},{},{},{},{},{}",
        r.time, r.mass, r.l2_u1, r.l2_u2, r.alpha, r.energy
    )
}

fn parse_err(path: &Path, line: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::Validation(format!("{}:{line}: {msg}", path.display()))
}

fn parse_floats(path: &Path, line_no: usize, line: &str, width: usize) -> Result<Vec<f64>, CliError> {
    let vals = line
        .split(',')
        .map(|v| v.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| parse_err(path, line_no, e))?;
    if vals.len() != width {
        return Err(parse_err(
            path,
            line_no,
            format!("expected {width} columns, found {}", vals.len()),
        ));
    }
    Ok(vals)
}

pub fn read_series_csv(path: &Path) -> Result<Vec<SeriesRecord<f64>>, CliError> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == SERIES_HEADER => {}
        other => {
            return Err(parse_err(
                path,
                1,
                format!("expected header {SERIES_HEADER:?}, found {:?}", other.map(|l| l.1)),
            ))
        }
    }
    lines
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let v = parse_floats(path, i + 1, l, 6)?;
            Ok(SeriesRecord {
                time: v[0],
                mass: v[1],
                l2_u1: v[2],
                l2_u2: v[3],
                alpha: v[4],
                energy: v[5],
            })
        })
        .collect()
}

/// A `dt`-indexed error table with its `# slope=` footer.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorTable {
    pub header: String,
    pub rows: Vec<Vec<f64>>,
    /// `None` when the footer reads `nan` (fewer than two rows)
    pub slope: Option<f64>,
}

impl ErrorTable {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.header);
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        let slope = self.slope.map_or("nan".to_string(), |s| s.to_string());
        let _ = writeln!(out, "# slope={slope}");
        out
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.render())?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)?;
        let mut lines = text.lines().enumerate();
        let header = lines
            .next()
            .map(|(_, h)| h.to_string())
            .ok_or_else(|| parse_err(path, 1, "empty file"))?;
        let width = header.split(',').count();
        let mut rows = Vec::new();
        let mut slope = None;
        let mut footer = false;
        for (i, line) in lines {
            if let Some(v) = line.strip_prefix("# slope=") {
                let s: f64 = v.trim().parse().map_err(|e| parse_err(path, i + 1, e))?;
                slope = (!s.is_nan()).then_some(s);
                footer = true;
            } else if !line.trim().is_empty() {
                rows.push(parse_floats(path, i + 1, line, width)?);
            }
        }
        if !footer {
            return Err(parse_err(path, text.lines().count(), "missing \"# slope=\" footer"));
        }
        Ok(Self { header, rows, slope })
    }
}

/// Writes `|u1|` and `|u2|` as legacy ASCII VTK structured points.
pub fn write_vtk(path: &Path, state: &SpinorField<f64>, grid: &Grid<f64>, time: f64) -> Result<(), CliError> {
    let state = state.clone().into_physical(grid)?;
    let mut w = BufWriter::new(File::create(path)?);
    let [n1, n2, n3] = grid.counts();
    let [d1, d2, d3] = grid.spacings();
    writeln!(w, "# vtk DataFile Version 3.0")?;
    writeln!(w, "spinor moduli t={time}")?;
    writeln!(w, "ASCII")?;
    writeln!(w, "DATASET STRUCTURED_POINTS")?;
    writeln!(w, "DIMENSIONS {n1} {n2} {n3}")?;
    writeln!(w, "ORIGIN 0 0 0")?;
    writeln!(w, "SPACING {d1} {d2} {d3}")?;
    writeln!(w, "POINT_DATA {}", grid.len())?;
    for (c, name) in ["abs_u1", "abs_u2"].iter().enumerate() {
        writeln!(w, "SCALARS {name} double 1")?;
        writeln!(w, "LOOKUP_TABLE default")?;
        for z in state.component(c) {
            writeln!(w, "{}", z.norm())?;
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct VtkSnapshot {
    pub dims: [usize; 3],
    pub origin: [f64; 3],
    pub spacing: [f64; 3],
    pub scalars: Vec<(String, Vec<f64>)>,
}

pub fn read_vtk(path: &Path) -> Result<VtkSnapshot, CliError> {
    let text = std::fs::read_to_string(path)?;
    let lines: Vec<&str> = text.lines().collect();
    if lines.len() < 8 || !lines[0].starts_with("# vtk DataFile") || lines[2] != "ASCII" {
        return Err(parse_err(path, 1, "not a legacy ASCII VTK file"));
    }
    if lines[3] != "DATASET STRUCTURED_POINTS" {
        return Err(parse_err(path, 4, "expected DATASET STRUCTURED_POINTS"));
    }
    let triple = |i: usize, key: &str| -> Result<[f64; 3], CliError> {
        let rest = lines[i]
            .strip_prefix(key)
            .ok_or_else(|| parse_err(path, i + 1, format!("expected {key}")))?;
        let v: Vec<f64> = rest
            .split_whitespace()
            .map(|s| s.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| parse_err(path, i + 1, e))?;
        v.try_into()
            .map_err(|_| parse_err(path, i + 1, "expected three values"))
    };
    let d = triple(4, "DIMENSIONS ")?;
    let dims = d.map(|v| v as usize);
    let origin = triple(5, "ORIGIN ")?;
    let spacing = triple(6, "SPACING ")?;
    let n: usize = dims.iter().product();
    let mut scalars = Vec::new();
    let mut i = 8;
    while i < lines.len() {
        let name = lines[i]
            .strip_prefix("SCALARS ")
            .and_then(|r| r.split_whitespace().next())
            .ok_or_else(|| parse_err(path, i + 1, "expected SCALARS"))?
            .to_string();
        let start = i + 2;
        if start + n > lines.len() {
            return Err(parse_err(path, i + 1, "truncated scalar block"));
        }
        let vals = lines[start..start + n]
            .iter()
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| parse_err(path, start, e))?;
        scalars.push((name, vals));
        i = start + n;
    }
    Ok(VtkSnapshot {
        dims,
        origin,
        spacing,
        scalars,
    })
}

/// Streams the series CSV and VTK snapshots of a run into a directory.
/// Rows are flushed as they are written so a diverging run keeps its
/// partial output.
pub struct RunSink {
    dir: PathBuf,
    grid: Grid<f64>,
    series: BufWriter<File>,
    pub snapshots: Vec<PathBuf>,
    pub rows: usize,
}

impl RunSink {
    pub fn create(dir: &Path, grid: &Grid<f64>) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir)?;
        let mut series = BufWriter::new(File::create(dir.join(SERIES_FILE))?);
        writeln!(series, "{SERIES_HEADER}")?;
        series.flush()?;
        Ok(Self {
            dir: dir.to_path_buf(),
            grid: grid.clone(),
            series,
            snapshots: Vec::new(),
            rows: 0,
        })
    }
}

fn sink_err(e: impl std::fmt::Display) -> PauliError {
    PauliError::Sink(e.to_string())
}

impl EvolutionSink<f64> for RunSink {
    fn record(&mut self, record: &SeriesRecord<f64>, _state: &SpinorField<f64>) -> pauli_core::Result<()> {
        writeln!(self.series, "{}", series_row(record)).map_err(sink_err)?;
        self.series.flush().map_err(sink_err)?;
        self.rows += 1;
        Ok(())
    }

    fn snapshot(&mut self, step: usize, time: f64, state: &SpinorField<f64>) -> pauli_core::Result<()> {
        let path = self.dir.join(snapshot_file_name(step));
        write_vtk(&path, state, &self.grid, time).map_err(sink_err)?;
        self.snapshots.push(path);
        Ok(())
    }
}
