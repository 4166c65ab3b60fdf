//! Report serialization: CSV rows, JSON metadata, optional field dumps.
//!
//! Floats are written in shortest round-trip decimal form so re-parsing a
//! report reproduces the exact values; identical configs therefore produce
//! bit-identical CSV bodies up to the trailing wall-time column.

use crate::config::ConfigDocument;
use csflux_core::benchmarks::{ReportRow, RunOutput};
use csflux_core::geometry::Point2;
use csflux_core::indicator::indicator_value;
use csflux_core::Mesh;

use serde::Serialize;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

pub type IoResult<T> = std::io::Result<T>;

/// Create `dir` and prove it is writable before any solve starts.
pub fn ensure_writable(dir: &Path) -> IoResult<()> {
    fs::create_dir_all(dir)?;
    let probe = dir.join(".write-probe");
    fs::write(&probe, b"ok")?;
    fs::remove_file(&probe)?;
    Ok(())
}

/// Write `report.csv` with a fixed column order and header row.
pub fn write_csv(rows: &[ReportRow], path: &Path) -> IoResult<()> {
    let mut writer = csv::Writer::from_path(path)?;
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    // A header-only file still needs the header row.
    if rows.is_empty() {
        let mut writer = csv::WriterBuilder::new().from_path(path)?;
        writer.write_record(ReportRow::csv_header())?;
        writer.flush()?;
    }
    Ok(())
}

/// Read a report back; round-trips the exact floating point values.
pub fn read_csv(path: &Path) -> IoResult<Vec<ReportRow>> {
    let mut reader = csv::Reader::from_path(path)?;
    let mut rows = Vec::new();
    for record in reader.deserialize() {
        let row: ReportRow =
            record.map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))?;
        rows.push(row);
    }
    Ok(rows)
}

/// Helper bolted onto the row type so the header stays in one place.
pub trait CsvHeader {
    fn csv_header() -> Vec<&'static str>;
}

impl CsvHeader for ReportRow {
    fn csv_header() -> Vec<&'static str> {
        vec![
            "benchmark",
            "case",
            "method",
            "eps",
            "n_i",
            "h_interface",
            "l2_rel_err",
            "recoil_norm",
            "recoil_rel_err",
            "pe_gas_max",
            "peak_in_band",
            "interface_temperature",
            "fitted_order",
            "steps",
            "status",
            "wall_time_s",
        ]
    }
}

#[derive(Serialize)]
struct Meta<'a> {
    schema_version: u32,
    tool_version: &'static str,
    started_at: String,
    finished_at: String,
    config: &'a ConfigDocument,
    rows: usize,
    total_wall_time_s: f64,
}

/// Write `meta.json` next to the report.
pub fn write_meta(
    config: &ConfigDocument,
    rows: &[ReportRow],
    started_at: chrono::DateTime<chrono::Utc>,
    dir: &Path,
) -> IoResult<()> {
    let meta = Meta {
        schema_version: crate::config::SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION"),
        started_at: started_at.to_rfc3339(),
        finished_at: chrono::Utc::now().to_rfc3339(),
        config,
        rows: rows.len(),
        total_wall_time_s: rows.iter().map(|r| r.wall_time_s).sum(),
    };
    let mut file = fs::File::create(dir.join("meta.json"))?;
    file.write_all(serde_json::to_string_pretty(&meta).expect("serializable meta").as_bytes())?;
    file.write_all(b"\n")
}

/// Dump the nodal solution as `fields/<row-key>.csv` with columns
/// (x[, y], T, chi, d).
pub fn write_field_dump(output: &RunOutput, dir: &Path) -> IoResult<PathBuf> {
    let Some(solution) = &output.solution else {
        return Err(std::io::Error::new(
            std::io::ErrorKind::NotFound,
            "failed runs have no field to dump",
        ));
    };
    let fields_dir = dir.join("fields");
    fs::create_dir_all(&fields_dir)?;
    let path = fields_dir.join(format!("{}.csv", output.spec.key()));
    let mut writer = csv::Writer::from_path(&path)?;
    let values = solution.field.values();
    match solution.field.mesh().as_ref() {
        Mesh::Interval(mesh) => {
            writer.write_record(["x", "T", "chi", "d"])?;
            for (i, &x) in mesh.nodes().iter().enumerate() {
                let d = solution.geometry.signed_distance(Point2::new(x, 0.0));
                let chi = indicator_value(d, solution.eps);
                writer.write_record(&[
                    format!("{x}"),
                    format!("{}", values[i]),
                    format!("{chi}"),
                    format!("{d}"),
                ])?;
            }
        }
        Mesh::Cartesian(mesh) => {
            writer.write_record(["x", "y", "T", "chi", "d"])?;
            for idx in 0..mesh.n_nodes() {
                let (x, y) = mesh.node_coords(idx);
                let d = solution.geometry.signed_distance(Point2::new(x, y));
                let chi = indicator_value(d, solution.eps);
                writer.write_record(&[
                    format!("{x}"),
                    format!("{y}"),
                    format!("{}", values[idx]),
                    format!("{chi}"),
                    format!("{d}"),
                ])?;
            }
        }
    }
    writer.flush()?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_row() -> ReportRow {
        ReportRow {
            benchmark: "B1".into(),
            case: "V1".into(),
            method: "CE".into(),
            eps: 6e-6,
            n_i: 16,
            h_interface: 3.75e-7,
            l2_rel_err: Some(0.1 + 0.2),
            recoil_norm: None,
            recoil_rel_err: None,
            pe_gas_max: None,
            peak_in_band: Some(true),
            interface_temperature: Some(3426.6873052115453),
            fitted_order: None,
            steps: 10_000,
            status: "ok".into(),
            wall_time_s: 1.25,
        }
    }

    #[test]
    fn csv_round_trips_exact_floats() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("report.csv");
        let rows = vec![sample_row()];
        write_csv(&rows, &path).unwrap();
        let back = read_csv(&path).unwrap();
        assert_eq!(rows, back);
        // Shortest round-trip formatting: 0.30000000000000004 survives.
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.contains("0.30000000000000004"), "{text}");
    }

    #[test]
    fn empty_report_is_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("report.csv");
        write_csv(&[], &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        let header = lines.next().unwrap();
        assert!(header.starts_with("benchmark,case,method,eps"));
        assert_eq!(lines.next(), None);
        assert!(read_csv(&path).unwrap().is_empty());
    }

    #[test]
    fn ensure_writable_rejects_unwritable_target() {
        let dir = tempfile::tempdir().unwrap();
        // A file where a directory is needed.
        let blocker = dir.path().join("blocked");
        fs::write(&blocker, b"x").unwrap();
        assert!(ensure_writable(&blocker).is_err());
        assert!(ensure_writable(&dir.path().join("fresh/nested")).is_ok());
    }
}
