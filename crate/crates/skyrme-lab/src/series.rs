//! File formats: the diagnostics series CSV, snapshot CSVs, the run
//! manifest, and the validator's JSON-lines report.
//!
//! Series CSV header (one row per record, 17 significant digits):
//! `t,E,q,cont,decay_v,decay_phi,decay_a,res_phi,res_phit,Hs_phi,Hsm1_phit,L2_phitt,L2_phittt`
//!
//! Snapshot CSV header: `r,u,ut,v,vt,phi,phit`.

use crate::config::SimConfig;
use crate::diagnostics::DiagnosticsRecord;
use crate::error::{LabError, Result};
use crate::evolve::RunSink;
use crate::scenarios::ValidationReport;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

pub const SERIES_HEADER: &str =
    "t,E,q,cont,decay_v,decay_phi,decay_a,res_phi,res_phit,Hs_phi,Hsm1_phit,L2_phitt,L2_phittt";
pub const SNAPSHOT_HEADER: &str = "r,u,ut,v,vt,phi,phit";

/// One saved field snapshot (plain columns; assembled by the evolver).
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotData {
    pub t: f64,
    pub r: Vec<f64>,
    pub u: Vec<f64>,
    pub ut: Vec<f64>,
    pub v: Vec<f64>,
    pub vt: Vec<f64>,
    pub phi: Vec<f64>,
    pub phit: Vec<f64>,
}

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn series_line(rec: &DiagnosticsRecord) -> String {
    [
        fmt(rec.t),
        fmt(rec.energy),
        rec.charge.to_string(),
        fmt(rec.cont),
        fmt(rec.decay_v),
        fmt(rec.decay_phi),
        fmt(rec.decay_a),
        fmt(rec.res_phi),
        fmt(rec.res_phit),
        fmt(rec.hs_phi),
        fmt(rec.hsm1_phit),
        fmt(rec.l2_phitt),
        fmt(rec.l2_phittt),
    ]
    .join(",")
}

pub fn write_series(path: &Path, records: &[DiagnosticsRecord]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{SERIES_HEADER}")?;
    for rec in records {
        writeln!(w, "{}", series_line(rec))?;
    }
    w.flush()?;
    Ok(())
}

fn parse_row(line: &str, n_cols: usize, lineno: usize) -> Result<Vec<f64>> {
    let cols: Vec<&str> = line.split(',').collect();
    if cols.len() != n_cols {
        return Err(LabError::Data(format!(
            "line {lineno}: expected {n_cols} columns, found {}",
            cols.len()
        )));
    }
    cols.iter()
        .map(|c| {
            c.trim()
                .parse::<f64>()
                .map_err(|_| LabError::Data(format!("line {lineno}: bad number `{c}`")))
        })
        .collect()
}

pub fn read_series(path: &Path) -> Result<Vec<DiagnosticsRecord>> {
    let reader = BufReader::new(File::open(path)?);
    let mut lines = reader.lines();
    let header = lines.next().transpose()?.unwrap_or_default();
    if header.trim() != SERIES_HEADER {
        return Err(LabError::Data("series file missing its header".into()));
    }
    let mut out = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row = parse_row(&line, 13, idx + 2)?;
        out.push(DiagnosticsRecord {
            t: row[0],
            energy: row[1],
            charge: row[2] as i64,
            cont: row[3],
            decay_v: row[4],
            decay_phi: row[5],
            decay_a: row[6],
            res_phi: row[7],
            res_phit: row[8],
            hs_phi: row[9],
            hsm1_phit: row[10],
            l2_phitt: row[11],
            l2_phittt: row[12],
            decay_warning: false,
        });
    }
    Ok(out)
}

pub fn write_snapshot(path: &Path, snap: &SnapshotData) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{SNAPSHOT_HEADER}")?;
    for j in 0..snap.r.len() {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            fmt(snap.r[j]),
            fmt(snap.u[j]),
            fmt(snap.ut[j]),
            fmt(snap.v[j]),
            fmt(snap.vt[j]),
            fmt(snap.phi[j]),
            fmt(snap.phit[j])
        )?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_snapshot(path: &Path) -> Result<SnapshotData> {
    let reader = BufReader::new(File::open(path)?);
    let mut lines = reader.lines();
    let header = lines.next().transpose()?.unwrap_or_default();
    if header.trim() != SNAPSHOT_HEADER {
        return Err(LabError::Data("snapshot file missing its header".into()));
    }
    let mut snap = SnapshotData {
        t: 0.0,
        r: Vec::new(),
        u: Vec::new(),
        ut: Vec::new(),
        v: Vec::new(),
        vt: Vec::new(),
        phi: Vec::new(),
        phit: Vec::new(),
    };
    for (idx, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row = parse_row(&line, 7, idx + 2)?;
        snap.r.push(row[0]);
        snap.u.push(row[1]);
        snap.ut.push(row[2]);
        snap.v.push(row[3]);
        snap.vt.push(row[4]);
        snap.phi.push(row[5]);
        snap.phit.push(row[6]);
    }
    if snap.r.is_empty() {
        return Err(LabError::Data("snapshot has no rows".into()));
    }
    Ok(snap)
}

/// Streaming sink: series rows flushed per record so an aborted run leaves
/// a readable prefix; snapshots written as `<prefix>_<label>.csv`.
pub struct CsvSink {
    series: BufWriter<File>,
    snapshot_prefix: PathBuf,
}

impl CsvSink {
    pub fn create(series_path: &Path, snapshot_prefix: &Path) -> Result<Self> {
        let mut series = BufWriter::new(File::create(series_path)?);
        writeln!(series, "{SERIES_HEADER}")?;
        series.flush()?;
        Ok(CsvSink {
            series,
            snapshot_prefix: snapshot_prefix.to_path_buf(),
        })
    }
}

impl RunSink for CsvSink {
    fn on_record(&mut self, rec: &DiagnosticsRecord) -> Result<()> {
        writeln!(self.series, "{}", series_line(rec))?;
        self.series.flush()?;
        Ok(())
    }
    fn on_snapshot(&mut self, label: &str, snap: &SnapshotData) -> Result<()> {
        let mut path = self.snapshot_prefix.clone();
        let name = match path.file_name() {
            Some(stem) => format!("{}_{label}.csv", stem.to_string_lossy()),
            None => format!("{label}.csv"),
        };
        path.set_file_name(name);
        write_snapshot(&path, snap)
    }
}

/// Run provenance, written once per run next to the series file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub config_hash: String,
    pub config: String,
    pub started: String,
    pub finished: String,
    pub exit_status: String,
}

pub fn config_hash(config: &SimConfig) -> String {
    let mut hasher = Sha256::new();
    hasher.update(config.canonical().as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

impl RunManifest {
    pub fn new(config: &SimConfig, started: String, finished: String, exit_status: String) -> Self {
        RunManifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config_hash: config_hash(config),
            config: config.canonical(),
            started,
            finished,
            exit_status,
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        serde_json::to_writer_pretty(&mut w, self)
            .map_err(|e| LabError::Data(format!("manifest serialization failed: {e}")))?;
        w.flush()?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<RunManifest> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| LabError::Data(format!("manifest parse failed: {e}")))
    }
}

/// Validator report as JSON lines: one object per entry.
pub fn write_validation_report(path: &Path, report: &ValidationReport) -> Result<()> {
    #[derive(Serialize)]
    struct Row<'a> {
        name: &'a str,
        coarse: f64,
        fine: f64,
        rel_change: f64,
        flagged: bool,
    }
    let mut w = BufWriter::new(File::create(path)?);
    for e in &report.entries {
        let row = Row {
            name: &e.name,
            coarse: e.coarse,
            fine: e.fine,
            rel_change: e.rel_change,
            flagged: e.flagged,
        };
        let line = serde_json::to_string(&row)
            .map_err(|e| LabError::Data(format!("report serialization failed: {e}")))?;
        writeln!(w, "{line}")?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    fn sample_record(t: f64) -> DiagnosticsRecord {
        DiagnosticsRecord {
            t,
            energy: 1.2345678901234567,
            charge: -1,
            cont: 0.5,
            decay_v: 0.25,
            decay_phi: 0.75,
            decay_a: 0.125,
            res_phi: 1e-9,
            res_phit: 2e-9,
            hs_phi: 3.5,
            hsm1_phit: 2.5,
            l2_phitt: 0.1,
            l2_phittt: 0.01,
            decay_warning: false,
        }
    }

    #[test]
    fn series_round_trip_is_exact() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("series.csv");
        let recs = vec![sample_record(0.0), sample_record(0.5)];
        write_series(&path, &recs).unwrap();
        let back = read_series(&path).unwrap();
        assert_eq!(back, recs);
        // byte-identical rewrite
        let bytes1 = std::fs::read(&path).unwrap();
        write_series(&path, &recs).unwrap();
        assert_eq!(bytes1, std::fs::read(&path).unwrap());
    }

    #[test]
    fn snapshot_round_trip_is_exact() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("snap.csv");
        let snap = SnapshotData {
            t: 0.0,
            r: vec![0.25, 0.75],
            u: vec![3.25, 2.5],
            ut: vec![0.0, -0.125],
            v: vec![1.0, 0.5],
            vt: vec![0.0, 0.0],
            phi: vec![1.25, 0.5],
            phit: vec![0.0, 0.1],
        };
        write_snapshot(&path, &snap).unwrap();
        let back = read_snapshot(&path).unwrap();
        assert_eq!(back.r, snap.r);
        assert_eq!(back.u, snap.u);
        assert_eq!(back.phi, snap.phi);
    }

    #[test]
    fn manifest_round_trips() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("m.json");
        let m = RunManifest::new(
            &SimConfig::default_skyrme(),
            "2026-01-01T00:00:00Z".into(),
            "2026-01-01T00:05:00Z".into(),
            "completed".into(),
        );
        m.write(&path).unwrap();
        assert_eq!(RunManifest::read(&path).unwrap(), m);
    }

    #[test]
    fn hash_is_deterministic_and_sensitive() {
        let a = SimConfig::default_skyrme();
        let mut b = SimConfig::default_skyrme();
        assert_eq!(config_hash(&a), config_hash(&b));
        b.t_end = 5.0;
        assert_ne!(config_hash(&a), config_hash(&b));
    }

    #[test]
    fn malformed_files_are_rejected() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "nonsense\n1,2\n").unwrap();
        assert!(read_series(&path).is_err());
        assert!(read_snapshot(&path).is_err());
    }
}
