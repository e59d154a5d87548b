//! CSV and JSON artifacts of a run.
//!
//! Floats in CSV files are written as `{:.16e}`, i.e. with 17 significant
//! digits, so repeated runs of the same scenario give identical bytes.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use liftoff_core::{DiagnosticSeries, Trajectory};

pub const FRAMES_FILE: &str = "frames.csv";
pub const DIAGNOSTICS_FILE: &str = "diagnostics.csv";
pub const REPORT_FILE: &str = "report.json";

#[derive(Debug, thiserror::Error)]
#[error("cannot write {path}: {source}")]
pub struct OutputError {
    pub path: PathBuf,
    #[source]
    pub source: io::Error,
}

fn create(path: &Path) -> Result<BufWriter<File>, OutputError> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|source| OutputError {
            path: parent.to_path_buf(),
            source,
        })?;
    }
    File::create(path).map(BufWriter::new).map_err(|source| OutputError {
        path: path.to_path_buf(),
        source,
    })
}

fn finish(path: &Path, result: io::Result<()>) -> Result<(), OutputError> {
    result.map_err(|source| OutputError {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_frames(path: &Path, traj: &Trajectory) -> Result<(), OutputError> {
    let mut out = create(path)?;
    let result = (|| {
        writeln!(out, "t,r,u")?;
        let grid = *traj.grid();
        for (t, frame) in traj.iter() {
            for (i, u) in frame.values().iter().enumerate() {
                writeln!(out, "{t:.16e},{:.16e},{u:.16e}", grid.radius(i))?;
            }
        }
        out.flush()
    })();
    finish(path, result)
}

pub fn write_diagnostics(path: &Path, series: &DiagnosticSeries) -> Result<(), OutputError> {
    let mut out = create(path)?;
    let result = (|| {
        writeln!(out, "t,I_R,sup_u,center_u,mass")?;
        for k in 0..series.len() {
            writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                series.times[k], series.weighted_mass[k], series.sup[k], series.center[k], series.mass[k]
            )?;
        }
        out.flush()
    })();
    finish(path, result)
}

pub fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), OutputError> {
    let mut out = create(path)?;
    let result = (|| {
        serde_json::to_writer_pretty(&mut out, value).map_err(io::Error::from)?;
        writeln!(out)?;
        out.flush()
    })();
    finish(path, result)
}

pub fn write_text(path: &Path, text: &str) -> Result<(), OutputError> {
    let mut out = create(path)?;
    let result = out.write_all(text.as_bytes()).and_then(|_| out.flush());
    finish(path, result)
}

/// JSON number, or a string for non-finite values.
pub fn num(x: f64) -> serde_json::Value {
    if x.is_finite() {
        serde_json::Value::from(x)
    } else if x.is_nan() {
        serde_json::Value::from("nan")
    } else if x > 0.0 {
        serde_json::Value::from("+inf")
    } else {
        serde_json::Value::from("-inf")
    }
}
