//! Per-step telemetry records and their CSV serialization.
//!
//! Fixed schema `k,t,f_gap,grad_norm_sq,lyap,dist_x,dist_v` with a leading
//! `# seed=<n>` comment; floats are printed with 17 significant digits so a
//! reader recovers the exact doubles. Output files are written to a
//! temporary sibling and renamed into place.

use crate::error::{Result, RunnerError};
use momentum_lab::Error as LabError;
use std::io::Write;
use std::path::Path;

#[derive(Clone, Debug)]
pub struct TrajectoryRecord {
    pub k: usize,
    pub t: f64,
    pub f_gap: f64,
    pub grad_norm_sq: f64,
    pub lyap: Option<f64>,
    pub dist_x: f64,
    pub dist_v: f64,
}

impl TrajectoryRecord {
    /// Schema invariants: everything finite, f_gap not meaningfully negative.
    pub fn validate(&self, f_star: f64) -> Result<()> {
        let finite = self.t.is_finite()
            && self.f_gap.is_finite()
            && self.grad_norm_sq.is_finite()
            && self.dist_x.is_finite()
            && self.dist_v.is_finite()
            && self.lyap.is_none_or(f64::is_finite);
        if !finite {
            return Err(RunnerError::Lab(LabError::NumericalFailure {
                iteration: self.k,
                message: "non-finite telemetry record".into(),
            }));
        }
        if self.f_gap < -1e-12 * f_star.abs().max(1.0) {
            return Err(RunnerError::Lab(LabError::NumericalFailure {
                iteration: self.k,
                message: format!("negative f-gap {} beyond rounding", self.f_gap),
            }));
        }
        Ok(())
    }
}

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn csv_header() -> &'static str {
    "k,t,f_gap,grad_norm_sq,lyap,dist_x,dist_v"
}

pub fn to_csv(records: &[TrajectoryRecord], seed: u64) -> String {
    let mut out = String::with_capacity(records.len() * 96 + 64);
    out.push_str(&format!("# seed={seed}\n"));
    out.push_str(csv_header());
    out.push('\n');
    for r in records {
        let lyap = r.lyap.map(fmt).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.k,
            fmt(r.t),
            fmt(r.f_gap),
            fmt(r.grad_norm_sq),
            lyap,
            fmt(r.dist_x),
            fmt(r.dist_v),
        ));
    }
    out
}

/// Atomic write: temp file in the destination directory, then rename.
pub fn write_csv(path: &Path, records: &[TrajectoryRecord], seed: u64) -> Result<()> {
    let tmp = path.with_extension("csv.tmp");
    {
        let mut file = std::fs::File::create(&tmp)?;
        file.write_all(to_csv(records, seed).as_bytes())?;
        file.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}
