//! Side-by-side equivalence runs: two configured experiments, one deviation
//! verdict. Drives the exact-recovery claims from the command line.

use crate::config::Config;
use crate::error::{Result, RunnerError};
use crate::experiment;
use momentum_lab::linalg;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompareMetric {
    XSequence,
    FGap,
}

#[derive(Clone, Debug)]
pub struct CompareReport {
    pub steps: usize,
    pub max_deviation: f64,
    pub worst_step: usize,
    pub tol: f64,
    pub passed: bool,
}

pub fn compare(
    cfg_a: &Config,
    cfg_b: &Config,
    metric: CompareMetric,
    tol: f64,
    stride: usize,
    seed: u64,
) -> Result<CompareReport> {
    let a = experiment::run(cfg_a, stride, seed)?;
    let b = experiment::run(cfg_b, stride, seed)?;
    if a.records.len() != b.records.len() {
        return Err(RunnerError::Usage(format!(
            "runs record different lengths ({} vs {}); align budgets and strides",
            a.records.len(),
            b.records.len()
        )));
    }
    let mut max_deviation: f64 = 0.0;
    let mut worst_step = 0;
    match metric {
        CompareMetric::XSequence => {
            for (idx, (xa, xb)) in a.iterates.iter().zip(&b.iterates).enumerate() {
                if xa.len() != xb.len() {
                    return Err(RunnerError::Usage(format!(
                        "iterate dimensions differ at record {idx} ({} vs {})",
                        xa.len(),
                        xb.len()
                    )));
                }
                let dev = linalg::max_rel_dev(xa, xb);
                if dev > max_deviation {
                    max_deviation = dev;
                    worst_step = a.records[idx].k;
                }
            }
        }
        CompareMetric::FGap => {
            for (idx, (ra, rb)) in a.records.iter().zip(&b.records).enumerate() {
                let dev = (ra.f_gap - rb.f_gap).abs()
                    / ra.f_gap.abs().max(rb.f_gap.abs()).max(1.0);
                if dev > max_deviation {
                    max_deviation = dev;
                    worst_step = a.records[idx].k;
                }
            }
        }
    }
    Ok(CompareReport {
        steps: a.records.len(),
        max_deviation,
        worst_step,
        tol,
        passed: max_deviation <= tol,
    })
}
