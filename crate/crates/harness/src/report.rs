use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};
use crate::sampling::Sampler;

/// Resample fraction above which a run is flagged.
pub const RESAMPLE_FLAG_RATE: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity_id: String,
    pub samples_run: usize,
    pub samples_resampled: usize,
    pub max_rel_error: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub wall_time_ms: f64,
    pub seed: u64,
}

impl IdentityReport {
    /// Resamples as a fraction of all drawn samples.
    pub fn resample_rate(&self) -> f64 {
        let drawn = self.samples_run + self.samples_resampled;
        if drawn == 0 {
            0.0
        } else {
            self.samples_resampled as f64 / drawn as f64
        }
    }

    pub fn flagged(&self) -> bool {
        self.resample_rate() > RESAMPLE_FLAG_RATE
    }
}

fn resamplable(e: &HarnessError) -> bool {
    matches!(
        e,
        HarnessError::Core(
            bethe_core::Error::SingularArgument { .. } | bethe_core::Error::QuadratureFailure(_)
        )
    )
}

/// Runs `check` until `samples` evaluations succeed. Each call draws what it
/// needs from `sampler` and returns its error measure; samples that hit a
/// singularity guard or a quadrature failure are redrawn and counted.
pub fn run_check(
    identity_id: &str,
    sampler: &mut Sampler,
    samples: usize,
    tolerance: f64,
    mut check: impl FnMut(&mut Sampler) -> Result<f64>,
) -> Result<IdentityReport> {
    let start = Instant::now();
    let resample_cap = 10 * samples + 100;
    let (mut run, mut resampled) = (0usize, 0usize);
    let mut max_err = 0f64;
    while run < samples {
        match check(sampler) {
            Ok(err) => {
                run += 1;
                // NaN or infinity must never read as a pass.
                let err = if err.is_finite() { err } else { f64::MAX };
                max_err = max_err.max(err);
            }
            Err(e) if resamplable(&e) => {
                resampled += 1;
                if resampled > resample_cap {
                    return Err(HarnessError::TooManyResamples {
                        wanted: samples,
                        resampled,
                    });
                }
            }
            Err(e) => return Err(e),
        }
    }
    Ok(IdentityReport {
        identity_id: identity_id.to_string(),
        samples_run: run,
        samples_resampled: resampled,
        max_rel_error: max_err,
        tolerance,
        pass: max_err <= tolerance,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        seed: sampler.config().seed,
    })
}

pub fn format_table(reports: &[IdentityReport]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<18} {:>7} {:>9} {:>12} {:>10} {:>10}  status",
        "identity", "samples", "resampled", "max_rel_err", "tolerance", "time_ms"
    );
    for r in reports {
        let mut status = if r.pass { "PASS" } else { "FAIL" }.to_string();
        if r.flagged() {
            status.push_str(" (flagged: resample rate above 5%)");
        }
        let _ = writeln!(
            out,
            "{:<18} {:>7} {:>9} {:>12.3e} {:>10.1e} {:>10.1}  {}",
            r.identity_id,
            r.samples_run,
            r.samples_resampled,
            r.max_rel_error,
            r.tolerance,
            r.wall_time_ms,
            status
        );
    }
    out
}

pub fn write_json(path: &Path, reports: &[IdentityReport]) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(reports)?)?;
    Ok(())
}

pub fn read_json(path: &Path) -> Result<Vec<IdentityReport>> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}
