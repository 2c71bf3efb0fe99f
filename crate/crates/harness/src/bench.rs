//! Wall-time comparison of the MEPNO routes.

use std::fmt::Write as _;
use std::io;
use std::time::{Duration, Instant};

use bethe_core::detlib::{TwistParameter, MAX_DET_SIZE};
use bethe_core::kernels::Coupling;
use bethe_core::oracles::{mepno, MAX_ROUTE_A_SIZE, MAX_ROUTE_B_SIZE};
use bethe_core::{rel_diff, Route, C64};
use serde::Serialize;

use crate::error::{HarnessError, Result};
use crate::sampling::{SampleConfig, Sampler};

/// Routes that take part in benchmarks with their particle-number caps.
pub const BENCH_ROUTES: [(Route, usize); 4] = [
    (Route::A, MAX_ROUTE_A_SIZE),
    (Route::B, MAX_ROUTE_B_SIZE),
    (Route::C, MAX_ROUTE_B_SIZE),
    (Route::D, MAX_DET_SIZE),
];

// Fast evaluations are repeated until at least this much time has passed so
// that the per-call figure is not dominated by timer resolution.
const MIN_TIMED_SPAN: Duration = Duration::from_millis(2);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub route: String,
    pub m: usize,
    pub samples: usize,
    pub mean_ms: f64,
    pub median_ms: f64,
    /// Largest relative deviation from route D over the timed samples.
    pub max_rel_dev_vs_d: f64,
}

fn time_call(mut call: impl FnMut() -> bethe_core::Result<C64>) -> bethe_core::Result<(C64, f64)> {
    let start = Instant::now();
    let value = call()?;
    let mut reps = 1u32;
    while start.elapsed() < MIN_TIMED_SPAN {
        std::hint::black_box(call()?);
        reps += 1;
    }
    Ok((value, start.elapsed().as_secs_f64() * 1e3 / reps as f64))
}

fn median(xs: &mut [f64]) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

/// Times every eligible route for each `M` in `m_min..=m_max` on
/// `samples_per_m` fresh samples per `M`.
pub fn bench_routes(
    m_min: usize,
    m_max: usize,
    samples_per_m: usize,
    cfg: &SampleConfig,
) -> Result<Vec<BenchRow>> {
    if m_min == 0 || m_min > m_max || samples_per_m == 0 {
        return Err(HarnessError::InvalidConfig(
            "need 1 <= m-min <= m-max and at least one sample".into(),
        ));
    }
    if m_max > MAX_DET_SIZE {
        return Err(bethe_core::Error::SizeLimit {
            what: "benchmark particle number",
            size: m_max,
            limit: MAX_DET_SIZE,
        }
        .into());
    }
    let mut rows = Vec::new();
    for m in m_min..=m_max {
        let routes: Vec<Route> = BENCH_ROUTES
            .iter()
            .filter(|(_, cap)| m <= *cap)
            .map(|(r, _)| *r)
            .collect();
        let mut times = vec![Vec::with_capacity(samples_per_m); routes.len()];
        let mut devs = vec![0f64; routes.len()];
        let mut sampler = Sampler::new(cfg.with_m(m))?;
        let mut resampled = 0;
        while times[0].len() < samples_per_m {
            let s = sampler.next_sample()?;
            let (u, v) = (s.u_complex(), s.v_complex());
            let c = Coupling::new(s.c)?;
            let k = TwistParameter::new(s.kappa)?;
            let timed: bethe_core::Result<Vec<(C64, f64)>> = routes
                .iter()
                .map(|&r| time_call(|| mepno(r, &u, &v, c, k).map(|x| x.value)))
                .collect();
            let timed = match timed {
                Ok(t) => t,
                Err(bethe_core::Error::SingularArgument { .. }) => {
                    resampled += 1;
                    if resampled > 10 * samples_per_m + 100 {
                        return Err(HarnessError::TooManyResamples {
                            wanted: samples_per_m,
                            resampled,
                        });
                    }
                    continue;
                }
                Err(e) => return Err(e.into()),
            };
            let reference = timed.last().expect("route D always runs").0;
            for (i, (value, ms)) in timed.into_iter().enumerate() {
                times[i].push(ms);
                devs[i] = devs[i].max(rel_diff(value, reference));
            }
        }
        for (i, route) in routes.iter().enumerate() {
            let mean = times[i].iter().sum::<f64>() / times[i].len() as f64;
            rows.push(BenchRow {
                route: route.as_str().to_string(),
                m,
                samples: times[i].len(),
                mean_ms: mean,
                median_ms: median(&mut times[i]),
                max_rel_dev_vs_d: devs[i],
            });
        }
    }
    Ok(rows)
}

pub fn format_bench_table(rows: &[BenchRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<6} {:>3} {:>7} {:>14} {:>14} {:>14}",
        "route", "M", "samples", "mean_ms", "median_ms", "max_dev_vs_D"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:<6} {:>3} {:>7} {:>14.6} {:>14.6} {:>14.3e}",
            r.route, r.m, r.samples, r.mean_ms, r.median_ms, r.max_rel_dev_vs_d
        );
    }
    out
}

pub fn write_bench_csv(out: impl io::Write, rows: &[BenchRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
