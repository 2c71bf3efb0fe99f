use std::fs::File;
use std::path::PathBuf;
use std::process::ExitCode;

use bethe_core::detlib::{ik_det, TwistParameter};
use bethe_core::kernels::{Coupling, PositionSet, RapiditySet};
use bethe_core::oracles::mepno;
use bethe_core::wavefunction::{psi_symmetric, BetheState};
use bethe_core::Route;
use bethe_harness::bench::{format_bench_table, write_bench_csv};
use bethe_harness::registry::{self, Identity};
use bethe_harness::report::{format_table, write_json};
use bethe_harness::text::{format_complex, parse_complex, parse_complex_list};
use bethe_harness::{bench_routes, HarnessError, KappaSpec, Result, SampleConfig};
use clap::{Parser, Subcommand, ValueEnum};

/// Closed-form Bethe-ansatz objects and their numerical cross-checks.
#[derive(Parser, Debug)]
#[command(name = "bethe", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check registered identities on random samples.
    Verify {
        /// Identity id, or `all`.
        #[arg(long)]
        identity: String,
        /// Particle number.
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Relative tolerance; each identity has its own default.
        #[arg(long)]
        tol: Option<f64>,
        /// Fix the coupling instead of sampling it.
        #[arg(long)]
        c: Option<f64>,
        /// Fix the twist as `re,im` instead of sampling it.
        #[arg(long, allow_hyphen_values = true)]
        kappa: Option<String>,
        /// Write the reports as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Evaluate one object and print it as `re,im`.
    Compute {
        #[arg(long, value_enum)]
        what: What,
        /// Rapidities, `;`-separated, each `re,im` or `re`.
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        /// Second rapidity set (positions for `psi`).
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long)]
        c: f64,
        #[arg(long, allow_hyphen_values = true)]
        kappa: Option<String>,
        #[arg(long, default_value = "D")]
        route: String,
    },
    /// Time the MEPNO routes.
    Bench {
        #[arg(long)]
        m_min: usize,
        #[arg(long)]
        m_max: usize,
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum What {
    Psi,
    Ik,
    Mepno,
}

fn verify(
    identity: &str,
    cfg: SampleConfig,
    samples: usize,
    tol: Option<f64>,
    json: Option<PathBuf>,
) -> Result<bool> {
    let selected: Vec<Identity> = if identity == "all" {
        Identity::ALL
            .into_iter()
            .filter(|i| i.supports(cfg.m))
            .collect()
    } else {
        vec![identity.parse()?]
    };
    if identity == "all" {
        for i in Identity::ALL.iter().filter(|i| !i.supports(cfg.m)) {
            eprintln!("skipping {i}: not defined at M = {}", cfg.m);
        }
    }
    let mut reports = Vec::with_capacity(selected.len());
    for id in selected {
        let report = registry::run(id, &cfg, samples, tol.unwrap_or(id.default_tolerance()))?;
        if report.flagged() {
            eprintln!(
                "warning: {} resampled {} of {} draws",
                report.identity_id,
                report.samples_resampled,
                report.samples_run + report.samples_resampled
            );
        }
        reports.push(report);
    }
    print!("{}", format_table(&reports));
    if let Some(path) = json {
        write_json(&path, &reports)?;
    }
    Ok(reports.iter().all(|r| r.pass))
}

fn compute(what: What, u: &str, v: &str, c: f64, kappa: Option<&str>, route: &str) -> Result<()> {
    let c = Coupling::new(c)?;
    let u = parse_complex_list(u)?;
    let v = parse_complex_list(v)?;
    let value = match what {
        What::Psi => {
            if v.iter().any(|z| z.im != 0.0) {
                return Err(HarnessError::InvalidConfig("positions must be real".into()));
            }
            let x = PositionSet::new(v.iter().map(|z| z.re).collect())?;
            psi_symmetric(&x, &BetheState::new(RapiditySet::new(u)?, c))?
        }
        What::Ik => ik_det(&u, &v, c)?,
        What::Mepno => {
            let kappa =
                kappa.ok_or_else(|| HarnessError::InvalidConfig("mepno needs --kappa".into()))?;
            let route: Route = route.parse()?;
            let u = RapiditySet::new(u)?;
            let v = RapiditySet::new(v)?;
            mepno(
                route,
                &u,
                &v,
                c,
                TwistParameter::new(parse_complex(kappa)?)?,
            )?
            .value
        }
    };
    println!("{}", format_complex(value));
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Verify {
            identity,
            m,
            samples,
            seed,
            tol,
            c,
            kappa,
            json,
        } => {
            let mut cfg = SampleConfig {
                m,
                seed,
                ..SampleConfig::default()
            };
            if let Some(c) = c {
                cfg.c_range = (c, c);
            }
            if let Some(k) = kappa {
                cfg.kappa = KappaSpec::Fixed(parse_complex(&k)?);
            }
            verify(&identity, cfg, samples, tol, json)
        }
        Command::Compute {
            what,
            u,
            v,
            c,
            kappa,
            route,
        } => compute(what, &u, &v, c, kappa.as_deref(), &route).map(|()| true),
        Command::Bench {
            m_min,
            m_max,
            samples,
            seed,
            csv,
        } => {
            let cfg = SampleConfig {
                seed,
                ..SampleConfig::default()
            };
            let rows = bench_routes(m_min, m_max, samples, &cfg)?;
            print!("{}", format_bench_table(&rows));
            if let Some(path) = csv {
                write_bench_csv(File::create(path)?, &rows)?;
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
