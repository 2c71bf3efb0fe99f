//! Sampling, identity verification, benchmarks and text formats for
//! `bethe-core`. The `bethe` binary is a thin CLI over this crate.

pub mod bench;
pub mod error;
pub mod registry;
pub mod report;
pub mod sampling;
pub mod text;

pub use bench::{bench_routes, BenchRow};
pub use error::{HarnessError, Result};
pub use registry::{run_identity, Identity};
pub use report::{run_check, IdentityReport};
pub use sampling::{sample_configuration, KappaSpec, Sample, SampleConfig, Sampler};
