//! Seeded generation of generic real configurations.

use bethe_core::kernels::Permutation;
use bethe_core::C64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{HarnessError, Result};

/// Rejection attempts per drawn value before giving up.
pub const MAX_REJECTIONS: usize = 1000;

/// Twist parameter used for each sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KappaSpec {
    Fixed(C64),
    /// A fresh κ per sample, real and imaginary parts uniform in `[-2, 2]`.
    Sweep,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleConfig {
    pub m: usize,
    pub c_range: (f64, f64),
    pub rapidity_range: (f64, f64),
    /// Minimum pairwise gap in units of `|c|`.
    pub min_gap: f64,
    pub seed: u64,
    pub kappa: KappaSpec,
}

impl Default for SampleConfig {
    fn default() -> Self {
        Self {
            m: 2,
            c_range: (0.5, 2.0),
            rapidity_range: (-2.0, 2.0),
            min_gap: 0.05,
            seed: 42,
            kappa: KappaSpec::Sweep,
        }
    }
}

impl SampleConfig {
    pub fn with_m(&self, m: usize) -> Self {
        Self { m, ..self.clone() }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |r: (f64, f64)| r.0.is_finite() && r.1.is_finite() && r.0 <= r.1;
        if !finite(self.c_range) || !finite(self.rapidity_range) {
            return Err(HarnessError::InvalidConfig(
                "ranges must be finite with lower <= upper".into(),
            ));
        }
        if self.c_range.0 <= 0.0 {
            return Err(HarnessError::InvalidConfig(
                "coupling range must be positive".into(),
            ));
        }
        if !(self.min_gap > 0.0 && self.min_gap.is_finite()) {
            return Err(HarnessError::InvalidConfig(
                "min_gap must be positive".into(),
            ));
        }
        if let KappaSpec::Fixed(k) = self.kappa {
            if !k.re.is_finite() || !k.im.is_finite() {
                return Err(HarnessError::InvalidConfig("kappa must be finite".into()));
            }
        }
        Ok(())
    }
}

/// One MEPNO configuration: `u`, `v` real rapidities, coupling and twist.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub c: f64,
    pub kappa: C64,
}

impl Sample {
    pub fn u_complex(&self) -> Vec<C64> {
        self.u.iter().map(|&x| C64::new(x, 0.0)).collect()
    }

    pub fn v_complex(&self) -> Vec<C64> {
        self.v.iter().map(|&x| C64::new(x, 0.0)).collect()
    }
}

/// Deterministic stream of samples for one [`SampleConfig`].
#[derive(Debug, Clone)]
pub struct Sampler {
    cfg: SampleConfig,
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(cfg: SampleConfig) -> Result<Self> {
        cfg.validate()?;
        let rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        Ok(Self { cfg, rng })
    }

    pub fn config(&self) -> &SampleConfig {
        &self.cfg
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        if lo == hi {
            lo
        } else {
            self.rng.random_range(lo..hi)
        }
    }

    pub fn coupling(&mut self) -> f64 {
        let (lo, hi) = self.cfg.c_range;
        self.uniform(lo, hi)
    }

    pub fn kappa(&mut self) -> C64 {
        match self.cfg.kappa {
            KappaSpec::Fixed(k) => k,
            KappaSpec::Sweep => C64::new(self.uniform(-2.0, 2.0), self.uniform(-2.0, 2.0)),
        }
    }

    /// `count` values from the rapidity range with every pairwise gap at
    /// least `min_gap·|c|`, drawn one at a time.
    pub fn gapped_reals(&mut self, count: usize, c: f64) -> Result<Vec<f64>> {
        let (lo, hi) = self.cfg.rapidity_range;
        let gap = self.cfg.min_gap * c.abs();
        let mut out: Vec<f64> = Vec::with_capacity(count);
        for _ in 0..count {
            let mut attempts = 0;
            loop {
                if attempts == MAX_REJECTIONS {
                    return Err(HarnessError::SamplingExhausted { attempts });
                }
                attempts += 1;
                let x = self.uniform(lo, hi);
                if out.iter().all(|&y| (x - y).abs() >= gap) {
                    out.push(x);
                    break;
                }
            }
        }
        Ok(out)
    }

    /// A fresh `(ū, v̄, c, κ)` with `#ū = #v̄ = M`; the gap constraint holds
    /// within and across the two sets.
    pub fn next_sample(&mut self) -> Result<Sample> {
        let c = self.coupling();
        let mut all = self.gapped_reals(2 * self.cfg.m, c)?;
        let v = all.split_off(self.cfg.m);
        let kappa = self.kappa();
        Ok(Sample {
            u: all,
            v,
            c,
            kappa,
        })
    }

    /// A uniformly random permutation of `n` elements.
    pub fn permutation(&mut self, n: usize) -> Permutation {
        let mut images: Vec<usize> = (0..n).collect();
        images.shuffle(&mut self.rng);
        Permutation::new(images).expect("shuffled identity is a permutation")
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }
}

/// First sample of the stream defined by `cfg`.
pub fn sample_configuration(cfg: &SampleConfig) -> Result<Sample> {
    Sampler::new(cfg.clone())?.next_sample()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let cfg = SampleConfig::default().with_m(3);
        let mut a = Sampler::new(cfg.clone()).unwrap();
        let mut b = Sampler::new(cfg).unwrap();
        for _ in 0..20 {
            assert_eq!(a.next_sample().unwrap(), b.next_sample().unwrap());
        }
    }

    #[test]
    fn all_fifteen_gaps_respected() {
        let cfg = SampleConfig::default().with_m(3);
        let mut s = Sampler::new(cfg).unwrap();
        for _ in 0..200 {
            let x = s.next_sample().unwrap();
            let all: Vec<f64> = x.u.iter().chain(&x.v).copied().collect();
            let mut pairs = 0;
            for i in 0..all.len() {
                for j in i + 1..all.len() {
                    assert!((all[i] - all[j]).abs() >= 0.05 * x.c);
                    pairs += 1;
                }
            }
            assert_eq!(pairs, 15);
            assert!((0.5..2.0).contains(&x.c));
        }
    }

    #[test]
    fn degenerate_range_exhausts() {
        let cfg = SampleConfig {
            rapidity_range: (0.7, 0.7),
            ..SampleConfig::default()
        };
        assert!(matches!(
            sample_configuration(&cfg),
            Err(HarnessError::SamplingExhausted { .. })
        ));
    }

    #[test]
    fn invalid_configs_rejected() {
        let bad_gap = SampleConfig {
            min_gap: 0.0,
            ..SampleConfig::default()
        };
        assert!(Sampler::new(bad_gap).is_err());
        let bad_range = SampleConfig {
            rapidity_range: (1.0, -1.0),
            ..SampleConfig::default()
        };
        assert!(Sampler::new(bad_range).is_err());
    }

    #[test]
    fn fixed_kappa_is_echoed() {
        let k = C64::new(0.25, -1.0);
        let cfg = SampleConfig {
            kappa: KappaSpec::Fixed(k),
            ..SampleConfig::default()
        };
        assert_eq!(sample_configuration(&cfg).unwrap().kappa, k);
    }
}
