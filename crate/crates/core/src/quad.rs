//! Adaptive Gauss-Kronrod quadrature for complex-valued integrands and
//! rational extrapolation to zero.

use alloc::collections::BinaryHeap;
use core::cmp::Ordering;

use crate::{Error, Result, C64};

// 21-point Kronrod abscissae; odd indices are the 10-point Gauss nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_2,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_73,
    0.054_755_896_574_352,
    0.075_039_674_810_919_95,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_85,
    0.134_709_217_311_473_33,
    0.142_775_938_577_060_08,
    0.147_739_104_901_338_5,
    0.149_445_554_002_916_9,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_35,
    0.295_524_224_714_752_87,
];

/// One 21-point Kronrod panel on `[a, b]`: `(estimate, |Kronrod - Gauss|)`.
pub fn gauss_kronrod_21(f: &mut impl FnMut(f64) -> C64, a: f64, b: f64) -> (C64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = C64::new(0.0, 0.0);
    for (k, &x) in XGK[..10].iter().enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += pair * WGK[k];
        if k % 2 == 1 {
            gauss += pair * WG[k / 2];
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).norm())
}

/// Stopping rule for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Upper bound on the number of panels kept at once.
    pub max_panels: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 0.0,
            max_panels: 100_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: C64,
    pub error: f64,
    pub panels: usize,
}

struct Panel {
    a: f64,
    b: f64,
    value: C64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive integration of `f` over `[a, b]`.
///
/// The interval is first cut into `initial_panels` equal pieces, which
/// matters for oscillatory integrands; then the panel with the largest error
/// estimate is bisected until `error <= max(abs_tol, rel_tol·|value|)`.
pub fn integrate(
    mut f: impl FnMut(f64) -> C64,
    a: f64,
    b: f64,
    initial_panels: usize,
    cfg: QuadConfig,
) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::QuadratureFailure(
            "integration bounds must be finite",
        ));
    }
    let pieces = initial_panels.max(1);
    if pieces > cfg.max_panels {
        return Err(Error::QuadratureFailure(
            "initial subdivision exceeds the panel budget",
        ));
    }
    let width = (b - a) / pieces as f64;
    let mut heap = BinaryHeap::with_capacity(pieces * 2);
    let mut total = C64::new(0.0, 0.0);
    let mut error = 0.0;
    for k in 0..pieces {
        let lo = a + width * k as f64;
        let hi = if k + 1 == pieces { b } else { lo + width };
        let (value, err) = gauss_kronrod_21(&mut f, lo, hi);
        total += value;
        error += err;
        heap.push(Panel {
            a: lo,
            b: hi,
            value,
            error: err,
        });
    }
    loop {
        if !total.re.is_finite() || !total.im.is_finite() {
            return Err(Error::QuadratureFailure("non-finite integrand"));
        }
        if error <= cfg.abs_tol.max(cfg.rel_tol * total.norm()) {
            return Ok(QuadResult {
                value: total,
                error,
                panels: heap.len(),
            });
        }
        if heap.len() >= cfg.max_panels {
            return Err(Error::QuadratureFailure("panel budget exhausted"));
        }
        let worst = heap.pop().expect("at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(Error::QuadratureFailure(
                "panel width reached machine resolution",
            ));
        }
        let (lv, le) = gauss_kronrod_21(&mut f, worst.a, mid);
        let (rv, re) = gauss_kronrod_21(&mut f, mid, worst.b);
        total += lv + rv - worst.value;
        error += le + re - worst.error;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: lv,
            error: le,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: rv,
            error: re,
        });
        // Refresh the running error sum occasionally to stop drift from the
        // incremental updates.
        if heap.len() % 512 == 0 {
            error = heap.iter().map(|p| p.error).sum();
        }
    }
}

/// Extrapolates the samples `(xs[k], ys[k])` to `x = 0` with a diagonal
/// rational (Bulirsch-Stoer) interpolant. Returns the estimate and the size
/// of the last correction.
pub fn rational_extrapolate_to_zero(xs: &[f64], ys: &[C64]) -> Result<(C64, f64)> {
    let n = xs.len();
    if n == 0 || ys.len() != n {
        return Err(Error::LengthMismatch {
            left: n,
            right: ys.len(),
        });
    }
    const TINY: f64 = 1e-300;
    let mut ns = 0usize;
    let mut closest = xs[0].abs();
    for (i, &x) in xs.iter().enumerate() {
        if x == 0.0 {
            return Ok((ys[i], 0.0));
        }
        if x.abs() < closest {
            closest = x.abs();
            ns = i;
        }
    }
    let mut c: alloc::vec::Vec<C64> = ys.to_vec();
    let mut d: alloc::vec::Vec<C64> = ys.iter().map(|&y| y + TINY).collect();
    let mut y = ys[ns];
    let mut ns = ns as isize - 1;
    let mut dy = C64::new(0.0, 0.0);
    for m in 1..n {
        for i in 0..n - m {
            let w = c[i + 1] - d[i];
            let h = xs[i + m];
            let t = d[i] * xs[i] / h;
            let mut dd = t - c[i + 1];
            if dd.norm() == 0.0 {
                return Err(Error::QuadratureFailure(
                    "rational extrapolation hit a pole",
                ));
            }
            dd = w / dd;
            d[i] = c[i + 1] * dd;
            c[i] = t * dd;
        }
        dy = if 2 * (ns + 1) < (n - m) as isize {
            c[(ns + 1) as usize]
        } else {
            let v = d[ns as usize];
            ns -= 1;
            v
        };
        y += dy;
    }
    Ok((y, dy.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_panel_is_exact_for_polynomials() {
        let (v, e) = gauss_kronrod_21(&mut |x| C64::new(x.powi(5), 3.0 * x * x), -1.0, 2.0);
        assert!((v - C64::new((64.0 - 1.0) / 6.0, 9.0)).norm() < 1e-13);
        assert!(e < 1e-12);
    }

    #[test]
    fn adaptive_damped_oscillation_matches_closed_form() {
        // ∫_0^L e^{-(η + iω) y} dy = (1 - e^{-(η+iω)L}) / (η + iω)
        let (eta, omega, len) = (0.05, 3.7, 400.0);
        let s = C64::new(eta, omega);
        let exact = (1.0 - (-s * len).exp()) / s;
        let r = integrate(|y| (-s * y).exp(), 0.0, len, 200, QuadConfig::default()).unwrap();
        assert!((r.value - exact).norm() <= 1e-10 * exact.norm());
    }

    #[test]
    fn adaptive_handles_endpoint_peak() {
        let r = integrate(
            |x| C64::new(1.0 / (1e-3 + x), 0.0),
            0.0,
            1.0,
            1,
            QuadConfig::default(),
        )
        .unwrap();
        let exact = (1.001f64 / 1e-3).ln();
        assert!((r.value.re - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn panel_budget_is_enforced() {
        let cfg = QuadConfig {
            rel_tol: 1e-14,
            abs_tol: 0.0,
            max_panels: 4,
        };
        let r = integrate(|x| C64::new((50.0 * x).sin(), 0.0), 0.0, 100.0, 1, cfg);
        assert!(matches!(r, Err(Error::QuadratureFailure(_))));
    }

    #[test]
    fn rational_extrapolation_recovers_rational_limit() {
        // κ/(η - iw) + 1/(η + iw) is rational in η with limit (1 - κ)/(iw).
        let (w, kappa) = (0.8, C64::new(0.3, -1.1));
        let g = |eta: f64| kappa / C64::new(eta, -w) + 1.0 / C64::new(eta, w);
        let xs = [0.4, 0.2, 0.1, 0.05];
        let ys: alloc::vec::Vec<C64> = xs.iter().map(|&x| g(x)).collect();
        let (y, _) = rational_extrapolate_to_zero(&xs, &ys).unwrap();
        let exact = (1.0 - kappa) / C64::new(0.0, w);
        assert!((y - exact).norm() < 1e-12 * exact.norm());
    }

    #[test]
    fn rational_extrapolation_input_checks() {
        assert!(rational_extrapolate_to_zero(&[], &[]).is_err());
        let one = C64::new(1.0, 0.0);
        assert_eq!(
            rational_extrapolate_to_zero(&[0.0, 1.0], &[one, one])
                .unwrap()
                .0,
            one
        );
    }
}
