//! Damped position-space evaluation of the MEPNO over the eigen-domains of
//! the particle number operator.
//!
//! On the domain `(ℝ₋)ⁿ × (ℝ₊)^{M−n}` the shifted decomposition gives
//!
//! `S = c^M Σₙ κⁿ Σ_{P,Q} conj(F(P̄ū)) F(Q̄v̄) ∫ e^{−i(x̄, [P̄ū − Q̄v̄}ⁿ)} dx̄`.
//!
//! The oscillatory integrals are regularised with `e^{−η Σ|xᵢ|}`, computed by
//! adaptive quadrature for a schedule of `η` values and extrapolated to
//! `η = 0`. Each term is a product of one-dimensional damped exponentials,
//! so the `M`-dimensional integral is assembled from one-dimensional
//! quadratures (Fubini) instead of a tensor grid.

use alloc::vec::Vec;
use num_traits::Float;

use super::{check_mepno_pair, permuted_amplitudes, PARTIAL_SUM_GUARD};
use crate::detlib::TwistParameter;
use crate::kernels::{check_denominator, guard_scale, shifted_set, Coupling, ShiftSide};
use crate::mepno::{MepnoValue, Route};
use crate::quad::{integrate, rational_extrapolate_to_zero, QuadConfig};
use crate::xprec;
use crate::{Error, Result, C64};

pub const MAX_INTEGRAL_SIZE: usize = 2;

/// Damping values in units of the smallest oscillation frequency.
pub const DEFAULT_DAMPING_SCHEDULE: [f64; 5] = [0.5, 0.25, 0.125, 0.0625, 0.03125];

// Integrals are truncated where the damping has decayed to e^{-TRUNCATION}.
const TRUNCATION: f64 = 32.0;
// Quadrature error target relative to the L1 norm 1/η of the integrand; the
// integral itself may be much smaller than that after cancellation.
const QUAD_TOL: f64 = 1e-12;
const MAX_PANELS: usize = 2_000_000;

struct Term {
    amplitude: C64,
    /// Signed frequency per coordinate after folding `xᵢ = −yᵢ` on the
    /// negative half-lines; the factor is `e^{−(η + iΩᵢ) yᵢ}` with `yᵢ ≥ 0`.
    omega: Vec<f64>,
}

fn lowered_amplitudes(u: &[C64], c: Coupling) -> Result<Vec<(Vec<C64>, C64)>> {
    Ok(permuted_amplitudes(&xprec::lift_all(u), c)?
        .into_iter()
        .map(|(pu, amp)| {
            (
                pu.into_iter().map(xprec::lower).collect(),
                xprec::lower(amp),
            )
        })
        .collect())
}

fn domain_terms(u: &[C64], v: &[C64], c: Coupling, kappa: C64) -> Result<Vec<Term>> {
    let m = u.len();
    let scale = guard_scale(c, [u, v]);
    let pu = lowered_amplitudes(u, c)?;
    let pv = lowered_amplitudes(v, c)?;
    let cm = Float::powi(c.value(), m as i32);
    let mut terms = Vec::new();
    let mut kn = C64::new(1.0, 0.0);
    for n in 0..=m {
        for (a, fa) in &pu {
            for (b, fb) in &pv {
                let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| (x - y).re).collect();
                let w = shifted_set(&diff, n, ShiftSide::Rapidity)?;
                let mut omega = Vec::with_capacity(m);
                for (i, &wi) in w.iter().enumerate() {
                    check_denominator(
                        "oscillation frequency",
                        C64::new(wi, 0.0),
                        scale,
                        PARTIAL_SUM_GUARD,
                    )?;
                    omega.push(if i < n { -wi } else { wi });
                }
                terms.push(Term {
                    amplitude: cm * kn * fa.conj() * fb,
                    omega,
                });
            }
        }
        kn *= kappa;
    }
    Ok(terms)
}

/// `∫₀^{T/η} e^{−(η + iω) y} dy` by adaptive Gauss-Kronrod quadrature.
fn damped_line(eta: f64, omega: f64) -> Result<C64> {
    let len = TRUNCATION / eta;
    let panels = Float::ceil(omega.abs() * len / core::f64::consts::PI) as usize + 1;
    let rate = C64::new(eta, omega);
    let cfg = QuadConfig {
        rel_tol: QUAD_TOL,
        abs_tol: QUAD_TOL / eta,
        max_panels: MAX_PANELS,
    };
    Ok(integrate(|y| (-rate * y).exp(), 0.0, len, panels, cfg)?.value)
}

fn damped_value(terms: &[Term], eta: f64) -> Result<C64> {
    // Many terms share one-dimensional factors; cache by frequency.
    let mut cache: Vec<(f64, C64)> = Vec::new();
    let mut total = C64::new(0.0, 0.0);
    for term in terms {
        let mut prod = term.amplitude;
        for &om in &term.omega {
            let factor = match cache.iter().find(|(w, _)| *w == om) {
                Some(&(_, val)) => val,
                None => {
                    let val = damped_line(eta, om)?;
                    cache.push((om, val));
                    val
                }
            };
            prod *= factor;
        }
        total += prod;
    }
    Ok(total)
}

/// MEPNO by damped integration over the eigen-domains, `M ∈ {1, 2}`, real
/// rapidities.
///
/// `schedule` lists the damping values as multiples of the smallest
/// oscillation frequency `min |[P̄ū − Q̄v̄}ⁿᵢ|`; at least two distinct
/// positive entries are needed. The damped values are extrapolated to zero
/// damping with a rational interpolant.
pub fn mepno_integral_oracle(
    u: &[C64],
    v: &[C64],
    c: Coupling,
    kappa: TwistParameter,
    schedule: &[f64],
) -> Result<MepnoValue> {
    check_mepno_pair(u, v, MAX_INTEGRAL_SIZE, "MEPNO integration oracle")?;
    if u.iter().chain(v).any(|z| z.im != 0.0) {
        return Err(Error::DomainError(
            "integration oracle needs real rapidities",
        ));
    }
    if schedule.len() < 2 || schedule.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
        return Err(Error::InvalidParameter(
            "damping schedule needs at least two positive finite entries",
        ));
    }
    for (i, a) in schedule.iter().enumerate() {
        if schedule[i + 1..].contains(a) {
            return Err(Error::InvalidParameter(
                "damping schedule entries must be distinct",
            ));
        }
    }
    let k = kappa.value();
    let terms = domain_terms(u, v, c, k)?;
    let w_min = terms
        .iter()
        .flat_map(|t| t.omega.iter())
        .fold(f64::INFINITY, |acc, &w| acc.min(w.abs()));
    let etas: Vec<f64> = schedule.iter().map(|&r| r * w_min).collect();
    let values = etas
        .iter()
        .map(|&eta| damped_value(&terms, eta))
        .collect::<Result<Vec<C64>>>()?;
    let (value, _) = rational_extrapolate_to_zero(&etas, &values)?;
    Ok(MepnoValue::new(value, Route::Integral, u, v, c.value(), k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detlib::mepno_det;
    use crate::rel_diff;

    fn reals(xs: &[f64]) -> Vec<C64> {
        xs.iter().map(|&x| C64::new(x, 0.0)).collect()
    }

    #[test]
    fn damped_line_matches_closed_form() {
        let (eta, om) = (0.07, -1.9);
        let s = C64::new(eta, om);
        let exact = (1.0 - (-s * (TRUNCATION / eta)).exp()) / s;
        assert!(rel_diff(damped_line(eta, om).unwrap(), exact) < 1e-11);
    }

    #[test]
    fn single_particle_damped_value() {
        // κ/(η − i(u−v)) + 1/(η + i(u−v)), times c.
        let (u, v, cv) = (0.9, -0.35, 1.25);
        let c = Coupling::new(cv).unwrap();
        let k = C64::new(-0.4, 0.8);
        let terms = domain_terms(&reals(&[u]), &reals(&[v]), c, k).unwrap();
        let eta = 0.1;
        let d = u - v;
        let exact = cv * (k / C64::new(eta, -d) + 1.0 / C64::new(eta, d));
        assert!(rel_diff(damped_value(&terms, eta).unwrap(), exact) < 1e-10);
    }

    #[test]
    fn two_particle_oracle_tracks_determinant() {
        let c = Coupling::new(1.1).unwrap();
        let k = TwistParameter::new(C64::new(0.6, -0.3)).unwrap();
        let (u, v) = (reals(&[0.42, -1.13]), reals(&[1.37, -0.21]));
        let got = mepno_integral_oracle(&u, &v, c, k, &DEFAULT_DAMPING_SCHEDULE).unwrap();
        let d = mepno_det(&u, &v, c, k).unwrap();
        assert!(rel_diff(got.value, d.value) < 1e-2);
    }

    #[test]
    fn input_validation() {
        let c = Coupling::new(1.0).unwrap();
        let k = TwistParameter::new(C64::new(1.0, 0.0)).unwrap();
        let three = reals(&[0.1, 0.5, 0.9]);
        let r = mepno_integral_oracle(&three, &three, c, k, &DEFAULT_DAMPING_SCHEDULE);
        assert!(matches!(r, Err(Error::SizeLimit { .. })));
        let r = mepno_integral_oracle(&reals(&[0.1]), &reals(&[0.4]), c, k, &[0.5]);
        assert!(matches!(r, Err(Error::InvalidParameter(_))));
        let r = mepno_integral_oracle(&[C64::new(0.1, 0.2)], &reals(&[0.4]), c, k, &[0.5, 0.25]);
        assert!(matches!(r, Err(Error::DomainError(_))));
        let r = mepno_integral_oracle(&reals(&[0.1, 0.5]), &reals(&[0.4, 0.2]), c, k, &[0.5, 0.25]);
        assert!(matches!(r, Err(Error::SingularArgument { .. })));
    }
}
