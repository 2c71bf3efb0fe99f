//! Named identities that can be checked over random samples.

use std::f64::consts::PI;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use bethe_core::detlib::{
    cauchy_det, cauchy_det_factorized, ik_det, ik_det_factorized, mepno_det, TwistParameter,
};
use bethe_core::kernels::{
    big_f, g, h, set_inner, shifted_set, Coupling, PositionSet, RapiditySet, ShiftSide,
};
use bethe_core::oracles::{
    gaudin_sum, lemma2_sides, mepno, mepno_route_a, mepno_route_a_regrouped, null_scale,
    residue_probe, MAX_ROUTE_A_SIZE,
};
use bethe_core::wavefunction::{cusp_residual, BetheState};
use bethe_core::{rel_diff, Route, C64};

use crate::error::{HarnessError, Result};
use crate::report::{run_check, IdentityReport};
use crate::sampling::{SampleConfig, Sampler};

/// Offset of the pole-residue probe from the hyperplane `Σu = Σv`.
pub const RESIDUE_EPSILON: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Identity {
    Gaudin,
    Lemma2,
    Cauchy,
    IkTwoForms,
    KSymmetry,
    KConjugate,
    Cusp,
    Exchange,
    RoutesAb,
    RoutesBc,
    RoutesCd,
    KappaNull,
    KappaPoly,
    Residue,
    IntegralM1,
    IntegralM2,
    ShiftIdentities,
    AppendixA3,
    AppendixA4,
}

impl Identity {
    pub const ALL: [Identity; 19] = [
        Identity::Gaudin,
        Identity::Lemma2,
        Identity::Cauchy,
        Identity::IkTwoForms,
        Identity::KSymmetry,
        Identity::KConjugate,
        Identity::Cusp,
        Identity::Exchange,
        Identity::RoutesAb,
        Identity::RoutesBc,
        Identity::RoutesCd,
        Identity::KappaNull,
        Identity::KappaPoly,
        Identity::Residue,
        Identity::IntegralM1,
        Identity::IntegralM2,
        Identity::ShiftIdentities,
        Identity::AppendixA3,
        Identity::AppendixA4,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Identity::Gaudin => "gaudin",
            Identity::Lemma2 => "lemma2",
            Identity::Cauchy => "cauchy",
            Identity::IkTwoForms => "ik-two-forms",
            Identity::KSymmetry => "k-symmetry",
            Identity::KConjugate => "k-conjugate",
            Identity::Cusp => "cusp",
            Identity::Exchange => "exchange",
            Identity::RoutesAb => "routes-ab",
            Identity::RoutesBc => "routes-bc",
            Identity::RoutesCd => "routes-cd",
            Identity::KappaNull => "kappa-null",
            Identity::KappaPoly => "kappa-poly",
            Identity::Residue => "residue",
            Identity::IntegralM1 => "integral-m1",
            Identity::IntegralM2 => "integral-m2",
            Identity::ShiftIdentities => "shift-identities",
            Identity::AppendixA3 => "appendix-a3",
            Identity::AppendixA4 => "appendix-a4",
        }
    }

    /// Tolerance matched to the conditioning of each check.
    pub fn default_tolerance(self) -> f64 {
        match self {
            Identity::Gaudin
            | Identity::Lemma2
            | Identity::RoutesAb
            | Identity::RoutesBc
            | Identity::RoutesCd
            | Identity::KappaNull
            | Identity::AppendixA3 => 1e-8,
            Identity::KappaPoly => 1e-9,
            Identity::Cauchy
            | Identity::IkTwoForms
            | Identity::KSymmetry
            | Identity::KConjugate
            | Identity::Cusp
            | Identity::Exchange
            | Identity::ShiftIdentities
            | Identity::AppendixA4 => 1e-10,
            Identity::Residue => 1e-3,
            Identity::IntegralM1 => 1e-6,
            Identity::IntegralM2 => 1e-2,
        }
    }

    /// Particle numbers the check can run at.
    pub fn m_range(self) -> RangeInclusive<usize> {
        match self {
            Identity::Gaudin | Identity::Lemma2 => 1..=6,
            Identity::Cusp => 2..=7,
            Identity::Exchange => 2..=10,
            Identity::RoutesAb | Identity::AppendixA3 => 1..=MAX_ROUTE_A_SIZE,
            Identity::RoutesBc | Identity::RoutesCd | Identity::KappaNull | Identity::KappaPoly => {
                1..=8
            }
            Identity::IntegralM1 => 1..=1,
            Identity::IntegralM2 => 2..=2,
            Identity::Cauchy
            | Identity::IkTwoForms
            | Identity::KSymmetry
            | Identity::KConjugate
            | Identity::Residue
            | Identity::ShiftIdentities
            | Identity::AppendixA4 => 1..=64,
        }
    }

    /// The integration identities carry their own particle number.
    pub fn fixed_m(self) -> Option<usize> {
        match self {
            Identity::IntegralM1 => Some(1),
            Identity::IntegralM2 => Some(2),
            _ => None,
        }
    }

    pub fn supports(self, m: usize) -> bool {
        self.fixed_m().is_some() || self.m_range().contains(&m)
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Identity {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        Identity::ALL
            .into_iter()
            .find(|i| i.id() == s)
            .ok_or_else(|| HarnessError::UnknownIdentity(s.to_string()))
    }
}

fn reals(xs: &[f64]) -> Vec<C64> {
    xs.iter().map(|&x| C64::new(x, 0.0)).collect()
}

fn twist(k: C64) -> Result<TwistParameter> {
    Ok(TwistParameter::new(k)?)
}

/// Routes that run at particle number `m` (route A only up to its cap).
fn routes_at(m: usize) -> Vec<Route> {
    let mut routes = Vec::new();
    if m <= MAX_ROUTE_A_SIZE {
        routes.push(Route::A);
    }
    routes.extend([Route::B, Route::C, Route::D]);
    routes
}

/// `(ū, v̄, c)` for set-valued checks.
fn draw_sets(s: &mut Sampler, m: usize) -> Result<(Vec<C64>, Vec<C64>, Coupling)> {
    let c = s.coupling();
    let all = s.gapped_reals(2 * m, c)?;
    Ok((reals(&all[..m]), reals(&all[m..]), Coupling::new(c)?))
}

fn route_pair(s: &mut Sampler, m: usize, x: Route, y: Route) -> Result<f64> {
    let sample = s.next_sample()?;
    let (u, v) = (sample.u_complex(), sample.v_complex());
    let c = Coupling::new(sample.c)?;
    let k = twist(sample.kappa)?;
    debug_assert_eq!(u.len(), m);
    Ok(rel_diff(
        mepno(x, &u, &v, c, k)?.value,
        mepno(y, &u, &v, c, k)?.value,
    ))
}

/// Lagrange interpolation through `(nodes, values)` evaluated at `x`, with
/// its derivative.
fn lagrange(nodes: &[C64], values: &[C64], x: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for (j, (&xj, &yj)) in nodes.iter().zip(values).enumerate() {
        let mut basis = C64::new(1.0, 0.0);
        let mut log_deriv = C64::new(0.0, 0.0);
        for (k, &xk) in nodes.iter().enumerate() {
            if k != j {
                basis *= (x - xk) / (xj - xk);
                log_deriv += 1.0 / (x - xk);
            }
        }
        p += yj * basis;
        dp += yj * basis * log_deriv;
    }
    (p, dp)
}

fn check_one(identity: Identity, s: &mut Sampler, m: usize) -> Result<f64> {
    match identity {
        Identity::Gaudin => {
            let (u, v, c) = draw_sets(s, m)?;
            Ok(rel_diff(gaudin_sum(&u, &v, c)?, ik_det(&u, &v, c)?))
        }
        Identity::Lemma2 => {
            // γ̄ takes m values; α and β split the other m for every m₁.
            let (gamma, pool, c) = draw_sets(s, m)?;
            let mut worst = 0f64;
            for m1 in 0..=m {
                let (lhs, rhs) = lemma2_sides(&gamma, &pool[..m1], &pool[m1..], c)?;
                worst = worst.max(rel_diff(lhs, rhs));
            }
            Ok(worst)
        }
        Identity::Cauchy => {
            let (u, v, c) = draw_sets(s, m)?;
            Ok(rel_diff(
                cauchy_det(&u, &v, c)?,
                cauchy_det_factorized(&u, &v, c)?,
            ))
        }
        Identity::IkTwoForms => {
            let (u, v, c) = draw_sets(s, m)?;
            Ok(rel_diff(ik_det(&u, &v, c)?, ik_det_factorized(&u, &v, c)?))
        }
        Identity::KSymmetry => {
            let (u, v, c) = draw_sets(s, m)?;
            let (p, q) = (s.permutation(m), s.permutation(m));
            let permuted = ik_det(&p.apply(&u)?, &q.apply(&v)?, c)?;
            Ok(rel_diff(ik_det(&u, &v, c)?, permuted))
        }
        Identity::KConjugate => {
            let (u, v, c) = draw_sets(s, m)?;
            Ok(rel_diff(ik_det(&u, &v, c)?.conj(), ik_det(&v, &u, c)?))
        }
        Identity::Cusp => {
            let (u, _, c) = draw_sets(s, m)?;
            let state = BetheState::new(RapiditySet::new(u)?, c);
            let mut x: Vec<f64> = (0..m - 1).map(|_| s.uniform(-3.0, 3.0)).collect();
            x.sort_by(f64::total_cmp);
            let i = s.index(m - 1);
            x.insert(i, x[i]);
            let (residual, cpsi) = cusp_residual(&PositionSet::new(x)?, &state, i)?;
            Ok(rel_diff(residual + cpsi, cpsi))
        }
        Identity::Exchange => {
            let (u, _, c) = draw_sets(s, m)?;
            let p = s.permutation(m);
            let j = s.index(m - 1);
            let swapped = bethe_core::kernels::Permutation::transposition(m, j)?.compose(&p)?;
            let pinv = p.inverse();
            let (a, b) = (u[pinv.image(j)], u[pinv.image(j + 1)]);
            let ic = c.ic();
            let lhs = big_f(&swapped.apply(&u)?, c)?;
            let rhs = (a - b - ic) / (a - b + ic) * big_f(&p.apply(&u)?, c)?;
            Ok(rel_diff(lhs, rhs))
        }
        Identity::RoutesAb => route_pair(s, m, Route::A, Route::B),
        Identity::RoutesBc => route_pair(s, m, Route::B, Route::C),
        Identity::RoutesCd => route_pair(s, m, Route::C, Route::D),
        Identity::KappaNull => {
            let sample = s.next_sample()?;
            let (u, v) = (sample.u_complex(), sample.v_complex());
            let c = Coupling::new(sample.c)?;
            let one = twist(C64::new(1.0, 0.0))?;
            let scale = null_scale(&u, &v, c)?;
            let mut worst = 0f64;
            for route in routes_at(m) {
                worst = worst.max(mepno(route, &u, &v, c, one)?.value.norm() / scale);
            }
            Ok(worst)
        }
        Identity::KappaPoly => {
            let sample = s.next_sample()?;
            let (u, v) = (sample.u_complex(), sample.v_complex());
            let c = Coupling::new(sample.c)?;
            // Nodes on a circle of radius 1.5, rotated off the real axis so
            // that neither κ = 1 nor common fixed twists coincide with one.
            let nodes: Vec<C64> = (0..=m)
                .map(|j| C64::from_polar(1.5, 2.0 * PI * (j as f64 + 0.25) / (m + 1) as f64))
                .collect();
            let held_out = sample.kappa;
            let one = C64::new(1.0, 0.0);
            let mut worst = 0f64;
            let mut reference_slope = None;
            for route in routes_at(m).into_iter().rev() {
                let values = nodes
                    .iter()
                    .map(|&k| Ok(mepno(route, &u, &v, c, twist(k)?)?.value))
                    .collect::<Result<Vec<C64>>>()?;
                let (predicted, _) = lagrange(&nodes, &values, held_out);
                let actual = mepno(route, &u, &v, c, twist(held_out)?)?.value;
                worst = worst.max(rel_diff(predicted, actual));
                // ∂_κ S at κ = 1, compared against the determinant route.
                let (_, slope) = lagrange(&nodes, &values, one);
                match reference_slope {
                    None => reference_slope = Some(slope),
                    Some(d) => worst = worst.max(rel_diff(slope, d)),
                }
            }
            Ok(worst)
        }
        Identity::Residue => {
            let (u, v0, c) = draw_sets(s, m)?;
            let (a, b) = residue_probe(&u, &v0, RESIDUE_EPSILON, c)?;
            Ok(rel_diff(a, b))
        }
        Identity::IntegralM1 | Identity::IntegralM2 => {
            let sample = s.next_sample()?;
            let (u, v) = (sample.u_complex(), sample.v_complex());
            let c = Coupling::new(sample.c)?;
            let k = twist(sample.kappa)?;
            let quad = mepno(Route::Integral, &u, &v, c, k)?.value;
            Ok(rel_diff(quad, mepno_det(&u, &v, c, k)?.value))
        }
        Identity::ShiftIdentities => {
            let (lo, hi) = s.config().rapidity_range;
            let draw =
                |s: &mut Sampler| -> Vec<f64> { (0..m).map(|_| s.uniform(lo, hi)).collect() };
            let (x, u, w) = (draw(s), draw(s), draw(s));
            let n = s.index(m + 1);
            let sx = shifted_set(&x, n, ShiftSide::Position)?;
            let su = shifted_set(&u, n, ShiftSide::Rapidity)?;
            // ({x̄]ⁿ, ū) = (x̄, [ū}ⁿ)
            let left: f64 = set_inner(&sx, &u)?;
            let right: f64 = set_inner(&x, &su)?;
            let mut worst = rel_diff(C64::new(left, 0.0), C64::new(right, 0.0));
            // [ū}ⁿ + [w̄}ⁿ = [ū + w̄}ⁿ
            let sw = shifted_set(&w, n, ShiftSide::Rapidity)?;
            let uw: Vec<f64> = u.iter().zip(&w).map(|(a, b)| a + b).collect();
            let suw = shifted_set(&uw, n, ShiftSide::Rapidity)?;
            for i in 0..m {
                let scale = su[i].abs().max(sw[i].abs()).max(1.0);
                worst = worst.max((su[i] + sw[i] - suw[i]).abs() / scale);
            }
            Ok(worst)
        }
        Identity::AppendixA3 => {
            let sample = s.next_sample()?;
            let (u, v) = (sample.u_complex(), sample.v_complex());
            let c = Coupling::new(sample.c)?;
            let k = twist(sample.kappa)?;
            let direct = mepno_route_a(&u, &v, c, k)?.value;
            Ok(rel_diff(
                mepno_route_a_regrouped(&u, &v, c, k)?.value,
                direct,
            ))
        }
        Identity::AppendixA4 => {
            let (xs, ys, c) = draw_sets(s, m)?;
            let ic = c.ic();
            let mut worst = 0f64;
            for (&x, &y) in xs.iter().zip(&ys) {
                worst = worst
                    .max(rel_diff(g(x, y - ic, c)?, 1.0 / h(x, y, c)?))
                    .max(rel_diff(g(x - ic, y, c)?, -1.0 / h(y, x, c)?))
                    .max(rel_diff(h(x - ic, y, c)?, 1.0 / g(x, y, c)?));
            }
            Ok(worst)
        }
    }
}

/// Checks `identity` on `samples` fresh samples drawn from `cfg`.
///
/// Identities with a built-in particle number override `cfg.m`; the rest
/// reject particle numbers outside [`Identity::m_range`].
pub fn run(
    identity: Identity,
    cfg: &SampleConfig,
    samples: usize,
    tolerance: f64,
) -> Result<IdentityReport> {
    let m = identity.fixed_m().unwrap_or(cfg.m);
    if !identity.m_range().contains(&m) {
        let range = identity.m_range();
        return Err(HarnessError::InvalidConfig(format!(
            "{identity} runs for M in {}..={}, got {m}",
            range.start(),
            range.end()
        )));
    }
    let mut sampler = Sampler::new(cfg.with_m(m))?;
    run_check(identity.id(), &mut sampler, samples, tolerance, |s| {
        check_one(identity, s, m)
    })
}

/// String-keyed entry point; unknown ids yield [`HarnessError::UnknownIdentity`].
pub fn run_identity(
    identity_id: &str,
    cfg: &SampleConfig,
    samples: usize,
    tolerance: f64,
) -> Result<IdentityReport> {
    run(identity_id.parse()?, cfg, samples, tolerance)
}
