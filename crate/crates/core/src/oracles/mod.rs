//! Brute-force evaluators for the summed identities: Gaudin's permutation
//! sum, the two-set partition lemma, MEPNO routes A, B and C, the
//! eigen-domain integration oracle and the pole-residue probe.
//!
//! Bra amplitudes are conjugated after evaluation, `conj(F(P̄ū))`, which is
//! the intended object for real rapidities. Complex inputs are accepted but
//! then describe an analytic continuation of the bra side.

mod integral;

use alloc::vec;
use alloc::vec::Vec;

use crate::detlib::{ik_dd, ik_det, mepno_det, TwistParameter};
use crate::kernels::{
    enumerate_bipartitions, enumerate_permutations, guard_scale, Coupling, KernelKind, PairOrder,
};
use crate::mepno::{MepnoValue, Route};
use crate::xprec::{self, Dd, ONE, ZERO};
use crate::{Error, Result, C64};

pub use integral::{mepno_integral_oracle, DEFAULT_DAMPING_SCHEDULE, MAX_INTEGRAL_SIZE};

/// Partial sums of a permutation sum smaller than this times the guard scale
/// abort the evaluation.
pub const PARTIAL_SUM_GUARD: f64 = 1e-8;
pub const MAX_GAUDIN_SIZE: usize = 6;
pub const MAX_LEMMA2_SIZE: usize = 6;
pub const MAX_ROUTE_A_SIZE: usize = 5;
pub const MAX_ROUTE_B_SIZE: usize = 8;
pub const MAX_ROUTE_C_SIZE: usize = 10;

fn check_pair(u: &[C64], v: &[C64], limit: usize, what: &'static str) -> Result<usize> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    if u.len() > limit {
        return Err(Error::SizeLimit {
            what,
            size: u.len(),
            limit,
        });
    }
    Ok(u.len())
}

fn check_mepno_pair(u: &[C64], v: &[C64], limit: usize, what: &'static str) -> Result<usize> {
    let m = check_pair(u, v, limit, what)?;
    if m == 0 {
        return Err(Error::InvalidParameter("MEPNO needs at least one particle"));
    }
    Ok(m)
}

/// Every reordering `P̄ū` together with its amplitude `F(P̄ū)`.
fn permuted_amplitudes(u: &[Dd], c: Coupling) -> Result<Vec<(Vec<Dd>, Dd)>> {
    enumerate_permutations(u.len())?
        .map(|p| {
            let pu = p.apply(u)?;
            let amp = xprec::big_f(&pu, c)?;
            Ok((pu, amp))
        })
        .collect()
}

/// `S_n = Σ_{P,Q} (ic)^M conj(F(P̄ū)) F(Q̄v̄) / ∏ᵢ [P̄ū − Q̄v̄}ⁿᵢ` for every
/// `n` in `n_lo..=n_hi`; entry `k` of the result holds `S_{n_lo + k}`.
///
/// Only the partial sums that enter the requested shifts are guarded.
fn shifted_permutation_sums(
    u: &[Dd],
    v: &[Dd],
    c: Coupling,
    n_lo: usize,
    n_hi: usize,
    scale: f64,
) -> Result<Vec<Dd>> {
    let m = u.len();
    debug_assert!(n_lo <= n_hi && n_hi <= m && v.len() == m);
    let pu = permuted_amplitudes(u, c)?;
    let pv = permuted_amplitudes(v, c)?;
    let mut sums = vec![ZERO; n_hi - n_lo + 1];
    let mut w = vec![ZERO; m];
    // head[k] = ∏_{i<k} (w₀ + … + wᵢ), tail[k] = ∏_{i≥k} (wᵢ + … + w_{M-1})
    let mut head = vec![ONE; m + 1];
    let mut tail = vec![ONE; m + 1];
    for (a, fa) in &pu {
        let bra = fa.conj();
        for (b, fb) in &pv {
            for i in 0..m {
                w[i] = a[i] - b[i];
            }
            let mut acc = ZERO;
            for i in 0..n_hi {
                acc += w[i];
                xprec::guard("partial sum of u - v", acc, scale, PARTIAL_SUM_GUARD)?;
                head[i + 1] = head[i] * acc;
            }
            let mut acc = ZERO;
            for i in (n_lo..m).rev() {
                acc += w[i];
                xprec::guard("partial sum of u - v", acc, scale, PARTIAL_SUM_GUARD)?;
                tail[i] = tail[i + 1] * acc;
            }
            let coeff = bra * fb;
            for (k, s) in sums.iter_mut().enumerate() {
                let n = n_lo + k;
                *s += xprec::div(coeff, head[n] * tail[n]);
            }
        }
    }
    let icm = xprec::powi(xprec::ic(c), m);
    Ok(sums.into_iter().map(|s| s * icm).collect())
}

/// Gaudin's double permutation sum
/// `Σ_{P,Q} conj(F(P̄ū)) F(Q̄v̄) (ic)^M / ∏ᵢ [P̄ū − Q̄v̄}ᴹᵢ`, which equals
/// `K_M(ū|v̄)`.
pub fn gaudin_sum(u: &[C64], v: &[C64], c: Coupling) -> Result<C64> {
    let m = check_pair(u, v, MAX_GAUDIN_SIZE, "Gaudin permutation sum")?;
    let scale = guard_scale(c, [u, v]);
    let (u, v) = (xprec::lift_all(u), xprec::lift_all(v));
    Ok(xprec::lower(
        shifted_permutation_sums(&u, &v, c, m, m, scale)?[0],
    ))
}

/// Both sides of the two-set partition lemma:
///
/// `Σ K_{m₁}(γ̄_I|ᾱ) K_{m₂}(β̄|γ̄_II) f(γ̄_II,γ̄_I)` over bipartitions of `γ̄`
/// with `#γ̄_I = m₁`, and `(−1)^{m₁} f(γ̄,ᾱ) K_{m₁+m₂}({ᾱ−ic, β̄}|γ̄)`.
pub fn lemma2_sides(gamma: &[C64], alpha: &[C64], beta: &[C64], c: Coupling) -> Result<(C64, C64)> {
    let (m1, m2) = (alpha.len(), beta.len());
    if gamma.len() != m1 + m2 {
        return Err(Error::LengthMismatch {
            left: gamma.len(),
            right: m1 + m2,
        });
    }
    if gamma.len() > MAX_LEMMA2_SIZE {
        return Err(Error::SizeLimit {
            what: "partition lemma",
            size: gamma.len(),
            limit: MAX_LEMMA2_SIZE,
        });
    }
    let (gamma, alpha, beta) = (
        xprec::lift_all(gamma),
        xprec::lift_all(alpha),
        xprec::lift_all(beta),
    );
    let mut lhs = ZERO;
    for bip in enumerate_bipartitions(gamma.len(), m1)? {
        let (g1, g2) = bip.split(&gamma)?;
        lhs += ik_dd(&g1, &alpha, c)?
            * ik_dd(&beta, &g2, c)?
            * xprec::set_product(KernelKind::F, &g2, &g1, PairOrder::All, c)?;
    }
    let ic = xprec::ic(c);
    let shifted: Vec<Dd> = alpha
        .iter()
        .map(|&a| a - ic)
        .chain(beta.iter().copied())
        .collect();
    let rhs = xprec::set_product(KernelKind::F, &gamma, &alpha, PairOrder::All, c)?
        * ik_dd(&shifted, &gamma, c)?;
    let rhs = if m1 % 2 == 0 { rhs } else { -rhs };
    Ok((xprec::lower(lhs), xprec::lower(rhs)))
}

/// Route A: the eigen-domain double permutation sum
/// `Σₙ κⁿ (−1)^{M−n} Σ_{P,Q} (ic)^M conj(F(P̄ū)) F(Q̄v̄) / ∏ᵢ [P̄ū − Q̄v̄}ⁿᵢ`.
pub fn mepno_route_a(
    u: &[C64],
    v: &[C64],
    c: Coupling,
    kappa: TwistParameter,
) -> Result<MepnoValue> {
    let m = check_mepno_pair(u, v, MAX_ROUTE_A_SIZE, "MEPNO route A")?;
    let scale = guard_scale(c, [u, v]);
    let sums = shifted_permutation_sums(&xprec::lift_all(u), &xprec::lift_all(v), c, 0, m, scale)?;
    let k = xprec::lift(kappa.value());
    let mut value = ZERO;
    let mut kn = ONE;
    for (n, &s) in sums.iter().enumerate() {
        let term = kn * s;
        value = if (m - n) % 2 == 0 {
            value + term
        } else {
            value - term
        };
        kn *= k;
    }
    Ok(MepnoValue::new(
        xprec::lower(value),
        Route::A,
        u,
        v,
        c.value(),
        kappa.value(),
    ))
}

/// Route A regrouped by the bipartitions each `(P, Q)` pair induces:
///
/// `Σ κ^{#I} (−1)^{#II} conj(f(ū_I,ū_II)) f(v̄_I,v̄_II) · S_I · S_II`
///
/// where `S_I` is the fully shifted permutation sum over the `I` parts and
/// `S_II` the unshifted one over the `II` parts. Equal to route A term by
/// term, so it checks the resummation bookkeeping on its own.
pub fn mepno_route_a_regrouped(
    u: &[C64],
    v: &[C64],
    c: Coupling,
    kappa: TwistParameter,
) -> Result<MepnoValue> {
    let m = check_mepno_pair(u, v, MAX_ROUTE_A_SIZE, "regrouped MEPNO route A")?;
    let scale = guard_scale(c, [u, v]);
    let (ud, vd) = (xprec::lift_all(u), xprec::lift_all(v));
    let k = xprec::lift(kappa.value());
    let mut value = ZERO;
    for n in 0..=m {
        let mut partial = ZERO;
        for ub in enumerate_bipartitions(m, n)? {
            let (u1, u2) = ub.split(&ud)?;
            let fu = xprec::set_product(KernelKind::F, &u1, &u2, PairOrder::All, c)?.conj();
            for vb in enumerate_bipartitions(m, n)? {
                let (v1, v2) = vb.split(&vd)?;
                let fv = xprec::set_product(KernelKind::F, &v1, &v2, PairOrder::All, c)?;
                let s1 = shifted_permutation_sums(&u1, &v1, c, n, n, scale)?[0];
                let s2 = shifted_permutation_sums(&u2, &v2, c, 0, 0, scale)?[0];
                partial += fu * fv * s1 * s2;
            }
        }
        let term = xprec::powi(k, n) * partial;
        value = if (m - n) % 2 == 0 {
            value + term
        } else {
            value - term
        };
    }
    Ok(MepnoValue::new(
        xprec::lower(value),
        Route::A,
        u,
        v,
        c.value(),
        kappa.value(),
    ))
}

/// Route B: both inner permutation sums of route A resummed into
/// Izergin-Korepin determinants,
/// `Σ κ^{#I} f(v̄_I,v̄_II) K_{#I}(ū_I|v̄_I) K_{#II}(v̄_II|ū_II) f(ū_II,ū_I)`.
pub fn mepno_route_b(
    u: &[C64],
    v: &[C64],
    c: Coupling,
    kappa: TwistParameter,
) -> Result<MepnoValue> {
    let m = check_mepno_pair(u, v, MAX_ROUTE_B_SIZE, "MEPNO route B")?;
    let (ud, vd) = (xprec::lift_all(u), xprec::lift_all(v));
    let k = xprec::lift(kappa.value());
    let mut value = ZERO;
    for n in 0..=m {
        let mut u_parts = Vec::new();
        for b in enumerate_bipartitions(m, n)? {
            let (u1, u2) = b.split(&ud)?;
            let fu = xprec::set_product(KernelKind::F, &u2, &u1, PairOrder::All, c)?;
            u_parts.push((u1, u2, fu));
        }
        let mut partial = ZERO;
        for b in enumerate_bipartitions(m, n)? {
            let (v1, v2) = b.split(&vd)?;
            let fv = xprec::set_product(KernelKind::F, &v1, &v2, PairOrder::All, c)?;
            for (u1, u2, fu) in &u_parts {
                partial += fv * ik_dd(u1, &v1, c)? * ik_dd(&v2, u2, c)? * *fu;
            }
        }
        value += xprec::powi(k, n) * partial;
    }
    Ok(MepnoValue::new(
        xprec::lower(value),
        Route::B,
        u,
        v,
        c.value(),
        kappa.value(),
    ))
}

/// Route C: one bipartition sum over `v̄` with the `I` part shifted by `−ic`
/// inside a single `K_M`,
/// `Σ (−κ)^{#I} f(v̄_I,v̄_II) f(ū,v̄_I) K_M({v̄_I − ic, v̄_II}|ū)`.
pub fn mepno_route_c(
    u: &[C64],
    v: &[C64],
    c: Coupling,
    kappa: TwistParameter,
) -> Result<MepnoValue> {
    let m = check_mepno_pair(u, v, MAX_ROUTE_C_SIZE, "MEPNO route C")?;
    let (ud, vd) = (xprec::lift_all(u), xprec::lift_all(v));
    let k = xprec::lift(kappa.value());
    let ic = xprec::ic(c);
    let mut value = ZERO;
    for n in 0..=m {
        let mut partial = ZERO;
        for b in enumerate_bipartitions(m, n)? {
            let (v1, v2) = b.split(&vd)?;
            let shifted: Vec<Dd> = b
                .mask()
                .iter()
                .zip(&vd)
                .map(|(&in_i, &x)| if in_i { x - ic } else { x })
                .collect();
            partial += xprec::set_product(KernelKind::F, &v1, &v2, PairOrder::All, c)?
                * xprec::set_product(KernelKind::F, &ud, &v1, PairOrder::All, c)?
                * ik_dd(&shifted, &ud, c)?;
        }
        value += xprec::powi(-k, n) * partial;
    }
    Ok(MepnoValue::new(
        xprec::lower(value),
        Route::C,
        u,
        v,
        c.value(),
        kappa.value(),
    ))
}

/// Evaluates the MEPNO through the requested route. The integration route
/// uses [`DEFAULT_DAMPING_SCHEDULE`].
pub fn mepno(
    route: Route,
    u: &[C64],
    v: &[C64],
    c: Coupling,
    kappa: TwistParameter,
) -> Result<MepnoValue> {
    match route {
        Route::A => mepno_route_a(u, v, c, kappa),
        Route::B => mepno_route_b(u, v, c, kappa),
        Route::C => mepno_route_c(u, v, c, kappa),
        Route::D => mepno_det(u, v, c, kappa),
        Route::Integral => mepno_integral_oracle(u, v, c, kappa, &DEFAULT_DAMPING_SCHEDULE),
    }
}

/// Absolute scale for null tests: `max(1, |S_{κ=0}(ū|v̄)|)` from the
/// determinant route.
pub fn null_scale(u: &[C64], v: &[C64], c: Coupling) -> Result<f64> {
    let zero = TwistParameter::new(C64::new(0.0, 0.0))?;
    Ok(mepno_det(u, v, c, zero)?.value.norm().max(1.0))
}

/// `(Σ(uᵢ − vᵢ)) · K_M(ū|v̄)` with the first element of `v̄₀` moved so that
/// `Σ(uᵢ − vᵢ)` equals `ε`, then `ε/2`.
pub fn residue_probe(u: &[C64], v0: &[C64], eps: f64, c: Coupling) -> Result<(C64, C64)> {
    check_pair(u, v0, crate::detlib::MAX_DET_SIZE, "residue probe")?;
    if u.is_empty() {
        return Err(Error::InvalidParameter(
            "residue probe needs at least one particle",
        ));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidParameter(
            "epsilon must be positive and finite",
        ));
    }
    let gap: C64 = u.iter().sum::<C64>() - v0.iter().sum::<C64>();
    let probe = |e: f64| -> Result<C64> {
        let mut v = v0.to_vec();
        v[0] += gap - e;
        let total: C64 = u.iter().sum::<C64>() - v.iter().sum::<C64>();
        Ok(total * ik_det(u, &v, c)?)
    };
    Ok((probe(eps)?, probe(0.5 * eps)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{g, Permutation};
    use crate::rel_diff;

    fn cx(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn reals(xs: &[f64]) -> Vec<C64> {
        xs.iter().map(|&x| cx(x, 0.0)).collect()
    }

    fn tw(re: f64, im: f64) -> TwistParameter {
        TwistParameter::new(cx(re, im)).unwrap()
    }

    fn m1_closed_form(u: f64, v: f64, c: f64, k: C64) -> C64 {
        (k - 1.0) * cx(0.0, c) / (u - v)
    }

    #[test]
    fn gaudin_single_particle() {
        let c = Coupling::new(1.3).unwrap();
        let s = gaudin_sum(&reals(&[0.4]), &reals(&[-0.9]), c).unwrap();
        assert!(rel_diff(s, cx(0.0, 1.3) / 1.3) < 1e-15);
    }

    #[test]
    fn gaudin_matches_ik_at_two_and_three() {
        let c = Coupling::new(0.8).unwrap();
        let (u, v) = (reals(&[0.31, -1.2]), reals(&[1.05, -0.44]));
        assert!(rel_diff(gaudin_sum(&u, &v, c).unwrap(), ik_det(&u, &v, c).unwrap()) < 1e-10);
        let (u, v) = (reals(&[0.31, -1.2, 1.7]), reals(&[1.05, -0.44, 0.12]));
        let base = gaudin_sum(&u, &v, c).unwrap();
        let p = Permutation::from_one_based(&[2, 3, 1]).unwrap();
        let permuted = gaudin_sum(&p.apply(&u).unwrap(), &v, c).unwrap();
        assert!(rel_diff(base, permuted) < 1e-12);
    }

    #[test]
    fn gaudin_limits_and_guard() {
        let c = Coupling::new(1.0).unwrap();
        let seven = reals(&[0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert!(matches!(
            gaudin_sum(&seven, &seven, c),
            Err(Error::SizeLimit { .. })
        ));
        // Equal totals make the last partial sum vanish.
        let r = gaudin_sum(&reals(&[0.2, 0.5]), &reals(&[0.4, 0.3]), c);
        assert!(matches!(r, Err(Error::SingularArgument { .. })));
    }

    #[test]
    fn lemma2_degenerate_parts() {
        let c = Coupling::new(1.1).unwrap();
        let gamma = reals(&[0.2, -0.7]);
        let beta = reals(&[1.3, 0.9]);
        let (lhs, rhs) = lemma2_sides(&gamma, &[], &beta, c).unwrap();
        let k = ik_det(&beta, &gamma, c).unwrap();
        assert!(rel_diff(lhs, k) < 1e-15 && rel_diff(rhs, k) < 1e-15);

        let (gm, al) = (cx(0.35, 0.0), cx(-0.6, 0.0));
        let (lhs, rhs) = lemma2_sides(&[gm], &[al], &[], c).unwrap();
        let ic = c.ic();
        let hand = -crate::kernels::f(gm, al, c).unwrap() * ic / (al - ic - gm);
        assert!(rel_diff(lhs, g(gm, al, c).unwrap()) < 1e-15);
        assert!(rel_diff(rhs, hand) < 1e-14);
        assert!(rel_diff(lhs, rhs) < 1e-13);
    }

    #[test]
    fn lemma2_two_plus_two() {
        let c = Coupling::new(0.9).unwrap();
        let gamma = reals(&[0.12, -1.33, 0.87, 1.61]);
        let (lhs, rhs) =
            lemma2_sides(&gamma, &reals(&[-0.45, 1.02]), &reals(&[0.5, -1.8]), c).unwrap();
        assert!(rel_diff(lhs, rhs) < 1e-9);
    }

    #[test]
    fn lemma2_rejects_bad_sizes() {
        let c = Coupling::new(1.0).unwrap();
        let r = lemma2_sides(&reals(&[0.1, 0.2]), &reals(&[0.3]), &[], c);
        assert!(matches!(r, Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn single_particle_routes_match_closed_form() {
        let (u, v, cv) = (0.73, -0.41, 1.4);
        let c = Coupling::new(cv).unwrap();
        let k = tw(0.3, -2.1);
        let expect = m1_closed_form(u, v, cv, k.value());
        for route in [Route::A, Route::B, Route::C, Route::D, Route::Integral] {
            let got = mepno(route, &reals(&[u]), &reals(&[v]), c, k).unwrap();
            let tol = if route == Route::Integral {
                1e-6
            } else {
                1e-12
            };
            assert!(
                rel_diff(got.value, expect) < tol,
                "{route}: {} vs {expect}",
                got.value
            );
            assert_eq!(got.route, route);
            assert_eq!(got.inputs.kappa, k.value());
        }
    }

    #[test]
    fn route_a_kappa_zero_keeps_only_unshifted_sum() {
        let c = Coupling::new(1.0).unwrap();
        let (u, v) = (reals(&[0.3, -0.8]), reals(&[1.1, 0.25]));
        let a = mepno_route_a(&u, &v, c, tw(0.0, 0.0)).unwrap().value;
        let scale = guard_scale(c, [&u[..], &v[..]]);
        let (ud, vd) = (xprec::lift_all(&u), xprec::lift_all(&v));
        let s0 = xprec::lower(shifted_permutation_sums(&ud, &vd, c, 0, 0, scale).unwrap()[0]);
        assert!(rel_diff(a, s0) < 1e-15);
    }

    #[test]
    fn routes_agree_with_determinant() {
        let c = Coupling::new(0.85).unwrap();
        let k = tw(-0.7, 0.4);
        let u = reals(&[0.31, -1.22, 1.47, -0.05]);
        let v = reals(&[1.05, -0.44, 0.12, -1.71]);
        let d = mepno_det(&u, &v, c, k).unwrap().value;
        for route in [Route::A, Route::B, Route::C] {
            let x = mepno(route, &u, &v, c, k).unwrap().value;
            assert!(rel_diff(x, d) < 1e-9, "{route}");
        }
        let regrouped = mepno_route_a_regrouped(&u, &v, c, k).unwrap().value;
        let direct = mepno_route_a(&u, &v, c, k).unwrap().value;
        assert!(rel_diff(regrouped, direct) < 1e-12);
    }

    #[test]
    fn route_b_null_at_unit_kappa() {
        let c = Coupling::new(1.2).unwrap();
        let (u, v) = (reals(&[0.3, -0.8, 1.4]), reals(&[1.1, 0.25, -1.5]));
        let b = mepno_route_b(&u, &v, c, tw(1.0, 0.0)).unwrap().value;
        assert!(b.norm() <= 1e-8 * null_scale(&u, &v, c).unwrap());
    }

    #[test]
    fn route_c_kappa_zero_is_single_k() {
        let c = Coupling::new(0.7).unwrap();
        let (u, v) = (reals(&[0.3, -0.8, 1.4]), reals(&[1.1, 0.25, -1.5]));
        let val = mepno_route_c(&u, &v, c, tw(0.0, 0.0)).unwrap().value;
        assert!(rel_diff(val, ik_det(&v, &u, c).unwrap()) < 1e-15);
    }

    #[test]
    fn route_size_limits() {
        let c = Coupling::new(1.0).unwrap();
        let six: Vec<C64> = (0..6).map(|i| cx(i as f64 * 0.7, 0.0)).collect();
        let other: Vec<C64> = (0..6).map(|i| cx(i as f64 * 0.7 + 0.3, 0.0)).collect();
        let k = tw(0.5, 0.0);
        assert!(matches!(
            mepno_route_a(&six, &other, c, k),
            Err(Error::SizeLimit { .. })
        ));
        assert!(matches!(
            mepno_route_b(&[], &[], c, k),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn residue_probe_single_particle_is_ic() {
        let c = Coupling::new(0.9).unwrap();
        let (a, b) = residue_probe(&reals(&[0.4]), &reals(&[-1.1]), 1e-5, c).unwrap();
        assert!(rel_diff(a, c.ic()) < 1e-9 && rel_diff(b, c.ic()) < 1e-9);
    }
}
