//! Dense complex determinants and the structured determinants built on the
//! rational kernels: Cauchy, Izergin-Korepin `K_n`, and the Slavnov-form
//! determinant for the MEPNO.

use alloc::vec::Vec;

use crate::kernels::{Coupling, KernelKind, PairOrder, GUARD_RELATIVE};
use crate::mepno::{MepnoValue, Route};
use crate::xprec::{self, Dd, ONE};
use crate::{Error, Result, C64};

/// Largest matrix dimension accepted by the structured determinants.
pub const MAX_DET_SIZE: usize = 64;

/// Square complex matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    entries: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(n: usize, entries: Vec<C64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "matrix dimension must be at least 1",
            ));
        }
        if entries.len() != n * n {
            return Err(Error::LengthMismatch {
                left: n * n,
                right: entries.len(),
            });
        }
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidParameter("matrix entries must be finite"));
        }
        Ok(Self { n, entries })
    }

    /// Builds the matrix from a fallible entry function.
    pub fn try_from_fn(
        n: usize,
        mut entry: impl FnMut(usize, usize) -> Result<C64>,
    ) -> Result<Self> {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(entry(i, j)?);
            }
        }
        Self::new(n, entries)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.entries[i * self.n + j]
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.n {
            self.entries.swap(a * self.n + j, b * self.n + j);
        }
    }
}

/// Determinant by Gaussian elimination with partial pivoting, carried out in
/// double-double arithmetic. A singular matrix yields zero.
pub fn det_complex(m: &ComplexMatrix) -> C64 {
    xprec::lower(xprec::det(m.n, xprec::lift_all(&m.entries)))
}

fn check_lengths(u: &[Dd], v: &[Dd]) -> Result<usize> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    if u.len() > MAX_DET_SIZE {
        return Err(Error::SizeLimit {
            what: "structured determinant",
            size: u.len(),
            limit: MAX_DET_SIZE,
        });
    }
    Ok(u.len())
}

fn dd_scale(c: Coupling, u: &[Dd], v: &[Dd]) -> f64 {
    u.iter()
        .chain(v)
        .fold(1f64.max(c.value().abs()), |acc, &z| acc.max(xprec::norm(z)))
}

fn check_distinct(what: &'static str, set: &[Dd], scale: f64) -> Result<()> {
    for (i, &a) in set.iter().enumerate() {
        for &b in &set[i + 1..] {
            xprec::guard(what, a - b, scale, GUARD_RELATIVE)?;
        }
    }
    Ok(())
}

fn cauchy_dd(u: &[Dd], v: &[Dd], c: Coupling) -> Result<Dd> {
    let n = check_lengths(u, v)?;
    if n == 0 {
        return Ok(ONE);
    }
    let scale = dd_scale(c, u, v);
    check_distinct("coincident u rapidities", u, scale)?;
    check_distinct("coincident v rapidities", v, scale)?;
    let ic = xprec::ic(c);
    let mut entries = Vec::with_capacity(n * n);
    for &a in u {
        for &b in v {
            let d = a - b + ic;
            xprec::guard("u - v + ic", d, scale, GUARD_RELATIVE)?;
            entries.push(xprec::div(ic, d));
        }
    }
    Ok(xprec::det(n, entries))
}

/// `det[h⁻¹(uᵢ, vⱼ)]` by elimination.
pub fn cauchy_det(u: &[C64], v: &[C64], c: Coupling) -> Result<C64> {
    cauchy_dd(&xprec::lift_all(u), &xprec::lift_all(v), c).map(xprec::lower)
}

/// Closed form of the Cauchy determinant:
/// `det[h⁻¹(uᵢ, vⱼ)] = 1 / (g^<(ū,ū) g^>(v̄,v̄) h(ū,v̄))`.
pub fn cauchy_det_factorized(u: &[C64], v: &[C64], c: Coupling) -> Result<C64> {
    let (u, v) = (xprec::lift_all(u), xprec::lift_all(v));
    let n = check_lengths(&u, &v)?;
    if n == 0 {
        return Ok(C64::new(1.0, 0.0));
    }
    let scale = dd_scale(c, &u, &v);
    let ic = xprec::ic(c);
    for &a in &u {
        for &b in &v {
            xprec::guard("u - v + ic", a - b + ic, scale, GUARD_RELATIVE)?;
        }
    }
    let prefactor = ordered_g_prefactor(&u, &v, c)?;
    let h_uv = xprec::set_product(KernelKind::H, &u, &v, PairOrder::All, c)?;
    Ok(xprec::lower(xprec::div(ONE, prefactor * h_uv)))
}

/// `g^<(ū,ū) g^>(v̄,v̄)`.
fn ordered_g_prefactor(u: &[Dd], v: &[Dd], c: Coupling) -> Result<Dd> {
    Ok(xprec::set_product(KernelKind::G, u, u, PairOrder::Less, c)?
        * xprec::set_product(KernelKind::G, v, v, PairOrder::Greater, c)?)
}

fn t_det(u: &[Dd], v: &[Dd], c: Coupling) -> Result<Dd> {
    let n = u.len();
    let mut entries = Vec::with_capacity(n * n);
    for &a in u {
        for &b in v {
            entries.push(xprec::kernel(KernelKind::T, a, b, c)?);
        }
    }
    Ok(xprec::det(n, entries))
}

/// `K_n` in double-double arithmetic, for the sums that cancel across many
/// such determinants.
pub(crate) fn ik_dd(u: &[Dd], v: &[Dd], c: Coupling) -> Result<Dd> {
    let n = check_lengths(u, v)?;
    if n == 0 {
        return Ok(ONE);
    }
    let t = t_det(u, v, c)?;
    Ok(xprec::div(t, cauchy_dd(u, v, c)?))
}

/// Izergin-Korepin determinant `K_n(ū|v̄) = det[t(uᵢ,vⱼ)] / det[h⁻¹(uᵢ,vⱼ)]`.
///
/// `K_0 = 1`. The function is symmetric under independent permutations of
/// `ū` and of `v̄`.
pub fn ik_det(u: &[C64], v: &[C64], c: Coupling) -> Result<C64> {
    ik_dd(&xprec::lift_all(u), &xprec::lift_all(v), c).map(xprec::lower)
}

/// `K_n` through its factorized prefactor:
/// `g^<(ū,ū) g^>(v̄,v̄) h(ū,v̄) det[t(uᵢ,vⱼ)]`.
pub fn ik_det_factorized(u: &[C64], v: &[C64], c: Coupling) -> Result<C64> {
    let (u, v) = (xprec::lift_all(u), xprec::lift_all(v));
    let n = check_lengths(&u, &v)?;
    if n == 0 {
        return Ok(C64::new(1.0, 0.0));
    }
    let t = t_det(&u, &v, c)?;
    let h_uv = xprec::set_product(KernelKind::H, &u, &v, PairOrder::All, c)?;
    Ok(xprec::lower(ordered_g_prefactor(&u, &v, c)? * h_uv * t))
}

/// Twist `κ` of the particle number operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwistParameter(C64);

impl TwistParameter {
    pub fn new(kappa: C64) -> Result<Self> {
        if !kappa.re.is_finite() || !kappa.im.is_finite() {
            return Err(Error::InvalidParameter("kappa must be finite"));
        }
        Ok(Self(kappa))
    }

    pub fn value(self) -> C64 {
        self.0
    }
}

/// Row dressing `h(vᵢ,ū)/h(ū,vᵢ) · h(v̄,vᵢ)/h(vᵢ,v̄)` of the Slavnov-form matrix.
fn dressing(vi: Dd, u: &[Dd], v: &[Dd], ic: Dd, scale: f64) -> Result<Dd> {
    let mut num = ONE;
    let mut den = ONE;
    for &uk in u {
        xprec::guard("u - v + ic", uk - vi + ic, scale, GUARD_RELATIVE)?;
        num *= vi - uk + ic;
        den *= uk - vi + ic;
    }
    for &vk in v {
        xprec::guard("v - v + ic", vi - vk + ic, scale, GUARD_RELATIVE)?;
        num *= vk - vi + ic;
        den *= vi - vk + ic;
    }
    Ok(xprec::div(num, den))
}

/// Slavnov-form determinant for the MEPNO (route D):
///
/// `det⁻¹[h⁻¹(uᵢ,vⱼ)] · det[t(vᵢ,uⱼ)·h(vᵢ,ū)/h(ū,vᵢ)·h(v̄,vᵢ)/h(vᵢ,v̄) + κ·t(uⱼ,vᵢ)]`.
pub fn mepno_det(u: &[C64], v: &[C64], c: Coupling, kappa: TwistParameter) -> Result<MepnoValue> {
    let (ud, vd) = (xprec::lift_all(u), xprec::lift_all(v));
    let m = check_lengths(&ud, &vd)?;
    if m == 0 {
        return Err(Error::InvalidParameter("MEPNO needs at least one particle"));
    }
    let scale = dd_scale(c, &ud, &vd);
    let ic = xprec::ic(c);
    let k = xprec::lift(kappa.value());
    let mut rows = Vec::with_capacity(m * m);
    for &vi in &vd {
        let d = dressing(vi, &ud, &vd, ic, scale)?;
        for &uj in &ud {
            rows.push(
                xprec::kernel(KernelKind::T, vi, uj, c)? * d
                    + k * xprec::kernel(KernelKind::T, uj, vi, c)?,
            );
        }
    }
    let slavnov = xprec::det(m, rows);
    let value = xprec::lower(xprec::div(slavnov, cauchy_dd(&ud, &vd, c)?));
    Ok(MepnoValue::new(
        value,
        Route::D,
        u,
        v,
        c.value(),
        kappa.value(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{self, Permutation};
    use alloc::vec;

    fn cx(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn reals(xs: &[f64]) -> Vec<C64> {
        xs.iter().map(|&x| cx(x, 0.0)).collect()
    }

    /// Laplace expansion along the first row, independent of elimination.
    fn cofactor_det(m: &[Vec<C64>]) -> C64 {
        let n = m.len();
        if n == 1 {
            return m[0][0];
        }
        let mut acc = cx(0.0, 0.0);
        for col in 0..n {
            let minor: Vec<Vec<C64>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(j, _)| j != col)
                        .map(|(_, &z)| z)
                        .collect()
                })
                .collect();
            let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
            acc += sign * m[0][col] * cofactor_det(&minor);
        }
        acc
    }

    #[test]
    fn det_small_examples() {
        let a = cx(0.3, -1.2);
        assert_eq!(det_complex(&ComplexMatrix::new(1, vec![a]).unwrap()), a);
        let m = ComplexMatrix::new(2, reals(&[1.0, 2.0, 3.0, 4.0])).unwrap();
        assert!((det_complex(&m) - cx(-2.0, 0.0)).norm() < 1e-15);
        let singular = ComplexMatrix::new(2, reals(&[1.0, 2.0, 2.0, 4.0])).unwrap();
        assert_eq!(det_complex(&singular), cx(0.0, 0.0));
    }

    #[test]
    fn det_matches_cofactor_expansion() {
        // Deterministic pseudo-random entries.
        let mut state = 0x2545_f491_4f6c_dd1du64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        for n in 1..=4 {
            for _ in 0..20 {
                let rows: Vec<Vec<C64>> = (0..n)
                    .map(|_| (0..n).map(|_| cx(next(), next())).collect())
                    .collect();
                let flat = rows.iter().flatten().copied().collect();
                let lu = det_complex(&ComplexMatrix::new(n, flat).unwrap());
                let oracle = cofactor_det(&rows);
                assert!(
                    crate::rel_diff(lu, oracle) <= 1e-13,
                    "n={n}: {lu} vs {oracle}"
                );
            }
        }
    }

    #[test]
    fn matrix_validation() {
        assert!(ComplexMatrix::new(0, vec![]).is_err());
        assert!(ComplexMatrix::new(2, reals(&[1.0])).is_err());
        assert!(ComplexMatrix::new(1, vec![cx(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn cauchy_examples() {
        let c = Coupling::new(0.8).unwrap();
        let u = reals(&[0.4]);
        let v = reals(&[-0.9]);
        let expected = 1.0 / kernels::h(u[0], v[0], c).unwrap();
        assert!(crate::rel_diff(cauchy_det(&u, &v, c).unwrap(), expected) < 1e-15);

        let u = reals(&[0.4, 1.3]);
        let v = reals(&[-0.9, 0.1]);
        let e = |i: usize, j: usize| 1.0 / kernels::h(u[i], v[j], c).unwrap();
        let direct = e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0);
        assert!(crate::rel_diff(cauchy_det(&u, &v, c).unwrap(), direct) <= 1e-12);
        assert!(crate::rel_diff(cauchy_det_factorized(&u, &v, c).unwrap(), direct) <= 1e-12);

        let swapped = reals(&[1.3, 0.4]);
        assert!(
            crate::rel_diff(cauchy_det(&swapped, &v, c).unwrap(), -direct) <= 1e-12,
            "row exchange flips sign"
        );
    }

    #[test]
    fn ik_single_particle_is_g() {
        let c = Coupling::new(1.7).unwrap();
        let (u, v) = (cx(0.25, 0.0), cx(-1.5, 0.0));
        let k1 = ik_det(&[u], &[v], c).unwrap();
        assert!(crate::rel_diff(k1, c.ic() / (u - v)) < 1e-15);
        assert_eq!(ik_det(&[], &[], c).unwrap(), cx(1.0, 0.0));
    }

    #[test]
    fn ik_two_forms_and_symmetries() {
        let c = Coupling::new(0.9).unwrap();
        let u = reals(&[0.31, -1.22, 1.71, 0.05]);
        let v = reals(&[-0.48, 0.93, -1.87, 1.24]);
        let k = ik_det(&u, &v, c).unwrap();
        assert!(crate::rel_diff(k, ik_det_factorized(&u, &v, c).unwrap()) <= 1e-10);

        let p = Permutation::new(vec![2, 0, 3, 1]).unwrap();
        let q = Permutation::new(vec![1, 3, 0, 2]).unwrap();
        let kp = ik_det(&p.apply(&u).unwrap(), &q.apply(&v).unwrap(), c).unwrap();
        assert!(crate::rel_diff(k, kp) <= 1e-10);

        let exchanged = ik_det(&v, &u, c).unwrap();
        assert!(crate::rel_diff(k.conj(), exchanged) <= 1e-10);
    }

    #[test]
    fn ik_guards_poles() {
        let c = Coupling::new(1.0).unwrap();
        let u = reals(&[0.2, 0.7]);
        assert!(matches!(
            ik_det(&u, &reals(&[0.2, -0.4]), c),
            Err(Error::SingularArgument { .. })
        ));
        assert!(matches!(
            ik_det(&u, &reals(&[0.3, 0.3]), c),
            Err(Error::SingularArgument { .. })
        ));
        let shifted = [u[0] + c.ic(), cx(-0.4, 0.0)];
        assert!(matches!(
            ik_det(&u, &shifted, c),
            Err(Error::SingularArgument { .. })
        ));
        assert!(matches!(
            ik_det(&u, &reals(&[0.1]), c),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn mepno_single_particle_closed_form() {
        let c = Coupling::new(1.4).unwrap();
        let (u, v) = (cx(0.6, 0.0), cx(-0.35, 0.0));
        for kappa in [cx(0.0, 0.0), cx(1.0, 0.0), cx(-0.7, 2.1)] {
            let s = mepno_det(&[u], &[v], c, TwistParameter::new(kappa).unwrap()).unwrap();
            let expected = (kappa - 1.0) * c.ic() / (u - v);
            assert!((s.value - expected).norm() <= 1e-14 * expected.norm().max(1.0));
            assert_eq!(s.route, Route::D);
            assert_eq!(s.inputs.kappa, kappa);
        }
    }

    #[test]
    fn mepno_vanishes_at_unit_twist() {
        let c = Coupling::new(1.1).unwrap();
        let u = reals(&[0.3, -1.4, 1.2]);
        let v = reals(&[-0.2, 0.8, 1.9]);
        let one = TwistParameter::new(cx(1.0, 0.0)).unwrap();
        let zero = TwistParameter::new(cx(0.0, 0.0)).unwrap();
        let scale = mepno_det(&u, &v, c, zero).unwrap().value.norm().max(1.0);
        assert!(mepno_det(&u, &v, c, one).unwrap().value.norm() <= 1e-8 * scale);
    }

    #[test]
    fn mepno_size_limit() {
        let c = Coupling::new(1.0).unwrap();
        let u: Vec<C64> = (0..65).map(|i| cx(i as f64, 0.0)).collect();
        let v: Vec<C64> = (0..65).map(|i| cx(i as f64 + 0.5, 0.0)).collect();
        let kappa = TwistParameter::new(cx(0.5, 0.0)).unwrap();
        assert!(matches!(
            mepno_det(&u, &v, c, kappa),
            Err(Error::SizeLimit { .. })
        ));
    }
}
