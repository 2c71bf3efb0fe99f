//! Double-double complex evaluation of the kernels, set products and dense
//! determinants.
//!
//! Rapidities enter as exact `f64` values, so differences like `u - v + ic`
//! are formed without rounding here. The permutation and partition sums
//! cancel by many orders of magnitude once `M` reaches 6 to 8, and the
//! Cauchy-like matrices are badly conditioned at the same sizes; both are
//! carried out in this type and rounded to `f64` once at the end.
//!
//! Singularity guards are applied to the rounded denominators with the same
//! thresholds as the `f64` kernels.

use alloc::vec::Vec;

use num_complex::Complex;
use twofloat::TwoFloat;

use crate::kernels::{check_denominator, Coupling, KernelKind, PairOrder, GUARD_RELATIVE};
use crate::{Error, Result, C64};

pub(crate) type Dd = Complex<TwoFloat>;

pub(crate) const ONE: Dd = Complex::new(TwoFloat::from_f64(1.0), TwoFloat::from_f64(0.0));
pub(crate) const ZERO: Dd = Complex::new(TwoFloat::from_f64(0.0), TwoFloat::from_f64(0.0));

#[inline]
pub(crate) fn lift(z: C64) -> Dd {
    Complex::new(TwoFloat::from(z.re), TwoFloat::from(z.im))
}

#[inline]
pub(crate) fn lower(z: Dd) -> C64 {
    C64::new(f64::from(z.re), f64::from(z.im))
}

pub(crate) fn lift_all(zs: &[C64]) -> Vec<Dd> {
    zs.iter().map(|&z| lift(z)).collect()
}

#[inline]
pub(crate) fn ic(c: Coupling) -> Dd {
    lift(c.ic())
}

#[inline]
pub(crate) fn norm(z: Dd) -> f64 {
    lower(z).norm()
}

// The crate's `TwoFloat / TwoFloat` drops the low word of the quotient (its
// reciprocal step is not fused), so division goes through one correction
// step that only uses multiplication and division by an `f64`.
fn div_real(x: TwoFloat, y: TwoFloat) -> TwoFloat {
    let q0 = TwoFloat::from(x.hi() / y.hi());
    let r = x - y * q0;
    q0 + r / y.hi()
}

/// `a / b`. Always use this instead of the `/` operator on [`Dd`].
pub(crate) fn div(a: Dd, b: Dd) -> Dd {
    let n = b.norm_sqr();
    let p = a * b.conj();
    Complex::new(div_real(p.re, n), div_real(p.im, n))
}

pub(crate) fn powi(z: Dd, n: usize) -> Dd {
    (0..n).fold(ONE, |acc, _| acc * z)
}

pub(crate) fn guard(what: &'static str, denom: Dd, scale: f64, relative: f64) -> Result<()> {
    check_denominator(what, lower(denom), scale, relative)
}

/// Mirror of [`crate::kernels::kernel`] in extended precision.
pub(crate) fn kernel(kind: KernelKind, u: Dd, v: Dd, c: Coupling) -> Result<Dd> {
    let ic = ic(c);
    let d = u - v;
    let scale = 1f64.max(c.value().abs()).max(norm(u)).max(norm(v));
    match kind {
        KernelKind::F => {
            guard("u - v", d, scale, GUARD_RELATIVE)?;
            Ok(ONE + div(ic, d))
        }
        KernelKind::G => {
            guard("u - v", d, scale, GUARD_RELATIVE)?;
            Ok(div(ic, d))
        }
        KernelKind::H => Ok(div(d + ic, ic)),
        KernelKind::T => {
            guard("u - v", d, scale, GUARD_RELATIVE)?;
            guard("u - v + ic", d + ic, scale, GUARD_RELATIVE)?;
            Ok(div(ic * ic, d * (d + ic)))
        }
    }
}

pub(crate) fn set_product(
    kind: KernelKind,
    alpha: &[Dd],
    beta: &[Dd],
    order: PairOrder,
    c: Coupling,
) -> Result<Dd> {
    if order != PairOrder::All && alpha.len() != beta.len() {
        return Err(Error::LengthMismatch {
            left: alpha.len(),
            right: beta.len(),
        });
    }
    let mut prod = ONE;
    for (i, &a) in alpha.iter().enumerate() {
        for (j, &b) in beta.iter().enumerate() {
            let selected = match order {
                PairOrder::All => true,
                PairOrder::Less => i < j,
                PairOrder::Greater => i > j,
            };
            if selected {
                prod *= kernel(kind, a, b, c)?;
            }
        }
    }
    Ok(prod)
}

/// `F(ū) = ∏_{i<j} f(uᵢ, uⱼ)`.
pub(crate) fn big_f(u: &[Dd], c: Coupling) -> Result<Dd> {
    set_product(KernelKind::F, u, u, PairOrder::Less, c)
}

// Cheap pivot magnitude taken from the leading words only.
#[inline]
fn pivot_size(z: Dd) -> f64 {
    z.re.hi().abs() + z.im.hi().abs()
}

/// Determinant of the row-major `n × n` matrix `a` by elimination with
/// partial pivoting. A singular matrix yields zero.
pub(crate) fn det(n: usize, mut a: Vec<Dd>) -> Dd {
    debug_assert_eq!(a.len(), n * n);
    let mut det = ONE;
    for k in 0..n {
        let (pivot_row, pivot_abs) =
            (k..n)
                .map(|i| (i, pivot_size(a[i * n + k])))
                .fold(
                    (k, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
        if pivot_abs == 0.0 {
            return ZERO;
        }
        if pivot_row != k {
            for j in 0..n {
                a.swap(k * n + j, pivot_row * n + j);
            }
            det = -det;
        }
        let pivot = a[k * n + k];
        det *= pivot;
        let inv = div(ONE, pivot);
        for i in k + 1..n {
            let factor = a[i * n + k] * inv;
            for j in k + 1..n {
                let upper = a[k * n + j];
                a[i * n + j] -= factor * upper;
            }
        }
    }
    det
}
