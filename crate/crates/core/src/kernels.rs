//! Rational kernels, set-valued products, shifted sets, and the combinatorial
//! substrate (permutations acting on ordered sets, normal-ordered
//! bipartitions) shared by every other module.
//!
//! Conventions:
//!
//! * `f(u,v) = 1 + ic/(u-v)`, `g(u,v) = ic/(u-v)`, `h(u,v) = (u-v+ic)/(ic)`,
//!   `t(u,v) = g(u,v)/h(u,v)`.
//! * A permutation `P` acts on an ordered set by moving element `i` to
//!   position `P(i)`, so element `i` of `P̄ᾱ` is `α_{P⁻¹(i)}`. With this action
//!   `Q̄(P̄ᾱ) = (QP)‾ᾱ` where `(QP)(i) = Q(P(i))`.
//! * Indices are zero-based in code; [`Permutation`]'s `Display` is one-based.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Deref, Mul};

use num_traits::Zero;

use crate::{Error, Result, C64};

/// Relative threshold below which a guarded denominator is treated as zero.
pub const GUARD_RELATIVE: f64 = 1e-10;

/// Largest `n` accepted by [`enumerate_permutations`].
pub const MAX_PERMUTATION_SIZE: usize = 10;

/// Interaction strength `c` of the δ-Bose gas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling(f64);

impl Coupling {
    pub fn new(c: f64) -> Result<Self> {
        if !c.is_finite() || c == 0.0 {
            return Err(Error::InvalidParameter(
                "coupling must be finite and non-zero",
            ));
        }
        Ok(Self(c))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `ic`, the imaginary unit times the coupling.
    pub fn ic(self) -> C64 {
        C64::new(0.0, self.0)
    }
}

/// Which rational kernel to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelKind {
    F,
    G,
    H,
    T,
}

/// Index-pair selection for [`set_product`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairOrder {
    /// Every pair `(i, j)`.
    All,
    /// Pairs with `i < j`; both sets must have the same length.
    Less,
    /// Pairs with `i > j`; both sets must have the same length.
    Greater,
}

/// `max(1, |c|, |z| for z in values)`, the magnitude the guard is relative to.
pub fn guard_scale<'a>(c: Coupling, sets: impl IntoIterator<Item = &'a [C64]>) -> f64 {
    sets.into_iter()
        .flat_map(|s| s.iter())
        .fold(1f64.max(c.value().abs()), |acc, z| acc.max(z.norm()))
}

pub(crate) fn check_denominator(
    what: &'static str,
    denom: C64,
    scale: f64,
    relative: f64,
) -> Result<()> {
    let threshold = relative * scale;
    let magnitude = denom.norm();
    if magnitude < threshold || !magnitude.is_finite() {
        return Err(Error::SingularArgument {
            what,
            magnitude,
            threshold,
        });
    }
    Ok(())
}

/// Evaluates one of the rational kernels at `(u, v)`.
///
/// Denominators are guarded relative to `max(1, |c|, |u|, |v|)`.
pub fn kernel(kind: KernelKind, u: C64, v: C64, c: Coupling) -> Result<C64> {
    let ic = c.ic();
    let d = u - v;
    let scale = 1f64.max(c.value().abs()).max(u.norm()).max(v.norm());
    match kind {
        KernelKind::F => {
            check_denominator("u - v", d, scale, GUARD_RELATIVE)?;
            Ok(1.0 + ic / d)
        }
        KernelKind::G => {
            check_denominator("u - v", d, scale, GUARD_RELATIVE)?;
            Ok(ic / d)
        }
        KernelKind::H => Ok((d + ic) / ic),
        KernelKind::T => {
            check_denominator("u - v", d, scale, GUARD_RELATIVE)?;
            check_denominator("u - v + ic", d + ic, scale, GUARD_RELATIVE)?;
            Ok(ic * ic / (d * (d + ic)))
        }
    }
}

#[inline]
pub fn f(u: C64, v: C64, c: Coupling) -> Result<C64> {
    kernel(KernelKind::F, u, v, c)
}

#[inline]
pub fn g(u: C64, v: C64, c: Coupling) -> Result<C64> {
    kernel(KernelKind::G, u, v, c)
}

#[inline]
pub fn h(u: C64, v: C64, c: Coupling) -> Result<C64> {
    kernel(KernelKind::H, u, v, c)
}

#[inline]
pub fn t(u: C64, v: C64, c: Coupling) -> Result<C64> {
    kernel(KernelKind::T, u, v, c)
}

/// Product of `kernel(kind, αᵢ, βⱼ)` over the index pairs selected by `order`.
/// An empty selection yields 1.
pub fn set_product(
    kind: KernelKind,
    alpha: &[C64],
    beta: &[C64],
    order: PairOrder,
    c: Coupling,
) -> Result<C64> {
    if order != PairOrder::All && alpha.len() != beta.len() {
        return Err(Error::LengthMismatch {
            left: alpha.len(),
            right: beta.len(),
        });
    }
    let mut prod = C64::new(1.0, 0.0);
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

/// `F(ū) = ∏_{i<j} f(uᵢ, uⱼ)`, the Bethe amplitude of the ordering `ū`.
pub fn big_f(u: &[C64], c: Coupling) -> Result<C64> {
    set_product(KernelKind::F, u, u, PairOrder::Less, c)
}

/// Which of the two shifted-set constructions to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftSide {
    /// `{x̄]ⁿ`: element `i ≤ n` is `Σ_{j=i}^{n} xⱼ`, element `i > n` is
    /// `Σ_{j=n+1}^{i} xⱼ` (one-based).
    Position,
    /// `[ū}ⁿ`: element `i ≤ n` is `Σ_{j=1}^{i} uⱼ`, element `i > n` is
    /// `Σ_{j=i}^{M} uⱼ` (one-based).
    Rapidity,
}

/// Builds the shifted set `{x̄]ⁿ` or `[ū}ⁿ`.
///
/// The two constructions are adjoint: `({x̄]ⁿ, ū) = (x̄, [ū}ⁿ)`.
pub fn shifted_set<T>(values: &[T], n: usize, side: ShiftSide) -> Result<Vec<T>>
where
    T: Copy + Zero + Add<Output = T>,
{
    let len = values.len();
    if n > len {
        return Err(Error::IndexError { index: n, max: len });
    }
    let mut out = Vec::with_capacity(len);
    match side {
        ShiftSide::Position => {
            // Suffix sums inside the first block, prefix sums inside the second.
            let mut head = Vec::with_capacity(n);
            let mut acc = T::zero();
            for &x in values[..n].iter().rev() {
                acc = acc + x;
                head.push(acc);
            }
            out.extend(head.into_iter().rev());
            let mut acc = T::zero();
            for &x in &values[n..] {
                acc = acc + x;
                out.push(acc);
            }
        }
        ShiftSide::Rapidity => {
            let mut acc = T::zero();
            for &u in &values[..n] {
                acc = acc + u;
                out.push(acc);
            }
            let mut tail = Vec::with_capacity(len - n);
            let mut acc = T::zero();
            for &u in values[n..].iter().rev() {
                acc = acc + u;
                tail.push(acc);
            }
            out.extend(tail.into_iter().rev());
        }
    }
    Ok(out)
}

/// `(x̄, ū) = Σᵢ xᵢ uᵢ`.
pub fn set_inner<A, B>(x: &[A], u: &[B]) -> Result<B>
where
    A: Copy,
    B: Copy + Zero + Add<Output = B> + Mul<A, Output = B>,
{
    if x.len() != u.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: u.len(),
        });
    }
    Ok(x.iter()
        .zip(u)
        .fold(B::zero(), |acc, (&xi, &ui)| acc + ui * xi))
}

/// An ordered set of pairwise-distinct complex rapidities.
#[derive(Debug, Clone, PartialEq)]
pub struct RapiditySet(Vec<C64>);

impl RapiditySet {
    /// Validates finiteness, non-emptiness and pairwise distinctness
    /// (relative to [`GUARD_RELATIVE`] times `max(1, |uᵢ|)`).
    pub fn new(values: Vec<C64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParameter("rapidity set must be non-empty"));
        }
        if values
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidParameter("rapidities must be finite"));
        }
        let scale = values.iter().fold(1f64, |acc, z| acc.max(z.norm()));
        for (i, &a) in values.iter().enumerate() {
            for &b in &values[i + 1..] {
                check_denominator("coincident rapidities", a - b, scale, GUARD_RELATIVE)?;
            }
        }
        Ok(Self(values))
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.0
    }

    pub fn is_real(&self) -> bool {
        self.0.iter().all(|z| z.im == 0.0)
    }

    pub fn sum(&self) -> C64 {
        self.0.iter().sum()
    }
}

impl Deref for RapiditySet {
    type Target = [C64];

    fn deref(&self) -> &[C64] {
        &self.0
    }
}

/// Ordered real coordinates `x̄`.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionSet(Vec<f64>);

impl PositionSet {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("positions must be finite"));
        }
        Ok(Self(values))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] < w[1])
    }
}

impl Deref for PositionSet {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// A bijection of `{0, …, n-1}` stored as its image list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// `images[i]` is the image of `i` (zero-based).
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = alloc::vec![false; n];
        for &p in &images {
            if p >= n {
                return Err(Error::IndexError {
                    index: p,
                    max: n.saturating_sub(1),
                });
            }
            if seen[p] {
                return Err(Error::InvalidParameter("image list is not a bijection"));
            }
            seen[p] = true;
        }
        Ok(Self { images })
    }

    /// Builds a permutation from one-based images, as written in cycle tables.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::InvalidParameter("one-based images start at 1"));
        }
        Self::new(images.iter().map(|&p| p - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    /// The adjacent transposition exchanging `j` and `j + 1`.
    pub fn transposition(n: usize, j: usize) -> Result<Self> {
        if j + 1 >= n {
            return Err(Error::IndexError {
                index: j,
                max: n.saturating_sub(2),
            });
        }
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(j, j + 1);
        Ok(Self { images })
    }

    /// The mirror permutation `T(i) = n - 1 - i`.
    pub fn mirror(n: usize) -> Self {
        Self {
            images: (0..n).rev().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn inverse(&self) -> Self {
        let mut images = alloc::vec![0; self.len()];
        for (i, &p) in self.images.iter().enumerate() {
            images[p] = i;
        }
        Self { images }
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(Self {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        })
    }

    /// `P̄ᾱ`: element `i` of the result is `α_{P⁻¹(i)}`.
    pub fn apply<T: Clone>(&self, alpha: &[T]) -> Result<Vec<T>> {
        if alpha.len() != self.len() {
            return Err(Error::LengthMismatch {
                left: self.len(),
                right: alpha.len(),
            });
        }
        let inv = self.inverse();
        Ok(inv.images.iter().map(|&i| alpha[i].clone()).collect())
    }

    /// Sign of the permutation.
    pub fn parity(&self) -> i32 {
        let mut seen = alloc::vec![false; self.len()];
        let mut sign = 1;
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
                len += 1;
            }
            if len % 2 == 0 {
                sign = -sign;
            }
        }
        sign
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, p) in self.images.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", p + 1)?;
        }
        f.write_str("]")
    }
}

/// `apply_permutation` in free-function form.
pub fn apply_permutation<T: Clone>(p: &Permutation, alpha: &[T]) -> Result<Vec<T>> {
    p.apply(alpha)
}

/// Lexicographic stream over `S_n`.
#[derive(Debug, Clone)]
pub struct Permutations {
    current: Option<Vec<usize>>,
}

impl Iterator for Permutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let images = self.current.take()?;
        let mut next = images.clone();
        if next_lexicographic(&mut next) {
            self.current = Some(next);
        }
        Some(Permutation { images })
    }
}

fn next_lexicographic(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// All `n!` permutations of `{0, …, n-1}` in lexicographic order of their
/// image lists. `n = 0` yields the single empty permutation.
pub fn enumerate_permutations(n: usize) -> Result<Permutations> {
    if n > MAX_PERMUTATION_SIZE {
        return Err(Error::SizeLimit {
            what: "permutation enumeration",
            size: n,
            limit: MAX_PERMUTATION_SIZE,
        });
    }
    Ok(Permutations {
        current: Some((0..n).collect()),
    })
}

/// A normal-ordered split of `{0, …, m-1}` into two strictly increasing
/// index lists.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bipartition {
    part_i: Vec<usize>,
    part_ii: Vec<usize>,
}

impl Bipartition {
    /// Builds the bipartition whose first part is `part_i` (strictly
    /// increasing, entries below `m`).
    pub fn from_part_i(m: usize, part_i: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = part_i.iter().find(|&&i| i >= m) {
            return Err(Error::IndexError {
                index: bad,
                max: m.saturating_sub(1),
            });
        }
        if part_i.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(
                "part I must be strictly increasing",
            ));
        }
        let mut mask = alloc::vec![false; m];
        for &i in &part_i {
            mask[i] = true;
        }
        let part_ii = (0..m).filter(|&i| !mask[i]).collect();
        Ok(Self { part_i, part_ii })
    }

    pub fn part_i(&self) -> &[usize] {
        &self.part_i
    }

    pub fn part_ii(&self) -> &[usize] {
        &self.part_ii
    }

    /// Total size `M = #I + #II`.
    pub fn size(&self) -> usize {
        self.part_i.len() + self.part_ii.len()
    }

    /// Splits `values` into `(values_I, values_II)`, each keeping the parent
    /// order.
    pub fn split<T: Clone>(&self, values: &[T]) -> Result<(Vec<T>, Vec<T>)> {
        if values.len() != self.size() {
            return Err(Error::LengthMismatch {
                left: self.size(),
                right: values.len(),
            });
        }
        Ok((
            self.part_i.iter().map(|&i| values[i].clone()).collect(),
            self.part_ii.iter().map(|&i| values[i].clone()).collect(),
        ))
    }

    /// `true` for indices in part I.
    pub fn mask(&self) -> Vec<bool> {
        let mut mask = alloc::vec![false; self.size()];
        for &i in &self.part_i {
            mask[i] = true;
        }
        mask
    }
}

/// Stream of the `binomial(m, k)` bipartitions with `#I = k`, in
/// lexicographic order of part I.
#[derive(Debug, Clone)]
pub struct Bipartitions {
    m: usize,
    current: Option<Vec<usize>>,
}

impl Iterator for Bipartitions {
    type Item = Bipartition;

    fn next(&mut self) -> Option<Bipartition> {
        let part_i = self.current.take()?;
        let k = part_i.len();
        let mut next = part_i.clone();
        // Advance the rightmost index that still has room.
        let mut i = k;
        while i > 0 {
            i -= 1;
            if next[i] < self.m - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        let mut mask = alloc::vec![false; self.m];
        for &i in &part_i {
            mask[i] = true;
        }
        let part_ii = (0..self.m).filter(|&i| !mask[i]).collect();
        Some(Bipartition { part_i, part_ii })
    }
}

pub fn enumerate_bipartitions(m: usize, k: usize) -> Result<Bipartitions> {
    if k > m {
        return Err(Error::IndexError { index: k, max: m });
    }
    Ok(Bipartitions {
        m,
        current: Some((0..k).collect()),
    })
}
