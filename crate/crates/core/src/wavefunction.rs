//! Coordinate Bethe-ansatz wavefunctions of the δ-Bose gas.
//!
//! On the fundamental domain `x₁ < … < x_M`
//!
//! ```text
//! ψ(x̄) = Σ_{P ∈ S_M} F(P̄ū) · exp(i (x̄, P̄ū))
//! ```
//!
//! and elsewhere the value follows from bosonic symmetry.

use alloc::vec::Vec;

use crate::kernels::{
    self, enumerate_permutations, Coupling, Permutation, PositionSet, RapiditySet,
};
use crate::{Error, Result, C64};

/// Largest particle number for the `M!`-term plane-wave sums.
pub const MAX_WAVEFUNCTION_SIZE: usize = 7;

/// A Bethe eigenstate `|ψ(ū)⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct BetheState {
    rapidities: RapiditySet,
    coupling: Coupling,
}

impl BetheState {
    pub fn new(rapidities: RapiditySet, coupling: Coupling) -> Self {
        Self {
            rapidities,
            coupling,
        }
    }

    pub fn rapidities(&self) -> &RapiditySet {
        &self.rapidities
    }

    pub fn coupling(&self) -> Coupling {
        self.coupling
    }

    pub fn particle_number(&self) -> usize {
        self.rapidities.len()
    }

    /// The global factor `c^{M/2}` carried by the state. It is not applied by
    /// the pointwise evaluators below.
    pub fn normalization(&self) -> C64 {
        let m = self.particle_number() as f64;
        C64::new(self.coupling.value(), 0.0).powf(m / 2.0)
    }

    /// Precomputed `(P̄ū, F(P̄ū))` for every `P`, in lexicographic order.
    fn plane_waves(&self) -> Result<Vec<(Permutation, Vec<C64>, C64)>> {
        let m = self.particle_number();
        if m > MAX_WAVEFUNCTION_SIZE {
            return Err(Error::SizeLimit {
                what: "wavefunction",
                size: m,
                limit: MAX_WAVEFUNCTION_SIZE,
            });
        }
        enumerate_permutations(m)?
            .map(|p| {
                let pu = p.apply(&self.rapidities)?;
                let amp = kernels::big_f(&pu, self.coupling)?;
                Ok((p, pu, amp))
            })
            .collect()
    }
}

fn phase(x: &[f64], k: &[C64]) -> C64 {
    let arg: C64 = x.iter().zip(k).map(|(&xi, &ki)| ki * xi).sum();
    (C64::i() * arg).exp()
}

fn check_len(x: &PositionSet, state: &BetheState) -> Result<()> {
    if x.len() != state.particle_number() {
        return Err(Error::LengthMismatch {
            left: state.particle_number(),
            right: x.len(),
        });
    }
    Ok(())
}

/// `ψ(x̄)` on the fundamental domain; `x̄` must be strictly increasing.
pub fn psi_fundamental(x: &PositionSet, state: &BetheState) -> Result<C64> {
    check_len(x, state)?;
    if !x.is_strictly_increasing() {
        return Err(Error::DomainError("positions must be strictly increasing"));
    }
    Ok(state
        .plane_waves()?
        .iter()
        .map(|(_, pu, amp)| amp * phase(x, pu))
        .sum())
}

/// `ψ(x̄)` for any ordering of distinct coordinates.
///
/// With `Q` the permutation for which `x̄ ∈ D_Q` (that is, `x_{Q(0)} < x_{Q(1)} < …`),
/// the value is `Σ_P F(Q̄⁻¹P̄ū) exp(i (x̄, P̄ū))`.
pub fn psi_symmetric(x: &PositionSet, state: &BetheState) -> Result<C64> {
    check_len(x, state)?;
    let m = x.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    if order.windows(2).any(|w| x[w[0]] == x[w[1]]) {
        return Err(Error::DomainError("coordinates must be pairwise distinct"));
    }
    let q_inv = Permutation::new(order)?.inverse();
    let mut psi = C64::new(0.0, 0.0);
    for (p, pu, _) in state.plane_waves()? {
        let amp_order = q_inv.compose(&p)?.apply(state.rapidities())?;
        psi += kernels::big_f(&amp_order, state.coupling())? * phase(x, &pu);
    }
    Ok(psi)
}

/// `[∂ψ/∂x_{i+1} − ∂ψ/∂x_i]_{0⁺} − c ψ` at a point where `x_i = x_{i+1}`
/// (zero-based `i`) and all other coordinates are strictly ordered.
///
/// Derivatives are taken term by term on the fundamental-domain plane-wave
/// sum, so the result is exact up to rounding. Returns `(residual, c ψ)`.
pub fn cusp_residual(x: &PositionSet, state: &BetheState, i: usize) -> Result<(C64, C64)> {
    check_len(x, state)?;
    let m = x.len();
    if i + 1 >= m {
        return Err(Error::DomainError("coincident pair index out of range"));
    }
    if x[i] != x[i + 1] {
        return Err(Error::DomainError("x_i and x_{i+1} must coincide"));
    }
    let ordered_elsewhere = (0..m - 1).filter(|&k| k != i).all(|k| x[k] < x[k + 1]);
    if !ordered_elsewhere {
        return Err(Error::DomainError(
            "positions must be strictly ordered away from the coincidence",
        ));
    }
    let c = state.coupling().value();
    let mut jump = C64::new(0.0, 0.0);
    let mut psi = C64::new(0.0, 0.0);
    for (_, pu, amp) in state.plane_waves()? {
        let term = amp * phase(x, &pu);
        jump += C64::i() * (pu[i + 1] - pu[i]) * term;
        psi += term;
    }
    Ok((jump - c * psi, c * psi))
}

/// `E = Σᵢ uᵢ²`.
pub fn energy(state: &BetheState) -> C64 {
    state.rapidities().iter().map(|u| u * u).sum()
}
