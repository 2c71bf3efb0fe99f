//! Result type shared by every MEPNO evaluation route.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::{Error, C64};

/// Which evaluation produced a [`MepnoValue`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Route {
    /// Double permutation sum over eigen-domains.
    A,
    /// Bipartition pairs with one Izergin-Korepin determinant per part.
    B,
    /// Single bipartition sum with shifted arguments in one `K_M`.
    C,
    /// Slavnov-form determinant.
    D,
    /// Damped position-space quadrature.
    Integral,
}

impl Route {
    pub const ALL: [Route; 5] = [Route::A, Route::B, Route::C, Route::D, Route::Integral];

    pub fn as_str(self) -> &'static str {
        match self {
            Route::A => "A",
            Route::B => "B",
            Route::C => "C",
            Route::D => "D",
            Route::Integral => "integral",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "A" | "a" => Ok(Route::A),
            "B" | "b" => Ok(Route::B),
            "C" | "c" => Ok(Route::C),
            "D" | "d" => Ok(Route::D),
            "integral" => Ok(Route::Integral),
            _ => Err(Error::InvalidParameter(
                "route must be one of A, B, C, D, integral",
            )),
        }
    }
}

/// The configuration a MEPNO value was evaluated at.
#[derive(Debug, Clone, PartialEq)]
pub struct MepnoInputs {
    pub u: Vec<C64>,
    pub v: Vec<C64>,
    pub c: f64,
    pub kappa: C64,
}

/// `S^M_κ(ū|v̄) = ⟨ψ(ū)|O_κ|ψ(v̄)⟩` tagged with its route and inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct MepnoValue {
    pub value: C64,
    pub route: Route,
    pub inputs: MepnoInputs,
}

impl MepnoValue {
    pub(crate) fn new(value: C64, route: Route, u: &[C64], v: &[C64], c: f64, kappa: C64) -> Self {
        Self {
            value,
            route,
            inputs: MepnoInputs {
                u: u.to_vec(),
                v: v.to_vec(),
                c,
                kappa,
            },
        }
    }
}
