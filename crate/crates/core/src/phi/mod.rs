//! `phi_p(S)`: the expected number of open boundary edges of `S` whose inner
//! endpoint is joined to the root by an open path inside `S`.

mod exact;
mod expected;
mod mc;
mod witness;

pub use exact::{canopy_expected_phi_closed, phi_bruteforce, phi_bruteforce_exact, phi_tree, phi_tree_exact};
pub use expected::{
    expected_phi, expected_phi_grid, expected_phi_radii, phi_of_set, ptilde_a_bisect, MethodChoice, PhiOptions,
    PhiTable,
};
pub use mc::phi_monte_carlo;
pub use witness::{phi_decay_diagnostic, witness_search, DecayDiagnostic, Witness};

use serde::{Deserialize, Serialize};

/// How a phi value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhiMethod {
    Brute,
    Tree,
    MonteCarlo,
    CanopySeries,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhiResult {
    pub value: f64,
    /// Standard error; zero for the exact methods.
    pub se: f64,
    /// 95% interval for Monte Carlo values.
    pub ci: Option<(f64, f64)>,
    pub p: f64,
    pub method: PhiMethod,
    pub set_size: usize,
    pub boundary_edges: usize,
}

impl PhiResult {
    pub(crate) fn exact(value: f64, p: f64, method: PhiMethod, set_size: usize, boundary_edges: usize) -> Self {
        Self { value, se: 0.0, ci: None, p, method, set_size, boundary_edges }
    }

    /// Upper end of the interval, or the value itself when exact.
    pub fn upper(&self) -> f64 {
        self.ci.map_or(self.value, |c| c.1)
    }
}
