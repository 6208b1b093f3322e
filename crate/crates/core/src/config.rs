use serde::{Deserialize, Serialize};

/// Numerical tolerances used throughout the crate.
///
/// Double precision leaves several orders of headroom at desk scale
/// (class counts up to 64, orders up to 1000), so these are not tight.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Tolerances {
    /// Orthogonality residuals of character tables.
    pub orth: f64,
    /// Integer rounding of dimensions and tensor multiplicities.
    pub round: f64,
    /// Coefficient sign tests on virtual characters.
    pub coeff: f64,
    /// Pointwise character-value tests.
    pub val: f64,
    /// Kernel membership, relative to |phi(1)|.
    pub ker_rel: f64,
    /// Cross-route comparisons (Frobenius vs oracle, T_phi routes, ...).
    pub cmp: f64,
    /// Linear feasibility constraint of the minimization problem.
    pub feas: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            orth: 1e-8,
            round: 1e-6,
            coeff: 1e-9,
            val: 1e-8,
            ker_rel: 1e-6,
            cmp: 1e-9,
            feas: 1e-8,
        }
    }
}

/// Run-wide configuration: budgets, tolerances, seeding.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    /// Maximum number of elements a group closure may reach.
    pub order_cap: usize,
    /// Maximum group order for m^2 brute-force pair iteration.
    pub pair_budget: usize,
    /// Maximum class count for the eigensolver.
    pub class_budget: usize,
    /// Random-combination retries before the solver gives up.
    pub eigen_retries: usize,
    /// Minimum eigenvalue separation accepted by the solver.
    pub eigen_gap: f64,
    pub tol: Tolerances,
    pub seed: u64,
}

/// Per-task seed derived from a root seed by stable (FNV-1a) hashing of a
/// task identifier, so sweeps stay deterministic under any scheduling.
pub fn stable_task_seed(root: u64, task_id: &str) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for b in task_id.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x100000001b3);
    }
    root ^ h
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            order_cap: 10_000,
            pair_budget: 1_000,
            class_budget: 64,
            eigen_retries: 8,
            eigen_gap: 1e-6,
            tol: Tolerances::default(),
            seed: 0,
        }
    }
}
