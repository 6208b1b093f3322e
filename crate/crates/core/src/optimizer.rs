//! The constrained L1 minimization over non-negative virtual characters and
//! its verification: the regular character (α_i = n_i) is a minimizer, and
//! for feasible points the objective collapses to α₀·|G| because the
//! integrand is pointwise non-negative and all non-trivial rows sum to zero
//! over the group.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::chartab::CharacterTable;
use crate::config::RunConfig;
use crate::error::{Error, Result};

/// A candidate point α for the minimization problem.
#[derive(Debug, Clone)]
pub struct FeasiblePoint {
    pub alphas: Vec<f64>,
    pub objective: f64,
    /// |Σ α_i n_i − |G||.
    pub linear_residual: f64,
    /// min over classes of Σ α_i Re ψ_i(g); feasibility wants ≥ 0.
    pub min_value: f64,
    /// min over i of α_i.
    pub min_alpha: f64,
}

impl FeasiblePoint {
    pub fn is_feasible(&self, cfg: &RunConfig) -> bool {
        self.min_alpha >= -cfg.tol.coeff
            && self.linear_residual <= cfg.tol.feas
            && self.min_value >= -cfg.tol.val
    }
}

/// The L1 objective Σ_g |Σ_i (α_i/n_i²) Re ψ_i(g)|, summed over classes
/// with multiplicity. Defined for infeasible points too.
pub fn objective(t: &CharacterTable, alphas: &[f64]) -> f64 {
    let mut total = 0.0;
    for j in 0..t.class_count {
        let v: f64 = alphas
            .iter()
            .enumerate()
            .map(|(i, &a)| a * t.values[i][j].re / (t.dims[i] * t.dims[i]) as f64)
            .sum();
        total += t.class_sizes[j] as f64 * v.abs();
    }
    total
}

/// Evaluate a coefficient vector into a `FeasiblePoint` with residuals.
pub fn evaluate_point(t: &CharacterTable, alphas: Vec<f64>) -> FeasiblePoint {
    let linear: f64 = alphas
        .iter()
        .enumerate()
        .map(|(i, &a)| a * t.dims[i] as f64)
        .sum();
    let min_value = (0..t.class_count)
        .map(|j| {
            alphas
                .iter()
                .enumerate()
                .map(|(i, &a)| a * t.values[i][j].re)
                .sum::<f64>()
        })
        .fold(f64::INFINITY, f64::min);
    let min_alpha = alphas.iter().copied().fold(f64::INFINITY, f64::min);
    FeasiblePoint {
        objective: objective(t, &alphas),
        linear_residual: (linear - t.group_order as f64).abs(),
        min_value,
        min_alpha,
        alphas,
    }
}

/// The regular point α_i = n_i; satisfies the linear constraint exactly
/// since Σ n_i² = |G|.
pub fn regular_point(t: &CharacterTable) -> FeasiblePoint {
    evaluate_point(t, t.dims.iter().map(|&d| d as f64).collect())
}

/// Deterministic seeded sampler of feasible points: directions are drawn
/// from the non-negative cone as |ψ|² for a random ψ with non-negative
/// coefficients, so both the coefficients (multiplicities of products
/// ψ_r ⊗ ψ̄_s) and the pointwise values are non-negative by construction.
/// Mixed with the regular point and rescaled onto the linear constraint;
/// the rejection loop is only a safety net against rounding.
pub fn sample_feasible(
    t: &CharacterTable,
    count: usize,
    seed: u64,
    cfg: &RunConfig,
) -> Result<Vec<FeasiblePoint>> {
    let k = t.class_count;
    let m = t.group_order as f64;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(count);
    let mut rejections = 0usize;
    let max_rejections = 100 * count.max(10);
    while points.len() < count {
        let weight: f64 = rng.gen_range(f64::MIN_POSITIVE..=1.0);
        let c: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..1.0)).collect();
        // |ψ(g_j)|² for ψ = Σ c_r ψ_r, then its coefficients by inner product
        let sq: Vec<f64> = (0..k)
            .map(|j| {
                (0..k)
                    .map(|r| c[r] * t.values[r][j])
                    .sum::<num_complex::Complex64>()
                    .norm_sqr()
            })
            .collect();
        let direction: Vec<f64> = (0..k)
            .map(|i| {
                let a: f64 = (0..k)
                    .map(|j| t.class_sizes[j] as f64 * sq[j] * t.values[i][j].conj().re / m)
                    .sum();
                a.max(0.0)
            })
            .collect();
        let raw: Vec<f64> = t
            .dims
            .iter()
            .zip(&direction)
            .map(|(&d, &a)| weight * d as f64 + (1.0 - weight) * a)
            .collect();
        let scale = t.group_order as f64
            / raw
                .iter()
                .enumerate()
                .map(|(i, &a)| a * t.dims[i] as f64)
                .sum::<f64>();
        let point = evaluate_point(t, raw.into_iter().map(|a| a * scale).collect());
        if point.is_feasible(cfg) {
            points.push(point);
        } else {
            rejections += 1;
            if rejections > max_rejections {
                return Err(Error::SamplingExhausted {
                    attempts: rejections,
                });
            }
        }
    }
    Ok(points)
}

/// Report of the sampling-based minimality verification.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MinimizerReport {
    pub group_order: usize,
    pub regular_objective: f64,
    pub samples: usize,
    pub min_sampled_objective: f64,
    /// max over samples of |objective − α₀·|G||.
    pub max_reduction_residual: f64,
    /// min over samples of the trivial coefficient; minimality rests on α₀ ≥ 1.
    pub min_trivial_alpha: f64,
    /// Sampled points whose objective ties the regular one within tolerance.
    pub co_minimizers: usize,
    pub minimality_holds: bool,
}

/// Check that the regular character minimizes: sample feasible points and
/// compare objectives, also confirming the reduction identity and the
/// α₀ ≥ 1 certificate behind it.
pub fn verify_regular_minimizer(
    t: &CharacterTable,
    samples: usize,
    seed: u64,
    cfg: &RunConfig,
) -> Result<MinimizerReport> {
    let m = t.group_order as f64;
    let regular = regular_point(t);
    let points = sample_feasible(t, samples, seed, cfg)?;
    let mut min_obj = f64::INFINITY;
    let mut max_residual: f64 = 0.0;
    let mut min_alpha0 = f64::INFINITY;
    let mut co_minimizers = 0usize;
    let slack = 1e-6 * m;
    for p in &points {
        min_obj = min_obj.min(p.objective);
        max_residual = max_residual.max((p.objective - p.alphas[t.trivial_index] * m).abs());
        min_alpha0 = min_alpha0.min(p.alphas[t.trivial_index]);
        if (p.objective - regular.objective).abs() <= slack {
            co_minimizers += 1;
        }
    }
    let minimality_holds = regular.objective <= min_obj + slack;
    Ok(MinimizerReport {
        group_order: t.group_order,
        regular_objective: regular.objective,
        samples,
        min_sampled_objective: min_obj,
        max_reduction_residual: max_residual,
        min_trivial_alpha: min_alpha0,
        co_minimizers,
        minimality_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin_group;
    use crate::chartab::character_table;
    use crate::group::conjugacy_classes;

    fn table_for(family: &str, n: usize) -> CharacterTable {
        let cfg = RunConfig::default();
        let g = builtin_group(family, n, &cfg).unwrap();
        let cd = conjugacy_classes(&g);
        character_table(&g, &cd, 1, &cfg).unwrap()
    }

    #[test]
    fn regular_objective_equals_group_order() {
        for (fam, n) in [("symmetric", 4), ("quaternion", 8), ("cyclic", 7)] {
            let t = table_for(fam, n);
            let p = regular_point(&t);
            assert!((p.objective - t.group_order as f64).abs() < 1e-6 * t.group_order as f64);
            assert!(p.is_feasible(&RunConfig::default()));
            assert!(p.linear_residual < 1e-9);
        }
    }

    #[test]
    fn all_mass_on_trivial_is_feasible_with_objective_m_squared() {
        let t = table_for("symmetric", 3);
        let mut alphas = vec![0.0; t.class_count];
        alphas[t.trivial_index] = t.group_order as f64;
        let p = evaluate_point(&t, alphas);
        assert!(p.is_feasible(&RunConfig::default()));
        let m = t.group_order as f64;
        assert!((p.objective - m * m).abs() < 1e-9);
    }

    #[test]
    fn zero_point_is_infeasible() {
        let t = table_for("symmetric", 3);
        let p = evaluate_point(&t, vec![0.0; t.class_count]);
        assert!(!p.is_feasible(&RunConfig::default()));
    }

    #[test]
    fn sampler_produces_feasible_points() {
        let cfg = RunConfig::default();
        let t = table_for("symmetric", 4);
        let points = sample_feasible(&t, 100, 7, &cfg).unwrap();
        assert_eq!(points.len(), 100);
        for p in &points {
            assert!(p.is_feasible(&cfg));
        }
        // same seed, same points
        let again = sample_feasible(&t, 100, 7, &cfg).unwrap();
        assert_eq!(points[0].alphas, again[0].alphas);
    }

    #[test]
    fn regular_minimizes_on_s4() {
        let cfg = RunConfig::default();
        let t = table_for("symmetric", 4);
        let report = verify_regular_minimizer(&t, 500, 7, &cfg).unwrap();
        assert!((report.regular_objective - 24.0).abs() < 1e-6 * 24.0);
        assert!(report.minimality_holds);
        assert!(report.max_reduction_residual <= 1e-6 * 24.0);
        assert!(report.min_trivial_alpha >= 1.0 - 1e-9);
    }

    #[test]
    fn regular_minimizes_on_q8() {
        let cfg = RunConfig::default();
        let t = table_for("quaternion", 8);
        let report = verify_regular_minimizer(&t, 500, 11, &cfg).unwrap();
        assert!((report.regular_objective - 8.0).abs() < 1e-6 * 8.0);
        assert!(report.minimality_holds);
        assert!(report.min_trivial_alpha >= 1.0 - 1e-9);
    }
}
