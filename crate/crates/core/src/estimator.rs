//! The Frobenius formula, the character-ratio expectation and its Markov
//! bounds, the exact distribution of the estimator variable, Monte Carlo
//! estimation, and the harmonic/contraharmonic diagnostic.

use num_complex::Complex64;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::chartab::CharacterTable;
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::group::{ClassData, GroupTable};
use crate::oracle::{CommutatorCounts, Rational};
use crate::vchar::{tensor_decompose, VirtualCharacter};

/// c(g) on class j by the Frobenius character sum: (1/|G|) Σ_i ψ_i(g)/n_i.
///
/// The imaginary part of the sum must cancel; a residue above tolerance
/// means the table is inconsistent.
pub fn frobenius_c(t: &CharacterTable, class: usize, cfg: &RunConfig) -> Result<f64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..t.class_count {
        acc += t.values[i][class] / t.dims[i] as f64;
    }
    if acc.im.abs() > cfg.tol.val {
        return Err(Error::ImaginaryResidue(acc.im.abs()));
    }
    Ok(acc.re / t.group_order as f64)
}

/// c(G) = k/|G|, exactly.
pub fn frobenius_cg(t: &CharacterTable) -> Rational {
    Ratio::new(t.class_count as i64, t.group_order as i64)
}

/// E(ξ_{g,φ}) = Re Σ_i a_i χ_i(g)/n_i².
pub fn expectation_xi(phi: &VirtualCharacter, class: usize) -> f64 {
    let t = phi.table;
    phi.coeffs
        .iter()
        .enumerate()
        .map(|(i, &c)| c * t.values[i][class] / (t.dims[i] * t.dims[i]) as f64)
        .sum::<Complex64>()
        .re
}

/// The per-class bound c(g) ≤ E(ξ_{g,φ})/φ(1); unsound without
/// non-negativity, so the precondition is enforced.
pub fn bound_cg(phi: &VirtualCharacter, class: usize, cfg: &RunConfig) -> Result<f64> {
    let verdict = phi.is_nonnegative(cfg);
    if !verdict.is_nonnegative() {
        return Err(Error::NotNonNegative(format!("{verdict:?}")));
    }
    Ok(expectation_xi(phi, class) / phi.degree().re)
}

/// The global bound c(G) ≤ (Σ a_i/n_i)/(Σ a_i n_i).
pub fn bound_cg_global(phi: &VirtualCharacter, cfg: &RunConfig) -> Result<f64> {
    let verdict = phi.is_nonnegative(cfg);
    if !verdict.is_nonnegative() {
        return Err(Error::NotNonNegative(format!("{verdict:?}")));
    }
    let t = phi.table;
    let num: f64 = phi
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| c.re / t.dims[i] as f64)
        .sum();
    let den: f64 = phi
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| c.re * t.dims[i] as f64)
        .sum();
    Ok(num / den)
}

/// c(g) ≤ ½(1 + Re χ(g)/n³) for an irreducible χ of dimension n,
/// via the character n·1 + χ. At the identity this is ½(1 + 1/n²).
pub fn dimension_bound(t: &CharacterTable, row: usize, class: usize) -> f64 {
    let n = t.dims[row] as f64;
    0.5 * (1.0 + t.values[row][class].re / (n * n * n))
}

/// T_φ = Σ a_i/n_i.
pub fn t_phi(phi: &VirtualCharacter) -> Complex64 {
    phi.coeffs
        .iter()
        .enumerate()
        .map(|(i, &c)| c / phi.table.dims[i] as f64)
        .sum()
}

/// T_φ computed the slow way: the average of φ over all m² commutators,
/// from the oracle's class counts. The character-level check of the
/// trace identity C_ρ = (1/n)² I is that this agrees with `t_phi`.
pub fn brute_force_t(counts: &CommutatorCounts, phi: &VirtualCharacter) -> Complex64 {
    let m2: u64 = counts.counts.iter().sum();
    counts
        .counts
        .iter()
        .enumerate()
        .map(|(c, &n)| phi.value_at_class(c) * (n as f64 / m2 as f64))
        .sum()
}

/// Exact distribution of ξ_{g,φ} = Re φ([a,b]⁻¹g) over all m² pairs.
#[derive(Debug, Clone)]
pub struct XiDistribution {
    /// Support points (value, exact probability), ascending, with values
    /// closer than 1e-9 merged.
    pub support: Vec<(f64, Rational)>,
    /// Probability that [a,b]⁻¹g lands in each conjugacy class.
    pub class_mass: Vec<Rational>,
    pub expectation: f64,
    pub max_value: f64,
}

impl XiDistribution {
    /// Exact probability of ξ values within `tol` of `value`.
    pub fn mass_at(&self, value: f64, tol: f64) -> Rational {
        self.support
            .iter()
            .filter(|(v, _)| (v - value).abs() <= tol)
            .map(|&(_, p)| p)
            .sum()
    }

    /// Exact probability that [a,b]⁻¹g lies in the kernel of φ, i.e. that
    /// ξ attains φ(1).
    pub fn kernel_mass(&self, phi: &VirtualCharacter, cfg: &RunConfig) -> Rational {
        phi.kernel(cfg).iter().map(|&j| self.class_mass[j]).sum()
    }
}

/// Compute the exact ξ distribution for g a representative of `class`.
pub fn exact_xi_distribution(
    g: &GroupTable,
    cd: &ClassData,
    counts: &CommutatorCounts,
    phi: &VirtualCharacter,
    class: usize,
) -> XiDistribution {
    let m = g.order();
    let g0 = cd.reps[class];
    // weight per element u: pairs with [a,b] = u, constant on u's class
    let mut class_weight = vec![0u64; cd.class_count];
    for u in 0..m {
        class_weight[cd.class_of[g.mul(g.inv(u), g0)]] += counts.per_element(cd, cd.class_of[u]);
    }
    let m2 = (m * m) as i64;
    let class_mass: Vec<Rational> = class_weight
        .iter()
        .map(|&w| Ratio::new(w as i64, m2))
        .collect();
    let mut by_value: Vec<(f64, Rational)> = class_mass
        .iter()
        .enumerate()
        .filter(|(_, p)| **p != Ratio::from_integer(0))
        .map(|(j, &p)| (phi.value_at_class(j).re, p))
        .collect();
    by_value.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut support: Vec<(f64, Rational)> = Vec::new();
    for (v, p) in by_value {
        match support.last_mut() {
            Some((last_v, last_p)) if (v - *last_v).abs() <= 1e-9 => *last_p += p,
            _ => support.push((v, p)),
        }
    }
    let expectation = support
        .iter()
        .map(|(v, p)| v * (*p.numer() as f64) / (*p.denom() as f64))
        .sum();
    let max_value = support.last().map(|&(v, _)| v).unwrap_or(0.0);
    XiDistribution {
        support,
        class_mass,
        expectation,
        max_value,
    }
}

/// Seeded Monte Carlo estimate of E(ξ_{g,φ}).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MonteCarloResult {
    pub samples: usize,
    pub mean: f64,
    pub std_error: f64,
    /// Fraction of samples attaining φ(1).
    pub hit_rate: f64,
}

pub fn monte_carlo_xi(
    g: &GroupTable,
    cd: &ClassData,
    phi: &VirtualCharacter,
    class: usize,
    samples: usize,
    seed: u64,
) -> MonteCarloResult {
    assert!(samples >= 1);
    let m = g.order();
    let g0 = cd.reps[class];
    let xi_by_class: Vec<f64> = (0..cd.class_count)
        .map(|j| phi.value_at_class(j).re)
        .collect();
    let at_one = phi.degree().re;
    let hit_tol = 1e-9 * at_one.abs().max(1.0);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut hits = 0usize;
    for _ in 0..samples {
        let a = rng.gen_range(0..m);
        let b = rng.gen_range(0..m);
        let u = g.commutator(a, b);
        let xi = xi_by_class[cd.class_of[g.mul(g.inv(u), g0)]];
        sum += xi;
        sum_sq += xi * xi;
        if (xi - at_one).abs() <= hit_tol {
            hits += 1;
        }
    }
    let n = samples as f64;
    let mean = sum / n;
    let variance = if samples > 1 {
        ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    MonteCarloResult {
        samples,
        mean,
        std_error: (variance / n).sqrt(),
        hit_rate: hits as f64 / n,
    }
}

/// One class row of a bound report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassBound {
    pub class: usize,
    pub exact_num: i64,
    pub exact_den: i64,
    pub bound: f64,
    /// bound − exact; non-negative (up to tolerance) when the bound is sound.
    pub slack: f64,
}

/// Comparison of a character-ratio bound against the exact oracle values.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundReport {
    pub group: String,
    pub bound_name: String,
    /// Coefficient vector of the character used, as (re, im) pairs.
    pub coeffs: Vec<[f64; 2]>,
    pub per_class: Vec<ClassBound>,
    pub global_bound: f64,
    pub min_slack: f64,
}

/// Evaluate `bound_cg` on every class and compare with the oracle.
pub fn bound_report(
    group: &GroupTable,
    cd: &ClassData,
    counts: &CommutatorCounts,
    phi: &VirtualCharacter,
    bound_name: &str,
    cfg: &RunConfig,
) -> Result<BoundReport> {
    let mut per_class = Vec::with_capacity(cd.class_count);
    let mut min_slack = f64::INFINITY;
    for j in 0..cd.class_count {
        let bound = bound_cg(phi, j, cfg)?;
        let exact = counts.probabilities[j];
        let slack = bound - (*exact.numer() as f64) / (*exact.denom() as f64);
        min_slack = min_slack.min(slack);
        per_class.push(ClassBound {
            class: j,
            exact_num: *exact.numer(),
            exact_den: *exact.denom(),
            bound,
            slack,
        });
    }
    Ok(BoundReport {
        group: group.name.clone(),
        bound_name: bound_name.to_string(),
        coeffs: phi.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        per_class,
        global_bound: bound_cg_global(phi, cfg)?,
        min_slack,
    })
}

/// The Clebsch–Gordan bound: decompose χ ⊗ χ̄ and apply the ratio bound.
/// The decomposition is automatically non-negative (its pointwise value is
/// |χ(g)|² and its coefficients are non-negative integers).
pub fn tensor_bound(
    group: &GroupTable,
    cd: &ClassData,
    counts: &CommutatorCounts,
    t: &CharacterTable,
    row: usize,
    cfg: &RunConfig,
) -> Result<BoundReport> {
    let mults = tensor_decompose(t, row, row, cfg)?;
    let coeffs: Vec<f64> = mults.iter().map(|&a| a as f64).collect();
    let phi = VirtualCharacter::from_real_coeffs(t, &coeffs);
    bound_report(group, cd, counts, &phi, &format!("tensor:{row}"), cfg)
}

/// Diagnostic around the Gelfand character: the harmonic/contraharmonic
/// mean inequality (always true) and the per-class literal inequality,
/// which is only reported, never asserted.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GelfandDiagnostic {
    /// (Σ n_i)/(Σ n_i²), exact.
    pub contraharmonic_reciprocal: (i64, i64),
    /// (Σ 1/n_i)/k, exact.
    pub harmonic_reciprocal: (i64, i64),
    /// The mean inequality; must always hold.
    pub mean_inequality_holds: bool,
    /// Per class: [Σ_i Re ψ_i(g)/n_i²]/k.
    pub per_class_rhs: Vec<f64>,
    /// Whether the literal per-class inequality holds there.
    pub per_class_holds: Vec<bool>,
    pub gelfand_nonnegative: bool,
    pub gelfand_exact: bool,
}

pub fn gelfand_diagnostic(t: &CharacterTable, cfg: &RunConfig) -> GelfandDiagnostic {
    let k = t.class_count as i64;
    let sum_n: i64 = t.dims.iter().map(|&d| d as i64).sum();
    let sum_n2: i64 = t.dims.iter().map(|&d| (d * d) as i64).sum();
    let lhs = Ratio::new(sum_n, sum_n2);
    let sum_inv: Rational = t.dims.iter().map(|&d| Ratio::new(1, d as i64)).sum();
    let rhs = sum_inv / k;
    let lhs_f = *lhs.numer() as f64 / *lhs.denom() as f64;
    let mut per_class_rhs = Vec::with_capacity(t.class_count);
    let mut per_class_holds = Vec::with_capacity(t.class_count);
    for j in 0..t.class_count {
        let s: f64 = (0..t.class_count)
            .map(|i| t.values[i][j].re / (t.dims[i] * t.dims[i]) as f64)
            .sum();
        let v = s / k as f64;
        per_class_rhs.push(v);
        per_class_holds.push(lhs_f <= v + cfg.tol.val);
    }
    let gel = VirtualCharacter::gelfand(t);
    GelfandDiagnostic {
        contraharmonic_reciprocal: (*lhs.numer(), *lhs.denom()),
        harmonic_reciprocal: (*rhs.numer(), *rhs.denom()),
        mean_inequality_holds: lhs <= rhs,
        per_class_rhs,
        per_class_holds,
        gelfand_nonnegative: gel.is_nonnegative(cfg).is_nonnegative(),
        gelfand_exact: gel.is_exact(cfg),
    }
}

/// The permutation character 1 + χ_{n−1} of a symmetric group: located as
/// the unique row whose values, plus one, equal the fixed-point counts of
/// the permutation action on every class.
pub fn sn_permutation_character<'t>(
    g: &GroupTable,
    cd: &ClassData,
    t: &'t CharacterTable,
) -> Result<VirtualCharacter<'t>> {
    let perms = g.perms.as_ref().ok_or_else(|| {
        Error::PermutationCharacterNotFound("group has no permutation realization".into())
    })?;
    let fixed: Vec<f64> = cd
        .reps
        .iter()
        .map(|&r| perms[r].fixed_points() as f64)
        .collect();
    let mut found = None;
    for row in 0..t.class_count {
        let matches = (0..t.class_count).all(|j| {
            let v = t.values[row][j];
            v.im.abs() < 1e-6 && (1.0 + v.re - fixed[j]).abs() < 1e-6
        });
        if matches {
            if found.is_some() {
                return Err(Error::PermutationCharacterNotFound(
                    "multiple rows match the fixed-point counts".into(),
                ));
            }
            found = Some(row);
        }
    }
    let row = found.ok_or_else(|| {
        Error::PermutationCharacterNotFound("no row matches the fixed-point counts".into())
    })?;
    let mut coeffs = vec![0.0; t.class_count];
    coeffs[t.trivial_index] += 1.0;
    coeffs[row] += 1.0;
    Ok(VirtualCharacter::from_real_coeffs(t, &coeffs))
}

/// Half-normal draw via Box–Muller; keeps the sweep free of extra deps.
fn half_normal(rng: &mut ChaCha20Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    ((-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()).abs()
}

/// Rejection-free sampler of random non-negative virtual characters for
/// soundness sweeps: half-normal mixtures of the tensor-square characters
/// χ_r ⊗ χ̄_r (pointwise value |χ_r(g)|² ≥ 0) plus a 0.1·regular margin.
/// Every draw is re-verified with `is_nonnegative`.
pub struct NonNegSampler<'t> {
    table: &'t CharacterTable,
    squares: Vec<Vec<u64>>,
}

impl<'t> NonNegSampler<'t> {
    pub fn new(t: &'t CharacterTable, cfg: &RunConfig) -> Result<NonNegSampler<'t>> {
        let squares = (0..t.class_count)
            .map(|r| tensor_decompose(t, r, r, cfg))
            .collect::<Result<Vec<_>>>()?;
        Ok(NonNegSampler { table: t, squares })
    }

    pub fn sample(&self, rng: &mut ChaCha20Rng, cfg: &RunConfig) -> VirtualCharacter<'t> {
        let t = self.table;
        let k = t.class_count;
        let mut coeffs: Vec<f64> = t.dims.iter().map(|&d| 0.1 * d as f64).collect();
        for square in &self.squares {
            let weight = half_normal(rng);
            for i in 0..k {
                coeffs[i] += weight * square[i] as f64;
            }
        }
        let phi = VirtualCharacter::from_real_coeffs(t, &coeffs);
        assert!(phi.is_nonnegative(cfg).is_nonnegative());
        phi
    }
}
