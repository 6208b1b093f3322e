//! Numeric computation of complex irreducible character tables.
//!
//! The solver diagonalizes a random real combination of the class-algebra
//! matrices (the Burnside/Dixon idea in floating point). Each common
//! eigenvector, normalized at the identity class, carries the eigenvalue
//! vector ω_l = |C_l|·χ(g_l)/χ(1) of one irreducible character; the dimension
//! is recovered from row orthonormality and must round to an integer.
//! Correctness is enforced post hoc: orthogonality residuals, exact
//! Σ dims² = |G|, conjugate-class symmetry. Failures trigger a reseeded retry.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::group::{ClassData, GroupTable};
use crate::linalg::{eigen_residual, inverse_iteration};

/// Irreducible character values of a group on its conjugacy classes.
///
/// Row i is the character ψ_i, column j the class C_j. The trivial
/// character is forced to row 0.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    pub class_count: usize,
    pub dims: Vec<u64>,
    pub values: Vec<Vec<Complex64>>,
    pub class_sizes: Vec<usize>,
    pub group_order: usize,
    pub trivial_index: usize,
    pub inverse_class: Vec<usize>,
}

impl CharacterTable {
    pub fn value(&self, row: usize, class: usize) -> Complex64 {
        self.values[row][class]
    }
}

/// Class-algebra structure constants a[i][j][l]: the number of ways a fixed
/// element of C_l factors as x·y with x ∈ C_i, y ∈ C_j.
#[derive(Debug, Clone)]
pub struct StructureConstants {
    pub class_count: usize,
    data: Vec<u64>,
}

impl StructureConstants {
    #[inline]
    pub fn get(&self, i: usize, j: usize, l: usize) -> u64 {
        let k = self.class_count;
        self.data[(i * k + j) * k + l]
    }
}

/// One m² pass over the multiplication table fills all constants at once.
pub fn class_structure_constants(g: &GroupTable, cd: &ClassData) -> StructureConstants {
    let m = g.order();
    let k = cd.class_count;
    let mut data = vec![0u64; k * k * k];
    for x in 0..m {
        let cx = cd.class_of[x];
        for y in 0..m {
            let cy = cd.class_of[y];
            data[(cx * k + cy) * k + cd.class_of[g.mul(x, y)]] += 1;
        }
    }
    // pair totals per target class are |C_l| copies of the per-element count
    for i in 0..k {
        for j in 0..k {
            for l in 0..k {
                let idx = (i * k + j) * k + l;
                debug_assert_eq!(data[idx] % cd.sizes[l] as u64, 0);
                data[idx] /= cd.sizes[l] as u64;
            }
        }
    }
    StructureConstants {
        class_count: k,
        data,
    }
}

/// Verification report for a character table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableVerification {
    pub max_row_residual: f64,
    pub max_col_residual: f64,
    pub dims_squared_sum: u64,
    pub dims_squared_ok: bool,
    pub first_column_residual: f64,
    pub trivial_row_residual: f64,
    pub conjugate_class_residual: f64,
    pub pass: bool,
}

/// Check all table invariants at tolerance `tol.orth`.
pub fn verify_table(t: &CharacterTable, cfg: &RunConfig) -> TableVerification {
    let k = t.class_count;
    let m = t.group_order as f64;
    let mut max_row = 0.0f64;
    for i in 0..k {
        for i2 in 0..k {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..k {
                acc += t.class_sizes[j] as f64 * t.values[i][j] * t.values[i2][j].conj();
            }
            let expect = if i == i2 { m } else { 0.0 };
            max_row = max_row.max((acc / m - expect / m).norm());
        }
    }
    let mut max_col = 0.0f64;
    for j in 0..k {
        for j2 in 0..k {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..k {
                acc += t.values[i][j] * t.values[i][j2].conj();
            }
            let expect = if j == j2 { m / t.class_sizes[j] as f64 } else { 0.0 };
            // scaled like the row residual so one tolerance covers both
            max_col = max_col.max((acc.norm() - expect).abs() * t.class_sizes[j] as f64 / m);
        }
    }
    let dims_squared_sum: u64 = t.dims.iter().map(|&d| d * d).sum();
    let mut first_col = 0.0f64;
    for i in 0..k {
        first_col = first_col.max((t.values[i][0] - t.dims[i] as f64).norm());
    }
    let mut trivial = 0.0f64;
    for j in 0..k {
        trivial = trivial.max((t.values[t.trivial_index][j] - 1.0).norm());
    }
    let mut conj = 0.0f64;
    for i in 0..k {
        for j in 0..k {
            conj = conj.max((t.values[i][t.inverse_class[j]] - t.values[i][j].conj()).norm());
        }
    }
    let dims_squared_ok = dims_squared_sum == t.group_order as u64;
    let pass = dims_squared_ok
        && max_row <= cfg.tol.orth
        && max_col <= cfg.tol.orth
        && first_col <= cfg.tol.round
        && trivial <= cfg.tol.orth
        && conj <= cfg.tol.orth;
    TableVerification {
        max_row_residual: max_row,
        max_col_residual: max_col,
        dims_squared_sum,
        dims_squared_ok,
        first_column_residual: first_col,
        trivial_row_residual: trivial,
        conjugate_class_residual: conj,
        pass,
    }
}

struct RawRow {
    dim: u64,
    values: Vec<Complex64>,
}

/// Compute the character table of a group. Deterministic for a fixed seed.
pub fn character_table(g: &GroupTable, cd: &ClassData, seed: u64, cfg: &RunConfig) -> Result<CharacterTable> {
    let k = cd.class_count;
    if k > cfg.class_budget {
        return Err(Error::ClassBudgetExceeded {
            classes: k,
            budget: cfg.class_budget,
        });
    }
    let constants = class_structure_constants(g, cd);
    let m = g.order();

    let mut last_residual = f64::INFINITY;
    let mut degenerate_attempts = 0usize;
    for attempt in 0..cfg.eigen_retries {
        let mut rng = ChaCha20Rng::seed_from_u64(seed.wrapping_add(attempt as u64));
        match solve_attempt(&constants, cd, m, &mut rng, cfg) {
            Ok(rows) => match assemble(rows, cd, m, cfg) {
                Ok(table) => {
                    let report = verify_table(&table, cfg);
                    if report.pass {
                        return Ok(table);
                    }
                    last_residual = report.max_row_residual.max(report.max_col_residual);
                }
                Err(Error::OrthogonalityCheckFailed { residual }) => {
                    last_residual = residual;
                }
                Err(e) => return Err(e),
            },
            Err(AttemptFailure::Degenerate) => {
                degenerate_attempts += 1;
            }
            Err(AttemptFailure::Numeric(r)) => {
                last_residual = r;
            }
        }
    }
    if degenerate_attempts == cfg.eigen_retries {
        Err(Error::EigenDegeneracyUnresolved {
            retries: cfg.eigen_retries,
        })
    } else {
        Err(Error::OrthogonalityCheckFailed {
            residual: last_residual,
        })
    }
}

enum AttemptFailure {
    Degenerate,
    Numeric(f64),
}

fn solve_attempt(
    constants: &StructureConstants,
    cd: &ClassData,
    m: usize,
    rng: &mut ChaCha20Rng,
    cfg: &RunConfig,
) -> std::result::Result<Vec<RawRow>, AttemptFailure> {
    let k = cd.class_count;
    // random real combination of the commuting class matrices
    let coeffs: Vec<f64> = (0..k).map(|_| rng.gen_range(0.1..1.0)).collect();
    let mut combo = vec![0.0f64; k * k];
    for i in 0..k {
        for j in 0..k {
            for l in 0..k {
                combo[j * k + l] += coeffs[i] * constants.get(i, j, l) as f64;
            }
        }
    }
    let mat = nalgebra::DMatrix::from_row_slice(k, k, &combo);
    let eigvals = mat.complex_eigenvalues();
    let mut lambdas: Vec<Complex64> = eigvals.iter().map(|z| Complex64::new(z.re, z.im)).collect();
    lambdas.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    for a in 0..k {
        for b in a + 1..k {
            if (lambdas[a] - lambdas[b]).norm() < cfg.eigen_gap {
                return Err(AttemptFailure::Degenerate);
            }
        }
    }

    let scale = combo.iter().fold(0.0f64, |acc, &x| acc.max(x.abs())).max(1.0);
    let mut rows = Vec::with_capacity(k);
    for &lambda in &lambdas {
        let start: Vec<Complex64> = (0..k)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let v = inverse_iteration(&combo, k, lambda, &start, 4);
        let residual = eigen_residual(&combo, k, lambda, &v);
        // negated comparisons so NaN from a degenerate solve counts as failure
        if !(residual <= 1e-9 * scale) {
            return Err(AttemptFailure::Numeric(residual));
        }
        if !(v[0].norm() >= 1e-8) {
            return Err(AttemptFailure::Numeric(v[0].norm()));
        }
        // normalize at the identity class: ω_0 = 1
        let omega: Vec<Complex64> = v.iter().map(|&z| z / v[0]).collect();
        let s: f64 = omega
            .iter()
            .zip(&cd.sizes)
            .map(|(w, &sz)| w.norm_sqr() / sz as f64)
            .sum();
        let dim_f = (m as f64 / s).sqrt();
        let dim = dim_f.round();
        if !((dim_f - dim).abs() <= cfg.tol.round) || !(dim >= 1.0) {
            return Err(AttemptFailure::Numeric((dim_f - dim).abs()));
        }
        let values: Vec<Complex64> = omega
            .iter()
            .zip(&cd.sizes)
            .map(|(w, &sz)| dim * w / sz as f64)
            .collect();
        rows.push(RawRow {
            dim: dim as u64,
            values,
        });
    }
    Ok(rows)
}

fn round_key(values: &[Complex64]) -> (Vec<i64>, Vec<i64>) {
    let grid = |x: f64| (x * 1e6).round() as i64;
    (
        values.iter().map(|z| grid(z.re)).collect(),
        values.iter().map(|z| grid(z.im)).collect(),
    )
}

fn assemble(mut rows: Vec<RawRow>, cd: &ClassData, m: usize, cfg: &RunConfig) -> Result<CharacterTable> {
    let k = cd.class_count;
    let dims_sq: u64 = rows.iter().map(|r| r.dim * r.dim).sum();
    if dims_sq != m as u64 {
        return Err(Error::OrthogonalityCheckFailed {
            residual: dims_sq as f64 - m as f64,
        });
    }
    // trivial row first, then dimension, then rounded values for determinism
    let trivial_residual = |r: &RawRow| {
        r.values
            .iter()
            .fold(0.0f64, |acc, z| acc.max((z - 1.0).norm()))
    };
    rows.sort_by(|a, b| {
        let ta = trivial_residual(a) <= cfg.tol.round;
        let tb = trivial_residual(b) <= cfg.tol.round;
        tb.cmp(&ta)
            .then(a.dim.cmp(&b.dim))
            .then_with(|| round_key(&a.values).cmp(&round_key(&b.values)))
    });
    Ok(CharacterTable {
        class_count: k,
        dims: rows.iter().map(|r| r.dim).collect(),
        values: rows.into_iter().map(|r| r.values).collect(),
        class_sizes: cd.sizes.clone(),
        group_order: m,
        trivial_index: 0,
        inverse_class: cd.inverse_class.clone(),
    })
}

/// On-disk table format: `values[i][j]` is `[re, im]`.
#[derive(Serialize, Deserialize)]
struct TableFile {
    order: usize,
    class_sizes: Vec<usize>,
    inverse_class: Vec<usize>,
    dims: Vec<u64>,
    values: Vec<Vec<[f64; 2]>>,
    trivial_index: usize,
}

pub fn export_table_string(t: &CharacterTable) -> String {
    let file = TableFile {
        order: t.group_order,
        class_sizes: t.class_sizes.clone(),
        inverse_class: t.inverse_class.clone(),
        dims: t.dims.clone(),
        values: t
            .values
            .iter()
            .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
            .collect(),
        trivial_index: t.trivial_index,
    };
    serde_json::to_string_pretty(&file).expect("table serialization cannot fail")
}

pub fn export_table(t: &CharacterTable, path: &std::path::Path) -> Result<()> {
    std::fs::write(path, export_table_string(t))?;
    Ok(())
}

pub fn import_table_string(text: &str, cfg: &RunConfig) -> Result<CharacterTable> {
    let file: TableFile =
        serde_json::from_str(text).map_err(|e| Error::FormatError(e.to_string()))?;
    let k = file.class_sizes.len();
    if file.dims.len() != k
        || file.inverse_class.len() != k
        || file.values.len() != k
        || file.values.iter().any(|row| row.len() != k)
        || file.trivial_index >= k
    {
        return Err(Error::FormatError("table arrays have mismatched lengths".into()));
    }
    let table = CharacterTable {
        class_count: k,
        dims: file.dims,
        values: file
            .values
            .iter()
            .map(|row| row.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
            .collect(),
        class_sizes: file.class_sizes,
        group_order: file.order,
        trivial_index: file.trivial_index,
        inverse_class: file.inverse_class,
    };
    let report = verify_table(&table, cfg);
    if !report.pass {
        return Err(Error::InvariantViolation(format!(
            "row residual {:e}, col residual {:e}, sum of dims squared {} vs order {}",
            report.max_row_residual, report.max_col_residual, report.dims_squared_sum, table.group_order
        )));
    }
    Ok(table)
}

pub fn import_table(path: &std::path::Path, cfg: &RunConfig) -> Result<CharacterTable> {
    import_table_string(&std::fs::read_to_string(path)?, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin_group;
    use crate::group::conjugacy_classes;

    fn table_for(family: &str, n: usize) -> (GroupTable, ClassData, CharacterTable) {
        let cfg = RunConfig::default();
        let g = builtin_group(family, n, &cfg).unwrap();
        let cd = conjugacy_classes(&g);
        let t = character_table(&g, &cd, 1, &cfg).unwrap();
        (g, cd, t)
    }

    #[test]
    fn structure_constants_identities() {
        let cfg = RunConfig::default();
        let g = builtin_group("symmetric", 3, &cfg).unwrap();
        let cd = conjugacy_classes(&g);
        let a = class_structure_constants(&g, &cd);
        let k = cd.class_count;
        // identity class acts as a delta
        for j in 0..k {
            for l in 0..k {
                assert_eq!(a.get(0, j, l), u64::from(j == l));
            }
        }
        // counting identity, exhaustively
        for i in 0..k {
            for j in 0..k {
                let total: u64 = (0..k).map(|l| a.get(i, j, l) * cd.sizes[l] as u64).sum();
                assert_eq!(total, (cd.sizes[i] * cd.sizes[j]) as u64);
            }
        }
        // transposition class squared covers the identity 3 times
        let transp = (0..k).find(|&j| cd.sizes[j] == 3).unwrap();
        assert_eq!(a.get(transp, transp, 0), 3);
    }

    #[test]
    fn cyclic_tables_are_roots_of_unity() {
        let (_, _, t) = table_for("cyclic", 5);
        assert!(t.dims.iter().all(|&d| d == 1));
        for row in &t.values {
            for z in row {
                assert!((z.norm() - 1.0).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn q8_dimensions() {
        let (_, _, t) = table_for("quaternion", 8);
        assert_eq!(t.dims, vec![1, 1, 1, 1, 2]);
        assert_eq!(t.trivial_index, 0);
    }

    #[test]
    fn a5_dimensions() {
        let (_, _, t) = table_for("alternating", 5);
        assert_eq!(t.dims, vec![1, 3, 3, 4, 5]);
    }

    #[test]
    fn computed_tables_verify() {
        let cfg = RunConfig::default();
        for (fam, n) in [("symmetric", 5), ("dihedral", 7), ("alternating", 4)] {
            let (_, _, t) = table_for(fam, n);
            let report = verify_table(&t, &cfg);
            assert!(report.pass, "{fam}:{n} failed: {report:?}");
        }
    }

    #[test]
    fn zeroed_row_fails_verification() {
        let cfg = RunConfig::default();
        let (_, _, mut t) = table_for("symmetric", 3);
        for z in &mut t.values[2] {
            *z = Complex64::new(0.0, 0.0);
        }
        let report = verify_table(&t, &cfg);
        assert!(!report.pass);
        assert!(report.max_row_residual > 0.9);
    }

    #[test]
    fn solver_is_deterministic_for_a_seed() {
        let cfg = RunConfig::default();
        let g = builtin_group("symmetric", 4, &cfg).unwrap();
        let cd = conjugacy_classes(&g);
        let t1 = character_table(&g, &cd, 7, &cfg).unwrap();
        let t2 = character_table(&g, &cd, 7, &cfg).unwrap();
        for i in 0..t1.class_count {
            for j in 0..t1.class_count {
                let d = (t1.values[i][j] - t2.values[i][j]).norm();
                assert!(d < 1e-12);
            }
        }
    }

    #[test]
    fn export_import_roundtrip() {
        let cfg = RunConfig::default();
        let (_, _, t) = table_for("alternating", 5);
        let text = export_table_string(&t);
        let back = import_table_string(&text, &cfg).unwrap();
        for i in 0..t.class_count {
            for j in 0..t.class_count {
                assert!((t.values[i][j] - back.values[i][j]).norm() <= 1e-15);
            }
        }
    }

    #[test]
    fn import_rejects_bad_dimension_sum() {
        let cfg = RunConfig::default();
        let (_, _, t) = table_for("symmetric", 3);
        let mut text = export_table_string(&t);
        text = text.replace("\"order\": 6", "\"order\": 7");
        assert!(matches!(
            import_table_string(&text, &cfg),
            Err(Error::InvariantViolation(_))
        ));
        assert!(matches!(
            import_table_string("{ not json", &cfg),
            Err(Error::FormatError(_))
        ));
    }

    #[test]
    fn class_budget_enforced() {
        let mut cfg = RunConfig::default();
        cfg.class_budget = 3;
        let g = builtin_group("cyclic", 5, &cfg).unwrap();
        let cd = conjugacy_classes(&g);
        assert!(matches!(
            character_table(&g, &cd, 0, &cfg),
            Err(Error::ClassBudgetExceeded { classes: 5, budget: 3 })
        ));
    }
}

#[cfg(test)]
mod small_group_tables {
    use super::*;
    use crate::catalog::builtin_group;
    use crate::group::conjugacy_classes;

    #[test]
    fn trivial_group_table() {
        let cfg = RunConfig::default();
        let g = builtin_group("cyclic", 1, &cfg).unwrap();
        let cd = conjugacy_classes(&g);
        let t = character_table(&g, &cd, 0, &cfg).unwrap();
        assert_eq!(t.dims, vec![1]);
        assert!((t.value(0, 0) - 1.0).norm() < 1e-12);
        assert!(verify_table(&t, &cfg).pass);
    }
}
