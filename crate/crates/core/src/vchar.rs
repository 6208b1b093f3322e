//! Virtual characters: complex coefficient vectors over the irreducible
//! characters, with the non-negativity and exactness predicates the bounds
//! depend on, plus the named characters and tensor-product decomposition.

use num_complex::Complex64;

use crate::chartab::CharacterTable;
use crate::config::RunConfig;
use crate::error::{Error, Result};

/// φ = Σ coeffs[i]·ψ_i over the rows of a character table.
///
/// Coefficient vectors are always full length (zeros allowed); k ≤ 64 makes
/// sparse support not worth the bookkeeping.
#[derive(Debug, Clone)]
pub struct VirtualCharacter<'t> {
    pub table: &'t CharacterTable,
    pub coeffs: Vec<Complex64>,
}

/// Outcome of the non-negativity test, with a witness on failure.
#[derive(Debug, Clone, PartialEq)]
pub enum NonNegVerdict {
    NonNegative,
    /// Coefficient index with negative real part or non-real value.
    BadCoefficient(usize),
    /// All coefficients vanish.
    ZeroCharacter,
    /// Class index where Re φ < 0.
    NegativeValue(usize),
}

impl NonNegVerdict {
    pub fn is_nonnegative(&self) -> bool {
        matches!(self, NonNegVerdict::NonNegative)
    }
}

impl<'t> VirtualCharacter<'t> {
    pub fn from_coeffs(table: &'t CharacterTable, coeffs: Vec<Complex64>) -> VirtualCharacter<'t> {
        assert_eq!(coeffs.len(), table.class_count);
        VirtualCharacter { table, coeffs }
    }

    pub fn from_real_coeffs(table: &'t CharacterTable, coeffs: &[f64]) -> VirtualCharacter<'t> {
        Self::from_coeffs(
            table,
            coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
        )
    }

    /// The irreducible character ψ_row as a virtual character.
    pub fn irreducible(table: &'t CharacterTable, row: usize) -> VirtualCharacter<'t> {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); table.class_count];
        coeffs[row] = Complex64::new(1.0, 0.0);
        VirtualCharacter { table, coeffs }
    }

    /// The regular character Σ n_i ψ_i; values (|G|, 0, ..., 0).
    pub fn regular(table: &'t CharacterTable) -> VirtualCharacter<'t> {
        let phi = VirtualCharacter {
            table,
            coeffs: table
                .dims
                .iter()
                .map(|&d| Complex64::new(d as f64, 0.0))
                .collect(),
        };
        debug_assert!((phi.value_at_class(0).re - table.group_order as f64).abs() < 1e-6);
        phi
    }

    /// The Gelfand character Σ ψ_i (all coefficients 1).
    pub fn gelfand(table: &'t CharacterTable) -> VirtualCharacter<'t> {
        VirtualCharacter {
            table,
            coeffs: vec![Complex64::new(1.0, 0.0); table.class_count],
        }
    }

    /// n·1 + χ for an irreducible χ of dimension n; always non-negative
    /// since |χ(g)| ≤ n.
    pub fn dim_plus(table: &'t CharacterTable, row: usize) -> VirtualCharacter<'t> {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); table.class_count];
        coeffs[table.trivial_index] += Complex64::new(table.dims[row] as f64, 0.0);
        coeffs[row] += Complex64::new(1.0, 0.0);
        VirtualCharacter { table, coeffs }
    }

    pub fn value_at_class(&self, j: usize) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| c * self.table.values[i][j])
            .sum()
    }

    /// φ(1), the value at the identity class.
    pub fn degree(&self) -> Complex64 {
        self.value_at_class(0)
    }

    pub fn add(&self, other: &VirtualCharacter<'t>) -> VirtualCharacter<'t> {
        VirtualCharacter {
            table: self.table,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, factor: f64) -> VirtualCharacter<'t> {
        VirtualCharacter {
            table: self.table,
            coeffs: self.coeffs.iter().map(|&c| c * factor).collect(),
        }
    }

    /// Conditions (a) and (b): non-negative real coefficients, not all zero,
    /// and Re φ ≥ 0 on every class. Values in (−τ_val, 0) are accepted so
    /// float noise cannot flip a genuine zero.
    pub fn is_nonnegative(&self, cfg: &RunConfig) -> NonNegVerdict {
        let tol = &cfg.tol;
        let mut any_positive = false;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.im.abs() > tol.coeff || c.re < -tol.coeff {
                return NonNegVerdict::BadCoefficient(i);
            }
            if c.re > tol.coeff {
                any_positive = true;
            }
        }
        if !any_positive {
            return NonNegVerdict::ZeroCharacter;
        }
        for j in 0..self.table.class_count {
            if self.value_at_class(j).re < -tol.val {
                return NonNegVerdict::NegativeValue(j);
            }
        }
        NonNegVerdict::NonNegative
    }

    /// Classes where φ(g) = φ(1), within a tolerance relative to |φ(1)|.
    pub fn kernel(&self, cfg: &RunConfig) -> Vec<usize> {
        let at_one = self.degree();
        let tol = cfg.tol.ker_rel * at_one.norm().max(1.0);
        (0..self.table.class_count)
            .filter(|&j| (self.value_at_class(j) - at_one).norm() <= tol)
            .collect()
    }

    /// Exact (faithful): the kernel is only the identity class.
    pub fn is_exact(&self, cfg: &RunConfig) -> bool {
        self.kernel(cfg) == [0]
    }
}

/// Clebsch–Gordan multiplicities of χ_a ⊗ conj(χ_b): for each row i,
/// a_i = (1/|G|) Σ_j |C_j| χ_a(j) conj(χ_b(j)) conj(ψ_i(j)), which must
/// round to a non-negative integer.
pub fn tensor_decompose(
    table: &CharacterTable,
    row_a: usize,
    row_b: usize,
    cfg: &RunConfig,
) -> Result<Vec<u64>> {
    let k = table.class_count;
    let m = table.group_order as f64;
    let mut mults = Vec::with_capacity(k);
    for i in 0..k {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..k {
            acc += table.class_sizes[j] as f64
                * table.values[row_a][j]
                * table.values[row_b][j].conj()
                * table.values[i][j].conj();
        }
        let a = acc / m;
        let rounded = a.re.round();
        let residual = (a - rounded).norm();
        if residual > cfg.tol.round || rounded < 0.0 {
            return Err(Error::NonIntegerMultiplicity { row: i, residual });
        }
        mults.push(rounded as u64);
    }
    // dimension bookkeeping must come out exactly
    let total: u64 = mults.iter().zip(&table.dims).map(|(&a, &n)| a * n).sum();
    if total != table.dims[row_a] * table.dims[row_b] {
        return Err(Error::NonIntegerMultiplicity {
            row: 0,
            residual: total as f64 - (table.dims[row_a] * table.dims[row_b]) as f64,
        });
    }
    Ok(mults)
}

/// Parse the CLI character mini-language: `regular`, `gelfand`,
/// `dimplus:<row>`, `tensor:<row>`, or a linear combination `c*row+c*row`.
pub fn parse_char_expr<'t>(
    expr: &str,
    table: &'t CharacterTable,
    cfg: &RunConfig,
) -> Result<VirtualCharacter<'t>> {
    let expr = expr.trim();
    let bad = |msg: String| Error::FormatError(msg);
    let parse_row = |s: &str| -> Result<usize> {
        let row: usize = s
            .parse()
            .map_err(|_| bad(format!("bad row index `{s}`")))?;
        if row >= table.class_count {
            return Err(bad(format!(
                "row {row} out of range (table has {} rows)",
                table.class_count
            )));
        }
        Ok(row)
    };
    if expr == "regular" {
        return Ok(VirtualCharacter::regular(table));
    }
    if expr == "gelfand" {
        return Ok(VirtualCharacter::gelfand(table));
    }
    if let Some(rest) = expr.strip_prefix("dimplus:") {
        return Ok(VirtualCharacter::dim_plus(table, parse_row(rest)?));
    }
    if let Some(rest) = expr.strip_prefix("tensor:") {
        let row = parse_row(rest)?;
        let mults = tensor_decompose(table, row, row, cfg)?;
        return Ok(VirtualCharacter::from_real_coeffs(
            table,
            &mults.iter().map(|&a| a as f64).collect::<Vec<_>>(),
        ));
    }
    // linear combination: terms split on '+', each `coeff*row`
    let mut coeffs = vec![Complex64::new(0.0, 0.0); table.class_count];
    for term in expr.split('+') {
        let term = term.trim();
        let (c, r) = term
            .split_once('*')
            .ok_or_else(|| bad(format!("bad term `{term}` (expected coeff*row)")))?;
        let coeff: f64 = c
            .trim()
            .parse()
            .map_err(|_| bad(format!("bad coefficient `{c}`")))?;
        coeffs[parse_row(r.trim())?] += Complex64::new(coeff, 0.0);
    }
    Ok(VirtualCharacter::from_coeffs(table, coeffs))
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
    fn regular_character_shape() {
        let cfg = RunConfig::default();
        for (fam, n) in [("symmetric", 3), ("quaternion", 8)] {
            let t = table_for(fam, n);
            let r = VirtualCharacter::regular(&t);
            assert!((r.degree().re - t.group_order as f64).abs() < 1e-8);
            for j in 1..t.class_count {
                assert!(r.value_at_class(j).norm() < 1e-8);
            }
            assert!(r.is_nonnegative(&cfg).is_nonnegative());
            assert_eq!(r.kernel(&cfg), vec![0]);
            assert!(r.is_exact(&cfg));
        }
    }

    #[test]
    fn q8_regular_coeffs() {
        let t = table_for("quaternion", 8);
        let r = VirtualCharacter::regular(&t);
        let coeffs: Vec<f64> = r.coeffs.iter().map(|c| c.re).collect();
        assert_eq!(coeffs, vec![1.0, 1.0, 1.0, 1.0, 2.0]);
    }

    #[test]
    fn trivial_character_kernel_is_everything() {
        let cfg = RunConfig::default();
        let t = table_for("symmetric", 4);
        let triv = VirtualCharacter::irreducible(&t, t.trivial_index);
        assert_eq!(triv.kernel(&cfg).len(), t.class_count);
        assert!(!triv.is_exact(&cfg));
    }

    #[test]
    fn negated_trivial_fails_nonnegativity_with_witness() {
        let cfg = RunConfig::default();
        let t = table_for("symmetric", 3);
        let mut coeffs = vec![0.0; t.class_count];
        coeffs[t.trivial_index] = -1.0;
        let phi = VirtualCharacter::from_real_coeffs(&t, &coeffs);
        assert_eq!(
            phi.is_nonnegative(&cfg),
            NonNegVerdict::BadCoefficient(t.trivial_index)
        );
        let zero = VirtualCharacter::from_real_coeffs(&t, &vec![0.0; t.class_count]);
        assert_eq!(zero.is_nonnegative(&cfg), NonNegVerdict::ZeroCharacter);
    }

    #[test]
    fn dim_plus_is_nonnegative_for_every_row() {
        let cfg = RunConfig::default();
        for (fam, n) in [("quaternion", 8), ("symmetric", 4), ("alternating", 5)] {
            let t = table_for(fam, n);
            for row in 0..t.class_count {
                let phi = VirtualCharacter::dim_plus(&t, row);
                assert!(phi.is_nonnegative(&cfg).is_nonnegative(), "{fam} row {row}");
            }
        }
    }

    #[test]
    fn gelfand_of_s3_is_exact() {
        let cfg = RunConfig::default();
        let t = table_for("symmetric", 3);
        let gel = VirtualCharacter::gelfand(&t);
        for j in 0..t.class_count {
            assert!(gel.value_at_class(j).im.abs() < 1e-8);
        }
        assert!(gel.is_exact(&cfg));
    }

    #[test]
    fn tensor_with_trivial_is_identity_map() {
        let cfg = RunConfig::default();
        let t = table_for("alternating", 5);
        for row in 0..t.class_count {
            let mults = tensor_decompose(&t, row, t.trivial_index, &cfg).unwrap();
            let mut expect = vec![0u64; t.class_count];
            expect[row] = 1;
            assert_eq!(mults, expect);
        }
    }

    #[test]
    fn a5_chi5_squared_decomposition() {
        let cfg = RunConfig::default();
        let t = table_for("alternating", 5);
        // rows sorted by dimension: 1, 3, 3, 4, 5
        assert_eq!(t.dims, vec![1, 3, 3, 4, 5]);
        let mults = tensor_decompose(&t, 4, 4, &cfg).unwrap();
        assert_eq!(mults, vec![1, 1, 1, 2, 2]);
        let total: u64 = mults.iter().zip(&t.dims).map(|(&a, &n)| a * n).sum();
        assert_eq!(total, 25);
    }

    #[test]
    fn self_tensor_contains_trivial_once() {
        let cfg = RunConfig::default();
        for (fam, n) in [("symmetric", 4), ("dihedral", 5), ("quaternion", 8)] {
            let t = table_for(fam, n);
            for row in 0..t.class_count {
                let mults = tensor_decompose(&t, row, row, &cfg).unwrap();
                assert_eq!(mults[t.trivial_index], 1, "{fam} row {row}");
            }
        }
    }

    #[test]
    fn kernel_closed_under_inverse_classes() {
        let cfg = RunConfig::default();
        let t = table_for("symmetric", 4);
        for row in 0..t.class_count {
            let phi = VirtualCharacter::dim_plus(&t, row);
            let ker = phi.kernel(&cfg);
            for &j in &ker {
                assert!(ker.contains(&t.inverse_class[j]));
            }
        }
    }

    #[test]
    fn expression_parser() {
        let cfg = RunConfig::default();
        let t = table_for("symmetric", 3);
        let phi = parse_char_expr("1*0 + 1*2", &t, &cfg).unwrap();
        assert_eq!(phi.coeffs[0].re, 1.0);
        assert_eq!(phi.coeffs[2].re, 1.0);
        assert!(parse_char_expr("regular", &t, &cfg).is_ok());
        assert!(parse_char_expr("gelfand", &t, &cfg).is_ok());
        assert!(parse_char_expr("dimplus:2", &t, &cfg).is_ok());
        assert!(parse_char_expr("tensor:2", &t, &cfg).is_ok());
        assert!(parse_char_expr("dimplus:9", &t, &cfg).is_err());
        assert!(parse_char_expr("garbage", &t, &cfg).is_err());
    }
}
