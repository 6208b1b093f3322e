//! Brute-force commutator counting: the exact-rational ground truth that
//! every formula and bound in this crate is checked against.

use num_rational::Ratio;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::group::{ClassData, GroupTable};

pub type Rational = Ratio<i64>;

/// Exact commutator statistics of a group, per conjugacy class.
#[derive(Debug, Clone)]
pub struct CommutatorCounts {
    /// counts[j] = |{(x,y) : [x,y] ∈ C_j}|; sums to m².
    pub counts: Vec<u64>,
    /// c(g) for g ∈ C_j, as an exact rational with denominator m².
    /// Constant on each class: counts[j] is divisible by sizes[j].
    pub probabilities: Vec<Rational>,
}

impl CommutatorCounts {
    /// Pairs (x,y) whose commutator equals a fixed element of class j.
    pub fn per_element(&self, cd: &ClassData, j: usize) -> u64 {
        self.counts[j] / cd.sizes[j] as u64
    }
}

fn check_budget(g: &GroupTable, cfg: &RunConfig) -> Result<()> {
    if g.order() > cfg.pair_budget {
        return Err(Error::BudgetExceeded {
            order: g.order(),
            budget: cfg.pair_budget,
        });
    }
    Ok(())
}

/// Count commutators over all m² ordered pairs, grouped by conjugacy class.
pub fn brute_force_counts(g: &GroupTable, cd: &ClassData, cfg: &RunConfig) -> Result<CommutatorCounts> {
    check_budget(g, cfg)?;
    let m = g.order();
    let mut counts = vec![0u64; cd.class_count];
    for x in 0..m {
        for y in 0..m {
            counts[cd.class_of[g.commutator(x, y)]] += 1;
        }
    }
    let mm = (m * m) as i64;
    let probabilities = counts
        .iter()
        .zip(&cd.sizes)
        .map(|(&c, &s)| Rational::new(c as i64 / s as i64, mm))
        .collect();
    Ok(CommutatorCounts {
        counts,
        probabilities,
    })
}

/// c(G) = |{(x,y) : xy = yx}| / m², exactly.
pub fn commuting_probability(g: &GroupTable, cfg: &RunConfig) -> Result<Rational> {
    check_budget(g, cfg)?;
    let m = g.order();
    let mut commuting = 0i64;
    for x in 0..m {
        for y in 0..m {
            if g.mul(x, y) == g.mul(y, x) {
                commuting += 1;
            }
        }
    }
    Ok(Rational::new(commuting, (m * m) as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin_group;
    use crate::group::conjugacy_classes;

    fn setup(family: &str, n: usize) -> (GroupTable, ClassData, CommutatorCounts) {
        let cfg = RunConfig::default();
        let g = builtin_group(family, n, &cfg).unwrap();
        let cd = conjugacy_classes(&g);
        let counts = brute_force_counts(&g, &cd, &cfg).unwrap();
        (g, cd, counts)
    }

    #[test]
    fn abelian_groups_only_make_trivial_commutators() {
        let (g, _, counts) = setup("cyclic", 12);
        assert_eq!(counts.probabilities[0], Rational::from_integer(1));
        assert_eq!(counts.counts[0], (g.order() * g.order()) as u64);
        assert!(counts.counts[1..].iter().all(|&c| c == 0));
    }

    #[test]
    fn a5_identity_probability_is_one_twelfth() {
        let (_, _, counts) = setup("alternating", 5);
        assert_eq!(counts.probabilities[0], Rational::new(5, 60));
    }

    #[test]
    fn q8_probabilities() {
        let (g, cd, counts) = setup("quaternion", 8);
        // class of -1 is the non-identity singleton class
        let minus_one = (0..cd.class_count)
            .find(|&j| j != 0 && cd.sizes[j] == 1)
            .unwrap();
        assert_eq!(counts.probabilities[0], Rational::new(5, 8));
        assert_eq!(counts.probabilities[minus_one], Rational::new(3, 8));
        for j in 0..cd.class_count {
            if j != 0 && j != minus_one {
                assert_eq!(counts.counts[j], 0);
            }
        }
        // c(1) = k/|G| (Frobenius consequence), exactly
        assert_eq!(
            counts.probabilities[0],
            Rational::new(cd.class_count as i64, g.order() as i64)
        );
    }

    #[test]
    fn counts_sum_to_m_squared_and_split_evenly_over_classes() {
        for (fam, n) in [("symmetric", 4), ("dihedral", 5), ("alternating", 4)] {
            let (g, cd, counts) = setup(fam, n);
            let m = g.order() as u64;
            assert_eq!(counts.counts.iter().sum::<u64>(), m * m);
            for j in 0..cd.class_count {
                assert_eq!(counts.counts[j] % cd.sizes[j] as u64, 0);
            }
        }
    }

    #[test]
    fn commuting_probability_matches_identity_class() {
        let cfg = RunConfig::default();
        for (fam, n, expect) in [
            ("quaternion", 8, Rational::new(5, 8)),
            ("symmetric", 3, Rational::new(1, 2)),
            ("cyclic", 7, Rational::from_integer(1)),
        ] {
            let g = builtin_group(fam, n, &cfg).unwrap();
            let cd = conjugacy_classes(&g);
            let counts = brute_force_counts(&g, &cd, &cfg).unwrap();
            let cp = commuting_probability(&g, &cfg).unwrap();
            assert_eq!(cp, expect);
            assert_eq!(cp, counts.probabilities[0]);
        }
    }

    #[test]
    fn commutator_convention_does_not_change_counts() {
        // [x,y] = x⁻¹y⁻¹xy vs xyx⁻¹y⁻¹: related by the bijection x→x⁻¹, y→y⁻¹
        let cfg = RunConfig::default();
        for (fam, n) in [("symmetric", 4), ("quaternion", 8)] {
            let g = builtin_group(fam, n, &cfg).unwrap();
            let cd = conjugacy_classes(&g);
            let counts = brute_force_counts(&g, &cd, &cfg).unwrap();
            let mut alt = vec![0u64; cd.class_count];
            for x in 0..g.order() {
                for y in 0..g.order() {
                    let c = g.mul(g.mul(x, y), g.mul(g.inv(x), g.inv(y)));
                    alt[cd.class_of[c]] += 1;
                }
            }
            assert_eq!(alt, counts.counts);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let mut cfg = RunConfig::default();
        cfg.pair_budget = 10;
        let g = builtin_group("symmetric", 4, &RunConfig::default()).unwrap();
        let cd = conjugacy_classes(&g);
        assert!(matches!(
            brute_force_counts(&g, &cd, &cfg),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(matches!(
            commuting_probability(&g, &cfg),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
