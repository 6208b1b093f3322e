//! Randomized invariants over the small-group machinery.

use num_complex::Complex64;
use num_rational::Ratio;
use once_cell::sync::Lazy;
use proptest::prelude::*;

use commprob::catalog::builtin_group;
use commprob::chartab::{character_table, CharacterTable};
use commprob::config::stable_task_seed;
use commprob::estimator::{exact_xi_distribution, t_phi};
use commprob::group::{conjugacy_classes, ClassData, GroupTable};
use commprob::optimizer::objective;
use commprob::oracle::{brute_force_counts, CommutatorCounts};
use commprob::perm::Permutation;
use commprob::vchar::{tensor_decompose, VirtualCharacter};
use commprob::RunConfig;

static CFG: Lazy<RunConfig> = Lazy::new(RunConfig::default);

struct Ctx {
    g: GroupTable,
    cd: ClassData,
    t: CharacterTable,
    counts: CommutatorCounts,
}

fn ctx(family: &'static str, n: usize) -> Ctx {
    let g = builtin_group(family, n, &CFG).unwrap();
    let cd = conjugacy_classes(&g);
    let t = character_table(&g, &cd, 1, &CFG).unwrap();
    let counts = brute_force_counts(&g, &cd, &CFG).unwrap();
    Ctx { g, cd, t, counts }
}

static S4: Lazy<Ctx> = Lazy::new(|| ctx("symmetric", 4));
static D5: Lazy<Ctx> = Lazy::new(|| ctx("dihedral", 5));

fn arb_perm(degree: usize) -> impl Strategy<Value = Permutation> {
    Just(degree)
        .prop_perturb(move |d, mut rng| {
            let mut images: Vec<usize> = (0..d).collect();
            for i in (1..d).rev() {
                images.swap(i, rng.random_range(0..=i));
            }
            Permutation::new(images).unwrap()
        })
}

proptest! {
    #[test]
    fn permutation_inverse_cancels(p in arb_perm(7)) {
        let id = Permutation::identity(7);
        prop_assert_eq!(p.compose(&p.inverse()), id.clone());
        prop_assert_eq!(p.inverse().compose(&p), id);
    }

    #[test]
    fn composition_is_associative(a in arb_perm(6), b in arb_perm(6), c in arb_perm(6)) {
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
    }

    #[test]
    fn commutator_conventions_agree_on_counts(x in 0usize..24, y in 0usize..24) {
        // [x,y] and the reversed-convention commutator are conjugate, so they
        // land in the same class
        let s4 = &*S4;
        let lhs = s4.g.commutator(x, y);
        let rhs = {
            let xi = s4.g.inv(x);
            let yi = s4.g.inv(y);
            s4.g.mul(s4.g.mul(x, y), s4.g.mul(xi, yi))
        };
        prop_assert_eq!(s4.cd.class_of[lhs], s4.cd.class_of[rhs]);
    }

    #[test]
    fn nonnegative_characters_are_closed_under_sum_and_scale(
        a in proptest::collection::vec(0.0f64..3.0, 5),
        b in proptest::collection::vec(0.0f64..3.0, 5),
        s in 0.1f64..10.0,
    ) {
        let s4 = &*S4;
        // tensor squares are pointwise |χ_r(g)|², so any non-negative mix of
        // them is again non-negative, as are sums and positive rescalings
        let lift = |weights: &[f64]| {
            let mut coeffs = vec![0.0; 5];
            for (r, &w) in weights.iter().enumerate() {
                let mults = tensor_decompose(&s4.t, r, r, &CFG).unwrap();
                for j in 0..5 {
                    coeffs[j] += w * mults[j] as f64;
                }
            }
            VirtualCharacter::from_real_coeffs(&s4.t, &coeffs)
        };
        let phi = lift(&a).add(&lift(&b)).add(&VirtualCharacter::regular(&s4.t)).scale(s);
        prop_assert!(phi.is_nonnegative(&CFG).is_nonnegative());
    }

    #[test]
    fn t_phi_is_linear(
        re in proptest::collection::vec(-2.0f64..2.0, 5),
        im in proptest::collection::vec(-2.0f64..2.0, 5),
        s in -3.0f64..3.0,
    ) {
        let s4 = &*S4;
        let phi = VirtualCharacter::from_coeffs(
            &s4.t,
            re.iter().zip(&im).map(|(&r, &i)| Complex64::new(r, i)).collect(),
        );
        let psi = VirtualCharacter::gelfand(&s4.t);
        let combined = phi.scale(s).add(&psi);
        let expect = t_phi(&phi) * s + t_phi(&psi);
        prop_assert!((t_phi(&combined) - expect).norm() < 1e-12);
    }

    #[test]
    fn objective_is_positively_homogeneous(
        alphas in proptest::collection::vec(-5.0f64..5.0, 4),
        c in 0.0f64..10.0,
    ) {
        let d5 = &*D5;
        let scaled: Vec<f64> = alphas.iter().map(|&a| c * a).collect();
        let lhs = objective(&d5.t, &scaled);
        let rhs = c * objective(&d5.t, &alphas);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs.abs().max(1.0));
    }

    #[test]
    fn xi_distribution_has_total_mass_one(class in 0usize..4) {
        let d5 = &*D5;
        let phi = VirtualCharacter::gelfand(&d5.t);
        let dist = exact_xi_distribution(&d5.g, &d5.cd, &d5.counts, &phi, class);
        let total: Ratio<i64> = dist.class_mass.iter().sum();
        prop_assert_eq!(total, Ratio::from_integer(1));
    }

    #[test]
    fn task_seed_root_mixing_is_xor(root in any::<u64>(), id in "[a-z]{1,12}") {
        prop_assert_eq!(stable_task_seed(root, &id), root ^ stable_task_seed(0, &id));
        prop_assert_eq!(stable_task_seed(root, &id), stable_task_seed(root, &id));
    }
}
