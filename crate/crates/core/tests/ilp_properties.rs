use capillum_core::ilp::{brute_force_enumerate, lp_relax_bound, solve_exact, IlpInstance};
use capillum_core::lp::{self, Constraint, LinearProgram, Relation};
use proptest::prelude::*;

fn instance() -> impl Strategy<Value = IlpInstance> {
    (1usize..=6).prop_flat_map(|t| {
        (
            prop::collection::vec(0.0f64..1.0, t),
            prop::collection::vec(0.08f64..1.0, t),
            prop::collection::vec(any::<bool>(), t),
            0u64..4,
        )
            .prop_map(|(w, c, l, cap)| IlpInstance::new(w, c, l, cap).unwrap())
    })
}

fn generic_lp(inst: &IlpInstance) -> f64 {
    let large: Vec<f64> = inst.large().iter().map(|&l| if l { 1.0 } else { 0.0 }).collect();
    let program = LinearProgram {
        objective: inst.weights().to_vec(),
        constraints: vec![
            Constraint::new(inst.costs().to_vec(), Relation::Le, 1.0),
            Constraint::new(large, Relation::Le, inst.large_cap() as f64),
        ],
    };
    lp::solve(&program).unwrap().objective
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exact_matches_brute_force(inst in instance()) {
        let exact = solve_exact(&inst);
        let brute = brute_force_enumerate(&inst).unwrap();
        prop_assert!(inst.is_feasible(&exact.assignment));
        prop_assert!((exact.objective - brute.objective).abs() <= 1e-9);
        prop_assert!(exact.objective <= lp_relax_bound(&inst) + 1e-9);
        prop_assert!(exact.gap <= 1e-9);
    }

    #[test]
    fn relaxation_matches_dense_simplex(
        w in prop::collection::vec(0.0f64..1.0, 10),
        c in prop::collection::vec(0.001f64..1.0, 10),
        l in prop::collection::vec(any::<bool>(), 10),
        cap in 0u64..6,
    ) {
        let inst = IlpInstance::new(w, c, l, cap).unwrap();
        let ours = lp_relax_bound(&inst);
        let theirs = generic_lp(&inst);
        prop_assert!((ours - theirs).abs() <= 1e-9 * theirs.max(1.0), "{} vs {}", ours, theirs);
    }

    #[test]
    fn larger_weights_never_lower_the_optimum(inst in instance(), bumps in prop::collection::vec(0.0f64..0.5, 6)) {
        let heavier: Vec<f64> = inst.weights().iter().zip(&bumps).map(|(w, b)| w + b).collect();
        let bigger = IlpInstance::new(heavier, inst.costs().to_vec(), inst.large().to_vec(), inst.large_cap()).unwrap();
        prop_assert!(solve_exact(&bigger).objective >= solve_exact(&inst).objective - 1e-12);
    }

    #[test]
    fn scaling_weights_scales_the_optimum(inst in instance(), k in 0.1f64..10.0) {
        let base = solve_exact(&inst);
        let scaled = solve_exact(&inst.scaled(k).unwrap());
        prop_assert!((scaled.objective - k * base.objective).abs() <= 1e-9 * (1.0 + scaled.objective));
        // The base argmax is still optimal after scaling.
        prop_assert!((inst.scaled(k).unwrap().objective(&base.assignment) - scaled.objective).abs() <= 1e-9 * (1.0 + scaled.objective));
    }
}

#[test]
fn binding_cardinality_constraint() {
    // Capacity alone would allow ten large caps of cost 0.1.
    let inst = IlpInstance::new(vec![1.0, 0.1], vec![0.1, 0.1], vec![true, false], 2).unwrap();
    let brute = brute_force_enumerate(&inst).unwrap();
    let exact = solve_exact(&inst);
    assert_eq!(exact.assignment, vec![2, 8]);
    assert!((brute.objective - 2.8).abs() < 1e-12 && (exact.objective - 2.8).abs() < 1e-12);
}
