use std::collections::BTreeSet;

use proptest::prelude::*;

use kaprekar::checks::catalog_example_failures;
use kaprekar::dynamics::{build_graph, build_graph_with};
use kaprekar::equivalence::{catalog_r2, partition, partition_in};
use kaprekar::symbolic::{derive_with, total_k_iter, DeriveOptions};
use kaprekar::{
    apply_f, check_bw, classify, derive_k_functions, enumerate_classes, eval_k, iterate, kaprekar_step, params,
    solve_fixed_points, total_k, verify_constant_family, ConstantFamily, DigitNumber, ParamVector, Permutation,
};

fn number(max_width: usize) -> impl Strategy<Value = DigitNumber> {
    prop::collection::vec(0u8..10, 2..=max_width).prop_filter_map("repdigit", |d| DigitNumber::from_digits(d).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn images_are_multiples_of_nine(n in number(16)) {
        prop_assert_eq!(kaprekar_step(&n).digit_sum() % 9, 0);
    }

    #[test]
    fn parameters_determine_the_image(n in number(16)) {
        prop_assert_eq!(apply_f(&params(&n)), kaprekar_step(&n));
    }

    #[test]
    fn parameters_are_ordered(n in number(16)) {
        let a = params(&n);
        prop_assert_eq!(a.alphas().len(), n.width() / 2);
        prop_assert!(a.alphas().windows(2).all(|p| p[0] >= p[1]));
        prop_assert!(a.alphas()[0] >= 1);
    }

    #[test]
    fn iteration_composes(n in number(12), a in 0usize..6, b in 0usize..6) {
        prop_assert_eq!(iterate(&iterate(&n, a), b), iterate(&n, a + b));
    }

    #[test]
    fn class_map_commutes_with_params(n in number(12), r in 0usize..8) {
        prop_assert_eq!(total_k_iter(&params(&n), r), params(&iterate(&n, r)));
    }

    #[test]
    fn images_have_the_family_shape(n in number(16)) {
        let a = params(&n);
        let bw = check_bw(&kaprekar_step(&n), &classify(&a));
        prop_assert!(bw.satisfied, "{} fails {:?}", n, bw.failed_condition);
    }

    #[test]
    fn text_round_trips(n in number(16)) {
        prop_assert_eq!(DigitNumber::parse(&n.to_string()).unwrap(), n.clone());
        let a = params(&n);
        prop_assert_eq!(ParamVector::parse(&a.to_string(), n.width()).unwrap(), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partitions_coarsen(w in 2usize..=7, r in 1usize..20) {
        prop_assert!(partition(w, r + 1).is_coarsening_of(&partition(w, r)));
    }
}

#[test]
fn every_class_image_has_the_family_shape() {
    for w in 2..=14 {
        for a in enumerate_classes(w) {
            let bw = check_bw(&apply_f(&a), &classify(&a));
            assert!(bw.satisfied, "width {w}, class {a}: {:?}", bw.failed_condition);
        }
    }
}

#[test]
fn fixed_points_match_brute_force() {
    for w in 2..=14 {
        let solved: BTreeSet<ParamVector> = solve_fixed_points(w).into_iter().map(|f| f.alpha_e).collect();
        let brute: BTreeSet<ParamVector> = enumerate_classes(w).into_iter().filter(|a| total_k(a) == *a).collect();
        assert_eq!(solved, brute, "width {w}");
    }
}

#[test]
fn fixed_point_constants_are_fixed() {
    for w in 2..=14 {
        for f in solve_fixed_points(w) {
            assert_eq!(kaprekar_step(&f.n_e), f.n_e, "width {w}");
            assert_eq!(params(&f.n_e), f.alpha_e);
        }
    }
}

#[test]
fn constant_families_hold() {
    for h in ConstantFamily::Even.min_h()..=12 {
        assert!(verify_constant_family(ConstantFamily::Even, h).is_ok(), "even h={h}");
    }
    for h in ConstantFamily::Odd.min_h()..=12 {
        assert!(verify_constant_family(ConstantFamily::Odd, h).is_ok(), "odd h={h}");
    }
    assert!(verify_constant_family(ConstantFamily::Odd, 3).is_err());
}

#[test]
fn domains_enumerate_exactly_their_members() {
    for w in 2..=8 {
        let classes = enumerate_classes(w);
        for f in &derive_k_functions(w).functions {
            let listed: BTreeSet<&ParamVector> = f.feasible_points().iter().collect();
            let filtered: BTreeSet<&ParamVector> = classes.iter().filter(|a| f.domain.contains(a)).collect();
            assert_eq!(listed, filtered, "width {w}, {}", f.id);
            assert_eq!(f.feasible_count, listed.len());
            for a in &classes {
                assert_eq!(eval_k(f, a).is_ok(), listed.contains(a), "{} at {a}", f.id);
            }
        }
    }
}

#[test]
fn permutations_round_trip() {
    for w in [4, 7, 12] {
        for f in &derive_k_functions(w).functions {
            let p: Permutation = f.permutation.to_string().parse().unwrap();
            assert_eq!(p, f.permutation);
        }
    }
}

#[test]
fn parallel_runs_are_identical() {
    for w in [5, 6, 7, 8] {
        assert_eq!(
            build_graph_with(w, true).to_export(),
            build_graph_with(w, false).to_export()
        );
        let par = derive_with(
            w,
            DeriveOptions {
                prune: true,
                parallel: true,
            },
        );
        let seq = derive_with(
            w,
            DeriveOptions {
                prune: true,
                parallel: false,
            },
        );
        assert_eq!(format!("{:?}", par.to_export()), format!("{:?}", seq.to_export()));
    }
}

#[test]
fn pruning_does_not_change_the_functions() {
    for w in 2..=7 {
        let pruned = derive_with(
            w,
            DeriveOptions {
                prune: true,
                parallel: true,
            },
        );
        let full = derive_with(
            w,
            DeriveOptions {
                prune: false,
                parallel: true,
            },
        );
        assert!(full.check_against_oracle().is_ok(), "width {w}");
        let points = |c: &kaprekar::Catalog| -> BTreeSet<(ParamVector, ParamVector)> {
            c.functions
                .iter()
                .flat_map(|f| f.feasible_points().iter().map(|a| (a.clone(), eval_k(f, a).unwrap())))
                .collect()
        };
        assert_eq!(points(&pruned), points(&full), "width {w}");
    }
}

#[test]
fn catalog_examples_are_produced() {
    assert_eq!(catalog_example_failures(), Vec::<String>::new());
}

#[test]
fn transpositions_are_involutions() {
    for w in [6, 7] {
        for m in catalog_r2(w) {
            let involutive = ["e2-1", "e2-2", "e2-3", "e2-4", "e2-5", "e2-8", "e2-9", "e2-10", "e2-11"];
            if !involutive.contains(&m.id.as_str()) {
                continue;
            }
            for (a, b) in m.pairs() {
                assert!(m.maps(&b, &a), "{} at width {w}: {a} -> {b} has no return", m.id);
            }
        }
    }
}

#[test]
fn catalog_pairs_share_their_image() {
    for w in 4..=9 {
        for m in catalog_r2(w) {
            for (a, b) in m.pairs() {
                assert!(m.valid, "{} at width {w} relates {a} and {b}", m.id);
                assert_eq!(total_k(&a), total_k(&b), "{} at width {w}: {a} vs {b}", m.id);
            }
        }
    }
}

#[test]
fn restricted_partitions_agree_with_the_full_one() {
    let g = build_graph(6);
    let full = partition(6, 3);
    for c in &g.components {
        let p = partition_in(&g, 3, &c.nodes);
        for b in &p.blocks {
            assert!(b.iter().all(|a| full.same_block(a, &b[0])));
        }
    }
}
