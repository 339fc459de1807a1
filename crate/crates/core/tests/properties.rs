//! Randomized invariants over generated programs and interpretations.

use proptest::prelude::*;

use trapsem::dynamics::{build_graph, strict_classes};
use trapsem::interp::{
    consistent, cset_iter, eval_rhs2, eval_rhs3, eval_rhs_cube, intersect, leq_i, leq_s, Interp2, Interp3, Value3,
};
use trapsem::operators::{least2, least3, reduct2, reduct3, step_f, step_f3, step_t};
use trapsem::oracle::{
    cycles_by_pointer_chasing, gen_program, least_model2_by_scan, least_model3_by_scan, oracle_cover,
    oracle_trap_spaces, GenConfig,
};
use trapsem::semantics::{is_stable_partial, is_supported_partial};
use trapsem::trapspaces::{cover, enumerate_trap_spaces, is_trap_space, minimal_trap_spaces, percolate_to_supported_partial};
use trapsem::{
    completion, enumerate_models, lfp_transform, parse_program, Kind, Limits, Method, Program, Semantics,
};

fn config(max_atoms: usize) -> impl Strategy<Value = GenConfig> {
    (any::<u64>(), 1..=max_atoms, 0usize..12, 0usize..4, 0.0f64..=1.0).prop_map(
        |(seed, n_atoms, n_rules, max_body, neg_prob)| GenConfig {
            seed,
            n_atoms,
            n_rules,
            max_body,
            neg_prob,
        },
    )
}

fn program(max_atoms: usize) -> impl Strategy<Value = Program> {
    config(max_atoms).prop_map(|c| gen_program(&c).program)
}

fn value() -> impl Strategy<Value = Value3> {
    prop_oneof![Just(Value3::F), Just(Value3::T), Just(Value3::U)]
}

fn interp3(n: usize) -> impl Strategy<Value = Interp3> {
    prop::collection::vec(value(), n).prop_map(|v| Interp3::from_values(&v).unwrap())
}

fn with_interp(max_atoms: usize) -> impl Strategy<Value = (Program, Interp3)> {
    program(max_atoms).prop_flat_map(|p| {
        let n = p.atom_count();
        (Just(p), interp3(n))
    })
}

fn states(i: &Interp3) -> Vec<Interp2> {
    cset_iter(i, 1 << 16).unwrap().collect()
}

const KINDS: [Kind; 2] = [Kind::Stable, Kind::Supported];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn leq_s_is_cube_inclusion(x in interp3(5), y in interp3(5)) {
        let cx = states(&x);
        let cy = states(&y);
        prop_assert_eq!(leq_s(&x, &y), cx.iter().all(|s| cy.contains(s)));
    }

    #[test]
    fn intersection_is_the_cube_meet(x in interp3(5), y in interp3(5)) {
        match intersect(&[x, y]) {
            Ok(z) => {
                prop_assert!(consistent(&x, &y));
                prop_assert!(leq_s(&z, &x) && leq_s(&z, &y));
                let both: Vec<Interp2> = states(&x).into_iter().filter(|s| y.contains(s)).collect();
                prop_assert_eq!(states(&z), both);
            }
            Err(_) => prop_assert!(!consistent(&x, &y)),
        }
    }

    #[test]
    fn kleene_evaluation_is_information_monotone((p, x) in with_interp(6), seed in interp3(6)) {
        // y refines x wherever x is undefined
        let n = p.atom_count();
        let vals: Vec<Value3> = x.values().iter().zip(seed.values())
            .map(|(&a, b)| if a == Value3::U { b } else { a })
            .take(n)
            .collect();
        let y = Interp3::from_values(&vals).unwrap();
        prop_assert!(leq_i(&x, &y));
        let c = completion(&p);
        for a in p.atoms().ids() {
            prop_assert!(eval_rhs3(&c, a, &x).leq_i(eval_rhs3(&c, a, &y)));
            prop_assert!(eval_rhs_cube(&c, a, &x).leq_i(eval_rhs_cube(&c, a, &y)));
        }
    }

    #[test]
    fn three_valued_evaluation_extends_two_valued((p, x) in with_interp(6)) {
        let c = completion(&p);
        for s in states(&x) {
            let i = Interp3::from(s);
            for a in p.atoms().ids() {
                prop_assert_eq!(eval_rhs3(&c, a, &i), Value3::from_bool(eval_rhs2(&c, a, &s)));
            }
        }
    }

    #[test]
    fn cube_evaluation_is_exact((p, x) in with_interp(6)) {
        let c = completion(&p);
        for a in p.atoms().ids() {
            let values: Vec<bool> = states(&x).iter().map(|s| eval_rhs2(&c, a, s)).collect();
            let expected = if values.iter().all(|&v| v) {
                Value3::T
            } else if values.iter().all(|&v| !v) {
                Value3::F
            } else {
                Value3::U
            };
            prop_assert_eq!(eval_rhs_cube(&c, a, &x), expected);
            // Kleene never contradicts the exact value
            prop_assert!(eval_rhs3(&c, a, &x).leq_i(expected));
        }
    }

    #[test]
    fn print_then_parse_round_trips(p in program(8)) {
        let text = p.to_string();
        let q = parse_program(&text).unwrap();
        // printing drops atoms no rule mentions
        prop_assert_eq!(q.to_string(), text);
        prop_assert!(q.atoms().names().iter().all(|a| p.atoms().id(a).is_some()));
        prop_assert_eq!(parse_program(&q.to_string()).unwrap(), q);
    }

    #[test]
    fn lfp_is_negative_idempotent_and_preserves_stable_steps(p in program(7)) {
        let lfp = lfp_transform(&p, 100_000).unwrap();
        prop_assert!(lfp.is_negative());
        let again = lfp_transform(&lfp, 100_000).unwrap();
        prop_assert_eq!(&*again, &*lfp);
        let n = p.atom_count();
        for s in 0..1u64 << n {
            let i = Interp2::new(n, s).unwrap();
            prop_assert_eq!(step_f(&p, &i).unwrap(), step_f(&lfp, &i).unwrap());
        }
    }

    #[test]
    fn negative_programs_have_equal_operators(cfg in config(7)) {
        let p = gen_program(&GenConfig { neg_prob: 1.0, ..cfg }).program;
        prop_assert!(p.is_negative());
        for s in 0..1u64 << p.atom_count() {
            let i = Interp2::new(p.atom_count(), s).unwrap();
            prop_assert_eq!(step_f(&p, &i).unwrap(), step_t(&p, &i).unwrap());
        }
    }

    #[test]
    fn least_models_match_scans((p, x) in with_interp(6)) {
        let limits = Limits::default();
        for s in states(&x).into_iter().take(8) {
            let r = reduct2(&p, &s).unwrap();
            prop_assert_eq!(least2(&r).unwrap(), least_model2_by_scan(&r, &limits).unwrap());
        }
        let r3 = reduct3(&p, &x).unwrap();
        prop_assert_eq!(least3(&r3).unwrap(), least_model3_by_scan(&r3, &limits).unwrap());
    }

    #[test]
    fn f_grows_information_on_unate_supported_trap_spaces(p in program(6)) {
        let c = completion(&p);
        if !c.is_unate() {
            return Ok(());
        }
        for x in enumerate_trap_spaces(&p, Kind::Supported, &Limits::default()).unwrap().items {
            prop_assert!(leq_i(&x, &step_f3(&c, &x).unwrap()));
            let run = percolate_to_supported_partial(&p, &x).unwrap();
            prop_assert!(run.iterations <= p.atom_count() + 1);
            prop_assert!(is_supported_partial(&p, &run.model).unwrap());
        }
    }

    #[test]
    fn cycle_finders_agree(p in program(8)) {
        for kind in KINDS {
            let g = build_graph(&p, kind, &Limits::default()).unwrap();
            prop_assert_eq!(strict_classes(&g), cycles_by_pointer_chasing(&g));
        }
    }

    #[test]
    fn local_check_matches_closure_oracle(p in program(5)) {
        let limits = Limits::default();
        for kind in KINDS {
            prop_assert_eq!(
                enumerate_trap_spaces(&p, kind, &limits).unwrap().items,
                oracle_trap_spaces(&p, kind, &limits).unwrap().items
            );
        }
    }

    #[test]
    fn cover_matches_oracle((p, x) in with_interp(5)) {
        let limits = Limits::default();
        let members: Vec<Interp2> = states(&x).into_iter().take(3).collect();
        for kind in KINDS {
            prop_assert_eq!(
                cover(&p, kind, &members, &limits).unwrap(),
                oracle_cover(&p, kind, &members, &limits).unwrap()
            );
        }
    }

    #[test]
    fn partial_models_are_trap_spaces(p in program(5)) {
        let limits = Limits::default();
        let supm = enumerate_models(&p, Semantics::SupportedPartial, Method::Direct, &limits).unwrap();
        let stpm = enumerate_models(&p, Semantics::StablePartial, Method::Direct, &limits).unwrap();
        for m in &supm.items {
            prop_assert!(is_trap_space(&p, Kind::Supported, m, &limits).unwrap());
        }
        for m in &stpm.items {
            prop_assert!(is_stable_partial(&p, m).unwrap());
            prop_assert!(is_trap_space(&p, Kind::Stable, m, &limits).unwrap());
        }
    }

    #[test]
    fn minimal_supported_trap_spaces_are_minimal_supported_partial_models(p in program(5)) {
        if !completion(&p).is_unate() {
            return Ok(());
        }
        let limits = Limits::default();
        let supm = enumerate_models(&p, Semantics::SupportedPartial, Method::Direct, &limits).unwrap().items;
        let mut minimal: Vec<Interp3> = supm
            .iter()
            .filter(|x| !supm.iter().any(|y| y != *x && leq_s(y, x)))
            .copied()
            .collect();
        minimal.sort_by_key(Interp3::to_compact);
        prop_assert_eq!(minimal_trap_spaces(&p, Kind::Supported, &limits).unwrap().items, minimal);
    }

    #[test]
    fn generation_is_deterministic(cfg in config(12)) {
        prop_assert_eq!(gen_program(&cfg), gen_program(&cfg));
    }
}
