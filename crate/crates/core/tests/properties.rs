use std::fs;
use std::path::{Path, PathBuf};

use inception::alba::run_alba;
use inception::algebra::{axiom_valid, clause_valid, enumerate_algebras};
use inception::checker::{check, parse_path, Calculus, Derivation, Occ};
use inception::cutelim::{eliminate_all_cuts, insert_random_cuts, StepKind};
use inception::kernel::{display, display_path, parse_sequent, sort_at, Sequent, Side, Sort, Structure};
use inception::signature::{Family, Signature};
use inception::syntax::{find_inductive_certificate, parse_formula, print_formula, Formula, Inequality};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EXAMPLES: [&str; 7] = ["sahlqvist", "ex32", "ex35", "ex36", "ex37", "ex38", "ex410"];

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn sig() -> Signature {
    Signature::from_json(&fs::read_to_string(corpus().join("signatures/le.json")).unwrap()).unwrap()
}

fn example(name: &str) -> (Calculus, Derivation) {
    let dir = corpus().join("examples").join(name);
    let calc = Calculus::load(&dir.join("calculus.json")).unwrap();
    let d = Derivation::from_json(&fs::read_to_string(dir.join("derivation.json")).unwrap(), &calc.sig).unwrap();
    (calc, d)
}

fn formula(sig: &Signature) -> impl Strategy<Value = Formula> {
    let prims: Vec<(String, usize)> = sig.primitives.iter().map(|p| (p.name.clone(), p.order_type.arity())).collect();
    let leaf = prop_oneof![
        4 => prop::sample::select(vec!["p", "q", "r"]).prop_map(Formula::atom),
        1 => Just(Formula::Top),
        1 => Just(Formula::Bot),
    ];
    leaf.prop_recursive(4, 24, 2, move |inner| {
        let prims = prims.clone();
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (prop::sample::select(prims), prop::collection::vec(inner, 2)).prop_map(|((n, k), args)| {
                Formula::conn(&n, args.into_iter().take(k).collect())
            }),
        ]
    })
}

fn structure(rng: &mut ChaCha8Rng, sig: &Signature, sort: Sort, depth: usize) -> Structure {
    let fam = match sort {
        Sort::F => Family::F,
        Sort::G => Family::G,
    };
    let conns: Vec<_> = sig.connectives.iter().filter(|c| c.family == fam && c.arity() > 0).collect();
    if depth == 0 || conns.is_empty() || rng.gen_bool(0.3) {
        let atom = ["p", "q", "r"][rng.gen_range(0..3)];
        return Structure::formula(Formula::atom(atom));
    }
    let c = conns[rng.gen_range(0..conns.len())];
    let args = (0..c.arity())
        .map(|i| structure(rng, sig, sort.arg(c.order_type.get(i)), depth - 1))
        .collect();
    Structure::Conn(fam, c.name.clone(), args)
}

fn sequent(seed: u64, sig: &Signature) -> Sequent {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Sequent::new(structure(&mut rng, sig, Sort::F, 3), structure(&mut rng, sig, Sort::G, 3))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn formulas_round_trip_through_text(f in formula(&sig())) {
        let s = sig();
        let text = print_formula(&f);
        prop_assert_eq!(parse_formula(&text, &s).unwrap(), f);
    }

    #[test]
    fn sequents_round_trip_through_text(seed in any::<u64>()) {
        let s = sig();
        let q = sequent(seed, &s);
        prop_assert_eq!(parse_sequent(&q.to_string(), &s).unwrap(), q);
    }

    #[test]
    fn every_substructure_can_be_displayed_and_undisplayed(seed in any::<u64>()) {
        let s = sig();
        let q = sequent(seed, &s);
        for pos in q.positions() {
            let target = q.at(&pos).unwrap().clone();
            let (chain, side) = display(&q, &pos, &s).expect("display property");
            let last = chain.last().unwrap();
            prop_assert_eq!(last.side(side), &target);
            prop_assert_eq!(Side::of_sort(sort_at(&q, &pos, &s)), side);
            prop_assert!(display_path(last, &q, &s, chain.len()).is_some(), "cannot return from {}", last);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn alba_preserves_validity_on_random_inductive_inequalities(
        lhs in formula(&sig()),
        rhs in formula(&sig()),
        seed in any::<u64>(),
    ) {
        let s = sig();
        let ineq = Inequality::new(lhs, rhs);
        prop_assume!(find_inductive_certificate(&ineq, &s).is_some());
        let run = run_alba(&ineq, &s);
        prop_assume!(run.is_ok());
        let run = run.unwrap();
        for alg in enumerate_algebras(&s, 3, seed, 6) {
            let mut all = true;
            for c in &run.components {
                let cv = axiom_valid(&c.inequality, &alg).unwrap();
                all &= cv;
                for step in &c.trace {
                    prop_assert_eq!(clause_valid(&step.clause, &alg).unwrap(), cv, "{} at {}", ineq, step.kind);
                }
                prop_assert_eq!(clause_valid(&c.clause, &alg).unwrap(), cv);
            }
            prop_assert_eq!(axiom_valid(&ineq, &alg).unwrap(), all);
        }
    }

    #[test]
    fn random_cuts_are_eliminated(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (calc, d) = example(EXAMPLES[rng.gen_range(0..EXAMPLES.len())]);
        let cut = insert_random_cuts(&d, rng.gen_range(1..=3), &mut rng, &calc.sig);
        prop_assert!(check(&cut, &calc).is_ok());
        let (free, steps) = eliminate_all_cuts(&cut, &calc).unwrap();
        prop_assert_eq!(&free.seq, &d.seq);
        prop_assert!(free.is_cut_free());
        prop_assert!(check(&free, &calc).is_ok());
        for st in &steps {
            for (_, m) in &st.after {
                prop_assert!(*m < st.before, "{}", st);
            }
        }
    }
}

#[test]
fn congruence_classes_are_sort_homogeneous() {
    for name in EXAMPLES {
        let (calc, d) = example(name);
        let report = check(&d, &calc).unwrap();
        for class in &report.congruence.classes {
            let at = |o: &Occ| {
                let seq = &d.get(&o.node).unwrap().seq;
                let pos = (o.side, o.path.clone());
                (seq.at(&pos).unwrap().clone(), sort_at(seq, &pos, &calc.sig))
            };
            let first = at(&class[0]);
            for o in &class[1..] {
                assert_eq!(at(o), first, "{name}: {o} vs {}", class[0]);
            }
        }
    }
}

#[test]
fn ex35_antecedent_is_congruent_only_inside_the_inner_dream() {
    let (calc, d) = example("ex35");
    let report = check(&d, &calc).unwrap();
    let root = Occ { node: vec![], side: Side::Ante, path: vec![] };
    let class = report.congruence.class_of(&root).unwrap();
    let inner = parse_path("/d1/p1/p1/d1").unwrap();
    assert!(d.get(&inner).is_some());
    let others: Vec<_> = class.iter().filter(|o| **o != root).collect();
    assert_eq!(others.len(), 2);
    assert!(others.iter().all(|o| o.node.starts_with(&inner)));
}

#[test]
fn ex410_rebuilds_the_dream_around_the_bridge() {
    let (calc, d) = example("ex410");
    let (free, steps) = eliminate_all_cuts(&d, &calc).unwrap();
    assert!(free.is_cut_free());
    let first = &steps[0];
    assert_eq!(first.kind, StepKind::Parametric { into_right: true });
    assert_eq!(first.rebuilt.len(), 1);
    assert!(first.after.iter().any(|(p, _)| p.starts_with(&first.rebuilt[0])));
    assert!(steps[1..].iter().all(|s| s.rebuilt.is_empty()));
}
