mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tdsynth::logic::{evaluate, parse, subformulas, Evaluator, Formula};
use tdsynth::tdes::{Fragment, TimedDes};
use tdsynth::Error;

use common::*;

/// Satisfaction straight from the definition: no memo, no early exit.
fn reference(g: &TimedDes, f: &Fragment<usize>, phi: &Formula, k: usize) -> bool {
    match phi {
        Formula::True => true,
        Formula::Atom(a) => {
            let idx = g.dynamics().atom_index(a).unwrap();
            g.holds(f.states()[k], idx)
        }
        Formula::Not(a) => !reference(g, f, a, k),
        Formula::And(a, b) => reference(g, f, a, k) && reference(g, f, b, k),
        Formula::Or(a, b) => reference(g, f, a, k) || reference(g, f, b, k),
        Formula::Until(a, b, iv) => (k..=f.horizon()).any(|j| {
            let c = f.events()[k..j].iter().filter(|e| e.is_tick()).count() as u32;
            iv.lo() <= c && c <= iv.hi() && reference(g, f, b, j) && (k..j).all(|i| reference(g, f, a, i))
        }),
    }
}

/// Untimed until: ignores tick counts entirely.
fn untimed_until(g: &TimedDes, f: &Fragment<usize>, a: &Formula, b: &Formula, k: usize) -> bool {
    (k..=f.horizon()).any(|j| reference(g, f, b, j) && (k..j).all(|i| reference(g, f, a, i)))
}

fn samples(seed: u64, n: usize) -> Vec<(TimedDes, Fragment<usize>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < n {
        let u = random_system(&mut rng, 5, 2);
        let g = TimedDes::build(&u, 10_000).unwrap();
        let h = rng.gen_range(1..=7);
        if let Some(f) = random_walk(&g, h, &mut rng) {
            out.push((g, f));
        }
    }
    out
}

#[test]
fn evaluator_matches_definition() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for (g, f) in samples(3, 300) {
        let phi = random_formula(&mut rng, 4, f.horizon() as u32 + 1);
        let ev = Evaluator::new(&phi, &g).unwrap();
        let all = ev.eval_all(f.view(), &g);
        let table = ev.table();
        for k in 0..=f.horizon() {
            assert_eq!(
                ev.eval(f.view(), &g, k).unwrap(),
                reference(&g, &f, &phi, k),
                "{phi} at {k}"
            );
            assert_eq!(all[table.root()][k], reference(&g, &f, &phi, k));
        }
    }
}

#[test]
fn de_morgan_and_duality() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (g, f) in samples(4, 200) {
        let h = f.horizon() as u32;
        let a = random_formula(&mut rng, 2, h);
        let b = random_formula(&mut rng, 2, h);
        let lo = rng.gen_range(0..=h);
        let hi = rng.gen_range(lo..=h);
        let pairs = [
            (
                Formula::not(Formula::and(a.clone(), b.clone())),
                Formula::or(Formula::not(a.clone()), Formula::not(b.clone())),
            ),
            (
                Formula::globally(a.clone(), lo, hi),
                Formula::not(Formula::eventually(Formula::not(a.clone()), lo, hi)),
            ),
            (Formula::implies(a.clone(), b.clone()), Formula::or(Formula::not(a.clone()), b.clone())),
        ];
        for (x, y) in pairs {
            for k in 0..=f.horizon() {
                assert_eq!(
                    evaluate(f.view(), &x, k, &g).unwrap(),
                    evaluate(f.view(), &y, k, &g).unwrap()
                );
            }
        }
    }
}

#[test]
fn wide_interval_is_untimed_until() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for (g, f) in samples(5, 200) {
        let a = random_formula(&mut rng, 2, 3);
        let b = random_formula(&mut rng, 2, 3);
        let phi = Formula::until(a.clone(), b.clone(), 0, f.horizon() as u32);
        for k in 0..=f.horizon() {
            assert_eq!(
                evaluate(f.view(), &phi, k, &g).unwrap(),
                untimed_until(&g, &f, &a, &b, k)
            );
        }
    }
}

#[test]
fn bundled_fragments_and_subformulas() {
    let g = fig1_tdes();
    let load = |name| {
        tdsynth::io::FragmentDoc::from_json(&std::fs::read_to_string(fixture(name)).unwrap())
            .unwrap()
            .resolve(&g)
            .unwrap()
    };
    let pi1 = load("pi1.json");
    let pi2 = load("pi2.json");
    let phi1 = parse("F[1,5] ap2 & F[1,5] ap4").unwrap();
    let phi2 = parse("!ap2 U[3,5] ap3").unwrap();
    assert!(evaluate(pi1.view(), &phi1, 0, &g).unwrap());
    assert!(evaluate(pi2.view(), &phi2, 0, &g).unwrap());
    assert!(!evaluate(pi1.view(), &phi2, 0, &g).unwrap());
    // ap4 is reached after one tick, ap2 after five
    assert!(evaluate(pi1.view(), &parse("F[1,1] ap4").unwrap(), 0, &g).unwrap());
    assert!(evaluate(pi1.view(), &parse("F[5,5] ap2").unwrap(), 0, &g).unwrap());
    assert!(!evaluate(pi1.view(), &parse("F[0,4] ap2").unwrap(), 0, &g).unwrap());
    assert_eq!(subformulas(&phi1).len(), 6);
}

#[test]
fn parse_errors_carry_positions() {
    for (text, pos) in [("a U[3,1] b", 3), ("a U[1,inf] b", 6), ("a &", 3), ("X a", 0), ("(a", 2)] {
        match parse(text) {
            Err(Error::Syntax { pos: p, .. }) => assert_eq!(p, pos, "{text}"),
            other => panic!("{text}: {other:?}"),
        }
    }
}

fn arb_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::True),
        Just(Formula::falsum()),
        "[a-e][a-z0-9_]{0,3}".prop_filter("keywords", |s| !matches!(s.as_str(), "true" | "false")).prop_map(Formula::atom),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone(), 0u32..6, 0u32..6)
                .prop_map(|(a, b, x, y)| Formula::until(a, b, x.min(y), x.max(y))),
            (inner.clone(), 0u32..6, 0u32..6).prop_map(|(a, x, y)| Formula::globally(a, x.min(y), x.max(y))),
        ]
    })
}

proptest! {
    #[test]
    fn display_parses_back(phi in arb_formula()) {
        let text = phi.to_string();
        prop_assert_eq!(parse(&text).unwrap(), phi, "{}", text);
    }
}
