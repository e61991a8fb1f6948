//! Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero if
//! any criterion fails.

mod common;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tdsynth::encode::{self, add_tick_thresholds, Mode, RowGroup};
use tdsynth::ilp::{solve, Assignment, IlpModel};
use tdsynth::io::FragmentDoc;
use tdsynth::logic::{evaluate, parse, Atoms, Evaluator, Labeling};
use tdsynth::synth::{first_fragment, synthesize, SynthesisRequest};
use tdsynth::tdes::{Event, EventId, Fragment, TimedDes};

use common::*;

const PHI1: &str = "F[1,5] ap2 & F[1,5] ap4";
const PHI2: &str = "!ap2 U[3,5] ap3";
const PHI1_HORIZON: usize = 11;
const PHI2_HORIZON: usize = 10;
const HORIZON_RANGE: (usize, usize) = (5, 15);
const RUNTIME_LIMIT: Duration = Duration::from_secs(60);
const EQUIVALENCE_INSTANCES: usize = 300;
const REPLAY_FRAGMENTS: usize = 250;
const SOLVER_MODELS: usize = 600;
const SOLVER_MAX_VARS: usize = 20;
const THRESHOLD_MAX_H: usize = 12;
const ROUTE_HORIZON: usize = 11;
const SEED: u64 = 0x7d5_2024;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

struct Letters;

impl Atoms for Letters {
    fn atom_index(&self, atom: &str) -> Option<usize> {
        match atom {
            "a" => Some(0),
            "b" => Some(1),
            _ => None,
        }
    }
}

impl Labeling<char> for Letters {
    fn holds(&self, s: &char, atom: usize) -> bool {
        (*s == 'a' && atom == 0) || (*s == 'b' && atom == 1)
    }
}

fn worked_example() -> Verdict {
    let sigma = Event::Act(EventId(0));
    let f = Fragment::new(vec!['a', 'a', 'b', 'a'], vec![Event::Tick, sigma, Event::Tick]).unwrap();
    let phi = parse("a U[1,3] b").unwrap();
    let c03 = f.count(0, 3).unwrap();
    let c13 = f.count(1, 3).unwrap();
    let c02 = f.count(0, 2).unwrap();
    let at0 = evaluate(f.view(), &phi, 0, &Letters).unwrap();
    let at1 = evaluate(f.view(), &phi, 1, &Letters).unwrap();
    verdict(
        c03 == 2 && c13 == 1 && c02 == 1 && at0 && !at1,
        format!("count(0,3)={c03} count(1,3)={c13} count(0,2)={c02} k=0:{at0} k=1:{at1}"),
    )
}

fn reproduce(phi: &str, expected: usize) -> Verdict {
    let start = Instant::now();
    let g = fig1_tdes();
    let formula = parse(phi).unwrap();
    let r = SynthesisRequest::new(fig1(), formula.clone(), HORIZON_RANGE.0, HORIZON_RANGE.1);
    let res = synthesize(&r).unwrap();
    let elapsed = start.elapsed();
    let Some(h) = res.horizon() else {
        return verdict(false, format!("not found in {}..{}", HORIZON_RANGE.0, HORIZON_RANGE.1));
    };
    let f = g.to_indices(res.fragment().unwrap()).unwrap();
    let certified = evaluate(f.view(), &formula, 0, &g).unwrap();
    verdict(
        h == expected && certified && elapsed < RUNTIME_LIMIT,
        format!(
            "horizon {h} (expected {expected}), certified {certified}, {:.2}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn bundled_fragments() -> Verdict {
    let g = fig1_tdes();
    let mut details = Vec::new();
    let mut pass = true;
    for (file, phi, events) in [("pi1.json", PHI1, 11), ("pi2.json", PHI2, 9)] {
        let doc = FragmentDoc::from_json(&std::fs::read_to_string(fixture(file)).unwrap()).unwrap();
        match doc.resolve(&g) {
            Ok(f) => {
                let holds = evaluate(f.view(), &parse(phi).unwrap(), 0, &g).unwrap();
                pass &= holds && f.horizon() == events;
                details.push(format!("{file}: {} events, {phi}: {holds}", f.horizon()));
            }
            Err(e) => {
                pass = false;
                details.push(format!("{file}: replay failed: {e}"));
            }
        }
    }
    verdict(pass, details.join("; "))
}

fn route_exclusion() -> Verdict {
    let g = fig1_tdes();
    let d = g.dynamics();
    let p2 = d.activity("p2").unwrap();
    let p4 = d.activity("p4").unwrap();
    let phi = Evaluator::new(&parse("F[1,5] ap4").unwrap(), &g).unwrap();
    let mut visited = 0;
    let (mut total, mut restricted, mut satisfied, mut min_ticks) = (0u64, 0u64, 0u64, usize::MAX);
    first_fragment(&g, ROUTE_HORIZON, u64::MAX, &mut visited, |f| {
        total += 1;
        let acts: Vec<_> = f.states().iter().map(|&s| g.activity(s)).collect();
        let first = acts.iter().position(|&a| a == p2 || a == p4);
        if first.is_some_and(|i| acts[i] == p2) {
            restricted += 1;
            if phi.eval(f.view(), &g, 0).unwrap() {
                satisfied += 1;
            }
            if let Some(j) = acts.iter().position(|&a| a == p4) {
                min_ticks = min_ticks.min(f.count(0, j).unwrap());
            }
        }
        false
    })
    .unwrap();
    verdict(
        restricted > 0 && satisfied == 0 && min_ticks >= 6,
        format!(
            "{total} fragments of horizon {ROUTE_HORIZON}, {restricted} visit p2 before p4, \
             {satisfied} satisfy F[1,5] ap4, fewest ticks to p4 on such routes: {}",
            if min_ticks == usize::MAX { "p4 not reached within the horizon".to_string() } else { min_ticks.to_string() }
        ),
    )
}

fn encoder_oracle_equivalence() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut disagreements = Vec::new();
    let (mut feasible, mut uncertified) = (0, 0);
    for i in 0..EQUIVALENCE_INSTANCES {
        let u = random_system(&mut rng, 5, 2);
        let g = TimedDes::build(&u, 10_000).unwrap();
        let h = rng.gen_range(1..=5);
        let phi = random_formula(&mut rng, 3, h as u32);
        let enc = encode::encode(&g, &phi, h, Mode::Exact).unwrap();
        let out = solve(&enc.model);
        let ev = Evaluator::new(&phi, &g).unwrap();
        let mut visited = 0;
        let oracle = first_fragment(&g, h, u64::MAX, &mut visited, |f| ev.eval(f.view(), &g, 0).unwrap())
            .unwrap()
            .is_some();
        if let Some(a) = out.assignment() {
            feasible += 1;
            if encode::decode(&enc, a, &g).is_err() {
                uncertified += 1;
            }
        }
        if out.is_feasible() != oracle {
            disagreements.push(format!("#{i} H={h} {phi}"));
        }
    }
    verdict(
        disagreements.is_empty() && uncertified == 0,
        format!(
            "{EQUIVALENCE_INSTANCES} instances, {feasible} feasible, {} disagreements, {uncertified} uncertified{}",
            disagreements.len(),
            disagreements.first().map(|d| format!(", first: {d}")).unwrap_or_default()
        ),
    )
}

fn replay_completeness() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    let (mut done, mut bad_fragments, mut bad_rows, mut tick_rows, mut bad_values) = (0, 0, 0, 0, 0);
    while done < REPLAY_FRAGMENTS {
        let u = random_system(&mut rng, 5, 2);
        let g = TimedDes::build(&u, 10_000).unwrap();
        let h = rng.gen_range(1..=6);
        let Some(f) = random_walk(&g, h, &mut rng) else {
            continue;
        };
        done += 1;
        let phi = random_formula(&mut rng, 3, h as u32);
        let mut enc = encode::encode_trajectory(&g, h).unwrap();
        encode::encode_ticks(&g, h, &mut enc).unwrap();
        encode::encode_formula(&g, &phi, h, &mut enc).unwrap();
        let a: Assignment = enc.replay_assignment(&g, &f).unwrap();
        let violated = enc.model.violated_rows(&a);
        if !violated.is_empty() {
            bad_fragments += 1;
            bad_rows += violated.len();
            tick_rows += violated
                .iter()
                .filter(|&&r| enc.row_group(r) == Some(RowGroup::Ticks))
                .count();
        }
        let root = enc.table().unwrap().root();
        for k in 0..=h {
            if a.is_one(enc.zphi[root][k]) != evaluate(f.view(), &phi, k, &g).unwrap() {
                bad_values += 1;
            }
        }
    }
    verdict(
        bad_rows == 0 && bad_values == 0,
        format!(
            "{done} fragments, {bad_fragments} violate the model ({bad_rows} rows, {tick_rows} of them tick rows), \
             {bad_values} root values differ from evaluation"
        ),
    )
}

fn solver_correctness() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 11);
    let (mut feasible, mut mismatches, mut invalid) = (0, 0, 0);
    for _ in 0..SOLVER_MODELS {
        let m = random_model(&mut rng, SOLVER_MAX_VARS);
        let truth = brute_force(&m).is_some();
        let out = solve(&m);
        if out.is_feasible() != truth {
            mismatches += 1;
        }
        if let Some(a) = out.assignment() {
            feasible += 1;
            let ok = m.rows().iter().all(|c| c.holds(a.values()))
                && m.vars().iter().zip(a.values()).all(|(d, &x)| d.lo <= x && x <= d.hi);
            if !ok {
                invalid += 1;
            }
        }
    }
    verdict(
        mismatches == 0 && invalid == 0,
        format!("{SOLVER_MODELS} models, {feasible} feasible, {mismatches} verdict mismatches, {invalid} invalid assignments"),
    )
}

fn threshold_table() -> Verdict {
    let (mut cases, mut failures) = (0, Vec::new());
    for h in 0..=THRESHOLD_MAX_H {
        for m in 0..=h {
            for n in m..=h {
                for c in 0..=h {
                    cases += 1;
                    let mut model = IlpModel::new();
                    let ze: Vec<_> = (0..h).map(|i| model.add_binary(format!("ze{i}"))).collect();
                    let lower = model.add_binary("zl");
                    let upper = model.add_binary("zu");
                    add_tick_thresholds(&mut model, &ze, m as u32, n as u32, h, lower, upper);
                    let mut values = vec![0; h + 2];
                    values[..c].fill(1);
                    let admitted: Vec<(i64, i64)> = [(0, 0), (0, 1), (1, 0), (1, 1)]
                        .into_iter()
                        .filter(|&(l, u)| {
                            values[h] = l;
                            values[h + 1] = u;
                            model.rows().iter().all(|r| r.holds(&values))
                        })
                        .collect();
                    let expected = ((c >= m) as i64, (c <= n) as i64);
                    if admitted != [expected] {
                        failures.push(format!("H={h} m={m} n={n} c={c}: {admitted:?}"));
                    }
                }
            }
        }
    }
    verdict(
        failures.is_empty(),
        format!(
            "{cases} (H, m, n, c) cases, {} failures{}",
            failures.len(),
            failures.first().map(|f| format!(", first: {f}")).unwrap_or_default()
        ),
    )
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 9] = [
        ("worked semantics example", worked_example),
        ("phi1 reproduction, horizon 11", || reproduce(PHI1, PHI1_HORIZON)),
        ("phi2 reproduction, horizon 10", || reproduce(PHI2, PHI2_HORIZON)),
        ("bundled fragments replay and satisfy", bundled_fragments),
        ("route exclusion, p2 before p4", route_exclusion),
        ("encoder/oracle equivalence", encoder_oracle_equivalence),
        ("replay completeness (paper mode)", replay_completeness),
        ("solver vs exhaustive enumeration", solver_correctness),
        ("big-M threshold table", threshold_table),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = check();
        if !v.pass {
            failed += 1;
        }
        println!(
            "criterion {}: {} - {name}: {} [{:.2}s]",
            i + 1,
            if v.pass { "PASS" } else { "FAIL" },
            v.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
