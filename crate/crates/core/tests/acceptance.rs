//! Acceptance suite: one test per criterion, each printing a pass line
//! with its runtime (visible with `cargo test --test acceptance --
//! --nocapture`). Every tolerance is pinned here, not deferred.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wfcheck::bounds::{self, StateFunction};
use wfcheck::hclosure;
use wfcheck::hierarchy;
use wfcheck::invariant::{self, Conclusion};
use wfcheck::largeness::{self, LargenessMode};
use wfcheck::program;
use wfcheck::ramsey::{self, Coloring};
use wfcheck::relation::{FiniteRelation, TransitionSystem};
use wfcheck::{Error, RunConfig};

fn cfg() -> RunConfig {
    RunConfig::default()
}

fn finish(name: &str, start: Instant, limit: Duration) {
    let elapsed = start.elapsed();
    println!("{name}: PASS ({elapsed:.2?})");
    assert!(
        elapsed < limit,
        "{name} took {elapsed:.2?}, over the {limit:.2?} budget"
    );
}

/// Cycle oracle independent of the library path: boolean reachability
/// matrix, squared to fixpoint.
fn oracle_has_cycle(r: &FiniteRelation) -> bool {
    let vals: Vec<u64> = r.domain().iter().copied().collect();
    let n = vals.len();
    let idx: BTreeMap<u64, usize> = vals.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut reach = vec![vec![false; n]; n];
    for &(x, y) in r.edges() {
        reach[idx[&x]][idx[&y]] = true;
    }
    loop {
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                if !reach[i][j] {
                    continue;
                }
                let row: Vec<bool> = reach[j].clone();
                for (k, &step) in row.iter().enumerate() {
                    if step && !reach[i][k] {
                        reach[i][k] = true;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    (0..n).any(|i| reach[i][i])
}

fn random_system(rng: &mut ChaCha8Rng, max_states: u64, max_edges: usize) -> TransitionSystem {
    let n = rng.gen_range(2..=max_states);
    let mut edges = BTreeSet::new();
    let target = rng.gen_range(0..=max_edges);
    for _ in 0..target {
        edges.insert((rng.gen_range(0..n), rng.gen_range(0..n)));
    }
    let relation = FiniteRelation::new(0..n, edges).unwrap();
    let inits: Vec<u64> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
    let inits = if inits.is_empty() { vec![0] } else { inits };
    TransitionSystem::new(relation, inits).unwrap()
}

#[test]
fn criterion_1_termination_theorem_finite_soundness_completeness() {
    let start = Instant::now();
    let cfg = cfg();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for case in 0..1000 {
        let ts = random_system(&mut rng, 12, 30);
        let acc = ts.accessible_states();
        let restricted = ts.relation.restrict(&acc).unwrap();
        let closed = restricted.transitive_closure(&cfg).unwrap();
        let verdict = invariant::check_invariant(&ts, &[closed], &cfg).unwrap();
        let cyclic = oracle_has_cycle(&restricted);
        assert_eq!(
            verdict.conclusion == Conclusion::Terminating,
            !cyclic,
            "case {case}: checker and cycle oracle disagree"
        );
        if !cyclic {
            let parts = invariant::find_invariant(&ts, 1, &cfg).unwrap();
            let parts = parts.expect("one part must suffice on acyclic instances");
            let check = invariant::check_invariant(&ts, &parts, &cfg).unwrap();
            assert_eq!(check.conclusion, Conclusion::Terminating);
        } else {
            assert_eq!(verdict.conclusion, Conclusion::NonterminatingWitness);
            assert!(verdict.nonterminating_cycle.is_some());
        }
    }
    finish(
        "criterion 1 (termination theorem, 1000 systems)",
        start,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_2_h_closure_finite_instance() {
    let start = Instant::now();
    let cfg = cfg();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..500 {
        let n = rng.gen_range(2..=10u64);
        let k = rng.gen_range(1..=3usize);
        let mut union = FiniteRelation::new(0..n, []).unwrap();
        for _ in 0..k {
            let mut edges = Vec::new();
            for x in 0..n {
                for y in 0..n {
                    if x != y && rng.gen_bool(0.25) {
                        edges.push((x, y));
                    }
                }
            }
            let r = FiniteRelation::new(0..n, edges).unwrap();
            assert!(hclosure::is_h_well_founded(&r).h_well_founded);
            union = union.union(&r);
        }
        assert!(
            hclosure::is_h_well_founded(&union).h_well_founded,
            "a union of irreflexive relations stayed irreflexive"
        );
    }
    // Longest-H agreement against explicit sequence enumeration.
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..150 {
        let n = rng.gen_range(2..=8u64);
        let mut edges = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if x != y && rng.gen_bool(0.3) {
                    edges.push((x, y));
                }
            }
        }
        let r = FiniteRelation::new(0..n, edges).unwrap();
        let (len, wit) = hclosure::longest_h_sequence(&r, None, &cfg).unwrap();
        assert!(hclosure::is_h_member(&r, &wit).unwrap());
        assert_eq!(len, brute_longest_h(&r), "relation {:?}", r.edges());
    }
    finish(
        "criterion 2 (H-closure, 500 unions + 150 brute checks)",
        start,
        Duration::from_secs(120),
    );
}

/// All transitive decreasing sequences by direct extension, checking
/// every pair against the edge set.
fn brute_longest_h(r: &FiniteRelation) -> u64 {
    fn extend(r: &FiniteRelation, seq: &mut Vec<u64>, best: &mut u64) {
        *best = (*best).max(seq.len() as u64);
        for &y in r.domain() {
            if seq.iter().all(|&x| r.contains_edge(x, y)) {
                seq.push(y);
                extend(r, seq, best);
                seq.pop();
            }
        }
    }
    let mut best = 0;
    let mut seq = Vec::new();
    extend(r, &mut seq, &mut best);
    best
}

#[test]
fn criterion_3_ramsey_micro_benchmarks() {
    let start = Instant::now();
    let cfg = cfg();
    // Every 2-coloring of six vertices has a homogeneous triangle.
    for bits in 0u32..(1 << 15) {
        let c = coloring_from_bits(6, bits);
        let w = ramsey::largest_homogeneous_set(&c, &cfg).unwrap();
        assert!(w.members.len() >= 3, "bits {bits:#x}");
        assert!(w.validate(&c));
    }
    // P* is transitive: exhaustively on up to six vertices...
    for n in 2..=6u64 {
        let pairs = (n * (n - 1) / 2) as u32;
        for bits in 0u32..(1 << pairs) {
            let c = coloring_from_bits(n, bits);
            let out = ramsey::p_star(&c);
            assert!(out.disagreements.is_empty(), "n {n} bits {bits:#x}");
            let (ok, triple) = ramsey::is_transitive_coloring(&out.coloring);
            assert!(ok, "n {n} bits {bits:#x} violates at {triple:?}");
        }
    }
    // ...and on ten thousand random colorings of up to twelve.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10_000 {
        let n = rng.gen_range(2..=12u64);
        let mut map = BTreeMap::new();
        for i in 0..n {
            for j in i + 1..n {
                map.insert((i, j), u32::from(rng.gen_bool(0.5)));
            }
        }
        let c = Coloring::new(0..n, 2, map).unwrap();
        let out = ramsey::p_star(&c);
        assert!(out.disagreements.is_empty());
        assert!(ramsey::is_transitive_coloring(&out.coloring).0);
    }
    finish(
        "criterion 3 (Ramsey: 2^15 colorings + P* transitivity)",
        start,
        Duration::from_secs(120),
    );
}

fn coloring_from_bits(n: u64, bits: u32) -> Coloring {
    let mut map = BTreeMap::new();
    let mut t = 0;
    for i in 0..n {
        for j in i + 1..n {
            map.insert((i, j), (bits >> t) & 1);
            t += 1;
        }
    }
    Coloring::new(0..n, 2, map).unwrap()
}

#[test]
fn criterion_4_exact_derived_values() {
    let start = Instant::now();
    let cfg = cfg();
    for x in 0..=20u64 {
        let v = hierarchy::fgh_u64(1, x, &cfg.fgh).unwrap();
        assert_eq!(u64::try_from(&v).unwrap(), 2 * x + 1);
    }
    let f22 = hierarchy::fgh_u64(2, 2, &cfg.fgh).unwrap();
    assert_eq!(u64::try_from(&f22).unwrap(), 23);
    for x in 0..=5u64 {
        assert_eq!(largeness::ww(0, x, 100, &cfg).unwrap(), 2 * x + 2);
        assert_eq!(largeness::hh(0, x, 100, &cfg).unwrap(), 2 * x + 2);
    }
    assert_eq!(largeness::hh(1, 0, 100, &cfg).unwrap(), 2);
    let big: BTreeSet<u64> = [1, 2, 3, 4].into_iter().collect();
    assert!(
        largeness::is_k_large(&big, 2, LargenessMode::Exhaustive, &cfg)
            .unwrap()
            .is_some()
    );
    let small: BTreeSet<u64> = [3, 4, 5].into_iter().collect();
    assert!(
        largeness::is_k_large(&small, 1, LargenessMode::Exhaustive, &cfg)
            .unwrap()
            .is_none()
    );
    finish(
        "criterion 4 (exact derived values)",
        start,
        Duration::from_secs(60),
    );
}

/// Deterministic relation accepted by the F_1 bound check, produced by
/// seeded rejection sampling with a descending-chain fallback.
fn seeded_f1_bounded(rng: &mut ChaCha8Rng, deterministic: bool) -> FiniteRelation {
    let cfg = cfg();
    for _ in 0..60 {
        let n = rng.gen_range(3..=30u64);
        let mut values: BTreeSet<u64> = BTreeSet::new();
        while values.len() < n as usize {
            values.insert(rng.gen_range(0..45u64));
        }
        let vals: Vec<u64> = values.iter().copied().collect();
        let mut edges = BTreeSet::new();
        for &x in &vals {
            let out_degree = if deterministic {
                usize::from(rng.gen_bool(0.7))
            } else {
                rng.gen_range(0..=2usize)
            };
            for _ in 0..out_degree {
                let y = vals[rng.gen_range(0..vals.len())];
                if y != x {
                    edges.insert((x, y));
                }
            }
        }
        let r = FiniteRelation::new(values.iter().copied(), edges).unwrap();
        if deterministic
            && r.domain()
                .iter()
                .any(|&x| r.successors(x).take(2).count() > 1)
        {
            continue;
        }
        let f1 = StateFunction::new(
            r.domain().iter().map(|&x| (x, 2 * x + 1)).collect(),
            bounds::Provenance::Derived,
        );
        if bounds::is_bound(&r, &f1).unwrap().ok {
            return r;
        }
        let _ = &cfg;
    }
    // Fallback: a strictly descending chain is always F_1-bounded.
    let top = rng.gen_range(5..=20u64);
    let edges: Vec<(u64, u64)> = (1..=top).map(|x| (x, x - 1)).collect();
    FiniteRelation::new(0..=top, edges).unwrap()
}

#[test]
fn criterion_5_decomposition_theorems() {
    let start = Instant::now();
    let cfg = cfg();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for case in 0..200 {
        let r = seeded_f1_bounded(&mut rng, true);
        let d = invariant::decompose_bounded(&r, 1, &cfg)
            .unwrap_or_else(|e| panic!("case {case}: {e}"));
        assert_eq!(d.parts().len(), 3, "T_>, T_0, T_1");
        let closed = r.transitive_closure(&cfg).unwrap();
        for &(x, y) in closed.edges() {
            assert!(
                d.parts().iter().any(|p| p.contains_edge(x, y)),
                "case {case}: uncovered closure pair ({x},{y})"
            );
        }
        for part in d.parts() {
            let f0 = StateFunction::tabulate(part, |x| x + 1);
            assert!(bounds::is_bound(part, &f0).unwrap().ok, "case {case}");
        }
    }
    // The worked ascending-chain example reproduces its rank table.
    let edges: Vec<(u64, u64)> = (2..=5u64).map(|x| (x, x + 1)).collect();
    let chain = FiniteRelation::new(2..=6, edges).unwrap();
    let d = invariant::decompose_bounded(&chain, 1, &cfg).unwrap();
    let want: BTreeMap<u64, u64> = [(2, 1), (3, 0), (4, 0), (5, 0), (6, 0)]
        .into_iter()
        .collect();
    assert_eq!(d.rank_table.ranks[0], want);
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    for case in 0..200 {
        let r = seeded_f1_bounded(&mut rng, false);
        let d = invariant::decompose_h_bounded(&r, 1, &cfg)
            .unwrap_or_else(|e| panic!("case {case}: {e}"));
        for part in d.parts() {
            let f0 = StateFunction::tabulate(part, |x| x + 1);
            assert!(
                bounds::is_h_bound(part, &f0, &cfg).unwrap().ok,
                "case {case}"
            );
        }
    }
    finish(
        "criterion 5 (decompositions, 200 + 200 seeds)",
        start,
        Duration::from_secs(180),
    );
}

#[test]
fn criterion_6_guarded_program_end_to_end() {
    let start = Instant::now();
    let cfg = cfg();
    let mut src = String::new();
    for x in 0..=3 {
        for y in 0..=3 {
            src.push_str(&format!("init x={x} y={y}\n"));
        }
    }
    src.push_str("x>0 & y>0 & x>y -> x:=y, y:=2^(x+y)\n");
    src.push_str("x>0 & y>0 & x<=y -> y:=y-1\n");
    let prog = program::parse_program(&src).unwrap();
    let sim = program::simulate_program(&prog, 2_000, 200, &cfg).unwrap();
    assert!(!sim.truncated, "caps 2000/200 must suffice for inits <= 3");

    // The two guard relations: x positive and strictly decreased, or y
    // positive and strictly decreased (later state first).
    let r1 = program::relation_over_states(&sim, &cfg, |later, earlier| {
        earlier[0] > BigInt::from(0) && later[0] < earlier[0]
    })
    .unwrap();
    let r2 = program::relation_over_states(&sim, &cfg, |later, earlier| {
        earlier[1] > BigInt::from(0) && later[1] < earlier[1]
    })
    .unwrap();
    let verdict = invariant::check_invariant(&sim.system, &[r1, r2], &cfg).unwrap();
    assert_eq!(verdict.conclusion, Conclusion::Terminating);

    // One-sided ceiling: measured longest computation from each initial
    // state never exceeds F_7 of the encoded start; a budget blowout
    // means the ceiling dwarfs any measured length.
    let ceiling_budget = wfcheck::FghBudget::new(1 << 16, 5_000);
    for &init in sim.system.initial() {
        let measured = sim.system.longest_computation(init).unwrap();
        match hierarchy::fgh_u64(7, init, &ceiling_budget) {
            Ok(ceiling) => {
                assert!(
                    num_bigint::BigUint::from(measured) <= ceiling,
                    "state {init}"
                )
            }
            Err(Error::BudgetExceeded(_)) => {}
            Err(e) => panic!("unexpected error {e}"),
        }
    }
    finish(
        "criterion 6 (guarded program end to end)",
        start,
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_7_largeness_coherence() {
    let start = Instant::now();
    let cfg = cfg();
    // Footnote consistency on every subset of {0..8}.
    for mask in 1u32..(1 << 9) {
        let s: BTreeSet<u64> = (0..9).filter(|&i| mask & (1 << i) != 0).collect();
        let one = largeness::is_one_large(&s).unwrap();
        let rec = largeness::is_k_large(&s, 1, LargenessMode::Exhaustive, &cfg)
            .unwrap()
            .is_some();
        assert_eq!(one, rec, "set {s:?}");
    }
    // Mode agreement on every subset of {0..12} for k <= 3, plus
    // soundness of the contiguous pre-pass.
    for mask in 1u32..(1 << 13) {
        let s: BTreeSet<u64> = (0..13).filter(|&i| mask & (1 << i) != 0).collect();
        for k in 1..=3u32 {
            let ex = largeness::is_k_large(&s, k, LargenessMode::Exhaustive, &cfg)
                .unwrap()
                .is_some();
            let iv = largeness::is_k_large(&s, k, LargenessMode::Intervals, &cfg)
                .unwrap()
                .is_some();
            assert_eq!(ex, iv, "set {s:?} level {k}");
            if largeness::intervals_prepass(&s, k, &cfg).unwrap() {
                assert!(ex, "pre-pass accepted a non-large set {s:?} at {k}");
            }
        }
    }
    // Interval largeness along seeded prefixes, k <= 2: always true.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..100 {
        let (k, prefix, n) = if case % 5 < 3 {
            // Dense random prefixes at low levels.
            let mut prefix = vec![rng.gen_range(0..2u64)];
            for _ in 0..1200 {
                let next = prefix.last().unwrap() + rng.gen_range(1..=2u64);
                prefix.push(next);
            }
            (rng.gen_range(0..=1u32), prefix, rng.gen_range(1..=6u64))
        } else {
            // Near-identity prefixes reach level two.
            let c = rng.gen_range(0..=2u64);
            let prefix: Vec<u64> = (0..200).map(|i| i + c).collect();
            let n = if c == 0 {
                rng.gen_range(1..=3u64)
            } else {
                rng.gen_range(1..=2u64)
            };
            (2, prefix, n)
        };
        match largeness::verify_interval_largeness(k, &prefix, n, &cfg) {
            Ok(cert) => assert!(cert.validate(), "case {case}"),
            Err(e) => panic!("case {case} (k={k}, n={n}): {e}"),
        }
    }
    finish(
        "criterion 7 (largeness coherence)",
        start,
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_8_depth_checker() {
    let start = Instant::now();
    let cfg = cfg();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for case in 0..100 {
        // Union of two strictly descending (hence F_0-bounded) parts.
        let n = rng.gen_range(3..=10u64);
        let mut edges = BTreeSet::new();
        for _ in 0..2 {
            for _ in 0..rng.gen_range(1..=5) {
                let x = rng.gen_range(1..n);
                let y = rng.gen_range(0..x);
                edges.insert((x, y));
            }
        }
        let r = FiniteRelation::new(0..n, edges).unwrap();
        let v2 = invariant::depth_linearly_bounded(&r, 2, false, &cfg).unwrap();
        assert!(v2.accepted, "case {case}: {:?}", r.edges());
        // Monotone in n, and acceptance implies well-foundedness.
        let v3 = invariant::depth_linearly_bounded(&r, 3, false, &cfg).unwrap();
        assert!(v3.accepted, "case {case}: monotonicity");
        assert!(r.is_well_founded().well_founded);
    }
    // Monotonicity and soundness on arbitrary small seeds.
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    for _ in 0..60 {
        let n = rng.gen_range(2..=5u64);
        let mut edges = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if x != y && rng.gen_bool(0.25) {
                    edges.push((x, y));
                }
            }
        }
        let r = FiniteRelation::new(0..n, edges).unwrap();
        let v1 = invariant::depth_linearly_bounded(&r, 1, false, &cfg).unwrap();
        let v2 = invariant::depth_linearly_bounded(&r, 2, false, &cfg).unwrap();
        if v1.accepted {
            assert!(v2.accepted);
        }
        if v2.accepted {
            assert!(r.is_well_founded().well_founded);
        }
    }
    finish(
        "criterion 8 (depth checker, 100 + 60 seeds)",
        start,
        Duration::from_secs(120),
    );
}
