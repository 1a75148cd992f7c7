//! Weight functions, bounds and H-bounds.
//!
//! Orientation is pinned in one place: [`weight_step_ok`]. A weight
//! function strictly decreases along edges (states later in a decreasing
//! sequence get strictly smaller weights), so a sequence of length l from
//! a forces f(a) >= l - 1, which is why every weight plus one is a bound.

use std::collections::BTreeMap;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::hclosure;
use crate::relation::FiniteRelation;

/// Where a state function came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    UserSupplied,
    Derived,
}

/// A total map from a relation's domain to naturals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateFunction {
    table: BTreeMap<u64, u64>,
    pub provenance: Provenance,
}

impl StateFunction {
    pub fn new(table: BTreeMap<u64, u64>, provenance: Provenance) -> Self {
        StateFunction { table, provenance }
    }

    /// Builds the table by evaluating `f` on every domain element.
    pub fn tabulate(r: &FiniteRelation, f: impl Fn(u64) -> u64) -> Self {
        StateFunction {
            table: r.domain().iter().map(|&x| (x, f(x))).collect(),
            provenance: Provenance::Derived,
        }
    }

    pub fn get(&self, x: u64) -> Result<u64> {
        self.table.get(&x).copied().ok_or(Error::PartialFunction(x))
    }

    pub fn table(&self) -> &BTreeMap<u64, u64> {
        &self.table
    }

    /// Errors with the least uncovered state if the function is partial
    /// on the relation's domain.
    pub fn check_total(&self, r: &FiniteRelation) -> Result<()> {
        for &x in r.domain() {
            if !self.table.contains_key(&x) {
                return Err(Error::PartialFunction(x));
            }
        }
        Ok(())
    }
}

/// The single weight-orientation predicate: along an edge (x, y) the
/// weight must drop strictly.
pub fn weight_step_ok(fx: u64, fy: u64) -> bool {
    fy < fx
}

/// Verdict of a weight-function check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVerdict {
    pub ok: bool,
    /// First violating edge in lexicographic order when not ok.
    pub violating_edge: Option<(u64, u64)>,
}

/// Checks `x R y ⟹ f strictly drops from x to y` over every edge.
pub fn is_weight_function(r: &FiniteRelation, f: &StateFunction) -> Result<WeightVerdict> {
    f.check_total(r)?;
    for &(x, y) in r.edges() {
        if !weight_step_ok(f.get(x)?, f.get(y)?) {
            return Ok(WeightVerdict {
                ok: false,
                violating_edge: Some((x, y)),
            });
        }
    }
    Ok(WeightVerdict {
        ok: true,
        violating_edge: None,
    })
}

/// Verdict of a bound or H-bound check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundVerdict {
    pub ok: bool,
    /// A decreasing (resp. decreasing transitive) sequence longer than
    /// f of its first element, when not ok.
    pub violating: Option<Vec<u64>>,
}

/// Checks that every decreasing sequence from a has at most f(a)
/// elements.
pub fn is_bound(r: &FiniteRelation, f: &StateFunction) -> Result<BoundVerdict> {
    f.check_total(r)?;
    if r.find_cycle().is_some() {
        // Sequences are unbounded: pump a witness past the bound of the
        // least state that reaches a cycle.
        for &s in r.domain() {
            let cone = r.forward_cone(s);
            let sub = r.restrict(&cone)?;
            if let Some(cycle) = sub.find_cycle() {
                let witness = pumped_witness(r, s, &cycle, f.get(s)? + 1);
                return Ok(BoundVerdict {
                    ok: false,
                    violating: Some(witness),
                });
            }
        }
        unreachable!("some state reaches the cycle found above");
    }
    let lengths = r.longest_lengths().expect("acyclic by the check above");
    for (&x, &l) in &lengths {
        if l > f.get(x)? {
            let (_, witness) = r.longest_decreasing_sequence(x)?;
            return Ok(BoundVerdict {
                ok: false,
                violating: Some(witness),
            });
        }
    }
    Ok(BoundVerdict {
        ok: true,
        violating: None,
    })
}

/// Walks from `s` into `cycle` and loops until the sequence has `len`
/// elements. Deterministic: BFS parents with ascending tie-break.
fn pumped_witness(r: &FiniteRelation, s: u64, cycle: &[u64], len: u64) -> Vec<u64> {
    use std::collections::{BTreeMap, VecDeque};
    let mut parent: BTreeMap<u64, u64> = BTreeMap::new();
    let mut queue = VecDeque::new();
    queue.push_back(s);
    parent.insert(s, s);
    let mut hit = None;
    'bfs: while let Some(v) = queue.pop_front() {
        if cycle.contains(&v) {
            hit = Some(v);
            break 'bfs;
        }
        for nxt in r.successors(v) {
            parent.entry(nxt).or_insert_with(|| {
                queue.push_back(nxt);
                v
            });
        }
    }
    let hit = hit.expect("a cycle is reachable from s");
    let mut path = vec![hit];
    let mut cur = hit;
    while cur != s {
        cur = parent[&cur];
        path.push(cur);
    }
    path.reverse();
    let pos = cycle.iter().position(|&c| c == hit).unwrap();
    let mut witness = path;
    let mut i = pos;
    while (witness.len() as u64) < len {
        i = (i + 1) % cycle.len();
        witness.push(cycle[i]);
    }
    witness
}

/// Checks that every decreasing *transitive* sequence from a has at most
/// f(a) elements. The violating witness comes from the H-sequence search.
pub fn is_h_bound(r: &FiniteRelation, f: &StateFunction, cfg: &RunConfig) -> Result<BoundVerdict> {
    f.check_total(r)?;
    if let Some(x) = r.reflexive_point() {
        let len = f.get(x)? + 1;
        return Ok(BoundVerdict {
            ok: false,
            violating: Some(vec![x; len as usize]),
        });
    }
    for &x in r.domain() {
        let (len, witness) = hclosure::longest_h_sequence(r, Some(x), cfg)?;
        if len > f.get(x)? {
            return Ok(BoundVerdict {
                ok: false,
                violating: Some(witness),
            });
        }
    }
    Ok(BoundVerdict {
        ok: true,
        violating: None,
    })
}

/// Derives the canonical weight function from a bound: f*(x) is the
/// maximal decreasing-sequence length from x. Since finite relations are
/// finitely branching, f* is total whenever f is a bound, f* <= f
/// pointwise, and f* strictly drops along every edge. Both postconditions
/// are asserted, not trusted.
pub fn weight_from_bound(r: &FiniteRelation, f: &StateFunction) -> Result<StateFunction> {
    let verdict = is_bound(r, f)?;
    if !verdict.ok {
        return Err(Error::NotABound {
            witness: verdict.violating.unwrap_or_default(),
        });
    }
    let lengths = r.longest_lengths().expect("a bounded relation is acyclic");
    let derived = StateFunction::new(lengths, Provenance::Derived);
    for &x in r.domain() {
        if derived.get(x)? > f.get(x)? {
            return Err(Error::InternalInconsistency(format!(
                "derived weight exceeds the bound at state {x}"
            )));
        }
    }
    let w = is_weight_function(r, &derived)?;
    if !w.ok {
        return Err(Error::InternalInconsistency(format!(
            "derived weight fails the weight check at edge {:?}",
            w.violating_edge
        )));
    }
    Ok(derived)
}

/// Whether the relation has height omega, i.e. admits a weight function.
/// On a finite domain this is exactly acyclicity; the witness is the
/// derived weight.
pub fn has_height_omega(r: &FiniteRelation) -> (bool, Option<StateFunction>) {
    match r.longest_lengths() {
        Some(lengths) => (true, Some(StateFunction::new(lengths, Provenance::Derived))),
        None => (false, None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(domain: &[u64], edges: &[(u64, u64)]) -> FiniteRelation {
        FiniteRelation::new(domain.iter().copied(), edges.iter().copied()).unwrap()
    }

    fn sf(pairs: &[(u64, u64)]) -> StateFunction {
        StateFunction::new(pairs.iter().copied().collect(), Provenance::UserSupplied)
    }

    #[test]
    fn identity_is_a_weight_for_the_descending_chain() {
        // Edges step downward, so the identity strictly drops along them.
        let r = rel(&[0, 1, 2], &[(1, 0), (2, 1)]);
        let f = sf(&[(0, 0), (1, 1), (2, 2)]);
        assert!(is_weight_function(&r, &f).unwrap().ok);
    }

    #[test]
    fn rising_function_fails_with_first_violating_edge() {
        let r = rel(&[0, 1, 2], &[(1, 0), (2, 1)]);
        let f = sf(&[(0, 2), (1, 1), (2, 0)]);
        let v = is_weight_function(&r, &f).unwrap();
        assert!(!v.ok);
        assert_eq!(v.violating_edge, Some((1, 0)));
    }

    #[test]
    fn longest_lengths_give_a_weight_on_acyclic_relations() {
        let r = rel(&[0, 1, 2, 5], &[(2, 0), (1, 0), (2, 1), (5, 2)]);
        let f = StateFunction::new(r.longest_lengths().unwrap(), Provenance::Derived);
        assert!(is_weight_function(&r, &f).unwrap().ok);
    }

    #[test]
    fn partial_function_is_an_error() {
        let r = rel(&[0, 1], &[(1, 0)]);
        let f = sf(&[(1, 1)]);
        assert!(matches!(
            is_weight_function(&r, &f),
            Err(Error::PartialFunction(0))
        ));
    }

    #[test]
    fn constant_three_bounds_the_three_chain() {
        let r = rel(&[0, 1, 2], &[(1, 0), (2, 1)]);
        assert!(
            is_bound(&r, &StateFunction::tabulate(&r, |_| 3))
                .unwrap()
                .ok
        );
    }

    #[test]
    fn constant_two_fails_with_witness_from_two() {
        let r = rel(&[0, 1, 2], &[(1, 0), (2, 1)]);
        let v = is_bound(&r, &StateFunction::tabulate(&r, |_| 2)).unwrap();
        assert!(!v.ok);
        assert_eq!(v.violating, Some(vec![2, 1, 0]));
    }

    #[test]
    fn cycles_break_every_bound() {
        let r = rel(&[0, 1, 2], &[(0, 1), (1, 0), (2, 1)]);
        let f = StateFunction::tabulate(&r, |_| 10);
        let v = is_bound(&r, &f).unwrap();
        assert!(!v.ok);
        let w = v.violating.unwrap();
        assert_eq!(w.len(), 11);
        for pair in w.windows(2) {
            assert!(r.contains_edge(pair[0], pair[1]));
        }
    }

    #[test]
    fn h_bound_two_suffices_for_successor_steps() {
        let edges: Vec<(u64, u64)> = (0..5).map(|n| (n + 1, n)).collect();
        let r = rel(&[0, 1, 2, 3, 4, 5], &edges);
        let f = StateFunction::tabulate(&r, |_| 2);
        assert!(is_h_bound(&r, &f, &RunConfig::default()).unwrap().ok);
    }

    #[test]
    fn full_descending_order_violates_constant_four() {
        let mut edges = Vec::new();
        for x in 0..5u64 {
            for y in 0..x {
                edges.push((x, y));
            }
        }
        let r = rel(&[0, 1, 2, 3, 4], &edges);
        let v = is_h_bound(
            &r,
            &StateFunction::tabulate(&r, |_| 4),
            &RunConfig::default(),
        )
        .unwrap();
        assert!(!v.ok);
        assert_eq!(v.violating, Some(vec![4, 3, 2, 1, 0]));
    }

    #[test]
    fn longest_h_lengths_are_a_minimal_h_bound() {
        let r = rel(&[0, 1, 2], &[(1, 0), (2, 1), (2, 0)]);
        let cfg = RunConfig::default();
        let f = StateFunction::new(
            r.domain()
                .iter()
                .map(|&x| {
                    let (l, _) = hclosure::longest_h_sequence(&r, Some(x), &cfg).unwrap();
                    (x, l)
                })
                .collect(),
            Provenance::Derived,
        );
        assert!(is_h_bound(&r, &f, &cfg).unwrap().ok);
    }

    #[test]
    fn reflexive_point_pumps_past_any_h_bound() {
        let r = rel(&[3], &[(3, 3)]);
        let v = is_h_bound(
            &r,
            &StateFunction::tabulate(&r, |_| 2),
            &RunConfig::default(),
        )
        .unwrap();
        assert!(!v.ok);
        assert_eq!(v.violating, Some(vec![3, 3, 3]));
    }

    #[test]
    fn derived_weight_is_the_longest_length_table() {
        let r = rel(&[0, 1, 2], &[(1, 0), (2, 1)]);
        let f = StateFunction::tabulate(&r, |_| 3);
        let w = weight_from_bound(&r, &f).unwrap();
        let want: BTreeMap<u64, u64> = [(0, 1), (1, 2), (2, 3)].into_iter().collect();
        assert_eq!(w.table(), &want);
    }

    #[test]
    fn derived_weight_on_edgeless_is_constant_one() {
        let r = rel(&[4, 9], &[]);
        let w = weight_from_bound(&r, &StateFunction::tabulate(&r, |_| 5)).unwrap();
        assert!(w.table().values().all(|&v| v == 1));
    }

    #[test]
    fn derived_weight_on_four_chain() {
        let r = rel(&[0, 1, 2, 3], &[(3, 2), (2, 1), (1, 0)]);
        let w = weight_from_bound(&r, &StateFunction::tabulate(&r, |_| 4)).unwrap();
        let want: BTreeMap<u64, u64> = [(0, 1), (1, 2), (2, 3), (3, 4)].into_iter().collect();
        assert_eq!(w.table(), &want);
    }

    #[test]
    fn weight_from_non_bound_is_rejected() {
        let r = rel(&[0, 1, 2], &[(1, 0), (2, 1)]);
        let f = StateFunction::tabulate(&r, |_| 1);
        assert!(matches!(
            weight_from_bound(&r, &f),
            Err(Error::NotABound { .. })
        ));
    }

    #[test]
    fn height_omega_is_acyclicity() {
        let acyclic = rel(&[0, 1, 2], &[(2, 0), (1, 0)]);
        let (ok, w) = has_height_omega(&acyclic);
        assert!(ok);
        assert!(is_weight_function(&acyclic, &w.unwrap()).unwrap().ok);
        let cyclic = rel(&[0, 1], &[(0, 1), (1, 0)]);
        assert!(!has_height_omega(&cyclic).0);
    }
}
