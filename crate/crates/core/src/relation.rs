//! Finite relations, transition systems, reachability, closure and
//! well-foundedness.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::certificate::Certificate;
use crate::config::RunConfig;
use crate::error::{Error, Result};

/// An explicit binary relation over a finite set of natural-number states.
///
/// An edge `(x, y)` is read "x R y": x can step down to y, and a
/// decreasing sequence follows edges forward. Both sets are ordered, so
/// iteration order (and hence every derived witness) is canonical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteRelation {
    domain: BTreeSet<u64>,
    edges: BTreeSet<(u64, u64)>,
}

impl FiniteRelation {
    /// Builds a relation, checking that every edge endpoint is in the
    /// domain and that the default instance caps hold.
    pub fn new(
        domain: impl IntoIterator<Item = u64>,
        edges: impl IntoIterator<Item = (u64, u64)>,
    ) -> Result<Self> {
        Self::with_config(domain, edges, &RunConfig::default())
    }

    /// As [`FiniteRelation::new`] with explicit caps.
    pub fn with_config(
        domain: impl IntoIterator<Item = u64>,
        edges: impl IntoIterator<Item = (u64, u64)>,
        cfg: &RunConfig,
    ) -> Result<Self> {
        let domain: BTreeSet<u64> = domain.into_iter().collect();
        let edges: BTreeSet<(u64, u64)> = edges.into_iter().collect();
        if domain.len() > cfg.states_cap {
            return Err(Error::InstanceCapExceeded(format!(
                "{} states exceed the cap of {}",
                domain.len(),
                cfg.states_cap
            )));
        }
        if edges.len() > cfg.edges_cap {
            return Err(Error::InstanceCapExceeded(format!(
                "{} edges exceed the cap of {}",
                edges.len(),
                cfg.edges_cap
            )));
        }
        for &(x, y) in &edges {
            if !domain.contains(&x) {
                return Err(Error::StateNotInDomain(x));
            }
            if !domain.contains(&y) {
                return Err(Error::StateNotInDomain(y));
            }
        }
        Ok(FiniteRelation { domain, edges })
    }

    pub fn domain(&self) -> &BTreeSet<u64> {
        &self.domain
    }

    pub fn edges(&self) -> &BTreeSet<(u64, u64)> {
        &self.edges
    }

    pub fn contains_edge(&self, x: u64, y: u64) -> bool {
        self.edges.contains(&(x, y))
    }

    /// Forward successors of `x`: all y with (x, y) an edge, ascending.
    pub fn successors(&self, x: u64) -> impl Iterator<Item = u64> + '_ {
        self.edges
            .range((x, u64::MIN)..=(x, u64::MAX))
            .map(|&(_, y)| y)
    }

    /// Predecessors of `x`: all y with (y, x) an edge, ascending.
    pub fn predecessors(&self, x: u64) -> Vec<u64> {
        let mut out: Vec<u64> = self
            .edges
            .iter()
            .filter(|&&(_, b)| b == x)
            .map(|&(a, _)| a)
            .collect();
        out.sort_unstable();
        out
    }

    /// The relation with all edges flipped, on the same domain.
    pub fn transpose(&self) -> FiniteRelation {
        FiniteRelation {
            domain: self.domain.clone(),
            edges: self.edges.iter().map(|&(x, y)| (y, x)).collect(),
        }
    }

    /// Union of `self` and `other` (domains united).
    pub fn union(&self, other: &FiniteRelation) -> FiniteRelation {
        FiniteRelation {
            domain: self.domain.union(&other.domain).copied().collect(),
            edges: self.edges.union(&other.edges).copied().collect(),
        }
    }

    pub fn is_irreflexive(&self) -> bool {
        self.edges.iter().all(|&(x, y)| x != y)
    }

    /// Least reflexive state, if any.
    pub fn reflexive_point(&self) -> Option<u64> {
        self.edges.iter().find(|&&(x, y)| x == y).map(|&(x, _)| x)
    }

    pub fn is_transitive(&self) -> bool {
        self.violating_transitivity_triple().is_none()
    }

    /// First (x, y, z) with x R y, y R z but not x R z, in lexicographic
    /// order of (x, y, z).
    pub fn violating_transitivity_triple(&self) -> Option<(u64, u64, u64)> {
        for &(x, y) in &self.edges {
            for z in self.successors(y) {
                if !self.contains_edge(x, z) {
                    return Some((x, y, z));
                }
            }
        }
        None
    }

    /// Smallest transitive relation containing `self`, on the same domain.
    pub fn transitive_closure(&self, cfg: &RunConfig) -> Result<FiniteRelation> {
        let n = self.domain.len();
        if n.saturating_mul(n) > cfg.edges_cap {
            return Err(Error::InstanceCapExceeded(format!(
                "|domain|^2 = {} exceeds the edge cap of {}",
                n * n,
                cfg.edges_cap
            )));
        }
        let idx: BTreeMap<u64, usize> = self
            .domain
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        let vals: Vec<u64> = self.domain.iter().copied().collect();
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(x, y) in &self.edges {
            succ[idx[&x]].push(idx[&y]);
        }
        let mut edges = BTreeSet::new();
        // One BFS per source; n is capped so this stays cheap.
        for s in 0..n {
            let mut seen = vec![false; n];
            let mut queue: VecDeque<usize> = succ[s].iter().copied().collect();
            for &t in &succ[s] {
                seen[t] = true;
            }
            while let Some(t) = queue.pop_front() {
                edges.insert((vals[s], vals[t]));
                for &u in &succ[t] {
                    if !seen[u] {
                        seen[u] = true;
                        queue.push_back(u);
                    }
                }
            }
        }
        Ok(FiniteRelation {
            domain: self.domain.clone(),
            edges,
        })
    }

    /// Restriction to `s`: domain becomes `s`, edges intersected with s^2.
    pub fn restrict(&self, s: &BTreeSet<u64>) -> Result<FiniteRelation> {
        for &x in s {
            if !self.domain.contains(&x) {
                return Err(Error::StateNotInDomain(x));
            }
        }
        Ok(FiniteRelation {
            domain: s.clone(),
            edges: self
                .edges
                .iter()
                .filter(|&&(x, y)| s.contains(&x) && s.contains(&y))
                .copied()
                .collect(),
        })
    }

    /// Whether the relation admits no infinite decreasing sequence.
    ///
    /// On a finite domain this is exactly acyclicity. A false verdict
    /// carries a cycle (rotated to start at its least element); a true
    /// verdict carries a ranking that strictly decreases along edges.
    pub fn is_well_founded(&self) -> WfVerdict {
        if let Some(cycle) = self.find_cycle() {
            return WfVerdict {
                well_founded: false,
                certificate: Certificate::Cycle(cycle),
            };
        }
        // Acyclic: rank by longest forward path, zero-based.
        let lengths = self.longest_lengths().expect("acyclic by the check above");
        let ranking: BTreeMap<u64, u64> = lengths.into_iter().map(|(x, l)| (x, l - 1)).collect();
        WfVerdict {
            well_founded: true,
            certificate: Certificate::Ranking(ranking),
        }
    }

    /// Deterministic cycle search: colored DFS from states in ascending
    /// order, neighbors ascending. The returned cycle is rotated so its
    /// least element comes first.
    pub fn find_cycle(&self) -> Option<Vec<u64>> {
        #[derive(Clone, Copy, PartialEq)]
        enum Color {
            White,
            Gray,
            Black,
        }
        let mut color: BTreeMap<u64, Color> =
            self.domain.iter().map(|&v| (v, Color::White)).collect();
        let mut stack: Vec<u64> = Vec::new();

        // Iterative DFS with an explicit frame stack so deep chains are fine.
        for &root in &self.domain {
            if color[&root] != Color::White {
                continue;
            }
            let mut frames: Vec<(u64, Vec<u64>)> = Vec::new();
            let succs: Vec<u64> = self.successors(root).collect();
            color.insert(root, Color::Gray);
            stack.push(root);
            frames.push((root, succs));
            while let Some((node, succs)) = frames.last_mut() {
                if let Some(next) = succs.first().copied() {
                    succs.remove(0);
                    match color[&next] {
                        Color::Gray => {
                            // Found a cycle: slice the gray stack from `next`.
                            let pos = stack.iter().position(|&v| v == next).unwrap();
                            let mut cycle = stack[pos..].to_vec();
                            let min_pos = cycle
                                .iter()
                                .enumerate()
                                .min_by_key(|&(_, &v)| v)
                                .map(|(i, _)| i)
                                .unwrap();
                            cycle.rotate_left(min_pos);
                            return Some(cycle);
                        }
                        Color::White => {
                            let nsuccs: Vec<u64> = self.successors(next).collect();
                            color.insert(next, Color::Gray);
                            stack.push(next);
                            frames.push((next, nsuccs));
                        }
                        Color::Black => {}
                    }
                } else {
                    let done = *node;
                    color.insert(done, Color::Black);
                    stack.pop();
                    frames.pop();
                }
            }
        }
        None
    }

    /// Longest decreasing-sequence length (element count) from each state.
    /// `None` when the relation is cyclic.
    pub fn longest_lengths(&self) -> Option<BTreeMap<u64, u64>> {
        if self.find_cycle().is_some() {
            return None;
        }
        let mut memo: BTreeMap<u64, u64> = BTreeMap::new();
        for &v in self.domain.iter().rev() {
            self.longest_from(v, &mut memo);
        }
        Some(memo)
    }

    fn longest_from(&self, v: u64, memo: &mut BTreeMap<u64, u64>) -> u64 {
        if let Some(&l) = memo.get(&v) {
            return l;
        }
        // Iterative post-order to avoid recursion depth on long chains.
        let mut stack = vec![v];
        while let Some(&top) = stack.last() {
            if memo.contains_key(&top) {
                stack.pop();
                continue;
            }
            let pending: Vec<u64> = self
                .successors(top)
                .filter(|s| !memo.contains_key(s))
                .collect();
            if pending.is_empty() {
                let best = self.successors(top).map(|s| memo[&s]).max().unwrap_or(0);
                memo.insert(top, best + 1);
                stack.pop();
            } else {
                stack.extend(pending);
            }
        }
        memo[&v]
    }

    /// Maximal decreasing sequence starting at `start`, with its witness.
    ///
    /// The witness is the lexicographically least sequence among the
    /// maximal-length ones. Errors with [`Error::NotWellFounded`] when a
    /// cycle is reachable from `start` along decreasing steps.
    pub fn longest_decreasing_sequence(&self, start: u64) -> Result<(u64, Vec<u64>)> {
        if !self.domain.contains(&start) {
            return Err(Error::StateNotInDomain(start));
        }
        let reach = self.forward_cone(start);
        let sub = self.restrict(&reach)?;
        if let Some(cycle) = sub.find_cycle() {
            return Err(Error::NotWellFounded { start, cycle });
        }
        let memo = sub.longest_lengths().expect("cycle handled above");
        let mut witness = vec![start];
        let mut cur = start;
        loop {
            let need = memo[&cur] - 1;
            if need == 0 {
                break;
            }
            let next = sub
                .successors(cur)
                .find(|s| memo[s] == need)
                .expect("some successor attains the maximum");
            witness.push(next);
            cur = next;
        }
        Ok((memo[&start], witness))
    }

    /// States reachable from `start` along forward edges, including it.
    pub fn forward_cone(&self, start: u64) -> BTreeSet<u64> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start);
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            for s in self.successors(v) {
                if seen.insert(s) {
                    queue.push_back(s);
                }
            }
        }
        seen
    }
}

/// Verdict of a well-foundedness check with its witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WfVerdict {
    pub well_founded: bool,
    pub certificate: Certificate,
}

/// A transition-based program: a relation plus its initial states.
///
/// A computation starts at an initial state and repeatedly moves from
/// `s_i` to some `s_{i+1}` with `(s_{i+1}, s_i)` an edge. The accessible
/// set is always derived, never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionSystem {
    pub relation: FiniteRelation,
    initial: BTreeSet<u64>,
}

impl TransitionSystem {
    pub fn new(relation: FiniteRelation, initial: impl IntoIterator<Item = u64>) -> Result<Self> {
        let initial: BTreeSet<u64> = initial.into_iter().collect();
        for &s in &initial {
            if !relation.domain().contains(&s) {
                return Err(Error::StateNotInDomain(s));
            }
        }
        Ok(TransitionSystem { relation, initial })
    }

    pub fn initial(&self) -> &BTreeSet<u64> {
        &self.initial
    }

    /// All states appearing in some computation: BFS from the initial
    /// states along reversed edges.
    pub fn accessible_states(&self) -> BTreeSet<u64> {
        let mut seen: BTreeSet<u64> = self.initial.clone();
        let mut queue: VecDeque<u64> = self.initial.iter().copied().collect();
        while let Some(s) = queue.pop_front() {
            for (a, _) in self
                .relation
                .edges()
                .iter()
                .copied()
                .filter(|&(_, b)| b == s)
            {
                if seen.insert(a) {
                    queue.push_back(a);
                }
            }
        }
        seen
    }

    /// Length (element count) of the longest computation starting at `s`.
    /// `None` when an infinite computation exists from `s`.
    pub fn longest_computation(&self, s: u64) -> Option<u64> {
        let rev = self.relation.transpose();
        if !rev.domain().contains(&s) {
            return None;
        }
        let cone = rev.forward_cone(s);
        let sub = rev.restrict(&cone).ok()?;
        if sub.find_cycle().is_some() {
            return None;
        }
        sub.longest_lengths().map(|m| m[&s])
    }
}

/// A finite ordered list of states claimed to be a decreasing sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecreasingSequence {
    items: Vec<u64>,
}

impl DecreasingSequence {
    /// Validates the plain decreasing condition: each consecutive pair
    /// follows an edge.
    pub fn new(r: &FiniteRelation, items: Vec<u64>) -> Result<Self> {
        for &x in &items {
            if !r.domain().contains(&x) {
                return Err(Error::StateNotInDomain(x));
            }
        }
        for w in items.windows(2) {
            if !r.contains_edge(w[0], w[1]) {
                return Err(Error::NotTransitiveSequence);
            }
        }
        Ok(DecreasingSequence { items })
    }

    /// Validates the transitive condition as well: every pair, not just
    /// consecutive ones, follows an edge.
    pub fn new_transitive(r: &FiniteRelation, items: Vec<u64>) -> Result<Self> {
        let seq = Self::new(r, items)?;
        for i in 0..seq.items.len() {
            for j in i + 1..seq.items.len() {
                if !r.contains_edge(seq.items[i], seq.items[j]) {
                    return Err(Error::NotTransitiveSequence);
                }
            }
        }
        Ok(seq)
    }

    pub fn items(&self) -> &[u64] {
        &self.items
    }

    pub fn len(&self) -> u64 {
        self.items.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(domain: &[u64], edges: &[(u64, u64)]) -> FiniteRelation {
        FiniteRelation::new(domain.iter().copied(), edges.iter().copied()).unwrap()
    }

    #[test]
    fn closure_already_transitive() {
        let r = rel(&[0, 1], &[(1, 0)]);
        let c = r.transitive_closure(&RunConfig::default()).unwrap();
        assert_eq!(c.edges(), r.edges());
    }

    #[test]
    fn closure_one_composition_step() {
        let r = rel(&[0, 1, 2], &[(1, 0), (2, 1)]);
        let c = r.transitive_closure(&RunConfig::default()).unwrap();
        let want: BTreeSet<(u64, u64)> = [(1, 0), (2, 1), (2, 0)].into_iter().collect();
        assert_eq!(c.edges(), &want);
    }

    #[test]
    fn closure_of_two_cycle_saturates() {
        let r = rel(&[0, 1], &[(0, 1), (1, 0)]);
        let c = r.transitive_closure(&RunConfig::default()).unwrap();
        let want: BTreeSet<(u64, u64)> = [(0, 1), (1, 0), (0, 0), (1, 1)].into_iter().collect();
        assert_eq!(c.edges(), &want);
    }

    #[test]
    fn closure_refuses_past_edge_cap() {
        let cfg = RunConfig {
            edges_cap: 8,
            ..RunConfig::default()
        };
        let r = rel(&[0, 1, 2], &[(1, 0)]);
        assert!(matches!(
            r.transitive_closure(&cfg),
            Err(Error::InstanceCapExceeded(_))
        ));
    }

    #[test]
    fn accessible_linear_chain() {
        let ts = TransitionSystem::new(rel(&[0, 1, 2], &[(1, 0), (2, 1)]), [0]).unwrap();
        let want: BTreeSet<u64> = [0, 1, 2].into_iter().collect();
        assert_eq!(ts.accessible_states(), want);
    }

    #[test]
    fn accessible_isolated_initial() {
        let ts = TransitionSystem::new(rel(&[0, 1, 5], &[(1, 0)]), [5]).unwrap();
        let want: BTreeSet<u64> = [5].into_iter().collect();
        assert_eq!(ts.accessible_states(), want);
    }

    #[test]
    fn accessible_ignores_unreachable_component() {
        let ts = TransitionSystem::new(rel(&[0, 1, 2, 3], &[(1, 0), (3, 2)]), [0]).unwrap();
        let want: BTreeSet<u64> = [0, 1].into_iter().collect();
        assert_eq!(ts.accessible_states(), want);
    }

    #[test]
    fn well_founded_chain_has_ranking() {
        let r = rel(&[0, 1, 2], &[(1, 0), (2, 1)]);
        let v = r.is_well_founded();
        assert!(v.well_founded);
        let want: BTreeMap<u64, u64> = [(0, 0), (1, 1), (2, 2)].into_iter().collect();
        assert_eq!(v.certificate, Certificate::Ranking(want));
    }

    #[test]
    fn self_loop_is_not_well_founded() {
        let r = rel(&[0], &[(0, 0)]);
        let v = r.is_well_founded();
        assert!(!v.well_founded);
        assert_eq!(v.certificate, Certificate::Cycle(vec![0]));
    }

    #[test]
    fn three_cycle_witness_starts_at_least_element() {
        let r = rel(&[0, 1, 2], &[(0, 1), (1, 2), (2, 0)]);
        let v = r.is_well_founded();
        assert!(!v.well_founded);
        assert_eq!(v.certificate, Certificate::Cycle(vec![0, 1, 2]));
    }

    #[test]
    fn longest_sequence_follows_edges_forward() {
        let r = rel(&[0, 1, 2], &[(1, 0), (2, 1)]);
        assert_eq!(
            r.longest_decreasing_sequence(2).unwrap(),
            (3, vec![2, 1, 0])
        );
        assert_eq!(r.longest_decreasing_sequence(0).unwrap(), (1, vec![0]));
    }

    #[test]
    fn longest_sequence_on_edgeless_state() {
        let r = rel(&[7], &[]);
        assert_eq!(r.longest_decreasing_sequence(7).unwrap(), (1, vec![7]));
    }

    #[test]
    fn longest_sequence_prefers_long_path_over_shortcut() {
        let r = rel(&[0, 1, 2], &[(2, 0), (1, 0), (2, 1)]);
        assert_eq!(
            r.longest_decreasing_sequence(2).unwrap(),
            (3, vec![2, 1, 0])
        );
    }

    #[test]
    fn longest_sequence_errors_when_cycle_reachable() {
        let r = rel(&[0, 1], &[(0, 1), (1, 0)]);
        assert!(matches!(
            r.longest_decreasing_sequence(0),
            Err(Error::NotWellFounded { start: 0, .. })
        ));
    }

    #[test]
    fn restrict_drops_outside_edges() {
        let r = rel(&[0, 1, 2], &[(1, 0), (2, 1)]);
        let s: BTreeSet<u64> = [0, 1].into_iter().collect();
        let got = r.restrict(&s).unwrap();
        let want: BTreeSet<(u64, u64)> = [(1, 0)].into_iter().collect();
        assert_eq!(got.edges(), &want);
        assert_eq!(got.domain(), &s);
    }

    #[test]
    fn restrict_to_full_domain_is_identity() {
        let r = rel(&[0, 1, 2], &[(1, 0), (2, 1)]);
        assert_eq!(&r.restrict(r.domain()).unwrap(), &r);
    }

    #[test]
    fn restrict_can_drop_every_edge() {
        let r = rel(&[0, 1], &[(0, 1), (1, 0)]);
        let s: BTreeSet<u64> = [0].into_iter().collect();
        let got = r.restrict(&s).unwrap();
        assert!(got.edges().is_empty());
    }

    #[test]
    fn restrict_rejects_foreign_state() {
        let r = rel(&[0, 1], &[(1, 0)]);
        let s: BTreeSet<u64> = [0, 9].into_iter().collect();
        assert!(matches!(r.restrict(&s), Err(Error::StateNotInDomain(9))));
    }

    #[test]
    fn edge_endpoints_must_be_in_domain() {
        assert!(matches!(
            FiniteRelation::new([0], [(0, 3)]),
            Err(Error::StateNotInDomain(3))
        ));
    }

    #[test]
    fn longest_computation_runs_against_edges() {
        // Edges (new, old): computation 0 -> 1 -> 2.
        let ts = TransitionSystem::new(rel(&[0, 1, 2], &[(1, 0), (2, 1)]), [0]).unwrap();
        assert_eq!(ts.longest_computation(0), Some(3));
        assert_eq!(ts.longest_computation(2), Some(1));
    }

    #[test]
    fn decreasing_sequence_validators() {
        let r = rel(&[0, 1, 2], &[(2, 1), (1, 0), (2, 0)]);
        assert!(DecreasingSequence::new(&r, vec![2, 1, 0]).is_ok());
        assert!(DecreasingSequence::new_transitive(&r, vec![2, 1, 0]).is_ok());
        let r2 = rel(&[0, 1, 2], &[(2, 1), (1, 0)]);
        assert!(DecreasingSequence::new(&r2, vec![2, 1, 0]).is_ok());
        assert!(DecreasingSequence::new_transitive(&r2, vec![2, 1, 0]).is_err());
    }
}
