//! The termination check through disjunctively well-founded transition
//! invariants, invariant search, the rank-based decomposition of bounded
//! relations, and the depth-bounded iterated checker.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::bounds::{self, StateFunction};
use crate::certificate::{Certificate, RankTable};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::hierarchy;
use crate::relation::{FiniteRelation, TransitionSystem};

/// Conclusion of an invariant check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conclusion {
    Terminating,
    NonterminatingWitness,
    InvalidInvariant,
}

/// Per-part well-foundedness report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisjunctReport {
    pub well_founded: bool,
    pub certificate: Certificate,
}

/// Full outcome of a transition-invariant check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantVerdict {
    pub covering_ok: bool,
    /// First pair of the closed accessible relation missed by the union.
    pub uncovered: Option<(u64, u64)>,
    pub disjunct_reports: Vec<DisjunctReport>,
    pub conclusion: Conclusion,
    /// A cycle of the accessible relation when nonterminating.
    pub nonterminating_cycle: Option<Vec<u64>>,
    /// Exact longest computation from each accessible state, when the
    /// verdict is terminating.
    pub longest_computations: Option<BTreeMap<u64, u64>>,
}

/// Checks whether `parts` form a disjunctively well-founded transition
/// invariant for `ts`: the closure of the accessible relation must be
/// covered by the union, and every part must be well-founded. All
/// failures are in-band verdicts, never errors.
pub fn check_invariant(
    ts: &TransitionSystem,
    parts: &[FiniteRelation],
    cfg: &RunConfig,
) -> Result<InvariantVerdict> {
    for p in parts {
        for &x in p.domain() {
            if !ts.relation.domain().contains(&x) {
                return Err(Error::StateNotInDomain(x));
            }
        }
    }
    let acc = ts.accessible_states();
    let restricted = ts.relation.restrict(&acc)?;
    let closed = restricted.transitive_closure(cfg)?;

    let mut covering_ok = true;
    let mut uncovered = None;
    for &(x, y) in closed.edges() {
        if !parts.iter().any(|p| p.contains_edge(x, y)) {
            covering_ok = false;
            uncovered = Some((x, y));
            break;
        }
    }

    let disjunct_reports: Vec<DisjunctReport> = parts
        .iter()
        .map(|p| {
            let v = p.is_well_founded();
            DisjunctReport {
                well_founded: v.well_founded,
                certificate: v.certificate,
            }
        })
        .collect();
    let all_wf = disjunct_reports.iter().all(|d| d.well_founded);

    if covering_ok && all_wf {
        // Terminating; the union argument guarantees the accessible
        // relation is acyclic, so the computation lengths are finite.
        let rev = restricted.transpose();
        let lengths = rev.longest_lengths().ok_or_else(|| {
            Error::InternalInconsistency("valid invariant but cyclic accessible relation".into())
        })?;
        return Ok(InvariantVerdict {
            covering_ok,
            uncovered,
            disjunct_reports,
            conclusion: Conclusion::Terminating,
            nonterminating_cycle: None,
            longest_computations: Some(lengths),
        });
    }
    match restricted.find_cycle() {
        Some(cycle) => Ok(InvariantVerdict {
            covering_ok,
            uncovered,
            disjunct_reports,
            conclusion: Conclusion::NonterminatingWitness,
            nonterminating_cycle: Some(cycle),
            longest_computations: None,
        }),
        None => Ok(InvariantVerdict {
            covering_ok,
            uncovered,
            disjunct_reports,
            conclusion: Conclusion::InvalidInvariant,
            nonterminating_cycle: None,
            longest_computations: None,
        }),
    }
}

/// Searches for a k-part disjunctively well-founded invariant by
/// backtracking over edge colorings of the closed accessible relation.
/// Colors are tried in index order and edges in lexicographic order, so
/// the first solution is canonical. `None` means the exhaustive search
/// refuted existence at this k.
pub fn find_invariant(
    ts: &TransitionSystem,
    k: usize,
    cfg: &RunConfig,
) -> Result<Option<Vec<FiniteRelation>>> {
    if k == 0 {
        return Err(Error::Parse("need at least one part".into()));
    }
    let acc = ts.accessible_states();
    let closed = ts.relation.restrict(&acc)?.transitive_closure(cfg)?;
    let edges: Vec<(u64, u64)> = closed.edges().iter().copied().collect();

    struct Search {
        k: usize,
        edges: Vec<(u64, u64)>,
        class_succ: Vec<HashMap<u64, Vec<u64>>>,
        assignment: Vec<usize>,
        nodes: u64,
        budget: u64,
    }
    impl Search {
        fn reaches(&self, class: usize, from: u64, to: u64) -> bool {
            let mut stack = vec![from];
            let mut seen = BTreeSet::new();
            while let Some(v) = stack.pop() {
                if v == to {
                    return true;
                }
                if let Some(next) = self.class_succ[class].get(&v) {
                    for &n in next {
                        if seen.insert(n) {
                            stack.push(n);
                        }
                    }
                }
            }
            false
        }

        fn solve(&mut self, at: usize) -> Result<bool> {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::InstanceCapExceeded(format!(
                    "invariant search exceeded the node budget of {}",
                    self.budget
                )));
            }
            if at == self.edges.len() {
                return Ok(true);
            }
            let (x, y) = self.edges[at];
            for class in 0..self.k {
                // Adding (x, y) closes a cycle iff y already reaches x.
                if x == y || self.reaches(class, y, x) {
                    continue;
                }
                self.class_succ[class].entry(x).or_default().push(y);
                self.assignment[at] = class;
                if self.solve(at + 1)? {
                    return Ok(true);
                }
                self.class_succ[class].get_mut(&x).unwrap().pop();
            }
            Ok(false)
        }
    }

    let mut search = Search {
        k,
        edges: edges.clone(),
        class_succ: vec![HashMap::new(); k],
        assignment: vec![0; edges.len()],
        nodes: 0,
        budget: cfg.search_cap,
    };
    if !search.solve(0)? {
        return Ok(None);
    }
    let mut parts = Vec::with_capacity(k);
    for class in 0..k {
        let class_edges: Vec<(u64, u64)> = edges
            .iter()
            .enumerate()
            .filter(|(i, _)| search.assignment[*i] == class)
            .map(|(_, &e)| e)
            .collect();
        parts.push(FiniteRelation::with_config(
            ts.relation.domain().iter().copied(),
            class_edges,
            cfg,
        )?);
    }
    Ok(Some(parts))
}

/// Output of either decomposition: the descending part, the per-level
/// ascending parts, and the rank/distance table that produced them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    /// T_>: closed pairs whose value decreases.
    pub descending: FiniteRelation,
    /// T_0 ... T_k: the ascending pairs, split by level.
    pub levels: Vec<FiniteRelation>,
    pub rank_table: RankTable,
}

impl Decomposition {
    /// All parts in report order: T_>, then T_0 ... T_k.
    pub fn parts(&self) -> Vec<&FiniteRelation> {
        std::iter::once(&self.descending)
            .chain(self.levels.iter())
            .collect()
    }
}

fn fgh_at_states(k: u32, domain: &BTreeSet<u64>, cfg: &RunConfig) -> Result<BTreeMap<u64, u64>> {
    let mut out = BTreeMap::new();
    for &x in domain {
        let v = hierarchy::fgh_u64(k, x, &cfg.fgh)?;
        // Sequence lengths never approach u64::MAX, so clamping keeps
        // the comparisons exact.
        out.insert(x, u64::try_from(&v).unwrap_or(u64::MAX));
    }
    Ok(out)
}

fn split_closure(
    r: &FiniteRelation,
    cfg: &RunConfig,
) -> Result<(FiniteRelation, Edges, FiniteRelation)> {
    let closed = r.transitive_closure(cfg)?;
    let mut asc = Vec::new();
    let mut desc = Vec::new();
    for &(x, y) in closed.edges() {
        if x < y {
            asc.push((x, y));
        } else {
            desc.push((x, y));
        }
    }
    let descending = FiniteRelation::with_config(r.domain().iter().copied(), desc, cfg)?;
    Ok((closed, asc, descending))
}

/// Maximal chain length (in steps) between every related pair of the
/// ascending part.
fn ascending_distances(asc: &[(u64, u64)]) -> BTreeMap<(u64, u64), u64> {
    let succ: BTreeMap<u64, Vec<u64>> = {
        let mut m: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for &(x, y) in asc {
            m.entry(x).or_default().push(y);
        }
        m
    };
    let mut d: BTreeMap<(u64, u64), u64> = BTreeMap::new();
    // Ascending pairs only: process sources in descending value order so
    // every longer chain is already known.
    let mut sources: Vec<u64> = succ.keys().copied().collect();
    sources.sort_unstable_by(|a, b| b.cmp(a));
    for &x in &sources {
        for &y in &succ[&x] {
            let mut best = 1;
            for &z in &succ[&x] {
                if z < y {
                    if let Some(&dz) = d.get(&(z, y)) {
                        best = best.max(1 + dz);
                    }
                }
            }
            d.insert((x, y), best);
        }
    }
    d
}

/// Decomposes a deterministic F_k-bounded relation into T_> plus k+1
/// rank-equal levels, each F_0-bounded. Every postcondition is
/// re-checked before returning; failures surface as
/// [`Error::InternalInconsistency`].
pub fn decompose_bounded(r: &FiniteRelation, k: u32, cfg: &RunConfig) -> Result<Decomposition> {
    for &x in r.domain() {
        if r.successors(x).take(2).count() > 1 {
            return Err(Error::NotDeterministic(x));
        }
    }
    let fk = StateFunction::new(
        fgh_at_states(k, r.domain(), cfg)?,
        bounds::Provenance::Derived,
    );
    let pre = bounds::is_bound(r, &fk)?;
    if !pre.ok {
        return Err(Error::NotBounded {
            witness: pre.violating.unwrap_or_default(),
        });
    }
    let (closed, asc, descending) = split_closure(r, cfg)?;
    let distance = ascending_distances(&asc);

    // Forward cones of the ascending order, for the literal rank cap.
    let mut cone_size: BTreeMap<u64, u64> = BTreeMap::new();
    for &x in r.domain() {
        let n = asc.iter().filter(|&&(a, _)| a == x).count() as u64;
        // The ascending part of a closure is transitively closed, so the
        // cone is exactly the direct successor set.
        cone_size.insert(x, n);
    }

    let mut ranks: Vec<BTreeMap<u64, u64>> = Vec::with_capacity(k as usize + 1);
    for i in 0..=k {
        let fi = fgh_at_states(i, r.domain(), cfg)?;
        let mut rank: BTreeMap<u64, u64> = BTreeMap::new();
        for &x in r.domain().iter().rev() {
            let mut best = 0;
            for &(a, y) in &asc {
                if a == x && distance[&(x, y)] >= fi[&x] {
                    best = best.max(rank[&y] + 1);
                }
            }
            if best > cone_size[&x] {
                return Err(Error::InternalInconsistency(format!(
                    "rank_{i}({x}) = {best} exceeds the reachable-cone cap {}",
                    cone_size[&x]
                )));
            }
            rank.insert(x, best);
        }
        ranks.push(rank);
    }

    let mut level_edges: Vec<Vec<(u64, u64)>> = vec![Vec::new(); k as usize + 1];
    for &(x, y) in &asc {
        let level = (0..=k).find(|&j| ranks[j as usize][&x] == ranks[j as usize][&y]);
        match level {
            Some(j) => level_edges[j as usize].push((x, y)),
            None => {
                return Err(Error::InternalInconsistency(format!(
                    "pair ({x},{y}) matched no rank level"
                )))
            }
        }
    }
    let levels: Vec<FiniteRelation> = level_edges
        .into_iter()
        .map(|es| FiniteRelation::with_config(r.domain().iter().copied(), es, cfg))
        .collect::<Result<_>>()?;

    let decomposition = Decomposition {
        descending,
        levels,
        rank_table: RankTable { ranks, distance },
    };
    validate_parts(&decomposition, &closed, cfg, false)?;
    Ok(decomposition)
}

/// Decomposes any F_k-bounded relation (no determinism needed) into T_>
/// plus k+1 distance-banded levels, each F_0-H-bounded.
///
/// The bands are strict: level j takes the ascending pairs with
/// d(x, y) < F_j(x). Lengths count elements here, so the strict band is
/// what makes the F_0 H-bound exact (a chain of x+2 elements inside one
/// band forces d(x_0, x_m) >= F_j(x_0), off the band); the inclusive
/// band only bounds steps. Coverage still holds because every chain
/// refines into single steps, so d is always strictly below F_k.
pub fn decompose_h_bounded(r: &FiniteRelation, k: u32, cfg: &RunConfig) -> Result<Decomposition> {
    let fk = StateFunction::new(
        fgh_at_states(k, r.domain(), cfg)?,
        bounds::Provenance::Derived,
    );
    let pre = bounds::is_bound(r, &fk)?;
    if !pre.ok {
        return Err(Error::NotBounded {
            witness: pre.violating.unwrap_or_default(),
        });
    }
    let (closed, asc, descending) = split_closure(r, cfg)?;
    let distance = ascending_distances(&asc);
    let mut fis: Vec<BTreeMap<u64, u64>> = Vec::with_capacity(k as usize + 1);
    for i in 0..=k {
        fis.push(fgh_at_states(i, r.domain(), cfg)?);
    }
    let mut level_edges: Vec<Vec<(u64, u64)>> = vec![Vec::new(); k as usize + 1];
    for &(x, y) in &asc {
        let level = (0..=k).find(|&j| distance[&(x, y)] < fis[j as usize][&x]);
        match level {
            Some(j) => level_edges[j as usize].push((x, y)),
            None => {
                return Err(Error::InternalInconsistency(format!(
                    "pair ({x},{y}) exceeds the level-{k} distance band"
                )))
            }
        }
    }
    let levels: Vec<FiniteRelation> = level_edges
        .into_iter()
        .map(|es| FiniteRelation::with_config(r.domain().iter().copied(), es, cfg))
        .collect::<Result<_>>()?;
    let decomposition = Decomposition {
        descending,
        levels,
        rank_table: RankTable {
            ranks: Vec::new(),
            distance,
        },
    };
    validate_parts(&decomposition, &closed, cfg, true)?;
    Ok(decomposition)
}

/// Re-checks what the decompositions promise: the union covers the
/// closure and every part passes its F_0 (H-)bound check.
fn validate_parts(
    d: &Decomposition,
    closed: &FiniteRelation,
    cfg: &RunConfig,
    h_variant: bool,
) -> Result<()> {
    for &(x, y) in closed.edges() {
        let covered =
            d.descending.contains_edge(x, y) || d.levels.iter().any(|l| l.contains_edge(x, y));
        if !covered {
            return Err(Error::InternalInconsistency(format!(
                "closure pair ({x},{y}) is not covered by the parts"
            )));
        }
    }
    for part in d.parts() {
        let f0 = StateFunction::tabulate(part, |x| x + 1);
        let verdict = if h_variant {
            bounds::is_h_bound(part, &f0, cfg)?
        } else {
            bounds::is_bound(part, &f0)?
        };
        if !verdict.ok {
            return Err(Error::InternalInconsistency(format!(
                "a part fails its F_0 bound with witness {:?}",
                verdict.violating
            )));
        }
    }
    Ok(())
}

type Edges = Vec<(u64, u64)>;
type DepthMemo = HashMap<(Edges, u32), bool>;

/// Witness tree for the depth-bounded checker.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DepthWitness {
    /// Grounded by the F_0 (H-)bound check.
    Base,
    /// One split per maximal connected subset.
    Splits(Vec<SplitWitness>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitWitness {
    pub subset: Vec<u64>,
    pub first: Edges,
    pub second: Edges,
    pub first_tree: Box<DepthWitness>,
    pub second_tree: Box<DepthWitness>,
}

/// Verdict of the n-depth linear-boundedness check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthVerdict {
    pub accepted: bool,
    pub witness: Option<DepthWitness>,
}

/// Checks n-depth linear (H-)boundedness by recursion: depth 0 is the
/// F_0 (H-)bound check; depth n+1 asks every maximal linearly connected
/// (resp. homogeneous) subset for a two-part split whose parts are
/// (n)-depth bounded. Quantifying over maximal subsets only is sound
/// because a split found for a superset restricts to any subset; that
/// reduction is itself covered by tests.
///
/// In the linear variant the split must cover the *closure* restricted
/// to the subset (the soundness argument threads an infinite transitive
/// closure sequence through the split, and its consecutive elements may
/// hop through outside states); covering only the plain restriction
/// would accept cycles. The homogeneous variant covers the plain
/// restriction and correspondingly guarantees H-well-foundedness, not
/// well-foundedness: a two-cycle on large values is F_0-H-bounded at
/// every depth.
pub fn depth_linearly_bounded(
    r: &FiniteRelation,
    n: u32,
    h_variant: bool,
    cfg: &RunConfig,
) -> Result<DepthVerdict> {
    if r.domain().len() > cfg.depth_cap {
        return Err(Error::InstanceCapExceeded(format!(
            "depth check over {} states exceeds the cap of {}",
            r.domain().len(),
            cfg.depth_cap
        )));
    }
    let mut memo: DepthMemo = HashMap::new();
    let accepted = depth_rec(r, n, h_variant, cfg, &mut memo)?;
    let witness = if accepted {
        Some(depth_witness(r, n, h_variant, cfg, &mut memo)?)
    } else {
        None
    };
    Ok(DepthVerdict { accepted, witness })
}

fn depth_rec(
    r: &FiniteRelation,
    n: u32,
    h_variant: bool,
    cfg: &RunConfig,
    memo: &mut DepthMemo,
) -> Result<bool> {
    let key = (r.edges().iter().copied().collect::<Vec<_>>(), n);
    if let Some(&v) = memo.get(&key) {
        return Ok(v);
    }
    let verdict = if n == 0 {
        let f0 = StateFunction::tabulate(r, |x| x + 1);
        if h_variant {
            bounds::is_h_bound(r, &f0, cfg)?.ok
        } else {
            bounds::is_bound(r, &f0)?.ok
        }
    } else {
        let mut ok = true;
        let obligation = if h_variant {
            r.clone()
        } else {
            r.transitive_closure(cfg)?
        };
        for subset in maximal_connected_subsets(r, h_variant, cfg)? {
            // A diagonal pair in the obligation dooms every split: the
            // part receiving it is rejected at every depth.
            if subset.iter().any(|&x| obligation.contains_edge(x, x)) {
                ok = false;
                break;
            }
            if find_split(&obligation, &subset, n, h_variant, cfg, memo)?.is_none() {
                ok = false;
                break;
            }
        }
        ok
    };
    memo.insert(key, verdict);
    Ok(verdict)
}

/// First working split of the obligation relation restricted to S', in
/// canonical mask order, as the two edge lists.
fn find_split(
    obligation: &FiniteRelation,
    subset: &BTreeSet<u64>,
    n: u32,
    h_variant: bool,
    cfg: &RunConfig,
    memo: &mut DepthMemo,
) -> Result<Option<(Edges, Edges)>> {
    let sub = obligation.restrict(subset)?;
    let edges: Vec<(u64, u64)> = sub.edges().iter().copied().collect();
    if edges.len() > 20 {
        return Err(Error::InstanceCapExceeded(format!(
            "split search over {} edges is out of range",
            edges.len()
        )));
    }
    let masks: u64 = 1 << edges.len();
    // Splits are unordered, so pin the first edge to the second part.
    let step = if edges.is_empty() { 1 } else { 2 };
    let mut mask = 0u64;
    while mask < masks {
        let first: Vec<(u64, u64)> = edges
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &e)| e)
            .collect();
        let second: Vec<(u64, u64)> = edges
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) == 0)
            .map(|(_, &e)| e)
            .collect();
        let fr = FiniteRelation::with_config(subset.iter().copied(), first.clone(), cfg)?;
        let sr = FiniteRelation::with_config(subset.iter().copied(), second.clone(), cfg)?;
        if depth_rec(&fr, n - 1, h_variant, cfg, memo)?
            && depth_rec(&sr, n - 1, h_variant, cfg, memo)?
        {
            return Ok(Some((first, second)));
        }
        mask += step;
    }
    Ok(None)
}

fn depth_witness(
    r: &FiniteRelation,
    n: u32,
    h_variant: bool,
    cfg: &RunConfig,
    memo: &mut DepthMemo,
) -> Result<DepthWitness> {
    if n == 0 {
        return Ok(DepthWitness::Base);
    }
    let obligation = if h_variant {
        r.clone()
    } else {
        r.transitive_closure(cfg)?
    };
    let mut splits = Vec::new();
    for subset in maximal_connected_subsets(r, h_variant, cfg)? {
        let (first, second) = find_split(&obligation, &subset, n, h_variant, cfg, memo)?
            .expect("witness is only built after acceptance");
        let fr = FiniteRelation::with_config(subset.iter().copied(), first.clone(), cfg)?;
        let sr = FiniteRelation::with_config(subset.iter().copied(), second.clone(), cfg)?;
        splits.push(SplitWitness {
            subset: subset.iter().copied().collect(),
            first_tree: Box::new(depth_witness(&fr, n - 1, h_variant, cfg, memo)?),
            second_tree: Box::new(depth_witness(&sr, n - 1, h_variant, cfg, memo)?),
            first,
            second,
        });
    }
    Ok(DepthWitness::Splits(splits))
}

/// Maximal linearly connected subsets (pairwise comparable under the
/// closure) or maximal homogeneous subsets (pairwise related by an
/// edge), as maximal cliques of the comparability graph, sorted.
pub fn maximal_connected_subsets(
    r: &FiniteRelation,
    h_variant: bool,
    cfg: &RunConfig,
) -> Result<Vec<BTreeSet<u64>>> {
    let base = if h_variant {
        r.clone()
    } else {
        r.transitive_closure(cfg)?
    };
    let values: Vec<u64> = r.domain().iter().copied().collect();
    let n = values.len();
    let mut adj = vec![0u64; n];
    for i in 0..n {
        for j in i + 1..n {
            if base.contains_edge(values[i], values[j]) || base.contains_edge(values[j], values[i])
            {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    let mut cliques: Vec<u64> = Vec::new();
    bron_kerbosch(&adj, 0, (1u64 << n) - 1, 0, &mut cliques);
    let mut out: Vec<BTreeSet<u64>> = cliques
        .into_iter()
        .map(|mask| {
            (0..n)
                .filter(|&i| mask & (1 << i) != 0)
                .map(|i| values[i])
                .collect()
        })
        .collect();
    out.sort();
    Ok(out)
}

fn bron_kerbosch(adj: &[u64], r: u64, mut p: u64, mut x: u64, out: &mut Vec<u64>) {
    if p == 0 && x == 0 {
        out.push(r);
        return;
    }
    let mut cand = p;
    while cand != 0 {
        let i = cand.trailing_zeros() as usize;
        let bit = 1u64 << i;
        cand &= cand - 1;
        bron_kerbosch(adj, r | bit, p & adj[i], x & adj[i], out);
        p &= !bit;
        x |= bit;
    }
}
