//! Finite pair colorings: homogeneous and weakly homogeneous witnesses,
//! transitive colorings, the derived coloring P*, chain/antichain search,
//! and the two translations between colorings and relation families.

use std::collections::{BTreeMap, HashMap};

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::hclosure;
use crate::relation::FiniteRelation;

/// A total coloring of the unordered pairs of a finite vertex set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    vertices: Vec<u64>,
    colors: u32,
    map: BTreeMap<(u64, u64), u32>,
}

impl Coloring {
    /// Validates totality over the pair set and that every color is < k.
    /// Keys are normalized to (min, max).
    pub fn new(
        vertices: impl IntoIterator<Item = u64>,
        colors: u32,
        map: impl IntoIterator<Item = ((u64, u64), u32)>,
    ) -> Result<Self> {
        let mut vertices: Vec<u64> = vertices.into_iter().collect();
        vertices.sort_unstable();
        vertices.dedup();
        if colors < 2 {
            return Err(Error::Parse("a coloring needs at least 2 colors".into()));
        }
        let mut norm: BTreeMap<(u64, u64), u32> = BTreeMap::new();
        for ((a, b), c) in map {
            if a == b {
                return Err(Error::Parse(format!("pair ({a},{b}) is not a pair")));
            }
            if !vertices.contains(&a) {
                return Err(Error::StateNotInDomain(a));
            }
            if !vertices.contains(&b) {
                return Err(Error::StateNotInDomain(b));
            }
            if c >= colors {
                return Err(Error::Parse(format!(
                    "color {c} out of range for {colors} colors"
                )));
            }
            norm.insert((a.min(b), a.max(b)), c);
        }
        for i in 0..vertices.len() {
            for j in i + 1..vertices.len() {
                if !norm.contains_key(&(vertices[i], vertices[j])) {
                    return Err(Error::Parse(format!(
                        "coloring is not total: pair ({},{}) missing",
                        vertices[i], vertices[j]
                    )));
                }
            }
        }
        Ok(Coloring {
            vertices,
            colors,
            map: norm,
        })
    }

    /// Builds the coloring by evaluating `f` on every sorted pair.
    pub fn from_fn(
        vertices: impl IntoIterator<Item = u64>,
        colors: u32,
        f: impl Fn(u64, u64) -> u32,
    ) -> Result<Self> {
        let mut vs: Vec<u64> = vertices.into_iter().collect();
        vs.sort_unstable();
        vs.dedup();
        let mut map = BTreeMap::new();
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                map.insert((vs[i], vs[j]), f(vs[i], vs[j]));
            }
        }
        Coloring::new(vs, colors, map)
    }

    pub fn constant(vertices: impl IntoIterator<Item = u64>, colors: u32, c: u32) -> Result<Self> {
        Self::from_fn(vertices, colors, |_, _| c)
    }

    pub fn vertices(&self) -> &[u64] {
        &self.vertices
    }

    pub fn colors(&self) -> u32 {
        self.colors
    }

    pub fn color(&self, a: u64, b: u64) -> u32 {
        self.map[&(a.min(b), a.max(b))]
    }

    pub fn pairs(&self) -> &BTreeMap<(u64, u64), u32> {
        &self.map
    }
}

/// The kind of homogeneity a witness certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    HomogeneousSet,
    WeaklyHomogeneousSequence,
}

/// A homogeneous set or weakly homogeneous sequence with its color.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneityWitness {
    pub kind: WitnessKind,
    /// Sorted members (both kinds are increasing by construction).
    pub members: Vec<u64>,
    pub color: u32,
}

impl HomogeneityWitness {
    /// Re-checks the claim against a coloring.
    pub fn validate(&self, c: &Coloring) -> bool {
        match self.kind {
            WitnessKind::HomogeneousSet => {
                for i in 0..self.members.len() {
                    for j in i + 1..self.members.len() {
                        if c.color(self.members[i], self.members[j]) != self.color {
                            return false;
                        }
                    }
                }
                true
            }
            WitnessKind::WeaklyHomogeneousSequence => self
                .members
                .windows(2)
                .all(|w| c.color(w[0], w[1]) == self.color),
        }
    }
}

/// A maximum-size monochromatic clique, lexicographically least among
/// ties (ties across colors are broken by the member list, then the
/// color index).
pub fn largest_homogeneous_set(c: &Coloring, cfg: &RunConfig) -> Result<HomogeneityWitness> {
    let n = c.vertices().len();
    if n > cfg.clique_cap || n > 64 {
        return Err(Error::InstanceCapExceeded(format!(
            "homogeneous-set search over {n} vertices exceeds the cap of {}",
            cfg.clique_cap.min(64)
        )));
    }
    if n == 0 {
        return Ok(HomogeneityWitness {
            kind: WitnessKind::HomogeneousSet,
            members: Vec::new(),
            color: 0,
        });
    }
    if n == 1 {
        return Ok(HomogeneityWitness {
            kind: WitnessKind::HomogeneousSet,
            members: vec![c.vertices()[0]],
            color: 0,
        });
    }
    let mut best: Option<(Vec<u64>, u32)> = None;
    for color in 0..c.colors() {
        let adj: Vec<u64> = adjacency_masks(c, |a, b| c.color(a, b) == color);
        let members = max_clique_lex_least(c.vertices(), &adj);
        let better = match &best {
            None => true,
            Some((m, col)) => {
                members.len() > m.len()
                    || (members.len() == m.len()
                        && (members < *m || (members == *m && color < *col)))
            }
        };
        if better {
            best = Some((members, color));
        }
    }
    let (members, color) = best.expect("at least two colors exist");
    Ok(HomogeneityWitness {
        kind: WitnessKind::HomogeneousSet,
        members,
        color,
    })
}

fn adjacency_masks(c: &Coloring, related: impl Fn(u64, u64) -> bool) -> Vec<u64> {
    let vs = c.vertices();
    let mut adj = vec![0u64; vs.len()];
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            if related(vs[i], vs[j]) {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    adj
}

/// Exact maximum clique with lexicographically least witness, on up to
/// 64 vertices given as sorted values plus adjacency bitmasks.
fn max_clique_lex_least(values: &[u64], adj: &[u64]) -> Vec<u64> {
    struct Search<'a> {
        adj: &'a [u64],
        memo: HashMap<u64, u32>,
    }
    impl Search<'_> {
        // Largest clique drawn from `cands`, where every candidate is
        // greater than all previously chosen vertices.
        fn best(&mut self, cands: u64) -> u32 {
            if cands == 0 {
                return 0;
            }
            if let Some(&v) = self.memo.get(&cands) {
                return v;
            }
            let mut rest = cands;
            let mut best = 0;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                // Only extend upward to keep each clique canonical.
                let above = if i + 1 >= 64 { 0 } else { !0u64 << (i + 1) };
                best = best.max(1 + self.best(cands & self.adj[i] & above));
            }
            self.memo.insert(cands, best);
            best
        }
    }
    let n = values.len();
    let full: u64 = if n == 64 { !0 } else { (1u64 << n) - 1 };
    let mut search = Search {
        adj,
        memo: HashMap::new(),
    };
    let total = search.best(full);
    let mut members = Vec::with_capacity(total as usize);
    let mut cands = full;
    let mut remaining = total;
    while remaining > 0 {
        let mut rest = cands;
        loop {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let above = if i + 1 >= 64 { 0 } else { !0u64 << (i + 1) };
            let next = cands & adj[i] & above;
            if 1 + search.best(next) == remaining {
                members.push(values[i]);
                cands = next;
                break;
            }
        }
        remaining -= 1;
    }
    members
}

/// Longest increasing sequence whose consecutive pairs share one color;
/// ties broken by the lexicographically least sequence, then least color.
pub fn longest_weakly_homogeneous_sequence(c: &Coloring) -> HomogeneityWitness {
    let vs = c.vertices();
    let n = vs.len();
    if n == 0 {
        return HomogeneityWitness {
            kind: WitnessKind::WeaklyHomogeneousSequence,
            members: Vec::new(),
            color: 0,
        };
    }
    if n == 1 {
        return HomogeneityWitness {
            kind: WitnessKind::WeaklyHomogeneousSequence,
            members: vec![vs[0]],
            color: 0,
        };
    }
    let k = c.colors() as usize;
    // longest[i][col]: longest weakly homogeneous sequence starting at
    // vertex i in color col. Filled right to left.
    let mut longest = vec![vec![1u64; k]; n];
    for i in (0..n).rev() {
        for j in i + 1..n {
            let col = c.color(vs[i], vs[j]) as usize;
            longest[i][col] = longest[i][col].max(1 + longest[j][col]);
        }
    }
    let best = longest
        .iter()
        .flat_map(|row| row.iter())
        .copied()
        .max()
        .unwrap_or(1);
    // Reconstruct the least sequence: earliest viable start, and among
    // its viable colors the one whose greedy continuation is least.
    let start = (0..n)
        .find(|&i| longest[i].contains(&best))
        .expect("some start attains the maximum");
    let mut chosen: Option<(Vec<u64>, u32)> = None;
    for (col, &len_here) in longest[start].iter().enumerate() {
        if len_here != best {
            continue;
        }
        let mut seq = vec![vs[start]];
        let mut cur = start;
        let mut remaining = best - 1;
        while remaining > 0 {
            let next = (cur + 1..n)
                .find(|&j| c.color(vs[cur], vs[j]) as usize == col && longest[j][col] == remaining)
                .expect("the DP guarantees a continuation");
            seq.push(vs[next]);
            cur = next;
            remaining -= 1;
        }
        match &chosen {
            Some((s, _)) if *s <= seq => {}
            _ => chosen = Some((seq, col as u32)),
        }
    }
    let (members, color) = chosen.expect("best is attained at start");
    HomogeneityWitness {
        kind: WitnessKind::WeaklyHomogeneousSequence,
        members,
        color,
    }
}

/// Checks P({x,y}) = P({y,z}) ⟹ P({x,z}) = P({x,y}) over all sorted
/// triples; returns the first violating triple in lexicographic order.
pub fn is_transitive_coloring(c: &Coloring) -> (bool, Option<(u64, u64, u64)>) {
    let vs = c.vertices();
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            for l in j + 1..vs.len() {
                let (x, y, z) = (vs[i], vs[j], vs[l]);
                if c.color(x, y) == c.color(y, z) && c.color(x, z) != c.color(x, y) {
                    return (false, Some((x, y, z)));
                }
            }
        }
    }
    (true, None)
}

/// Output of the P* construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PStarResult {
    pub coloring: Coloring,
    /// For each pair resolved through an intermediate vertex, the least
    /// such vertex (recorded for audit).
    pub chosen_z: BTreeMap<(u64, u64), u64>,
    /// Pairs where two intermediate candidates proposed different colors.
    /// Provably empty for 2-colorings; recorded for k > 2.
    pub disagreements: Vec<(u64, u64)>,
}

/// The derived coloring P*: consecutive pairs keep their color, and a
/// wider pair {x,y} takes the color of {x,z} whenever some intermediate
/// z has P*({x,z}) = P*({z,y}), falling back to P({x,y}) otherwise.
///
/// The recursion runs over positions in the sorted vertex enumeration,
/// not raw value gaps, so arbitrary finite vertex sets are supported.
pub fn p_star(c: &Coloring) -> PStarResult {
    let vs = c.vertices();
    let n = vs.len();
    let mut star: BTreeMap<(usize, usize), u32> = BTreeMap::new();
    let mut chosen_z = BTreeMap::new();
    let mut disagreements = Vec::new();
    for gap in 1..n {
        for i in 0..n - gap {
            let j = i + gap;
            if gap == 1 {
                star.insert((i, j), c.color(vs[i], vs[j]));
                continue;
            }
            let mut value: Option<(usize, u32)> = None;
            let mut disagreed = false;
            for m in i + 1..j {
                if star[&(i, m)] == star[&(m, j)] {
                    match value {
                        None => value = Some((m, star[&(i, m)])),
                        Some((_, v)) if v != star[&(i, m)] => disagreed = true,
                        _ => {}
                    }
                }
            }
            match value {
                Some((m, v)) => {
                    star.insert((i, j), v);
                    chosen_z.insert((vs[i], vs[j]), vs[m]);
                    if disagreed {
                        disagreements.push((vs[i], vs[j]));
                    }
                }
                None => {
                    star.insert((i, j), c.color(vs[i], vs[j]));
                }
            }
        }
    }
    let map: BTreeMap<(u64, u64), u32> = star
        .into_iter()
        .map(|((i, j), col)| ((vs[i], vs[j]), col))
        .collect();
    let coloring = Coloring::new(vs.iter().copied(), c.colors(), map)
        .expect("P* is total and in range by construction");
    PStarResult {
        coloring,
        chosen_z,
        disagreements,
    }
}

/// Longest chain and largest antichain of a strict partial order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainAntichain {
    pub chain: Vec<u64>,
    pub antichain: Vec<u64>,
}

/// Computes both witnesses for a validated strict partial order. The
/// input must be irreflexive and transitive; violations are reported
/// with the offending pair or triple.
pub fn chain_antichain(r: &FiniteRelation, cfg: &RunConfig) -> Result<ChainAntichain> {
    if let Some(x) = r.reflexive_point() {
        return Err(Error::NotAPartialOrder(format!("reflexive pair ({x},{x})")));
    }
    if let Some((x, y, z)) = r.violating_transitivity_triple() {
        return Err(Error::NotAPartialOrder(format!(
            "transitivity fails on ({x},{y},{z})"
        )));
    }
    let n = r.domain().len();
    if n > cfg.clique_cap || n > 64 {
        return Err(Error::InstanceCapExceeded(format!(
            "antichain search over {n} states exceeds the cap of {}",
            cfg.clique_cap.min(64)
        )));
    }
    // Longest chain = longest path (the order is transitively closed, so
    // chains and paths coincide).
    let chain = match r
        .longest_lengths()
        .expect("a strict partial order is acyclic")
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
    {
        Some((&start, _)) => r.longest_decreasing_sequence(start)?.1,
        None => Vec::new(),
    };
    // Largest antichain = maximum clique of the incomparability graph.
    let values: Vec<u64> = r.domain().iter().copied().collect();
    let mut adj = vec![0u64; n];
    for i in 0..n {
        for j in i + 1..n {
            let comparable =
                r.contains_edge(values[i], values[j]) || r.contains_edge(values[j], values[i]);
            if !comparable {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    let antichain = max_clique_lex_least(&values, &adj);
    Ok(ChainAntichain { chain, antichain })
}

/// Splits a coloring into one relation per color: R_i holds the
/// descending pairs (x, y) with x > y and color i. The union over all i
/// is exactly the full descending relation on the vertex set.
pub fn coloring_to_relations(c: &Coloring) -> Vec<FiniteRelation> {
    (0..c.colors())
        .map(|i| {
            let edges: Vec<(u64, u64)> = c
                .pairs()
                .iter()
                .filter(|&(_, &col)| col == i)
                .map(|(&(a, b), _)| (b, a))
                .collect();
            FiniteRelation::new(c.vertices().iter().copied(), edges)
                .expect("vertices cover all endpoints")
        })
        .collect()
}

/// Colors the positions of a decreasing transitive sequence for the
/// union of `rels`: pair {m, n} with m < n gets the least i such that
/// (seq[m], seq[n]) is an edge of rels[i].
pub fn sequence_to_coloring(rels: &[FiniteRelation], seq: &[u64]) -> Result<Coloring> {
    if rels.is_empty() {
        return Err(Error::Parse("need at least one relation".into()));
    }
    let union = rels
        .iter()
        .skip(1)
        .fold(rels[0].clone(), |acc, r| acc.union(r));
    if !hclosure::is_h_member(&union, seq)? {
        return Err(Error::NotTransitiveSequence);
    }
    let k = rels.len() as u32;
    let mut map = BTreeMap::new();
    for m in 0..seq.len() {
        for n in m + 1..seq.len() {
            let color =
                rels.iter()
                    .position(|r| r.contains_edge(seq[m], seq[n]))
                    .expect("the union contains every pair of an H-member") as u32;
            map.insert(((m as u64), (n as u64)), color);
        }
    }
    Coloring::new(0..seq.len() as u64, k.max(2), map)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_coloring_is_fully_homogeneous() {
        let c = Coloring::constant(0..6, 2, 0).unwrap();
        let w = largest_homogeneous_set(&c, &RunConfig::default()).unwrap();
        assert_eq!(w.members, vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(w.color, 0);
        assert!(w.validate(&c));
    }

    #[test]
    fn parity_coloring_on_five_vertices() {
        // color = (x + y) mod 2: the evens {0,2,4} form a same-color triangle.
        let c = Coloring::from_fn(0..5, 2, |x, y| ((x + y) % 2) as u32).unwrap();
        let w = largest_homogeneous_set(&c, &RunConfig::default()).unwrap();
        assert_eq!(w.members, vec![0, 2, 4]);
        assert_eq!(w.color, 0);
    }

    #[test]
    fn sampled_two_colorings_of_six_have_triangles() {
        // Spot-check a handful of bit patterns; the acceptance suite
        // exhausts all 2^15 colorings.
        for bits in [0u32, 1, 0x5555, 0x7fff, 0x1234, 0x2bad] {
            let mut map = std::collections::BTreeMap::new();
            let mut t = 0;
            for i in 0..6u64 {
                for j in i + 1..6 {
                    map.insert((i, j), (bits >> t) & 1);
                    t += 1;
                }
            }
            let c = Coloring::new(0..6, 2, map).unwrap();
            let w = largest_homogeneous_set(&c, &RunConfig::default()).unwrap();
            assert!(w.members.len() >= 3, "bits {bits:#x}");
            assert!(w.validate(&c));
        }
    }

    #[test]
    fn weak_sequence_on_constant_coloring_is_everything() {
        let c = Coloring::constant(0..6, 2, 1).unwrap();
        let w = longest_weakly_homogeneous_sequence(&c);
        assert_eq!(w.members, vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(w.color, 1);
        assert!(w.validate(&c));
    }

    #[test]
    fn weak_sequence_uses_consecutive_pairs_only() {
        // Consecutive pairs color 0, everything else color 1: the whole
        // enumeration is weakly homogeneous even though no triangle is.
        let c = Coloring::from_fn(0..4, 2, |x, y| if y == x + 1 { 0 } else { 1 }).unwrap();
        let w = longest_weakly_homogeneous_sequence(&c);
        assert_eq!(w.members, vec![0, 1, 2, 3]);
        assert_eq!(w.color, 0);
    }

    #[test]
    fn weak_sequence_minimum_is_a_pair() {
        // Each consecutive color differs, so nothing longer than a pair
        // repeats a color; any single pair is vacuously a sequence.
        let c = Coloring::from_fn(0..3, 3, |x, y| ((x + y) % 3) as u32).unwrap();
        let w = longest_weakly_homogeneous_sequence(&c);
        assert_eq!(w.members.len(), 2);
    }

    #[test]
    fn constant_colorings_are_transitive() {
        let c = Coloring::constant(0..5, 2, 0).unwrap();
        assert_eq!(is_transitive_coloring(&c), (true, None));
    }

    #[test]
    fn order_colorings_are_transitive() {
        // Fixed permutation order: color 0 iff x precedes y in it.
        let order = [2u64, 0, 1];
        let pos = |v: u64| order.iter().position(|&o| o == v).unwrap();
        let c = Coloring::from_fn(0..3, 2, |x, y| if pos(x) < pos(y) { 0 } else { 1 }).unwrap();
        assert_eq!(is_transitive_coloring(&c), (true, None));
    }

    #[test]
    fn first_violating_triple_is_reported() {
        let c = Coloring::new(0..3, 2, [((0, 1), 0), ((1, 2), 0), ((0, 2), 1)]).unwrap();
        assert_eq!(is_transitive_coloring(&c), (false, Some((0, 1, 2))));
    }

    #[test]
    fn p_star_fixes_constant_colorings() {
        let c = Coloring::constant(0..4, 2, 1).unwrap();
        let out = p_star(&c);
        assert_eq!(out.coloring, c);
        assert!(out.disagreements.is_empty());
    }

    #[test]
    fn p_star_merges_at_the_single_intermediate() {
        let c = Coloring::new(0..3, 2, [((0, 1), 0), ((1, 2), 0), ((0, 2), 1)]).unwrap();
        let out = p_star(&c);
        assert_eq!(out.coloring.color(0, 2), 0);
        assert_eq!(out.chosen_z.get(&(0, 2)), Some(&1));
        assert!(is_transitive_coloring(&out.coloring).0);
    }

    #[test]
    fn p_star_output_is_transitive_on_alternating_input() {
        let c =
            Coloring::from_fn(0..6, 2, |x, y| if y == x + 1 { (x % 2) as u32 } else { 1 }).unwrap();
        let out = p_star(&c);
        assert!(is_transitive_coloring(&out.coloring).0);
        assert!(out.disagreements.is_empty());
    }

    #[test]
    fn chain_antichain_on_a_total_order() {
        let mut edges = Vec::new();
        for x in 0..6u64 {
            for y in 0..x {
                edges.push((x, y));
            }
        }
        let r = FiniteRelation::new(0..6, edges).unwrap();
        let out = chain_antichain(&r, &RunConfig::default()).unwrap();
        assert_eq!(out.chain.len(), 6);
        assert_eq!(out.antichain.len(), 1);
    }

    #[test]
    fn chain_antichain_on_the_empty_order() {
        let r = FiniteRelation::new(0..6, []).unwrap();
        let out = chain_antichain(&r, &RunConfig::default()).unwrap();
        assert_eq!(out.chain.len(), 1);
        assert_eq!(out.antichain, vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn chain_antichain_on_two_disjoint_chains() {
        // 0 > 1 > 2 and 3 > 4 > 5, transitively closed.
        let edges = [(0u64, 1u64), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)];
        let r = FiniteRelation::new(0..6, edges).unwrap();
        let out = chain_antichain(&r, &RunConfig::default()).unwrap();
        assert_eq!(out.chain.len(), 3);
        assert_eq!(out.antichain.len(), 2);
        assert_eq!(out.antichain, vec![0, 3]);
    }

    #[test]
    fn chain_antichain_rejects_non_orders() {
        let r = FiniteRelation::new(0..2, [(0, 0)]).unwrap();
        assert!(matches!(
            chain_antichain(&r, &RunConfig::default()),
            Err(Error::NotAPartialOrder(_))
        ));
        let r2 = FiniteRelation::new(0..3, [(2, 1), (1, 0)]).unwrap();
        assert!(matches!(
            chain_antichain(&r2, &RunConfig::default()),
            Err(Error::NotAPartialOrder(_))
        ));
    }

    #[test]
    fn constant_coloring_splits_into_one_full_descent() {
        let c = Coloring::constant(0..3, 2, 0).unwrap();
        let rels = coloring_to_relations(&c);
        let want: Vec<(u64, u64)> = vec![(1, 0), (2, 0), (2, 1)];
        assert_eq!(rels[0].edges().iter().copied().collect::<Vec<_>>(), want);
        assert!(rels[1].edges().is_empty());
    }

    #[test]
    fn split_respects_colors() {
        let c = Coloring::new(0..3, 2, [((0, 1), 0), ((0, 2), 1), ((1, 2), 1)]).unwrap();
        let rels = coloring_to_relations(&c);
        assert_eq!(
            rels[0].edges().iter().copied().collect::<Vec<_>>(),
            vec![(1, 0)]
        );
        assert_eq!(
            rels[1].edges().iter().copied().collect::<Vec<_>>(),
            vec![(2, 0), (2, 1)]
        );
    }

    #[test]
    fn sequence_coloring_reads_pairs_off_the_relations() {
        let r0 = FiniteRelation::new(0..3, [(2, 1), (2, 0)]).unwrap();
        let r1 = FiniteRelation::new(0..3, [(1, 0)]).unwrap();
        let c = sequence_to_coloring(&[r0, r1], &[2, 1, 0]).unwrap();
        assert_eq!(c.color(0, 1), 0);
        assert_eq!(c.color(0, 2), 0);
        assert_eq!(c.color(1, 2), 1);
    }

    #[test]
    fn sequence_coloring_with_one_relation_is_constant() {
        let mut edges = Vec::new();
        for x in 0..4u64 {
            for y in 0..x {
                edges.push((x, y));
            }
        }
        let r = FiniteRelation::new(0..4, edges).unwrap();
        let c = sequence_to_coloring(std::slice::from_ref(&r), &[3, 2, 1, 0]).unwrap();
        assert!(c.pairs().values().all(|&v| v == 0));
    }

    #[test]
    fn sequence_coloring_rejects_non_members() {
        let r0 = FiniteRelation::new(0..3, [(2, 1), (1, 0)]).unwrap();
        assert!(matches!(
            sequence_to_coloring(&[r0], &[2, 1, 0]),
            Err(Error::NotTransitiveSequence)
        ));
    }

    #[test]
    fn round_trip_reproduces_colors_through_positions() {
        let c = Coloring::from_fn(0..5, 2, |x, y| ((x * y + x) % 2) as u32).unwrap();
        let rels = coloring_to_relations(&c);
        let seq: Vec<u64> = vec![4, 3, 2, 1, 0];
        let pos = sequence_to_coloring(&rels, &seq).unwrap();
        for m in 0..seq.len() {
            for n in m + 1..seq.len() {
                assert_eq!(
                    pos.color(m as u64, n as u64),
                    c.color(seq[m], seq[n]),
                    "pair positions ({m},{n})"
                );
            }
        }
    }
}
