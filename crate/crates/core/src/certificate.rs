//! Tagged witnesses attached to verdicts.

use std::collections::BTreeMap;

/// A witness justifying a verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// A decreasing sequence, consecutive elements following edges forward.
    DecreasingSequence(Vec<u64>),
    /// A cycle `c_0 -> c_1 -> ... -> c_0`; repeating it yields an infinite
    /// decreasing sequence.
    Cycle(Vec<u64>),
    /// A vertex set all of whose pairs share `color`.
    HomogeneousSet { members: Vec<u64>, color: u32 },
    /// An increasing vertex sequence whose consecutive pairs share `color`.
    WeaklyHomogeneousSequence { members: Vec<u64>, color: u32 },
    /// Recursive partition tree for a k-largeness claim.
    Largeness(LargenessCertificate),
    /// A ranking that strictly decreases along every edge.
    Ranking(BTreeMap<u64, u64>),
    /// Per-level ranks and pairwise distances from the decomposition.
    RankTable(RankTable),
}

/// Partition tree certifying that `set` is `level`-large.
///
/// A node at level j+1 lists children that partition `set` minus its
/// minimum into at least `min(set)` disjoint j-large blocks; a node at
/// level 0 certifies non-emptiness. The one exception is the singleton
/// `{0}`, whose remainder is empty and which is k-large for every k via
/// the empty partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LargenessCertificate {
    pub set: Vec<u64>,
    pub level: u32,
    pub children: Vec<LargenessCertificate>,
}

impl LargenessCertificate {
    /// Re-checks the whole tree bottom-up. Used by tests so that the
    /// searcher's output is validated, never trusted.
    pub fn validate(&self) -> bool {
        if self.set.is_empty() {
            return false;
        }
        if self.level == 0 {
            return true;
        }
        let min = self.set[0];
        let mut rest: Vec<u64> = self.set[1..].to_vec();
        rest.sort_unstable();
        let mut covered: Vec<u64> = Vec::new();
        for child in &self.children {
            if child.level != self.level - 1 || !child.validate() {
                return false;
            }
            covered.extend_from_slice(&child.set);
        }
        covered.sort_unstable();
        if covered != rest {
            return false;
        }
        (self.children.len() as u64) >= min
    }
}

/// Certificate for an m-density (or m-w-density) claim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DensityCertificate {
    /// 0-dense: `|set| > min(set)`.
    Base { set: Vec<u64> },
    /// m+1-dense: for every canonical-representative 2-coloring of the
    /// pairs, a chosen (weakly) homogeneous subset with its m-density
    /// certificate. Colorings are keyed by the canonical bitmap over the
    /// sorted pair enumeration.
    Step {
        set: Vec<u64>,
        weak: bool,
        witnesses: Vec<(u64, Vec<u64>, Box<DensityCertificate>)>,
    },
}

/// Per-state ranks and pairwise distances produced by the rank-based
/// decomposition of an F_k-bounded relation.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RankTable {
    /// `ranks[i][x]` is rank_i(x), for each level i <= k.
    pub ranks: Vec<BTreeMap<u64, u64>>,
    /// `distance[(x, y)]` is the maximal chain length (in steps) from x
    /// to y inside the ascending part of the closure; only pairs related
    /// by it appear.
    pub distance: BTreeMap<(u64, u64), u64>,
}
