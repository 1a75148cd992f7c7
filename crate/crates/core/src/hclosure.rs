//! H(R): decreasing transitive finite sequences and their
//! well-foundedness structure.
//!
//! H(R) is never materialized (it is exponential); membership and the
//! longest-sequence search operate on the relation directly.

use std::collections::HashMap;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::relation::FiniteRelation;

/// True iff `seq` is an H(R) element: every pair, not just consecutive
/// ones, follows an edge forward: `(seq[i], seq[j]) ∈ R` for i < j.
pub fn is_h_member(r: &FiniteRelation, seq: &[u64]) -> Result<bool> {
    for &x in seq {
        if !r.domain().contains(&x) {
            return Err(Error::StateNotInDomain(x));
        }
    }
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if !r.contains_edge(seq[i], seq[j]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Verdict of the H-well-foundedness check.
///
/// On a finite domain an infinite decreasing transitive sequence must
/// repeat an element x, which forces the edge (x, x); conversely a
/// reflexive point yields x, x, x, .... So H-well-foundedness is exactly
/// irreflexivity here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HwfVerdict {
    pub h_well_founded: bool,
    /// Least reflexive state when the verdict is false.
    pub reflexive_witness: Option<u64>,
}

pub fn is_h_well_founded(r: &FiniteRelation) -> HwfVerdict {
    match r.reflexive_point() {
        Some(x) => HwfVerdict {
            h_well_founded: false,
            reflexive_witness: Some(x),
        },
        None => HwfVerdict {
            h_well_founded: true,
            reflexive_witness: None,
        },
    }
}

/// Length and witness of the longest H(R) sequence, optionally anchored
/// at `start`.
///
/// This is a clique-type search (exponential worst case); it is guarded
/// by the domain cap and the search-node budget, and memoized on the
/// candidate set. The witness is the lexicographically least sequence
/// among the maximal-length ones.
pub fn longest_h_sequence(
    r: &FiniteRelation,
    start: Option<u64>,
    cfg: &RunConfig,
) -> Result<(u64, Vec<u64>)> {
    if let Some(x) = r.reflexive_point() {
        return Err(Error::NotHWellFounded(x));
    }
    let elements: Vec<u64> = r.domain().iter().copied().collect();
    let n = elements.len();
    if n > cfg.hseq_cap || n > 128 {
        return Err(Error::InstanceCapExceeded(format!(
            "H-sequence search over {} states exceeds the cap of {}",
            n,
            cfg.hseq_cap.min(128)
        )));
    }
    if n == 0 {
        return match start {
            Some(s) => Err(Error::StateNotInDomain(s)),
            None => Ok((0, Vec::new())),
        };
    }
    let index: HashMap<u64, usize> = elements.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let start_idx = match start {
        Some(s) => Some(*index.get(&s).ok_or(Error::StateNotInDomain(s))?),
        None => None,
    };
    let mut succ_mask = vec![0u128; n];
    for &(x, y) in r.edges() {
        succ_mask[index[&x]] |= 1u128 << index[&y];
    }

    let mut search = HSearch {
        succ_mask: &succ_mask,
        memo: HashMap::new(),
        nodes: 0,
        budget: cfg.search_cap,
    };

    let full: u128 = if n == 128 { !0 } else { (1u128 << n) - 1 };
    let best = match start_idx {
        Some(i) => 1 + search.best(succ_mask[i])?,
        None => {
            let mut best = 0;
            for &mask in &succ_mask {
                best = best.max(1 + search.best(mask)?);
            }
            best
        }
    };

    // Reconstruct the lexicographically least maximal witness: elements
    // are sorted ascending, so picking the least viable index at each
    // step is picking the least value. The first pick draws from the whole
    // domain (or the anchor); later picks from the running intersection.
    let mut witness: Vec<u64> = Vec::with_capacity(best as usize);
    let mut cands: Option<u128> = None;
    let mut remaining = best;
    while remaining > 0 {
        let pool = match cands {
            None => start_idx.map_or(full, |i| 1u128 << i),
            Some(m) => m,
        };
        let mut rest = pool;
        let mut picked = None;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let next = match cands {
                None => succ_mask[i],
                Some(m) => m & succ_mask[i],
            };
            if 1 + search.best(next)? == remaining {
                picked = Some((i, next));
                break;
            }
        }
        let (i, next) = picked.expect("a viable continuation exists by construction");
        cands = Some(next);
        witness.push(elements[i]);
        remaining -= 1;
    }
    Ok((best, witness))
}

struct HSearch<'a> {
    succ_mask: &'a [u128],
    memo: HashMap<u128, u64>,
    nodes: u64,
    budget: u64,
}

impl HSearch<'_> {
    /// Longest extension drawing only from `cands`.
    fn best(&mut self, cands: u128) -> Result<u64> {
        if cands == 0 {
            return Ok(0);
        }
        if let Some(&v) = self.memo.get(&cands) {
            return Ok(v);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::InstanceCapExceeded(format!(
                "H-sequence search exceeded the node budget of {}",
                self.budget
            )));
        }
        let mut rest = cands;
        let mut best = 0;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let len = 1 + self.best(cands & self.succ_mask[i])?;
            best = best.max(len);
        }
        self.memo.insert(cands, best);
        Ok(best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(domain: &[u64], edges: &[(u64, u64)]) -> FiniteRelation {
        FiniteRelation::new(domain.iter().copied(), edges.iter().copied()).unwrap()
    }

    #[test]
    fn h_member_full_transitive_chain() {
        let r = rel(&[0, 1, 2], &[(1, 0), (2, 1), (2, 0)]);
        assert!(is_h_member(&r, &[2, 1, 0]).unwrap());
        assert!(!is_h_member(&r, &[0, 1, 2]).unwrap());
    }

    #[test]
    fn h_member_vacuous_cases() {
        let r = rel(&[0, 1], &[(1, 0)]);
        assert!(is_h_member(&r, &[]).unwrap());
        assert!(is_h_member(&r, &[0]).unwrap());
        assert!(is_h_member(&r, &[1]).unwrap());
    }

    #[test]
    fn h_member_missing_skip_edge() {
        let r = rel(&[0, 1, 2], &[(2, 1), (1, 0)]);
        assert!(!is_h_member(&r, &[2, 1, 0]).unwrap());
    }

    #[test]
    fn h_member_checks_domain() {
        let r = rel(&[0, 1], &[(1, 0)]);
        assert!(matches!(
            is_h_member(&r, &[0, 9]),
            Err(Error::StateNotInDomain(9))
        ));
    }

    #[test]
    fn successor_relation_has_h_length_two() {
        // Edges (n+1, n): any H-sequence has length at most two.
        let edges: Vec<(u64, u64)> = (0..5).map(|n| (n + 1, n)).collect();
        let r = rel(&[0, 1, 2, 3, 4, 5], &edges);
        let (len, wit) = longest_h_sequence(&r, None, &RunConfig::default()).unwrap();
        assert_eq!(len, 2);
        assert_eq!(wit, vec![1, 0]);
    }

    #[test]
    fn full_descending_order_has_full_h_chain() {
        let mut edges = Vec::new();
        for x in 0..5u64 {
            for y in 0..x {
                edges.push((x, y));
            }
        }
        let r = rel(&[0, 1, 2, 3, 4], &edges);
        let (len, wit) = longest_h_sequence(&r, None, &RunConfig::default()).unwrap();
        assert_eq!(len, 5);
        assert_eq!(wit, vec![4, 3, 2, 1, 0]);
    }

    #[test]
    fn chain_without_skip_edges_caps_at_two() {
        let r = rel(&[0, 1, 2], &[(1, 0), (2, 1)]);
        let (len, _) = longest_h_sequence(&r, None, &RunConfig::default()).unwrap();
        assert_eq!(len, 2);
    }

    #[test]
    fn anchored_search_fixes_first_element() {
        let r = rel(&[0, 1, 2], &[(1, 0), (2, 1), (2, 0)]);
        let (len, wit) = longest_h_sequence(&r, Some(2), &RunConfig::default()).unwrap();
        assert_eq!((len, wit), (3, vec![2, 1, 0]));
        let (len0, wit0) = longest_h_sequence(&r, Some(0), &RunConfig::default()).unwrap();
        assert_eq!((len0, wit0), (1, vec![0]));
    }

    #[test]
    fn reflexive_point_is_an_error_for_search() {
        let r = rel(&[3], &[(3, 3)]);
        assert!(matches!(
            longest_h_sequence(&r, None, &RunConfig::default()),
            Err(Error::NotHWellFounded(3))
        ));
    }

    #[test]
    fn h_well_foundedness_is_irreflexivity() {
        let succ: Vec<(u64, u64)> = (0..5).map(|n| (n + 1, n)).collect();
        assert!(is_h_well_founded(&rel(&[0, 1, 2, 3, 4, 5], &succ)).h_well_founded);
        let v = is_h_well_founded(&rel(&[3], &[(3, 3)]));
        assert!(!v.h_well_founded);
        assert_eq!(v.reflexive_witness, Some(3));
        assert!(is_h_well_founded(&rel(&[0, 1], &[(0, 1), (1, 0)])).h_well_founded);
    }

    #[test]
    fn two_cycle_has_h_length_two() {
        let r = rel(&[0, 1], &[(0, 1), (1, 0)]);
        let (len, wit) = longest_h_sequence(&r, None, &RunConfig::default()).unwrap();
        assert_eq!((len, wit), (2, vec![0, 1]));
    }
}
