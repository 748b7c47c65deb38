//! Brute-force reference implementations.
//!
//! Each function here recomputes something the library computes, by a
//! deliberately naive and independent route: expanding cones down to a fixed
//! depth and counting leaves, scanning enumerations linearly, or iterating a
//! closure rule to its fixpoint. They are used by the `check` suites and by
//! the test suites; nothing in the main code paths calls them.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::classes::Tree;
use crate::dyadic::{Antichain, BitString, Dyadic};

/// Binary expansion by repeated doubling of the remainder.
pub fn greedy_expansion(q: &Dyadic) -> BitString {
    let denominator = BigUint::from(1u32) << q.exponent();
    let mut remainder = q.numerator().clone();
    let mut out = BitString::new();
    while !remainder.is_zero() {
        remainder <<= 1u32;
        if remainder >= denominator {
            remainder -= &denominator;
            out.push(true);
        } else {
            out.push(false);
        }
    }
    out
}

/// Marks the depth-`depth` leaves lying in `[S]^⪯`.
fn covered_leaves(strings: &[BitString], depth: usize) -> Vec<bool> {
    assert!(depth < 24, "oracle depth {depth} too large");
    let mut leaves = vec![false; 1 << depth];
    for s in strings {
        assert!(s.len() <= depth, "oracle depth {depth} below string length {}", s.len());
        let width = 1usize << (depth - s.len());
        let start = s.to_u64() as usize * width;
        leaves[start..start + width].iter_mut().for_each(|l| *l = true);
    }
    leaves
}

fn cone_covered(leaves: &[bool], depth: usize, s: &BitString) -> bool {
    let width = 1usize << (depth - s.len());
    let start = s.to_u64() as usize * width;
    leaves[start..start + width].iter().all(|&l| l)
}

/// `μ([S]^⪯)` by counting covered leaves at `depth ≥ max |σ|`.
pub fn measure_by_counting(strings: &[BitString], depth: usize) -> Dyadic {
    let count = covered_leaves(strings, depth).iter().filter(|&&l| l).count();
    Dyadic::new(count as u64, depth as u32).expect("leaf fraction lies in [0, 1]")
}

/// The minimal strings whose cones are covered, found by testing every
/// string of length at most `depth` against the covered leaves.
pub fn covering_by_expansion(strings: &[BitString], depth: usize) -> Antichain {
    let leaves = covered_leaves(strings, depth);
    let members = BitString::all_up_to(depth).filter(|s| {
        cone_covered(&leaves, depth, s) && !(0..s.len()).any(|n| cone_covered(&leaves, depth, &s.prefix(n)))
    });
    Antichain::try_from_members(members).expect("minimal covered cones form a reduced antichain")
}

/// `Y↑` restricted to strings of length at most `max_len`: close `Y` upwards,
/// then add parents of sibling pairs until nothing changes.
pub fn filter_closure_fixpoint(strings: &[BitString], max_len: usize) -> BTreeSet<BitString> {
    let mut set: BTreeSet<BitString> = BitString::all_up_to(max_len)
        .filter(|t| strings.iter().any(|y| y.is_prefix_of(t)))
        .collect();
    loop {
        let additions: Vec<BitString> = BitString::all_up_to(max_len.saturating_sub(1))
            .filter(|s| !set.contains(s) && set.contains(&s.child(false)) && set.contains(&s.child(true)))
            .collect();
        if additions.is_empty() {
            return set;
        }
        set.extend(additions);
    }
}

/// Least `p ≥ 1` with `p − 2⌊log₂ p⌋ ≥ target`, by linear scan.
pub fn padding_scan(target: usize) -> usize {
    (1usize..)
        .find(|&p| {
            let log = (usize::BITS - 1 - p.leading_zeros()) as i64;
            p as i64 - 2 * log >= target as i64
        })
        .expect("scan terminates")
}

/// The `i`-th string, length-lexicographically, ending in 1 with an odd
/// number of ones.
pub fn odd_ones_scan(i: usize) -> BitString {
    (0..)
        .flat_map(BitString::all_of_length)
        .filter(|s| !s.is_empty() && s.get(s.len() - 1) && s.count_ones() % 2 == 1)
        .nth(i)
        .expect("infinitely many candidates")
}

/// The rightmost node at length `d`, by depth-first search trying the
/// 1-branch first.
pub fn rightmost_path_dfs(tree: &Tree, d: usize) -> Option<BitString> {
    fn go(tree: &Tree, at: BitString, d: usize) -> Option<BitString> {
        if !tree.contains(&at) {
            return None;
        }
        if at.len() == d {
            return Some(at);
        }
        go(tree, at.child(true), d).or_else(|| go(tree, at.child(false), d))
    }
    go(tree, BitString::new(), d)
}

/// Strings of length `d` all of whose prefixes are tree nodes.
pub fn paths_by_prefix_check(tree: &Tree, d: usize) -> BTreeSet<BitString> {
    BitString::all_of_length(d)
        .filter(|x| x.prefixes().all(|p| tree.contains(&p)))
        .collect()
}

/// Whether `members` is its own optimal covering.
pub fn is_own_optimal_covering(members: &Antichain) -> bool {
    let strings: Vec<BitString> = members.iter().cloned().collect();
    let depth = strings.iter().map(BitString::len).max().unwrap_or(0);
    &covering_by_expansion(&strings, depth) == members
}

/// Every set of strings with total length exactly `total` that is its own
/// optimal covering, by exhaustive subset search.
pub fn reduced_antichains_with_total(total: usize) -> BTreeSet<Antichain> {
    fn go(
        candidates: &[BitString],
        from: usize,
        budget: usize,
        chosen: &mut Vec<BitString>,
        out: &mut BTreeSet<Antichain>,
    ) {
        if budget == 0 {
            let depth = chosen.iter().map(BitString::len).max().unwrap_or(0);
            let cover = covering_by_expansion(chosen, depth);
            if cover.len() == chosen.len() && chosen.iter().all(|c| cover.contains(c)) {
                out.insert(cover);
            }
        }
        for (i, c) in candidates.iter().enumerate().skip(from) {
            if c.len() > budget {
                continue;
            }
            chosen.push(c.clone());
            go(candidates, i + 1, budget - c.len(), chosen, out);
            chosen.pop();
        }
    }
    let mut out = BTreeSet::new();
    if total == 0 {
        // ε spends no budget, and only {ε} can contain it.
        out.insert(Antichain::empty());
        out.insert(Antichain::try_from_members([BitString::new()]).expect("singleton"));
        return out;
    }
    let candidates: Vec<BitString> = BitString::all_up_to(total).skip(1).collect();
    go(&candidates, 0, total, &mut Vec::new(), &mut out);
    out
}
