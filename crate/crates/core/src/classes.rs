//! Depth-bounded trees standing in for effectively closed classes.
//!
//! A [`Tree`] is a prefix-closed set of strings of length at most `D`. Its
//! length-`D` nodes play the role of the infinite paths; a node shorter than
//! `D` with no children is a dead end. Everything about infinite paths is
//! asserted at depth `D` only.

use std::collections::BTreeSet;
use std::fmt;

use crate::complexity::PrefixMachine;
use crate::dyadic::{optimal_covering, BitString, Dyadic};
use crate::error::{Error, Result};
use crate::streams::{relocate, EnumerationScript, Item, StringSet};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tree {
    nodes: BTreeSet<BitString>,
    depth: usize,
}

impl Tree {
    /// Validates prefix-closure and the depth bound, naming the first
    /// offending node.
    pub fn new(nodes: BTreeSet<BitString>, depth: usize) -> Result<Tree> {
        for n in &nodes {
            if n.len() > depth {
                return Err(Error::InvalidTree(format!("node {n} is longer than depth {depth}")));
            }
            if let Some(p) = n.parent() {
                if !nodes.contains(&p) {
                    return Err(Error::InvalidTree(format!("node {n} is present but its parent {} is not", p.field())));
                }
            }
        }
        Ok(Tree { nodes, depth })
    }

    pub fn full(depth: usize) -> Tree {
        Tree {
            nodes: BitString::all_up_to(depth).collect(),
            depth,
        }
    }

    pub fn empty(depth: usize) -> Tree {
        Tree {
            nodes: BTreeSet::new(),
            depth,
        }
    }

    /// All strings of length at most `depth` extending no member of `forbidden`.
    pub fn avoiding<'a, I>(forbidden: I, depth: usize) -> Tree
    where
        I: IntoIterator<Item = &'a BitString>,
    {
        let forbidden: BTreeSet<&BitString> = forbidden.into_iter().collect();
        let mut nodes = Vec::new();
        let mut level = vec![BitString::new()];
        for len in 0..=depth {
            level.retain(|s| !forbidden.contains(s));
            nodes.extend(level.iter().cloned());
            if len < depth {
                level = level.iter().flat_map(|s| [s.child(false), s.child(true)]).collect();
            }
        }
        Tree {
            nodes: nodes.into_iter().collect(),
            depth,
        }
    }

    /// The prefix closure of `strings`.
    pub fn closure_of<'a, I>(strings: I, depth: usize) -> Result<Tree>
    where
        I: IntoIterator<Item = &'a BitString>,
    {
        let mut nodes = BTreeSet::new();
        for s in strings {
            if s.len() > depth {
                return Err(Error::InvalidTree(format!("string {s} is longer than depth {depth}")));
            }
            nodes.extend(s.prefixes());
        }
        Ok(Tree { nodes, depth })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn nodes(&self) -> &BTreeSet<BitString> {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, s: &BitString) -> bool {
        self.nodes.contains(s)
    }

    fn level(&self, d: usize) -> impl DoubleEndedIterator<Item = &BitString> {
        self.nodes.range(BitString::zeros(d)..=BitString::ones(d))
    }

    /// The length-`d` nodes.
    pub fn paths_at_depth(&self, d: usize) -> Result<StringSet> {
        if d > self.depth {
            return Err(Error::Range {
                what: "path depth",
                got: d,
                bound: self.depth,
            });
        }
        Ok(self.level(d).cloned().collect())
    }

    /// Fraction of length-`D` strings that are nodes.
    pub fn path_measure(&self) -> Dyadic {
        Dyadic::new(self.level(self.depth).count() as u64, self.depth as u32).expect("fraction of a level")
    }

    /// Nodes shorter than `D` with neither child in the tree, in
    /// length-lexicographic order.
    pub fn dead_ends(&self) -> Vec<BitString> {
        self.nodes
            .iter()
            .filter(|s| s.len() < self.depth && !self.contains(&s.child(false)) && !self.contains(&s.child(true)))
            .cloned()
            .collect()
    }

    /// The lexicographically greatest node of length `d`.
    pub fn rightmost_path(&self, d: usize) -> Option<BitString> {
        self.level(d).next_back().cloned()
    }

    /// Whether every prefix of `x` is a node.
    pub fn contains_path(&self, x: &BitString) -> bool {
        x.prefixes().all(|p| self.contains(&p))
    }

    pub fn intersect(&self, other: &Tree) -> Tree {
        let depth = self.depth.min(other.depth);
        let nodes = self
            .nodes
            .intersection(&other.nodes)
            .filter(|s| s.len() <= depth)
            .cloned()
            .collect();
        Tree { nodes, depth }
    }

    /// `self` with a copy of `graft` hung below `at`, cut off at `D`.
    fn graft(&mut self, at: &BitString, graft: &Tree) {
        self.nodes.extend(at.prefixes());
        for n in &graft.nodes {
            if at.len() + n.len() > self.depth {
                continue;
            }
            self.nodes.insert(at.concat(n));
        }
    }

    /// Parses one node per line. The depth is the longest node unless given.
    pub fn parse(text: &str, depth: Option<usize>) -> Result<Tree> {
        let mut nodes = BTreeSet::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            nodes.insert(line.parse::<BitString>().map_err(|e| relocate(e, i + 1))?);
        }
        // The root line is optional.
        if !nodes.is_empty() {
            nodes.insert(BitString::new());
        }
        let depth = depth.unwrap_or_else(|| nodes.iter().map(BitString::len).max().unwrap_or(0));
        Tree::new(nodes, depth)
    }
}

impl fmt::Display for Tree {
    /// One node per line; the root renders as `ε`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for n in &self.nodes {
            writeln!(f, "{n}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Tree")
            .field("depth", &self.depth)
            .field("nodes", &self.nodes)
            .finish()
    }
}

/// Outcome of [`diagonalize`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagonalization {
    pub tree: Tree,
    /// `σ_0, …, σ_N`: the first dead ends of `T_0`.
    pub dead_ends: Vec<BitString>,
    /// `τ_n`: where each copy of `T_0` was grafted.
    pub grafts: Vec<BitString>,
}

/// Builds a tree whose depth-`D` paths meet every cone `[τ_n]`, where `T_n`
/// has none.
///
/// `σ_n` is the `n`-th dead end of `T_0`, `τ_n` the least extension of `σ_n`
/// passing through a dead end of `T_n`, and the result is `T_0` with a copy
/// of `T_0` hung below each `τ_n`.
pub fn diagonalize(trees: &[Tree], depth: usize) -> Result<Diagonalization> {
    let fail = |message: String| Error::Precondition {
        construction: "diagonalize",
        message,
    };
    let base = trees.first().ok_or_else(|| fail("no trees given".into()))?;
    if let Some((n, t)) = trees.iter().enumerate().find(|(_, t)| t.depth() != depth) {
        return Err(fail(format!("tree {n} has depth {}, expected {depth}", t.depth())));
    }
    if base.level(depth).next().is_none() {
        return Err(fail("tree 0 has no path at full depth".into()));
    }
    let base_dead = base.dead_ends();
    if base_dead.len() < trees.len() {
        return Err(fail(format!(
            "n = {}: tree 0 has {} dead ends, {} needed",
            base_dead.len(),
            base_dead.len(),
            trees.len()
        )));
    }
    let sigmas: Vec<BitString> = base_dead.into_iter().take(trees.len()).collect();
    let mut out = base.clone();
    let mut grafts = Vec::with_capacity(trees.len());
    for (n, (sigma, tn)) in sigmas.iter().zip(trees).enumerate() {
        let dead = tn.dead_ends();
        // A dead end below σ_n makes σ_n itself the least extension; otherwise
        // take the least dead end above it.
        let tau = if dead.iter().any(|d| d.is_prefix_of(sigma)) {
            sigma.clone()
        } else {
            dead.into_iter()
                .find(|d| sigma.is_prefix_of(d))
                .ok_or_else(|| fail(format!("n = {n}: tree {n} has no dead end comparable with {}", sigma.field())))?
        };
        out.graft(&tau, base);
        grafts.push(tau);
    }
    Ok(Diagonalization {
        tree: out,
        dead_ends: sigmas,
        grafts,
    })
}

/// Per-stage sets of a measure-capped enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CappedEnumeration {
    /// `Ŵ` at each stage `0..=horizon`.
    pub stages: Vec<StringSet>,
    /// Stage of the first refused string, after which nothing is admitted.
    pub frozen_at: Option<usize>,
}

impl CappedEnumeration {
    pub fn final_set(&self) -> &StringSet {
        self.stages.last().expect("at least stage 0")
    }
}

/// Replays `W_e`, admitting a string only while `μ[Ŵ]^⪯ ≤ 1 − 1/n` stays
/// true; the first refusal freezes the set for good.
pub fn measure_capped_enumeration(script: &EnumerationScript, index: usize, n: u64) -> Result<CappedEnumeration> {
    if n == 0 {
        return Err(Error::Domain("measure cap needs n ≥ 1".into()));
    }
    let mut admitted = StringSet::new();
    let mut frozen_at = None;
    let mut stages = Vec::with_capacity(script.horizon() + 1);
    let mut events = script.events_for(index).peekable();
    for stage in 0..=script.horizon() {
        while let Some(e) = events.next_if(|e| e.stage <= stage) {
            let s = match &e.item {
                Item::Str(s) => s,
                Item::Dyadic(q) => return Err(Error::Type(format!("index {index} enumerates dyadic {q}"))),
            };
            if frozen_at.is_some() || admitted.contains(s) {
                continue;
            }
            let measure = optimal_covering(admitted.iter().chain(std::iter::once(s))).measure();
            if measure.le_ratio(n - 1, n) {
                admitted.insert(s.clone());
            } else {
                frozen_at = Some(stage);
            }
        }
        stages.push(admitted.clone());
    }
    Ok(CappedEnumeration { stages, frozen_at })
}

/// Node-wise intersection of `P` with the stage-`t` approximation of the
/// class of sequences satisfying randomness constant `c`.
pub fn intersect_randomness(tree: &Tree, machine: &PrefixMachine, c: usize, t: usize) -> Tree {
    tree.intersect(&machine.randomness_class_tree(c, t, tree.depth()))
}

/// `T_e = {σ : |σ| ≤ D, ¬h(σ, e)}`, where `h(σ, e)` says the computation on
/// index `e` with oracle `σ` halts within `|σ|` steps.
///
/// `h` must be monotone along extensions; a violation found during the sweep
/// is reported with the offending string.
pub fn tree_from_halting_oracle<H>(mut halts: H, index: usize, depth: usize) -> Result<Tree>
where
    H: FnMut(&BitString, usize) -> bool,
{
    let mut nodes = BTreeSet::new();
    for s in BitString::all_up_to(depth) {
        let h = halts(&s, index);
        if h {
            if s.len() < depth {
                for child in [s.child(false), s.child(true)] {
                    if !halts(&child, index) {
                        return Err(Error::Domain(format!(
                            "halting oracle is not monotone: halts on {} but not on {child}",
                            s.field()
                        )));
                    }
                }
            }
        } else {
            nodes.insert(s);
        }
    }
    Tree::new(nodes, depth)
}
