use std::collections::BTreeSet;
use std::fmt;

use super::{BitString, Dyadic};
use crate::error::{Error, Result};

/// A reduced antichain: no member is a prefix of another, and no two members
/// are siblings. Members iterate in length-lexicographic order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Antichain {
    members: BTreeSet<BitString>,
}

impl Antichain {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Validates both antichain conditions.
    pub fn try_from_members<I: IntoIterator<Item = BitString>>(members: I) -> Result<Self> {
        let members: BTreeSet<BitString> = members.into_iter().collect();
        for (i, a) in members.iter().enumerate() {
            for b in members.iter().skip(i + 1) {
                if a.is_prefix_of(b) {
                    return Err(Error::InvalidAntichain(format!("{a} is a prefix of {b}")));
                }
            }
            if let Some(sib) = a.sibling() {
                if members.contains(&sib) {
                    return Err(Error::InvalidAntichain(format!("{a} and {sib} are siblings")));
                }
            }
        }
        Ok(Antichain { members })
    }

    /// Caller guarantees both invariants.
    pub(crate) fn from_reduced(members: BTreeSet<BitString>) -> Self {
        Antichain { members }
    }

    pub fn members(&self) -> &BTreeSet<BitString> {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = &BitString> {
        self.members.iter()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, s: &BitString) -> bool {
        self.members.contains(s)
    }

    /// Whether `s` extends some member, i.e. `s` belongs to the filter-closed
    /// set this antichain represents.
    pub fn covers(&self, s: &BitString) -> bool {
        s.prefixes().any(|p| self.members.contains(&p))
    }

    /// `μ([self]^⪯) = Σ 2^{-|σ|}`.
    pub fn measure(&self) -> Dyadic {
        self.members
            .iter()
            .fold(Dyadic::zero(), |acc, s| {
                acc.checked_add(&Dyadic::pow2_neg(s.len() as u32))
                    .expect("antichain measure is at most 1")
            })
    }

    /// Sum of member lengths.
    pub fn total_bits(&self) -> usize {
        self.members.iter().map(BitString::len).sum()
    }

    /// Every string of length at most `depth` that extends a member.
    pub fn expand(&self, depth: usize) -> BTreeSet<BitString> {
        let mut out = BTreeSet::new();
        for m in self.members.iter().filter(|m| m.len() <= depth) {
            let mut frontier = vec![m.clone()];
            while let Some(s) = frontier.pop() {
                if s.len() < depth {
                    frontier.push(s.child(false));
                    frontier.push(s.child(true));
                }
                out.insert(s);
            }
        }
        out
    }
}

impl fmt::Display for Antichain {
    /// `{00,010}`; ε renders as `-`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(&m.field())?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Antichain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Binary trie over a finite string set, marking which cones are fully covered.
pub(crate) struct CoverTrie {
    nodes: Vec<Node>,
}

#[derive(Default, Clone, Copy)]
struct Node {
    children: [Option<u32>; 2],
    marked: bool,
}

impl CoverTrie {
    pub(crate) fn new<'a, I: IntoIterator<Item = &'a BitString>>(strings: I) -> Self {
        let mut trie = CoverTrie {
            nodes: vec![Node::default()],
        };
        for s in strings {
            trie.insert(s);
        }
        trie
    }

    fn insert(&mut self, s: &BitString) {
        let mut at = 0usize;
        for b in s.bits() {
            if self.nodes[at].marked {
                return;
            }
            let slot = b as usize;
            at = match self.nodes[at].children[slot] {
                Some(next) => next as usize,
                None => {
                    self.nodes.push(Node::default());
                    let next = self.nodes.len() - 1;
                    self.nodes[at].children[slot] = Some(next as u32);
                    next
                }
            };
        }
        self.nodes[at].marked = true;
    }

    /// Whether the cone below each node is covered, computed children-first.
    fn full_flags(&self) -> Vec<bool> {
        let mut full = vec![false; self.nodes.len()];
        // Children always have larger indices than their parent.
        for i in (0..self.nodes.len()).rev() {
            let n = &self.nodes[i];
            full[i] = n.marked
                || matches!(n.children, [Some(a), Some(b)] if full[a as usize] && full[b as usize]);
        }
        full
    }

    /// The highest fully covered nodes.
    pub(crate) fn minimal_covered(&self) -> BTreeSet<BitString> {
        let full = self.full_flags();
        let mut out = BTreeSet::new();
        let mut stack = vec![(0usize, BitString::new())];
        while let Some((at, path)) = stack.pop() {
            if full[at] {
                out.insert(path);
                continue;
            }
            for (bit, child) in self.nodes[at].children.iter().enumerate() {
                if let Some(c) = child {
                    stack.push((*c as usize, path.child(bit == 1)));
                }
            }
        }
        out
    }
}
