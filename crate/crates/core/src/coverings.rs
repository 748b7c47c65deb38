//! Filter-closed families of cones: the odd-cardinality coverings, good
//! stages, and the star construction that enumerates filter-closed sets
//! while avoiding every odd covering.

use std::cell::RefCell;
use std::fmt;

use crate::constructions::InjectiveFamily;
use crate::dyadic::{filter_closure, is_acceptable, optimal_covering, Antichain, BitString};
use crate::error::Result;
use crate::streams::{relocate, EnumerationScript, Event, StringSet};

/// `|σ_n|` exceeds every member of `O_{S_n}` and `σ_n` extends none of them.
pub fn good_stage<'a, I>(consumed: I, next: &BitString) -> bool
where
    I: IntoIterator<Item = &'a BitString>,
{
    optimal_covering(consumed)
        .iter()
        .all(|t| next.len() > t.len() && !t.is_prefix_of(next))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Case {
    /// `S_n` is acceptable: `Y` becomes the filter closure of `O_n`.
    A,
    /// `Y` becomes the filter closure of `O_n ∪ {σ_n}`.
    B,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarSnapshot {
    pub stage: usize,
    pub good: bool,
    pub case: Option<Case>,
    /// `O_n`, the optimal covering of the strings consumed before stage `n`.
    pub covering: Antichain,
    /// The family whose filter closure is the current output.
    pub generators: Antichain,
    /// Minimal antichain of the output `Y_n`.
    pub output: Antichain,
}

impl fmt::Display for StarSnapshot {
    /// `stage good? case antichain`, tab-separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let good = if self.good { "good" } else { "-" };
        let case = match self.case {
            Some(Case::A) => "a",
            Some(Case::B) => "b",
            None => "-",
        };
        write!(f, "{}\t{good}\t{case}\t{}", self.stage, self.output)
    }
}

/// Replays the listing `σ_0, σ_1, …` up to `horizon`, one snapshot per stage.
///
/// At stage `n` the consumed set is `S_n = {σ_0, …, σ_{n−1}}`. A stage past
/// the end of the listing is not good. At a good stage the output becomes
/// `O_n↑` if `S_n` is acceptable and `(O_n ∪ {σ_n})↑` otherwise; elsewhere it
/// is unchanged, starting from `Y_{−1} = ∅`.
///
/// ```
/// use numberings::coverings::{star_construction, Case};
/// use numberings::dyadic::bits;
///
/// let snapshots = star_construction(&[bits("00"), bits("010")], 1);
/// assert_eq!(snapshots[0].case, Some(Case::A));
/// assert!(snapshots[0].output.is_empty());
/// assert_eq!(snapshots[1].case, Some(Case::B));
/// assert_eq!(snapshots[1].output.to_string(), "{00,010}");
/// ```
pub fn star_construction(listing: &[BitString], horizon: usize) -> Vec<StarSnapshot> {
    let mut generators = Antichain::empty();
    let mut output = Antichain::empty();
    let mut out = Vec::with_capacity(horizon + 1);
    for n in 0..=horizon {
        let consumed = &listing[..n.min(listing.len())];
        let covering = optimal_covering(consumed);
        let next = listing.get(n);
        let good = next.is_some_and(|s| good_stage(consumed, s));
        let mut case = None;
        if let (true, Some(sigma)) = (good, next) {
            if is_acceptable(consumed) {
                case = Some(Case::A);
                generators = covering.clone();
            } else {
                case = Some(Case::B);
                generators = optimal_covering(covering.iter().chain(std::iter::once(sigma)));
            }
            output = filter_closure(generators.iter());
        }
        out.push(StarSnapshot {
            stage: n,
            good,
            case,
            covering,
            generators: generators.clone(),
            output: output.clone(),
        });
    }
    out
}

/// One string per line; blank lines and `#` comments are skipped.
pub fn parse_listing(text: &str) -> Result<Vec<BitString>> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(i, l)| l.parse::<BitString>().map_err(|e| relocate(e, i + 1)))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    fn admits(self, n: usize) -> bool {
        (n % 2 == 1) == (self == Parity::Odd)
    }
}

/// Reduced antichains of one cardinality parity, in canonical order: by
/// total length, then by the concatenation of the members in
/// length-lexicographic order, then by the member list.
///
/// Levels are generated on demand and cached.
#[derive(Debug)]
pub struct CoveringFamily {
    parity: Parity,
    cache: RefCell<Cache>,
}

#[derive(Debug, Default)]
struct Cache {
    members: Vec<Antichain>,
    next_total: usize,
}

impl CoveringFamily {
    pub fn new(parity: Parity) -> Self {
        CoveringFamily {
            parity,
            cache: RefCell::new(Cache::default()),
        }
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// The `i`-th member.
    pub fn get(&self, i: usize) -> Antichain {
        let mut cache = self.cache.borrow_mut();
        while cache.members.len() <= i {
            let total = cache.next_total;
            let level = antichains_with_total(total, self.parity);
            cache.members.extend(level);
            cache.next_total += 1;
        }
        cache.members[i].clone()
    }

    /// All members of total length at most `total`, in order.
    pub fn up_to_total(&self, total: usize) -> Vec<Antichain> {
        let mut out = Vec::new();
        for i in 0.. {
            let a = self.get(i);
            if a.total_bits() > total {
                break;
            }
            out.push(a);
        }
        out
    }
}

/// The `i`-th reduced antichain of odd cardinality.
///
/// ```
/// use numberings::coverings::odd_covering_family;
///
/// assert_eq!(odd_covering_family(0).to_string(), "{-}");
/// assert_eq!(odd_covering_family(1).to_string(), "{0}");
/// assert_eq!(odd_covering_family(2).to_string(), "{1}");
/// ```
pub fn odd_covering_family(i: usize) -> Antichain {
    CoveringFamily::new(Parity::Odd).get(i)
}

/// The `i`-th reduced antichain of even cardinality, starting with `∅`.
pub fn even_covering_family(i: usize) -> Antichain {
    CoveringFamily::new(Parity::Even).get(i)
}

fn antichains_with_total(total: usize, parity: Parity) -> Vec<Antichain> {
    if total == 0 {
        return match parity {
            Parity::Odd => vec![Antichain::try_from_members([BitString::new()]).expect("singleton")],
            Parity::Even => vec![Antichain::empty()],
        };
    }
    let candidates: Vec<BitString> = BitString::all_up_to(total).skip(1).collect();
    let mut found = Vec::new();
    let mut chosen = Vec::new();
    extend(&candidates, 0, total, &mut chosen, parity, &mut found);
    let mut keyed: Vec<(BitString, Vec<BitString>)> = found
        .into_iter()
        .map(|members: Vec<BitString>| {
            let concat = members.iter().fold(BitString::new(), |acc, m| acc.concat(m));
            (concat, members)
        })
        .collect();
    keyed.sort_by(|a, b| a.0.bits().cmp(b.0.bits()).then_with(|| a.1.cmp(&b.1)));
    keyed
        .into_iter()
        .map(|(_, members)| Antichain::try_from_members(members).expect("reduced by construction"))
        .collect()
}

fn extend(
    candidates: &[BitString],
    from: usize,
    budget: usize,
    chosen: &mut Vec<BitString>,
    parity: Parity,
    found: &mut Vec<Vec<BitString>>,
) {
    if budget == 0 {
        if parity.admits(chosen.len()) {
            found.push(chosen.clone());
        }
        return;
    }
    for (i, c) in candidates.iter().enumerate().skip(from) {
        if c.len() > budget {
            continue;
        }
        let fits = chosen
            .iter()
            .all(|x| !x.is_comparable(c) && x.sibling().as_ref() != Some(c));
        if fits {
            chosen.push(c.clone());
            extend(candidates, i + 1, budget - c.len(), chosen, parity, found);
            chosen.pop();
        }
    }
}

/// A covering family seen as string sets: each antichain `O` becomes the
/// strings of length at most `depth` in `O↑`. Antichains with a member longer
/// than `depth` are skipped, and the family ends after total length
/// `max_total`.
#[derive(Debug)]
pub struct ExpandedCoverings {
    table: Vec<Antichain>,
    depth: usize,
}

impl ExpandedCoverings {
    pub fn new(parity: Parity, depth: usize, max_total: usize) -> Self {
        let table = CoveringFamily::new(parity)
            .up_to_total(max_total)
            .into_iter()
            .filter(|a| a.iter().all(|m| m.len() <= depth))
            .collect();
        ExpandedCoverings { table, depth }
    }

    pub fn antichain(&self, i: usize) -> Option<&Antichain> {
        self.table.get(i)
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn depth(&self) -> usize {
        self.depth
    }
}

impl InjectiveFamily for ExpandedCoverings {
    fn member(&self, i: usize) -> Option<StringSet> {
        self.table.get(i).map(|a| a.expand(self.depth))
    }
}

/// The second family of the composition: star outputs interleaved with the
/// acceptable filter-closed sets.
///
/// Index `2j` follows star run `j`, its stage-`n` set being the depth-`depth`
/// expansion of the stage-`n` output. Index `2j + 1` is the `j`-th member of
/// `acceptable`, enumerated at stage `j`.
pub fn interleave_with_acceptable(
    runs: &[Vec<StarSnapshot>],
    acceptable: &[Antichain],
    depth: usize,
    horizon: usize,
) -> Result<EnumerationScript> {
    let mut events = Vec::new();
    for (j, run) in runs.iter().enumerate() {
        let mut seen = StringSet::new();
        for snap in run.iter().take(horizon + 1) {
            for s in snap.output.expand(depth) {
                if seen.insert(s.clone()) {
                    events.push(Event::string(snap.stage, 2 * j, s));
                }
            }
        }
    }
    for (j, a) in acceptable.iter().enumerate().filter(|(j, _)| *j <= horizon) {
        for s in a.expand(depth) {
            events.push(Event::string(j, 2 * j + 1, s));
        }
    }
    EnumerationScript::new(events, horizon)
}


#[cfg(test)]
mod properties {
    use proptest::prelude::*;

    use super::*;
    use crate::dyadic::{is_acceptable, optimal_covering};

    fn string_up_to(max: usize) -> impl Strategy<Value = BitString> {
        prop::collection::vec(any::<bool>(), 0..=max).prop_map(BitString::from_bits)
    }

    proptest! {
        #[test]
        fn star_outputs_avoid_odd_coverings(listing in prop::collection::vec(string_up_to(6), 0..12)) {
            let run = star_construction(&listing, listing.len() + 2);
            let mut previous = StringSet::new();
            for snap in &run {
                prop_assert!(is_acceptable(snap.generators.iter()));
                prop_assert_eq!(&optimal_covering(snap.generators.iter()), &snap.output);
                let covered = snap.output.expand(6);
                prop_assert!(previous.is_subset(&covered));
                previous = covered;
            }
            if let Some(last_good) = run.iter().rposition(|s| s.good) {
                let last = &run.last().unwrap().output;
                for s in &listing[..last_good] {
                    prop_assert!(last.covers(s), "{} not covered", s);
                }
            }
        }
    }
}
