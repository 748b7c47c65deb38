use std::collections::{BTreeSet, HashSet};

use crate::dyadic::BitString;
use crate::error::{Error, Result};
use crate::streams::{EnumerationScript, Event, StringSet};

/// A family of finite string sets listed without repetition.
pub trait InjectiveFamily {
    /// The `i`-th member, or `None` past the end of a finite family.
    fn member(&self, i: usize) -> Option<StringSet>;
}

/// Supplies members of an injective family extending a given finite set.
pub trait ExtensionPicker {
    /// Index of a member containing `finite` and accepted by `available`.
    fn pick(
        &mut self,
        finite: &StringSet,
        family: &dyn InjectiveFamily,
        available: &dyn Fn(usize, &StringSet) -> bool,
    ) -> Option<usize>;
}

/// A finite family given by its members.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableFamily {
    members: Vec<StringSet>,
}

impl TableFamily {
    pub fn new(members: Vec<StringSet>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for (i, m) in members.iter().enumerate() {
            if !seen.insert(m) {
                return Err(Error::Domain(format!("member {i} repeats an earlier member")));
            }
        }
        Ok(TableFamily { members })
    }

    pub fn members(&self) -> &[StringSet] {
        &self.members
    }

    pub fn index_of(&self, set: &StringSet) -> Option<usize> {
        self.members.iter().position(|m| m == set)
    }
}

impl InjectiveFamily for TableFamily {
    fn member(&self, i: usize) -> Option<StringSet> {
        self.members.get(i).cloned()
    }
}

/// The finite sets of odd size whose members have shortlex index below 64.
///
/// Such a set is a 64-bit mask of odd popcount. Exactly one of `2i`, `2i + 1`
/// has odd popcount, and that mask is member `i`.
#[derive(Clone, Copy, Debug, Default)]
pub struct OddSizeFamily;

impl OddSizeFamily {
    pub fn mask_of(set: &StringSet) -> Option<u64> {
        set.iter().try_fold(0u64, |mask, s| {
            let bit = s.shortlex_index();
            (bit < 64).then(|| mask | 1 << bit)
        })
    }

    /// Index of `set` if it is a member.
    pub fn index_of(set: &StringSet) -> Option<usize> {
        Self::mask_of(set)
            .filter(|m| m.count_ones() % 2 == 1)
            .map(|m| (m >> 1) as usize)
    }

    fn set_of(mask: u64) -> StringSet {
        (0..64)
            .filter(|b| mask >> b & 1 == 1)
            .map(BitString::from_shortlex_index)
            .collect()
    }
}

impl InjectiveFamily for OddSizeFamily {
    fn member(&self, i: usize) -> Option<StringSet> {
        let even = (i as u64).checked_mul(2)?;
        let mask = if even.count_ones() % 2 == 1 { even } else { even | 1 };
        Some(Self::set_of(mask))
    }
}

/// Extends a set by strings past its largest member until the size is odd.
#[derive(Clone, Copy, Debug)]
pub struct OddSizePicker {
    /// Number of candidate masks tried.
    pub limit: u64,
}

impl ExtensionPicker for OddSizePicker {
    fn pick(
        &mut self,
        finite: &StringSet,
        family: &dyn InjectiveFamily,
        available: &dyn Fn(usize, &StringSet) -> bool,
    ) -> Option<usize> {
        let base = OddSizeFamily::mask_of(finite)?;
        let shift = 64 - base.leading_zeros();
        (0..self.limit)
            .map_while(|j| match j {
                0 => Some(base),
                _ if shift < 64 && (shift == 0 || j < 1u64 << (64 - shift)) => Some(base | j << shift),
                _ => None,
            })
            .filter(|m| m.count_ones() % 2 == 1)
            .map(|m| (m >> 1) as usize)
            .find(|&i| family.member(i).is_some_and(|set| available(i, &set)))
    }
}

/// Tries members `0..limit` in order.
#[derive(Clone, Copy, Debug)]
pub struct ScanPicker {
    pub limit: usize,
}

impl ExtensionPicker for ScanPicker {
    fn pick(
        &mut self,
        finite: &StringSet,
        family: &dyn InjectiveFamily,
        available: &dyn Fn(usize, &StringSet) -> bool,
    ) -> Option<usize> {
        (0..self.limit)
            .map_while(|i| family.member(i).map(|set| (i, set)))
            .find(|(i, set)| finite.is_subset(set) && available(*i, set))
            .map(|(i, _)| i)
    }
}

/// Where an output set comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Origin {
    /// Member of the injective family, listed in turn.
    Listed { l1: usize },
    /// Follower of a second-family index, turned into an injective-family member.
    Diverted { l2: usize, l1: usize },
    Follower { l2: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergeOutcome {
    pub script: EnumerationScript,
    pub origins: Vec<Origin>,
    /// Every injective-family index below this was listed or consumed.
    pub listed_through: usize,
}

impl MergeOutcome {
    /// Output sets at the horizon, by output index.
    pub fn final_sets(&self) -> Vec<StringSet> {
        (0..self.origins.len())
            .map(|o| {
                self.script
                    .stage_strings(o, self.script.horizon())
                    .expect("merge outputs are string sets")
            })
            .collect()
    }
}

enum Track {
    Following(usize),
    Waiting,
}

/// Merges an injective family `L1` and a c.e. family `L2` into one listing
/// without repetitions.
///
/// Every stage activates the next `L2` index as a follower copying its set,
/// and lists the next `L1` member not already taken. A follower whose set
/// equals a non-follower output, or the set of a follower with a smaller
/// index, is diverted: the picker supplies an unused `L1` member containing
/// its set, the follower's output is completed to that member, and the index
/// waits until its set differs from every output, when it gets a new
/// follower.
///
/// If every set has settled by the horizon, the final outputs are pairwise
/// distinct and contain every `L2` set and every `L1` member below
/// [`MergeOutcome::listed_through`].
pub fn friedberg_merge(
    l1: &dyn InjectiveFamily,
    l2: &EnumerationScript,
    picker: &mut dyn ExtensionPicker,
    horizon: usize,
) -> Result<MergeOutcome> {
    if horizon > l2.horizon() {
        return Err(Error::Precondition {
            construction: "friedberg_merge",
            message: format!("second family ends at stage {}, horizon is {horizon}", l2.horizon()),
        });
    }
    let mut outputs: Vec<StringSet> = Vec::new();
    let mut origins: Vec<Origin> = Vec::new();
    let mut events: Vec<Event> = Vec::new();
    let mut tracks: Vec<Track> = Vec::new();
    let mut taken: HashSet<usize> = HashSet::new();
    let mut next_l1 = 0usize;
    let mut l1_done = false;

    fn emit(outputs: &mut [StringSet], events: &mut Vec<Event>, o: usize, set: &StringSet, stage: usize) {
        for s in set {
            if outputs[o].insert(s.clone()) {
                events.push(Event::string(stage, o, s.clone()));
            }
        }
    }

    for stage in 0..=horizon {
        if stage < l2.index_count() {
            outputs.push(StringSet::new());
            origins.push(Origin::Follower { l2: stage });
            tracks.push(Track::Following(outputs.len() - 1));
        }
        for (e, track) in tracks.iter().enumerate() {
            if let Track::Following(o) = *track {
                emit(&mut outputs, &mut events, o, &l2.stage_strings(e, stage)?, stage);
            }
        }
        while !l1_done && taken.contains(&next_l1) {
            next_l1 += 1;
        }
        if !l1_done {
            match l1.member(next_l1) {
                Some(set) => {
                    outputs.push(StringSet::new());
                    origins.push(Origin::Listed { l1: next_l1 });
                    let o = outputs.len() - 1;
                    emit(&mut outputs, &mut events, o, &set, stage);
                    taken.insert(next_l1);
                    next_l1 += 1;
                }
                None => l1_done = true,
            }
        }
        for e in 0..tracks.len() {
            let Track::Following(o) = tracks[e] else {
                continue;
            };
            let clash = outputs.iter().enumerate().any(|(other, set)| {
                other != o
                    && *set == outputs[o]
                    && match origins[other] {
                        Origin::Follower { l2 } => l2 < e && matches!(tracks[l2], Track::Following(_)),
                        _ => true,
                    }
            });
            if !clash {
                continue;
            }
            let current = outputs[o].clone();
            let available = |i: usize, set: &StringSet| !taken.contains(&i) && !outputs.contains(set);
            let k = picker
                .pick(&current, l1, &available)
                .ok_or_else(|| Error::Contract(format!("no unused extension of index {e}'s set at stage {stage}")))?;
            let set = l1.member(k).expect("picker returned a member");
            if !current.is_subset(&set) {
                return Err(Error::Contract(format!("picked member {k} does not extend index {e}'s set")));
            }
            emit(&mut outputs, &mut events, o, &set, stage);
            origins[o] = Origin::Diverted { l2: e, l1: k };
            taken.insert(k);
            tracks[e] = Track::Waiting;
        }
        for e in 0..tracks.len() {
            if !matches!(tracks[e], Track::Waiting) {
                continue;
            }
            let set = l2.stage_strings(e, stage)?;
            if !outputs.contains(&set) {
                outputs.push(StringSet::new());
                origins.push(Origin::Follower { l2: e });
                let o = outputs.len() - 1;
                emit(&mut outputs, &mut events, o, &set, stage);
                tracks[e] = Track::Following(o);
            }
        }
    }
    while taken.contains(&next_l1) {
        next_l1 += 1;
    }
    Ok(MergeOutcome {
        script: EnumerationScript::new(events, horizon)?,
        origins,
        listed_through: next_l1,
    })
}
