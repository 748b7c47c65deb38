//! Compositions of the constructions used by the command line: families of
//! reals turned into families of lower cuts and merged.
//!
//! A real `x` is represented by its lower cut `{τ : |τ| ≤ L, τ⌢0^ω <_L x}` at
//! a fixed depth `L`. Reals whose associated strings have length at most `L`
//! have distinct cuts.

use std::collections::BTreeSet;

use super::{
    friedberg_merge, hat_m_construction, odd_ones_real_enumeration, HatConfig, InjectiveFamily, MergeOutcome,
    ScanPicker, StageTrace, StageValue, TableFamily,
};
use crate::complexity::PrefixMachine;
use crate::dyadic::rational_of_string;
use crate::error::Result;
use crate::streams::{lower_cut, parity_projection, real_from_ce_set, EnumerationScript, Event, StringSet};

/// Cuts of the reals `σ⌢0^ω` with `σ` ending in 1 and an odd count of ones,
/// for `|σ| ≤ depth`, in the order of [`odd_ones_real_enumeration`].
#[derive(Clone, Copy, Debug)]
pub struct OddOnesCuts {
    pub depth: usize,
}

impl InjectiveFamily for OddOnesCuts {
    fn member(&self, i: usize) -> Option<StringSet> {
        let s = odd_ones_real_enumeration(i);
        (s.len() <= self.depth).then(|| lower_cut(&rational_of_string(&s), self.depth))
    }
}

/// Turns each index's stage values into an enumerated cut: the stage-`s` set
/// is the union of the cuts of the values at stages `≤ s`.
fn cut_script<F>(indices: usize, horizon: usize, depth: usize, mut value_at: F) -> Result<EnumerationScript>
where
    F: FnMut(usize, usize) -> crate::dyadic::Dyadic,
{
    let mut events = Vec::new();
    for e in 0..indices {
        let mut seen = StringSet::new();
        for s in 0..=horizon {
            for t in lower_cut(&value_at(e, s), depth) {
                if seen.insert(t.clone()) {
                    events.push(Event::string(s, e, t));
                }
            }
        }
    }
    EnumerationScript::new(events, horizon)
}

/// The parity-projected family: index `e` enumerates the cut of
/// `r*_{e,s} = parity_projection(r_{e,s}↾L)` for every stage.
///
/// Projected values can drop between stages, so the enumerated set at stage
/// `s` is the cut of the largest projection seen so far.
pub fn parity_cut_family(reals: &EnumerationScript, depth: usize, horizon: usize) -> Result<EnumerationScript> {
    let approx = (0..reals.index_count())
        .map(|e| real_from_ce_set(reals, e))
        .collect::<Result<Vec<_>>>()?;
    cut_script(approx.len(), horizon, depth, |e, s| {
        rational_of_string(&parity_projection(&approx[e].segment(s, depth)))
    })
}

/// Merges the odd-ones cuts with the parity-projected family of `reals`.
pub fn friedberg_left_ce(reals: &EnumerationScript, depth: usize, horizon: usize) -> Result<MergeOutcome> {
    let l2 = parity_cut_family(reals, depth, horizon)?;
    let l1 = OddOnesCuts { depth };
    let mut picker = ScanPicker { limit: 1 << depth.min(20) };
    friedberg_merge(&l1, &l2, &mut picker, horizon)
}

/// Runs [`hat_m_construction`] on every real of `reals`.
pub fn hat_m_family(
    reals: &EnumerationScript,
    machine: &PrefixMachine,
    config: &HatConfig,
    horizon: usize,
) -> Result<Vec<StageTrace>> {
    (0..reals.index_count())
        .map(|e| hat_m_construction(&real_from_ce_set(reals, e)?, machine, config, horizon))
        .collect()
}

/// Cuts of `σ⌢Ω` at the horizon for the odd-ones strings `σ`, repeats
/// dropped.
pub fn omega_shifted_cuts(machine: &PrefixMachine, depth: usize, horizon: usize) -> Result<TableFamily> {
    let mut seen = BTreeSet::new();
    let mut members = Vec::new();
    for i in 0.. {
        let s = odd_ones_real_enumeration(i);
        if s.len() > depth {
            break;
        }
        let cut = lower_cut(&StageValue::omega_tail(s, machine, horizon).to_dyadic(), depth);
        if seen.insert(cut.clone()) {
            members.push(cut);
        }
    }
    TableFamily::new(members)
}

/// The m̂ traces of `reals` as cut sets, merged with the `Ω`-shifted cuts.
pub fn friedberg_random(
    reals: &EnumerationScript,
    machine: &PrefixMachine,
    config: &HatConfig,
    depth: usize,
    horizon: usize,
) -> Result<MergeOutcome> {
    let traces = hat_m_family(reals, machine, config, horizon)?;
    let l2 = cut_script(traces.len(), horizon, depth, |e, s| traces[e].record(s).value.to_dyadic())?;
    let l1 = omega_shifted_cuts(machine, depth, horizon)?;
    let mut picker = ScanPicker { limit: l1.members().len() };
    friedberg_merge(&l1, &l2, &mut picker, horizon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexity::Program;
    use crate::dyadic::{bits, dy};

    fn reals(events: &[(usize, usize, crate::dyadic::Dyadic)], horizon: usize) -> EnumerationScript {
        EnumerationScript::new(events.iter().map(|(s, e, q)| Event::dyadic(*s, *e, q.clone())).collect(), horizon).unwrap()
    }

    fn assert_injective(out: &MergeOutcome) {
        let finals = out.final_sets();
        let distinct: BTreeSet<&StringSet> = finals.iter().collect();
        assert_eq!(distinct.len(), finals.len());
    }

    #[test]
    fn odd_ones_cuts_are_distinct() {
        let f = OddOnesCuts { depth: 6 };
        let cuts: Vec<StringSet> = (0..).map_while(|i| f.member(i)).collect();
        let distinct: BTreeSet<&StringSet> = cuts.iter().collect();
        assert_eq!(distinct.len(), cuts.len());
        assert_eq!(cuts.len(), 1 + (1 << 5) - 1);
    }

    #[test]
    fn left_ce_merge() {
        // Index 0 climbs 011 → 1; index 1 repeats index 0; index 2 is 11.
        let r = reals(
            &[(0, 0, dy(3, 3)), (2, 0, dy(1, 1)), (1, 1, dy(3, 3)), (3, 1, dy(1, 1)), (2, 2, dy(3, 2))],
            10,
        );
        let out = friedberg_left_ce(&r, 4, 10).unwrap();
        assert_injective(&out);
        let l2 = parity_cut_family(&r, 4, 10).unwrap();
        let finals: BTreeSet<StringSet> = out.final_sets().into_iter().collect();
        for e in 0..3 {
            assert!(finals.contains(&l2.stage_strings(e, 10).unwrap()));
        }
    }

    #[test]
    fn random_merge() {
        let m = PrefixMachine::new(vec![Program::new(bits("1"), bits(""), 0), Program::new(bits("01"), bits(""), 3)])
            .unwrap();
        let r = reals(&[(0, 0, dy(1, 2)), (1, 1, dy(1, 2)), (2, 2, dy(5, 3))], 8);
        let out = friedberg_random(&r, &m, &HatConfig::below(2), 5, 8).unwrap();
        assert_injective(&out);
    }
}
