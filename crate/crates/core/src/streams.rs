//! Replayable models of uniformly c.e. families and left-c.e. approximations.
//!
//! An [`EnumerationScript`] is a finite log of `(stage, index, item)` events.
//! Replaying it up to stage `s` yields the stage sets `W_{e,s}`. Reals are
//! approximated from below by [`LeftCEApprox`], a nondecreasing sequence of
//! dyadic rationals, one per stage.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::dyadic::{string_of_rational, BitString, Dyadic};
use crate::error::{Error, Result};

pub type StringSet = BTreeSet<BitString>;

/// An enumerated item: a string or a dyadic rational.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Item {
    Str(BitString),
    Dyadic(Dyadic),
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Item::Str(s) => write!(f, "str\t{}", s.field()),
            Item::Dyadic(q) => write!(f, "dyadic\t{q}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Event {
    pub stage: usize,
    pub index: usize,
    pub item: Item,
}

impl Event {
    pub fn new(stage: usize, index: usize, item: Item) -> Self {
        Event { stage, index, item }
    }

    pub fn string(stage: usize, index: usize, s: BitString) -> Self {
        Event::new(stage, index, Item::Str(s))
    }

    pub fn dyadic(stage: usize, index: usize, q: Dyadic) -> Self {
        Event::new(stage, index, Item::Dyadic(q))
    }
}

/// A finite, replayable enumeration log. Events are kept sorted by stage;
/// events sharing a stage keep their original order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EnumerationScript {
    events: Vec<Event>,
    horizon: usize,
}

impl EnumerationScript {
    pub fn new(mut events: Vec<Event>, horizon: usize) -> Result<Self> {
        if let Some(late) = events.iter().find(|e| e.stage > horizon) {
            return Err(Error::Range {
                what: "event stage",
                got: late.stage,
                bound: horizon,
            });
        }
        events.sort_by_key(|e| e.stage);
        Ok(EnumerationScript { events, horizon })
    }

    /// A script whose horizon is its last event stage.
    pub fn from_events(events: Vec<Event>) -> Self {
        let horizon = events.iter().map(|e| e.stage).max().unwrap_or(0);
        Self::new(events, horizon).expect("horizon covers every event")
    }

    /// Moves the horizon; events past a shortened horizon are dropped.
    pub fn with_horizon(mut self, horizon: usize) -> Self {
        self.events.retain(|e| e.stage <= horizon);
        self.horizon = horizon;
        self
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    /// One past the largest index mentioned.
    pub fn index_count(&self) -> usize {
        self.events.iter().map(|e| e.index + 1).max().unwrap_or(0)
    }

    pub fn events_for(&self, index: usize) -> impl Iterator<Item = &Event> {
        self.events.iter().filter(move |e| e.index == index)
    }

    fn check_stage(&self, stage: usize) -> Result<()> {
        if stage > self.horizon {
            return Err(Error::Range {
                what: "stage",
                got: stage,
                bound: self.horizon,
            });
        }
        Ok(())
    }

    /// `W_{e,s}`: the items of index `e` enumerated by stage `s`.
    pub fn stage_set(&self, index: usize, stage: usize) -> Result<BTreeSet<Item>> {
        self.check_stage(stage)?;
        Ok(self
            .events_for(index)
            .take_while(|e| e.stage <= stage)
            .map(|e| e.item.clone())
            .collect())
    }

    /// `W_{e,s}` for a family of string sets.
    pub fn stage_strings(&self, index: usize, stage: usize) -> Result<StringSet> {
        self.check_stage(stage)?;
        self.events_for(index)
            .take_while(|e| e.stage <= stage)
            .map(|e| match &e.item {
                Item::Str(s) => Ok(s.clone()),
                Item::Dyadic(q) => Err(Error::Type(format!("index {index} enumerates dyadic {q}, expected a string"))),
            })
            .collect()
    }
}

impl FromStr for EnumerationScript {
    type Err = Error;

    /// `stage<TAB>index<TAB>kind<TAB>payload` per line, `kind ∈ {str, dyadic}`;
    /// `#` starts a comment line.
    fn from_str(text: &str) -> Result<Self> {
        let mut events = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let n = i + 1;
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 4 {
                return Err(Error::parse(n, format!("expected 4 tab-separated fields, found {}", fields.len())));
            }
            let stage = fields[0].trim().parse().map_err(|_| Error::parse(n, format!("bad stage {:?}", fields[0])))?;
            let index = fields[1].trim().parse().map_err(|_| Error::parse(n, format!("bad index {:?}", fields[1])))?;
            let item = match fields[2].trim() {
                "str" => Item::Str(fields[3].parse().map_err(|e: Error| relocate(e, n))?),
                "dyadic" => Item::Dyadic(fields[3].parse().map_err(|e: Error| relocate(e, n))?),
                other => return Err(Error::parse(n, format!("unknown kind {other:?}"))),
            };
            events.push(Event { stage, index, item });
        }
        Ok(EnumerationScript::from_events(events))
    }
}

/// Attach a line number to a field-level parse error.
pub(crate) fn relocate(e: Error, line: usize) -> Error {
    match e {
        Error::Parse { message, .. } => Error::Parse { line, message },
        other => other,
    }
}

impl fmt::Display for EnumerationScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.events {
            writeln!(f, "{}\t{}\t{}", e.stage, e.index, e.item)?;
        }
        Ok(())
    }
}

/// A nondecreasing stage approximation of a real, total on `[0, horizon]`.
///
/// Stages before `first_defined` carry the value 0 with an "empty" flag: no
/// evidence about the real has appeared yet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeftCEApprox {
    values: Vec<Dyadic>,
    first_defined: Option<usize>,
}

impl LeftCEApprox {
    /// Defined from stage 0; `values[s]` is the stage-`s` value.
    pub fn from_values(values: Vec<Dyadic>) -> Result<Self> {
        let first = if values.is_empty() { None } else { Some(0) };
        Self::with_first_defined(values, first)
    }

    pub fn with_first_defined(values: Vec<Dyadic>, first_defined: Option<usize>) -> Result<Self> {
        if let Some(s) = values.windows(2).position(|w| w[1] < w[0]) {
            return Err(Error::NonMonotone { stage: s + 1 });
        }
        if let Some(first) = first_defined {
            if first >= values.len() {
                return Err(Error::Range {
                    what: "first defined stage",
                    got: first,
                    bound: values.len().saturating_sub(1),
                });
            }
            if values[..first].iter().any(|v| !v.is_zero()) {
                return Err(Error::Domain("nonzero value before the first defined stage".into()));
            }
        }
        Ok(LeftCEApprox { values, first_defined })
    }

    /// A real constant from stage 0 up to `horizon`.
    pub fn constant(q: Dyadic, horizon: usize) -> Self {
        LeftCEApprox {
            values: vec![q; horizon + 1],
            first_defined: Some(0),
        }
    }

    /// Last stage covered; `None` for an approximation with no stages at all.
    pub fn horizon(&self) -> Option<usize> {
        self.values.len().checked_sub(1)
    }

    pub fn first_defined(&self) -> Option<usize> {
        self.first_defined
    }

    pub fn get(&self, stage: usize) -> Option<&Dyadic> {
        self.values.get(stage)
    }

    /// The stage-`s` value; panics past the horizon.
    pub fn value(&self, stage: usize) -> &Dyadic {
        &self.values[stage]
    }

    pub fn is_empty_at(&self, stage: usize) -> bool {
        self.first_defined.is_none_or(|f| stage < f)
    }

    pub fn values(&self) -> &[Dyadic] {
        &self.values
    }

    /// `r_s[n]`: the associated string of the stage-`s` value, cut or
    /// zero-padded to length `n`.
    pub fn segment(&self, stage: usize, n: usize) -> BitString {
        self.values[stage].binary_prefix(n)
    }

    pub fn final_value(&self) -> Option<&Dyadic> {
        self.values.last()
    }

    pub(crate) fn require_horizon(&self, horizon: usize, construction: &'static str) -> Result<()> {
        match self.horizon() {
            Some(h) if h >= horizon => Ok(()),
            got => Err(Error::Precondition {
                construction,
                message: format!("approximation covers stages up to {got:?}, horizon is {horizon}"),
            }),
        }
    }
}

/// `r_{e,s} = max W_{e,s}` for every stage up to the script's horizon.
pub fn real_from_ce_set(script: &EnumerationScript, index: usize) -> Result<LeftCEApprox> {
    let mut values = Vec::with_capacity(script.horizon() + 1);
    let mut events = script.events_for(index).peekable();
    let mut current = Dyadic::zero();
    let mut first = None;
    for stage in 0..=script.horizon() {
        while let Some(e) = events.next_if(|e| e.stage <= stage) {
            let q = match &e.item {
                Item::Dyadic(q) => q,
                Item::Str(s) => {
                    return Err(Error::Type(format!("index {index} enumerates string {s}, expected a dyadic")));
                }
            };
            first.get_or_insert(stage);
            if *q > current {
                current = q.clone();
            }
        }
        values.push(current.clone());
    }
    LeftCEApprox::with_first_defined(values, first)
}

/// `{τ : |τ| ≤ len, τ⌢0^ω <_L x}`.
pub fn lower_cut(x: &Dyadic, len: usize) -> StringSet {
    let below = |t: &BitString| match string_of_rational(x) {
        Ok(sx) => t.cmp_padded(&sx).is_lt(),
        // x = 1 = 0.111…, above every zero-padded finite string.
        Err(_) => true,
    };
    BitString::all_up_to(len).filter(|t| below(t)).collect()
}

/// `σ` cut or zero-padded to length exactly `n`.
pub fn truncate_pad(s: &BitString, n: usize) -> BitString {
    if n <= s.len() {
        s.prefix(n)
    } else {
        s.concat(&BitString::zeros(n - s.len()))
    }
}

/// The longest prefix of `σ` with an even number of ones.
pub fn parity_projection(s: &BitString) -> BitString {
    let mut ones = 0;
    let mut best = 0;
    for (i, b) in s.bits().enumerate() {
        ones += usize::from(b);
        if ones % 2 == 0 {
            best = i + 1;
        }
    }
    s.prefix(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::{bits, dy, rational_of_string, string_of_rational};

    fn two_event_script() -> EnumerationScript {
        EnumerationScript::from_events(vec![Event::dyadic(1, 0, dy(1, 2)), Event::dyadic(3, 0, dy(1, 1))])
    }

    #[test]
    fn replay_stage_sets() {
        let empty = EnumerationScript::default();
        assert!(empty.stage_set(3, 0).unwrap().is_empty());
        let s = two_event_script();
        let at2: Vec<Item> = s.stage_set(0, 2).unwrap().into_iter().collect();
        assert_eq!(at2, vec![Item::Dyadic(dy(1, 2))]);
        assert_eq!(s.stage_set(0, 3).unwrap().len(), 2);
        assert!(matches!(s.stage_set(0, 4), Err(Error::Range { .. })));
    }

    #[test]
    fn running_maximum() {
        let r = real_from_ce_set(&two_event_script(), 0).unwrap();
        assert!(r.is_empty_at(0));
        assert_eq!(r.value(0), &Dyadic::zero());
        assert_eq!(r.value(1), &dy(1, 2));
        assert_eq!(r.value(2), &dy(1, 2));
        assert_eq!(r.value(3), &dy(1, 1));

        let later_smaller =
            EnumerationScript::from_events(vec![Event::dyadic(1, 0, dy(1, 1)), Event::dyadic(2, 0, dy(1, 2))]);
        let r = real_from_ce_set(&later_smaller, 0).unwrap();
        assert_eq!(r.values(), &[Dyadic::zero(), dy(1, 1), dy(1, 1)]);

        let r = real_from_ce_set(&two_event_script(), 5).unwrap();
        assert!(r.values().iter().all(Dyadic::is_zero));
        assert!(r.is_empty_at(3));
    }

    #[test]
    fn strings_are_not_reals() {
        let s = EnumerationScript::from_events(vec![Event::string(0, 0, bits("01"))]);
        assert!(matches!(real_from_ce_set(&s, 0), Err(Error::Type(_))));
        assert!(matches!(two_event_script().stage_strings(0, 3), Err(Error::Type(_))));
    }

    #[test]
    fn monotonicity_is_enforced() {
        assert_eq!(
            LeftCEApprox::from_values(vec![dy(1, 1), dy(1, 2)]),
            Err(Error::NonMonotone { stage: 1 })
        );
    }

    #[test]
    fn lower_cuts() {
        assert!(lower_cut(&Dyadic::zero(), 4).is_empty());
        let expect: StringSet = ["", "0", "00", "01"].iter().map(|w| bits(w)).collect();
        assert_eq!(lower_cut(&dy(1, 1), 2), expect);
        let expect: StringSet = ["", "0", "1"].iter().map(|w| bits(w)).collect();
        assert_eq!(lower_cut(&dy(3, 2), 1), expect);
        assert_eq!(lower_cut(&Dyadic::one(), 2).len(), 7);
    }

    #[test]
    fn truncation_and_padding() {
        assert_eq!(truncate_pad(&bits("101"), 5), bits("10100"));
        assert_eq!(truncate_pad(&bits("10111"), 3), bits("101"));
        assert_eq!(truncate_pad(&bits(""), 2), bits("00"));
    }

    #[test]
    fn parity() {
        assert_eq!(parity_projection(&bits("1100")), bits("1100"));
        assert_eq!(parity_projection(&bits("1011")), bits("101"));
        assert_eq!(parity_projection(&bits("1")), bits(""));
    }

    #[test]
    fn parity_projection_can_drop_between_stages() {
        // 3/8 = 011 projects to itself, 1/2 = 1 projects to ε: the projected
        // approximation is not monotone even though the real is.
        let before = parity_projection(&string_of_rational(&dy(3, 3)).unwrap());
        let after = parity_projection(&string_of_rational(&dy(1, 1)).unwrap());
        assert_eq!(before, bits("011"));
        assert_eq!(after, bits(""));
        assert!(crate::dyadic::lex_compare_padded(&before, &after).is_gt());
    }

    #[test]
    fn script_text_round_trip() {
        let text = "# comment\n3\t0\tdyadic\t1/2^1\n1\t0\tdyadic\t1/4\n2\t1\tstr\t0110\n2\t1\tstr\t-\n";
        let s: EnumerationScript = text.parse().unwrap();
        assert_eq!(s.horizon(), 3);
        assert_eq!(s.events()[0].stage, 1);
        // Same-stage events keep file order.
        assert_eq!(s.events()[1].item, Item::Str(bits("0110")));
        assert_eq!(s.events()[2].item, Item::Str(BitString::new()));
        let again: EnumerationScript = s.to_string().parse().unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = "0\t0\tstr\t01\n1\t0\tstr\n".parse::<EnumerationScript>().unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = "0\t0\tstr\t0x1\n".parse::<EnumerationScript>().unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = "0\t0\tdyadic\t1/3\n".parse::<EnumerationScript>().unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn cut_matches_rational_comparison() {
        for num in 0..=16u64 {
            let x = dy(num, 4);
            let cut = lower_cut(&x, 6);
            for t in BitString::all_up_to(6) {
                assert_eq!(cut.contains(&t), rational_of_string(&t) < x, "x = {x}, τ = {t}");
            }
        }
    }
}

#[cfg(test)]
mod properties {
    use proptest::prelude::*;

    use super::*;
    use crate::dyadic::{lex_compare_padded, string_of_rational};

    fn script() -> impl Strategy<Value = EnumerationScript> {
        prop::collection::vec((0usize..20, 0usize..3, 0u64..=64), 0..25).prop_map(|raw| {
            EnumerationScript::from_events(
                raw.into_iter()
                    .map(|(stage, index, num)| Event::dyadic(stage, index, Dyadic::new(num, 6).unwrap()))
                    .collect(),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn running_max_is_nondecreasing(s in script(), e in 0usize..3) {
            let r = real_from_ce_set(&s, e).unwrap();
            prop_assert!(r.values().windows(2).all(|w| w[0] <= w[1]));
        }

        #[test]
        fn parity_projection_stays_below_the_real(s in script(), e in 0usize..3) {
            let r = real_from_ce_set(&s, e).unwrap();
            for q in r.values().iter().filter(|q| !q.is_one()) {
                let sigma = string_of_rational(q).unwrap();
                let projected = parity_projection(&sigma);
                prop_assert!(projected.is_prefix_of(&sigma));
                prop_assert!(lex_compare_padded(&projected, &sigma).is_le());
            }
        }

        #[test]
        fn parity_fixpoint(v in prop::collection::vec(any::<bool>(), 0..20)) {
            let s = BitString::from_bits(v);
            if s.count_ones() % 2 == 0 {
                prop_assert_eq!(parity_projection(&s), s);
            } else {
                prop_assert_eq!(parity_projection(&s).count_ones() % 2, 0);
            }
        }
    }
}
