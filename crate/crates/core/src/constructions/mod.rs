//! Stage-by-stage constructions on left-c.e. reals and c.e. families.
//!
//! Each construction replays a finite horizon and reports a [`StageTrace`]:
//! one record per stage with the state label, the current value and what
//! caused the state to change.

mod beta;
mod hat_m;
mod merge;
mod odd_ones;
pub mod recipes;
mod regret;
pub mod scenarios;
mod splice;

use std::fmt;

pub use beta::beta_max;
pub use hat_m::{hat_m_construction, Direction, HatConfig};
pub use merge::{
    friedberg_merge, ExtensionPicker, InjectiveFamily, MergeOutcome, OddSizeFamily, OddSizePicker, Origin,
    ScanPicker, TableFamily,
};
pub use odd_ones::odd_ones_real_enumeration;
pub use regret::{regret_construction, RegretOutcome, SlotBinding};
pub use splice::splice_random;

use crate::complexity::PrefixMachine;
use crate::dyadic::{rational_of_string, BitString, Dyadic};
use crate::error::{Error, Result};

/// A trace value: a dyadic, or a finite prefix followed by the current
/// approximation of `Ω`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StageValue {
    Real(Dyadic),
    OmegaTail {
        prefix: BitString,
        omega_stage: usize,
        omega: Dyadic,
    },
}

impl StageValue {
    pub fn omega_tail(prefix: BitString, machine: &PrefixMachine, stage: usize) -> Self {
        StageValue::OmegaTail {
            omega: machine.omega_approx(stage),
            prefix,
            omega_stage: stage,
        }
    }

    /// `σ⌢Ω_s` read as the dyadic `0.σ + 2^{-|σ|}·Ω_s`.
    pub fn to_dyadic(&self) -> Dyadic {
        match self {
            StageValue::Real(q) => q.clone(),
            StageValue::OmegaTail { prefix, omega, .. } => rational_of_string(prefix)
                .checked_add(&omega.shr(prefix.len() as u32))
                .expect("a cone has measure at most 1"),
        }
    }

    /// First `k` bits of the value; 1 reads as `1^k`.
    pub fn prefix(&self, k: usize) -> BitString {
        self.to_dyadic().binary_prefix(k)
    }

    pub fn tail_prefix(&self) -> Option<&BitString> {
        match self {
            StageValue::Real(_) => None,
            StageValue::OmegaTail { prefix, .. } => Some(prefix),
        }
    }
}

impl fmt::Display for StageValue {
    /// Dyadics as `a/2^b`; tails as `σ*Ω@s`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StageValue::Real(q) => write!(f, "{q}"),
            StageValue::OmegaTail {
                prefix, omega_stage, ..
            } => write!(f, "{prefix}*Ω@{omega_stage}", prefix = if prefix.is_empty() { String::new() } else { prefix.to_string() }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum State {
    /// The tracked real has no value yet.
    Waiting,
    Tracking,
    Spliced,
    Initial,
    Undesirable,
    Unbound,
    Bound,
    Regretted,
    Max,
}

impl State {
    pub fn label(self) -> &'static str {
        match self {
            State::Waiting => "waiting",
            State::Tracking => "tracking",
            State::Spliced => "spliced",
            State::Initial => "initial",
            State::Undesirable => "undesirable",
            State::Unbound => "unbound",
            State::Bound => "bound",
            State::Regretted => "regretted",
            State::Max => "max",
        }
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Why a record's state differs from the previous one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Trigger {
    /// `K_t(σ) < n − c` for the length-`n` segment `σ`.
    Failure { n: usize, segment: BitString },
    Recovery { n: usize },
    Violation,
    Desirable,
    Bind { index: usize, n: usize },
    Regret { n: usize, padding: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageRecord {
    pub stage: usize,
    pub state: State,
    pub value: StageValue,
    pub trigger: Option<Trigger>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StageTrace {
    records: Vec<StageRecord>,
}

impl StageTrace {
    pub fn new() -> Self {
        Self::default()
    }

    pub(crate) fn push(&mut self, state: State, value: StageValue, trigger: Option<Trigger>) {
        let stage = self.records.len();
        self.records.push(StageRecord {
            stage,
            state,
            value,
            trigger,
        });
    }

    pub fn records(&self) -> &[StageRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn record(&self, stage: usize) -> &StageRecord {
        &self.records[stage]
    }

    pub fn last(&self) -> Option<&StageRecord> {
        self.records.last()
    }

    pub fn values(&self) -> Vec<Dyadic> {
        self.records.iter().map(|r| r.value.to_dyadic()).collect()
    }

    /// First stage whose value lies strictly below the previous one.
    pub fn first_descent(&self) -> Option<usize> {
        self.values().windows(2).position(|w| w[1] < w[0]).map(|i| i + 1)
    }

    pub fn is_monotone(&self) -> bool {
        self.first_descent().is_none()
    }

    /// Tab-separated `stage state value` lines.
    pub fn to_tsv(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for StageTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.records {
            writeln!(f, "{}\t{}\t{}", r.stage, r.state, r.value)?;
        }
        Ok(())
    }
}

pub(crate) fn require_strict_kraft(machine: &PrefixMachine, construction: &'static str) -> Result<()> {
    if machine.is_strict_kraft() {
        Ok(())
    } else {
        Err(Error::Precondition {
            construction,
            message: "Ω is used as a tail but the machine's Kraft sum is exactly 1".into(),
        })
    }
}

/// Least `n ≤ t` whose length-`n` segment of `value` fails constant `c` at
/// stage `t`.
pub(crate) fn least_failure(machine: &PrefixMachine, value: &Dyadic, c: usize, t: usize) -> Option<(usize, BitString)> {
    (0..=t).find_map(|n| {
        let segment = value.binary_prefix(n);
        (!machine.satisfies_constant(&segment, c, t)).then_some((n, segment))
    })
}
