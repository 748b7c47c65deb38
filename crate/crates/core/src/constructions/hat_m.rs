use std::cmp::Ordering;

use super::{require_strict_kraft, StageTrace, StageValue, State, Trigger};
use crate::complexity::PrefixMachine;
use crate::dyadic::BitString;
use crate::error::Result;
use crate::streams::LeftCEApprox;

/// Which side of the boundary `1^n⌢Ω` the output is kept on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Direction {
    #[default]
    Below,
    Above,
}

impl Direction {
    fn wanted(self) -> Ordering {
        match self {
            Direction::Below => Ordering::Less,
            Direction::Above => Ordering::Greater,
        }
    }

    /// The extreme `k`-bit prefix on this side.
    fn extreme(self, k: usize) -> BitString {
        match self {
            Direction::Below => BitString::zeros(k),
            Direction::Above => BitString::ones(k),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HatConfig {
    /// Length of the compared prefixes.
    pub k: usize,
    /// The boundary is `1^ones⌢Ω`; 0 compares against `Ω` itself.
    pub ones: usize,
    pub direction: Direction,
}

impl HatConfig {
    pub fn below(k: usize) -> Self {
        HatConfig {
            k,
            ones: 0,
            direction: Direction::Below,
        }
    }
}

/// Keeps `m` on one side of the boundary `b_s = 1^n⌢Ω_s`, compared on
/// `k`-bit prefixes.
///
/// While `b_s↾k` is the extreme prefix (`0^k` below, `1^k` above) the value
/// is `0⌢Ω_s` (resp. `1⌢Ω_s`). Afterwards the value is `m_s` whenever
/// `m_s↾k` lies strictly on the wanted side of `b_s↾k`; otherwise it is the
/// previous output's `k`-bit prefix followed by `Ω_s`, held until `m` is back
/// on the wanted side.
///
/// ```
/// use numberings::complexity::{PrefixMachine, Program};
/// use numberings::constructions::{hat_m_construction, HatConfig, State};
/// use numberings::dyadic::{bits, dy};
/// use numberings::streams::LeftCEApprox;
///
/// // Ω jumps to 1/2 at stage 1.
/// let machine = PrefixMachine::new(vec![Program::new(bits("1"), bits(""), 1)]).unwrap();
/// let m = LeftCEApprox::constant(dy(1, 2), 3);
/// let trace = hat_m_construction(&m, &machine, &HatConfig::below(1), 3).unwrap();
/// assert_eq!(trace.record(0).state, State::Initial);
/// assert_eq!(trace.record(1).state, State::Tracking);
/// assert_eq!(trace.record(3).value.to_dyadic(), dy(1, 2));
/// ```
pub fn hat_m_construction(
    m: &LeftCEApprox,
    machine: &PrefixMachine,
    config: &HatConfig,
    horizon: usize,
) -> Result<StageTrace> {
    m.require_horizon(horizon, "hat_m_construction")?;
    require_strict_kraft(machine, "hat_m_construction")?;
    let k = config.k;
    let extreme = config.direction.extreme(k);
    let boundary = BitString::ones(config.ones);
    let mut held = extreme.clone();
    let mut trace = StageTrace::new();
    let mut previous: Option<State> = None;
    for s in 0..=horizon {
        let reference = StageValue::omega_tail(boundary.clone(), machine, s).prefix(k);
        let (state, value) = if reference == extreme {
            held = extreme.clone();
            let first = BitString::from_bits([config.direction == Direction::Above]);
            (State::Initial, StageValue::omega_tail(first, machine, s))
        } else {
            let current = m.segment(s, k);
            if current.cmp(&reference) == config.direction.wanted() {
                held = current;
                (State::Tracking, StageValue::Real(m.value(s).clone()))
            } else {
                (State::Undesirable, StageValue::omega_tail(held.clone(), machine, s))
            }
        };
        let trigger = match (previous, state) {
            (Some(p), State::Undesirable) if p != State::Undesirable => Some(Trigger::Violation),
            (Some(State::Undesirable), State::Tracking) => Some(Trigger::Desirable),
            _ => None,
        };
        trace.push(state, value, trigger);
        previous = Some(state);
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexity::Program;
    use crate::dyadic::{bits, dy};

    fn machine(programs: &[(&str, usize)]) -> PrefixMachine {
        PrefixMachine::new(programs.iter().map(|&(c, h)| Program::new(bits(c), bits(""), h)).collect()).unwrap()
    }

    #[test]
    fn boundary_zero_keeps_the_initial_value() {
        // Ω stays below 1/4, so Ω↾2 = 00 throughout.
        let om = machine(&[("000", 1), ("0011", 4)]);
        let m = LeftCEApprox::constant(dy(3, 2), 5);
        let trace = hat_m_construction(&m, &om, &HatConfig::below(2), 5).unwrap();
        for (s, rec) in trace.records().iter().enumerate() {
            assert_eq!(rec.state, State::Initial);
            assert_eq!(rec.value, StageValue::omega_tail(bits("0"), &om, s));
        }
        assert!(trace.is_monotone());
    }

    #[test]
    fn no_violation_tracks_m() {
        let om = machine(&[("1", 0), ("01", 2)]);
        let m = LeftCEApprox::from_values(vec![dy(0, 0), dy(1, 2), dy(1, 2), dy(5, 3)]).unwrap();
        let trace = hat_m_construction(&m, &om, &HatConfig::below(2), 3).unwrap();
        assert!(trace.records().iter().all(|r| r.state == State::Tracking));
        assert_eq!(trace.last().unwrap().value, StageValue::Real(dy(5, 3)));
    }

    #[test]
    fn violation_holds_the_previous_prefix() {
        // Ω↾2 = 10 throughout; m climbs to 10 at stage 2 and stays.
        let om = machine(&[("1", 0)]);
        let m = LeftCEApprox::from_values(vec![dy(1, 2), dy(1, 2), dy(1, 1), dy(1, 1)]).unwrap();
        let trace = hat_m_construction(&m, &om, &HatConfig::below(2), 3).unwrap();
        assert_eq!(trace.record(1).state, State::Tracking);
        assert_eq!(trace.record(2).state, State::Undesirable);
        assert_eq!(trace.record(2).trigger, Some(Trigger::Violation));
        assert_eq!(trace.last().unwrap().value, StageValue::omega_tail(bits("01"), &om, 3));
        assert!(trace.is_monotone());
    }

    #[test]
    fn holding_a_prefix_can_descend() {
        // m = 0111 is tracked, then climbs to 1: the held 01⌢Ω is 011.
        let om = machine(&[("1", 0)]);
        let m = LeftCEApprox::from_values(vec![dy(7, 4), dy(1, 1)]).unwrap();
        let trace = hat_m_construction(&m, &om, &HatConfig::below(2), 1).unwrap();
        assert_eq!(trace.record(1).state, State::Undesirable);
        assert_eq!(trace.record(1).value.to_dyadic(), dy(3, 3));
        assert_eq!(trace.first_descent(), Some(1));
    }

    #[test]
    fn returns_to_tracking_when_omega_moves_up() {
        let om = machine(&[("1", 0), ("01", 2)]);
        // Ω↾2: 10, 10, 11, 11. m sits at 10.
        let m = LeftCEApprox::constant(dy(1, 1), 3);
        let trace = hat_m_construction(&m, &om, &HatConfig::below(2), 3).unwrap();
        assert_eq!(trace.record(0).state, State::Undesirable);
        assert_eq!(trace.record(0).value, StageValue::omega_tail(bits("00"), &om, 0));
        assert_eq!(trace.record(2).state, State::Tracking);
        assert_eq!(trace.record(2).trigger, Some(Trigger::Desirable));
        assert!(trace.is_monotone());
    }

    #[test]
    fn above_mirrors_below() {
        let om = machine(&[("1", 0)]);
        let config = HatConfig {
            k: 2,
            ones: 0,
            direction: Direction::Above,
        };
        // Ω↾2 = 10, m↾2 = 11 is above it.
        let trace = hat_m_construction(&LeftCEApprox::constant(dy(3, 2), 1), &om, &config, 1).unwrap();
        assert!(trace.records().iter().all(|r| r.state == State::Tracking));
        // m↾2 = 01 is not above: held at 11⌢Ω.
        let trace = hat_m_construction(&LeftCEApprox::constant(dy(1, 2), 1), &om, &config, 1).unwrap();
        assert_eq!(trace.record(0).value, StageValue::omega_tail(bits("11"), &om, 0));
        // With boundary 1⌢Ω, b↾1 = 1^1 is the extreme: initial 1⌢Ω.
        let config = HatConfig { k: 1, ones: 1, direction: Direction::Above };
        let trace = hat_m_construction(&LeftCEApprox::constant(dy(1, 2), 1), &om, &config, 1).unwrap();
        assert_eq!(trace.record(0).state, State::Initial);
        assert_eq!(trace.record(0).value, StageValue::omega_tail(bits("1"), &om, 0));
    }

    #[test]
    fn shifted_boundary() {
        // Boundary 1⌢Ω with Ω = 1/2: 11 followed by zeros.
        let om = machine(&[("1", 0)]);
        let config = HatConfig { k: 2, ones: 1, direction: Direction::Below };
        let trace = hat_m_construction(&LeftCEApprox::constant(dy(1, 1), 0), &om, &config, 0).unwrap();
        assert_eq!(trace.record(0).state, State::Tracking);
        let trace = hat_m_construction(&LeftCEApprox::constant(dy(3, 2), 0), &om, &config, 0).unwrap();
        assert_eq!(trace.record(0).state, State::Undesirable);
    }
}
