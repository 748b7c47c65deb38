use super::{least_failure, require_strict_kraft, StageTrace, StageValue, State, Trigger};
use crate::complexity::PrefixMachine;
use crate::dyadic::BitString;
use crate::error::Result;
use crate::streams::LeftCEApprox;

/// Follows `r` until a segment `r_t[n]` fails constant `c`, then replaces the
/// tail after that segment by `Ω`; returns to `r` once the segment recovers.
///
/// At each stage `t` the lengths `n ≤ t` are checked and the least failing
/// one is taken. Recovery is tested from the stage after the switch, and a
/// new failure from the stage after a recovery.
///
/// ```
/// use numberings::complexity::{PrefixMachine, Program};
/// use numberings::constructions::{splice_random, State};
/// use numberings::dyadic::{bits, dy};
/// use numberings::streams::LeftCEApprox;
///
/// // Code 0 prints 11 at stage 2: K_2(11) = 1 < 2 − 0.
/// let m = PrefixMachine::new(vec![Program::new(bits("0"), bits("11"), 2)]).unwrap();
/// let r = LeftCEApprox::constant(dy(3, 2), 4);
/// let trace = splice_random(&r, &m, 0, 4).unwrap();
/// assert_eq!(trace.record(1).state, State::Tracking);
/// assert_eq!(trace.record(2).state, State::Spliced);
/// assert_eq!(trace.record(2).value.to_string(), "11*Ω@2");
/// ```
pub fn splice_random(r: &LeftCEApprox, machine: &PrefixMachine, c: usize, horizon: usize) -> Result<StageTrace> {
    r.require_horizon(horizon, "splice_random")?;
    require_strict_kraft(machine, "splice_random")?;
    let mut trace = StageTrace::new();
    // Length and segment of the active splice.
    let mut spliced: Option<(usize, BitString)> = None;
    for t in 0..=horizon {
        if r.is_empty_at(t) {
            trace.push(State::Waiting, StageValue::Real(r.value(t).clone()), None);
            continue;
        }
        let (state, value, trigger) = match spliced.take() {
            Some((n, segment)) => {
                if machine.satisfies_constant(&r.segment(t, n), c, t) {
                    (State::Tracking, StageValue::Real(r.value(t).clone()), Some(Trigger::Recovery { n }))
                } else {
                    let value = StageValue::omega_tail(segment.clone(), machine, t);
                    spliced = Some((n, segment));
                    (State::Spliced, value, None)
                }
            }
            None => match least_failure(machine, r.value(t), c, t) {
                Some((n, segment)) => {
                    let value = StageValue::omega_tail(segment.clone(), machine, t);
                    spliced = Some((n, segment.clone()));
                    (State::Spliced, value, Some(Trigger::Failure { n, segment }))
                }
                None => (State::Tracking, StageValue::Real(r.value(t).clone()), None),
            },
        };
        trace.push(state, value, trigger);
    }
    Ok(trace)
}
