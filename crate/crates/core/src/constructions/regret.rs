use super::{least_failure, require_strict_kraft, StageTrace, StageValue, State, Trigger};
use crate::complexity::{compute_padding, PrefixMachine};
use crate::dyadic::{BitString, Dyadic};
use crate::error::{Error, Result};
use crate::streams::{real_from_ce_set, EnumerationScript, LeftCEApprox};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlotBinding {
    pub slot: usize,
    /// Index of the bound real in the family.
    pub index: usize,
    /// Length of the failing segment.
    pub n: usize,
    pub bound_at: usize,
    /// Stage of the recovery and the padding used from then on.
    pub regret: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegretOutcome {
    pub bindings: Vec<SlotBinding>,
    /// One trace per bound slot, in slot order.
    pub traces: Vec<StageTrace>,
}

impl RegretOutcome {
    /// Each slot's trace after a `# slot … index … n … bound …` header line.
    pub fn to_tsv(&self) -> String {
        if self.bindings.is_empty() {
            return "# no bindings\n".into();
        }
        let mut out = String::new();
        for (b, trace) in self.bindings.iter().zip(&self.traces) {
            out.push_str(&format!("# slot {} index {} n {} bound {}\n", b.slot, b.index, b.n, b.bound_at));
            out.push_str(&trace.to_tsv());
        }
        out
    }
}

/// Assigns an output slot to every real of the family that is seen failing
/// constant `c`, and pads the slot away from the real if the failure is later
/// withdrawn.
///
/// At stage `t` each unassigned index `e ≤ t` whose value is defined is
/// checked for the least `n ≤ t` with `K_t(m_{e,t}[n]) < n − c`; a hit takes
/// the next free slot, which then follows `m_e`. If at a later stage `t₁` the
/// segment `m_{e,t₁}[n]` satisfies `c` again, the slot's value becomes
/// `m_{e,s}[n]⌢0^p⌢Ω_s` for every `s ≥ t₁`, with
/// `p = compute_padding(n, c + c̃)`. Each index is assigned at most once and
/// slots are never released.
///
/// `capacity` bounds the number of slots; the family size is used when it is
/// `None`.
pub fn regret_construction(
    family: &EnumerationScript,
    machine: &PrefixMachine,
    c: usize,
    horizon: usize,
    capacity: Option<usize>,
) -> Result<RegretOutcome> {
    require_strict_kraft(machine, "regret_construction")?;
    if horizon > family.horizon() {
        return Err(Error::Precondition {
            construction: "regret_construction",
            message: format!("family script ends at stage {}, horizon is {horizon}", family.horizon()),
        });
    }
    let reals: Vec<LeftCEApprox> = (0..family.index_count())
        .map(|e| real_from_ce_set(family, e))
        .collect::<Result<_>>()?;
    let capacity = capacity.unwrap_or(reals.len());
    let mut assigned = vec![false; reals.len()];
    let mut bindings: Vec<SlotBinding> = Vec::new();
    let mut traces: Vec<StageTrace> = Vec::new();
    for t in 0..=horizon {
        for (e, real) in reals.iter().enumerate().take(t + 1) {
            if assigned[e] || real.is_empty_at(t) {
                continue;
            }
            let Some((n, _)) = least_failure(machine, real.value(t), c, t) else {
                continue;
            };
            if bindings.len() == capacity {
                return Err(Error::Capacity {
                    construction: "regret_construction",
                    message: format!("all {capacity} slots are bound when index {e} fails at stage {t}"),
                });
            }
            assigned[e] = true;
            let mut trace = StageTrace::new();
            for _ in 0..t {
                trace.push(State::Unbound, StageValue::Real(Dyadic::zero()), None);
            }
            bindings.push(SlotBinding {
                slot: bindings.len(),
                index: e,
                n,
                bound_at: t,
                regret: None,
            });
            traces.push(trace);
        }
        for (binding, trace) in bindings.iter_mut().zip(traces.iter_mut()) {
            let real = &reals[binding.index];
            let segment = real.segment(t, binding.n);
            if binding.regret.is_none() && t > binding.bound_at && machine.satisfies_constant(&segment, c, t) {
                let padding = compute_padding(binding.n, c + machine.c_tilde());
                binding.regret = Some((t, padding));
                let value = StageValue::omega_tail(padded(&segment, padding), machine, t);
                trace.push(State::Regretted, value, Some(Trigger::Regret { n: binding.n, padding }));
            } else if let Some((_, padding)) = binding.regret {
                trace.push(State::Regretted, StageValue::omega_tail(padded(&segment, padding), machine, t), None);
            } else {
                let trigger = (t == binding.bound_at).then_some(Trigger::Bind {
                    index: binding.index,
                    n: binding.n,
                });
                trace.push(State::Bound, StageValue::Real(real.value(t).clone()), trigger);
            }
        }
    }
    Ok(RegretOutcome { bindings, traces })
}

fn padded(segment: &BitString, padding: usize) -> BitString {
    segment.concat(&BitString::zeros(padding))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexity::Program;
    use crate::dyadic::{bits, dy};
    use crate::oracle;
    use crate::streams::Event;

    fn machine(programs: &[(&str, &str, usize)]) -> PrefixMachine {
        PrefixMachine::new(programs.iter().map(|&(c, o, h)| Program::new(bits(c), bits(o), h)).collect()).unwrap()
    }

    fn family(events: &[(usize, usize, Dyadic)], horizon: usize) -> EnumerationScript {
        EnumerationScript::new(
            events.iter().map(|(s, e, q)| Event::dyadic(*s, *e, q.clone())).collect(),
            horizon,
        )
        .unwrap()
    }

    #[test]
    fn no_failures_bind_nothing() {
        let f = family(&[(0, 0, dy(1, 1)), (1, 1, dy(3, 2))], 4);
        let out = regret_construction(&f, &PrefixMachine::silent(), 0, 4, None).unwrap();
        assert!(out.bindings.is_empty());
    }

    #[test]
    fn permanent_failure_binds_slot_zero() {
        let m = machine(&[("0", "11", 2)]);
        let f = family(&[(0, 0, dy(3, 2))], 5);
        let out = regret_construction(&f, &m, 0, 5, None).unwrap();
        assert_eq!(
            out.bindings,
            vec![SlotBinding { slot: 0, index: 0, n: 2, bound_at: 2, regret: None }]
        );
        let trace = &out.traces[0];
        assert_eq!(trace.len(), 6);
        assert_eq!(trace.record(1).state, State::Unbound);
        for s in 2..=5 {
            assert_eq!(trace.record(s).state, State::Bound);
            assert_eq!(trace.record(s).value, StageValue::Real(dy(3, 2)));
        }
    }

    #[test]
    fn recovery_pads_the_segment() {
        // 10 is compressible from stage 2; the real leaves it for 11 at stage 3.
        let m = machine(&[("0", "10", 2)]).with_constants(0, 3);
        let f = family(&[(0, 0, dy(5, 3)), (3, 0, dy(3, 2))], 6);
        let out = regret_construction(&f, &m, 0, 6, None).unwrap();
        let b = &out.bindings[0];
        let p = oracle::padding_scan(2 + 3);
        assert_eq!((b.n, b.bound_at, b.regret), (2, 2, Some((3, p))));
        assert_eq!(p, compute_padding(2, 3));
        let trace = &out.traces[0];
        assert_eq!(trace.record(2).state, State::Bound);
        assert_eq!(trace.record(2).value, StageValue::Real(dy(5, 3)));
        for s in 3..=6 {
            assert_eq!(trace.record(s).state, State::Regretted);
            let prefix = trace.record(s).value.tail_prefix().unwrap().clone();
            assert_eq!(prefix, bits("11").concat(&BitString::zeros(p)));
        }
    }

    #[test]
    fn duplicates_each_take_a_slot() {
        let m = machine(&[("0", "11", 1)]);
        let f = family(&[(0, 0, dy(3, 2)), (0, 1, dy(3, 2)), (0, 2, dy(1, 2))], 3);
        let out = regret_construction(&f, &m, 0, 3, None).unwrap();
        let bound: Vec<(usize, usize, usize)> = out.bindings.iter().map(|b| (b.slot, b.index, b.bound_at)).collect();
        assert_eq!(bound, vec![(0, 0, 2), (1, 1, 2)]);
    }

    #[test]
    fn capacity() {
        let m = machine(&[("0", "11", 1)]);
        let f = family(&[(0, 0, dy(3, 2)), (0, 1, dy(3, 2))], 3);
        let err = regret_construction(&f, &m, 0, 3, Some(1)).unwrap_err();
        assert_eq!(err.code(), "E-CAPACITY");
    }
}
