use super::{StageTrace, StageValue, State};
use crate::dyadic::Dyadic;
use crate::error::Result;
use crate::streams::LeftCEApprox;

/// `β_s = max{α_{e,s} : e ≤ s}`.
///
/// ```
/// use numberings::constructions::beta_max;
/// use numberings::dyadic::dy;
/// use numberings::streams::LeftCEApprox;
///
/// let family = [LeftCEApprox::constant(dy(1, 2), 3), LeftCEApprox::constant(dy(1, 1), 3)];
/// let beta = beta_max(&family, 3).unwrap();
/// // Member 1 only counts from stage 1.
/// assert_eq!(beta.values(), vec![dy(1, 2), dy(1, 1), dy(1, 1), dy(1, 1)]);
/// ```
pub fn beta_max(family: &[LeftCEApprox], horizon: usize) -> Result<StageTrace> {
    for member in family {
        member.require_horizon(horizon, "beta_max")?;
    }
    let mut trace = StageTrace::new();
    for s in 0..=horizon {
        let beta = family
            .iter()
            .take(s + 1)
            .map(|a| a.value(s))
            .max()
            .cloned()
            .unwrap_or_else(Dyadic::zero);
        trace.push(State::Max, StageValue::Real(beta), None);
    }
    Ok(trace)
}
