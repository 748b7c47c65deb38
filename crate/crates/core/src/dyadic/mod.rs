//! Binary strings, exact dyadic rationals, and the covering operations on
//! finite sets of strings.
//!
//! A string `σ` stands both for the cone `[σ]` of infinite sequences
//! extending it and, through its binary expansion, for the dyadic rational
//! `Σ σ(i)·2^{-(i+1)}`. Everything here is exact: no floating point is used
//! when comparing reals or measuring sets.

mod antichain;
mod bitstring;
mod rational;

use std::cmp::Ordering;

pub use antichain::Antichain;
pub(crate) use antichain::CoverTrie;
pub use bitstring::{bits, BitString};
pub use rational::{dy, Dyadic};

use crate::error::{Error, Result};

/// The associated string of `q ∈ [0, 1)`: its binary expansion, ending in 1
/// (ε for 0).
pub fn string_of_rational(q: &Dyadic) -> Result<BitString> {
    if q.is_one() {
        return Err(Error::Domain("1 has no associated string".into()));
    }
    Ok(q.binary_prefix(q.exponent() as usize))
}

/// The associated dyadic rational of `σ`.
pub fn rational_of_string(s: &BitString) -> Dyadic {
    let numerator = s.bits().fold(num_bigint::BigUint::default(), |acc, b| (acc << 1u32) + u32::from(b));
    Dyadic::new(numerator, s.len() as u32).expect("binary expansion lies below 1")
}

/// Lexicographic comparison of `σ⌢0^ω` with `τ⌢0^ω`.
pub fn lex_compare_padded(s: &BitString, t: &BitString) -> Ordering {
    s.cmp_padded(t)
}

/// The optimal covering `O_S`: the minimal strings whose cones lie inside
/// `[S]^⪯`.
pub fn optimal_covering<'a, I>(strings: I) -> Antichain
where
    I: IntoIterator<Item = &'a BitString>,
{
    Antichain::from_reduced(CoverTrie::new(strings).minimal_covered())
}

/// The minimal antichain generating the filter closure `Y↑`: `τ ∈ Y↑` iff
/// `τ` extends a member. For finite `Y` this coincides with the optimal
/// covering.
pub fn filter_closure<'a, I>(strings: I) -> Antichain
where
    I: IntoIterator<Item = &'a BitString>,
{
    optimal_covering(strings)
}

/// `μ([W]^⪯)`, summed over the optimal covering.
pub fn prefix_set_measure<'a, I>(strings: I) -> Dyadic
where
    I: IntoIterator<Item = &'a BitString>,
{
    optimal_covering(strings).measure()
}

/// Whether the optimal covering of `S` has even cardinality. The empty set
/// has the empty covering and is acceptable.
pub fn is_acceptable<'a, I>(strings: I) -> bool
where
    I: IntoIterator<Item = &'a BitString>,
{
    optimal_covering(strings).len() % 2 == 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn set(words: &[&str]) -> Vec<BitString> {
        words.iter().map(|w| bits(w)).collect()
    }

    fn antichain(words: &[&str]) -> Antichain {
        Antichain::try_from_members(set(words)).unwrap()
    }

    #[test]
    fn associated_strings() {
        assert_eq!(string_of_rational(&Dyadic::zero()).unwrap(), BitString::new());
        assert_eq!(string_of_rational(&dy(1, 1)).unwrap(), bits("1"));
        assert_eq!(string_of_rational(&dy(5, 3)).unwrap(), bits("101"));
        assert_eq!(string_of_rational(&dy(5, 3)).unwrap(), oracle::greedy_expansion(&dy(5, 3)));
        assert!(matches!(string_of_rational(&Dyadic::one()), Err(Error::Domain(_))));
    }

    #[test]
    fn associated_rationals() {
        assert_eq!(rational_of_string(&BitString::new()), Dyadic::zero());
        assert_eq!(rational_of_string(&bits("101")), dy(5, 3));
        assert_eq!(rational_of_string(&bits("001")), dy(1, 3));
        assert_eq!(rational_of_string(&bits("0010")), dy(1, 3));
    }

    #[test]
    fn padded_order() {
        assert_eq!(lex_compare_padded(&bits(""), &bits("")), Ordering::Equal);
        assert_eq!(lex_compare_padded(&bits("10"), &bits("1")), Ordering::Equal);
        assert_eq!(lex_compare_padded(&bits("011"), &bits("1")), Ordering::Less);
    }

    #[test]
    fn measures() {
        assert_eq!(prefix_set_measure(&set(&[])), Dyadic::zero());
        assert_eq!(prefix_set_measure(&set(&["0", "1"])), Dyadic::one());
        assert_eq!(prefix_set_measure(&set(&["0", "011", "11"])), dy(3, 2));
        assert_eq!(oracle::measure_by_counting(&set(&["0", "011", "11"]), 3), dy(3, 2));
    }

    #[test]
    fn coverings() {
        assert_eq!(optimal_covering(&set(&["00"])), antichain(&["00"]));
        assert_eq!(optimal_covering(&set(&["0", "1"])), antichain(&[""]));
        assert_eq!(optimal_covering(&set(&["00", "01", "11"])), antichain(&["0", "11"]));
        assert_eq!(optimal_covering(&set(&["0", "1"])), oracle::covering_by_expansion(&set(&["0", "1"]), 2));
        assert_eq!(
            optimal_covering(&set(&["00", "01", "11"])),
            oracle::covering_by_expansion(&set(&["00", "01", "11"]), 3)
        );
        // ε in the input covers everything.
        assert_eq!(optimal_covering(&set(&["", "0110"])), antichain(&[""]));
        // Extensions of members are absorbed, in either insertion order.
        assert_eq!(optimal_covering(&set(&["010", "01"])), antichain(&["01"]));
        assert_eq!(optimal_covering(&set(&["01", "010"])), antichain(&["01"]));
        // Merges cascade upwards.
        assert_eq!(optimal_covering(&set(&["000", "001", "01", "1"])), antichain(&[""]));
    }

    #[test]
    fn filter_closures() {
        assert_eq!(filter_closure(&set(&["0"])), antichain(&["0"]));
        assert_eq!(filter_closure(&set(&["00", "01"])), antichain(&["0"]));
        assert_eq!(filter_closure(&set(&["00", "01", "10", "11"])), antichain(&[""]));
        let fixpoint = oracle::filter_closure_fixpoint(&set(&["00", "01"]), 4);
        assert!(fixpoint.contains(&bits("0")));
        assert!(!fixpoint.contains(&bits("")));
    }

    #[test]
    fn acceptability() {
        assert!(is_acceptable(&set(&["00", "10"])));
        assert!(!is_acceptable(&set(&["0", "1"])));
        assert!(is_acceptable(&set(&[])));
    }

    #[test]
    fn antichain_validation() {
        assert!(Antichain::try_from_members(set(&["0", "01"])).is_err());
        assert!(Antichain::try_from_members(set(&["10", "11"])).is_err());
        assert!(Antichain::try_from_members(set(&["10", "0"])).is_ok());
        assert_eq!(antichain(&["0", "11"]).to_string(), "{0,11}");
        assert_eq!(antichain(&[""]).to_string(), "{-}");
    }
}
