use crate::dyadic::BitString;

/// The `i`-th string, in length-lexicographic order, that ends in 1 and has
/// an odd number of ones.
///
/// Of the strings of length `L ≥ 2` ending in 1, those with an odd count are
/// the ones whose first `L − 1` bits have even parity; these are `2^{L−2}`
/// many, and in lexicographic order their first `L − 2` bits count up in
/// binary. The string is therefore built directly from `i`.
///
/// ```
/// use numberings::constructions::odd_ones_real_enumeration;
/// use numberings::dyadic::bits;
///
/// assert_eq!(odd_ones_real_enumeration(0), bits("1"));
/// assert_eq!(odd_ones_real_enumeration(1), bits("01"));
/// assert_eq!(odd_ones_real_enumeration(2), bits("001"));
/// assert_eq!(odd_ones_real_enumeration(3), bits("111"));
/// ```
pub fn odd_ones_real_enumeration(i: usize) -> BitString {
    if i == 0 {
        return BitString::ones(1);
    }
    // Lengths 2..=L hold 2^{L−1} − 1 strings together.
    let rank = (i - 1) as u64;
    let len = (2..).find(|&l: &usize| rank < (1u64 << (l - 1)) - 1).expect("lengths grow without bound");
    let j = rank - ((1u64 << (len - 2)) - 1);
    let mut s = BitString::from_u64(j, len - 2);
    s.push(j.count_ones() % 2 == 1);
    s.push(true);
    s
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::oracle;

    #[test]
    fn agrees_with_the_scan() {
        for i in 0..1000 {
            assert_eq!(odd_ones_real_enumeration(i), oracle::odd_ones_scan(i), "i = {i}");
        }
    }

    #[test]
    fn injective_with_odd_counts() {
        let all: BTreeSet<BitString> = (0..=1000).map(odd_ones_real_enumeration).collect();
        assert_eq!(all.len(), 1001);
        for s in &all {
            assert_eq!(s.count_ones() % 2, 1);
            assert!(s.get(s.len() - 1));
        }
    }
}
