use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;

use crate::error::{Error, Result};

const WORD: usize = 64;

/// A finite binary string.
///
/// Bits are packed most-significant first, so the derived ordering (length,
/// then words) is the length-lexicographic order. Strings up to 128 bits live
/// inline. Bits past `len` are always zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BitString {
    len: usize,
    words: SmallVec<[u64; 2]>,
}

impl BitString {
    /// The empty string ε.
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut s = Self::new();
        for b in bits {
            s.push(b);
        }
        s
    }

    pub fn zeros(n: usize) -> Self {
        BitString {
            len: n,
            words: SmallVec::from_elem(0, n.div_ceil(WORD)),
        }
    }

    pub fn ones(n: usize) -> Self {
        Self::from_bits(std::iter::repeat_n(true, n))
    }

    /// The `width`-bit big-endian rendering of `value`; `width` ≤ 64.
    pub fn from_u64(value: u64, width: usize) -> Self {
        assert!(width <= WORD, "width {width} exceeds 64 bits");
        if width == 0 {
            return Self::new();
        }
        let word = value << (WORD - width);
        BitString {
            len: width,
            words: SmallVec::from_elem(word, 1),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Bit `i`; panics when `i >= len`.
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.words[i / WORD] >> (WORD - 1 - i % WORD) & 1 == 1
    }

    /// Bit `i` of the string followed by infinitely many zeroes.
    pub fn get_padded(&self, i: usize) -> bool {
        i < self.len && self.get(i)
    }

    pub fn push(&mut self, bit: bool) {
        if self.len % WORD == 0 {
            self.words.push(0);
        }
        if bit {
            let i = self.len;
            self.words[i / WORD] |= 1 << (WORD - 1 - i % WORD);
        }
        self.len += 1;
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// The value of the (at most 64) bits as a big-endian integer.
    pub fn to_u64(&self) -> u64 {
        assert!(self.len <= WORD, "string of length {} exceeds 64 bits", self.len);
        if self.len == 0 {
            0
        } else {
            self.words[0] >> (WORD - self.len)
        }
    }

    /// The initial segment of length `n`; panics when `n > len`.
    pub fn prefix(&self, n: usize) -> BitString {
        assert!(n <= self.len, "prefix length {n} exceeds length {}", self.len);
        let mut words: SmallVec<[u64; 2]> = self.words[..n.div_ceil(WORD)].into();
        if n % WORD != 0 {
            let last = words.len() - 1;
            words[last] &= !0u64 << (WORD - n % WORD);
        }
        BitString { len: n, words }
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut s = self.clone();
        for b in other.bits() {
            s.push(b);
        }
        s
    }

    pub fn child(&self, bit: bool) -> BitString {
        let mut s = self.clone();
        s.push(bit);
        s
    }

    pub fn parent(&self) -> Option<BitString> {
        (self.len > 0).then(|| self.prefix(self.len - 1))
    }

    /// The string differing from `self` in its last bit only.
    pub fn sibling(&self) -> Option<BitString> {
        let parent = self.parent()?;
        Some(parent.child(!self.get(self.len - 1)))
    }

    /// `self ⪯ other`.
    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        if self.len > other.len {
            return false;
        }
        let full = self.len / WORD;
        if self.words[..full] != other.words[..full] {
            return false;
        }
        let rest = self.len % WORD;
        rest == 0 || {
            let mask = !0u64 << (WORD - rest);
            self.words[full] == other.words[full] & mask
        }
    }

    pub fn extends(&self, other: &BitString) -> bool {
        other.is_prefix_of(self)
    }

    pub fn is_comparable(&self, other: &BitString) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// All prefixes from ε up to and including `self`.
    pub fn prefixes(&self) -> impl Iterator<Item = BitString> + '_ {
        (0..=self.len).map(move |n| self.prefix(n))
    }

    /// All strings of length exactly `n`, in lexicographic order.
    pub fn all_of_length(n: usize) -> impl Iterator<Item = BitString> {
        assert!(n < WORD, "cannot enumerate strings of length {n}");
        (0..1u64 << n).map(move |v| BitString::from_u64(v, n))
    }

    /// All strings of length at most `n`, in length-lexicographic order.
    pub fn all_up_to(n: usize) -> impl Iterator<Item = BitString> {
        (0..=n).flat_map(BitString::all_of_length)
    }

    /// Position of `self` in the length-lexicographic enumeration of 2^{<ω}.
    pub fn shortlex_index(&self) -> u64 {
        assert!(self.len < WORD, "string too long to index");
        (1u64 << self.len) - 1 + self.to_u64()
    }

    pub fn from_shortlex_index(index: u64) -> BitString {
        let len = (WORD - 1) - (index + 1).leading_zeros() as usize;
        BitString::from_u64(index + 1 - (1u64 << len), len)
    }

    /// Compare `self⌢0^ω` with `other⌢0^ω` lexicographically.
    pub fn cmp_padded(&self, other: &BitString) -> Ordering {
        let words = self.words.len().max(other.words.len());
        for i in 0..words {
            let a = self.words.get(i).copied().unwrap_or(0);
            let b = other.words.get(i).copied().unwrap_or(0);
            match a.cmp(&b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }

    /// The CLI rendering: the 0/1 word, `-` for ε.
    pub fn field(&self) -> String {
        if self.is_empty() {
            "-".to_owned()
        } else {
            self.to_string()
        }
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("ε");
        }
        for b in self.bits() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for BitString {
    type Err = Error;

    /// Accepts a 0/1 word; ε may be written as the empty string, `-` or `ε`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "-" || s == "ε" {
            return Ok(BitString::new());
        }
        let mut out = BitString::new();
        for c in s.chars() {
            match c {
                '0' => out.push(false),
                '1' => out.push(true),
                other => return Err(Error::parse(0, format!("invalid bit {other:?} in {s:?}"))),
            }
        }
        Ok(out)
    }
}

/// Shorthand for tests and examples: `bits("0110")`. Panics on malformed input.
pub fn bits(s: &str) -> BitString {
    s.parse().expect("well-formed bit string")
}
