//! A toy prefix-free machine and the stage approximations it induces.
//!
//! Programs are scripted: each has a code, an output and the stage at which
//! it halts. Nothing is executed. The machine yields `K_t(σ)`, the length of
//! the shortest code that has printed `σ` by stage `t`, and `Ω_s`, the
//! measure of the codes halted by stage `s`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::classes::Tree;
use crate::dyadic::{BitString, Dyadic};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Program {
    pub code: BitString,
    pub output: BitString,
    pub halt_stage: usize,
}

impl Program {
    pub fn new(code: BitString, output: BitString, halt_stage: usize) -> Self {
        Program {
            code,
            output,
            halt_stage,
        }
    }
}

/// Approximated complexity: a code length, or no code yet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Complexity {
    Finite(usize),
    Infinite,
}

impl Complexity {
    pub fn finite(self) -> Option<usize> {
        match self {
            Complexity::Finite(k) => Some(k),
            Complexity::Infinite => None,
        }
    }
}

impl fmt::Display for Complexity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Complexity::Finite(k) => write!(f, "{k}"),
            Complexity::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixMachine {
    programs: Vec<Program>,
    by_output: BTreeMap<BitString, Vec<(usize, usize)>>,
    kraft_sum: Dyadic,
    c_hat: usize,
    c_tilde: usize,
}

impl PrefixMachine {
    /// Rejects codes that are prefixes of one another (duplicates included)
    /// and code sets whose Kraft sum exceeds 1.
    pub fn new(programs: Vec<Program>) -> Result<Self> {
        let mut codes: Vec<&BitString> = programs.iter().map(|p| &p.code).collect();
        codes.sort();
        let set: BTreeSet<&BitString> = codes.iter().copied().collect();
        for code in &codes {
            if let Some(shorter) = code.prefixes().find(|p| p.len() < code.len() && set.contains(p)) {
                return Err(Error::PrefixFree {
                    shorter,
                    longer: (*code).clone(),
                });
            }
        }
        if let Some(w) = codes.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::PrefixFree {
                shorter: w[0].clone(),
                longer: w[1].clone(),
            });
        }
        let mut kraft_sum = Dyadic::zero();
        for p in &programs {
            kraft_sum = kraft_sum
                .checked_add(&Dyadic::pow2_neg(p.code.len() as u32))
                .ok_or(Error::Kraft)?;
        }
        let mut by_output: BTreeMap<BitString, Vec<(usize, usize)>> = BTreeMap::new();
        for p in &programs {
            by_output
                .entry(p.output.clone())
                .or_default()
                .push((p.code.len(), p.halt_stage));
        }
        Ok(PrefixMachine {
            programs,
            by_output,
            kraft_sum,
            c_hat: 0,
            c_tilde: 0,
        })
    }

    /// A machine that never halts.
    pub fn silent() -> Self {
        PrefixMachine::new(Vec::new()).expect("no codes")
    }

    pub fn with_constants(mut self, c_hat: usize, c_tilde: usize) -> Self {
        self.c_hat = c_hat;
        self.c_tilde = c_tilde;
        self
    }

    pub fn programs(&self) -> &[Program] {
        &self.programs
    }

    pub fn c_hat(&self) -> usize {
        self.c_hat
    }

    pub fn c_tilde(&self) -> usize {
        self.c_tilde
    }

    pub fn kraft_sum(&self) -> &Dyadic {
        &self.kraft_sum
    }

    pub fn is_strict_kraft(&self) -> bool {
        !self.kraft_sum.is_one()
    }

    pub fn max_halt_stage(&self) -> Option<usize> {
        self.programs.iter().map(|p| p.halt_stage).max()
    }

    /// `K_t(σ)`.
    pub fn k_approx(&self, s: &BitString, t: usize) -> Complexity {
        self.by_output
            .get(s)
            .and_then(|codes| codes.iter().filter(|&&(_, h)| h <= t).map(|&(len, _)| len).min())
            .map_or(Complexity::Infinite, Complexity::Finite)
    }

    /// `Ω_s`.
    pub fn omega_approx(&self, s: usize) -> Dyadic {
        self.programs
            .iter()
            .filter(|p| p.halt_stage <= s)
            .fold(Dyadic::zero(), |acc, p| {
                acc.checked_add(&Dyadic::pow2_neg(p.code.len() as u32))
                    .expect("bounded by the Kraft sum")
            })
    }

    /// `K_t(σ) ≥ |σ| − c`.
    pub fn satisfies_constant(&self, s: &BitString, c: usize, t: usize) -> bool {
        match self.k_approx(s, t) {
            Complexity::Infinite => true,
            Complexity::Finite(k) => k as i64 >= s.len() as i64 - c as i64,
        }
    }

    /// Outputs of length at most `depth` that fail constant `c` at stage `t`.
    pub fn failing_outputs(&self, c: usize, t: usize, depth: usize) -> BTreeSet<BitString> {
        self.by_output
            .keys()
            .filter(|s| s.len() <= depth && !self.satisfies_constant(s, c, t))
            .cloned()
            .collect()
    }

    /// Strings of length at most `depth` all of whose prefixes satisfy
    /// constant `c` at stage `t`.
    pub fn randomness_class_tree(&self, c: usize, t: usize, depth: usize) -> Tree {
        Tree::avoiding(&self.failing_outputs(c, t, depth), depth)
    }
}

impl FromStr for PrefixMachine {
    type Err = Error;

    /// Lines `code<TAB>output<TAB>halt_stage`; `-` or `ε` is the empty string.
    fn from_str(text: &str) -> Result<Self> {
        let mut programs = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let [code, output, halt] = fields[..] else {
                return Err(Error::parse(line_no, format!("expected 3 tab-separated fields, found {}", fields.len())));
            };
            let parse_bits = |f: &str| f.trim().parse::<BitString>().map_err(|e| crate::streams::relocate(e, line_no));
            let halt_stage = halt
                .trim()
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad halt stage {halt:?}")))?;
            programs.push(Program::new(parse_bits(code)?, parse_bits(output)?, halt_stage));
        }
        PrefixMachine::new(programs)
    }
}

impl fmt::Display for PrefixMachine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.programs {
            writeln!(f, "{}\t{}\t{}", p.code.field(), p.output.field(), p.halt_stage)?;
        }
        Ok(())
    }
}

fn floor_log2(p: usize) -> usize {
    (usize::BITS - 1 - p.leading_zeros()) as usize
}

/// Least `p ≥ 1` with `p − 2⌊log₂ p⌋ ≥ n + k`.
pub fn compute_padding(n: usize, k: usize) -> usize {
    let target = n + k;
    // p − 2⌊log₂ p⌋ ≤ p, so nothing below the target can work.
    (target.max(1)..)
        .find(|&p| p >= target + 2 * floor_log2(p))
        .expect("p − 2 log p is unbounded")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::{bits, dy};
    use crate::oracle;

    fn prog(code: &str, output: &str, halt: usize) -> Program {
        Program::new(bits(code), bits(output), halt)
    }

    #[test]
    fn complexity_approximation() {
        let m = PrefixMachine::new(vec![prog("00", "101", 5)]).unwrap();
        assert_eq!(m.k_approx(&bits("101"), 4), Complexity::Infinite);
        assert_eq!(m.k_approx(&bits("101"), 5), Complexity::Finite(2));
        let m = PrefixMachine::new(vec![prog("000", "11", 1), prog("01", "11", 7)]).unwrap();
        assert_eq!(m.k_approx(&bits("11"), 3), Complexity::Finite(3));
        assert_eq!(m.k_approx(&bits("11"), 8), Complexity::Finite(2));
        assert_eq!(m.k_approx(&bits("0"), 8), Complexity::Infinite);
    }

    #[test]
    fn omega() {
        let m = PrefixMachine::new(vec![prog("0", "", 2), prog("101", "1", 3), prog("11", "0", 9)]).unwrap();
        assert_eq!(m.omega_approx(1), Dyadic::zero());
        assert_eq!(m.omega_approx(2), dy(1, 1));
        assert_eq!(m.omega_approx(3), dy(5, 3));
        assert_eq!(m.omega_approx(9), dy(7, 3));
        assert!(m.is_strict_kraft());
        let one = PrefixMachine::new(vec![prog("11", "", 0)]).unwrap();
        assert_eq!(one.omega_approx(0), dy(1, 2));
    }

    #[test]
    fn constants() {
        let m = PrefixMachine::new(vec![prog("00000", "10101", 0), prog("001", "11111", 0)]).unwrap();
        assert!(m.satisfies_constant(&bits("10101"), 0, 0));
        assert!(!m.satisfies_constant(&bits("11111"), 1, 0));
        assert!(m.satisfies_constant(&bits("11111"), 2, 0));
        assert!(m.satisfies_constant(&bits("0000000000"), 0, 0));
    }

    #[test]
    fn validation() {
        let err = PrefixMachine::new(vec![prog("0", "", 0), prog("01", "", 0)]).unwrap_err();
        assert_eq!(err.code(), "E-PREFIX-FREE");
        let err = PrefixMachine::new(vec![prog("0", "", 0), prog("0", "1", 0)]).unwrap_err();
        assert_eq!(err.code(), "E-PREFIX-FREE");
        // {ε} is prefix-free and has Kraft sum exactly 1.
        let m = PrefixMachine::new(vec![prog("", "0", 0)]).unwrap();
        assert!(!m.is_strict_kraft());
    }

    #[test]
    fn parse_round_trip() {
        let text = "# code\toutput\thalt\n00\t101\t5\n1\t-\t0\n";
        let m: PrefixMachine = text.parse().unwrap();
        assert_eq!(m.programs().len(), 2);
        let again: PrefixMachine = m.to_string().parse().unwrap();
        assert_eq!(again, m);
        assert!(matches!("00\t1\n".parse::<PrefixMachine>(), Err(Error::Parse { line: 1, .. })));
        assert!(matches!("0\t1\t0\n0\t1x\t3\n".parse::<PrefixMachine>(), Err(Error::Parse { line: 2, .. })));
        assert!(matches!("0\t1\tsoon\n".parse::<PrefixMachine>(), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn class_trees() {
        let m = PrefixMachine::new(vec![prog("", "00", 4)]).unwrap();
        assert_eq!(m.randomness_class_tree(1, 3, 3), Tree::full(3));
        let pruned = m.randomness_class_tree(1, 4, 3);
        assert!(!pruned.contains(&bits("00")));
        assert!(!pruned.contains(&bits("001")));
        assert!(pruned.contains(&bits("01")));
        assert!(pruned.contains(&bits("0")));
        assert_eq!(m.randomness_class_tree(5, 4, 3), Tree::full(3));
    }

    #[test]
    fn padding() {
        assert_eq!(compute_padding(0, 0), 1);
        assert_eq!(compute_padding(1, 0), 1);
        assert_eq!(compute_padding(5, 3), 14);
        for target in 0..300 {
            assert_eq!(compute_padding(target, 0), oracle::padding_scan(target), "target {target}");
        }
    }
}

#[cfg(test)]
mod properties {
    use proptest::prelude::*;

    use super::*;
    use crate::dyadic::prefix_set_measure;
    use crate::oracle;

    /// A prefix-free machine: distinct codes of equal length are automatically
    /// prefix-free, and one unused code keeps Kraft strict.
    fn machine() -> impl Strategy<Value = PrefixMachine> {
        (2usize..=4).prop_flat_map(|width| {
            let slots = (1usize << width) - 1;
            prop::collection::vec((prop::collection::vec(any::<bool>(), 0..=6), 0usize..12), 0..=slots).prop_map(
                move |progs| {
                    let programs = progs
                        .into_iter()
                        .enumerate()
                        .map(|(i, (out, halt))| {
                            Program::new(BitString::from_u64(i as u64, width), BitString::from_bits(out), halt)
                        })
                        .collect();
                    PrefixMachine::new(programs).unwrap()
                },
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn k_is_nonincreasing(m in machine(), t in 0usize..12) {
            for p in m.programs() {
                prop_assert!(m.k_approx(&p.output, t + 1) <= m.k_approx(&p.output, t));
            }
        }

        #[test]
        fn omega_is_nondecreasing_below_one(m in machine(), s in 0usize..12) {
            prop_assert!(m.omega_approx(s) <= m.omega_approx(s + 1));
            prop_assert!(m.omega_approx(s + 1) < Dyadic::one());
        }

        #[test]
        fn class_tree_measure_bound(m in machine(), c in 0usize..4, t in 0usize..12, depth in 0usize..8) {
            let tree = m.randomness_class_tree(c, t, depth);
            let removed = prefix_set_measure(&m.failing_outputs(c, t, depth));
            let measure = tree.path_measure();
            prop_assert_eq!(measure.checked_add(&removed), Some(Dyadic::one()));
            let bound = Dyadic::one().checked_sub(&m.omega_approx(t).shr(c as u32)).unwrap();
            prop_assert!(measure >= bound);
            let strings: Vec<BitString> = tree.paths_at_depth(depth).unwrap().into_iter().collect();
            prop_assert_eq!(oracle::measure_by_counting(&strings, depth), measure);
        }

        #[test]
        fn class_tree_is_antitone(m in machine(), c in 0usize..4, t in 0usize..12) {
            let now = m.randomness_class_tree(c, t, 6);
            let later = m.randomness_class_tree(c, t + 1, 6);
            prop_assert!(later.nodes().is_subset(now.nodes()));
        }

        #[test]
        fn padding_is_least(n in 0usize..200, k in 0usize..50) {
            let p = compute_padding(n, k);
            let holds = |p: usize| p as i64 - 2 * floor_log2(p) as i64 >= (n + k) as i64;
            prop_assert!(holds(p));
            if n + k >= 2 {
                prop_assert!(!holds(p - 1));
            }
        }
    }
}
