//! Randomized and exhaustive comparisons of the library against the
//! brute-force [`oracle`](crate::oracle) implementations.
//!
//! Each check returns a [`Report`] counting the cases it ran and quoting the
//! first few counterexamples. Random cases come from a seeded ChaCha
//! generator, so a report is reproducible from its [`Bounds`].

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classes::{diagonalize, measure_capped_enumeration, Tree};
use crate::complexity::{compute_padding, Complexity, PrefixMachine, Program};
use crate::constructions::{
    beta_max, friedberg_merge, scenarios, InjectiveFamily, OddSizeFamily, OddSizePicker, Origin,
};
use crate::coverings::star_construction;
use crate::dyadic::{
    filter_closure, lex_compare_padded, optimal_covering, prefix_set_measure, rational_of_string,
    string_of_rational, BitString, Dyadic,
};
use crate::error::{Error, Result};
use crate::oracle;
use crate::streams::{EnumerationScript, Event, LeftCEApprox, StringSet};

const QUOTED: usize = 5;

/// Outcome of one check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// The first few counterexamples, verbatim.
    pub counterexamples: Vec<String>,
}

impl Report {
    fn new(name: &'static str) -> Self {
        Report {
            name,
            cases: 0,
            failures: 0,
            counterexamples: Vec::new(),
        }
    }

    fn case(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.fail(describe());
        }
    }

    fn fail(&mut self, counterexample: String) {
        self.failures += 1;
        if self.counterexamples.len() < QUOTED {
            self.counterexamples.push(counterexample);
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "ok" } else { "FAILED" };
        write!(f, "{}: {} cases, {} failures: {verdict}", self.name, self.cases, self.failures)?;
        for c in &self.counterexamples {
            write!(f, "\n  counterexample: {c}")?;
        }
        Ok(())
    }
}

/// The covering under test, as its set of members.
pub type CoveringFn = fn(&[BitString]) -> BTreeSet<BitString>;

pub fn library_covering(strings: &[BitString]) -> BTreeSet<BitString> {
    optimal_covering(strings).members().clone()
}

/// A broken covering that never merges sibling cones: it keeps the minimal
/// members of `S` only.
pub fn mutant_covering(strings: &[BitString]) -> BTreeSet<BitString> {
    strings
        .iter()
        .filter(|s| !strings.iter().any(|t| t.len() < s.len() && t.is_prefix_of(s)))
        .cloned()
        .collect()
}

/// Sizes and seed for the checks. The defaults are the acceptance sizes.
#[derive(Clone, Debug)]
pub struct Bounds {
    pub seed: u64,
    /// Longest string in the round-trip check.
    pub len: usize,
    /// Depth of the exhaustive covering comparison; random sets go one deeper.
    pub depth: usize,
    /// Largest set in the exhaustive covering comparison.
    pub subset_size: usize,
    pub random_sets: usize,
    pub closure_sets: usize,
    pub listings: usize,
    pub machines: usize,
    pub class_depth: usize,
    pub scripts: usize,
    pub suites: usize,
    pub merges: usize,
    pub families: usize,
    pub covering: CoveringFn,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            seed: 0x5eed,
            len: 12,
            depth: 4,
            subset_size: 4,
            random_sets: 10_000,
            closure_sets: 1_000,
            listings: 100,
            machines: 100,
            class_depth: 12,
            scripts: 1_000,
            suites: 100,
            merges: 200,
            families: 100,
            covering: library_covering,
        }
    }
}

impl Bounds {
    /// Sets every random case count to `n`.
    pub fn with_cases(mut self, n: usize) -> Self {
        self.random_sets = n;
        self.closure_sets = n;
        self.listings = n;
        self.machines = n;
        self.scripts = n;
        self.suites = n;
        self.merges = n;
        self.families = n;
        self
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Dyadic,
    Coverings,
    Complexity,
    Constructions,
    Classes,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Dyadic,
        Suite::Coverings,
        Suite::Complexity,
        Suite::Constructions,
        Suite::Classes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Dyadic => "dyadic",
            Suite::Coverings => "coverings",
            Suite::Complexity => "complexity",
            Suite::Constructions => "constructions",
            Suite::Classes => "classes",
        }
    }

    pub fn run(self, bounds: &Bounds) -> Vec<Report> {
        match self {
            Suite::Dyadic => vec![round_trip(bounds)],
            Suite::Coverings => vec![
                covering_equivalence(bounds),
                filter_closure_equivalence(bounds),
                star_postconditions(bounds),
            ],
            Suite::Complexity => vec![machine_measure_bound(bounds), padding(bounds)],
            Suite::Constructions => vec![scenario_safety(), merge_contract(bounds), beta_rightmost(bounds)],
            Suite::Classes => vec![capped_enumeration(bounds), diagonalization(bounds), tree_paths(bounds)],
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown suite {s:?}")))
    }
}

fn random_string(rng: &mut ChaCha8Rng, max_len: usize) -> BitString {
    let n = rng.gen_range(0..=max_len);
    BitString::from_bits((0..n).map(|_| rng.gen::<bool>()))
}

fn random_set(rng: &mut ChaCha8Rng, max_size: usize, max_len: usize) -> Vec<BitString> {
    let n = rng.gen_range(0..=max_size);
    (0..n).map(|_| random_string(rng, max_len)).collect()
}

fn show(strings: &[BitString]) -> String {
    let words: Vec<String> = strings.iter().map(BitString::field).collect();
    format!("{{{}}}", words.join(","))
}

fn show_set(strings: &BTreeSet<BitString>) -> String {
    show(&strings.iter().cloned().collect::<Vec<_>>())
}

/// `string_of_rational` and `rational_of_string` invert each other, agree
/// with the doubling expansion, and carry padded lexicographic order to the
/// order of the reals.
pub fn round_trip(bounds: &Bounds) -> Report {
    let mut r = Report::new("round trip and order transport");
    let len = bounds.len.min(24);
    let admissible: Vec<BitString> = BitString::all_up_to(len)
        .filter(|s| s.is_empty() || s.get(s.len() - 1))
        .collect();
    for s in &admissible {
        let q = rational_of_string(s);
        let back = string_of_rational(&q);
        r.case(back.as_ref() == Ok(s), || format!("σ = {}: string of {q} is {back:?}", s.field()));
        let greedy = oracle::greedy_expansion(&q);
        r.case(&greedy == s, || format!("σ = {}: doubling expansion gives {}", s.field(), greedy.field()));
    }
    for b in 0..=len as u32 {
        for a in 0..1u64 << b {
            let q = Dyadic::new(a, b).expect("a < 2^b");
            let ok = string_of_rational(&q).map(|s| rational_of_string(&s)) == Ok(q.clone());
            r.case(ok, || format!("{a}/2^{b} does not survive the round trip"));
        }
    }
    // Padding to `len` bits gives an independent key for the padded order.
    let key = |s: &BitString| BitString::from_bits(s.bits().chain(std::iter::repeat(false)).take(len)).to_u64();
    let mut sorted = admissible.clone();
    sorted.sort_by_key(key);
    for w in sorted.windows(2) {
        let lex = lex_compare_padded(&w[0], &w[1]).is_lt();
        let real = rational_of_string(&w[0]) < rational_of_string(&w[1]);
        r.case(lex && real, || format!("order not transported between {} and {}", w[0].field(), w[1].field()));
    }
    let mut rng = bounds.rng(3);
    for _ in 0..admissible.len() {
        let s = &admissible[rng.gen_range(0..admissible.len())];
        let t = &admissible[rng.gen_range(0..admissible.len())];
        let ok = lex_compare_padded(s, t) == key(s).cmp(&key(t))
            && lex_compare_padded(s, t) == rational_of_string(s).cmp(&rational_of_string(t));
        r.case(ok, || format!("comparison of {} and {} disagrees", s.field(), t.field()));
    }
    r
}

fn compare_covering(r: &mut Report, bounds: &Bounds, strings: &[BitString], depth: usize) {
    let expected = oracle::covering_by_expansion(strings, depth);
    let got = (bounds.covering)(strings);
    r.case(&got == expected.members(), || {
        format!("S = {}: expected {}, got {}", show(strings), show_set(expected.members()), show_set(&got))
    });
    let measure = prefix_set_measure(strings);
    let counted = oracle::measure_by_counting(strings, depth);
    r.case(measure == counted, || format!("S = {}: measure {measure}, counted {counted}", show(strings)));
}

/// Every `S ⊆ 2^{≤depth}` with `|S| ≤ subset_size`, then random sets one
/// level deeper, against the leaf-expansion oracle.
pub fn covering_equivalence(bounds: &Bounds) -> Report {
    let mut r = Report::new("optimal covering against leaf expansion");
    let universe: Vec<BitString> = BitString::all_up_to(bounds.depth).collect();
    fn subsets(universe: &[BitString], from: usize, left: usize, chosen: &mut Vec<BitString>, f: &mut dyn FnMut(&[BitString])) {
        f(chosen);
        if left == 0 {
            return;
        }
        for i in from..universe.len() {
            chosen.push(universe[i].clone());
            subsets(universe, i + 1, left - 1, chosen, f);
            chosen.pop();
        }
    }
    subsets(&universe, 0, bounds.subset_size, &mut Vec::new(), &mut |s| {
        compare_covering(&mut r, bounds, s, bounds.depth)
    });
    let mut rng = bounds.rng(1);
    let depth = bounds.depth + 1;
    for _ in 0..bounds.random_sets {
        let s = random_set(&mut rng, 8, depth);
        compare_covering(&mut r, bounds, &s, depth);
    }
    r
}

/// Membership in the filter closure of random `Y` against the sibling-merge
/// fixpoint, on every string up to twice the depth.
pub fn filter_closure_equivalence(bounds: &Bounds) -> Report {
    let mut r = Report::new("filter closure against sibling-merge fixpoint");
    let mut rng = bounds.rng(2);
    let max_len = 2 * bounds.depth;
    let taus: Vec<BitString> = BitString::all_up_to(max_len).collect();
    for _ in 0..bounds.closure_sets {
        let y = random_set(&mut rng, 6, bounds.depth);
        let closure = filter_closure(&y);
        let fixpoint = oracle::filter_closure_fixpoint(&y, max_len);
        let mismatch = taus.iter().find(|t| closure.covers(t) != fixpoint.contains(t));
        r.case(mismatch.is_none(), || {
            format!("Y = {}: membership of {} differs from the fixpoint", show(&y), mismatch.unwrap().field())
        });
    }
    r
}

/// Strings `1^j 0 ρ` with `j` slowly growing: a finite stretch of a listing
/// of the open, non-closed class avoiding only `1^∞`. Strings stay within
/// eight bits.
fn non_clopen_listing(rng: &mut ChaCha8Rng, n: usize) -> Vec<BitString> {
    let mut j = 0;
    (0..n)
        .map(|_| {
            j = (j + rng.gen_range(0..=1)).min(5);
            let mut s = BitString::ones(j);
            s.push(false);
            s.concat(&random_string(rng, 2))
        })
        .collect()
}

/// Snapshots of random listings have acceptable generators and monotone
/// outputs, and listings with at least three good stages cover everything
/// listed before the last good stage.
pub fn star_postconditions(bounds: &Bounds) -> Report {
    let mut r = Report::new("star construction postconditions");
    let mut rng = bounds.rng(9);
    let mut qualifying = 0;
    for i in 0..bounds.listings {
        let n = rng.gen_range(0..14);
        let listing = if i % 2 == 0 {
            random_set(&mut rng, n, 6)
        } else {
            non_clopen_listing(&mut rng, n)
        };
        let depth = listing.iter().map(BitString::len).max().unwrap_or(0);
        let run = star_construction(&listing, listing.len() + 2);
        let mut previous = StringSet::new();
        for snap in &run {
            let generators: Vec<BitString> = snap.generators.iter().cloned().collect();
            let cover = oracle::covering_by_expansion(&generators, depth);
            r.case(cover.len() % 2 == 0, || {
                format!("listing {}: stage {} generators {} are not acceptable", show(&listing), snap.stage, snap.generators)
            });
            r.case(cover == snap.output, || {
                format!("listing {}: stage {} output is not the closure of its generators", show(&listing), snap.stage)
            });
            let covered = snap.output.expand(depth);
            r.case(previous.is_subset(&covered), || {
                format!("listing {}: output shrinks at stage {}", show(&listing), snap.stage)
            });
            previous = covered;
        }
        if run.iter().filter(|s| s.good).count() >= 3 {
            qualifying += 1;
            let last_good = run.iter().rposition(|s| s.good).expect("at least three good stages");
            let last = &run.last().expect("stage 0 exists").output;
            let missed = listing[..last_good].iter().find(|s| !last.covers(s));
            r.case(missed.is_none(), || {
                format!("listing {}: {} is not covered by the final snapshot", show(&listing), missed.unwrap().field())
            });
        }
    }
    if bounds.listings >= 10 && qualifying == 0 {
        r.fail("no listing had three good stages".into());
    }
    r
}

fn random_machine(rng: &mut ChaCha8Rng, max_programs: usize, max_code: usize, max_output: usize) -> PrefixMachine {
    let target = rng.gen_range(0..=max_programs);
    let mut programs: Vec<Program> = Vec::new();
    for _ in 0..target * 8 {
        if programs.len() == target {
            break;
        }
        let len = rng.gen_range(1..=max_code);
        let code = BitString::from_bits((0..len).map(|_| rng.gen::<bool>()));
        if programs.iter().any(|p| p.code.is_comparable(&code)) {
            continue;
        }
        let output = random_string(rng, max_output);
        programs.push(Program::new(code, output, rng.gen_range(0..=30)));
    }
    PrefixMachine::new(programs).expect("distinct incomparable codes are prefix-free")
}

/// For random machines, the depth-`class_depth` class tree at constant `c`
/// and stage `t` has path measure at least `1 − 2^{-c}·Ω_t`; `K_t` never
/// rises and `Ω_t` never falls.
pub fn machine_measure_bound(bounds: &Bounds) -> Report {
    let mut r = Report::new("class tree measure bound");
    let mut rng = bounds.rng(4);
    let depth = bounds.class_depth;
    for _ in 0..bounds.machines {
        let m = random_machine(&mut rng, 20, 8, depth);
        let last = m.max_halt_stage().unwrap_or(0);
        let stages: BTreeSet<usize> = std::iter::once(0).chain(m.programs().iter().map(|p| p.halt_stage)).collect();
        for c in 0..=4usize {
            for &t in &stages {
                let tree = m.randomness_class_tree(c, t, depth);
                let measure = tree.path_measure();
                let bound = Dyadic::one().checked_sub(&m.omega_approx(t).shr(c as u32)).expect("Ω_t ≤ 1");
                r.case(measure >= bound, || format!("machine\n{m}c = {c}, t = {t}: measure {measure} below {bound}"));
                if t == last && depth <= 14 {
                    let counted = oracle::paths_by_prefix_check(&tree, depth).len() as u64;
                    let exact = Dyadic::new(counted, depth as u32).expect("path fraction lies in [0, 1]");
                    r.case(exact == measure, || format!("machine\n{m}c = {c}, t = {t}: measure {measure}, counted {exact}"));
                }
            }
        }
        for p in m.programs() {
            let ks: Vec<Complexity> = (0..=last + 1).map(|t| m.k_approx(&p.output, t)).collect();
            r.case(ks.windows(2).all(|w| w[1] <= w[0]), || format!("machine\n{m}K_t({}) rises", p.output.field()));
        }
        let omegas: Vec<Dyadic> = (0..=last + 1).map(|t| m.omega_approx(t)).collect();
        r.case(omegas.windows(2).all(|w| w[0] <= w[1]) && omegas.last() == Some(m.kraft_sum()), || {
            format!("machine\n{m}Ω_t is not monotone or misses the Kraft sum")
        });
    }
    r
}

/// `compute_padding` against the linear scan.
pub fn padding(_bounds: &Bounds) -> Report {
    let mut r = Report::new("padding against linear scan");
    for n in 0..64 {
        for k in 0..64 {
            let p = compute_padding(n, k);
            let scan = oracle::padding_scan(n + k);
            r.case(p == scan, || format!("n = {n}, k = {k}: padding {p}, scan {scan}"));
        }
    }
    r
}

fn random_string_script(rng: &mut ChaCha8Rng) -> EnumerationScript {
    let horizon = rng.gen_range(1..=20);
    let events = (0..rng.gen_range(0..=12))
        .map(|_| Event::string(rng.gen_range(0..=horizon), 0, random_string(rng, 6)))
        .collect();
    EnumerationScript::new(events, horizon).expect("stages lie within the horizon")
}

/// The capped enumeration stays under `1 − 1/n` at every stage, equals `W`
/// when the cap never binds, and is empty for `n = 1`.
pub fn capped_enumeration(bounds: &Bounds) -> Report {
    let mut r = Report::new("measure-capped enumeration");
    let mut rng = bounds.rng(5);
    for _ in 0..bounds.scripts {
        let script = random_string_script(&mut rng);
        for n in 1..=8u64 {
            let capped = measure_capped_enumeration(&script, 0, n).expect("string script");
            for (s, set) in capped.stages.iter().enumerate() {
                let strings: Vec<BitString> = set.iter().cloned().collect();
                let measure = oracle::measure_by_counting(&strings, 6);
                let w = script.stage_strings(0, s).expect("string script");
                r.case(measure.le_ratio(n - 1, n) && set.is_subset(&w), || {
                    format!("script\n{script}n = {n}, stage {s}: Ŵ = {} has measure {measure}", show(&strings))
                });
                if n == 1 {
                    r.case(set.is_empty(), || format!("script\n{script}n = 1, stage {s}: Ŵ is not empty"));
                }
                if capped.frozen_at.is_none() {
                    r.case(*set == w, || format!("script\n{script}n = {n}, stage {s}: cap never bound but Ŵ ≠ W"));
                }
            }
        }
    }
    r
}

/// A random tree of the given depth; with `spine`, some node reaches the
/// full depth.
fn random_tree(rng: &mut ChaCha8Rng, depth: usize, keep: f64, spine: bool) -> Tree {
    let mut nodes = BTreeSet::from([BitString::new()]);
    let mut frontier = vec![BitString::new()];
    while let Some(s) = frontier.pop() {
        if s.len() == depth {
            continue;
        }
        for bit in [false, true] {
            if rng.gen_bool(keep) {
                let child = s.child(bit);
                nodes.insert(child.clone());
                frontier.push(child);
            }
        }
    }
    if spine {
        let path = BitString::from_bits((0..depth).map(|_| rng.gen::<bool>()));
        nodes.extend(path.prefixes().collect::<Vec<_>>());
    }
    Tree::new(nodes, depth).expect("grown from the root")
}

/// Whether some length-`depth` extension of `tau` has all its prefixes in
/// the tree.
fn has_path_in_cone(tree: &Tree, tau: &BitString, depth: usize) -> bool {
    let free = depth - tau.len();
    (0..1u64 << free).any(|x| {
        let path = tau.concat(&BitString::from_u64(x, free));
        let inside = path.prefixes().all(|p| tree.contains(&p));
        inside
    })
}

/// Random suites meeting the preconditions of `diagonalize`; every graft
/// point carries a path of the result and none of its tree.
pub fn diagonalization(bounds: &Bounds) -> Report {
    let mut r = Report::new("diagonalization against trees");
    let mut rng = bounds.rng(6);
    let mut built = 0;
    while built < bounds.suites {
        let depth = rng.gen_range(2..=bounds.class_depth.max(2));
        let count = rng.gen_range(1..=8);
        let base = random_tree(&mut rng, depth, 0.6, true);
        let dead = base.dead_ends();
        if dead.len() < count {
            continue;
        }
        let mut trees = vec![base];
        for sigma in &dead[1..count] {
            // Resample until some dead end is comparable with σ_n.
            let tree = (0..200)
                .map(|_| random_tree(&mut rng, depth, 0.7, false))
                .find(|t| t.dead_ends().iter().any(|d| d.is_comparable(sigma)));
            match tree {
                Some(t) => trees.push(t),
                None => break,
            }
        }
        if trees.len() < count {
            continue;
        }
        built += 1;
        match diagonalize(&trees, depth) {
            Ok(out) => {
                for (n, tau) in out.grafts.iter().enumerate() {
                    let ours = has_path_in_cone(&out.tree, tau, depth);
                    let theirs = has_path_in_cone(&trees[n], tau, depth);
                    r.case(ours && !theirs, || {
                        format!(
                            "depth {depth}, {count} trees, n = {n}, τ = {}: result has a path {ours}, T_n has a path {theirs}",
                            tau.field()
                        )
                    });
                }
            }
            Err(e) => r.fail(format!("depth {depth}, {count} trees meeting the preconditions: {e}")),
        }
    }
    r
}

/// Paths and rightmost paths of random trees against the prefix check and
/// depth-first search.
pub fn tree_paths(bounds: &Bounds) -> Report {
    let mut r = Report::new("tree paths against prefix check");
    let mut rng = bounds.rng(7);
    for _ in 0..bounds.suites {
        let depth = rng.gen_range(0..=8);
        let spine = rng.gen_bool(0.5);
        let tree = random_tree(&mut rng, depth, 0.65, spine);
        for d in 0..=depth {
            let paths = tree.paths_at_depth(d).expect("d within depth");
            r.case(paths == oracle::paths_by_prefix_check(&tree, d), || format!("tree\n{tree}paths at {d} differ"));
            r.case(tree.rightmost_path(d) == oracle::rightmost_path_dfs(&tree, d), || {
                format!("tree\n{tree}rightmost path at {d} differs")
            });
        }
    }
    r
}

/// Every scenario of the library runs monotone and safe.
pub fn scenario_safety() -> Report {
    let mut r = Report::new("scenario library safety");
    for s in scenarios::library() {
        let verdict = s.verify();
        r.case(verdict.is_ok(), || verdict.unwrap_err());
    }
    r
}

/// Up to 16 sets drawn from the first eight strings; about a third of the
/// indices repeat an earlier index, possibly later.
fn random_second_family(rng: &mut ChaCha8Rng, horizon: usize, count: usize) -> EnumerationScript {
    let settle = horizon * 2 / 3;
    let mut per_index: Vec<Vec<(usize, BitString)>> = Vec::new();
    for e in 0..count {
        let events = if e > 0 && rng.gen_bool(0.35) {
            let d = rng.gen_range(0..e);
            let delay = rng.gen_range(0..=3);
            per_index[d].iter().map(|(s, w)| ((s + delay).min(settle), w.clone())).collect()
        } else {
            (0..rng.gen_range(0..=4))
                .map(|_| (rng.gen_range(0..=settle), BitString::from_shortlex_index(rng.gen_range(0..8))))
                .collect()
        };
        per_index.push(events);
    }
    let events = per_index
        .iter()
        .enumerate()
        .flat_map(|(e, evs)| evs.iter().map(move |(s, w)| Event::string(*s, e, w.clone())))
        .collect();
    EnumerationScript::new(events, horizon).expect("events settle before the horizon")
}

/// Merges of the odd-size sets with random second families: the outputs at
/// the horizon are pairwise distinct and are exactly the listed and consumed
/// odd-size sets together with the second family's sets.
pub fn merge_contract(bounds: &Bounds) -> Report {
    let mut r = Report::new("merge contract");
    let mut rng = bounds.rng(8);
    let mut diversions = 0;
    for _ in 0..bounds.merges {
        let count = rng.gen_range(0..=16);
        let horizon = rng.gen_range(count.max(5)..=100);
        let l2 = random_second_family(&mut rng, horizon, count);
        let out = match friedberg_merge(&OddSizeFamily, &l2, &mut OddSizePicker { limit: 1 << 16 }, horizon) {
            Ok(out) => out,
            Err(e) => {
                r.fail(format!("second family\n{l2}horizon {horizon}: {e}"));
                continue;
            }
        };
        let finals = out.final_sets();
        let distinct: BTreeSet<&StringSet> = finals.iter().collect();
        r.case(distinct.len() == finals.len(), || format!("second family\n{l2}horizon {horizon}: repeated output"));
        let mut expected: BTreeSet<StringSet> = (0..out.listed_through)
            .map(|i| OddSizeFamily.member(i).expect("infinite family"))
            .collect();
        for e in 0..l2.index_count() {
            expected.insert(l2.stage_strings(e, horizon).expect("string script"));
        }
        for o in &out.origins {
            if let Origin::Diverted { l1, .. } = o {
                diversions += 1;
                expected.insert(OddSizeFamily.member(*l1).expect("infinite family"));
            }
        }
        let actual: BTreeSet<StringSet> = finals.into_iter().collect();
        r.case(actual == expected, || format!("second family\n{l2}horizon {horizon}: outputs differ from the union"));
    }
    if bounds.merges >= 20 && diversions == 0 {
        r.fail("no run diverted a follower".into());
    }
    r
}

/// Families climbing through the paths of a random tree: `β` is monotone,
/// stays on tree paths, and ends at the rightmost path found by depth-first
/// search.
pub fn beta_rightmost(bounds: &Bounds) -> Report {
    let mut r = Report::new("β against rightmost path");
    let mut rng = bounds.rng(10);
    for _ in 0..bounds.families {
        let depth = rng.gen_range(1..=10);
        let tree = random_tree(&mut rng, depth, 0.6, true);
        let paths: Vec<Dyadic> = tree
            .paths_at_depth(depth)
            .expect("full depth")
            .iter()
            .map(rational_of_string)
            .collect();
        let mut sorted = paths.clone();
        sorted.sort();
        let members = rng.gen_range(1..=6);
        let horizon = members + rng.gen_range(0..10);
        let top = rng.gen_range(0..members);
        let family: Vec<LeftCEApprox> = (0..members)
            .map(|e| {
                let mut at = rng.gen_range(0..sorted.len());
                let values = (0..=horizon)
                    .map(|s| {
                        if e == top && s == horizon {
                            at = sorted.len() - 1;
                        } else if rng.gen_bool(0.3) {
                            at = rng.gen_range(at..sorted.len());
                        }
                        sorted[at].clone()
                    })
                    .collect();
                LeftCEApprox::from_values(values).expect("climbs")
            })
            .collect();
        let beta = beta_max(&family, horizon).expect("members reach the horizon");
        let rightmost = oracle::rightmost_path_dfs(&tree, depth).map(|p| rational_of_string(&p));
        let values = beta.values();
        r.case(beta.is_monotone(), || format!("tree\n{tree}β descends"));
        r.case(values.iter().all(|v| paths.contains(v)), || format!("tree\n{tree}β leaves the paths"));
        r.case(values.last() == rightmost.as_ref(), || {
            format!("tree\n{tree}β ends at {:?}, rightmost path {rightmost:?}", values.last())
        });
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Bounds {
        Bounds {
            len: 6,
            depth: 3,
            subset_size: 3,
            class_depth: 6,
            ..Bounds::default()
        }
        .with_cases(30)
    }

    #[test]
    fn suites_pass_at_small_bounds() {
        for suite in Suite::ALL {
            for report in suite.run(&small()) {
                assert!(report.passed(), "{report}");
                assert!(report.cases > 0, "{report}");
            }
        }
    }

    #[test]
    fn mutant_is_caught_with_a_counterexample() {
        let bounds = Bounds {
            covering: mutant_covering,
            ..small()
        };
        let report = covering_equivalence(&bounds);
        assert!(!report.passed());
        assert!(report.counterexamples[0].starts_with("S = {"), "{report}");
    }

    #[test]
    fn suite_names_round_trip() {
        for suite in Suite::ALL {
            assert_eq!(suite.name().parse::<Suite>().unwrap(), suite);
        }
        assert!("nonsense".parse::<Suite>().is_err());
    }
}
