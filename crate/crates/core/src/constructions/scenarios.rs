//! A fixed library of small scripted runs of the Ω-tail constructions, with
//! their safety checks.
//!
//! Every scenario is stored as text in the same formats the command line
//! reads, so the library doubles as a fixture set.

use super::{
    hat_m_construction, regret_construction, splice_random, Direction, HatConfig, RegretOutcome, StageTrace,
    StageValue, State, Trigger,
};
use crate::complexity::{compute_padding, PrefixMachine};
use crate::dyadic::BitString;
use crate::error::Result;
use crate::oracle;
use crate::streams::{real_from_ce_set, EnumerationScript, LeftCEApprox};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Kind {
    Splice { c: usize },
    HatM(HatConfig),
    Regret { c: usize },
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: &'static str,
    pub kind: Kind,
    /// Script of dyadic reals; splice and m̂ read index 0.
    pub script: &'static str,
    /// Machine file.
    pub machine: &'static str,
    /// Value of `c̃`, passed on the command line.
    pub c_tilde: usize,
    pub horizon: usize,
}

/// Outcome of one scenario run.
#[derive(Clone, Debug)]
pub struct ScenarioRun {
    pub traces: Vec<StageTrace>,
    pub regret: Option<RegretOutcome>,
}

impl Scenario {
    pub fn parsed_script(&self) -> Result<EnumerationScript> {
        Ok(self.script.parse::<EnumerationScript>()?.with_horizon(self.horizon))
    }

    pub fn parsed_machine(&self) -> Result<PrefixMachine> {
        Ok(self.machine.parse::<PrefixMachine>()?.with_constants(0, self.c_tilde))
    }

    fn real(&self) -> Result<LeftCEApprox> {
        real_from_ce_set(&self.parsed_script()?, 0)
    }

    pub fn run(&self) -> Result<ScenarioRun> {
        let machine = self.parsed_machine()?;
        Ok(match &self.kind {
            Kind::Splice { c } => ScenarioRun {
                traces: vec![splice_random(&self.real()?, &machine, *c, self.horizon)?],
                regret: None,
            },
            Kind::HatM(config) => ScenarioRun {
                traces: vec![hat_m_construction(&self.real()?, &machine, config, self.horizon)?],
                regret: None,
            },
            Kind::Regret { c } => {
                let out = regret_construction(&self.parsed_script()?, &machine, *c, self.horizon, None)?;
                ScenarioRun {
                    traces: out.traces.clone(),
                    regret: Some(out),
                }
            }
        })
    }

    /// Runs the scenario and checks monotonicity and the safety invariant of
    /// its construction; the error names the first violation.
    pub fn verify(&self) -> std::result::Result<ScenarioRun, String> {
        let run = self.run().map_err(|e| format!("{}: {e}", self.name))?;
        let machine = self.parsed_machine().map_err(|e| e.to_string())?;
        for (i, trace) in run.traces.iter().enumerate() {
            if let Some(s) = trace.first_descent() {
                return Err(format!("{}: trace {i} descends at stage {s}", self.name));
            }
        }
        let fail = |stage: usize, what: &str| Err(format!("{}: stage {stage}: {what}", self.name));
        match &self.kind {
            Kind::Splice { c } => {
                let real = self.real().map_err(|e| e.to_string())?;
                let mut switch: Option<(usize, BitString)> = None;
                for rec in run.traces[0].records() {
                    let s = rec.stage;
                    if let Some(Trigger::Failure { segment, .. }) = &rec.trigger {
                        switch = Some((s, segment.clone()));
                    }
                    match rec.state {
                        State::Waiting if !real.is_empty_at(s) => return fail(s, "waiting on a defined real"),
                        State::Tracking if rec.value != StageValue::Real(real.value(s).clone()) => {
                            return fail(s, "tracking value differs from r")
                        }
                        State::Spliced => {
                            let Some((t, sigma)) = &switch else {
                                return fail(s, "spliced without a failure");
                            };
                            if machine.satisfies_constant(sigma, *c, *t) {
                                return fail(s, "splice prefix did not fail at the switch");
                            }
                            if rec.value != StageValue::omega_tail(sigma.clone(), &machine, s) {
                                return fail(s, "spliced value is not σ⌢Ω_s");
                            }
                        }
                        _ => {}
                    }
                }
            }
            Kind::HatM(config) => {
                let k = config.k;
                for rec in run.traces[0].records() {
                    let s = rec.stage;
                    let boundary = StageValue::omega_tail(BitString::ones(config.ones), &machine, s).prefix(k);
                    let v = rec.value.prefix(k);
                    let strict = match config.direction {
                        Direction::Below => v < boundary,
                        Direction::Above => v > boundary,
                    };
                    let (extreme, first) = match config.direction {
                        Direction::Below => (BitString::zeros(k), false),
                        Direction::Above => (BitString::ones(k), true),
                    };
                    let initial = rec.state == State::Initial
                        && boundary == extreme
                        && rec.value == StageValue::omega_tail(BitString::from_bits([first]), &machine, s);
                    if !strict && !initial {
                        return fail(s, &format!("value prefix {v} is not on the wanted side of {boundary}"));
                    }
                }
            }
            Kind::Regret { c } => {
                let out = run.regret.as_ref().expect("regret runs keep their bindings");
                for (b, trace) in out.bindings.iter().zip(&out.traces) {
                    let Some((t1, p)) = b.regret else { continue };
                    let k = c + machine.c_tilde();
                    if p != compute_padding(b.n, k) || p != oracle::padding_scan(b.n + k) {
                        return fail(t1, &format!("slot {} padding {p} is not the least for n = {}", b.slot, b.n));
                    }
                    let log = (usize::BITS - 1 - p.leading_zeros()) as usize;
                    if p < b.n + k + 2 * log {
                        return fail(t1, "padding inequality fails");
                    }
                    for rec in &trace.records()[t1..] {
                        let prefix = rec.value.tail_prefix().cloned().unwrap_or_default();
                        let suffix_ok = prefix.len() == b.n + p && prefix.bits().skip(b.n).all(|bit| !bit);
                        if rec.state != State::Regretted || !suffix_ok {
                            return fail(rec.stage, &format!("slot {} lacks the 0^{p} suffix", b.slot));
                        }
                    }
                }
            }
        }
        Ok(run)
    }

    /// Command-line arguments reproducing this scenario from files named
    /// `script.tsv` and `machine.tsv` in `dir`.
    pub fn cli_args(&self, dir: &str) -> Vec<String> {
        let mut args = vec!["run".to_string()];
        let mut push = |s: String| args.push(s);
        match &self.kind {
            Kind::Splice { c } => {
                push("splice".into());
                push(format!("--c={c}"));
            }
            Kind::HatM(config) => {
                push("hat-m".into());
                push(format!("--k={}", config.k));
                push(format!("--ones={}", config.ones));
                if config.direction == Direction::Above {
                    push("--above".into());
                }
            }
            Kind::Regret { c } => {
                push("regret".into());
                push(format!("--c={c}"));
            }
        }
        push(format!("--script={dir}/script.tsv"));
        push(format!("--machine={dir}/machine.tsv"));
        push(format!("--c-tilde={}", self.c_tilde));
        push(format!("--horizon={}", self.horizon));
        args
    }

    /// Expected trace output of the command line.
    pub fn expected_output(&self) -> Result<String> {
        let run = self.run()?;
        Ok(match &run.regret {
            Some(regret) => regret.to_tsv(),
            None => run.traces[0].to_tsv(),
        })
    }
}

const SILENT: &str = "";
/// Code 0 prints 011 at stage 3; code 11 prints 1 at stage 9.
const COMPRESS_011: &str = "0\t011\t3\n11\t1\t9\n";

/// The fixed scenario library.
pub fn library() -> Vec<Scenario> {
    vec![
        Scenario {
            name: "splice-pass-through",
            kind: Kind::Splice { c: 0 },
            script: "0\t0\tdyadic\t1/4\n2\t0\tdyadic\t3/8\n5\t0\tdyadic\t7/16\n",
            machine: SILENT,
            c_tilde: 0,
            horizon: 8,
        },
        Scenario {
            name: "splice-high-constant",
            kind: Kind::Splice { c: 3 },
            script: "0\t0\tdyadic\t1/4\n2\t0\tdyadic\t3/8\n",
            machine: COMPRESS_011,
            c_tilde: 0,
            horizon: 10,
        },
        Scenario {
            name: "splice-permanent",
            kind: Kind::Splice { c: 0 },
            script: "0\t0\tdyadic\t1/4\n2\t0\tdyadic\t3/8\n",
            machine: COMPRESS_011,
            c_tilde: 0,
            horizon: 10,
        },
        Scenario {
            name: "splice-fail-recover",
            kind: Kind::Splice { c: 0 },
            script: "0\t0\tdyadic\t3/8\n5\t0\tdyadic\t1/2\n",
            machine: "0\t011\t3\n",
            c_tilde: 0,
            horizon: 8,
        },
        Scenario {
            name: "splice-waiting",
            kind: Kind::Splice { c: 1 },
            script: "3\t0\tdyadic\t5/8\n",
            machine: "00\t101\t2\n010\t1\t6\n",
            c_tilde: 0,
            horizon: 8,
        },
        Scenario {
            name: "hat-boundary-zero",
            kind: Kind::HatM(HatConfig::below(2)),
            script: "0\t0\tdyadic\t3/4\n",
            machine: "000\t-\t1\n0011\t-\t4\n",
            c_tilde: 0,
            horizon: 6,
        },
        Scenario {
            name: "hat-tracking",
            kind: Kind::HatM(HatConfig::below(2)),
            script: "0\t0\tdyadic\t0\n1\t0\tdyadic\t1/4\n3\t0\tdyadic\t5/8\n",
            machine: "1\t-\t0\n01\t-\t2\n",
            c_tilde: 0,
            horizon: 5,
        },
        Scenario {
            name: "hat-violation",
            kind: Kind::HatM(HatConfig::below(2)),
            script: "0\t0\tdyadic\t1/4\n2\t0\tdyadic\t1/2\n",
            machine: "1\t-\t0\n",
            c_tilde: 0,
            horizon: 6,
        },
        Scenario {
            name: "hat-recover",
            kind: Kind::HatM(HatConfig::below(2)),
            script: "0\t0\tdyadic\t1/2\n",
            machine: "1\t-\t0\n01\t-\t2\n",
            c_tilde: 0,
            horizon: 5,
        },
        Scenario {
            name: "hat-leaves-initial",
            kind: Kind::HatM(HatConfig::below(1)),
            script: "0\t0\tdyadic\t1/4\n",
            machine: "1\t-\t2\n",
            c_tilde: 0,
            horizon: 4,
        },
        Scenario {
            name: "hat-shifted-boundary",
            kind: Kind::HatM(HatConfig {
                k: 2,
                ones: 1,
                direction: Direction::Below,
            }),
            script: "0\t0\tdyadic\t1/4\n1\t0\tdyadic\t1/2\n",
            machine: "1\t-\t0\n",
            c_tilde: 0,
            horizon: 4,
        },
        Scenario {
            name: "hat-above",
            kind: Kind::HatM(HatConfig {
                k: 2,
                ones: 0,
                direction: Direction::Above,
            }),
            script: "0\t0\tdyadic\t3/4\n2\t0\tdyadic\t7/8\n",
            machine: "1\t-\t0\n",
            c_tilde: 0,
            horizon: 4,
        },
        Scenario {
            name: "regret-none",
            kind: Kind::Regret { c: 0 },
            script: "0\t0\tdyadic\t1/2\n1\t1\tdyadic\t3/4\n",
            machine: SILENT,
            c_tilde: 0,
            horizon: 5,
        },
        Scenario {
            name: "regret-permanent",
            kind: Kind::Regret { c: 0 },
            script: "0\t0\tdyadic\t3/4\n0\t1\tdyadic\t1/4\n",
            machine: "0\t11\t2\n",
            c_tilde: 0,
            horizon: 6,
        },
        Scenario {
            name: "regret-padding",
            kind: Kind::Regret { c: 0 },
            script: "0\t0\tdyadic\t5/8\n3\t0\tdyadic\t3/4\n",
            machine: "0\t10\t2\n",
            c_tilde: 3,
            horizon: 7,
        },
        Scenario {
            name: "regret-duplicates",
            kind: Kind::Regret { c: 1 },
            script: "0\t0\tdyadic\t5/8\n0\t1\tdyadic\t5/8\n0\t2\tdyadic\t5/8\n4\t2\tdyadic\t3/4\n",
            machine: "0\t101\t3\n",
            c_tilde: 1,
            horizon: 8,
        },
    ]
}
