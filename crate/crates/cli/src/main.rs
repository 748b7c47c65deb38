use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use numberings::check::{self, Bounds, Suite};
use numberings::classes::{diagonalize, intersect_randomness, measure_capped_enumeration, Tree};
use numberings::complexity::PrefixMachine;
use numberings::constructions::recipes::{friedberg_left_ce, friedberg_random};
use numberings::constructions::{
    beta_max, friedberg_merge, hat_m_construction, odd_ones_real_enumeration, regret_construction, scenarios,
    splice_random, Direction, HatConfig, MergeOutcome, OddSizeFamily, OddSizePicker, Origin,
};
use numberings::coverings::{even_covering_family, odd_covering_family, parse_listing, star_construction};
use numberings::dyadic::{is_acceptable, optimal_covering, BitString};
use numberings::streams::{real_from_ce_set, EnumerationScript, LeftCEApprox, StringSet};
use numberings::Error;

#[derive(Parser)]
#[command(name = "numberings", version, about = "Run numbering constructions on scripted inputs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one construction to a horizon and print its stage output.
    Run(RunArgs),
    /// Compare the library against brute-force oracles.
    Check(CheckArgs),
    /// Write every library scenario as a fixture directory under DIR.
    Scenarios { dir: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Construction {
    Splice,
    HatM,
    Regret,
    Beta,
    Merge,
    FriedbergLce,
    FriedbergRandom,
    Capped,
    Diagonalize,
    Intersect,
    ClassTree,
    Star,
    Cover,
    OddOnes,
    Coverings,
}

#[derive(Args)]
struct RunArgs {
    construction: Construction,
    /// Enumeration script: `stage<TAB>index<TAB>str|dyadic<TAB>payload`.
    #[arg(long)]
    script: Option<PathBuf>,
    /// Machine file: `code<TAB>output<TAB>halt_stage`.
    #[arg(long)]
    machine: Option<PathBuf>,
    /// Tree file, one node per line; repeat for diagonalize.
    #[arg(long = "tree")]
    trees: Vec<PathBuf>,
    /// Listing file, one string per line.
    #[arg(long)]
    listing: Option<PathBuf>,
    /// Last stage; defaults to the input's last stage.
    #[arg(long)]
    horizon: Option<usize>,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long, default_value_t = 0)]
    c: usize,
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Measure cap `1 − 1/n`.
    #[arg(long, default_value_t = 2)]
    n: u64,
    /// Number of leading ones before Ω in the m̂ boundary.
    #[arg(long, default_value_t = 0)]
    ones: usize,
    /// Keep m̂ above the boundary instead of below.
    #[arg(long)]
    above: bool,
    #[arg(long, default_value_t = 0)]
    index: usize,
    #[arg(long, default_value_t = 0)]
    c_hat: usize,
    #[arg(long, default_value_t = 0)]
    c_tilde: usize,
    /// Output slots available to regret.
    #[arg(long)]
    slots: Option<usize>,
    /// Members listed by odd-ones and coverings.
    #[arg(long, default_value_t = 16)]
    count: usize,
    /// List the even coverings instead of the odd ones.
    #[arg(long)]
    even: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteName {
    Dyadic,
    Coverings,
    Complexity,
    Constructions,
    Classes,
}

impl From<SuiteName> for Suite {
    fn from(s: SuiteName) -> Suite {
        match s {
            SuiteName::Dyadic => Suite::Dyadic,
            SuiteName::Coverings => Suite::Coverings,
            SuiteName::Complexity => Suite::Complexity,
            SuiteName::Constructions => Suite::Constructions,
            SuiteName::Classes => Suite::Classes,
        }
    }
}

#[derive(Args)]
struct CheckArgs {
    suite: SuiteName,
    /// Longest string in the round-trip suite.
    #[arg(long)]
    len: Option<usize>,
    /// Depth of the exhaustive covering comparison.
    #[arg(long)]
    depth: Option<usize>,
    /// Number of random cases per check.
    #[arg(long)]
    cases: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Replace the optimal covering with a version that never merges siblings.
    #[arg(long)]
    inject_mutant: bool,
}

enum Failure {
    Usage(String),
    Io(PathBuf, std::io::Error),
    Library(Option<PathBuf>, Error),
    Check,
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Check => 1,
            Failure::Library(_, e) if !e.is_input_error() => 3,
            _ => 2,
        }
    }

    fn report(&self) {
        let message = match self {
            Failure::Usage(m) => format!("error: {m}"),
            Failure::Io(path, e) => format!("error: {}: {e}", path.display()),
            Failure::Library(Some(path), e) => format!("error[{}]: {}: {e}", e.code(), path.display()),
            Failure::Library(None, e) => format!("error[{}]: {e}", e.code()),
            Failure::Check => return,
        };
        eprintln!("numberings: {message}");
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(None, e)
    }
}

type Outcome<T> = Result<T, Failure>;

fn read(path: &Path) -> Outcome<String> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_owned(), e))
}

fn load<T>(path: &Option<PathBuf>, flag: &str, parse: impl FnOnce(&str) -> numberings::Result<T>) -> Outcome<T> {
    let path = path.as_ref().ok_or_else(|| Failure::Usage(format!("this construction needs --{flag}")))?;
    parse(&read(path)?).map_err(|e| Failure::Library(Some(path.clone()), e))
}

impl RunArgs {
    fn script(&self) -> Outcome<EnumerationScript> {
        let script = load(&self.script, "script", |t| t.parse::<EnumerationScript>())?;
        Ok(match self.horizon {
            Some(h) => script.with_horizon(h),
            None => script,
        })
    }

    fn machine(&self) -> Outcome<PrefixMachine> {
        let m = load(&self.machine, "machine", |t| t.parse::<PrefixMachine>())?;
        Ok(m.with_constants(self.c_hat, self.c_tilde))
    }

    fn tree(&self, path: &Path) -> Outcome<Tree> {
        Tree::parse(&read(path)?, self.depth).map_err(|e| Failure::Library(Some(path.to_owned()), e))
    }

    fn hat_config(&self) -> HatConfig {
        HatConfig {
            k: self.k,
            ones: self.ones,
            direction: if self.above { Direction::Above } else { Direction::Below },
        }
    }

    fn require_depth(&self) -> Outcome<usize> {
        self.depth.ok_or_else(|| Failure::Usage("this construction needs --depth".into()))
    }
}

fn show_set(set: &StringSet) -> String {
    let words: Vec<String> = set.iter().map(BitString::field).collect();
    format!("{{{}}}", words.join(","))
}

fn show_merge(out: &MergeOutcome) -> String {
    let mut text = String::new();
    for (o, origin) in out.origins.iter().enumerate() {
        let origin = match origin {
            Origin::Listed { l1 } => format!("listed l1={l1}"),
            Origin::Diverted { l2, l1 } => format!("diverted l2={l2} l1={l1}"),
            Origin::Follower { l2 } => format!("follower l2={l2}"),
        };
        let _ = writeln!(text, "# output {o} {origin}");
    }
    text.push_str(&out.script.to_string());
    text
}

fn run(args: &RunArgs) -> Outcome<String> {
    let mut text = String::new();
    match args.construction {
        Construction::Splice => {
            let script = args.script()?;
            let real = real_from_ce_set(&script, args.index)?;
            let horizon = args.horizon.unwrap_or(script.horizon());
            text = splice_random(&real, &args.machine()?, args.c, horizon)?.to_tsv();
        }
        Construction::HatM => {
            let script = args.script()?;
            let real = real_from_ce_set(&script, args.index)?;
            text = hat_m_construction(&real, &args.machine()?, &args.hat_config(), script.horizon())?.to_tsv();
        }
        Construction::Regret => {
            let script = args.script()?;
            text = regret_construction(&script, &args.machine()?, args.c, script.horizon(), args.slots)?.to_tsv();
        }
        Construction::Beta => {
            let script = args.script()?;
            let family = (0..script.index_count())
                .map(|e| real_from_ce_set(&script, e))
                .collect::<numberings::Result<Vec<LeftCEApprox>>>()?;
            text = beta_max(&family, script.horizon())?.to_tsv();
        }
        Construction::Merge => {
            let script = args.script()?;
            let picker = &mut OddSizePicker { limit: 1 << 16 };
            text = show_merge(&friedberg_merge(&OddSizeFamily, &script, picker, script.horizon())?);
        }
        Construction::FriedbergLce => {
            let script = args.script()?;
            text = show_merge(&friedberg_left_ce(&script, args.require_depth()?, script.horizon())?);
        }
        Construction::FriedbergRandom => {
            let script = args.script()?;
            let out = friedberg_random(&script, &args.machine()?, &args.hat_config(), args.require_depth()?, script.horizon())?;
            text = show_merge(&out);
        }
        Construction::Capped => {
            let capped = measure_capped_enumeration(&args.script()?, args.index, args.n)?;
            for (s, set) in capped.stages.iter().enumerate() {
                let _ = writeln!(text, "{s}\t{}", show_set(set));
            }
            if let Some(s) = capped.frozen_at {
                let _ = writeln!(text, "# frozen at {s}");
            }
        }
        Construction::Diagonalize => {
            let trees = args.trees.iter().map(|p| args.tree(p)).collect::<Outcome<Vec<Tree>>>()?;
            let depth = args.depth.or(trees.first().map(Tree::depth)).unwrap_or(0);
            let out = diagonalize(&trees, depth)?;
            for (n, (sigma, tau)) in out.dead_ends.iter().zip(&out.grafts).enumerate() {
                let _ = writeln!(text, "# n {n} dead end {} graft {}", sigma.field(), tau.field());
            }
            text.push_str(&out.tree.to_string());
        }
        Construction::Intersect | Construction::ClassTree => {
            let machine = args.machine()?;
            let t = args.horizon.unwrap_or(machine.max_halt_stage().unwrap_or(0));
            let tree = match args.construction {
                Construction::Intersect => {
                    let path = args.trees.first().ok_or_else(|| Failure::Usage("intersect needs --tree".into()))?;
                    intersect_randomness(&args.tree(path)?, &machine, args.c, t)
                }
                _ => machine.randomness_class_tree(args.c, t, args.require_depth()?),
            };
            let _ = writeln!(text, "# measure {}", tree.path_measure());
            text.push_str(&tree.to_string());
        }
        Construction::Star => {
            let listing = load(&args.listing, "listing", parse_listing)?;
            let horizon = args.horizon.unwrap_or(listing.len());
            for snap in star_construction(&listing, horizon) {
                let _ = writeln!(text, "{snap}");
            }
        }
        Construction::Cover => {
            let listing = load(&args.listing, "listing", parse_listing)?;
            let covering = optimal_covering(&listing);
            let _ = writeln!(text, "covering\t{covering}");
            let _ = writeln!(text, "measure\t{}", covering.measure());
            let _ = writeln!(text, "acceptable\t{}", is_acceptable(&listing));
        }
        Construction::OddOnes => {
            for i in 0..args.count {
                let _ = writeln!(text, "{i}\t{}", odd_ones_real_enumeration(i).field());
            }
        }
        Construction::Coverings => {
            let family = if args.even { even_covering_family } else { odd_covering_family };
            for i in 0..args.count {
                let _ = writeln!(text, "{i}\t{}", family(i));
            }
        }
    }
    Ok(text)
}

fn check(args: &CheckArgs) -> Outcome<String> {
    let mut bounds = Bounds::default();
    if let Some(n) = args.cases {
        bounds = bounds.with_cases(n);
    }
    if let Some(len) = args.len {
        bounds.len = len;
    }
    if let Some(depth) = args.depth {
        if depth > 8 {
            return Err(Failure::Usage(format!("--depth {depth} is past the oracle limit of 8")));
        }
        bounds.depth = depth;
    }
    if let Some(seed) = args.seed {
        bounds.seed = seed;
    }
    if args.inject_mutant {
        bounds.covering = check::mutant_covering;
    }
    let reports = Suite::from(args.suite).run(&bounds);
    let text: String = reports.iter().map(|r| format!("{r}\n")).collect();
    if reports.iter().all(|r| r.passed()) {
        Ok(text)
    } else {
        print!("{text}");
        Err(Failure::Check)
    }
}

fn write_file(path: &Path, text: &str) -> Outcome<()> {
    fs::write(path, text).map_err(|e| Failure::Io(path.to_owned(), e))
}

fn export_scenarios(dir: &Path) -> Outcome<String> {
    let mut text = String::new();
    for s in scenarios::library() {
        let sub = dir.join(s.name);
        fs::create_dir_all(&sub).map_err(|e| Failure::Io(sub.clone(), e))?;
        write_file(&sub.join("script.tsv"), s.script)?;
        write_file(&sub.join("machine.tsv"), s.machine)?;
        write_file(&sub.join("args"), &(s.cli_args(".").join("\n") + "\n"))?;
        write_file(&sub.join("expected.tsv"), &s.expected_output()?)?;
        let _ = writeln!(text, "{}", sub.display());
    }
    Ok(text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, output) = match &cli.command {
        Command::Run(args) => (run(args), args.output.as_deref()),
        Command::Check(args) => (check(args), None),
        Command::Scenarios { dir } => (export_scenarios(dir), None),
    };
    let written = result.and_then(|text| match output {
        Some(path) => write_file(path, &text),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(PathBuf::from("<stdout>"), e)),
    });
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            f.report();
            ExitCode::from(f.exit_code())
        }
    }
}
