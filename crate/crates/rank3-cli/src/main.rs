//! `rank3`: fixture inspection, torsion-rank verification, field certification,
//! enumeration and small class-group queries.
//!
//! Exit codes: 0 success, 1 the requested outcome was not reached (rank below
//! threshold, skipped candidate, failed check), 2 usage error, 3 runtime error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use rank3_core::arith::rational::format_rational;
use rank3_core::qform::CLASS_GROUP_BUDGET;
use rank3_core::specialize::{harness_windows, WindowSource};
use rank3_core::{
    certify_field, class_group_small, enumeration_harness, load_fixture, parse_rational, scholz_check, verify_torsion,
    CertificateStore, FactorEffort, FactorHints, FixtureSpec, HarnessConfig, PAdicWindow, StreamPolicy, FIXTURE_LABELS,
};

#[derive(Parser, Debug)]
#[command(name = "rank3", version, about = "Quadratic fields with large 3-rank from hyperelliptic 3-torsion")]
struct Cli {
    /// Print machine-readable JSON instead of a human table.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the built-in curve fixtures.
    Fixtures,
    /// Certify the 3-torsion rank of a fixture's section classes at good primes.
    VerifyTorsion(VerifyArgs),
    /// Certify a 3-rank lower bound for Q(√f(t)) at one t.
    Certify(CertifyArgs),
    /// Enumerate admissible t, certify and store the resulting fields.
    Enumerate(EnumerateArgs),
    /// Class group of a negative discriminant by reduced forms.
    Classgroup(ClassgroupArgs),
    /// Compare 3-ranks of Q(√d) and Q(√-3d) for squarefree d up to a bound.
    ScholzSweep(ScholzArgs),
}

#[derive(Args, Debug)]
struct CurveArgs {
    /// Fixture label: f1, f2, f3, f4, f5, deg30, mestre-u2, f3-constructed (or f1(a), f2(a,b)).
    #[arg(long)]
    curve: String,
    /// Parameter a of the f1/f2 families.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    /// Parameter b of the f2 family.
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
}

impl CurveArgs {
    fn spec(&self) -> Result<FixtureSpec, String> {
        let label = match (self.curve.as_str(), &self.a, &self.b) {
            ("f1", Some(a), _) => format!("f1({a})"),
            ("f2", Some(a), Some(b)) => format!("f2({a},{b})"),
            ("f2", Some(a), None) => format!("f2({a},1)"),
            (c, _, _) => c.to_string(),
        };
        label.parse().map_err(|e: rank3_core::Error| e.to_string())
    }
}

#[derive(Args, Debug)]
struct EffortArgs {
    /// Trial-division bound for factorizations.
    #[arg(long, env = "RANK3_TRIAL_BOUND", default_value_t = 1_000_000)]
    trial_bound: u64,
    /// Pollard–Brent iterations per attempt.
    #[arg(long, env = "RANK3_RHO_ITERATIONS", default_value_t = 2_000_000)]
    rho_iterations: u64,
    /// Factor hints file: lines `n p1 p2 …`.
    #[arg(long)]
    hints: Option<PathBuf>,
}

impl EffortArgs {
    fn effort(&self) -> FactorEffort {
        FactorEffort { trial_bound: self.trial_bound, rho_iterations: self.rho_iterations, ..FactorEffort::default() }
    }

    fn hints(&self) -> Result<Option<FactorHints>, String> {
        self.hints.as_ref().map(|p| FactorHints::load(p).map_err(|e| e.to_string())).transpose()
    }
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    curve: CurveArgs,
    /// Number of good primes.
    #[arg(long, default_value_t = 2)]
    primes: usize,
    /// Smallest prime considered.
    #[arg(long, default_value_t = 50)]
    start: u64,
}

#[derive(Args, Debug)]
struct CertifyArgs {
    #[command(flatten)]
    curve: CurveArgs,
    /// Specialization value, `p/q`.
    #[arg(long, allow_hyphen_values = true)]
    t: String,
    /// Exit with 0 only if the certified rank reaches this value.
    #[arg(long, default_value_t = 1)]
    min_rank: u32,
    #[command(flatten)]
    effort: EffortArgs,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Windows {
    Real,
    Hypotheses,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Stream {
    Rational,
    Crt,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[command(flatten)]
    curve: CurveArgs,
    /// Height bound B.
    #[arg(long, default_value_t = 200)]
    height: u64,
    /// Certificate store (JSON lines).
    #[arg(long)]
    out: PathBuf,
    /// Resume cursor file.
    #[arg(long)]
    cursor: Option<PathBuf>,
    /// Wall-clock budget in seconds.
    #[arg(long, env = "RANK3_BUDGET_SECS", default_value_t = 1800)]
    budget_secs: u64,
    /// Window source: the negative real interval only, or the full local windows.
    #[arg(long, value_enum, default_value_t = Windows::Real)]
    windows: Windows,
    /// Keep only the local windows at these primes (comma separated).
    #[arg(long, value_delimiter = ',')]
    window_primes: Option<Vec<u64>>,
    /// Candidate stream: rationals by height, or CRT integers. Defaults to
    /// rational for real windows and crt for the local windows.
    #[arg(long, value_enum)]
    stream: Option<Stream>,
    /// Candidates per parallel batch.
    #[arg(long, default_value_t = 64)]
    batch: usize,
    #[command(flatten)]
    effort: EffortArgs,
}

#[derive(Args, Debug)]
struct ClassgroupArgs {
    /// Discriminant (negative).
    #[arg(short = 'D', long = "discriminant", allow_hyphen_values = true)]
    d: i64,
}

#[derive(Args, Debug)]
struct ScholzArgs {
    /// Largest d.
    #[arg(long, default_value_t = 2000)]
    max: i64,
}

/// Outcome of a subcommand: success, a negative answer, or an error.
enum Outcome {
    Ok,
    NotReached,
}

fn emit<T: Serialize>(json: bool, value: &T, human: impl FnOnce()) {
    if json {
        println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
    } else {
        human();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::NotReached) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome, String> {
    match &cli.command {
        Command::Fixtures => fixtures(cli.json),
        Command::VerifyTorsion(a) => verify(cli.json, a),
        Command::Certify(a) => certify(cli.json, a),
        Command::Enumerate(a) => enumerate(cli.json, a),
        Command::Classgroup(a) => classgroup(cli.json, a),
        Command::ScholzSweep(a) => scholz(cli.json, a),
    }
}

#[derive(Serialize)]
struct FixtureRow {
    label: String,
    degree: usize,
    genus: usize,
    sections: usize,
    notes: Vec<String>,
}

fn fixtures(json: bool) -> Result<Outcome, String> {
    let mut rows = Vec::new();
    for label in FIXTURE_LABELS {
        let spec: FixtureSpec = label.parse().map_err(|e: rank3_core::Error| e.to_string())?;
        let fx = load_fixture(&spec).map_err(|e| e.to_string())?;
        rows.push(FixtureRow {
            label: fx.label.clone(),
            degree: fx.degree(),
            genus: fx.genus(),
            sections: fx.points.len(),
            notes: fx.notes.clone(),
        });
    }
    emit(json, &rows, || {
        println!("{:<16} {:>6} {:>6} {:>9}", "fixture", "degree", "genus", "sections");
        for r in &rows {
            println!("{:<16} {:>6} {:>6} {:>9}", r.label, r.degree, r.genus, r.sections);
        }
    });
    Ok(Outcome::Ok)
}

fn verify(json: bool, a: &VerifyArgs) -> Result<Outcome, String> {
    let fx = load_fixture(&a.curve.spec()?).map_err(|e| e.to_string())?;
    let report = verify_torsion(&fx, a.primes, a.start).map_err(|e| e.to_string())?;
    emit(json, &report, || {
        println!("fixture {}  degree {}  genus {}  classes {}", report.label, report.degree, report.genus, report.classes);
        println!("{:>8} {:>5}  relations", "prime", "rank");
        for r in &report.reports {
            println!("{:>8} {:>5}  {}", r.prime, r.rank, if r.relations.is_empty() { "-".into() } else { r.relations.join(" ") });
        }
        println!("certified rank {} at primes {:?} ({})", report.rank(), report.primes(), if report.stable() { "stable" } else { "UNSTABLE" });
    });
    Ok(if report.stable() { Outcome::Ok } else { Outcome::NotReached })
}

fn certify(json: bool, a: &CertifyArgs) -> Result<Outcome, String> {
    let t = parse_rational(&a.t).map_err(|e| format!("malformed t {:?}: {e}", a.t))?;
    let fx = load_fixture(&a.curve.spec()?).map_err(|e| e.to_string())?;
    let hints = a.effort.hints()?;
    match certify_field(&fx, &t, hints.as_ref(), &a.effort.effort()) {
        Ok(cert) => {
            let ok = cert.verify();
            emit(json, &cert, || {
                println!("fixture {}  t = {}", cert.fixture, format_rational(&cert.t));
                println!("f(t) = {}", format_rational(&cert.field.m));
                println!("D = {}  ({:?} level)", cert.field.discriminant, cert.field.level);
                for (i, f) in &cert.forms {
                    println!("  section {}: ({}, {}, {})", i + 1, f.a, f.b, f.c);
                }
                for s in &cert.skipped_sections {
                    println!("  skipped: {s}");
                }
                println!("certified 3-rank >= {}  (standalone re-verification: {})", cert.rank, if ok { "ok" } else { "FAILED" });
            });
            Ok(if ok && cert.rank >= a.min_rank { Outcome::Ok } else { Outcome::NotReached })
        }
        Err(skip) => {
            #[derive(Serialize)]
            struct Skipped {
                t: String,
                skip: String,
            }
            let s = Skipped { t: format_rational(&t), skip: skip.to_string() };
            emit(json, &s, || println!("skipped t = {}: {}", s.t, s.skip));
            Ok(Outcome::NotReached)
        }
    }
}

fn enumerate(json: bool, a: &EnumerateArgs) -> Result<Outcome, String> {
    let fx = load_fixture(&a.curve.spec()?).map_err(|e| e.to_string())?;
    let effort = a.effort.effort();
    let (source, policy) = match a.windows {
        Windows::Real => (WindowSource::Real, StreamPolicy::Rational),
        Windows::Hypotheses => (WindowSource::Hypotheses, StreamPolicy::Crt),
    };
    let policy = match a.stream {
        Some(Stream::Rational) => StreamPolicy::Rational,
        Some(Stream::Crt) => StreamPolicy::Crt,
        None => policy,
    };
    let mut windows = harness_windows(&fx, source, &effort).map_err(|e| e.to_string())?;
    if let Some(keep) = &a.window_primes {
        windows.retain(|w| match w {
            PAdicWindow::Finite { p, .. } => keep.iter().any(|q| *p == (*q).into()),
            PAdicWindow::Real { .. } => true,
        });
    }
    let cfg = HarnessConfig {
        bound: a.height,
        budget: Duration::from_secs(a.budget_secs),
        windows,
        policy,
        effort,
        hints: a.effort.hints()?,
        cursor: a.cursor.clone(),
        batch: a.batch,
    };
    let mut store = CertificateStore::open(&a.out).map_err(|e| e.to_string())?;
    let s = enumeration_harness(&fx, &cfg, &mut store).map_err(|e| e.to_string())?;
    emit(json, &s, || {
        println!("fixture {}  B = {}  candidates {}  processed {} (from {})", s.fixture, s.bound, s.candidates, s.processed, s.resumed_from);
        println!("new certificates {}  duplicates {}  completed {}", s.new_certificates, s.duplicates, s.completed);
        for (reason, n) in &s.skips {
            println!("  skipped {n:>6}: {reason}");
        }
        println!("distinct fields in store by certified rank:");
        for (r, n) in &s.fields_by_rank {
            println!("  rank >= {r}: {n}");
        }
        println!("by decade of |D| (exact rank: count):");
        for (d, m) in &s.fields_by_decade {
            let cells: Vec<String> = m.iter().map(|(r, n)| format!("{r}:{n}")).collect();
            println!("  10^{d:<3} {}", cells.join("  "));
        }
        println!("domination checks {} (failures {})", s.domination_checked, s.domination_failures.len());
        for nm in &s.near_misses {
            println!("  near miss t = {}: order-level rank {} (cofactor of {} digits unfactored)", nm.t, nm.rank, nm.cofactor_digits);
        }
    });
    Ok(if s.domination_failures.is_empty() { Outcome::Ok } else { Outcome::NotReached })
}

fn classgroup(json: bool, a: &ClassgroupArgs) -> Result<Outcome, String> {
    if a.d >= 0 {
        #[derive(Serialize)]
        struct Unsupported {
            discriminant: i64,
            unsupported: String,
        }
        let u = Unsupported { discriminant: a.d, unsupported: "only negative discriminants are supported".into() };
        emit(json, &u, || println!("D = {}: unsupported (only negative discriminants)", a.d));
        return Ok(Outcome::NotReached);
    }
    let g = class_group_small(a.d, CLASS_GROUP_BUDGET).map_err(|e| e.to_string())?;
    emit(json, &g, || {
        let structure = if g.invariants.is_empty() {
            "trivial".to_string()
        } else {
            g.invariants.iter().map(|n| format!("Z/{n}")).collect::<Vec<_>>().join(" x ")
        };
        println!("D = {}  h = {}  structure {}  3-rank {}", g.discriminant, g.class_number(), structure, g.three_rank);
    });
    Ok(Outcome::Ok)
}

fn scholz(json: bool, a: &ScholzArgs) -> Result<Outcome, String> {
    #[derive(Serialize)]
    struct Sweep {
        max: i64,
        checked: usize,
        equal: usize,
        imaginary_one_more: usize,
        violations: Vec<rank3_core::qform::ScholzReport>,
    }
    let mut sweep = Sweep { max: a.max, checked: 0, equal: 0, imaginary_one_more: 0, violations: Vec::new() };
    for d in 2..=a.max {
        let Ok(r) = scholz_check(d, CLASS_GROUP_BUDGET) else { continue };
        sweep.checked += 1;
        match r.difference {
            0 => sweep.equal += 1,
            1 => sweep.imaginary_one_more += 1,
            _ => sweep.violations.push(r),
        }
    }
    emit(json, &sweep, || {
        println!("squarefree d in [2, {}]: {} checked", sweep.max, sweep.checked);
        println!("  r3(Q(√-3d)) = r3(Q(√d)):     {}", sweep.equal);
        println!("  r3(Q(√-3d)) = r3(Q(√d)) + 1: {}", sweep.imaginary_one_more);
        println!("  violations: {}", sweep.violations.len());
    });
    Ok(if sweep.violations.is_empty() { Outcome::Ok } else { Outcome::NotReached })
}
