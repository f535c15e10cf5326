//! `frey`: batch driver for the Frey hyperelliptic toolkit. Every run prints
//! (or writes) a JSON artifact carrying the configuration and all outputs.

use clap::{Args, Parser, Subcommand, ValueEnum};
use frey::curves::{
    closed_form_discriminant, curve_discriminant, frey_curve, legendre_companion, specialization, twist_class,
};
use frey::cyclofield::{CycloRealField, KElement};
use frey::elimination::{
    self, bounds::TRIAL_BOUND, load_fixtures, refined_eliminate, save_fixtures, survivors, BoundConfig, CaseMode,
    ClassFilter, GaloisSubset, RefinedConfig, SurvivorSet, TraceStore, TwistMode,
};
use frey::freypoly::identity_suite;
use frey::frobenius::trace_set;
use frey::localdata::{classify_prime, irreducibility_report, semistable_congruences, serre_level};
use frey::{FreyError, Result};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "frey", version, about = "Frey hyperelliptic curves for x^r + y^r = d z^p and newform elimination")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Serialize)]
struct Common {
    /// worker threads (default: all cores)
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// write the JSON artifact here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Run the polynomial identity suite for every prime r up to r-max
    Verify {
        #[arg(long, default_value_t = 31)]
        r_max: u64,
    },
    /// Build C_r(a, b) and its invariants
    Curve(CurveArgs),
    /// Reduction types, conductor exponents, Serre level and irreducibility data
    Classify(ClassifyArgs),
    /// Frobenius trace sets at the primes above q
    Traces(TracesArgs),
    /// Write the CM newform fixture attached to J_r(0, 1)
    CmFixture(CmArgs),
    /// Bounds N, M, B and surviving exponents p for newform fixtures
    Eliminate(EliminateArgs),
    /// Refined elimination of one exponent p
    Refined(RefinedArgs),
}

#[derive(Args, Debug, Serialize)]
struct CurveArgs {
    #[arg(long)]
    r: u64,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(serialize_with = "as_string")]
    a: BigInt,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(serialize_with = "as_string")]
    b: BigInt,
}

#[derive(Args, Debug, Serialize)]
struct ClassifyArgs {
    #[arg(long)]
    r: u64,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(serialize_with = "as_string")]
    a: BigInt,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(serialize_with = "as_string")]
    b: BigInt,
    #[arg(long, default_value = "1")]
    #[serde(serialize_with = "as_string")]
    d: BigInt,
    /// primes to classify (default: 2, r and the primes dividing a^r + b^r below 10^6)
    #[arg(long, value_delimiter = ',')]
    q_list: Option<Vec<u64>>,
    /// g-1 units of O_K as coordinate lists over 1, omega, ...: "c0,c1,..;c0,c1,.."
    #[arg(long)]
    units: Option<String>,
}

#[derive(Args, Debug, Serialize)]
struct TracesArgs {
    #[arg(long)]
    r: u64,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(serialize_with = "as_string")]
    a: BigInt,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(serialize_with = "as_string")]
    b: BigInt,
    #[arg(long, conflicts_with = "q_list")]
    q: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    q_list: Option<Vec<u64>>,
}

#[derive(Args, Debug, Serialize)]
struct CmArgs {
    #[arg(long)]
    r: u64,
    #[arg(long, value_delimiter = ',', required = true)]
    q_list: Vec<u64>,
    /// destination of the fixture file
    #[arg(long)]
    fixtures: PathBuf,
}

#[derive(Copy, Clone, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum TwistArg {
    Plain,
    #[value(name = "chi_r")]
    ChiR,
}

#[derive(Copy, Clone, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum ClassArg {
    All,
    Nontrivial,
}

#[derive(Args, Debug, Serialize)]
struct EliminateArgs {
    #[arg(long)]
    fixtures: PathBuf,
    #[arg(long, value_delimiter = ',', required = true)]
    q_list: Vec<u64>,
    /// expected r (checked against the fixtures)
    #[arg(long)]
    r: Option<u64>,
    #[arg(long, default_value = "1")]
    #[serde(serialize_with = "as_string")]
    d: BigInt,
    /// Galois indices j of sigma_j, comma separated, or "full"
    #[arg(long, default_value = "full")]
    subset: String,
    #[arg(long, value_enum, default_value = "plain")]
    twist: TwistArg,
    #[arg(long, value_enum, default_value = "all")]
    classes: ClassArg,
    /// primes reported separately as excluded by external results (default: 2, 3, r)
    #[arg(long, value_delimiter = ',')]
    exclude: Option<Vec<u64>>,
}

#[derive(Copy, Clone, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum CaseArg {
    Plain,
    #[value(name = "both_twists")]
    BothTwists,
    #[value(name = "chi_r")]
    ChiR,
}

#[derive(Args, Debug, Serialize)]
struct RefinedArgs {
    #[arg(long)]
    fixtures: PathBuf,
    #[arg(long)]
    p: u64,
    #[arg(long)]
    q: u64,
    #[arg(long, value_enum, default_value = "plain")]
    case: CaseArg,
    #[arg(long, default_value = "1")]
    #[serde(serialize_with = "as_string")]
    d: BigInt,
    /// skip the level-raising screen at q
    #[arg(long)]
    no_screen: bool,
}

fn as_string<S: serde::Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn to_json<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable output")
}

fn parse_units(spec: &str, field: &CycloRealField) -> Result<Vec<KElement>> {
    spec.split(';')
        .map(|u| {
            let coords = u
                .split(',')
                .map(|c| c.trim().parse::<i64>().map_err(|_| FreyError::invalid(format!("bad unit coordinate '{c}'"))))
                .collect::<Result<Vec<_>>>()?;
            if coords.len() != field.g {
                return Err(FreyError::InvalidUnit(format!("unit '{u}' needs {} coordinates", field.g)));
            }
            Ok(field.element(&coords))
        })
        .collect()
}

/// Outputs plus a human-readable summary, and whether a certificate failed.
struct Outcome {
    outputs: Value,
    summary: String,
    certificate_failure: Option<String>,
}

fn run_verify(r_max: u64) -> Result<Outcome> {
    let mut reports = Vec::new();
    let mut lines = Vec::new();
    let mut failed = Vec::new();
    for r in frey::arith::primes_up_to(r_max).into_iter().filter(|&r| r >= 3) {
        let rep = identity_suite(r)?;
        let ok = rep.all_passed();
        lines.push(format!("r = {r:>3}: {}", if ok { "all identities hold" } else { "FAILED" }));
        if !ok {
            failed.push(r);
        }
        reports.push(to_json(&rep));
    }
    Ok(Outcome {
        outputs: json!({ "reports": reports, "all_passed": failed.is_empty() }),
        summary: lines.join("\n"),
        certificate_failure: (!failed.is_empty()).then(|| format!("identity suite failed for r in {failed:?}")),
    })
}

fn run_curve(a: &CurveArgs) -> Result<Outcome> {
    let model = frey_curve(a.r, &a.a, &a.b)?;
    let disc = curve_discriminant(a.r, &a.a, &a.b)?;
    let closed = closed_form_discriminant(a.r, &a.a, &a.b);
    let spec = specialization(a.r, &a.a, &a.b)?;
    let twist = twist_class(a.r, &a.a, &a.b)?;
    let legendre = match legendre_companion(a.r, &a.a, &a.b) {
        Ok(l) => json!({
            "t0": l.t0.to_string(),
            "cubic": l.integral_model.f.to_string(),
            "j_invariant": l.j_invariant.to_string(),
        }),
        Err(e) => json!({ "unavailable": e.to_string() }),
    };
    let summary = format!("C_{}({}, {}): y^2 = {}\ndiscriminant = {}", a.r, a.a, a.b, model.f, disc);
    Ok(Outcome {
        outputs: json!({
            "model": model.f.to_string(),
            "coefficients": model.f.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "genus": model.genus,
            "discriminant": disc.to_string(),
            "closed_form_discriminant": closed.to_string(),
            "t0": spec.t0.to_string(),
            "s0_squared": spec.s0_squared.as_ref().map(|s| s.to_string()),
            "alpha_relation_holds": spec.alpha_relation_holds(),
            "interchange": to_json(&twist),
            "legendre": legendre,
        }),
        summary,
        certificate_failure: None,
    })
}

fn run_classify(a: &ClassifyArgs) -> Result<Outcome> {
    let field = CycloRealField::new(a.r)?;
    let qs = match &a.q_list {
        Some(v) => v.clone(),
        None => {
            let u = frey::arith::big_pow(&a.a, a.r) + frey::arith::big_pow(&a.b, a.r);
            let mut qs = vec![2, a.r];
            for p in frey::arith::primes_up_to(1_000_000) {
                if p != 2 && p != a.r && (&u % p) == BigInt::from(0) {
                    qs.push(p);
                }
            }
            qs
        }
    };
    let mut reports = Vec::new();
    let mut lines = Vec::new();
    for &q in &qs {
        let rep = classify_prime(a.r, &a.a, &a.b, q)?;
        lines.push(format!("q = {q}: {:?}, conductor exponent {}", rep.reduction, rep.conductor_exponent));
        reports.push(to_json(&rep));
    }
    let r_div = ((&a.a + &a.b) % a.r) == BigInt::from(0);
    let level = serre_level(a.r, &a.d, r_div)?;
    lines.push(format!("Serre level: {level}"));
    let units = a.units.as_deref().map(|s| parse_units(s, &field)).transpose()?;
    let irred = irreducibility_report(a.r, &a.a, &a.b, units.as_deref())?;
    let congruences = if r_div { Some(to_json(&semistable_congruences(a.r, &a.a, &a.b)?)) } else { None };
    let failure = congruences
        .as_ref()
        .filter(|c| c["checks"].as_array().is_some_and(|v| v.iter().any(|x| x["passed"] == json!(false))))
        .map(|_| "coefficient congruence battery failed".to_string());
    Ok(Outcome {
        outputs: json!({
            "reduction": reports,
            "serre_level": to_json(&level),
            "irreducibility": to_json(&irred),
            "congruences": congruences,
        }),
        summary: lines.join("\n"),
        certificate_failure: failure,
    })
}

fn run_traces(a: &TracesArgs) -> Result<Outcome> {
    let qs = match (&a.q, &a.q_list) {
        (Some(q), _) => vec![*q],
        (None, Some(v)) => v.clone(),
        (None, None) => return Err(FreyError::invalid("give --q or --q-list")),
    };
    let mut sets = Vec::new();
    let mut lines = Vec::new();
    for q in qs {
        let ts = trace_set(a.r, &a.a, &a.b, q)?;
        lines.push(format!("q = {q} (f = {}, Q = {}): {} distinct trace(s)", ts.f, ts.norm, ts.elements.len()));
        sets.push(to_json(&ts));
    }
    Ok(Outcome { outputs: json!({ "trace_sets": sets }), summary: lines.join("\n"), certificate_failure: None })
}

fn run_cm(a: &CmArgs) -> Result<Outcome> {
    let fx = elimination::cm_fixture(a.r, &a.q_list)?;
    elimination::validate(fx.clone())?;
    save_fixtures(&a.fixtures, std::slice::from_ref(&fx))?;
    Ok(Outcome {
        outputs: json!({ "fixture_path": a.fixtures.display().to_string(), "fixture": to_json(&fx) }),
        summary: format!("wrote {} with {} eigenvalues", a.fixtures.display(), fx.eigenvalues.len()),
        certificate_failure: None,
    })
}

fn run_eliminate(a: &EliminateArgs) -> Result<Outcome> {
    let fixtures = load_fixtures(&a.fixtures)?;
    if let Some(r) = a.r {
        if let Some(bad) = fixtures.iter().find(|f| f.r() != r) {
            return Err(FreyError::invalid(format!("fixture {} has r = {}, expected {r}", bad.label(), bad.r())));
        }
    }
    let r = fixtures.first().map(|f| f.r()).ok_or_else(|| FreyError::invalid("no fixtures"))?;
    let cfg = BoundConfig {
        subset: a.subset.parse::<GaloisSubset>()?,
        twist: match a.twist {
            TwistArg::Plain => TwistMode::Plain,
            TwistArg::ChiR => TwistMode::ChiR,
        },
        d: a.d.clone(),
        class_filter: match a.classes {
            ClassArg::All => ClassFilter::All,
            ClassArg::Nontrivial => ClassFilter::NonTrivial,
        },
    };
    let exclude = a.exclude.clone().unwrap_or_else(|| vec![2, 3, r]);
    let store = TraceStore::new();
    let report = survivors(&fixtures, &a.q_list, &cfg, &exclude, &store)?;
    let mut lines = vec![format!("{:<28} {:>6} {:>10} {:>12}  survivors", "fixture", "q", "variant", "log2 B")];
    for fs in &report.fixtures {
        for qb in &fs.bounds {
            let bits = if qb.b == BigInt::from(0) { "0 (B = 0)".to_string() } else { qb.b.bits().to_string() };
            lines.push(format!("{:<28} {:>6} {:>10} {:>12}", fs.label, qb.q, format!("{:?}", qb.variant), bits));
        }
        let surv = match &fs.survivors {
            SurvivorSet::All => "ALL".to_string(),
            SurvivorSet::Primes { primes, unfactored } => {
                let mut s = format!("{primes:?}");
                if !unfactored.is_empty() {
                    s += &format!(" + {} unfactored part(s)", unfactored.len());
                }
                s
            }
        };
        let mut flags = Vec::new();
        if fs.cm_obstruction {
            flags.push("CM obstruction");
        }
        if fs.eliminated {
            flags.push("eliminated");
        }
        lines.push(format!("{:<28} survivors: {surv} {}", fs.label, flags.join(", ")));
    }
    Ok(Outcome {
        outputs: json!({ "report": to_json(&report), "trial_bound": TRIAL_BOUND }),
        summary: lines.join("\n"),
        certificate_failure: None,
    })
}

fn run_refined(a: &RefinedArgs) -> Result<Outcome> {
    let fixtures = load_fixtures(&a.fixtures)?;
    let cfg = RefinedConfig {
        case_mode: match a.case {
            CaseArg::Plain => CaseMode::Plain,
            CaseArg::BothTwists => CaseMode::BothTwists,
            CaseArg::ChiR => CaseMode::ChiR,
        },
        multiplicative_screen: !a.no_screen,
        d: a.d.clone(),
    };
    let store = TraceStore::new();
    let mut reports = Vec::new();
    let mut lines = Vec::new();
    for nf in &fixtures {
        let rep = refined_eliminate(nf, a.p, a.q, &cfg, &store)?;
        lines.push(format!(
            "{}: p = {} via q = {}: {:?}, accepted pairs {:?}",
            rep.label,
            rep.p,
            rep.q,
            rep.verdict,
            rep.accepted_pairs()
        ));
        reports.push(to_json(&rep));
    }
    Ok(Outcome { outputs: json!({ "reports": reports }), summary: lines.join("\n"), certificate_failure: None })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Verify { .. } => "verify",
        Command::Curve(_) => "curve",
        Command::Classify(_) => "classify",
        Command::Traces(_) => "traces",
        Command::CmFixture(_) => "cm-fixture",
        Command::Eliminate(_) => "eliminate",
        Command::Refined(_) => "refined",
    }
}

fn dispatch(c: &Command) -> Result<Outcome> {
    match c {
        Command::Verify { r_max } => run_verify(*r_max),
        Command::Curve(a) => run_curve(a),
        Command::Classify(a) => run_classify(a),
        Command::Traces(a) => run_traces(a),
        Command::CmFixture(a) => run_cm(a),
        Command::Eliminate(a) => run_eliminate(a),
        Command::Refined(a) => run_refined(a),
    }
}

fn exit_code(e: &FreyError) -> u8 {
    if e.is_certificate_failure() {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(w) = cli.common.workers {
        if w == 0 {
            eprintln!("error: --workers must be positive");
            return ExitCode::from(1);
        }
        let _ = rayon::ThreadPoolBuilder::new().num_threads(w).build_global();
    }
    let config = json!({ "command": to_json(&cli.command), "workers": cli.common.workers });
    let generated_at = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let (status, outputs, summary, error) = match dispatch(&cli.command) {
        Ok(o) => {
            let code = if o.certificate_failure.is_some() { 2 } else { 0 };
            (code, o.outputs, o.summary, o.certificate_failure)
        }
        Err(e) => {
            let invariant = e.invariant();
            let out = json!({ "error": e.to_string(), "invariant": invariant });
            (exit_code(&e), out, String::new(), Some(e.to_string()))
        }
    };
    let artifact = json!({
        "tool": "frey",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command_name(&cli.command),
        "config": config,
        "status": status,
        "outputs": outputs,
        "generated_at": generated_at,
    });
    let text = serde_json::to_string_pretty(&artifact).expect("json") + "\n";
    match &cli.common.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
            if !summary.is_empty() {
                println!("{summary}");
            }
        }
        None => {
            if !summary.is_empty() {
                eprintln!("{summary}");
            }
            print!("{text}");
        }
    }
    if let Some(msg) = error {
        eprintln!("error: {msg}");
    }
    ExitCode::from(status)
}
