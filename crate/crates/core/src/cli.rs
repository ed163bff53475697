//! Command-line front end.
//!
//! Exit codes: 0 decided or passed, 1 a verified property failed, 2 invalid
//! input, 3 undecided (`UNKNOWN`, indistinguishable, or a resource limit).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::circle::{format_rational, parse_rational, IntervalSet, Rational};
use crate::gabai_tubes::{
    build_tube_plan, effective_depth, resolve_plan, tube_parameters, TubeError,
    DEFAULT_SEARCH_BUDGET,
};
use crate::interlacing::{
    cover_interlace, interlace_intervals, interlace_points, interlace_points_brute_force,
    InterlaceError,
};
use crate::manifolds::{
    classify_double3, distinguish_by_prime, divergence_trace, index_report, Certificate,
    DefiningSequence, Evidence, LinkType, ManifoldError, Query, TraceStep, Verdict,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_UNDECIDED: i32 = 3;

pub const SEARCH_BUDGET_VAR: &str = "TORUS_LEDGER_MAX_SEARCH";

const DEFAULT_DEPTH: u32 = 6;
const DEFAULT_HORIZON: u64 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "torus-ledger",
    version,
    about = "Exact checks for nested solid tori on the circle level"
)]
pub struct Cli {
    /// Print machine-readable JSON instead of a table.
    #[arg(long, global = true)]
    pub json: bool,
    /// Cantor truncation depth; overrides the manifest.
    #[arg(long, global = true)]
    pub depth: Option<u32>,
    /// Number of levels to examine; overrides the manifest.
    #[arg(long, global = true)]
    pub horizon: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum InterlaceMode {
    Points,
    Intervals,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Interlacing number of two labelled sets read from a JSON file.
    Interlace {
        mode: InterlaceMode,
        file: PathBuf,
        /// Cross-check against exhaustive search over sub-selections.
        #[arg(long)]
        brute_force: bool,
    },
    /// Tube parameters and census for an order-n Gabai link.
    Tubes {
        n: u32,
        /// Verify the circle-level conditions on the tube shadow.
        #[arg(long)]
        verify: bool,
    },
    /// Decide the double 3-space property for a manifest.
    Classify { manifest: PathBuf },
    /// Try to tell two manifests apart by a prime dividing link orders.
    Distinguish {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        prime: u64,
    },
    /// Geometric index of T_i in T_j.
    Index { manifest: PathBuf, i: u64, j: u64 },
    /// Interlacing lower bounds propagated through the first links.
    Trace { manifest: PathBuf },
    /// Interlacing of two interval sets and of their lifts to an n-fold cover.
    CoverLift {
        file: PathBuf,
        #[arg(long)]
        fold: u32,
    },
    /// Recompute a certificate from its query and compare.
    Replay { certificate: PathBuf },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceSpec {
    #[serde(default)]
    pub prefix: Vec<LinkType>,
    pub period: Vec<LinkType>,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestOptions {
    #[serde(default = "default_depth")]
    pub depth: u32,
    #[serde(default = "default_horizon")]
    pub horizon: u64,
}

fn default_depth() -> u32 {
    DEFAULT_DEPTH
}

fn default_horizon() -> u64 {
    DEFAULT_HORIZON
}

impl Default for ManifestOptions {
    fn default() -> Self {
        ManifestOptions {
            depth: DEFAULT_DEPTH,
            horizon: DEFAULT_HORIZON,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub name: String,
    pub sequence: SequenceSpec,
    #[serde(default)]
    pub options: ManifestOptions,
}

impl Manifest {
    pub fn defining_sequence(&self) -> DefiningSequence {
        DefiningSequence {
            name: self.name.clone(),
            prefix: self.sequence.prefix.clone(),
            period: self.sequence.period.clone(),
        }
    }
}

/// Two labelled sets. Points are `"p/q"` strings, intervals use the
/// `{lo, hi, lo_closed, hi_closed, wraps}` record.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairFile<T> {
    #[serde(alias = "A", default = "Vec::new")]
    a: Vec<T>,
    #[serde(alias = "B", default = "Vec::new")]
    b: Vec<T>,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }

    fn violation(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_VIOLATION,
            message: message.into(),
        }
    }
}

impl From<TubeError> for Failure {
    fn from(e: TubeError) -> Self {
        let code = match e {
            TubeError::NoPassingAssignment(_) => EXIT_VIOLATION,
            TubeError::SearchExhausted(_) | TubeError::TooLarge(_) => EXIT_UNDECIDED,
            _ => EXIT_INVALID,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<ManifoldError> for Failure {
    fn from(e: ManifoldError) -> Self {
        match e {
            ManifoldError::Tubes(t) => t.into(),
            ManifoldError::VerificationFailed(_) => Failure::violation(e.to_string()),
            _ => Failure::invalid(e.to_string()),
        }
    }
}

impl From<InterlaceError> for Failure {
    fn from(e: InterlaceError) -> Self {
        match e {
            InterlaceError::CoverMismatch { .. } => Failure::violation(e.to_string()),
            _ => Failure::invalid(e.to_string()),
        }
    }
}

type Outcome = Result<(i32, String), Failure>;

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

fn search_budget() -> Result<u64, Failure> {
    match std::env::var(SEARCH_BUDGET_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| {
            Failure::invalid(format!(
                "{SEARCH_BUDGET_VAR} must be a non-negative integer, got {v:?}"
            ))
        }),
        Err(_) => Ok(DEFAULT_SEARCH_BUDGET),
    }
}

fn load_manifest(path: &Path, cli: &Cli) -> Result<(Manifest, u32, u64), Failure> {
    let manifest: Manifest = read_json(path)?;
    let depth = cli.depth.unwrap_or(manifest.options.depth);
    let horizon = cli.horizon.unwrap_or(manifest.options.horizon);
    if depth < 4 {
        return Err(Failure::invalid(format!(
            "depth must be at least 4, got {depth}"
        )));
    }
    if horizon < 1 {
        return Err(Failure::invalid("horizon must be at least 1"));
    }
    manifest.defining_sequence().validate()?;
    Ok((manifest, depth, horizon))
}

fn verdict_code(v: Verdict) -> i32 {
    if v.is_decided() {
        EXIT_OK
    } else {
        EXIT_UNDECIDED
    }
}

fn pretty(value: &impl Serialize) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

fn cmd_interlace(mode: InterlaceMode, file: &Path, brute_force: bool, as_json: bool) -> Outcome {
    let (k, oracle) = match mode {
        InterlaceMode::Points => {
            let pair: PairFile<String> = read_json(file)?;
            let parse = |xs: &[String]| -> Result<Vec<Rational>, Failure> {
                xs.iter()
                    .map(|x| parse_rational(x).map_err(|e| Failure::invalid(e.to_string())))
                    .collect()
            };
            let (a, b) = (parse(&pair.a)?, parse(&pair.b)?);
            let k = interlace_points(&a, &b)?;
            let oracle = brute_force
                .then(|| interlace_points_brute_force(&a, &b))
                .transpose()?;
            (k, oracle)
        }
        InterlaceMode::Intervals => {
            let pair: PairFile<crate::circle::Interval> = read_json(file)?;
            let (a, b) = (IntervalSet::from(pair.a), IntervalSet::from(pair.b));
            let k = interlace_intervals(&a, &b)?;
            let reps = |s: &IntervalSet| -> Vec<Rational> {
                s.intervals().iter().map(|c| c.midpoint()).collect()
            };
            let oracle = brute_force
                .then(|| interlace_points_brute_force(&reps(&a), &reps(&b)))
                .transpose()?;
            (k, oracle)
        }
    };
    let agrees = oracle.as_ref().is_none_or(|o| o.value == k.value);
    let code = if agrees { EXIT_OK } else { EXIT_VIOLATION };
    let text = if as_json {
        let mut doc = json!({ "interlacing": k });
        if let Some(o) = &oracle {
            doc["brute_force"] = json!(o);
            doc["agrees"] = json!(agrees);
        }
        pretty(&doc)
    } else {
        let mut s = format!("interlacing: {}", k.value);
        if let Some(o) = &oracle {
            let _ = write!(
                s,
                "\nbrute force: {} ({})",
                o.value,
                if agrees { "agrees" } else { "DISAGREES" }
            );
        }
        s
    };
    Ok((code, text))
}

fn census_line(n: u32) -> Result<String, Failure> {
    let p = tube_parameters(n)?;
    let mut parts = Vec::new();
    if p.short_count() > 0 {
        parts.push(format!("{}×1/{}", p.short_count(), 3u64.pow(p.m + 1)));
    }
    if p.long_count() > 0 {
        parts.push(format!("{}×1/{}", p.long_count(), 3u64.pow(p.m)));
    }
    Ok(format!(
        "m={} k={}, {} tubes ({})",
        p.m,
        p.k,
        p.tube_count(),
        parts.join(", ")
    ))
}

fn cmd_tubes(n: u32, verify: bool, depth: Option<u32>, as_json: bool) -> Outcome {
    let params = tube_parameters(n)?;
    let plan = build_tube_plan(n, None)?;
    let census = census_line(n)?;
    if !verify {
        let text = if as_json {
            pretty(&json!({ "params": params, "census": census, "tubes": plan.tubes }))
        } else {
            census
        };
        return Ok((EXIT_OK, text));
    }
    let depth = match depth {
        Some(d) => d,
        None => effective_depth(n, params.m + 3)?,
    };
    let resolved = match resolve_plan(n, depth, None, search_budget()?) {
        Ok(r) => r,
        Err(TubeError::NoPassingAssignment(_)) => {
            let report = crate::gabai_tubes::verify_setup(&plan, depth)?;
            let text = if as_json {
                pretty(&json!({ "params": params, "census": census, "report": report }))
            } else {
                format!("{census}\nsetup at depth {depth}: FAIL, no assignment passes")
            };
            return Ok((EXIT_VIOLATION, text));
        }
        Err(e) => return Err(e.into()),
    };
    let r = &resolved.report;
    let code = if r.pass { EXIT_OK } else { EXIT_VIOLATION };
    let text = if as_json {
        pretty(&json!({
            "params": params,
            "census": census,
            "tubes": resolved.plan.tubes,
            "provenance": resolved.provenance,
            "report": r,
        }))
    } else {
        let flag = |b: bool| if b { "pass" } else { "FAIL" };
        let drops = r.cond_drop.iter().filter(|c| c.pass).count();
        let shifts = r.shift_checks.iter().filter(|c| c.pass).count();
        let mut ells: Vec<u32> = r.shift_checks.iter().map(|c| c.ell).collect();
        ells.sort_unstable();
        ells.dedup();
        format!(
            "{census}\nsetup at depth {}: {}\n  tubes over C1/C2 stay in C1/C2: {}\n  U0 and U1 land in U0: {}\n  removed levels drop: {}/{}\n  index shifts: {}/{} (shifts {:?})",
            r.depth,
            flag(r.pass),
            flag(r.cond_ab),
            flag(r.cond_v0),
            drops,
            r.cond_drop.len(),
            shifts,
            r.shift_checks.len(),
            ells,
        )
    };
    Ok((code, text))
}

fn certificate_table(name: &str, cert: &Certificate) -> String {
    let mut s = format!("manifest: {name}\nverdict: {}\n", cert.verdict);
    match &cert.evidence {
        Evidence::Exhaustion { setup, nestings } => {
            for e in setup {
                let r = &e.report;
                let _ = writeln!(
                    s,
                    "setup order={} m={} k={} depth={}: {}",
                    e.order,
                    r.m,
                    r.k,
                    r.depth,
                    if r.pass { "pass" } else { "FAIL" }
                );
            }
            let _ = writeln!(
                s,
                "level  order  V0 components  V0 measure  nested  exhausted"
            );
            for n in nestings {
                let _ = writeln!(
                    s,
                    "{:<6} {:<6} {:<14} {:<11} {:<7} {}",
                    n.level,
                    n.order,
                    n.v0_components,
                    format_rational(&n.v0_measure),
                    n.v0_nested && n.v0_strict && n.ab_nested,
                    n.exhausted
                );
            }
        }
        Evidence::Divergence { trace } => {
            let _ = writeln!(s, "level  order  interlacing lower bound");
            for t in trace {
                let order = t.order.map_or_else(|| "-".to_string(), |o| o.to_string());
                let _ = writeln!(s, "{:<6} {:<6} {}", t.level, order, t.bound.value);
            }
        }
        Evidence::Prime {
            prime,
            witness,
            a_levels,
            b_levels,
        } => {
            let _ = writeln!(s, "prime: {prime}");
            if let Some(w) = witness {
                let _ = writeln!(
                    s,
                    "witness: {} in the period of {} (position {})",
                    w.link, w.side, w.period_position
                );
            }
            let _ = writeln!(s, "a levels divisible: {a_levels:?}");
            let _ = writeln!(s, "b levels divisible: {b_levels:?}");
        }
        Evidence::Scope { kinds } => {
            let _ = writeln!(s, "link kinds outside the decided cases: {kinds:?}");
        }
    }
    s.trim_end().to_string()
}

fn emit_certificate(name: &str, cert: &Certificate, as_json: bool) -> (i32, String) {
    let text = if as_json {
        cert.to_json()
    } else {
        certificate_table(name, cert)
    };
    (verdict_code(cert.verdict), text)
}

fn cmd_classify(path: &Path, cli: &Cli) -> Outcome {
    let (manifest, depth, horizon) = load_manifest(path, cli)?;
    let cert = classify_double3(
        &manifest.defining_sequence(),
        depth,
        horizon,
        search_budget()?,
    )?;
    Ok(emit_certificate(&manifest.name, &cert, cli.json))
}

fn cmd_distinguish(a: &Path, b: &Path, prime: u64, cli: &Cli) -> Outcome {
    let (ma, _, ha) = load_manifest(a, cli)?;
    let (mb, _, hb) = load_manifest(b, cli)?;
    let horizon = cli.horizon.unwrap_or(ha.max(hb));
    let cert = distinguish_by_prime(
        &ma.defining_sequence(),
        &mb.defining_sequence(),
        prime,
        horizon,
    )?;
    Ok(emit_certificate(
        &format!("{} vs {}", ma.name, mb.name),
        &cert,
        cli.json,
    ))
}

fn cmd_index(path: &Path, i: u64, j: u64, cli: &Cli) -> Outcome {
    let (manifest, _, _) = load_manifest(path, cli)?;
    let report = index_report(&manifest.defining_sequence(), i, j)?;
    let text = if cli.json {
        pretty(&report)
    } else {
        let factors: Vec<String> = report.factors.iter().map(u64::to_string).collect();
        format!("N(T{i}, T{j}) = {} = {}", factors.join("·"), report.index)
    };
    Ok((EXIT_OK, text))
}

fn cmd_trace(path: &Path, cli: &Cli) -> Outcome {
    let (manifest, _, horizon) = load_manifest(path, cli)?;
    let seq = manifest.defining_sequence();
    let links: Vec<LinkType> = (1..=horizon).map_while(|i| seq.link(i)).collect();
    let orders: Vec<u32> = links.iter().map(|l| l.order()).collect();
    let bounds = divergence_trace(&orders, 1)?;
    let trace: Vec<TraceStep> = bounds
        .into_iter()
        .zip(&orders)
        .enumerate()
        .map(|(j, (bound, &n))| TraceStep {
            level: j as u64 + 1,
            order: Some(n),
            bound,
        })
        .collect();
    let exceeds = trace
        .last()
        .is_some_and(|t| t.bound.value > BigUint::from(trace.len() as u64));
    let text = if cli.json {
        pretty(
            &json!({ "name": manifest.name, "start": "1", "trace": trace, "exceeds_horizon": exceeds }),
        )
    } else {
        let mut s = format!(
            "manifest: {}\nlevel  order  interlacing lower bound\n0      -      1",
            manifest.name
        );
        for t in &trace {
            let _ = write!(
                s,
                "\n{:<6} {:<6} {}",
                t.level,
                t.order.unwrap_or(0),
                t.bound.value
            );
        }
        s
    };
    Ok((if exceeds { EXIT_OK } else { EXIT_VIOLATION }, text))
}

fn cmd_cover_lift(file: &Path, fold: u32, as_json: bool) -> Outcome {
    let pair: PairFile<crate::circle::Interval> = read_json(file)?;
    let (a, b) = (IntervalSet::from(pair.a), IntervalSet::from(pair.b));
    let base = interlace_intervals(&a, &b)?;
    let lifted = cover_interlace(&a, &b, fold)?;
    let text = if as_json {
        pretty(&json!({
            "fold": fold,
            "base": base,
            "lifted": lifted,
            "lifted_a": a.lift(fold),
            "lifted_b": b.lift(fold),
        }))
    } else {
        format!(
            "base interlacing: {}\nlifted to {fold}-fold cover: {}",
            base.value, lifted.value
        )
    };
    Ok((EXIT_OK, text))
}

fn cmd_replay(path: &Path, as_json: bool) -> Outcome {
    let cert: Certificate = read_json(path)?;
    let budget = search_budget()?;
    let identical = cert.replay(budget)?;
    let code = if identical { EXIT_OK } else { EXIT_VIOLATION };
    let kind = match cert.query {
        Query::Classify { .. } => "classify",
        Query::Distinguish { .. } => "distinguish",
    };
    let text = if as_json {
        pretty(&json!({ "query": kind, "verdict": cert.verdict, "identical": identical }))
    } else {
        format!(
            "{kind} certificate, verdict {}: {}",
            cert.verdict,
            if identical {
                "replays identically"
            } else {
                "DIFFERS on replay"
            }
        )
    };
    Ok((code, text))
}

fn dispatch(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Interlace {
            mode,
            file,
            brute_force,
        } => cmd_interlace(*mode, file, *brute_force, cli.json),
        Command::Tubes { n, verify } => cmd_tubes(*n, *verify, cli.depth, cli.json),
        Command::Classify { manifest } => cmd_classify(manifest, cli),
        Command::Distinguish { a, b, prime } => cmd_distinguish(a, b, *prime, cli),
        Command::Index { manifest, i, j } => cmd_index(manifest, *i, *j, cli),
        Command::Trace { manifest } => cmd_trace(manifest, cli),
        Command::CoverLift { file, fold } => cmd_cover_lift(file, *fold, cli.json),
        Command::Replay { certificate } => cmd_replay(certificate, cli.json),
    }
}

/// Parses `args`, runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_INVALID;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    match dispatch(&cli) {
        Ok((code, text)) => {
            let _ = writeln!(out, "{text}");
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("torus-ledger").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn tubes_census() {
        let (code, out, _) = run_args(&["tubes", "3"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "m=3 k=2, 12 tubes (8×1/81, 4×1/27)");
        let (code, out, _) = run_args(&["tubes", "1"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "m=2 k=0, 4 tubes (4×1/9)");
    }

    #[test]
    fn tubes_verify_and_errors() {
        let (code, out, _) = run_args(&["tubes", "1", "--verify"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("setup at depth 5: pass"));
        let (code, _, err) = run_args(&["tubes", "0"]);
        assert_eq!(code, 2);
        assert!(err.contains("at least 1"));
        let (code, _, _) = run_args(&["tubes", "3", "--verify", "--depth", "4"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn bad_arguments_exit_two() {
        assert_eq!(run_args(&["frobnicate"]).0, 2);
        assert_eq!(run_args(&["tubes", "-3"]).0, 2);
        assert_eq!(run_args(&["--help"]).0, 0);
    }

    #[test]
    fn census_for_powers_of_two() {
        assert_eq!(census_line(2).unwrap(), "m=3 k=0, 8 tubes (8×1/27)");
        assert_eq!(
            census_line(3).unwrap(),
            "m=3 k=2, 12 tubes (8×1/81, 4×1/27)"
        );
    }
}
