//! Command-line front end for the coprimality-topology engine.
//!
//! Exit codes: 0 on success (and all-pass verification), 1 when a
//! verification check fails or a probe row is unresolved, 2 on usage,
//! parse, or range errors. Diagnostics go to stderr, data to stdout.

mod expr;

use std::fmt::Write as _;

use coprime_topology::golomb::coarseness_demo;
use coprime_topology::oracle::{
    curated_cases, oracle_closure_check, oracle_golomb_check, oracle_open_check, OracleVerdict,
};
use coprime_topology::primefam::{
    density_probe, next_new_prime, verify_chain, FamilyKind, VerifyLevel, WitnessTable,
};
use coprime_topology::topology::{
    boundary, classify, closure, interior, sigma, sigma_decomposition, SigmaDecomposition,
};
use coprime_topology::EPSet;
use expr::{eval, parse_expr};

const USAGE: &str = "\
coptop — exact engine for the coprimality topology on the positive integers

USAGE:
  coptop eval EXPR [--members K] [--json]     evaluate a set expression
  coptop classify EXPR [--json]               open/closed/dense/nowhere-dense report
  coptop closure EXPR [--json]                closure of the set
  coptop interior EXPR [--json]               interior of the set
  coptop boundary EXPR [--json]               boundary of the set
  coptop sigma N [--decompose] [--json]       the basic open sigma(N)
  coptop probe FAMILY --nmax N [--bound B] [--family-file PATH] [--json]
                                              density witnesses per n in [2, N]
  coptop next-prime \"p1,p2,...\" [--json]      smallest prime coprime to the product
  coptop golomb-compare [--nmax N] [--json]   strict-coarseness demonstration
  coptop verify [--level quick|full] [--json] run the verification suite
  coptop help                                 this text

EXPRESSIONS:
  atoms      N, N1, sigma(n), M(n), class(a,m), ap(a,b), {e1,e2,...}
  operators  ~ complement, & intersection, \\ difference, | union
             precedence ~ > & > \\ > |, parentheses allowed

FAMILIES:
  all-primes, mersenne, fermat, twin, progression(a,b), custom (with --family-file)";

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    std::process::exit(run(&args));
}

struct CliError(String);

impl<E: std::fmt::Display> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

fn run(args: &[String]) -> i32 {
    match dispatch(args) {
        Ok(code) => code,
        Err(CliError(message)) => {
            eprintln!("error: {message}");
            2
        }
    }
}

#[derive(Default)]
struct Flags {
    positional: Vec<String>,
    json: bool,
    decompose: bool,
    members: Option<usize>,
    nmax: Option<u64>,
    bound: Option<u64>,
    family_file: Option<String>,
    level: Option<String>,
}

fn parse_flags(args: &[String]) -> Result<Flags, CliError> {
    let mut flags = Flags::default();
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        let mut value_for = |name: &str| -> Result<String, CliError> {
            it.next()
                .cloned()
                .ok_or_else(|| CliError(format!("{name} requires a value")))
        };
        match arg.as_str() {
            "--json" => flags.json = true,
            "--decompose" => flags.decompose = true,
            "--members" => flags.members = Some(value_for("--members")?.parse::<usize>()?),
            "--nmax" => flags.nmax = Some(value_for("--nmax")?.parse::<u64>()?),
            "--bound" => flags.bound = Some(value_for("--bound")?.parse::<u64>()?),
            "--family-file" => flags.family_file = Some(value_for("--family-file")?),
            "--level" => flags.level = Some(value_for("--level")?),
            s if s.starts_with("--") => {
                return Err(CliError(format!("unknown flag {s}")));
            }
            _ => flags.positional.push(arg.clone()),
        }
    }
    Ok(flags)
}

fn one_positional(flags: &Flags, what: &str) -> Result<String, CliError> {
    match flags.positional.as_slice() {
        [v] => Ok(v.clone()),
        [] => Err(CliError(format!("missing {what}"))),
        more => Err(CliError(format!(
            "expected one {what}, got {}: {:?}",
            more.len(),
            more
        ))),
    }
}

fn eval_arg(flags: &Flags) -> Result<(String, EPSet), CliError> {
    let text = one_positional(flags, "set expression")?;
    let tree = parse_expr(&text)?;
    Ok((expr::render(&tree), eval(&tree)?))
}

fn dispatch(args: &[String]) -> Result<i32, CliError> {
    let Some(command) = args.first() else {
        eprintln!("{USAGE}");
        return Ok(2);
    };
    let flags = parse_flags(&args[1..])?;
    match command.as_str() {
        "help" | "--help" | "-h" => {
            println!("{USAGE}");
            Ok(0)
        }
        "eval" => cmd_eval(&flags),
        "classify" => cmd_classify(&flags),
        "closure" => cmd_unary(&flags, "closure"),
        "interior" => cmd_unary(&flags, "interior"),
        "boundary" => cmd_unary(&flags, "boundary"),
        "sigma" => cmd_sigma(&flags),
        "probe" => cmd_probe(&flags),
        "next-prime" => cmd_next_prime(&flags),
        "golomb-compare" => cmd_golomb_compare(&flags),
        "verify" => cmd_verify(&flags),
        other => Err(CliError(format!(
            "unknown command {other:?}; run `coptop help`"
        ))),
    }
}

fn cmd_eval(flags: &Flags) -> Result<i32, CliError> {
    let (rendered, set) = eval_arg(flags)?;
    let members = flags.members.map(|k| set.enumerate(k));
    if flags.json {
        let mut value = serde_json::json!({
            "expr": rendered,
            "set": set,
            "density": set.natural_density(),
        });
        if let Some(ms) = &members {
            value["members"] = serde_json::json!(ms);
        }
        println!("{value}");
    } else {
        println!("{set}");
        println!("density: {}", set.natural_density());
        if let Some(ms) = &members {
            let joined: Vec<String> = ms.iter().map(u64::to_string).collect();
            println!("members: {}", joined.join(" "));
        }
    }
    Ok(0)
}

fn cmd_classify(flags: &Flags) -> Result<i32, CliError> {
    let (_, set) = eval_arg(flags)?;
    let report = classify(&set)?;
    if flags.json {
        println!("{}", serde_json::to_string(&report)?);
    } else {
        let yes_no = |b: bool| if b { "yes" } else { "no" };
        println!("set:           {set}");
        println!("open:          {}", yes_no(report.is_open));
        println!("closed:        {}", yes_no(report.is_closed));
        println!("dense:         {}", yes_no(report.is_dense));
        println!("nowhere dense: {}", yes_no(report.is_nowhere_dense));
        println!("closure:       {}", report.closure);
        println!("interior:      {}", report.interior);
        println!("boundary:      {}", report.boundary);
    }
    Ok(0)
}

fn cmd_unary(flags: &Flags, which: &str) -> Result<i32, CliError> {
    let (_, set) = eval_arg(flags)?;
    let out = match which {
        "closure" => closure(&set)?,
        "interior" => interior(&set)?,
        _ => boundary(&set)?,
    };
    if flags.json {
        println!("{}", serde_json::to_string(&out)?);
    } else {
        println!("{out}");
    }
    Ok(0)
}

fn cmd_sigma(flags: &Flags) -> Result<i32, CliError> {
    let n: u64 = one_positional(flags, "argument N")?.parse()?;
    if n == 0 {
        return Err(CliError("sigma requires N >= 1".into()));
    }
    let set = sigma(n)?;
    let decomposition = flags.decompose.then(|| sigma_decomposition(n));
    if flags.json {
        let mut value = serde_json::json!({ "n": n, "set": set });
        match &decomposition {
            Some(SigmaDecomposition::WholeSpace) => {
                value["whole_space"] = serde_json::json!(true);
            }
            Some(SigmaDecomposition::Progressions(parts)) => {
                value["progressions"] = serde_json::json!(parts);
            }
            None => {}
        }
        println!("{value}");
    } else {
        println!("sigma({n}) = {set}");
        match &decomposition {
            Some(SigmaDecomposition::WholeSpace) => println!("whole space (n = 1)"),
            Some(SigmaDecomposition::Progressions(parts)) => {
                for p in parts {
                    println!("{} + {}k", p.first, p.step);
                }
            }
            None => {}
        }
    }
    Ok(0)
}

fn parse_family(flags: &Flags) -> Result<FamilyKind, CliError> {
    let name = one_positional(flags, "family")?;
    if let Some(path) = &flags.family_file {
        if name != "custom" {
            return Err(CliError(
                "--family-file applies only to the `custom` family".into(),
            ));
        }
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError(format!("cannot read {path}: {e}")))?;
        return Ok(FamilyKind::custom_from_text(&text)?);
    }
    match name.as_str() {
        "all-primes" | "primes" | "all" => Ok(FamilyKind::AllPrimes),
        "mersenne" => Ok(FamilyKind::Mersenne),
        "fermat" => Ok(FamilyKind::Fermat),
        "twin" => Ok(FamilyKind::Twin),
        "custom" => Err(CliError("the custom family requires --family-file".into())),
        s => {
            if let Some(inner) = s
                .strip_prefix("progression(")
                .and_then(|r| r.strip_suffix(')'))
            {
                let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
                if let [a, b] = parts.as_slice() {
                    return Ok(FamilyKind::progression(a.parse()?, b.parse()?)?);
                }
                return Err(CliError("progression takes two integers: progression(a,b)".into()));
            }
            Err(CliError(format!(
                "unknown family {s:?}; families: all-primes, mersenne, fermat, twin, progression(a,b), custom"
            )))
        }
    }
}

fn cmd_probe(flags: &Flags) -> Result<i32, CliError> {
    let kind = parse_family(flags)?;
    let n_max = flags
        .nmax
        .ok_or_else(|| CliError("probe requires --nmax N".into()))?;
    if n_max < 2 {
        return Err(CliError("--nmax must be at least 2".into()));
    }
    let bound = flags.bound.unwrap_or((1 << 63) - 1);
    if bound == 0 {
        return Err(CliError("--bound must be positive".into()));
    }
    let table = density_probe(&kind, n_max, bound);
    if flags.json {
        println!("{}", serde_json::to_string(&table)?);
    } else {
        print!("{}", render_witness_table(&table));
    }
    Ok(if table.all_resolved() { 0 } else { 1 })
}

fn render_witness_table(table: &WitnessTable) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "family: {}", table.family);
    for row in &table.rows {
        match row.witness {
            Some(w) => {
                let _ = writeln!(out, "n={}: witness {}", row.n, w);
            }
            None => {
                let _ = writeln!(out, "n={}: unresolved (bound {})", row.n, row.bound);
            }
        }
    }
    out
}

fn cmd_next_prime(flags: &Flags) -> Result<i32, CliError> {
    let list = one_positional(flags, "comma-separated prime list")?;
    let mut known = Vec::new();
    for part in list.split(',').map(str::trim) {
        if part.is_empty() {
            continue;
        }
        known.push(part.parse::<u64>()?);
    }
    let next = next_new_prime(&known)?;
    if flags.json {
        println!(
            "{}",
            serde_json::json!({ "known": known, "next": next })
        );
    } else {
        println!("{next}");
    }
    Ok(0)
}

fn cmd_golomb_compare(flags: &Flags) -> Result<i32, CliError> {
    let n_max = flags.nmax.unwrap_or(200);
    if n_max < 4 {
        return Err(CliError("--nmax must be at least 4".into()));
    }
    let report = coarseness_demo(n_max)?;
    if flags.json {
        println!("{}", serde_json::to_string(&report)?);
    } else {
        println!(
            "sigma(n) Golomb-open for all n <= {}: {}",
            report.checked_sigma_max,
            if report.all_sigma_golomb_open { "yes" } else { "NO" }
        );
        println!("witness ap(1,4) = {}", report.witness);
        println!(
            "  Golomb-open: {}",
            if report.witness_is_golomb_open { "yes" } else { "NO" }
        );
        println!(
            "  open in the coprimality topology: {}",
            if report.witness_is_tau_open { "yes" } else { "no" }
        );
        println!(
            "strict coarseness: {}",
            if report.demonstrates_strictness() {
                "demonstrated"
            } else {
                "NOT demonstrated"
            }
        );
    }
    Ok(if report.demonstrates_strictness() { 0 } else { 1 })
}

struct OracleRow {
    case: &'static str,
    closure: OracleVerdict,
    openness: OracleVerdict,
    golomb: OracleVerdict,
}

impl OracleRow {
    fn passed(&self) -> bool {
        self.closure.agrees() && self.openness.agrees() && self.golomb.agrees()
    }
}

fn run_oracle_bundle(level: VerifyLevel) -> Result<Vec<OracleRow>, CliError> {
    // Quick takes a spot-check across the corpus at small bounds; full runs
    // all committed cases at the acceptance bounds.
    let cases = curated_cases();
    let (stride, window, subset, sample, open_bound, step_bound) = match level {
        VerifyLevel::Quick => (5, 60, 3, 12, 2_000, 2_000),
        VerifyLevel::Full => (1, 200, 5, 20, 10_000, 5_000),
    };
    let mut rows = Vec::new();
    for (name, set) in cases.iter().step_by(stride) {
        rows.push(OracleRow {
            case: name,
            closure: oracle_closure_check(set, window, 31, subset)?,
            openness: oracle_open_check(set, sample, open_bound)?,
            golomb: oracle_golomb_check(set, sample, step_bound),
        });
    }
    Ok(rows)
}

fn cmd_verify(flags: &Flags) -> Result<i32, CliError> {
    let level = match flags.level.as_deref() {
        None | Some("quick") => VerifyLevel::Quick,
        Some("full") => VerifyLevel::Full,
        Some(other) => {
            return Err(CliError(format!(
                "unknown level {other:?}; use quick or full"
            )))
        }
    };
    let chain = verify_chain(level)?;
    let oracle = run_oracle_bundle(level)?;
    let all_passed = chain.all_passed && oracle.iter().all(OracleRow::passed);

    if flags.json {
        let oracle_json: Vec<serde_json::Value> = oracle
            .iter()
            .map(|row| {
                serde_json::json!({
                    "case": row.case,
                    "closure": row.closure,
                    "openness": row.openness,
                    "golomb": row.golomb,
                    "passed": row.passed(),
                })
            })
            .collect();
        println!(
            "{}",
            serde_json::json!({
                "level": chain.level,
                "chain": chain,
                "oracle": oracle_json,
                "all_passed": all_passed,
            })
        );
    } else {
        for check in &chain.checks {
            println!(
                "{} {}: {} ({})",
                if check.passed { "PASS" } else { "FAIL" },
                check.name,
                check.statement,
                check.detail
            );
        }
        for row in &oracle {
            if row.passed() {
                println!("PASS oracle {}: closure, openness, golomb agree", row.case);
            } else {
                println!(
                    "FAIL oracle {}: closure={:?} openness={:?} golomb={:?}",
                    row.case,
                    row.closure.discrepancies,
                    row.openness.discrepancies,
                    row.golomb.discrepancies
                );
            }
        }
        println!(
            "{} ({} level)",
            if all_passed { "all checks passed" } else { "CHECKS FAILED" },
            chain.level
        );
    }
    Ok(if all_passed { 0 } else { 1 })
}
