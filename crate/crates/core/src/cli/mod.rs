//! Command-line front end. [`run`] is the whole program minus process exit.

pub mod args;
pub mod grid;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;
use serde::Serialize;
use serde_json::{json, Value};

use crate::certificates::{
    certify, check_char2_example, check_intersect_pij, check_intersection,
    check_localization_generic, check_localization_pfaffian, check_det_identity,
    check_symmetric_localization, check_t1_decomposition, CertifyOptions, CheckReport,
};
use crate::error::{Error, Result};
use crate::fiberlab::{
    alt_sqrt_suite, chart_suite, symplectic_suite, unitary_suite, ChartFamily, Tolerance,
};
use crate::nullcones::{generic_component_height, Family, FamilyParams, Formulas, Nullcone};
use crate::pointcount::{
    check_chain, closed_count, enumerate_with_budget, poly_fit, Space, StratumParams, StratumSpec,
};
use crate::polycore::{Field, FieldSpec, PrimeField, Rationals};
use args::{Cli, Command, Format, IdentityCheck, Shape, Suite};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

/// Result of one invocation: the exit code and what goes to each stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invocation {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Serialize)]
struct OutputRecord {
    schema_version: u32,
    command: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    formulas: Option<Formulas>,
    #[serde(skip_serializing_if = "Option::is_none")]
    computed: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<Value>,
    checks: Vec<CheckReport>,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<Value>,
}

#[derive(Default)]
struct Body {
    formulas: Option<Formulas>,
    computed: Option<Value>,
    certificate: Option<Value>,
    checks: Vec<CheckReport>,
}

/// Dispatches on the field spec with the concrete field bound to `$f`.
macro_rules! with_field {
    ($spec:expr, |$f:ident| $body:expr) => {
        match $spec {
            FieldSpec::Rational => {
                let $f = Rationals;
                $body
            }
            FieldSpec::Prime(p) => {
                let $f = PrimeField::new(p)?;
                $body
            }
            FieldSpec::ComplexFloat => Err(Error::InvalidParams(
                "this command needs an exact field".into(),
            )),
        }
    };
}

fn family_params(s: &Shape) -> Result<FamilyParams> {
    let p = match s.family {
        Family::Pfaffian | Family::Symmetric if s.m.is_some() => {
            return Err(Error::InvalidParams(format!(
                "-m is not a parameter of the {} family",
                s.family
            )))
        }
        Family::Pfaffian => FamilyParams::pfaffian(s.t, s.n),
        Family::Symmetric => FamilyParams::symmetric(s.t, s.n),
        Family::Generic => FamilyParams::generic(
            s.m.ok_or_else(|| Error::InvalidParams("generic family needs -m".into()))?,
            s.t,
            s.n,
        ),
    };
    p.validate()?;
    Ok(p)
}

fn construct<F: Field>(field: F, p: FamilyParams) -> Result<Body> {
    let nc = Nullcone::build(field, p)?;
    let gens: Vec<String> = nc
        .ideal
        .generators()
        .iter()
        .map(|g| g.to_string())
        .collect();
    let vars = nc.ring.vars().to_vec();
    Ok(Body {
        formulas: Some(p.formulas()),
        computed: Some(
            json!({ "variables": vars, "num_generators": gens.len(), "generators": gens }),
        ),
        ..Body::default()
    })
}

fn parse_vc(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::Parse(format!("--vc expects `i,j`, got `{s}`"));
    let (i, j) = s.split_once(',').ok_or_else(bad)?;
    Ok((
        i.trim().parse().map_err(|_| bad())?,
        j.trim().parse().map_err(|_| bad())?,
    ))
}

fn height<F: Field>(field: F, p: FamilyParams, vc: Option<(usize, usize)>) -> Result<Body> {
    let nc = Nullcone::build(field, p)?;
    let (ideal, formula, label) = match vc {
        None => (nc.ideal.clone(), p.formulas().height, "height".to_string()),
        Some((i, j)) => {
            if p.family != Family::Generic {
                return Err(Error::InvalidParams(
                    "--vc applies to the generic family only".into(),
                ));
            }
            let h =
                generic_component_height(p.m() as i64, p.t as i64, p.n as i64, i as i64, j as i64);
            (
                nc.variety_of_complexes(i, j)?,
                h,
                format!("height p_{i}{j}"),
            )
        }
    };
    let computed = ideal.height()?;
    let mut check = CheckReport::new(label, computed == formula)
        .with_detail(format!("formula {formula}, computed {computed}"));
    if computed != formula {
        check = check.with_witness(format!("{computed} != {formula}"));
    }
    Ok(Body {
        formulas: Some(p.formulas()),
        computed: Some(json!({ "height": computed, "formula_height": formula })),
        checks: vec![check],
        ..Body::default()
    })
}

fn ara_certify<F: Field>(
    field: F,
    p: FamilyParams,
    seed: u64,
    opts: CertifyOptions,
    timing: bool,
) -> Result<Body> {
    let mut cert = certify(field, p, seed, &opts)?;
    if !timing {
        cert = cert.without_timing();
    }
    let checks = cert.transcript.clone();
    Ok(Body {
        formulas: Some(p.formulas()),
        computed: Some(
            json!({ "candidate_count": cert.candidate_count, "attempts": cert.attempts }),
        ),
        certificate: Some(serde_json::to_value(&cert).map_err(|e| Error::Parse(e.to_string()))?),
        checks,
    })
}

fn need(v: Option<usize>, flag: &str) -> Result<usize> {
    v.ok_or_else(|| Error::InvalidParams(format!("this check needs {flag}")))
}

#[allow(clippy::too_many_arguments)]
fn identity<F: Field>(
    field: F,
    check: IdentityCheck,
    m: Option<usize>,
    t: Option<usize>,
    n: Option<usize>,
    ell: usize,
    seed: u64,
    retries: usize,
) -> Result<CheckReport> {
    match check {
        IdentityCheck::Intersection => {
            check_intersection(field, need(m, "-m")?, need(t, "-t")?, need(n, "-n")?)
        }
        IdentityCheck::IntersectPij => {
            check_intersect_pij(field, need(m, "-m")?, need(t, "-t")?, need(n, "-n")?, ell)
        }
        IdentityCheck::Decomposition => {
            check_t1_decomposition(field, need(m, "-m")?, need(n, "-n")?)
        }
        IdentityCheck::LocalizationPfaffian => {
            check_localization_pfaffian(field, need(t, "-t")?, need(n, "-n")?, seed)
        }
        IdentityCheck::LocalizationGeneric => {
            check_localization_generic(field, need(m, "-m")?, need(t, "-t")?, need(n, "-n")?, seed)
        }
        IdentityCheck::LocalizationSymmetric => {
            check_symmetric_localization(field, need(t, "-t")?, need(n, "-n")?, seed, retries)
        }
        IdentityCheck::Char2 => check_char2_example(field, need(n, "-n")?),
        IdentityCheck::DetIdentity => check_det_identity(field, need(n, "-n")?),
    }
}

#[allow(clippy::too_many_arguments)]
fn count(
    space: Option<Space>,
    chain: Option<crate::pointcount::ChainFamily>,
    params: StratumParams,
    q: u64,
    primes: Option<Vec<u64>>,
    degree: Option<usize>,
    budget: u128,
    timing: bool,
) -> Result<Body> {
    if let Some(family) = chain {
        let r = check_chain(family, params, q, budget)?;
        let checks = r.checks.clone();
        return Ok(Body {
            computed: Some(to_value(&r)?),
            checks,
            ..Body::default()
        });
    }
    let space =
        space.ok_or_else(|| Error::InvalidParams("--space or --chain is required".into()))?;
    if let Some(primes) = primes {
        let fit = poly_fit(space, params, &primes, degree, budget)?;
        let name = format!("{space} count polynomial");
        let check = CheckReport::new(name, true).with_detail(match &fit.polynomial {
            Some(p) => format!("fit {p}"),
            None => "no-fit".into(),
        });
        return Ok(Body {
            computed: Some(to_value(&fit)?),
            checks: vec![check],
            ..Body::default()
        });
    }
    let mut report = enumerate_with_budget(&StratumSpec::new(space, params, q), budget)?;
    if !timing {
        report = report.without_timing();
    }
    let mut computed = to_value(&report)?;
    let mut checks = Vec::new();
    match closed_count(space, params, q) {
        Ok(c) => {
            let agree = c == report.count;
            computed["closed_count"] = to_value(&c.to_string())?;
            if let Ok(small) = u64::try_from(&c) {
                computed["closed_count"] = json!(small);
            }
            let mut check = CheckReport::new(format!("{space} closed count = enumeration"), agree)
                .with_detail(format!("closed {c}, enumerated {}", report.count));
            if !agree {
                check = check.with_witness(format!("{c} != {}", report.count));
            }
            checks.push(check);
        }
        Err(Error::InvalidParams(_)) => {}
        Err(e) => return Err(e),
    }
    Ok(Body {
        computed: Some(computed),
        checks,
        ..Body::default()
    })
}

fn fiber_check(
    suite: Suite,
    family: Option<ChartFamily>,
    samples: usize,
    field: FieldSpec,
    seed: u64,
    tol: f64,
) -> Result<Body> {
    let tol = Tolerance::new(tol)?;
    let mut checks = Vec::new();
    let exact = matches!(
        suite,
        Suite::Charts | Suite::Symplectic | Suite::AltSqrt | Suite::All
    );
    if exact {
        with_field!(field, |f| {
            if matches!(suite, Suite::Charts | Suite::All) {
                let fams: Vec<ChartFamily> = family
                    .map(|x| vec![x])
                    .unwrap_or_else(|| ChartFamily::ALL.to_vec());
                for fam in fams {
                    checks.push(chart_suite(&f, fam, fam.default_params(), samples, seed)?);
                }
            }
            if matches!(suite, Suite::Symplectic | Suite::All) {
                for (t, k) in [(2, 1), (3, 2)] {
                    checks.push(symplectic_suite(&f, t, k, samples, seed)?);
                }
            }
            if matches!(suite, Suite::AltSqrt | Suite::All) {
                for k in 1..=2 {
                    checks.push(alt_sqrt_suite(&f, k, samples, seed)?);
                }
            }
            Ok::<(), Error>(())
        })?;
    }
    if matches!(suite, Suite::Unitary | Suite::All) {
        for k in 1..=5 {
            checks.push(unitary_suite(k, samples.min(50), seed, tol)?);
        }
    }
    Ok(Body {
        checks,
        ..Body::default()
    })
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Parse(e.to_string()))
}

fn execute(command: &Command, timing: bool) -> Result<Body> {
    match command.clone() {
        Command::Construct { shape, field } => {
            let p = family_params(&shape)?;
            with_field!(field, |f| construct(f, p))
        }
        Command::Height { shape, field, vc } => {
            let p = family_params(&shape)?;
            let vc = vc.as_deref().map(parse_vc).transpose()?;
            with_field!(field, |f| height(f, p, vc))
        }
        Command::AraCertify {
            shape,
            field,
            seed,
            count,
            retries,
            min_prime,
        } => {
            let p = family_params(&shape)?;
            let opts = CertifyOptions {
                count,
                retries,
                min_prime,
            };
            with_field!(field, |f| ara_certify(f, p, seed, opts, timing))
        }
        Command::CheckIdentities {
            check,
            m,
            t,
            n,
            ell,
            field,
            seed,
            retries,
        } => {
            let r = with_field!(field, |f| identity(f, check, m, t, n, ell, seed, retries))?;
            Ok(Body {
                checks: vec![r],
                ..Body::default()
            })
        }
        Command::Count {
            space,
            chain,
            m,
            t,
            n,
            k,
            q,
            primes,
            degree,
            budget,
        } => count(
            space,
            chain,
            StratumParams::new(m, t, n, k),
            q,
            primes,
            degree,
            budget,
            timing,
        ),
        Command::FiberCheck {
            suite,
            family,
            samples,
            field,
            seed,
            tol,
        } => fiber_check(suite, family, samples, field, seed, tol),
        Command::Grid { .. } => unreachable!("grids are handled separately"),
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::ResourceLimit(_) | Error::BudgetExceeded { .. } => "budget",
        Error::InvalidParams(_) | Error::Parse(_) => "usage",
        Error::RetryExhausted(_) => "retry-exhausted",
        _ => "failure",
    }
}

fn exit_for(e: &Error) -> i32 {
    match error_kind(e) {
        "budget" => EXIT_BUDGET,
        "usage" => EXIT_USAGE,
        _ => EXIT_FAILED,
    }
}

fn render_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("records serialize");
    s.push('\n');
    s
}

fn strip_timing(mut checks: Vec<CheckReport>, timing: bool) -> Vec<CheckReport> {
    if !timing {
        checks = checks
            .into_iter()
            .map(CheckReport::without_timing)
            .collect();
    }
    checks
}

fn configure_threads() -> std::result::Result<(), String> {
    let Ok(raw) = std::env::var("NULLCONE_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("NULLCONE_THREADS must be a positive integer, got `{raw}`"))?;
    if n == 0 {
        return Err("NULLCONE_THREADS must be positive".into());
    }
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

fn usage(msg: impl Into<String>) -> Invocation {
    Invocation {
        code: EXIT_USAGE,
        stdout: String::new(),
        stderr: msg.into(),
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Invocation {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => usage(text),
            };
        }
    };
    if let Err(msg) = configure_threads() {
        return usage(msg);
    }
    if let Command::Grid { name } = cli.command {
        let mut report = grid::run_grid(name);
        report.rows.sort_by_key(|r| r.cell);
        let code = if report.pass {
            EXIT_OK
        } else if report.rows.iter().any(|r| r.infeasible) {
            EXIT_BUDGET
        } else {
            EXIT_FAILED
        };
        let stdout = match cli.format {
            Format::Csv => match grid::to_csv(&report) {
                Ok(s) => s,
                Err(e) => {
                    return Invocation {
                        code: EXIT_FAILED,
                        stdout: String::new(),
                        stderr: e.to_string(),
                    }
                }
            },
            Format::Json => {
                let record = json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": to_value(&cli.command).unwrap_or(Value::Null),
                    "grid": report,
                    "pass": report.pass,
                });
                render_json(&record)
            }
        };
        return Invocation {
            code,
            stdout,
            stderr: String::new(),
        };
    }
    if cli.format == Format::Csv {
        return usage("CSV output is available for `grid` only");
    }
    let command = to_value(&cli.command).unwrap_or(Value::Null);
    let (record, code) = match execute(&cli.command, cli.timing) {
        Ok(body) => {
            let checks = strip_timing(body.checks, cli.timing);
            let pass = checks.iter().all(|c| c.pass);
            let record = OutputRecord {
                schema_version: SCHEMA_VERSION,
                command,
                formulas: body.formulas,
                computed: body.computed,
                certificate: body.certificate,
                checks,
                pass,
                error: None,
            };
            (record, if pass { EXIT_OK } else { EXIT_FAILED })
        }
        Err(e) => {
            let code = exit_for(&e);
            let record = OutputRecord {
                schema_version: SCHEMA_VERSION,
                command,
                formulas: None,
                computed: None,
                certificate: None,
                checks: Vec::new(),
                pass: false,
                error: Some(json!({ "kind": error_kind(&e), "message": e.to_string() })),
            };
            (record, code)
        }
    };
    let stderr = match &record.error {
        Some(e) => format!("error: {}\n", e["message"].as_str().unwrap_or_default()),
        None => String::new(),
    };
    Invocation {
        code,
        stdout: render_json(&record),
        stderr,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &str) -> Invocation {
        run(std::iter::once("nullcone").chain(args.split_whitespace()))
    }

    #[test]
    fn count_symplectic_pairs() {
        let out = call("count --space Sp --t 1 --k 1 -q 3");
        assert_eq!(out.code, 0, "{}", out.stderr);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["computed"]["count"], 24);
        assert_eq!(v["computed"]["closed_count"], 24);
        assert_eq!(v["schema_version"], 1);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call("count --space Sp -t 1").code, 0);
        assert_eq!(call("count --space X_alt -t 2 -n 4").code, 3);
        assert_eq!(call("height --family generic -t 1 -n 1").code, 64);
        assert_eq!(call("frobnicate").code, 64);
        assert_eq!(call("count --space Sp -t 1 --format csv").code, 64);
        assert_eq!(
            call("check-identities --check char2 -n 2 --field p=3").code,
            2
        );
    }

    #[test]
    fn output_is_reproducible() {
        let a = call("ara-certify --family symmetric -t 2 -n 2 --seed 3");
        let b = call("ara-certify --family symmetric -t 2 -n 2 --seed 3");
        assert_eq!(a, b);
        assert_eq!(a.code, 0);
    }
}
