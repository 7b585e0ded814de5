use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use spinlab::correspondence::RulingCurve;
use spinlab::checks::{verify_instance, Suite, SUITES};
use spinlab::error::Error;
use spinlab::field::{Field, Scalar};
use spinlab::io::{
    canonical, elem_to_json, elems_to_json, field_of, parse_field, parse_json, point_to_json, ruling_curve_to_json, AnyField,
    Instance,
};
use spinlab::quadric::ContextSampling;
use spinlab::reconstruction::{extract_spin_tuple, roundtrip};
use spinlab::symmetry::{orbit_equal, quotient_invariants};

/// Ruling curves on a quadric threefold and their spin hyperelliptic curves.
#[derive(Parser, Debug)]
#[command(name = "spinlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a context and a ruling curve of bidegree (1, d−1) from a seed.
    Construct {
        #[arg(long)]
        d: usize,
        /// `fp:P` for an odd prime P, or `qq`.
        #[arg(long)]
        field: String,
        /// Overridden by SPINLAB_SEED when set.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Where to write the instance; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant suites on an instance file.
    Verify {
        file: PathBuf,
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Reconstruct R from its spin hyperelliptic datum and compare.
    Roundtrip { file: PathBuf },
    /// Compare the invariants of two instances under the sign involution.
    Quotient { file1: PathBuf, file2: PathBuf },
    /// Construct and verify a small built-in set of instances.
    Selftest,
}

macro_rules! with_field {
    ($field:expr, $k:ident => $body:expr) => {
        match $field {
            AnyField::Fp($k) => $body,
            AnyField::Qq($k) => $body,
        }
    };
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
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::SamplingExhausted { .. }) => 2,
        Some(Error::NotInImage(_)) => 3,
        _ => 1,
    }
}

fn run(cmd: Command) -> anyhow::Result<ExitCode> {
    match cmd {
        Command::Construct { d, field, seed, out } => {
            let seed = match std::env::var("SPINLAB_SEED") {
                Ok(s) => s.trim().parse().with_context(|| format!("SPINLAB_SEED={s:?} is not a nonnegative integer"))?,
                Err(_) => seed,
            };
            with_field!(parse_field(&field)?, k => construct(k, d, seed, out.as_deref()))
        }
        Command::Verify { file, suite } => {
            let names: Vec<&str> = match suite.as_str() {
                "all" => SUITES.to_vec(),
                s if SUITES.contains(&s) => vec![s],
                s => bail!("unknown suite {s:?}; expected all or one of {}", SUITES.join(", ")),
            };
            let v = read_json(&file)?;
            with_field!(field_of(&v)?, k => verify(Instance::from_json(k, &v)?, &names))
        }
        Command::Roundtrip { file } => {
            let v = read_json(&file)?;
            with_field!(field_of(&v)?, k => run_roundtrip(Instance::from_json(k, &v)?))
        }
        Command::Quotient { file1, file2 } => {
            let (v1, v2) = (read_json(&file1)?, read_json(&file2)?);
            let (f1, f2) = (field_of(&v1)?, field_of(&v2)?);
            match (f1, f2) {
                (AnyField::Fp(a), AnyField::Fp(b)) if a == b => quotient(Instance::from_json(a, &v1)?, Instance::from_json(b, &v2)?),
                (AnyField::Qq(a), AnyField::Qq(b)) => quotient(Instance::from_json(a, &v1)?, Instance::from_json(b, &v2)?),
                _ => bail!("the two instances are over different fields"),
            }
        }
        Command::Selftest => selftest(),
    }
}

fn read_json(path: &Path) -> anyhow::Result<Value> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(parse_json(&text)?)
}

fn construct<K: ContextSampling>(field: K, d: usize, seed: u64, out: Option<&Path>) -> anyhow::Result<ExitCode> {
    let inst = Instance::sample(field, d, seed)?;
    let text = canonical(&inst.to_json()?);
    let t = extract_spin_tuple(&inst.ctx, &inst.r)?;
    let side = t.theta.side.deg() as usize + usize::from(t.theta.with_inf);
    let summary = json!({
        "d": d,
        "field": inst.field.descriptor(),
        "genus": t.curve.g,
        "m": point_to_json(&inst.field, &t.m)?,
        "n": point_to_json(&inst.field, &t.n)?,
        "partition": [side, 2 * d - side],
        "seed": seed,
    });
    match out {
        Some(path) => {
            std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
            print!("{}", canonical(&summary));
        }
        None => {
            print!("{text}");
            eprint!("{}", canonical(&summary));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn suite_json(s: &Suite) -> Value {
    let checks: Vec<Value> = s
        .checks
        .iter()
        .map(|c| json!({ "detail": c.detail, "name": c.name, "pass": c.pass }))
        .collect();
    json!({ "checks": checks, "pass": s.pass() })
}

fn verify<K: ContextSampling>(inst: Instance<K>, names: &[&str]) -> anyhow::Result<ExitCode> {
    let suites = verify_instance(&inst, names)?;
    let mut report = Map::new();
    for s in &suites {
        report.insert(s.name.to_string(), suite_json(s));
    }
    let pass = suites.iter().all(Suite::pass);
    print!("{}", canonical(&json!({ "pass": pass, "suites": report })));
    for s in &suites {
        for c in s.checks.iter().filter(|c| !c.pass) {
            eprintln!("failed: {}.{}: {}", s.name, c.name, c.detail);
        }
    }
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run_roundtrip<K: Field>(inst: Instance<K>) -> anyhow::Result<ExitCode> {
    let rep = roundtrip(&inst.ctx, &inst.r)?;
    let f = &inst.field;
    let lambda = match &rep.lambda {
        Some(l) => elem_to_json(f, l)?,
        None => Value::Null,
    };
    let recovered = if rep.equals_input {
        "R"
    } else if rep.equals_g_image {
        "g·R"
    } else {
        "neither"
    };
    let accepted = rep.success();
    // the recovered coefficients are determined up to a common factor
    let given = inst.r.coeffs();
    let mut coeffs = rep.recovered.coeffs();
    if let Some(i) = coeffs.iter().zip(&given).position(|(c, g)| !c.is_zero() && !g.is_zero()) {
        let k = given[i].clone() / &coeffs[i];
        coeffs.iter_mut().for_each(|c| *c = c.clone() * &k);
    }
    let shown = RulingCurve::from_coeffs(inst.r.d, &coeffs)?;
    print!(
        "{}",
        canonical(&json!({
            "R": ruling_curve_to_json(f, &shown)?,
            "accepted": accepted,
            "epsilon": rep.epsilon,
            "lambda": lambda,
            "orbit_match": rep.equals_input || rep.equals_g_image,
            "recovered": recovered,
        }))
    );
    if !accepted {
        eprintln!("failed: the recovered curve is {recovered}");
    }
    Ok(if accepted { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn quotient<K: Field>(a: Instance<K>, b: Instance<K>) -> anyhow::Result<ExitCode> {
    let f = &a.field;
    let same_context = a.ctx.params() == b.ctx.params();
    let report = json!({
        "invariants": [
            elems_to_json(f, &quotient_invariants(&a.r))?,
            elems_to_json(f, &quotient_invariants(&b.r))?,
        ],
        "orbit_equal": same_context && orbit_equal(&a.r, &b.r),
        "same_context": same_context,
    });
    print!("{}", canonical(&report));
    Ok(ExitCode::SUCCESS)
}

fn selftest() -> anyhow::Result<ExitCode> {
    let mut rows = Vec::new();
    let mut pass = true;
    for desc in ["fp:101", "fp:10007"] {
        for d in 3..=4 {
            for seed in 0..2 {
                let (ok, failed) = with_field!(parse_field(desc)?, k => selftest_one(k, d, seed)?);
                pass &= ok;
                rows.push(json!({ "d": d, "failed": failed, "field": desc, "pass": ok, "seed": seed }));
            }
        }
    }
    print!("{}", canonical(&json!({ "instances": rows, "pass": pass })));
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn selftest_one<K: ContextSampling>(field: K, d: usize, seed: u64) -> anyhow::Result<(bool, Vec<String>)> {
    let inst = Instance::sample(field, d, seed)?;
    let mut failed = Vec::new();
    for s in verify_instance(&inst, &SUITES)? {
        failed.extend(s.checks.iter().filter(|c| !c.pass).map(|c| format!("{}.{}", s.name, c.name)));
    }
    Ok((failed.is_empty(), failed))
}
