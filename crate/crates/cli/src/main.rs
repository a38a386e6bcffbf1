//! Command-line front end: JSON in, JSON out, scriptable exit codes.
//!
//! Exit code contract: 0 success, 1 property violation, 2 invalid input or
//! configuration, 3 the answer needs a field extension (or a seeded search
//! exhausted its budget).

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use kronmod::campaign::{self, CampaignConfig, Suite};
use kronmod::json as kj;
use kronmod::kronecker::{det_semiinvariant, e_semiinvariant, epsilon, rho};
use kronmod::modulimap::{det_fiber, eta, resultant};
use kronmod::normalform::normal_form;
use kronmod::stability::{is_semistable, is_stable, king_oracle};
use kronmod::{blowdown, Error, FieldSpec};

#[derive(Parser)]
#[command(
    name = "kronmod",
    version,
    about = "Exact computations with 2x2 Kronecker modules over a 4-dimensional space of linear forms"
)]
struct Cli {
    /// Field to compute in: "rational" or "fp:<P>" with P an odd prime.
    #[arg(long, global = true, default_value = "rational")]
    field: String,

    /// Seed driving every randomized campaign and search.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Number of trials per campaign suite.
    #[arg(long, global = true, default_value_t = 1000)]
    trials: u64,

    /// Compact single-line JSON output (default is pretty-printed).
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Semi-invariants of a module: det, e, epsilon, rho, res(det).
    Inv { input: Option<PathBuf> },
    /// Stability report: determinant criterion against the search oracle.
    Stab { input: Option<PathBuf> },
    /// Normal form of a stable module, with a replayable certificate.
    Nf { input: Option<PathBuf> },
    /// The weighted-projective point <det, e> of a semi-stable module.
    Eta { input: Option<PathBuf> },
    /// Fiber of the double cover over a quadratic form.
    Fiber { input: Option<PathBuf> },
    /// Blow-down of a bigraded matrix to a weighted-projective point.
    Beta { input: Option<PathBuf> },
    /// The elimination alpha(psi) on the open region W0.
    Alpha { input: Option<PathBuf> },
    /// Region of a bigraded matrix: W0, W1, W2 or Invalid.
    Classify { input: Option<PathBuf> },
    /// Seeded property-test campaigns over the whole library.
    Check {
        /// One of: field, multilinear, epsilon-rho, transformation-laws,
        /// group-action, king-vs-det, normal-form, hypersurface, blowdown,
        /// snake, all.
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((output, code)) => {
            match output {
                Output::Document(v) => {
                    if cli.json {
                        println!("{v}");
                    } else {
                        println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
                    }
                }
                Output::Raw(s) => print!("{s}"),
            }
            ExitCode::from(code)
        }
        Err(e) => {
            let code = exit_code_for(&e);
            eprintln!("{}", json!({"error": format!("{e:#}"), "exit": code}));
            ExitCode::from(code)
        }
    }
}

enum Output {
    Document(Value),
    Raw(String),
}

fn exit_code_for(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::NeedsExtension(_)) | Some(Error::BudgetExhausted(_)) => 3,
        Some(_) => 2,
        None => 2,
    }
}

fn run(cli: &Cli) -> anyhow::Result<(Output, u8)> {
    let spec = FieldSpec::parse(&cli.field)?;
    match &cli.cmd {
        Cmd::Inv { input } => cmd_inv(spec, input),
        Cmd::Stab { input } => cmd_stab(spec, input),
        Cmd::Nf { input } => cmd_nf(spec, input),
        Cmd::Eta { input } => cmd_eta(spec, input),
        Cmd::Fiber { input } => cmd_fiber(spec, input),
        Cmd::Beta { input } => cmd_beta(spec, input),
        Cmd::Alpha { input } => cmd_alpha(spec, input),
        Cmd::Classify { input } => cmd_classify(spec, input),
        Cmd::Check { suite } => cmd_check(spec, cli.seed, cli.trials, suite),
    }
}

fn read_value(input: &Option<PathBuf>) -> anyhow::Result<Value> {
    let text = match input {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p)
            .with_context(|| format!("reading {}", p.display()))
            .map_err(|e| anyhow::Error::from(Error::Parse(format!("{e:#}"))))?,
        _ => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Error::Parse(format!("reading stdin: {e}")))?;
            buf
        }
    };
    let v: Value =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
    Ok(v)
}

fn header(spec: FieldSpec) -> Value {
    json!(spec.to_string())
}

fn cmd_inv(spec: FieldSpec, input: &Option<PathBuf>) -> anyhow::Result<(Output, u8)> {
    let phi = kj::parse_kmodule(&read_value(input)?, spec)?;
    let det = det_semiinvariant(&phi);
    let eps = epsilon(&phi);
    let r = rho(&phi);
    let check = eps.square() == r;
    let doc = json!({
        "field": header(spec),
        "det": kj::quad_form_to_value(&det),
        "e": kj::scalar_to_value(&e_semiinvariant(&phi)),
        "epsilon": kj::scalar_to_value(&eps),
        "rho": kj::scalar_to_value(&r),
        "res_det": kj::scalar_to_value(&resultant(&det)),
        "epsilon_sq_eq_rho": check,
    });
    Ok((Output::Document(doc), if check { 0 } else { 1 }))
}

fn cmd_stab(spec: FieldSpec, input: &Option<PathBuf>) -> anyhow::Result<(Output, u8)> {
    let phi = kj::parse_kmodule(&read_value(input)?, spec)?;
    let verdict = king_oracle(&phi);
    let det_ss = is_semistable(&phi);
    let det_st = is_stable(&phi);
    let agreement = verdict.semistable == det_ss && verdict.stable == det_st;
    let doc = json!({
        "field": header(spec),
        "semistable": verdict.semistable,
        "stable": verdict.stable,
        "witness": serde_json::to_value(&verdict.witness)?,
        "det_criterion": {"semistable": det_ss, "stable": det_st},
        "agreement": agreement,
    });
    Ok((Output::Document(doc), if agreement { 0 } else { 1 }))
}

fn cmd_nf(spec: FieldSpec, input: &Option<PathBuf>) -> anyhow::Result<(Output, u8)> {
    let phi = kj::parse_kmodule(&read_value(input)?, spec)?;
    let nf = normal_form(&phi)?;
    let replay_ok = nf.replay(&phi) == nf.module();
    let mut doc = kj::normal_form_to_value(&nf);
    doc["field"] = header(spec);
    doc["replay_ok"] = json!(replay_ok);
    Ok((Output::Document(doc), if replay_ok { 0 } else { 1 }))
}

fn cmd_eta(spec: FieldSpec, input: &Option<PathBuf>) -> anyhow::Result<(Output, u8)> {
    let phi = kj::parse_kmodule(&read_value(input)?, spec)?;
    let point = eta(&phi)?;
    let mut doc = kj::wpoint_to_value(&point);
    doc["field"] = header(spec);
    doc["on_hypersurface"] = json!(kronmod::modulimap::on_hypersurface(&point));
    Ok((Output::Document(doc), 0))
}

fn cmd_fiber(spec: FieldSpec, input: &Option<PathBuf>) -> anyhow::Result<(Output, u8)> {
    let q = kj::parse_quad_form(&read_value(input)?, spec)?;
    let points = det_fiber(&q)?;
    let doc = json!({
        "field": header(spec),
        "res": kj::scalar_to_value(&resultant(&q)),
        "count": points.len(),
        "points": points.iter().map(kj::wpoint_to_value).collect::<Vec<_>>(),
    });
    Ok((Output::Document(doc), 0))
}

fn cmd_beta(spec: FieldSpec, input: &Option<PathBuf>) -> anyhow::Result<(Output, u8)> {
    let psi = kj::parse_bigpsi(&read_value(input)?, spec)?;
    let region = psi.classify();
    let point = blowdown::beta(&psi)?;
    let doc = json!({
        "field": header(spec),
        "region": kj::region_to_value(region),
        "point": kj::wpoint_to_value(&point),
    });
    Ok((Output::Document(doc), 0))
}

fn cmd_alpha(spec: FieldSpec, input: &Option<PathBuf>) -> anyhow::Result<(Output, u8)> {
    let psi = kj::parse_bigpsi(&read_value(input)?, spec)?;
    let module = blowdown::alpha(&psi)?;
    let doc = json!({
        "field": header(spec),
        "alpha": kj::kmodule_to_value(&module),
        "semistable": is_semistable(&module),
    });
    Ok((Output::Document(doc), 0))
}

fn cmd_classify(spec: FieldSpec, input: &Option<PathBuf>) -> anyhow::Result<(Output, u8)> {
    let psi = kj::parse_bigpsi(&read_value(input)?, spec)?;
    let region = psi.classify();
    let doc = json!({
        "field": header(spec),
        "region": kj::region_to_value(region),
    });
    let code = if region == blowdown::Region::Invalid { 2 } else { 0 };
    Ok((Output::Document(doc), code))
}

fn cmd_check(
    spec: FieldSpec,
    seed: u64,
    trials: u64,
    suite: &str,
) -> anyhow::Result<(Output, u8)> {
    let cfg = CampaignConfig {
        field: spec,
        seed,
        trials,
        suite: Suite::parse(suite)?,
    };
    let report = campaign::run(&cfg)?;
    let code = if report.ok() { 0 } else { 1 };
    Ok((Output::Raw(report.render()), code))
}
