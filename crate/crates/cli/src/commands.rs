use std::fs;

use serde::Serialize;

use symcc::approx::{best_poly_approx, approx_degree, chain_report, trace_lower_bound, BoundReport, PolyApprox, TraceLowerBound};
use symcc::bound::{bound_report, FullReport};
use symcc::johnson::hahn_table;
use symcc::protosim::{random_protocol, verify_trace_bound, ProtocolDims, WeightMode};
use symcc::verify::run_suite;
use symcc::SymmetricPredicate;

use crate::{BoundArgs, Command, DegreeArgs, EigArgs, Format, Output, PhiArgs, PredicateArgs, SimulateArgs, VerifyArgs, Weights};

type CmdResult = Result<bool, String>;

/// Runs one subcommand; `Ok(false)` means a verification check failed.
pub fn dispatch(cmd: &Command) -> CmdResult {
    match cmd {
        Command::Bound(a) => bound(a),
        Command::Eig(a) => eig(a),
        Command::Degree(a) => degree(a),
        Command::Phi(a) => phi(a),
        Command::Simulate(a) => simulate(a),
        Command::Verify(a) => verify(a),
    }
}

fn emit(output: &Output, text: String) -> Result<(), String> {
    match &output.out {
        Some(path) => fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| e.to_string())
}

fn predicate(args: &PredicateArgs) -> Result<SymmetricPredicate, String> {
    SymmetricPredicate::parse(&args.pred, args.n).map_err(|e| e.to_string())
}

fn check_eps(eps: f64) -> Result<(), String> {
    if eps.is_finite() && eps >= 0.0 {
        Ok(())
    } else {
        Err(format!("--eps must be a finite nonnegative number, got {eps}"))
    }
}

fn bound(a: &BoundArgs) -> CmdResult {
    check_eps(a.eps)?;
    let d = predicate(&a.predicate)?;
    let report = bound_report(&d, a.eps, a.precision.mode()).map_err(|e| e.to_string())?;
    let text = match a.output.format.unwrap_or(Format::Json) {
        Format::Json => json(&report)?,
        Format::Csv => format!("{}\n{}\n", FullReport::csv_header(), report.csv_row()),
    };
    emit(&a.output, text)?;
    Ok(report.passed())
}

#[derive(Serialize)]
struct EigRow {
    s: usize,
    t: usize,
    numerator: String,
    denominator: String,
}

#[derive(Serialize)]
struct EigJson {
    n: usize,
    k: usize,
    normalized: bool,
    rows: Vec<EigRow>,
}

fn eig(a: &EigArgs) -> CmdResult {
    let table = hahn_table(a.n, a.k).map_err(|e| e.to_string())?;
    let text = match a.output.format.unwrap_or(Format::Csv) {
        Format::Csv => table.to_csv(a.normalized),
        Format::Json => {
            let mut rows = Vec::new();
            for s in 0..=a.k {
                for t in 0..=a.k {
                    let (numerator, denominator) = if a.normalized {
                        let v = &table.lambda[s][t];
                        (v.numer().to_string(), v.denom().to_string())
                    } else {
                        (table.raw[s][t].to_string(), "1".to_string())
                    };
                    rows.push(EigRow { s, t, numerator, denominator });
                }
            }
            json(&EigJson { n: a.n, k: a.k, normalized: a.normalized, rows })?
        }
    };
    emit(&a.output, text)?;
    Ok(true)
}

#[derive(Serialize)]
struct DegreeJson {
    n: usize,
    predicate: String,
    approx_degree: usize,
    polynomial: PolyApprox,
    recomputed_error: f64,
}

fn degree(a: &DegreeArgs) -> CmdResult {
    let d = predicate(&a.predicate)?;
    let mode = a.precision.mode();
    let deg = approx_degree(&d, mode).map_err(|e| e.to_string())?;
    let poly = best_poly_approx(&d, deg, mode).map_err(|e| e.to_string())?;
    let recomputed = poly.recomputed_error(&d);
    let text = match a.output.format.unwrap_or(Format::Json) {
        Format::Json => json(&DegreeJson {
            n: d.n(),
            predicate: d.to_string(),
            approx_degree: deg,
            recomputed_error: recomputed,
            polynomial: poly,
        })?,
        Format::Csv => format!("n,predicate,approx_degree,error\n{},{},{},{}\n", d.n(), d, deg, poly.error),
    };
    emit(&a.output, text)?;
    Ok(true)
}

#[derive(Serialize)]
struct PhiJson {
    #[serde(flatten)]
    bound: TraceLowerBound,
    #[serde(rename = "log2_phi_over_N")]
    log2_phi_over_n: Option<f64>,
    qcc_lower_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    chain: Option<BoundReport>,
}

fn phi(a: &PhiArgs) -> CmdResult {
    check_eps(a.eps)?;
    let n = a
        .predicate
        .n
        .ok_or_else(|| "phi needs --n (the ground set size of the instance)".to_string())?;
    let d = SymmetricPredicate::parse(&a.predicate.pred, Some(n))
        .or_else(|_| SymmetricPredicate::parse(&a.predicate.pred, None))
        .map_err(|e| e.to_string())?;
    let d = d.restrict(a.k).map_err(|e| e.to_string())?;
    let mode = a.precision.mode();
    let tb = trace_lower_bound(n, a.k, &d, a.eps, mode).map_err(|e| e.to_string())?;
    let chain = match a.l {
        Some(l) => Some(chain_report(n, a.k, &d, l, a.eps, mode).map_err(|e| e.to_string())?),
        None => None,
    };
    let passed = chain.as_ref().is_none_or(|c| c.checks.iter().all(|c| c.passed));
    let log2 = (tb.ratio > 0.0).then(|| tb.log2_ratio());
    let out = PhiJson {
        log2_phi_over_n: log2,
        qcc_lower_bound: log2.map_or(0.0, |v| v.max(0.0)),
        bound: tb,
        chain,
    };
    let text = match a.output.format.unwrap_or(Format::Json) {
        Format::Json => json(&out)?,
        Format::Csv => format!(
            "n,k,eps,phi,ratio,log2_phi_over_N,qcc_lower_bound\n{},{},{},{},{},{},{}\n",
            n,
            a.k,
            a.eps,
            out.bound.phi,
            out.bound.ratio,
            out.log2_phi_over_n.map(|v| v.to_string()).unwrap_or_default(),
            out.qcc_lower_bound
        ),
    };
    emit(&a.output, text)?;
    Ok(passed)
}

fn parse_dims(text: &str) -> Result<ProtocolDims, String> {
    let parts: Vec<usize> = text
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| format!("--dims expects INPUTS,WORK,ENTANGLED, got `{text}`"))?;
    match parts[..] {
        [x, w, e] => Ok(ProtocolDims::new(x, w, e)),
        _ => Err(format!("--dims expects three sizes, got `{text}`")),
    }
}

fn simulate(a: &SimulateArgs) -> CmdResult {
    let dims = parse_dims(&a.dims)?;
    let mode = match a.weights {
        Weights::Uniform => WeightMode::Uniform,
        Weights::Random => WeightMode::Random,
    };
    let spec = random_protocol(a.seed, dims, a.c, mode).map_err(|e| e.to_string())?;
    let report = verify_trace_bound(&spec).map_err(|e| e.to_string())?;
    let text = match a.output.format.unwrap_or(Format::Json) {
        Format::Json => json(&report)?,
        Format::Csv => format!(
            "trace_norm,bound,margin,c,N\n{},{},{},{},{}\n",
            report.trace_norm, report.bound, report.margin, report.c, report.n
        ),
    };
    emit(&a.output, text)?;
    Ok(report.holds())
}

fn verify(a: &VerifyArgs) -> CmdResult {
    let report = run_suite(a.budget.into(), a.seed);
    let text = match a.output.format.unwrap_or(Format::Json) {
        Format::Json => json(&report)?,
        Format::Csv => {
            let mut s = String::from("name,passed,detail\n");
            for c in &report.checks {
                s.push_str(&format!("{},{},\"{}\"\n", c.name, c.passed, c.detail.replace('"', "'")));
            }
            s
        }
    };
    emit(&a.output, text)?;
    Ok(report.passed)
}
