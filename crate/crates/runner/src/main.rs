use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fano_casebook::CaseError;
use fano_runner::pipeline::{sign_certificates, seed_for, show_point, status_of, SPOT_CHECKS};
use fano_runner::{markdown, prepare, report, verify_all_with_jobs, verify_case, CaseOutcome, CheckResult};
use fano_symbolic::parse_point;

#[derive(Parser)]
#[command(name = "fano", about = "Verify beta and Donaldson-Futaki invariants of the case book")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Oracle {
    Closed,
    Series,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Md,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline on one case.
    Verify {
        #[arg(long = "case")]
        case: String,
        /// Keep only the checks about this divisor.
        #[arg(long)]
        divisor: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Run every case.
    VerifyAll {
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Print the beta invariant of a divisor, optionally at a point.
    Beta {
        #[arg(long = "case")]
        case: String,
        #[arg(long)]
        divisor: String,
        #[arg(long)]
        at: Option<String>,
    },
    /// Print the Donaldson-Futaki invariant of a product test configuration.
    Df {
        #[arg(long = "case")]
        case: String,
        #[arg(long, value_enum, default_value = "both")]
        oracle: Oracle,
    },
    /// Run one sign certificate.
    Certify {
        #[arg(long = "case")]
        case: String,
        #[arg(long)]
        target: String,
    },
    /// Print the summary table.
    Report {
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
    },
}

enum Failure {
    Verification,
    Input(String),
}

impl From<CaseError> for Failure {
    fn from(e: CaseError) -> Self {
        Failure::Input(e.to_string())
    }
}

fn print_checks(checks: &[&CheckResult]) {
    for c in checks {
        let tag = match (c.ok, &c.erratum) {
            (true, _) => "PASS",
            (false, Some(_)) => "ERRATUM",
            (false, None) => "FAIL",
        };
        let mut line = format!("{tag} [{}] {}", c.criterion, c.name);
        if !c.ok {
            line.push_str(&format!(": {}", c.detail));
        }
        if let Some(e) = &c.erratum {
            line.push_str(&format!(" ({e})"));
        }
        println!("{line}");
    }
}

fn summary_line(o: &CaseOutcome, checks: &[&CheckResult]) -> String {
    let failed = checks.iter().filter(|c| !c.ok).count();
    format!(
        "{} {}: {} checks, {failed} failed, status {}, verdict: {}",
        if failed == 0 { "PASS" } else { "FAIL" },
        o.id,
        checks.len(),
        status_of(checks.iter().copied()).as_str(),
        o.verdict
    )
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Verify { case, divisor, json } => {
            let o = verify_case(&case)?;
            let checks: Vec<&CheckResult> = o
                .checks
                .iter()
                .filter(|c| divisor.is_none() || c.divisor.is_none() || c.divisor == divisor)
                .collect();
            if json {
                println!("{}", serde_json::to_string_pretty(&checks).expect("checks serialize"));
            } else {
                print_checks(&checks);
                println!("{}", summary_line(&o, &checks));
                if let Some(f) = checks.iter().find(|c| !c.ok) {
                    eprintln!("first failure: {}: {}", f.name, f.detail);
                }
            }
            if checks.iter().all(|c| c.ok) {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        Command::VerifyAll { jobs, json } => {
            let start = std::time::Instant::now();
            let outcomes = verify_all_with_jobs(jobs)?;
            let passed = outcomes.iter().filter(|o| o.passed()).count();
            if json {
                let doc: Vec<_> = outcomes
                    .iter()
                    .map(|o| serde_json::json!({"id": o.id, "status": o.status().as_str(), "checks": o.checks}))
                    .collect();
                println!("{}", serde_json::to_string_pretty(&doc).expect("outcomes serialize"));
            } else {
                for o in &outcomes {
                    let checks: Vec<&CheckResult> = o.checks.iter().collect();
                    println!("{}", summary_line(o, &checks));
                    if let Some(f) = o.first_failure() {
                        println!("  first failure: {}: {}", f.name, f.detail);
                    }
                }
                println!("{passed} of {} cases passed, {} failed", outcomes.len(), outcomes.len() - passed);
            }
            eprintln!("elapsed {:.2?}", start.elapsed());
            if passed == outcomes.len() {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        Command::Beta { case, divisor, at } => {
            let p = prepare(&case)?;
            let point = match &at {
                Some(s) => Some(parse_point(s).map_err(|e| Failure::Input(e.to_string()))?),
                None => None,
            };
            let key = format!("beta:{divisor}");
            let mut printed = false;
            if let Some(list) = p.computed.branches.get(&divisor) {
                for b in list {
                    match b.value() {
                        Ok(v) => println!("{}: {v}", b.label(&divisor)),
                        Err(e) => println!("{}: error {e}", b.label(&divisor)),
                    }
                    printed = true;
                }
            } else if let Ok(v) = fano_runner::quantity(&p.case, &p.computed, &key, None) {
                println!("{divisor}: {v}");
                printed = true;
            }
            if !printed {
                return Err(Failure::Input(format!("case {case} has no beta value for {divisor}")));
            }
            if let Some(pt) = point {
                let v = fano_runner::quantity(&p.case, &p.computed, &key, Some(&pt))
                    .and_then(|v| v.eval(&pt).map_err(|e| e.to_string()))
                    .map_err(Failure::Input)?;
                println!("at {}: {v}", show_point(&pt));
            }
            Ok(())
        }
        Command::Df { case, oracle } => {
            let p = prepare(&case)?;
            let d = match &p.computed.df {
                Some(Ok(d)) => d,
                Some(Err(e)) => return Err(Failure::Input(e.clone())),
                None => return Err(Failure::Input(format!("case {case} has no localization data"))),
            };
            if matches!(oracle, Oracle::Closed | Oracle::Both) {
                println!("closed: a0 = {}, a1 = {}, b0 = {}, b1 = {}", d.a0, d.a1, d.b0, d.b1);
                println!("closed: DF = {}", d.df);
            }
            if matches!(oracle, Oracle::Series | Oracle::Both) {
                let (a0, a1, b0, b1) = d.series.coefficients(p.case.doc.dim as u32);
                println!("series: a0 = {a0}, a1 = {a1}, b0 = {b0}, b1 = {b1}");
                println!("series: DF = {}", d.series_df);
                println!("series: poles cancel: {}", d.series.poles_cancel());
            }
            if matches!(oracle, Oracle::Both) {
                println!("agreement: {}", d.oracle_agreement && d.df == d.series_df);
                if !(d.oracle_agreement && d.df == d.series_df) {
                    return Err(Failure::Verification);
                }
            }
            Ok(())
        }
        Command::Certify { case, target } => {
            let p = prepare(&case)?;
            let certs = sign_certificates(&p.case, &p.computed).map_err(Failure::Input)?;
            let cert = certs
                .iter()
                .find(|c| c.name == target)
                .ok_or_else(|| Failure::Input(format!("case {case} has no certificate `{target}`")))?;
            let r = cert
                .verify(SPOT_CHECKS, seed_for(&case, &target))
                .map_err(|e| Failure::Input(e.to_string()))?;
            println!("witness: {}", r.certificate.witness);
            for c in &r.checks {
                if c.ok {
                    println!("PASS {}", c.name);
                } else {
                    println!("FAIL {}: {}", c.name, c.detail);
                }
            }
            if r.ok() {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        Command::Report { format } => {
            let outcomes = verify_all_with_jobs(None)?;
            let rows = report::rows(&outcomes);
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&rows).expect("rows serialize")),
                Format::Md => print!("{}", markdown(&rows)),
            }
            let passed = outcomes.iter().filter(|o| o.passed()).count();
            eprintln!("{passed} passed, {} failed", outcomes.len() - passed);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
