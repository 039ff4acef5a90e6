mod args;

use std::fmt::Write as _;
use std::fs;
use std::process::ExitCode;

use clap::Parser;
use serde::Serialize;
use serde_json::json;

use programsey::oracle::{self, CountReport, OracleBudget, PartitionReport};
use programsey::search::{self, SearchBudget};
use programsey::spectral::{self, display_beta};
use programsey::witness::WitnessFile;
use programsey::{Error, Family};

use args::{BoundCmd, Cli, Command, FamilyArgs, Format, OracleArgs, OracleCmd, SearchCmd};

const EXIT_FAILED_CHECK: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

/// A command's outcome: text to print and whether a checked property held.
struct Outcome {
    out: String,
    passed: bool,
}

impl Outcome {
    fn ok(out: String) -> Self {
        Outcome { out, passed: true }
    }
}

#[derive(Debug)]
enum CliError {
    Lib(Error),
    Io(String),
    /// Random search found nothing within its move budget.
    NoWitness,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(Error::InvalidInput(_) | Error::Parse(_)) | CliError::Io(_) => EXIT_USAGE,
            CliError::Lib(Error::CheckFailed(_)) => EXIT_FAILED_CHECK,
            CliError::Lib(
                Error::BudgetExceeded(_)
                | Error::SearchBudgetExceeded { .. }
                | Error::Convergence { .. },
            )
            | CliError::NoWitness => EXIT_BUDGET,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Lib(Error::InvalidInput(_)) => "invalid_input",
            CliError::Lib(Error::Parse(_)) => "parse",
            CliError::Lib(Error::CheckFailed(_)) => "check_failed",
            CliError::Lib(Error::BudgetExceeded(_)) => "budget_exceeded",
            CliError::Lib(Error::SearchBudgetExceeded { .. }) => "search_budget_exceeded",
            CliError::Lib(Error::Convergence { .. }) => "convergence",
            CliError::Io(_) => "io",
            CliError::NoWitness => "no_witness",
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Lib(e) => e.to_string(),
            CliError::Io(s) => s.clone(),
            CliError::NoWitness => "no valid coloring found within the move budget".into(),
        }
    }
}

type CliResult = Result<Outcome, CliError>;

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes")
}

fn family(f: &FamilyArgs) -> Result<Family, CliError> {
    Ok(Family::from_parts(&f.family, f.param)?)
}

fn oracle_budget(a: &OracleArgs) -> OracleBudget {
    OracleBudget {
        max_points: a.max_points,
        max_colorings: a.max_colorings,
    }
}

fn write_file(path: &std::path::Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn run_bound(cmd: &BoundCmd, format: Format) -> CliResult {
    match *cmd {
        BoundCmd::Semi { m, k } => {
            let b = spectral::alpha_bound(m)?;
            let threshold = k.map(|k| b.threshold(k));
            Ok(Outcome::ok(match format {
                Format::Json => to_json(&json!({ "bound": b, "k": k, "threshold": threshold })),
                Format::Csv => format!(
                    "m,alpha,k,threshold\n{m},{},{},{}\n",
                    b.base,
                    k.map_or(String::new(), |k| k.to_string()),
                    threshold.map_or(String::new(), |t| t.to_string())
                ),
                Format::Text => {
                    let mut s = format!("alpha({m}) = {:.6}\n", b.base);
                    if let (Some(k), Some(t)) = (k, threshold) {
                        let _ = writeln!(s, "floor(alpha^{k}) = {t}");
                    }
                    s
                }
            }))
        }
        BoundCmd::Quasi { r, n, k, tol } => {
            let b = spectral::beta_quasi(r, n, tol)?;
            let lambda = b.lambda_max.expect("quasi bound has an eigenvalue");
            let threshold = k.map(|k| b.threshold(k));
            Ok(Outcome::ok(match format {
                Format::Json => to_json(&json!({ "bound": b, "k": k, "threshold": threshold })),
                Format::Csv => format!(
                    "r,n,lambda_max,residual,beta,useful\n{r},{n},{lambda},{},{},{}\n",
                    b.residual, b.base, b.useful
                ),
                Format::Text => {
                    let mut s = format!(
                        "beta({r},{n}) = {:.6}\nlambda_max = {lambda:.10}\nresidual = {:e}\nuseful = {}\n",
                        b.base, b.residual, b.useful
                    );
                    if let (Some(k), Some(t)) = (k, threshold) {
                        let _ = writeln!(s, "floor(beta^{k}) = {t}");
                    }
                    s
                }
            }))
        }
        BoundCmd::Compare { r, n, k, m } => {
            let c = spectral::comparison_bounds(r, n, k, m)?;
            Ok(Outcome::ok(match format {
                Format::Json => to_json(&c),
                Format::Csv => format!(
                    "r,n,k,m,naive_quasi,landman_semi,alpha_power,beta_power\n{r},{n},{k},{m},{},{},{},{}\n",
                    c.naive_quasi, c.landman_semi, c.alpha_power, c.beta_power
                ),
                Format::Text => format!(
                    "naive quasi (sqrt(r/(n+1)))^k = {:.6}\nlandman semi 2k^2/m = {:.6}\nalpha(m)^k = {:.6}\nbeta(r,n)^k = {:.6}\n",
                    c.naive_quasi, c.landman_semi, c.alpha_power, c.beta_power
                ),
            }))
        }
    }
}

fn run_table(r_max: usize, n_max: usize, tol: f64, format: Format) -> CliResult {
    if r_max < 2 || n_max < 1 {
        return Err(Error::InvalidInput("need --r-max >= 2 and --n-max >= 1".into()).into());
    }
    let rows = spectral::beta_table(r_max, n_max, tol)?;
    let out = match format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut s = String::from("r,n,alpha,lambda_max,residual,beta,useful,display\n");
            for row in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{}",
                    row.r,
                    row.n,
                    row.alpha,
                    row.lambda_max,
                    row.residual,
                    row.beta,
                    row.useful,
                    display_beta(row.beta)
                );
            }
            s
        }
        Format::Text => {
            let mut s = String::from("r\\n");
            for n in 1..=n_max {
                let _ = write!(s, " {n:>8}");
            }
            s.push('\n');
            for chunk in rows.chunks(n_max) {
                let _ = write!(s, "{:<3}", chunk[0].r);
                for row in chunk {
                    let _ = write!(s, " {:>8}", display_beta(row.beta));
                }
                s.push('\n');
            }
            s
        }
    };
    Ok(Outcome::ok(out))
}

fn count_csv_header() -> &'static str {
    "r,n_points,k,family,param,mono_count,total,bound_value,bound_approx,bound_satisfied\n"
}

fn count_csv_row(c: &CountReport) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{}\n",
        c.r,
        c.n_points,
        c.k,
        c.family.kind(),
        c.family.param(),
        c.mono_count,
        c.total,
        c.bound_value,
        c.bound_approx,
        c.bound_satisfied
    )
}

fn render_count(c: &CountReport, format: Format) -> String {
    match format {
        Format::Json => to_json(c),
        Format::Csv => format!("{}{}", count_csv_header(), count_csv_row(c)),
        Format::Text => format!(
            "{} colorings of [1,{}] with a monochromatic {}-term {}: {} of {} ({:.6})\nbound {} ~ {:.6e}: {}\n",
            c.r,
            c.n_points,
            c.k,
            c.family,
            c.mono_count,
            c.total,
            c.proportion(),
            c.bound_value,
            c.bound_approx,
            if c.bound_satisfied { "satisfied" } else { "VIOLATED" }
        ),
    }
}

fn render_partition(p: &PartitionReport, format: Format, verdict: bool) -> String {
    match format {
        Format::Json => to_json(p),
        Format::Csv => {
            let mut s = String::from("terms,conjugate,weight,primary_count,bound\n");
            for c in &p.candidates {
                let join =
                    |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    join(&c.terms),
                    join(&c.conjugate),
                    c.weight,
                    c.primary_count,
                    c.bound
                );
            }
            s
        }
        Format::Text => {
            let mut s = format!(
                "(a,d)=({},{}) {} k={} N={} r={}: {} of {} colorings have a monochromatic candidate\n",
                p.a, p.d, p.family, p.k, p.n_points, p.r, p.with_mono, p.total
            );
            for c in &p.candidates {
                let _ = writeln!(
                    s,
                    "  {:?} u={:?} w={} primary in {} (bound {})",
                    c.terms, c.conjugate, c.weight, c.primary_count, c.bound
                );
            }
            let _ = writeln!(s, "{}", if verdict { "holds" } else { "FAILS" });
            s
        }
    }
}

fn run_oracle(cmd: &OracleCmd, format: Format) -> CliResult {
    match cmd {
        OracleCmd::Count(a) | OracleCmd::Verify(a) => {
            let f = family(&a.family)?;
            let rep = oracle::verify_counting_inequality(a.r, a.points, a.k, f, &oracle_budget(a))?;
            let passed = matches!(cmd, OracleCmd::Count(_)) || rep.bound_satisfied;
            Ok(Outcome {
                out: render_count(&rep, format),
                passed,
            })
        }
        OracleCmd::Partition { base, a, d } | OracleCmd::Forced { base, a, d } => {
            let f = family(&base.family)?;
            let rep = oracle::primary_census(
                base.r,
                base.points,
                base.k,
                f,
                *a,
                *d,
                &oracle_budget(base),
            )?;
            let passed = match cmd {
                OracleCmd::Partition { .. } => rep.partition_holds,
                _ => rep.forced_bound_holds,
            };
            Ok(Outcome {
                out: render_partition(&rep, format, passed),
                passed,
            })
        }
        OracleCmd::Sweep(a) => {
            let f = family(&a.family)?;
            let budget = oracle_budget(a);
            let reports = (1..=a.points)
                .map(|n| oracle::count_mono_colorings(a.r, n, a.k, f, &budget))
                .collect::<Result<Vec<_>, _>>()?;
            let passed = reports.iter().all(|r| r.bound_satisfied);
            let out = match format {
                Format::Json => to_json(&reports),
                Format::Csv => std::iter::once(count_csv_header().to_string())
                    .chain(reports.iter().map(count_csv_row))
                    .collect(),
                Format::Text => reports
                    .iter()
                    .map(|r| render_count(r, Format::Text))
                    .collect(),
            };
            Ok(Outcome { out, passed })
        }
    }
}

fn run_search(cmd: &SearchCmd, format: Format) -> CliResult {
    match cmd {
        SearchCmd::Exact {
            r,
            k,
            family: fa,
            max_nodes,
            max_length,
            out,
        } => {
            let f = family(fa)?;
            let budget = SearchBudget {
                max_nodes: *max_nodes,
                max_length: *max_length,
                ..SearchBudget::default()
            };
            let cert = search::exact_threshold(*r, *k, f, &budget)?;
            let wf = cert.witness_file()?;
            if let Some(path) = out {
                write_file(path, &wf.to_text())?;
            }
            let passed = wf.check()?;
            let text = match format {
                Format::Json => to_json(&cert),
                Format::Csv => format!(
                    "family,param,r,k,value,witness,nodes_explored,exhaustive\n{},{},{},{},{},{},{},{}\n",
                    f.kind(),
                    f.param(),
                    r,
                    k,
                    cert.value,
                    cert.witness,
                    cert.nodes_explored,
                    cert.exhaustive
                ),
                Format::Text => format!(
                    "value = {}\nwitness = {}\nnodes = {}\nexhaustive = {}\n",
                    cert.value, cert.witness, cert.nodes_explored, cert.exhaustive
                ),
            };
            Ok(Outcome { out: text, passed })
        }
        SearchCmd::Witness {
            r,
            points,
            k,
            family: fa,
            seed,
            max_moves,
            restarts,
            out,
        } => {
            let f = family(fa)?;
            let budget = SearchBudget {
                max_nodes: *max_moves,
                seed: *seed,
                restarts: *restarts,
                ..SearchBudget::default()
            };
            let chi = search::random_witness_search(*r, *points, *k, f, &budget)?
                .ok_or(CliError::NoWitness)?;
            let wf = WitnessFile::new(chi, *k, f)?;
            if let Some(path) = out {
                write_file(path, &wf.to_text())?;
            }
            let passed = wf.check()?;
            let text = match format {
                Format::Json => to_json(&json!({
                    "header": wf.header(),
                    "coloring": wf.coloring.to_digits(),
                    "valid": passed,
                })),
                _ => wf.to_text(),
            };
            Ok(Outcome { out: text, passed })
        }
    }
}

fn run_check(path: &std::path::Path, format: Format) -> CliResult {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let wf = WitnessFile::parse(&text)?;
    let mono = programsey::find_monochromatic(&wf.coloring, wf.k, wf.family)?;
    let passed = mono.is_none();
    let out = match format {
        Format::Json => to_json(&json!({
            "header": wf.header(),
            "valid": passed,
            "monochromatic": mono,
        })),
        Format::Csv => format!("valid\n{passed}\n"),
        Format::Text => match &mono {
            None => "valid\n".to_string(),
            Some(p) => format!(
                "invalid: monochromatic {:?} (d={}, color {})\n",
                p.terms(),
                p.low_difference(),
                wf.coloring.color(p.first())
            ),
        },
    };
    Ok(Outcome { out, passed })
}

fn run(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Bound(cmd) => run_bound(cmd, cli.format),
        Command::Table { r_max, n_max, tol } => run_table(*r_max, *n_max, *tol, cli.format),
        Command::Oracle(cmd) => run_oracle(cmd, cli.format),
        Command::Search(cmd) => run_search(cmd, cli.format),
        Command::Check { file } => run_check(file, cli.format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.out);
            if !outcome.out.ends_with('\n') {
                println!();
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAILED_CHECK)
            }
        }
        Err(e) => {
            if cli.json_errors {
                let mut body = json!({
                    "error": e.kind(),
                    "message": e.message(),
                    "exit_code": e.exit_code(),
                });
                if let CliError::Lib(Error::SearchBudgetExceeded { nodes, best }) = &e {
                    body["nodes"] = json!(nodes);
                    body["best_lower_bound"] = json!(best.n_points() + 1);
                    body["best_coloring"] = json!(best.to_digits());
                }
                eprintln!("{body}");
            } else {
                eprintln!("error: {}", e.message());
            }
            ExitCode::from(e.exit_code())
        }
    }
}
