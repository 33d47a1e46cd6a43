//! `mixedsdp`: upper bounds for mixed binary/ternary codes from the command line.
//!
//! Exit codes: 0 success, 2 invalid input, 3 solver or certification failure,
//! 4 verification mismatch.

mod store;
mod table;

use clap::{Parser, Subcommand, ValueEnum};
use mixedsdp::sdpa::{certify_output, emit_sdpa};
use mixedsdp::solver::{certify, solve_spec, Provenance};
use mixedsdp::verify::verify_reduction;
use mixedsdp::{build_model, exact_n, BoundRecord, Error, ExactProblem, ProblemSpec, SolverOptions};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;
use store::ResultsStore;

#[derive(Parser, Debug)]
#[command(name = "mixedsdp", version, about = "Semidefinite programming upper bounds for mixed binary/ternary codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute and certify an upper bound on N(n2, n3, d).
    Bound {
        n2: usize,
        n3: usize,
        d: usize,
        /// Hierarchy level: 3 for triples, 2 for the linear programming bound.
        #[arg(long, default_value_t = 3)]
        k: u8,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Write the SDPA file to PATH and stop without solving.
        #[arg(long, value_name = "PATH")]
        emit_only: Option<PathBuf>,
        /// Certify the objective values in an SDPA or CSDP result file instead of solving.
        #[arg(long, value_name = "PATH", conflicts_with = "emit_only")]
        from_output: Option<PathBuf>,
        /// Print the stored record as JSON instead of a summary line.
        #[arg(long)]
        json: bool,
    },
    /// Exact N(n2, n3, d) by clique search (small spaces only).
    Oracle {
        n2: usize,
        n3: usize,
        d: usize,
        /// Also print an optimal code.
        #[arg(long)]
        show_code: bool,
    },
    /// Check the symmetry reduction against explicit matrices.
    Verify {
        n2: usize,
        n3: usize,
        /// Only this distance (default: every d).
        #[arg(long)]
        d: Option<usize>,
    },
    /// Compare computed bounds with the packaged table.
    Table {
        #[arg(value_enum, default_value_t = TableView::Bounds)]
        view: TableView,
        /// Distance or range, e.g. 3 or 3..5.
        #[arg(long, value_parser = table::parse_range, default_value = "1..=1000")]
        d: std::ops::RangeInclusive<usize>,
        #[arg(long, default_value_t = 9)]
        max_length: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Read bounds from the store only; never solve.
        #[arg(long)]
        replay: bool,
    },
    /// Write the reduced problem in SDPA sparse format.
    Emit {
        n2: usize,
        n3: usize,
        d: usize,
        #[arg(long, default_value_t = 3)]
        k: u8,
        #[arg(short, long, value_name = "PATH")]
        output: PathBuf,
        /// Also write the exact problem as JSON next to the SDPA file.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableView {
    Bounds,
    Derived,
}

pub enum BoundOutcome {
    Certified(BoundRecord),
    Failed(Error),
}

pub fn compute_bound(spec: &ProblemSpec, opts: &SolverOptions) -> BoundOutcome {
    let start = Instant::now();
    let result = solve_spec(spec, opts).and_then(|s| certify(&s).map(|b| (s, b)));
    match result {
        Ok((s, b)) => BoundOutcome::Certified(BoundRecord::new(*spec, &s, &b, opts.tol, start.elapsed().as_secs_f64())),
        Err(e) => BoundOutcome::Failed(e),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NonConvergence { .. } | Error::Conditioning(_) | Error::Certification { .. } => 3,
        Error::Verification(_) => 4,
        Error::Io(_) => 1,
        _ => 2,
    }
}

fn check_tol(tol: f64) -> mixedsdp::Result<SolverOptions> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::InvalidSpec(format!("tolerance {tol} outside (0, 1)")));
    }
    Ok(SolverOptions::with_tol(tol))
}

fn run(cli: Cli) -> mixedsdp::Result<()> {
    match cli.command {
        Command::Bound { n2, n3, d, k, tol, emit_only, from_output, json } => {
            let spec = ProblemSpec::new(n2, n3, d, k)?;
            let opts = check_tol(tol)?;
            if let Some(path) = emit_only {
                let p: ExactProblem = build_model(&spec)?;
                emit_sdpa(&p, &path)?;
                println!("wrote {}", path.display());
                return Ok(());
            }
            let rec = match from_output {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)?;
                    BoundRecord::external(spec, &certify_output(&text, &path.display().to_string())?)
                }
                None => match compute_bound(&spec, &opts) {
                    BoundOutcome::Certified(r) => r,
                    BoundOutcome::Failed(e) => return Err(e),
                },
            };
            ResultsStore::from_env().append(&rec)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&rec).expect("record serializes"));
            } else {
                let source = match (&rec.solver_stats, &rec.provenance) {
                    (Some(st), _) => format!("rel gap {:.1e}, {} iterations", st.rel_gap, st.iterations),
                    (None, Provenance::ExternalFile(f)) => format!("from {f}"),
                    (None, Provenance::Solver) => String::new(),
                };
                println!(
                    "N(n2={n2}, n3={n3}, d={d}) <= {}   [k={k}, objective {:.9}, guard {:.1e}, {source}]",
                    rec.certified_bound, rec.sdp_objective, rec.guard
                );
            }
        }
        Command::Oracle { n2, n3, d, show_code } => {
            let spec = ProblemSpec::k3(n2, n3, d)?;
            if show_code {
                let code = mixedsdp::codes::max_code(&spec, mixedsdp::codes::DEFAULT_WORD_CAP)?;
                println!("{}", code.len());
                for w in code {
                    println!("{w}");
                }
            } else {
                println!("{}", exact_n(&spec)?);
            }
        }
        Command::Verify { n2, n3, d } => {
            let ds: Vec<usize> = match d {
                Some(d) => vec![d],
                None => (1..=n2 + n3).collect(),
            };
            let mut failure = None;
            for d in ds {
                let spec = ProblemSpec::k3(n2, n3, d)?;
                let report = verify_reduction(&spec)?;
                for c in &report.checks {
                    println!("{spec} {:<14} {} {}", c.name, if c.passed { "ok" } else { "FAILED" }, c.detail);
                }
                if failure.is_none() {
                    if let Some(c) = report.checks.iter().find(|c| !c.passed) {
                        failure = Some(format!("{spec}: {}: {}", c.name, c.detail));
                    }
                }
            }
            if let Some(f) = failure {
                return Err(Error::Verification(f));
            }
            println!("pass");
        }
        Command::Table { view: TableView::Derived, .. } => print!("{}", table::render_derived()),
        Command::Table { view: TableView::Bounds, d, max_length, tol, replay } => {
            let opts = check_tol(tol)?;
            let rows = table::build_rows(&d, max_length, &opts, &ResultsStore::from_env(), replay)?;
            print!("{}", table::render(&rows));
        }
        Command::Emit { n2, n3, d, k, output, json } => {
            let spec = ProblemSpec::new(n2, n3, d, k)?;
            let p: ExactProblem = build_model(&spec)?;
            emit_sdpa(&p, &output)?;
            println!("wrote {}", output.display());
            if json {
                let path = output.with_extension("json");
                std::fs::write(&path, serde_json::to_string_pretty(&p.to_json()).expect("problem serializes"))?;
                println!("wrote {}", path.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_code_contract() {
        assert_eq!(exit_code(&Error::InvalidSpec(String::new())), 2);
        assert_eq!(exit_code(&Error::Resource(String::new())), 2);
        assert_eq!(exit_code(&Error::NonConvergence { iterations: 1, gap: 1.0, infeas: 1.0 }), 3);
        assert_eq!(exit_code(&Error::Certification { guard: 1.0, objective: 1.0 }), 3);
        assert_eq!(exit_code(&Error::Verification(String::new())), 4);
    }
}
