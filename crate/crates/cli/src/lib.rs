//! Command-line driver. [`run`] holds the whole behaviour so tests can call
//! it in-process; the binary only forwards `std::env::args`.

mod args;

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::Parser;
use lincg::cg::{solve, QuadraticProblem, SolveOutput, SolverConfig, TerminationReason};
use lincg::io::{
    builtin_problem, read_matrix_market, read_vector, write_matrix_market, write_report_tabular, write_trace,
    write_vector, BuiltinFamily, BuiltinProblemSpec, MarketLayout, RhsMode, TraceDocument, TraceFormat,
};
use lincg::linalg::{norm, SpectrumSpec};
use lincg::verify::{CheckKind, IdentityId, TolerancePolicy, VerificationReport, Verifier};
use lincg::Error;

pub use args::Cli;
use args::{BuiltinArgs, Command, FamilyArg, FormatArg, LayoutArg, RhsArg, RunArgs, SourceArgs};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_ITERATION_CAP: i32 = 2;
pub const EXIT_BREAKDOWN: i32 = 3;
pub const EXIT_IDENTITY_FAILED: i32 = 4;

type CliResult<T> = std::result::Result<T, Error>;

/// Parses `argv` (program name first) and executes it. Returns the process
/// exit code; diagnostics go to `stderr`, summaries to `stdout`.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> CliResult<i32> {
    match command {
        Command::Solve(args) => cmd_solve(&args, out),
        Command::Verify(args) => cmd_verify(&args, out),
        Command::Compare { run, compare_tol } => cmd_compare(&run, compare_tol, out),
        Command::Generate { source, output, layout } => cmd_generate(&source, &output, layout, out),
    }
}

struct Loaded {
    problem: QuadraticProblem,
    description: String,
}

fn load(source: &SourceArgs) -> CliResult<Loaded> {
    match (&source.matrix, source.builtin.builtin) {
        (Some(path), None) => load_file(path, source),
        (None, Some(_)) => {
            let spec = builtin_spec(&source.builtin)?;
            Ok(Loaded {
                problem: builtin_problem(&spec)?,
                description: spec.describe(),
            })
        }
        _ => Err(Error::InvalidSpec("give exactly one of --matrix or --builtin".into())),
    }
}

fn load_file(path: &Path, source: &SourceArgs) -> CliResult<Loaded> {
    let a = read_matrix_market(BufReader::new(open(path)?))?;
    let n = a.order();
    let b = &source.builtin;
    let (problem, rhs_desc) = if let Some(rhs) = &source.rhs {
        let v = read_vector(BufReader::new(open(rhs)?))?;
        (QuadraticProblem::new(a, v)?, rhs.display().to_string())
    } else if let Some(x) = &b.known_solution {
        (QuadraticProblem::with_solution(a, x)?, "known-solution".to_string())
    } else {
        match b.b {
            RhsArg::Ones => (QuadraticProblem::new(a, vec![1.0; n])?, "ones".to_string()),
            RhsArg::Random => {
                // reuse the builtin generator so file and builtin problems draw identical b vectors
                let seed = b.b_seed.unwrap_or(b.seed);
                let diag = BuiltinProblemSpec::new(
                    BuiltinFamily::Diagonal {
                        eigenvalues: vec![1.0; n],
                    },
                    n,
                    RhsMode::Random { seed },
                );
                let rhs = builtin_problem(&diag)?.rhs().to_vec();
                (QuadraticProblem::new(a, rhs)?, format!("random(seed={seed})"))
            }
        }
    };
    Ok(Loaded {
        problem,
        description: format!("{} n={n} b={rhs_desc}", path.display()),
    })
}

fn builtin_spec(args: &BuiltinArgs) -> CliResult<BuiltinProblemSpec> {
    let family_arg = args
        .builtin
        .ok_or_else(|| Error::InvalidSpec("--builtin is required".into()))?;
    let n = match (family_arg, args.n, &args.eigs) {
        (FamilyArg::Diagonal, None, Some(e)) => e.len(),
        (FamilyArg::RandomSpd, None, Some(e)) => e.len(),
        (_, Some(n), _) => n,
        (_, None, _) => return Err(Error::InvalidSpec("--n is required for this family".into())),
    };
    let family = match family_arg {
        FamilyArg::Laplacian1d => BuiltinFamily::Laplacian1d,
        FamilyArg::Hilbert => BuiltinFamily::Hilbert,
        FamilyArg::Diagonal => BuiltinFamily::Diagonal {
            eigenvalues: args
                .eigs
                .clone()
                .ok_or_else(|| Error::InvalidSpec("diagonal needs --eigs".into()))?,
        },
        FamilyArg::RandomSpd => {
            let spectrum = match &args.eigs {
                Some(e) => SpectrumSpec::Explicit(e.clone()),
                None => SpectrumSpec::Range {
                    min: 1.0,
                    max: args.cond,
                    distribution: args.distribution.into(),
                },
            };
            BuiltinFamily::RandomSpd {
                spectrum,
                seed: args.seed,
            }
        }
    };
    let rhs = match (&args.known_solution, args.b) {
        (Some(x), _) => RhsMode::KnownSolution(x.clone()),
        (None, RhsArg::Ones) => RhsMode::Ones,
        (None, RhsArg::Random) => RhsMode::Random {
            seed: args.b_seed.unwrap_or(args.seed),
        },
    };
    Ok(BuiltinProblemSpec::new(family, n, rhs))
}

fn solve_loaded(loaded: &Loaded, config: &SolverConfig) -> CliResult<SolveOutput> {
    let x0 = vec![0.0; loaded.problem.dim()];
    solve(&loaded.problem, &x0, config)
}

fn document(args: &RunArgs, loaded: &Loaded, output: &SolveOutput) -> CliResult<TraceDocument> {
    let doc = TraceDocument::from_trace(&output.trace, &loaded.problem, &loaded.description, args.vectors)?;
    Ok(if args.no_timestamp {
        doc
    } else {
        let secs = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        doc.with_timestamp(secs)
    })
}

fn with_path(path: &Path, e: std::io::Error) -> Error {
    Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

fn open(path: &Path) -> CliResult<File> {
    File::open(path).map_err(|e| with_path(path, e))
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).map_err(|e| with_path(path, e))?))
}

fn write_summary(out: &mut dyn Write, loaded: &Loaded, output: &SolveOutput) -> CliResult<()> {
    let t = &output.trace;
    writeln!(out, "problem: {}", loaded.description)?;
    writeln!(out, "iterations: {}", t.terminated_at())?;
    writeln!(out, "termination: {:?}", t.reason)?;
    if let Some(b) = &t.breakdown {
        writeln!(out, "breakdown: {b}")?;
    }
    writeln!(out, "final_grad_norm: {:e}", norm(&t.terminal.g))?;
    writeln!(out, "objective: {:e}", loaded.problem.objective(&output.x)?)?;
    Ok(())
}

/// Writes the document, or only its verification residuals for tabular
/// output when `report_only` is set.
fn emit(args: &RunArgs, doc: &TraceDocument, report_only: bool) -> CliResult<()> {
    let Some(path) = &args.output else {
        return Ok(());
    };
    let mut w = create(path)?;
    match (args.format, &doc.verification, report_only) {
        (FormatArg::Tabular, Some(report), true) => write_report_tabular(report, &mut w)?,
        (format, _, _) => write_trace(doc, TraceFormat::from(format), &mut w)?,
    }
    w.flush()?;
    Ok(())
}

fn cmd_solve(args: &RunArgs, out: &mut dyn Write) -> CliResult<i32> {
    let loaded = load(&args.source)?;
    let output = solve_loaded(&loaded, &args.solver.config())?;
    write_summary(out, &loaded, &output)?;
    emit(args, &document(args, &loaded, &output)?, false)?;
    Ok(match output.trace.reason {
        TerminationReason::GradientBelowTolerance => EXIT_OK,
        TerminationReason::IterationCap => EXIT_ITERATION_CAP,
        TerminationReason::Breakdown => EXIT_BREAKDOWN,
    })
}

fn write_report_summary(out: &mut dyn Write, report: &VerificationReport) -> CliResult<()> {
    for check in &report.checks {
        let status = if check.pass { "pass" } else { "FAIL" };
        write!(out, "{:?}: {status}", check.kind)?;
        for w in &check.worst {
            write!(out, " {:?}={:.3e}", w.id, w.normalized.abs())?;
        }
        if check.skipped > 0 {
            write!(out, " skipped={}", check.skipped)?;
        }
        writeln!(out)?;
        for f in &check.failures {
            writeln!(out, "  {f}")?;
        }
    }
    writeln!(out, "policy: {}", report.policy.note)?;
    writeln!(
        out,
        "exact_arithmetic_compliance: {}",
        report.exact_arithmetic_compliance()
    )?;
    Ok(())
}

fn cmd_verify(args: &RunArgs, out: &mut dyn Write) -> CliResult<i32> {
    let loaded = load(&args.source)?;
    let output = solve_loaded(&loaded, &args.solver.config())?;
    let policy = TolerancePolicy::for_problem(&loaded.problem)?;
    let report = Verifier::new(policy).all(&output.trace, &loaded.problem)?;
    write_summary(out, &loaded, &output)?;
    write_report_summary(out, &report)?;
    let pass = report.pass;
    emit(args, &document(args, &loaded, &output)?.with_verification(report), true)?;
    Ok(if pass { EXIT_OK } else { EXIT_IDENTITY_FAILED })
}

fn cmd_compare(args: &RunArgs, tolerance: f64, out: &mut dyn Write) -> CliResult<i32> {
    if tolerance.is_nan() || tolerance < 0.0 {
        return Err(Error::InvalidSpec("--compare-tol must be non-negative".into()));
    }
    let loaded = load(&args.source)?;
    let output = solve_loaded(&loaded, &args.solver.config())?;
    let mut policy = TolerancePolicy::strict();
    policy.tolerances.stepsize = tolerance;
    let report = Verifier::new(policy).stepsize_equivalence(&output.trace)?;
    let check = report
        .check(CheckKind::StepsizeEquivalence)
        .expect("stepsize report has its own check");
    let worst = check.max_normalized(IdentityId::StepsizeEquivalence);
    write_summary(out, &loaded, &output)?;
    writeln!(out, "compared_iterations: {}", check.residuals.len())?;
    writeln!(out, "max_stepsize_discrepancy: {worst:e}")?;
    writeln!(out, "tolerance: {tolerance:e}")?;
    for f in &check.failures {
        writeln!(out, "  {f}")?;
    }
    let pass = check.pass && worst <= tolerance;
    writeln!(out, "result: {}", if pass { "pass" } else { "FAIL" })?;
    emit(args, &document(args, &loaded, &output)?.with_verification(report), true)?;
    Ok(if pass { EXIT_OK } else { EXIT_IDENTITY_FAILED })
}

fn cmd_generate(source: &BuiltinArgs, output: &Path, layout: Option<LayoutArg>, out: &mut dyn Write) -> CliResult<i32> {
    let spec = builtin_spec(source)?;
    let problem = builtin_problem(&spec)?;
    let layout = match layout {
        Some(LayoutArg::Coordinate) => MarketLayout::Coordinate,
        Some(LayoutArg::Array) => MarketLayout::Array,
        None if problem.matrix().is_sparse() => MarketLayout::Coordinate,
        None => MarketLayout::Array,
    };
    let rhs_path = output.with_extension("rhs");
    if rhs_path == output {
        return Err(Error::InvalidSpec("--output must not itself end in .rhs".into()));
    }
    let mut w = create(output)?;
    write_matrix_market(problem.matrix(), layout, &mut w)?;
    w.flush()?;
    let mut w = create(&rhs_path)?;
    write_vector(problem.rhs(), &mut w)?;
    w.flush()?;
    writeln!(out, "problem: {}", spec.describe())?;
    writeln!(out, "matrix: {}", output.display())?;
    writeln!(out, "rhs: {}", rhs_path.display())?;
    Ok(EXIT_OK)
}
