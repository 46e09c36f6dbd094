//! `lpcvt` command-line driver.
//!
//! Exit status: 0 on success, 1 for bad input, 2 for numerical failures.

mod settings;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};

use lpcvt::io::{self, DomainMode};
use lpcvt::optimize::{evaluate_with, initial_seeds, optimize};
use lpcvt::verify::{self, pipeline_fd_check, SuiteSize};
use lpcvt::{build_rvd, Domain, Method, OptimizerConfig, SeedSet, TensorField, Termination};

use settings::{MethodArg, Mode, RunArgs, Settings};

#[derive(Debug, Parser)]
#[command(name = "lpcvt", version, about = "Anisotropic Lp centroidal Voronoi tessellation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Minimize the energy over the generator positions; writes
    /// PREFIX.seeds.txt and PREFIX.trace.csv
    Optimize(RunArgs),
    /// Evaluate the energy and its gradient once
    Energy(RunArgs),
    /// Run the oracle check suite
    Verify {
        /// Use the full problem sizes instead of the quick ones
        #[arg(long)]
        full: bool,
    },
    /// Compare the analytic gradient with central finite differences
    FdCheck(RunArgs),
}

/// Error that already carries its exit status.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

fn classify(err: anyhow::Error) -> Failure {
    let numerical = err
        .chain()
        .any(|e| e.downcast_ref::<lpcvt::Error>().is_some_and(lpcvt::Error::is_numerical));
    Failure {
        code: if numerical { 2 } else { 1 },
        message: format!("{err:#}"),
    }
}

struct Problem {
    domain: Domain,
    field: TensorField,
    seeds: SeedSet,
}

fn load_problem(s: &Settings) -> anyhow::Result<Problem> {
    let domain = match &s.domain {
        Some(path) => {
            let mode = match s.mode {
                Mode::Volume => DomainMode::Volume,
                Mode::Surface => DomainMode::Surface,
            };
            io::load_domain(path, mode).with_context(|| format!("loading domain {}", path.display()))?
        }
        None => Domain::unit_cube(),
    };
    let field = if s.aniso == "constant" {
        TensorField::identity()
    } else {
        io::load_tensor_field(Path::new(&s.aniso)).with_context(|| format!("loading field {}", s.aniso))?
    };
    let mut seeds = match &s.seeds_file {
        Some(path) => io::load_seeds(path).with_context(|| format!("loading seeds {}", path.display()))?,
        None => initial_seeds(&domain, s.seeds, s.rng_seed)?,
    };
    if s.jitter > 0.0 {
        seeds = seeds.jittered(s.jitter * domain.scale(), s.rng_seed)?;
    }
    Ok(Problem { domain, field, seeds })
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}

fn export_rvd(s: &Settings, pb: &Problem, seeds: &SeedSet) -> anyhow::Result<()> {
    if s.export_rvd {
        let cells = build_rvd(seeds, &pb.domain, &pb.field)?;
        let path = with_suffix(&s.out, ".rvd.obj");
        io::write_file(&path, &io::format_rvd_obj(&cells))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn report_orphans(empty: &[usize]) {
    if !empty.is_empty() {
        eprintln!("warning: {} generator(s) have empty cells: {:?}", empty.len(), empty);
    }
}

fn run_optimize(s: &Settings) -> anyhow::Result<()> {
    let pb = load_problem(s)?;
    let cfg = OptimizerConfig {
        p: s.p,
        max_iters: s.iters,
        grad_tol: s.grad_tol,
        method: match s.method {
            MethodArg::Lbfgs => Method::Lbfgs,
            MethodArg::Sd => Method::Steepest,
        },
        rng_seed: s.rng_seed,
        deterministic: s.deterministic,
        ..Default::default()
    };
    let r = optimize(&pb.seeds, &pb.domain, &pb.field, &cfg)?;
    let seeds_path = with_suffix(&s.out, ".seeds.txt");
    let trace_path = with_suffix(&s.out, ".trace.csv");
    io::write_file(&seeds_path, &io::format_seeds(&r.seeds))?;
    io::write_file(&trace_path, &io::format_trace(&r.trace))?;
    println!("initial F       {:.12e}", r.initial_energy);
    println!("final F         {:.12e}", r.final_evaluation.energy);
    println!("grad_inf_norm   {:.6e}", r.final_evaluation.gradient.inf_norm());
    println!("iterations      {}", r.trace.len());
    println!("termination     {:?}", r.termination);
    println!("wrote {}", seeds_path.display());
    println!("wrote {}", trace_path.display());
    if r.termination == Termination::LineSearchFailed {
        eprintln!("warning: line search failed; output is the last accepted iterate");
    }
    if r.rejected_trials > 0 {
        eprintln!("note: {} line-search trial(s) could not be evaluated", r.rejected_trials);
    }
    report_orphans(&r.final_evaluation.empty_cells);
    export_rvd(s, &pb, &r.seeds)
}

fn run_energy(s: &Settings) -> anyhow::Result<()> {
    let pb = load_problem(s)?;
    let e = evaluate_with(&pb.seeds, &pb.domain, &pb.field, s.p, s.deterministic)?;
    println!("F {:.16e}", e.energy);
    println!("grad_inf_norm {:.16e}", e.gradient.inf_norm());
    report_orphans(&e.empty_cells);
    export_rvd(s, &pb, &pb.seeds)
}

const FD_TOLERANCE: f64 = 1e-4;

fn run_fd_check(s: &Settings) -> Result<(), Failure> {
    let pb = load_problem(s).map_err(classify)?;
    let r = pipeline_fd_check(&pb.seeds, &pb.domain, &pb.field, s.p, s.fd_step)
        .map_err(|e| classify(e.into()))?;
    println!("seeds {}  p {}  h {:e}", pb.seeds.len(), s.p, s.fd_step);
    println!("general position {}", r.general_position);
    let err = r.rel_error();
    println!("max rel. error {err:.6e}");
    if !r.general_position {
        eprintln!("warning: the diagram changes under the perturbation; try --jitter");
    }
    if err > FD_TOLERANCE {
        return Err(Failure {
            code: 2,
            message: format!("gradient check failed: {err:.3e} > {FD_TOLERANCE:e}"),
        });
    }
    Ok(())
}

fn run_verify(full: bool) -> Result<(), Failure> {
    let size = if full { SuiteSize::full() } else { SuiteSize::quick() };
    let results = verify::run_suite(&size);
    print!("{}", verify::format_report(&results));
    let failed = results.iter().flat_map(|(_, c)| c).filter(|c| !c.pass).count();
    if failed == 0 {
        println!("all checks passed");
        Ok(())
    } else {
        Err(Failure {
            code: 2,
            message: format!("{failed} check(s) failed"),
        })
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let settings = |a: RunArgs| a.resolve().map_err(|e| Failure {
        code: 1,
        message: format!("{e:#}"),
    });
    match cli.command {
        Command::Optimize(a) => run_optimize(&settings(a)?).map_err(classify),
        Command::Energy(a) => run_energy(&settings(a)?).map_err(classify),
        Command::FdCheck(a) => run_fd_check(&settings(a)?),
        Command::Verify { full } => run_verify(full),
    }
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
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
