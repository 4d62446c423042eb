//! `fuzzball`: constructors, residual suites, spectra and convergence studies.
//!
//! Exit codes: 0 success, 1 a residual above tolerance, 2 a usage or input error.

mod error;
mod verify;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fuzzball::geometry::clifford::{gamma_so5, gamma_so9};
use fuzzball::grvv::{block_solution, gauge_dress, ground_state};
use fuzzball::harmonics::BifundamentalFrame;
use fuzzball::spectra::{
    commutator_decay, fuzzy_laplacian_spectrum, group_levels, mode_convergence, scalar_kinetic_spectrum, ActionMode,
    KINETIC_LIMIT, LAPLACIAN_LIMIT,
};
use fuzzball::su2rep::{canonical, irrep};
use fuzzball::{random, FuzzError, Grvv, Matrix, Su2, Tol};
use serde::Serialize;

use error::{CliError, CliResult};
use verify::{Suite, VerifyConfig};

const DEFAULT_SEED: u64 = 20_240_617;

#[derive(Parser)]
#[command(name = "fuzzball", version, about = "Bifundamental fuzzy sphere toolkit")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Seed for every randomized construction
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Residual tolerance; algebraic checks pass when residual ≤ tol·N
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    /// Output file; stdout when absent
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Write solutions, representations or gamma matrices as JSON
    #[command(subcommand)]
    Gen(Gen),
    /// Run residual suites and write a JSON report
    Verify(VerifyArgs),
    /// Operator spectra
    #[command(subcommand)]
    Spectrum(Spectrum),
    /// Classical-limit convergence studies
    #[command(subcommand)]
    Converge(Converge),
    /// Expand a doublet (r¹, r²) over the harmonics of a solution
    Decompose(DecomposeArgs),
}

#[derive(Subcommand)]
enum Gen {
    /// GRVV doublet: ground state of size N or a block solution
    Grvv {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        partition: Option<Vec<usize>>,
        /// Dress with random unitaries drawn from this seed
        #[arg(long)]
        dress: Option<u64>,
    },
    /// SU(2) representation in canonical block form
    Su2 {
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
    },
    /// Clifford generators
    Gamma {
        #[arg(long, value_enum)]
        group: Group,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Group {
    So5,
    So9,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    #[arg(long, value_delimiter = ',', default_value = "2,3,4,8")]
    n_list: Vec<usize>,
    /// Verify this solution file instead of generated ground states
    #[arg(long)]
    solution: Option<PathBuf>,
    /// Interior sphere grid for the geometry suite, as THETAxPHI
    #[arg(long, default_value = "64x128", value_parser = parse_grid)]
    grid: (usize, usize),
}

#[derive(Subcommand)]
enum Spectrum {
    /// CSV columns: eigenvalue, multiplicity
    Laplacian {
        #[arg(long)]
        n: usize,
    },
    /// Scalar kinetic operator on triples; CSV columns: eigenvalue, multiplicity, family
    Kinetic {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum Converge {
    /// CSV columns: n, norm, closed_form with closed_form = 2/(N+1)
    Commutator {
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
    },
    /// CSV columns: n, l, m, sup_error of the coherent-state symbol of Y_lm
    Modes {
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        #[arg(long)]
        l: usize,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0)]
        m: i64,
        #[arg(long, default_value = "32x64", value_parser = parse_grid)]
        grid: (usize, usize),
    },
}

#[derive(Args)]
struct DecomposeArgs {
    /// GRVV solution JSON
    #[arg(long)]
    solution: PathBuf,
    /// Two matrix JSON files r¹,r²
    #[arg(long, value_delimiter = ',', num_args = 1, required = true)]
    matrix: Vec<PathBuf>,
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected THETAxPHI, got {s:?}"))?;
    let a: usize = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let b: usize = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    if a == 0 || b == 0 {
        return Err("grid sizes must be positive".into());
    }
    Ok((a, b))
}

#[derive(Serialize)]
struct Versioned<T: Serialize> {
    schema: u32,
    #[serde(flatten)]
    body: T,
}

fn versioned<T: Serialize>(body: T) -> Versioned<T> {
    Versioned { schema: 1, body }
}

#[derive(Serialize)]
struct GammaFile {
    group: &'static str,
    gammas: Vec<Matrix>,
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Write { path: p.to_path_buf(), source }),
        None => {
            let mut o = std::io::stdout().lock();
            o.write_all(text.as_bytes())
                .and_then(|_| o.flush())
                .map_err(|source| CliError::Write { path: "<stdout>".into(), source })
        }
    }
}

fn emit_json<T: Serialize>(out: Option<&Path>, v: &T) -> CliResult<()> {
    let mut s = serde_json::to_string_pretty(v).expect("report types serialize");
    s.push('\n');
    emit(out, &s)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.to_path_buf(), source })
}

/// Rounds away eigensolver noise for display.
fn tidy(v: f64) -> f64 {
    let r = (v * 1e9).round() / 1e9;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn gen(cmd: Gen, cli: &Global) -> CliResult<()> {
    let out = cli.out.as_deref();
    match cmd {
        Gen::Grvv { n, partition, dress } => {
            let sol: Grvv = match (n, partition) {
                (Some(n), None) => ground_state(n)?,
                (n, Some(p)) => {
                    if let Some(n) = n {
                        if p.iter().sum::<usize>() != n {
                            return Err(CliError::Usage(format!("partition {p:?} does not sum to --n {n}")));
                        }
                    }
                    block_solution(&p)?
                }
                (None, None) => return Err(CliError::Usage("gen grvv needs --n or --partition".into())),
            };
            let sol = match dress {
                Some(s) => {
                    let mut rng = random::rng(s);
                    let d = sol.dim();
                    let u: Matrix = random::unitary(d, &mut rng);
                    let uh: Matrix = random::unitary(d, &mut rng);
                    gauge_dress(&sol, &u, &uh, Tol::default())?
                }
                None => sol,
            };
            emit_json(out, &versioned(sol))
        }
        Gen::Su2 { dims } => {
            let rep: Su2 = canonical(&dims)?;
            emit_json(out, &versioned(rep))
        }
        Gen::Gamma { group } => {
            let (name, gammas) = match group {
                Group::So5 => ("so5", gamma_so5()),
                Group::So9 => ("so9", gamma_so9()),
            };
            emit_json(out, &versioned(GammaFile { group: name, gammas }))
        }
    }
}

fn run_verify(args: VerifyArgs, cli: &Global) -> CliResult<()> {
    if !(cli.tol.is_finite() && cli.tol > 0.0) {
        return Err(CliError::Usage(format!("--tol must be positive, got {}", cli.tol)));
    }
    if args.solution.is_none() && args.n_list.is_empty() {
        return Err(CliError::Usage("--n-list is empty".into()));
    }
    if args.n_list.contains(&0) {
        return Err(CliError::Usage("--n-list entries must be at least 1".into()));
    }
    let solution: Option<Grvv> = match &args.solution {
        Some(p) => {
            let s: Grvv = read_json(p)?;
            s.validate()?;
            Some(s)
        }
        None => None,
    };
    let threads = verify::threads_from_env().map_err(CliError::Usage)?;
    let cfg = VerifyConfig {
        suites: vec![args.suite],
        n_list: args.n_list,
        solution,
        tol: cli.tol,
        seed: cli.seed,
        grid: args.grid,
        threads,
    };
    let report = verify::run(&cfg);
    emit_json(cli.out.as_deref(), &report)?;
    let failed: Vec<String> = report
        .failures()
        .map(|c| format!("{} N={} {} {}: {:e}", c.suite, c.n, c.subject, c.check, c.residual))
        .collect();
    eprintln!(
        "verify: {} checks, {} failed, {} skipped",
        report.checks.len(),
        failed.len(),
        report.skipped.len()
    );
    if report.passed {
        Ok(())
    } else if report.checks.is_empty() {
        Err(CliError::Failed("no checks ran".into()))
    } else {
        Err(CliError::Failed(failed.join("\n")))
    }
}

fn refuse_above(n: usize, limit: usize) -> CliResult<()> {
    if n > limit {
        return Err(FuzzError::TooLarge { n, limit }.into());
    }
    Ok(())
}

fn spectrum(cmd: Spectrum, cli: &Global) -> CliResult<()> {
    match cmd {
        Spectrum::Laplacian { n } => {
            refuse_above(n, LAPLACIAN_LIMIT)?;
            let values = fuzzy_laplacian_spectrum(&irrep(n)?)?;
            let mut s = String::from("eigenvalue,multiplicity\n");
            for lv in group_levels(&values, 1e-6) {
                s.push_str(&format!("{},{}\n", tidy(lv.value), lv.multiplicity));
            }
            emit(cli.out.as_deref(), &s)
        }
        Spectrum::Kinetic { n } => {
            refuse_above(n, KINETIC_LIMIT)?;
            let k = scalar_kinetic_spectrum(&irrep(n)?, ActionMode::Adjoint)?;
            let mut s = String::from("eigenvalue,multiplicity,family\n");
            for lv in &k.levels {
                s.push_str(&format!("{},{},{}\n", tidy(lv.eigenvalue), lv.multiplicity, lv.family.name()));
            }
            emit(cli.out.as_deref(), &s)
        }
    }
}

fn converge(cmd: Converge, cli: &Global) -> CliResult<()> {
    match cmd {
        Converge::Commutator { n_list } => {
            let rows = commutator_decay(&n_list)?;
            let mut s = String::from("n,norm,closed_form\n");
            for r in rows {
                s.push_str(&format!("{},{},{}\n", r.n, r.norm, r.closed_form));
            }
            emit(cli.out.as_deref(), &s)
        }
        Converge::Modes { n_list, l, m, grid } => {
            let rows = mode_convergence(&n_list, l, m, grid.0, grid.1)?;
            let mut s = String::from("n,l,m,sup_error\n");
            for r in rows {
                s.push_str(&format!("{},{},{},{}\n", r.n, r.l, r.m, r.sup_error));
            }
            emit(cli.out.as_deref(), &s)
        }
    }
}

fn decompose(args: DecomposeArgs, cli: &Global) -> CliResult<()> {
    let [r1, r2] = args.matrix.as_slice() else {
        return Err(CliError::Usage(format!("--matrix takes exactly two files, got {}", args.matrix.len())));
    };
    let sol: Grvv = read_json(&args.solution)?;
    sol.validate()?;
    let a: Matrix = read_json(r1)?;
    let b: Matrix = read_json(r2)?;
    let frame = BifundamentalFrame::new(&sol, Tol::default())?;
    let modes = frame.decompose(&a, &b)?;
    let record = modes.record(cli.tol);
    emit_json(cli.out.as_deref(), &record)?;
    if record.residual > cli.tol * sol.dim() as f64 {
        return Err(CliError::Failed(format!("reconstruction residual {:e}", record.residual)));
    }
    Ok(())
}

fn dispatch(cli: Cli) -> CliResult<()> {
    let g = &cli.global;
    match cli.command {
        Command::Gen(c) => gen(c, g),
        Command::Verify(v) => run_verify(v, g),
        Command::Spectrum(s) => spectrum(s, g),
        Command::Converge(c) => converge(c, g),
        Command::Decompose(d) => decompose(d, g),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
