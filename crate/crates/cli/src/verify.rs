//! Residual suites behind `fuzzball verify`.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::ValueEnum;
use fuzzball::equivalence::{round_trip_rep, round_trip_sol, RoundTripReport};
use fuzzball::geometry::{identification_check, SphereGrid};
use fuzzball::grvv::{gauge_dress, grvv_residual, sphere_constraints};
use fuzzball::harmonics::{build_basis, BifundamentalFrame};
use fuzzball::matcore::{commutator, frobenius_distance};
use fuzzball::su2rep::{bilinears, closure_residual, doublet_covariance_residual, intertwiner_residual, irrep};
use fuzzball::superalg::calibrate;
use fuzzball::{random, FuzzError, Grvv, Matrix, Su2, Tol};
use serde::Serialize;

/// Largest N the harmonics suite builds a full basis for.
pub const HARMONICS_LIMIT: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Grvv,
    U2,
    Covariance,
    Intertwiner,
    Harmonics,
    Superalgebra,
    Equivalence,
    Geometry,
    All,
}

impl Suite {
    const CONCRETE: [Suite; 8] = [
        Suite::Grvv,
        Suite::U2,
        Suite::Covariance,
        Suite::Intertwiner,
        Suite::Harmonics,
        Suite::Superalgebra,
        Suite::Equivalence,
        Suite::Geometry,
    ];

    pub fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => Self::CONCRETE.to_vec(),
            s => vec![s],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Grvv => "grvv",
            Suite::U2 => "u2",
            Suite::Covariance => "covariance",
            Suite::Intertwiner => "intertwiner",
            Suite::Harmonics => "harmonics",
            Suite::Superalgebra => "superalgebra",
            Suite::Equivalence => "equivalence",
            Suite::Geometry => "geometry",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    pub suite: &'static str,
    pub n: usize,
    pub subject: &'static str,
    pub check: String,
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<f64>,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Skip {
    pub suite: &'static str,
    pub n: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub suites: Vec<Suite>,
    pub n_list: Vec<usize>,
    pub tol: f64,
    pub seed: u64,
    pub grid: [usize; 2],
    pub threads: usize,
    pub checks: Vec<CheckRow>,
    pub skipped: Vec<Skip>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckRow> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

pub struct VerifyConfig {
    pub suites: Vec<Suite>,
    pub n_list: Vec<usize>,
    pub solution: Option<Grvv>,
    pub tol: f64,
    pub seed: u64,
    pub grid: (usize, usize),
    pub threads: usize,
}

/// Where the doublets for one job come from.
#[derive(Clone)]
enum Source {
    Generated(usize),
    File(Grvv),
}

impl Source {
    fn n(&self) -> usize {
        match self {
            Source::Generated(n) => *n,
            Source::File(s) => s.dim(),
        }
    }
}

struct Job {
    suite: Suite,
    source: Source,
}

#[derive(Default)]
struct Outcome {
    rows: Vec<CheckRow>,
    skipped: Vec<Skip>,
}

struct Ctx<'a> {
    suite: Suite,
    n: usize,
    tol: f64,
    out: &'a mut Outcome,
}

impl Ctx<'_> {
    /// Algebraic check: passes when `residual ≤ tol·scale`.
    fn scaled(&mut self, subject: &'static str, check: impl Into<String>, residual: f64, scale: f64) {
        let limit = self.tol * scale;
        self.out.rows.push(CheckRow {
            suite: self.suite.name(),
            n: self.n,
            subject,
            check: check.into(),
            residual,
            limit: Some(limit),
            lower_bound: None,
            order: None,
            passed: residual <= limit,
        });
    }

    fn skip(&mut self, reason: impl Into<String>) {
        self.out.skipped.push(Skip { suite: self.suite.name(), n: self.n, reason: reason.into() });
    }

    fn error(&mut self, subject: &'static str, check: &str, e: FuzzError) {
        self.out.rows.push(CheckRow {
            suite: self.suite.name(),
            n: self.n,
            subject,
            check: format!("{check}: {e}"),
            residual: f64::NAN,
            limit: None,
            lower_bound: None,
            order: None,
            passed: false,
        });
    }
}

pub fn threads_from_env() -> Result<usize, String> {
    let default = std::thread::available_parallelism().map_or(1, |n| n.get());
    match std::env::var("FUZZBALL_THREADS") {
        Err(_) => Ok(default),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(k) if k >= 1 => Ok(k),
            _ => Err(format!("FUZZBALL_THREADS must be a positive integer, got {v:?}")),
        },
    }
}

/// Runs `f` over `jobs` on at most `threads` scoped workers; results keep job order.
pub fn run_parallel<J: Sync, R: Send>(jobs: &[J], threads: usize, f: impl Fn(&J) -> R + Sync) -> Vec<R> {
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<R>>> = Mutex::new((0..jobs.len()).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..threads.clamp(1, jobs.len().max(1)) {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(job) = jobs.get(k) else { break };
                let r = f(job);
                slots.lock().expect("worker panicked")[k] = Some(r);
            });
        }
    });
    slots
        .into_inner()
        .expect("worker panicked")
        .into_iter()
        .map(|r| r.expect("every job ran"))
        .collect()
}

fn dressed(n: usize, seed: u64) -> Result<Grvv, FuzzError> {
    let mut rng = random::rng(seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let u: Matrix = random::unitary(n, &mut rng);
    let uh: Matrix = random::unitary(n, &mut rng);
    gauge_dress(&fuzzball::grvv::ground_state(n)?, &u, &uh, Tol::default())
}

fn subjects(source: &Source, seed: u64) -> Result<Vec<(&'static str, Grvv)>, FuzzError> {
    Ok(match source {
        Source::Generated(n) => vec![("ground", fuzzball::grvv::ground_state(*n)?), ("dressed", dressed(*n, seed)?)],
        Source::File(s) => vec![("file", s.clone())],
    })
}

pub fn run(cfg: &VerifyConfig) -> VerifyReport {
    let mut suites: Vec<Suite> = vec![];
    for s in cfg.suites.iter().flat_map(|s| s.expand()) {
        if !suites.contains(&s) {
            suites.push(s);
        }
    }
    let sources: Vec<Source> = match &cfg.solution {
        Some(s) => vec![Source::File(s.clone())],
        None => cfg.n_list.iter().map(|&n| Source::Generated(n)).collect(),
    };
    let jobs: Vec<Job> = suites
        .iter()
        .flat_map(|&suite| sources.iter().map(move |source| Job { suite, source: source.clone() }))
        .collect();
    let outcomes = run_parallel(&jobs, cfg.threads, |job| run_job(job, cfg));

    let mut checks = vec![];
    let mut skipped = vec![];
    for o in outcomes {
        checks.extend(o.rows);
        skipped.extend(o.skipped);
    }
    let passed = !checks.is_empty() && checks.iter().all(|c| c.passed);
    VerifyReport {
        schema: 1,
        suites,
        n_list: sources.iter().map(Source::n).collect(),
        tol: cfg.tol,
        seed: cfg.seed,
        grid: [cfg.grid.0, cfg.grid.1],
        threads: cfg.threads,
        checks,
        skipped,
        passed,
    }
}

fn run_job(job: &Job, cfg: &VerifyConfig) -> Outcome {
    let mut out = Outcome::default();
    let n = job.source.n();
    let mut ctx = Ctx { suite: job.suite, n, tol: cfg.tol, out: &mut out };
    if job.suite == Suite::Geometry {
        geometry(&mut ctx, cfg);
        return out;
    }
    let subjects = match subjects(&job.source, cfg.seed) {
        Ok(s) => s,
        Err(e) => {
            ctx.error("input", "construction", e);
            return out;
        }
    };
    if job.suite == Suite::Equivalence {
        if let Source::Generated(n) = job.source {
            match irrep::<f64>(n).and_then(|r| round_trip_rep(&r, Tol::default())) {
                Ok(r) => report_steps(&mut ctx, "irrep", &r),
                Err(e) => ctx.error("irrep", "round trip", e),
            }
        }
    }
    for (label, sol) in &subjects {
        match job.suite {
            Suite::Grvv => grvv(&mut ctx, label, sol),
            Suite::U2 => u2(&mut ctx, label, sol),
            Suite::Covariance => {
                let b = bilinears(sol);
                ctx.scaled(label, "doublet_covariance", doublet_covariance_residual(sol, &b), n as f64);
            }
            Suite::Intertwiner => {
                if !sol.is_irreducible() {
                    ctx.skip("intertwiner relations need an irreducible solution");
                    continue;
                }
                match intertwiner_residual(sol, &bilinears(sol)) {
                    Ok(r) => ctx.scaled(label, "intertwiner", r, n as f64),
                    Err(e) => ctx.error(label, "intertwiner", e),
                }
            }
            Suite::Harmonics => harmonics(&mut ctx, label, sol, cfg.seed),
            Suite::Superalgebra => {
                if !sol.is_irreducible() || n < 2 {
                    ctx.skip("calibration needs an irreducible solution with N ≥ 2");
                    continue;
                }
                match calibrate(sol) {
                    Ok(c) => ctx.scaled(label, format!("osp_closure[{}, c={}]", c.convention.name(), c.scale), c.total(), 1.0),
                    Err(e) => ctx.error(label, "calibration", e),
                }
            }
            Suite::Equivalence => match round_trip_sol(sol, Tol::default()) {
                Ok(r) => report_steps(&mut ctx, label, &r),
                Err(e) => ctx.error(label, "round trip", e),
            },
            Suite::Geometry | Suite::All => unreachable!("expanded before dispatch"),
        }
    }
    out
}

fn grvv(ctx: &mut Ctx, label: &'static str, sol: &Grvv) {
    let n = sol.dim() as f64;
    ctx.scaled(label, "grvv", grvv_residual(sol), n);
    if sol.is_irreducible() {
        match sphere_constraints(sol) {
            Ok((a, b)) => {
                ctx.scaled(label, "sphere_constraint_g_gdag", a, n);
                ctx.scaled(label, "sphere_constraint_gdag_g", b, n);
            }
            Err(e) => ctx.error(label, "sphere constraints", e),
        }
    }
}

fn u2(ctx: &mut Ctx, label: &'static str, sol: &Grvv) {
    let n = sol.dim() as f64;
    let b = bilinears(sol);
    ctx.scaled(label, "su2_closure_j", closure_residual(b.j_refs()), n);
    ctx.scaled(label, "su2_closure_jbar", closure_residual(b.jb_refs()), n);
    ctx.scaled(label, "u2_structure", fuzzball::su2rep::u2_structure_residual(&b), n);
}

fn harmonics(ctx: &mut Ctx, label: &'static str, sol: &Grvv, seed: u64) {
    let n = sol.dim();
    if !sol.is_irreducible() {
        ctx.skip("harmonics need an irreducible solution");
        return;
    }
    if n > HARMONICS_LIMIT {
        ctx.skip(format!("full harmonic basis is built only for N ≤ {HARMONICS_LIMIT}"));
        return;
    }
    let b = bilinears(sol);
    let [j1, j2, j3] = b.j.clone();
    let basis = match Su2::new([j1, j2, j3], vec![n]).and_then(|r| build_basis(&r).map(|bs| (r, bs))) {
        Ok(x) => x,
        Err(e) => return ctx.error(label, "basis", e),
    };
    let (rep, basis) = basis;
    let nf = n as f64;
    ctx.scaled(label, "basis_count", (basis.len() as f64 - nf * nf).abs(), 1.0);
    let gram = basis.gram();
    let gram_err = frobenius_distance(&gram, &Matrix::identity(n * n).scale(nf)).unwrap_or(f64::NAN);
    ctx.scaled(label, "gram", gram_err, nf);

    let mut weight = 0.0f64;
    let mut lap = 0.0f64;
    for (l, m, y) in basis.iter() {
        let lhs = commutator(&rep.j3, y);
        weight = weight.max(frobenius_distance(&lhs, &y.scale(2.0 * m as f64)).unwrap_or(f64::NAN));
        let mut acc = Matrix::zeros(n, n);
        for j in rep.generators() {
            acc += &commutator(j, &commutator(j, y));
        }
        let ev = 4.0 * (l * (l + 1)) as f64;
        let rel = frobenius_distance(&acc, &y.scale(ev)).unwrap_or(f64::NAN) / (ev.max(1.0) * y.frobenius_norm());
        lap = lap.max(rel);
    }
    ctx.scaled(label, "adjoint_weight", weight, nf * nf);
    ctx.scaled(label, "laplacian_relative", lap, 1.0);

    if n < 2 {
        return;
    }
    let frame = match BifundamentalFrame::new(sol, Tol::default()) {
        Ok(f) => f,
        Err(e) => return ctx.error(label, "bifundamental frame", e),
    };
    let mut rng = random::rng(seed.wrapping_add(n as u64));
    let r1: Matrix = random::gaussian_matrix(n, n, &mut rng);
    let r2: Matrix = random::gaussian_matrix(n, n, &mut rng);
    match frame.decompose(&r1, &r2) {
        Ok(modes) => {
            let [a, c] = frame.reconstruct(&modes);
            let rec = frobenius_distance(&a, &r1)
                .unwrap_or(f64::NAN)
                .max(frobenius_distance(&c, &r2).unwrap_or(f64::NAN));
            ctx.scaled(label, "bifundamental_reconstruction", rec, 1.0);
            ctx.scaled(label, "edge_leak", frame.edge_leak(&modes), 1.0);
        }
        Err(e) => ctx.error(label, "bifundamental decomposition", e),
    }
}

fn report_steps(ctx: &mut Ctx, label: &'static str, r: &RoundTripReport) {
    let scale = r.partition.iter().sum::<usize>() as f64;
    for step in &r.steps {
        let worst = step.checks.iter().map(|c| c.residual).fold(0.0, f64::max);
        let check = format!("{}:{}. {}", r.direction, step.step, step.title);
        ctx.scaled(label, check, worst, scale);
        if !step.passed {
            if let Some(row) = ctx.out.rows.last_mut() {
                row.passed = false;
            }
        }
    }
}

fn geometry(ctx: &mut Ctx, cfg: &VerifyConfig) {
    if ctx.n < 2 {
        ctx.skip("the fuzzy covariance check needs N ≥ 2");
        return;
    }
    let grid = match SphereGrid::interior(cfg.grid.0, cfg.grid.1) {
        Ok(g) => g,
        Err(e) => return ctx.error("grid", "grid", e),
    };
    match identification_check(ctx.n, &grid, cfg.seed) {
        Ok(rep) => {
            for id in rep.identities {
                ctx.out.rows.push(CheckRow {
                    suite: Suite::Geometry.name(),
                    n: ctx.n,
                    subject: "grid",
                    check: id.name.to_string(),
                    residual: id.max_residual,
                    limit: id.limit,
                    lower_bound: id.lower_bound,
                    order: id.order,
                    passed: id.passed,
                });
            }
        }
        Err(e) => ctx.error("grid", "identification", e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pool_keeps_order() {
        let jobs: Vec<usize> = (0..37).collect();
        for t in [1, 3, 64] {
            assert_eq!(run_parallel(&jobs, t, |j| j * j), jobs.iter().map(|j| j * j).collect::<Vec<_>>());
        }
        assert!(run_parallel(&Vec::<usize>::new(), 4, |j| *j).is_empty());
    }

    #[test]
    fn all_expands_without_itself() {
        let s = Suite::All.expand();
        assert_eq!(s.len(), 8);
        assert!(!s.contains(&Suite::All));
    }
}
