//! `freecap`: compute, verify and reproduce free encoding capacities.
//!
//! Exit codes: 0 success, 1 a check or assertion failed, 2 usage, parse or
//! validation error.

mod output;

use std::fmt;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use freecap::fec::{
    activity_qubit_objective, activity_qubit_reference, chi_of_encoding, fec_over_pool, purity_closed_form,
    DEFAULT_MAX_ITER, DEFAULT_TOL,
};
use freecap::linalg::{random_density_matrix, SeededRng};
use freecap::problem::{parse_problem, ProblemError, ProblemSpec};
use freecap::protocol::{
    default_decoders, empirical_mutual_information, joint_distribution, mutual_information, simulate_shots,
};
use freecap::qcore::{
    binary_entropy, relative_entropy, von_neumann_entropy, DensityMatrix, EncodingEnsemble, KrausChannel,
};
use freecap::theories::{default_channel_pool, is_free_channel, ResourceTheory, POOL_FREE_TOL};
use freecap::verify::{mu_ensemble, nu_ensemble, rho_mu, rho_nu, run_suite, CheckKind};

use output::{sibling, sig, CsvSink};

/// Slack allowed above the Holevo quantity for exact mutual information.
const HOLEVO_SLACK: f64 = 1e-9;
/// Allowed deviation of pool values from closed forms in `reproduce`.
const PURITY_MATCH: f64 = 1e-6;
const PROP6_MATCH: f64 = 1e-9;
/// Points in the activity `q` scan, spacing 1e-3.
const ACTIVITY_SCAN: usize = 1001;
const DEFAULT_SHOTS: u64 = 100_000;

#[derive(Parser, Debug)]
#[command(name = "freecap", version, about = "Free encoding capacity of quantum states")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    /// Certificate gap at which the optimizer stops [default: 1e-9]
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Iteration cap for the optimizer [default: 10000]
    #[arg(long, global = true)]
    max_iter: Option<usize>,
    /// Root seed; all randomness is derived from it [default: 42]
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Trials per check for `verify`
    #[arg(long, global = true, default_value_t = freecap::verify::DEFAULT_TRIALS)]
    trials: usize,
    /// Write a CSV table to this path
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Optimize the encoding ensemble over a channel pool
    Compute {
        /// Problem document; standard input when omitted or `-`
        input: Option<PathBuf>,
    },
    /// Run the randomized property checks
    Verify {
        /// Check to run; repeatable. All checks when omitted.
        #[arg(long = "check", value_name = "NAME")]
        checks: Vec<String>,
        /// Print the full report as JSON
        #[arg(long)]
        json: bool,
    },
    /// Regenerate a reference table
    Reproduce {
        target: Target,
        /// Random states per dimension
        #[arg(long, default_value_t = 20)]
        states: usize,
    },
    /// Sample the encode/decode protocol and compare with the Holevo quantity
    Simulate {
        /// Problem document; standard input when omitted or `-`
        input: Option<PathBuf>,
        /// Shots per decoder [default: document value, else 100000]
        #[arg(long)]
        shots: Option<u64>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Target {
    Purity,
    Activity,
    Prop6,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Input(String),
    Failed(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) | CliError::Input(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Input(m) => write!(f, "error: {m}"),
            CliError::Failed(m) => write!(f, "failed: {m}"),
        }
    }
}

impl From<freecap::Error> for CliError {
    fn from(e: freecap::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ProblemError> for CliError {
    fn from(e: ProblemError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Input(format!("i/o: {e}"))
    }
}

type CliResult = Result<(), CliError>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Compute { input } => cmd_compute(&cli.global, input.as_deref()),
        Command::Verify { checks, json } => cmd_verify(&cli.global, checks, *json),
        Command::Reproduce { target, states } => cmd_reproduce(&cli.global, *target, *states),
        Command::Simulate { input, shots } => cmd_simulate(&cli.global, input.as_deref(), *shots),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code())
        }
    }
}

fn read_input(path: Option<&Path>) -> Result<String, CliError> {
    match path {
        Some(p) if p != Path::new("-") => std::fs::read_to_string(p)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", p.display()))),
        _ => {
            let mut text = String::new();
            io::stdin().read_to_string(&mut text)?;
            Ok(text)
        }
    }
}

/// Parses the document and lets explicit flags override its settings.
fn load_problem(g: &GlobalOpts, path: Option<&Path>) -> Result<ProblemSpec, CliError> {
    let mut spec = parse_problem(&read_input(path)?)?;
    if let Some(tol) = g.tol {
        spec.tol = tol;
    }
    if let Some(m) = g.max_iter {
        spec.max_iter = m;
    }
    if let Some(s) = g.seed {
        spec.seed = s;
    }
    if !(spec.tol > 0.0 && spec.tol.is_finite()) {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    if spec.max_iter == 0 {
        return Err(CliError::Usage("--max-iter must be positive".into()));
    }
    Ok(spec)
}

fn settings(g: &GlobalOpts) -> Result<(f64, usize, u64), CliError> {
    let tol = g.tol.unwrap_or(DEFAULT_TOL);
    let max_iter = g.max_iter.unwrap_or(DEFAULT_MAX_ITER);
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    if max_iter == 0 {
        return Err(CliError::Usage("--max-iter must be positive".into()));
    }
    Ok((tol, max_iter, g.seed.unwrap_or(freecap::problem::DEFAULT_SEED)))
}

/// The document's pool after a freeness check, or the theory's default pool.
fn resolve_pool(spec: &ProblemSpec) -> Result<(Vec<KrausChannel>, &'static str), CliError> {
    match &spec.pool {
        Some(pool) => {
            for (i, c) in pool.iter().enumerate() {
                if !is_free_channel(&spec.theory, c, POOL_FREE_TOL)? {
                    return Err(CliError::Input(format!(
                        "validation error at $.pool[{i}]: channel is not free in the {} theory",
                        spec.theory.name()
                    )));
                }
            }
            Ok((pool.clone(), "document"))
        }
        None => {
            let mut rng = SeededRng::derive(spec.seed, "pool", 0);
            let pool = default_channel_pool(&spec.theory, &spec.state, spec.n_random, &mut rng)?;
            Ok((pool, "default"))
        }
    }
}

fn cmd_compute(g: &GlobalOpts, input: Option<&Path>) -> CliResult {
    let spec = load_problem(g, input)?;
    let (pool, source) = resolve_pool(&spec)?;
    let r = fec_over_pool(&spec.state, &pool, spec.tol, spec.max_iter)?;

    let outputs = pool.iter().map(|c| c.apply(&spec.state)).collect::<freecap::Result<Vec<_>>>()?;
    let weighted: Vec<&DensityMatrix> = outputs.iter().collect();
    let average = DensityMatrix::mixture(&r.probs, &weighted)?;
    let divergences = outputs
        .iter()
        .map(|s| Ok(relative_entropy(s, &average)?.finite().unwrap_or(f64::INFINITY)))
        .collect::<Result<Vec<f64>, CliError>>()?;

    println!("theory        {} (d = {})", spec.theory.name(), spec.theory.dim());
    println!("pool          {} channels ({source})", pool.len());
    println!("value         {}", sig(r.value));
    println!("certificate   {}", sig(r.upper_certificate));
    println!("gap           {:.3e}", r.gap());
    println!("converged     {} ({} iterations)", r.converged, r.iterations);
    if let Some(p) = &spec.probs {
        let fixed = chi_of_encoding(&spec.state, &EncodingEnsemble::new(p.clone(), pool.clone())?)?;
        println!("fixed probs   chi = {}", sig(fixed));
    }
    println!("channel  probability     divergence");
    for (i, (p, d)) in r.probs.iter().zip(&divergences).enumerate() {
        println!("{i:>7}  {:<14}  {}", sig(*p), sig(*d));
    }
    if !r.converged {
        eprintln!("warning: gap {:.3e} above tolerance after {} iterations", r.gap(), r.iterations);
    }

    if let Some(path) = &g.out {
        let mut csv = CsvSink::open(Some(path))?;
        csv.row(["channel", "probability", "divergence", "value", "upper_certificate"])?;
        for (i, (p, d)) in r.probs.iter().zip(&divergences).enumerate() {
            csv.row([i.to_string(), sig(*p), sig(*d), sig(r.value), sig(r.upper_certificate)])?;
        }
        csv.finish()?;
    }
    Ok(())
}

fn cmd_verify(g: &GlobalOpts, names: &[String], json: bool) -> CliResult {
    if g.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let seed = g.seed.unwrap_or(freecap::verify::DEFAULT_SEED);
    let mut kinds = Vec::new();
    for n in names {
        let kind = CheckKind::from_name(n).ok_or_else(|| {
            let known: Vec<&str> = CheckKind::ALL.iter().map(|k| k.name()).collect();
            CliError::Usage(format!("unknown check `{n}` (known: {})", known.join(", ")))
        })?;
        if !kinds.contains(&kind) {
            kinds.push(kind);
        }
    }
    let started = Instant::now();
    let report = run_suite(seed, g.trials, &kinds);
    println!("seed {seed}, {} trials per check", g.trials);
    print!("{}", report.table());
    println!("elapsed {:.2} s", started.elapsed().as_secs_f64());

    if json {
        println!("{}", serde_json::to_string_pretty(&report).map_err(io::Error::other)?);
    }
    if let Some(path) = &g.out {
        let mut csv = CsvSink::open(Some(path))?;
        csv.row(["check", "trials", "failures", "worst_violation", "tolerance", "passed"])?;
        for c in &report.checks {
            csv.row([
                c.name.clone(),
                c.trials.to_string(),
                c.failures.to_string(),
                sig(c.worst_violation),
                sig(c.tolerance),
                c.passed().to_string(),
            ])?;
        }
        csv.finish()?;
    }
    if report.passed() {
        return Ok(());
    }
    for c in report.checks.iter().filter(|c| !c.passed()) {
        for w in &c.witnesses {
            eprintln!("witness [{}]: {}", c.name, serde_json::to_string(w).map_err(io::Error::other)?);
        }
    }
    let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed()).map(|c| c.name.as_str()).collect();
    Err(CliError::Failed(format!("checks failed: {}", failed.join(", "))))
}

fn cmd_reproduce(g: &GlobalOpts, target: Target, states: usize) -> CliResult {
    let (tol, max_iter, seed) = settings(g)?;
    match target {
        Target::Activity => reproduce_activity(g.out.as_deref()),
        Target::Purity => reproduce_purity(g.out.as_deref(), states, seed, tol, max_iter),
        Target::Prop6 => reproduce_prop6(g.out.as_deref(), states, seed, tol, max_iter),
    }
}

fn reproduce_activity(out: Option<&Path>) -> CliResult {
    let reference = activity_qubit_reference(ACTIVITY_SCAN);
    let step = 1.0 / (ACTIVITY_SCAN - 1) as f64;
    let scan: Vec<(f64, f64)> = (0..ACTIVITY_SCAN)
        .map(|i| {
            let q = i as f64 * step;
            (q, activity_qubit_objective(q))
        })
        .collect();
    let best = scan
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .map(|(i, _)| i)
        .expect("nonempty scan");

    let floor = binary_entropy(0.8)? - 0.4;
    println!("q*  {}", sig(reference.q_star));
    println!("C   {}", sig(reference.c_star));
    println!("scan maximum at q = {} with {}", sig(scan[best].0), sig(scan[best].1));

    let mut csv = CsvSink::open(out)?;
    csv.row(["q", "objective", "is_max"])?;
    for (i, (q, f)) in scan.iter().enumerate() {
        csv.row([sig(*q), sig(*f), u8::from(i == best).to_string()])?;
    }
    csv.finish()?;

    let mut csv = CsvSink::open(out.map(|p| sibling(p, "mu")).as_deref())?;
    csv.row(["mu", "chi", "closed_form"])?;
    for i in 0..=100 {
        let mu = i as f64 / 100.0;
        let chi = chi_of_encoding(&rho_mu(mu)?, &mu_ensemble())?;
        let closed = binary_entropy(0.8)? - 0.4 * binary_entropy(mu)?;
        csv.row([sig(mu), sig(chi), sig(closed)])?;
    }
    csv.finish()?;

    let mut csv = CsvSink::open(out.map(|p| sibling(p, "nu")).as_deref())?;
    csv.row(["nu", "chi", "margin"])?;
    for i in 1..50 {
        let nu = i as f64 / 100.0;
        let chi = chi_of_encoding(&rho_nu(nu)?, &nu_ensemble())?;
        csv.row([sig(nu), sig(chi), sig(chi - floor)])?;
    }
    csv.finish()?;
    Ok(())
}

fn reproduce_purity(out: Option<&Path>, states: usize, seed: u64, tol: f64, max_iter: usize) -> CliResult {
    let mut csv = CsvSink::open(out)?;
    csv.row(["d", "index", "entropy", "closed_form", "pool_value", "abs_error"])?;
    let mut worst = 0.0f64;
    for d in 2..=4usize {
        let theory = ResourceTheory::purity(d);
        for i in 0..states {
            let mut rng = SeededRng::derive(seed, "purity", (d * 1000 + i) as u64);
            let rho = DensityMatrix::new(random_density_matrix(d, &mut rng))?;
            let pool = default_channel_pool(&theory, &rho, freecap::problem::DEFAULT_N_RANDOM, &mut rng)?;
            let r = fec_over_pool(&rho, &pool, tol, max_iter)?;
            let closed = purity_closed_form(&rho);
            let err = (r.value - closed).abs();
            worst = worst.max(err);
            csv.row([
                d.to_string(),
                i.to_string(),
                sig(von_neumann_entropy(&rho)),
                sig(closed),
                sig(r.value),
                sig(err),
            ])?;
        }
    }
    csv.finish()?;
    eprintln!("largest |pool - closed form| = {worst:.3e}");
    if worst >= PURITY_MATCH {
        return Err(CliError::Failed(format!("pool value off the closed form by {worst:.3e}")));
    }
    Ok(())
}

fn reproduce_prop6(out: Option<&Path>, states: usize, seed: u64, tol: f64, max_iter: usize) -> CliResult {
    let mut csv = CsvSink::open(out)?;
    csv.row(["d", "state", "free", "capacity", "log2_d"])?;
    let mut worst = 0.0f64;
    for d in 2..=3usize {
        let theory = ResourceTheory::computational_basis(d);
        let mut cases: Vec<(String, DensityMatrix)> =
            (0..d).map(|k| (format!("basis_{k}"), DensityMatrix::basis_state(d, k))).collect();
        cases.push(("maximally_mixed".into(), DensityMatrix::maximally_mixed(d)));
        for i in 0..states {
            let mut rng = SeededRng::derive(seed, "prop6", (d * 1000 + i) as u64);
            cases.push((format!("random_{i}"), DensityMatrix::new(random_density_matrix(d, &mut rng))?));
        }
        let log_d = (d as f64).log2();
        for (label, rho) in &cases {
            let pool = default_channel_pool(&theory, rho, 0, &mut SeededRng::new(seed))?;
            let r = fec_over_pool(rho, &pool, tol, max_iter)?;
            worst = worst.max((r.value - log_d).abs());
            let free = freecap::theories::is_free_state(&theory, rho, 1e-9)?;
            csv.row([d.to_string(), label.clone(), free.to_string(), sig(r.value), sig(log_d)])?;
        }
    }
    csv.finish()?;
    eprintln!("largest |capacity - log2 d| = {worst:.3e}");
    if worst > PROP6_MATCH {
        return Err(CliError::Failed(format!("capacity off log2 d by {worst:.3e}")));
    }
    Ok(())
}

fn cmd_simulate(g: &GlobalOpts, input: Option<&Path>, shots: Option<u64>) -> CliResult {
    let spec = load_problem(g, input)?;
    let shots = shots.or(spec.shots).unwrap_or(DEFAULT_SHOTS);
    if shots == 0 {
        return Err(CliError::Usage("--shots must be at least 1".into()));
    }
    let (pool, source) = resolve_pool(&spec)?;
    let probs = match &spec.probs {
        Some(p) => p.clone(),
        None => fec_over_pool(&spec.state, &pool, spec.tol, spec.max_iter)?.probs,
    };
    // Messages with zero weight carry no information and are dropped.
    let (probs, channels): (Vec<f64>, Vec<KrausChannel>) =
        probs.into_iter().zip(pool).filter(|(p, _)| *p > 0.0).unzip();
    let ensemble = EncodingEnsemble::new(probs, channels)?;
    let chi = chi_of_encoding(&spec.state, &ensemble)?;
    let decoders = if spec.povms.is_empty() {
        default_decoders(&spec.state, &ensemble)?
    } else {
        spec.povms.clone()
    };

    println!("theory    {} (d = {})", spec.theory.name(), spec.theory.dim());
    println!("ensemble  {} messages from the {source} pool", ensemble.len());
    println!("shots     {shots} per decoder, seed {}", spec.seed);
    let mut rows = Vec::new();
    for (k, m) in decoders.iter().enumerate() {
        let joint = joint_distribution(&spec.state, &ensemble, m)?;
        let exact = mutual_information(&joint);
        let mut rng = SeededRng::derive(spec.seed, "shots", k as u64);
        let record = simulate_shots(&spec.state, &ensemble, m, shots, &mut rng)?;
        let est = empirical_mutual_information(&record)?;
        println!("decoder {k} ({} outcomes), exact joint p(x, y):", m.outcomes());
        for row in joint.table() {
            let cells: Vec<String> = row.iter().map(|p| format!("{:>10}", output::sig_digits(*p, 6))).collect();
            println!("  {}", cells.join(" "));
        }
        println!("  exact I      {}", sig(exact));
        println!("  empirical I  {} +/- {}", sig(est.value), output::sig_digits(est.std_error, 3));
        rows.push((k, exact, est));
    }
    let best = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    println!("chi           {}", sig(chi));
    println!("Holevo gap    chi - max I = {}", sig(chi - best));

    if let Some(path) = &g.out {
        let mut csv = CsvSink::open(Some(path))?;
        csv.row(["decoder", "exact_mi", "empirical_mi", "std_error", "chi", "shots"])?;
        for (k, exact, est) in &rows {
            csv.row([k.to_string(), sig(*exact), sig(est.value), sig(est.std_error), sig(chi), shots.to_string()])?;
        }
        csv.finish()?;
    }
    if best > chi + HOLEVO_SLACK {
        return Err(CliError::Failed(format!("mutual information {best} exceeds chi {chi}")));
    }
    Ok(())
}
