//! Command-line orchestration: simulations, closed-form evaluation, sweeps,
//! fits, graph validation, oracle comparison, spectral diagnostics, and Bloch
//! output. Every subcommand writes its data files plus a manifest listing
//! them.
//!
//! Data files carry no wall-clock information, so identical invocations
//! produce byte-identical CSV/JSON; timing lives only in the manifest. The
//! environment variable NLQ_SEED is reserved but unused — the dynamics are
//! deterministic.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::closedform::{self, CompleteSearchParams};
use crate::dynamics::{
    self, Controls, GammaPolicy, GraphSource, Nonlinearity, NonlinearityKind, SearchConfig,
};
use crate::fmt::sig12;
use crate::graphs::{self, Family, FamilySpec, SrgParams};
use crate::oracle;
use crate::resources::{self, ScalingExponents};
use crate::spectral;

#[derive(Parser, Debug)]
#[command(
    name = "nlqs",
    version,
    about = "Continuous-time quantum search under nonlinear Schrödinger dynamics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integrate one search trajectory and write it as CSV
    Simulate(SimulateArgs),
    /// Evaluate a closed-form quantity by name
    ClosedForm(ClosedFormArgs),
    /// Run a grid of runs or closed-form evaluations over N (and g)
    Sweep(SweepArgs),
    /// Power-law fit over a sweep output CSV
    Fit(FitArgs),
    /// Check strongly-regular parameters and audit a family's collapse
    ValidateGraph(ValidateGraphArgs),
    /// Integrate reduced and full dynamics and report their deviation
    CompareOracle(CompareOracleArgs),
    /// Eigenvalue gap and eigenstate overlaps across a γ grid
    OverlapSweep(OverlapSweepArgs),
    /// Simulate a two-class run and append Bloch-sphere columns
    Bloch(BlochArgs),
}

#[derive(Args, Debug, Clone)]
struct GraphArgs {
    /// Graph family: complete|paley|square-lattice|latin-square|triangular|hypercube|petersen
    #[arg(long)]
    family: Option<String>,
    /// Family size parameter: N (complete), q (paley), t (lattice/latin/triangular), n (hypercube)
    #[arg(long, visible_alias = "size")]
    n: Option<usize>,
    /// Explicit strongly regular parameters N,K,LAMBDA,MU
    #[arg(long, value_name = "N,K,L,MU")]
    srg: Option<String>,
}

impl GraphArgs {
    fn source(&self) -> Result<GraphSource, String> {
        match (&self.family, &self.srg) {
            (Some(_), Some(_)) => Err("pass either --family or --srg, not both".into()),
            (None, None) => Err("a graph is required: --family or --srg".into()),
            (None, Some(srg)) => Ok(GraphSource::srg(parse_srg(srg)?)),
            (Some(name), None) => {
                let family = parse_family(name)?;
                if family == Family::Petersen {
                    return Ok(GraphSource::Family(FamilySpec::petersen()));
                }
                let n = self.n.ok_or("--n is required for this family")?;
                Ok(GraphSource::Family(FamilySpec::new(family, n)))
            }
        }
    }
}

fn parse_family(name: &str) -> Result<Family, String> {
    match name.replace('_', "-").as_str() {
        "complete" => Ok(Family::Complete),
        "paley" => Ok(Family::Paley),
        "square-lattice" => Ok(Family::SquareLattice),
        "latin-square" => Ok(Family::LatinSquare),
        "triangular" => Ok(Family::Triangular),
        "hypercube" => Ok(Family::Hypercube),
        "petersen" => Ok(Family::Petersen),
        other => Err(format!("unknown family '{other}'")),
    }
}

fn parse_srg(text: &str) -> Result<SrgParams, String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 4 {
        return Err(format!("--srg needs four integers N,K,LAMBDA,MU, got '{text}'"));
    }
    let mut vals = [0usize; 4];
    for (slot, part) in vals.iter_mut().zip(&parts) {
        *slot = part.trim().parse().map_err(|_| format!("bad integer '{part}' in --srg"))?;
    }
    Ok(SrgParams::new(vals[0], vals[1], vals[2], vals[3]))
}

#[derive(Args, Debug, Clone)]
struct NlArgs {
    /// Nonlinearity: linear|cubic|cubic-quintic|loglinear
    #[arg(long, default_value = "linear")]
    nl: String,
    /// Bare nonlinearity coefficient g (G = g/(k(N−k)) is derived and echoed
    /// in the manifest)
    #[arg(long, default_value_t = 0.0)]
    g_coeff: f64,
}

impl NlArgs {
    fn nonlinearity(&self) -> Result<Nonlinearity, String> {
        let kind = match self.nl.replace('_', "-").as_str() {
            "linear" => NonlinearityKind::Linear,
            "cubic" => NonlinearityKind::Cubic,
            "cubic-quintic" => NonlinearityKind::CubicQuintic,
            "loglinear" => NonlinearityKind::Loglinear,
            other => return Err(format!("unknown nonlinearity '{other}'")),
        };
        Nonlinearity::from_kind(kind, self.g_coeff).ok_or_else(|| "unsupported kind".into())
    }
}

#[derive(Args, Debug, Clone)]
struct PolicyArgs {
    /// γ policy: fixed|cubic-critical|general-critical|srg-c1|srg-c2|srg-c2-prime|suff-complete-critical
    #[arg(long, default_value = "fixed")]
    policy: String,
    /// γ value for the fixed policy
    #[arg(long)]
    gamma: Option<f64>,
    /// Linear critical γ for suff-complete-critical (derived from the graph
    /// when omitted: 1/N complete, 1/k or γ_c2 for SRGs, numeric for the
    /// hypercube)
    #[arg(long)]
    gamma_l: Option<f64>,
}

impl PolicyArgs {
    fn policy(&self, source: &GraphSource, marked: usize) -> Result<GammaPolicy, String> {
        match self.policy.replace('_', "-").as_str() {
            "fixed" => {
                let gamma = self.gamma.ok_or("--gamma is required for the fixed policy")?;
                Ok(GammaPolicy::Fixed { gamma })
            }
            "cubic-critical" => Ok(GammaPolicy::CubicCritical),
            "general-critical" => Ok(GammaPolicy::GeneralCritical),
            "srg-c1" => Ok(GammaPolicy::SrgC1),
            "srg-c2" => Ok(GammaPolicy::SrgC2),
            "srg-c2-prime" => Ok(GammaPolicy::SrgC2Prime),
            "suff-complete-critical" => {
                let gamma_l = match self.gamma_l {
                    Some(g) => g,
                    None => derive_gamma_l(source, marked)?,
                };
                Ok(GammaPolicy::SuffCompleteCritical { gamma_l })
            }
            other => Err(format!("unknown policy '{other}'")),
        }
    }
}

/// Default linear critical γ for a graph source.
fn derive_gamma_l(source: &GraphSource, marked: usize) -> Result<f64, String> {
    let (is_complete, is_hypercube, n) = match source {
        GraphSource::Family(spec) => (
            spec.family == Family::Complete,
            spec.family == Family::Hypercube,
            spec.n_vertices().map_err(|e| e.to_string())?,
        ),
        GraphSource::Srg { srg } => (false, false, srg.n_vertices),
    };
    if is_complete {
        return Ok(1.0 / n as f64);
    }
    if is_hypercube {
        let collapsed = collapsed_of(source, marked)?;
        let degree = collapsed.degree as f64;
        let search = dynamics::find_gamma_numeric(&collapsed, (0.02 / degree, 10.0 / degree), 600);
        return Ok(search.gamma);
    }
    let srg = match source {
        GraphSource::Family(spec) => spec
            .derived_srg_params()
            .map_err(|e| e.to_string())?
            .ok_or("no derived parameters for this family")?,
        GraphSource::Srg { srg } => *srg,
    };
    let report = graphs::srg_check(&srg);
    if !report.feasible {
        return Err(format!("infeasible SRG parameters: {:?}", report.violations));
    }
    Ok(match report.srg_type {
        graphs::SrgType::TypeI => 1.0 / srg.degree as f64,
        _ => 1.0 / srg.degree as f64 + 1.0 / ((srg.n_vertices as f64 - 1.0) * srg.mu_common as f64),
    })
}

fn collapsed_of(source: &GraphSource, marked: usize) -> Result<graphs::CollapsedGraph, String> {
    match source {
        GraphSource::Family(spec) => {
            graphs::collapse_analytic(spec, marked).map_err(|e| e.to_string())
        }
        GraphSource::Srg { srg } => graphs::collapse_analytic_srg(srg).map_err(|e| e.to_string()),
    }
}

#[derive(Args, Debug, Clone)]
struct TolArgs {
    #[arg(long, default_value_t = 1e-10)]
    rel_tol: f64,
    #[arg(long, default_value_t = 1e-12)]
    abs_tol: f64,
    #[arg(long)]
    max_step: Option<f64>,
    /// Sampling interval (default t_end/2000)
    #[arg(long)]
    sample_dt: Option<f64>,
}

impl TolArgs {
    fn controls(&self, t_end: f64) -> Controls {
        Controls {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_step: self.max_step.unwrap_or(f64::INFINITY),
            sample_dt: self.sample_dt.unwrap_or(t_end / 2000.0),
        }
    }
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    nl: NlArgs,
    #[command(flatten)]
    policy: PolicyArgs,
    #[arg(long)]
    t_end: Option<f64>,
    /// Number of marked vertices (complete graph only for >1)
    #[arg(long, default_value_t = 1)]
    marked: usize,
    #[command(flatten)]
    tols: TolArgs,
    /// JSON config file mirroring the flags (flags win when both are given)
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value = "simulate.csv")]
    out: PathBuf,
    /// Manifest path (default: <out>.manifest.json)
    #[arg(long)]
    manifest: Option<PathBuf>,
}

/// JSON mirror of the simulate flags.
#[derive(Deserialize)]
struct ConfigFile {
    #[serde(flatten)]
    config: SearchConfig,
    #[serde(default)]
    tolerances: Option<Controls>,
    #[serde(default)]
    t_end: Option<f64>,
}

pub fn run(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    let started = Instant::now();
    let result = match cli.command {
        Command::Simulate(args) => cmd_simulate(args, &argv, started),
        Command::ClosedForm(args) => cmd_closed_form(args, &argv, started),
        Command::Sweep(args) => cmd_sweep(args, &argv, started),
        Command::Fit(args) => cmd_fit(args, &argv, started),
        Command::ValidateGraph(args) => cmd_validate(args, &argv, started),
        Command::CompareOracle(args) => cmd_compare(args, &argv, started),
        Command::OverlapSweep(args) => cmd_overlap(args, &argv, started),
        Command::Bloch(args) => cmd_bloch(args, &argv, started),
    };
    match result {
        Ok(()) => 0,
        Err(msg) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), String> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir).map_err(|e| format!("creating {}: {e}", dir.display()))?;
        }
    }
    std::fs::write(path, contents).map_err(|e| format!("writing {}: {e}", path.display()))
}

fn manifest_path(explicit: &Option<PathBuf>, out: &Path) -> PathBuf {
    explicit.clone().unwrap_or_else(|| {
        let mut os = out.as_os_str().to_owned();
        os.push(".manifest.json");
        PathBuf::from(os)
    })
}

fn write_manifest(
    path: &Path,
    argv: &[String],
    config: serde_json::Value,
    outputs: &[&Path],
    started: Instant,
) -> Result<(), String> {
    let manifest = json!({
        "command": argv.join(" "),
        "config": config,
        "outputs": outputs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
        "wall_time_s": started.elapsed().as_secs_f64(),
        "version": env!("CARGO_PKG_VERSION"),
    });
    write_file(path, &serde_json::to_string_pretty(&manifest).unwrap())
}

fn resolved_config_json(config: &SearchConfig, controls: &Controls, t_end: f64) -> serde_json::Value {
    let mut value = serde_json::to_value(config).unwrap();
    // echo the derived G next to g to keep the two conventions distinct
    if let Ok(collapsed) = config.collapsed() {
        let n = collapsed.n_vertices() as f64;
        let k = config.marked_count as f64;
        let g_big = config.nonlinearity.g() / (k * (n - k));
        value["g_big_derived"] = json!(g_big);
    }
    value["tolerances"] = serde_json::to_value(controls).unwrap();
    value["t_end"] = json!(t_end);
    value
}

fn build_run(
    graph: &GraphArgs,
    nl: &NlArgs,
    policy: &PolicyArgs,
    marked: usize,
    config_file: &Option<PathBuf>,
) -> Result<SearchConfig, String> {
    if let Some(path) = config_file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("reading {}: {e}", path.display()))?;
        let file: ConfigFile =
            serde_json::from_str(&text).map_err(|e| format!("parsing {}: {e}", path.display()))?;
        return Ok(file.config);
    }
    let source = graph.source()?;
    let nonlinearity = nl.nonlinearity()?;
    let policy = policy.policy(&source, marked)?;
    Ok(SearchConfig { graph: source, marked_count: marked, nonlinearity, policy })
}

fn cmd_simulate(args: SimulateArgs, argv: &[String], started: Instant) -> Result<(), String> {
    let config = build_run(&args.graph, &args.nl, &args.policy, args.marked, &args.config)?;
    let (t_end, tolerances) = if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
        let file: ConfigFile = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        (
            args.t_end.or(file.t_end).ok_or("t_end required (flag or config)")?,
            file.tolerances,
        )
    } else {
        (args.t_end.ok_or("--t-end is required")?, None)
    };
    let controls = tolerances.unwrap_or_else(|| args.tols.controls(t_end));
    let traj = dynamics::integrate(&config, t_end, &controls).map_err(|e| e.to_string())?;
    write_file(&args.out, &traj.to_csv())?;
    let mpath = manifest_path(&args.manifest, &args.out);
    write_manifest(
        &mpath,
        argv,
        resolved_config_json(&config, &controls, t_end),
        &[&args.out],
        started,
    )?;
    let (t_peak, peak) = traj.peak().unwrap_or((0.0, 0.0));
    println!(
        "wrote {} ({} samples); peak p0 = {} at t = {}",
        args.out.display(),
        traj.samples.len(),
        sig12(peak),
        sig12(t_peak)
    );
    Ok(())
}

#[derive(Args, Debug)]
struct ClosedFormArgs {
    /// Operation name, e.g. cubic-runtime, cq-runtime, log-runtime-bounds,
    /// exp-integral-e1, srg-prediction, bloch-coords, ...
    #[arg(long)]
    op: String,
    #[arg(long)]
    n: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    #[arg(long, default_value_t = 0.0)]
    g_coeff: f64,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    x: Option<f64>,
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
    #[arg(long)]
    srg: Option<String>,
    /// Nonlinearity for general-runtime / general-width-leading
    #[arg(long, default_value = "cubic")]
    nl: String,
    /// Complex amplitude "re,im" for bloch-coords
    #[arg(long)]
    c0: Option<String>,
    #[arg(long)]
    c1: Option<String>,
    /// Family for suff-complete-probs
    #[arg(long)]
    family: Option<String>,
    #[arg(long, default_value = "closed_form.json")]
    out: PathBuf,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

fn parse_complex(text: &str) -> Result<Complex64, String> {
    let (re, im) = text
        .split_once(',')
        .ok_or_else(|| format!("expected 're,im', got '{text}'"))?;
    Ok(Complex64::new(
        re.trim().parse().map_err(|_| "bad real part")?,
        im.trim().parse().map_err(|_| "bad imaginary part")?,
    ))
}

fn cmd_closed_form(args: ClosedFormArgs, argv: &[String], started: Instant) -> Result<(), String> {
    let need_n = || args.n.ok_or_else(|| "--n is required for this op".to_string());
    let params = |g: f64| -> Result<CompleteSearchParams, String> {
        Ok(CompleteSearchParams::new(need_n()?, args.k, g).with_epsilon(args.epsilon))
    };
    let nl_of = |kind: &str, g: f64| -> Result<Nonlinearity, String> {
        NlArgs { nl: kind.to_string(), g_coeff: g }.nonlinearity()
    };
    let op = args.op.replace('_', "-");
    let result: serde_json::Value = match op.as_str() {
        "linear-prob" => {
            let t = args.t.ok_or("--t required")?;
            json!(closedform::linear_prob(need_n()?, t))
        }
        "cubic-prob" => {
            let t = args.t.ok_or("--t required")?;
            json!(closedform::cubic_prob(&params(args.g_coeff)?, t))
        }
        "cubic-time-of-prob" => {
            let x = args.x.ok_or("--x required")?;
            json!(closedform::cubic_time_of_prob(&params(args.g_coeff)?, x))
        }
        "cubic-runtime" => json!(closedform::cubic_runtime(&params(args.g_coeff)?)),
        "cubic-width" => {
            let p = params(args.g_coeff)?;
            json!({
                "exact": closedform::cubic_width_exact(&p),
                "leading": closedform::cubic_width_leading(&p),
            })
        }
        "general-runtime" => {
            let nl = nl_of(&args.nl, args.g_coeff)?;
            json!(closedform::general_runtime(&nl, need_n()?, args.k).map_err(|e| e.to_string())?)
        }
        "general-width-leading" => {
            let nl = nl_of(&args.nl, args.g_coeff)?;
            json!(closedform::general_width_leading(&nl, need_n()?, args.k, args.epsilon)
                .map_err(|e| e.to_string())?)
        }
        "cq-runtime" => {
            let r = closedform::cq_runtime(need_n()?, args.k, args.g_coeff)
                .map_err(|e| e.to_string())?;
            if r.used_fallback {
                eprintln!("warning: closed form lost significance; value comes from quadrature");
            }
            json!({ "value": r.value, "used_fallback": r.used_fallback })
        }
        "log-runtime" => {
            json!(closedform::log_runtime_numeric(need_n()?, args.k, args.g_coeff)
                .map_err(|e| e.to_string())?)
        }
        "log-runtime-bounds" => {
            let n = need_n()?;
            let b = closedform::log_runtime_bounds(n, args.k, args.g_coeff)
                .map_err(|e| e.to_string())?;
            let numeric = closedform::log_runtime_numeric(n, args.k, args.g_coeff)
                .map_err(|e| e.to_string())?;
            json!({
                "lower": b.lower,
                "numeric": numeric,
                "upper_tight": b.upper_tight,
                "upper_loose": b.upper_loose,
            })
        }
        "exp-integral-e1" => {
            let x = args.x.ok_or("--x required")?;
            json!(closedform::exp_integral_e1(x))
        }
        "log-width-lower-bound" => {
            json!(closedform::log_width_lower_bound(need_n()?, args.k, args.g_coeff, args.epsilon))
        }
        "repulsive-stationary-points" => {
            let n = need_n()?;
            let g_big = args.g_coeff / (args.k * (n - args.k));
            json!(closedform::repulsive_stationary_points(n, args.k, g_big))
        }
        "srg-prediction" => {
            let srg = parse_srg(args.srg.as_deref().ok_or("--srg required")?)?;
            json!(closedform::srg_prediction(&srg).map_err(|e| e.to_string())?)
        }
        "suff-complete-probs" => {
            let t = args.t.ok_or("--t required")?;
            let family = parse_family(args.family.as_deref().ok_or("--family required")?)?;
            let spec = if family == Family::Petersen {
                FamilySpec::petersen()
            } else {
                FamilySpec::new(family, need_n()? as usize)
            };
            let collapsed = graphs::collapse_analytic(&spec, 1).map_err(|e| e.to_string())?;
            json!(closedform::suff_complete_probs(&collapsed, t))
        }
        "bloch-coords" => {
            let c0 = parse_complex(args.c0.as_deref().ok_or("--c0 required")?)?;
            let c1 = parse_complex(args.c1.as_deref().ok_or("--c1 required")?)?;
            let (x, y, z) = closedform::bloch_coords(c0, c1);
            json!({ "x": x, "y": y, "z": z })
        }
        other => return Err(format!("unknown closed-form op '{other}'")),
    };
    let doc = json!({ "op": op, "result": result });
    write_file(&args.out, &serde_json::to_string_pretty(&doc).unwrap())?;
    let mpath = manifest_path(&args.manifest, &args.out);
    write_manifest(&mpath, argv, doc, &[&args.out], started)?;
    println!("wrote {}", args.out.display());
    Ok(())
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// What to compute per grid point:
    /// closed-runtime|sim-peak|sim-width|resources
    #[arg(long, default_value = "closed-runtime")]
    measure: String,
    /// Explicit N list, comma-separated
    #[arg(long)]
    n_values: Option<String>,
    #[arg(long)]
    n_start: Option<f64>,
    #[arg(long)]
    n_end: Option<f64>,
    #[arg(long)]
    n_step: Option<f64>,
    /// Marked count (real-valued; recipes may override)
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    /// Comma-separated g values (one run per (N, g) pair)
    #[arg(long, default_value = "0")]
    g_values: String,
    /// Named parameter recipe: loglinear-paper sets k = N^(1/4),
    /// g = N^(1/8)/ln(N/k)
    #[arg(long)]
    recipe: Option<String>,
    #[command(flatten)]
    nl: NlArgs,
    #[command(flatten)]
    policy: PolicyArgs,
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
    /// g-exponent κ for --measure resources
    #[arg(long, default_value_t = 0.5)]
    kappa: f64,
    /// k-exponent λ for --measure resources
    #[arg(long, default_value_t = 0.0)]
    lambda: f64,
    /// Worker count; each worker writes a staging file, merged in order
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[command(flatten)]
    tols: TolArgs,
    #[arg(long, default_value = "sweep.csv")]
    out: PathBuf,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

fn parse_list(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| format!("bad number '{s}'")))
        .collect()
}

fn sweep_n_values(args: &SweepArgs) -> Result<Vec<f64>, String> {
    if let Some(list) = &args.n_values {
        return parse_list(list);
    }
    match (args.n_start, args.n_end, args.n_step) {
        (Some(a), Some(b), Some(s)) if s > 0.0 && b >= a => {
            let mut v = Vec::new();
            let mut n = a;
            while n <= b + 1e-9 {
                v.push(n);
                n += s;
            }
            Ok(v)
        }
        _ => Err("provide --n-values or --n-start/--n-end/--n-step".into()),
    }
}

/// One sweep grid point after recipes are applied.
#[derive(Clone, Copy)]
struct GridPoint {
    n: f64,
    k: f64,
    g: f64,
}

fn sweep_grid(args: &SweepArgs) -> Result<Vec<GridPoint>, String> {
    let ns = sweep_n_values(args)?;
    match args.recipe.as_deref() {
        None => {
            let gs = parse_list(&args.g_values)?;
            let mut grid = Vec::new();
            for &n in &ns {
                for &g in &gs {
                    grid.push(GridPoint { n, k: args.k, g });
                }
            }
            Ok(grid)
        }
        Some("loglinear-paper") => Ok(ns
            .iter()
            .map(|&n| {
                let k = n.powf(0.25);
                let g = n.powf(0.125) / (n / k).ln();
                GridPoint { n, k, g }
            })
            .collect()),
        Some(other) => Err(format!("unknown recipe '{other}'")),
    }
}

fn cmd_sweep(args: SweepArgs, argv: &[String], started: Instant) -> Result<(), String> {
    let grid = sweep_grid(&args)?;
    let measure = args.measure.replace('_', "-");
    let header = match measure.as_str() {
        "closed-runtime" => "N,k,g,t_star,width_exact,width_leading",
        "sim-peak" => "N,k,g,t_peak,peak,norm_err",
        "sim-width" => "N,k,g,t_peak,width_measured,width_leading",
        "resources" => "N,kappa,lambda,T,width,S,ST,ST2,N0_bound,regime",
        other => return Err(format!("unknown measure '{other}'")),
    };
    let nl_kind = args.nl.nonlinearity()?.kind();

    let row_of = |pt: &GridPoint| -> Result<String, String> {
        match measure.as_str() {
            "closed-runtime" => {
                let nl = Nonlinearity::from_kind(nl_kind, pt.g).unwrap();
                let t_star =
                    closedform::general_runtime(&nl, pt.n, pt.k).map_err(|e| e.to_string())?;
                let width_exact = if nl_kind == NonlinearityKind::Cubic {
                    closedform::cubic_width_exact(
                        &CompleteSearchParams::new(pt.n, pt.k, pt.g).with_epsilon(args.epsilon),
                    )
                } else {
                    f64::NAN
                };
                let width_leading =
                    closedform::general_width_leading(&nl, pt.n, pt.k, args.epsilon)
                        .unwrap_or(f64::NAN);
                Ok(format!(
                    "{},{},{},{},{},{}",
                    sig12(pt.n),
                    sig12(pt.k),
                    sig12(pt.g),
                    sig12(t_star),
                    sig12(width_exact),
                    sig12(width_leading)
                ))
            }
            "sim-peak" | "sim-width" => {
                let n = pt.n.round() as usize;
                let k = pt.k.round() as usize;
                let nl = Nonlinearity::from_kind(nl_kind, pt.g).unwrap();
                let source = GraphSource::Family(FamilySpec::new(Family::Complete, n));
                let policy = args.policy.policy(&source, k)?;
                let config = SearchConfig {
                    graph: source,
                    marked_count: k,
                    nonlinearity: nl.clone(),
                    policy,
                };
                // generous horizon past the expected peak
                let t_guess = closedform::general_runtime(&nl, pt.n, pt.k)
                    .unwrap_or(std::f64::consts::FRAC_PI_2 * (pt.n / pt.k).sqrt());
                let t_end = 1.25 * t_guess;
                let controls = args.tols.controls(t_end);
                if measure == "sim-peak" {
                    let traj =
                        dynamics::integrate(&config, t_end, &controls).map_err(|e| e.to_string())?;
                    let (t_peak, peak) = traj.peak().ok_or("empty trajectory")?;
                    Ok(format!(
                        "{},{},{},{},{},{}",
                        sig12(pt.n),
                        sig12(pt.k),
                        sig12(pt.g),
                        sig12(t_peak),
                        sig12(peak),
                        sig12(traj.max_norm_err())
                    ))
                } else {
                    let (t_peak, width) =
                        dynamics::measure_peak_width(&config, t_end, args.epsilon, &controls)
                            .map_err(|e| e.to_string())?;
                    let width_leading =
                        closedform::general_width_leading(&nl, pt.n, pt.k, args.epsilon)
                            .unwrap_or(f64::NAN);
                    Ok(format!(
                        "{},{},{},{},{},{}",
                        sig12(pt.n),
                        sig12(pt.k),
                        sig12(pt.g),
                        sig12(t_peak),
                        sig12(width),
                        sig12(width_leading)
                    ))
                }
            }
            "resources" => {
                let n = pt.n;
                let g = n.powf(args.kappa);
                let k = n.powf(args.lambda).max(1.0);
                let exps = ScalingExponents::new(args.kappa, args.lambda).with_sigma(args.kappa);
                let (t, width) = match nl_kind {
                    NonlinearityKind::Loglinear => {
                        let t = closedform::log_runtime_numeric(n, k, g)
                            .map_err(|e| e.to_string())?;
                        let w = closedform::log_width_lower_bound(n, k, g, args.epsilon);
                        (t, w)
                    }
                    _ => {
                        let p = CompleteSearchParams::new(n, k, g).with_epsilon(args.epsilon);
                        (closedform::cubic_runtime(&p), closedform::cubic_width_leading(&p))
                    }
                };
                let model = resources::ResourceModel::new(t, width, n);
                let s = resources::space_requirement(&model);
                let st = resources::st_products(&model);
                let bound = resources::n0_lower_bound(nl_kind, &exps, n);
                Ok(format!(
                    "{},{},{},{},{},{},{},{},{},\"{}\"",
                    sig12(n),
                    sig12(args.kappa),
                    sig12(args.lambda),
                    sig12(t),
                    sig12(width),
                    sig12(s),
                    sig12(st.st),
                    sig12(st.st2),
                    sig12(bound.value),
                    bound.regime
                ))
            }
            _ => unreachable!(),
        }
    };

    // fan out over contiguous chunks; workers write staging files merged in order
    let jobs = args.jobs.max(1).min(grid.len().max(1));
    let chunk = grid.len().div_ceil(jobs);
    let mut staging: Vec<PathBuf> = Vec::new();
    let results: Vec<Result<Vec<String>, String>> = std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for (w, points) in grid.chunks(chunk.max(1)).enumerate() {
            let row_of = &row_of;
            handles.push((w, scope.spawn(move || -> Result<Vec<String>, String> {
                points.iter().map(row_of).collect()
            })));
        }
        handles
            .into_iter()
            .map(|(_, h)| h.join().unwrap_or_else(|_| Err("worker panicked".into())))
            .collect()
    });
    for (w, rows) in results.iter().enumerate() {
        let rows = rows.as_ref().map_err(|e| e.clone())?;
        let part = args.out.with_extension(format!("part-{w}"));
        write_file(&part, &(rows.join("\n") + "\n"))?;
        staging.push(part);
    }
    let mut merged = String::from(header);
    merged.push('\n');
    for part in &staging {
        merged.push_str(&std::fs::read_to_string(part).map_err(|e| e.to_string())?);
        let _ = std::fs::remove_file(part);
    }
    write_file(&args.out, &merged)?;
    let mpath = manifest_path(&args.manifest, &args.out);
    let config = json!({
        "measure": measure,
        "points": grid.len(),
        "nl": format!("{nl_kind:?}"),
        "recipe": args.recipe,
        "epsilon": args.epsilon,
        "jobs": jobs,
    });
    write_manifest(&mpath, argv, config, &[&args.out], started)?;
    println!("wrote {} ({} rows)", args.out.display(), grid.len());
    Ok(())
}

#[derive(Args, Debug)]
struct FitArgs {
    /// Input CSV with a header row
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "N")]
    x_col: String,
    #[arg(long, default_value = "t_star")]
    y_col: String,
    /// Label recorded in the fit report
    #[arg(long)]
    recipe_label: Option<String>,
    #[arg(long, default_value = "fit.json")]
    out: PathBuf,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

fn cmd_fit(args: FitArgs, argv: &[String], started: Instant) -> Result<(), String> {
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| format!("reading {}: {e}", args.input.display()))?;
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty input")?;
    let cols: Vec<&str> = header.split(',').collect();
    let xi = cols.iter().position(|&c| c == args.x_col).ok_or(format!(
        "column '{}' not found in header '{header}'",
        args.x_col
    ))?;
    let yi = cols.iter().position(|&c| c == args.y_col).ok_or(format!(
        "column '{}' not found in header '{header}'",
        args.y_col
    ))?;
    let mut points = Vec::new();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let x: f64 = fields
            .get(xi)
            .and_then(|s| s.trim().parse().ok())
            .ok_or(format!("bad row '{line}'"))?;
        let y: f64 = fields
            .get(yi)
            .and_then(|s| s.trim().parse().ok())
            .ok_or(format!("bad row '{line}'"))?;
        points.push((x, y));
    }
    let fit = resources::fit_power_law(&points).map_err(|e| e.to_string())?;
    let doc = json!({
        "points": points,
        "prefactor": fit.prefactor,
        "exponent": fit.exponent,
        "r_squared": fit.r_squared,
        "recipe": args.recipe_label,
    });
    write_file(&args.out, &serde_json::to_string_pretty(&doc).unwrap())?;
    let mpath = manifest_path(&args.manifest, &args.out);
    write_manifest(&mpath, argv, doc.clone(), &[&args.out], started)?;
    println!(
        "fit: {} · N^{} (R² = {})",
        sig12(fit.prefactor),
        sig12(fit.exponent),
        sig12(fit.r_squared)
    );
    Ok(())
}

#[derive(Args, Debug)]
struct ValidateGraphArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Marked vertex for the collapse audit
    #[arg(long, default_value_t = 0)]
    marked: usize,
    /// Also write the full edge list here
    #[arg(long)]
    export_edges: Option<PathBuf>,
    /// Also write the collapsed quotient JSON here
    #[arg(long)]
    export_collapsed: Option<PathBuf>,
    #[arg(long, default_value = "validate.json")]
    out: PathBuf,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

fn cmd_validate(args: ValidateGraphArgs, argv: &[String], started: Instant) -> Result<(), String> {
    let source = args.graph.source()?;
    let mut outputs: Vec<&Path> = vec![&args.out];
    let doc = match &source {
        GraphSource::Srg { srg } => {
            let report = graphs::srg_check(srg);
            json!({
                "params": srg,
                "feasible": report.feasible,
                "type": report.srg_type,
                "violations": report.violations,
            })
        }
        GraphSource::Family(spec) => {
            let graph = graphs::build_graph(spec).map_err(|e| e.to_string())?;
            let degree = graph.regular_degree();
            let derived = spec.derived_srg_params().map_err(|e| e.to_string())?;
            let feasibility = derived.as_ref().map(graphs::srg_check);
            let classes =
                graphs::equitable_partition(&graph, &[args.marked]).map_err(|e| e.to_string())?;
            let equitable = graphs::is_equitable(&graph, &classes);
            let collapsed = graphs::collapse(&graph, &[args.marked]).map_err(|e| e.to_string())?;
            let analytic_diff = graphs::collapse_analytic(spec, 1)
                .ok()
                .and_then(|a| collapsed.max_abs_diff(&a));
            if let Some(path) = &args.export_edges {
                write_file(path, &graph.to_edge_list())?;
            }
            if let Some(path) = &args.export_collapsed {
                write_file(path, &collapsed.to_json())?;
            }
            json!({
                "family": spec,
                "n_vertices": graph.n_vertices,
                "regular_degree": degree,
                "derived_params": derived,
                "feasible": feasibility.as_ref().map(|r| r.feasible),
                "type": feasibility.as_ref().map(|r| r.srg_type),
                "violations": feasibility.as_ref().map(|r| r.violations.clone()),
                "class_sizes": collapsed.class_sizes,
                "equitable": equitable,
                "symmetry_residual": collapsed.symmetry_residual(),
                "matches_analytic_within": analytic_diff,
            })
        }
    };
    write_file(&args.out, &serde_json::to_string_pretty(&doc).unwrap())?;
    if let Some(p) = &args.export_edges {
        outputs.push(p);
    }
    if let Some(p) = &args.export_collapsed {
        outputs.push(p);
    }
    let mpath = manifest_path(&args.manifest, &args.out);
    write_manifest(&mpath, argv, doc.clone(), &outputs, started)?;
    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    Ok(())
}

#[derive(Args, Debug)]
struct CompareOracleArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    nl: NlArgs,
    #[command(flatten)]
    policy: PolicyArgs,
    #[arg(long)]
    t_end: f64,
    #[arg(long, default_value_t = 1)]
    marked: usize,
    #[command(flatten)]
    tols: TolArgs,
    /// Also write the full per-vertex trajectory CSV
    #[arg(long)]
    full_csv: Option<PathBuf>,
    /// Also write the reduced trajectory CSV
    #[arg(long)]
    reduced_csv: Option<PathBuf>,
    #[arg(long, default_value = "compare.json")]
    out: PathBuf,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

fn cmd_compare(args: CompareOracleArgs, argv: &[String], started: Instant) -> Result<(), String> {
    let source = args.graph.source()?;
    let spec = match &source {
        GraphSource::Family(spec) => *spec,
        GraphSource::Srg { .. } => {
            return Err("compare-oracle builds the full graph; pass --family, not --srg".into())
        }
    };
    let graph = graphs::build_graph(&spec).map_err(|e| e.to_string())?;
    let nl = args.nl.nonlinearity()?;
    let policy = args.policy.policy(&source, args.marked)?;
    let marked: Vec<usize> = (0..args.marked).collect();
    let controls = args.tols.controls(args.t_end);
    let full = oracle::full_integrate(&graph, &marked, &nl, &policy, args.t_end, &controls)
        .map_err(|e| e.to_string())?;
    let config = SearchConfig {
        graph: source,
        marked_count: args.marked,
        nonlinearity: nl,
        policy,
    };
    let reduced = dynamics::integrate(&config, args.t_end, &controls).map_err(|e| e.to_string())?;
    let report = oracle::compare(&full, &reduced).map_err(|e| e.to_string())?;
    let doc = serde_json::to_value(&report).unwrap();
    write_file(&args.out, &serde_json::to_string_pretty(&doc).unwrap())?;
    let mut outputs: Vec<&Path> = vec![&args.out];
    if let Some(p) = &args.full_csv {
        write_file(p, &full.trajectory.to_csv())?;
        outputs.push(p);
    }
    if let Some(p) = &args.reduced_csv {
        write_file(p, &reduced.to_csv())?;
        outputs.push(p);
    }
    let mpath = manifest_path(&args.manifest, &args.out);
    write_manifest(
        &mpath,
        argv,
        resolved_config_json(&config, &controls, args.t_end),
        &outputs,
        started,
    )?;
    println!("max |full − reduced| = {}", sig12(report.max_abs_dev));
    Ok(())
}

#[derive(Args, Debug)]
struct OverlapSweepArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long)]
    gamma_min: f64,
    #[arg(long)]
    gamma_max: f64,
    #[arg(long, default_value_t = 200)]
    grid: usize,
    /// Also refine and report the balanced-overlap γ* in the manifest
    #[arg(long, default_value_t = false)]
    find_critical: bool,
    #[arg(long, default_value = "overlap.csv")]
    out: PathBuf,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

fn cmd_overlap(args: OverlapSweepArgs, argv: &[String], started: Instant) -> Result<(), String> {
    if !(args.gamma_min > 0.0 && args.gamma_max > args.gamma_min) {
        return Err("need 0 < gamma-min < gamma-max".into());
    }
    let source = args.graph.source()?;
    let collapsed = collapsed_of(&source, 1)?;
    let grid: Vec<f64> = (0..args.grid.max(2))
        .map(|i| {
            args.gamma_min
                + (args.gamma_max - args.gamma_min) * i as f64 / (args.grid.max(2) - 1) as f64
        })
        .collect();
    let sweep = spectral::overlap_sweep(&collapsed, &grid);
    write_file(&args.out, &spectral::sweep_to_csv(&sweep))?;
    let mut config = json!({
        "gamma_min": args.gamma_min,
        "gamma_max": args.gamma_max,
        "grid": args.grid,
        "class_sizes": collapsed.class_sizes,
    });
    if args.find_critical {
        let search =
            dynamics::find_gamma_numeric(&collapsed, (args.gamma_min, args.gamma_max), args.grid);
        if search.at_boundary {
            eprintln!("warning: no interior balanced-overlap crossing; reporting the boundary");
        }
        config["gamma_star"] = json!(search.gamma);
        config["gamma_star_at_boundary"] = json!(search.at_boundary);
        println!("gamma_star = {}", sig12(search.gamma));
    }
    let mpath = manifest_path(&args.manifest, &args.out);
    write_manifest(&mpath, argv, config, &[&args.out], started)?;
    println!("wrote {}", args.out.display());
    Ok(())
}

#[derive(Args, Debug)]
struct BlochArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    nl: NlArgs,
    #[command(flatten)]
    policy: PolicyArgs,
    #[arg(long)]
    t_end: f64,
    #[arg(long, default_value_t = 1)]
    marked: usize,
    #[command(flatten)]
    tols: TolArgs,
    #[arg(long, default_value = "bloch.csv")]
    out: PathBuf,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

fn cmd_bloch(args: BlochArgs, argv: &[String], started: Instant) -> Result<(), String> {
    let config = build_run(&args.graph, &args.nl, &args.policy, args.marked, &None)?;
    let controls = args.tols.controls(args.t_end);
    let traj = dynamics::integrate(&config, args.t_end, &controls).map_err(|e| e.to_string())?;
    if traj.n_classes() != 2 {
        return Err(format!(
            "bloch needs a two-class run; this graph collapses to {} classes",
            traj.n_classes()
        ));
    }
    let mut out = String::from("t,p0,p1,gamma,norm_err,bx,by,bz\n");
    for (s, amps) in traj.samples.iter().zip(&traj.amplitudes) {
        let norm = (amps[0].norm_sqr() + amps[1].norm_sqr()).sqrt();
        let (bx, by, bz) = closedform::bloch_coords(amps[0] / norm, amps[1] / norm);
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            sig12(s.t),
            sig12(s.probs[0]),
            sig12(s.probs[1]),
            sig12(s.gamma),
            sig12(s.norm_err),
            sig12(bx),
            sig12(by),
            sig12(bz)
        ));
    }
    write_file(&args.out, &out)?;
    let mpath = manifest_path(&args.manifest, &args.out);
    write_manifest(
        &mpath,
        argv,
        resolved_config_json(&config, &controls, args.t_end),
        &[&args.out],
        started,
    )?;
    println!("wrote {}", args.out.display());
    Ok(())
}
