//! `fiberwalk`: fiber enumeration, fiber-graph connectivity reports,
//! verification suites, and Metropolis random-walk experiments.
//!
//! Exit codes: 0 success, 1 error, 2 empty fiber / not applicable,
//! 3 verification failure.

use clap::{Args, Parser, Subcommand};
use fiberwalk::{
    build_ak, build_bk, build_graph, decompose_rhs, enumerate_fiber_with_budget,
    fiber_graph_to_dot, fiber_to_csv, fiber_to_json, graph_to_edge_csv, graver_ak, graver_oracle,
    groebner_lex_ak, level_graphs, level_size, levels_to_csv, matrix_to_json, metropolis_matrix,
    min_degree_formula, mixing_times, moves_from_csv, parse_int_vec, parse_matrix, sample_rhs,
    sweep_by_k, sweep_by_scale, total_size, universality_lift, verify_degree_match,
    verify_gap_witness, ConnectivityReport, IntMatrix, MoveKind, MoveSet,
    DEFAULT_SWEEP_POINT_CAP, DENSE_EIGEN_CUTOFF,
};
use serde_json::json;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_EMPTY: u8 = 2;
const EXIT_VERIFY_FAILED: u8 = 3;
/// Overrides the default enumeration/sweep budgets; a `--budget` flag
/// still wins over the environment.
const BUDGET_ENV: &str = "FIBERWALK_BUDGET";
const DEFAULT_POINT_BUDGET: usize = 5000;

#[derive(Parser)]
#[command(
    name = "fiberwalk",
    version,
    about = "Fiber graphs of integer matrices: enumeration, connectivity, and random walks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the fiber {u >= 0 : A u = b}
    Fiber(FiberArgs),
    /// Build a fiber graph and report degrees, cuts, and separators
    Connectivity(ConnectivityArgs),
    /// Run a verification suite; exits 3 if any check fails
    Verify(VerifyArgs),
    /// Metropolis walk analysis on a fiber graph, or experiment sweeps
    Chain(ChainArgs),
    /// Structured-family helpers: matrices, level decompositions, samplers
    Ak(AkArgs),
}

#[derive(Args)]
struct FiberArgs {
    /// Matrix source: a file path (JSON or text), `ak:K`, or `bk:K`
    #[arg(long)]
    matrix: String,
    /// Right-hand side: comma- or space-separated integers
    #[arg(long, allow_hyphen_values = true)]
    rhs: String,
    /// Maximum number of fiber points (overrides FIBERWALK_BUDGET)
    #[arg(long)]
    budget: Option<usize>,
    /// Emit JSON instead of CSV
    #[arg(long)]
    json: bool,
    /// Write the payload to this file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ConnectivityArgs {
    /// Matrix source: a file path (JSON or text), `ak:K`, or `bk:K`
    #[arg(long)]
    matrix: String,
    /// Right-hand side: comma- or space-separated integers
    #[arg(long, allow_hyphen_values = true)]
    rhs: String,
    /// Move set: graver-ak | groebner-lex-ak | oracle[:RADIUS] | custom:PATH
    #[arg(long)]
    moves: String,
    /// Maximum number of fiber points (overrides FIBERWALK_BUDGET)
    #[arg(long)]
    budget: Option<usize>,
    /// Write the fiber graph in DOT format to this file
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Write the edge list as CSV to this file
    #[arg(long)]
    edges: Option<PathBuf>,
    /// Emit the report as JSON instead of text
    #[arg(long)]
    json: bool,
    /// Write the report to this file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(subcommand)]
    suite: VerifySuite,
}

#[derive(Subcommand)]
enum VerifySuite {
    /// Witness family: lex graphs with minimum degree k but a single bridge
    Conj1 {
        /// k or a range k1..k2 (inclusive)
        #[arg(long, default_value = "2..4")]
        k: String,
        #[arg(long)]
        json: bool,
    },
    /// Edge connectivity equals the closed-form minimum degree on samples
    GraverTheorem {
        /// k or a range k1..k2 (inclusive)
        #[arg(long, default_value = "1..2")]
        k: String,
        /// Sampled right-hand sides per k
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(long, default_value_t = 17)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Closed-form move family equals the kernel enumeration oracle
    GraverBasis {
        /// k or a range k1..k2 (inclusive)
        #[arg(long, default_value = "1..2")]
        k: String,
        #[arg(long)]
        json: bool,
    },
    /// Slack lifting preserves the fiber graph up to isomorphism
    Universality {
        /// k or a range k1..k2 (inclusive)
        #[arg(long, default_value = "2")]
        k: String,
        /// Minimum value every lifted right-hand-side entry must reach
        #[arg(long, default_value_t = 100)]
        floor: i64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
#[command(args_conflicts_with_subcommands = true)]
struct ChainArgs {
    #[command(subcommand)]
    experiment: Option<ChainCommand>,
    /// Matrix source: a file path (JSON or text), `ak:K`, or `bk:K`
    #[arg(long)]
    matrix: Option<String>,
    /// Right-hand side: comma- or space-separated integers
    #[arg(long, allow_hyphen_values = true)]
    rhs: Option<String>,
    /// Move set: graver-ak | groebner-lex-ak | oracle[:RADIUS] | custom:PATH
    #[arg(long)]
    moves: Option<String>,
    /// Total-variation thresholds, comma-separated (default 0.25 on small chains)
    #[arg(long)]
    eps: Option<String>,
    /// Maximum number of fiber points (overrides FIBERWALK_BUDGET)
    #[arg(long)]
    budget: Option<usize>,
    /// Emit the report as JSON instead of text
    #[arg(long)]
    json: bool,
    /// Write the report to this file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ChainCommand {
    /// Experiment sweeps producing CSV tables
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct ExperimentArgs {
    #[command(subcommand)]
    which: ExperimentKind,
}

#[derive(Subcommand)]
enum ExperimentKind {
    /// Family sweep at unit right-hand side: SLEM and mixing scale vs k
    Fig4 {
        #[arg(long, default_value_t = 10)]
        kmax: usize,
        /// Per-fiber point cap (overrides FIBERWALK_BUDGET)
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Right-hand-side scale sweep at fixed k = 3
    Fig5 {
        #[arg(long, default_value_t = 6)]
        lmax: i64,
        /// Per-fiber point cap (overrides FIBERWALK_BUDGET)
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct AkArgs {
    #[command(subcommand)]
    which: AkCommand,
}

#[derive(Subcommand)]
enum AkCommand {
    /// Print the family matrix, or its slack-lifted companion with --bk
    Matrix {
        #[arg(long)]
        k: usize,
        /// Emit the companion [[A_{k+1}, I], [0, I]] instead
        #[arg(long)]
        bk: bool,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Split a right-hand side into (w1, w2, c) and its feasible levels
    Decompose {
        /// Right-hand side of odd length 2k+1
        #[arg(long, allow_hyphen_values = true)]
        rhs: String,
        #[arg(long)]
        json: bool,
        /// Write the per-level point table as CSV to this file
        #[arg(long)]
        output: Option<PathBuf>,
        /// Maximum number of fiber points for --output (overrides FIBERWALK_BUDGET)
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Closed-form minimum degree of the full-family fiber graph
    MinDegree {
        /// Right-hand side of odd length 2k+1
        #[arg(long, allow_hyphen_values = true)]
        rhs: String,
        #[arg(long)]
        json: bool,
    },
    /// Deterministic sampler of nonempty right-hand sides
    Sample {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 17)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        count: usize,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version go to stdout and exit 0; usage errors are
            // ordinary errors under this tool's exit-code contract.
            let is_error = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if is_error { 1 } else { 0 });
        }
    };
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Fiber(args) => cmd_fiber(args),
        Command::Connectivity(args) => cmd_connectivity(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Chain(args) => cmd_chain(args),
        Command::Ak(args) => cmd_ak(args),
    }
}

// ==== shared plumbing =================================================

/// Matrix flag value: a structured-family shorthand or a file.
fn load_matrix(spec: &str) -> Result<(IntMatrix, Option<usize>), String> {
    if let Some(k) = spec.strip_prefix("ak:") {
        let k = parse_family_index(k)?;
        return Ok((build_ak(k).matrix().clone(), Some(k)));
    }
    if let Some(k) = spec.strip_prefix("bk:") {
        let k = parse_family_index(k)?;
        return Ok((build_bk(k), None));
    }
    let text = fs::read_to_string(spec).map_err(|e| format!("reading {spec}: {e}"))?;
    let m = parse_matrix(&text).map_err(|e| format!("parsing {spec}: {e}"))?;
    Ok((m, None))
}

fn parse_family_index(s: &str) -> Result<usize, String> {
    let k: usize = s
        .parse()
        .map_err(|_| format!("family index must be a positive integer, got {s:?}"))?;
    if k == 0 || k > 1000 {
        return Err(format!("family index must be in 1..=1000, got {k}"));
    }
    Ok(k)
}

/// Moves flag value. The family move sets require a matrix given as `ak:K`
/// so the family index is unambiguous.
fn load_moves(
    spec: &str,
    matrix: &IntMatrix,
    family_k: Option<usize>,
) -> Result<MoveSet, String> {
    let need_k = |name: &str| {
        family_k.ok_or_else(|| format!("--moves {name} requires the matrix to be given as ak:K"))
    };
    if spec == "graver-ak" {
        return graver_ak(need_k("graver-ak")?).map_err(|e| e.to_string());
    }
    if spec == "groebner-lex-ak" {
        return groebner_lex_ak(need_k("groebner-lex-ak")?).map_err(|e| e.to_string());
    }
    if spec == "oracle" {
        for radius in 2..=8 {
            let report = graver_oracle(matrix, radius).map_err(|e| e.to_string())?;
            if report.complete {
                return Ok(report.set);
            }
        }
        return Err(
            "oracle found no completeness certificate up to radius 8; pass oracle:RADIUS"
                .to_string(),
        );
    }
    if let Some(rest) = spec.strip_prefix("oracle:") {
        let radius: i64 = rest
            .parse()
            .map_err(|_| format!("oracle radius must be an integer, got {rest:?}"))?;
        let report = graver_oracle(matrix, radius).map_err(|e| e.to_string())?;
        if !report.complete {
            return Err(format!(
                "oracle radius {radius} did not certify completeness; raise the radius"
            ));
        }
        return Ok(report.set);
    }
    if let Some(path) = spec.strip_prefix("custom:") {
        let text = fs::read_to_string(path).map_err(|e| format!("reading {path}: {e}"))?;
        let vectors = moves_from_csv(&text).map_err(|e| format!("parsing {path}: {e}"))?;
        return MoveSet::new(matrix.clone(), MoveKind::Custom, vectors)
            .map_err(|e| e.to_string());
    }
    Err(format!(
        "unknown move set {spec:?}; expected graver-ak, groebner-lex-ak, oracle[:RADIUS], or custom:PATH"
    ))
}

/// Flag, then environment variable, then the subcommand's default.
fn resolve_budget(flag: Option<usize>, default: usize) -> Result<usize, String> {
    let value = match flag {
        Some(v) => v,
        None => match std::env::var(BUDGET_ENV) {
            Ok(s) => s
                .parse()
                .map_err(|_| format!("{BUDGET_ENV} must be a positive integer, got {s:?}"))?,
            Err(_) => default,
        },
    };
    if value == 0 {
        return Err("budget must be positive".to_string());
    }
    Ok(value)
}

/// Inclusive `k1..k2` range, or a single `k`.
fn parse_k_range(s: &str, max: usize) -> Result<(usize, usize), String> {
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (
            a.parse::<usize>().map_err(|_| format!("bad range start {a:?}"))?,
            b.parse::<usize>().map_err(|_| format!("bad range end {b:?}"))?,
        ),
        None => {
            let k = s.parse::<usize>().map_err(|_| format!("bad k {s:?}"))?;
            (k, k)
        }
    };
    if lo == 0 || lo > hi {
        return Err(format!("k range must satisfy 1 <= k1 <= k2, got {s:?}"));
    }
    if hi > max {
        return Err(format!("k = {hi} is beyond this suite's supported maximum {max}"));
    }
    Ok((lo, hi))
}

fn emit(payload: &str, output: Option<&Path>) -> Result<(), String> {
    match output {
        Some(path) => fs::write(path, payload)
            .map_err(|e| format!("writing {}: {e}", path.display())),
        None => {
            print!("{payload}");
            Ok(())
        }
    }
}

fn pretty<T: serde::Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| e.to_string())
}

// ==== fiber ===========================================================

fn cmd_fiber(args: FiberArgs) -> Result<u8, String> {
    let (matrix, _) = load_matrix(&args.matrix)?;
    let b = parse_int_vec(&args.rhs).map_err(|e| e.to_string())?;
    let budget = resolve_budget(args.budget, DEFAULT_POINT_BUDGET)?;
    let fiber =
        enumerate_fiber_with_budget(&matrix, &b, budget).map_err(|e| e.to_string())?;
    let payload = if args.json {
        let mut s = fiber_to_json(&fiber);
        s.push('\n');
        s
    } else {
        fiber_to_csv(&fiber)
    };
    emit(&payload, args.output.as_deref())?;
    Ok(if fiber.is_empty() { EXIT_EMPTY } else { 0 })
}

// ==== connectivity ====================================================

fn cmd_connectivity(args: ConnectivityArgs) -> Result<u8, String> {
    let (matrix, family_k) = load_matrix(&args.matrix)?;
    let b = parse_int_vec(&args.rhs).map_err(|e| e.to_string())?;
    let budget = resolve_budget(args.budget, DEFAULT_POINT_BUDGET)?;
    let fiber =
        enumerate_fiber_with_budget(&matrix, &b, budget).map_err(|e| e.to_string())?;
    if fiber.is_empty() {
        eprintln!("fiber is empty");
        return Ok(EXIT_EMPTY);
    }
    let moves = load_moves(&args.moves, &matrix, family_k)?;
    let fg = build_graph(&fiber, &moves).map_err(|e| e.to_string())?;
    let report = ConnectivityReport::compute(fg.graph()).map_err(|e| e.to_string())?;
    if let Some(path) = &args.dot {
        fs::write(path, fiber_graph_to_dot(&fg))
            .map_err(|e| format!("writing {}: {e}", path.display()))?;
    }
    if let Some(path) = &args.edges {
        fs::write(path, graph_to_edge_csv(fg.graph()))
            .map_err(|e| format!("writing {}: {e}", path.display()))?;
    }
    let payload = if args.json {
        pretty(&report)?
    } else {
        human_connectivity(&report)
    };
    emit(&payload, args.output.as_deref())?;
    Ok(0)
}

fn human_connectivity(r: &ConnectivityReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("vertices: {}\n", r.vertex_count));
    out.push_str(&format!("edges: {}\n", r.edge_count));
    out.push_str(&format!("min degree: {} (vertex {})\n", r.min_degree, r.min_degree_vertex));
    out.push_str(&format!("edge connectivity: {}\n", r.edge_connectivity));
    out.push_str(&format!("vertex connectivity: {}\n", r.vertex_connectivity));
    out.push_str(&format!("components: {}\n", r.components));
    if !r.min_cut_witness.is_empty() {
        let cut: Vec<String> = r
            .min_cut_witness
            .iter()
            .map(|(u, v)| format!("{u}-{v}"))
            .collect();
        out.push_str(&format!("min cut: {}\n", cut.join(" ")));
    }
    if !r.separator_witness.is_empty() {
        let sep: Vec<String> = r.separator_witness.iter().map(usize::to_string).collect();
        out.push_str(&format!("separator: {}\n", sep.join(" ")));
    }
    out
}

// ==== verify ==========================================================

#[derive(serde::Serialize)]
struct Check {
    name: String,
    passed: bool,
    detail: String,
}

fn finish_suite(suite: &str, checks: Vec<Check>, as_json: bool) -> Result<u8, String> {
    let all = checks.iter().all(|c| c.passed);
    if as_json {
        let doc = json!({ "suite": suite, "passed": all, "checks": checks });
        let payload = serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())?;
        println!("{payload}");
    } else {
        for c in &checks {
            let status = if c.passed { "pass" } else { "FAIL" };
            if c.detail.is_empty() {
                println!("{}: {status}", c.name);
            } else {
                println!("{}: {status} ({})", c.name, c.detail);
            }
        }
        println!("suite {suite}: {}", if all { "pass" } else { "FAIL" });
    }
    Ok(if all { 0 } else { EXIT_VERIFY_FAILED })
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, String> {
    match args.suite {
        VerifySuite::Conj1 { k, json } => {
            let (lo, hi) = parse_k_range(&k, 8)?;
            let mut checks = Vec::new();
            for k in lo..=hi {
                let r = verify_gap_witness(k).map_err(|e| e.to_string())?;
                checks.push(Check {
                    name: format!("gap witness k={k}"),
                    passed: r.passed,
                    detail: format!(
                        "delta={} lambda={} kappa={} cross_edges={}",
                        r.min_degree,
                        r.edge_connectivity,
                        r.vertex_connectivity,
                        r.cross_edge_count
                    ),
                });
            }
            finish_suite("conj1", checks, json)
        }
        VerifySuite::GraverTheorem { k, samples, seed, json } => {
            let (lo, hi) = parse_k_range(&k, 4)?;
            let mut checks = Vec::new();
            for k in lo..=hi {
                for b in sample_rhs(k, seed, samples) {
                    let r = verify_degree_match(k, &b).map_err(|e| e.to_string())?;
                    let b_text: Vec<String> = b.iter().map(i64::to_string).collect();
                    checks.push(Check {
                        name: format!("lambda=delta k={k} b=({})", b_text.join(",")),
                        passed: r.passed,
                        detail: format!(
                            "delta={} lambda={} formula={}",
                            r.min_degree, r.edge_connectivity, r.formula_value
                        ),
                    });
                }
            }
            finish_suite("graver-theorem", checks, json)
        }
        VerifySuite::GraverBasis { k, json } => {
            let (lo, hi) = parse_k_range(&k, 3)?;
            let mut checks = Vec::new();
            for k in lo..=hi {
                let family = graver_ak(k).map_err(|e| e.to_string())?;
                let oracle =
                    graver_oracle(build_ak(k).matrix(), 2).map_err(|e| e.to_string())?;
                let passed = oracle.complete && family.signed_set() == oracle.set.signed_set();
                checks.push(Check {
                    name: format!("closed form equals oracle k={k}"),
                    passed,
                    detail: format!(
                        "family={} oracle={} certificate={}",
                        family.signed_count(),
                        oracle.set.signed_count(),
                        oracle.complete
                    ),
                });
            }
            finish_suite("graver-basis", checks, json)
        }
        VerifySuite::Universality { k, floor, json } => {
            let (lo, hi) = parse_k_range(&k, 4)?;
            let mut checks = Vec::new();
            for k in lo..=hi {
                let inst = build_ak(k);
                let moves = groebner_lex_ak(k).map_err(|e| e.to_string())?;
                let mut b = vec![0i64; 2 * k + 1];
                b[2 * k] = 1;
                let lift = universality_lift(inst.matrix(), &moves, &b, floor)
                    .map_err(|e| e.to_string())?;
                let base =
                    ConnectivityReport::compute(lift.base.graph()).map_err(|e| e.to_string())?;
                let lifted = ConnectivityReport::compute(lift.lifted.graph())
                    .map_err(|e| e.to_string())?;
                let floor_ok = lift.rhs.iter().all(|&x| x >= floor);
                let invariants_ok = base.min_degree == lifted.min_degree
                    && base.edge_connectivity == lifted.edge_connectivity
                    && base.vertex_connectivity == lifted.vertex_connectivity;
                checks.push(Check {
                    name: format!("lift is isomorphism k={k}"),
                    passed: lift.is_isomorphism,
                    detail: format!(
                        "vertices={} n_tilde={}",
                        lift.base.vertex_count(),
                        lift.n_tilde
                    ),
                });
                checks.push(Check {
                    name: format!("lifted rhs floor k={k}"),
                    passed: floor_ok,
                    detail: format!("floor={floor}"),
                });
                checks.push(Check {
                    name: format!("invariants preserved k={k}"),
                    passed: invariants_ok,
                    detail: format!(
                        "delta={} lambda={} kappa={}",
                        lifted.min_degree,
                        lifted.edge_connectivity,
                        lifted.vertex_connectivity
                    ),
                });
            }
            finish_suite("universality", checks, json)
        }
    }
}

// ==== chain ===========================================================

fn cmd_chain(args: ChainArgs) -> Result<u8, String> {
    if let Some(ChainCommand::Experiment(exp)) = args.experiment {
        return cmd_experiment(exp);
    }
    let matrix_spec = args
        .matrix
        .ok_or("chain requires --matrix, --rhs and --moves (or an experiment subcommand)")?;
    let rhs_spec = args.rhs.ok_or("chain requires --rhs")?;
    let moves_spec = args.moves.ok_or("chain requires --moves")?;
    let (matrix, family_k) = load_matrix(&matrix_spec)?;
    let b = parse_int_vec(&rhs_spec).map_err(|e| e.to_string())?;
    let budget = resolve_budget(args.budget, DEFAULT_POINT_BUDGET)?;
    let fiber =
        enumerate_fiber_with_budget(&matrix, &b, budget).map_err(|e| e.to_string())?;
    if fiber.is_empty() {
        eprintln!("fiber is empty");
        return Ok(EXIT_EMPTY);
    }
    let moves = load_moves(&moves_spec, &matrix, family_k)?;
    let fg = build_graph(&fiber, &moves).map_err(|e| e.to_string())?;
    if !fg.graph().is_connected() {
        eprintln!(
            "not applicable: the fiber graph is disconnected under this move set, \
             so the walk is not irreducible"
        );
        return Ok(EXIT_EMPTY);
    }
    let epsilons = match &args.eps {
        Some(list) => list
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| t.trim().parse::<f64>().map_err(|_| format!("bad epsilon {t:?}")))
            .collect::<Result<Vec<f64>, String>>()?,
        None if fg.vertex_count() <= DENSE_EIGEN_CUTOFF => vec![0.25],
        None => Vec::new(),
    };
    let p = metropolis_matrix(fg.graph()).map_err(|e| e.to_string())?;
    let report = mixing_times(&p, &epsilons).map_err(|e| e.to_string())?;
    let payload = if args.json {
        pretty(&report)?
    } else {
        let mut out = String::new();
        out.push_str(&format!("states: {}\n", report.size));
        out.push_str(&format!("edges: {}\n", fg.edge_count()));
        out.push_str(&format!("slem: {}\n", report.slem));
        out.push_str(&format!("relaxation time (1/(1 - slem)): {}\n", report.relaxation_time));
        out.push_str(&format!("mixing time scale (-1/ln slem): {}\n", report.alt_time));
        for (eps, steps) in &report.tv_mixing {
            out.push_str(&format!("tv mixing at eps={eps}: {steps} steps\n"));
        }
        out.push_str(&format!("definition: {}\n", report.definition_used));
        out
    };
    emit(&payload, args.output.as_deref())?;
    Ok(0)
}

fn cmd_experiment(args: ExperimentArgs) -> Result<u8, String> {
    let (table, json_flag, output) = match args.which {
        ExperimentKind::Fig4 { kmax, budget, json, output } => {
            if kmax == 0 || kmax > 12 {
                return Err(format!("kmax must be in 1..=12, got {kmax}"));
            }
            let cap = resolve_budget(budget, DEFAULT_SWEEP_POINT_CAP)?;
            (sweep_by_k(kmax, cap).map_err(|e| e.to_string())?, json, output)
        }
        ExperimentKind::Fig5 { lmax, budget, json, output } => {
            if !(1..=8).contains(&lmax) {
                return Err(format!("lmax must be in 1..=8, got {lmax}"));
            }
            let cap = resolve_budget(budget, DEFAULT_SWEEP_POINT_CAP)?;
            (sweep_by_scale(lmax, cap).map_err(|e| e.to_string())?, json, output)
        }
    };
    let payload = if json_flag { pretty(&table)? } else { table.to_csv() };
    emit(&payload, output.as_deref())?;
    Ok(0)
}

// ==== ak ==============================================================

fn cmd_ak(args: AkArgs) -> Result<u8, String> {
    match args.which {
        AkCommand::Matrix { k, bk, json, output } => {
            if k == 0 || k > 1000 {
                return Err(format!("family index must be in 1..=1000, got {k}"));
            }
            let m = if bk { build_bk(k) } else { build_ak(k).matrix().clone() };
            let payload = if json {
                let mut s = matrix_to_json(&m);
                s.push('\n');
                s
            } else {
                let mut out = String::new();
                for r in 0..m.rows() {
                    let row: Vec<String> = m.row(r).iter().map(i64::to_string).collect();
                    out.push_str(&row.join(" "));
                    out.push('\n');
                }
                out
            };
            emit(&payload, output.as_deref())?;
            Ok(0)
        }
        AkCommand::Decompose { rhs, json, output, budget } => {
            let b = parse_int_vec(&rhs).map_err(|e| e.to_string())?;
            let d = decompose_rhs(&b).map_err(|e| e.to_string())?;
            let mut sizes: Vec<(i64, u64)> = Vec::new();
            let mut total: u64 = 0;
            if !d.is_empty() {
                for s in d.lower..=d.upper {
                    let size = level_size(s, &d).map_err(|e| e.to_string())?;
                    sizes.push((s, u64::try_from(size).map_err(|_| "level size overflow")?));
                }
                total = u64::try_from(total_size(&d).map_err(|e| e.to_string())?)
                    .map_err(|_| "fiber size overflow")?;
            }
            if let Some(path) = &output {
                if d.is_empty() {
                    return Err("cannot export levels of an empty fiber".to_string());
                }
                let cap = resolve_budget(budget, DEFAULT_POINT_BUDGET)?;
                let lg = level_graphs(&d, cap).map_err(|e| e.to_string())?;
                fs::write(path, levels_to_csv(&lg))
                    .map_err(|e| format!("writing {}: {e}", path.display()))?;
            }
            if json {
                let doc = json!({
                    "k": d.k,
                    "w1": d.w1,
                    "w2": d.w2,
                    "c": d.c,
                    "lower": d.lower,
                    "upper": d.upper,
                    "empty": d.is_empty(),
                    "levels": sizes.iter().map(|(s, n)| json!({"s": s, "size": n})).collect::<Vec<_>>(),
                    "total": total,
                });
                println!("{}", serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())?);
            } else {
                let fmt_vec = |v: &[i64]| {
                    v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
                };
                println!("k: {}", d.k);
                println!("w1: {}", fmt_vec(&d.w1));
                println!("w2: {}", fmt_vec(&d.w2));
                println!("c: {}", d.c);
                if d.is_empty() {
                    println!("levels: none (lower {} > upper {})", d.lower, d.upper);
                    println!("total: 0");
                } else {
                    println!("levels: {}..{}", d.lower, d.upper);
                    for (s, n) in &sizes {
                        println!("level {s}: {n} points");
                    }
                    println!("total: {total}");
                }
            }
            Ok(if d.is_empty() { EXIT_EMPTY } else { 0 })
        }
        AkCommand::MinDegree { rhs, json } => {
            let b = parse_int_vec(&rhs).map_err(|e| e.to_string())?;
            let d = decompose_rhs(&b).map_err(|e| e.to_string())?;
            if d.is_empty() {
                eprintln!("fiber is empty; the minimum degree is undefined");
                return Ok(EXIT_EMPTY);
            }
            let delta = min_degree_formula(&d).map_err(|e| e.to_string())?;
            if json {
                let doc = json!({
                    "k": d.k,
                    "lower": d.lower,
                    "upper": d.upper,
                    "min_degree": delta,
                });
                println!("{}", serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())?);
            } else {
                println!("levels: {}..{}", d.lower, d.upper);
                println!("min degree: {delta}");
            }
            Ok(0)
        }
        AkCommand::Sample { k, seed, count, json } => {
            if k == 0 || k > 6 {
                return Err(format!("sampler supports k in 1..=6, got {k}"));
            }
            let samples = sample_rhs(k, seed, count);
            if json {
                let doc = json!({ "k": k, "seed": seed, "count": count, "samples": samples });
                println!("{}", serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())?);
            } else {
                for b in &samples {
                    let row: Vec<String> = b.iter().map(i64::to_string).collect();
                    println!("{}", row.join(","));
                }
            }
            Ok(0)
        }
    }
}
