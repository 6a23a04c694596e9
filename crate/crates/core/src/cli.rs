//! Command-line front end. Every command prints one JSON document.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

use crate::complex::{HasseDiagram, SimplicialComplex};
use crate::error::{ComplexError, FieldError, FormatError, MatchingError, SeparationError, SolverError};
use crate::homology::{best_betti_bounds, betti_numbers, euler_characteristic, FieldSpec};
use crate::io::{self, SCHEMA_VERSION};
use crate::matching::{check_morse_matching, critical_report, gamma_is_connected, matching_to_function, MorseMatching};
use crate::separation::TransformedGraph;
use crate::solver::{self, BranchingRule, SolveStatus, SolverConfig};
use crate::{heuristic, instances};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Complex { path: String, source: ComplexError },
    #[error("unknown bundled instance '{0}'")]
    UnknownInstance(String),
    #[error("give either an input file or --instance")]
    NoInput,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Separation(#[from] SeparationError),
    #[error("{0}")]
    Usage(String),
}

#[derive(Debug, Parser)]
#[command(name = "morsematch", version, about = "Maximum Morse matchings of simplicial complexes")]
struct Cli {
    /// Write the JSON document here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Find a maximum Morse matching by branch-and-cut.
    Solve(SolveArgs),
    /// Betti numbers over the given fields and the Euler characteristic.
    Betti(BettiArgs),
    /// Greedy matching plus augmentation along unique paths.
    Heuristic(HeuristicArgs),
    /// Validate a matching file against a complex.
    Check(CheckArgs),
    /// Face and arc counts.
    Info(InputArgs),
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Facet-list file: one facet per line, `#` starts a comment line.
    input: Option<PathBuf>,
    /// Use a bundled instance (projective, dunce, simplexK, sphereD).
    #[arg(long, conflicts_with = "input")]
    instance: Option<String>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Comma separated fields for the Betti bounds, e.g. `q,gf2,gf3`.
    #[arg(long, default_value = "q,gf2")]
    fields: String,
    /// Cut rounds per node.
    #[arg(long, default_value_t = 7)]
    rounds: usize,
    /// Run the heuristic at depths divisible by this.
    #[arg(long, default_value_t = 10)]
    heuristic_frequency: usize,
    /// Cuts per level and round.
    #[arg(long, default_value_t = crate::separation::DEFAULT_MAX_CUTS)]
    max_cuts: usize,
    /// most-fractional or pseudocost.
    #[arg(long, default_value = "most-fractional")]
    branching: BranchingRule,
    /// Add Gomory mixed-integer cuts at the root.
    #[arg(long)]
    gomory: bool,
    /// Check cycles only at integral LP points.
    #[arg(long)]
    no_separation: bool,
    /// Separate cycle inequalities only.
    #[arg(long)]
    no_free_face_cuts: bool,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long)]
    node_limit: Option<usize>,
    /// Solve connected components separately.
    #[arg(long)]
    split_components: bool,
    /// File with one weight per arc (whitespace separated).
    #[arg(long)]
    weights: Option<PathBuf>,
    /// Recorded in the output; the solver itself is deterministic.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the initial LP in LP text format.
    #[arg(long)]
    dump_lp: Option<PathBuf>,
    /// Write the transformed graphs of every level at the root LP point.
    #[arg(long)]
    dump_transformed: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BettiArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value = "q,gf2")]
    fields: String,
}

#[derive(Debug, Args)]
struct HeuristicArgs {
    #[command(flatten)]
    input: InputArgs,
    /// JSON array with one value per arc to guide the greedy scan.
    #[arg(long, conflicts_with = "root_lp")]
    point: Option<PathBuf>,
    /// Guide the greedy scan by the root LP point.
    #[arg(long)]
    root_lp: bool,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Matching JSON, or a `solve` result document.
    #[arg(long, short)]
    matching: PathBuf,
    /// Also print the discrete Morse function of a valid matching.
    #[arg(long)]
    function: bool,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn load(args: &InputArgs) -> Result<SimplicialComplex, CliError> {
    match (&args.input, &args.instance) {
        (Some(path), _) => SimplicialComplex::parse(&read(path)?)
            .map_err(|source| CliError::Complex { path: path.display().to_string(), source }),
        (None, Some(name)) => instances::by_name(name).ok_or_else(|| CliError::UnknownInstance(name.clone())),
        (None, None) => Err(CliError::NoInput),
    }
}

fn parse_numbers(text: &str) -> Result<Vec<f64>, CliError> {
    if text.trim_start().starts_with('[') {
        return serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()).into());
    }
    text.split_whitespace()
        .map(|t| t.parse::<f64>().map_err(|_| CliError::Usage(format!("'{t}' is not a number"))))
        .collect()
}

fn envelope(command: &str, body: Value) -> Value {
    let mut doc = json!({ "schema_version": SCHEMA_VERSION, "command": command });
    if let (Value::Object(out), Value::Object(add)) = (&mut doc, body) {
        out.extend(add);
    }
    doc
}

fn solver_config(args: &SolveArgs, arcs: usize) -> Result<SolverConfig, CliError> {
    let mut config = if args.no_separation { SolverConfig::no_separation() } else { SolverConfig::default() };
    config.fields = FieldSpec::parse_list(&args.fields)?;
    config.separation_rounds = args.rounds;
    config.heuristic_frequency = args.heuristic_frequency;
    config.max_cuts = args.max_cuts;
    config.branching = args.branching;
    config.gomory = args.gomory;
    config.free_face_cuts &= !args.no_free_face_cuts;
    if let Some(t) = args.time_limit {
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::Usage("--time-limit must be positive".into()));
        }
        config.time_limit = Some(Duration::from_secs_f64(t));
    }
    config.node_limit = args.node_limit;
    config.split_components = args.split_components;
    if let Some(path) = &args.weights {
        let w = parse_numbers(&read(path)?)?;
        if w.len() != arcs {
            return Err(SolverError::Weights { expected: arcs, got: w.len() }.into());
        }
        config.weights = Some(w);
    }
    config.validate()?;
    Ok(config)
}

fn cmd_solve(args: &SolveArgs) -> Result<(Value, i32), CliError> {
    let complex = load(&args.input)?;
    let h = HasseDiagram::new(&complex);
    let config = solver_config(args, h.num_arcs())?;
    if let Some(path) = &args.dump_lp {
        let betti = best_betti_bounds(&complex, &config.fields)?;
        let weights = config.weights.clone().unwrap_or_else(|| vec![1.0; h.num_arcs()]);
        write(path, &solver::build_relaxation(&h, &betti, weights)?.to_lp_format())?;
    }
    if let Some(path) = &args.dump_transformed {
        let root = solver::root_relaxation(&complex, &config)?;
        let x: Vec<f64> = root.values.iter().map(|v| v.clamp(0.0, 1.0)).collect();
        let mut text = String::new();
        for level in 0..h.num_levels() {
            text.push_str(&TransformedGraph::build(&h, level, &x)?.dump());
        }
        write(path, &text)?;
    }
    let result = solver::solve(&complex, &config)?;
    let mut doc = io::result_json(&complex, &result, &config);
    doc["seed"] = json!(args.seed);
    let code = match result.status {
        SolveStatus::Optimal => 0,
        _ => 2,
    };
    Ok((doc, code))
}

fn cmd_betti(args: &BettiArgs) -> Result<(Value, i32), CliError> {
    let complex = load(&args.input)?;
    let fields = FieldSpec::parse_list(&args.fields)?;
    let vectors: Vec<_> = fields.iter().map(|&f| betti_numbers(&complex, f)).collect();
    let bounds = best_betti_bounds(&complex, &fields)?;
    let body = json!({
        "fields": io::betti_json(&vectors),
        "bounds": bounds,
        "bound_total": bounds.iter().sum::<usize>(),
        "euler_characteristic": euler_characteristic(&complex),
    });
    Ok((envelope("betti", body), 0))
}

fn cmd_heuristic(args: &HeuristicArgs) -> Result<(Value, i32), CliError> {
    let complex = load(&args.input)?;
    let h = HasseDiagram::new(&complex);
    let x = if let Some(path) = &args.point {
        let x = parse_numbers(&read(path)?)?;
        if x.len() != h.num_arcs() {
            return Err(CliError::Usage(format!("point has {} entries, expected {}", x.len(), h.num_arcs())));
        }
        x
    } else if args.root_lp {
        let config = SolverConfig { split_components: true, ..SolverConfig::default() };
        solver::root_relaxation(&complex, &config)?.values
    } else {
        vec![0.0; h.num_arcs()]
    };
    let greedy = heuristic::greedy_from_lp(&h, &x);
    let improved = heuristic::improve(&h, &greedy);
    let report = critical_report(&h, &improved);
    let body = json!({
        "greedy_c": critical_report(&h, &greedy).total,
        "report": io::report_json(&complex, &report),
        "matching": io::matching_json(&complex, &h, &improved),
    });
    Ok((envelope("heuristic", body), 0))
}

fn cmd_check(args: &CheckArgs) -> Result<(Value, i32), CliError> {
    let complex = load(&args.input)?;
    let h = HasseDiagram::new(&complex);
    let arcs = io::parse_matching(&complex, &h, &read(&args.matching)?)?;
    match check_morse_matching(&h, &arcs) {
        Ok(()) => {
            let m = MorseMatching::new(&h, arcs).expect("checked");
            let report = critical_report(&h, &m);
            let mut body = json!({
                "valid": true,
                "report": io::report_json(&complex, &report),
                "gamma_connected": gamma_is_connected(&h, &m),
            });
            if args.function {
                let f = matching_to_function(&h, &m).map_err(|e| CliError::Usage(e.to_string()))?;
                body["function"] = io::function_json(&complex, &f);
            }
            Ok((envelope("check", body), 0))
        }
        Err(err) => {
            let mut body = json!({ "valid": false, "error": err.to_string() });
            match &err {
                MatchingError::Cycle { level, faces, .. } => {
                    body["witness"] = json!({
                        "level": level,
                        "faces": faces.iter().map(|&f| io::face_json(&complex, f)).collect::<Vec<_>>(),
                    });
                }
                MatchingError::OverMatched { face, .. } => {
                    body["witness"] = json!({ "face": io::face_json(&complex, *face) });
                }
                _ => {}
            }
            Ok((envelope("check", body), 1))
        }
    }
}

fn cmd_info(args: &InputArgs) -> Result<(Value, i32), CliError> {
    let complex = load(args)?;
    let h = HasseDiagram::new(&complex);
    let levels: Vec<Value> = (0..h.num_levels())
        .map(|i| {
            json!({
                "level": i,
                "lower_faces": complex.f(i),
                "upper_faces": complex.f(i + 1),
                "arcs": h.level_arcs(i).len(),
            })
        })
        .collect();
    let body = json!({
        "n": complex.num_faces(),
        "m": h.num_arcs(),
        "d": complex.dim(),
        "f_vector": complex.f_vector(),
        "connected": complex.is_connected(),
        "components": complex.components().len(),
        "facets": complex.facets().len(),
        "euler_characteristic": euler_characteristic(&complex),
        "levels": levels,
    });
    Ok((envelope("info", body), 0))
}

fn emit(output: Option<&Path>, doc: &Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(doc).expect("serializable") + "\n";
    match output {
        Some(path) => write(path, &text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .map_err(|source| CliError::Io { path: PathBuf::from("<stdout>"), source })
        }
    }
}

/// Runs the command line `argv` (program name first) and returns the exit
/// code: 0 on success, 2 when a limit stopped the search, 1 on errors.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Betti(a) => cmd_betti(a),
        Command::Heuristic(a) => cmd_heuristic(a),
        Command::Check(a) => cmd_check(a),
        Command::Info(a) => cmd_info(a),
    };
    let result = outcome.and_then(|(doc, code)| emit(cli.output.as_deref(), &doc).map(|()| code));
    match result {
        Ok(code) => code,
        Err(e) => {
            let doc = json!({ "schema_version": SCHEMA_VERSION, "error": e.to_string() });
            eprintln!("error: {e}");
            let _ = emit(None, &doc);
            1
        }
    }
}
