//! The `acg` command line.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use acg_core::branch::{Solution, SolveStatus, SolverConfig};
use acg_core::clock::StdClock;
use acg_core::graph::Graph;
use acg_core::instgen::{self, FeasibleParams, Instance, InstgenError};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::format::{read_instance, read_solution, status_name, write_instance, write_solution};
use crate::run::{default_workers, millis, run_algo, Algo};
use crate::topology::parse_topology;

pub const EXIT_OPTIMAL: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_TIME_LIMIT: i32 = 3;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_PARSE: i32 = 65;
pub const EXIT_INTERNAL: i32 = 70;

/// Tolerance when comparing a reported cost with the recomputed one.
const COST_TOL: f64 = 1e-6;
const GENERATE_ATTEMPTS: u64 = 1000;

#[derive(Parser)]
#[command(name = "acg", version, about = "Constrained shortest paths by atomic column generation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance and write the solution as JSON.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "acg")]
        algo: Algo,
        #[command(flatten)]
        solver: SolverArgs,
        /// Output file (stdout if omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Generate a random instance.
    Generate(GenerateArgs),
    /// Re-evaluate a solution against its instance.
    Check { instance: PathBuf, solution: PathBuf },
    /// Run several algorithms over every instance in a directory.
    Bench {
        dir: PathBuf,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "acg,multipulse")]
        algos: Vec<Algo>,
        #[command(flatten)]
        solver: SolverArgs,
        /// CSV output file (stdout if omitted).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SolverArgs {
    /// Time limit of each column generation call, in ms.
    #[arg(long, default_value_t = 500)]
    t_acg: u64,
    /// Time limit of each atomic call, in ms.
    #[arg(long, default_value_t = 60)]
    t_atomic: u64,
    /// Fraction of allowed arcs below which branch nodes run column generation.
    #[arg(long, default_value_t = 0.2)]
    gamma: f64,
    /// Global time limit, in ms.
    #[arg(long, default_value_t = 120_000)]
    limit: u64,
    /// Worker threads for `acg` (default: available parallelism).
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report wall_ms as 0, for byte-reproducible output.
    #[arg(long)]
    no_wall_time: bool,
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            t_acg: millis(self.t_acg),
            t_atomic: millis(self.t_atomic),
            gamma_ratio: self.gamma,
            global_limit: millis(self.limit),
            workers: self.workers.unwrap_or_else(default_workers),
            seed: self.seed,
            ..SolverConfig::default()
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Generator {
    Grid,
    File,
}

#[derive(Args)]
struct GenerateArgs {
    generator: Generator,
    #[arg(long, required_if_eq("generator", "grid"))]
    width: Option<usize>,
    #[arg(long, required_if_eq("generator", "grid"))]
    height: Option<usize>,
    /// Topology file for the `file` generator.
    #[arg(long, required_if_eq("generator", "file"))]
    topology: Option<PathBuf>,
    #[arg(long)]
    path_size: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Tighten one bound so that no path satisfies every constraint.
    #[arg(long)]
    unfeasible: bool,
    /// Resources drawn per arc (at least uppers + ranges).
    #[arg(long, default_value_t = 6)]
    resources: usize,
    #[arg(long, default_value_t = 3)]
    uppers: usize,
    #[arg(long, default_value_t = 3)]
    ranges: usize,
    /// Omit the node-inclusion constraint.
    #[arg(long)]
    no_include: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Parse(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Parse(_) => EXIT_PARSE,
            Failure::Internal(_) => EXIT_INTERNAL,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Parse(m) | Failure::Internal(m) => m,
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    read_instance(&read_text(path)?).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Internal(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn solve_one(inst: &Instance, algo: Algo, args: &SolverArgs) -> Result<Solution, Failure> {
    let clock = StdClock::new();
    let mut sol = run_algo(inst, algo, &args.config(), &clock).map_err(|e| Failure::Internal(e.to_string()))?;
    if args.no_wall_time {
        sol.stats.wall_ms = 0;
    }
    Ok(sol)
}

fn solve(instance: &Path, algo: Algo, args: &SolverArgs, output: Option<&Path>) -> Result<i32, Failure> {
    let inst = load_instance(instance)?;
    let sol = solve_one(&inst, algo, args)?;
    emit(output, &write_solution(&sol, &inst.graph))?;
    eprintln!("{} cost {} bound {}", status_name(sol.status), sol.cost, sol.lower_bound);
    Ok(match sol.status {
        SolveStatus::Optimal => EXIT_OPTIMAL,
        SolveStatus::Infeasible => EXIT_INFEASIBLE,
        SolveStatus::TimeLimit => EXIT_TIME_LIMIT,
    })
}

fn generate(a: &GenerateArgs) -> Result<i32, Failure> {
    let internal = |e: InstgenError| Failure::Internal(e.to_string());
    let g: Graph = match a.generator {
        Generator::Grid => {
            let (w, h) = (a.width.unwrap_or(0), a.height.unwrap_or(0));
            instgen::grid(w, h, a.resources, a.seed).map_err(|e| Failure::Usage(e.to_string()))?
        }
        Generator::File => {
            let path = a.topology.as_deref().expect("required by clap");
            let topo = parse_topology(&read_text(path)?).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
            topo.to_graph(a.resources, a.seed)
        }
    };
    let params = FeasibleParams { path_size: a.path_size, n_upper: a.uppers, n_range: a.ranges, include: !a.no_include };
    if a.uppers + a.ranges > a.resources {
        return Err(Failure::Usage(format!("{} constraints need at least as many resources", a.uppers + a.ranges)));
    }
    let inst = if a.unfeasible {
        instgen::gen_unfeasible_on(&g, params, a.seed).map_err(internal)?
    } else {
        let mut found = None;
        for k in 0..GENERATE_ATTEMPTS {
            match instgen::gen_feasible(&g, params, instgen::sub_seed(a.seed, k)) {
                Ok((mut inst, _)) => {
                    inst.meta.seed = a.seed;
                    found = Some(inst);
                    break;
                }
                Err(InstgenError::WalkTooShort(_)) => continue,
                Err(InstgenError::BadPathSize) => return Err(Failure::Usage("path size must be at least 1".into())),
                Err(e) => return Err(internal(e)),
            }
        }
        found.ok_or(Failure::Internal(InstgenError::GaveUp(GENERATE_ATTEMPTS).to_string()))?
    };
    emit(a.output.as_deref(), &write_instance(&inst))?;
    Ok(0)
}

fn check(instance: &Path, solution: &Path) -> Result<i32, Failure> {
    let inst = load_instance(instance)?;
    let sol = read_solution(&read_text(solution)?).map_err(|e| Failure::Parse(format!("{}: {e}", solution.display())))?;
    if sol.path.is_empty() {
        eprintln!("solution has no path ({})", status_name(sol.status));
        return Ok(EXIT_CHECK_FAILED);
    }
    if let Some(&a) = sol.path.arcs.iter().find(|&&a| a >= inst.graph.arc_count()) {
        eprintln!("arc {a} does not exist");
        return Ok(EXIT_CHECK_FAILED);
    }
    if !inst.graph.is_st_path(&sol.path) {
        eprintln!("not an elementary source-target path");
        return Ok(EXIT_CHECK_FAILED);
    }
    if let Some(i) = inst.constraints.iter().position(|c| !c.check(&inst.graph, &sol.path)) {
        eprintln!("constraint {i} violated");
        return Ok(EXIT_CHECK_FAILED);
    }
    let cost = inst.graph.path_cost(&sol.path);
    if (cost - sol.cost).abs() > COST_TOL {
        eprintln!("reported cost {} but path costs {cost}", sol.cost);
        return Ok(EXIT_CHECK_FAILED);
    }
    eprintln!("feasible, cost {cost}");
    Ok(0)
}

fn number(x: f64) -> String {
    if x.is_finite() {
        x.to_string()
    } else {
        String::new()
    }
}

fn bench(dir: &Path, algos: &[Algo], args: &SolverArgs, csv_out: Option<&Path>) -> Result<i32, Failure> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Failure::Parse(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let mut w = csv::Writer::from_writer(Vec::new());
    let internal = |e: csv::Error| Failure::Internal(e.to_string());
    w.write_record(["instance", "algo", "status", "cost", "bound", "wall_ms", "columns", "nodes_expanded"])
        .map_err(internal)?;
    for file in &files {
        let inst = load_instance(file)?;
        let name = file.file_stem().unwrap_or_default().to_string_lossy().into_owned();
        for &algo in algos {
            let sol = solve_one(&inst, algo, args)?;
            w.write_record([
                name.clone(),
                algo.name().to_string(),
                status_name(sol.status).to_string(),
                number(sol.cost),
                number(sol.lower_bound),
                sol.stats.wall_ms.to_string(),
                sol.stats.columns.to_string(),
                sol.stats.nodes_expanded.to_string(),
            ])
            .map_err(internal)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Failure::Internal(e.to_string()))?;
    emit(csv_out, &String::from_utf8(bytes).expect("csv of utf-8 fields"))?;
    Ok(0)
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    let out = match &cli.command {
        Command::Solve { instance, algo, solver, output } => solve(instance, *algo, solver, output.as_deref()),
        Command::Generate(a) => generate(a),
        Command::Check { instance, solution } => check(instance, solution),
        Command::Bench { dir, algos, solver, csv } => bench(dir, algos, solver, csv.as_deref()),
    };
    match out {
        Ok(code) => code,
        Err(f) => {
            eprintln!("acg: {}", f.message());
            f.code()
        }
    }
}
