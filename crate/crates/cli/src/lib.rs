//! The `ramsey` command line: single games, solver runs, sweeps, lab
//! computations, the verification batch, and the session server.

pub mod server;

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use ramsey_core::game::GameConfig;
use ramsey_core::harness::{run_game, savings_sweep, verify_all, GameRun, Mutation, SweepSpec};
use ramsey_core::lab::{es_constant_sweep, es_extract, kst_bound, verify_least_density_halves, SimpleGraph};
use ramsey_core::policy::{BuilderSpec, PainterSpec};
use ramsey_core::rational::{check_epsilon, parse_rational};
use ramsey_core::session::{SessionManager, DEFAULT_IDLE_TIMEOUT};
use ramsey_core::solver::{brute_value, Solver, DEFAULT_MAX_VERTICES};
use ramsey_core::BichromaticGraph;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "RAMSEY_OUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "ramsey", version, about = "Builder/Painter games on K_N")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Play one game and write its transcript and JSON report.
    Play {
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long = "N", default_value_t = 6)]
        vertices: usize,
        #[arg(long, default_value = "paper")]
        builder: String,
        #[arg(long, default_value = "random")]
        painter: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory (default: $RAMSEY_OUT_DIR, else the current directory).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact game value from the empty graph or a graph file.
    Solve {
        m: usize,
        n: usize,
        #[arg(value_name = "N")]
        vertices: usize,
        /// Start position in the graph text format.
        #[arg(long)]
        from: Option<PathBuf>,
        /// Also compute the value with the unpruned oracle (N ≤ 6).
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_VERTICES)]
        max_vertices: usize,
        /// Node expansion budget.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Savings sweep over a range of N; writes CSV.
    Sweep {
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Vertex counts: comma-separated values or ranges, e.g. `6-30` or `6,10,20`.
        #[arg(long = "N", default_value = "6-30")]
        vertices: String,
        #[arg(long, default_value = "paper")]
        builder: String,
        /// Painter policy; repeat for a pool.
        #[arg(long = "painter", default_values_t = vec!["random".to_string()])]
        painters: Vec<String>,
        #[arg(long, default_value_t = 50)]
        repeats: u64,
        /// CSV file (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extremal bound computations.
    Lab {
        #[command(subcommand)]
        command: LabCommand,
    },
    /// Run the property batch and print one line per item.
    Verify {
        #[arg(long)]
        quick: bool,
        /// Swap in a weakened independence predicate; the fuzz must then fail.
        #[arg(long)]
        mutate: bool,
    },
    /// Start the HTTP session service.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: String,
        /// Directory for finished-session transcripts (default: $RAMSEY_OUT_DIR/sessions if set).
        #[arg(long)]
        transcripts: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum LabCommand {
    /// Kővári–Sós–Turán bound for K_{s,t}-free bipartite graphs on m × n.
    Kst { m: u64, n: u64, s: u32, t: u64 },
    /// Largest clique or independent set of a graph file (`u v` or `u v R|B` lines, red counts).
    Es { file: PathBuf },
    /// Empirical constants of the clique/independent-set extraction on sparse random graphs.
    EsSweep {
        #[arg(long, value_delimiter = ',', default_values_t = vec![10, 20, 30, 40])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Incidence-density witness for a complete bipartite graph file on halves 0..N₀, N₀..2N₀.
    Density {
        file: PathBuf,
        #[arg(long, default_value = "1/10")]
        eps: String,
    },
}

/// A failed command: message for stderr and the exit code.
#[derive(Debug)]
pub struct CliError {
    pub message: String,
    pub code: u8,
}

impl CliError {
    fn usage(message: impl ToString) -> Self {
        CliError { message: message.to_string(), code: 2 }
    }

    fn failed(message: impl ToString) -> Self {
        CliError { message: message.to_string(), code: 1 }
    }
}

pub fn out_dir(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn config(m: usize, n: usize, vertices: usize) -> Result<GameConfig, CliError> {
    GameConfig::new(m, n, vertices).map_err(CliError::usage)
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::failed(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, contents).map_err(|e| CliError::failed(format!("{}: {e}", path.display())))
}

/// Parses `6-30`, `6,10,20` or a mix of both.
pub fn parse_vertex_list(s: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let num = |x: &str| x.trim().parse::<usize>().map_err(|_| format!("bad vertex count {x:?}"));
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b)?);
                if a > b {
                    return Err(format!("empty range {part:?}"));
                }
                out.extend(a..=b);
            }
            None => out.push(num(part)?),
        }
    }
    if out.is_empty() {
        return Err("no vertex counts given".into());
    }
    Ok(out)
}

/// Runs a command and returns what it prints on stdout.
pub fn execute(command: Command) -> Result<String, CliError> {
    match command {
        Command::Play { m, n, vertices, builder, painter, seed, out } => {
            let run = GameRun { config: config(m, n, vertices)?, builder, painter, seed };
            // everything is validated and played before any file is touched
            let (transcript, report) = run_game(&run).map_err(CliError::usage)?;
            let line = serde_json::to_string(&report).expect("report serializes");
            let dir = out_dir(out);
            let stem = format!("game-{m}-{n}-{vertices}-seed{seed}");
            write(&dir.join(format!("{stem}.txt")), &transcript.to_text())?;
            write(&dir.join(format!("{stem}.json")), &format!("{line}\n"))?;
            Ok(line)
        }
        Command::Solve { m, n, vertices, from, oracle, max_vertices, budget } => {
            let config = config(m, n, vertices)?;
            let g = match from {
                Some(path) => BichromaticGraph::from_text(&read(&path)?).map_err(CliError::usage)?,
                None => BichromaticGraph::new(vertices).map_err(CliError::usage)?,
            };
            let mut solver = Solver::with_limits(config, max_vertices, budget).map_err(CliError::usage)?;
            let result = solver.solve(&g).map_err(CliError::failed)?;
            let mut out = json!({
                "config": config,
                "value": result.value,
                "savings": result.value.map(|v| g.unbuilt_count() - v as usize),
                "principal_variation": result.principal_variation,
                "nodes_expanded": result.nodes_expanded,
                "table_hits": result.table_hits,
            });
            if oracle {
                let o = brute_value(&g, config).map_err(CliError::usage)?;
                out["oracle"] = json!(o);
                out["oracle_agrees"] = json!(o == result.value);
            }
            Ok(out.to_string())
        }
        Command::Sweep { m, n, vertices, builder, painters, repeats, out } => {
            let spec = SweepSpec {
                m,
                n,
                vertices: parse_vertex_list(&vertices).map_err(CliError::usage)?,
                builder: builder.parse::<BuilderSpec>().map_err(CliError::usage)?,
                painters: painters
                    .iter()
                    .map(|p| p.parse::<PainterSpec>())
                    .collect::<Result<_, _>>()
                    .map_err(CliError::usage)?,
                repeats,
            };
            let csv = savings_sweep(&spec).and_then(|r| r.to_csv()).map_err(CliError::usage)?;
            match out {
                Some(path) => {
                    write(&path, &csv)?;
                    Ok(format!("wrote {}", path.display()))
                }
                None => Ok(csv.trim_end().to_string()),
            }
        }
        Command::Lab { command } => lab(command).map(|v| v.to_string()),
        Command::Verify { quick, mutate } => {
            let mutation = if mutate { Mutation::WeakIndependence } else { Mutation::None };
            let report = verify_all(quick, mutation);
            let lines: Vec<String> = report
                .items
                .iter()
                .map(|i| {
                    let verdict = if i.passed { "PASS" } else { "FAIL" };
                    format!("{verdict} {}: {} ({:.2}s)", i.name, i.detail, i.seconds)
                })
                .collect();
            let text = lines.join("\n");
            if report.all_passed() {
                Ok(text)
            } else {
                Err(CliError::failed(text))
            }
        }
        Command::Serve { addr, transcripts } => {
            let dir = transcripts.or_else(|| std::env::var_os(OUT_DIR_ENV).map(|d| PathBuf::from(d).join("sessions")));
            let manager = Arc::new(SessionManager::new(DEFAULT_IDLE_TIMEOUT, dir));
            let runtime = tokio::runtime::Builder::new_current_thread()
                .enable_all()
                .build()
                .map_err(CliError::failed)?;
            runtime.block_on(server::serve(&addr, manager)).map_err(CliError::failed)?;
            Ok(String::new())
        }
    }
}

fn lab(command: LabCommand) -> Result<Value, CliError> {
    match command {
        LabCommand::Kst { m, n, s, t } => {
            let bound = kst_bound(m, n, s, t).map_err(CliError::usage)?;
            Ok(json!({
                "m": m, "n": n, "s": s, "t": t,
                "bound": bound.to_string(),
                "approx": bound.to_f64(),
            }))
        }
        LabCommand::Es { file } => {
            let g = SimpleGraph::from_text(&read(&file)?).map_err(CliError::usage)?;
            let x = es_extract(&g).map_err(CliError::usage)?;
            Ok(json!({ "vertices": g.vertex_count(), "edges": g.edge_count(), "size": x.vertices.len(), "extraction": x }))
        }
        LabCommand::EsSweep { sizes, eps, trials, seed } => {
            if !(eps > 0.0 && eps < 0.5) {
                return Err(CliError::usage(format!("eps must lie in (0, 1/2), got {eps}")));
            }
            if let Some(&n) = sizes.iter().find(|&&n| n > ramsey_core::lab::ES_MAX_VERTICES) {
                return Err(CliError::usage(format!(
                    "size {n} exceeds the exact limit of {} vertices",
                    ramsey_core::lab::ES_MAX_VERTICES
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok(json!(es_constant_sweep(&sizes, eps, trials, &mut rng)))
        }
        LabCommand::Density { file, eps } => {
            let eps = parse_rational(&eps).and_then(check_epsilon).map_err(CliError::usage)?;
            let g = BichromaticGraph::from_text(&read(&file)?).map_err(CliError::usage)?;
            let w = verify_least_density_halves(&g, eps).map_err(CliError::usage)?;
            Ok(json!(w))
        }
    }
}
