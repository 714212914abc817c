mod script;

use std::fs::File;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use dimertwist::combinatorics::KSubset;
use dimertwist::dimer::{DimerReport, WeightedGraph};
use dimertwist::plabic::{
    build_regular, build_regular_star, compute_face_labels, extract_quiver, graph_from_json,
    graph_to_dot, graph_to_json, random_quad_moves, trip_permutation, PlabicGraph,
};
use dimertwist::verify::{verify, verify_sweep, Suite, VerifyOptions};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

const EXIT_COUNTEREXAMPLE: u8 = 2;
const EXIT_INPUT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "dimertwist",
    version,
    about = "Twisted Plücker coordinates and dimer partition functions on plabic graphs"
)]
struct Cli {
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Append JSON-lines events to this file.
    #[arg(long, global = true)]
    log: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

/// Where a command takes its graph from: a JSON file (`-` for stdin) or a
/// freshly built regular graph.
#[derive(Args)]
struct GraphSource {
    /// Graph JSON file, or `-` for standard input.
    graph: Option<PathBuf>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// Use the regular star graph instead of the regular graph.
    #[arg(long)]
    star: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Build the regular (or regular star) graph for (k, n).
    Regular {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        star: bool,
    },
    /// Apply a move script and/or random quadrilateral moves.
    Moves {
        #[command(flatten)]
        source: GraphSource,
        /// One move per line: `quad <label>`, `blowup <v> <start> <len>`, `blowdown <v>`.
        #[arg(long)]
        script: Option<PathBuf>,
        /// Number of random quadrilateral moves applied after the script.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Face labels and the trip permutation.
    Labels {
        #[command(flatten)]
        source: GraphSource,
    },
    /// Perfect matchings of G(I) with the partition functions.
    Dimers {
        #[command(flatten)]
        source: GraphSource,
        /// The boundary subset I, e.g. `256` or `2,5,6`.
        #[arg(long)]
        subset: String,
    },
    /// The quiver of the face labels.
    Quiver {
        #[command(flatten)]
        source: GraphSource,
    },
    /// Run a verification suite.
    Verify {
        suite: Suite,
        /// Omit to sweep every 2 <= k <= n-2.
        #[arg(long)]
        k: Option<usize>,
        /// Largest n of a sweep when --k is omitted.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 5)]
        points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// DOT rendering of the graph, or of its quiver with --quiver.
    ExportDot {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long)]
        quiver: bool,
    },
}

/// A failed run: either bad input or a verification counterexample.
enum Failure {
    Input(String),
    Counterexample(Value),
}

impl From<dimertwist::Error> for Failure {
    fn from(e: dimertwist::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

struct Logger(Option<File>);

impl Logger {
    fn open(path: Option<&PathBuf>) -> io::Result<Self> {
        let file = path
            .map(|p| File::options().create(true).append(true).open(p))
            .transpose()?;
        Ok(Self(file))
    }

    fn event(&mut self, name: &str, mut data: Value) {
        if let Some(f) = &mut self.0 {
            data["event"] = json!(name);
            if let Err(e) = writeln!(f, "{data}") {
                eprintln!("warning: cannot write log: {e}");
                self.0 = None;
            }
        }
    }
}

enum Output {
    Json(Value),
    Text(String),
}

fn load_graph(source: &GraphSource) -> Result<(PlabicGraph, Option<Vec<(f64, f64)>>), Failure> {
    match (&source.graph, source.k, source.n) {
        (Some(path), None, None) if !source.star => {
            let mut text = String::new();
            if path.as_os_str() == "-" {
                io::stdin().read_to_string(&mut text)?;
            } else {
                text = std::fs::read_to_string(path)
                    .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            }
            let value: Value = serde_json::from_str(&text)
                .map_err(|e| Failure::Input(format!("graph JSON: {e}")))?;
            Ok((graph_from_json(&value)?, None))
        }
        (None, Some(k), Some(n)) => {
            let r = if source.star {
                build_regular_star(k, n)?
            } else {
                build_regular(k, n)?
            };
            Ok((r.graph, Some(r.positions)))
        }
        _ => Err(Failure::Input(
            "give either a graph file or both --k and --n".into(),
        )),
    }
}

fn run(cli: &Cli, log: &mut Logger) -> Result<Output, Failure> {
    match &cli.command {
        Command::Regular { k, n, star } => {
            let r = if *star {
                build_regular_star(*k, *n)?
            } else {
                build_regular(*k, *n)?
            };
            log.event("built", json!({ "k": k, "n": n, "star": star, "internal_faces": r.graph.num_internal_faces() }));
            let mut out = graph_to_json(&r.graph, Some(&r.labels));
            out["dot"] = json!(graph_to_dot(&r.graph, Some(&r.labels), Some(&r.positions)));
            Ok(Output::Json(out))
        }
        Command::Moves {
            source,
            script,
            random,
            seed,
        } => {
            let (mut g, _) = load_graph(source)?;
            if let Some(path) = script {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
                for (line_no, mv) in script::parse(&text)? {
                    g = script::apply(&g, &mv)
                        .map_err(|e| Failure::Input(format!("line {line_no}: {e}")))?;
                    log.event("move", json!({ "line": line_no, "move": mv.to_string() }));
                }
            }
            if let Some(count) = random {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let (next, _, applied) = random_quad_moves(&g, *count, &mut rng)?;
                log.event(
                    "random_moves",
                    json!({ "seed": seed, "requested": count, "labels": applied }),
                );
                g = next;
            }
            let labels = compute_face_labels(&g)?;
            Ok(Output::Json(graph_to_json(&g, Some(&labels))))
        }
        Command::Labels { source } => {
            let (g, _) = load_graph(source)?;
            let labels = compute_face_labels(&g)?;
            let faces: Vec<Value> = labels
                .labels()
                .iter()
                .enumerate()
                .map(|(f, l)| json!({ "face": f, "internal": g.face(f).is_internal(), "label": l }))
                .collect();
            Ok(Output::Json(json!({
                "k": g.k(),
                "n": g.n(),
                "faces": faces,
                "trip_permutation": trip_permutation(&g)?,
            })))
        }
        Command::Dimers { source, subset } => {
            let (g, _) = load_graph(source)?;
            let subset = KSubset::parse(g.n(), subset)?;
            if subset.k() != g.k() {
                return Err(Failure::Input(format!(
                    "subset {subset} has size {}, expected k = {}",
                    subset.k(),
                    g.k()
                )));
            }
            let report = DimerReport::compute(&WeightedGraph::new(g)?, &subset)?;
            log.event(
                "dimers",
                json!({ "subset": subset, "matchings": report.matchings.len() }),
            );
            Ok(Output::Json(report.to_json()))
        }
        Command::Quiver { source } => {
            let (g, _) = load_graph(source)?;
            Ok(Output::Json(
                extract_quiver(&g, &compute_face_labels(&g)?).to_json(),
            ))
        }
        Command::Verify {
            suite,
            k,
            n,
            points,
            seed,
        } => {
            let start = Instant::now();
            let report = match k {
                Some(k) => verify(
                    *suite,
                    &VerifyOptions {
                        points: *points,
                        seed: *seed,
                        ..VerifyOptions::new(*k, *n)
                    },
                )?,
                None => verify_sweep(*suite, 4, *n, *points, *seed)?,
            };
            let json = report.to_json();
            log.event(
                "verify",
                json!({ "report": json, "wall_time_ms": start.elapsed().as_millis() }),
            );
            if report.is_pass() {
                Ok(Output::Json(json))
            } else {
                Err(Failure::Counterexample(json))
            }
        }
        Command::ExportDot { source, quiver } => {
            let (g, positions) = load_graph(source)?;
            let labels = compute_face_labels(&g)?;
            let dot = if *quiver {
                extract_quiver(&g, &labels).to_dot()
            } else {
                graph_to_dot(&g, Some(&labels), positions.as_deref())
            };
            Ok(Output::Text(dot))
        }
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => io::stdout().write_all(text.as_bytes()),
    }
}

fn render(output: &Output) -> String {
    match output {
        Output::Json(v) => serde_json::to_string_pretty(v).expect("JSON values serialize") + "\n",
        Output::Text(s) => s.clone(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut log = match Logger::open(cli.log.as_ref()) {
        Ok(log) => log,
        Err(e) => {
            eprintln!("error: cannot open log: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let result = run(&cli, &mut log);
    let (text, code) = match &result {
        Ok(output) => (render(output), 0),
        Err(Failure::Counterexample(report)) => {
            (render(&Output::Json(report.clone())), EXIT_COUNTEREXAMPLE)
        }
        Err(Failure::Input(msg)) => {
            log.event("error", json!({ "message": msg }));
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    log.event("done", json!({ "exit_code": code }));
    if let Err(e) = emit(cli.out.as_ref(), &text) {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(EXIT_INPUT);
    }
    ExitCode::from(code)
}
