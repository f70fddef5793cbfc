use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use convex_tour::arcs::ArcsList;
use convex_tour::dynamic::{preprocess, query_curvature, query_tour_points, IndexFile, WorkspaceIndex};
use convex_tour::io::{parse_instance, parse_points, parse_tour, render_svg, tour_to_json, Annotations, Instance, IoError};
use convex_tour::oracle::oracle_table;
use convex_tour::paths::maximal_path;
use convex_tour::planner::{constrained_tour, tour_with_curvature};
use convex_tour::skeleton::medial_axis;
use convex_tour::Error;

/// Smallest-curvature convex tours around a polygonal obstacle.
#[derive(Parser)]
#[command(name = "convex-tour", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the optimal tour of an instance.
    Tour {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check whether a tour with curvature at most KAPPA exists.
    Exists {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        kappa: f64,
    },
    /// Emit the maximal path of the workspace for curvature KAPPA.
    MaximalPath {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        kappa: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Build a reusable index of the workspace.
    Preprocess {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        index: PathBuf,
    },
    /// Answer an obstacle query against an index.
    Query {
        #[arg(long)]
        index: PathBuf,
        #[arg(long)]
        obstacle: PathBuf,
        /// Only report the optimal curvature.
        #[arg(long)]
        curvature_only: bool,
    },
    /// Brute-force critical radii of the obstacle's hull vertices.
    Oracle {
        #[arg(long)]
        input: PathBuf,
    },
    /// Draw an instance, optionally with a tour and overlays.
    Render {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        svg: PathBuf,
        #[arg(long)]
        tour: Option<PathBuf>,
        #[arg(long)]
        show_skeleton: bool,
        #[arg(long)]
        show_arcs: bool,
    },
}

enum Failure {
    Validation(String),
    Infeasible(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 2,
            Failure::Infeasible(_) => 3,
            Failure::Internal(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Infeasible(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_) => Failure::Validation(e.to_string()),
            Error::NoSuchPath { .. } | Error::Infeasible(_) => Failure::Infeasible(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::Validation(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Internal(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Instance, Failure> {
    Ok(parse_instance(&read(path)?)?)
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(p) => write(p, text),
        None => match writeln!(io::stdout().lock(), "{text}") {
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(Failure::Internal(e.to_string())),
            _ => Ok(()),
        },
    }
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Tour { input, svg, output } => {
            let inst = load(&input)?;
            let obstacle = inst.obstacle_polygon()?;
            let r = constrained_tour(&inst.outer, &obstacle, &inst.constraints)?;
            if let Some(p) = svg {
                write(&p, &render_svg(&inst.outer, &inst.obstacle, Some(&r.tour), Annotations::default()))?;
            }
            emit(&tour_to_json(&r.tour), output.as_deref())
        }
        Command::Exists { input, kappa } => {
            let inst = load(&input)?;
            match tour_with_curvature(&inst.outer, &inst.obstacle_polygon()?, kappa)? {
                Some(t) => emit(&tour_to_json(&t), None),
                None => Err(Failure::Infeasible(format!("no tour with curvature at most {kappa}"))),
            }
        }
        Command::MaximalPath { input, kappa, output } => {
            let inst = load(&input)?;
            let tree = medial_axis(&inst.outer)?;
            emit(&tour_to_json(&maximal_path(&tree, kappa)?), output.as_deref())
        }
        Command::Preprocess { input, index } => {
            let inst = load(&input)?;
            let ix = preprocess(&inst.outer)?;
            let text = serde_json::to_string(&ix.to_file()).map_err(|e| Failure::Internal(e.to_string()))?;
            write(&index, &text)
        }
        Command::Query {
            index,
            obstacle,
            curvature_only,
        } => {
            let file: IndexFile = serde_json::from_str(&read(&index)?).map_err(IoError::from)?;
            let ix = WorkspaceIndex::from_file(file)?;
            let pts = parse_points(&read(&obstacle)?)?;
            if curvature_only {
                let k = query_curvature(&ix, &pts)?;
                emit(&serde_json::json!({ "kappa": k }).to_string(), None)
            } else {
                emit(&tour_to_json(&query_tour_points(&ix, &pts)?.tour), None)
            }
        }
        Command::Oracle { input } => {
            let inst = load(&input)?;
            if inst.obstacle.is_empty() {
                return Err(Failure::Validation("obstacle missing".into()));
            }
            let t = oracle_table(&inst.outer, &inst.obstacle)?;
            let mut s = format!("radius {}\n", t.radius);
            let c = t.inscribed;
            let _ = writeln!(s, "inscribed {} {} {}", c.center.x, c.center.y, c.radius);
            s.push_str("vertex_x vertex_y radius edge_a edge_b");
            for row in &t.rows {
                let v = row.vertex;
                let _ = match (row.radius, row.tangent_edges) {
                    (Some(r), Some((a, b))) => write!(s, "\n{} {} {r} {a} {b}", v.x, v.y),
                    _ => write!(s, "\n{} {} - - -", v.x, v.y),
                };
            }
            emit(&s, None)
        }
        Command::Render {
            input,
            svg,
            tour,
            show_skeleton,
            show_arcs,
        } => {
            let inst = load(&input)?;
            let tour = tour.map(|p| read(&p).and_then(|t| Ok(parse_tour(&t)?))).transpose()?;
            let tree = medial_axis(&inst.outer)?;
            let arcs = ArcsList::build(&tree);
            let ann = Annotations {
                skeleton: show_skeleton.then_some(&tree),
                arcs: show_arcs.then_some((&tree, &arcs)),
            };
            write(&svg, &render_svg(&inst.outer, &inst.obstacle, tour.as_ref(), ann))
        }
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
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("convex-tour: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
