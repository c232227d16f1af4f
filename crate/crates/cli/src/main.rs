//! `trikit`: command-line front end for the triangulation toolkit.

mod commands;
mod error;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(name = "trikit", version, about = "Triangulated 3-manifolds: moves, normal surfaces, subdivision and bounds")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// Seed for every random choice.
    #[arg(long, global = true, env = "TRIKIT_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for enumeration and search.
    #[arg(long, global = true, env = "TRIKIT_JOBS")]
    pub jobs: Option<usize>,
    /// Largest triangulation searched or walked through; also lifts the
    /// enumeration size guards.
    #[arg(long, global = true, env = "TRIKIT_MAX_TETS")]
    pub max_tets: Option<usize>,
    /// Longest path searched.
    #[arg(long, global = true, env = "TRIKIT_MAX_DEPTH")]
    pub max_depth: Option<usize>,
    /// Bit size above which bound expressions stay symbolic.
    #[arg(long, global = true, env = "TRIKIT_BIT_CEILING", default_value_t = trikit::bounds::DEFAULT_BIT_CEILING)]
    pub bit_ceiling: u64,
    #[arg(long, global = true, env = "TRIKIT_FORMAT", value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Structured,
}

/// Triangulation files may also name a bundled example (`solid_torus_2`
/// or `solid_torus_2.tri`) when no such file exists.
#[derive(Subcommand, Debug)]
enum Command {
    /// Check the gluing table describes a 3-manifold.
    Validate { file: PathBuf },
    /// Vertex, edge and face classes.
    Skeleton { file: PathBuf },
    /// First homology group.
    Homology { file: PathBuf },
    /// List, apply, walk and replay moves.
    #[command(subcommand)]
    Moves(MovesCommand),
    /// Normal surfaces: matching equations, enumeration, classification.
    #[command(subcommand)]
    Surfaces(SurfacesCommand),
    /// Subdivide along a normal surface so that it becomes a subcomplex.
    Subdivide {
        file: PathBuf,
        surface: PathBuf,
        /// Write the subdivided triangulation here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write the surface embedding (disc to triangles) here.
        #[arg(long)]
        embedding: Option<PathBuf>,
    },
    /// Find moves from a triangulation to its subdivision along a surface.
    Realize {
        file: PathBuf,
        surface: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Most triangulations examined.
        #[arg(long, default_value_t = 200_000)]
        max_nodes: usize,
    },
    /// Evaluate and compare tower-of-exponentials bounds.
    #[command(subcommand)]
    Bounds(BoundsCommand),
    /// Search for moves between two triangulations, or from one to the end
    /// of a seeded random walk.
    Connect {
        from: PathBuf,
        to: Option<PathBuf>,
        /// Walk this many steps to make the goal (when no goal is given).
        #[arg(long, default_value_t = 6)]
        walk: usize,
        /// Independent walks, seeded `seed`, `seed + 1`, ...
        #[arg(long, default_value_t = 1)]
        trials: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum MovesCommand {
    /// Every legal move.
    List { file: PathBuf },
    /// Apply moves given as `"M23 tet=0 face=1"`, or from a record file.
    Apply {
        file: PathBuf,
        moves: Vec<String>,
        #[arg(long)]
        record: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Seeded random walk, checking invariants at every step.
    Walk {
        file: PathBuf,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        /// Write the final triangulation here.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Replay a record and check its recorded sizes.
    Replay {
        file: PathBuf,
        record: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum SurfacesCommand {
    /// Matching equations.
    Matching { file: PathBuf },
    /// Vertex normal surfaces.
    EnumVertex { file: PathBuf },
    /// Fundamental normal surfaces.
    EnumFundamental { file: PathBuf },
    /// Largest vertex and fundamental coordinates against 2^{7t} and 7t·2^{7t}.
    VerifyBounds {
        file: PathBuf,
        #[arg(long)]
        vertex_only: bool,
    },
    /// Components, Euler characteristic, orientability and sidedness.
    Classify {
        file: PathBuf,
        surface: PathBuf,
        /// Boundary curve as tetrahedron edges, `tet:edge,tet:edge,...`.
        #[arg(long)]
        pattern: Option<String>,
    },
    /// Haken sum of two compatible surfaces.
    Sum {
        file: PathBuf,
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum BoundsCommand {
    /// Evaluate an expression such as `(e 2 3)` or `(* 7 t (^ 2 (* 7 t)))`.
    Eval {
        expr: String,
        /// Variable bindings `name=value`.
        #[arg(long = "bind", value_name = "NAME=VALUE")]
        bind: Vec<String>,
    },
    /// Order two expressions.
    Compare {
        a: String,
        b: String,
        #[arg(long = "bind", value_name = "NAME=VALUE")]
        bind: Vec<String>,
    },
    /// List the named bounds, or evaluate one: `catalogue hass_fund 2`.
    Catalogue { name: Option<String>, args: Vec<u64> },
}

/// What a command produced: a text report, the same content as data, and
/// an optional failure that still comes with a report.
pub struct Report {
    pub text: String,
    pub data: serde_json::Value,
    pub failure: Option<CliError>,
}

impl Report {
    pub fn ok(text: String, data: serde_json::Value) -> Self {
        Report { text, data, failure: None }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Skeleton { .. } => "skeleton",
        Command::Homology { .. } => "homology",
        Command::Moves(MovesCommand::List { .. }) => "moves list",
        Command::Moves(MovesCommand::Apply { .. }) => "moves apply",
        Command::Moves(MovesCommand::Walk { .. }) => "moves walk",
        Command::Moves(MovesCommand::Replay { .. }) => "moves replay",
        Command::Surfaces(SurfacesCommand::Matching { .. }) => "surfaces matching",
        Command::Surfaces(SurfacesCommand::EnumVertex { .. }) => "surfaces enum-vertex",
        Command::Surfaces(SurfacesCommand::EnumFundamental { .. }) => "surfaces enum-fundamental",
        Command::Surfaces(SurfacesCommand::VerifyBounds { .. }) => "surfaces verify-bounds",
        Command::Surfaces(SurfacesCommand::Classify { .. }) => "surfaces classify",
        Command::Surfaces(SurfacesCommand::Sum { .. }) => "surfaces sum",
        Command::Subdivide { .. } => "subdivide",
        Command::Realize { .. } => "realize",
        Command::Bounds(BoundsCommand::Eval { .. }) => "bounds eval",
        Command::Bounds(BoundsCommand::Compare { .. }) => "bounds compare",
        Command::Bounds(BoundsCommand::Catalogue { .. }) => "bounds catalogue",
        Command::Connect { .. } => "connect",
    }
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    use commands as c;
    let o = &cli.opts;
    match &cli.command {
        Command::Validate { file } => c::validate(file),
        Command::Skeleton { file } => c::skeleton(file),
        Command::Homology { file } => c::homology(file),
        Command::Moves(m) => c::moves(o, m),
        Command::Surfaces(s) => c::surfaces(o, s),
        Command::Subdivide { file, surface, output, embedding } => {
            c::subdivide(file, surface, output.as_deref(), embedding.as_deref())
        }
        Command::Realize { file, surface, output, max_nodes } => c::realize(o, file, surface, output.as_deref(), *max_nodes),
        Command::Bounds(b) => c::bounds(o, b),
        Command::Connect { from, to, walk, trials, output } => {
            c::connect(o, from, to.as_deref(), *walk, *trials, output.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { error::Category::Parse.exit_code() } else { 0 };
            return ExitCode::from(code as u8);
        }
    };
    let name = command_name(&cli.command);
    let (report, err) = match run(&cli) {
        Ok(mut r) => {
            let f = r.failure.take();
            (Some(r), f)
        }
        Err(e) => (None, Some(e)),
    };
    // A closed pipe (`| head`) is not an error worth reporting.
    let mut out = std::io::stdout().lock();
    match cli.opts.format {
        Format::Text => {
            if let Some(r) = &report {
                let _ = write!(out, "{}", r.text);
            }
            if let Some(e) = &err {
                eprintln!("{e}");
            }
        }
        Format::Structured => {
            let doc = json!({
                "command": name,
                "ok": err.is_none(),
                "result": report.map(|r| r.data),
                "error": err.as_ref().map(|e| json!({ "category": e.category.name(), "message": e.message })),
            });
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("report serialises"));
        }
    }
    match err {
        None => ExitCode::SUCCESS,
        Some(e) => ExitCode::from(e.category.exit_code() as u8),
    }
}
