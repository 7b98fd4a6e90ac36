//! `bricard-kit` command-line front end.
//!
//! Exit codes: 0 success, 1 graphs not isomorphic, 2 usage or domain error,
//! 3 I/O error.

mod config;
mod format;
mod plot;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

pub use config::RunConfig;
pub use format::sig6;
pub use plot::{sweep_charts, Chart, Panel, Series};

use crate::palm_kinematics::{angles_from_pose, forward, inverse, PalmConfiguration, PalmParams, DEFAULT_LINK_LENGTH};
use crate::performance::{sweep_with, write_csv};
use crate::topo::{check_table, enumerate_compositions, find_isomorphism, TableRowCheck, TopologyGraph};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_ISOMORPHIC: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

#[derive(Debug, Parser)]
#[command(name = "bricard-kit", version, about = "Synthesis, kinematics and transmission analysis of a Bricard palm")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Basic-link compositions and contracted-graph isomorphism.
    #[command(subcommand)]
    Topo(TopoCommand),
    /// Forward kinematics from the input radius L1.
    Fk {
        /// Input radius L1, mm.
        #[arg(long)]
        l1: f64,
        /// Link length L, mm.
        #[arg(long = "L", default_value_t = DEFAULT_LINK_LENGTH)]
        link_length: f64,
    },
    /// Inverse kinematics from the palm height L3.
    Ik {
        /// Palm height L3, mm.
        #[arg(long)]
        l3: f64,
        /// Link length L, mm.
        #[arg(long = "L", default_value_t = DEFAULT_LINK_LENGTH)]
        link_length: f64,
    },
    /// Workspace sweep written as CSV, optionally with SVG plots.
    Sweep(SweepArgs),
}

#[derive(Debug, Subcommand)]
enum TopoCommand {
    /// List compositions up to a loop count and check the reference table.
    Enumerate {
        #[arg(long)]
        v_max: u32,
        /// Cap on each of n3, n4, n5.
        #[arg(long)]
        max_per_kind: Option<u32>,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
        /// Write the report here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Exit 0 if two JSON graphs are isomorphic, 1 otherwise.
    Iso { a: PathBuf, b: PathBuf },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReportFormat {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// JSON run configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    samples: Option<usize>,
    /// Link length L, mm.
    #[arg(long = "L")]
    link_length: Option<f64>,
    /// Twist angle, rad.
    #[arg(long)]
    twist: Option<f64>,
    /// Input stiffness K_L1, N/mm.
    #[arg(long)]
    input_stiffness: Option<f64>,
    /// End margin on the L1 range as a fraction of L.
    #[arg(long)]
    epsilon_frac: Option<f64>,
    /// CSV output path.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Also write four SVG plots next to the CSV.
    #[arg(long)]
    plot: bool,
}

impl SweepArgs {
    fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut c = match &self.config {
            Some(path) => RunConfig::from_path(path)?,
            None => RunConfig::default(),
        };
        if let Some(v) = self.samples {
            c.samples = v;
        }
        if let Some(v) = self.link_length {
            c.link_length_mm = v;
        }
        if let Some(v) = self.twist {
            c.twist_rad = v;
        }
        if let Some(v) = self.input_stiffness {
            c.input_stiffness = v;
        }
        if let Some(v) = self.epsilon_frac {
            c.epsilon_frac = v;
        }
        if let Some(v) = &self.output {
            c.output_path = v.clone();
        }
        c.validate()?;
        Ok(c)
    }
}

/// Runs with the process arguments and returns the exit code.
pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_from(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_from<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, out: &mut impl Write) -> Result<i32, CliError> {
    match command {
        Command::Topo(TopoCommand::Enumerate { v_max, max_per_kind, format, output }) => {
            let report = enumerate_report(v_max, max_per_kind.unwrap_or(u32::MAX), format)?;
            emit(out, output.as_deref(), &report)?;
            Ok(EXIT_OK)
        }
        Command::Topo(TopoCommand::Iso { a, b }) => cmd_iso(&a, &b, out),
        Command::Fk { l1, link_length } => {
            let params = fixed_params(link_length)?;
            let pose = forward(l1, &params).map_err(|e| CliError::Usage(e.to_string()))?;
            print_pose(out, &pose, &params)?;
            Ok(EXIT_OK)
        }
        Command::Ik { l3, link_length } => {
            let params = fixed_params(link_length)?;
            let pose = inverse(l3, &params).map_err(|e| CliError::Usage(e.to_string()))?;
            print_pose(out, &pose, &params)?;
            Ok(EXIT_OK)
        }
        Command::Sweep(args) => cmd_sweep(&args.resolve()?, args.plot, out),
    }
}

fn fixed_params(link_length: f64) -> Result<PalmParams, CliError> {
    PalmParams::new(link_length, PalmParams::default().twist).map_err(|e| CliError::Usage(e.to_string()))
}

fn stdout_err(e: std::io::Error) -> CliError {
    CliError::Io(format!("stdout: {e}"))
}

fn emit(out: &mut impl Write, path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| io_err(p, e)),
        None => out.write_all(text.as_bytes()).map_err(stdout_err),
    }
}

fn print_pose(out: &mut impl Write, pose: &PalmConfiguration, params: &PalmParams) -> Result<(), CliError> {
    let angles = angles_from_pose(pose, params).map_err(|e| CliError::Usage(e.to_string()))?;
    let fields = [
        ("l1_mm", pose.l1),
        ("l2_mm", pose.l2),
        ("l3_mm", pose.l3),
        ("beta_rad", angles.beta),
        ("gamma_rad", angles.gamma),
    ];
    for (k, v) in fields {
        writeln!(out, "{k}: {}", sig6(v)).map_err(stdout_err)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct CompositionOut {
    v_loops: u32,
    n3: u32,
    n4: u32,
    n5: u32,
    n2_base: i64,
    n2: String,
}

#[derive(Serialize)]
struct EnumerateReport {
    v_max: u32,
    compositions: Vec<CompositionOut>,
    table_check: Vec<TableRowCheck>,
}

fn enumerate_report(v_max: u32, max_per_kind: u32, format: ReportFormat) -> Result<String, CliError> {
    let comps = enumerate_compositions(v_max, max_per_kind).map_err(|e| CliError::Usage(e.to_string()))?;
    let table = check_table(&comps);
    match format {
        ReportFormat::Json => {
            let report = EnumerateReport {
                v_max,
                compositions: comps
                    .iter()
                    .map(|c| CompositionOut {
                        v_loops: c.v_loops,
                        n3: c.n3,
                        n4: c.n4,
                        n5: c.n5,
                        n2_base: c.n2_base,
                        n2: c.n2_symbolic(),
                    })
                    .collect(),
                table_check: table,
            };
            let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
            text.push('\n');
            Ok(text)
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let opt = |v: Option<String>| v.unwrap_or_default();
            let csv_err = |e: csv::Error| CliError::Io(e.to_string());
            w.write_record([
                "kind",
                "number",
                "v_loops",
                "n3",
                "n4",
                "n5",
                "n2_base",
                "recomputed_v",
                "expected_n2_base",
                "status",
                "enumerated",
            ])
            .map_err(csv_err)?;
            for c in &comps {
                let rec = [
                    "composition".to_string(),
                    String::new(),
                    c.v_loops.to_string(),
                    c.n3.to_string(),
                    c.n4.to_string(),
                    c.n5.to_string(),
                    c.n2_base.to_string(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                ];
                w.write_record(&rec).map_err(csv_err)?;
            }
            for t in &table {
                let status = serde_json::to_value(t.status).expect("status serializes");
                let rec = [
                    "table".to_string(),
                    t.row.number.to_string(),
                    t.row.printed_v.to_string(),
                    t.row.n3.to_string(),
                    t.row.n4.to_string(),
                    t.row.n5.to_string(),
                    t.row.printed_n2_base.to_string(),
                    opt(t.recomputed_v.map(|v| v.to_string())),
                    opt(t.expected_n2_base.map(|v| v.to_string())),
                    status.as_str().unwrap_or_default().to_string(),
                    t.enumerated.to_string(),
                ];
                w.write_record(&rec).map_err(csv_err)?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
    }
}

fn load_graph(path: &Path) -> Result<TopologyGraph, CliError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    TopologyGraph::from_json(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn cmd_iso(a: &Path, b: &Path, out: &mut impl Write) -> Result<i32, CliError> {
    let (ga, gb) = (load_graph(a)?, load_graph(b)?);
    match find_isomorphism(&ga, &gb) {
        Some(map) => {
            writeln!(out, "isomorphic").map_err(stdout_err)?;
            for (x, y) in map {
                writeln!(out, "{x} -> {y}").map_err(stdout_err)?;
            }
            Ok(EXIT_OK)
        }
        None => {
            writeln!(out, "not isomorphic").map_err(stdout_err)?;
            Ok(EXIT_NOT_ISOMORPHIC)
        }
    }
}

fn cmd_sweep(config: &RunConfig, plot: bool, out: &mut impl Write) -> Result<i32, CliError> {
    let params = config.params()?;
    let rows = sweep_with(&params, &config.settings()).map_err(|e| CliError::Usage(e.to_string()))?;

    let path = &config.output_path;
    let file = fs::File::create(path).map_err(|e| io_err(path, e))?;
    write_csv(&rows, std::io::BufWriter::new(file)).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let ok = rows.iter().filter(|r| r.is_ok()).count();
    writeln!(out, "rows: {} (ok {ok})", rows.len()).map_err(stdout_err)?;
    writeln!(out, "csv: {}", path.display()).map_err(stdout_err)?;

    if plot {
        for (suffix, chart) in sweep_charts(&rows) {
            let svg_path = plot_path(path, suffix);
            fs::write(&svg_path, chart.render()).map_err(|e| io_err(&svg_path, e))?;
            writeln!(out, "svg: {}", svg_path.display()).map_err(stdout_err)?;
        }
    }
    Ok(EXIT_OK)
}

/// `dir/stem.csv` → `dir/stem_suffix.svg`.
fn plot_path(csv_path: &Path, suffix: &str) -> PathBuf {
    let stem = csv_path.file_stem().and_then(|s| s.to_str()).unwrap_or("sweep");
    csv_path.with_file_name(format!("{stem}_{suffix}.svg"))
}
