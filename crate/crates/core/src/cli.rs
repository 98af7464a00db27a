//! `ridgeline` command-line front end.
//!
//! Exit status is 0 on success, 1 for invalid input (bad flags, configs or
//! model preconditions) and 2 for I/O failures. Data goes to stdout or the
//! `--out` file, diagnostics to stderr.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::config::{parse_kernel_config, parse_machine_config, Kernel, MlpKernel};
use crate::error::ModelError;
use crate::format::number;
use crate::mlp::{batch_sweep, doubling_batches, SweepTable};
use crate::model::{
    intensities, project, ridgeline_geometry, roofline_curve, surface_grid, CurveKind,
    KernelProfile, MachineSpec, DEFAULT_TOLERANCE,
};
use crate::plot::{
    export_surface, render_ridgeline, render_roofline, PlotStyle, RidgelinePoint, RooflinePoint,
    SurfaceFormat,
};
use crate::report::{analyze, sweep_csv};

#[derive(Debug, Parser)]
#[command(
    name = "ridgeline",
    version,
    about = "Roofline and Ridgeline bottleneck analysis"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the bottleneck of one kernel and project its runtime.
    Analyze {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long)]
        kernel: PathBuf,
        /// Emit a JSON report instead of text.
        #[arg(long)]
        json: bool,
        /// Relative slack for reporting co-limiting resources.
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
    },
    /// Sweep the batch size of an MLP kernel and write a CSV table.
    Sweep {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long)]
        kernel: PathBuf,
        /// Comma-separated global batch sizes [default: 64,128,...,8192].
        #[arg(long, value_delimiter = ',')]
        batches: Vec<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
    },
    /// Render a roofline or the ridgeline plane as SVG.
    Plot {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long)]
        kernel: Option<PathBuf>,
        #[arg(long, value_enum)]
        kind: PlotKind,
        #[arg(long)]
        out: PathBuf,
        /// Batch sizes to place when the kernel is an MLP.
        #[arg(long, value_delimiter = ',')]
        batches: Vec<u64>,
        #[arg(long)]
        title: Option<String>,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
    },
    /// Export attainable FLOP/s over a grid of arithmetic and network intensity.
    Surface {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Samples per axis.
        #[arg(long, default_value_t = 64)]
        resolution: usize,
        #[arg(long, default_value = "csv")]
        format: String,
        /// Arithmetic-intensity range as MIN:MAX [default: two decades around P/BW_m].
        #[arg(long, value_parser = parse_range)]
        i_a_range: Option<(f64, f64)>,
        /// Network-intensity range as MIN:MAX [default: two decades around P/BW_n].
        #[arg(long, value_parser = parse_range)]
        i_n_range: Option<(f64, f64)>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlotKind {
    Ridgeline,
    RooflineCm,
    RooflineMn,
    RooflineCn,
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(':').ok_or("expected MIN:MAX")?;
    let lo: f64 = lo.trim().parse().map_err(|e| format!("bad MIN: {e}"))?;
    let hi: f64 = hi.trim().parse().map_err(|e| format!("bad MAX: {e}"))?;
    Ok((lo, hi))
}

#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Io(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Invalid(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn emit(stdout: &mut dyn Write, contents: &str) -> CliResult<()> {
    stdout
        .write_all(contents.as_bytes())
        .and_then(|()| stdout.flush())
        .map_err(|e| CliError::Io(format!("stdout: {e}")))
}

fn load_machine(path: &Path) -> CliResult<MachineSpec> {
    parse_machine_config(&read(path)?)
        .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

fn load_kernel(path: &Path) -> CliResult<Kernel> {
    parse_kernel_config(&read(path)?)
        .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

fn mlp_only<'a>(kernel: &'a Kernel, command: &str) -> CliResult<&'a MlpKernel> {
    match kernel {
        Kernel::Mlp { spec, .. } => Ok(spec),
        Kernel::Raw { .. } => Err(CliError::Invalid(format!(
            "`{command}` needs a kernel of kind `mlp`"
        ))),
    }
}

fn sweep_table(
    spec: &MlpKernel,
    batches: &[u64],
    machine: &MachineSpec,
    tolerance: f64,
) -> CliResult<SweepTable> {
    Ok(batch_sweep(
        &spec.mlp,
        batches,
        machine,
        &spec.allreduce,
        tolerance,
    )?)
}

/// Runs one command line, writing data to `stdout` and diagnostics to
/// `stderr`, and returns the process exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(rendered.as_bytes());
                    0
                }
                _ => {
                    let _ = stderr.write_all(rendered.as_bytes());
                    1
                }
            };
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    match command {
        Command::Analyze {
            machine,
            kernel,
            json,
            tolerance,
        } => {
            let machine = load_machine(&machine)?;
            let kernel = load_kernel(&kernel)?;
            let report = analyze(&machine, kernel.name(), &kernel.profile()?, tolerance)?;
            let text = if json {
                report.to_json()
            } else {
                report.to_text()
            };
            emit(stdout, &text)
        }
        Command::Sweep {
            machine,
            kernel,
            batches,
            out,
            tolerance,
        } => {
            let machine = load_machine(&machine)?;
            let kernel = load_kernel(&kernel)?;
            let spec = mlp_only(&kernel, "sweep")?;
            let batches = if batches.is_empty() {
                doubling_batches(64, 8192)
            } else {
                batches
            };
            let table = sweep_table(spec, &batches, &machine, tolerance)?;
            let csv = sweep_csv(&table);
            match &out {
                Some(path) => write_file(path, &csv)?,
                None => emit(stdout, &csv)?,
            }
            match table.ratio_crossover() {
                Some(b) => {
                    let _ = writeln!(
                        stderr,
                        "all-reduce/compute ratio crosses 1 at batch {}",
                        number(b)
                    );
                }
                None => {
                    let _ = writeln!(
                        stderr,
                        "all-reduce/compute ratio does not cross 1 in this sweep"
                    );
                }
            }
            Ok(())
        }
        Command::Plot {
            machine,
            kernel,
            kind,
            out,
            batches,
            title,
            tolerance,
        } => {
            let machine = load_machine(&machine)?;
            let kernel = kernel.as_deref().map(load_kernel).transpose()?;
            let placed = match &kernel {
                None => Vec::new(),
                Some(k) if batches.is_empty() => vec![(k.name().to_owned(), k.profile()?)],
                Some(k) => {
                    let spec = mlp_only(k, "plot")?;
                    let mut sorted = batches.clone();
                    sorted.sort_unstable();
                    sorted.dedup();
                    sorted
                        .into_iter()
                        .map(|b| Ok((format!("b={b}"), spec.profile_at(b)?)))
                        .collect::<CliResult<Vec<_>>>()?
                }
            };
            let style = PlotStyle {
                title,
                ..PlotStyle::default()
            };
            let svg = render_plot(&machine, kind, &placed, &style, tolerance)?;
            write_file(&out, &svg)
        }
        Command::Surface {
            machine,
            out,
            resolution,
            format,
            i_a_range,
            i_n_range,
        } => {
            let machine = load_machine(&machine)?;
            let format: SurfaceFormat = format.parse()?;
            let g = ridgeline_geometry(&machine);
            let i_a_range = i_a_range.unwrap_or((g.y_star / 100.0, g.y_star * 100.0));
            let i_n_range = i_n_range.unwrap_or((g.k / 100.0, g.k * 100.0));
            let grid = surface_grid(&machine, i_a_range, i_n_range, (resolution, resolution))?;
            write_file(&out, &export_surface(&grid, format)?)
        }
    }
}

fn render_plot(
    machine: &MachineSpec,
    kind: PlotKind,
    placed: &[(String, KernelProfile)],
    style: &PlotStyle,
    tolerance: f64,
) -> CliResult<String> {
    let curve_kind = match kind {
        PlotKind::Ridgeline => {
            let points = placed
                .iter()
                .map(|(label, profile)| {
                    let point = intensities(profile);
                    let report = project(machine, profile, tolerance)?;
                    let (i_m, i_a) =
                        point
                            .plane_coords()
                            .ok_or_else(|| ModelError::InfinitePoint {
                                label: label.clone(),
                            })?;
                    Ok(RidgelinePoint {
                        i_m,
                        i_a,
                        label: label.clone(),
                        region: report.region,
                        on_boundary: report.on_boundary(),
                    })
                })
                .collect::<Result<Vec<_>, ModelError>>()?;
            return Ok(render_ridgeline(
                &ridgeline_geometry(machine),
                &points,
                style,
            )?);
        }
        PlotKind::RooflineCm => CurveKind::ComputeMemory,
        PlotKind::RooflineMn => CurveKind::MemoryNetwork,
        PlotKind::RooflineCn => CurveKind::ComputeNetwork,
    };
    let knee = curve_kind.knee(machine);
    let curve = roofline_curve(machine, curve_kind, (knee / 100.0, knee * 100.0), 129)?;
    let points = placed
        .iter()
        .map(|(label, profile)| {
            let point = intensities(profile);
            let report = project(machine, profile, tolerance)?;
            let (intensity, throughput) = match curve_kind {
                CurveKind::ComputeMemory => (point.i_a, report.attained_flops),
                CurveKind::ComputeNetwork => (point.i_n, report.attained_flops),
                CurveKind::MemoryNetwork => (point.i_m, profile.mem_bytes() / report.runtime),
            };
            let intensity = intensity.finite().unwrap_or(f64::INFINITY);
            Ok(RooflinePoint {
                intensity,
                throughput,
                label: label.clone(),
                on_boundary: report.on_boundary(),
            })
        })
        .collect::<Result<Vec<_>, ModelError>>()?;
    Ok(render_roofline(&curve, &points, style)?)
}
