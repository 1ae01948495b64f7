use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nodal_core::field::{sample, GridSpec};
use nodal_core::plot::{self, render, render_cube_slices, Size};
use nodal_core::scenarios::{self, run_setup, setup, Setup};
use nodal_core::spectra::{enumerate_spectrum, kappa, parallelepiped_table, table3_coefficients, write_spectrum_csv};
use nodal_core::{PlotError, ScenarioConfig, ScenarioError, ScenarioResult, SpectraError};
use thiserror::Error;

mod domain;

/// Nodal domains of Laplace eigenfunction combinations.
#[derive(Parser, Debug)]
#[command(name = "nodal", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List distinct eigenvalues up to a limit.
    Spectrum {
        #[arg(long)]
        domain: String,
        #[arg(long)]
        limit: f64,
        /// Write the table as CSV instead of printing it.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Minimal index of an eigenvalue.
    Kappa {
        #[arg(long)]
        domain: String,
        #[arg(long)]
        lambda: f64,
    },
    /// Run a scenario from a JSON configuration file.
    Count {
        #[arg(long)]
        scenario_file: PathBuf,
        #[command(flatten)]
        out: Outputs,
    },
    /// Run a named scenario.
    Scenario {
        #[command(flatten)]
        run: Named,
        #[command(flatten)]
        out: Outputs,
    },
    /// Draw a named scenario without counting.
    Plot {
        #[command(flatten)]
        run: Named,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        style: Style,
    },
    /// First twelve Dirichlet eigenvalues of the perturbed cube.
    Table3,
    /// Count every basis eigenfunction of the first spectrum entries.
    Audit {
        #[arg(long)]
        domain: String,
        #[arg(long, default_value_t = 10)]
        entries: usize,
        #[arg(long, default_value_t = 64)]
        resolution: usize,
    },
}

#[derive(Args, Debug)]
struct Named {
    #[arg(long)]
    name: String,
    /// Scenario parameter, repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE", value_parser = parse_param)]
    params: Vec<(String, f64)>,
    #[arg(long)]
    resolution: Option<usize>,
    #[arg(long)]
    max_refinements: Option<usize>,
}

impl Named {
    fn config(&self) -> ScenarioConfig {
        let mut cfg = ScenarioConfig::new(&self.name);
        for (k, v) in &self.params {
            cfg.params.insert(k.clone(), *v);
        }
        cfg.resolution = self.resolution;
        if let Some(m) = self.max_refinements {
            cfg.max_refinements = m;
        }
        cfg
    }
}

#[derive(Args, Debug)]
struct Outputs {
    /// Also write the result JSON here.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write a figure; a directory gets `<scenario>_<params>.svg`.
    #[arg(long)]
    svg: Option<PathBuf>,
    #[command(flatten)]
    style: Style,
}

#[derive(Args, Debug)]
struct Style {
    #[arg(long, default_value_t = 640)]
    width: u32,
    #[arg(long, default_value_t = 320)]
    height: u32,
    /// Shade positive and negative cells.
    #[arg(long)]
    shade: bool,
    /// Slice levels for three-dimensional fields, comma separated.
    #[arg(long, value_delimiter = ',')]
    levels: Vec<f64>,
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected KEY=VALUE, got {s:?}"))?;
    let v: f64 = v.trim().parse().map_err(|e| format!("{k}: {e}"))?;
    Ok((k.trim().to_string(), v))
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Plot(#[from] PlotError),
    #[error("invalid scenario file: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Scenario(ScenarioError::Unstable(_)) => 3,
            CliError::Io(_) => 1,
            _ => 2,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    let mut stdout = io::stdout().lock();
    match command {
        Command::Spectrum { domain, limit, csv } => {
            let d = domain::parse(&domain).map_err(CliError::Domain)?;
            let entries = enumerate_spectrum(&d, limit)?;
            match csv {
                Some(path) => write_spectrum_csv(&entries, fs::File::create(path)?)?,
                None => {
                    writeln!(stdout, "{:>4} {:>14} {:>4}  modes", "k", "eigenvalue", "mult")?;
                    for e in &entries {
                        let modes: Vec<String> = e.modes.iter().map(|m| m.index.to_string()).collect();
                        writeln!(stdout, "{:>4} {:>14.6} {:>4}  {}", e.kappa, e.eigenvalue, e.multiplicity, modes.join(" "))?;
                    }
                }
            }
        }
        Command::Kappa { domain, lambda } => {
            let d = domain::parse(&domain).map_err(CliError::Domain)?;
            writeln!(stdout, "{}", kappa(&d, lambda)?)?;
        }
        Command::Count { scenario_file, out } => {
            let cfg: ScenarioConfig = serde_json::from_str(&fs::read_to_string(scenario_file)?)?;
            counted(&cfg, &out, &mut stdout)?;
        }
        Command::Scenario { run, out } => counted(&run.config(), &out, &mut stdout)?,
        Command::Plot { run, out, style } => {
            let cfg = run.config();
            let s = setup(&cfg)?;
            write_figure(&figure(&s, &style)?, &out, &cfg)?;
        }
        Command::Table3 => {
            writeln!(stdout, "{:>5}  {:<9}  {:>9}", "index", "triple", "delta")?;
            for row in parallelepiped_table(table3_coefficients())? {
                let [a, b, c] = row.triple;
                writeln!(stdout, "{:>5}  ({a},{b},{c})    {:>9.3}", row.index, row.eigenvalue)?;
            }
        }
        Command::Audit { domain, entries, resolution } => {
            let d = domain::parse(&domain).map_err(CliError::Domain)?;
            let rows = scenarios::courant_audit(&d, entries, resolution)?;
            writeln!(stdout, "{:<16} {:>12} {:>5} {:>4} {:>5}  verdict", "mode", "eigenvalue", "kappa", "mult", "beta0")?;
            for r in &rows {
                let verdict = match (r.stable, r.ok) {
                    (false, _) => "unstable",
                    (true, true) => "ok",
                    (true, false) => "VIOLATION",
                };
                writeln!(
                    stdout,
                    "{:<16} {:>12.6} {:>5} {:>4} {:>5}  {verdict}",
                    r.mode, r.eigenvalue, r.kappa, r.multiplicity, r.beta0
                )?;
            }
        }
    }
    Ok(())
}

fn counted(cfg: &ScenarioConfig, out: &Outputs, stdout: &mut impl Write) -> Result<(), CliError> {
    let s = setup(cfg)?;
    let result: ScenarioResult = run_setup(&s, false)?;
    let text = serde_json::to_string_pretty(&result)? + "\n";
    stdout.write_all(text.as_bytes())?;
    if let Some(path) = &out.json {
        fs::write(path, &text)?;
    }
    if let Some(path) = &out.svg {
        write_figure(&figure(&s, &out.style)?, path, cfg)?;
    }
    Ok(())
}

fn figure(s: &Setup, style: &Style) -> Result<String, CliError> {
    let size = Size::new(style.width, style.height);
    let field = s.field();
    match s.chart.dimension() {
        2 => {
            let cells = s.chart.default_cells(s.config.resolution.unwrap_or(64));
            let lines = nodal_core::field::extract_nodal_lines(&field, &s.chart, [cells[0], cells[1]])
                .map_err(ScenarioError::from)?;
            let shading = if style.shade {
                let grid = GridSpec::new(s.chart.clone(), cells).map_err(ScenarioError::from)?;
                Some(sample(&field, &grid, &s.cracks).map_err(ScenarioError::from)?)
            } else {
                None
            };
            Ok(render(&s.chart, &s.cracks, &lines, shading.as_ref(), size)?)
        }
        _ => {
            let levels = if style.levels.is_empty() { plot::default_levels() } else { style.levels.clone() };
            Ok(render_cube_slices(&field, &s.chart, &levels, size)?)
        }
    }
}

fn write_figure(svg: &str, path: &Path, cfg: &ScenarioConfig) -> Result<(), CliError> {
    let path = if path.is_dir() { path.join(figure_name(cfg)) } else { path.to_path_buf() };
    fs::write(path, svg)?;
    Ok(())
}

/// `<scenario>_<k=v>_..svg` from the explicitly given parameters.
fn figure_name(cfg: &ScenarioConfig) -> String {
    let mut name = cfg.name.clone();
    for (k, v) in &cfg.params {
        name.push_str(&format!("_{k}={v}"));
    }
    name + ".svg"
}
