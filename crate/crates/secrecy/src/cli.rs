//! Command-line front end.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::config::{RawConfig, Settings};
use secrecy_core::McResult;

use crate::experiment::{agreement_sigma, evaluate_all, expand, optimize, Row, Tasks};
use crate::figures::{self, FigureId};
use crate::output::{write_rows, Format};
use crate::plot;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "secrecy",
    version,
    about = "Secrecy outage and secure energy efficiency of relay-assisted TAS/MRC links"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Flat TOML file of settings.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Override one setting; repeatable and applied after the config file.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Monte Carlo trials per point.
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// Monte Carlo seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory; tables go to stdout when omitted (except for
    /// `reproduce`, which defaults to `figures`).
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form SOP over the sweep.
    Sop,
    /// Closed-form SOP against Monte Carlo; exits with 2 on disagreement.
    Validate,
    /// Closed-form SOP, consumed power and SEE over the sweep.
    See,
    /// Joint SEE maximization at every point of the non-power, non-rate axes.
    Optimize,
    /// Regenerate the data and plot of a figure.
    Reproduce {
        /// 1, 2, 3, 4, 5a, 5b or all.
        #[arg(long)]
        figure: String,
    },
    /// Closed form, SEE and Monte Carlo over the sweep.
    Sweep,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Config(#[from] crate::config::ConfigError),
    #[error(transparent)]
    Figure(#[from] figures::UnknownFigure),
    #[error("cannot write {path}: {message}")]
    Write { path: String, message: String },
}

fn write_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Write {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

/// Runs the program on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn settings(c: &Common) -> Result<Settings, CliError> {
    let mut raw = match &c.config {
        Some(path) => RawConfig::from_file(path)?,
        None => RawConfig::default(),
    };
    for s in &c.set {
        raw.set(s)?;
    }
    if let Some(t) = c.trials {
        raw.set(&format!("trials={t}"))?;
    }
    if let Some(seed) = c.seed {
        raw.set(&format!("seed={seed}"))?;
    }
    Ok(raw.resolve()?)
}

fn dispatch(cli: &Cli) -> Result<i32, CliError> {
    let c = &cli.common;
    if let Command::Reproduce { figure } = &cli.command {
        let ids = if figure.eq_ignore_ascii_case("all") {
            FigureId::ALL.to_vec()
        } else {
            vec![figure.parse::<FigureId>()?]
        };
        let s = settings(c)?;
        return reproduce(&s, &ids, c.out.as_deref().unwrap_or(Path::new("figures")), c.format);
    }
    let s = settings(c)?;
    let points = expand(&s);
    let (name, rows) = match cli.command {
        Command::Sop => ("sop", evaluate_all(&s, &points, tasks(false, false), "")),
        Command::See => ("see", evaluate_all(&s, &points, tasks(true, false), "")),
        Command::Validate => ("validate", evaluate_all(&s, &points, tasks(false, true), "")),
        Command::Sweep => ("sweep", evaluate_all(&s, &points, tasks(true, true), "")),
        Command::Optimize => ("optimize", optimize_points(&s)),
        Command::Reproduce { .. } => unreachable!("handled above"),
    };
    emit(&rows, name, c)?;
    if matches!(cli.command, Command::Validate | Command::Sweep) {
        warn_rare_events(&rows);
    }
    if matches!(cli.command, Command::Validate) {
        return Ok(report_validation(&rows));
    }
    Ok(EXIT_OK)
}

fn tasks(see: bool, monte_carlo: bool) -> Tasks {
    Tasks {
        closed_form: true,
        see,
        monte_carlo,
    }
}

/// The sweep with the power and rate axes collapsed, since those are what
/// the optimizer chooses.
fn optimize_points(s: &Settings) -> Vec<Row> {
    let collapsed = Settings {
        p_a_w: vec![s.system.p_max_w],
        p_r_w: Some(vec![s.system.p_max_w]),
        rate: vec![s.rate[0]],
        ..s.clone()
    };
    let points = if s.rate.is_empty() || s.p_a_w.is_empty() {
        Vec::new()
    } else {
        expand(&collapsed)
    };
    points.par_iter().map(|p| optimize(s, p, &[], "joint").0).collect()
}

fn emit(rows: &[Row], name: &str, c: &Common) -> Result<(), CliError> {
    match &c.out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| write_err(dir, e))?;
            let path = dir.join(format!("{name}.{}", c.format.extension()));
            write_file(rows, &path, c.format)
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write_rows(rows, c.format, &mut lock).map_err(|e| write_err(Path::new("<stdout>"), e))?;
            lock.flush().map_err(|e| write_err(Path::new("<stdout>"), e))
        }
    }
}

fn write_file(rows: &[Row], path: &Path, format: Format) -> Result<(), CliError> {
    let file = File::create(path).map_err(|e| write_err(path, e))?;
    let mut w = BufWriter::new(file);
    write_rows(rows, format, &mut w).map_err(|e| write_err(path, e))?;
    w.flush().map_err(|e| write_err(path, e))
}

fn warn_rare_events(rows: &[Row]) {
    for r in rows {
        if let (Some(p), Some(n)) = (r.sop_mc, r.trials) {
            if p < 10.0 / n as f64 {
                eprintln!(
                    "warning: {} at p_a={} p_r={} rate={} saw fewer than 10 outages in {n} trials",
                    r.scheme, r.p_a_w, r.p_r_w, r.rate_bpshz
                );
            }
        }
    }
}

/// Prints one line per point and returns the exit code.
fn report_validation(rows: &[Row]) -> i32 {
    let mut failures = 0;
    for r in rows {
        if r.is_error() {
            eprintln!("skip {} n=({},{},{},{}): {}", r.scheme, r.n_a, r.n_b, r.n_r, r.n_e, r.error);
            continue;
        }
        let (Some(cf), Some(mc), Some(se), Some(n)) = (r.sop, r.sop_mc, r.sop_mc_stderr, r.trials) else {
            continue;
        };
        let mc_result = McResult {
            estimate: mc,
            trials: n,
            std_err: se,
            seed: r.seed.unwrap_or_default(),
        };
        let bound = 3.0 * agreement_sigma(cf, &mc_result);
        let ok = r.mc_agree == Some(true);
        failures += usize::from(!ok);
        eprintln!(
            "{} {} p_a={:.4e} p_r={:.4e} rate={} closed={cf:.6} mc={mc:.6} |diff|={:.2e} 3sigma={bound:.2e}",
            if ok { "pass" } else { "FAIL" },
            r.scheme,
            r.p_a_w,
            r.p_r_w,
            r.rate_bpshz,
            (cf - mc).abs()
        );
    }
    eprintln!("{} points, {failures} disagreements", rows.len());
    if failures > 0 {
        EXIT_VALIDATION
    } else {
        EXIT_OK
    }
}

fn reproduce(s: &Settings, ids: &[FigureId], dir: &Path, format: Format) -> Result<i32, CliError> {
    fs::create_dir_all(dir).map_err(|e| write_err(dir, e))?;
    for &id in ids {
        let fig = figures::build(id, s);
        let stem = id.file_stem();
        let table = dir.join(format!("{stem}.{}", format.extension()));
        write_file(&fig.rows, &table, format)?;
        let svg = dir.join(format!("{stem}.svg"));
        plot::render(&fig.chart, &svg).map_err(|e| write_err(&svg, e))?;
        eprintln!("figure {id}: {} rows -> {} and {}", fig.rows.len(), table.display(), svg.display());
    }
    Ok(EXIT_OK)
}
