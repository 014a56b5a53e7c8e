//! `spincirc` command-line front end.

pub mod config;
pub mod output;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{
    backscatter_report, builtin_scenarios, closed_form_points, cross_peak_candidates,
    find_circulator_points_in, find_complete_routing, sweep_model, Candidate, Model,
    DEFAULT_THRESHOLD,
};
use crate::error::{Error, Result};
use crate::model::{catalog, load_preset, Topology};
use crate::validation::{run_all, DEFAULT_SAMPLES, DEFAULT_SEED};

pub use config::{parse_config, parse_scenarios, Config};
pub use output::write_csv;

const UNIT_NOTE: &str = "\
Units: every frequency, rate and detuning is an angular frequency in rad/s.
Rates quoted in kHz or MHz map to 1e3 and 1e6 rad/s with no factor of 2*pi
(29 kHz -> 29e3, 1.2 MHz -> 1.2e6).";

#[derive(Debug, Parser)]
#[command(name = "spincirc", version, about = "Single-photon circulation in two spinning resonators", after_help = UNIT_NOTE)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// JSON configuration file
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Built-in parameter set (see `spincirc preset --list`)
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
}

#[derive(Debug, Args)]
struct Sink {
    /// Write results here instead of standard output
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct Range {
    /// Lower detuning bound, rad/s
    #[arg(long, allow_negative_numbers = true)]
    delta_min: Option<f64>,
    /// Upper detuning bound, rad/s
    #[arg(long, allow_negative_numbers = true)]
    delta_max: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Transmission spectrum T_{i->j}(delta) over a uniform grid
    #[command(after_help = UNIT_NOTE)]
    Spectrum {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        range: Range,
        #[arg(long, default_value_t = 2001)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        sink: Sink,
    },
    /// Complex scattering matrix and transmission at one detuning
    #[command(after_help = UNIT_NOTE)]
    Smatrix {
        #[command(flatten)]
        source: Source,
        /// Detuning, rad/s
        #[arg(long, allow_negative_numbers = true)]
        delta: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        sink: Sink,
    },
    /// Circulator points with direction labels and closed-form candidates
    #[command(after_help = UNIT_NOTE)]
    Points {
        #[command(flatten)]
        source: Source,
        /// Minimum circulation fidelity (worst hop transmission)
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
        #[command(flatten)]
        range: Range,
        #[command(flatten)]
        sink: Sink,
    },
    /// Search for complete routing between the waveguides under opposite rotation
    #[command(after_help = UNIT_NOTE)]
    Routing {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        sink: Sink,
    },
    /// Peak cross transmission T_{1->3} for backscattering scenarios
    #[command(after_help = UNIT_NOTE)]
    Robustness {
        /// JSON list of configurations, each with an extra "label" key;
        /// defaults to the built-in scenarios
        #[arg(long, value_name = "PATH")]
        scenario_file: Option<PathBuf>,
        #[command(flatten)]
        range: Range,
        #[command(flatten)]
        sink: Sink,
    },
    /// List or show built-in parameter sets
    Preset {
        #[command(flatten)]
        which: PresetQuery,
        #[command(flatten)]
        sink: Sink,
    },
    /// Run the seeded invariant suites
    Validate {
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        sink: Sink,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct PresetQuery {
    #[arg(long)]
    list: bool,
    #[arg(long, value_name = "NAME")]
    show: Option<String>,
}

/// Parameters resolved from `--preset` or `--config`.
struct Resolved {
    model: Model,
    default_range: (f64, f64),
}

fn read_file(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn resolve(source: &Source) -> Result<Resolved> {
    if let Some(name) = &source.preset {
        let p = load_preset(name)?;
        let rp = p.reduced()?;
        let model = match p.topology {
            Topology::Pair => Model::pair(rp),
            Topology::Single => Model::single(rp),
        };
        return Ok(Resolved {
            model,
            default_range: (p.sweep_min, p.sweep_max),
        });
    }
    let path = source.config.as_ref().expect("clap enforces one source");
    let config = parse_config(&read_file(path)?)?;
    let rp = config.reduced()?;
    let span = 4.0 * rp.scale();
    Ok(Resolved {
        model: Model::pair(rp),
        default_range: (-span, span),
    })
}

fn bounds(range: &Range, default: (f64, f64)) -> (f64, f64) {
    (
        range.delta_min.unwrap_or(default.0),
        range.delta_max.unwrap_or(default.1),
    )
}

fn with_sink<F>(sink: &Sink, stdout: &mut dyn Write, f: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    match &sink.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            f(&mut w)?;
            w.flush()?;
            Ok(())
        }
        None => f(stdout),
    }
}

#[derive(Serialize)]
struct PointsJson {
    threshold: f64,
    delta_min: f64,
    delta_max: f64,
    points: Vec<crate::analysis::CirculatorPoint>,
    /// Roots of the real part of each block determinant; `null` with
    /// backscattering or for the single-resonator model.
    candidates: Option<Vec<Candidate>>,
    /// Cross-transmission peak positions.
    cross_peaks: Option<Vec<Candidate>>,
}

#[derive(Serialize)]
struct PresetJson<'a> {
    #[serde(flatten)]
    preset: &'a crate::model::Preset,
    reduced: crate::model::ReducedParams,
}

#[derive(Serialize)]
struct ValidateJson<'a> {
    samples: usize,
    seed: u64,
    passed: bool,
    suites: &'a [crate::validation::SuiteResult],
}

/// Outcome of a subcommand: `Ok(true)` success, `Ok(false)` a failed check.
fn execute(command: Command, stdout: &mut dyn Write) -> Result<bool> {
    match command {
        Command::Spectrum {
            source,
            range,
            steps,
            format,
            sink,
        } => {
            let r = resolve(&source)?;
            let (lo, hi) = bounds(&range, r.default_range);
            let result = sweep_model(&r.model, lo, hi, steps)?;
            with_sink(&sink, stdout, |w| match format {
                Format::Csv => output::write_csv(&result, w),
                Format::Json => output::write_spectrum_json(&result, w),
            })?;
        }
        Command::Smatrix {
            source,
            delta,
            format,
            sink,
        } => {
            let r = resolve(&source)?;
            if !delta.is_finite() {
                return Err(Error::invalid(
                    "delta",
                    format!("must be finite, got {delta}"),
                ));
            }
            let s = r.model.smatrix(delta)?;
            with_sink(&sink, stdout, |w| match format {
                Format::Csv => output::write_smatrix_csv(&s, w),
                Format::Json => output::write_json(&output::SMatrixJson::from(&s), w),
            })?;
        }
        Command::Points {
            source,
            threshold,
            range,
            sink,
        } => {
            let r = resolve(&source)?;
            let (lo, hi) = bounds(&range, r.default_range);
            let points = find_circulator_points_in(&r.model, lo, hi, threshold)?;
            let analytic = r.model.topology == Topology::Pair && !r.model.params.has_backscatter();
            let doc = PointsJson {
                threshold,
                delta_min: lo,
                delta_max: hi,
                points,
                candidates: analytic
                    .then(|| closed_form_points(&r.model.params))
                    .transpose()?,
                cross_peaks: analytic
                    .then(|| cross_peak_candidates(&r.model.params))
                    .transpose()?,
            };
            with_sink(&sink, stdout, |w| output::write_json(&doc, w))?;
        }
        Command::Routing { source, sink } => {
            let r = resolve(&source)?;
            if r.model.topology != Topology::Pair {
                return Err(Error::Precondition(
                    "routing needs the two-resonator model".into(),
                ));
            }
            let report = find_complete_routing(&r.model.params)?;
            with_sink(&sink, stdout, |w| output::write_json(&report, w))?;
        }
        Command::Robustness {
            scenario_file,
            range,
            sink,
        } => {
            let scenarios = match &scenario_file {
                Some(path) => parse_scenarios(&read_file(path)?)?,
                None => builtin_scenarios()?,
            };
            let (lo, hi) = bounds(&range, (-1e7, 1e7));
            let report = backscatter_report(&scenarios, lo, hi)?;
            with_sink(&sink, stdout, |w| output::write_json(&report, w))?;
        }
        Command::Preset { which, sink } => {
            if which.list {
                with_sink(&sink, stdout, |w| {
                    for p in catalog() {
                        writeln!(w, "{:<14} {}", p.name, p.label)?;
                    }
                    Ok(())
                })?;
            } else {
                let name = which.show.expect("clap enforces one query");
                let preset = load_preset(&name)?;
                let doc = PresetJson {
                    reduced: preset.reduced()?,
                    preset: &preset,
                };
                with_sink(&sink, stdout, |w| output::write_json(&doc, w))?;
            }
        }
        Command::Validate {
            samples,
            seed,
            sink,
        } => {
            if samples == 0 {
                return Err(Error::invalid("samples", "must be >= 1"));
            }
            let suites = run_all(samples, seed);
            let passed = suites.iter().all(|s| s.passed);
            with_sink(&sink, stdout, |w| {
                writeln!(w, "{:<34} {:<6} detail", "suite", "result")?;
                for s in &suites {
                    let tag = if s.passed { "pass" } else { "FAIL" };
                    writeln!(w, "{:<34} {:<6} {}", s.name, tag, s.detail)?;
                }
                writeln!(
                    w,
                    "{}",
                    if passed {
                        "all suites passed"
                    } else {
                        "some suites FAILED"
                    }
                )?;
                Ok(())
            })?;
            if let Some(path) = &sink.out {
                // Machine-readable copy next to the table.
                let json = path.with_extension("json");
                let doc = ValidateJson {
                    samples,
                    seed,
                    passed,
                    suites: &suites,
                };
                output::write_json(&doc, BufWriter::new(File::create(json)?))?;
            }
            return Ok(passed);
        }
    }
    Ok(true)
}

/// Runs the command line `args` (program name first) and returns the exit
/// code: 0 success, 1 user error, 2 numerical failure or failed validation.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    1
                }
            };
        }
    };
    match execute(cli.command, stdout) {
        Ok(true) => 0,
        Ok(false) => 2,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_numerical() {
                2
            } else {
                1
            }
        }
    }
}
