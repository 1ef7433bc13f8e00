use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::Vector3;
use serde_json::Value;

use epr_geometry::ansatz::Ansatz;
use epr_geometry::classify::DEFAULT_DIRECTIONS;
use epr_geometry::epr::{epr_map, Side};
use epr_geometry::workbench::{
    analyze, exit_code, export_boundary, load_ansatz, load_state, real, sweep, write_boundary_csv,
    write_sweep_csv, Predicate, Slice, SweepConfig, SweepFamily,
};
use epr_geometry::{Error, Result};

#[derive(Parser)]
#[command(
    name = "eprgeo",
    version,
    about = "Two-qubit separability and steering geometry"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Axis {
    X,
    Y,
    Z,
}

#[derive(Subcommand)]
enum Command {
    /// Full report for one state.
    Analyze {
        /// JSON state file or spec string such as `werner:p=0.4`.
        #[arg(long)]
        state: String,
        /// `uniform`, `quasi_uniform:n=…` or a JSON ansatz file; repeatable.
        #[arg(long, default_value = "uniform")]
        ansatz: Vec<String>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_DIRECTIONS)]
        directions: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Predicate values on a parameter grid and/or bisected thresholds.
    Sweep {
        /// `werner`, `modified_werner:p=…` (over q) or `modified_werner:q=…` (over p).
        #[arg(long, default_value = "werner")]
        family: String,
        #[arg(long, default_value_t = 0.0)]
        lo: f64,
        #[arg(long, default_value_t = 1.0)]
        hi: f64,
        #[arg(long)]
        step: Option<f64>,
        /// Append one threshold row per predicate.
        #[arg(long)]
        bisect: bool,
        #[arg(long, default_value_t = 1e-4)]
        bisect_tol: f64,
        #[arg(long, value_delimiter = ',', default_value = "separable,contained")]
        predicates: Vec<String>,
        #[arg(long, default_value = "uniform")]
        ansatz: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_DIRECTIONS)]
        directions: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Box, steering and light-cone curves in a plane through the X₀ axis.
    Boundary {
        #[arg(long, default_value = "uniform")]
        ansatz: String,
        /// Adds the steering-outcome curve of this state.
        #[arg(long)]
        state: Option<String>,
        #[arg(long, value_enum, default_value = "z")]
        plane: Axis,
        #[arg(long, default_value_t = 2001)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: serde::Serialize>(value: &T, mut w: Box<dyn Write>) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| Error::Io(e.into()))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// `field,value` rows with dotted paths.
fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| flatten(&key(k), x, rows)),
        Value::Array(a) => a
            .iter()
            .enumerate()
            .for_each(|(i, x)| flatten(&key(&i.to_string()), x, rows)),
        Value::Number(n) => rows.push((prefix.into(), n.as_f64().map(real).unwrap_or_default())),
        Value::Bool(b) => rows.push((prefix.into(), b.to_string())),
        Value::String(s) => rows.push((prefix.into(), s.clone())),
        Value::Null => rows.push((prefix.into(), String::new())),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Analyze {
            state,
            ansatz,
            tol,
            directions,
            out,
            format,
        } => {
            let st = load_state(&state)?;
            let ansatze = ansatz
                .iter()
                .map(|a| load_ansatz(a))
                .collect::<Result<Vec<_>>>()?;
            let report = analyze(&st, &ansatze, tol, directions)?;
            match format {
                Format::Json => write_json(&report, sink(&out)?),
                Format::Csv => {
                    let value = serde_json::to_value(&report).map_err(|e| Error::Io(e.into()))?;
                    let mut rows = Vec::new();
                    flatten("", &value, &mut rows);
                    let mut wr = csv::Writer::from_writer(sink(&out)?);
                    let csv = |e: csv::Error| Error::Io(e.into());
                    wr.write_record(["field", "value"]).map_err(csv)?;
                    for (k, v) in rows {
                        wr.write_record([k, v]).map_err(csv)?;
                    }
                    wr.flush()?;
                    Ok(())
                }
            }
        }
        Command::Sweep {
            family,
            lo,
            hi,
            step,
            bisect,
            bisect_tol,
            predicates,
            ansatz,
            tol,
            directions,
            out,
            format,
        } => {
            let cfg = SweepConfig {
                family: SweepFamily::parse(&family)?,
                lo,
                hi,
                step: step.or(if bisect { None } else { Some(0.01) }),
                bisect_tol: bisect.then_some(bisect_tol),
                predicates: predicates
                    .iter()
                    .map(|p| Predicate::parse(p))
                    .collect::<Result<_>>()?,
                ansatz: load_ansatz(&ansatz)?,
                tol,
                n_directions: directions,
            };
            let result = sweep(&cfg)?;
            match format {
                Format::Csv => write_sweep_csv(&result, sink(&out)?),
                Format::Json => write_json(&result, sink(&out)?),
            }
        }
        Command::Boundary {
            ansatz,
            state,
            plane,
            points,
            out,
            format,
        } => {
            let named = load_ansatz(&ansatz)?;
            let Ansatz::Spherical(sph) = named.ansatz else {
                return Err(Error::InvalidInput(
                    "boundary export needs a spherical ansatz".into(),
                ));
            };
            let map = state
                .map(|s| load_state(&s).map(|st| epr_map(&st, Side::AliceToBob)))
                .transpose()?;
            let d = match plane {
                Axis::X => Vector3::x(),
                Axis::Y => Vector3::y(),
                Axis::Z => Vector3::z(),
            };
            let pts = export_boundary(&sph, map.as_ref(), &Slice::new(d, points)?)?;
            match format {
                Format::Csv => write_boundary_csv(&pts, sink(&out)?),
                Format::Json => write_json(&pts, sink(&out)?),
            }
        }
    }
}
