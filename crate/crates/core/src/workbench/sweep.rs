//! Parameter sweeps over the Werner and modified-Werner families.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::input::{parse_spec_string, NamedAnsatz};
use super::real;
use crate::classify::packing::VERTEX_TOL;
use crate::classify::{check_packing, decide_separable, is_ppt, threshold_scan};
use crate::epr::{epr_map, Side, TwoQubitState};
use crate::error::{Error, Result};
use crate::states::{build, StateSpec};

/// A one-parameter family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SweepFamily {
    /// Varies `p`.
    Werner,
    /// Varies `q` at fixed `p`.
    ModifiedWernerOverQ { p: f64 },
    /// Varies `p` at fixed `q`.
    ModifiedWernerOverP { q: f64 },
}

impl SweepFamily {
    /// `werner`, `modified_werner:p=…` (sweeps q) or `modified_werner:q=…`
    /// (sweeps p).
    pub fn parse(s: &str) -> Result<Self> {
        let (name, params) = parse_spec_string(s)?;
        let loc = format!("family '{s}'");
        let keys: Vec<&str> = params.keys().map(String::as_str).collect();
        match (name.as_str(), keys.as_slice()) {
            ("werner", []) => Ok(SweepFamily::Werner),
            ("modified_werner", ["p"]) => Ok(SweepFamily::ModifiedWernerOverQ { p: params["p"] }),
            ("modified_werner", ["q"]) => Ok(SweepFamily::ModifiedWernerOverP { q: params["q"] }),
            ("werner", _) => Err(Error::parse(loc, "werner sweeps take no fixed parameters")),
            ("modified_werner", _) => Err(Error::parse(loc, "fix exactly one of p or q")),
            _ => Err(Error::parse(loc, format!("unknown family '{name}'"))),
        }
    }

    pub fn state(&self, t: f64) -> Result<TwoQubitState> {
        build(&match *self {
            SweepFamily::Werner => StateSpec::Werner { p: t },
            SweepFamily::ModifiedWernerOverQ { p } => StateSpec::ModifiedWerner { p, q: t },
            SweepFamily::ModifiedWernerOverP { q } => StateSpec::ModifiedWerner { p: t, q },
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Predicate {
    Separable,
    Contained,
}

impl Predicate {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "separable" => Ok(Predicate::Separable),
            "contained" => Ok(Predicate::Contained),
            other => Err(Error::parse(
                "predicate",
                format!("unknown predicate '{other}'"),
            )),
        }
    }

    fn column(self) -> usize {
        match self {
            Predicate::Separable => 3,
            Predicate::Contained => 4,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub family: SweepFamily,
    pub lo: f64,
    pub hi: f64,
    /// Grid spacing of the row sweep; no rows when absent.
    pub step: Option<f64>,
    /// Bisection tolerance; no thresholds when absent.
    pub bisect_tol: Option<f64>,
    pub predicates: Vec<Predicate>,
    pub ansatz: NamedAnsatz,
    pub tol: f64,
    pub n_directions: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub param: f64,
    pub ppt_min_eig: f64,
    /// Absent when the ansatz vertex misses the reduced state.
    pub packing_slack: Option<f64>,
    pub separable: bool,
    pub contained: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Threshold {
    pub predicate: Predicate,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepOutput {
    pub rows: Vec<SweepRow>,
    pub thresholds: Vec<Threshold>,
}

pub const SWEEP_HEADER: [&str; 5] = [
    "param",
    "ppt_min_eig",
    "packing_slack",
    "separable",
    "contained",
];

/// Row grid `lo + k·step` for `k = 0, …, round((hi − lo)/step)`; empty when
/// `lo > hi`.
pub fn grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "step must be positive, got {step}"
        )));
    }
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::InvalidInput("non-finite sweep range".into()));
    }
    if lo > hi {
        return Ok(Vec::new());
    }
    let n = ((hi - lo) / step).round() as usize + 1;
    Ok((0..n)
        .map(|k| {
            if k + 1 == n && n > 1 {
                hi
            } else {
                lo + k as f64 * step
            }
        })
        .collect())
}

fn row(cfg: &SweepConfig, t: f64) -> Result<SweepRow> {
    let state = cfg.family.state(t)?;
    let (separable, ppt_min_eig) = is_ppt(&state, cfg.tol);
    let map = epr_map(&state, Side::AliceToBob);
    let (packing_slack, contained) = if cfg
        .ansatz
        .ansatz
        .principal_vertex()
        .max_abs_diff(&map.vertex())
        <= VERTEX_TOL
    {
        let c = check_packing(&map, &cfg.ansatz.ansatz, cfg.tol, cfg.n_directions)?;
        (Some(c.slack), Some(c.contained))
    } else {
        (None, None)
    };
    Ok(SweepRow {
        param: t,
        ppt_min_eig,
        packing_slack,
        separable,
        contained,
    })
}

pub fn sweep(cfg: &SweepConfig) -> Result<SweepOutput> {
    let rows = match cfg.step {
        Some(step) => grid(cfg.lo, cfg.hi, step)?
            .into_par_iter()
            .map(|t| row(cfg, t))
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    let mut thresholds = Vec::new();
    if let Some(btol) = cfg.bisect_tol {
        if cfg.lo <= cfg.hi {
            for &pred in &cfg.predicates {
                let family = |t: f64| cfg.family.state(t);
                let value = match pred {
                    Predicate::Separable => threshold_scan(
                        family,
                        |s: &TwoQubitState| Ok(decide_separable(s, cfg.tol).separable),
                        cfg.lo,
                        cfg.hi,
                        btol,
                    )?,
                    Predicate::Contained => threshold_scan(
                        family,
                        |s: &TwoQubitState| {
                            let map = epr_map(s, Side::AliceToBob);
                            Ok(
                                check_packing(&map, &cfg.ansatz.ansatz, cfg.tol, cfg.n_directions)?
                                    .contained,
                            )
                        },
                        cfg.lo,
                        cfg.hi,
                        btol,
                    )?,
                };
                thresholds.push(Threshold {
                    predicate: pred,
                    value,
                });
            }
        }
    }
    Ok(SweepOutput { rows, thresholds })
}

/// Grid rows, then one row per threshold with the value under `param` and
/// the literal `threshold` in that predicate's column.
pub fn write_sweep_csv<W: Write>(out: &SweepOutput, w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(SWEEP_HEADER).map_err(csv_err)?;
    for r in &out.rows {
        wr.write_record([
            real(r.param),
            real(r.ppt_min_eig),
            r.packing_slack.map(real).unwrap_or_default(),
            r.separable.to_string(),
            r.contained.map(|c| c.to_string()).unwrap_or_default(),
        ])
        .map_err(csv_err)?;
    }
    for t in &out.thresholds {
        let mut rec = vec![String::new(); 5];
        rec[0] = real(t.value);
        rec[t.predicate.column()] = "threshold".into();
        wr.write_record(&rec).map_err(csv_err)?;
    }
    wr.flush()?;
    Ok(())
}

pub(crate) fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::InvalidInput(format!("csv: {other:?}")),
    }
}
