//! The per-state analysis report.

use serde::Serialize;

use super::input::NamedAnsatz;
use crate::classify::packing::VERTEX_TOL;
use crate::classify::{check_packing, decide_separable, DecisionMethod};
use crate::epr::{
    epr_map, reduced_state, steering_ellipsoid, EllipsoidReport, Party, Side, TwoQubitState,
};
use crate::error::Result;
use crate::pauli::PauliVector;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PptSummary {
    pub passes: bool,
    pub min_eigenvalue: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparabilitySummary {
    pub separable: bool,
    pub method: DecisionMethod,
    /// Generators of the verified 4-generator box, when one was found.
    pub certificate: Option<Vec<PauliVector>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PackingSummary {
    pub ansatz: String,
    /// False when the ansatz vertex is not Bob's reduced state.
    pub applicable: bool,
    pub contained: Option<bool>,
    pub slack: Option<f64>,
    pub witness: Option<PauliVector>,
    pub directions_checked: Option<usize>,
    pub degenerate_fallback: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub theta: [[f64; 4]; 4],
    pub reduced_a: PauliVector,
    pub reduced_b: PauliVector,
    /// Absent when Alice's reduced state is pure.
    pub ellipsoid: Option<EllipsoidReport>,
    pub ppt: PptSummary,
    pub separability: SeparabilitySummary,
    pub packing: Vec<PackingSummary>,
}

pub fn analyze(
    state: &TwoQubitState,
    ansatze: &[NamedAnsatz],
    tol: f64,
    n_directions: usize,
) -> Result<AnalysisReport> {
    let map = epr_map(state, Side::AliceToBob);
    let reduced_b = reduced_state(state, Party::B);
    let decision = decide_separable(state, tol);
    let mut packing = Vec::with_capacity(ansatze.len());
    for named in ansatze {
        let vertex = named.ansatz.principal_vertex();
        if vertex.max_abs_diff(&map.vertex()) > VERTEX_TOL {
            packing.push(PackingSummary {
                ansatz: named.label.clone(),
                applicable: false,
                contained: None,
                slack: None,
                witness: None,
                directions_checked: None,
                degenerate_fallback: None,
            });
            continue;
        }
        let cert = check_packing(&map, &named.ansatz, tol, n_directions)?;
        packing.push(PackingSummary {
            ansatz: named.label.clone(),
            applicable: true,
            contained: Some(cert.contained),
            slack: Some(cert.slack),
            witness: cert.witness,
            directions_checked: Some(cert.directions_checked),
            degenerate_fallback: Some(cert.degenerate_fallback),
        });
    }
    Ok(AnalysisReport {
        theta: state.theta_rows(),
        reduced_a: reduced_state(state, Party::A),
        reduced_b,
        ellipsoid: steering_ellipsoid(state).ok(),
        ppt: PptSummary {
            passes: decision.separable,
            min_eigenvalue: decision.ppt_min_eigenvalue,
        },
        separability: SeparabilitySummary {
            separable: decision.separable,
            method: decision.method,
            certificate: decision.certificate.map(|c| c.generators().to_vec()),
        },
        packing,
    })
}
