//! Local-hidden-state responses realizing a steering outcome inside a box.

use nalgebra::{DMatrix, DVector, Vector3};

use super::stochastic::StochasticMatrix;
use crate::ansatz::{Ansatz, FiniteAnsatz, SphericalAnsatz};
use crate::classify::packing::VERTEX_TOL;
use crate::epr::{apply_map, EprMap};
use crate::error::{Error, Result};
use crate::pauli::{classify_cone, PauliVector, CONE_TOL};

/// Reconstructions further than this from the target are rejected.
pub const RESIDUAL_TOL: f64 = 1e-8;

/// Parameters of the response `f = s·1{n̂₀·n̂ > λ} + τ` for the uniform
/// ansatz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapResponse {
    pub lambda: f64,
    pub axis: Vector3<f64>,
    pub scaling: f64,
    pub offset: f64,
}

/// Weights `βⱼ ∈ [0, 1]` on a finite family of hidden states with
/// `Σ βⱼ Bⱼ = e′`.
///
/// For the uniform ansatz the family is the two-cell partition of the
/// sphere by the response cap.
#[derive(Debug, Clone, PartialEq)]
pub struct LhsResponse {
    pub weights: Vec<f64>,
    pub generators: Vec<PauliVector>,
    pub cap: Option<CapResponse>,
    pub target: PauliVector,
    pub residual: f64,
}

impl LhsResponse {
    pub fn reconstruct(&self) -> PauliVector {
        self.weights
            .iter()
            .zip(&self.generators)
            .map(|(b, g)| *g * *b)
            .sum()
    }

    /// The response for the complementary outcome `𝕀 − E₁`.
    pub fn complement(&self, vertex: &PauliVector) -> LhsResponse {
        let weights: Vec<f64> = self.weights.iter().map(|b| 1.0 - b).collect();
        let target = *vertex - self.target;
        let mut out = LhsResponse {
            weights,
            generators: self.generators.clone(),
            cap: self.cap.map(|c| CapResponse {
                scaling: -c.scaling,
                offset: 1.0 - c.offset,
                ..c
            }),
            target,
            residual: 0.0,
        };
        out.residual = (out.reconstruct() - target).norm();
        out
    }

    /// The binary-outcome rows `(β, 1 − β)`.
    pub fn binary_rows(&self) -> Result<StochasticMatrix> {
        StochasticMatrix::binary(&self.weights)
    }
}

/// Finds hidden-state weights reproducing `apply_map(map, e)`.
pub fn lhs_response(ansatz: &Ansatz, map: &EprMap, e: &PauliVector) -> Result<LhsResponse> {
    let cone = classify_cone(e, CONE_TOL)?;
    if !cone.in_double_cone() {
        return Err(Error::Domain(format!(
            "{:?} is not a measurement outcome",
            e.coords()
        )));
    }
    let vertex = ansatz.principal_vertex();
    if vertex.max_abs_diff(&map.vertex()) > VERTEX_TOL {
        return Err(Error::Precondition(
            "principal vertex does not sit at the reduced state".into(),
        ));
    }
    let target = apply_map(map, e);
    match ansatz {
        Ansatz::Finite(fin) => finite_response(fin, target),
        Ansatz::Spherical(SphericalAnsatz::Uniform) => uniform_response(target),
        Ansatz::Spherical(mx) => {
            let fin = mx
                .to_finite()
                .ok_or_else(|| Error::InvalidInput("mixture has no finite form".into()))?;
            finite_response(&fin, target)
        }
    }
}

fn finite_response(fin: &FiniteAnsatz, target: PauliVector) -> Result<LhsResponse> {
    let gens = fin.generators();
    let a = DMatrix::from_fn(4, gens.len(), |r, c| gens[c][r]);
    let t = DVector::from_column_slice(&target.coords());
    let beta = bounded_least_squares(&a, &t, 0.0, 1.0);
    let resp = LhsResponse {
        weights: beta.iter().copied().collect(),
        generators: gens.to_vec(),
        cap: None,
        target,
        residual: 0.0,
    };
    let residual = (resp.reconstruct() - target).norm();
    if residual >= RESIDUAL_TOL {
        return Err(Error::CertificateViolation { residual });
    }
    Ok(LhsResponse { residual, ..resp })
}

fn uniform_response(target: PauliVector) -> Result<LhsResponse> {
    let x0 = target.x0();
    let b = target.spatial();
    let radius = if (0.0..=1.0).contains(&x0) {
        x0 * (1.0 - x0)
    } else {
        -1.0
    };
    let excess = b.norm() - radius;
    if radius < 0.0 || excess > RESIDUAL_TOL {
        let residual = if radius < 0.0 {
            (x0.clamp(0.0, 1.0) - x0).abs() + b.norm()
        } else {
            excess
        };
        return Err(Error::CertificateViolation { residual });
    }
    let scaling = if radius > 0.0 {
        (b.norm() / radius).min(1.0)
    } else {
        0.0
    };
    let axis = if b.norm() > 0.0 {
        b / b.norm()
    } else {
        Vector3::z()
    };
    let lambda = 1.0 - 2.0 * x0;
    let offset = (1.0 - scaling) * x0;
    // cap {n̂·axis > λ} and its complement
    let cap_cell = PauliVector::from_parts(
        0.5 * (1.0 - lambda),
        &(axis * (0.25 * (1.0 - lambda * lambda))),
    );
    let rest_cell = PauliVector::HALF_IDENTITY - cap_cell;
    let resp = LhsResponse {
        weights: vec![scaling + offset, offset],
        generators: vec![cap_cell, rest_cell],
        cap: Some(CapResponse {
            lambda,
            axis,
            scaling,
            offset,
        }),
        target,
        residual: 0.0,
    };
    let residual = (resp.reconstruct() - target).norm();
    if residual >= RESIDUAL_TOL {
        return Err(Error::CertificateViolation { residual });
    }
    Ok(LhsResponse { residual, ..resp })
}

/// Bounded-variable least squares `min ‖Aβ − t‖` over `lo ≤ β ≤ hi`
/// (active-set method of Stark and Parker).
pub fn bounded_least_squares(a: &DMatrix<f64>, t: &DVector<f64>, lo: f64, hi: f64) -> DVector<f64> {
    #[derive(Clone, Copy, PartialEq)]
    enum State {
        Lower,
        Upper,
        Free,
    }
    let n = a.ncols();
    let mut x = DVector::from_element(n, lo);
    let mut state = vec![State::Lower; n];
    let max_outer = 20 * n + 50;

    for _ in 0..max_outer {
        let resid = t - a * &x;
        if resid.norm() < 1e-15 {
            break;
        }
        let grad = a.transpose() * &resid;
        // steepest improving bound variable
        let mut pick: Option<(usize, f64)> = None;
        for j in 0..n {
            let gain = match state[j] {
                State::Lower => grad[j],
                State::Upper => -grad[j],
                State::Free => continue,
            };
            if gain > 1e-14 && pick.is_none_or(|(_, g)| gain > g) {
                pick = Some((j, gain));
            }
        }
        let Some((entering, _)) = pick else { break };
        state[entering] = State::Free;

        let mut inner = 0;
        loop {
            inner += 1;
            let free: Vec<usize> = (0..n).filter(|&j| state[j] == State::Free).collect();
            if free.is_empty() || inner > 4 * n + 10 {
                break;
            }
            let fixed_part = {
                let mut y = t.clone();
                for j in 0..n {
                    if state[j] != State::Free {
                        y -= a.column(j) * x[j];
                    }
                }
                y
            };
            let af = DMatrix::from_fn(a.nrows(), free.len(), |r, c| a[(r, free[c])]);
            let z = match af.clone().svd(true, true).solve(&fixed_part, 1e-13) {
                Ok(z) => z,
                Err(_) => break,
            };
            let interior = z.iter().all(|&v| v > lo && v < hi);
            if interior {
                for (k, &j) in free.iter().enumerate() {
                    x[j] = z[k];
                }
                break;
            }
            // step toward z until the first bound is hit
            let mut alpha: f64 = 1.0;
            for (k, &j) in free.iter().enumerate() {
                let d = z[k] - x[j];
                if z[k] <= lo && d < 0.0 {
                    alpha = alpha.min((lo - x[j]) / d);
                } else if z[k] >= hi && d > 0.0 {
                    alpha = alpha.min((hi - x[j]) / d);
                }
            }
            let alpha = alpha.clamp(0.0, 1.0);
            for (k, &j) in free.iter().enumerate() {
                x[j] += alpha * (z[k] - x[j]);
                if x[j] <= lo + 1e-15 {
                    x[j] = lo;
                    state[j] = State::Lower;
                } else if x[j] >= hi - 1e-15 {
                    x[j] = hi;
                    state[j] = State::Upper;
                }
            }
            if alpha == 0.0 && state[entering] != State::Free {
                // the entering variable immediately returned to its bound
                break;
            }
        }
    }
    x.iter_mut().for_each(|v| *v = v.clamp(lo, hi));
    x
}
