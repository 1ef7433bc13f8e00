//! Separability: the partial-transpose oracle and 4-generator box
//! certificates built from tetrahedra around the steering ellipsoid.

use nalgebra::{Matrix3, Rotation3, Unit, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::packing::{check_packing, DEFAULT_DIRECTIONS};
use crate::ansatz::{box_from_cone, Ansatz, FiniteAnsatz};
use crate::epr::{
    density_from_theta, epr_map, hermitian_eigenvalues, steering_ellipsoid, EllipsoidReport, Side,
    TwoQubitState,
};
use crate::pauli::PauliVector;

/// Certificates are verified by facet dominance at this tolerance.
pub const CERTIFICATE_TOL: f64 = 1e-8;
/// Iteration cap of the vertex pattern search.
pub const SEARCH_ITERATIONS: usize = 200;
/// Tetrahedra whose worst face slack is at least this are accepted.
const SLACK_ACCEPT: f64 = -1e-12;
const RANDOM_STARTS: usize = 4;
const JOINT_MOVES: usize = 6;
const TEMPERATURES: [f64; 4] = [2e-2, 5e-3, 1e-3, 0.0];
const SEARCH_SEED: u64 = 0x7e72_a5ed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecisionMethod {
    Ppt,
    BoxCertificate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparabilityDecision {
    pub separable: bool,
    pub method: DecisionMethod,
    /// Four generators whose box holds Alice's steering outcomes.
    pub certificate: Option<FiniteAnsatz>,
    pub ppt_min_eigenvalue: f64,
}

/// Partial transpose over B: `(ρ^{T_B})` has `Θ′ᵢⱼ = Θᵢⱼ sⱼ` with
/// `s = (1, 1, −1, 1)`. Returns `(λ_min ≥ −tol, λ_min)`.
pub fn is_ppt(state: &TwoQubitState, tol: f64) -> (bool, f64) {
    let mut t = *state.theta();
    for i in 0..4 {
        t[(i, 2)] = -t[(i, 2)];
    }
    let min = hermitian_eigenvalues(&density_from_theta(&t))[0];
    (min >= -tol, min)
}

/// PPT decides; a verified box certificate is attached when one is found.
pub fn decide_separable(state: &TwoQubitState, tol: f64) -> SeparabilityDecision {
    let (separable, min) = is_ppt(state, tol);
    let certificate = if separable {
        search_certificate(state)
    } else {
        None
    };
    SeparabilityDecision {
        separable,
        method: if certificate.is_some() {
            DecisionMethod::BoxCertificate
        } else {
            DecisionMethod::Ppt
        },
        certificate,
        ppt_min_eigenvalue: min,
    }
}

/// Looks for a tetrahedron inside Bob's Bloch ball containing the steering
/// ellipsoid, lifts it to four cone generators, fits the box vertex to the
/// reduced state and keeps the result only if it passes [`check_packing`].
///
/// Runs regardless of the PPT verdict, so it can be audited on entangled
/// states.
pub fn search_certificate(state: &TwoQubitState) -> Option<FiniteAnsatz> {
    let map = epr_map(state, Side::AliceToBob);
    let candidate = if map.rank() <= 1 {
        FiniteAnsatz::new(vec![map.vertex() * 0.25; 4]).ok()?
    } else {
        let ell = steering_ellipsoid(state).ok()?;
        let (verts, slack) = best_tetrahedron(&ell);
        if slack < SLACK_ACCEPT {
            return None;
        }
        let gens: Vec<PauliVector> = verts
            .iter()
            .map(|v| PauliVector::from_parts(1.0, v))
            .collect();
        box_from_cone(&gens, &map.center()).ok()?
    };
    let cert = check_packing(
        &map,
        &Ansatz::Finite(candidate.clone()),
        CERTIFICATE_TOL,
        DEFAULT_DIRECTIONS,
    )
    .ok()?;
    cert.contained.then_some(candidate)
}

pub type Tetrahedron = [Vector3<f64>; 4];

/// Support data of an ellipsoid: center and shape matrix.
#[derive(Debug, Clone, Copy)]
pub struct EllipsoidSupport {
    center: Vector3<f64>,
    shape: Matrix3<f64>,
}

impl EllipsoidSupport {
    pub fn new(ell: &EllipsoidReport) -> Self {
        EllipsoidSupport {
            center: ell.center_vec(),
            shape: ell.shape(),
        }
    }

    fn support(&self, n: &Vector3<f64>) -> f64 {
        n.dot(&self.center) + n.dot(&(self.shape * n)).max(0.0).sqrt()
    }
}

const FACES: [[usize; 3]; 4] = [[1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]];

/// Face slacks `d_k − h_E(n_k)`, each face with its unit normal pointing
/// away from the opposite vertex. `None` for a flat tetrahedron.
pub fn face_slacks(ell: &EllipsoidSupport, verts: &Tetrahedron) -> Option<[f64; 4]> {
    let mut out = [0.0; 4];
    for (k, slot) in out.iter_mut().enumerate() {
        let [i, j, l] = FACES[k];
        let a = verts[i];
        let n = (verts[j] - a).cross(&(verts[l] - a));
        let len = n.norm();
        if len < 1e-12 {
            return None;
        }
        let mut n = n / len;
        let height = n.dot(&(verts[k] - a));
        if height.abs() < 1e-12 {
            return None;
        }
        if height > 0.0 {
            n = -n;
        }
        *slot = n.dot(&a) - ell.support(&n);
    }
    Some(out)
}

/// The worst of [`face_slacks`]; the ellipsoid lies in the tetrahedron iff
/// this is nonnegative.
pub fn tetrahedron_slack(ell: &EllipsoidSupport, verts: &Tetrahedron) -> f64 {
    face_slacks(ell, verts).map_or(f64::NEG_INFINITY, |s| {
        s.iter().copied().fold(f64::INFINITY, f64::min)
    })
}

/// Soft minimum `−τ log Σ exp(−s_k/τ)`; the hard minimum at `τ = 0`.
fn smoothed_slack(ell: &EllipsoidSupport, verts: &Tetrahedron, tau: f64) -> f64 {
    let Some(s) = face_slacks(ell, verts) else {
        return f64::NEG_INFINITY;
    };
    let min = s.iter().copied().fold(f64::INFINITY, f64::min);
    if tau == 0.0 {
        return min;
    }
    let sum: f64 = s.iter().map(|x| (-(x - min) / tau).exp()).sum();
    min - tau * sum.ln()
}

pub fn best_tetrahedron(ell: &EllipsoidReport) -> (Tetrahedron, f64) {
    let axes: [Vector3<f64>; 3] = std::array::from_fn(|k| Vector3::from(ell.orientation[k]));
    let frame = Matrix3::from_columns(&axes);
    let s = 1.0 / 3f64.sqrt();
    let regular: Tetrahedron = [
        Vector3::new(s, s, s),
        Vector3::new(s, -s, -s),
        Vector3::new(-s, s, -s),
        Vector3::new(-s, -s, s),
    ];
    let mut starts: Vec<Tetrahedron> = Vec::new();
    for parity in [1.0, -1.0] {
        starts.push(regular.map(|v| frame * (v * parity)));
    }
    // one vertex on each principal half-axis
    for axis in &axes {
        for sign in [1.0, -1.0] {
            let target = axis * sign;
            let rot = Rotation3::rotation_between(&regular[0], &target).unwrap_or_else(|| {
                Rotation3::from_axis_angle(&Vector3::x_axis(), std::f64::consts::PI)
            });
            starts.push(regular.map(|v| rot * v));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEARCH_SEED);
    for _ in 0..RANDOM_STARTS {
        let axis = Unit::new_normalize(random_unit(&mut rng));
        let rot = Rotation3::from_axis_angle(&axis, rng.random_range(0.0..std::f64::consts::TAU));
        starts.push(regular.map(|v| rot * v));
    }

    let support = EllipsoidSupport::new(ell);
    let mut best = (starts[0], f64::NEG_INFINITY);
    for start in starts {
        let (t, s) = pattern_search(&support, start, &mut rng);
        if s > best.1 {
            best = (t, s);
        }
        if best.1 > 1e-9 {
            break;
        }
    }
    best
}

fn random_unit(rng: &mut ChaCha8Rng) -> Vector3<f64> {
    loop {
        let v = Vector3::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v / n;
        }
    }
}

fn tangent_pair(v: &Vector3<f64>) -> [Vector3<f64>; 2] {
    let helper = if v.x.abs() < 0.9 {
        Vector3::x()
    } else {
        Vector3::y()
    };
    let t1 = v.cross(&helper).normalize();
    [t1, v.cross(&t1)]
}

/// Maximizes the worst face slack over vertices on the unit sphere.
///
/// Pattern search (tangent coordinate moves plus random joint moves, step
/// halving on failure) on a soft minimum whose temperature drops to zero
/// over the iteration budget.
fn pattern_search(
    ell: &EllipsoidSupport,
    start: Tetrahedron,
    rng: &mut ChaCha8Rng,
) -> (Tetrahedron, f64) {
    let mut t = start;
    let per_stage = SEARCH_ITERATIONS / TEMPERATURES.len();
    for &tau in &TEMPERATURES {
        let mut val = smoothed_slack(ell, &t, tau);
        let mut step = 0.25;
        for _ in 0..per_stage {
            let mut improved = false;
            for k in 0..4 {
                for dir in tangent_pair(&t[k]) {
                    for sign in [1.0, -1.0] {
                        let mut trial = t;
                        trial[k] = (t[k] + dir * (sign * step)).normalize();
                        let v = smoothed_slack(ell, &trial, tau);
                        if v > val {
                            t = trial;
                            val = v;
                            improved = true;
                        }
                    }
                }
            }
            for _ in 0..JOINT_MOVES {
                let mut trial = t;
                for v in trial.iter_mut() {
                    *v = (*v + random_unit(rng) * step).normalize();
                }
                let v = smoothed_slack(ell, &trial, tau);
                if v > val {
                    t = trial;
                    val = v;
                    improved = true;
                }
            }
            if !improved {
                step *= 0.5;
                if step < 1e-10 {
                    break;
                }
            }
        }
    }
    (t, tetrahedron_slack(ell, &t))
}
