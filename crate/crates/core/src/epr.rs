//! Two-qubit states, EPR maps and the steering ellipsoid.
//!
//! A state is stored through its correlation matrix
//! `Θᵢⱼ = Tr[ρ (σᵢᴬ ⊗ σⱼᴮ)]`; rows index Alice's Pauli operator, columns
//! Bob's. Alice's EPR map `A ↦ Tr_A[ρ (A ⊗ 𝕀)]` acts on Pauli coordinates as
//! the matrix `½Θᵀ`, Bob's as `½Θ`.

use nalgebra::{Complex, Matrix2, Matrix3, Matrix4, SymmetricEigen, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{outcome_support, outcome_support_point, PauliVector};

pub type C64 = Complex<f64>;
pub type DensityMatrix = Matrix4<C64>;

/// Tolerance on Hermiticity and unit trace of input density matrices.
pub const DENSITY_TOL: f64 = 1e-10;
/// Smallest admissible eigenvalue of a density matrix.
pub const PSD_TOL: f64 = 1e-9;

/// The four Pauli matrices `σ₀ = 𝕀, σ₁, σ₂, σ₃`.
pub fn pauli_matrices() -> [Matrix2<C64>; 4] {
    let z = C64::new(0.0, 0.0);
    let o = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    [
        Matrix2::new(o, z, z, o),
        Matrix2::new(z, o, o, z),
        Matrix2::new(z, -i, i, z),
        Matrix2::new(o, z, z, -o),
    ]
}

/// `a ⊗ b` with basis order `|00⟩, |01⟩, |10⟩, |11⟩`.
pub fn kron2(a: &Matrix2<C64>, b: &Matrix2<C64>) -> Matrix4<C64> {
    Matrix4::from_fn(|r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
}

/// Eigenvalues of a Hermitian 4×4 matrix, ascending.
pub fn hermitian_eigenvalues(m: &DensityMatrix) -> [f64; 4] {
    let eig = SymmetricEigen::new(*m);
    let mut ev: [f64; 4] = std::array::from_fn(|i| eig.eigenvalues[i]);
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// A validated two-qubit state.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    theta: Matrix4<f64>,
    psd_margin: f64,
}

impl TwoQubitState {
    /// Validates a correlation matrix: unit trace and a positive
    /// reconstructed density operator.
    pub fn from_theta(theta: Matrix4<f64>) -> Result<Self> {
        if theta.iter().any(|x| !x.is_finite()) {
            return Err(Error::Validation {
                invariant: "finite",
                detail: "correlation matrix has non-finite entries".into(),
            });
        }
        if (theta[(0, 0)] - 1.0).abs() > DENSITY_TOL {
            return Err(Error::Validation {
                invariant: "unit trace",
                detail: format!("Θ₀₀ = {}", theta[(0, 0)]),
            });
        }
        let rho = density_from_theta(&theta);
        let min_eig = hermitian_eigenvalues(&rho)[0];
        if min_eig < -PSD_TOL {
            return Err(Error::Validation {
                invariant: "positive semidefinite",
                detail: format!("smallest eigenvalue {min_eig:e}"),
            });
        }
        Ok(TwoQubitState {
            theta,
            psd_margin: min_eig,
        })
    }

    pub fn theta(&self) -> &Matrix4<f64> {
        &self.theta
    }

    /// Smallest eigenvalue of the reconstructed density matrix.
    pub fn psd_margin(&self) -> f64 {
        self.psd_margin
    }

    /// `ρ = ¼ Σᵢⱼ Θᵢⱼ σᵢ ⊗ σⱼ`.
    pub fn density(&self) -> DensityMatrix {
        density_from_theta(&self.theta)
    }

    pub fn theta_rows(&self) -> [[f64; 4]; 4] {
        std::array::from_fn(|i| std::array::from_fn(|j| self.theta[(i, j)]))
    }
}

pub(crate) fn density_from_theta(theta: &Matrix4<f64>) -> DensityMatrix {
    let s = pauli_matrices();
    let mut rho = DensityMatrix::zeros();
    for i in 0..4 {
        for j in 0..4 {
            if theta[(i, j)] != 0.0 {
                rho += kron2(&s[i], &s[j]) * C64::new(0.25 * theta[(i, j)], 0.0);
            }
        }
    }
    rho
}

/// Computes `Θᵢⱼ = Tr[ρ (σᵢ ⊗ σⱼ)]` from a validated density matrix.
pub fn theta_from_density(rho: &DensityMatrix) -> Result<TwoQubitState> {
    if rho.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Validation {
            invariant: "finite",
            detail: "density matrix has non-finite entries".into(),
        });
    }
    let asym = (rho - rho.adjoint())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if asym > DENSITY_TOL {
        return Err(Error::Validation {
            invariant: "Hermitian",
            detail: format!("max |ρ − ρ†| = {asym:e}"),
        });
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
        return Err(Error::Validation {
            invariant: "unit trace",
            detail: format!("Tr ρ = {tr}"),
        });
    }
    let herm = (rho + rho.adjoint()) * C64::new(0.5, 0.0);
    let min_eig = hermitian_eigenvalues(&herm)[0];
    if min_eig < -PSD_TOL {
        return Err(Error::Validation {
            invariant: "positive semidefinite",
            detail: format!("smallest eigenvalue {min_eig:e}"),
        });
    }
    let s = pauli_matrices();
    let theta = Matrix4::from_fn(|i, j| (herm * kron2(&s[i], &s[j])).trace().re);
    Ok(TwoQubitState {
        theta,
        psd_margin: min_eig,
    })
}

/// Which party's operators the map takes as input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    AliceToBob,
    BobToAlice,
}

/// Which subsystem to keep when tracing out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Party {
    A,
    B,
}

/// A linear map between Pauli coordinate spaces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EprMap {
    m: Matrix4<f64>,
    side: Side,
}

impl EprMap {
    /// Wraps an arbitrary coordinate matrix, mostly useful in tests.
    pub fn from_matrix(m: Matrix4<f64>, side: Side) -> Self {
        EprMap { m, side }
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.m
    }

    pub fn side(&self) -> Side {
        self.side
    }

    /// Image of the identity: the target party's reduced state.
    pub fn vertex(&self) -> PauliVector {
        apply_map(self, &PauliVector::IDENTITY)
    }

    /// `½ (𝕀)′`, the center of symmetry of the steering outcomes.
    pub fn center(&self) -> PauliVector {
        self.vertex() * 0.5
    }

    /// `mᵀ w`, the pullback of a direction to the source space.
    pub fn pullback(&self, w: &PauliVector) -> PauliVector {
        PauliVector::from_vector(&(self.m.transpose() * w.to_vector()))
    }

    /// Numerical rank from singular values (relative tolerance 1e-12).
    pub fn rank(&self) -> usize {
        let sv = self.m.singular_values();
        let max = sv.max();
        if max == 0.0 {
            return 0;
        }
        sv.iter().filter(|&&s| s > 1e-12 * max.max(1.0)).count()
    }
}

pub fn epr_map(state: &TwoQubitState, side: Side) -> EprMap {
    let m = match side {
        Side::AliceToBob => state.theta.transpose() * 0.5,
        Side::BobToAlice => state.theta * 0.5,
    };
    EprMap { m, side }
}

pub fn apply_map(map: &EprMap, v: &PauliVector) -> PauliVector {
    PauliVector::from_vector(&(map.m * v.to_vector()))
}

/// Reduced state of one party as a unit-trace Pauli vector.
pub fn reduced_state(state: &TwoQubitState, party: Party) -> PauliVector {
    let t = &state.theta;
    match party {
        Party::B => PauliVector::new(1.0, t[(0, 1)], t[(0, 2)], t[(0, 3)]),
        Party::A => PauliVector::new(1.0, t[(1, 0)], t[(2, 0)], t[(3, 0)]),
    }
}

/// Support function of the steering outcomes, `h_𝓜(mᵀ w)`.
pub fn steering_support(map: &EprMap, w: &PauliVector) -> f64 {
    outcome_support(&map.pullback(w))
}

/// A steering outcome attaining [`steering_support`] in direction `w`.
pub fn steering_support_point(map: &EprMap, w: &PauliVector) -> PauliVector {
    apply_map(map, &outcome_support_point(&map.pullback(w)))
}

/// The projective image of Alice's Bloch ball in Bob's Bloch hyperplane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EllipsoidReport {
    pub center: [f64; 3],
    /// Descending.
    pub semiaxes: [f64; 3],
    /// Row `k` is the unit principal axis carrying `semiaxes[k]`.
    pub orientation: [[f64; 3]; 3],
    pub degenerate: bool,
}

impl EllipsoidReport {
    pub fn center_vec(&self) -> Vector3<f64> {
        Vector3::from(self.center)
    }

    /// Shape matrix `Q` with the ellipsoid `{c + Q^{1/2} s : |s| ≤ 1}`.
    pub fn shape(&self) -> Matrix3<f64> {
        let mut q = Matrix3::zeros();
        for k in 0..3 {
            let a = Vector3::from(self.orientation[k]);
            q += a * a.transpose() * (self.semiaxes[k] * self.semiaxes[k]);
        }
        q
    }

    /// Support function `n·c + |Q^{1/2} n|`.
    pub fn support(&self, n: &Vector3<f64>) -> f64 {
        let spread: f64 = (0..3)
            .map(|k| {
                let p = self.semiaxes[k] * Vector3::from(self.orientation[k]).dot(n);
                p * p
            })
            .sum();
        n.dot(&self.center_vec()) + spread.sqrt()
    }
}

/// Alice's steering ellipsoid of a state.
///
/// The points `(v + T n)/(α + u·n)` over the unit ball factor through
/// `ψ(n) = n/(α + u·n)`, whose image is the ellipsoid
/// `yᵀ(α²𝕀 − uuᵀ)y + 2u·y ≤ 1`; the remaining map
/// `y ↦ v/α + (T − v uᵀ/α) y` is affine.
pub fn steering_ellipsoid(state: &TwoQubitState) -> Result<EllipsoidReport> {
    let map = epr_map(state, Side::AliceToBob);
    let m = map.matrix();
    let alpha = m[(0, 0)];
    let u = Vector3::new(m[(0, 1)], m[(0, 2)], m[(0, 3)]);
    let v = Vector3::new(m[(1, 0)], m[(2, 0)], m[(3, 0)]);
    let t = m.fixed_view::<3, 3>(1, 1).into_owned();

    if u.norm() >= alpha * (1.0 - 1e-9) {
        return Err(Error::ProjectionUndefined(format!(
            "Alice's reduced state is pure (|a| = {:.12}); X₀(A′) vanishes on her Bloch sphere",
            u.norm() / alpha
        )));
    }
    let p = Matrix3::identity() * (alpha * alpha) - u * u.transpose();
    let p_inv = p
        .try_inverse()
        .ok_or_else(|| Error::ProjectionUndefined("singular projective form".into()))?;
    let y_center = -(p_inv * u);
    let radius2 = 1.0 + u.dot(&(p_inv * u));
    let l = t - v * u.transpose() / alpha;
    let center = v / alpha + l * y_center;
    let q = l * (p_inv * radius2) * l.transpose();
    let q = (q + q.transpose()) * 0.5;

    let eig = SymmetricEigen::new(q);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let rank = map.rank();
    let degenerate = rank < 4;
    let kept = rank.saturating_sub(1);
    let mut semiaxes = [0.0; 3];
    let mut orientation = [[0.0; 3]; 3];
    for (k, &idx) in order.iter().enumerate() {
        semiaxes[k] = if k < kept {
            eig.eigenvalues[idx].max(0.0).sqrt()
        } else {
            0.0
        };
        let col = eig.eigenvectors.column(idx);
        orientation[k] = [col[0], col[1], col[2]];
    }
    Ok(EllipsoidReport {
        center: [center[0], center[1], center[2]],
        semiaxes,
        orientation,
        degenerate,
    })
}
