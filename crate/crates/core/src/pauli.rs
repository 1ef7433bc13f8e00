//! Pauli coordinates of single-qubit Hermitian operators.
//!
//! An operator `A = ½ Σᵢ Xᵢ σᵢ` is identified with its coordinates
//! `(X₀, X₁, X₂, X₃)`, `Xᵢ = Tr(A σᵢ)`. In these coordinates the positive
//! operators form the forward light-cone at the origin, the operators below
//! the identity form the backward light-cone at `𝕀 = (2, 0, 0, 0)`, and their
//! intersection is the double-cone of measurement outcomes `0 ≤ M ≤ 𝕀`.
//!
//! All inner products are Hilbert–Schmidt: `⟨a, b⟩ = Tr(A†B) = ½ Σᵢ aᵢ bᵢ`.

use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use nalgebra::{Complex, Matrix2, Vector3, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance for cone membership tests.
pub const CONE_TOL: f64 = 1e-9;

/// A Hermitian qubit operator in Pauli coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PauliVector([f64; 4]);

impl PauliVector {
    pub const ZERO: PauliVector = PauliVector([0.0; 4]);
    pub const IDENTITY: PauliVector = PauliVector([2.0, 0.0, 0.0, 0.0]);
    /// `½𝕀`, the center of symmetry of the outcome double-cone.
    pub const HALF_IDENTITY: PauliVector = PauliVector([1.0, 0.0, 0.0, 0.0]);

    pub const fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        PauliVector([x0, x1, x2, x3])
    }

    /// Builds `(x0, b⃗)`.
    pub fn from_parts(x0: f64, b: &Vector3<f64>) -> Self {
        PauliVector([x0, b[0], b[1], b[2]])
    }

    /// Checked constructor; rejects NaN and infinities.
    pub fn try_new(coords: [f64; 4]) -> Result<Self> {
        let v = PauliVector(coords);
        v.ensure_finite()?;
        Ok(v)
    }

    pub fn coords(&self) -> [f64; 4] {
        self.0
    }

    pub fn x0(&self) -> f64 {
        self.0[0]
    }

    /// The Bloch part `(X₁, X₂, X₃)`.
    pub fn spatial(&self) -> Vector3<f64> {
        Vector3::new(self.0[1], self.0[2], self.0[3])
    }

    pub fn spatial_norm(&self) -> f64 {
        self.spatial().norm()
    }

    pub fn to_vector(&self) -> Vector4<f64> {
        Vector4::from(self.0)
    }

    pub fn from_vector(v: &Vector4<f64>) -> Self {
        PauliVector([v[0], v[1], v[2], v[3]])
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    pub(crate) fn ensure_finite(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "non-finite Pauli coordinates {:?}",
                self.0
            )))
        }
    }

    /// Hilbert–Schmidt inner product `½ Σᵢ aᵢ bᵢ`.
    pub fn inner(&self, other: &PauliVector) -> f64 {
        0.5 * self.dot(other)
    }

    /// Plain Euclidean dot product of the coordinates.
    pub fn dot(&self, other: &PauliVector) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    /// Euclidean norm of the coordinate vector.
    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(&self) -> PauliVector {
        let n = self.norm();
        if n == 0.0 {
            *self
        } else {
            *self * (1.0 / n)
        }
    }

    /// The 2×2 matrix `½ Σᵢ Xᵢ σᵢ`.
    pub fn to_matrix(&self) -> Matrix2<Complex<f64>> {
        let [x0, x1, x2, x3] = self.0;
        let c = |re: f64, im: f64| Complex::new(0.5 * re, 0.5 * im);
        Matrix2::new(c(x0 + x3, 0.0), c(x1, -x2), c(x1, x2), c(x0 - x3, 0.0))
    }

    /// Coordinates `Xᵢ = Tr(A σᵢ)` of the Hermitian part of `a`.
    pub fn from_matrix(a: &Matrix2<Complex<f64>>) -> Self {
        let x0 = (a[(0, 0)] + a[(1, 1)]).re;
        let x3 = (a[(0, 0)] - a[(1, 1)]).re;
        // Tr(Aσ₁) = a01 + a10, Tr(Aσ₂) = i(a01 − a10)
        let x1 = (a[(0, 1)] + a[(1, 0)]).re;
        let x2 = (Complex::new(0.0, 1.0) * (a[(0, 1)] - a[(1, 0)])).re;
        PauliVector([x0, x1, x2, x3])
    }

    /// Maximum absolute coordinate difference.
    pub fn max_abs_diff(&self, other: &PauliVector) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl Index<usize> for PauliVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl From<[f64; 4]> for PauliVector {
    fn from(c: [f64; 4]) -> Self {
        PauliVector(c)
    }
}

impl Add for PauliVector {
    type Output = PauliVector;
    fn add(self, rhs: PauliVector) -> PauliVector {
        PauliVector(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl AddAssign for PauliVector {
    fn add_assign(&mut self, rhs: PauliVector) {
        for i in 0..4 {
            self.0[i] += rhs.0[i];
        }
    }
}

impl Sub for PauliVector {
    type Output = PauliVector;
    fn sub(self, rhs: PauliVector) -> PauliVector {
        PauliVector(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl Neg for PauliVector {
    type Output = PauliVector;
    fn neg(self) -> PauliVector {
        PauliVector(self.0.map(|x| -x))
    }
}

impl Mul<f64> for PauliVector {
    type Output = PauliVector;
    fn mul(self, s: f64) -> PauliVector {
        PauliVector(self.0.map(|x| s * x))
    }
}

impl Mul<PauliVector> for f64 {
    type Output = PauliVector;
    fn mul(self, v: PauliVector) -> PauliVector {
        v * self
    }
}

impl std::iter::Sum for PauliVector {
    fn sum<I: Iterator<Item = PauliVector>>(iter: I) -> Self {
        iter.fold(PauliVector::ZERO, |acc, v| acc + v)
    }
}

/// Membership of an operator in the two light-cones bounding the outcome set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeMembership {
    pub in_forward_cone: bool,
    pub in_backward_cone: bool,
    /// `min(λ₋, 1 − λ₊)`; negative outside the double-cone.
    pub margin: f64,
}

impl ConeMembership {
    /// Whether the operator is a measurement outcome, `0 ≤ M ≤ 𝕀`.
    pub fn in_double_cone(&self) -> bool {
        self.in_forward_cone && self.in_backward_cone
    }
}

/// Eigenvalues `(λ₋, λ₊) = ((X₀ − |X⃗|)/2, (X₀ + |X⃗|)/2)`, ascending.
pub fn eigenvalues_of(v: &PauliVector) -> Result<(f64, f64)> {
    v.ensure_finite()?;
    Ok(eigenvalues_unchecked(v))
}

pub(crate) fn eigenvalues_unchecked(v: &PauliVector) -> (f64, f64) {
    let r = v.spatial_norm();
    (0.5 * (v.x0() - r), 0.5 * (v.x0() + r))
}

fn in_forward(v: &PauliVector, tol: f64) -> bool {
    let r2 = v.spatial().norm_squared();
    v.x0() >= -tol && v.x0() * v.x0() >= r2 - tol
}

/// Tests membership in the forward cone at `O` and the backward cone at `𝕀`.
pub fn classify_cone(v: &PauliVector, tol: f64) -> Result<ConeMembership> {
    v.ensure_finite()?;
    if !(tol >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "cone tolerance must be nonnegative, got {tol}"
        )));
    }
    let (lo, hi) = eigenvalues_unchecked(v);
    Ok(ConeMembership {
        in_forward_cone: in_forward(v, tol),
        in_backward_cone: in_forward(&(PauliVector::IDENTITY - *v), tol),
        margin: lo.min(1.0 - hi),
    })
}

/// Positive-operator test with the default tolerance, for internal use.
pub(crate) fn is_positive(v: &PauliVector, tol: f64) -> bool {
    v.is_finite() && in_forward(v, tol)
}

/// Support function of the outcome set `{0 ≤ M ≤ 𝕀}`: the sum of the
/// positive eigenvalues of the operator with coordinates `c`.
pub fn outcome_support(c: &PauliVector) -> f64 {
    let (lo, hi) = eigenvalues_unchecked(c);
    lo.max(0.0) + hi.max(0.0)
}

/// An outcome `M` attaining [`outcome_support`] in direction `c`: the
/// projector onto the positive eigenspace of `c`.
pub fn outcome_support_point(c: &PauliVector) -> PauliVector {
    let (lo, hi) = eigenvalues_unchecked(c);
    if lo >= 0.0 {
        if hi > 0.0 {
            PauliVector::IDENTITY
        } else {
            PauliVector::ZERO
        }
    } else if hi > 0.0 {
        let n = c.spatial() / c.spatial_norm();
        PauliVector::from_parts(1.0, &n)
    } else {
        PauliVector::ZERO
    }
}

/// Point reflection `2·center − v`.
pub fn reflect_through(v: &PauliVector, center: &PauliVector) -> PauliVector {
    *center * 2.0 - *v
}
