//! Test-side oracles, written without the library's geometry routines.

#![allow(dead_code)]

use nalgebra::{Matrix4, Vector4};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use epr_geometry::ansatz::FiniteAnsatz;
use epr_geometry::epr::{epr_map, Side, TwoQubitState};
use epr_geometry::pauli::PauliVector;

/// `max ⟨A, v⟩_HS` over the double cone `|x⃗| ≤ min(x₀, 2 − x₀)`: the
/// maximum of a linear function over `x₀ ∈ [0, 2]` of the piecewise-linear
/// bound sits at `x₀ ∈ {0, 1, 2}`.
pub fn double_cone_support(v: &PauliVector) -> f64 {
    let c = v.coords();
    let r = (c[1] * c[1] + c[2] * c[2] + c[3] * c[3]).sqrt();
    0.5 * [0.0, c[0] + r, 2.0 * c[0]]
        .into_iter()
        .fold(f64::MIN, f64::max)
}

pub fn random_direction(rng: &mut ChaCha8Rng) -> PauliVector {
    loop {
        let c: [f64; 4] = std::array::from_fn(|_| StandardNormal.sample(rng));
        let n = c.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-6 {
            return PauliVector::new(c[0] / n, c[1] / n, c[2] / n, c[3] / n);
        }
    }
}

/// A point of the double cone with uniform `x₀` and radial fraction.
pub fn random_outcome(rng: &mut ChaCha8Rng) -> PauliVector {
    let x0: f64 = rng.random_range(0.0..2.0);
    let r = x0.min(2.0 - x0) * rng.random_range(0.0..1.0);
    let d = loop {
        let v: [f64; 3] = std::array::from_fn(|_| StandardNormal.sample(rng));
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-6 {
            break [v[0] / n, v[1] / n, v[2] / n];
        }
    };
    PauliVector::new(x0, r * d[0], r * d[1], r * d[2])
}

/// Checks a 4-generator certificate for `state`.
///
/// The vertex must equal the image of `𝕀`. A full-rank box is a
/// parallelepiped whose facet normals are the rows of `B⁻¹`; along row
/// `nᵢ` the box spans `[0, 1]`, so the steering outcomes must satisfy
/// `0 ≤ nᵢ·(M A) ≤ 1`. A rank-deficient certificate must be the segment
/// `[O, vertex]` and the map must have rank one.
pub fn verify_parallelepiped(state: &TwoQubitState, cert: &FiniteAnsatz, tol: f64) -> bool {
    if cert.len() != 4 {
        return false;
    }
    let map = epr_map(state, Side::AliceToBob);
    let m = *map.matrix();
    let vertex = m * Vector4::new(2.0, 0.0, 0.0, 0.0);
    let b = Matrix4::from_fn(|r, c| cert.generators()[c][r]);
    let sum: Vector4<f64> = b.column_sum();
    if (sum - vertex).amax() > tol {
        return false;
    }
    // Euclidean support of the double cone, twice the HS one
    let h = |v: Vector4<f64>| 2.0 * double_cone_support(&PauliVector::new(v[0], v[1], v[2], v[3]));
    match b
        .try_inverse()
        .filter(|inv| inv.iter().all(|x| x.is_finite()) && inv.amax() < 1e12)
    {
        Some(inv) => (0..4).all(|i| {
            let n: Vector4<f64> = inv.row(i).transpose();
            let len = n.norm();
            let pulled = m.transpose() * n;
            h(pulled) / len <= 1.0 / len + tol && h(-pulled) / len <= tol
        }),
        None => {
            let quarter = vertex * 0.25;
            let segment = (0..4).all(|c| (b.column(c) - quarter).amax() <= tol);
            let sv = m.singular_values();
            let rank_one = sv.iter().filter(|&&s| s > 1e-12 * sv.max()).count() <= 1;
            segment && rank_one
        }
    }
}
