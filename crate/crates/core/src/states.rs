//! Werner, modified Werner, Bell, product and random two-qubit states.

use nalgebra::{Matrix4, Vector3, Vector4};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::epr::{theta_from_density, DensityMatrix, TwoQubitState, C64};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum StateSpec {
    Werner {
        p: f64,
    },
    /// `Θ = diag(1, p, −p, p)` plus `q(1 − p)` on `Θ₃₀`, which biases
    /// Alice's reduced state along `ẑ`.
    ModifiedWerner {
        p: f64,
        q: f64,
    },
    BellPhiPlus,
    Product {
        a: [f64; 3],
        b: [f64; 3],
    },
    /// See [`random_state`].
    Random {
        seed: u64,
    },
}

pub fn build(spec: &StateSpec) -> Result<TwoQubitState> {
    match *spec {
        StateSpec::Werner { p } => {
            check_unit("p", p, 0.0)?;
            TwoQubitState::from_theta(werner_theta(p))
        }
        StateSpec::ModifiedWerner { p, q } => {
            check_unit("p", p, 0.0)?;
            check_unit("q", q, -1.0)?;
            let mut t = werner_theta(p);
            t[(3, 0)] = q * (1.0 - p);
            TwoQubitState::from_theta(t)
        }
        StateSpec::BellPhiPlus => TwoQubitState::from_theta(werner_theta(1.0)),
        StateSpec::Product { a, b } => {
            let (a, b) = (Vector3::from(a), Vector3::from(b));
            for (name, v) in [("a", a), ("b", b)] {
                if !(v.norm() <= 1.0 + 1e-12) {
                    return Err(Error::InvalidInput(format!(
                        "Bloch vector {name} has norm {} > 1",
                        v.norm()
                    )));
                }
            }
            let ta = Vector4::new(1.0, a.x, a.y, a.z);
            let tb = Vector4::new(1.0, b.x, b.y, b.z);
            TwoQubitState::from_theta(ta * tb.transpose())
        }
        StateSpec::Random { seed } => Ok(random_state(seed)),
    }
}

fn werner_theta(p: f64) -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::new(1.0, p, -p, p))
}

fn check_unit(name: &str, x: f64, lo: f64) -> Result<()> {
    if (lo..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "{name} = {x} outside [{lo}, 1]"
        )))
    }
}

/// `ρ = GG†/Tr(GG†)` for a 4×4 complex Ginibre matrix `G`.
///
/// Entries are drawn from ChaCha8 (rand_chacha 0.9) seeded by
/// `seed_from_u64(seed)`, row-major, real part before imaginary part, each
/// a `StandardNormal` sample from rand_distr 0.5.
pub fn random_state(seed: u64) -> TwoQubitState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = DensityMatrix::zeros();
    for r in 0..4 {
        for c in 0..4 {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            g[(r, c)] = C64::new(re, im);
        }
    }
    let mut rho = g * g.adjoint();
    let tr = rho.trace().re;
    rho /= C64::new(tr, 0.0);
    // exact Hermitian symmetrization before validation
    let rho = (rho + rho.adjoint()) * C64::new(0.5, 0.0);
    theta_from_density(&rho).expect("Gram matrices are valid states")
}
