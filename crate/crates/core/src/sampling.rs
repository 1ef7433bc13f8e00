//! Deterministic low-discrepancy point sets on spheres.

use std::f64::consts::PI;

use nalgebra::Vector3;

use crate::pauli::PauliVector;

/// Radical inverse of `index` in the given prime base.
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while index > 0 {
        r += f * (index % base) as f64;
        index /= base;
        f *= inv;
    }
    r
}

/// `n` quasi-uniform unit 4-vectors: Halton points in bases 2, 3, 5 pushed
/// through the measure-preserving map of the unit cube onto S³.
pub fn unit_4_directions(n: usize) -> Vec<PauliVector> {
    (1..=n as u64)
        .map(|i| {
            let u1 = radical_inverse(i, 2);
            let u2 = radical_inverse(i, 3);
            let u3 = radical_inverse(i, 5);
            let (s1, s2) = ((1.0 - u1).sqrt(), u1.sqrt());
            let (a, b) = (2.0 * PI * u2, 2.0 * PI * u3);
            PauliVector::new(s1 * a.sin(), s1 * a.cos(), s2 * b.sin(), s2 * b.cos())
        })
        .collect()
}

/// `n` points of the Fibonacci lattice on S².
pub fn fibonacci_sphere(n: usize) -> Vec<Vector3<f64>> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64;
            Vector3::new(r * phi.cos(), r * phi.sin(), z)
        })
        .collect()
}
