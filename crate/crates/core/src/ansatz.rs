//! Polyhedral boxes `{Σ βᵢ Bᵢ : 0 ≤ βᵢ ≤ 1}` and their continuous analogues.
//!
//! A finite ansatz is a list of positive generators. A spherical ansatz is a
//! probability measure `μ` on the unit sphere; its box is
//! `{∫dμ(n̂) f(n̂) (1, n̂) : 0 ≤ f ≤ 1}` with principal vertex `(1, ∫dμ n̂)`.

use nalgebra::{Matrix3x4, Matrix4, Vector3};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pauli::{is_positive, PauliVector, CONE_TOL};
use crate::sampling::fibonacci_sphere;

/// Singular values below this mark a dependent generator subset.
pub const RANK_TOL: f64 = 1e-10;
/// Facet normals closer than this (as unit vectors) are merged.
pub const FACET_MERGE_TOL: f64 = 1e-9;
/// `n̂₀·n̂ = λ` ties in a discrete mixture are detected at this tolerance.
pub const TIE_TOL: f64 = 1e-12;

/// A finite set of positive generators.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteAnsatz {
    generators: Vec<PauliVector>,
}

impl FiniteAnsatz {
    pub fn new(generators: Vec<PauliVector>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidInput(
                "ansatz needs at least one generator".into(),
            ));
        }
        for (i, g) in generators.iter().enumerate() {
            g.ensure_finite()?;
            if !is_positive(g, CONE_TOL) {
                return Err(Error::InvalidInput(format!(
                    "generator {i} {:?} is not a positive operator",
                    g.coords()
                )));
            }
        }
        let vertex: PauliVector = generators.iter().copied().sum();
        if !(vertex.x0() > 0.0 && vertex.x0() <= 2.0 + CONE_TOL) {
            return Err(Error::InvalidInput(format!(
                "principal vertex trace X₀ = {} outside (0, 2]",
                vertex.x0()
            )));
        }
        Ok(FiniteAnsatz { generators })
    }

    pub fn generators(&self) -> &[PauliVector] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn principal_vertex(&self) -> PauliVector {
        self.generators.iter().copied().sum()
    }

    pub fn box_support(&self, w: &PauliVector) -> f64 {
        self.generators.iter().map(|g| g.inner(w).max(0.0)).sum()
    }

    /// A vertex of the box attaining [`Self::box_support`] in direction `w`.
    pub fn support_point(&self, w: &PauliVector) -> PauliVector {
        self.generators
            .iter()
            .filter(|g| g.inner(w) > 0.0)
            .copied()
            .sum()
    }
}

/// Finite weighted set of unit directions on the Bloch sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct Mixture {
    weights: Vec<f64>,
    directions: Vec<Vector3<f64>>,
}

impl Mixture {
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn directions(&self) -> &[Vector3<f64>] {
        &self.directions
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SphericalAnsatz {
    /// The normalized rotation-invariant measure.
    Uniform,
    DiscreteMixture(Mixture),
}

impl SphericalAnsatz {
    pub fn mixture(weights: Vec<f64>, directions: Vec<Vector3<f64>>) -> Result<Self> {
        if weights.len() != directions.len() || weights.is_empty() {
            return Err(Error::InvalidInput(format!(
                "mixture needs matching non-empty weights and directions ({} vs {})",
                weights.len(),
                directions.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "mixture weight {w} is not positive"
            )));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidInput(format!(
                "mixture weights sum to {total}, not 1"
            )));
        }
        if let Some(n) = directions.iter().find(|n| (n.norm() - 1.0).abs() > 1e-12) {
            return Err(Error::InvalidInput(format!(
                "mixture direction {:?} is not a unit vector",
                n.as_slice()
            )));
        }
        Ok(SphericalAnsatz::DiscreteMixture(Mixture {
            weights,
            directions,
        }))
    }

    /// Equal weights on `n` Fibonacci-lattice directions.
    pub fn quasi_uniform(n: usize) -> Result<Self> {
        let dirs = fibonacci_sphere(n);
        let dirs: Vec<_> = dirs.into_iter().map(|d| d / d.norm()).collect();
        let w = vec![1.0 / n as f64; n];
        let total: f64 = w.iter().sum();
        SphericalAnsatz::mixture(w.into_iter().map(|x| x / total).collect(), dirs)
    }

    pub fn principal_vertex(&self) -> PauliVector {
        match self {
            SphericalAnsatz::Uniform => PauliVector::HALF_IDENTITY,
            SphericalAnsatz::DiscreteMixture(mx) => {
                let b: Vector3<f64> = mx
                    .weights
                    .iter()
                    .zip(&mx.directions)
                    .map(|(w, n)| n * *w)
                    .sum();
                PauliVector::from_parts(1.0, &b)
            }
        }
    }

    /// `∫dμ(n̂) max(0, ⟨(1, n̂), w⟩)`.
    pub fn box_support(&self, w: &PauliVector) -> f64 {
        let a = w.x0();
        match self {
            SphericalAnsatz::Uniform => uniform_box_support(a, w.spatial_norm()),
            SphericalAnsatz::DiscreteMixture(mx) => {
                let wv = w.spatial();
                mx.weights
                    .iter()
                    .zip(&mx.directions)
                    .map(|(k, n)| k * (0.5 * (a + n.dot(&wv))).max(0.0))
                    .sum()
            }
        }
    }

    /// The mixture viewed as a finite ansatz with generators `wₖ(1, n̂ₖ)`.
    pub fn to_finite(&self) -> Option<FiniteAnsatz> {
        match self {
            SphericalAnsatz::Uniform => None,
            SphericalAnsatz::DiscreteMixture(mx) => FiniteAnsatz::new(
                mx.weights
                    .iter()
                    .zip(&mx.directions)
                    .map(|(w, n)| PauliVector::from_parts(1.0, n) * *w)
                    .collect(),
            )
            .ok(),
        }
    }
}

/// Uniform-measure box support with `a = w₀`, `r = |w⃗|`.
///
/// With `t = n̂·ŵ` uniform on `[-1, 1]`, the integrand `½ max(0, a + r t)`
/// integrates to `a/2`, `0`, or `(a + r)²/(8r)` on the partial cap.
fn uniform_box_support(a: f64, r: f64) -> f64 {
    if a >= r {
        0.5 * a
    } else if a <= -r {
        0.0
    } else {
        (a + r) * (a + r) / (8.0 * r)
    }
}

/// Either kind of ansatz.
#[derive(Debug, Clone, PartialEq)]
pub enum Ansatz {
    Finite(FiniteAnsatz),
    Spherical(SphericalAnsatz),
}

impl Ansatz {
    pub fn principal_vertex(&self) -> PauliVector {
        match self {
            Ansatz::Finite(f) => f.principal_vertex(),
            Ansatz::Spherical(s) => s.principal_vertex(),
        }
    }

    pub fn box_support(&self, w: &PauliVector) -> f64 {
        match self {
            Ansatz::Finite(f) => f.box_support(w),
            Ansatz::Spherical(s) => s.box_support(w),
        }
    }
}

impl From<FiniteAnsatz> for Ansatz {
    fn from(f: FiniteAnsatz) -> Self {
        Ansatz::Finite(f)
    }
}

impl From<SphericalAnsatz> for Ansatz {
    fn from(s: SphericalAnsatz) -> Self {
        Ansatz::Spherical(s)
    }
}

pub fn principal_vertex(ansatz: &Ansatz) -> PauliVector {
    ansatz.principal_vertex()
}

pub fn box_support(ansatz: &Ansatz, w: &PauliVector) -> f64 {
    ansatz.box_support(w)
}

/// A point on the boundary of a spherical box, produced by the cap
/// response `f = 1{n̂₀·n̂ > λ} + g·1{n̂₀·n̂ = λ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryPoint {
    pub x0: f64,
    pub b: Vector3<f64>,
    pub lambda: f64,
    pub n0: Vector3<f64>,
    pub g_values: Option<Vec<f64>>,
}

impl BoundaryPoint {
    pub fn point(&self) -> PauliVector {
        PauliVector::from_parts(self.x0, &self.b)
    }

    /// The direction `(−λ, n̂₀)` in which this point supports the box.
    pub fn supporting_direction(&self) -> PauliVector {
        PauliVector::from_parts(-self.lambda, &self.n0)
    }

    /// `h_box(w) − ⟨point, w⟩` for the supporting direction; zero on the
    /// boundary.
    pub fn support_gap(&self, ansatz: &SphericalAnsatz) -> f64 {
        let w = self.supporting_direction();
        ansatz.box_support(&w) - self.point().inner(&w)
    }
}

pub fn boundary_point(
    ansatz: &SphericalAnsatz,
    n0: &Vector3<f64>,
    lambda: f64,
    g: Option<&[f64]>,
) -> Result<BoundaryPoint> {
    if !lambda.is_finite() || n0.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("non-finite boundary parameters".into()));
    }
    if (n0.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidInput(format!("n̂₀ has norm {}", n0.norm())));
    }
    let n0 = n0 / n0.norm();
    match ansatz {
        SphericalAnsatz::Uniform => {
            if g.is_some() {
                return Err(Error::InvalidInput(
                    "tie weights apply only to discrete mixtures".into(),
                ));
            }
            // cap {n̂₀·n̂ > λ}: measure (1 − λ)/2, first moment (1 − λ²)/4 n̂₀
            let l = lambda.clamp(-1.0, 1.0);
            Ok(BoundaryPoint {
                x0: 0.5 * (1.0 - l),
                b: n0 * (0.25 * (1.0 - l * l)),
                lambda,
                n0,
                g_values: None,
            })
        }
        SphericalAnsatz::DiscreteMixture(mx) => {
            if let Some(g) = g {
                if g.len() != mx.weights.len() {
                    return Err(Error::DimensionMismatch(format!(
                        "{} tie weights for {} directions",
                        g.len(),
                        mx.weights.len()
                    )));
                }
                if g.iter().any(|x| !(0.0..=1.0).contains(x)) {
                    return Err(Error::InvalidInput("tie weights must lie in [0, 1]".into()));
                }
            }
            let mut x0 = 0.0;
            let mut b = Vector3::zeros();
            for (k, (w, n)) in mx.weights.iter().zip(&mx.directions).enumerate() {
                let t = n0.dot(n);
                let f = if (t - lambda).abs() <= TIE_TOL {
                    g.map_or(0.0, |g| g[k])
                } else if t > lambda {
                    1.0
                } else {
                    0.0
                };
                x0 += w * f;
                b += n * (w * f);
            }
            Ok(BoundaryPoint {
                x0,
                b,
                lambda,
                n0,
                g_values: g.map(|g| g.to_vec()),
            })
        }
    }
}

/// Cross-section radius `x₀(1 − x₀)` of the uniform box.
pub fn uniform_cross_section_radius(x0: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x0) {
        return Err(Error::Domain(format!("x₀ = {x0} outside [0, 1]")));
    }
    Ok(x0 * (1.0 - x0))
}

/// The lower-dimensional span of a non-full-dimensional box.
#[derive(Debug, Clone, PartialEq)]
pub struct DegenerateSpan {
    pub rank: usize,
    /// Orthonormal basis of the generators' span.
    pub span: Vec<PauliVector>,
    /// Orthonormal basis of its orthogonal complement.
    pub complement: Vec<PauliVector>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FacetNormals {
    /// Unit normals, both orientations of each supporting hyperplane.
    pub normals: Vec<PauliVector>,
    pub degenerate: Option<DegenerateSpan>,
}

/// Kernel of a 3×4 matrix via signed 3×3 minors.
fn kernel_3x4(rows: &[PauliVector; 3]) -> PauliVector {
    let m = Matrix3x4::from_fn(|r, c| rows[r][c]);
    let minor = |skip: usize| {
        let cols: Vec<usize> = (0..4).filter(|&c| c != skip).collect();
        nalgebra::Matrix3::from_fn(|r, c| m[(r, cols[c])]).determinant()
    };
    PauliVector::new(minor(0), -minor(1), minor(2), -minor(3))
}

/// Unit normals of all facets of a 4D zonotope.
pub fn facet_normals(ansatz: &FiniteAnsatz) -> Result<FacetNormals> {
    let g = ansatz.generators();
    let m = g.len();
    if m < 3 {
        return Err(Error::InvalidInput(format!(
            "facet enumeration needs at least 3 generators, got {m}"
        )));
    }
    let triples: Vec<(usize, usize, usize)> = (0..m)
        .flat_map(|i| (i + 1..m).flat_map(move |j| (j + 1..m).map(move |k| (i, j, k))))
        .collect();
    let raw: Vec<PauliVector> = triples
        .par_iter()
        .filter_map(|&(i, j, k)| {
            let rows = [g[i].normalized(), g[j].normalized(), g[k].normalized()];
            let mat = Matrix3x4::from_fn(|r, c| rows[r][c]);
            let sv = mat.singular_values();
            if sv.min() < RANK_TOL {
                return None;
            }
            Some(kernel_3x4(&rows).normalized())
        })
        .collect();

    let mut normals: Vec<PauliVector> = Vec::new();
    for n in raw {
        let dup = normals
            .iter()
            .any(|u| (*u - n).norm() <= FACET_MERGE_TOL || (*u + n).norm() <= FACET_MERGE_TOL);
        if !dup {
            normals.push(n);
        }
    }
    let normals: Vec<PauliVector> = normals.into_iter().flat_map(|n| [n, -n]).collect();

    let degenerate = generator_span(g);
    Ok(FacetNormals {
        normals,
        degenerate,
    })
}

/// The span of a generator set when it is not all of ℝ⁴.
pub fn generator_span(g: &[PauliVector]) -> Option<DegenerateSpan> {
    let m = g.len();
    if m == 0 {
        return Some(DegenerateSpan {
            rank: 0,
            span: Vec::new(),
            complement: (0..4)
                .map(|i| {
                    let mut c = [0.0; 4];
                    c[i] = 1.0;
                    PauliVector::from(c)
                })
                .collect(),
        });
    }
    let full = nalgebra::DMatrix::from_fn(4, m, |r, c| g[c][r]);
    let svd = full.svd(true, false);
    let smax = svd.singular_values.max();
    let cut = RANK_TOL * smax.max(1.0);
    let rank = svd.singular_values.iter().filter(|&&s| s > cut).count();
    if rank == 4 {
        return None;
    }
    let u = svd.u.expect("requested U");
    // U has only min(4, m) columns
    let square = Matrix4::from_fn(|r, c| if c < u.ncols() { u[(r, c)] } else { 0.0 });
    let q = complete_basis(&square, u.ncols());
    let mut span = Vec::new();
    let mut complement = Vec::new();
    for c in 0..4 {
        let col = PauliVector::new(q[(0, c)], q[(1, c)], q[(2, c)], q[(3, c)]);
        let sv = svd.singular_values.get(c).copied().unwrap_or(0.0);
        if sv > cut {
            span.push(col);
        } else {
            complement.push(col);
        }
    }
    Some(DegenerateSpan {
        rank,
        span,
        complement,
    })
}

/// Extends the first `k` orthonormal columns of `m` to an orthonormal basis.
fn complete_basis(m: &Matrix4<f64>, k: usize) -> Matrix4<f64> {
    let mut cols: Vec<nalgebra::Vector4<f64>> = (0..k).map(|c| m.column(c).into_owned()).collect();
    for e in 0..4 {
        if cols.len() == 4 {
            break;
        }
        let mut v = nalgebra::Vector4::zeros();
        v[e] = 1.0;
        for c in &cols {
            v -= c * c.dot(&v);
        }
        if v.norm() > 1e-6 {
            cols.push(v / v.norm());
        }
    }
    Matrix4::from_columns(&cols)
}

/// Rescales four cone generators so that their box is the intersection of
/// the cone with its point reflection through `center`.
///
/// Writing `2·center = Σ γⱼ Bⱼ`, the largest `λ` with `2·center − λBᵢ` in
/// the cone is `γᵢ`, so the box generators are `γᵢ Bᵢ`.
pub fn box_from_cone(generators: &[PauliVector], center: &PauliVector) -> Result<FiniteAnsatz> {
    if generators.len() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "need 4 cone generators, got {}",
            generators.len()
        )));
    }
    let b = Matrix4::from_fn(|r, c| generators[c][r]);
    let scale = generators.iter().map(|g| g.norm()).fold(0.0, f64::max);
    let sv = b.singular_values();
    if scale == 0.0 || sv.min() < RANK_TOL * scale {
        return Err(Error::Rank(format!(
            "cone generators are linearly dependent (σ_min = {:e})",
            sv.min()
        )));
    }
    let target = (*center * 2.0).to_vector();
    let gamma = b
        .lu()
        .solve(&target)
        .ok_or_else(|| Error::Rank("singular generator matrix".into()))?;
    if let Some(i) = (0..4).find(|&i| !(gamma[i] > 0.0)) {
        return Err(Error::GeometricInfeasibility(format!(
            "reflected cone does not reach along generator {i} (λ = {:e})",
            gamma[i]
        )));
    }
    FiniteAnsatz::new(
        generators
            .iter()
            .enumerate()
            .map(|(i, g)| *g * gamma[i])
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::reflect_through;

    fn half_projectors_z() -> FiniteAnsatz {
        FiniteAnsatz::new(vec![
            PauliVector::new(0.5, 0.0, 0.0, 0.5),
            PauliVector::new(0.5, 0.0, 0.0, -0.5),
        ])
        .unwrap()
    }

    #[test]
    fn rejects_non_positive_generators() {
        assert!(FiniteAnsatz::new(vec![PauliVector::new(0.5, 0.0, 0.0, 0.6)]).is_err());
        assert!(FiniteAnsatz::new(vec![PauliVector::new(1.5, 0.0, 0.0, 0.0); 2]).is_err());
        assert!(FiniteAnsatz::new(vec![]).is_err());
    }

    #[test]
    fn mixture_validation() {
        let z = Vector3::z();
        assert!(SphericalAnsatz::mixture(vec![0.5, 0.4], vec![z, -z]).is_err());
        assert!(SphericalAnsatz::mixture(vec![1.5, -0.5], vec![z, -z]).is_err());
        assert!(SphericalAnsatz::mixture(vec![0.5, 0.5], vec![z, z * 1.1]).is_err());
        assert!(SphericalAnsatz::mixture(vec![1.0], vec![z, z]).is_err());
    }

    #[test]
    fn principal_vertex_examples() {
        assert_eq!(
            Ansatz::from(half_projectors_z()).principal_vertex(),
            PauliVector::HALF_IDENTITY
        );
        assert_eq!(
            SphericalAnsatz::Uniform.principal_vertex(),
            PauliVector::HALF_IDENTITY
        );
        let z = Vector3::z();
        let mx = SphericalAnsatz::mixture(vec![0.5, 0.5], vec![z, z]).unwrap();
        assert_eq!(mx.principal_vertex(), PauliVector::new(1.0, 0.0, 0.0, 1.0));
    }

    #[test]
    fn box_support_examples() {
        let w = PauliVector::new(0.0, 0.0, 0.0, 1.0);
        assert!((half_projectors_z().box_support(&w) - 0.25).abs() < 1e-15);
        assert!((SphericalAnsatz::Uniform.box_support(&w) - 0.125).abs() < 1e-15);
        // ½·max over x₀ of x₀(1 − x₀)
        let best = (0..=1000)
            .map(|i| i as f64 / 1000.0)
            .map(|x| x * (1.0 - x))
            .fold(0.0, f64::max);
        assert!((SphericalAnsatz::Uniform.box_support(&w) - 0.5 * best).abs() < 1e-12);
        assert_eq!(
            SphericalAnsatz::Uniform.box_support(&PauliVector::ZERO),
            0.0
        );
        assert_eq!(half_projectors_z().box_support(&PauliVector::ZERO), 0.0);
    }

    /// Gauss–Legendre quadrature of `∫ ½ max(0, ½(a + r t)) dt` over the
    /// polar coordinate, splitting at the kink.
    fn uniform_support_quadrature(a: f64, r: f64) -> f64 {
        let integrand = |t: f64| 0.5 * (0.5 * (a + r * t)).max(0.0);
        let kink = if r > 0.0 {
            (-a / r).clamp(-1.0, 1.0)
        } else {
            -1.0
        };
        // 20-point composite Simpson on each smooth piece is exact for the
        // piecewise-linear integrand; use both pieces.
        let simpson = |lo: f64, hi: f64| {
            let n = 20;
            let h = (hi - lo) / n as f64;
            let mut s = integrand(lo) + integrand(hi);
            for i in 1..n {
                let c = if i % 2 == 1 { 4.0 } else { 2.0 };
                s += c * integrand(lo + i as f64 * h);
            }
            s * h / 3.0
        };
        simpson(-1.0, kink) + simpson(kink, 1.0)
    }

    #[test]
    fn uniform_support_matches_quadrature() {
        for &(a, r) in &[
            (0.0, 1.0),
            (0.3, 0.7),
            (-0.2, 0.9),
            (1.0, 0.5),
            (-1.0, 0.5),
            (0.7, 0.71),
        ] {
            let closed = uniform_box_support(a, r);
            let quad = uniform_support_quadrature(a, r);
            assert!(
                (closed - quad).abs() <= 1e-8 * quad.abs().max(1e-12),
                "a={a} r={r}: {closed} vs {quad}"
            );
        }
    }

    #[test]
    fn uniform_support_matches_sphere_cubature() {
        // independent route: Fibonacci-lattice average over S²
        let pts = fibonacci_sphere(200_000);
        for w in [
            PauliVector::new(0.2, 0.3, -0.5, 0.1),
            PauliVector::new(-0.1, 0.0, 0.4, 0.9),
        ] {
            let avg: f64 = pts
                .iter()
                .map(|n| PauliVector::from_parts(1.0, n).inner(&w).max(0.0))
                .sum::<f64>()
                / pts.len() as f64;
            assert!((SphericalAnsatz::Uniform.box_support(&w) - avg).abs() < 1e-5);
        }
    }

    #[test]
    fn boundary_point_examples() {
        let uni = SphericalAnsatz::Uniform;
        for n0 in [Vector3::z(), Vector3::new(0.6, 0.0, 0.8)] {
            let bp = boundary_point(&uni, &n0, 0.0, None).unwrap();
            assert!((bp.x0 - 0.5).abs() < 1e-15);
            assert!((bp.b.norm() - 0.25).abs() < 1e-15);
            assert!(bp.support_gap(&uni).abs() < 1e-12);
        }
        let bp = boundary_point(&uni, &Vector3::z(), 1.0, None).unwrap();
        assert_eq!(bp.x0, 0.0);
        assert_eq!(bp.b.norm(), 0.0);
        let bp = boundary_point(&uni, &Vector3::z(), 3.0, None).unwrap();
        assert_eq!((bp.x0, bp.b.norm()), (0.0, 0.0));
        assert!(bp.support_gap(&uni).abs() < 1e-12);
        let bp = boundary_point(&uni, &Vector3::z(), -2.0, None).unwrap();
        assert_eq!((bp.x0, bp.b.norm()), (1.0, 0.0));
        assert!(bp.support_gap(&uni).abs() < 1e-12);

        let z = Vector3::z();
        let mx = SphericalAnsatz::mixture(vec![0.5, 0.5], vec![z, -z]).unwrap();
        let bp = boundary_point(&mx, &z, 1.0, Some(&[0.3, 0.9])).unwrap();
        assert!((bp.x0 - 0.15).abs() < 1e-15);
        assert!((bp.b - Vector3::new(0.0, 0.0, 0.15)).norm() < 1e-15);
        assert!(bp.support_gap(&mx).abs() < 1e-12);
    }

    #[test]
    fn boundary_point_rejects_bad_parameters() {
        let uni = SphericalAnsatz::Uniform;
        assert!(boundary_point(&uni, &Vector3::new(0.0, 0.0, 2.0), 0.0, None).is_err());
        assert!(boundary_point(&uni, &Vector3::z(), 0.0, Some(&[0.5])).is_err());
        let z = Vector3::z();
        let mx = SphericalAnsatz::mixture(vec![0.5, 0.5], vec![z, -z]).unwrap();
        assert!(boundary_point(&mx, &z, 1.0, Some(&[0.3])).is_err());
        assert!(boundary_point(&mx, &z, 1.0, Some(&[1.3, 0.0])).is_err());
    }

    #[test]
    fn radius_examples() {
        assert_eq!(uniform_cross_section_radius(0.5).unwrap(), 0.25);
        assert_eq!(uniform_cross_section_radius(0.0).unwrap(), 0.0);
        assert!((uniform_cross_section_radius(0.3).unwrap() - 0.21).abs() < 1e-15);
        assert!(matches!(
            uniform_cross_section_radius(1.2),
            Err(Error::Domain(_))
        ));
        assert!(uniform_cross_section_radius(-0.1).is_err());
    }

    #[test]
    fn hypercube_facets() {
        let gens = vec![
            PauliVector::new(0.5, 0.0, 0.0, 0.0),
            PauliVector::new(0.5, 0.5, 0.0, 0.0),
            PauliVector::new(0.5, 0.0, 0.5, 0.0),
            PauliVector::new(0.5, 0.0, 0.0, 0.5),
        ];
        let f = facet_normals(&FiniteAnsatz::new(gens.clone()).unwrap()).unwrap();
        assert_eq!(f.normals.len(), 8);
        assert!(f.degenerate.is_none());
        // each normal annihilates exactly three generators
        for n in &f.normals {
            let zeros = gens.iter().filter(|g| g.dot(n).abs() < 1e-12).count();
            assert_eq!(zeros, 3);
        }
    }

    #[test]
    fn generic_facet_count() {
        let gens = vec![
            PauliVector::new(0.3, 0.1, 0.2, 0.0),
            PauliVector::new(0.2, -0.1, 0.0, 0.15),
            PauliVector::new(0.25, 0.0, -0.2, 0.1),
            PauliVector::new(0.25, 0.1, 0.1, -0.2),
        ];
        let f = facet_normals(&FiniteAnsatz::new(gens).unwrap()).unwrap();
        assert_eq!(f.normals.len(), 8);
    }

    #[test]
    fn parallel_generators_merge_facets() {
        let base = [
            PauliVector::new(0.2, 0.1, 0.0, 0.0),
            PauliVector::new(0.2, 0.0, 0.1, 0.0),
            PauliVector::new(0.2, 0.0, 0.0, 0.1),
            PauliVector::new(0.2, -0.1, 0.0, 0.0),
            PauliVector::new(0.1, 0.0, -0.05, 0.05),
        ];
        let mut gens = base.to_vec();
        gens.push(base[0] * 0.5);

        // direct count of distinct kernels over independent triples
        let mut distinct: Vec<PauliVector> = Vec::new();
        for i in 0..6 {
            for j in i + 1..6 {
                for k in j + 1..6 {
                    let n = kernel_3x4(&[gens[i], gens[j], gens[k]]);
                    if n.norm() < 1e-12 {
                        continue;
                    }
                    let n = n.normalized();
                    if !distinct
                        .iter()
                        .any(|u| (*u - n).norm() < 1e-9 || (*u + n).norm() < 1e-9)
                    {
                        distinct.push(n);
                    }
                }
            }
        }
        let f = facet_normals(&FiniteAnsatz::new(gens).unwrap()).unwrap();
        assert_eq!(f.normals.len(), 2 * distinct.len());
        assert!(f.normals.len() < 40);
    }

    #[test]
    fn coplanar_generators_flag_degenerate() {
        let gens = vec![
            PauliVector::new(0.3, 0.1, 0.0, 0.0),
            PauliVector::new(0.3, 0.0, 0.1, 0.0),
            PauliVector::new(0.3, -0.1, 0.0, 0.0),
            PauliVector::new(0.1, 0.05, 0.05, 0.0),
        ];
        let f = facet_normals(&FiniteAnsatz::new(gens.clone()).unwrap()).unwrap();
        let span = f.degenerate.expect("rank 3");
        assert_eq!(span.rank, 3);
        assert_eq!(span.span.len(), 3);
        assert_eq!(span.complement.len(), 1);
        for g in &gens {
            assert!(g.dot(&span.complement[0]).abs() < 1e-12);
        }
        assert!(facet_normals(&FiniteAnsatz::new(gens[..2].to_vec()).unwrap()).is_err());
    }

    fn tetrahedral_cone() -> Vec<PauliVector> {
        let s = 1.0 / 3f64.sqrt();
        [
            [1.0, 1.0, 1.0],
            [1.0, -1.0, -1.0],
            [-1.0, 1.0, -1.0],
            [-1.0, -1.0, 1.0],
        ]
        .iter()
        .map(|v| PauliVector::new(1.0, s * v[0], s * v[1], s * v[2]))
        .collect()
    }

    #[test]
    fn box_from_tetrahedral_cone() {
        // Werner(1/3): vertex (𝕀ᴬ)′ = (1, 0, 0, 0)
        let center = PauliVector::HALF_IDENTITY * 0.5;
        let bx = box_from_cone(&tetrahedral_cone(), &center).unwrap();
        assert!(bx.principal_vertex().max_abs_diff(&(center * 2.0)) < 1e-9);
        // symmetric: all scalings equal
        let l: Vec<f64> = bx.generators().iter().map(|g| g.x0()).collect();
        for x in &l {
            assert!((x - l[0]).abs() < 1e-12);
        }
        assert!((l[0] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn box_from_axis_cone_equal_scalings() {
        let gens = vec![
            PauliVector::new(1.0, 0.0, 0.0, 0.0),
            PauliVector::new(1.0, 1.0, 0.0, 0.0),
            PauliVector::new(1.0, 0.0, 1.0, 0.0),
            PauliVector::new(1.0, 0.0, 0.0, 1.0),
        ];
        // center on the cone axis Σ Bᵢ
        let axis: PauliVector = gens.iter().copied().sum();
        let bx = box_from_cone(&gens, &(axis * 0.125)).unwrap();
        for g in bx.generators() {
            assert!((g.x0() - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn box_from_cone_is_reflection_symmetric() {
        let gens = vec![
            PauliVector::new(1.0, 0.9, 0.1, 0.0),
            PauliVector::new(1.0, -0.4, 0.8, 0.1),
            PauliVector::new(1.0, -0.3, -0.6, 0.5),
            PauliVector::new(1.0, 0.1, -0.2, -0.9),
        ];
        let center = PauliVector::new(0.5, 0.05, 0.02, -0.03);
        let bx = box_from_cone(&gens, &center).unwrap();
        assert!(bx.principal_vertex().max_abs_diff(&(center * 2.0)) < 1e-9);
        // box equals its own reflection: support dominance both ways
        let fa = bx.clone();
        let reflected = |w: &PauliVector| {
            // h_{2c − K}(w) = 2⟨c, w⟩ + h_K(−w)
            2.0 * center.inner(w) + fa.box_support(&-*w)
        };
        for w in crate::sampling::unit_4_directions(500) {
            assert!((bx.box_support(&w) - reflected(&w)).abs() < 1e-12);
        }
        // every vertex reflects into the cone spanned by the originals
        let refl = reflect_through(&bx.generators()[0], &center);
        let b = Matrix4::from_fn(|r, c| gens[c][r]);
        let coeff = b.lu().solve(&refl.to_vector()).unwrap();
        assert!(coeff.iter().all(|&x| x > -1e-12));
    }

    #[test]
    fn box_from_cone_errors() {
        let mut gens = tetrahedral_cone();
        gens[3] = gens[0] * 2.0;
        assert!(matches!(
            box_from_cone(&gens, &PauliVector::new(0.5, 0.0, 0.0, 0.0)),
            Err(Error::Rank(_))
        ));
        // center far outside the cone
        assert!(matches!(
            box_from_cone(&tetrahedral_cone(), &PauliVector::new(0.5, 2.0, 0.0, 0.0)),
            Err(Error::GeometricInfeasibility(_))
        ));
    }
}
