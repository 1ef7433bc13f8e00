//! Containment of the steering outcomes in a polyhedral box.

use serde::Serialize;

use crate::ansatz::{facet_normals, generator_span, Ansatz, FiniteAnsatz};
use crate::epr::{steering_support, EprMap};
use crate::error::{Error, Result};
use crate::pauli::PauliVector;
use crate::sampling::unit_4_directions;

/// The box vertex must coincide with the map's image of `𝕀` this closely.
pub const VERTEX_TOL: f64 = 1e-8;
pub const DEFAULT_DIRECTIONS: usize = 2048;
pub const REFINE_STEPS: usize = 20;
/// Number of worst sampled directions that get locally refined.
const REFINE_SEEDS: usize = 8;

/// Result of a containment check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PackingCertificate {
    pub contained: bool,
    /// A unit direction `w` with `h_steer(w) > h_box(w) + tol`.
    pub witness: Option<PauliVector>,
    /// `min_w h_box(w) − h_steer(w)` over the checked unit directions.
    pub slack: f64,
    pub directions_checked: usize,
    /// The box was not full-dimensional and sampled directions were used
    /// in place of its facets.
    pub degenerate_fallback: bool,
}

fn slack_at(map: &EprMap, ansatz: &Ansatz, w: &PauliVector) -> f64 {
    let w = w.normalized();
    ansatz.box_support(&w) - steering_support(map, &w)
}

/// Checks `𝓜ₐ′ ⊆ box(ansatz)` by support-function dominance.
///
/// Finite ansätze are checked exactly over their facet normals; spherical
/// ones over `n_directions` quasi-random unit 4-vectors followed by local
/// refinement around the worst of them.
pub fn check_packing(
    map: &EprMap,
    ansatz: &Ansatz,
    tol: f64,
    n_directions: usize,
) -> Result<PackingCertificate> {
    if !(tol >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "tolerance must be nonnegative, got {tol}"
        )));
    }
    let vertex = ansatz.principal_vertex();
    let image = map.vertex();
    if vertex.max_abs_diff(&image) > VERTEX_TOL {
        return Err(Error::Precondition(format!(
            "principal vertex {:?} does not sit at the reduced state {:?}",
            vertex.coords(),
            image.coords()
        )));
    }

    match ansatz {
        Ansatz::Finite(fin) => {
            let exact = if fin.len() >= 3 {
                let facets = facet_normals(fin)?;
                facets.degenerate.is_none().then_some(facets.normals)
            } else {
                None
            };
            match exact {
                Some(normals) => Ok(finish(map, ansatz, tol, &normals, false)),
                None => Ok(degenerate_check(map, ansatz, fin, tol, n_directions)),
            }
        }
        Ansatz::Spherical(_) => Ok(sampled_check(
            map,
            ansatz,
            tol,
            n_directions,
            Vec::new(),
            false,
        )),
    }
}

fn finish(
    map: &EprMap,
    ansatz: &Ansatz,
    tol: f64,
    directions: &[PauliVector],
    fallback: bool,
) -> PackingCertificate {
    let (slack, worst) = directions
        .iter()
        .map(|w| (slack_at(map, ansatz, w), *w))
        .fold((f64::INFINITY, PauliVector::ZERO), |acc, x| {
            if x.0 < acc.0 {
                x
            } else {
                acc
            }
        });
    certificate(slack, worst, tol, directions.len(), fallback)
}

fn certificate(
    slack: f64,
    worst: PauliVector,
    tol: f64,
    checked: usize,
    fallback: bool,
) -> PackingCertificate {
    let contained = slack >= -tol;
    PackingCertificate {
        contained,
        witness: (!contained).then(|| worst.normalized()),
        slack,
        directions_checked: checked,
        degenerate_fallback: fallback,
    }
}

fn degenerate_check(
    map: &EprMap,
    ansatz: &Ansatz,
    fin: &FiniteAnsatz,
    tol: f64,
    n_directions: usize,
) -> PackingCertificate {
    let mut extra = Vec::new();
    if let Some(span) = generator_span(fin.generators()) {
        for c in span.complement {
            extra.push(c);
            extra.push(-c);
        }
    }
    sampled_check(map, ansatz, tol, n_directions, extra, true)
}

fn sampled_check(
    map: &EprMap,
    ansatz: &Ansatz,
    tol: f64,
    n_directions: usize,
    extra: Vec<PauliVector>,
    fallback: bool,
) -> PackingCertificate {
    let mut dirs = unit_4_directions(n_directions);
    dirs.extend(extra);
    let mut scored: Vec<(f64, PauliVector)> = dirs
        .iter()
        .map(|w| (slack_at(map, ansatz, w), *w))
        .collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    // Directions supported at O or at the vertex have slack ≥ 0 exactly and
    // form flat plateaus, so refinement seeds come from the rim.
    let mut seeds: Vec<(f64, PauliVector)> = scored
        .iter()
        .copied()
        .filter(|(_, w)| on_rim(map, w))
        .collect();
    if seeds.is_empty() {
        seeds = scored.clone();
    }

    let spacing = if n_directions > 0 {
        // typical angular gap between n points on S³
        (2.0 * std::f64::consts::PI.powi(2) / n_directions as f64).cbrt()
    } else {
        1.0
    };
    let mut best = scored
        .first()
        .copied()
        .unwrap_or((f64::INFINITY, PauliVector::HALF_IDENTITY));
    let mut evaluations = scored.len();
    let f = |w: &PauliVector| slack_at(map, ansatz, w);
    for &(s0, w0) in seeds.iter().take(REFINE_SEEDS) {
        let (s, w, evals) = refine(&f, w0, s0, spacing, REFINE_STEPS);
        evaluations += evals;
        if s < best.0 {
            best = (s, w);
        }
    }
    if scored.is_empty() {
        let (s, w, evals) = refine(&f, best.1, f(&best.1), 1.0, REFINE_STEPS);
        best = (s, w);
        evaluations += evals;
    }
    certificate(best.0, best.1, tol, evaluations, fallback)
}

/// The steering support in direction `w` is attained on a rank-one
/// projector's image rather than at O or the vertex.
fn on_rim(map: &EprMap, w: &PauliVector) -> bool {
    let v = map.pullback(w);
    v.spatial_norm() > v.x0().abs()
}

/// Minimizes `f` over S³ near `start` by golden-section searches along
/// great circles through the current point, shrinking the search arc.
pub(crate) fn refine<F: Fn(&PauliVector) -> f64>(
    f: &F,
    start: PauliVector,
    start_value: f64,
    arc: f64,
    steps: usize,
) -> (f64, PauliVector, usize) {
    let mut w = start.normalized();
    let mut val = start_value;
    let mut evals = 0;
    let mut arc = arc;
    for _ in 0..steps {
        let mut improved = false;
        for u in tangent_basis(&w) {
            let along = |t: f64| (w * t.cos() + u * t.sin()).normalized();
            let g = |t: f64| f(&along(t));
            let (t, v, n) = golden_section(&g, -arc, arc, 30);
            evals += n;
            if v < val {
                val = v;
                w = along(t);
                improved = true;
            }
        }
        if !improved {
            arc *= 0.5;
        } else {
            arc *= 0.8;
        }
    }
    (val, w, evals)
}

/// Orthonormal basis of the tangent space of S³ at unit `w`.
fn tangent_basis(w: &PauliVector) -> [PauliVector; 3] {
    let mut basis: Vec<PauliVector> = Vec::with_capacity(3);
    for e in 0..4 {
        let mut c = [0.0; 4];
        c[e] = 1.0;
        let mut v = PauliVector::from(c);
        v = v - *w * w.dot(&v);
        for b in &basis {
            v = v - *b * b.dot(&v);
        }
        if v.norm() > 1e-6 {
            basis.push(v.normalized());
        }
        if basis.len() == 3 {
            break;
        }
    }
    [basis[0], basis[1], basis[2]]
}

fn golden_section<G: Fn(f64) -> f64>(
    g: &G,
    mut a: f64,
    mut b: f64,
    iters: usize,
) -> (f64, f64, usize) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (g(c), g(d));
    for _ in 0..iters {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = g(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = g(d);
        }
    }
    let ends = [(a, g(a)), (b, g(b)), (c, fc), (d, fd), (0.0, g(0.0))];
    let best = ends.iter().copied().fold(
        (0.0, f64::INFINITY),
        |acc, x| if x.1 < acc.1 { x } else { acc },
    );
    (best.0, best.1, iters + 7)
}
