//! Cross-sections through the `X₀` axis: box boundary, steering outcomes
//! and the forward light cone.

use std::io::Write;

use nalgebra::Vector3;
use serde::Serialize;

use super::real;
use super::sweep::csv_err;
use crate::ansatz::{boundary_point, SphericalAnsatz};
use crate::epr::{steering_support_point, EprMap};
use crate::error::{Error, Result};
use crate::pauli::PauliVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Curve {
    Box,
    Steering,
    LightCone,
}

impl Curve {
    pub fn name(self) -> &'static str {
        match self {
            Curve::Box => "box",
            Curve::Steering => "steering",
            Curve::LightCone => "light_cone",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub curve: Curve,
    pub x0: f64,
    /// Component of `b⃗` along the slice direction.
    pub b_par: f64,
}

/// The plane spanned by the `X₀` axis and the unit vector `direction`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Slice {
    pub direction: Vector3<f64>,
    /// Samples per curve branch; odd counts put a sample at `x₀ = ½`.
    pub points: usize,
}

impl Slice {
    pub fn new(direction: Vector3<f64>, points: usize) -> Result<Self> {
        let n = direction.norm();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::InvalidInput(
                "slice direction must be nonzero".into(),
            ));
        }
        if points < 2 {
            return Err(Error::InvalidInput(
                "need at least 2 samples per curve".into(),
            ));
        }
        Ok(Slice {
            direction: direction / n,
            points,
        })
    }
}

fn linspace(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| {
        if k + 1 == n {
            b
        } else {
            a + (b - a) * k as f64 / (n - 1) as f64
        }
    })
}

/// Box boundary traced by cap responses (upper branch `n̂₀ = d`, then lower
/// branch `n̂₀ = −d` back), the steering-outcome boundary from support
/// points over in-plane directions when a map is given, and `|b⃗| = x₀`.
pub fn export_boundary(
    ansatz: &SphericalAnsatz,
    map: Option<&EprMap>,
    slice: &Slice,
) -> Result<Vec<CurvePoint>> {
    let d = slice.direction;
    let n = slice.points;
    let mut out = Vec::with_capacity(5 * n);
    for (sign, lambdas) in [
        (1.0, linspace(1.0, -1.0, n).collect::<Vec<_>>()),
        (-1.0, linspace(-1.0, 1.0, n).collect()),
    ] {
        for l in lambdas {
            let bp = boundary_point(ansatz, &(d * sign), l, None)?;
            out.push(CurvePoint {
                curve: Curve::Box,
                x0: bp.x0,
                b_par: bp.b.dot(&d),
            });
        }
    }
    if let Some(map) = map {
        let mut last: Option<(f64, f64)> = None;
        for k in 0..n {
            let theta = std::f64::consts::TAU * k as f64 / n as f64;
            let w = PauliVector::from_parts(theta.cos(), &(d * theta.sin()));
            let p = steering_support_point(map, &w);
            let pt = (p.x0(), p.spatial().dot(&d));
            if last.is_some_and(|q| (q.0 - pt.0).abs() <= 1e-15 && (q.1 - pt.1).abs() <= 1e-15) {
                continue;
            }
            last = Some(pt);
            out.push(CurvePoint {
                curve: Curve::Steering,
                x0: pt.0,
                b_par: pt.1,
            });
        }
    }
    for x in linspace(1.0, 0.0, n) {
        out.push(CurvePoint {
            curve: Curve::LightCone,
            x0: x,
            b_par: -x,
        });
    }
    for x in linspace(0.0, 1.0, n).skip(1) {
        out.push(CurvePoint {
            curve: Curve::LightCone,
            x0: x,
            b_par: x,
        });
    }
    Ok(out)
}

/// Linear interpolation of the `b_par ≥ 0` branch of `curve` at `x0`.
pub fn upper_branch_at(points: &[CurvePoint], curve: Curve, x0: f64) -> Option<f64> {
    let mut branch: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.curve == curve && p.b_par >= 0.0)
        .map(|p| (p.x0, p.b_par))
        .collect();
    branch.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let i = branch.partition_point(|p| p.0 < x0);
    if i < branch.len() && branch[i].0 == x0 {
        // vertical runs at a shared x₀ resolve to their outermost value
        let top = branch[i..]
            .iter()
            .take_while(|p| p.0 == x0)
            .map(|p| p.1)
            .fold(f64::MIN, f64::max);
        return Some(top);
    }
    if i == 0 || i == branch.len() {
        return None;
    }
    let (a, b) = (branch[i - 1], branch[i]);
    Some(a.1 + (b.1 - a.1) * (x0 - a.0) / (b.0 - a.0))
}

pub fn write_boundary_csv<W: Write>(points: &[CurvePoint], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["curve", "x0", "b_par"]).map_err(csv_err)?;
    for p in points {
        wr.write_record([p.curve.name().to_string(), real(p.x0), real(p.b_par)])
            .map_err(csv_err)?;
    }
    wr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epr::{epr_map, Side};
    use crate::states::{build, StateSpec};

    #[test]
    fn ansatz_only_export() {
        let s = Slice::new(Vector3::z(), 101).unwrap();
        let pts = export_boundary(&SphericalAnsatz::Uniform, None, &s).unwrap();
        assert!(pts.iter().all(|p| p.curve != Curve::Steering));
        for p in pts.iter().filter(|p| p.curve == Curve::Box) {
            assert!((p.b_par.abs() - p.x0 * (1.0 - p.x0)).abs() < 1e-15);
            assert!(p.b_par.abs() <= p.x0 + 1e-15);
        }
    }

    #[test]
    fn werner_steering_curve() {
        let p = 0.5;
        let map = epr_map(&build(&StateSpec::Werner { p }).unwrap(), Side::AliceToBob);
        let s = Slice::new(Vector3::z(), 401).unwrap();
        let pts = export_boundary(&SphericalAnsatz::Uniform, Some(&map), &s).unwrap();
        for k in 1..100 {
            let x = k as f64 / 100.0;
            let st = upper_branch_at(&pts, Curve::Steering, x).unwrap();
            assert!((st - p * x.min(1.0 - x)).abs() < 1e-12, "{x}: {st}");
        }
    }
}
