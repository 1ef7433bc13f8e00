//! Planar boundary export: tangency near the modified-Werner threshold and
//! light-cone containment.

use nalgebra::Vector3;

use epr_geometry::ansatz::SphericalAnsatz;
use epr_geometry::epr::{epr_map, Side};
use epr_geometry::states::{build, StateSpec};
use epr_geometry::workbench::boundary::upper_branch_at;
use epr_geometry::workbench::{export_boundary, Curve, CurvePoint, Slice};

const POINTS: usize = 4001;

fn export(q: Option<f64>) -> Vec<CurvePoint> {
    let map = q.map(|q| {
        epr_map(
            &build(&StateSpec::ModifiedWerner { p: 0.4, q }).unwrap(),
            Side::AliceToBob,
        )
    });
    export_boundary(
        &SphericalAnsatz::Uniform,
        map.as_ref(),
        &Slice::new(Vector3::z(), POINTS).unwrap(),
    )
    .unwrap()
}

/// `(x₀, steering / box)` along the upper branches, sampled on a grid
/// and at every steering vertex.
fn ratio_profile(pts: &[CurvePoint]) -> Vec<(f64, f64)> {
    let mut xs: Vec<f64> = (1..1000).map(|k| k as f64 / 1000.0).collect();
    xs.extend(
        pts.iter()
            .filter(|p| p.curve == Curve::Steering && p.x0 > 1e-3 && p.x0 < 1.0 - 1e-3)
            .map(|p| p.x0),
    );
    xs.into_iter()
        .filter_map(|x| {
            let b = upper_branch_at(pts, Curve::Box, x)?;
            let s = upper_branch_at(pts, Curve::Steering, x)?;
            Some((x, s / b))
        })
        .collect()
}

fn peak(profile: &[(f64, f64)]) -> (f64, f64) {
    profile
        .iter()
        .copied()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap()
}

#[test]
fn steering_curve_touches_box_at_one_point() {
    let (p, q) = (0.4, 0.745);
    let profile = ratio_profile(&export(Some(q)));
    assert!(profile.len() > 900);
    let (x_star, r_star) = peak(&profile);
    // box polyline error is O(Δλ²)
    assert!(
        r_star < 1.0 + 1e-6,
        "steering pokes out: {r_star} at {x_star}"
    );
    assert!(r_star > 1.0 - 1e-3, "no contact: {r_star}");
    // contact at the image of the +ẑ projector: x₀ = ½(1 + s), b = p/2
    let s = q * (1.0 - p);
    assert!(
        (x_star - 0.5 * (1.0 + s)).abs() < 1e-9,
        "contact at {x_star}"
    );
    for &(x, r) in &profile {
        if (x - x_star).abs() > 0.05 {
            assert!(r < 0.99, "second contact near {x}: {r}");
        }
    }
}

#[test]
fn steering_curve_crosses_box_past_threshold() {
    let (_, r) = peak(&ratio_profile(&export(Some(0.76))));
    assert!(r > 1.0 + 1e-3, "{r}");
    let (_, r) = peak(&ratio_profile(&export(Some(0.6))));
    assert!(r < 0.99, "{r}");
}

#[test]
fn box_lies_inside_light_cone() {
    let pts = export(None);
    assert!(pts.iter().all(|p| p.curve != Curve::Steering));
    let boxed: Vec<_> = pts.iter().filter(|p| p.curve == Curve::Box).collect();
    assert_eq!(boxed.len(), 2 * POINTS);
    for p in boxed {
        assert!(p.b_par.abs() <= p.x0.min(1.0 - p.x0) + 1e-15, "{p:?}");
        assert!((p.b_par.abs() - p.x0 * (1.0 - p.x0)).abs() < 1e-15, "{p:?}");
    }
    let cone: Vec<_> = pts.iter().filter(|p| p.curve == Curve::LightCone).collect();
    assert!(cone.iter().all(|p| p.b_par.abs() == p.x0));
}
