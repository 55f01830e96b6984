//! Reference curves with known geometry: circles of prescribed curvature
//! and gnomonic lifts of plane curves whose one-sided curvatures blow up.
//!
//! The lifts use the central projection from the tangent plane at (1,0,0):
//! a plane point (x, y) maps to (1, x, y)/‖(1, x, y)‖, which is a
//! second-order isometry at the origin. Plane x runs along the sphere's
//! y-axis and plane y along the z-axis, so a lift through the origin starts
//! at (1,0,0) with tangent (0,0,1) when the plane curve heads up the y-axis.

use nalgebra::Vector3;

use crate::controls::arccot;
use crate::curve::{reparameterize_constant_speed, Param, SphericalCurve};

/// Circle of spherical radius `rho ∈ (0, π)` about the north pole, traversed
/// once anticlockwise; geodesic curvature cot(ρ).
pub fn circle_of_radius(rho: f64, m: usize) -> SphericalCurve {
    let samples = (0..=m)
        .map(|k| {
            let t = std::f64::consts::TAU * (k as f64) / (m as f64);
            Vector3::new(rho.sin() * t.cos(), rho.sin() * t.sin(), rho.cos())
        })
        .collect();
    SphericalCurve::with_length(samples, Param::ConstantSpeed, std::f64::consts::TAU * rho.sin())
        .unwrap()
}

/// Circle of constant geodesic curvature `kappa` (the equator for 0).
pub fn circle_of_curvature(kappa: f64, m: usize) -> SphericalCurve {
    circle_of_radius(arccot(kappa), m)
}

/// Gnomonic lift of a plane curve given as y ↦ x(y) on y ∈ [−half_width,
/// +half_width], sampled uniformly in y and reparameterized to constant
/// speed. The symmetric sampling keeps y = 0 at the middle node.
fn gnomonic_lift(x_of_y: impl Fn(f64) -> f64, half_width: f64, m: usize) -> SphericalCurve {
    assert!(m.is_multiple_of(2), "even cell count keeps the origin on a node");
    let samples: Vec<Vector3<f64>> = (0..=m)
        .map(|k| {
            let y = half_width * (2.0 * (k as f64) / (m as f64) - 1.0);
            let x = x_of_y(y);
            Vector3::new(1.0, x, y).normalize()
        })
        .collect();
    let raw = SphericalCurve::new(samples, Param::Raw).unwrap();
    reparameterize_constant_speed(&raw).unwrap()
}

/// Lift of the plane curve y ↦ (−|y|^{4/3}, y): C¹ with curvature blowing up
/// on both sides of the origin. No circle is tangent from the left there, and
/// arbitrarily small circles are tangent from the right, so both the upper
/// and lower curvatures at the middle node are +∞.
pub fn unbounded_turn_curve(m: usize, half_width: f64) -> SphericalCurve {
    gnomonic_lift(|y| -y.abs().powf(4.0 / 3.0), half_width, m)
}

/// Lift of the plane curve y ↦ (−sign(y)·|y|^{5/3}, y): a C¹ inflection at
/// the origin crossing every tangent circle, so the upper curvature there is
/// +∞ and the lower curvature is −∞.
pub fn inflection_curve(m: usize, half_width: f64) -> SphericalCurve {
    gnomonic_lift(|y| -y.signum() * y.abs().powf(5.0 / 3.0), half_width, m)
}

/// Tangency window, in parameter units, spanning a few grid cells around the
/// middle node. Narrow enough that a circle of the smallest probed radius
/// still encloses the window of [`unbounded_turn_curve`], wide enough to
/// hold several samples at the fixtures' default resolution.
pub fn micro_window(curve: &SphericalCurve) -> f64 {
    8e-5 / curve.length()
}
