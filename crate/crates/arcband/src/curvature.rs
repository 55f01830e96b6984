//! Geodesic-curvature profiles and the tangent-circle upper/lower curvatures.
//!
//! The profile estimates κ = ⟨t', n⟩ by central differences of the frame
//! tangents. The upper and lower curvatures at a point compare the curve
//! against the family of circles tangent to it there: κ⁺ is the infimum of
//! cot r over circles the curve stays outside of (tangent from the left),
//! κ⁻ the supremum over circles it stays inside of (tangent from the right).
//! A circle of spherical radius r tangent at γ(t₀) with matching oriented
//! tangent has center
//!
//! ```text
//!     a = cos(r)·γ(t₀) + sin(r)·n(t₀),
//! ```
//!
//! for either side; only the inequality on d(γ(t), a) differs. Circles of a
//! fixed tangency point nest, so each side's passing radii form an interval
//! and bisection finds its boundary.

use serde::{Deserialize, Serialize};

use crate::curve::{sphere_distance, SphericalCurve};
use crate::error::{Error, Result};
use crate::integrator::{frame_from_curve, FrenetPath};
use crate::so3::frame_columns;
use nalgebra::Vector3;

/// Smallest circle radius probed by the κ± bisection, in radians.
pub const RADIUS_FLOOR: f64 = 1e-3;

/// Curvature magnitude beyond which a κ± estimate is reported as infinite.
///
/// A fixed evaluation window cannot distinguish a genuine tangent circle
/// from penetration shallower than the tolerance, so estimates beyond this
/// scale mean "no macroscopic tangent circle on that side", which is exactly
/// what the infinite values encode.
pub const CURVATURE_CEILING: f64 = 10.0;

/// Bisection iterations for the κ± radius boundary (resolution < 1e-9 rad).
const BISECT_ITERS: usize = 40;

/// Number of base points sampled by [`band_report`].
pub const BAND_REPORT_STATIONS: usize = 33;

/// Which side a circle is tangent from: `Left` keeps the curve outside the
/// disc, `Right` keeps it inside.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// A curvature value extended with the conventions inf ∅ = +∞, sup ∅ = −∞.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ExtendedCurvature {
    NegInfinite,
    Finite(f64),
    PosInfinite,
}

impl ExtendedCurvature {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedCurvature::Finite(_))
    }

    pub fn finite(&self) -> Option<f64> {
        match self {
            ExtendedCurvature::Finite(x) => Some(*x),
            _ => None,
        }
    }

    /// Total order with −∞ < finite < +∞.
    pub fn total_cmp(&self, other: &ExtendedCurvature) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        use ExtendedCurvature::*;
        match (self, other) {
            (NegInfinite, NegInfinite) | (PosInfinite, PosInfinite) => Equal,
            (NegInfinite, _) | (_, PosInfinite) => Less,
            (_, NegInfinite) | (PosInfinite, _) => Greater,
            (Finite(a), Finite(b)) => a.total_cmp(b),
        }
    }

    pub fn min(self, other: ExtendedCurvature) -> ExtendedCurvature {
        if self.total_cmp(&other).is_le() {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: ExtendedCurvature) -> ExtendedCurvature {
        if self.total_cmp(&other).is_ge() {
            self
        } else {
            other
        }
    }
}

impl std::fmt::Display for ExtendedCurvature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtendedCurvature::NegInfinite => f.write_str("-inf"),
            ExtendedCurvature::Finite(x) => write!(f, "{x}"),
            ExtendedCurvature::PosInfinite => f.write_str("+inf"),
        }
    }
}

/// Discrete geodesic-curvature profile at the interior arc-length stations.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurvatureProfile {
    /// Arc-length values of the interior stations, strictly increasing in (0, L).
    pub stations: Vec<f64>,
    /// Geodesic curvature at each station.
    pub kappa: Vec<f64>,
    pub ess_inf: f64,
    pub ess_sup: f64,
}

/// Estimates the curvature profile: at interior station k,
/// κₖ = ⟨(tₖ₊₁ − tₖ₋₁)/(2Δs), nₖ⟩ with frames from [`frame_from_curve`].
pub fn curvature_profile(curve: &SphericalCurve) -> Result<CurvatureProfile> {
    let m = curve.segments();
    if m < 8 {
        return Err(Error::Domain {
            op: "curvature_profile",
            value: m as f64,
            detail: "need at least 8 cells for a meaningful profile",
        });
    }
    let path = frame_from_curve(curve)?;
    profile_from_path(curve, &path)
}

fn profile_from_path(curve: &SphericalCurve, path: &FrenetPath) -> Result<CurvatureProfile> {
    let m = curve.segments();
    let ds = curve.length() / m as f64;
    let cols: Vec<_> = path.frames().iter().map(frame_columns).collect();
    let mut stations = Vec::with_capacity(m - 1);
    let mut kappa = Vec::with_capacity(m - 1);
    for k in 1..m {
        let dt = (cols[k + 1].1 - cols[k - 1].1) / (2.0 * ds);
        kappa.push(dt.dot(&cols[k].2));
        stations.push(k as f64 * ds);
    }
    let ess_inf = kappa.iter().cloned().fold(f64::INFINITY, f64::min);
    let ess_sup = kappa.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(CurvatureProfile {
        stations,
        kappa,
        ess_inf,
        ess_sup,
    })
}

/// Reusable tangency tester: extracts the frame path once and serves the
/// circle tests and κ± bisections for any number of base points.
pub struct TangencyAnalyzer<'a> {
    curve: &'a SphericalCurve,
    points: Vec<Vector3<f64>>,
    normals: Vec<Vector3<f64>>,
}

impl<'a> TangencyAnalyzer<'a> {
    pub fn new(curve: &'a SphericalCurve) -> Result<Self> {
        let path = frame_from_curve(curve)?;
        let mut points = Vec::with_capacity(path.frames().len());
        let mut normals = Vec::with_capacity(path.frames().len());
        for f in path.frames() {
            let (p, _, n) = frame_columns(f);
            points.push(p);
            normals.push(n);
        }
        Ok(TangencyAnalyzer {
            curve,
            points,
            normals,
        })
    }

    fn node_of(&self, t0: f64) -> usize {
        let m = self.curve.segments();
        ((t0 * m as f64).round() as usize).min(m)
    }

    /// Tests whether the circle of radius `r` tangent at the grid node
    /// nearest `t0` passes the selected side's condition over all grid
    /// parameters within `window` of `t0`.
    pub fn test(&self, t0: f64, r: f64, side: Side, window: f64, tol: f64) -> Result<bool> {
        if !(0.0..=1.0).contains(&t0) {
            return Err(Error::Range {
                op: "tangent_circle_test",
                what: "t0",
                value: t0,
                lo: 0.0,
                hi: 1.0,
            });
        }
        if !(r > 0.0 && r < std::f64::consts::PI) {
            return Err(Error::Range {
                op: "tangent_circle_test",
                what: "r",
                value: r,
                lo: 0.0,
                hi: std::f64::consts::PI,
            });
        }
        if !window.is_finite() || window <= 0.0 {
            return Err(Error::Range {
                op: "tangent_circle_test",
                what: "window",
                value: window,
                lo: 0.0,
                hi: 1.0,
            });
        }
        let idx = self.node_of(t0);
        let center = self.points[idx] * r.cos() + self.normals[idx] * r.sin();
        let m = self.curve.segments() as f64;
        let lo = (((t0 - window) * m).ceil().max(0.0)) as usize;
        let hi = (((t0 + window) * m).floor() as usize).min(self.curve.segments());
        for k in lo..=hi {
            let d = sphere_distance(&self.points[k], &center);
            let ok = match side {
                Side::Left => d >= r - tol,
                Side::Right => d <= r + tol,
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// κ⁺: the infimum of cot r over left-tangent radii.
    pub fn upper(&self, t0: f64, window: f64, tol: f64) -> Result<ExtendedCurvature> {
        let r_hi = std::f64::consts::PI - RADIUS_FLOOR;
        if !self.test(t0, RADIUS_FLOOR, Side::Left, window, tol)? {
            // No circle passes at all: inf over the empty set.
            return Ok(ExtendedCurvature::PosInfinite);
        }
        if self.test(t0, r_hi, Side::Left, window, tol)? {
            return Ok(clamp_to_ceiling(cot(r_hi)));
        }
        // Invariant: lo passes, hi fails; smaller circles nest inside
        // passing ones.
        let mut lo = RADIUS_FLOOR;
        let mut hi = r_hi;
        for _ in 0..BISECT_ITERS {
            let mid = 0.5 * (lo + hi);
            if self.test(t0, mid, Side::Left, window, tol)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(clamp_to_ceiling(cot(0.5 * (lo + hi))))
    }

    /// κ⁻: the supremum of cot r over right-tangent radii.
    pub fn lower(&self, t0: f64, window: f64, tol: f64) -> Result<ExtendedCurvature> {
        let r_hi = std::f64::consts::PI - RADIUS_FLOOR;
        if !self.test(t0, r_hi, Side::Right, window, tol)? {
            // Even the largest circle fails: sup over the empty set.
            return Ok(ExtendedCurvature::NegInfinite);
        }
        if self.test(t0, RADIUS_FLOOR, Side::Right, window, tol)? {
            return Ok(clamp_to_ceiling(cot(RADIUS_FLOOR)));
        }
        // Invariant: hi passes, lo fails; larger circles contain passing ones.
        let mut lo = RADIUS_FLOOR;
        let mut hi = r_hi;
        for _ in 0..BISECT_ITERS {
            let mid = 0.5 * (lo + hi);
            if self.test(t0, mid, Side::Right, window, tol)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(clamp_to_ceiling(cot(0.5 * (lo + hi))))
    }
}

fn cot(r: f64) -> f64 {
    r.cos() / r.sin()
}

fn clamp_to_ceiling(kappa: f64) -> ExtendedCurvature {
    if kappa > CURVATURE_CEILING {
        ExtendedCurvature::PosInfinite
    } else if kappa < -CURVATURE_CEILING {
        ExtendedCurvature::NegInfinite
    } else {
        ExtendedCurvature::Finite(kappa)
    }
}

/// One-shot circle tangency test; see [`TangencyAnalyzer::test`].
pub fn tangent_circle_test(
    curve: &SphericalCurve,
    t0: f64,
    r: f64,
    side: Side,
    window: f64,
    tol: f64,
) -> Result<bool> {
    TangencyAnalyzer::new(curve)?.test(t0, r, side, window, tol)
}

/// One-shot upper curvature; see [`TangencyAnalyzer::upper`].
pub fn upper_curvature(
    curve: &SphericalCurve,
    t0: f64,
    window: f64,
    tol: f64,
) -> Result<ExtendedCurvature> {
    TangencyAnalyzer::new(curve)?.upper(t0, window, tol)
}

/// One-shot lower curvature; see [`TangencyAnalyzer::lower`].
pub fn lower_curvature(
    curve: &SphericalCurve,
    t0: f64,
    window: f64,
    tol: f64,
) -> Result<ExtendedCurvature> {
    TangencyAnalyzer::new(curve)?.lower(t0, window, tol)
}

/// Default tangency window in parameter units: a quarter of the guaranteed
/// confinement window min{2 sin ρ₁, 2 sin ρ₂}, converted from arc length.
pub fn default_window(band: &crate::controls::CurvatureBand, length: f64) -> f64 {
    (band.window_delta() / 4.0 / length).min(1.0)
}

/// Default tangency tolerance: 10 × (grid geodesic gap)², the scale of the
/// sagitta error the interpolated representation carries.
pub fn default_tol(curve: &SphericalCurve) -> f64 {
    let gap = curve.length() / curve.segments() as f64;
    10.0 * gap * gap
}

/// Resolution of the κ± bisection near curvature `kappa`: the tolerance
/// forgives penetrations up to `tol` within the window, which moves the
/// flip radius by tol / (1 − cos θ_w) with θ_w the window's central angle
/// on the tangent circle, and cot maps radius error to curvature error with
/// slope 1/sin²ρ.
fn detection_bias(kappa: f64, window_arc: f64, tol: f64) -> f64 {
    let rho = crate::controls::arccot(kappa);
    let theta = (window_arc / rho.sin()).min(std::f64::consts::PI);
    let denom = (1.0 - theta.cos()).max(1e-12);
    tol / (denom * rho.sin() * rho.sin())
}

/// Outcome of checking inf κ⁻ and sup κ⁺ against an open band.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BandReport {
    pub inf_lower: ExtendedCurvature,
    pub sup_upper: ExtendedCurvature,
    /// Both strict inequalities κ₁ < inf κ⁻ and sup κ⁺ < κ₂ hold with room
    /// beyond the estimator's own resolution; margins at or below that
    /// resolution cannot certify strictness and are flagged.
    pub inside: bool,
    /// inf κ⁻ − κ₁ (negative infinity when inf κ⁻ = −∞).
    pub margin_low: f64,
    /// κ₂ − sup κ⁺ (negative infinity when sup κ⁺ = +∞).
    pub margin_high: f64,
    pub stations: usize,
    pub window: f64,
    pub tol: f64,
}

impl BandReport {
    /// The smaller of the two margins.
    pub fn margin(&self) -> f64 {
        self.margin_low.min(self.margin_high)
    }
}

/// Samples κ± at [`BAND_REPORT_STATIONS`] base points and reports whether
/// κ₁ < inf κ⁻ ≤ sup κ⁺ < κ₂ holds, with margins.
pub fn band_report(
    curve: &SphericalCurve,
    band: &crate::controls::CurvatureBand,
    window: f64,
    tol: f64,
) -> Result<BandReport> {
    let analyzer = TangencyAnalyzer::new(curve)?;
    let mut inf_lower = ExtendedCurvature::PosInfinite;
    let mut sup_upper = ExtendedCurvature::NegInfinite;
    for j in 0..BAND_REPORT_STATIONS {
        let t0 = j as f64 / (BAND_REPORT_STATIONS - 1) as f64;
        inf_lower = inf_lower.min(analyzer.lower(t0, window, tol)?);
        sup_upper = sup_upper.max(analyzer.upper(t0, window, tol)?);
    }
    let margin_low = match inf_lower {
        ExtendedCurvature::NegInfinite => f64::NEG_INFINITY,
        ExtendedCurvature::Finite(x) => x - band.kappa1(),
        ExtendedCurvature::PosInfinite => f64::INFINITY,
    };
    let margin_high = match sup_upper {
        ExtendedCurvature::PosInfinite => f64::NEG_INFINITY,
        ExtendedCurvature::Finite(x) => band.kappa2() - x,
        ExtendedCurvature::NegInfinite => f64::INFINITY,
    };
    let window_arc = window * curve.length();
    let bias_low = 2.0 * detection_bias(band.kappa1(), window_arc, tol);
    let bias_high = 2.0 * detection_bias(band.kappa2(), window_arc, tol);
    Ok(BandReport {
        inf_lower,
        sup_upper,
        inside: margin_low > bias_low && margin_high > bias_high,
        margin_low,
        margin_high,
        stations: BAND_REPORT_STATIONS,
        window,
        tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::controls::CurvatureBand;
    use crate::fixtures;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    #[test]
    fn equator_profile_is_flat() {
        let c = fixtures::circle_of_curvature(0.0, 1024);
        let p = curvature_profile(&c).unwrap();
        assert!(p.kappa.iter().all(|k| k.abs() <= 1e-6));
        assert!(p.ess_inf <= p.ess_sup);
        assert!(p.stations.windows(2).all(|w| w[1] > w[0]));
        assert!(p.stations[0] > 0.0 && *p.stations.last().unwrap() < c.length());
    }

    #[test]
    fn quarter_radius_circle_profile() {
        // Spherical radius pi/4 has geodesic curvature cot(pi/4) = 1.
        let c = fixtures::circle_of_radius(FRAC_PI_4, 1024);
        let p = curvature_profile(&c).unwrap();
        for k in &p.kappa {
            assert!((k - 1.0).abs() < 1e-5, "{k}");
        }
    }

    #[test]
    fn staircase_profile_matches_away_from_jump() {
        use crate::controls::{h, h_band, ControlPair};
        use crate::integrator::{curve_from_path, integrate_frame};
        use crate::so3::Rotation;
        let b = CurvatureBand::new(0.0, 1.0).unwrap();
        let n = 1024;
        let w_hat: Vec<f64> = (0..n)
            .map(|k| {
                let kap = if k < n / 2 { 0.2 } else { 0.8 };
                h_band(kap, &b).unwrap()
            })
            .collect();
        let c = ControlPair::constant_speed(h(3.0).unwrap(), w_hat, b).unwrap();
        let curve = curve_from_path(&integrate_frame(&Rotation::identity(), &c).unwrap()).unwrap();
        let p = curvature_profile(&curve).unwrap();
        for (i, k) in p.kappa.iter().enumerate() {
            let station = i + 1;
            // Skip the cells straddling the jump at station n/2.
            if station.abs_diff(n / 2) <= 2 {
                continue;
            }
            let expect = if station < n / 2 { 0.2 } else { 0.8 };
            assert!((k - expect).abs() < 1e-4, "station {station}: {k}");
        }
    }

    #[test]
    fn circle_tangency_equality_case() {
        let c = fixtures::circle_of_radius(FRAC_PI_4, 2048);
        let tol = default_tol(&c);
        for side in [Side::Left, Side::Right] {
            assert!(tangent_circle_test(&c, 0.25, FRAC_PI_4, side, 0.05, tol).unwrap());
        }
    }

    #[test]
    fn equator_tangency_by_radius() {
        let c = fixtures::circle_of_curvature(0.0, 2048);
        let tol = default_tol(&c);
        // Smaller circles fit inside the osculating great circle...
        assert!(tangent_circle_test(&c, 0.5, FRAC_PI_4, Side::Left, 0.1, tol).unwrap());
        // ...but a larger one crosses.
        assert!(!tangent_circle_test(&c, 0.5, 3.0 * FRAC_PI_4, Side::Left, 0.1, tol).unwrap());
    }

    #[test]
    fn tangency_test_rejects_out_of_range_arguments() {
        let c = fixtures::circle_of_curvature(0.0, 512);
        let tol = default_tol(&c);
        use crate::error::Error;
        assert!(matches!(
            tangent_circle_test(&c, 0.5, 0.0, Side::Left, 0.1, tol),
            Err(Error::Range { what: "r", .. })
        ));
        assert!(matches!(
            tangent_circle_test(&c, 0.5, PI, Side::Left, 0.1, tol),
            Err(Error::Range { what: "r", .. })
        ));
        assert!(matches!(
            tangent_circle_test(&c, 1.5, 0.5, Side::Left, 0.1, tol),
            Err(Error::Range { what: "t0", .. })
        ));
        assert!(matches!(
            tangent_circle_test(&c, 0.5, 0.5, Side::Left, 0.0, tol),
            Err(Error::Range { what: "window", .. })
        ));
    }

    #[test]
    fn circle_kappa_bounds_match_cot() {
        let c = fixtures::circle_of_radius(FRAC_PI_4, 4096);
        let tol = default_tol(&c);
        let up = upper_curvature(&c, 0.3, 0.1, tol).unwrap();
        let lo = lower_curvature(&c, 0.3, 0.1, tol).unwrap();
        match (up, lo) {
            (ExtendedCurvature::Finite(u), ExtendedCurvature::Finite(l)) => {
                assert!((u - 1.0).abs() < 1e-3, "upper {u}");
                assert!((l - 1.0).abs() < 1e-3, "lower {l}");
                // The two bisections straddle the exact value from opposite
                // sides, so the ordering holds within their joint accuracy.
                assert!(u >= l - 2e-3);
            }
            other => panic!("expected finite bounds, got {other:?}"),
        }
    }

    #[test]
    fn equator_kappa_bounds_are_zero() {
        let c = fixtures::circle_of_curvature(0.0, 4096);
        let tol = default_tol(&c);
        for &t0 in &[0.1, 0.5, 0.9] {
            let up = upper_curvature(&c, t0, 0.1, tol).unwrap().finite().unwrap();
            let lo = lower_curvature(&c, t0, 0.1, tol).unwrap().finite().unwrap();
            assert!(up.abs() < 1e-3, "upper {up}");
            assert!(lo.abs() < 1e-3, "lower {lo}");
        }
    }

    #[test]
    fn unbounded_turn_lift_classifies_both_plus_infinite() {
        let c = fixtures::unbounded_turn_curve(4096, 0.04);
        let window = fixtures::micro_window(&c);
        let tol = default_tol(&c);
        let up = upper_curvature(&c, 0.5, window, tol).unwrap();
        let lo = lower_curvature(&c, 0.5, window, tol).unwrap();
        assert_eq!(up, ExtendedCurvature::PosInfinite);
        assert_eq!(lo, ExtendedCurvature::PosInfinite);
    }

    #[test]
    fn inflection_lift_classifies_plus_and_minus_infinite() {
        let c = fixtures::inflection_curve(4096, 0.04);
        let window = fixtures::micro_window(&c);
        let tol = default_tol(&c);
        let up = upper_curvature(&c, 0.5, window, tol).unwrap();
        let lo = lower_curvature(&c, 0.5, window, tol).unwrap();
        assert_eq!(up, ExtendedCurvature::PosInfinite);
        assert_eq!(lo, ExtendedCurvature::NegInfinite);
    }

    #[test]
    fn lower_never_exceeds_upper_on_smooth_fixtures() {
        for kappa in [-0.6, 0.0, 0.7, 1.0] {
            let c = fixtures::circle_of_curvature(kappa, 4096);
            let tol = default_tol(&c);
            for &t0 in &[0.2, 0.65] {
                let up = upper_curvature(&c, t0, 0.08, tol).unwrap();
                let lo = lower_curvature(&c, t0, 0.08, tol).unwrap();
                // lower <= upper up to the joint bisection accuracy.
                if let (Some(u), Some(l)) = (up.finite(), lo.finite()) {
                    assert!(l <= u + 2e-3, "kappa {kappa}: {l} > {u}");
                } else {
                    assert!(lo.total_cmp(&up).is_le());
                }
            }
        }
    }

    #[test]
    fn kappa_bounds_rotation_invariant() {
        use crate::so3::Rotation;
        let c = fixtures::circle_of_radius(1.1, 2048);
        let r = Rotation::about_x(0.8).compose(&Rotation::about_z(2.2));
        let rc = c.rotated(&r);
        let tol = default_tol(&c);
        let up_a = upper_curvature(&c, 0.4, 0.1, tol).unwrap().finite().unwrap();
        let up_b = upper_curvature(&rc, 0.4, 0.1, tol).unwrap().finite().unwrap();
        let lo_a = lower_curvature(&c, 0.4, 0.1, tol).unwrap().finite().unwrap();
        let lo_b = lower_curvature(&rc, 0.4, 0.1, tol).unwrap().finite().unwrap();
        assert!((up_a - up_b).abs() < 1e-10);
        assert!((lo_a - lo_b).abs() < 1e-10);
        let pa = curvature_profile(&c).unwrap();
        let pb = curvature_profile(&rc).unwrap();
        for (a, b) in pa.kappa.iter().zip(&pb.kappa) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn band_report_examples() {
        let equator = fixtures::circle_of_curvature(0.0, 2048);
        let band = CurvatureBand::new(-1.0, 1.0).unwrap();
        let window = default_window(&band, equator.length());
        let tol = default_tol(&equator);
        let report = band_report(&equator, &band, window, tol).unwrap();
        assert!(report.inside);
        assert!((report.margin_low - 1.0).abs() < 0.01, "{}", report.margin_low);
        assert!((report.margin_high - 1.0).abs() < 0.01, "{}", report.margin_high);

        let circle = fixtures::circle_of_curvature(1.0, 2048);
        let band_ok = CurvatureBand::new(0.0, 2.0).unwrap();
        let report = band_report(
            &circle,
            &band_ok,
            default_window(&band_ok, circle.length()),
            default_tol(&circle),
        )
        .unwrap();
        assert!(report.inside);

        // kappa = 1 sits exactly on the edge of (-1, 1): the high side must
        // be flagged.
        let band_edge = CurvatureBand::new(-1.0, 1.0).unwrap();
        let report = band_report(
            &circle,
            &band_edge,
            default_window(&band_edge, circle.length()),
            default_tol(&circle),
        )
        .unwrap();
        assert!(!report.inside);
        // The high-side margin collapses to the estimator's resolution scale.
        assert!(report.margin_high.abs() <= 2e-3, "{}", report.margin_high);
        assert!(report.margin_low > 0.5);
    }

    #[test]
    fn extended_curvature_ordering() {
        use ExtendedCurvature::*;
        assert!(NegInfinite.total_cmp(&Finite(-1e9)).is_lt());
        assert!(Finite(3.0).total_cmp(&PosInfinite).is_lt());
        assert_eq!(Finite(2.0).min(Finite(1.0)), Finite(1.0));
        assert_eq!(NegInfinite.max(PosInfinite), PosInfinite);
        assert!((FRAC_PI_2 - (PI - FRAC_PI_2)).abs() < 1e-15);
    }
}
