//! Banach-space control coordinates and the diffeomorphisms that carry them
//! to geometric controls.
//!
//! A control pair `(v̂, ŵ)` is a point of E∞ = L∞(0,1) × L∞(0,1), represented
//! here as piecewise-constant samples on a uniform grid. The unconstrained
//! coordinates map to speed and curvature controls through
//!
//! ```text
//!     v = h⁻¹(v̂),        h(t) = t − 1/t        on (0, ∞),
//!     w = v · h⁻¹_band(ŵ),  h_band(t) = 1/(κ₁−t) + 1/(κ₂−t)   on (κ₁, κ₂),
//! ```
//!
//! so any finite samples whatsoever produce a strictly positive speed and a
//! curvature ratio strictly inside the open band. That unconditional
//! admissibility is the whole point of the coordinates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An open curvature band (κ₁, κ₂) with the derived tangent-circle radii
/// ρᵢ = arccot(κᵢ), arccot valued in (0, π).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureBand {
    kappa1: f64,
    kappa2: f64,
}

/// arccot on the branch (0, π): continuous and strictly decreasing.
pub fn arccot(x: f64) -> f64 {
    1.0_f64.atan2(x)
}

impl CurvatureBand {
    /// Requires −∞ < κ₁ < κ₂ < +∞.
    pub fn new(kappa1: f64, kappa2: f64) -> Result<Self> {
        if !kappa1.is_finite() || !kappa2.is_finite() {
            return Err(Error::NonFinite {
                op: "CurvatureBand::new",
            });
        }
        if kappa1 >= kappa2 {
            return Err(Error::Domain {
                op: "CurvatureBand::new",
                value: kappa1,
                detail: "kappa1 must be strictly below kappa2",
            });
        }
        Ok(CurvatureBand { kappa1, kappa2 })
    }

    pub fn kappa1(&self) -> f64 {
        self.kappa1
    }

    pub fn kappa2(&self) -> f64 {
        self.kappa2
    }

    /// ρ₁ = arccot(κ₁); the larger of the two radii.
    pub fn rho1(&self) -> f64 {
        arccot(self.kappa1)
    }

    /// ρ₂ = arccot(κ₂).
    pub fn rho2(&self) -> f64 {
        arccot(self.kappa2)
    }

    pub fn width(&self) -> f64 {
        self.kappa2 - self.kappa1
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.kappa1 + self.kappa2)
    }

    /// Confinement window δ = min{2 sin ρ₁, 2 sin ρ₂}, in arc length.
    pub fn window_delta(&self) -> f64 {
        (2.0 * self.rho1().sin()).min(2.0 * self.rho2().sin())
    }

    /// Monotonicity window δ̄ = min{(π/2) sin ρ₁, (π/2) sin ρ₂}, in arc length.
    pub fn window_delta_bar(&self) -> f64 {
        let half_pi = std::f64::consts::FRAC_PI_2;
        (half_pi * self.rho1().sin()).min(half_pi * self.rho2().sin())
    }

    /// True iff `kappa` lies strictly inside the open band.
    pub fn contains(&self, kappa: f64) -> bool {
        self.kappa1 < kappa && kappa < self.kappa2
    }
}

/// The speed coordinate: either constant (the arc-length-proportional
/// subspace) or one sample per grid cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpeedCoordinate {
    Constant(f64),
    Sampled(Vec<f64>),
}

/// Sampled control functions (v̂, ŵ) on a uniform N-cell grid over the unit interval,
/// together with the band their curvature coordinate refers to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlPair {
    v_hat: SpeedCoordinate,
    w_hat: Vec<f64>,
    band: CurvatureBand,
}

impl ControlPair {
    /// Constant-speed coordinate; membership in the arc-length-proportional
    /// subspace is recorded by the constant mode itself.
    pub fn constant_speed(v_hat: f64, w_hat: Vec<f64>, band: CurvatureBand) -> Result<Self> {
        if !v_hat.is_finite() || w_hat.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                op: "ControlPair::constant_speed",
            });
        }
        if w_hat.is_empty() {
            return Err(Error::Domain {
                op: "ControlPair::constant_speed",
                value: 0.0,
                detail: "grid must have at least one cell",
            });
        }
        Ok(ControlPair {
            v_hat: SpeedCoordinate::Constant(v_hat),
            w_hat,
            band,
        })
    }

    /// Fully sampled coordinates; `v_hat` and `w_hat` must have equal length.
    pub fn sampled(v_hat: Vec<f64>, w_hat: Vec<f64>, band: CurvatureBand) -> Result<Self> {
        if v_hat.iter().chain(w_hat.iter()).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                op: "ControlPair::sampled",
            });
        }
        if v_hat.is_empty() || v_hat.len() != w_hat.len() {
            return Err(Error::Domain {
                op: "ControlPair::sampled",
                value: v_hat.len() as f64,
                detail: "v_hat and w_hat must be non-empty and equal in length",
            });
        }
        Ok(ControlPair {
            v_hat: SpeedCoordinate::Sampled(v_hat),
            w_hat,
            band,
        })
    }

    /// Number of grid cells N.
    pub fn grid_size(&self) -> usize {
        self.w_hat.len()
    }

    pub fn band(&self) -> &CurvatureBand {
        &self.band
    }

    pub fn v_hat(&self) -> &SpeedCoordinate {
        &self.v_hat
    }

    pub fn w_hat(&self) -> &[f64] {
        &self.w_hat
    }

    /// True iff the speed coordinate is in constant mode.
    pub fn is_constant_speed(&self) -> bool {
        matches!(self.v_hat, SpeedCoordinate::Constant(_))
    }

    /// v̂ at cell `k`.
    pub fn v_hat_at(&self, k: usize) -> f64 {
        match &self.v_hat {
            SpeedCoordinate::Constant(c) => *c,
            SpeedCoordinate::Sampled(vs) => vs[k],
        }
    }
}

/// The diffeomorphism h(t) = t − 1/t from (0, ∞) onto ℝ.
pub fn h(t: f64) -> Result<f64> {
    if !t.is_finite() {
        return Err(Error::NonFinite { op: "h" });
    }
    if t <= 0.0 {
        return Err(Error::Domain {
            op: "h",
            value: t,
            detail: "h is defined on (0, +inf)",
        });
    }
    Ok(t - 1.0 / t)
}

/// Inverse of [`h`]: h⁻¹(a) = (a + √(a²+4))/2 > 0.
///
/// For a ≤ 0 the equivalent form 2/(√(a²+4) − a) avoids cancellation.
pub fn h_inv(a: f64) -> f64 {
    debug_assert!(a.is_finite());
    let root = (a * a + 4.0).sqrt();
    if a > 0.0 {
        0.5 * (a + root)
    } else {
        2.0 / (root - a)
    }
}

/// Distance from a pole at which [`h_band`] inputs are rejected.
pub const POLE_GUARD: f64 = 1e-12;

/// The band diffeomorphism h_band(t) = 1/(κ₁−t) + 1/(κ₂−t), strictly
/// increasing from (κ₁, κ₂) onto ℝ.
///
/// Inputs at or outside the band, or within `1e-12` of a pole, are rejected
/// rather than saturated.
pub fn h_band(t: f64, band: &CurvatureBand) -> Result<f64> {
    if !t.is_finite() {
        return Err(Error::NonFinite { op: "h_band" });
    }
    if t - band.kappa1() < POLE_GUARD || band.kappa2() - t < POLE_GUARD {
        return Err(Error::Domain {
            op: "h_band",
            value: t,
            detail: "argument must lie strictly inside the open band, away from the poles",
        });
    }
    Ok(1.0 / (band.kappa1() - t) + 1.0 / (band.kappa2() - t))
}

/// Inverse of [`h_band`]: the unique in-band root of the defining quadratic.
///
/// Writing t = m + u with m the band midpoint and ω the half-width, the
/// equation h_band(t) = a becomes a·u² + 2u − a·ω² = 0, whose in-band root is
///
/// ```text
///     u = a·ω² / (1 + √(1 + a²ω²)),
/// ```
///
/// a form with no cancellation for any sign or size of `a` (the a = 0
/// short-circuit u = 0 falls out of it exactly). The result is clamped to the
/// largest representable open sub-interval: for |a| beyond roughly 1/(ω·ulp)
/// the exact value is closer to the pole than one ulp.
pub fn h_band_inv(a: f64, band: &CurvatureBand) -> Result<f64> {
    if !a.is_finite() {
        return Err(Error::NonFinite { op: "h_band_inv" });
    }
    let m = band.midpoint();
    let omega = 0.5 * band.width();
    let aw = a * omega;
    // Guard a·ω overflow: beyond 1e150 the root saturates to ±ω anyway.
    let u = if aw.abs() > 1e150 {
        omega.copysign(a)
    } else {
        a * omega * omega / (1.0 + (1.0 + aw * aw).sqrt())
    };
    let t = m + u;
    // Keep the open-band invariant honest at the representable level.
    let lo = next_toward_mid(band.kappa1(), m);
    let hi = next_toward_mid(band.kappa2(), m);
    Ok(t.clamp(lo, hi))
}

/// The adjacent representable value strictly between `edge` and `mid`.
fn next_toward_mid(edge: f64, mid: f64) -> f64 {
    if edge < mid {
        f64::from_bits(if edge >= 0.0 {
            edge.to_bits() + 1
        } else {
            edge.to_bits() - 1
        })
    } else {
        f64::from_bits(if edge > 0.0 {
            edge.to_bits() - 1
        } else if edge == 0.0 {
            (-f64::MIN_POSITIVE).to_bits() // step below +0.0
        } else {
            edge.to_bits() + 1
        })
    }
}

/// Pointwise transformation of Banach coordinates to geometric controls:
/// v = h⁻¹(v̂), w = v·h_band⁻¹(ŵ). Every output satisfies v > 0 and
/// w/v strictly inside the band.
pub fn controls_to_vw(c: &ControlPair) -> (Vec<f64>, Vec<f64>) {
    let n = c.grid_size();
    let mut v = Vec::with_capacity(n);
    let mut w = Vec::with_capacity(n);
    for k in 0..n {
        let vk = h_inv(c.v_hat_at(k));
        // h_band_inv only fails on non-finite input, excluded by construction.
        let kappa = h_band_inv(c.w_hat()[k], c.band()).expect("finite by ControlPair invariant");
        v.push(vk);
        w.push(vk * kappa);
    }
    (v, w)
}

/// Exact left inverse of [`controls_to_vw`]: recovers (v̂, ŵ) from geometric
/// controls. Fails if any vᵢ ≤ 0 or any ratio wᵢ/vᵢ touches or escapes the
/// open band (the offending cell is named).
pub fn vw_to_controls(v: &[f64], w: &[f64], band: &CurvatureBand) -> Result<ControlPair> {
    if v.len() != w.len() || v.is_empty() {
        return Err(Error::Domain {
            op: "vw_to_controls",
            value: v.len() as f64,
            detail: "v and w must be non-empty and equal in length",
        });
    }
    let mut v_hat = Vec::with_capacity(v.len());
    let mut w_hat = Vec::with_capacity(w.len());
    for (k, (&vk, &wk)) in v.iter().zip(w).enumerate() {
        if !vk.is_finite() || !wk.is_finite() {
            return Err(Error::NonFinite {
                op: "vw_to_controls",
            });
        }
        if vk <= 0.0 {
            return Err(Error::Domain {
                op: "vw_to_controls",
                value: vk,
                detail: "speed must be strictly positive",
            });
        }
        let ratio = wk / vk;
        if !band.contains(ratio) {
            return Err(Error::BandViolation {
                cell: k,
                ratio,
                kappa1: band.kappa1(),
                kappa2: band.kappa2(),
            });
        }
        v_hat.push(h(vk)?);
        w_hat.push(h_band(ratio, band)?);
    }
    ControlPair::sampled(v_hat, w_hat, *band)
}

/// The E∞ norm: max of the two sup-norms over the grid.
pub fn banach_norm(c: &ControlPair) -> f64 {
    let v_sup = match c.v_hat() {
        SpeedCoordinate::Constant(x) => x.abs(),
        SpeedCoordinate::Sampled(vs) => vs.iter().fold(0.0f64, |m, x| m.max(x.abs())),
    };
    let w_sup = c.w_hat().iter().fold(0.0f64, |m, x| m.max(x.abs()));
    v_sup.max(w_sup)
}

/// Norm of the difference of two control pairs on the same grid and band.
pub fn banach_distance(a: &ControlPair, b: &ControlPair) -> Result<f64> {
    if a.grid_size() != b.grid_size() {
        return Err(Error::Domain {
            op: "banach_distance",
            value: b.grid_size() as f64,
            detail: "control pairs live on different grids",
        });
    }
    let n = a.grid_size();
    let mut v_sup = 0.0f64;
    let mut w_sup = 0.0f64;
    for k in 0..n {
        v_sup = v_sup.max((a.v_hat_at(k) - b.v_hat_at(k)).abs());
        w_sup = w_sup.max((a.w_hat()[k] - b.w_hat()[k]).abs());
    }
    Ok(v_sup.max(w_sup))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    /// Bisection oracle for inverses of strictly increasing functions.
    fn bisect<F: Fn(f64) -> f64>(f: F, target: f64, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    fn band(k1: f64, k2: f64) -> CurvatureBand {
        CurvatureBand::new(k1, k2).unwrap()
    }

    #[test]
    fn arccot_branch() {
        assert!((arccot(0.0) - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!((arccot(1.0) - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert!((arccot(-1.0) - 3.0 * std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        // Strictly decreasing, valued in (0, pi).
        let mut prev = f64::INFINITY;
        for i in -1000..=1000 {
            let val = arccot(i as f64 * 0.05);
            assert!(val > 0.0 && val < std::f64::consts::PI);
            assert!(val < prev);
            prev = val;
        }
    }

    #[test]
    fn band_radii_ordered() {
        let b = band(-1.0, 1.0);
        assert!(b.rho2() < b.rho1());
        assert!((b.rho1() - 3.0 * std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert!((b.rho2() - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert!(CurvatureBand::new(1.0, 1.0).is_err());
        assert!(CurvatureBand::new(2.0, 1.0).is_err());
    }

    #[test]
    fn h_known_values() {
        assert_eq!(h(1.0).unwrap(), 0.0);
        assert_eq!(h(2.0).unwrap(), 1.5);
        assert!(matches!(h(0.0), Err(Error::Domain { .. })));
        assert!(matches!(h(-3.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn h_inv_known_values() {
        assert_eq!(h_inv(0.0), 1.0);
        assert!((h_inv(1.5) - 2.0).abs() < 1e-15);
        // Far-negative input stays positive and matches the bisection oracle.
        let a = -1e6;
        let expect = bisect(|t| t - 1.0 / t, a, 1e-9, 10.0);
        let got = h_inv(a);
        assert!(got > 0.0);
        assert!((got - expect).abs() < 1e-12 * expect.abs().max(1.0));
        assert!((got - 1e-6).abs() < 1e-12);
    }

    #[test]
    fn h_band_known_values() {
        let b = band(0.0, 2.0);
        assert!((h_band(1.0, &b).unwrap()).abs() < 1e-15);
        assert!((h_band(0.5, &b).unwrap() - (-4.0 / 3.0)).abs() < 1e-15);
        assert!(matches!(h_band(0.0, &b), Err(Error::Domain { .. })));
        assert!(matches!(h_band(2.0, &b), Err(Error::Domain { .. })));
        assert!(matches!(h_band(-1.0, &b), Err(Error::Domain { .. })));
    }

    #[test]
    fn h_band_strictly_increasing() {
        let b = band(-0.5, 3.0);
        let mut prev = f64::NEG_INFINITY;
        for i in 1..1000 {
            let t = b.kappa1() + b.width() * (i as f64) / 1000.0;
            let val = h_band(t, &b).unwrap();
            assert!(val > prev);
            prev = val;
        }
    }

    #[test]
    fn h_band_inv_known_values() {
        let b = band(0.0, 2.0);
        assert_eq!(h_band_inv(0.0, &b).unwrap(), 1.0);
        let got = h_band_inv(-4.0 / 3.0, &b).unwrap();
        let oracle = bisect(|t| h_band(t, &b).unwrap(), -4.0 / 3.0, 1e-12, 2.0 - 1e-12);
        assert!((got - 0.5).abs() < 1e-12);
        assert!((got - oracle).abs() < 1e-10);

        let b = band(-1.0, 1.0);
        let got = h_band_inv(1e8, &b).unwrap();
        let oracle = bisect(|t| h_band(t, &b).unwrap(), 1e8, -1.0 + 1e-12, 1.0 - 1e-12);
        assert!(got < 1.0);
        assert!((got - 1.0).abs() < 1e-7);
        assert!((got - oracle).abs() < 1e-10);
    }

    #[test]
    fn h_band_inv_strictly_inside_for_extreme_inputs() {
        let b = band(-1.0, 1.0);
        for &a in &[0.0, 1.0, -1.0, 1e8, -1e8, 1e200, -1e200, 1e308, -1e308] {
            let t = h_band_inv(a, &b).unwrap();
            assert!(t > b.kappa1(), "a={a}: {t}");
            assert!(t < b.kappa2(), "a={a}: {t}");
        }
    }

    #[test]
    fn controls_to_vw_examples() {
        let b = band(-1.0, 1.0);
        let c = ControlPair::constant_speed(0.0, vec![0.0; 4], b).unwrap();
        let (v, w) = controls_to_vw(&c);
        assert!(v.iter().all(|&x| (x - 1.0).abs() < 1e-15));
        assert!(w.iter().all(|&x| x.abs() < 1e-15));

        let b = band(0.0, 2.0);
        let c = ControlPair::constant_speed(1.5, vec![0.0; 4], b).unwrap();
        let (v, w) = controls_to_vw(&c);
        assert!(v.iter().all(|&x| (x - 2.0).abs() < 1e-14));
        assert!(w.iter().all(|&x| (x - 2.0).abs() < 1e-14));
    }

    #[test]
    fn vw_to_controls_rejects_band_edge() {
        let b = band(-1.0, 1.0);
        // w/v exactly at kappa2.
        let err = vw_to_controls(&[2.0, 2.0], &[0.0, 2.0], &b).unwrap_err();
        match err {
            Error::BandViolation { cell, ratio, .. } => {
                assert_eq!(cell, 1);
                assert_eq!(ratio, 1.0);
            }
            other => panic!("expected band violation, got {other}"),
        }
    }

    #[test]
    fn vw_roundtrip_inverse_pair() {
        let b = band(-1.0, 1.0);
        let c = ControlPair::constant_speed(0.0, vec![0.0; 8], b).unwrap();
        let (v, w) = controls_to_vw(&c);
        let back = vw_to_controls(&v, &w, &b).unwrap();
        assert!(banach_distance(&c, &back).unwrap() < 1e-12);
    }

    #[test]
    fn random_controls_land_strictly_in_band() {
        let mut rng = ChaCha12Rng::seed_from_u64(0x5eed);
        let b = band(-0.7, 2.3);
        for _ in 0..10_000 {
            let v_hat = rng.gen_range(-30.0..30.0);
            let w_hat = rng.gen_range(-30.0..30.0);
            let c = ControlPair::constant_speed(v_hat, vec![w_hat], b).unwrap();
            let (v, w) = controls_to_vw(&c);
            assert!(v[0] > 0.0);
            let ratio = w[0] / v[0];
            assert!(ratio > b.kappa1() && ratio < b.kappa2());
        }
    }

    #[test]
    fn banach_norm_examples() {
        let b = band(-1.0, 1.0);
        let zero = ControlPair::constant_speed(0.0, vec![0.0; 4], b).unwrap();
        assert_eq!(banach_norm(&zero), 0.0);
        let c = ControlPair::constant_speed(3.0, vec![2.0, -2.0, 0.5, 1.0], b).unwrap();
        assert_eq!(banach_norm(&c), 3.0);
    }

    proptest! {
        #[test]
        fn h_round_trips(t in 1e-6..1e6f64) {
            let a = h(t).unwrap();
            let back = h_inv(a);
            prop_assert!((back - t).abs() <= 1e-10 * t.abs());
        }

        #[test]
        fn h_inv_round_trips(a in -1e6..1e6f64) {
            let t = h_inv(a);
            prop_assert!(t > 0.0);
            let back = h(t).unwrap();
            prop_assert!((back - a).abs() <= 1e-9);
        }

        #[test]
        fn h_band_inv_round_trips(a in -1e4..1e4f64, k1 in -4.0..0.0f64, width in 0.1..6.0f64) {
            let b = band(k1, k1 + width);
            let t = h_band_inv(a, &b).unwrap();
            prop_assert!(t > b.kappa1() && t < b.kappa2());
            let back = h_band(t, &b).unwrap();
            // Relative tolerance: the forward map is steep near the poles.
            prop_assert!((back - a).abs() <= 1e-9 * a.abs().max(1.0));
        }

        #[test]
        fn vw_mutual_inverse_away_from_edges(
            seed in 0u64..2048,
            n in 1usize..16,
        ) {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let b = band(-1.5, 0.8);
            // Ratios bounded 10% away from band edges.
            let margin = 0.1 * b.width();
            let v: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..8.0)).collect();
            let w: Vec<f64> = v
                .iter()
                .map(|&vk| vk * rng.gen_range(b.kappa1() + margin..b.kappa2() - margin))
                .collect();
            let c = vw_to_controls(&v, &w, &b).unwrap();
            let (v2, w2) = controls_to_vw(&c);
            for k in 0..n {
                prop_assert!((v2[k] - v[k]).abs() <= 1e-10 * v[k].abs().max(1.0));
                prop_assert!((w2[k] - w[k]).abs() <= 1e-10 * w[k].abs().max(1.0));
            }
        }

        #[test]
        fn banach_norm_axioms(
            v1 in -5.0..5.0f64, w1 in -5.0..5.0f64,
            v2 in -5.0..5.0f64, w2 in -5.0..5.0f64,
            scale in -3.0..3.0f64,
        ) {
            let b = band(-1.0, 1.0);
            let ca = ControlPair::constant_speed(v1, vec![w1, -w1], b).unwrap();
            let cb = ControlPair::constant_speed(v2, vec![w2, 0.5 * w2], b).unwrap();
            let sum = ControlPair::constant_speed(v1 + v2, vec![w1 + w2, -w1 + 0.5 * w2], b).unwrap();
            let scaled = ControlPair::constant_speed(scale * v1, vec![scale * w1, -scale * w1], b).unwrap();
            // Triangle inequality and absolute homogeneity.
            prop_assert!(banach_norm(&sum) <= banach_norm(&ca) + banach_norm(&cb) + 1e-12);
            prop_assert!((banach_norm(&scaled) - scale.abs() * banach_norm(&ca)).abs() <= 1e-12);
            // Zero iff both components vanish.
            prop_assert!((banach_norm(&ca) == 0.0) == (v1 == 0.0 && w1 == 0.0));
        }
    }
}
