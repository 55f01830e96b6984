//! Canonical spherical-curve representation: unit samples, geodesic arc
//! length, constant-speed reparameterization, and point evaluation.
//!
//! Curves are compared and analyzed through their constant-speed
//! representatives; `reparameterize_constant_speed` canonicalizes any
//! regular sample sequence to that form.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameterization tag carried by a curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Param {
    ConstantSpeed,
    Raw,
}

/// A sampled curve on the unit sphere. `samples` holds M+1 unit vectors at
/// uniform parameter nodes; `length` is the total arc length L.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalCurve {
    samples: Vec<Vector3<f64>>,
    param: Param,
    length: f64,
}

/// Geodesic gap below which two consecutive samples count as coincident.
const DEGENERACY_GAP: f64 = 1e-14;

/// Geodesic distance on the sphere between two unit vectors.
///
/// Computed as atan2(‖a×b‖, a·b), which stays fully accurate where acos of
/// the dot product would lose half its digits (nearly equal or nearly
/// antipodal points).
pub fn sphere_distance(a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    a.cross(b).norm().atan2(a.dot(b))
}

/// Spherical linear interpolation between unit vectors; falls back to
/// normalized linear blending when the gap is below numerical resolution.
pub fn slerp(a: &Vector3<f64>, b: &Vector3<f64>, u: f64) -> Vector3<f64> {
    let omega = sphere_distance(a, b);
    if omega < 1e-9 {
        return (a * (1.0 - u) + b * u).normalize();
    }
    let s = omega.sin();
    let blended = a * (((1.0 - u) * omega).sin() / s) + b * ((u * omega).sin() / s);
    blended.normalize()
}

impl SphericalCurve {
    /// Wraps unit samples with a declared parameterization; the length is
    /// measured as the sum of geodesic gaps.
    ///
    /// Samples must be finite and unit within `1e-6` (they are renormalized
    /// to keep downstream arithmetic exactly on the sphere).
    pub fn new(samples: Vec<Vector3<f64>>, param: Param) -> Result<Self> {
        let samples = Self::normalized(samples)?;
        let length = geodesic_length(&samples);
        Ok(SphericalCurve {
            samples,
            param,
            length,
        })
    }

    /// Like [`SphericalCurve::new`] but with a caller-supplied length, for
    /// curves whose exact arc length is known analytically (e.g. from the
    /// generating controls).
    pub fn with_length(samples: Vec<Vector3<f64>>, param: Param, length: f64) -> Result<Self> {
        if !length.is_finite() || length < 0.0 {
            return Err(Error::Domain {
                op: "SphericalCurve::with_length",
                value: length,
                detail: "length must be finite and non-negative",
            });
        }
        let samples = Self::normalized(samples)?;
        Ok(SphericalCurve {
            samples,
            param,
            length,
        })
    }

    fn normalized(samples: Vec<Vector3<f64>>) -> Result<Vec<Vector3<f64>>> {
        if samples.len() < 2 {
            return Err(Error::Domain {
                op: "SphericalCurve::new",
                value: samples.len() as f64,
                detail: "a curve needs at least two samples",
            });
        }
        samples
            .into_iter()
            .enumerate()
            .map(|(i, s)| {
                let n = s.norm();
                if !n.is_finite() || (n - 1.0).abs() > 1e-6 {
                    return Err(Error::Degenerate {
                        index: i,
                        detail: "sample is not a unit vector",
                    });
                }
                // Renormalize only when the deviation is measurable; leaving
                // in-tolerance samples untouched keeps file round trips
                // bit-exact.
                Ok(if (n - 1.0).abs() > 1e-12 { s / n } else { s })
            })
            .collect()
    }

    pub fn samples(&self) -> &[Vector3<f64>] {
        &self.samples
    }

    /// Number of cells M (one less than the sample count).
    pub fn segments(&self) -> usize {
        self.samples.len() - 1
    }

    pub fn param(&self) -> Param {
        self.param
    }

    pub fn is_constant_speed(&self) -> bool {
        self.param == Param::ConstantSpeed
    }

    /// Total arc length L as recorded at construction.
    pub fn length(&self) -> f64 {
        self.length
    }

    /// Applies a fixed rotation to every sample (an isometry of the sphere).
    pub fn rotated(&self, r: &crate::so3::Rotation) -> SphericalCurve {
        SphericalCurve {
            samples: self.samples.iter().map(|s| r.apply(s)).collect(),
            param: self.param,
            length: self.length,
        }
    }

    /// Checks the constant-speed invariant: consecutive geodesic gaps equal
    /// within `1e-8 · L` plus the chord-vs-arc correction O(gap³).
    pub fn verify_constant_speed(&self) -> bool {
        let gaps: Vec<f64> = self
            .samples
            .windows(2)
            .map(|w| sphere_distance(&w[0], &w[1]))
            .collect();
        let mean = gaps.iter().sum::<f64>() / gaps.len() as f64;
        // Chord lengths of equal-arc cells still vary with curvature at
        // third order in the gap.
        let slack = 1e-8 * self.length.max(1.0) + mean.powi(3);
        gaps.iter().all(|g| (g - mean).abs() <= slack)
    }

    /// Evaluates the curve at parameter `t ∈ [0, 1]` by spherical-linear
    /// interpolation in the bracketing cell; exact at grid nodes.
    ///
    /// Requires the constant-speed parameterization.
    pub fn eval(&self, t: f64) -> Result<Vector3<f64>> {
        if !self.is_constant_speed() {
            return Err(Error::NotConstantSpeed { op: "eval" });
        }
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Range {
                op: "eval",
                what: "t",
                value: t,
                lo: 0.0,
                hi: 1.0,
            });
        }
        let m = self.segments() as f64;
        let scaled = t * m;
        let cell = (scaled.floor() as usize).min(self.segments() - 1);
        let frac = scaled - cell as f64;
        if frac == 0.0 {
            return Ok(self.samples[cell]);
        }
        if frac == 1.0 || cell + 1 == self.samples.len() - 1 && scaled >= m {
            return Ok(self.samples[cell + 1]);
        }
        Ok(slerp(&self.samples[cell], &self.samples[cell + 1], frac))
    }

    /// Resamples the curve at `k + 1` uniform parameter stations via
    /// [`eval`](Self::eval); constant speed is preserved.
    pub fn resampled(&self, k: usize) -> Result<SphericalCurve> {
        if k < 1 {
            return Err(Error::Domain {
                op: "resampled",
                value: k as f64,
                detail: "need at least one cell",
            });
        }
        let samples: Result<Vec<_>> = (0..=k).map(|j| self.eval(j as f64 / k as f64)).collect();
        SphericalCurve::with_length(samples?, Param::ConstantSpeed, self.length)
    }
}

fn geodesic_length(samples: &[Vector3<f64>]) -> f64 {
    samples
        .windows(2)
        .map(|w| sphere_distance(&w[0], &w[1]))
        .sum()
}

/// Total arc length: the sum of geodesic gaps arccos⟨γₖ, γₖ₊₁⟩.
///
/// Additive over concatenation at a shared sample and invariant under
/// rotation of all samples.
pub fn arc_length(curve: &SphericalCurve) -> f64 {
    geodesic_length(curve.samples())
}

/// Reparameterizes to constant speed: the output holds the same number of
/// samples placed at equal arc-length stations, found by monotone inversion
/// of the cumulative-arc table. Fails on coincident consecutive samples.
///
/// Idempotent on already-constant-speed curves; endpoints are preserved
/// exactly.
pub fn reparameterize_constant_speed(curve: &SphericalCurve) -> Result<SphericalCurve> {
    let samples = curve.samples();
    let m = curve.segments();
    let mut cumulative = Vec::with_capacity(m + 1);
    cumulative.push(0.0);
    for (i, w) in samples.windows(2).enumerate() {
        let gap = sphere_distance(&w[0], &w[1]);
        if gap < DEGENERACY_GAP {
            return Err(Error::Degenerate {
                index: i,
                detail: "coincident consecutive samples: curve is not regular",
            });
        }
        cumulative.push(cumulative[i] + gap);
    }
    let total = *cumulative.last().unwrap();

    let mut out = Vec::with_capacity(m + 1);
    out.push(samples[0]);
    let mut cell = 0usize;
    for j in 1..m {
        let target = total * (j as f64) / (m as f64);
        // The cumulative table is strictly increasing; walk the cell cursor
        // forward instead of bisecting (targets are increasing too).
        while cell + 1 < m && cumulative[cell + 1] < target {
            cell += 1;
        }
        let u = (target - cumulative[cell]) / (cumulative[cell + 1] - cumulative[cell]);
        out.push(slerp(&samples[cell], &samples[cell + 1], u));
    }
    out.push(samples[m]);
    SphericalCurve::with_length(out, Param::ConstantSpeed, total)
}
