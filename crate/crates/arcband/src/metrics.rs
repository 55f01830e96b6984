//! The four distances between constant-speed curves: sup surface distance,
//! sup chordal distance, and their two tangent-bundle refinements.
//!
//! Both curves are resampled onto a common comparison grid through `eval`,
//! so the values are parameterization-honest: curves are compared as the
//! constant-speed representatives of their classes. Velocities enter through
//! the frame machinery as L·t rather than raw sample differences.

use serde::{Deserialize, Serialize};

use crate::curve::{sphere_distance, SphericalCurve};
use crate::error::{Error, Result};
use crate::integrator::frame_from_curve;
use crate::so3::frame_columns;

/// Which of the four metrics a value was computed with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    D0,
    D0Bar,
    D1,
    D1Bar,
}

impl std::fmt::Display for MetricKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            MetricKind::D0 => "d0",
            MetricKind::D0Bar => "d0bar",
            MetricKind::D1 => "d1",
            MetricKind::D1Bar => "d1bar",
        };
        f.write_str(s)
    }
}

/// A computed distance together with the comparison resolution used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricValue {
    pub value: f64,
    pub kind: MetricKind,
    pub resolution: usize,
}

/// Smallest admissible comparison grid.
pub const MIN_RESOLUTION: usize = 8;

/// Comparison resolution: the requested one, or 4× the coarser curve's cell
/// count. Fails below [`MIN_RESOLUTION`].
pub fn comparison_resolution(
    a: &SphericalCurve,
    b: &SphericalCurve,
    requested: Option<usize>,
) -> Result<usize> {
    let k = requested.unwrap_or_else(|| 4 * a.segments().min(b.segments()));
    if k < MIN_RESOLUTION {
        return Err(Error::Range {
            op: "comparison_resolution",
            what: "resolution",
            value: k as f64,
            lo: MIN_RESOLUTION as f64,
            hi: f64::INFINITY,
        });
    }
    Ok(k)
}

fn require_constant_speed(a: &SphericalCurve, b: &SphericalCurve, op: &'static str) -> Result<()> {
    if !a.is_constant_speed() || !b.is_constant_speed() {
        return Err(Error::NotConstantSpeed { op });
    }
    Ok(())
}

/// Sup over the comparison grid of the surface distance d(α(t), β(t)).
pub fn d0(a: &SphericalCurve, b: &SphericalCurve, k: Option<usize>) -> Result<MetricValue> {
    require_constant_speed(a, b, "d0")?;
    let k = comparison_resolution(a, b, k)?;
    let mut max = 0.0f64;
    for j in 0..=k {
        let t = j as f64 / k as f64;
        max = max.max(sphere_distance(&a.eval(t)?, &b.eval(t)?));
    }
    Ok(MetricValue {
        value: max,
        kind: MetricKind::D0,
        resolution: k,
    })
}

/// Sup of the chordal (ambient ℝ³) distance ‖α(t) − β(t)‖.
pub fn d0bar(a: &SphericalCurve, b: &SphericalCurve, k: Option<usize>) -> Result<MetricValue> {
    require_constant_speed(a, b, "d0bar")?;
    let k = comparison_resolution(a, b, k)?;
    let mut max = 0.0f64;
    for j in 0..=k {
        let t = j as f64 / k as f64;
        max = max.max((a.eval(t)? - b.eval(t)?).norm());
    }
    Ok(MetricValue {
        value: max,
        kind: MetricKind::D0Bar,
        resolution: k,
    })
}

/// Velocities L·t at the comparison stations, from the frame machinery of
/// the curve resampled onto that grid.
fn velocities(curve: &SphericalCurve, k: usize) -> Result<Vec<nalgebra::Vector3<f64>>> {
    let resampled = curve.resampled(k)?;
    let path = frame_from_curve(&resampled)?;
    Ok(path
        .frames()
        .iter()
        .map(|f| frame_columns(f).1 * curve.length())
        .collect())
}

/// Tangent-bundle distance: sup of √(d(α,β)² + ‖α̇ − β̇‖²), the product
/// realization of a Riemannian metric on T𝕊².
pub fn d1(a: &SphericalCurve, b: &SphericalCurve, k: Option<usize>) -> Result<MetricValue> {
    require_constant_speed(a, b, "d1")?;
    let k = comparison_resolution(a, b, k)?;
    let va = velocities(a, k)?;
    let vb = velocities(b, k)?;
    let mut max = 0.0f64;
    for j in 0..=k {
        let t = j as f64 / k as f64;
        let pos = sphere_distance(&a.eval(t)?, &b.eval(t)?);
        let vel = (va[j] - vb[j]).norm();
        max = max.max((pos * pos + vel * vel).sqrt());
    }
    Ok(MetricValue {
        value: max,
        kind: MetricKind::D1,
        resolution: k,
    })
}

/// Sup of the sum d(α,β) + ‖α̇ − β̇‖ (surface distance plus velocity chord).
pub fn d1bar(a: &SphericalCurve, b: &SphericalCurve, k: Option<usize>) -> Result<MetricValue> {
    require_constant_speed(a, b, "d1bar")?;
    let k = comparison_resolution(a, b, k)?;
    let va = velocities(a, k)?;
    let vb = velocities(b, k)?;
    let mut max = 0.0f64;
    for j in 0..=k {
        let t = j as f64 / k as f64;
        let pos = sphere_distance(&a.eval(t)?, &b.eval(t)?);
        let vel = (va[j] - vb[j]).norm();
        max = max.max(pos + vel);
    }
    Ok(MetricValue {
        value: max,
        kind: MetricKind::D1Bar,
        resolution: k,
    })
}

/// All four metrics at a shared resolution, reusing the velocity extraction.
pub fn all_metrics(
    a: &SphericalCurve,
    b: &SphericalCurve,
    k: Option<usize>,
) -> Result<[MetricValue; 4]> {
    require_constant_speed(a, b, "all_metrics")?;
    let k = comparison_resolution(a, b, k)?;
    let va = velocities(a, k)?;
    let vb = velocities(b, k)?;
    let (mut m0, mut m0b, mut m1, mut m1b) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for j in 0..=k {
        let t = j as f64 / k as f64;
        let pa = a.eval(t)?;
        let pb = b.eval(t)?;
        let pos = sphere_distance(&pa, &pb);
        let chord = (pa - pb).norm();
        let vel = (va[j] - vb[j]).norm();
        m0 = m0.max(pos);
        m0b = m0b.max(chord);
        m1 = m1.max((pos * pos + vel * vel).sqrt());
        m1b = m1b.max(pos + vel);
    }
    let mk = |value, kind| MetricValue {
        value,
        kind,
        resolution: k,
    };
    Ok([
        mk(m0, MetricKind::D0),
        mk(m0b, MetricKind::D0Bar),
        mk(m1, MetricKind::D1),
        mk(m1b, MetricKind::D1Bar),
    ])
}
