//! Rotation-group and skew-algebra arithmetic for the two-parameter
//! generator family used by the frame equation.
//!
//! A frame is a matrix in SO(3) whose columns are the curve point, its unit
//! tangent, and its unit normal. The frame equation drives such matrices by
//! generators of the form
//!
//! ```text
//!         ⎛ 0  -v   0 ⎞
//!     Λ = ⎜ v   0  -w ⎟ ,   v > 0,
//!         ⎝ 0   w   0 ⎠
//! ```
//!
//! which is the skew matrix of the axis vector `(w, 0, v)`. Its exponential
//! therefore has the Rodrigues closed form, and piecewise-constant controls
//! integrate exactly.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

/// A 3×3 special-orthogonal matrix; the Frenet frame of a spherical curve
/// when its columns are read as (point, tangent, normal).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation {
    m: Matrix3<f64>,
}

/// Tolerance on ‖RᵀR − I‖_F accepted by [`Rotation::from_matrix`].
pub const ORTHONORMALITY_TOL: f64 = 1e-12;

impl Rotation {
    /// The identity frame: point (1,0,0), tangent (0,1,0), normal (0,0,1).
    pub fn identity() -> Self {
        Rotation {
            m: Matrix3::identity(),
        }
    }

    /// Wraps a matrix already known to be special-orthogonal.
    ///
    /// Fails if ‖RᵀR − I‖_F exceeds `1e-12` or det(R) is not 1 within `1e-12`;
    /// use [`project_to_rotation`] for noisy input.
    pub fn from_matrix(m: Matrix3<f64>) -> Result<Self> {
        let drift = orthonormality_drift(&m);
        if drift > ORTHONORMALITY_TOL {
            return Err(Error::Domain {
                op: "Rotation::from_matrix",
                value: drift,
                detail: "matrix is not orthonormal within 1e-12",
            });
        }
        let det = m.determinant();
        if (det - 1.0).abs() > ORTHONORMALITY_TOL {
            return Err(Error::Domain {
                op: "Rotation::from_matrix",
                value: det,
                detail: "determinant is not +1 within 1e-12",
            });
        }
        Ok(Rotation { m })
    }

    /// The underlying matrix.
    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.m
    }

    /// Frame composition `self · other`.
    pub fn compose(&self, other: &Rotation) -> Rotation {
        Rotation { m: self.m * other.m }
    }

    /// Inverse rotation (transpose).
    pub fn inverse(&self) -> Rotation {
        Rotation { m: self.m.transpose() }
    }

    /// ‖RᵀR − I‖_F for this frame; drift accumulated by long products.
    pub fn drift(&self) -> f64 {
        orthonormality_drift(&self.m)
    }

    /// Rotation about the z-axis by `angle` radians.
    pub fn about_z(angle: f64) -> Rotation {
        let (s, c) = angle.sin_cos();
        Rotation {
            m: Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0),
        }
    }

    /// Rotation about the x-axis by `angle` radians.
    pub fn about_x(angle: f64) -> Rotation {
        let (s, c) = angle.sin_cos();
        Rotation {
            m: Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c),
        }
    }

    /// Applies the rotation to a vector.
    pub fn apply(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.m * v
    }
}

fn orthonormality_drift(m: &Matrix3<f64>) -> f64 {
    (m.transpose() * m - Matrix3::identity()).norm()
}

/// Generator of the frame equation: speed `v` (> 0) and `w = v·κ`, both in
/// radians of arc per unit parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkewGenerator {
    v: f64,
    w: f64,
}

impl SkewGenerator {
    /// Builds the generator from the geometric controls.
    ///
    /// Fails if `v ≤ 0` or either input is non-finite.
    pub fn from_controls(v: f64, w: f64) -> Result<Self> {
        if !v.is_finite() || !w.is_finite() {
            return Err(Error::NonFinite {
                op: "SkewGenerator::from_controls",
            });
        }
        if v <= 0.0 {
            return Err(Error::Domain {
                op: "SkewGenerator::from_controls",
                value: v,
                detail: "speed v must be strictly positive",
            });
        }
        Ok(SkewGenerator { v, w })
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    /// The realized skew matrix with rows `[[0,-v,0],[v,0,-w],[0,w,0]]`.
    pub fn matrix(&self) -> Matrix3<f64> {
        Matrix3::new(
            0.0, -self.v, 0.0, //
            self.v, 0.0, -self.w, //
            0.0, self.w, 0.0,
        )
    }

    /// Rotation angle per unit time: |ω| = √(v² + w²).
    pub fn angular_rate(&self) -> f64 {
        self.v.hypot(self.w)
    }
}

/// Closed-form exponential `exp(dt·Λ)`.
///
/// The generator is the skew matrix of the axis `(w, 0, v)`, so this is the
/// Rodrigues rotation by angle `dt·√(v²+w²)` about that axis. Below
/// `|ω|·dt < 1e-6` a truncated power series is used instead; the Rodrigues
/// coefficients lose accuracy to cancellation there.
pub fn exp_step(g: &SkewGenerator, dt: f64) -> Rotation {
    assert!(dt.is_finite(), "exp_step: dt must be finite");
    let theta = g.angular_rate() * dt;
    let a = g.matrix() * dt;
    let m = if theta.abs() < 1e-6 {
        // I + A + A²/2 + A³/6; truncation error O(θ⁴) is below roundoff here.
        let a2 = a * a;
        Matrix3::identity() + a + a2 * 0.5 + a2 * a * (1.0 / 6.0)
    } else {
        // exp(A) = I + sin(θ)/θ · A + (1-cos θ)/θ² · A²
        let a2 = a * a;
        Matrix3::identity() + a * (theta.sin() / theta) + a2 * ((1.0 - theta.cos()) / (theta * theta))
    };
    Rotation { m }
}

/// Nearest special-orthogonal matrix to `m` (the polar factor).
///
/// Idempotent on exact rotations. Fails with a degeneracy error if the
/// smallest singular value of `m` is below `1e-6`.
pub fn project_to_rotation(m: &Matrix3<f64>) -> Result<Rotation> {
    let svd = m.svd(true, true);
    let u = svd.u.expect("svd with u requested");
    let v_t = svd.v_t.expect("svd with v_t requested");
    let sigma_min = svd.singular_values.min();
    if sigma_min < 1e-6 {
        return Err(Error::Degenerate {
            index: 0,
            detail: "matrix has a singular value below 1e-6; no well-defined nearest rotation",
        });
    }
    // Flip the last column of U if needed so the product lands in SO(3),
    // not just O(3).
    let det = (u * v_t).determinant();
    let mut u = u;
    if det < 0.0 {
        u.column_mut(2).neg_mut();
    }
    Ok(Rotation { m: u * v_t })
}

/// The frame columns in order: curve point γ, unit tangent t, unit normal n.
pub fn frame_columns(r: &Rotation) -> (Vector3<f64>, Vector3<f64>, Vector3<f64>) {
    let m = r.matrix();
    (
        Vector3::new(m[(0, 0)], m[(1, 0)], m[(2, 0)]),
        Vector3::new(m[(0, 1)], m[(1, 1)], m[(2, 1)]),
        Vector3::new(m[(0, 2)], m[(1, 2)], m[(2, 2)]),
    )
}
