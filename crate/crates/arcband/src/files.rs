//! On-disk formats: versioned JSON documents for control pairs and curves.
//!
//! Controls document:
//! ```json
//! {
//!   "version": 1,
//!   "band": [-1.0, 1.0],
//!   "grid_size": 4,
//!   "v_hat": {"constant": 0.5},
//!   "w_hat": [0.0, 0.1, -0.2, 0.0]
//! }
//! ```
//! `v_hat` is either `{"constant": c}` or an array of `grid_size` reals.
//!
//! Curve document:
//! ```json
//! {
//!   "version": 1,
//!   "param": "constant_speed",
//!   "length": 6.28,
//!   "samples": [[1.0, 0.0, 0.0], ...]
//! }
//! ```

use std::path::Path;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::controls::{ControlPair, CurvatureBand, SpeedCoordinate};
use crate::curve::{Param, SphericalCurve};
use crate::error::{Error, Result};
use crate::integrator::FrenetPath;
use crate::so3::Rotation;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum VHatField {
    Constant { constant: f64 },
    Samples(Vec<f64>),
}

#[derive(Debug, Serialize, Deserialize)]
struct ControlsDoc {
    version: u32,
    band: [f64; 2],
    grid_size: usize,
    v_hat: VHatField,
    w_hat: Vec<f64>,
}

/// Serializes a control pair to the controls document.
pub fn controls_to_json(c: &ControlPair) -> Result<String> {
    let v_hat = match c.v_hat() {
        SpeedCoordinate::Constant(x) => VHatField::Constant { constant: *x },
        SpeedCoordinate::Sampled(vs) => VHatField::Samples(vs.clone()),
    };
    let doc = ControlsDoc {
        version: FORMAT_VERSION,
        band: [c.band().kappa1(), c.band().kappa2()],
        grid_size: c.grid_size(),
        v_hat,
        w_hat: c.w_hat().to_vec(),
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

/// Parses a controls document, validating version and grid consistency.
pub fn controls_from_json(text: &str) -> Result<ControlPair> {
    let doc: ControlsDoc = serde_json::from_str(text)?;
    if doc.version != FORMAT_VERSION {
        return Err(Error::Format(format!(
            "unsupported controls format version {}",
            doc.version
        )));
    }
    if doc.w_hat.len() != doc.grid_size {
        return Err(Error::Format(format!(
            "w_hat holds {} samples but grid_size is {}",
            doc.w_hat.len(),
            doc.grid_size
        )));
    }
    let band = CurvatureBand::new(doc.band[0], doc.band[1])?;
    match doc.v_hat {
        VHatField::Constant { constant } => ControlPair::constant_speed(constant, doc.w_hat, band),
        VHatField::Samples(vs) => {
            if vs.len() != doc.grid_size {
                return Err(Error::Format(format!(
                    "v_hat holds {} samples but grid_size is {}",
                    vs.len(),
                    doc.grid_size
                )));
            }
            ControlPair::sampled(vs, doc.w_hat, band)
        }
    }
}

pub fn write_controls(path: &Path, c: &ControlPair) -> Result<()> {
    std::fs::write(path, controls_to_json(c)?)?;
    Ok(())
}

pub fn read_controls(path: &Path) -> Result<ControlPair> {
    controls_from_json(&std::fs::read_to_string(path)?)
}

#[derive(Debug, Serialize, Deserialize)]
struct CurveDoc {
    version: u32,
    param: Param,
    length: f64,
    samples: Vec<[f64; 3]>,
}

pub fn curve_to_json(curve: &SphericalCurve) -> Result<String> {
    let doc = CurveDoc {
        version: FORMAT_VERSION,
        param: curve.param(),
        length: curve.length(),
        samples: curve.samples().iter().map(|p| [p[0], p[1], p[2]]).collect(),
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

pub fn curve_from_json(text: &str) -> Result<SphericalCurve> {
    let doc: CurveDoc = serde_json::from_str(text)?;
    if doc.version != FORMAT_VERSION {
        return Err(Error::Format(format!(
            "unsupported curve format version {}",
            doc.version
        )));
    }
    let samples = doc
        .samples
        .iter()
        .map(|&[x, y, z]| Vector3::new(x, y, z))
        .collect();
    SphericalCurve::with_length(samples, doc.param, doc.length)
}

pub fn write_curve(path: &Path, curve: &SphericalCurve) -> Result<()> {
    std::fs::write(path, curve_to_json(curve)?)?;
    Ok(())
}

pub fn read_curve(path: &Path) -> Result<SphericalCurve> {
    curve_from_json(&std::fs::read_to_string(path)?)
}

#[derive(Debug, Serialize, Deserialize)]
struct FramesDoc {
    version: u32,
    times: Vec<f64>,
    /// Row-major 3×3 matrices.
    frames: Vec<[[f64; 3]; 3]>,
}

/// Serializes a frame path (times plus row-major rotation matrices).
pub fn frames_to_json(path: &FrenetPath) -> Result<String> {
    let frames = path
        .frames()
        .iter()
        .map(|f| {
            let m = f.matrix();
            [
                [m[(0, 0)], m[(0, 1)], m[(0, 2)]],
                [m[(1, 0)], m[(1, 1)], m[(1, 2)]],
                [m[(2, 0)], m[(2, 1)], m[(2, 2)]],
            ]
        })
        .collect();
    let doc = FramesDoc {
        version: FORMAT_VERSION,
        times: path.times().to_vec(),
        frames,
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

/// Reads back the frames of a frame-path document.
pub fn frames_from_json(text: &str) -> Result<Vec<Rotation>> {
    let doc: FramesDoc = serde_json::from_str(text)?;
    if doc.version != FORMAT_VERSION {
        return Err(Error::Format(format!(
            "unsupported frames format version {}",
            doc.version
        )));
    }
    doc.frames
        .iter()
        .map(|rows| {
            let m = nalgebra::Matrix3::new(
                rows[0][0], rows[0][1], rows[0][2], //
                rows[1][0], rows[1][1], rows[1][2], //
                rows[2][0], rows[2][1], rows[2][2],
            );
            Rotation::from_matrix(m)
        })
        .collect()
}
