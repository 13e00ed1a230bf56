//! Scene data: laser scans, checkerboard observations, and the inlier box.
//!
//! A board observed in image `i` is described by three camera-frame vectors
//! `Nx`, `Ny`, `Nz` along the board axes whose norms equal the distance from
//! the camera center to the corresponding board plane, plus the board half
//! dimensions `dx`, `dy`. A laser point `p` is an inlier for a candidate
//! camera-to-laser transform `(Φ, Δ)` when the camera-frame point `Φᵀ(p - Δ)`
//! lies inside the box of extent `2(dx+ε) × 2(dy+ε) × 2ε` around the board.

use alloc::vec::Vec;

use thiserror::Error;

use crate::geometry::{AngleAxis, RotationMatrix, Vec3};
use crate::math;

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum ModelError {
    /// The board plane orthogonal to the given axis (0 = x, 1 = y, 2 = z)
    /// passes through the camera center, so the normalized form of the box
    /// test is undefined.
    #[error("degenerate pose: board plane for axis {axis} passes through the camera center")]
    DegeneratePose { axis: usize },
    /// Axis directions deviate from mutual orthogonality by more than the
    /// stated angle in radians.
    #[error("board axes are not orthogonal (max deviation {deviation} rad)")]
    NonOrthogonalAxes { deviation: f64 },
    #[error("board half-dimensions must be positive (dx = {dx}, dy = {dy})")]
    InvalidDimensions { dx: f64, dy: f64 },
    #[error("board axis vector {axis} has zero length")]
    ZeroAxis { axis: usize },
}

/// A 3D point measured by the laser scanner, in the laser frame, meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaserPoint {
    pub p: Vec3,
}

impl LaserPoint {
    #[inline]
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        LaserPoint { p: Vec3::new(x, y, z) }
    }
}

/// The laser points of all image-scan pairs. Scan `i` may have any number of
/// points, including zero when no return was recorded.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScanSet {
    pub scans: Vec<Vec<LaserPoint>>,
}

impl ScanSet {
    pub fn new(scans: Vec<Vec<LaserPoint>>) -> Self {
        ScanSet { scans }
    }

    pub fn len(&self) -> usize {
        self.scans.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scans.is_empty()
    }

    pub fn total_points(&self) -> usize {
        self.scans.iter().map(Vec::len).sum()
    }
}

/// One checkerboard as seen from the camera: axis vectors in the camera frame
/// (norm = camera-to-plane distance) and board half-dimensions in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoardObservation {
    pub nx: Vec3,
    pub ny: Vec3,
    pub nz: Vec3,
    pub dx: f64,
    pub dy: f64,
}

impl BoardObservation {
    #[inline]
    pub fn axes(&self) -> [Vec3; 3] {
        [self.nx, self.ny, self.nz]
    }

    /// Checks the documented invariants: positive dimensions, nonzero axes,
    /// and mutual orthogonality of the axis directions within 1e-6 radians.
    pub fn validate(&self) -> Result<(), ModelError> {
        if !(self.dx > 0.0) || !(self.dy > 0.0) {
            return Err(ModelError::InvalidDimensions { dx: self.dx, dy: self.dy });
        }
        let axes = self.axes();
        let mut dirs = [Vec3::ZERO; 3];
        for (k, axis) in axes.iter().enumerate() {
            dirs[k] = axis.normalized().ok_or(ModelError::ZeroAxis { axis: k })?;
        }
        let mut deviation: f64 = 0.0;
        for a in 0..3 {
            for b in (a + 1)..3 {
                // |asin(dot)| measures the departure from a right angle.
                let dot = dirs[a].dot(dirs[b]).clamp(-1.0, 1.0);
                deviation = deviation.max(math::asin(dot.abs()));
            }
        }
        if deviation > 1e-6 {
            return Err(ModelError::NonOrthogonalAxes { deviation });
        }
        Ok(())
    }
}

/// The boards visible in one image. May be empty when every board fell
/// outside the camera's view for that image-scan pair.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ImageObservation {
    pub boards: Vec<BoardObservation>,
}

impl ImageObservation {
    pub fn new(boards: Vec<BoardObservation>) -> Self {
        ImageObservation { boards }
    }
}

/// Candidate camera-to-laser extrinsic: `p_laser = Φ p_camera + Δ`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RigidTransform {
    pub rot: AngleAxis,
    pub t: Vec3,
}

impl RigidTransform {
    pub const IDENTITY: RigidTransform = RigidTransform { rot: AngleAxis::IDENTITY, t: Vec3::ZERO };

    pub const fn new(rot: AngleAxis, t: Vec3) -> Self {
        RigidTransform { rot, t }
    }

    /// Maps a camera-frame point into the laser frame.
    pub fn apply(&self, p_camera: Vec3) -> Vec3 {
        self.rot.to_matrix().mul_vec(p_camera) + self.t
    }
}

/// Checkerboard pose from a camera calibration toolbox: rotation and origin
/// of the board frame expressed in the camera frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoardPose {
    pub r_bc: RotationMatrix,
    pub t_bc: Vec3,
}

/// Builds the `N` axis vectors of a board observation from its pose.
///
/// For each board axis `e_k`, the direction is `±R·e_k` signed so that the
/// dot product with the board origin is positive, and the magnitude is the
/// distance from the camera center to the board plane orthogonal to `e_k`.
/// Both collapse into `N_k = (R e_k)·((R e_k)ᵀ t)`.
pub fn normals_from_pose(pose: &BoardPose, dx: f64, dy: f64) -> Result<BoardObservation, ModelError> {
    if !(dx > 0.0) || !(dy > 0.0) {
        return Err(ModelError::InvalidDimensions { dx, dy });
    }
    let mut n = [Vec3::ZERO; 3];
    for (axis, slot) in n.iter_mut().enumerate() {
        let dir = pose.r_bc.col(axis);
        let dist = dir.dot(pose.t_bc);
        if dist.abs() < 1e-9 {
            return Err(ModelError::DegeneratePose { axis });
        }
        *slot = dir * dist;
    }
    Ok(BoardObservation { nx: n[0], ny: n[1], nz: n[2], dx, dy })
}

/// The box-inlier conditions: true iff `p` falls inside the inlier box of the
/// board under the transform `t`. The inequalities are strict, so a point at
/// exactly `dx + eps` (or `dy + eps`, or `eps`) from the respective plane is
/// an outlier.
///
/// `b` must satisfy [`BoardObservation::validate`] and `eps` must be positive.
pub fn inlier_box_test(p: &LaserPoint, t: &RigidTransform, b: &BoardObservation, eps: f64) -> bool {
    debug_assert!(eps > 0.0);
    let cam = t.rot.to_matrix().transpose_mul_vec(p.p - t.t);
    let limits = [b.dx + eps, b.dy + eps, eps];
    for (axis, limit) in b.axes().iter().zip(limits) {
        let norm = axis.norm();
        let dir = *axis * (1.0 / norm);
        if (dir.dot(cam) - norm).abs() >= limit {
            return false;
        }
    }
    true
}
