//! The consensus objective: count laser points inside the inlier box.
//!
//! For a candidate transform the objective `Q` is the number of laser points
//! that pass the box test of their image's board. With several boards per
//! image, a point counts once if it passes for any board (the max over
//! correspondences), and the report names the lowest-index board that
//! accepted it so results are deterministic.

use alloc::vec::Vec;

use thiserror::Error;

use crate::geometry::Vec3;
use crate::model::{ImageObservation, RigidTransform, ScanSet};

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum ObjectiveError {
    #[error("scan count ({scans}) does not match image count ({images})")]
    LengthMismatch { scans: usize, images: usize },
    #[error("inlier threshold must be positive")]
    InvalidEpsilon,
}

/// Classification of one laser point under a candidate transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointLabel {
    Outlier,
    /// Inlier with the index of the board (within its image) that accepted
    /// it; the lowest index wins when several boards accept the same point.
    Inlier { board: usize },
}

/// Objective value: the inlier count plus the per-point classification.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveValue {
    pub count: usize,
    pub per_point: Vec<Vec<PointLabel>>,
}

/// One board with its axis directions, plane distances, and per-axis
/// acceptance limits (`dx+ε`, `dy+ε`, `ε`) precomputed.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PreparedBoard {
    pub dirs: [Vec3; 3],
    pub dists: [f64; 3],
    pub limits: [f64; 3],
}

impl PreparedBoard {
    /// Box test against a point already expressed in the camera frame.
    #[inline]
    pub fn accepts(&self, cam: Vec3) -> bool {
        for axis in 0..3 {
            if (self.dirs[axis].dot(cam) - self.dists[axis]).abs() >= self.limits[axis] {
                return false;
            }
        }
        true
    }
}

pub(crate) fn prepare_boards(images: &[ImageObservation], eps: f64) -> Vec<Vec<PreparedBoard>> {
    images
        .iter()
        .map(|image| {
            image
                .boards
                .iter()
                .map(|board| {
                    let mut dirs = [Vec3::ZERO; 3];
                    let mut dists = [0.0; 3];
                    for (k, axis) in board.axes().iter().enumerate() {
                        let norm = axis.norm();
                        dirs[k] = *axis * (1.0 / norm);
                        dists[k] = norm;
                    }
                    PreparedBoard { dirs, dists, limits: [board.dx + eps, board.dy + eps, eps] }
                })
                .collect()
        })
        .collect()
}

pub(crate) fn check_inputs(
    scans: &ScanSet,
    images: &[ImageObservation],
    eps: f64,
) -> Result<(), ObjectiveError> {
    if scans.len() != images.len() {
        return Err(ObjectiveError::LengthMismatch { scans: scans.len(), images: images.len() });
    }
    if !(eps > 0.0) {
        return Err(ObjectiveError::InvalidEpsilon);
    }
    Ok(())
}

/// Evaluates the objective at `t`, returning the inlier count together with
/// the per-point labels. Images without boards contribute nothing.
pub fn evaluate_q(
    t: &RigidTransform,
    scans: &ScanSet,
    images: &[ImageObservation],
    eps: f64,
) -> Result<ObjectiveValue, ObjectiveError> {
    check_inputs(scans, images, eps)?;
    let prepared = prepare_boards(images, eps);
    let rot = t.rot.to_matrix();

    let mut count = 0;
    let mut per_point = Vec::with_capacity(scans.len());
    for (scan, boards) in scans.scans.iter().zip(&prepared) {
        let mut labels = Vec::with_capacity(scan.len());
        for point in scan {
            let cam = rot.transpose_mul_vec(point.p - t.t);
            let hit = boards.iter().position(|board| board.accepts(cam));
            labels.push(match hit {
                Some(board) => {
                    count += 1;
                    PointLabel::Inlier { board }
                }
                None => PointLabel::Outlier,
            });
        }
        per_point.push(labels);
    }
    Ok(ObjectiveValue { count, per_point })
}
