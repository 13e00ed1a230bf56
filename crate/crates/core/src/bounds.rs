//! Upper bounds on the objective over a search cell.
//!
//! A cell pairs a rotation box (angle-axis space, half side `δ_R`) with a
//! translation box (half side `δ_t`). The bound `Q̂` re-runs the box test at
//! the cell center with each axis limit inflated by a per-point slack `δ_ij`,
//! which dominates how far the test residual can move anywhere in the cell:
//!
//! * loose: `δ_ij = ‖p - Δ_c‖·√(2(1 - cos(√3 δ_R))) + √3 δ_t`, bounding the
//!   rotated normal by the ball around the spherical cap it sweeps;
//! * tight: the extremal dot products of the cap itself, per axis, via the
//!   closed-form cap extremum.
//!
//! Both collapse to zero with the cell, so `Q̂` equals `Q` on point cells.
//! The cap half-angle `√3 δ_R` is clamped to π: beyond that the cap is the
//! whole sphere and the bound degrades gracefully instead of breaking.

use alloc::vec::Vec;

use crate::geometry::{Box3, Vec3};
use crate::math;
use crate::model::{ImageObservation, LaserPoint, ScanSet};
use crate::objective::{check_inputs, prepare_boards, ObjectiveError, PreparedBoard};

/// Which per-point slack the bound uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundMode {
    /// Ball-around-the-cap slack, one value shared by all three axis tests.
    Loose,
    /// Cap-extremum slack, one value per board axis.
    Tight,
}

/// Extremal values of `g(Φ) = (Φ N̄)ᵀ (p - Δ_c)` over the spherical cap of
/// directions reachable from the rotation box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapExtremum {
    pub g_max: f64,
    pub g_min: f64,
}

/// A queue element of the branch-and-bound search: the box pair plus its
/// cached bound and center objective value. `upper >= center_q` always, since
/// the center is a member of the cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchCell {
    pub rot_box: Box3,
    pub trans_box: Box3,
    pub upper: usize,
    pub center_q: usize,
}

impl SearchCell {
    /// Builds a cell by evaluating both the bound and the center objective.
    pub fn evaluate(
        rot_box: Box3,
        trans_box: Box3,
        scans: &ScanSet,
        images: &[ImageObservation],
        eps: f64,
        mode: BoundMode,
    ) -> Result<SearchCell, ObjectiveError> {
        check_inputs(scans, images, eps)?;
        let prepared = prepare_boards(images, eps);
        let (center_q, upper) = cell_counts(&rot_box, &trans_box, scans, &prepared, mode);
        Ok(SearchCell { rot_box, trans_box, upper, center_q })
    }
}

/// Cap half-angle for a rotation box: `min(√3 δ_R, π)`.
#[inline]
fn cap_half_angle(rot_half: f64) -> f64 {
    (math::SQRT_3 * rot_half).min(core::f64::consts::PI)
}

/// The loose per-point slack (shared by all three axis tests).
pub fn delta_loose(p: &LaserPoint, rot_box: &Box3, trans_box: &Box3) -> f64 {
    let alpha = cap_half_angle(rot_box.half_len);
    let chord = math::sqrt((2.0 * (1.0 - math::cos(alpha))).max(0.0));
    (p.p - trans_box.center).norm() * chord + math::SQRT_3 * trans_box.half_len
}

/// Core of the cap extremum, phrased in the cosine of the angle `β` between
/// `Φ_c N̄` and `p - Δ_c` so the hot path needs no inverse trigonometry:
/// `β ≤ α ⟺ cos β ≥ cos α` and `β ≥ π - α ⟺ cos β ≤ -cos α` on `[0, π]`.
#[inline]
pub(crate) fn cap_extremum_from_cos(r: f64, cos_beta: f64, cos_a: f64, sin_a: f64) -> CapExtremum {
    let cb = cos_beta.clamp(-1.0, 1.0);
    let sb = math::sqrt((1.0 - cb * cb).max(0.0));
    // cos(β ∓ α) expanded; sin β and sin α are both nonnegative here.
    let g_plus = r * (cb * cos_a + sb * sin_a);
    let g_minus = r * (cb * cos_a - sb * sin_a);
    let g_max = if cb >= cos_a { r } else { g_plus.max(g_minus) };
    let g_min = if cb <= -cos_a { -r } else { g_plus.min(g_minus) };
    CapExtremum { g_max, g_min }
}

/// Extremal dot products of the rotated unit normal with `p - Δ_c` over the
/// spherical cap swept by the rotation box.
///
/// `n_dir` must be a unit vector. When `p` coincides with the translation
/// center the radius is zero and both extrema are zero.
pub fn cap_extremum(n_dir: &Vec3, p: &LaserPoint, rot_box: &Box3, trans_center: Vec3) -> CapExtremum {
    debug_assert!((n_dir.norm() - 1.0).abs() < 1e-9);
    let rel = p.p - trans_center;
    let r = rel.norm();
    if r < 1e-12 {
        return CapExtremum { g_max: 0.0, g_min: 0.0 };
    }
    let alpha = cap_half_angle(rot_box.half_len);
    let rotated = crate::geometry::AngleAxis::new(rot_box.center).to_matrix().mul_vec(*n_dir);
    cap_extremum_from_cos(r, rotated.dot(rel) / r, math::cos(alpha), math::sin(alpha))
}

/// The tight per-point, per-axis slack built from the cap extremum.
pub fn delta_tight(n_dir: &Vec3, p: &LaserPoint, rot_box: &Box3, trans_box: &Box3) -> f64 {
    let rel = p.p - trans_box.center;
    let r = rel.norm();
    let base = math::SQRT_3 * trans_box.half_len;
    if r < 1e-12 {
        return base;
    }
    let alpha = cap_half_angle(rot_box.half_len);
    let rotated = crate::geometry::AngleAxis::new(rot_box.center).to_matrix().mul_vec(*n_dir);
    let center_dot = rotated.dot(rel);
    let ext = cap_extremum_from_cos(r, center_dot / r, math::cos(alpha), math::sin(alpha));
    base + (center_dot - ext.g_min).abs().max((center_dot - ext.g_max).abs())
}

/// Per-cell quantities shared by every point evaluation.
struct CellFrame {
    trans_center: Vec3,
    chord: f64,
    trans_slack: f64,
    cos_a: f64,
    sin_a: f64,
    /// `Φ_c N̄` for every axis of every board, per image.
    rotated: Vec<Vec<[Vec3; 3]>>,
}

impl CellFrame {
    fn new(rot_box: &Box3, trans_box: &Box3, prepared: &[Vec<PreparedBoard>]) -> CellFrame {
        let alpha = cap_half_angle(rot_box.half_len);
        let cos_a = math::cos(alpha);
        let sin_a = math::sin(alpha);
        let rot = crate::geometry::AngleAxis::new(rot_box.center).to_matrix();
        let rotated = prepared
            .iter()
            .map(|boards| {
                boards
                    .iter()
                    .map(|b| [rot.mul_vec(b.dirs[0]), rot.mul_vec(b.dirs[1]), rot.mul_vec(b.dirs[2])])
                    .collect()
            })
            .collect();
        CellFrame {
            trans_center: trans_box.center,
            chord: math::sqrt((2.0 * (1.0 - cos_a)).max(0.0)),
            trans_slack: math::SQRT_3 * trans_box.half_len,
            cos_a,
            sin_a,
            rotated,
        }
    }
}

/// Evaluates `Q(center)` and `Q̂(cell)` in one pass over the points.
///
/// A board accepts a point for the bound when every axis residual stays below
/// its inflated limit, and for the center count when it stays below the plain
/// limit; the center acceptance implies the bound acceptance, which lets the
/// board loop stop as soon as a center hit is found.
pub(crate) fn cell_counts(
    rot_box: &Box3,
    trans_box: &Box3,
    scans: &ScanSet,
    prepared: &[Vec<PreparedBoard>],
    mode: BoundMode,
) -> (usize, usize) {
    let frame = CellFrame::new(rot_box, trans_box, prepared);
    let mut center_q = 0;
    let mut upper = 0;

    for (scan, (boards, rotated)) in
        scans.scans.iter().zip(prepared.iter().zip(&frame.rotated))
    {
        for point in scan {
            let rel = point.p - frame.trans_center;
            let r = rel.norm();
            let loose_slack = r * frame.chord + frame.trans_slack;

            let mut bound_hit = false;
            let mut center_hit = false;
            for (board, axes) in boards.iter().zip(rotated) {
                let mut board_bound = true;
                let mut board_center = true;
                for axis in 0..3 {
                    let dot = axes[axis].dot(rel);
                    let residual = (dot - board.dists[axis]).abs();
                    let slack = match mode {
                        BoundMode::Loose => loose_slack,
                        BoundMode::Tight => {
                            if r < 1e-12 {
                                frame.trans_slack
                            } else {
                                let ext =
                                    cap_extremum_from_cos(r, dot / r, frame.cos_a, frame.sin_a);
                                frame.trans_slack
                                    + (dot - ext.g_min).abs().max((dot - ext.g_max).abs())
                            }
                        }
                    };
                    if residual >= board.limits[axis] + slack {
                        board_bound = false;
                        break;
                    }
                    if residual >= board.limits[axis] {
                        board_center = false;
                    }
                }
                bound_hit |= board_bound;
                if board_bound && board_center {
                    center_hit = true;
                    break;
                }
            }
            if bound_hit {
                upper += 1;
            }
            if center_hit {
                center_q += 1;
            }
        }
    }
    (center_q, upper)
}

/// The upper bound `Q̂` over a cell, valid for every transform inside it.
pub fn upper_bound(
    rot_box: &Box3,
    trans_box: &Box3,
    scans: &ScanSet,
    images: &[ImageObservation],
    eps: f64,
    mode: BoundMode,
) -> Result<usize, ObjectiveError> {
    check_inputs(scans, images, eps)?;
    let prepared = prepare_boards(images, eps);
    Ok(cell_counts(rot_box, trans_box, scans, &prepared, mode).1)
}
