//! Best-first branch-and-bound over rotation × translation cells.
//!
//! The search keeps a max-priority queue of cells keyed by their upper bound
//! `Q̂`. Each iteration pops the cell with the highest bound; if that bound no
//! longer exceeds the incumbent `Q*`, no cell can contain a better transform
//! and `Q*` is certified globally optimal. Otherwise both boxes are split
//! into eight, the 64 children are evaluated, and children whose bound beats
//! `Q*` are queued, updating the incumbent whenever a child center scores
//! higher.
//!
//! Determinism: ties in the queue break by insertion order, children are
//! merged in a fixed order, and with the `parallel` feature the children are
//! evaluated concurrently but merged identically, so results are bitwise
//! independent of the worker count.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;

use thiserror::Error;

use crate::bounds::{cell_counts, BoundMode, SearchCell};
use crate::geometry::{AngleAxis, Box3, Vec3};
use crate::model::{ImageObservation, RigidTransform, ScanSet};
use crate::objective::{check_inputs, evaluate_q, prepare_boards, ObjectiveError, PointLabel, PreparedBoard};

/// Cells below this size are no longer branched; their center value stands
/// for them. Prevents unbounded refinement when the strict inequalities keep
/// `Q̂` one above `Q*` on a measure-zero boundary.
const MIN_CELL_HALF: f64 = 1e-7;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum BnbError {
    #[error("initial box half lengths must be positive")]
    InvalidInitialBoxes,
    #[error(transparent)]
    Objective(#[from] ObjectiveError),
}

/// Gate used when deciding whether a child cell enters the queue.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PushRule {
    /// Queue a child only if its bound strictly beats the incumbent. This is
    /// the standard rule; equal-bound cells cannot improve the optimum.
    StrictlyGreater,
    /// Also queue children whose bound ties the incumbent, which keeps cells
    /// that may contain alternative optimal transforms.
    GreaterOrEqual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminationReason {
    /// The popped bound no longer exceeds `Q*`: the incumbent is certified
    /// globally optimal over the root cell.
    BoundMet,
    MaxIterations,
    /// `Q*` reached the configured floor and then stopped improving for the
    /// configured number of iterations.
    Stall,
    QueueExhausted,
}

/// Search configuration. The root cells are centered on the identity rotation
/// and zero translation with the given half sides.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BnbConfig {
    /// Inlier threshold ε, meters.
    pub eps: f64,
    /// Half side of the root rotation box, radians. π encloses all of SO(3);
    /// a smaller value encodes prior knowledge of the rotation amplitude.
    pub init_rot_half: f64,
    /// Half side of the root translation box, meters (bound on the camera to
    /// laser distance).
    pub init_trans_half: f64,
    pub mode: BoundMode,
    /// Stop after this many pop-and-expand cycles, `None` for unlimited.
    pub max_iterations: Option<usize>,
    /// Stop once `Q*` has not improved for this many iterations, active only
    /// after `Q*` reaches `min_inliers`. `None` disables the stall check.
    pub stall_window: Option<usize>,
    pub min_inliers: usize,
}

impl BnbConfig {
    pub fn new(eps: f64) -> Self {
        BnbConfig {
            eps,
            init_rot_half: core::f64::consts::PI,
            init_trans_half: 1.0,
            mode: BoundMode::Tight,
            max_iterations: None,
            stall_window: None,
            min_inliers: 0,
        }
    }
}

/// One row of the per-iteration trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceRecord {
    /// 1-based pop-and-expand cycle index.
    pub iteration: usize,
    /// Incumbent after the iteration's updates.
    pub q_star: usize,
    /// Bound of the cell examined this iteration.
    pub popped_upper: usize,
    /// Queue length after the iteration's pushes.
    pub queue_len: usize,
}

/// An inlier of the best transform: point index within its scan plus the
/// board (within the image) it matched.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InlierHit {
    pub point: usize,
    pub board: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtractionResult {
    pub best: RigidTransform,
    pub best_q: usize,
    /// Per-scan inlier index lists with board correspondence, recomputed at
    /// the best transform on termination.
    pub inliers: Vec<Vec<InlierHit>>,
    pub trace: Vec<TraceRecord>,
    pub terminated_by: TerminationReason,
    /// Pop-and-expand cycles performed.
    pub iterations: usize,
    /// Cells expanded into children.
    pub cells_expanded: usize,
    /// Children admitted to the queue.
    pub cells_pushed: usize,
}

/// Max-priority queue of cells keyed by their bound; ties pop in insertion
/// order so runs are reproducible.
pub struct CellQueue {
    heap: BinaryHeap<QueueEntry>,
    next_seq: u64,
}

struct QueueEntry {
    cell: SearchCell,
    seq: u64,
}

impl PartialEq for QueueEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cell.upper == other.cell.upper && self.seq == other.seq
    }
}

impl Eq for QueueEntry {}

impl PartialOrd for QueueEntry {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QueueEntry {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        // Highest bound first; among equals, higher center score first, then
        // earliest insertion.
        self.cell.upper.cmp(&other.cell.upper)
            .then_with(|| self.cell.center_q.cmp(&other.cell.center_q))
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

impl CellQueue {
    pub fn new() -> Self {
        CellQueue { heap: BinaryHeap::new(), next_seq: 0 }
    }

    pub fn push(&mut self, cell: SearchCell) {
        self.heap.push(QueueEntry { cell, seq: self.next_seq });
        self.next_seq += 1;
    }

    pub fn pop(&mut self) -> Option<SearchCell> {
        self.heap.pop().map(|entry| entry.cell)
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }
}

impl Default for CellQueue {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(feature = "parallel")]
fn evaluate_children(
    pairs: &[(Box3, Box3)],
    scans: &ScanSet,
    prepared: &[Vec<PreparedBoard>],
    mode: BoundMode,
) -> Vec<SearchCell> {
    use rayon::prelude::*;
    pairs
        .par_iter()
        .map(|(rot, trans)| {
            let (center_q, upper) = cell_counts(rot, trans, scans, prepared, mode);
            SearchCell { rot_box: *rot, trans_box: *trans, upper, center_q }
        })
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn evaluate_children(
    pairs: &[(Box3, Box3)],
    scans: &ScanSet,
    prepared: &[Vec<PreparedBoard>],
    mode: BoundMode,
) -> Vec<SearchCell> {
    pairs
        .iter()
        .map(|(rot, trans)| {
            let (center_q, upper) = cell_counts(rot, trans, scans, prepared, mode);
            SearchCell { rot_box: *rot, trans_box: *trans, upper, center_q }
        })
        .collect()
}

/// Runs the search with the standard strictly-greater push rule.
pub fn extract(
    scans: &ScanSet,
    images: &[ImageObservation],
    cfg: &BnbConfig,
) -> Result<ExtractionResult, BnbError> {
    extract_with_push_rule(scans, images, cfg, PushRule::StrictlyGreater)
}

/// Runs the search with an explicit push rule. The rule affects how much work
/// the search does, never the optimum it returns.
pub fn extract_with_push_rule(
    scans: &ScanSet,
    images: &[ImageObservation],
    cfg: &BnbConfig,
    rule: PushRule,
) -> Result<ExtractionResult, BnbError> {
    check_inputs(scans, images, cfg.eps)?;
    if !(cfg.init_rot_half > 0.0) || !(cfg.init_trans_half > 0.0) {
        return Err(BnbError::InvalidInitialBoxes);
    }

    let prepared = prepare_boards(images, cfg.eps);
    let root_rot = Box3::new(Vec3::ZERO, cfg.init_rot_half);
    let root_trans = Box3::new(Vec3::ZERO, cfg.init_trans_half);
    let center_of = |cell: &SearchCell| RigidTransform {
        rot: AngleAxis::new(cell.rot_box.center),
        t: cell.trans_box.center,
    };

    let mut queue = CellQueue::new();
    let mut trace = Vec::new();
    let mut iterations = 0;
    let mut cells_expanded = 0;
    let mut cells_pushed = 0;

    let (root_center_q, root_upper) =
        cell_counts(&root_rot, &root_trans, scans, &prepared, cfg.mode);
    let root =
        SearchCell { rot_box: root_rot, trans_box: root_trans, upper: root_upper, center_q: root_center_q };
    let mut best = center_of(&root);
    let mut q_star = root.center_q;
    let mut since_improvement = 0usize;

    let terminated_by;
    if scans.total_points() == 0 {
        // Nothing to search over; report the empty optimum directly.
        terminated_by = TerminationReason::QueueExhausted;
    } else {
        queue.push(root);
        loop {
            let Some(cell) = queue.pop() else {
                terminated_by = TerminationReason::QueueExhausted;
                break;
            };
            if let Some(max) = cfg.max_iterations {
                if iterations >= max {
                    terminated_by = TerminationReason::MaxIterations;
                    break;
                }
            }
            iterations += 1;

            if cell.upper <= q_star {
                trace.push(TraceRecord {
                    iteration: iterations,
                    q_star,
                    popped_upper: cell.upper,
                    queue_len: queue.len(),
                });
                terminated_by = TerminationReason::BoundMet;
                break;
            }

            let improved_before = q_star;
            if cell.rot_box.half_len >= MIN_CELL_HALF || cell.trans_box.half_len >= MIN_CELL_HALF {
                cells_expanded += 1;
                let rot_children = cell.rot_box.branch().map_err(|_| BnbError::InvalidInitialBoxes)?;
                let trans_children =
                    cell.trans_box.branch().map_err(|_| BnbError::InvalidInitialBoxes)?;
                let mut pairs = Vec::with_capacity(64);
                for rot in &rot_children {
                    for trans in &trans_children {
                        pairs.push((*rot, *trans));
                    }
                }
                let children = evaluate_children(&pairs, scans, &prepared, cfg.mode);
                for child in children {
                    let admit = match rule {
                        PushRule::StrictlyGreater => child.upper > q_star,
                        PushRule::GreaterOrEqual => child.upper >= q_star,
                    };
                    if admit {
                        if child.center_q > q_star {
                            q_star = child.center_q;
                            best = center_of(&child);
                        }
                        queue.push(child);
                        cells_pushed += 1;
                    }
                }
            }

            trace.push(TraceRecord {
                iteration: iterations,
                q_star,
                popped_upper: cell.upper,
                queue_len: queue.len(),
            });

            if q_star > improved_before {
                since_improvement = 0;
            } else {
                since_improvement += 1;
            }
            if let Some(window) = cfg.stall_window {
                if q_star >= cfg.min_inliers && since_improvement >= window {
                    terminated_by = TerminationReason::Stall;
                    break;
                }
            }
        }
    }

    let value = evaluate_q(&best, scans, images, cfg.eps)?;
    debug_assert_eq!(value.count, q_star);
    let inliers = value
        .per_point
        .iter()
        .map(|labels| {
            labels
                .iter()
                .enumerate()
                .filter_map(|(point, label)| match label {
                    PointLabel::Inlier { board } => Some(InlierHit { point, board: *board }),
                    PointLabel::Outlier => None,
                })
                .collect()
        })
        .collect();

    Ok(ExtractionResult {
        best,
        best_q: q_star,
        inliers,
        trace,
        terminated_by,
        iterations,
        cells_expanded,
        cells_pushed,
    })
}
