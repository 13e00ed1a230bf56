//! Globally optimal checkerboard extraction for camera-laser calibration.
//!
//! Given image-scan pairs where each image contributes known checkerboard
//! poses in the camera frame and each scan an unordered set of laser points,
//! this crate finds the laser points lying on the boards by maximizing a
//! consensus objective over the rigid camera-to-laser transform with a
//! deterministic branch-and-bound search. The output is the inlier index set
//! per scan plus a rough extrinsic estimate suitable for seeding a nonlinear
//! refinement.
//!
//! The crate is `no_std`-compatible (with `alloc`); the companion `laserboard`
//! crate carries file formats and the command line.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod bnb;
pub mod bounds;
pub mod geometry;
mod math;
pub mod model;
pub mod objective;
pub mod synth;

pub use bnb::{
    extract, extract_with_push_rule, BnbConfig, BnbError, CellQueue, ExtractionResult, InlierHit,
    PushRule, TerminationReason, TraceRecord,
};
pub use bounds::{cap_extremum, delta_loose, delta_tight, upper_bound, BoundMode, CapExtremum, SearchCell};
pub use geometry::{angle_between, AngleAxis, Box3, GeometryError, RotationMatrix, Vec3};
pub use model::{
    inlier_box_test, normals_from_pose, BoardObservation, BoardPose, ImageObservation, LaserPoint,
    ModelError, RigidTransform, ScanSet,
};
pub use objective::{evaluate_q, ObjectiveError, ObjectiveValue, PointLabel};
pub use synth::{
    generate, wall_intersection, FanConfig, PlacedBoard, RoomConfig, SynthConfig, SynthError,
    SynthScene, TruthLabel,
};
