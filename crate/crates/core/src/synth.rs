//! Deterministic synthetic scenes: a 2D scanner fan in a triangular room.
//!
//! The scanner sits at the laser-frame origin and sweeps rays in the z = 0
//! plane, measured from the +x axis. Two walls close the room: each is a
//! vertical plane at `wall_distance` from the scanner, and they meet in a
//! vertical line `apex_distance` straight ahead. Boards are placed by their
//! camera-frame pose; each ray returns the nearest board hit within the board
//! extent, or else the wall behind it.
//!
//! Randomness comes from a seeded ChaCha8 stream with a fixed draw order, so
//! a seed reproduces a scene bit for bit on any platform. Per image the order
//! is: for each board, three uniform angles in `[-normal_noise, normal_noise]`
//! (the camera-frame x, y, z tilt of that board's measured normals), then one
//! uniform range offset in `[-range_noise, range_noise]` per ray, in ray
//! order.

use alloc::vec::Vec;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::geometry::{AngleAxis, RotationMatrix, Vec3};
use crate::math;
use crate::model::{
    normals_from_pose, BoardPose, ImageObservation, LaserPoint, ModelError, RigidTransform,
    ScanSet,
};

/// A ray whose board intersection ties with the wall range within this slack
/// is treated as a board hit; boards placed flush on a wall would otherwise
/// lose every tie to rounding.
const HIT_TIE_SLACK: f64 = 1e-9;

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum SynthError {
    #[error("room must satisfy 0 < wall_distance <= apex_distance")]
    InvalidRoom,
    #[error("fan must have at least one ray and a positive step")]
    InvalidFan,
    #[error("noise half-widths must be nonnegative")]
    InvalidNoise,
    #[error("ray ({dir_x}, {dir_y}) is parallel to both walls")]
    RayParallelToWalls { dir_x: f64, dir_y: f64 },
    #[error(transparent)]
    BadBoard(#[from] ModelError),
}

/// Scanner fan: `count` rays at `start + k·step` radians in the scan plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FanConfig {
    pub start: f64,
    pub step: f64,
    pub count: usize,
}

impl FanConfig {
    pub fn angles(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(move |k| self.start + k as f64 * self.step)
    }
}

/// The triangular room: two walls at `wall_distance` from the scanner whose
/// intersection line is `apex_distance` straight ahead.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoomConfig {
    pub wall_distance: f64,
    pub apex_distance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthConfig {
    /// Ground-truth camera-to-laser transform used to build the scene.
    pub gt: RigidTransform,
    pub fan: FanConfig,
    pub room: RoomConfig,
    /// Half-width of the uniform per-ray range noise, meters.
    pub range_noise: f64,
    /// Half-width of the uniform per-axis tilt applied to each board's
    /// measured normals, radians.
    pub normal_noise: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    /// The reference scene: 10° rotation about y, Δ = (-0.75, -0.2, 0.5),
    /// 71 rays every 2° from -70° to 70°, walls at 5 m meeting 8 m ahead,
    /// ±2 cm range noise, ±1° normal noise.
    fn default() -> Self {
        let deg = core::f64::consts::PI / 180.0;
        SynthConfig {
            gt: RigidTransform {
                rot: AngleAxis::new(Vec3::new(0.0, 10.0 * deg, 0.0)),
                t: Vec3::new(-0.75, -0.2, 0.5),
            },
            fan: FanConfig { start: -70.0 * deg, step: 2.0 * deg, count: 71 },
            room: RoomConfig { wall_distance: 5.0, apex_distance: 8.0 },
            range_noise: 0.02,
            normal_noise: 1.0 * deg,
            seed: DEFAULT_SEED,
        }
    }
}

/// Seed of the bundled reference scene.
pub const DEFAULT_SEED: u64 = 7;

/// A board placed in the scene: camera-frame pose plus half-dimensions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlacedBoard {
    pub pose: BoardPose,
    pub dx: f64,
    pub dy: f64,
}

/// What each generated point actually measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TruthLabel {
    Wall,
    Board { board: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthScene {
    pub scans: ScanSet,
    /// Noisy board observations, what the extractor gets to see.
    pub images: Vec<ImageObservation>,
    /// Per-point ground-truth labels from the exact geometry.
    pub truth: Vec<Vec<TruthLabel>>,
    pub gt: RigidTransform,
}

/// Range to the nearer wall along a scan-plane direction.
pub fn wall_intersection(dir: [f64; 2], room: &RoomConfig) -> Result<f64, SynthError> {
    if !(room.wall_distance > 0.0) || room.apex_distance < room.wall_distance {
        return Err(SynthError::InvalidRoom);
    }
    // Wall normals are (w/a, ±sqrt(1 - (w/a)²)); both planes satisfy n·p = w.
    let nx = room.wall_distance / room.apex_distance;
    let ny = math::sqrt((1.0 - nx * nx).max(0.0));
    let denom = nx * dir[0] + ny * dir[1].abs();
    if denom <= 1e-12 {
        return Err(SynthError::RayParallelToWalls { dir_x: dir[0], dir_y: dir[1] });
    }
    Ok(room.wall_distance / denom)
}

fn unit_f64(rng: &mut ChaCha8Rng) -> f64 {
    // 53 uniform mantissa bits, [0, 1).
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn symmetric(rng: &mut ChaCha8Rng, half_width: f64) -> f64 {
    half_width * (2.0 * unit_f64(rng) - 1.0)
}

/// Casts the scanner fan against the placed boards and walls, producing the
/// laser points, the noisy board observations, and the ground-truth labels.
///
/// Board planes are intersected with the exact ground-truth geometry; noise
/// perturbs only the measured ranges and the reported normals.
pub fn generate(cfg: &SynthConfig, placements: &[Vec<PlacedBoard>]) -> Result<SynthScene, SynthError> {
    if cfg.fan.count == 0 || !(cfg.fan.step > 0.0) {
        return Err(SynthError::InvalidFan);
    }
    if !(cfg.range_noise >= 0.0) || !(cfg.normal_noise >= 0.0) {
        return Err(SynthError::InvalidNoise);
    }
    wall_intersection([1.0, 0.0], &cfg.room)?;

    let rot = cfg.gt.rot.to_matrix();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut scans = Vec::with_capacity(placements.len());
    let mut images = Vec::with_capacity(placements.len());
    let mut truth = Vec::with_capacity(placements.len());

    for boards in placements {
        // Laser-frame plane of each board: normal and a point on the plane.
        let mut planes = Vec::with_capacity(boards.len());
        let mut observed = Vec::with_capacity(boards.len());
        for placed in boards {
            let normal = rot.mul_vec(placed.pose.r_bc.col(2));
            let on_plane = cfg.gt.apply(placed.pose.t_bc);
            planes.push((normal, on_plane));

            let exact = normals_from_pose(&placed.pose, placed.dx, placed.dy)?;
            let tilt = RotationMatrix::rot_x(symmetric(&mut rng, cfg.normal_noise))
                .mul_mat(&RotationMatrix::rot_y(symmetric(&mut rng, cfg.normal_noise)))
                .mul_mat(&RotationMatrix::rot_z(symmetric(&mut rng, cfg.normal_noise)));
            observed.push(crate::model::BoardObservation {
                nx: tilt.mul_vec(exact.nx),
                ny: tilt.mul_vec(exact.ny),
                nz: tilt.mul_vec(exact.nz),
                dx: exact.dx,
                dy: exact.dy,
            });
        }

        let mut points = Vec::with_capacity(cfg.fan.count);
        let mut labels = Vec::with_capacity(cfg.fan.count);
        for angle in cfg.fan.angles() {
            let dir = Vec3::new(math::cos(angle), math::sin(angle), 0.0);
            let wall_range = wall_intersection([dir.x, dir.y], &cfg.room)?;

            let mut hit: Option<(f64, usize)> = None;
            for (k, (placed, (normal, on_plane))) in boards.iter().zip(&planes).enumerate() {
                let denom = normal.dot(dir);
                if denom.abs() < 1e-12 {
                    continue;
                }
                let range = normal.dot(*on_plane) / denom;
                if range <= 1e-9 {
                    continue;
                }
                let board_frame = placed
                    .pose
                    .r_bc
                    .transpose_mul_vec(rot.transpose_mul_vec(dir * range - cfg.gt.t) - placed.pose.t_bc);
                if board_frame.x.abs() <= placed.dx && board_frame.y.abs() <= placed.dy {
                    if hit.map_or(true, |(best, _)| range < best) {
                        hit = Some((range, k));
                    }
                }
            }

            let (range, label) = match hit {
                Some((range, k)) if range <= wall_range + HIT_TIE_SLACK => {
                    (range, TruthLabel::Board { board: k })
                }
                _ => (wall_range, TruthLabel::Wall),
            };
            let measured = range + symmetric(&mut rng, cfg.range_noise);
            points.push(LaserPoint { p: dir * measured });
            labels.push(label);
        }

        scans.push(points);
        images.push(ImageObservation::new(observed));
        truth.push(labels);
    }

    Ok(SynthScene { scans: ScanSet::new(scans), images, truth, gt: cfg.gt })
}
