//! Shared helpers for the integration tests: seeded sampling and an
//! independent transcription of the box-count objective used as an oracle.

#![allow(dead_code)]

use laserboard_core::{
    AngleAxis, BoardObservation, BoardPose, Box3, ImageObservation, LaserPoint, RigidTransform,
    RotationMatrix, ScanSet, Vec3,
};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}

pub fn sample_in_box(rng: &mut ChaCha8Rng, b: &Box3) -> Vec3 {
    Vec3::new(
        uniform(rng, b.center.x - b.half_len, b.center.x + b.half_len),
        uniform(rng, b.center.y - b.half_len, b.center.y + b.half_len),
        uniform(rng, b.center.z - b.half_len, b.center.z + b.half_len),
    )
}

pub fn random_unit(rng: &mut ChaCha8Rng) -> Vec3 {
    loop {
        let v = Vec3::new(
            uniform(rng, -1.0, 1.0),
            uniform(rng, -1.0, 1.0),
            uniform(rng, -1.0, 1.0),
        );
        if v.norm_squared() > 1e-3 {
            return v.normalized().unwrap();
        }
    }
}

pub fn random_rotation(rng: &mut ChaCha8Rng, max_angle: f64) -> RotationMatrix {
    let angle = uniform(rng, 0.0, max_angle);
    AngleAxis::new(random_unit(rng) * angle).to_matrix()
}

/// A board pose a few meters in front of the camera, rejection-sampled so no
/// board plane passes near the camera center.
pub fn random_pose(rng: &mut ChaCha8Rng) -> BoardPose {
    loop {
        let r_bc = random_rotation(rng, 0.9 * std::f64::consts::PI);
        let t_bc = Vec3::new(
            uniform(rng, -2.0, 2.0),
            uniform(rng, -2.0, 2.0),
            uniform(rng, 2.0, 6.0),
        );
        let pose = BoardPose { r_bc, t_bc };
        if (0..3).all(|k| r_bc.col(k).dot(t_bc).abs() >= 0.05) {
            return pose;
        }
    }
}

pub struct TestScene {
    pub scans: ScanSet,
    pub images: Vec<ImageObservation>,
    pub gt: RigidTransform,
}

/// Builds a small scene: per image some boards at random poses, and per scan
/// a mix of points sampled on those boards (mapped through the ground truth)
/// and background points at random ranges.
pub fn random_scene(
    rng: &mut ChaCha8Rng,
    n_images: usize,
    boards_per_image: usize,
    board_points_per_scan: usize,
    background_points_per_scan: usize,
) -> TestScene {
    let gt = RigidTransform {
        rot: AngleAxis::new(random_unit(rng) * uniform(rng, 0.0, 0.2)),
        t: Vec3::new(
            uniform(rng, -0.4, 0.4),
            uniform(rng, -0.4, 0.4),
            uniform(rng, -0.4, 0.4),
        ),
    };
    let rot = gt.rot.to_matrix();

    let mut scans = Vec::with_capacity(n_images);
    let mut images = Vec::with_capacity(n_images);
    for _ in 0..n_images {
        let mut boards = Vec::with_capacity(boards_per_image);
        let mut poses = Vec::with_capacity(boards_per_image);
        for _ in 0..boards_per_image {
            let pose = random_pose(rng);
            let dx = uniform(rng, 0.3, 1.0);
            let dy = uniform(rng, 0.3, 1.0);
            boards.push(laserboard_core::normals_from_pose(&pose, dx, dy).unwrap());
            poses.push((pose, dx, dy));
        }

        let mut points = Vec::new();
        for _ in 0..board_points_per_scan {
            let (pose, dx, dy) = poses[rng.random_range(0..poses.len())];
            let board_frame = Vec3::new(uniform(rng, -dx, dx), uniform(rng, -dy, dy), 0.0);
            let cam = pose.r_bc.mul_vec(board_frame) + pose.t_bc;
            points.push(LaserPoint { p: rot.mul_vec(cam) + gt.t });
        }
        for _ in 0..background_points_per_scan {
            points.push(LaserPoint { p: random_unit(rng) * uniform(rng, 1.0, 8.0) });
        }
        scans.push(points);
        images.push(ImageObservation::new(boards));
    }
    TestScene { scans: ScanSet::new(scans), images, gt }
}

// ── Independent oracle: literal transcription of the box-count objective ────

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm3(a: [f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

fn as_array(v: Vec3) -> [f64; 3] {
    [v.x, v.y, v.z]
}

/// `Φᵀ (p - Δ)` with raw arrays.
fn cam_frame(phi: &RotationMatrix, delta: [f64; 3], p: [f64; 3]) -> [f64; 3] {
    let d = [p[0] - delta[0], p[1] - delta[1], p[2] - delta[2]];
    let m = &phi.m;
    [
        m[0][0] * d[0] + m[1][0] * d[1] + m[2][0] * d[2],
        m[0][1] * d[0] + m[1][1] * d[1] + m[2][1] * d[2],
        m[0][2] * d[0] + m[1][2] * d[1] + m[2][2] * d[2],
    ]
}

fn board_indicator(board: &BoardObservation, cam: [f64; 3], eps: f64) -> usize {
    let axes = [as_array(board.nx), as_array(board.ny), as_array(board.nz)];
    let limits = [board.dx + eps, board.dy + eps, eps];
    let mut product = 1usize;
    for (n, limit) in axes.iter().zip(limits) {
        let len = norm3(*n);
        let unit = [n[0] / len, n[1] / len, n[2] / len];
        product *= usize::from((dot3(unit, cam) - len).abs() < limit);
    }
    product
}

/// The objective written out directly: sum over points of the max over that
/// image's boards of the product of the three strict box conditions.
pub fn oracle_q(
    t: &RigidTransform,
    scans: &ScanSet,
    images: &[ImageObservation],
    eps: f64,
) -> usize {
    let phi = t.rot.to_matrix();
    let delta = as_array(t.t);
    let mut total = 0;
    for (scan, image) in scans.scans.iter().zip(images) {
        for point in scan {
            let cam = cam_frame(&phi, delta, as_array(point.p));
            total += image
                .boards
                .iter()
                .map(|b| board_indicator(b, cam, eps))
                .max()
                .unwrap_or(0);
        }
    }
    total
}
