//! Properties of the board observation model and the box-inlier test.

mod common;

use laserboard_core::{
    evaluate_q, inlier_box_test, normals_from_pose, AngleAxis, LaserPoint, PointLabel,
    RigidTransform, Vec3,
};
use proptest::prelude::*;

proptest! {
    /// Points on the board pass the test under the identity transform for
    /// any positive threshold.
    #[test]
    fn board_points_pass_under_identity(seed in 0u64..500, u in -1.0f64..1.0, v in -1.0f64..1.0) {
        let mut rng = common::rng(seed);
        let pose = common::random_pose(&mut rng);
        let (dx, dy) = (0.6, 0.8);
        let obs = normals_from_pose(&pose, dx, dy).unwrap();
        let board_frame = Vec3::new(u * dx, v * dy, 0.0);
        let p = LaserPoint { p: pose.r_bc.mul_vec(board_frame) + pose.t_bc };
        for eps in [1e-6, 0.07, 0.5] {
            prop_assert!(inlier_box_test(&p, &RigidTransform::IDENTITY, &obs, eps));
        }
    }

    /// The test depends on p - Δ only.
    #[test]
    fn joint_translation_leaves_the_test_unchanged(
        seed in 0u64..500,
        wx in -3.0f64..3.0, wy in -3.0f64..3.0, wz in -3.0f64..3.0,
        px in -2.0f64..2.0, py in -2.0f64..2.0, pz in 0.0f64..6.0,
    ) {
        let mut rng = common::rng(seed);
        let pose = common::random_pose(&mut rng);
        let obs = normals_from_pose(&pose, 0.75, 0.75).unwrap();
        let t = RigidTransform {
            rot: AngleAxis::new(Vec3::new(0.05, -0.02, 0.1)),
            t: Vec3::new(0.2, -0.1, 0.3),
        };
        let w = Vec3::new(wx, wy, wz);
        let p = LaserPoint::new(px, py, pz);
        let shifted_p = LaserPoint { p: p.p + w };
        let shifted_t = RigidTransform { rot: t.rot, t: t.t + w };
        prop_assert_eq!(
            inlier_box_test(&p, &t, &obs, 0.07),
            inlier_box_test(&shifted_p, &shifted_t, &obs, 0.07)
        );
    }
}

#[test]
fn normals_point_toward_the_positive_side() {
    let mut rng = common::rng(11);
    for _ in 0..100 {
        let pose = common::random_pose(&mut rng);
        let obs = normals_from_pose(&pose, 0.5, 0.5).unwrap();
        for (k, n) in obs.axes().into_iter().enumerate() {
            // Magnitude is the camera-to-plane distance, direction has a
            // positive dot with the board origin.
            let dist = pose.r_bc.col(k).dot(pose.t_bc);
            assert!((n.norm() - dist.abs()).abs() < 1e-12);
            assert!(n.dot(pose.t_bc) > 0.0);
        }
        obs.validate().unwrap();
    }
}

/// Growing the threshold never loses an inlier.
#[test]
fn epsilon_growth_is_monotone() {
    let mut rng = common::rng(42);
    let scene = common::random_scene(&mut rng, 3, 1, 8, 12);
    let t = RigidTransform {
        rot: AngleAxis::new(Vec3::new(0.02, 0.05, -0.03)),
        t: Vec3::new(0.1, 0.0, -0.2),
    };
    let mut previous: Option<Vec<Vec<PointLabel>>> = None;
    for eps in [0.01, 0.05, 0.1, 0.3, 0.6] {
        let value = evaluate_q(&t, &scene.scans, &scene.images, eps).unwrap();
        if let Some(smaller) = &previous {
            for (a, b) in smaller.iter().flatten().zip(value.per_point.iter().flatten()) {
                if matches!(a, PointLabel::Inlier { .. }) {
                    assert!(matches!(b, PointLabel::Inlier { .. }), "lost an inlier growing eps");
                }
            }
        }
        previous = Some(value.per_point);
    }
}
