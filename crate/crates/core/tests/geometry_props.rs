//! Property tests for the rotation algebra and box utilities.

mod common;

use std::f64::consts::PI;

use laserboard_core::{AngleAxis, Box3, Vec3};
use proptest::prelude::*;

fn arb_vec3(max: f64) -> impl Strategy<Value = Vec3> {
    (-max..max, -max..max, -max..max).prop_map(|(x, y, z)| Vec3::new(x, y, z))
}

/// Angle-axis vectors inside the π-ball, away from the antipodal boundary.
fn arb_angle_axis() -> impl Strategy<Value = AngleAxis> {
    (arb_vec3(1.0), 0.0..(PI - 1e-6)).prop_filter_map("nonzero direction", |(v, angle)| {
        v.normalized().map(|unit| AngleAxis::new(unit * angle))
    })
}

proptest! {
    #[test]
    fn rotation_matrices_are_orthonormal(a in arb_angle_axis()) {
        let r = a.to_matrix();
        prop_assert!(r.orthonormality_error() < 1e-9);
        prop_assert!((r.det() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rotation_angle_matches_the_vector_norm(a in arb_angle_axis()) {
        // angle = arccos((tr R - 1) / 2)
        let r = a.to_matrix();
        let trace = r.m[0][0] + r.m[1][1] + r.m[2][2];
        let angle = ((trace - 1.0) / 2.0).clamp(-1.0, 1.0).acos();
        prop_assert!((angle - a.angle()).abs() < 1e-9);
    }

    #[test]
    fn log_recovers_the_angle_axis_vector(a in arb_angle_axis()) {
        let back = a.to_matrix().to_angle_axis();
        prop_assert!((back.v - a.v).norm() < 1e-8, "got {:?}, want {:?}", back.v, a.v);
    }

    #[test]
    fn inverse_composes_to_identity(a in arb_angle_axis()) {
        let r = a.to_matrix();
        let composed = r.mul_mat(&r.transpose());
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 1.0 } else { 0.0 };
                prop_assert!((composed.m[i][j] - expect).abs() < 1e-9);
            }
        }
    }

}

/// Samples boxes and probe points on a dyadic grid, where halving and corner
/// arithmetic are exact, so the tiling statements hold with no tolerance.
fn dyadic(rng: &mut rand_chacha::ChaCha8Rng, lo: i32, hi: i32) -> f64 {
    common::uniform(rng, lo as f64, hi as f64).round() / 64.0
}

#[test]
fn children_tile_the_parent_exactly() {
    let mut rng = common::rng(0x1111);
    for _ in 0..200 {
        let center = Vec3::new(
            dyadic(&mut rng, -192, 192),
            dyadic(&mut rng, -192, 192),
            dyadic(&mut rng, -192, 192),
        );
        let half = dyadic(&mut rng, 1, 128).max(1.0 / 64.0);
        let parent = Box3::new(center, half);
        let children = parent.branch().unwrap();

        // Any dyadic point of the parent belongs to some child, and child
        // members stay inside the parent.
        for _ in 0..20 {
            let p = center
                + Vec3::new(
                    dyadic(&mut rng, -64, 64) * half,
                    dyadic(&mut rng, -64, 64) * half,
                    dyadic(&mut rng, -64, 64) * half,
                );
            assert!(parent.contains(p));
            assert!(children.iter().any(|c| c.contains(p)), "uncovered point {p:?}");
        }
        for child in &children {
            for corner in child.corners() {
                assert!(parent.contains(corner));
            }
        }
    }
}

#[test]
fn parent_corners_land_in_exactly_one_child() {
    let mut rng = common::rng(0x2222);
    for _ in 0..200 {
        let center = Vec3::new(
            dyadic(&mut rng, -192, 192),
            dyadic(&mut rng, -192, 192),
            dyadic(&mut rng, -192, 192),
        );
        let half = dyadic(&mut rng, 1, 128).max(1.0 / 64.0);
        let parent = Box3::new(center, half);
        let children = parent.branch().unwrap();
        for corner in parent.corners() {
            let owners = children.iter().filter(|c| c.contains(corner)).count();
            assert_eq!(owners, 1, "corner {corner:?} of {parent:?}");
        }
    }
}

#[test]
fn child_volumes_sum_to_parent_volume() {
    let parent = Box3::new(Vec3::new(1.0, 2.0, -0.5), 0.37);
    let children = parent.branch().unwrap();
    let sum: f64 = children.iter().map(Box3::volume).sum();
    assert!((sum - parent.volume()).abs() <= 1e-12 * parent.volume());
}

/// The rotated-normal chord bound that the loose slack is built on: for any
/// rotation in a box, the image of a unit vector stays within the chord of
/// the cap of half-angle `min(√3 δ_R, π)` around the center's image.
#[test]
fn chord_bound_holds_over_sampled_boxes() {
    let mut rng = common::rng(0x9e0);
    for _ in 0..200 {
        let center = common::sample_in_box(&mut rng, &Box3::new(Vec3::ZERO, PI));
        let half = common::uniform(&mut rng, 0.0, 1.2);
        let rot_box = Box3::new(center, half);
        let n = common::random_unit(&mut rng);
        let center_image = AngleAxis::new(center).to_matrix().mul_vec(n);
        let alpha = (3f64.sqrt() * half).min(PI);
        let chord = (2.0 * (1.0 - alpha.cos())).max(0.0).sqrt();
        for _ in 0..200 {
            let sample = common::sample_in_box(&mut rng, &rot_box);
            let image = AngleAxis::new(sample).to_matrix().mul_vec(n);
            let dist = (image - center_image).norm();
            assert!(
                dist <= chord + 1e-9,
                "chord violated: dist {dist}, chord {chord}, half {half}"
            );
        }
    }
}
