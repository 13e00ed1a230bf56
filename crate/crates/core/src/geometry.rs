//! Angle-axis rotation algebra and axis-aligned box utilities.
//!
//! Rotations are searched in angle-axis space: a rotation is a 3-vector whose
//! direction is the axis and whose norm is the angle, so all of SO(3) lives in
//! the ball of radius π, enclosed by the box `B(π)`. Boxes are cubes given by
//! a center and a half side length; branching splits a box into its eight
//! octant children.
//!
//! Boxes produced by branching may stick out of the π-ball. They are never
//! clipped back to it: membership outside the ball merely duplicates
//! rotations, so every bound computed over an unclipped box stays valid.

use core::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::math;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum GeometryError {
    /// Branching requires a strictly positive half side length.
    #[error("cannot branch a degenerate box")]
    DegenerateBox,
    /// Angles are undefined for zero-length vectors.
    #[error("angle undefined for zero-length vector")]
    ZeroVector,
}

/// A 3-vector of `f64` components.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    #[inline]
    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    #[inline]
    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3 {
            x: self.y * other.z - self.z * other.y,
            y: self.z * other.x - self.x * other.z,
            z: self.x * other.y - self.y * other.x,
        }
    }

    #[inline]
    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        math::sqrt(self.norm_squared())
    }

    /// Unit vector in the same direction, or `None` below 1e-12 in norm.
    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        if n < 1e-12 {
            None
        } else {
            Some(self * (1.0 / n))
        }
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    #[inline]
    fn add(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    #[inline]
    fn sub(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    #[inline]
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    #[inline]
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Angle-axis rotation vector: direction is the axis, norm is the angle in
/// radians. The search space convention keeps the norm at or below π; vectors
/// beyond that alias rotations already inside the ball and are accepted.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AngleAxis {
    pub v: Vec3,
}

impl AngleAxis {
    pub const IDENTITY: AngleAxis = AngleAxis { v: Vec3::ZERO };

    #[inline]
    pub const fn new(v: Vec3) -> Self {
        AngleAxis { v }
    }

    #[inline]
    pub fn angle(self) -> f64 {
        self.v.norm()
    }

    /// Exponential map (Rodrigues formula). The zero vector maps to the
    /// identity; a second-order series keeps small angles exact to rounding.
    pub fn to_matrix(self) -> RotationMatrix {
        let v = self.v;
        let theta_sq = v.norm_squared();
        // a = sin(θ)/θ, b = (1-cos(θ))/θ², c = cos(θ)
        let (a, b, c) = if theta_sq < 1e-24 {
            (1.0 - theta_sq / 6.0, 0.5 - theta_sq / 24.0, 1.0 - theta_sq / 2.0)
        } else {
            let theta = math::sqrt(theta_sq);
            let c = math::cos(theta);
            (math::sin(theta) / theta, (1.0 - c) / theta_sq, c)
        };
        // R = c·I + a·[v]ₓ + b·vvᵀ
        RotationMatrix {
            m: [
                [c + b * v.x * v.x, b * v.x * v.y - a * v.z, b * v.x * v.z + a * v.y],
                [b * v.y * v.x + a * v.z, c + b * v.y * v.y, b * v.y * v.z - a * v.x],
                [b * v.z * v.x - a * v.y, b * v.z * v.y + a * v.x, c + b * v.z * v.z],
            ],
        }
    }
}

/// A 3×3 rotation matrix, row major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationMatrix {
    pub m: [[f64; 3]; 3],
}

impl RotationMatrix {
    pub const IDENTITY: RotationMatrix = RotationMatrix {
        m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
    };

    /// Rotation by `angle` radians about the x axis.
    pub fn rot_x(angle: f64) -> Self {
        let (s, c) = (math::sin(angle), math::cos(angle));
        RotationMatrix { m: [[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]] }
    }

    /// Rotation by `angle` radians about the y axis.
    pub fn rot_y(angle: f64) -> Self {
        let (s, c) = (math::sin(angle), math::cos(angle));
        RotationMatrix { m: [[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]] }
    }

    /// Rotation by `angle` radians about the z axis.
    pub fn rot_z(angle: f64) -> Self {
        let (s, c) = (math::sin(angle), math::cos(angle));
        RotationMatrix { m: [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]] }
    }

    #[inline]
    pub fn mul_vec(&self, v: Vec3) -> Vec3 {
        let m = &self.m;
        Vec3 {
            x: m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            y: m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            z: m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z,
        }
    }

    /// Applies the transpose (the inverse rotation) without materializing it.
    #[inline]
    pub fn transpose_mul_vec(&self, v: Vec3) -> Vec3 {
        let m = &self.m;
        Vec3 {
            x: m[0][0] * v.x + m[1][0] * v.y + m[2][0] * v.z,
            y: m[0][1] * v.x + m[1][1] * v.y + m[2][1] * v.z,
            z: m[0][2] * v.x + m[1][2] * v.y + m[2][2] * v.z,
        }
    }

    pub fn mul_mat(&self, other: &RotationMatrix) -> RotationMatrix {
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..3).map(|k| self.m[i][k] * other.m[k][j]).sum();
            }
        }
        RotationMatrix { m: out }
    }

    pub fn transpose(&self) -> RotationMatrix {
        let m = &self.m;
        RotationMatrix {
            m: [
                [m[0][0], m[1][0], m[2][0]],
                [m[0][1], m[1][1], m[2][1]],
                [m[0][2], m[1][2], m[2][2]],
            ],
        }
    }

    /// Column `k` as a vector (the image of the k-th basis vector).
    #[inline]
    pub fn col(&self, k: usize) -> Vec3 {
        Vec3::new(self.m[0][k], self.m[1][k], self.m[2][k])
    }

    pub fn det(&self) -> f64 {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Largest absolute deviation of RᵀR from the identity, entrywise.
    pub fn orthonormality_error(&self) -> f64 {
        let rt_r = self.transpose().mul_mat(self);
        let mut err: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let target = if i == j { 1.0 } else { 0.0 };
                err = err.max((rt_r.m[i][j] - target).abs());
            }
        }
        err
    }

    /// Logarithm map back to an angle-axis vector.
    ///
    /// Uses the trace for the angle and the antisymmetric part for the axis,
    /// switching to the symmetric part as the angle approaches π where the
    /// antisymmetric part vanishes.
    pub fn to_angle_axis(&self) -> AngleAxis {
        let m = &self.m;
        let trace = m[0][0] + m[1][1] + m[2][2];
        let cos_theta = ((trace - 1.0) / 2.0).clamp(-1.0, 1.0);
        let theta = math::acos(cos_theta);
        let anti = Vec3::new(m[2][1] - m[1][2], m[0][2] - m[2][0], m[1][0] - m[0][1]);

        if theta < 1e-9 {
            return AngleAxis::new(anti * 0.5);
        }
        if theta > core::f64::consts::PI - 1e-9 {
            // Near π: recover the axis from R ≈ 2aaᵀ - I.
            let xx = ((m[0][0] + 1.0) / 2.0).max(0.0);
            let yy = ((m[1][1] + 1.0) / 2.0).max(0.0);
            let zz = ((m[2][2] + 1.0) / 2.0).max(0.0);
            let axis = if xx >= yy && xx >= zz {
                let x = math::sqrt(xx);
                Vec3::new(x, (m[0][1] + m[1][0]) / (4.0 * x), (m[0][2] + m[2][0]) / (4.0 * x))
            } else if yy >= zz {
                let y = math::sqrt(yy);
                Vec3::new((m[0][1] + m[1][0]) / (4.0 * y), y, (m[1][2] + m[2][1]) / (4.0 * y))
            } else {
                let z = math::sqrt(zz);
                Vec3::new((m[0][2] + m[2][0]) / (4.0 * z), (m[1][2] + m[2][1]) / (4.0 * z), z)
            };
            let axis = axis.normalized().unwrap_or(Vec3::new(1.0, 0.0, 0.0));
            return AngleAxis::new(axis * theta);
        }
        let scale = theta / (2.0 * math::sin(theta));
        AngleAxis::new(anti * scale)
    }
}

/// An axis-aligned cube: center plus a common half side length per axis.
///
/// Units are radians for rotation boxes and meters for translation boxes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Box3 {
    pub center: Vec3,
    pub half_len: f64,
}

impl Box3 {
    #[inline]
    pub const fn new(center: Vec3, half_len: f64) -> Self {
        Box3 { center, half_len }
    }

    /// Per-axis membership: |pₖ - cₖ| ≤ half for every axis.
    #[inline]
    pub fn contains(&self, p: Vec3) -> bool {
        (p.x - self.center.x).abs() <= self.half_len
            && (p.y - self.center.y).abs() <= self.half_len
            && (p.z - self.center.z).abs() <= self.half_len
    }

    /// Splits into eight children of half the side length that tile the box.
    ///
    /// Child `i` takes the octant whose offset signs are read from the low
    /// three bits of `i` (bit 0 → x, bit 1 → y, bit 2 → z; set bit = positive
    /// offset), which fixes a deterministic child order.
    pub fn branch(&self) -> Result<[Box3; 8], GeometryError> {
        if !(self.half_len > 0.0) {
            return Err(GeometryError::DegenerateBox);
        }
        let h = self.half_len / 2.0;
        let mut children = [*self; 8];
        for (i, child) in children.iter_mut().enumerate() {
            let sx = if i & 1 != 0 { h } else { -h };
            let sy = if i & 2 != 0 { h } else { -h };
            let sz = if i & 4 != 0 { h } else { -h };
            *child = Box3::new(self.center + Vec3::new(sx, sy, sz), h);
        }
        Ok(children)
    }

    pub fn corners(&self) -> [Vec3; 8] {
        let h = self.half_len;
        let mut out = [self.center; 8];
        for (i, corner) in out.iter_mut().enumerate() {
            let sx = if i & 1 != 0 { h } else { -h };
            let sy = if i & 2 != 0 { h } else { -h };
            let sz = if i & 4 != 0 { h } else { -h };
            *corner = self.center + Vec3::new(sx, sy, sz);
        }
        out
    }

    pub fn volume(&self) -> f64 {
        let side = 2.0 * self.half_len;
        side * side * side
    }
}

/// Angle between two nonzero vectors, in [0, π].
///
/// The cosine is clamped to [-1, 1] so nearly parallel and nearly antiparallel
/// inputs stay finite.
pub fn angle_between(u: Vec3, w: Vec3) -> Result<f64, GeometryError> {
    let nu = u.norm();
    let nw = w.norm();
    if nu < 1e-12 || nw < 1e-12 {
        return Err(GeometryError::ZeroVector);
    }
    let cos = (u.dot(w) / (nu * nw)).clamp(-1.0, 1.0);
    Ok(math::acos(cos))
}
