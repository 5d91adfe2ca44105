//! Minimal 3D substrate: vectors, yaw-only rigid transforms, triangle meshes
//! and yaw-rotated box colliders.
//!
//! World-up is `+y`. A yaw of `θ` rotates the horizontal plane so that `+x`
//! maps to `(cos θ, 0, -sin θ)`, i.e. the usual right-handed rotation about `+y`.

use std::f64::consts::TAU;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Absolute tolerance used for geometric comparisons.
pub const EPS: f64 = 1e-6;

/// Default amount each collider half-extent is shrunk before overlap tests.
pub const DEFAULT_SHRINK_EPS: f64 = 1e-3;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    pub const UP: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    pub const X: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const Z: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn length(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn distance(self, o: Vec3) -> f64 {
        (self - o).length()
    }

    /// Length of the projection onto the horizontal plane.
    pub fn horizontal_length(self) -> f64 {
        self.x.hypot(self.z)
    }

    pub fn normalized(self) -> Option<Vec3> {
        let len = self.length();
        (len > EPS && len.is_finite()).then(|| self * (1.0 / len))
    }

    /// Drops the vertical component and normalizes. `None` when the vector is
    /// (nearly) vertical.
    pub fn horizontal_unit(self) -> Option<Vec3> {
        Vec3::new(self.x, 0.0, self.z).normalized()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Heading angle of a horizontal direction: the yaw that rotates `+x` onto it.
    pub fn heading_angle(self) -> f64 {
        normalize_angle((-self.z).atan2(self.x))
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }
}

impl From<Vec3> for [f64; 3] {
    fn from(v: Vec3) -> Self {
        v.to_array()
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Wraps an angle into `[0, 2π)`.
pub fn normalize_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Rotates `v` by `yaw` about world-up.
pub fn rotate_yaw(v: Vec3, yaw: f64) -> Vec3 {
    let (s, c) = yaw.sin_cos();
    Vec3::new(v.x * c + v.z * s, v.y, -v.x * s + v.z * c)
}

/// Rigid transform restricted to rotations about world-up.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct YawTransform {
    pub translation: Vec3,
    yaw: f64,
}

impl YawTransform {
    pub const IDENTITY: YawTransform = YawTransform {
        translation: Vec3::ZERO,
        yaw: 0.0,
    };

    pub fn new(translation: Vec3, yaw: f64) -> Self {
        YawTransform {
            translation,
            yaw: normalize_angle(yaw),
        }
    }

    pub fn from_translation(translation: Vec3) -> Self {
        YawTransform::new(translation, 0.0)
    }

    /// Yaw in radians, always in `[0, 2π)`.
    pub fn yaw(&self) -> f64 {
        self.yaw
    }

    pub fn apply(&self, p: Vec3) -> Vec3 {
        rotate_yaw(p, self.yaw) + self.translation
    }

    pub fn apply_vector(&self, v: Vec3) -> Vec3 {
        rotate_yaw(v, self.yaw)
    }

    /// `self ∘ other`: applies `other` first, then `self`.
    pub fn compose(&self, other: &YawTransform) -> YawTransform {
        YawTransform::new(self.apply(other.translation), self.yaw + other.yaw)
    }

    pub fn inverse(&self) -> YawTransform {
        YawTransform::new(rotate_yaw(-self.translation, -self.yaw), -self.yaw)
    }
}

/// Applies `t` to `p`.
pub fn apply_transform(t: &YawTransform, p: Vec3) -> Vec3 {
    t.apply(p)
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TriMesh {
    pub vertices: Vec<Vec3>,
    pub triangles: Vec<[u32; 3]>,
}

impl TriMesh {
    pub fn new(vertices: Vec<Vec3>, triangles: Vec<[u32; 3]>) -> Self {
        TriMesh { vertices, triangles }
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn triangle(&self, i: usize) -> [Vec3; 3] {
        let [a, b, c] = self.triangles[i];
        [
            self.vertices[a as usize],
            self.vertices[b as usize],
            self.vertices[c as usize],
        ]
    }

    /// Unnormalized face normal following the triangle winding.
    pub fn face_normal(&self, i: usize) -> Vec3 {
        let [a, b, c] = self.triangle(i);
        (b - a).cross(c - a)
    }

    pub fn triangle_area(&self, i: usize) -> f64 {
        0.5 * self.face_normal(i).length()
    }

    /// Checks index ranges and finiteness. Degenerate triangles are reported
    /// separately by [`TriMesh::degenerate_triangles`].
    pub fn check(&self) -> Result<(), String> {
        if let Some(v) = self.vertices.iter().position(|v| !v.is_finite()) {
            return Err(format!("vertex {v} is not finite"));
        }
        let n = self.vertices.len() as u32;
        for (i, tri) in self.triangles.iter().enumerate() {
            if tri.iter().any(|&idx| idx >= n) {
                return Err(format!("triangle {i} references a missing vertex"));
            }
        }
        Ok(())
    }

    pub fn degenerate_triangles(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.triangles.len()).filter(|&i| self.triangle_area(i) <= EPS * EPS)
    }

    /// Appends `other`, re-indexing its triangles.
    pub fn append(&mut self, other: &TriMesh) {
        let base = self.vertices.len() as u32;
        self.vertices.extend_from_slice(&other.vertices);
        self.triangles
            .extend(other.triangles.iter().map(|t| [t[0] + base, t[1] + base, t[2] + base]));
    }

    /// Adds one triangle wound so its normal points along `outward`.
    pub fn push_triangle(&mut self, a: Vec3, b: Vec3, c: Vec3, outward: Vec3) {
        let base = self.vertices.len() as u32;
        self.vertices.extend_from_slice(&[a, b, c]);
        if (b - a).cross(c - a).dot(outward) >= 0.0 {
            self.triangles.push([base, base + 1, base + 2]);
        } else {
            self.triangles.push([base, base + 2, base + 1]);
        }
    }

    /// Adds a planar quad as two triangles wound so their normal points along `outward`.
    pub fn push_quad(&mut self, corners: [Vec3; 4], outward: Vec3) {
        let base = self.vertices.len() as u32;
        self.vertices.extend_from_slice(&corners);
        let n = (corners[1] - corners[0]).cross(corners[2] - corners[0]);
        if n.dot(outward) >= 0.0 {
            self.triangles.push([base, base + 1, base + 2]);
            self.triangles.push([base, base + 2, base + 3]);
        } else {
            self.triangles.push([base, base + 2, base + 1]);
            self.triangles.push([base, base + 3, base + 2]);
        }
    }

    /// Axis-aligned box with outward-facing triangles.
    pub fn cuboid(min: Vec3, max: Vec3) -> TriMesh {
        let mut m = TriMesh::default();
        m.push_cuboid(min, max);
        m
    }

    pub fn push_cuboid(&mut self, min: Vec3, max: Vec3) {
        let (x0, y0, z0) = (min.x, min.y, min.z);
        let (x1, y1, z1) = (max.x, max.y, max.z);
        let v = Vec3::new;
        self.push_quad([v(x0, y1, z0), v(x1, y1, z0), v(x1, y1, z1), v(x0, y1, z1)], Vec3::UP);
        self.push_quad([v(x0, y0, z0), v(x1, y0, z0), v(x1, y0, z1), v(x0, y0, z1)], -Vec3::UP);
        self.push_quad([v(x1, y0, z0), v(x1, y1, z0), v(x1, y1, z1), v(x1, y0, z1)], Vec3::X);
        self.push_quad([v(x0, y0, z0), v(x0, y1, z0), v(x0, y1, z1), v(x0, y0, z1)], -Vec3::X);
        self.push_quad([v(x0, y0, z1), v(x1, y0, z1), v(x1, y1, z1), v(x0, y1, z1)], Vec3::Z);
        self.push_quad([v(x0, y0, z0), v(x1, y0, z0), v(x1, y1, z0), v(x0, y1, z0)], -Vec3::Z);
    }
}

/// Maps every vertex through `t`; topology is unchanged.
pub fn transform_mesh(m: &TriMesh, t: &YawTransform) -> TriMesh {
    TriMesh {
        vertices: m.vertices.iter().map(|&v| t.apply(v)).collect(),
        triangles: m.triangles.clone(),
    }
}

/// Box collider rotated about world-up.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Obb {
    pub center: Vec3,
    pub half_extents: Vec3,
    pub yaw: f64,
}

impl Obb {
    pub fn new(center: Vec3, half_extents: Vec3, yaw: f64) -> Result<Self, String> {
        if !(center.is_finite() && half_extents.is_finite() && yaw.is_finite()) {
            return Err("collider has non-finite values".into());
        }
        if half_extents.x <= 0.0 || half_extents.y <= 0.0 || half_extents.z <= 0.0 {
            return Err("collider half extents must be strictly positive".into());
        }
        Ok(Obb {
            center,
            half_extents,
            yaw: normalize_angle(yaw),
        })
    }

    /// Collider spanning the axis-aligned region `[min, max]`.
    pub fn from_bounds(min: Vec3, max: Vec3) -> Result<Self, String> {
        Obb::new((min + max) * 0.5, (max - min) * 0.5, 0.0)
    }

    /// The same box expressed in the frame `t` maps into.
    pub fn transformed(&self, t: &YawTransform) -> Obb {
        Obb {
            center: t.apply(self.center),
            half_extents: self.half_extents,
            yaw: normalize_angle(self.yaw + t.yaw()),
        }
    }

    pub fn min_half_extent(&self) -> f64 {
        self.half_extents.x.min(self.half_extents.y).min(self.half_extents.z)
    }

    /// Horizontal unit axes of the box (local `x` and `z`).
    pub fn axes(&self) -> [Vec3; 2] {
        [rotate_yaw(Vec3::X, self.yaw), rotate_yaw(Vec3::Z, self.yaw)]
    }

    /// Whether `p` lies strictly inside the box with each half-extent reduced by `shrink`.
    pub fn contains(&self, p: Vec3, shrink: f64) -> bool {
        let d = p - self.center;
        let [ax, az] = self.axes();
        d.dot(ax).abs() < self.half_extents.x - shrink
            && d.y.abs() < self.half_extents.y - shrink
            && d.dot(az).abs() < self.half_extents.z - shrink
    }

    fn horizontal_radius(&self, axis: Vec3, shrink: f64) -> f64 {
        let [ax, az] = self.axes();
        (self.half_extents.x - shrink).max(0.0) * ax.dot(axis).abs()
            + (self.half_extents.z - shrink).max(0.0) * az.dot(axis).abs()
    }
}

/// Separating-axis test between two world-posed boxes, each shrunk by
/// `shrink_eps` on every half-extent. Touching faces do not count as overlap.
pub fn obb_overlap_world(a: &Obb, b: &Obb, shrink_eps: f64) -> bool {
    let d = b.center - a.center;
    let vertical = (a.half_extents.y - shrink_eps).max(0.0) + (b.half_extents.y - shrink_eps).max(0.0);
    if d.y.abs() >= vertical {
        return false;
    }
    let [a0, a1] = a.axes();
    let [b0, b1] = b.axes();
    [a0, a1, b0, b1].into_iter().all(|axis| {
        let reach = a.horizontal_radius(axis, shrink_eps) + b.horizontal_radius(axis, shrink_eps);
        d.dot(axis).abs() < reach
    })
}

/// Overlap predicate for box colliders posed by `ta` and `tb`.
pub fn obb_overlap(a: &Obb, ta: &YawTransform, b: &Obb, tb: &YawTransform, shrink_eps: f64) -> bool {
    obb_overlap_world(&a.transformed(ta), &b.transformed(tb), shrink_eps)
}
