//! Radial projection of the cube onto S^3 and stereographic projection
//! between S^3 and R^3.
//!
//! Stereographic projection here maps onto the hyperplane through the origin
//! orthogonal to the pole, so the equator of the pole lands on the unit
//! sphere and the antipode of the pole lands on the origin. Coordinates in
//! that hyperplane are taken in a fixed orthonormal basis: Gram-Schmidt of
//! the standard basis against the pole, skipping the axis most parallel to
//! it (lowest index on ties). This is one consistent convention among many;
//! a different basis changes the output by a fixed rotation or reflection of
//! R^3.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::vector::{dot, norm, scale, sub, Vec3, Vec4};

/// Points closer than this to the pole cannot be projected.
pub const POLE_EXCLUSION: f64 = 1e-6;

const UNIT_TOLERANCE: f64 = 1e-9;

/// `(x, y, z) -> (1, x, y, z) / sqrt(1 + x^2 + y^2 + z^2)`.
pub fn radial_to_s3(p: &Vec3) -> Vec4 {
    let d = (1.0 + p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    [1.0 / d, p[0] / d, p[1] / d, p[2] / d]
}

/// Projection pole on S^3, with the hyperplane basis derived from it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pole {
    point: Vec4,
    #[serde(skip)]
    basis: [Vec4; 3],
}

impl Pole {
    pub fn new(point: Vec4) -> Result<Self> {
        if !crate::vector::is_finite(&point) {
            return Err(Error::NonFinite);
        }
        let n = norm(&point);
        if (n - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::NotUnit(n));
        }
        Ok(Self {
            point,
            basis: hyperplane_basis(&point),
        })
    }

    /// Normalizes `point` first. Also returns how far the input was from unit
    /// length.
    pub fn normalized(point: Vec4) -> Result<(Self, f64)> {
        let n = norm(&point);
        if !n.is_finite() || n == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok((Self::new(scale(&point, 1.0 / n))?, (n - 1.0).abs()))
    }

    pub fn point(&self) -> Vec4 {
        self.point
    }

    pub fn basis(&self) -> &[Vec4; 3] {
        &self.basis
    }
}

fn hyperplane_basis(p: &Vec4) -> [Vec4; 3] {
    let mut drop = 0;
    for i in 1..4 {
        if p[i].abs() > p[drop].abs() {
            drop = i;
        }
    }
    let mut done: Vec<Vec4> = vec![*p];
    for axis in (0..4).filter(|&i| i != drop) {
        let mut u = [0.0; 4];
        u[axis] = 1.0;
        for b in &done {
            u = sub(&u, &scale(b, dot(&u, b)));
        }
        done.push(scale(&u, 1.0 / norm(&u)));
    }
    [done[1], done[2], done[3]]
}

/// The vertex `(1,1,1,1)` of the hypercube, normalized. It is equidistant
/// from all eight cell centres.
pub fn default_pole() -> Pole {
    Pole::new([0.5; 4]).expect("unit vector")
}

/// Projects `q` from the pole onto the hyperplane through the origin
/// orthogonal to it.
pub fn stereo_project(q: &Vec4, pole: &Pole) -> Result<Vec3> {
    let n = norm(q);
    if !n.is_finite() || (n - 1.0).abs() > UNIT_TOLERANCE {
        return Err(Error::NotUnit(n));
    }
    let d = sub(q, &pole.point);
    let dist = norm(&d);
    if dist < POLE_EXCLUSION {
        return Err(Error::PointAtPole { distance: dist });
    }
    // 1 - <q, p> for unit q and p, in a form that stays accurate near the pole.
    let denom = 0.5 * dist * dist;
    Ok(pole.basis.map(|b| dot(q, &b) / denom))
}

/// Inverse of [`stereo_project`]; never returns the pole.
pub fn stereo_unproject(v: &Vec3, pole: &Pole) -> Vec4 {
    let r2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    let mut out = scale(&pole.point, (r2 - 1.0) / (r2 + 1.0));
    for (vk, b) in v.iter().zip(&pole.basis) {
        let c = 2.0 * vk / (r2 + 1.0);
        for (o, bi) in out.iter_mut().zip(b) {
            *o += c * bi;
        }
    }
    out
}
