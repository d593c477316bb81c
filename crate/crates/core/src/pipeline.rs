//! The eight-fold sculpture pipeline: a seed design in the cube `[-1,1]^3`
//! is projected radially onto S^3, right-multiplied by each element of Q8,
//! and stereographically projected back to R^3.

use serde::Serialize;

use crate::blocks::{cell_point, gluing, Axis, FaceDir};
use crate::error::{Error, Result};
use crate::hypercube::cell_of_point;
use crate::mesh::{feature_stats, Mesh};
use crate::projection::{radial_to_s3, stereo_project, stereo_unproject, Pole};
use crate::quat::Q8Element;
use crate::symmetry::{sets_match, PointCloud4};
use crate::vector::{Vec3, Vec4};

const CUBE_TOLERANCE: f64 = 1e-9;

/// Tolerance for picking out face-contact vertices and matching them.
pub const CONTACT_TOLERANCE: f64 = 1e-6;

fn check_in_cube(seed: &Mesh) -> Result<()> {
    seed.validate()?;
    match seed
        .vertices
        .iter()
        .position(|v| v.iter().any(|c| c.abs() > 1.0 + CUBE_TOLERANCE))
    {
        Some(index) => Err(Error::OutsideCube { index }),
        None => Ok(()),
    }
}

/// Seed point carried to S^3 and into the cell of `g`.
pub fn to_sphere(p: &Vec3, g: Q8Element) -> Vec4 {
    g.right_mul_matrix().apply(&radial_to_s3(p))
}

/// radial projection, then right multiplication by `g`, then stereographic
/// projection, vertex by vertex. Triangles are kept as they are.
pub fn transform_mesh(seed: &Mesh, g: Q8Element, pole: &Pole) -> Result<Mesh> {
    check_in_cube(seed)?;
    let m = g.right_mul_matrix();
    let vertices = seed
        .vertices
        .iter()
        .enumerate()
        .map(|(index, p)| {
            stereo_project(&m.apply(&radial_to_s3(p)), pole).map_err(|e| match e {
                Error::PointAtPole { .. } => Error::VertexAtPole { index, element: g },
                other => other,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Mesh {
        vertices,
        triangles: seed.triangles.clone(),
    })
}

#[derive(Debug, Clone)]
pub struct SculptureBundle {
    /// One part per element, in [`Q8Element::ALL`] order.
    pub parts: Vec<(Q8Element, Mesh)>,
    pub merged: Mesh,
    pub pole: Pole,
    pub scale: f64,
}

pub fn generate_sculpture(seed: &Mesh, pole: &Pole, scale: f64) -> Result<SculptureBundle> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::InvalidScale(scale));
    }
    let parts = Q8Element::ALL
        .iter()
        .map(|&g| Ok((g, transform_mesh(seed, g, pole)?.scaled(scale))))
        .collect::<Result<Vec<_>>>()?;
    let merged = Mesh::merge(parts.iter().map(|(_, m)| m));
    Ok(SculptureBundle {
        parts,
        merged,
        pole: *pole,
        scale,
    })
}

/// Smallest scale (up to rounding) at which the shortest edge of the
/// sculpture is at least `min_feature`.
pub fn scale_for_min_feature(seed: &Mesh, pole: &Pole, min_feature: f64) -> Result<f64> {
    if !(min_feature > 0.0 && min_feature.is_finite()) {
        return Err(Error::InvalidScale(min_feature));
    }
    let unit = generate_sculpture(seed, pole, 1.0)?;
    let stats = feature_stats(&unit.merged)?;
    if stats.min_edge <= 0.0 {
        return Err(Error::ZeroFeature);
    }
    let mut scale = min_feature / stats.min_edge;
    // The quotient can round so the scaled edge lands an ulp short.
    while feature_stats(&unit.merged.scaled(scale))?.min_edge < min_feature {
        scale *= 1.0 + 4.0 * f64::EPSILON;
    }
    Ok(scale)
}

impl SculptureBundle {
    /// Merged vertices carried back to S^3, with touching points collapsed.
    pub fn sphere_cloud(&self, tol: f64) -> Result<PointCloud4> {
        sphere_cloud(&self.merged, &self.pole, self.scale, tol)
    }
}

/// Unprojects a (scaled) sculpture mesh back onto S^3.
pub fn sphere_cloud(mesh: &Mesh, pole: &Pole, scale: f64, tol: f64) -> Result<PointCloud4> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::InvalidScale(scale));
    }
    let pts = mesh
        .vertices
        .iter()
        .map(|v| stereo_unproject(&crate::vector::scale(v, 1.0 / scale), pole))
        .collect();
    PointCloud4::merged(pts, tol)
}

/// The eight images of a seed point set on S^3, grouped by element.
pub fn orbit_cloud(seed: &[Vec3]) -> Vec<Vec4> {
    Q8Element::ALL
        .iter()
        .flat_map(|&g| seed.iter().map(move |p| to_sphere(p, g)))
        .collect()
}

/// Whether every vertex of every part lands in its own cell on S^3.
pub fn parts_in_own_cells(bundle: &SculptureBundle) -> Result<bool> {
    for (g, part) in &bundle.parts {
        for v in &part.vertices {
            let q = stereo_unproject(&crate::vector::scale(v, 1.0 / bundle.scale), &bundle.pole);
            if cell_of_point(&q)?.0 != *g {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The seed point that the copy in the neighbouring cell places at `p`, a
/// point on the `+` face `face` of cell `1`. Always on the opposite face.
pub fn glued_partner(face: FaceDir, p: &Vec3) -> Vec3 {
    let g = gluing(Q8Element::ONE, face);
    let local = g
        .neighbor
        .inverse()
        .right_mul_matrix()
        .apply(&[1.0, p[0], p[1], p[2]]);
    [local[1], local[2], local[3]]
}

/// Where a seed point on the `-` face of `axis` ends up in cell `1`'s
/// coordinates when the neighbouring copy is glued on.
fn carried_to_positive_face(axis: Axis, q: &Vec3) -> Vec3 {
    let g = gluing(Q8Element::ONE, FaceDir::new(axis, true));
    let u = cell_point(g.neighbor, q);
    [u[1], u[2], u[3]]
}

#[derive(Debug, Clone, Serialize)]
pub struct AxisContact {
    pub axis: Axis,
    pub plus_points: usize,
    pub minus_points: usize,
    pub passed: bool,
    /// Contact points on the `+` face with no partner, in seed coordinates.
    pub unmatched: Vec<Vec3>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContactReport {
    pub axes: Vec<AxisContact>,
    pub passed: bool,
}

/// For each axis pair, compares the seed's contact vertices on the `+` face
/// with the `-` face contacts of the neighbouring copy, carried across the
/// gluing (a reflection through the shared square plus a quarter turn).
/// An empty face means no physical connection and fails.
pub fn face_contact_check(seed: &Mesh) -> Result<ContactReport> {
    check_in_cube(seed)?;
    let tol = CONTACT_TOLERANCE;
    let axes: Vec<AxisContact> = Axis::ALL
        .iter()
        .map(|&axis| {
            let a = axis.index();
            let plus: Vec<Vec3> = seed
                .vertices
                .iter()
                .filter(|v| (v[a] - 1.0).abs() <= tol)
                .copied()
                .collect();
            let carried: Vec<Vec3> = seed
                .vertices
                .iter()
                .filter(|v| (v[a] + 1.0).abs() <= tol)
                .map(|q| carried_to_positive_face(axis, q))
                .collect();
            let passed = !plus.is_empty() && sets_match(&carried, &plus, tol);
            let unmatched = plus
                .iter()
                .filter(|p| !carried.iter().any(|c| crate::vector::distance(c, p) <= tol))
                .copied()
                .collect();
            AxisContact {
                axis,
                plus_points: plus.len(),
                minus_points: carried.len(),
                passed,
                unmatched,
            }
        })
        .collect();
    let passed = axes.iter().all(|a| a.passed);
    Ok(ContactReport { axes, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projection::default_pole;
    use crate::seed::demo_seed;

    fn tiny_seed() -> Mesh {
        Mesh::new(
            vec![[0.0, 0.0, 0.0], [0.3, 0.1, -0.2], [-0.1, 0.4, 0.2]],
            vec![[0, 1, 2]],
        )
        .unwrap()
    }

    #[test]
    fn transform_examples() {
        let pole = default_pole();
        let seed = tiny_seed();
        let one = transform_mesh(&seed, Q8Element::ONE, &pole).unwrap();
        assert_eq!(
            one.vertices[0],
            stereo_project(&[1.0, 0.0, 0.0, 0.0], &pole).unwrap()
        );
        let i = transform_mesh(&seed, Q8Element::I, &pole).unwrap();
        assert_eq!(
            i.vertices[0],
            stereo_project(&[0.0, 1.0, 0.0, 0.0], &pole).unwrap()
        );
        for g in Q8Element::ALL {
            assert_eq!(
                transform_mesh(&seed, g, &pole).unwrap().triangles,
                seed.triangles
            );
        }
    }

    #[test]
    fn pole_and_cube_errors() {
        let pole = default_pole();
        let corner = Mesh::new(
            vec![[0.0, 0.0, 0.0], [1.0, 1.0, 1.0], [0.5, 0.0, 0.0]],
            vec![[0, 1, 2]],
        )
        .unwrap();
        let err = transform_mesh(&corner, Q8Element::ONE, &pole).unwrap_err();
        assert!(matches!(
            err,
            Error::VertexAtPole {
                index: 1,
                element: Q8Element::ONE
            }
        ));
        // In cell -1 the same corner lands on the antipode of the pole.
        assert!(transform_mesh(&corner, Q8Element::MINUS_ONE, &pole).is_ok());

        let outside = Mesh::new(
            vec![[0.0, 0.0, 0.0], [1.2, 0.0, 0.0], [0.5, 0.5, 0.0]],
            vec![[0, 1, 2]],
        )
        .unwrap();
        assert!(matches!(
            transform_mesh(&outside, Q8Element::ONE, &pole),
            Err(Error::OutsideCube { index: 1 })
        ));
    }

    #[test]
    fn bundle_shape() {
        let seed = tiny_seed();
        let b = generate_sculpture(&seed, &default_pole(), 2.0).unwrap();
        assert_eq!(b.parts.len(), 8);
        assert_eq!(b.merged.vertices.len(), 8 * seed.vertices.len());
        assert_eq!(b.merged.triangles.len(), 8 * seed.triangles.len());
        let order: Vec<_> = b.parts.iter().map(|(g, _)| *g).collect();
        assert_eq!(order, Q8Element::ALL);
        assert!(parts_in_own_cells(&b).unwrap());
        assert!(matches!(
            generate_sculpture(&seed, &default_pole(), 0.0),
            Err(Error::InvalidScale(_))
        ));
    }

    #[test]
    fn scale_meets_min_feature() {
        let seed = demo_seed();
        let pole = default_pole();
        let s = scale_for_min_feature(&seed, &pole, 0.8).unwrap();
        let b = generate_sculpture(&seed, &pole, s).unwrap();
        let st = feature_stats(&b.merged).unwrap();
        assert!(st.min_edge >= 0.8 && st.min_edge - 0.8 < 1e-9);
    }

    #[test]
    fn parts_near_pole_are_larger() {
        let b = generate_sculpture(&demo_seed(), &default_pole(), 1.0).unwrap();
        let min_edge = |g: Q8Element| {
            let (_, m) = b.parts.iter().find(|(h, _)| *h == g).unwrap();
            feature_stats(m).unwrap().min_edge
        };
        // Positive cells sit at distance 1 from the pole, negative at sqrt(3).
        for u in [Q8Element::ONE, Q8Element::I, Q8Element::J, Q8Element::K] {
            assert!(min_edge(u) > min_edge(-u));
        }
    }

    #[test]
    fn glued_partner_lands_on_opposite_face() {
        let p = [1.0, 0.2, -0.1];
        assert_eq!(
            glued_partner(FaceDir::new(Axis::X, true), &p),
            [-1.0, 0.1, 0.2]
        );
        for axis in Axis::ALL {
            let face = FaceDir::new(axis, true);
            let p = face.point([0.3, -0.45], 0.0);
            let q = glued_partner(face, &p);
            assert_eq!(q[axis.index()], -1.0);
            assert_eq!(carried_to_positive_face(axis, &q), p);
        }
    }

    #[test]
    fn demo_seed_contacts_pass() {
        let r = face_contact_check(&demo_seed()).unwrap();
        assert!(r.passed, "{r:?}");
        for a in &r.axes {
            assert_eq!(a.plus_points, 3);
            assert_eq!(a.minus_points, 3);
        }
    }

    fn marker_seed(minus_for: impl Fn(Axis, Vec3) -> Option<Vec3>) -> Mesh {
        let mut vertices = vec![[0.0, 0.0, 0.0], [0.1, 0.05, 0.0], [0.0, 0.1, 0.07]];
        let mut triangles = vec![[0, 1, 2]];
        for axis in Axis::ALL {
            let face = FaceDir::new(axis, true);
            let p = face.point([0.35, -0.2], 0.0);
            vertices.push(p);
            triangles.push([0, 1, vertices.len() - 1]);
            if let Some(q) = minus_for(axis, p) {
                vertices.push(q);
                triangles.push([0, 2, vertices.len() - 1]);
            }
        }
        Mesh::new(vertices, triangles).unwrap()
    }

    #[test]
    fn contact_fixtures() {
        let good = marker_seed(|axis, p| Some(glued_partner(FaceDir::new(axis, true), &p)));
        assert!(face_contact_check(&good).unwrap().passed);

        let missing = marker_seed(|axis, p| {
            (axis != Axis::Y).then(|| glued_partner(FaceDir::new(axis, true), &p))
        });
        let r = face_contact_check(&missing).unwrap();
        assert!(!r.passed);
        assert_eq!(r.axes.iter().filter(|a| a.passed).count(), 2);
        assert!(!r.axes[1].passed);
        assert_eq!(r.axes[1].unmatched.len(), 1);

        // Reflection without the quarter turn.
        let mirrored = marker_seed(|axis, p| {
            let mut q = p;
            q[axis.index()] = -1.0;
            Some(q)
        });
        let r = face_contact_check(&mirrored).unwrap();
        assert!(r.axes.iter().all(|a| !a.passed));
    }
}
