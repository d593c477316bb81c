//! A small synthetic seed design: a lopsided body with one limb reaching
//! each face of the cube. The limb tips on opposite faces are placed with
//! the gluing map, so each copy's tips meet its six neighbours' tips.

use crate::blocks::{Axis, FaceDir};
use crate::mesh::Mesh;
use crate::pipeline::glued_partner;
use crate::vector::{add, scale, Vec3};

const BODY: [Vec3; 6] = [
    [0.27, 0.02, -0.05],
    [-0.22, 0.06, 0.03],
    [0.04, 0.31, 0.02],
    [-0.03, -0.19, 0.07],
    [0.05, -0.02, 0.24],
    [0.01, 0.04, -0.29],
];

const BODY_FACES: [[usize; 3]; 8] = [
    [0, 2, 4],
    [2, 1, 4],
    [1, 3, 4],
    [3, 0, 4],
    [2, 0, 5],
    [1, 2, 5],
    [3, 1, 5],
    [0, 3, 5],
];

/// Tip centres on the `+X`, `+Y`, `+Z` faces, in each face's frame.
const TIP_CENTRES: [[f64; 2]; 3] = [[0.22, -0.12], [-0.18, 0.27], [0.11, 0.31]];

/// Offsets of a tip triangle's corners from its centre.
const TIP_SHAPE: [[f64; 2]; 3] = [[0.09, 0.0], [-0.04, 0.07], [-0.05, -0.06]];

fn limb(mesh: &mut Mesh, base_centre: Vec3, tip: [Vec3; 3]) {
    let start = mesh.vertices.len();
    let tip_centre = scale(&tip.iter().fold([0.0; 3], |a, p| add(&a, p)), 1.0 / 3.0);
    for p in &tip {
        // Base corners: the tip triangle shrunk and moved onto the body.
        let offset = crate::vector::sub(p, &tip_centre);
        mesh.vertices.push(add(&base_centre, &scale(&offset, 0.6)));
    }
    mesh.vertices.extend_from_slice(&tip);
    let (b, t) = (start, start + 3);
    for k in 0..3 {
        let n = (k + 1) % 3;
        mesh.triangles.push([b + k, b + n, t + n]);
        mesh.triangles.push([b + k, t + n, t + k]);
    }
    mesh.triangles.push([t, t + 1, t + 2]);
}

/// The shipped asymmetric seed (42 vertices, 50 triangles).
pub fn demo_seed() -> Mesh {
    let mut mesh = Mesh {
        vertices: BODY.to_vec(),
        triangles: BODY_FACES.to_vec(),
    };
    for (axis, centre) in Axis::ALL.into_iter().zip(TIP_CENTRES) {
        let face = FaceDir::new(axis, true);
        let tip: [Vec3; 3] =
            TIP_SHAPE.map(|o| face.point([centre[0] + o[0], centre[1] + o[1]], 0.0));
        let partner = tip.map(|p| glued_partner(face, &p));
        limb(&mut mesh, scale(&face.normal(), 0.2), tip);
        limb(&mut mesh, scale(&face.opposite().normal(), 0.2), partner);
    }
    mesh.validate().expect("demo seed is well formed");
    mesh
}
