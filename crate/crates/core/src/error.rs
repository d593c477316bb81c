use thiserror::Error;

use crate::quat::Q8Element;

#[derive(Debug, Error)]
pub enum Error {
    #[error("quaternion magnitude {0} is not within 1e-9 of 1")]
    NotUnit(f64),
    #[error("matrix is not orthogonal (max deviation {0:e})")]
    NotOrthogonal(f64),
    #[error("zero vector has no cell")]
    ZeroVector,
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("point lies within {distance:e} of the projection pole")]
    PointAtPole { distance: f64 },
    #[error("vertex {index} of element {element} maps onto the projection pole")]
    VertexAtPole { index: usize, element: Q8Element },
    #[error("seed vertex {index} lies outside the cube [-1,1]^3")]
    OutsideCube { index: usize },
    #[error("line {line}: {message}")]
    ObjParse { line: usize, message: String },
    #[error("triangle {triangle} references vertex {index} but mesh has {len} vertices")]
    IndexOutOfRange {
        triangle: usize,
        index: usize,
        len: usize,
    },
    #[error("triangle {0} repeats a vertex index")]
    DegenerateTriangle(usize),
    #[error("mesh has no triangles")]
    EmptyMesh,
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
    #[error("scale must be positive and finite, got {0}")]
    InvalidScale(f64),
    #[error("tolerance {tol:e} is ill-posed: two points lie within {distance:e} (2 * tol)")]
    IllPosedTolerance { tol: f64, distance: f64 },
    #[error("point {0} is not on the unit 3-sphere")]
    OffSphere(usize),
    #[error("mesh has zero-length edges; cannot choose a scale")]
    ZeroFeature,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
