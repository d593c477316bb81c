//! Fixed-size vector helpers over plain `[f64; N]` arrays.

pub type Vec3 = [f64; 3];
pub type Vec4 = [f64; 4];

#[inline]
pub fn dot<const N: usize>(a: &[f64; N], b: &[f64; N]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm<const N: usize>(a: &[f64; N]) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub fn sub<const N: usize>(a: &[f64; N], b: &[f64; N]) -> [f64; N] {
    std::array::from_fn(|i| a[i] - b[i])
}

#[inline]
pub fn add<const N: usize>(a: &[f64; N], b: &[f64; N]) -> [f64; N] {
    std::array::from_fn(|i| a[i] + b[i])
}

#[inline]
pub fn scale<const N: usize>(a: &[f64; N], s: f64) -> [f64; N] {
    std::array::from_fn(|i| a[i] * s)
}

#[inline]
pub fn distance<const N: usize>(a: &[f64; N], b: &[f64; N]) -> f64 {
    norm(&sub(a, b))
}

pub fn is_finite<const N: usize>(a: &[f64; N]) -> bool {
    a.iter().all(|c| c.is_finite())
}

pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}
