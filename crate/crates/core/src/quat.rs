//! Quaternion arithmetic, the quaternion group Q8 and its action on R^4.
//!
//! Products are written left operand first, so `a * b` is "a, then b".
//! Points of R^4 are identified with quaternions `w + xi + yj + zk` and
//! treated as row vectors: a matrix `M` acts as `v -> v·M`. With this
//! convention `right_mul_matrix(a)·right_mul_matrix(b) = right_mul_matrix(a*b)`,
//! so composing matrices left to right agrees with reading products left to
//! right.

use std::fmt;
use std::ops::{Mul, Neg};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vector::Vec4;

/// Tolerance used when constructing a [`UnitQuaternion`].
pub const UNIT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    pub const fn from_vec4(v: Vec4) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }

    pub const fn to_vec4(self) -> Vec4 {
        [self.w, self.x, self.y, self.z]
    }

    pub fn magnitude(self) -> f64 {
        (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    /// Scales to unit magnitude; `None` for the zero quaternion.
    pub fn normalize(self) -> Option<UnitQuaternion> {
        let m = self.magnitude();
        if m == 0.0 || !m.is_finite() {
            return None;
        }
        Some(UnitQuaternion(Self::new(
            self.w / m,
            self.x / m,
            self.y / m,
            self.z / m,
        )))
    }
}

/// Hamilton product, `i^2 = j^2 = k^2 = ijk = -1`.
impl Mul for Quaternion {
    type Output = Quaternion;

    fn mul(self, b: Quaternion) -> Quaternion {
        let a = self;
        Quaternion::new(
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        )
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;

    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// A quaternion of magnitude 1 (within [`UNIT_TOLERANCE`]). Never renormalized
/// silently; use [`Quaternion::normalize`] for that.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitQuaternion(Quaternion);

impl UnitQuaternion {
    pub fn new(q: Quaternion) -> Result<Self> {
        let m = q.magnitude();
        if !m.is_finite() || (m - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::NotUnit(m));
        }
        Ok(Self(q))
    }

    pub fn get(self) -> Quaternion {
        self.0
    }
}

impl From<Q8Element> for UnitQuaternion {
    fn from(g: Q8Element) -> Self {
        UnitQuaternion(g.to_quaternion())
    }
}

/// The non-sign part of a Q8 element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Q8Unit {
    One,
    I,
    J,
    K,
}

impl Q8Unit {
    /// Coordinate index of this unit in (w, x, y, z).
    pub fn index(self) -> usize {
        match self {
            Q8Unit::One => 0,
            Q8Unit::I => 1,
            Q8Unit::J => 2,
            Q8Unit::K => 3,
        }
    }

    pub fn from_index(i: usize) -> Self {
        [Q8Unit::One, Q8Unit::I, Q8Unit::J, Q8Unit::K][i]
    }

    /// Product of two units as (negated, unit).
    fn mul(self, other: Q8Unit) -> (bool, Q8Unit) {
        use Q8Unit::*;
        match (self, other) {
            (One, u) | (u, One) => (false, u),
            (a, b) if a == b => (true, One),
            (I, J) => (false, K),
            (J, K) => (false, I),
            (K, I) => (false, J),
            (J, I) => (true, K),
            (K, J) => (true, I),
            (I, K) => (true, J),
            _ => unreachable!(),
        }
    }
}

/// One of the eight elements `±1, ±i, ±j, ±k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Q8Element {
    pub negative: bool,
    pub unit: Q8Unit,
}

impl Q8Element {
    pub const ONE: Q8Element = Q8Element::new(false, Q8Unit::One);
    pub const MINUS_ONE: Q8Element = Q8Element::new(true, Q8Unit::One);
    pub const I: Q8Element = Q8Element::new(false, Q8Unit::I);
    pub const MINUS_I: Q8Element = Q8Element::new(true, Q8Unit::I);
    pub const J: Q8Element = Q8Element::new(false, Q8Unit::J);
    pub const MINUS_J: Q8Element = Q8Element::new(true, Q8Unit::J);
    pub const K: Q8Element = Q8Element::new(false, Q8Unit::K);
    pub const MINUS_K: Q8Element = Q8Element::new(true, Q8Unit::K);

    /// All elements in the order 1, -1, i, -i, j, -j, k, -k.
    pub const ALL: [Q8Element; 8] = [
        Self::ONE,
        Self::MINUS_ONE,
        Self::I,
        Self::MINUS_I,
        Self::J,
        Self::MINUS_J,
        Self::K,
        Self::MINUS_K,
    ];

    pub const fn new(negative: bool, unit: Q8Unit) -> Self {
        Self { negative, unit }
    }

    pub fn to_quaternion(self) -> Quaternion {
        let mut v = [0.0; 4];
        v[self.unit.index()] = if self.negative { -1.0 } else { 1.0 };
        Quaternion::from_vec4(v)
    }

    /// Position of this element in [`Q8Element::ALL`].
    pub fn ordinal(self) -> usize {
        2 * self.unit.index() + self.negative as usize
    }

    pub fn inverse(self) -> Self {
        match self.unit {
            Q8Unit::One => self,
            _ => -self,
        }
    }

    /// Smallest `n >= 1` with `self^n = 1`.
    pub fn order(self) -> u32 {
        let mut acc = self;
        let mut n = 1;
        while acc != Self::ONE {
            acc = acc * self;
            n += 1;
        }
        n
    }

    pub fn right_mul_matrix(self) -> Isometry4 {
        right_mul_matrix(self.into())
    }

    pub fn left_mul_matrix(self) -> Isometry4 {
        left_mul_matrix(self.into())
    }
}

impl Mul for Q8Element {
    type Output = Q8Element;

    fn mul(self, other: Q8Element) -> Q8Element {
        let (neg, unit) = self.unit.mul(other.unit);
        Q8Element::new(self.negative ^ other.negative ^ neg, unit)
    }
}

impl Neg for Q8Element {
    type Output = Q8Element;

    fn neg(self) -> Q8Element {
        Q8Element::new(!self.negative, self.unit)
    }
}

impl fmt::Display for Q8Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.negative { "-" } else { "" };
        let unit = match self.unit {
            Q8Unit::One => "1",
            Q8Unit::I => "i",
            Q8Unit::J => "j",
            Q8Unit::K => "k",
        };
        write!(f, "{sign}{unit}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseQ8Error(pub String);

impl fmt::Display for ParseQ8Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "not a Q8 element: {:?}", self.0)
    }
}

impl std::error::Error for ParseQ8Error {}

impl FromStr for Q8Element {
    type Err = ParseQ8Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let (negative, rest) = match t.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        let unit = match rest {
            "1" => Q8Unit::One,
            "i" => Q8Unit::I,
            "j" => Q8Unit::J,
            "k" => Q8Unit::K,
            _ => return Err(ParseQ8Error(s.to_string())),
        };
        Ok(Q8Element::new(negative, unit))
    }
}

impl Serialize for Q8Element {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Q8Element {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Checks closure, associativity, identity and inverses by exhaustion.
pub fn verify_group_axioms(elements: &[Q8Element]) -> bool {
    if elements.is_empty() {
        return false;
    }
    let contains = |g: Q8Element| elements.contains(&g);
    let closed = elements
        .iter()
        .all(|&a| elements.iter().all(|&b| contains(a * b)));
    if !closed {
        return false;
    }
    let associative = elements.iter().all(|&a| {
        elements
            .iter()
            .all(|&b| elements.iter().all(|&c| (a * b) * c == a * (b * c)))
    });
    let identity = elements
        .iter()
        .copied()
        .find(|&e| elements.iter().all(|&a| e * a == a && a * e == a));
    let Some(e) = identity else {
        return false;
    };
    let inverses = elements
        .iter()
        .all(|&a| elements.iter().any(|&b| a * b == e && b * a == e));
    associative && inverses
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Preserving,
    Reversing,
}

/// Orthogonal 4x4 matrix acting on row vectors (`v -> v·m`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry4 {
    m: [[f64; 4]; 4],
    orientation: Orientation,
}

const ORTHO_TOLERANCE: f64 = 1e-9;

impl Isometry4 {
    pub const IDENTITY: Isometry4 = Isometry4 {
        m: [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ],
        orientation: Orientation::Preserving,
    };

    pub fn new(m: [[f64; 4]; 4]) -> Result<Self> {
        let dev = orthogonality_error(&m);
        if !dev.is_finite() || dev > ORTHO_TOLERANCE {
            return Err(Error::NotOrthogonal(dev));
        }
        let orientation = if determinant(&m) > 0.0 {
            Orientation::Preserving
        } else {
            Orientation::Reversing
        };
        Ok(Self { m, orientation })
    }

    pub fn matrix(&self) -> &[[f64; 4]; 4] {
        &self.m
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn determinant(&self) -> f64 {
        determinant(&self.m)
    }

    pub fn apply(&self, v: &Vec4) -> Vec4 {
        std::array::from_fn(|j| (0..4).map(|i| v[i] * self.m[i][j]).sum())
    }

    /// `self·other`: apply `self` first, then `other`.
    pub fn then(&self, other: &Isometry4) -> Isometry4 {
        let m = std::array::from_fn(|r| {
            std::array::from_fn(|c| (0..4).map(|k| self.m[r][k] * other.m[k][c]).sum())
        });
        let orientation = if self.orientation == other.orientation {
            Orientation::Preserving
        } else {
            Orientation::Reversing
        };
        Isometry4 { m, orientation }
    }

    pub fn inverse(&self) -> Isometry4 {
        Isometry4 {
            m: std::array::from_fn(|r| std::array::from_fn(|c| self.m[c][r])),
            orientation: self.orientation,
        }
    }

    /// Max-norm distance between the two matrices.
    pub fn max_diff(&self, other: &Isometry4) -> f64 {
        let mut d = 0.0f64;
        for (a, b) in self.m.iter().flatten().zip(other.m.iter().flatten()) {
            d = d.max((a - b).abs());
        }
        d
    }

    /// Integer entries, if every entry is exactly -1, 0 or 1.
    pub fn to_signed_permutation(&self) -> Option<[[i8; 4]; 4]> {
        let mut out = [[0i8; 4]; 4];
        for (row, src) in out.iter_mut().zip(&self.m) {
            for (o, &x) in row.iter_mut().zip(src) {
                *o = if x == 1.0 {
                    1
                } else if x == -1.0 {
                    -1
                } else if x == 0.0 {
                    0
                } else {
                    return None;
                };
            }
        }
        Some(out)
    }
}

fn orthogonality_error(m: &[[f64; 4]; 4]) -> f64 {
    let mut dev = 0.0f64;
    for r in 0..4 {
        for c in 0..4 {
            let p: f64 = (0..4).map(|k| m[r][k] * m[c][k]).sum();
            let want = if r == c { 1.0 } else { 0.0 };
            dev = dev.max((p - want).abs());
        }
    }
    dev
}

/// Gaussian elimination with partial pivoting.
fn determinant(m: &[[f64; 4]; 4]) -> f64 {
    let mut a = *m;
    let mut det = 1.0;
    for col in 0..4 {
        let pivot = (col..4)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .unwrap();
        if a[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for row in col + 1..4 {
            let f = a[row][col] / a[col][col];
            let pivot_row = a[col];
            for (x, p) in a[row][col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= f * p;
            }
        }
    }
    det
}

/// Matrix of `v -> v*q`. Row `r` is the image of the basis quaternion `e_r`.
pub fn right_mul_matrix(q: UnitQuaternion) -> Isometry4 {
    let q = q.get();
    let m = std::array::from_fn(|r| (basis(r) * q).to_vec4());
    Isometry4 {
        m,
        orientation: Orientation::Preserving,
    }
}

/// Matrix of `v -> q*v`.
pub fn left_mul_matrix(q: UnitQuaternion) -> Isometry4 {
    let q = q.get();
    let m = std::array::from_fn(|r| (q * basis(r)).to_vec4());
    Isometry4 {
        m,
        orientation: Orientation::Preserving,
    }
}

fn basis(r: usize) -> Quaternion {
    let mut v = [0.0; 4];
    v[r] = 1.0;
    Quaternion::from_vec4(v)
}
