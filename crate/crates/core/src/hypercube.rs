//! The eight cubical cells of the hypercube `[-1,1]^4`, the Q8 action that
//! permutes them, the dual 16-cell, and the signed-permutation group that
//! serves as the candidate universe for symmetry detection.
//!
//! Cells are named by the Q8 element whose coordinate axis they sit on:
//! the cell `{(1, x, y, z)}` is labelled `1`, `{(x, 1, y, z)}` is `i`, and so
//! on, with `-1, -i, -j, -k` for the opposite cells. Which cell carries the
//! label `1` is a free choice; we take the `+w` cell, so that reaching the
//! cell labelled `g` from cell `1` means right multiplication by `g`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quat::{Isometry4, Q8Element, Q8Unit};
use crate::vector::Vec4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct CellLabel(pub Q8Element);

impl fmt::Display for CellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// The cell whose defining coordinate has the largest magnitude. Ties go to
/// the lowest coordinate index (w, then x, y, z); cube corners sit exactly on
/// such ties.
pub fn cell_of_point(v: &Vec4) -> Result<CellLabel> {
    if !crate::vector::is_finite(v) {
        return Err(Error::NonFinite);
    }
    let mut best = 0;
    for idx in 1..4 {
        if v[idx].abs() > v[best].abs() {
            best = idx;
        }
    }
    if v[best] == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(CellLabel(Q8Element::new(
        v[best] < 0.0,
        Q8Unit::from_index(best),
    )))
}

/// A permutation of the eight cells, indexed by [`Q8Element::ordinal`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellPermutation([CellLabel; 8]);

impl CellPermutation {
    pub fn identity() -> Self {
        Self(Q8Element::ALL.map(CellLabel))
    }

    pub fn apply(&self, c: CellLabel) -> CellLabel {
        self.0[c.0.ordinal()]
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &CellPermutation) -> CellPermutation {
        Self(Q8Element::ALL.map(|g| other.apply(self.apply(CellLabel(g)))))
    }
}

/// The permutation `a -> a*g` induced on cells by right multiplication by `g`.
pub fn cell_action(g: Q8Element) -> CellPermutation {
    CellPermutation(Q8Element::ALL.map(|a| CellLabel(a * g)))
}

/// Unit vector at the centre of a cell after radial projection, `±e_n`.
pub fn cell_center(c: CellLabel) -> Vec4 {
    c.0.to_quaternion().to_vec4()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SixteenCell {
    pub vertices: Vec<Vec4>,
    pub edges: Vec<(usize, usize)>,
}

/// Vertices `±e_w, ±e_x, ±e_y, ±e_z` (in [`Q8Element::ALL`] order) joined by
/// every non-antipodal pair.
pub fn sixteen_cell() -> SixteenCell {
    let vertices: Vec<Vec4> = Q8Element::ALL
        .iter()
        .map(|g| g.to_quaternion().to_vec4())
        .collect();
    let mut edges = Vec::new();
    for a in 0..vertices.len() {
        for b in a + 1..vertices.len() {
            if crate::vector::dot(&vertices[a], &vertices[b]) > -0.5 {
                edges.push((a, b));
            }
        }
    }
    SixteenCell { vertices, edges }
}

/// Signed permutation of coordinates: `out[perm[r]] = signs[r] * v[r]`,
/// i.e. the row-vector matrix with entry `signs[r]` at `(r, perm[r])`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignedPermutation<const N: usize> {
    pub perm: [usize; N],
    pub signs: [i8; N],
}

impl<const N: usize> SignedPermutation<N> {
    pub fn identity() -> Self {
        Self {
            perm: std::array::from_fn(|i| i),
            signs: [1; N],
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn apply(&self, v: &[f64; N]) -> [f64; N] {
        let mut out = [0.0; N];
        for r in 0..N {
            out[self.perm[r]] = f64::from(self.signs[r]) * v[r];
        }
        out
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Self) -> Self {
        let mut perm = [0; N];
        let mut signs = [0; N];
        for r in 0..N {
            perm[r] = other.perm[self.perm[r]];
            signs[r] = self.signs[r] * other.signs[self.perm[r]];
        }
        Self { perm, signs }
    }

    /// +1 or -1.
    pub fn determinant(&self) -> i8 {
        let mut parity = 1i8;
        let mut seen = [false; N];
        for start in 0..N {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.perm[i];
                len += 1;
            }
            if len % 2 == 0 {
                parity = -parity;
            }
        }
        parity * self.signs.iter().product::<i8>()
    }

    pub fn matrix(&self) -> [[f64; N]; N] {
        let mut m = [[0.0; N]; N];
        for r in 0..N {
            m[r][self.perm[r]] = f64::from(self.signs[r]);
        }
        m
    }

    /// All `N! * 2^N` signed permutations: permutations in lexicographic
    /// order, each followed by its sign patterns in binary order.
    pub fn all() -> Vec<Self> {
        let mut out = Vec::new();
        for perm in permutations::<N>() {
            for mask in 0..(1u32 << N) {
                let signs = std::array::from_fn(|i| if mask >> i & 1 == 1 { -1 } else { 1 });
                out.push(Self { perm, signs });
            }
        }
        out
    }
}

impl SignedPermutation<4> {
    pub fn to_isometry(&self) -> Isometry4 {
        Isometry4::new(self.matrix()).expect("signed permutations are orthogonal")
    }
}

fn permutations<const N: usize>() -> Vec<[usize; N]> {
    fn rec<const N: usize>(cur: &mut Vec<usize>, used: &mut [bool; N], out: &mut Vec<[usize; N]>) {
        if cur.len() == N {
            out.push(std::array::from_fn(|i| cur[i]));
            return;
        }
        for i in 0..N {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut [false; N], &mut out);
    out
}

/// The 384 isometries of R^4 that preserve the hypercube's cell structure.
pub fn hyperoctahedral_candidates() -> Vec<Isometry4> {
    SignedPermutation::<4>::all()
        .iter()
        .map(SignedPermutation::to_isometry)
        .collect()
}

/// The 48 symmetries of the cube `[-1,1]^3`.
pub fn cube_symmetries() -> Vec<SignedPermutation<3>> {
    SignedPermutation::<3>::all()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::Orientation;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn label(s: &str) -> CellLabel {
        CellLabel(s.parse().unwrap())
    }

    #[test]
    fn cell_of_point_examples() {
        assert_eq!(cell_of_point(&[1.0, 0.2, -0.3, 0.5]).unwrap(), label("1"));
        assert_eq!(cell_of_point(&[-0.1, -0.9, 0.0, 0.2]).unwrap(), label("-i"));
        assert_eq!(cell_of_point(&[0.5, 0.5, 0.5, 0.5]).unwrap(), label("1"));
        assert_eq!(cell_of_point(&[0.0, -0.5, 0.5, 0.1]).unwrap(), label("-i"));
        assert_eq!(cell_of_point(&[0.0, 0.0, 0.0, -2.0]).unwrap(), label("-k"));
        assert!(matches!(cell_of_point(&[0.0; 4]), Err(Error::ZeroVector)));
        assert!(cell_of_point(&[f64::NAN, 0.0, 0.0, 1.0]).is_err());
    }

    #[test]
    fn cell_action_examples() {
        let i = Q8Element::I;
        assert_eq!(cell_action(i).apply(label("1")), label("i"));
        let antipodal = cell_action(Q8Element::MINUS_ONE);
        for g in Q8Element::ALL {
            assert_eq!(antipodal.apply(CellLabel(g)), CellLabel(-g));
        }
        assert_eq!(cell_action(Q8Element::ONE), CellPermutation::identity());
    }

    #[test]
    fn cell_action_is_a_group_action() {
        for a in Q8Element::ALL {
            for b in Q8Element::ALL {
                assert_eq!(cell_action(a).then(&cell_action(b)), cell_action(a * b));
            }
        }
    }

    #[test]
    fn sixteen_cell_counts() {
        let sc = sixteen_cell();
        assert_eq!(sc.vertices.len(), 8);
        assert_eq!(sc.edges.len(), 24);
        let mut degree = [0; 8];
        for &(a, b) in &sc.edges {
            degree[a] += 1;
            degree[b] += 1;
            assert_ne!(sc.vertices[a], sc.vertices[b].map(|c| -c));
        }
        assert!(degree.iter().all(|&d| d == 6));
    }

    #[test]
    fn candidate_universe() {
        let cands = hyperoctahedral_candidates();
        assert_eq!(cands.len(), 384);
        let preserving = cands
            .iter()
            .filter(|c| c.orientation() == Orientation::Preserving)
            .count();
        assert_eq!(preserving, 192);
        for g in Q8Element::ALL {
            assert!(cands.contains(&g.right_mul_matrix()));
            assert!(cands.contains(&g.left_mul_matrix()));
        }
        let keys: HashSet<_> = cands
            .iter()
            .map(|c| c.to_signed_permutation().unwrap())
            .collect();
        assert_eq!(keys.len(), 384);
        for c in &cands {
            assert_eq!(
                c.orientation() == Orientation::Preserving,
                c.determinant() > 0.0
            );
        }
    }

    #[test]
    fn candidate_universe_is_closed() {
        let perms = SignedPermutation::<4>::all();
        let set: HashSet<_> = perms.iter().copied().collect();
        for a in &perms {
            for b in &perms {
                let ab = a.then(b);
                assert!(set.contains(&ab));
                let via_matrix = a.to_isometry().then(&b.to_isometry());
                assert_eq!(via_matrix, ab.to_isometry());
            }
        }
    }

    #[test]
    fn cube_symmetry_count() {
        let syms = cube_symmetries();
        assert_eq!(syms.len(), 48);
        assert_eq!(syms.iter().filter(|s| s.determinant() == 1).count(), 24);
    }

    fn sphere_point() -> impl Strategy<Value = Vec4> {
        prop::array::uniform4(-1.0f64..1.0)
            .prop_filter("nonzero", |v| crate::vector::norm(v) > 1e-3)
            .prop_map(|v| crate::vector::scale(&v, 1.0 / crate::vector::norm(&v)))
            .prop_filter("away from ties", |v| {
                let mut a: Vec<f64> = v.iter().map(|c| c.abs()).collect();
                a.sort_by(f64::total_cmp);
                a[3] - a[2] > 1e-6
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn cell_labels_follow_the_matrices(v in sphere_point()) {
            let c = cell_of_point(&v).unwrap();
            for g in Q8Element::ALL {
                let moved = g.right_mul_matrix().apply(&v);
                prop_assert_eq!(cell_of_point(&moved).unwrap(), cell_action(g).apply(c));
            }
        }
    }
}
