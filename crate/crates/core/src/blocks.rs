//! Decorated blocks: cubes whose six faces carry a motif, a handedness and a
//! quarter-turn orientation, and the rules for gluing them face to face.
//!
//! # Face frames
//!
//! Each axis pair of faces shares a "through" frame `(u, v)`: the two other
//! cube axes in cyclic order (`±X: (y, z)`, `±Y: (z, x)`, `±Z: (x, y)`), so
//! `(u, v, +axis)` is right-handed. A
//! face pattern is an asymmetric glyph drawn in that frame, transformed by
//! `R^turn` and, when it appears mirrored in the frame, by a reflection `F`
//! (`R: (u, v) -> (-v, u)`, `F: (u, v) -> (u, -v)`). Handedness is as seen
//! from outside the cube, so the frame is mirrored on the negative face of
//! each pair: a right-handed motif on a `+` face and a left-handed one on a
//! `-` face are both drawn unreflected.
//!
//! Two glued faces match when their glyphs coincide on the shared square.
//! Across a gluing of a `+` face to a `-` face whose frames differ by the
//! rotation `R^r`, this means equal motifs, opposite handedness, and
//! `turn(-) - turn(+) = r (mod 4)`. In the hypercube every such gluing has
//! `r = 1`, which is why the blocks need opposite faces a quarter turn apart.
//!
//! Blocks cannot tile flat 3-space: no arrangement puts four of them around
//! a common edge with every face matched. The hypercube boundary is the
//! smallest closed arrangement.

use std::fmt;

use serde::Serialize;

use crate::hypercube::{cube_symmetries, SignedPermutation};
use crate::projection::radial_to_s3;
use crate::quat::{Q8Element, Q8Unit};
use crate::vector::{Vec3, Vec4};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Axis {
        Self::ALL[i]
    }

    /// The two cube axes spanning this axis pair's face frame, in cyclic
    /// order.
    pub fn frame(self) -> [usize; 2] {
        match self {
            Axis::X => [1, 2],
            Axis::Y => [2, 0],
            Axis::Z => [0, 1],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FaceDir {
    pub axis: Axis,
    pub positive: bool,
}

impl FaceDir {
    /// `+X, -X, +Y, -Y, +Z, -Z`.
    pub const ALL: [FaceDir; 6] = [
        FaceDir::new(Axis::X, true),
        FaceDir::new(Axis::X, false),
        FaceDir::new(Axis::Y, true),
        FaceDir::new(Axis::Y, false),
        FaceDir::new(Axis::Z, true),
        FaceDir::new(Axis::Z, false),
    ];

    pub const fn new(axis: Axis, positive: bool) -> Self {
        Self { axis, positive }
    }

    pub fn index(self) -> usize {
        2 * self.axis.index() + (!self.positive) as usize
    }

    pub fn opposite(self) -> Self {
        Self::new(self.axis, !self.positive)
    }

    pub fn normal(self) -> Vec3 {
        let mut n = [0.0; 3];
        n[self.axis.index()] = if self.positive { 1.0 } else { -1.0 };
        n
    }

    /// Local cube point for face-frame coordinates `(u, v)` at distance
    /// `1 - depth` from the centre along the normal.
    pub fn point(self, uv: [f64; 2], depth: f64) -> Vec3 {
        let mut p = crate::vector::scale(&self.normal(), 1.0 - depth);
        let [a, b] = self.axis.frame();
        p[a] = uv[0];
        p[b] = uv[1];
        p
    }

    /// Inverse of [`FaceDir::point`] restricted to the frame coordinates.
    pub fn frame_coords(self, p: &Vec3) -> [f64; 2] {
        let [a, b] = self.axis.frame();
        [p[a], p[b]]
    }
}

impl fmt::Display for FaceDir {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.positive { '+' } else { '-' };
        write!(f, "{s}{:?}", self.axis)
    }
}

impl Serialize for FaceDir {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Motif {
    Face,
    Paw,
    Tail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Chirality {
    Left,
    Right,
}

impl Chirality {
    pub fn flip(self) -> Self {
        match self {
            Chirality::Left => Chirality::Right,
            Chirality::Right => Chirality::Left,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct FaceDecoration {
    pub motif: Motif,
    pub chirality: Chirality,
    /// Quarter turns, always in `0..4`.
    pub turn: u8,
}

impl FaceDecoration {
    pub fn new(motif: Motif, chirality: Chirality, turn: u8) -> Self {
        Self {
            motif,
            chirality,
            turn: turn % 4,
        }
    }

    /// The glyph transform of this decoration in the frame of `face`.
    pub fn glyph_transform(&self, face: FaceDir) -> PlaneSym {
        PlaneSym::new(
            self.turn,
            (self.chirality == Chirality::Left) == face.positive,
        )
    }

    fn from_glyph_transform(motif: Motif, t: PlaneSym, face: FaceDir) -> Self {
        let chirality = if t.reflected == face.positive {
            Chirality::Left
        } else {
            Chirality::Right
        };
        Self::new(motif, chirality, t.turn)
    }
}

/// Element `R^turn F^reflected` of the symmetry group of the square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PlaneSym {
    pub turn: u8,
    pub reflected: bool,
}

impl PlaneSym {
    pub const IDENTITY: PlaneSym = PlaneSym {
        turn: 0,
        reflected: false,
    };

    pub fn new(turn: u8, reflected: bool) -> Self {
        Self {
            turn: turn % 4,
            reflected,
        }
    }

    pub fn rotation(turn: i32) -> Self {
        Self::new(turn.rem_euclid(4) as u8, false)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(self, other: PlaneSym) -> PlaneSym {
        let t = if self.reflected {
            self.turn as i32 - other.turn as i32
        } else {
            self.turn as i32 + other.turn as i32
        };
        PlaneSym::new(t.rem_euclid(4) as u8, self.reflected ^ other.reflected)
    }

    /// Integer matrix acting on column vectors `(u, v)`.
    pub fn matrix(self) -> [[i8; 2]; 2] {
        let f: [[i8; 2]; 2] = if self.reflected {
            [[1, 0], [0, -1]]
        } else {
            [[1, 0], [0, 1]]
        };
        let mut m = f;
        for _ in 0..self.turn {
            // Left-multiply by R = [[0, -1], [1, 0]].
            m = [[-m[1][0], -m[1][1]], [m[0][0], m[0][1]]];
        }
        m
    }

    pub fn from_matrix(m: [[i8; 2]; 2]) -> Option<PlaneSym> {
        (0..8)
            .map(|n| PlaneSym::new(n % 4, n >= 4))
            .find(|s| s.matrix() == m)
    }

    pub fn apply(self, uv: [f64; 2]) -> [f64; 2] {
        let m = self.matrix();
        [
            f64::from(m[0][0]) * uv[0] + f64::from(m[0][1]) * uv[1],
            f64::from(m[1][0]) * uv[0] + f64::from(m[1][1]) * uv[1],
        ]
    }
}

/// Glyph coincidence across a gluing whose frame change is `map`
/// (from `face_a`'s frame to `face_b`'s).
pub fn decorations_match(
    a: &FaceDecoration,
    face_a: FaceDir,
    b: &FaceDecoration,
    face_b: FaceDir,
    map: PlaneSym,
) -> bool {
    a.motif == b.motif && map.compose(a.glyph_transform(face_a)) == b.glyph_transform(face_b)
}

/// Matching of a decoration `a` on a `+` face against `b` on the `-` face it
/// is glued to, where the frames differ by `relative_turn` quarter turns.
pub fn faces_match(a: &FaceDecoration, b: &FaceDecoration, relative_turn: i32) -> bool {
    a.motif == b.motif
        && a.chirality != b.chirality
        && (i32::from(b.turn) - i32::from(a.turn) - relative_turn).rem_euclid(4) == 0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct DecoratedBlock {
    /// Indexed by [`FaceDir::index`].
    pub faces: [FaceDecoration; 6],
}

impl DecoratedBlock {
    pub fn face(&self, d: FaceDir) -> &FaceDecoration {
        &self.faces[d.index()]
    }

    /// Opposite faces carry the same motif with opposite handedness, and the
    /// `-` face is turned one quarter further than the `+` face.
    pub fn check_invariant(&self) -> bool {
        Axis::ALL.iter().all(|&axis| {
            let p = self.face(FaceDir::new(axis, true));
            let n = self.face(FaceDir::new(axis, false));
            p.motif == n.motif
                && p.chirality != n.chirality
                && (i32::from(n.turn) - i32::from(p.turn)).rem_euclid(4) == 1
        })
    }

    /// The block after moving it by a cube symmetry.
    pub fn transformed(&self, sym: &SignedPermutation<3>) -> DecoratedBlock {
        let mut faces = self.faces;
        for d in FaceDir::ALL {
            let a = d.axis.index();
            let target = FaceDir::new(
                Axis::from_index(sym.perm[a]),
                d.positive == (sym.signs[a] > 0),
            );
            let tf = target.axis.frame();
            let mut m = [[0i8; 2]; 2];
            for (col, &src) in d.axis.frame().iter().enumerate() {
                let row = tf.iter().position(|&t| t == sym.perm[src]).unwrap();
                m[row][col] = sym.signs[src];
            }
            let frame_map = PlaneSym::from_matrix(m).unwrap();
            let deco = self.face(d);
            let t = frame_map.compose(deco.glyph_transform(d));
            faces[target.index()] = FaceDecoration::from_glyph_transform(deco.motif, t, target);
        }
        DecoratedBlock { faces }
    }

    /// Cube symmetries that map the decoration onto itself.
    pub fn symmetries(&self) -> Vec<SignedPermutation<3>> {
        cube_symmetries()
            .into_iter()
            .filter(|s| self.transformed(s) == *self)
            .collect()
    }
}

/// Tails on the X pair, paws on Y, faces on Z; right-handed at turn 0 on
/// each `+` face, left-handed at turn 1 on each `-` face. Only the relative
/// orientations are forced; the absolute ones are this module's choice.
pub fn standard_block() -> DecoratedBlock {
    let mut faces = [FaceDecoration::new(Motif::Face, Chirality::Right, 0); 6];
    for (axis, motif) in [
        (Axis::X, Motif::Tail),
        (Axis::Y, Motif::Paw),
        (Axis::Z, Motif::Face),
    ] {
        faces[FaceDir::new(axis, true).index()] = FaceDecoration::new(motif, Chirality::Right, 0);
        faces[FaceDir::new(axis, false).index()] = FaceDecoration::new(motif, Chirality::Left, 1);
    }
    DecoratedBlock { faces }
}

/// A block on a line along X, turned about the line axis. Consecutive
/// placements with turns `t` and `t'` glue `+X` to `-X` with relative turn
/// `t' - t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinePlacement {
    pub block: DecoratedBlock,
    pub turn: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineSummary {
    pub blocks: usize,
    /// Smallest shift (in blocks) mapping the cyclic pattern to itself.
    pub translation_period: usize,
    /// Whether "advance one block and turn a quarter" is a symmetry.
    pub screw: bool,
    /// Number of screw steps that compose to the identity on the pattern.
    pub screw_order: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LineMismatch {
    /// The gluing between placement `index` and the next one failed.
    pub index: usize,
}

/// Checks every gluing of `+X` to the next block's `-X`. With `wrap`, the
/// last block is also glued to the first, giving a ring or one period of an
/// infinite line.
pub fn verify_line(placements: &[LinePlacement], wrap: bool) -> Result<LineSummary, LineMismatch> {
    let n = placements.len();
    let pairs = if wrap { n } else { n.saturating_sub(1) };
    for idx in 0..pairs {
        let a = &placements[idx];
        let b = &placements[(idx + 1) % n];
        let pos = FaceDir::new(Axis::X, true);
        let rel = i32::from(b.turn) - i32::from(a.turn);
        if !decorations_match(
            a.block.face(pos),
            pos,
            b.block.face(pos.opposite()),
            pos.opposite(),
            PlaneSym::rotation(rel),
        ) {
            return Err(LineMismatch { index: idx });
        }
    }
    let same = |x: &LinePlacement, y: &LinePlacement, dt: i32| {
        x.block == y.block && (i32::from(y.turn) - i32::from(x.turn) - dt).rem_euclid(4) == 0
    };
    let shifted =
        |s: usize, dt: i32| (0..n).all(|k| same(&placements[k], &placements[(k + s) % n], dt));
    let translation_period = (1..=n)
        .find(|&s| n.is_multiple_of(s) && shifted(s, 0))
        .unwrap_or(n);
    let screw = n > 0 && (0..pairs).all(|k| same(&placements[k], &placements[(k + 1) % n], 1));
    let screw_order = screw.then(|| {
        (1..=4 * translation_period)
            .find(|&m| m % translation_period == 0 && m % 4 == 0)
            .unwrap()
    });
    Ok(LineSummary {
        blocks: n,
        translation_period,
        screw,
        screw_order,
    })
}

/// `count` copies of `block`, each a quarter turn further than the last.
pub fn screw_line(block: DecoratedBlock, count: usize) -> Vec<LinePlacement> {
    (0..count)
        .map(|k| LinePlacement {
            block,
            turn: (k % 4) as u8,
        })
        .collect()
}

/// How one face of a hypercube cell is glued to a face of a neighbouring
/// cell. `map` takes the frame of `face` to the frame of `neighbor_face`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Gluing {
    pub cell: Q8Element,
    pub face: FaceDir,
    pub neighbor: Q8Element,
    pub neighbor_face: FaceDir,
    pub map: PlaneSym,
}

/// Local cube coordinates of a point of the cell `cell` (after transport
/// from cell `1`), as a point of R^4 on the hypercube boundary.
pub fn cell_point(cell: Q8Element, p: &Vec3) -> Vec4 {
    cell.right_mul_matrix().apply(&[1.0, p[0], p[1], p[2]])
}

fn to_local(cell: Q8Element, v: &Vec4) -> Vec4 {
    cell.inverse().right_mul_matrix().apply(v)
}

/// Gluing of `face` of `cell`, derived from the transport matrices.
pub fn gluing(cell: Q8Element, face: FaceDir) -> Gluing {
    let center = cell_point(cell, &face.normal());
    // The centre of a shared square has two coordinates of magnitude 1; the
    // one that is not the cell's own axis names the neighbour.
    let own = cell.unit.index();
    let idx = (0..4)
        .find(|&i| i != own && center[i].abs() == 1.0)
        .expect("face centre lies on two cells");
    let neighbor = Q8Element::new(center[idx] < 0.0, Q8Unit::from_index(idx));
    let local = to_local(neighbor, &center);
    debug_assert_eq!(local[0], 1.0);
    let axis = (1..4).find(|&i| local[i].abs() == 1.0).unwrap() - 1;
    let neighbor_face = FaceDir::new(Axis::from_index(axis), local[axis + 1] > 0.0);

    let nf = neighbor_face.axis.frame();
    let mut m = [[0i8; 2]; 2];
    for (col, &src) in face.axis.frame().iter().enumerate() {
        let mut dir = [0.0; 4];
        dir[src + 1] = 1.0;
        let moved = to_local(neighbor, &cell.right_mul_matrix().apply(&dir));
        for (row, &dst) in nf.iter().enumerate() {
            m[row][col] = moved[dst + 1] as i8;
        }
    }
    let map = PlaneSym::from_matrix(m).expect("face frames are related by a square symmetry");
    Gluing {
        cell,
        face,
        neighbor,
        neighbor_face,
        map,
    }
}

/// All 48 (cell, face) gluings; each shared square appears twice.
pub fn all_gluings() -> Vec<Gluing> {
    Q8Element::ALL
        .iter()
        .flat_map(|&g| FaceDir::ALL.iter().map(move |&d| gluing(g, d)))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct CellPlacement {
    pub cell: Q8Element,
    /// Row-vector transport matrix from cell `1`.
    pub transport: [[i8; 4]; 4],
}

#[derive(Debug, Clone, Serialize)]
pub struct GluingCheck {
    pub gluing: Gluing,
    pub matched: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Assembly {
    pub block: DecoratedBlock,
    pub placements: Vec<CellPlacement>,
    /// One entry per shared square (24).
    pub faces: Vec<GluingCheck>,
    pub matched: usize,
    pub valid: bool,
}

/// Places `block` in every cell, transported from cell `1` by right
/// multiplication, and checks the 24 shared squares.
pub fn assemble_hypercube(block: &DecoratedBlock) -> Assembly {
    let placements = Q8Element::ALL
        .iter()
        .map(|&g| CellPlacement {
            cell: g,
            transport: g.right_mul_matrix().to_signed_permutation().unwrap(),
        })
        .collect();
    let faces: Vec<GluingCheck> = all_gluings()
        .into_iter()
        .filter(|gl| {
            (gl.cell.ordinal(), gl.face.index()) < (gl.neighbor.ordinal(), gl.neighbor_face.index())
        })
        .map(|gl| GluingCheck {
            matched: decorations_match(
                block.face(gl.face),
                gl.face,
                block.face(gl.neighbor_face),
                gl.neighbor_face,
                gl.map,
            ),
            gluing: gl,
        })
        .collect();
    let matched = faces.iter().filter(|f| f.matched).count();
    Assembly {
        block: *block,
        placements,
        valid: matched == faces.len(),
        matched,
        faces,
    }
}

/// Glyph used to encode decorations as points: no square symmetry fixes it.
const GLYPH: [[f64; 2]; 3] = [[0.55, 0.15], [0.15, 0.45], [-0.3, 0.3]];

fn motif_depth(m: Motif) -> f64 {
    match m {
        Motif::Face => 0.15,
        Motif::Paw => 0.2,
        Motif::Tail => 0.25,
    }
}

/// Point encoding of a decorated block inside the cube: each face's glyph,
/// set back from the face by a motif-dependent depth.
pub fn block_points(block: &DecoratedBlock) -> Vec<Vec3> {
    let mut out = Vec::new();
    for d in FaceDir::ALL {
        let deco = block.face(d);
        let t = deco.glyph_transform(d);
        for g in GLYPH {
            out.push(d.point(t.apply(g), motif_depth(deco.motif)));
        }
    }
    out
}

/// The block's point encoding placed in all eight cells, on S^3.
pub fn assembly_points(block: &DecoratedBlock) -> Vec<Vec4> {
    let seed: Vec<Vec4> = block_points(block).iter().map(radial_to_s3).collect();
    Q8Element::ALL
        .iter()
        .flat_map(|g| {
            let m = g.right_mul_matrix();
            seed.iter().map(move |p| m.apply(p)).collect::<Vec<_>>()
        })
        .collect()
}

/// One labelled arc of the Cayley graph: `to = from * generator`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Arc {
    pub from: Q8Element,
    pub generator: Q8Element,
    pub to: Q8Element,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CayleyGraph {
    pub nodes: Vec<Q8Element>,
    pub arcs: Vec<Arc>,
}

pub const GENERATORS: [Q8Element; 3] = [Q8Element::I, Q8Element::J, Q8Element::K];

/// Cayley graph of Q8 for the generators `i, j, k` under right
/// multiplication.
pub fn cayley_graph() -> CayleyGraph {
    let nodes = Q8Element::ALL.to_vec();
    let arcs = nodes
        .iter()
        .flat_map(|&from| {
            GENERATORS.iter().map(move |&generator| Arc {
                from,
                generator,
                to: from * generator,
            })
        })
        .collect();
    CayleyGraph { nodes, arcs }
}

impl CayleyGraph {
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph Q8 {\n");
        for n in &self.nodes {
            s.push_str(&format!("    \"{n}\";\n"));
        }
        for a in &self.arcs {
            s.push_str(&format!(
                "    \"{}\" -> \"{}\" [label=\"{}\"];\n",
                a.from, a.to, a.generator
            ));
        }
        s.push_str("}\n");
        s
    }
}

/// Multiplies `start` on the right by each letter of `word` in turn. Letters
/// must be `±i, ±j, ±k`; walking an arrow backwards is the negated letter.
pub fn follow_path(start: Q8Element, word: &[Q8Element]) -> Option<Q8Element> {
    word.iter()
        .try_fold(start, |acc, &g| (g.unit != Q8Unit::One).then_some(acc * g))
}

/// Parses a word like `"i, -j, k"` or `"i j k"`.
pub fn parse_word(s: &str) -> Result<Vec<Q8Element>, crate::quat::ParseQ8Error> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(str::parse)
        .collect()
}
