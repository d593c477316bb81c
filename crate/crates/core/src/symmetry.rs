//! Exact symmetry detection for point clouds by brute force over the 384
//! signed permutations of R^4, plus chirality classification.
//!
//! Two point sets are equal when a bijection pairs every point with one of
//! the other set within the tolerance. Only the signed-permutation
//! candidates are searched, so "exactly Q8" and "metachiral" are statements
//! about that group, which contains every isometry preserving the
//! hypercube's cells. Conjugators outside it are not considered.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypercube::{cube_symmetries, hyperoctahedral_candidates, SignedPermutation};
use crate::quat::{Isometry4, Orientation, Q8Element};
use crate::vector::{distance, norm, Vec3, Vec4};

pub const DEFAULT_TOLERANCE: f64 = 1e-6;

/// Uniform grid hash over points, with a cell size of twice the tolerance.
pub struct SpatialHash<'a, const N: usize> {
    points: &'a [[f64; N]],
    cell: f64,
    buckets: HashMap<[i64; N], Vec<usize>>,
}

impl<'a, const N: usize> SpatialHash<'a, N> {
    pub fn new(points: &'a [[f64; N]], tol: f64) -> Self {
        let cell = 2.0 * tol;
        let mut buckets: HashMap<[i64; N], Vec<usize>> = HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            buckets.entry(key(p, cell)).or_default().push(i);
        }
        Self {
            points,
            cell,
            buckets,
        }
    }

    /// Indices of points within `tol` of `q`, nearest first.
    pub fn within(&self, q: &[f64; N], tol: f64) -> Vec<usize> {
        let lo = key(&q.map(|c| c - tol), self.cell);
        let hi = key(&q.map(|c| c + tol), self.cell);
        let mut found: Vec<(f64, usize)> = Vec::new();
        let mut k = lo;
        loop {
            if let Some(b) = self.buckets.get(&k) {
                for &i in b {
                    let d = distance(&self.points[i], q);
                    if d <= tol {
                        found.push((d, i));
                    }
                }
            }
            // Odometer over the box lo..=hi.
            let mut dim = 0;
            while dim < N {
                if k[dim] < hi[dim] {
                    k[dim] += 1;
                    break;
                }
                k[dim] = lo[dim];
                dim += 1;
            }
            if dim == N {
                break;
            }
        }
        found.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        found.into_iter().map(|(_, i)| i).collect()
    }
}

fn key<const N: usize>(p: &[f64; N], cell: f64) -> [i64; N] {
    p.map(|c| (c / cell).floor() as i64)
}

fn check_tolerance(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(tol))
    }
}

/// Rejects `tol` when two points are within `2 * tol` of each other, since
/// matches would then be ambiguous.
pub fn check_separation<const N: usize>(points: &[[f64; N]], tol: f64) -> Result<()> {
    check_tolerance(tol)?;
    let hash = SpatialHash::new(points, 2.0 * tol);
    for (i, p) in points.iter().enumerate() {
        if let Some(&j) = hash.within(p, 2.0 * tol).iter().find(|&&j| j != i) {
            return Err(Error::IllPosedTolerance {
                tol,
                distance: distance(p, &points[j]),
            });
        }
    }
    Ok(())
}

/// Whether `moved` and `target` are the same set within `tol`: greedy
/// nearest-neighbour pairing, falling back to augmenting paths when greedy
/// choices collide.
pub fn sets_match<const N: usize>(moved: &[[f64; N]], target: &[[f64; N]], tol: f64) -> bool {
    if moved.len() != target.len() {
        return false;
    }
    let hash = SpatialHash::new(target, tol);
    let mut used = vec![false; target.len()];
    let mut candidates: Vec<Vec<usize>> = Vec::with_capacity(moved.len());
    let mut greedy_ok = true;
    for q in moved {
        let near = hash.within(q, tol);
        if near.is_empty() {
            return false;
        }
        match near.iter().find(|&&j| !used[j]) {
            Some(&j) => used[j] = true,
            None => greedy_ok = false,
        }
        candidates.push(near);
    }
    greedy_ok || perfect_matching(&candidates, target.len())
}

/// Kuhn's augmenting-path bipartite matching.
fn perfect_matching(candidates: &[Vec<usize>], right: usize) -> bool {
    fn augment(u: usize, c: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &v in &c[u] {
            if !seen[v] {
                seen[v] = true;
                if owner[v].is_none_or(|w| augment(w, c, seen, owner)) {
                    owner[v] = Some(u);
                    return true;
                }
            }
        }
        false
    }
    let mut owner = vec![None; right];
    (0..candidates.len()).all(|u| augment(u, candidates, &mut vec![false; right], &mut owner))
}

/// Points on the unit 3-sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointCloud4 {
    pub points: Vec<Vec4>,
}

impl PointCloud4 {
    pub fn new(points: Vec<Vec4>) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            if !crate::vector::is_finite(p) || (norm(p) - 1.0).abs() > 1e-9 {
                return Err(Error::OffSphere(i));
            }
        }
        Ok(Self { points })
    }

    /// Like [`PointCloud4::new`], first collapsing points within `tol` of an
    /// earlier point (e.g. where neighbouring parts touch).
    pub fn merged(points: Vec<Vec4>, tol: f64) -> Result<Self> {
        check_tolerance(tol)?;
        let mut kept: Vec<Vec4> = Vec::with_capacity(points.len());
        let mut buckets: HashMap<[i64; 4], Vec<usize>> = HashMap::new();
        let cell = 2.0 * tol;
        'outer: for p in points {
            let lo = key(&p.map(|c| c - tol), cell);
            let hi = key(&p.map(|c| c + tol), cell);
            for a in lo[0]..=hi[0] {
                for b in lo[1]..=hi[1] {
                    for c in lo[2]..=hi[2] {
                        for d in lo[3]..=hi[3] {
                            if let Some(bucket) = buckets.get(&[a, b, c, d]) {
                                if bucket.iter().any(|&i| distance(&kept[i], &p) <= tol) {
                                    continue 'outer;
                                }
                            }
                        }
                    }
                }
            }
            buckets.entry(key(&p, cell)).or_default().push(kept.len());
            kept.push(p);
        }
        Self::new(kept)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn transformed(&self, iso: &Isometry4) -> Vec<Vec4> {
        self.points.iter().map(|p| iso.apply(p)).collect()
    }
}

/// Whether `iso` maps the cloud onto itself within `tol`.
pub fn invariant_under(cloud: &PointCloud4, iso: &Isometry4, tol: f64) -> Result<bool> {
    check_separation(&cloud.points, tol)?;
    Ok(sets_match(&cloud.transformed(iso), &cloud.points, tol))
}

fn surviving(cloud: &PointCloud4, candidates: &[Isometry4], tol: f64) -> Vec<Isometry4> {
    candidates
        .iter()
        .filter(|c| sets_match(&cloud.transformed(c), &cloud.points, tol))
        .copied()
        .collect()
}

/// `m = diag(-1, 1, 1, 1)`, the fixed orientation-reversing reference.
pub fn mirror() -> Isometry4 {
    let mut m = *Isometry4::IDENTITY.matrix();
    m[0][0] = -1.0;
    Isometry4::new(m).unwrap()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChiralityClass {
    Chiral,
    Achiral,
    Metachiral,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChiralityAnalysis {
    pub class: ChiralityClass,
    /// An orientation-preserving candidate carrying the cloud onto its
    /// mirror image, if any.
    pub mirror_match: Option<Isometry4>,
    /// Orientation-preserving candidates conjugating the symmetry group onto
    /// the mirror image's symmetry group.
    pub conjugators: Vec<Isometry4>,
    /// Symmetry group of the mirror image, found independently.
    pub mirror_group: Vec<Isometry4>,
}

fn key_set(group: &[Isometry4]) -> HashSet<[[i8; 4]; 4]> {
    group
        .iter()
        .map(|g| {
            g.to_signed_permutation()
                .expect("candidates are signed permutations")
        })
        .collect()
}

/// Whether `c⁻¹·g·c` runs over exactly `target` as `g` runs over `group`.
pub fn conjugates_onto(c: &Isometry4, group: &[Isometry4], target: &[Isometry4]) -> bool {
    let inv = c.inverse();
    let conj: Vec<Isometry4> = group.iter().map(|g| inv.then(g).then(c)).collect();
    key_set(&conj) == key_set(target)
}

fn analyse(
    cloud: &PointCloud4,
    group: &[Isometry4],
    candidates: &[Isometry4],
    tol: f64,
) -> ChiralityAnalysis {
    let mirrored = cloud.transformed(&mirror());
    let preserving: Vec<&Isometry4> = candidates
        .iter()
        .filter(|c| c.orientation() == Orientation::Preserving)
        .collect();
    let mirror_match = preserving
        .iter()
        .find(|c| sets_match(&cloud.transformed(c), &mirrored, tol))
        .map(|c| **c);
    let mirror_cloud = PointCloud4 { points: mirrored };
    let mirror_group = surviving(&mirror_cloud, candidates, tol);
    let conjugators: Vec<Isometry4> = preserving
        .iter()
        .filter(|c| conjugates_onto(c, group, &mirror_group))
        .map(|c| **c)
        .collect();
    let class = if mirror_match.is_some() {
        ChiralityClass::Achiral
    } else if conjugators.is_empty() {
        ChiralityClass::Metachiral
    } else {
        ChiralityClass::Chiral
    };
    ChiralityAnalysis {
        class,
        mirror_match,
        conjugators,
        mirror_group,
    }
}

/// Achiral when an orientation-preserving candidate matches the cloud to its
/// mirror image. A chiral cloud is metachiral when no orientation-preserving
/// candidate conjugates its symmetry group onto its mirror's.
pub fn chirality_analysis(cloud: &PointCloud4, tol: f64) -> Result<ChiralityAnalysis> {
    check_separation(&cloud.points, tol)?;
    let candidates = hyperoctahedral_candidates();
    let group = surviving(cloud, &candidates, tol);
    Ok(analyse(cloud, &group, &candidates, tol))
}

pub fn classify_chirality(cloud: &PointCloud4, tol: f64) -> Result<ChiralityClass> {
    Ok(chirality_analysis(cloud, tol)?.class)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryReport {
    pub candidates_tested: usize,
    pub symmetries: Vec<Isometry4>,
    pub is_exactly_q8: bool,
    pub chirality: ChiralityClass,
}

/// The right-multiplication matrices of Q8, in [`Q8Element::ALL`] order.
pub fn q8_right_group() -> Vec<Isometry4> {
    Q8Element::ALL
        .iter()
        .map(|g| g.right_mul_matrix())
        .collect()
}

pub fn q8_left_group() -> Vec<Isometry4> {
    Q8Element::ALL.iter().map(|g| g.left_mul_matrix()).collect()
}

/// Filters the 384 candidates down to the cloud's symmetries.
pub fn symmetry_group(cloud: &PointCloud4, tol: f64) -> Result<SymmetryReport> {
    check_separation(&cloud.points, tol)?;
    let candidates = hyperoctahedral_candidates();
    let symmetries = surviving(cloud, &candidates, tol);
    let is_exactly_q8 = key_set(&symmetries) == key_set(&q8_right_group());
    let chirality = analyse(cloud, &symmetries, &candidates, tol).class;
    Ok(SymmetryReport {
        candidates_tested: candidates.len(),
        symmetries,
        is_exactly_q8,
        chirality,
    })
}

/// Whether a subset of the candidates is closed under products and inverses.
pub fn is_group(elements: &[Isometry4]) -> bool {
    let keys = key_set(elements);
    elements.iter().all(|a| {
        keys.contains(&a.inverse().to_signed_permutation().unwrap())
            && elements
                .iter()
                .all(|b| keys.contains(&a.then(b).to_signed_permutation().unwrap()))
    })
}

/// Cube symmetries preserving a seed point set in `[-1,1]^3`.
pub fn seed_symmetries(points: &[Vec3], tol: f64) -> Result<Vec<SignedPermutation<3>>> {
    check_separation(points, tol)?;
    Ok(cube_symmetries()
        .into_iter()
        .filter(|s| {
            let moved: Vec<Vec3> = points.iter().map(|p| s.apply(p)).collect();
            sets_match(&moved, points, tol)
        })
        .collect())
}

/// True iff only the identity among the 48 cube symmetries preserves the
/// seed.
pub fn seed_asymmetry_check(points: &[Vec3], tol: f64) -> Result<bool> {
    Ok(seed_symmetries(points, tol)?.len() == 1)
}

#[derive(Debug, Clone, Serialize)]
struct MatrixEntry {
    matrix: [[i8; 4]; 4],
    orientation: Orientation,
}

#[derive(Debug, Clone, Serialize)]
struct ReportJson {
    candidates_tested: usize,
    symmetry_count: usize,
    is_exactly_q8: bool,
    chirality: ChiralityClass,
    symmetries: Vec<MatrixEntry>,
}

impl SymmetryReport {
    /// JSON with each surviving matrix as an integer 4x4 array.
    pub fn to_json(&self) -> String {
        let json = ReportJson {
            candidates_tested: self.candidates_tested,
            symmetry_count: self.symmetries.len(),
            is_exactly_q8: self.is_exactly_q8,
            chirality: self.chirality,
            symmetries: self
                .symmetries
                .iter()
                .map(|s| MatrixEntry {
                    matrix: s.to_signed_permutation().unwrap(),
                    orientation: s.orientation(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&json).unwrap() + "\n"
    }
}
