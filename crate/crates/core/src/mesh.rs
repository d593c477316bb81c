//! Triangle meshes and their OBJ / binary STL encodings.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::vector::{cross, distance, is_finite, norm, sub, Vec3};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Mesh {
    pub vertices: Vec<Vec3>,
    pub triangles: Vec<[usize; 3]>,
}

impl Mesh {
    pub fn new(vertices: Vec<Vec3>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let m = Self {
            vertices,
            triangles,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.vertices.iter().all(is_finite) {
            return Err(Error::NonFinite);
        }
        let len = self.vertices.len();
        for (t, tri) in self.triangles.iter().enumerate() {
            if let Some(&index) = tri.iter().find(|&&i| i >= len) {
                return Err(Error::IndexOutOfRange {
                    triangle: t,
                    index,
                    len,
                });
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(Error::DegenerateTriangle(t));
            }
        }
        Ok(())
    }

    pub fn scaled(&self, s: f64) -> Mesh {
        Mesh {
            vertices: self
                .vertices
                .iter()
                .map(|v| crate::vector::scale(v, s))
                .collect(),
            triangles: self.triangles.clone(),
        }
    }

    /// Concatenates meshes, offsetting triangle indices.
    pub fn merge<'a>(parts: impl IntoIterator<Item = &'a Mesh>) -> Mesh {
        let mut out = Mesh::default();
        for p in parts {
            let base = out.vertices.len();
            out.vertices.extend_from_slice(&p.vertices);
            out.triangles
                .extend(p.triangles.iter().map(|t| t.map(|i| i + base)));
        }
        out
    }

    /// Unique undirected edges of all triangles.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<(usize, usize)> = self
            .triangles
            .iter()
            .flat_map(|t| [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])])
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        e.sort_unstable();
        e.dedup();
        e
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FeatureStats {
    pub min_edge: f64,
    pub max_edge: f64,
    /// `max_edge / min_edge`; `None` when the shortest edge has length zero.
    pub ratio: Option<f64>,
}

/// Shortest and longest triangle edges.
pub fn feature_stats(m: &Mesh) -> Result<FeatureStats> {
    if m.triangles.is_empty() {
        return Err(Error::EmptyMesh);
    }
    let (mut min_edge, mut max_edge) = (f64::INFINITY, 0.0f64);
    for (a, b) in m.edges() {
        let d = distance(&m.vertices[a], &m.vertices[b]);
        min_edge = min_edge.min(d);
        max_edge = max_edge.max(d);
    }
    let ratio = (min_edge > 0.0).then(|| max_edge / min_edge);
    Ok(FeatureStats {
        min_edge,
        max_edge,
        ratio,
    })
}

/// Reads `v` and `f` records. Polygons are fan-triangulated from their first
/// vertex, which is only correct for convex faces. Face indices may be
/// negative (relative) and may carry `/vt/vn` suffixes. Other records are
/// ignored.
pub fn load_obj(bytes: &[u8]) -> Result<Mesh> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::ObjParse {
        line: 0,
        message: format!("not UTF-8: {e}"),
    })?;
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let err = |message: String| Error::ObjParse {
            line: line_no,
            message,
        };
        let line = raw.split('#').next().unwrap_or("").trim();
        let mut fields = line.split_whitespace();
        match fields.next() {
            Some("v") => {
                let coords: Vec<f64> = fields
                    .map(|f| {
                        f.parse::<f64>()
                            .map_err(|e| err(format!("bad coordinate {f:?}: {e}")))
                    })
                    .collect::<Result<_>>()?;
                if !(3..=4).contains(&coords.len()) {
                    return Err(err(format!(
                        "vertex needs 3 coordinates, got {}",
                        coords.len()
                    )));
                }
                let v = [coords[0], coords[1], coords[2]];
                if !is_finite(&v) {
                    return Err(err("non-finite coordinate".into()));
                }
                vertices.push(v);
            }
            Some("f") => {
                let idx: Vec<usize> = fields
                    .map(|f| {
                        let first = f.split('/').next().unwrap_or("");
                        let i: i64 = first
                            .parse()
                            .map_err(|e| err(format!("bad face index {f:?}: {e}")))?;
                        let resolved = match i {
                            0 => None,
                            i if i > 0 => Some(i as usize - 1),
                            i => vertices.len().checked_sub(i.unsigned_abs() as usize),
                        };
                        resolved.ok_or_else(|| err(format!("face index {i} out of range")))
                    })
                    .collect::<Result<_>>()?;
                if idx.len() < 3 {
                    return Err(err(format!("face needs 3 vertices, got {}", idx.len())));
                }
                for k in 1..idx.len() - 1 {
                    triangles.push([idx[0], idx[k], idx[k + 1]]);
                }
            }
            _ => {}
        }
    }
    Mesh::new(vertices, triangles)
}

/// Formats with 9 significant digits, trimming trailing zeros.
fn fmt_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-5..=15).contains(&mag) {
        return format!("{x:.8e}");
    }
    let prec = (8 - mag).max(0) as usize;
    let s = format!("{x:.prec$}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

/// ASCII OBJ. `comments` are written first as `#` lines.
pub fn write_obj(m: &Mesh, comments: &[String]) -> Result<String> {
    if m.triangles.is_empty() {
        return Err(Error::EmptyMesh);
    }
    m.validate()?;
    let mut s = String::new();
    for c in comments {
        for line in c.lines() {
            writeln!(s, "# {line}").unwrap();
        }
    }
    for v in &m.vertices {
        writeln!(
            s,
            "v {} {} {}",
            fmt_sig9(v[0]),
            fmt_sig9(v[1]),
            fmt_sig9(v[2])
        )
        .unwrap();
    }
    for t in &m.triangles {
        writeln!(s, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1).unwrap();
    }
    Ok(s)
}

pub const STL_HEADER: &[u8] = b"quatsculpt binary STL";

fn unit_normal(a: &Vec3, b: &Vec3, c: &Vec3) -> Vec3 {
    let n = cross(&sub(b, a), &sub(c, a));
    let len = norm(&n);
    if len > 0.0 {
        n.map(|x| x / len)
    } else {
        [0.0; 3]
    }
}

/// Binary STL: 80-byte header, little-endian `u32` triangle count, then one
/// 50-byte record per triangle (normal, three vertices, zero attribute).
pub fn write_stl(m: &Mesh) -> Result<Vec<u8>> {
    if m.triangles.is_empty() {
        return Err(Error::EmptyMesh);
    }
    m.validate()?;
    let mut out = Vec::with_capacity(84 + 50 * m.triangles.len());
    let mut header = [0u8; 80];
    header[..STL_HEADER.len()].copy_from_slice(STL_HEADER);
    out.extend_from_slice(&header);
    out.extend_from_slice(&(m.triangles.len() as u32).to_le_bytes());
    for t in &m.triangles {
        let [a, b, c] = t.map(|i| m.vertices[i]);
        for v in [unit_normal(&a, &b, &c), a, b, c] {
            for x in v {
                out.extend_from_slice(&(x as f32).to_le_bytes());
            }
        }
        out.extend_from_slice(&0u16.to_le_bytes());
    }
    Ok(out)
}

/// Triangles of a binary STL as `(normal, [a, b, c])`.
pub fn read_stl(bytes: &[u8]) -> Result<Vec<(Vec3, [Vec3; 3])>> {
    let bad = |message: &str| Error::ObjParse {
        line: 0,
        message: message.into(),
    };
    if bytes.len() < 84 {
        return Err(bad("STL shorter than its header"));
    }
    let count = u32::from_le_bytes(bytes[80..84].try_into().unwrap()) as usize;
    if bytes.len() != 84 + 50 * count {
        return Err(bad("STL length does not match its triangle count"));
    }
    let f = |off: usize| f64::from(f32::from_le_bytes(bytes[off..off + 4].try_into().unwrap()));
    let vec = |off: usize| [f(off), f(off + 4), f(off + 8)];
    Ok((0..count)
        .map(|t| {
            let base = 84 + 50 * t;
            (vec(base), [vec(base + 12), vec(base + 24), vec(base + 36)])
        })
        .collect())
}
