//! Canonical graph generators with deterministic dart numbering.
//!
//! Torus lattices number darts row-major by vertex, then by direction
//! (E, N, W, S counterclockwise). Platonic solids build their rotation
//! systems from 3D coordinates (neighbors sorted counterclockwise around
//! the outward normal), so orientability is automatic.

use crate::error::{Error, Result};
use crate::surface::embedding::{CellEmbedding, Labels};
use crate::surface::quad::QuadGraph;

/// What a generator produces: a closed-surface embedding, or directly the
/// quadri-tiling graph of a simply connected planar patch.
pub enum Generated {
    Embedding(CellEmbedding),
    Quad(QuadGraph),
}

/// Parsed `--graph` specification.
#[derive(Clone, Debug, PartialEq)]
pub enum GraphSpec {
    TorusSquare(usize, usize),
    TorusTriangular(usize, usize),
    SpherePlatonic(String),
    PlanarPatch(usize, usize),
    File(String),
}

impl GraphSpec {
    /// Parse `kind:args`, e.g. `torus_square:2,2` or `sphere_platonic:cube`.
    pub fn parse(s: &str) -> Result<Self> {
        let (kind, args) = s.split_once(':').unwrap_or((s, ""));
        let dims = |args: &str| -> Result<(usize, usize)> {
            let (a, b) = args
                .split_once(',')
                .ok_or_else(|| Error::BadSpec(format!("expected m,n after `{kind}:`")))?;
            let m = a.trim().parse().map_err(|_| Error::BadSpec(format!("bad m in `{s}`")))?;
            let n = b.trim().parse().map_err(|_| Error::BadSpec(format!("bad n in `{s}`")))?;
            if m == 0 || n == 0 {
                return Err(Error::BadSpec("m,n must be >= 1".into()));
            }
            Ok((m, n))
        };
        match kind {
            "torus_square" => dims(args).map(|(m, n)| GraphSpec::TorusSquare(m, n)),
            "torus_triangular" => dims(args).map(|(m, n)| GraphSpec::TorusTriangular(m, n)),
            "sphere_platonic" => Ok(GraphSpec::SpherePlatonic(args.trim().to_string())),
            "planar_patch" => dims(args).map(|(m, n)| GraphSpec::PlanarPatch(m, n)),
            "file" => Ok(GraphSpec::File(args.to_string())),
            other => Err(Error::UnknownKind(other.to_string())),
        }
    }
}

pub fn generate(spec: &GraphSpec) -> Result<Generated> {
    Ok(match spec {
        GraphSpec::TorusSquare(m, n) => Generated::Embedding(torus_square(*m, *n)),
        GraphSpec::TorusTriangular(m, n) => Generated::Embedding(torus_triangular(*m, *n)),
        GraphSpec::SpherePlatonic(name) => Generated::Embedding(sphere_platonic(name)?),
        GraphSpec::PlanarPatch(m, n) => Generated::Quad(planar_patch(*m, *n)),
        GraphSpec::File(path) => {
            Generated::Embedding(CellEmbedding::from_json(&std::fs::read_to_string(path)?)?)
        }
    })
}

/// m x n square lattice on the torus (m rows, n columns). Vertex (i, j) has
/// index i*n + j; its darts are 4v + {0:E, 1:N, 2:W, 3:S}.
pub fn torus_square(m: usize, n: usize) -> CellEmbedding {
    let v = |i: usize, j: usize| (i % m) * n + (j % n);
    let nd = 4 * m * n;
    let mut alpha = vec![0usize; nd];
    let mut sigma = vec![0usize; nd];
    for i in 0..m {
        for j in 0..n {
            let b = 4 * v(i, j);
            for k in 0..4 {
                sigma[b + k] = b + (k + 1) % 4;
            }
            alpha[b] = 4 * v(i, j + 1) + 2; // E meets W of east neighbor
            alpha[b + 1] = 4 * v(i + 1, j) + 3; // N meets S of north neighbor
            alpha[b + 2] = 4 * v(i, j + n - 1);
            alpha[b + 3] = 4 * v(i + m - 1, j) + 1;
        }
    }
    let mut g = CellEmbedding::new(alpha, sigma).expect("torus lattice is valid");

    let vertex_coords: Vec<[f64; 2]> = (0..m * n)
        .map(|idx| [(idx % n) as f64, (idx / n) as f64])
        .collect();
    // face on the right of each dart; center offset per direction
    let offs = [[0.5, -0.5], [0.5, 0.5], [-0.5, 0.5], [-0.5, -0.5]];
    let mut face_coords = vec![[0.0, 0.0]; g.face_count()];
    for d in 0..g.dart_count() {
        let vtx = d / 4;
        let [x, y] = vertex_coords[vtx];
        let o = offs[d % 4];
        let fx = (x + o[0]).rem_euclid(n as f64);
        let fy = (y + o[1]).rem_euclid(m as f64);
        face_coords[g.face_of(d)] = [fx, fy];
    }
    let mut translations = Vec::new();
    for di in 0..m {
        for dj in 0..n {
            if di == 0 && dj == 0 {
                continue;
            }
            let mut perm = vec![0usize; g.edge_count()];
            for e in 0..g.edge_count() {
                let [d, _] = g.edge_darts(e);
                let (i, j, k) = (d / 4 / n, d / 4 % n, d % 4);
                perm[e] = g.edge_of(4 * v(i + di, j + dj) + k);
            }
            translations.push(perm);
        }
    }
    g.labels = Labels {
        kind: Some(format!("torus_square:{m},{n}")),
        vertex_coords: Some(vertex_coords),
        face_coords: Some(face_coords),
        translations: if translations.is_empty() { None } else { Some(translations) },
    };
    g
}

/// m x n triangular lattice on the torus: square lattice plus the NE
/// diagonal. Darts are 6v + {0:E, 1:NE, 2:N, 3:W, 4:SW, 5:S}.
pub fn torus_triangular(m: usize, n: usize) -> CellEmbedding {
    let v = |i: usize, j: usize| (i % m) * n + (j % n);
    let nd = 6 * m * n;
    let mut alpha = vec![0usize; nd];
    let mut sigma = vec![0usize; nd];
    for i in 0..m {
        for j in 0..n {
            let b = 6 * v(i, j);
            for k in 0..6 {
                sigma[b + k] = b + (k + 1) % 6;
            }
            alpha[b] = 6 * v(i, j + 1) + 3;
            alpha[b + 1] = 6 * v(i + 1, j + 1) + 4;
            alpha[b + 2] = 6 * v(i + 1, j) + 5;
            alpha[b + 3] = 6 * v(i, j + n - 1);
            alpha[b + 4] = 6 * v(i + m - 1, j + n - 1) + 1;
            alpha[b + 5] = 6 * v(i + m - 1, j) + 2;
        }
    }
    let mut g = CellEmbedding::new(alpha, sigma).expect("triangular torus is valid");
    g.labels.kind = Some(format!("torus_triangular:{m},{n}"));
    g.labels.vertex_coords = Some(
        (0..m * n)
            .map(|idx| [(idx % n) as f64, (idx / n) as f64])
            .collect(),
    );
    g
}

pub fn sphere_platonic(name: &str) -> Result<CellEmbedding> {
    let (coords, edges): (Vec<[f64; 3]>, Vec<(usize, usize)>) = match name {
        "tetrahedron" => {
            let c = vec![
                [1.0, 1.0, 1.0],
                [1.0, -1.0, -1.0],
                [-1.0, 1.0, -1.0],
                [-1.0, -1.0, 1.0],
            ];
            let e = (0..4)
                .flat_map(|a| (a + 1..4).map(move |b| (a, b)))
                .collect();
            (c, e)
        }
        "cube" => {
            let c: Vec<[f64; 3]> = (0..8)
                .map(|v: usize| {
                    [
                        if v & 1 == 1 { 1.0 } else { -1.0 },
                        if v & 2 == 2 { 1.0 } else { -1.0 },
                        if v & 4 == 4 { 1.0 } else { -1.0 },
                    ]
                })
                .collect();
            let mut e = Vec::new();
            for a in 0..8usize {
                for bit in [1, 2, 4] {
                    let b = a ^ bit;
                    if a < b {
                        e.push((a, b));
                    }
                }
            }
            (c, e)
        }
        "octahedron" => {
            let c = vec![
                [1.0, 0.0, 0.0],
                [-1.0, 0.0, 0.0],
                [0.0, 1.0, 0.0],
                [0.0, -1.0, 0.0],
                [0.0, 0.0, 1.0],
                [0.0, 0.0, -1.0],
            ];
            let mut e = Vec::new();
            for a in 0..6usize {
                for b in a + 1..6 {
                    if a / 2 != b / 2 {
                        e.push((a, b));
                    }
                }
            }
            (c, e)
        }
        other => return Err(Error::UnknownKind(format!("sphere_platonic:{other}"))),
    };
    let mut g = embed_by_coords(&coords, &edges)?;
    g.labels.kind = Some(format!("sphere_platonic:{name}"));
    // crude planar hints: drop z
    g.labels.vertex_coords = Some(coords.iter().map(|c| [c[0], c[1]]).collect());
    Ok(g)
}

/// Rotation system from 3D coordinates on a convex solid: at each vertex,
/// neighbors are sorted counterclockwise around the outward normal.
fn embed_by_coords(coords: &[[f64; 3]], edges: &[(usize, usize)]) -> Result<CellEmbedding> {
    let nv = coords.len();
    let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for &(a, b) in edges {
        nbrs[a].push(b);
        nbrs[b].push(a);
    }
    let sub = |a: [f64; 3], b: [f64; 3]| [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let cross = |a: [f64; 3], b: [f64; 3]| {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    };
    for (v, list) in nbrs.iter_mut().enumerate() {
        let n = coords[v];
        let norm = dot(n, n).sqrt();
        let nh = [n[0] / norm, n[1] / norm, n[2] / norm];
        let first = sub(coords[list[0]], coords[v]);
        let u1 = {
            let t = sub(first, [nh[0] * dot(first, nh), nh[1] * dot(first, nh), nh[2] * dot(first, nh)]);
            let l = dot(t, t).sqrt();
            [t[0] / l, t[1] / l, t[2] / l]
        };
        let u2 = cross(nh, u1);
        list.sort_by(|&a, &b| {
            let ang = |w: usize| {
                let d = sub(coords[w], coords[v]);
                let t = sub(d, [nh[0] * dot(d, nh), nh[1] * dot(d, nh), nh[2] * dot(d, nh)]);
                let a = dot(t, u2).atan2(dot(t, u1));
                if a < -1e-9 {
                    a + std::f64::consts::TAU
                } else {
                    a
                }
            };
            ang(a).partial_cmp(&ang(b)).unwrap()
        });
    }
    rotation_from_neighbor_lists(&nbrs)
}

/// Build (alpha, sigma) from per-vertex neighbor lists in cyclic order.
/// Parallel edges are paired up in list order.
pub fn rotation_from_neighbor_lists(nbrs: &[Vec<usize>]) -> Result<CellEmbedding> {
    let offsets: Vec<usize> = nbrs
        .iter()
        .scan(0, |acc, l| {
            let o = *acc;
            *acc += l.len();
            Some(o)
        })
        .collect();
    let nd: usize = nbrs.iter().map(|l| l.len()).sum();
    let mut sigma = vec![0usize; nd];
    let mut alpha = vec![usize::MAX; nd];
    for (v, list) in nbrs.iter().enumerate() {
        for k in 0..list.len() {
            sigma[offsets[v] + k] = offsets[v] + (k + 1) % list.len();
        }
    }
    for (v, list) in nbrs.iter().enumerate() {
        for (k, &w) in list.iter().enumerate() {
            let d = offsets[v] + k;
            if alpha[d] != usize::MAX {
                continue;
            }
            // first unmatched slot of v in w's list
            let back = nbrs[w]
                .iter()
                .enumerate()
                .find(|&(kk, &x)| x == v && alpha[offsets[w] + kk] == usize::MAX && offsets[w] + kk != d)
                .map(|(kk, _)| offsets[w] + kk)
                .ok_or(Error::NonInvolution(d))?;
            alpha[d] = back;
            alpha[back] = d;
        }
    }
    CellEmbedding::new(alpha, sigma)
}

/// Base graph of an m x n patch of rhombus cells (one base edge per cell),
/// embedded in the sphere. In rotated coordinates the cell (k, l) occupies
/// the unit square with corners (k,l)..(k+1,l+1); its base edge joins the
/// two corners of even parity. Even-parity points carry the primal graph,
/// odd-parity interior points are its bounded faces.
pub fn planar_patch_base(m: usize, n: usize) -> CellEmbedding {
    let mut points: Vec<(i64, i64)> = Vec::new();
    let mut id = std::collections::BTreeMap::new();
    let mut edges = Vec::new();
    for l in 0..n as i64 {
        for k in 0..m as i64 {
            let (p, q) = if (k + l) % 2 == 0 {
                ((k, l), (k + 1, l + 1))
            } else {
                ((k + 1, l), (k, l + 1))
            };
            for pt in [p, q] {
                id.entry(pt).or_insert_with(|| {
                    points.push(pt);
                    points.len() - 1
                });
            }
            edges.push((id[&p], id[&q]));
        }
    }
    // neighbors sorted counterclockwise by plane angle
    let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); points.len()];
    for &(a, b) in &edges {
        nbrs[a].push(b);
        nbrs[b].push(a);
    }
    for (v, list) in nbrs.iter_mut().enumerate() {
        let (x0, y0) = points[v];
        list.sort_by(|&a, &b| {
            let ang = |w: usize| {
                let (x, y) = points[w];
                ((y - y0) as f64).atan2((x - x0) as f64)
            };
            ang(a).partial_cmp(&ang(b)).unwrap()
        });
    }
    let mut g = rotation_from_neighbor_lists(&nbrs).expect("patch base is valid");
    assert_eq!(g.genus(), 0, "patch base must be planar");
    let vertex_coords: Vec<[f64; 2]> = points.iter().map(|&(x, y)| [x as f64, y as f64]).collect();
    let mut face_coords = vec![[0.0, 0.0]; g.face_count()];
    for f in 0..g.face_count() {
        let ds = g.face_darts(f);
        let (mut sx, mut sy) = (0.0, 0.0);
        for &d in ds {
            let [x, y] = vertex_coords[g.vertex_of(d)];
            sx += x;
            sy += y;
        }
        face_coords[f] = [sx / ds.len() as f64, sy / ds.len() as f64];
    }
    g.labels = Labels {
        kind: Some(format!("planar_patch:{m},{n}")),
        vertex_coords: Some(vertex_coords),
        face_coords: Some(face_coords),
        translations: None,
    };
    g
}

/// The quadri-tiling graph of an m x n planar patch: a simply connected
/// union of m*n rhombus gadgets, with the all-dual-parallel matching M0
/// covering every gadget internally.
pub fn planar_patch(m: usize, n: usize) -> QuadGraph {
    QuadGraph::build(planar_patch_base(m, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn platonic_census() {
        let cube = sphere_platonic("cube").unwrap();
        assert_eq!(
            (cube.vertex_count(), cube.edge_count(), cube.face_count(), cube.genus()),
            (8, 12, 6, 0)
        );
        for f in 0..cube.face_count() {
            assert_eq!(cube.face_degree(f), 4);
        }
        let octa = sphere_platonic("octahedron").unwrap();
        assert_eq!(
            (octa.vertex_count(), octa.edge_count(), octa.face_count(), octa.genus()),
            (6, 12, 8, 0)
        );
        assert!(sphere_platonic("icosahedron").is_err());
    }

    #[test]
    fn triangular_torus_census() {
        let g = torus_triangular(2, 2);
        assert_eq!(
            (g.vertex_count(), g.edge_count(), g.face_count(), g.genus()),
            (4, 12, 8, 1)
        );
        for f in 0..g.face_count() {
            assert_eq!(g.face_degree(f), 3);
        }
    }

    #[test]
    fn patch_base_shapes() {
        let g = planar_patch_base(2, 3);
        assert_eq!(g.edge_count(), 6);
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.face_count(), 2); // one bounded quad face + outer
        assert_eq!(g.genus(), 0);

        let g = planar_patch_base(1, 1);
        assert_eq!((g.vertex_count(), g.edge_count(), g.face_count()), (2, 1, 1));
    }

    #[test]
    fn spec_parsing() {
        assert_eq!(
            GraphSpec::parse("torus_square:2,2").unwrap(),
            GraphSpec::TorusSquare(2, 2)
        );
        assert_eq!(
            GraphSpec::parse("sphere_platonic:cube").unwrap(),
            GraphSpec::SpherePlatonic("cube".into())
        );
        assert!(GraphSpec::parse("klein_bottle:1,1").is_err());
        assert!(GraphSpec::parse("torus_square:0,2").is_err());
    }

    #[test]
    fn torus_translations_permute_edges() {
        let g = torus_square(2, 2);
        let t = g.labels.translations.as_ref().unwrap();
        assert_eq!(t.len(), 3);
        for perm in t {
            let mut seen = vec![false; g.edge_count()];
            for &e in perm {
                assert!(!seen[e]);
                seen[e] = true;
            }
        }
    }
}
