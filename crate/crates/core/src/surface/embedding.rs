//! Rotation systems: a cell embedding is a set of darts with an involution
//! `alpha` (dart to opposite dart of the same edge) and a permutation
//! `sigma` (counterclockwise rotation around the dart's tail vertex).
//!
//! Conventions used throughout the crate:
//! - vertices are the orbits of `sigma`,
//! - edges are the orbits of `alpha`, indexed in increasing order of their
//!   smallest dart, and an edge shares its index with its dual edge,
//! - faces are the orbits of `phi = sigma . alpha`; with counterclockwise
//!   `sigma` a face lies on the *right* of each of its darts,
//! - the corner `c(d)` (the sector swept counterclockwise from `d` to
//!   `sigma(d)`) belongs to the face of `sigma(d)`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Optional metadata carried by generated graphs: a human-readable kind
/// string, render coordinates, and edge permutations for lattice symmetries.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
pub struct Labels {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    /// One (x, y) hint per vertex.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex_coords: Option<Vec<[f64; 2]>>,
    /// One (x, y) hint per face.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub face_coords: Option<Vec<[f64; 2]>>,
    /// Edge permutations generating the translation group of the lattice.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub translations: Option<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug)]
pub struct CellEmbedding {
    alpha: Vec<usize>,
    sigma: Vec<usize>,
    sigma_inv: Vec<usize>,
    vertex_of: Vec<usize>,
    edge_of: Vec<usize>,
    face_of: Vec<usize>,
    vertex_darts: Vec<Vec<usize>>, // sigma orbits, in cyclic order
    face_darts: Vec<Vec<usize>>,   // phi orbits, in cyclic order
    edge_darts: Vec<[usize; 2]>,   // [d, alpha(d)] with d < alpha(d)
    genus: usize,
    pub labels: Labels,
}

#[derive(Serialize, Deserialize)]
struct EmbeddingJson {
    darts: usize,
    alpha: Vec<usize>,
    sigma: Vec<usize>,
    #[serde(default)]
    labels: Labels,
}

impl CellEmbedding {
    /// Build from a rotation system. Checks that `alpha` is a fixed-point
    /// free involution, `sigma` a permutation, the orbit structure is
    /// connected, and the Euler defect is even.
    pub fn new(alpha: Vec<usize>, sigma: Vec<usize>) -> Result<Self> {
        let n = alpha.len();
        if sigma.len() != n || n == 0 || n % 2 != 0 {
            return Err(Error::NonInvolution(n));
        }
        let mut seen = vec![false; n];
        for (d, &s) in sigma.iter().enumerate() {
            if s >= n || seen[s] {
                return Err(Error::NonInvolution(d));
            }
            seen[s] = true;
        }
        for (d, &a) in alpha.iter().enumerate() {
            if a >= n || a == d || alpha[a] != d {
                return Err(Error::NonInvolution(d));
            }
        }

        let mut sigma_inv = vec![0; n];
        for (d, &s) in sigma.iter().enumerate() {
            sigma_inv[s] = d;
        }

        let (vertex_of, vertex_darts) = orbits(&sigma);
        let phi: Vec<usize> = (0..n).map(|d| sigma[alpha[d]]).collect();
        let (face_of, face_darts) = orbits(&phi);
        let mut edge_of = vec![usize::MAX; n];
        let mut edge_darts = Vec::new();
        for d in 0..n {
            if edge_of[d] == usize::MAX {
                edge_of[d] = edge_darts.len();
                edge_of[alpha[d]] = edge_darts.len();
                edge_darts.push([d, alpha[d]]);
            }
        }

        // connectivity over the union of all three permutations
        let mut stack = vec![0usize];
        let mut vis = vec![false; n];
        vis[0] = true;
        while let Some(d) = stack.pop() {
            for nd in [alpha[d], sigma[d]] {
                if !vis[nd] {
                    vis[nd] = true;
                    stack.push(nd);
                }
            }
        }
        if vis.iter().any(|&v| !v) {
            return Err(Error::Disconnected);
        }

        let v = vertex_darts.len() as i64;
        let e = edge_darts.len() as i64;
        let f = face_darts.len() as i64;
        let defect = 2 - v + e - f;
        if defect % 2 != 0 || defect < 0 {
            return Err(Error::OddEulerDefect(defect));
        }

        Ok(CellEmbedding {
            alpha,
            sigma,
            sigma_inv,
            vertex_of,
            edge_of,
            face_of,
            vertex_darts,
            face_darts,
            edge_darts,
            genus: (defect / 2) as usize,
            labels: Labels::default(),
        })
    }

    pub fn dart_count(&self) -> usize {
        self.alpha.len()
    }
    pub fn vertex_count(&self) -> usize {
        self.vertex_darts.len()
    }
    pub fn edge_count(&self) -> usize {
        self.edge_darts.len()
    }
    pub fn face_count(&self) -> usize {
        self.face_darts.len()
    }
    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn alpha(&self, d: usize) -> usize {
        self.alpha[d]
    }
    pub fn sigma(&self, d: usize) -> usize {
        self.sigma[d]
    }
    pub fn sigma_inv(&self, d: usize) -> usize {
        self.sigma_inv[d]
    }
    /// Next dart of the face on the right of `d`.
    pub fn phi(&self, d: usize) -> usize {
        self.sigma[self.alpha[d]]
    }
    pub fn vertex_of(&self, d: usize) -> usize {
        self.vertex_of[d]
    }
    pub fn edge_of(&self, d: usize) -> usize {
        self.edge_of[d]
    }
    /// Face on the right of dart `d`.
    pub fn face_of(&self, d: usize) -> usize {
        self.face_of[d]
    }
    /// Face containing the corner between `d` and `sigma(d)`.
    pub fn corner_face(&self, d: usize) -> usize {
        self.face_of[self.sigma[d]]
    }
    pub fn vertex_darts(&self, v: usize) -> &[usize] {
        &self.vertex_darts[v]
    }
    pub fn face_darts(&self, f: usize) -> &[usize] {
        &self.face_darts[f]
    }
    pub fn edge_darts(&self, e: usize) -> [usize; 2] {
        self.edge_darts[e]
    }
    pub fn vertex_degree(&self, v: usize) -> usize {
        self.vertex_darts[v].len()
    }
    pub fn face_degree(&self, f: usize) -> usize {
        self.face_darts[f].len()
    }
    /// The two endpoints (tail of each dart) of edge `e`.
    pub fn edge_endpoints(&self, e: usize) -> [usize; 2] {
        let [d, a] = self.edge_darts[e];
        [self.vertex_of[d], self.vertex_of[a]]
    }
    /// The two faces adjacent to edge `e` (right faces of its darts).
    pub fn edge_faces(&self, e: usize) -> [usize; 2] {
        let [d, a] = self.edge_darts[e];
        [self.face_of[d], self.face_of[a]]
    }

    /// Dual embedding on the same darts: vertices and faces swap roles,
    /// edge indices are preserved, so `e` and `e*` share an index and
    /// `dual(dual(g)) == g` exactly.
    pub fn dual(&self) -> CellEmbedding {
        let phi: Vec<usize> = (0..self.dart_count()).map(|d| self.phi(d)).collect();
        let mut out = CellEmbedding::new(self.alpha.clone(), phi)
            .expect("dual of a valid embedding is valid");
        out.labels = Labels {
            kind: self.labels.kind.as_ref().map(|k| format!("dual({k})")),
            vertex_coords: self.labels.face_coords.clone(),
            face_coords: self.labels.vertex_coords.clone(),
            translations: self.labels.translations.clone(),
        };
        out
    }

    /// Medial graph: one vertex per edge of `self` (medial vertex ids equal
    /// base edge ids), one edge per corner, joining the medial vertices of
    /// `edge_of(x)` and `edge_of(sigma(x))`. Every medial vertex has degree
    /// 4 and `medial(g)` equals `medial(dual(g))` as a labeled graph.
    pub fn medial(&self) -> CellEmbedding {
        let ne = self.edge_count();
        // medial darts 4e+k: the counterclockwise ends at the medial vertex
        // of edge e = {d, alpha d}: corners c(d), c(sigma^-1 d), c(alpha d),
        // c(sigma^-1 alpha d)
        let out_dart = |x: usize| {
            let e = self.edge_of[x];
            4 * e + if self.edge_darts[e][0] == x { 0 } else { 2 }
        };
        let in_dart = |x: usize| {
            let sx = self.sigma[x];
            let e = self.edge_of[sx];
            4 * e + if self.edge_darts[e][0] == sx { 1 } else { 3 }
        };
        let mut alpha = vec![0usize; 4 * ne];
        let mut sigma = vec![0usize; 4 * ne];
        for e in 0..ne {
            for k in 0..4 {
                sigma[4 * e + k] = 4 * e + (k + 1) % 4;
            }
        }
        for x in 0..self.dart_count() {
            let (o, i) = (out_dart(x), in_dart(x));
            alpha[o] = i;
            alpha[i] = o;
        }
        let mut out =
            CellEmbedding::new(alpha, sigma).expect("medial of a valid embedding is valid");
        debug_assert!((0..ne).all(|e| {
            // orbit discovery keeps medial vertex ids aligned with edges
            out.vertex_of(4 * e) == e
        }));
        out.labels.kind = self.labels.kind.as_ref().map(|k| format!("medial({k})"));
        out
    }

    /// The medial edge realizing corner c(x), as an edge id of `medial()`.
    pub fn medial_edge_of_corner(&self, medial: &CellEmbedding, x: usize) -> usize {
        let e = self.edge_of[x];
        let out = 4 * e + if self.edge_darts[e][0] == x { 0 } else { 2 };
        medial.edge_of(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&EmbeddingJson {
            darts: self.dart_count(),
            alpha: self.alpha.clone(),
            sigma: self.sigma.clone(),
            labels: self.labels.clone(),
        })
        .expect("embedding serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: EmbeddingJson = serde_json::from_str(s)?;
        let mut g = CellEmbedding::new(j.alpha, j.sigma)?;
        g.labels = j.labels;
        Ok(g)
    }
}

fn orbits(perm: &[usize]) -> (Vec<usize>, Vec<Vec<usize>>) {
    let n = perm.len();
    let mut of = vec![usize::MAX; n];
    let mut list = Vec::new();
    for start in 0..n {
        if of[start] != usize::MAX {
            continue;
        }
        let id = list.len();
        let mut orbit = Vec::new();
        let mut d = start;
        loop {
            of[d] = id;
            orbit.push(d);
            d = perm[d];
            if d == start {
                break;
            }
        }
        list.push(orbit);
    }
    (of, list)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::generate::{sphere_platonic, torus_square};

    #[test]
    fn tetrahedron_is_a_sphere() {
        let g = sphere_platonic("tetrahedron").unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 6);
        assert_eq!(g.face_count(), 4);
        assert_eq!(g.genus(), 0);
    }

    #[test]
    fn tetrahedron_self_dual() {
        let g = sphere_platonic("tetrahedron").unwrap();
        let d = g.dual();
        assert_eq!(d.vertex_count(), 4);
        assert_eq!(d.face_count(), 4);
        assert_eq!(d.genus(), 0);
    }

    #[test]
    fn one_by_one_torus() {
        let g = torus_square(1, 1);
        assert_eq!(
            (g.vertex_count(), g.edge_count(), g.face_count(), g.genus()),
            (1, 2, 1, 1)
        );
        let d = g.dual();
        assert_eq!(
            (d.vertex_count(), d.edge_count(), d.face_count()),
            (1, 2, 1)
        );
    }

    #[test]
    fn torus_euler_for_various_sizes() {
        for (m, n) in [(1, 1), (1, 2), (2, 2), (2, 3), (3, 3), (4, 4)] {
            let g = torus_square(m, n);
            assert_eq!(g.vertex_count(), m * n);
            assert_eq!(g.edge_count(), 2 * m * n);
            assert_eq!(g.face_count(), m * n);
            assert_eq!(g.genus(), 1, "torus {m}x{n}");
        }
    }

    #[test]
    fn double_dual_is_identity() {
        let g = torus_square(2, 2);
        let dd = g.dual().dual();
        for d in 0..g.dart_count() {
            assert_eq!(g.sigma(d), dd.sigma(d));
            assert_eq!(g.alpha(d), dd.alpha(d));
        }
    }

    #[test]
    fn medial_is_degree_four_and_shared_with_dual() {
        for g in [torus_square(1, 1), torus_square(2, 2), sphere_platonic("cube").unwrap()] {
            let m = g.medial();
            assert_eq!(m.vertex_count(), g.edge_count());
            assert_eq!(m.edge_count(), 2 * g.edge_count());
            for v in 0..m.vertex_count() {
                assert_eq!(m.vertex_degree(v), 4);
            }
            assert_eq!(m.genus(), g.genus());

            // medial(dual g) equals medial(g): medial vertex ids are shared
            // edge ids, and the corner relabeling x -> alpha(x) is an edge
            // bijection preserving endpoints
            let gd = g.dual();
            let md = gd.medial();
            assert_eq!(md.vertex_count(), m.vertex_count());
            for x in 0..g.dart_count() {
                let me = g.medial_edge_of_corner(&m, g.alpha(x));
                let de = gd.medial_edge_of_corner(&md, x);
                let mut a = m.edge_endpoints(me);
                let mut b = md.edge_endpoints(de);
                a.sort();
                b.sort();
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let g = torus_square(2, 3);
        let s = g.to_json();
        let h = CellEmbedding::from_json(&s).unwrap();
        assert_eq!(g.labels, h.labels);
        for d in 0..g.dart_count() {
            assert_eq!(g.sigma(d), h.sigma(d));
            assert_eq!(g.alpha(d), h.alpha(d));
        }
    }

    #[test]
    fn rejects_bad_rotation_systems() {
        // alpha with a fixed point
        assert!(matches!(
            CellEmbedding::new(vec![0, 1], vec![0, 1]),
            Err(Error::NonInvolution(_))
        ));
        // disconnected: two separate loop-vertices
        let alpha = vec![1, 0, 3, 2];
        let sigma = vec![1, 0, 3, 2];
        assert!(matches!(
            CellEmbedding::new(alpha, sigma),
            Err(Error::Disconnected)
        ));
    }
}
