//! The quadri-tiling graph: every medial vertex (one per base edge) is
//! replaced by a quadrangle decoration. The result is bipartite; its faces
//! are in canonical bijection with base vertices, base faces and base edges.
//!
//! Indexing, with D the number of base darts (D = 2E):
//! - quad vertices: `2x` (white) and `2x+1` (black) for each base dart `x`;
//!   the white one sits in the corner `c(x)`, the black one in `c(sigma^-1 x)`.
//! - quad edges: `x` is the dual-parallel edge {2x, 2x+1} of dart `x`;
//!   `D + x` is the primal-parallel edge {2x+1, 2 alpha(x)};
//!   `2D + x` is the external edge {2x, 2 sigma(x) + 1} realizing the medial
//!   edge of corner `c(x)`.
//!
//! The reference matching `M0` is the set of all dual-parallel edges.


use crate::numeric::Bits;
use crate::surface::embedding::CellEmbedding;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadEdgeKind {
    /// Internal edge parallel to the base edge (weight a_e).
    APar(usize),
    /// Internal edge parallel to the dual base edge (weight b_{e*}).
    BPar(usize),
    /// External edge (weight 1), realizing the medial edge of a corner.
    External,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaceTag {
    /// Face sitting over base vertex v; degree 2 deg(v).
    PrimalVertex(usize),
    /// Face sitting over base face f; degree 2 deg(f).
    DualVertex(usize),
    /// The quadrangle decoration of base edge e; degree 4.
    Gadget(usize),
}

#[derive(Clone, Debug)]
pub struct QuadGraph {
    pub base: Arc<CellEmbedding>,
    pub graph: CellEmbedding,
    pub face_tags: Vec<FaceTag>,
    /// Render positions per quad vertex, when the base has coordinates.
    pub coords: Option<Vec<[f64; 2]>>,
}

impl QuadGraph {
    pub fn build(base: CellEmbedding) -> QuadGraph {
        Self::build_arc(Arc::new(base))
    }

    pub fn build_arc(base: Arc<CellEmbedding>) -> QuadGraph {
        let d_count = base.dart_count();
        let ne = 3 * d_count; // quad edges
        let mut alpha = vec![0usize; 2 * ne];
        for q in 0..ne {
            alpha[2 * q] = 2 * q + 1;
            alpha[2 * q + 1] = 2 * q;
        }
        let mut sigma = vec![usize::MAX; 2 * ne];
        for x in 0..d_count {
            // white vertex 2x: counterclockwise a-parallel, external, dual-parallel
            let a_end = 2 * (d_count + base.alpha(x)) + 1;
            let ext_end = 2 * (2 * d_count + x);
            let b_end = 2 * x;
            sigma[a_end] = ext_end;
            sigma[ext_end] = b_end;
            sigma[b_end] = a_end;
            // black vertex 2x+1: a-parallel, dual-parallel, external
            let a_end = 2 * (d_count + x);
            let b_end = 2 * x + 1;
            let ext_end = 2 * (2 * d_count + base.sigma_inv(x)) + 1;
            sigma[a_end] = b_end;
            sigma[b_end] = ext_end;
            sigma[ext_end] = a_end;
        }
        let mut graph = CellEmbedding::new(alpha, sigma).expect("quad graph is a valid embedding");
        graph.labels.kind = base.labels.kind.as_ref().map(|k| format!("quad({k})"));
        debug_assert_eq!(graph.vertex_count(), 2 * d_count);
        debug_assert_eq!(graph.edge_count(), ne);
        debug_assert_eq!(graph.genus(), base.genus());

        // face tags from canonical darts; every dart of an orbit must agree
        let mut face_tags: Vec<Option<FaceTag>> = vec![None; graph.face_count()];
        for qd in 0..graph.dart_count() {
            let (q, side) = (qd / 2, qd % 2);
            let x = q % d_count;
            let tag = match (q / d_count, side) {
                // dual-parallel edge: white side borders the primal-vertex
                // face, black side the gadget
                (0, 0) => FaceTag::PrimalVertex(base.vertex_of(x)),
                (0, 1) => FaceTag::Gadget(base.edge_of(x)),
                // primal-parallel edge: black side borders the dual-vertex
                // face of face(x), other side the gadget
                (1, 0) => FaceTag::DualVertex(base.face_of(x)),
                (1, 1) => FaceTag::Gadget(base.edge_of(x)),
                // external edge at corner c(x): right of the outgoing end is
                // the corner's face, right of the incoming end the vertex
                (2, 0) => FaceTag::DualVertex(base.face_of(base.sigma(x))),
                (2, 1) => FaceTag::PrimalVertex(base.vertex_of(x)),
                _ => unreachable!(),
            };
            let f = graph.face_of(qd);
            match face_tags[f] {
                None => face_tags[f] = Some(tag),
                Some(prev) => assert_eq!(prev, tag, "inconsistent face tag on quad face {f}"),
            }
        }
        let face_tags: Vec<FaceTag> = face_tags.into_iter().map(|t| t.unwrap()).collect();

        let coords = quad_coords(&base);
        graph.labels.vertex_coords = coords.clone();
        QuadGraph {
            base,
            graph,
            face_tags,
            coords,
        }
    }

    pub fn dart_base(&self) -> usize {
        self.base.dart_count()
    }
    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }
    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }
    pub fn is_white(&self, quad_vertex: usize) -> bool {
        quad_vertex % 2 == 0
    }

    pub fn edge_kind(&self, q: usize) -> QuadEdgeKind {
        let d_count = self.dart_base();
        let x = q % d_count;
        match q / d_count {
            0 => QuadEdgeKind::BPar(self.base.edge_of(x)),
            1 => QuadEdgeKind::APar(self.base.edge_of(x)),
            _ => QuadEdgeKind::External,
        }
    }

    /// Gadget edge ids for base edge e: (two dual-parallel, two primal-parallel).
    pub fn gadget_edges(&self, e: usize) -> ([usize; 2], [usize; 2]) {
        let d_count = self.dart_base();
        let [d, ad] = self.base.edge_darts(e);
        ([d, ad], [d_count + d, d_count + ad])
    }

    /// External quad edge realizing the medial edge of corner c(x).
    pub fn external_edge(&self, x: usize) -> usize {
        2 * self.dart_base() + x
    }

    /// Reference matching: all dual-parallel internal edges.
    pub fn m0(&self) -> Bits {
        let mut b = Bits::new(self.edge_count());
        for q in 0..self.dart_base() {
            b.set(q, true);
        }
        b
    }

    /// The two endpoints of quad edge q as (white, black) vertex ids.
    pub fn quad_edge_ends(&self, q: usize) -> (usize, usize) {
        let d_count = self.dart_base();
        let x = q % d_count;
        match q / d_count {
            0 => (2 * x, 2 * x + 1),
            1 => (2 * self.base.alpha(x), 2 * x + 1),
            _ => (2 * x, 2 * self.base.sigma(x) + 1),
        }
    }

    /// White/black indices for the Kasteleyn matrix: white `2x` is row x,
    /// black `2x+1` is column x, so the reference matching M0 is the
    /// diagonal.
    pub fn edge_row_col(&self, q: usize) -> (usize, usize) {
        let (w, b) = self.quad_edge_ends(q);
        (w / 2, b / 2)
    }

    /// Quad edges incident to a quad vertex.
    pub fn incident_edges(&self, quad_vertex: usize) -> [usize; 3] {
        let d_count = self.dart_base();
        let x = quad_vertex / 2;
        if quad_vertex % 2 == 0 {
            // white (x, A): b_x, a_{alpha x}, ext_x
            [x, d_count + self.base.alpha(x), 2 * d_count + x]
        } else {
            // black (x, B): b_x, a_x, ext_{sigma^-1 x}
            [x, d_count + x, 2 * d_count + self.base.sigma_inv(x)]
        }
    }

    /// Faces on the two sides of the gadget of base edge e in the dual
    /// direction: the dual-vertex faces of face(d) and face(alpha d).
    pub fn gadget_dual_faces(&self, e: usize) -> [usize; 2] {
        let [d, ad] = self.base.edge_darts(e);
        [
            self.quad_face_of_tag(FaceTag::DualVertex(self.base.face_of(d))),
            self.quad_face_of_tag(FaceTag::DualVertex(self.base.face_of(ad))),
        ]
    }

    /// Faces on the two sides of the gadget in the primal direction.
    pub fn gadget_primal_faces(&self, e: usize) -> [usize; 2] {
        let [d, ad] = self.base.edge_darts(e);
        [
            self.quad_face_of_tag(FaceTag::PrimalVertex(self.base.vertex_of(d))),
            self.quad_face_of_tag(FaceTag::PrimalVertex(self.base.vertex_of(ad))),
        ]
    }

    pub fn quad_face_of_tag(&self, tag: FaceTag) -> usize {
        self.face_tags
            .iter()
            .position(|&t| t == tag)
            .expect("tag exists")
    }

    pub fn face_census(&self) -> (usize, usize, usize) {
        let mut c = (0, 0, 0);
        for t in &self.face_tags {
            match t {
                FaceTag::PrimalVertex(_) => c.0 += 1,
                FaceTag::DualVertex(_) => c.1 += 1,
                FaceTag::Gadget(_) => c.2 += 1,
            }
        }
        c
    }
}

/// Corner positions: each white/black vertex is pulled from the midpoint of
/// its base edge toward its corner (vertex and corner-face average).
fn quad_coords(base: &CellEmbedding) -> Option<Vec<[f64; 2]>> {
    let vc = base.labels.vertex_coords.as_ref()?;
    let fc = base.labels.face_coords.as_ref()?;
    let mid = |x: usize| {
        let [u, w] = base.edge_endpoints(base.edge_of(x));
        [
            (vc[u][0] + vc[w][0]) / 2.0,
            (vc[u][1] + vc[w][1]) / 2.0,
        ]
    };
    let mut out = vec![[0.0, 0.0]; 2 * base.dart_count()];
    for x in 0..base.dart_count() {
        let m = mid(x);
        // white 2x in corner c(x): toward vertex(x) and face(sigma x)
        let v = vc[base.vertex_of(x)];
        let f = fc[base.face_of(base.sigma(x))];
        out[2 * x] = [
            0.5 * m[0] + 0.25 * v[0] + 0.25 * f[0],
            0.5 * m[1] + 0.25 * v[1] + 0.25 * f[1],
        ];
        // black 2x+1 in corner c(sigma^-1 x): toward vertex(x) and face(x)
        let f = fc[base.face_of(x)];
        out[2 * x + 1] = [
            0.5 * m[0] + 0.25 * v[0] + 0.25 * f[0],
            0.5 * m[1] + 0.25 * v[1] + 0.25 * f[1],
        ];
    }
    Some(out)
}

/// Build the quad graph for a base embedding (convenience wrapper).
pub fn quad_graph(base: &CellEmbedding) -> QuadGraph {
    QuadGraph::build(base.clone())
}

#[allow(dead_code)]
fn _assert_send_sync() {
    fn check<T: Send + Sync>() {}
    check::<QuadGraph>();
}
