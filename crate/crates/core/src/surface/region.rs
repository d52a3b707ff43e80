//! Regions of a closed surface: the whole surface, the surface with disc
//! blocks removed, and the components obtained by cutting along a polygon
//! configuration.
//!
//! A region is stored as the set of surviving faces. Everything else is
//! derived: an edge survives iff both its adjacent faces do (so primal and
//! dual edges stay in bijection), a vertex survives iff some incident face
//! does, and a vertex is interior iff all its incident faces do. The genus
//! and the number of boundary circles come from the cut complex, where
//! boundary vertices are split into one copy per wedge of surviving faces.

use crate::error::{Error, Result};
use crate::numeric::Bits;
use crate::surface::embedding::CellEmbedding;
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct BoundedSurfaceGraph {
    parent: Arc<CellEmbedding>,
    faces: Bits,
    edges: Bits,
    vertices: Bits,
    interior_vertices: Bits,
    genus: usize,
    boundary_circles: usize,
    /// Face blocks removed by `remove_faces`; empty for whole surfaces and
    /// cut components.
    pub removed_blocks: Vec<Vec<usize>>,
}

impl BoundedSurfaceGraph {
    /// The whole closed surface as a region (p = 0).
    pub fn whole(g: CellEmbedding) -> Self {
        Self::whole_arc(Arc::new(g))
    }

    pub fn whole_arc(parent: Arc<CellEmbedding>) -> Self {
        let nf = parent.face_count();
        let mut faces = Bits::new(nf);
        for f in 0..nf {
            faces.set(f, true);
        }
        Self::from_faces(parent, faces)
    }

    /// Region spanned by a face subset. Panics if empty.
    pub fn from_faces(parent: Arc<CellEmbedding>, faces: Bits) -> Self {
        assert!(!faces.is_empty(), "a region needs at least one face");
        let ne = parent.edge_count();
        let nv = parent.vertex_count();
        let mut edges = Bits::new(ne);
        for e in 0..ne {
            let [f1, f2] = parent.edge_faces(e);
            if faces.get(f1) && faces.get(f2) {
                edges.set(e, true);
            }
        }
        let mut vertices = Bits::new(nv);
        let mut interior = Bits::new(nv);
        for v in 0..nv {
            let mut any = false;
            let mut all = true;
            for &d in parent.vertex_darts(v) {
                if faces.get(parent.face_of(d)) {
                    any = true;
                } else {
                    all = false;
                }
            }
            vertices.set(v, any);
            interior.set(v, any && all);
        }

        // boundary circles: orbits of the tight-turn successor on boundary
        // darts (region face on the right of each dart)
        let is_boundary_dart = |d: usize| {
            faces.get(parent.face_of(d)) && !faces.get(parent.face_of(parent.alpha(d)))
        };
        let bdarts: Vec<usize> = (0..parent.dart_count()).filter(|&d| is_boundary_dart(d)).collect();
        let next = |d: usize| {
            let mut x = parent.phi(d);
            while faces.get(parent.face_of(parent.sigma(x))) {
                x = parent.sigma(x);
            }
            x
        };
        let mut circles = 0usize;
        let mut seen = std::collections::HashSet::new();
        for &start in &bdarts {
            if seen.contains(&start) {
                continue;
            }
            circles += 1;
            let mut d = start;
            loop {
                seen.insert(d);
                d = next(d);
                if d == start {
                    break;
                }
            }
        }
        // cut-complex Euler characteristic: wedge and boundary-copy counts
        // cancel, leaving interior vertices - interior edges + faces
        let chi = interior.count() as i64 - edges.count() as i64 + faces.count() as i64;
        let two_g = 2 - chi - circles as i64;
        assert!(two_g >= 0 && two_g % 2 == 0, "region is not orientable-consistent");

        BoundedSurfaceGraph {
            parent,
            faces,
            edges,
            vertices,
            interior_vertices: interior,
            genus: (two_g / 2) as usize,
            boundary_circles: circles,
            removed_blocks: Vec::new(),
        }
    }

    /// Remove `blocks` of closed faces, each homeomorphic to a disc and
    /// pairwise disjoint as closed sets. Edges on the resulting boundary are
    /// dropped from the primal edge set; duals of all surviving primal edges
    /// survive.
    pub fn remove_faces(g: &Arc<CellEmbedding>, blocks: &[Vec<usize>]) -> Result<Self> {
        let nf = g.face_count();
        let mut owner: Vec<Option<usize>> = vec![None; nf];
        for (bi, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::BadSpec(format!("block {bi} is empty")));
            }
            for &f in block {
                if f >= nf {
                    return Err(Error::BadSpec(format!("face {f} out of range")));
                }
                if owner[f].is_some() {
                    return Err(Error::OverlappingBlocks(f));
                }
                owner[f] = Some(bi);
            }
        }
        // closed blocks are disjoint iff they share no vertex
        let mut vertex_owner: Vec<Option<usize>> = vec![None; g.vertex_count()];
        for v in 0..g.vertex_count() {
            for &d in g.vertex_darts(v) {
                if let Some(bi) = owner[g.face_of(d)] {
                    match vertex_owner[v] {
                        Some(prev) if prev != bi => {
                            return Err(Error::OverlappingBlocks(g.face_of(d)))
                        }
                        _ => vertex_owner[v] = Some(bi),
                    }
                }
            }
        }
        // each block must be a closed disc
        for (bi, block) in blocks.iter().enumerate() {
            let bits = Bits::from_indices(nf, block);
            let connected = face_connected(g, &bits);
            let piece = Self::from_faces(g.clone(), bits);
            let chi = 2 - 2 * piece.genus as i64 - piece.boundary_circles as i64;
            if !connected || chi != 1 {
                return Err(Error::NotADisc(bi, connected, chi));
            }
        }
        let mut faces = Bits::new(nf);
        for f in 0..nf {
            faces.set(f, owner[f].is_none());
        }
        if faces.is_empty() {
            return Err(Error::BadSpec("no faces survive".into()));
        }
        if !face_connected(g, &faces) {
            return Err(Error::Disconnected);
        }
        let mut region = Self::from_faces(g.clone(), faces);
        region.removed_blocks = blocks.to_vec();
        Ok(region)
    }

    /// Cut the region along a primal polygon configuration `p` (a set of
    /// edge indices): delete the dual edges crossing `p`, take dual
    /// connected components, and return one region per component.
    /// Components are ordered by their smallest face index.
    pub fn cut_along(&self, p: &Bits) -> Vec<BoundedSurfaceGraph> {
        let g = &self.parent;
        let nf = g.face_count();
        let mut comp = vec![usize::MAX; nf];
        let mut pieces: Vec<Vec<usize>> = Vec::new();
        for f0 in 0..nf {
            if !self.faces.get(f0) || comp[f0] != usize::MAX {
                continue;
            }
            let id = pieces.len();
            let mut stack = vec![f0];
            let mut members = Vec::new();
            comp[f0] = id;
            while let Some(f) = stack.pop() {
                members.push(f);
                for &d in g.face_darts(f) {
                    let e = g.edge_of(d);
                    if !self.edges.get(e) || p.get(e) {
                        continue;
                    }
                    let other = g.face_of(g.alpha(d));
                    if self.faces.get(other) && comp[other] == usize::MAX {
                        comp[other] = id;
                        stack.push(other);
                    }
                }
            }
            pieces.push(members);
        }
        pieces
            .into_iter()
            .map(|members| Self::from_faces(self.parent.clone(), Bits::from_indices(nf, &members)))
            .collect()
    }

    pub fn parent(&self) -> &Arc<CellEmbedding> {
        &self.parent
    }
    pub fn genus(&self) -> usize {
        self.genus
    }
    /// Number of boundary circles p.
    pub fn boundary_circles(&self) -> usize {
        self.boundary_circles
    }
    /// Dimension N of H_1 and of H_1 relative to the boundary:
    /// 2g for p <= 1, otherwise 2g + p - 1.
    pub fn homology_rank(&self) -> usize {
        2 * self.genus + self.boundary_circles.saturating_sub(1)
    }
    pub fn faces(&self) -> &Bits {
        &self.faces
    }
    /// Surviving edge indices (primal and dual share them).
    pub fn edges(&self) -> &Bits {
        &self.edges
    }
    pub fn vertices(&self) -> &Bits {
        &self.vertices
    }
    pub fn interior_vertices(&self) -> &Bits {
        &self.interior_vertices
    }
    pub fn boundary_vertices(&self) -> Bits {
        self.vertices.xor(&self.interior_vertices)
    }
    pub fn edge_count(&self) -> usize {
        self.parent.edge_count()
    }
    /// Number of surviving dual vertices |V*|.
    pub fn dual_vertex_count(&self) -> usize {
        self.faces.count()
    }
    pub fn is_whole(&self) -> bool {
        self.faces.count() == self.parent.face_count()
    }
}

/// Connectivity of a face set through shared (surviving-side) edges.
fn face_connected(g: &CellEmbedding, faces: &Bits) -> bool {
    let Some(start) = faces.iter_ones().next() else {
        return false;
    };
    let mut seen = Bits::new(faces.len());
    seen.set(start, true);
    let mut stack = vec![start];
    while let Some(f) = stack.pop() {
        for &d in g.face_darts(f) {
            let other = g.face_of(g.alpha(d));
            if faces.get(other) && !seen.get(other) {
                seen.set(other, true);
                stack.push(other);
            }
        }
    }
    seen == *faces
}
