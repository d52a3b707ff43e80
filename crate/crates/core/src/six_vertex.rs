//! The 6-vertex model on the medial graph, in the edge-subset picture.
//!
//! Medial edges are indexed by base corners (= base darts): the medial edge
//! of corner c(x) joins the medial vertices of edge(x) and edge(sigma x).
//! Around the medial vertex of base edge e = {d, alpha d} the four medial
//! edges are, counterclockwise, the corners
//! `[c(d), c(sigma^-1 d), c(alpha d), c(sigma^-1 alpha d)]`;
//! between consecutive ones sit, alternately, the two endpoints of e and
//! the two faces bordering e.
//!
//! Local states with two present edges adjacent around a *face* corner are
//! A-type (weight a_e; the separating edge is the primal edge e); around a
//! *vertex* corner they are B-type (weight b_{e*}; the separating edge is
//! the dual edge e*). Empty and full states are the two C-types (weight 1).

use crate::error::{Error, Result};
use crate::homology::{Chain, Side};
use crate::ising::CouplingField;
use crate::numeric::{Bits, Scalar};
use crate::surface::embedding::CellEmbedding;

/// Subset enumeration guard for the direct partition-function route.
pub const MAX_MEDIAL_EDGES: usize = 20;

/// A 6-vertex configuration: a subset of medial edges, indexed by corners.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SixVertexConfig {
    pub edges: Bits,
}

impl SixVertexConfig {
    pub fn empty(base: &CellEmbedding) -> Self {
        SixVertexConfig {
            edges: Bits::new(base.dart_count()),
        }
    }
    pub fn complement(&self) -> Self {
        let mut edges = Bits::new(self.edges.len());
        for i in 0..self.edges.len() {
            edges.set(i, !self.edges.get(i));
        }
        SixVertexConfig { edges }
    }
    pub fn to_hex(&self) -> String {
        self.edges.to_hex()
    }
}

/// Per-vertex weights A_v, B_v (C_v = 1), stored per base edge.
#[derive(Clone, Debug)]
pub struct SixVertexWeights<S> {
    pub a: Vec<S>,
    pub b: Vec<S>,
}

impl<S: Scalar> SixVertexWeights<S> {
    pub fn new(a: Vec<S>, b: Vec<S>) -> Self {
        assert_eq!(a.len(), b.len());
        SixVertexWeights { a, b }
    }
    pub fn uniform(edges: usize, a: S, b: S) -> Self {
        SixVertexWeights {
            a: vec![a; edges],
            b: vec![b; edges],
        }
    }
    /// Free-fermion weights from Ising couplings:
    /// a = 2x/(1+x^2), b = (1-x^2)/(1+x^2).
    pub fn from_coupling(j: &CouplingField<S>) -> Self {
        SixVertexWeights {
            a: (0..j.len()).map(|e| j.sech_2j(e)).collect(),
            b: (0..j.len()).map(|e| j.tanh_2j(e)).collect(),
        }
    }
    /// a^2 + b^2 = 1 on every vertex (exact in rational mode).
    pub fn is_free_fermion(&self) -> bool {
        self.a.iter().zip(&self.b).all(|(a, b)| {
            (a.clone() * a.clone() + b.clone() * b.clone()).close(&S::one())
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocalType {
    APlus,
    AMinus,
    BPlus,
    BMinus,
    CPlus,
    CMinus,
}

impl LocalType {
    pub fn is_a(self) -> bool {
        matches!(self, LocalType::APlus | LocalType::AMinus)
    }
    pub fn is_b(self) -> bool {
        matches!(self, LocalType::BPlus | LocalType::BMinus)
    }
}

/// The four corners around the medial vertex of edge e, counterclockwise.
pub fn corners_around(base: &CellEmbedding, e: usize) -> [usize; 4] {
    let [d, ad] = base.edge_darts(e);
    [d, base.sigma_inv(d), ad, base.sigma_inv(ad)]
}

/// Classify the local state of `cfg` at the medial vertex of base edge `e`.
pub fn classify_vertex(
    base: &CellEmbedding,
    cfg: &SixVertexConfig,
    e: usize,
) -> Result<LocalType> {
    let c = corners_around(base, e);
    let mask = (0..4).fold(0u8, |m, i| m | (cfg.edges.get(c[i]) as u8) << i);
    Ok(match mask {
        0b0000 => LocalType::CMinus,
        0b1111 => LocalType::CPlus,
        // pair adjacent around a face corner: primal edge separates
        0b1001 => LocalType::APlus,  // corners 3,0
        0b0110 => LocalType::AMinus, // corners 1,2
        // pair adjacent around a vertex corner: dual edge separates
        0b0011 => LocalType::BPlus,  // corners 0,1
        0b1100 => LocalType::BMinus, // corners 2,3
        _ => return Err(Error::InvalidLocalConfig(e)),
    })
}

pub fn is_valid(base: &CellEmbedding, cfg: &SixVertexConfig) -> bool {
    (0..base.edge_count()).all(|e| classify_vertex(base, cfg, e).is_ok())
}

/// Product of local weights (A, B or 1 per medial vertex).
pub fn config_weight<S: Scalar>(
    base: &CellEmbedding,
    weights: &SixVertexWeights<S>,
    cfg: &SixVertexConfig,
) -> Result<S> {
    let mut w = S::one();
    for e in 0..base.edge_count() {
        match classify_vertex(base, cfg, e)? {
            t if t.is_a() => w = w * weights.a[e].clone(),
            t if t.is_b() => w = w * weights.b[e].clone(),
            _ => {}
        }
    }
    Ok(w)
}

/// Mapping from 6-vertex configurations to pairs of polygon configurations:
/// each A-vertex contributes its primal edge, each B-vertex its dual edge.
/// The pair never crosses and its union is null-homologous.
pub fn mapping_i(base: &CellEmbedding, cfg: &SixVertexConfig) -> Result<(Chain, Chain)> {
    let ne = base.edge_count();
    let mut p = Bits::new(ne);
    let mut pd = Bits::new(ne);
    for e in 0..ne {
        match classify_vertex(base, cfg, e)? {
            t if t.is_a() => p.set(e, true),
            t if t.is_b() => pd.set(e, true),
            _ => {}
        }
    }
    Ok((Chain::new(Side::Primal, p), Chain::new(Side::Dual, pd)))
}

/// Union-find with parity, for two-coloring the complement regions.
struct ParityUf {
    parent: Vec<usize>,
    to_parent: Vec<bool>,
}

impl ParityUf {
    fn new(n: usize) -> Self {
        ParityUf {
            parent: (0..n).collect(),
            to_parent: vec![false; n],
        }
    }
    fn find(&mut self, x: usize) -> (usize, bool) {
        if self.parent[x] == x {
            return (x, false);
        }
        let (root, p) = self.find(self.parent[x]);
        self.parent[x] = root;
        self.to_parent[x] ^= p;
        (root, self.to_parent[x])
    }
    /// Join with relative parity; returns true on a parity conflict.
    fn union(&mut self, x: usize, y: usize, parity: bool) -> bool {
        let (rx, px) = self.find(x);
        let (ry, py) = self.find(y);
        if rx == ry {
            return px ^ py != parity;
        }
        self.parent[rx] = ry;
        self.to_parent[rx] = px ^ py ^ parity;
        false
    }
}

/// The two 6-vertex configurations mapping to a given non-crossing polygon
/// pair whose union is null-homologous. The complement regions of P u P*
/// are two-colored by a parity union-find over rhombus quarters; a parity
/// conflict means the union is not null-homologous.
pub fn mapping_i_fiber(
    base: &CellEmbedding,
    p: &Chain,
    p_dual: &Chain,
) -> Result<[SixVertexConfig; 2]> {
    assert_eq!(p.side, Side::Primal);
    assert_eq!(p_dual.side, Side::Dual);
    if let Some(e) = p.edges.and(&p_dual.edges).iter_ones().next() {
        return Err(Error::InvalidLocalConfig(e));
    }
    let nd = base.dart_count();
    // quarter cells: 2x = left of dart x (the corner-c(x) side),
    //                2x+1 = right of dart x (the face(x) side)
    let mut uf = ParityUf::new(2 * nd);
    for x in 0..nd {
        let e = base.edge_of(x);
        // crossing the primal edge flips iff e is in P
        if uf.union(2 * x, 2 * x + 1, p.edges.get(e)) {
            return Err(Error::NotNullHomologous);
        }
        // crossing the dual edge flips iff e* is in P*
        if uf.union(2 * x + 1, 2 * base.alpha(x), p_dual.edges.get(e)) {
            return Err(Error::NotNullHomologous);
        }
        // corner c(x): quarters merge across the vertex-to-face seam
        if uf.union(2 * x, 2 * base.sigma(x) + 1, false) {
            return Err(Error::NotNullHomologous);
        }
    }
    let mut one = Bits::new(nd);
    let (root0, _) = uf.find(0);
    for x in 0..nd {
        // the medial edge of corner c(x) lies in the cell of quarter (x, L)
        let (root, parity) = uf.find(2 * x);
        debug_assert_eq!(root, root0, "surface is connected");
        one.set(x, parity);
    }
    let a = SixVertexConfig { edges: one };
    let b = a.complement();
    debug_assert!(is_valid(base, &a) && is_valid(base, &b));
    Ok([a, b])
}

/// Whether the union of a primal and a dual polygon configuration is
/// null-homologous (two-colorable complement).
pub fn union_is_null_homologous(base: &CellEmbedding, p: &Chain, p_dual: &Chain) -> bool {
    mapping_i_fiber(base, p, p_dual).is_ok()
}

/// Both evaluations of the 6-vertex partition function.
#[derive(Clone, Debug)]
pub struct SixVertexPartition<S> {
    /// Direct sum over valid configurations of the product of local weights.
    pub direct: S,
    /// Twice the sum over non-crossing null-homologous polygon pairs of
    /// prod a_e prod b_{e*}.
    pub pair_route: S,
}

pub fn z_six_vertex<S: Scalar>(
    base: &CellEmbedding,
    weights: &SixVertexWeights<S>,
) -> Result<SixVertexPartition<S>> {
    let nd = base.dart_count();
    if nd > MAX_MEDIAL_EDGES {
        return Err(Error::SizeGuard {
            what: "medial edges",
            got: nd,
            limit: MAX_MEDIAL_EDGES,
        });
    }
    let ne = base.edge_count();
    let corners: Vec<[usize; 4]> = (0..ne).map(|e| corners_around(base, e)).collect();
    let mut direct = S::zero();
    'outer: for mask in 0u64..1 << nd {
        let mut w = S::one();
        for (e, c) in corners.iter().enumerate() {
            let m = (0..4).fold(0u8, |m, i| m | ((mask >> c[i] & 1) as u8) << i);
            match m {
                0b0000 | 0b1111 => {}
                0b1001 | 0b0110 => w = w * weights.a[e].clone(),
                0b0011 | 0b1100 => w = w * weights.b[e].clone(),
                _ => continue 'outer,
            }
        }
        direct = direct + w;
    }

    let region = crate::surface::region::BoundedSurfaceGraph::whole(base.clone());
    let primal = all_polygon_configs(&region, Side::Primal)?;
    let dual = all_polygon_configs(&region, Side::Dual)?;
    let mut pair_route = S::zero();
    for p in &primal {
        let wp = p
            .iter_ones()
            .fold(S::one(), |acc, e| acc * weights.a[e].clone());
        for pd in &dual {
            if !p.disjoint(pd) {
                continue;
            }
            if !union_is_null_homologous(
                base,
                &Chain::new(Side::Primal, p.clone()),
                &Chain::new(Side::Dual, pd.clone()),
            ) {
                continue;
            }
            let w = pd
                .iter_ones()
                .fold(wp.clone(), |acc, e| acc * weights.b[e].clone());
            pair_route = pair_route + w;
        }
    }
    pair_route = S::from_int(2) * pair_route;
    Ok(SixVertexPartition { direct, pair_route })
}

pub(crate) fn all_polygon_configs(
    region: &crate::surface::region::BoundedSurfaceGraph,
    side: Side,
) -> Result<Vec<Bits>> {
    let gens = crate::homology::cycle_space_basis(region, side)?;
    if gens.len() > 20 {
        return Err(Error::SizeGuard {
            what: "materialized cycle space dimension",
            got: gens.len(),
            limit: 20,
        });
    }
    let mut out = Vec::with_capacity(1 << gens.len());
    crate::numeric::gf2::for_each_in_span(&gens, region.parent().edge_count(), |b, _| {
        out.push(b.clone())
    });
    Ok(out)
}
