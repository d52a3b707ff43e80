//! Z/2 chain algebra on surface regions: polygon configurations, cycle
//! spaces, homology and relative-homology bases, classes and the
//! intersection form.
//!
//! Primal and dual edges share indices, so a chain is a side marker plus a
//! bit set over edge indices, and the intersection form between a primal and
//! a dual chain is the parity of the shared index set.
//!
//! Bases pair to the identity: `lambda` representatives are dual cycles
//! (a basis of H_1), `gamma` representatives are primal relative cycles
//! (a basis of H_1 relative to the boundary), and
//! `(lambda_i | gamma_j) = delta_ij`.

use crate::error::{Error, Result};
use crate::numeric::{gf2, Bits};
use crate::surface::region::BoundedSurfaceGraph;

pub const MAX_CYCLE_DIM: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Primal,
    Dual,
}

/// A Z/2 edge set on one side of the graph. Addition is symmetric
/// difference.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chain {
    pub side: Side,
    pub edges: Bits,
}

impl Chain {
    pub fn new(side: Side, edges: Bits) -> Self {
        Chain { side, edges }
    }
    pub fn empty(side: Side, edge_count: usize) -> Self {
        Chain {
            side,
            edges: Bits::new(edge_count),
        }
    }
    pub fn plus(&self, other: &Chain) -> Result<Chain> {
        if self.side != other.side {
            return Err(Error::SameSide);
        }
        Ok(Chain {
            side: self.side,
            edges: self.edges.xor(&other.edges),
        })
    }
}

/// Parity of the number of crossings between a primal and a dual chain:
/// a primal edge and its dual cross exactly once, all other pairs never.
pub fn intersection(a: &Chain, b: &Chain) -> Result<bool> {
    if a.side == b.side {
        return Err(Error::SameSide);
    }
    Ok(a.edges.parity_and(&b.edges))
}

/// Homology class coordinates against a fixed basis (length N bit vector).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HomologyClass(pub Bits);

impl HomologyClass {
    pub fn zero(n: usize) -> Self {
        HomologyClass(Bits::new(n))
    }
    pub fn rank(&self) -> usize {
        self.0.len()
    }
    pub fn plus(&self, other: &HomologyClass) -> HomologyClass {
        HomologyClass(self.0.xor(&other.0))
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    /// Pairing of two class coordinate vectors (bases are dual to each
    /// other, so the form is the dot product).
    pub fn pair(&self, other: &HomologyClass) -> bool {
        self.0.parity_and(&other.0)
    }
    pub fn to_hex(&self) -> String {
        self.0.to_hex()
    }
    /// Coordinates as a little-endian integer mask.
    pub fn mask(&self) -> usize {
        self.0.iter_ones().fold(0usize, |m, i| m | 1 << i)
    }
    pub fn from_mask(n: usize, mask: usize) -> Self {
        let mut b = Bits::new(n);
        for i in 0..n {
            if mask >> i & 1 == 1 {
                b.set(i, true);
            }
        }
        HomologyClass(b)
    }
    /// All 2^N classes in lexicographic order of their bit masks.
    pub fn all(n: usize) -> Vec<HomologyClass> {
        assert!(n < 24);
        (0u32..1 << n)
            .map(|m| {
                let mut b = Bits::new(n);
                for i in 0..n {
                    if m >> i & 1 == 1 {
                        b.set(i, true);
                    }
                }
                HomologyClass(b)
            })
            .collect()
    }
}

/// Is `c` a polygon configuration on the region: even degree at every
/// vertex, except that primal chains are unconstrained at boundary
/// vertices. Dual chains must be even everywhere. Edges outside the region
/// are not allowed.
pub fn is_polygon_config(c: &Chain, region: &BoundedSurfaceGraph) -> bool {
    if !c.edges.and(region.edges()).eq(&c.edges) {
        return false;
    }
    for row in incidence_rows(region, c.side) {
        if row.constraint && row.bits.parity_and(&c.edges) {
            return false;
        }
    }
    true
}

pub(crate) struct IncidenceRow {
    pub bits: Bits,
    /// false for primal boundary vertices (no evenness required there)
    pub constraint: bool,
}

/// Incidence rows over surviving edges. Primal side: one row per surviving
/// vertex (odd-incidence of non-loop edges); dual side: one row per
/// surviving face. Loops at a vertex/face contribute 2 to its degree and
/// thus never appear in a row.
pub(crate) fn incidence_rows(region: &BoundedSurfaceGraph, side: Side) -> Vec<IncidenceRow> {
    let g = region.parent();
    let ne = g.edge_count();
    let mut rows = Vec::new();
    match side {
        Side::Primal => {
            for v in region.vertices().iter_ones() {
                let mut bits = Bits::new(ne);
                for e in region.edges().iter_ones() {
                    let [a, b] = g.edge_endpoints(e);
                    if (a == v) ^ (b == v) {
                        bits.set(e, true);
                    }
                }
                rows.push(IncidenceRow {
                    bits,
                    constraint: region.interior_vertices().get(v),
                });
            }
        }
        Side::Dual => {
            for f in region.faces().iter_ones() {
                let mut bits = Bits::new(ne);
                for e in region.edges().iter_ones() {
                    let [a, b] = g.edge_faces(e);
                    if (a == f) ^ (b == f) {
                        bits.set(e, true);
                    }
                }
                rows.push(IncidenceRow { bits, constraint: true });
            }
        }
    }
    rows
}

/// Basis of the space of polygon configurations of the region on the given
/// side (relative cycles for the primal side, cycles for the dual side).
pub fn cycle_space_basis(region: &BoundedSurfaceGraph, side: Side) -> Result<Vec<Bits>> {
    let g = region.parent();
    let ne = g.edge_count();
    let mut rows: Vec<Bits> = incidence_rows(region, side)
        .into_iter()
        .filter(|r| r.constraint)
        .map(|r| r.bits)
        .collect();
    // edges outside the region are forbidden: unit constraint per edge
    for e in 0..ne {
        if !region.edges().get(e) {
            rows.push(Bits::from_indices(ne, &[e]));
        }
    }
    let basis = gf2::kernel_basis(&rows, ne);
    if basis.len() > MAX_CYCLE_DIM {
        return Err(Error::SizeGuard {
            what: "cycle space dimension",
            got: basis.len(),
            limit: MAX_CYCLE_DIM,
        });
    }
    Ok(basis)
}

/// Homology and relative-homology bases with identity intersection matrix.
#[derive(Clone, Debug)]
pub struct HomologyBasis {
    /// Dual cycles representing a basis of H_1.
    pub lambda: Vec<Chain>,
    /// Primal relative cycles representing a basis of H_1 rel boundary.
    pub gamma: Vec<Chain>,
}

impl HomologyBasis {
    pub fn rank(&self) -> usize {
        self.lambda.len()
    }

    /// Class coordinates of a polygon configuration: primal chains pair
    /// against the lambda representatives, dual chains against gamma.
    pub fn class_of(&self, c: &Chain, region: &BoundedSurfaceGraph) -> Result<HomologyClass> {
        if !is_polygon_config(c, region) {
            return Err(Error::NotACycle);
        }
        Ok(self.class_of_unchecked(c))
    }

    pub fn class_of_unchecked(&self, c: &Chain) -> HomologyClass {
        let reps = match c.side {
            Side::Primal => &self.lambda,
            Side::Dual => &self.gamma,
        };
        let mut bits = Bits::new(self.rank());
        for (i, rep) in reps.iter().enumerate() {
            bits.set(i, rep.edges.parity_and(&c.edges));
        }
        HomologyClass(bits)
    }

    /// The fixed representative of a class: the mod-2 union of the gamma
    /// paths selected by the class coordinates.
    pub fn representative(&self, class: &HomologyClass, edge_count: usize) -> Chain {
        let mut edges = Bits::new(edge_count);
        for i in class.0.iter_ones() {
            edges.xor_assign(&self.gamma[i].edges);
        }
        Chain::new(Side::Primal, edges)
    }
}

/// Compute a homology basis for the region.
///
/// Closed surfaces use a tree-cotree decomposition: a spanning tree of the
/// primal graph, a spanning cotree of the dual disjoint from it, and one
/// (lambda, gamma) pair per leftover edge (the dual and primal fundamental
/// cycles). The pairing matrix is automatically the identity because the
/// only index two such cycles can share is the leftover edge itself.
///
/// Regions with boundary start from deterministic kernel bases of the dual
/// cycle space and of the primal relative cycle space, seeded with shortest
/// boundary-to-boundary paths; a GF(2) change of basis on the gamma side
/// then makes the pairing the identity.
pub fn compute_basis(region: &BoundedSurfaceGraph) -> Result<HomologyBasis> {
    let n = region.homology_rank();
    let ne = region.parent().edge_count();
    if region.boundary_circles() == 0 {
        let basis = tree_cotree_basis(region);
        assert_eq!(basis.lambda.len(), n, "tree-cotree rank mismatch");
        return Ok(basis);
    }
    // generating sets
    let dual_cycles = cycle_space_basis(region, Side::Dual)?;
    let mut rel_cycles = boundary_path_seeds(region);
    rel_cycles.extend(cycle_space_basis(region, Side::Primal)?);

    // pairing matrix rows: one per dual cycle, columns = rel cycles
    let pair = |lam: &Bits, gam: &Bits| lam.parity_and(gam);
    // select n independent rows/cols greedily so the submatrix is invertible
    let mut sel_l: Vec<usize> = Vec::new();
    let mut sel_g: Vec<usize> = Vec::new();
    // residual matrix by Gaussian elimination on candidate pairs
    let mut mat: Vec<Vec<bool>> = dual_cycles
        .iter()
        .map(|l| rel_cycles.iter().map(|g| pair(l, g)).collect())
        .collect();
    let mut used_rows = vec![false; dual_cycles.len()];
    for col in 0..rel_cycles.len() {
        if sel_g.len() == n {
            break;
        }
        if let Some(r) = (0..dual_cycles.len()).find(|&r| !used_rows[r] && mat[r][col]) {
            used_rows[r] = true;
            sel_l.push(r);
            sel_g.push(col);
            let pivot_row = mat[r].clone();
            for (rr, row) in mat.iter_mut().enumerate() {
                if rr != r && row[col] {
                    for (vv, pv) in row.iter_mut().zip(&pivot_row) {
                        *vv ^= pv;
                    }
                }
            }
        }
    }
    if sel_g.len() != n {
        return Err(Error::NotACycle);
    }
    let lambda: Vec<Bits> = sel_l.iter().map(|&i| dual_cycles[i].clone()).collect();
    let picked: Vec<Bits> = sel_g.iter().map(|&i| rel_cycles[i].clone()).collect();
    // change of basis on gamma: gamma' = M^-1 . picked where M[i][j] =
    // (lambda_i | picked_j)
    let m_rows: Vec<Bits> = lambda
        .iter()
        .map(|l| {
            let mut row = Bits::new(n);
            for (j, g) in picked.iter().enumerate() {
                row.set(j, pair(l, g));
            }
            row
        })
        .collect();
    let minv = gf2::invert(&m_rows, n).ok_or(Error::NotACycle)?;
    let gamma: Vec<Bits> = (0..n)
        .map(|j| {
            let mut acc = Bits::new(ne);
            for k in 0..n {
                if minv[k].get(j) {
                    acc.xor_assign(&picked[k]);
                }
            }
            acc
        })
        .collect();
    let basis = HomologyBasis {
        lambda: lambda.into_iter().map(|b| Chain::new(Side::Dual, b)).collect(),
        gamma: gamma.into_iter().map(|b| Chain::new(Side::Primal, b)).collect(),
    };
    debug_assert!(pairing_is_identity(&basis));
    Ok(basis)
}

fn pairing_is_identity(basis: &HomologyBasis) -> bool {
    let n = basis.rank();
    (0..n).all(|i| {
        (0..n).all(|j| basis.lambda[i].edges.parity_and(&basis.gamma[j].edges) == (i == j))
    })
}

/// Tree-cotree on a closed surface: BFS spanning tree in the primal (edges
/// in index order), BFS spanning cotree in the dual avoiding tree edges,
/// fundamental cycles of the 2g leftover edges.
fn tree_cotree_basis(region: &BoundedSurfaceGraph) -> HomologyBasis {
    let g = region.parent();
    let ne = g.edge_count();
    let tree = spanning_forest(ne, g.vertex_count(), |e| g.edge_endpoints(e), |_| true);
    let cotree = spanning_forest(ne, g.face_count(), |e| g.edge_faces(e), |e| !tree.in_forest[e]);
    let leftover: Vec<usize> = (0..ne)
        .filter(|&e| !tree.in_forest[e] && !cotree.in_forest[e])
        .collect();
    assert_eq!(leftover.len(), 2 * region.genus());
    let lambda: Vec<Chain> = leftover
        .iter()
        .map(|&e| Chain::new(Side::Dual, cotree.fundamental_cycle(e, |e| g.edge_faces(e))))
        .collect();
    let gamma: Vec<Chain> = leftover
        .iter()
        .map(|&e| Chain::new(Side::Primal, tree.fundamental_cycle(e, |e| g.edge_endpoints(e))))
        .collect();
    let basis = HomologyBasis { lambda, gamma };
    debug_assert!(pairing_is_identity(&basis));
    basis
}

struct Forest {
    in_forest: Vec<bool>,
    parent_edge: Vec<Option<usize>>, // per node
    parent_node: Vec<Option<usize>>,
    depth: Vec<usize>,
}

fn spanning_forest(
    ne: usize,
    nodes: usize,
    ends: impl Fn(usize) -> [usize; 2],
    allowed: impl Fn(usize) -> bool,
) -> Forest {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nodes];
    for e in 0..ne {
        if !allowed(e) {
            continue;
        }
        let [a, b] = ends(e);
        if a != b {
            adj[a].push((e, b));
            adj[b].push((e, a));
        }
    }
    let mut f = Forest {
        in_forest: vec![false; ne],
        parent_edge: vec![None; nodes],
        parent_node: vec![None; nodes],
        depth: vec![0; nodes],
    };
    let mut visited = vec![false; nodes];
    for root in 0..nodes {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &(e, v) in &adj[u] {
                if !visited[v] {
                    visited[v] = true;
                    f.in_forest[e] = true;
                    f.parent_edge[v] = Some(e);
                    f.parent_node[v] = Some(u);
                    f.depth[v] = f.depth[u] + 1;
                    queue.push_back(v);
                }
            }
        }
    }
    f
}

impl Forest {
    /// Cycle formed by non-forest edge e and the forest path between its
    /// endpoints.
    fn fundamental_cycle(&self, e: usize, ends: impl Fn(usize) -> [usize; 2]) -> Bits {
        let ne = self.in_forest.len();
        let mut bits = Bits::new(ne);
        bits.set(e, true);
        let [mut a, mut b] = ends(e);
        while a != b {
            if self.depth[a] >= self.depth[b] {
                bits.flip(self.parent_edge[a].expect("forest path"));
                a = self.parent_node[a].unwrap();
            } else {
                bits.flip(self.parent_edge[b].expect("forest path"));
                b = self.parent_node[b].unwrap();
            }
        }
        bits
    }
}

/// Shortest primal paths from the first boundary circle's vertices to each
/// other circle, BFS with lexicographic tie-breaking on edge indices. These
/// seed the relative-cycle generating set so the boundary part of the basis
/// uses geodesic representatives.
fn boundary_path_seeds(region: &BoundedSurfaceGraph) -> Vec<Bits> {
    let g = region.parent();
    let ne = g.edge_count();
    // group boundary vertices by removed block when available, else by
    // connectivity along non-surviving incidence; use removed_blocks when set
    let groups: Vec<Vec<usize>> = if !region.removed_blocks.is_empty() {
        region
            .removed_blocks
            .iter()
            .map(|block| {
                let mut vs: Vec<usize> = Vec::new();
                for &f in block {
                    for &d in g.face_darts(f) {
                        let v = g.vertex_of(d);
                        if region.vertices().get(v) && !vs.contains(&v) {
                            vs.push(v);
                        }
                    }
                }
                vs.sort();
                vs
            })
            .collect()
    } else {
        // single group: all boundary vertices (paths not needed)
        vec![region.boundary_vertices().indices()]
    };
    if groups.len() < 2 {
        return Vec::new();
    }
    // BFS from group 0 restricted to surviving edges
    let mut dist = vec![usize::MAX; g.vertex_count()];
    let mut reach_edge = vec![None; g.vertex_count()];
    let mut reach_from = vec![None; g.vertex_count()];
    let mut queue = std::collections::VecDeque::new();
    for &v in &groups[0] {
        dist[v] = 0;
        queue.push_back(v);
    }
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); g.vertex_count()];
    for e in region.edges().iter_ones() {
        let [a, b] = g.edge_endpoints(e);
        if a != b {
            adj[a].push((e, b));
            adj[b].push((e, a));
        }
    }
    for l in adj.iter_mut() {
        l.sort();
    }
    while let Some(u) = queue.pop_front() {
        for &(e, v) in &adj[u] {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                reach_edge[v] = Some(e);
                reach_from[v] = Some(u);
                queue.push_back(v);
            }
        }
    }
    groups[1..]
        .iter()
        .map(|group| {
            let mut best: Option<usize> = None;
            for &v in group {
                if dist[v] == usize::MAX {
                    continue;
                }
                best = match best {
                    None => Some(v),
                    Some(b) if dist[v] < dist[b] || (dist[v] == dist[b] && v < b) => Some(v),
                    keep => keep,
                };
            }
            let mut bits = Bits::new(ne);
            if let Some(mut v) = best {
                while let (Some(e), Some(u)) = (reach_edge[v], reach_from[v]) {
                    bits.set(e, true);
                    v = u;
                }
            }
            bits
        })
        .collect()
}

/// Check the orthogonality identity
/// `sum_eps (-1)^{(tau|eps)} (-1)^{(tau'|eps)} = 2^N delta_{tau,tau'}`
/// over all class pairs; returns the list of violations (empty = pass).
pub fn verify_orthogonality(n: usize) -> Vec<(HomologyClass, HomologyClass, i64)> {
    let classes = HomologyClass::all(n);
    let mut bad = Vec::new();
    for t in &classes {
        for t2 in &classes {
            let total: i64 = classes
                .iter()
                .map(|eps| {
                    let s = (t.pair(eps) as i64 + t2.pair(eps) as i64) % 2;
                    if s == 1 {
                        -1
                    } else {
                        1
                    }
                })
                .sum();
            let expect = if t == t2 { 1i64 << n } else { 0 };
            if total != expect {
                bad.push((t.clone(), t2.clone(), total));
            }
        }
    }
    bad
}

/// Restrict a representative chain to a region: the edge set intersection.
pub fn restrict_representative(rep: &Chain, piece: &BoundedSurfaceGraph) -> Chain {
    Chain::new(rep.side, rep.edges.and(piece.edges()))
}
