//! Perfect matchings of the quadri-tiling graph, the mapping to 6-vertex
//! configurations, the polygon pair of a matching, and homology sectors.

pub mod kasteleyn;

use crate::error::{Error, Result};
use crate::homology::{Chain, HomologyBasis, HomologyClass, Side};
use crate::ising::CouplingField;
use crate::numeric::{Bits, Scalar};
use crate::six_vertex::{SixVertexConfig, SixVertexWeights};
use crate::surface::quad::QuadGraph;

pub const MAX_QUAD_VERTICES: usize = 64;

/// A perfect matching, as a set of quad edge indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DimerConfig {
    pub matched: Bits,
}

impl DimerConfig {
    pub fn new(q: &QuadGraph, matched: Bits) -> Result<Self> {
        let mut deg = vec![0u8; q.vertex_count()];
        for e in matched.iter_ones() {
            let (w, b) = q.quad_edge_ends(e);
            deg[w] += 1;
            deg[b] += 1;
        }
        if deg.iter().any(|&d| d != 1) {
            return Err(Error::NotAMatching);
        }
        Ok(DimerConfig { matched })
    }
    pub fn to_indices(&self) -> Vec<usize> {
        self.matched.indices()
    }
}

/// Per-edge dimer weights: 1 on external edges, a_e on primal-parallel
/// edges, b_{e*} on dual-parallel edges.
#[derive(Clone, Debug)]
pub struct DimerWeights<S> {
    pub w: Vec<S>,
}

impl<S: Scalar> DimerWeights<S> {
    pub fn from_six_vertex(q: &QuadGraph, sv: &SixVertexWeights<S>) -> Self {
        let d = q.dart_base();
        let w = (0..q.edge_count())
            .map(|qe| {
                let x = qe % d;
                match qe / d {
                    0 => sv.b[q.base.edge_of(x)].clone(),
                    1 => sv.a[q.base.edge_of(x)].clone(),
                    _ => S::one(),
                }
            })
            .collect();
        DimerWeights { w }
    }
    /// Free-fermion weights a = 2x/(1+x^2), b = (1-x^2)/(1+x^2).
    pub fn from_coupling(q: &QuadGraph, j: &CouplingField<S>) -> Self {
        Self::from_six_vertex(q, &SixVertexWeights::from_coupling(j))
    }
    /// a^2 + b^2 = 1 per base edge.
    pub fn is_free_fermion(&self, q: &QuadGraph) -> bool {
        (0..q.base.edge_count()).all(|e| {
            let ([b1, _], [a1, _]) = q.gadget_edges(e);
            let (a, b) = (self.w[a1].clone(), self.w[b1].clone());
            (a.clone() * a + b.clone() * b).close(&S::one())
        })
    }
    pub fn weight_of(&self, m: &DimerConfig) -> S {
        m.matched
            .iter_ones()
            .fold(S::one(), |acc, e| acc * self.w[e].clone())
    }
}

/// Enumerate all perfect matchings, deterministically: branch on the
/// lowest-index uncovered vertex.
pub fn enumerate_matchings(q: &QuadGraph) -> Result<Vec<DimerConfig>> {
    let nv = q.vertex_count();
    if nv > MAX_QUAD_VERTICES {
        return Err(Error::SizeGuard {
            what: "quad vertices",
            got: nv,
            limit: MAX_QUAD_VERTICES,
        });
    }
    let incident: Vec<[usize; 3]> = (0..nv).map(|v| q.incident_edges(v)).collect();
    let mut covered = vec![false; nv];
    let mut current = Bits::new(q.edge_count());
    let mut out = Vec::new();
    fn rec(
        q: &QuadGraph,
        incident: &[[usize; 3]],
        covered: &mut [bool],
        current: &mut Bits,
        out: &mut Vec<DimerConfig>,
    ) {
        let Some(v) = covered.iter().position(|&c| !c) else {
            out.push(DimerConfig {
                matched: current.clone(),
            });
            return;
        };
        let mut tried = Vec::with_capacity(3);
        for &e in &incident[v] {
            if tried.contains(&e) {
                continue;
            }
            tried.push(e);
            let (w, b) = q.quad_edge_ends(e);
            let other = if w == v { b } else { w };
            if covered[other] {
                continue;
            }
            covered[v] = true;
            covered[other] = true;
            current.set(e, true);
            rec(q, incident, covered, current, out);
            current.set(e, false);
            covered[v] = false;
            covered[other] = false;
        }
    }
    rec(q, &incident, &mut covered, &mut current, &mut out);
    Ok(out)
}

/// Mapping from dimer configurations to 6-vertex configurations: a medial
/// edge is present iff the corresponding external edge is matched. Always
/// valid; one-to-one except at empty decorations where it is two-to-one.
pub fn mapping_ii(q: &QuadGraph, m: &DimerConfig) -> SixVertexConfig {
    let d = q.dart_base();
    let mut edges = Bits::new(d);
    for x in 0..d {
        edges.set(x, m.matched.get(2 * d + x));
    }
    SixVertexConfig { edges }
}

/// All matchings projecting to a given 6-vertex configuration: forced
/// internal edges at non-empty decorations, two internal fillings at empty
/// ones.
pub fn mapping_ii_fiber(q: &QuadGraph, cfg: &SixVertexConfig) -> Result<Vec<DimerConfig>> {
    let d = q.dart_base();
    let mut fixed = Bits::new(q.edge_count());
    for x in 0..d {
        if cfg.edges.get(x) {
            fixed.set(2 * d + x, true);
        }
    }
    let mut empties = Vec::new();
    for e in 0..q.base.edge_count() {
        let ([b1, b2], [a1, a2]) = q.gadget_edges(e);
        let t = crate::six_vertex::classify_vertex(&q.base, cfg, e)?;
        use crate::six_vertex::LocalType::*;
        match t {
            CPlus => {}
            CMinus => empties.push(([b1, b2], [a1, a2])),
            _ => {
                // the two externally uncovered vertices are matched by the
                // unique internal edge joining them
                let uncovered = |qv: usize| !covered_by_external(q, cfg, qv);
                let internal = [b1, b2, a1, a2]
                    .into_iter()
                    .find(|&qe| {
                        let (w, b) = q.quad_edge_ends(qe);
                        uncovered(w) && uncovered(b)
                    })
                    .expect("one internal edge matches the uncovered pair");
                fixed.set(internal, true);
            }
        }
    }
    let mut out = Vec::new();
    for choice in 0u64..1 << empties.len() {
        let mut m = fixed.clone();
        for (i, (bb, aa)) in empties.iter().enumerate() {
            let pair = if choice >> i & 1 == 1 { aa } else { bb };
            m.set(pair[0], true);
            m.set(pair[1], true);
        }
        out.push(DimerConfig::new(q, m)?);
    }
    Ok(out)
}

fn covered_by_external(q: &QuadGraph, cfg: &SixVertexConfig, quad_vertex: usize) -> bool {
    let x = quad_vertex / 2;
    let corner = if quad_vertex % 2 == 0 {
        x
    } else {
        q.base.sigma_inv(x)
    };
    cfg.edges.get(corner)
}

/// The polygon pair of a matching: poly_1 holds base edge e iff the number
/// of matched primal-parallel edges in e's gadget is odd; poly_2 likewise
/// with dual-parallel edges. Equal to Mapping I applied to Mapping II.
pub fn poly(q: &QuadGraph, m: &DimerConfig) -> (Chain, Chain) {
    let ne = q.base.edge_count();
    let mut p1 = Bits::new(ne);
    let mut p2 = Bits::new(ne);
    for e in 0..ne {
        let ([b1, b2], [a1, a2]) = q.gadget_edges(e);
        p1.set(e, m.matched.get(a1) ^ m.matched.get(a2));
        p2.set(e, m.matched.get(b1) ^ m.matched.get(b2));
    }
    (Chain::new(Side::Primal, p1), Chain::new(Side::Dual, p2))
}

/// Homology class of the loops of the superimposition M0 xor M, computed by
/// counting crossings of the quad chain with the dual basis cycles: a quad
/// edge crosses a dual edge e* iff it is a primal-parallel edge of e's
/// gadget.
///
/// With the canonical all-dual-parallel M0 this class equals the class of
/// poly_1(M). Other reference matchings give a well-defined class of the
/// superimposition, but the identification with poly_1 is specific to M0.
pub fn sector_of(
    q: &QuadGraph,
    m: &DimerConfig,
    m0: &DimerConfig,
    basis: &HomologyBasis,
) -> HomologyClass {
    let chain = m.matched.xor(&m0.matched);
    let mut bits = Bits::new(basis.rank());
    for (i, lam) in basis.lambda.iter().enumerate() {
        let mut parity = false;
        for e in lam.edges.iter_ones() {
            let (_, [a1, a2]) = q.gadget_edges(e);
            parity ^= chain.get(a1) ^ chain.get(a2);
        }
        bits.set(i, parity);
    }
    HomologyClass(bits)
}

/// Matchings grouped by sector (the class of poly_1, equivalently of the
/// superimposition with M0), with their weights summed: Z^(alpha) indexed
/// by class mask.
pub fn z_quadri_sectors<S: Scalar>(
    q: &QuadGraph,
    weights: &DimerWeights<S>,
    basis: &HomologyBasis,
) -> Result<Vec<S>> {
    let matchings = enumerate_matchings(q)?;
    let mut acc = vec![S::zero(); 1 << basis.rank()];
    for m in &matchings {
        let (p1, _) = poly(q, m);
        let mask = basis.class_of_unchecked(&p1).mask();
        acc[mask] = acc[mask].clone() + weights.weight_of(m);
    }
    Ok(acc)
}

/// The polygon-pair evaluation of the zero-sector partition function:
/// 2 sum over disjoint pairs (P, P*) with both classes zero of
/// prod_{e in P} a_e prod_{e* in P*} b_{e*}.
pub fn z_quadri_zero_pairs<S: Scalar>(
    q: &QuadGraph,
    sv: &SixVertexWeights<S>,
    basis: &HomologyBasis,
) -> Result<S> {
    let region = crate::surface::region::BoundedSurfaceGraph::whole_arc(q.base.clone());
    let primal = crate::six_vertex::all_polygon_configs(&region, Side::Primal)?;
    let dual = crate::six_vertex::all_polygon_configs(&region, Side::Dual)?;
    let mut total = S::zero();
    for p in &primal {
        if !basis
            .class_of_unchecked(&Chain::new(Side::Primal, p.clone()))
            .is_zero()
        {
            continue;
        }
        let wp = p.iter_ones().fold(S::one(), |acc, e| acc * sv.a[e].clone());
        for pd in &dual {
            if !p.disjoint(pd)
                || !basis
                    .class_of_unchecked(&Chain::new(Side::Dual, pd.clone()))
                    .is_zero()
            {
                continue;
            }
            let w = pd
                .iter_ones()
                .fold(wp.clone(), |acc, e| acc * sv.b[e].clone());
            total = total + w;
        }
    }
    Ok(S::from_int(2) * total)
}

/// Exact distribution of poly_1 under the zero-sector dimer measure,
/// sorted by the polygon's edge set.
pub fn restricted_distribution<S: Scalar>(
    q: &QuadGraph,
    weights: &DimerWeights<S>,
    basis: &HomologyBasis,
) -> Result<Vec<(Bits, S)>> {
    let matchings = enumerate_matchings(q)?;
    let mut acc: std::collections::BTreeMap<Bits, S> = Default::default();
    let mut total = S::zero();
    for m in &matchings {
        let (p1, _) = poly(q, m);
        if !basis.class_of_unchecked(&p1).is_zero() {
            continue;
        }
        let w = weights.weight_of(m);
        total = total + w.clone();
        let slot = acc.entry(p1.edges).or_insert_with(S::zero);
        *slot = slot.clone() + w;
    }
    Ok(acc
        .into_iter()
        .map(|(k, v)| (k, v / total.clone()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::compute_basis;
    use crate::numeric::Q;
    use crate::six_vertex::{config_weight, is_valid, mapping_i};
    use crate::surface::generate::torus_square;
    use crate::surface::quad::quad_graph;
    use crate::surface::region::BoundedSurfaceGraph;

    fn t1_quad() -> QuadGraph {
        quad_graph(&torus_square(1, 1))
    }

    #[test]
    fn matchings_match_subset_oracle_on_t1() {
        // independent oracle: filter all 2^12 edge subsets
        let q = t1_quad();
        let mut oracle = Vec::new();
        for mask in 0u64..1 << q.edge_count() {
            let mut bits = Bits::new(q.edge_count());
            for i in 0..q.edge_count() {
                if mask >> i & 1 == 1 {
                    bits.set(i, true);
                }
            }
            if DimerConfig::new(&q, bits.clone()).is_ok() {
                oracle.push(bits);
            }
        }
        let mut got: Vec<Bits> = enumerate_matchings(&q)
            .unwrap()
            .into_iter()
            .map(|m| m.matched)
            .collect();
        oracle.sort();
        got.sort();
        assert_eq!(oracle, got);
        // M0 is always produced
        assert!(got.contains(&q.m0()));
    }

    #[test]
    fn a_bare_gadget_has_two_internal_matchings() {
        // restricted to a single decoration's four internal edges, the only
        // perfect matchings of the 4-cycle are the two parallel pairs
        let q = crate::surface::generate::planar_patch(1, 1);
        let ([b1, b2], [a1, a2]) = q.gadget_edges(0);
        let internal: Vec<Bits> = enumerate_matchings(&q)
            .unwrap()
            .into_iter()
            .map(|m| m.matched)
            .filter(|m| m.iter_ones().all(|e| [b1, b2, a1, a2].contains(&e)))
            .collect();
        let want = [
            Bits::from_indices(q.edge_count(), &[b1, b2]),
            Bits::from_indices(q.edge_count(), &[a1, a2]),
        ];
        assert_eq!(internal.len(), 2);
        assert!(want.iter().all(|w| internal.contains(w)));
    }

    #[test]
    fn poly_of_m0_is_empty() {
        let q = t1_quad();
        let m0 = DimerConfig::new(&q, q.m0()).unwrap();
        let (p1, p2) = poly(&q, &m0);
        assert!(p1.edges.is_empty());
        assert!(p2.edges.is_empty());
    }

    #[test]
    fn mapping_ii_lands_on_valid_configs_and_matches_poly() {
        let q = t1_quad();
        for m in enumerate_matchings(&q).unwrap() {
            let cfg = mapping_ii(&q, &m);
            assert!(is_valid(&q.base, &cfg));
            let (p1, p2) = mapping_i(&q.base, &cfg).unwrap();
            let (q1, q2) = poly(&q, &m);
            assert_eq!(p1, q1);
            assert_eq!(p2, q2);
        }
    }

    #[test]
    fn mapping_ii_fiber_sizes() {
        // exactly 2 matchings per empty decoration, 1 elsewhere
        let q = t1_quad();
        let matchings = enumerate_matchings(&q).unwrap();
        let mut by_cfg: std::collections::HashMap<Bits, Vec<DimerConfig>> = Default::default();
        for m in &matchings {
            by_cfg
                .entry(mapping_ii(&q, m).edges)
                .or_default()
                .push(m.clone());
        }
        for (cfg_bits, members) in &by_cfg {
            let cfg = SixVertexConfig {
                edges: cfg_bits.clone(),
            };
            let empties = (0..q.base.edge_count())
                .filter(|&e| {
                    crate::six_vertex::classify_vertex(&q.base, &cfg, e).unwrap()
                        == crate::six_vertex::LocalType::CMinus
                })
                .count();
            assert_eq!(members.len(), 1 << empties);
            // and the direct fiber construction agrees
            let mut direct: Vec<Bits> = mapping_ii_fiber(&q, &cfg)
                .unwrap()
                .into_iter()
                .map(|m| m.matched)
                .collect();
            let mut want: Vec<Bits> = members.iter().map(|m| m.matched.clone()).collect();
            direct.sort();
            want.sort();
            assert_eq!(direct, want);
        }
    }

    #[test]
    fn mapping_ii_preserves_weight_iff_free_fermion() {
        let q = t1_quad();
        let j = CouplingField::<Q>::from_ratios(&[(1, 3), (2, 7)]);
        let sv = SixVertexWeights::from_coupling(&j);
        let dw = DimerWeights::from_six_vertex(&q, &sv);
        assert!(dw.is_free_fermion(&q));
        let matchings = enumerate_matchings(&q).unwrap();
        let mut by_cfg: std::collections::HashMap<Bits, Q> = Default::default();
        for m in &matchings {
            let k = mapping_ii(&q, m).edges;
            let slot = by_cfg.entry(k).or_insert_with(<Q as Scalar>::zero);
            *slot = slot.clone() + dw.weight_of(m);
        }
        for (cfg_bits, total) in &by_cfg {
            let cfg = SixVertexConfig {
                edges: cfg_bits.clone(),
            };
            assert_eq!(total, &config_weight(&q.base, &sv, &cfg).unwrap());
        }

        // broken free-fermion weights are detected
        let bad = SixVertexWeights::<Q>::uniform(2, Q::from_ratio(1, 2), Q::from_ratio(1, 2));
        let dwb = DimerWeights::from_six_vertex(&q, &bad);
        assert!(!dwb.is_free_fermion(&q));
        let mut mismatch = false;
        let mut by_cfg: std::collections::HashMap<Bits, Q> = Default::default();
        for m in &matchings {
            let k = mapping_ii(&q, m).edges;
            let slot = by_cfg.entry(k).or_insert_with(<Q as Scalar>::zero);
            *slot = slot.clone() + dwb.weight_of(m);
        }
        for (cfg_bits, total) in &by_cfg {
            let cfg = SixVertexConfig {
                edges: cfg_bits.clone(),
            };
            if total != &config_weight(&q.base, &bad, &cfg).unwrap() {
                mismatch = true;
            }
        }
        assert!(mismatch, "weight preservation must fail off the free-fermion manifold");
    }

    #[test]
    fn superposition_class_equals_poly1_class() {
        for base in [torus_square(1, 1), torus_square(2, 2)] {
            let q = quad_graph(&base);
            let region = BoundedSurfaceGraph::whole_arc(q.base.clone());
            let basis = compute_basis(&region).unwrap();
            let m0 = DimerConfig::new(&q, q.m0()).unwrap();
            assert!(sector_of(&q, &m0, &m0, &basis).is_zero());
            for m in enumerate_matchings(&q).unwrap() {
                let via_loops = sector_of(&q, &m, &m0, &basis);
                let (p1, _) = poly(&q, &m);
                let via_poly = basis.class_of(&p1, &region).unwrap();
                assert_eq!(via_loops, via_poly);
            }
        }
    }

    #[test]
    fn sector_partition_sums_to_full_z() {
        let q = quad_graph(&torus_square(1, 1));
        let region = BoundedSurfaceGraph::whole_arc(q.base.clone());
        let basis = compute_basis(&region).unwrap();
        let j = CouplingField::<Q>::from_ratios(&[(1, 2), (3, 4)]);
        let dw = DimerWeights::from_coupling(&q, &j);
        let sectors = z_quadri_sectors(&q, &dw, &basis).unwrap();
        let full: Q = enumerate_matchings(&q)
            .unwrap()
            .iter()
            .fold(<Q as Scalar>::zero(), |acc, m| acc + dw.weight_of(m));
        let sum = sectors
            .iter()
            .fold(<Q as Scalar>::zero(), |acc, z| acc + z.clone());
        assert_eq!(sum, full);
        // on the 1x1 torus the diagonal sector is empty: poly_1 of that
        // class would need a disjoint dual partner of the same class, and
        // both loops cross their own duals
        assert!(!sectors[0].is_zero());
        assert!(!sectors[1].is_zero());
        assert!(!sectors[2].is_zero());
        assert!(sectors[3].is_zero());

        // on the 2x2 torus every sector carries weight
        let q = quad_graph(&torus_square(2, 2));
        let region = BoundedSurfaceGraph::whole_arc(q.base.clone());
        let basis = compute_basis(&region).unwrap();
        let j = CouplingField::<Q>::uniform(8, 1, 2);
        let dw = DimerWeights::from_coupling(&q, &j);
        let sectors = z_quadri_sectors(&q, &dw, &basis).unwrap();
        assert!(sectors.iter().all(|z| !z.is_zero()));
    }

    #[test]
    fn zero_sector_pair_formula() {
        for base in [torus_square(1, 1), torus_square(2, 2)] {
            let q = quad_graph(&base);
            let region = BoundedSurfaceGraph::whole_arc(q.base.clone());
            let basis = compute_basis(&region).unwrap();
            let j = CouplingField::<Q>::from_ratios(
                &crate::numeric::rng::FieldRng::new(17).unit_field(base.edge_count()),
            );
            let sv = SixVertexWeights::from_coupling(&j);
            let dw = DimerWeights::from_six_vertex(&q, &sv);
            let sectors = z_quadri_sectors(&q, &dw, &basis).unwrap();
            let pairs = z_quadri_zero_pairs(&q, &sv, &basis).unwrap();
            assert_eq!(sectors[0], pairs);
        }
    }
}
