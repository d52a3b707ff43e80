//! Kasteleyn matrices for the quadri-tiling graph: rows are white vertices,
//! columns black vertices (both indexed by base darts, so the reference
//! matching M0 is the diagonal), entries are signed dimer weights.
//!
//! Signs satisfy the face rule: around every face, the number of minus
//! signs is congruent to deg/2 - 1 mod 2. On a surface of genus g there are
//! 2^{2g} inequivalent sign choices; from the reference choice, the class-
//! epsilon matrix flips the sign of the two primal-parallel edges of every
//! gadget whose dual edge lies on the representative of epsilon. The
//! determinant of each matrix is a signed combination of sector partition
//! functions; the signs s_{alpha, eps} are determined empirically from one
//! matching per sector and audited for constancy across each sector.

use crate::dimer::{enumerate_matchings, poly, DimerConfig, DimerWeights};
use crate::error::{Error, Result};
use crate::homology::{HomologyBasis, HomologyClass};
use crate::numeric::{gf2, Bits, Scalar};
use crate::surface::quad::QuadGraph;

#[derive(Clone, Debug)]
pub struct KasteleynMatrix<S> {
    pub sign_class: HomologyClass,
    /// Quad edge -> carries a minus sign.
    pub signs: Bits,
    /// Dense white x black matrix of signed weights (parallel edges summed).
    pub entries: Vec<Vec<S>>,
}

impl<S: Scalar> KasteleynMatrix<S> {
    pub fn det(&self) -> S {
        S::det(self.entries.clone())
    }
}

/// The reference sign assignment: a GF(2) solution of the face system,
/// gauged so that every M0 edge is positive.
fn reference_signs(q: &QuadGraph) -> Result<Bits> {
    let ne = q.edge_count();
    let g = &q.graph;
    let mut rows = Vec::with_capacity(g.face_count());
    let mut rhs = Vec::with_capacity(g.face_count());
    for f in 0..g.face_count() {
        let mut row = Bits::new(ne);
        for &dart in g.face_darts(f) {
            row.flip(g.edge_of(dart));
        }
        rows.push(row);
        rhs.push((g.face_degree(f) / 2 + 1) % 2 == 1);
    }
    let mut signs = gf2::solve(&rows, &rhs, ne).ok_or(Error::SignSystemInfeasible)?;
    // gauge: flip all edges at the black end of every negative M0 edge;
    // vertex flips preserve all face parities
    let mut black_gauge = Bits::new(q.dart_base());
    for x in 0..q.dart_base() {
        if signs.get(x) {
            black_gauge.set(x, true); // M0 edge x joins white x and black x
        }
    }
    for e in 0..ne {
        let (_, b) = q.quad_edge_ends(e);
        if black_gauge.get(b / 2) {
            signs.flip(e);
        }
    }
    debug_assert!((0..q.dart_base()).all(|x| !signs.get(x)));
    Ok(signs)
}

/// Build the Kasteleyn matrix of a sign class.
pub fn build_kasteleyn<S: Scalar>(
    q: &QuadGraph,
    weights: &DimerWeights<S>,
    class: &HomologyClass,
    basis: &HomologyBasis,
) -> Result<KasteleynMatrix<S>> {
    let mut signs = reference_signs(q)?;
    for i in class.0.iter_ones() {
        for e in basis.lambda[i].edges.iter_ones() {
            let (_, [a1, a2]) = q.gadget_edges(e);
            signs.flip(a1);
            signs.flip(a2);
        }
    }
    let n = q.dart_base();
    let mut entries = vec![vec![S::zero(); n]; n];
    for e in 0..q.edge_count() {
        let (r, c) = q.edge_row_col(e);
        let w = if signs.get(e) {
            -weights.w[e].clone()
        } else {
            weights.w[e].clone()
        };
        entries[r][c] = entries[r][c].clone() + w;
    }
    Ok(KasteleynMatrix {
        sign_class: class.clone(),
        signs,
        entries,
    })
}

/// Verify the face rule for a sign assignment.
pub fn face_rule_holds(q: &QuadGraph, signs: &Bits) -> bool {
    let g = &q.graph;
    (0..g.face_count()).all(|f| {
        let minus = g
            .face_darts(f)
            .iter()
            .fold(0usize, |acc, &d| acc + signs.get(g.edge_of(d)) as usize);
        minus % 2 == (g.face_degree(f) / 2 + 1) % 2
    })
}

/// Sign of a matching in the determinant expansion: permutation signature
/// times the product of its entry signs. Defined because parallel edges
/// always carry equal signs (their bigon face has an even minus count).
pub fn matching_sign(q: &QuadGraph, signs: &Bits, m: &DimerConfig) -> i64 {
    let n = q.dart_base();
    let mut perm = vec![usize::MAX; n];
    let mut sign = 1i64;
    for e in m.matched.iter_ones() {
        let (r, c) = q.edge_row_col(e);
        perm[r] = c;
        if signs.get(e) {
            sign = -sign;
        }
    }
    // permutation signature by cycle decomposition
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// The empirical sign table s_{alpha, eps} with an exhaustive constancy
/// audit: every matching in sector alpha has the same sign in det K^(eps).
pub struct SectorSigns {
    /// s[eps_mask][alpha_mask] in {-1, +1}; +1 for empty sectors.
    pub s: Vec<Vec<i64>>,
    pub sector_counts: Vec<usize>,
}

pub fn sector_sign_table(q: &QuadGraph, basis: &HomologyBasis) -> Result<SectorSigns> {
    let n = basis.rank();
    let matchings = enumerate_matchings(q)?;
    let mut sectors: Vec<Vec<&DimerConfig>> = vec![Vec::new(); 1 << n];
    for m in &matchings {
        let (p1, _) = poly(q, m);
        sectors[basis.class_of_unchecked(&p1).mask()].push(m);
    }
    let unit_weights = DimerWeights {
        w: vec![S1::one(); q.edge_count()],
    };
    let mut s = vec![vec![1i64; 1 << n]; 1 << n];
    for eps in 0..1usize << n {
        let k = build_kasteleyn(q, &unit_weights, &HomologyClass::from_mask(n, eps), basis)?;
        for (alpha, members) in sectors.iter().enumerate() {
            let Some(first) = members.first() else {
                continue;
            };
            let sig = matching_sign(q, &k.signs, first);
            for m in members.iter().skip(1) {
                if matching_sign(q, &k.signs, m) != sig {
                    return Err(Error::SignSystemInfeasible);
                }
            }
            s[eps][alpha] = sig;
        }
    }
    Ok(SectorSigns {
        s,
        sector_counts: sectors.iter().map(|v| v.len()).collect(),
    })
}

type S1 = f64; // weight type irrelevant for sign bookkeeping

/// Recover the sector partition functions from the 2^{2g} determinants by
/// solving s . Z = det. Empty sectors are pinned to zero and dropped from
/// the system, which is overdetermined but consistent; the leftover
/// equations are verified. Exact in rational mode.
pub fn sector_from_determinants<S: Scalar>(
    q: &QuadGraph,
    weights: &DimerWeights<S>,
    basis: &HomologyBasis,
) -> Result<Vec<S>> {
    let n = basis.rank();
    let table = sector_sign_table(q, basis)?;
    let dets: Vec<S> = (0..1usize << n)
        .map(|eps| {
            build_kasteleyn(q, weights, &HomologyClass::from_mask(n, eps), basis)
                .map(|k| k.det())
        })
        .collect::<Result<_>>()?;
    let cols: Vec<usize> = (0..1usize << n)
        .filter(|&a| table.sector_counts[a] > 0)
        .collect();
    let mat: Vec<Vec<S>> = table
        .s
        .iter()
        .map(|row| cols.iter().map(|&a| S::from_int(row[a])).collect())
        .collect();
    let partial = solve_overdetermined(mat, dets).ok_or(Error::SingularSignTable)?;
    let mut out = vec![S::zero(); 1 << n];
    for (value, &a) in partial.into_iter().zip(&cols) {
        out[a] = value;
    }
    Ok(out)
}

/// Solve a consistent overdetermined system by Gaussian elimination with
/// first-nonzero pivoting; residual equations must vanish (up to the
/// scalar's native equality). Exact over rationals.
fn solve_overdetermined<S: Scalar>(mut a: Vec<Vec<S>>, mut b: Vec<S>) -> Option<Vec<S>> {
    let rows = b.len();
    let ncols = a.first().map_or(0, |r| r.len());
    if ncols > rows {
        return None;
    }
    for col in 0..ncols {
        let piv = (col..rows).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..rows {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone() / a[col][col].clone();
            for c in col..ncols {
                a[r][c] = a[r][c].clone() - f.clone() * a[col][c].clone();
            }
            b[r] = b[r].clone() - f.clone() * b[col].clone();
        }
    }
    for r in ncols..rows {
        if !b[r].close(&S::zero()) {
            return None;
        }
    }
    Some(
        (0..ncols)
            .map(|i| b[i].clone() / a[i][i].clone())
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::compute_basis;
    use crate::ising::CouplingField;
    use crate::numeric::rng::FieldRng;
    use crate::numeric::Q;
    use crate::surface::generate::{planar_patch, torus_square};
    use crate::surface::quad::quad_graph;
    use crate::surface::region::BoundedSurfaceGraph;

    #[test]
    fn face_rule_and_m0_positivity() {
        for q in [
            quad_graph(&torus_square(1, 1)),
            quad_graph(&torus_square(2, 2)),
            planar_patch(2, 2),
        ] {
            let signs = reference_signs(&q).unwrap();
            assert!(face_rule_holds(&q, &signs));
            for x in 0..q.dart_base() {
                assert!(!signs.get(x), "M0 edge {x} must be positive");
            }
        }
    }

    #[test]
    fn planar_determinant_counts_weighted_matchings() {
        let q = planar_patch(2, 2);
        let region = BoundedSurfaceGraph::whole_arc(q.base.clone());
        let basis = compute_basis(&region).unwrap();
        assert_eq!(basis.rank(), 0);
        let j = CouplingField::<Q>::from_ratios(&FieldRng::new(4).unit_field(q.base.edge_count()));
        let dw = DimerWeights::from_coupling(&q, &j);
        let k = build_kasteleyn(&q, &dw, &HomologyClass::zero(0), &basis).unwrap();
        let z: Q = enumerate_matchings(&q)
            .unwrap()
            .iter()
            .fold(<Q as Scalar>::zero(), |acc, m| acc + dw.weight_of(m));
        let d = k.det();
        assert!(d == z || d == -z.clone());
        // with the M0 normalization the determinant is positive
        assert_eq!(d, z);
    }

    #[test]
    fn torus_sector_recovery_t1_t2() {
        for base in [torus_square(1, 1), torus_square(2, 2)] {
            let q = quad_graph(&base);
            let region = BoundedSurfaceGraph::whole_arc(q.base.clone());
            let basis = compute_basis(&region).unwrap();
            let mut rng = FieldRng::new(23);
            for _ in 0..3 {
                let j = CouplingField::<Q>::from_ratios(&rng.unit_field(base.edge_count()));
                let dw = DimerWeights::from_coupling(&q, &j);
                let by_det = sector_from_determinants(&q, &dw, &basis).unwrap();
                let by_enum = crate::dimer::z_quadri_sectors(&q, &dw, &basis).unwrap();
                assert_eq!(by_det, by_enum);
            }
        }
    }

    #[test]
    fn flipped_class_signs_still_satisfy_face_rule() {
        let q = quad_graph(&torus_square(2, 2));
        let region = BoundedSurfaceGraph::whole_arc(q.base.clone());
        let basis = compute_basis(&region).unwrap();
        let dw = DimerWeights::<Q>::from_coupling(
            &q,
            &CouplingField::uniform(q.base.edge_count(), 1, 2),
        );
        for class in HomologyClass::all(2) {
            let k = build_kasteleyn(&q, &dw, &class, &basis).unwrap();
            assert!(face_rule_holds(&q, &k.signs));
        }
    }
}
