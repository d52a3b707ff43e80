//! Height functions of quadri-tiling dimer configurations on simply
//! connected planar regions.
//!
//! A matching M is the unit flow sending 1 from white to black along each
//! matched edge; subtracting a reference unit flow gives a divergence-free
//! flow whose dual is the differential of a function h on faces: crossing
//! an edge from f to f' with the black endpoint on the left,
//! `h(f') - h(f) = flow_M(e) - flow_ref(e)`.
//!
//! Two reference flows are supported: the indicator of the matching M0
//! (integer heights) and the half-angle flow theta/pi (integer heights on
//! primal-vertex faces, half-integers on dual-vertex ones). The height is
//! zero on the lowest-index primal-vertex face.

use crate::dimer::DimerConfig;
use crate::error::{Error, Result};
use crate::homology::{Chain, Side};
use crate::isoradial::{reference_flow, AngleField};
use crate::numeric::{Bits, Scalar};
use crate::surface::quad::{FaceTag, QuadGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlowKind {
    M0Flow,
    ThetaPiFlow,
}

#[derive(Clone, Debug)]
pub struct HeightField<S> {
    /// One value per quad face.
    pub values: Vec<S>,
    pub base_face: usize,
    pub flow: FlowKind,
}

/// Restriction side for reading off heights.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RestrictTo {
    PrimalVertices,
    DualVertices,
}

/// The reference flow values per quad edge.
pub fn flow_values<S: Scalar>(q: &QuadGraph, kind: FlowKind, angles: &AngleField) -> Vec<S> {
    match kind {
        FlowKind::ThetaPiFlow => reference_flow(q, angles),
        FlowKind::M0Flow => {
            let m0 = q.m0();
            (0..q.edge_count())
                .map(|e| if m0.get(e) { S::one() } else { S::zero() })
                .collect()
        }
    }
}

/// The dart of a quad edge pointing white to black.
fn white_to_black_dart(q: &QuadGraph, quad_edge: usize) -> usize {
    // dual-parallel and external edges store their even dart at the white
    // end; primal-parallel edges at the black end
    let d = q.dart_base();
    if quad_edge / d == 1 {
        2 * quad_edge + 1
    } else {
        2 * quad_edge
    }
}

pub fn height_field<S: Scalar>(
    q: &QuadGraph,
    m: &DimerConfig,
    kind: FlowKind,
    angles: &AngleField,
) -> Result<HeightField<S>> {
    if q.graph.genus() != 0 {
        return Err(Error::NotSimplyConnected);
    }
    let reference = flow_values::<S>(q, kind, angles);
    let g = &q.graph;
    let base_face = (0..g.face_count())
        .filter(|&f| matches!(q.face_tags[f], FaceTag::PrimalVertex(_)))
        .min_by_key(|&f| match q.face_tags[f] {
            FaceTag::PrimalVertex(v) => v,
            _ => unreachable!(),
        })
        .expect("quad graphs have primal-vertex faces");

    // increment across quad edge e, from the left face of its white-to-black
    // dart to the right face
    let step = |e: usize| {
        let matched = if m.matched.get(e) { S::one() } else { S::zero() };
        matched - reference[e].clone()
    };
    let mut values: Vec<Option<S>> = vec![None; g.face_count()];
    values[base_face] = Some(S::zero());
    let mut queue = std::collections::VecDeque::from([base_face]);
    while let Some(f) = queue.pop_front() {
        let here = values[f].clone().unwrap();
        for &dart in g.face_darts(f) {
            let e = g.edge_of(dart);
            let wb = white_to_black_dart(q, e);
            // faces: right of wb is face_of(wb), left is face_of(alpha wb)
            let right = g.face_of(wb);
            let left = g.face_of(g.alpha(wb));
            let (nbr, delta) = if f == left {
                (right, step(e))
            } else {
                (left, -step(e))
            };
            match &values[nbr] {
                None => {
                    values[nbr] = Some(here.clone() + delta);
                    queue.push_back(nbr);
                }
                Some(v) => {
                    if *v != here.clone() + delta {
                        return Err(Error::NotSimplyConnected);
                    }
                }
            }
        }
    }
    let values = values
        .into_iter()
        .map(|v| v.ok_or(Error::NotSimplyConnected))
        .collect::<Result<Vec<_>>>()?;
    Ok(HeightField {
        values,
        base_face,
        flow: kind,
    })
}

impl<S: Scalar> HeightField<S> {
    /// Heights on faces tagged with the requested side, keyed by the base
    /// vertex (or base face) id, sorted.
    pub fn restrict(&self, q: &QuadGraph, side: RestrictTo) -> Vec<(usize, S)> {
        let mut out: Vec<(usize, S)> = q
            .face_tags
            .iter()
            .enumerate()
            .filter_map(|(f, tag)| match (side, tag) {
                (RestrictTo::PrimalVertices, FaceTag::PrimalVertex(v)) => {
                    Some((*v, self.values[f].clone()))
                }
                (RestrictTo::DualVertices, FaceTag::DualVertex(ff)) => {
                    Some((*ff, self.values[f].clone()))
                }
                _ => None,
            })
            .collect();
        out.sort_by_key(|&(k, _)| k);
        out
    }

    /// Level lines of the restriction: the base edges across which the
    /// restricted height jumps. Restricting to dual vertices yields a
    /// primal chain (the jump between the two dual-vertex faces flanking
    /// each gadget); restricting to primal vertices yields a dual chain.
    pub fn level_lines(&self, q: &QuadGraph, side: RestrictTo) -> Chain {
        let ne = q.base.edge_count();
        let mut bits = Bits::new(ne);
        for e in 0..ne {
            let [f1, f2] = match side {
                RestrictTo::DualVertices => q.gadget_dual_faces(e),
                RestrictTo::PrimalVertices => q.gadget_primal_faces(e),
            };
            bits.set(e, self.values[f1] != self.values[f2]);
        }
        let side = match side {
            RestrictTo::DualVertices => Side::Primal,
            RestrictTo::PrimalVertices => Side::Dual,
        };
        Chain::new(side, bits)
    }
}

/// Discrete pairing of the height restricted to dual-vertex faces with a
/// test function sampled there: sum of eps^2 area(v) h(v) phi(v) over the
/// bounded dual-vertex faces (faces with a positively oriented coordinate
/// polygon; the outer face is skipped).
pub fn pair_with_test_function<S: Scalar>(
    q: &QuadGraph,
    h: &HeightField<S>,
    phi: &[f64],
    eps: f64,
) -> Result<f64> {
    let coords = q.coords.as_ref().ok_or(Error::NoCoordinates)?;
    let mut total = 0.0;
    for (f, tag) in q.face_tags.iter().enumerate() {
        let FaceTag::DualVertex(bf) = *tag else {
            continue;
        };
        let poly: Vec<[f64; 2]> = q
            .graph
            .face_darts(f)
            .iter()
            .map(|&d| coords[face_walk_vertex(q, d)])
            .collect();
        let area = -shoelace(&poly); // faces sit on the right of their darts
        if area <= 0.0 {
            continue; // outer face
        }
        total += eps * eps * area * h.values[f].to_f64() * phi[bf];
    }
    Ok(total)
}

fn face_walk_vertex(q: &QuadGraph, dart: usize) -> usize {
    q.graph.vertex_of(dart)
}

fn shoelace(poly: &[[f64; 2]]) -> f64 {
    let n = poly.len();
    let mut s = 0.0;
    for i in 0..n {
        let [x1, y1] = poly[i];
        let [x2, y2] = poly[(i + 1) % n];
        s += x1 * y2 - x2 * y1;
    }
    s / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimer::{enumerate_matchings, poly};
    use crate::numeric::Q;
    use crate::surface::generate::{planar_patch, torus_square};
    use crate::surface::quad::quad_graph;

    fn patch_setup(m: usize, n: usize) -> (QuadGraph, AngleField, Vec<DimerConfig>) {
        let q = planar_patch(m, n);
        let angles = AngleField::square_lattice(q.base.edge_count());
        let ms = enumerate_matchings(&q).unwrap();
        (q, angles, ms)
    }

    #[test]
    fn m0_height_under_m0_flow_is_zero() {
        let (q, angles, _) = patch_setup(2, 3);
        let m0 = DimerConfig::new(&q, q.m0()).unwrap();
        let h = height_field::<Q>(&q, &m0, FlowKind::M0Flow, &angles).unwrap();
        assert!(h.values.iter().all(|v| v.is_zero()));
        assert!(h.level_lines(&q, RestrictTo::DualVertices).edges.is_empty());
        assert!(h.level_lines(&q, RestrictTo::PrimalVertices).edges.is_empty());
    }

    #[test]
    fn torus_has_no_height() {
        let q = quad_graph(&torus_square(2, 2));
        let angles = AngleField::square_lattice(8);
        let m0 = DimerConfig::new(&q, q.m0()).unwrap();
        assert!(matches!(
            height_field::<Q>(&q, &m0, FlowKind::ThetaPiFlow, &angles),
            Err(Error::NotSimplyConnected)
        ));
    }

    #[test]
    fn integrality_and_increments() {
        let (q, angles, ms) = patch_setup(2, 3);
        let half = Q::from_ratio(1, 2);
        for m in &ms {
            let h = height_field::<Q>(&q, m, FlowKind::ThetaPiFlow, &angles).unwrap();
            // integer heights on primal-vertex faces, half-integers on
            // dual-vertex faces
            for (_, v) in h.restrict(&q, RestrictTo::PrimalVertices) {
                assert!(is_integer(&v), "{v:?}");
            }
            for (_, v) in h.restrict(&q, RestrictTo::DualVertices) {
                assert!(is_integer(&(v.clone() - half.clone())));
            }
            // increments between neighboring vertices lie in {-1, 0, 1}
            for e in 0..q.base.edge_count() {
                let [f1, f2] = q.gadget_primal_faces(e);
                let diff = h.values[f1].clone() - h.values[f2].clone();
                assert!(is_small_int(&diff), "primal increment {diff:?}");
                let [f1, f2] = q.gadget_dual_faces(e);
                let diff = h.values[f1].clone() - h.values[f2].clone();
                assert!(is_small_int(&diff), "dual increment {diff:?}");
            }
        }
    }

    fn is_integer(v: &Q) -> bool {
        use num::One;
        v.denom().is_one() || v.numer() == &num::BigInt::from(0)
    }

    fn is_small_int(v: &Q) -> bool {
        is_integer(v)
            && [-1i64, 0, 1]
                .iter()
                .any(|&k| v == &Q::from_int(k))
    }

    #[test]
    fn level_lines_equal_poly_on_patches() {
        for (m, n) in [(2, 3), (3, 3)] {
            let (q, angles, ms) = patch_setup(m, n);
            for mm in &ms {
                let h = height_field::<Q>(&q, mm, FlowKind::ThetaPiFlow, &angles).unwrap();
                let (p1, p2) = poly(&q, mm);
                assert_eq!(h.level_lines(&q, RestrictTo::DualVertices), p1);
                assert_eq!(h.level_lines(&q, RestrictTo::PrimalVertices), p2);
                // on a level line of one restriction the other is flat:
                // both diagonals of a gadget never jump together
                for e in 0..q.base.edge_count() {
                    assert!(!(p1.edges.get(e) && p2.edges.get(e)));
                }
            }
        }
    }

    #[test]
    fn flows_differ_by_per_side_constants() {
        let (q, angles, ms) = patch_setup(2, 3);
        for m in &ms {
            let ha = height_field::<Q>(&q, m, FlowKind::ThetaPiFlow, &angles).unwrap();
            let hb = height_field::<Q>(&q, m, FlowKind::M0Flow, &angles).unwrap();
            for side in [RestrictTo::PrimalVertices, RestrictTo::DualVertices] {
                let ra = ha.restrict(&q, side);
                let rb = hb.restrict(&q, side);
                let diffs: std::collections::BTreeSet<Q> = ra
                    .iter()
                    .zip(&rb)
                    .map(|((_, a), (_, b))| a.clone() - b.clone())
                    .collect();
                assert_eq!(diffs.len(), 1, "difference must be constant per side");
            }
        }
    }

    #[test]
    fn gauge_independence_of_height_differences() {
        // h^M - h^M' does not depend on the reference flow
        let (q, angles, ms) = patch_setup(2, 3);
        let m1 = &ms[0];
        let m2 = ms.last().unwrap();
        let a1 = height_field::<Q>(&q, m1, FlowKind::ThetaPiFlow, &angles).unwrap();
        let a2 = height_field::<Q>(&q, m2, FlowKind::ThetaPiFlow, &angles).unwrap();
        let b1 = height_field::<Q>(&q, m1, FlowKind::M0Flow, &angles).unwrap();
        let b2 = height_field::<Q>(&q, m2, FlowKind::M0Flow, &angles).unwrap();
        for f in 0..q.graph.face_count() {
            assert_eq!(
                a1.values[f].clone() - a2.values[f].clone(),
                b1.values[f].clone() - b2.values[f].clone()
            );
        }
    }

    #[test]
    fn test_function_pairing() {
        let (q, angles, ms) = patch_setup(2, 3);
        let m = ms.iter().find(|m| m.matched != q.m0()).unwrap();
        let h = height_field::<Q>(&q, m, FlowKind::ThetaPiFlow, &angles).unwrap();
        let nf = q.base.face_count();
        // zero test function pairs to zero
        assert_eq!(pair_with_test_function(&q, &h, &vec![0.0; nf], 0.5).unwrap(), 0.0);
        // linearity
        let phi1: Vec<f64> = (0..nf).map(|i| i as f64).collect();
        let phi2: Vec<f64> = (0..nf).map(|i| (i * i) as f64 - 1.0).collect();
        let sum: Vec<f64> = phi1.iter().zip(&phi2).map(|(a, b)| a + b).collect();
        let v1 = pair_with_test_function(&q, &h, &phi1, 0.5).unwrap();
        let v2 = pair_with_test_function(&q, &h, &phi2, 0.5).unwrap();
        let vs = pair_with_test_function(&q, &h, &sum, 0.5).unwrap();
        assert!((v1 + v2 - vs).abs() < 1e-12);
        // shifting h by a constant c shifts the pairing by c sum(area phi)
        let mut shifted = h.clone();
        for v in shifted.values.iter_mut() {
            *v = v.clone() + Q::from_int(3);
        }
        let ones = vec![1.0; nf];
        let mass = pair_with_test_function(&q, &h, &ones, 0.5).unwrap();
        let mass_shift = pair_with_test_function(&q, &shifted, &ones, 0.5).unwrap();
        // for phi = 1 the shift contributes 3 * total area
        assert!((mass_shift - mass - 3.0 * total_dual_area(&q, 0.5)).abs() < 1e-12);
        // a test function with zero area-weighted mean kills the shift
        let zero_h = {
            let mut z = h.clone();
            for v in z.values.iter_mut() {
                *v = Q::from_int(1);
            }
            z
        };
        let mut centered = phi1.clone();
        let total_mass = pair_with_test_function(&q, &zero_h, &phi1, 0.5).unwrap();
        let area = total_dual_area(&q, 0.5);
        for v in centered.iter_mut() {
            *v -= total_mass / area;
        }
        let v_before = pair_with_test_function(&q, &h, &centered, 0.5).unwrap();
        let v_after = pair_with_test_function(&q, &shifted, &centered, 0.5).unwrap();
        assert!((v_after - v_before).abs() < 1e-12);
    }

    fn total_dual_area(q: &QuadGraph, eps: f64) -> f64 {
        let coords = q.coords.as_ref().unwrap();
        let mut total = 0.0;
        for (f, tag) in q.face_tags.iter().enumerate() {
            if !matches!(tag, FaceTag::DualVertex(_)) {
                continue;
            }
            let poly: Vec<[f64; 2]> = q
                .graph
                .face_darts(f)
                .iter()
                .map(|&d| coords[q.graph.vertex_of(d)])
                .collect();
            let area = -shoelace(&poly);
            if area > 0.0 {
                total += eps * eps * area;
            }
        }
        total
    }
}
