//! Byte-stable CSV exports: distributions keyed by hex bitmasks of edge
//! indices, heights keyed by face id and tag.

use crate::error::Result;
use crate::height::HeightField;
use crate::homology::HomologyBasis;
use crate::ising::{xor_distribution_pairs, CouplingField};
use crate::dimer::{restricted_distribution, DimerWeights};
use crate::numeric::{Bits, Scalar};
use crate::surface::quad::{FaceTag, QuadGraph};
use crate::surface::region::BoundedSurfaceGraph;

fn dist_csv<S: Scalar>(rows: Vec<(Bits, S)>) -> String {
    let mut out = String::from("polygon_hex,probability\n");
    for (bits, p) in rows {
        out.push_str(&format!("{},{}\n", bits.to_hex(), p.render()));
    }
    out
}

/// Exact XOR-loop distribution of the double Ising model, one row per
/// null-homologous polygon configuration.
pub fn xor_dist_csv<S: Scalar>(
    region: &BoundedSurfaceGraph,
    j: &CouplingField<S>,
    basis: &HomologyBasis,
) -> Result<String> {
    Ok(dist_csv(xor_distribution_pairs(region, j, basis)?))
}

/// Exact zero-sector distribution of poly_1 for the dimer model.
pub fn dimer_dist_csv<S: Scalar>(
    q: &QuadGraph,
    weights: &DimerWeights<S>,
    basis: &HomologyBasis,
) -> Result<String> {
    Ok(dist_csv(restricted_distribution(q, weights, basis)?))
}

/// Heights per quad face: face id, tag, value.
pub fn heights_csv<S: Scalar>(q: &QuadGraph, h: &HeightField<S>) -> String {
    let mut out = String::from("face,tag,value\n");
    for (f, tag) in q.face_tags.iter().enumerate() {
        let tag = match tag {
            FaceTag::PrimalVertex(v) => format!("primal_vertex:{v}"),
            FaceTag::DualVertex(ff) => format!("dual_vertex:{ff}"),
            FaceTag::Gadget(e) => format!("edge:{e}"),
        };
        out.push_str(&format!("{f},{tag},{}\n", h.values[f].render()));
    }
    out
}
