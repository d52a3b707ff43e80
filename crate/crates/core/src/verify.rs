//! Identity-verification suites. Every check compares two independently
//! computed quantities and reports exact equality (rational mode) or
//! relative agreement within 1e-9 (float mode).
//!
//! The numbered criteria run the full battery on canonical graphs:
//!
//! 1. low-temperature expansion on the 1x1 and 2x2 tori, 100 seeded fields;
//! 2. high-temperature expansion and both duality relations, closed and
//!    bounded (one and two removed discs), 20 seeded fields;
//! 3. double-Ising decomposition over XOR loops and doubled-coupling
//!    components, with the 2^{n_P - 1} pair multiplicity;
//! 4. mixed contour expansion, per configuration and in total;
//! 5. the 6-vertex bridge: two-to-one mapping, both partition-function
//!    routes, weight preservation exactly on the free-fermion manifold;
//! 6. equality in law of XOR loops and dimer polygon configurations;
//! 7. Kasteleyn sector decomposition and the superimposition class;
//! 8. height-function integrality, increments and level lines on patches.

use crate::dimer::kasteleyn::{
    build_kasteleyn, face_rule_holds, sector_from_determinants, sector_sign_table,
};
use crate::dimer::{
    enumerate_matchings, mapping_ii, poly, restricted_distribution, z_quadri_sectors,
    z_quadri_zero_pairs, DimerConfig, DimerWeights,
};
use crate::error::{Error, Result};
use crate::height::{height_field, FlowKind, RestrictTo};
use crate::homology::{compute_basis, Chain, HomologyBasis, HomologyClass, Side};
use crate::ising::{
    duality_check, mixed_contour_weight, polygon_census, prod_over_edges, w_mono,
    xor_distribution_pairs, z_dising_reduced, z_low_temp_by_class, z_spin_reduced_by_class,
    CouplingField,
};
use crate::isoradial::AngleField;
use crate::numeric::rng::FieldRng;
use crate::numeric::{Bits, Q, Scalar};
use crate::six_vertex::{
    config_weight, is_valid, mapping_i, union_is_null_homologous, SixVertexConfig,
    SixVertexWeights,
};
use crate::surface::generate::{planar_patch, torus_square, GraphSpec};
use crate::surface::quad::quad_graph;
use crate::surface::region::BoundedSurfaceGraph;
use std::sync::Arc;
use std::time::Instant;

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub check: String,
    /// Which identity is being exercised, by name.
    pub anchor: String,
    pub mode: String,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
    pub cases: usize,
    pub elapsed_ms: f64,
}

impl VerifyReport {
    pub fn line(&self) -> String {
        format!(
            "{} {} [{}] cases={} ({:.1} ms): {} vs {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.check,
            self.mode,
            self.cases,
            self.elapsed_ms,
            self.lhs,
            self.rhs
        )
    }
}

/// Collects per-case comparisons into one report per named check.
struct Agg {
    mode: String,
    start: Instant,
    entries: Vec<VerifyReport>,
}

impl Agg {
    fn new(mode: &str) -> Self {
        Agg {
            mode: mode.to_string(),
            start: Instant::now(),
            entries: Vec::new(),
        }
    }

    fn push<S: Scalar>(&mut self, check: &str, anchor: &str, lhs: S, rhs: S) {
        let pass = lhs.close(&rhs);
        self.record(check, anchor, lhs.render(), rhs.render(), pass);
    }

    fn flag(&mut self, check: &str, anchor: &str, pass: bool, note: &str) {
        self.record(check, anchor, note.to_string(), note.to_string(), pass);
    }

    fn record(&mut self, check: &str, anchor: &str, lhs: String, rhs: String, pass: bool) {
        let elapsed = self.start.elapsed().as_secs_f64() * 1e3;
        match self.entries.iter_mut().find(|r| r.check == check) {
            Some(r) => {
                r.cases += 1;
                r.elapsed_ms = elapsed;
                if !pass && r.pass {
                    r.pass = false;
                    r.lhs = lhs;
                    r.rhs = rhs;
                }
            }
            None => self.entries.push(VerifyReport {
                check: check.to_string(),
                anchor: anchor.to_string(),
                mode: self.mode.clone(),
                lhs,
                rhs,
                pass,
                cases: 1,
                elapsed_ms: elapsed,
            }),
        }
    }

    fn done(self) -> Vec<VerifyReport> {
        self.entries
    }
}

pub const MODE_EXACT: &str = "exact";
pub const MODE_FLOAT: &str = "float";

fn whole(m: usize, n: usize) -> (BoundedSurfaceGraph, HomologyBasis) {
    let region = BoundedSurfaceGraph::whole(torus_square(m, n));
    let basis = compute_basis(&region).expect("torus basis");
    (region, basis)
}

/// Criterion 1: the low-temperature expansion on the 1x1 and 2x2 tori,
/// every defect class, `fields` seeded rational coupling fields.
pub fn criterion1<S: Scalar>(mode: &str, seed: u64, fields: usize) -> Result<Vec<VerifyReport>> {
    let mut agg = Agg::new(mode);
    for (m, n) in [(1, 1), (2, 2)] {
        let (region, basis) = whole(m, n);
        let mut rng = FieldRng::new(seed);
        for _ in 0..fields {
            let j = CouplingField::<S>::from_ratios(&rng.unit_field(region.edge_count()));
            let zspin = z_spin_reduced_by_class(&region, &j, &basis)?;
            let zlt = z_low_temp_by_class(&region, &j, &basis)?;
            for (eps, (zs, zl)) in zspin.iter().zip(&zlt).enumerate() {
                agg.push(
                    &format!("low-temp torus {m}x{n} class {eps:x}"),
                    "low-temperature expansion",
                    zs.clone(),
                    S::from_int(2) * zl.clone(),
                );
            }
        }
    }
    Ok(agg.done())
}

/// Criterion 2: high-temperature expansion and the forward/inverted duality
/// relations on the closed tori and on bounded regions with one and two
/// removed disc blocks. Two disjoint closed blocks need at least a 4x4
/// torus (on the 2x2 torus every pair of closed faces shares vertices).
pub fn criterion2<S: Scalar>(mode: &str, seed: u64, fields: usize) -> Result<Vec<VerifyReport>> {
    let mut agg = Agg::new(mode);
    let mut regions: Vec<(String, BoundedSurfaceGraph)> = vec![
        ("torus 1x1".into(), BoundedSurfaceGraph::whole(torus_square(1, 1))),
        ("torus 2x2".into(), BoundedSurfaceGraph::whole(torus_square(2, 2))),
    ];
    let t2 = Arc::new(torus_square(2, 2));
    regions.push((
        "torus 2x2, one disc removed".into(),
        BoundedSurfaceGraph::remove_faces(&t2, &[vec![0]])?,
    ));
    let t4 = Arc::new(torus_square(4, 4));
    let (b0, b1) = disjoint_face_pair(&t4);
    regions.push((
        "torus 4x4, two discs removed".into(),
        BoundedSurfaceGraph::remove_faces(&t4, &[vec![b0], vec![b1]])?,
    ));
    for (name, region) in &regions {
        let mut rng = FieldRng::new(seed);
        for _ in 0..fields {
            let j = CouplingField::<S>::from_ratios(&rng.unit_field(region.edge_count()));
            for check in duality_check(region, &j)? {
                agg.push(
                    &format!("{name}: {}", check.name),
                    "low/high-temperature duality",
                    check.lhs,
                    check.rhs,
                );
            }
        }
    }
    Ok(agg.done())
}

fn disjoint_face_pair(g: &CellEmbeddingArc) -> (usize, usize) {
    let vset = |f: usize| {
        let mut s: Vec<usize> = g.face_darts(f).iter().map(|&d| g.vertex_of(d)).collect();
        s.sort();
        s
    };
    for f1 in 0..g.face_count() {
        for f2 in f1 + 1..g.face_count() {
            let (a, b) = (vset(f1), vset(f2));
            if a.iter().all(|v| !b.contains(v)) {
                return (f1, f2);
            }
        }
    }
    panic!("no disjoint closed faces on this torus");
}

type CellEmbeddingArc = Arc<crate::surface::embedding::CellEmbedding>;

/// Criterion 3: the double-Ising decomposition on the 2x2 torus: summing
/// the per-XOR-loop weights recovers the squared partition function for
/// every defect class, and every admissible component configuration is
/// realized by exactly 2^{n_P - 1} polygon pairs.
pub fn criterion3<S: Scalar>(mode: &str, seed: u64, fields: usize) -> Result<Vec<VerifyReport>> {
    let mut agg = Agg::new(mode);
    let (region, basis) = whole(2, 2);
    let mut rng = FieldRng::new(seed);
    for _ in 0..fields {
        let j = CouplingField::<S>::from_ratios(&rng.unit_field(region.edge_count()));
        let zlt = z_low_temp_by_class(&region, &j, &basis)?;
        let census = polygon_census(&region, &j, &basis)?;
        for (eps_mask, zl) in zlt.iter().enumerate() {
            let eps = HomologyClass::from_mask(basis.rank(), eps_mask);
            let mut total = S::zero();
            for (cfg, mask, _) in &census {
                if *mask != 0 {
                    continue;
                }
                total = total + w_mono(&region, &j, &Chain::new(Side::Primal, cfg.clone()), &eps, &basis)?;
            }
            agg.push(
                &format!("double Ising decomposition, class {eps_mask:x}"),
                "XOR-loop/doubled-coupling factorization",
                total,
                zl.clone() * zl.clone(),
            );
        }
    }
    // pair multiplicity: group same-class pairs by (mono, bi)
    let j = CouplingField::<S>::from_ratios(&FieldRng::new(seed).unit_field(region.edge_count()));
    let census = polygon_census(&region, &j, &basis)?;
    for eps_mask in 0..1usize << basis.rank() {
        let group: Vec<&Bits> = census
            .iter()
            .filter(|(_, m, _)| *m == eps_mask)
            .map(|(b, _, _)| b)
            .collect();
        let mut buckets: std::collections::HashMap<(Bits, Bits), usize> = Default::default();
        for red in &group {
            for blue in &group {
                let mono = red.xor(blue);
                let bi = red.and(blue);
                *buckets.entry((mono, bi)).or_insert(0) += 1;
            }
        }
        let mut all_ok = true;
        let mut bucket_census_ok = true;
        let mut seen_monos: std::collections::HashMap<Bits, usize> = Default::default();
        for ((mono, _bi), count) in &buckets {
            let pieces = region.cut_along(mono);
            let expect = 1usize << (pieces.len() - 1);
            if *count != expect {
                all_ok = false;
            }
            *seen_monos.entry(mono.clone()).or_insert(0) += 1;
        }
        // the number of realized (mono, bi) buckets per mono equals the
        // product over components of the admissible-class config counts
        let eps = HomologyClass::from_mask(basis.rank(), eps_mask);
        let rep = basis.representative(&eps, region.parent().edge_count());
        for (mono, nbuckets) in &seen_monos {
            let pieces = region.cut_along(mono);
            let mut expect = 1usize;
            for piece in &pieces {
                let pb = compute_basis(piece)?;
                let restricted = crate::homology::restrict_representative(&rep, piece);
                let class = pb.class_of(&restricted, piece)?;
                let n_configs = crate::six_vertex::all_polygon_configs(piece, Side::Primal)?
                    .into_iter()
                    .filter(|c| pb.class_of_unchecked(&Chain::new(Side::Primal, c.clone())) == class)
                    .count();
                expect *= n_configs;
            }
            if *nbuckets != expect {
                bucket_census_ok = false;
            }
        }
        agg.flag(
            &format!("pair multiplicity 2^(n_P - 1), class {eps_mask:x}"),
            "component pair counting",
            all_ok,
            "per-bucket count",
        );
        agg.flag(
            &format!("admissible component census, class {eps_mask:x}"),
            "component pair counting",
            bucket_census_ok,
            "bucket census",
        );
    }
    Ok(agg.done())
}

/// Criterion 4: the mixed contour expansion on the 2x2 torus: per-P
/// equality with the summed decomposition, and the total against the
/// double-Ising partition function with its explicit constant.
pub fn criterion4<S: Scalar>(mode: &str, seed: u64, fields: usize) -> Result<Vec<VerifyReport>> {
    let mut agg = Agg::new(mode);
    let (region, basis) = whole(2, 2);
    let mut rng = FieldRng::new(seed);
    for _ in 0..fields {
        let j = CouplingField::<S>::from_ratios(&rng.unit_field(region.edge_count()));
        let census = polygon_census(&region, &j, &basis)?;
        let mut total = S::zero();
        for (cfg, mask, _) in &census {
            if *mask != 0 {
                continue;
            }
            let p = Chain::new(Side::Primal, cfg.clone());
            let lhs = HomologyClass::all(basis.rank())
                .iter()
                .try_fold(S::zero(), |acc, eps| {
                    w_mono(&region, &j, &p, eps, &basis).map(|w| acc + w)
                })?;
            let rhs = mixed_contour_weight(&region, &j, &p, &basis)?;
            agg.push(
                &format!("mixed contour weight, |P| = {}", cfg.count()),
                "mixed contour expansion",
                lhs,
                rhs.clone(),
            );
            total = total + rhs;
        }
        agg.push(
            "mixed contour total vs double Ising",
            "mixed contour partition identity",
            total,
            z_dising_reduced(&region, &j, &basis)?,
        );
        // the coupling swap tanh J' = exp(-2J) exchanges the two edge factors
        for e in 0..region.edge_count() {
            let x = j.x(e);
            let x_swapped = (S::one() - x.clone()) / (S::one() + x.clone());
            let j_swapped = CouplingField::<S> {
                x: vec![x_swapped],
            };
            agg.push(
                "coupling-swap factor exchange (primal)",
                "self-duality of the mixed expansion",
                j_swapped.tanh_2j(0),
                j.sech_2j(e),
            );
            agg.push(
                "coupling-swap factor exchange (dual)",
                "self-duality of the mixed expansion",
                j_swapped.sech_2j(0),
                j.tanh_2j(e),
            );
        }
    }
    Ok(agg.done())
}

/// Criterion 5: the 6-vertex bridge on the 1x1 and 2x2 tori.
pub fn criterion5<S: Scalar>(mode: &str, seed: u64) -> Result<Vec<VerifyReport>> {
    let mut agg = Agg::new(mode);
    for (m, n) in [(1, 1), (2, 2)] {
        let base = torus_square(m, n);
        let name = format!("torus {m}x{n}");
        // exhaustive two-to-one audit
        let nd = base.dart_count();
        let mut fibers: std::collections::HashMap<(Bits, Bits), usize> = Default::default();
        for mask in 0u64..1 << nd {
            let mut bits = Bits::new(nd);
            for i in 0..nd {
                if mask >> i & 1 == 1 {
                    bits.set(i, true);
                }
            }
            let cfg = SixVertexConfig { edges: bits };
            if !is_valid(&base, &cfg) {
                continue;
            }
            let (p, pd) = mapping_i(&base, &cfg)?;
            if !p.edges.disjoint(&pd.edges) || !union_is_null_homologous(&base, &p, &pd) {
                agg.flag(
                    &format!("{name}: mapping image shape"),
                    "6-vertex to polygon pairs",
                    false,
                    "image must be non-crossing and null-homologous",
                );
            }
            *fibers.entry((p.edges, pd.edges)).or_insert(0) += 1;
        }
        agg.flag(
            &format!("{name}: mapping is two-to-one"),
            "6-vertex to polygon pairs",
            fibers.values().all(|&c| c == 2),
            "fiber sizes",
        );
        // every admissible pair is attained
        let region = BoundedSurfaceGraph::whole(base.clone());
        let primal = crate::six_vertex::all_polygon_configs(&region, Side::Primal)?;
        let dual = crate::six_vertex::all_polygon_configs(&region, Side::Dual)?;
        let mut admissible = 0usize;
        for p in &primal {
            for pd in &dual {
                if p.disjoint(pd)
                    && union_is_null_homologous(
                        &base,
                        &Chain::new(Side::Primal, p.clone()),
                        &Chain::new(Side::Dual, pd.clone()),
                    )
                {
                    admissible += 1;
                }
            }
        }
        agg.push(
            &format!("{name}: fiber census"),
            "6-vertex to polygon pairs",
            S::from_int(fibers.len() as i64),
            S::from_int(admissible as i64),
        );

        // partition function routes, free-fermion and generic weights
        let mut rng = FieldRng::new(seed);
        let j = CouplingField::<S>::from_ratios(&rng.unit_field(base.edge_count()));
        let ff = SixVertexWeights::from_coupling(&j);
        let generic = SixVertexWeights::<S>::uniform(
            base.edge_count(),
            S::from_ratio(2, 3),
            S::from_ratio(3, 5),
        );
        for (label, weights) in [("free-fermion", &ff), ("generic", &generic)] {
            let z = crate::six_vertex::z_six_vertex(&base, weights)?;
            agg.push(
                &format!("{name}: partition routes agree ({label})"),
                "6-vertex partition function",
                z.direct,
                z.pair_route,
            );
        }

        // Mapping II: weight preservation on the free-fermion manifold
        let q = quad_graph(&base);
        let dw = DimerWeights::from_six_vertex(&q, &ff);
        agg.flag(
            &format!("{name}: weights are free-fermionic"),
            "free-fermion condition",
            dw.is_free_fermion(&q),
            "a^2 + b^2 = 1",
        );
        let matchings = enumerate_matchings(&q)?;
        let mut pushed: std::collections::HashMap<Bits, S> = Default::default();
        for mm in &matchings {
            let key = mapping_ii(&q, mm).edges;
            let slot = pushed.entry(key).or_insert_with(S::zero);
            *slot = slot.clone() + dw.weight_of(mm);
        }
        let mut preserved = true;
        let mut z6_direct = S::zero();
        for (key, total) in &pushed {
            let cfg = SixVertexConfig { edges: key.clone() };
            let w = config_weight(&base, &ff, &cfg)?;
            if !total.close(&w) {
                preserved = false;
            }
            z6_direct = z6_direct + w;
        }
        agg.flag(
            &format!("{name}: dimer-to-6V pushforward preserves weights"),
            "weight-preserving mapping",
            preserved,
            "per-configuration fiber sums",
        );
        let z_quadri = matchings
            .iter()
            .fold(S::zero(), |acc, m| acc + dw.weight_of(m));
        agg.push(
            &format!("{name}: Z_quadri = Z_6V"),
            "weight-preserving mapping",
            z_quadri,
            z6_direct,
        );

        // a deliberately broken free-fermion field must be detected
        let broken = SixVertexWeights::<S>::uniform(
            base.edge_count(),
            S::from_ratio(1, 2),
            S::from_ratio(1, 2),
        );
        let dwb = DimerWeights::from_six_vertex(&q, &broken);
        let mut mismatch = !dwb.is_free_fermion(&q);
        let mut pushed: std::collections::HashMap<Bits, S> = Default::default();
        for mm in &matchings {
            let key = mapping_ii(&q, mm).edges;
            let slot = pushed.entry(key).or_insert_with(S::zero);
            *slot = slot.clone() + dwb.weight_of(mm);
        }
        let mut any_weight_mismatch = false;
        for (key, total) in &pushed {
            let cfg = SixVertexConfig { edges: key.clone() };
            if !total.close(&config_weight(&base, &broken, &cfg)?) {
                any_weight_mismatch = true;
            }
        }
        mismatch = mismatch && any_weight_mismatch;
        agg.flag(
            &format!("{name}: broken free-fermion field detected"),
            "free-fermion necessity",
            mismatch,
            "pushforward discrepancy found",
        );
    }
    Ok(agg.done())
}

/// Criterion 6: equality in law of XOR loops and zero-sector dimer
/// polygon configurations, plus the partition-function identity.
pub fn criterion6<S: Scalar>(mode: &str, seed: u64, fields: usize) -> Result<Vec<VerifyReport>> {
    let mut agg = Agg::new(mode);
    for (m, n) in [(1, 1), (2, 2)] {
        let (region, basis) = whole(m, n);
        let q = quad_graph(&torus_square(m, n));
        let mut rng = FieldRng::new(seed);
        for _ in 0..fields {
            let j = CouplingField::<S>::from_ratios(&rng.unit_field(region.edge_count()));
            let ising_dist = xor_distribution_pairs(&region, &j, &basis)?;
            let dw = DimerWeights::from_coupling(&q, &j);
            let dimer_dist = restricted_distribution(&q, &dw, &basis)?;
            // total-variation distance must vanish identically
            let mut tv_zero = ising_dist.len() == dimer_dist.len();
            for ((p1, w1), (p2, w2)) in ising_dist.iter().zip(&dimer_dist) {
                if p1 != p2 || !w1.close(w2) {
                    tv_zero = false;
                }
            }
            agg.flag(
                &format!("torus {m}x{n}: XOR law equals dimer law"),
                "equality in law",
                tv_zero,
                "total variation distance 0",
            );
            // Z_dising = 2^{|V*| + 2g} prod cosh(2J) Z0_quadri; both sides
            // divided by C = (2 prod exp J)^2
            let zq0 = z_quadri_sectors(&q, &dw, &basis)?.swap_remove(0);
            let factor = S::two_pow(region.dual_vertex_count() as i32 + 2 * region.genus() as i32 - 2)
                * prod_over_edges(&region, |e| (S::one() + j.exp_m4j(e)) / S::from_int(2));
            agg.push(
                &format!("torus {m}x{n}: partition identity"),
                "double Ising vs dimer partition functions",
                z_dising_reduced(&region, &j, &basis)?,
                factor * zq0.clone(),
            );
            // and the zero sector itself equals the polygon-pair sum
            let sv = SixVertexWeights::from_coupling(&j);
            agg.push(
                &format!("torus {m}x{n}: zero-sector pair formula"),
                "restricted dimer partition function",
                zq0,
                z_quadri_zero_pairs(&q, &sv, &basis)?,
            );
        }
    }
    Ok(agg.done())
}

/// Criterion 7: Kasteleyn sign classes and homology sectors.
pub fn criterion7<S: Scalar>(mode: &str, seed: u64, fields: usize) -> Result<Vec<VerifyReport>> {
    let mut agg = Agg::new(mode);
    for (m, n) in [(1, 1), (2, 2)] {
        let base = torus_square(m, n);
        let name = format!("torus {m}x{n}");
        let q = quad_graph(&base);
        let region = BoundedSurfaceGraph::whole_arc(q.base.clone());
        let basis = compute_basis(&region)?;
        // sign constancy per sector is audited inside the table build
        let table = sector_sign_table(&q, &basis);
        agg.flag(
            &format!("{name}: per-sector determinant signs constant"),
            "sector sign audit",
            table.is_ok(),
            "exhaustive audit",
        );
        // face rule for every sign class
        let dw_unit = DimerWeights::<S> {
            w: vec![S::one(); q.edge_count()],
        };
        for class in HomologyClass::all(basis.rank()) {
            let k = build_kasteleyn(&q, &dw_unit, &class, &basis)?;
            agg.flag(
                &format!("{name}: face rule, class {:x}", class.mask()),
                "Kasteleyn face rule",
                face_rule_holds(&q, &k.signs),
                "minus-sign parity",
            );
        }
        // superimposition class equals the class of poly_1
        let m0 = DimerConfig::new(&q, q.m0())?;
        let mut super_ok = true;
        for mm in enumerate_matchings(&q)? {
            let via_loops = crate::dimer::sector_of(&q, &mm, &m0, &basis);
            let (p1, _) = poly(&q, &mm);
            if via_loops != basis.class_of_unchecked(&p1) {
                super_ok = false;
            }
        }
        agg.flag(
            &format!("{name}: superimposition class = poly1 class"),
            "superimposition lemma",
            super_ok,
            "exhaustive",
        );
        // sector recovery from determinants
        let mut rng = FieldRng::new(seed);
        for _ in 0..fields {
            let j = CouplingField::<S>::from_ratios(&rng.unit_field(base.edge_count()));
            let dw = DimerWeights::from_coupling(&q, &j);
            let by_det = sector_from_determinants(&q, &dw, &basis)?;
            let by_enum = z_quadri_sectors(&q, &dw, &basis)?;
            for (alpha, (a, b)) in by_det.iter().zip(&by_enum).enumerate() {
                agg.push(
                    &format!("{name}: sector {alpha:x} from determinants"),
                    "sector decomposition of determinants",
                    a.clone(),
                    b.clone(),
                );
            }
        }
    }
    Ok(agg.done())
}

/// Criterion 8: height functions on the 2x3 and 3x3 patches.
pub fn criterion8<S: Scalar>(mode: &str) -> Result<Vec<VerifyReport>> {
    let mut agg = Agg::new(mode);
    for (m, n) in [(2, 3), (3, 3)] {
        let q = planar_patch(m, n);
        let name = format!("patch {m}x{n}");
        let angles = AngleField::square_lattice(q.base.edge_count());
        let half = S::from_ratio(1, 2);
        let mut integral_ok = true;
        let mut increments_ok = true;
        let mut levels_ok = true;
        let mut constant_ok = true;
        for mm in enumerate_matchings(&q)? {
            let h = height_field::<S>(&q, &mm, FlowKind::ThetaPiFlow, &angles)?;
            for (_, v) in h.restrict(&q, RestrictTo::PrimalVertices) {
                if !is_integer_scalar(&v) {
                    integral_ok = false;
                }
            }
            for (_, v) in h.restrict(&q, RestrictTo::DualVertices) {
                if !is_integer_scalar(&(v - half.clone())) {
                    integral_ok = false;
                }
            }
            for e in 0..q.base.edge_count() {
                for faces in [q.gadget_primal_faces(e), q.gadget_dual_faces(e)] {
                    let d = h.values[faces[0]].clone() - h.values[faces[1]].clone();
                    if ![-1i64, 0, 1].iter().any(|&k| d.close(&S::from_int(k))) {
                        increments_ok = false;
                    }
                }
            }
            let (p1, p2) = poly(&q, &mm);
            if h.level_lines(&q, RestrictTo::DualVertices) != p1
                || h.level_lines(&q, RestrictTo::PrimalVertices) != p2
            {
                levels_ok = false;
            }
            let h0 = height_field::<S>(&q, &mm, FlowKind::M0Flow, &angles)?;
            for side in [RestrictTo::PrimalVertices, RestrictTo::DualVertices] {
                let a = h.restrict(&q, side);
                let b = h0.restrict(&q, side);
                let mut diffs = a
                    .iter()
                    .zip(&b)
                    .map(|((_, x), (_, y))| x.clone() - y.clone());
                if let Some(first) = diffs.next() {
                    if !diffs.all(|d| d.close(&first)) {
                        constant_ok = false;
                    }
                }
            }
        }
        agg.flag(
            &format!("{name}: integer/half-integer heights"),
            "height value lattice",
            integral_ok,
            "exhaustive",
        );
        agg.flag(
            &format!("{name}: increments in -1,0,1"),
            "height increments",
            increments_ok,
            "exhaustive",
        );
        agg.flag(
            &format!("{name}: level lines equal the polygon pair"),
            "level lines",
            levels_ok,
            "exhaustive",
        );
        agg.flag(
            &format!("{name}: reference flows differ by per-side constants"),
            "reference-flow gauge",
            constant_ok,
            "exhaustive",
        );
    }
    Ok(agg.done())
}

fn is_integer_scalar<S: Scalar>(v: &S) -> bool {
    let f = v.to_f64();
    (f - f.round()).abs() < 1e-9
}

/// Run one numbered acceptance criterion in exact arithmetic.
pub fn run_criterion_exact(k: usize) -> Result<Vec<VerifyReport>> {
    let seed = 7;
    match k {
        1 => criterion1::<Q>(MODE_EXACT, seed, 100),
        2 => criterion2::<Q>(MODE_EXACT, seed, 20),
        3 => criterion3::<Q>(MODE_EXACT, seed, 5),
        4 => criterion4::<Q>(MODE_EXACT, seed, 5),
        5 => criterion5::<Q>(MODE_EXACT, seed),
        6 => criterion6::<Q>(MODE_EXACT, seed, 20),
        7 => criterion7::<Q>(MODE_EXACT, seed, 20),
        8 => criterion8::<Q>(MODE_EXACT),
        _ => Err(Error::BadSpec(format!("no criterion {k}"))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    LowTemp,
    HighTemp,
    Duality,
    Mixed,
    SixV,
    DimerLaw,
    Kasteleyn,
    Height,
    All,
}

impl Suite {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "lowtemp" => Suite::LowTemp,
            "hightemp" => Suite::HighTemp,
            "duality" => Suite::Duality,
            "mixed" => Suite::Mixed,
            "sixv" => Suite::SixV,
            "dimer-law" => Suite::DimerLaw,
            "kasteleyn" => Suite::Kasteleyn,
            "height" => Suite::Height,
            "all" => Suite::All,
            other => return Err(Error::BadSpec(format!("unknown suite `{other}`"))),
        })
    }
}

/// Run a suite against a given graph. Suites needing specific shapes
/// (heights need a planar patch) reject other specs.
pub fn run_suite<S: Scalar>(
    suite: Suite,
    spec: &GraphSpec,
    holes: &[Vec<usize>],
    mode: &str,
    seed: u64,
    fields: usize,
) -> Result<Vec<VerifyReport>> {
    match suite {
        Suite::All => {
            let mut all = Vec::new();
            for k in 1..=8 {
                all.extend(run_criterion_exact(k)?);
            }
            Ok(all)
        }
        Suite::Height => match spec {
            GraphSpec::PlanarPatch(_, _) => criterion8::<S>(mode),
            _ => Err(Error::BadSpec("height suite needs planar_patch".into())),
        },
        Suite::LowTemp | Suite::HighTemp | Suite::Duality => {
            let region = region_from_spec(spec, holes)?;
            let mut agg = Agg::new(mode);
            let mut rng = FieldRng::new(seed);
            for _ in 0..fields.max(1) {
                let j = CouplingField::<S>::from_ratios(&rng.unit_field(region.edge_count()));
                for check in duality_check(&region, &j)? {
                    let keep = match suite {
                        Suite::LowTemp => check.name.starts_with("low-temperature"),
                        Suite::HighTemp => check.name.starts_with("high-temperature"),
                        _ => true,
                    };
                    if keep {
                        let name = check.name;
                        agg.push(&name, "expansion identities", check.lhs, check.rhs);
                    }
                }
            }
            Ok(agg.done())
        }
        Suite::Mixed => {
            let region = region_from_spec(spec, holes)?;
            if region.boundary_circles() != 0 {
                return Err(Error::BadSpec("mixed suite needs a closed surface".into()));
            }
            let basis = compute_basis(&region)?;
            let mut agg = Agg::new(mode);
            let mut rng = FieldRng::new(seed);
            for _ in 0..fields.max(1) {
                let j = CouplingField::<S>::from_ratios(&rng.unit_field(region.edge_count()));
                let census = polygon_census(&region, &j, &basis)?;
                let mut total = S::zero();
                for (cfg, mask, _) in &census {
                    if *mask != 0 {
                        continue;
                    }
                    let p = Chain::new(Side::Primal, cfg.clone());
                    let lhs = HomologyClass::all(basis.rank())
                        .iter()
                        .try_fold(S::zero(), |acc, eps| {
                            w_mono(&region, &j, &p, eps, &basis).map(|w| acc + w)
                        })?;
                    let rhs = mixed_contour_weight(&region, &j, &p, &basis)?;
                    agg.push("mixed contour weight per P", "mixed contour expansion", lhs, rhs.clone());
                    total = total + rhs;
                }
                agg.push(
                    "mixed contour total",
                    "mixed contour partition identity",
                    total,
                    z_dising_reduced(&region, &j, &basis)?,
                );
            }
            Ok(agg.done())
        }
        Suite::SixV => match spec {
            GraphSpec::TorusSquare(1, 1) | GraphSpec::TorusSquare(2, 2) => {
                criterion5::<S>(mode, seed)
            }
            _ => Err(Error::BadSpec(
                "sixv suite runs on torus_square:1,1 or 2,2".into(),
            )),
        },
        Suite::DimerLaw => match spec {
            GraphSpec::TorusSquare(m @ (1 | 2), n) if *n == *m => {
                criterion6::<S>(mode, seed, fields.max(1))
            }
            _ => Err(Error::BadSpec(
                "dimer-law suite runs on torus_square:1,1 or 2,2".into(),
            )),
        },
        Suite::Kasteleyn => match spec {
            GraphSpec::TorusSquare(m @ (1 | 2), n) if *n == *m => {
                criterion7::<S>(mode, seed, fields.max(1))
            }
            _ => Err(Error::BadSpec(
                "kasteleyn suite runs on torus_square:1,1 or 2,2".into(),
            )),
        },
    }
}

/// Build a region from a graph spec plus optional removed-face blocks.
pub fn region_from_spec(spec: &GraphSpec, holes: &[Vec<usize>]) -> Result<BoundedSurfaceGraph> {
    let g = match crate::surface::generate::generate(spec)? {
        crate::surface::generate::Generated::Embedding(g) => g,
        crate::surface::generate::Generated::Quad(_) => {
            return Err(Error::BadSpec("this command needs a closed surface graph".into()))
        }
    };
    let g = Arc::new(g);
    if holes.is_empty() {
        Ok(BoundedSurfaceGraph::whole_arc(g))
    } else {
        BoundedSurfaceGraph::remove_faces(&g, holes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_criteria_pass_quickly() {
        // smoke: tiny field counts; the acceptance suite runs the full sizes
        for reports in [
            criterion1::<Q>(MODE_EXACT, 3, 2).unwrap(),
            criterion3::<Q>(MODE_EXACT, 3, 1).unwrap(),
            criterion5::<Q>(MODE_EXACT, 3).unwrap(),
        ] {
            for r in reports {
                assert!(r.pass, "{}", r.line());
            }
        }
    }

    #[test]
    fn float_mode_also_passes() {
        for r in criterion1::<f64>(MODE_FLOAT, 3, 2).unwrap() {
            assert!(r.pass, "{}", r.line());
        }
        for r in criterion6::<f64>(MODE_FLOAT, 3, 2).unwrap() {
            assert!(r.pass, "{}", r.line());
        }
    }
}
