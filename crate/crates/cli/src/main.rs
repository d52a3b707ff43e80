//! Command-line interface: graph generation, identity verification,
//! distribution export and SVG rendering.
//!
//! Exit codes: 0 on success, 1 when a verification check fails, 2 on usage
//! errors, 3 when a size guard refuses the computation.

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use std::io::Write;
use std::sync::Arc;
use xordimer::dimer::kasteleyn::{build_kasteleyn, sector_from_determinants};
use xordimer::dimer::{enumerate_matchings, DimerConfig, DimerWeights};
use xordimer::error::Error;
use xordimer::height::{height_field, FlowKind};
use xordimer::homology::{compute_basis, HomologyClass, Side};
use xordimer::ising::{z_low_temp_by_class, z_spin_reduced_by_class, CouplingField};
use xordimer::isoradial::{critical_x_field, AngleField};
use xordimer::numeric::{Bits, Q, Scalar};
use xordimer::six_vertex::{z_six_vertex, SixVertexWeights};
use xordimer::surface::generate::{generate, Generated, GraphSpec};
use xordimer::surface::quad::QuadGraph;
use xordimer::surface::region::BoundedSurfaceGraph;
use xordimer::verify::{run_suite, Suite, VerifyReport, MODE_EXACT, MODE_FLOAT};
use xordimer::Result;

#[derive(Parser)]
#[command(name = "xordimer", version, about = "Exact double-Ising / 6-vertex / dimer computations on surface graphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Args)]
struct Common {
    /// Graph specification: torus_square:m,n | torus_triangular:m,n |
    /// sphere_platonic:name | planar_patch:m,n | file:path.json
    #[arg(long, default_value = "torus_square:2,2")]
    graph: String,
    /// Removed face blocks, e.g. "0" or "0;5,6" (blocks split by ';',
    /// faces by ',')
    #[arg(long, default_value = "")]
    holes: String,
    /// Coupling weights: x=p/q (uniform), x=[p/q,p/q,...] (per edge),
    /// or critical (theta = pi/4, float mode only)
    #[arg(long, default_value = "x=1/2")]
    weights: String,
    /// Arithmetic mode: exact | float
    #[arg(long, default_value = "exact")]
    mode: String,
    /// Seed for generated coupling fields
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a graph and emit its embedding JSON
    Gen(Common),
    /// Homology bases and the orthogonality identity
    Homology {
        #[command(subcommand)]
        sub: HomologyCmd,
    },
    /// Ising partition sums and duality reports
    Ising {
        #[command(subcommand)]
        sub: IsingCmd,
    },
    /// 6-vertex partition function, both routes
    Sixv(Common),
    /// Dimer model commands
    Dimer {
        #[command(subcommand)]
        sub: DimerCmd,
    },
    /// Height functions on planar patches
    Height {
        #[command(subcommand)]
        sub: HeightCmd,
    },
    /// Run an identity-verification suite
    Verify {
        /// lowtemp | hightemp | duality | mixed | sixv | dimer-law |
        /// kasteleyn | height | all
        suite: String,
        /// Number of sampled coupling fields
        #[arg(long, default_value_t = 5)]
        fields: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Export distributions or heights as CSV
    Export {
        /// xor-dist | dimer-dist | heights
        what: String,
        /// Matching index for `heights`
        #[arg(long, default_value_t = 0)]
        matching: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Render the lattice and optional chains as SVG
    Render {
        /// Primal chain as a hex bitmask of edge indices
        #[arg(long)]
        primal: Option<String>,
        /// Dual chain as a hex bitmask of edge indices
        #[arg(long)]
        dual: Option<String>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum HomologyCmd {
    /// Compute the basis and print representatives
    Basis(Common),
    /// Check the orthogonality identity for rank n
    Orthogonality {
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum IsingCmd {
    /// Spin and low-temperature partition sums per defect class (values
    /// divided by prod exp(J))
    Partition(Common),
    /// Low/high-temperature expansion and duality identity reports
    Duality {
        #[arg(long, default_value_t = 5)]
        fields: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum DimerCmd {
    /// Count perfect matchings and evaluate the partition function
    Count(Common),
    /// Sector partition functions by enumeration and from determinants
    Sectors(Common),
    /// Export a Kasteleyn matrix as dense JSON
    Kasteleyn {
        /// Sign class as a hex mask
        #[arg(long, default_value = "0")]
        class: String,
        #[command(flatten)]
        common: Common,
    },
    /// Export the zero-sector poly_1 distribution as CSV
    Distribution(Common),
    /// Verify the equality in law against the double Ising model
    VerifyLaw {
        #[arg(long, default_value_t = 5)]
        fields: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum HeightCmd {
    /// List matchings of the patch
    List(Common),
    /// Export the height field of one matching as CSV
    Csv {
        #[arg(long, default_value_t = 0)]
        matching: usize,
        /// Reference flow: theta | m0
        #[arg(long, default_value = "theta")]
        flow: String,
        #[command(flatten)]
        common: Common,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(all_passed) => {
            if !all_passed {
                std::process::exit(1);
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn parse_holes(s: &str) -> Result<Vec<Vec<usize>>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(';')
        .map(|block| {
            block
                .split(',')
                .map(|f| {
                    f.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::BadSpec(format!("bad face id `{f}`")))
                })
                .collect()
        })
        .collect()
}

enum WeightsSpec {
    Uniform(i64, i64),
    List(Vec<(i64, i64)>),
    Critical,
}

fn parse_weights(s: &str) -> Result<WeightsSpec> {
    let s = s.trim();
    if s == "critical" {
        return Ok(WeightsSpec::Critical);
    }
    let body = s
        .strip_prefix("x=")
        .ok_or_else(|| Error::BadSpec(format!("weights must be x=..., or critical: `{s}`")))?;
    if let Some(list) = body.strip_prefix('[').and_then(|b| b.strip_suffix(']')) {
        let ratios = list
            .split(',')
            .map(|t| {
                xordimer::numeric::scalar::parse_ratio(t)
                    .ok_or_else(|| Error::BadSpec(format!("bad ratio `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(WeightsSpec::List(ratios));
    }
    let (n, d) = xordimer::numeric::scalar::parse_ratio(body)
        .ok_or_else(|| Error::BadSpec(format!("bad ratio `{body}`")))?;
    Ok(WeightsSpec::Uniform(n, d))
}

fn coupling<S: Scalar>(spec: &WeightsSpec, edges: usize, float_ok: bool) -> Result<CouplingField<S>> {
    match spec {
        WeightsSpec::Uniform(n, d) => Ok(CouplingField::uniform(edges, *n, *d)),
        WeightsSpec::List(ratios) => {
            if ratios.len() != edges {
                return Err(Error::BadSpec(format!(
                    "{} weights given for {} edges",
                    ratios.len(),
                    edges
                )));
            }
            Ok(CouplingField::from_ratios(ratios))
        }
        WeightsSpec::Critical => {
            if !float_ok {
                return Err(Error::BadSpec(
                    "critical weights are irrational; use --mode float".into(),
                ));
            }
            // handled by the float-specialized path below
            unreachable!("critical weights take the float path")
        }
    }
}

fn critical_coupling_field(edges: usize) -> Result<CouplingField<f64>> {
    let angles = AngleField::square_lattice(edges);
    Ok(CouplingField {
        x: critical_x_field(&angles)?,
    })
}

fn emit(out: &Option<String>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => {
            std::io::stdout().write_all(content.as_bytes())?;
        }
    }
    Ok(())
}

fn closed_graph(c: &Common) -> Result<Arc<xordimer::surface::CellEmbedding>> {
    match generate(&GraphSpec::parse(&c.graph)?)? {
        Generated::Embedding(g) => Ok(Arc::new(g)),
        Generated::Quad(_) => Err(Error::BadSpec(
            "this command needs a closed surface graph".into(),
        )),
    }
}

fn region_of(c: &Common) -> Result<BoundedSurfaceGraph> {
    let g = closed_graph(c)?;
    let holes = parse_holes(&c.holes)?;
    if holes.is_empty() {
        Ok(BoundedSurfaceGraph::whole_arc(g))
    } else {
        BoundedSurfaceGraph::remove_faces(&g, &holes)
    }
}

fn quad_of(c: &Common) -> Result<QuadGraph> {
    match generate(&GraphSpec::parse(&c.graph)?)? {
        Generated::Embedding(g) => Ok(QuadGraph::build(g)),
        Generated::Quad(q) => Ok(q),
    }
}

fn patch_of(c: &Common) -> Result<QuadGraph> {
    match generate(&GraphSpec::parse(&c.graph)?)? {
        Generated::Quad(q) => Ok(q),
        Generated::Embedding(_) => Err(Error::BadSpec(
            "this command needs --graph planar_patch:m,n".into(),
        )),
    }
}

fn report_json(r: &VerifyReport) -> String {
    json!({
        "check": r.check,
        "anchor": r.anchor,
        "mode": r.mode,
        "lhs": r.lhs,
        "rhs": r.rhs,
        "equal": r.pass,
        "cases": r.cases,
        "elapsed_ms": r.elapsed_ms,
    })
    .to_string()
}

fn print_reports(out: &Option<String>, reports: &[VerifyReport]) -> Result<bool> {
    let mut content = String::new();
    for r in reports {
        content.push_str(&report_json(r));
        content.push('\n');
    }
    emit(out, &content)?;
    Ok(reports.iter().all(|r| r.pass))
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Gen(c) => {
            let json = match generate(&GraphSpec::parse(&c.graph)?)? {
                Generated::Embedding(g) => g.to_json(),
                Generated::Quad(q) => q.graph.to_json(),
            };
            emit(&c.out, &json)?;
            Ok(true)
        }
        Cmd::Homology { sub } => match sub {
            HomologyCmd::Basis(c) => {
                let region = region_of(&c)?;
                let basis = compute_basis(&region)?;
                let j = json!({
                    "rank": basis.rank(),
                    "genus": region.genus(),
                    "boundary_circles": region.boundary_circles(),
                    "lambda": basis.lambda.iter().map(|ch| ch.edges.indices()).collect::<Vec<_>>(),
                    "gamma": basis.gamma.iter().map(|ch| ch.edges.indices()).collect::<Vec<_>>(),
                });
                emit(&c.out, &format!("{j}\n"))?;
                Ok(true)
            }
            HomologyCmd::Orthogonality { n } => {
                let bad = xordimer::homology::verify_orthogonality(n);
                println!(
                    "orthogonality rank {n}: {} violations over {} class pairs",
                    bad.len(),
                    (1usize << n) * (1usize << n)
                );
                Ok(bad.is_empty())
            }
        },
        Cmd::Ising { sub } => match sub {
            IsingCmd::Partition(c) => {
                let region = region_of(&c)?;
                let basis = compute_basis(&region)?;
                let spec = parse_weights(&c.weights)?;
                let content = if c.mode == "float" {
                    let j = match spec {
                        WeightsSpec::Critical => critical_coupling_field(region.edge_count())?,
                        other => coupling::<f64>(&other, region.edge_count(), true)?,
                    };
                    partition_json(&region, &j, &basis, MODE_FLOAT)?
                } else {
                    let j = coupling::<Q>(&spec, region.edge_count(), false)?;
                    partition_json(&region, &j, &basis, MODE_EXACT)?
                };
                emit(&c.out, &content)?;
                Ok(true)
            }
            IsingCmd::Duality { fields, common } => {
                let spec = GraphSpec::parse(&common.graph)?;
                let holes = parse_holes(&common.holes)?;
                let reports = if common.mode == "float" {
                    run_suite::<f64>(Suite::Duality, &spec, &holes, MODE_FLOAT, common.seed, fields)?
                } else {
                    run_suite::<Q>(Suite::Duality, &spec, &holes, MODE_EXACT, common.seed, fields)?
                };
                print_reports(&common.out, &reports)
            }
        },
        Cmd::Sixv(c) => {
            let g = closed_graph(&c)?;
            let spec = parse_weights(&c.weights)?;
            let content = if c.mode == "float" {
                let j = match spec {
                    WeightsSpec::Critical => critical_coupling_field(g.edge_count())?,
                    other => coupling::<f64>(&other, g.edge_count(), true)?,
                };
                let z = z_six_vertex(&g, &SixVertexWeights::from_coupling(&j))?;
                json!({"direct": z.direct, "pair_route": z.pair_route, "equal": z.direct.close(&z.pair_route), "mode": "float"}).to_string()
            } else {
                let j = coupling::<Q>(&spec, g.edge_count(), false)?;
                let z = z_six_vertex(&g, &SixVertexWeights::from_coupling(&j))?;
                json!({"direct": z.direct.render(), "pair_route": z.pair_route.render(), "equal": z.direct == z.pair_route, "mode": "exact"}).to_string()
            };
            emit(&c.out, &format!("{content}\n"))?;
            Ok(true)
        }
        Cmd::Dimer { sub } => run_dimer(sub),
        Cmd::Height { sub } => run_height(sub),
        Cmd::Verify { suite, fields, common } => {
            let suite = Suite::parse(&suite)?;
            let spec = GraphSpec::parse(&common.graph)?;
            let holes = parse_holes(&common.holes)?;
            let reports = if common.mode == "float" {
                run_suite::<f64>(suite, &spec, &holes, MODE_FLOAT, common.seed, fields)?
            } else {
                run_suite::<Q>(suite, &spec, &holes, MODE_EXACT, common.seed, fields)?
            };
            for r in &reports {
                println!("{}", r.line());
            }
            if let Some(path) = &common.out {
                let mut content = String::new();
                for r in &reports {
                    content.push_str(&report_json(r));
                    content.push('\n');
                }
                std::fs::write(path, content)?;
            }
            Ok(reports.iter().all(|r| r.pass))
        }
        Cmd::Export { what, matching, common } => run_export(&what, matching, &common),
        Cmd::Render { primal, dual, common } => {
            // patches render their base diamond graph
            let g = match generate(&GraphSpec::parse(&common.graph)?)? {
                Generated::Embedding(g) => Arc::new(g),
                Generated::Quad(q) => q.base.clone(),
            };
            let ne = g.edge_count();
            let parse_chain = |hex: &Option<String>, side| -> Result<Option<xordimer::homology::Chain>> {
                match hex {
                    None => Ok(None),
                    Some(h) => {
                        let bits = Bits::from_hex(ne, h)
                            .ok_or_else(|| Error::BadSpec(format!("bad chain mask `{h}`")))?;
                        Ok(Some(xordimer::homology::Chain::new(side, bits)))
                    }
                }
            };
            let p = parse_chain(&primal, Side::Primal)?;
            let d = parse_chain(&dual, Side::Dual)?;
            let svg = xordimer::render::render_chains(&g, p.as_ref(), d.as_ref())?;
            emit(&common.out, &svg)?;
            Ok(true)
        }
    }
}

fn partition_json<S: Scalar>(
    region: &BoundedSurfaceGraph,
    j: &CouplingField<S>,
    basis: &xordimer::homology::HomologyBasis,
    mode: &str,
) -> Result<String> {
    let zspin = z_spin_reduced_by_class(region, j, basis)?;
    let zlt = z_low_temp_by_class(region, j, basis)?;
    let j = json!({
        "mode": mode,
        "note": "values divided by prod_e exp(J)",
        "z_spin_by_class": zspin.iter().map(|v| v.render()).collect::<Vec<_>>(),
        "z_low_temp_by_class": zlt.iter().map(|v| v.render()).collect::<Vec<_>>(),
    });
    Ok(format!("{j}\n"))
}

fn run_dimer(sub: DimerCmd) -> Result<bool> {
    match sub {
        DimerCmd::Count(c) => {
            let q = quad_of(&c)?;
            let ms = enumerate_matchings(&q)?;
            let spec = parse_weights(&c.weights)?;
            let content = if c.mode == "float" {
                let j = match spec {
                    WeightsSpec::Critical => critical_coupling_field(q.base.edge_count())?,
                    other => coupling::<f64>(&other, q.base.edge_count(), true)?,
                };
                let dw = DimerWeights::from_coupling(&q, &j);
                let z = ms.iter().fold(0.0, |acc, m| acc + dw.weight_of(m));
                json!({"matchings": ms.len(), "z": z, "mode": "float"}).to_string()
            } else {
                let j = coupling::<Q>(&spec, q.base.edge_count(), false)?;
                let dw = DimerWeights::from_coupling(&q, &j);
                let z = ms
                    .iter()
                    .fold(<Q as Scalar>::zero(), |acc, m| acc + dw.weight_of(m));
                json!({"matchings": ms.len(), "z": z.render(), "mode": "exact"}).to_string()
            };
            emit(&c.out, &format!("{content}\n"))?;
            Ok(true)
        }
        DimerCmd::Sectors(c) => {
            let q = quad_of(&c)?;
            let region = BoundedSurfaceGraph::whole_arc(q.base.clone());
            let basis = compute_basis(&region)?;
            let spec = parse_weights(&c.weights)?;
            let (content, ok) = if c.mode == "float" {
                let j = match spec {
                    WeightsSpec::Critical => critical_coupling_field(q.base.edge_count())?,
                    other => coupling::<f64>(&other, q.base.edge_count(), true)?,
                };
                let dw = DimerWeights::from_coupling(&q, &j);
                sectors_json(&q, &dw, &basis, MODE_FLOAT)?
            } else {
                let j = coupling::<Q>(&spec, q.base.edge_count(), false)?;
                let dw = DimerWeights::from_coupling(&q, &j);
                sectors_json(&q, &dw, &basis, MODE_EXACT)?
            };
            emit(&c.out, &content)?;
            Ok(ok)
        }
        DimerCmd::Kasteleyn { class, common } => {
            let q = quad_of(&common)?;
            let region = BoundedSurfaceGraph::whole_arc(q.base.clone());
            let basis = compute_basis(&region)?;
            let mask = usize::from_str_radix(&class, 16)
                .map_err(|_| Error::BadSpec(format!("bad class mask `{class}`")))?;
            let cls = HomologyClass::from_mask(basis.rank(), mask);
            let spec = parse_weights(&common.weights)?;
            let j = coupling::<Q>(&spec, q.base.edge_count(), false)?;
            let dw = DimerWeights::from_coupling(&q, &j);
            let k = build_kasteleyn(&q, &dw, &cls, &basis)?;
            let n = q.dart_base();
            let mut sign = vec![vec![0i64; n]; n];
            let mut weight = vec![vec![String::from("0"); n]; n];
            for e in 0..q.edge_count() {
                let (r, cc) = q.edge_row_col(e);
                sign[r][cc] = if k.signs.get(e) { -1 } else { 1 };
                weight[r][cc] = dw.w[e].render();
            }
            let content = json!({
                "class": cls.to_hex(),
                "rows_white": n,
                "cols_black": n,
                "sign": sign,
                "weight": weight,
                "det": k.det().render(),
            })
            .to_string();
            emit(&common.out, &format!("{content}\n"))?;
            Ok(true)
        }
        DimerCmd::Distribution(c) => {
            let q = quad_of(&c)?;
            let region = BoundedSurfaceGraph::whole_arc(q.base.clone());
            let basis = compute_basis(&region)?;
            let spec = parse_weights(&c.weights)?;
            let j = coupling::<Q>(&spec, q.base.edge_count(), false)?;
            let dw = DimerWeights::from_coupling(&q, &j);
            let csv = xordimer::export::dimer_dist_csv(&q, &dw, &basis)?;
            emit(&c.out, &csv)?;
            Ok(true)
        }
        DimerCmd::VerifyLaw { fields, common } => {
            let spec = GraphSpec::parse(&common.graph)?;
            let reports = if common.mode == "float" {
                run_suite::<f64>(Suite::DimerLaw, &spec, &[], MODE_FLOAT, common.seed, fields)?
            } else {
                run_suite::<Q>(Suite::DimerLaw, &spec, &[], MODE_EXACT, common.seed, fields)?
            };
            print_reports(&common.out, &reports)
        }
    }
}

fn sectors_json<S: Scalar>(
    q: &QuadGraph,
    dw: &DimerWeights<S>,
    basis: &xordimer::homology::HomologyBasis,
    mode: &str,
) -> Result<(String, bool)> {
    let by_enum = xordimer::dimer::z_quadri_sectors(q, dw, basis)?;
    let by_det = sector_from_determinants(q, dw, basis)?;
    let ok = by_enum.iter().zip(&by_det).all(|(a, b)| a.close(b));
    let content = json!({
        "mode": mode,
        "by_enumeration": by_enum.iter().map(|v| v.render()).collect::<Vec<_>>(),
        "by_determinants": by_det.iter().map(|v| v.render()).collect::<Vec<_>>(),
        "equal": ok,
    });
    Ok((format!("{content}\n"), ok))
}

fn run_height(sub: HeightCmd) -> Result<bool> {
    match sub {
        HeightCmd::List(c) => {
            let q = patch_of(&c)?;
            let ms = enumerate_matchings(&q)?;
            let content = json!({
                "matchings": ms.len(),
                "gadgets": q.base.edge_count(),
                "faces": q.graph.face_count(),
            });
            emit(&c.out, &format!("{content}\n"))?;
            Ok(true)
        }
        HeightCmd::Csv { matching, flow, common } => {
            let q = patch_of(&common)?;
            let ms = enumerate_matchings(&q)?;
            let m = ms
                .get(matching)
                .ok_or_else(|| Error::BadSpec(format!("matching {matching} of {}", ms.len())))?;
            let kind = match flow.as_str() {
                "theta" => FlowKind::ThetaPiFlow,
                "m0" => FlowKind::M0Flow,
                other => return Err(Error::BadSpec(format!("unknown flow `{other}`"))),
            };
            let angles = AngleField::square_lattice(q.base.edge_count());
            let m = DimerConfig::new(&q, m.matched.clone())?;
            let h = height_field::<Q>(&q, &m, kind, &angles)?;
            emit(&common.out, &xordimer::export::heights_csv(&q, &h))?;
            Ok(true)
        }
    }
}

fn run_export(what: &str, matching: usize, c: &Common) -> Result<bool> {
    match what {
        "xor-dist" => {
            let region = region_of(c)?;
            let basis = compute_basis(&region)?;
            let spec = parse_weights(&c.weights)?;
            let j = coupling::<Q>(&spec, region.edge_count(), false)?;
            let csv = xordimer::export::xor_dist_csv(&region, &j, &basis)?;
            emit(&c.out, &csv)?;
            Ok(true)
        }
        "dimer-dist" => {
            let q = quad_of(c)?;
            let region = BoundedSurfaceGraph::whole_arc(q.base.clone());
            let basis = compute_basis(&region)?;
            let spec = parse_weights(&c.weights)?;
            let j = coupling::<Q>(&spec, q.base.edge_count(), false)?;
            let dw = DimerWeights::from_coupling(&q, &j);
            let csv = xordimer::export::dimer_dist_csv(&q, &dw, &basis)?;
            emit(&c.out, &csv)?;
            Ok(true)
        }
        "heights" => {
            let q = patch_of(c)?;
            let ms = enumerate_matchings(&q)?;
            let m = ms
                .get(matching)
                .ok_or_else(|| Error::BadSpec(format!("matching {matching} of {}", ms.len())))?;
            let angles = AngleField::square_lattice(q.base.edge_count());
            let h = height_field::<Q>(&q, m, FlowKind::ThetaPiFlow, &angles)?;
            emit(&c.out, &xordimer::export::heights_csv(&q, &h))?;
            Ok(true)
        }
        other => Err(Error::BadSpec(format!("unknown export `{other}`"))),
    }
}
