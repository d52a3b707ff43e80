//! Isoradial geometry: rhombus half-angles, the critical Ising couplings
//! J(theta) = log((1 + sin theta)/cos theta)/2, and the critical dimer
//! weights a = cos theta, b = sin theta.
//!
//! Half-angles are stored as rational multiples of pi so that the unit
//! reference flow (theta/pi on primal-parallel edges, 1/2 - theta/pi on
//! dual-parallel ones, 1/2 on external ones) stays exact in rational mode.

use crate::dimer::DimerWeights;
use crate::error::{Error, Result};
use crate::numeric::Scalar;
use crate::surface::quad::{QuadEdgeKind, QuadGraph};
use serde::{Deserialize, Serialize};

/// Per-edge half-angle theta_e in (0, pi/2), stored as theta/pi.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AngleField {
    pub theta_over_pi: Vec<(i64, i64)>,
}

impl AngleField {
    /// The square-lattice field: theta = pi/4 on every edge.
    pub fn square_lattice(edges: usize) -> Self {
        AngleField {
            theta_over_pi: vec![(1, 4); edges],
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            theta_over_pi: Vec<String>,
        }
        let raw: Raw = serde_json::from_str(s)?;
        let theta_over_pi = raw
            .theta_over_pi
            .iter()
            .map(|t| {
                crate::numeric::scalar::parse_ratio(t)
                    .ok_or_else(|| Error::BadSpec(format!("bad angle ratio `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        for &(n, d) in &theta_over_pi {
            let v = n as f64 / d as f64;
            if !(0.0..0.5).contains(&v) || v == 0.0 {
                return Err(Error::BadSpec(format!("theta/pi = {n}/{d} out of (0, 1/2)")));
            }
        }
        Ok(AngleField { theta_over_pi })
    }

    pub fn len(&self) -> usize {
        self.theta_over_pi.len()
    }
    pub fn is_empty(&self) -> bool {
        self.theta_over_pi.is_empty()
    }
    pub fn theta(&self, e: usize) -> f64 {
        let (n, d) = self.theta_over_pi[e];
        std::f64::consts::PI * n as f64 / d as f64
    }
}

/// Critical coupling constant for a half-angle:
/// J = log((1 + sin theta)/cos theta)/2, equivalently x = cos/(1 + sin).
pub fn critical_coupling(theta: f64) -> Result<(f64, f64)> {
    if !(theta > 0.0 && theta < std::f64::consts::FRAC_PI_2) {
        return Err(Error::BadSpec(format!("theta = {theta} out of (0, pi/2)")));
    }
    let j = 0.5 * ((1.0 + theta.sin()) / theta.cos()).ln();
    let x = theta.cos() / (1.0 + theta.sin());
    Ok((j, x))
}

/// The critical x-field of an angle field.
pub fn critical_x_field(angles: &AngleField) -> Result<Vec<f64>> {
    (0..angles.len())
        .map(|e| critical_coupling(angles.theta(e)).map(|(_, x)| x))
        .collect()
}

/// Critical dimer weights a = cos theta, b = sin theta (weight 1 on
/// external edges). These satisfy a^2 + b^2 = 1 identically.
pub fn critical_dimer_weights(q: &QuadGraph, angles: &AngleField) -> DimerWeights<f64> {
    let w = (0..q.edge_count())
        .map(|qe| match q.edge_kind(qe) {
            QuadEdgeKind::APar(e) => angles.theta(e).cos(),
            QuadEdgeKind::BPar(e) => angles.theta(e).sin(),
            QuadEdgeKind::External => 1.0,
        })
        .collect();
    DimerWeights { w }
}

/// The unit reference flow of the angle field, per quad edge, oriented
/// white to black: theta/pi on primal-parallel edges, 1/2 - theta/pi on
/// dual-parallel ones, 1/2 on external ones. Exact in rational mode.
pub fn reference_flow<S: Scalar>(q: &QuadGraph, angles: &AngleField) -> Vec<S> {
    (0..q.edge_count())
        .map(|qe| match q.edge_kind(qe) {
            QuadEdgeKind::APar(e) => {
                let (n, d) = angles.theta_over_pi[e];
                S::from_ratio(n, d)
            }
            QuadEdgeKind::BPar(e) => {
                let (n, d) = angles.theta_over_pi[e];
                S::from_ratio(1, 2) - S::from_ratio(n, d)
            }
            QuadEdgeKind::External => S::from_ratio(1, 2),
        })
        .collect()
}

/// Divergence of a white-to-black flow at every quad vertex; +1 at white
/// and -1 at black vertices for a unit flow.
pub fn divergence<S: Scalar>(q: &QuadGraph, flow: &[S]) -> Vec<S> {
    let mut div = vec![S::zero(); q.vertex_count()];
    for (qe, f) in flow.iter().enumerate() {
        let (w, b) = q.quad_edge_ends(qe);
        div[w] = div[w].clone() + f.clone();
        div[b] = div[b].clone() - f.clone();
    }
    div
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ising::CouplingField;
    use crate::numeric::Q;
    use crate::surface::generate::planar_patch;

    #[test]
    fn square_lattice_critical_point() {
        let (j, x) = critical_coupling(std::f64::consts::FRAC_PI_4).unwrap();
        assert!((j - 0.5 * (1.0 + 2f64.sqrt()).ln()).abs() < 1e-15);
        // x = cos/(1+sin) at pi/4 equals sqrt(2) - 1
        assert!((x - (2f64.sqrt() - 1.0)).abs() < 1e-15);
        assert!(critical_coupling(0.0).is_err());
        assert!(critical_coupling(std::f64::consts::FRAC_PI_2).is_err());
    }

    #[test]
    fn x_of_theta_decreasing_in_unit_interval() {
        let mut last = 1.0;
        for k in 1..100 {
            let theta = std::f64::consts::FRAC_PI_2 * k as f64 / 100.0;
            let (j, x) = critical_coupling(theta).unwrap();
            assert!(j > 0.0);
            assert!(x > 0.0 && x < 1.0);
            assert!(x < last);
            last = x;
        }
    }

    #[test]
    fn weight_routes_agree() {
        // via J then the x-formulas, versus directly cos/sin
        for k in 1..100 {
            let theta = std::f64::consts::FRAC_PI_2 * k as f64 / 100.0;
            let (_, x) = critical_coupling(theta).unwrap();
            let j = CouplingField::<f64> { x: vec![x] };
            assert!((j.sech_2j(0) - theta.cos()).abs() < 1e-12);
            assert!((j.tanh_2j(0) - theta.sin()).abs() < 1e-12);
            assert!((theta.cos().powi(2) + theta.sin().powi(2) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn reference_flow_is_a_unit_flow() {
        let q = planar_patch(2, 3);
        let angles = AngleField::square_lattice(q.base.edge_count());
        let flow = reference_flow::<Q>(&q, &angles);
        // square lattice: flows are 1/4, 1/4, 1/2
        for (qe, f) in flow.iter().enumerate() {
            let expect = match q.edge_kind(qe) {
                QuadEdgeKind::External => Q::from_ratio(1, 2),
                _ => Q::from_ratio(1, 4),
            };
            assert_eq!(f, &expect);
        }
        for (v, d) in divergence(&q, &flow).into_iter().enumerate() {
            let expect = if q.is_white(v) {
                Q::from_int(1)
            } else {
                Q::from_int(-1)
            };
            assert_eq!(d, expect, "vertex {v}");
        }
        // the M0 indicator flow has the same divergence
        let m0 = q.m0();
        let m0_flow: Vec<Q> = (0..q.edge_count())
            .map(|e| {
                if m0.get(e) {
                    Q::from_int(1)
                } else {
                    <Q as Scalar>::zero()
                }
            })
            .collect();
        for (v, d) in divergence(&q, &m0_flow).into_iter().enumerate() {
            let expect = if q.is_white(v) {
                Q::from_int(1)
            } else {
                Q::from_int(-1)
            };
            assert_eq!(d, expect);
        }
    }

    #[test]
    fn angle_json_round_trip() {
        let a = AngleField::from_json(r#"{"theta_over_pi": ["1/4", "1/3"]}"#).unwrap();
        assert_eq!(a.theta_over_pi, vec![(1, 4), (1, 3)]);
        assert!(AngleField::from_json(r#"{"theta_over_pi": ["3/4"]}"#).is_err());
    }
}
