//! JSON report fragments.

use crate::compactify::{BlowupSystem, ChartSystem, SectorDecomposition};
use crate::darboux::{ExpFactor, InvariantCurve, Multiplicity};
use crate::equilibria::{Coord, EquilibriumRecord};
use crate::exactalg::rat::fmt_rat;
use crate::exactalg::{MPoly, RatInterval};
use crate::integrability::{IntegrabilityVerdict, SearchBounds, Verdict};
use serde::Serialize;

/// An exact coordinate as `"p/q"`, otherwise an isolating interval.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum CoordJson {
    Exact(String),
    Interval([String; 2]),
}

impl From<&Coord> for CoordJson {
    fn from(c: &Coord) -> Self {
        match c {
            Coord::Exact(r) => CoordJson::Exact(fmt_rat(r)),
            Coord::Algebraic { iv, .. } => CoordJson::Interval([fmt_rat(&iv.lo), fmt_rat(&iv.hi)]),
        }
    }
}

fn interval(i: &RatInterval) -> [String; 2] {
    [fmt_rat(&i.lo), fmt_rat(&i.hi)]
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SaddleNodeJson {
    pub a2: String,
    pub nonzero_eigenvalue: String,
    pub center_direction: [String; 2],
    pub hyperbolic_direction: [String; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquilibriumJson {
    pub x: CoordJson,
    pub y: CoordJson,
    pub approx: [f64; 2],
    pub eigenvalues: [String; 2],
    pub eigenvalues_approx: [[f64; 2]; 2],
    pub trace_sign: Option<i32>,
    pub det_sign: Option<i32>,
    pub discriminant_sign: Option<i32>,
    pub classification: String,
    pub label: Option<String>,
    pub residual: [[String; 2]; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub saddle_node: Option<SaddleNodeJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sectors: Option<SectorDecomposition>,
}

impl EquilibriumJson {
    pub fn new(rec: &EquilibriumRecord) -> Self {
        let (ax, ay) = rec.point.approx();
        let eig = rec.eigenvalues.approx();
        EquilibriumJson {
            x: (&rec.point.x).into(),
            y: (&rec.point.y).into(),
            approx: [ax, ay],
            eigenvalues: rec.eigenvalues.describe(),
            eigenvalues_approx: [[eig[0].0, eig[0].1], [eig[1].0, eig[1].1]],
            trace_sign: rec.trace_sign,
            det_sign: rec.det_sign,
            discriminant_sign: rec.disc_sign,
            classification: rec.classification.label().into(),
            label: rec.label.clone(),
            residual: [interval(&rec.residual[0]), interval(&rec.residual[1])],
            saddle_node: rec.reduction.as_ref().map(|r| SaddleNodeJson {
                a2: fmt_rat(&r.a2),
                nonzero_eigenvalue: fmt_rat(&r.eigenvalue),
                center_direction: [fmt_rat(&r.center[0]), fmt_rat(&r.center[1])],
                hyperbolic_direction: [fmt_rat(&r.hyperbolic[0]), fmt_rat(&r.hyperbolic[1])],
            }),
            sectors: None,
        }
    }

    pub fn with_sectors(mut self, s: SectorDecomposition) -> Self {
        self.sectors = Some(s);
        self
    }
}

fn poly_uv(p: &MPoly, names: [&str; 2]) -> String {
    p.display_with(names)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChartJson {
    pub chart: String,
    pub du: String,
    pub dv: String,
    pub infinite_equilibria: Vec<EquilibriumJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ChartJson {
    pub fn new(cs: &ChartSystem, eqs: Result<Vec<EquilibriumJson>, String>) -> Self {
        let (infinite_equilibria, error) = match eqs {
            Ok(v) => (v, None),
            Err(e) => (Vec::new(), Some(e)),
        };
        ChartJson {
            chart: cs.chart.to_string(),
            du: poly_uv(&cs.du, ["u", "v"]),
            dv: poly_uv(&cs.dv, ["u", "v"]),
            infinite_equilibria,
            error,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlowupJson {
    pub direction: String,
    pub p: String,
    pub q: String,
    pub rescale_power: u32,
    pub reversed_on_negative_side: bool,
    pub swapped_quadrants: [u8; 2],
    pub divisor_equilibria: Vec<EquilibriumJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl BlowupJson {
    pub fn new(b: &BlowupSystem) -> Self {
        let sys = b.system();
        let names = [sys.var_names[0].as_str(), sys.var_names[1].as_str()];
        let (divisor_equilibria, error) = match b.divisor_equilibria() {
            Ok(v) => (v.iter().map(EquilibriumJson::new).collect(), None),
            Err(e) => (Vec::new(), Some(e.to_string())),
        };
        BlowupJson {
            direction: format!("{:?}", b.direction).to_lowercase(),
            p: poly_uv(&b.p, names),
            q: poly_uv(&b.q, names),
            rescale_power: b.rescale_power,
            reversed_on_negative_side: b.flags.reversed_on_negative_side,
            swapped_quadrants: b.flags.swapped_quadrants,
            divisor_equilibria,
            error,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurveJson {
    pub f: String,
    pub cofactor: String,
    pub multiplicity: Multiplicity,
}

impl From<&InvariantCurve> for CurveJson {
    fn from(c: &InvariantCurve) -> Self {
        CurveJson {
            f: c.f.to_string(),
            cofactor: c.cofactor.to_string(),
            multiplicity: c.multiplicity,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpFactorJson {
    pub g: String,
    pub f: String,
    pub cofactor: String,
}

impl From<&ExpFactor> for ExpFactorJson {
    fn from(e: &ExpFactor) -> Self {
        ExpFactorJson {
            g: e.g.to_string(),
            f: e.f.to_string(),
            cofactor: e.cofactor.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerdictJson {
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub bounds: SearchBounds,
    pub lambda: Vec<String>,
    pub mu: Vec<String>,
    pub columns: Vec<String>,
    pub rank: usize,
    pub augmented_rank: usize,
    pub first_integral_nullity: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub darboux_function: Option<String>,
    pub divergence: String,
    pub caveat: String,
}

impl From<&IntegrabilityVerdict> for VerdictJson {
    fn from(v: &IntegrabilityVerdict) -> Self {
        let (lambda, mu, reason) = match &v.verdict {
            Verdict::DarbouxFirstIntegral(s) | Verdict::DarbouxIntegratingFactor(s) => (
                s.lambda.iter().map(fmt_rat).collect(),
                s.mu.iter().map(fmt_rat).collect(),
                None,
            ),
            Verdict::Inconclusive(r) => (Vec::new(), Vec::new(), Some(r.clone())),
            Verdict::NotLiouvillianWithinBounds => (Vec::new(), Vec::new(), None),
        };
        VerdictJson {
            verdict: v.verdict.tag().into(),
            reason,
            bounds: v.bounds,
            lambda,
            mu,
            columns: v.matrix.labels.clone(),
            rank: v.integrating_factor.rank,
            augmented_rank: v.integrating_factor.augmented_rank,
            first_integral_nullity: v.first_integral_nullity,
            darboux_function: v.darboux_function.clone(),
            divergence: v.divergence.to_string(),
            caveat: v.caveat.clone(),
        }
    }
}

/// Rounds to six decimals so reports stay compact.
pub fn round6(v: f64) -> f64 {
    (v * 1e6).round() / 1e6
}
