//! Global phase portraits on the Poincaré disc.

pub mod integrate;
pub mod render;

pub use integrate::{
    disc_distance, integrate, AxisLock, Direction, Flow, Location, Orbit, State, Termination,
    Tolerances,
};
pub use render::{render_json, render_svg, SvgStyle};

use crate::compactify::{
    blowups_at, infinite_equilibria, sector_synthesis, sectors_of_hyperbolic, to_chart, Chart,
    ChartSystem, SectorDecomposition,
};
use crate::equilibria::{
    finite_equilibria, label_leslie, Classification, EquilibriumError, EquilibriumRecord,
};
use crate::exactalg::rat::{fmt_rat, sign, to_f64};
use crate::exactalg::Rat;
use crate::modelio::{ParamBindings, PlanarSystem};
use crate::report::EquilibriumJson;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

/// Default separatrix offset in the disc metric.
pub const DEFAULT_EPS: f64 = 1e-3;
pub const DEFAULT_TMAX: f64 = 1e4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PortraitError {
    #[error(transparent)]
    Equilibria(#[from] EquilibriumError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    Generic,
    Separatrix,
    Axis,
}

/// Center-manifold data of a saddle-node, in local coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SaddleNodeGeometry {
    pub center: [f64; 2],
    pub hyperbolic: [f64; 2],
    pub attracting: bool,
    pub a2_sign: i32,
}

/// An equilibrium placed on the disc.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Marker {
    pub location: Location,
    pub state: State,
    pub disc: [f64; 2],
    #[serde(skip)]
    pub classification: Classification,
    #[serde(flatten)]
    pub record: EquilibriumJson,
    #[serde(skip)]
    pub jacobian: [[f64; 2]; 2],
    #[serde(skip)]
    pub saddle_node: Option<SaddleNodeGeometry>,
}

impl Marker {
    /// Builds a marker for a record that lives in `loc` (chart coordinates
    /// are `(u, v)` with `v = 0`).
    pub fn new(rec: &EquilibriumRecord, loc: Location) -> Self {
        let (a, b) = rec.point.approx();
        let state = State { loc, a, b };
        let saddle_node = match (rec.classification, &rec.reduction) {
            (Classification::SaddleNode { attracting }, Some(r)) => Some(SaddleNodeGeometry {
                center: [to_f64(&r.center[0]), to_f64(&r.center[1])],
                hyperbolic: [to_f64(&r.hyperbolic[0]), to_f64(&r.hyperbolic[1])],
                attracting,
                a2_sign: sign(&r.a2),
            }),
            _ => None,
        };
        Marker {
            location: loc,
            state,
            disc: state.disc(),
            classification: rec.classification,
            record: EquilibriumJson::new(rec),
            jacobian: rec.jacobian.approx(),
            saddle_node,
        }
    }

    fn in_positive_quadrant(&self) -> bool {
        self.disc[0] >= -1e-15 && self.disc[1] >= -1e-15
    }
}

/// A seed for one trajectory.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Seed {
    pub id: usize,
    pub start: State,
    pub direction: Direction,
    pub role: Role,
    pub lock: AxisLock,
    pub note: String,
}

// Moves `p` by `delta * e` in local coordinates and returns the state.
fn offset(p: &State, e: [f64; 2], delta: f64) -> State {
    State {
        a: p.a + delta * e[0],
        b: p.b + delta * e[1],
        ..*p
    }
}

// Local step length giving a disc displacement of about `eps`.
fn disc_step(p: &State, e: [f64; 2], eps: f64) -> f64 {
    let probe = 1e-7;
    let moved = disc_distance(p.disc(), offset(p, e, probe).disc());
    if moved == 0.0 {
        eps
    } else {
        eps * probe / moved
    }
}

fn normalize(v: [f64; 2]) -> [f64; 2] {
    let n = v[0].hypot(v[1]);
    [v[0] / n, v[1] / n]
}

/// Unit eigenvector of a real eigenvalue `l` of `j`.
pub fn eigenvector(j: &[[f64; 2]; 2], l: f64) -> [f64; 2] {
    let a = [j[0][1], l - j[0][0]];
    let b = [l - j[1][1], j[1][0]];
    let (na, nb) = (a[0].hypot(a[1]), b[0].hypot(b[1]));
    if na.max(nb) < 1e-300 {
        return [1.0, 0.0];
    }
    normalize(if na >= nb { a } else { b })
}

fn real_eigs(j: &[[f64; 2]; 2]) -> Option<(f64, f64)> {
    let tr = j[0][0] + j[1][1];
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let disc = tr * tr - 4.0 * det;
    (disc >= 0.0).then(|| {
        let s = disc.sqrt();
        ((tr - s) / 2.0, (tr + s) / 2.0)
    })
}

fn axis_lock(flow: &Flow, st: &State) -> AxisLock {
    match st.loc {
        Location::Central if st.b == 0.0 && flow.x_axis_invariant => AxisLock::XAxis,
        Location::Central if st.a == 0.0 && flow.y_axis_invariant => AxisLock::YAxis,
        Location::U1 { .. } if st.a == 0.0 && flow.x_axis_invariant => AxisLock::XAxis,
        Location::U2 { .. } if st.a == 0.0 && flow.y_axis_invariant => AxisLock::YAxis,
        _ => AxisLock::None,
    }
}

/// Separatrix seeds: four per saddle along its eigendirections (unstable
/// ones integrated forward, stable ones backward) and three per
/// saddle-node, namely both sides of the hyperbolic direction plus the one
/// side of the center direction that carries a separatrix. At the equator
/// only directions pointing into the disc are seeded.
pub fn separatrix_seeds(markers: &[Marker], flow: &Flow, eps: f64) -> Vec<Seed> {
    let seed = |m: &Marker, e: [f64; 2], dir: Direction, note: String| -> Option<Seed> {
        if m.location != Location::Central && e[1] <= 1e-12 {
            return None;
        }
        let start = offset(&m.state, e, disc_step(&m.state, e, eps));
        Some(Seed {
            id: 0,
            start,
            direction: dir,
            role: Role::Separatrix,
            lock: axis_lock(flow, &start),
            note,
        })
    };
    let both = |m: &Marker, e: [f64; 2], dir: Direction, what: &str| {
        [(1.0, "+"), (-1.0, "-")]
            .into_iter()
            .filter_map(|(k, tag)| {
                seed(
                    m,
                    [k * e[0], k * e[1]],
                    dir,
                    format!("{} {what} {tag}", m.classification),
                )
            })
            .collect::<Vec<_>>()
    };
    let mut out = Vec::new();
    for m in markers {
        match (m.classification, m.saddle_node) {
            (Classification::Saddle, _) => {
                let Some((ls, lu)) = real_eigs(&m.jacobian) else {
                    continue;
                };
                out.extend(both(
                    m,
                    eigenvector(&m.jacobian, lu),
                    Direction::Forward,
                    "unstable",
                ));
                out.extend(both(
                    m,
                    eigenvector(&m.jacobian, ls),
                    Direction::Backward,
                    "stable",
                ));
            }
            (Classification::SaddleNode { .. }, Some(g)) => {
                let hdir = if g.attracting {
                    Direction::Backward
                } else {
                    Direction::Forward
                };
                out.extend(both(m, normalize(g.hyperbolic), hdir, "hyperbolic"));
                // the separatrix branch of the center manifold
                let (side, cdir) = if g.attracting {
                    (g.a2_sign as f64, Direction::Forward)
                } else {
                    (-g.a2_sign as f64, Direction::Backward)
                };
                let c = normalize(g.center);
                out.extend(seed(
                    m,
                    [side * c[0], side * c[1]],
                    cdir,
                    format!("{} center", m.classification),
                ));
            }
            _ => {}
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct PortraitOptions {
    pub quadrant_only: bool,
    pub tmax: f64,
    pub tol: Tolerances,
    pub eps: f64,
    /// Generic seeds per radial and angular direction.
    pub grid: usize,
    /// Leslie–Gower bindings, for regime and labels.
    pub leslie: Option<ParamBindings>,
}

impl Default for PortraitOptions {
    fn default() -> Self {
        PortraitOptions {
            quadrant_only: true,
            tmax: DEFAULT_TMAX,
            tol: Tolerances::default(),
            eps: DEFAULT_EPS,
            grid: 8,
            leslie: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Regime {
    pub one_minus_ac: String,
    pub sign: i32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub seed: usize,
    pub role: Role,
    pub direction: Direction,
    pub lock: AxisLock,
    pub points: Vec<[f64; 2]>,
    pub reason: Termination,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PortraitDoc {
    pub system: String,
    pub params: BTreeMap<String, String>,
    pub regime: Option<Regime>,
    pub quadrant_only: bool,
    pub equilibria: Vec<Marker>,
    pub trajectories: Vec<Trajectory>,
    /// Not certified: separatrix connections are drawn, not proved.
    pub canonical_regions: Option<u32>,
}

/// Finite and infinite equilibria as disc markers, with sector data for
/// points at infinity. Also returns every equilibrium's disc position for
/// convergence detection, regardless of the quadrant filter.
pub fn equilibrium_markers(
    sys: &PlanarSystem,
    leslie: Option<&ParamBindings>,
) -> Result<Vec<Marker>, PortraitError> {
    let mut finite = finite_equilibria(sys, false)?;
    if let Some(b) = leslie {
        label_leslie(&mut finite, b);
    }
    let mut out: Vec<Marker> = finite
        .iter()
        .map(|r| Marker::new(r, Location::Central))
        .collect();
    if sys.degree() == 0 {
        return Ok(out);
    }
    for (uchart, vchart, is_u1) in [(Chart::U1, Chart::V1, true), (Chart::U2, Chart::V2, false)] {
        for (chart, s) in [(uchart, 1i8), (vchart, -1i8)] {
            let cs = to_chart(sys, chart);
            let Ok(recs) = infinite_equilibria(&cs) else {
                continue;
            };
            for rec in recs {
                let on_axis = rec.point.x.exact().is_some_and(|u| u.is_zero());
                // U2 contributes only its origin; the rest is seen from U1
                if !is_u1 && !on_axis {
                    continue;
                }
                let loc = if is_u1 {
                    Location::U1 { s }
                } else {
                    Location::U2 { s }
                };
                let mut m = Marker::new(&rec, loc);
                let sectors = infinite_sectors(&cs, &rec);
                m.record = m.record.with_sectors(sectors);
                out.push(m);
            }
        }
    }
    Ok(out)
}

fn infinite_sectors(cs: &ChartSystem, rec: &EquilibriumRecord) -> SectorDecomposition {
    if rec.classification != Classification::DegenerateNeedsBlowup {
        return sectors_of_hyperbolic(rec.classification);
    }
    let Some((u, _)) = rec.point.as_exact() else {
        return sectors_of_hyperbolic(rec.classification);
    };
    match blowups_at(&cs.system(), u, &Rat::zero()) {
        Ok((xb, yb)) => sector_synthesis(&xb, &yb),
        Err(_) => sectors_of_hyperbolic(rec.classification),
    }
}

fn generic_seeds(opts: &PortraitOptions) -> Vec<State> {
    let n = opts.grid;
    let (turn, na) = if opts.quadrant_only {
        (std::f64::consts::FRAC_PI_2, n)
    } else {
        (std::f64::consts::TAU, 4 * n)
    };
    let mut out = Vec::new();
    for i in 0..n {
        let r = (i + 1) as f64 / (n + 1) as f64;
        for j in 0..na {
            let th = if opts.quadrant_only {
                (j + 1) as f64 / (na + 1) as f64 * turn
            } else {
                (j as f64 + 0.5) / na as f64 * turn
            };
            let (y1, y2) = (r * th.cos(), r * th.sin());
            let k = (1.0 - r * r).sqrt();
            out.push(State::plane(y1 / k, y2 / k));
        }
    }
    out
}

fn axis_seeds(flow: &Flow, opts: &PortraitOptions) -> Vec<State> {
    let radii = [0.2, 0.5, 0.8, 0.95];
    let signs: &[f64] = if opts.quadrant_only {
        &[1.0]
    } else {
        &[1.0, -1.0]
    };
    let mut out = Vec::new();
    for &s in signs {
        for r in radii {
            let t = s * r / (1.0 - r * r).sqrt();
            if flow.x_axis_invariant {
                out.push(State::plane(t, 0.0));
            }
            if flow.y_axis_invariant {
                out.push(State::plane(0.0, t));
            }
        }
    }
    out
}

fn in_quadrant(st: &State) -> bool {
    let d = st.disc();
    d[0] >= 0.0 && d[1] >= 0.0
}

/// Computes equilibria, seeds and trajectories.
pub fn build_portrait(
    sys: &PlanarSystem,
    opts: &PortraitOptions,
) -> Result<PortraitDoc, PortraitError> {
    let all = equilibrium_markers(sys, opts.leslie.as_ref())?;
    let flow = Flow::new(sys, all.iter().map(|m| m.disc).collect());
    let markers: Vec<Marker> = all
        .into_iter()
        .filter(|m| !opts.quadrant_only || m.in_positive_quadrant())
        .collect();
    let mut seeds = Vec::new();
    for st in generic_seeds(opts) {
        for dir in [Direction::Forward, Direction::Backward] {
            seeds.push(Seed {
                id: 0,
                start: st,
                direction: dir,
                role: Role::Generic,
                lock: AxisLock::None,
                note: String::new(),
            });
        }
    }
    for st in axis_seeds(&flow, opts) {
        for dir in [Direction::Forward, Direction::Backward] {
            seeds.push(Seed {
                id: 0,
                start: st,
                direction: dir,
                role: Role::Axis,
                lock: axis_lock(&flow, &st),
                note: String::new(),
            });
        }
    }
    seeds.extend(
        separatrix_seeds(&markers, &flow, opts.eps)
            .into_iter()
            .filter(|s| !opts.quadrant_only || in_quadrant(&s.start)),
    );
    for (i, s) in seeds.iter_mut().enumerate() {
        s.id = i;
    }
    let trajectories: Vec<Trajectory> = seeds
        .par_iter()
        .map(|s| {
            let o = integrate(&flow, s.start, s.direction, opts.tmax, opts.tol, s.lock);
            Trajectory {
                seed: s.id,
                role: s.role,
                direction: s.direction,
                lock: s.lock,
                points: o.points,
                reason: o.reason,
            }
        })
        .collect();
    let regime = opts.leslie.as_ref().map(|b| Regime {
        one_minus_ac: fmt_rat(&b.one_minus_ac()),
        sign: b.regime_sign(),
    });
    Ok(PortraitDoc {
        system: sys.to_string(),
        params: sys
            .params
            .iter()
            .map(|(k, v)| (k.clone(), fmt_rat(v)))
            .collect(),
        regime,
        quadrant_only: opts.quadrant_only,
        equilibria: markers,
        trajectories,
        canonical_regions: None,
    })
}
