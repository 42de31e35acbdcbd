//! Dormand–Prince 5(4) integration on the Poincaré disc with chart switching.

use crate::compactify::{to_chart, Chart};
use crate::exactalg::rat::to_f64;
use crate::exactalg::{MPoly, Rat, Var};
use crate::modelio::PlanarSystem;
use num_traits::Zero;
use serde::Serialize;

/// Leave the central chart above this `|x| + |y|`.
pub const CHART_OUT: f64 = 10.0;
/// Return to the central chart below this `|x| + |y|`.
pub const CHART_IN: f64 = CHART_OUT / 2.0;
/// Switch between U1 and U2 when `|u|` exceeds this.
pub const AXIS_SWITCH: f64 = 2.0;
pub const CONVERGE_DIST: f64 = 1e-8;
pub const CONVERGE_SPEED: f64 = 1e-10;
const MAX_STEPS: usize = 400_000;
/// Minimum disc displacement between recorded points.
const RECORD_SPACING: f64 = 1e-3;

/// Polynomial compiled to binary64 for the integrator.
#[derive(Clone, Debug)]
pub struct F64Poly {
    terms: Vec<(i32, i32, f64)>,
}

impl F64Poly {
    pub fn new(p: &MPoly) -> Self {
        F64Poly {
            terms: p
                .terms()
                .map(|(m, c)| (m.x as i32, m.y as i32, to_f64(c)))
                .collect(),
        }
    }

    pub fn eval(&self, a: f64, b: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(i, j, c)| c * a.powi(i) * b.powi(j))
            .sum()
    }
}

/// Where a state lives: the finite plane, or an equator chart on the side
/// `s` (`s = -1` is the V chart).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Location {
    Central,
    /// `x = s/v, y = s u/v`.
    U1 {
        s: i8,
    },
    /// `x = s u/v, y = s/v`.
    U2 {
        s: i8,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct State {
    pub loc: Location,
    pub a: f64,
    pub b: f64,
}

impl State {
    pub fn plane(x: f64, y: f64) -> Self {
        State {
            loc: Location::Central,
            a: x,
            b: y,
        }
    }

    /// Point on the closed unit disc.
    pub fn disc(&self) -> [f64; 2] {
        match self.loc {
            Location::Central => {
                let n = (1.0 + self.a * self.a + self.b * self.b).sqrt();
                [self.a / n, self.b / n]
            }
            Location::U1 { s } => {
                let s = s as f64;
                let n = (1.0 + self.a * self.a + self.b * self.b).sqrt();
                [s / n, s * self.a / n]
            }
            Location::U2 { s } => {
                let s = s as f64;
                let n = (1.0 + self.a * self.a + self.b * self.b).sqrt();
                [s * self.a / n, s / n]
            }
        }
    }

    /// Finite-plane coordinates, `None` on the equator.
    pub fn to_plane(&self) -> Option<(f64, f64)> {
        match self.loc {
            Location::Central => Some((self.a, self.b)),
            _ if self.b <= 0.0 => None,
            Location::U1 { s } => {
                let s = s as f64;
                Some((s / self.b, s * self.a / self.b))
            }
            Location::U2 { s } => {
                let s = s as f64;
                Some((s * self.a / self.b, s / self.b))
            }
        }
    }
}

pub fn disc_distance(p: [f64; 2], q: [f64; 2]) -> f64 {
    (p[0] - q[0]).hypot(p[1] - q[1])
}

/// Which invariant axis a trajectory is confined to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxisLock {
    None,
    /// `y = 0`.
    XAxis,
    /// `x = 0`.
    YAxis,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    ConvergedToEquilibrium,
    ReachedTmax,
    ReachedBoundary,
    StepUnderflow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rtol: 1e-9,
            atol: 1e-12,
        }
    }
}

/// Precompiled chart fields and the known equilibria of one system.
#[derive(Clone, Debug)]
pub struct Flow {
    central: [F64Poly; 2],
    u1: [F64Poly; 2],
    u2: [F64Poly; 2],
    /// `(-1)^(d+1)`: the V-chart factor.
    v_sign: f64,
    pub x_axis_invariant: bool,
    pub y_axis_invariant: bool,
    /// Disc positions of all known equilibria.
    pub equilibria: Vec<[f64; 2]>,
}

impl Flow {
    pub fn new(sys: &PlanarSystem, equilibria: Vec<[f64; 2]>) -> Self {
        let c1 = to_chart(sys, Chart::U1);
        let c2 = to_chart(sys, Chart::U2);
        let zero = Rat::zero();
        Flow {
            central: [F64Poly::new(&sys.p), F64Poly::new(&sys.q)],
            u1: [F64Poly::new(&c1.du), F64Poly::new(&c1.dv)],
            u2: [F64Poly::new(&c2.du), F64Poly::new(&c2.dv)],
            v_sign: if sys.degree().is_multiple_of(2) {
                -1.0
            } else {
                1.0
            },
            x_axis_invariant: sys.q.substitute(Var::Y, &zero).is_zero(),
            y_axis_invariant: sys.p.substitute(Var::X, &zero).is_zero(),
            equilibria,
        }
    }

    fn field(&self, loc: Location, a: f64, b: f64, lock: AxisLock) -> [f64; 2] {
        let (f, s) = match loc {
            Location::Central => (&self.central, 1),
            Location::U1 { s } => (&self.u1, s),
            Location::U2 { s } => (&self.u2, s),
        };
        // s = -1: the V chart, whose standard coordinate is -v
        let mut v = if s < 0 {
            let k = self.v_sign;
            [k * f[0].eval(a, -b), -k * f[1].eval(a, -b)]
        } else {
            [f[0].eval(a, b), f[1].eval(a, b)]
        };
        match (lock, loc) {
            (AxisLock::XAxis, Location::Central) => v[1] = 0.0,
            (AxisLock::YAxis, Location::Central) => v[0] = 0.0,
            (AxisLock::XAxis, Location::U1 { .. }) | (AxisLock::YAxis, Location::U2 { .. }) => {
                v[0] = 0.0
            }
            _ => {}
        }
        v
    }

    fn near_equilibrium(&self, p: [f64; 2]) -> bool {
        self.equilibria
            .iter()
            .any(|e| disc_distance(*e, p) < CONVERGE_DIST)
    }
}

// Re-expresses a state in the chart preferred at its position.
fn rechart(st: State) -> State {
    match st.loc {
        Location::Central => {
            let (x, y) = (st.a, st.b);
            if x.abs() + y.abs() <= CHART_OUT {
                return st;
            }
            if x.abs() >= y.abs() {
                State {
                    loc: Location::U1 {
                        s: x.signum() as i8,
                    },
                    a: y / x,
                    b: 1.0 / x.abs(),
                }
            } else {
                State {
                    loc: Location::U2 {
                        s: y.signum() as i8,
                    },
                    a: x / y,
                    b: 1.0 / y.abs(),
                }
            }
        }
        Location::U1 { s } | Location::U2 { s } => {
            let (u, v) = (st.a, st.b);
            if v > 0.0 && (1.0 + u.abs()) / v < CHART_IN {
                let (x, y) = st.to_plane().unwrap();
                return State::plane(x, y);
            }
            if u.abs() <= AXIS_SWITCH {
                return st;
            }
            let s2 = (s as f64 * u.signum()) as i8;
            let loc = match st.loc {
                Location::U1 { .. } => Location::U2 { s: s2 },
                _ => Location::U1 { s: s2 },
            };
            State {
                loc,
                a: 1.0 / u,
                b: v / u.abs(),
            }
        }
    }
}

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// One Dormand–Prince step; returns the new point and the error estimate.
fn dopri_step(
    f: &dyn Fn(f64, f64) -> [f64; 2],
    y: [f64; 2],
    k1: [f64; 2],
    h: f64,
) -> ([f64; 2], [f64; 2], [f64; 2]) {
    let at = |c: &[(f64, [f64; 2])]| {
        let mut p = y;
        for (w, k) in c {
            p[0] += h * w * k[0];
            p[1] += h * w * k[1];
        }
        f(p[0], p[1])
    };
    let k2 = at(&[(A21, k1)]);
    let k3 = at(&[(A31, k1), (A32, k2)]);
    let k4 = at(&[(A41, k1), (A42, k2), (A43, k3)]);
    let k5 = at(&[(A51, k1), (A52, k2), (A53, k3), (A54, k4)]);
    let k6 = at(&[(A61, k1), (A62, k2), (A63, k3), (A64, k4), (A65, k5)]);
    let mut yn = y;
    for i in 0..2 {
        yn[i] += h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
    }
    let k7 = f(yn[0], yn[1]);
    let mut err = [0.0; 2];
    for i in 0..2 {
        err[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
    }
    (yn, err, k7)
}

/// An integrated orbit in disc coordinates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Orbit {
    pub points: Vec<[f64; 2]>,
    pub times: Vec<f64>,
    pub reason: Termination,
    pub end: State,
}

impl Orbit {
    pub fn last_disc(&self) -> [f64; 2] {
        *self.points.last().unwrap()
    }
}

/// Integrates from `start` until convergence, `tmax`, the equator or step
/// underflow.
pub fn integrate(
    flow: &Flow,
    start: State,
    dir: Direction,
    tmax: f64,
    tol: Tolerances,
    lock: AxisLock,
) -> Orbit {
    let sgn = match dir {
        Direction::Forward => 1.0,
        Direction::Backward => -1.0,
    };
    let mut st = rechart(start);
    let mut t = 0.0;
    let mut points = vec![st.disc()];
    let mut times = vec![0.0];
    let mut h: f64 = 1e-2;
    let mut reason = Termination::ReachedTmax;
    let finish = |points: &mut Vec<[f64; 2]>, times: &mut Vec<f64>, st: &State, t: f64| {
        let d = st.disc();
        if *points.last().unwrap() != d {
            points.push(d);
            times.push(t);
        }
    };
    for _ in 0..MAX_STEPS {
        let loc = st.loc;
        let f = |a: f64, b: f64| {
            let v = flow.field(loc, a, b, lock);
            [sgn * v[0], sgn * v[1]]
        };
        let k1 = f(st.a, st.b);
        let speed = k1[0].hypot(k1[1]);
        if speed < CONVERGE_SPEED && flow.near_equilibrium(st.disc()) {
            reason = Termination::ConvergedToEquilibrium;
            break;
        }
        if t >= tmax {
            break;
        }
        if loc != Location::Central && st.b < 0.0 {
            reason = Termination::ReachedBoundary;
            break;
        }
        let max_move = if loc == Location::Central { 1.0 } else { 0.1 };
        // cap the step by the remaining time and a displacement bound
        let mut hh = h.min(tmax - t);
        if speed > 0.0 {
            hh = hh.min(max_move / speed);
        }
        let floor = 1e-14 * t.abs().max(1.0);
        let mut accepted = None;
        while hh >= floor {
            let (yn, err, _) = dopri_step(&f, [st.a, st.b], k1, hh);
            let e = (0..2)
                .map(|i| {
                    let sc = tol.atol + tol.rtol * [st.a, st.b][i].abs().max(yn[i].abs());
                    (err[i] / sc).powi(2)
                })
                .sum::<f64>()
                / 2.0;
            let e = e.sqrt();
            let dy = (yn[0] - st.a).hypot(yn[1] - st.b);
            if yn.iter().all(|v| v.is_finite()) && e <= 1.0 && dy <= 2.0 * max_move {
                let fac = if e == 0.0 {
                    5.0
                } else {
                    (0.9 * e.powf(-0.2)).clamp(0.2, 5.0)
                };
                accepted = Some((yn, hh, hh * fac));
                break;
            }
            let fac = if e.is_finite() {
                (0.9 * e.powf(-0.2)).clamp(0.1, 0.5)
            } else {
                0.1
            };
            hh *= fac;
        }
        let Some((yn, used, next)) = accepted else {
            reason = Termination::StepUnderflow;
            break;
        };
        t += used;
        h = next;
        st = rechart(State {
            loc,
            a: yn[0],
            b: yn[1],
        });
        let d = st.disc();
        if disc_distance(d, *points.last().unwrap()) >= RECORD_SPACING {
            points.push(d);
            times.push(t);
        }
    }
    finish(&mut points, &mut times, &st, t);
    Orbit {
        points,
        times,
        reason,
        end: st,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat::int;

    fn linear(a: i64, b: i64, c: i64, d: i64) -> PlanarSystem {
        PlanarSystem::new(
            MPoly::x().scale(&int(a)) + MPoly::y().scale(&int(b)),
            MPoly::x().scale(&int(c)) + MPoly::y().scale(&int(d)),
        )
    }

    #[test]
    fn exponential_decay_is_accurate() {
        let sys = linear(-1, 0, 0, -2);
        let flow = Flow::new(&sys, vec![]);
        let o = integrate(
            &flow,
            State::plane(1.0, 1.0),
            Direction::Forward,
            3.0,
            Tolerances::default(),
            AxisLock::None,
        );
        let (x, y) = o.end.to_plane().unwrap();
        assert!((x - (-3f64).exp()).abs() < 1e-8);
        assert!((y - (-6f64).exp()).abs() < 1e-8);
        assert_eq!(o.reason, Termination::ReachedTmax);
    }

    #[test]
    fn rotation_stays_on_circle() {
        let sys = linear(0, 1, -1, 0);
        let flow = Flow::new(&sys, vec![]);
        let o = integrate(
            &flow,
            State::plane(1.0, 0.0),
            Direction::Forward,
            20.0,
            Tolerances::default(),
            AxisLock::None,
        );
        let (x, y) = o.end.to_plane().unwrap();
        assert!((x.hypot(y) - 1.0).abs() < 1e-7);
    }

    #[test]
    fn escapes_through_charts() {
        // x' = x, y' = y/2 leaves every compact set
        let sys = PlanarSystem::new(MPoly::x(), MPoly::y().scale(&Rat::new(1.into(), 2.into())));
        let flow = Flow::new(&sys, vec![[1.0, 0.0]]);
        let o = integrate(
            &flow,
            State::plane(1.0, 1.0),
            Direction::Forward,
            1e4,
            Tolerances::default(),
            AxisLock::None,
        );
        assert_eq!(o.reason, Termination::ConvergedToEquilibrium);
        assert!(matches!(o.end.loc, Location::U1 { s: 1 }));
        assert!(o.points.iter().all(|p| p[0].hypot(p[1]) <= 1.0));
    }

    #[test]
    fn equilibrium_seed_is_constant() {
        let sys = linear(-1, 0, 0, -1);
        let flow = Flow::new(&sys, vec![[0.0, 0.0]]);
        let o = integrate(
            &flow,
            State::plane(0.0, 0.0),
            Direction::Forward,
            10.0,
            Tolerances::default(),
            AxisLock::None,
        );
        assert_eq!(o.reason, Termination::ConvergedToEquilibrium);
        assert_eq!(o.points.len(), 1);
    }

    #[test]
    fn chart_fields_point_along_the_flow() {
        // degree 2, so the V charts carry a sign flip
        let sys = PlanarSystem::new(
            MPoly::x() * MPoly::y() + MPoly::one(),
            MPoly::x() * MPoly::x() - MPoly::y().scale(&int(3)),
        );
        let flow = Flow::new(&sys, vec![]);
        for (x, y) in [
            (-30.0, 4.0),
            (25.0, -7.0),
            (3.0, -40.0),
            (-2.0, 35.0),
            (-20.0, -30.0),
        ] {
            let st = rechart(State::plane(x, y));
            let f = flow.field(st.loc, st.a, st.b, AxisLock::None);
            let h = 1e-7;
            let (x2, y2) = State {
                a: st.a + h * f[0],
                b: st.b + h * f[1],
                ..st
            }
            .to_plane()
            .unwrap();
            let g = flow.field(Location::Central, x, y, AxisLock::None);
            let dot = (x2 - x) * g[0] + (y2 - y) * g[1];
            let cross = (x2 - x) * g[1] - (y2 - y) * g[0];
            assert!(dot > 0.0, "{:?}", st.loc);
            assert!(cross.abs() < 1e-4 * dot.abs(), "{:?}", st.loc);
        }
    }

    #[test]
    fn chart_round_trip() {
        for (x, y) in [(30.0, 4.0), (-25.0, 1.0), (2.0, -40.0), (3.0, 12.0)] {
            let st = rechart(State::plane(x, y));
            assert_ne!(st.loc, Location::Central);
            let (x2, y2) = st.to_plane().unwrap();
            assert!((x - x2).abs() < 1e-12 && (y - y2).abs() < 1e-12);
            let d0 = State::plane(x, y).disc();
            assert!(disc_distance(d0, st.disc()) < 1e-14);
        }
    }
}
