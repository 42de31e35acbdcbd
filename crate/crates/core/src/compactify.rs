//! Poincaré compactification charts, infinite equilibria, directional
//! blow-ups and sector synthesis.

use crate::equilibria::{AlgebraicPoint, Classification, Coord, EquilibriumRecord};
use crate::exactalg::roots::{all_real_roots, default_width, refine};
use crate::exactalg::{MPoly, Monomial, Rat, UPoly, Var};
use crate::modelio::PlanarSystem;
use num_traits::{One, Zero};
use serde::Serialize;
use std::fmt;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Chart {
    U1,
    U2,
    /// The finite plane itself.
    U3,
    V1,
    V2,
}

impl Chart {
    pub fn is_infinity_chart(self) -> bool {
        self != Chart::U3
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompactifyError {
    #[error("chart {0} does not contain the equator")]
    NotInfinityChart(Chart),
    #[error("the equator of chart {0} is a line of equilibria")]
    LineOfEquilibria(Chart),
    #[error("the origin is not an equilibrium")]
    OriginNotEquilibrium,
    #[error("the divisor of the {0:?} blow-up is a line of equilibria (dicritical)")]
    Dicritical(BlowupDirection),
}

/// A chart of the Poincaré sphere. Polynomials are stored in the crate's
/// `(x, y)` slots, read here as `(u, v)`; `v = 0` is the equator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartSystem {
    pub chart: Chart,
    pub du: MPoly,
    pub dv: MPoly,
    pub parent: PlanarSystem,
    pub parent_degree: u32,
}

impl ChartSystem {
    pub fn system(&self) -> PlanarSystem {
        PlanarSystem {
            p: self.du.clone(),
            q: self.dv.clone(),
            params: self.parent.params.clone(),
            var_names: ["u".into(), "v".into()],
        }
    }
}

/// Chart system for `chart`.
///
/// With `P = Σ P_k` split into homogeneous parts, U1 is
/// `u' = Σ (Q_k(1,u) - u P_k(1,u)) v^(d-k)`, `v' = -Σ P_k(1,u) v^(d-k+1)`
/// and U2 swaps the roles of `P`, `Q` with arguments `(u, 1)`.
pub fn to_chart(sys: &PlanarSystem, chart: Chart) -> ChartSystem {
    let d = sys.degree();
    let (du, dv) = match chart {
        Chart::U3 => (sys.p.clone(), sys.q.clone()),
        Chart::U1 | Chart::V1 => equator_chart(&sys.p, &sys.q, d, false),
        Chart::U2 | Chart::V2 => equator_chart(&sys.q, &sys.p, d, true),
    };
    let flip = matches!(chart, Chart::V1 | Chart::V2) && d.is_multiple_of(2);
    let (du, dv) = if flip { (-du, -dv) } else { (du, dv) };
    ChartSystem {
        chart,
        du,
        dv,
        parent: sys.clone(),
        parent_degree: d,
    }
}

// `lead` is the component along the chart's axis (P for U1, Q for U2) and
// `other` the transverse one. `swap` dehomogenizes at y = 1 instead of x = 1.
fn equator_chart(lead: &MPoly, other: &MPoly, d: u32, swap: bool) -> (MPoly, MPoly) {
    // f(i, j) -> u^(j or i) v^(d - i - j) [* extra power of v]
    let dehom = |p: &MPoly, extra: u32| {
        MPoly::from_terms(p.terms().map(|(m, c)| {
            let e = if swap { m.x } else { m.y };
            (Monomial::new(e, d - m.degree() + extra), c.clone())
        }))
    };
    let lead0 = dehom(lead, 0);
    let du = dehom(other, 0) - MPoly::x() * lead0;
    let dv = -dehom(lead, 1);
    (du, dv)
}

/// Equilibria of an equator chart lying on `v = 0`, classified with the
/// chart Jacobian.
pub fn infinite_equilibria(cs: &ChartSystem) -> Result<Vec<EquilibriumRecord>, CompactifyError> {
    if !cs.chart.is_infinity_chart() {
        return Err(CompactifyError::NotInfinityChart(cs.chart));
    }
    let restricted = cs.du.substitute(Var::Y, &Rat::zero());
    let r = restricted.to_upoly(Var::X).expect("univariate after v = 0");
    if r.is_zero() {
        return Err(CompactifyError::LineOfEquilibria(cs.chart));
    }
    if r.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let sys = cs.system();
    Ok(all_real_roots(&r)
        .into_iter()
        .map(|iv| {
            let pt = AlgebraicPoint {
                x: root_coord(&r, iv),
                y: Coord::Exact(Rat::zero()),
            };
            let mut rec = EquilibriumRecord::new(&sys, pt);
            rec.label = Some(format!("{}:{}", cs.chart, rec.point));
            rec
        })
        .collect())
}

fn root_coord(p: &UPoly, iv: crate::exactalg::RootInterval) -> Coord {
    if let Some(r) = iv.exact.clone() {
        return Coord::Exact(r);
    }
    let sf = p.squarefree();
    let iv = refine(&sf, &iv, &default_width());
    match iv.exact.clone() {
        Some(r) => Coord::Exact(r),
        None => Coord::Algebraic { poly: sf, iv },
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BlowupDirection {
    /// `(u, v) -> (u, u w)`; exceptional divisor `u = 0`.
    X,
    /// `(u, v) -> (z v, v)`; exceptional divisor `v = 0`.
    Y,
}

/// Orientation bookkeeping for blowing down.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BlowupFlags {
    /// Time was divided by an odd power of the divisor variable, so orbits
    /// on its negative side run backwards relative to the original field.
    pub reversed_on_negative_side: bool,
    /// Quadrants of the blown-up plane exchanged by the blow-down map,
    /// numbered 1..4 counter-clockwise.
    pub swapped_quadrants: [u8; 2],
}

/// A directional blow-up with uniform rescaling. Polynomials live in the
/// `(x, y)` slots as `(u, w)` for [`BlowupDirection::X`] and `(z, v)` for
/// [`BlowupDirection::Y`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupSystem {
    pub direction: BlowupDirection,
    pub p: MPoly,
    pub q: MPoly,
    /// Both equations were divided by the divisor variable to this power.
    pub rescale_power: u32,
    pub flags: BlowupFlags,
}

impl BlowupSystem {
    pub fn system(&self) -> PlanarSystem {
        let names = match self.direction {
            BlowupDirection::X => ["u", "w"],
            BlowupDirection::Y => ["z", "v"],
        };
        PlanarSystem {
            p: self.p.clone(),
            q: self.q.clone(),
            params: Default::default(),
            var_names: names.map(String::from),
        }
    }

    pub fn divisor_var(&self) -> Var {
        match self.direction {
            BlowupDirection::X => Var::X,
            BlowupDirection::Y => Var::Y,
        }
    }

    /// Equilibria on the exceptional divisor, classified.
    pub fn divisor_equilibria(&self) -> Result<Vec<EquilibriumRecord>, CompactifyError> {
        let (tangent, along) = match self.direction {
            BlowupDirection::X => (&self.q, Var::Y),
            BlowupDirection::Y => (&self.p, Var::X),
        };
        let r = tangent
            .substitute(self.divisor_var(), &Rat::zero())
            .to_upoly(along)
            .expect("univariate on the divisor");
        if r.is_zero() {
            return Err(CompactifyError::Dicritical(self.direction));
        }
        if r.degree() == Some(0) {
            return Ok(Vec::new());
        }
        let sys = self.system();
        Ok(all_real_roots(&r)
            .into_iter()
            .map(|iv| {
                let c = root_coord(&r, iv);
                let zero = Coord::Exact(Rat::zero());
                let pt = match self.direction {
                    BlowupDirection::X => AlgebraicPoint { x: zero, y: c },
                    BlowupDirection::Y => AlgebraicPoint { x: c, y: zero },
                };
                EquilibriumRecord::new(&sys, pt)
            })
            .collect())
    }

    /// The blown-up field pushed through the blow-down map at a point off
    /// the divisor, multiplied back by the rescaling monomial. Equals the
    /// original field at the image point.
    pub fn blow_down(&self, a: &Rat, b: &Rat) -> (Rat, Rat) {
        let f = self.p.eval(a, b);
        let g = self.q.eval(a, b);
        match self.direction {
            BlowupDirection::X => {
                // (u, v) = (u, u w): u' = U, v' = w U + u W
                let m = num_traits::pow(a.clone(), self.rescale_power as usize);
                let du = &f * &m;
                let dv = (b * &f + a * &g) * &m;
                (du, dv)
            }
            BlowupDirection::Y => {
                // (u, v) = (z v, v): u' = v Z + z V, v' = V
                let m = num_traits::pow(b.clone(), self.rescale_power as usize);
                let du = (b * &f + a * &g) * &m;
                let dv = &g * &m;
                (du, dv)
            }
        }
    }

    /// Blow-down map `(a, b) -> (u, v)`.
    pub fn blow_down_point(&self, a: &Rat, b: &Rat) -> (Rat, Rat) {
        match self.direction {
            BlowupDirection::X => (a.clone(), a * b),
            BlowupDirection::Y => (a * b, b.clone()),
        }
    }
}

/// Both directional blow-ups of `sys` at the equilibrium `(x0, y0)`, after
/// translating it to the origin.
pub fn blowups_at(
    sys: &PlanarSystem,
    x0: &Rat,
    y0: &Rat,
) -> Result<(BlowupSystem, BlowupSystem), CompactifyError> {
    let px = &MPoly::x() + &MPoly::constant(x0.clone());
    let py = &MPoly::y() + &MPoly::constant(y0.clone());
    let shifted = PlanarSystem {
        p: sys.p.compose(&px, &py),
        q: sys.q.compose(&px, &py),
        ..sys.clone()
    };
    Ok((
        directional_blowup(&shifted, BlowupDirection::X)?,
        directional_blowup(&shifted, BlowupDirection::Y)?,
    ))
}

/// Directional blow-up of `sys` at the origin, dividing both equations by
/// the largest common power of the divisor variable.
pub fn directional_blowup(
    sys: &PlanarSystem,
    dir: BlowupDirection,
) -> Result<BlowupSystem, CompactifyError> {
    if !sys.p.coeff(0, 0).is_zero() || !sys.q.coeff(0, 0).is_zero() {
        return Err(CompactifyError::OriginNotEquilibrium);
    }
    let (p, q, var) = match dir {
        BlowupDirection::X => {
            let (u, w) = (MPoly::x(), MPoly::y());
            let uw = &u * &w;
            let fp = sys.p.compose(&u, &uw);
            let fq = sys.q.compose(&u, &uw);
            // w' = (Q - w P) / u
            let dw = (&fq - &(&w * &fp))
                .div_monomial(1, 0)
                .expect("Q - wP vanishes at u = 0");
            (fp, dw, Var::X)
        }
        BlowupDirection::Y => {
            let (z, v) = (MPoly::x(), MPoly::y());
            let zv = &z * &v;
            let fp = sys.p.compose(&zv, &v);
            let fq = sys.q.compose(&zv, &v);
            let dz = (&fp - &(&z * &fq))
                .div_monomial(0, 1)
                .expect("P - zQ vanishes at v = 0");
            (dz, fq, Var::Y)
        }
    };
    let k = [&p, &q]
        .iter()
        .filter_map(|f| f.order_in(var))
        .min()
        .unwrap_or(0);
    let (i, j) = match var {
        Var::X => (k, 0),
        Var::Y => (0, k),
    };
    let p = p.div_monomial(i, j).unwrap();
    let q = q.div_monomial(i, j).unwrap();
    let swapped_quadrants = match dir {
        BlowupDirection::X => [2, 3],
        BlowupDirection::Y => [3, 4],
    };
    Ok(BlowupSystem {
        direction: dir,
        p,
        q,
        rescale_power: k,
        flags: BlowupFlags {
            reversed_on_negative_side: k % 2 == 1,
            swapped_quadrants,
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RayKind {
    /// A single characteristic orbit reaches the point along this direction.
    Saddle,
    /// An open family of orbits reaches the point along this direction.
    Node,
}

/// A characteristic direction found on the exceptional divisor.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Ray {
    pub angle: f64,
    pub kind: RayKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "reason", rename_all = "kebab-case")]
pub enum Resolution {
    Resolved,
    Unresolved(String),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SectorDecomposition {
    pub hyperbolic: u32,
    pub parabolic: u32,
    pub elliptic: u32,
    pub resolution: Resolution,
    pub rays: Vec<Ray>,
}

impl SectorDecomposition {
    fn unresolved(reason: impl Into<String>) -> Self {
        SectorDecomposition {
            hyperbolic: 0,
            parabolic: 0,
            elliptic: 0,
            resolution: Resolution::Unresolved(reason.into()),
            rays: Vec::new(),
        }
    }

    pub fn is_resolved(&self) -> bool {
        self.resolution == Resolution::Resolved
    }
}

/// Sector structure of a hyperbolic equilibrium.
pub fn sectors_of_hyperbolic(class: Classification) -> SectorDecomposition {
    let (h, p) = match class {
        Classification::Saddle => (4, 0),
        Classification::StableNode | Classification::UnstableNode => (0, 1),
        Classification::StableFocus | Classification::UnstableFocus => (0, 0),
        other => return SectorDecomposition::unresolved(format!("{other} is not hyperbolic")),
    };
    SectorDecomposition {
        hyperbolic: h,
        parabolic: p,
        elliptic: 0,
        resolution: Resolution::Resolved,
        rays: Vec::new(),
    }
}

fn ray_kind(rec: &EquilibriumRecord) -> Option<RayKind> {
    match rec.classification {
        Classification::Saddle => Some(RayKind::Saddle),
        c if c.is_node() => Some(RayKind::Node),
        _ => None,
    }
}

/// Sector counts of a degenerate point from its two directional blow-ups.
///
/// Every divisor equilibrium of the x-directional blow-up at `w0` gives the
/// two directions `±(1, w0)`; the y-directional blow-up contributes only the
/// vertical directions through `z = 0`. Between consecutive directions the
/// sector is hyperbolic for two saddles, elliptic for two nodes and
/// parabolic otherwise; adjacent parabolic arcs merge into one sector.
pub fn sector_synthesis(xb: &BlowupSystem, yb: &BlowupSystem) -> SectorDecomposition {
    let mut rays = Vec::new();
    let xs = match xb.divisor_equilibria() {
        Ok(v) => v,
        Err(e) => return SectorDecomposition::unresolved(e.to_string()),
    };
    for rec in &xs {
        let Some(kind) = ray_kind(rec) else {
            return SectorDecomposition::unresolved(format!(
                "divisor point w = {} is {}",
                rec.point.y.describe(),
                rec.classification
            ));
        };
        let w = rec.point.y.approx();
        let a = w.atan();
        rays.push(Ray {
            angle: a.rem_euclid(std::f64::consts::TAU),
            kind,
        });
        rays.push(Ray {
            angle: (a + std::f64::consts::PI).rem_euclid(std::f64::consts::TAU),
            kind,
        });
    }
    let ys = match yb.divisor_equilibria() {
        Ok(v) => v,
        Err(e) => return SectorDecomposition::unresolved(e.to_string()),
    };
    if let Some(rec) = ys
        .iter()
        .find(|r| r.point.x.exact().is_some_and(Zero::is_zero))
    {
        let Some(kind) = ray_kind(rec) else {
            return SectorDecomposition::unresolved(format!(
                "divisor point z = 0 is {}",
                rec.classification
            ));
        };
        rays.push(Ray {
            angle: std::f64::consts::FRAC_PI_2,
            kind,
        });
        rays.push(Ray {
            angle: 3.0 * std::f64::consts::FRAC_PI_2,
            kind,
        });
    }
    if rays.is_empty() {
        return SectorDecomposition::unresolved("no characteristic directions");
    }
    rays.sort_by(|a, b| a.angle.total_cmp(&b.angle));
    let n = rays.len();
    #[derive(PartialEq, Clone, Copy)]
    enum Arc {
        H,
        P,
        E,
    }
    let arcs: Vec<Arc> = (0..n)
        .map(|i| match (rays[i].kind, rays[(i + 1) % n].kind) {
            (RayKind::Saddle, RayKind::Saddle) => Arc::H,
            (RayKind::Node, RayKind::Node) => Arc::E,
            _ => Arc::P,
        })
        .collect();
    let h = arcs.iter().filter(|a| **a == Arc::H).count() as u32;
    let e = arcs.iter().filter(|a| **a == Arc::E).count() as u32;
    let p = if arcs.iter().all(|a| *a == Arc::P) {
        1
    } else {
        // count maximal circular runs of parabolic arcs
        (0..n)
            .filter(|&i| arcs[i] == Arc::P && arcs[(i + n - 1) % n] != Arc::P)
            .count() as u32
    };
    SectorDecomposition {
        hyperbolic: h,
        parabolic: p,
        elliptic: e,
        resolution: Resolution::Resolved,
        rays,
    }
}

/// Ratio `λ` with `T(F_U1) = λ F_U2` at a point of the U1/U2 overlap, where
/// `T` is the derivative of the transition `(u, v) -> (1/u, v/u)`. `None`
/// when the fields are not parallel to relative tolerance `tol`.
pub fn overlap_ratio(sys: &PlanarSystem, u: f64, v: f64, tol: f64) -> Option<f64> {
    let c1 = to_chart(sys, Chart::U1);
    let c2 = to_chart(sys, Chart::U2);
    let (a, b) = (c1.du.eval_f64(u, v), c1.dv.eval_f64(u, v));
    // transition derivative
    let ta = -a / (u * u);
    let tb = (b * u - v * a) / (u * u);
    let (u2, v2) = (1.0 / u, v / u);
    let (c, d) = (c2.du.eval_f64(u2, v2), c2.dv.eval_f64(u2, v2));
    let scale = ta.hypot(tb).max(c.hypot(d));
    if scale == 0.0 {
        return Some(1.0);
    }
    let cross = ta * d - tb * c;
    if cross.abs() > tol * scale * scale {
        return None;
    }
    let lambda = if c.abs() > d.abs() { ta / c } else { tb / d };
    Some(lambda)
}

/// `true` when the V chart equals the U chart times `(-1)^(d+1)`.
pub fn v_chart_matches(sys: &PlanarSystem) -> bool {
    let d = sys.degree();
    let s = if d.is_multiple_of(2) {
        -Rat::one()
    } else {
        Rat::one()
    };
    [(Chart::U1, Chart::V1), (Chart::U2, Chart::V2)]
        .iter()
        .all(|&(u, v)| {
            let cu = to_chart(sys, u);
            let cv = to_chart(sys, v);
            cv.du == cu.du.scale(&s) && cv.dv == cu.dv.scale(&s)
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat::{int, rat};
    use crate::modelio::{leslie_gower_system, parse_system_with, ParamBindings};
    use std::collections::BTreeMap;

    fn lg(a: Rat, b: Rat, c: Rat) -> PlanarSystem {
        leslie_gower_system(&ParamBindings::new(a, b, c))
    }

    fn chart_from_text(src: &str, a: &Rat, b: &Rat, c: &Rat) -> (MPoly, MPoly) {
        let mut m = BTreeMap::new();
        m.insert("A".to_string(), a.clone());
        m.insert("B".to_string(), b.clone());
        m.insert("C".to_string(), c.clone());
        let s = parse_system_with(src, &m).unwrap();
        (s.p, s.q)
    }

    #[test]
    fn poincare_charts_of_leslie_gower() {
        for (a, b, c) in [
            (int(1), int(2), rat(1, 2)),
            (rat(3, 2), rat(2, 3), rat(5, 4)),
        ] {
            let sys = lg(a.clone(), b.clone(), c.clone());
            let u1 = to_chart(&sys, Chart::U1);
            let want = chart_from_text(
                "du = u*((1+A*u-v)*(1+C*v)+B*v*(1-u+C*v))\ndv = v*(1+A*u-v)*(1+C*v)",
                &a,
                &b,
                &c,
            );
            assert_eq!((u1.du, u1.dv), want);
            let u2 = to_chart(&sys, Chart::U2);
            let want = chart_from_text(
                "du = -u*(A*u+(A*C-B)*v+u^2+(B+C-1)*u*v+(B*C-C)*v^2)\ndv = -B*v^2*(-1+u+C*v)",
                &a,
                &b,
                &c,
            );
            assert_eq!((u2.du, u2.dv), want);
        }
    }

    #[test]
    fn linear_node_chart() {
        let sys = PlanarSystem::new(MPoly::x(), MPoly::y());
        let u1 = to_chart(&sys, Chart::U1);
        assert!(u1.du.is_zero());
        assert_eq!(u1.dv, -MPoly::y());
    }

    #[test]
    fn equator_is_invariant_and_v_charts_flip() {
        let sys = lg(int(1), int(2), rat(1, 2));
        for ch in [Chart::U1, Chart::U2, Chart::V1, Chart::V2] {
            let cs = to_chart(&sys, ch);
            assert!(cs.dv.div_monomial(0, 1).is_some());
            assert!(cs.du.degree().unwrap() <= 4 && cs.dv.degree().unwrap() <= 4);
        }
        assert!(v_chart_matches(&sys));
        let quad = PlanarSystem::new(
            MPoly::x() * MPoly::y(),
            MPoly::x() - MPoly::y() * MPoly::y(),
        );
        assert!(v_chart_matches(&quad));
        assert_eq!(
            to_chart(&quad, Chart::V1).du,
            -to_chart(&quad, Chart::U1).du
        );
    }

    #[test]
    fn u1_infinite_equilibria() {
        let a = rat(3, 2);
        let sys = lg(a.clone(), int(1), rat(1, 2));
        let recs = infinite_equilibria(&to_chart(&sys, Chart::U1)).unwrap();
        let us: Vec<Rat> = recs
            .iter()
            .map(|r| r.point.x.exact().unwrap().clone())
            .collect();
        assert_eq!(us, vec![-Rat::one() / &a, int(0)]);
        let origin = &recs[1];
        assert_eq!(
            origin.jacobian.exact().unwrap(),
            &[[int(1), int(0)], [int(0), int(1)]]
        );
        assert_eq!(origin.classification, Classification::UnstableNode);
        let u2 = infinite_equilibria(&to_chart(&sys, Chart::U2)).unwrap();
        let o = u2
            .iter()
            .find(|r| r.point.x.exact() == Some(&int(0)))
            .unwrap();
        assert_eq!(o.classification, Classification::DegenerateNeedsBlowup);
    }

    fn divisor_eigs(bs: &BlowupSystem) -> Vec<(Rat, [Rat; 2])> {
        bs.divisor_equilibria()
            .unwrap()
            .iter()
            .map(|r| {
                let c = match bs.direction {
                    BlowupDirection::X => r.point.y.exact().unwrap().clone(),
                    BlowupDirection::Y => r.point.x.exact().unwrap().clone(),
                };
                (c, r.eigenvalues.rational_pair().unwrap())
            })
            .collect()
    }

    fn sorted(a: Rat, b: Rat) -> [Rat; 2] {
        if a <= b {
            [a, b]
        } else {
            [b, a]
        }
    }

    #[test]
    fn blowups_of_u2_origin() {
        let (a, b, c) = (rat(3, 2), rat(2, 3), rat(5, 4));
        let sys = lg(a.clone(), b.clone(), c.clone());
        let u2 = to_chart(&sys, Chart::U2).system();
        let xb = directional_blowup(&u2, BlowupDirection::X).unwrap();
        assert_eq!(
            divisor_eigs(&xb),
            vec![
                (-Rat::one() / &c, sorted(-&b / &c, -a.clone())),
                (int(0), sorted(a.clone(), -a.clone())),
            ]
        );
        let yb = directional_blowup(&u2, BlowupDirection::Y).unwrap();
        assert_eq!(
            divisor_eigs(&yb),
            vec![
                (-c.clone(), sorted(b.clone(), &a * &c)),
                (int(0), sorted(b.clone(), -&a * &c)),
            ]
        );
        let s = sector_synthesis(&xb, &yb);
        assert!(s.is_resolved());
        assert_eq!((s.hyperbolic, s.parabolic, s.elliptic), (2, 2, 0));
    }

    #[test]
    fn blow_down_reproduces_field() {
        let sys = to_chart(&lg(int(1), int(2), rat(1, 2)), Chart::U2).system();
        for dir in [BlowupDirection::X, BlowupDirection::Y] {
            let bs = directional_blowup(&sys, dir).unwrap();
            for (a, b) in [
                (rat(1, 3), rat(-2, 5)),
                (int(-2), rat(7, 4)),
                (rat(5, 2), int(3)),
            ] {
                let (u, v) = bs.blow_down_point(&a, &b);
                assert_eq!(
                    bs.blow_down(&a, &b),
                    (sys.p.eval(&u, &v), sys.q.eval(&u, &v))
                );
            }
        }
    }

    #[test]
    fn saddle_blowup() {
        let sys = PlanarSystem::new(MPoly::x(), -MPoly::y());
        let xb = directional_blowup(&sys, BlowupDirection::X).unwrap();
        assert_eq!(xb.rescale_power, 0);
        assert_eq!(xb.q.substitute(Var::X, &int(0)), MPoly::y().scale(&int(-2)));
        let eqs = xb.divisor_equilibria().unwrap();
        assert_eq!(eqs.len(), 1);
        assert!(eqs[0].classification.is_hyperbolic());
        let yb = directional_blowup(&sys, BlowupDirection::Y).unwrap();
        let s = sector_synthesis(&xb, &yb);
        assert_eq!((s.hyperbolic, s.parabolic, s.elliptic), (4, 0, 0));
    }

    #[test]
    fn node_and_dicritical_blowups() {
        let sys = PlanarSystem::new(MPoly::x(), MPoly::y().scale(&int(2)));
        let xb = directional_blowup(&sys, BlowupDirection::X).unwrap();
        let yb = directional_blowup(&sys, BlowupDirection::Y).unwrap();
        let s = sector_synthesis(&xb, &yb);
        assert_eq!((s.hyperbolic, s.parabolic, s.elliptic), (0, 1, 0));
        let star = PlanarSystem::new(MPoly::x(), MPoly::y());
        let xb = directional_blowup(&star, BlowupDirection::X).unwrap();
        let yb = directional_blowup(&star, BlowupDirection::Y).unwrap();
        assert!(!sector_synthesis(&xb, &yb).is_resolved());
    }

    #[test]
    fn hyperbolic_inputs() {
        let s = sectors_of_hyperbolic(Classification::Saddle);
        assert_eq!((s.hyperbolic, s.parabolic), (4, 0));
        let s = sectors_of_hyperbolic(Classification::StableNode);
        assert_eq!((s.hyperbolic, s.parabolic), (0, 1));
        assert!(!sectors_of_hyperbolic(Classification::CenterCandidate).is_resolved());
    }

    #[test]
    fn not_an_equilibrium() {
        let sys = PlanarSystem::new(MPoly::one(), MPoly::x());
        assert_eq!(
            directional_blowup(&sys, BlowupDirection::X),
            Err(CompactifyError::OriginNotEquilibrium)
        );
    }

    #[test]
    fn overlap_conjugacy() {
        let sys = lg(int(1), int(2), rat(1, 2));
        for (u, v) in [(0.5, 0.1), (2.0, 0.3), (1.0, 1.0)] {
            let l = overlap_ratio(&sys, u, v, 1e-9).unwrap();
            assert!(l > 0.0);
        }
    }
}
