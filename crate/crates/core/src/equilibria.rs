//! Finite equilibria: exact elimination, Jacobians and classification.

use crate::exactalg::interval::eval_box;
use crate::exactalg::rat::{fmt_rat, sign, sqrt_exact, to_f64};
use crate::exactalg::roots::{all_real_roots, bisect_once, default_width, refine, Sturm};
use crate::exactalg::{resultant, MPoly, Rat, RatInterval, RootInterval, UPoly, Var};
use crate::modelio::{ParamBindings, PlanarSystem};
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

/// Bisection budget for sign decisions at algebraic points.
pub const REFINE_CAP: usize = 128;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EquilibriumError {
    #[error("P and Q share a common factor: the equilibrium set is a curve ({0})")]
    CommonFactor(String),
    #[error("the vector field is identically zero")]
    ZeroField,
}

/// One coordinate of an equilibrium: rational, or a root of a square-free
/// polynomial isolated by an interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coord {
    Exact(Rat),
    Algebraic { poly: UPoly, iv: RootInterval },
}

impl Coord {
    fn from_root(poly: &UPoly, iv: RootInterval) -> Coord {
        match &iv.exact {
            Some(r) => Coord::Exact(r.clone()),
            None => {
                let poly = poly.squarefree();
                let iv = refine(&poly, &iv, &default_width());
                match iv.exact.clone() {
                    Some(r) => Coord::Exact(r),
                    None => Coord::Algebraic { poly, iv },
                }
            }
        }
    }

    pub fn exact(&self) -> Option<&Rat> {
        match self {
            Coord::Exact(r) => Some(r),
            Coord::Algebraic { .. } => None,
        }
    }

    pub fn enclosure(&self) -> RatInterval {
        match self {
            Coord::Exact(r) => RatInterval::point(r.clone()),
            Coord::Algebraic { iv, .. } => RatInterval::new(iv.lo.clone(), iv.hi.clone()),
        }
    }

    pub fn approx(&self) -> f64 {
        match self {
            Coord::Exact(r) => to_f64(r),
            Coord::Algebraic { iv, .. } => to_f64(&iv.midpoint()),
        }
    }

    /// Halves the isolating interval; no-op for exact coordinates.
    pub fn bisect(&mut self) {
        if let Coord::Algebraic { poly, iv } = self {
            let next = bisect_once(poly, iv);
            if let Some(r) = next.exact.clone() {
                *self = Coord::Exact(r);
            } else {
                *iv = next;
            }
        }
    }

    fn cmp_approx(&self, o: &Coord) -> Ordering {
        match (self, o) {
            (Coord::Exact(a), Coord::Exact(b)) => a.cmp(b),
            _ => self.approx().total_cmp(&o.approx()),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Coord::Exact(r) => fmt_rat(r),
            Coord::Algebraic { iv, .. } => format!("[{}, {}]", fmt_rat(&iv.lo), fmt_rat(&iv.hi)),
        }
    }
}

/// A real point whose coordinates are rational or real algebraic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicPoint {
    pub x: Coord,
    pub y: Coord,
}

impl AlgebraicPoint {
    pub fn exact(x: Rat, y: Rat) -> Self {
        AlgebraicPoint {
            x: Coord::Exact(x),
            y: Coord::Exact(y),
        }
    }

    pub fn as_exact(&self) -> Option<(&Rat, &Rat)> {
        Some((self.x.exact()?, self.y.exact()?))
    }

    pub fn approx(&self) -> (f64, f64) {
        (self.x.approx(), self.y.approx())
    }

    /// Enclosure of `p` over the point's box.
    pub fn eval_enclosure(&self, p: &MPoly) -> RatInterval {
        match self.as_exact() {
            Some((x, y)) => RatInterval::point(p.eval(x, y)),
            None => eval_box(p, &self.x.enclosure(), &self.y.enclosure()),
        }
    }

    pub fn bisect(&mut self) {
        self.x.bisect();
        self.y.bisect();
    }

    /// Exact sign of `p` at the point when it can be decided.
    ///
    /// Exact points evaluate directly. With one algebraic coordinate, an
    /// exact zero is certified by a gcd with the defining polynomial;
    /// otherwise the box is bisected until the enclosure excludes zero.
    /// With two algebraic coordinates only the refinement route is available
    /// and `None` is returned after [`REFINE_CAP`] bisections.
    pub fn sign_of(&self, p: &MPoly) -> Option<i32> {
        if let Some((x, y)) = self.as_exact() {
            return Some(sign(&p.eval(x, y)));
        }
        let univariate = match (&self.x, &self.y) {
            (Coord::Exact(x), Coord::Algebraic { poly, iv }) => {
                Some((p.substitute(Var::X, x).to_upoly(Var::Y).unwrap(), poly, iv))
            }
            (Coord::Algebraic { poly, iv }, Coord::Exact(y)) => {
                Some((p.substitute(Var::Y, y).to_upoly(Var::X).unwrap(), poly, iv))
            }
            _ => None,
        };
        if let Some((u, m, iv)) = univariate {
            if u.is_zero() {
                return Some(0);
            }
            let g = u.gcd(m);
            if g.degree().unwrap_or(0) > 0 && Sturm::new(&g).count(&iv.lo, &iv.hi) > 0 {
                return Some(0);
            }
        }
        let mut pt = self.clone();
        for _ in 0..=REFINE_CAP {
            if let Some(s) = pt.eval_enclosure(p).sign() {
                return Some(s);
            }
            pt.bisect();
        }
        None
    }
}

impl fmt::Display for AlgebraicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x.describe(), self.y.describe())
    }
}

/// Jacobian at an equilibrium: exact at rational points, an enclosure otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Jacobian {
    Exact([[Rat; 2]; 2]),
    Enclosure([[RatInterval; 2]; 2]),
}

impl Jacobian {
    pub fn approx(&self) -> [[f64; 2]; 2] {
        match self {
            Jacobian::Exact(m) => m.clone().map(|r| r.map(|v| to_f64(&v))),
            Jacobian::Enclosure(m) => m
                .clone()
                .map(|r| r.map(|v| (to_f64(&v.lo) + to_f64(&v.hi)) / 2.0)),
        }
    }

    pub fn exact(&self) -> Option<&[[Rat; 2]; 2]> {
        match self {
            Jacobian::Exact(m) => Some(m),
            Jacobian::Enclosure(_) => None,
        }
    }
}

/// Formal Jacobian `[[P_x, P_y], [Q_x, Q_y]]`.
pub fn jacobian_polys(sys: &PlanarSystem) -> [[MPoly; 2]; 2] {
    [
        [sys.p.diff(Var::X), sys.p.diff(Var::Y)],
        [sys.q.diff(Var::X), sys.q.diff(Var::Y)],
    ]
}

pub fn jacobian_at(sys: &PlanarSystem, p: &AlgebraicPoint) -> Jacobian {
    let j = jacobian_polys(sys);
    match p.as_exact() {
        Some((x, y)) => Jacobian::Exact(j.map(|r| r.map(|e| e.eval(x, y)))),
        None => Jacobian::Enclosure(j.map(|r| r.map(|e| p.eval_enclosure(&e)))),
    }
}

/// Eigenvalue data of a 2×2 Jacobian.
#[derive(Clone, Debug, PartialEq)]
pub enum Eigenvalues {
    /// Both eigenvalues rational.
    Rational(Rat, Rat),
    /// `(trace ± sqrt(disc)) / 2` with `disc > 0` not a rational square.
    Surd { trace: Rat, disc: Rat },
    /// `re ± i sqrt(im_sq)`.
    Complex { re: Rat, im_sq: Rat },
    /// Floating-point approximation at an algebraic point.
    Approx { re: [f64; 2], im: [f64; 2] },
}

impl Eigenvalues {
    pub fn from_exact(j: &[[Rat; 2]; 2]) -> Self {
        let tr = &j[0][0] + &j[1][1];
        let det = &j[0][0] * &j[1][1] - &j[0][1] * &j[1][0];
        let disc = &tr * &tr - Rat::from_integer(4.into()) * &det;
        let two = Rat::from_integer(2.into());
        if disc >= Rat::zero() {
            match sqrt_exact(&disc) {
                Some(s) => {
                    let a = (&tr - &s) / &two;
                    let b = (&tr + &s) / &two;
                    Eigenvalues::Rational(a, b)
                }
                None => Eigenvalues::Surd { trace: tr, disc },
            }
        } else {
            Eigenvalues::Complex {
                re: &tr / &two,
                im_sq: -disc / Rat::from_integer(4.into()),
            }
        }
    }

    pub fn from_approx(j: [[f64; 2]; 2]) -> Self {
        let tr = j[0][0] + j[1][1];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        let disc = tr * tr - 4.0 * det;
        if disc >= 0.0 {
            let s = disc.sqrt();
            Eigenvalues::Approx {
                re: [(tr - s) / 2.0, (tr + s) / 2.0],
                im: [0.0, 0.0],
            }
        } else {
            let s = (-disc).sqrt() / 2.0;
            Eigenvalues::Approx {
                re: [tr / 2.0, tr / 2.0],
                im: [-s, s],
            }
        }
    }

    /// `(re, im)` pairs in floating point.
    pub fn approx(&self) -> [(f64, f64); 2] {
        match self {
            Eigenvalues::Rational(a, b) => [(to_f64(a), 0.0), (to_f64(b), 0.0)],
            Eigenvalues::Surd { trace, disc } => {
                let t = to_f64(trace);
                let s = to_f64(disc).sqrt();
                [((t - s) / 2.0, 0.0), ((t + s) / 2.0, 0.0)]
            }
            Eigenvalues::Complex { re, im_sq } => {
                let r = to_f64(re);
                let i = to_f64(im_sq).sqrt();
                [(r, -i), (r, i)]
            }
            Eigenvalues::Approx { re, im } => [(re[0], im[0]), (re[1], im[1])],
        }
    }

    /// Human-readable eigenvalue strings.
    pub fn describe(&self) -> [String; 2] {
        match self {
            Eigenvalues::Rational(a, b) => [fmt_rat(a), fmt_rat(b)],
            Eigenvalues::Surd { trace, disc } => {
                let t = fmt_rat(&(trace / Rat::from_integer(2.into())));
                let d = fmt_rat(&(disc / Rat::from_integer(4.into())));
                [format!("{t} - sqrt({d})"), format!("{t} + sqrt({d})")]
            }
            Eigenvalues::Complex { re, im_sq } => {
                let r = fmt_rat(re);
                let i = fmt_rat(im_sq);
                [format!("{r} - i*sqrt({i})"), format!("{r} + i*sqrt({i})")]
            }
            Eigenvalues::Approx { .. } => self.approx().map(|(r, i)| {
                if i == 0.0 {
                    format!("{r:.12e}")
                } else {
                    format!("{r:.12e} + {i:.12e}i")
                }
            }),
        }
    }

    /// Rational eigenvalues as a multiset, sorted.
    pub fn rational_pair(&self) -> Option<[Rat; 2]> {
        match self {
            Eigenvalues::Rational(a, b) => {
                let mut v = [a.clone(), b.clone()];
                v.sort();
                Some(v)
            }
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Classification {
    StableNode,
    UnstableNode,
    Saddle,
    StableFocus,
    UnstableFocus,
    /// Zero trace with positive determinant; linearization cannot decide.
    CenterCandidate,
    /// One zero eigenvalue with nonzero quadratic coefficient on the center
    /// direction; `attracting` when the nonzero eigenvalue is negative.
    SaddleNode {
        attracting: bool,
    },
    DegenerateNeedsBlowup,
    Undetermined,
}

impl Classification {
    pub fn label(&self) -> &'static str {
        match self {
            Classification::StableNode => "stable-node",
            Classification::UnstableNode => "unstable-node",
            Classification::Saddle => "saddle",
            Classification::StableFocus => "stable-focus",
            Classification::UnstableFocus => "unstable-focus",
            Classification::CenterCandidate => "center-candidate",
            Classification::SaddleNode { attracting: true } => "attracting-saddle-node",
            Classification::SaddleNode { attracting: false } => "repelling-saddle-node",
            Classification::DegenerateNeedsBlowup => "degenerate-needs-blowup",
            Classification::Undetermined => "undetermined",
        }
    }

    pub fn is_hyperbolic(&self) -> bool {
        matches!(
            self,
            Classification::StableNode
                | Classification::UnstableNode
                | Classification::Saddle
                | Classification::StableFocus
                | Classification::UnstableFocus
        )
    }

    pub fn is_node(&self) -> bool {
        matches!(
            self,
            Classification::StableNode | Classification::UnstableNode
        )
    }

    /// Sinks: every nearby orbit converges forward in time.
    pub fn is_attractor(&self) -> bool {
        matches!(
            self,
            Classification::StableNode | Classification::StableFocus
        )
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Quadratic-order reduction at a semi-hyperbolic equilibrium.
///
/// Coordinates `(s, r)` satisfy `(x, y) = point + s·center + r·hyperbolic`;
/// in them the linear part is `diag(0, eigenvalue)` and the flow on the
/// center manifold is `s' = a2 s^2 + O(s^3)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiHyperbolicReduction {
    pub s_dot: MPoly,
    pub r_dot: MPoly,
    pub center: [Rat; 2],
    pub hyperbolic: [Rat; 2],
    pub eigenvalue: Rat,
    pub a2: Rat,
}

// A null vector of [[a, b], [c, d]] (assumed singular, not zero), scaled so
// its first nonzero component is positive.
fn null_vector(m: &[[Rat; 2]; 2]) -> [Rat; 2] {
    let row = if !m[0][0].is_zero() || !m[0][1].is_zero() {
        &m[0]
    } else {
        &m[1]
    };
    let v = [-row[1].clone(), row[0].clone()];
    let s = if v[0].is_zero() {
        sign(&v[1])
    } else {
        sign(&v[0])
    };
    if s < 0 {
        [-v[0].clone(), -v[1].clone()]
    } else {
        v
    }
}

/// Center-direction reduction at a rational equilibrium with exactly one
/// zero eigenvalue. `None` when the hypotheses fail.
pub fn semi_hyperbolic_reduction(
    sys: &PlanarSystem,
    x0: &Rat,
    y0: &Rat,
) -> Option<SemiHyperbolicReduction> {
    let j = jacobian_at(sys, &AlgebraicPoint::exact(x0.clone(), y0.clone()));
    let j = j.exact()?.clone();
    let tr = &j[0][0] + &j[1][1];
    let det = &j[0][0] * &j[1][1] - &j[0][1] * &j[1][0];
    if !det.is_zero() || tr.is_zero() {
        return None;
    }
    let center = null_vector(&j);
    let shifted = [
        [&j[0][0] - &tr, j[0][1].clone()],
        [j[1][0].clone(), &j[1][1] - &tr],
    ];
    let hyperbolic = null_vector(&shifted);
    // (x, y) = (x0, y0) + s*center + r*hyperbolic
    let sx = MPoly::constant(x0.clone())
        + MPoly::x().scale(&center[0])
        + MPoly::y().scale(&hyperbolic[0]);
    let sy = MPoly::constant(y0.clone())
        + MPoly::x().scale(&center[1])
        + MPoly::y().scale(&hyperbolic[1]);
    let f = sys.p.compose(&sx, &sy);
    let g = sys.q.compose(&sx, &sy);
    // invert M = [center | hyperbolic]
    let d = &center[0] * &hyperbolic[1] - &hyperbolic[0] * &center[1];
    let inv = [
        [&hyperbolic[1] / &d, -&hyperbolic[0] / &d],
        [-&center[1] / &d, &center[0] / &d],
    ];
    let s_dot = f.scale(&inv[0][0]) + g.scale(&inv[0][1]);
    let r_dot = f.scale(&inv[1][0]) + g.scale(&inv[1][1]);
    let a2 = s_dot.coeff(2, 0);
    Some(SemiHyperbolicReduction {
        s_dot,
        r_dot,
        center,
        hyperbolic,
        eigenvalue: tr,
        a2,
    })
}

/// Everything known about one equilibrium.
#[derive(Clone, Debug, PartialEq)]
pub struct EquilibriumRecord {
    pub point: AlgebraicPoint,
    pub jacobian: Jacobian,
    pub trace_sign: Option<i32>,
    pub det_sign: Option<i32>,
    pub disc_sign: Option<i32>,
    pub eigenvalues: Eigenvalues,
    pub classification: Classification,
    pub reduction: Option<SemiHyperbolicReduction>,
    pub label: Option<String>,
    /// Enclosures of `P` and `Q` over the point box; both contain zero.
    pub residual: [RatInterval; 2],
}

impl EquilibriumRecord {
    /// Builds and classifies the record for an equilibrium of `sys`.
    pub fn new(sys: &PlanarSystem, point: AlgebraicPoint) -> Self {
        let jacobian = jacobian_at(sys, &point);
        let eigenvalues = match &jacobian {
            Jacobian::Exact(m) => Eigenvalues::from_exact(m),
            Jacobian::Enclosure(_) => Eigenvalues::from_approx(jacobian.approx()),
        };
        let residual = [point.eval_enclosure(&sys.p), point.eval_enclosure(&sys.q)];
        let mut rec = EquilibriumRecord {
            point,
            jacobian,
            trace_sign: None,
            det_sign: None,
            disc_sign: None,
            eigenvalues,
            classification: Classification::Undetermined,
            reduction: None,
            label: None,
            residual,
        };
        let (class, signs, reduction) = classify_inner(&rec, sys);
        rec.classification = class;
        [rec.trace_sign, rec.det_sign, rec.disc_sign] = signs;
        rec.reduction = reduction;
        rec
    }

    pub fn is_exact(&self) -> bool {
        self.point.as_exact().is_some()
    }
}

/// Classification from the exact signs of det, trace and discriminant.
pub fn classify(rec: &EquilibriumRecord, sys: &PlanarSystem) -> Classification {
    classify_inner(rec, sys).0
}

type Signs = [Option<i32>; 3];

fn classify_inner(
    rec: &EquilibriumRecord,
    sys: &PlanarSystem,
) -> (Classification, Signs, Option<SemiHyperbolicReduction>) {
    let j = jacobian_polys(sys);
    let tr = &j[0][0] + &j[1][1];
    let det = &(&j[0][0] * &j[1][1]) - &(&j[0][1] * &j[1][0]);
    let disc = &(&tr * &tr) - &det.scale(&Rat::from_integer(4.into()));
    let pt = &rec.point;
    let signs = [pt.sign_of(&tr), pt.sign_of(&det), pt.sign_of(&disc)];
    let (Some(t), Some(d)) = (signs[0], signs[1]) else {
        return (Classification::Undetermined, signs, None);
    };
    let class = match d {
        -1 => Classification::Saddle,
        1 => match (signs[2], t) {
            (_, 0) => Classification::CenterCandidate,
            (None, _) => Classification::Undetermined,
            (Some(s), t) if s >= 0 => {
                if t < 0 {
                    Classification::StableNode
                } else {
                    Classification::UnstableNode
                }
            }
            (Some(_), t) => {
                if t < 0 {
                    Classification::StableFocus
                } else {
                    Classification::UnstableFocus
                }
            }
        },
        _ if t != 0 => {
            let red = pt
                .as_exact()
                .and_then(|(x, y)| semi_hyperbolic_reduction(sys, x, y));
            return match red {
                Some(r) if !r.a2.is_zero() => {
                    let attracting = r.eigenvalue < Rat::zero();
                    (Classification::SaddleNode { attracting }, signs, Some(r))
                }
                other => (Classification::Undetermined, signs, other),
            };
        }
        _ => {
            let zero_linear_part = j.iter().flatten().all(|e| pt.sign_of(e) == Some(0));
            if zero_linear_part {
                Classification::DegenerateNeedsBlowup
            } else {
                Classification::Undetermined
            }
        }
    };
    (class, signs, None)
}

/// Every real equilibrium of `sys`, sorted lexicographically, optionally
/// restricted to the closed positive quadrant.
pub fn finite_equilibria(
    sys: &PlanarSystem,
    positive_quadrant_only: bool,
) -> Result<Vec<EquilibriumRecord>, EquilibriumError> {
    let mut points = solve_common_zeros(&sys.p, &sys.q)?;
    if positive_quadrant_only {
        points.retain(|p| {
            p.sign_of(&MPoly::x()).is_some_and(|s| s >= 0)
                && p.sign_of(&MPoly::y()).is_some_and(|s| s >= 0)
        });
    }
    points.sort_by(|a, b| a.x.cmp_approx(&b.x).then(a.y.cmp_approx(&b.y)));
    Ok(points
        .into_iter()
        .map(|p| EquilibriumRecord::new(sys, p))
        .collect())
}

/// Real common zeros of two bivariate polynomials (finitely many required).
pub fn solve_common_zeros(p: &MPoly, q: &MPoly) -> Result<Vec<AlgebraicPoint>, EquilibriumError> {
    if p.is_zero() && q.is_zero() {
        return Err(EquilibriumError::ZeroField);
    }
    for (a, b) in [(p, q), (q, p)] {
        if a.is_zero() {
            return if b.is_constant() {
                Ok(Vec::new())
            } else {
                Err(EquilibriumError::CommonFactor(format!("{b} = 0")))
            };
        }
    }
    let ry = resultant(p, q, Var::Y);
    if !ry.is_zero() {
        return solve_with_resultant(p, q, &ry);
    }
    let rx = resultant(p, q, Var::X);
    if !rx.is_zero() {
        let swapped = solve_with_resultant(&p.swap_vars(), &q.swap_vars(), &rx.swap_vars())?;
        return Ok(swapped
            .into_iter()
            .map(|pt| AlgebraicPoint { x: pt.y, y: pt.x })
            .collect());
    }
    Err(EquilibriumError::CommonFactor(
        "resultants vanish in both variables".into(),
    ))
}

// `res` is the (nonzero) resultant of p, q with respect to y.
fn solve_with_resultant(
    p: &MPoly,
    q: &MPoly,
    res: &MPoly,
) -> Result<Vec<AlgebraicPoint>, EquilibriumError> {
    let rx = res.to_upoly(Var::X).expect("resultant in x only");
    if p.degree_in(Var::Y) == Some(0) && q.degree_in(Var::Y) == Some(0) {
        // both independent of y: any common root is a vertical line of zeros
        let g = p
            .to_upoly(Var::X)
            .unwrap()
            .gcd(&q.to_upoly(Var::X).unwrap());
        return if g.degree().unwrap_or(0) > 0 && !all_real_roots(&g).is_empty() {
            Err(EquilibriumError::CommonFactor(format!("{g} = 0")))
        } else {
            Ok(Vec::new())
        };
    }
    if rx.degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut y_candidates: Option<Vec<Coord>> = None;
    for xr in all_real_roots(&rx) {
        match &xr.exact {
            Some(x0) => {
                let a = p.substitute(Var::X, x0).to_upoly(Var::Y).unwrap();
                let b = q.substitute(Var::X, x0).to_upoly(Var::Y).unwrap();
                if a.is_zero() && b.is_zero() {
                    return Err(EquilibriumError::CommonFactor(format!(
                        "x = {}",
                        fmt_rat(x0)
                    )));
                }
                let g = a.gcd(&b);
                if g.degree().unwrap_or(0) == 0 {
                    continue;
                }
                for yr in all_real_roots(&g) {
                    out.push(AlgebraicPoint {
                        x: Coord::Exact(x0.clone()),
                        y: Coord::from_root(&g, yr),
                    });
                }
            }
            None => {
                let xc = Coord::from_root(&rx, xr.clone());
                if y_candidates.is_none() {
                    let ryy = resultant(p, q, Var::X);
                    if ryy.is_zero() {
                        return Err(EquilibriumError::CommonFactor("common factor in x".into()));
                    }
                    let ru = ryy.to_upoly(Var::Y).unwrap();
                    y_candidates = Some(if ru.degree().unwrap_or(0) == 0 {
                        Vec::new()
                    } else {
                        all_real_roots(&ru)
                            .into_iter()
                            .map(|iv| Coord::from_root(&ru, iv))
                            .collect()
                    });
                }
                for yc in y_candidates.as_ref().unwrap() {
                    let cand = AlgebraicPoint {
                        x: xc.clone(),
                        y: yc.clone(),
                    };
                    if is_common_zero(p, q, &cand) {
                        out.push(cand);
                    }
                }
            }
        }
    }
    Ok(out)
}

// Candidate pairing when the x coordinate is irrational.
fn is_common_zero(p: &MPoly, q: &MPoly, cand: &AlgebraicPoint) -> bool {
    if cand.y.exact().is_some() {
        // univariate in x: exact gcd test against the defining polynomial
        return cand.sign_of(p) == Some(0) && cand.sign_of(q) == Some(0);
    }
    let mut pt = cand.clone();
    for _ in 0..=REFINE_CAP {
        let ep = pt.eval_enclosure(p);
        let eq = pt.eval_enclosure(q);
        if !ep.contains_zero() || !eq.contains_zero() {
            return false;
        }
        pt.bisect();
    }
    true
}

/// Attaches the conventional names E0, E1, E2 and Estar to the equilibria
/// of the Leslie–Gower system with parameters `b`.
pub fn label_leslie(records: &mut [EquilibriumRecord], b: &ParamBindings) {
    let zero = Rat::zero();
    let one = Rat::one();
    let denom = &one + &b.a;
    let estar = (b.one_minus_ac() / &denom, (&one + &b.c) / &denom);
    for r in records.iter_mut() {
        let Some((x, y)) = r.point.as_exact() else {
            continue;
        };
        let label = if *x == zero && *y == zero {
            Some("E0")
        } else if *x == zero && *y == b.c {
            Some("E1")
        } else if *x == one && *y == zero {
            Some("E2")
        } else if (x, y) == (&estar.0, &estar.1) {
            Some("Estar")
        } else {
            None
        };
        r.label = label.map(str::to_string);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat::{int, rat};
    use crate::modelio::leslie_gower_system;

    fn lg(a: Rat, b: Rat, c: Rat) -> (ParamBindings, PlanarSystem) {
        let pb = ParamBindings::new(a, b, c);
        let s = leslie_gower_system(&pb);
        (pb, s)
    }

    fn exact_points(recs: &[EquilibriumRecord]) -> Vec<(Rat, Rat)> {
        recs.iter()
            .map(|r| {
                let (x, y) = r.point.as_exact().unwrap();
                (x.clone(), y.clone())
            })
            .collect()
    }

    #[test]
    fn leslie_equilibria_full_plane() {
        let (_, sys) = lg(int(1), int(1), rat(1, 2));
        let recs = finite_equilibria(&sys, false).unwrap();
        let pts = exact_points(&recs);
        let expected = vec![
            (rat(-1, 2), int(0)),
            (int(0), int(0)),
            (int(0), rat(1, 2)),
            (rat(1, 4), rat(3, 4)),
            (int(1), int(0)),
        ];
        assert_eq!(pts, expected);
        for (x, y) in &pts {
            assert!(sys.p.eval(x, y).is_zero() && sys.q.eval(x, y).is_zero());
        }
    }

    #[test]
    fn collapse_when_ac_is_one() {
        let (_, sys) = lg(int(1), int(1), int(1));
        let pts = exact_points(&finite_equilibria(&sys, true).unwrap());
        assert_eq!(
            pts,
            vec![(int(0), int(0)), (int(0), int(1)), (int(1), int(0))]
        );
    }

    #[test]
    fn linear_node() {
        let sys = PlanarSystem::new(MPoly::x(), MPoly::y());
        let recs = finite_equilibria(&sys, false).unwrap();
        assert_eq!(exact_points(&recs), vec![(int(0), int(0))]);
        assert_eq!(recs[0].classification, Classification::UnstableNode);
    }

    #[test]
    fn jacobians_match_closed_forms() {
        let (a, b, c) = (rat(3, 2), rat(2, 3), rat(5, 4));
        let (_, sys) = lg(a.clone(), b.clone(), c.clone());
        let one = Rat::one();
        let j00 = jacobian_at(&sys, &AlgebraicPoint::exact(int(0), int(0)));
        assert_eq!(
            j00,
            Jacobian::Exact([[c.clone(), int(0)], [int(0), &b * &c]])
        );
        let j10 = jacobian_at(&sys, &AlgebraicPoint::exact(int(1), int(0)));
        assert_eq!(
            j10,
            Jacobian::Exact([[-&one - &c, -&a * (&one + &c)], [int(0), &b * (&one + &c)]])
        );
        let j0c = jacobian_at(&sys, &AlgebraicPoint::exact(int(0), c.clone()));
        assert_eq!(
            j0c,
            Jacobian::Exact([[-&c * (-&one + &a * &c), int(0)], [&b * &c, -&b * &c]])
        );
    }

    #[test]
    fn origin_is_a_repeller() {
        let (_, sys) = lg(int(2), int(3), rat(1, 3));
        let r = EquilibriumRecord::new(&sys, AlgebraicPoint::exact(int(0), int(0)));
        assert_eq!(r.classification, Classification::UnstableNode);
    }

    #[test]
    fn saddle_node_when_ac_is_one() {
        let (_, sys) = lg(int(1), int(1), int(1));
        let r = EquilibriumRecord::new(&sys, AlgebraicPoint::exact(int(0), int(1)));
        assert_eq!(
            r.classification,
            Classification::SaddleNode { attracting: true }
        );
        let red = r.reduction.unwrap();
        assert_eq!(red.eigenvalue, int(-1));
        assert!(!red.a2.is_zero());
        // linear part of the reduced system is diag(0, -1)
        assert!(red.s_dot.coeff(1, 0).is_zero() && red.s_dot.coeff(0, 1).is_zero());
        assert_eq!(red.r_dot.coeff(0, 1), int(-1));
        assert!(red.r_dot.coeff(1, 0).is_zero());
    }

    #[test]
    fn interior_equilibrium_is_an_attractor() {
        let (_, sys) = lg(int(1), int(1), rat(1, 2));
        let r = EquilibriumRecord::new(&sys, AlgebraicPoint::exact(rat(1, 4), rat(3, 4)));
        let j = r.jacobian.exact().unwrap();
        let tr = &j[0][0] + &j[1][1];
        let det = &j[0][0] * &j[1][1] - &j[0][1] * &j[1][0];
        assert_eq!(det, rat(9, 32));
        assert_eq!(tr, rat(-15, 16));
        assert!(r.classification.is_attractor());
    }

    #[test]
    fn irrational_equilibria_are_isolated() {
        // x' = x^2 - 2, y' = y - x: equilibria (±sqrt 2, ±sqrt 2)
        let sys = PlanarSystem::new(
            MPoly::x() * MPoly::x() - MPoly::constant(int(2)),
            MPoly::y() - MPoly::x(),
        );
        let recs = finite_equilibria(&sys, false).unwrap();
        assert_eq!(recs.len(), 2);
        let (x, y) = recs[1].point.approx();
        assert!((x - 2f64.sqrt()).abs() < 1e-9 && (y - 2f64.sqrt()).abs() < 1e-9);
        assert!(recs
            .iter()
            .all(|r| r.residual[0].contains_zero() && r.residual[1].contains_zero()));
        // J = [[2x, 0], [-1, 1]]: x = sqrt 2 gives an unstable node, -sqrt 2 a saddle
        assert_eq!(recs[0].classification, Classification::Saddle);
        assert_eq!(recs[1].classification, Classification::UnstableNode);
    }

    #[test]
    fn common_factor_is_reported() {
        let sys = PlanarSystem::new(
            MPoly::x() * MPoly::y(),
            MPoly::x() * (MPoly::y() + MPoly::one()),
        );
        assert!(matches!(
            finite_equilibria(&sys, false),
            Err(EquilibriumError::CommonFactor(_))
        ));
        let sys = PlanarSystem::new(MPoly::x() * MPoly::y(), MPoly::x() * MPoly::y());
        assert!(matches!(
            finite_equilibria(&sys, false),
            Err(EquilibriumError::CommonFactor(_))
        ));
    }

    #[test]
    fn center_candidate_and_foci() {
        let rot = PlanarSystem::new(MPoly::y(), -MPoly::x());
        let r = EquilibriumRecord::new(&rot, AlgebraicPoint::exact(int(0), int(0)));
        assert_eq!(r.classification, Classification::CenterCandidate);
        let spiral = PlanarSystem::new(MPoly::y() - MPoly::x(), -MPoly::x() - MPoly::y());
        let r = EquilibriumRecord::new(&spiral, AlgebraicPoint::exact(int(0), int(0)));
        assert_eq!(r.classification, Classification::StableFocus);
    }

    #[test]
    fn zero_linear_part() {
        let sys = PlanarSystem::new(
            MPoly::x() * MPoly::x(),
            MPoly::y() * MPoly::y() * MPoly::x(),
        );
        let r = EquilibriumRecord::new(&sys, AlgebraicPoint::exact(int(0), int(0)));
        assert_eq!(r.classification, Classification::DegenerateNeedsBlowup);
    }

    #[test]
    fn labels() {
        let (pb, sys) = lg(int(1), int(1), rat(1, 2));
        let mut recs = finite_equilibria(&sys, true).unwrap();
        label_leslie(&mut recs, &pb);
        let labels: Vec<_> = recs.iter().map(|r| r.label.clone().unwrap()).collect();
        assert_eq!(labels, ["E0", "E1", "Estar", "E2"]);
    }
}
