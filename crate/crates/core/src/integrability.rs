//! Darboux first integrals, integrating factors and the Liouville verdict.

use crate::darboux::{
    divergence, extactic, find_exponential_factors, find_invariant_lines, infinity_factors,
    verify_invariant_curve, ExpFactor, InvariantCurve, Multiplicity,
};
use crate::exactalg::linalg::{nullspace, rank, solve};
use crate::exactalg::rat::{fmt_rat, sign};
use crate::exactalg::{MPoly, Monomial, Rat};
use crate::modelio::PlanarSystem;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

/// Search limits behind every verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBounds {
    pub max_curve_degree: u32,
    pub exp_degree: u32,
    pub extactic_order: u32,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_curve_degree: 1,
            exp_degree: 2,
            extactic_order: 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ColumnKind {
    Curve,
    ExpFactor,
    /// Exponential factor whose exponent is constant; it never yields a
    /// Darboux function.
    DegenerateExpFactor,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CofactorMatrix {
    /// Monomials of degree at most `d - 1`; one row each.
    pub basis: Vec<Monomial>,
    /// One coefficient vector per cofactor, over `basis`.
    pub columns: Vec<Vec<Rat>>,
    pub labels: Vec<String>,
    pub kinds: Vec<ColumnKind>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntegrabilityError {
    #[error("cofactor {label} has degree {degree}, above d - 1 = {bound}")]
    CofactorOverflow {
        label: String,
        degree: u32,
        bound: i64,
    },
    #[error("soundness recheck failed: {0}")]
    Unsound(String),
}

impl CofactorMatrix {
    pub fn ncols(&self) -> usize {
        self.columns.len()
    }

    /// Row-major copy for the linear solvers.
    pub fn rows(&self) -> Vec<Vec<Rat>> {
        (0..self.basis.len())
            .map(|r| self.columns.iter().map(|c| c[r].clone()).collect())
            .collect()
    }

    pub fn rank(&self) -> usize {
        rank(&self.rows(), self.ncols())
    }

    fn coeffs(&self, p: &MPoly) -> Vec<Rat> {
        self.basis.iter().map(|m| p.coeff(m.x, m.y)).collect()
    }
}

/// Columns are the curve cofactors in order, then the exponential-factor
/// cofactors.
pub fn build_cofactor_matrix(
    curves: &[InvariantCurve],
    factors: &[ExpFactor],
    d: u32,
) -> Result<CofactorMatrix, IntegrabilityError> {
    let bound = d as i64 - 1;
    let basis = if bound >= 0 {
        Monomial::up_to_degree(bound as u32)
    } else {
        Vec::new()
    };
    let mut m = CofactorMatrix {
        basis,
        columns: Vec::new(),
        labels: Vec::new(),
        kinds: Vec::new(),
    };
    let cols = curves
        .iter()
        .map(|c| (&c.cofactor, c.f.to_string(), ColumnKind::Curve))
        .chain(factors.iter().map(|e| {
            let kind = if e.g.is_constant() {
                ColumnKind::DegenerateExpFactor
            } else {
                ColumnKind::ExpFactor
            };
            (&e.cofactor, e.to_string(), kind)
        }));
    for (k, label, kind) in cols {
        if let Some(deg) = k.degree() {
            if deg as i64 > bound {
                return Err(IntegrabilityError::CofactorOverflow {
                    label,
                    degree: deg,
                    bound,
                });
            }
        }
        m.columns.push(m.coeffs(k));
        m.labels.push(label);
        m.kinds.push(kind);
    }
    Ok(m)
}

/// Coefficients `λ` (curves) and `μ` (exponential factors).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DarbouxSolution {
    pub lambda: Vec<Rat>,
    pub mu: Vec<Rat>,
}

impl DarbouxSolution {
    fn split(v: Vec<Rat>, ncurves: usize) -> Self {
        let mut lambda = v;
        let mu = lambda.split_off(ncurves);
        DarbouxSolution { lambda, mu }
    }

    fn all(&self) -> impl Iterator<Item = &Rat> {
        self.lambda.iter().chain(&self.mu)
    }
}

fn ncurves(m: &CofactorMatrix) -> usize {
    m.kinds.iter().filter(|k| **k == ColumnKind::Curve).count()
}

/// A nonzero solution of `Σ λ_i K_i + Σ μ_j L_j = 0`, if an admissible one
/// exists. Solutions supported only on degenerate columns are rejected;
/// solutions touching a curve are preferred. The first nonzero entry is
/// made positive.
pub fn first_integral_test(m: &CofactorMatrix) -> Option<DarbouxSolution> {
    let basis = nullspace(&m.rows(), m.ncols());
    let admissible = |v: &Vec<Rat>| {
        v.iter()
            .zip(&m.kinds)
            .any(|(x, k)| !x.is_zero() && *k != ColumnKind::DegenerateExpFactor)
    };
    let touches_curve = |v: &Vec<Rat>| {
        v.iter()
            .zip(&m.kinds)
            .any(|(x, k)| !x.is_zero() && *k == ColumnKind::Curve)
    };
    let chosen = basis
        .iter()
        .find(|v| touches_curve(v))
        .or_else(|| basis.iter().find(|v| admissible(v)))?;
    let s = chosen.iter().map(sign).find(|s| *s != 0).unwrap_or(1);
    let v = chosen
        .iter()
        .map(|x| if s < 0 { -x } else { x.clone() })
        .collect();
    Some(DarbouxSolution::split(v, ncurves(m)))
}

/// Outcome of `Σ λ_i K_i + Σ μ_j L_j = -div`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegratingFactorTest {
    pub rank: usize,
    pub augmented_rank: usize,
    pub solution: Option<DarbouxSolution>,
}

pub fn integrating_factor_test(m: &CofactorMatrix, div: &MPoly) -> IntegratingFactorTest {
    let extra = div.terms().any(|(mono, _)| !m.basis.contains(mono));
    assert!(!extra, "divergence degree exceeds d - 1");
    let rhs: Vec<Rat> = m.coeffs(div).into_iter().map(|c| -c).collect();
    let s = solve(&m.rows(), m.ncols(), &rhs);
    IntegratingFactorTest {
        rank: s.rank,
        augmented_rank: s.augmented_rank,
        solution: s.solution.map(|v| DarbouxSolution::split(v, ncurves(m))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    DarbouxFirstIntegral(DarbouxSolution),
    DarbouxIntegratingFactor(DarbouxSolution),
    NotLiouvillianWithinBounds,
    Inconclusive(String),
}

impl Verdict {
    pub fn tag(&self) -> &'static str {
        match self {
            Verdict::DarbouxFirstIntegral(_) => "DarbouxFirstIntegral",
            Verdict::DarbouxIntegratingFactor(_) => "DarbouxIntegratingFactor",
            Verdict::NotLiouvillianWithinBounds => "NotLiouvillianWithinBounds",
            Verdict::Inconclusive(_) => "Inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegrabilityVerdict {
    pub verdict: Verdict,
    pub bounds: SearchBounds,
    pub curves: Vec<InvariantCurve>,
    pub factors: Vec<ExpFactor>,
    pub families: Vec<String>,
    pub irrational: Vec<String>,
    pub matrix: CofactorMatrix,
    pub first_integral_nullity: usize,
    pub integrating_factor: IntegratingFactorTest,
    pub divergence: MPoly,
    /// Description of the Darboux function, when one was found.
    pub darboux_function: Option<String>,
    pub caveat: String,
}

impl IntegrabilityVerdict {
    /// Re-verifies every certificate symbolically.
    pub fn recheck(&self, sys: &PlanarSystem) -> Result<(), IntegrabilityError> {
        for c in &self.curves {
            if sys.lie(&c.f) != &c.cofactor * &c.f {
                return Err(IntegrabilityError::Unsound(format!(
                    "X(f) != K f for {}",
                    c.f
                )));
            }
        }
        for e in &self.factors {
            if !e.verify(sys) {
                return Err(IntegrabilityError::Unsound(format!("bad cofactor for {e}")));
            }
        }
        let combo = |s: &DarbouxSolution| {
            let mut acc = MPoly::zero();
            for (l, c) in s.lambda.iter().zip(&self.curves) {
                acc = &acc + &c.cofactor.scale(l);
            }
            for (m, e) in s.mu.iter().zip(&self.factors) {
                acc = &acc + &e.cofactor.scale(m);
            }
            acc
        };
        match &self.verdict {
            Verdict::DarbouxFirstIntegral(s)
                if !combo(s).is_zero() || s.all().all(Zero::is_zero) =>
            {
                Err(IntegrabilityError::Unsound(
                    "first-integral combination is not zero".into(),
                ))
            }
            Verdict::DarbouxIntegratingFactor(s) if !(&combo(s) + &self.divergence).is_zero() => {
                Err(IntegrabilityError::Unsound(
                    "integrating-factor combination is not -div".into(),
                ))
            }
            _ => Ok(()),
        }
    }
}

/// `Π f_i^λ_i · Π exp(g_j/f_j)^μ_j`, omitting zero exponents.
pub fn describe_darboux(
    curves: &[InvariantCurve],
    factors: &[ExpFactor],
    s: &DarbouxSolution,
) -> String {
    let mut parts = Vec::new();
    for (l, c) in s.lambda.iter().zip(curves) {
        if !l.is_zero() {
            parts.push(format!("({})^({})", c.f, fmt_rat(l)));
        }
    }
    for (m, e) in s.mu.iter().zip(factors) {
        if !m.is_zero() {
            parts.push(format!("{e}^({})", fmt_rat(m)));
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join(" * ")
    }
}

const SAMPLED_CAVEAT: &str = "certified at the given rational parameter values only; \
curves of degree above the bound and exponential factors beyond the exponent bound were not searched";

/// Runs the line search, extactic multiplicities, exponential factors and
/// both Darboux tests. `extra_curves` are user-supplied candidates of any
/// degree, kept only if invariant.
pub fn liouville_verdict_with(
    sys: &PlanarSystem,
    bounds: SearchBounds,
    extra_curves: &[MPoly],
) -> Result<IntegrabilityVerdict, IntegrabilityError> {
    let search = find_invariant_lines(sys);
    let mut curves = search.lines.clone();
    for f in extra_curves {
        if let Some(c) = verify_invariant_curve(sys, f) {
            if !curves.iter().any(|k| k.f == c.f) {
                curves.push(c);
            }
        }
    }
    let fs: Vec<MPoly> = curves.iter().map(|c| c.f.clone()).collect();
    let ext = extactic(sys, bounds.extactic_order, &fs);
    let mut unknown_multiplicity = false;
    for (c, (_, k)) in curves.iter_mut().zip(&ext.multiplicities) {
        let applicable = c.f.degree().unwrap_or(0) <= bounds.extactic_order;
        c.multiplicity = if applicable {
            *k
        } else {
            Multiplicity::NotComputed
        };
        if c.multiplicity != Multiplicity::Known(1) {
            unknown_multiplicity |= !matches!(c.multiplicity, Multiplicity::Known(_));
        }
    }
    let factors = find_exponential_factors(sys, &curves, bounds.exp_degree);
    let d = sys.degree();
    let matrix = build_cofactor_matrix(&curves, &factors, d)?;
    let first_integral_nullity = nullspace(&matrix.rows(), matrix.ncols()).len();
    let div = divergence(sys);
    let fi = first_integral_test(&matrix);
    let ifac = integrating_factor_test(&matrix, &div);
    let families: Vec<String> = search
        .families
        .iter()
        .map(|f| f.description.clone())
        .collect();
    let (verdict, darboux_function) = if let Some(s) = fi {
        let desc = describe_darboux(&curves, &factors, &s);
        (Verdict::DarbouxFirstIntegral(s), Some(desc))
    } else if let Some(s) = ifac.solution.clone() {
        let desc = describe_darboux(&curves, &factors, &s);
        (Verdict::DarbouxIntegratingFactor(s), Some(desc))
    } else if !families.is_empty() {
        (
            Verdict::Inconclusive("the line search found a family of invariant lines".into()),
            None,
        )
    } else if !search.irrational.is_empty() {
        (
            Verdict::Inconclusive(
                "invariant lines with irrational coefficients were not included".into(),
            ),
            None,
        )
    } else if unknown_multiplicity {
        (
            Verdict::Inconclusive(
                "curve multiplicities are undefined at this extactic order".into(),
            ),
            None,
        )
    } else {
        (Verdict::NotLiouvillianWithinBounds, None)
    };
    let v = IntegrabilityVerdict {
        verdict,
        bounds,
        curves,
        factors,
        families,
        irrational: search.irrational,
        matrix,
        first_integral_nullity,
        integrating_factor: ifac,
        divergence: div,
        darboux_function,
        caveat: SAMPLED_CAVEAT.into(),
    };
    v.recheck(sys)?;
    Ok(v)
}

pub fn liouville_verdict(
    sys: &PlanarSystem,
    bounds: SearchBounds,
) -> Result<IntegrabilityVerdict, IntegrabilityError> {
    liouville_verdict_with(sys, bounds, &[])
}

/// Exponent-ansatz solutions for the line at infinity, exposed for reports.
pub fn infinity_ansatz(sys: &PlanarSystem, n: u32) -> crate::darboux::InfinityAnsatz {
    infinity_factors(sys, n).1
}
