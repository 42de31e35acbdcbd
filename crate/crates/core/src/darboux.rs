//! Invariant algebraic curves, cofactors, extactic curves and exponential
//! factors.

use crate::equilibria::{solve_common_zeros, AlgebraicPoint};
use crate::exactalg::linalg::{nullspace, rref};
use crate::exactalg::rat::fmt_rat;
use crate::exactalg::roots::all_real_roots;
use crate::exactalg::{ffdet, MPoly, Monomial, Rat, UPoly, Var};
use crate::modelio::PlanarSystem;
use num_integer::binomial;
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// Algebraic multiplicity of an invariant curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Multiplicity {
    Known(u32),
    /// The extactic curve vanishes identically, so multiplicities are not
    /// defined at this order.
    Undefined,
    NotComputed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantCurve {
    /// Monic in the graded order.
    pub f: MPoly,
    pub cofactor: MPoly,
    pub multiplicity: Multiplicity,
}

impl fmt::Display for InvariantCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = 0 (cofactor {})", self.f, self.cofactor)
    }
}

/// `exp(g / f)` with cofactor `cofactor`; `f = 1` for the line at infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpFactor {
    pub g: MPoly,
    pub f: MPoly,
    pub cofactor: MPoly,
}

impl ExpFactor {
    /// `X(g) f - g X(f) = L f^2`.
    pub fn verify(&self, sys: &PlanarSystem) -> bool {
        let lhs = &(&sys.lie(&self.g) * &self.f) - &(&self.g * &sys.lie(&self.f));
        lhs == &self.cofactor * &(&self.f * &self.f)
    }
}

impl fmt::Display for ExpFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.f.is_one() {
            write!(f, "exp({})", self.g)
        } else {
            write!(f, "exp(({}) / ({}))", self.g, self.f)
        }
    }
}

trait IsOne {
    fn is_one(&self) -> bool;
}

impl IsOne for MPoly {
    fn is_one(&self) -> bool {
        *self == MPoly::one()
    }
}

/// `X(f) / f` when `f = 0` is invariant.
pub fn verify_invariant_curve(sys: &PlanarSystem, f: &MPoly) -> Option<InvariantCurve> {
    if f.is_constant() {
        return None;
    }
    let f = f.monic();
    let k = sys.lie(&f).exact_div(&f).ok()??;
    Some(InvariantCurve {
        f,
        cofactor: k,
        multiplicity: Multiplicity::NotComputed,
    })
}

/// A family of invariant lines found where the search constraints vanish
/// on a curve rather than at isolated points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineFamily {
    pub description: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LineSearch {
    pub lines: Vec<InvariantCurve>,
    pub families: Vec<LineFamily>,
    /// Invariant lines with irrational coefficients, described by intervals.
    pub irrational: Vec<String>,
}

impl LineSearch {
    pub fn has_family(&self) -> bool {
        !self.families.is_empty()
    }
}

/// All real invariant lines.
///
/// Vertical lines `x = c` need `P(c, y) ≡ 0`; slanted lines `y = a x + b`
/// need `(Q - a P)(x, a x + b) ≡ 0`, a polynomial system in `(a, b)` that is
/// solved by resultants.
pub fn find_invariant_lines(sys: &PlanarSystem) -> LineSearch {
    let mut out = LineSearch::default();
    vertical_lines(sys, &mut out);
    slanted_lines(sys, &mut out);
    out
}

fn push_line(sys: &PlanarSystem, f: MPoly, out: &mut LineSearch) {
    let c = verify_invariant_curve(sys, &f).expect("line satisfies the invariance conditions");
    out.lines.push(c);
}

fn vertical_lines(sys: &PlanarSystem, out: &mut LineSearch) {
    if sys.p.is_zero() {
        out.families.push(LineFamily {
            description: "x = c for every c".into(),
        });
        return;
    }
    let g = sys
        .p
        .coeffs_in(Var::Y)
        .iter()
        .map(|c| c.to_upoly(Var::X).unwrap())
        .fold(UPoly::zero(), |acc, c| acc.gcd(&c));
    if g.degree().unwrap_or(0) == 0 {
        return;
    }
    for iv in all_real_roots(&g) {
        match iv.exact {
            Some(c) => push_line(sys, MPoly::x() - MPoly::constant(c), out),
            None => out.irrational.push(format!(
                "x = c, c in [{}, {}]",
                fmt_rat(&iv.lo),
                fmt_rat(&iv.hi)
            )),
        }
    }
}

/// Coefficients of `x^k` in `(Q - a P)(x, a x + b)`, as polynomials in
/// `(a, b)` stored in the `(x, y)` slots.
pub fn slant_constraints(sys: &PlanarSystem) -> Vec<MPoly> {
    let mut by_power: BTreeMap<u32, MPoly> = BTreeMap::new();
    let mut add = |poly: &MPoly, extra_a: u32, sgn: i64| {
        for (m, c) in poly.terms() {
            for l in 0..=m.y {
                let coeff = c
                    * Rat::from_integer(binomial(m.y as i64, l as i64).into())
                    * Rat::from_integer(sgn.into());
                let t = MPoly::term(coeff, l + extra_a, m.y - l);
                let e = by_power.entry(m.x + l).or_insert_with(MPoly::zero);
                *e = &*e + &t;
            }
        }
    };
    add(&sys.q, 0, 1);
    add(&sys.p, 1, -1);
    by_power.into_values().filter(|p| !p.is_zero()).collect()
}

fn slanted_lines(sys: &PlanarSystem, out: &mut LineSearch) {
    let cs = slant_constraints(sys);
    if cs.is_empty() {
        out.families.push(LineFamily {
            description: "y = a*x + b for every a, b".into(),
        });
        return;
    }
    if cs.iter().any(MPoly::is_constant) {
        return;
    }
    let mut solved = None;
    'pairs: for i in 0..cs.len() {
        for j in i + 1..cs.len() {
            if let Ok(pts) = solve_common_zeros(&cs[i], &cs[j]) {
                solved = Some(pts);
                break 'pairs;
            }
        }
    }
    let Some(candidates) = solved else {
        family_lines(sys, &cs, out);
        return;
    };
    for pt in candidates {
        match cs
            .iter()
            .map(|c| pt.sign_of(c))
            .try_fold(true, |acc, s| s.map(|s| acc && s == 0))
        {
            Some(true) => {}
            Some(false) => continue,
            // undecidable at an irrational point: keep it visible
            None => {
                out.irrational
                    .push(format!("y = a*x + b, (a, b) ~ {pt} (unconfirmed)"));
                continue;
            }
        }
        record_slant(sys, &pt, out);
    }
}

fn record_slant(sys: &PlanarSystem, pt: &AlgebraicPoint, out: &mut LineSearch) {
    match pt.as_exact() {
        Some((a, b)) => push_line(
            sys,
            MPoly::y() - MPoly::x().scale(a) - MPoly::constant(b.clone()),
            out,
        ),
        None => out.irrational.push(format!("y = a*x + b, (a, b) in {pt}")),
    }
}

// Every pair of constraints shares a factor: report the family and pick out
// the horizontal lines, which are isolated within it.
fn family_lines(sys: &PlanarSystem, cs: &[MPoly], out: &mut LineSearch) {
    let shown: Vec<String> = cs
        .iter()
        .map(|c| format!("{} = 0", c.display_with(["a", "b"])))
        .collect();
    let mut description = format!("y = a*x + b subject to {}", shown.join(", "));
    if let [c] = cs {
        if let Some(u) = c.to_upoly(Var::X) {
            let roots: Vec<String> = all_real_roots(&u)
                .into_iter()
                .filter_map(|iv| iv.exact.map(|a| format!("y = {}*x + b", fmt_rat(&a))))
                .collect();
            if !roots.is_empty() {
                description = roots.join("; ");
            }
        } else if let Some(u) = c.to_upoly(Var::Y) {
            let roots: Vec<String> = all_real_roots(&u)
                .into_iter()
                .filter_map(|iv| iv.exact.map(|b| format!("y = a*x + {}", fmt_rat(&b))))
                .collect();
            if !roots.is_empty() {
                description = roots.join("; ");
            }
        }
    }
    out.families.push(LineFamily { description });
    let zero = Rat::zero();
    let horizontal = cs
        .iter()
        .map(|c| c.substitute(Var::X, &zero).to_upoly(Var::Y).unwrap())
        .fold(UPoly::zero(), |acc, c| acc.gcd(&c));
    if horizontal.is_zero() || horizontal.degree() == Some(0) {
        return;
    }
    for iv in all_real_roots(&horizontal) {
        match iv.exact {
            Some(b) => push_line(sys, MPoly::y() - MPoly::constant(b), out),
            None => out.irrational.push(format!(
                "y = b, b in [{}, {}]",
                fmt_rat(&iv.lo),
                fmt_rat(&iv.hi)
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtacticResult {
    pub order: u32,
    pub basis: Vec<Monomial>,
    pub e: MPoly,
    /// `(f, multiplicity of f in E_m)` for each curve passed in.
    pub multiplicities: Vec<(MPoly, Multiplicity)>,
}

impl ExtacticResult {
    pub fn basis_size(&self) -> usize {
        self.basis.len()
    }
}

/// The matrix whose rows are `X^k(v_j)` for the monomials `v_j` of degree
/// at most `m`, `k = 0..l`.
pub fn extactic_matrix(sys: &PlanarSystem, m: u32) -> Vec<Vec<MPoly>> {
    let basis = Monomial::up_to_degree(m);
    let mut rows = vec![basis
        .iter()
        .map(|b| MPoly::term(Rat::one(), b.x, b.y))
        .collect::<Vec<_>>()];
    for _ in 1..basis.len() {
        let next = rows.last().unwrap().iter().map(|f| sys.lie(f)).collect();
        rows.push(next);
    }
    rows
}

/// The `m`-th extactic curve and the multiplicity of each of `curves` in it.
pub fn extactic(sys: &PlanarSystem, m: u32, curves: &[MPoly]) -> ExtacticResult {
    let e = ffdet(&extactic_matrix(sys, m));
    let multiplicities = curves
        .iter()
        .map(|f| {
            let k = if e.is_zero() {
                Multiplicity::Undefined
            } else {
                match e.multiplicity_of(f) {
                    Ok(Some(k)) => Multiplicity::Known(k),
                    _ => Multiplicity::Undefined,
                }
            };
            (f.clone(), k)
        })
        .collect();
    ExtacticResult {
        order: m,
        basis: Monomial::up_to_degree(m),
        e,
        multiplicities,
    }
}

/// Search record for exponential factors `exp(g)` of the line at infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfinityAnsatz {
    /// Monomials of `g` (degree 1..=N).
    pub monomials: Vec<Monomial>,
    /// Nullspace basis of the degree-overflow constraints, in ansatz order.
    pub solutions: Vec<Vec<Rat>>,
}

/// Exponential factors `exp(g)` with `1 <= deg g <= n` and `deg X(g) <= d - 1`.
pub fn infinity_factors(sys: &PlanarSystem, n: u32) -> (Vec<ExpFactor>, InfinityAnsatz) {
    let d = sys.degree();
    let monomials: Vec<Monomial> = Monomial::up_to_degree(n)
        .into_iter()
        .filter(|m| m.degree() > 0)
        .collect();
    let images: Vec<MPoly> = monomials
        .iter()
        .map(|m| sys.lie(&MPoly::term(Rat::one(), m.x, m.y)))
        .collect();
    // rows: monomials of degree >= d appearing in some image
    let mut overflow: Vec<Monomial> = images
        .iter()
        .flat_map(|p| p.terms().map(|(m, _)| *m).collect::<Vec<_>>())
        .filter(|m| m.degree() + 1 > d)
        .collect();
    overflow.sort();
    overflow.dedup();
    let rows: Vec<Vec<Rat>> = overflow
        .iter()
        .map(|r| images.iter().map(|p| p.coeff(r.x, r.y)).collect())
        .collect();
    let solutions = nullspace(&rows, monomials.len());
    let factors = solutions
        .iter()
        .map(|v| {
            let g = combine(&monomials, v);
            let cofactor = sys.lie(&g);
            ExpFactor {
                g,
                f: MPoly::one(),
                cofactor,
            }
        })
        .collect();
    (
        factors,
        InfinityAnsatz {
            monomials,
            solutions,
        },
    )
}

fn combine(monomials: &[Monomial], v: &[Rat]) -> MPoly {
    MPoly::from_terms(monomials.iter().copied().zip(v.iter().cloned()))
}

/// Exponential factors `exp(g / f)` attached to a curve of multiplicity
/// `k > 1`, with `deg g <= (k - 1) deg f`, modulo multiples of `f`.
pub fn curve_factors(sys: &PlanarSystem, curve: &InvariantCurve, k: u32) -> Vec<ExpFactor> {
    if k < 2 {
        return Vec::new();
    }
    let d = sys.degree();
    let df = curve.f.degree().unwrap_or(0);
    let monomials = Monomial::up_to_degree((k - 1) * df);
    // X(g) - g K must be divisible by f, with quotient of degree <= d - 1
    let images: Vec<MPoly> = monomials
        .iter()
        .map(|m| {
            let g = MPoly::term(Rat::one(), m.x, m.y);
            &sys.lie(&g) - &(&g * &curve.cofactor)
        })
        .collect();
    let split: Vec<(MPoly, MPoly)> = images
        .iter()
        .map(|h| {
            let (q, r) = h.div_rem(&curve.f).expect("f nonzero");
            (q, r)
        })
        .collect();
    let mut keys: Vec<Monomial> = split
        .iter()
        .flat_map(|(q, r)| {
            r.terms()
                .map(|(m, _)| (0u8, *m))
                .chain(
                    q.terms()
                        .filter(|(m, _)| m.degree() + 1 > d)
                        .map(|(m, _)| (1u8, *m)),
                )
                .collect::<Vec<_>>()
        })
        .map(|(tag, m)| Monomial::new(m.x * 2 + tag as u32, m.y))
        .collect();
    keys.sort();
    keys.dedup();
    let rows: Vec<Vec<Rat>> = keys
        .iter()
        .map(|key| {
            let m = Monomial::new(key.x / 2, key.y);
            split
                .iter()
                .map(|(q, r)| {
                    if key.x % 2 == 0 {
                        r.coeff(m.x, m.y)
                    } else {
                        q.coeff(m.x, m.y)
                    }
                })
                .collect()
        })
        .collect();
    let sols = nullspace(&rows, monomials.len());
    // reduce modulo f and keep an independent set
    let reduced: Vec<MPoly> = sols
        .iter()
        .map(|v| combine(&monomials, v).rem(&curve.f).unwrap())
        .filter(|g| !g.is_zero())
        .collect();
    let mut cols: Vec<Monomial> = reduced
        .iter()
        .flat_map(|g| g.terms().map(|(m, _)| *m).collect::<Vec<_>>())
        .collect();
    cols.sort();
    cols.dedup();
    let mut mat: Vec<Vec<Rat>> = reduced
        .iter()
        .map(|g| cols.iter().map(|m| g.coeff(m.x, m.y)).collect())
        .collect();
    let r = rref(&mut mat, cols.len()).len();
    mat.truncate(r);
    mat.iter()
        .map(|row| {
            let g = combine(&cols, row);
            let h = &sys.lie(&g) - &(&g * &curve.cofactor);
            let cofactor = h
                .exact_div(&curve.f)
                .unwrap()
                .expect("divisibility imposed");
            ExpFactor {
                g,
                f: curve.f.clone(),
                cofactor,
            }
        })
        .collect()
}

/// All exponential factors within the degree bound `n`: the line at
/// infinity first, then one block per curve of multiplicity above one.
pub fn find_exponential_factors(
    sys: &PlanarSystem,
    curves: &[InvariantCurve],
    n: u32,
) -> Vec<ExpFactor> {
    let (mut out, _) = infinity_factors(sys, n);
    for c in curves {
        if let Multiplicity::Known(k) = c.multiplicity {
            out.extend(curve_factors(sys, c, k));
        }
    }
    out
}

pub fn divergence(sys: &PlanarSystem) -> MPoly {
    &sys.p.diff(Var::X) + &sys.q.diff(Var::Y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat::{int, rat};
    use crate::modelio::{leslie_gower_system, parse_system_with, ParamBindings};

    fn lg(a: Rat, b: Rat, c: Rat) -> PlanarSystem {
        leslie_gower_system(&ParamBindings::new(a, b, c))
    }

    fn poly(src: &str, a: &Rat, b: &Rat, c: &Rat) -> MPoly {
        let mut m = BTreeMap::new();
        m.insert("A".into(), a.clone());
        m.insert("B".into(), b.clone());
        m.insert("C".into(), c.clone());
        parse_system_with(&format!("dx = {src}\ndy = 0"), &m)
            .unwrap()
            .p
    }

    #[test]
    fn leslie_cofactors() {
        let (a, b, c) = (int(1), int(2), rat(1, 2));
        let sys = lg(a.clone(), b.clone(), c.clone());
        let k1 = verify_invariant_curve(&sys, &MPoly::x()).unwrap().cofactor;
        assert_eq!(k1, poly("-(C+x)*(-1+x+A*y)", &a, &b, &c));
        let k2 = verify_invariant_curve(&sys, &(MPoly::x() + MPoly::constant(c.clone())))
            .unwrap()
            .cofactor;
        assert_eq!(k2, poly("-x*(-1+x+A*y)", &a, &b, &c));
        let k3 = verify_invariant_curve(&sys, &MPoly::y()).unwrap().cofactor;
        assert_eq!(k3, poly("B*(C+x-y)", &a, &b, &c));
        assert!(verify_invariant_curve(&sys, &(MPoly::x() + MPoly::y())).is_none());
    }

    #[test]
    fn leslie_lines() {
        let c = rat(1, 2);
        let sys = lg(int(1), int(2), c.clone());
        let s = find_invariant_lines(&sys);
        assert!(!s.has_family() && s.irrational.is_empty());
        let fs: Vec<MPoly> = s.lines.iter().map(|l| l.f.clone()).collect();
        assert_eq!(
            fs,
            vec![MPoly::x() + MPoly::constant(c), MPoly::x(), MPoly::y()]
        );
    }

    #[test]
    fn linear_node_lines() {
        let sys = PlanarSystem::new(MPoly::x(), MPoly::y());
        let s = find_invariant_lines(&sys);
        let fs: Vec<MPoly> = s.lines.iter().map(|l| l.f.clone()).collect();
        assert_eq!(fs, vec![MPoly::x(), MPoly::y()]);
        assert_eq!(s.families.len(), 1);
        assert_eq!(s.families[0].description, "y = a*x + 0");
    }

    #[test]
    fn constant_field_family() {
        let sys = PlanarSystem::new(MPoly::one(), MPoly::one());
        let s = find_invariant_lines(&sys);
        assert!(s.lines.is_empty());
        assert_eq!(s.families[0].description, "y = 1*x + b");
    }

    #[test]
    fn extactic_e1_multiplicities() {
        let c = rat(1, 2);
        let sys = lg(int(1), int(2), c.clone());
        let xc = MPoly::x() + MPoly::constant(c);
        let r = extactic(&sys, 1, &[MPoly::x(), MPoly::y(), xc.clone()]);
        assert_eq!(r.basis_size(), 3);
        for (_, k) in &r.multiplicities {
            assert_eq!(*k, Multiplicity::Known(1));
        }
        let q =
            r.e.exact_div(&(MPoly::x() * MPoly::y() * xc))
                .unwrap()
                .unwrap();
        assert!(q.exact_div(&MPoly::x()).unwrap().is_none());
    }

    #[test]
    fn multiplicity_monotone_in_order() {
        let c = rat(1, 2);
        let sys = lg(int(1), int(2), c.clone());
        let fs = [MPoly::x(), MPoly::y(), MPoly::x() + MPoly::constant(c)];
        let e1 = extactic(&sys, 1, &fs);
        let e2 = extactic(&sys, 2, &fs);
        assert_eq!(e2.basis_size(), 6);
        for ((_, k1), (_, k2)) in e1.multiplicities.iter().zip(&e2.multiplicities) {
            let (Multiplicity::Known(a), Multiplicity::Known(b)) = (k1, k2) else {
                panic!("multiplicity undefined")
            };
            assert!(b >= a);
        }
    }

    #[test]
    fn extactic_vanishes_for_star_node() {
        let sys = PlanarSystem::new(MPoly::x(), MPoly::y());
        assert!(extactic(&sys, 1, &[]).e.is_zero());
    }

    #[test]
    fn leslie_exponential_factors() {
        let (a, b, c) = (int(1), int(2), rat(1, 2));
        let sys = lg(a.clone(), b.clone(), c.clone());
        for n in [1, 2] {
            let (fs, ansatz) = infinity_factors(&sys, n);
            assert_eq!(fs.len(), 1);
            assert_eq!(fs[0].g, MPoly::y());
            assert_eq!(fs[0].cofactor, poly("B*(C+x-y)*y", &a, &b, &c));
            assert!(fs[0].verify(&sys));
            for (m, v) in ansatz.monomials.iter().zip(&ansatz.solutions[0]) {
                if m.degree() == 2 {
                    assert!(v.is_zero());
                }
            }
        }
    }

    #[test]
    fn no_factors_for_linear_node() {
        let sys = PlanarSystem::new(MPoly::x(), MPoly::y());
        assert!(infinity_factors(&sys, 1).0.is_empty());
    }

    #[test]
    fn factor_from_double_line() {
        // x' = x^2, y' = 1: E_1 = -2x^3, and exp(y/x) appears
        let sys = PlanarSystem::new(MPoly::x() * MPoly::x(), MPoly::one());
        let c = verify_invariant_curve(&sys, &MPoly::x()).unwrap();
        let e = extactic(&sys, 1, &[MPoly::x()]);
        assert_eq!(e.multiplicities[0].1, Multiplicity::Known(3));
        let fs = curve_factors(&sys, &c, 3);
        assert!(!fs.is_empty());
        for f in &fs {
            assert!(f.verify(&sys));
            assert!(f.cofactor.degree().unwrap_or(0) <= 1);
        }
    }

    #[test]
    fn divergence_examples() {
        let (a, b, c) = (int(1), int(2), rat(1, 2));
        let sys = lg(a.clone(), b.clone(), c.clone());
        assert_eq!(
            divergence(&sys),
            poly(
                "(1+B)*C - (2*B+A*C)*y + (2+B-2*C)*x - 3*x^2 - 2*A*x*y",
                &a,
                &b,
                &c
            )
        );
        let rot = PlanarSystem::new(MPoly::y(), -MPoly::x());
        assert!(divergence(&rot).is_zero());
    }
}
