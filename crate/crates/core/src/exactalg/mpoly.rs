//! Sparse bivariate polynomials with exact rational coefficients.

use super::rat::{denom_lcm, fmt_rat, to_f64, Rat};
use super::upoly::UPoly;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Y,
}

/// Exponent pair `x^i y^j`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub x: u32,
    pub y: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { x: 0, y: 0 };

    pub fn new(x: u32, y: u32) -> Self {
        Monomial { x, y }
    }

    pub fn degree(self) -> u32 {
        self.x + self.y
    }

    pub fn exp(self, var: Var) -> u32 {
        match var {
            Var::X => self.x,
            Var::Y => self.y,
        }
    }

    pub fn divides(self, other: Monomial) -> bool {
        self.x <= other.x && self.y <= other.y
    }

    fn times(self, o: Monomial) -> Monomial {
        Monomial::new(self.x + o.x, self.y + o.y)
    }

    fn over(self, o: Monomial) -> Monomial {
        Monomial::new(self.x - o.x, self.y - o.y)
    }

    /// All monomials of total degree `<= d`, in ascending term order.
    pub fn up_to_degree(d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        for k in 0..=d {
            for j in 0..=k {
                out.push(Monomial::new(k - j, j));
            }
        }
        out
    }
}

// Graded order; ties go to the larger power of y, so `y - a*x - b` and
// `x - c` are both monic.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then(self.y.cmp(&other.y))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial in two variables over the rationals.
///
/// Zero coefficients are never stored, so structural equality is polynomial
/// equality and the last key of the term map is the leading monomial.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MPoly {
    terms: BTreeMap<Monomial, Rat>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn one() -> Self {
        MPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        MPoly::term(c, 0, 0)
    }

    pub fn term(c: Rat, i: u32, j: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::new(i, j), c);
        }
        MPoly { terms }
    }

    pub fn var(v: Var) -> Self {
        match v {
            Var::X => MPoly::x(),
            Var::Y => MPoly::y(),
        }
    }

    pub fn x() -> Self {
        MPoly::term(Rat::one(), 1, 0)
    }

    pub fn y() -> Self {
        MPoly::term(Rat::one(), 0, 1)
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut terms: BTreeMap<Monomial, Rat> = BTreeMap::new();
        for (m, c) in it {
            *terms.entry(m).or_insert_with(Rat::zero) += c;
        }
        terms.retain(|_, c| !c.is_zero());
        MPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    /// Total degree; `None` stands for the degree of the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    pub fn degree_in(&self, var: Var) -> Option<u32> {
        self.terms.keys().map(|m| m.exp(var)).max()
    }

    /// Largest `k` such that `var^k` divides the polynomial.
    pub fn order_in(&self, var: Var) -> Option<u32> {
        self.terms.keys().map(|m| m.exp(var)).min()
    }

    /// Lowest total degree among the terms.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.degree())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rat {
        self.terms
            .get(&Monomial::new(i, j))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn leading_term(&self) -> Option<(Monomial, &Rat)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, c))
    }

    pub fn leading_coeff(&self) -> Rat {
        self.leading_term()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rat::zero)
    }

    /// Scales so the leading coefficient is one; zero stays zero.
    pub fn monic(&self) -> MPoly {
        match self.leading_term() {
            None => MPoly::zero(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    pub fn scale(&self, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, i: u32, j: u32) -> MPoly {
        let s = Monomial::new(i, j);
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.times(s), v.clone()))
                .collect(),
        }
    }

    /// Divides by `x^i y^j`; `None` when some term is not divisible.
    pub fn div_monomial(&self, i: u32, j: u32) -> Option<MPoly> {
        let s = Monomial::new(i, j);
        if !self.terms.keys().all(|m| s.divides(*m)) {
            return None;
        }
        Some(MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.over(s), v.clone()))
                .collect(),
        })
    }

    pub fn pow(&self, n: u32) -> MPoly {
        let mut acc = MPoly::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative.
    pub fn diff(&self, var: Var) -> MPoly {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exp(var);
            if e == 0 {
                continue;
            }
            let nm = match var {
                Var::X => Monomial::new(m.x - 1, m.y),
                Var::Y => Monomial::new(m.x, m.y - 1),
            };
            terms.insert(nm, c * Rat::from_integer(BigInt::from(e)));
        }
        MPoly { terms }
    }

    pub fn eval(&self, x: &Rat, y: &Rat) -> Rat {
        let dx = self.degree_in(Var::X).unwrap_or(0) as usize;
        let dy = self.degree_in(Var::Y).unwrap_or(0) as usize;
        let xp = powers(x, dx);
        let yp = powers(y, dy);
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            acc += c * &xp[m.x as usize] * &yp[m.y as usize];
        }
        acc
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| to_f64(c) * x.powi(m.x as i32) * y.powi(m.y as i32))
            .sum()
    }

    /// Substitutes `x := px`, `y := py`.
    pub fn compose(&self, px: &MPoly, py: &MPoly) -> MPoly {
        let dx = self.degree_in(Var::X).unwrap_or(0) as usize;
        let dy = self.degree_in(Var::Y).unwrap_or(0) as usize;
        let xp = poly_powers(px, dx);
        let yp = poly_powers(py, dy);
        let mut acc = MPoly::zero();
        for (m, c) in &self.terms {
            let t = (&xp[m.x as usize] * &yp[m.y as usize]).scale(c);
            acc = &acc + &t;
        }
        acc
    }

    /// Fixes one variable to a value, leaving a polynomial in the other.
    pub fn substitute(&self, var: Var, value: &Rat) -> MPoly {
        let d = self.degree_in(var).unwrap_or(0) as usize;
        let vp = powers(value, d);
        MPoly::from_terms(self.terms.iter().map(|(m, c)| {
            let e = m.exp(var) as usize;
            let nm = match var {
                Var::X => Monomial::new(0, m.y),
                Var::Y => Monomial::new(m.x, 0),
            };
            (nm, c * &vp[e])
        }))
    }

    pub fn homogeneous_part(&self, k: u32) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == k)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn swap_vars(&self) -> MPoly {
        MPoly::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| (Monomial::new(m.y, m.x), c.clone())),
        )
    }

    /// Coefficients of `var^0, var^1, ...` as polynomials in the other variable.
    pub fn coeffs_in(&self, var: Var) -> Vec<MPoly> {
        let n = self.degree_in(var).map(|d| d as usize + 1).unwrap_or(0);
        let mut out = vec![MPoly::zero(); n];
        for (m, c) in &self.terms {
            let (k, rest) = match var {
                Var::X => (m.x, Monomial::new(0, m.y)),
                Var::Y => (m.y, Monomial::new(m.x, 0)),
            };
            out[k as usize].terms.insert(rest, c.clone());
        }
        out
    }

    /// Dense univariate view when only `var` occurs.
    pub fn to_upoly(&self, var: Var) -> Option<UPoly> {
        let other = match var {
            Var::X => Var::Y,
            Var::Y => Var::X,
        };
        if self.degree_in(other).unwrap_or(0) > 0 {
            return None;
        }
        let n = self.degree_in(var).map(|d| d as usize + 1).unwrap_or(0);
        let mut coeffs = vec![Rat::zero(); n];
        for (m, c) in &self.terms {
            coeffs[m.exp(var) as usize] = c.clone();
        }
        Some(UPoly::new(coeffs))
    }

    pub fn from_upoly(p: &UPoly, var: Var) -> MPoly {
        MPoly::from_terms(p.coeffs().iter().enumerate().map(|(k, c)| {
            let m = match var {
                Var::X => Monomial::new(k as u32, 0),
                Var::Y => Monomial::new(0, k as u32),
            };
            (m, c.clone())
        }))
    }

    /// Exact quotient `n / d`, or `None` when `d` does not divide `n`.
    pub fn exact_div(&self, d: &MPoly) -> Result<Option<MPoly>, PolyError> {
        let (q, r) = self.div_rem(d)?;
        Ok(if r.is_zero() { Some(q) } else { None })
    }

    /// Normal form of `self` modulo a single polynomial `d` (division by
    /// leading terms). Linear in `self`.
    pub fn rem(&self, d: &MPoly) -> Result<MPoly, PolyError> {
        Ok(self.div_rem(d)?.1)
    }

    /// Multivariate division by a single divisor: `self = q*d + r` where no
    /// term of `r` is divisible by the leading monomial of `d`.
    pub fn div_rem(&self, d: &MPoly) -> Result<(MPoly, MPoly), PolyError> {
        let (lm, lc) = match d.leading_term() {
            Some((m, c)) => (m, c.clone()),
            None => return Err(PolyError::DivisionByZero),
        };
        let lc_inv = lc.recip();
        let mut work = self.terms.clone();
        let mut quot: BTreeMap<Monomial, Rat> = BTreeMap::new();
        let mut rem: BTreeMap<Monomial, Rat> = BTreeMap::new();
        while let Some((m, c)) = work.pop_last() {
            if !lm.divides(m) {
                rem.insert(m, c);
                continue;
            }
            let qm = m.over(lm);
            let qc = &c * &lc_inv;
            for (dm, dc) in d.terms.iter().rev().skip(1) {
                let t = dm.times(qm);
                let delta = &qc * dc;
                match work.get_mut(&t) {
                    Some(v) => {
                        *v -= delta;
                        if v.is_zero() {
                            work.remove(&t);
                        }
                    }
                    None => {
                        work.insert(t, -delta);
                    }
                }
            }
            quot.insert(qm, qc);
        }
        Ok((MPoly { terms: quot }, MPoly { terms: rem }))
    }

    /// Largest `k` with `f^k | self`; `None` when `self` is zero.
    pub fn multiplicity_of(&self, f: &MPoly) -> Result<Option<u32>, PolyError> {
        if f.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(None);
        }
        if f.is_constant() {
            return Ok(None);
        }
        let mut k = 0;
        let mut cur = self.clone();
        while let Some(q) = cur.exact_div(f)? {
            k += 1;
            cur = q;
        }
        Ok(Some(k))
    }

    /// Integer coefficients with a common denominator: `self = ints / den`.
    pub(crate) fn integer_terms(&self) -> (Vec<(Monomial, BigInt)>, BigInt) {
        let den = denom_lcm(self.terms.values());
        let ints = self
            .terms
            .iter()
            .map(|(m, c)| (*m, c.numer() * (&den / c.denom())))
            .collect();
        (ints, den)
    }

    pub fn display_with(&self, names: [&str; 2]) -> String {
        let mut s = String::new();
        if self.terms.is_empty() {
            return "0".to_string();
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let a = c.abs();
            let mut factors = Vec::new();
            for (name, e) in [(names[0], m.x), (names[1], m.y)] {
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            if factors.is_empty() {
                s.push_str(&fmt_rat(&a));
            } else {
                if !a.is_one() {
                    s.push_str(&fmt_rat(&a));
                    s.push('*');
                }
                s.push_str(&factors.join("*"));
            }
        }
        s
    }
}

fn powers(v: &Rat, n: usize) -> Vec<Rat> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(Rat::one());
    for k in 0..n {
        let next = &out[k] * v;
        out.push(next);
    }
    out
}

fn poly_powers(p: &MPoly, n: usize) -> Vec<MPoly> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(MPoly::one());
    for k in 0..n {
        let next = &out[k] * p;
        out.push(next);
    }
    out
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(["x", "y"]))
    }
}

impl<'a> Add<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            match terms.get_mut(m) {
                Some(v) => {
                    *v += c;
                    if v.is_zero() {
                        terms.remove(m);
                    }
                }
                None => {
                    terms.insert(*m, c.clone());
                }
            }
        }
        MPoly { terms }
    }
}

impl<'a> Sub<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        self + &(-rhs)
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

impl<'a> Mul<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    // Multiplies over the integers with a common denominator, which avoids a
    // gcd per accumulated product.
    fn mul(self, rhs: &MPoly) -> MPoly {
        if self.is_zero() || rhs.is_zero() {
            return MPoly::zero();
        }
        let (a, da) = self.integer_terms();
        let (b, db) = rhs.integer_terms();
        let mut acc: HashMap<Monomial, BigInt> = HashMap::with_capacity(a.len() * b.len());
        for (ma, ca) in &a {
            for (mb, cb) in &b {
                *acc.entry(ma.times(*mb)).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        let den = da * db;
        MPoly {
            terms: acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| (m, Rat::new(c, den.clone())))
                .collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $f(self, rhs: MPoly) -> MPoly {
                (&self).$f(&rhs)
            }
        }
        impl<'a> $tr<&'a MPoly> for MPoly {
            type Output = MPoly;
            fn $f(self, rhs: &MPoly) -> MPoly {
                (&self).$f(rhs)
            }
        }
        impl<'a> $tr<MPoly> for &'a MPoly {
            type Output = MPoly;
            fn $f(self, rhs: MPoly) -> MPoly {
                self.$f(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat::{int, rat};

    fn c(v: Rat) -> MPoly {
        MPoly::constant(v)
    }

    #[test]
    fn monomial_product() {
        assert_eq!(MPoly::x() * MPoly::y(), MPoly::term(int(1), 1, 1));
    }

    #[test]
    fn binomial_square() {
        let p = MPoly::one() + MPoly::x();
        let expected = MPoly::one() + MPoly::x().scale(&int(2)) + MPoly::term(int(1), 2, 0);
        assert_eq!(&p * &p, expected);
    }

    #[test]
    fn derivative_power_rule() {
        let p = MPoly::term(int(1), 2, 1);
        assert_eq!(p.diff(Var::X), MPoly::term(int(2), 1, 1));
        assert!(c(int(7)).diff(Var::Y).is_zero());
    }

    #[test]
    fn exact_division() {
        let half = rat(1, 2);
        let n = MPoly::term(int(1), 2, 0) - c(&half * &half);
        let d = MPoly::x() + c(half.clone());
        assert_eq!(n.exact_div(&d).unwrap(), Some(MPoly::x() - c(half)));
        assert_eq!(MPoly::x().exact_div(&MPoly::y()).unwrap(), None);
        assert_eq!(
            MPoly::x().exact_div(&MPoly::zero()),
            Err(PolyError::DivisionByZero)
        );
    }

    #[test]
    fn degree_of_zero_is_sentinel() {
        assert_eq!(MPoly::zero().degree(), None);
        assert_eq!(c(int(3)).degree(), Some(0));
        assert_eq!((MPoly::x() * MPoly::y() + MPoly::x()).degree(), Some(2));
    }

    #[test]
    fn lines_are_monic_in_the_expected_variable() {
        let slanted = (MPoly::y() - MPoly::x().scale(&int(2)) - c(int(1))).scale(&int(3));
        assert_eq!(
            slanted.monic().leading_term().unwrap().0,
            Monomial::new(0, 1)
        );
        let vertical = (MPoly::x() + c(int(4))).scale(&rat(-1, 2));
        assert_eq!(vertical.monic(), MPoly::x() + c(int(4)));
    }

    #[test]
    fn compose_and_eval_agree() {
        let p = MPoly::term(int(3), 2, 1) - MPoly::y() + c(rat(1, 3));
        let px = MPoly::x() + MPoly::y();
        let py = MPoly::x() * MPoly::x();
        let q = p.compose(&px, &py);
        let (a, b) = (rat(2, 5), rat(-7, 3));
        assert_eq!(q.eval(&a, &b), p.eval(&(&a + &b), &(&a * &a)));
    }

    #[test]
    fn multiplicity_by_repeated_division() {
        let f = MPoly::x() + c(int(1));
        let p = f.pow(3) * MPoly::y();
        assert_eq!(p.multiplicity_of(&f).unwrap(), Some(3));
        assert_eq!(p.multiplicity_of(&MPoly::x()).unwrap(), Some(0));
    }

    #[test]
    fn display_is_parseable_form() {
        let p = MPoly::term(rat(-1, 2), 2, 1) + MPoly::x() - c(int(3));
        assert_eq!(p.to_string(), "-1/2*x^2*y + x - 3");
    }
}
