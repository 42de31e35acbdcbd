//! Exact arithmetic kernel: rationals, bivariate and univariate polynomials,
//! real-root isolation and fraction-free determinants.

pub mod ffdet;
pub mod interval;
pub mod linalg;
pub mod mpoly;
pub mod rat;
pub mod roots;
pub mod upoly;

pub use ffdet::ffdet;
pub use interval::{eval_box, RatInterval};
pub use mpoly::{MPoly, Monomial, PolyError, Var};
pub use rat::{fmt_rat, int, parse_rat, rat, Rat};
pub use roots::{isolate_real_roots, refine, RootInterval};
pub use upoly::UPoly;

/// Resultant of `a` and `b` with respect to `var`, as a polynomial in the
/// other variable (Sylvester determinant).
pub fn resultant(a: &MPoly, b: &MPoly, var: Var) -> MPoly {
    let ca = a.coeffs_in(var);
    let cb = b.coeffs_in(var);
    if ca.is_empty() || cb.is_empty() {
        return MPoly::zero();
    }
    let m = ca.len() - 1;
    let n = cb.len() - 1;
    if m == 0 && n == 0 {
        return MPoly::one();
    }
    if m == 0 {
        return ca[0].pow(n as u32);
    }
    if n == 0 {
        return cb[0].pow(m as u32);
    }
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![MPoly::zero(); size];
        for (k, c) in ca.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![MPoly::zero(); size];
        for (k, c) in cb.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    ffdet(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resultant_eliminates() {
        // x^2 + y^2 - 1 and y - x: resultant in y is 2x^2 - 1
        let circle = MPoly::x() * MPoly::x() + MPoly::y() * MPoly::y() - MPoly::one();
        let line = MPoly::y() - MPoly::x();
        let r = resultant(&circle, &line, Var::Y);
        assert_eq!(r, MPoly::term(int(2), 2, 0) - MPoly::one());
    }
}
