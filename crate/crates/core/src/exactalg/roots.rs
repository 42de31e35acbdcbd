//! Real-root isolation by Sturm sequences with exact rational arithmetic.

use super::rat::{ceil, floor, Rat};
use super::upoly::UPoly;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Default refinement width, `2^-40`.
pub fn default_width() -> Rat {
    Rat::new(BigInt::one(), BigInt::one() << 40)
}

/// An isolating interval for one real root of a square-free polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootInterval {
    pub lo: Rat,
    pub hi: Rat,
    /// Set when the root is rational; then `lo == hi == exact`.
    pub exact: Option<Rat>,
}

impl RootInterval {
    pub fn point(r: Rat) -> Self {
        RootInterval {
            lo: r.clone(),
            hi: r.clone(),
            exact: Some(r),
        }
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) / Rat::from_integer(BigInt::from(2))
    }

    pub fn contains(&self, v: &Rat) -> bool {
        &self.lo <= v && v <= &self.hi
    }
}

/// Sturm chain of a square-free polynomial.
#[derive(Clone, Debug)]
pub struct Sturm {
    chain: Vec<UPoly>,
}

impl Sturm {
    pub fn new(p: &UPoly) -> Self {
        let mut chain = vec![p.clone()];
        let d = p.derivative();
        if !d.is_zero() {
            chain.push(d);
        }
        while chain.len() >= 2 {
            let n = chain.len();
            let r = chain[n - 2].rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(r.scale(&-Rat::one()));
        }
        Sturm { chain }
    }

    fn variations(&self, x: &Rat) -> usize {
        let mut last = 0;
        let mut v = 0;
        for p in &self.chain {
            let s = p.sign_at(x);
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
        v
    }

    /// Number of distinct roots in the half-open interval `(a, b]`.
    pub fn count(&self, a: &Rat, b: &Rat) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }
}

/// Isolates every real root of `p` in the closed window `[lo, hi]`.
///
/// Works on the square-free part. Intervals are disjoint, sorted, and each
/// contains exactly one root; either both endpoint signs of the square-free
/// part are nonzero and opposite, or the interval is a single exact root.
/// Rational roots are always reported exactly.
pub fn isolate_real_roots(p: &UPoly, lo: &Rat, hi: &Rat) -> Vec<RootInterval> {
    assert!(!p.is_zero(), "root isolation of the zero polynomial");
    if p.degree() == Some(0) || lo > hi {
        return Vec::new();
    }
    let sf = p.squarefree();
    let sturm = Sturm::new(&sf);
    let mut out = Vec::new();
    if sf.sign_at(lo) == 0 {
        out.push(RootInterval::point(lo.clone()));
    }
    let n = sturm.count(lo, hi);
    split(&sf, &sturm, lo.clone(), hi.clone(), n, &mut out);
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    out.into_iter().map(|iv| make_exact(&sf, iv)).collect()
}

/// All real roots, using a Cauchy bound for the window.
pub fn all_real_roots(p: &UPoly) -> Vec<RootInterval> {
    let b = cauchy_bound(p);
    isolate_real_roots(p, &-b.clone(), &b)
}

/// `1 + max |a_i / a_n|`, strictly larger than every root modulus.
pub fn cauchy_bound(p: &UPoly) -> Rat {
    let lc = p.leading_coeff();
    let m = p
        .coeffs()
        .iter()
        .rev()
        .skip(1)
        .map(|c| (c / &lc).abs())
        .max()
        .unwrap_or_else(Rat::zero);
    m + Rat::one()
}

// Roots in (a, b], `n` of them.
fn split(p: &UPoly, st: &Sturm, a: Rat, b: Rat, n: usize, out: &mut Vec<RootInterval>) {
    if n == 0 {
        return;
    }
    if n == 1 {
        if p.sign_at(&b) == 0 {
            out.push(RootInterval::point(b));
        } else {
            out.push(tighten_left(p, st, a, b));
        }
        return;
    }
    let m = (&a + &b) / Rat::from_integer(BigInt::from(2));
    let left = st.count(&a, &m);
    split(p, st, a, m.clone(), left, out);
    split(p, st, m, b, n - left, out);
}

// One root in (a, b] with p(b) != 0; move `a` off any root it sits on.
fn tighten_left(p: &UPoly, st: &Sturm, mut a: Rat, b: Rat) -> RootInterval {
    while p.sign_at(&a) == 0 {
        let m = (&a + &b) / Rat::from_integer(BigInt::from(2));
        if st.count(&m, &b) == 1 {
            a = m;
        } else {
            // root lies in (a, m]; m itself may be it
            if p.sign_at(&m) == 0 {
                return RootInterval::point(m);
            }
            return tighten_left(p, st, a, m);
        }
    }
    RootInterval {
        lo: a,
        hi: b,
        exact: None,
    }
}

/// Bisects until the interval is narrower than `width` (or exact).
pub fn refine(p: &UPoly, iv: &RootInterval, width: &Rat) -> RootInterval {
    if iv.exact.is_some() {
        return iv.clone();
    }
    let mut lo = iv.lo.clone();
    let mut hi = iv.hi.clone();
    let slo = p.sign_at(&lo);
    while &hi - &lo >= *width {
        let m = (&lo + &hi) / Rat::from_integer(BigInt::from(2));
        let sm = p.sign_at(&m);
        if sm == 0 {
            return RootInterval::point(m);
        }
        if sm == slo {
            lo = m;
        } else {
            hi = m;
        }
    }
    RootInterval {
        lo,
        hi,
        exact: None,
    }
}

/// One bisection step.
pub fn bisect_once(p: &UPoly, iv: &RootInterval) -> RootInterval {
    refine(p, iv, &(iv.width() / Rat::from_integer(BigInt::from(2))))
}

// A rational root p/q of an integer polynomial with leading coefficient L has
// q | L, so L*root is an integer; check the few integer candidates.
fn make_exact(p: &UPoly, iv: RootInterval) -> RootInterval {
    if iv.exact.is_some() {
        return iv;
    }
    let ints = p.primitive_integer();
    let lead = Rat::from_integer(ints.last().unwrap().abs());
    let target = lead.recip();
    let iv = if iv.width() >= target {
        refine(p, &iv, &target)
    } else {
        iv
    };
    if iv.exact.is_some() {
        return iv;
    }
    let lo = ceil(&(&iv.lo * &lead));
    let hi = floor(&(&iv.hi * &lead));
    let mut k = lo;
    while k <= hi {
        let cand = Rat::from_integer(k.clone()) / &lead;
        if p.sign_at(&cand) == 0 {
            return RootInterval::point(cand);
        }
        k += 1;
    }
    iv
}
