//! Closed rational intervals, used to bound polynomial values over boxes.

use super::mpoly::MPoly;
use super::rat::Rat;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatInterval {
    pub lo: Rat,
    pub hi: Rat,
}

impl RatInterval {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        debug_assert!(lo <= hi);
        RatInterval { lo, hi }
    }

    pub fn point(v: Rat) -> Self {
        RatInterval {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn add(&self, o: &RatInterval) -> RatInterval {
        RatInterval::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn sub(&self, o: &RatInterval) -> RatInterval {
        RatInterval::new(&self.lo - &o.hi, &self.hi - &o.lo)
    }

    pub fn mul(&self, o: &RatInterval) -> RatInterval {
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        RatInterval::new(lo, hi)
    }

    pub fn scale(&self, c: &Rat) -> RatInterval {
        self.mul(&RatInterval::point(c.clone()))
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= Rat::zero() && Rat::zero() <= self.hi
    }

    /// Sign when it is determined by the enclosure.
    pub fn sign(&self) -> Option<i32> {
        if self.lo > Rat::zero() {
            Some(1)
        } else if self.hi < Rat::zero() {
            Some(-1)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    fn pow(&self, n: u32) -> RatInterval {
        let mut acc = RatInterval::point(Rat::one());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }
}

/// Enclosure of `p` over the box `x × y` (naive interval evaluation).
pub fn eval_box(p: &MPoly, x: &RatInterval, y: &RatInterval) -> RatInterval {
    let mut acc = RatInterval::point(Rat::zero());
    for (m, c) in p.terms() {
        let t = x.pow(m.x).mul(&y.pow(m.y)).scale(c);
        acc = acc.add(&t);
    }
    acc
}
