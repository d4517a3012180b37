//! Closed intervals with outward rounding.
//!
//! Rust does not expose the FPU rounding mode, so every operation rounds its
//! endpoints one ulp outward with `next_down`/`next_up`. The result always
//! encloses the exact real result of the operation on any points of the
//! operands, which is all the branch-and-prune solver relies on.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

#[inline]
fn down(x: f64) -> f64 {
    if x.is_finite() {
        x.next_down()
    } else {
        x
    }
}

#[inline]
fn up(x: f64) -> f64 {
    if x.is_finite() {
        x.next_up()
    } else {
        x
    }
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };
    pub const ENTIRE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "interval [{lo}, {hi}] is reversed");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    /// Point value widened by `rel` relative to its magnitude plus one ulp,
    /// for inputs that are themselves results of rounded computation.
    pub fn around(x: f64, rel: f64) -> Self {
        let pad = x.abs() * rel;
        Interval {
            lo: down(x - pad),
            hi: up(x + pad),
        }
    }

    pub fn mid(&self) -> f64 {
        if self.lo.is_infinite() || self.hi.is_infinite() {
            if self.lo.is_infinite() && self.hi.is_infinite() {
                return 0.0;
            }
            return if self.lo.is_infinite() { self.hi } else { self.lo };
        }
        let m = 0.5 * self.lo + 0.5 * self.hi;
        m.clamp(self.lo, self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0.0 && 0.0 <= self.hi
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Integer power. Even powers of intervals straddling zero start at zero.
    pub fn powi(&self, n: u32) -> Interval {
        match n {
            0 => Interval::ONE,
            1 => *self,
            _ => {
                let mut acc = *self;
                for _ in 1..n {
                    acc = acc * *self;
                }
                if n % 2 == 0 {
                    let sq = Interval {
                        lo: if self.contains_zero() {
                            0.0
                        } else {
                            acc.lo.max(0.0)
                        },
                        hi: acc.hi,
                    };
                    return sq;
                }
                acc
            }
        }
    }

    pub fn sqr(&self) -> Interval {
        self.powi(2)
    }

    pub fn recip(&self) -> Option<Interval> {
        if self.contains_zero() {
            return None;
        }
        Some(Interval {
            lo: down(1.0 / self.hi),
            hi: up(1.0 / self.lo),
        })
    }

    /// `self / other`, or `None` when the divisor contains zero.
    pub fn checked_div(&self, other: &Interval) -> Option<Interval> {
        if other.contains_zero() {
            return None;
        }
        let c = [
            self.lo / other.lo,
            self.lo / other.hi,
            self.hi / other.lo,
            self.hi / other.hi,
        ];
        Some(min_max_outward(c))
    }

    /// Extended division for interval Newton steps: returns the (at most two)
    /// pieces of `{ x / y : x in self, y in other }` over the reals.
    pub fn extended_div(&self, other: &Interval) -> Vec<Interval> {
        if let Some(q) = self.checked_div(other) {
            return vec![q];
        }
        if self.contains_zero() {
            return vec![Interval::ENTIRE];
        }
        let (a, c, d) = (*self, other.lo, other.hi);
        if c == 0.0 && d == 0.0 {
            return vec![];
        }
        let mut out = Vec::new();
        if a.hi < 0.0 {
            if c <= 0.0 {
                if d > 0.0 {
                    out.push(Interval::new(f64::NEG_INFINITY, up(a.hi / d)));
                }
                if c < 0.0 {
                    out.push(Interval::new(down(a.hi / c), f64::INFINITY));
                }
            }
        } else {
            // a.lo > 0
            if c < 0.0 {
                out.push(Interval::new(f64::NEG_INFINITY, up(a.lo / c)));
            }
            if d > 0.0 {
                out.push(Interval::new(down(a.lo / d), f64::INFINITY));
            }
        }
        out
    }
}

fn min_max_outward(c: [f64; 4]) -> Interval {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in c {
        if v.is_nan() {
            return Interval::ENTIRE;
        }
        lo = lo.min(v);
        hi = hi.max(v);
    }
    Interval {
        lo: down(lo),
        hi: up(hi),
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        let lo = self.lo + rhs.lo;
        let hi = self.hi + rhs.hi;
        if lo.is_nan() || hi.is_nan() {
            return Interval::ENTIRE;
        }
        Interval {
            lo: down(lo),
            hi: up(hi),
        }
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        self + (-rhs)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        // exact zeros short-circuit so that 0 * inf stays 0
        if (self.lo == 0.0 && self.hi == 0.0) || (rhs.lo == 0.0 && rhs.hi == 0.0) {
            return Interval::ZERO;
        }
        if self.lo == self.hi && rhs.lo == rhs.hi {
            let p = self.lo * rhs.lo;
            return Interval {
                lo: down(p),
                hi: up(p),
            };
        }
        min_max_outward([
            self.lo * rhs.lo,
            self.lo * rhs.hi,
            self.hi * rhs.lo,
            self.hi * rhs.hi,
        ])
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn tenth_is_enclosed() {
        let a = Interval::point(0.1);
        let s = a + a + a;
        assert!(s.contains(0.30000000000000004));
        assert!(s.lo < 0.3 && s.hi > 0.3);
    }

    #[test]
    fn even_power_of_straddling_interval() {
        let x = Interval::new(-1.0, 2.0);
        let sq = x.sqr();
        assert_eq!(sq.lo, 0.0);
        assert!(sq.hi >= 4.0);
        let cube = x.powi(3);
        assert!(cube.lo <= -1.0 && cube.hi >= 8.0);
    }

    #[test]
    fn extended_division_splits() {
        let pieces = Interval::new(1.0, 2.0).extended_div(&Interval::new(-1.0, 1.0));
        assert_eq!(pieces.len(), 2);
        assert!(pieces[0].hi <= -1.0 + 1e-15);
        assert!(pieces[1].lo >= 1.0 - 1e-15);
    }

    proptest! {
        #[test]
        fn ops_enclose_point_results(a in -1e3f64..1e3, b in -1e3f64..1e3,
                                     wa in 0f64..1.0, wb in 0f64..1.0) {
            let x = Interval::new(a, a + wa);
            let y = Interval::new(b, b + wb);
            let (pa, pb) = (a + wa * 0.5, b + wb * 0.25);
            prop_assert!((x + y).contains(pa + pb));
            prop_assert!((x - y).contains(pa - pb));
            prop_assert!((x * y).contains(pa * pb));
            if let Some(q) = x.checked_div(&y) {
                prop_assert!(q.contains(pa / pb));
            }
        }
    }
}
