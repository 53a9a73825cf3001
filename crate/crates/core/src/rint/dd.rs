//! Double-double ball arithmetic for the tail kernel.
//!
//! A value is a pair `hi + lo` (non-overlapping, |lo| <= ulp(hi)/2) plus an
//! explicit error radius, so every quantity is the ball `hi + lo +- r`. The
//! pair operations are the classical error-free transforms (TwoSum, FMA
//! product); their own rounding, below 2^-104 relative, is folded into the
//! radius with a conservative 2^-100 per-operation charge. This buys the
//! roughly 50 extra mantissa bits the normal-tail width budget needs, while
//! keeping the final collapse to an `Interval` trivially sound.

#[derive(Debug, Clone, Copy)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    // requires |a| >= |b|
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

#[allow(clippy::should_implement_trait)]
impl Dd {
    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn abs_val(self) -> f64 {
        self.hi.abs()
    }

    #[inline]
    pub fn add(self, o: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, o.hi);
        let (t1, t2) = two_sum(self.lo, o.lo);
        let (s1, s2b) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2b + t2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(self, o: Dd) -> Dd {
        self.add(Dd { hi: -o.hi, lo: -o.lo })
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    #[inline]
    pub fn mul(self, o: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, o.hi);
        let p2 = p2 + self.hi * o.lo + self.lo * o.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul(Dd::from_f64(q1)));
        let q2 = (r.hi + r.lo) / (o.hi + o.lo);
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn scale_pow2(self, k: i32) -> Dd {
        let f = 2f64.powi(k);
        Dd { hi: self.hi * f, lo: self.lo * f }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// Relative rounding charge per pair operation; a loose cover of the proven
/// 2^-104-level bounds for the algorithms above.
const OP_EPS: f64 = 8.0e-31; // 2^-100

/// Ball `value +- radius` in double-double.
#[derive(Debug, Clone, Copy)]
pub struct DBall {
    pub v: Dd,
    pub r: f64,
}

#[allow(clippy::should_implement_trait)]
impl DBall {
    pub const ONE: DBall = DBall { v: Dd { hi: 1.0, lo: 0.0 }, r: 0.0 };

    pub fn exact(x: f64) -> DBall {
        DBall { v: Dd::from_f64(x), r: 0.0 }
    }

    pub fn from_pair(hi: f64, lo: f64, resid: f64) -> DBall {
        DBall { v: Dd { hi, lo }, r: resid }
    }

    #[inline]
    pub fn mag(self) -> f64 {
        self.v.abs_val() + self.r
    }

    pub fn add(self, o: DBall) -> DBall {
        let v = self.v.add(o.v);
        let r = self.r + o.r + OP_EPS * v.abs_val();
        DBall { v, r }
    }

    pub fn sub(self, o: DBall) -> DBall {
        self.add(o.neg())
    }

    pub fn neg(self) -> DBall {
        DBall { v: self.v.neg(), r: self.r }
    }

    pub fn mul(self, o: DBall) -> DBall {
        let v = self.v.mul(o.v);
        let r = self.mag() * o.r + o.mag() * self.r + OP_EPS * v.abs_val();
        DBall { v, r: r * (1.0 + 1e-15) + 1e-305 }
    }

    pub fn div(self, o: DBall) -> DBall {
        assert!(o.v.abs_val() > 2.0 * o.r, "division by ball containing zero");
        let v = self.v.div(o.v);
        let den = o.v.abs_val() - o.r;
        let r = (self.r + v.abs_val() * o.r) / den + OP_EPS * v.abs_val();
        DBall { v, r: r * (1.0 + 1e-15) + 1e-305 }
    }

    pub fn scale_pow2(self, k: i32) -> DBall {
        DBall { v: self.v.scale_pow2(k), r: self.r * 2f64.powi(k) }
    }

    pub fn widen(self, extra: f64) -> DBall {
        DBall { v: self.v, r: self.r + extra }
    }

    /// Collapse to a certified interval.
    pub fn to_interval(self) -> super::Interval {
        let c = self.v.to_f64();
        let slack = self.r + self.v.abs_val() * 1e-31 + 1e-305;
        super::Interval::new((c - slack).next_down(), (c + slack).next_up())
            .expect("ball radius stayed finite")
    }
}

// ln 2 = LN2_HI + LN2_LO + O(1e-33)
pub const LN2_HI_DD: f64 = std::f64::consts::LN_2;
pub const LN2_LO_DD: f64 = 2.319_046_813_846_299_6e-17;
pub const LN2_RESID: f64 = 1.0e-33;

// 1/sqrt(2 pi) = hi + lo + O(1e-33)
pub const INV_SQRT_2PI_HI: f64 = 0.398_942_280_401_432_7;
pub const INV_SQRT_2PI_LO: f64 = -2.492_327_202_277_73e-17;
pub const INV_SQRT_2PI_RESID: f64 = 1.0e-33;

/// exp of a ball with |value| <= 710, as a ball.
pub fn exp_ball(x: DBall) -> DBall {
    debug_assert!(x.v.abs_val() < 710.0);
    let k = (x.v.hi / std::f64::consts::LN_2).round();
    let ki = k as i32;
    let ln2 = DBall::from_pair(LN2_HI_DD, LN2_LO_DD, LN2_RESID);
    let r = x.sub(ln2.mul(DBall::exact(k)));
    // |r| <= 0.3466; Taylor with remainder
    let mut sum = DBall::ONE;
    let mut term = DBall::ONE;
    for n in 1..=26u32 {
        term = term.mul(r).div(DBall::exact(n as f64));
        sum = sum.add(term);
        if term.mag() < 1e-35 {
            break;
        }
    }
    let rem = term.mag() * r.mag() * 1.6 + 1e-305;
    sum.widen(rem).scale_pow2(ki)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dd_mul_exactness() {
        let a = Dd::from_f64(1.0 / 3.0);
        let b = a.mul(Dd::from_f64(3.0));
        // 3 * fl(1/3) differs from 1 by about 1e-17, representable in dd
        assert!((b.to_f64() - 1.0).abs() < 1e-16);
        assert!((b.hi + b.lo - 1.0).abs() < 2e-16);
    }

    #[test]
    fn dd_div_roundtrip() {
        let a = Dd::from_f64(std::f64::consts::PI);
        let q = a.div(Dd::from_f64(7.0));
        let back = q.mul(Dd::from_f64(7.0));
        assert!((back.hi - a.hi).abs() <= f64::EPSILON * 4.0);
        assert!((back.hi + back.lo - std::f64::consts::PI).abs() < 1e-30);
    }

    #[test]
    fn exp_ball_matches_libm() {
        for x in [-5.0, -1.0, -0.125, 0.0, 0.3, 1.0, 4.5] {
            let b = exp_ball(DBall::exact(x));
            let iv = b.to_interval();
            let y = x.exp();
            assert!(
                iv.lo() <= y + 4.0 * (y.next_up() - y) && iv.hi() >= y - 4.0 * (y.next_up() - y),
                "exp({x}): {iv}"
            );
            assert!(iv.width() <= 4.0 * (y.next_up() - y), "width at {x}: {}", iv.width());
        }
    }

    #[test]
    fn ball_collapse_is_outward() {
        let b = DBall { v: Dd { hi: 0.1, lo: 1e-18 }, r: 1e-20 };
        let iv = b.to_interval();
        assert!(iv.lo() < 0.1 + 1e-18 - 1e-20 + 1e-17);
        assert!(iv.contains(0.1));
    }
}
