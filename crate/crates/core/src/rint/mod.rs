//! Interval arithmetic kernel with outward rounding.
//!
//! Endpoints are `f64`. Directed rounding is emulated in software: each
//! endpoint is computed in round-to-nearest and then stepped outward by one
//! ulp, but only when an exact residual (TwoSum for add/sub, an FMA residual
//! for mul/div/sqrt) shows the nearest result lies on the wrong side. This
//! keeps point-argument enclosures within a couple of ulps per operation.
//! Elementary functions are evaluated by series with an explicit remainder
//! folded into the enclosure, so no accuracy claim about libm enters the
//! certified path anywhere.

mod dd;
mod round;
mod tail;

pub use tail::normal_tail;

use round::{add_dir, div_dir, mul_dir, sqrt_dir, sub_dir};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RintError {
    #[error("empty interval construction: lo={lo} > hi={hi}")]
    EmptyConstruction { lo: f64, hi: f64 },
    #[error("non-finite endpoint in {op}: [{lo}, {hi}]")]
    NonFinite { op: &'static str, lo: f64, hi: f64 },
    #[error("division by interval containing zero: [{lo}, {hi}]")]
    DivisionByIntervalContainingZero { lo: f64, hi: f64 },
    #[error("domain violation in {op}: offending endpoint {endpoint}")]
    DomainViolation { op: &'static str, endpoint: f64 },
    #[error("empty intersection of [{alo}, {ahi}] and [{blo}, {bhi}]")]
    EmptyIntersection { alo: f64, ahi: f64, blo: f64, bhi: f64 },
}

pub type Result<T> = std::result::Result<T, RintError>;

/// A closed real interval `[lo, hi]` with finite endpoints.
///
/// Invariant: `lo <= hi`, both finite. Every operation returns an interval
/// containing the exact image of its inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

#[allow(clippy::should_implement_trait)]
impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };

    /// Construct from endpoints. Errors if `lo > hi` or either is non-finite.
    pub fn new(lo: f64, hi: f64) -> Result<Interval> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(RintError::NonFinite { op: "new", lo, hi });
        }
        if lo > hi {
            return Err(RintError::EmptyConstruction { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    /// Degenerate interval `[x, x]`.
    pub fn point(x: f64) -> Result<Interval> {
        Interval::new(x, x)
    }

    /// Interval known valid by construction. Panics in debug builds otherwise.
    #[inline]
    pub(crate) fn raw(lo: f64, hi: f64) -> Interval {
        debug_assert!(lo <= hi && lo.is_finite() && hi.is_finite(), "raw({lo},{hi})");
        Interval { lo, hi }
    }

    /// Enclosure of a value written as a decimal literal: the nearest f64 is
    /// within half an ulp of the decimal, so one outward step on each side
    /// contains it.
    pub fn from_literal(x: f64) -> Interval {
        Interval::raw(x.next_down(), x.next_up())
    }

    /// Enclosure of the exact rational `num/den`.
    pub fn from_rational(num: u64, den: u64) -> Result<Interval> {
        if den == 0 {
            return Err(RintError::DivisionByIntervalContainingZero { lo: 0.0, hi: 0.0 });
        }
        Interval::exact_u64(num).div(Interval::exact_u64(den))
    }

    fn exact_u64(x: u64) -> Interval {
        let v = x as f64;
        if x < (1u64 << 53) {
            Interval::raw(v, v)
        } else {
            Interval::raw(v.next_down(), v.next_up())
        }
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    #[inline]
    pub fn mid(&self) -> f64 {
        let m = 0.5 * (self.lo + self.hi);
        if m.is_finite() {
            m.clamp(self.lo, self.hi)
        } else {
            0.5 * self.lo + 0.5 * self.hi
        }
    }

    /// Largest absolute value attained on the interval.
    #[inline]
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    #[inline]
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    #[inline]
    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    #[inline]
    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn hull(&self, other: Interval) -> Interval {
        Interval::raw(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    pub fn intersect(&self, other: Interval) -> Result<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        if lo > hi {
            return Err(RintError::EmptyIntersection {
                alo: self.lo,
                ahi: self.hi,
                blo: other.lo,
                bhi: other.hi,
            });
        }
        Ok(Interval::raw(lo, hi))
    }

    /// Outward widening by an absolute slack `eps >= 0` on both sides.
    pub fn widen(&self, eps: f64) -> Interval {
        debug_assert!(eps >= 0.0, "widen({eps})");
        Interval::raw((self.lo - eps).next_down(), (self.hi + eps).next_up())
    }

    fn checked(op: &'static str, lo: f64, hi: f64) -> Interval {
        assert!(
            lo.is_finite() && hi.is_finite(),
            "interval {op} overflowed to a non-finite endpoint: [{lo}, {hi}]"
        );
        Interval::raw(lo, hi)
    }

    pub fn add(self, o: Interval) -> Interval {
        Interval::checked("add", add_dir(self.lo, o.lo, false), add_dir(self.hi, o.hi, true))
    }

    pub fn sub(self, o: Interval) -> Interval {
        Interval::checked("sub", sub_dir(self.lo, o.hi, false), sub_dir(self.hi, o.lo, true))
    }

    pub fn neg(self) -> Interval {
        Interval::raw(-self.hi, -self.lo)
    }

    pub fn mul(self, o: Interval) -> Interval {
        // directed-round every corner: a nearest-mode argmin can lose a
        // near-tie against a corner whose product is exactly representable
        let pairs = [
            (self.lo, o.lo),
            (self.lo, o.hi),
            (self.hi, o.lo),
            (self.hi, o.hi),
        ];
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (a, b) in pairs {
            lo = lo.min(mul_dir(a, b, false));
            hi = hi.max(mul_dir(a, b, true));
        }
        Interval::checked("mul", lo, hi)
    }

    pub fn div(self, o: Interval) -> Result<Interval> {
        if o.lo <= 0.0 && o.hi >= 0.0 {
            return Err(RintError::DivisionByIntervalContainingZero { lo: o.lo, hi: o.hi });
        }
        let pairs = [
            (self.lo, o.lo),
            (self.lo, o.hi),
            (self.hi, o.lo),
            (self.hi, o.hi),
        ];
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (a, b) in pairs {
            lo = lo.min(div_dir(a, b, false));
            hi = hi.max(div_dir(a, b, true));
        }
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(RintError::NonFinite { op: "div", lo, hi });
        }
        Ok(Interval::raw(lo, hi))
    }

    /// Recip shorthand, same error conditions as `div`.
    pub fn recip(self) -> Result<Interval> {
        Interval::ONE.div(self)
    }

    /// Enclosure of `x^2` over the interval; tighter than `mul(self)`.
    pub fn square(self) -> Interval {
        let (a, b) = if self.lo >= 0.0 {
            (self.lo, self.hi)
        } else if self.hi <= 0.0 {
            (self.hi, self.lo)
        } else {
            let m = self.mag();
            return Interval::checked("square", 0.0, mul_dir(m, m, true));
        };
        Interval::checked("square", mul_dir(a, a, false).max(0.0), mul_dir(b, b, true))
    }

    /// Enclosure of `-x^2` over the interval.
    pub fn neg_square(self) -> Interval {
        self.square().neg()
    }

    /// Multiply by an exact power of two. Exact in the normal range; asserts
    /// the result stays there (or is zero).
    pub fn scale_pow2(self, k: i32) -> Interval {
        let f = 2f64.powi(k);
        let lo = self.lo * f;
        let hi = self.hi * f;
        assert!(
            lo.is_finite() && hi.is_finite(),
            "scale_pow2 overflow: [{lo}, {hi}]"
        );
        debug_assert!(
            (lo == 0.0 || lo.is_normal()) && (hi == 0.0 || hi.is_normal()),
            "scale_pow2 left the exact range"
        );
        Interval::raw(lo, hi)
    }

    pub fn abs(self) -> Interval {
        if self.lo >= 0.0 {
            self
        } else if self.hi <= 0.0 {
            self.neg()
        } else {
            Interval::raw(0.0, self.mag())
        }
    }

    pub fn min_i(self, o: Interval) -> Interval {
        Interval::raw(self.lo.min(o.lo), self.hi.min(o.hi))
    }

    pub fn max_i(self, o: Interval) -> Interval {
        Interval::raw(self.lo.max(o.lo), self.hi.max(o.hi))
    }

    /// Certified `sqrt`; hardware square root is correctly rounded, and an
    /// FMA residual detects on which side it landed.
    pub fn sqrt(self) -> Result<Interval> {
        if self.lo < 0.0 {
            return Err(RintError::DomainViolation { op: "sqrt", endpoint: self.lo });
        }
        Ok(Interval::raw(
            sqrt_dir(self.lo, false).max(0.0),
            sqrt_dir(self.hi, true),
        ))
    }

    /// Certified `exp` via Cody-Waite argument reduction and a Taylor series
    /// with enclosed remainder. Monotone, so endpoints map to endpoints.
    pub fn exp(self) -> Result<Interval> {
        let lo = exp_point(self.lo)?;
        let hi = exp_point(self.hi)?;
        Ok(Interval::raw(lo.lo, hi.hi))
    }

    /// Certified natural log. Requires `lo > 0`.
    pub fn ln(self) -> Result<Interval> {
        if self.lo <= 0.0 {
            return Err(RintError::DomainViolation { op: "ln", endpoint: self.lo });
        }
        let lo = ln_point(self.lo);
        let hi = ln_point(self.hi);
        Ok(Interval::raw(lo.lo, hi.hi))
    }

    /// Standard normal upper tail over the interval; see `tail`.
    pub fn normal_tail(self) -> Result<Interval> {
        tail::normal_tail(self)
    }
}

impl std::ops::Add for Interval {
    type Output = Interval;
    fn add(self, o: Interval) -> Interval {
        Interval::add(self, o)
    }
}

impl std::ops::Sub for Interval {
    type Output = Interval;
    fn sub(self, o: Interval) -> Interval {
        Interval::sub(self, o)
    }
}

impl std::ops::Mul for Interval {
    type Output = Interval;
    fn mul(self, o: Interval) -> Interval {
        Interval::mul(self, o)
    }
}

impl std::ops::Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::neg(self)
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

// Cody-Waite split of ln 2. The high part has 32 significant bits, so
// k*LN2_HI is exact for |k| < 2^20; hi+lo matches ln 2 to about 2^-102.
const LN2_HI: f64 = 6.931_471_803_691_238_16e-1;
const LN2_LO: f64 = 1.908_214_929_270_587_7e-10;

fn ln2_lo_iv() -> Interval {
    // covers both the literal rounding and the 2^-102 tail of the split
    Interval::from_literal(LN2_LO).widen(3e-29)
}

fn exp_point(x: f64) -> Result<Interval> {
    if !x.is_finite() {
        return Err(RintError::NonFinite { op: "exp", lo: x, hi: x });
    }
    if x < -700.0 {
        // exp(-700) < 1e-304; stay clear of the subnormal range where
        // power-of-two scaling stops being exact.
        return Ok(Interval::raw(0.0, 1e-300));
    }
    if x > 709.0 {
        return Err(RintError::NonFinite { op: "exp", lo: x, hi: f64::INFINITY });
    }
    let k = (x / std::f64::consts::LN_2).round();
    let ki = k as i32;
    // x - k*LN2_HI is exact: k*LN2_HI is exact and the subtraction cancels
    // below the split point (Sterbenz).
    let s = x - k * LN2_HI;
    let r = Interval::point(s)?.sub(Interval::point(k)?.mul(ln2_lo_iv()));
    // Taylor terms of exp(r) for |r| <= 0.3466, summed smallest-first.
    let mut terms = [Interval::ZERO; 24];
    let mut term = Interval::ONE;
    let mut count = 0;
    let mut rem = 0.0;
    for n in 1..=24u32 {
        term = term.mul(r).div(Interval::point(n as f64)?)?;
        terms[count] = term;
        count += 1;
        if term.mag() < 1e-22 {
            // remainder |r|^(n+1)/(n+1)! * 1/(1-|r|) <= 1.6 * next term
            rem = term.mag() * r.mag() / (n as f64 + 1.0) * 1.6 + 1e-300;
            break;
        }
    }
    let mut sum = Interval::ZERO;
    for t in terms[..count].iter().rev() {
        sum = sum.add(*t);
    }
    sum = sum.add(Interval::ONE).widen(rem);
    Ok(sum.scale_pow2(ki))
}

fn ln_point(x: f64) -> Interval {
    debug_assert!(x > 0.0 && x.is_finite());
    // x = m * 2^e with m in [sqrt(1/2), sqrt(2)]
    let mut e = 0i64;
    let mut m = x;
    while m > std::f64::consts::SQRT_2 {
        m *= 0.5;
        e += 1;
    }
    while m < std::f64::consts::FRAC_1_SQRT_2 {
        m *= 2.0;
        e -= 1;
    }
    // atanh series: ln m = 2 * atanh(t), t = (m-1)/(m+1), |t| <= 0.1716
    let mi = Interval::raw(m, m);
    let num = mi.sub(Interval::ONE); // exact for m in [1/2, 2]
    let den = mi.add(Interval::ONE);
    let t = num.div(den).expect("den > 0");
    let t2 = t.square();
    let mut terms = [Interval::ZERO; 20];
    let mut pow = t;
    let mut count = 0;
    let mut rem = 0.0;
    for k in 1..=20u32 {
        pow = pow.mul(t2);
        let term = pow
            .div(Interval::raw(2.0 * k as f64 + 1.0, 2.0 * k as f64 + 1.0))
            .unwrap();
        terms[count] = term;
        count += 1;
        if term.mag() < 1e-22 {
            rem = pow.mag() * t2.mag() / (2.0 * k as f64 + 3.0) / (1.0 - t2.mag()) + 1e-300;
            break;
        }
    }
    let mut sum = Interval::ZERO;
    for v in terms[..count].iter().rev() {
        sum = sum.add(*v);
    }
    sum = sum.add(t).widen(rem);
    let ln_m = sum.scale_pow2(1);
    if e == 0 {
        return ln_m;
    }
    // e * ln2 via the same split; e*LN2_HI is exact.
    let ef = e as f64;
    let hi_part = Interval::raw(ef * LN2_HI, ef * LN2_HI);
    let lo_part = Interval::raw(ef, ef).mul(ln2_lo_iv());
    ln_m.add(hi_part).add(lo_part)
}

/// Interval constants. Each decimal literal is the nearest f64 to the true
/// value, so a one-ulp outward step encloses it.
pub mod consts {
    use super::Interval;

    pub fn pi() -> Interval {
        Interval::from_literal(std::f64::consts::PI)
    }

    pub fn two_pi() -> Interval {
        // 2*PI_f64 is an exact doubling, within one ulp of 2*pi
        Interval::from_literal(2.0 * std::f64::consts::PI)
    }

    pub fn sqrt_pi() -> Interval {
        Interval::from_literal(1.772_453_850_905_516_f64)
    }

    pub fn inv_sqrt_pi() -> Interval {
        Interval::from_literal(0.564_189_583_547_756_3_f64)
    }

    pub fn two_over_sqrt_pi() -> Interval {
        Interval::from_literal(std::f64::consts::FRAC_2_SQRT_PI)
    }

    pub fn sqrt_2pi() -> Interval {
        Interval::from_literal(2.506_628_274_631_000_5_f64)
    }

    pub fn inv_sqrt_2pi() -> Interval {
        Interval::from_literal(0.398_942_280_401_432_7_f64)
    }

    pub fn sqrt_2() -> Interval {
        Interval::from_literal(std::f64::consts::SQRT_2)
    }

    pub fn ln_2() -> Interval {
        Interval::from_literal(std::f64::consts::LN_2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn ulp_of(x: f64) -> f64 {
        (x.next_up() - x).abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn add_exact_integers() {
        let a = Interval::new(1.0, 2.0).unwrap();
        let b = Interval::new(3.0, 4.0).unwrap();
        let c = a + b;
        assert_eq!((c.lo(), c.hi()), (4.0, 6.0));
    }

    #[test]
    fn mul_symmetric() {
        let a = Interval::new(-1.0, 1.0).unwrap();
        let c = a * a;
        assert_eq!((c.lo(), c.hi()), (-1.0, 1.0));
    }

    #[test]
    fn div_one_third() {
        let c = Interval::point(1.0).unwrap().div(Interval::point(3.0).unwrap()).unwrap();
        assert!(c.lo <= 1.0 / 3.0 && 1.0 / 3.0 <= c.hi);
        assert!(c.width() <= 2.0 * ulp_of(1.0 / 3.0));
    }

    #[test]
    fn div_by_zero_interval_errors() {
        let a = Interval::new(1.0, 2.0).unwrap();
        let b = Interval::new(-1.0, 1.0).unwrap();
        assert!(matches!(a.div(b), Err(RintError::DivisionByIntervalContainingZero { .. })));
    }

    #[test]
    fn empty_construction_errors() {
        assert!(matches!(Interval::new(2.0, 1.0), Err(RintError::EmptyConstruction { .. })));
        assert!(Interval::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn exp_of_zero() {
        let c = Interval::ZERO.exp().unwrap();
        assert!(c.contains(1.0));
        assert!(c.width() <= 2.0 * ulp_of(1.0));
    }

    #[test]
    fn log_of_one_to_e() {
        let e = std::f64::consts::E;
        let c = Interval::new(1.0, e).unwrap().ln().unwrap();
        assert!(c.contains(0.0));
        assert!(c.lo >= -1e-15 && c.hi <= 1.0 + 1e-15 && c.hi >= 1.0 - 1e-15);
    }

    #[test]
    fn neg_square_mixed() {
        let c = Interval::new(-2.0, 1.0).unwrap().neg_square();
        assert_eq!((c.lo(), c.hi()), (-4.0, 0.0));
    }

    #[test]
    fn sqrt_exact_square() {
        let c = Interval::new(4.0, 9.0).unwrap().sqrt().unwrap();
        assert_eq!((c.lo(), c.hi()), (2.0, 3.0));
    }

    #[test]
    fn ln_domain_violation() {
        assert!(matches!(
            Interval::new(-1.0, 2.0).unwrap().ln(),
            Err(RintError::DomainViolation { op: "ln", .. })
        ));
        assert!(matches!(
            Interval::new(-1.0, 2.0).unwrap().sqrt(),
            Err(RintError::DomainViolation { op: "sqrt", .. })
        ));
    }

    #[test]
    fn exp_against_libm_fuzz() {
        let mut rng = SplitMix64::new(7);
        for _ in 0..20_000 {
            let x = (rng.next_f64() - 0.5) * 80.0;
            let enc = Interval::point(x).unwrap().exp().unwrap();
            // libm exp is within a couple ulp of the truth, so the enclosure
            // must come at least that close to it.
            let y = x.exp();
            assert!(
                enc.lo <= y + 4.0 * ulp_of(y) && enc.hi >= y - 4.0 * ulp_of(y),
                "exp({x}) = {y} not near {enc}"
            );
            assert!(enc.width() <= 8.0 * ulp_of(y).max(f64::MIN_POSITIVE), "width {enc} at {x}");
        }
    }

    #[test]
    fn ln_against_libm_fuzz() {
        let mut rng = SplitMix64::new(8);
        for _ in 0..20_000 {
            let x = rng.next_f64() * 1e3 + 1e-8;
            let enc = Interval::point(x).unwrap().ln().unwrap();
            let y = x.ln();
            assert!(enc.lo <= y + 4.0 * ulp_of(y.abs().max(1e-300)));
            assert!(enc.hi >= y - 4.0 * ulp_of(y.abs().max(1e-300)));
            let w = 8.0 * ulp_of(y.abs().max(f64::MIN_POSITIVE));
            assert!(enc.width() <= w.max(8.0 * f64::EPSILON), "width {} at {x}", enc.width());
        }
    }

    #[test]
    fn scale_pow2_exact() {
        let a = Interval::new(1.5, 3.25).unwrap();
        let b = a.scale_pow2(3);
        assert_eq!((b.lo(), b.hi()), (12.0, 26.0));
    }

    #[test]
    fn constants_contain_truth() {
        assert!(consts::pi().contains(std::f64::consts::PI));
        // sqrt(pi) to 30 digits: 1.77245385090551602729816748334
        assert!(consts::sqrt_pi().contains(1.772_453_850_905_516_027_3));
        assert!(consts::sqrt_2pi().contains(2.506_628_274_631_000_502_4));
    }

    #[test]
    fn exp_ln_roundtrip_containment() {
        let mut rng = SplitMix64::new(9);
        for _ in 0..5_000 {
            let x = (rng.next_f64() - 0.5) * 600.0;
            let there = Interval::point(x).unwrap().exp().unwrap();
            if there.lo() <= 0.0 {
                continue; // underflow clamp region
            }
            let back = there.ln().unwrap();
            assert!(back.contains(x), "ln(exp({x})) = {back}");
            assert!(back.width() < 1e-12, "roundtrip width {} at {x}", back.width());
        }
    }

    #[test]
    fn rational_enclosure() {
        let r = Interval::from_rational(197_999, 400_000).unwrap();
        assert!(r.contains(197_999.0 / 400_000.0));
        assert!(r.width() <= 2.0 * ulp_of(0.5));
    }

    mod properties {
        use super::super::*;
        use proptest::prelude::*;

        fn interval_and_point() -> impl Strategy<Value = (Interval, f64)> {
            (-1e6f64..1e6, 0f64..1e3, 0f64..=1.0).prop_map(|(lo, w, t)| {
                let iv = Interval::new(lo, lo + w).unwrap();
                (iv, lo + w * t)
            })
        }

        proptest! {
            #[test]
            fn arithmetic_containment(
                (a, x) in interval_and_point(),
                (b, y) in interval_and_point()
            ) {
                prop_assert!(a.add(b).contains(x + y));
                prop_assert!(a.sub(b).contains(x - y));
                prop_assert!(a.mul(b).contains(x * y));
                prop_assert!(a.neg_square().contains(-x * x));
                if b.lo() > 1e-9 {
                    prop_assert!(a.div(b).unwrap().contains(x / y));
                }
            }

            #[test]
            fn elementary_containment((a, x) in interval_and_point()) {
                let small = Interval::new(a.lo() % 700.0, (a.lo() % 700.0) + 1.0).unwrap();
                let xs = small.lo() + (x - a.lo()).clamp(0.0, 1.0).min(1.0);
                prop_assert!(small.exp().unwrap().contains(xs.exp()));
                let pos = Interval::new(small.lo().abs() + 1e-8, small.lo().abs() + 2.0).unwrap();
                let xp = pos.mid();
                prop_assert!(pos.ln().unwrap().contains(xp.ln()));
                prop_assert!(pos.sqrt().unwrap().contains(xp.sqrt()));
            }

            #[test]
            fn tail_reflection_and_range(x in -20f64..20.0) {
                let t = Interval::point(x).unwrap().normal_tail().unwrap();
                prop_assert!(t.lo() >= 0.0 && t.hi() <= 1.0);
                let r = Interval::point(-x).unwrap().normal_tail().unwrap();
                prop_assert!(t.add(r).contains(1.0));
            }

            #[test]
            fn hull_and_intersect_are_lattice_ops(
                (a, _) in interval_and_point(),
                (b, _) in interval_and_point()
            ) {
                let h = a.hull(b);
                prop_assert!(h.contains_interval(&a) && h.contains_interval(&b));
                if let Ok(i) = a.intersect(b) {
                    prop_assert!(a.contains_interval(&i) && b.contains_interval(&i));
                }
            }
        }
    }
}
