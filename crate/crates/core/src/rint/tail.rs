//! Certified standard normal upper tail.
//!
//! `normal_tail(x)` encloses `P[Z >= x]` for `Z ~ N(0,1)`. Two regimes:
//!
//! * `|x| < 1/2`: the integral of the density expanded as an alternating
//!   series around 0; the first omitted term bounds the remainder.
//! * `x >= 1/2`: Mills' ratio via the Laplace continued fraction
//!   `R(x) = 1/(x + 1/(x + 2/(x + 3/(x + ...))))`. Consecutive convergents
//!   bracket `R(x)` for `x > 0` (the classical chain of Mills inequalities,
//!   of which `x/(x^2+1) <= R <= 1/x` is the first pair), so an even/odd
//!   convergent pair is a certified enclosure.
//!
//! Both regimes run in double-double ball arithmetic (see [`super::dd`]) so
//! the collapsed interval stays within a couple of ulps. Negative arguments
//! reflect through `P[Z >= x] = 1 - P[Z >= -x]`.

use super::dd::{exp_ball, DBall, INV_SQRT_2PI_HI, INV_SQRT_2PI_LO, INV_SQRT_2PI_RESID};
use super::{Interval, Result, RintError};

/// Enclosure of the upper tail over an interval argument. Antitone, so the
/// endpoints map to opposite endpoints.
pub fn normal_tail(x: Interval) -> Result<Interval> {
    let at_hi = normal_tail_point(x.hi())?;
    if x.is_point() {
        return Ok(at_hi);
    }
    let at_lo = normal_tail_point(x.lo())?;
    Ok(Interval::raw(at_hi.lo().max(0.0), at_lo.hi().min(1.0)))
}

fn normal_tail_point(x: f64) -> Result<Interval> {
    if !x.is_finite() {
        return Err(RintError::NonFinite { op: "normal_tail", lo: x, hi: x });
    }
    if x >= 38.0 {
        // below 3e-316; clear of the subnormal range for the density
        return Ok(Interval::raw(0.0, 1e-300));
    }
    if x <= -38.0 {
        return Ok(Interval::raw(1.0 - 1e-299, 1.0));
    }
    let t = if x >= 0.5 {
        tail_mills(x)
    } else if x > -0.5 {
        tail_series(x)
    } else {
        DBall::ONE.sub(tail_mills(-x))
    };
    let iv = t.to_interval();
    Ok(Interval::raw(iv.lo().max(0.0), iv.hi().min(1.0)))
}

fn inv_sqrt_2pi() -> DBall {
    DBall::from_pair(INV_SQRT_2PI_HI, INV_SQRT_2PI_LO, INV_SQRT_2PI_RESID)
}

/// Density `phi(x) = exp(-x^2/2) / sqrt(2 pi)` as a ball.
fn density(x: f64) -> DBall {
    let sq = DBall::exact(x).mul(DBall::exact(x)).scale_pow2(-1);
    exp_ball(sq.neg()).mul(inv_sqrt_2pi())
}

/// `P[Z >= x] = 1/2 - (1/sqrt(2 pi)) * sum_k (-1)^k x^(2k+1) / (k! 2^k (2k+1))`
/// for `|x| < 1/2`; the term ratio stays below `x^2/2 < 1/8`, so the series
/// alternates with decreasing terms from the start and the first omitted
/// term bounds the remainder.
fn tail_series(x: f64) -> DBall {
    let xb = DBall::exact(x);
    let x2 = xb.mul(xb);
    let mut sum = xb;
    let mut pow = xb; // x^(2k+1) / (k! 2^k)
    let mut rem = 0.0;
    for k in 1..=22u32 {
        pow = pow.mul(x2).div(DBall::exact(2.0 * k as f64)).neg();
        let contrib = pow.div(DBall::exact(2.0 * k as f64 + 1.0));
        sum = sum.add(contrib);
        if contrib.mag() < 1e-34 {
            rem = contrib.mag() + 1e-305;
            break;
        }
    }
    let integral = sum.widen(rem).mul(inv_sqrt_2pi());
    DBall::exact(0.5).sub(integral)
}

/// Mills continued fraction bracket for `x >= 1/2`, as a ball.
fn tail_mills(x: f64) -> DBall {
    // even convergents lie below R, odd above; raise the depth until the
    // even/odd gap is dust relative to the value
    let mut n: usize = if x >= 4.0 {
        96
    } else if x >= 2.0 {
        256
    } else if x >= 1.0 {
        1024
    } else {
        2048
    };
    let (mut even, mut odd) = (convergent(x, n), convergent(x, n + 1));
    loop {
        let gap = (odd.v.to_f64() - even.v.to_f64()).abs();
        if gap <= 1e-18 * even.v.abs_val() || n >= 8192 {
            break;
        }
        n *= 2;
        even = convergent(x, n);
        odd = convergent(x, n + 1);
    }
    // ball covering [even - r_even, odd + r_odd]
    let mid = even.v.add(odd.v).scale_pow2(-1);
    let half_gap = 0.5 * (odd.v.sub(even.v).to_f64()).abs();
    let mills = DBall { v: mid, r: (half_gap + even.r + odd.r) * (1.0 + 1e-15) + 1e-305 };
    density(x).mul(mills)
}

/// n-th convergent of `1/(x + 1/(x + 2/(x + ... (n-1)/x)))` by backward
/// recurrence; `n` even gives a lower bound for Mills' ratio, odd an upper.
fn convergent(x: f64, n: usize) -> DBall {
    let xb = DBall::exact(x);
    let mut t = xb;
    for j in (1..n).rev() {
        t = xb.add(DBall::exact(j as f64).div(t));
    }
    DBall::ONE.div(t)
}
