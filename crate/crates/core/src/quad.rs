//! Certified one-dimensional integration.
//!
//! The workhorse is an adaptive interval midpoint rule: a panel `[a, b]`
//! with midpoint `m` contributes
//!
//! ```text
//! f(m) * (b - a)  +  D * int (x - m)+ dx  -  D * int (m - x)+ dx
//! ```
//!
//! where `D` encloses `f'` over the panel. The correction term collapses to
//! `+- width(D) * h^2 / 8`, which shrinks quadratically under bisection.
//! Integrands without a derivative enclosure fall back to the plain range
//! bound `f([a,b]) * (b - a)`. Panels split until their contribution width
//! is within its share of the target, the noise floor of the integrand's
//! own point evaluation, or the subdivision cap.

use crate::rint::{Interval, Result as RResult, RintError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum QuadError {
    #[error("integrand domain error: {0}")]
    Integrand(#[from] RintError),
    #[error("invalid bounds: a={a} is not <= b={b}")]
    BadBounds { a: f64, b: f64 },
    #[error("decay scale must be positive, got {0}")]
    BadDecay(f64),
}

/// Certified evaluator for an integrand.
pub trait Integrand: Sync {
    /// Enclosure of `{ f(x) : x in xs }`.
    fn eval(&self, xs: Interval) -> RResult<Interval>;

    /// Enclosure of `{ f'(x) : x in xs }`, when the integrand has one to
    /// offer. Enables the second-order panel rule.
    fn deriv_range(&self, _xs: Interval) -> Option<RResult<Interval>> {
        None
    }

    /// Optional uniform bound on `|f'|`; advisory only.
    fn deriv_bound(&self) -> Option<f64> {
        None
    }
}

/// Integrand from a value function plus a derivative enclosure.
pub struct CenteredFn<V, D>
where
    V: Fn(Interval) -> RResult<Interval> + Sync,
    D: Fn(Interval) -> RResult<Interval> + Sync,
{
    pub value: V,
    pub deriv: D,
    pub deriv_bound: Option<f64>,
}

impl<V, D> Integrand for CenteredFn<V, D>
where
    V: Fn(Interval) -> RResult<Interval> + Sync,
    D: Fn(Interval) -> RResult<Interval> + Sync,
{
    fn eval(&self, xs: Interval) -> RResult<Interval> {
        (self.value)(xs)
    }

    fn deriv_range(&self, xs: Interval) -> Option<RResult<Interval>> {
        Some((self.deriv)(xs))
    }

    fn deriv_bound(&self) -> Option<f64> {
        self.deriv_bound
    }
}

/// Plain integrand from a single range function.
pub struct RangeFn<V>(pub V)
where
    V: Fn(Interval) -> RResult<Interval> + Sync;

impl<V> Integrand for RangeFn<V>
where
    V: Fn(Interval) -> RResult<Interval> + Sync,
{
    fn eval(&self, xs: Interval) -> RResult<Interval> {
        (self.0)(xs)
    }
}

/// Result of an integration call.
#[derive(Debug, Clone)]
pub struct Enclosure {
    pub value: Interval,
    pub subdivisions: usize,
    /// Bound added to both sides when a semi-infinite tail was cut.
    pub truncation_error: f64,
    /// False only when the subdivision cap stopped refinement early; the
    /// value is still a correct enclosure.
    pub converged: bool,
}

pub const SUBDIVISION_CAP: usize = 1 << 20;
const MAX_DEPTH: usize = 52;

struct Budget {
    panels: usize,
    hit_cap: bool,
}

/// Certified enclosure of the integral of `f` over `[a, b]`.
pub fn integrate_finite(
    f: &dyn Integrand,
    a: f64,
    b: f64,
    target_width: f64,
) -> Result<Enclosure, QuadError> {
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(QuadError::BadBounds { a, b });
    }
    if a == b {
        return Ok(Enclosure {
            value: Interval::ZERO,
            subdivisions: 0,
            truncation_error: 0.0,
            converged: true,
        });
    }
    let mut budget = Budget { panels: 0, hit_cap: false };
    // error allocated proportionally to panel length
    let per_len = (target_width.max(1e-300) / (b - a)).max(1e-300);
    let value = panel(f, a, b, per_len, 0, &mut budget)?;
    Ok(Enclosure {
        value,
        subdivisions: budget.panels,
        truncation_error: 0.0,
        converged: !budget.hit_cap,
    })
}

/// One panel's certified contribution: centered rule when a derivative
/// enclosure exists, intersected with the plain range bound.
fn contribution(f: &dyn Integrand, xs: Interval) -> Result<Interval, QuadError> {
    let width_iv = Interval::point(xs.hi()).unwrap().sub(Interval::point(xs.lo()).unwrap());
    let natural = f.eval(xs)?.mul(width_iv);
    let Some(deriv) = f.deriv_range(xs) else {
        return Ok(natural);
    };
    let slope = deriv?;
    let m = xs.mid();
    let mi = Interval::point(m).unwrap();
    let fm = f.eval(mi)?;
    // int of (x - m) over [m, hi] and of (m - x) over [lo, m]
    let plus = Interval::point(xs.hi()).unwrap().sub(mi).square().scale_pow2(-1);
    let minus = mi.sub(Interval::point(xs.lo()).unwrap()).square().scale_pow2(-1);
    let correction = slope.mul(plus).sub(slope.mul(minus));
    let centered = fm.mul(width_iv).add(correction);
    Ok(centered.intersect(natural).unwrap_or(natural))
}

fn panel(
    f: &dyn Integrand,
    lo: f64,
    hi: f64,
    per_len: f64,
    depth: usize,
    budget: &mut Budget,
) -> Result<Interval, QuadError> {
    let xs = Interval::new(lo, hi).expect("panel bounds");
    let contrib = contribution(f, xs)?;
    if contrib.width() <= per_len * (hi - lo) {
        return Ok(contrib);
    }
    // Width floor: once the panel contribution is dominated by the
    // integrand's own evaluation noise at a point, splitting cannot help.
    let m = xs.mid();
    if m <= lo || m >= hi {
        return Ok(contrib);
    }
    let fm = f.eval(Interval::point(m).unwrap())?;
    let floor = 2.0 * fm.width() * (hi - lo) + 1e-307;
    if contrib.width() <= floor {
        return Ok(contrib);
    }
    if budget.panels >= SUBDIVISION_CAP || depth >= MAX_DEPTH {
        budget.hit_cap = true;
        return Ok(contrib);
    }
    budget.panels += 1; // one bisection performed
    let left = panel(f, lo, m, per_len, depth + 1, budget)?;
    let right = panel(f, m, hi, per_len, depth + 1, budget)?;
    Ok(left.add(right))
}

/// Certified enclosure of the integral of `f` over `[a, oo)` for integrands
/// dominated by a Gaussian: the caller asserts `|f(x)| <= exp(-scale x^2)`
/// from the chosen cutoff on. The cutoff is picked so the analytic tail
/// bound is below a tenth of the target and is added as `truncation_error`.
pub fn integrate_semiinfinite(
    f: &dyn Integrand,
    a: f64,
    decay_scale: f64,
    target_width: f64,
) -> Result<Enclosure, QuadError> {
    if !(decay_scale > 0.0 && decay_scale.is_finite()) {
        return Err(QuadError::BadDecay(decay_scale));
    }
    let target = target_width.max(1e-30);
    let mut cutoff = a.max(1.0);
    let mut tail = gaussian_tail_bound(decay_scale, cutoff)?;
    while tail > target / 10.0 {
        cutoff += 0.5;
        tail = gaussian_tail_bound(decay_scale, cutoff)?;
        if cutoff > 1e4 {
            break;
        }
    }
    let mut enc = if cutoff > a {
        integrate_finite(f, a, cutoff, 0.8 * target)?
    } else {
        Enclosure {
            value: Interval::ZERO,
            subdivisions: 0,
            truncation_error: 0.0,
            converged: true,
        }
    };
    enc.value = enc.value.widen(tail);
    enc.truncation_error = tail;
    Ok(enc)
}

/// Upper bound on `int_T^oo exp(-s x^2) dx <= exp(-s T^2) / (2 s T)` for
/// `T > 0`, evaluated with certified arithmetic.
fn gaussian_tail_bound(scale: f64, cutoff: f64) -> Result<f64, QuadError> {
    debug_assert!(cutoff > 0.0);
    let s = Interval::point(scale)?;
    let t = Interval::point(cutoff)?;
    let num = s.mul(t.square()).neg().exp()?;
    let den = s.mul(t).scale_pow2(1);
    let bound = num.div(den)?;
    Ok(bound.hi())
}
