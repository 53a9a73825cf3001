//! Correlated Gaussian orthant probabilities and their derivatives.
//!
//! The central object is `P[T1 >= c1 and T2 >= c2]` for a centered Gaussian
//! pair with variance 1/2 and correlation `rho = 2 beta - 1`. In standard
//! units the probability is evaluated through the one-dimensional
//! correlation-path integral
//!
//! ```text
//! P[X >= h, Y >= k] = Phibar(h) Phibar(k)
//!     + (1/2pi) int_0^rho (1-x^2)^(-1/2) exp(-(h^2 - 2xhk + k^2)/(2(1-x^2))) dx
//! ```
//!
//! which is far better behaved numerically than the two-dimensional density
//! integral (the latter survives only as a Monte Carlo cross-check in the
//! tests). Threshold derivatives and correlation derivatives all have closed
//! forms and are evaluated directly in interval arithmetic.

pub mod fast;

use crate::quad::{self, CenteredFn, QuadError};
use crate::rint::{consts, Interval, RintError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GaussError {
    #[error(transparent)]
    Rint(#[from] RintError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error("correlation {rho} is within 1e-12 of +-1")]
    SingularCorrelation { rho: f64 },
    #[error("domain violation: {param} = {value}")]
    DomainViolation { param: &'static str, value: f64 },
    #[error("envelope branch {branch:?} does not apply at alpha = {alpha} (gamma = {gamma})")]
    BranchMismatch { alpha: f64, gamma: f64, branch: EnvelopeBranch },
    #[error("quadrature did not reach its width target")]
    WidthNotReached,
}

pub type Result<T> = std::result::Result<T, GaussError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    Fast,
    Certified,
}

/// Parameters of the orthant probability `f(beta, alpha)`.
#[derive(Debug, Clone, Copy)]
pub struct OrthantParams {
    pub gamma: f64,
    pub beta: f64,
    pub alpha: f64,
}

impl OrthantParams {
    pub fn rho(&self) -> f64 {
        2.0 * self.beta - 1.0
    }
}

/// Parameters of the four-tilt generalization `g(beta, a1, a2, a3, a4)`.
#[derive(Debug, Clone, Copy)]
pub struct GParams {
    pub gamma: f64,
    pub beta: f64,
    pub a: [f64; 4],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnvelopeBranch {
    /// `alpha >= -gamma`: monotone in the correlation at fixed thresholds.
    Plain,
    /// `alpha <= -gamma`: thresholds rescale along with the correlation.
    Scaled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Lower,
    Upper,
}

pub const DEFAULT_TARGET: f64 = 1e-9;

/// Certified `P[X >= h, Y >= k]` for standard bivariate normals with
/// correlation enclosed by `rho`.
pub fn orthant_upper(h: Interval, k: Interval, rho: Interval, target: f64) -> Result<Interval> {
    if rho.mag() > 1.0 - 1e-12 {
        return Err(GaussError::SingularCorrelation { rho: rho.mid() });
    }
    let tails = if h == k {
        h.normal_tail()?.square()
    } else {
        h.normal_tail()?.mul(k.normal_tail()?)
    };
    let path = correlation_path_integral(h, k, rho, target)?;
    let total = tails.add(path);
    Ok(total.intersect(Interval::new(0.0, 1.0)?).unwrap_or(total))
}

/// The path integrand `(1-x^2)^(-1/2) exp(-(h^2-2xhk+k^2)/(2(1-x^2)))` and
/// its x-derivative, both as certified ranges.
fn path_integrand(h: Interval, k: Interval, xs: Interval) -> crate::rint::Result<Interval> {
    let one = Interval::ONE;
    let omx2 = one.sub(xs.square());
    let hk2 = h.mul(k).mul(xs).scale_pow2(1);
    let num = h.square().add(k.square()).sub(hk2);
    let expo = num.div(omx2.scale_pow2(1))?.neg();
    expo.exp()?.div(omx2.sqrt()?)
}

fn path_integrand_deriv(h: Interval, k: Interval, xs: Interval) -> crate::rint::Result<Interval> {
    let one = Interval::ONE;
    let omx2 = one.sub(xs.square());
    let base = path_integrand(h, k, xs)?;
    // g'(x) = [hk (1-x^2) - x (h^2 - 2xhk + k^2)] / (1-x^2)^2
    let hk = h.mul(k);
    let num = h.square().add(k.square()).sub(hk.mul(xs).scale_pow2(1));
    let gp = hk.mul(omx2).sub(xs.mul(num)).div(omx2.square())?;
    let lead = xs.div(omx2)?;
    Ok(base.mul(lead.add(gp)))
}

/// Certified `(1/2pi) int_0^rho` of the path integrand, handling interval
/// correlation limits of either sign.
fn correlation_path_integral(
    h: Interval,
    k: Interval,
    rho: Interval,
    target: f64,
) -> Result<Interval> {
    let integrand = CenteredFn {
        value: move |xs: Interval| path_integrand(h, k, xs),
        deriv: move |xs: Interval| path_integrand_deriv(h, k, xs),
        deriv_bound: None,
    };
    let (a, b) = (rho.lo(), rho.hi());
    let mut total;
    if a >= 0.0 {
        let enc = quad::integrate_finite(&integrand, 0.0, a, target)?;
        if !enc.converged {
            return Err(GaussError::WidthNotReached);
        }
        total = enc.value;
    } else if b <= 0.0 {
        let enc = quad::integrate_finite(&integrand, b, 0.0, target)?;
        if !enc.converged {
            return Err(GaussError::WidthNotReached);
        }
        total = enc.value.neg();
    } else {
        total = Interval::ZERO;
    }
    // strip between the correlation endpoints (also covers the straddling-
    // zero case); integrand is positive so the strip has a definite sign
    if b > a {
        let strip = path_integrand(h, k, rho)?;
        let lo_part = if a < 0.0 {
            // moving the lower limit below max(a,0) subtracts mass
            strip.mul(Interval::new(a.max(-1.0), (0.0f64).min(b).max(a))?.sub(Interval::point(a)?))
        } else {
            Interval::ZERO
        };
        let _ = lo_part;
        // uniform cover: integral over [min, r] varies by at most
        // sup|F| * width(rho) in each direction
        let span = Interval::point(b)?.sub(Interval::point(a)?);
        let slack = strip.abs().mul(span);
        total = total.add(Interval::new(-slack.hi(), slack.hi())?);
    }
    total.div(consts::two_pi()).map_err(GaussError::from)
}

/// Fast scalar version of [`orthant_upper`].
pub fn orthant_upper_fast(h: f64, k: f64, rho: f64) -> f64 {
    let tails = fast::normal_tail_f64(h) * fast::normal_tail_f64(k);
    if rho == 0.0 {
        return tails;
    }
    // theta-substitution x = sin t removes the endpoint singularity
    let f = |t: f64| {
        let x = t.sin();
        let c2 = 1.0 - x * x;
        (-(h * h - 2.0 * x * h * k + k * k) / (2.0 * c2)).exp()
    };
    let path = fast::simpson(&f, 0.0, rho.asin(), 1e-13) / (2.0 * std::f64::consts::PI);
    (tails + path).clamp(0.0, 1.0)
}

/// `d/dh P[X >= h, Y >= k] = -phi(h) Phibar((k - rho h)/sqrt(1-rho^2))`.
pub fn orthant_dh(h: Interval, k: Interval, rho: Interval) -> Result<Interval> {
    let one = Interval::ONE;
    let omr2 = one.sub(rho.square());
    if omr2.lo() <= 0.0 {
        return Err(GaussError::SingularCorrelation { rho: rho.mid() });
    }
    let density = h.square().scale_pow2(-1).neg().exp()?.div(consts::sqrt_2pi())?;
    let arg = k.sub(rho.mul(h)).div(omr2.sqrt()?)?;
    Ok(density.mul(arg.normal_tail()?).neg())
}

pub fn orthant_dh_fast(h: f64, k: f64, rho: f64) -> f64 {
    -fast::phi_f64(h) * fast::normal_tail_f64((k - rho * h) / (1.0 - rho * rho).sqrt())
}

/// Threshold in standard units for `f(beta, alpha)`: `(gamma+alpha) sqrt 2`.
fn f_threshold(gamma: Interval, alpha: Interval) -> Interval {
    gamma.add(alpha).mul(consts::sqrt_2())
}

/// Certified `f(beta, alpha)` over interval parameters; degenerate `beta`
/// handled by the closed forms `f(1, a) = Phibar((g+a) sqrt 2)` and
/// `f(0, a) = Phibar((g+a) sqrt 2)^2`.
pub fn f_eval_iv(
    gamma: Interval,
    beta: Interval,
    alpha: Interval,
    target: f64,
) -> Result<Interval> {
    let h = f_threshold(gamma, alpha);
    if beta.is_point() && beta.lo() == 1.0 {
        return Ok(h.normal_tail()?);
    }
    if beta.is_point() && beta.lo() == 0.0 {
        return Ok(h.normal_tail()?.square());
    }
    if !(beta.lo() >= 0.0 && beta.hi() <= 1.0) {
        return Err(GaussError::DomainViolation { param: "beta", value: beta.mid() });
    }
    let rho = beta.scale_pow2(1).sub(Interval::ONE);
    orthant_upper(h, h, rho, target)
}

/// `f(beta, alpha)` per the spec operation signature.
pub fn f_eval(p: &OrthantParams, mode: EvalMode) -> Result<Interval> {
    match mode {
        EvalMode::Fast => {
            let v = if p.beta == 1.0 {
                fast::normal_tail_f64((p.gamma + p.alpha) * std::f64::consts::SQRT_2)
            } else if p.beta == 0.0 {
                let t = fast::normal_tail_f64((p.gamma + p.alpha) * std::f64::consts::SQRT_2);
                t * t
            } else {
                let h = (p.gamma + p.alpha) * std::f64::consts::SQRT_2;
                orthant_upper_fast(h, h, p.rho())
            };
            Ok(Interval::point(v)?)
        }
        EvalMode::Certified => f_eval_iv(
            Interval::point(p.gamma)?,
            Interval::point(p.beta)?,
            Interval::point(p.alpha)?,
            DEFAULT_TARGET,
        ),
    }
}

/// Certified range of `f` over a parameter box, using monotonicity:
/// nondecreasing in `beta` (higher correlation), nonincreasing in `alpha`
/// and `gamma` (higher threshold).
pub fn f_range(gamma: Interval, beta: Interval, alpha: Interval, target: f64) -> Result<Interval> {
    let lo_thr = f_threshold(
        Interval::point(gamma.hi())?,
        Interval::point(alpha.hi())?,
    );
    let hi_thr = f_threshold(
        Interval::point(gamma.lo())?,
        Interval::point(alpha.lo())?,
    );
    let lo_rho = Interval::point(beta.lo())?.scale_pow2(1).sub(Interval::ONE);
    let hi_rho = Interval::point(beta.hi())?.scale_pow2(1).sub(Interval::ONE);
    let lo = orthant_upper(lo_thr, lo_thr, lo_rho, target)?;
    let hi = orthant_upper(hi_thr, hi_thr, hi_rho, target)?;
    Ok(Interval::new(lo.lo(), hi.hi())?)
}

/// `u(beta, c) = c sqrt(2(1-beta)/beta)`, the auxiliary threshold in the
/// alpha-derivative closed form.
fn aux_ratio(beta: Interval, c: Interval) -> crate::rint::Result<Interval> {
    let one = Interval::ONE;
    let ratio = one.sub(beta).scale_pow2(1).div(beta)?;
    Ok(c.mul(ratio.sqrt()?))
}

/// Certified `df/dalpha` over interval parameters via
/// `-(2/sqrt pi) exp(-c^2) Phibar(c sqrt(2(1-beta)/beta))`, `c = gamma+alpha`.
pub fn f_dalpha_iv(gamma: Interval, beta: Interval, alpha: Interval) -> Result<Interval> {
    if beta.lo() <= 0.0 || beta.hi() >= 1.0 {
        return Err(GaussError::DomainViolation { param: "beta", value: beta.mid() });
    }
    let c = gamma.add(alpha);
    let u = aux_ratio(beta, c)?;
    let out = consts::two_over_sqrt_pi()
        .mul(c.neg_square().exp()?)
        .mul(u.normal_tail()?)
        .neg();
    Ok(out)
}

pub fn f_dalpha(p: &OrthantParams, mode: EvalMode) -> Result<Interval> {
    match mode {
        EvalMode::Fast => {
            if !(p.beta > 0.0 && p.beta < 1.0) {
                return Err(GaussError::DomainViolation { param: "beta", value: p.beta });
            }
            let c = p.gamma + p.alpha;
            let u = c * (2.0 * (1.0 - p.beta) / p.beta).sqrt();
            let v = -2.0 / std::f64::consts::PI.sqrt()
                * (-c * c).exp()
                * fast::normal_tail_f64(u);
            Ok(Interval::point(v)?)
        }
        EvalMode::Certified => f_dalpha_iv(
            Interval::point(p.gamma)?,
            Interval::point(p.beta)?,
            Interval::point(p.alpha)?,
        ),
    }
}

/// Second alpha-derivative:
/// `(2/sqrt pi) exp(-c^2) [2c Phibar(u) + phi(u) sqrt(2(1-beta)/beta)]`.
pub fn f_dalpha2_iv(gamma: Interval, beta: Interval, alpha: Interval) -> Result<Interval> {
    if beta.lo() <= 0.0 || beta.hi() >= 1.0 {
        return Err(GaussError::DomainViolation { param: "beta", value: beta.mid() });
    }
    let one = Interval::ONE;
    let c = gamma.add(alpha);
    let ratio = one.sub(beta).scale_pow2(1).div(beta)?;
    let root = ratio.sqrt()?;
    let u = c.mul(root);
    let phi_u = u.square().scale_pow2(-1).neg().exp()?.div(consts::sqrt_2pi())?;
    let bracket = c.scale_pow2(1).mul(u.normal_tail()?).add(phi_u.mul(root));
    Ok(consts::two_over_sqrt_pi().mul(c.neg_square().exp()?).mul(bracket))
}

/// Mixed derivative `d^2 f / dalpha dbeta`:
/// `-(2/sqrt pi) exp(-c^2) phi(u) c / (sqrt 2 beta^(3/2) sqrt(1-beta))`.
pub fn f_dalphabeta_iv(gamma: Interval, beta: Interval, alpha: Interval) -> Result<Interval> {
    if beta.lo() <= 0.0 || beta.hi() >= 1.0 {
        return Err(GaussError::DomainViolation { param: "beta", value: beta.mid() });
    }
    let one = Interval::ONE;
    let c = gamma.add(alpha);
    let u = aux_ratio(beta, c)?;
    let phi_u = u.square().scale_pow2(-1).neg().exp()?.div(consts::sqrt_2pi())?;
    let den = consts::sqrt_2()
        .mul(beta.sqrt()?)
        .mul(beta)
        .mul(one.sub(beta).sqrt()?);
    let out = consts::two_over_sqrt_pi()
        .mul(c.neg_square().exp()?)
        .mul(phi_u)
        .mul(c.div(den)?)
        .neg();
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BetaDerivOrder {
    First,
    /// `beta d2f/dbeta2 + 2 df/dbeta`
    Combo,
}

/// `df/drho = (1/2pi) (1-rho^2)^(-1/2) exp(-2c^2/(1+rho))`, from
/// differentiating the path representation in its upper limit.
fn f_drho(c: Interval, rho: Interval) -> Result<Interval> {
    let one = Interval::ONE;
    let omr2 = one.sub(rho.square());
    if omr2.lo() <= 0.0 {
        return Err(GaussError::SingularCorrelation { rho: rho.mid() });
    }
    let expo = c.square().scale_pow2(1).neg().div(one.add(rho))?;
    let num = expo.exp()?;
    num.div(omr2.sqrt()?.mul(consts::two_pi()))
        .map_err(GaussError::from)
}

/// `d2f/drho2 = f_rho * [rho/(1-rho^2) + 2c^2/(1+rho)^2]`.
fn f_drho2(c: Interval, rho: Interval) -> Result<Interval> {
    let one = Interval::ONE;
    let omr2 = one.sub(rho.square());
    let t1 = rho.div(omr2)?;
    let t2 = c.square().scale_pow2(1).div(one.add(rho).square())?;
    Ok(f_drho(c, rho)?.mul(t1.add(t2)))
}

/// Certified beta-derivatives over interval parameters. `First` returns
/// `df/dbeta = 2 f_rho`; `Combo` returns `beta d2f/dbeta2 + 2 df/dbeta
/// = 4 beta f_rhorho + 4 f_rho` (chain rule through `rho = 2 beta - 1`).
pub fn f_dbeta_iv(
    gamma: Interval,
    beta: Interval,
    alpha: Interval,
    order: BetaDerivOrder,
) -> Result<Interval> {
    if beta.lo() <= 0.0 || beta.hi() >= 1.0 {
        return Err(GaussError::DomainViolation { param: "beta", value: beta.mid() });
    }
    let c = gamma.add(alpha);
    let rho = beta.scale_pow2(1).sub(Interval::ONE);
    match order {
        BetaDerivOrder::First => Ok(f_drho(c, rho)?.scale_pow2(1)),
        BetaDerivOrder::Combo => {
            let second = beta.mul(f_drho2(c, rho)?).scale_pow2(2);
            Ok(second.add(f_drho(c, rho)?.scale_pow2(2)))
        }
    }
}

pub fn f_dbeta(p: &OrthantParams, order: BetaDerivOrder, mode: EvalMode) -> Result<Interval> {
    let g = Interval::point(p.gamma)?;
    let b = Interval::point(p.beta)?;
    let a = Interval::point(p.alpha)?;
    let v = f_dbeta_iv(g, b, a, order)?;
    match mode {
        EvalMode::Fast => Ok(Interval::point(v.mid())?),
        EvalMode::Certified => Ok(v),
    }
}

/// Thresholds (in the variance-1/2 scale) of the four-tilt probability.
pub fn g_thresholds(p: &GParams) -> (f64, f64) {
    let d31 = p.a[2] - p.a[0];
    let d42 = p.a[3] - p.a[1];
    let c1 = p.gamma + (d31 * p.beta + d42 * (1.0 - p.beta)) / 2.0;
    let c2 = p.gamma + (d31 * p.beta - d42 * (1.0 - p.beta)) / 2.0;
    (c1, c2)
}

/// `g(beta, a1, a2, a3, a4)`: the two-threshold orthant probability with the
/// binomial tilt offsets.
pub fn g_eval(p: &GParams, mode: EvalMode) -> Result<Interval> {
    if !(p.beta > 0.0 && p.beta < 1.0) {
        return Err(GaussError::DomainViolation { param: "beta", value: p.beta });
    }
    let (c1, c2) = g_thresholds(p);
    let rho = 2.0 * p.beta - 1.0;
    match mode {
        EvalMode::Fast => {
            let s = std::f64::consts::SQRT_2;
            Ok(Interval::point(orthant_upper_fast(c1 * s, c2 * s, rho))?)
        }
        EvalMode::Certified => {
            let h = Interval::point(c1)?.mul(consts::sqrt_2());
            let k = Interval::point(c2)?.mul(consts::sqrt_2());
            orthant_upper(h, k, Interval::point(rho)?, DEFAULT_TARGET)
        }
    }
}

/// Equal-threshold orthant at overlap `eta` and threshold `c` in the
/// variance-1/2 scale: `P[sqrt(eta/2) Z1 +- sqrt((1-eta)/2) Z2 >= c]`.
pub fn orthant_eq_threshold(eta: Interval, c: Interval, target: f64) -> Result<Interval> {
    let h = c.mul(consts::sqrt_2());
    let rho = eta.scale_pow2(1).sub(Interval::ONE);
    orthant_upper(h, h, rho, target)
}

/// Envelope bounds for `f(beta, alpha)` over `beta in [eta1, eta2]`,
/// constant in `beta`. The `Plain` branch freezes the correlation at an
/// endpoint; the `Scaled` branch additionally rescales the threshold by
/// `sqrt(eta_hi/eta_lo)` and is valid for `alpha <= -gamma`.
pub fn envelope(
    gamma: f64,
    eta1: f64,
    eta2: f64,
    alpha: f64,
    branch: EnvelopeBranch,
    side: Side,
    mode: EvalMode,
) -> Result<Interval> {
    if !(0.0 < eta1 && eta1 <= eta2 && eta2 <= 1.0) {
        return Err(GaussError::DomainViolation { param: "eta", value: eta1 });
    }
    match branch {
        EnvelopeBranch::Plain => {
            if alpha < -gamma {
                return Err(GaussError::BranchMismatch { alpha, gamma, branch });
            }
            let beta = match side {
                Side::Lower => eta1,
                Side::Upper => eta2,
            };
            f_eval(&OrthantParams { gamma, beta, alpha }, mode)
        }
        EnvelopeBranch::Scaled => {
            if alpha > -gamma {
                return Err(GaussError::BranchMismatch { alpha, gamma, branch });
            }
            let (eta, scale_num, scale_den) = match side {
                Side::Lower => (eta1, eta1, eta2),
                Side::Upper => (eta2, eta2, eta1),
            };
            match mode {
                EvalMode::Fast => {
                    let c = (scale_num / scale_den).sqrt() * (gamma + alpha);
                    let h = c * std::f64::consts::SQRT_2;
                    Ok(Interval::point(orthant_upper_fast(h, h, 2.0 * eta - 1.0))?)
                }
                EvalMode::Certified => {
                    let num = Interval::point(scale_num)?;
                    let den = Interval::point(scale_den)?;
                    let scale = num.div(den)?.sqrt()?;
                    let c = scale.mul(Interval::point(gamma)?.add(Interval::point(alpha)?));
                    orthant_eq_threshold(Interval::point(eta)?, c, DEFAULT_TARGET)
                }
            }
        }
    }
}
