//! First- and second-moment functionals and the envelope machinery that
//! bounds them over beta-segments.
//!
//! `F1(alpha) = log 2 - alpha^2 + log Phibar((gamma+alpha) sqrt 2)` drives
//! the first moment; `F2(beta, a1, a2)` combines the entropy of the overlap
//! with two orthant factors and drives the second moment. Over a segment
//! `beta in [eta1, eta2]` each case's envelope freezes the beta-dependence
//! into a single concave function per alpha variable,
//!
//! ```text
//! T(a) = -2 a^2 + K log Psi(s (gamma + a)),
//! ```
//!
//! whose supremum is certified from one good witness point: a fast
//! fixed-point iteration finds the near-maximizer, the certified residual
//! `T'(a*)` converts it into a global bound via strong concavity, and a
//! quadratic penalty accounts for half-line constraints whose boundary the
//! maximizer violates. `T'' <= -4` holds throughout because the `-2a^2`
//! term alone contributes `-4` and the log-orthant factor is concave along
//! any line in the threshold.

use crate::gaussfn::{
    self, fast, orthant_dh, orthant_eq_threshold, EvalMode, GaussError,
};
use crate::manifest::{CaseTag, SegmentPlan};
use crate::rint::{consts, Interval, RintError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FunctionalError {
    #[error(transparent)]
    Rint(#[from] RintError),
    #[error(transparent)]
    Gauss(#[from] GaussError),
    #[error("fixed point did not converge within {max_iter} iterations (last delta {delta:e})")]
    NoConvergence { max_iter: usize, delta: f64 },
    #[error("concavity constant must be positive, got {0}")]
    NonpositiveM(f64),
    #[error("orthant probability enclosure touches zero: {0}")]
    LogOfNonpositive(Interval),
    #[error("case {0:?} is not valid for this operation")]
    CaseMismatch(CaseTag),
}

pub type Result<T> = std::result::Result<T, FunctionalError>;

/// Per-variable strong concavity of the envelope terms: `-2a^2` contributes
/// `-4` and the log-orthant part is concave.
pub const TERM_CONCAVITY: f64 = 4.0;
/// Conservative constant used for the residual-to-supremum slack.
pub const SLACK_M: f64 = 2.0;

// ---------------------------------------------------------------------------
// F1
// ---------------------------------------------------------------------------

/// Certified `F1 = log 2 - alpha^2 + log Phibar((gamma+alpha) sqrt 2)`.
pub fn f1_eval_iv(gamma: Interval, alpha: Interval) -> Result<Interval> {
    let tail = gamma.add(alpha).mul(consts::sqrt_2()).normal_tail()?;
    if tail.lo() <= 0.0 {
        return Err(FunctionalError::LogOfNonpositive(tail));
    }
    Ok(consts::ln_2().sub(alpha.square()).add(tail.ln()?))
}

pub fn f1_eval(gamma: f64, alpha: f64, mode: EvalMode) -> Result<Interval> {
    match mode {
        EvalMode::Fast => {
            let t = fast::normal_tail_f64((gamma + alpha) * std::f64::consts::SQRT_2);
            Ok(Interval::point(std::f64::consts::LN_2 - alpha * alpha + t.ln())?)
        }
        EvalMode::Certified => f1_eval_iv(Interval::point(gamma)?, Interval::point(alpha)?),
    }
}

/// Certified `F1' = -2 alpha - exp(-c^2) / (sqrt(pi) Phibar(c sqrt 2))`.
pub fn f1_deriv_iv(gamma: Interval, alpha: Interval) -> Result<Interval> {
    let c = gamma.add(alpha);
    let tail = c.mul(consts::sqrt_2()).normal_tail()?;
    if tail.lo() <= 0.0 {
        return Err(FunctionalError::LogOfNonpositive(tail));
    }
    let ratio = c.neg_square().exp()?.div(consts::sqrt_pi().mul(tail))?;
    Ok(alpha.scale_pow2(1).neg().sub(ratio))
}

pub fn f1_deriv_fast(gamma: f64, alpha: f64) -> f64 {
    let c = gamma + alpha;
    let tail = fast::normal_tail_f64(c * std::f64::consts::SQRT_2);
    -2.0 * alpha - (-c * c).exp() / (std::f64::consts::PI.sqrt() * tail)
}

// ---------------------------------------------------------------------------
// F2
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct F2Point {
    pub beta: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub gamma: f64,
}

/// Entropy part `2 log 2 - 2 b log b - 2 (1-b) log(1-b)` with the 0 log 0
/// convention at the endpoints.
fn entropy_iv(beta: Interval) -> Result<Interval> {
    let two_log2 = consts::ln_2().scale_pow2(1);
    let mut total = two_log2;
    let one = Interval::ONE;
    for part in [beta, one.sub(beta)] {
        if part.hi() <= 0.0 {
            continue; // b log b -> 0
        }
        let p = part.intersect(Interval::new(1e-300, 1.0)?)?;
        let term = p.mul(p.ln()?).scale_pow2(1);
        if part.lo() <= 0.0 {
            // hull with the limit value 0 at the boundary
            total = total.sub(term.hull(Interval::ZERO));
        } else {
            total = total.sub(term);
        }
    }
    Ok(total)
}

/// Certified `F2(beta, alpha1, alpha2)`. Degenerate `beta` uses the limit
/// convention `beta log f(beta, .) -> 0`.
pub fn f2_eval_iv(p: &F2Point, target: f64) -> Result<Interval> {
    let gamma = Interval::point(p.gamma)?;
    let beta = Interval::point(p.beta)?;
    let a1 = Interval::point(p.alpha1)?;
    let a2 = Interval::point(p.alpha2)?;
    let one = Interval::ONE;
    let mut total = entropy_iv(beta)?
        .sub(a1.square().scale_pow2(1))
        .sub(a2.square().scale_pow2(1));
    for (coef, b, a) in [(beta, beta, a1), (one.sub(beta), one.sub(beta), a2)] {
        if coef.hi() <= 0.0 {
            continue;
        }
        let f = gaussfn::f_eval_iv(gamma, b, a, target)?;
        if f.lo() <= 0.0 {
            return Err(FunctionalError::LogOfNonpositive(f));
        }
        total = total.add(coef.mul(f.ln()?).scale_pow2(1));
    }
    Ok(total)
}

pub fn f2_eval(p: &F2Point, mode: EvalMode) -> Result<Interval> {
    match mode {
        EvalMode::Certified => f2_eval_iv(p, gaussfn::DEFAULT_TARGET),
        EvalMode::Fast => {
            let ent = |b: f64| if b > 0.0 { -2.0 * b * b.ln() } else { 0.0 };
            let mut total = 2.0 * std::f64::consts::LN_2 + ent(p.beta) + ent(1.0 - p.beta)
                - 2.0 * p.alpha1 * p.alpha1
                - 2.0 * p.alpha2 * p.alpha2;
            for (coef, b, a) in [(p.beta, p.beta, p.alpha1), (1.0 - p.beta, 1.0 - p.beta, p.alpha2)]
            {
                if coef <= 0.0 {
                    continue;
                }
                let f = gaussfn::f_eval(
                    &gaussfn::OrthantParams { gamma: p.gamma, beta: b, alpha: a },
                    EvalMode::Fast,
                )?
                .lo();
                if f <= 0.0 {
                    return Err(FunctionalError::LogOfNonpositive(Interval::point(f)?));
                }
                total += 2.0 * coef * f.ln();
            }
            Ok(Interval::point(total)?)
        }
    }
}

// ---------------------------------------------------------------------------
// Fixed point and the concave supremum transfer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct FixedPoint {
    pub alpha_star: f64,
    /// `|F1'(alpha_star)|` evaluated independently of the iteration.
    pub residual: f64,
    pub iterations: usize,
    /// Set when the residual exceeds 100x the step tolerance.
    pub flagged: bool,
}

/// Iterate `a <- -exp(-(g+a)^2) / (2 sqrt(pi) Phibar((g+a) sqrt 2))` to the
/// critical point of `F1`.
pub fn fixed_point_alpha(
    gamma: f64,
    alpha0: f64,
    tol: f64,
    max_iter: usize,
) -> Result<FixedPoint> {
    debug_assert!(tol > 0.0);
    let mut a = alpha0;
    let mut delta = f64::INFINITY;
    for i in 1..=max_iter {
        let c = gamma + a;
        let next = -(-c * c).exp()
            / (2.0 * std::f64::consts::PI.sqrt()
                * fast::normal_tail_f64(c * std::f64::consts::SQRT_2));
        delta = (next - a).abs();
        a = next;
        if delta <= tol {
            let residual = f1_deriv_fast(gamma, a).abs();
            return Ok(FixedPoint {
                alpha_star: a,
                residual,
                iterations: i,
                flagged: residual > 100.0 * tol,
            });
        }
    }
    Err(FunctionalError::NoConvergence { max_iter, delta })
}

#[derive(Debug, Clone)]
pub struct SupBoundInput {
    pub value_at_z: f64,
    pub grad_at_z: Vec<f64>,
    pub concavity_m: f64,
}

/// `sup f <= f(z) + |grad f(z)|^2 / (2M)` for `M`-strongly-concave `f`.
pub fn concave_sup_bound(inp: &SupBoundInput) -> Result<f64> {
    if inp.concavity_m <= 0.0 || inp.concavity_m.is_nan() {
        return Err(FunctionalError::NonpositiveM(inp.concavity_m));
    }
    let g2: f64 = inp.grad_at_z.iter().map(|g| g * g).sum();
    Ok(inp.value_at_z + g2 / (2.0 * inp.concavity_m))
}

// ---------------------------------------------------------------------------
// Envelope terms
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum HalfLine {
    /// `alpha <= -gamma`
    Below,
    /// `alpha >= -gamma`
    Above,
}

/// One separable envelope term `T(a) = -2a^2 + K log Psi(s (gamma+a))`,
/// where `Psi` is the equal-threshold orthant probability at overlap `eta`.
#[derive(Debug, Clone, Copy)]
struct EnvelopeTerm {
    coef: Interval,
    eta: Interval,
    scale: Interval,
    half: HalfLine,
}

impl EnvelopeTerm {
    /// `d/da log Psi` in fast mode.
    fn dlog_psi_fast(&self, gamma: f64, a: f64) -> f64 {
        let s = self.scale.mid();
        let rho = 2.0 * self.eta.mid() - 1.0;
        let h = s * (gamma + a) * std::f64::consts::SQRT_2;
        let psi = gaussfn::orthant_upper_fast(h, h, rho);
        let dh = 2.0 * gaussfn::orthant_dh_fast(h, h, rho);
        dh * s * std::f64::consts::SQRT_2 / psi
    }

    fn t_deriv_fast(&self, gamma: f64, a: f64) -> f64 {
        -4.0 * a + self.coef.mid() * self.dlog_psi_fast(gamma, a)
    }

    /// Near-maximizer of `T` by the tailored fixed-point iteration, falling
    /// back to bisection on `T'` (monotone by concavity) if needed.
    fn maximize_fast(&self, gamma: f64) -> f64 {
        let mut a = -0.44;
        for _ in 0..200 {
            let next = self.coef.mid() * self.dlog_psi_fast(gamma, a) / 4.0;
            if (next - a).abs() <= 1e-14 {
                return next;
            }
            a = next;
        }
        // bisection fallback on the decreasing derivative
        let (mut lo, mut hi) = (-1.5, 0.75);
        for _ in 0..200 {
            let m = 0.5 * (lo + hi);
            if self.t_deriv_fast(gamma, m) > 0.0 {
                lo = m;
            } else {
                hi = m;
            }
        }
        0.5 * (lo + hi)
    }

    /// Certified value and derivative of `T` at a point.
    fn t_certified(&self, gamma: Interval, a: f64, target: f64) -> Result<(Interval, Interval)> {
        let ai = Interval::point(a)?;
        let c = self.scale.mul(gamma.add(ai));
        let h = c.mul(consts::sqrt_2());
        let rho = self.eta.scale_pow2(1).sub(Interval::ONE);
        let psi = gaussfn::orthant_upper(h, h, rho, target)?;
        if psi.lo() <= 0.0 {
            return Err(FunctionalError::LogOfNonpositive(psi));
        }
        let value = ai.neg_square().scale_pow2(1).add(self.coef.mul(psi.ln()?));
        let dh = orthant_dh(h, h, rho)?.scale_pow2(1);
        let dpsi_da = dh.mul(self.scale).mul(consts::sqrt_2());
        let deriv = ai.scale_pow2(2).neg().add(self.coef.mul(dpsi_da.div(psi)?));
        Ok((value, deriv))
    }
}

/// Certified supremum data for one envelope term over its half-line.
#[derive(Debug, Clone)]
pub struct TermSup {
    /// Certified upper bound on `sup T` over the constrained region.
    pub bound: Interval,
    pub witness_alpha: f64,
    pub value_at_witness: Interval,
    pub residual: Interval,
    pub corrected: bool,
}

fn sup_term(
    term: &EnvelopeTerm,
    gamma: Interval,
    quad_target: f64,
) -> Result<TermSup> {
    let gmid = gamma.mid();
    let a_star = term.maximize_fast(gmid);
    let (value, deriv) = term.t_certified(gamma, a_star, quad_target)?;
    let r_mag = deriv.abs();
    // sup over all of R: T(a*) + r^2 / (2 * SLACK_M)
    let slack = r_mag.square().div(Interval::point(2.0 * SLACK_M)?)?;
    let unconstrained = value.add(slack);
    // half-line correction when the witness violates the constraint; the
    // boundary is taken at the conservative end of the gamma window
    let boundary = match term.half {
        HalfLine::Below => -gamma.lo(),
        HalfLine::Above => -gamma.hi(),
    };
    let d = match term.half {
        HalfLine::Below => a_star - boundary,
        HalfLine::Above => boundary - a_star,
    };
    if d <= 0.0 {
        return Ok(TermSup {
            bound: unconstrained,
            witness_alpha: a_star,
            value_at_witness: value,
            residual: r_mag,
            corrected: false,
        });
    }
    // witness outside the half-line: every admissible point is at least d
    // away, so Taylor with T'' <= -4 gives
    // sup <= T(a*) + sup_{|delta| >= d, right sign} (r delta - 2 delta^2),
    // and the supremum sits at the boundary once d >= |r|/4.
    let di = Interval::point(d)?;
    let at_boundary = r_mag.mul(di).sub(di.square().scale_pow2(1));
    let interior = r_mag.square().scale_pow2(-3); // r^2/8, if the vertex is admissible
    let sup_shift = if d >= r_mag.hi() / 4.0 {
        at_boundary
    } else {
        at_boundary.max_i(interior)
    };
    Ok(TermSup {
        bound: value.add(sup_shift),
        witness_alpha: a_star,
        value_at_witness: value,
        residual: r_mag,
        corrected: true,
    })
}

// ---------------------------------------------------------------------------
// Segment supremum
// ---------------------------------------------------------------------------

/// Result of bounding one segment.
#[derive(Debug, Clone)]
pub struct SegmentOutcome {
    /// Certified upper bound for the segment's goal: `sup F2` over the
    /// segment region for B2 cases, the out-of-box supremum for B3-local,
    /// and `2 sup F1` for the B1 tail.
    pub bound: Interval,
    pub corrections: u8,
    pub terms: Vec<TermSup>,
    /// B3-local only: the witness checks of the localization procedure.
    pub local_witness: Option<LocalWitness>,
}

/// Witness data for a B3-local segment: value, distance to the reference
/// point, and gradient at the per-variable near-maximizers.
#[derive(Debug, Clone)]
pub struct LocalWitness {
    pub value: Interval,
    pub grad_norm1: Interval,
    pub alpha: [f64; 2],
    pub value_ok: bool,
    pub position_ok: bool,
    pub gradient_ok: bool,
}

pub const LOCAL_VALUE_CAP: f64 = 1e-5;
pub const LOCAL_POSITION_CENTER: f64 = -0.445;
pub const LOCAL_POSITION_RADIUS: f64 = 1.5e-3;
pub const LOCAL_GRADIENT_CAP: f64 = 1e-5;
pub const LOCAL_BOX: (f64, f64) = (-0.449, -0.441);

const QUAD_TARGET: f64 = 1e-8;

/// Certified upper bound on the segment's objective. See the case table in
/// the module docs; `gamma` is an interval so one run covers the whole
/// gamma window at once (the B2/B3 objectives are decreasing in gamma, so
/// callers may also pass the window's lower endpoint).
pub fn segment_envelope_sup(seg: &SegmentPlan, gamma: Interval) -> Result<SegmentOutcome> {
    let eta1 = seg.eta1.to_interval();
    let eta2 = seg.eta2.to_interval();
    let one = Interval::ONE;
    let ent = entropy_iv(eta2)?;

    if seg.case_tag == CaseTag::B1Tail {
        let chain = initial_interval_chain(gamma)?;
        let bound = chain.sup_f1_bound.scale_pow2(1);
        return Ok(SegmentOutcome {
            bound,
            corrections: 0,
            terms: Vec::new(),
            local_witness: None,
        });
    }

    // the four envelope shapes that appear across the cases
    let scale_up = |num: Interval, den: Interval| -> Result<Interval> {
        Ok(num.div(den)?.sqrt()?)
    };
    let t1_plain = || -> Result<EnvelopeTerm> {
        Ok(EnvelopeTerm {
            coef: eta1.scale_pow2(1),
            eta: eta2,
            scale: Interval::ONE,
            half: HalfLine::Above,
        })
    };
    let t1_scaled = || -> Result<EnvelopeTerm> {
        Ok(EnvelopeTerm {
            coef: eta1.scale_pow2(1),
            eta: eta2,
            scale: scale_up(eta2, eta1)?,
            half: HalfLine::Below,
        })
    };
    let t2_plain = || -> Result<EnvelopeTerm> {
        Ok(EnvelopeTerm {
            coef: one.sub(eta2).scale_pow2(1),
            eta: one.sub(eta1),
            scale: Interval::ONE,
            half: HalfLine::Above,
        })
    };
    let t2_scaled = || -> Result<EnvelopeTerm> {
        Ok(EnvelopeTerm {
            coef: one.sub(eta2).scale_pow2(1),
            eta: one.sub(eta1),
            scale: scale_up(one.sub(eta1), one.sub(eta2))?,
            half: HalfLine::Below,
        })
    };

    let terms: Vec<EnvelopeTerm> = match seg.case_tag {
        CaseTag::B2Case1 => vec![t2_scaled()?],
        CaseTag::B2Case2 => vec![t2_plain()?],
        CaseTag::B2Case3 => vec![t1_plain()?, t2_plain()?],
        CaseTag::B2Case4 => vec![t1_scaled()?, t2_plain()?],
        CaseTag::B2Case5 => vec![t1_plain()?, t2_scaled()?],
        CaseTag::B2Case6 | CaseTag::B3Local => vec![t1_scaled()?, t2_scaled()?],
        CaseTag::B1Tail => unreachable!("handled above"),
    };

    let sups: Vec<TermSup> = terms
        .iter()
        .map(|t| sup_term(t, gamma, QUAD_TARGET))
        .collect::<Result<_>>()?;
    let corrections = sups.iter().filter(|s| s.corrected).count() as u8;

    if seg.case_tag == CaseTag::B3Local {
        let s1 = &sups[0];
        let s2 = &sups[1];
        let value = ent.add(s1.value_at_witness).add(s2.value_at_witness);
        let grad_norm1 = s1.residual.add(s2.residual);
        let position_ok = sups
            .iter()
            .all(|s| (s.witness_alpha - LOCAL_POSITION_CENTER).abs() <= LOCAL_POSITION_RADIUS);
        let witness = LocalWitness {
            value,
            grad_norm1,
            alpha: [s1.witness_alpha, s2.witness_alpha],
            value_ok: value.hi() <= LOCAL_VALUE_CAP,
            position_ok,
            gradient_ok: grad_norm1.hi() <= LOCAL_GRADIENT_CAP,
        };
        // supremum off the alpha box: the escaping variable sits at least
        // dist(a_i*, box edge) from the witness, the other contributes its
        // unconstrained slack r^2/8 (both use T'' <= -4)
        let excl = |esc: &TermSup, other: &TermSup| -> Result<Interval> {
            let d = (LOCAL_BOX.1 - LOCAL_BOX.0) / 2.0
                - (esc.witness_alpha - LOCAL_POSITION_CENTER).abs();
            let di = Interval::point(d.max(0.0))?;
            let at_edge = esc.residual.mul(di).sub(di.square().scale_pow2(1));
            let escape = if d >= esc.residual.hi() / 4.0 {
                at_edge
            } else {
                at_edge.max_i(esc.residual.square().scale_pow2(-3))
            };
            let slack = other.residual.square().scale_pow2(-3);
            Ok(value.add(escape).add(slack))
        };
        let bound = excl(s1, s2)?.max_i(excl(s2, s1)?);
        return Ok(SegmentOutcome {
            bound,
            corrections,
            terms: sups,
            local_witness: Some(witness),
        });
    }

    let mut bound = ent;
    for s in &sups {
        bound = bound.add(s.bound);
    }
    Ok(SegmentOutcome { bound, corrections, terms: sups, local_witness: None })
}

// ---------------------------------------------------------------------------
// The boundary segment beta in [0, .001]
// ---------------------------------------------------------------------------

/// One certified inequality in the boundary chain.
#[derive(Debug, Clone)]
pub struct ChainLink {
    pub name: &'static str,
    pub value: Interval,
    pub ok: bool,
}

/// Certified verification that `sup F2` over `beta in [0, .001]` equals
/// `2 sup F1`, by the monotone-decrease argument near the boundary.
#[derive(Debug, Clone)]
pub struct InitialIntervalChain {
    pub links: Vec<ChainLink>,
    /// Certified upper bound on `sup_alpha F1(alpha)`.
    pub sup_f1_bound: Interval,
    pub ok: bool,
}

impl InitialIntervalChain {
    pub fn first_broken(&self) -> Option<&'static str> {
        self.links.iter().find(|l| !l.ok).map(|l| l.name)
    }
}

/// Closed-form antiderivative of `c0 - clog*log b - csqrt/sqrt(b)` at `b`:
/// `c0 b - clog (b log b - b) - 2 csqrt sqrt(b)`.
pub fn majorant_antiderivative(c0: f64, clog: f64, csqrt: f64, beta: f64) -> Result<Interval> {
    let b = Interval::point(beta)?;
    let main = Interval::point(c0)?.mul(b);
    let log_part = Interval::point(clog)?.mul(b.mul(b.ln()?).sub(b));
    let root_part = Interval::point(csqrt)?.mul(b.sqrt()?).scale_pow2(1);
    Ok(main.sub(log_part).sub(root_part))
}

/// The certified inequality chain behind the boundary segment: localization
/// of `alpha2`, two-sided bounds on the remaining orthant factor, the
/// variance-reduction coefficient, and the negativity of the integrated
/// derivative majorant. All constants are produced by the chain itself, so
/// each step is sound independent of any floating-point session.
pub fn initial_interval_chain(gamma: Interval) -> Result<InitialIntervalChain> {
    let mut links = Vec::new();
    let mut ok = true;
    let push = |links: &mut Vec<ChainLink>, ok: &mut bool, name: &'static str, value: Interval, pass: bool| {
        links.push(ChainLink { name, value, ok: pass });
        *ok &= pass;
    };
    let one = Interval::ONE;
    let b_edge = Interval::from_rational(1, 1000)?;
    let eta = one.sub(b_edge); // 0.999

    // entropy term is increasing on [0, .001]; its value at .001 caps it
    let ent_edge = entropy_iv(b_edge)?.sub(consts::ln_2().scale_pow2(1));
    push(&mut links, &mut ok, "entropy-cap", ent_edge, ent_edge.hi() <= 0.01582);

    // alpha2 localization to [-.53, -.37] through the concave majorant
    // H(a) = 2 log 2 + .01582 + 2(1-.001)(-a^2 + log Phibar((gamma+a) sqrt 2))
    let h_at = |a: f64| -> Result<Interval> {
        let ai = Interval::point(a)?;
        let tail = gamma.add(ai).mul(consts::sqrt_2()).normal_tail()?;
        let inner = ai.neg_square().add(tail.ln()?);
        Ok(consts::ln_2()
            .scale_pow2(1)
            .add(Interval::from_literal(0.01582))
            .add(eta.scale_pow2(1).mul(inner)))
    };
    let h_lo = h_at(-0.53)?;
    let h_hi = h_at(-0.37)?;
    let h_mid = h_at(-0.45)?;
    push(&mut links, &mut ok, "H(-0.53)", h_lo, h_lo.hi() <= -1e-4);
    push(&mut links, &mut ok, "H(-0.37)", h_hi, h_hi.hi() <= -1e-4);
    push(&mut links, &mut ok, "H(-0.45)", h_mid, h_mid.lo() >= 1e-2);

    // orthant factor bounds over beta in [0,.001], alpha2 in [-.53,-.37]:
    // lower bound at alpha2 = -.37 through the scaled envelope at eta = .999,
    // upper bound at alpha2 = -.53 through the single-constraint relaxation
    let c_lo = eta.sqrt()?.mul(gamma.add(Interval::from_literal(-0.37)));
    let f_lo = orthant_eq_threshold(eta, c_lo, 1e-9)?;
    push(&mut links, &mut ok, "f-lower", f_lo, f_lo.lo() >= 0.538);
    let thr_hi = gamma.add(Interval::from_literal(-0.53)).mul(consts::sqrt_2());
    let f_hi = thr_hi.normal_tail()?;
    push(&mut links, &mut ok, "f-upper", f_hi, f_hi.hi() <= 0.66);

    // variance-reduction coefficient: E[(Z^2-1) 1[...]] <= -cE sqrt(beta)
    // with cE = 2 (phi(0) - phi(10)) inf phi(z1); the density argument z1
    // stays between sqrt(2/(1-beta))(gamma-.53) and
    // sqrt 2 (gamma-.37) + 10 sqrt(beta/(1-beta)) for t in [0, 10]
    let z_neg = gamma
        .sub(Interval::from_literal(0.53))
        .mul(consts::sqrt_2())
        .div(eta.sqrt()?)?;
    let z_pos = gamma
        .add(Interval::from_literal(-0.37))
        .mul(consts::sqrt_2())
        .add(b_edge.div(eta)?.sqrt()?.mul(Interval::point(10.0)?));
    let z_max = Interval::point(z_neg.mag().max(z_pos.mag()))?;
    let q = z_max.square().scale_pow2(-1).neg().exp()?.mul(consts::inv_sqrt_2pi());
    let phi0 = consts::inv_sqrt_2pi();
    let phi10 = Interval::point(-50.0)?.exp()?.mul(consts::inv_sqrt_2pi());
    let c_e = q.mul(phi0.sub(phi10)).scale_pow2(1);
    push(&mut links, &mut ok, "variance-coefficient", c_e, c_e.lo() >= 0.29);

    // assembled majorant for dG2/dbeta: (1 - 2 log f_lo) - 2 log b - cD/sqrt(b)
    let c0 = one.sub(f_lo.ln()?.scale_pow2(1));
    let c_d = c_e.mul(eta).div(f_hi)?;
    push(&mut links, &mut ok, "majorant-coefficient", c_d, c_d.lo() >= 0.43);

    // integral of the majorant over (0, .001] is negative; by monotonicity
    // of sqrt(b) (c0 + 2 - 2 log b) the endpoint value controls the whole
    // range, so the single certified evaluation suffices
    let integral = majorant_antiderivative(c0.hi(), 2.0, c_d.lo(), 1e-3)?;
    push(&mut links, &mut ok, "majorant-integral", integral, integral.hi() < 0.0);

    // with the boundary value pinned, the segment supremum equals
    // 2 sup F1; certify an upper bound for sup F1 by the concave transfer
    let fp = fixed_point_alpha(gamma.mid(), -0.4, 1e-13, 200)?;
    let v = f1_eval_iv(gamma, Interval::point(fp.alpha_star)?)?;
    let r = f1_deriv_iv(gamma, Interval::point(fp.alpha_star)?)?.abs();
    let sup_f1 = v.add(r.square().div(Interval::point(2.0 * SLACK_M)?)?);
    links.push(ChainLink { name: "sup-F1-bound", value: sup_f1, ok: true });

    // the localization discards alpha2 outside [-.53,-.37] only if the level
    // reached there stays below twice the F1 value the witness attains
    let h_ends = h_lo.max_i(h_hi);
    let discard_ok = h_ends.hi() < 2.0 * v.lo();
    push(&mut links, &mut ok, "H-ends-below-level", h_ends, discard_ok);

    Ok(InitialIntervalChain { links, sup_f1_bound: sup_f1, ok })
}
