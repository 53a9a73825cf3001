//! Exact and high-precision binomial computations validating the Gaussian
//! approximations at finite n.
//!
//! The point-mass oracle works in exact big-rational arithmetic. Tilted
//! success probabilities `1/2 + a/(2 sqrt n)` are exact rationals whenever
//! `n` is a perfect square (every f64 tilt is a dyadic rational); otherwise
//! `sqrt n` is replaced by a rational approximation accurate to 1e-40,
//! which perturbs the mass by well under the 1e-20 documentation bound.
//! The tail and joint checks compare against normal tails at accuracy
//! `O(1/n)`, so they run in `f64` with log-factorial pmf tables whose error
//! (about 1e-9 relative at n = 4096) is far below the quantity measured.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::gaussfn::{self, fast, EvalMode};
use crate::manifest::Rational;

#[derive(Debug, Error)]
pub enum BinomError {
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("beta * n must be an integer, got {num}/{den} * {n}")]
    InfeasibleBeta { num: u64, den: u64, n: u64 },
    #[error("tilt {a} pushes the success probability outside (0,1) at n = {n}")]
    BadTilt { a: f64, n: u64 },
    #[error(transparent)]
    Gauss(#[from] gaussfn::GaussError),
}

pub type Result<T> = std::result::Result<T, BinomError>;

/// Parameters of the two-binomial difference mass.
#[derive(Debug, Clone, Copy)]
pub struct BinDiffSpec {
    pub n: u64,
    /// size offset: the first binomial has `n - ell` trials
    pub ell: i64,
    pub a1: f64,
    pub a2: f64,
    /// target difference
    pub t: i64,
}

pub const MAX_EXACT_N: u64 = 4096;

fn binomial_coefficient(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Exact `C(n, n/2 + t) / C(n, n/2)` for even `n`.
pub fn exact_middle_ratio(n: u64, t: i64) -> Result<BigRational> {
    if !n.is_multiple_of(2) {
        return Err(BinomError::OutOfRange(format!("n = {n} must be even")));
    }
    if t.unsigned_abs() > n / 2 {
        return Err(BinomError::OutOfRange(format!("|t| = {} exceeds n/2", t.unsigned_abs())));
    }
    let k = (n as i64 / 2 + t) as u64;
    let num = binomial_coefficient(n, k);
    let den = binomial_coefficient(n, n / 2);
    Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

/// Exact rational success probability `1/2 + a/(2 sqrt n)`; `sqrt n` is
/// exact for perfect squares, else approximated to 1e-40.
fn tilted_probability(n: u64, a: f64) -> Result<BigRational> {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    if a == 0.0 {
        return Ok(half);
    }
    let a_rat = BigRational::from_float(a).ok_or(BinomError::BadTilt { a, n })?;
    let root = {
        let isq = (n as f64).sqrt().round() as u64;
        if isq * isq == n {
            BigRational::from_integer(BigInt::from(isq))
        } else {
            // floor(sqrt(n * 10^80)) / 10^40
            let scaled = BigUint::from(n) * BigUint::from(10u32).pow(80);
            let root = scaled.sqrt();
            BigRational::new(BigInt::from(root), BigInt::from(BigUint::from(10u32).pow(40)))
        }
    };
    let p = half.clone() + a_rat / (BigRational::from_integer(BigInt::from(2)) * root);
    if p <= BigRational::zero() || p >= BigRational::one() {
        return Err(BinomError::BadTilt { a, n });
    }
    Ok(p)
}

/// Exact pmf numerators of `Bin(m, p)` over the common denominator
/// `den(p)^m`: entry `k` is `C(m,k) num^k (den-num)^(m-k)`.
fn pmf_numerators(m: u64, p: &BigRational) -> Vec<BigUint> {
    let num = p.numer().to_biguint().expect("p in (0,1)");
    let den = p.denom().to_biguint().expect("positive denominator");
    let comp = &den - &num;
    let mut out = Vec::with_capacity(m as usize + 1);
    let mut cur = comp.pow(m as u32); // k = 0
    out.push(cur.clone());
    for k in 0..m {
        // C(m,k+1) A^(k+1) B^(m-k-1) = C(m,k) A^k B^(m-k) * (m-k) A / ((k+1) B)
        cur = cur * BigUint::from(m - k) * &num / (BigUint::from(k + 1) * &comp);
        out.push(cur.clone());
    }
    out
}

fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let shift = den.bits() as i64 - 110;
    let (n2, d2) = if shift > 0 {
        (num >> shift as u64, den >> shift as u64)
    } else {
        (num.clone(), den.clone())
    };
    let nf = n2.to_f64().unwrap_or(f64::MAX);
    let df = d2.to_f64().unwrap_or(f64::MAX);
    nf / df
}

/// Exact mass `P[Bin(n, p(a2)) - Bin(n - ell, p(a1)) = t]`, reported as an
/// f64 whose relative error is below 1e-20 (exact arithmetic throughout;
/// only the final conversion and, for non-square n, the 1e-40 root
/// approximation perturb it).
pub fn diff_pmf_exact(spec: &BinDiffSpec) -> Result<f64> {
    let (num, den) = diff_pmf_ratio(spec)?;
    Ok(ratio_to_f64(&num, &den))
}

fn diff_pmf_ratio(spec: &BinDiffSpec) -> Result<(BigUint, BigUint)> {
    let n = spec.n;
    if n == 0 || n > MAX_EXACT_N {
        return Err(BinomError::OutOfRange(format!("n = {n} outside 1..={MAX_EXACT_N}")));
    }
    let m1 = n as i64 - spec.ell;
    if m1 < 0 {
        return Err(BinomError::OutOfRange(format!("ell = {} exceeds n", spec.ell)));
    }
    let m1 = m1 as u64;
    let p1 = tilted_probability(n, spec.a1)?;
    let p2 = tilted_probability(n, spec.a2)?;
    let q1 = pmf_numerators(m1, &p1);
    let q2 = pmf_numerators(n, &p2);
    let d1 = p1.denom().to_biguint().unwrap().pow(m1 as u32);
    let d2 = p2.denom().to_biguint().unwrap().pow(n as u32);
    // P[X2 - X1 = t] = sum_k P2[k] P1[k - t]
    let mut acc = BigUint::zero();
    for (k, mass2) in q2.iter().enumerate() {
        let j = k as i64 - spec.t;
        if j < 0 || j > m1 as i64 {
            continue;
        }
        acc += mass2 * &q1[j as usize];
    }
    Ok((acc, d1 * d2))
}

/// Exact total mass over all achievable t, as a rational; equals one.
pub fn diff_pmf_total(n: u64, ell: i64, a1: f64, a2: f64) -> Result<BigRational> {
    let m1 = (n as i64 - ell) as u64;
    let mut num = BigUint::zero();
    let mut den = BigUint::one();
    for t in -(m1 as i64)..=(n as i64) {
        let (nu, de) = diff_pmf_ratio(&BinDiffSpec { n, ell, a1, a2, t })?;
        num = num * &de + nu * &den;
        den *= de;
        // keep the accumulator reduced to avoid quadratic blowup
        let g = num_integer::gcd(num.clone(), den.clone());
        if !g.is_one() {
            num /= &g;
            den /= &g;
        }
    }
    Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

/// f64 pmf table for `Bin(m, p)` through log-factorials; relative error
/// about `m * eps * log m`.
fn pmf_f64(m: usize, p: f64) -> Vec<f64> {
    let mut lf = vec![0.0f64; m + 1];
    for i in 1..=m {
        lf[i] = lf[i - 1] + (i as f64).ln();
    }
    let lp = p.ln();
    let lq = (-p).ln_1p();
    (0..=m)
        .map(|k| (lf[m] - lf[k] - lf[m - k] + k as f64 * lp + (m - k) as f64 * lq).exp())
        .collect()
}

/// Exact-vs-normal comparison of the first-moment tail
/// `P[Bin(n-1, p(a1)) - Bin(n, p(a2)) >= k]` against
/// `Phibar(k sqrt(2/n) + (a2-a1)/sqrt 2)`.
pub fn first_moment_tail_check(n: u64, a1: f64, a2: f64, k: i64) -> Result<(f64, f64, f64)> {
    if n == 0 || n > MAX_EXACT_N {
        return Err(BinomError::OutOfRange(format!("n = {n}")));
    }
    let rn = (n as f64).sqrt();
    let p1 = 0.5 + a1 / (2.0 * rn);
    let p2 = 0.5 + a2 / (2.0 * rn);
    if !(0.0 < p1 && p1 < 1.0) {
        return Err(BinomError::BadTilt { a: a1, n });
    }
    if !(0.0 < p2 && p2 < 1.0) {
        return Err(BinomError::BadTilt { a: a2, n });
    }
    let q1 = pmf_f64(n as usize - 1, p1);
    let q2 = pmf_f64(n as usize, p2);
    let mut cdf2 = vec![0.0f64; n as usize + 1];
    let mut run = 0.0;
    for (i, v) in q2.iter().enumerate() {
        run += v;
        cdf2[i] = run;
    }
    // P[B1 - B2 >= k] = sum_j q1[j] P[B2 <= j - k]
    let mut exact = 0.0;
    for (j, mass) in q1.iter().enumerate() {
        let idx = j as i64 - k;
        if idx < 0 {
            continue;
        }
        let idx = (idx as usize).min(n as usize);
        exact += mass * cdf2[idx];
    }
    let gaussian =
        fast::normal_tail_f64(k as f64 * std::f64::consts::SQRT_2 / rn + (a2 - a1) / std::f64::consts::SQRT_2);
    Ok((exact, gaussian, (exact - gaussian).abs()))
}

/// Exact-vs-Gaussian comparison of the joint two-constraint probability
/// `P[T1 + T2 >= Gamma and T1 - T2 >= Gamma]` with `T1 = X1 - X3`,
/// `T2 = X2 - X4` built from the four tilted binomials.
pub fn second_moment_joint_check(
    n: u64,
    beta: Rational,
    a: [f64; 4],
    big_gamma: i64,
) -> Result<(f64, f64, f64)> {
    if n == 0 || n > MAX_EXACT_N {
        return Err(BinomError::OutOfRange(format!("n = {n}")));
    }
    if !(n as u128 * beta.num as u128).is_multiple_of(beta.den as u128) {
        return Err(BinomError::InfeasibleBeta { num: beta.num, den: beta.den, n });
    }
    let k = (n as u128 * beta.num as u128 / beta.den as u128) as u64;
    if k == 0 || k >= n {
        return Err(BinomError::OutOfRange(format!("beta n = {k} must be interior")));
    }
    let rn = (n as f64).sqrt();
    let p = |ai: f64| 0.5 + ai / (2.0 * rn);
    for ai in a {
        if !(0.0 < p(ai) && p(ai) < 1.0) {
            return Err(BinomError::BadTilt { a: ai, n });
        }
    }
    // difference pmf over offset index: diff = X - Y, X ~ Bin(mx,px), Y ~ Bin(my,py)
    let diff_pmf = |mx: usize, px: f64, my: usize, py: f64| -> Vec<f64> {
        let qx = pmf_f64(mx, px);
        let qy = pmf_f64(my, py);
        let mut out = vec![0.0f64; mx + my + 1]; // index d + my, d in [-my, mx]
        for (i, vx) in qx.iter().enumerate() {
            for (j, vy) in qy.iter().enumerate() {
                out[i + my - j] += vx * vy;
            }
        }
        out
    };
    let t1 = diff_pmf(k as usize - 1, p(a[0]), k as usize, p(a[2]));
    let t2 = diff_pmf(n as usize - k as usize, p(a[1]), n as usize - k as usize, p(a[3]));
    let off1 = k as i64; // t1[i] = P[T1 = i - off1]
    let off2 = (n - k) as i64;
    let mut cdf2 = vec![0.0f64; t2.len()];
    let mut run = 0.0;
    for (i, v) in t2.iter().enumerate() {
        run += v;
        cdf2[i] = run;
    }
    let cdf2_at = |v: i64| -> f64 {
        // P[T2 <= v]
        let idx = v + off2;
        if idx < 0 {
            0.0
        } else if idx as usize >= cdf2.len() {
            1.0
        } else {
            cdf2[idx as usize]
        }
    };
    let mut exact = 0.0;
    for (i, mass) in t1.iter().enumerate() {
        let t1v = i as i64 - off1;
        // need Gamma - t1 <= T2 <= t1 - Gamma
        if t1v < big_gamma {
            continue;
        }
        exact += mass * (cdf2_at(t1v - big_gamma) - cdf2_at(big_gamma - t1v - 1));
    }
    let g = gaussfn::g_eval(
        &gaussfn::GParams {
            gamma: big_gamma as f64 / rn,
            beta: k as f64 / n as f64,
            a,
        },
        EvalMode::Fast,
    )?
    .lo();
    Ok((exact, g, (exact - g).abs()))
}

/// CSV rows `(check, n, params, exact, approx, err)` for rate plots.
pub fn rate_csv(ns: &[u64], sets: &[(f64, f64, f64)]) -> Result<String> {
    let mut out = String::from("check,n,a1,a2,kcoef,exact,approx,err\n");
    for &(a1, a2, kc) in sets {
        for &n in ns {
            let k = (kc * (n as f64).sqrt()).ceil() as i64;
            let (exact, approx, err) = first_moment_tail_check(n, a1, a2, k)?;
            out.push_str(&format!("tail,{n},{a1},{a2},{kc},{exact},{approx},{err}\n"));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;
    use num_traits::{FromPrimitive, Signed};

    #[test]
    fn middle_ratio_reference_points() {
        assert!(exact_middle_ratio(100, 0).unwrap().is_one());
        let r5 = exact_middle_ratio(100, 5).unwrap();
        let expected = BigRational::new(
            BigInt::from(binomial_coefficient(100, 55)),
            BigInt::from(binomial_coefficient(100, 50)),
        );
        assert_eq!(r5, expected);
        assert_eq!(r5, exact_middle_ratio(100, -5).unwrap());
        assert!(exact_middle_ratio(100, 51).is_err());
        assert!(exact_middle_ratio(101, 0).is_err());
    }

    #[test]
    fn middle_ratio_matches_gaussian_form() {
        // exp(-2t^2/n - 4t^4/(3n^3)) within a (1 + C(1/n + t^2/n^2 + t^6/n^5))
        // factor, C = 2
        for (n, t) in [(100u64, 5i64), (400, 10), (1600, 30), (256, 3)] {
            let exact = exact_middle_ratio(n, t).unwrap().to_f64().unwrap();
            let nf = n as f64;
            let tf = t as f64;
            let model = (-2.0 * tf * tf / nf - 4.0 * tf.powi(4) / (3.0 * nf.powi(3))).exp();
            let budget = 2.0 * (1.0 / nf + tf * tf / (nf * nf) + tf.powi(6) / nf.powi(5));
            assert!(
                (exact / model).ln().abs() <= budget,
                "n={n} t={t}: ratio {} budget {budget}",
                exact / model
            );
        }
    }

    #[test]
    fn diff_pmf_hand_convolution() {
        // two Bin(2, 1/2): P[X - Y = 0] = (1 + 4 + 1)/16 = 3/8
        let v = diff_pmf_exact(&BinDiffSpec { n: 2, ell: 0, a1: 0.0, a2: 0.0, t: 0 }).unwrap();
        assert!((v - 0.375).abs() < 1e-18);
    }

    #[test]
    fn diff_pmf_matches_leading_gaussian_form() {
        let spec = BinDiffSpec { n: 400, ell: 1, a1: 0.3, a2: -0.2, t: 7 };
        let v = diff_pmf_exact(&spec).unwrap();
        let nf = 400.0f64;
        let lead = (1.0 / (std::f64::consts::PI * nf).sqrt())
            * (-((spec.a2 - spec.a1) / 2.0 + (-(spec.t as f64) + spec.ell as f64 / 2.0) / nf.sqrt())
                .powi(2))
            .exp();
        assert!((v - lead).abs() / lead <= 5.0 / nf, "exact {v} lead {lead}");
    }

    #[test]
    fn diff_pmf_sums_to_one_exactly() {
        // perfect square n with tilts: fully exact rational arithmetic
        let total = diff_pmf_total(36, 1, 0.25, -0.5).unwrap();
        assert!(total.is_one(), "total = {total}");
        // non-square n goes through the 1e-40 root approximation
        let total = diff_pmf_total(30, 0, 0.125, 0.25).unwrap();
        let dev = (total - BigRational::one()).abs();
        assert!(dev < BigRational::from_f64(1e-18).unwrap(), "dev = {dev}");
    }

    #[test]
    fn tail_check_full_range() {
        let (exact, gaussian, _) = first_moment_tail_check(100, 0.0, 0.0, -100).unwrap();
        assert!((exact - 1.0).abs() < 1e-12);
        assert!((gaussian - 1.0).abs() < 1e-10);
    }

    #[test]
    fn tail_check_rate_decay() {
        let mut errs = Vec::new();
        for n in [100u64, 400, 1600] {
            let k = (0.25 * (n as f64).sqrt()).ceil() as i64;
            let (_, _, err) = first_moment_tail_check(n, 0.2, -0.1, k).unwrap();
            errs.push(err);
        }
        for w in errs.windows(2) {
            let ratio = w[0] / w[1];
            assert!((2.5..=6.0).contains(&ratio), "ratio {ratio} errs {errs:?}");
        }
    }

    #[test]
    fn tail_check_complement_symmetry() {
        // complementing every binomial maps the tail exactly:
        // 1 - P[tail(a1, a2, k)] = P[tail(-a1, -a2, -k)]
        for (n, a1, a2, k) in [(100u64, 0.2, -0.1, 3i64), (400, -0.3, 0.25, -5), (144, 0.5, 0.5, 2)]
        {
            let (t1, _, _) = first_moment_tail_check(n, a1, a2, k).unwrap();
            let (t2, _, _) = first_moment_tail_check(n, -a1, -a2, -k).unwrap();
            assert!((t1 + t2 - 1.0).abs() <= 1e-10, "n={n}: {t1} + {t2}");
        }
    }

    #[test]
    fn median_error_scales_like_inverse_n() {
        let mut rng = SplitMix64::new(61);
        let mut meds: Vec<f64> = Vec::new();
        for n in [100u64, 400, 1600] {
            let mut errs: Vec<f64> = (0..10)
                .map(|_| {
                    let a1 = -0.6 + 1.2 * rng.next_f64();
                    let a2 = -0.6 + 1.2 * rng.next_f64();
                    let k = (0.3 * (n as f64).sqrt()).ceil() as i64;
                    first_moment_tail_check(n, a1, a2, k).unwrap().2
                })
                .collect();
            errs.sort_by(f64::total_cmp);
            meds.push(0.5 * (errs[4] + errs[5]));
            // fresh draws per n would break pairing; reseed for identical sets
            rng = SplitMix64::new(61);
        }
        for w in meds.windows(2) {
            let ratio = w[0] / w[1];
            assert!(
                (4.0 / 3.0..=12.0).contains(&ratio),
                "median ratio {ratio} outside 3x of the 1/n rate; {meds:?}"
            );
        }
    }

    #[test]
    fn joint_check_vacuous_and_center() {
        let (exact, _, _) =
            second_moment_joint_check(100, Rational::new(1, 2), [0.0; 4], -200).unwrap();
        assert!((exact - 1.0).abs() < 1e-12);
        let (exact, g, err) =
            second_moment_joint_check(100, Rational::new(1, 2), [0.0; 4], 0).unwrap();
        assert!(err <= 0.05, "exact {exact} g {g}");
    }

    #[test]
    fn joint_check_error_decays() {
        let sets = [
            [0.0, 0.0, 0.0, 0.0],
            [0.3, -0.2, 0.1, 0.4],
            [-0.5, 0.2, 0.3, -0.1],
            [0.2, 0.2, -0.2, -0.2],
            [0.6, -0.4, 0.5, -0.3],
        ];
        for a in sets {
            let e100 = second_moment_joint_check(100, Rational::new(1, 2), a, 3).unwrap().2;
            let e1600 =
                second_moment_joint_check(1600, Rational::new(1, 2), a, 12).unwrap().2;
            assert!(e1600 <= e100, "a={a:?}: err(1600) = {e1600} > err(100) = {e100}");
        }
    }

    #[test]
    fn joint_check_rejects_infeasible_beta() {
        assert!(matches!(
            second_moment_joint_check(100, Rational::new(1, 3), [0.0; 4], 0),
            Err(BinomError::InfeasibleBeta { .. })
        ));
    }

    #[test]
    fn probabilities_normalized_f64_path() {
        let q = pmf_f64(512, 0.5123);
        let total: f64 = q.iter().sum();
        assert!((total - 1.0).abs() < 1e-11);
        assert!(q.iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn csv_emission_shape() {
        let csv = rate_csv(&[100, 400], &[(0.2, -0.1, 0.25)]).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("check,n,"));
        assert!(lines[1].starts_with("tail,100,"));
    }
}
