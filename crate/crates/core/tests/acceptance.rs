//! Acceptance suite: one test per release criterion, each printing a
//! pass/fail line with the measured quantities (run with `--nocapture` to
//! see them on success).

use std::time::Instant;

use fc_core::certify::{self, default_gamma_window};
use fc_core::functional::{self, F2Point};
use fc_core::gaussfn::{self, BetaDerivOrder, EvalMode};
use fc_core::graphsim::{self, MomentMode};
use fc_core::manifest;
use fc_core::report::Verdict;
use fc_core::rint::Interval;
use fc_core::rng::SplitMix64;

fn budget(name: &str, start: Instant, limit_secs: f64) {
    let elapsed = start.elapsed().as_secs_f64();
    println!("ACCEPT {name}: runtime {elapsed:.2}s (budget {limit_secs}s)");
    assert!(elapsed <= limit_secs, "{name} exceeded its runtime budget: {elapsed:.1}s");
}

/// gamma-bounds certifies .24841951 <= gamma_crit <= .24841959, under a
/// minute.
#[test]
fn criterion_1_gamma_bracket() {
    let start = Instant::now();
    let report = certify::certify_gamma_bounds(EvalMode::Certified).unwrap();
    println!("ACCEPT gamma-bracket: verdict {}", report.verdict);
    assert_eq!(report.verdict, Verdict::Certified, "{report:#?}");
    let bracket = report
        .enclosures
        .iter()
        .find(|(n, _)| n == "gamma-bracket")
        .map(|(_, v)| *v)
        .unwrap();
    assert_eq!((bracket.lo(), bracket.hi()), (0.24841951, 0.24841959));
    budget("gamma-bracket", start, 60.0);
}

/// Certified f, df/dbeta and the combined second-derivative expression over
/// beta in [.495,.505], alpha in [-.45,-.44] land inside the published
/// windows, under a minute.
#[test]
fn criterion_2_box_enclosures() {
    let start = Instant::now();
    let gamma = default_gamma_window();
    let beta = Interval::new(0.495, 0.505).unwrap();
    let alpha = Interval::new(-0.45, -0.44).unwrap();
    let f = gaussfn::f_range(gamma, beta, alpha, 1e-9).unwrap();
    println!("ACCEPT box-enclosures: f in {f}");
    assert!(f.lo() >= 0.36544 && f.hi() <= 0.37761, "f outside window: {f}");

    let mut first: Option<Interval> = None;
    let mut combo: Option<Interval> = None;
    let n = 8;
    for i in 0..n {
        for j in 0..n {
            let b = Interval::new(
                0.495 + 0.01 * i as f64 / n as f64,
                0.495 + 0.01 * (i + 1) as f64 / n as f64,
            )
            .unwrap();
            let a = Interval::new(
                -0.45 + 0.01 * j as f64 / n as f64,
                -0.45 + 0.01 * (j + 1) as f64 / n as f64,
            )
            .unwrap();
            let d = gaussfn::f_dbeta_iv(gamma, b, a, BetaDerivOrder::First).unwrap();
            let c = gaussfn::f_dbeta_iv(gamma, b, a, BetaDerivOrder::Combo).unwrap();
            first = Some(first.map_or(d, |x| x.hull(d)));
            combo = Some(combo.map_or(c, |x| x.hull(c)));
        }
    }
    let first = first.unwrap();
    let combo = combo.unwrap();
    println!("ACCEPT box-enclosures: df/dbeta in {first}, combo in {combo}");
    assert!(first.lo() >= 0.2780 && first.hi() <= 0.3110, "df/dbeta outside: {first}");
    assert!(combo.hi() <= 0.630, "combo outside: {combo}");
    budget("box-enclosures", start, 60.0);
}

/// The Hessian certificate holds with a positive margin, under ten minutes.
#[test]
fn criterion_3_hessian_certificate() {
    let start = Instant::now();
    let report = certify::certify_hessian(default_gamma_window(), EvalMode::Certified).unwrap();
    println!("ACCEPT hessian: verdict {}", report.verdict);
    assert_eq!(report.verdict, Verdict::Certified, "{report:#?}");
    let get = |name: &str| {
        report
            .enclosures
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| *v)
            .unwrap()
    };
    let beta2 = get("d2F2/dbeta2");
    let mixed = get("d2F2/dbeta dalpha_i");
    let delta = get("delta");
    println!(
        "ACCEPT hessian: d2/dbeta2 hi {} (<= -2.15), |mixed| {} (<= 2.05), delta {}",
        beta2.hi(),
        mixed.abs().hi(),
        delta.lo()
    );
    assert!(beta2.hi() <= -2.15);
    assert!(mixed.abs().hi() <= 2.05);
    assert!(delta.lo() > 0.0);
    budget("hessian", start, 600.0);
}

/// The designated 50-segment smoke subset certifies in under five minutes.
#[test]
fn criterion_4a_sweep_smoke() {
    let start = Instant::now();
    let plans = manifest::bundled_smoke();
    let report = certify::certify_sweep(
        &plans,
        default_gamma_window(),
        0,
        false,
        "smoke",
        EvalMode::Certified,
    )
    .unwrap();
    println!(
        "ACCEPT sweep-smoke: verdict {} over {} segments, worst {}",
        report.verdict,
        report.segments_checked,
        report.worst_segment.as_deref().unwrap_or("-")
    );
    assert_eq!(report.verdict, Verdict::Certified, "{report:#?}");
    budget("sweep-smoke", start, 300.0);
}

/// The full bundled sweep certifies every segment at or below -1e-5 and the
/// localization sweep below 1e-6. The budget is eight hours at eight
/// workers; the run here uses all available cores.
#[test]
fn criterion_4b_sweep_full() {
    let start = Instant::now();
    let gamma = default_gamma_window();
    let b2 = certify::certify_sweep(
        &manifest::bundled_b2(),
        gamma,
        0,
        false,
        "claim-b2",
        EvalMode::Certified,
    )
    .unwrap();
    println!(
        "ACCEPT sweep-full: claim-b2 {} over {} segments in {:.1}s, worst {}",
        b2.verdict,
        b2.segments_checked,
        b2.wall_seconds,
        b2.worst_segment.as_deref().unwrap_or("-")
    );
    assert_eq!(b2.verdict, Verdict::Certified, "{b2:#?}");
    assert_eq!(b2.segments_checked, 3446);
    let b3 = certify::certify_sweep(
        &manifest::bundled_b3(),
        gamma,
        0,
        false,
        "claim-b3",
        EvalMode::Certified,
    )
    .unwrap();
    println!(
        "ACCEPT sweep-full: claim-b3 {} over {} segments in {:.1}s",
        b3.verdict, b3.segments_checked, b3.wall_seconds
    );
    assert_eq!(b3.verdict, Verdict::Certified, "{b3:#?}");
    assert_eq!(b3.segments_checked, 2000);
    budget("sweep-full", start, 8.0 * 3600.0);
}

/// The moment-functional identities hold to 1e-12 at a hundred random
/// points each.
#[test]
fn criterion_5_identities() {
    let start = Instant::now();
    let mut rng = SplitMix64::new(1001);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let gamma = 0.2 + 0.1 * rng.next_f64();
        let alpha = -rng.next_f64();
        let f1 = functional::f1_eval(gamma, alpha, EvalMode::Fast).unwrap().lo();
        let f2_half = functional::f2_eval(
            &F2Point { beta: 0.5, alpha1: alpha, alpha2: alpha, gamma },
            EvalMode::Fast,
        )
        .unwrap()
        .lo();
        let f2_zero = functional::f2_eval(
            &F2Point { beta: 0.0, alpha1: 0.0, alpha2: alpha, gamma },
            EvalMode::Fast,
        )
        .unwrap()
        .lo();
        worst = worst.max((f2_half - 4.0 * f1).abs()).max((f2_zero - 2.0 * f1).abs());
    }
    println!("ACCEPT identities: worst deviation {worst:.3e}");
    assert!(worst <= 1e-12);
    budget("identities", start, 60.0);
}

/// The tail-approximation error decays by a factor in [2.5, 6] per 4x
/// increase in n across {100, 400, 1600} for ten parameter draws. The
/// absolute constants are not published; this is the property-based
/// substitute.
#[test]
fn criterion_6_appendix_rates() {
    let start = Instant::now();
    let mut rng = SplitMix64::new(1002);
    for draw in 0..10 {
        let a1 = -0.7 + 1.4 * rng.next_f64();
        let a2 = -0.7 + 1.4 * rng.next_f64();
        let kc = 0.08 + 0.3 * rng.next_f64();
        let mut errs = Vec::new();
        for n in [100u64, 400, 1600] {
            let k = (kc * (n as f64).sqrt()).ceil() as i64;
            let (_, _, err) = fc_core::binom::first_moment_tail_check(n, a1, a2, k).unwrap();
            errs.push(err);
        }
        let r1 = errs[0] / errs[1];
        let r2 = errs[1] / errs[2];
        println!(
            "ACCEPT appendix-rates draw {draw}: a1={a1:+.3} a2={a2:+.3} kc={kc:.3} ratios {r1:.2}, {r2:.2}"
        );
        assert!((2.5..=6.0).contains(&r1), "draw {draw}: ratio {r1} outside [2.5, 6]");
        assert!((2.5..=6.0).contains(&r2), "draw {draw}: ratio {r2} outside [2.5, 6]");
    }
    budget("appendix-rates", start, 300.0);
}

/// Exhaustive six-vertex expectation matches the frozen constant, Monte
/// Carlo agrees within four standard errors, and the tiny exact counts
/// hold. The scaled search margin is reported against the asymptotic
/// ceiling for context only.
#[test]
fn criterion_7_tiny_graph_oracle() {
    let start = Instant::now();
    let exact = graphsim::empirical_first_moment(6, 0, MomentMode::ExhaustiveGraphs).unwrap();
    println!(
        "ACCEPT tiny-graph: exhaustive E X_0 (n2=6) = {}/2^15 = {}",
        exact.exact.unwrap().0,
        exact.mean
    );
    assert_eq!(exact.exact, Some((37_160, 15)));
    let mc = graphsim::empirical_first_moment(
        6,
        0,
        MomentMode::MonteCarlo { samples: 100_000, seed: 2024 },
    )
    .unwrap();
    println!("ACCEPT tiny-graph: monte carlo {} +- {}", mc.mean, mc.stderr);
    assert!((mc.mean - exact.mean).abs() <= 4.0 * mc.stderr);

    let mut k4 = graphsim::BisectionState::empty(4);
    for i in 0..4 {
        for j in (i + 1)..4 {
            k4.set_edge(i, j);
        }
    }
    assert_eq!(graphsim::count_friendly_exhaustive(&k4, 0).unwrap(), 0);
    assert_eq!(
        graphsim::count_friendly_exhaustive(&graphsim::BisectionState::empty(4), 0).unwrap(),
        6
    );

    // context only, no pass/fail: scaled best margin against the ceiling
    let g = graphsim::sample_gnp_half(64, 7);
    let (best, _) = graphsim::local_search_max_margin(&g, 5, 99);
    println!(
        "ACCEPT tiny-graph: search margin {best} at n2=64, best/sqrt(n2/2) = {:.4} \
         (asymptotic ceiling ~ {:.5}, context only)",
        best as f64 / 32f64.sqrt(),
        certify::MARGIN_CONSTANT
    );
    budget("tiny-graph", start, 120.0);
}

/// Interval containment fuzz over every operation class with zero
/// violations, plus derivative-versus-finite-difference agreement.
#[test]
fn criterion_8_kernel_soundness() {
    let start = Instant::now();
    let mut rng = SplitMix64::new(1003);
    let samples = 100_000;

    // arithmetic classes
    for i in 0..samples {
        let a_lo = (rng.next_f64() - 0.5) * 20.0;
        let a = Interval::new(a_lo, a_lo + rng.next_f64() * 2.0).unwrap();
        let b_lo = (rng.next_f64() - 0.5) * 20.0;
        let b = Interval::new(b_lo, b_lo + rng.next_f64() * 2.0).unwrap();
        let x = a.lo() + (a.hi() - a.lo()) * rng.next_f64();
        let y = b.lo() + (b.hi() - b.lo()) * rng.next_f64();
        assert!(a.add(b).contains(x + y), "add violation at {i}");
        assert!(a.sub(b).contains(x - y), "sub violation at {i}");
        assert!(a.mul(b).contains(x * y), "mul violation at {i}");
        if b.lo() > 0.1 || b.hi() < -0.1 {
            assert!(a.div(b).unwrap().contains(x / y), "div violation at {i}");
        }
        assert!(a.neg_square().contains(-x * x), "neg_square violation at {i}");
    }

    // elementary classes
    for i in 0..samples {
        let lo = (rng.next_f64() - 0.5) * 30.0;
        let a = Interval::new(lo, lo + rng.next_f64()).unwrap();
        let x = a.lo() + (a.hi() - a.lo()) * rng.next_f64();
        assert!(a.exp().unwrap().contains(x.exp()), "exp violation at {i}");
        let p = Interval::new(lo.abs() + 1e-6, lo.abs() + 1e-6 + rng.next_f64()).unwrap();
        let xp = p.lo() + (p.hi() - p.lo()) * rng.next_f64();
        assert!(p.ln().unwrap().contains(xp.ln()), "ln violation at {i}");
        assert!(p.sqrt().unwrap().contains(xp.sqrt()), "sqrt violation at {i}");
    }

    // normal tail containment against the fast evaluator (independent
    // rational approximation, good to ~1e-13 relative)
    for i in 0..samples {
        let x = (rng.next_f64() - 0.5) * 14.0;
        let t = Interval::point(x).unwrap().normal_tail().unwrap();
        let reference = gaussfn::fast::normal_tail_f64(x);
        assert!(
            t.widen(1e-13 * reference + 1e-300).contains(reference),
            "tail violation at {i}: x={x}"
        );
    }
    println!("ACCEPT kernel-soundness: {samples} samples per class, zero violations");

    // derivative consistency at 100 random interior points
    let h = 1e-5;
    for _ in 0..100 {
        let gamma = 0.2484195;
        let beta = 0.1 + 0.8 * rng.next_f64();
        let alpha = -0.8 + 0.7 * rng.next_f64();
        let p = gaussfn::OrthantParams { gamma, beta, alpha };
        let up = gaussfn::f_eval(
            &gaussfn::OrthantParams { alpha: alpha + h, ..p },
            EvalMode::Fast,
        )
        .unwrap()
        .lo();
        let dn = gaussfn::f_eval(
            &gaussfn::OrthantParams { alpha: alpha - h, ..p },
            EvalMode::Fast,
        )
        .unwrap()
        .lo();
        let d = gaussfn::f_dalpha(&p, EvalMode::Certified).unwrap();
        let fd = (up - dn) / (2.0 * h);
        let tol = 1e-7f64.max(10.0 * d.width());
        assert!((d.mid() - fd).abs() <= tol, "derivative check at beta={beta} alpha={alpha}");
    }
    println!("ACCEPT kernel-soundness: derivative checks at 100 points");
    budget("kernel-soundness", start, 120.0);
}
