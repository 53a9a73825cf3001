//! Command-line orchestration: argument parsing, dispatch, report
//! persistence and the self-test.
//!
//! Exit codes: 0 certified/success, 1 failed, 2 not reached, 64 usage
//! error. Reports are written as JSON under the output directory (flag
//! `--out`, overridden by `FC_OUT`); simulation and oracle data go to CSV
//! files next to them.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

use crate::certify;
use crate::gaussfn::EvalMode;
use crate::graphsim::{self, MomentMode};
use crate::manifest::{self, Rational, SegmentPlan};
use crate::report::{self, ClaimReport};
use crate::rint::Interval;

pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(
    name = "fc",
    about = "Certified verification toolkit for the critical friendly-bisection constant",
    version
)]
struct FcArgs {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Fast,
    Certified,
}

impl From<ModeArg> for EvalMode {
    fn from(m: ModeArg) -> EvalMode {
        match m {
            ModeArg::Fast => EvalMode::Fast,
            ModeArg::Certified => EvalMode::Certified,
        }
    }
}

#[derive(Args, Debug, Clone)]
struct CommonOpts {
    /// Gamma value as a decimal string; widened to an interval window.
    #[arg(long)]
    gamma: Option<String>,
    /// Evaluation mode. Only certified runs can produce certificates.
    #[arg(long, value_enum, default_value = "certified")]
    mode: ModeArg,
    /// Output directory for reports (env FC_OUT overrides).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct SweepOpts {
    /// `bundled` or a manifest file path.
    #[arg(long, default_value = "bundled")]
    manifest: String,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    parallelism: usize,
    /// Bisect segments that miss their target, up to four levels.
    #[arg(long)]
    refine: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certify the two-sided bracket on the critical constant.
    GammaBounds(CommonOpts),
    /// Certify the boundary segment (overlap in [0, .001]).
    ClaimB1(CommonOpts),
    /// Certify the bulk sweep (overlap in [.001, .5]).
    ClaimB2 {
        #[command(flatten)]
        common: CommonOpts,
        #[command(flatten)]
        sweep: SweepOpts,
    },
    /// Certify the localization sweep (overlap in [.495, .5]).
    ClaimB3 {
        #[command(flatten)]
        common: CommonOpts,
        #[command(flatten)]
        sweep: SweepOpts,
    },
    /// Certify the Hessian negative-definiteness box.
    ClaimB4(CommonOpts),
    /// Run all four claims and assemble the overall verdict.
    Assumption {
        #[command(flatten)]
        common: CommonOpts,
        #[command(flatten)]
        sweep: SweepOpts,
    },
    /// Finite-n binomial oracles versus their Gaussian approximations.
    OracleBinomial {
        #[arg(long, value_enum, default_value = "rates")]
        check: OracleCheck,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Trial count scaling for the joint check.
        #[arg(long, default_value_t = 400)]
        n: u64,
    },
    /// Random-graph laboratory: exhaustive counts, Monte Carlo, search.
    Simulate {
        #[arg(long)]
        n2: usize,
        #[arg(long = "H", default_value_t = 0)]
        h: i32,
        #[arg(long, value_enum, default_value = "exhaustive")]
        mode: SimMode,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fast subset of every module's invariant suite.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OracleCheck {
    Rates,
    Tail,
    Joint,
    Middle,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SimMode {
    Exhaustive,
    Montecarlo,
    Search,
}

fn out_dir(cli: Option<PathBuf>) -> PathBuf {
    std::env::var_os("FC_OUT")
        .map(PathBuf::from)
        .or(cli)
        .unwrap_or_else(|| PathBuf::from("fc-out"))
}

fn gamma_window(opt: &Option<String>) -> Result<Interval, String> {
    match opt {
        None => Ok(certify::default_gamma_window()),
        Some(s) => {
            let v: f64 = s.parse().map_err(|_| format!("bad --gamma value: {s}"))?;
            Ok(certify::gamma_window_around(v))
        }
    }
}

fn load_manifest(spec: &str, claim: &str) -> Result<Vec<SegmentPlan>, String> {
    if spec == "bundled" {
        return Ok(match claim {
            "claim-b2" => manifest::bundled_b2(),
            "claim-b3" => manifest::bundled_b3(),
            _ => manifest::bundled_smoke(),
        });
    }
    if spec == "smoke" {
        return Ok(manifest::bundled_smoke());
    }
    let text = std::fs::read_to_string(spec).map_err(|e| format!("reading {spec}: {e}"))?;
    manifest::parse_manifest(&text).map_err(|e| e.to_string())
}

fn emit(report: &ClaimReport, dir: &std::path::Path) -> i32 {
    match report::write_report(report, dir) {
        Ok(path) => println!("{} [{}]", report.one_line(), path.display()),
        Err(e) => {
            eprintln!("warning: could not persist report: {e}");
            println!("{}", report.one_line());
        }
    }
    report.verdict.exit_code()
}

/// Parse and run; returns the process exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match FcArgs::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match run(args.command) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
    }
}

fn run(cmd: Command) -> Result<i32, String> {
    match cmd {
        Command::GammaBounds(common) => {
            let report =
                certify::certify_gamma_bounds(common.mode.into()).map_err(|e| e.to_string())?;
            Ok(emit(&report, &out_dir(common.out)))
        }
        Command::ClaimB1(common) => {
            let gamma = gamma_window(&common.gamma)?;
            let report = certify::certify_initial_interval(gamma, common.mode.into())
                .map_err(|e| e.to_string())?;
            Ok(emit(&report, &out_dir(common.out)))
        }
        Command::ClaimB2 { common, sweep } => run_sweep("claim-b2", common, sweep),
        Command::ClaimB3 { common, sweep } => run_sweep("claim-b3", common, sweep),
        Command::ClaimB4(common) => {
            let gamma = gamma_window(&common.gamma)?;
            let report = certify::certify_hessian(gamma, common.mode.into())
                .map_err(|e| e.to_string())?;
            Ok(emit(&report, &out_dir(common.out)))
        }
        Command::Assumption { common, sweep } => {
            let gamma = gamma_window(&common.gamma)?;
            let mode: EvalMode = common.mode.into();
            let dir = out_dir(common.out.clone());
            let mut reports = Vec::new();
            let b1 =
                certify::certify_initial_interval(gamma, mode).map_err(|e| e.to_string())?;
            emit(&b1, &dir);
            reports.push(b1);
            for claim in ["claim-b2", "claim-b3"] {
                let plans = load_manifest(&sweep.manifest, claim)?;
                let r = certify::certify_sweep(
                    &plans,
                    gamma,
                    sweep.parallelism,
                    sweep.refine,
                    claim,
                    mode,
                )
                .map_err(|e| e.to_string())?;
                emit(&r, &dir);
                reports.push(r);
            }
            let b4 = certify::certify_hessian(gamma, mode).map_err(|e| e.to_string())?;
            emit(&b4, &dir);
            reports.push(b4);
            let overall =
                certify::assumption_report(&reports, gamma).map_err(|e| e.to_string())?;
            Ok(emit(&overall, &dir))
        }
        Command::OracleBinomial { check, out, n } => run_oracle(check, out, n),
        Command::Simulate { n2, h, mode, samples, seed, restarts, out } => {
            run_simulate(n2, h, mode, samples, seed, restarts, out)
        }
        Command::Selftest { seed } => Ok(selftest(seed)),
    }
}

fn run_sweep(claim: &str, common: CommonOpts, sweep: SweepOpts) -> Result<i32, String> {
    let gamma = gamma_window(&common.gamma)?;
    let plans = load_manifest(&sweep.manifest, claim)?;
    let report = certify::certify_sweep(
        &plans,
        gamma,
        sweep.parallelism,
        sweep.refine,
        claim,
        common.mode.into(),
    )
    .map_err(|e| e.to_string())?;
    Ok(emit(&report, &out_dir(common.out)))
}

fn run_oracle(check: OracleCheck, out: Option<PathBuf>, n: u64) -> Result<i32, String> {
    let dir = out_dir(out);
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    match check {
        OracleCheck::Rates | OracleCheck::Tail => {
            let sets = [(0.2, -0.1, 0.25), (0.5, 0.3, 0.15), (-0.4, 0.1, 0.3)];
            let csv = crate::binom::rate_csv(&[100, 400, 1600], &sets)
                .map_err(|e| e.to_string())?;
            let path = dir.join("oracle-tail-rates.csv");
            std::fs::write(&path, &csv).map_err(|e| e.to_string())?;
            println!("oracle-binomial tail rates: wrote {}", path.display());
            Ok(0)
        }
        OracleCheck::Joint => {
            let mut rows = String::from("n,a1,a2,a3,a4,Gamma,exact,gaussian,err\n");
            let n = n.clamp(16, crate::binom::MAX_EXACT_N);
            let k = n / 2;
            for (a, g) in [([0.0; 4], 0i64), ([0.3, -0.2, 0.1, 0.4], 3), ([0.2; 4], -2)] {
                let (exact, gauss, err) = crate::binom::second_moment_joint_check(
                    n,
                    Rational::new(k, n),
                    a,
                    g,
                )
                .map_err(|e| e.to_string())?;
                rows.push_str(&format!(
                    "{n},{},{},{},{},{g},{exact},{gauss},{err}\n",
                    a[0], a[1], a[2], a[3]
                ));
            }
            let path = dir.join("oracle-joint.csv");
            std::fs::write(&path, &rows).map_err(|e| e.to_string())?;
            println!("oracle-binomial joint: wrote {}", path.display());
            Ok(0)
        }
        OracleCheck::Middle => {
            let mut rows = String::from("n,t,exact,gaussian_model\n");
            for (nn, t) in [(100u64, 5i64), (400, 10), (1600, 20)] {
                let exact = crate::binom::exact_middle_ratio(nn, t)
                    .map_err(|e| e.to_string())?;
                let model = (-2.0 * (t * t) as f64 / nn as f64
                    - 4.0 * (t as f64).powi(4) / (3.0 * (nn as f64).powi(3)))
                .exp();
                rows.push_str(&format!(
                    "{nn},{t},{},{model}\n",
                    num_traits::ToPrimitive::to_f64(&exact).unwrap_or(f64::NAN)
                ));
            }
            let path = dir.join("oracle-middle.csv");
            std::fs::write(&path, &rows).map_err(|e| e.to_string())?;
            println!("oracle-binomial middle ratios: wrote {}", path.display());
            Ok(0)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn run_simulate(
    n2: usize,
    h: i32,
    mode: SimMode,
    samples: u64,
    seed: u64,
    restarts: usize,
    out: Option<PathBuf>,
) -> Result<i32, String> {
    let dir = out_dir(out);
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let rows = match mode {
        SimMode::Exhaustive => {
            let m = graphsim::empirical_first_moment(n2, h, MomentMode::ExhaustiveGraphs)
                .map_err(|e| e.to_string())?;
            let (num, bits) = m.exact.expect("exhaustive mode");
            println!("simulate exhaustive: E X_{h} at n2={n2} is {num}/2^{bits} = {}", m.mean);
            vec![(seed, n2, h, m.mean)]
        }
        SimMode::Montecarlo => {
            let m = graphsim::empirical_first_moment(
                n2,
                h,
                MomentMode::MonteCarlo { samples, seed },
            )
            .map_err(|e| e.to_string())?;
            println!(
                "simulate monte-carlo: E X_{h} at n2={n2} is {} +- {} ({samples} samples)",
                m.mean, m.stderr
            );
            vec![(seed, n2, h, m.mean)]
        }
        SimMode::Search => {
            let g = graphsim::sample_gnp_half(n2, seed);
            let (best, _) = graphsim::local_search_max_margin(&g, restarts, seed ^ 0x5EED);
            let scaled = best as f64 / (n2 as f64 / 2.0).sqrt();
            println!(
                "simulate search: best margin {best} at n2={n2}; best/sqrt(n2/2) = {scaled:.5} \
                 (asymptotic ceiling ~ {:.5}, context only)",
                certify::MARGIN_CONSTANT
            );
            vec![(seed, n2, best, scaled)]
        }
    };
    let csv = graphsim::simulation_csv(&rows);
    let path = dir.join("simulate.csv");
    std::fs::write(&path, &csv).map_err(|e| e.to_string())?;
    println!("wrote {}", path.display());
    Ok(0)
}

/// Environment hook for the injected-fault path of the self-test.
pub const FAULT_ENV: &str = "FC_SELFTEST_FAULT";

fn selftest(seed: u64) -> i32 {
    use crate::rng::SplitMix64;
    let fault = std::env::var_os(FAULT_ENV).is_some();
    let mut failures: Vec<String> = Vec::new();
    let mut rng = SplitMix64::new(seed);

    // interval containment fuzz (fast subset)
    let mut worst = String::new();
    let mut contained = true;
    for i in 0..20_000 {
        let a_lo = (rng.next_f64() - 0.5) * 10.0;
        let a = Interval::new(a_lo, a_lo + rng.next_f64()).unwrap();
        let b_lo = (rng.next_f64() - 0.5) * 10.0;
        let b = Interval::new(b_lo, b_lo + rng.next_f64()).unwrap();
        let x = a.lo() + (a.hi() - a.lo()) * rng.next_f64();
        let y = b.lo() + (b.hi() - b.lo()) * rng.next_f64();
        let prod = if fault {
            // injected rounding fault: a deliberately inward-rounded product
            Interval::new(
                (x * y).max(a.lo() * b.lo()) + 1e-12,
                (x * y).max(a.lo() * b.lo()) + 1e-12,
            )
            .unwrap()
        } else {
            a.mul(b)
        };
        if !prod.contains(x * y) {
            contained = false;
            worst = format!("mul containment failed at sample {i}: {x} * {y} not in {prod}");
            break;
        }
    }
    if !contained {
        failures.push(worst);
    }

    // normal tail identities
    for i in 0..200 {
        let x = -6.0 + 12.0 * (i as f64) / 199.0;
        let s = Interval::point(x)
            .unwrap()
            .normal_tail()
            .unwrap()
            .add(Interval::point(-x).unwrap().normal_tail().unwrap());
        if !s.contains(1.0) {
            failures.push(format!("normal tail reflection violated at {x}"));
            break;
        }
    }

    // functional identity F2(1/2, a, a) = 4 F1(a)
    for _ in 0..50 {
        let alpha = -rng.next_f64();
        let f2 = crate::functional::f2_eval(
            &crate::functional::F2Point {
                beta: 0.5,
                alpha1: alpha,
                alpha2: alpha,
                gamma: 0.2484195,
            },
            EvalMode::Fast,
        )
        .unwrap()
        .lo();
        let f1 = crate::functional::f1_eval(0.2484195, alpha, EvalMode::Fast).unwrap().lo();
        if (f2 - 4.0 * f1).abs() > 1e-12 {
            failures.push(format!("moment identity violated at alpha={alpha}"));
            break;
        }
    }

    // graph margins bookkeeping
    let mut g = graphsim::sample_gnp_half(16, seed);
    for _ in 0..100 {
        let u = (rng.below(8)) as usize;
        let v = 8 + rng.below(8) as usize;
        if g.part_of[u] != g.part_of[v] {
            g.swap(u, v);
        }
    }
    let mut fresh = g.clone();
    fresh.recompute_margins();
    if g.margins != fresh.margins {
        failures.push("incremental margins diverged from recomputation".into());
    }

    // binomial oracle normalization
    let q = crate::binom::first_moment_tail_check(100, 0.0, 0.0, -100).unwrap();
    if (q.0 - 1.0).abs() > 1e-10 {
        failures.push("binomial tail normalization failed".into());
    }

    if failures.is_empty() {
        println!("selftest: ok (seed {seed})");
        0
    } else {
        for f in &failures {
            println!("selftest: FAIL {f}");
        }
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_error_exit_code() {
        assert_eq!(dispatch(["fc", "no-such-command"]), EXIT_USAGE);
        assert_eq!(dispatch(["fc", "simulate"]), EXIT_USAGE); // missing --n2
    }

    #[test]
    fn help_is_not_an_error() {
        assert_eq!(dispatch(["fc", "--help"]), 0);
    }
}
