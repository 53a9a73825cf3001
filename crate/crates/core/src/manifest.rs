//! Segment manifests for the grid sweep.
//!
//! A segment is one beta-interval `[eta1, eta2]` with a case tag naming the
//! envelope construction that applies and the bound the certified sweep must
//! reach on it. Endpoints are exact rationals so manifests stay auditable.
//! The wire format is line-oriented text:
//!
//! ```text
//! B2-case6 197999/400000 198000/400000 -1e-5
//! ```

use std::fmt;
use thiserror::Error;

use crate::rint::Interval;

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("segment {0}: {1}")]
    Invariant(String, String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseTag {
    B1Tail,
    B2Case1,
    B2Case2,
    B2Case3,
    B2Case4,
    B2Case5,
    B2Case6,
    B3Local,
}

impl CaseTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseTag::B1Tail => "B1-tail",
            CaseTag::B2Case1 => "B2-case1",
            CaseTag::B2Case2 => "B2-case2",
            CaseTag::B2Case3 => "B2-case3",
            CaseTag::B2Case4 => "B2-case4",
            CaseTag::B2Case5 => "B2-case5",
            CaseTag::B2Case6 => "B2-case6",
            CaseTag::B3Local => "B3-local",
        }
    }

    pub fn parse(s: &str) -> Option<CaseTag> {
        Some(match s {
            "B1-tail" => CaseTag::B1Tail,
            "B2-case1" => CaseTag::B2Case1,
            "B2-case2" => CaseTag::B2Case2,
            "B2-case3" => CaseTag::B2Case3,
            "B2-case4" => CaseTag::B2Case4,
            "B2-case5" => CaseTag::B2Case5,
            "B2-case6" => CaseTag::B2Case6,
            "B3-local" => CaseTag::B3Local,
            _ => return None,
        })
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Exact nonnegative rational.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    pub num: u64,
    pub den: u64,
}

impl Rational {
    pub fn new(num: u64, den: u64) -> Rational {
        debug_assert!(den != 0);
        Rational { num, den }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn to_interval(self) -> Interval {
        Interval::from_rational(self.num, self.den).expect("den != 0")
    }

    /// Exact comparison by cross multiplication.
    pub fn cmp_exact(self, other: Rational) -> std::cmp::Ordering {
        let a = self.num as u128 * other.den as u128;
        let b = other.num as u128 * self.den as u128;
        a.cmp(&b)
    }

    /// Exact midpoint, reduced.
    pub fn midpoint(self, other: Rational) -> Rational {
        let num = self.num as u128 * other.den as u128 + other.num as u128 * self.den as u128;
        let den = 2u128 * self.den as u128 * other.den as u128;
        let g = gcd_u128(num, den);
        Rational { num: (num / g) as u64, den: (den / g) as u64 }
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// One segment of the sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentPlan {
    pub case_tag: CaseTag,
    pub eta1: Rational,
    pub eta2: Rational,
    /// Required upper bound on the segment's certified supremum.
    pub target: f64,
}

impl SegmentPlan {
    pub fn id(&self) -> String {
        format!("{} [{}, {}]", self.case_tag, self.eta1, self.eta2)
    }

    /// Manifest invariants: `0 <= eta1 < eta2 <= 1/2` (`<= .505` for
    /// B3-local), negative target except for B3-local and B1-tail.
    pub fn validate(&self) -> Result<(), ManifestError> {
        use std::cmp::Ordering;
        let err = |msg: &str| Err(ManifestError::Invariant(self.id(), msg.to_string()));
        if self.eta1.den == 0 || self.eta2.den == 0 {
            return err("zero denominator");
        }
        if self.eta1.cmp_exact(self.eta2) != Ordering::Less {
            return err("eta1 must be strictly below eta2");
        }
        let cap = match self.case_tag {
            CaseTag::B3Local => Rational::new(505, 1000),
            _ => Rational::new(1, 2),
        };
        if self.eta2.cmp_exact(cap) == Ordering::Greater {
            return err("eta2 exceeds the case cap");
        }
        match self.case_tag {
            CaseTag::B3Local | CaseTag::B1Tail => {}
            _ => {
                if self.target >= 0.0 {
                    return err("target must be negative for B2 cases");
                }
            }
        }
        if self.case_tag == CaseTag::B1Tail && self.eta1.num != 0 {
            return err("B1-tail segments start at 0");
        }
        if self.case_tag != CaseTag::B1Tail && self.eta1.num == 0 {
            return err("eta1 = 0 is only valid for B1-tail");
        }
        Ok(())
    }
}

pub fn parse_manifest(text: &str) -> Result<Vec<SegmentPlan>, ManifestError> {
    let mut plans = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let bad = |msg: &str| ManifestError::Parse { line: idx + 1, msg: msg.to_string() };
        let tag = parts
            .next()
            .and_then(CaseTag::parse)
            .ok_or_else(|| bad("unknown case tag"))?;
        let eta1 = parse_rational(parts.next().ok_or_else(|| bad("missing eta1"))?)
            .ok_or_else(|| bad("bad eta1 rational"))?;
        let eta2 = parse_rational(parts.next().ok_or_else(|| bad("missing eta2"))?)
            .ok_or_else(|| bad("bad eta2 rational"))?;
        let target: f64 = parts
            .next()
            .ok_or_else(|| bad("missing target"))?
            .parse()
            .map_err(|_| bad("bad target"))?;
        if parts.next().is_some() {
            return Err(bad("trailing tokens"));
        }
        let plan = SegmentPlan { case_tag: tag, eta1, eta2, target };
        plan.validate()?;
        plans.push(plan);
    }
    Ok(plans)
}

fn parse_rational(s: &str) -> Option<Rational> {
    let (n, d) = s.split_once('/')?;
    let num = n.parse().ok()?;
    let den: u64 = d.parse().ok()?;
    if den == 0 {
        return None;
    }
    Some(Rational { num, den })
}

pub fn write_manifest(plans: &[SegmentPlan]) -> String {
    let mut out = String::new();
    for p in plans {
        out.push_str(&format!("{} {} {} {:e}\n", p.case_tag, p.eta1, p.eta2, p.target));
    }
    out
}

fn push_range(plans: &mut Vec<SegmentPlan>, tag: CaseTag, den: u64, j0: u64, j1: u64, target: f64) {
    for j in j0..=j1 {
        plans.push(SegmentPlan {
            case_tag: tag,
            eta1: Rational::new(j, den),
            eta2: Rational::new(j + 1, den),
            target,
        });
    }
}

/// The bundled sweep covering `beta in [.001, .5]` (cases 3-5 run to 1/2,
/// case 6 to .495), with each case's published segment widths.
pub fn bundled_b2() -> Vec<SegmentPlan> {
    let mut p = Vec::with_capacity(3_500);
    push_range(&mut p, CaseTag::B2Case1, 10_000, 10, 49, -1e-3);
    push_range(&mut p, CaseTag::B2Case2, 1_000, 1, 4, -1e-2);
    for tag in [CaseTag::B2Case3, CaseTag::B2Case4, CaseTag::B2Case5] {
        push_range(&mut p, tag, 1_000, 5, 19, -1e-3);
        push_range(&mut p, tag, 100, 2, 49, -1e-3);
    }
    let t6 = -1e-5;
    push_range(&mut p, CaseTag::B2Case6, 1_000, 5, 19, t6);
    push_range(&mut p, CaseTag::B2Case6, 100, 2, 24, t6);
    push_range(&mut p, CaseTag::B2Case6, 1_000, 250, 424, t6);
    push_range(&mut p, CaseTag::B2Case6, 10_000, 4_250, 4_724, t6);
    push_range(&mut p, CaseTag::B2Case6, 50_000, 23_625, 24_299, t6);
    push_range(&mut p, CaseTag::B2Case6, 100_000, 48_600, 48_799, t6);
    push_range(&mut p, CaseTag::B2Case6, 200_000, 97_600, 98_749, t6);
    push_range(&mut p, CaseTag::B2Case6, 400_000, 197_500, 197_999, t6);
    p
}

/// The localization sweep for `beta in [.495, .5]`.
pub fn bundled_b3() -> Vec<SegmentPlan> {
    let mut p = Vec::with_capacity(2_000);
    push_range(&mut p, CaseTag::B3Local, 400_000, 198_000, 199_999, 1e-6);
    p
}

/// Deterministic 50-segment smoke subset: 40 spread across the B2 cases and
/// 10 across the localization sweep.
pub fn bundled_smoke() -> Vec<SegmentPlan> {
    let b2 = bundled_b2();
    let b3 = bundled_b3();
    let mut out = Vec::with_capacity(50);
    for i in 0..40 {
        out.push(b2[i * b2.len() / 40]);
    }
    for i in 0..10 {
        out.push(b3[i * b3.len() / 10]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_files_match_builtin_schedules() {
        let pairs = [
            (include_str!("../data/manifest_b2.txt"), bundled_b2()),
            (include_str!("../data/manifest_b3.txt"), bundled_b3()),
            (include_str!("../data/manifest_smoke.txt"), bundled_smoke()),
        ];
        for (text, plans) in pairs {
            assert_eq!(parse_manifest(text).unwrap(), plans);
            assert_eq!(text, write_manifest(&plans));
        }
    }

    #[test]
    fn bundled_counts_and_coverage() {
        let b2 = bundled_b2();
        assert_eq!(
            b2.len(),
            40 + 4 + 3 * (15 + 48) + (15 + 23 + 175 + 475 + 675 + 200 + 1150 + 500)
        );
        for p in &b2 {
            p.validate().unwrap();
        }
        // case 6 covers [.005, .495] without gaps
        let mut sixes: Vec<_> = b2.iter().filter(|p| p.case_tag == CaseTag::B2Case6).collect();
        sixes.sort_by(|a, b| a.eta1.cmp_exact(b.eta1));
        assert_eq!(sixes.first().unwrap().eta1, Rational::new(5, 1000));
        assert_eq!(sixes.last().unwrap().eta2, Rational::new(198_000, 400_000));
        for w in sixes.windows(2) {
            assert_eq!(w[0].eta2.cmp_exact(w[1].eta1), std::cmp::Ordering::Equal);
        }
        let b3 = bundled_b3();
        assert_eq!(b3.len(), 2_000);
        assert_eq!(b3.first().unwrap().eta1, Rational::new(198_000, 400_000));
        assert_eq!(b3.last().unwrap().eta2, Rational::new(200_000, 400_000));
        assert_eq!(bundled_smoke().len(), 50);
    }

    #[test]
    fn roundtrip_through_text() {
        let plans = bundled_smoke();
        let text = write_manifest(&plans);
        let back = parse_manifest(&text).unwrap();
        assert_eq!(plans, back);
    }

    #[test]
    fn parse_rejects_invalid() {
        assert!(parse_manifest("B9-case1 1/10 2/10 -1e-3").is_err());
        assert!(parse_manifest("B2-case1 2/10 1/10 -1e-3").is_err());
        assert!(parse_manifest("B2-case1 1/10 2/10 1e-3").is_err());
        assert!(parse_manifest("B2-case1 1/10 2/10").is_err());
        assert!(parse_manifest("B2-case6 300000/400000 300001/400000 -1e-5").is_err());
        // comments and blanks pass through
        let ok = parse_manifest("# header\n\nB2-case6 197999/400000 198000/400000 -1e-5\n").unwrap();
        assert_eq!(ok.len(), 1);
    }

    #[test]
    fn rational_midpoint_is_exact() {
        let a = Rational::new(1, 1000);
        let b = Rational::new(2, 1000);
        let m = a.midpoint(b);
        assert_eq!(m, Rational::new(3, 2000));
        assert_eq!(m.cmp_exact(Rational::new(15, 10_000)), std::cmp::Ordering::Equal);
    }
}
