//! Task predicates, quality factors, and suite-level aggregation.
//!
//! All scores are exact rationals; floating point appears only in the
//! serialized `value` convenience field. Capability counts generators of
//! codes solved; quality discounts each solved code by its task-specific
//! quality factor in [0, 1].

use crate::circuit::CostTuple;
use crate::code::LoadedSuite;
use crate::error::{Error, Result};
use crate::tableau::StabReport;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::str::FromStr;

/// Exact rational score. Serialized through [`score_serde`] as numerator
/// and denominator strings plus an approximate float.
pub type Score = BigRational;

pub fn score_int(n: u64) -> Score {
    BigRational::from_integer(BigInt::from(n))
}

pub fn score_ratio(num: i64, den: i64) -> Score {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn score_to_f64(s: &Score) -> f64 {
    s.to_f64().unwrap_or(f64::NAN)
}

pub mod score_serde {
    use super::*;

    #[derive(Serialize, Deserialize)]
    struct Repr {
        num: String,
        den: String,
        value: f64,
    }

    pub fn serialize<S: serde::Serializer>(
        score: &Score,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        Repr {
            num: score.numer().to_string(),
            den: score.denom().to_string(),
            value: score_to_f64(score),
        }
        .serialize(serializer)
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Score, D::Error> {
        let repr = Repr::deserialize(deserializer)?;
        let num = BigInt::from_str(&repr.num).map_err(serde::de::Error::custom)?;
        let den = BigInt::from_str(&repr.den).map_err(serde::de::Error::custom)?;
        if den.is_zero() {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(BigRational::new(num, den))
    }
}

pub mod score_serde_opt {
    use super::*;

    #[derive(Serialize, Deserialize)]
    struct Repr {
        num: String,
        den: String,
        value: f64,
    }

    pub fn serialize<S: serde::Serializer>(
        score: &Option<Score>,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        score
            .as_ref()
            .map(|s| Repr {
                num: s.numer().to_string(),
                den: s.denom().to_string(),
                value: score_to_f64(s),
            })
            .serialize(serializer)
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Option<Score>, D::Error> {
        let repr = Option::<Repr>::deserialize(deserializer)?;
        repr.map(|r| {
            let num = BigInt::from_str(&r.num).map_err(serde::de::Error::custom)?;
            let den = BigInt::from_str(&r.den).map_err(serde::de::Error::custom)?;
            if den.is_zero() {
                return Err(serde::de::Error::custom("zero denominator"));
            }
            Ok(BigRational::new(num, den))
        })
        .transpose()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Task {
    B1,
    B2,
    B3,
}

impl std::fmt::Display for Task {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Task::B1 => "B1",
            Task::B2 => "B2",
            Task::B3 => "B3",
        })
    }
}

impl FromStr for Task {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_uppercase().as_str() {
            "B1" => Ok(Task::B1),
            "B2" => Ok(Task::B2),
            "B3" => Ok(Task::B3),
            other => Err(format!("unknown task {other:?}, expected B1, B2, or B3")),
        }
    }
}

/// Outcome of one code instance under one task, after best-of-attempts
/// selection. A failed instance contributes nothing to either sum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceResult {
    pub code_id: String,
    pub task: Task,
    pub success: bool,
    #[serde(with = "score_serde")]
    pub quality: Score,
    pub satisfied_generators: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub candidate_cost: Option<CostTuple>,
    #[serde(with = "score_serde_opt", skip_serializing_if = "Option::is_none", default)]
    pub ft: Option<Score>,
    pub attempts_used: u32,
}

/// Preparation succeeds iff every generator passes; quality is fixed at 1.
pub fn b1_success(report: &StabReport) -> (bool, Score) {
    (report.valid, Score::one())
}

/// Strict lexicographic cost improvement; equality is not an improvement.
pub fn b2_improvement(candidate: &CostTuple, baseline: &CostTuple) -> bool {
    candidate < baseline
}

fn clamped_gain(baseline: u64, candidate: u64) -> Score {
    if baseline == 0 {
        return Score::zero();
    }
    let delta = BigRational::new(
        BigInt::from(baseline) - BigInt::from(candidate),
        BigInt::from(baseline),
    );
    if delta.is_negative() {
        Score::zero()
    } else if delta > Score::one() {
        Score::one()
    } else {
        delta
    }
}

/// Weighted relative gain, 3:1 in favor of two-qubit-gate count:
/// q = 0.75 * max(0, (bG - oG)/bG) + 0.25 * max(0, (bD - oD)/bD),
/// each term clamped to [0, 1]. A zero baseline metric contributes 0.
pub fn b2_quality(baseline: &CostTuple, candidate: &CostTuple) -> Score {
    let g = clamped_gain(baseline.g2q, candidate.g2q);
    let d = clamped_gain(baseline.depth, candidate.depth);
    score_ratio(3, 4) * g + score_ratio(1, 4) * d
}

/// A flagged candidate is valid iff it still preserves every generator
/// and strictly raises the fault-tolerance score; its quality is its own
/// FT score.
pub fn b3_validity_and_quality(
    base_ft: &Score,
    candidate_ft: &Score,
    stab_report: &StabReport,
) -> (bool, Score) {
    (
        stab_report.valid && candidate_ft > base_ft,
        candidate_ft.clone(),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeBreakdown {
    pub code_id: String,
    pub task: Task,
    /// Generator count of the code: the instance's score weight.
    pub weight: u32,
    pub success: bool,
    #[serde(with = "score_serde")]
    pub quality: Score,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BucketBreakdown {
    /// Inclusive lower and upper generator-count bounds of the bucket.
    pub lo: u32,
    pub hi: u32,
    /// Suite codes whose weight falls in the bucket.
    pub codes: usize,
    pub successes: usize,
    pub s_cap: u64,
    #[serde(with = "score_serde")]
    pub s_qual: Score,
    /// Ceiling: total weight of the bucket's suite codes.
    pub k_max: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    pub s_cap: u64,
    #[serde(with = "score_serde")]
    pub s_qual: Score,
    /// Ceiling: total generator count of the whole suite.
    pub k_max: u64,
    pub per_code: Vec<CodeBreakdown>,
    pub buckets: Vec<BucketBreakdown>,
}

/// Sum capability and quality over a result set against a loaded suite.
/// Each (code, task) pair may appear at most once; codes must exist in
/// the suite. Buckets split the suite's generator-count range into
/// `num_buckets` equal-width bands (0 disables bucketing).
pub fn aggregate(
    results: &[InstanceResult],
    suite: &LoadedSuite,
    num_buckets: usize,
) -> Result<ScoreReport> {
    let mut seen = std::collections::BTreeSet::new();
    let mut s_cap: u64 = 0;
    let mut s_qual = Score::zero();
    let mut per_code = Vec::with_capacity(results.len());
    for r in results {
        let code = suite
            .instance(&r.code_id)
            .ok_or_else(|| Error::UnknownCodeId(r.code_id.clone()))?;
        if !seen.insert((r.code_id.clone(), r.task)) {
            return Err(Error::DuplicateCodeId(format!("{} ({})", r.code_id, r.task)));
        }
        let weight = code.generator_count();
        if r.success {
            s_cap += weight as u64;
            s_qual += r.quality.clone() * score_int(weight as u64);
        }
        per_code.push(CodeBreakdown {
            code_id: r.code_id.clone(),
            task: r.task,
            weight,
            success: r.success,
            quality: r.quality.clone(),
        });
    }
    let k_max = suite.total_generators;

    let mut buckets = Vec::new();
    if num_buckets > 0 && !suite.instances.is_empty() {
        let lo = suite
            .instances
            .iter()
            .map(|c| c.generator_count())
            .min()
            .unwrap();
        let hi = suite
            .instances
            .iter()
            .map(|c| c.generator_count())
            .max()
            .unwrap();
        let width = ((hi - lo) as usize / num_buckets + 1) as u32;
        for b in 0..num_buckets as u32 {
            let b_lo = lo + b * width;
            let b_hi = (b_lo + width - 1).min(hi);
            if b_lo > hi {
                break;
            }
            let mut bucket = BucketBreakdown {
                lo: b_lo,
                hi: b_hi,
                codes: 0,
                successes: 0,
                s_cap: 0,
                s_qual: Score::zero(),
                k_max: 0,
            };
            for code in &suite.instances {
                let w = code.generator_count();
                if w >= b_lo && w <= b_hi {
                    bucket.codes += 1;
                    bucket.k_max += w as u64;
                }
            }
            for r in results {
                let code = suite.instance(&r.code_id).unwrap();
                let w = code.generator_count();
                if w >= b_lo && w <= b_hi && r.success {
                    bucket.successes += 1;
                    bucket.s_cap += w as u64;
                    bucket.s_qual += r.quality.clone() * score_int(w as u64);
                }
            }
            buckets.push(bucket);
        }
    }

    Ok(ScoreReport {
        s_cap,
        s_qual,
        k_max,
        per_code,
        buckets,
    })
}
