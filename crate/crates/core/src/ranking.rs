//! Metric groups, weight grids, weighted totals and rank ranges.
//!
//! Group membership:
//! - coverage = mean(Cov_E, Cov_T)
//! - correctness = mean(Crct_E, Crct_T)
//! - consistency = mean(1 − DupRate, C_DT, C_D, C_R, C_RD, C_LT, C_LF)

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::consistency::ConsistencyScores;
use crate::quality::QualityScores;

/// Totals closer than this are treated as tied.
pub const TIE_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RankError {
    #[error("metric {0} is undefined, so its group cannot be computed")]
    UndefinedMember(&'static str),
    #[error("step {0} does not divide 1 into an integral number of parts")]
    NonIntegralStep(String),
    #[error("invalid step `{0}`")]
    InvalidStep(String),
    #[error("grid dimension must be at least 1")]
    ZeroDimension,
    #[error("weight vector has {got} entries, expected {expected}")]
    WeightLength { expected: usize, got: usize },
    #[error("harmonic mean of an empty list")]
    Empty,
    #[error("no pipelines to rank")]
    NoPipelines,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupScores {
    pub coverage: f64,
    pub correctness: f64,
    pub consistency: f64,
}

impl GroupScores {
    pub fn as_array(&self) -> [f64; 3] {
        [self.coverage, self.correctness, self.consistency]
    }

    /// Rounds each group to `decimals` places, as printed tables do.
    pub fn quantized(&self, decimals: i32) -> GroupScores {
        let f = 10f64.powi(decimals);
        let q = |v: f64| (v * f).round() / f;
        GroupScores {
            coverage: q(self.coverage),
            correctness: q(self.correctness),
            consistency: q(self.consistency),
        }
    }
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Group means from already-computed member values.
///
/// `consistency_members` holds `1 − DupRate` followed by the six
/// compliance scores.
pub fn group_scores_from_values(
    cov: [f64; 2],
    corr: [f64; 2],
    consistency_members: [f64; 7],
) -> GroupScores {
    GroupScores {
        coverage: mean(&cov),
        correctness: mean(&corr),
        consistency: mean(&consistency_members),
    }
}

pub fn group_scores(q: &QualityScores, c: &ConsistencyScores) -> Result<GroupScores, RankError> {
    let need = |name: &'static str, v: Option<f64>| v.ok_or(RankError::UndefinedMember(name));
    let cov = [need("Cov_E", q.cov_e.value())?, need("Cov_T", q.cov_t.value())?];
    let corr = [need("Crct_E", q.corr_e.value())?, need("Crct_T", q.corr_t.value())?];
    let mut members = [1.0 - q.dup_rate_value(); 7];
    let names = ["C_DT", "C_D", "C_R", "C_RD", "C_LT", "C_LF"];
    for (i, (name, v)) in names.into_iter().zip(c.compliance()).enumerate() {
        members[i + 1] = need(name, v)?;
    }
    Ok(group_scores_from_values(cov, corr, members))
}

/// Non-negative weights summing to exactly 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVector {
    pub weights: Vec<Ratio<i64>>,
}

impl WeightVector {
    pub fn new(weights: Vec<Ratio<i64>>) -> Option<Self> {
        let ok = weights.iter().all(|w| *w >= Ratio::from_integer(0))
            && weights.iter().sum::<Ratio<i64>>() == Ratio::from_integer(1);
        ok.then_some(WeightVector { weights })
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.weights
            .iter()
            .map(|w| *w.numer() as f64 / *w.denom() as f64)
            .collect()
    }
}

/// Parses a decimal (`"0.1"`) or fraction (`"1/10"`) step exactly.
pub fn parse_step(s: &str) -> Result<Ratio<i64>, RankError> {
    let bad = || RankError::InvalidStep(s.to_string());
    let s = s.trim();
    let r = if s.contains('/') {
        s.parse::<Ratio<i64>>().map_err(|_| bad())?
    } else {
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.len() > 12 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let scale = 10i64.pow(frac.len() as u32);
        let int: i64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let frac: i64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        Ratio::new(int * scale + frac, scale)
    };
    if r <= Ratio::from_integer(0) || r > Ratio::from_integer(1) {
        return Err(bad());
    }
    Ok(r)
}

/// All `k`-vectors of non-negative multiples of `step` summing to 1, in
/// ascending lexicographic order.
pub fn weight_grid(k: usize, step: Ratio<i64>) -> Result<Vec<WeightVector>, RankError> {
    if k == 0 {
        return Err(RankError::ZeroDimension);
    }
    let parts = step.recip();
    if !parts.is_integer() || step <= Ratio::from_integer(0) {
        return Err(RankError::NonIntegralStep(step.to_string()));
    }
    let m = parts.to_integer();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    compositions(m, k, &mut current, &mut |c| {
        out.push(WeightVector {
            weights: c.iter().map(|&n| step * n).collect(),
        })
    });
    Ok(out)
}

fn compositions(remaining: i64, slots: usize, current: &mut Vec<i64>, emit: &mut dyn FnMut(&[i64])) {
    if slots == 1 {
        current.push(remaining);
        emit(current);
        current.pop();
        return;
    }
    for first in 0..=remaining {
        current.push(first);
        compositions(remaining - first, slots - 1, current, emit);
        current.pop();
    }
}

pub fn total_score(g: &GroupScores, w: &WeightVector) -> Result<f64, RankError> {
    if w.weights.len() != 3 {
        return Err(RankError::WeightLength {
            expected: 3,
            got: w.weights.len(),
        });
    }
    Ok(g.as_array().iter().zip(w.as_f64()).map(|(v, w)| v * w).sum())
}

/// `n / Σ 1/v_i`, or 0 when any value is 0.
pub fn harmonic_mean(values: &[f64]) -> Result<f64, RankError> {
    if values.is_empty() {
        return Err(RankError::Empty);
    }
    if values.contains(&0.0) {
        return Ok(0.0);
    }
    Ok(values.len() as f64 / values.iter().map(|v| 1.0 / v).sum::<f64>())
}

/// Competition ranks ("1224") by descending score.
pub fn competition_ranks(scores: &[f64]) -> Vec<usize> {
    scores
        .iter()
        .map(|s| 1 + scores.iter().filter(|o| **o > *s + TIE_EPSILON).count())
        .collect()
}

/// `(min_rank, max_rank)` per pipeline across all weight vectors.
pub fn rank_ranges(
    pipelines: &[GroupScores],
    grid: &[WeightVector],
) -> Result<Vec<(usize, usize)>, RankError> {
    if pipelines.is_empty() {
        return Err(RankError::NoPipelines);
    }
    let per_vector: Vec<Vec<usize>> = grid
        .par_iter()
        .map(|w| {
            let totals = pipelines
                .iter()
                .map(|g| total_score(g, w))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(competition_ranks(&totals))
        })
        .collect::<Result<_, RankError>>()?;
    let mut ranges = vec![(usize::MAX, 0); pipelines.len()];
    for ranks in per_vector {
        for (range, r) in ranges.iter_mut().zip(ranks) {
            range.0 = range.0.min(r);
            range.1 = range.1.max(r);
        }
    }
    Ok(ranges)
}
