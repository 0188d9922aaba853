//! Catalog of priority functions.
//!
//! Every heuristic maps `(item, candidate remaining capacities, capacity)` to
//! one score per candidate; the harness picks the highest score and breaks
//! ties by lowest index.
//!
//! [`HeuristicSpec`] names a heuristic with its parameters and parses from a
//! compact grammar:
//!
//! ```text
//! firstfit | bestfit | worstfit | c12 | smooth-c12 | c14 | eoh
//! ab-ff(a=<int>,b=<int>[,variant=faithful|verbatim])
//! ab-bf(...)  ab-wf(...)
//! ```
//!
//! `ff`, `bf`, `wf`, `first-fit`, `best-fit`, `worst-fit` and `smooth_c12`
//! are accepted as aliases. [`HeuristicSpec`]'s `Display` prints the
//! canonical form, which parses back to the same value.

mod baseline;
mod evolved;
mod threshold;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use evolved::{c14_base, eoh_math_form, C12Tier};
pub use threshold::{ab_score, band, AbVariant, Band, Baseline};

use crate::error::{Error, Result};
use crate::packing::{CandidateView, PriorityFunction};

/// Thresholds of the smoothed c12: best fit for gaps up to 7, first fit for
/// gaps above 21.
pub const SMOOTH_C12_A: u32 = 7;
pub const SMOOTH_C12_B: u32 = 21;

/// A priority function plus its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HeuristicSpec {
    FirstFit,
    BestFit,
    WorstFit,
    C12,
    SmoothC12,
    C14,
    EoH,
    Ab {
        baseline: Baseline,
        a: u32,
        b: u32,
        variant: AbVariant,
    },
}

impl HeuristicSpec {
    /// Faithful ab heuristic; fails if `a >= b`.
    pub fn ab(baseline: Baseline, a: u32, b: u32) -> Result<Self> {
        Self::ab_variant(baseline, a, b, AbVariant::Faithful)
    }

    pub fn ab_variant(baseline: Baseline, a: u32, b: u32, variant: AbVariant) -> Result<Self> {
        let spec = HeuristicSpec::Ab {
            baseline,
            a,
            b,
            variant,
        };
        if a >= b {
            return Err(Error::InvalidParameters {
                heuristic: spec.to_string(),
                reason: format!("thresholds must satisfy a < b, got a={a} b={b}"),
            });
        }
        Ok(spec)
    }

    /// Checks parameters against a concrete bin capacity.
    pub fn validate(&self, capacity: u32) -> Result<()> {
        if let HeuristicSpec::Ab { a, b, .. } = *self {
            if a >= b || b >= capacity {
                return Err(Error::InvalidParameters {
                    heuristic: self.to_string(),
                    reason: format!(
                        "thresholds must satisfy a < b < capacity, got a={a} b={b} capacity={capacity}"
                    ),
                });
            }
        }
        Ok(())
    }

    /// The ab thresholds, with the smoothed c12 reported as its fixed pair.
    pub fn thresholds(&self) -> Option<(u32, u32)> {
        match *self {
            HeuristicSpec::Ab { a, b, .. } => Some((a, b)),
            HeuristicSpec::SmoothC12 => Some((SMOOTH_C12_A, SMOOTH_C12_B)),
            _ => None,
        }
    }

    /// Scores all candidates, allocating a fresh vector.
    pub fn scores(&self, item: u32, candidates: &[u32], capacity: u32) -> ScoreVector {
        let mut out = Vec::with_capacity(candidates.len());
        self.score_into(item, candidates, capacity, &mut out);
        ScoreVector(out)
    }
}

impl PriorityFunction for HeuristicSpec {
    fn name(&self) -> String {
        self.to_string()
    }

    fn score_into(&self, item: u32, candidates: &[u32], capacity: u32, out: &mut Vec<f64>) {
        match *self {
            HeuristicSpec::FirstFit => baseline::first_fit_into(candidates, out),
            HeuristicSpec::BestFit => baseline::best_fit_into(item, candidates, out),
            HeuristicSpec::WorstFit => baseline::worst_fit_into(item, candidates, capacity, out),
            HeuristicSpec::C12 => evolved::c12_into(item, candidates, out),
            HeuristicSpec::SmoothC12 => threshold::ab_into(
                item,
                candidates,
                capacity,
                SMOOTH_C12_A,
                SMOOTH_C12_B,
                Baseline::FirstFit,
                AbVariant::Faithful,
                out,
            ),
            HeuristicSpec::C14 => evolved::c14_into(item, candidates, out),
            HeuristicSpec::EoH => evolved::eoh_into(item, candidates, out),
            HeuristicSpec::Ab {
                baseline,
                a,
                b,
                variant,
            } => threshold::ab_into(item, candidates, capacity, a, b, baseline, variant, out),
        }
    }

    fn candidate_view(&self) -> CandidateView {
        match self {
            HeuristicSpec::C14 => CandidateView::NeighborDifference,
            _ => CandidateView::Separable,
        }
    }
}

/// Scores index-aligned with a candidate list.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector(pub Vec<f64>);

impl ScoreVector {
    /// Position of the first maximal score, `None` if empty or any score is
    /// not finite.
    pub fn argmax(&self) -> Option<usize> {
        argmax(&self.0)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// First index of the maximum; `None` for empty input or non-finite entries.
pub fn argmax(scores: &[f64]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &s) in scores.iter().enumerate() {
        if !s.is_finite() {
            return None;
        }
        match best {
            Some((_, top)) if s <= top => {}
            _ => best = Some((i, s)),
        }
    }
    best.map(|(i, _)| i)
}

pub fn priority_first_fit(item: u32, candidates: &[u32], capacity: u32) -> ScoreVector {
    HeuristicSpec::FirstFit.scores(item, candidates, capacity)
}

pub fn priority_best_fit(item: u32, candidates: &[u32], capacity: u32) -> ScoreVector {
    HeuristicSpec::BestFit.scores(item, candidates, capacity)
}

pub fn priority_worst_fit(item: u32, candidates: &[u32], capacity: u32) -> ScoreVector {
    HeuristicSpec::WorstFit.scores(item, candidates, capacity)
}

pub fn priority_c12(item: u32, candidates: &[u32], capacity: u32) -> ScoreVector {
    HeuristicSpec::C12.scores(item, candidates, capacity)
}

pub fn priority_smooth_c12(item: u32, candidates: &[u32], capacity: u32) -> ScoreVector {
    HeuristicSpec::SmoothC12.scores(item, candidates, capacity)
}

pub fn priority_c14(item: u32, candidates: &[u32], capacity: u32) -> ScoreVector {
    HeuristicSpec::C14.scores(item, candidates, capacity)
}

pub fn priority_eoh(item: u32, candidates: &[u32], capacity: u32) -> ScoreVector {
    HeuristicSpec::EoH.scores(item, candidates, capacity)
}

#[allow(clippy::too_many_arguments)]
pub fn priority_ab(
    item: u32,
    candidates: &[u32],
    capacity: u32,
    a: u32,
    b: u32,
    baseline: Baseline,
    variant: AbVariant,
) -> Result<ScoreVector> {
    let spec = HeuristicSpec::ab_variant(baseline, a, b, variant)?;
    spec.validate(capacity)?;
    Ok(spec.scores(item, candidates, capacity))
}

impl fmt::Display for HeuristicSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeuristicSpec::FirstFit => f.write_str("firstfit"),
            HeuristicSpec::BestFit => f.write_str("bestfit"),
            HeuristicSpec::WorstFit => f.write_str("worstfit"),
            HeuristicSpec::C12 => f.write_str("c12"),
            HeuristicSpec::SmoothC12 => f.write_str("smooth-c12"),
            HeuristicSpec::C14 => f.write_str("c14"),
            HeuristicSpec::EoH => f.write_str("eoh"),
            HeuristicSpec::Ab {
                baseline,
                a,
                b,
                variant,
            } => {
                write!(f, "ab-{}(a={a},b={b}", baseline.short_name())?;
                if *variant != AbVariant::Faithful {
                    write!(f, ",variant={}", variant.name())?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Grammar accepted by [`HeuristicSpec::from_str`], for error messages.
pub const GRAMMAR: &str = "firstfit | bestfit | worstfit | c12 | smooth-c12 | c14 | eoh | \
     ab-ff(a=<int>,b=<int>[,variant=faithful|verbatim]) | ab-bf(...) | ab-wf(...)";

impl FromStr for HeuristicSpec {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let err = |reason: String| Error::ParseHeuristic {
            input: input.to_string(),
            reason,
        };
        let compact: String = input
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect::<String>()
            .to_ascii_lowercase();
        let simple = match compact.as_str() {
            "firstfit" | "first-fit" | "ff" => Some(HeuristicSpec::FirstFit),
            "bestfit" | "best-fit" | "bf" => Some(HeuristicSpec::BestFit),
            "worstfit" | "worst-fit" | "wf" => Some(HeuristicSpec::WorstFit),
            "c12" => Some(HeuristicSpec::C12),
            "smooth-c12" | "smooth_c12" | "smoothc12" => Some(HeuristicSpec::SmoothC12),
            "c14" => Some(HeuristicSpec::C14),
            "eoh" => Some(HeuristicSpec::EoH),
            _ => None,
        };
        if let Some(spec) = simple {
            return Ok(spec);
        }

        let Some(rest) = compact.strip_prefix("ab-") else {
            return Err(err(format!("unknown heuristic; expected {GRAMMAR}")));
        };
        let (base, args) = rest
            .split_once('(')
            .ok_or_else(|| err("ab heuristics need parameters, e.g. ab-ff(a=5,b=24)".into()))?;
        let args = args
            .strip_suffix(')')
            .ok_or_else(|| err("missing closing parenthesis".into()))?;
        let baseline = match base {
            "ff" => Baseline::FirstFit,
            "bf" => Baseline::BestFit,
            "wf" => Baseline::WorstFit,
            other => return Err(err(format!("unknown ab baseline `{other}`; use ff, bf or wf"))),
        };
        let (mut a, mut b, mut variant) = (None, None, None);
        for pair in args.split(',').filter(|p| !p.is_empty()) {
            let (key, value) = pair
                .split_once('=')
                .ok_or_else(|| err(format!("expected key=value, got `{pair}`")))?;
            let int = || {
                value
                    .parse::<u32>()
                    .map_err(|_| err(format!("`{key}` must be a non-negative integer")))
            };
            let slot_taken = || err(format!("duplicate key `{key}`"));
            match key {
                "a" if a.is_none() => a = Some(int()?),
                "b" if b.is_none() => b = Some(int()?),
                "variant" if variant.is_none() => {
                    variant = Some(match value {
                        "faithful" => AbVariant::Faithful,
                        "verbatim" => AbVariant::Verbatim,
                        other => {
                            return Err(err(format!(
                                "unknown variant `{other}`; use faithful or verbatim"
                            )))
                        }
                    })
                }
                "a" | "b" | "variant" => return Err(slot_taken()),
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        let a = a.ok_or_else(|| err("missing parameter a".into()))?;
        let b = b.ok_or_else(|| err("missing parameter b".into()))?;
        Self::ab_variant(baseline, a, b, variant.unwrap_or_default())
    }
}

impl Serialize for HeuristicSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for HeuristicSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
