//! Covariant representations as explicit matrices, and the norm pipelines
//! built on top of them.
//!
//! * `pi_x` acts on `l2(N)`: `U` is the unilateral shift and `f` acts
//!   diagonally by `f(sigma^i x)`.
//! * `Pi_x` acts on `l2(Z)` for a point of the natural extension, with the
//!   bilateral shift.
//! * `Pi_{y, lambda}` is the finite-dimensional representation on the orbit
//!   of a cycle, with `U` a cyclic permutation scaled by `lambda`.
//!
//! Infinite matrices are truncated. The certified truncations keep only the
//! columns whose whole image lies inside the kept rows, so their norms are
//! genuine lower bounds for the norm of the infinite operator.

mod matrices;
mod norms;
mod search;
mod verify;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use matrices::{
    build_big_pi_x, build_big_pi_x_truncation, build_big_pi_y_lambda, build_pi_x,
    build_pi_x_truncation, build_pi_y_lambda, Frame,
};
pub use norms::{
    big_pi_x_truncation_norm, constant_a, constant_b, crossed_norm, has_aperiodic_points,
    norm_pi_x, pi_x_truncation_norm, semicrossed_norm, sup_lambda_norm, sup_lambda_norm_crossed,
    ConstantA, ConstantB, LambdaSup, NormReport, StageA,
};
pub use search::{bilasso_from_word, lasso_from_word, search_words, SearchOutcome};
pub use verify::{
    verify_nest_truncation, verify_nest_truncation_two_sided, verify_norm_lemmas, LemmaCheck,
    LemmaSuite, NestReport, NormLemmaReport, DEFAULT_SEPARATION_CAP,
};

pub const DEFAULT_BEAM_WIDTH: usize = 64;

/// How `constant_a` explores itinerary words.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum SearchMode {
    /// Exhaustive while the word count stays under the cap, beam otherwise.
    #[default]
    Auto,
    /// Every admissible word; exceeding the cap is an error.
    Exhaustive,
    /// Beam search over short prefixes, then periodic continuation.
    Beam { width: usize },
}

impl fmt::Display for SearchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchMode::Auto => write!(f, "auto"),
            SearchMode::Exhaustive => write!(f, "exhaustive"),
            SearchMode::Beam { width } => write!(f, "beam:{width}"),
        }
    }
}

impl FromStr for SearchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(SearchMode::Auto),
            "exhaustive" => Ok(SearchMode::Exhaustive),
            "beam" => Ok(SearchMode::Beam {
                width: DEFAULT_BEAM_WIDTH,
            }),
            _ => {
                let width = s
                    .strip_prefix("beam:")
                    .and_then(|w| w.parse::<usize>().ok())
                    .filter(|&w| w > 0)
                    .ok_or_else(|| Error::InvalidPolicy(format!("unknown search mode {s:?}")))?;
                Ok(SearchMode::Beam { width })
            }
        }
    }
}

/// Truncation and search parameters shared by the norm pipelines.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TruncationPolicy {
    pub k_initial: usize,
    pub k_max: usize,
    /// Convergence threshold on the last history increment.
    pub tolerance: f64,
    /// Samples of `arg lambda` over one gauge period `[0, 2 pi / p)`.
    pub lambda_grid: usize,
    /// Golden-section steps around the best grid sample.
    pub refine_steps: usize,
    pub max_period: usize,
    pub word_cap: u64,
    pub cycle_cap: usize,
    pub mode: SearchMode,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            k_initial: 16,
            k_max: 512,
            tolerance: 1e-4,
            lambda_grid: 256,
            refine_steps: 40,
            max_period: 4,
            word_cap: 1 << 16,
            cycle_cap: crate::dynamics::DEFAULT_CYCLE_CAP,
            mode: SearchMode::Auto,
        }
    }
}

impl TruncationPolicy {
    /// Checks the policy against an element of the given degree (highest
    /// minus lowest power).
    pub fn validate(&self, degree: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidPolicy(msg));
        if self.k_initial < degree + 1 {
            return bad(format!(
                "k_initial = {} must be at least degree + 1 = {}",
                self.k_initial,
                degree + 1
            ));
        }
        if self.k_max < self.k_initial {
            return bad(format!("k_max = {} is below k_initial", self.k_max));
        }
        if self.lambda_grid < 8 {
            return bad(format!(
                "lambda_grid = {} must be at least 8",
                self.lambda_grid
            ));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return bad(format!("tolerance = {} must be positive", self.tolerance));
        }
        if self.max_period == 0 || self.word_cap == 0 || self.cycle_cap == 0 {
            return bad("max_period, word_cap and cycle_cap must be positive".into());
        }
        if let SearchMode::Beam { width: 0 } = self.mode {
            return bad("beam width must be positive".into());
        }
        Ok(())
    }

    /// `k_initial, 2 k_initial, 4 k_initial, ...`, ending exactly at `k_max`.
    pub fn stages(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut k = self.k_initial;
        while k < self.k_max {
            out.push(k);
            k *= 2;
        }
        out.push(self.k_max);
        out
    }
}

/// A certified lower bound for an operator norm, with its truncation
/// history.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormEstimate {
    pub value: f64,
    pub k: usize,
    pub history: Vec<(usize, f64)>,
    pub converged: bool,
    pub tolerance: f64,
}

impl NormEstimate {
    /// Builds an estimate from raw per-truncation values, taking running
    /// maxima so the history is nondecreasing.
    pub fn from_values(values: &[(usize, f64)], tolerance: f64) -> Self {
        let mut history = Vec::with_capacity(values.len());
        let mut best = f64::NEG_INFINITY;
        for &(k, v) in values {
            best = best.max(v);
            history.push((k, best));
        }
        let converged = match history.as_slice() {
            [.., (_, a), (_, b)] => b - a < tolerance,
            _ => false,
        };
        let (k, value) = history.last().copied().unwrap_or((0, 0.0));
        NormEstimate {
            value,
            k,
            history,
            converged,
            tolerance,
        }
    }
}

#[cfg(test)]
mod tests;
