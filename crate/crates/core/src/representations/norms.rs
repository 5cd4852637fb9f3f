use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use super::matrices::{
    build_big_pi_x_truncation, build_big_pi_y_lambda, build_pi_x_truncation, build_pi_y_lambda,
    Frame,
};
use super::search::{bilasso_from_word, lasso_from_word, search_words};
use super::{NormEstimate, SearchMode, TruncationPolicy, DEFAULT_BEAM_WIDTH};
use crate::algebra::{CrossedPoly, SemicrossedPoly};
use crate::dynamics::{enumerate_cycles, format_word, Coordinates, Cycle, LassoPoint, SftGraph};
use crate::error::Result;
use crate::extension::BiLassoPoint;
use crate::linalg;

/// Whether the shift has a non-periodic point. A surjective shift of
/// finite type has one exactly when its graph is not a permutation.
pub fn has_aperiodic_points(graph: &SftGraph) -> bool {
    !graph.is_permutation()
}

/// Norm of the certified `k`-truncation of `pi_x(F)`.
pub fn pi_x_truncation_norm(f: &SemicrossedPoly, x: &impl Coordinates, k: usize) -> Result<f64> {
    build_pi_x_truncation(f, x, k)?.operator_norm()
}

/// Norm of the certified truncation of `Pi_x(G)` on rows `-k ..= k`.
pub fn big_pi_x_truncation_norm(g: &CrossedPoly, x: &BiLassoPoint, k: usize) -> Result<f64> {
    build_big_pi_x_truncation(g, x, k)?.operator_norm()
}

/// `||pi_x(F)||` from truncations at the policy's stages, stopping once the
/// increment drops below the tolerance.
pub fn norm_pi_x(
    f: &SemicrossedPoly,
    x: &impl Coordinates,
    policy: &TruncationPolicy,
) -> Result<NormEstimate> {
    policy.validate(f.degree())?;
    let mut values: Vec<(usize, f64)> = Vec::new();
    for k in policy.stages() {
        let v = pi_x_truncation_norm(f, x, k)?;
        let done = values
            .last()
            .is_some_and(|&(_, prev)| v - prev < policy.tolerance);
        values.push((k, v));
        if done {
            break;
        }
    }
    Ok(NormEstimate::from_values(&values, policy.tolerance))
}

/// Maximum of `||Pi_{y, lambda}||` over the circle.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LambdaSup {
    pub value: f64,
    /// `arg lambda` of the best sample.
    pub theta: f64,
    pub lambda: C64,
    /// Spacing of the uniform grid over one gauge period.
    pub grid_step: f64,
    /// Half-width of the final refinement bracket.
    pub resolution: f64,
    pub evaluations: usize,
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// The norm of `Pi_{y, lambda}` depends on `arg lambda` only modulo
/// `2 pi / p`, so one gauge period is sampled and the best sample refined
/// by golden-section search.
fn maximize_over_circle(
    period: usize,
    policy: &TruncationPolicy,
    f: &(dyn Fn(C64) -> Result<f64> + Sync),
) -> Result<LambdaSup> {
    let step = TAU / (period as f64 * policy.lambda_grid as f64);
    let at = |theta: f64| f(C64::from_polar(1.0, theta));
    let samples: Vec<f64> = (0..policy.lambda_grid)
        .into_par_iter()
        .map(|i| at(i as f64 * step))
        .collect::<Result<_>>()?;
    let (mut best_theta, mut best) = (0.0, f64::NEG_INFINITY);
    for (i, &v) in samples.iter().enumerate() {
        if v > best {
            best = v;
            best_theta = i as f64 * step;
        }
    }
    let mut evaluations = samples.len();
    let (mut a, mut b) = (best_theta - step, best_theta + step);
    let mut c = b - (b - a) * INV_PHI;
    let mut d = a + (b - a) * INV_PHI;
    let (mut fc, mut fd) = (at(c)?, at(d)?);
    evaluations += 2;
    let mut consider = |theta: f64, v: f64| {
        if v > best {
            best = v;
            best_theta = theta;
        }
    };
    consider(c, fc);
    consider(d, fd);
    for _ in 0..policy.refine_steps {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * INV_PHI;
            fc = at(c)?;
            consider(c, fc);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * INV_PHI;
            fd = at(d)?;
            consider(d, fd);
        }
        evaluations += 1;
    }
    let theta = best_theta.rem_euclid(TAU);
    Ok(LambdaSup {
        value: best,
        theta,
        lambda: C64::from_polar(1.0, theta),
        grid_step: step,
        resolution: (b - a) / 2.0,
        evaluations,
    })
}

/// `sup_lambda ||Pi_{y, lambda}(F)||`.
pub fn sup_lambda_norm(
    f: &SemicrossedPoly,
    y: &Cycle,
    policy: &TruncationPolicy,
) -> Result<LambdaSup> {
    maximize_over_circle(y.period(), policy, &|l| {
        linalg::operator_norm(&build_pi_y_lambda(f, y, l)?)
    })
}

/// `sup_lambda ||Pi_{y, lambda}(G)||` for a crossed polynomial.
pub fn sup_lambda_norm_crossed(
    g: &CrossedPoly,
    y: &Cycle,
    policy: &TruncationPolicy,
) -> Result<LambdaSup> {
    maximize_over_circle(y.period(), policy, &|l| {
        linalg::operator_norm(&build_big_pi_y_lambda(g, y, l)?)
    })
}

/// Maximum of the certified `k`-truncation of `pi_x(F)` over all points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantA {
    pub k: usize,
    pub value: f64,
    /// Itinerary word attaining the value.
    pub witness: String,
    /// A point with that itinerary.
    pub point: String,
    pub examined: usize,
    pub exhaustive: bool,
    pub mode: SearchMode,
}

/// Maximum of `sup_lambda ||Pi_{y, lambda}(F)||` over cycles up to a period.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantB {
    pub value: f64,
    pub cycle: String,
    pub theta: f64,
    pub max_period: usize,
    pub cycles_examined: usize,
    pub grid_step: f64,
    pub resolution: f64,
}

/// `A` at truncation `k`: the maximum over every admissible itinerary word
/// of the certified truncation norm. `None` when every point is periodic.
pub fn constant_a(
    f: &SemicrossedPoly,
    k: usize,
    mode: SearchMode,
    word_cap: u64,
) -> Result<Option<ConstantA>> {
    let graph = f.graph();
    if !has_aperiodic_points(graph) {
        return Ok(None);
    }
    let frame = Frame::pi_x(f, k);
    let (base, len) = frame.coverage();
    let found = search_words(graph, len, mode, word_cap, &|w| frame.word_norm(w, base))?;
    let value = frame.assemble(&found.witness, base)?.operator_norm()?;
    Ok(Some(ConstantA {
        k,
        value,
        witness: format_word(&found.witness),
        point: lasso_from_word(graph, &found.witness).to_string(),
        examined: found.examined,
        exhaustive: found.exhaustive,
        mode: found.mode,
    }))
}

fn best_cycle(
    cycles: &[Cycle],
    max_period: usize,
    sup: impl Fn(&Cycle) -> Result<LambdaSup>,
) -> Result<Option<ConstantB>> {
    let mut best: Option<ConstantB> = None;
    for y in cycles {
        let s = sup(y)?;
        if best.as_ref().is_none_or(|b| s.value > b.value) {
            best = Some(ConstantB {
                value: s.value,
                cycle: y.to_string(),
                theta: s.theta,
                max_period,
                cycles_examined: cycles.len(),
                grid_step: s.grid_step,
                resolution: s.resolution,
            });
        }
    }
    Ok(best)
}

/// `B` restricted to cycles of period at most `max_period`; `None` when
/// there are no such cycles.
pub fn constant_b(
    f: &SemicrossedPoly,
    max_period: usize,
    policy: &TruncationPolicy,
) -> Result<Option<ConstantB>> {
    let cycles = enumerate_cycles(f.graph(), max_period, policy.cycle_cap)?;
    best_cycle(&cycles, max_period, |y| sup_lambda_norm(f, y, policy))
}

/// Value of the aperiodic-point search at one truncation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StageA {
    pub k: usize,
    pub value: Option<f64>,
    pub witness: Option<String>,
    pub examined: usize,
    pub exhaustive: bool,
    pub mode: Option<SearchMode>,
}

/// A norm estimate with the ingredients that produced it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormReport {
    pub estimate: NormEstimate,
    pub a_history: Vec<StageA>,
    pub b: Option<ConstantB>,
    /// Best certified truncation over the sample points, per stage.
    pub sample_history: Vec<(usize, f64)>,
    pub samples: Vec<String>,
    /// Final value minus the best sample value (nonnegative).
    pub cross_check_gap: f64,
    pub l1_bound: f64,
    pub caps_hit: Vec<String>,
}

fn effective_mode(
    graph: &SftGraph,
    len: usize,
    policy: &TruncationPolicy,
    k: usize,
    caps_hit: &mut Vec<String>,
) -> SearchMode {
    match policy.mode {
        SearchMode::Auto => {
            let count = graph.count_words(len);
            if count > policy.word_cap as u128 {
                let count = if count == u128::MAX {
                    "over 2^128".to_string()
                } else {
                    count.to_string()
                };
                caps_hit.push(format!(
                    "K={k}: {count} words of length {len} exceed word_cap {}; beam:{DEFAULT_BEAM_WIDTH} used",
                    policy.word_cap
                ));
                SearchMode::Beam {
                    width: DEFAULT_BEAM_WIDTH,
                }
            } else {
                SearchMode::Exhaustive
            }
        }
        m => m,
    }
}

fn stage_of(k: usize, a: &Option<ConstantA>) -> StageA {
    match a {
        Some(a) => StageA {
            k,
            value: Some(a.value),
            witness: Some(a.witness.clone()),
            examined: a.examined,
            exhaustive: a.exhaustive,
            mode: Some(a.mode),
        },
        None => StageA {
            k,
            value: None,
            witness: None,
            examined: 0,
            exhaustive: true,
            mode: None,
        },
    }
}

#[allow(clippy::too_many_arguments)]
fn finish(
    raw: Vec<(usize, f64)>,
    a_history: Vec<StageA>,
    b: Option<ConstantB>,
    sample_history: Vec<(usize, f64)>,
    samples: Vec<String>,
    l1_bound: f64,
    caps_hit: Vec<String>,
    tolerance: f64,
) -> NormReport {
    let estimate = NormEstimate::from_values(&raw, tolerance);
    let last_sample = sample_history.last().map(|s| s.1).unwrap_or(0.0);
    NormReport {
        cross_check_gap: (estimate.value - last_sample).max(0.0),
        estimate,
        a_history,
        b,
        sample_history,
        samples,
        l1_bound,
        caps_hit,
    }
}

/// `||F|| = max(A, B)`, with `A` at each stage of the policy, `B` over the
/// cycles up to `max_period`, and a cross-check against `pi_x` truncations
/// at sample points (the cycles and the witnesses of `A`).
pub fn semicrossed_norm(f: &SemicrossedPoly, policy: &TruncationPolicy) -> Result<NormReport> {
    policy.validate(f.degree())?;
    let graph = f.graph();
    let cycles = enumerate_cycles(graph, policy.max_period, policy.cycle_cap)?;
    let b = best_cycle(&cycles, policy.max_period, |y| {
        sup_lambda_norm(f, y, policy)
    })?;
    let mut points: Vec<LassoPoint> = cycles.iter().map(|c| c.point()).collect();
    let mut caps_hit = Vec::new();
    let (mut raw, mut a_history, mut sample_history) = (Vec::new(), Vec::new(), Vec::new());
    for k in policy.stages() {
        let mode = {
            let (_, len) = Frame::pi_x(f, k).coverage();
            effective_mode(graph, len, policy, k, &mut caps_hit)
        };
        let a = if has_aperiodic_points(graph) {
            constant_a(f, k, mode, policy.word_cap)?
        } else {
            None
        };
        if let Some(a) = &a {
            let w = crate::dynamics::parse_word(&a.witness)?;
            let p = lasso_from_word(graph, &w);
            if !points.contains(&p) {
                points.push(p);
            }
        }
        let sample = points
            .par_iter()
            .map(|p| pi_x_truncation_norm(f, p, k))
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        sample_history.push((k, sample));
        let v = [
            a.as_ref().map(|a| a.value),
            b.as_ref().map(|b| b.value),
            Some(sample),
        ]
        .into_iter()
        .flatten()
        .fold(0.0, f64::max);
        raw.push((k, v));
        a_history.push(stage_of(k, &a));
    }
    Ok(finish(
        raw,
        a_history,
        b,
        sample_history,
        points.iter().map(|p| p.to_string()).collect(),
        f.l1_norm(),
        caps_hit,
        policy.tolerance,
    ))
}

/// `||G||` in the crossed product: the maximum over points of the
/// extension of certified `Pi_x` truncations (searched over two-sided
/// words, rows `-k/2 ..= k/2` at stage `k` so that matrix sizes match the
/// semicrossed pipeline) and over cycles of `sup_lambda ||Pi_{y, lambda}||`.
pub fn crossed_norm(g: &CrossedPoly, policy: &TruncationPolicy) -> Result<NormReport> {
    let (lo, hi) = g.power_range();
    policy.validate((hi - lo) as usize)?;
    let graph = g.graph();
    let cycles = enumerate_cycles(graph, policy.max_period, policy.cycle_cap)?;
    let b = best_cycle(&cycles, policy.max_period, |y| {
        sup_lambda_norm_crossed(g, y, policy)
    })?;
    let mut points: Vec<BiLassoPoint> = cycles
        .iter()
        .map(|c| BiLassoPoint::periodic(graph, c.vertices()))
        .collect::<Result<_>>()?;
    let mut caps_hit = Vec::new();
    let (mut raw, mut a_history, mut sample_history) = (Vec::new(), Vec::new(), Vec::new());
    for k in policy.stages() {
        let half = k.div_ceil(2);
        let frame = Frame::big_pi_x(g, half);
        let (base, len) = frame.coverage();
        let a = if has_aperiodic_points(graph) {
            let mode = effective_mode(graph, len, policy, k, &mut caps_hit);
            let found = search_words(graph, len, mode, policy.word_cap, &|w| {
                frame.word_norm(w, base)
            })?;
            let value = frame.assemble(&found.witness, base)?.operator_norm()?;
            let point = bilasso_from_word(graph, &found.witness, base);
            let a = ConstantA {
                k,
                value,
                witness: format_word(&found.witness),
                point: point.to_string(),
                examined: found.examined,
                exhaustive: found.exhaustive,
                mode: found.mode,
            };
            if !points.contains(&point) {
                points.push(point);
            }
            Some(a)
        } else {
            None
        };
        let sample = points
            .par_iter()
            .map(|p| big_pi_x_truncation_norm(g, p, half))
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        sample_history.push((k, sample));
        let v = [
            a.as_ref().map(|a| a.value),
            b.as_ref().map(|b| b.value),
            Some(sample),
        ]
        .into_iter()
        .flatten()
        .fold(0.0, f64::max);
        raw.push((k, v));
        a_history.push(stage_of(k, &a));
    }
    Ok(finish(
        raw,
        a_history,
        b,
        sample_history,
        points.iter().map(|p| p.to_string()).collect(),
        g.l1_norm(),
        caps_hit,
        policy.tolerance,
    ))
}
