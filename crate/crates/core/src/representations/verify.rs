use std::collections::HashSet;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::Serialize;

use super::matrices::{build_big_pi_x, build_pi_x};
use super::norms::{big_pi_x_truncation_norm, pi_x_truncation_norm, sup_lambda_norm};
use super::TruncationPolicy;
use crate::algebra::{CrossedPoly, SemicrossedPoly};
use crate::dynamics::{Coordinates, Cycle, SftGraph, Word};
use crate::error::{Error, Result};
use crate::extension::BiLassoPoint;

/// Largest window tried when looking for separating itinerary windows.
pub const DEFAULT_SEPARATION_CAP: usize = 32;

/// Inputs for [`verify_norm_lemmas`].
#[derive(Clone, Debug)]
pub struct LemmaSuite {
    pub cycles: Vec<Cycle>,
    pub points: Vec<BiLassoPoint>,
    pub k: usize,
    pub tolerance: f64,
    pub policy: TruncationPolicy,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaCheck {
    pub lemma: &'static str,
    pub witness: String,
    pub lhs: f64,
    pub rhs: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormLemmaReport {
    pub k: usize,
    pub tolerance: f64,
    pub checks: Vec<LemmaCheck>,
    pub violations: usize,
}

/// Checks, at finite truncation:
///
/// * for each cycle `y`: `sup_lambda ||Pi_{y, lambda}(F)|| <= ||pi_y(F)||`
///   up to the tolerance;
/// * for each point `x~` of the extension: the truncated `||Pi_x~(F)||` on
///   rows `-k ..= k` agrees with the largest truncated `||pi_y(F)||` over
///   the rays `y_j = p(phi~^-j x~)`, `0 <= j <= k`.
pub fn verify_norm_lemmas(f: &SemicrossedPoly, suite: &LemmaSuite) -> Result<NormLemmaReport> {
    let k = suite.k;
    let tol = suite.tolerance;
    let mut checks = Vec::new();
    for y in &suite.cycles {
        let lhs = sup_lambda_norm(f, y, &suite.policy)?.value;
        let rhs = pi_x_truncation_norm(f, &y.point(), k)?;
        checks.push(LemmaCheck {
            lemma: "norm1",
            witness: y.to_string(),
            lhs,
            rhs,
            passed: lhs <= rhs + tol,
        });
    }
    let g = f.embed();
    for x in &suite.points {
        let lhs = big_pi_x_truncation_norm(&g, x, k)?;
        // the ray y_j, truncated to k + j + 1 rows, covers indices -j ..= k;
        // j = k gives the full window
        let mut js: Vec<usize> = std::iter::successors(Some(1usize), |j| Some(j * 2))
            .take_while(|&j| j < k)
            .collect();
        js.insert(0, 0);
        js.push(k);
        let mut rhs: f64 = 0.0;
        for j in js {
            let ray = x.ray(1 - j as i64);
            rhs = rhs.max(pi_x_truncation_norm(f, &ray, k + j + 1)?);
        }
        checks.push(LemmaCheck {
            lemma: "norm2",
            witness: x.to_string(),
            lhs,
            rhs,
            passed: (lhs - rhs).abs() <= tol,
        });
    }
    let violations = checks.iter().filter(|c| !c.passed).count();
    Ok(NormLemmaReport {
        k,
        tolerance: tol,
        checks,
        violations,
    })
}

/// Outcome of the finite nest check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NestReport {
    pub positions: usize,
    /// Smallest separating window length (the radius for the two-sided
    /// variant).
    pub window: usize,
    /// Each separating indicator acts as a single coordinate projection.
    pub diagonal_separated: bool,
    /// The cyclic invariant subspace of every basis vector is its tail.
    pub cyclic_tails: bool,
    pub chain_verified: bool,
}

fn separating_window(
    positions: usize,
    cap: usize,
    window_at: impl Fn(usize, usize) -> Result<Word>,
) -> Result<(usize, Vec<Word>)> {
    for w in 1..=cap {
        let windows: Vec<Word> = (0..positions)
            .map(|i| window_at(i, w))
            .collect::<Result<_>>()?;
        let distinct: HashSet<&Word> = windows.iter().collect();
        if distinct.len() == positions {
            return Ok((w, windows));
        }
    }
    Err(Error::SeparationFailure { cap, positions })
}

/// Orthonormal basis of the smallest subspace containing `e_j` and invariant
/// under every generator.
fn cyclic_subspace(gens: &[DMatrix<C64>], n: usize, j: usize) -> Vec<DVector<C64>> {
    let mut basis: Vec<DVector<C64>> = Vec::new();
    let mut queue = vec![DVector::from_fn(n, |r, _| {
        C64::new(if r == j { 1.0 } else { 0.0 }, 0.0)
    })];
    while let Some(mut v) = queue.pop() {
        for b in &basis {
            let c = b.dotc(&v);
            v -= b * c;
        }
        let norm = v.norm();
        if norm <= 1e-9 {
            continue;
        }
        v /= C64::new(norm, 0.0);
        queue.extend(gens.iter().map(|g| g * &v));
        basis.push(v);
    }
    basis
}

/// Whether `basis` spans exactly `span{e_j, ..., e_{n-1}}`.
fn spans_tail(basis: &[DVector<C64>], n: usize, j: usize) -> bool {
    basis.len() == n - j && basis.iter().all(|v| (0..j).all(|r| v[r].norm() <= 1e-12))
}

fn nest_check(shift: DMatrix<C64>, windows: &[Word], w: usize) -> NestReport {
    let n = windows.len();
    let projections: Vec<DMatrix<C64>> = windows
        .iter()
        .map(|v| {
            DMatrix::from_fn(n, n, |r, c| {
                C64::new(if r == c && windows[r] == *v { 1.0 } else { 0.0 }, 0.0)
            })
        })
        .collect();
    let diagonal_separated = projections.iter().enumerate().all(|(i, p)| {
        (0..n).all(|r| {
            (0..n).all(|c| p[(r, c)] == C64::new(if r == i && c == i { 1.0 } else { 0.0 }, 0.0))
        })
    });
    let mut gens = projections;
    gens.push(shift);
    let cyclic_tails = (0..n).all(|j| spans_tail(&cyclic_subspace(&gens, n, j), n, j));
    NestReport {
        positions: n,
        window: w,
        diagonal_separated,
        cyclic_tails,
        chain_verified: diagonal_separated && cyclic_tails,
    }
}

/// Finite nest check for `pi_x` on the first `k` basis vectors.
///
/// Finds the shortest `w <= cap` for which the itinerary windows
/// `x_{i+1} ... x_{i+w}`, `0 <= i < k`, are pairwise distinct; the
/// indicators of those windows then act as the coordinate projections.
/// Together with the truncated shift they leave invariant exactly the
/// tails `span{e_j, ..., e_k}`, checked by computing every cyclic subspace.
pub fn verify_nest_truncation(
    graph: &SftGraph,
    x: &impl Coordinates,
    k: usize,
    cap: usize,
) -> Result<NestReport> {
    let (w, windows) = separating_window(k, cap, |i, w| x.symbols(1 + i as i64, w))?;
    let u = SemicrossedPoly::u(Arc::new(graph.clone()));
    Ok(nest_check(build_pi_x(&u, x, k)?, &windows, w))
}

/// Two-sided variant on indices `-k ..= k` of `Pi_x~`, with windows
/// centered at the coordinate `i + 1` read by index `i`.
pub fn verify_nest_truncation_two_sided(
    graph: &SftGraph,
    x: &BiLassoPoint,
    k: usize,
    cap: usize,
) -> Result<NestReport> {
    let (w, windows) = separating_window(2 * k + 1, cap, |i, w| {
        let center = i as i64 - k as i64 + 1;
        x.symbols(center - w as i64, 2 * w + 1)
    })?;
    let u = CrossedPoly::unitary_power(Arc::new(graph.clone()), 1);
    Ok(nest_check(build_big_pi_x(&u, x, k)?, &windows, w))
}
