//! Seeded random elements and points for property suites.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::SemicrossedPoly;
use crate::dynamics::{CylinderFunction, LassoPoint, SftGraph, Symbol, Word};
use crate::extension::BiLassoPoint;
use crate::C64;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Distribution of coefficient values.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Values {
    /// Gaussian integers with parts in `-3 ..= 3`: sums and products stay
    /// exact in floating point, so algebraic laws can be compared exactly.
    GaussianInteger,
    /// Real and imaginary parts uniform in `[-1, 1]`.
    UnitSquare,
}

fn value(rng: &mut impl Rng, values: Values) -> C64 {
    match values {
        Values::GaussianInteger => {
            C64::new(rng.gen_range(-3..=3) as f64, rng.gen_range(-3..=3) as f64)
        }
        Values::UnitSquare => C64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)),
    }
}

pub fn random_cylinder(
    graph: &Arc<SftGraph>,
    window: usize,
    values: Values,
    rng: &mut impl Rng,
) -> CylinderFunction {
    // words() is lexicographic, so draws happen in a fixed order
    let table: std::collections::BTreeMap<Word, C64> = graph
        .words(window)
        .into_iter()
        .map(|w| (w, value(rng, values)))
        .collect();
    CylinderFunction::new(graph.clone(), window, table).expect("all admissible words covered")
}

/// `sum_{n <= degree} U^n f_n` with each coefficient present with
/// probability 3/4 and windows in `1 ..= max_window`.
pub fn random_poly(
    graph: &Arc<SftGraph>,
    degree: usize,
    max_window: usize,
    values: Values,
    rng: &mut impl Rng,
) -> SemicrossedPoly {
    let mut p = SemicrossedPoly::zero(graph.clone());
    for n in 0..=degree {
        if rng.gen_bool(0.75) {
            let window = rng.gen_range(1..=max_window);
            let f = random_cylinder(graph, window, values, rng);
            p = p.add(&SemicrossedPoly::monomial(n, f));
        }
    }
    p
}

fn random_step(graph: &SftGraph, from: usize, forward: bool, rng: &mut impl Rng) -> Symbol {
    let options: Vec<usize> = if forward {
        graph.successors(from).collect()
    } else {
        graph.predecessors(from).collect()
    };
    *options.choose(rng).expect("validated graph") as Symbol
}

/// Random walk that stops at its first repeated symbol; returns the walk
/// and the index where the repeat first appeared.
fn walk_to_cycle(
    graph: &SftGraph,
    start: Symbol,
    forward: bool,
    rng: &mut impl Rng,
) -> (Word, usize) {
    let mut chain = vec![start];
    loop {
        let next = random_step(graph, *chain.last().unwrap() as usize, forward, rng);
        if let Some(i) = chain.iter().position(|&s| s == next) {
            return (chain, i);
        }
        chain.push(next);
    }
}

fn random_walk(graph: &SftGraph, len: usize, rng: &mut impl Rng) -> Word {
    let mut w = vec![rng.gen_range(0..graph.alphabet_size()) as Symbol];
    while w.len() < len {
        w.push(random_step(graph, *w.last().unwrap() as usize, true, rng));
    }
    w
}

/// A random eventually periodic point: a random walk of length up to
/// `max_pre`, continued at random until it closes into a cycle.
pub fn random_lasso(graph: &SftGraph, max_pre: usize, rng: &mut impl Rng) -> LassoPoint {
    let pre_len = rng.gen_range(1..=max_pre.max(1));
    let walk = random_walk(graph, pre_len, rng);
    let (tail, i) = walk_to_cycle(graph, *walk.last().unwrap(), true, rng);
    let mut pre = walk;
    pre.extend_from_slice(&tail[1..]);
    LassoPoint::new(graph, &pre, &tail[i..]).expect("random walk is admissible")
}

/// A random point of the extension with a random center of length up to
/// `max_center` placed near the origin.
pub fn random_bilasso(graph: &SftGraph, max_center: usize, rng: &mut impl Rng) -> BiLassoPoint {
    let len = rng.gen_range(1..=max_center.max(1));
    let center = random_walk(graph, len, rng);
    let (right, r0) = walk_to_cycle(graph, *center.last().unwrap(), true, rng);
    let (left, l0) = walk_to_cycle(graph, center[0], false, rng);
    let mut word: Word = left[1..].iter().rev().copied().collect();
    word.extend_from_slice(&center);
    word.extend_from_slice(&right[1..]);
    let left_period: Word = left[l0..].iter().rev().copied().collect();
    let start = rng.gen_range(-(len as i64)..=1) - (left.len() as i64 - 1);
    BiLassoPoint::new(graph, &left_period, &word, start, &right[r0..])
        .expect("random walk is admissible")
}
