use std::collections::{HashMap, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use super::{SearchMode, DEFAULT_BEAM_WIDTH};
use crate::dynamics::{format_word, LassoPoint, SftGraph, Symbol, Word};
use crate::error::Result;
use crate::extension::BiLassoPoint;

/// Beam prefixes grow one symbol at a time up to this length; longer words
/// continue the surviving prefixes periodically.
const BEAM_PREFIX_LEN: usize = 40;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchOutcome {
    pub value: f64,
    #[serde(serialize_with = "serialize_word")]
    pub witness: Word,
    pub examined: usize,
    /// Whether every admissible word was evaluated.
    pub exhaustive: bool,
    pub mode: SearchMode,
}

fn serialize_word<S: serde::Serializer>(w: &Word, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_word(w))
}

type Eval<'a> = dyn Fn(&[Symbol]) -> Result<f64> + Sync + 'a;

/// Maximizes `eval` over admissible words of length `len`.
///
/// `eval` must accept every admissible word of length at most `len` and be
/// monotone under taking prefixes (true for truncation norms, where a prefix
/// yields a submatrix). Ties go to the lexicographically smallest word.
pub fn search_words(
    graph: &SftGraph,
    len: usize,
    mode: SearchMode,
    cap: u64,
    eval: &Eval,
) -> Result<SearchOutcome> {
    match mode {
        SearchMode::Exhaustive => exhaustive(graph, len, cap, eval),
        SearchMode::Beam { width } => beam(graph, len, width, eval),
        SearchMode::Auto if graph.count_words(len) <= cap as u128 => {
            exhaustive(graph, len, cap, eval)
        }
        SearchMode::Auto => beam(graph, len, DEFAULT_BEAM_WIDTH, eval),
    }
}

fn best_of(scored: impl IntoIterator<Item = (f64, Word)>) -> Option<(f64, Word)> {
    let mut best: Option<(f64, Word)> = None;
    for (v, w) in scored {
        let better = match &best {
            None => true,
            Some((bv, bw)) => v > *bv || (v == *bv && w < *bw),
        };
        if better {
            best = Some((v, w));
        }
    }
    best
}

fn score_all(words: Vec<Word>, eval: &Eval) -> Result<Vec<(f64, Word)>> {
    words.into_par_iter().map(|w| Ok((eval(&w)?, w))).collect()
}

fn exhaustive(graph: &SftGraph, len: usize, cap: u64, eval: &Eval) -> Result<SearchOutcome> {
    let words = graph.words_capped(len, cap as u128)?;
    let examined = words.len();
    let (value, witness) = best_of(score_all(words, eval)?).unwrap_or((0.0, Word::new()));
    Ok(SearchOutcome {
        value,
        witness,
        examined,
        exhaustive: true,
        mode: SearchMode::Exhaustive,
    })
}

fn beam(graph: &SftGraph, len: usize, width: usize, eval: &Eval) -> Result<SearchOutcome> {
    let short = len.clamp(1, BEAM_PREFIX_LEN);
    let mut examined = 0;
    let mut beam = score_all(graph.words(1), eval)?;
    examined += beam.len();
    for _ in 1..short {
        let candidates: Vec<Word> = beam
            .iter()
            .flat_map(|(_, w)| {
                let last = *w.last().unwrap() as usize;
                graph.successors(last).map(move |s| {
                    let mut e = w.clone();
                    e.push(s as Symbol);
                    e
                })
            })
            .collect();
        examined += candidates.len();
        let mut scored = score_all(candidates, eval)?;
        scored.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
        scored.truncate(width);
        beam = scored;
    }
    if len > short {
        let mut long = Vec::new();
        for (_, u) in &beam {
            if let Some(w) = periodic_extension(graph, u, len) {
                long.push(w);
            }
            long.push(lasso_from_word(graph, u).prefix(len));
        }
        long.sort();
        long.dedup();
        examined += long.len();
        beam = score_all(long, eval)?;
    }
    let (value, witness) = best_of(beam).unwrap_or((0.0, Word::new()));
    Ok(SearchOutcome {
        value,
        witness,
        examined,
        exhaustive: graph.count_words(len) as usize == examined && len <= short,
        mode: SearchMode::Beam { width },
    })
}

/// Shortest path `from -> to` (intermediate vertices only), preferring
/// small symbols.
fn bridge(graph: &SftGraph, from: usize, to: usize) -> Option<Word> {
    let mut parent: HashMap<usize, usize> = HashMap::new();
    let mut queue = VecDeque::from([from]);
    let mut seen = vec![false; graph.alphabet_size()];
    seen[from] = true;
    while let Some(v) = queue.pop_front() {
        for s in graph.successors(v) {
            if s == to {
                let mut path = Vec::new();
                let mut cur = v;
                while cur != from {
                    path.push(cur as Symbol);
                    cur = parent[&cur];
                }
                path.reverse();
                return Some(path);
            }
            if !seen[s] {
                seen[s] = true;
                parent.insert(s, v);
                queue.push_back(s);
            }
        }
    }
    None
}

/// `u` closed up into a cycle (directly or through a shortest bridge) and
/// repeated to length `len`.
fn periodic_extension(graph: &SftGraph, u: &[Symbol], len: usize) -> Option<Word> {
    let first = *u.first()? as usize;
    let last = *u.last()? as usize;
    let mut cycle = u.to_vec();
    cycle.extend(bridge(graph, last, first)?);
    Some(cycle.iter().copied().cycle().take(len).collect())
}

/// `word` followed by the least-successor walk from its last symbol, which
/// closes into a cycle.
pub fn lasso_from_word(graph: &SftGraph, word: &[Symbol]) -> LassoPoint {
    assert!(!word.is_empty(), "cannot complete an empty word");
    let (tail, cycle_start) = walk(*word.last().unwrap(), |s| graph.least_successor(s));
    let mut pre = word.to_vec();
    pre.extend_from_slice(&tail[1..]);
    LassoPoint::new(graph, &pre, &tail[cycle_start..]).expect("completion is admissible")
}

/// `word` placed at coordinates `start ..`, continued to the left by least
/// predecessors and to the right by least successors.
pub fn bilasso_from_word(graph: &SftGraph, word: &[Symbol], start: i64) -> BiLassoPoint {
    assert!(!word.is_empty(), "cannot complete an empty word");
    let (right, r0) = walk(*word.last().unwrap(), |s| graph.least_successor(s));
    let (left, l0) = walk(word[0], |s| graph.least_predecessor(s));
    let mut center: Word = left[1..].iter().rev().copied().collect();
    center.extend_from_slice(word);
    center.extend_from_slice(&right[1..]);
    let left_period: Word = left[l0..].iter().rev().copied().collect();
    BiLassoPoint::new(
        graph,
        &left_period,
        &center,
        start - (left.len() as i64 - 1),
        &right[r0..],
    )
    .expect("completion is admissible")
}

/// `s, step(s), step(step(s)), ...` up to the first repeat; returns the
/// chain and the index where the repeated symbol first appeared.
fn walk(s: Symbol, step: impl Fn(usize) -> usize) -> (Word, usize) {
    let mut chain = vec![s];
    loop {
        let next = step(*chain.last().unwrap() as usize) as Symbol;
        if let Some(i) = chain.iter().position(|&c| c == next) {
            return (chain, i);
        }
        chain.push(next);
    }
}
