use serde::Serialize;

use super::graph::SftGraph;
use super::point::LassoPoint;
use super::word::{format_word, is_primitive, least_rotation, rotate_left, Symbol, Word};
use crate::error::{Error, Result};

/// Default bound on the number of cycles [`enumerate_cycles`] may return.
pub const DEFAULT_CYCLE_CAP: usize = 100_000;

/// A primitive cycle of the transition graph, i.e. a periodic orbit.
///
/// Stored as its lexicographically least rotation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Cycle {
    vertices: Word,
}

impl Cycle {
    pub fn new(graph: &SftGraph, vertices: &[Symbol]) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        let mut closed = vertices.to_vec();
        closed.push(vertices[0]);
        graph.check_word(&closed)?;
        if !is_primitive(vertices) {
            return Err(Error::NotPrimitive(format_word(vertices)));
        }
        Ok(Cycle {
            vertices: least_rotation(vertices),
        })
    }

    pub fn vertices(&self) -> &[Symbol] {
        &self.vertices
    }

    pub fn period(&self) -> usize {
        self.vertices.len()
    }

    /// The periodic point `(y_1 ... y_p)^inf`.
    pub fn point(&self) -> LassoPoint {
        LassoPoint::normalized(Word::new(), self.vertices.clone())
    }

    /// Orbit point `sigma^i y` for `i` in `0..p`.
    pub fn rotation(&self, i: usize) -> Word {
        rotate_left(&self.vertices, i)
    }
}

impl std::fmt::Display for Cycle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({})", format_word(&self.vertices))
    }
}

/// All primitive cycles of length `<= max_period`, one per rotation class,
/// ordered by length and then lexicographically.
pub fn enumerate_cycles(graph: &SftGraph, max_period: usize, cap: usize) -> Result<Vec<Cycle>> {
    let mut found = Vec::new();
    let mut path = Word::new();
    for start in 0..graph.alphabet_size() {
        path.clear();
        path.push(start as Symbol);
        extend(graph, max_period, cap, &mut path, &mut found)?;
    }
    found.sort_by(|a: &Cycle, b: &Cycle| (a.period(), &a.vertices).cmp(&(b.period(), &b.vertices)));
    Ok(found)
}

fn extend(
    graph: &SftGraph,
    max_period: usize,
    cap: usize,
    path: &mut Word,
    found: &mut Vec<Cycle>,
) -> Result<()> {
    let start = path[0] as usize;
    let last = *path.last().unwrap() as usize;
    // the least rotation starts with its smallest symbol
    if graph.has_edge(last, start) && is_primitive(path) && least_rotation(path) == *path {
        if found.len() >= cap {
            return Err(Error::Overflow {
                what: "cycles",
                count: found.len() as u128 + 1,
                cap: cap as u128,
                hint: "; lower max_period",
            });
        }
        found.push(Cycle {
            vertices: path.clone(),
        });
    }
    if path.len() == max_period {
        return Ok(());
    }
    for next in graph.successors(last).filter(|&s| s >= start) {
        path.push(next as Symbol);
        extend(graph, max_period, cap, path, found)?;
        path.pop();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(cycles: &[Cycle]) -> Vec<String> {
        cycles.iter().map(|c| format_word(c.vertices())).collect()
    }

    /// Oracle: every admissible closed word of length <= p, reduced to its
    /// least rotation, deduplicated.
    fn brute_force(graph: &SftGraph, max_p: usize) -> Vec<String> {
        let mut out = std::collections::BTreeSet::new();
        for p in 1..=max_p {
            for w in graph.words(p) {
                let closes = graph.has_edge(*w.last().unwrap() as usize, w[0] as usize);
                if closes && is_primitive(&w) {
                    out.insert((p, format_word(&least_rotation(&w))));
                }
            }
        }
        out.into_iter().map(|(_, w)| w).collect()
    }

    #[test]
    fn full_shift_examples() {
        let g = SftGraph::full_shift(2).unwrap();
        assert_eq!(words(&enumerate_cycles(&g, 1, 10).unwrap()), ["0", "1"]);
        assert_eq!(
            words(&enumerate_cycles(&g, 2, 10).unwrap()),
            ["0", "1", "01"]
        );
        assert_eq!(
            enumerate_cycles(&SftGraph::full_shift(5).unwrap(), 1, 10)
                .unwrap()
                .len(),
            5
        );
    }

    #[test]
    fn golden_mean_example() {
        let g = SftGraph::from_matrix(&[vec![1, 1], vec![1, 0]]).unwrap();
        assert_eq!(words(&enumerate_cycles(&g, 2, 10).unwrap()), ["0", "01"]);
    }

    #[test]
    fn matches_brute_force() {
        let graphs = [
            SftGraph::full_shift(3).unwrap(),
            SftGraph::from_matrix(&[vec![1, 1], vec![1, 0]]).unwrap(),
            SftGraph::from_matrix(&[vec![0, 1, 1], vec![1, 0, 0], vec![1, 0, 0]]).unwrap(),
        ];
        for g in &graphs {
            for p in 1..=6 {
                assert_eq!(
                    words(&enumerate_cycles(g, p, 10_000).unwrap()),
                    brute_force(g, p)
                );
            }
        }
    }

    #[test]
    fn cap_overflow() {
        let g = SftGraph::full_shift(2).unwrap();
        assert!(matches!(
            enumerate_cycles(&g, 6, 3),
            Err(Error::Overflow { .. })
        ));
    }

    #[test]
    fn cycle_constructor_canonicalizes() {
        let g = SftGraph::full_shift(2).unwrap();
        assert_eq!(Cycle::new(&g, &[1, 0, 0]).unwrap().vertices(), &[0, 0, 1]);
        assert!(Cycle::new(&g, &[0, 0]).is_err());
        let golden = SftGraph::from_matrix(&[vec![1, 1], vec![1, 0]]).unwrap();
        assert!(Cycle::new(&golden, &[1]).is_err());
    }
}
