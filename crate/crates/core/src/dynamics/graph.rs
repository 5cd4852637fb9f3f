use serde::Serialize;

use super::word::{format_word, Symbol, Word};
use crate::error::{Error, Result};

/// A one-step shift of finite type given by a boolean transition matrix.
///
/// `has_edge(i, j)` means symbol `j` may follow symbol `i`. Every row and
/// every column is nonempty, so the shift map is everywhere defined and
/// onto. The `two_sided` flag distinguishes the one-sided system from its
/// natural extension on the same graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SftGraph {
    size: usize,
    edges: Vec<bool>,
    two_sided: bool,
}

impl SftGraph {
    /// Validates an `m x m` transition matrix.
    pub fn new(size: usize, rows: &[Vec<bool>]) -> Result<Self> {
        if size == 0 {
            return Err(Error::EmptyAlphabet);
        }
        if size > 256 {
            return Err(Error::AlphabetTooLarge(size));
        }
        if rows.len() != size {
            return Err(Error::DimensionMismatch {
                expected: size,
                found: rows.len(),
            });
        }
        let mut edges = Vec::with_capacity(size * size);
        for row in rows {
            if row.len() != size {
                return Err(Error::DimensionMismatch {
                    expected: size,
                    found: row.len(),
                });
            }
            edges.extend_from_slice(row);
        }
        let graph = SftGraph {
            size,
            edges,
            two_sided: false,
        };
        graph.check_total_and_onto()?;
        Ok(graph)
    }

    /// Same as [`SftGraph::new`] with a 0/1 integer matrix.
    pub fn from_matrix(rows: &[Vec<u8>]) -> Result<Self> {
        let rows: Vec<Vec<bool>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| v != 0).collect())
            .collect();
        Self::new(rows.len(), &rows)
    }

    pub fn from_edges(size: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if size == 0 {
            return Err(Error::EmptyAlphabet);
        }
        if size > 256 {
            return Err(Error::AlphabetTooLarge(size));
        }
        let mut rows = vec![vec![false; size]; size];
        for &(a, b) in edges {
            for s in [a, b] {
                if s >= size {
                    return Err(Error::SymbolOutOfRange {
                        symbol: s,
                        alphabet: size,
                    });
                }
            }
            rows[a][b] = true;
        }
        Self::new(size, &rows)
    }

    pub fn full_shift(size: usize) -> Result<Self> {
        Self::new(size, &vec![vec![true; size]; size])
    }

    /// The single cycle `0 -> 1 -> ... -> p-1 -> 0`.
    pub fn cycle(period: usize) -> Result<Self> {
        let edges: Vec<_> = (0..period).map(|i| (i, (i + 1) % period)).collect();
        Self::from_edges(period, &edges)
    }

    fn check_total_and_onto(&self) -> Result<()> {
        for i in 0..self.size {
            if !(0..self.size).any(|j| self.has_edge(i, j)) {
                return Err(Error::DeadState(i));
            }
        }
        for j in 0..self.size {
            if !(0..self.size).any(|i| self.has_edge(i, j)) {
                return Err(Error::NotSurjective(j));
            }
        }
        Ok(())
    }

    pub fn alphabet_size(&self) -> usize {
        self.size
    }

    pub fn is_two_sided(&self) -> bool {
        self.two_sided
    }

    pub(crate) fn with_two_sided(&self, two_sided: bool) -> SftGraph {
        SftGraph {
            two_sided,
            ..self.clone()
        }
    }

    /// Equality of transition matrices, ignoring the one/two-sided flag.
    pub fn same_edges(&self, other: &SftGraph) -> bool {
        self.size == other.size && self.edges == other.edges
    }

    #[inline]
    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.edges[from * self.size + to]
    }

    pub fn successors(&self, from: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.size).filter(move |&j| self.has_edge(from, j))
    }

    pub fn predecessors(&self, to: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.size).filter(move |&i| self.has_edge(i, to))
    }

    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        (0..self.size)
            .flat_map(|i| self.successors(i).map(move |j| (i, j)))
            .collect()
    }

    pub fn rows(&self) -> Vec<Vec<bool>> {
        self.edges.chunks(self.size).map(|r| r.to_vec()).collect()
    }

    /// True when every symbol has exactly one successor, i.e. the system
    /// is a disjoint union of periodic orbits.
    pub fn is_permutation(&self) -> bool {
        (0..self.size).all(|i| self.successors(i).count() == 1)
    }

    pub fn check_symbol(&self, symbol: usize) -> Result<()> {
        if symbol < self.size {
            Ok(())
        } else {
            Err(Error::SymbolOutOfRange {
                symbol,
                alphabet: self.size,
            })
        }
    }

    /// Checks symbols and adjacent pairs of a finite word.
    pub fn check_word(&self, word: &[Symbol]) -> Result<()> {
        for &s in word {
            self.check_symbol(s as usize)?;
        }
        for (pos, pair) in word.windows(2).enumerate() {
            if !self.has_edge(pair[0] as usize, pair[1] as usize) {
                return Err(Error::WordInadmissible {
                    word: format_word(word),
                    position: pos + 1,
                });
            }
        }
        Ok(())
    }

    pub fn is_admissible(&self, word: &[Symbol]) -> bool {
        self.check_word(word).is_ok()
    }

    /// Number of admissible words of length `len`, saturating.
    pub fn count_words(&self, len: usize) -> u128 {
        if len == 0 {
            return 1;
        }
        let mut counts = vec![1u128; self.size];
        for _ in 1..len {
            let mut next = vec![0u128; self.size];
            for (i, &c) in counts.iter().enumerate() {
                for j in self.successors(i) {
                    next[j] = next[j].saturating_add(c);
                }
            }
            counts = next;
        }
        counts.into_iter().fold(0u128, |a, c| a.saturating_add(c))
    }

    /// All admissible words of length `len` in lexicographic order.
    pub fn words(&self, len: usize) -> Vec<Word> {
        if len == 0 {
            return vec![Word::new()];
        }
        let mut out: Vec<Word> = (0..self.size).map(|s| vec![s as Symbol]).collect();
        for _ in 1..len {
            let mut next = Vec::with_capacity(out.len() * 2);
            for w in &out {
                let last = *w.last().unwrap() as usize;
                for j in self.successors(last) {
                    let mut e = w.clone();
                    e.push(j as Symbol);
                    next.push(e);
                }
            }
            out = next;
        }
        out
    }

    /// Like [`SftGraph::words`] but refuses to enumerate more than `cap` words.
    pub fn words_capped(&self, len: usize, cap: u128) -> Result<Vec<Word>> {
        let count = self.count_words(len);
        if count > cap {
            return Err(Error::Overflow {
                what: "admissible words",
                count,
                cap,
                hint: "; use beam mode",
            });
        }
        Ok(self.words(len))
    }

    pub fn least_predecessor(&self, to: usize) -> usize {
        self.predecessors(to)
            .next()
            .expect("validated graph is onto")
    }

    pub fn least_successor(&self, from: usize) -> usize {
        self.successors(from)
            .next()
            .expect("validated graph is total")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_examples() {
        let full = SftGraph::from_matrix(&[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(full.edge_list().len(), 4);
        let golden = SftGraph::from_matrix(&[vec![1, 1], vec![1, 0]]).unwrap();
        assert!(!golden.has_edge(1, 1));
        assert_eq!(
            SftGraph::from_matrix(&[vec![0, 1], vec![0, 1]]),
            Err(Error::NotSurjective(0))
        );
        assert_eq!(
            SftGraph::from_matrix(&[vec![1, 1], vec![0, 0]]),
            Err(Error::DeadState(1))
        );
        assert_eq!(SftGraph::new(0, &[]), Err(Error::EmptyAlphabet));
        assert!(matches!(
            SftGraph::from_edges(2, &[(0, 2)]),
            Err(Error::SymbolOutOfRange { symbol: 2, .. })
        ));
        assert!(matches!(
            SftGraph::new(2, &[vec![true, true], vec![true]]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn word_counts_match_enumeration() {
        let golden = SftGraph::from_matrix(&[vec![1, 1], vec![1, 0]]).unwrap();
        // Fibonacci numbers
        let expected = [1u128, 2, 3, 5, 8, 13, 21];
        for (len, &e) in expected.iter().enumerate() {
            assert_eq!(golden.count_words(len), e);
            assert_eq!(golden.words(len).len() as u128, e);
        }
        let words = golden.words(3);
        assert!(words.windows(2).all(|p| p[0] < p[1]));
        assert!(words.iter().all(|w| golden.is_admissible(w)));
        assert!(golden.words_capped(10, 50).is_err());
    }

    #[test]
    fn check_word_reports_position() {
        let golden = SftGraph::from_matrix(&[vec![1, 1], vec![1, 0]]).unwrap();
        assert_eq!(
            golden.check_word(&[0, 1, 1]),
            Err(Error::WordInadmissible {
                word: "011".into(),
                position: 2
            })
        );
    }
}
