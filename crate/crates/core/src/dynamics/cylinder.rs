use std::collections::BTreeMap;
use std::ops::{Add, Mul};
use std::sync::Arc;

use num_complex::Complex64 as C64;

use super::graph::SftGraph;
use super::point::Coordinates;
use super::word::{format_word, Symbol, Word};
use crate::error::{Error, Result};

/// A locally constant function on a one-sided shift: its value at `x`
/// depends only on `x_1 ... x_k`.
///
/// Equality is semantic: two functions with different windows are equal when
/// they agree after extending both to the larger window.
#[derive(Clone, Debug)]
pub struct CylinderFunction {
    graph: Arc<SftGraph>,
    window: usize,
    values: BTreeMap<Word, C64>,
}

impl CylinderFunction {
    /// `values` must cover exactly the admissible words of length `window`.
    pub fn new(graph: Arc<SftGraph>, window: usize, values: BTreeMap<Word, C64>) -> Result<Self> {
        if window == 0 {
            return Err(Error::EmptyWindow);
        }
        for word in values.keys() {
            if word.len() != window {
                return Err(Error::WordInadmissible {
                    word: format_word(word),
                    position: 0,
                });
            }
            graph.check_word(word)?;
        }
        if let Some(missing) = graph
            .words(window)
            .into_iter()
            .find(|w| !values.contains_key(w))
        {
            return Err(Error::MissingValue(format_word(&missing)));
        }
        Ok(CylinderFunction {
            graph,
            window,
            values,
        })
    }

    pub fn from_fn(graph: Arc<SftGraph>, window: usize, f: impl Fn(&[Symbol]) -> C64) -> Self {
        assert!(window >= 1, "cylinder window must be positive");
        let values = graph.words(window).into_iter().map(|w| {
            let v = f(&w);
            (w, v)
        });
        CylinderFunction {
            values: values.collect(),
            graph,
            window,
        }
    }

    pub fn constant(graph: Arc<SftGraph>, value: C64) -> Self {
        Self::from_fn(graph, 1, |_| value)
    }

    pub fn one(graph: Arc<SftGraph>) -> Self {
        Self::constant(graph, C64::new(1.0, 0.0))
    }

    pub fn zero(graph: Arc<SftGraph>) -> Self {
        Self::constant(graph, C64::new(0.0, 0.0))
    }

    /// Indicator of the cylinder set `[word]`.
    pub fn indicator(graph: Arc<SftGraph>, word: &[Symbol]) -> Self {
        Self::from_fn(graph, word.len(), |w| {
            if w == word {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    pub fn graph(&self) -> &Arc<SftGraph> {
        &self.graph
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn values(&self) -> &BTreeMap<Word, C64> {
        &self.values
    }

    /// Value on a word of length at least `window`; only the first `window`
    /// symbols are read.
    pub fn eval_word(&self, word: &[Symbol]) -> Result<C64> {
        if word.len() < self.window {
            return Err(Error::WordInadmissible {
                word: format_word(word),
                position: word.len(),
            });
        }
        self.values
            .get(&word[..self.window])
            .copied()
            .ok_or_else(|| Error::WordInadmissible {
                word: format_word(&word[..self.window]),
                position: 0,
            })
    }

    pub fn eval(&self, point: &impl Coordinates) -> Result<C64> {
        self.eval_word(&point.symbols(1, self.window)?)
    }

    /// `f o phi^n`: window grows to `k + n` and reads symbols `n+1 ... n+k`.
    pub fn compose_shift(&self, n: usize) -> Self {
        if n == 0 {
            return self.clone();
        }
        let k = self.window;
        Self::from_fn(self.graph.clone(), k + n, |w| self.values[&w[n..n + k]])
    }

    /// The same function presented with a larger window.
    pub fn extend_window(&self, window: usize) -> Self {
        assert!(window >= self.window, "cannot shrink a cylinder window");
        if window == self.window {
            return self.clone();
        }
        Self::from_fn(self.graph.clone(), window, |w| {
            self.values[&w[..self.window]]
        })
    }

    fn zip_with(&self, other: &Self, op: impl Fn(C64, C64) -> C64) -> Self {
        assert!(
            self.graph.same_edges(&other.graph),
            "cylinder functions live on different shifts"
        );
        let k = self.window.max(other.window);
        Self::from_fn(self.graph.clone(), k, |w| {
            op(
                self.values[&w[..self.window]],
                other.values[&w[..other.window]],
            )
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, c: C64) -> Self {
        CylinderFunction {
            graph: self.graph.clone(),
            window: self.window,
            values: self
                .values
                .iter()
                .map(|(w, &v)| (w.clone(), c * v))
                .collect(),
        }
    }

    /// Maximum of `|f|` over admissible words, which is the sup norm on X.
    pub fn sup_norm(&self) -> f64 {
        self.values.values().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(|v| *v == C64::new(0.0, 0.0))
    }

    /// Largest componentwise difference to `other` after window alignment.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.sub(other).sup_norm()
    }

    /// Smallest window presenting the same function.
    pub fn reduced(&self) -> Self {
        let mut current = self.clone();
        while current.window > 1 {
            let k = current.window - 1;
            let shorter = Self::from_fn(current.graph.clone(), k, |w| {
                // any admissible extension; equality is checked below
                let mut ext = w.to_vec();
                ext.push(current.graph.least_successor(*w.last().unwrap() as usize) as Symbol);
                current.values[&ext]
            });
            if shorter.extend_window(current.window).values != current.values {
                break;
            }
            current = shorter;
        }
        current
    }
}

impl PartialEq for CylinderFunction {
    fn eq(&self, other: &Self) -> bool {
        if !self.graph.same_edges(&other.graph) {
            return false;
        }
        let k = self.window.max(other.window);
        self.extend_window(k).values == other.extend_window(k).values
    }
}

impl Add for &CylinderFunction {
    type Output = CylinderFunction;
    fn add(self, rhs: Self) -> CylinderFunction {
        CylinderFunction::add(self, rhs)
    }
}

impl Mul for &CylinderFunction {
    type Output = CylinderFunction;
    fn mul(self, rhs: Self) -> CylinderFunction {
        CylinderFunction::mul(self, rhs)
    }
}
