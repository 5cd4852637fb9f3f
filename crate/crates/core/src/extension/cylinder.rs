use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::dynamics::{format_word, Coordinates, CylinderFunction, SftGraph, Symbol, Word};
use crate::error::{Error, Result};

/// A locally constant function on the two-sided shift, reading coordinates
/// `start .. start + window`.
///
/// Functions pulled back from X along the projection are exactly those with
/// `start >= 1`. Equality is semantic, as for [`CylinderFunction`].
#[derive(Clone, Debug)]
pub struct TwoSidedCylinder {
    graph: Arc<SftGraph>,
    start: i64,
    window: usize,
    values: BTreeMap<Word, C64>,
}

impl TwoSidedCylinder {
    pub fn new(
        graph: Arc<SftGraph>,
        start: i64,
        window: usize,
        values: BTreeMap<Word, C64>,
    ) -> Result<Self> {
        let base = CylinderFunction::new(graph, window, values)?;
        Ok(Self::from_base(&base, start))
    }

    pub fn from_fn(
        graph: Arc<SftGraph>,
        start: i64,
        window: usize,
        f: impl Fn(&[Symbol]) -> C64,
    ) -> Self {
        let base = CylinderFunction::from_fn(graph, window, f);
        Self::from_base(&base, start)
    }

    /// The function `x~ -> f(x~_start ... x~_{start+k-1})`.
    pub fn from_base(f: &CylinderFunction, start: i64) -> Self {
        TwoSidedCylinder {
            graph: Arc::new(f.graph().with_two_sided(true)),
            start,
            window: f.window(),
            values: f.values().clone(),
        }
    }

    pub fn constant(graph: Arc<SftGraph>, value: C64) -> Self {
        Self::from_fn(graph, 1, 1, |_| value)
    }

    pub fn graph(&self) -> &Arc<SftGraph> {
        &self.graph
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn window(&self) -> usize {
        self.window
    }

    /// One past the last coordinate read.
    pub fn end(&self) -> i64 {
        self.start + self.window as i64
    }

    pub fn values(&self) -> &BTreeMap<Word, C64> {
        &self.values
    }

    pub fn eval_word(&self, word: &[Symbol]) -> Result<C64> {
        self.values
            .get(word)
            .copied()
            .ok_or_else(|| Error::WordInadmissible {
                word: format_word(word),
                position: 0,
            })
    }

    pub fn eval(&self, point: &impl Coordinates) -> Result<C64> {
        self.eval_word(&point.symbols(self.start, self.window)?)
    }

    /// `f~ o phi~^n`, a translation of the window by `n` (any sign).
    pub fn shift_window(&self, n: i64) -> Self {
        TwoSidedCylinder {
            start: self.start + n,
            ..self.clone()
        }
    }

    /// Present the same function on the coordinate range `start .. end`,
    /// which must contain the current window.
    pub fn extend_to(&self, start: i64, end: i64) -> Self {
        assert!(
            start <= self.start && end >= self.end(),
            "range must contain the window"
        );
        if start == self.start && end == self.end() {
            return self.clone();
        }
        let lead = (self.start - start) as usize;
        let k = self.window;
        let one_sided = self.graph.with_two_sided(false);
        let values = one_sided
            .words((end - start) as usize)
            .into_iter()
            .map(|w| {
                let v = self.values[&w[lead..lead + k]];
                (w, v)
            })
            .collect();
        TwoSidedCylinder {
            graph: self.graph.clone(),
            start,
            window: (end - start) as usize,
            values,
        }
    }

    fn zip_with(&self, other: &Self, op: impl Fn(C64, C64) -> C64) -> Self {
        assert!(
            self.graph.same_edges(&other.graph),
            "cylinder functions live on different shifts"
        );
        let start = self.start.min(other.start);
        let end = self.end().max(other.end());
        let a = self.extend_to(start, end);
        let b = other.extend_to(start, end);
        let values = a
            .values
            .iter()
            .map(|(w, &x)| (w.clone(), op(x, b.values[w])))
            .collect();
        TwoSidedCylinder { values, ..a }
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
        TwoSidedCylinder {
            values: self
                .values
                .iter()
                .map(|(w, &v)| (w.clone(), c * v))
                .collect(),
            ..self.clone()
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.values().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(|v| *v == C64::new(0.0, 0.0))
    }

    /// The same function as a one-sided cylinder on X, when `start >= 1`.
    pub fn to_one_sided(&self) -> Option<CylinderFunction> {
        if self.start < 1 {
            return None;
        }
        let base = CylinderFunction::new(
            Arc::new(self.graph.with_two_sided(false)),
            self.window,
            self.values.clone(),
        )
        .expect("values cover the admissible words");
        Some(base.compose_shift((self.start - 1) as usize))
    }
}

impl PartialEq for TwoSidedCylinder {
    fn eq(&self, other: &Self) -> bool {
        if !self.graph.same_edges(&other.graph) {
            return false;
        }
        let start = self.start.min(other.start);
        let end = self.end().max(other.end());
        self.extend_to(start, end).values == other.extend_to(start, end).values
    }
}
