use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64 as C64;

use super::semicrossed::SemicrossedPoly;
use crate::dynamics::{CylinderFunction, SftGraph};
use crate::extension::TwoSidedCylinder;

/// A Fourier polynomial `sum_n U^n g_n`, `n` in Z, in the crossed product
/// over the natural extension; `U` is unitary and `g U = U (g o phi~)`.
#[derive(Clone, Debug)]
pub struct CrossedPoly {
    graph: Arc<SftGraph>,
    coeffs: BTreeMap<i64, TwoSidedCylinder>,
}

impl CrossedPoly {
    pub fn zero(graph: Arc<SftGraph>) -> Self {
        CrossedPoly {
            graph: Arc::new(graph.with_two_sided(true)),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn monomial(power: i64, g: TwoSidedCylinder) -> Self {
        CrossedPoly {
            graph: g.graph().clone(),
            coeffs: BTreeMap::from([(power, g)]),
        }
    }

    /// `U^power` (negative powers allowed).
    pub fn unitary_power(graph: Arc<SftGraph>, power: i64) -> Self {
        Self::monomial(power, TwoSidedCylinder::constant(graph, C64::new(1.0, 0.0)))
    }

    pub fn from_terms(
        graph: Arc<SftGraph>,
        terms: impl IntoIterator<Item = (i64, TwoSidedCylinder)>,
    ) -> Self {
        terms.into_iter().fold(Self::zero(graph), |acc, (n, g)| {
            acc.add(&Self::monomial(n, g))
        })
    }

    pub fn graph(&self) -> &Arc<SftGraph> {
        &self.graph
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, TwoSidedCylinder> {
        &self.coeffs
    }

    /// Smallest and largest stored power, `(0, 0)` when empty.
    pub fn power_range(&self) -> (i64, i64) {
        match (self.coeffs.keys().next(), self.coeffs.keys().next_back()) {
            (Some(&lo), Some(&hi)) => (lo, hi),
            _ => (0, 0),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut coeffs = self.coeffs.clone();
        for (&n, g) in &other.coeffs {
            let sum = match coeffs.get(&n) {
                Some(f) => f.add(g),
                None => g.clone(),
            };
            coeffs.insert(n, sum);
        }
        CrossedPoly {
            graph: self.graph.clone(),
            coeffs,
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        CrossedPoly {
            graph: self.graph.clone(),
            coeffs: self.coeffs.iter().map(|(&n, g)| (n, g.scale(c))).collect(),
        }
    }

    /// `(U^m f)(U^n g) = U^(m+n) (f o phi~^n) g`, with `phi~^n` a window
    /// translation by `n`.
    pub fn multiply(&self, other: &Self) -> Self {
        let mut coeffs: BTreeMap<i64, TwoSidedCylinder> = BTreeMap::new();
        for (&m, f) in &self.coeffs {
            for (&n, g) in &other.coeffs {
                let term = f.shift_window(n).mul(g);
                let entry = match coeffs.remove(&(m + n)) {
                    Some(acc) => acc.add(&term),
                    None => term,
                };
                coeffs.insert(m + n, entry);
            }
        }
        CrossedPoly {
            graph: self.graph.clone(),
            coeffs,
        }
    }

    /// `G U^m = sum_n U^(n+m) (g_n o phi~^m)`.
    pub fn right_multiply_u(&self, m: i64) -> Self {
        CrossedPoly {
            graph: self.graph.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|(&n, g)| (n + m, g.shift_window(m)))
                .collect(),
        }
    }

    /// Coefficientwise `g_n -> g_n o phi~^k`, the automorphism `alpha~^k`.
    pub fn alpha_power(&self, k: i64) -> Self {
        CrossedPoly {
            graph: self.graph.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|(&n, g)| (n, g.shift_window(k)))
                .collect(),
        }
    }

    pub fn l1_norm(&self) -> f64 {
        self.coeffs.values().map(|g| g.sup_norm()).sum()
    }

    /// Whether every power is nonnegative and every window starts at
    /// coordinate 1 or later, i.e. the element lies in the image of the
    /// semicrossed product.
    pub fn in_semicrossed_image(&self) -> bool {
        self.coeffs.iter().all(|(&n, g)| n >= 0 && g.start() >= 1)
    }

    /// The inverse of the embedding, for elements in its image.
    pub fn to_semicrossed(&self) -> Option<SemicrossedPoly> {
        if !self.in_semicrossed_image() {
            return None;
        }
        let one_sided = Arc::new(self.graph.with_two_sided(false));
        let terms: Vec<(usize, CylinderFunction)> = self
            .coeffs
            .iter()
            .map(|(&n, g)| (n as usize, g.to_one_sided().expect("start >= 1")))
            .collect();
        Some(SemicrossedPoly::from_terms(one_sided, terms))
    }

    /// Smallest `m >= 0` with `G U^m` in the semicrossed image, together
    /// with that product as a semicrossed polynomial.
    pub fn regularize_right_multiply(&self) -> (usize, SemicrossedPoly) {
        let m = self
            .coeffs
            .iter()
            .map(|(&n, g)| (-n).max(1 - g.start()))
            .fold(0, i64::max);
        let product = self.right_multiply_u(m);
        let poly = product
            .to_semicrossed()
            .expect("shift by m lands in the semicrossed image");
        (m as usize, poly)
    }

    fn trimmed(&self) -> BTreeMap<i64, &TwoSidedCylinder> {
        self.coeffs
            .iter()
            .filter(|(_, g)| !g.is_zero())
            .map(|(&n, g)| (n, g))
            .collect()
    }
}

impl PartialEq for CrossedPoly {
    fn eq(&self, other: &Self) -> bool {
        if !self.graph.same_edges(&other.graph) {
            return false;
        }
        let a = self.trimmed();
        let b = other.trimmed();
        a.len() == b.len() && a.iter().zip(&b).all(|((m, f), (n, g))| m == n && f == g)
    }
}
