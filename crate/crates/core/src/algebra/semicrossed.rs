use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64 as C64;

use super::crossed::CrossedPoly;
use crate::dynamics::{CylinderFunction, SftGraph};
use crate::extension::embed_function;

/// A Fourier polynomial `sum_n U^n f_n` in the semicrossed product, with
/// the commutation rule `f U = U (f o phi)`.
///
/// Coefficients absent from the map are zero. Equality is semantic.
#[derive(Clone, Debug)]
pub struct SemicrossedPoly {
    graph: Arc<SftGraph>,
    coeffs: BTreeMap<usize, CylinderFunction>,
}

impl SemicrossedPoly {
    pub fn zero(graph: Arc<SftGraph>) -> Self {
        SemicrossedPoly {
            graph,
            coeffs: BTreeMap::new(),
        }
    }

    /// `U^power f`.
    pub fn monomial(power: usize, f: CylinderFunction) -> Self {
        let graph = f.graph().clone();
        SemicrossedPoly {
            graph,
            coeffs: BTreeMap::from([(power, f)]),
        }
    }

    pub fn one(graph: Arc<SftGraph>) -> Self {
        Self::monomial(0, CylinderFunction::one(graph))
    }

    /// The generating isometry `U`.
    pub fn u(graph: Arc<SftGraph>) -> Self {
        Self::monomial(1, CylinderFunction::one(graph))
    }

    pub fn from_terms(
        graph: Arc<SftGraph>,
        terms: impl IntoIterator<Item = (usize, CylinderFunction)>,
    ) -> Self {
        terms.into_iter().fold(Self::zero(graph), |acc, (n, f)| {
            acc.add(&Self::monomial(n, f))
        })
    }

    pub fn graph(&self) -> &Arc<SftGraph> {
        &self.graph
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, CylinderFunction> {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Option<&CylinderFunction> {
        self.coeffs.get(&n)
    }

    /// Highest power with a stored coefficient, 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.keys().next_back().copied().unwrap_or(0)
    }

    pub fn max_window(&self) -> usize {
        self.coeffs.values().map(|f| f.window()).max().unwrap_or(1)
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
        SemicrossedPoly {
            graph: self.graph.clone(),
            coeffs,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: C64) -> Self {
        SemicrossedPoly {
            graph: self.graph.clone(),
            coeffs: self.coeffs.iter().map(|(&n, f)| (n, f.scale(c))).collect(),
        }
    }

    /// `(U^m f)(U^n g) = U^(m+n) (f o phi^n) g`.
    pub fn multiply(&self, other: &Self) -> Self {
        let mut coeffs: BTreeMap<usize, CylinderFunction> = BTreeMap::new();
        for (&m, f) in &self.coeffs {
            for (&n, g) in &other.coeffs {
                let term = f.compose_shift(n).mul(g);
                let entry = match coeffs.remove(&(m + n)) {
                    Some(acc) => acc.add(&term),
                    None => term,
                };
                coeffs.insert(m + n, entry);
            }
        }
        SemicrossedPoly {
            graph: self.graph.clone(),
            coeffs,
        }
    }

    /// `||F||_1 = sum_n ||f_n||_inf`.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.values().map(|f| f.sup_norm()).sum()
    }

    /// The endomorphism `U^n f_n -> U^n (f_n o phi)`, i.e. conjugation
    /// `F -> U* F U` computed in the crossed product.
    pub fn alpha(&self) -> Self {
        SemicrossedPoly {
            graph: self.graph.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|(&n, f)| (n, f.compose_shift(1)))
                .collect(),
        }
    }

    /// Image in the crossed product over the natural extension.
    pub fn embed(&self) -> CrossedPoly {
        CrossedPoly::from_terms(
            Arc::new(self.graph.with_two_sided(true)),
            self.coeffs
                .iter()
                .map(|(&n, f)| (n as i64, embed_function(f))),
        )
    }

    /// Drops zero coefficients.
    pub fn trimmed(&self) -> Self {
        SemicrossedPoly {
            graph: self.graph.clone(),
            coeffs: self
                .coeffs
                .iter()
                .filter(|(_, f)| !f.is_zero())
                .map(|(&n, f)| (n, f.clone()))
                .collect(),
        }
    }
}

impl PartialEq for SemicrossedPoly {
    fn eq(&self, other: &Self) -> bool {
        if !self.graph.same_edges(&other.graph) {
            return false;
        }
        let a = self.trimmed();
        let b = other.trimmed();
        a.coeffs.len() == b.coeffs.len()
            && a.coeffs
                .iter()
                .zip(&b.coeffs)
                .all(|((m, f), (n, g))| m == n && f == g)
    }
}
