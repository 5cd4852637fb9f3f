use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::algebra::{CrossedPoly, SemicrossedPoly};
use crate::dynamics::{format_word, Coordinates, Cycle, Symbol, Word};
use crate::error::{Error, Result};
use crate::extension::BiLassoPoint;
use crate::linalg::BandMatrix;

/// One Fourier term as the builders see it: at column `i` the coefficient
/// of `U^power` reads coordinates `start + i .. start + i + window`.
#[derive(Clone, Copy, Debug)]
struct Term<'a> {
    power: i64,
    start: i64,
    window: usize,
    values: &'a BTreeMap<Word, C64>,
}

impl Term<'_> {
    fn eval(&self, word: &[Symbol]) -> Result<C64> {
        self.values
            .get(word)
            .copied()
            .ok_or_else(|| Error::WordInadmissible {
                word: format_word(word),
                position: 0,
            })
    }
}

/// A truncation of a representation matrix: kept rows and columns
/// (inclusive index ranges) plus the terms of the element.
///
/// Entry `(j, i)` is the sum of `f_n` evaluated at column `i` over terms
/// with `j - i = n`. Entries falling outside the kept rows are dropped.
#[derive(Clone, Debug)]
pub struct Frame<'a> {
    terms: Vec<Term<'a>>,
    rows: (i64, i64),
    cols: (i64, i64),
}

impl<'a> Frame<'a> {
    fn semicrossed_terms(f: &'a SemicrossedPoly) -> Vec<Term<'a>> {
        f.coeffs()
            .iter()
            .map(|(&n, c)| Term {
                power: n as i64,
                start: 1,
                window: c.window(),
                values: c.values(),
            })
            .collect()
    }

    fn crossed_terms(g: &'a CrossedPoly) -> Vec<Term<'a>> {
        g.coeffs()
            .iter()
            .map(|(&n, c)| Term {
                power: n,
                start: c.start(),
                window: c.window(),
                values: c.values(),
            })
            .collect()
    }

    fn power_range(terms: &[Term]) -> (i64, i64) {
        let lo = terms.iter().map(|t| t.power).min().unwrap_or(0);
        let hi = terms.iter().map(|t| t.power).max().unwrap_or(0);
        (lo, hi)
    }

    /// The `k x k` corner of `pi_x(F)` (not certified).
    pub fn pi_x_corner(f: &'a SemicrossedPoly, k: usize) -> Self {
        let last = k as i64 - 1;
        Frame {
            terms: Self::semicrossed_terms(f),
            rows: (0, last),
            cols: (0, last),
        }
    }

    /// The certified truncation of `pi_x(F)`: `k` rows and the first
    /// `k - deg F` columns.
    pub fn pi_x(f: &'a SemicrossedPoly, k: usize) -> Self {
        let terms = Self::semicrossed_terms(f);
        let (_, hi) = Self::power_range(&terms);
        Frame {
            terms,
            rows: (0, k as i64 - 1),
            cols: (0, k as i64 - 1 - hi),
        }
    }

    /// Indices `-k ..= k` of `Pi_x(G)` (not certified).
    pub fn big_pi_x_corner(g: &'a CrossedPoly, k: usize) -> Self {
        let k = k as i64;
        Frame {
            terms: Self::crossed_terms(g),
            rows: (-k, k),
            cols: (-k, k),
        }
    }

    /// Rows `-k ..= k` of `Pi_x(G)` and the columns mapped inside them.
    pub fn big_pi_x(g: &'a CrossedPoly, k: usize) -> Self {
        let terms = Self::crossed_terms(g);
        let (lo, hi) = Self::power_range(&terms);
        let k = k as i64;
        Frame {
            terms,
            rows: (-k, k),
            cols: ((-k).max(-k - lo), k.min(k - hi)),
        }
    }

    pub fn rows(&self) -> (i64, i64) {
        self.rows
    }

    pub fn cols(&self) -> (i64, i64) {
        self.cols
    }

    pub fn n_rows(&self) -> usize {
        (self.rows.1 - self.rows.0 + 1).max(0) as usize
    }

    pub fn n_cols(&self) -> usize {
        (self.cols.1 - self.cols.0 + 1).max(0) as usize
    }

    fn reach(&self) -> (i64, i64) {
        let smin = self.terms.iter().map(|t| t.start).min().unwrap_or(1);
        let emax = self
            .terms
            .iter()
            .map(|t| t.start + t.window as i64 - 1)
            .max()
            .unwrap_or(1);
        (smin, emax)
    }

    /// First coordinate and number of coordinates read by the kept columns.
    pub fn coverage(&self) -> (i64, usize) {
        let (smin, emax) = self.reach();
        let first = smin + self.cols.0;
        let last = emax + self.cols.1;
        (first, (last - first + 1).max(0) as usize)
    }

    /// The truncation for a point whose coordinates `base ..` are given by
    /// `word`. Kept columns that read past the end of `word` are dropped,
    /// so prefixes give submatrices.
    pub fn assemble(&self, word: &[Symbol], base: i64) -> Result<BandMatrix> {
        let (smin, emax) = self.reach();
        let c0 = self.cols.0.max(base - smin);
        let c1 = self.cols.1.min(base + word.len() as i64 - 1 - emax);
        let ncols = (c1 - c0 + 1).max(0) as usize;
        let nrows = self.n_rows();
        let (lo, hi) = Self::power_range(&self.terms);
        let shift = c0 - self.rows.0;
        let mut m = BandMatrix::zeros(nrows, ncols, lo + shift, hi + shift);
        for t in &self.terms {
            for i in c0..=c1 {
                let j = i + t.power;
                if j < self.rows.0 || j > self.rows.1 {
                    continue;
                }
                let from = (t.start + i - base) as usize;
                let v = t.eval(&word[from..from + t.window])?;
                if v != C64::new(0.0, 0.0) {
                    m.add_at((j - self.rows.0) as usize, (i - c0) as usize, v);
                }
            }
        }
        Ok(m)
    }

    /// The truncation at a point.
    pub fn assemble_at(&self, point: &impl Coordinates) -> Result<BandMatrix> {
        let (base, len) = self.coverage();
        if len == 0 {
            return self.assemble(&[], base);
        }
        self.assemble(&point.symbols(base, len)?, base)
    }

    /// Operator norm of [`Frame::assemble`], without the dense
    /// cross-check; used inside searches.
    pub(crate) fn word_norm(&self, word: &[Symbol], base: i64) -> Result<f64> {
        self.assemble(word, base)?.operator_norm_unchecked()
    }
}

/// `pi_x(F)` on the first `k` basis vectors: entry `(j, i)` (0-based) is
/// `f_{j-i}(sigma^i x)`.
pub fn build_pi_x(f: &SemicrossedPoly, x: &impl Coordinates, k: usize) -> Result<DMatrix<C64>> {
    Ok(Frame::pi_x_corner(f, k).assemble_at(x)?.to_dense())
}

/// The certified `k x (k - deg F)` truncation of `pi_x(F)`.
pub fn build_pi_x_truncation(
    f: &SemicrossedPoly,
    x: &impl Coordinates,
    k: usize,
) -> Result<BandMatrix> {
    Frame::pi_x(f, k).assemble_at(x)
}

/// `Pi_x(G)` on indices `-k ..= k`: entry `(j, i)` is `g_{j-i}(phi~^i x~)`;
/// row and column `r` correspond to index `r - k`.
pub fn build_big_pi_x(g: &CrossedPoly, x: &BiLassoPoint, k: usize) -> Result<DMatrix<C64>> {
    Ok(Frame::big_pi_x_corner(g, k).assemble_at(x)?.to_dense())
}

/// Rows `-k ..= k` of `Pi_x(G)` restricted to the columns whose image stays
/// inside them.
pub fn build_big_pi_x_truncation(
    g: &CrossedPoly,
    x: &BiLassoPoint,
    k: usize,
) -> Result<BandMatrix> {
    Frame::big_pi_x(g, k).assemble_at(x)
}

fn check_unit(lambda: C64) -> Result<()> {
    let r = lambda.norm();
    if (r - 1.0).abs() > 1e-12 {
        return Err(Error::NotUnitModulus(r));
    }
    Ok(())
}

fn cyclic_matrix(terms: &[Term], y: &Cycle, lambda: C64) -> Result<DMatrix<C64>> {
    let v = y.vertices();
    let p = v.len() as i64;
    let mut m = DMatrix::zeros(v.len(), v.len());
    for t in terms {
        let scale = lambda.powi(t.power as i32);
        for i in 0..p {
            let word: Word = (0..t.window as i64)
                .map(|d| v[(t.start + i + d - 1).rem_euclid(p) as usize])
                .collect();
            let row = (i + t.power).rem_euclid(p) as usize;
            m[(row, i as usize)] += scale * t.eval(&word)?;
        }
    }
    Ok(m)
}

/// `Pi_{y, lambda}(F)` (also serving as `pi_{y, lambda}`): entry
/// `(i + n mod p, i)` collects `lambda^n f_n(sigma^i y)`.
pub fn build_pi_y_lambda(f: &SemicrossedPoly, y: &Cycle, lambda: C64) -> Result<DMatrix<C64>> {
    check_unit(lambda)?;
    cyclic_matrix(&Frame::semicrossed_terms(f), y, lambda)
}

/// `Pi_{y, lambda}(G)` for a crossed polynomial, on the periodic point of
/// the extension whose coordinate 1 is the first vertex of `y`.
pub fn build_big_pi_y_lambda(g: &CrossedPoly, y: &Cycle, lambda: C64) -> Result<DMatrix<C64>> {
    check_unit(lambda)?;
    cyclic_matrix(&Frame::crossed_terms(g), y, lambda)
}
