//! Largest singular values of the (mostly banded) matrices produced by the
//! representations.
//!
//! The norm is `sqrt(lambda_max(M* M))`. A few steps of power iteration from
//! the normalized all-ones vector give a lower bracket; the eigenvalue is
//! then pinned down by bisection, counting eigenvalues above a shift with the
//! inertia of a banded `L D L*` factorization. Small matrices are
//! cross-checked against a dense SVD, which also serves as the fallback when
//! the factorization breaks down.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Matrices up to this size are cross-checked against a dense SVD.
pub const DENSE_CHECK_LIMIT: usize = 64;

const POWER_STEPS: usize = 60;
const CROSS_CHECK_TOL: f64 = 1e-9;

/// A rectangular matrix whose nonzero entries satisfy `lo <= r - c <= hi`.
#[derive(Clone, Debug, PartialEq)]
pub struct BandMatrix {
    rows: usize,
    cols: usize,
    lo: i64,
    hi: i64,
    data: Vec<C64>,
}

impl BandMatrix {
    pub fn zeros(rows: usize, cols: usize, lo: i64, hi: i64) -> Self {
        assert!(lo <= hi, "empty band");
        let width = (hi - lo + 1) as usize;
        BandMatrix {
            rows,
            cols,
            lo,
            hi,
            data: vec![C64::new(0.0, 0.0); width * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn band(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    fn width(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    fn slot(&self, r: usize, c: usize) -> Option<usize> {
        let d = r as i64 - c as i64;
        (r < self.rows && c < self.cols && d >= self.lo && d <= self.hi)
            .then(|| c * self.width() + (d - self.lo) as usize)
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.slot(r, c)
            .map(|s| self.data[s])
            .unwrap_or(C64::new(0.0, 0.0))
    }

    /// Adds `v` at `(r, c)`; panics outside the band.
    pub fn add_at(&mut self, r: usize, c: usize, v: C64) {
        let s = self.slot(r, c).expect("entry outside the band");
        self.data[s] += v;
    }

    pub fn from_dense(m: &DMatrix<C64>) -> Self {
        let zero = C64::new(0.0, 0.0);
        let (mut lo, mut hi) = (i64::MAX, i64::MIN);
        for c in 0..m.ncols() {
            for r in 0..m.nrows() {
                if m[(r, c)] != zero {
                    let d = r as i64 - c as i64;
                    lo = lo.min(d);
                    hi = hi.max(d);
                }
            }
        }
        if lo > hi {
            lo = 0;
            hi = 0;
        }
        let mut band = Self::zeros(m.nrows(), m.ncols(), lo, hi);
        for c in 0..m.ncols() {
            for r in 0..m.nrows() {
                if m[(r, c)] != zero {
                    band.add_at(r, c, m[(r, c)]);
                }
            }
        }
        band
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        DMatrix::from_fn(self.rows, self.cols, |r, c| self.get(r, c))
    }

    /// Row range touched by column `c`.
    fn col_rows(&self, c: usize) -> std::ops::Range<usize> {
        let start = (c as i64 + self.lo).max(0) as usize;
        let end = ((c as i64 + self.hi + 1).max(0) as usize).min(self.rows);
        start.min(end)..end
    }

    /// `M* M` as a banded Hermitian matrix.
    pub fn gram(&self) -> HermitianBand {
        let n = self.cols;
        let bw = ((self.hi - self.lo) as usize).min(n.saturating_sub(1));
        let mut g = HermitianBand::zeros(n, bw);
        for i in 0..n {
            let ri = self.col_rows(i);
            for j in i.saturating_sub(bw)..=i {
                let rj = self.col_rows(j);
                let (a, b) = (ri.start.max(rj.start), ri.end.min(rj.end));
                let mut s = C64::new(0.0, 0.0);
                for r in a..b {
                    s += self.get(r, i) * self.get(r, j).conj();
                }
                // lower triangle: G[i][j] = sum conj(M[r][i]) M[r][j]
                g.set(i, j, s.conj());
            }
        }
        g
    }

    /// Largest singular value.
    pub fn operator_norm(&self) -> Result<f64> {
        if self.rows == 0 || self.cols == 0 {
            return Ok(0.0);
        }
        let banded = self.gram().largest_eigenvalue().map(|l| l.max(0.0).sqrt());
        if self.cols.min(self.rows) <= DENSE_CHECK_LIMIT {
            let dense = dense_operator_norm(&self.to_dense())?;
            return Ok(match banded {
                Ok(b) if (b - dense).abs() <= CROSS_CHECK_TOL * dense.max(1.0) => b,
                _ => dense,
            });
        }
        match banded {
            Ok(b) => Ok(b),
            Err(_) => dense_operator_norm(&self.to_dense()),
        }
    }

    /// Largest singular value by bisection alone, falling back to the
    /// dense SVD only if the factorization breaks down.
    pub fn operator_norm_unchecked(&self) -> Result<f64> {
        if self.rows == 0 || self.cols == 0 {
            return Ok(0.0);
        }
        match self.gram().largest_eigenvalue() {
            Ok(l) => Ok(l.max(0.0).sqrt()),
            Err(_) => dense_operator_norm(&self.to_dense()),
        }
    }
}

/// Hermitian matrix with bandwidth `bw`, lower triangle stored by row.
#[derive(Clone, Debug)]
pub struct HermitianBand {
    n: usize,
    bw: usize,
    lower: Vec<C64>,
}

impl HermitianBand {
    pub fn zeros(n: usize, bw: usize) -> Self {
        HermitianBand {
            n,
            bw,
            lower: vec![C64::new(0.0, 0.0); n * (bw + 1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn set(&mut self, i: usize, j: usize, v: C64) {
        debug_assert!(j <= i && i - j <= self.bw);
        self.lower[i * (self.bw + 1) + (i - j)] = v;
    }

    /// Entry `(i, j)` for `j <= i`.
    #[inline]
    fn low(&self, i: usize, j: usize) -> C64 {
        if i - j > self.bw {
            C64::new(0.0, 0.0)
        } else {
            self.lower[i * (self.bw + 1) + (i - j)]
        }
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        if j <= i {
            self.low(i, j)
        } else {
            self.low(j, i).conj()
        }
    }

    fn matvec(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.n];
        for i in 0..self.n {
            for j in i.saturating_sub(self.bw)..=i {
                let a = self.low(i, j);
                out[i] += a * v[j];
                if j != i {
                    out[j] += a.conj() * v[i];
                }
            }
        }
        out
    }

    /// Largest absolute row sum, an upper bound for every eigenvalue.
    fn row_sum_bound(&self) -> f64 {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.bw);
                let hi = (i + self.bw).min(self.n - 1);
                (lo..=hi).map(|j| self.get(i, j).norm()).sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    /// Rayleigh quotient after power iteration from the all-ones vector;
    /// never exceeds the largest eigenvalue.
    pub fn power_estimate(&self, steps: usize) -> f64 {
        let mut v = vec![C64::new(1.0 / (self.n as f64).sqrt(), 0.0); self.n];
        let mut theta = 0.0;
        for _ in 0..steps {
            let w = self.matvec(&v);
            theta = v
                .iter()
                .zip(&w)
                .map(|(a, b)| (a.conj() * b).re)
                .sum::<f64>()
                .max(theta);
            let norm = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 || !norm.is_finite() {
                break;
            }
            v = w.into_iter().map(|x| x / norm).collect();
        }
        theta
    }

    /// Number of eigenvalues strictly above `shift` (Sylvester inertia of
    /// `A - shift I`).
    pub fn count_above(&self, shift: f64, scale: f64) -> Result<usize> {
        let b = self.bw;
        let n = self.n;
        let tiny = (f64::EPSILON * scale).max(f64::MIN_POSITIVE);
        // l[i * b + (i - j - 1)] = L[i][j] for i - b <= j < i
        let mut l = vec![C64::new(0.0, 0.0); n * b.max(1)];
        let mut d = vec![0.0f64; n];
        let mut positive = 0;
        let lidx = |i: usize, j: usize| i * b + (i - j - 1);
        for i in 0..n {
            let j0 = i.saturating_sub(b);
            for j in j0..i {
                let mut s = self.low(i, j);
                for k in j0.max(j.saturating_sub(b))..j {
                    s -= l[lidx(i, k)] * d[k] * l[lidx(j, k)].conj();
                }
                l[lidx(i, j)] = s / d[j];
            }
            let mut dd = self.low(i, i).re - shift;
            for k in j0..i {
                dd -= l[lidx(i, k)].norm_sqr() * d[k];
            }
            if !dd.is_finite() {
                return Err(Error::NoConvergence);
            }
            if dd == 0.0 {
                dd = -tiny;
            }
            if dd > 0.0 {
                positive += 1;
            }
            d[i] = dd;
        }
        Ok(positive)
    }

    /// Largest eigenvalue by inertia bisection, bracketed below by power
    /// iteration and above by the row-sum bound.
    pub fn largest_eigenvalue(&self) -> Result<f64> {
        if self.n == 0 {
            return Ok(0.0);
        }
        let upper = self.row_sum_bound();
        if upper == 0.0 {
            return Ok(0.0);
        }
        let theta = self.power_estimate(POWER_STEPS);
        let mut lo = theta * (1.0 - 1e-9);
        if lo <= 0.0 || self.count_above(lo, upper)? == 0 {
            lo = 0.0;
            if self.count_above(lo, upper)? == 0 {
                return Ok(0.0);
            }
        }
        let mut hi = upper * (1.0 + 1e-12) + f64::MIN_POSITIVE;
        if self.count_above(hi, upper)? != 0 {
            return Err(Error::NoConvergence);
        }
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_above(mid, upper)? > 0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(hi)
    }
}

/// Largest singular value from a dense SVD.
pub fn dense_operator_norm(m: &DMatrix<C64>) -> Result<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(0.0);
    }
    let svd = m
        .clone()
        .try_svd(false, false, f64::EPSILON, 10_000)
        .ok_or(Error::NoConvergence)?;
    Ok(svd.singular_values.iter().copied().fold(0.0, f64::max))
}

/// Largest singular value of an arbitrary complex matrix.
pub fn operator_norm(m: &DMatrix<C64>) -> Result<f64> {
    BandMatrix::from_dense(m).operator_norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn shift(k: usize) -> DMatrix<C64> {
        DMatrix::from_fn(k, k, |r, col| if r == col + 1 { c(1.0) } else { c(0.0) })
    }

    #[test]
    fn identity_and_shift() {
        assert_eq!(operator_norm(&DMatrix::identity(5, 5)).unwrap(), 1.0);
        for k in [2, 3, 10, 64, 65, 200] {
            assert_eq!(operator_norm(&shift(k)).unwrap(), 1.0, "K = {k}");
        }
    }

    #[test]
    fn golden_ratio_example() {
        let m = DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(1.0), c(1.0)]);
        let expected = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((operator_norm(&m).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn identity_plus_shift_closed_form() {
        // singular values of the K x K matrix I + S are 2 cos(j pi / (2K + 1))
        for k in [8usize, 100, 300] {
            let m = DMatrix::from_fn(k, k, |r, col| {
                if r == col || r == col + 1 {
                    c(1.0)
                } else {
                    c(0.0)
                }
            });
            let expected = 2.0 * (std::f64::consts::PI / (2 * k + 1) as f64).cos();
            let got = operator_norm(&m).unwrap();
            assert!(
                (got - expected).abs() < 1e-10 * expected,
                "K = {k}: {got} vs {expected}"
            );
        }
    }

    #[test]
    fn zero_and_empty() {
        assert_eq!(operator_norm(&DMatrix::zeros(3, 4)).unwrap(), 0.0);
        assert_eq!(operator_norm(&DMatrix::zeros(0, 0)).unwrap(), 0.0);
    }

    #[test]
    fn count_above_matches_spectrum() {
        let m = DMatrix::from_fn(6, 6, |r, col| c(((r * 7 + col * 3) % 5) as f64 - 2.0));
        let g = BandMatrix::from_dense(&m).gram();
        let dense = m.adjoint() * &m;
        let eig = dense.symmetric_eigenvalues();
        for shift in [0.5, 3.0, 10.0, 40.0] {
            let expected = eig.iter().filter(|&&e| e > shift).count();
            assert_eq!(g.count_above(shift, 100.0).unwrap(), expected);
        }
    }

    fn banded_strategy() -> impl Strategy<Value = DMatrix<C64>> {
        (70usize..140, 0usize..4, 0usize..3).prop_flat_map(|(n, below, above)| {
            proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0), n * n).prop_map(move |v| {
                DMatrix::from_fn(n, n, |r, col| {
                    let d = r as i64 - col as i64;
                    if d >= -(above as i64) && d <= below as i64 {
                        let (a, b) = v[r * n + col];
                        C64::new(a, b)
                    } else {
                        C64::new(0.0, 0.0)
                    }
                })
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn banded_norm_matches_dense_svd(m in banded_strategy()) {
            let banded = BandMatrix::from_dense(&m).gram().largest_eigenvalue().unwrap().sqrt();
            let dense = dense_operator_norm(&m).unwrap();
            prop_assert!((banded - dense).abs() <= 1e-9 * dense.max(1.0),
                "banded {} dense {}", banded, dense);
        }

        #[test]
        fn small_dense_matrices(v in proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..49)) {
            let n = (v.len() as f64).sqrt() as usize;
            let m = DMatrix::from_fn(n, n, |r, col| C64::new(v[r * n + col].0, v[r * n + col].1));
            let got = operator_norm(&m).unwrap();
            let dense = dense_operator_norm(&m).unwrap();
            prop_assert!((got - dense).abs() <= 1e-9 * dense.max(1.0));
        }
    }
}
