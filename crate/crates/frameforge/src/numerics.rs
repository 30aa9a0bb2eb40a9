//! Dense complex linear algebra primitives and the seeded random source.
//!
//! Matrices are column-major, which matches the column-as-frame-element
//! convention used everywhere else in the crate. Eigenvalues of Hermitian
//! matrices come from cyclic Jacobi sweeps; singular values come from
//! one-sided (Hestenes) Jacobi so that tiny singular values are resolved to
//! machine precision rather than to the square root of it.

use num_complex::Complex64;
use rand::Rng as _;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

pub type C64 = Complex64;

/// Relative tolerance at which a Hermitian input is accepted / a Jacobi
/// sweep is considered converged.
pub const HERMITIAN_TOL: f64 = 1e-10;
const JACOBI_OFF_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 10_000;

/// Dense complex matrix, column-major storage.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Matrix::zeros(rows, cols);
        for c in 0..cols {
            for r in 0..rows {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    pub fn from_columns(columns: &[Vec<C64>]) -> Self {
        let cols = columns.len();
        let rows = if cols == 0 { 0 } else { columns[0].len() };
        let mut m = Matrix::zeros(rows, cols);
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "ragged column set");
            m.col_mut(c).copy_from_slice(col);
        }
        m
    }

    /// Real matrix helper: rows given as slices of f64.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        Matrix::from_fn(r, c, |i, j| C64::new(rows[i][j], 0.0))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.data[c * self.rows + r]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: C64) {
        self.data[c * self.rows + r] = v;
    }

    pub fn col(&self, c: usize) -> &[C64] {
        &self.data[c * self.rows..(c + 1) * self.rows]
    }

    pub fn col_mut(&mut self, c: usize) -> &mut [C64] {
        &mut self.data[c * self.rows..(c + 1) * self.rows]
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn conj_transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for j in 0..other.cols {
            for k in 0..self.cols {
                let x = other.get(k, j);
                if x == C64::new(0.0, 0.0) {
                    continue;
                }
                let src = self.col(k);
                let dst = out.col_mut(j);
                for i in 0..self.rows {
                    dst[i] += src[i] * x;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![C64::new(0.0, 0.0); self.rows];
        for (k, &x) in v.iter().enumerate() {
            let src = self.col(k);
            for i in 0..self.rows {
                out[i] += src[i] * x;
            }
        }
        out
    }

    /// Submatrix keeping the given columns, in the given order.
    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.rows, idx.len());
        for (c, &j) in idx.iter().enumerate() {
            let src = self.col(j).to_vec();
            m.col_mut(c).copy_from_slice(&src);
        }
        m
    }

    pub fn scale(&self, s: C64) -> Matrix {
        let mut m = self.clone();
        for v in &mut m.data {
            *v *= s;
        }
        m
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (a, b) in m.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise deviation from the Hermitian transpose.
    pub fn hermitian_defect(&self) -> f64 {
        assert_eq!(self.rows, self.cols);
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }
}

/// `sum_k conj(a_k) b_k`; the Gram matrix below has `G[i][j] = inner(col_i, col_j)`.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn vec_norm(a: &[C64]) -> f64 {
    a.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// Gram matrix of the columns: `conj_transpose(frame) * frame`, Hermitian N x N.
pub fn gram(frame: &Matrix) -> Matrix {
    let n = frame.cols();
    let mut g = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = inner(frame.col(i), frame.col(j));
            g.set(i, j, v);
            g.set(j, i, v.conj());
        }
    }
    for i in 0..n {
        let d = g.get(i, i);
        g.set(i, i, C64::new(d.re, 0.0));
    }
    g
}

/// Row Gram `frame * conj_transpose(frame)`, Hermitian M x M.
pub fn row_gram(frame: &Matrix) -> Matrix {
    gram(&frame.conj_transpose())
}

/// Eigendecomposition of a Hermitian matrix: `h = vectors * diag(values) * vectors^*`,
/// eigenvalues real and sorted descending.
pub struct Eigh {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

/// Cyclic Jacobi sweeps with complex rotations. The off-diagonal mass is
/// driven below `JACOBI_OFF_TOL` times the Frobenius norm.
pub fn hermitian_eigh(h: &Matrix) -> Result<Eigh> {
    if h.rows() != h.cols() {
        return Err(Error::DimensionMismatch(format!(
            "hermitian_eigh needs a square matrix, got {}x{}",
            h.rows(),
            h.cols()
        )));
    }
    let n = h.rows();
    let scale = h.max_abs().max(1.0);
    let defect = h.hermitian_defect();
    if defect > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian(defect));
    }

    // symmetrize once so rounding in the input cannot accumulate
    let mut a = Matrix::from_fn(n, n, |i, j| {
        let v = (h.get(i, j) + h.get(j, i).conj()) * 0.5;
        if i == j {
            C64::new(v.re, 0.0)
        } else {
            v
        }
    });
    let mut v = Matrix::identity(n);
    let fro = a.frobenius_norm();
    if fro == 0.0 || n == 1 {
        let values = (0..n).map(|i| a.get(i, i).re).collect();
        return Ok(Eigh { values, vectors: v });
    }

    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a.get(i, j).norm_sqr();
            }
        }
        if (2.0 * off).sqrt() <= JACOBI_OFF_TOL * fro {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let mag = apq.norm();
                if mag <= JACOBI_OFF_TOL * fro / (n as f64) {
                    continue;
                }
                let u = apq / mag; // unimodular phase of the pivot
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // J[p][p] = c*u, J[p][q] = s*u, J[q][p] = -s, J[q][q] = c
                // columns: A <- A J
                for i in 0..n {
                    let aip = a.get(i, p);
                    let aiq = a.get(i, q);
                    a.set(i, p, aip * (c * u) - aiq * s);
                    a.set(i, q, aip * (s * u) + aiq * c);
                }
                // rows: A <- J^* A
                for j in 0..n {
                    let apj = a.get(p, j);
                    let aqj = a.get(q, j);
                    a.set(p, j, apj * (c * u.conj()) - aqj * s);
                    a.set(q, j, apj * (s * u.conj()) + aqj * c);
                }
                a.set(p, q, C64::new(0.0, 0.0));
                a.set(q, p, C64::new(0.0, 0.0));
                let dp = a.get(p, p);
                let dq = a.get(q, q);
                a.set(p, p, C64::new(dp.re, 0.0));
                a.set(q, q, C64::new(dq.re, 0.0));
                // accumulate eigenvectors: V <- V J
                for i in 0..n {
                    let vip = v.get(i, p);
                    let viq = v.get(i, q);
                    v.set(i, p, vip * (c * u) - viq * s);
                    v.set(i, q, vip * (s * u) + viq * c);
                }
            }
        }
    }
    if !converged {
        return Err(Error::FailedToConverge(MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(j, j).re.partial_cmp(&a.get(i, i).re).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| a.get(i, i).re).collect();
    let vectors = v.select_columns(&order);
    Ok(Eigh { values, vectors })
}

/// All real eigenvalues of a Hermitian matrix, descending with multiplicity.
pub fn hermitian_eigenvalues(h: &Matrix) -> Result<Vec<f64>> {
    hermitian_eigh(h).map(|e| e.values)
}

/// Singular values, descending, via one-sided Jacobi orthogonalization of the
/// columns. Working on the side with fewer columns keeps the count at
/// `min(rows, cols)` and resolves tiny singular values to machine precision.
pub fn singular_values(m: &Matrix) -> Vec<f64> {
    let work = if m.cols() > m.rows() { m.conj_transpose() } else { m.clone() };
    one_sided_jacobi(work)
}

fn one_sided_jacobi(mut a: Matrix) -> Vec<f64> {
    let n = a.cols();
    let scale = a.max_abs();
    if scale == 0.0 || n == 0 {
        return vec![0.0; n];
    }
    // a column annihilated down to rounding noise is numerically zero; its
    // pairs must not keep rotating on that noise
    let col_floor = (f64::EPSILON * a.frobenius_norm()).powi(2);
    for _sweep in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let gpp = a.col(p).iter().map(|v| v.norm_sqr()).sum::<f64>();
                let gqq = a.col(q).iter().map(|v| v.norm_sqr()).sum::<f64>();
                let gpq = inner(a.col(p), a.col(q));
                let mag = gpq.norm();
                if mag <= JACOBI_OFF_TOL * (gpp * gqq).sqrt()
                    || gpp <= col_floor
                    || gqq <= col_floor
                {
                    continue;
                }
                rotated = true;
                let u = gpq / mag;
                let tau = (gqq - gpp) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let rows = a.rows();
                for i in 0..rows {
                    let aip = a.get(i, p);
                    let aiq = a.get(i, q);
                    a.set(i, p, aip * (c * u) - aiq * s);
                    a.set(i, q, aip * (s * u) + aiq * c);
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = (0..n).map(|c| vec_norm(a.col(c))).collect();
    sv.sort_by(|x, y| y.partial_cmp(x).unwrap());
    sv
}

/// Largest singular value.
pub fn spectral_norm(m: &Matrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Smallest of the `min(rows, cols)` singular values.
pub fn smallest_singular_value(m: &Matrix) -> f64 {
    singular_values(m).last().copied().unwrap_or(0.0)
}

/// Relative threshold below which a singular value counts as zero for rank
/// certification.
pub const RANK_TOL: f64 = 1e-10;

/// Least-squares solution of `a x ~ y` through the pseudo-inverse.
///
/// Full column rank is certified from the singular values of `a` first;
/// the solve itself goes through the eigendecomposition of the Gram matrix
/// (normal equations), which is accurate at the mild condition numbers this
/// crate works with.
pub fn least_squares(a: &Matrix, y: &[C64]) -> Result<Vec<C64>> {
    if a.rows() != y.len() {
        return Err(Error::DimensionMismatch(format!(
            "least_squares: matrix has {} rows, rhs has {}",
            a.rows(),
            y.len()
        )));
    }
    let sv = singular_values(a);
    let smax = sv.first().copied().unwrap_or(0.0);
    let smin = sv.last().copied().unwrap_or(0.0);
    if a.cols() > a.rows() || smax == 0.0 || smin <= RANK_TOL * smax {
        return Err(Error::RankDeficient(if smax > 0.0 { smin / smax } else { 0.0 }));
    }
    let g = gram(a);
    let eig = hermitian_eigh(&g)?;
    // x = U diag(1/lambda) U^* A^* y
    let aty = a.conj_transpose().mul_vec(y);
    let n = a.cols();
    let mut coeffs = vec![C64::new(0.0, 0.0); n];
    for k in 0..n {
        let uk: Vec<C64> = (0..n).map(|i| eig.vectors.get(i, k)).collect();
        let proj = inner(&uk, &aty);
        let lambda = eig.values[k];
        if lambda > (RANK_TOL * smax) * (RANK_TOL * smax) {
            let w = proj / lambda;
            for i in 0..n {
                coeffs[i] += uk[i] * w;
            }
        }
    }
    Ok(coeffs)
}

/// Deterministic, seedable random source. Identical seeds produce identical
/// streams on every platform; `substream` derives independent streams for
/// per-trial parallelism without sharing state.
#[derive(Clone, Debug)]
pub struct Rng {
    seed: u64,
    chacha: ChaCha8Rng,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { seed, chacha: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent stream `id` of the same seed.
    pub fn substream(&self, id: u64) -> Rng {
        let mut chacha = ChaCha8Rng::seed_from_u64(self.seed);
        chacha.set_stream(id.wrapping_add(1));
        Rng { seed: self.seed, chacha }
    }

    /// Uniform on [0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.chacha.random::<f64>()
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.chacha.random_range(0..n)
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.chacha.sample(rand_distr::StandardNormal)
    }

    /// Complex Gaussian with total variance `sigma^2` per entry
    /// (`sigma^2 / 2` in each of the real and imaginary parts).
    pub fn complex_gaussian(&mut self, sigma: f64) -> C64 {
        let s = sigma / 2.0f64.sqrt();
        C64::new(s * self.standard_normal(), s * self.standard_normal())
    }

    /// Distinct indices drawn uniformly from `0..n`, returned sorted.
    pub fn distinct_indices(&mut self, n: usize, k: usize) -> Vec<usize> {
        assert!(k <= n);
        let mut picked = Vec::with_capacity(k);
        while picked.len() < k {
            let c = self.below(n);
            if !picked.contains(&c) {
                picked.push(c);
            }
        }
        picked.sort_unstable();
        picked
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }
}
