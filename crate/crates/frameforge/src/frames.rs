//! Every frame family the crate can build, as `Frame` values: harmonic and
//! Vandermonde submatrices, Steiner and Paley equiangular tight frames, Gabor
//! and chirp systems, spherical 2-designs, the code-based family over
//! GF(2^m), and the seeded random families. Deterministic constructions are
//! bit-stable across runs; random ones are bit-stable per seed.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::finite::{self, DesignIncidence, FiniteField, HadamardKind};
use crate::numerics::{self, vec_norm, Matrix, Rng, C64};
use crate::{Error, Result};

const UNIT_NORM_TOL: f64 = 1e-9;

/// Construction metadata carried by every frame.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameTags {
    /// family token, e.g. "steiner", "paley", "gabor-alltop"
    pub family: String,
    /// single-token parameter summary, no whitespace
    pub params: String,
    pub seed: Option<u64>,
    /// columns are claimed unit norm (validated on construction)
    pub unit_norm: bool,
    /// rows are claimed orthogonal with common norm N/M
    pub tight: bool,
    /// off-diagonal Gram magnitudes are claimed constant (Welch equality)
    pub equiangular: bool,
}

impl FrameTags {
    pub fn new(family: &str, params: &str) -> FrameTags {
        FrameTags {
            family: family.to_string(),
            params: params.to_string(),
            seed: None,
            unit_norm: false,
            tight: false,
            equiangular: false,
        }
    }
}

/// An M x N frame: dense complex matrix whose columns are the frame elements.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    pub matrix: Matrix,
    pub tags: FrameTags,
}

impl Frame {
    /// Validates the frame invariants: M <= N, finite entries, no zero
    /// column, and unit column norms whenever the tags claim them.
    pub fn new(matrix: Matrix, tags: FrameTags) -> Result<Frame> {
        if matrix.rows() > matrix.cols() || matrix.cols() == 0 {
            return Err(Error::InvalidFrame(format!(
                "need M <= N with N >= 1, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if !matrix.is_finite() {
            return Err(Error::InvalidFrame("non-finite entry".into()));
        }
        for c in 0..matrix.cols() {
            let norm = vec_norm(matrix.col(c));
            if norm == 0.0 {
                return Err(Error::InvalidFrame(format!("column {c} is zero")));
            }
            if tags.unit_norm && (norm - 1.0).abs() > UNIT_NORM_TOL {
                return Err(Error::InvalidFrame(format!(
                    "column {c} has norm {norm} but the frame is tagged unit-norm"
                )));
            }
        }
        if tags.tight {
            let target = matrix.cols() as f64 / matrix.rows() as f64;
            let rg = numerics::row_gram(&matrix);
            for i in 0..matrix.rows() {
                for j in 0..matrix.rows() {
                    let want = if i == j { target } else { 0.0 };
                    if (rg.get(i, j) - C64::new(want, 0.0)).norm() > 1e-8 * target.max(1.0) {
                        return Err(Error::InvalidFrame(format!(
                            "row Gram entry ({i},{j}) breaks the claimed tightness"
                        )));
                    }
                }
            }
        }
        Ok(Frame { matrix, tags })
    }

    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    /// Columns rescaled to unit norm; reports whether anything changed.
    pub fn normalized(&self) -> (Frame, bool) {
        let mut changed = false;
        let mut m = self.matrix.clone();
        for c in 0..m.cols() {
            let norm = vec_norm(m.col(c));
            if (norm - 1.0).abs() > UNIT_NORM_TOL {
                changed = true;
                for v in m.col_mut(c) {
                    *v /= norm;
                }
            }
        }
        let mut tags = self.tags.clone();
        tags.unit_norm = true;
        if changed {
            // rescaling can break row orthogonality claims
            tags.tight = false;
            tags.equiangular = false;
        }
        (Frame { matrix: m, tags }, changed)
    }

    /// Frame file format: header `M N family params seed`, then M*N lines
    /// `re im` in column-major order, 17 significant digits. Round-trips
    /// bit-exactly.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let seed = match self.tags.seed {
            Some(s) => s.to_string(),
            None => "-".to_string(),
        };
        let _ = writeln!(
            out,
            "{} {} {} {} {}",
            self.rows(),
            self.cols(),
            self.tags.family,
            self.tags.params,
            seed
        );
        for c in 0..self.cols() {
            for &v in self.matrix.col(c) {
                let _ = writeln!(out, "{:.16e} {:.16e}", v.re, v.im);
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Frame> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty frame file".into()))?;
        let toks: Vec<&str> = header.split_whitespace().collect();
        if toks.len() != 5 {
            return Err(Error::Parse("frame header needs: M N family params seed".into()));
        }
        let rows: usize =
            toks[0].parse().map_err(|_| Error::Parse(format!("bad row count {}", toks[0])))?;
        let cols: usize =
            toks[1].parse().map_err(|_| Error::Parse(format!("bad column count {}", toks[1])))?;
        let seed = if toks[4] == "-" {
            None
        } else {
            Some(toks[4].parse().map_err(|_| Error::Parse(format!("bad seed {}", toks[4])))?)
        };
        let mut data = Vec::with_capacity(rows * cols);
        for line in lines.take(rows * cols) {
            let mut parts = line.split_whitespace();
            let re: f64 = parts
                .next()
                .ok_or_else(|| Error::Parse("missing real part".into()))?
                .parse()
                .map_err(|_| Error::Parse("bad real part".into()))?;
            let im: f64 = parts
                .next()
                .ok_or_else(|| Error::Parse("missing imaginary part".into()))?
                .parse()
                .map_err(|_| Error::Parse("bad imaginary part".into()))?;
            data.push(C64::new(re, im));
        }
        if data.len() != rows * cols {
            return Err(Error::Parse(format!(
                "expected {} entries, found {}",
                rows * cols,
                data.len()
            )));
        }
        let mut matrix = Matrix::zeros(rows, cols);
        for c in 0..cols {
            matrix.col_mut(c).copy_from_slice(&data[c * rows..(c + 1) * rows]);
        }
        let mut tags = FrameTags::new(toks[2], toks[3]);
        tags.seed = seed;
        // claimed-properties flags are not serialized; re-derive conservatively
        tags.unit_norm = (0..cols).all(|c| (vec_norm(matrix.col(c)) - 1.0).abs() <= UNIT_NORM_TOL);
        Frame::new(matrix, tags)
    }

    pub fn write_to(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn read_from(path: &std::path::Path) -> Result<Frame> {
        let text = std::fs::read_to_string(path)?;
        Frame::from_text(&text)
    }
}

fn unit(ph: f64) -> C64 {
    C64::new(ph.cos(), ph.sin())
}

// ---------------------------------------------------------------------------
// Harmonic / Vandermonde
// ---------------------------------------------------------------------------

/// Rows of the n x n DFT (entries `omega^(mc)`, `omega = e^(-2 pi i/n)`)
/// indexed by `rows`, optionally with columns normalized to unit norm.
pub fn build_harmonic(n: usize, rows: &[usize], normalize: bool) -> Result<Frame> {
    if rows.is_empty() {
        return Err(Error::EmptyRowSet);
    }
    let mut rows = rows.to_vec();
    rows.sort_unstable();
    rows.dedup();
    if rows.iter().any(|&r| r >= n) {
        return Err(Error::Parse(format!("row index out of range 0..{n}")));
    }
    let m = rows.len();
    let scale = if normalize { 1.0 / (m as f64).sqrt() } else { 1.0 };
    let step = -2.0 * PI / n as f64;
    let matrix = Matrix::from_fn(m, n, |r, c| unit(step * ((rows[r] * c) % n) as f64) * scale);
    let mut tags = FrameTags::new("harmonic", &format!("n={n},rows={}", join(&rows)));
    tags.unit_norm = normalize;
    // the tight flag asserts the unit-norm calibration phi phi^* = (N/M) I
    tags.tight = normalize;
    Frame::new(matrix, tags)
}

/// Vandermonde matrix with the given bases: rows 1, a, ..., a^(m-1).
/// Duplicate bases are allowed; spark analysis lives elsewhere.
pub fn build_vandermonde(bases: &[C64], m: usize) -> Result<Frame> {
    if m == 0 || bases.is_empty() {
        return Err(Error::InvalidFrame("vandermonde needs m >= 1 and at least one base".into()));
    }
    let matrix = Matrix::from_fn(m, bases.len(), |r, c| bases[c].powu(r as u32));
    let tags = FrameTags::new("vandermonde", &format!("m={m},n={}", bases.len()));
    Frame::new(matrix, tags)
}

/// Vandermonde frame with n bases equally spaced on the complex unit circle,
/// columns normalized.
pub fn build_vandermonde_unit_circle(m: usize, n: usize) -> Result<Frame> {
    let bases: Vec<C64> = (0..n).map(|k| unit(2.0 * PI * k as f64 / n as f64)).collect();
    let f = build_vandermonde(&bases, m)?;
    let (mut normed, _) = f.normalized();
    normed.tags.family = "vandermonde-equispaced".into();
    normed.tags.tight = true;
    Ok(normed)
}

// ---------------------------------------------------------------------------
// Steiner ETFs
// ---------------------------------------------------------------------------

/// How to assign Hadamard rows to the ones of each incidence column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowChoice {
    /// Skip the all-ones row 0 and use rows 1..=r in order. Guarantees a
    /// zero column sum, which the average-coherence analysis relies on.
    SkipAllOnes,
    /// Explicit row indices into H, one per incidence one.
    Explicit(Vec<usize>),
}

/// Steiner equiangular tight frame: for each point of the design, the rows
/// of a unimodular orthogonal-row matrix H are scattered over the blocks
/// containing that point, then everything is scaled by sqrt((k-1)/(v-1)).
pub fn build_steiner_etf(
    design: &DesignIncidence,
    h_kind: HadamardKind,
    row_choice: &RowChoice,
) -> Result<Frame> {
    let h_size = 1 + design.r;
    let h = match finite::hadamard(h_size, h_kind) {
        Ok(h) => h,
        Err(Error::UnsupportedSize(..)) => return Err(Error::HadamardUnavailable(h_size)),
        Err(e) => return Err(e),
    };
    let rows_for_ones: Vec<usize> = match row_choice {
        RowChoice::SkipAllOnes => (1..=design.r).collect(),
        RowChoice::Explicit(rows) => {
            if rows.len() != design.r || rows.iter().any(|&r| r >= h_size) {
                return Err(Error::InadmissibleParameters(format!(
                    "row choice must list {} distinct rows below {}",
                    design.r, h_size
                )));
            }
            rows.clone()
        }
    };
    let m = design.b;
    let n = design.v * h_size;
    let scale = (((design.k - 1) as f64) / ((design.v - 1) as f64)).sqrt();
    let mut matrix = Matrix::zeros(m, n);
    for point in 0..design.v {
        let blocks = design.blocks_through(point);
        for (one_idx, &block_row) in blocks.iter().enumerate() {
            let h_row = rows_for_ones[one_idx];
            for h_col in 0..h_size {
                let col = point * h_size + h_col;
                matrix.set(block_row, col, h.get(h_row, h_col) * scale);
            }
        }
    }
    let kind = match h_kind {
        HadamardKind::RealSylvester => "real",
        HadamardKind::ComplexDft => "dft",
    };
    let mut tags = FrameTags::new(
        "steiner",
        &format!("v={},k={},hadamard={kind}", design.v, design.k),
    );
    tags.unit_norm = true;
    tags.tight = true;
    tags.equiangular = true;
    Frame::new(matrix, tags)
}

// ---------------------------------------------------------------------------
// Paley ETFs
// ---------------------------------------------------------------------------

/// M x 2M equiangular tight frame from the quadratic-residue rows of the
/// p x p DFT plus one identity basis element, for prime p = 1 mod 4.
pub fn build_paley_etf(p: u64) -> Result<Frame> {
    if !finite::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p % 4 != 1 {
        return Err(Error::BadPrime(p));
    }
    let residues = finite::quadratic_residues(p);
    let m = residues.len(); // (p + 1)/2, zero included
    debug_assert_eq!(m as u64, (p + 1) / 2);
    let n = 2 * m;
    let step = -2.0 * PI / p as f64;
    let d0 = (1.0 / p as f64).sqrt();
    let dk = (2.0 / p as f64).sqrt();
    let mut matrix = Matrix::zeros(m, n);
    for (r, &res) in residues.iter().enumerate() {
        let scale = if res == 0 { d0 } else { dk };
        for c in 0..(p as usize) {
            matrix.set(r, c, unit(step * ((res as usize * c) % p as usize) as f64) * scale);
        }
    }
    matrix.set(0, p as usize, C64::new(1.0, 0.0));
    let mut tags = FrameTags::new("paley", &format!("p={p}"));
    tags.unit_norm = true;
    tags.tight = true;
    tags.equiangular = true;
    Frame::new(matrix, tags)
}

// ---------------------------------------------------------------------------
// Gabor and chirp systems
// ---------------------------------------------------------------------------

/// Seed for the Gabor system.
#[derive(Clone, Debug, PartialEq)]
pub enum GaborSeed {
    /// `f(t) = e^(2 pi i t^3 / M)/sqrt(M)`.
    Alltop,
    /// `g(t) = e^(2 pi i theta_t)/sqrt(M)` with theta uniform on [0,1).
    Steinhaus(u64),
}

/// M x M^2 Gabor frame of all time-frequency shifts of the seed, ordered
/// row-major over (x, y) in Z_M x Z_M.
///
/// Shifts are applied modulation-covariantly, `f_xy(t) = f(t-x) e^(2 pi i y (t-x)/M)`,
/// which reproduces the catalog's worked average-coherence value; the
/// translate-first ordering differs from it only by a unimodular column
/// scaling, so worst-case coherence, tightness, and the spectral norm agree.
pub fn build_gabor(m: usize, seed_kind: &GaborSeed) -> Result<Frame> {
    if m == 0 {
        return Err(Error::InvalidFrame("gabor needs m >= 1".into()));
    }
    let root = 1.0 / (m as f64).sqrt();
    let (seed_vec, family, seed): (Vec<C64>, &str, Option<u64>) = match seed_kind {
        GaborSeed::Alltop => (
            (0..m)
                .map(|t| unit(2.0 * PI * ((t * t * t) % m) as f64 / m as f64) * root)
                .collect(),
            "gabor-alltop",
            None,
        ),
        GaborSeed::Steinhaus(s) => {
            let mut rng = Rng::new(*s);
            (
                (0..m).map(|_| unit(2.0 * PI * rng.uniform()) * root).collect(),
                "gabor-steinhaus",
                Some(*s),
            )
        }
    };
    let mut matrix = Matrix::zeros(m, m * m);
    for x in 0..m {
        for y in 0..m {
            let col = x * m + y;
            for t in 0..m {
                let shifted = (t + m - x % m) % m;
                let mod_phase = unit(2.0 * PI * (y * shifted) as f64 / m as f64);
                matrix.set(t, col, seed_vec[shifted] * mod_phase);
            }
        }
    }
    let mut tags = FrameTags::new(family, &format!("m={m}"));
    tags.seed = seed;
    tags.unit_norm = true;
    tags.tight = true;
    Frame::new(matrix, tags)
}

/// M x M^2 chirp frame for prime M: all powers and modulates of
/// `h(t) = e^(pi i t(t-M)/M)`, ordered row-major over (a, b).
pub fn build_chirp(m: usize) -> Result<Frame> {
    if !finite::is_prime(m as u64) {
        return Err(Error::NotPrime(m as u64));
    }
    let root = 1.0 / (m as f64).sqrt();
    // phase of h(t)^a e^(2 pi i b t / M)
    let mut matrix = Matrix::zeros(m, m * m);
    for a in 0..m {
        for b in 0..m {
            let col = a * m + b;
            for t in 0..m {
                let chirp_ph = PI * (t as f64) * (t as f64 - m as f64) / m as f64 * a as f64;
                let mod_ph = 2.0 * PI * (b * t) as f64 / m as f64;
                matrix.set(t, col, unit(chirp_ph + mod_ph) * root);
            }
        }
    }
    let mut tags = FrameTags::new("chirp", &format!("m={m}"));
    tags.unit_norm = true;
    tags.tight = true;
    Frame::new(matrix, tags)
}

// ---------------------------------------------------------------------------
// Spherical 2-designs
// ---------------------------------------------------------------------------

/// Real M x N unit norm tight frame with zero column sum, from the cosine and
/// sine parts of nonzero DFT rows. M = 2 |rows|, N = dft_size.
pub fn build_spherical_2design(dft_size: usize, rows: &[usize]) -> Result<Frame> {
    if rows.is_empty() {
        return Err(Error::EmptyRowSet);
    }
    if rows.contains(&0) {
        return Err(Error::ZeroIndexIncluded);
    }
    let mut rows = rows.to_vec();
    rows.sort_unstable();
    rows.dedup();
    let m = 2 * rows.len();
    if dft_size < 2 * m {
        return Err(Error::InadmissibleParameters(format!(
            "spherical 2-design needs dft_size >= 2M = {}, got {dft_size}",
            2 * m
        )));
    }
    let amp = (2.0 / m as f64).sqrt();
    let matrix = Matrix::from_fn(m, dft_size, |k0, l| {
        let k = k0 + 1; // 1-indexed as in the defining formula
        let freq = rows[(k + 1) / 2 - 1];
        let ph = 2.0 * PI * (freq * l) as f64 / dft_size as f64;
        if k % 2 == 1 {
            C64::new(amp * ph.cos(), 0.0)
        } else {
            C64::new(amp * ph.sin(), 0.0)
        }
    });
    let mut tags =
        FrameTags::new("spherical2design", &format!("n={dft_size},rows={}", join(&rows)));
    tags.unit_norm = true;
    tags.tight = true;
    Frame::new(matrix, tags)
}

// ---------------------------------------------------------------------------
// Code-based frames over GF(2^m)
// ---------------------------------------------------------------------------

/// 2^m x 2^((t+1)m) real +-1/sqrt(2^m) unit norm tight frame with entries
/// `(-1)^Tr[a_0 x + sum_i a_i x^(2^i + 1)]`. Rows are indexed by x in
/// GF(2^m); columns by tuples (a_0..a_t), a_0 most significant.
pub fn build_code_frame(m: usize, t: usize) -> Result<Frame> {
    let field = FiniteField::new(2, m)?;
    let q = field.order() as usize;
    let n_cols = q.pow((t + 1) as u32);
    let root = 1.0 / (q as f64).sqrt();
    // precompute x^(2^i + 1) for each x and i = 1..=t
    let xs: Vec<_> = field.elements().collect();
    let mut powers: Vec<Vec<_>> = Vec::with_capacity(t);
    for i in 1..=t {
        let e = (1u64 << i) + 1;
        powers.push(xs.iter().map(|x| field.pow(x, e)).collect());
    }
    let mut matrix = Matrix::zeros(q, n_cols);
    for col in 0..n_cols {
        // decode (a_0, ..., a_t), a_0 most significant
        let mut rest = col;
        let mut alpha_rev = Vec::with_capacity(t + 1);
        for _ in 0..=t {
            alpha_rev.push(field.element((rest % q) as u64));
            rest /= q;
        }
        alpha_rev.reverse(); // now alpha_rev[0] = a_0
        for (row, x) in xs.iter().enumerate() {
            let mut acc = field.mul(&alpha_rev[0], x);
            for (i, pw) in powers.iter().enumerate() {
                acc = field.add(&acc, &field.mul(&alpha_rev[i + 1], &pw[row]));
            }
            let sign = if field.trace(&acc) == 0 { 1.0 } else { -1.0 };
            matrix.set(row, col, C64::new(sign * root, 0.0));
        }
    }
    let mut tags = FrameTags::new("code", &format!("m={m},t={t}"));
    tags.unit_norm = true;
    tags.tight = true;
    Frame::new(matrix, tags)
}

// ---------------------------------------------------------------------------
// Random families
// ---------------------------------------------------------------------------

/// Which random family to draw.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RandomKind {
    /// Real iid standard Gaussian entries, columns normalized.
    NormalizedGaussian { m: usize, n: usize },
    /// Rows of the n x n DFT kept independently with probability m/n, then
    /// columns normalized. The realized row count is part of the parameters.
    RandomHarmonic { m: usize, n: usize },
    /// Gabor frame from a Steinhaus seed.
    SteinhausGabor { m: usize },
}

pub fn build_random(kind: &RandomKind, rng: &mut Rng) -> Result<Frame> {
    match kind {
        RandomKind::NormalizedGaussian { m, n } => {
            let matrix = Matrix::from_fn(*m, *n, |_, _| C64::new(rng.standard_normal(), 0.0));
            let mut tags = FrameTags::new("gaussian", &format!("m={m},n={n}"));
            tags.seed = Some(rng.seed());
            let f = Frame::new(matrix, tags)?;
            let (normed, _) = f.normalized();
            Ok(normed)
        }
        RandomKind::RandomHarmonic { m, n } => {
            let p = *m as f64 / *n as f64;
            let rows: Vec<usize> = (0..*n).filter(|_| rng.uniform() < p).collect();
            if rows.is_empty() || rows.len() > *n {
                return Err(Error::EmptyRowSet);
            }
            let mut f = build_harmonic(*n, &rows, true)?;
            f.tags.family = "random-harmonic".into();
            f.tags.params = format!("n={n},target_m={m},realized_m={}", rows.len());
            f.tags.seed = Some(rng.seed());
            Ok(f)
        }
        RandomKind::SteinhausGabor { m } => build_gabor(*m, &GaborSeed::Steinhaus(rng.seed())),
    }
}

// ---------------------------------------------------------------------------
// Real rotation
// ---------------------------------------------------------------------------

/// Unitarily rotate a frame with a real Gram matrix into real form: the Gram
/// is factored through its eigendecomposition and the frame is rebuilt from
/// sqrt(eigenvalue)-scaled eigenvector rows.
pub fn realify(frame: &Frame) -> Result<Frame> {
    let g = numerics::gram(&frame.matrix);
    let n = g.rows();
    let mut imag_max = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            imag_max = imag_max.max(g.get(i, j).im.abs());
        }
    }
    if imag_max > 1e-9 {
        return Err(Error::InvalidFrame(format!(
            "Gram matrix has imaginary parts up to {imag_max:.3e}; no real rotation exists"
        )));
    }
    let real_g = Matrix::from_fn(n, n, |i, j| C64::new(g.get(i, j).re, 0.0));
    let eig = numerics::hermitian_eigh(&real_g)?;
    let m = frame.rows();
    let mut matrix = Matrix::zeros(m, n);
    let mut row = 0usize;
    for k in 0..n {
        if eig.values[k] <= 1e-9 * eig.values[0].max(1.0) {
            continue;
        }
        if row >= m {
            return Err(Error::InvalidFrame("Gram rank exceeds frame dimension".into()));
        }
        let s = eig.values[k].sqrt();
        for j in 0..n {
            // eigenvectors of a real symmetric matrix stay real under Jacobi
            matrix.set(row, j, C64::new(eig.vectors.get(j, k).re * s, 0.0));
        }
        row += 1;
    }
    let mut tags = frame.tags.clone();
    tags.family = format!("{}-real", tags.family);
    Frame::new(matrix, tags)
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::{steiner_system, SteinerFamily};
    use crate::numerics::gram;

    fn assert_untf(f: &Frame, tol: f64) {
        let m = f.rows() as f64;
        let n = f.cols() as f64;
        for c in 0..f.cols() {
            assert!((vec_norm(f.matrix.col(c)) - 1.0).abs() < 1e-9, "column norm");
        }
        let rg = numerics::row_gram(&f.matrix);
        let target = Matrix::identity(f.rows()).scale(C64::new(n / m, 0.0));
        assert!(rg.sub(&target).max_abs() <= tol, "tightness defect {}", rg.sub(&target).max_abs());
    }

    #[test]
    fn harmonic_all_ones_submatrix() {
        // rows {0,2} of the 4-point DFT: columns 0 and 2 form the all-ones matrix
        let f = build_harmonic(4, &[0, 2], false).unwrap();
        for r in 0..2 {
            for &c in &[0usize, 2] {
                assert!((f.matrix.get(r, c) - C64::new(1.0, 0.0)).norm() < 1e-15);
            }
        }
        let ortho = build_harmonic(2, &[0, 1], true).unwrap();
        let g = gram(&ortho.matrix);
        assert!(g.sub(&Matrix::identity(2)).max_abs() < 1e-12);
        assert!(matches!(build_harmonic(4, &[], false), Err(Error::EmptyRowSet)));
    }

    #[test]
    fn vandermonde_shapes_and_duplicates() {
        let bases = vec![C64::new(1.0, 0.0), C64::new(2.0, 0.0), C64::new(1.0, 0.0)];
        let f = build_vandermonde(&bases, 2).unwrap();
        assert_eq!((f.rows(), f.cols()), (2, 3));
        // duplicate bases produce identical columns
        for r in 0..2 {
            assert_eq!(f.matrix.get(r, 0), f.matrix.get(r, 2));
        }
    }

    #[test]
    fn equispaced_vandermonde_beats_local_perturbations() {
        let f = build_vandermonde_unit_circle(3, 8).unwrap();
        let mu_equal = crate::coherence::coherence_report(&f).unwrap().mu;
        for eps in [0.01, -0.01] {
            let bases: Vec<C64> = (0..8)
                .map(|k| {
                    let mut ang = k as f64 / 8.0;
                    if k == 3 {
                        ang += eps;
                    }
                    unit(2.0 * PI * ang)
                })
                .collect();
            let v = build_vandermonde(&bases, 3).unwrap().normalized().0;
            let mu_pert = crate::coherence::coherence_report(&v).unwrap().mu;
            assert!(mu_pert >= mu_equal - 1e-12);
        }
    }

    #[test]
    fn steiner_6x16_is_the_worked_example() {
        let d = steiner_system(SteinerFamily::TwoBlocks { v: 4 }).unwrap();
        let f = build_steiner_etf(&d, HadamardKind::RealSylvester, &RowChoice::SkipAllOnes).unwrap();
        assert_eq!((f.rows(), f.cols()), (6, 16));
        let s = 1.0 / 3.0f64.sqrt();
        // the displayed 6 x 16 matrix, + for s, - for -s, . for 0
        let rows = [
            "+-+-+-+-........",
            "++--....+-+-....",
            "+--+........+-+-",
            "....++--++--....",
            "....+--+....++--",
            "........+--++--+",
        ];
        for (r, pat) in rows.iter().enumerate() {
            for (c, ch) in pat.chars().enumerate() {
                let want = match ch {
                    '+' => s,
                    '-' => -s,
                    _ => 0.0,
                };
                let got = f.matrix.get(r, c);
                assert!(
                    (got - C64::new(want, 0.0)).norm() < 1e-12,
                    "entry ({r},{c}): got {got}, want {want}"
                );
            }
        }
        assert_untf(&f, 1e-9);
    }

    #[test]
    fn steiner_3x9_complex_example() {
        let d = steiner_system(SteinerFamily::TwoBlocks { v: 3 }).unwrap();
        let f = build_steiner_etf(&d, HadamardKind::ComplexDft, &RowChoice::SkipAllOnes).unwrap();
        assert_eq!((f.rows(), f.cols()), (3, 9));
        let w = C64::from_polar(1.0, 2.0 * PI / 3.0);
        let s = 1.0 / 2.0f64.sqrt();
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let want = [
            [one, w * w, w, one, w * w, w, zero, zero, zero],
            [one, w, w * w, zero, zero, zero, one, w * w, w],
            [zero, zero, zero, one, w, w * w, one, w, w * w],
        ];
        for r in 0..3 {
            for c in 0..9 {
                assert!(
                    (f.matrix.get(r, c) - want[r][c] * s).norm() < 1e-12,
                    "entry ({r},{c})"
                );
            }
        }
        // Welch equality
        let rep = crate::coherence::coherence_report(&f).unwrap();
        assert!((rep.mu - rep.welch_bound).abs() < 1e-9);
    }

    #[test]
    fn steiner_rejects_missing_hadamard() {
        // triples of v = 13 need a 7x7 real Hadamard, which does not exist
        let d = steiner_system(SteinerFamily::Triples { v: 13 }).unwrap();
        assert!(matches!(
            build_steiner_etf(&d, HadamardKind::RealSylvester, &RowChoice::SkipAllOnes),
            Err(Error::HadamardUnavailable(7))
        ));
    }

    #[test]
    fn paley_p5_matches_displayed_matrix() {
        let f = build_paley_etf(5).unwrap();
        assert_eq!((f.rows(), f.cols()), (3, 6));
        let a = (1.0f64 / 5.0).sqrt();
        let b = (2.0f64 / 5.0).sqrt();
        let w = |k: i64| unit(-2.0 * PI * k as f64 / 5.0);
        for c in 0..5 {
            assert!((f.matrix.get(0, c) - C64::new(a, 0.0)).norm() < 1e-12);
            assert!((f.matrix.get(1, c) - w(c as i64) * b).norm() < 1e-12);
            assert!((f.matrix.get(2, c) - w(4 * c as i64) * b).norm() < 1e-12);
        }
        assert!((f.matrix.get(0, 5) - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(f.matrix.get(1, 5).norm() < 1e-15);
        assert_untf(&f, 1e-9);
        // off-diagonal Gram = Legendre(n'-n)/sqrt(p) on the DFT part
        let g = gram(&f.matrix);
        for i in 0..5usize {
            for j in 0..5usize {
                if i == j {
                    continue;
                }
                let want = finite::legendre(j as i64 - i as i64, 5).unwrap() as f64 / 5.0f64.sqrt();
                assert!((g.get(i, j) - C64::new(want, 0.0)).norm() < 1e-10);
            }
        }
        assert!(matches!(build_paley_etf(7), Err(Error::BadPrime(7))));
        assert!(matches!(build_paley_etf(9), Err(Error::NotPrime(9))));
    }

    #[test]
    fn gabor_and_chirp_are_tight_unit_norm() {
        let alltop = build_gabor(5, &GaborSeed::Alltop).unwrap();
        assert_untf(&alltop, 1e-9);
        let steinhaus = build_gabor(5, &GaborSeed::Steinhaus(9)).unwrap();
        assert_untf(&steinhaus, 1e-9);
        let chirp = build_chirp(5).unwrap();
        assert_untf(&chirp, 1e-9);
        assert!(matches!(build_chirp(6), Err(Error::NotPrime(6))));
    }

    #[test]
    fn chirp_elements_sum_to_scaled_delta() {
        let m = 5;
        let f = build_chirp(m).unwrap();
        let mut sum = vec![C64::new(0.0, 0.0); m];
        for c in 0..f.cols() {
            for (t, v) in f.matrix.col(c).iter().enumerate() {
                sum[t] += v;
            }
        }
        assert!((sum[0] - C64::new((m as f64).powf(1.5), 0.0)).norm() < 1e-9);
        for v in &sum[1..] {
            assert!(v.norm() < 1e-9);
        }
    }

    #[test]
    fn code_frame_sum_and_norm() {
        let f = build_code_frame(4, 1).unwrap();
        assert_eq!((f.rows(), f.cols()), (16, 256));
        assert_untf(&f, 1e-8);
        assert!((numerics::spectral_norm(&f.matrix) - 4.0).abs() < 1e-9);
        let mut sum = vec![C64::new(0.0, 0.0); 16];
        for c in 0..f.cols() {
            for (t, v) in f.matrix.col(c).iter().enumerate() {
                sum[t] += v;
            }
        }
        // sum = 2^((t + 1/2) m) delta_0 = 2^6 delta_0
        assert!((sum[0] - C64::new(64.0, 0.0)).norm() < 1e-9);
        for v in &sum[1..] {
            assert!(v.norm() < 1e-9);
        }
    }

    #[test]
    fn spherical_design_columns_sum_to_zero() {
        let f = build_spherical_2design(37, &[1, 7, 9, 10, 12, 16, 26, 33, 34]).unwrap();
        assert_eq!((f.rows(), f.cols()), (18, 37));
        assert_untf(&f, 1e-9);
        let mut sum = vec![C64::new(0.0, 0.0); 18];
        for c in 0..f.cols() {
            for (t, v) in f.matrix.col(c).iter().enumerate() {
                sum[t] += v;
            }
        }
        assert!(sum.iter().all(|v| v.norm() < 1e-10));
        assert!(matches!(
            build_spherical_2design(37, &[0, 1]),
            Err(Error::ZeroIndexIncluded)
        ));
    }

    #[test]
    fn normalized_gaussian_columns_are_unit() {
        let mut rng = Rng::new(5);
        let f = build_random(&RandomKind::NormalizedGaussian { m: 4, n: 9 }, &mut rng).unwrap();
        for c in 0..9 {
            assert!((vec_norm(f.matrix.col(c)) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn random_harmonic_realized_rows_concentrate() {
        let (m, n) = (128usize, 512usize);
        let mut hits = 0;
        for seed in 0..200u64 {
            let mut rng = Rng::new(seed);
            let f = build_random(&RandomKind::RandomHarmonic { m, n }, &mut rng).unwrap();
            let realized = f.rows();
            if realized >= m / 2 && realized <= 3 * m / 2 {
                hits += 1;
            }
        }
        assert!(hits >= 190, "only {hits}/200 seeds inside [M/2, 3M/2]");
    }

    #[test]
    fn random_harmonic_without_zero_row_has_exact_average_coherence() {
        // find a seed whose realized row set misses row 0
        let (m, n) = (6usize, 24usize);
        for seed in 0..50u64 {
            let mut rng = Rng::new(seed);
            let f = build_random(&RandomKind::RandomHarmonic { m, n }, &mut rng).unwrap();
            let has_zero_row = (0..n).all(|c| {
                (f.matrix.get(0, c) - f.matrix.get(0, 0)).norm() < 1e-12
            });
            if !has_zero_row && f.rows() >= 2 {
                let rep = crate::coherence::coherence_report(&f).unwrap();
                assert!((rep.nu - 1.0 / (n as f64 - 1.0)).abs() < 1e-12);
                return;
            }
        }
        panic!("no seed produced a frame without the all-ones row");
    }

    #[test]
    fn frame_file_round_trip_is_bit_exact() {
        let mut rng = Rng::new(77);
        let f = build_random(&RandomKind::NormalizedGaussian { m: 3, n: 7 }, &mut rng).unwrap();
        let text = f.to_text();
        let back = Frame::from_text(&text).unwrap();
        assert_eq!(f.matrix, back.matrix);
        assert_eq!(back.tags.seed, Some(77));
        // a second round trip is byte-identical
        assert_eq!(text, back.to_text());
    }

    #[test]
    fn realify_preserves_gram_of_paley() {
        let f = build_paley_etf(5).unwrap();
        let real = realify(&f).unwrap();
        assert_eq!((real.rows(), real.cols()), (3, 6));
        assert!(real.matrix.data().iter().all(|v| v.im.abs() < 1e-12));
        let g1 = gram(&f.matrix);
        let g2 = gram(&real.matrix);
        assert!(g1.sub(&g2).max_abs() < 1e-9);
    }

    #[test]
    fn frame_invariants_are_enforced() {
        // zero column
        let m = Matrix::zeros(2, 3);
        assert!(matches!(
            Frame::new(m, FrameTags::new("x", "y")),
            Err(Error::InvalidFrame(_))
        ));
        // M > N
        let m = Matrix::identity(3).select_columns(&[0, 1]);
        assert!(matches!(
            Frame::new(m, FrameTags::new("x", "y")),
            Err(Error::InvalidFrame(_))
        ));
    }
}
