//! Exact arithmetic over GF(p^n), number-theoretic helpers, Hadamard-type
//! matrices, and combinatorial design generators with verification.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::numerics::Matrix;
use crate::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Legendre symbol (k/p) for odd prime p.
pub fn legendre(k: i64, p: u64) -> Result<i32> {
    if !is_prime(p) || p == 2 {
        return Err(Error::NotPrime(p));
    }
    let kp = k.rem_euclid(p as i64) as u64;
    if kp == 0 {
        return Ok(0);
    }
    // Euler's criterion: k^((p-1)/2) mod p
    let mut base = kp % p;
    let mut exp = (p - 1) / 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    Ok(if acc == 1 { 1 } else { -1 })
}

/// Quadratic residues mod p, including zero, ascending.
pub fn quadratic_residues(p: u64) -> Vec<u64> {
    let mut set: Vec<u64> = (0..p).map(|k| k * k % p).collect();
    set.sort_unstable();
    set.dedup();
    set
}

// ---------------------------------------------------------------------------
// GF(p^n)
// ---------------------------------------------------------------------------

/// The field GF(p^n) with a fixed irreducible modulus. Elements are indices
/// `0..p^n`; the index digits in base p are the polynomial coefficients,
/// constant term least significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteField {
    p: u64,
    n: usize,
    /// monic modulus: coefficients of degree 0..n-1 (the leading 1 is implicit)
    modulus: Vec<u64>,
}

impl FiniteField {
    /// GF(p^n) with the lexicographically smallest irreducible modulus of
    /// degree n, found by exhaustive search. Deterministic across runs.
    pub fn new(p: u64, n: usize) -> Result<FiniteField> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 {
            return Err(Error::InadmissibleParameters("extension degree must be >= 1".into()));
        }
        if n == 1 {
            return Ok(FiniteField { p, n, modulus: vec![0] });
        }
        let total = p.pow(n as u32);
        if total > 1 << 20 {
            return Err(Error::InadmissibleParameters(format!(
                "field order {total} too large for exhaustive modulus search"
            )));
        }
        for low in 0..total {
            let modulus: Vec<u64> = digits(low, p, n);
            let field = FiniteField { p, n, modulus: modulus.clone() };
            if field.modulus_is_irreducible() {
                return Ok(field);
            }
        }
        unreachable!("an irreducible polynomial of every degree exists over GF(p)")
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.n as u32)
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn element(&self, index: u64) -> FieldElement {
        assert!(index < self.order());
        FieldElement { coeffs: digits(index, self.p, self.n) }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { coeffs: vec![0; self.n] }
    }

    pub fn one(&self) -> FieldElement {
        let mut coeffs = vec![0; self.n];
        coeffs[0] = 1;
        FieldElement { coeffs }
    }

    pub fn index(&self, x: &FieldElement) -> u64 {
        x.coeffs.iter().rev().fold(0u64, |acc, &c| acc * self.p + c)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order()).map(move |i| self.element(i))
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| (x + y) % self.p)
            .collect();
        FieldElement { coeffs }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        let coeffs = a.coeffs.iter().map(|&x| (self.p - x) % self.p).collect();
        FieldElement { coeffs }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        // schoolbook product then reduction by the monic modulus
        let n = self.n;
        if n == 1 {
            return FieldElement { coeffs: vec![a.coeffs[0] * b.coeffs[0] % self.p] };
        }
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        for d in (n..2 * n - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            // x^d reduces to x^(d-n) * (-low part of modulus)
            for (k, &m) in self.modulus.iter().enumerate() {
                let idx = d - n + k;
                prod[idx] = (prod[idx] + c * ((self.p - m) % self.p)) % self.p;
            }
        }
        FieldElement { coeffs: prod[..n].to_vec() }
    }

    pub fn pow(&self, a: &FieldElement, mut e: u64) -> FieldElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inverse(&self, a: &FieldElement) -> Option<FieldElement> {
        if a.is_zero() {
            return None;
        }
        Some(self.pow(a, self.order() - 2))
    }

    /// Trace into the base field: `Tr(x) = sum_{i=0}^{n-1} x^(p^i)`, returned
    /// as a scalar in `0..p`.
    pub fn trace(&self, x: &FieldElement) -> u64 {
        let mut acc = self.zero();
        let mut w = x.clone();
        for _ in 0..self.n {
            acc = self.add(&acc, &w);
            w = self.pow(&w, self.p);
        }
        debug_assert!(acc.coeffs[1..].iter().all(|&c| c == 0), "trace must be scalar");
        acc.coeffs[0]
    }

    fn modulus_is_irreducible(&self) -> bool {
        // no factor of degree <= n/2: trial-divide by every monic polynomial
        // of degree 1..=n/2 (fields here are small by construction)
        let n = self.n;
        let full: Vec<u64> = self
            .modulus
            .iter()
            .copied()
            .chain(std::iter::once(1))
            .collect();
        for d in 1..=n / 2 {
            let count = self.p.pow(d as u32);
            for low in 0..count {
                let mut div: Vec<u64> = digits(low, self.p, d);
                div.push(1);
                if poly_divides(&div, &full, self.p) {
                    return false;
                }
            }
        }
        true
    }
}

/// Element of GF(p^n): coefficient vector over GF(p), constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    coeffs: Vec<u64>,
}

impl FieldElement {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }
}

fn digits(mut value: u64, p: u64, n: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(value % p);
        value /= p;
    }
    out
}

/// Does `div` divide `poly` over GF(p)? Both monic, coefficients low-to-high.
fn poly_divides(div: &[u64], poly: &[u64], p: u64) -> bool {
    let mut rem: Vec<u64> = poly.to_vec();
    let dd = div.len() - 1;
    while rem.len() - 1 >= dd && !rem.is_empty() {
        let lead = *rem.last().unwrap();
        if lead != 0 {
            let shift = rem.len() - 1 - dd;
            for (k, &c) in div.iter().enumerate() {
                let idx = shift + k;
                rem[idx] = (rem[idx] + (p - lead % p) % p * c) % p;
            }
        }
        rem.pop();
        if rem.len() <= dd {
            break;
        }
    }
    rem.iter().all(|&c| c == 0)
}

// ---------------------------------------------------------------------------
// Hadamard-type matrices
// ---------------------------------------------------------------------------

/// Which unimodular orthogonal-row matrix to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HadamardKind {
    /// Sylvester tensor construction; size must be a power of two.
    RealSylvester,
    /// Discrete Fourier transform with entries `omega^(jk)`, `omega = e^(-2 pi i/size)`.
    ComplexDft,
}

/// Size x size matrix with unimodular entries and orthogonal rows
/// (`H H^* = size * I`).
pub fn hadamard(size: usize, kind: HadamardKind) -> Result<Matrix> {
    if size == 0 {
        return Err(Error::UnsupportedSize(0, format!("{kind:?}")));
    }
    match kind {
        HadamardKind::RealSylvester => {
            if !size.is_power_of_two() {
                return Err(Error::UnsupportedSize(size, "real_sylvester".into()));
            }
            Ok(Matrix::from_fn(size, size, |r, c| {
                // tensor-power sign: (-1)^popcount(r AND c)
                let sign = if (r & c).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                Complex64::new(sign, 0.0)
            }))
        }
        HadamardKind::ComplexDft => {
            let step = -2.0 * std::f64::consts::PI / size as f64;
            Ok(Matrix::from_fn(size, size, |r, c| {
                let ph = step * ((r * c) % size) as f64;
                Complex64::new(ph.cos(), ph.sin())
            }))
        }
    }
}

// ---------------------------------------------------------------------------
// Steiner systems
// ---------------------------------------------------------------------------

/// Transposed incidence matrix of a (2,k,v)-Steiner system: b rows (blocks),
/// v columns (points), with the usual parameter bundle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DesignIncidence {
    pub v: usize,
    pub b: usize,
    pub r: usize,
    pub k: usize,
    pub lambda: usize,
    /// b x v matrix, row-major, entries 0/1
    pub incidence: Vec<Vec<u8>>,
}

impl DesignIncidence {
    pub fn from_blocks(v: usize, k: usize, blocks: &[Vec<usize>]) -> DesignIncidence {
        let b = blocks.len();
        let mut incidence = vec![vec![0u8; v]; b];
        for (row, block) in blocks.iter().enumerate() {
            for &p in block {
                incidence[row][p] = 1;
            }
        }
        let r = (v - 1) / (k - 1);
        DesignIncidence { v, b, r, k, lambda: 1, incidence }
    }

    /// Row indices of the blocks containing point `col`, ascending.
    pub fn blocks_through(&self, col: usize) -> Vec<usize> {
        self.incidence
            .iter()
            .enumerate()
            .filter(|(_, row)| row[col] == 1)
            .map(|(i, _)| i)
            .collect()
    }

    /// Text form: header "v b r k lambda", then b lines of v characters.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {} {} {} {}", self.v, self.b, self.r, self.k, self.lambda);
        for row in &self.incidence {
            for &x in row {
                out.push(if x == 1 { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<DesignIncidence> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty design file".into()))?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad header token {t}"))))
            .collect::<Result<_>>()?;
        if nums.len() != 5 {
            return Err(Error::Parse("design header needs 5 integers".into()));
        }
        let (v, b, r, k, lambda) = (nums[0], nums[1], nums[2], nums[3], nums[4]);
        let mut incidence = Vec::with_capacity(b);
        for line in lines.take(b) {
            let row: Vec<u8> = line
                .chars()
                .map(|ch| match ch {
                    '0' => Ok(0),
                    '1' => Ok(1),
                    _ => Err(Error::Parse(format!("bad incidence character {ch:?}"))),
                })
                .collect::<Result<_>>()?;
            if row.len() != v {
                return Err(Error::Parse("incidence row length mismatch".into()));
            }
            incidence.push(row);
        }
        if incidence.len() != b {
            return Err(Error::Parse("missing incidence rows".into()));
        }
        Ok(DesignIncidence { v, b, r, k, lambda, incidence })
    }
}

/// The Steiner system families this crate can generate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SteinerFamily {
    /// All 2-element subsets of a v-set; any v >= 2.
    TwoBlocks { v: usize },
    /// Steiner triple systems; v = 1, 3 mod 6. Bose construction for
    /// v = 3 mod 6, Skolem for v = 1 mod 6.
    Triples { v: usize },
    /// Lines of the affine geometry AG(n, q); k = q, v = q^n.
    Affine { q: u64, n: usize },
    /// Lines of the projective geometry PG(n, q); k = q + 1,
    /// v = (q^(n+1) - 1)/(q - 1).
    Projective { q: u64, n: usize },
}

pub fn steiner_system(family: SteinerFamily) -> Result<DesignIncidence> {
    match family {
        SteinerFamily::TwoBlocks { v } => {
            if v < 2 {
                return Err(Error::InadmissibleParameters("2-blocks need v >= 2".into()));
            }
            let mut blocks = Vec::new();
            for i in 0..v {
                for j in (i + 1)..v {
                    blocks.push(vec![i, j]);
                }
            }
            Ok(DesignIncidence::from_blocks(v, 2, &blocks))
        }
        SteinerFamily::Triples { v } => match v % 6 {
            3 => Ok(DesignIncidence::from_blocks(v, 3, &bose_triples(v))),
            1 if v > 1 => Ok(DesignIncidence::from_blocks(v, 3, &skolem_triples(v))),
            _ => Err(Error::InadmissibleParameters(format!(
                "Steiner triple systems need v = 1 or 3 mod 6, got v = {v}"
            ))),
        },
        SteinerFamily::Affine { q, n } => {
            if n < 2 {
                return Err(Error::InadmissibleParameters("affine geometry needs n >= 2".into()));
            }
            let field = prime_power_field(q)?;
            let blocks = affine_lines(&field, n);
            Ok(DesignIncidence::from_blocks((q as usize).pow(n as u32), q as usize, &blocks))
        }
        SteinerFamily::Projective { q, n } => {
            if n < 2 {
                return Err(Error::InadmissibleParameters("projective geometry needs n >= 2".into()));
            }
            let field = prime_power_field(q)?;
            let (blocks, v) = projective_lines(&field, n);
            Ok(DesignIncidence::from_blocks(v, q as usize + 1, &blocks))
        }
    }
}

fn prime_power_field(q: u64) -> Result<FiniteField> {
    if q < 2 {
        return Err(Error::InadmissibleParameters(format!("{q} is not a prime power")));
    }
    let mut p = 2;
    while p <= q {
        if q % p == 0 {
            break;
        }
        p += 1;
    }
    let mut deg = 0usize;
    let mut acc = 1u64;
    while acc < q {
        acc *= p;
        deg += 1;
    }
    if acc != q {
        return Err(Error::InadmissibleParameters(format!("{q} is not a prime power")));
    }
    FiniteField::new(p, deg)
}

/// Bose construction for v = 6t + 3, over the idempotent commutative
/// quasigroup `i o j = (i + j)(t + 1) mod (2t + 1)`.
fn bose_triples(v: usize) -> Vec<Vec<usize>> {
    let t = (v - 3) / 6;
    let n = 2 * t + 1;
    let op = |i: usize, j: usize| (i + j) * (t + 1) % n;
    let pt = |i: usize, c: usize| i * 3 + c;
    let mut blocks = Vec::new();
    for i in 0..n {
        blocks.push(vec![pt(i, 0), pt(i, 1), pt(i, 2)]);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            for c in 0..3 {
                let mut blk = vec![pt(i, c), pt(j, c), pt(op(i, j), (c + 1) % 3)];
                blk.sort_unstable();
                blocks.push(blk);
            }
        }
    }
    blocks
}

/// Skolem construction for v = 6t + 1, over the half-idempotent commutative
/// quasigroup on Z_2t plus a point at infinity.
fn skolem_triples(v: usize) -> Vec<Vec<usize>> {
    let t = (v - 1) / 6;
    let m = 2 * t;
    let half = |x: usize| if x % 2 == 0 { x / 2 } else { t + (x - 1) / 2 };
    let op = |i: usize, j: usize| half((i + j) % m);
    let pt = |i: usize, c: usize| i * 3 + c;
    let inf = 6 * t;
    let mut blocks = Vec::new();
    for i in 0..t {
        blocks.push(vec![pt(i, 0), pt(i, 1), pt(i, 2)]);
    }
    for i in 0..t {
        for c in 0..3 {
            let mut blk = vec![inf, pt(t + i, c), pt(i, (c + 1) % 3)];
            blk.sort_unstable();
            blocks.push(blk);
        }
    }
    for i in 0..m {
        for j in (i + 1)..m {
            for c in 0..3 {
                let mut blk = vec![pt(i, c), pt(j, c), pt(op(i, j), (c + 1) % 3)];
                blk.sort_unstable();
                blocks.push(blk);
            }
        }
    }
    blocks
}

/// Lines of AG(n, q): points are vectors in GF(q)^n, a line is a base point
/// plus all scalar multiples of a direction, deduplicated as point sets.
fn affine_lines(field: &FiniteField, n: usize) -> Vec<Vec<usize>> {
    let q = field.order() as usize;
    let total = q.pow(n as u32);
    let coords_of = |idx: usize| -> Vec<u64> {
        let mut rest = idx;
        (0..n)
            .map(|_| {
                let c = rest % q;
                rest /= q;
                c as u64
            })
            .collect()
    };
    let index_of =
        |coords: &[u64]| -> usize { coords.iter().rev().fold(0usize, |acc, &c| acc * q + c as usize) };
    let mut lines = std::collections::BTreeSet::new();
    for a_idx in 0..total {
        let a = coords_of(a_idx);
        for d_idx in 1..total {
            let d = coords_of(d_idx);
            let mut line: Vec<usize> = field
                .elements()
                .map(|t| {
                    let coords: Vec<u64> = (0..n)
                        .map(|i| {
                            let ai = field.element(a[i]);
                            let di = field.element(d[i]);
                            field.index(&field.add(&ai, &field.mul(&t, &di)))
                        })
                        .collect();
                    index_of(&coords)
                })
                .collect();
            line.sort_unstable();
            line.dedup();
            lines.insert(line);
        }
    }
    lines.into_iter().collect()
}

/// Lines of PG(n, q): points are 1-dimensional subspaces of GF(q)^(n+1)
/// (normalized so the first nonzero coordinate is 1); lines are the
/// 2-dimensional subspaces.
fn projective_lines(field: &FiniteField, n: usize) -> (Vec<Vec<usize>>, usize) {
    let q = field.order() as usize;
    let dim = n + 1;
    let total = q.pow(dim as u32);
    let coords_of = |idx: usize| -> Vec<u64> {
        let mut rest = idx;
        (0..dim)
            .map(|_| {
                let c = rest % q;
                rest /= q;
                c as u64
            })
            .collect()
    };
    let normalize = |coords: &[u64]| -> Option<Vec<u64>> {
        let first_nz = coords.iter().position(|&c| c != 0)?;
        let inv = field.inverse(&field.element(coords[first_nz])).expect("nonzero");
        Some(
            coords
                .iter()
                .map(|&c| field.index(&field.mul(&field.element(c), &inv)))
                .collect(),
        )
    };
    let mut points: Vec<Vec<u64>> = Vec::new();
    let mut point_idx = std::collections::HashMap::new();
    for idx in 1..total {
        let coords = coords_of(idx);
        if let Some(norm) = normalize(&coords) {
            if norm == coords {
                point_idx.insert(coords.clone(), points.len());
                points.push(coords);
            }
        }
    }
    let v = points.len();
    let mut lines = std::collections::BTreeSet::new();
    for i in 0..v {
        for j in (i + 1)..v {
            let mut line = Vec::new();
            for alpha in field.elements() {
                for beta in field.elements() {
                    if alpha.is_zero() && beta.is_zero() {
                        continue;
                    }
                    let coords: Vec<u64> = (0..dim)
                        .map(|d| {
                            let x = field.mul(&alpha, &field.element(points[i][d]));
                            let y = field.mul(&beta, &field.element(points[j][d]));
                            field.index(&field.add(&x, &y))
                        })
                        .collect();
                    let norm = normalize(&coords).expect("nonzero combination");
                    line.push(point_idx[&norm]);
                }
            }
            line.sort_unstable();
            line.dedup();
            lines.insert(line);
        }
    }
    (lines.into_iter().collect(), v)
}

/// One verification failure in a claimed design.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DesignViolation {
    RowSum { row: usize, got: usize, want: usize },
    ColumnSum { col: usize, got: usize, want: usize },
    PairInnerProduct { cols: (usize, usize), got: usize, want: usize },
    DimensionFormula { what: &'static str, got: usize, want: usize },
}

/// Check row sums, column sums, pairwise column inner products, and the
/// dimension formulas. Returns the violations instead of raising.
pub fn verify_design(d: &DesignIncidence) -> Vec<DesignViolation> {
    let mut out = Vec::new();
    if d.k >= 2 {
        let want_b = d.v * (d.v - 1) / (d.k * (d.k - 1));
        if d.b != want_b {
            out.push(DesignViolation::DimensionFormula {
                what: "b = v(v-1)/(k(k-1))",
                got: d.b,
                want: want_b,
            });
        }
        let want_r = (d.v - 1) / (d.k - 1);
        if d.r != want_r || (d.v - 1) % (d.k - 1) != 0 {
            out.push(DesignViolation::DimensionFormula {
                what: "r = (v-1)/(k-1)",
                got: d.r,
                want: want_r,
            });
        }
    } else {
        out.push(DesignViolation::DimensionFormula { what: "k >= 2", got: d.k, want: 2 });
    }
    for (row, line) in d.incidence.iter().enumerate() {
        let got = line.iter().map(|&x| x as usize).sum();
        if got != d.k {
            out.push(DesignViolation::RowSum { row, got, want: d.k });
        }
    }
    for col in 0..d.v {
        let got = d.incidence.iter().map(|row| row[col] as usize).sum();
        if got != d.r {
            out.push(DesignViolation::ColumnSum { col, got, want: d.r });
        }
    }
    for i in 0..d.v {
        for j in (i + 1)..d.v {
            let got = d.incidence.iter().map(|row| (row[i] & row[j]) as usize).sum();
            if got != d.lambda {
                out.push(DesignViolation::PairInnerProduct { cols: (i, j), got, want: d.lambda });
            }
        }
    }
    out
}

/// Outcome of solving design parameters for a prospective M x N frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SteinerParameters {
    /// All of v, r, k are integers and the forward formulas round-trip.
    Admissible { v: u64, b: u64, r: u64, k: u64, existence: DesignExistence },
    /// Some parameter fails to be an integer; the offending quantity is named.
    Inadmissible { reason: String },
}

/// Existence status for admissible (k, v) pairs, from the published record.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DesignExistence {
    Known,
    KnownNonexistent,
    Unknown,
}

/// Admissible (k, v) pairs whose Steiner systems are known not to exist.
const NONEXISTENT_DESIGNS: &[(u64, u64)] = &[(6, 16), (6, 21), (6, 36), (6, 46), (7, 43)];
/// Admissible (k, v) pairs whose existence is an open problem.
const UNKNOWN_DESIGNS: &[(u64, u64)] = &[(10, 46), (14, 92)];

/// Given a prospective M x N equiangular tight frame, recover the block
/// design parameters it would have to come from: with
/// `alpha = sqrt((N-M)/(M(N-1)))`, these are `v = N alpha/(1+alpha)`,
/// `b = M`, `r = 1/alpha`, `k = N/(M(1+alpha))`, evaluated exactly over the
/// integers. Inadmissibility is a normal outcome, not an error.
pub fn steiner_parameter_solver(m: u64, n: u64) -> SteinerParameters {
    if n <= m || m == 0 {
        return SteinerParameters::Inadmissible { reason: "need N > M >= 1".into() };
    }
    // r^2 = 1/alpha^2 = M(N-1)/(N-M)
    let num = (m as u128) * (n as u128 - 1);
    let den = (n - m) as u128;
    if num % den != 0 {
        return SteinerParameters::Inadmissible {
            reason: format!("r^2 = M(N-1)/(N-M) = {num}/{den} is not an integer"),
        };
    }
    let r2 = num / den;
    let r = (r2 as f64).sqrt().round() as u128;
    if r * r != r2 {
        return SteinerParameters::Inadmissible {
            reason: format!("r^2 = {r2} is not a perfect square"),
        };
    }
    let n128 = n as u128;
    if n128 % (r + 1) != 0 {
        return SteinerParameters::Inadmissible {
            reason: format!("v = N/(r+1) = {n}/{} is not an integer", r + 1),
        };
    }
    let v = n128 / (r + 1);
    let kn = n128 * r;
    let kd = (m as u128) * (r + 1);
    if kn % kd != 0 {
        return SteinerParameters::Inadmissible {
            reason: format!("k = Nr/(M(r+1)) = {kn}/{kd} is not an integer"),
        };
    }
    let k = kn / kd;
    if k < 2 || v <= k {
        return SteinerParameters::Inadmissible {
            reason: format!("parameters k = {k}, v = {v} out of design range"),
        };
    }
    // forward consistency: b = v(v-1)/(k(k-1)) must equal M
    if v * (v - 1) % (k * (k - 1)) != 0 {
        return SteinerParameters::Inadmissible {
            reason: "b = v(v-1)/(k(k-1)) is not an integer".into(),
        };
    }
    let b = v * (v - 1) / (k * (k - 1));
    if b != m as u128 {
        return SteinerParameters::Inadmissible {
            reason: format!("b = v(v-1)/(k(k-1)) = {b} does not match M = {m}"),
        };
    }
    let existence = if NONEXISTENT_DESIGNS.contains(&(k as u64, v as u64)) {
        DesignExistence::KnownNonexistent
    } else if UNKNOWN_DESIGNS.contains(&(k as u64, v as u64)) {
        DesignExistence::Unknown
    } else {
        DesignExistence::Known
    };
    SteinerParameters::Admissible { v: v as u64, b: b as u64, r: r as u64, k: k as u64, existence }
}
