//! Flipping and wiggling equivalence: column sign patterns that preserve
//! norms, worst-case coherence, and the spectral norm, plus the greedy
//! linear-time pass and the exhaustive scan that drive average coherence
//! down to mu/sqrt(M).

use crate::frames::Frame;
use crate::numerics::{self, C64};
use crate::{Error, Result};

/// Unimodular column scalings; real +-1 entries for flipping patterns.
#[derive(Clone, Debug, PartialEq)]
pub struct FlipPattern {
    signs: Vec<C64>,
}

impl FlipPattern {
    pub fn from_unimodular(signs: Vec<C64>) -> Result<FlipPattern> {
        if signs.iter().any(|s| (s.norm() - 1.0).abs() > 1e-12) {
            return Err(Error::InvalidFrame("flip pattern entries must be unimodular".into()));
        }
        Ok(FlipPattern { signs })
    }

    pub fn from_signs(signs: &[i8]) -> Result<FlipPattern> {
        let signs = signs
            .iter()
            .map(|&s| match s {
                1 => Ok(C64::new(1.0, 0.0)),
                -1 => Ok(C64::new(-1.0, 0.0)),
                _ => Err(Error::InvalidFrame("flipping signs must be +1 or -1".into())),
            })
            .collect::<Result<_>>()?;
        Ok(FlipPattern { signs })
    }

    pub fn all_keep(n: usize) -> FlipPattern {
        FlipPattern { signs: vec![C64::new(1.0, 0.0); n] }
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn signs(&self) -> &[C64] {
        &self.signs
    }

    /// Real patterns serialize over {+,-}.
    pub fn to_string_signs(&self) -> Result<String> {
        self.signs
            .iter()
            .map(|s| {
                if (s - C64::new(1.0, 0.0)).norm() < 1e-12 {
                    Ok('+')
                } else if (s + C64::new(1.0, 0.0)).norm() < 1e-12 {
                    Ok('-')
                } else {
                    Err(Error::InvalidFrame("pattern has non-real phases".into()))
                }
            })
            .collect()
    }

    pub fn parse_signs(text: &str) -> Result<FlipPattern> {
        let signs = text
            .chars()
            .map(|c| match c {
                '+' => Ok(C64::new(1.0, 0.0)),
                '-' => Ok(C64::new(-1.0, 0.0)),
                _ => Err(Error::Parse(format!("bad sign character {c:?}"))),
            })
            .collect::<Result<_>>()?;
        Ok(FlipPattern { signs })
    }
}

/// Column i scaled by signs[i]. Norms, worst-case coherence, and the
/// spectral norm are preserved; average coherence generally is not.
pub fn apply_pattern(frame: &Frame, pattern: &FlipPattern) -> Result<Frame> {
    if pattern.len() != frame.cols() {
        return Err(Error::DimensionMismatch(format!(
            "pattern length {} vs {} columns",
            pattern.len(),
            frame.cols()
        )));
    }
    let mut matrix = frame.matrix.clone();
    for (c, &s) in pattern.signs.iter().enumerate() {
        for v in matrix.col_mut(c) {
            *v *= s;
        }
    }
    Frame::new(matrix, frame.tags.clone())
}

/// Outcome of a flipping pass.
#[derive(Clone, Debug)]
pub struct FlipResult {
    pub frame: Frame,
    pub pattern: FlipPattern,
    /// squared norms of the running partial sums after each element
    pub partial_sum_sq: Vec<f64>,
}

/// One greedy pass: keep or flip each element so the running sum stays
/// short. The kept invariant is `|| sum_{n<=k} psi_n ||^2 <= k` at every
/// step, which forces average coherence at most mu/sqrt(M) once
/// N >= M^2 + 3M + 3. Ties keep the element unflipped.
pub fn linear_time_flip(frame: &Frame) -> Result<FlipResult> {
    let (unit, _) = frame.normalized();
    let m = unit.rows();
    let n = unit.cols();
    let mut signs = Vec::with_capacity(n);
    let mut sum = vec![C64::new(0.0, 0.0); m];
    let mut partial_sum_sq = Vec::with_capacity(n);
    for c in 0..n {
        let col = unit.matrix.col(c);
        let overlap = numerics::inner(&sum, col).re;
        // ||S + phi|| <= ||S - phi|| exactly when Re<S, phi> <= 0
        let sign = if overlap <= 0.0 { 1.0 } else { -1.0 };
        signs.push(C64::new(sign, 0.0));
        for (t, &v) in col.iter().enumerate() {
            sum[t] += v * sign;
        }
        partial_sum_sq.push(sum.iter().map(|v| v.norm_sqr()).sum());
    }
    let pattern = FlipPattern { signs };
    let frame = apply_pattern(&unit, &pattern)?;
    Ok(FlipResult { frame, pattern, partial_sum_sq })
}

/// Global minimizer of average coherence over the flipping class, by Gray
/// code scan of all sign patterns with the first sign pinned to +1 (average
/// coherence is invariant under global negation). Feasible for N <= 22.
pub fn exhaustive_flip(frame: &Frame) -> Result<FlipResult> {
    let (unit, _) = frame.normalized();
    let n = unit.cols();
    if n > 22 {
        return Err(Error::BudgetExceeded(1u128 << (n - 1), 1 << 21));
    }
    let g = numerics::gram(&unit.matrix);
    // row_sums[i] = sum_j s_j G[i][j]; nu = max_i |row_sums[i] - s_i| / (N-1)
    let mut signs = vec![1.0f64; n];
    let mut row_sums: Vec<C64> = (0..n)
        .map(|i| (0..n).map(|j| g.get(i, j)).sum())
        .collect();
    let nu_of = |row_sums: &[C64], signs: &[f64]| -> f64 {
        row_sums
            .iter()
            .zip(signs)
            .map(|(rs, &s)| (rs - C64::new(s, 0.0)).norm())
            .fold(0.0, f64::max)
            / (n as f64 - 1.0)
    };
    let mut best_nu = nu_of(&row_sums, &signs);
    let mut best_signs = signs.clone();
    if n > 1 {
        let total: u64 = 1 << (n - 1);
        for step in 1..total {
            // Gray code: flip the sign indexed by the lowest set bit, offset
            // past the pinned first element
            let flip = step.trailing_zeros() as usize + 1;
            signs[flip] = -signs[flip];
            let delta = 2.0 * signs[flip];
            for i in 0..n {
                row_sums[i] += g.get(i, flip) * delta;
            }
            let nu = nu_of(&row_sums, &signs);
            if nu < best_nu - 1e-15 {
                best_nu = nu;
                best_signs = signs.clone();
            }
        }
    }
    let pattern = FlipPattern {
        signs: best_signs.iter().map(|&s| C64::new(s, 0.0)).collect(),
    };
    let result = apply_pattern(&unit, &pattern)?;
    // recompute partial sums for the chosen pattern
    let m = unit.rows();
    let mut sum = vec![C64::new(0.0, 0.0); m];
    let mut partial_sum_sq = Vec::with_capacity(n);
    for c in 0..n {
        for (t, &v) in result.matrix.col(c).iter().enumerate() {
            sum[t] += v;
        }
        partial_sum_sq.push(sum.iter().map(|v| v.norm_sqr()).sum());
    }
    Ok(FlipResult { frame: result, pattern, partial_sum_sq })
}
