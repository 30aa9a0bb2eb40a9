//! Monte Carlo simulator of the fingerprint collusion channel with the
//! focused correlation detector, the geometric guilt-distance figure of
//! merit, and the closed-form error bounds. Fingerprints are real-valued
//! media-space vectors; complex frames are rotated to real form first.

use rayon::prelude::*;
use serde::Serialize;

use crate::frames::{realify, Frame};
use crate::numerics::{self, Rng};
use crate::{Error, Result};

/// A fixed collusion channel: which users collude, with which convex
/// weights, against fingerprints of common norm gamma, Gaussian noise of
/// per-entry deviation sigma, and detection threshold tau.
#[derive(Clone, Debug)]
pub struct CollusionScenario {
    /// real unit-norm fingerprint directions (columns)
    pub frame: Frame,
    /// common fingerprint norm
    pub gamma: f64,
    pub coalition: Vec<usize>,
    pub weights: Vec<f64>,
    pub sigma: f64,
    pub tau: f64,
}

impl CollusionScenario {
    /// Validates the weight simplex, rotates complex input frames to real
    /// form (failing if no real rotation exists), and normalizes columns.
    pub fn new(
        frame: &Frame,
        gamma: f64,
        coalition: Vec<usize>,
        weights: Vec<f64>,
        sigma: f64,
        tau: f64,
    ) -> Result<CollusionScenario> {
        if coalition.len() != weights.len() || coalition.is_empty() {
            return Err(Error::DimensionMismatch("coalition/weight length mismatch".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for &u in &coalition {
            if u >= frame.cols() || !seen.insert(u) {
                return Err(Error::InadmissibleParameters(format!("bad coalition member {u}")));
            }
        }
        if weights.iter().any(|&w| w < 0.0) {
            return Err(Error::InadmissibleParameters("weights must be nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InadmissibleParameters(format!(
                "weights sum to {total}, expected 1"
            )));
        }
        if gamma <= 0.0 || sigma < 0.0 {
            return Err(Error::InadmissibleParameters("need gamma > 0 and sigma >= 0".into()));
        }
        let is_real = frame.matrix.data().iter().all(|v| v.im.abs() < 1e-12);
        let real = if is_real { frame.clone() } else { realify(frame)? };
        let (unit, _) = real.normalized();
        Ok(CollusionScenario { frame: unit, gamma, coalition, weights, sigma, tau })
    }

    pub fn users(&self) -> usize {
        self.frame.cols()
    }
}

/// Empirical error rates plus per-user detector statistics.
#[derive(Clone, Debug, Serialize)]
pub struct DetectionStats {
    pub trials: usize,
    /// worst false-positive rate over innocent users
    pub empirical_pi: f64,
    /// best (smallest-miss) colluder miss rate: min over guilty users
    pub empirical_pii: f64,
    /// per-user rate of T_n >= tau
    pub hit_rate: Vec<f64>,
    /// per-user sample mean of T_n
    pub t_mean: Vec<f64>,
    /// per-user sample variance of T_n
    pub t_var: Vec<f64>,
}

/// Run the collusion channel: per trial, form the weighted fingerprint
/// combination plus noise, compute every user's normalized correlation
/// statistic, and compare against tau. Trials are independent substreams of
/// the seed, so the result does not depend on the thread schedule.
pub fn simulate_detection(s: &CollusionScenario, trials: usize, rng: &Rng) -> Result<DetectionStats> {
    if trials == 0 {
        return Err(Error::InadmissibleParameters("need at least one trial".into()));
    }
    let n = s.users();
    let m = s.frame.rows();
    // noiseless component of y/gamma: sum_k x_k phi_k (unit fingerprints)
    let mut clean = vec![0.0f64; m];
    for (&user, &w) in s.coalition.iter().zip(&s.weights) {
        for (t, v) in s.frame.matrix.col(user).iter().enumerate() {
            clean[t] += w * v.re;
        }
    }
    // T_n = <y, phi_n> / gamma^2 = <clean, phi_n> + <z, phi_n> / gamma
    let base_stat: Vec<f64> = (0..n)
        .map(|u| {
            s.frame
                .matrix
                .col(u)
                .iter()
                .zip(&clean)
                .map(|(v, c)| v.re * c)
                .sum()
        })
        .collect();
    let chunk = 4096usize;
    let n_chunks = trials.div_ceil(chunk);
    let partials: Vec<(Vec<u64>, Vec<f64>, Vec<f64>)> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * chunk;
            let hi = ((c + 1) * chunk).min(trials);
            let mut hits = vec![0u64; n];
            let mut sum = vec![0.0f64; n];
            let mut sumsq = vec![0.0f64; n];
            for trial in lo..hi {
                let mut local = rng.substream(trial as u64);
                let noise: Vec<f64> = (0..m).map(|_| s.sigma * local.standard_normal()).collect();
                for u in 0..n {
                    let noise_proj: f64 = s
                        .frame
                        .matrix
                        .col(u)
                        .iter()
                        .zip(&noise)
                        .map(|(v, z)| v.re * z)
                        .sum();
                    let stat = base_stat[u] + noise_proj / s.gamma;
                    if stat >= s.tau {
                        hits[u] += 1;
                    }
                    sum[u] += stat;
                    sumsq[u] += stat * stat;
                }
            }
            (hits, sum, sumsq)
        })
        .collect();
    let mut hits = vec![0u64; n];
    let mut sum = vec![0.0f64; n];
    let mut sumsq = vec![0.0f64; n];
    for (h, st, sq) in partials {
        for u in 0..n {
            hits[u] += h[u];
            sum[u] += st[u];
            sumsq[u] += sq[u];
        }
    }
    let hit_rate: Vec<f64> = hits.iter().map(|&h| h as f64 / trials as f64).collect();
    let t_mean: Vec<f64> = sum.iter().map(|v| v / trials as f64).collect();
    let t_var: Vec<f64> = sumsq
        .iter()
        .zip(&t_mean)
        .map(|(sq, mean)| sq / trials as f64 - mean * mean)
        .collect();
    let guilty: std::collections::HashSet<usize> = s.coalition.iter().copied().collect();
    let empirical_pi = (0..n)
        .filter(|u| !guilty.contains(u))
        .map(|u| hit_rate[u])
        .fold(0.0, f64::max);
    let empirical_pii = s
        .coalition
        .iter()
        .map(|&u| 1.0 - hit_rate[u])
        .fold(f64::INFINITY, f64::min);
    Ok(DetectionStats { trials, empirical_pi, empirical_pii, hit_rate, t_mean, t_var })
}

/// Standard normal tail `Q(x) = (1/sqrt(2 pi)) int_x^inf e^(-u^2/2) du`,
/// evaluated through erfc by Maclaurin series for small arguments and a
/// Lentz continued fraction for large ones; absolute error below 1e-12.
pub fn q_function(x: f64) -> f64 {
    0.5 * erfc(x / 2.0f64.sqrt())
}

fn erfc(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < 2.0 {
        1.0 - erf_series(x)
    } else {
        erfc_continued_fraction(x)
    }
}

/// erf by its Maclaurin series; converges fast for |x| < 2.
fn erf_series(x: f64) -> f64 {
    let mut term = x;
    let mut acc = x;
    let x2 = x * x;
    for n in 1..200 {
        term *= -x2 / n as f64;
        let add = term / (2 * n + 1) as f64;
        acc += add;
        if add.abs() < 1e-17 * acc.abs().max(1e-300) {
            break;
        }
    }
    acc * 2.0 / std::f64::consts::PI.sqrt()
}

/// `sqrt(pi) e^(x^2) erfc(x) = 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))`
/// with partial numerators k/2, evaluated by the modified Lentz algorithm.
fn erfc_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x.max(TINY);
    let mut c = f;
    let mut d = 0.0f64;
    for k in 1..400 {
        let a = k as f64 / 2.0;
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-17 {
            break;
        }
    }
    (-x * x).exp() / (std::f64::consts::PI.sqrt() * f)
}

/// Exact minimum distance between the equal-weight guilty and not-guilty
/// combination sets for user `n` at coalition sizes up to k, by brute
/// enumeration. Feasible for N <= 14, k <= 4.
pub fn guilt_distance(frame: &Frame, k: usize, n: usize) -> Result<f64> {
    let cols = frame.cols();
    if n >= cols {
        return Err(Error::DimensionMismatch(format!("user {n} out of range")));
    }
    if k < 1 || cols > 14 || k > 4 {
        return Err(Error::InadmissibleParameters(
            "guilt distance enumeration supports N <= 14, 1 <= k <= 4".into(),
        ));
    }
    let (unit, _) = frame.normalized();
    let m = unit.rows();
    let others: Vec<usize> = (0..cols).filter(|&i| i != n).collect();
    let mean_of = |sel: &[usize]| -> Vec<numerics::C64> {
        let mut v = vec![numerics::C64::new(0.0, 0.0); m];
        for &i in sel {
            for (t, &e) in unit.matrix.col(i).iter().enumerate() {
                v[t] += e;
            }
        }
        let scale = 1.0 / sel.len() as f64;
        v.iter_mut().for_each(|e| *e *= scale);
        v
    };
    let mut guilty_means = Vec::new();
    let mut innocent_means = Vec::new();
    for size in 1..=k {
        enumerate_subsets(&others, size - 1, &mut |sel| {
            let mut with_n = sel.to_vec();
            with_n.push(n);
            guilty_means.push(mean_of(&with_n));
        });
        enumerate_subsets(&others, size, &mut |sel| {
            innocent_means.push(mean_of(sel));
        });
    }
    let mut best = f64::INFINITY;
    for g in &guilty_means {
        for h in &innocent_means {
            let dist: f64 = g
                .iter()
                .zip(h)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            best = best.min(dist);
        }
    }
    Ok(best)
}

fn enumerate_subsets(pool: &[usize], size: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(pool: &[usize], size: usize, start: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == size {
            f(cur);
            return;
        }
        for i in start..pool.len() {
            cur.push(pool[i]);
            rec(pool, size, i + 1, cur, f);
            cur.pop();
        }
    }
    if size == 0 {
        f(&[]);
        return;
    }
    rec(pool, size, 0, &mut Vec::new(), f);
}

/// Closed-form guilt distance for simplex fingerprints (N = M + 1):
/// `sqrt(N / (K (K-1) (N-1)))`.
pub fn simplex_guilt_distance(k: usize, n: usize) -> f64 {
    assert!(k >= 2);
    ((n as f64) / ((k * (k - 1)) as f64 * (n as f64 - 1.0))).sqrt()
}

/// Real M x (M+1) simplex equiangular tight frame (pairwise inner products
/// -1/M), built from its Gram matrix.
pub fn simplex_fingerprints(m: usize) -> Result<Frame> {
    use crate::frames::FrameTags;
    let n = m + 1;
    let g = numerics::Matrix::from_fn(n, n, |i, j| {
        numerics::C64::new(if i == j { 1.0 } else { -1.0 / m as f64 }, 0.0)
    });
    let eig = numerics::hermitian_eigh(&g)?;
    let mut matrix = numerics::Matrix::zeros(m, n);
    let mut row = 0usize;
    for kk in 0..n {
        if eig.values[kk] <= 1e-9 {
            continue;
        }
        let s = eig.values[kk].sqrt();
        for j in 0..n {
            matrix.set(row, j, numerics::C64::new(eig.vectors.get(j, kk).re * s, 0.0));
        }
        row += 1;
    }
    let mut tags = FrameTags::new("simplex", &format!("m={m}"));
    tags.unit_norm = true;
    tags.tight = true;
    tags.equiangular = true;
    Frame::new(matrix, tags)
}

/// The closed-form error bounds for the focused correlation detector.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TheoreticalBounds {
    /// `Q((gamma/sigma)(tau - mu))`; independent of the weights
    pub pi_bound: f64,
    /// `Q((gamma/sigma)((1+mu) max x_k - mu - tau))`
    pub pii_bound: f64,
}

pub fn theoretical_bounds(s: &CollusionScenario) -> Result<TheoreticalBounds> {
    let mu = crate::coherence::coherence_report(&s.frame)?.mu;
    theoretical_bounds_with_mu(s, mu)
}

pub fn theoretical_bounds_with_mu(s: &CollusionScenario, mu: f64) -> Result<TheoreticalBounds> {
    if s.sigma <= 0.0 {
        return Err(Error::InadmissibleParameters("bounds need sigma > 0".into()));
    }
    let ratio = s.gamma / s.sigma;
    let max_weight = s.weights.iter().cloned().fold(0.0, f64::max);
    Ok(TheoreticalBounds {
        pi_bound: q_function(ratio * (s.tau - mu)),
        pii_bound: q_function(ratio * ((1.0 + mu) * max_weight - mu - s.tau)),
    })
}
