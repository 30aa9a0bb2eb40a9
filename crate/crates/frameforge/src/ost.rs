//! Noisy sparse measurement simulation and one-step thresholding recovery:
//! form the proxy `Phi^* y`, keep the entries above the threshold, and
//! refit by least squares on the selected support.

use serde::Serialize;

use crate::frames::Frame;
use crate::numerics::{self, Rng, C64};
use crate::{Error, Result};

/// A K-sparse vector in ambient dimension n.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseSignal {
    n: usize,
    support: Vec<usize>,
    values: Vec<C64>,
}

impl SparseSignal {
    pub fn new(n: usize, support: Vec<usize>, values: Vec<C64>) -> Result<SparseSignal> {
        if support.len() != values.len() {
            return Err(Error::DimensionMismatch("support/value length mismatch".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for &i in &support {
            if i >= n || !seen.insert(i) {
                return Err(Error::DimensionMismatch(format!("bad support index {i}")));
            }
        }
        Ok(SparseSignal { n, support, values })
    }

    /// Random support of size k with the given values, drawn uniformly.
    pub fn random_support(n: usize, values: &[C64], rng: &mut Rng) -> Result<SparseSignal> {
        let support = rng.distinct_indices(n, values.len());
        SparseSignal::new(n, support, values.to_vec())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn dense(&self) -> Vec<C64> {
        let mut x = vec![C64::new(0.0, 0.0); self.n];
        for (&i, &v) in self.support.iter().zip(&self.values) {
            x[i] = v;
        }
        x
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn min_magnitude(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min)
    }
}

/// `y = Phi x + z` with complex Gaussian noise of per-entry variance
/// sigma^2 (sigma^2/2 in each real part).
pub fn measure(frame: &Frame, x: &SparseSignal, sigma: f64, rng: &mut Rng) -> Result<Vec<C64>> {
    if x.n() != frame.cols() {
        return Err(Error::DimensionMismatch("signal dimension != frame columns".into()));
    }
    if sigma < 0.0 {
        return Err(Error::InadmissibleParameters("sigma must be nonnegative".into()));
    }
    let mut y = vec![C64::new(0.0, 0.0); frame.rows()];
    for (&col, &v) in x.support.iter().zip(&x.values) {
        for (t, &e) in frame.matrix.col(col).iter().enumerate() {
            y[t] += e * v;
        }
    }
    if sigma > 0.0 {
        for t in y.iter_mut() {
            *t += rng.complex_gaussian(sigma);
        }
    }
    Ok(y)
}

/// One-step thresholding output.
#[derive(Clone, Debug, Serialize)]
pub struct OstResult {
    pub estimated_support: Vec<usize>,
    /// full-length estimate, zero off the estimated support
    #[serde(skip)]
    pub estimate: Vec<C64>,
    pub threshold: f64,
    /// the selected submatrix failed rank certification and the estimate
    /// fell back to the proxy restricted to the support
    pub rank_deficient: bool,
}

impl OstResult {
    pub fn l2_error(&self, truth: &SparseSignal) -> f64 {
        let x = truth.dense();
        self.estimate
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `K-hat` is a subset of the true support.
    pub fn support_subset_of(&self, truth: &SparseSignal) -> bool {
        let t: std::collections::HashSet<usize> = truth.support().iter().copied().collect();
        self.estimated_support.iter().all(|i| t.contains(i))
    }

    pub fn support_matches(&self, truth: &SparseSignal) -> bool {
        let mut t = truth.support().to_vec();
        t.sort_unstable();
        self.estimated_support == t
    }

    /// residual energy `|| x_{K \ K-hat} ||` left outside the selection
    pub fn missed_energy(&self, truth: &SparseSignal) -> f64 {
        let hat: std::collections::HashSet<usize> =
            self.estimated_support.iter().copied().collect();
        truth
            .support
            .iter()
            .zip(&truth.values)
            .filter(|(i, _)| !hat.contains(i))
            .map(|(_, v)| v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// One-step thresholding: proxy `Phi^* y`, keep entries strictly above
/// `lambda`, least-squares refit on the kept support. Ties at the threshold
/// are excluded. A rank-deficient selection is reported, not fatal: the
/// estimate falls back to the proxy restricted to the selection.
pub fn ost(frame: &Frame, y: &[C64], lambda: f64) -> Result<OstResult> {
    if lambda <= 0.0 {
        return Err(Error::InadmissibleParameters("threshold must be positive".into()));
    }
    if y.len() != frame.rows() {
        return Err(Error::DimensionMismatch("measurement length != frame rows".into()));
    }
    let n = frame.cols();
    let proxy: Vec<C64> = (0..n)
        .map(|c| numerics::inner(frame.matrix.col(c), y))
        .collect();
    let support: Vec<usize> = (0..n).filter(|&c| proxy[c].norm() > lambda).collect();
    let mut estimate = vec![C64::new(0.0, 0.0); n];
    let mut rank_deficient = false;
    if !support.is_empty() {
        let sub = frame.matrix.select_columns(&support);
        match numerics::least_squares(&sub, y) {
            Ok(coeffs) => {
                for (&i, &v) in support.iter().zip(&coeffs) {
                    estimate[i] = v;
                }
            }
            Err(Error::RankDeficient(_)) => {
                rank_deficient = true;
                for &i in &support {
                    estimate[i] = proxy[i];
                }
            }
            Err(e) => return Err(e),
        }
    }
    Ok(OstResult { estimated_support: support, estimate, threshold: lambda, rank_deficient })
}

/// The threshold prescription and its two branches.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ThresholdRule {
    pub lambda: f64,
    /// `(10/t) mu sqrt(M snr)` branch: guards against self-interference
    pub interference_branch: f64,
    /// `sqrt(2)/(1-t)` branch: guards against measurement noise
    pub noise_branch: f64,
}

/// `lambda = sqrt(2 sigma^2 ln N) max{(10/t) mu sqrt(M snr), sqrt(2)/(1-t)}`.
/// `snr` is understood as `||x||^2 / (M sigma^2)`.
pub fn threshold_rule(frame: &Frame, sigma: f64, snr: f64, t: f64) -> Result<ThresholdRule> {
    if !(0.0..1.0).contains(&t) || t == 0.0 {
        return Err(Error::InadmissibleParameters("t must lie in (0,1)".into()));
    }
    if sigma <= 0.0 || snr < 0.0 {
        return Err(Error::InadmissibleParameters("need sigma > 0 and snr >= 0".into()));
    }
    let n = frame.cols() as f64;
    let m = frame.rows() as f64;
    let mu = crate::coherence::coherence_report(frame)?.mu;
    let scale = (2.0 * sigma * sigma * n.ln()).sqrt();
    let interference_branch = (10.0 / t) * mu * (m * snr).sqrt();
    let noise_branch = 2.0f64.sqrt() / (1.0 - t);
    Ok(ThresholdRule {
        lambda: scale * interference_branch.max(noise_branch),
        interference_branch,
        noise_branch,
    })
}

/// Signal-to-noise ratio convention used by the threshold rule:
/// `||x||^2 / E||z||^2` with `E||z||^2 = M sigma^2` for complex noise of
/// per-entry variance sigma^2.
pub fn snr_of(frame: &Frame, x: &SparseSignal, sigma: f64) -> f64 {
    let signal: f64 = x.values.iter().map(|v| v.norm_sqr()).sum();
    signal / (frame.rows() as f64 * sigma * sigma)
}

/// Reconstruction error bound
/// `c2 sqrt(sigma^2 |K-hat| ln N) + c3 ||x_{K \ K-hat}||` with
/// `c2 = 2/(1 - e^(-1/2))` and `c3 = 1 + e^(-1/2)/(1 - e^(-1/2))`.
pub fn recovery_error_bound(k_hat: usize, sigma: f64, n: usize, residual_norm: f64) -> f64 {
    assert!(sigma >= 0.0 && residual_norm >= 0.0);
    let c2 = 2.0 / (1.0 - (-0.5f64).exp());
    let c3 = 1.0 + (-0.5f64).exp() / (1.0 - (-0.5f64).exp());
    c2 * (sigma * sigma * k_hat as f64 * (n as f64).ln()).sqrt() + c3 * residual_norm
}

/// Entries above the noise floor: `|x_i| > (2 sqrt2/(1-t)) sqrt(2 sigma^2 ln N)`.
pub fn noise_floor_set(x: &SparseSignal, sigma: f64, t: f64) -> Vec<usize> {
    let gate = (2.0 * 2.0f64.sqrt() / (1.0 - t)) * (2.0 * sigma * sigma * (x.n() as f64).ln()).sqrt();
    x.support
        .iter()
        .zip(&x.values)
        .filter(|(_, v)| v.norm() > gate)
        .map(|(&i, _)| i)
        .collect()
}

/// Entries above the self-interference floor:
/// `|x_i| > (20/t) mu ||x|| sqrt(2 ln N)`.
pub fn interference_floor_set(x: &SparseSignal, mu: f64, t: f64) -> Vec<usize> {
    let gate = (20.0 / t) * mu * x.norm() * (2.0 * (x.n() as f64).ln()).sqrt();
    x.support
        .iter()
        .zip(&x.values)
        .filter(|(_, v)| v.norm() > gate)
        .map(|(&i, _)| i)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::{build_code_frame, Frame, FrameTags};
    use crate::numerics::Matrix;

    fn identity_frame(n: usize) -> Frame {
        let mut tags = FrameTags::new("id", &format!("{n}"));
        tags.unit_norm = true;
        Frame::new(Matrix::identity(n), tags).unwrap()
    }

    #[test]
    fn noiseless_measurement_is_exact() {
        let f = identity_frame(5);
        let x = SparseSignal::new(5, vec![3], vec![C64::new(7.0, 0.0)]).unwrap();
        let mut rng = Rng::new(0);
        let y = measure(&f, &x, 0.0, &mut rng).unwrap();
        assert!((y[3] - C64::new(7.0, 0.0)).norm() < 1e-15);
        assert!(y.iter().enumerate().filter(|(i, _)| *i != 3).all(|(_, v)| v.norm() == 0.0));
    }

    #[test]
    fn noise_energy_matches_chi_square_mean() {
        let f = identity_frame(6);
        let x = SparseSignal::new(6, vec![], vec![]).unwrap();
        let mut total = 0.0;
        let trials = 10_000;
        let base = Rng::new(42);
        for trial in 0..trials {
            let mut rng = base.substream(trial);
            let y = measure(&f, &x, 1.0, &mut rng).unwrap();
            total += y.iter().map(|v| v.norm_sqr()).sum::<f64>();
        }
        let mean = total / trials as f64;
        // E ||z||^2 = M sigma^2 = 6
        assert!((mean - 6.0).abs() < 0.3, "mean energy {mean}");
    }

    #[test]
    fn identity_recovery_is_exact_for_any_small_threshold() {
        let f = identity_frame(8);
        let x = SparseSignal::new(
            8,
            vec![1, 4, 6],
            vec![C64::new(2.0, 0.0), C64::new(-1.0, 0.5), C64::new(0.5, 0.0)],
        )
        .unwrap();
        let mut rng = Rng::new(1);
        let y = measure(&f, &x, 0.0, &mut rng).unwrap();
        for lambda in [0.05, 0.2, 0.4] {
            let out = ost(&f, &y, lambda).unwrap();
            assert!(out.support_matches(&x), "lambda {lambda}");
            assert!(out.l2_error(&x) < 1e-12);
        }
        // threshold above every proxy magnitude: empty support, zero estimate
        let out = ost(&f, &y, 10.0).unwrap();
        assert!(out.estimated_support.is_empty());
        assert!(out.estimate.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn selected_support_obeys_threshold_definition() {
        let f = build_code_frame(3, 1).unwrap();
        let mut rng = Rng::new(5);
        let x = SparseSignal::random_support(
            f.cols(),
            &[C64::new(3.0, 0.0), C64::new(3.0, 0.0)],
            &mut rng,
        )
        .unwrap();
        let y = measure(&f, &x, 0.1, &mut rng).unwrap();
        let lambda = 1.0;
        let out = ost(&f, &y, lambda).unwrap();
        let proxy: Vec<f64> = (0..f.cols())
            .map(|c| numerics::inner(f.matrix.col(c), &y).norm())
            .collect();
        for (c, &p) in proxy.iter().enumerate() {
            assert_eq!(out.estimated_support.contains(&c), p > lambda);
        }
    }

    #[test]
    fn rank_deficient_selection_reports_and_falls_back() {
        // frame with a duplicated column: selecting both is rank deficient
        let col = vec![C64::new(0.6, 0.0), C64::new(0.8, 0.0)];
        let e0 = vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
        let mut tags = FrameTags::new("dup", "2x3");
        tags.unit_norm = true;
        let f = Frame::new(Matrix::from_columns(&[col.clone(), col.clone(), e0]), tags).unwrap();
        let y = vec![C64::new(0.6, 0.0), C64::new(0.8, 0.0)];
        let out = ost(&f, &y, 0.7).unwrap();
        assert!(out.rank_deficient);
        assert_eq!(out.estimated_support, vec![0, 1]);
    }

    #[test]
    fn threshold_rule_branches_and_homogeneity() {
        let f = build_code_frame(4, 1).unwrap();
        let rule = threshold_rule(&f, 0.01, 50.0, 0.5).unwrap();
        assert!(rule.interference_branch > rule.noise_branch);
        assert!(rule.lambda > 0.0);
        // doubling sigma doubles lambda at fixed snr
        let rule2 = threshold_rule(&f, 0.02, 50.0, 0.5).unwrap();
        assert!((rule2.lambda - 2.0 * rule.lambda).abs() < 1e-12);
        // mu -> 0 limit: noise branch dominates
        let id = identity_frame(16);
        let rule = threshold_rule(&id, 0.01, 50.0, 0.5).unwrap();
        assert_eq!(rule.interference_branch, 0.0);
        let want = (2.0 * 0.0001 * 16.0f64.ln()).sqrt() * 2.0f64.sqrt() / 0.5;
        assert!((rule.lambda - want).abs() < 1e-12);
        assert!(threshold_rule(&id, 0.01, 1.0, 0.0).is_err());
    }

    #[test]
    fn error_bound_shape() {
        assert_eq!(recovery_error_bound(0, 1.0, 100, 0.0), 0.0);
        // monotone in each argument
        let base = recovery_error_bound(3, 0.1, 256, 0.5);
        assert!(recovery_error_bound(4, 0.1, 256, 0.5) > base);
        assert!(recovery_error_bound(3, 0.2, 256, 0.5) > base);
        assert!(recovery_error_bound(3, 0.1, 512, 0.5) > base);
        assert!(recovery_error_bound(3, 0.1, 256, 0.7) > base);
        // the constants
        let c2 = 2.0 / (1.0 - (-0.5f64).exp());
        let c3 = 1.0 + (-0.5f64).exp() / (1.0 - (-0.5f64).exp());
        let want = c2 * (0.01f64 * 3.0 * (256.0f64).ln()).sqrt() + c3 * 0.5;
        assert!((base - want).abs() < 1e-12);
    }

    #[test]
    fn floor_sets_follow_their_gates() {
        let x = SparseSignal::new(
            64,
            vec![0, 1, 2],
            vec![C64::new(10.0, 0.0), C64::new(0.5, 0.0), C64::new(3.0, 0.0)],
        )
        .unwrap();
        let above = noise_floor_set(&x, 0.05, 0.5);
        assert!(above.contains(&0));
        assert!(!above.contains(&1));
        let t_mu = interference_floor_set(&x, 0.001, 0.5);
        assert!(t_mu.contains(&0));
    }
}
