//! Exact and estimated restricted-isometry certification, restricted
//! orthogonality, spark and full-spark testing, the weak-RIP probe, and the
//! Paley clique audit. Everything here is brute force and honest about it:
//! the enumeration budget is checked up front and exceeding it is an error,
//! never silent sampling.

use rayon::prelude::*;
use serde::Serialize;

use crate::finite;
use crate::frames::Frame;
use crate::numerics::{self, Matrix, Rng, C64};
use crate::{Error, Result};

/// Default enumeration budget: number of subsets a single call may visit.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// Ties in argmax scans are broken toward the lexicographically earliest
/// subset; two values within this tolerance count as tied.
const WITNESS_TOL: f64 = 1e-12;

/// Dependence threshold: a column set counts as linearly dependent when the
/// smallest singular value is below 1e-9 times the largest.
pub const DEPENDENCE_TOL: f64 = 1e-9;

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// k-subset of {0..n-1} with lexicographic rank `rank`.
fn unrank_combination(n: usize, k: usize, mut rank: u128) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut next = 0usize;
    for slot in 0..k {
        let remaining = k - slot - 1;
        let mut candidate = next;
        loop {
            let with_candidate = binomial(n - candidate - 1, remaining);
            if rank < with_candidate {
                break;
            }
            rank -= with_candidate;
            candidate += 1;
        }
        out.push(candidate);
        next = candidate + 1;
    }
    out
}

/// Advance `subset` to the lexicographic successor; false when exhausted.
fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if subset[i] < n - (k - i) {
            subset[i] += 1;
            for j in (i + 1)..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Maximum of `eval` over all k-subsets in lexicographic order. Returns the
/// max together with the earliest subset within `WITNESS_TOL` of it. The
/// scan is partitioned across threads; partial results are combined in
/// partition order, so the outcome does not depend on scheduling.
fn subset_argmax(
    n: usize,
    k: usize,
    budget: u128,
    eval: impl Fn(&[usize]) -> f64 + Sync,
) -> Result<(f64, Vec<usize>)> {
    let total = binomial(n, k);
    if total > budget {
        return Err(Error::BudgetExceeded(total, budget));
    }
    if total == 0 {
        return Err(Error::DimensionMismatch(format!("no {k}-subsets of {n} columns")));
    }
    let chunks = (rayon::current_num_threads() as u128 * 4).clamp(1, total);
    let chunk_len = total.div_ceil(chunks);
    let partials: Vec<(f64, Vec<usize>)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * chunk_len;
            let end = ((c + 1) * chunk_len).min(total);
            if start >= end {
                return (f64::NEG_INFINITY, Vec::new());
            }
            let mut subset = unrank_combination(n, k, start);
            let mut best = f64::NEG_INFINITY;
            let mut witness = subset.clone();
            let mut idx = start;
            loop {
                let v = eval(&subset);
                if v > best + WITNESS_TOL {
                    best = v;
                    witness = subset.clone();
                } else if v > best {
                    best = v; // value improves inside the tie window: keep witness
                }
                idx += 1;
                if idx >= end || !next_combination(&mut subset, n) {
                    break;
                }
            }
            (best, witness)
        })
        .collect();
    let mut best = f64::NEG_INFINITY;
    let mut witness = Vec::new();
    for (v, w) in partials {
        if v > best + WITNESS_TOL {
            best = v;
            witness = w;
        } else if v > best {
            best = v;
        }
    }
    Ok((best, witness))
}

/// How a restricted-isometry figure was obtained.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum RipMethod {
    Exact,
    Gershgorin,
    Power { q: u32 },
    FlatRo,
    RoBridge,
}

impl std::fmt::Display for RipMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RipMethod::Exact => write!(f, "exact"),
            RipMethod::Gershgorin => write!(f, "gershgorin"),
            RipMethod::Power { q } => write!(f, "power(q={q})"),
            RipMethod::FlatRo => write!(f, "flat-ro"),
            RipMethod::RoBridge => write!(f, "ro-bridge"),
        }
    }
}

/// One restricted-isometry certification result.
#[derive(Clone, Debug, Serialize)]
pub struct RipReport {
    pub k: usize,
    pub method: RipMethod,
    pub delta: f64,
    /// argmax column subset, when the method has one
    pub witness: Option<Vec<usize>>,
    pub runtime_ms: f64,
}

impl RipReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }
}

fn eig_of_subgram(g: &Matrix, subset: &[usize]) -> Vec<f64> {
    let k = subset.len();
    let sub = Matrix::from_fn(k, k, |i, j| g.get(subset[i], subset[j]));
    numerics::hermitian_eigh(&sub).expect("sub-Gram matrices are Hermitian").values
}

/// Exact restricted isometry constant: the largest operator-norm deviation
/// `|| Phi_S^* Phi_S - I ||` over all k-column subsets.
pub fn exact_delta(frame: &Frame, k: usize) -> Result<RipReport> {
    exact_delta_with_budget(frame, k, DEFAULT_BUDGET)
}

pub fn exact_delta_with_budget(frame: &Frame, k: usize, budget: u128) -> Result<RipReport> {
    let start = std::time::Instant::now();
    let g = numerics::gram(&frame.matrix);
    let (delta, witness) = subset_argmax(frame.cols(), k, budget, |subset| {
        eig_of_subgram(&g, subset)
            .into_iter()
            .map(|l| (l - 1.0).abs())
            .fold(0.0, f64::max)
    })?;
    Ok(RipReport {
        k,
        method: RipMethod::Exact,
        delta,
        witness: Some(witness),
        runtime_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Gershgorin estimate `(k - 1) mu`; exact for equiangular tight frames at
/// sparsity levels up to one more than the clique number of their graph.
pub fn gershgorin_delta(frame: &Frame, k: usize) -> Result<RipReport> {
    let start = std::time::Instant::now();
    let report = crate::coherence::coherence_report(frame)?;
    Ok(RipReport {
        k,
        method: RipMethod::Gershgorin,
        delta: (k as f64 - 1.0) * report.mu,
        witness: None,
        runtime_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Power-method estimate `delta_{k;q} = max_S Tr[(Phi_S^* Phi_S - I)^(2q)]^(1/2q)`;
/// nonincreasing in q with limit equal to the exact constant.
pub fn power_delta(frame: &Frame, k: usize, q: u32) -> Result<RipReport> {
    power_delta_with_budget(frame, k, q, DEFAULT_BUDGET)
}

pub fn power_delta_with_budget(frame: &Frame, k: usize, q: u32, budget: u128) -> Result<RipReport> {
    assert!(q >= 1, "power method needs q >= 1");
    let start = std::time::Instant::now();
    let g = numerics::gram(&frame.matrix);
    let (delta, witness) = subset_argmax(frame.cols(), k, budget, |subset| {
        let trace: f64 = eig_of_subgram(&g, subset)
            .into_iter()
            .map(|l| (l - 1.0).powi(2 * q as i32))
            .sum();
        trace.powf(1.0 / (2.0 * q as f64))
    })?;
    Ok(RipReport {
        k,
        method: RipMethod::Power { q },
        delta,
        witness: Some(witness),
        runtime_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Exact restricted orthogonality constant `theta_k`: the largest spectral
/// norm of an off-diagonal Gram block over disjoint supports of size at
/// most k. The maximum is attained at equal full-size supports, so only
/// those are enumerated.
pub fn restricted_orthogonality(frame: &Frame, k: usize) -> Result<f64> {
    restricted_orthogonality_with_budget(frame, k, DEFAULT_BUDGET)
}

pub fn restricted_orthogonality_with_budget(frame: &Frame, k: usize, budget: u128) -> Result<f64> {
    let n = frame.cols();
    if 2 * k > n {
        return Err(Error::InadmissibleParameters(format!(
            "restricted orthogonality needs 2k <= N, got k = {k}, N = {n}"
        )));
    }
    let pairs = binomial(n, k) * binomial(n - k, k);
    if pairs > budget {
        return Err(Error::BudgetExceeded(pairs, budget));
    }
    let g = numerics::gram(&frame.matrix);
    let mut best = 0.0f64;
    let mut left = (0..k).collect::<Vec<_>>();
    loop {
        let complement: Vec<usize> = (0..n).filter(|i| !left.contains(i)).collect();
        let mut right_sel = (0..k).collect::<Vec<_>>();
        loop {
            let right: Vec<usize> = right_sel.iter().map(|&i| complement[i]).collect();
            // (I, J) and (J, I) give the same value; keep min(I) < min(J)
            if right[0] > left[0] {
                let block = Matrix::from_fn(k, k, |i, j| g.get(left[i], right[j]));
                best = best.max(numerics::spectral_norm(&block));
            }
            if !next_combination(&mut right_sel, complement.len()) {
                break;
            }
        }
        if !next_combination(&mut left, n) {
            break;
        }
    }
    Ok(best)
}

/// Flat restricted orthogonality scan.
#[derive(Clone, Debug, Serialize)]
pub struct FlatRo {
    /// tightest flat constant: max |<sum_I phi, sum_J phi>| / sqrt(|I| |J|)
    pub theta_hat: f64,
    /// the induced restricted-orthogonality bound 75 theta_hat ln k (k >= 2)
    pub ro_upper: f64,
}

pub fn flat_ro(frame: &Frame, k: usize) -> Result<FlatRo> {
    flat_ro_with_budget(frame, k, DEFAULT_BUDGET)
}

pub fn flat_ro_with_budget(frame: &Frame, k: usize, budget: u128) -> Result<FlatRo> {
    let n = frame.cols();
    if k == 0 || k > n {
        return Err(Error::InadmissibleParameters("flat RO needs 1 <= k <= N".into()));
    }
    let mut pair_count: u128 = 0;
    for a in 1..=k.min(n) {
        for b in 1..=k.min(n.saturating_sub(a)) {
            pair_count += binomial(n, a) * binomial(n - a, b);
        }
    }
    if pair_count > budget {
        return Err(Error::BudgetExceeded(pair_count, budget));
    }
    let g = numerics::gram(&frame.matrix);
    let mut theta_hat = 0.0f64;
    for a in 1..=k {
        if a > n {
            break;
        }
        let mut left = (0..a).collect::<Vec<_>>();
        loop {
            let complement: Vec<usize> = (0..n).filter(|i| !left.contains(i)).collect();
            for b in 1..=k.min(complement.len()) {
                let mut right_sel = (0..b).collect::<Vec<_>>();
                loop {
                    let right: Vec<usize> = right_sel.iter().map(|&i| complement[i]).collect();
                    if !(a == b && right[0] < left[0]) {
                        let mut dot = C64::new(0.0, 0.0);
                        for &i in &left {
                            for &j in &right {
                                dot += g.get(i, j);
                            }
                        }
                        theta_hat = theta_hat.max(dot.norm() / ((a * b) as f64).sqrt());
                    }
                    if !next_combination(&mut right_sel, complement.len()) {
                        break;
                    }
                }
            }
            if !next_combination(&mut left, n) {
                break;
            }
        }
    }
    let ro_upper = if k >= 2 { 75.0 * theta_hat * (k as f64).ln() } else { theta_hat };
    Ok(FlatRo { theta_hat, ro_upper })
}

/// Bridge from restricted orthogonality to restricted isometry:
/// `delta_2k <= 2 theta_k + delta_1`.
pub fn ro_to_rip(theta_k: f64, delta_1: f64) -> f64 {
    assert!(theta_k >= 0.0 && delta_1 >= 0.0);
    2.0 * theta_k + delta_1
}

/// `delta_1 = max_n | ||phi_n||^2 - 1 |`, zero for unit-norm frames.
pub fn delta_one(frame: &Frame) -> f64 {
    (0..frame.cols())
        .map(|c| (numerics::vec_norm(frame.matrix.col(c)).powi(2) - 1.0).abs())
        .fold(0.0, f64::max)
}

/// How a spark result was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SparkMethod {
    Brute,
    DftUniform,
    VandermondeRule,
}

/// Result of a spark computation. `spark == M + 1` means full spark.
#[derive(Clone, Debug, Serialize)]
pub struct SparkReport {
    pub spark: usize,
    /// a minimal dependent column subset, when one exists and was located
    pub witness: Option<Vec<usize>>,
    pub method: SparkMethod,
}

impl SparkReport {
    pub fn is_full_spark(&self, m: usize) -> bool {
        self.spark == m + 1
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }
}

fn columns_dependent(frame: &Matrix, subset: &[usize]) -> bool {
    let sub = frame.select_columns(subset);
    let sv = numerics::singular_values(&sub);
    match (sv.first(), sv.last()) {
        (Some(&max), Some(&min)) => min < DEPENDENCE_TOL * max,
        _ => false,
    }
}

/// Exact spark by brute enumeration from subset size 2 upward, stopping at
/// the first dependent subset in lexicographic order.
pub fn spark(frame: &Frame) -> Result<SparkReport> {
    spark_with_budget(frame, DEFAULT_BUDGET)
}

pub fn spark_with_budget(frame: &Frame, budget: u128) -> Result<SparkReport> {
    let m = frame.rows();
    let n = frame.cols();
    let mut visited: u128 = 0;
    for size in 2..=m.min(n) {
        let total = binomial(n, size);
        visited += total;
        if visited > budget {
            return Err(Error::BudgetExceeded(visited, budget));
        }
        let mut subset: Vec<usize> = (0..size).collect();
        loop {
            if columns_dependent(&frame.matrix, &subset) {
                return Ok(SparkReport { spark: size, witness: Some(subset), method: SparkMethod::Brute });
            }
            if !next_combination(&mut subset, n) {
                break;
            }
        }
    }
    // every (M+1)-subset in M-dimensional space is dependent
    Ok(SparkReport { spark: m + 1, witness: None, method: SparkMethod::Brute })
}

/// Spark of a Vandermonde matrix by the distinct-bases rule: full spark if
/// and only if the bases are pairwise distinct.
pub fn spark_vandermonde(bases: &[C64], m: usize) -> SparkReport {
    for i in 0..bases.len() {
        for j in (i + 1)..bases.len() {
            if (bases[i] - bases[j]).norm() < 1e-12 {
                // a duplicated base already makes m+? columns dependent at size 2
                return SparkReport {
                    spark: 2,
                    witness: Some(vec![i, j]),
                    method: SparkMethod::VandermondeRule,
                };
            }
        }
    }
    SparkReport { spark: m + 1, witness: None, method: SparkMethod::VandermondeRule }
}

/// Verdict of the DFT row-selection full-spark test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DftSparkVerdict {
    FullSpark,
    NotFullSpark,
    /// the uniform-distribution condition passed, but it is only necessary
    /// for this modulus and the instance is too large to certify by minors
    NecessaryConditionOnly,
}

#[derive(Clone, Debug, Serialize)]
pub struct DftSparkReport {
    pub n: usize,
    pub rows: Vec<usize>,
    pub uniform: bool,
    pub verdict: DftSparkVerdict,
    pub method: SparkMethod,
    pub witness: Option<Vec<usize>>,
    /// the verdict was computed on the complementary row set, which is
    /// equivalent by the complement closure rule
    pub via_complement: bool,
}

impl DftSparkReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }
}

/// Is `rows` uniformly distributed over the divisors of n: for every divisor
/// d, each coset of <d> holds floor(|rows|/d) or ceil(|rows|/d) indices.
pub fn uniformly_distributed(n: usize, rows: &[usize]) -> bool {
    for d in 1..=n {
        if n % d != 0 {
            continue;
        }
        let mut counts = vec![0usize; d];
        for &r in rows {
            counts[r % d] += 1;
        }
        let lo = rows.len() / d;
        let hi = lo + usize::from(rows.len() % d != 0);
        if counts.iter().any(|&c| c != lo && c != hi) {
            return false;
        }
    }
    true
}

fn is_prime_power(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut m = n;
            while m % p == 0 {
                m /= p;
            }
            return m == 1;
        }
        p += 1;
    }
    true // prime
}

/// Brute fallback range: exact minor enumeration is feasible for these sizes.
const BRUTE_N_MAX: usize = 16;
const BRUTE_M_MAX: usize = 8;

/// Full-spark test for the submatrix of the n x n DFT with the given rows.
///
/// For prime powers the uniform-distribution criterion is exact. For other
/// moduli it is necessary only; when it passes, a brute minor scan decides
/// the small cases and everything else reports `NecessaryConditionOnly`.
pub fn dft_full_spark_test(n: usize, rows: &[usize]) -> Result<DftSparkReport> {
    if rows.is_empty() {
        return Err(Error::EmptyRowSet);
    }
    let mut rows = rows.to_vec();
    rows.sort_unstable();
    rows.dedup();
    if rows.iter().any(|&r| r >= n) {
        return Err(Error::Parse(format!("row index out of range 0..{n}")));
    }
    let uniform = uniformly_distributed(n, &rows);
    let m = rows.len();
    if is_prime_power(n) {
        let verdict = if uniform { DftSparkVerdict::FullSpark } else { DftSparkVerdict::NotFullSpark };
        return Ok(DftSparkReport {
            n,
            rows,
            uniform,
            verdict,
            method: SparkMethod::DftUniform,
            witness: None,
            via_complement: false,
        });
    }
    if !uniform {
        // necessity holds for every modulus
        return Ok(DftSparkReport {
            n,
            rows,
            uniform,
            verdict: DftSparkVerdict::NotFullSpark,
            method: SparkMethod::DftUniform,
            witness: None,
            via_complement: false,
        });
    }
    if m == n {
        // the full DFT is invertible
        return Ok(DftSparkReport {
            n,
            rows,
            uniform,
            verdict: DftSparkVerdict::FullSpark,
            method: SparkMethod::DftUniform,
            witness: None,
            via_complement: false,
        });
    }
    // the complement closure rule makes the verdicts of a row set and its
    // complement equal; decide on whichever side has fewer rows
    if 2 * m > n {
        let complement: Vec<usize> = (0..n).filter(|i| !rows.contains(i)).collect();
        let inner = dft_full_spark_test(n, &complement)?;
        return Ok(DftSparkReport {
            n,
            rows,
            uniform,
            verdict: inner.verdict,
            method: inner.method,
            witness: None,
            via_complement: true,
        });
    }
    if n <= BRUTE_N_MAX && m <= BRUTE_M_MAX {
        let frame = crate::frames::build_harmonic(n, &rows, false)?;
        let mut subset: Vec<usize> = (0..m).collect();
        loop {
            if columns_dependent(&frame.matrix, &subset) {
                return Ok(DftSparkReport {
                    n,
                    rows,
                    uniform,
                    verdict: DftSparkVerdict::NotFullSpark,
                    method: SparkMethod::Brute,
                    witness: Some(subset),
                    via_complement: false,
                });
            }
            if !next_combination(&mut subset, n) {
                break;
            }
        }
        return Ok(DftSparkReport {
            n,
            rows,
            uniform,
            verdict: DftSparkVerdict::FullSpark,
            method: SparkMethod::Brute,
            witness: None,
            via_complement: false,
        });
    }
    Ok(DftSparkReport {
        n,
        rows,
        uniform,
        verdict: DftSparkVerdict::NecessaryConditionOnly,
        method: SparkMethod::DftUniform,
        witness: None,
        via_complement: false,
    })
}

/// Empirical weak-RIP probe: the supplied sparse values are scattered over
/// random supports (a random permutation of the entries) and the relative
/// energy distortion `| ||Phi x||^2 - ||x||^2 | / ||x||^2` is recorded.
#[derive(Clone, Debug, Serialize)]
pub struct WeakRipProbe {
    /// all observed distortions, ascending
    pub distortions: Vec<f64>,
    /// strong coherence property held by the frame
    pub scp: bool,
    /// N >= 128 gate of the weak-RIP guarantee
    pub n_at_least_128: bool,
    /// 2 K ln N <= M gate
    pub sparsity_gate: bool,
    /// smallest delta with 2 K ln N <= delta^2/(100 mu^2)
    pub delta_for_regime: f64,
}

impl WeakRipProbe {
    pub fn max_distortion(&self) -> f64 {
        self.distortions.last().copied().unwrap_or(0.0)
    }

    pub fn quantile(&self, q: f64) -> f64 {
        if self.distortions.is_empty() {
            return 0.0;
        }
        let idx = ((self.distortions.len() - 1) as f64 * q).round() as usize;
        self.distortions[idx]
    }
}

pub fn weak_rip_probe(frame: &Frame, values: &[C64], trials: usize, rng: &mut Rng) -> Result<WeakRipProbe> {
    let k = values.len();
    let n = frame.cols();
    let m = frame.rows();
    if k == 0 || k > n || trials == 0 {
        return Err(Error::InadmissibleParameters("weak RIP probe needs 1 <= K <= N and trials >= 1".into()));
    }
    let norm_sq: f64 = values.iter().map(|v| v.norm_sqr()).sum();
    if norm_sq == 0.0 {
        return Err(Error::InadmissibleParameters("value vector must be nonzero".into()));
    }
    let mut distortions = Vec::with_capacity(trials);
    for _ in 0..trials {
        let support = rng.distinct_indices(n, k);
        let mut order: Vec<usize> = (0..k).collect();
        rng.shuffle(&mut order);
        let mut image = vec![C64::new(0.0, 0.0); m];
        for (slot, &col) in support.iter().enumerate() {
            let v = values[order[slot]];
            for (t, &e) in frame.matrix.col(col).iter().enumerate() {
                image[t] += e * v;
            }
        }
        let img_sq: f64 = image.iter().map(|v| v.norm_sqr()).sum();
        distortions.push((img_sq - norm_sq).abs() / norm_sq);
    }
    distortions.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let rep = crate::coherence::coherence_report(frame)?;
    let kln = 2.0 * k as f64 * (n as f64).ln();
    Ok(WeakRipProbe {
        distortions,
        scp: rep.scp1 && rep.scp2,
        n_at_least_128: n >= 128,
        sparsity_gate: kln <= m as f64,
        delta_for_regime: 10.0 * rep.mu * kln.sqrt(),
    })
}

/// Clique audit of the Paley graph on Z_p (adjacency: difference is a
/// nonzero quadratic residue).
#[derive(Clone, Debug, Serialize)]
pub struct PaleyCliqueAudit {
    pub p: u64,
    /// exact clique number for the audited range
    pub omega: usize,
    pub sqrt_p: f64,
    /// omega < sqrt(p)
    pub within_bound: bool,
}

pub fn paley_clique_audit(p: u64) -> Result<PaleyCliqueAudit> {
    if !finite::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p % 4 != 1 {
        return Err(Error::BadPrime(p));
    }
    if p > 101 {
        return Err(Error::InadmissibleParameters(format!(
            "clique search is exhaustive only up to p = 101, got {p}"
        )));
    }
    let n = p as usize;
    let residues: std::collections::HashSet<u64> =
        finite::quadratic_residues(p).into_iter().filter(|&r| r != 0).collect();
    let adjacent =
        |a: usize, b: usize| residues.contains(&(((a as i64 - b as i64).rem_euclid(p as i64)) as u64));
    // the Paley graph is vertex-transitive, so some maximum clique contains 0
    let neighbors0: Vec<usize> = (1..n).filter(|&v| adjacent(0, v)).collect();
    let mut best = 1usize;
    fn extend(
        chosen: usize,
        candidates: &[usize],
        adjacent: &dyn Fn(usize, usize) -> bool,
        best: &mut usize,
    ) {
        if chosen + candidates.len() <= *best {
            return; // cannot beat the incumbent
        }
        if candidates.is_empty() {
            *best = (*best).max(chosen);
            return;
        }
        for (i, &v) in candidates.iter().enumerate() {
            if chosen + (candidates.len() - i) <= *best {
                break;
            }
            let next: Vec<usize> =
                candidates[i + 1..].iter().copied().filter(|&u| adjacent(u, v)).collect();
            extend(chosen + 1, &next, adjacent, best);
        }
        *best = (*best).max(chosen);
    }
    extend(1, &neighbors0, &adjacent, &mut best);
    Ok(PaleyCliqueAudit {
        p,
        omega: best,
        sqrt_p: (p as f64).sqrt(),
        within_bound: (best as f64) < (p as f64).sqrt(),
    })
}
