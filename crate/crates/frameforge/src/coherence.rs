//! Worst-case and average coherence, frame potential, the Welch and
//! asymptotic lower bounds, and the strong-coherence-property verdict.

use serde::Serialize;

use crate::frames::Frame;
use crate::numerics::{self, Matrix};
use crate::Result;

/// Everything the coherence scan produces for one frame.
///
/// `scp1` uses the natural logarithm in `mu <= 1/(164 ln N)`; the log base is
/// a documented convention, not pinned by the source material.
#[derive(Clone, Debug, Serialize)]
pub struct CoherenceReport {
    pub rows: usize,
    pub cols: usize,
    /// worst-case coherence: max |<phi_i, phi_j>| over distinct columns
    pub mu: f64,
    /// average coherence: max_i |sum_{j != i} <phi_i, phi_j>| / (N-1)
    pub nu: f64,
    pub spectral_norm: f64,
    /// Hilbert-Schmidt norm squared of the Gram matrix
    pub frame_potential: f64,
    pub welch_bound: f64,
    /// mu <= 1/(164 ln N)
    pub scp1: bool,
    /// nu <= mu / sqrt(M)
    pub scp2: bool,
    /// column pair attaining mu
    pub argmax_pair: (usize, usize),
    /// input columns were not unit-norm and were normalized first
    pub normalized_input: bool,
}

impl CoherenceReport {
    /// Flat `key=value` text block, one key per line; stable ordering.
    pub fn to_text(&self) -> String {
        format!(
            "rows={}\ncols={}\nmu={:.12e}\nnu={:.12e}\nspectral_norm={:.12e}\nframe_potential={:.12e}\nwelch_bound={:.12e}\nscp1={}\nscp2={}\nargmax_i={}\nargmax_j={}\nnormalized_input={}\n",
            self.rows,
            self.cols,
            self.mu,
            self.nu,
            self.spectral_norm,
            self.frame_potential,
            self.welch_bound,
            self.scp1,
            self.scp2,
            self.argmax_pair.0,
            self.argmax_pair.1,
            self.normalized_input,
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }
}

/// Full coherence scan. Frames that are not unit-norm are normalized first
/// and flagged, so the report always describes a unit-norm frame.
pub fn coherence_report(frame: &Frame) -> Result<CoherenceReport> {
    let (unit, normalized_input) = frame.normalized();
    let m = unit.rows();
    let n = unit.cols();
    let g = numerics::gram(&unit.matrix);
    let mut mu = 0.0f64;
    let mut argmax = (0, 0);
    let mut potential = 0.0f64;
    let mut nu = 0.0f64;
    // reductions run in column-index order so results are independent of any
    // partitioning of the pair scan
    for i in 0..n {
        let mut row_sum = numerics::C64::new(0.0, 0.0);
        for j in 0..n {
            let v = g.get(i, j);
            potential += v.norm_sqr();
            if i != j {
                row_sum += v;
                if j > i && v.norm() > mu {
                    mu = v.norm();
                    argmax = (i, j);
                }
            }
        }
        if n > 1 {
            nu = nu.max(row_sum.norm() / (n as f64 - 1.0));
        }
    }
    let welch_bound = welch_lower_bound(m, n);
    let scp1 = n >= 2 && mu <= 1.0 / (164.0 * (n as f64).ln());
    let scp2 = nu <= mu / (m as f64).sqrt();
    Ok(CoherenceReport {
        rows: m,
        cols: n,
        mu,
        nu,
        spectral_norm: numerics::spectral_norm(&unit.matrix),
        frame_potential: potential,
        welch_bound,
        scp1,
        scp2,
        argmax_pair: argmax,
        normalized_input,
    })
}

/// Welch bound `sqrt((N-M)/(M(N-1)))`; zero for orthonormal bases.
pub fn welch_lower_bound(m: usize, n: usize) -> f64 {
    assert!(n >= m && m >= 1, "welch bound needs N >= M >= 1");
    if n == 1 {
        return 0.0;
    }
    (((n - m) as f64) / ((m * (n - 1)) as f64)).sqrt()
}

/// The coherence floors that bite when N is exponentially large in M.
#[derive(Clone, Debug, Serialize)]
pub struct AsymptoticBounds {
    /// `1 - 2 N^(-1/(M-1))`, valid for any unit-norm frame
    pub complex_bound: f64,
    /// `cos[pi ((M-1) Gamma((M-1)/2) / (N sqrt(pi) Gamma(M/2)))^(1/(M-1))]`,
    /// valid for real unit-norm frames
    pub real_bound: f64,
    /// `1 - 4/N + 2/N^2`, valid for real frames in dimension 3
    pub dim3_bound: Option<f64>,
}

/// Closed-form lower bounds on worst-case coherence for M >= 2.
pub fn asymptotic_lower_bounds(m: usize, n: usize) -> AsymptoticBounds {
    assert!(m >= 2, "asymptotic bounds need M >= 2");
    let nf = n as f64;
    let mf = m as f64;
    let complex_bound = 1.0 - 2.0 * nf.powf(-1.0 / (mf - 1.0));
    let ratio = (mf - 1.0) / (nf * std::f64::consts::PI.sqrt())
        * (gamma((mf - 1.0) / 2.0) / gamma(mf / 2.0));
    let real_bound = (std::f64::consts::PI * ratio.powf(1.0 / (mf - 1.0))).cos();
    let dim3_bound = (m == 3).then(|| 1.0 - 4.0 / nf + 2.0 / (nf * nf));
    AsymptoticBounds { complex_bound, real_bound, dim3_bound }
}

/// Lanczos approximation (g = 7, 9 terms), good to about 1e-13 relative for
/// positive arguments.
pub fn gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEFFS: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // reflection formula
        std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut acc = COEFFS[0];
        for (i, &c) in COEFFS.iter().enumerate().skip(1) {
            acc += c / (x + i as f64);
        }
        let t = x + G + 0.5;
        (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
    }
}

/// The three sufficient conditions under which average coherence is at most
/// `mu / sqrt(M)`: (i) every column has inner product N/M with the column
/// sum, (ii) N >= 2M and the columns sum to zero, (iii) N >= M^2 + 3M + 3
/// and the column sum has squared norm at most N.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NuSufficientConditions {
    pub cond_i: bool,
    pub cond_ii: bool,
    pub cond_iii: bool,
}

impl NuSufficientConditions {
    pub fn any(&self) -> bool {
        self.cond_i || self.cond_ii || self.cond_iii
    }
}

pub fn check_nu_sufficient_conditions(frame: &Frame) -> Result<NuSufficientConditions> {
    let (unit, _) = frame.normalized();
    let m = unit.rows();
    let n = unit.cols();
    let mut col_sum = vec![numerics::C64::new(0.0, 0.0); m];
    for c in 0..n {
        for (t, v) in unit.matrix.col(c).iter().enumerate() {
            col_sum[t] += v;
        }
    }
    let target = numerics::C64::new(n as f64 / m as f64, 0.0);
    let cond_i = (0..n).all(|c| (numerics::inner(unit.matrix.col(c), &col_sum) - target).norm() <= 1e-9);
    let sum_norm = numerics::vec_norm(&col_sum);
    let cond_ii = n >= 2 * m && sum_norm <= 1e-9;
    let cond_iii = n >= m * m + 3 * m + 3 && sum_norm * sum_norm <= n as f64 + 1e-9;
    Ok(NuSufficientConditions { cond_i, cond_ii, cond_iii })
}

/// M = 2 planar frame of N unit vectors at angles j pi / N; attains the real
/// coherence bound cos(pi/N) with equality.
pub fn equally_spaced_planar_frame(n: usize) -> Result<Frame> {
    use crate::frames::FrameTags;
    let matrix = Matrix::from_fn(2, n, |r, c| {
        let ang = std::f64::consts::PI * c as f64 / n as f64;
        numerics::C64::new(if r == 0 { ang.cos() } else { ang.sin() }, 0.0)
    });
    let mut tags = FrameTags::new("planar-equispaced", &format!("n={n}"));
    tags.unit_norm = true;
    Frame::new(matrix, tags)
}
