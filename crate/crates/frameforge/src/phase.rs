//! Polarization-based phaseless recovery: magnitudes of inner products with
//! a full spark frame plus, for each graph edge, the four shifted vectors
//! `phi_i + i^k phi_j`. The polarization identity turns the edge magnitudes
//! into relative phases, which propagate over the surviving graph before a
//! canonical-dual reconstruction.

use serde::Serialize;

use crate::frames::Frame;
use crate::numerics::{self, Matrix, Rng, C64};
use crate::{Error, Result};

/// Vertex removal threshold: a vertex magnitude below this fraction of the
/// largest magnitude counts as an orthogonal (dead) vertex.
const VERTEX_TOL: f64 = 1e-9;
/// Largest tolerated cycle phase inconsistency for noiseless input.
const CYCLE_TOL: f64 = 1e-6;

/// Simple measurement graph with optional regularity metadata.
#[derive(Clone, Debug, Serialize)]
pub struct MeasurementGraph {
    pub vertices: usize,
    /// edge list with i < j, sorted, no duplicates
    pub edges: Vec<(usize, usize)>,
    /// common degree, when the graph is regular
    pub degree: Option<usize>,
    /// spectral expansion max(|l2|, |ln|)/d for regular graphs
    pub expansion: Option<f64>,
}

impl MeasurementGraph {
    /// Validates simplicity (no loops or multi-edges) and computes the
    /// spectral expansion when the graph is regular.
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<MeasurementGraph> {
        let mut cleaned: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for &(a, b) in &edges {
            if a == b {
                return Err(Error::GraphConstruction(format!("loop at vertex {a}")));
            }
            if a >= vertices || b >= vertices {
                return Err(Error::GraphConstruction(format!("edge ({a},{b}) out of range")));
            }
            cleaned.push((a.min(b), a.max(b)));
        }
        cleaned.sort_unstable();
        let before = cleaned.len();
        cleaned.dedup();
        if cleaned.len() != before {
            return Err(Error::GraphConstruction("multi-edge".into()));
        }
        let mut degrees = vec![0usize; vertices];
        for &(a, b) in &cleaned {
            degrees[a] += 1;
            degrees[b] += 1;
        }
        let degree = if vertices > 0 && degrees.iter().all(|&d| d == degrees[0]) {
            Some(degrees[0])
        } else {
            None
        };
        let expansion = match degree {
            Some(d) if d > 0 => {
                let mut adj = Matrix::zeros(vertices, vertices);
                for &(a, b) in &cleaned {
                    adj.set(a, b, C64::new(1.0, 0.0));
                    adj.set(b, a, C64::new(1.0, 0.0));
                }
                let eig = numerics::hermitian_eigenvalues(&adj)?;
                Some(eig[1].abs().max(eig[vertices - 1].abs()) / d as f64)
            }
            _ => None,
        };
        Ok(MeasurementGraph { vertices, edges: cleaned, degree, expansion })
    }

    pub fn complete(n: usize) -> Result<MeasurementGraph> {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                edges.push((i, j));
            }
        }
        MeasurementGraph::new(n, edges)
    }

    pub fn cycle(n: usize) -> Result<MeasurementGraph> {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        MeasurementGraph::new(n, edges)
    }

    /// Star with internal vertex 0.
    pub fn star(n: usize) -> Result<MeasurementGraph> {
        let edges: Vec<(usize, usize)> = (1..n).map(|i| (0, i)).collect();
        MeasurementGraph::new(n, edges)
    }

    pub fn edgeless(n: usize) -> Result<MeasurementGraph> {
        MeasurementGraph::new(n, Vec::new())
    }
}

/// Random d-regular simple graph by configuration-model pairing with
/// rejection of loops and multi-edges. Deterministic per seed.
pub fn random_regular_graph(n: usize, d: usize, rng: &mut Rng) -> Result<MeasurementGraph> {
    if n * d % 2 != 0 || d >= n {
        return Err(Error::GraphConstruction(format!(
            "d-regular graph needs n d even and d < n, got n = {n}, d = {d}"
        )));
    }
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    const MAX_ATTEMPTS: usize = 100_000;
    'attempt: for _ in 0..MAX_ATTEMPTS {
        rng.shuffle(&mut stubs);
        let mut seen = std::collections::HashSet::new();
        let mut edges = Vec::with_capacity(n * d / 2);
        for pair in stubs.chunks_exact(2) {
            let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if a == b || !seen.insert((a, b)) {
                continue 'attempt;
            }
            edges.push((a, b));
        }
        return MeasurementGraph::new(n, edges);
    }
    Err(Error::GraphConstruction(format!(
        "no simple {d}-regular pairing found in {MAX_ATTEMPTS} attempts"
    )))
}

/// Measurement design: the vertex frame plus the four polarization vectors
/// per edge. Total measurement count is |V| + 4|E|.
#[derive(Clone, Debug)]
pub struct PolarizationDesign {
    pub vertex_frame: Frame,
    pub graph: MeasurementGraph,
    /// for edge (i, j): the four vectors `phi_i + i^k phi_j`, k = 0..3
    pub edge_vectors: Vec<[Vec<C64>; 4]>,
}

impl PolarizationDesign {
    pub fn measurement_count(&self) -> usize {
        self.graph.vertices + 4 * self.graph.edges.len()
    }
}

/// Assemble a design from a frame and a graph with matching vertex count.
/// The frame must be certified full spark unless `skip_spark_check` is set.
pub fn build_design(
    frame: &Frame,
    graph: MeasurementGraph,
    skip_spark_check: bool,
) -> Result<PolarizationDesign> {
    if frame.cols() != graph.vertices {
        return Err(Error::DimensionMismatch(format!(
            "frame has {} columns but the graph has {} vertices",
            frame.cols(),
            graph.vertices
        )));
    }
    if !skip_spark_check {
        let report = crate::rip::spark(frame)?;
        if !report.is_full_spark(frame.rows()) {
            return Err(Error::InvalidFrame(format!(
                "vertex frame is not full spark (spark = {})",
                report.spark
            )));
        }
    }
    let i_unit = C64::new(0.0, 1.0);
    let edge_vectors = graph
        .edges
        .iter()
        .map(|&(i, j)| {
            let phi_i = frame.matrix.col(i);
            let phi_j = frame.matrix.col(j);
            std::array::from_fn(|k| {
                let ik = i_unit.powu(k as u32);
                phi_i.iter().zip(phi_j).map(|(a, b)| a + ik * b).collect()
            })
        })
        .collect();
    Ok(PolarizationDesign { vertex_frame: frame.clone(), graph, edge_vectors })
}

/// `|<x, v>|` for every design vector, vertex measurements first, then the
/// four k-ordered magnitudes per edge in edge order.
pub fn phaseless_measure(design: &PolarizationDesign, x: &[C64]) -> Result<Vec<f64>> {
    if x.len() != design.vertex_frame.rows() {
        return Err(Error::DimensionMismatch("signal dimension != frame rows".into()));
    }
    let mut out = Vec::with_capacity(design.measurement_count());
    for c in 0..design.vertex_frame.cols() {
        out.push(numerics::inner(design.vertex_frame.matrix.col(c), x).norm());
    }
    for vectors in &design.edge_vectors {
        for v in vectors {
            out.push(numerics::inner(v, x).norm());
        }
    }
    Ok(out)
}

/// Successful recovery with diagnostics.
#[derive(Clone, Debug)]
pub struct Recovery {
    /// estimate of x, up to one global phase
    pub estimate: Vec<C64>,
    /// vertices of the component used for reconstruction
    pub component: Vec<usize>,
    /// worst phase deviation over non-tree edges (diagnostic)
    pub max_cycle_deviation: f64,
}

/// Recover the signal (up to global phase) from the design magnitudes:
/// prune near-zero vertices, recover edge-relative phases by polarization,
/// propagate phases over a breadth-first spanning tree of the largest
/// surviving component anchored at the strongest vertex, and reconstruct
/// through the component subframe's canonical dual.
pub fn recover(design: &PolarizationDesign, magnitudes: &[f64]) -> Result<Recovery> {
    let n = design.graph.vertices;
    let m = design.vertex_frame.rows();
    if magnitudes.len() != design.measurement_count() {
        return Err(Error::DimensionMismatch(format!(
            "expected {} magnitudes, got {}",
            design.measurement_count(),
            magnitudes.len()
        )));
    }
    let vertex_mags = &magnitudes[..n];
    let peak = vertex_mags.iter().cloned().fold(0.0, f64::max);
    let alive: Vec<bool> = vertex_mags.iter().map(|&v| v > VERTEX_TOL * peak).collect();

    // relative phase per surviving edge from the polarization identity:
    // conj(c_i) c_j = (1/4) sum_k i^k m_k^2
    let i_unit = C64::new(0.0, 1.0);
    let mut adjacency: Vec<Vec<(usize, C64)>> = vec![Vec::new(); n];
    for (e, &(i, j)) in design.graph.edges.iter().enumerate() {
        if !alive[i] || !alive[j] {
            continue;
        }
        let mags = &magnitudes[n + 4 * e..n + 4 * e + 4];
        let mut prod = C64::new(0.0, 0.0);
        for (k, &mk) in mags.iter().enumerate() {
            prod += i_unit.powu(k as u32) * (mk * mk);
        }
        prod *= 0.25;
        if prod.norm() == 0.0 {
            continue;
        }
        let omega = prod / prod.norm(); // phase_j = phase_i * omega
        adjacency[i].push((j, omega));
        adjacency[j].push((i, omega.conj()));
    }

    // largest connected component among alive vertices (ties by smallest id)
    let mut component_of = vec![usize::MAX; n];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if !alive[start] || component_of[start] != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut queue = std::collections::VecDeque::from([start]);
        component_of[start] = id;
        let mut members = vec![start];
        while let Some(v) = queue.pop_front() {
            for &(u, _) in &adjacency[v] {
                if component_of[u] == usize::MAX {
                    component_of[u] = id;
                    members.push(u);
                    queue.push_back(u);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }
    let component = components
        .into_iter()
        .max_by_key(|c| c.len())
        .unwrap_or_default();
    if component.len() < m {
        return Err(Error::Disconnected(m));
    }

    // BFS phase propagation from the strongest vertex of the component
    let anchor = *component
        .iter()
        .max_by(|&&a, &&b| vertex_mags[a].partial_cmp(&vertex_mags[b]).unwrap())
        .expect("component is nonempty");
    let mut phase: Vec<Option<C64>> = vec![None; n];
    phase[anchor] = Some(C64::new(1.0, 0.0));
    let mut queue = std::collections::VecDeque::from([anchor]);
    let mut tree_edges = std::collections::HashSet::new();
    while let Some(v) = queue.pop_front() {
        for &(u, omega) in &adjacency[v] {
            if phase[u].is_none() {
                phase[u] = Some(phase[v].unwrap() * omega);
                tree_edges.insert((v.min(u), v.max(u)));
                queue.push_back(u);
            }
        }
    }

    // cycle consistency on the non-tree edges
    let mut max_cycle_deviation = 0.0f64;
    for v in &component {
        for &(u, omega) in &adjacency[*v] {
            if tree_edges.contains(&((*v).min(u), (*v).max(u))) {
                continue;
            }
            if let (Some(pv), Some(pu)) = (phase[*v], phase[u]) {
                max_cycle_deviation = max_cycle_deviation.max((pv * omega - pu).norm());
            }
        }
    }
    if max_cycle_deviation > CYCLE_TOL {
        return Err(Error::InconsistentCycle(max_cycle_deviation));
    }

    // frame coefficients on the component, then canonical-dual reconstruction:
    // solve Phi_C^* x = c in the least-squares sense
    let coeffs: Vec<C64> = component
        .iter()
        .map(|&v| phase[v].unwrap() * vertex_mags[v])
        .collect();
    let subframe = design.vertex_frame.matrix.select_columns(&component);
    let analysis = subframe.conj_transpose(); // |C| x M, full column rank
    let estimate = numerics::least_squares(&analysis, &coeffs)?;
    Ok(Recovery { estimate, component, max_cycle_deviation })
}

/// `min over unimodular theta of ||x - theta xhat||`: the natural error
/// metric for recovery up to global phase.
pub fn phase_aligned_error(x: &[C64], xhat: &[C64]) -> f64 {
    assert_eq!(x.len(), xhat.len());
    let d = numerics::inner(xhat, x);
    let theta = if d.norm() == 0.0 { C64::new(1.0, 0.0) } else { d / d.norm() };
    x.iter()
        .zip(xhat)
        .map(|(a, b)| (a - b * theta).norm_sqr())
        .sum::<f64>()
        .sqrt()
}
