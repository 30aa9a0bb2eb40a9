//! Command-line driver: build frames into files, analyze their coherence
//! geometry, certify restricted isometry and spark, and run the recovery,
//! flipping, phase-retrieval, and fingerprint experiments with reproducible
//! seeds.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use frameforge::coherence;
use frameforge::fingerprint::{self, CollusionScenario};
use frameforge::finite::{steiner_system, HadamardKind, SteinerFamily};
use frameforge::flip;
use frameforge::frames::{self, Frame, GaborSeed, RandomKind, RowChoice};
use frameforge::numerics::Rng;
use frameforge::ost;
use frameforge::phase::{self, MeasurementGraph};
use frameforge::rip;
use frameforge::C64;

#[derive(Parser)]
#[command(
    name = "frameforge",
    about = "Finite frame constructions, coherence geometry, and sparse recovery experiments",
    version
)]
struct Cli {
    /// Worker threads for subset scans (default: available parallelism,
    /// or the FRAMEFORGE_THREADS environment variable)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a frame and write it to a frame file
    Build(BuildArgs),
    /// Coherence report for a frame file
    ///
    /// The strong-coherence flag scp1 compares mu against 1/(164 ln N)
    /// with the natural logarithm.
    Analyze {
        file: PathBuf,
        /// additionally emit the report as one JSON object
        #[arg(long)]
        json: bool,
    },
    /// Restricted isometry certification table
    Rip {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        /// method (default: all of exact, power q=4,2,1, gershgorin)
        #[arg(long, value_enum)]
        method: Option<RipMethodArg>,
        /// power-method exponent (with --method power)
        #[arg(long, default_value_t = 2)]
        q: u32,
        /// subset enumeration budget
        #[arg(long, default_value_t = rip::DEFAULT_BUDGET)]
        budget: u128,
        /// write machine-readable records here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Spark of a frame file, or the DFT row-selection full-spark test
    Spark {
        file: Option<PathBuf>,
        /// DFT size for the row-selection test
        #[arg(long)]
        dft: Option<usize>,
        /// comma-separated row indices for the row-selection test
        #[arg(long, value_delimiter = ',')]
        rows: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One-step thresholding recovery experiment
    Ost {
        #[arg(long)]
        frame: PathBuf,
        /// sparsity level
        #[arg(long)]
        k: usize,
        /// common magnitude of the planted entries
        #[arg(long)]
        alpha: f64,
        /// noise deviation per entry
        #[arg(long)]
        sigma: f64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// threshold split parameter in (0,1)
        #[arg(long, default_value_t = 0.5)]
        t: f64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reduce average coherence by flipping signs
    Flip {
        file: PathBuf,
        /// scan all 2^(N-1) patterns instead of the greedy pass
        #[arg(long)]
        exhaustive: bool,
    },
    /// Polarization phase retrieval experiment
    Phase {
        #[arg(long)]
        frame: PathBuf,
        #[arg(long, value_enum, default_value_t = GraphKind::Complete)]
        graph: GraphKind,
        /// degree for random regular graphs
        #[arg(long, default_value_t = 6)]
        d: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Fingerprint collusion detection experiment
    Fingerprint {
        #[arg(long)]
        frame: PathBuf,
        /// colluding user indices
        #[arg(long, value_delimiter = ',')]
        coalition: Vec<usize>,
        /// fingerprint-to-noise ratio gamma/sigma
        #[arg(long, default_value_t = 10.0)]
        gamma_sigma: f64,
        #[arg(long, default_value_t = 0.5)]
        tau: f64,
        #[arg(long, default_value_t = 10000)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Coherence lower bounds for an M x N frame
    Bounds {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RipMethodArg {
    Exact,
    Power,
    Gershgorin,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphKind {
    Complete,
    Cycle,
    Star,
    Random,
}

#[derive(Args)]
struct BuildArgs {
    #[command(subcommand)]
    family: BuildFamily,
}

#[derive(Subcommand)]
enum BuildFamily {
    /// Steiner equiangular tight frame from a block design
    Steiner {
        #[arg(long, value_enum)]
        family: DesignFamilyArg,
        /// point count for 2-blocks / triples
        #[arg(long)]
        v: Option<usize>,
        /// prime power for affine / projective geometries
        #[arg(long)]
        q: Option<u64>,
        /// geometry dimension for affine / projective
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = HadamardArg::Dft)]
        hadamard: HadamardArg,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Paley equiangular tight frame for prime p = 1 mod 4
    Paley {
        #[arg(long)]
        p: u64,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Gabor frame of all time-frequency shifts
    Gabor {
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value_t = GaborKindArg::Alltop)]
        kind: GaborKindArg,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Chirp frame for prime m
    Chirp {
        #[arg(long)]
        m: usize,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Code-based frame over GF(2^m)
    Code {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        t: usize,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Real spherical 2-design from nonzero DFT rows
    Spherical {
        #[arg(long)]
        dft_size: usize,
        #[arg(long, value_delimiter = ',')]
        rows: Vec<usize>,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Rows of a DFT matrix
    Harmonic {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',')]
        rows: Vec<usize>,
        #[arg(long)]
        normalize: bool,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Vandermonde frame with equally spaced unit-circle bases, normalized
    Vandermonde {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Seeded random families
    Random {
        #[arg(long, value_enum)]
        kind: RandomKindArg,
        #[arg(long)]
        m: usize,
        /// column count (ignored for steinhaus-gabor)
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DesignFamilyArg {
    #[value(name = "2-blocks")]
    TwoBlocks,
    Triples,
    Affine,
    Projective,
}

#[derive(Clone, Copy, ValueEnum)]
enum HadamardArg {
    Real,
    Dft,
}

#[derive(Clone, Copy, ValueEnum)]
enum GaborKindArg {
    Alltop,
    Steinhaus,
}

#[derive(Clone, Copy, ValueEnum)]
enum RandomKindArg {
    Gaussian,
    Harmonic,
    SteinhausGabor,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli
        .threads
        .or_else(|| std::env::var("FRAMEFORGE_THREADS").ok().and_then(|v| v.parse().ok()));
    if let Some(t) = threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn seed_or_default(seed: Option<u64>) -> u64 {
    match seed {
        Some(s) => s,
        None => {
            println!("seed not given; defaulting to 0");
            0
        }
    }
}

fn run(command: Command) -> frameforge::Result<()> {
    match command {
        Command::Build(args) => build(args),
        Command::Analyze { file, json } => {
            let frame = Frame::read_from(&file)?;
            let report = coherence::coherence_report(&frame)?;
            print!("{}", report.to_text());
            if json {
                println!("{}", report.to_json());
            }
            Ok(())
        }
        Command::Rip { file, k, method, q, budget, out } => {
            let frame = Frame::read_from(&file)?;
            let reports = match method {
                Some(RipMethodArg::Exact) => vec![rip::exact_delta_with_budget(&frame, k, budget)?],
                Some(RipMethodArg::Power) => {
                    vec![rip::power_delta_with_budget(&frame, k, q, budget)?]
                }
                Some(RipMethodArg::Gershgorin) => vec![rip::gershgorin_delta(&frame, k)?],
                None => vec![
                    rip::exact_delta_with_budget(&frame, k, budget)?,
                    rip::power_delta_with_budget(&frame, k, 4, budget)?,
                    rip::power_delta_with_budget(&frame, k, 2, budget)?,
                    rip::power_delta_with_budget(&frame, k, 1, budget)?,
                    rip::gershgorin_delta(&frame, k)?,
                ],
            };
            println!("{:<16} {:>4} {:>22} {:>12}", "method", "k", "delta", "runtime_ms");
            for r in &reports {
                println!(
                    "{:<16} {:>4} {:>22.12e} {:>12.3}",
                    r.method.to_string(),
                    r.k,
                    r.delta,
                    r.runtime_ms
                );
            }
            if let Some(path) = out {
                let mut text = String::new();
                for r in &reports {
                    text.push_str(&r.to_json());
                    text.push('\n');
                }
                std::fs::write(path, text)?;
            }
            Ok(())
        }
        Command::Spark { file, dft, rows, out } => {
            if let Some(n) = dft {
                let report = rip::dft_full_spark_test(n, &rows)?;
                let necessary = if report.uniform { "passes" } else { "fails" };
                println!("necessary condition (uniform distribution): {necessary}");
                match report.verdict {
                    rip::DftSparkVerdict::FullSpark => {
                        println!("{}: full spark", method_label(&report.method, report.via_complement))
                    }
                    rip::DftSparkVerdict::NotFullSpark => match &report.witness {
                        Some(w) => println!(
                            "{}: NOT full spark; witness columns {}",
                            method_label(&report.method, report.via_complement),
                            join_usize(w)
                        ),
                        None => println!(
                            "{}: NOT full spark",
                            method_label(&report.method, report.via_complement)
                        ),
                    },
                    rip::DftSparkVerdict::NecessaryConditionOnly => {
                        println!("instance too large for minor enumeration; verdict undecided")
                    }
                }
                if let Some(path) = out {
                    std::fs::write(path, report.to_json() + "\n")?;
                }
            } else if let Some(path) = file {
                let frame = Frame::read_from(&path)?;
                let report = rip::spark(&frame)?;
                if report.is_full_spark(frame.rows()) {
                    println!("spark = {} (full spark)", report.spark);
                } else {
                    println!("spark = {}", report.spark);
                }
                if let Some(w) = &report.witness {
                    println!("dependent columns: {}", join_usize(w));
                }
                if let Some(path) = out {
                    std::fs::write(path, report.to_json() + "\n")?;
                }
            } else {
                return Err(frameforge::Error::Parse(
                    "spark needs a frame file or --dft with --rows".into(),
                ));
            }
            Ok(())
        }
        Command::Ost { frame, k, alpha, sigma, trials, t, seed, out } => {
            let frame = Frame::read_from(&frame)?;
            let seed = seed_or_default(seed);
            let base = Rng::new(seed);
            let n = frame.cols();
            let mut records = Vec::new();
            let mut exact = 0usize;
            let mut within_bound = 0usize;
            for trial in 0..trials {
                let mut rng = base.substream(trial as u64);
                let values: Vec<C64> = (0..k)
                    .map(|_| C64::from_polar(alpha, 2.0 * std::f64::consts::PI * rng.uniform()))
                    .collect();
                let x = ost::SparseSignal::random_support(n, &values, &mut rng)?;
                let y = ost::measure(&frame, &x, sigma, &mut rng)?;
                let rule = ost::threshold_rule(&frame, sigma, ost::snr_of(&frame, &x, sigma), t)?;
                let result = ost::ost(&frame, &y, rule.lambda)?;
                let err = result.l2_error(&x);
                let bound = ost::recovery_error_bound(
                    result.estimated_support.len(),
                    sigma,
                    n,
                    result.missed_energy(&x),
                );
                let hit = result.support_matches(&x);
                let subset = result.support_subset_of(&x);
                exact += usize::from(hit);
                within_bound += usize::from(err <= bound);
                records.push(format!(
                    "{{\"trial\":{trial},\"seed\":{seed},\"k\":{k},\"lambda\":{:.12e},\"exact_support\":{hit},\"subset_of_true\":{subset},\"l2_error\":{err:.12e},\"bound\":{bound:.12e}}}",
                    rule.lambda
                ));
            }
            println!(
                "trials={trials} exact_support={exact} within_bound={within_bound} rate_exact={:.4} rate_bound={:.4}",
                exact as f64 / trials as f64,
                within_bound as f64 / trials as f64
            );
            if let Some(path) = out {
                std::fs::write(path, records.join("\n") + "\n")?;
            }
            Ok(())
        }
        Command::Flip { file, exhaustive } => {
            let frame = Frame::read_from(&file)?;
            let before = coherence::coherence_report(&frame)?;
            let result = if exhaustive {
                flip::exhaustive_flip(&frame)?
            } else {
                flip::linear_time_flip(&frame)?
            };
            let after = coherence::coherence_report(&result.frame)?;
            println!("pattern={}", result.pattern.to_string_signs()?);
            println!("mu={:.12e}", after.mu);
            println!("nu_before={:.12e}", before.nu);
            println!("nu_after={:.12e}", after.nu);
            println!("nu_target={:.12e}", after.mu / (frame.rows() as f64).sqrt());
            Ok(())
        }
        Command::Phase { frame, graph, d, trials, seed } => {
            let frame = Frame::read_from(&frame)?;
            let seed = seed_or_default(seed);
            let base = Rng::new(seed);
            let n = frame.cols();
            let graph = match graph {
                GraphKind::Complete => MeasurementGraph::complete(n)?,
                GraphKind::Cycle => MeasurementGraph::cycle(n)?,
                GraphKind::Star => MeasurementGraph::star(n)?,
                GraphKind::Random => {
                    let mut rng = base.substream(u64::MAX);
                    phase::random_regular_graph(n, d, &mut rng)?
                }
            };
            match graph.expansion {
                Some(expansion) => println!(
                    "graph: {} vertices, {} edges, expansion {expansion:.6}",
                    graph.vertices,
                    graph.edges.len()
                ),
                None => println!("graph: {} vertices, {} edges", graph.vertices, graph.edges.len()),
            }
            let design = phase::build_design(&frame, graph, false)?;
            println!("measurements: {}", design.measurement_count());
            let m = frame.rows();
            let mut worst: f64 = 0.0;
            let mut failures = 0usize;
            for trial in 0..trials {
                let mut rng = base.substream(trial as u64);
                let x: Vec<C64> = (0..m).map(|_| rng.complex_gaussian(1.0)).collect();
                let mags = phase::phaseless_measure(&design, &x)?;
                match phase::recover(&design, &mags) {
                    Ok(rec) => worst = worst.max(phase::phase_aligned_error(&x, &rec.estimate)),
                    Err(e) => {
                        failures += 1;
                        println!("trial {trial}: {e}");
                    }
                }
            }
            println!("trials={trials} failures={failures} worst_phase_aligned_error={worst:.3e}");
            Ok(())
        }
        Command::Fingerprint { frame, coalition, gamma_sigma, tau, trials, seed } => {
            let frame = Frame::read_from(&frame)?;
            let seed = seed_or_default(seed);
            let k = coalition.len().max(1);
            let weights = vec![1.0 / k as f64; k];
            let scenario = CollusionScenario::new(&frame, gamma_sigma, coalition, weights, 1.0, tau)?;
            let bounds = fingerprint::theoretical_bounds(&scenario)?;
            let stats = fingerprint::simulate_detection(&scenario, trials, &Rng::new(seed))?;
            println!("{:<22} {:>14} {:>14}", "", "empirical", "bound");
            println!(
                "{:<22} {:>14.6e} {:>14.6e}",
                "type I (false accuse)", stats.empirical_pi, bounds.pi_bound
            );
            println!(
                "{:<22} {:>14.6e} {:>14.6e}",
                "type II (miss)", stats.empirical_pii, bounds.pii_bound
            );
            Ok(())
        }
        Command::Bounds { m, n } => {
            println!("welch={:.12e}", coherence::welch_lower_bound(m, n));
            if m >= 2 {
                let b = coherence::asymptotic_lower_bounds(m, n);
                println!("complex={:.12e}", b.complex_bound);
                println!("real={:.12e}", b.real_bound);
                if let Some(d3) = b.dim3_bound {
                    println!("dim3={:.12e}", d3);
                }
            }
            Ok(())
        }
    }
}

fn method_label(method: &rip::SparkMethod, via_complement: bool) -> String {
    let base = match method {
        rip::SparkMethod::Brute => "brute force",
        rip::SparkMethod::DftUniform => "uniform-distribution criterion",
        rip::SparkMethod::VandermondeRule => "vandermonde rule",
    };
    if via_complement {
        format!("{base} (via complement)")
    } else {
        base.to_string()
    }
}

fn join_usize(xs: &[usize]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn build(args: BuildArgs) -> frameforge::Result<()> {
    let (frame, out) = match args.family {
        BuildFamily::Steiner { family, v, q, n, hadamard, out } => {
            let design = match family {
                DesignFamilyArg::TwoBlocks => {
                    steiner_system(SteinerFamily::TwoBlocks { v: v.ok_or_else(|| missing("--v"))? })?
                }
                DesignFamilyArg::Triples => {
                    steiner_system(SteinerFamily::Triples { v: v.ok_or_else(|| missing("--v"))? })?
                }
                DesignFamilyArg::Affine => steiner_system(SteinerFamily::Affine {
                    q: q.ok_or_else(|| missing("--q"))?,
                    n: n.ok_or_else(|| missing("--n"))?,
                })?,
                DesignFamilyArg::Projective => steiner_system(SteinerFamily::Projective {
                    q: q.ok_or_else(|| missing("--q"))?,
                    n: n.ok_or_else(|| missing("--n"))?,
                })?,
            };
            let kind = match hadamard {
                HadamardArg::Real => HadamardKind::RealSylvester,
                HadamardArg::Dft => HadamardKind::ComplexDft,
            };
            (frames::build_steiner_etf(&design, kind, &RowChoice::SkipAllOnes)?, out)
        }
        BuildFamily::Paley { p, out } => (frames::build_paley_etf(p)?, out),
        BuildFamily::Gabor { m, kind, seed, out } => {
            let seed_kind = match kind {
                GaborKindArg::Alltop => GaborSeed::Alltop,
                GaborKindArg::Steinhaus => GaborSeed::Steinhaus(seed_or_default(seed)),
            };
            (frames::build_gabor(m, &seed_kind)?, out)
        }
        BuildFamily::Chirp { m, out } => (frames::build_chirp(m)?, out),
        BuildFamily::Code { m, t, out } => (frames::build_code_frame(m, t)?, out),
        BuildFamily::Spherical { dft_size, rows, out } => {
            (frames::build_spherical_2design(dft_size, &rows)?, out)
        }
        BuildFamily::Harmonic { n, rows, normalize, out } => {
            (frames::build_harmonic(n, &rows, normalize)?, out)
        }
        BuildFamily::Vandermonde { m, n, out } => {
            (frames::build_vandermonde_unit_circle(m, n)?, out)
        }
        BuildFamily::Random { kind, m, n, seed, out } => {
            let seed = seed_or_default(seed);
            let kind = match kind {
                RandomKindArg::Gaussian => {
                    RandomKind::NormalizedGaussian { m, n: n.ok_or_else(|| missing("--n"))? }
                }
                RandomKindArg::Harmonic => {
                    RandomKind::RandomHarmonic { m, n: n.ok_or_else(|| missing("--n"))? }
                }
                RandomKindArg::SteinhausGabor => RandomKind::SteinhausGabor { m },
            };
            (frames::build_random(&kind, &mut Rng::new(seed))?, out)
        }
    };
    frame.write_to(&out)?;
    println!(
        "wrote {}x{} {} frame to {}",
        frame.rows(),
        frame.cols(),
        frame.tags.family,
        out.display()
    );
    Ok(())
}

fn missing(flag: &str) -> frameforge::Error {
    frameforge::Error::Parse(format!("missing required option {flag}"))
}
