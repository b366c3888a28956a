//! End-to-end pipeline: load a shape, sample its surface, draw interior
//! candidates, select skeletal points, connect them and measure the
//! reconstruction. Also hosts the ablation and scaling drivers used by the
//! `coverax` binary.

use coverax_core::connectivity::{
    build_weighted_points, extract_skeleton, regular_triangulation, write_skel, ConnectivityError,
    Perturbation, SelectedBall, Skeleton,
};
use coverax_core::geometry::io::{load_shape, load_xyz_points, write_xyz, InputFormat};
use coverax_core::geometry::{
    generate_candidates, normalize_shape, sample_cloud, sample_surface, CandidateOptions,
    DilationMode, GeometryError, NormalizeTransform, Shape,
};
use coverax_core::metrics::{
    coverage_rate, hausdorff_errors, ErrorReport, MetricsError, DEFAULT_ENVELOPE_SAMPLES,
    DEFAULT_SURFACE_SAMPLES,
};
use coverax_core::selection::{
    build_coverage_matrix, compute_radii, dilate_radii, greedy_scp_baseline,
    select_skeletal_points, trace_to_csv, CoverageMatrix, IterationRecord, SelectionConfig,
    SelectionError,
};
use coverax_core::Vec3;
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::time::Instant;
use thiserror::Error;

/// Random streams derived from the user seed, one per stage.
const STREAM_SAMPLES: u64 = 1;
const STREAM_CANDIDATES: u64 = 2;
const STREAM_EVAL_SURFACE: u64 = 3;
const STREAM_EVAL_ENVELOPE: u64 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Selection(#[from] SelectionError),
    #[error(transparent)]
    Connectivity(#[from] ConnectivityError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("usage: {0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// 2 for inputs the pipeline cannot handle (starved sampling, samples no
    /// candidate covers, degenerate geometry), 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Geometry(GeometryError::RejectionStarvation { .. })
            | CliError::Metrics(MetricsError::RejectionStarvation { .. })
            | CliError::Selection(SelectionError::CoverageInfeasible { .. })
            | CliError::Connectivity(ConnectivityError::DegenerateInput(_)) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub input: PathBuf,
    /// Taken from the file extension when absent.
    #[serde(serialize_with = "ser_format")]
    pub format: Option<InputFormat>,
    pub samples: usize,
    pub candidates: usize,
    pub target_v: usize,
    pub delta_r: f64,
    #[serde(serialize_with = "ser_display")]
    pub dilation_mode: DilationMode,
    pub omega: f64,
    pub seed: u64,
    pub baseline: bool,
    pub out: Option<PathBuf>,
    pub candidates_file: Option<PathBuf>,
    pub argmin: bool,
    /// Dense surface samples for the surface-to-reconstruction error.
    pub eval_surface_samples: usize,
    /// Envelope samples for the reconstruction-to-surface error.
    pub eval_envelope_samples: usize,
}

fn ser_format<S: serde::Serializer>(
    f: &Option<InputFormat>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match f {
        Some(f) => s.serialize_str(&f.to_string()),
        None => s.serialize_none(),
    }
}

fn ser_display<S: serde::Serializer, T: std::fmt::Display>(
    v: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl RunConfig {
    pub fn new(input: impl Into<PathBuf>, target_v: usize) -> RunConfig {
        RunConfig {
            input: input.into(),
            format: None,
            samples: 1500,
            candidates: 10_000,
            target_v,
            delta_r: 0.02,
            dilation_mode: DilationMode::Offset,
            omega: 1.0,
            seed: 0,
            baseline: false,
            out: None,
            candidates_file: None,
            argmin: false,
            eval_surface_samples: DEFAULT_SURFACE_SAMPLES,
            eval_envelope_samples: DEFAULT_ENVELOPE_SAMPLES,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("samples", self.samples),
            ("candidates", self.candidates),
            ("target-v", self.target_v),
            ("eval surface samples", self.eval_surface_samples),
            ("eval envelope samples", self.eval_envelope_samples),
        ] {
            if v == 0 {
                return Err(CliError::Usage(format!("{name} must be at least 1")));
            }
        }
        if !(self.delta_r >= 0.0 && self.delta_r.is_finite()) {
            return Err(CliError::Usage(format!(
                "delta-r must be >= 0, got {}",
                self.delta_r
            )));
        }
        if !(self.omega >= 0.0 && self.omega.is_finite()) {
            return Err(CliError::Usage(format!(
                "omega must be >= 0, got {}",
                self.omega
            )));
        }
        Ok(())
    }

    fn selection_config(&self) -> SelectionConfig {
        SelectionConfig {
            target_v: self.target_v,
            omega: self.omega,
            delta_r: self.delta_r,
            dilation_mode: self.dilation_mode,
            argmin: self.argmin,
        }
    }
}

/// Everything that does not depend on `|V|`, `delta_r` or `omega`, in
/// normalized coordinates.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub shape: Shape,
    pub transform: NormalizeTransform,
    pub samples: Vec<Vec3>,
    pub candidates: Vec<Vec3>,
    /// Dense, independent surface samples for evaluation.
    pub eval_samples: Vec<Vec3>,
    pub warnings: Vec<String>,
    pub load_ms: f64,
    pub sampling_ms: f64,
    pub candidates_ms: f64,
}

fn ms(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1e3
}

pub fn resolve_format(config: &RunConfig) -> Result<InputFormat> {
    match config.format {
        Some(f) => Ok(f),
        None => InputFormat::from_extension(&config.input).ok_or_else(|| {
            CliError::Usage(format!(
                "cannot infer the format of {}; pass --format",
                config.input.display()
            ))
        }),
    }
}

/// Loads and normalizes the shape, then draws the surface samples, the
/// candidates and the evaluation samples.
pub fn prepare(config: &RunConfig) -> Result<Prepared> {
    config.validate()?;
    let format = resolve_format(config)?;
    let t = Instant::now();
    let raw = load_shape(&config.input, format)?;
    let (shape, transform) = normalize_shape(&raw)?;
    let load_ms = ms(t);

    let mut warnings = Vec::new();
    let t = Instant::now();
    let samples = draw_samples(
        &shape,
        config.samples,
        derive(config.seed, STREAM_SAMPLES),
        &mut warnings,
    )?;
    let eval_samples = match &shape {
        Shape::Mesh(mesh) => {
            sample_surface(
                mesh,
                config.eval_surface_samples,
                derive(config.seed, STREAM_EVAL_SURFACE),
            )?
            .points
        }
        Shape::Cloud(cloud) => cloud.points().to_vec(),
    };
    let sampling_ms = ms(t);

    let t = Instant::now();
    let candidates = match &config.candidates_file {
        Some(path) => {
            let pts = load_xyz_points(path)?;
            if pts.is_empty() {
                return Err(CliError::Geometry(GeometryError::EmptySet));
            }
            pts.iter().map(|p| transform.apply(p)).collect()
        }
        None => {
            generate_candidates(
                &shape,
                config.candidates,
                derive(config.seed, STREAM_CANDIDATES),
                &CandidateOptions::default(),
            )?
            .points
        }
    };
    let candidates_ms = ms(t);
    Ok(Prepared {
        shape,
        transform,
        samples,
        candidates,
        eval_samples,
        warnings,
        load_ms,
        sampling_ms,
        candidates_ms,
    })
}

/// Independent per-stage seed derived from the user seed.
fn derive(seed: u64, stream: u64) -> u64 {
    seed ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

fn draw_samples(
    shape: &Shape,
    m: usize,
    seed: u64,
    warnings: &mut Vec<String>,
) -> Result<Vec<Vec3>> {
    Ok(match shape {
        Shape::Mesh(mesh) => sample_surface(mesh, m, seed)?.points,
        Shape::Cloud(cloud) => {
            let take = m.min(cloud.len());
            if take < m {
                warnings.push(format!(
                    "cloud has {} points; using all of them instead of {m}",
                    cloud.len()
                ));
            }
            sample_cloud(cloud, take, seed)?.points
        }
    })
}

/// Output of the selection stage (radii, matrix, greedy loop).
#[derive(Debug, Clone)]
pub struct SelectionOutcome {
    pub radii: Vec<f64>,
    /// Radii dilated with the configured mode; used as connection radii.
    pub dilated: Vec<f64>,
    /// Offset-dilated radii the coverage matrix is built from.
    pub coverage_radii: Vec<f64>,
    pub matrix: CoverageMatrix,
    pub selected: Vec<usize>,
    pub trace: Vec<IterationRecord>,
    pub coverage_rate: f64,
    pub ms: f64,
}

/// Radii, coverage matrix and the greedy loop; this is the timed stage of
/// the scaling benchmark.
pub fn run_selection(
    samples: &[Vec3],
    candidates: &[Vec3],
    config: &SelectionConfig,
) -> Result<SelectionOutcome> {
    let t = Instant::now();
    config.validate()?;
    let radii = compute_radii(candidates, samples)?;
    let coverage_radii = dilate_radii(&radii, config.delta_r, DilationMode::Offset)?;
    let matrix = build_coverage_matrix(candidates, &coverage_radii, samples)?;
    let (state, trace) = select_skeletal_points(candidates, &matrix, config)?;
    let elapsed = ms(t);
    let dilated = dilate_radii(&radii, config.delta_r, config.dilation_mode)?;
    Ok(SelectionOutcome {
        radii,
        dilated,
        coverage_radii,
        matrix,
        selected: state.selected().to_vec(),
        trace,
        coverage_rate: state.coverage_rate(),
        ms: elapsed,
    })
}

/// Skeleton plus its error metrics for one set of selected candidates.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    /// In normalized coordinates.
    pub skeleton: Skeleton,
    pub report: ErrorReport,
    pub perturbation: Option<Perturbation>,
    pub connectivity_ms: f64,
    pub metrics_ms: f64,
}

pub fn reconstruct(
    prepared: &Prepared,
    outcome: &SelectionOutcome,
    selected: &[usize],
    delta_r: f64,
    env_samples: usize,
    seed: u64,
) -> Result<Reconstruction> {
    let t = Instant::now();
    let balls: Vec<SelectedBall> = selected
        .iter()
        .map(|&i| SelectedBall {
            center: prepared.candidates[i],
            radius: outcome.radii[i],
            dilated_radius: outcome.dilated[i],
        })
        .collect();
    let points = build_weighted_points(&balls, &prepared.samples, delta_r);
    let rt = regular_triangulation(&points)?;
    let skeleton = extract_skeleton(&rt, &points, &balls);
    let connectivity_ms = ms(t);

    let t = Instant::now();
    let diag = prepared.shape.bbox().diagonal();
    let centers: Vec<Vec3> = selected.iter().map(|&i| prepared.candidates[i]).collect();
    let radii: Vec<f64> = selected
        .iter()
        .map(|&i| outcome.coverage_radii[i])
        .collect();
    let rate = coverage_rate(&prepared.samples, &centers, &radii);
    let report = hausdorff_errors(
        &prepared.eval_samples,
        &skeleton,
        diag,
        env_samples,
        derive(seed, STREAM_EVAL_ENVELOPE),
    )?
    .with_coverage(rate);
    Ok(Reconstruction {
        skeleton,
        report,
        perturbation: rt.perturbation,
        connectivity_ms,
        metrics_ms: ms(t),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RuntimeMs {
    pub load: f64,
    pub sampling: f64,
    pub candidates: f64,
    pub selection: f64,
    pub connectivity: f64,
    pub metrics: f64,
    pub total: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BaselineMetrics {
    pub eps_s2r: f64,
    pub eps_r2s: f64,
    pub eps_two_sided: f64,
    pub coverage_rate: f64,
    pub n_selected: usize,
    pub uncoverable_samples: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct PerturbationJson {
    pub seed: u64,
    pub magnitude: f64,
    pub attempts: u32,
}

/// The `metrics.json` document; field order is the serialized key order.
#[derive(Debug, Clone, Serialize)]
pub struct MetricsJson {
    pub eps_s2r: f64,
    pub eps_r2s: f64,
    pub eps_two_sided: f64,
    pub coverage_rate: f64,
    pub bbox_diagonal: f64,
    pub n_selected: usize,
    pub runtime_ms: RuntimeMs,
    pub config: RunConfig,
    pub sample_counts: [usize; 2],
    pub n_edges: usize,
    pub n_triangles: usize,
    pub rt_perturbation: Option<PerturbationJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub baseline: Option<BaselineMetrics>,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub selection: SelectionOutcome,
    pub reconstruction: Reconstruction,
    /// Skeleton in input coordinates.
    pub skeleton: Skeleton,
    pub metrics: MetricsJson,
    pub warnings: Vec<String>,
}

impl RunOutput {
    /// `n_selected`, coverage rate, two-sided error in percent, total time.
    pub fn summary_line(&self) -> String {
        let m = &self.metrics;
        format!(
            "n_selected={} coverage_rate={:.4} eps_two_sided={:.3}% total_ms={:.1}",
            m.n_selected,
            m.coverage_rate,
            m.eps_two_sided * 100.0,
            m.runtime_ms.total
        )
    }
}

/// Full pipeline; writes artifacts when `config.out` is set.
pub fn run_pipeline(config: &RunConfig) -> Result<RunOutput> {
    let start = Instant::now();
    let prepared = prepare(config)?;
    let out = run_prepared(config, &prepared, start)?;
    if let Some(dir) = &config.out {
        write_artifacts(dir, &out)?;
    }
    Ok(out)
}

/// Selection, connectivity and metrics on already prepared inputs.
pub fn run_prepared(config: &RunConfig, prepared: &Prepared, start: Instant) -> Result<RunOutput> {
    config.validate()?;
    let selection = run_selection(
        &prepared.samples,
        &prepared.candidates,
        &config.selection_config(),
    )?;
    let recon = reconstruct(
        prepared,
        &selection,
        &selection.selected,
        config.delta_r,
        config.eval_envelope_samples,
        config.seed,
    )?;

    let baseline = if config.baseline {
        let cover = greedy_scp_baseline(&selection.matrix, selection.matrix.n());
        let b = reconstruct(
            prepared,
            &selection,
            &cover.selected,
            config.delta_r,
            config.eval_envelope_samples,
            config.seed,
        )?;
        Some(BaselineMetrics {
            eps_s2r: b.report.eps_s2r,
            eps_r2s: b.report.eps_r2s,
            eps_two_sided: b.report.eps_two_sided,
            coverage_rate: b.report.coverage_rate.unwrap_or(0.0),
            n_selected: cover.selected.len(),
            uncoverable_samples: cover.infeasible.len(),
        })
    } else {
        None
    };

    let tf = prepared.transform;
    let skeleton = recon.skeleton.map(|p| tf.inverse(p), 1.0 / tf.scale);
    let report = recon.report;
    let metrics = MetricsJson {
        eps_s2r: report.eps_s2r,
        eps_r2s: report.eps_r2s,
        eps_two_sided: report.eps_two_sided,
        coverage_rate: report.coverage_rate.unwrap_or(selection.coverage_rate),
        bbox_diagonal: tf.original_diagonal,
        n_selected: selection.selected.len(),
        runtime_ms: RuntimeMs {
            load: prepared.load_ms,
            sampling: prepared.sampling_ms,
            candidates: prepared.candidates_ms,
            selection: selection.ms,
            connectivity: recon.connectivity_ms,
            metrics: recon.metrics_ms,
            total: ms(start),
        },
        config: config.clone(),
        sample_counts: [report.sample_counts.0, report.sample_counts.1],
        n_edges: skeleton.edges().len(),
        n_triangles: skeleton.triangles().len(),
        rt_perturbation: recon.perturbation.map(|p| PerturbationJson {
            seed: p.seed,
            magnitude: p.magnitude / tf.scale,
            attempts: p.attempts,
        }),
        baseline,
    };
    Ok(RunOutput {
        selection,
        reconstruction: recon,
        skeleton,
        metrics,
        warnings: prepared.warnings.clone(),
    })
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn metrics_to_json(m: &MetricsJson) -> String {
    let mut s = serde_json::to_string_pretty(m).expect("metrics serialize");
    s.push('\n');
    s
}

/// Writes `skeleton.skel`, `selected_points.xyz`, `trace.csv` and
/// `metrics.json` into `dir`.
pub fn write_artifacts(dir: &Path, out: &RunOutput) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    write_skel(&dir.join("skeleton.skel"), &out.skeleton)?;
    let centers: Vec<Vec3> = out.skeleton.vertices().iter().map(|v| v.center).collect();
    let radii: Vec<f64> = out.skeleton.vertices().iter().map(|v| v.radius).collect();
    write_xyz(dir.join("selected_points.xyz"), &centers, &[&radii])?;
    let trace = dir.join("trace.csv");
    std::fs::write(&trace, trace_to_csv(&out.selection.trace)).map_err(io_err(&trace))?;
    let metrics = dir.join("metrics.json");
    std::fs::write(&metrics, metrics_to_json(&out.metrics)).map_err(io_err(&metrics))?;
    Ok(())
}

/// One row of the `|V|` ablation.
#[derive(Debug, Clone, PartialEq)]
pub struct AblateVRow {
    pub target_v: usize,
    pub n_selected: usize,
    pub eps_two_sided: f64,
    pub coverage_rate: f64,
    pub runtime_ms: f64,
}

/// One pipeline run per `|V|` on shared samples and candidates, sorted by
/// `|V|`.
pub fn ablate_v(config: &RunConfig, v_list: &[usize]) -> Result<Vec<AblateVRow>> {
    if v_list.len() < 2 {
        return Err(CliError::Usage(
            "ablate-v needs at least two |V| values".into(),
        ));
    }
    let prepared = prepare(config)?;
    let mut vs = v_list.to_vec();
    vs.sort_unstable();
    vs.iter()
        .map(|&v| {
            let cfg = RunConfig {
                target_v: v,
                ..config.clone()
            };
            let out = run_prepared(&cfg, &prepared, Instant::now())?;
            Ok(AblateVRow {
                target_v: v,
                n_selected: out.metrics.n_selected,
                eps_two_sided: out.metrics.eps_two_sided,
                coverage_rate: out.metrics.coverage_rate,
                runtime_ms: out.metrics.runtime_ms.selection,
            })
        })
        .collect()
}

pub fn ablate_v_csv(rows: &[AblateVRow]) -> String {
    let mut s = String::from("target_v,n_selected,eps_two_sided,coverage_rate,runtime_ms\n");
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            r.target_v, r.n_selected, r.eps_two_sided, r.coverage_rate, r.runtime_ms
        ));
    }
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct AblateDilationRow {
    pub delta_r: f64,
    pub n_selected: usize,
    /// Selection stopped before reaching `|V|` because everything was covered.
    pub early_terminated: bool,
    pub eps_two_sided: f64,
}

/// One run per `delta_r` on shared samples and candidates, in input order.
pub fn ablate_dilation(config: &RunConfig, delta_list: &[f64]) -> Result<Vec<AblateDilationRow>> {
    if delta_list.len() < 2 {
        return Err(CliError::Usage(
            "ablate-dilation needs at least two delta-r values".into(),
        ));
    }
    let prepared = prepare(config)?;
    delta_list
        .iter()
        .map(|&d| {
            let cfg = RunConfig {
                delta_r: d,
                ..config.clone()
            };
            let out = run_prepared(&cfg, &prepared, Instant::now())?;
            Ok(AblateDilationRow {
                delta_r: d,
                n_selected: out.metrics.n_selected,
                early_terminated: out.metrics.n_selected < config.target_v,
                eps_two_sided: out.metrics.eps_two_sided,
            })
        })
        .collect()
}

pub fn ablate_dilation_csv(rows: &[AblateDilationRow]) -> String {
    let mut s = String::from("delta_r,n_selected,early_terminated,eps_two_sided\n");
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{}\n",
            r.delta_r, r.n_selected, r.early_terminated, r.eps_two_sided
        ));
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchAxis {
    /// Candidate count `|P|`.
    P,
    /// Surface sample count `|S|`.
    S,
    /// Target count `|V|`.
    V,
}

impl std::str::FromStr for BenchAxis {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "P" | "p" => Ok(BenchAxis::P),
            "S" | "s" => Ok(BenchAxis::S),
            "V" | "v" => Ok(BenchAxis::V),
            other => Err(format!("unknown axis `{other}` (expected P|S|V)")),
        }
    }
}

pub const BENCH_REPEATS: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub size: usize,
    /// Median selection wall time over [`BENCH_REPEATS`] runs.
    pub wall_ms: f64,
    pub n_selected: usize,
}

/// Times the selection stage (radii, matrix, greedy loop) while one of
/// `|P|`, `|S|`, `|V|` varies over `sizes`; the others come from `config`.
/// Candidate sets and sample sets for different sizes are prefixes of one
/// another.
pub fn scaling_bench(
    config: &RunConfig,
    axis: BenchAxis,
    sizes: &[usize],
) -> Result<Vec<BenchRow>> {
    if sizes.len() < 3 {
        return Err(CliError::Usage("bench needs at least three sizes".into()));
    }
    if sizes.contains(&0) {
        return Err(CliError::Usage("bench sizes must be at least 1".into()));
    }
    config.validate()?;
    let format = resolve_format(config)?;
    let raw = load_shape(&config.input, format)?;
    let (shape, _) = normalize_shape(&raw)?;
    let max = *sizes.iter().max().expect("non-empty");
    let n_cands = if axis == BenchAxis::P {
        max
    } else {
        config.candidates
    };
    let candidates = generate_candidates(
        &shape,
        n_cands,
        derive(config.seed, STREAM_CANDIDATES),
        &CandidateOptions::default(),
    )?
    .points;
    let mut warnings = Vec::new();
    let m_max = if axis == BenchAxis::S {
        max
    } else {
        config.samples
    };
    let samples = draw_samples(
        &shape,
        m_max,
        derive(config.seed, STREAM_SAMPLES),
        &mut warnings,
    )?;

    sizes
        .iter()
        .map(|&size| {
            let (s, p, v) = match axis {
                BenchAxis::P => (&samples[..], &candidates[..size], config.target_v),
                BenchAxis::S => (
                    &samples[..size.min(samples.len())],
                    &candidates[..],
                    config.target_v,
                ),
                BenchAxis::V => (&samples[..], &candidates[..], size),
            };
            let sel = SelectionConfig {
                target_v: v,
                ..config.selection_config()
            };
            let mut times = Vec::with_capacity(BENCH_REPEATS);
            let mut n_selected = 0;
            for _ in 0..BENCH_REPEATS {
                let out = run_selection(s, p, &sel)?;
                n_selected = out.selected.len();
                times.push(out.ms);
            }
            times.sort_by(f64::total_cmp);
            Ok(BenchRow {
                size,
                wall_ms: times[BENCH_REPEATS / 2],
                n_selected,
            })
        })
        .collect()
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut s = String::from("size,wall_ms,n_selected\n");
    for r in rows {
        s.push_str(&format!("{},{},{}\n", r.size, r.wall_ms, r.n_selected));
    }
    s
}

/// Parses a comma-separated list such as `30,50,70`.
pub fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("cannot parse `{t}` in list `{s}`")))
        })
        .collect()
}
