use clap::{Args, Parser, Subcommand};
use coverax::{
    ablate_dilation, ablate_dilation_csv, ablate_v, ablate_v_csv, bench_csv, parse_list,
    run_pipeline, scaling_bench, BenchAxis, CliError, RunConfig,
};
use coverax_core::geometry::io::InputFormat;
use coverax_core::geometry::DilationMode;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "coverax",
    version,
    about = "Coverage-based medial skeletons from meshes and point clouds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a skeleton and its error metrics.
    Run {
        #[command(flatten)]
        common: Common,
        /// Target number of skeletal points.
        #[arg(long = "target-v")]
        target_v: usize,
        /// Output directory for skeleton.skel, selected_points.xyz, trace.csv, metrics.json.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also evaluate the greedy set-cover baseline.
        #[arg(long)]
        baseline: bool,
    },
    /// Sweep the target number of skeletal points.
    AblateV {
        #[command(flatten)]
        common: Common,
        /// Comma-separated |V| values.
        #[arg(long = "v-list")]
        v_list: String,
    },
    /// Sweep the dilation amount.
    AblateDilation {
        #[command(flatten)]
        common: Common,
        #[arg(long = "target-v")]
        target_v: usize,
        /// Comma-separated delta-r values.
        #[arg(long = "delta-list")]
        delta_list: String,
    },
    /// Time the selection stage along one size axis.
    Bench {
        #[command(flatten)]
        common: Common,
        #[arg(long = "target-v", default_value_t = 50)]
        target_v: usize,
        /// P (candidates), S (samples) or V (target points).
        #[arg(long)]
        axis: BenchAxis,
        /// Comma-separated sizes along the axis.
        #[arg(long)]
        sizes: String,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    input: PathBuf,
    /// obj, off, ply or xyz; inferred from the extension when absent.
    #[arg(long)]
    format: Option<InputFormat>,
    #[arg(long, default_value_t = 1500)]
    samples: usize,
    #[arg(long, default_value_t = 10_000)]
    candidates: usize,
    #[arg(long = "delta-r", default_value_t = 0.02)]
    delta_r: f64,
    #[arg(long = "dilation-mode", default_value_t = DilationMode::Offset)]
    dilation_mode: DilationMode,
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Read candidate centers from an xyz file instead of generating them.
    #[arg(long = "candidates-file")]
    candidates_file: Option<PathBuf>,
    /// Pick the lowest score each iteration instead of the highest.
    #[arg(long, hide = true)]
    argmin: bool,
    /// Surface samples used for evaluation.
    #[arg(long = "eval-samples", default_value_t = coverax_core::metrics::DEFAULT_SURFACE_SAMPLES)]
    eval_samples: usize,
    /// Envelope samples used for evaluation.
    #[arg(long = "envelope-samples", default_value_t = coverax_core::metrics::DEFAULT_ENVELOPE_SAMPLES)]
    envelope_samples: usize,
}

impl Common {
    fn config(self, target_v: usize) -> RunConfig {
        RunConfig {
            format: self.format,
            samples: self.samples,
            candidates: self.candidates,
            delta_r: self.delta_r,
            dilation_mode: self.dilation_mode,
            omega: self.omega,
            seed: self.seed,
            candidates_file: self.candidates_file,
            argmin: self.argmin,
            eval_surface_samples: self.eval_samples,
            eval_envelope_samples: self.envelope_samples,
            ..RunConfig::new(self.input, target_v)
        }
    }
}

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("COVERAX_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| {
        CliError::Usage(format!(
            "COVERAX_THREADS must be a non-negative integer, got `{v}`"
        ))
    })?;
    // A pool can only be installed once; ignore a second attempt.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

fn execute(cli: Cli) -> Result<(), CliError> {
    init_threads()?;
    match cli.command {
        Command::Run {
            common,
            target_v,
            out,
            baseline,
        } => {
            let config = RunConfig {
                out,
                baseline,
                ..common.config(target_v)
            };
            let result = run_pipeline(&config)?;
            for w in &result.warnings {
                eprintln!("warning: {w}");
            }
            println!("{}", result.summary_line());
            if let Some(b) = &result.metrics.baseline {
                println!(
                    "baseline n_selected={} coverage_rate={:.4} eps_two_sided={:.3}%",
                    b.n_selected,
                    b.coverage_rate,
                    b.eps_two_sided * 100.0
                );
            }
        }
        Command::AblateV { common, v_list } => {
            let vs: Vec<usize> = parse_list(&v_list)?;
            let target = vs.first().copied().unwrap_or(1);
            print!("{}", ablate_v_csv(&ablate_v(&common.config(target), &vs)?));
        }
        Command::AblateDilation {
            common,
            target_v,
            delta_list,
        } => {
            let ds: Vec<f64> = parse_list(&delta_list)?;
            print!(
                "{}",
                ablate_dilation_csv(&ablate_dilation(&common.config(target_v), &ds)?)
            );
        }
        Command::Bench {
            common,
            target_v,
            axis,
            sizes,
        } => {
            let sizes: Vec<usize> = parse_list(&sizes)?;
            print!(
                "{}",
                bench_csv(&scaling_bench(&common.config(target_v), axis, &sizes)?)
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    // Exit code 2 is reserved for infeasible inputs, so argument errors map to 1.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
