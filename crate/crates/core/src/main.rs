use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use graphlb::apps::AppKind;
use graphlb::rmat::RmatProbabilities;
use graphlb::runner::{
    cmd_compare, cmd_run, cmd_sweep_threshold, format_table, load_graph, CliError, FileFormat, InputSpec,
    RunSpec,
};
use graphlb::scheduler::{Distribution, SchedulerKind, Threshold};
use graphlb::simt::KernelConfig;

#[derive(Parser)]
#[command(name = "graphlb", version, about = "Simulate GPU load-balancing schedulers on graph workloads")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one application under one scheduler and write reports.
    Run(RunArgs),
    /// Run several schedulers on the same input and check that labels agree.
    Compare {
        #[command(flatten)]
        run: RunArgs,
        /// Comma-separated scheduler names.
        #[arg(long, value_delimiter = ',', default_value = "vertex,edge,twc,lb,alb")]
        schedulers: Vec<SchedulerKind>,
    },
    /// Run ALB once per threshold.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// Comma-separated thresholds (numbers, `auto` or `inf`).
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "256,512,1024,2048,4096,8192,16384,32768,65536,131072,262144,inf"
        )]
        thresholds: Vec<Threshold>,
    },
    /// Convert an input graph to the binary CSR format.
    Convert {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, short)]
        output: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    El,
    Wel,
    Bin,
    Rmat,
}

#[derive(Clone, Copy, ValueEnum)]
enum Skew {
    Skewed,
    Uniform,
}

#[derive(Clone, Copy, ValueEnum)]
enum AppName {
    Bfs,
    Sssp,
    Cc,
    Pr,
    Kcore,
}

#[derive(Args)]
struct InputArgs {
    /// Graph file, or `rmat` to generate one.
    #[arg(long, default_value = "rmat")]
    input: String,
    /// Input format; inferred from the file extension when omitted.
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, default_value_t = 16)]
    scale: u32,
    #[arg(long, default_value_t = 16)]
    edge_factor: usize,
    #[arg(long, value_enum, default_value = "skewed")]
    skew: Skew,
    /// Give generated edges integer weights in 1..=N.
    #[arg(long)]
    max_weight: Option<u32>,
    /// Add reverse edges and drop duplicates and self-loops.
    #[arg(long)]
    symmetrize: bool,
    /// Generator seed.
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value = "bfs")]
    app: AppName,
    #[arg(long, default_value_t = 0)]
    source: u32,
    #[arg(long, default_value_t = 2)]
    k: u64,
    #[arg(long, default_value_t = 0.85)]
    damping: f64,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// vertex, edge, twc, lb or alb (optionally suffixed `-cyclic` / `-blocked`).
    #[arg(long, default_value = "alb")]
    scheduler: SchedulerKind,
    #[arg(long)]
    distribution: Option<Distribution>,
    /// Huge-vertex degree threshold: a number, `auto` (total threads) or `inf`.
    #[arg(long, default_value = "auto")]
    threshold: Threshold,
    #[arg(long, default_value_t = 84)]
    cta: usize,
    #[arg(long, default_value_t = 256)]
    tpb: usize,
    #[arg(long, default_value_t = 32)]
    warp: usize,
    #[arg(long, default_value_t = 1)]
    devices: usize,
    #[arg(long)]
    max_rounds: Option<usize>,
    /// Report directory.
    #[arg(long, default_value = "reports")]
    out: PathBuf,
    /// Report file prefix; defaults to `<app>-<scheduler>`.
    #[arg(long)]
    name: Option<String>,
}

impl InputArgs {
    fn spec(&self) -> Result<InputSpec, CliError> {
        let format = match self.format {
            Some(f) => f,
            None if self.input == "rmat" => Format::Rmat,
            None => match FileFormat::from_extension(self.input.as_ref()) {
                Some(FileFormat::El) => Format::El,
                Some(FileFormat::Wel) => Format::Wel,
                Some(FileFormat::Bin) => Format::Bin,
                None => {
                    return Err(CliError::Usage(format!(
                        "cannot infer the format of {:?}; pass --format",
                        self.input
                    )))
                }
            },
        };
        let file = |format| InputSpec::File {
            path: PathBuf::from(&self.input),
            format,
        };
        Ok(match format {
            Format::Rmat => InputSpec::Rmat {
                scale: self.scale,
                edge_factor: self.edge_factor,
                probabilities: match self.skew {
                    Skew::Skewed => RmatProbabilities::SKEWED,
                    Skew::Uniform => RmatProbabilities::UNIFORM,
                },
                max_weight: self.max_weight,
            },
            Format::El => file(FileFormat::El),
            Format::Wel => file(FileFormat::Wel),
            Format::Bin => file(FileFormat::Bin),
        })
    }
}

impl RunArgs {
    fn spec(&self) -> Result<RunSpec, CliError> {
        let app = match self.app {
            AppName::Bfs => AppKind::Bfs { source: self.source },
            AppName::Sssp => AppKind::Sssp { source: self.source },
            AppName::Cc => AppKind::Cc,
            AppName::Pr => AppKind::Pr {
                damping: self.damping,
                tolerance: self.tol,
            },
            AppName::Kcore => AppKind::Kcore { k: self.k },
        };
        let scheduler = match self.scheduler {
            SchedulerKind::Lb { distribution } => SchedulerKind::Lb {
                distribution: self.distribution.unwrap_or(distribution),
            },
            SchedulerKind::Alb { distribution, .. } => {
                SchedulerKind::alb(self.distribution.unwrap_or(distribution), self.threshold)
            }
            other => other,
        };
        let kernel =
            KernelConfig::new(self.cta, self.tpb, self.warp).map_err(|e| CliError::Usage(e.to_string()))?;
        if self.devices == 0 {
            return Err(CliError::Usage("--devices must be at least 1".into()));
        }
        Ok(RunSpec {
            name: self
                .name
                .clone()
                .unwrap_or_else(|| format!("{}-{}", app.name(), scheduler.label())),
            input: self.input.spec()?,
            symmetrize: self.input.symmetrize,
            app,
            scheduler,
            kernel,
            devices: self.devices,
            seed: self.input.seed,
            max_rounds: self.max_rounds,
            out: Some(self.out.clone()),
        })
    }
}

fn f3(x: f64) -> String {
    format!("{x:.3}")
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => {
            let spec = args.spec()?;
            let outcome = cmd_run(&spec)?;
            println!("{}", outcome.summary_line(&spec));
            for f in &outcome.files {
                log::info!("wrote {}", f.display());
            }
        }
        Command::Compare { run, schedulers } => {
            let spec = run.spec()?;
            let outcome = cmd_compare(&spec, &schedulers)?;
            let rows: Vec<Vec<String>> = outcome
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.scheduler.clone(),
                        r.rounds.to_string(),
                        f3(r.cv),
                        f3(r.max_over_mean),
                        f3(r.worst_round_max_over_mean),
                        r.search_memory_accesses.to_string(),
                        r.lb_launches.to_string(),
                        r.total_launches.to_string(),
                    ]
                })
                .collect();
            println!(
                "{}",
                format_table(
                    &["scheduler", "rounds", "cv", "max/mean", "worst", "accesses", "lb", "launches"],
                    &rows
                )
            );
            if let Some(m) = outcome.mismatch {
                return Err(CliError::Mismatch(m));
            }
            println!("labels agree across {} schedulers", outcome.rows.len());
        }
        Command::Sweep { run, thresholds } => {
            let spec = run.spec()?;
            let outcome = cmd_sweep_threshold(&spec, &thresholds)?;
            let rows: Vec<Vec<String>> = outcome
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.threshold.clone(),
                        r.resolved.clone(),
                        f3(r.cv),
                        f3(r.max_over_mean),
                        r.search_memory_accesses.to_string(),
                        r.inspect_launches.to_string(),
                        r.twc_launches.to_string(),
                        r.lb_launches.to_string(),
                    ]
                })
                .collect();
            println!(
                "{}",
                format_table(
                    &["threshold", "resolved", "cv", "max/mean", "accesses", "inspect", "twc", "lb"],
                    &rows
                )
            );
        }
        Command::Convert { input, output } => {
            let spec = RunSpec {
                name: String::new(),
                input: input.spec()?,
                symmetrize: input.symmetrize,
                app: AppKind::Cc,
                scheduler: SchedulerKind::Twc,
                kernel: KernelConfig::default(),
                devices: 1,
                seed: input.seed,
                max_rounds: None,
                out: None,
            };
            let g = load_graph(&spec)?;
            let file = File::create(&output)
                .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", output.display())))?;
            g.write_binary(BufWriter::new(file))?;
            println!("{} vertices, {} edges -> {}", g.num_vertices(), g.num_edges(), output.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
