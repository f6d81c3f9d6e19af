use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chairplay::{report_json, run_scenario, snapshots_jsonl, HarnessError, Scenario};
use chairplay_catalog::{
    aggregate_ratings, default_catalog, iqr_plot_data, parse_ratings_csv, recommend, Layout,
    MeetingContext, MeetingPhase,
};
use chairplay_session::{ServerConfig, SessionConfig};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "chairplay",
    version,
    about = "Seated movement games for online meetings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the WebSocket session server.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "data")]
        data_dir: PathBuf,
        /// Seconds of meeting between breaks.
        #[arg(long, default_value_t = 1200.0)]
        break_interval: f64,
        /// Seconds each break lasts.
        #[arg(long, default_value_t = 300.0)]
        break_length: f64,
        /// Address to bind.
        #[arg(long, default_value = "0.0.0.0")]
        host: std::net::IpAddr,
    },
    /// Run a scenario headless and write its metrics report.
    Simulate {
        scenario: PathBuf,
        /// Overrides the seed in the scenario file.
        #[arg(long)]
        seed: Option<u64>,
        /// Report path; standard output if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the per-tick snapshot log (JSON lines).
        #[arg(long)]
        snapshots: Option<PathBuf>,
    },
    /// Summarize a ratings CSV into interquartile segments.
    Report {
        ratings: PathBuf,
        /// Segments path; standard output if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rank the bundled games for a meeting context.
    Recommend {
        #[arg(long, value_enum)]
        phase: PhaseArg,
        #[arg(long, value_enum)]
        layout: LayoutArg,
        /// 1 = fully private surroundings.
        #[arg(long)]
        privacy: f64,
        /// Share of attention the game may take.
        #[arg(long)]
        attention: f64,
        #[arg(long)]
        exertion: Option<f64>,
        #[arg(long, default_value_t = 5.0)]
        minutes: f64,
    },
    /// Print the bundled game profiles as JSON.
    Catalog,
}

#[derive(Clone, Copy, ValueEnum)]
enum PhaseArg {
    Break,
    MidMeeting,
}

#[derive(Clone, Copy, ValueEnum)]
enum LayoutArg {
    Symmetric,
    Asymmetric,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Harness(#[from] HarnessError),
    #[error(transparent)]
    Catalog(#[from] chairplay_catalog::CatalogError),
    #[error(transparent)]
    Server(#[from] chairplay_session::ServerError),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(value: &impl serde::Serialize) -> String {
    let value = serde_json::to_value(value).expect("serializable");
    let mut text = serde_json::to_string_pretty(&value).expect("value serializes");
    text.push('\n');
    text
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Serve {
            port,
            data_dir,
            break_interval,
            break_length,
            host,
        } => {
            tracing_subscriber::fmt()
                .with_env_filter(
                    tracing_subscriber::EnvFilter::try_from_default_env()
                        .unwrap_or_else(|_| tracing_subscriber::EnvFilter::new("info")),
                )
                .init();
            let config = ServerConfig {
                addr: SocketAddr::new(host, port),
                data_dir,
                session: SessionConfig {
                    break_interval_s: break_interval,
                    break_length_s: break_length,
                    ..SessionConfig::default()
                },
            };
            let runtime = tokio::runtime::Runtime::new().map_err(|source| CliError::Io {
                path: PathBuf::from("<runtime>"),
                source,
            })?;
            runtime.block_on(chairplay_session::serve(config))?;
            Ok(())
        }
        Command::Simulate {
            scenario,
            seed,
            out,
            snapshots,
        } => {
            let mut s = Scenario::load(&scenario)?;
            if let Some(seed) = seed {
                s.seed = seed;
            }
            let run = run_scenario(&s)?;
            if let Some(path) = snapshots {
                emit(&snapshots_jsonl(&run.snapshots), Some(&path))?;
            }
            emit(&report_json(&run.report), out.as_deref())
        }
        Command::Report { ratings, out } => {
            let records = parse_ratings_csv(&read(&ratings)?)?;
            let segments = iqr_plot_data(&aggregate_ratings(&records)?)?;
            emit(&pretty(&segments), out.as_deref())
        }
        Command::Recommend {
            phase,
            layout,
            privacy,
            attention,
            exertion,
            minutes,
        } => {
            let phase = match phase {
                PhaseArg::Break => MeetingPhase::Break,
                PhaseArg::MidMeeting => MeetingPhase::MidMeeting,
            };
            let layout = match layout {
                LayoutArg::Symmetric => Layout::Symmetric,
                LayoutArg::Asymmetric => Layout::Asymmetric,
            };
            let mut ctx = MeetingContext::new(phase, layout, privacy, attention);
            ctx.desired_exertion = exertion;
            ctx.minutes_available = minutes;
            emit(&pretty(&recommend(&ctx, &default_catalog())?), None)
        }
        Command::Catalog => emit(&pretty(&default_catalog()), None),
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
