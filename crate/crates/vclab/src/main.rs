use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use vclab::commands::{
    cmd_batch, cmd_chi, cmd_direct_sum, cmd_neighborly, cmd_product, cmd_skeleton, cmd_uvc, ProductFlags,
};
use vclab::{Certificate, OutputFormat, RunConfig, Status};

#[derive(Parser)]
#[command(name = "vc-lab", version, about = "Vector chromatic numbers, optimal vector colorings and product certificates")]
struct Cli {
    /// JSON run configuration (overrides VC_LAB_CONFIG).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format (overrides the configuration).
    #[arg(long, global = true, value_enum)]
    output: Option<OutputFormat>,
    /// Run batch entries and independent solves in parallel.
    #[arg(long, global = true)]
    parallel: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Vector chromatic number with optimal primal and dual solutions.
    Chi {
        graph: PathBuf,
        /// Also compute the strict vector chromatic number.
        #[arg(long)]
        strict: bool,
    },
    /// Test unique vector colorability.
    Uvc { graph: PathBuf },
    /// Edges tight in every optimal coloring.
    Skeleton { graph: PathBuf },
    /// Neighborliness witnesses and arrow sets for every vertex.
    Neighborly { graph: PathBuf },
    /// Analyses of the categorical product G x H.
    Product {
        g: PathBuf,
        h: PathBuf,
        #[arg(long)]
        verify_hedetniemi: bool,
        /// Include the strict values in --verify-hedetniemi.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        rank_accounting: bool,
        #[arg(long)]
        corollary: bool,
        #[arg(long)]
        necessary: bool,
        /// Coloring file of G x H to split into induced parts.
        #[arg(long, value_name = "COLORING")]
        decompose: Option<PathBuf>,
    },
    /// Write the direct sum of optimal factor colorings as a coloring file.
    DirectSum {
        g: PathBuf,
        h: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run every entry of a manifest.
    Batch { manifest: PathBuf },
}

fn run(cli: Cli) -> vclab::Result<(Certificate, OutputFormat)> {
    let mut cfg = RunConfig::load(cli.config.as_deref())?;
    if let Some(o) = cli.output {
        cfg.output = o;
    }
    cfg.parallel |= cli.parallel;
    let cert = match cli.command {
        Command::Chi { graph, strict } => cmd_chi(&graph, strict, &cfg)?,
        Command::Uvc { graph } => cmd_uvc(&graph, &cfg)?,
        Command::Skeleton { graph } => cmd_skeleton(&graph, &cfg)?,
        Command::Neighborly { graph } => cmd_neighborly(&graph, &cfg)?,
        Command::Product {
            g,
            h,
            verify_hedetniemi,
            strict,
            rank_accounting,
            corollary,
            necessary,
            decompose,
        } => {
            let flags = ProductFlags {
                verify_hedetniemi,
                strict,
                rank_accounting,
                corollary,
                necessary,
                decompose,
            };
            cmd_product(&g, &h, &flags, &cfg)?
        }
        Command::DirectSum { g, h, alpha, out } => cmd_direct_sum(&g, &h, alpha, &out, &cfg)?,
        Command::Batch { manifest } => cmd_batch(&manifest, &cfg)?,
    };
    Ok((cert, cfg.output))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((cert, format)) => {
            let text = match format {
                OutputFormat::Json => cert.to_json() + "\n",
                OutputFormat::Text => cert.to_text(),
            };
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            if cert.status == Status::Failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("vc-lab: {e}");
            ExitCode::from(2)
        }
    }
}
