use std::path::PathBuf;

use anyhow::Result;
use clap::{Parser, Subcommand};

use nvrotor_cli::config::{ConvergeConfig, FigureTag, Overrides, SweepConfig};
use nvrotor_cli::converge::run_convergence;
use nvrotor_cli::figures::reproduce_figure;
use nvrotor_cli::sweep::run_sweep;

/// Eigenstates, thermal states, and spin-rotation entanglement of a
/// levitated nanodiamond with an NV center in a static magnetic field.
#[derive(Parser)]
#[command(name = "nvrotor", version, about)]
struct Cli {
    /// TOML configuration file; command-line flags override its values
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for CSV datasets
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Angular-momentum cutoff (Jmax or Lmax)
    #[arg(long, global = true)]
    jmax: Option<u32>,

    /// Frame of the truncated basis
    #[arg(long, global = true, value_parser = ["body", "space"])]
    frame: Option<String>,

    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sweep levels and entanglement measures over the magnetic field
    Sweep {
        /// Number of levels to report
        #[arg(long)]
        levels: Option<usize>,
        /// Comma-separated temperatures in millikelvin (omit for
        /// ground-state-only sweeps)
        #[arg(long, value_delimiter = ',')]
        temps_mk: Option<Vec<f64>>,
        /// Number of field grid points from 0 to --bmax
        #[arg(long)]
        points: Option<usize>,
        /// Upper end of the field grid, tesla
        #[arg(long)]
        bmax: Option<f64>,
    },
    /// Fidelity and negativity convergence against larger cutoffs
    Converge {
        /// Comma-separated cutoffs to compare against (each > --jmax)
        #[arg(long, value_delimiter = ',')]
        compare: Option<Vec<u32>>,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        bmax: Option<f64>,
    },
    /// Dataset behind one named figure: 3a, 3b, 3c, 4a, 4b, 4c, or 5
    Figure {
        tag: String,
        /// Field value for the single-point figure 3c, tesla
        #[arg(long)]
        field: Option<f64>,
    },
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    let mut over = Overrides {
        frame: cli.frame.clone(),
        cutoff: cli.jmax,
        out_dir: cli.out.clone(),
        ..Default::default()
    };
    match cli.cmd {
        Cmd::Sweep {
            levels,
            temps_mk,
            points,
            bmax,
        } => {
            over.n_levels = levels;
            over.temperatures_mk = temps_mk;
            over.field_points = points;
            over.field_max = bmax;
            let cfg = SweepConfig::resolve(cli.config.as_deref(), &over)?;
            let path = run_sweep(&cfg)?;
            println!("wrote {}", path.display());
        }
        Cmd::Converge {
            compare,
            points,
            bmax,
        } => {
            over.compare = compare;
            over.field_points = points;
            over.field_max = bmax;
            let cfg = ConvergeConfig::resolve(cli.config.as_deref(), &over)?;
            let (fid, neg) = run_convergence(&cfg)?;
            println!("wrote {}", fid.display());
            println!("wrote {}", neg.display());
        }
        Cmd::Figure { tag, field } => {
            over.field_tesla = field;
            let tag: FigureTag = tag.parse()?;
            let cfg = SweepConfig::resolve(cli.config.as_deref(), &over)?;
            let path = reproduce_figure(tag, &cfg)?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}
