//! Command-line front end: `simulate`, `analyze` and `design`.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::analysis::{attenuation_report, verdict};
use crate::config::{load, Resolved};
use crate::design::{design_lfp, DesignOutcome};
use crate::error::{Error, Result};
use crate::sim::{simulate, write_learned_csv, write_trajectory_csv, Strategy};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_BLOW_UP: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_NOT_FOUND: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "platoon-lateral",
    version,
    about = "Lateral string stability of vehicle platoons"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate the platoon and write trajectories, norms and a certificate.
    Simulate(Common),
    /// Frequency-domain verdict only.
    Analyze(Common),
    /// Search learning gains from the config's [design] block.
    Design(Common),
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, value_name = "PATH")]
    pub config: PathBuf,
    /// Output directory; overrides [outputs] directory.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub quiet: bool,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BlowUp { .. } => EXIT_BLOW_UP,
        Error::ZeroPolynomial
        | Error::UnstableDenominator
        | Error::RhpZero
        | Error::NotRankDeficient { .. }
        | Error::UnstableFeedback
        | Error::TailTooLarge { .. }
        | Error::Consistency(_) => EXIT_PRECONDITION,
        _ => EXIT_CONFIG,
    }
}

fn out_dir(common: &Common, cfg: &Resolved) -> PathBuf {
    common
        .out
        .clone()
        .or_else(|| cfg.outputs.directory.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<fs::File>> {
    Ok(BufWriter::new(fs::File::create(dir.join(name))?))
}

fn cmd_simulate(common: &Common) -> Result<()> {
    let cfg = load(&common.config)?;
    let dir = out_dir(common, &cfg);
    fs::create_dir_all(&dir)?;
    let sc = &cfg.scenario;
    let traj = simulate(sc)?;
    if traj.small_angle_samples > 0 {
        eprintln!(
            "warning: heading error left the small-angle regime at {} grid samples",
            traj.small_angle_samples
        );
    }
    let report = attenuation_report(&traj, cfg.output)?;
    let stride = cfg.outputs.stride;
    if cfg.outputs.trajectory {
        let mut f = create(&dir, "trajectory.csv")?;
        write_trajectory_csv(&traj, &sc.path, &mut f, stride)?;
        f.flush()?;
    }
    if cfg.outputs.learned && sc.strategy == Strategy::LearnFromPredecessor {
        let mut f = create(&dir, "learned.csv")?;
        write_learned_csv(&traj, &mut f, stride)?;
        f.flush()?;
    }
    if cfg.outputs.path {
        let mut f = create(&dir, "path.csv")?;
        sc.path.write_csv(&mut f, stride)?;
        f.flush()?;
    }
    if cfg.outputs.norms {
        fs::write(dir.join("norms.csv"), report.to_csv())?;
    }
    if cfg.outputs.certificate {
        let text = match verdict(&sc.params, &sc.gains, sc.strategy, cfg.output) {
            Ok(c) => c.render(),
            Err(e) => {
                eprintln!("warning: no frequency-domain certificate: {e}");
                format!("verdict unavailable: {e}\n")
            }
        };
        let mut f = create(&dir, "certificate.txt")?;
        write!(f, "{text}")?;
        writeln!(f, "empirical: {}", report.verdict.label())?;
        f.flush()?;
    }
    if !common.quiet {
        println!(
            "{} vehicles over {} m, output {}",
            sc.vehicles,
            report.horizon,
            cfg.output.label()
        );
        for (i, n) in report.norm_elat.iter().enumerate() {
            println!(
                "vehicle {:>2}: ||e_lat|| = {:.6e}  ||e|| = {:.6e}",
                i + 1,
                n,
                report.norm_evec[i]
            );
        }
        println!("empirical: {}", report.verdict.label());
        println!("wrote {}", dir.display());
    }
    Ok(())
}

fn cmd_analyze(common: &Common) -> Result<()> {
    let cfg = load(&common.config)?;
    let sc = &cfg.scenario;
    let cert = verdict(&sc.params, &sc.gains, sc.strategy, cfg.output)?;
    let dir = out_dir(common, &cfg);
    fs::create_dir_all(&dir)?;
    let text = cert.render();
    fs::write(dir.join("certificate.txt"), &text)?;
    if !common.quiet {
        print!("{text}");
    }
    Ok(())
}

fn cmd_design(common: &Common) -> Result<i32> {
    let cfg = load(&common.config)?;
    let Some(spec) = &cfg.design else {
        return Err(Error::Config(format!(
            "{}: no [design] block",
            common.config.display()
        )));
    };
    let outcome = design_lfp(spec)?;
    let dir = out_dir(common, &cfg);
    fs::create_dir_all(&dir)?;
    let text = outcome.render();
    fs::write(dir.join("design.txt"), &text)?;
    if let DesignOutcome::NotFound { diagnostics } = &outcome {
        for d in diagnostics {
            eprintln!("design not found: {d}");
        }
        return Ok(EXIT_NOT_FOUND);
    }
    if !common.quiet {
        print!("{text}");
    }
    Ok(EXIT_OK)
}

pub fn run(cli: &Cli) -> i32 {
    let result = match &cli.command {
        Command::Simulate(c) => cmd_simulate(c).map(|_| EXIT_OK),
        Command::Analyze(c) => cmd_analyze(c).map(|_| EXIT_OK),
        Command::Design(c) => cmd_design(c),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
