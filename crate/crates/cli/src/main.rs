use std::path::PathBuf;
use std::process::ExitCode;

use cdg::config::{parse, parse_override, RunConfig};
use cdg::driver::{convergence, convergence_csv, run, snapshot_hook, wb_csv, wb_report, write_run};
use cdg::problems::catalog;
use cdg::{CdgError, Result};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "cdg", version, about = "Well-balanced central DG solver for the Euler equations with gravity")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Configuration file (key = value with [section] headers).
    #[arg(long, short)]
    config: Option<PathBuf>,
    /// Problem id, shorthand for `--set problem.id=ID`.
    #[arg(long, short)]
    problem: Option<String>,
    /// Override a key, e.g. `--set mesh.n=64`. Repeatable.
    #[arg(long = "set", short = 's', value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output directory.
    #[arg(long, short, default_value = "out")]
    out: PathBuf,
    /// Suppress progress output.
    #[arg(long, short)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one problem to its final time.
    Run(Common),
    /// Run a mesh ladder and report L1 errors and orders.
    Convergence {
        #[command(flatten)]
        common: Common,
        /// Comma-separated mesh sizes (overrides convergence.ladder).
        #[arg(long)]
        ladder: Option<String>,
    },
    /// Distance to the projected equilibrium after running the unperturbed problem.
    WbReport {
        #[command(flatten)]
        common: Common,
        /// Meshes as N or NXxNY, comma-separated.
        #[arg(long)]
        meshes: Option<String>,
    },
    /// List the built-in problems.
    ListProblems,
}

fn load(c: &Common) -> Result<RunConfig> {
    let mut pairs = match &c.config {
        Some(p) => parse(&std::fs::read_to_string(p)?)?,
        None => Vec::new(),
    };
    if let Some(id) = &c.problem {
        pairs.push(("problem.id".into(), id.clone()));
    }
    for s in &c.set {
        pairs.push(parse_override(s)?);
    }
    RunConfig::from_pairs(&pairs)
}

fn parse_mesh(s: &str, dim: usize) -> Result<(usize, usize)> {
    let bad = || CdgError::config(format!("cannot parse mesh '{s}'"));
    match s.split_once('x') {
        Some((a, b)) => Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)),
        None => {
            let n: usize = s.trim().parse().map_err(|_| bad())?;
            Ok((n, if dim == 1 { 1 } else { n }))
        }
    }
}

fn execute(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::ListProblems => {
            for p in catalog() {
                println!("{:<24} {}D  k={} n={}x{} t={}  {}", p.id, p.dim, p.k, p.n.0, p.n.1, p.t_final, p.summary);
            }
            Ok(())
        }
        Cmd::Run(c) => {
            let cfg = load(&c)?;
            std::fs::create_dir_all(&c.out)?;
            let mut snap_err = None;
            let quiet = c.quiet;
            let out = {
                let mut snap = snapshot_hook(&cfg, &c.out, &mut snap_err);
                run(&cfg, &mut |s, r, u| {
                    snap(s, r, u);
                    if !quiet && (r.step % 100 == 0) {
                        eprintln!("step {:>7} t = {:.6e} dt = {:.3e}", r.step, r.t, r.dt);
                    }
                })?
            };
            if let Some(e) = snap_err {
                return Err(e);
            }
            write_run(&out, &cfg, &c.out)?;
            if !quiet {
                let r = &out.report;
                eprintln!("done: {} steps to t = {}, min rho {:e}, min p {:e}", r.steps, r.t_final, r.min_rho, r.min_p);
                if let Some(e) = &r.l1_error {
                    eprintln!("L1 error {e:?}");
                }
            }
            Ok(())
        }
        Cmd::Convergence { common, ladder } => {
            let cfg = load(&common)?;
            let ladder: Vec<usize> = match ladder {
                Some(s) => s
                    .split(',')
                    .map(|v| v.trim().parse().map_err(|_| CdgError::config(format!("bad ladder entry '{v}'"))))
                    .collect::<Result<_>>()?,
                None if !cfg.ladder.is_empty() => cfg.ladder.clone(),
                None => vec![8, 16, 32, 64],
            };
            let rows = convergence(&cfg, &ladder)?;
            let csv = convergence_csv(&rows, if cfg.problem.dim == 1 { 3 } else { 4 });
            std::fs::create_dir_all(&common.out)?;
            std::fs::write(common.out.join("convergence.csv"), &csv)?;
            if !common.quiet {
                print!("{csv}");
            }
            Ok(())
        }
        Cmd::WbReport { common, meshes } => {
            let cfg = load(&common)?;
            let meshes = match meshes {
                Some(s) => s.split(',').map(|m| parse_mesh(m, cfg.problem.dim)).collect::<Result<Vec<_>>>()?,
                None => vec![(cfg.nx, cfg.ny)],
            };
            let rows = wb_report(&cfg, &meshes)?;
            let csv = wb_csv(&rows, if cfg.problem.dim == 1 { 3 } else { 4 });
            std::fs::create_dir_all(&common.out)?;
            std::fs::write(common.out.join("wb.csv"), &csv)?;
            if !common.quiet {
                print!("{csv}");
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
