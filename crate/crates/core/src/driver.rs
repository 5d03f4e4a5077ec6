//! Run, convergence and well-balance drivers plus their file outputs.

use std::fmt::Write as _;
use std::path::Path;

use crate::cdg1d::Scheme1D;
use crate::config::RunConfig;
use crate::error::{CdgError, Result};
use crate::field::PolyField;
use crate::limiters::{pressure_n, LimiterReport};
use crate::scheme::{Diagnostics, Scheme};
use crate::stepper::{advance_to, StepLog, StepRecord};

/// Build the discretization selected by a configuration.
pub fn build_scheme(cfg: &RunConfig) -> Result<Box<dyn Scheme>> {
    match cfg.problem.dim {
        1 => Ok(Box::new(Scheme1D::new(cfg.problem.clone(), cfg.k, cfg.nx, cfg.options.clone())?)),
        _ => Ok(Box::new(crate::cdg2d::Scheme2D::new(
            cfg.problem.clone(),
            cfg.k,
            (cfg.nx, cfg.ny),
            cfg.options.clone(),
        )?)),
    }
}

/// Final summary of one run.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ErrorReport {
    pub problem: String,
    pub k: usize,
    pub nx: usize,
    pub ny: usize,
    pub t_final: f64,
    pub steps: usize,
    /// (1/|Ω|) Σ_cells ∫|u − u_exact| per component on the primal family.
    pub l1_error: Option<Vec<f64>>,
    /// (1/|Ω|) Σ_cells ∫|u − projected equilibrium| per component: primal, dual.
    pub wb_distance: [Vec<f64>; 2],
    pub min_rho: f64,
    pub min_p: f64,
    pub limiter: LimiterReport,
    pub initial: Diagnostics,
    pub last: Diagnostics,
}

impl ErrorReport {
    /// Largest relative change of a conserved total over the run.
    pub fn conservation_drift(&self) -> f64 {
        let mut d: f64 = 0.0;
        for f in 0..2 {
            for c in 0..4 {
                let (a, b) = (self.initial.totals[f][c], self.last.totals[f][c]);
                d = d.max((b - a).abs() / a.abs().max(1.0));
            }
        }
        d
    }
}

pub struct RunOutcome {
    pub scheme: Box<dyn Scheme>,
    pub fields: [PolyField; 2],
    pub log: StepLog,
    pub report: ErrorReport,
}

/// |Ω|, the length or area that reported L¹ norms are divided by.
pub fn domain_measure(cfg: &RunConfig) -> f64 {
    let p = &cfg.problem;
    let lx = p.x.1 - p.x.0;
    if p.dim == 1 {
        lx
    } else {
        lx * (p.y.1 - p.y.0)
    }
}

/// Exact solution as a four-component closure, where the problem has one.
fn exact(cfg: &RunConfig) -> Option<impl Fn(f64, f64, f64) -> [f64; 4] + '_> {
    if !cfg.problem.has_exact {
        return None;
    }
    let p = &cfg.problem;
    Some(move |x: f64, y: f64, t: f64| {
        if p.dim == 1 {
            let u = p.state_1d(x, t);
            [u[0], u[1], u[2], 0.0]
        } else {
            p.state_2d(x, y, t)
        }
    })
}

/// Callback after every step, with the scheme for sampling.
pub type StepHook<'a> = dyn FnMut(&dyn Scheme, &StepRecord, &[PolyField; 2]) + 'a;

/// Run one configuration to its final time.
pub fn run(cfg: &RunConfig, on_step: &mut StepHook) -> Result<RunOutcome> {
    let scheme = build_scheme(cfg)?;
    let mut u = scheme.initial_fields()?;
    let initial = scheme.diagnostics(&u);
    let sref = scheme.as_ref();
    let (t, log) = advance_to(sref, &mut u, 0.0, &cfg.control, &mut |r, f| on_step(sref, r, f))?;
    let eq = scheme.equilibrium();
    let m = domain_measure(cfg);
    let per = |v: Vec<f64>| v.into_iter().map(|e| e / m).collect::<Vec<_>>();
    let l1_error = exact(cfg).map(|f| per(scheme.distance_to(&u[0], t, &f)));
    let wb_distance = [per(scheme.distance(&u[0], &eq[0])), per(scheme.distance(&u[1], &eq[1]))];
    let last = scheme.diagnostics(&u);
    let report = ErrorReport {
        problem: cfg.problem.id.to_string(),
        k: cfg.k,
        nx: cfg.nx,
        ny: cfg.ny,
        t_final: t,
        steps: log.steps(),
        l1_error,
        wb_distance,
        min_rho: log.min_rho().min(initial.min_rho),
        min_p: log.min_p().min(initial.min_p),
        limiter: log.limiter_totals(),
        initial,
        last,
    };
    Ok(RunOutcome { scheme, fields: u, log, report })
}

/// CSV of sampled point values with primitive and perturbation columns.
pub fn field_csv(scheme: &dyn Scheme, u: &PolyField) -> String {
    let g = scheme.gamma();
    let nc = scheme.components();
    let eq = &scheme.equilibrium()[u.family.index()];
    let samples = scheme.samples(u);
    let eq_samples = scheme.samples(eq);
    let mut s = String::new();
    if scheme.dim() == 1 {
        s.push_str("x,rho,m,E,p,u,rho_pert,p_pert\n");
    } else {
        s.push_str("x,y,rho,m1,m2,E,p,u,v,rho_pert,p_pert\n");
    }
    for (a, b) in samples.iter().zip(&eq_samples) {
        let p = pressure_n(&a.state[..nc], g);
        let ps = pressure_n(&b.state[..nc], g);
        let st = &a.state;
        if scheme.dim() == 1 {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{}",
                a.x,
                st[0],
                st[1],
                st[2],
                p,
                st[1] / st[0],
                st[0] - b.state[0],
                p - ps
            );
        } else {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{},{}",
                a.x,
                a.y,
                st[0],
                st[1],
                st[2],
                st[3],
                p,
                st[1] / st[0],
                st[2] / st[0],
                st[0] - b.state[0],
                p - ps
            );
        }
    }
    s
}

/// Plain-text step log, one line per step.
pub fn step_log_text(log: &StepLog) -> String {
    let mut s = String::from("step t dt alpha_x alpha_y min_rho min_p density_limited pressure_limited troubled\n");
    for r in &log.records {
        let _ = writeln!(
            s,
            "{} {:e} {:e} {:e} {:e} {:e} {:e} {} {} {}",
            r.step,
            r.t,
            r.dt,
            r.alpha_x,
            r.alpha_y,
            r.diagnostics.min_rho,
            r.diagnostics.min_p,
            r.limiter.density_limited,
            r.limiter.pressure_limited,
            r.limiter.troubled
        );
    }
    s
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(CdgError::Io)
}

/// Hook writing `primal_NNNNNN.csv` (and the dual) every `cfg.every` steps.
pub fn snapshot_hook<'a>(
    cfg: &'a RunConfig,
    dir: &'a Path,
    err: &'a mut Option<CdgError>,
) -> impl FnMut(&dyn Scheme, &StepRecord, &[PolyField; 2]) + 'a {
    move |scheme, rec, u| {
        if cfg.every == 0 || rec.step % cfg.every != 0 || err.is_some() {
            return;
        }
        let go = || -> Result<()> {
            write(&dir.join(format!("primal_{:06}.csv", rec.step)), &field_csv(scheme, &u[0]))?;
            if cfg.write_dual {
                write(&dir.join(format!("dual_{:06}.csv", rec.step)), &field_csv(scheme, &u[1]))?;
            }
            Ok(())
        };
        if let Err(e) = go() {
            *err = Some(e);
        }
    }
}

/// Write the field CSV(s), step log and JSON report of a finished run.
pub fn write_run(out: &RunOutcome, cfg: &RunConfig, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    write(&dir.join("primal.csv"), &field_csv(out.scheme.as_ref(), &out.fields[0]))?;
    if cfg.write_dual {
        write(&dir.join("dual.csv"), &field_csv(out.scheme.as_ref(), &out.fields[1]))?;
    }
    write(&dir.join("steps.log"), &step_log_text(&out.log))?;
    let json = serde_json::to_string_pretty(&out.report).map_err(|e| CdgError::Io(e.into()))?;
    write(&dir.join("report.json"), &json)
}

/// One row of a convergence table.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub errors: Vec<f64>,
    /// log₂(e_{N/2} / e_N); absent on the first row.
    pub orders: Option<Vec<f64>>,
}

/// Runs on a mesh ladder and the successive orders.
pub fn convergence(cfg: &RunConfig, ladder: &[usize]) -> Result<Vec<ConvergenceRow>> {
    if !cfg.problem.has_exact {
        return Err(CdgError::config(format!("{} has no exact solution", cfg.problem.id)));
    }
    if ladder.len() < 2 {
        return Err(CdgError::config("a convergence ladder needs at least two meshes"));
    }
    let mut rows: Vec<ConvergenceRow> = Vec::new();
    for &n in ladder {
        let mut c = cfg.clone();
        c.nx = n;
        c.ny = if cfg.problem.dim == 1 { 1 } else { n };
        c.validate()?;
        let out = run(&c, &mut |_, _, _| {})?;
        let errors = out.report.l1_error.unwrap_or_default();
        let orders = rows.last().map(|prev| {
            let ratio = n as f64 / prev.n as f64;
            prev.errors.iter().zip(&errors).map(|(a, b)| (a / b).ln() / ratio.ln()).collect()
        });
        rows.push(ConvergenceRow { n, errors, orders });
    }
    Ok(rows)
}

pub fn convergence_csv(rows: &[ConvergenceRow], nc: usize) -> String {
    let names: &[&str] = if nc == 3 { &["rho", "m", "E"] } else { &["rho", "m1", "m2", "E"] };
    let mut s = String::from("n");
    for n in names {
        let _ = write!(s, ",l1_{n},order_{n}");
    }
    s.push('\n');
    for r in rows {
        let _ = write!(s, "{}", r.n);
        for c in 0..nc {
            let o = r.orders.as_ref().map(|o| o[c].to_string()).unwrap_or_default();
            let _ = write!(s, ",{},{}", r.errors[c], o);
        }
        s.push('\n');
    }
    s
}

/// Distances to the projected equilibrium after a run of the unperturbed problem.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct WbRow {
    pub nx: usize,
    pub ny: usize,
    pub t_final: f64,
    pub primal: Vec<f64>,
    pub dual: Vec<f64>,
    pub troubled: usize,
}

impl WbRow {
    pub fn max(&self) -> f64 {
        self.primal.iter().chain(&self.dual).fold(0.0, |m, v| m.max(*v))
    }
}

/// Configuration of the well-balance check: η = 0 and the dedicated final time.
pub fn wb_config(cfg: &RunConfig) -> RunConfig {
    let mut c = cfg.clone();
    c.problem.eta = 0.0;
    if !cfg.t_final_set {
        if let Some(t) = cfg.problem.wb_t_final {
            c.control.t_final = t;
        }
    }
    c
}

pub fn wb_report(cfg: &RunConfig, meshes: &[(usize, usize)]) -> Result<Vec<WbRow>> {
    let base = wb_config(cfg);
    let mut rows = Vec::new();
    for &(nx, ny) in meshes {
        let mut c = base.clone();
        c.nx = nx;
        c.ny = ny;
        c.validate()?;
        let out = run(&c, &mut |_, _, _| {})?;
        let [p, d] = out.report.wb_distance.clone();
        rows.push(WbRow {
            nx,
            ny,
            t_final: out.report.t_final,
            primal: p,
            dual: d,
            troubled: out.report.limiter.troubled,
        });
    }
    Ok(rows)
}

pub fn wb_csv(rows: &[WbRow], nc: usize) -> String {
    let names: &[&str] = if nc == 3 { &["rho", "m", "E"] } else { &["rho", "m1", "m2", "E"] };
    let mut s = String::from("nx,ny,t");
    for fam in ["primal", "dual"] {
        for n in names {
            let _ = write!(s, ",{fam}_{n}");
        }
    }
    s.push_str(",troubled\n");
    for r in rows {
        let _ = write!(s, "{},{},{}", r.nx, r.ny, r.t_final);
        for v in r.primal.iter().chain(&r.dual) {
            let _ = write!(s, ",{v}");
        }
        let _ = writeln!(s, ",{}", r.troubled);
    }
    s
}
