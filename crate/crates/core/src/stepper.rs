//! Third-order SSP Runge-Kutta driver with per-stage limiting and the
//! positivity-safe time step.

use crate::error::{CdgError, Result};
use crate::field::PolyField;
use crate::limiters::LimiterReport;
use crate::scheme::{Diagnostics, Scheme};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum DtMode {
    Cfl,
    /// Δt = 0.15 Δx^{4/3} / α̃_x, used for fourth-order convergence studies.
    AccuracyMatched,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct StepControl {
    pub cfl: f64,
    /// Δt / τ_max.
    pub theta: f64,
    pub t_final: f64,
    pub dt_mode: DtMode,
    pub max_steps: usize,
    /// Used when every wave speed vanishes.
    pub dt_cap: Option<f64>,
}

impl StepControl {
    /// Defaults for degree `k`: CFL 0.25 (k ≤ 2) or 0.15 (k = 3), θ = 1.
    pub fn for_degree(k: usize, t_final: f64) -> StepControl {
        StepControl {
            cfl: if k >= 3 { 0.15 } else { 0.25 },
            theta: 1.0,
            t_final,
            dt_mode: DtMode::Cfl,
            max_steps: 10_000_000,
            dt_cap: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl.is_finite()) {
            return Err(CdgError::config(format!("time.cfl must be positive, got {}", self.cfl)));
        }
        if !(self.theta > 0.0 && self.theta <= 1.0) {
            return Err(CdgError::config(format!("time.theta must lie in (0, 1], got {}", self.theta)));
        }
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return Err(CdgError::config(format!("time.t_final must be nonnegative, got {}", self.t_final)));
        }
        Ok(())
    }
}

/// Step size from the global α̃ values, before clipping to the final time.
pub fn compute_dt(alpha: (f64, f64), spacing: (f64, f64), w1: f64, dim: usize, ctrl: &StepControl) -> Result<f64> {
    let (ax, ay) = alpha;
    if ax.is_nan() || ay.is_nan() {
        return Err(CdgError::Positivity { family: "both", cell: 0, detail: "NaN wave-speed parameter".into() });
    }
    let (dx, dy) = spacing;
    let dt = match (ctrl.dt_mode, dim) {
        (DtMode::AccuracyMatched, _) => 0.15 * dx.powf(4.0 / 3.0) / ax,
        (DtMode::Cfl, 1) => ctrl.cfl * dx * ctrl.theta * w1 / (2.0 * ax),
        (DtMode::Cfl, _) => ctrl.cfl * ctrl.theta * w1 / 2.0 / (ax / dx + ay / dy),
    };
    if dt.is_finite() && dt > 0.0 {
        Ok(dt)
    } else {
        ctrl.dt_cap.ok_or_else(|| CdgError::RuntimeLimit("all wave speeds vanish and no time-step cap is set".into()))
    }
}

/// `out = u0 + a((stage + dt l) - u0)`, the increment form of one SSP-RK3 stage.
#[inline]
pub fn rk_combine(u0: &[f64], stage: &[f64], l: &[f64], dt: f64, a: f64, out: &mut [f64]) {
    for i in 0..out.len() {
        out[i] = u0[i] + a * ((stage[i] + dt * l[i]) - u0[i]);
    }
}

const STAGES: [(f64, f64); 3] = [(1.0, 1.0), (0.25, 0.5), (2.0 / 3.0, 1.0)];

fn tag_stage(e: CdgError, stage: usize) -> CdgError {
    match e {
        CdgError::Positivity { family, cell, detail } => {
            CdgError::Positivity { family, cell, detail: format!("stage {}: {detail}", stage + 1) }
        }
        other => other,
    }
}

/// One SSP-RK3 step of both families from time `t`.
pub fn ssp_rk3_step(
    scheme: &dyn Scheme,
    u: &mut [PolyField; 2],
    t: f64,
    dt: f64,
    tau: f64,
    report: &mut LimiterReport,
) -> Result<()> {
    let u0 = u.clone();
    let mut l = u.clone();
    let mut next = u.clone();
    for (i, &(a, c)) in STAGES.iter().enumerate() {
        scheme.residual(u, tau, &mut l).map_err(|e| tag_stage(e, i))?;
        for f in 0..2 {
            rk_combine(&u0[f].data, &u[f].data, &l[f].data, dt, a, &mut next[f].data);
        }
        std::mem::swap(u, &mut next);
        scheme.post_stage(u, t + c * dt, report).map_err(|e| tag_stage(e, i))?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct StepRecord {
    pub step: usize,
    pub t: f64,
    pub dt: f64,
    pub alpha_x: f64,
    pub alpha_y: f64,
    pub limiter: LimiterReport,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone, Default, PartialEq, serde::Serialize)]
pub struct StepLog {
    pub records: Vec<StepRecord>,
}

impl StepLog {
    pub fn steps(&self) -> usize {
        self.records.len()
    }

    pub fn min_rho(&self) -> f64 {
        self.records.iter().map(|r| r.diagnostics.min_rho).fold(f64::INFINITY, f64::min)
    }

    pub fn min_p(&self) -> f64 {
        self.records.iter().map(|r| r.diagnostics.min_p).fold(f64::INFINITY, f64::min)
    }

    pub fn limiter_totals(&self) -> LimiterReport {
        let mut r = LimiterReport::new();
        for rec in &self.records {
            r.merge(&rec.limiter);
        }
        r
    }
}

/// Advance from `t0` to `ctrl.t_final`. `on_step` sees every record and the fields after the step.
pub fn advance_to(
    scheme: &dyn Scheme,
    u: &mut [PolyField; 2],
    t0: f64,
    ctrl: &StepControl,
    on_step: &mut dyn FnMut(&StepRecord, &[PolyField; 2]),
) -> Result<(f64, StepLog)> {
    ctrl.validate()?;
    let mut t = t0;
    let mut log = StepLog::default();
    let w1 = scheme.lobatto_w1();
    while t < ctrl.t_final {
        if log.steps() >= ctrl.max_steps {
            return Err(CdgError::RuntimeLimit(format!(
                "{} steps reached at t = {t:e} before t_final = {:e}",
                ctrl.max_steps, ctrl.t_final
            )));
        }
        let (ax, ay) = scheme.alpha(u)?;
        let mut dt = compute_dt((ax, ay), scheme.spacing(), w1, scheme.dim(), ctrl)?;
        let tau = dt / ctrl.theta;
        let last = t + dt >= ctrl.t_final;
        if last {
            dt = ctrl.t_final - t;
        }
        let mut report = LimiterReport::new();
        ssp_rk3_step(scheme, u, t, dt, tau, &mut report)?;
        t = if last { ctrl.t_final } else { t + dt };
        let rec = StepRecord {
            step: log.steps() + 1,
            t,
            dt,
            alpha_x: ax,
            alpha_y: ay,
            limiter: report,
            diagnostics: scheme.diagnostics(u),
        };
        on_step(&rec, u);
        log.records.push(rec);
    }
    Ok((t, log))
}
