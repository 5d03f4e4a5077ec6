//! Shared helpers for the integration tests.
#![allow(dead_code)]

use cdg::basis::{Basis1D, Basis2D};
use cdg::cdg1d::Scheme1D;
use cdg::cdg2d::{Dir, Scheme2D};
use cdg::config::RunConfig;
use cdg::driver::build_scheme;
use cdg::field::PolyField;
use cdg::limiters::LimiterReport;
use cdg::mesh::{Axis, Family, Mesh2D};
use cdg::projection::{project_1d, project_2d, ProjTable1D, ProjTable2D};
use cdg::scheme::Scheme;
use cdg::stepper::{compute_dt, ssp_rk3_step, StepControl};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub const FAMS: [Family; 2] = [Family::Primal, Family::Dual];

/// Fraction of the positivity-safe step.
pub const SAFE: (f64, f64) = (0.01, 0.999);

/// Composite Simpson rule with `n` (even) panels; independent of the Gauss tables.
pub fn simpson(a: f64, b: f64, n: usize, f: impl Fn(f64) -> f64) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

pub fn simpson_2d(x: (f64, f64), y: (f64, f64), n: usize, f: impl Fn(f64, f64) -> f64) -> f64 {
    simpson(y.0, y.1, n, |yy| simpson(x.0, x.1, n, |xx| f(xx, yy)))
}

/// Value of component `c` of a 1D cell at reference point ξ.
pub fn value_1d(f: &PolyField, s: usize, c: usize, k: usize, xi: f64) -> f64 {
    let b = Basis1D::new(k).values(xi);
    (0..=k).map(|l| f.coef(s, c, l) * b[l]).sum()
}

pub fn value_2d(f: &PolyField, idx: usize, c: usize, k: usize, xi: f64, eta: f64) -> f64 {
    let b = Basis2D::new(k).values(xi, eta);
    (0..b.len()).map(|l| f.coef(idx, c, l) * b[l]).sum()
}

// Positivity of one forward-Euler step.

/// Overwrite every stored cell with a random admissible average and random
/// higher modes of comparable size.
pub fn randomize(u: &mut [PolyField; 2], gamma: f64, rng: &mut StdRng) {
    for f in u.iter_mut() {
        let (nb, nc) = (f.nb, f.nc);
        for idx in 0..f.cells() {
            let rho = rng.gen_range(1e-3..3.0);
            let p = rng.gen_range(1e-3..3.0);
            let vel: Vec<f64> = (1..nc - 1).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let ke: f64 = vel.iter().map(|v| 0.5 * rho * v * v).sum();
            let mut avg = vec![rho];
            avg.extend(vel.iter().map(|v| rho * v));
            avg.push(p / (gamma - 1.0) + ke);
            let scale = rng.gen_range(0.0..1.5);
            for c in 0..nc {
                f.set(idx, c, 0, avg[c]);
                for l in 1..nb {
                    let size = avg[c].abs().max(rho);
                    f.set(idx, c, l, scale * size * rng.gen_range(-1.0..1.0));
                }
            }
        }
    }
}

pub fn admissible(f: &PolyField, idx: usize, gamma: f64) -> Result<(), String> {
    let nc = f.nc;
    let rho = f.average(idx, 0);
    let ke: f64 = (1..nc - 1).map(|c| f.average(idx, c).powi(2)).sum::<f64>() / (2.0 * rho);
    let p = (gamma - 1.0) * (f.average(idx, nc - 1) - ke);
    if rho > 0.0 && p > 0.0 {
        Ok(())
    } else {
        Err(format!("{:?} cell {idx}: rho = {rho:e}, p = {p:e}", f.family))
    }
}

/// Limit, pick Δt strictly inside the bound and take one Euler step.
pub fn euler_step(
    scheme: &dyn Scheme,
    u: &mut [PolyField; 2],
    rng: &mut StdRng,
    cfl: (f64, f64),
) -> Result<[PolyField; 2], String> {
    let mut report = LimiterReport::new();
    scheme.post_stage(u, 0.0, &mut report).map_err(|e| format!("limiting: {e}"))?;
    let alpha = scheme.alpha(u).map_err(|e| e.to_string())?;
    let ctrl = StepControl {
        cfl: rng.gen_range(cfl.0..cfl.1),
        theta: rng.gen_range(0.05..=1.0),
        ..StepControl::for_degree(scheme.degree(), 1.0)
    };
    let dt =
        compute_dt(alpha, scheme.spacing(), scheme.lobatto_w1(), scheme.dim(), &ctrl).map_err(|e| e.to_string())?;
    let mut l = u.clone();
    scheme.residual(u, dt / ctrl.theta, &mut l).map_err(|e| format!("residual: {e}"))?;
    let mut next = u.clone();
    for f in 0..2 {
        for (i, v) in next[f].data.iter_mut().enumerate() {
            *v += dt * l[f].data[i];
        }
    }
    Ok(next)
}

pub fn scheme_1d(id: &str, k: usize, n: usize) -> Scheme1D {
    let cfg = RunConfig::for_problem(id, &[]).unwrap();
    Scheme1D::new(cfg.problem, k, n, cfg.options).unwrap()
}

pub fn scheme_2d(id: &str, k: usize, n: (usize, usize)) -> Scheme2D {
    let cfg = RunConfig::for_problem(id, &[]).unwrap();
    Scheme2D::new(cfg.problem, k, n, cfg.options).unwrap()
}

pub fn check_1d(s: &Scheme1D, seed: u64, cfl: (f64, f64)) -> Result<(), String> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut u = s.initial_fields().unwrap();
    randomize(&mut u, s.gamma(), &mut rng);
    let next = euler_step(s, &mut u, &mut rng, cfl)?;
    for fam in FAMS {
        for i in s.evolved(fam) {
            admissible(&next[fam.index()], i, s.gamma())?;
        }
    }
    Ok(())
}

pub fn check_2d(s: &Scheme2D, seed: u64, cfl: (f64, f64)) -> Result<(), String> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut u = s.initial_fields().unwrap();
    randomize(&mut u, s.gamma(), &mut rng);
    let next = euler_step(s, &mut u, &mut rng, cfl)?;
    for fam in FAMS {
        let f = &next[fam.index()];
        for j in s.evolved(fam, Dir::Y) {
            for i in s.evolved(fam, Dir::X) {
                admissible(f, f.index(i, j), s.gamma())?;
            }
        }
    }
    Ok(())
}

// Conservation.

/// Steps in a conservation run.
pub const STEPS: usize = 200;

/// Largest relative change of a conserved total over `STEPS` steps.
pub fn drift(id: &str, overrides: &[(&str, &str)]) -> f64 {
    let cfg = RunConfig::for_problem(id, overrides).unwrap();
    let s = build_scheme(&cfg).unwrap();
    let mut u = s.initial_fields().unwrap();
    let start = s.diagnostics(&u).totals;
    let mut t = 0.0;
    for _ in 0..STEPS {
        let alpha = s.alpha(&u).unwrap();
        let dt = compute_dt(alpha, s.spacing(), s.lobatto_w1(), s.dim(), &cfg.control).unwrap();
        ssp_rk3_step(s.as_ref(), &mut u, t, dt, dt / cfg.control.theta, &mut LimiterReport::new()).unwrap();
        t += dt;
    }
    let end = s.diagnostics(&u).totals;
    let mut d: f64 = 0.0;
    for f in 0..2 {
        for c in 0..s.components() {
            d = d.max((end[f][c] - start[f][c]).abs() / start[f][c].abs().max(1.0));
        }
    }
    d
}

// Projection accuracy.

pub fn l2_error_1d(k: usize, n: usize, fam: Family) -> f64 {
    let f = |x: f64| (x.sin() * 2.0).exp();
    let axis = Axis::new(0.0, 2.0, n).unwrap();
    let t = ProjTable1D::new(k, k + 3).unwrap();
    let mut p = field_1d(&axis, fam, k);
    let cells = axis.evolved(fam, false);
    project_1d(&t, &axis, &mut p, cells.clone(), true, |x| [f(x)]);
    let mut e = 0.0;
    for s in cells {
        let c = axis.center(fam, s);
        e += simpson(c - 0.5 * axis.h, c + 0.5 * axis.h, 200, |x| {
            (f(x) - value_1d(&p, s, 0, k, 2.0 * (x - c) / axis.h)).powi(2)
        });
    }
    e.sqrt()
}

pub fn l2_error_2d(k: usize, n: usize, fam: Family) -> f64 {
    let f = |x: f64, y: f64| (x.sin() + 0.5 * (2.0 * y).cos()).exp();
    let mesh = Mesh2D::new((0.0, 1.0, n), (0.0, 1.0, n)).unwrap();
    let t = ProjTable2D::new(k, k + 3).unwrap();
    let nb = cdg::basis::Basis2D::new(k).len();
    let mut p = PolyField::zeros(fam, mesh.x.len(fam), mesh.y.len(fam), nb, 1);
    let (ex, ey) = (mesh.x.evolved(fam, false), mesh.y.evolved(fam, false));
    let cells: Vec<_> = ey.flat_map(|j| ex.clone().map(move |i| (i, j))).collect();
    project_2d(&t, &mesh, &mut p, cells.iter().copied(), true, |x, y| [f(x, y)]);
    let mut e = 0.0;
    for &(i, j) in &cells {
        let (cx, cy) = (mesh.x.center(fam, i), mesh.y.center(fam, j));
        let (hx, hy) = (0.5 * mesh.x.h, 0.5 * mesh.y.h);
        e += simpson_2d((cx - hx, cx + hx), (cy - hy, cy + hy), 16, |x, y| {
            (f(x, y) - value_2d(&p, p.index(i, j), 0, k, (x - cx) / hx, (y - cy) / hy)).powi(2)
        });
    }
    e.sqrt()
}

pub fn final_order(errors: &[f64]) -> f64 {
    let n = errors.len();
    (errors[n - 2] / errors[n - 1]).log2()
}

// Projection properties.

pub fn field_1d(axis: &Axis, fam: Family, k: usize) -> PolyField {
    PolyField::zeros(fam, axis.len(fam), 1, k + 1, 1)
}

/// Cells projected in the 1D checks: every cell whose halves lie inside the storage.
pub fn cells_1d(axis: &Axis, fam: Family) -> std::ops::Range<usize> {
    match fam {
        Family::Primal => 2..axis.n + 2,
        Family::Dual => 2..axis.n + 3,
    }
}

/// Random function: a few Fourier modes plus a cubic.
#[derive(Debug, Clone)]
pub struct RandFn {
    pub amps: Vec<(f64, f64, f64)>,
    pub poly: [f64; 4],
}

impl RandFn {
    pub fn eval(&self, x: f64) -> f64 {
        let mut v = self.poly[0] + x * (self.poly[1] + x * (self.poly[2] + x * self.poly[3]));
        for &(a, w, p) in &self.amps {
            v += a * (w * x + p).sin();
        }
        v
    }

    pub fn random(rng: &mut StdRng) -> RandFn {
        let n = rng.gen_range(1..5);
        RandFn {
            amps: (0..n)
                .map(|_| (rng.gen_range(-2.0..2.0), rng.gen_range(0.5..40.0), rng.gen_range(0.0..6.3)))
                .collect(),
            poly: std::array::from_fn(|_| rng.gen_range(-3.0..3.0)),
        }
    }
}

fn project(k: usize, axis: &Axis, fam: Family, f: impl Fn(f64) -> f64) -> PolyField {
    let t = ProjTable1D::new(k, k + 3).unwrap();
    let mut p = field_1d(axis, fam, k);
    project_1d(&t, axis, &mut p, cells_1d(axis, fam), true, |x| [f(x)]);
    p
}

/// Largest relative deviation of P(af + bg) from aPf + bPg.
pub fn linearity_dev(k: usize, f: &RandFn, g: &RandFn, a: f64, b: f64) -> f64 {
    let axis = Axis::new(-1.0, 1.0, 7).unwrap();
    let mut dev: f64 = 0.0;
    for fam in FAMS {
        let pf = project(k, &axis, fam, |x| f.eval(x));
        let pg = project(k, &axis, fam, |x| g.eval(x));
        let ph = project(k, &axis, fam, |x| a * f.eval(x) + b * g.eval(x));
        for i in 0..ph.data.len() {
            let lin = a * pf.data[i] + b * pg.data[i];
            dev = dev.max((ph.data[i] - lin).abs() / (1.0 + lin.abs()));
        }
    }
    dev
}

/// Largest relative change of the coefficients when projecting Pf again.
pub fn idempotence_dev(k: usize, f: &RandFn) -> f64 {
    let axis = Axis::new(0.0, 3.0, 6).unwrap();
    let t = ProjTable1D::new(k, k + 3).unwrap();
    let mut dev: f64 = 0.0;
    for fam in FAMS {
        let p = project(k, &axis, fam, |x| f.eval(x));
        for s in cells_1d(&axis, fam) {
            let mut q = field_1d(&axis, fam, k);
            let c = axis.center(fam, s);
            project_1d(&t, &axis, &mut q, s..s + 1, true, |x| [value_1d(&p, s, 0, k, 2.0 * (x - c) / axis.h)]);
            for l in 0..=k {
                dev = dev.max((q.coef(s, 0, l) - p.coef(s, 0, l)).abs() / (1.0 + p.coef(s, 0, l).abs()));
            }
        }
    }
    dev
}

/// M = k + (2√6/3)(k + 1).
pub fn bound_constant(k: usize) -> f64 {
    k as f64 + 2.0 * 6f64.sqrt() / 3.0 * (k + 1) as f64
}

/// Largest per-cell ratio ‖Pf‖ / (M ‖f‖) in L², by composite Simpson.
pub fn bound_ratio(k: usize, f: &RandFn) -> f64 {
    let m = bound_constant(k);
    let axis = Axis::new(0.0, 1.0, 5).unwrap();
    let mut worst: f64 = 0.0;
    for fam in FAMS {
        let p = project(k, &axis, fam, |x| f.eval(x));
        for s in cells_1d(&axis, fam) {
            let c = axis.center(fam, s);
            let (a, b) = (c - 0.5 * axis.h, c + 0.5 * axis.h);
            let nf = simpson(a, b, 2000, |x| f.eval(x).powi(2)).sqrt();
            let np = simpson(a, b, 2000, |x| value_1d(&p, s, 0, k, 2.0 * (x - c) / axis.h).powi(2)).sqrt();
            worst = worst.max(np / (m * nf));
        }
    }
    worst
}

/// Largest relative mismatch of half-cell means for cubic data.
pub fn half_mean_dev(k: usize, poly: [f64; 4]) -> f64 {
    let f = RandFn { amps: Vec::new(), poly };
    let axis = Axis::new(-0.5, 0.5, 6).unwrap();
    let mut dev: f64 = 0.0;
    for fam in FAMS {
        let p = project(k, &axis, fam, |x| f.eval(x));
        for s in cells_1d(&axis, fam) {
            let c = axis.center(fam, s);
            for (a, b) in [(c - 0.5 * axis.h, c), (c, c + 0.5 * axis.h)] {
                // cubic integrands: two Simpson panels are exact
                let exact = simpson(a, b, 2, |x| f.eval(x));
                let proj = simpson(a, b, 2, |x| value_1d(&p, s, 0, k, 2.0 * (x - c) / axis.h));
                dev = dev.max((exact - proj).abs() / (1.0 + exact.abs()));
            }
        }
    }
    dev
}

/// Largest mismatch between a cell average on one mesh and the half-cell
/// averages of the other mesh's projection over the same cell (1D, k = 1..3).
pub fn average_identity_1d_dev() -> f64 {
    let f = |x: f64| (3.0 * x).sin() + x * x;
    let mut dev: f64 = 0.0;
    for k in 1..=3 {
        let axis = Axis::new(0.0, 2.0, 12).unwrap();
        let t = ProjTable1D::new(k, k + 3).unwrap();
        let mut c = field_1d(&axis, Family::Primal, k);
        let mut d = field_1d(&axis, Family::Dual, k);
        project_1d(&t, &axis, &mut c, 1..axis.n + 3, true, |x| [f(x)]);
        project_1d(&t, &axis, &mut d, 1..axis.n + 4, true, |x| [f(x)]);
        let half = |p: &PolyField, s: usize, lo: bool| {
            let (a, b) = if lo { (-1.0, 0.0) } else { (0.0, 1.0) };
            simpson(a, b, 2, |xi| value_1d(p, s, 0, k, xi)) / 2.0
        };
        // dual s covers the right half of primal s - 1 and the left half of primal s
        for s in 2..axis.n + 3 {
            dev = dev.max((half(&c, s - 1, false) + half(&c, s, true) - d.average(s, 0)).abs());
        }
        for s in 2..axis.n + 2 {
            dev = dev.max((half(&d, s, false) + half(&d, s + 1, true) - c.average(s, 0)).abs());
        }
    }
    dev
}

/// The same identity in 2D: four quadrants of primal cells against a dual cell (k = 2, 3).
pub fn average_identity_2d_dev() -> f64 {
    let f = |x: f64, y: f64| [(2.0 * x + y).sin() + x * y];
    let mut dev: f64 = 0.0;
    for k in 2..=3 {
        let mesh = Mesh2D::new((0.0, 1.0, 5), (0.0, 2.0, 4)).unwrap();
        let t = ProjTable2D::new(k, k + 3).unwrap();
        let nb = Basis2D::new(k).len();
        let mut c = PolyField::zeros(Family::Primal, mesh.x.len(Family::Primal), mesh.y.len(Family::Primal), nb, 1);
        let mut d = PolyField::zeros(Family::Dual, mesh.x.len(Family::Dual), mesh.y.len(Family::Dual), nb, 1);
        let all = |fam: Family| {
            let (lx, ly) = (mesh.x.len(fam), mesh.y.len(fam));
            (1..ly - 1).flat_map(move |j| (1..lx - 1).map(move |i| (i, j)))
        };
        project_2d(&t, &mesh, &mut c, all(Family::Primal), true, f);
        project_2d(&t, &mesh, &mut d, all(Family::Dual), true, f);
        let quad = |p: &PolyField, i: usize, j: usize, qx: usize, qy: usize| {
            let xr = if qx == 0 { (-1.0, 0.0) } else { (0.0, 1.0) };
            let yr = if qy == 0 { (-1.0, 0.0) } else { (0.0, 1.0) };
            simpson_2d(xr, yr, 4, |xi, eta| value_2d(p, p.index(i, j), 0, k, xi, eta)) / 4.0
        };
        for j in 2..mesh.y.n + 3 {
            for i in 2..mesh.x.n + 3 {
                let mut s = 0.0;
                for (di, qx) in [(1usize, 1usize), (0, 0)] {
                    for (dj, qy) in [(1usize, 1usize), (0, 0)] {
                        s += quad(&c, i - di, j - dj, qx, qy);
                    }
                }
                dev = dev.max((s - d.average(d.index(i, j), 0)).abs());
            }
        }
    }
    dev
}

/// Smallest final order over k = 1..3 (1D) and k = 2, 3 (2D), both families.
pub fn projection_orders() -> (f64, f64) {
    let mut o1 = f64::INFINITY;
    let mut o2 = f64::INFINITY;
    for fam in FAMS {
        for k in 1..=3 {
            let e: Vec<f64> = [8, 16, 32, 64].iter().map(|&n| l2_error_1d(k, n, fam)).collect();
            o1 = o1.min(final_order(&e) - k as f64);
        }
        for k in 2..=3 {
            let e: Vec<f64> = [4, 8, 16, 32].iter().map(|&n| l2_error_2d(k, n, fam)).collect();
            o2 = o2.min(final_order(&e) - k as f64);
        }
    }
    (o1, o2)
}
