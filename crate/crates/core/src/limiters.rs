//! Positivity-preserving scaling limiter, TVB-corrected minmod detector and the
//! characteristic-wise WENO reconstruction applied to perturbations.

use crate::error::CdgError;
use crate::field::eval_cell;

/// Pressure of a conservative state with any number of momentum components.
#[inline]
pub fn pressure_n(u: &[f64], gamma: f64) -> f64 {
    let n = u.len();
    let mut m2 = 0.0;
    for &m in &u[1..n - 1] {
        m2 += m * m;
    }
    (gamma - 1.0) * (u[n - 1] - 0.5 * m2 / u[0])
}

/// Per-stage limiter statistics.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize)]
pub struct LimiterReport {
    pub density_limited: usize,
    pub pressure_limited: usize,
    pub troubled: usize,
    pub min_theta1: f64,
    pub min_theta2: f64,
}

impl LimiterReport {
    pub fn new() -> LimiterReport {
        LimiterReport { min_theta1: 1.0, min_theta2: 1.0, ..Default::default() }
    }

    pub fn merge(&mut self, o: &LimiterReport) {
        self.density_limited += o.density_limited;
        self.pressure_limited += o.pressure_limited;
        self.troubled += o.troubled;
        self.min_theta1 = self.min_theta1.min(o.min_theta1);
        self.min_theta2 = self.min_theta2.min(o.min_theta2);
    }
}

/// Scaling limiter on one cell. `crit_phi` holds the basis values at the
/// critical points, `npts * nb` entries. Returns an error message if the
/// cell average itself is inadmissible.
pub fn pp_cell(
    cell: &mut [f64],
    nb: usize,
    nc: usize,
    crit_phi: &[f64],
    gamma: f64,
    report: &mut LimiterReport,
) -> std::result::Result<(), String> {
    let npts = crit_phi.len() / nb;
    let mut avg = [0.0; 4];
    for c in 0..nc {
        avg[c] = cell[c * nb];
    }
    let avg = &avg[..nc];
    let rho_bar = avg[0];
    let p_bar = if rho_bar > 0.0 { pressure_n(avg, gamma) } else { f64::NAN };
    if !(rho_bar > 0.0 && p_bar > 0.0) {
        return Err(format!("inadmissible cell average rho={rho_bar:e} p={p_bar:e}"));
    }
    let eps1 = 1e-13f64.min(rho_bar);
    let eps2 = 1e-13f64.min(p_bar);
    let mut v = [0.0; 4];
    let (r0, p0) = cell_minima(cell, nb, nc, crit_phi, gamma);
    if r0 >= eps1 && p0 >= eps2 {
        return Ok(());
    }
    for _attempt in 0..3 {
        let mut min_rho = f64::INFINITY;
        for p in 0..npts {
            let phi = &crit_phi[p * nb..(p + 1) * nb];
            let mut s = 0.0;
            for l in 0..nb {
                s += cell[l] * phi[l];
            }
            min_rho = min_rho.min(s);
        }
        if min_rho < eps1 {
            let theta = ((rho_bar - eps1) / (rho_bar - min_rho)).clamp(0.0, 1.0);
            if theta < 1.0 {
                for l in 1..nb {
                    cell[l] *= theta;
                }
                report.density_limited += 1;
                report.min_theta1 = report.min_theta1.min(theta);
            }
        }
        let mut min_p = f64::INFINITY;
        for p in 0..npts {
            eval_cell(cell, nb, &crit_phi[p * nb..(p + 1) * nb], &mut v[..nc]);
            let pr = if v[0] > 0.0 { pressure_n(&v[..nc], gamma) } else { f64::NEG_INFINITY };
            min_p = min_p.min(pr);
        }
        if min_p < eps2 {
            let theta = if min_p.is_finite() { ((p_bar - eps2) / (p_bar - min_p)).clamp(0.0, 1.0) } else { 0.0 };
            if theta < 1.0 {
                for c in 0..nc {
                    for l in 1..nb {
                        cell[c * nb + l] *= theta;
                    }
                }
                report.pressure_limited += 1;
                report.min_theta2 = report.min_theta2.min(theta);
            }
        } else if min_rho >= eps1 {
            return Ok(());
        }
    }
    Ok(())
}

/// Minimum density and pressure over the critical points of a cell.
pub fn cell_minima(cell: &[f64], nb: usize, nc: usize, crit_phi: &[f64], gamma: f64) -> (f64, f64) {
    match (nb, nc) {
        (3, 3) => minima_fixed::<3, 3>(cell, crit_phi, gamma),
        (4, 3) => minima_fixed::<4, 3>(cell, crit_phi, gamma),
        (6, 4) => minima_fixed::<6, 4>(cell, crit_phi, gamma),
        (10, 4) => minima_fixed::<10, 4>(cell, crit_phi, gamma),
        _ => {
            let npts = crit_phi.len() / nb;
            let mut v = [0.0; 4];
            let (mut rmin, mut pmin) = (f64::INFINITY, f64::INFINITY);
            for p in 0..npts {
                eval_cell(cell, nb, &crit_phi[p * nb..(p + 1) * nb], &mut v[..nc]);
                rmin = rmin.min(v[0]);
                pmin = pmin.min(if v[0] > 0.0 { pressure_n(&v[..nc], gamma) } else { f64::NEG_INFINITY });
            }
            (rmin, pmin)
        }
    }
}

#[inline(always)]
fn minima_fixed<const NB: usize, const NC: usize>(cell: &[f64], crit_phi: &[f64], gamma: f64) -> (f64, f64) {
    let co: [[f64; NB]; NC] = std::array::from_fn(|c| cell[c * NB..(c + 1) * NB].try_into().unwrap());
    let (mut rmin, mut pmin) = (f64::INFINITY, f64::INFINITY);
    for phi in crit_phi.chunks_exact(NB) {
        let phi: &[f64; NB] = phi.try_into().unwrap();
        let mut v = [0.0; NC];
        for c in 0..NC {
            for l in 0..NB {
                v[c] += co[c][l] * phi[l];
            }
        }
        let mut m2 = 0.0;
        for m in &v[1..NC - 1] {
            m2 += m * m;
        }
        let p = if v[0] > 0.0 { (gamma - 1.0) * (v[NC - 1] - 0.5 * m2 / v[0]) } else { f64::NEG_INFINITY };
        rmin = rmin.min(v[0]);
        pmin = pmin.min(p);
    }
    (rmin, pmin)
}

/// Map a limiter failure to a positivity fault.
pub fn fault(family: &'static str, cell: usize, detail: String) -> CdgError {
    CdgError::Positivity { family, cell, detail }
}

/// TVB-corrected minmod: `a[0]` when `|a[0]| <= M h²`, else the classical minmod.
pub fn tvb_minmod(a: &[f64], m: f64, h: f64) -> f64 {
    if a[0].abs() <= m * h * h {
        return a[0];
    }
    minmod(a)
}

pub fn minmod(a: &[f64]) -> f64 {
    let s = a[0].signum();
    if a.iter().all(|&x| x.signum() == s && x != 0.0) {
        s * a.iter().fold(f64::INFINITY, |m, &x| m.min(x.abs()))
    } else {
        0.0
    }
}

/// Whether the endpoint deviations of a cell survive the TVB-corrected minmod.
///
/// `plus`, `minus`: deviations of the right and left traces from the average;
/// `fwd`, `bwd`: forward and backward differences of neighbor averages.
pub fn troubled(plus: f64, minus: f64, fwd: f64, bwd: f64, m: f64, h: f64) -> bool {
    tvb_minmod(&[plus, fwd, bwd], m, h) != plus || tvb_minmod(&[minus, fwd, bwd], m, h) != minus
}

/// Linear and nonlinear weights of the three-stencil reconstruction.
const LINEAR_WEIGHTS: [f64; 3] = [0.1, 0.8, 0.1];
const WENO_EPS: f64 = 1e-6;

/// WENO combination of the linear and quadratic modal coefficients from
/// neighbor average differences `d[m + 2] = ū_{m} - ū_0`, m = -2..2.
pub fn weno_coefficients(d: &[f64; 5]) -> (f64, f64) {
    let (dm2, dm1, d1, d2) = (d[0], d[1], d[3], d[4]);
    let left_c2 = (dm2 - 2.0 * dm1) / 8.0;
    let left = ((4.0 * left_c2 - dm1) / 2.0, left_c2);
    let center = ((d1 - dm1) / 4.0, (d1 + dm1) / 8.0);
    let right_c2 = (d2 - 2.0 * d1) / 8.0;
    let right = ((d1 - 4.0 * right_c2) / 2.0, right_c2);
    let cands = [left, center, right];
    let mut w = [0.0; 3];
    let mut sum = 0.0;
    for i in 0..3 {
        let (c1, c2) = cands[i];
        let beta = 4.0 * c1 * c1 + (16.0 / 3.0 + 64.0) * c2 * c2;
        w[i] = LINEAR_WEIGHTS[i] / (WENO_EPS + beta).powi(2);
        sum += w[i];
    }
    let (mut c1, mut c2) = (0.0, 0.0);
    for i in 0..3 {
        c1 += w[i] / sum * cands[i].0;
        c2 += w[i] / sum * cands[i].1;
    }
    (c1, c2)
}

/// Right and left eigenvector matrices of the x-flux Jacobian, row-major
/// `nc x nc`, at an admissible state with 1 or 2 momentum components.
/// `dir` selects the normal momentum component (0 for x, 1 for y).
pub fn eigensystem(u: &[f64], gamma: f64, dir: usize) -> Option<(Vec<f64>, Vec<f64>)> {
    let nc = u.len();
    let rho = u[0];
    let p = pressure_n(u, gamma);
    if !(rho > 0.0 && p > 0.0) {
        return None;
    }
    let c = (gamma * p / rho).sqrt();
    let h = (u[nc - 1] + p) / rho;
    let b1 = (gamma - 1.0) / (c * c);
    if nc == 3 {
        let v = u[1] / rho;
        let b2 = 0.5 * b1 * v * v;
        let r = vec![1.0, 1.0, 1.0, v - c, v, v + c, h - v * c, 0.5 * v * v, h + v * c];
        let l = vec![
            0.5 * (b2 + v / c),
            -0.5 * (b1 * v + 1.0 / c),
            0.5 * b1,
            1.0 - b2,
            b1 * v,
            -b1,
            0.5 * (b2 - v / c),
            -0.5 * (b1 * v - 1.0 / c),
            0.5 * b1,
        ];
        return Some((r, l));
    }
    // normal (un) and tangential (ut) velocities; solve in (ρ, m_n, m_t, E) order
    let (n_idx, t_idx) = if dir == 0 { (1, 2) } else { (2, 1) };
    let un = u[n_idx] / rho;
    let ut = u[t_idx] / rho;
    let b2 = 0.5 * b1 * (un * un + ut * ut);
    let rl = [
        [1.0, 1.0, 0.0, 1.0],
        [un - c, un, 0.0, un + c],
        [ut, ut, 1.0, ut],
        [h - un * c, 0.5 * (un * un + ut * ut), ut, h + un * c],
    ];
    let ll = [
        [0.5 * (b2 + un / c), -0.5 * (b1 * un + 1.0 / c), -0.5 * b1 * ut, 0.5 * b1],
        [1.0 - b2, b1 * un, b1 * ut, -b1],
        [-ut, 0.0, 1.0, 0.0],
        [0.5 * (b2 - un / c), -0.5 * (b1 * un - 1.0 / c), -0.5 * b1 * ut, 0.5 * b1],
    ];
    // permutation from local (ρ, m_n, m_t, E) to storage order
    let perm = [0, n_idx, t_idx, 3];
    let mut r = vec![0.0; 16];
    let mut l = vec![0.0; 16];
    for i in 0..4 {
        for j in 0..4 {
            // R maps characteristic j to conservative row perm[i]
            r[perm[i] * 4 + j] = rl[i][j];
            // L maps conservative column perm[j] to characteristic i
            l[i * 4 + perm[j]] = ll[i][j];
        }
    }
    Some((r, l))
}
