//! Standard L² projection and the half-cell (quadrant) mean preserving
//! projection used for equilibria, initial data and dual ghost cells.
//!
//! The projection keeps every L² moment except the linear one(s), which are
//! fixed so that the means over the left half (1D) or the four quadrants (2D)
//! match those of the projected function. Projected primal and dual fields of
//! the same function then share their averages over every cell of either mesh.

use crate::basis::{Basis1D, Basis2D};
use crate::error::{CdgError, Result};
use crate::field::{eval_cell, PolyField};
use crate::mesh::{half_point, Axis, Mesh2D};
use crate::quadrature::gauss_reference;

/// Half-cell Gauss samples of a cell in reference coordinates.
#[derive(Debug, Clone)]
pub struct ProjTable1D {
    pub k: usize,
    pub nq: usize,
    pub w: Vec<f64>,
    /// `xi[κ * nq + α]`.
    pub xi: Vec<f64>,
    /// `phi[(κ * nq + α) * nb + l]`.
    pub phi: Vec<f64>,
    pub norm: Vec<f64>,
}

impl ProjTable1D {
    pub fn new(k: usize, nq: usize) -> Result<ProjTable1D> {
        if k == 0 {
            return Err(CdgError::config("the half-cell projection needs degree k >= 1"));
        }
        let rule = gauss_reference(nq)?;
        let basis = Basis1D::new(k);
        let mut xi = Vec::new();
        let mut phi = Vec::new();
        for kappa in 0..2 {
            for &g in &rule.nodes {
                let x = half_point(kappa, g);
                xi.push(x);
                phi.extend(basis.values(x));
            }
        }
        Ok(ProjTable1D { k, nq, w: rule.weights, xi, phi, norm: (0..=k).map(|l| basis.norm_sq(l)).collect() })
    }

    pub fn nb(&self) -> usize {
        self.k + 1
    }

    /// Coefficients from samples `g[(κ nq + α) * nc + c]`.
    pub fn coefficients(&self, g: &[f64], nc: usize, novel: bool, out: &mut [f64]) {
        let nb = self.nb();
        let nq = self.nq;
        for c in 0..nc {
            let co = &mut out[c * nb..(c + 1) * nb];
            for l in 0..nb {
                let mut m = 0.0;
                for p in 0..2 * nq {
                    m += self.w[p % nq] * g[p * nc + c] * self.phi[p * nb + l];
                }
                co[l] = m / self.norm[l];
            }
            if novel {
                let mut left = 0.0;
                for a in 0..nq {
                    let mut v = g[a * nc + c];
                    for l in 0..nb {
                        if l != 1 {
                            v -= co[l] * self.phi[a * nb + l];
                        }
                    }
                    left += self.w[a] * v;
                }
                // the reference left half has unit length and ∫ξ over it is -1/2
                co[1] = -2.0 * left;
            }
        }
    }
}

/// Quadrant Gauss samples of a cell in reference coordinates.
#[derive(Debug, Clone)]
pub struct ProjTable2D {
    pub k: usize,
    pub nq: usize,
    pub nb: usize,
    pub w: Vec<f64>,
    /// Points ordered by quadrant q = κ + 2τ, then β (η index), then α (ξ index).
    pub pts: Vec<(f64, f64)>,
    pub wts: Vec<f64>,
    pub phi: Vec<f64>,
    pub norm: Vec<f64>,
    /// `wphi[p * nb + l] = wts[p] φ_l(p) / ‖φ_l‖²`.
    wphi: Vec<f64>,
    /// `qint[q * nb + l]`: weighted sum of φ_l over quadrant q.
    qint: Vec<f64>,
}

impl ProjTable2D {
    pub fn new(k: usize, nq: usize) -> Result<ProjTable2D> {
        if k < 2 {
            return Err(CdgError::config("two-dimensional runs need degree k >= 2"));
        }
        let rule = gauss_reference(nq)?;
        let basis = Basis2D::new(k);
        let mut pts = Vec::new();
        let mut wts = Vec::new();
        let mut phi = Vec::new();
        for q in 0..4 {
            let (kappa, tau) = (q % 2, q / 2);
            for (b, &gy) in rule.nodes.iter().enumerate() {
                for (a, &gx) in rule.nodes.iter().enumerate() {
                    let p = (half_point(kappa, gx), half_point(tau, gy));
                    pts.push(p);
                    wts.push(rule.weights[a] * rule.weights[b]);
                    phi.extend(basis.values(p.0, p.1));
                }
            }
        }
        let nb = basis.len();
        let norm: Vec<f64> = (0..nb).map(|l| basis.norm_sq(l)).collect();
        let pq = nq * nq;
        let mut wphi = vec![0.0; pts.len() * nb];
        let mut qint = vec![0.0; 4 * nb];
        for p in 0..pts.len() {
            for l in 0..nb {
                wphi[p * nb + l] = wts[p] * phi[p * nb + l] / norm[l];
                qint[(p / pq) * nb + l] += wts[p] * phi[p * nb + l];
            }
        }
        Ok(ProjTable2D { k, nq, nb, w: rule.weights, pts, wts, phi, norm, wphi, qint })
    }

    pub fn per_quadrant(&self) -> usize {
        self.nq * self.nq
    }

    /// Coefficients from samples `g[p * nc + c]` in the order of `pts`.
    pub fn coefficients(&self, g: &[f64], nc: usize, novel: bool, out: &mut [f64]) {
        let nb = self.nb;
        let pq = self.per_quadrant();
        out[..nc * nb].fill(0.0);
        // quadrant sums of the samples, per component
        let mut gq = [[0.0; 4]; 4];
        for (p, row) in self.wphi.chunks_exact(nb).enumerate() {
            for c in 0..nc {
                let v = g[p * nc + c];
                for (o, r) in out[c * nb..(c + 1) * nb].iter_mut().zip(row) {
                    *o += v * r;
                }
                gq[c][p / pq] += self.wts[p] * v;
            }
        }
        if !novel {
            return;
        }
        for c in 0..nc {
            let co = &mut out[c * nb..(c + 1) * nb];
            let mut quad = gq[c];
            for (q, qv) in quad.iter_mut().enumerate() {
                for l in (0..nb).filter(|l| !(1..=3).contains(l)) {
                    *qv -= co[l] * self.qint[q * nb + l];
                }
            }
            // quadrant (sx, sy): ∫ξ = sx/2, ∫η = sy/2, ∫ξη = sx sy/4 in reference units
            let sx = [-1.0, 1.0, -1.0, 1.0];
            let sy = [-1.0, -1.0, 1.0, 1.0];
            let (mut a1, mut a2, mut a3) = (0.0, 0.0, 0.0);
            for q in 0..4 {
                a1 += sx[q] * quad[q];
                a2 += sy[q] * quad[q];
                a3 += sx[q] * sy[q] * quad[q];
            }
            co[1] = 0.5 * a1;
            co[2] = 0.5 * a2;
            co[3] = a3;
        }
    }
}

/// Project `f` on the cells `cells` of a one-dimensional family.
pub fn project_1d<const NC: usize>(
    table: &ProjTable1D,
    axis: &Axis,
    field: &mut PolyField,
    cells: impl Iterator<Item = usize>,
    novel: bool,
    f: impl Fn(f64) -> [f64; NC],
) {
    let mut g = vec![0.0; 2 * table.nq * NC];
    let fam = field.family;
    for s in cells {
        for (p, &xi) in table.xi.iter().enumerate() {
            let v = f(axis.coord(fam, s, xi));
            g[p * NC..(p + 1) * NC].copy_from_slice(&v);
        }
        table.coefficients(&g, NC, novel, field.cell_mut(s));
    }
}

/// Project `f` on the listed cells `(si, sj)` of a two-dimensional family.
pub fn project_2d<const NC: usize>(
    table: &ProjTable2D,
    mesh: &Mesh2D,
    field: &mut PolyField,
    cells: impl Iterator<Item = (usize, usize)>,
    novel: bool,
    f: impl Fn(f64, f64) -> [f64; NC],
) {
    let mut g = vec![0.0; table.pts.len() * NC];
    let fam = field.family;
    for (si, sj) in cells {
        for (p, &(xi, eta)) in table.pts.iter().enumerate() {
            let v = f(mesh.x.coord(fam, si, xi), mesh.y.coord(fam, sj, eta));
            g[p * NC..(p + 1) * NC].copy_from_slice(&v);
        }
        let idx = field.index(si, sj);
        table.coefficients(&g, NC, novel, field.cell_mut(idx));
    }
}

/// Re-project the piecewise polynomial of the opposite family onto cell `s`.
///
/// `table` must use `k + 1` points per half so that the moments are exact.
pub fn map_from_opposite_1d(table: &ProjTable1D, src: &PolyField, s: usize, out: &mut [f64]) {
    let nb = src.nb;
    let nc = src.nc;
    let nq = table.nq;
    let basis = Basis1D::new(table.k);
    let off = src.family.opposite().offset();
    let mut g = vec![0.0; 2 * nq * nc];
    let mut v = vec![0.0; nc];
    for kappa in 0..2 {
        let so = (s as isize + kappa as isize + off) as usize;
        for a in 0..nq {
            let p = kappa * nq + a;
            let xo = table.xi[p] + 1.0 - 2.0 * kappa as f64;
            eval_cell(src.cell(so), nb, &basis.values(xo), &mut v);
            g[p * nc..(p + 1) * nc].copy_from_slice(&v);
        }
    }
    table.coefficients(&g, nc, true, out);
}

/// Two-dimensional analogue of [`map_from_opposite_1d`] for cell `(si, sj)`.
pub fn map_from_opposite_2d(table: &ProjTable2D, src: &PolyField, si: usize, sj: usize, out: &mut [f64]) {
    let nb = src.nb;
    let nc = src.nc;
    let basis = Basis2D::new(table.k);
    let off = src.family.opposite().offset();
    let pq = table.per_quadrant();
    let mut g = vec![0.0; table.pts.len() * nc];
    let mut v = vec![0.0; nc];
    for q in 0..4 {
        let (kappa, tau) = (q % 2, q / 2);
        let oi = (si as isize + kappa as isize + off) as usize;
        let oj = (sj as isize + tau as isize + off) as usize;
        let cell = src.cell(src.index(oi, oj));
        for p in q * pq..(q + 1) * pq {
            let (xi, eta) = table.pts[p];
            let xo = xi + 1.0 - 2.0 * kappa as f64;
            let yo = eta + 1.0 - 2.0 * tau as f64;
            eval_cell(cell, nb, &basis.values(xo, yo), &mut v);
            g[p * nc..(p + 1) * nc].copy_from_slice(&v);
        }
    }
    table.coefficients(&g, nc, true, out);
}
