//! Piecewise-polynomial coefficient storage for one mesh family.

use crate::mesh::Family;

/// Modal coefficients of every stored cell (ghosts included).
///
/// Layout: `data[(cell * nc + c) * nb + l]` for component `c` and basis index `l`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyField {
    pub family: Family,
    /// Storage extent in x and y (y = 1 in one dimension).
    pub nx: usize,
    pub ny: usize,
    /// Basis functions per component.
    pub nb: usize,
    /// Conservative components.
    pub nc: usize,
    pub data: Vec<f64>,
}

impl PolyField {
    pub fn zeros(family: Family, nx: usize, ny: usize, nb: usize, nc: usize) -> PolyField {
        PolyField { family, nx, ny, nb, nc, data: vec![0.0; nx * ny * nb * nc] }
    }

    pub fn cells(&self) -> usize {
        self.nx * self.ny
    }

    #[inline]
    pub fn stride(&self) -> usize {
        self.nb * self.nc
    }

    #[inline]
    pub fn cell(&self, idx: usize) -> &[f64] {
        let s = self.stride();
        &self.data[idx * s..(idx + 1) * s]
    }

    #[inline]
    pub fn cell_mut(&mut self, idx: usize) -> &mut [f64] {
        let s = self.stride();
        &mut self.data[idx * s..(idx + 1) * s]
    }

    #[inline]
    pub fn coef(&self, idx: usize, c: usize, l: usize) -> f64 {
        self.data[(idx * self.nc + c) * self.nb + l]
    }

    #[inline]
    pub fn set(&mut self, idx: usize, c: usize, l: usize, v: f64) {
        let nb = self.nb;
        let nc = self.nc;
        self.data[(idx * nc + c) * nb + l] = v;
    }

    /// Cell average of component `c` (the Φ₀ coefficient).
    #[inline]
    pub fn average(&self, idx: usize, c: usize) -> f64 {
        self.coef(idx, c, 0)
    }

    #[inline]
    pub fn index(&self, si: usize, sj: usize) -> usize {
        sj * self.nx + si
    }
}

/// Evaluate every component of a cell at one point given the basis values there.
#[inline]
pub fn eval_cell(cell: &[f64], nb: usize, phi: &[f64], out: &mut [f64]) {
    match nb {
        3 => eval_fixed::<3>(cell, phi, out),
        4 => eval_fixed::<4>(cell, phi, out),
        6 => eval_fixed::<6>(cell, phi, out),
        10 => eval_fixed::<10>(cell, phi, out),
        _ => {
            let phi = &phi[..nb];
            for (o, co) in out.iter_mut().zip(cell.chunks_exact(nb)) {
                *o = co.iter().zip(phi).fold(0.0, |s, (a, b)| s + a * b);
            }
        }
    }
}

#[inline(always)]
fn eval_fixed<const NB: usize>(cell: &[f64], phi: &[f64], out: &mut [f64]) {
    let phi: &[f64; NB] = phi[..NB].try_into().unwrap();
    for (o, co) in out.iter_mut().zip(cell.chunks_exact(NB)) {
        let co: &[f64; NB] = co.try_into().unwrap();
        let mut s = 0.0;
        for l in 0..NB {
            s += co[l] * phi[l];
        }
        *o = s;
    }
}
