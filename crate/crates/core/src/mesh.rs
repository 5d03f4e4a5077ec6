//! Overlapping primal/dual uniform meshes and reference point sets.
//!
//! Storage indices carry a ghost layer of two cells. Primal storage `s` holds
//! cell `j = s - 2` centered at `x_min + (j + 1/2)Δx` (length `N + 4`); dual
//! storage `s` holds cell `d = s - 2` centered at `x_min + dΔx` (length `N + 5`).

use crate::error::{CdgError, Result};
use crate::quadrature::{gauss_reference, lobatto_count, lobatto_reference};

/// Number of ghost cells on each side of the primal mesh.
pub const GHOST: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Primal,
    Dual,
}

impl Family {
    /// Index shift from the own half to the opposite cell: `s + κ + offset`.
    #[inline]
    pub fn offset(self) -> isize {
        match self {
            Family::Primal => 0,
            Family::Dual => -1,
        }
    }

    pub fn opposite(self) -> Family {
        match self {
            Family::Primal => Family::Dual,
            Family::Dual => Family::Primal,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Primal => "primal",
            Family::Dual => "dual",
        }
    }

    pub fn index(self) -> usize {
        match self {
            Family::Primal => 0,
            Family::Dual => 1,
        }
    }
}

/// Uniform partition of one coordinate axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub n: usize,
    pub h: f64,
}

impl Axis {
    pub fn new(min: f64, max: f64, n: usize) -> Result<Axis> {
        if n < 2 {
            return Err(CdgError::config(format!("need at least 2 cells per axis, got {n}")));
        }
        if !(max > min) || !min.is_finite() || !max.is_finite() {
            return Err(CdgError::config(format!("invalid extent [{min}, {max}]")));
        }
        Ok(Axis { min, max, n, h: (max - min) / n as f64 })
    }

    /// Storage length for a family.
    pub fn len(&self, fam: Family) -> usize {
        match fam {
            Family::Primal => self.n + 4,
            Family::Dual => self.n + 5,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Center of the cell stored at `s`.
    pub fn center(&self, fam: Family, s: usize) -> f64 {
        let j = s as f64 - GHOST as f64;
        match fam {
            Family::Primal => self.min + (j + 0.5) * self.h,
            Family::Dual => self.min + j * self.h,
        }
    }

    /// Physical coordinate of reference point ξ in cell `s`.
    #[inline]
    pub fn coord(&self, fam: Family, s: usize, xi: f64) -> f64 {
        self.center(fam, s) + 0.5 * self.h * xi
    }

    /// Storage range of cells that are evolved by the scheme.
    pub fn evolved(&self, fam: Family, periodic: bool) -> std::ops::Range<usize> {
        match (fam, periodic) {
            (Family::Primal, _) | (Family::Dual, true) => GHOST..self.n + GHOST,
            (Family::Dual, false) => GHOST + 1..self.n + GHOST,
        }
    }

    /// The two primal half-cells making up dual cell `s` (storage index):
    /// the right half of the left primal cell and the left half of the right one.
    pub fn overlap_halves(&self, s: usize) -> Result<((f64, f64), (f64, f64))> {
        if s == 0 || s >= self.len(Family::Dual) - 1 {
            return Err(CdgError::setup(format!("dual storage index {s} has no primal neighbors")));
        }
        let c = self.center(Family::Dual, s);
        let hh = 0.5 * self.h;
        Ok(((c - hh, c), (c, c + hh)))
    }
}

/// One-dimensional primal/dual mesh pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mesh1D {
    pub x: Axis,
}

impl Mesh1D {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Mesh1D> {
        Ok(Mesh1D { x: Axis::new(x_min, x_max, n)? })
    }

    pub fn dx(&self) -> f64 {
        self.x.h
    }
}

/// Two-dimensional primal/dual mesh pair. Cell storage is row-major in x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mesh2D {
    pub x: Axis,
    pub y: Axis,
}

impl Mesh2D {
    pub fn new(x: (f64, f64, usize), y: (f64, f64, usize)) -> Result<Mesh2D> {
        Ok(Mesh2D { x: Axis::new(x.0, x.1, x.2)?, y: Axis::new(y.0, y.1, y.2)? })
    }

    pub fn len(&self, fam: Family) -> usize {
        self.x.len(fam) * self.y.len(fam)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn index(&self, fam: Family, si: usize, sj: usize) -> usize {
        sj * self.x.len(fam) + si
    }

    /// Quadrant (κ, τ) of cell (si, sj) as a rectangle; κ, τ = 0 for the lower halves.
    pub fn quadrant(&self, fam: Family, si: usize, sj: usize, kappa: usize, tau: usize) -> ((f64, f64), (f64, f64)) {
        let cx = self.x.center(fam, si);
        let cy = self.y.center(fam, sj);
        let hx = 0.5 * self.x.h;
        let hy = 0.5 * self.y.h;
        let xs = if kappa == 0 { (cx - hx, cx) } else { (cx, cx + hx) };
        let ys = if tau == 0 { (cy - hy, cy) } else { (cy, cy + hy) };
        (xs, ys)
    }
}

/// Reference-coordinate point sets shared by every cell of both families.
#[derive(Debug, Clone)]
pub struct PointSets {
    pub k: usize,
    /// Gauss nodes and normalized weights on [-1, 1] (N = k + 1).
    pub gauss: Vec<f64>,
    pub gauss_w: Vec<f64>,
    /// Lobatto nodes and normalized weights on [-1, 1].
    pub lobatto: Vec<f64>,
    pub lobatto_w: Vec<f64>,
    /// First Lobatto weight ŵ₁.
    pub w1: f64,
    /// Gauss nodes in each half, `half_gauss[κ][α]`, in cell reference coordinates.
    pub half_gauss: [Vec<f64>; 2],
    /// Lobatto nodes in each half.
    pub half_lobatto: [Vec<f64>; 2],
    /// Deduplicated critical set of one cell (1D).
    pub critical_1d: Vec<f64>,
    /// Critical points per quadrant (κ + 2τ) in 2D.
    pub critical_quadrants: [Vec<(f64, f64)>; 4],
    /// Deduplicated union of the quadrant sets.
    pub critical_2d: Vec<(f64, f64)>,
}

#[inline]
pub fn half_point(kappa: usize, g: f64) -> f64 {
    (kappa as f64 - 0.5) + 0.5 * g
}

fn push_unique(v: &mut Vec<f64>, x: f64) {
    if !v.iter().any(|&y| (y - x).abs() < 1e-14) {
        v.push(x);
    }
}

fn push_unique_2d(v: &mut Vec<(f64, f64)>, p: (f64, f64)) {
    if !v.iter().any(|q| (q.0 - p.0).abs() < 1e-14 && (q.1 - p.1).abs() < 1e-14) {
        v.push(p);
    }
}

impl PointSets {
    pub fn new(k: usize) -> Result<PointSets> {
        let g = gauss_reference(k + 1)?;
        let l = lobatto_reference(lobatto_count(k))?;
        let half_gauss = [0, 1].map(|kp| g.nodes.iter().map(|&x| half_point(kp, x)).collect::<Vec<_>>());
        let half_lobatto = [0, 1].map(|kp| l.nodes.iter().map(|&x| half_point(kp, x)).collect::<Vec<_>>());
        let mut critical_1d = Vec::new();
        for kp in 0..2 {
            for &x in half_gauss[kp].iter().chain(&half_lobatto[kp]) {
                push_unique(&mut critical_1d, x);
            }
        }
        critical_1d.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut critical_quadrants: [Vec<(f64, f64)>; 4] = Default::default();
        let mut critical_2d = Vec::new();
        for tau in 0..2 {
            for kp in 0..2 {
                let q = &mut critical_quadrants[kp + 2 * tau];
                for &x in &half_gauss[kp] {
                    for &y in &half_lobatto[tau] {
                        push_unique_2d(q, (x, y));
                    }
                }
                for &x in &half_lobatto[kp] {
                    for &y in &half_gauss[tau] {
                        push_unique_2d(q, (x, y));
                    }
                }
                for &x in &half_gauss[kp] {
                    for &y in &half_gauss[tau] {
                        push_unique_2d(q, (x, y));
                    }
                }
                for &p in q.iter() {
                    push_unique_2d(&mut critical_2d, p);
                }
            }
        }
        Ok(PointSets {
            k,
            w1: l.weights[0],
            gauss: g.nodes,
            gauss_w: g.weights,
            lobatto: l.nodes,
            lobatto_w: l.weights,
            half_gauss,
            half_lobatto,
            critical_1d,
            critical_quadrants,
            critical_2d,
        })
    }

    pub fn n_gauss(&self) -> usize {
        self.gauss.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primal_and_dual_centers() {
        let m = Mesh1D::new(0.0, 2.0, 4).unwrap();
        assert_eq!(m.dx(), 0.5);
        let c: Vec<f64> = (2..6).map(|s| m.x.center(Family::Primal, s)).collect();
        assert_eq!(c, vec![0.25, 0.75, 1.25, 1.75]);
        // dual cell 1 + 1/2 is the one centered at x = 1.0
        let s = 2 + 2;
        let c = m.x.center(Family::Dual, s);
        assert_eq!((c - 0.25, c + 0.25), (0.75, 1.25));
        let (l, r) = m.x.overlap_halves(s).unwrap();
        assert_eq!(l, (0.75, 1.0));
        assert_eq!(r, (1.0, 1.25));
    }

    #[test]
    fn leftmost_interior_and_ghost_dual_cells() {
        let m = Mesh1D::new(0.0, 2.0, 4).unwrap();
        let (l, r) = m.x.overlap_halves(3).unwrap();
        // halves of primal cells 0 and 1
        assert_eq!(l, (0.25, 0.5));
        assert_eq!(r, (0.5, 0.75));
        let last = m.x.len(Family::Dual) - 3;
        let (l, r) = m.x.overlap_halves(last).unwrap();
        assert_eq!(l.1, 2.0);
        assert!(r.1 > 2.0);
        assert!(m.x.overlap_halves(0).is_err());
    }

    #[test]
    fn quadrant_example() {
        let m = Mesh2D::new((0.0, 1.0, 2), (0.0, 1.0, 2)).unwrap();
        assert_eq!(m.quadrant(Family::Primal, 2, 2, 1, 1), ((0.25, 0.5), (0.25, 0.5)));
    }

    #[test]
    fn cell_measures_cover_domain() {
        let m = Mesh1D::new(0.0, 2.0, 64).unwrap();
        let total: f64 = (0..64).map(|_| m.dx()).sum();
        assert_eq!(total, 2.0);
    }

    #[test]
    fn bad_meshes_rejected() {
        assert!(Mesh1D::new(0.0, 1.0, 1).is_err());
        assert!(Mesh1D::new(1.0, 1.0, 8).is_err());
    }

    #[test]
    fn critical_sets() {
        let p = PointSets::new(2).unwrap();
        assert_eq!(p.w1, 1.0 / 6.0);
        // half centers are Gauss nodes too, so Lobatto adds only -1, 0, 1
        assert_eq!(p.critical_1d.len(), 6 + 3);
        assert!(p.critical_1d.contains(&-1.0) && p.critical_1d.contains(&1.0) && p.critical_1d.contains(&0.0));
        for q in &p.critical_quadrants {
            // the half-cell center is both a Gauss and a Lobatto node
            assert_eq!(q.len(), 9 + 9 + 9 - 1 - 3 - 3 + 1);
        }
        let p3 = PointSets::new(3).unwrap();
        for q in &p3.critical_quadrants {
            assert_eq!(q.len(), 4 * 3 + 3 * 4 + 16);
        }
        assert!(p3.critical_2d.len() < 4 * 40);
    }
}
