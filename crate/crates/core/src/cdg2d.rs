//! Two-dimensional well-balanced central DG scheme on overlapping Cartesian meshes.
//!
//! Every own cell is covered by four quadrants, each lying in one opposite cell.
//! Quadrant `q = κ + 2τ` of own cell `(i, j)` lies in opposite cell
//! `(i + κ + o, j + τ + o)` with `o` the family offset.

use std::cell::RefCell;
use std::collections::HashMap;

use crate::basis::Basis2D;
use crate::error::{CdgError, Result};
use crate::euler::{flux_x_2d, flux_y_2d, pressure_2d, wave_speed_x_2d, wave_speed_y_2d, State2};
use crate::field::{eval_cell, PolyField};
use crate::limiters::{cell_minima, eigensystem, fault, pp_cell, troubled, weno_coefficients, LimiterReport};
use crate::mesh::{half_point, Axis, Family, Mesh2D, PointSets};
use crate::problems::{Boundary, ProblemSpec};
use crate::projection::{map_from_opposite_2d, project_2d, ProjTable2D};
use crate::quadrature::gauss_reference;
use crate::scheme::{Diagnostics, Sample, Scheme, SchemeOptions, ERROR_POINTS};

const NC: usize = 4;
const MAX_NB: usize = 10;
const FAMILIES: [Family; 2] = [Family::Primal, Family::Dual];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dir {
    X,
    Y,
}

/// Basis values at the fixed sample points of a cell.
#[derive(Debug, Clone)]
struct Tables {
    ng: usize,
    w: Vec<f64>,
    /// Product weights of the quadrant Gauss points (sum 1 per quadrant).
    qw: Vec<f64>,
    own_phi: Vec<f64>,
    own_dxi: Vec<f64>,
    own_deta: Vec<f64>,
    opp_phi: Vec<f64>,
    opp_dxi: Vec<f64>,
    opp_deta: Vec<f64>,
    /// Own traces on the x edges (ξ = ±1) at half-edge Gauss points `τ ng + μ`.
    ex_right: Vec<f64>,
    ex_left: Vec<f64>,
    /// The same points on the center line ξ' = 0 of the opposite cells.
    ex_opp: Vec<f64>,
    ey_top: Vec<f64>,
    ey_bottom: Vec<f64>,
    ey_opp: Vec<f64>,
    /// Opposite traces on the own center lines: from the lower (ξ' = 1) and upper (ξ' = -1) cells.
    cx_minus: Vec<f64>,
    cx_plus: Vec<f64>,
    cy_minus: Vec<f64>,
    cy_plus: Vec<f64>,
    /// Quadrant critical points in opposite-cell coordinates.
    crit_opp: [Vec<f64>; 4],
    crit: Vec<f64>,
    center: Vec<f64>,
    /// Own values at the edge midpoints for the troubled-cell detector.
    mid_x: [Vec<f64>; 2],
    mid_y: [Vec<f64>; 2],
    norm: Vec<f64>,
    parity_x: Vec<f64>,
    parity_y: Vec<f64>,
}

impl Tables {
    fn new(pts: &PointSets) -> Tables {
        let k = pts.k;
        let b = Basis2D::new(k);
        let ng = pts.n_gauss();
        let vals = |x: f64, y: f64| b.values(x, y);
        let mut t = Tables {
            ng,
            w: pts.gauss_w.clone(),
            qw: Vec::new(),
            own_phi: Vec::new(),
            own_dxi: Vec::new(),
            own_deta: Vec::new(),
            opp_phi: Vec::new(),
            opp_dxi: Vec::new(),
            opp_deta: Vec::new(),
            ex_right: Vec::new(),
            ex_left: Vec::new(),
            ex_opp: Vec::new(),
            ey_top: Vec::new(),
            ey_bottom: Vec::new(),
            ey_opp: Vec::new(),
            cx_minus: Vec::new(),
            cx_plus: Vec::new(),
            cy_minus: Vec::new(),
            cy_plus: Vec::new(),
            crit_opp: Default::default(),
            crit: pts.critical_2d.iter().flat_map(|&(x, y)| vals(x, y)).collect(),
            center: vals(0.0, 0.0),
            mid_x: [vals(-1.0, 0.0), vals(1.0, 0.0)],
            mid_y: [vals(0.0, -1.0), vals(0.0, 1.0)],
            norm: (0..b.len()).map(|l| b.norm_sq(l)).collect(),
            parity_x: b.modes.iter().map(|&(a, _)| if a % 2 == 1 { -1.0 } else { 1.0 }).collect(),
            parity_y: b.modes.iter().map(|&(_, c)| if c % 2 == 1 { -1.0 } else { 1.0 }).collect(),
        };
        let n = b.len();
        let (mut v, mut dx, mut dy) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
        for q in 0..4 {
            let (kappa, tau) = (q % 2, q / 2);
            for beta in 0..ng {
                for alpha in 0..ng {
                    let (x, y) = (pts.half_gauss[kappa][alpha], pts.half_gauss[tau][beta]);
                    t.qw.push(pts.gauss_w[alpha] * pts.gauss_w[beta]);
                    b.eval(x, y, &mut v, &mut dx, &mut dy);
                    t.own_phi.extend(&v);
                    t.own_dxi.extend(&dx);
                    t.own_deta.extend(&dy);
                    let (xo, yo) = (x + 1.0 - 2.0 * kappa as f64, y + 1.0 - 2.0 * tau as f64);
                    b.eval(xo, yo, &mut v, &mut dx, &mut dy);
                    t.opp_phi.extend(&v);
                    t.opp_dxi.extend(&dx);
                    t.opp_deta.extend(&dy);
                }
            }
            t.crit_opp[q] = pts.critical_quadrants[q]
                .iter()
                .flat_map(|&(x, y)| vals(x + 1.0 - 2.0 * kappa as f64, y + 1.0 - 2.0 * tau as f64))
                .collect();
        }
        for half in 0..2 {
            for &g in &pts.half_gauss[half] {
                let o = g + 1.0 - 2.0 * half as f64;
                t.ex_right.extend(vals(1.0, g));
                t.ex_left.extend(vals(-1.0, g));
                t.ex_opp.extend(vals(0.0, o));
                t.ey_top.extend(vals(g, 1.0));
                t.ey_bottom.extend(vals(g, -1.0));
                t.ey_opp.extend(vals(o, 0.0));
                t.cx_minus.extend(vals(1.0, o));
                t.cx_plus.extend(vals(-1.0, o));
                t.cy_minus.extend(vals(o, 1.0));
                t.cy_plus.extend(vals(o, -1.0));
            }
        }
        t
    }

    fn np(&self) -> usize {
        4 * self.ng * self.ng
    }
}

/// Opposite-family equilibrium data at the sample points of each own cell.
#[derive(Debug, Clone, Default)]
struct EqCache {
    us: Vec<State2>,
    rho_s: Vec<f64>,
    p_s: Vec<f64>,
    px_s: Vec<f64>,
    py_s: Vec<f64>,
    /// Analytic ∇φ (ablation source).
    gx: Vec<f64>,
    gy: Vec<f64>,
    /// Discrete ∇φ̂ of the positivity bound.
    hat_x: Vec<f64>,
    hat_y: Vec<f64>,
    rho_bar_s: Vec<f64>,
    /// p^s on the left/right edges `[side * 2ng + e]` and bottom/top edges.
    p_ex: Vec<f64>,
    p_ey: Vec<f64>,
}

/// How a dual ghost cell outside a non-periodic side is filled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum DualRule {
    Map,
    Exact,
    Background,
}

/// Full two-dimensional discretization.
#[derive(Debug, Clone)]
pub struct Scheme2D {
    pub problem: ProblemSpec,
    pub mesh: Mesh2D,
    pub k: usize,
    pub nb: usize,
    pub opts: SchemeOptions,
    pub pts: PointSets,
    periodic: (bool, bool),
    tab: Tables,
    proj: ProjTable2D,
    map_table: ProjTable2D,
    /// Error rule: tensor nodes, weights (sum 1) and basis values.
    err_pts: Vec<(f64, f64)>,
    err_w: Vec<f64>,
    err_phi: Vec<f64>,
    eq: [PolyField; 2],
    map_eq: PolyField,
    dual_plan: Vec<(usize, usize, DualRule)>,
    cache: [EqCache; 2],
    /// Exact-solution ghost projections of the latest time, keyed by (family, first cell, count).
    dirichlet_memo: RefCell<HashMap<(usize, usize, usize), (u64, Vec<f64>)>>,
}

fn copy_cell(f: &mut PolyField, from: usize, to: usize) {
    let st = f.stride();
    f.data.copy_within(from * st..(from + 1) * st, to * st);
}

fn wrap(s: usize, n: usize) -> usize {
    if s < 2 {
        s + n
    } else {
        s - n
    }
}

impl Scheme2D {
    pub fn new(problem: ProblemSpec, k: usize, n: (usize, usize), opts: SchemeOptions) -> Result<Scheme2D> {
        if problem.dim != 2 {
            return Err(CdgError::config(format!("{} is not two-dimensional", problem.id)));
        }
        if !(2..=3).contains(&k) {
            return Err(CdgError::config(format!("two-dimensional degree must be 2 or 3, got {k}")));
        }
        if opts.tvb_m.is_empty() || (opts.tvb_m.len() != 1 && opts.tvb_m.len() != NC) {
            return Err(CdgError::config("limiter.tvb_m needs 1 or 4 entries"));
        }
        if opts.tvb_m.iter().any(|&m| !(m >= 0.0)) {
            return Err(CdgError::config("TVB constants must be nonnegative"));
        }
        problem.bc.validate(2)?;
        let mesh = Mesh2D::new((problem.x.0, problem.x.1, n.0), (problem.y.0, problem.y.1, n.1))?;
        let pts = PointSets::new(k)?;
        let basis = Basis2D::new(k);
        let err = gauss_reference(ERROR_POINTS)?;
        let mut err_pts = Vec::new();
        let mut err_w = Vec::new();
        for (b, &y) in err.nodes.iter().enumerate() {
            for (a, &x) in err.nodes.iter().enumerate() {
                err_pts.push((x, y));
                err_w.push(err.weights[a] * err.weights[b]);
            }
        }
        let err_phi = err_pts.iter().flat_map(|&(x, y)| basis.values(x, y)).collect();
        let nb = basis.len();
        let empty = |fam: Family| PolyField::zeros(fam, mesh.x.len(fam), mesh.y.len(fam), nb, NC);
        let mut s = Scheme2D {
            periodic: (problem.bc.x_periodic(), problem.bc.y_periodic()),
            tab: Tables::new(&pts),
            proj: ProjTable2D::new(k, k + 3)?,
            map_table: ProjTable2D::new(k, k + 1)?,
            err_pts,
            err_w,
            err_phi,
            eq: [empty(Family::Primal), empty(Family::Dual)],
            map_eq: empty(Family::Dual),
            dual_plan: Vec::new(),
            cache: Default::default(),
            dirichlet_memo: RefCell::new(HashMap::new()),
            problem,
            mesh,
            k,
            nb,
            opts,
            pts,
        };
        s.dual_plan = s.plan_dual();
        s.build_equilibrium()?;
        s.cache = [s.build_cache(Family::Primal)?, s.build_cache(Family::Dual)?];
        Ok(s)
    }

    fn axis(&self, d: Dir) -> &Axis {
        match d {
            Dir::X => &self.mesh.x,
            Dir::Y => &self.mesh.y,
        }
    }

    fn is_periodic(&self, d: Dir) -> bool {
        match d {
            Dir::X => self.periodic.0,
            Dir::Y => self.periodic.1,
        }
    }

    fn sides(&self, d: Dir) -> (Boundary, Boundary) {
        let b = &self.problem.bc;
        match d {
            Dir::X => (b.x_lo, b.x_hi),
            Dir::Y => (b.y_lo, b.y_hi),
        }
    }

    pub fn evolved(&self, fam: Family, d: Dir) -> std::ops::Range<usize> {
        self.axis(d).evolved(fam, self.is_periodic(d))
    }

    /// Storage range that is kept filled along one direction.
    fn filled(&self, fam: Family, d: Dir) -> std::ops::Range<usize> {
        let len = self.axis(d).len(fam);
        match (fam, self.is_periodic(d)) {
            (Family::Dual, false) => 1..len - 1,
            _ => 0..len,
        }
    }

    fn evolved_cells(&self, fam: Family) -> impl Iterator<Item = (usize, usize)> {
        let ex = self.evolved(fam, Dir::X);
        self.evolved(fam, Dir::Y).flat_map(move |j| ex.clone().map(move |i| (i, j)))
    }

    /// Filled cells outside the evolved block.
    pub fn ghost_cells(&self, fam: Family) -> Vec<(usize, usize)> {
        let (ex, ey) = (self.evolved(fam, Dir::X), self.evolved(fam, Dir::Y));
        let fx = self.filled(fam, Dir::X);
        let mut out = Vec::new();
        for j in self.filled(fam, Dir::Y) {
            for i in fx.clone() {
                if !(ex.contains(&i) && ey.contains(&j)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    fn plan_dual(&self) -> Vec<(usize, usize, DualRule)> {
        let fam = Family::Dual;
        let (ex, ey) = (self.evolved(fam, Dir::X), self.evolved(fam, Dir::Y));
        let (lx, ly) = (self.mesh.x.len(fam), self.mesh.y.len(fam));
        let mut plan = Vec::new();
        for (i, j) in self.ghost_cells(fam) {
            if i == 0 || j == 0 || i == lx - 1 || j == ly - 1 {
                continue;
            }
            let mut rules = Vec::new();
            if !self.periodic.0 && !ex.contains(&i) {
                let (lo, hi) = self.sides(Dir::X);
                rules.push(if i < ex.start { lo } else { hi });
            }
            if !self.periodic.1 && !ey.contains(&j) {
                let (lo, hi) = self.sides(Dir::Y);
                rules.push(if j < ey.start { lo } else { hi });
            }
            if rules.is_empty() {
                continue;
            }
            let rule = if rules.contains(&Boundary::Dirichlet) {
                DualRule::Exact
            } else if rules.contains(&Boundary::Equilibrium) {
                DualRule::Background
            } else {
                DualRule::Map
            };
            plan.push((i, j, rule));
        }
        plan
    }

    #[inline]
    fn eval_at(&self, cell: &[f64], phi: &[f64]) -> State2 {
        let mut v = [0.0; NC];
        eval_cell(cell, self.nb, phi, &mut v);
        v
    }

    /// Storage index in the opposite family of the cell shifted by (di, dj) from own (i, j).
    #[inline]
    fn opp_index(&self, fam: Family, opp: &PolyField, i: usize, j: usize, di: usize, dj: usize) -> usize {
        let off = fam.offset();
        let oi = (i as isize + di as isize + off) as usize;
        let oj = (j as isize + dj as isize + off) as usize;
        opp.index(oi, oj)
    }

    fn project_cells(&self, f: &mut PolyField, cells: &[(usize, usize)], exact_t: Option<f64>) {
        let p = &self.problem;
        match exact_t {
            Some(t) => {
                let key = (f.family.index(), f.index(cells[0].0, cells[0].1), cells.len());
                let st = f.stride();
                let mut memo = self.dirichlet_memo.borrow_mut();
                if let Some((bits, vals)) = memo.get(&key) {
                    if *bits == t.to_bits() {
                        for (n, &(i, j)) in cells.iter().enumerate() {
                            let idx = f.index(i, j);
                            f.cell_mut(idx).copy_from_slice(&vals[n * st..(n + 1) * st]);
                        }
                        return;
                    }
                }
                project_2d(&self.map_table, &self.mesh, f, cells.iter().copied(), true, |x, y| p.state_2d(x, y, t));
                let vals = cells.iter().flat_map(|&(i, j)| f.cell(f.index(i, j)).to_vec()).collect();
                memo.insert(key, (t.to_bits(), vals));
            }
            None => project_2d(&self.proj, &self.mesh, f, cells.iter().copied(), true, |x, y| p.background_2d(x, y)),
        }
    }

    fn mirror_cell(&self, f: &mut PolyField, from: usize, to: usize, d: Dir) {
        let nb = self.nb;
        let (parity, normal) = match d {
            Dir::X => (&self.tab.parity_x, 1),
            Dir::Y => (&self.tab.parity_y, 2),
        };
        for c in 0..NC {
            let flip = if c == normal { -1.0 } else { 1.0 };
            for l in 0..nb {
                let v = f.coef(from, c, l);
                f.set(to, c, l, flip * parity[l] * v);
            }
        }
    }

    /// Fill primal ghosts across the two sides of one direction along `lines`.
    /// `eq_mode` builds the background itself (analytic projection for
    /// non-reflective, non-periodic sides).
    fn fill_primal_dir(&self, u: &mut PolyField, d: Dir, lines: std::ops::Range<usize>, t: f64, eq_mode: bool) {
        let n = self.axis(d).n;
        let eq = &self.eq[0];
        let g = self.problem.gamma;
        let (lo, hi) = self.sides(d);
        let at = |f: &PolyField, s: usize, line: usize| match d {
            Dir::X => f.index(s, line),
            Dir::Y => f.index(line, s),
        };
        for (b, ghosts, inner) in [(lo, [1usize, 0], [2usize, 3]), (hi, [n + 2, n + 3], [n + 1, n])] {
            let mut to_project = Vec::new();
            for line in lines.clone() {
                for i in 0..2 {
                    let gi = at(u, ghosts[i], line);
                    let rule = match b {
                        Boundary::Periodic | Boundary::Reflective => b,
                        _ if eq_mode => Boundary::Equilibrium,
                        _ => b,
                    };
                    match rule {
                        Boundary::Periodic => copy_cell(u, at(u, wrap(ghosts[i], n), line), gi),
                        Boundary::Reflective => self.mirror_cell(u, at(u, inner[i], line), gi, d),
                        Boundary::Dirichlet | Boundary::Equilibrium if eq_mode || b == Boundary::Dirichlet => {
                            to_project.push(match d {
                                Dir::X => (ghosts[i], line),
                                Dir::Y => (line, ghosts[i]),
                            })
                        }
                        Boundary::Equilibrium => u.cell_mut(gi).copy_from_slice(eq.cell(gi)),
                        Boundary::OutflowState => copy_cell(u, at(u, inner[0], line), gi),
                        Boundary::OutflowEq | Boundary::Dirichlet => {
                            let src = at(u, inner[0], line);
                            for jj in 0..u.stride() {
                                u.cell_mut(gi)[jj] = eq.cell(gi)[jj] + (u.cell(src)[jj] - eq.cell(src)[jj]);
                            }
                            let avg: State2 = std::array::from_fn(|c| u.average(gi, c));
                            if !(avg[0] > 0.0 && pressure_2d(&avg, g) > 0.0) {
                                copy_cell(u, src, gi);
                            }
                        }
                    }
                }
            }
            if !to_project.is_empty() {
                self.project_cells(u, &to_project, if eq_mode { None } else { Some(t) });
            }
        }
    }

    fn fill_primal(&self, u: &mut PolyField, t: f64, eq_mode: bool) {
        let ey = self.evolved(Family::Primal, Dir::Y);
        let fx = self.filled(Family::Primal, Dir::X);
        self.fill_primal_dir(u, Dir::X, ey, t, eq_mode);
        self.fill_primal_dir(u, Dir::Y, fx, t, eq_mode);
    }

    fn wrap_dual(&self, d: &mut PolyField) {
        let fam = Family::Dual;
        let (ex, ey) = (self.evolved(fam, Dir::X), self.evolved(fam, Dir::Y));
        let (fx, fy) = (self.filled(fam, Dir::X), self.filled(fam, Dir::Y));
        if self.periodic.0 {
            let n = self.mesh.x.n;
            for j in fy.clone() {
                for i in fx.clone().filter(|i| !ex.contains(i)) {
                    copy_cell(d, d.index(wrap(i, n), j), d.index(i, j));
                }
            }
        }
        if self.periodic.1 {
            let n = self.mesh.y.n;
            for j in fy.filter(|j| !ey.contains(j)) {
                for i in fx.clone() {
                    copy_cell(d, d.index(i, wrap(j, n)), d.index(i, j));
                }
            }
        }
    }

    fn fill_dual(&self, d: &mut PolyField, c: &PolyField, t: f64) {
        let eq = &self.eq[1];
        let mut mapped = vec![0.0; d.stride()];
        let mut exact = Vec::new();
        for &(i, j, rule) in &self.dual_plan {
            let idx = d.index(i, j);
            match rule {
                DualRule::Exact => exact.push((i, j)),
                DualRule::Background => d.cell_mut(idx).copy_from_slice(eq.cell(idx)),
                DualRule::Map => {
                    map_from_opposite_2d(&self.map_table, c, i, j, &mut mapped);
                    let me = self.map_eq.cell(idx);
                    let ec = eq.cell(idx);
                    for (jj, v) in d.cell_mut(idx).iter_mut().enumerate() {
                        *v = ec[jj] + (mapped[jj] - me[jj]);
                    }
                }
            }
        }
        if !exact.is_empty() {
            self.project_cells(d, &exact, Some(t));
        }
        self.wrap_dual(d);
    }

    pub fn fill_ghosts(&self, u: &mut [PolyField; 2], t: f64) {
        let [c, d] = u;
        self.fill_primal(c, t, false);
        self.fill_dual(d, c, t);
    }

    fn build_equilibrium(&mut self) -> Result<()> {
        let mut c = self.eq[0].clone();
        let cells: Vec<_> = self.evolved_cells(Family::Primal).collect();
        self.project_cells(&mut c, &cells, None);
        self.fill_primal(&mut c, 0.0, true);
        let mut d = self.eq[1].clone();
        let cells: Vec<_> = self.evolved_cells(Family::Dual).collect();
        self.project_cells(&mut d, &cells, None);
        let mut analytic = Vec::new();
        for &(i, j, rule) in &self.dual_plan {
            let all_reflective = rule == DualRule::Map && {
                let ex = self.evolved(Family::Dual, Dir::X);
                let ey = self.evolved(Family::Dual, Dir::Y);
                let bx = if i < ex.start { self.problem.bc.x_lo } else { self.problem.bc.x_hi };
                let by = if j < ey.start { self.problem.bc.y_lo } else { self.problem.bc.y_hi };
                (ex.contains(&i) || bx == Boundary::Reflective || self.periodic.0)
                    && (ey.contains(&j) || by == Boundary::Reflective || self.periodic.1)
            };
            if all_reflective {
                let idx = d.index(i, j);
                map_from_opposite_2d(&self.map_table, &c, i, j, d.cell_mut(idx));
            } else {
                analytic.push((i, j));
            }
        }
        self.project_cells(&mut d, &analytic, None);
        self.wrap_dual(&mut d);
        let mut rep = LimiterReport::new();
        for (f, fam) in [(&mut c, Family::Primal), (&mut d, Family::Dual)] {
            let cells: Vec<_> = self.evolved_cells(fam).chain(self.ghost_cells(fam)).collect();
            let (ex, ey) = (self.evolved(fam, Dir::X), self.evolved(fam, Dir::Y));
            let ring = |r: &std::ops::Range<usize>, s: usize, n: usize| {
                r.contains(&s) || (fam == Family::Dual && (2..=n + 2).contains(&s))
            };
            for (i, j) in cells {
                let idx = f.index(i, j);
                // outer ghosts only feed boundary rules that never read them if inadmissible
                let needed = ring(&ex, i, self.mesh.x.n) && ring(&ey, j, self.mesh.y.n);
                let r = pp_cell(f.cell_mut(idx), self.nb, NC, &self.tab.crit, self.problem.gamma, &mut rep);
                if let (Err(e), true) = (r, needed) {
                    return Err(CdgError::setup(format!("projected equilibrium, {} cell ({i}, {j}): {e}", fam.name())));
                }
            }
        }
        for &(i, j, _) in &self.dual_plan {
            let idx = self.map_eq.index(i, j);
            map_from_opposite_2d(&self.map_table, &c, i, j, self.map_eq.cell_mut(idx));
        }
        self.eq = [c, d];
        Ok(())
    }

    /// Opposite samples at the quadrant Gauss points of own cell (i, j) and the
    /// own-cell averages of ρ, m₁, m₂.
    #[inline]
    fn opposite_samples(&self, fam: Family, opp: &PolyField, i: usize, j: usize, vals: &mut [State2]) -> [f64; 3] {
        let t = &self.tab;
        let nb = self.nb;
        let per = t.ng * t.ng;
        let mut avg = [0.0; 3];
        for q in 0..4 {
            let cell = opp.cell(self.opp_index(fam, opp, i, j, q % 2, q / 2));
            for p in q * per..(q + 1) * per {
                eval_cell(cell, nb, &t.opp_phi[p * nb..(p + 1) * nb], &mut vals[p]);
                let w = t.qw[p];
                avg[0] += w * vals[p][0];
                avg[1] += w * vals[p][1];
                avg[2] += w * vals[p][2];
            }
        }
        [0.25 * avg[0], 0.25 * avg[1], 0.25 * avg[2]]
    }

    fn build_cache(&self, fam: Family) -> Result<EqCache> {
        let t = &self.tab;
        let ng = t.ng;
        let np = t.np();
        let per = ng * ng;
        let ne = 2 * ng;
        let len = self.mesh.len(fam);
        let nb = self.nb;
        let g = self.problem.gamma;
        let opp = &self.eq[fam.opposite().index()];
        let (dx, dy) = (self.mesh.x.h, self.mesh.y.h);
        let mut c = EqCache {
            us: vec![[0.0; NC]; len * np],
            rho_s: vec![0.0; len * np],
            p_s: vec![0.0; len * np],
            px_s: vec![0.0; len * np],
            py_s: vec![0.0; len * np],
            gx: vec![0.0; len * np],
            gy: vec![0.0; len * np],
            hat_x: vec![0.0; len * np],
            hat_y: vec![0.0; len * np],
            rho_bar_s: vec![0.0; len],
            p_ex: vec![0.0; len * 2 * ne],
            p_ey: vec![0.0; len * 2 * ne],
        };
        let mut vals = vec![[0.0; NC]; np];
        let cells: Vec<_> = self.evolved_cells(fam).collect();
        for (i, j) in cells {
            let idx = self.mesh.index(fam, i, j);
            let [rbar, _, _] = self.opposite_samples(fam, opp, i, j, &mut vals);
            if !(rbar > 0.0) {
                return Err(CdgError::setup(format!(
                    "nonpositive equilibrium average density near {} cell ({i}, {j})",
                    fam.name()
                )));
            }
            c.rho_bar_s[idx] = rbar;
            // edge pressures and center-line jumps
            let (mut jump_x, mut jump_y) = (0.0, 0.0);
            for e in 0..ne {
                let half = e / ng;
                let w = t.w[e % ng];
                let phi = &t.ex_opp[e * nb..(e + 1) * nb];
                let left = opp.cell(self.opp_index(fam, opp, i, j, 0, half));
                let right = opp.cell(self.opp_index(fam, opp, i, j, 1, half));
                c.p_ex[idx * 2 * ne + e] = pressure_2d(&self.eval_at(left, phi), g);
                c.p_ex[idx * 2 * ne + ne + e] = pressure_2d(&self.eval_at(right, phi), g);
                let pm = pressure_2d(&self.eval_at(left, &t.cx_minus[e * nb..(e + 1) * nb]), g);
                let pp = pressure_2d(&self.eval_at(right, &t.cx_plus[e * nb..(e + 1) * nb]), g);
                jump_x += 0.5 * dy * w * (pp - pm);
                let phi = &t.ey_opp[e * nb..(e + 1) * nb];
                let bottom = opp.cell(self.opp_index(fam, opp, i, j, half, 0));
                let top = opp.cell(self.opp_index(fam, opp, i, j, half, 1));
                c.p_ey[idx * 2 * ne + e] = pressure_2d(&self.eval_at(bottom, phi), g);
                c.p_ey[idx * 2 * ne + ne + e] = pressure_2d(&self.eval_at(top, phi), g);
                let pm = pressure_2d(&self.eval_at(bottom, &t.cy_minus[e * nb..(e + 1) * nb]), g);
                let pp = pressure_2d(&self.eval_at(top, &t.cy_plus[e * nb..(e + 1) * nb]), g);
                jump_y += 0.5 * dx * w * (pp - pm);
            }
            for p in 0..np {
                let q = p / per;
                let (kappa, tau) = (q % 2, q / 2);
                let cell = opp.cell(self.opp_index(fam, opp, i, j, kappa, tau));
                let u = vals[p];
                if !(u[0] > 0.0) {
                    return Err(CdgError::setup(format!(
                        "nonpositive equilibrium density near {} cell ({i}, {j})",
                        fam.name()
                    )));
                }
                let ux = self.eval_at(cell, &t.opp_dxi[p * nb..(p + 1) * nb]);
                let uy = self.eval_at(cell, &t.opp_deta[p * nb..(p + 1) * nb]);
                let dp = |du: &State2| {
                    let ke = (u[1] * du[1] + u[2] * du[2]) / u[0]
                        - 0.5 * (u[1] * u[1] + u[2] * u[2]) * du[0] / (u[0] * u[0]);
                    (g - 1.0) * (du[3] - ke)
                };
                let ii = idx * np + p;
                c.us[ii] = u;
                c.rho_s[ii] = u[0];
                c.p_s[ii] = pressure_2d(&u, g);
                c.px_s[ii] = 2.0 / dx * dp(&ux);
                c.py_s[ii] = 2.0 / dy * dp(&uy);
                let a = p % per;
                let (xi, eta) = (self.pts.half_gauss[kappa][a % ng], self.pts.half_gauss[tau][a / ng]);
                let (x, y) = (self.mesh.x.coord(fam, i, xi), self.mesh.y.coord(fam, j, eta));
                let (gx, gy) = self.problem.potential.gradient(x, y);
                c.gx[ii] = gx;
                c.gy[ii] = gy;
                c.hat_x[ii] = -c.px_s[ii] / u[0] - jump_x / (rbar * dx * dy);
                c.hat_y[ii] = -c.py_s[ii] / u[0] - jump_y / (rbar * dx * dy);
            }
        }
        Ok(c)
    }

    fn residual_family(
        &self,
        fam: Family,
        own: &PolyField,
        opp: &PolyField,
        tau: f64,
        out: &mut PolyField,
    ) -> Result<()> {
        let t = &self.tab;
        let nb = self.nb;
        let ng = t.ng;
        let np = t.np();
        let per = ng * ng;
        let ne = 2 * ng;
        let g = self.problem.gamma;
        let (dx, dy) = (self.mesh.x.h, self.mesh.y.h);
        let (hx, hy, area) = (0.5 * dx, 0.5 * dy, 0.25 * dx * dy);
        let wb = self.opts.well_balanced;
        let c = &self.cache[fam.index()];
        let eq = &self.eq[fam.index()];
        out.data.iter_mut().for_each(|v| *v = 0.0);
        let mut vals = vec![[0.0; NC]; np];
        let oname = opp.family.name();
        let check = |u: &State2, idx: usize, what: &str| -> Result<()> {
            let pr = pressure_2d(u, g);
            if u[0] > 0.0 && pr > 0.0 {
                Ok(())
            } else {
                Err(fault(oname, idx, format!("rho={:e} p={pr:e} at {what}", u[0])))
            }
        };
        for j in self.evolved(fam, Dir::Y) {
            for i in self.evolved(fam, Dir::X) {
                let idx = own.index(i, j);
                let [rbar, m1bar, m2bar] = self.opposite_samples(fam, opp, i, j, &mut vals);
                let (r, r1, r2) = if wb {
                    let rs = c.rho_bar_s[idx];
                    (rbar / rs, m1bar / rs, m2bar / rs)
                } else {
                    (0.0, 0.0, 0.0)
                };
                let mut acc = [0.0; NC * MAX_NB];
                for p in 0..np {
                    let ii = idx * np + p;
                    let u = vals[p];
                    if let Err(e) = check(&u, 0, "a quadrature point") {
                        let q = p / per;
                        let so = self.opp_index(fam, opp, i, j, q % 2, q / 2);
                        return Err(match e {
                            CdgError::Positivity { family, detail, .. } => {
                                CdgError::Positivity { family, cell: so, detail }
                            }
                            other => other,
                        });
                    }
                    let f1 = flux_x_2d(&u, g);
                    let f2 = flux_y_2d(&u, g);
                    let (g1, g2, src, diss) = if wb {
                        let (ps, psx, psy, rs, us) = (c.p_s[ii], c.px_s[ii], c.py_s[ii], c.rho_s[ii], c.us[ii]);
                        let a = u[0] / rs - r;
                        (
                            [f1[0], f1[1] - r * ps, f1[2], f1[3] - r1 * ps],
                            [f2[0], f2[1], f2[2] - r * ps, f2[3] - r2 * ps],
                            [0.0, a * psx, a * psy, (u[1] / rs - r1) * psx + (u[2] / rs - r2) * psy],
                            [u[0] - us[0], u[1] - us[1], u[2] - us[2], u[3] - us[3]],
                        )
                    } else {
                        let (gx, gy) = (c.gx[ii], c.gy[ii]);
                        (f1, f2, [0.0, -u[0] * gx, -u[0] * gy, -(u[1] * gx + u[2] * gy)], u)
                    };
                    let w = t.qw[p];
                    let phi = &t.own_phi[p * nb..(p + 1) * nb];
                    let dxi = &t.own_dxi[p * nb..(p + 1) * nb];
                    let deta = &t.own_deta[p * nb..(p + 1) * nb];
                    for ci in 0..NC {
                        let a1 = hy * w * g1[ci];
                        let a2 = hx * w * g2[ci];
                        let b = area * w * (src[ci] + diss[ci] / tau);
                        accumulate(&mut acc[ci * nb..(ci + 1) * nb], [a1, a2, b], [dxi, deta, phi]);
                    }
                }
                let eb = idx * 2 * ne;
                for e in 0..ne {
                    let half = e / ng;
                    let w = t.w[e % ng];
                    // x edges
                    let phi = &t.ex_opp[e * nb..(e + 1) * nb];
                    let li = self.opp_index(fam, opp, i, j, 0, half);
                    let ri = self.opp_index(fam, opp, i, j, 1, half);
                    let (ul, ur) = (self.eval_at(opp.cell(li), phi), self.eval_at(opp.cell(ri), phi));
                    check(&ul, li, "an edge").map_err(|e| relabel(e, li))?;
                    check(&ur, ri, "an edge").map_err(|e| relabel(e, ri))?;
                    let (mut fl, mut fr) = (flux_x_2d(&ul, g), flux_x_2d(&ur, g));
                    if wb {
                        let (pl, pr) = (c.p_ex[eb + e], c.p_ex[eb + ne + e]);
                        fl[1] -= r * pl;
                        fl[3] -= r1 * pl;
                        fr[1] -= r * pr;
                        fr[3] -= r1 * pr;
                    }
                    let (vr, vl) = (&t.ex_right[e * nb..(e + 1) * nb], &t.ex_left[e * nb..(e + 1) * nb]);
                    for ci in 0..NC {
                        let (a, b) = (hy * w * fr[ci], hy * w * fl[ci]);
                        for ((r, x), y) in acc[ci * nb..(ci + 1) * nb].iter_mut().zip(vr).zip(vl) {
                            *r -= a * x - b * y;
                        }
                    }
                    // y edges
                    let phi = &t.ey_opp[e * nb..(e + 1) * nb];
                    let bi = self.opp_index(fam, opp, i, j, half, 0);
                    let ti = self.opp_index(fam, opp, i, j, half, 1);
                    let (ub, ut) = (self.eval_at(opp.cell(bi), phi), self.eval_at(opp.cell(ti), phi));
                    check(&ub, bi, "an edge").map_err(|e| relabel(e, bi))?;
                    check(&ut, ti, "an edge").map_err(|e| relabel(e, ti))?;
                    let (mut fb, mut ft) = (flux_y_2d(&ub, g), flux_y_2d(&ut, g));
                    if wb {
                        let (pb, pt) = (c.p_ey[eb + e], c.p_ey[eb + ne + e]);
                        fb[2] -= r * pb;
                        fb[3] -= r2 * pb;
                        ft[2] -= r * pt;
                        ft[3] -= r2 * pt;
                    }
                    let (vt, vb) = (&t.ey_top[e * nb..(e + 1) * nb], &t.ey_bottom[e * nb..(e + 1) * nb]);
                    for ci in 0..NC {
                        let (a, b) = (hx * w * ft[ci], hx * w * fb[ci]);
                        for ((r, x), y) in acc[ci * nb..(ci + 1) * nb].iter_mut().zip(vt).zip(vb) {
                            *r -= a * x - b * y;
                        }
                    }
                }
                let oc = own.cell(idx);
                let ec = eq.cell(idx);
                let dst = out.cell_mut(idx);
                for ci in 0..NC {
                    for l in 0..nb {
                        let jj = ci * nb + l;
                        let mass = area * t.norm[l];
                        let tilde = if wb { oc[jj] - ec[jj] } else { oc[jj] };
                        dst[jj] = (acc[jj] - mass * tilde / tau) / mass;
                    }
                }
            }
        }
        Ok(())
    }

    fn alpha_family(&self, fam: Family, opp: &PolyField) -> Result<(f64, f64)> {
        let t = &self.tab;
        let nb = self.nb;
        let np = t.np();
        let g = self.problem.gamma;
        let c = &self.cache[fam.index()];
        let fx = self.pts.w1 * 0.25 * self.mesh.x.h;
        let fy = self.pts.w1 * 0.25 * self.mesh.y.h;
        let mut vals = vec![[0.0; NC]; np];
        let (mut ax, mut ay): (f64, f64) = (0.0, 0.0);
        for j in self.evolved(fam, Dir::Y) {
            for i in self.evolved(fam, Dir::X) {
                let idx = self.mesh.index(fam, i, j);
                let (mut a1x, mut a1y): (f64, f64) = (0.0, 0.0);
                for q in 0..4 {
                    let oi = self.opp_index(fam, opp, i, j, q % 2, q / 2);
                    let cell = opp.cell(oi);
                    for phi in t.crit_opp[q].chunks(nb) {
                        let u = self.eval_at(cell, phi);
                        let bad = || fault(opp.family.name(), oi, format!("inadmissible critical state {u:?}"));
                        a1x = a1x.max(wave_speed_x_2d(&u, g).ok_or_else(bad)?);
                        a1y = a1y.max(wave_speed_y_2d(&u, g).ok_or_else(bad)?);
                    }
                }
                self.opposite_samples(fam, opp, i, j, &mut vals);
                let (mut a2x, mut a2y): (f64, f64) = (0.0, 0.0);
                for p in 0..np {
                    let u = vals[p];
                    let pr = pressure_2d(&u, g);
                    if !(u[0] > 0.0 && pr > 0.0) {
                        return Err(fault(opp.family.name(), idx, format!("inadmissible quadrature state {u:?}")));
                    }
                    let ii = idx * np + p;
                    let (hxv, hyv) =
                        if self.opts.well_balanced { (c.hat_x[ii], c.hat_y[ii]) } else { (c.gx[ii], c.gy[ii]) };
                    let s = ((g - 1.0) * u[0] / (2.0 * pr)).sqrt();
                    a2x = a2x.max(hxv.abs() * s);
                    a2y = a2y.max(hyv.abs() * s);
                }
                ax = ax.max(a1x + fx * a2x);
                ay = ay.max(a1y + fy * a2y);
            }
        }
        if !(ax.is_finite() && ay.is_finite()) {
            return Err(fault(fam.name(), 0, "non-finite wave speed".into()));
        }
        Ok((ax, ay))
    }

    fn troubled_cell(&self, f: &PolyField, eq: &PolyField, i: usize, j: usize) -> bool {
        let nb = self.nb;
        let t = &self.tab;
        let idx = f.index(i, j);
        let pert = |id: usize, c: usize, l: usize| f.coef(id, c, l) - eq.coef(id, c, l);
        let trace = |c: usize, phi: &[f64]| (1..nb).map(|l| pert(idx, c, l) * phi[l]).sum::<f64>();
        (0..NC).any(|c| {
            let m = self.opts.tvb(c);
            let avg = pert(idx, c, 0);
            let x = troubled(
                trace(c, &t.mid_x[1]),
                -trace(c, &t.mid_x[0]),
                pert(f.index(i + 1, j), c, 0) - avg,
                avg - pert(f.index(i - 1, j), c, 0),
                m,
                self.mesh.x.h,
            );
            x || troubled(
                trace(c, &t.mid_y[1]),
                -trace(c, &t.mid_y[0]),
                pert(f.index(i, j + 1), c, 0) - avg,
                avg - pert(f.index(i, j - 1), c, 0),
                m,
                self.mesh.y.h,
            )
        })
    }

    /// Characteristic WENO coefficients along one direction: (linear, quadratic) per component.
    fn weno_dir(&self, f: &PolyField, eq: &PolyField, i: usize, j: usize, d: Dir) -> [[f64; NC]; 2] {
        let g = self.problem.gamma;
        let idx = f.index(i, j);
        let avg: Vec<f64> = (0..NC).map(|c| f.average(idx, c)).collect();
        let dir = if d == Dir::X { 0 } else { 1 };
        let (r, l) = eigensystem(&avg, g, dir).unwrap_or_else(|| {
            let id: Vec<f64> = (0..NC * NC).map(|k| if k % (NC + 1) == 0 { 1.0 } else { 0.0 }).collect();
            (id.clone(), id)
        });
        let pavg = |id: usize, c: usize| f.average(id, c) - eq.average(id, c);
        let mut dch = [[0.0; 5]; NC];
        for m in 0..5 {
            let nid = match d {
                Dir::X => f.index(i + m - 2, j),
                Dir::Y => f.index(i, j + m - 2),
            };
            let diff: [f64; NC] = std::array::from_fn(|c| pavg(nid, c) - pavg(idx, c));
            for a in 0..NC {
                dch[a][m] = (0..NC).map(|b| l[a * NC + b] * diff[b]).sum();
            }
        }
        let ch: [(f64, f64); NC] = std::array::from_fn(|a| weno_coefficients(&dch[a]));
        let mut out = [[0.0; NC]; 2];
        for c in 0..NC {
            out[0][c] = (0..NC).map(|b| r[c * NC + b] * ch[b].0).sum();
            out[1][c] = (0..NC).map(|b| r[c * NC + b] * ch[b].1).sum();
        }
        out
    }

    fn weno_family(&self, f: &mut PolyField, report: &mut LimiterReport) {
        let fam = f.family;
        let eq = &self.eq[fam.index()];
        let nb = self.nb;
        let mut updates = Vec::new();
        for (i, j) in self.evolved_cells(fam) {
            if !self.troubled_cell(f, eq, i, j) {
                continue;
            }
            report.troubled += 1;
            let xs = self.weno_dir(f, eq, i, j, Dir::X);
            let ys = self.weno_dir(f, eq, i, j, Dir::Y);
            let idx = f.index(i, j);
            let mut cell = f.cell(idx).to_vec();
            for c in 0..NC {
                for l in 1..nb {
                    let tilde = match l {
                        1 => xs[0][c],
                        4 => xs[1][c],
                        2 => ys[0][c],
                        5 => ys[1][c],
                        _ => 0.0,
                    };
                    cell[c * nb + l] = eq.coef(idx, c, l) + tilde;
                }
            }
            updates.push((idx, cell));
        }
        for (idx, cell) in updates {
            f.cell_mut(idx).copy_from_slice(&cell);
        }
    }

    fn pp_cells(&self, f: &mut PolyField, cells: &[(usize, usize)], report: &mut LimiterReport) -> Result<()> {
        let name = f.family.name();
        for &(i, j) in cells {
            let idx = f.index(i, j);
            pp_cell(f.cell_mut(idx), self.nb, NC, &self.tab.crit, self.problem.gamma, report)
                .map_err(|e| fault(name, idx, e))?;
        }
        Ok(())
    }

    fn integrate_abs(&self, a: &PolyField, f: &dyn Fn(usize, usize, f64, f64) -> State2) -> Vec<f64> {
        let fam = a.family;
        let nb = self.nb;
        let area = self.mesh.x.h * self.mesh.y.h;
        let mut sum = vec![0.0; NC];
        for (i, j) in self.evolved_cells(fam) {
            let idx = a.index(i, j);
            for (q, &(xi, eta)) in self.err_pts.iter().enumerate() {
                let u = self.eval_at(a.cell(idx), &self.err_phi[q * nb..(q + 1) * nb]);
                let r = f(idx, q, self.mesh.x.coord(fam, i, xi), self.mesh.y.coord(fam, j, eta));
                for c in 0..NC {
                    sum[c] += self.err_w[q] * area * (u[c] - r[c]).abs();
                }
            }
        }
        sum
    }

    pub fn residual_pair(&self, u: &[PolyField; 2], tau: f64, out: &mut [PolyField; 2]) -> Result<()> {
        let [oc, od] = out;
        self.residual_family(Family::Primal, &u[0], &u[1], tau, oc)?;
        self.residual_family(Family::Dual, &u[1], &u[0], tau, od)
    }
}

/// `row += c₀ v₀ + c₁ v₁ + c₂ v₂`.
#[inline]
fn accumulate(row: &mut [f64], c: [f64; 3], v: [&[f64]; 3]) {
    match row.len() {
        6 => accumulate_fixed::<6>(row, c, v),
        10 => accumulate_fixed::<10>(row, c, v),
        n => {
            for l in 0..n {
                row[l] += c[0] * v[0][l] + c[1] * v[1][l] + c[2] * v[2][l];
            }
        }
    }
}

#[inline(always)]
fn accumulate_fixed<const NB: usize>(row: &mut [f64], c: [f64; 3], v: [&[f64]; 3]) {
    let row: &mut [f64; NB] = row.try_into().unwrap();
    let (x, y, z): (&[f64; NB], &[f64; NB], &[f64; NB]) =
        (v[0].try_into().unwrap(), v[1].try_into().unwrap(), v[2].try_into().unwrap());
    for l in 0..NB {
        row[l] += c[0] * x[l] + c[1] * y[l] + c[2] * z[l];
    }
}

fn relabel(e: CdgError, cell: usize) -> CdgError {
    match e {
        CdgError::Positivity { family, detail, .. } => CdgError::Positivity { family, cell, detail },
        other => other,
    }
}

/// Point of the quadrant rule in reference coordinates, for tests.
#[allow(dead_code)]
fn quadrant_point(pts: &PointSets, q: usize, a: usize, b: usize) -> (f64, f64) {
    (half_point(q % 2, pts.gauss[a]), half_point(q / 2, pts.gauss[b]))
}

impl Scheme for Scheme2D {
    fn dim(&self) -> usize {
        2
    }

    fn components(&self) -> usize {
        NC
    }

    fn degree(&self) -> usize {
        self.k
    }

    fn spacing(&self) -> (f64, f64) {
        (self.mesh.x.h, self.mesh.y.h)
    }

    fn lobatto_w1(&self) -> f64 {
        self.pts.w1
    }

    fn gamma(&self) -> f64 {
        self.problem.gamma
    }

    fn options(&self) -> &SchemeOptions {
        &self.opts
    }

    fn equilibrium(&self) -> &[PolyField; 2] {
        &self.eq
    }

    fn initial_fields(&self) -> Result<[PolyField; 2]> {
        let mut u = self.eq.clone();
        let p = &self.problem;
        if !self.opts.well_balanced {
            // the ablation is the plain scheme: L² projection of the full state
            for f in u.iter_mut() {
                let cells: Vec<_> = self.evolved_cells(f.family).collect();
                project_2d(&self.proj, &self.mesh, f, cells.into_iter(), false, |x, y| p.state_2d(x, y, 0.0));
            }
            let mut rep = LimiterReport::new();
            self.post_stage(&mut u, 0.0, &mut rep)?;
            return Ok(u);
        }
        for fam in FAMILIES {
            let mut diff = PolyField::zeros(fam, self.mesh.x.len(fam), self.mesh.y.len(fam), self.nb, NC);
            let cells: Vec<_> = self.evolved_cells(fam).collect();
            project_2d(&self.proj, &self.mesh, &mut diff, cells.iter().copied(), true, |x, y| {
                let (a, b) = (p.state_2d(x, y, 0.0), p.background_2d(x, y));
                std::array::from_fn::<f64, NC, _>(|c| a[c] - b[c])
            });
            let f = &mut u[fam.index()];
            for &(i, j) in &cells {
                let idx = f.index(i, j);
                for (v, d) in f.cell_mut(idx).iter_mut().zip(diff.cell(idx)) {
                    *v += d;
                }
            }
        }
        let mut rep = LimiterReport::new();
        self.post_stage(&mut u, 0.0, &mut rep)?;
        Ok(u)
    }

    fn alpha(&self, u: &[PolyField; 2]) -> Result<(f64, f64)> {
        let (ax, ay) = self.alpha_family(Family::Primal, &u[1])?;
        let (bx, by) = self.alpha_family(Family::Dual, &u[0])?;
        Ok((ax.max(bx), ay.max(by)))
    }

    fn residual(&self, u: &[PolyField; 2], tau: f64, out: &mut [PolyField; 2]) -> Result<()> {
        self.residual_pair(u, tau, out)
    }

    fn post_stage(&self, u: &mut [PolyField; 2], t: f64, report: &mut LimiterReport) -> Result<()> {
        self.fill_ghosts(u, t);
        if self.opts.weno {
            for f in u.iter_mut() {
                self.weno_family(f, report);
            }
            self.fill_ghosts(u, t);
        }
        if self.opts.positivity {
            for f in u.iter_mut() {
                let cells: Vec<_> = self.evolved_cells(f.family).collect();
                self.pp_cells(f, &cells, report)?;
            }
            self.fill_ghosts(u, t);
            // a ghost that cannot be limited is left alone; reading it later faults
            for f in u.iter_mut() {
                for (i, j) in self.ghost_cells(f.family) {
                    let idx = f.index(i, j);
                    let _ = pp_cell(f.cell_mut(idx), self.nb, NC, &self.tab.crit, self.problem.gamma, report);
                }
            }
        }
        Ok(())
    }

    fn diagnostics(&self, u: &[PolyField; 2]) -> Diagnostics {
        let mut d = Diagnostics { min_rho: f64::INFINITY, min_p: f64::INFINITY, totals: [[0.0; 4]; 2] };
        let area = self.mesh.x.h * self.mesh.y.h;
        for f in u {
            let fi = f.family.index();
            for (i, j) in self.evolved_cells(f.family) {
                let idx = f.index(i, j);
                let (r, p) = cell_minima(f.cell(idx), self.nb, NC, &self.tab.crit, self.problem.gamma);
                d.min_rho = d.min_rho.min(r);
                d.min_p = d.min_p.min(p);
                for c in 0..NC {
                    d.totals[fi][c] += f.average(idx, c) * area;
                }
            }
        }
        d
    }

    fn distance(&self, a: &PolyField, b: &PolyField) -> Vec<f64> {
        let nb = self.nb;
        self.integrate_abs(a, &|idx, q, _, _| self.eval_at(b.cell(idx), &self.err_phi[q * nb..(q + 1) * nb]))
    }

    fn distance_to(&self, u: &PolyField, t: f64, f: &dyn Fn(f64, f64, f64) -> [f64; 4]) -> Vec<f64> {
        self.integrate_abs(u, &|_, _, x, y| f(x, y, t))
    }

    fn samples(&self, u: &PolyField) -> Vec<Sample> {
        let fam = u.family;
        self.evolved_cells(fam)
            .map(|(i, j)| Sample {
                x: self.mesh.x.center(fam, i),
                y: self.mesh.y.center(fam, j),
                state: self.eval_at(u.cell(u.index(i, j)), &self.tab.center),
            })
            .collect()
    }

    fn evolved_count(&self, fam: Family) -> usize {
        self.evolved(fam, Dir::X).len() * self.evolved(fam, Dir::Y).len()
    }
}
