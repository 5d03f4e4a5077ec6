//! One-dimensional well-balanced central DG scheme on the primal/dual mesh pair.

use crate::basis::Basis1D;
use crate::error::{CdgError, Result};
use crate::euler::{flux_1d, pressure_1d, wave_speed_1d, State1};
use crate::field::{eval_cell, PolyField};
use crate::limiters::{cell_minima, eigensystem, fault, pp_cell, troubled, weno_coefficients, LimiterReport};
use crate::mesh::{Family, Mesh1D, PointSets};
use crate::problems::{Boundary, ProblemSpec};
use crate::projection::{map_from_opposite_1d, project_1d, ProjTable1D};
use crate::quadrature::gauss_reference;
use crate::scheme::{Diagnostics, Sample, Scheme, SchemeOptions, ERROR_POINTS};

const NC: usize = 3;
const FAMILIES: [Family; 2] = [Family::Primal, Family::Dual];

/// Basis values at the fixed sample points of a cell.
#[derive(Debug, Clone)]
struct Tables {
    ng: usize,
    w: Vec<f64>,
    /// `[(κ ng + α) nb + l]` at own half Gauss points.
    own_phi: Vec<f64>,
    own_dphi: Vec<f64>,
    /// The same points in the coordinates of the overlapping opposite cell.
    opp_phi: Vec<f64>,
    opp_dphi: Vec<f64>,
    phi_right: Vec<f64>,
    phi_left: Vec<f64>,
    phi_center: Vec<f64>,
    crit: Vec<f64>,
    norm: Vec<f64>,
}

impl Tables {
    fn new(pts: &PointSets) -> Tables {
        let k = pts.k;
        let b = Basis1D::new(k);
        let ng = pts.n_gauss();
        let mut t = Tables {
            ng,
            w: pts.gauss_w.clone(),
            own_phi: Vec::new(),
            own_dphi: Vec::new(),
            opp_phi: Vec::new(),
            opp_dphi: Vec::new(),
            phi_right: b.values(1.0),
            phi_left: b.values(-1.0),
            phi_center: b.values(0.0),
            crit: pts.critical_1d.iter().flat_map(|&x| b.values(x)).collect(),
            norm: (0..=k).map(|l| b.norm_sq(l)).collect(),
        };
        for kappa in 0..2 {
            for &x in &pts.half_gauss[kappa] {
                let xo = x + 1.0 - 2.0 * kappa as f64;
                t.own_phi.extend(b.values(x));
                t.own_dphi.extend(b.derivs(x));
                t.opp_phi.extend(b.values(xo));
                t.opp_dphi.extend(b.derivs(xo));
            }
        }
        t
    }
}

/// Opposite-family equilibrium data at the sample points of each own cell.
#[derive(Debug, Clone, Default)]
struct EqCache {
    us: Vec<State1>,
    rho_s: Vec<f64>,
    p_s: Vec<f64>,
    px_s: Vec<f64>,
    /// Analytic φ_x (ablation source).
    phi_x: Vec<f64>,
    /// Discrete (φ̂)_x of the positivity bound.
    phi_hat: Vec<f64>,
    rho_bar_s: Vec<f64>,
    /// p^s at the left and right interfaces (opposite cell centers).
    p_edge: Vec<[f64; 2]>,
}

/// Full one-dimensional discretization.
#[derive(Debug, Clone)]
pub struct Scheme1D {
    pub problem: ProblemSpec,
    pub mesh: Mesh1D,
    pub k: usize,
    pub nb: usize,
    pub opts: SchemeOptions,
    pub pts: PointSets,
    periodic: bool,
    tab: Tables,
    proj: ProjTable1D,
    map_table: ProjTable1D,
    /// Error-rule nodes, weights and basis values.
    err_table: (Vec<f64>, Vec<f64>, Vec<f64>),
    eq: [PolyField; 2],
    map_eq: PolyField,
    cache: [EqCache; 2],
}

fn copy_cell(f: &mut PolyField, from: usize, to: usize) {
    let st = f.stride();
    f.data.copy_within(from * st..(from + 1) * st, to * st);
}

/// Reflect cell `from` about the wall into `to`: odd modes and the momentum flip sign.
fn mirror_cell(f: &mut PolyField, from: usize, to: usize) {
    let nb = f.nb;
    for c in 0..NC {
        for l in 0..nb {
            let sign = if l % 2 == 1 { -1.0 } else { 1.0 } * if c == 1 { -1.0 } else { 1.0 };
            let v = f.coef(from, c, l);
            f.set(to, c, l, sign * v);
        }
    }
}

impl Scheme1D {
    pub fn new(problem: ProblemSpec, k: usize, n: usize, opts: SchemeOptions) -> Result<Scheme1D> {
        if problem.dim != 1 {
            return Err(CdgError::config(format!("{} is not one-dimensional", problem.id)));
        }
        if !(1..=3).contains(&k) {
            return Err(CdgError::config(format!("one-dimensional degree must be 1..=3, got {k}")));
        }
        if opts.tvb_m.is_empty() || (opts.tvb_m.len() != 1 && opts.tvb_m.len() != NC) {
            return Err(CdgError::config("limiter.tvb_m needs 1 or 3 entries"));
        }
        if opts.tvb_m.iter().any(|&m| !(m >= 0.0)) {
            return Err(CdgError::config("TVB constants must be nonnegative"));
        }
        problem.bc.validate(1)?;
        let mesh = Mesh1D::new(problem.x.0, problem.x.1, n)?;
        let pts = PointSets::new(k)?;
        let err = gauss_reference(ERROR_POINTS)?;
        let basis = Basis1D::new(k);
        let err_phi = err.nodes.iter().flat_map(|&x| basis.values(x)).collect();
        let empty = |fam: Family| PolyField::zeros(fam, mesh.x.len(fam), 1, k + 1, NC);
        let mut s = Scheme1D {
            periodic: problem.bc.x_periodic(),
            tab: Tables::new(&pts),
            proj: ProjTable1D::new(k, k + 3)?,
            map_table: ProjTable1D::new(k, k + 1)?,
            err_table: (err.nodes, err.weights, err_phi),
            eq: [empty(Family::Primal), empty(Family::Dual)],
            map_eq: empty(Family::Dual),
            cache: Default::default(),
            problem,
            mesh,
            k,
            nb: k + 1,
            opts,
            pts,
        };
        s.build_equilibrium()?;
        s.cache = [s.build_cache(Family::Primal)?, s.build_cache(Family::Dual)?];
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.mesh.x.n
    }

    pub fn evolved(&self, fam: Family) -> std::ops::Range<usize> {
        self.mesh.x.evolved(fam, self.periodic)
    }

    /// Ghost storage indices of a family (cells outside the evolved range that are filled).
    pub fn ghosts(&self, fam: Family) -> Vec<usize> {
        let n = self.n();
        match (fam, self.periodic) {
            (Family::Primal, _) => vec![0, 1, n + 2, n + 3],
            (Family::Dual, true) => vec![0, 1, n + 2, n + 3, n + 4],
            (Family::Dual, false) => vec![1, 2, n + 2, n + 3],
        }
    }

    fn eval_at(&self, cell: &[f64], phi: &[f64]) -> State1 {
        let mut v = [0.0; NC];
        eval_cell(cell, self.nb, phi, &mut v);
        v
    }

    fn background_projection(&self, field: &mut PolyField, cells: impl Iterator<Item = usize>) {
        let p = &self.problem;
        project_1d(&self.proj, &self.mesh.x, field, cells, true, |x| p.background_1d(x));
    }

    fn build_equilibrium(&mut self) -> Result<()> {
        let n = self.n();
        let mut c = self.eq[0].clone();
        self.background_projection(&mut c, self.evolved(Family::Primal));
        let sides =
            [(self.problem.bc.x_lo, [1usize, 0], [2usize, 3]), (self.problem.bc.x_hi, [n + 2, n + 3], [n + 1, n])];
        for &(b, ghosts, inner) in &sides {
            match b {
                Boundary::Periodic => {
                    for g in ghosts {
                        copy_cell(&mut c, if g < 2 { g + n } else { g - n }, g);
                    }
                }
                Boundary::Reflective => {
                    for i in 0..2 {
                        mirror_cell(&mut c, inner[i], ghosts[i]);
                    }
                }
                _ => self.background_projection(&mut c, ghosts.into_iter()),
            }
        }
        let mut d = self.eq[1].clone();
        self.background_projection(&mut d, self.evolved(Family::Dual));
        if self.periodic {
            for g in self.ghosts(Family::Dual) {
                copy_cell(&mut d, if g < 2 { g + n } else { g - n }, g);
            }
        } else {
            for &(b, ghosts) in &[(self.problem.bc.x_lo, [2usize, 1]), (self.problem.bc.x_hi, [n + 2, n + 3])] {
                for g in ghosts {
                    if b == Boundary::Reflective {
                        map_from_opposite_1d(&self.map_table, &c, g, d.cell_mut(g));
                    } else {
                        self.background_projection(&mut d, std::iter::once(g));
                    }
                }
            }
        }
        let mut rep = LimiterReport::new();
        for (f, fam) in [(&mut c, Family::Primal), (&mut d, Family::Dual)] {
            let cells: Vec<usize> = self.evolved(fam).chain(self.ghosts(fam)).collect();
            for s in cells {
                // outer ghosts only feed boundary rules that never read them if inadmissible
                let needed = self.evolved(fam).contains(&s) || (fam == Family::Dual && (2..=self.n() + 2).contains(&s));
                let r = pp_cell(f.cell_mut(s), self.nb, NC, &self.tab.crit, self.problem.gamma, &mut rep);
                if let (Err(e), true) = (r, needed) {
                    return Err(CdgError::setup(format!("projected equilibrium, {} cell {s}: {e}", fam.name())));
                }
            }
        }
        if !self.periodic {
            for g in self.ghosts(Family::Dual) {
                map_from_opposite_1d(&self.map_table, &c, g, self.map_eq.cell_mut(g));
            }
        }
        self.eq = [c, d];
        Ok(())
    }

    /// Opposite-field samples at the half-cell Gauss points of own cell `s`, with
    /// the own-cell averages of ρ and m.
    #[inline]
    fn opposite_samples(&self, fam: Family, opp: &PolyField, s: usize, vals: &mut [State1; 8]) -> (f64, f64) {
        let ng = self.tab.ng;
        let nb = self.nb;
        let off = fam.offset();
        let (mut rbar, mut mbar) = (0.0, 0.0);
        for p in 0..2 * ng {
            let so = (s as isize + (p / ng) as isize + off) as usize;
            eval_cell(opp.cell(so), nb, &self.tab.opp_phi[p * nb..(p + 1) * nb], &mut vals[p]);
            let w = self.tab.w[p % ng];
            rbar += w * vals[p][0];
            mbar += w * vals[p][1];
        }
        (0.5 * rbar, 0.5 * mbar)
    }

    fn build_cache(&self, fam: Family) -> Result<EqCache> {
        let len = self.mesh.x.len(fam);
        let np = 2 * self.tab.ng;
        let nb = self.nb;
        let g = self.problem.gamma;
        let off = fam.offset();
        let opp = &self.eq[fam.opposite().index()];
        let scale = 2.0 / self.mesh.dx();
        let mut c = EqCache {
            us: vec![[0.0; NC]; len * np],
            rho_s: vec![0.0; len * np],
            p_s: vec![0.0; len * np],
            px_s: vec![0.0; len * np],
            phi_x: vec![0.0; len * np],
            phi_hat: vec![0.0; len * np],
            rho_bar_s: vec![0.0; len],
            p_edge: vec![[0.0; 2]; len],
        };
        let mut vals = [[0.0; NC]; 8];
        for s in self.evolved(fam) {
            let (rbar, _) = self.opposite_samples(fam, opp, s, &mut vals);
            if !(rbar > 0.0) {
                return Err(CdgError::setup(format!(
                    "nonpositive equilibrium average density near {} cell {s}",
                    fam.name()
                )));
            }
            c.rho_bar_s[s] = rbar;
            let sl = (s as isize + off) as usize;
            let ul = self.eval_at(opp.cell(sl), &self.tab.phi_center);
            let ur = self.eval_at(opp.cell(sl + 1), &self.tab.phi_center);
            c.p_edge[s] = [pressure_1d(&ul, g), pressure_1d(&ur, g)];
            // traces of p^s at the own center from the two opposite cells
            let um = self.eval_at(opp.cell(sl), &self.tab.phi_right);
            let up = self.eval_at(opp.cell(sl + 1), &self.tab.phi_left);
            let jump = (pressure_1d(&um, g) - pressure_1d(&up, g)) / (rbar * self.mesh.dx());
            for p in 0..np {
                let i = s * np + p;
                let so = sl + p / self.tab.ng;
                let u = vals[p];
                let du = self.eval_at(opp.cell(so), &self.tab.opp_dphi[p * nb..(p + 1) * nb]);
                if !(u[0] > 0.0) {
                    return Err(CdgError::setup(format!(
                        "nonpositive equilibrium density near {} cell {s}",
                        fam.name()
                    )));
                }
                // p = (γ-1)(E - m²/(2ρ))
                let dp = (g - 1.0) * (du[2] - u[1] * du[1] / u[0] + 0.5 * u[1] * u[1] * du[0] / (u[0] * u[0]));
                c.us[i] = u;
                c.rho_s[i] = u[0];
                c.p_s[i] = pressure_1d(&u, g);
                c.px_s[i] = scale * dp;
                let x = self.mesh.x.coord(fam, s, self.pts.half_gauss[p / self.tab.ng][p % self.tab.ng]);
                c.phi_x[i] = self.problem.potential.gradient(x, 0.0).0;
                c.phi_hat[i] = jump - c.px_s[i] / u[0];
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
        let np = 2 * ng;
        let g = self.problem.gamma;
        let hx = 0.5 * self.mesh.dx();
        let wb = self.opts.well_balanced;
        let c = &self.cache[fam.index()];
        let eq = &self.eq[fam.index()];
        let off = fam.offset();
        out.data.iter_mut().for_each(|v| *v = 0.0);
        let mut vals = [[0.0; NC]; 8];
        for s in self.evolved(fam) {
            let (rbar, mbar) = self.opposite_samples(fam, opp, s, &mut vals);
            let (r, rm) = if wb { (rbar / c.rho_bar_s[s], mbar / c.rho_bar_s[s]) } else { (0.0, 0.0) };
            let mut acc = [0.0; NC * 4];
            for p in 0..np {
                let i = s * np + p;
                let u = vals[p];
                let pr = pressure_1d(&u, g);
                if !(u[0] > 0.0 && pr > 0.0) {
                    let so = (s as isize + (p / ng) as isize + off) as usize;
                    return Err(fault(opp.family.name(), so, format!("rho={:e} p={pr:e} at a quadrature point", u[0])));
                }
                let f = flux_1d(&u, g);
                let (gf, src, diss) = if wb {
                    let (ps, psx, rs, us) = (c.p_s[i], c.px_s[i], c.rho_s[i], c.us[i]);
                    (
                        [f[0], f[1] - r * ps, f[2] - rm * ps],
                        [0.0, (u[0] / rs - r) * psx, (u[1] / rs - rm) * psx],
                        [u[0] - us[0], u[1] - us[1], u[2] - us[2]],
                    )
                } else {
                    let phx = c.phi_x[i];
                    (f, [0.0, -u[0] * phx, -u[1] * phx], u)
                };
                let w = t.w[p % ng];
                let phi = &t.own_phi[p * nb..(p + 1) * nb];
                let dphi = &t.own_dphi[p * nb..(p + 1) * nb];
                for ci in 0..NC {
                    let a = w * gf[ci];
                    let b = hx * w * (src[ci] + diss[ci] / tau);
                    for l in 0..nb {
                        acc[ci * nb + l] += a * dphi[l] + b * phi[l];
                    }
                }
            }
            let sl = (s as isize + off) as usize;
            let ul = self.eval_at(opp.cell(sl), &t.phi_center);
            let ur = self.eval_at(opp.cell(sl + 1), &t.phi_center);
            for (u, so) in [(&ul, sl), (&ur, sl + 1)] {
                let pr = pressure_1d(u, g);
                if !(u[0] > 0.0 && pr > 0.0) {
                    return Err(fault(opp.family.name(), so, format!("rho={:e} p={pr:e} at an interface", u[0])));
                }
            }
            let mut fl = flux_1d(&ul, g);
            let mut fr = flux_1d(&ur, g);
            if wb {
                let [pl, pr] = c.p_edge[s];
                fl[1] -= r * pl;
                fl[2] -= rm * pl;
                fr[1] -= r * pr;
                fr[2] -= rm * pr;
            }
            let oc = own.cell(s);
            let ec = eq.cell(s);
            let dst = out.cell_mut(s);
            for ci in 0..NC {
                for l in 0..nb {
                    let j = ci * nb + l;
                    let a = acc[j] - (fr[ci] * t.phi_right[l] - fl[ci] * t.phi_left[l]);
                    let mass = hx * t.norm[l];
                    let tilde = if wb { oc[j] - ec[j] } else { oc[j] };
                    dst[j] = (a - mass * tilde / tau) / mass;
                }
            }
        }
        Ok(())
    }

    fn alpha_family(&self, fam: Family, opp: &PolyField) -> Result<f64> {
        let t = &self.tab;
        let ng = t.ng;
        let g = self.problem.gamma;
        let c = &self.cache[fam.index()];
        let off = fam.offset();
        let factor = self.pts.w1 * 0.5 * self.mesh.dx();
        let mut vals = [[0.0; NC]; 8];
        let mut alpha: f64 = 0.0;
        for s in self.evolved(fam) {
            let sl = (s as isize + off) as usize;
            let mut a1: f64 = 0.0;
            for so in [sl, sl + 1] {
                let u = self.eval_at(opp.cell(so), &t.phi_center);
                let a = wave_speed_1d(&u, g)
                    .ok_or_else(|| fault(opp.family.name(), so, format!("inadmissible interface state {u:?}")))?;
                a1 = a1.max(a);
            }
            self.opposite_samples(fam, opp, s, &mut vals);
            let mut a2: f64 = 0.0;
            for p in 0..2 * ng {
                let u = vals[p];
                let pr = pressure_1d(&u, g);
                if !(u[0] > 0.0 && pr > 0.0) {
                    return Err(fault(opp.family.name(), sl + p / ng, format!("inadmissible quadrature state {u:?}")));
                }
                let i = s * 2 * ng + p;
                let ph = if self.opts.well_balanced { c.phi_hat[i] } else { c.phi_x[i] };
                a2 = a2.max(ph.abs() * ((g - 1.0) * u[0] / (2.0 * pr)).sqrt());
            }
            alpha = alpha.max(a1 + factor * a2);
        }
        if !alpha.is_finite() {
            return Err(fault(fam.name(), 0, "non-finite wave speed".into()));
        }
        Ok(alpha)
    }

    fn project_exact(&self, f: &mut PolyField, cells: &[usize], t: f64) {
        let p = &self.problem;
        project_1d(&self.proj, &self.mesh.x, f, cells.iter().copied(), true, |x| p.state_1d(x, t));
    }

    fn fill_primal(&self, u: &mut PolyField, t: f64) {
        let n = self.n();
        let eq = &self.eq[0];
        let g = self.problem.gamma;
        let sides =
            [(self.problem.bc.x_lo, [1usize, 0], [2usize, 3]), (self.problem.bc.x_hi, [n + 2, n + 3], [n + 1, n])];
        for &(b, ghosts, inner) in &sides {
            match b {
                Boundary::Periodic => {
                    for gh in ghosts {
                        copy_cell(u, if gh < 2 { gh + n } else { gh - n }, gh);
                    }
                }
                Boundary::Reflective => {
                    for i in 0..2 {
                        mirror_cell(u, inner[i], ghosts[i]);
                    }
                }
                Boundary::Dirichlet => self.project_exact(u, &ghosts, t),
                Boundary::Equilibrium => {
                    for gh in ghosts {
                        u.cell_mut(gh).copy_from_slice(eq.cell(gh));
                    }
                }
                Boundary::OutflowState => {
                    for gh in ghosts {
                        copy_cell(u, inner[0], gh);
                    }
                }
                Boundary::OutflowEq => {
                    for gh in ghosts {
                        let st = u.stride();
                        for j in 0..st {
                            let v = eq.cell(gh)[j] + (u.cell(inner[0])[j] - eq.cell(inner[0])[j]);
                            u.cell_mut(gh)[j] = v;
                        }
                        let avg = [u.average(gh, 0), u.average(gh, 1), u.average(gh, 2)];
                        if !(avg[0] > 0.0 && pressure_1d(&avg, g) > 0.0) {
                            copy_cell(u, inner[0], gh);
                        }
                    }
                }
            }
        }
    }

    fn fill_dual(&self, d: &mut PolyField, c: &PolyField, t: f64) {
        let n = self.n();
        if self.periodic {
            for gh in self.ghosts(Family::Dual) {
                copy_cell(d, if gh < 2 { gh + n } else { gh - n }, gh);
            }
            return;
        }
        let eq = &self.eq[1];
        let mut mapped = vec![0.0; d.stride()];
        for &(b, ghosts) in &[(self.problem.bc.x_lo, [2usize, 1]), (self.problem.bc.x_hi, [n + 2, n + 3])] {
            match b {
                Boundary::Dirichlet => self.project_exact(d, &ghosts, t),
                Boundary::Equilibrium => {
                    for gh in ghosts {
                        d.cell_mut(gh).copy_from_slice(eq.cell(gh));
                    }
                }
                _ => {
                    for gh in ghosts {
                        map_from_opposite_1d(&self.map_table, c, gh, &mut mapped);
                        let me = self.map_eq.cell(gh);
                        let ec = eq.cell(gh);
                        for (j, v) in d.cell_mut(gh).iter_mut().enumerate() {
                            *v = ec[j] + (mapped[j] - me[j]);
                        }
                    }
                }
            }
        }
    }

    pub fn fill_ghosts(&self, u: &mut [PolyField; 2], t: f64) {
        let [c, d] = u;
        self.fill_primal(c, t);
        self.fill_dual(d, c, t);
    }

    /// Troubled-cell detection on the perturbation and characteristic WENO.
    fn weno_family(&self, f: &mut PolyField, report: &mut LimiterReport) {
        let fam = f.family;
        let nb = self.nb;
        let eq = &self.eq[fam.index()];
        let h = self.mesh.dx();
        let g = self.problem.gamma;
        let pert = |s: usize, c: usize, l: usize| f.coef(s, c, l) - eq.coef(s, c, l);
        let trace = |s: usize, c: usize, phi: &[f64]| (1..nb).map(|l| pert(s, c, l) * phi[l]).sum::<f64>();
        let mut updates: Vec<(usize, Vec<f64>)> = Vec::new();
        for s in self.evolved(fam) {
            let bad = (0..NC).any(|c| {
                let avg = pert(s, c, 0);
                troubled(
                    trace(s, c, &self.tab.phi_right),
                    -trace(s, c, &self.tab.phi_left),
                    pert(s + 1, c, 0) - avg,
                    avg - pert(s - 1, c, 0),
                    self.opts.tvb(c),
                    h,
                )
            });
            if !bad {
                continue;
            }
            report.troubled += 1;
            let avg: Vec<f64> = (0..NC).map(|c| f.average(s, c)).collect();
            let (r, l) = eigensystem(&avg, g, 0).unwrap_or_else(|| {
                let id: Vec<f64> = (0..NC * NC).map(|i| if i % (NC + 1) == 0 { 1.0 } else { 0.0 }).collect();
                (id.clone(), id)
            });
            let mut d = [[0.0; 5]; NC];
            for m in 0..5 {
                let sm = s + m - 2;
                let diff: Vec<f64> = (0..NC).map(|c| pert(sm, c, 0) - pert(s, c, 0)).collect();
                for i in 0..NC {
                    d[i][m] = (0..NC).map(|j| l[i * NC + j] * diff[j]).sum();
                }
            }
            let mut ch = [[0.0; 2]; NC];
            for i in 0..NC {
                let (c1, c2) = weno_coefficients(&d[i]);
                ch[i] = [c1, if nb > 2 { c2 } else { 0.0 }];
            }
            let mut cell = f.cell(s).to_vec();
            for c in 0..NC {
                for lm in 1..nb {
                    let tilde = if lm <= 2 { (0..NC).map(|j| r[c * NC + j] * ch[j][lm - 1]).sum() } else { 0.0 };
                    cell[c * nb + lm] = eq.coef(s, c, lm) + tilde;
                }
            }
            updates.push((s, cell));
        }
        for (s, cell) in updates {
            f.cell_mut(s).copy_from_slice(&cell);
        }
    }

    fn pp_cells(
        &self,
        f: &mut PolyField,
        cells: impl Iterator<Item = usize>,
        report: &mut LimiterReport,
    ) -> Result<()> {
        let name = f.family.name();
        for s in cells {
            pp_cell(f.cell_mut(s), self.nb, NC, &self.tab.crit, self.problem.gamma, report)
                .map_err(|e| fault(name, s, e))?;
        }
        Ok(())
    }

    /// Σ ∫|a − f| over the evolved cells of `a`'s family.
    fn integrate_abs(&self, a: &PolyField, f: &dyn Fn(usize, usize, f64) -> State1) -> Vec<f64> {
        let fam = a.family;
        let (nodes, w, phi) = &self.err_table;
        let nq = w.len();
        let nb = self.nb;
        let mut sum = vec![0.0; NC];
        for s in self.evolved(fam) {
            for q in 0..nq {
                let u = self.eval_at(a.cell(s), &phi[q * nb..(q + 1) * nb]);
                let r = f(s, q, self.mesh.x.coord(fam, s, nodes[q]));
                for c in 0..NC {
                    sum[c] += w[q] * self.mesh.dx() * (u[c] - r[c]).abs();
                }
            }
        }
        sum
    }

    /// Coefficient time derivatives of the evolved cells of each family.
    pub fn residual_pair(&self, u: &[PolyField; 2], tau: f64, out: &mut [PolyField; 2]) -> Result<()> {
        let [oc, od] = out;
        self.residual_family(Family::Primal, &u[0], &u[1], tau, oc)?;
        self.residual_family(Family::Dual, &u[1], &u[0], tau, od)
    }
}

impl Scheme for Scheme1D {
    fn dim(&self) -> usize {
        1
    }

    fn components(&self) -> usize {
        NC
    }

    fn degree(&self) -> usize {
        self.k
    }

    fn spacing(&self) -> (f64, f64) {
        (self.mesh.dx(), f64::INFINITY)
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
                let fam = f.family;
                project_1d(&self.proj, &self.mesh.x, f, self.evolved(fam), false, |x| p.state_1d(x, 0.0));
            }
            let mut rep = LimiterReport::new();
            self.post_stage(&mut u, 0.0, &mut rep)?;
            return Ok(u);
        }
        for fam in FAMILIES {
            let mut diff = PolyField::zeros(fam, self.mesh.x.len(fam), 1, self.nb, NC);
            project_1d(&self.proj, &self.mesh.x, &mut diff, self.evolved(fam), true, |x| {
                let (a, b) = (p.state_1d(x, 0.0), p.background_1d(x));
                [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
            });
            let f = &mut u[fam.index()];
            for s in self.evolved(fam) {
                for (v, d) in f.cell_mut(s).iter_mut().zip(diff.cell(s)) {
                    *v += d;
                }
            }
        }
        let mut rep = LimiterReport::new();
        self.post_stage(&mut u, 0.0, &mut rep)?;
        Ok(u)
    }

    fn alpha(&self, u: &[PolyField; 2]) -> Result<(f64, f64)> {
        let a = self.alpha_family(Family::Primal, &u[1])?.max(self.alpha_family(Family::Dual, &u[0])?);
        Ok((a, 0.0))
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
                self.pp_cells(f, self.evolved(f.family), report)?;
            }
            self.fill_ghosts(u, t);
            // a ghost that cannot be limited is left alone; reading it later faults
            for f in u.iter_mut() {
                for g in self.ghosts(f.family) {
                    let _ = pp_cell(f.cell_mut(g), self.nb, NC, &self.tab.crit, self.problem.gamma, report);
                }
            }
        }
        Ok(())
    }

    fn diagnostics(&self, u: &[PolyField; 2]) -> Diagnostics {
        let mut d = Diagnostics { min_rho: f64::INFINITY, min_p: f64::INFINITY, totals: [[0.0; 4]; 2] };
        for f in u {
            let fi = f.family.index();
            for s in self.evolved(f.family) {
                let (r, p) = cell_minima(f.cell(s), self.nb, NC, &self.tab.crit, self.problem.gamma);
                d.min_rho = d.min_rho.min(r);
                d.min_p = d.min_p.min(p);
                for c in 0..NC {
                    d.totals[fi][c] += f.average(s, c) * self.mesh.dx();
                }
            }
        }
        d
    }

    fn distance(&self, a: &PolyField, b: &PolyField) -> Vec<f64> {
        let phi = &self.err_table.2;
        let nb = self.nb;
        self.integrate_abs(a, &|s, q, _| self.eval_at(b.cell(s), &phi[q * nb..(q + 1) * nb]))
    }

    fn distance_to(&self, u: &PolyField, t: f64, f: &dyn Fn(f64, f64, f64) -> [f64; 4]) -> Vec<f64> {
        self.integrate_abs(u, &|_, _, x| {
            let v = f(x, 0.0, t);
            [v[0], v[1], v[2]]
        })
    }

    fn samples(&self, u: &PolyField) -> Vec<Sample> {
        let fam = u.family;
        let mut out = Vec::new();
        for s in self.evolved(fam) {
            for (xi, phi) in [(-1.0, &self.tab.phi_left), (0.0, &self.tab.phi_center)] {
                let v = self.eval_at(u.cell(s), phi);
                out.push(Sample { x: self.mesh.x.coord(fam, s, xi), y: 0.0, state: [v[0], v[1], v[2], 0.0] });
            }
        }
        out
    }

    fn evolved_count(&self, fam: Family) -> usize {
        self.evolved(fam).len()
    }
}
