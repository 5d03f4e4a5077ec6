//! Built-in test problems: initial data, gravity, hydrostatic background,
//! boundary rules and exact solutions.

use std::f64::consts::PI;

use crate::error::{CdgError, Result};
use crate::euler::{conservative_1d, conservative_2d, exner, Potential, Profile, State1, State2};

/// Ghost-cell rule for one side of the domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Periodic,
    /// Mirror image with the wall-normal momentum negated.
    Reflective,
    /// Projection of the exact solution at the current time.
    Dirichlet,
    /// The hydrostatic background itself.
    Equilibrium,
    /// Copy of the adjacent interior cell.
    OutflowState,
    /// Background ghost plus the copied perturbation of the adjacent cell.
    OutflowEq,
}

impl Boundary {
    pub fn name(self) -> &'static str {
        match self {
            Boundary::Periodic => "periodic",
            Boundary::Reflective => "reflective",
            Boundary::Dirichlet => "dirichlet",
            Boundary::Equilibrium => "equilibrium",
            Boundary::OutflowState => "outflow",
            Boundary::OutflowEq => "outflow-eq",
        }
    }
}

/// Boundary rules on the four sides; y entries are ignored in one dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sides {
    pub x_lo: Boundary,
    pub x_hi: Boundary,
    pub y_lo: Boundary,
    pub y_hi: Boundary,
}

impl Sides {
    pub fn all(b: Boundary) -> Sides {
        Sides { x_lo: b, x_hi: b, y_lo: b, y_hi: b }
    }

    pub fn x_periodic(&self) -> bool {
        self.x_lo == Boundary::Periodic
    }

    pub fn y_periodic(&self) -> bool {
        self.y_lo == Boundary::Periodic
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        let pairs: &[(Boundary, Boundary)] =
            if dim == 1 { &[(self.x_lo, self.x_hi)] } else { &[(self.x_lo, self.x_hi), (self.y_lo, self.y_hi)] };
        for &(a, b) in pairs {
            if (a == Boundary::Periodic) != (b == Boundary::Periodic) {
                return Err(CdgError::config("periodic boundaries must be paired"));
            }
        }
        Ok(())
    }
}

/// Initial-data family of a problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Setup {
    Manufactured1D,
    Isothermal1D,
    Rarefaction1D,
    Leblanc1D,
    Manufactured2D,
    Isothermal2D,
    Polytropic2D,
    Rarefaction2D,
    Blast2D,
    RisingBubble,
    TwoLayerStationary,
    RtPerturbed,
    PeriodicSmooth1D,
    PeriodicSmooth2D,
}

/// Fully populated description of one built-in problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub id: &'static str,
    pub summary: &'static str,
    pub setup: Setup,
    pub dim: usize,
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub gamma: f64,
    pub potential: Potential,
    pub equilibrium: Profile,
    pub bc: Sides,
    pub k: usize,
    pub n: (usize, usize),
    pub t_final: f64,
    /// Final time of the well-balance check, where the problem has one.
    pub wb_t_final: Option<f64>,
    /// Perturbation amplitude.
    pub eta: f64,
    pub weno: bool,
    pub tvb_m: Vec<f64>,
    pub has_exact: bool,
}

fn polytropic_alpha(k: f64, g: f64) -> f64 {
    (2.0 * PI * g / k).sqrt()
}

impl ProblemSpec {
    /// Conservative state of a one-dimensional problem at (x, t).
    ///
    /// Only problems with an exact solution depend on t.
    pub fn state_1d(&self, x: f64, t: f64) -> State1 {
        let g = self.gamma;
        match self.setup {
            Setup::Manufactured1D => {
                let a = PI * (x - t);
                conservative_1d(1.0 + 0.2 * a.sin(), 1.0, 4.5 + t - x + 0.2 * a.cos() / PI, g)
            }
            Setup::Isothermal1D => {
                let (rho, p) = self.equilibrium.eval(x, 0.0);
                conservative_1d(rho, 0.0, p + self.eta * (-100.0 * (x - 0.5).powi(2)).exp(), g)
            }
            Setup::Rarefaction1D => conservative_1d(7.0, if x < 0.0 { -1.0 } else { 1.0 }, 0.2, g),
            Setup::Leblanc1D => {
                if x < 0.0 {
                    conservative_1d(2.0, 0.0, 1e9, g)
                } else {
                    conservative_1d(1e-3, 0.0, 1.0, g)
                }
            }
            Setup::PeriodicSmooth1D => {
                let a = 2.0 * PI * (x - t);
                conservative_1d(1.0 + 0.2 * a.sin(), 1.0, 1.0, g)
            }
            _ => panic!("{} is not a one-dimensional problem", self.id),
        }
    }

    /// Conservative state of a two-dimensional problem at (x, y, t).
    pub fn state_2d(&self, x: f64, y: f64, t: f64) -> State2 {
        let g = self.gamma;
        match self.setup {
            Setup::Manufactured2D => {
                let a = PI * (x + y - 2.0 * t);
                conservative_2d(1.0 + 0.2 * a.sin(), 1.0, 1.0, 4.5 + 2.0 * t - x - y + 0.2 * a.cos() / PI, g)
            }
            Setup::Isothermal2D => {
                let (rho, p) = self.equilibrium.eval(x, y);
                let Profile::Isothermal { rho0, p0, .. } = self.equilibrium else { unreachable!() };
                let r2 = (x - 0.3).powi(2) + (y - 0.3).powi(2);
                let dp = self.eta * (-100.0 * rho0 / p0 * r2).exp();
                conservative_2d(rho, 0.0, 0.0, p + dp, g)
            }
            Setup::Polytropic2D => {
                let (rho, p) = self.equilibrium.eval(x, y);
                let dp = self.eta * (-100.0 * (x * x + y * y)).exp();
                conservative_2d(rho, 0.0, 0.0, p + dp, g)
            }
            Setup::Rarefaction2D => {
                let (rho, p) = self.equilibrium.eval(x, y);
                conservative_2d(rho, if x < 0.5 { -2.0 } else { 2.0 }, 0.0, p, g)
            }
            Setup::Blast2D => {
                let (rho, p) = self.equilibrium.eval(x, y);
                let r = (x * x + y * y).sqrt();
                conservative_2d(rho, 0.0, 0.0, if r < 0.1 { p + 100.0 } else { p }, g)
            }
            Setup::RisingBubble => {
                let Profile::Exner { theta0, p0, r_gas, gamma, g: grav } = self.equilibrium else { unreachable!() };
                let r = ((x - 500.0).powi(2) + (y - 350.0).powi(2)).sqrt();
                let dtheta = if r <= 250.0 { 0.25 * (1.0 + (PI * r / 250.0).cos()) } else { 0.0 };
                let pi = exner(y, theta0, r_gas, gamma, grav);
                let p = p0 * pi.powf(gamma / (gamma - 1.0));
                let rho = p0 / (r_gas * (theta0 + dtheta)) * pi.powf(1.0 / (gamma - 1.0));
                conservative_2d(rho, 0.0, 0.0, p, g)
            }
            Setup::TwoLayerStationary => {
                let (rho, p) = self.equilibrium.eval(x, y);
                conservative_2d(rho, 0.0, 0.0, p, g)
            }
            Setup::RtPerturbed => {
                let (rho, p) = self.equilibrium.eval(x, y);
                let v = -self.eta * (g * p / rho).sqrt() * (8.0 * PI * x).cos();
                conservative_2d(rho, 0.0, v, p, g)
            }
            Setup::PeriodicSmooth2D => {
                let a = 2.0 * PI * (x + y - 2.0 * t);
                conservative_2d(1.0 + 0.2 * a.sin(), 1.0, 1.0, 1.0, g)
            }
            _ => panic!("{} is not a two-dimensional problem", self.id),
        }
    }

    /// Conservative hydrostatic background in one dimension.
    pub fn background_1d(&self, x: f64) -> State1 {
        let (rho, p) = self.equilibrium.eval(x, 0.0);
        conservative_1d(rho, 0.0, p, self.gamma)
    }

    pub fn background_2d(&self, x: f64, y: f64) -> State2 {
        let (rho, p) = self.equilibrium.eval(x, y);
        conservative_2d(rho, 0.0, 0.0, p, self.gamma)
    }

    /// Whether the initial data coincide with the hydrostatic background.
    pub fn is_stationary(&self) -> bool {
        match self.setup {
            Setup::TwoLayerStationary => true,
            Setup::Isothermal1D | Setup::Isothermal2D | Setup::Polytropic2D => self.eta == 0.0,
            _ => false,
        }
    }

    pub fn uses_boundary(&self, b: Boundary) -> bool {
        let s = self.bc;
        s.x_lo == b || s.x_hi == b || (self.dim == 2 && (s.y_lo == b || s.y_hi == b))
    }
}

fn spec_1d(id: &'static str, summary: &'static str, setup: Setup) -> ProblemSpec {
    ProblemSpec {
        id,
        summary,
        setup,
        dim: 1,
        x: (0.0, 1.0),
        y: (0.0, 0.0),
        gamma: 1.4,
        potential: Potential::Zero,
        equilibrium: Profile::Uniform { rho: 1.0, p: 1.0 },
        bc: Sides::all(Boundary::OutflowEq),
        k: 2,
        n: (50, 1),
        t_final: 0.1,
        wb_t_final: None,
        eta: 0.0,
        weno: false,
        tvb_m: vec![0.0],
        has_exact: false,
    }
}

fn spec_2d(id: &'static str, summary: &'static str, setup: Setup) -> ProblemSpec {
    ProblemSpec { dim: 2, y: (0.0, 1.0), n: (50, 50), ..spec_1d(id, summary, setup) }
}

/// Every built-in problem with its default parameters.
pub fn catalog() -> Vec<ProblemSpec> {
    let lin_x = Potential::Linear { gx: 1.0, gy: 0.0 };
    let lin_xy = Potential::Linear { gx: 1.0, gy: 1.0 };
    let alpha = polytropic_alpha(1.0, 1.0);
    let poly = |rho_c: f64| Potential::Polytropic { k: 1.0, rho_c, alpha };
    let quad = Potential::Quadratic { x0: 0.5, y0: 0.5 };
    let rt_sides = Sides {
        x_lo: Boundary::Reflective,
        x_hi: Boundary::Reflective,
        y_lo: Boundary::Equilibrium,
        y_hi: Boundary::Equilibrium,
    };
    vec![
        ProblemSpec {
            x: (0.0, 2.0),
            potential: lin_x,
            equilibrium: Profile::LinearPressure { rho: 1.0, p0: 4.5, gx: 1.0, gy: 0.0 },
            bc: Sides::all(Boundary::Dirichlet),
            n: (64, 1),
            has_exact: true,
            ..spec_1d("ex1_accuracy_1d", "smooth travelling wave under linear gravity", Setup::Manufactured1D)
        },
        ProblemSpec {
            gamma: 5.0 / 3.0,
            potential: lin_x,
            equilibrium: Profile::Isothermal { rho0: 1.0, p0: 1.0, potential: lin_x },
            t_final: 0.25,
            wb_t_final: Some(2.0),
            eta: 1e-3,
            ..spec_1d("ex2_isothermal_1d", "isothermal equilibrium with a pressure bump", Setup::Isothermal1D)
        },
        ProblemSpec {
            x: (-1.0, 1.0),
            potential: Potential::Quadratic { x0: 0.0, y0: 0.0 },
            equilibrium: Profile::Isothermal {
                rho0: 1.0,
                p0: 1.0,
                potential: Potential::Quadratic { x0: 0.0, y0: 0.0 },
            },
            bc: Sides::all(Boundary::OutflowState),
            n: (400, 1),
            t_final: 0.6,
            ..spec_1d("ex3_rarefaction_1d", "double rarefaction in a quadratic potential", Setup::Rarefaction1D)
        },
        ProblemSpec {
            x: (-10.0, 10.0),
            potential: lin_x,
            equilibrium: Profile::Isothermal { rho0: 1.0, p0: 1.0, potential: lin_x },
            bc: Sides::all(Boundary::OutflowState),
            n: (800, 1),
            t_final: 1e-4,
            weno: true,
            tvb_m: vec![1e10, 2e6, 5e10],
            ..spec_1d("ex4_leblanc_1d", "Leblanc shock tube under linear gravity", Setup::Leblanc1D)
        },
        ProblemSpec {
            x: (0.0, 2.0),
            y: (0.0, 2.0),
            potential: lin_xy,
            equilibrium: Profile::LinearPressure { rho: 1.0, p0: 4.5, gx: 1.0, gy: 1.0 },
            bc: Sides::all(Boundary::Dirichlet),
            n: (32, 32),
            has_exact: true,
            ..spec_2d("ex5_accuracy_2d", "smooth diagonal wave under linear gravity", Setup::Manufactured2D)
        },
        ProblemSpec {
            potential: lin_xy,
            equilibrium: Profile::Isothermal { rho0: 1.21, p0: 1.0, potential: lin_xy },
            t_final: 0.15,
            wb_t_final: Some(1.0),
            eta: 1e-3,
            ..spec_2d("ex6_isothermal_2d", "isothermal equilibrium with a pressure bump", Setup::Isothermal2D)
        },
        ProblemSpec {
            x: (-0.5, 0.5),
            y: (-0.5, 0.5),
            gamma: 2.0,
            potential: poly(1.0),
            equilibrium: Profile::Polytropic { k: 1.0, rho_c: 1.0, alpha },
            t_final: 0.2,
            wb_t_final: Some(14.8),
            eta: 1e-3,
            ..spec_2d("ex7_polytropic_2d", "polytropic equilibrium with a pressure bump", Setup::Polytropic2D)
        },
        ProblemSpec {
            potential: quad,
            equilibrium: Profile::Isothermal { rho0: 1.0, p0: 0.4, potential: quad },
            n: (100, 100),
            t_final: 0.1,
            ..spec_2d("ex8_rarefaction_2d", "two-dimensional rarefaction to near vacuum", Setup::Rarefaction2D)
        },
        ProblemSpec {
            x: (-0.5, 0.5),
            y: (-0.5, 0.5),
            gamma: 2.0,
            potential: poly(0.01),
            equilibrium: Profile::Polytropic { k: 1.0, rho_c: 0.01, alpha },
            n: (200, 200),
            t_final: 0.005,
            weno: true,
            tvb_m: vec![200.0],
            ..spec_2d("ex9_blast_2d", "pressure blast on a low-density polytrope", Setup::Blast2D)
        },
        ProblemSpec {
            x: (0.0, 1000.0),
            y: (0.0, 1000.0),
            potential: Potential::Linear { gx: 0.0, gy: 9.8 },
            equilibrium: Profile::Exner { theta0: 300.0, p0: 1e5, r_gas: 287.058, gamma: 1.4, g: 9.8 },
            bc: Sides::all(Boundary::Reflective),
            k: 3,
            n: (50, 50),
            t_final: 60.0,
            ..spec_2d("ex10_rising_bubble", "warm bubble in a neutral atmosphere", Setup::RisingBubble)
        },
        ProblemSpec {
            x: (-0.25, 0.25),
            y: (-1.0, 1.0),
            potential: Potential::Linear { gx: 0.0, gy: 1.0 },
            equilibrium: Profile::TwoLayerIsothermal { p0: 1.0, t_low: 1.0, t_up: 2.0 },
            bc: Sides::all(Boundary::Reflective),
            n: (25, 100),
            t_final: 0.1,
            wb_t_final: Some(0.1),
            weno: true,
            tvb_m: vec![200.0],
            ..spec_2d("ex11_rt1", "stable two-layer isothermal atmosphere", Setup::TwoLayerStationary)
        },
        ProblemSpec {
            x: (-0.25, 0.25),
            y: (-1.0, 1.0),
            potential: Potential::Linear { gx: 0.0, gy: 1.0 },
            equilibrium: Profile::TwoLayerIsothermal { p0: 1.0, t_low: 2.0, t_up: 1.0 },
            bc: Sides::all(Boundary::Reflective),
            n: (25, 100),
            t_final: 0.1,
            wb_t_final: Some(0.1),
            weno: true,
            tvb_m: vec![200.0],
            ..spec_2d("ex11_rt2", "unstable two-layer isothermal atmosphere", Setup::TwoLayerStationary)
        },
        ProblemSpec {
            x: (0.0, 0.25),
            y: (0.0, 1.0),
            gamma: 5.0 / 3.0,
            potential: Potential::Linear { gx: 0.0, gy: -1.0 },
            equilibrium: Profile::TwoLayerLinear,
            bc: rt_sides,
            n: (60, 240),
            t_final: 1.95,
            eta: 0.025,
            weno: true,
            tvb_m: vec![200.0],
            ..spec_2d("ex11_rt3", "Rayleigh-Taylor instability from a single-mode perturbation", Setup::RtPerturbed)
        },
        ProblemSpec {
            bc: Sides::all(Boundary::Periodic),
            n: (32, 1),
            t_final: 0.1,
            has_exact: true,
            ..spec_1d("periodic_1d", "gravity-free periodic density wave", Setup::PeriodicSmooth1D)
        },
        ProblemSpec {
            bc: Sides::all(Boundary::Periodic),
            n: (16, 16),
            t_final: 0.1,
            has_exact: true,
            ..spec_2d("periodic_2d", "gravity-free periodic diagonal density wave", Setup::PeriodicSmooth2D)
        },
    ]
}

/// Look up a problem by id or by its leading `exN`/`periodic_Nd` token.
pub fn find(id: &str) -> Result<ProblemSpec> {
    let all = catalog();
    if let Some(p) = all.iter().find(|p| p.id == id) {
        return Ok(p.clone());
    }
    let matches: Vec<_> =
        all.iter().filter(|p| p.id.split('_').next() == Some(id) && !p.id.starts_with("ex11")).collect();
    match (matches.len(), id) {
        (1, _) => Ok(matches[0].clone()),
        (_, "rt1") | (_, "ex11_1") => find("ex11_rt1"),
        (_, "rt2") | (_, "ex11_2") => find("ex11_rt2"),
        (_, "rt3") | (_, "ex11_3") => find("ex11_rt3"),
        _ => Err(CdgError::config(format!("unknown problem id '{id}'"))),
    }
}
