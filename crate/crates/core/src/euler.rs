//! Euler equations with a static gravitational potential: ideal-gas closure,
//! fluxes, sources, wave speeds, and closed-form hydrostatic profiles.

use crate::error::{CdgError, Result};

/// Conservative state (ρ, m, E) in one dimension.
pub type State1 = [f64; 3];
/// Conservative state (ρ, m₁, m₂, E) in two dimensions.
pub type State2 = [f64; 4];

#[inline]
pub fn pressure_1d(u: &State1, gamma: f64) -> f64 {
    (gamma - 1.0) * (u[2] - 0.5 * u[1] * u[1] / u[0])
}

#[inline]
pub fn pressure_2d(u: &State2, gamma: f64) -> f64 {
    (gamma - 1.0) * (u[3] - 0.5 * (u[1] * u[1] + u[2] * u[2]) / u[0])
}

#[inline]
pub fn flux_1d(u: &State1, gamma: f64) -> State1 {
    let p = pressure_1d(u, gamma);
    let v = u[1] / u[0];
    [u[1], u[1] * v + p, (u[2] + p) * v]
}

#[inline]
pub fn flux_x_2d(u: &State2, gamma: f64) -> State2 {
    let p = pressure_2d(u, gamma);
    let v = u[1] / u[0];
    [u[1], u[1] * v + p, u[2] * v, (u[3] + p) * v]
}

#[inline]
pub fn flux_y_2d(u: &State2, gamma: f64) -> State2 {
    let p = pressure_2d(u, gamma);
    let v = u[2] / u[0];
    [u[2], u[1] * v, u[2] * v + p, (u[3] + p) * v]
}

/// Gravity source (0, −ρφ_x, −mφ_x).
#[inline]
pub fn source_1d(u: &State1, phi_x: f64) -> State1 {
    [0.0, -u[0] * phi_x, -u[1] * phi_x]
}

/// Gravity source (0, −ρφ_x, −ρφ_y, −m·∇φ).
#[inline]
pub fn source_2d(u: &State2, phi_x: f64, phi_y: f64) -> State2 {
    [0.0, -u[0] * phi_x, -u[0] * phi_y, -(u[1] * phi_x + u[2] * phi_y)]
}

#[inline]
pub fn admissible_1d(u: &State1, gamma: f64) -> bool {
    u[0] > 0.0 && pressure_1d(u, gamma) > 0.0
}

#[inline]
pub fn admissible_2d(u: &State2, gamma: f64) -> bool {
    u[0] > 0.0 && pressure_2d(u, gamma) > 0.0
}

/// |u| + c, or `None` for an inadmissible state.
pub fn wave_speed_1d(u: &State1, gamma: f64) -> Option<f64> {
    let p = pressure_1d(u, gamma);
    if !(u[0] > 0.0 && p > 0.0) {
        return None;
    }
    Some((u[1] / u[0]).abs() + (gamma * p / u[0]).sqrt())
}

pub fn wave_speed_x_2d(u: &State2, gamma: f64) -> Option<f64> {
    let p = pressure_2d(u, gamma);
    if !(u[0] > 0.0 && p > 0.0) {
        return None;
    }
    Some((u[1] / u[0]).abs() + (gamma * p / u[0]).sqrt())
}

pub fn wave_speed_y_2d(u: &State2, gamma: f64) -> Option<f64> {
    let p = pressure_2d(u, gamma);
    if !(u[0] > 0.0 && p > 0.0) {
        return None;
    }
    Some((u[2] / u[0]).abs() + (gamma * p / u[0]).sqrt())
}

/// Conservative state from primitive (ρ, u, p).
pub fn conservative_1d(rho: f64, u: f64, p: f64, gamma: f64) -> State1 {
    [rho, rho * u, p / (gamma - 1.0) + 0.5 * rho * u * u]
}

/// Conservative state from primitive (ρ, u₁, u₂, p).
pub fn conservative_2d(rho: f64, u1: f64, u2: f64, p: f64, gamma: f64) -> State2 {
    [rho, rho * u1, rho * u2, p / (gamma - 1.0) + 0.5 * rho * (u1 * u1 + u2 * u2)]
}

/// sin(s)/s with the series branch near the origin.
pub fn sinc(s: f64) -> f64 {
    if s.abs() < 1e-4 {
        let s2 = s * s;
        1.0 - s2 / 6.0 + s2 * s2 / 120.0
    } else {
        s.sin() / s
    }
}

/// sinc'(s)/s, finite at s = 0.
pub fn sinc_prime_over_s(s: f64) -> f64 {
    if s.abs() < 1e-4 {
        let s2 = s * s;
        -1.0 / 3.0 + s2 / 30.0
    } else {
        (s * s.cos() - s.sin()) / (s * s * s)
    }
}

/// Static gravitational potential φ(x, y). One-dimensional problems pass y = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Potential {
    Zero,
    /// φ = g_x x + g_y y.
    Linear {
        gx: f64,
        gy: f64,
    },
    /// φ = ((x − x0)² + (y − y0)²) / 2.
    Quadratic {
        x0: f64,
        y0: f64,
    },
    /// φ = −2Kρ_c sinc(αr).
    Polytropic {
        k: f64,
        rho_c: f64,
        alpha: f64,
    },
}

impl Potential {
    pub fn value(&self, x: f64, y: f64) -> f64 {
        match *self {
            Potential::Zero => 0.0,
            Potential::Linear { gx, gy } => gx * x + gy * y,
            Potential::Quadratic { x0, y0 } => 0.5 * ((x - x0).powi(2) + (y - y0).powi(2)),
            Potential::Polytropic { k, rho_c, alpha } => -2.0 * k * rho_c * sinc(alpha * (x * x + y * y).sqrt()),
        }
    }

    pub fn gradient(&self, x: f64, y: f64) -> (f64, f64) {
        match *self {
            Potential::Zero => (0.0, 0.0),
            Potential::Linear { gx, gy } => (gx, gy),
            Potential::Quadratic { x0, y0 } => (x - x0, y - y0),
            Potential::Polytropic { k, rho_c, alpha } => {
                let s = alpha * (x * x + y * y).sqrt();
                let c = -2.0 * k * rho_c * alpha * alpha * sinc_prime_over_s(s);
                (c * x, c * y)
            }
        }
    }
}

/// Closed-form hydrostatic profile (ρ^s, u = 0, p^s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Profile {
    Uniform {
        rho: f64,
        p: f64,
    },
    /// ρ = ρ₀ exp(−ρ₀φ/p₀), p = p₀ exp(−ρ₀φ/p₀).
    Isothermal {
        rho0: f64,
        p0: f64,
        potential: Potential,
    },
    /// Constant density under the linear potential: p = p₀ − ρ(g_x x + g_y y).
    LinearPressure {
        rho: f64,
        p0: f64,
        gx: f64,
        gy: f64,
    },
    /// ρ = ρ_c sinc(αr), p = Kρ².
    Polytropic {
        k: f64,
        rho_c: f64,
        alpha: f64,
    },
    /// Constant potential temperature atmosphere under φ = g y.
    Exner {
        theta0: f64,
        p0: f64,
        r_gas: f64,
        gamma: f64,
        g: f64,
    },
    /// Two isothermal layers joined at y = 0 under φ = y, continuous pressure.
    TwoLayerIsothermal {
        p0: f64,
        t_low: f64,
        t_up: f64,
    },
    /// Two constant-density layers joined at y = 1/2 under φ = −y.
    TwoLayerLinear,
}

impl Profile {
    /// (ρ^s, p^s) at (x, y).
    pub fn eval(&self, x: f64, y: f64) -> (f64, f64) {
        match *self {
            Profile::Uniform { rho, p } => (rho, p),
            Profile::Isothermal { rho0, p0, potential } => {
                let e = (-rho0 * potential.value(x, y) / p0).exp();
                (rho0 * e, p0 * e)
            }
            Profile::LinearPressure { rho, p0, gx, gy } => (rho, p0 - rho * (gx * x + gy * y)),
            Profile::Polytropic { k, rho_c, alpha } => {
                let rho = rho_c * sinc(alpha * (x * x + y * y).sqrt());
                (rho, k * rho * rho)
            }
            Profile::Exner { theta0, p0, r_gas, gamma, g } => {
                let pi = exner(y, theta0, r_gas, gamma, g);
                (p0 / (r_gas * theta0) * pi.powf(1.0 / (gamma - 1.0)), p0 * pi.powf(gamma / (gamma - 1.0)))
            }
            Profile::TwoLayerIsothermal { p0, t_low, t_up } => {
                let t = if y < 0.0 { t_low } else { t_up };
                let p = p0 * (-y / t).exp();
                (p / t, p)
            }
            Profile::TwoLayerLinear => {
                if y < 0.5 {
                    (2.0, 2.0 * y + 1.0)
                } else {
                    (1.0, y + 1.5)
                }
            }
        }
    }

    /// Analytic pressure gradient (p^s_x, p^s_y).
    pub fn grad_p(&self, x: f64, y: f64) -> (f64, f64) {
        match *self {
            Profile::Uniform { .. } => (0.0, 0.0),
            Profile::Isothermal { rho0, p0, potential } => {
                let (_, p) = self.eval(x, y);
                let (fx, fy) = potential.gradient(x, y);
                let c = -rho0 / p0 * p;
                (c * fx, c * fy)
            }
            Profile::LinearPressure { rho, gx, gy, .. } => (-rho * gx, -rho * gy),
            Profile::Polytropic { k, rho_c, alpha } => {
                let (rho, _) = self.eval(x, y);
                let s = alpha * (x * x + y * y).sqrt();
                let c = 2.0 * k * rho * rho_c * alpha * alpha * sinc_prime_over_s(s);
                (c * x, c * y)
            }
            Profile::Exner { theta0, p0, r_gas, gamma, g } => {
                let pi = exner(y, theta0, r_gas, gamma, g);
                let dpi = -(gamma - 1.0) * g / (gamma * r_gas * theta0);
                (0.0, p0 * gamma / (gamma - 1.0) * pi.powf(1.0 / (gamma - 1.0)) * dpi)
            }
            Profile::TwoLayerIsothermal { t_low, t_up, .. } => {
                let t = if y < 0.0 { t_low } else { t_up };
                (0.0, -self.eval(x, y).1 / t)
            }
            Profile::TwoLayerLinear => (0.0, if y < 0.5 { 2.0 } else { 1.0 }),
        }
    }
}

/// Exner pressure Π = 1 − (γ−1) g y / (γ R Θ₀).
pub fn exner(y: f64, theta0: f64, r_gas: f64, gamma: f64, g: f64) -> f64 {
    1.0 - (gamma - 1.0) * g * y / (gamma * r_gas * theta0)
}

/// Check that the profile is positive at a point.
pub fn check_profile(profile: &Profile, x: f64, y: f64) -> Result<()> {
    let (rho, p) = profile.eval(x, y);
    if rho > 0.0 && p > 0.0 && rho.is_finite() && p.is_finite() {
        Ok(())
    } else {
        Err(CdgError::config(format!("equilibrium profile not positive at ({x}, {y}): rho={rho}, p={p}")))
    }
}
