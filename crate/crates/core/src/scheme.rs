//! Interface shared by the one- and two-dimensional discretizations.

use crate::error::Result;
use crate::field::PolyField;
use crate::limiters::LimiterReport;
use crate::mesh::Family;

/// Gauss points per cell direction for reported L¹ norms, for every degree.
pub const ERROR_POINTS: usize = 4;

/// Switches of the semi-discrete scheme and the per-stage limiters.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeOptions {
    /// Well-balanced dissipation and source. `false` gives the standard
    /// dissipation with the pointwise source `-ρ∇φ` (ablation).
    pub well_balanced: bool,
    pub positivity: bool,
    pub weno: bool,
    /// TVB constants per component; a single entry applies to all.
    pub tvb_m: Vec<f64>,
}

impl SchemeOptions {
    pub fn tvb(&self, c: usize) -> f64 {
        if self.tvb_m.len() == 1 {
            self.tvb_m[0]
        } else {
            self.tvb_m[c]
        }
    }
}

/// Minimum density and pressure at critical points and conserved totals.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Diagnostics {
    pub min_rho: f64,
    pub min_p: f64,
    /// Σ ū · measure per component on the primal and dual families.
    pub totals: [[f64; 4]; 2],
}

/// A sampled point of a field: coordinates and the conservative state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub x: f64,
    pub y: f64,
    pub state: [f64; 4],
}

/// Spatial discretization driven by the time stepper.
pub trait Scheme {
    fn dim(&self) -> usize;
    /// Number of conservative components.
    fn components(&self) -> usize;
    fn degree(&self) -> usize;
    /// (Δx, Δy); Δy is unused in one dimension.
    fn spacing(&self) -> (f64, f64);
    /// First Gauss-Lobatto weight ŵ₁ of the critical point set.
    fn lobatto_w1(&self) -> f64;
    fn gamma(&self) -> f64;
    fn options(&self) -> &SchemeOptions;
    /// Projected hydrostatic background on both families.
    fn equilibrium(&self) -> &[PolyField; 2];
    /// Projected and limited initial data.
    fn initial_fields(&self) -> Result<[PolyField; 2]>;
    /// Global (α̃_x, α̃_y) over both families; α̃_y = 0 in one dimension.
    fn alpha(&self, u: &[PolyField; 2]) -> Result<(f64, f64)>;
    /// Time derivatives of every evolved coefficient; other cells are zeroed.
    fn residual(&self, u: &[PolyField; 2], tau: f64, out: &mut [PolyField; 2]) -> Result<()>;
    /// Ghost filling and limiting after an update to time `t`.
    fn post_stage(&self, u: &mut [PolyField; 2], t: f64, report: &mut LimiterReport) -> Result<()>;
    fn diagnostics(&self, u: &[PolyField; 2]) -> Diagnostics;
    /// Σ over evolved cells of ∫|a − b| per component, Gauss rule with `ERROR_POINTS` points.
    fn distance(&self, a: &PolyField, b: &PolyField) -> Vec<f64>;
    /// Σ over evolved cells of ∫|u − f| per component.
    fn distance_to(&self, u: &PolyField, t: f64, f: &dyn Fn(f64, f64, f64) -> [f64; 4]) -> Vec<f64>;
    /// Point values for output: cell centers, plus left interfaces in one dimension.
    fn samples(&self, u: &PolyField) -> Vec<Sample>;
    fn evolved_count(&self, fam: Family) -> usize;
}
