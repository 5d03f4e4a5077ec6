//! Periodic runs conserve the totals of both families to round-off.

mod common;

use common::drift;

const TOL: f64 = 1e-12;

#[test]
fn periodic_1d_totals() {
    for k in ["1", "2", "3"] {
        let d = drift("periodic_1d", &[("scheme.k", k), ("mesh.n", "40")]);
        assert!(d <= TOL, "k = {k}: drift {d:e}");
    }
}

#[test]
fn periodic_1d_totals_with_limiters() {
    let d = drift("periodic_1d", &[("mesh.n", "40"), ("limiter.weno", "on"), ("limiter.tvb_m", "0")]);
    assert!(d <= TOL, "drift {d:e}");
}

#[test]
fn periodic_2d_totals() {
    for k in ["2", "3"] {
        let d = drift("periodic_2d", &[("scheme.k", k), ("mesh.n", "12")]);
        assert!(d <= TOL, "k = {k}: drift {d:e}");
    }
}
