//! Gauss-Legendre and Gauss-Lobatto rules with weights normalized to sum to one.
//!
//! A rule on `[a, b]` integrates as `(b - a) * sum(w_i * f(x_i))`.

use crate::error::{CdgError, Result};

/// Nodes and normalized weights of a one-dimensional quadrature rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integral over the interval the rule was built for, given its length.
    pub fn integrate(&self, length: f64, f: impl Fn(f64) -> f64) -> f64 {
        let s: f64 = self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum();
        length * s
    }

    fn mapped(nodes: &[f64], weights: &[f64], a: f64, b: f64) -> Rule {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        Rule { nodes: nodes.iter().map(|&x| mid + half * x).collect(), weights: weights.to_vec() }
    }
}

/// Largest tabulated point count.
pub const MAX_TABLE: usize = 8;

/// Gauss nodes and normalized weights on [-1, 1], indexed by point count - 1.
pub(crate) const GAUSS_TABLE: [&[(f64, f64)]; 8] = [
    &[(0.0, 1.0)],
    &[(-0.57735026918962576451, 0.5), (0.57735026918962576451, 0.5)],
    &[
        (-0.77459666924148337704, 0.27777777777777777778),
        (0.0, 0.44444444444444444444),
        (0.77459666924148337704, 0.27777777777777777778),
    ],
    &[
        (-0.86113631159405257522, 0.17392742256872692869),
        (-0.3399810435848562648, 0.32607257743127307131),
        (0.3399810435848562648, 0.32607257743127307131),
        (0.86113631159405257522, 0.17392742256872692869),
    ],
    &[
        (-0.9061798459386639928, 0.11846344252809454376),
        (-0.53846931010568309104, 0.23931433524968323402),
        (0.0, 0.28444444444444444444),
        (0.53846931010568309104, 0.23931433524968323402),
        (0.9061798459386639928, 0.11846344252809454376),
    ],
    &[
        (-0.93246951420315202781, 0.08566224618958517252),
        (-0.66120938646626451366, 0.18038078652406930378),
        (-0.23861918608319690863, 0.23395696728634552369),
        (0.23861918608319690863, 0.23395696728634552369),
        (0.66120938646626451366, 0.18038078652406930378),
        (0.93246951420315202781, 0.08566224618958517252),
    ],
    &[
        (-0.94910791234275852453, 0.064742483084434846635),
        (-0.74153118559939443986, 0.13985269574463833395),
        (-0.40584515137739716691, 0.19091502525255947248),
        (0.0, 0.20897959183673469388),
        (0.40584515137739716691, 0.19091502525255947248),
        (0.74153118559939443986, 0.13985269574463833395),
        (0.94910791234275852453, 0.064742483084434846635),
    ],
    &[
        (-0.96028985649753623168, 0.050614268145188129576),
        (-0.79666647741362673959, 0.11119051722668723527),
        (-0.52553240991632898582, 0.15685332293894364367),
        (-0.18343464249564980494, 0.18134189168918099148),
        (0.18343464249564980494, 0.18134189168918099148),
        (0.52553240991632898582, 0.15685332293894364367),
        (0.79666647741362673959, 0.11119051722668723527),
        (0.96028985649753623168, 0.050614268145188129576),
    ],
];

/// Lobatto nodes and normalized weights on [-1, 1], indexed by point count - 2.
pub(crate) const LOBATTO_TABLE: [&[(f64, f64)]; 7] = [
    &[(-1.0, 0.5), (1.0, 0.5)],
    &[(-1.0, 0.16666666666666666667), (0.0, 0.66666666666666666667), (1.0, 0.16666666666666666667)],
    &[
        (-1.0, 0.083333333333333333333),
        (-0.44721359549995793928, 0.41666666666666666667),
        (0.44721359549995793928, 0.41666666666666666667),
        (1.0, 0.083333333333333333333),
    ],
    &[
        (-1.0, 0.05),
        (-0.6546536707079771438, 0.27222222222222222222),
        (0.0, 0.35555555555555555556),
        (0.6546536707079771438, 0.27222222222222222222),
        (1.0, 0.05),
    ],
    &[
        (-1.0, 0.033333333333333333333),
        (-0.76505532392946469285, 0.18923747814892349016),
        (-0.28523151648064509631, 0.27742918851774317651),
        (0.28523151648064509631, 0.27742918851774317651),
        (0.76505532392946469285, 0.18923747814892349016),
        (1.0, 0.033333333333333333333),
    ],
    &[
        (-1.0, 0.023809523809523809524),
        (-0.83022389627856692987, 0.13841302368078297401),
        (-0.4688487934707142138, 0.21587269060493131171),
        (0.0, 0.24380952380952380952),
        (0.4688487934707142138, 0.21587269060493131171),
        (0.83022389627856692987, 0.13841302368078297401),
        (1.0, 0.023809523809523809524),
    ],
    &[
        (-1.0, 0.017857142857142857143),
        (-0.87174014850960661534, 0.10535211357175301969),
        (-0.59170018143314230214, 0.17056134624175218238),
        (-0.20929921790247886877, 0.20622939732935194078),
        (0.20929921790247886877, 0.20622939732935194078),
        (0.59170018143314230214, 0.17056134624175218238),
        (0.87174014850960661534, 0.10535211357175301969),
        (1.0, 0.017857142857142857143),
    ],
];

fn check_interval(a: f64, b: f64) -> Result<()> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(CdgError::config(format!("invalid quadrature interval [{a}, {b}]")));
    }
    Ok(())
}

/// Legendre value and derivative by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p0, mut p1) = (1.0, x);
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let dp = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Gauss-Legendre nodes and normalized weights on [-1, 1] by Newton iteration.
pub fn gauss_newton(n: usize) -> (Vec<f64>, Vec<f64>) {
    let nf = n as f64;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = -(std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        nodes[i] = x;
        weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// Gauss-Lobatto nodes and normalized weights on [-1, 1] by Newton iteration
/// on the derivative of the Legendre polynomial of degree `l - 1`.
pub fn lobatto_newton(l: usize) -> (Vec<f64>, Vec<f64>) {
    let n = l - 1;
    let nf = n as f64;
    let lf = l as f64;
    let mut nodes = vec![0.0; l];
    nodes[0] = -1.0;
    nodes[l - 1] = 1.0;
    for i in 1..l - 1 {
        let mut x = -(std::f64::consts::PI * i as f64 / nf).cos();
        for _ in 0..100 {
            // q = P_n', q' = (2x P_n' - n(n+1) P_n) / (1 - x^2)
            let (p, dp) = legendre_with_derivative(n, x);
            let ddp = (2.0 * x * dp - nf * (nf + 1.0) * p) / (1.0 - x * x);
            let dx = dp / ddp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = x;
    }
    let weights = nodes
        .iter()
        .map(|&x| {
            let (p, _) = legendre_with_derivative(n, x);
            1.0 / (lf * (lf - 1.0) * p * p)
        })
        .collect();
    (nodes, weights)
}

/// `n`-point Gauss rule on [-1, 1].
pub fn gauss_reference(n: usize) -> Result<Rule> {
    if n == 0 || n > 64 {
        return Err(CdgError::config(format!("unsupported Gauss point count {n}")));
    }
    if n <= MAX_TABLE {
        let t = GAUSS_TABLE[n - 1];
        Ok(Rule { nodes: t.iter().map(|p| p.0).collect(), weights: t.iter().map(|p| p.1).collect() })
    } else {
        let (nodes, weights) = gauss_newton(n);
        Ok(Rule { nodes, weights })
    }
}

/// `l`-point Gauss-Lobatto rule on [-1, 1].
pub fn lobatto_reference(l: usize) -> Result<Rule> {
    if l < 2 || l > 64 {
        return Err(CdgError::config(format!("unsupported Lobatto point count {l}")));
    }
    if l <= MAX_TABLE {
        let t = LOBATTO_TABLE[l - 2];
        Ok(Rule { nodes: t.iter().map(|p| p.0).collect(), weights: t.iter().map(|p| p.1).collect() })
    } else {
        let (nodes, weights) = lobatto_newton(l);
        Ok(Rule { nodes, weights })
    }
}

/// `n`-point Gauss rule mapped to `[a, b]`.
pub fn gauss_rule(n: usize, a: f64, b: f64) -> Result<Rule> {
    check_interval(a, b)?;
    let r = gauss_reference(n)?;
    Ok(Rule::mapped(&r.nodes, &r.weights, a, b))
}

/// `l`-point Gauss-Lobatto rule mapped to `[a, b]`; endpoints are exact.
pub fn lobatto_rule(l: usize, a: f64, b: f64) -> Result<Rule> {
    check_interval(a, b)?;
    let r = lobatto_reference(l)?;
    let mut m = Rule::mapped(&r.nodes, &r.weights, a, b);
    m.nodes[0] = a;
    m.nodes[l - 1] = b;
    Ok(m)
}

/// Lobatto point count used for the critical point sets: ceil((k + 3) / 2).
pub fn lobatto_count(k: usize) -> usize {
    (k + 4) / 2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midpoint_and_two_point_rules() {
        let r = gauss_rule(1, 0.0, 1.0).unwrap();
        assert_eq!(r.nodes, vec![0.5]);
        assert_eq!(r.weights, vec![1.0]);
        let r = gauss_rule(2, -1.0, 1.0).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert!((r.nodes[0] + s).abs() < 2e-16 && (r.nodes[1] - s).abs() < 2e-16);
        assert_eq!(r.weights, vec![0.5, 0.5]);
    }

    #[test]
    fn three_point_rule_integrates_quintic() {
        let r = gauss_rule(3, 0.0, 1.0).unwrap();
        let v = r.integrate(1.0, |x| x.powi(5));
        assert!((v - 1.0 / 6.0).abs() < 1e-14);
    }

    #[test]
    fn lobatto_small_rules() {
        let r = lobatto_rule(2, -1.0, 1.0).unwrap();
        assert_eq!(r.nodes, vec![-1.0, 1.0]);
        assert_eq!(r.weights, vec![0.5, 0.5]);
        let r = lobatto_rule(3, -1.0, 1.0).unwrap();
        assert_eq!(r.nodes, vec![-1.0, 0.0, 1.0]);
        assert!((r.weights[0] - 1.0 / 6.0).abs() < 1e-16);
        assert!((r.weights[1] - 2.0 / 3.0).abs() < 1e-16);
        assert_eq!(r.weights[0], r.weights[2]);
    }

    #[test]
    fn lobatto_count_matches_ceiling() {
        assert_eq!(lobatto_count(2), 3);
        assert_eq!(lobatto_count(3), 3);
        assert_eq!(lobatto_count(1), 2);
        assert_eq!(lobatto_count(4), 4);
        for k in 0..8 {
            assert!(2 * lobatto_count(k) >= k + 3);
        }
        let r = lobatto_reference(lobatto_count(2)).unwrap();
        assert!((r.weights[0] - 1.0 / 6.0).abs() < 1e-16);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(gauss_rule(0, 0.0, 1.0).is_err());
        assert!(gauss_rule(2, 1.0, 0.0).is_err());
        assert!(lobatto_rule(1, 0.0, 1.0).is_err());
    }

    #[test]
    fn newton_agrees_with_tables() {
        for n in 1..=MAX_TABLE {
            let t = gauss_reference(n).unwrap();
            let (x, w) = gauss_newton(n);
            for i in 0..n {
                assert!((t.nodes[i] - x[i]).abs() < 1e-15, "gauss n={n}");
                assert!((t.weights[i] - w[i]).abs() < 1e-15, "gauss n={n}");
            }
        }
        for l in 2..=MAX_TABLE {
            let t = lobatto_reference(l).unwrap();
            let (x, w) = lobatto_newton(l);
            for i in 0..l {
                assert!((t.nodes[i] - x[i]).abs() < 1e-15, "lobatto l={l}");
                assert!((t.weights[i] - w[i]).abs() < 1e-15, "lobatto l={l}");
            }
        }
    }

    #[test]
    fn weights_sum_to_one_beyond_tables() {
        for n in [9, 12, 20] {
            let r = gauss_reference(n).unwrap();
            assert!((r.weights.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            let v = r.integrate(2.0, |x| x.powi(2 * n as i32 - 2));
            assert!((v - 2.0 / (2 * n - 1) as f64).abs() < 1e-13);
        }
        for l in [9, 12] {
            let r = lobatto_reference(l).unwrap();
            assert!((r.weights.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        }
    }
}
