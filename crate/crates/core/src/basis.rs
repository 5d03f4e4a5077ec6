//! Scaled (monic) Legendre bases on the reference cell [-1, 1] and [-1, 1]^2.

/// Highest polynomial degree supported by the bases.
pub const MAX_DEGREE: usize = 3;

/// Monic Legendre polynomial of degree `n` and its derivative.
///
/// Recurrence: P_{n+1} = x P_n - n^2 / (4 n^2 - 1) P_{n-1}.
pub fn monic_legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut d0) = (1.0, 0.0);
    if n == 0 {
        return (p0, d0);
    }
    let (mut p1, mut d1) = (x, 1.0);
    for m in 1..n {
        let mf = m as f64;
        let c = mf * mf / (4.0 * mf * mf - 1.0);
        let p2 = x * p1 - c * p0;
        let d2 = p1 + x * d1 - c * d0;
        p0 = p1;
        d0 = d1;
        p1 = p2;
        d1 = d2;
    }
    (p1, d1)
}

/// Integral of the squared monic Legendre polynomial of degree `n` over [-1, 1].
pub fn monic_norm_sq(n: usize) -> f64 {
    // ||P_n||^2 = 2 / (2n + 1) for the standard polynomials, leading coefficient
    // (2n)! / (2^n (n!)^2).
    let mut lead = 1.0;
    for m in 1..=n {
        let mf = m as f64;
        lead *= (2.0 * mf - 1.0) / mf;
    }
    2.0 / ((2 * n + 1) as f64) / (lead * lead)
}

/// One-dimensional basis Φ_0..Φ_k.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Basis1D {
    pub k: usize,
}

impl Basis1D {
    pub fn new(k: usize) -> Self {
        Basis1D { k }
    }

    pub fn len(&self) -> usize {
        self.k + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Values and ξ-derivatives at `xi`.
    pub fn eval(&self, xi: f64, values: &mut [f64], derivs: &mut [f64]) {
        for l in 0..=self.k {
            let (p, d) = monic_legendre(l, xi);
            values[l] = p;
            derivs[l] = d;
        }
    }

    pub fn values(&self, xi: f64) -> Vec<f64> {
        (0..=self.k).map(|l| monic_legendre(l, xi).0).collect()
    }

    pub fn derivs(&self, xi: f64) -> Vec<f64> {
        (0..=self.k).map(|l| monic_legendre(l, xi).1).collect()
    }

    /// ∫_{-1}^{1} Φ_l^2 dξ.
    pub fn norm_sq(&self, l: usize) -> f64 {
        monic_norm_sq(l)
    }
}

/// Mode ordering of the two-dimensional basis: (degree in ξ, degree in η).
const MODES_2D: [(usize, usize); 10] = [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (0, 2), (2, 1), (1, 2), (3, 0), (0, 3)];

/// Two-dimensional basis Φ_l(ξ, η) = P_a(ξ) P_b(η) of total degree at most `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basis2D {
    pub k: usize,
    pub modes: Vec<(usize, usize)>,
}

impl Basis2D {
    pub fn new(k: usize) -> Self {
        assert!(k <= MAX_DEGREE, "degree {k} exceeds supported maximum");
        let count = (k + 1) * (k + 2) / 2;
        let modes = MODES_2D[..count].iter().copied().filter(|&(a, b)| a + b <= k).collect::<Vec<_>>();
        debug_assert_eq!(modes.len(), count);
        Basis2D { k, modes }
    }

    /// Number of basis functions, K + 1 with K = k(k+3)/2.
    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Values and partial derivatives at (ξ, η).
    pub fn eval(&self, xi: f64, eta: f64, values: &mut [f64], dxi: &mut [f64], deta: &mut [f64]) {
        let mut px = [(0.0, 0.0); MAX_DEGREE + 1];
        let mut py = [(0.0, 0.0); MAX_DEGREE + 1];
        for d in 0..=self.k {
            px[d] = monic_legendre(d, xi);
            py[d] = monic_legendre(d, eta);
        }
        for (l, &(a, b)) in self.modes.iter().enumerate() {
            values[l] = px[a].0 * py[b].0;
            dxi[l] = px[a].1 * py[b].0;
            deta[l] = px[a].0 * py[b].1;
        }
    }

    pub fn values(&self, xi: f64, eta: f64) -> Vec<f64> {
        let n = self.len();
        let (mut v, mut a, mut b) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
        self.eval(xi, eta, &mut v, &mut a, &mut b);
        v
    }

    /// ∫∫_{[-1,1]^2} Φ_l^2.
    pub fn norm_sq(&self, l: usize) -> f64 {
        let (a, b) = self.modes[l];
        monic_norm_sq(a) * monic_norm_sq(b)
    }
}
