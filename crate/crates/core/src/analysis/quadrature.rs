use std::f64::consts::{PI, TAU};

use crate::error::{out_of_range, Result};

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
///
/// Newton iteration on `P_n` from the Chebyshev-like initial guess
/// `cos(π(i − 1/4)/(n + 1/2))`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        let mut x = (PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out.reverse();
    out
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Product rule on the Bloch sphere: Gauss–Legendre in `cos θ`, uniform
/// nodes `φ_j = 2πj/n_phi`. Weights sum to 1, so [`SphereGrid::average`]
/// integrates against `sin θ dθ dφ / 4π`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereGrid {
    nodes: Vec<(f64, f64, f64)>,
    n_theta: usize,
    n_phi: usize,
}

pub const MIN_GRID: usize = 16;

impl SphereGrid {
    pub fn new(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta < MIN_GRID {
            return out_of_range("n_theta", n_theta as f64, "≥ 16");
        }
        if n_phi < MIN_GRID {
            return out_of_range("n_phi", n_phi as f64, "≥ 16");
        }
        let gl = gauss_legendre(n_theta);
        let mut nodes = Vec::with_capacity(n_theta * n_phi);
        for &(x, w) in &gl {
            let theta = x.clamp(-1.0, 1.0).acos();
            for j in 0..n_phi {
                let phi = TAU * j as f64 / n_phi as f64;
                nodes.push((theta, phi, 0.5 * w / n_phi as f64));
            }
        }
        Ok(Self {
            nodes,
            n_theta,
            n_phi,
        })
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    /// `(θ, φ, weight)` triples.
    pub fn nodes(&self) -> &[(f64, f64, f64)] {
        &self.nodes
    }

    pub fn average<E>(
        &self,
        mut f: impl FnMut(f64, f64) -> std::result::Result<f64, E>,
    ) -> std::result::Result<f64, E> {
        let mut acc = 0.0;
        for &(theta, phi, w) in &self.nodes {
            acc += w * f(theta, phi)?;
        }
        Ok(acc)
    }
}

impl Default for SphereGrid {
    /// 64 × 64 nodes.
    fn default() -> Self {
        Self::new(64, 64).expect("64 ≥ 16")
    }
}
