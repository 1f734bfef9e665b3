//! Quadrature rules used throughout the crate: fixed-order Gauss-Legendre,
//! an adaptive composite scheme built on top of it, and Gauss-Hermite rules
//! for expectations against Gaussian weights.

use std::f64::consts::PI;
use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Gauss-Legendre rule on [-1, 1].
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes are the roots of the Legendre polynomial of the given order,
    /// found by Newton iteration from the Chebyshev initial guess.
    pub fn new(order: usize) -> Self {
        assert!(order >= 2);
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, z);
                dp = d;
                let dz = p / d;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            // z descends from +1; store ascending.
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }

    pub fn integrate_complex<F: Fn(f64) -> Complex64>(&self, a: f64, b: f64, f: F) -> Complex64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut acc = Complex64::ZERO;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += f(mid + half * x) * *w;
        }
        acc * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn gl32() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(32))
}

const MAX_DEPTH: usize = 48;

fn adaptive_rec<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    whole: Complex64,
    tol: f64,
    depth: usize,
) -> Result<Complex64> {
    let m = 0.5 * (a + b);
    let left = gl32().integrate_complex(a, m, f);
    let right = gl32().integrate_complex(m, b, f);
    let err = (left + right - whole).norm();
    if err <= tol || b - a <= 1e-15 * (a.abs() + b.abs() + 1.0) {
        return Ok(left + right);
    }
    if depth == 0 {
        return Err(Error::QuadratureNotConverged {
            estimate: err,
            tol,
            lo: a,
            hi: b,
        });
    }
    Ok(adaptive_rec(f, a, m, left, 0.5 * tol, depth - 1)?
        + adaptive_rec(f, m, b, right, 0.5 * tol, depth - 1)?)
}

/// Adaptive composite Gauss-Legendre integration with absolute tolerance.
pub fn integrate_adaptive_complex<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<Complex64> {
    if a == b {
        return Ok(Complex64::ZERO);
    }
    let whole = gl32().integrate_complex(a, b, &f);
    adaptive_rec(&f, a, b, whole, tol, MAX_DEPTH)
}

pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    integrate_adaptive_complex(|x| Complex64::new(f(x), 0.0), a, b, tol).map(|v| v.re)
}

/// Integrate over [a, b] split at the given interior breakpoints, so that the
/// integrand is smooth on every panel. Breakpoints outside (a, b) are ignored.
pub fn integrate_piecewise<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    tol: f64,
) -> Result<f64> {
    let mut pts: Vec<f64> = breaks.iter().copied().filter(|x| *x > a && *x < b).collect();
    pts.push(a);
    pts.push(b);
    pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    pts.dedup();
    let per_panel = tol / pts.len() as f64;
    let mut acc = 0.0;
    for w in pts.windows(2) {
        acc += integrate_adaptive(&f, w[0], w[1], per_panel)?;
    }
    Ok(acc)
}

/// Gauss-Hermite rule for \int e^{-t^2} h(t) dt, built by Golub-Welsch.
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermite {
    pub fn new(order: usize) -> Self {
        assert!(order >= 2);
        let n = order;
        let mut jac = DMatrix::<f64>::zeros(n, n);
        for k in 1..n {
            let beta = (k as f64 / 2.0).sqrt();
            jac[(k - 1, k)] = beta;
            jac[(k, k - 1)] = beta;
        }
        let eig = jac.symmetric_eigen();
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|k| {
                let q0 = eig.eigenvectors[(0, k)];
                (eig.eigenvalues[k], PI.sqrt() * q0 * q0)
            })
            .collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        Self {
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
        }
    }

    /// Expectation of g under the normal density with the given mean and
    /// standard deviation.
    pub fn expectation_normal<F: Fn(f64) -> Complex64>(
        &self,
        mean: f64,
        sd: f64,
        g: F,
    ) -> Complex64 {
        let mut acc = Complex64::ZERO;
        let scale = std::f64::consts::SQRT_2 * sd;
        for (t, w) in self.nodes.iter().zip(&self.weights) {
            acc += g(mean + scale * t) * *w;
        }
        acc / PI.sqrt()
    }
}

pub fn gauss_hermite_64() -> &'static GaussHermite {
    static RULE: OnceLock<GaussHermite> = OnceLock::new();
    RULE.get_or_init(|| GaussHermite::new(64))
}
