//! Coherent states on the cylinder: coefficient vectors, the normalization
//! function N(J), overlap kernels, the dual discrete/continuous probability
//! distributions, and the resolution-of-identity diagnostic.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::dist::{ActionDistribution, Kind};
use crate::error::{Error, Result};
use crate::quad;

/// Absolute tail mass allowed outside a truncated basis window.
pub const TRUNCATION_TAIL_LIMIT: f64 = 1e-13;

/// A point (J, phi) of the cylindric phase space; the coherent-state label.
/// The angle is stored reduced to [0, 2 pi).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhasePoint {
    j: f64,
    phi: f64,
}

impl PhasePoint {
    pub fn new(j: f64, phi: f64) -> Self {
        Self {
            j,
            phi: phi.rem_euclid(2.0 * PI),
        }
    }

    pub fn j(&self) -> f64 {
        self.j
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NormalizationMethod {
    DirectSum,
    PoissonSum,
    ClosedForm,
}

/// The normalization function N(J) = sum_n varpi(J - n) bound to one
/// evaluation strategy.
pub struct NormalizationFn {
    dist: ActionDistribution,
    method: NormalizationMethod,
}

impl NormalizationFn {
    pub fn new(dist: ActionDistribution, method: NormalizationMethod) -> Self {
        Self { dist, method }
    }

    pub fn method(&self) -> NormalizationMethod {
        self.method
    }

    pub fn eval(&self, j: f64) -> Result<f64> {
        normalization_via(&self.dist, j, self.method)
    }
}

/// Index window [lo, hi] outside which translates carry mass below the tail
/// threshold at this J.
fn translate_window(dist: &ActionDistribution, j: f64) -> (i64, i64) {
    let w = dist.effective_radius() + 1.0;
    ((j - w).floor() as i64, (j + w).ceil() as i64)
}

/// N(J) by direct summation of translates over a certified window.
pub fn normalization_direct(dist: &ActionDistribution, j: f64) -> f64 {
    let (lo, hi) = translate_window(dist, j);
    let mut acc = 0.0;
    for n in lo..=hi {
        acc += dist.density_translate(n, j);
    }
    acc
}

/// N(J) for the Gaussian family through the Poisson-dual series
/// 1 + 2 sum_m cos(2 pi m J) exp(-2 sigma^2 pi^2 m^2).
pub fn normalization_poisson_gaussian(sigma: f64, j: f64) -> f64 {
    let mut acc = 1.0;
    let mut m = 1;
    loop {
        let damp = (-2.0 * sigma * sigma * PI * PI * (m * m) as f64).exp();
        if damp < 1e-18 {
            break;
        }
        acc += 2.0 * (2.0 * PI * m as f64 * j).cos() * damp;
        m += 1;
    }
    acc
}

/// Exact crenel value for the uniform family: (1 + #covering intervals) /
/// (2 sigma), right-continuous at the jump points.
pub fn normalization_crenel(sigma: f64, j: f64) -> f64 {
    let count = (j + sigma - 1.0).floor() - (j - sigma).floor();
    (1.0 + count) / (2.0 * sigma)
}

/// N(J) with the evaluation strategy best suited to the family: the crenel
/// closed form for uniform, the direct theta series for Gaussian widths up to
/// one and the Poisson dual above, direct summation for custom densities.
pub fn normalization(dist: &ActionDistribution, j: f64) -> f64 {
    match dist.kind() {
        Kind::Uniform => normalization_crenel(dist.sigma(), j),
        Kind::Gaussian => {
            if dist.sigma() <= 1.0 {
                normalization_direct(dist, j)
            } else {
                normalization_poisson_gaussian(dist.sigma(), j)
            }
        }
        Kind::Custom => normalization_direct(dist, j),
    }
}

pub fn normalization_via(
    dist: &ActionDistribution,
    j: f64,
    method: NormalizationMethod,
) -> Result<f64> {
    match method {
        NormalizationMethod::DirectSum => Ok(normalization_direct(dist, j)),
        NormalizationMethod::PoissonSum => match dist.kind() {
            Kind::Gaussian => Ok(normalization_poisson_gaussian(dist.sigma(), j)),
            _ => Err(Error::InvalidParameter(
                "Poisson evaluation of N is only available for the Gaussian family".into(),
            )),
        },
        NormalizationMethod::ClosedForm => match dist.kind() {
            Kind::Uniform => Ok(normalization_crenel(dist.sigma(), j)),
            Kind::Gaussian => Ok(normalization(dist, j)),
            Kind::Custom => Err(Error::InvalidParameter(
                "custom densities have no closed-form N".into(),
            )),
        },
    }
}

/// Coherent state truncated to basis labels n in [-N, N], with coefficient
/// sqrt(varpi_n(J)) e^{-i n phi} / sqrt(N(J)) at index n.
#[derive(Clone, Debug)]
pub struct CoherentState {
    label: PhasePoint,
    n_trunc: usize,
    coeffs: Vec<Complex64>,
}

impl CoherentState {
    pub fn label(&self) -> PhasePoint {
        self.label
    }

    pub fn n_trunc(&self) -> usize {
        self.n_trunc
    }

    pub fn dim(&self) -> usize {
        2 * self.n_trunc + 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, n: i64) -> Complex64 {
        self.coeffs[(n + self.n_trunc as i64) as usize]
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Certify that the window [-N, N] captures all but `TRUNCATION_TAIL_LIMIT`
/// of the translate mass at this J, returning the full normalization.
fn certify_window(dist: &ActionDistribution, j: f64, n_trunc: usize) -> Result<f64> {
    let n_ref = normalization(dist, j);
    let mut partial = 0.0;
    let nt = n_trunc as i64;
    let (lo, hi) = translate_window(dist, j);
    for n in lo.max(-nt)..=hi.min(nt) {
        partial += dist.density_translate(n, j);
    }
    let tail = (n_ref - partial).max(0.0);
    if tail > TRUNCATION_TAIL_LIMIT {
        return Err(Error::TruncationInsufficient {
            tail,
            limit: TRUNCATION_TAIL_LIMIT,
        });
    }
    Ok(n_ref)
}

pub fn coherent_state(
    dist: &ActionDistribution,
    p: PhasePoint,
    n_trunc: usize,
) -> Result<CoherentState> {
    let n_ref = certify_window(dist, p.j(), n_trunc)?;
    let inv_sqrt_n = 1.0 / n_ref.sqrt();
    let nt = n_trunc as i64;
    let mut coeffs = Vec::with_capacity(2 * n_trunc + 1);
    for n in -nt..=nt {
        let amp = dist.density_translate(n, p.j()).sqrt() * inv_sqrt_n;
        let phase = Complex64::from_polar(1.0, -(n as f64) * p.phi());
        coeffs.push(phase * amp);
    }
    Ok(CoherentState {
        label: p,
        n_trunc,
        coeffs,
    })
}

/// Overlap <p|q> = sum_n sqrt(varpi_n(J) varpi_n(J')) e^{i n (phi - phi')} /
/// sqrt(N(J) N(J')). Magnitude bounded by one.
pub fn cs_overlap(
    dist: &ActionDistribution,
    p: PhasePoint,
    q: PhasePoint,
    n_trunc: usize,
) -> Result<Complex64> {
    let np = certify_window(dist, p.j(), n_trunc)?;
    let nq = certify_window(dist, q.j(), n_trunc)?;
    let dphi = p.phi() - q.phi();
    let nt = n_trunc as i64;
    let mut acc = Complex64::ZERO;
    for n in -nt..=nt {
        let w = (dist.density_translate(n, p.j()) * dist.density_translate(n, q.j())).sqrt();
        if w > 0.0 {
            acc += Complex64::from_polar(w, n as f64 * dphi);
        }
    }
    Ok(acc / (np * nq).sqrt())
}

/// Gaussian overlap kernel through the Poisson-dual series over angle
/// windings; dual route to [`cs_overlap`] for that family.
pub fn cs_overlap_gaussian_poisson(
    sigma: f64,
    p: PhasePoint,
    q: PhasePoint,
    cutoff: usize,
) -> Result<Complex64> {
    let dist = ActionDistribution::gaussian(sigma)?;
    let np = normalization(&dist, p.j());
    let nq = normalization(&dist, q.j());
    let dphi = p.phi() - q.phi();
    let jsum = p.j() + q.j();
    let center = (dphi / (2.0 * PI)).round() as i64;
    let c = cutoff as i64;
    let mut acc = Complex64::ZERO;
    let mut max_term: f64 = 0.0;
    let mut edge_term: f64 = 0.0;
    for k in (center - c)..=(center + c) {
        let u = dphi - 2.0 * PI * k as f64;
        let mag = (-0.5 * sigma * sigma * u * u).exp();
        acc += Complex64::from_polar(mag, -PI * k as f64 * jsum);
        max_term = max_term.max(mag);
        if k == center - c || k == center + c {
            edge_term = edge_term.max(mag);
        }
    }
    if edge_term > 1e-14 * max_term.max(1e-300) {
        return Err(Error::CutoffInsufficient {
            cutoff,
            tail: edge_term,
        });
    }
    let pref = (-(p.j() - q.j()).powi(2) / (8.0 * sigma * sigma)).exp();
    let phase = Complex64::from_polar(1.0, 0.5 * jsum * dphi);
    Ok(acc * pref * phase / (np * nq).sqrt())
}

/// Discrete distribution n -> varpi_n(J) / N(J) over the truncated window;
/// entries sum to one up to the certified tail.
pub fn discrete_distribution(
    dist: &ActionDistribution,
    j: f64,
    n_trunc: usize,
) -> Result<Vec<f64>> {
    let n_ref = certify_window(dist, j, n_trunc)?;
    let nt = n_trunc as i64;
    Ok((-nt..=nt)
        .map(|n| dist.density_translate(n, j) / n_ref)
        .collect())
}

/// Quadrature plan for the resolution-of-identity check: the J-range is
/// [-N - margin, N + margin] and indices within `buffer` of the window edge
/// are excluded.
#[derive(Clone, Copy, Debug)]
pub struct IdentityResidualPlan {
    pub margin: f64,
    pub buffer: usize,
    pub quad_tol: f64,
}

impl Default for IdentityResidualPlan {
    fn default() -> Self {
        Self {
            margin: 10.0,
            buffer: 2,
            quad_tol: 1e-13,
        }
    }
}

/// Max-norm deviation of \int mu(dx) N(J) |x><x| from the identity on the
/// interior basis span. The angle integration is exact by Fourier
/// orthogonality, so the residual reduces to max_n |\int varpi_n(J) dJ - 1|
/// over interior indices; a truncated J-range shows up as the missing tail
/// mass.
pub fn resolution_of_identity_residual(
    dist: &ActionDistribution,
    n_trunc: usize,
    plan: IdentityResidualPlan,
) -> Result<f64> {
    let nt = n_trunc as i64;
    let interior = nt - plan.buffer as i64;
    if interior < 0 {
        return Err(Error::InvalidParameter(
            "buffer exceeds the truncation window".into(),
        ));
    }
    let range = n_trunc as f64 + plan.margin;
    let mut residual: f64 = 0.0;
    for n in -interior..=interior {
        let r = dist.effective_radius();
        let lo = (-range).max(n as f64 - r);
        let hi = range.min(n as f64 + r);
        let mass = if lo >= hi {
            0.0
        } else {
            let breaks = dist.translate_breaks(n);
            quad::integrate_piecewise(
                |j| dist.density_translate(n, j),
                lo,
                hi,
                &breaks,
                plan.quad_tol,
            )?
        };
        residual = residual.max((mass - 1.0).abs());
    }
    Ok(residual)
}
