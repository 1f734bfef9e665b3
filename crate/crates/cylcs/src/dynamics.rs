//! Time evolution of coherent states under a quantized Hamiltonian and of
//! the phase-space localization distribution rho, with the Gaussian free
//! Hamiltonian series as the analytic oracle.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::cs::{self, PhasePoint};
use crate::dist::ActionDistribution;
use crate::error::{Error, Result};
use crate::quantizer::TruncatedOperator;

/// Product grid over the cylinder.
#[derive(Clone, Debug)]
pub struct PhaseGrid {
    pub j: Vec<f64>,
    pub phi: Vec<f64>,
}

impl PhaseGrid {
    pub fn regular(j_min: f64, j_max: f64, j_steps: usize, phi_steps: usize) -> Self {
        let j = (0..j_steps)
            .map(|i| {
                if j_steps == 1 {
                    j_min
                } else {
                    j_min + (j_max - j_min) * i as f64 / (j_steps - 1) as f64
                }
            })
            .collect();
        // phi endpoints identified: step over [0, 2 pi)
        let phi = (0..phi_steps.max(1))
            .map(|i| 2.0 * PI * i as f64 / phi_steps.max(1) as f64)
            .collect();
        Self { j, phi }
    }

    pub fn len(&self) -> usize {
        self.j.len() * self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Sampled localization distribution rho = N(J) |<J, phi|psi(t)>|^2 at one
/// time, row-major over (j, phi).
#[derive(Clone, Debug)]
pub struct EvolutionFrame {
    pub t: f64,
    pub initial: PhasePoint,
    pub grid: PhaseGrid,
    pub rho: Vec<f64>,
}

impl EvolutionFrame {
    pub fn rho_at(&self, j_index: usize, phi_index: usize) -> f64 {
        self.rho[j_index * self.grid.phi.len() + phi_index]
    }

    /// \int rho dJ dphi / (2 pi) by the trapezoid rule in J and the exact
    /// periodic rule in phi; equals one once the grid captures the mass.
    pub fn integral(&self) -> f64 {
        let nj = self.grid.j.len();
        let nphi = self.grid.phi.len();
        if nj < 2 || nphi == 0 {
            return 0.0;
        }
        let dphi = 2.0 * PI / nphi as f64;
        let mut acc = 0.0;
        for (i, _) in self.grid.j.iter().enumerate() {
            let mut row = 0.0;
            for k in 0..nphi {
                row += self.rho_at(i, k);
            }
            let weight = if i == 0 {
                0.5 * (self.grid.j[1] - self.grid.j[0])
            } else if i == nj - 1 {
                0.5 * (self.grid.j[nj - 1] - self.grid.j[nj - 2])
            } else {
                0.5 * (self.grid.j[i + 1] - self.grid.j[i - 1])
            };
            acc += row * dphi * weight;
        }
        acc / (2.0 * PI)
    }
}

fn hermiticity_guard(h: &TruncatedOperator) -> Result<()> {
    let dev = h.hermiticity_deviation();
    let scale = h
        .matrix()
        .iter()
        .map(|v| v.norm())
        .fold(0.0f64, f64::max)
        .max(1.0);
    if dev > 1e-10 * scale {
        return Err(Error::NonHermitianHamiltonian { deviation: dev });
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian truncated Hamiltonian, shared across
/// evolution times.
pub struct Propagator {
    n_trunc: usize,
    eigenvalues: Vec<f64>,
    /// None for diagonal Hamiltonians (phases apply directly).
    basis: Option<DMatrix<Complex64>>,
}

impl Propagator {
    pub fn new(h: &TruncatedOperator) -> Result<Self> {
        hermiticity_guard(h)?;
        if h.bandwidth() == 0 {
            let nt = h.n_trunc() as i64;
            Ok(Self {
                n_trunc: h.n_trunc(),
                eigenvalues: (-nt..=nt).map(|n| h.entry(n, n).re).collect(),
                basis: None,
            })
        } else {
            let eig = h.matrix().clone().symmetric_eigen();
            Ok(Self {
                n_trunc: h.n_trunc(),
                eigenvalues: eig.eigenvalues.iter().copied().collect(),
                basis: Some(eig.eigenvectors),
            })
        }
    }

    /// e^{-i H t} applied to a coefficient vector.
    pub fn apply(&self, coeffs: &[Complex64], t: f64) -> Vec<Complex64> {
        let phases: Vec<Complex64> = self
            .eigenvalues
            .iter()
            .map(|ev| Complex64::from_polar(1.0, -ev * t))
            .collect();
        match &self.basis {
            None => coeffs
                .iter()
                .zip(&phases)
                .map(|(c, ph)| c * ph)
                .collect(),
            Some(u) => {
                let v = DVector::from_column_slice(coeffs);
                let mut modal = u.adjoint() * v;
                for (x, ph) in modal.iter_mut().zip(&phases) {
                    *x *= ph;
                }
                (u * modal).iter().copied().collect()
            }
        }
    }

    pub fn n_trunc(&self) -> usize {
        self.n_trunc
    }
}

/// Coefficients of e^{-i A_H t} |p0> in the truncated basis; norm preserved.
pub fn evolve_state(
    dist: &ActionDistribution,
    h: &TruncatedOperator,
    p0: PhasePoint,
    t: f64,
) -> Result<Vec<Complex64>> {
    let prop = Propagator::new(h)?;
    let state = cs::coherent_state(dist, p0, h.n_trunc())?;
    Ok(prop.apply(state.coeffs(), t))
}

/// rho(J, phi) = N(J) |<J, phi|psi(t)>|^2 over the grid.
pub fn localization_frame(
    dist: &ActionDistribution,
    h: &TruncatedOperator,
    p0: PhasePoint,
    t: f64,
    grid: &PhaseGrid,
) -> Result<EvolutionFrame> {
    let coeffs = evolve_state(dist, h, p0, t)?;
    frame_from_coeffs(dist, &coeffs, h.n_trunc(), p0, t, grid)
}

/// Frames at several times with the eigendecomposition shared.
pub fn localization_frames(
    dist: &ActionDistribution,
    h: &TruncatedOperator,
    p0: PhasePoint,
    times: &[f64],
    grid: &PhaseGrid,
) -> Result<Vec<EvolutionFrame>> {
    let prop = Propagator::new(h)?;
    let state = cs::coherent_state(dist, p0, h.n_trunc())?;
    times
        .iter()
        .map(|t| {
            let coeffs = prop.apply(state.coeffs(), *t);
            frame_from_coeffs(dist, &coeffs, h.n_trunc(), p0, *t, grid)
        })
        .collect()
}

fn frame_from_coeffs(
    dist: &ActionDistribution,
    coeffs: &[Complex64],
    n_trunc: usize,
    p0: PhasePoint,
    t: f64,
    grid: &PhaseGrid,
) -> Result<EvolutionFrame> {
    let nt = n_trunc as i64;
    let mut rho = Vec::with_capacity(grid.len());
    for &j in &grid.j {
        let n_j = cs::normalization(dist, j);
        // amplitudes sqrt(varpi_n(J)/N(J)) are phi-independent
        let amps: Vec<f64> = (-nt..=nt)
            .map(|n| (dist.density_translate(n, j) / n_j).sqrt())
            .collect();
        for &phi in &grid.phi {
            let mut braket = Complex64::ZERO;
            for (idx, amp) in amps.iter().enumerate() {
                if *amp > 0.0 {
                    let n = idx as i64 - nt;
                    // conj of the CS coefficient carries e^{+i n phi}
                    braket += coeffs[idx] * Complex64::from_polar(*amp, n as f64 * phi);
                }
            }
            rho.push(n_j * braket.norm_sqr());
        }
    }
    Ok(EvolutionFrame {
        t,
        initial: p0,
        grid: grid.clone(),
        rho,
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SeriesForm {
    Direct,
    Poisson,
}

/// Closed-form localization distribution for the Gaussian family under the
/// free Hamiltonian A_{J^2} (the constant energy shift cancels in |.|^2).
///
/// Direct evaluates the label-space series
///   rho = e^{-(J-J0)^2/(4 s^2)} / (2 pi s^2 N(J0))
///         |sum_n e^{-((J+J0)/2 - n)^2/(2 s^2)} e^{i(n(phi-phi0) - n^2 t)}|^2.
/// Poisson evaluates its dual over angle windings. The free phases make the
/// Gaussian width complex, alpha = 1/(2 s^2) + i t, so the dual reads
///   sum_k sqrt(pi/alpha) e^{-M^2/(2 s^2)} e^{(beta - 2 pi i k)^2 / (4 alpha)},
/// with M = (J+J0)/2 and beta = M/s^2 + i(phi-phi0); at t = 0 it reduces to
/// the familiar real-width winding sum. Both forms agree to series accuracy.
pub fn gaussian_rho_series(
    sigma: f64,
    p0: PhasePoint,
    p: PhasePoint,
    t: f64,
    form: SeriesForm,
    cutoff: usize,
) -> Result<f64> {
    let dist = ActionDistribution::gaussian(sigma)?;
    let n0 = cs::normalization(&dist, p0.j());
    let mid = 0.5 * (p.j() + p0.j());
    let dphi = p.phi() - p0.phi();
    let c = cutoff as i64;
    match form {
        SeriesForm::Direct => {
            let center = mid.round() as i64;
            let mut sum = Complex64::ZERO;
            let mut edge: f64 = 0.0;
            for n in (center - c)..=(center + c) {
                let u = mid - n as f64;
                let mag = (-u * u / (2.0 * sigma * sigma)).exp();
                let phase = n as f64 * dphi - (n * n) as f64 * t;
                sum += Complex64::from_polar(mag, phase);
                if n == center - c || n == center + c {
                    edge = edge.max(mag);
                }
            }
            if edge > 1e-14 {
                return Err(Error::CutoffInsufficient {
                    cutoff,
                    tail: edge,
                });
            }
            let pref = (-(p.j() - p0.j()).powi(2) / (4.0 * sigma * sigma)).exp()
                / (2.0 * PI * sigma * sigma * n0);
            Ok(pref * sum.norm_sqr())
        }
        SeriesForm::Poisson => {
            let alpha = Complex64::new(0.5 / (sigma * sigma), t);
            let beta = Complex64::new(mid / (sigma * sigma), dphi);
            let gamma = mid * mid / (2.0 * sigma * sigma);
            let sqrt_pi_alpha = (Complex64::new(PI, 0.0) / alpha).sqrt();
            let center = (dphi / (2.0 * PI)).round() as i64;
            let mut sum = Complex64::ZERO;
            let mut max_mag: f64 = 0.0;
            let mut edge: f64 = 0.0;
            for k in (center - c)..=(center + c) {
                let z = beta - Complex64::new(0.0, 2.0 * PI * k as f64);
                let term = ((z * z) / (4.0 * alpha) - gamma).exp();
                sum += term;
                let mag = term.norm();
                max_mag = max_mag.max(mag);
                if k == center - c || k == center + c {
                    edge = edge.max(mag);
                }
            }
            if edge > 1e-14 * max_mag.max(1e-300) {
                return Err(Error::CutoffInsufficient {
                    cutoff,
                    tail: edge,
                });
            }
            let series = sqrt_pi_alpha * sum;
            let pref = (-(p.j() - p0.j()).powi(2) / (4.0 * sigma * sigma)).exp()
                / (2.0 * PI * sigma * sigma * n0);
            Ok(pref * series.norm_sqr())
        }
    }
}

/// Heisenberg-picture lower symbol <p0| e^{i A_H t} A e^{-i A_H t} |p0> at
/// the listed times.
pub fn evolved_lower_symbol(
    dist: &ActionDistribution,
    h: &TruncatedOperator,
    a: &TruncatedOperator,
    p0: PhasePoint,
    times: &[f64],
) -> Result<Vec<Complex64>> {
    if h.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            left: h.dim(),
            right: a.dim(),
        });
    }
    let prop = Propagator::new(h)?;
    let state = cs::coherent_state(dist, p0, h.n_trunc())?;
    let mat = a.matrix();
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        let psi = prop.apply(state.coeffs(), t);
        let v = DVector::from_column_slice(&psi);
        let av = mat * &v;
        let mut acc = Complex64::ZERO;
        for (c, w) in psi.iter().zip(av.iter()) {
            acc += c.conj() * w;
        }
        out.push(acc);
    }
    Ok(out)
}
