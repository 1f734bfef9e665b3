//! Lower symbols <x|A_f|x> and their closed forms: the d_m coefficients,
//! Fourier-series evaluation for pure-angle observables, the commutator
//! lower symbol, the relative-error diagnostic, and the uniform-family
//! closed-form suite used as the analytic oracle.

use num_complex::Complex64;

use crate::cs::{self, PhasePoint};
use crate::dist::{ActionDistribution, Kind};
use crate::error::{Error, Result};
use crate::quantizer::{quantize, ObservableSpec, TruncatedOperator};

/// Lower-symbol values sampled over a list of phase points.
#[derive(Clone, Debug)]
pub struct LowerSymbolField {
    pub points: Vec<PhasePoint>,
    pub values: Vec<Complex64>,
    pub provenance: String,
}

/// The coefficients d_m(J) = N(J)^{-1} sum_r sqrt(varpi_r(J) varpi_{m+r}(J)),
/// in (0, 1] with d_0 = 1 and d_{-m} = d_m.
#[derive(Clone, Debug)]
pub struct DCoefficients {
    j: f64,
    max_m: usize,
    values: Vec<f64>,
}

impl DCoefficients {
    pub fn j(&self) -> f64 {
        self.j
    }

    pub fn max_m(&self) -> usize {
        self.max_m
    }

    pub fn value(&self, m: i64) -> f64 {
        self.values[m.unsigned_abs() as usize]
    }
}

/// <p|A|p> through the coherent-state coefficient vector.
pub fn lower_symbol(
    dist: &ActionDistribution,
    a: &TruncatedOperator,
    p: PhasePoint,
) -> Result<Complex64> {
    let state = cs::coherent_state(dist, p, a.n_trunc())?;
    let c = state.coeffs();
    if c.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            left: c.len(),
            right: a.dim(),
        });
    }
    let mat = a.matrix();
    let mut acc = Complex64::ZERO;
    for (row, ci) in c.iter().enumerate() {
        let mut inner = Complex64::ZERO;
        for (col, cj) in c.iter().enumerate() {
            inner += mat[(row, col)] * cj;
        }
        acc += ci.conj() * inner;
    }
    Ok(acc)
}

pub fn lower_symbol_field(
    dist: &ActionDistribution,
    a: &TruncatedOperator,
    points: &[PhasePoint],
) -> Result<LowerSymbolField> {
    let values = points
        .iter()
        .map(|p| lower_symbol(dist, a, *p))
        .collect::<Result<Vec<_>>>()?;
    Ok(LowerSymbolField {
        points: points.to_vec(),
        values,
        provenance: format!("{} over {:?}", a.label(), dist),
    })
}

fn require_uniform(dist: &ActionDistribution) -> Result<f64> {
    if dist.kind() != Kind::Uniform {
        return Err(Error::InvalidParameter(
            "closed form is specific to the uniform family".into(),
        ));
    }
    Ok(dist.sigma())
}

/// Closed form of the angle lower symbol for the uniform family:
/// pi - 2 (1 - 1/(2 sigma)) (1 - 1/(2 sigma N(J0))) sin(phi0).
pub fn lower_symbol_angle_closed(dist: &ActionDistribution, p: PhasePoint) -> Result<f64> {
    let sigma = require_uniform(dist)?;
    let n0 = cs::normalization_crenel(sigma, p.j());
    Ok(std::f64::consts::PI
        - 2.0 * (1.0 - 0.5 / sigma) * (1.0 - 0.5 / (sigma * n0)) * p.phi().sin())
}

/// Window certificate for the r-summation of d_m. The product
/// sqrt(varpi_r varpi_{m+r}) concentrates around r = J - m/2 with the tail
/// width of the density itself, and both r and r + m must stay in [-N, N].
fn d_window_certified(dist: &ActionDistribution, j: f64, m: i64, n_trunc: i64) -> Result<()> {
    let needed = (j.abs() + 0.5 * m.abs() as f64 + dist.effective_radius()).ceil() as i64;
    if n_trunc < needed {
        return Err(Error::TruncationInsufficient {
            tail: f64::NAN,
            limit: cs::TRUNCATION_TAIL_LIMIT,
        });
    }
    Ok(())
}

pub fn d_coefficients(
    dist: &ActionDistribution,
    j: f64,
    max_m: usize,
    n_trunc: usize,
) -> Result<DCoefficients> {
    let nt = n_trunc as i64;
    let n_ref = cs::normalization(dist, j);
    let mut values = Vec::with_capacity(max_m + 1);
    values.push(1.0);
    for m in 1..=max_m as i64 {
        d_window_certified(dist, j, m, nt)?;
        let center = j - 0.5 * m as f64;
        let w = dist.effective_radius() + 1.0;
        let lo = ((center - w).floor() as i64).max(-nt);
        let hi = ((center + w).ceil() as i64).min(nt - m);
        let mut acc = 0.0;
        for r in lo..=hi {
            let prod = dist.density_translate(r, j) * dist.density_translate(r + m, j);
            if prod > 0.0 {
                acc += prod.sqrt();
            }
        }
        values.push(acc / n_ref);
    }
    Ok(DCoefficients {
        j,
        max_m,
        values,
    })
}

/// Fourier-series lower symbol of a pure-angle observable:
/// c_0 + sum_{m != 0} d_m(J0) varpi_{0,m} c_m e^{i m phi0}omitting terms with
/// |m| beyond `max_m`.
pub fn lower_symbol_fourier(
    dist: &ActionDistribution,
    f: &ObservableSpec,
    p: PhasePoint,
    max_m: usize,
    n_trunc: usize,
) -> Result<Complex64> {
    if !f.is_pure_angle() {
        return Err(Error::InvalidParameter(
            "the Fourier-series lower symbol needs a pure-angle observable".into(),
        ));
    }
    let d = d_coefficients(dist, p.j(), max_m.min(f.bandwidth()), n_trunc)?;
    let mut acc = Complex64::ZERO;
    for (m, g) in f.terms() {
        let m_i = *m as i64;
        if m_i.unsigned_abs() as usize > max_m {
            continue;
        }
        let c_m = g.eval(0.0);
        if m_i == 0 {
            acc += c_m;
        } else {
            let damp = d.value(m_i) * dist.overlap_entry(0, m_i)?;
            acc += c_m * damp * Complex64::from_polar(1.0, m_i as f64 * p.phi());
        }
    }
    Ok(acc)
}

/// Lower symbol of [A_J, A_angle]:
/// i sum_{m != 0} d_m(J0) varpi_{0,m} e^{i m phi0}; purely imaginary.
pub fn commutator_lower_symbol(
    dist: &ActionDistribution,
    p: PhasePoint,
    max_m: usize,
    n_trunc: usize,
) -> Result<Complex64> {
    let d = d_coefficients(dist, p.j(), max_m, n_trunc)?;
    let mut acc = 0.0;
    for m in 1..=max_m as i64 {
        let damp = d.value(m) * dist.overlap_entry(0, m)?;
        acc += 2.0 * damp * (m as f64 * p.phi()).cos();
    }
    Ok(Complex64::new(0.0, acc))
}

/// Relative error |<p|A_f|p> - f(p)| / |f(p) + C| over the grid. When C is
/// not supplied it defaults to 1 + |min f| over the grid.
pub fn relative_error(
    dist: &ActionDistribution,
    f: &ObservableSpec,
    c: Option<f64>,
    grid: &[PhasePoint],
    n_trunc: usize,
) -> Result<LowerSymbolField> {
    let op = quantize(dist, f, n_trunc)?;
    let f_vals: Vec<Complex64> = grid.iter().map(|p| f.eval(p.j(), p.phi())).collect();
    let c = c.unwrap_or_else(|| {
        1.0 + f_vals
            .iter()
            .map(|v| v.re)
            .fold(f64::INFINITY, f64::min)
            .abs()
    });
    let mut values = Vec::with_capacity(grid.len());
    for (p, f_val) in grid.iter().zip(&f_vals) {
        let denom = f_val + c;
        if denom.norm() < 1e-12 {
            return Err(Error::DenominatorVanishes {
                j: p.j(),
                phi: p.phi(),
                value: denom.norm(),
            });
        }
        let symbol = lower_symbol(dist, &op, *p)?;
        values.push(Complex64::new((symbol - f_val).norm() / denom.norm(), 0.0));
    }
    Ok(LowerSymbolField {
        points: grid.to_vec(),
        values,
        provenance: format!("relative error of {} over {:?}, C = {}", f.desc(), dist, c),
    })
}

/// Closed forms of the uniform-family lower symbols, used as the analytic
/// oracle against the assembled-matrix path.
pub mod uniform_closed {
    use super::*;

    /// Integer labels n whose interval [n - sigma, n + sigma) covers J0.
    fn covering_full(sigma: f64, j0: f64) -> (i64, i64) {
        // n - sigma <= J0 < n + sigma  <=>  J0 - sigma < n <= J0 + sigma
        (((j0 - sigma).floor() as i64) + 1, (j0 + sigma).floor() as i64)
    }

    /// Labels n with J0 in [n + 1 - sigma, n + sigma), the overlap of the
    /// intervals at n and n + 1.
    fn covering_pair(sigma: f64, j0: f64) -> (i64, i64) {
        (
            ((j0 - sigma).floor() as i64) + 1,
            (j0 + sigma - 1.0).floor() as i64,
        )
    }

    /// <A_J> = N^{-1} sum_n n varpi_n(J0).
    pub fn action_lower(dist: &ActionDistribution, j0: f64) -> Result<f64> {
        let sigma = require_uniform(dist)?;
        let n0 = cs::normalization_crenel(sigma, j0);
        let (lo, hi) = covering_full(sigma, j0);
        let sum: f64 = (lo..=hi).map(|n| n as f64).sum();
        Ok(sum / (2.0 * sigma * n0))
    }

    /// <A_{J^2}> = sigma^2/3 + N^{-1} sum_n n^2 varpi_n(J0).
    pub fn energy_lower(dist: &ActionDistribution, j0: f64) -> Result<f64> {
        let sigma = require_uniform(dist)?;
        let n0 = cs::normalization_crenel(sigma, j0);
        let (lo, hi) = covering_full(sigma, j0);
        let sum: f64 = (lo..=hi).map(|n| (n * n) as f64).sum();
        Ok(sigma * sigma / 3.0 + sum / (2.0 * sigma * n0))
    }

    /// <A_{e^{+-i phi}}> = e^{+-i phi0} (1 - 1/(2 sigma)) (1 - 1/(2 sigma N)).
    pub fn fourier_lower(dist: &ActionDistribution, sign: i8, p: PhasePoint) -> Result<Complex64> {
        let sigma = require_uniform(dist)?;
        let n0 = cs::normalization_crenel(sigma, p.j());
        let amp = (1.0 - 0.5 / sigma) * (1.0 - 0.5 / (sigma * n0));
        let s = if sign >= 0 { 1.0 } else { -1.0 };
        Ok(Complex64::from_polar(amp, s * p.phi()))
    }

    /// <[A_J, A_angle]> = 2 i (1 - 1/(2 sigma)) (1 - 1/(2 sigma N)) cos(phi0).
    pub fn action_angle_commutator_lower(
        dist: &ActionDistribution,
        p: PhasePoint,
    ) -> Result<Complex64> {
        let sigma = require_uniform(dist)?;
        let n0 = cs::normalization_crenel(sigma, p.j());
        let amp = 2.0 * (1.0 - 0.5 / sigma) * (1.0 - 0.5 / (sigma * n0)) * p.phi().cos();
        Ok(Complex64::new(0.0, amp))
    }

    /// <[A_{J^2}, A_{e^{+-i phi}}]>: the (2n + 1) or (1 - 2n) weighted sums
    /// over the pair-overlap indicator.
    pub fn energy_fourier_commutator_lower(
        dist: &ActionDistribution,
        sign: i8,
        p: PhasePoint,
    ) -> Result<Complex64> {
        let sigma = require_uniform(dist)?;
        let n0 = cs::normalization_crenel(sigma, p.j());
        let pref = (1.0 - 0.5 / sigma) / (2.0 * sigma * n0);
        if sign >= 0 {
            let (lo, hi) = covering_pair(sigma, p.j());
            let sum: f64 = (lo..=hi).map(|n| (2 * n + 1) as f64).sum();
            Ok(Complex64::from_polar(1.0, p.phi()) * pref * sum)
        } else {
            // J0 in [n - sigma, n - 1 + sigma)  <=>  n - 1 in the pair overlap
            let (lo, hi) = covering_pair(sigma, p.j());
            let sum: f64 = (lo..=hi).map(|n| (1 - 2 * (n + 1)) as f64).sum();
            Ok(Complex64::from_polar(1.0, -p.phi()) * pref * sum)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantizer::{
        action_angle_commutator, energy_harmonic_commutator, fourier_harmonic,
    };
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn gauss(sigma: f64) -> ActionDistribution {
        ActionDistribution::gaussian(sigma).unwrap()
    }

    fn uniform(sigma: f64) -> ActionDistribution {
        ActionDistribution::uniform(sigma).unwrap()
    }

    #[test]
    fn identity_lower_symbol_is_one() {
        let d = gauss(1.0);
        let id = TruncatedOperator::identity(15);
        let v = lower_symbol(&d, &id, PhasePoint::new(0.3, 1.2)).unwrap();
        assert_abs_diff_eq!(v.re, 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn commutative_width_action_and_energy() {
        // at sigma = 1/2 with J0 inside the central cell, <A_J> = 0 and
        // <A_{J^2}> = 1/12
        let d = uniform(0.5);
        let a_j = quantize(&d, &ObservableSpec::action(), 6).unwrap();
        let a_e = quantize(&d, &ObservableSpec::energy(), 6).unwrap();
        let p = PhasePoint::new(0.3, 2.0);
        assert_abs_diff_eq!(lower_symbol(&d, &a_j, p).unwrap().re, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(
            lower_symbol(&d, &a_e, p).unwrap().re,
            1.0 / 12.0,
            epsilon = 1e-14
        );
        // away from the central cell the symbol picks the covering label
        let p2 = PhasePoint::new(2.3, 0.0);
        assert_abs_diff_eq!(lower_symbol(&d, &a_j, p2).unwrap().re, 2.0, epsilon = 1e-13);
        assert_abs_diff_eq!(
            lower_symbol(&d, &a_e, p2).unwrap().re,
            1.0 / 12.0 + 4.0,
            epsilon = 1e-13
        );
    }

    #[test]
    fn angle_closed_form_values() {
        let d = uniform(0.75);
        for j0 in [-1.3, 0.0, 0.4] {
            let v = lower_symbol_angle_closed(&d, PhasePoint::new(j0, PI)).unwrap();
            assert_abs_diff_eq!(v, PI, epsilon = 1e-14);
        }
        let half = uniform(0.5);
        let v = lower_symbol_angle_closed(&half, PhasePoint::new(0.27, 1.0)).unwrap();
        assert_abs_diff_eq!(v, PI, epsilon = 1e-14);

        let one = uniform(1.0);
        let v = lower_symbol_angle_closed(&one, PhasePoint::new(0.5, PI / 2.0)).unwrap();
        assert_abs_diff_eq!(v, PI - 0.5, epsilon = 1e-14);
    }

    #[test]
    fn angle_closed_form_matches_matrix_path() {
        let d = uniform(0.85);
        let op = crate::quantizer::angle_operator(&d, 8).unwrap();
        for (j0, phi0) in [(0.2, 0.7), (-1.4, 2.9), (0.5, 4.4)] {
            let p = PhasePoint::new(j0, phi0);
            let closed = lower_symbol_angle_closed(&d, p).unwrap();
            let via_matrix = lower_symbol(&d, &op, p).unwrap();
            assert_abs_diff_eq!(closed, via_matrix.re, epsilon = 1e-10);
            assert!(via_matrix.im.abs() < 1e-13);
        }
    }

    #[test]
    fn d_zero_is_one_and_symmetry() {
        let d = gauss(1.0);
        let coeffs = d_coefficients(&d, 0.3, 5, 20).unwrap();
        assert_abs_diff_eq!(coeffs.value(0), 1.0);
        for m in 1..=5 {
            assert!(coeffs.value(m) > 0.0 && coeffs.value(m) <= 1.0);
            assert_abs_diff_eq!(coeffs.value(m), coeffs.value(-m));
        }
    }

    #[test]
    fn d_uniform_vanishes_beyond_nearest_neighbor() {
        let d = uniform(0.9);
        let coeffs = d_coefficients(&d, 0.4, 4, 10).unwrap();
        assert!(coeffs.value(1) > 0.0);
        assert_abs_diff_eq!(coeffs.value(2), 0.0);
        assert_abs_diff_eq!(coeffs.value(3), 0.0);
    }

    #[test]
    fn d_gaussian_factorizes_through_shifted_normalization() {
        // d_m(J) = e^{-m^2/(8 s^2)} N(J - m/2) / N(J), an independent route
        let s = 1.0;
        let d = gauss(s);
        let coeffs = d_coefficients(&d, 0.3, 4, 25).unwrap();
        for m in 1..=4i64 {
            let expect = (-((m * m) as f64) / (8.0 * s * s)).exp()
                * cs::normalization(&d, 0.3 - 0.5 * m as f64)
                / cs::normalization(&d, 0.3);
            assert_abs_diff_eq!(coeffs.value(m), expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn d_large_sigma_approaches_one() {
        let d = gauss(50.0);
        let coeffs = d_coefficients(&d, 0.0, 1, 520).unwrap();
        assert!((coeffs.value(1) - 1.0).abs() < 1e-3);
        assert_abs_diff_eq!(coeffs.value(1), 0.9999500012499791, epsilon = 1e-9);
    }

    #[test]
    fn fourier_series_lower_symbol_constant() {
        let d = gauss(0.8);
        let f = ObservableSpec::constant(Complex64::ONE);
        let v = lower_symbol_fourier(&d, &f, PhasePoint::new(0.7, 2.2), 5, 15).unwrap();
        assert!((v - Complex64::ONE).norm() < 1e-14);
    }

    #[test]
    fn fourier_series_lower_symbol_uniform_harmonic() {
        let d = uniform(1.0);
        let f = ObservableSpec::fourier(1);
        let p = PhasePoint::new(0.5, PI / 2.0);
        let v = lower_symbol_fourier(&d, &f, p, 3, 10).unwrap();
        let expect = uniform_closed::fourier_lower(&d, 1, p).unwrap();
        assert!((v - expect).norm() < 1e-14);
        // (1 - 1/(2 sigma)) (1 - 1/(2 sigma N)) at N = 1: 0.5 * 0.5
        assert_abs_diff_eq!(v.norm(), 0.25, epsilon = 1e-14);
    }

    #[test]
    fn fourier_series_matches_matrix_path() {
        let d = gauss(1.0);
        let f = ObservableSpec::saw_angle(8);
        let p = PhasePoint::new(0.4, 2.0);
        let series = lower_symbol_fourier(&d, &f, p, 8, 20).unwrap();
        let op = quantize(&d, &f, 20).unwrap();
        let matrix = lower_symbol(&d, &op, p).unwrap();
        assert!((series - matrix).norm() < 1e-9, "{series} vs {matrix}");
    }

    #[test]
    fn saw_lower_symbol_approaches_fourier_series_at_large_width() {
        let d = gauss(20.0);
        let f = ObservableSpec::saw_angle(400);
        let v = lower_symbol_fourier(&d, &f, PhasePoint::new(0.0, 2.0), 400, 420).unwrap();
        assert_abs_diff_eq!(v.re, 2.0, epsilon = 1e-9);
        assert!(v.im.abs() < 1e-12);
    }

    #[test]
    fn commutator_lower_symbol_uniform_cases() {
        let d = uniform(1.0);
        let at_quarter = commutator_lower_symbol(&d, PhasePoint::new(0.3, PI / 2.0), 3, 10).unwrap();
        assert!(at_quarter.norm() < 1e-14);

        let v = commutator_lower_symbol(&d, PhasePoint::new(0.5, 0.0), 3, 10).unwrap();
        assert!((v - Complex64::new(0.0, 0.5)).norm() < 1e-14);

        // matches the closed form on generic points
        for (j0, phi0) in [(0.1, 0.9), (1.7, 5.1)] {
            let p = PhasePoint::new(j0, phi0);
            let series = commutator_lower_symbol(&d, p, 3, 10).unwrap();
            let closed = uniform_closed::action_angle_commutator_lower(&d, p).unwrap();
            assert!((series - closed).norm() < 1e-14);
        }
    }

    #[test]
    fn commutator_lower_symbol_classical_limit() {
        let d = gauss(20.0);
        let v = commutator_lower_symbol(&d, PhasePoint::new(0.0, PI), 250, 330).unwrap();
        assert!(
            (v - Complex64::new(0.0, -1.0)).norm() < 5e-2,
            "value {v} should approach -i"
        );
        assert!((v - Complex64::new(0.0, -1.0)).norm() < 1e-8);
    }

    #[test]
    fn commutator_lower_symbol_matches_matrix_route() {
        for d in [gauss(0.9), uniform(0.8)] {
            let n = 16;
            let direct = action_angle_commutator(&d, n).unwrap();
            for (j0, phi0) in [(0.25, 0.4), (-0.8, 3.6)] {
                let p = PhasePoint::new(j0, phi0);
                let series = commutator_lower_symbol(&d, p, 8, n).unwrap();
                let via_matrix = lower_symbol(&d, &direct, p).unwrap();
                assert!((series - via_matrix).norm() < 1e-9, "{d:?} at {p:?}");
            }
        }
    }

    #[test]
    fn relative_error_constant_vanishes() {
        let d = gauss(0.7);
        let f = ObservableSpec::constant(Complex64::new(2.5, 0.0));
        let grid = [PhasePoint::new(0.0, 0.1), PhasePoint::new(1.2, 3.0)];
        let field = relative_error(&d, &f, Some(0.0), &grid, 10).unwrap();
        for v in &field.values {
            assert!(v.re < 1e-13);
        }
    }

    #[test]
    fn relative_error_action_at_integer_labels() {
        let d = uniform(0.5);
        let grid = [PhasePoint::new(1.0, 0.0), PhasePoint::new(-2.0, 2.0)];
        let field = relative_error(&d, &ObservableSpec::action(), Some(1.0), &grid, 8).unwrap();
        for v in &field.values {
            assert!(v.re < 1e-13, "{}", v.re);
        }
    }

    #[test]
    fn relative_error_energy_closed_form() {
        let d = uniform(0.75);
        let grid = [PhasePoint::new(0.0, 1.0)];
        let field = relative_error(&d, &ObservableSpec::energy(), Some(1.0), &grid, 8).unwrap();
        // lower symbol sigma^2/3 at J0 = 0 against f = 0 with C = 1
        assert_abs_diff_eq!(field.values[0].re, 0.1875, epsilon = 1e-13);
    }

    #[test]
    fn relative_error_guards_vanishing_denominator() {
        let d = uniform(0.75);
        let grid = [PhasePoint::new(0.0, 0.3)];
        let res = relative_error(&d, &ObservableSpec::action(), Some(0.0), &grid, 8);
        match res {
            Err(Error::DenominatorVanishes { j, .. }) => assert_abs_diff_eq!(j, 0.0),
            other => panic!("expected DenominatorVanishes, got {other:?}"),
        }
    }

    #[test]
    fn uniform_closed_forms_match_matrix_path() {
        let sigma = 0.8;
        let d = uniform(sigma);
        let n = 10;
        let a_j = quantize(&d, &ObservableSpec::action(), n).unwrap();
        let a_e = quantize(&d, &ObservableSpec::energy(), n).unwrap();
        let harm_p = fourier_harmonic(&d, 1, n).unwrap();
        let comm = action_angle_commutator(&d, n).unwrap();
        let ecomm_p = energy_harmonic_commutator(&d, 1, n).unwrap();
        let ecomm_m = energy_harmonic_commutator(&d, -1, n).unwrap();
        for (j0, phi0) in [(0.13, 0.4), (0.62, 2.2), (-1.37, 5.9), (2.2, 1.1)] {
            let p = PhasePoint::new(j0, phi0);
            assert_abs_diff_eq!(
                uniform_closed::action_lower(&d, j0).unwrap(),
                lower_symbol(&d, &a_j, p).unwrap().re,
                epsilon = 1e-12
            );
            assert_abs_diff_eq!(
                uniform_closed::energy_lower(&d, j0).unwrap(),
                lower_symbol(&d, &a_e, p).unwrap().re,
                epsilon = 1e-12
            );
            let f_closed = uniform_closed::fourier_lower(&d, 1, p).unwrap();
            let f_matrix = lower_symbol(&d, &harm_p, p).unwrap();
            assert!((f_closed - f_matrix).norm() < 1e-12);
            let c_closed = uniform_closed::action_angle_commutator_lower(&d, p).unwrap();
            let c_matrix = lower_symbol(&d, &comm, p).unwrap();
            assert!((c_closed - c_matrix).norm() < 1e-12);
            let e_closed = uniform_closed::energy_fourier_commutator_lower(&d, 1, p).unwrap();
            let e_matrix = lower_symbol(&d, &ecomm_p, p).unwrap();
            assert!((e_closed - e_matrix).norm() < 1e-12, "at {p:?}");
            let em_closed = uniform_closed::energy_fourier_commutator_lower(&d, -1, p).unwrap();
            let em_matrix = lower_symbol(&d, &ecomm_m, p).unwrap();
            assert!((em_closed - em_matrix).norm() < 1e-12, "at {p:?}");
        }
    }

    #[test]
    fn hermitian_operator_symbols_are_real() {
        let d = gauss(0.8);
        let op = quantize(&d, &ObservableSpec::cos_phi(1.3), 12).unwrap();
        for (j0, phi0) in [(0.0, 0.0), (0.9, 2.4), (-1.1, 5.0)] {
            let v = lower_symbol(&d, &op, PhasePoint::new(j0, phi0)).unwrap();
            assert!(v.im.abs() < 1e-10);
        }
    }
}
