//! Quantization of classical observables into truncated operator matrices,
//! closed-form special operators (action, energy, angle, Fourier harmonics),
//! and commutators.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::dist::{ActionDistribution, Kind, OverlapMatrix};
use crate::error::{Error, Result};
use crate::quad;

/// Radial factor g_m(J) of one Fourier term g_m(J) e^{i m phi}.
#[derive(Clone)]
pub enum RadialFn {
    Const(Complex64),
    /// Polynomial in J, ascending coefficients.
    Poly(Vec<Complex64>),
    /// Sampled values with linear interpolation, zero outside the table.
    Table {
        j: Vec<f64>,
        g: Vec<Complex64>,
    },
    Fn(Arc<dyn Fn(f64) -> Complex64 + Send + Sync>),
}

impl RadialFn {
    pub fn eval(&self, j: f64) -> Complex64 {
        match self {
            RadialFn::Const(c) => *c,
            RadialFn::Poly(coeffs) => {
                let mut acc = Complex64::ZERO;
                for c in coeffs.iter().rev() {
                    acc = acc * j + c;
                }
                acc
            }
            RadialFn::Table { j: xs, g } => {
                if xs.is_empty() || j < xs[0] || j > *xs.last().unwrap() {
                    return Complex64::ZERO;
                }
                let hi = xs.partition_point(|p| *p <= j).min(xs.len() - 1).max(1);
                let lo = hi - 1;
                let t = (j - xs[lo]) / (xs[hi] - xs[lo]);
                g[lo] * (1.0 - t) + g[hi] * t
            }
            RadialFn::Fn(f) => f(j),
        }
    }

    fn conjugate(&self) -> Option<RadialFn> {
        match self {
            RadialFn::Const(c) => Some(RadialFn::Const(c.conj())),
            RadialFn::Poly(coeffs) => {
                Some(RadialFn::Poly(coeffs.iter().map(|c| c.conj()).collect()))
            }
            RadialFn::Table { j, g } => Some(RadialFn::Table {
                j: j.clone(),
                g: g.iter().map(|c| c.conj()).collect(),
            }),
            RadialFn::Fn(_) => None,
        }
    }

    fn approx_eq(&self, other: &RadialFn) -> bool {
        match (self, other) {
            (RadialFn::Const(a), RadialFn::Const(b)) => (a - b).norm() < 1e-14,
            (RadialFn::Poly(a), RadialFn::Poly(b)) => {
                let len = a.len().max(b.len());
                (0..len).all(|i| {
                    let x = a.get(i).copied().unwrap_or(Complex64::ZERO);
                    let y = b.get(i).copied().unwrap_or(Complex64::ZERO);
                    (x - y).norm() < 1e-14
                })
            }
            (RadialFn::Table { j: ja, g: ga }, RadialFn::Table { j: jb, g: gb }) => {
                ja == jb && ga.iter().zip(gb).all(|(x, y)| (x - y).norm() < 1e-14)
            }
            _ => false,
        }
    }
}

/// Classical observable in separable Fourier form
/// f(J, phi) = sum_m g_m(J) e^{i m phi}.
#[derive(Clone)]
pub struct ObservableSpec {
    terms: Vec<(i32, RadialFn)>,
    reality: bool,
    desc: String,
}

impl fmt::Debug for ObservableSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ObservableSpec({})", self.desc)
    }
}

impl ObservableSpec {
    /// Build from explicit (m, g_m) terms; duplicate m entries are rejected.
    /// Reality (g_{-m} = conj g_m) is detected for closed-form radial parts.
    pub fn from_terms(terms: Vec<(i32, RadialFn)>) -> Result<Self> {
        let mut sorted = terms;
        sorted.sort_by_key(|t| t.0);
        if sorted.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidParameter(
                "duplicate Fourier index in observable terms".into(),
            ));
        }
        let reality = sorted.iter().all(|(m, g)| {
            match sorted.iter().find(|(m2, _)| *m2 == -m) {
                Some((_, g_neg)) => match g.conjugate() {
                    Some(conj) => g_neg.approx_eq(&conj),
                    None => false,
                },
                None => false,
            }
        });
        Ok(Self {
            terms: sorted,
            reality,
            desc: "custom observable".into(),
        })
    }

    pub fn with_desc(mut self, desc: impl Into<String>) -> Self {
        self.desc = desc.into();
        self
    }

    /// Mark a closure-backed observable as real-valued.
    pub fn assume_real(mut self) -> Self {
        self.reality = true;
        self
    }

    /// f(J, phi) = J.
    pub fn action() -> Self {
        Self {
            terms: vec![(
                0,
                RadialFn::Poly(vec![Complex64::ZERO, Complex64::ONE]),
            )],
            reality: true,
            desc: "J".into(),
        }
    }

    /// f(J, phi) = J^2 (kinetic energy in suitable units).
    pub fn energy() -> Self {
        Self {
            terms: vec![(
                0,
                RadialFn::Poly(vec![Complex64::ZERO, Complex64::ZERO, Complex64::ONE]),
            )],
            reality: true,
            desc: "J^2".into(),
        }
    }

    /// f(J, phi) = e^{+i phi} or e^{-i phi}.
    pub fn fourier(sign: i8) -> Self {
        let m = if sign >= 0 { 1 } else { -1 };
        Self {
            terms: vec![(m, RadialFn::Const(Complex64::ONE))],
            reality: false,
            desc: format!("e^({}i phi)", if m > 0 { "+" } else { "-" }),
        }
    }

    /// f = lambda cos(phi).
    pub fn cos_phi(lambda: f64) -> Self {
        let half = Complex64::new(0.5 * lambda, 0.0);
        Self {
            terms: vec![(-1, RadialFn::Const(half)), (1, RadialFn::Const(half))],
            reality: true,
            desc: format!("{lambda} cos(phi)"),
        }
    }

    /// f = lambda sin(phi).
    pub fn sin_phi(lambda: f64) -> Self {
        let c = Complex64::new(0.0, -0.5 * lambda);
        Self {
            terms: vec![(-1, RadialFn::Const(-c)), (1, RadialFn::Const(c))],
            reality: true,
            desc: format!("{lambda} sin(phi)"),
        }
    }

    /// The 2 pi periodic saw B(phi) = phi on [0, 2 pi), truncated to Fourier
    /// indices |m| <= max_m: c_0 = pi and c_m = i/m otherwise.
    pub fn saw_angle(max_m: usize) -> Self {
        let mut terms = vec![(0, RadialFn::Const(Complex64::new(PI, 0.0)))];
        for m in 1..=max_m as i32 {
            terms.push((m, RadialFn::Const(Complex64::new(0.0, 1.0 / m as f64))));
            terms.push((-m, RadialFn::Const(Complex64::new(0.0, -1.0 / m as f64))));
        }
        terms.sort_by_key(|t| t.0);
        Self {
            terms,
            reality: true,
            desc: format!("saw B(phi) to |m| <= {max_m}"),
        }
    }

    pub fn constant(c: Complex64) -> Self {
        Self {
            terms: vec![(0, RadialFn::Const(c))],
            reality: c.im == 0.0,
            desc: format!("constant {c}"),
        }
    }

    /// Pure-angle observable from Fourier coefficients (m, c_m).
    pub fn pure_angle(coeffs: Vec<(i32, Complex64)>) -> Result<Self> {
        let spec = Self::from_terms(
            coeffs
                .into_iter()
                .map(|(m, c)| (m, RadialFn::Const(c)))
                .collect(),
        )?;
        Ok(spec.with_desc("pure-angle observable"))
    }

    pub fn terms(&self) -> &[(i32, RadialFn)] {
        &self.terms
    }

    pub fn is_real(&self) -> bool {
        self.reality
    }

    pub fn desc(&self) -> &str {
        &self.desc
    }

    /// True when every radial factor is constant in J.
    pub fn is_pure_angle(&self) -> bool {
        self.terms
            .iter()
            .all(|(_, g)| matches!(g, RadialFn::Const(_)))
    }

    /// Largest |m| carried by the terms.
    pub fn bandwidth(&self) -> usize {
        self.terms
            .iter()
            .map(|(m, _)| m.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn radial(&self, m: i32) -> Option<&RadialFn> {
        self.terms
            .iter()
            .find(|(m2, _)| *m2 == m)
            .map(|(_, g)| g)
    }

    pub fn eval(&self, j: f64, phi: f64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for (m, g) in &self.terms {
            acc += g.eval(j) * Complex64::from_polar(1.0, *m as f64 * phi);
        }
        acc
    }
}

/// Complex matrix indexed by basis labels n, n' in [-N, N], representing the
/// quantized observable A_f.
#[derive(Clone)]
pub struct TruncatedOperator {
    n_trunc: usize,
    mat: DMatrix<Complex64>,
    bandwidth: usize,
    /// Entries with max(|n|, |n'|) > N - untrusted_edge carry truncation
    /// artifacts (set by products and commutators).
    untrusted_edge: usize,
    label: String,
}

impl fmt::Debug for TruncatedOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "TruncatedOperator(N={}, band={}, label={})",
            self.n_trunc, self.bandwidth, self.label
        )
    }
}

impl TruncatedOperator {
    pub fn from_fn<F: FnMut(i64, i64) -> Complex64>(
        n_trunc: usize,
        bandwidth: usize,
        label: impl Into<String>,
        mut f: F,
    ) -> Self {
        let dim = 2 * n_trunc + 1;
        let nt = n_trunc as i64;
        let bandwidth = bandwidth.min(dim - 1);
        let mut mat = DMatrix::<Complex64>::zeros(dim, dim);
        for n in -nt..=nt {
            for n2 in (n - bandwidth as i64).max(-nt)..=(n + bandwidth as i64).min(nt) {
                mat[((n + nt) as usize, (n2 + nt) as usize)] = f(n, n2);
            }
        }
        Self {
            n_trunc,
            mat,
            bandwidth,
            untrusted_edge: 0,
            label: label.into(),
        }
    }

    pub fn identity(n_trunc: usize) -> Self {
        Self::from_fn(n_trunc, 0, "identity", |_, _| Complex64::ONE)
    }

    pub fn n_trunc(&self) -> usize {
        self.n_trunc
    }

    pub fn dim(&self) -> usize {
        2 * self.n_trunc + 1
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    pub fn untrusted_edge(&self) -> usize {
        self.untrusted_edge
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn entry(&self, n: i64, n2: i64) -> Complex64 {
        let nt = self.n_trunc as i64;
        self.mat[((n + nt) as usize, (n2 + nt) as usize)]
    }

    pub fn adjoint(&self) -> Self {
        Self {
            n_trunc: self.n_trunc,
            mat: self.mat.adjoint(),
            bandwidth: self.bandwidth,
            untrusted_edge: self.untrusted_edge,
            label: format!("adjoint({})", self.label),
        }
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            n_trunc: self.n_trunc,
            mat: self.mat.map(|v| v * factor),
            bandwidth: self.bandwidth,
            untrusted_edge: self.untrusted_edge,
            label: format!("{} * {}", factor, self.label),
        }
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        let adj = self.mat.adjoint();
        (&self.mat - adj).iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (&self.mat - &other.mat)
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    /// Max entry difference over the block max(|n|, |n'|) <= N - margin.
    pub fn interior_max_abs_diff(&self, other: &Self, margin: usize) -> f64 {
        let nt = self.n_trunc as i64;
        let lim = nt - margin as i64;
        let mut worst: f64 = 0.0;
        for n in -lim..=lim {
            for n2 in -lim..=lim {
                worst = worst.max((self.entry(n, n2) - other.entry(n, n2)).norm());
            }
        }
        worst
    }

    /// Eigenvalues of a Hermitian operator, ascending.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        let dev = self.hermiticity_deviation();
        let scale = self.mat.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if dev > 1e-10 * scale.max(1.0) {
            return Err(Error::NonHermitianHamiltonian { deviation: dev });
        }
        let eig = self.mat.clone().symmetric_eigen();
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(vals)
    }

    pub(crate) fn matrix_mut(&mut self) -> &mut DMatrix<Complex64> {
        &mut self.mat
    }

    pub(crate) fn set_bandwidth(&mut self, bandwidth: usize) {
        self.bandwidth = bandwidth.min(self.dim() - 1);
    }

    pub(crate) fn assemble(
        n_trunc: usize,
        mat: DMatrix<Complex64>,
        bandwidth: usize,
        untrusted_edge: usize,
        label: String,
    ) -> Self {
        Self {
            n_trunc,
            mat,
            bandwidth,
            untrusted_edge,
            label,
        }
    }
}

/// Per-entry tolerance for quadrature-backed matrix elements.
pub const ENTRY_QUAD_TOL: f64 = 1e-12;

/// Quantize f into the truncated matrix with entries
/// (A_f)_{n n'} = \int dJ sqrt(varpi_n varpi_n') g_{n - n'}(J),
/// dispatching to closed-form integrals per family: Gaussian weights become
/// normal expectations (exact moment recursion for polynomial radial parts,
/// scaled Gauss-Hermite nodes otherwise), uniform weights become exact
/// interval integrals, custom densities go through adaptive quadrature.
pub fn quantize(
    dist: &ActionDistribution,
    f: &ObservableSpec,
    n_trunc: usize,
) -> Result<TruncatedOperator> {
    quantize_impl(dist, f, n_trunc, false, ENTRY_QUAD_TOL)
}

/// Reference path: every entry by adaptive quadrature of the weighted
/// integrand, regardless of family. Used as the independent route against
/// the closed forms.
pub fn quantize_generic(
    dist: &ActionDistribution,
    f: &ObservableSpec,
    n_trunc: usize,
    tol: f64,
) -> Result<TruncatedOperator> {
    quantize_impl(dist, f, n_trunc, true, tol)
}

fn quantize_impl(
    dist: &ActionDistribution,
    f: &ObservableSpec,
    n_trunc: usize,
    force_generic: bool,
    tol: f64,
) -> Result<TruncatedOperator> {
    let dim = 2 * n_trunc + 1;
    let nt = n_trunc as i64;
    let bandwidth = f.bandwidth().min(dim - 1);
    let mut mat = DMatrix::<Complex64>::zeros(dim, dim);
    for n in -nt..=nt {
        for n2 in (n - bandwidth as i64).max(-nt)..=(n + bandwidth as i64).min(nt) {
            let m = (n - n2) as i32;
            if let Some(g) = f.radial(m) {
                let val = if force_generic {
                    entry_generic(dist, g, n, n2, tol)?
                } else {
                    entry_dispatch(dist, g, n, n2, tol)?
                };
                mat[((n + nt) as usize, (n2 + nt) as usize)] = val;
            }
        }
    }
    Ok(TruncatedOperator::assemble(
        n_trunc,
        mat,
        bandwidth,
        0,
        format!("A[{}] over {:?}", f.desc(), dist),
    ))
}

fn entry_dispatch(
    dist: &ActionDistribution,
    g: &RadialFn,
    n: i64,
    n2: i64,
    tol: f64,
) -> Result<Complex64> {
    match dist.kind() {
        Kind::Gaussian => Ok(entry_gaussian(dist.sigma(), g, n, n2)),
        Kind::Uniform => Ok(entry_uniform(dist.sigma(), g, n, n2, tol)?),
        Kind::Custom => entry_generic(dist, g, n, n2, tol),
    }
}

/// Gaussian weight: sqrt(varpi_n varpi_n') is exp(-d^2 / 8 sigma^2) times the
/// normal density centered at the midpoint, so the entry is that prefactor
/// times a normal expectation of g.
fn entry_gaussian(sigma: f64, g: &RadialFn, n: i64, n2: i64) -> Complex64 {
    let d = (n - n2) as f64;
    let pref = (-d * d / (8.0 * sigma * sigma)).exp();
    let mean = 0.5 * (n + n2) as f64;
    let expectation = match g {
        RadialFn::Const(c) => *c,
        RadialFn::Poly(coeffs) => {
            // E[J^k] under N(mean, sigma^2): m_k = mean m_{k-1} + (k-1) sigma^2 m_{k-2}
            let mut moments = vec![Complex64::ONE];
            for k in 1..coeffs.len() {
                let prev = moments[k - 1];
                let prev2 = if k >= 2 {
                    moments[k - 2]
                } else {
                    Complex64::ZERO
                };
                moments.push(prev * mean + prev2 * ((k - 1) as f64 * sigma * sigma));
            }
            coeffs
                .iter()
                .zip(&moments)
                .map(|(c, m)| c * m)
                .sum::<Complex64>()
        }
        _ => quad::gauss_hermite_64().expectation_normal(mean, sigma, |j| g.eval(j)),
    };
    expectation * pref
}

/// Uniform weight: the integrand is 1/(2 sigma) on the intersection
/// [max(n, n') - sigma, min(n, n') + sigma], zero elsewhere.
fn entry_uniform(sigma: f64, g: &RadialFn, n: i64, n2: i64, tol: f64) -> Result<Complex64> {
    let lo = n.max(n2) as f64 - sigma;
    let hi = n.min(n2) as f64 + sigma;
    if lo >= hi {
        return Ok(Complex64::ZERO);
    }
    let integral = match g {
        RadialFn::Const(c) => c * (hi - lo),
        RadialFn::Poly(coeffs) => {
            // exact antiderivative evaluated at the endpoints
            let anti: Vec<Complex64> = coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c / (k as f64 + 1.0))
                .collect();
            let horner = |x: f64| {
                let mut acc = Complex64::ZERO;
                for c in anti.iter().rev() {
                    acc = acc * x + c;
                }
                acc * x
            };
            horner(hi) - horner(lo)
        }
        _ => quad::integrate_adaptive_complex(|j| g.eval(j), lo, hi, tol)?,
    };
    Ok(integral / (2.0 * sigma))
}

fn entry_generic(
    dist: &ActionDistribution,
    g: &RadialFn,
    n: i64,
    n2: i64,
    tol: f64,
) -> Result<Complex64> {
    let r = dist.effective_radius();
    let lo = n.max(n2) as f64 - r;
    let hi = n.min(n2) as f64 + r;
    if lo >= hi {
        return Ok(Complex64::ZERO);
    }
    let mut breaks = dist.translate_breaks(n);
    breaks.extend(dist.translate_breaks(n2));
    breaks.retain(|x| *x > lo && *x < hi);
    breaks.push(lo);
    breaks.push(hi);
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup();
    let per_panel = tol / breaks.len() as f64;
    let mut acc = Complex64::ZERO;
    for w in breaks.windows(2) {
        acc += quad::integrate_adaptive_complex(
            |j| {
                let w = (dist.density_translate(n, j) * dist.density_translate(n2, j)).sqrt();
                g.eval(j) * w
            },
            w[0],
            w[1],
            per_panel,
        )?;
    }
    Ok(acc)
}

/// Angle operator pi + i sum_{n != n'} varpi_{n,n'} / (n - n'), the
/// quantization of the periodic saw function through its Fourier series.
pub fn angle_operator(dist: &ActionDistribution, n_trunc: usize) -> Result<TruncatedOperator> {
    let overlaps = OverlapMatrix::build(dist, 2 * n_trunc)?;
    let band = overlaps
        .half_bandwidth()
        .unwrap_or(2 * n_trunc)
        .min(2 * n_trunc);
    let mut op = TruncatedOperator::from_fn(n_trunc, band, "", |n, n2| {
        if n == n2 {
            Complex64::new(PI, 0.0)
        } else {
            Complex64::new(0.0, overlaps.entry(n, n2) / (n - n2) as f64)
        }
    });
    op.label = format!("A[angle] over {dist:?}");
    Ok(op)
}

/// Fourier fundamental harmonic A_{e^{+-i phi}} = varpi_{1,0} times the
/// shift by one basis label.
pub fn fourier_harmonic(
    dist: &ActionDistribution,
    sign: i8,
    n_trunc: usize,
) -> Result<TruncatedOperator> {
    let w = dist.overlap_entry(1, 0)?;
    let step = if sign >= 0 { 1i64 } else { -1i64 };
    let mut op = TruncatedOperator::from_fn(n_trunc, 1, "", |n, n2| {
        if n - n2 == step {
            Complex64::new(w, 0.0)
        } else {
            Complex64::ZERO
        }
    });
    op.label = format!(
        "A[e^({}i phi)] over {dist:?}",
        if step > 0 { "+" } else { "-" }
    );
    Ok(op)
}

/// AB - BA. Entries within distance bandwidth(A) + bandwidth(B) of the
/// truncation edge are flagged untrusted: the infinite-lattice product needs
/// summation indices outside the window there.
pub fn commutator(a: &TruncatedOperator, b: &TruncatedOperator) -> Result<TruncatedOperator> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let mat = a.matrix() * b.matrix() - b.matrix() * a.matrix();
    let band = (a.bandwidth() + b.bandwidth()).min(a.dim() - 1);
    let edge = (a.bandwidth() + b.bandwidth()).min(a.n_trunc());
    Ok(TruncatedOperator::assemble(
        a.n_trunc(),
        mat,
        band,
        edge,
        format!("[{}, {}]", a.label(), b.label()),
    ))
}

/// [A_J, A_angle] assembled directly from the overlap matrix:
/// i sum_{n != n'} varpi_{n,n'} |e_n><e_n'|. For the uniform family this is
/// i (1 - 1/(2 sigma)) times the free Jacobi matrix.
pub fn action_angle_commutator(
    dist: &ActionDistribution,
    n_trunc: usize,
) -> Result<TruncatedOperator> {
    let overlaps = OverlapMatrix::build(dist, 2 * n_trunc)?;
    let band = overlaps
        .half_bandwidth()
        .unwrap_or(2 * n_trunc)
        .min(2 * n_trunc);
    let mut op = TruncatedOperator::from_fn(n_trunc, band.max(1), "", |n, n2| {
        if n == n2 {
            Complex64::ZERO
        } else {
            Complex64::new(0.0, overlaps.entry(n, n2))
        }
    });
    op.label = format!("[A_J, A_angle] over {dist:?}");
    Ok(op)
}

/// [A_{J^2}, A_{e^{+-i phi}}] = A_{e^{+-i phi}} +- 2 varpi_{1,0} sum_n
/// n |e_{n +- 1}><e_n|, assembled in closed form.
pub fn energy_harmonic_commutator(
    dist: &ActionDistribution,
    sign: i8,
    n_trunc: usize,
) -> Result<TruncatedOperator> {
    let w = dist.overlap_entry(1, 0)?;
    let step = if sign >= 0 { 1i64 } else { -1i64 };
    let mut op = TruncatedOperator::from_fn(n_trunc, 1, "", |n, n2| {
        if n - n2 == step {
            // w * (n^2 - n'^2) = w * (2 n' step + 1) along the shifted diagonal
            Complex64::new(w * (2.0 * (n2 * step) as f64 + 1.0), 0.0)
        } else {
            Complex64::ZERO
        }
    });
    op.label = format!(
        "[A_(J^2), A_e^({}i phi)] over {dist:?}",
        if step > 0 { "+" } else { "-" }
    );
    Ok(op)
}
