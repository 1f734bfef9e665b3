//! Acceptance suite: every criterion prints one PASS/FAIL line (run with
//! `cargo test -p cylcs --test acceptance -- --nocapture`).

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use cylcs::symbols::uniform_closed;
use cylcs::{
    action_angle_commutator, angle_operator, commutator, cs_overlap, d_coefficients,
    energy_harmonic_commutator, fourier_harmonic, gaussian_rho_series, lower_symbol,
    lower_symbol_angle_closed, normalization, quantize, quantize_generic,
    resolution_of_identity_residual, ActionDistribution, IdentityResidualPlan, ObservableSpec,
    PhasePoint, RadialFn, SeriesForm, TruncatedOperator,
};

struct Criterion {
    index: usize,
    name: &'static str,
    start: Instant,
}

impl Criterion {
    fn new(index: usize, name: &'static str) -> Self {
        Self {
            index,
            name,
            start: Instant::now(),
        }
    }

    fn finish(self, worst: f64, tol: f64) {
        let elapsed = self.start.elapsed().as_secs_f64();
        let verdict = if worst <= tol { "PASS" } else { "FAIL" };
        println!(
            "ACCEPTANCE {} {verdict} ({elapsed:.2} s): {} [worst {worst:.3e}, tolerance {tol:.1e}]",
            self.index, self.name
        );
        assert!(
            worst <= tol,
            "criterion {} failed: worst deviation {worst:.3e} exceeds {tol:.1e}",
            self.index
        );
    }
}

fn gauss(sigma: f64) -> ActionDistribution {
    ActionDistribution::gaussian(sigma).unwrap()
}

fn uniform(sigma: f64) -> ActionDistribution {
    ActionDistribution::uniform(sigma).unwrap()
}

#[test]
fn criterion_1_canonical_ladder_identity() {
    let crit = Criterion::new(1, "canonical ladder [A_J, A_e] = +-A_e at N = 50");
    let n = 50;
    let mut worst: f64 = 0.0;
    let dists = [
        gauss(0.5),
        gauss(1.0),
        gauss(2.0),
        uniform(0.5),
        uniform(0.75),
        uniform(1.0),
    ];
    for dist in &dists {
        let a_j = quantize(dist, &ObservableSpec::action(), n).unwrap();
        for sign in [1i8, -1] {
            let harm = fourier_harmonic(dist, sign, n).unwrap();
            let comm = commutator(&a_j, &harm).unwrap();
            let expect = harm.scaled(Complex64::new(sign as f64, 0.0));
            worst = worst.max(comm.interior_max_abs_diff(&expect, comm.untrusted_edge()));
        }
    }
    crit.finish(worst, 1e-13);
}

#[test]
fn criterion_2_uniform_closed_form_suite() {
    let crit = Criterion::new(2, "uniform closed forms vs generic quadrature, 100 triples");
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let n = 9;
    let mut worst: f64 = 0.0;

    // fixed-width endpoints of the family
    let harm_low = fourier_harmonic(&uniform(0.5), 1, n).unwrap();
    worst = worst.max(harm_low.max_abs_diff(&harm_low.scaled(Complex64::ZERO)));
    let harm_high = fourier_harmonic(&uniform(1.0), 1, n).unwrap();
    worst = worst.max((harm_high.entry(1, 0).re - 0.5).abs());

    for _ in 0..100 {
        let sigma: f64 = rng.random_range(0.5..=1.0);
        let j0: f64 = rng.random_range(-3.0..3.0);
        let phi0: f64 = rng.random_range(0.0..2.0 * PI);
        let p = PhasePoint::new(j0, phi0);
        let dist = uniform(sigma);

        // operator closed forms
        let energy = quantize(&dist, &ObservableSpec::energy(), n).unwrap();
        let energy_generic =
            quantize_generic(&dist, &ObservableSpec::energy(), n, 1e-12).unwrap();
        worst = worst.max(energy.max_abs_diff(&energy_generic));
        for k in -(n as i64)..=(n as i64) {
            worst = worst
                .max((energy.entry(k, k).re - ((k * k) as f64 + sigma * sigma / 3.0)).abs());
        }

        let harm = fourier_harmonic(&dist, 1, n).unwrap();
        let harm_generic = quantize_generic(&dist, &ObservableSpec::fourier(1), n, 1e-12).unwrap();
        worst = worst.max(harm.max_abs_diff(&harm_generic));
        worst = worst.max((harm.entry(1, 0).re - (1.0 - 0.5 / sigma)).abs());

        let angle = angle_operator(&dist, n).unwrap();
        let angle_generic =
            quantize_generic(&dist, &ObservableSpec::saw_angle(2 * n), n, 1e-12).unwrap();
        worst = worst.max(angle.max_abs_diff(&angle_generic));
        let w = 1.0 - 0.5 / sigma;
        let angle_closed = TruncatedOperator::from_fn(n, 1, "opangleun", |a, b| {
            if a == b {
                Complex64::new(PI, 0.0)
            } else if a - b == 1 {
                Complex64::new(0.0, w)
            } else if a - b == -1 {
                Complex64::new(0.0, -w)
            } else {
                Complex64::ZERO
            }
        });
        worst = worst.max(angle.max_abs_diff(&angle_closed));

        let comm = action_angle_commutator(&dist, n).unwrap();
        let comm_closed = TruncatedOperator::from_fn(n, 1, "ccrcirun", |a, b| {
            if (a - b).abs() == 1 {
                Complex64::new(0.0, w)
            } else {
                Complex64::ZERO
            }
        });
        worst = worst.max(comm.max_abs_diff(&comm_closed));

        // lower-symbol closed forms against the generic-path matrices
        let ls_fourier = lower_symbol(&dist, &harm_generic, p).unwrap();
        worst = worst.max((ls_fourier - uniform_closed::fourier_lower(&dist, 1, p).unwrap()).norm());

        let ls_angle = lower_symbol(&dist, &angle_generic, p).unwrap();
        worst = worst.max((ls_angle.re - lower_symbol_angle_closed(&dist, p).unwrap()).abs());
        worst = worst.max(ls_angle.im.abs());

        let ls_comm = lower_symbol(&dist, &comm, p).unwrap();
        worst = worst
            .max((ls_comm - uniform_closed::action_angle_commutator_lower(&dist, p).unwrap()).norm());

        for sign in [1i8, -1] {
            let ec = energy_harmonic_commutator(&dist, sign, n).unwrap();
            let ls_ec = lower_symbol(&dist, &ec, p).unwrap();
            let closed = uniform_closed::energy_fourier_commutator_lower(&dist, sign, p).unwrap();
            worst = worst.max((ls_ec - closed).norm());
        }
    }
    crit.finish(worst, 1e-9);
}

#[test]
fn criterion_3_gaussian_theta_poisson_duality() {
    let crit = Criterion::new(3, "theta direct vs Poisson; rho series dual forms");
    let mut theta_worst: f64 = 0.0;
    for sigma in [0.2, 1.0, 5.0] {
        let dist = gauss(sigma);
        for i in 0..1000 {
            let j = -2.0 + 4.0 * i as f64 / 999.0;
            let direct = cylcs::cs::normalization_direct(&dist, j);
            let poisson = cylcs::cs::normalization_poisson_gaussian(sigma, j);
            theta_worst = theta_worst.max((direct - poisson).abs());
        }
    }
    let mut worst_series: f64 = 0.0;
    let mut rng = StdRng::seed_from_u64(0xca11);
    for _ in 0..50 {
        let sigma: f64 = rng.random_range(0.3..3.0);
        let p0 = PhasePoint::new(rng.random_range(-2.0..2.0), rng.random_range(0.0..2.0 * PI));
        let p = PhasePoint::new(rng.random_range(-2.0..2.0), rng.random_range(0.0..2.0 * PI));
        let t: f64 = rng.random_range(0.0..3.0);
        let a = gaussian_rho_series(sigma, p0, p, t, SeriesForm::Direct, 80).unwrap();
        let b = gaussian_rho_series(sigma, p0, p, t, SeriesForm::Poisson, 80).unwrap();
        worst_series = worst_series.max((a - b).abs());
    }
    println!(
        "  criterion 3 detail: theta worst {theta_worst:.3e} (tol 1e-12), rho-series worst \
         {worst_series:.3e} (tol 1e-10)"
    );
    let combined = (theta_worst / 1e-12).max(worst_series / 1e-10);
    crit.finish(combined, 1.0);
}

#[test]
fn criterion_4_resolution_of_identity() {
    let crit = Criterion::new(4, "resolution of identity residuals");
    let g = resolution_of_identity_residual(
        &gauss(1.0),
        30,
        IdentityResidualPlan {
            margin: 10.0,
            buffer: 10,
            quad_tol: 1e-13,
        },
    )
    .unwrap();
    let u = resolution_of_identity_residual(
        &uniform(0.75),
        30,
        IdentityResidualPlan {
            margin: 2.0,
            buffer: 2,
            quad_tol: 1e-14,
        },
    )
    .unwrap();
    println!("  criterion 4 detail: gaussian residual {g:.3e} (tol 1e-10), uniform residual {u:.3e} (tol 1e-12)");
    let combined = (g / 1e-10).max(u / 1e-12);
    crit.finish(combined, 1.0);
}

#[test]
fn criterion_5_limit_regimes() {
    let crit = Criterion::new(5, "limit regimes: sharp overlap, d_1 at wide width, classical commutator");
    let mut combined: f64 = 0.0;

    let sharp = cs_overlap(
        &gauss(0.05),
        PhasePoint::new(0.0, 0.0),
        PhasePoint::new(1.0, 0.0),
        5,
    )
    .unwrap()
    .norm();
    combined = combined.max(sharp / 1e-6);

    let d1 = d_coefficients(&gauss(50.0), 0.0, 1, 520).unwrap().value(1);
    combined = combined.max((d1 - 1.0).abs() / 1e-3);

    let comm = cylcs::commutator_lower_symbol(&gauss(20.0), PhasePoint::new(0.0, PI), 250, 330)
        .unwrap();
    let dev = (comm - Complex64::new(0.0, -1.0)).norm();
    combined = combined.max(dev / 5e-2);

    println!(
        "  criterion 5 detail: |overlap| {sharp:.3e} (tol 1e-6), |d_1 - 1| {:.3e} (tol 1e-3), \
         |<[A_J,A_phi]> + i| {dev:.3e} (tol 5e-2)",
        (d1 - 1.0).abs()
    );
    crit.finish(combined, 1.0);
}

#[test]
fn criterion_6_jacobi_spectrum() {
    let crit = Criterion::new(6, "uniform action-angle commutator spectrum at N = 200");
    let n = 200;
    let mut worst: f64 = 0.0;
    for sigma in [0.75, 1.0] {
        let dist = uniform(sigma);
        let comm = action_angle_commutator(&dist, n).unwrap();
        // the commutator is i S with S real symmetric; eigensolve S
        let dim = comm.dim();
        let mut s = nalgebra::DMatrix::<f64>::zeros(dim, dim);
        let nt = n as i64;
        let mut max_im: f64 = 0.0;
        for a in -nt..=nt {
            for b in -nt..=nt {
                let v = comm.entry(a, b) * Complex64::new(0.0, -1.0);
                max_im = max_im.max(v.im.abs());
                s[((a + nt) as usize, (b + nt) as usize)] = v.re;
            }
        }
        assert!(max_im == 0.0, "commutator should be i times a real matrix");
        let eig = s.symmetric_eigen();
        let bound = 2.0 * (1.0 - 0.5 / sigma);
        let excess = eig
            .eigenvalues
            .iter()
            .map(|l| (l.abs() - bound).max(0.0))
            .fold(0.0f64, f64::max);
        worst = worst.max(excess);
        println!(
            "  criterion 6 detail: sigma = {sigma}, spectrum within i (1 - 1/(2 sigma)) [-2, 2] \
             = i [{:.4}, {:.4}], max excess {excess:.3e}",
            -bound, bound
        );
    }
    println!(
        "  criterion 6 log: the source text prints the commutator spectrum as i [-2 - 1/sigma, \
         2 - 1/sigma]; scaling the free Jacobi spectrum [-2, 2] by (1 - 1/(2 sigma)) gives \
         i [-2 + 1/sigma, 2 - 1/sigma], the interval asserted here"
    );
    crit.finish(worst, 1e-3);
}

#[test]
fn criterion_7_euclidean_algebra() {
    let crit = Criterion::new(7, "Euclidean algebra relations on interior blocks");
    let lambda = 1.0;
    let n = 20;
    let mut worst: f64 = 0.0;
    for dist in [gauss(1.0), uniform(0.75)] {
        let a_j = quantize(&dist, &ObservableSpec::action(), n).unwrap();
        let a_cos = quantize(&dist, &ObservableSpec::cos_phi(lambda), n).unwrap();
        let a_sin = quantize(&dist, &ObservableSpec::sin_phi(lambda), n).unwrap();
        let i = Complex64::new(0.0, 1.0);
        let c1 = commutator(&a_j, &a_cos).unwrap();
        worst = worst.max(c1.interior_max_abs_diff(&a_sin.scaled(i), c1.untrusted_edge()));
        let c2 = commutator(&a_j, &a_sin).unwrap();
        worst = worst.max(c2.interior_max_abs_diff(&a_cos.scaled(-i), c2.untrusted_edge()));
        let c3 = commutator(&a_cos, &a_sin).unwrap();
        let zero = TruncatedOperator::identity(n).scaled(Complex64::ZERO);
        worst = worst.max(c3.interior_max_abs_diff(&zero, c3.untrusted_edge()));
    }
    crit.finish(worst, 1e-12);
}

#[test]
fn criterion_8_hermiticity_and_pseudo_unitarity() {
    let crit = Criterion::new(8, "Hermitian quantization and pseudo-unitarity defect");
    let mut rng = StdRng::seed_from_u64(0xbead);
    let n = 20;
    let mut worst: f64 = 0.0;
    for dist in [gauss(0.5), gauss(1.5), uniform(0.6), uniform(1.0)] {
        // named real observables
        for f in [
            ObservableSpec::action(),
            ObservableSpec::energy(),
            ObservableSpec::cos_phi(1.3),
            ObservableSpec::sin_phi(0.8),
            ObservableSpec::saw_angle(6),
        ] {
            let op = quantize(&dist, &f, n).unwrap();
            worst = worst.max(op.hermiticity_deviation());
        }
        // randomized real observables f = g_0(J) + sum (g e^{im phi} + cc)
        for _ in 0..5 {
            let g0: Vec<Complex64> = (0..3)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), 0.0))
                .collect();
            let m = rng.random_range(1..4i32);
            let g = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let f = ObservableSpec::from_terms(vec![
                (0, RadialFn::Poly(g0)),
                (m, RadialFn::Const(g)),
                (-m, RadialFn::Const(g.conj())),
            ])
            .unwrap();
            let op = quantize(&dist, &f, n).unwrap();
            worst = worst.max(op.hermiticity_deviation());
        }
        // A_e A_e^dag = varpi_{1,0}^2 on the interior block
        let plus = fourier_harmonic(&dist, 1, n).unwrap();
        let w = dist.overlap_entry(1, 0).unwrap();
        let product = TruncatedOperator::from_fn(n, 2, "A+ A+^dag", |a, b| {
            let mut acc = Complex64::ZERO;
            for k in -(n as i64)..=(n as i64) {
                acc += plus.entry(a, k) * plus.entry(b, k).conj();
            }
            acc
        });
        let expect = TruncatedOperator::identity(n).scaled(Complex64::new(w * w, 0.0));
        worst = worst.max(product.interior_max_abs_diff(&expect, 1));
    }
    crit.finish(worst, 1e-12);
}
