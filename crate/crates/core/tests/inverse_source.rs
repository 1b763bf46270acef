use std::f64::consts::PI;

use fraccauchy::bernstein::BernsteinFunction;
use fraccauchy::inverse::{
    chi_at, chi_kernel, chi_subordination, forward_observation, recover_rho1, ObservationTrace, Regularization,
};
use fraccauchy::principles::random_profile;
use fraccauchy::solver::{solve, ProblemSpec, Source, TimeFunction, TimeGrid};
use fraccauchy::spatial::{build_operator, eigensystem, Domain1D, EigenSystem, OperatorMode};
use fraccauchy::special::mittag_leffler;
use fraccauchy::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn system(n: usize) -> EigenSystem {
    let d = Domain1D::new(-1.0, 1.0, n).unwrap();
    let op = build_operator(d, BernsteinFunction::fractional(1.0).unwrap(), &vec![0.0; n], OperatorMode::RestrictedJumpKernel).unwrap();
    eigensystem(&op, n).unwrap()
}

fn parabola(es: &EigenSystem) -> Vec<f64> {
    es.domain.points().iter().map(|x| 1.0 - x * x).collect()
}

fn sin2(t: f64) -> f64 {
    (PI * t).sin().powi(2)
}

#[test]
fn single_mode_kernel() {
    let es = system(60);
    let phi1 = es.mode(0);
    let x0 = 0.25;
    let p = es.modes_at(x0)[0];
    for t in [0.01f64, 0.3, 1.0] {
        let want = t.powf(-0.5) * mittag_leffler(0.5, 0.5, -es.lambdas[0] * t.sqrt()).unwrap() * p;
        let got = chi_at(&es, 0.5, &phi1, x0, t).unwrap();
        assert!((got - want).abs() < 1e-10 * want.abs());
    }
}

#[test]
fn spectral_and_subordination_forms_agree() {
    let es = system(80);
    let rho2 = parabola(&es);
    for alpha in [0.5, 0.7] {
        for t in [0.1, 0.5, 1.0] {
            let a = chi_at(&es, alpha, &rho2, -0.4, t).unwrap();
            let b = chi_subordination(&es, alpha, &rho2, -0.4, t).unwrap();
            assert!((a - b).abs() < 1e-4 * a, "α={alpha} t={t}: {a} vs {b}");
        }
    }
}

#[test]
fn kernel_positive_and_singular_at_zero() {
    let es = system(80);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let rho2 = random_profile(&es.domain, true, &mut rng);
    let k = chi_kernel(&es, 0.5, &rho2, 0.6, 1.0, 128).unwrap();
    assert!(k.values.iter().all(|v| *v > 0.0));
    assert_eq!(k.singularity_exponent, -0.5);
    assert!(matches!(chi_at(&es, 0.5, &rho2, 0.6, 0.0), Err(Error::Domain(_))));
    assert!(matches!(chi_subordination(&es, 0.5, &rho2, 0.6, 0.0), Err(Error::Domain(_))));
}

#[test]
fn per_mode_integral_closed_form() {
    let es = system(60);
    let (alpha, t_end, x0) = (0.5, 1.0f64, 0.1);
    for n in [0, 3, 10] {
        let k = chi_kernel(&es, alpha, &es.mode(n), x0, t_end, 64).unwrap();
        let lam = es.lambdas[n];
        let want = (1.0 - mittag_leffler(alpha, 1.0, -lam * t_end.powf(alpha)).unwrap()) / lam * es.modes_at(x0)[n];
        assert!((k.integral() - want).abs() < 1e-6 * want.abs().max(1e-3), "mode {n}");
    }
}

#[test]
fn zero_profile_gives_zero_trace() {
    let es = system(40);
    let k = chi_kernel(&es, 0.5, &parabola(&es), 0.0, 1.0, 32).unwrap();
    let tr = forward_observation(&k, &[0.0; 33]).unwrap();
    assert!(tr.values.iter().all(|v| *v == 0.0));
}

#[test]
fn narrow_pulse_traces_shifted_kernel() {
    let es = system(60);
    let m = 1000;
    let k = chi_kernel(&es, 0.5, &parabola(&es), 0.2, 1.0, m).unwrap();
    // unit-mass triangle of half-width 2Δ centered at s₀
    let (s0, w) = (0.2, 2.0 * k.dt);
    let rho1: Vec<f64> = (0..=m).map(|j| ((1.0 - ((j as f64 * k.dt - s0) / w).abs()).max(0.0)) / w).collect();
    let tr = forward_observation(&k, &rho1).unwrap();
    for t in [0.4, 0.6, 1.0] {
        let j = (t / k.dt).round() as usize;
        let want = chi_at(&es, 0.5, &parabola(&es), 0.2, t - s0).unwrap();
        assert!((tr.values[j] - want).abs() < 1e-3 * want, "t={t}");
    }
}

#[test]
fn trace_matches_full_solve() {
    let es = system(60);
    let rho2 = parabola(&es);
    let x0 = es.domain.points()[40];
    let steps = 64;
    let rho1 = TimeFunction::SineSquared { period: 1.0 };
    let spec = ProblemSpec {
        domain: es.domain,
        psi: es.psi,
        potential: vec![0.0; 60],
        phi0: vec![0.0; 60],
        source: Source::Separable { rho1: rho1.clone(), rho2: rho2.clone() },
        alpha: 0.5,
        horizon: 1.0,
    };
    let field = solve(&spec, &es, &TimeGrid::uniform(1.0, steps).with_refine(1)).unwrap();
    let k = chi_kernel(&es, 0.5, &rho2, x0, 1.0, steps).unwrap();
    let samples: Vec<f64> = (0..=steps).map(|j| rho1.eval(j as f64 / steps as f64)).collect();
    let tr = forward_observation(&k, &samples).unwrap();
    let sup = tr.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for (j, v) in tr.values.iter().enumerate() {
        assert!((v - field.values[j][40]).abs() < 1e-6 * sup, "step {j}");
    }
}

#[test]
fn noise_free_round_trip() {
    let es = system(100);
    let m = 256;
    let k = chi_kernel(&es, 0.5, &parabola(&es), 0.3, 1.0, m).unwrap();
    let truths: [fn(f64) -> f64; 3] = [sin2, |t| 1.0 + t, |t| (-3.0 * t).exp() * (5.0 * t).cos()];
    for truth in truths {
        let rho1: Vec<f64> = (0..=m).map(|j| truth(j as f64 / m as f64)).collect();
        let r = recover_rho1(&forward_observation(&k, &rho1).unwrap(), &k, Regularization::none()).unwrap();
        assert!(r.relative_error(truth) < 0.05 && r.residual < 1e-12);
    }
}

#[test]
fn zero_observation_recovers_zero() {
    let es = system(60);
    let k = chi_kernel(&es, 0.5, &parabola(&es), -0.3, 1.0, 256).unwrap();
    let obs = ObservationTrace { x0: -0.3, times: (0..=256).map(|j| j as f64 / 256.0).collect(), values: vec![0.0; 257], noise: None };
    let r = recover_rho1(&obs, &k, Regularization::none()).unwrap();
    let norm = (r.values.iter().map(|v| v * v).sum::<f64>() * k.dt).sqrt();
    assert!(norm <= 1e-8);
}

#[test]
fn noisy_round_trip_with_lcurve() {
    let es = system(100);
    let m = 256;
    let k = chi_kernel(&es, 0.5, &parabola(&es), 0.3, 1.0, m).unwrap();
    let rho1: Vec<f64> = (0..=m).map(|j| sin2(j as f64 / m as f64)).collect();
    let obs = forward_observation(&k, &rho1).unwrap().with_noise(0.01, 17).unwrap();
    assert_eq!(obs.noise.as_ref().unwrap().relative_level, 0.01);
    let r = recover_rho1(&obs, &k, Regularization::tikhonov(None)).unwrap();
    assert!(r.relative_error(sin2) <= 0.15, "{}", r.relative_error(sin2));
    assert!(!r.path.is_empty() && r.strength > 0.0);
    let plain = recover_rho1(&obs, &k, Regularization::none()).unwrap();
    assert!(r.relative_error(sin2) < plain.relative_error(sin2));
}

#[test]
fn kernel_blind_to_observation_point_is_ill_posed() {
    let es = system(61);
    // odd second mode vanishes at the center
    let k = chi_kernel(&es, 0.5, &es.mode(1), 0.0, 1.0, 32).unwrap();
    let obs = forward_observation(&k, &[1.0; 33]).unwrap();
    assert!(matches!(recover_rho1(&obs, &k, Regularization::none()), Err(Error::IllPosed(_))));
}

#[test]
fn traces_continuous_in_observation_point() {
    let mut prev = f64::INFINITY;
    for n in [25, 50, 100] {
        let es = system(n);
        let pts = es.domain.points();
        let rho2 = parabola(&es);
        let i = n / 3;
        let l1 = |x0: f64| {
            let k = chi_kernel(&es, 0.5, &rho2, x0, 1.0, 64).unwrap();
            forward_observation(&k, &vec![1.0; 65]).unwrap().values
        };
        let (a, b) = (l1(pts[i]), l1(pts[i + 1]));
        let d: f64 = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).sum::<f64>() / 64.0;
        assert!(d < prev, "n={n}: {d}");
        prev = d;
    }
}

#[test]
fn trace_csv_round_trip_and_grid_checks() {
    let es = system(40);
    let k = chi_kernel(&es, 0.5, &parabola(&es), 0.1, 1.0, 16).unwrap();
    let tr = forward_observation(&k, &[1.0; 17]).unwrap();
    let back = ObservationTrace::from_csv(&tr.to_csv(), 0.1).unwrap();
    assert_eq!(back.values.len(), 17);
    assert!(back.values.iter().zip(&tr.values).all(|(a, b)| (a - b).abs() <= 1e-15 * b.abs().max(1e-300)));
    let k2 = chi_kernel(&es, 0.5, &parabola(&es), 0.1, 1.0, 8).unwrap();
    assert!(matches!(recover_rho1(&tr, &k2, Regularization::none()), Err(Error::Parameter(_))));
    assert!(forward_observation(&k, &[1.0; 3]).is_err());
}
