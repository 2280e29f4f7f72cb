use bandforge::fixtures;
use bandforge::gluing::{
    bloch_wigner, build_equations, max_residual, newton_solve, volume, NewtonOptions, ShapeVector,
};
use bandforge::tri::Triangulation;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn both() -> [(Triangulation, f64); 2] {
    [
        (fixtures::appendix_a().unwrap(), fixtures::APPENDIX_A_VOLUME),
        (fixtures::appendix_b().unwrap(), fixtures::APPENDIX_B_VOLUME),
    ]
}

fn perturbed(shapes: &[Complex64], eps: f64, seed: u64) -> ShapeVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ShapeVector(
        shapes
            .iter()
            .map(|z| {
                let theta = rng.gen_range(0.0..std::f64::consts::TAU);
                z + Complex64::from_polar(eps, theta)
            })
            .collect(),
    )
}

#[test]
fn volume_at_hints_matches_headers() {
    for (t, expected) in both() {
        let v = volume(&ShapeVector(t.shapes()));
        assert!((v - expected).abs() < 5e-7, "{}: {v}", t.name);
    }
}

#[test]
fn newton_recovers_hints_from_noise() {
    for (t, _) in both() {
        let sys = build_equations(&t).unwrap();
        let hints = t.shapes();
        for seed in 0..5 {
            let start = perturbed(&hints, 1e-3, seed);
            let out = newton_solve(&sys, &start, NewtonOptions::default()).unwrap();
            assert!(out.iterations <= 10, "{} took {}", t.name, out.iterations);
            for (z, h) in out.shapes.0.iter().zip(&hints) {
                assert!((z.re - h.re).abs() < 1e-9 && (z.im - h.im).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn newton_converges_quadratically() {
    let t = fixtures::appendix_a().unwrap();
    let sys = build_equations(&t).unwrap();
    let start = perturbed(&t.shapes(), 1e-3, 42);
    let out = newton_solve(&sys, &start, NewtonOptions::default()).unwrap();
    // Once in the basin, each residual is at most a constant times the
    // square of the previous one.
    let h = &out.history;
    for w in h.windows(2) {
        if w[0] < 1e-2 && w[1] > 1e-13 {
            assert!(w[1] < 50.0 * w[0] * w[0], "{h:?}");
        }
    }
}

#[test]
fn solution_is_stable_under_resolving() {
    for (t, _) in both() {
        let sys = build_equations(&t).unwrap();
        let out = newton_solve(&sys, &ShapeVector(t.shapes()), NewtonOptions::default()).unwrap();
        assert!(max_residual(&sys, &out.shapes) < 1e-12);
        let again = newton_solve(&sys, &out.shapes, NewtonOptions::default()).unwrap();
        assert_eq!(again.iterations, 0);
    }
}

#[test]
fn start_at_i_reports_outcome() {
    // Not every start converges to the geometric solution; this only checks
    // that the solver returns cleanly either way.
    let t = fixtures::appendix_a().unwrap();
    let sys = build_equations(&t).unwrap();
    let start = ShapeVector(vec![Complex64::new(0.0, 1.0); t.tet_count()]);
    if let Ok(out) = newton_solve(&sys, &start, NewtonOptions::default()) {
        assert!(out.residual < 1e-12);
        assert!(out.shapes.is_geometric());
    }
}

/// Lobachevsky function by composite Simpson quadrature of
/// `-log(2 sin t) = -log(2t) - log(sin t / t)`, the first part integrated
/// in closed form.
fn lobachevsky(theta: f64) -> f64 {
    let smooth = |t: f64| if t == 0.0 { 0.0 } else { (t.sin() / t).ln() };
    let n = 20_000;
    let h = theta / n as f64;
    let mut s = smooth(0.0) + smooth(theta);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        s += w * smooth(k as f64 * h);
    }
    let smooth_integral = s * h / 3.0;
    let log_part = theta * ((2.0 * theta).ln() - 1.0);
    -(log_part + smooth_integral)
}

#[test]
fn regular_ideal_tetrahedron_volume() {
    let z = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_3);
    let oracle = 3.0 * lobachevsky(std::f64::consts::FRAC_PI_3);
    assert!((oracle - 1.0149416064096536).abs() < 1e-12);
    assert!((bloch_wigner(z) - oracle).abs() < 1e-13);
}

#[test]
fn bloch_wigner_matches_lobachevsky_on_triangles() {
    // D(z) is the sum of the Lobachevsky function over the three angles.
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..50 {
        let a = rng.gen_range(0.05..2.5);
        let b = rng.gen_range(0.05..(std::f64::consts::PI - a - 0.05));
        let c = std::f64::consts::PI - a - b;
        let z = Complex64::from_polar(b.sin() / c.sin(), a);
        let oracle = lobachevsky(a) + lobachevsky(b) + lobachevsky(c);
        assert!((bloch_wigner(z) - oracle).abs() < 1e-10, "{z}");
    }
}
