use nalgebra::{Matrix3, Rotation3, Unit, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regge_shell::bench::{benchmark_load, benchmark_material, benchmark_measurement, make_benchmark_mesh, BenchmarkName};
use regge_shell::shell::{LoadSpec, MembraneReduction, ShellConfig, ShellProblem, StrainModel, Term};

fn cylinder(config: ShellConfig, load: LoadSpec) -> ShellProblem {
    let (mesh, chart) = make_benchmark_mesh(BenchmarkName::Cylinder, 1, true).unwrap();
    ShellProblem::new(mesh, chart, benchmark_material(BenchmarkName::Cylinder), config, load).unwrap()
}

fn deflection(problem: &ShellProblem, state: &regge_shell::shell::ShellState) -> f64 {
    let m = benchmark_measurement(BenchmarkName::Cylinder);
    problem.displacement_at(state, m.point).unwrap().dot(&m.direction)
}

#[test]
fn three_field_matches_condensed_solve() {
    for t in [0.1, 1e-3] {
        let problem = cylinder(ShellConfig::new(t, 2), benchmark_load(BenchmarkName::Cylinder, t));
        let direct = problem.solve(problem.zero_state()).unwrap();
        let mixed = problem.solve_three_field().unwrap();
        let (a, b) = (deflection(&problem, &direct.state), deflection(&problem, &mixed.state));
        assert!((a - b).abs() <= 1e-8 * a.abs(), "t={t}: {a:e} vs {b:e}");
        assert!(mixed.state.regge_fields.is_some());
    }
}

#[test]
fn green_agrees_with_linear_for_small_loads() {
    let t: f64 = 0.1;
    let small = LoadSpec::surface(move |p, _, nu| nu * (1e-3 * t.powi(3) * (2.0 * p[0]).cos()));
    let mut config = ShellConfig::new(t, 2);
    let linear = cylinder(config, small.clone());
    config.model = StrainModel::FullGreen;
    let green = cylinder(config, small);
    let a = deflection(&linear, &linear.solve(linear.zero_state()).unwrap().state);
    let report = green.solve(green.zero_state()).unwrap();
    let b = deflection(&green, &report.state);
    assert!((a - b).abs() <= 1e-6 * a.abs(), "{a:e} vs {b:e}");
    assert!(report.iterations >= 2);
}

#[test]
fn unloaded_shell_stays_put() {
    let problem = cylinder(ShellConfig::new(0.01, 2), LoadSpec::none());
    let report = problem.solve(problem.zero_state()).unwrap();
    assert_eq!(report.iterations, 1);
    assert!(report.state.dofs.iter().all(|v| v.abs() < 1e-300));
}

#[test]
fn energy_terms_scale_with_thickness() {
    let mut r = ChaCha8Rng::seed_from_u64(2);
    let thin = cylinder(ShellConfig::new(0.01, 2), LoadSpec::none());
    let thick = cylinder(ShellConfig::new(0.02, 2), LoadSpec::none());
    let mut state = thin.zero_state();
    state.dofs.iter_mut().for_each(|v| *v = r.gen_range(-1e-3..1e-3));
    for (term, power) in [(Term::Membrane, 1), (Term::Bending, 3), (Term::Shear, 1)] {
        let ratio = thick.energy(&state, term).unwrap() / thin.energy(&state, term).unwrap();
        assert!((ratio - 2f64.powi(power)).abs() < 1e-12, "{term:?}: {ratio}");
    }
}

#[test]
fn green_membrane_energy_is_frame_invariant() {
    let mut r = ChaCha8Rng::seed_from_u64(3);
    for membrane in [MembraneReduction::Regge, MembraneReduction::None] {
        let mut config = ShellConfig::new(0.01, 2);
        config.model = StrainModel::FullGreen;
        config.membrane = membrane;
        let problem = cylinder(config, LoadSpec::none());
        let q = Rotation3::from_axis_angle(&Unit::new_normalize(Vector3::new(0.2, -1.0, 0.4)), 1.1).into_inner();
        let mut state = problem.zero_state();
        state.dofs.iter_mut().for_each(|v| *v = r.gen_range(-0.05..0.05));
        let mut turned = state.clone();
        for n in 0..problem.nodes().n_nodes() {
            let x = problem.chart().position(problem.nodes().position(n));
            let u = (q - Matrix3::identity()) * x + q * state.displacement(n);
            turned.dofs[5 * n..5 * n + 3].copy_from_slice(u.as_slice());
        }
        let a = problem.energy(&state, Term::Membrane).unwrap();
        let b = problem.energy(&turned, Term::Membrane).unwrap();
        assert!((a - b).abs() <= 1e-10 * a, "{membrane:?}: {a:e} vs {b:e}");
    }
}

#[test]
fn every_benchmark_solves() {
    for name in BenchmarkName::ALL {
        let (mesh, chart) = make_benchmark_mesh(name, 0, true).unwrap();
        let problem =
            ShellProblem::new(mesh, chart, benchmark_material(name), ShellConfig::new(0.01, 2), benchmark_load(name, 0.01))
                .unwrap();
        let report = problem.solve(problem.zero_state()).unwrap();
        assert!(report.state.dofs.iter().all(|v| v.is_finite()), "{name}");
        assert!(report.state.dofs.iter().any(|v| *v != 0.0), "{name}");
    }
}
