use mixedsdp::codes::{max_code, ProblemSpec};
use mixedsdp::sdp::{code_assignment, SdpData};
use mixedsdp::solver::{solve_spec, Status};
use mixedsdp::{build_model, solve, ExactProblem, SolverOptions};

fn data(n2: usize, n3: usize, d: usize, k: u8) -> (ExactProblem, SdpData<f64>) {
    let p: ExactProblem = build_model(&ProblemSpec::new(n2, n3, d, k).unwrap()).unwrap();
    let data = p.to_data();
    (p, data)
}

#[test]
fn weak_duality_and_feasibility() {
    for (n2, n3, d) in [(2, 2, 2), (3, 2, 3), (1, 3, 2), (4, 1, 3)] {
        let (_, data) = data(n2, n3, d, 3);
        let s = solve(&data, &SolverOptions::default()).unwrap();
        assert_eq!(s.status, Status::Optimal);
        assert!(s.objective <= s.dual_objective + 1e-7 * (1.0 + s.dual_objective.abs()));
        assert!(s.min_eigenvalue >= -1e-6, "{}", s.min_eigenvalue);
        assert!(s.y.iter().all(|&v| v >= -1e-7));
    }
}

#[test]
fn optimum_is_invariant_under_block_scaling() {
    let (_, base) = data(3, 2, 3, 3);
    let reference = solve(&base, &SolverOptions::default()).unwrap().dual_objective;
    let mut scaled = base.clone();
    for b in 0..scaled.blocks.len() {
        scaled.scale_block(b, 10f64.powi(b as i32 % 5 - 2));
    }
    let s = solve(&scaled, &SolverOptions::default()).unwrap();
    assert!((s.dual_objective - reference).abs() <= 1e-6 * reference, "{} vs {reference}", s.dual_objective);
}

#[test]
fn removing_a_variable_cannot_raise_the_optimum() {
    let (p, base) = data(2, 3, 3, 3);
    let full = solve(&base, &SolverOptions::default()).unwrap().dual_objective;
    let singleton = p.variable_of_orbit(&mixedsdp::OrbitId::singleton(2, 3)).unwrap();
    for v in (0..base.num_vars).filter(|&v| v != singleton).step_by(3) {
        let s = solve(&base.without_variable(v), &SolverOptions::default()).unwrap();
        assert!(s.dual_objective <= full + 1e-6 * full, "variable {v}: {} > {full}", s.dual_objective);
    }
}

#[test]
fn level_three_is_tighter_than_level_two() {
    for (n2, n3, d) in [(2, 2, 2), (3, 2, 3), (2, 3, 3), (5, 1, 3), (1, 4, 3)] {
        let k3 = solve_spec(&ProblemSpec::new(n2, n3, d, 3).unwrap(), &SolverOptions::default()).unwrap();
        let k2 = solve_spec(&ProblemSpec::new(n2, n3, d, 2).unwrap(), &SolverOptions::default()).unwrap();
        assert!(k3.dual_objective <= k2.dual_objective + 1e-6 * k2.dual_objective, "({n2},{n3},{d})");
    }
}

#[test]
fn optimal_codes_are_feasible_points() {
    for (n2, n3, d) in [(2, 2, 3), (3, 1, 2), (1, 3, 2)] {
        let (p, data) = data(n2, n3, d, 3);
        let code = max_code(&p.spec, 1000).unwrap();
        let y = code_assignment(&p, &code).unwrap();
        assert!(mixedsdp::solver::min_block_eigenvalue(&data, &y) >= -1e-9);
        assert!((p.objective_value(&y) - code.len() as f64).abs() < 1e-9);
        let s = solve(&data, &SolverOptions::default()).unwrap();
        assert!(s.dual_objective >= code.len() as f64 - 1e-6);
    }
}

#[test]
fn single_precision_agrees_roughly() {
    let (p, data64) = data(2, 2, 3, 3);
    let data32: SdpData<f32> = p.to_data();
    let a = solve(&data64, &SolverOptions::default()).unwrap();
    let b = solve(&data32, &SolverOptions::with_tol(1e-4)).unwrap();
    assert!((a.dual_objective - b.dual_objective).abs() < 1e-2 * a.dual_objective);
}
