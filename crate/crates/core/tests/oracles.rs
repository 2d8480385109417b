use std::f64::consts::PI;

use cvtele_core::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

const QS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 0.9];

fn betas() -> Vec<Complex64> {
    vec![
        c(0.0, 0.0),
        c(0.5, 0.0),
        c(-0.5, 0.0),
        c(1.0, 0.0),
        c(-1.0, 0.0),
        c(2.0, 0.0),
        c(-2.0, 0.0),
        c(1.0, 1.0),
        c(0.0, -0.5),
    ]
}

#[test]
fn single_photon_closed_form_matches_series_channel() {
    let one = FockVector::basis_state(1, 64).unwrap();
    for q in QS {
        let p = TeleportParams::new(q, 64).unwrap();
        for beta in betas() {
            let (numeric, density) = apply_channel(&p, beta, &one).unwrap();
            let closed = single_photon_output_unnormalized(q, beta, 64).unwrap();
            let dist = numeric.distance(&closed).unwrap();
            assert!(dist <= 1e-9, "q={q} beta={beta}: {dist:e}");
            let analytic = single_photon_density(q, beta).unwrap();
            assert!((density - analytic).abs() <= 1e-12, "q={q} beta={beta}");
        }
    }
}

#[test]
fn coherence_closed_form_matches_numeric_field() {
    let one = FockVector::basis_state(1, 64).unwrap();
    for q in QS {
        let p = TeleportParams::new(q, 64).unwrap();
        for beta in betas() {
            if q == 0.0 && beta == c(0.0, 0.0) {
                continue;
            }
            let out = conditional_output(&p, beta, &one).unwrap();
            let numeric = field_expectation(&out).unwrap();
            let analytic = coherence_analytic(q, beta).unwrap().value;
            assert!((numeric - analytic).norm() <= 1e-8, "q={q} beta={beta}");
            let closed = single_photon_output_normalized(q, beta, 64).unwrap();
            assert!(out.distance(&closed).unwrap() <= 1e-10);
        }
    }
}

#[test]
fn transfer_operator_is_displacement_covariant() {
    let p = TeleportParams::new(0.5, 64).unwrap();
    let t0 = transfer_operator(&p, c(0.0, 0.0)).unwrap();
    for beta in [c(1.0, 0.0), c(-0.4, 1.1)] {
        let d = displacement_closed_form(beta, 64).unwrap();
        let d_inv = displacement_closed_form(-beta, 64).unwrap();
        let rebuilt = d.compose(&t0).unwrap().compose(&d_inv).unwrap();
        let t = transfer_operator(&p, beta).unwrap();
        assert!(t.max_block_deviation(&rebuilt, 64).unwrap() <= 1e-9);
    }
}

#[test]
fn outcome_probability_integrates_to_one() {
    let one = FockVector::basis_state(1, 64).unwrap();
    for q in [0.0, 0.3, 0.5, 0.8] {
        let p = TeleportParams::new(q, 64).unwrap();
        let radius = 8.0 / (1.0 - q * q).sqrt();
        let grid = QuadratureGrid::polar(radius, GridSpec::new(96, 64)).unwrap();
        let total = integrate_density(&p, &one, &grid).unwrap();
        assert!((total - 1.0).abs() <= 1e-3, "q={q}: {total}");
    }
    let p = TeleportParams::new(0.0, 64).unwrap();
    let vac = FockVector::basis_state(0, 64).unwrap();
    let grid = QuadratureGrid::polar(8.0, GridSpec::new(64, 64)).unwrap();
    assert!((integrate_density(&p, &vac, &grid).unwrap() - 1.0).abs() <= 1e-6);
    let p = TeleportParams::new(0.5, 64).unwrap();
    let grid = QuadratureGrid::polar(12.0, GridSpec::new(96, 64)).unwrap();
    assert!((integrate_density(&p, &one, &grid).unwrap() - 1.0).abs() <= 1e-4);
}

#[test]
fn rotated_integration_matches_direct_node_sum() {
    let p = TeleportParams::new(0.4, 32).unwrap();
    let amps: Vec<Complex64> = (0..32)
        .map(|n| match n {
            0 => c(0.6, 0.0),
            1 => c(0.0, 0.48),
            3 => c(-0.64, 0.0),
            _ => c(0.0, 0.0),
        })
        .collect();
    let input = FockVector::from_amplitudes(amps).unwrap();
    assert!((input.norm_sqr() - 1.0).abs() < 1e-15);
    let grid = QuadratureGrid::polar(3.0, GridSpec::new(12, 9)).unwrap();
    let fast = integrate_density(&p, &input, &grid).unwrap();
    let direct: f64 = grid
        .nodes()
        .map(|(beta, w)| w * outcome_density(&p, beta, &input).unwrap())
        .sum();
    assert!((fast - direct).abs() < 1e-13, "{fast} vs {direct}");
}

#[test]
fn quadrature_refinement_stays_within_estimate() {
    let one = FockVector::basis_state(1, 64).unwrap();
    let p = TeleportParams::new(0.5, 64).unwrap();
    let radius = 8.0 / 0.75f64.sqrt();
    let spec = GridSpec::new(24, 16);
    let est = integrate_density_with_error(&p, &one, radius, spec).unwrap();
    let fine = integrate_density(
        &p,
        &one,
        &QuadratureGrid::polar(radius, spec.doubled()).unwrap(),
    )
    .unwrap();
    assert!(
        (fine - est.value).abs() <= est.error_estimate,
        "{fine} {est:?}"
    );
}

#[test]
fn completeness_of_transfer_operators() {
    let p = TeleportParams::new(0.0, 64).unwrap();
    let defect = completeness_defect_block(&p, 8.0, GridSpec::new(64, 64), 8).unwrap();
    assert!(defect <= 1e-6, "{defect:e}");
    let p = TeleportParams::new(0.5, 64).unwrap();
    let radius = 8.0 / 0.75f64.sqrt();
    let defect = completeness_defect_block(&p, radius, GridSpec::new(64, 64), 8).unwrap();
    assert!(defect <= 1e-4, "{defect:e}");
    let coarse = completeness_defect_block(&p, 2.0, GridSpec::new(64, 64), 8).unwrap();
    assert!(coarse > defect);
}

#[test]
fn maximal_entanglement_trend() {
    let p = TeleportParams::new(0.999, 64).unwrap();
    let one = FockVector::basis_state(1, 64).unwrap();
    for k in 0..=8 {
        let beta = Complex64::from_polar(0.25 * k as f64, 0.7 * k as f64);
        let out = conditional_output(&p, beta, &one).unwrap();
        assert!(out.fidelity(&one).unwrap() >= 0.99);
    }
}

#[test]
fn unentangled_output_is_coherent() {
    let p = TeleportParams::new(0.0, 64).unwrap();
    let one = FockVector::basis_state(1, 64).unwrap();
    for beta in [c(0.3, 0.0), c(1.0, -1.0), c(0.0, 2.0), c(-1.9, 0.4)] {
        let out = conditional_output(&p, beta, &one).unwrap();
        let coh = FockVector::coherent(beta, 64).unwrap();
        assert!(out.fidelity(&coh).unwrap() >= 1.0 - 1e-9);
    }
}

#[test]
fn single_photon_density_quadrature() {
    let grid = QuadratureGrid::polar(12.0, GridSpec::new(96, 64)).unwrap();
    let total = grid.integrate(|b| single_photon_density(0.5, b).unwrap());
    assert!((total - 1.0).abs() <= 1e-6);
    let gauss = grid.integrate(|b| (-b.norm_sqr()).exp() / PI);
    assert!((gauss - 1.0).abs() <= 1e-12);
}
