// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use num_complex::Complex64;
use quivmono::additive::{residues_from_arrows, AdditiveArrow, ConnectionSystemRep};
use quivmono::fuchsian::{
    compare_with_algebraic, hilbert21_demo, monodromy_along, total_monodromy_check, ComparisonMode,
    FuchsianSystem, Loop, Pole, SystemModel,
};
use quivmono::matfun::exp_2pii;
use quivmono::ode::IntegratorConfig;
use quivmono::quiver::{ArrowDesc, ComponentDesc, MarkedPointDesc, RiemannSurfaceQuiver, WeightData};
use quivmono::random::random_matrix;
use quivmono::scalar::c;
use quivmono::{Error, Matrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type M = Matrix<f64>;

fn pole(x: f64, y: f64, residue: M) -> Pole<f64> {
    Pole {
        position: c(x, y),
        residue,
    }
}

fn cfg() -> IntegratorConfig<f64> {
    IntegratorConfig::default()
}

fn random_three_pole(rng: &mut ChaCha8Rng) -> FuchsianSystem<f64> {
    let r1: M = random_matrix(rng, 2, 2, 0.6);
    let r2: M = random_matrix(rng, 2, 2, 0.6);
    let r3 = -&(&r1 + &r2);
    let mut positions: Vec<Complex64> = Vec::new();
    while positions.len() < 3 {
        let z = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        if positions.iter().all(|p| (p - z).norm() > 0.5) {
            positions.push(z);
        }
    }
    let poles = positions
        .into_iter()
        .zip([r1, r2, r3])
        .map(|(position, residue)| Pole { position, residue })
        .collect();
    FuchsianSystem::new(2, poles, SystemModel::Sphere).unwrap()
}

#[test]
fn two_poles_with_opposite_residues_compose_to_identity() {
    let r = M::from_real_rows(&[&[0.2, 0.1], &[-0.3, 0.05]]);
    let sys = FuchsianSystem::new(2, vec![pole(0.0, 0.0, r.clone()), pole(1.0, 0.0, -&r)], SystemModel::Sphere).unwrap();
    let total = total_monodromy_check(&sys, c(0.5, -1.0), None, &cfg(), 1e-6).unwrap();
    assert!(total.passed, "defect {}", total.defect);
}

#[test]
fn one_pole_sphere_is_trivial() {
    let sys = FuchsianSystem::new(2, vec![pole(0.3, 0.2, M::zeros(2, 2))], SystemModel::Sphere).unwrap();
    let total = total_monodromy_check(&sys, c(0.0, -1.0), None, &cfg(), 1e-12).unwrap();
    assert!(total.product.dist(&M::identity(2)) < 1e-12);
}

#[test]
fn random_three_pole_products_and_determinants() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..5 {
        let sys = random_three_pole(&mut rng);
        let total = total_monodromy_check(&sys, c(0.1, -4.0), None, &cfg(), 1e-6).unwrap();
        assert!(total.passed, "defect {}", total.defect);
        for (m, p) in total.monodromies.iter().zip(sys.poles()) {
            let expected = (c::<f64>(0.0, -2.0 * std::f64::consts::PI) * p.residue.trace()).exp();
            assert!((m.det() - expected).norm() < 1e-6);
        }
    }
}

#[test]
fn product_order_matters() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let sys = random_three_pole(&mut rng);
    let base = c(0.1, -4.0);
    let good = total_monodromy_check(&sys, base, None, &cfg(), 1e-6).unwrap();
    let rev: Vec<usize> = good.order.iter().rev().copied().collect();
    let bad = total_monodromy_check(&sys, base, Some(&rev), &cfg(), 1e-6).unwrap();
    assert!(bad.defect > 1e-3);
    assert!(matches!(
        total_monodromy_check(&sys, base, Some(&[0, 0, 1]), &cfg(), 1e-6),
        Err(Error::InvalidArgument(_))
    ));
}

#[test]
fn determinant_of_loop_around_two_poles() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let r1: M = random_matrix(&mut rng, 2, 2, 0.5);
    let r2: M = random_matrix(&mut rng, 2, 2, 0.5);
    let r3 = -&(&r1 + &r2);
    let sys = FuchsianSystem::new(
        2,
        vec![pole(-0.5, 0.0, r1.clone()), pole(0.5, 0.0, r2.clone()), pole(5.0, 0.0, r3)],
        SystemModel::Sphere,
    )
    .unwrap();
    let lp = Loop::circle(c(0.0, 0.0), 1.5, 0.0).unwrap();
    let m = monodromy_along(&sys, &lp, &cfg(), None).unwrap();
    let expected = (c::<f64>(0.0, -2.0 * std::f64::consts::PI) * (r1.trace() + r2.trace())).exp();
    assert!((m.det() - expected).norm() < 1e-6);
    assert!(matches!(compare_with_algebraic(&sys, &lp, &cfg(), 1e-6), Err(Error::MultiplePolesEnclosed { count: 2 })));
}

#[test]
fn reversal_inverts_and_homotopy_preserves() {
    let r = M::from_real_rows(&[&[0.25, 1.0], &[0.0, -0.1]]);
    let sys = FuchsianSystem::new(2, vec![pole(0.0, 0.0, r.clone()), pole(2.0, 0.0, -&r)], SystemModel::Sphere).unwrap();
    let small = Loop::circle(c(0.0, 0.0), 0.5, 0.0).unwrap();
    let large = Loop::circle(c(0.0, 0.0), 0.9, 0.0).unwrap();
    let m = monodromy_along(&sys, &small, &cfg(), None).unwrap();
    let back = monodromy_along(&sys, &small.reversed(), &cfg(), None).unwrap();
    assert!((&back * &m).dist(&M::identity(2)) < 1e-6);
    // same base ray, so the two circles differ by a homotopy plus a common path conjugation;
    // compare through the conjugacy invariants
    let m2 = monodromy_along(&sys, &large, &cfg(), None).unwrap();
    assert!((m.trace() - m2.trace()).norm() < 1e-6);
    assert!((m.det() - m2.det()).norm() < 1e-6);
}

#[test]
fn homotopic_loops_with_common_base_agree_exactly() {
    let r = M::from_real_rows(&[&[0.25, 1.0], &[0.3, -0.1]]);
    let sys = FuchsianSystem::new(2, vec![pole(0.0, 0.0, r.clone()), pole(3.0, 0.0, -&r)], SystemModel::Sphere).unwrap();
    let base = c(-0.9, 0.0);
    let circle = Loop::circle(c(0.0, 0.0), 0.9, std::f64::consts::PI).unwrap();
    let square = Loop::polyline(&[base, c(-0.9, -0.9), c(0.9, -0.9), c(0.9, 0.9), c(-0.9, 0.9), base]).unwrap();
    let m1 = monodromy_along(&sys, &circle, &cfg(), None).unwrap();
    let m2 = monodromy_along(&sys, &square, &cfg(), None).unwrap();
    assert!(m1.dist(&m2) < 1e-6);
}

#[test]
fn disk_model_direct_comparison() {
    let unit = Loop::circle(c(0.0, 0.0), 1.0, 0.0).unwrap();
    for r in [M::scalar(1, c(1.0 / 3.0, 0.0)), M::jordan_block(2, c(0.0, 0.0))] {
        let n = r.rows();
        let sys = FuchsianSystem::new(n, vec![pole(0.0, 0.0, r)], SystemModel::Disk).unwrap();
        let cmp = compare_with_algebraic(&sys, &unit, &cfg(), 1e-8).unwrap();
        assert_eq!(cmp.mode, ComparisonMode::Direct);
        assert!(cmp.passed, "defect {}", cmp.defect);
    }
}

#[test]
fn clockwise_loop_gives_inverse_monodromy() {
    let r = M::from_real_rows(&[&[0.2, 0.5], &[0.0, 0.7]]);
    let sys = FuchsianSystem::new(2, vec![pole(0.0, 0.0, r.clone())], SystemModel::Disk).unwrap();
    let lp = Loop::circle(c(0.0, 0.0), 1.0, 0.0).unwrap().reversed();
    let cmp = compare_with_algebraic(&sys, &lp, &cfg(), 1e-8).unwrap();
    assert_eq!(cmp.winding, -1);
    assert!(cmp.algebraic.dist(&exp_2pii(&r)) < 1e-12);
    assert!(cmp.passed);
}

#[test]
fn two_pole_comparison_uses_characteristic_polynomial() {
    let r0 = M::from_rows(&[vec![c(0.2, 0.1), c(0.4, 0.0)], vec![c(0.0, -0.3), c(-0.15, 0.0)]]);
    let sys = FuchsianSystem::new(2, vec![pole(0.0, 0.0, r0.clone()), pole(2.0, 1.0, -&r0)], SystemModel::Sphere).unwrap();
    let lp = Loop::circle(c(0.0, 0.0), 0.8, 0.3).unwrap();
    let cmp = compare_with_algebraic(&sys, &lp, &cfg(), 1e-6).unwrap();
    assert_eq!(cmp.mode, ComparisonMode::CharacteristicPolynomial);
    assert!(cmp.passed, "defect {}", cmp.defect);
    let empty = Loop::circle(c(10.0, 0.0), 0.5, 0.0).unwrap();
    assert!(matches!(compare_with_algebraic(&sys, &empty, &cfg(), 1e-6), Err(Error::InvalidArgument(_))));
}

fn d4_star() -> RiemannSurfaceQuiver<f64> {
    let mut comps = vec![ComponentDesc::sphere("c")];
    let mut points = Vec::new();
    let mut arrows = Vec::new();
    for k in 1..=3 {
        comps.push(ComponentDesc::sphere(format!("arm{k}")));
        points.push(MarkedPointDesc::new(format!("p{k}"), "c", c(k as f64 - 2.0, 0.5 * (k as f64 - 2.0).powi(2))));
        points.push(MarkedPointDesc::new(format!("x{k}"), format!("arm{k}"), c(0.0, 0.0)));
        arrows.push(ArrowDesc::new(format!("a{k}"), format!("x{k}"), format!("p{k}")));
    }
    RiemannSurfaceQuiver::new(comps, points, arrows).unwrap()
}

fn d4_rep(gamma: &RiemannSurfaceQuiver<f64>, alphas: [f64; 3], twist: f64) -> ConnectionSystemRep<f64> {
    let dims: BTreeMap<String, usize> = [("c", 2), ("arm1", 1), ("arm2", 1), ("arm3", 1)]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
    let arrows = alphas
        .iter()
        .enumerate()
        .map(|(k, &a)| {
            (
                format!("a{}", k + 1),
                AdditiveArrow {
                    e: M::from_real_rows(&[&[1.0], &[0.0]]),
                    nabla: M::from_real_rows(&[&[twist, a]]),
                },
            )
        })
        .collect();
    residues_from_arrows(gamma, &WeightData::zero(gamma), dims, arrows).unwrap()
}

#[test]
fn hilbert21_on_d4_star() {
    let gamma = d4_star();
    let rep = d4_rep(&gamma, [1.0, 2.0, -3.0], 0.0);
    let report = hilbert21_demo(&gamma, &rep, None, None, &cfg(), 1e-6).unwrap();
    assert!(report.passed, "{report:?}");
    assert_eq!(report.orders, vec![2, 2, 2]);
    assert!(report.spherical);
    assert!(report.monodromies.iter().any(|m| m.dist(&M::identity(2)) > 1.0));

    let zero = ConnectionSystemRep::zero(&gamma, rep.dims.clone()).unwrap();
    let report = hilbert21_demo(&gamma, &zero, Some(&[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)]), None, &cfg(), 1e-12).unwrap();
    assert!(report.monodromies.iter().all(|m| m.dist(&M::identity(2)) < 1e-12));
}

#[test]
fn hilbert21_rejects_nonzero_residue_sum() {
    let gamma = d4_star();
    let rep = d4_rep(&gamma, [1.0, 2.0, -2.0], 0.0);
    assert!(matches!(
        hilbert21_demo(&gamma, &rep, None, None, &cfg(), 1e-6),
        Err(Error::ResidueSumNonZero { .. })
    ));
}

#[test]
fn hilbert21_rejects_order_below_nilpotency_index() {
    let gamma = d4_star();
    let rep = d4_rep(&gamma, [1.0, 2.0, -3.0], 0.0);
    assert!(matches!(
        hilbert21_demo(&gamma, &rep, None, Some(&[1, 2, 2]), &cfg(), 1e-6),
        Err(Error::NonNilpotentResidue { .. })
    ));
}
