// SPDX-License-Identifier: Apache-2.0

mod common;

use common::{c, one_arrow_quiver, random_weights, rel_dist, rng};
use proptest::prelude::*;
use quivmono::dynkin::{
    check_lambda1_relations, check_nilpotency, check_pi_relations, exp_functor_on_rep, log_functor_on_rep, sample_pi_rep,
    DoubleQuiverRep, DynkinType,
};
use quivmono::fuchsian::{monodromy_along, Loop, Pole, SystemModel};
use quivmono::ode::IntegratorConfig;
use quivmono::random::random_connection_system;
use quivmono::scalar::two_pi_i;
use quivmono::transform::{forward_transform, TransformConfig};
use quivmono::{CMatrix, DoubleRep, Fuchsian, TSet};
use rand::Rng;

fn max_rep_diff(a: &DoubleRep, b: &DoubleRep) -> f64 {
    a.x.iter()
        .zip(&b.x)
        .chain(a.x_star.iter().zip(&b.x_star))
        .map(|(p, q)| rel_dist(p, q))
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn point_monodromies_match_disk_integration(seed in any::<u64>()) {
        // a residue from an exact one-arrow solution, integrated around the unit circle
        let mut r = rng(seed);
        let gamma = one_arrow_quiver();
        let w = random_weights(&mut r, &gamma, 0.3);
        let dims = [("X".to_string(), r.gen_range(1..=2)), ("Y".to_string(), r.gen_range(1..=2))].into();
        let t = TSet::HalfOpenStrip;
        let rep = random_connection_system(&mut r, &gamma, &w, dims, &t).unwrap();
        let mrep = forward_transform(&gamma, &w, &rep, &t, &TransformConfig::default()).unwrap();
        let unit = Loop::circle(c(0.0, 0.0), 1.0, 0.0).unwrap();
        let cfg = IntegratorConfig::default();
        for (p, residue) in &rep.residues {
            let sys = Fuchsian::new(residue.rows(), vec![Pole { position: c(0.0, 0.0), residue: residue.clone() }], SystemModel::Disk).unwrap();
            let numeric = monodromy_along(&sys, &unit, &cfg, None).unwrap();
            prop_assert!(numeric.dist(&mrep.point_monodromies[p]) <= 1e-6 * (1.0 + numeric.norm_fro()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exp_functor_round_trips_on_sampled_reps(seed in any::<u64>(), which in 0usize..4, d in 1usize..=3) {
        let ty = [DynkinType::A(2), DynkinType::A(3), DynkinType::D(4), DynkinType::E(6)][which];
        let quiver = ty.quiver();
        let mut r = rng(seed);
        let dims: Vec<usize> = (0..ty.rank()).map(|_| r.gen_range(0..=d)).collect();
        let rep: DoubleRep = sample_pi_rep(&quiver, &dims, &mut r).unwrap();
        prop_assume!(check_pi_relations(&rep, 1e-12).unwrap().passed());
        prop_assert!(check_nilpotency(&rep, 1e-10));
        let image = exp_functor_on_rep(&rep, 1e-10).unwrap();
        let lambda1 = check_lambda1_relations(&image, 1e-9).unwrap();
        prop_assert!(lambda1.passed(), "{:?}", lambda1);
        let back = log_functor_on_rep(&image, 1e-10).unwrap();
        prop_assert!(max_rep_diff(&back, &rep) <= 1e-12);
    }
}

#[test]
fn a2_unit_dimension_grid() {
    // dims (1, 1): Π(A2) forces x x* = 0, so one of the two scalars vanishes
    let values = [c(0.0, 0.0), c(1.0, 0.0), c(-2.0, 0.0), c(0.0, 1.0 / 3.0), c(0.7, -0.4)];
    let quiver = DynkinType::A(2).quiver();
    for &x in &values {
        for &y in &values {
            let mut rep = DoubleQuiverRep::zero(quiver.clone(), vec![1, 1]).unwrap();
            rep.x[0] = CMatrix::scalar(1, x);
            rep.x_star[0] = CMatrix::scalar(1, y);
            let in_pi = check_pi_relations(&rep, 1e-14).unwrap().passed();
            assert_eq!(in_pi, x == c(0.0, 0.0) || y == c(0.0, 0.0));
            if !in_pi {
                assert!(exp_functor_on_rep(&rep, 1e-10).is_err());
                continue;
            }
            let image = exp_functor_on_rep(&rep, 1e-10).unwrap();
            // x x* = 0, so φ(x x*) = 2πi
            assert_eq!(image.x[0], rep.x[0]);
            assert!((image.x_star[0][(0, 0)] - y * two_pi_i::<f64>()).norm() < 1e-15);
            assert!(check_lambda1_relations(&image, 1e-12).unwrap().passed());
        }
    }
}
