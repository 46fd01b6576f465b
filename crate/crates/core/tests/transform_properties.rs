// SPDX-License-Identifier: Apache-2.0

mod common;

use common::{c, one_arrow_quiver, random_dims, random_p1_quiver, random_weights, rel_dist, rng, star_quiver};
use proptest::prelude::*;
use quivmono::matfun::{hom_basis, hom_dimension, jordan_rank_sequence, BranchConfig, HOM_RANK_TOL};
use quivmono::multiplicative::{
    check_arrow_relations, default_loop_order, default_vertex_order, mpa_vertex_product, surface_group_product,
};
use quivmono::random::{random_connection_system, random_invertible, random_nilpotent_cyclic, random_with_spectrum_in};
use quivmono::scalar::two_pi_i;
use quivmono::transform::{cyclic_exp, cyclic_log, forward_transform, inverse_transform, CyclicRep, TransformConfig};
use quivmono::{CMatrix, ConnectionSystem, Quiver, TSet, Weights};
use rand_chacha::ChaCha8Rng;

fn pick_quiver(r: &mut ChaCha8Rng, kind: u8) -> Quiver {
    match kind {
        0 => one_arrow_quiver(),
        1 => star_quiver(3),
        _ => random_p1_quiver(r, 3, 3, 0),
    }
}

fn random_instance(seed: u64, kind: u8, t: &TSet, zero_weights: bool) -> (Quiver, Weights, ConnectionSystem) {
    let mut r = rng(seed);
    let gamma = pick_quiver(&mut r, kind);
    let w = if zero_weights { Weights::zero(&gamma) } else { random_weights(&mut r, &gamma, 0.4) };
    let dims = random_dims(&mut r, &gamma, 3);
    let rep = random_connection_system(&mut r, &gamma, &w, dims, t).unwrap();
    (gamma, w, rep)
}

fn max_rel_diff(a: &ConnectionSystem, b: &ConnectionSystem) -> f64 {
    let mut worst: f64 = 0.0;
    for (id, x) in &a.arrows {
        let y = &b.arrows[id];
        worst = worst.max(rel_dist(&y.e, &x.e)).max(rel_dist(&y.nabla, &x.nabla));
    }
    for (p, r) in &a.residues {
        worst = worst.max(rel_dist(&b.residues[p], r));
    }
    worst
}

fn check_morphism(theta: &[CMatrix], x: &CyclicRep<f64>, y: &CyclicRep<f64>) -> f64 {
    let m = x.m();
    let mut worst: f64 = 0.0;
    for i in 0..m {
        let from = (i + m - 1) % m;
        let lhs = &theta[i] * &x.maps[i];
        let rhs = &y.maps[i] * &theta[from];
        worst = worst.max(lhs.dist(&rhs) / (1.0 + lhs.norm_fro() + rhs.norm_fro()));
    }
    worst
}

/// Rescales the first map so that the cycle has norm at most 1.
fn unit_cycle(mut rep: CyclicRep<f64>) -> CyclicRep<f64> {
    let norm = rep.cycle().norm_fro();
    if norm > 1.0 {
        rep.maps[0] = rep.maps[0].scale_real(1.0 / norm);
    }
    rep
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn nilpotent_round_trip_is_exact(seed in any::<u64>(), kind in 0u8..3) {
        let t = TSet::ZeroOnly;
        let (gamma, w, rep) = random_instance(seed, kind, &t, true);
        let cfg = TransformConfig::default();
        let mrep = forward_transform(&gamma, &w, &rep, &t, &cfg).unwrap();
        let back = inverse_transform(&gamma, &w, &mrep, &t, &cfg).unwrap();
        prop_assert!(max_rel_diff(&rep, &back) <= 1e-12, "{}", max_rel_diff(&rep, &back));
    }

    #[test]
    fn strip_round_trip(seed in any::<u64>(), kind in 0u8..3) {
        let t = TSet::HalfOpenStrip;
        let (gamma, w, rep) = random_instance(seed, kind, &t, false);
        let cfg = TransformConfig::default();
        let mrep = forward_transform(&gamma, &w, &rep, &t, &cfg).unwrap();
        let back = inverse_transform(&gamma, &w, &mrep, &t, &cfg).unwrap();
        prop_assert!(max_rel_diff(&rep, &back) <= 1e-9, "{}", max_rel_diff(&rep, &back));
        let again = forward_transform(&gamma, &w, &back, &t, &cfg).unwrap();
        for (id, a) in &mrep.arrows {
            prop_assert!(rel_dist(&again.arrows[id].rho_star, &a.rho_star) <= 1e-9);
        }
        for (p, m) in &mrep.point_monodromies {
            prop_assert!(rel_dist(&again.point_monodromies[p], m) <= 1e-9);
        }
    }

    #[test]
    fn forward_output_satisfies_arrow_relations(seed in any::<u64>(), kind in 0u8..3, strip in any::<bool>()) {
        let t = if strip { TSet::HalfOpenStrip } else { TSet::ZeroOnly };
        let (gamma, w, rep) = random_instance(seed, kind, &t, !strip);
        let mrep = forward_transform(&gamma, &w, &rep, &t, &TransformConfig::default()).unwrap();
        let report = check_arrow_relations(&gamma, &w, &mrep, 1e-9).unwrap();
        prop_assert!(report.passed(), "{:?}", report);
        // with the arrow relations in place the vertex product is q times the product of point monodromies
        for comp in gamma.components() {
            let lhs = mpa_vertex_product(&gamma, &mrep, &comp.id, &default_vertex_order(&gamma, &comp.id)).unwrap();
            let surf = surface_group_product(&gamma, &mrep, &comp.id, &default_loop_order(&gamma, &comp.id)).unwrap();
            let rhs = surf.scale(w.q(&gamma, &comp.id));
            prop_assert!(rel_dist(&lhs, &rhs) <= 1e-9);
        }
    }

    #[test]
    fn cyclic_round_trips(seed in any::<u64>(), m in 1usize..=4, n in 1usize..=5, nilpotent in any::<bool>()) {
        let mut r = rng(seed);
        let cfg = BranchConfig::default();
        let (t, rep, tol) = if nilpotent {
            (TSet::ZeroOnly, unit_cycle(random_nilpotent_cyclic::<f64, _>(&mut r, m, 6)), 1e-12)
        } else {
            let t = TSet::HalfOpenStrip;
            let sigma = random_with_spectrum_in(&mut r, n, &t);
            (t, CyclicRep::b_sigma(m, &sigma), 1e-9)
        };
        let fwd = cyclic_exp(&rep, Some((&t, 1e-9))).unwrap();
        let back = cyclic_log(&fwd, &t, &cfg).unwrap();
        prop_assert!(rel_dist(&back.maps[0], &rep.maps[0]) <= tol);
        let again = cyclic_exp(&back, None).unwrap();
        prop_assert!(rel_dist(&again.maps[0], &fwd.maps[0]) <= tol);
    }

    #[test]
    fn jordan_type_is_covariant(seed in any::<u64>(), n in 1usize..=5, which in 0usize..3, m in 1usize..=3) {
        let lambda = [c(0.0, 0.0), c(1.0 / 3.0, 0.0), c(0.0, 0.25)][which];
        let p: CMatrix = random_invertible(&mut rng(seed), n);
        let sigma = &(&p * &CMatrix::jordan_block(n, lambda)) * &p.inverse().unwrap();
        let out = cyclic_exp(&CyclicRep::b_sigma(m, &sigma), None).unwrap();
        let mu = (two_pi_i::<f64>() * lambda).exp() - 1.0;
        let expected: Vec<usize> = (1..=n).map(|k| n - k).collect();
        prop_assert_eq!(jordan_rank_sequence(&out.cycle(), mu, 1e-8), expected);
    }

    #[test]
    fn hom_dimension_is_preserved(seed in any::<u64>(), m in 1usize..=4) {
        let mut r = rng(seed);
        let x = random_nilpotent_cyclic::<f64, _>(&mut r, m, 5);
        let y = random_nilpotent_cyclic::<f64, _>(&mut r, m, 5);
        let shape = x.shape();
        let before = hom_dimension(&shape, &x.to_shape_rep(), &y.to_shape_rep(), HOM_RANK_TOL).unwrap();
        let fx = cyclic_exp(&x, None).unwrap();
        let fy = cyclic_exp(&y, None).unwrap();
        let after = hom_dimension(&shape, &fx.to_shape_rep(), &fy.to_shape_rep(), HOM_RANK_TOL).unwrap();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn morphisms_are_morphisms_after_exp(seed in any::<u64>(), m in 1usize..=4) {
        let mut r = rng(seed);
        let x = random_nilpotent_cyclic::<f64, _>(&mut r, m, 5);
        let y = random_nilpotent_cyclic::<f64, _>(&mut r, m, 5);
        let fx = cyclic_exp(&x, None).unwrap();
        let fy = cyclic_exp(&y, None).unwrap();
        for theta in hom_basis(&x.shape(), &x.to_shape_rep(), &y.to_shape_rep(), HOM_RANK_TOL).unwrap() {
            prop_assert!(check_morphism(&theta, &x, &y) <= 1e-12);
            prop_assert!(check_morphism(&theta, &fx, &fy) <= 1e-10);
        }
    }
}
