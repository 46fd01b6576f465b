// SPDX-License-Identifier: Apache-2.0

mod common;

use common::{c, random_p1_quiver, random_weights, rng};
use num_complex::Complex64;
use proptest::prelude::*;
use quivmono::dynkin::DoubleQuiverRep;
use quivmono::random::random_in_t;
use quivmono::scalar::two_pi_i;
use quivmono::TSet;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn component_quiver_keeps_every_arrow(seed in any::<u64>(), k in 1usize..=4, arrows in 0usize..=5, unused in 0usize..=2) {
        let gamma = random_p1_quiver(&mut rng(seed), k, arrows, unused);
        let cq = gamma.component_quiver();
        prop_assert_eq!(cq.vertex_count(), k);
        prop_assert_eq!(cq.arrow_count(), arrows);
        for (a, ca) in gamma.arrows().iter().zip(&cq.arrows) {
            prop_assert_eq!(&cq.vertices[ca.tail], gamma.component_of(&a.tail));
            prop_assert_eq!(&cq.vertices[ca.head], gamma.component_of(&a.head));
        }
        prop_assert_eq!(gamma.is_non_interfering(), unused == 0);
        prop_assert_eq!(gamma.unused_points().len(), unused);
    }

    #[test]
    fn double_quiver_doubles_arrows(seed in any::<u64>(), k in 1usize..=4, arrows in 0usize..=5) {
        let gamma = random_p1_quiver(&mut rng(seed), k, arrows, 0);
        let rep = DoubleQuiverRep::<f64>::zero(gamma.component_quiver(), vec![1; k]).unwrap();
        let shape = rep.double_shape();
        prop_assert_eq!(shape.arrows.len(), 2 * arrows);
        for pair in shape.arrows.chunks(2) {
            prop_assert_eq!(pair[0], (pair[1].1, pair[1].0));
        }
    }

    #[test]
    fn q_is_product_of_sigmas(seed in any::<u64>(), k in 1usize..=3, arrows in 0usize..=4, unused in 0usize..=2) {
        let mut r = rng(seed);
        let gamma = random_p1_quiver(&mut r, k, arrows, unused);
        let w = random_weights(&mut r, &gamma, 0.6);
        for comp in gamma.components() {
            let product: Complex64 = gamma.points_on(&comp.id).map(|p| w.sigma(&p.id)).product();
            let q = w.q(&gamma, &comp.id);
            prop_assert!((q - product).norm() <= 1e-12 * q.norm().max(1.0));
        }
    }

    #[test]
    fn strip_exponential_is_injective(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = TSet::HalfOpenStrip;
        let s_set = t.to_s().unwrap();
        let t1 = random_in_t(&mut r, &t);
        let t2 = random_in_t(&mut r, &t);
        let e = |z: Complex64| (two_pi_i::<f64>() * z).exp() - 1.0;
        if (t1 - t2).norm() > 1e-6 {
            prop_assert!((e(t1) - e(t2)).norm() > 0.0);
        }
        prop_assert!((s_set.branch(e(t1), 1e-12).unwrap() - t1).norm() <= 1e-12);
        prop_assert!((s_set.branch(e(t2), 1e-12).unwrap() - t2).norm() <= 1e-12);
    }

    #[test]
    fn finite_exponential_recovers_members(a in 0.0f64..0.99, b in -0.5f64..0.5) {
        prop_assume!((a - 0.0).abs() + b.abs() > 1e-3);
        let t = TSet::ExplicitFinite(vec![c(0.0, 0.0), c(a, b)]);
        prop_assume!(t.validate().is_ok());
        let s_set = t.to_s().unwrap();
        for z in [c(0.0, 0.0), c(a, b)] {
            let s = (two_pi_i::<f64>() * z).exp() - 1.0;
            prop_assert!((s_set.branch(s, 1e-10).unwrap() - z).norm() <= 1e-12);
        }
    }
}
