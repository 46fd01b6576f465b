// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_complex::Complex64;
use quivmono::quiver::{ArrowDesc, ComponentDesc, MarkedPointDesc};
use quivmono::random::random_in_disk;
use quivmono::{Quiver, Weights};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Genus-zero quiver with non-interfering arrows: `components` vertices
/// `V0, V1, ...`, each arrow `a<k>` running from its own point `a<k>.t` to its
/// own point `a<k>.h`, plus `unused` isolated points.
pub fn random_p1_quiver(rng: &mut ChaCha8Rng, components: usize, arrows: usize, unused: usize) -> Quiver {
    let comps: Vec<ComponentDesc> = (0..components).map(|i| ComponentDesc::sphere(format!("V{i}"))).collect();
    let mut counts = vec![0usize; components];
    let mut points = Vec::new();
    let mut place = |rng: &mut ChaCha8Rng, id: String, points: &mut Vec<MarkedPointDesc<f64>>| {
        let k = rng.gen_range(0..components);
        counts[k] += 1;
        points.push(MarkedPointDesc::new(id, format!("V{k}"), c(counts[k] as f64, 0.0)));
    };
    let mut arrow_descs = Vec::new();
    for a in 0..arrows {
        place(rng, format!("a{a}.t"), &mut points);
        place(rng, format!("a{a}.h"), &mut points);
        arrow_descs.push(ArrowDesc::new(format!("a{a}"), format!("a{a}.t"), format!("a{a}.h")));
    }
    for u in 0..unused {
        place(rng, format!("u{u}"), &mut points);
    }
    Quiver::new(comps, points, arrow_descs).expect("valid by construction")
}

pub fn random_weights(rng: &mut ChaCha8Rng, gamma: &Quiver, radius: f64) -> Weights {
    let lambda = gamma
        .marked_points()
        .iter()
        .map(|p| (p.id.clone(), random_in_disk::<f64, _>(rng, radius)))
        .collect();
    Weights::new(gamma, lambda).expect("weights on every point")
}

pub fn random_dims(rng: &mut ChaCha8Rng, gamma: &Quiver, max: usize) -> BTreeMap<String, usize> {
    gamma
        .components()
        .iter()
        .map(|c| (c.id.clone(), rng.gen_range(1..=max)))
        .collect()
}

/// `‖x − y‖_F / (1 + ‖y‖_F)`.
pub fn rel_dist(x: &quivmono::CMatrix, y: &quivmono::CMatrix) -> f64 {
    x.dist(y) / (1.0 + y.norm_fro())
}

/// Star: centre `C` and `arms` arms `A<k>`, arrow `a<k>` from `a<k>.t` on `A<k>`
/// to `a<k>.h` on `C`.
pub fn star_quiver(arms: usize) -> Quiver {
    let mut comps = vec![ComponentDesc::sphere("C")];
    let mut points = Vec::new();
    let mut arrows = Vec::new();
    for k in 0..arms {
        comps.push(ComponentDesc::sphere(format!("A{k}")));
        points.push(MarkedPointDesc::new(format!("a{k}.t"), format!("A{k}"), c(1.0, 0.0)));
        points.push(MarkedPointDesc::new(format!("a{k}.h"), "C", c(k as f64 + 1.0, 0.0)));
        arrows.push(ArrowDesc::new(format!("a{k}"), format!("a{k}.t"), format!("a{k}.h")));
    }
    Quiver::new(comps, points, arrows).expect("valid by construction")
}

pub fn one_arrow_quiver() -> Quiver {
    Quiver::new(
        vec![ComponentDesc::sphere("X"), ComponentDesc::sphere("Y")],
        vec![MarkedPointDesc::new("p", "X", c(0.0, 0.0)), MarkedPointDesc::new("q", "Y", c(0.0, 0.0))],
        vec![ArrowDesc::new("a", "p", "q")],
    )
    .expect("valid by construction")
}
