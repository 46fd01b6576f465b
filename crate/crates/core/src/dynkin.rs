// SPDX-License-Identifier: Apache-2.0

//! Representations of doubled Dynkin quivers, the exponential functor from
//! nilpotent `Π(Q)`-representations to `Λ¹(Q)`-representations, and a sampled
//! verification pipeline for the facts the isomorphism `Λ¹(Q) ≅ Π(Q)` rests on.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::additive::check_shape;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Svd};
use crate::matfun::{hom_dimension, is_nilpotent, phi_series_nilpotent, psi_series_nilpotent, QuiverShape, ShapeRep, HOM_RANK_TOL};
use crate::multiplicative::{check_mpa_vertex_relation, MonodromyRep, MultiplicativeArrow};
use crate::quiver::{ComponentArrow, ComponentQuiver, RiemannSurfaceQuiver, WeightData};
use crate::random::{derive_seed, random_in_disk, random_low_rank};
use crate::report::CheckReport;
use crate::scalar::Real;

/// Simply-laced Dynkin types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DynkinType {
    A(usize),
    D(usize),
    E(usize),
}

impl DynkinType {
    pub fn rank(self) -> usize {
        match self {
            DynkinType::A(n) | DynkinType::D(n) | DynkinType::E(n) => n,
        }
    }

    /// Quiver with vertices `"1".."n"`. `A_n` is the path `1 → 2 → ⋯ → n`;
    /// `D_n` is the path `1 → ⋯ → n−2` with `n−1 → n−2` and `n → n−2`;
    /// `E_n` is the path `1 → ⋯ → n−1` with `n → 3`.
    pub fn quiver(self) -> ComponentQuiver {
        let n = self.rank();
        let vertices = (1..=n).map(|v| v.to_string()).collect();
        let mut edges: Vec<(usize, usize)> = Vec::new();
        match self {
            DynkinType::A(_) => edges.extend((1..n).map(|v| (v - 1, v))),
            DynkinType::D(_) => {
                edges.extend((1..n - 2).map(|v| (v - 1, v)));
                edges.push((n - 2, n - 3));
                edges.push((n - 1, n - 3));
            }
            DynkinType::E(_) => {
                edges.extend((1..n - 1).map(|v| (v - 1, v)));
                edges.push((n - 1, 2));
            }
        }
        let arrows = edges
            .into_iter()
            .enumerate()
            .map(|(k, (tail, head))| ComponentArrow {
                id: format!("a{}", k + 1),
                tail,
                head,
            })
            .collect();
        ComponentQuiver { vertices, arrows }
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynkinType::A(n) => write!(f, "A{n}"),
            DynkinType::D(n) => write!(f, "D{n}"),
            DynkinType::E(n) => write!(f, "E{n}"),
        }
    }
}

impl FromStr for DynkinType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("unknown Dynkin type {s:?}"));
        let s = s.trim();
        let (letter, rest) = s.split_at(s.chars().next().map_or(0, char::len_utf8));
        let n: usize = rest.parse().map_err(|_| bad())?;
        match letter.to_ascii_uppercase().as_str() {
            "A" if n >= 1 => Ok(DynkinType::A(n)),
            "D" if n >= 4 => Ok(DynkinType::D(n)),
            "E" if (6..=8).contains(&n) => Ok(DynkinType::E(n)),
            _ => Err(bad()),
        }
    }
}

/// Representation of the double of a component quiver: per arrow `a: i → j`,
/// `x_a: V_i → V_j` and `x_a^*: V_j → V_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct DoubleQuiverRep<T: Real> {
    pub quiver: ComponentQuiver,
    pub dims: Vec<usize>,
    pub x: Vec<Matrix<T>>,
    pub x_star: Vec<Matrix<T>>,
}

impl<T: Real> DoubleQuiverRep<T> {
    pub fn zero(quiver: ComponentQuiver, dims: Vec<usize>) -> Result<Self> {
        if dims.len() != quiver.vertex_count() {
            return Err(Error::ShapeMismatch("one dimension per vertex is required".into()));
        }
        let x = quiver.arrows.iter().map(|a| Matrix::zeros(dims[a.head], dims[a.tail])).collect();
        let x_star = quiver.arrows.iter().map(|a| Matrix::zeros(dims[a.tail], dims[a.head])).collect();
        Ok(Self { quiver, dims, x, x_star })
    }

    pub fn validate(&self) -> Result<()> {
        let q = &self.quiver;
        if self.dims.len() != q.vertex_count() || self.x.len() != q.arrow_count() || self.x_star.len() != q.arrow_count() {
            return Err(Error::ShapeMismatch("representation does not match its quiver".into()));
        }
        for (k, a) in q.arrows.iter().enumerate() {
            let (m, n) = (self.dims[a.tail], self.dims[a.head]);
            check_shape(&format!("x at arrow {}", a.id), &self.x[k], n, m)?;
            check_shape(&format!("x* at arrow {}", a.id), &self.x_star[k], m, n)?;
        }
        Ok(())
    }

    /// Shape of the double quiver: arrow `2k` is `x_k`, arrow `2k+1` is `x_k^*`.
    pub fn double_shape(&self) -> QuiverShape {
        QuiverShape {
            vertices: self.quiver.vertex_count(),
            arrows: self
                .quiver
                .arrows
                .iter()
                .flat_map(|a| [(a.tail, a.head), (a.head, a.tail)])
                .collect(),
        }
    }

    pub fn to_shape_rep(&self) -> ShapeRep<T> {
        ShapeRep {
            dims: self.dims.clone(),
            maps: self
                .x
                .iter()
                .zip(&self.x_star)
                .flat_map(|(x, xs)| [x.clone(), xs.clone()])
                .collect(),
        }
    }

    /// `Σ_{h(a)=i} x_ax_a^* − Σ_{t(a)=i} x_a^*x_a` at vertex `i`.
    pub fn pi_relation(&self, vertex: usize) -> Matrix<T> {
        let d = self.dims[vertex];
        let mut acc = Matrix::zeros(d, d);
        for (k, a) in self.quiver.arrows.iter().enumerate() {
            if a.head == vertex {
                acc += &(&self.x[k] * &self.x_star[k]);
            }
            if a.tail == vertex {
                acc -= &(&self.x_star[k] * &self.x[k]);
            }
        }
        acc
    }
}

/// `Π(Q)` vertex relations, one entry per vertex.
pub fn check_pi_relations<T: Real>(rep: &DoubleQuiverRep<T>, tol: T) -> Result<CheckReport> {
    rep.validate()?;
    let mut report = CheckReport::new();
    for (v, name) in rep.quiver.vertices.iter().enumerate() {
        report.push(name.clone(), rep.pi_relation(v).norm_fro().to_f64_lossy(), tol.to_f64_lossy());
    }
    Ok(report)
}

/// `‖(C/‖C‖)^{dim C}‖ ≤ tol`, where `C = AB` counts as zero once
/// `‖C‖ ≤ tol·‖A‖‖B‖`.
fn product_nilpotent<T: Real>(a: &Matrix<T>, b: &Matrix<T>, tol: T) -> bool {
    let c = a * b;
    let norm = c.norm_fro();
    if c.is_empty() || norm <= tol * a.norm_fro() * b.norm_fro() {
        return true;
    }
    c.scale_real(T::one() / norm).pow(c.rows() as u32).norm_fro() <= tol
}

/// Whether every `x_ax_a^*` and `x_a^*x_a` is nilpotent.
pub fn check_nilpotency<T: Real>(rep: &DoubleQuiverRep<T>, tol: T) -> bool {
    rep.x
        .iter()
        .zip(&rep.x_star)
        .all(|(x, xs)| product_nilpotent(x, xs, tol) && product_nilpotent(xs, x, tol))
}

/// `ρ_a = x_a`, `ρ_a^* = x_a^*φ(x_ax_a^*)` with the finite nilpotent series.
pub fn exp_functor_on_rep<T: Real>(rep: &DoubleQuiverRep<T>, tol: T) -> Result<DoubleQuiverRep<T>> {
    rep.validate()?;
    let mut out = rep.clone();
    for (k, a) in rep.quiver.arrows.iter().enumerate() {
        let c = &rep.x[k] * &rep.x_star[k];
        if !product_nilpotent(&rep.x[k], &rep.x_star[k], tol) && !is_nilpotent(&c) {
            return Err(Error::NotNilpotent { arrow: a.id.clone() });
        }
        out.x_star[k] = &rep.x_star[k] * &phi_series_nilpotent(&c);
    }
    Ok(out)
}

/// Inverse of [`exp_functor_on_rep`]: `x_a^* = ρ_a^*ψ(ρ_aρ_a^*)`.
pub fn log_functor_on_rep<T: Real>(rep: &DoubleQuiverRep<T>, tol: T) -> Result<DoubleQuiverRep<T>> {
    rep.validate()?;
    let mut out = rep.clone();
    for (k, a) in rep.quiver.arrows.iter().enumerate() {
        let c = &rep.x[k] * &rep.x_star[k];
        if !product_nilpotent(&rep.x[k], &rep.x_star[k], tol) && !is_nilpotent(&c) {
            return Err(Error::NotNilpotent { arrow: a.id.clone() });
        }
        out.x_star[k] = &rep.x_star[k] * &psi_series_nilpotent(&c);
    }
    Ok(out)
}

/// Multiplicative data on the genus-zero realization of the quiver (see
/// [`ComponentQuiver::realize`]) with `σ = 1`: `ρ(ℓ_{a.t}) = (1 + ρ_a^*ρ_a)^{-1}`
/// and `ρ(ℓ_{a.h}) = 1 + ρ_aρ_a^*`.
pub fn to_monodromy_rep<T: Real>(rep: &DoubleQuiverRep<T>) -> Result<MonodromyRep<T>> {
    rep.validate()?;
    let q = &rep.quiver;
    let dims = q.vertices.iter().cloned().zip(rep.dims.iter().copied()).collect();
    let mut point_monodromies = BTreeMap::new();
    let mut arrows = BTreeMap::new();
    for (k, a) in q.arrows.iter().enumerate() {
        let (x, xs) = (&rep.x[k], &rep.x_star[k]);
        let tail = (xs * x).shift(Complex::one());
        let tail_inv = tail.inverse().ok_or_else(|| Error::SingularFactor {
            factor: format!("1 + x*_{0} x_{0}", a.id),
        })?;
        point_monodromies.insert(format!("{}.t", a.id), tail_inv);
        point_monodromies.insert(format!("{}.h", a.id), (x * xs).shift(Complex::one()));
        arrows.insert(
            a.id.clone(),
            MultiplicativeArrow {
                rho: x.clone(),
                rho_star: xs.clone(),
            },
        );
    }
    Ok(MonodromyRep {
        dims,
        point_monodromies,
        genus: BTreeMap::new(),
        arrows,
    })
}

/// `Λ¹(Q)` vertex relations `Π_{h(a)=i}(1 + ρ_aρ_a^*) Π_{t(a)=i}(1 + ρ_a^*ρ_a)^{-1} = 1`
/// in the default factor order, one entry per vertex.
pub fn check_lambda1_relations<T: Real>(rep: &DoubleQuiverRep<T>, tol: T) -> Result<CheckReport> {
    let gamma: RiemannSurfaceQuiver<T> = rep.quiver.realize();
    let mrep = to_monodromy_rep(rep)?;
    check_mpa_vertex_relation(&gamma, &WeightData::zero(&gamma), &mrep, None, tol)
}

/// Whether the endomorphism algebra `A` is local. In characteristic zero the
/// radical of `A` is the kernel of the trace form `(a, b) ↦ tr(ab)` on any
/// faithful module, so `A` is local iff that form has rank one.
pub fn endomorphisms_local<T: Real>(rep: &DoubleQuiverRep<T>, rel_tol: T) -> Result<bool> {
    let shape = rep.double_shape();
    let sr = rep.to_shape_rep();
    let basis = crate::matfun::hom_basis(&shape, &sr, &sr, rel_tol)?;
    if rep.dims.iter().all(|&d| d == 0) {
        return Ok(false);
    }
    let k = basis.len();
    let gram = Matrix::from_fn(k, k, |i, j| {
        basis[i]
            .iter()
            .zip(&basis[j])
            .map(|(a, b)| (a * b).trace())
            .sum::<Complex<T>>()
    });
    Ok(Svd::new(&gram).rank_with(T::lit(TRACE_FORM_RANK_TOL), T::zero()) == 1)
}

/// Relative singular-value threshold for the trace-form rank.
pub const TRACE_FORM_RANK_TOL: f64 = 1e-8;

/// Samples a `Π(Q)`-representation with dimension vector `dims`: per arrow
/// one of `x_a`, `x_a^*` is drawn with random rank, and the other is a random
/// element of the null space of the (then linear) vertex relations.
pub fn sample_pi_rep<T: Real, R: Rng + ?Sized>(quiver: &ComponentQuiver, dims: &[usize], rng: &mut R) -> Result<DoubleQuiverRep<T>> {
    let mut rep = DoubleQuiverRep::zero(quiver.clone(), dims.to_vec())?;
    let arrows = &quiver.arrows;
    // unknown block per arrow: (fix_x, offset, rows, cols)
    let mut layout = Vec::with_capacity(arrows.len());
    let mut unknowns = 0;
    for (k, a) in arrows.iter().enumerate() {
        let (m, n) = (dims[a.tail], dims[a.head]);
        let fix_x = rng.gen_bool(0.5);
        let rank = rng.gen_range(0..=m.min(n));
        if fix_x {
            rep.x[k] = random_low_rank(rng, n, m, rank);
            layout.push((true, unknowns, m, n));
        } else {
            rep.x_star[k] = random_low_rank(rng, m, n, rank);
            layout.push((false, unknowns, n, m));
        }
        unknowns += m * n;
    }
    let mut row_off = vec![0; dims.len()];
    let mut rows = 0;
    for (v, &d) in dims.iter().enumerate() {
        row_off[v] = rows;
        rows += d * d;
    }
    if unknowns == 0 {
        return Ok(rep);
    }
    let mut sys = Matrix::zeros(rows, unknowns);
    let one = T::one();
    for (k, a) in arrows.iter().enumerate() {
        let (fix_x, off, _, uc) = layout[k];
        let var = |r: usize, c: usize| off + r * uc + c;
        let (h, t) = (a.head, a.tail);
        let (dh, dt) = (dims[h], dims[t]);
        // + x x* at the head, − x* x at the tail
        for (vertex, d, sign) in [(h, dh, one), (t, dt, -one)] {
            for r in 0..d {
                for c in 0..d {
                    let row = row_off[vertex] + r * d + c;
                    match (fix_x, sign > T::zero()) {
                        // x X*: Σ_k x[r,k] X*[k,c]
                        (true, true) => (0..dt).for_each(|i| sys[(row, var(i, c))] += rep.x[k][(r, i)]),
                        // −X* x: Σ_k X*[r,k] x[k,c]
                        (true, false) => (0..dh).for_each(|i| sys[(row, var(r, i))] -= rep.x[k][(i, c)]),
                        // X x*: Σ_k X[r,k] x*[k,c]
                        (false, true) => (0..dt).for_each(|i| sys[(row, var(r, i))] += rep.x_star[k][(i, c)]),
                        // −x* X: Σ_k x*[r,k] X[k,c]
                        (false, false) => (0..dh).for_each(|i| sys[(row, var(i, c))] -= rep.x_star[k][(r, i)]),
                    }
                }
            }
        }
    }
    let null = if rows == 0 {
        Matrix::identity(unknowns)
    } else {
        sys.null_space(T::lit(1e-10))
    };
    let coeffs = Matrix::from_fn(null.cols(), 1, |_, _| random_in_disk(rng, 1.0));
    let mut sol = &null * &coeffs;
    // entries at roundoff level are structural zeros of the solution
    let floor = T::lit(64.0) * T::epsilon() * sol.max_abs();
    sol = sol.map(|z| if z.norm() <= floor { Complex::zero() } else { z });
    for (k, &(fix_x, off, ur, uc)) in layout.iter().enumerate() {
        let block = Matrix::from_fn(ur, uc, |r, c| sol[(off + r * uc + c, 0)]);
        if fix_x {
            rep.x_star[k] = block;
        } else {
            rep.x[k] = block;
        }
    }
    Ok(rep)
}

/// Residual threshold for accepting a sampled `Π(Q)`-representation.
pub const SAMPLE_RESIDUAL: f64 = 1e-12;
const SAMPLE_RETRIES: usize = 20;

#[derive(Clone, Debug, Serialize)]
pub struct DefectSummary {
    pub checked: usize,
    pub failures: usize,
    pub max_defect: f64,
}

impl DefectSummary {
    fn new() -> Self {
        Self {
            checked: 0,
            failures: 0,
            max_defect: 0.0,
        }
    }

    fn record(&mut self, defect: f64, tol: f64) {
        self.checked += 1;
        self.max_defect = self.max_defect.max(defect.abs());
        if !(defect <= tol) {
            self.failures += 1;
        }
    }

    fn merge(&mut self, other: &Self) {
        self.checked += other.checked;
        self.failures += other.failures;
        self.max_defect = self.max_defect.max(other.max_defect);
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CountSummary {
    pub checked: usize,
    pub mismatches: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DynkinReport {
    pub quiver_type: String,
    pub dims: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    /// Samples whose `Π(Q)` residual never dropped below the acceptance threshold.
    pub sampling_failures: usize,
    /// `Π(Q)` relation residual of the accepted samples.
    pub pi_relations: DefectSummary,
    /// `Λ¹(Q)` relation defect after the exponential functor.
    pub relation_transport: DefectSummary,
    /// `dim Hom(X, Y)` against `dim Hom(F X, F Y)`.
    pub hom_preservation: CountSummary,
    /// `‖log(exp X) − X‖`.
    pub round_trip: DefectSummary,
    /// Local endomorphism algebra of `X` against that of `F X`.
    pub indecomposability: CountSummary,
    /// Samples with a local endomorphism algebra.
    pub indecomposable_samples: usize,
    /// Seeds of failing samples, for reproduction.
    pub failing_seeds: Vec<u64>,
    pub note: String,
}

impl DynkinReport {
    pub fn passed(&self) -> bool {
        self.sampling_failures == 0
            && self.pi_relations.failures == 0
            && self.relation_transport.failures == 0
            && self.hom_preservation.mismatches == 0
            && self.round_trip.failures == 0
            && self.indecomposability.mismatches == 0
    }
}

pub const DYNKIN_NOTE: &str = "Representation-level consequences only: relation transport, Hom-dimension \
preservation, exp/log round trip and preserved indecomposability on sampled nilpotent representations. \
The isomorphism of algebras is not certified.";

struct SampleOutcome {
    sampling_failed: bool,
    pi: DefectSummary,
    transport: DefectSummary,
    round_trip: DefectSummary,
    hom_mismatch: bool,
    local_mismatch: bool,
    local: bool,
}

fn sample_with_retries<T: Real>(quiver: &ComponentQuiver, bound: &[usize], rng: &mut ChaCha8Rng) -> Result<Option<(DoubleQuiverRep<T>, f64)>> {
    for _ in 0..SAMPLE_RETRIES {
        let dims: Vec<usize> = bound.iter().map(|&b| rng.gen_range(0..=b)).collect();
        let rep = sample_pi_rep::<T, _>(quiver, &dims, rng)?;
        let defect = check_pi_relations(&rep, T::lit(SAMPLE_RESIDUAL))?.max_defect();
        if defect < SAMPLE_RESIDUAL && check_nilpotency(&rep, T::lit(1e-10)) {
            return Ok(Some((rep, defect)));
        }
    }
    Ok(None)
}

fn run_sample<T: Real>(quiver: &ComponentQuiver, bound: &[usize], seed: u64, tol: f64) -> Result<SampleOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = SampleOutcome {
        sampling_failed: false,
        pi: DefectSummary::new(),
        transport: DefectSummary::new(),
        round_trip: DefectSummary::new(),
        hom_mismatch: false,
        local_mismatch: false,
        local: false,
    };
    let (Some((x, dx)), Some((y, dy))) = (sample_with_retries::<T>(quiver, bound, &mut rng)?, sample_with_retries::<T>(quiver, bound, &mut rng)?) else {
        out.sampling_failed = true;
        return Ok(out);
    };
    out.pi.record(dx, SAMPLE_RESIDUAL);
    out.pi.record(dy, SAMPLE_RESIDUAL);
    let t = T::lit(tol);
    let nil = T::lit(1e-10);
    let fx = exp_functor_on_rep(&x, nil)?;
    let fy = exp_functor_on_rep(&y, nil)?;
    for f in [&fx, &fy] {
        let d = match check_lambda1_relations(f, t) {
            Ok(r) => r.max_defect(),
            Err(_) => f64::INFINITY,
        };
        out.transport.record(d, tol);
    }
    for (orig, f) in [(&x, &fx), (&y, &fy)] {
        let back = log_functor_on_rep(f, nil)?;
        let d = back
            .x_star
            .iter()
            .zip(&orig.x_star)
            .map(|(a, b)| a.dist(b).to_f64_lossy())
            .fold(0.0, f64::max);
        out.round_trip.record(d, tol);
    }
    let shape = x.double_shape();
    let rank_tol = T::lit(HOM_RANK_TOL);
    let before = hom_dimension(&shape, &x.to_shape_rep(), &y.to_shape_rep(), rank_tol)?;
    let after = hom_dimension(&shape, &fx.to_shape_rep(), &fy.to_shape_rep(), rank_tol)?;
    out.hom_mismatch = before != after;
    let local_x = endomorphisms_local(&x, rank_tol)?;
    let local_fx = endomorphisms_local(&fx, rank_tol)?;
    out.local_mismatch = local_x != local_fx;
    out.local = local_x;
    Ok(out)
}

/// Sampled verification on `samples` pairs of nilpotent `Π(Q)`-representations
/// with dimension at most `dims` per vertex. Sample `k` uses the seed
/// `derive_seed(seed, k)`.
pub fn verify_dynkin_corollary<T: Real>(quiver_type: DynkinType, dims: &[usize], samples: usize, seed: u64, tol: T) -> Result<DynkinReport> {
    let quiver = quiver_type.quiver();
    if dims.len() != quiver.vertex_count() {
        return Err(Error::InvalidArgument(format!(
            "{quiver_type} has {} vertices but {} dimensions were given",
            quiver.vertex_count(),
            dims.len()
        )));
    }
    if dims.iter().any(|&d| d > 8) || samples > 1000 {
        return Err(Error::InvalidArgument("dimensions are limited to 8 and samples to 1000".into()));
    }
    let tol64 = tol.to_f64_lossy();
    let outcomes: Vec<(u64, SampleOutcome)> = (0..samples as u64)
        .into_par_iter()
        .map(|k| {
            let s = derive_seed(seed, k);
            run_sample::<T>(&quiver, dims, s, tol64).map(|o| (s, o))
        })
        .collect::<Result<_>>()?;
    let mut report = DynkinReport {
        quiver_type: quiver_type.to_string(),
        dims: dims.to_vec(),
        samples,
        seed,
        tol: tol64,
        sampling_failures: 0,
        pi_relations: DefectSummary::new(),
        relation_transport: DefectSummary::new(),
        hom_preservation: CountSummary { checked: 0, mismatches: 0 },
        round_trip: DefectSummary::new(),
        indecomposability: CountSummary { checked: 0, mismatches: 0 },
        indecomposable_samples: 0,
        failing_seeds: Vec::new(),
        note: DYNKIN_NOTE.to_string(),
    };
    for (s, o) in outcomes {
        if o.sampling_failed {
            report.sampling_failures += 1;
            report.failing_seeds.push(s);
            continue;
        }
        report.pi_relations.merge(&o.pi);
        report.relation_transport.merge(&o.transport);
        report.round_trip.merge(&o.round_trip);
        report.hom_preservation.checked += 1;
        report.hom_preservation.mismatches += usize::from(o.hom_mismatch);
        report.indecomposability.checked += 1;
        report.indecomposability.mismatches += usize::from(o.local_mismatch);
        report.indecomposable_samples += usize::from(o.local);
        if o.hom_mismatch || o.local_mismatch || o.transport.failures + o.round_trip.failures + o.pi.failures > 0 {
            report.failing_seeds.push(s);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    fn a2(x: f64, xs: f64) -> DoubleQuiverRep<f64> {
        let mut rep = DoubleQuiverRep::zero(DynkinType::A(2).quiver(), vec![1, 1]).unwrap();
        rep.x[0] = Matrix::scalar(1, c(x, 0.0));
        rep.x_star[0] = Matrix::scalar(1, c(xs, 0.0));
        rep
    }

    #[test]
    fn parse_and_shapes() {
        assert_eq!("D4".parse::<DynkinType>().unwrap(), DynkinType::D(4));
        assert_eq!("e8".parse::<DynkinType>().unwrap(), DynkinType::E(8));
        assert!("D3".parse::<DynkinType>().is_err());
        assert!("E9".parse::<DynkinType>().is_err());
        for (t, arrows) in [(DynkinType::A(3), 2), (DynkinType::D(4), 3), (DynkinType::E(6), 5), (DynkinType::E(8), 7)] {
            let q = t.quiver();
            assert_eq!(q.vertex_count(), t.rank());
            assert_eq!(q.arrow_count(), arrows);
        }
        let d4 = DynkinType::D(4).quiver();
        assert!(d4.arrows.iter().all(|a| a.head == 1));
    }

    #[test]
    fn pi_relation_examples() {
        let zero = DoubleQuiverRep::<f64>::zero(DynkinType::A(3).quiver(), vec![1, 2, 1]).unwrap();
        assert!(check_pi_relations(&zero, 1e-12).unwrap().passed());
        assert!(check_pi_relations(&a2(1.0, 0.0), 1e-12).unwrap().passed());
        let r = check_pi_relations(&a2(1.0, 1.0), 1e-12).unwrap();
        assert!(!r.passed());
        assert!(r.entries.iter().all(|e| (e.defect - 1.0).abs() < 1e-15));
    }

    #[test]
    fn nilpotency_examples() {
        assert!(check_nilpotency(&DoubleQuiverRep::<f64>::zero(DynkinType::A(2).quiver(), vec![2, 1]).unwrap(), 1e-12));
        assert!(check_nilpotency(&a2(1.0, 0.0), 1e-12));
        assert!(!check_nilpotency(&a2(1.0, 1.0), 1e-12));
        assert!(matches!(exp_functor_on_rep(&a2(1.0, 1.0), 1e-12), Err(Error::NotNilpotent { .. })));
    }

    #[test]
    fn functor_examples() {
        let zero = DoubleQuiverRep::<f64>::zero(DynkinType::A(2).quiver(), vec![1, 1]).unwrap();
        assert_eq!(exp_functor_on_rep(&zero, 1e-12).unwrap(), zero);
        let rep = a2(1.0, 0.0);
        assert_eq!(exp_functor_on_rep(&rep, 1e-12).unwrap(), rep);
        // x = 0, x* = 1: ρ* = 2πi
        let f = exp_functor_on_rep(&a2(0.0, 1.0), 1e-12).unwrap();
        assert!((f.x_star[0][(0, 0)] - c(0.0, 2.0 * std::f64::consts::PI)).norm() < 1e-14);
    }

    #[test]
    fn sampled_reps_satisfy_relations() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for t in [DynkinType::A(3), DynkinType::D(4)] {
            for _ in 0..20 {
                let dims: Vec<usize> = (0..t.rank()).map(|_| rng.gen_range(0..=2)).collect();
                let rep = sample_pi_rep::<f64, _>(&t.quiver(), &dims, &mut rng).unwrap();
                assert!(check_pi_relations(&rep, 1e-12).unwrap().passed());
                assert!(check_nilpotency(&rep, 1e-10));
            }
        }
    }

    #[test]
    fn simple_reps_are_local() {
        let s = DoubleQuiverRep::<f64>::zero(DynkinType::A(2).quiver(), vec![1, 0]).unwrap();
        assert!(endomorphisms_local(&s, 1e-9).unwrap());
        let split = DoubleQuiverRep::<f64>::zero(DynkinType::A(2).quiver(), vec![1, 1]).unwrap();
        assert!(!endomorphisms_local(&split, 1e-9).unwrap());
        assert!(endomorphisms_local(&a2(1.0, 0.0), 1e-9).unwrap());
    }
}
