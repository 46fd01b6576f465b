// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use quivmono::additive::{check_deformed_preprojective, check_eigenvalues_in_t, check_residue_relations, lifting_criterion};
use quivmono::dynkin::{verify_dynkin_corollary, DynkinType};
use quivmono::fuchsian::{compare_with_algebraic, hilbert21_demo, monodromy_along, total_monodromy_check};
use quivmono::io::{
    complex_to_json, emit, parse, LambdaWeights, LoopFile, MatrixJson, MonodromyRepFile, QuiverFile, RepFile, StarFile,
    SummandsFile, SystemFile, TFile,
};
use quivmono::matfun::{exp_2pii, BranchConfig};
use quivmono::multiplicative::{check_arrow_relations, check_eigenvalues_in_s, check_mpa_vertex_relation, surface_group_relation_check};
use quivmono::ode::IntegratorConfig;
use quivmono::report::CheckReport;
use quivmono::transform::{forward_transform, inverse_transform, TransformConfig};
use quivmono::{CMatrix, Error, TSet};
use serde::de::DeserializeOwned;

use crate::report::{CheckSummary, Report};
use crate::{Direction, Format, GlobalArgs, IntegratorArgs};

const CHECK_TOL: f64 = 1e-9;
const ODE_TOL: f64 = 1e-6;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    fn from_core(e: Error, context: Option<&Path>) -> Self {
        let code = match e.root() {
            Error::Parse { .. }
            | Error::InvalidQuiver(_)
            | Error::ShapeMismatch(_)
            | Error::ResonantSet { .. }
            | Error::MissingZero
            | Error::InvalidArgument(_)
            | Error::ResidueSumNonZero { .. } => 2,
            _ => 1,
        };
        let message = match context {
            Some(p) => format!("{}: {e}", p.display()),
            None => e.to_string(),
        };
        Self { code, message }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self::from_core(e, None)
    }
}

type CliResult<T> = Result<T, CliError>;

fn load<V: DeserializeOwned>(path: &Path) -> CliResult<V> {
    let text = fs::read_to_string(path).map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    parse(&text).map_err(|e| CliError::from_core(e, Some(path)))
}

/// Converts a validation error raised while building a model from `path`.
fn in_file<T>(path: &Path, r: quivmono::Result<T>) -> CliResult<T> {
    r.map_err(|e| CliError::from_core(e, Some(path)))
}

fn tol(g: &GlobalArgs, default: f64) -> f64 {
    g.tol.unwrap_or(default)
}

fn t_set(g: &GlobalArgs) -> CliResult<Option<TSet>> {
    match g.t.as_deref() {
        None => Ok(None),
        Some("zero") => Ok(Some(TSet::ZeroOnly)),
        Some("strip") => Ok(Some(TSet::HalfOpenStrip)),
        Some(path) => {
            let path = Path::new(path);
            let file: TFile = load(path)?;
            in_file(path, file.to_model()).map(Some)
        }
    }
}

fn t_name(t: &TSet) -> String {
    match t {
        TSet::ZeroOnly => "zero".into(),
        TSet::HalfOpenStrip => "strip".into(),
        TSet::ExplicitFinite(v) => format!("finite ({} values)", v.len()),
    }
}

fn parse_complex(s: &str) -> CliResult<Complex64> {
    let bad = || CliError::input(format!("expected `re,im`, got {s:?}"));
    let (re, im) = s.split_once(',').ok_or_else(bad)?;
    let re: f64 = re.trim().parse().map_err(|_| bad())?;
    let im: f64 = im.trim().parse().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

fn parse_list(s: &str, what: &str) -> CliResult<Vec<usize>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| CliError::input(format!("{what}: expected comma separated integers, got {s:?}")))
        })
        .collect()
}

fn integrator(args: &IntegratorArgs) -> CliResult<IntegratorConfig<f64>> {
    if !(args.rtol > 0.0 && args.atol > 0.0) {
        return Err(CliError::input("--rtol and --atol must be positive"));
    }
    Ok(IntegratorConfig {
        rtol: args.rtol,
        atol: args.atol,
        max_steps: args.max_steps,
        ..IntegratorConfig::default()
    })
}

fn matrix_json(m: &CMatrix) -> MatrixJson {
    MatrixJson::from_matrix(m)
}

pub fn check_additive(g: &GlobalArgs, quiver: &Path, rep: &Path) -> CliResult<Report> {
    let tol = tol(g, CHECK_TOL);
    let (gamma, w) = in_file(quiver, load::<QuiverFile>(quiver)?.to_model())?;
    let rep_model = in_file(rep, load::<RepFile>(rep)?.to_model(&gamma, &w))?;
    let mut report = Report::new("check-additive");
    report.check(CheckSummary::from_report(
        "residue relations",
        check_residue_relations(&gamma, &w, &rep_model, tol)?,
        tol,
    ));
    match check_deformed_preprojective(&gamma, &w, &rep_model, tol) {
        Ok(r) => report.check(CheckSummary::from_report("deformed preprojective", r, tol)),
        Err(Error::GenusNotZero { component, genus }) => {
            report.note(format!("deformed preprojective relation skipped: {component} has genus {genus}"))
        }
        Err(e) => return Err(e.into()),
    }
    if let Some(t) = t_set(g)? {
        report.check(CheckSummary::from_report(
            "eigenvalues in T",
            check_eigenvalues_in_t(&gamma, &rep_model, &t, tol)?,
            tol,
        ));
        report.detail("T", t_name(&t));
    }
    Ok(report)
}

fn multiplicative_checks(
    report: &mut Report,
    gamma: &quivmono::Quiver,
    w: &quivmono::Weights,
    mrep: &quivmono::MonodromyData,
    t: Option<&TSet>,
    tol: f64,
) -> CliResult<()> {
    if gamma.is_non_interfering() {
        report.check(CheckSummary::from_report(
            "arrow relations",
            check_arrow_relations(gamma, w, mrep, tol)?,
            tol,
        ));
    } else {
        report.note("arrow relations skipped: the quiver has interfering arrows");
    }
    report.check(CheckSummary::from_report(
        "vertex relations",
        check_mpa_vertex_relation(gamma, w, mrep, None, tol)?,
        tol,
    ));
    let mut surface = CheckReport::new();
    for c in gamma.components() {
        let entry = surface_group_relation_check(gamma, mrep, &c.id, None, tol)?;
        surface.push(entry.label, entry.defect, tol);
    }
    report.check(CheckSummary::from_report("surface group relations", surface, tol));
    if let Some(t) = t {
        report.check(CheckSummary::from_report(
            "eigenvalues in S",
            check_eigenvalues_in_s(gamma, mrep, t, tol)?,
            tol,
        ));
    }
    Ok(())
}

pub fn check_multiplicative(g: &GlobalArgs, quiver: &Path, mrep: &Path) -> CliResult<Report> {
    let tol = tol(g, CHECK_TOL);
    let (gamma, w) = in_file(quiver, load::<QuiverFile>(quiver)?.to_model())?;
    let mrep_model = in_file(mrep, load::<MonodromyRepFile>(mrep)?.to_model(&gamma))?;
    let t = t_set(g)?;
    let mut report = Report::new("check-multiplicative");
    multiplicative_checks(&mut report, &gamma, &w, &mrep_model, t.as_ref(), tol)?;
    if let Some(t) = &t {
        report.detail("T", t_name(t));
    }
    Ok(report)
}

pub fn transform(
    g: &GlobalArgs,
    quiver: &Path,
    input: &Path,
    direction: Direction,
    verify: bool,
    output: Option<&Path>,
) -> CliResult<Report> {
    let tol = tol(g, CHECK_TOL);
    let (gamma, w) = in_file(quiver, load::<QuiverFile>(quiver)?.to_model())?;
    let t = t_set(g)?.unwrap_or(TSet::ZeroOnly);
    let cfg = TransformConfig {
        tol,
        branch: BranchConfig::default(),
    };
    let mut report = Report::new("transform");
    let text = match direction {
        Direction::Exp => {
            let rep = in_file(input, load::<RepFile>(input)?.to_model(&gamma, &w))?;
            let mrep = forward_transform(&gamma, &w, &rep, &t, &cfg)?;
            if verify {
                report.check(CheckSummary::from_report(
                    "arrow relations",
                    check_arrow_relations(&gamma, &w, &mrep, tol)?,
                    tol,
                ));
                report.check(CheckSummary::from_report(
                    "eigenvalues in S",
                    check_eigenvalues_in_s(&gamma, &mrep, &t, tol)?,
                    tol,
                ));
            }
            emit(&MonodromyRepFile::from_model(&mrep))
        }
        Direction::Log => {
            let mrep = in_file(input, load::<MonodromyRepFile>(input)?.to_model(&gamma))?;
            let rep = inverse_transform(&gamma, &w, &mrep, &t, &cfg)?;
            if verify {
                report.check(CheckSummary::from_report(
                    "residue relations",
                    check_residue_relations(&gamma, &w, &rep, tol)?,
                    tol,
                ));
                report.check(CheckSummary::from_report(
                    "eigenvalues in T",
                    check_eigenvalues_in_t(&gamma, &rep, &t, tol)?,
                    tol,
                ));
            }
            emit(&RepFile::from_model(&rep))
        }
    };
    report.detail("direction", format!("{direction:?}").to_lowercase());
    report.detail("T", t_name(&t));
    match output {
        Some(path) => {
            fs::write(path, &text).map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))?;
            report.detail("output", path.display().to_string());
        }
        None => {
            print!("{text}");
            if verify {
                let summary = match g.format {
                    Format::Json => report.to_json(),
                    Format::Text => report.to_text(),
                };
                eprint!("{summary}");
            }
            report.suppressed = true;
        }
    }
    Ok(report)
}

pub fn monodromy(
    g: &GlobalArgs,
    system: &Path,
    lp: Option<&Path>,
    base: Option<&str>,
    order: Option<&str>,
    clearance: Option<f64>,
    integ: &IntegratorArgs,
) -> CliResult<Report> {
    let tol = tol(g, ODE_TOL);
    let sys = in_file(system, load::<SystemFile>(system)?.to_model())?;
    let cfg = integrator(integ)?;
    let mut report = Report::new("monodromy");
    if let Some(lp_path) = lp {
        if base.is_some() || order.is_some() {
            return Err(CliError::input("--base and --order apply only without a loop file"));
        }
        let lp_model = in_file(lp_path, load::<LoopFile>(lp_path)?.to_model())?;
        let windings: Vec<(usize, i64)> = sys
            .poles()
            .iter()
            .enumerate()
            .map(|(k, p)| (k, lp_model.winding_number(p.position)))
            .filter(|&(_, w)| w != 0)
            .collect();
        let m = monodromy_along(&sys, &lp_model, &cfg, clearance)?;
        report.detail("monodromy", matrix_json(&m));
        report.detail("det", complex_to_json(m.det()));
        report.detail("windings", &windings);
        if windings.len() == 1 {
            let cmp = compare_with_algebraic(&sys, &lp_model, &cfg, tol)?;
            let label = format!("pole {} (winding {})", cmp.pole, cmp.winding);
            report.check(CheckSummary::single("algebraic comparison", &label, cmp.defect, tol));
            report.detail("algebraic", matrix_json(&cmp.algebraic));
            report.detail("comparison", cmp.mode);
        } else {
            report.note(format!(
                "algebraic comparison needs exactly one enclosed pole; the loop encloses {}",
                windings.len()
            ));
        }
        return Ok(report);
    }
    if clearance.is_some() {
        return Err(CliError::input("--clearance applies only with a loop file"));
    }
    let base = base.ok_or_else(|| CliError::input("either a loop file or --base is required"))?;
    let base = parse_complex(base)?;
    let order = order.map(|o| parse_list(o, "--order")).transpose()?;
    let total = total_monodromy_check(&sys, base, order.as_deref(), &cfg, tol)?;
    report.check(CheckSummary::single("product of local monodromies", "product", total.defect, tol));
    let mut dets = CheckReport::new();
    for (k, (m, p)) in total.monodromies.iter().zip(sys.poles()).enumerate() {
        let expected = exp_2pii(&CMatrix::scalar(1, -p.residue.trace()))[(0, 0)];
        dets.push(format!("pole {k}"), (m.det() - expected).norm(), tol);
    }
    report.check(CheckSummary::from_report("determinants", dets, tol));
    report.detail("order", &total.order);
    report.detail("monodromies", total.monodromies.iter().map(matrix_json).collect::<Vec<_>>());
    report.detail("product", matrix_json(&total.product));
    Ok(report)
}

pub fn lift(_g: &GlobalArgs, summands: &Path) -> CliResult<Report> {
    let file: SummandsFile = load(summands)?;
    let parts = file.summands();
    let mut report = Report::new("lift");
    let (exists, vanishing) = match in_file(summands, file.weights())? {
        LambdaWeights::Exact(lambda) => {
            let v = in_file(summands, lifting_criterion(&lambda, &parts))?;
            report.detail("values", v.values.iter().map(|x| x.to_string()).collect::<Vec<_>>());
            report.detail("arithmetic", "exact");
            (v.exists, v.vanishing)
        }
        LambdaWeights::Float(lambda) => {
            let v = in_file(summands, lifting_criterion(&lambda, &parts))?;
            report.detail("values", v.values.iter().map(|&z| complex_to_json(z)).collect::<Vec<_>>());
            report.detail("arithmetic", "floating point");
            (v.exists, v.vanishing)
        }
    };
    report.detail("verdict", if exists { "exists" } else { "does not exist" });
    report.detail("vanishing", vanishing);
    report.note("the summands are taken to be the indecomposable decomposition; this is not verified");
    Ok(report)
}

pub fn dynkin(g: &GlobalArgs, quiver_type: &str, dims: &str, samples: usize) -> CliResult<Report> {
    let tol = tol(g, CHECK_TOL);
    let ty: DynkinType = quiver_type
        .parse()
        .map_err(|e: Error| CliError::input(format!("--type: {e}")))?;
    let mut dims = parse_list(dims, "--dims")?;
    if dims.len() == 1 {
        dims = vec![dims[0]; ty.rank()];
    }
    let r = verify_dynkin_corollary::<f64>(ty, &dims, samples, g.seed, tol)?;
    let mut report = Report::new("dynkin");
    let defect = |name: &str, s: &quivmono::dynkin::DefectSummary, tol: f64| {
        CheckSummary::counted(name, s.failures == 0, s.max_defect, tol, s.checked)
    };
    let count = |name: &str, s: &quivmono::dynkin::CountSummary| {
        CheckSummary::counted(name, s.mismatches == 0, s.mismatches as f64, 0.0, s.checked)
    };
    report.check(CheckSummary::counted(
        "sampling",
        r.sampling_failures == 0,
        r.sampling_failures as f64,
        0.0,
        r.samples,
    ));
    report.check(defect("preprojective relations", &r.pi_relations, quivmono::dynkin::SAMPLE_RESIDUAL));
    report.check(defect("relation transport", &r.relation_transport, tol));
    report.check(defect("round trip", &r.round_trip, tol));
    report.check(count("hom preservation", &r.hom_preservation));
    report.check(count("indecomposability", &r.indecomposability));
    report.note(r.note.clone());
    report.detail("summary", &r);
    Ok(report)
}

pub fn hilbert21(
    g: &GlobalArgs,
    star: &Path,
    positions: Option<&[String]>,
    orders: Option<&str>,
    integ: &IntegratorArgs,
) -> CliResult<Report> {
    let tol = tol(g, ODE_TOL);
    let file: StarFile = load(star)?;
    let (gamma, w) = in_file(star, file.quiver.to_model())?;
    let rep = in_file(star, file.rep.to_model(&gamma, &w))?;
    let positions = positions
        .map(|p| p.iter().map(|s| parse_complex(s)).collect::<CliResult<Vec<_>>>())
        .transpose()?;
    let orders = match orders {
        Some(o) => Some(parse_list(o, "--orders")?),
        None => file.orders.clone(),
    };
    let cfg = integrator(integ)?;
    let h = hilbert21_demo(&gamma, &rep, positions.as_deref(), orders.as_deref(), &cfg, tol)?;
    let mut report = Report::new("hilbert21");
    let mut unipotency = CheckReport::new();
    for (p, &d) in h.points.iter().zip(&h.unipotency_defects) {
        unipotency.push(p.clone(), d, tol);
    }
    report.check(CheckSummary::from_report("unipotency", unipotency, tol));
    report.check(CheckSummary::single("product of local monodromies", "product", h.product_defect, tol));
    report.detail("center", &h.center);
    report.detail("points", &h.points);
    report.detail("positions", h.positions.iter().map(|&z| complex_to_json(z)).collect::<Vec<_>>());
    report.detail("orders", &h.orders);
    report.detail("spherical", h.spherical);
    report.detail("monodromies", h.monodromies.iter().map(matrix_json).collect::<Vec<_>>());
    Ok(report)
}
