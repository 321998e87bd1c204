//! Experiment drivers. Every failure inside an experiment becomes an error
//! check; siblings still run.

use std::f64::consts::TAU;

use asgeirsson_core::line_space::{
    flat_to_line, graphical_pseudo_circle, line_to_flat, phi_map, NonGraphicalPlane, OrientedLine, RuledQuadric,
};
use asgeirsson_core::solutions::appendix_a_radicand;
use asgeirsson_core::{
    ball_solution, build_pair, kball_solution, map_triple_to_standard, pair_from_three_points, slab_solution,
    verify_pair, xray_numeric, BallSection, BallSpec, Branch, BranchPolicy, ConformalGenerator, ConicKind, DConicPair,
    DVec4, Density3, Error, ExtendedPoint, Extension, MeanValueReport, MeanValueSettings, Normalization, PlaneFrame,
    Polynomial, Side, UheSolution,
};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::config::{
    BallConfig, BranchPolicySpec, ConicSpec, ExperimentConfig, ExperimentKind, ExtensionSpec, NormalizationSpec,
    QuadratureSpec, RuledSpec, SamplingSpec, SolutionSpec,
};
use crate::report::{Check, Num, RunReport};

/// Runs the experiment selected by `config.kind`.
pub fn run(config: &ExperimentConfig) -> RunReport {
    let mut report = RunReport::for_config(config);
    let tol = config.tolerance();
    match config.kind {
        ExperimentKind::AsgeirssonCircle | ExperimentKind::AsgeirssonHyperbola => asgeirsson(config, tol, &mut report),
        ExperimentKind::UheResidual => uhe_residual(config, tol, &mut report),
        ExperimentKind::XrayCompare => xray_compare(config, tol, &mut report),
        ExperimentKind::RuledSurface => ruled_surface(config, tol, &mut report),
        ExperimentKind::MapTriple => map_triple(config, tol, &mut report),
        ExperimentKind::ChartRoundtrip => chart_roundtrip(config, tol, &mut report),
    }
    report
}

fn normalization(n: NormalizationSpec) -> Normalization {
    match n {
        NormalizationSpec::ChordLength => Normalization::ChordLength,
        NormalizationSpec::AsPrinted => Normalization::AsPrinted,
    }
}

fn balls(list: &[BallConfig]) -> Vec<BallSpec<f64>> {
    list.iter().map(|b| BallSpec { center: b.center, radius: b.radius, density: b.density }).collect()
}

/// Builds the solution named by the config.
pub fn solution(spec: &SolutionSpec) -> Result<UheSolution<f64>, Error> {
    Ok(match spec {
        SolutionSpec::AppendixA { extension } => UheSolution::appendix_a(match extension {
            ExtensionSpec::Strict => Extension::Strict,
            ExtensionSpec::Zero => Extension::Zero,
        }),
        SolutionSpec::Slab { d0, normalization: n } => UheSolution::slab(*d0, normalization(*n)),
        SolutionSpec::Ball { r0 } => UheSolution::ball(*r0),
        SolutionSpec::Kballs { balls: b, normalization: n } => UheSolution::kballs(balls(b), normalization(*n))?,
        SolutionSpec::Polynomial { terms } => {
            UheSolution::polynomial(Polynomial::from_terms(terms.iter().map(|t| (t.coefficient, t.powers))))
        }
    })
}

/// Builds the conjugate pair named by the config.
pub fn conic_pair(spec: &ConicSpec) -> Result<DConicPair, Error> {
    if let Some(p) = &spec.points {
        return pair_from_three_points(DVec4::from_array(p[0]), DVec4::from_array(p[1]), DVec4::from_array(p[2]));
    }
    match (spec.center, spec.plane, spec.square_radius) {
        (Some(o), Some([u, v]), Some(c2)) => build_pair(
            DVec4::from_array(o),
            PlaneFrame::new(DVec4::zero(), DVec4::from_array(u), DVec4::from_array(v)),
            c2,
        ),
        _ => Err(Error::InvalidArgument("conic needs points, or center, plane and square_radius")),
    }
}

fn settings(q: &QuadratureSpec) -> MeanValueSettings<f64> {
    let branch_policy = match q.branch_policy {
        BranchPolicySpec::Both => BranchPolicy::Both,
        BranchPolicySpec::Plus => BranchPolicy::Single(Branch::Plus),
        BranchPolicySpec::Minus => BranchPolicy::Single(Branch::Minus),
    };
    MeanValueSettings { nodes: q.nodes, truncation: q.truncation, branch_policy }
}

fn kind_name(k: ConicKind) -> &'static str {
    match k {
        ConicKind::Circle => "circle",
        ConicKind::Hyperbola => "hyperbola",
    }
}

fn mean_value_check(r: &MeanValueReport<f64>, tol: f64) -> Check {
    let mut c = Check::compare("mean-value", r.relative_gap, tol)
        .values(r.integral_s, r.integral_sperp)
        .detail("absolute_gap", r.absolute_gap)
        .detail("tail_bound", r.tail_bound)
        .detail("nodes", r.quadrature.nodes as f64);
    if let Some(t) = r.quadrature.truncation {
        c = c.detail("truncation", t);
    }
    if let Some(b) = &r.branch_integrals {
        c = c
            .detail("s_plus", b.s[0])
            .detail("s_minus", b.s[1])
            .detail("sperp_plus", b.s_perp[0])
            .detail("sperp_minus", b.s_perp[1])
            .detail("single_branch_gap_plus", b.single_branch_gap(Branch::Plus))
            .detail("single_branch_gap_minus", b.single_branch_gap(Branch::Minus))
            .detail("two_branch_gap", b.two_branch_gap());
    }
    c
}

fn asgeirsson(config: &ExperimentConfig, tol: f64, report: &mut RunReport) {
    let conic = config.conic.as_ref().expect("validated");
    let pair = match conic_pair(conic) {
        Ok(p) => p,
        Err(e) => return report.push(Check::error("mean-value", tol, e)),
    };
    report.artifact("center", pair.center.to_array().map(Num));
    report.artifact("square_radius", Num(pair.square_radius));
    report.artifact("conic_kind", kind_name(pair.conic_kind()));
    report.artifact("plane_kind", pair.kind.name());
    let expected = match config.kind {
        ExperimentKind::AsgeirssonCircle => ConicKind::Circle,
        _ => ConicKind::Hyperbola,
    };
    if pair.conic_kind() != expected {
        let message =
            format!("experiment expects a {} but the conic is a {}", kind_name(expected), kind_name(pair.conic_kind()));
        return report.push(Check::error("mean-value", tol, message));
    }
    let u = match solution(config.solution.as_ref().expect("validated")) {
        Ok(u) => u,
        Err(e) => return report.push(Check::error("mean-value", tol, e)),
    };
    let s = settings(&config.quadrature);
    let first = match verify_pair(&u, &pair, &s) {
        Ok(r) => {
            report.push(mean_value_check(&r, tol));
            Some(r)
        }
        Err(e) => {
            report.push(Check::error("mean-value", tol, e));
            None
        }
    };
    if expected == ConicKind::Hyperbola {
        // Doubling T at fixed node spacing must move each side by no more
        // than the reported tail bound.
        let doubled = MeanValueSettings { nodes: 2 * s.nodes, truncation: 2.0 * s.truncation, ..s };
        let check = match (first, verify_pair(&u, &pair, &doubled)) {
            (Some(a), Ok(b)) => {
                let (ds, dp) = ((b.integral_s - a.integral_s).abs(), (b.integral_sperp - a.integral_sperp).abs());
                let bound = a.tail_bound + 1e-12 * a.integral_s.abs().max(a.integral_sperp.abs());
                Check::compare("tail-consistency", ds.max(dp), bound)
                    .values(ds, dp)
                    .detail("tail_bound", a.tail_bound)
                    .detail("doubled_truncation", doubled.truncation)
            }
            (None, _) => Check::error("tail-consistency", tol, "mean-value run failed"),
            (_, Err(e)) => Check::error("tail-consistency", tol, e),
        };
        report.push(check);
    }
}

/// Curve samples `(side, branch, θ, point, u, integrand)` as CSV, for
/// external plotting. `None` for kinds without curves.
pub fn curve_samples(config: &ExperimentConfig) -> Option<Vec<u8>> {
    let (Some(conic), Some(sol)) = (&config.conic, &config.solution) else { return None };
    if !matches!(config.kind, ExperimentKind::AsgeirssonCircle | ExperimentKind::AsgeirssonHyperbola) {
        return None;
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["side", "branch", "theta", "x1", "x2", "x3", "x4", "u", "integrand"]).ok()?;
    let (Ok(pair), Ok(u)) = (conic_pair(conic), solution(sol)) else { return w.into_inner().ok() };
    let q = &config.quadrature;
    for (side, side_name) in [(Side::S, "S"), (Side::SPerp, "Sperp")] {
        let curve = pair.curve(side);
        let (branches, thetas): (&[(Branch, &str)], Vec<f64>) = match curve.kind {
            ConicKind::Circle => {
                (&[(Branch::Plus, "")], (0..q.nodes).map(|k| TAU * k as f64 / q.nodes as f64).collect())
            }
            ConicKind::Hyperbola => (
                &[(Branch::Plus, "plus"), (Branch::Minus, "minus")],
                (0..=q.nodes).map(|k| q.truncation * (2.0 * k as f64 / q.nodes as f64 - 1.0)).collect(),
            ),
        };
        for &(branch, branch_name) in branches {
            for &theta in &thetas {
                let p = curve.point(theta, branch);
                let value = u.eval(p).unwrap_or(f64::NAN);
                let [x1, x2, x3, x4] = p.to_array();
                let row = [theta, x1, x2, x3, x4, value, value * curve.radius()].map(|x| Num(x).to_string());
                w.write_record([side_name, branch_name].into_iter().map(String::from).chain(row)).ok()?;
            }
        }
    }
    w.into_inner().ok()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Line with `|ξ| ≤ xi_max`, `|η| ≤ eta_max`, uniform in area in each disc.
fn random_line(r: &mut ChaCha8Rng, s: &SamplingSpec) -> OrientedLine<f64> {
    let xi = Complex::from_polar(s.xi_max * r.gen::<f64>().sqrt(), r.gen_range(0.0..TAU));
    let eta = Complex::from_polar(s.eta_max * r.gen::<f64>().sqrt(), r.gen_range(0.0..TAU));
    OrientedLine::new(xi, eta)
}

fn random_point(r: &mut ChaCha8Rng, w: f64) -> DVec4 {
    DVec4::new(r.gen_range(-w..w), r.gen_range(-w..w), r.gen_range(-w..w), r.gen_range(-w..w))
}

/// Cap on rejected samples per accepted one.
const MAX_REJECTIONS: usize = 1000;

/// Flat sample points for the residual suite. Lines near a ball boundary,
/// where the field has a square-root kink, and points outside the domain of
/// the closed form are resampled.
fn residual_points(spec: &SolutionSpec, s: &SamplingSpec) -> Result<(Vec<DVec4>, usize), String> {
    let mut r = rng(s.seed);
    let sections: Vec<BallSection<f64>> = match spec {
        SolutionSpec::Ball { r0 } => vec![BallSection { center: [0.0; 3], radius: *r0 }],
        SolutionSpec::Kballs { balls, .. } => {
            balls.iter().map(|b| BallSection { center: b.center, radius: b.radius }).collect()
        }
        _ => Vec::new(),
    };
    let (mut points, mut rejected) = (Vec::with_capacity(s.count), 0);
    while points.len() < s.count {
        if rejected > MAX_REJECTIONS * s.count {
            return Err(format!("only {} of {} sample points accepted", points.len(), s.count));
        }
        let x = match spec {
            SolutionSpec::AppendixA { .. } | SolutionSpec::Polynomial { .. } => random_point(&mut r, s.half_width),
            _ => {
                let l = random_line(&mut r, s);
                let clear = sections.iter().all(|b| {
                    let r2 = b.radius * b.radius;
                    (r2 - b.square_distance(l)).abs() >= 0.1 * r2
                });
                if !clear {
                    rejected += 1;
                    continue;
                }
                match line_to_flat(l) {
                    Ok(z) => z.to_vec4(),
                    Err(e) => return Err(e.to_string()),
                }
            }
        };
        if matches!(spec, SolutionSpec::AppendixA { .. }) && !(appendix_a_radicand(x).0 > 0.0) {
            rejected += 1;
            continue;
        }
        points.push(x);
    }
    Ok((points, rejected))
}

fn uhe_residual(config: &ExperimentConfig, tol: f64, report: &mut RunReport) {
    const NAME: &str = "max-normalized-residual";
    let spec = config.solution.as_ref().expect("validated");
    let u = match solution(spec) {
        Ok(u) => u,
        Err(e) => return report.push(Check::error(NAME, tol, e)),
    };
    let (points, rejected) = match residual_points(spec, &config.sampling) {
        Ok(p) => p,
        Err(e) => return report.push(Check::error(NAME, tol, e)),
    };
    let mut worst: f64 = 0.0;
    for x in &points {
        match u.residual(*x, config.sampling.step) {
            Ok(v) => worst = worst.max(v),
            Err(e) => return report.push(Check::error(NAME, tol, format!("at {:?}: {e}", x.to_array()))),
        }
    }
    report.push(
        Check::compare(NAME, worst, tol)
            .detail("points", points.len() as f64)
            .detail("rejected", rejected as f64)
            .detail("step", config.sampling.step),
    );
}

type ClosedForm = Box<dyn Fn(OrientedLine<f64>) -> Result<f64, Error>>;

fn xray_compare(config: &ExperimentConfig, tol: f64, report: &mut RunReport) {
    const NAME: &str = "closed-form-vs-quadrature";
    let spec = config.solution.as_ref().expect("validated");
    let (density, closed): (Density3<f64>, ClosedForm) = match spec {
        SolutionSpec::Ball { r0 } => {
            let r0 = *r0;
            (Density3::Ball { r0 }, Box::new(move |l| ball_solution(r0, l)))
        }
        SolutionSpec::Kballs { balls: b, normalization: n } => {
            let (list, n) = (balls(b), normalization(*n));
            (Density3::Balls(list.clone()), Box::new(move |l| kball_solution(&list, l, n)))
        }
        SolutionSpec::Slab { d0, normalization: n } => {
            let (d0, n) = (*d0, normalization(*n));
            (Density3::Slab { d0 }, Box::new(move |l| slab_solution(d0, l, n)))
        }
        _ => unreachable!("validated"),
    };
    if let Err(e) = density.validate() {
        return report.push(Check::error(NAME, tol, e));
    }
    let mut r = rng(config.sampling.seed);
    let lines: Vec<_> = (0..config.sampling.count).map(|_| random_line(&mut r, &config.sampling)).collect();
    let x = &config.xray;
    let mut numeric = Vec::with_capacity(lines.len());
    let (mut worst, mut at) = (0.0f64, (0.0, 0.0));
    for l in &lines {
        let pair = xray_numeric(&density, *l, x.truncation, x.quadrature_tolerance).and_then(|n| Ok((closed(*l)?, n)));
        match pair {
            Ok((c, n)) => {
                numeric.push(n);
                if !((c - n).abs() <= worst) {
                    (worst, at) = ((c - n).abs(), (c, n));
                }
            }
            Err(e) => return report.push(Check::error(NAME, tol, e)),
        }
    }
    report.push(
        Check::compare(NAME, worst, tol)
            .values(at.0, at.1)
            .detail("lines", lines.len() as f64)
            .detail("truncation", x.truncation),
    );
    if let SolutionSpec::Slab { d0, .. } = spec {
        // Direct integration against the half-chord closed form.
        let mut ratio_worst = (0.0f64, 2.0);
        for (l, n) in lines.iter().zip(&numeric) {
            match slab_solution(*d0, *l, Normalization::AsPrinted) {
                Ok(p) => {
                    let ratio = n / p;
                    if !((ratio - 2.0).abs() <= ratio_worst.0) {
                        ratio_worst = ((ratio - 2.0).abs(), ratio);
                    }
                }
                Err(e) => return report.push(Check::error("slab-factor-two", tol, e)),
            }
        }
        report.push(
            Check::compare("slab-factor-two", ratio_worst.0, tol)
                .detail("expected_ratio", 2.0)
                .detail("worst_ratio", ratio_worst.1),
        );
    }
}

fn quadric_check(
    name: &str,
    quadric: RuledQuadric<f64>,
    lines: impl Iterator<Item = Option<Result<OrientedLine<f64>, Error>>>,
    spec: &RuledSpec,
    tol: f64,
) -> Check {
    let (mut worst, mut used, mut skipped) = (0.0f64, 0usize, 0usize);
    for l in lines {
        let l = match l {
            None => {
                skipped += 1;
                continue;
            }
            Some(Ok(l)) => l,
            Some(Err(e)) => return Check::error(name, tol, e),
        };
        used += 1;
        for j in 0..spec.point_samples {
            let r = -spec.r_max + 2.0 * spec.r_max * j as f64 / (spec.point_samples - 1) as f64;
            worst = worst.max(quadric.residual(phi_map(l, r)));
        }
    }
    if used == 0 {
        return Check::error(name, tol, "no sampled line lies on the pseudo-circle");
    }
    Check::compare(name, worst, tol).detail("lines", used as f64).detail("skipped", skipped as f64)
}

fn ruled_surface(config: &ExperimentConfig, tol: f64, report: &mut RunReport) {
    let spec = config.ruled.as_ref().expect("validated");
    let n = spec.line_samples;
    if let Some(g) = &spec.graphical {
        let quadric = RuledQuadric::Hyperboloid { a: g.a, b: g.b };
        for (name, a, b, sigma) in [("hyperboloid-s", g.a, g.b, 1.0), ("hyperboloid-sperp", -g.a, -g.b, -1.0)] {
            let lines = (0..n).map(|k| graphical_pseudo_circle(a, b, sigma, TAU * k as f64 / n as f64).map(Ok));
            report.push(quadric_check(name, quadric, lines, spec, tol));
        }
    }
    if let Some(p) = &spec.non_graphical {
        let plane = NonGraphicalPlane::new(p.theta, p.phi, p.h);
        let quadric = RuledQuadric::Paraboloid { theta: p.theta, phi: p.phi };
        let u = |k: usize| -0.95 + 1.9 * (k as f64 + 0.5) / n as f64;
        let lines = (0..n).map(|k| Some(plane.pseudo_circle(1.0, u(k))));
        report.push(quadric_check("paraboloid-s", quadric, lines, spec, tol));
        match plane.conjugate() {
            Ok(conj) => {
                let lines = (0..n).map(|k| Some(conj.pseudo_circle(-1.0, u(k))));
                report.push(quadric_check("paraboloid-sperp", quadric, lines, spec, tol));
            }
            Err(e) => report.push(Check::error("paraboloid-sperp", tol, e)),
        }
    }
}

fn generator_json(g: &ConformalGenerator<f64>) -> serde_json::Value {
    let v = |x: DVec4| x.to_array().map(Num);
    match g {
        ConformalGenerator::Translation(t) => json!({ "generator": g.name(), "vector": v(*t) }),
        ConformalGenerator::Dilation(k) => json!({ "generator": g.name(), "factor": Num(*k) }),
        ConformalGenerator::PseudoOrthogonal(m) => {
            json!({ "generator": g.name(), "matrix": m.rows.map(|row| row.map(Num)) })
        }
        ConformalGenerator::AntiOrthogonalSwap => json!({ "generator": g.name() }),
        ConformalGenerator::Inversion { center, k } => {
            json!({ "generator": g.name(), "center": v(*center), "k": Num(*k) })
        }
        ConformalGenerator::SpecialConformal(b) => json!({ "generator": g.name(), "vector": v(*b) }),
    }
}

fn map_triple(config: &ExperimentConfig, tol: f64, report: &mut RunReport) {
    let p = config.conic.as_ref().and_then(|c| c.points.as_ref()).expect("validated");
    let [q, q1, q2] = [0, 1, 2].map(|i| DVec4::from_array(p[i]));
    let f = match map_triple_to_standard(q, q1, q2) {
        Ok(f) => f,
        Err(e) => {
            for name in ["q-to-origin", "q2-to-e1", "q1-to-infinity", "inverse-round-trip"] {
                report.push(Check::error(name, tol, &e));
            }
            return;
        }
    };
    report.artifact("generators", f.generators().iter().map(generator_json).collect::<Vec<_>>());
    report.artifact("metric_sign", Num(f.metric_sign()));
    let image = |name: &str, x: DVec4, target: DVec4| match f.apply_finite(x) {
        Ok(y) => Check::compare(name, (y - target).max_abs(), tol),
        Err(e) => Check::error(name, tol, e),
    };
    report.push(image("q-to-origin", q, DVec4::zero()));
    report.push(image("q2-to-e1", q2, DVec4::basis(0)));
    // Reciprocal size of the image; zero iff q1 lands exactly on ∞.
    let to_infinity = match f.apply(q1.into()) {
        ExtendedPoint::Infinity => 0.0,
        other => other.finite().map_or(f64::INFINITY, |y| 1.0 / y.max_abs()),
    };
    report.push(Check::compare("q1-to-infinity", to_infinity, tol));
    let g = f.inverse();
    let scale = q.max_abs().max(q1.max_abs()).max(q2.max_abs()).max(1.0);
    let back = [(ExtendedPoint::Infinity, q1), (DVec4::zero().into(), q), (DVec4::basis(0).into(), q2)]
        .into_iter()
        .map(|(y, x)| g.apply(y).finite().map_or(f64::INFINITY, |b| (b - x).max_abs() / scale))
        .fold(0.0, f64::max);
    report.push(Check::compare("inverse-round-trip", back, tol).detail("scale", scale));
}

fn chart_roundtrip(config: &ExperimentConfig, tol: f64, report: &mut RunReport) {
    const NAME: &str = "max-roundtrip-error";
    let mut r = rng(config.sampling.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..config.sampling.count {
        let l = random_line(&mut r, &config.sampling);
        match line_to_flat(l).and_then(flat_to_line) {
            Ok(m) => worst = worst.max((m.xi - l.xi).norm()).max((m.eta - l.eta).norm()),
            Err(e) => return report.push(Check::error(NAME, tol, e)),
        }
    }
    report.push(Check::compare(NAME, worst, tol).detail("lines", config.sampling.count as f64));
}
