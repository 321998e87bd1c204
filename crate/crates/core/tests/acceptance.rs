//! Acceptance criteria 1 to 10. Each test prints one verdict line; run with
//! `cargo test --test acceptance -- --nocapture --include-ignored` to see all
//! of them, including the single-branch clause of criterion 2, which fails.

use std::f64::consts::{PI, TAU};
use std::time::{Duration, Instant};

use asgeirsson_core::line_space::{
    conformal_factor_omega, flat_to_line, graphical_pseudo_circle, laplacian_g_flat, laplacian_g_residual,
    line_to_flat, phi_map, NonGraphicalPlane, OrientedLine, RuledQuadric, DEFAULT_STEP,
};
use asgeirsson_core::solutions::{appendix_a_radicand, BallSection};
use asgeirsson_core::{
    ball_solution, build_pair, classify_plane, kball_solution, map_triple_to_standard, nullity_residual,
    pair_from_three_points, slab_solution, verify_pair, xray_numeric, BallSpec, Branch, BranchPolicy,
    ConjugateConicPair, Density3, ExtendedPoint, Extension, MeanValueReport, MeanValueSettings, Normalization,
    PlaneFrame, Polynomial, Side, UheSolution, Vec4,
};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type V = Vec4<f64>;
type C = Complex<f64>;

fn verdict(n: &str, what: &str, pass: bool, detail: String) -> bool {
    println!("criterion {n:<3} {} {what}: {detail}", if pass { "PASS" } else { "FAIL" });
    pass
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_line(r: &mut ChaCha8Rng, xi_max: f64, eta_max: f64) -> OrientedLine<f64> {
    let xi = C::from_polar(xi_max * r.gen::<f64>().sqrt(), r.gen_range(0.0..TAU));
    let eta = C::from_polar(eta_max * r.gen::<f64>().sqrt(), r.gen_range(0.0..TAU));
    OrientedLine::new(xi, eta)
}

fn definite_triple() -> [V; 3] {
    [V::new(8.0, 0.0, 0.0, 0.0), V::new(7.0, 1.0, 0.0, 0.0), V::new(6.0, 0.0, 0.0, 0.0)]
}

fn hyperbolic_triple() -> [V; 3] {
    [V::new(8.0, 0.0, 0.0, 0.0), V::new(6.0, 0.0, 0.0, 0.0), V::new(9.0, 0.0, 3f64.sqrt(), 0.0)]
}

fn seven() -> V {
    V::new(7.0, 0.0, 0.0, 0.0)
}

#[test]
fn criterion_1_definite_pair() {
    let start = Instant::now();
    let [q, q1, q2] = definite_triple();
    let pair = pair_from_three_points(q, q1, q2).unwrap();
    let u = UheSolution::appendix_a(Extension::Strict);
    let r = verify_pair(&u, &pair, &MeanValueSettings { nodes: 2048, ..Default::default() }).unwrap();
    let elapsed = start.elapsed();
    let center_err = (pair.center - seven()).max_abs();
    let pass =
        center_err == 0.0 && pair.square_radius == 1.0 && r.relative_gap <= 1e-6 && elapsed < Duration::from_secs(1);
    let detail = format!(
        "center error {center_err:.1e}, c² = {}, ∫S = {:.10}, ∫S⊥ = {:.10}, relative gap {:.2e} (tol 1e-6), {:?}",
        pair.square_radius, r.integral_s, r.integral_sperp, r.relative_gap, elapsed
    );
    assert!(verdict("1", "definite test pair", pass, detail));
}

fn hyperbolic_run(settings: MeanValueSettings<f64>) -> (ConjugateConicPair<f64>, MeanValueReport<f64>) {
    let [q, q1, q2] = hyperbolic_triple();
    let pair = pair_from_three_points(q, q1, q2).unwrap();
    let r = verify_pair(&UheSolution::appendix_a(Extension::Zero), &pair, &settings).unwrap();
    (pair, r)
}

fn hyperbolic_settings() -> MeanValueSettings<f64> {
    MeanValueSettings { nodes: 8192, truncation: 12.0, branch_policy: BranchPolicy::Both }
}

#[test]
fn criterion_2_hyperbolic_pair_two_branches() {
    let start = Instant::now();
    let (pair, r) = hyperbolic_run(hyperbolic_settings());
    let elapsed = start.elapsed();
    let (_, r2) = hyperbolic_run(MeanValueSettings { nodes: 16384, truncation: 24.0, ..hyperbolic_settings() });
    let drift = (r2.integral_s - r.integral_s).abs().max((r2.integral_sperp - r.integral_sperp).abs());
    let tail_ok = drift <= r.tail_bound + 1e-12 * r.integral_s.abs();
    let center_err = (pair.center - seven()).max_abs();
    let c2_err = (pair.square_radius - 1.0).abs();
    let pass =
        center_err <= 1e-12 && c2_err <= 1e-12 && r.relative_gap <= 1e-4 && tail_ok && elapsed < Duration::from_secs(5);
    let detail = format!(
        "center error {center_err:.1e}, c² error {c2_err:.1e}, ∫S = {:.10}, ∫S⊥ = {:.10}, relative gap {:.2e} (tol 1e-4), \
         tail bound {:.1e}, change under T→2T {drift:.1e}, {:?}",
        r.integral_s, r.integral_sperp, r.relative_gap, r.tail_bound, elapsed
    );
    assert!(verdict("2a", "hyperbolic test pair, two branches", pass, detail));
}

#[test]
#[ignore = "unattainable: single hyperbola branches of S and S⊥ carry different integrals (gap ≈ 0.19)"]
fn criterion_2_hyperbolic_pair_single_branch() {
    let (_, r) = hyperbolic_run(hyperbolic_settings());
    let b = r.branch_integrals.unwrap();
    let (gp, gm) = (b.single_branch_gap(Branch::Plus), b.single_branch_gap(Branch::Minus));
    let pass = gp <= 1e-4 && gm <= 1e-4;
    let detail = format!(
        "S+ = {:.6}, S⊥+ = {:.6}, gap {gp:.3e}; S− = {:.6}, S⊥− = {:.6}, gap {gm:.3e} (tol 1e-4)",
        b.s[0], b.s_perp[0], b.s[1], b.s_perp[1]
    );
    assert!(verdict("2b", "hyperbolic test pair, single branch", pass, detail));
}

fn uhe_points_appendix_a(r: &mut ChaCha8Rng) -> f64 {
    let u = UheSolution::appendix_a(Extension::Strict);
    (0..100)
        .map(|_| {
            let x = V::new(
                r.gen_range(-10.0..10.0),
                r.gen_range(-10.0..10.0),
                r.gen_range(-10.0..10.0),
                r.gen_range(-10.0..10.0),
            );
            assert!(appendix_a_radicand(x).0 > 0.0);
            u.residual(x, 1e-3).unwrap()
        })
        .fold(0.0, f64::max)
}

/// Flat points whose lines stay clear of every ball boundary:
/// `|r_j² − dist_j²| ≥ 0.1·r_j²`.
fn uhe_points_balls(r: &mut ChaCha8Rng, u: &UheSolution<f64>, balls: &[BallSpec<f64>]) -> f64 {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    while count < 100 {
        let l = random_line(r, 0.8, 2.5);
        let clear = balls.iter().all(|b| {
            let s = BallSection { center: b.center, radius: b.radius };
            (b.radius * b.radius - s.square_distance(l)).abs() >= 0.1 * b.radius * b.radius
        });
        if !clear {
            continue;
        }
        let x = line_to_flat(l).unwrap().to_vec4();
        worst = worst.max(u.residual(x, 1e-3).unwrap());
        count += 1;
    }
    worst
}

fn two_balls() -> Vec<BallSpec<f64>> {
    vec![
        BallSpec { center: [1.5, 0.0, 0.3], radius: 1.0, density: 1.5 },
        BallSpec { center: [-1.0, 1.0, -0.5], radius: 0.8, density: 0.5 },
    ]
}

#[test]
fn criterion_3_uhe_residuals() {
    let mut r = rng(3);
    let a = uhe_points_appendix_a(&mut r);
    let ball = [BallSpec { center: [0.0; 3], radius: 1.7, density: 1.0 }];
    let b = uhe_points_balls(&mut r, &UheSolution::ball(1.7), &ball);
    let k =
        uhe_points_balls(&mut r, &UheSolution::kballs(two_balls(), Normalization::ChordLength).unwrap(), &two_balls());
    let pass = a <= 1e-4 && b <= 1e-4 && k <= 1e-4;
    let detail = format!(
        "max normalized residual: appendix-a {a:.1e}, ball {b:.1e}, k-balls {k:.1e} (tol 1e-4, 100 points each)"
    );
    assert!(verdict("3", "ultra-hyperbolic residual suite", pass, detail));
}

#[test]
fn criterion_4_chart_round_trip() {
    let mut r = rng(4);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let l = random_line(&mut r, 0.9, 10.0);
        let m = flat_to_line(line_to_flat(l).unwrap()).unwrap();
        worst = worst.max((m.xi - l.xi).norm()).max((m.eta - l.eta).norm());
    }
    let pass = worst <= 1e-10;
    assert!(verdict("4", "chart round trip", pass, format!("max error {worst:.2e} over 10⁴ lines (tol 1e-10)")));
}

#[test]
fn criterion_5_omega_and_two_chart_laplacian() {
    // Ω is constant along the stencil in the line chart and cancels in the
    // flat chart, so its residual is rounding noise ε/h² times 2Ω³; it uses
    // the step of the residual suite. The chart comparison is limited by the
    // O(h²) truncation error and uses the default step.
    const OMEGA_STEP: f64 = 1e-3;
    let field = |m: OrientedLine<f64>| {
        Ok((0.3 * m.xi.re + m.eta.im).exp() * (0.7 * m.eta.re).sin() + m.xi.im * m.eta.norm_sqr())
    };
    let (mut omega_worst, mut chart_worst): (f64, f64) = (0.0, 0.0);
    for i in 0..10 {
        for j in 0..10 {
            let (x, y) = (-0.6 + 1.2 * i as f64 / 9.0, -0.6 + 1.2 * j as f64 / 9.0);
            let l = OrientedLine::new(C::new(x, y), C::new(0.5 + x - y, 0.3 + x + y));
            for lap in [
                laplacian_g_residual(conformal_factor_omega, l, OMEGA_STEP),
                laplacian_g_flat(conformal_factor_omega, l, OMEGA_STEP),
            ] {
                omega_worst = omega_worst.max(lap.unwrap().abs());
            }
            let a = laplacian_g_residual(field, l, DEFAULT_STEP).unwrap();
            let b = laplacian_g_flat(field, l, DEFAULT_STEP).unwrap();
            chart_worst = chart_worst.max((a - b).abs() / a.abs().max(b.abs()).max(1.0));
        }
    }
    let pass = omega_worst <= 1e-5 && chart_worst <= 1e-4;
    let detail = format!(
        "Laplacian of Ω {omega_worst:.1e} (tol 1e-5), chart disagreement {chart_worst:.1e} (tol 1e-4), 10×10 grid"
    );
    assert!(verdict("5", "Ω harmonicity and two-chart Laplacian", pass, detail));
}

fn random_pair(r: &mut ChaCha8Rng, definite: bool) -> ConjugateConicPair<f64> {
    loop {
        let mut v =
            || V::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
        let (o, a, b) = (v() * 3.0, v(), v());
        let plane = PlaneFrame::new(V::zero(), a, b);
        let Ok(kind) = classify_plane(&plane) else { continue };
        if kind.is_degenerate() || kind.is_definite() != definite {
            continue;
        }
        let sign = if definite {
            plane.gram()[0][0].signum()
        } else if r.gen::<bool>() {
            1.0
        } else {
            -1.0
        };
        if let Ok(pair) = build_pair(o, plane, sign * r.gen_range(0.3..3.0)) {
            if pair.frame.iter().chain(&pair.perp_frame).all(|e| e.norm() < 10.0) {
                return pair;
            }
        }
    }
}

fn random_points(r: &mut ChaCha8Rng, pair: &ConjugateConicPair<f64>, side: Side, k: usize) -> Vec<V> {
    let c = pair.curve(side);
    (0..k)
        .map(|_| {
            let b = if r.gen::<bool>() { Branch::Plus } else { Branch::Minus };
            c.point(r.gen_range(-3.0..3.0), b)
        })
        .collect()
}

#[test]
fn criterion_6_duality() {
    let mut r = rng(6);
    let mut worst: f64 = 0.0;
    for definite in [true, false] {
        for _ in 0..10 {
            let pair = random_pair(&mut r, definite);
            for (triple_side, probe_side) in [(Side::S, Side::SPerp), (Side::SPerp, Side::S)] {
                let t = random_points(&mut r, &pair, triple_side, 3);
                for p in random_points(&mut r, &pair, probe_side, 16) {
                    worst = worst.max(nullity_residual(p, t[0], t[1], t[2]));
                }
            }
        }
    }
    let pass = worst <= 1e-9;
    assert!(verdict("6", "duality", pass, format!("max nullity residual {worst:.1e} over 20 pairs (tol 1e-9)")));
}

#[test]
fn criterion_7_transitivity() {
    let mut r = rng(7);
    let (mut worst, mut infinity_ok, mut done) = (0.0f64, true, 0);
    while done < 100 {
        let mut v = || {
            V::new(
                r.gen_range(-10.0..10.0),
                r.gen_range(-10.0..10.0),
                r.gen_range(-10.0..10.0),
                r.gen_range(-10.0..10.0),
            )
        };
        let [q, q1, q2] = [v(), v(), v()];
        let skew = [(q, q1), (q, q2), (q1, q2)].iter().all(|(a, b)| {
            let d = *a - *b;
            d.quadratic_form().abs() >= 1e-3 * d.norm_sq()
        });
        if !skew {
            continue;
        }
        let f = map_triple_to_standard(q, q1, q2).unwrap();
        let scale = q.max_abs().max(q1.max_abs()).max(q2.max_abs()).max(1.0);
        worst =
            worst.max(f.apply_finite(q).unwrap().max_abs()).max((f.apply_finite(q2).unwrap() - V::basis(0)).max_abs());
        infinity_ok &= f.apply(q1.into()) == ExtendedPoint::Infinity;
        let g = f.inverse();
        let back = g.apply(ExtendedPoint::Infinity).finite();
        infinity_ok &= back.is_some();
        if let Some(b) = back {
            worst = worst.max((b - q1).max_abs() / scale);
        }
        worst = worst.max((g.apply_finite(V::basis(0)).unwrap() - q2).max_abs() / scale);
        done += 1;
    }
    let pass = worst <= 1e-7 && infinity_ok;
    let detail = format!(
        "max image residual {worst:.1e} (tol 1e-7), ∞ bookkeeping {}",
        if infinity_ok { "correct" } else { "wrong" }
    );
    assert!(verdict("7", "transitivity on 100 skew triples", pass, detail));
}

#[test]
fn criterion_8_ruled_surfaces() {
    let (a, b) = (0.7, 0.3);
    let hyperboloid = RuledQuadric::Hyperboloid { a, b };
    let mut worst: f64 = 0.0;
    let mut lines = 0;
    for (pa, pb, sigma) in [(a, b, 1.0), (-a, -b, -1.0)] {
        for k in 0..64 {
            let l = graphical_pseudo_circle(pa, pb, sigma, k as f64 * TAU / 64.0).unwrap();
            lines += 1;
            for j in 0..16 {
                worst = worst.max(hyperboloid.residual(phi_map(l, -4.0 + 8.0 * j as f64 / 15.0)));
            }
        }
    }
    let plane = NonGraphicalPlane::new(1.0, 0.5, 1.3);
    let paraboloid = RuledQuadric::Paraboloid { theta: plane.theta, phi: plane.phi };
    for (p, sigma) in [(plane, 1.0), (plane.conjugate().unwrap(), -1.0)] {
        for k in 0..64 {
            let u = -0.95 + 1.9 * (k as f64 + 0.5) / 64.0;
            let l = p.pseudo_circle(sigma, u).unwrap();
            lines += 1;
            for j in 0..16 {
                worst = worst.max(paraboloid.residual(phi_map(l, -4.0 + 8.0 * j as f64 / 15.0)));
            }
        }
    }
    let pass = worst <= 1e-7;
    let detail =
        format!("max quadric residual {worst:.1e} over {lines} lines × 16 points, both conjugate sides (tol 1e-7)");
    assert!(verdict("8", "ruled surfaces", pass, detail));
}

#[test]
fn criterion_9_xray_oracle() {
    let mut r = rng(9);
    let balls = two_balls();
    let (ball_d, kball_d) = (Density3::Ball { r0: 1.7 }, Density3::Balls(balls.clone()));
    let (mut ball_worst, mut kball_worst): (f64, f64) = (0.0, 0.0);
    for _ in 0..200 {
        let l = random_line(&mut r, 0.8, 2.5);
        let nb = xray_numeric(&ball_d, l, 12.0, 1e-10).unwrap();
        ball_worst = ball_worst.max((nb - ball_solution(1.7, l).unwrap()).abs());
        let nk = xray_numeric(&kball_d, l, 12.0, 1e-10).unwrap();
        kball_worst = kball_worst.max((nk - kball_solution(&balls, l, Normalization::ChordLength).unwrap()).abs());
    }
    let mut ratio_worst: f64 = 0.0;
    for l in [
        OrientedLine::new(C::new(0.0, 0.0), C::new(0.3, 0.1)),
        OrientedLine::new(C::new((1.0f64 / 3.0).sqrt(), 0.0), C::new(0.0, 0.0)),
        random_line(&mut r, 0.7, 1.0),
    ] {
        let num = xray_numeric(&Density3::Slab { d0: 0.75 }, l, 30.0, 1e-10).unwrap();
        ratio_worst = ratio_worst.max((num / slab_solution(0.75, l, Normalization::AsPrinted).unwrap() - 2.0).abs());
    }
    let pass = ball_worst <= 1e-8 && kball_worst <= 1e-8 && ratio_worst <= 1e-8;
    let detail = format!(
        "ball {ball_worst:.1e}, k-balls {kball_worst:.1e} over 200 lines (tol 1e-8); slab integral / printed value = 2 to within {ratio_worst:.1e}"
    );
    assert!(verdict("9", "X-ray oracle", pass, detail));
}

#[test]
fn criterion_10_discrimination() {
    let u = UheSolution::polynomial(Polynomial::from_terms([(1.0, [2, 0, 0, 0])]));
    let r = verify_pair(&u, &ConjugateConicPair::standard(), &Default::default()).unwrap();
    let pass = r.relative_gap >= 1e-2 && (r.integral_s - PI).abs() < 1e-12;
    let detail = format!(
        "u = x₁²: ∫S = {:.12}, ∫S⊥ = {:.3e}, relative gap {:.3} (must be ≥ 1e-2)",
        r.integral_s, r.integral_sperp, r.relative_gap
    );
    assert!(verdict("10", "discrimination control", pass, detail));
}
