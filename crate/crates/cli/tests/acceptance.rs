//! Acceptance suite: each test pins one release criterion at its stated
//! tolerance and prints a single PASS line when it holds. Thresholds are
//! fixed here, not calibrated at runtime.

use std::collections::BTreeMap;
use std::process::Command;

use chenricci_core::catalog::{self, CatalogProblem, KnownFacts};
use chenricci_core::chart::ChartManifold;
use chenricci_core::curvature::{christoffel, riemann, DiffBackend};
use chenricci_core::expr::{eval_jet2, parse, Expression, Func};
use chenricci_core::fd;
use chenricci_core::inequality::{
    classify_submersion, corollary_rhs, fit_pattern_from_components, generalized_map_rhs,
    structured_submersion_rhs, verify_cri_gssf, verify_gfcrh, verify_gfcrv, verify_gfcrvh,
    verify_rm_cri, verify_rm_icri, CorollaryInputs, StructureClass, StructureKind, XiPosition,
};
use chenricci_core::rmap::{analyze_map, identity_eq5, MapAnalysisOptions, RMapProblem};
use chenricci_core::rng::Rng;
use chenricci_core::spaceform::{conformance_check, SpaceFormKind, SpaceFormSpec};
use chenricci_core::submersion::{analyze, identity_3_5, AnalysisOptions, SubmersionProblem};

fn params(kv: &[(&str, f64)]) -> BTreeMap<String, f64> {
    kv.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn all_charts() -> Vec<(String, ChartManifold<f64>)> {
    let mut out: Vec<(String, ChartManifold<f64>)> = vec![];
    let specs: Vec<(&str, Vec<(&str, f64)>)> = vec![
        ("euclid_proj", vec![("m", 3.0), ("n", 2.0)]),
        ("hopf", vec![]),
        ("warped_radial", vec![]),
        ("fubini_study", vec![("n", 1.0)]),
        ("fubini_study", vec![("n", 2.0)]),
        ("sasakian_sphere", vec![("n", 1.0)]),
        ("sasakian_sphere", vec![("n", 2.0)]),
        ("hopf_contact", vec![]),
        ("flat_cylinder_map", vec![]),
        ("cylinder_graph_map", vec![]),
        ("flat_slant_sub", vec![("theta", std::f64::consts::FRAC_PI_4)]),
        ("poincare", vec![("n", 2.0), ("c", -1.0)]),
        ("round_sphere", vec![("n", 3.0), ("c", 1.0)]),
    ];
    for (id, ps) in specs {
        let entry = catalog::get::<f64>(id, &params(&ps)).unwrap();
        match entry.problem {
            CatalogProblem::Chart(c) => out.push((id.to_string(), c)),
            CatalogProblem::Submersion(s) => {
                out.push((format!("{id}/source"), s.source));
                out.push((format!("{id}/target"), s.target));
            }
            CatalogProblem::Map(m) => {
                out.push((format!("{id}/source"), m.source));
                out.push((format!("{id}/target"), m.target));
            }
        }
    }
    out
}

fn submersion(id: &str, ps: &[(&str, f64)]) -> (SubmersionProblem<f64>, KnownFacts<f64>) {
    let entry = catalog::get::<f64>(id, &params(ps)).unwrap();
    match entry.problem {
        CatalogProblem::Submersion(s) => (s, entry.known),
        _ => unreachable!(),
    }
}

fn rmap(id: &str) -> RMapProblem<f64> {
    match catalog::get_simple::<f64>(id).unwrap().problem {
        CatalogProblem::Map(m) => m,
        _ => unreachable!(),
    }
}

fn opts(known: &KnownFacts<f64>) -> AnalysisOptions<f64> {
    AnalysisOptions { fiber: known.fiber, ..Default::default() }
}

#[test]
fn criterion_01_curvature_core() {
    for (label, chart) in all_charts() {
        for p in chart.sample_points(20, 1001) {
            let curv = riemann(&chart, &p, DiffBackend::Jet).unwrap();
            let res = curv.symmetry_residual();
            assert!(res <= 1e-8, "{label}: symmetry/Bianchi residual {res} at {p:?}");
            let a = christoffel(&chart, &p, DiffBackend::Jet).unwrap();
            let b = christoffel(&chart, &p, DiffBackend::FiniteDifference).unwrap();
            let scale = 1.0 + a.gamma.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            for (x, y) in a.gamma.iter().zip(&b.gamma) {
                assert!((x - y).abs() <= 1e-5 * scale, "{label}: jet {x} vs FD {y}");
            }
        }
    }
    println!("ACCEPTANCE 01 curvature core: PASS");
}

#[test]
fn criterion_02_space_form_conformance() {
    let check = |id: &str, ps: &[(&str, f64)], expect: (f64, f64, f64)| {
        let entry = catalog::get::<f64>(id, &params(ps)).unwrap();
        let chart = match entry.problem {
            CatalogProblem::Chart(c) => c,
            _ => unreachable!(),
        };
        let spec = entry.known.spaceform.unwrap();
        assert!((spec.c1 - expect.0).abs() < 1e-15);
        assert!((spec.c2 - expect.1).abs() < 1e-15);
        assert!((spec.c3 - expect.2).abs() < 1e-15);
        let samples = chart.sample_points(6, 777);
        let res = conformance_check(&chart, &spec, &samples, 50, 778).unwrap();
        assert!(res <= 1e-6, "{id}{ps:?}: residual {res}");
    };
    check("fubini_study", &[("n", 1.0)], (1.0, 1.0, 0.0));
    check("fubini_study", &[("n", 2.0)], (1.0, 1.0, 0.0));
    check("round_sphere", &[("n", 3.0), ("c", 1.0)], (1.0, 0.0, 0.0));
    check("round_sphere", &[("n", 4.0), ("c", 2.0)], (2.0, 0.0, 0.0));
    check("sasakian_sphere", &[("n", 2.0)], (1.0, 0.0, 0.0));
    check("poincare", &[("n", 2.0), ("c", -1.0)], (-1.0, 0.0, 0.0));
    check("poincare", &[("n", 3.0), ("c", -1.0)], (-1.0, 0.0, 0.0));
    println!("ACCEPTANCE 02 space-form conformance: PASS");
}

#[test]
fn criterion_03_oneill_audit() {
    // Hopf: total sectional 1, base 4, 3 |A_12|^2 = 3 balance.
    let (prob, known) = submersion("hopf", &[]);
    for p in prob.source.sample_points(3, 55) {
        let an = analyze(&prob, &p, &opts(&known)).unwrap();
        assert!((an.ric_h_m1 - 1.0).abs() < 1e-7);
        assert!((an.ric_h_perp - 4.0).abs() < 1e-6);
        assert!((3.0 * an.a_inner(0, 1, 0, 1) - 3.0).abs() < 1e-6);
        assert_eq!(an.sign_profile.s24, -1);
        assert!(an.sign_profile.residuals[1] <= 1e-6, "residual {}", an.sign_profile.residuals[1]);
    }
    // Warped: flat ambient vs fiber 1/rho^2 with the umbilic correction.
    let (prob, known) = submersion("warped_radial", &[]);
    for rho in [0.5f64, 1.0, 2.0] {
        let dir = [2.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0];
        let p: Vec<f64> = dir.iter().map(|d| rho * d).collect();
        let an = analyze(&prob, &p, &opts(&known)).unwrap();
        let lambda = 1.0 / rho;
        assert!((an.t(0, 0, 0).abs() - lambda).abs() < 1e-6, "rho {rho}");
        assert!((an.ric_v_ker - 1.0 / (rho * rho)).abs() < 2e-6, "rho {rho}: {}", an.ric_v_ker);
        assert_eq!(an.sign_profile.s23, -1);
        assert!(
            an.sign_profile.residuals[0] <= 1e-6,
            "rho {rho}: residual {}",
            an.sign_profile.residuals[0]
        );
    }
    println!("ACCEPTANCE 03 O'Neill sign audit: PASS");
}

#[test]
fn criterion_04_algebraic_identities() {
    let mut rng = Rng::new(3_5_2024);
    for _ in 0..100 {
        let n = 1 + rng.index(4);
        let r = 1 + rng.index(3);
        let mut t = vec![0.0f64; n * n * r];
        for i in 0..n {
            for j in i..n {
                for k in 0..r {
                    let v = rng.uniform(-3.0, 3.0);
                    t[(i * n + j) * r + k] = v;
                    t[(j * n + i) * r + k] = v;
                }
            }
        }
        let (lhs, rhs) = identity_3_5(&t, n, r);
        assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs() + rhs.abs()));
    }
    let mut rng = Rng::new(5_2024);
    for _ in 0..100 {
        let r = 1 + rng.index(4);
        let np = 1 + rng.index(3);
        let mut b = vec![0.0f64; r * r * np];
        for i in 0..r {
            for j in i..r {
                for a in 0..np {
                    let v = rng.uniform(-3.0, 3.0);
                    b[(i * r + j) * np + a] = v;
                    b[(j * r + i) * np + a] = v;
                }
            }
        }
        let (lhs, rhs) = identity_eq5(&b, r, np);
        assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs() + rhs.abs()));
    }
    println!("ACCEPTANCE 04 algebraic identities: PASS");
}

#[test]
fn criterion_05_submersion_inequalities() {
    let cases: Vec<(&str, Vec<(&str, f64)>)> = vec![
        ("euclid_proj", vec![("m", 3.0), ("n", 2.0)]),
        ("euclid_proj", vec![("m", 4.0), ("n", 1.0)]),
        ("hopf", vec![]),
        ("warped_radial", vec![]),
        ("hopf_contact", vec![]),
        ("flat_slant_sub", vec![("theta", std::f64::consts::FRAC_PI_4)]),
    ];
    for (id, ps) in &cases {
        let (prob, known) = submersion(id, ps);
        for p in prob.source.sample_points(5, 4242) {
            let an = analyze(&prob, &p, &opts(&known)).unwrap();
            for v in [verify_gfcrv(&an), verify_gfcrh(&an), verify_gfcrvh(&an)] {
                assert!(v.holds, "{id} {}: violation at {p:?}: {v:?}", v.theorem_id);
            }
        }
    }
    // equality flags match condition flags on the designated cases
    let (prob, known) = submersion("euclid_proj", &[("m", 3.0), ("n", 2.0)]);
    let p = prob.source.sample_points(1, 1).pop().unwrap();
    let an = analyze(&prob, &p, &opts(&known)).unwrap();
    for v in [verify_gfcrv(&an), verify_gfcrh(&an), verify_gfcrvh(&an)] {
        assert!(v.equality && v.conditions_met == Some(true), "{}", v.theorem_id);
    }
    let (prob, known) = submersion("warped_radial", &[]);
    let p = vec![0.9, 0.7, 1.1];
    let an = analyze(&prob, &p, &opts(&known)).unwrap();
    let v = verify_gfcrv(&an);
    assert!(v.equality && v.conditions_met == Some(true), "warped GFCRV umbilic equality");
    let (prob, known) = submersion("hopf", &[]);
    let p = prob.source.sample_points(1, 2).pop().unwrap();
    let an = analyze(&prob, &p, &opts(&known)).unwrap();
    let v = verify_gfcrh(&an);
    assert!(v.holds && !v.equality && v.conditions_met == Some(false));
    assert!((v.slack.abs() - 3.0).abs() <= 1e-6, "gap {}", v.slack);
    println!("ACCEPTANCE 05 submersion inequalities: PASS");
}

#[test]
fn criterion_06_map_inequalities() {
    let prob = rmap("flat_cylinder_map");
    let ma = analyze_map(&prob, &[0.7, -0.4], &MapAnalysisOptions::default()).unwrap();
    let v = verify_rm_cri(&ma);
    assert!(v.holds);
    assert!((v.slack + 0.25).abs() <= 1e-9, "slack {}", v.slack);

    let prob = rmap("cylinder_graph_map");
    let ma = analyze_map(&prob, &[0.7, -0.4, 0.5], &MapAnalysisOptions::default()).unwrap();
    let v = verify_rm_cri(&ma);
    assert!((v.slack + 0.25).abs() <= 1e-9, "slack {}", v.slack);
    let (iv, pattern) = verify_rm_icri(&ma);
    assert!((iv.slack + 0.125).abs() <= 1e-9, "slack {}", iv.slack);
    assert!(!pattern.matched);

    let prob = RMapProblem {
        source: ChartManifold::<f64>::flat(3, 2.0),
        target: ChartManifold::flat(3, 3.0),
        map: vec![parse("x1").unwrap(), parse("x2").unwrap(), parse("0").unwrap()],
        declared_rank: 2,
    };
    let ma = analyze_map(&prob, &[0.2, 0.4, -0.6], &MapAnalysisOptions::default()).unwrap();
    let v = verify_rm_cri(&ma);
    assert!(v.holds && v.equality && v.conditions_met == Some(true));
    let (iv, pattern) = verify_rm_icri(&ma);
    assert!(iv.equality && pattern.matched && pattern.mu == Some(0.0), "B = 0 branch");
    println!("ACCEPTANCE 06 map inequalities: PASS");
}

fn rotated_template(mu: f64, np: usize, a: f64, b: f64) -> Vec<f64> {
    let r = 2usize;
    let mut bc = vec![0.0; r * r * np];
    let idx = |i: usize, j: usize, alpha: usize| (i * r + j) * np + alpha;
    bc[idx(0, 0, 0)] = 3.0 * mu; // B(1,1) on V1
    bc[idx(1, 1, 0)] = mu; // B(2,2) on V1
    bc[idx(0, 1, 1)] = mu; // B(1,2) on V2
    bc[idx(1, 0, 1)] = mu;
    let (s, c) = a.sin_cos();
    let rot = [[c, s], [-s, c]];
    let mut out = vec![0.0; r * r * np];
    for i in 0..2 {
        for j in 0..2 {
            for alpha in 0..np {
                let mut v = 0.0;
                for k in 0..2 {
                    for l in 0..2 {
                        v += rot[i][k] * rot[j][l] * bc[(k * r + l) * np + alpha];
                    }
                }
                out[(i * r + j) * np + alpha] = v;
            }
        }
    }
    let (sb, cb) = b.sin_cos();
    let mut fin = out.clone();
    for i in 0..2 {
        for j in 0..2 {
            let v1 = out[(i * r + j) * np];
            let v2 = out[(i * r + j) * np + 1];
            fin[(i * r + j) * np] = cb * v1 + sb * v2;
            fin[(i * r + j) * np + 1] = -sb * v1 + cb * v2;
        }
    }
    fin
}

#[test]
fn criterion_07_equality_pattern_classifier() {
    let mu = 0.3;
    let fit = fit_pattern_from_components(&rotated_template(mu, 2, 0.0, 0.0), 2, 2);
    assert!(fit.matched);
    assert!((fit.mu.unwrap() - mu).abs() <= 1e-9, "mu {:?}", fit.mu);
    let mut rng = Rng::new(70707);
    for _ in 0..8 {
        let a = rng.uniform(0.0, std::f64::consts::PI);
        let b = rng.uniform(0.0, std::f64::consts::PI);
        let fit = fit_pattern_from_components(&rotated_template(mu, 3, a, b), 2, 3);
        assert!(fit.matched, "a={a} b={b}: {}", fit.detail);
        assert!((fit.mu.unwrap() - mu).abs() <= 1e-9, "a={a} b={b}: mu {:?}", fit.mu);
    }
    let mut bad = rotated_template(mu, 2, 0.7, 0.3);
    bad[(2 + 1) * 2] += 1e-3; // perturb B(2,2) on V1
    assert!(!fit_pattern_from_components(&bad, 2, 2).matched, "perturbation must defeat");
    println!("ACCEPTANCE 07 equality-pattern classifier: PASS");
}

#[test]
fn criterion_08_structure_classifier() {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6};
    for (theta, expect) in [
        (0.0, StructureKind::Invariant),
        (FRAC_PI_6, StructureKind::Slant),
        (FRAC_PI_4, StructureKind::Slant),
        (FRAC_PI_2, StructureKind::AntiInvariant),
    ] {
        let (prob, known) = submersion("flat_slant_sub", &[("theta", theta)]);
        let p = vec![0.3, -0.2, 0.4, 0.5];
        let an = analyze(&prob, &p, &opts(&known)).unwrap();
        let cls = classify_submersion(&prob, &an, None, 808).unwrap();
        assert_eq!(cls.kind, expect, "theta {theta}");
        assert!((cls.theta.unwrap() - theta).abs() <= 1e-6, "theta {theta} -> {:?}", cls.theta);
    }
    let (prob, known) = submersion("hopf_contact", &[]);
    let p = vec![0.75, 0.6, 0.8];
    let an = analyze(&prob, &p, &opts(&known)).unwrap();
    let cls = classify_submersion(&prob, &an, None, 809).unwrap();
    assert_eq!(cls.xi_position, XiPosition::Vertical);
    let spec = known.spaceform.unwrap();
    let verdicts = verify_cri_gssf(&an, &cls, &spec).unwrap();
    assert!(verdicts.iter().all(|v| v.notes.iter().any(|n| n.contains("xi vertical"))));
    assert!(verdicts.iter().all(|v| v.holds));
    println!("ACCEPTANCE 08 structure classifier: PASS");
}

#[test]
fn criterion_09_corollary_arithmetic() {
    let mut rng = Rng::new(909);
    for _ in 0..100 {
        let c: f64 = rng.uniform(-3.0, 3.0);
        let alpha: f64 = rng.uniform(-2.0, 2.0);
        let inp = CorollaryInputs {
            r: 2 + rng.index(5),
            pfx_sq: rng.uniform(0.0, 1.0),
            eta_fx_sq: rng.uniform(0.0, 1.0),
            xi_in_range: rng.next_f64() < 0.5,
            improved: rng.next_f64() < 0.5,
            trace_b_sq: rng.uniform(0.0, 5.0),
        };
        for kind in [
            SpaceFormKind::Real,
            SpaceFormKind::Complex,
            SpaceFormKind::RealKahler,
            SpaceFormKind::Sasakian,
            SpaceFormKind::Kenmotsu,
            SpaceFormKind::Cosymplectic,
            SpaceFormKind::CAlpha,
        ] {
            let spec = SpaceFormSpec::from_kind(kind, c, alpha);
            let direct = corollary_rhs(kind, c, alpha, &inp);
            let mut inp2 = inp;
            if !kind.is_contact_family() {
                inp2.xi_in_range = false;
            }
            let general = generalized_map_rhs(&spec, &inp2);
            assert!(
                (direct - general).abs() <= 1e-12 * (1.0 + direct.abs()),
                "{kind:?}: {direct} vs {general}"
            );
        }
    }
    // structured submersion constants reduce exactly at the endpoints
    let cls_with = |kind: StructureKind, theta: Option<f64>| StructureClass {
        kind,
        theta,
        slant_deviation: 0.0,
        p_sq: 0.4,
        ph1_sq: 0.25,
        qv1_sq: 0.6,
        xi_position: XiPosition::Vertical,
        eta_v1_sq: 0.3,
        eta_h1_sq: 0.0,
        d1_dim: None,
        v1_in_d1: None,
    };
    let complex = SpaceFormSpec::from_kind(SpaceFormKind::Complex, 2.0, 0.0);
    let contact = SpaceFormSpec::generalized_sasakian(0.7, -0.4, 0.9);
    for spec in [complex, contact] {
        let inv = structured_submersion_rhs(&cls_with(StructureKind::Invariant, None), &spec, 3, 2)
            .unwrap();
        let s0 = structured_submersion_rhs(&cls_with(StructureKind::Slant, Some(0.0)), &spec, 3, 2)
            .unwrap();
        assert_eq!(inv, s0, "theta = 0 must equal invariant ({:?})", spec.kind);
        let anti =
            structured_submersion_rhs(&cls_with(StructureKind::AntiInvariant, None), &spec, 3, 2)
                .unwrap();
        let s90 = structured_submersion_rhs(
            &cls_with(StructureKind::Slant, Some(std::f64::consts::FRAC_PI_2)),
            &spec,
            3,
            2,
        )
        .unwrap();
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-15 * (1.0 + a.abs());
        assert!(
            close(anti.c_v, s90.c_v) && close(anti.c_h, s90.c_h) && close(anti.c_vh, s90.c_vh),
            "theta = pi/2 must equal anti-invariant ({:?})",
            spec.kind
        );
    }
    println!("ACCEPTANCE 09 corollary arithmetic: PASS");
}

#[test]
fn criterion_10_parser_and_jets() {
    // malformed inputs carry byte offsets
    match parse::<f64>("x1*+2") {
        Err(chenricci_core::Error::Syntax { offset, .. }) => assert_eq!(offset, 3),
        other => panic!("expected syntax error, got {other:?}"),
    }
    assert!(matches!(
        parse::<f64>("sin(x1, x2)"),
        Err(chenricci_core::Error::Arity { .. })
    ));
    // round-trip on a fixed corpus
    for src in ["x1*x2+exp(x2)", "-(x1+x2)^3/sqrt(x3)", "sin(cos(x1))*log(1+x2^2)"] {
        let e: Expression<f64> = parse(src).unwrap();
        assert_eq!(e, parse::<f64>(&e.print()).unwrap(), "{src}");
    }
    // 200 random expressions: jet gradient within 1e-6 of central FD,
    // Hessian within 1e-4 relative
    let mut rng = Rng::new(0xacce97);
    let mut accepted = 0;
    let mut attempts = 0;
    while accepted < 200 {
        attempts += 1;
        assert!(attempts < 20_000);
        let m = 1 + rng.index(3);
        let depth = 1 + rng.index(6);
        let e = random_expr(&mut rng, depth, m);
        let x: Vec<f64> = (0..m).map(|_| rng.uniform(0.6, 1.6)).collect();
        let jet = match eval_jet2(&e, &x) {
            Ok(j) => j,
            Err(_) => continue,
        };
        if jet.value.abs() > 50.0
            || jet.grad.iter().any(|g| g.abs() > 50.0)
            || jet.hess.iter().any(|h| h.abs() > 50.0)
        {
            continue;
        }
        let f = |q: &[f64]| e.eval(q);
        let (Ok(g1), Ok(h1)) = (fd::grad_central(&f, &x, 1e-4), fd::hess_central(&f, &x, 1e-4))
        else {
            continue;
        };
        let (Ok(g2), Ok(h2)) = (fd::grad_central(&f, &x, 0.5e-4), fd::hess_central(&f, &x, 0.5e-4))
        else {
            continue;
        };
        let conv = g1.iter().zip(&g2).all(|(a, b)| (a - b).abs() <= 0.3e-6 * (1.0 + a.abs()))
            && h1
                .iter()
                .flatten()
                .zip(h2.iter().flatten())
                .all(|(a, b)| (a - b).abs() <= 0.3e-4 * (1.0 + a.abs()));
        if !conv {
            continue;
        }
        accepted += 1;
        for i in 0..m {
            assert!((jet.grad[i] - g1[i]).abs() <= 1e-6 * (1.0 + g1[i].abs()), "{}", e.print());
            for j in 0..m {
                assert!(
                    (jet.hess_at(i, j) - h1[i][j]).abs() <= 1e-4 * (1.0 + h1[i][j].abs()),
                    "{}",
                    e.print()
                );
            }
        }
    }
    println!("ACCEPTANCE 10 parser and jets: PASS");
}

fn random_expr(rng: &mut Rng, depth: usize, m: usize) -> Expression<f64> {
    if depth == 0 {
        return if rng.next_f64() < 0.65 {
            Expression::Var(rng.index(m))
        } else {
            Expression::Const(rng.uniform(0.5, 2.0))
        };
    }
    let sub = |rng: &mut Rng| Box::new(random_expr(rng, depth - 1, m));
    match rng.index(10) {
        0 => Expression::Add(sub(rng), sub(rng)),
        1 => Expression::Sub(sub(rng), sub(rng)),
        2 => Expression::Mul(sub(rng), sub(rng)),
        3 => Expression::Div(sub(rng), sub(rng)),
        4 => Expression::Neg(sub(rng)),
        5 => Expression::Pow(sub(rng), [2, 3, -1][rng.index(3)]),
        6 => Expression::Apply(Func::Sin, sub(rng)),
        7 => Expression::Apply(Func::Cos, sub(rng)),
        8 => Expression::Apply(Func::Exp, sub(rng)),
        _ => {
            if rng.next_f64() < 0.5 {
                Expression::Apply(Func::Log, sub(rng))
            } else {
                Expression::Apply(Func::Sqrt, sub(rng))
            }
        }
    }
}

#[test]
fn criterion_11_cli_determinism_and_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_chenricci");
    let dir = std::env::temp_dir().join("chenricci-acceptance");
    std::fs::create_dir_all(&dir).unwrap();

    let good = dir.join("good.json");
    std::fs::write(
        &good,
        r#"{
  "problem": {"catalog": {"id": "euclid_proj", "params": {"m": 3, "n": 2}}},
  "checks": ["GFCRV", "GFCRH", "GFCRVH"],
  "points": {"sampler": {"count": 5, "seed": 99}}
}"#,
    )
    .unwrap();
    let out1 = dir.join("r1.json");
    let out2 = dir.join("r2.json");
    let run = |out: &std::path::Path| {
        Command::new(bin)
            .args(["verify"])
            .arg(&good)
            .args(["--seed", "99", "--no-timestamp", "--out"])
            .arg(out)
            .status()
            .unwrap()
    };
    let s1 = run(&out1);
    let s2 = run(&out2);
    assert_eq!(s1.code(), Some(0));
    assert_eq!(s2.code(), Some(0));
    let b1 = std::fs::read(&out1).unwrap();
    let b2 = std::fs::read(&out2).unwrap();
    assert_eq!(b1, b2, "reports must be byte-identical");
    // 15 verdicts expected: 5 points x 3 theorems, all equalities
    let report: serde_json::Value = serde_json::from_slice(&b1).unwrap();
    assert_eq!(report["summary"]["checked"], 15);
    assert_eq!(report["summary"]["equalities"], 15);
    assert_eq!(report["summary"]["violations"], 0);

    // violation fixture: corrupted rhs flips the verdicts -> exit 1
    let corrupt = dir.join("corrupt.json");
    std::fs::write(
        &corrupt,
        r#"{
  "problem": {"catalog": {"id": "euclid_proj", "params": {"m": 3, "n": 2}}},
  "checks": ["GFCRV"],
  "points": {"sampler": {"count": 2, "seed": 5}},
  "test_corrupt_rhs": -10.0
}"#,
    )
    .unwrap();
    let status = Command::new(bin)
        .args(["verify"])
        .arg(&corrupt)
        .args(["--no-timestamp", "--out"])
        .arg(dir.join("corrupt-report.json"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1), "violations must exit 1");

    // malformed expression in an inline config -> exit 2 with a position
    let bad = dir.join("bad.json");
    std::fs::write(
        &bad,
        r#"{
  "problem": {"inline": {
    "source": {"dim": 2, "lo": [-1, -1], "hi": [1, 1],
               "metric": [["1", "0"], ["0", "1+x1*+2"]]},
    "target": {"dim": 1, "lo": [-2], "hi": [2], "metric": [["1"]]},
    "map": ["x1"]
  }},
  "checks": ["GFCRV"]
}"#,
    )
    .unwrap();
    let output = Command::new(bin).args(["verify"]).arg(&bad).output().unwrap();
    assert_eq!(output.status.code(), Some(2), "config errors must exit 2");
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("offset 5"), "diagnostic must carry the offset: {stderr}");
    println!("ACCEPTANCE 11 CLI determinism and exit codes: PASS");
}
