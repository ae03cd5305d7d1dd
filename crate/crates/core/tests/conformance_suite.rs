//! Space-form conformance: chart curvature against the closed-form models.

use std::collections::BTreeMap;

use chenricci_core::catalog::{self, CatalogProblem};
use chenricci_core::spaceform::conformance_check;

fn params(kv: &[(&str, f64)]) -> BTreeMap<String, f64> {
    kv.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn chart_conformance(id: &str, ps: &[(&str, f64)], points: usize, tuples: usize) -> f64 {
    let entry = catalog::get::<f64>(id, &params(ps)).unwrap();
    let chart = match entry.problem {
        CatalogProblem::Chart(c) => c,
        _ => unreachable!(),
    };
    let spec = entry.known.spaceform.unwrap();
    let samples = chart.sample_points(points, 2024);
    conformance_check(&chart, &spec, &samples, tuples, 17).unwrap()
}

#[test]
fn fubini_study_cp1_matches_complex_model() {
    let res = chart_conformance("fubini_study", &[("n", 1.0)], 10, 50);
    assert!(res <= 1e-6, "residual {res}");
}

#[test]
fn fubini_study_cp2_matches_complex_model() {
    let res = chart_conformance("fubini_study", &[("n", 2.0)], 10, 50);
    assert!(res <= 1e-6, "residual {res}");
}

#[test]
fn round_spheres_match_real_model() {
    for (n, c) in [(2.0, 1.0), (3.0, 1.0), (3.0, 2.5), (4.0, 0.7)] {
        let res = chart_conformance("round_sphere", &[("n", n), ("c", c)], 6, 50);
        assert!(res <= 1e-6, "S^{n}({c}) residual {res}");
    }
}

#[test]
fn sasakian_spheres_match_contact_model() {
    for n in [1.0, 2.0] {
        let res = chart_conformance("sasakian_sphere", &[("n", n)], 8, 50);
        assert!(res <= 1e-6, "S^{} residual {res}", 2.0 * n + 1.0);
    }
}

#[test]
fn poincare_matches_negative_real_model() {
    let res = chart_conformance("poincare", &[("n", 2.0), ("c", -1.0)], 8, 50);
    assert!(res <= 1e-6, "residual {res}");
    let res = chart_conformance("poincare", &[("n", 3.0), ("c", -1.0)], 6, 50);
    assert!(res <= 1e-6, "residual {res}");
}
