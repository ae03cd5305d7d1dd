//! Every catalog entry's `known` record asserted against the full pipeline
//! at 20 seeded sample points.

use std::collections::BTreeMap;

use chenricci_core::catalog::{self, CatalogProblem};
use chenricci_core::inequality::{classify_submersion, XiPosition};
use chenricci_core::rmap::{analyze_map, MapAnalysisOptions};
use chenricci_core::spaceform::conformance_check;
use chenricci_core::submersion::{analyze, AnalysisOptions};

fn params(kv: &[(&str, f64)]) -> BTreeMap<String, f64> {
    kv.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

const POINTS: usize = 20;

#[test]
fn chart_entries_knowns() {
    for (id, ps) in [
        ("fubini_study", vec![("n", 1.0)]),
        ("fubini_study", vec![("n", 2.0)]),
        ("sasakian_sphere", vec![("n", 1.0)]),
        ("sasakian_sphere", vec![("n", 2.0)]),
        ("poincare", vec![("n", 2.0), ("c", -1.0)]),
        ("round_sphere", vec![("n", 2.0), ("c", 4.0)]),
    ] {
        let entry = catalog::get::<f64>(id, &params(&ps)).unwrap();
        let chart = match &entry.problem {
            CatalogProblem::Chart(c) => c,
            _ => unreachable!(),
        };
        let points = chart.sample_points(POINTS, 909);
        for p in &points {
            assert!(chart.contains(p));
            chart.metric_at(p).unwrap(); // symmetric positive-definite
            let res = chart.structure_residual(p).unwrap();
            assert!(res <= 1e-8, "{id}: structure residual {res}");
        }
        let spec = entry.known.spaceform.unwrap();
        let res = conformance_check(chart, &spec, &points[..6], 20, 910).unwrap();
        assert!(res <= 1e-6, "{id}: conformance {res}");
    }
}

#[test]
fn submersion_entries_knowns() {
    let cases: Vec<(&str, Vec<(&str, f64)>)> = vec![
        ("euclid_proj", vec![("m", 4.0), ("n", 2.0)]),
        ("hopf", vec![]),
        ("warped_radial", vec![]),
        ("hopf_contact", vec![]),
        ("flat_slant_sub", vec![("theta", 0.7)]),
    ];
    for (id, ps) in &cases {
        let entry = catalog::get::<f64>(id, &params(ps)).unwrap();
        let prob = match &entry.problem {
            CatalogProblem::Submersion(s) => s,
            _ => unreachable!(),
        };
        let known = &entry.known;
        let opts = AnalysisOptions { fiber: known.fiber, ..Default::default() };
        for p in prob.source.sample_points(POINTS, 911) {
            let an = analyze(prob, &p, &opts).unwrap();
            assert!(an.property_residual <= 1e-6, "{id}: O'Neill identities");
            if known.t_vanishes {
                assert!(an.max_t_abs() <= 1e-7, "{id}: T = {:?}", an.max_t_abs());
            }
            if known.a_vanishes {
                assert!(an.max_a_abs() <= 1e-7, "{id}: A = {:?}", an.max_a_abs());
            }
            if let Some(h_norm) = known.h_norm {
                let want = h_norm(&p);
                assert!(
                    (an.h_norm_sq.sqrt() - want).abs() <= 1e-6 * (1.0 + want),
                    "{id}: |H| = {} vs {want}",
                    an.h_norm_sq.sqrt()
                );
            }
            if let Some(base) = known.base_sec {
                // Ric of the base at h1 over an r-frame: (r-1) * base for
                // constant base curvature
                let want = base * (an.r as f64 - 1.0);
                assert!(
                    (an.ric_h_perp - want).abs() <= 1e-5 * (1.0 + want.abs()),
                    "{id}: ric_h_perp {} vs {want}",
                    an.ric_h_perp
                );
            }
            if let Some(xi_vertical) = known.xi_vertical {
                let cls = classify_submersion(prob, &an, None, 912).unwrap();
                assert_eq!(
                    cls.xi_position == XiPosition::Vertical,
                    xi_vertical,
                    "{id}: xi position"
                );
            }
            if let Some(class) = known.expected_class {
                let cls = classify_submersion(prob, &an, None, 913).unwrap();
                assert_eq!(cls.kind, class, "{id}");
                if let Some(theta) = known.slant_angle {
                    assert!((cls.theta.unwrap() - theta).abs() <= 1e-6, "{id}");
                }
            }
        }
    }
}

#[test]
fn map_entries_knowns() {
    for id in ["flat_cylinder_map", "cylinder_graph_map"] {
        let entry = catalog::get_simple::<f64>(id).unwrap();
        let prob = match &entry.problem {
            CatalogProblem::Map(m) => m,
            _ => unreachable!(),
        };
        for p in prob.source.sample_points(POINTS, 914) {
            let ma = analyze_map(prob, &p, &MapAnalysisOptions::default()).unwrap();
            assert!(ma.isometry_residual <= 1e-8, "{id}");
            assert!(ma.b_symmetry_residual <= 1e-7, "{id}");
            assert!(ma.b_range_residual <= 1e-7, "{id}");
            assert!(ma.gauss_residual <= 1e-6, "{id}");
            if let Some(tb) = entry.known.trace_b_sq {
                assert!(
                    (ma.norm_trace_b_sq - tb).abs() <= 1e-6 * (1.0 + tb),
                    "{id}: |trace B|^2 = {}",
                    ma.norm_trace_b_sq
                );
            }
        }
    }
}
