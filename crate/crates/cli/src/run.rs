//! Orchestration: fan out over (point, theorem), merge deterministically.

use chenricci_core::catalog::{CatalogEntry, CatalogProblem};
use chenricci_core::inequality::{self as ineq, InequalityVerdict, StructureClass};
use chenricci_core::linalg::Vector;
use chenricci_core::rmap::{analyze_map, MapAnalysis, MapAnalysisOptions, RMapProblem};
use chenricci_core::rng::Rng;
use chenricci_core::spaceform::{conformance_check, SpaceFormKind};
use chenricci_core::submersion::{analyze, AnalysisOptions, SubmersionProblem};

use crate::config::{ConfigError, PointsConfig, RunConfig};
use crate::report::{
    ClassifierRecord, ConformanceRecord, Report, SignProfileRecord, VerdictRecord,
};

pub struct RunOutcome {
    pub report: Report,
    pub exit_code: i32,
}

const CONFORMANCE_TUPLES: usize = 50;

pub fn run(
    config: RunConfig,
    seed_override: Option<u64>,
    samples_override: Option<usize>,
    with_timestamp: bool,
    audit_only: bool,
) -> Result<RunOutcome, ConfigError> {
    let entry = config.build_problem()?;
    let (points, seed) = resolve_points(&config, &entry, seed_override, samples_override)?;

    let mut report = Report {
        config: config.clone(),
        seed,
        sign_profile: None,
        conformance: vec![],
        classifier: None,
        verdicts: vec![],
        summary: Default::default(),
        notes: vec![],
        timestamp: with_timestamp.then(timestamp),
    };

    let spec = config.spaceform_spec(&entry.known.spaceform)?;

    // Conformance stage (audit mode, or whenever a space form is declared
    // for a chart problem).
    if let Some(spec) = &spec {
        let chart = match &entry.problem {
            CatalogProblem::Chart(c) => Some(c),
            CatalogProblem::Submersion(s) => Some(&s.source),
            CatalogProblem::Map(m) => Some(&m.target),
        };
        if let Some(chart) = chart {
            if audit_only || matches!(entry.problem, CatalogProblem::Chart(_)) {
                let res = conformance_check(chart, spec, &points, CONFORMANCE_TUPLES, seed ^ 0xc0f)
                    .map_err(|e| ConfigError(format!("conformance: {e}")))?;
                report.conformance.push(ConformanceRecord {
                    kind: format!("{:?}", spec.kind),
                    c1: spec.c1,
                    c2: spec.c2,
                    c3: spec.c3,
                    max_residual: res,
                    tuples_per_point: CONFORMANCE_TUPLES,
                    passed: res <= config.tolerances.conformance,
                });
            }
        }
    }

    match &entry.problem {
        CatalogProblem::Chart(_) => {
            if !audit_only && !config.checks.is_empty() {
                return Err(ConfigError(
                    "checks: inequality checks need a submersion or map problem; \
                     this catalog id builds a plain chart"
                        .into(),
                ));
            }
        }
        CatalogProblem::Submersion(prob) => {
            run_submersion(&config, &entry, prob, &points, seed, audit_only, &mut report)?;
        }
        CatalogProblem::Map(prob) => {
            run_map(&config, &entry, prob, &points, seed, audit_only, &mut report)?;
        }
    }

    // Deterministic merge order: (point index, theorem id, case).
    let order: Vec<String> = points.iter().map(|p| format!("{p:?}")).collect();
    report.verdicts.sort_by(|a, b| {
        let ia = order.iter().position(|p| *p == format!("{:?}", a.point)).unwrap_or(usize::MAX);
        let ib = order.iter().position(|p| *p == format!("{:?}", b.point)).unwrap_or(usize::MAX);
        ia.cmp(&ib)
            .then_with(|| a.theorem_id.cmp(&b.theorem_id))
            .then_with(|| a.case.cmp(&b.case))
            .then_with(|| a.notes.cmp(&b.notes))
    });
    report.summarize();
    let exit_code = if report.summary.violations > 0 { 1 } else { 0 };
    Ok(RunOutcome { report, exit_code })
}

fn resolve_points(
    config: &RunConfig,
    entry: &CatalogEntry<f64>,
    seed_override: Option<u64>,
    samples_override: Option<usize>,
) -> Result<(Vec<Vec<f64>>, u64), ConfigError> {
    match &config.points {
        PointsConfig::Explicit(pts) => Ok((pts.clone(), seed_override.unwrap_or(0))),
        PointsConfig::Sampler { count, seed } => {
            let seed = seed_override.unwrap_or(*seed);
            let count = samples_override.unwrap_or(*count);
            Ok((entry.sample_points(count, seed), seed))
        }
    }
}

/// Apply the test-only rhs corruption and any equality-tolerance override,
/// re-deriving holds/equality from the slack.
fn apply_overrides(config: &RunConfig, verdicts: &mut Vec<InequalityVerdict<f64>>) {
    let corrupt = config.test_corrupt_rhs;
    let scale = config.tolerances.tol_eq_scale;
    if corrupt.is_none() && scale == 1e-6 {
        return;
    }
    for v in verdicts.iter_mut() {
        if let Some(delta) = corrupt {
            v.rhs += delta;
            v.notes.push(format!("rhs corrupted by {delta} (test hook)"));
        }
        v.slack = v.lhs - v.rhs;
        let tol = scale * (1.0 + v.lhs.abs() + v.rhs.abs());
        v.holds = match v.direction {
            ineq::Direction::Ge => v.slack >= -tol,
            ineq::Direction::Le => v.slack <= tol,
        };
        v.equality = v.slack.abs() <= tol;
    }
}

fn run_submersion(
    config: &RunConfig,
    entry: &CatalogEntry<f64>,
    prob: &SubmersionProblem<f64>,
    points: &[Vec<f64>],
    seed: u64,
    audit_only: bool,
    report: &mut Report,
) -> Result<(), ConfigError> {
    let spec = config.spaceform_spec(&entry.known.spaceform)?;
    let opts = AnalysisOptions {
        v1_index: config.designations.v1_index,
        h1_index: config.designations.h1_index,
        fiber: entry.known.fiber,
    };
    let mut profile: Option<SignProfileRecord> = None;
    for p in points {
        let an = analyze(prob, p, &opts).map_err(|e| ConfigError(format!("analysis at {p:?}: {e}")))?;
        let rec = SignProfileRecord::from_core(&an.sign_profile);
        if let Some(prev) = &profile {
            if (prev.s23, prev.s24, prev.s25) != (rec.s23, rec.s24, rec.s25) {
                report
                    .notes
                    .push("sign profile flipped between points; check rank stability".into());
            }
        }
        profile = Some(rec);

        if audit_only {
            continue;
        }

        let needs_class = config
            .checks
            .iter()
            .any(|c| matches!(c.as_str(), "CRI-GCSF" | "CRI-GSSF" | "STRUCT-SUB"));
        let cls: Option<StructureClass<f64>> = if needs_class {
            let cls = ineq::classify_submersion(prob, &an, config.designations.d1_dim, seed ^ 0xc1a5)
                .map_err(|e| ConfigError(format!("classification at {p:?}: {e}")))?;
            report.classifier = Some(classifier_record(&cls));
            Some(cls)
        } else {
            None
        };

        let mut verdicts: Vec<InequalityVerdict<f64>> = vec![];
        for check in &config.checks {
            match check.as_str() {
                "GFCRV" => verdicts.push(ineq::verify_gfcrv(&an)),
                "GFCRH" => verdicts.push(ineq::verify_gfcrh(&an)),
                "GFCRVH" => verdicts.push(ineq::verify_gfcrvh(&an)),
                "CRI-GCSF" => {
                    let spec = spec.ok_or_else(|| {
                        ConfigError("CRI-GCSF needs a spaceform declaration".into())
                    })?;
                    verdicts.extend(
                        ineq::verify_cri_gcsf(&an, cls.as_ref().unwrap(), &spec)
                            .map_err(|e| ConfigError(format!("CRI-GCSF: {e}")))?,
                    );
                }
                "CRI-GSSF" => {
                    let spec = spec.ok_or_else(|| {
                        ConfigError("CRI-GSSF needs a spaceform declaration".into())
                    })?;
                    verdicts.extend(
                        ineq::verify_cri_gssf(&an, cls.as_ref().unwrap(), &spec)
                            .map_err(|e| ConfigError(format!("CRI-GSSF: {e}")))?,
                    );
                }
                "STRUCT-SUB" => {
                    let spec = spec.ok_or_else(|| {
                        ConfigError("STRUCT-SUB needs a spaceform declaration".into())
                    })?;
                    verdicts.extend(
                        ineq::verify_struct_sub(&an, cls.as_ref().unwrap(), &spec)
                            .map_err(|e| ConfigError(format!("STRUCT-SUB: {e}")))?,
                    );
                }
                other => {
                    return Err(ConfigError(format!(
                        "check `{other}` does not apply to a submersion problem"
                    )))
                }
            }
        }
        apply_overrides(config, &mut verdicts);
        report.verdicts.extend(verdicts.into_iter().map(VerdictRecord::from_core));
    }
    report.sign_profile = profile;
    Ok(())
}

fn run_map(
    config: &RunConfig,
    entry: &CatalogEntry<f64>,
    prob: &RMapProblem<f64>,
    points: &[Vec<f64>],
    seed: u64,
    audit_only: bool,
    report: &mut Report,
) -> Result<(), ConfigError> {
    let spec = config.spaceform_spec(&entry.known.spaceform)?;
    let opts = MapAnalysisOptions { h1_index: config.designations.h1_index, ..Default::default() };
    for p in points {
        let ma =
            analyze_map(prob, p, &opts).map_err(|e| ConfigError(format!("analysis at {p:?}: {e}")))?;
        if report.sign_profile.is_none() {
            report.sign_profile = Some(SignProfileRecord {
                s23: 0,
                s24: 0,
                s25: ma.gauss_sign,
                residuals: [0.0, 0.0, ma.gauss_residual],
                determined: [false, false, true],
            });
            report
                .notes
                .push("map problem: sign slot s25 carries the Gauss-equation sign".into());
        }
        if audit_only {
            continue;
        }
        let needs_class = config
            .checks
            .iter()
            .any(|c| matches!(c.as_str(), "COR-CRI" | "COR-ICRI"))
            && spec.map_or(false, |s| s.kind != SpaceFormKind::Real);
        let cls = if needs_class {
            match ineq::classify_map(prob, &ma, config.designations.d1_dim, seed ^ 0xc1a5) {
                Ok(cls) => {
                    report.classifier = Some(classifier_record(&cls));
                    Some(cls)
                }
                Err(_) => None, // structure-free target: norms default to zero
            }
        } else {
            None
        };
        let mut verdicts: Vec<InequalityVerdict<f64>> = vec![];
        for check in &config.checks {
            match check.as_str() {
                "RM-CRI" => verdicts.push(ineq::verify_rm_cri(&ma)),
                "RM-ICRI" => verdicts.push(ineq::verify_rm_icri(&ma).0),
                "COR-CRI" | "COR-ICRI" => {
                    let spec = spec.ok_or_else(|| {
                        ConfigError(format!("{check} needs a spaceform declaration"))
                    })?;
                    verdicts.push(ineq::verify_corollary(
                        &ma,
                        &spec,
                        cls.as_ref(),
                        check == "COR-ICRI",
                    ));
                }
                other => {
                    return Err(ConfigError(format!(
                        "check `{other}` does not apply to a Riemannian-map problem"
                    )))
                }
            }
        }
        // "for any unit X" sweep over random unit horizontal vectors.
        let sweep = config.designations.sweep_unit_vectors;
        if sweep > 0 {
            let mut rng = Rng::new(seed ^ 0x5eeb);
            for k in 0..sweep {
                let coeffs: Vec<f64> = (0..ma.r).map(|_| rng.gaussian()).collect();
                if let Ok((ric_h, ric_r)) = ricci_pair_at(prob, &ma, &coeffs) {
                    for check in &config.checks {
                        let improved = match check.as_str() {
                            "RM-CRI" => false,
                            "RM-ICRI" => true,
                            _ => continue,
                        };
                        let w = if improved {
                            (ma.r as f64 - 1.0) / (4.0 * ma.r as f64)
                        } else {
                            0.25
                        };
                        let s = ma.gauss_sign as f64;
                        let rhs = ric_r + s * w * ma.norm_trace_b_sq;
                        verdicts.push(sweep_verdict(check, &ma, ric_h, rhs, k));
                    }
                }
            }
        }
        apply_overrides(config, &mut verdicts);
        report.verdicts.extend(verdicts.into_iter().map(VerdictRecord::from_core));
    }
    Ok(())
}

fn sweep_verdict(
    check: &str,
    ma: &MapAnalysis<f64>,
    lhs: f64,
    rhs: f64,
    k: usize,
) -> InequalityVerdict<f64> {
    let slack = lhs - rhs;
    let tol = 1e-6 * (1.0 + lhs.abs() + rhs.abs());
    let direction =
        if ma.gauss_sign >= 0 { ineq::Direction::Le } else { ineq::Direction::Ge };
    let holds = match direction {
        ineq::Direction::Ge => slack >= -tol,
        ineq::Direction::Le => slack <= tol,
    };
    InequalityVerdict {
        theorem_id: check.to_string(),
        case: Some(format!("sweep#{k}")),
        point: ma.point.clone(),
        lhs,
        rhs,
        slack,
        direction,
        holds,
        equality: slack.abs() <= tol,
        conditions_met: None,
        notes: vec!["random unit horizontal vector".into()],
    }
}

/// Ricci pair at an arbitrary horizontal vector X = sum c_i h_i (normalized).
fn ricci_pair_at(
    prob: &RMapProblem<f64>,
    ma: &MapAnalysis<f64>,
    coeffs: &[f64],
) -> Result<(f64, f64), chenricci_core::Error> {
    use chenricci_core::curvature::{riemann, DiffBackend};
    let mut x = Vector::zeros(ma.m1);
    for (c, h) in coeffs.iter().zip(&ma.horizontal.vectors) {
        x.axpy(*c, h);
    }
    let norm = ma.g1.norm(&x);
    let x = x.scale(1.0 / norm);
    let curv1 = riemann(&prob.source, &ma.point, DiffBackend::Jet)?;
    let curv2 = riemann(&prob.target, &ma.image, DiffBackend::Jet)?;
    let jac = prob.differential(&ma.point)?;
    let fx = jac.matvec(&x);
    let mut ric_h = 0.0;
    let mut ric_r = 0.0;
    for i in 0..ma.r {
        let hi = &ma.horizontal.vectors[i];
        let fhi = &ma.range.vectors[i];
        ric_h += curv1.pair(hi, &x, &x, hi);
        ric_r += curv2.pair(fhi, &fx, &fx, fhi);
    }
    Ok((ric_h, ric_r))
}

fn classifier_record(cls: &StructureClass<f64>) -> ClassifierRecord {
    ClassifierRecord {
        kind: cls.kind.as_str().into(),
        theta: cls.theta,
        slant_deviation: cls.slant_deviation,
        p_sq: cls.p_sq,
        ph1_sq: cls.ph1_sq,
        qv1_sq: cls.qv1_sq,
        xi_position: match cls.xi_position {
            ineq::XiPosition::Vertical => "vertical".into(),
            ineq::XiPosition::Horizontal => "horizontal".into(),
            ineq::XiPosition::NotApplicable => "n/a".into(),
        },
        eta_v1_sq: cls.eta_v1_sq,
        eta_h1_sq: cls.eta_h1_sq,
    }
}

fn timestamp() -> String {
    let now = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .unwrap_or_default();
    format!("{}.{:09}", now.as_secs(), now.subsec_nanos())
}
