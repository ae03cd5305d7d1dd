//! Parameterized example problems with analytically known constants; these
//! feed the conformance and acceptance suites.
//!
//! Charts avoid coordinate singularities by shrunken domains. All entries are
//! deterministic in their parameters.

use std::collections::BTreeMap;

use crate::chart::{ChartManifold, Structure};
use crate::error::{Error, Result};
use crate::expr::{parse, Expression};
use crate::inequality::StructureKind;
use crate::rmap::RMapProblem;
use crate::scalar::Real;
use crate::spaceform::{SpaceFormKind, SpaceFormSpec};
use crate::submersion::{FiberCurvature, SubmersionProblem};

#[derive(Debug, Clone)]
pub enum CatalogProblem<S> {
    Chart(ChartManifold<S>),
    Submersion(SubmersionProblem<S>),
    Map(RMapProblem<S>),
}

/// Analytically established facts about an entry, asserted by the suite.
#[derive(Debug, Clone)]
pub struct KnownFacts<S> {
    /// Space form the relevant chart conforms to (the chart itself, the
    /// submersion source, or the map target).
    pub spaceform: Option<SpaceFormSpec<S>>,
    pub fiber: Option<FiberCurvature<S>>,
    pub t_vanishes: bool,
    pub a_vanishes: bool,
    pub expected_class: Option<StructureKind>,
    pub slant_angle: Option<S>,
    pub xi_vertical: Option<bool>,
    /// |trace B|^2 for the map entries.
    pub trace_b_sq: Option<S>,
    /// Base sectional curvature seen through the submersion (when constant).
    pub base_sec: Option<S>,
    /// |H| of the fibers as a function of the base point, when known.
    pub h_norm: Option<fn(&[f64]) -> f64>,
}

impl<S> Default for KnownFacts<S> {
    fn default() -> Self {
        Self {
            spaceform: None,
            fiber: None,
            t_vanishes: false,
            a_vanishes: false,
            expected_class: None,
            slant_angle: None,
            xi_vertical: None,
            trace_b_sq: None,
            base_sec: None,
            h_norm: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CatalogEntry<S> {
    pub id: String,
    pub params: BTreeMap<String, f64>,
    pub problem: CatalogProblem<S>,
    pub known: KnownFacts<S>,
}

impl<S: Real> CatalogEntry<S> {
    /// Seeded interior points of the relevant source chart.
    pub fn sample_points(&self, count: usize, seed: u64) -> Vec<Vec<S>> {
        match &self.problem {
            CatalogProblem::Chart(c) => c.sample_points(count, seed),
            CatalogProblem::Submersion(s) => s.source.sample_points(count, seed),
            CatalogProblem::Map(m) => m.source.sample_points(count, seed),
        }
    }
}

/// One line per id: signature plus a short description.
pub fn list() -> Vec<(&'static str, &'static str)> {
    vec![
        ("euclid_proj(m,n)", "flat orthogonal projection R^m -> R^n; T = A = 0"),
        ("hopf", "Hopf submersion S^3(1) -> S^2(sec 4); totally geodesic fibers, |A_12|^2 = 1"),
        (
            "warped_radial",
            "radial distance R^3 minus origin -> R+; umbilic spherical fibers, |H| = 1/rho",
        ),
        ("fubini_study(n)", "complex projective chart with holomorphic sectional curvature 4"),
        ("sasakian_sphere(n)", "round S^{2n+1}(1) with its standard contact structure"),
        ("hopf_contact", "Hopf submersion from sasakian_sphere(1); Reeb field vertical"),
        ("flat_cylinder_map", "R^2 -> R^3 cylinder wrap; rank 1, |trace B|^2 = 1"),
        ("cylinder_graph_map", "R^3 -> R^3 cylinder graph; rank 2, only B_11 nonzero"),
        ("flat_slant_sub(theta)", "flat R^4 -> R^2 with fibers at J-angle theta"),
        ("poincare(n,c)", "conformal ball chart of constant negative curvature c"),
        ("round_sphere(n,c)", "conformal chart of the round sphere of curvature c > 0"),
    ]
}

fn ex<S: Real>(text: &str) -> Expression<S> {
    parse(text).unwrap_or_else(|e| panic!("catalog expression `{text}`: {e}"))
}

fn diag_metric<S: Real>(entries: &[&str]) -> Vec<Vec<Expression<S>>> {
    let d = entries.len();
    let mut m = vec![vec![Expression::constant(0.0); d]; d];
    for (i, t) in entries.iter().enumerate() {
        m[i][i] = ex(t);
    }
    m
}

fn param(params: &BTreeMap<String, f64>, name: &str) -> Result<f64> {
    params
        .get(name)
        .copied()
        .ok_or_else(|| Error::BadParams(format!("missing parameter `{name}`")))
}

fn int_param(params: &BTreeMap<String, f64>, name: &str, lo: usize, hi: usize) -> Result<usize> {
    let v = param(params, name)?;
    if v.fract() != 0.0 || v < lo as f64 || v > hi as f64 {
        return Err(Error::BadParams(format!("parameter `{name}` must be an integer in [{lo}, {hi}]")));
    }
    Ok(v as usize)
}

/// Conformal space-form chart: g_ij = delta_ij / (1 + (c/4) |x|^2)^2 has
/// constant sectional curvature c.
fn conformal_space_form<S: Real>(n: usize, c: f64, half_width: f64) -> ChartManifold<S> {
    let r2 = (1..=n).map(|i| format!("x{i}^2")).collect::<Vec<_>>().join("+");
    let factor = format!("1/(1+{:?}*({r2}))^2", c / 4.0);
    let mut metric = vec![vec![Expression::constant(0.0); n]; n];
    for (i, row) in metric.iter_mut().enumerate() {
        row[i] = ex(&factor);
    }
    ChartManifold {
        dim: n,
        lo: vec![S::of(-half_width); n],
        hi: vec![S::of(half_width); n],
        metric,
        structure: Structure::None,
    }
}

/// Stereographic chart of the round 2-sphere of radius a (curvature 1/a^2).
fn stereographic_sphere<S: Real>(a: f64, half_width: f64) -> ChartManifold<S> {
    let lam = format!("{:?}/({:?}+x1^2+x2^2)^2", 4.0 * a.powi(4), a * a);
    ChartManifold {
        dim: 2,
        lo: vec![S::of(-half_width); 2],
        hi: vec![S::of(half_width); 2],
        metric: diag_metric(&[&lam, &lam]),
        structure: Structure::None,
    }
}

/// Hopf coordinates on S^3(1): x1 in (0, pi/2), metric
/// diag(1, cos^2 x1, sin^2 x1); the fiber direction is d2 + d3.
fn hopf_chart_s3<S: Real>(with_contact: bool) -> ChartManifold<S> {
    let structure = if with_contact {
        Structure::Contact {
            phi: vec![
                vec![ex("0"), ex("sin(x1)*cos(x1)"), ex("-sin(x1)*cos(x1)")],
                vec![ex("-sin(x1)/cos(x1)"), ex("0"), ex("0")],
                vec![ex("cos(x1)/sin(x1)"), ex("0"), ex("0")],
            ],
            xi: vec![ex("0"), ex("1"), ex("1")],
            eta: vec![ex("0"), ex("cos(x1)^2"), ex("sin(x1)^2")],
        }
    } else {
        Structure::None
    };
    ChartManifold {
        dim: 3,
        lo: vec![S::of(0.5), S::of(0.2), S::of(0.2)],
        hi: vec![S::of(1.05), S::of(1.4), S::of(1.4)],
        metric: diag_metric(&["1", "cos(x1)^2", "sin(x1)^2"]),
        structure,
    }
}

/// The Hopf map in these coordinates, to the stereographic chart of S^2(1/2).
fn hopf_map<S: Real>() -> Vec<Expression<S>> {
    vec![
        ex("0.5*(cos(x1)/sin(x1))*cos(x2-x3)"),
        ex("0.5*(cos(x1)/sin(x1))*sin(x2-x3)"),
    ]
}

/// Generalized Hopf coordinates on S^5(1): (t1, t2, p1, p2, p3) with
/// radii r1 = cos t1, r2 = sin t1 cos t2, r3 = sin t1 sin t2.
fn sasakian_sphere_s5<S: Real>() -> ChartManifold<S> {
    // metric diag(1, sin^2 t1, cos^2 t1, sin^2 t1 cos^2 t2, sin^2 t1 sin^2 t2)
    let metric = diag_metric(&[
        "1",
        "sin(x1)^2",
        "cos(x1)^2",
        "sin(x1)^2*cos(x2)^2",
        "sin(x1)^2*sin(x2)^2",
    ]);
    // phi^i_j = W_ij / g_ii with W the pullback of the ambient Kahler pairing.
    let phi = vec![
        vec![
            ex("0"),
            ex("0"),
            ex("cos(x1)*sin(x1)"),
            ex("-sin(x1)*cos(x1)*cos(x2)^2"),
            ex("-sin(x1)*cos(x1)*sin(x2)^2"),
        ],
        vec![ex("0"), ex("0"), ex("0"), ex("sin(x2)*cos(x2)"), ex("-sin(x2)*cos(x2)")],
        vec![ex("-sin(x1)/cos(x1)"), ex("0"), ex("0"), ex("0"), ex("0")],
        vec![ex("cos(x1)/sin(x1)"), ex("-sin(x2)/cos(x2)"), ex("0"), ex("0"), ex("0")],
        vec![ex("cos(x1)/sin(x1)"), ex("cos(x2)/sin(x2)"), ex("0"), ex("0"), ex("0")],
    ];
    let xi = vec![ex("0"), ex("0"), ex("1"), ex("1"), ex("1")];
    let eta = vec![
        ex("0"),
        ex("0"),
        ex("cos(x1)^2"),
        ex("sin(x1)^2*cos(x2)^2"),
        ex("sin(x1)^2*sin(x2)^2"),
    ];
    ChartManifold {
        dim: 5,
        lo: vec![S::of(0.55), S::of(0.55), S::of(0.2), S::of(0.2), S::of(0.2)],
        hi: vec![S::of(1.0), S::of(1.0), S::of(1.2), S::of(1.2), S::of(1.2)],
        metric,
        structure: Structure::Contact { phi, xi, eta },
    }
}

/// Affine chart of CP^n with the Fubini-Study metric normalized to
/// holomorphic sectional curvature 4, real coordinates interleaved
/// (x1, x2) = (Re z1, Im z1), ...
fn fubini_study_chart<S: Real>(n: usize) -> ChartManifold<S> {
    let dim = 2 * n;
    let d: String = {
        let sq = (1..=dim).map(|i| format!("x{i}^2")).collect::<Vec<_>>().join("+");
        format!("(1+{sq})")
    };
    let re = |i: usize| format!("x{}", 2 * i - 1);
    let im = |i: usize| format!("x{}", 2 * i);
    let mut metric = vec![vec![Expression::constant(0.0); dim]; dim];
    for i in 1..=n {
        for j in 1..=n {
            // A_ij = (D delta_ij - (Re_i Re_j + Im_i Im_j)) / D^2
            let a_ij = if i == j {
                format!("({d}-({ri}*{rj}+{ii}*{ij}))/{d}^2", ri = re(i), rj = re(j), ii = im(i), ij = im(j))
            } else {
                format!("(0-({ri}*{rj}+{ii}*{ij}))/{d}^2", ri = re(i), rj = re(j), ii = im(i), ij = im(j))
            };
            // B_ij = -(Re_i Im_j - Im_i Re_j) / D^2
            let b_ij = format!("(0-({ri}*{ij}-{ii}*{rj}))/{d}^2", ri = re(i), ij = im(j), ii = im(i), rj = re(j));
            let (ri, ii) = (2 * i - 2, 2 * i - 1);
            let (rj, ij) = (2 * j - 2, 2 * j - 1);
            metric[ri][rj] = ex(&a_ij);
            metric[ii][ij] = ex(&a_ij);
            metric[ri][ij] = ex(&b_ij);
            metric[ij][ri] = ex(&b_ij);
        }
    }
    // standard complex structure: J d_{2i-1} = d_{2i}
    let mut jm = vec![vec![Expression::constant(0.0); dim]; dim];
    for k in 0..n {
        jm[2 * k + 1][2 * k] = Expression::constant(1.0);
        jm[2 * k][2 * k + 1] = Expression::constant(-1.0);
    }
    ChartManifold {
        dim,
        lo: vec![S::of(-0.35); dim],
        hi: vec![S::of(0.45); dim],
        metric,
        structure: Structure::Complex { j: jm },
    }
}

/// Build a catalog entry.
pub fn get<S: Real>(id: &str, params: &BTreeMap<String, f64>) -> Result<CatalogEntry<S>> {
    let entry = match id {
        "euclid_proj" => {
            let m = int_param(params, "m", 2, 8)?;
            let n = int_param(params, "n", 1, 7)?;
            if n >= m {
                return Err(Error::BadParams("need n < m".into()));
            }
            let map = (0..n).map(|i| ex(&format!("x{}", i + 1))).collect();
            CatalogEntry {
                id: id.into(),
                params: params.clone(),
                problem: CatalogProblem::Submersion(SubmersionProblem {
                    source: ChartManifold::flat(m, 2.0),
                    target: ChartManifold::flat(n, 3.0),
                    map,
                }),
                known: KnownFacts {
                    spaceform: Some(SpaceFormSpec::from_kind(SpaceFormKind::Real, S::zero(), S::zero())),
                    fiber: Some(FiberCurvature::Flat),
                    t_vanishes: true,
                    a_vanishes: true,
                    base_sec: Some(S::zero()),
                    h_norm: Some(|_| 0.0),
                    ..Default::default()
                },
            }
        }
        "hopf" => CatalogEntry {
            id: id.into(),
            params: params.clone(),
            problem: CatalogProblem::Submersion(SubmersionProblem {
                source: hopf_chart_s3(false),
                target: stereographic_sphere(0.5, 8.0),
                map: hopf_map(),
            }),
            known: KnownFacts {
                spaceform: Some(SpaceFormSpec::from_kind(SpaceFormKind::Real, S::one(), S::zero())),
                fiber: Some(FiberCurvature::Flat), // 1-dimensional fibers
                t_vanishes: true,
                a_vanishes: false,
                base_sec: Some(S::of(4.0)),
                h_norm: Some(|_| 0.0),
                ..Default::default()
            },
        },
        "warped_radial" => CatalogEntry {
            id: id.into(),
            params: params.clone(),
            problem: CatalogProblem::Submersion(SubmersionProblem {
                source: {
                    let mut c = ChartManifold::flat(3, 0.0);
                    c.lo = vec![S::of(0.15); 3];
                    c.hi = vec![S::of(2.2); 3];
                    c
                },
                target: {
                    let mut c = ChartManifold::flat(1, 0.0);
                    c.lo = vec![S::of(0.05)];
                    c.hi = vec![S::of(6.0)];
                    c
                },
                map: vec![ex("sqrt(x1^2+x2^2+x3^2)")],
            }),
            known: KnownFacts {
                spaceform: Some(SpaceFormSpec::from_kind(SpaceFormKind::Real, S::zero(), S::zero())),
                fiber: Some(FiberCurvature::SecAt(
                    |p| 1.0 / (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]),
                    std::marker::PhantomData,
                )),
                t_vanishes: false,
                a_vanishes: true,
                h_norm: Some(|p| 1.0 / (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt()),
                ..Default::default()
            },
        },
        "fubini_study" => {
            let n = int_param(params, "n", 1, 2)?;
            CatalogEntry {
                id: id.into(),
                params: params.clone(),
                problem: CatalogProblem::Chart(fubini_study_chart(n)),
                known: KnownFacts {
                    spaceform: Some(SpaceFormSpec::from_kind(SpaceFormKind::Complex, S::of(4.0), S::zero())),
                    ..Default::default()
                },
            }
        }
        "sasakian_sphere" => {
            let n = int_param(params, "n", 1, 2)?;
            let chart = if n == 1 { hopf_chart_s3(true) } else { sasakian_sphere_s5() };
            CatalogEntry {
                id: id.into(),
                params: params.clone(),
                problem: CatalogProblem::Chart(chart),
                known: KnownFacts {
                    spaceform: Some(SpaceFormSpec::from_kind(SpaceFormKind::Sasakian, S::one(), S::zero())),
                    ..Default::default()
                },
            }
        }
        "hopf_contact" => CatalogEntry {
            id: id.into(),
            params: params.clone(),
            problem: CatalogProblem::Submersion(SubmersionProblem {
                source: hopf_chart_s3(true),
                target: stereographic_sphere(0.5, 8.0),
                map: hopf_map(),
            }),
            known: KnownFacts {
                spaceform: Some(SpaceFormSpec::from_kind(SpaceFormKind::Sasakian, S::one(), S::zero())),
                fiber: Some(FiberCurvature::Flat),
                t_vanishes: true,
                a_vanishes: false,
                base_sec: Some(S::of(4.0)),
                xi_vertical: Some(true),
                expected_class: Some(StructureKind::Invariant),
                h_norm: Some(|_| 0.0),
                ..Default::default()
            },
        },
        "flat_cylinder_map" => CatalogEntry {
            id: id.into(),
            params: params.clone(),
            problem: CatalogProblem::Map(RMapProblem {
                source: ChartManifold::flat(2, 2.5),
                target: ChartManifold::flat(3, 2.5),
                map: vec![ex("cos(x1)"), ex("sin(x1)"), ex("0")],
                declared_rank: 1,
            }),
            known: KnownFacts {
                spaceform: Some(SpaceFormSpec::from_kind(SpaceFormKind::Real, S::zero(), S::zero())),
                trace_b_sq: Some(S::one()),
                ..Default::default()
            },
        },
        "cylinder_graph_map" => CatalogEntry {
            id: id.into(),
            params: params.clone(),
            problem: CatalogProblem::Map(RMapProblem {
                source: ChartManifold::flat(3, 2.5),
                target: ChartManifold::flat(3, 2.5),
                map: vec![ex("cos(x1)"), ex("sin(x1)"), ex("x2")],
                declared_rank: 2,
            }),
            known: KnownFacts {
                spaceform: Some(SpaceFormSpec::from_kind(SpaceFormKind::Real, S::zero(), S::zero())),
                trace_b_sq: Some(S::one()),
                ..Default::default()
            },
        },
        "flat_slant_sub" => {
            let theta = param(params, "theta")?;
            if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
                return Err(Error::BadParams("theta must lie in [0, pi/2]".into()));
            }
            // fibers span {e1, cos t e2 + sin t e3}; the projection onto the
            // orthogonal complement span {-sin t e2 + cos t e3, e4} is a flat
            // Riemannian submersion whose fibers sit at J-angle theta.
            let (s, c) = theta.sin_cos();
            let mut source = ChartManifold::flat(4, 2.0);
            let mut jm = vec![vec![Expression::constant(0.0); 4]; 4];
            for k in 0..2 {
                jm[2 * k + 1][2 * k] = Expression::constant(1.0);
                jm[2 * k][2 * k + 1] = Expression::constant(-1.0);
            }
            source.structure = Structure::Complex { j: jm };
            let expected = if theta == 0.0 {
                StructureKind::Invariant
            } else if theta == std::f64::consts::FRAC_PI_2 {
                StructureKind::AntiInvariant
            } else {
                StructureKind::Slant
            };
            CatalogEntry {
                id: id.into(),
                params: params.clone(),
                problem: CatalogProblem::Submersion(SubmersionProblem {
                    source,
                    target: ChartManifold::flat(2, 4.0),
                    map: vec![
                        ex(&format!("{c:?}*x3-{s:?}*x2")),
                        ex("x4"),
                    ],
                }),
                known: KnownFacts {
                    spaceform: Some(SpaceFormSpec::from_kind(SpaceFormKind::Complex, S::zero(), S::zero())),
                    fiber: Some(FiberCurvature::Flat),
                    t_vanishes: true,
                    a_vanishes: true,
                    expected_class: Some(expected),
                    slant_angle: Some(S::of(theta)),
                    base_sec: Some(S::zero()),
                    h_norm: Some(|_| 0.0),
                    ..Default::default()
                },
            }
        }
        "poincare" => {
            let n = int_param(params, "n", 2, 5)?;
            let c = param(params, "c")?;
            if !(-4.0..0.0).contains(&c) {
                return Err(Error::BadParams("need c in [-4, 0)".into()));
            }
            CatalogEntry {
                id: id.into(),
                params: params.clone(),
                problem: CatalogProblem::Chart(conformal_space_form(n, c, 0.6)),
                known: KnownFacts {
                    spaceform: Some(SpaceFormSpec::from_kind(SpaceFormKind::Real, S::of(c), S::zero())),
                    ..Default::default()
                },
            }
        }
        "round_sphere" => {
            let n = int_param(params, "n", 2, 5)?;
            let c = param(params, "c")?;
            if !(0.0..=4.0).contains(&c) || c == 0.0 {
                return Err(Error::BadParams("need c in (0, 4]".into()));
            }
            CatalogEntry {
                id: id.into(),
                params: params.clone(),
                problem: CatalogProblem::Chart(conformal_space_form(n, c, 0.6)),
                known: KnownFacts {
                    spaceform: Some(SpaceFormSpec::from_kind(SpaceFormKind::Real, S::of(c), S::zero())),
                    ..Default::default()
                },
            }
        }
        _ => return Err(Error::UnknownId(id.into())),
    };
    match &entry.problem {
        CatalogProblem::Chart(c) => c.validate()?,
        CatalogProblem::Submersion(s) => s.validate()?,
        CatalogProblem::Map(m) => m.validate()?,
    }
    Ok(entry)
}

/// Convenience for ids with no parameters.
pub fn get_simple<S: Real>(id: &str) -> Result<CatalogEntry<S>> {
    get(id, &BTreeMap::new())
}
