//! JSON run configuration.
//!
//! The schema is published in `docs/config.schema.json`; this module mirrors
//! it with serde and turns a parsed config into core problem values.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use chenricci_core::catalog::{self, CatalogEntry, CatalogProblem};
use chenricci_core::chart::{ChartManifold, Structure};
use chenricci_core::expr::parse;
use chenricci_core::rmap::RMapProblem;
use chenricci_core::spaceform::{SpaceFormKind, SpaceFormSpec};
use chenricci_core::submersion::SubmersionProblem;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemConfig,
    pub checks: Vec<String>,
    #[serde(default)]
    pub points: PointsConfig,
    #[serde(default)]
    pub designations: Designations,
    /// Space form backing the CRI-* / STRUCT-SUB / COR-* right-hand sides;
    /// defaults to the catalog entry's known space form when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spaceform: Option<SpaceFormConfig>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputConfig>,
    /// Test-only hook: adds a constant to every right-hand side so the
    /// violation path (exit code 1) can be exercised deliberately.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub test_corrupt_rhs: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemConfig {
    Catalog {
        id: String,
        #[serde(default)]
        params: BTreeMap<String, f64>,
    },
    Inline(Box<InlineProblem>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InlineProblem {
    pub source: ChartConfig,
    pub target: ChartConfig,
    pub map: Vec<String>,
    /// Present for a Riemannian-map problem; absent means submersion.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_rank: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartConfig {
    pub dim: usize,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    /// dim x dim matrix of expressions in x1..x{dim}.
    pub metric: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<StructureConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StructureConfig {
    Complex { j: Vec<Vec<String>> },
    Contact { phi: Vec<Vec<String>>, xi: Vec<String>, eta: Vec<String> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointsConfig {
    Explicit(Vec<Vec<f64>>),
    Sampler { count: usize, seed: u64 },
}

impl Default for PointsConfig {
    fn default() -> Self {
        PointsConfig::Sampler { count: 5, seed: 7 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Designations {
    #[serde(default)]
    pub v1_index: usize,
    #[serde(default)]
    pub h1_index: usize,
    /// Sample this many random unit horizontal vectors for the
    /// "for any unit X" map bounds (0 = designated index only).
    #[serde(default)]
    pub sweep_unit_vectors: usize,
    /// Declared D1 dimension for the mixed structure classes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d1_dim: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFormConfig {
    pub kind: String,
    #[serde(default)]
    pub c: f64,
    #[serde(default)]
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c3: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Scale of the equality tolerance tol_eq = scale * (1 + |lhs| + |rhs|).
    #[serde(default = "default_tol_eq_scale")]
    pub tol_eq_scale: f64,
    /// Conformance residual bound used by the audit subcommand.
    #[serde(default = "default_conformance_tol")]
    pub conformance: f64,
}

fn default_tol_eq_scale() -> f64 {
    1e-6
}

fn default_conformance_tol() -> f64 {
    1e-6
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { tol_eq_scale: default_tol_eq_scale(), conformance: default_conformance_tol() }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default = "default_format")]
    pub format: String,
}

fn default_format() -> String {
    "json".into()
}

/// A config error carrying a field-level diagnostic. Maps to exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig = serde_json::from_str(text)
            .map_err(|e| ConfigError(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        for check in &self.checks {
            if !chenricci_core::inequality::ALL_THEOREM_IDS.contains(&check.as_str()) {
                return Err(ConfigError(format!(
                    "checks: unknown theorem id `{check}` (known: {})",
                    chenricci_core::inequality::ALL_THEOREM_IDS.join(", ")
                )));
            }
        }
        if let PointsConfig::Explicit(pts) = &self.points {
            if pts.is_empty() {
                return Err(ConfigError("points.explicit: must not be empty".into()));
            }
        }
        Ok(())
    }

    /// Materialize the problem (plus known facts for catalog entries).
    pub fn build_problem(&self) -> Result<CatalogEntry<f64>, ConfigError> {
        match &self.problem {
            ProblemConfig::Catalog { id, params } => catalog::get::<f64>(id, params)
                .map_err(|e| ConfigError(format!("problem.catalog: {e}"))),
            ProblemConfig::Inline(inline) => {
                let source = build_chart(&inline.source, "problem.inline.source")?;
                let target = build_chart(&inline.target, "problem.inline.target")?;
                let map = inline
                    .map
                    .iter()
                    .enumerate()
                    .map(|(i, m)| {
                        parse::<f64>(m).map_err(|e| {
                            ConfigError(format!("problem.inline.map[{i}]: {e}"))
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let problem = match inline.declared_rank {
                    Some(r) => {
                        let prob = RMapProblem { source, target, map, declared_rank: r };
                        prob.validate()
                            .map_err(|e| ConfigError(format!("problem.inline: {e}")))?;
                        CatalogProblem::Map(prob)
                    }
                    None => {
                        let prob = SubmersionProblem { source, target, map };
                        prob.validate()
                            .map_err(|e| ConfigError(format!("problem.inline: {e}")))?;
                        CatalogProblem::Submersion(prob)
                    }
                };
                Ok(CatalogEntry {
                    id: "inline".into(),
                    params: BTreeMap::new(),
                    problem,
                    known: Default::default(),
                })
            }
        }
    }

    pub fn spaceform_spec(
        &self,
        known: &Option<SpaceFormSpec<f64>>,
    ) -> Result<Option<SpaceFormSpec<f64>>, ConfigError> {
        match &self.spaceform {
            None => Ok(*known),
            Some(sf) => {
                let kind = match sf.kind.as_str() {
                    "real" => SpaceFormKind::Real,
                    "complex" => SpaceFormKind::Complex,
                    "real_kahler" => SpaceFormKind::RealKahler,
                    "sasakian" => SpaceFormKind::Sasakian,
                    "kenmotsu" => SpaceFormKind::Kenmotsu,
                    "cosymplectic" => SpaceFormKind::Cosymplectic,
                    "c_alpha" => SpaceFormKind::CAlpha,
                    "generalized_complex" => SpaceFormKind::GeneralizedComplex,
                    "generalized_sasakian" => SpaceFormKind::GeneralizedSasakian,
                    other => {
                        return Err(ConfigError(format!("spaceform.kind: unknown kind `{other}`")))
                    }
                };
                let spec = match kind {
                    SpaceFormKind::GeneralizedComplex => SpaceFormSpec::generalized_complex(
                        sf.c1.ok_or_else(|| ConfigError("spaceform.c1 required".into()))?,
                        sf.c2.ok_or_else(|| ConfigError("spaceform.c2 required".into()))?,
                    ),
                    SpaceFormKind::GeneralizedSasakian => SpaceFormSpec::generalized_sasakian(
                        sf.c1.ok_or_else(|| ConfigError("spaceform.c1 required".into()))?,
                        sf.c2.ok_or_else(|| ConfigError("spaceform.c2 required".into()))?,
                        sf.c3.ok_or_else(|| ConfigError("spaceform.c3 required".into()))?,
                    ),
                    _ => SpaceFormSpec::from_kind(kind, sf.c, sf.alpha),
                };
                Ok(Some(spec))
            }
        }
    }
}

fn build_chart(cfg: &ChartConfig, path: &str) -> Result<ChartManifold<f64>, ConfigError> {
    if cfg.lo.len() != cfg.dim || cfg.hi.len() != cfg.dim {
        return Err(ConfigError(format!("{path}: lo/hi must have length dim = {}", cfg.dim)));
    }
    if cfg.metric.len() != cfg.dim || cfg.metric.iter().any(|row| row.len() != cfg.dim) {
        return Err(ConfigError(format!("{path}.metric: must be {0} x {0}", cfg.dim)));
    }
    let parse_mat = |m: &Vec<Vec<String>>, what: &str| {
        m.iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, t)| {
                        parse::<f64>(t).map_err(|e| {
                            ConfigError(format!("{path}.{what}[{i}][{j}]: {e}"))
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()
    };
    let parse_vec = |v: &Vec<String>, what: &str| {
        v.iter()
            .enumerate()
            .map(|(i, t)| {
                parse::<f64>(t)
                    .map_err(|e| ConfigError(format!("{path}.{what}[{i}]: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()
    };
    let metric = parse_mat(&cfg.metric, "metric")?;
    let structure = match &cfg.structure {
        None => Structure::None,
        Some(StructureConfig::Complex { j }) => Structure::Complex { j: parse_mat(j, "structure.j")? },
        Some(StructureConfig::Contact { phi, xi, eta }) => Structure::Contact {
            phi: parse_mat(phi, "structure.phi")?,
            xi: parse_vec(xi, "structure.xi")?,
            eta: parse_vec(eta, "structure.eta")?,
        },
    };
    let chart = ChartManifold {
        dim: cfg.dim,
        lo: cfg.lo.clone(),
        hi: cfg.hi.clone(),
        metric,
        structure,
    };
    chart.validate().map_err(|e| ConfigError(format!("{path}: {e}")))?;
    Ok(chart)
}
