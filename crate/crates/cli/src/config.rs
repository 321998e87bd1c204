//! TOML experiment definitions.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    AsgeirssonCircle,
    AsgeirssonHyperbola,
    UheResidual,
    XrayCompare,
    RuledSurface,
    MapTriple,
    ChartRoundtrip,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::AsgeirssonCircle => "asgeirsson-circle",
            Self::AsgeirssonHyperbola => "asgeirsson-hyperbola",
            Self::UheResidual => "uhe-residual",
            Self::XrayCompare => "xray-compare",
            Self::RuledSurface => "ruled-surface",
            Self::MapTriple => "map-triple",
            Self::ChartRoundtrip => "chart-roundtrip",
        }
    }

    fn default_tolerance(self) -> f64 {
        match self {
            Self::AsgeirssonCircle => 1e-6,
            Self::AsgeirssonHyperbola | Self::UheResidual => 1e-4,
            Self::XrayCompare => 1e-8,
            Self::RuledSurface | Self::MapTriple => 1e-7,
            Self::ChartRoundtrip => 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtensionSpec {
    #[default]
    Strict,
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormalizationSpec {
    #[default]
    ChordLength,
    AsPrinted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallConfig {
    pub center: [f64; 3],
    pub radius: f64,
    #[serde(default = "one")]
    pub density: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermConfig {
    pub coefficient: f64,
    pub powers: [u32; 4],
}

/// Solution selector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SolutionSpec {
    AppendixA {
        #[serde(default)]
        extension: ExtensionSpec,
    },
    Slab {
        d0: f64,
        #[serde(default)]
        normalization: NormalizationSpec,
    },
    Ball {
        r0: f64,
    },
    Kballs {
        balls: Vec<BallConfig>,
        #[serde(default)]
        normalization: NormalizationSpec,
    },
    Polynomial {
        terms: Vec<TermConfig>,
    },
}

/// Either three pairwise skew points, or a center, two plane directions and
/// a square radius.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConicSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<[f64; 4]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<[f64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plane: Option<[[f64; 4]; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub square_radius: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BranchPolicySpec {
    #[default]
    Both,
    Plus,
    Minus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSpec {
    #[serde(default = "default_nodes")]
    pub nodes: usize,
    #[serde(default = "default_truncation")]
    pub truncation: f64,
    #[serde(default)]
    pub branch_policy: BranchPolicySpec,
}

fn default_nodes() -> usize {
    2048
}

fn default_truncation() -> f64 {
    12.0
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { nodes: default_nodes(), truncation: default_truncation(), branch_policy: BranchPolicySpec::Both }
    }
}

/// Random sampling of points or lines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingSpec {
    #[serde(default = "default_count")]
    pub count: usize,
    #[serde(default)]
    pub seed: u64,
    /// Half-width of the coordinate box for flat points.
    #[serde(default = "default_box")]
    pub half_width: f64,
    /// Bounds on `|ξ|` and `|η|` for random lines.
    #[serde(default = "default_xi_max")]
    pub xi_max: f64,
    #[serde(default = "default_eta_max")]
    pub eta_max: f64,
    /// Relative finite-difference step.
    #[serde(default = "default_step")]
    pub step: f64,
}

fn default_count() -> usize {
    100
}

fn default_box() -> f64 {
    10.0
}

fn default_xi_max() -> f64 {
    0.8
}

fn default_eta_max() -> f64 {
    2.5
}

fn default_step() -> f64 {
    1e-3
}

impl Default for SamplingSpec {
    fn default() -> Self {
        Self {
            count: default_count(),
            seed: 0,
            half_width: default_box(),
            xi_max: default_xi_max(),
            eta_max: default_eta_max(),
            step: default_step(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct XraySpec {
    /// Arc-length half-range of each line integral.
    #[serde(default = "default_truncation")]
    pub truncation: f64,
    /// Absolute tolerance of the adaptive quadrature.
    #[serde(default = "default_xray_tol")]
    pub quadrature_tolerance: f64,
}

fn default_xray_tol() -> f64 {
    1e-10
}

impl Default for XraySpec {
    fn default() -> Self {
        Self { truncation: default_truncation(), quadrature_tolerance: default_xray_tol() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphicalSpec {
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonGraphicalSpec {
    pub theta: f64,
    pub phi: f64,
    pub h: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuledSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graphical: Option<GraphicalSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub non_graphical: Option<NonGraphicalSpec>,
    #[serde(default = "default_line_samples")]
    pub line_samples: usize,
    #[serde(default = "default_point_samples")]
    pub point_samples: usize,
    /// Points are taken at arc length in `[−r_max, r_max]`.
    #[serde(default = "default_r_max")]
    pub r_max: f64,
}

fn default_line_samples() -> usize {
    64
}

fn default_point_samples() -> usize {
    16
}

fn default_r_max() -> f64 {
    4.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// Pass threshold of every check; defaults depend on the kind.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solution: Option<SolutionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conic: Option<ConicSpec>,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
    #[serde(default)]
    pub sampling: SamplingSpec,
    #[serde(default)]
    pub xray: XraySpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ruled: Option<RuledSpec>,
    #[serde(default, skip_serializing_if = "is_default_output")]
    pub output: OutputSpec,
}

fn is_default_output(o: &OutputSpec) -> bool {
    *o == OutputSpec::default()
}

fn invalid(field: &str, message: impl Into<String>) -> CliError {
    CliError::Invalid { field: field.to_string(), message: message.into() }
}

fn positive(field: &str, x: f64) -> Result<(), CliError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(invalid(field, format!("must be positive and finite, got {x}")))
    }
}

fn finite<const N: usize>(field: &str, v: &[f64; N]) -> Result<(), CliError> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(invalid(field, "entries must be finite"))
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.to_path_buf(), source: e })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let config: Self = toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance.unwrap_or_else(|| self.kind.default_tolerance())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if let Some(t) = self.tolerance {
            positive("tolerance", t)?;
        }
        if let Some(s) = &self.solution {
            validate_solution(s)?;
        }
        if let Some(c) = &self.conic {
            validate_conic(c)?;
        }
        let q = &self.quadrature;
        if q.nodes < 2 {
            return Err(invalid("quadrature.nodes", "must be at least 2"));
        }
        positive("quadrature.truncation", q.truncation)?;
        let s = &self.sampling;
        if s.count == 0 {
            return Err(invalid("sampling.count", "must be at least 1"));
        }
        positive("sampling.half_width", s.half_width)?;
        positive("sampling.eta_max", s.eta_max)?;
        positive("sampling.step", s.step)?;
        if !(s.xi_max > 0.0 && s.xi_max < 1.0) {
            return Err(invalid("sampling.xi_max", "must lie in (0, 1)"));
        }
        positive("xray.truncation", self.xray.truncation)?;
        positive("xray.quadrature_tolerance", self.xray.quadrature_tolerance)?;
        self.validate_kind()
    }

    fn validate_kind(&self) -> Result<(), CliError> {
        let needs_solution = || self.solution.as_ref().ok_or_else(|| invalid("solution", "required for this kind"));
        let needs_conic = || self.conic.as_ref().ok_or_else(|| invalid("conic", "required for this kind"));
        match self.kind {
            ExperimentKind::AsgeirssonCircle | ExperimentKind::AsgeirssonHyperbola => {
                needs_solution()?;
                needs_conic()?;
            }
            ExperimentKind::UheResidual => {
                needs_solution()?;
            }
            ExperimentKind::XrayCompare => match needs_solution()? {
                SolutionSpec::Slab { .. } | SolutionSpec::Ball { .. } | SolutionSpec::Kballs { .. } => {}
                _ => return Err(invalid("solution.type", "xray-compare needs slab, ball or kballs")),
            },
            ExperimentKind::RuledSurface => {
                let r = self.ruled.as_ref().ok_or_else(|| invalid("ruled", "required for this kind"))?;
                if r.graphical.is_none() && r.non_graphical.is_none() {
                    return Err(invalid("ruled", "needs a graphical or non_graphical table"));
                }
                if r.line_samples == 0 || r.point_samples < 2 {
                    return Err(invalid("ruled.line_samples", "need at least one line and two points per line"));
                }
                positive("ruled.r_max", r.r_max)?;
                if let Some(g) = &r.graphical {
                    finite("ruled.graphical", &[g.a, g.b])?;
                }
                if let Some(n) = &r.non_graphical {
                    finite("ruled.non_graphical", &[n.theta, n.phi, n.h])?;
                }
            }
            ExperimentKind::MapTriple => {
                if needs_conic()?.points.is_none() {
                    return Err(invalid("conic.points", "map-triple needs three points"));
                }
            }
            ExperimentKind::ChartRoundtrip => {}
        }
        Ok(())
    }
}

fn validate_solution(s: &SolutionSpec) -> Result<(), CliError> {
    match s {
        SolutionSpec::AppendixA { .. } => Ok(()),
        SolutionSpec::Slab { d0, .. } if !(*d0 >= 0.0 && d0.is_finite()) => {
            Err(invalid("solution.d0", "must be non-negative and finite"))
        }
        SolutionSpec::Ball { r0 } => positive("solution.r0", *r0),
        SolutionSpec::Kballs { balls, .. } => {
            for (i, b) in balls.iter().enumerate() {
                finite(&format!("solution.balls[{i}].center"), &b.center)?;
                positive(&format!("solution.balls[{i}].radius"), b.radius)?;
                finite(&format!("solution.balls[{i}].density"), &[b.density])?;
            }
            Ok(())
        }
        SolutionSpec::Polynomial { terms } => {
            for (i, t) in terms.iter().enumerate() {
                finite(&format!("solution.terms[{i}].coefficient"), &[t.coefficient])?;
            }
            Ok(())
        }
        SolutionSpec::Slab { .. } => Ok(()),
    }
}

fn validate_conic(c: &ConicSpec) -> Result<(), CliError> {
    match (&c.points, &c.center, &c.plane, &c.square_radius) {
        (Some(p), None, None, None) => {
            if p.len() != 3 {
                return Err(invalid("conic.points", format!("expected 3 points, got {}", p.len())));
            }
            for (i, x) in p.iter().enumerate() {
                finite(&format!("conic.points[{i}]"), x)?;
            }
            Ok(())
        }
        (None, Some(o), Some([u, v]), Some(c2)) => {
            finite("conic.center", o)?;
            finite("conic.plane[0]", u)?;
            finite("conic.plane[1]", v)?;
            if !c2.is_finite() || *c2 == 0.0 {
                return Err(invalid("conic.square_radius", "must be finite and non-zero"));
            }
            Ok(())
        }
        _ => Err(invalid("conic", "give either `points`, or all of `center`, `plane` and `square_radius`")),
    }
}
