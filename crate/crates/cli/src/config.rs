//! Run configuration: a TOML document validated in full before any work.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use stripspec_core::eigsolve::DEFAULT_SEED;
use stripspec_core::verify::{BracketCase, CRITERIA};
use stripspec_core::{BoundaryType, CurvatureProfile, EndCondition, SolverOptions};

use crate::CliError;

/// Curvature profile as written in the `[profile]` table.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileSpec {
    Zero {},
    Bump {
        amplitude: f64,
        #[serde(default)]
        center: f64,
        half_width: f64,
        #[serde(default = "default_order")]
        order: u32,
    },
    /// Bump whose amplitude is fixed by the turning angle `alpha`.
    BumpAngle {
        alpha: f64,
        #[serde(default)]
        center: f64,
        half_width: f64,
        #[serde(default = "default_order")]
        order: u32,
    },
    PiecewiseLinear { knots: Vec<[f64; 2]> },
    PeriodicCosine { amplitude: f64, period: f64 },
    Scaled { beta: f64, base: Box<ProfileSpec> },
    Sum { parts: Vec<ProfileSpec> },
}

fn default_order() -> u32 {
    2
}

impl ProfileSpec {
    pub fn build(&self) -> Result<CurvatureProfile, CliError> {
        let p = match self {
            ProfileSpec::Zero {} => CurvatureProfile::zero(),
            ProfileSpec::Bump { amplitude, center, half_width, order } => {
                CurvatureProfile::bump(*amplitude, *center, *half_width, *order)?
            }
            ProfileSpec::BumpAngle { alpha, center, half_width, order } => {
                CurvatureProfile::bump_with_angle(*alpha, *center, *half_width, *order)?
            }
            ProfileSpec::PiecewiseLinear { knots } => {
                CurvatureProfile::piecewise_linear(knots.iter().map(|k| (k[0], k[1])).collect())?
            }
            ProfileSpec::PeriodicCosine { amplitude, period } => CurvatureProfile::periodic_cosine(*amplitude, *period)?,
            ProfileSpec::Scaled { beta, base } => {
                if !beta.is_finite() {
                    return Err(CliError::Config(format!("profile scale must be finite, got {beta}")));
                }
                CurvatureProfile::scaled(*beta, base.build()?)
            }
            ProfileSpec::Sum { parts } => {
                if parts.is_empty() {
                    return Err(CliError::Config("sum profile needs at least one part".into()));
                }
                CurvatureProfile::sum(parts.iter().map(|p| p.build()).collect::<Result<_, _>>()?)
            }
        };
        Ok(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndChoice {
    Dirichlet,
    Neumann,
    /// Both artificial conditions, bracketing the infinite-strip level.
    Both,
    Radiating,
}

impl EndChoice {
    pub fn conditions(self) -> Vec<EndCondition> {
        match self {
            EndChoice::Dirichlet => vec![EndCondition::Dirichlet],
            EndChoice::Neumann => vec![EndCondition::Neumann],
            EndChoice::Both => vec![EndCondition::Neumann, EndCondition::Dirichlet],
            EndChoice::Radiating => vec![EndCondition::Radiating],
        }
    }
}

pub fn end_name(bc: EndCondition) -> &'static str {
    match bc {
        EndCondition::Dirichlet => "dirichlet",
        EndCondition::Neumann => "neumann",
        EndCondition::Radiating => "radiating",
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StripSection {
    pub d: f64,
    pub half_length: f64,
    pub n_s: usize,
    pub n_u: usize,
    #[serde(deserialize_with = "de_iota")]
    pub iota: BoundaryType,
    #[serde(default = "default_end")]
    pub end_bc: EndChoice,
}

fn de_iota<'de, D: serde::Deserializer<'de>>(de: D) -> Result<BoundaryType, D::Error> {
    let s = String::deserialize(de)?;
    s.parse().map_err(|_| serde::de::Error::custom(format!("iota must be D, N or DN, got {s:?}")))
}

fn default_end() -> EndChoice {
    EndChoice::Dirichlet
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSection {
    pub m: usize,
    pub tol: f64,
    pub seed: u64,
    pub max_restarts: usize,
}

impl Default for SolverSection {
    fn default() -> Self {
        let d = SolverOptions::default();
        Self { m: 6, tol: d.tol, seed: DEFAULT_SEED, max_restarts: d.max_restarts }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GeometrySection {
    /// Lattice intervals along `[-S, S]` for the self-intersection test;
    /// defaults to `4 n_s`.
    pub resolution: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpectrumSection {
    /// Also write `K.mtx` and `M.mtx` for every assembled pencil.
    pub dump_matrices: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum SweepAxis {
    #[serde(rename = "beta")]
    Beta,
    #[serde(rename = "d")]
    D,
    #[serde(rename = "S")]
    S,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Beta => "beta",
            SweepAxis::D => "d",
            SweepAxis::S => "S",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    /// Keep `h_s` fixed when sweeping `S` instead of keeping `n_s`.
    #[serde(default)]
    pub fixed_step: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifySection {
    pub criteria: Vec<u8>,
    pub tolerance_scale: f64,
    /// Configs for the bracketing check, relative to this file.
    pub cases: Vec<PathBuf>,
}

impl Default for VerifySection {
    fn default() -> Self {
        Self { criteria: CRITERIA.to_vec(), tolerance_scale: 1.0, cases: Vec::new() }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    profile: ProfileSpec,
    strip: StripSection,
    #[serde(default)]
    solver: SolverSection,
    #[serde(default)]
    geometry: GeometrySection,
    #[serde(default)]
    spectrum: SpectrumSection,
    sweep: Option<SweepSection>,
    #[serde(default)]
    verify: VerifySection,
    output_dir: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub profile: CurvatureProfile,
    pub strip: StripSection,
    pub solver: SolverSection,
    pub geometry: GeometrySection,
    pub spectrum: SpectrumSection,
    pub sweep: Option<SweepSection>,
    pub verify: VerifySection,
    pub output_dir: PathBuf,
    /// Directory of the config file, for resolving relative paths.
    pub base_dir: PathBuf,
}

fn positive(name: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Config(format!("{name} must be positive and finite, got {v}")))
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, base_dir).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str, base_dir: PathBuf) -> Result<Self, CliError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        let strip = raw.strip;
        positive("strip.d", strip.d)?;
        positive("strip.half_length", strip.half_length)?;
        if strip.n_s < 4 || strip.n_u < 2 {
            return Err(CliError::Config(format!("need n_s >= 4 and n_u >= 2, got {} and {}", strip.n_s, strip.n_u)));
        }
        if strip.iota == BoundaryType::N && strip.end_bc == EndChoice::Radiating {
            return Err(CliError::Config("radiating ends need a Dirichlet edge (iota D or DN)".into()));
        }
        if raw.solver.m == 0 {
            return Err(CliError::Config("solver.m must be at least 1".into()));
        }
        positive("solver.tol", raw.solver.tol)?;
        if let Some(r) = raw.geometry.resolution {
            if r < 4 {
                return Err(CliError::Config(format!("geometry.resolution must be at least 4, got {r}")));
            }
        }
        if let Some(sw) = &raw.sweep {
            if sw.values.is_empty() {
                return Err(CliError::Config("sweep.values is empty".into()));
            }
            for &v in &sw.values {
                match sw.axis {
                    SweepAxis::Beta if !v.is_finite() => {
                        return Err(CliError::Config(format!("sweep value {v} is not finite")))
                    }
                    SweepAxis::D | SweepAxis::S => positive(&format!("sweep value on axis {}", sw.axis.name()), v)?,
                    _ => {}
                }
            }
        }
        for id in &raw.verify.criteria {
            if !CRITERIA.contains(id) {
                return Err(CliError::Config(format!("unknown criterion {id}")));
            }
        }
        positive("verify.tolerance_scale", raw.verify.tolerance_scale)?;
        let profile = raw.profile.build()?;
        Ok(Self {
            profile,
            strip,
            solver: raw.solver,
            geometry: raw.geometry,
            spectrum: raw.spectrum,
            sweep: raw.sweep,
            verify: raw.verify,
            output_dir: raw.output_dir.unwrap_or_else(|| PathBuf::from("out")),
            base_dir,
        })
    }

    pub fn solver_options(&self) -> SolverOptions {
        SolverOptions {
            tol: self.solver.tol,
            max_restarts: self.solver.max_restarts,
            seed: self.solver.seed,
            ..SolverOptions::default()
        }
    }

    pub fn bracket_case(&self, name: &str) -> BracketCase {
        BracketCase {
            name: name.to_string(),
            profile: self.profile.clone(),
            iota: self.strip.iota,
            d: self.strip.d,
            half_length: self.strip.half_length,
            n_s: self.strip.n_s,
            n_u: self.strip.n_u,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[profile]
kind = "bump_angle"
alpha = -0.4
half_width = 1.0

[strip]
d = 0.3
half_length = 3.0
n_s = 120
n_u = 8
iota = "D"
"#;

    #[test]
    fn minimal_config_gets_defaults() {
        let c = RunConfig::parse(MINIMAL, PathBuf::new()).unwrap();
        assert_eq!(c.strip.end_bc, EndChoice::Dirichlet);
        assert_eq!(c.solver.seed, DEFAULT_SEED);
        assert_eq!(c.verify.criteria.len(), 12);
        assert!((c.profile.stats().unwrap().alpha + 0.4).abs() < 1e-12);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = MINIMAL.replace("iota = \"D\"", "iota = \"D\"\nwidth = 2");
        assert!(matches!(RunConfig::parse(&text, PathBuf::new()), Err(CliError::Config(_))));
        let text = MINIMAL.replace("half_width = 1.0", "half_width = 1.0\nsigma = 2");
        assert!(matches!(RunConfig::parse(&text, PathBuf::new()), Err(CliError::Config(_))));
    }

    #[test]
    fn bad_values_are_rejected() {
        for (from, to) in [("d = 0.3", "d = -0.3"), ("n_u = 8", "n_u = 1"), ("iota = \"D\"", "iota = \"X\"")] {
            let text = MINIMAL.replace(from, to);
            assert!(matches!(RunConfig::parse(&text, PathBuf::new()), Err(CliError::Config(_))), "{to}");
        }
        let text = format!("{MINIMAL}\n[sweep]\naxis = \"n_s\"\nvalues = [1.0]\n");
        assert!(matches!(RunConfig::parse(&text, PathBuf::new()), Err(CliError::Config(_))));
        let text = format!("{MINIMAL}\n[sweep]\naxis = \"d\"\nvalues = [0.1, -0.2]\n");
        assert!(matches!(RunConfig::parse(&text, PathBuf::new()), Err(CliError::Config(_))));
    }

    #[test]
    fn nested_profiles_parse() {
        let text = MINIMAL.replace(
            "kind = \"bump_angle\"\nalpha = -0.4\nhalf_width = 1.0",
            "kind = \"scaled\"\nbeta = 0.5\nbase = { kind = \"sum\", parts = [\n  { kind = \"bump\", amplitude = -0.6, center = -1.0, half_width = 0.8 },\n  { kind = \"bump\", amplitude = 1.0, center = 1.0, half_width = 0.8 },\n] }",
        );
        let c = RunConfig::parse(&text, PathBuf::new()).unwrap();
        assert!((c.profile.eval(1.0) - 0.5).abs() < 1e-12);
    }
}
