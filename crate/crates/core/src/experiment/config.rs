use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::distributions::{FitKind, DEFAULT_MC_SAMPLES, DEFAULT_N_DOMINANT};
use crate::model::ChainSpec;
use crate::speckle::{default_windows, HistogramSettings, TimeGrid, DEFAULT_STEP};
use crate::spectral::{Channel, DistinguishableMethod};
use crate::{Error, Result};

/// Version of the configuration and artifact schemas.
pub const SCHEMA_VERSION: u32 = 1;

/// A complete experiment. Site pairs are 1-based, as in the config files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    #[serde(default = "default_name")]
    pub name: String,
    pub chain: ChainConfig,
    pub transitions: Vec<TransitionConfig>,
    pub windows: Vec<WindowConfig>,
    #[serde(default)]
    pub seeds: SeedConfig,
    #[serde(default)]
    pub histogram: HistogramSettings,
    #[serde(default = "default_fits")]
    pub fits: Vec<FitHypothesis>,
    #[serde(default)]
    pub compound: CompoundConfig,
    #[serde(default)]
    pub distinguishable_method: DistinguishableMethod,
    #[serde(default)]
    pub series_output: SeriesOutput,
    /// Divides every window's sample count.
    #[serde(default = "one")]
    pub scale: f64,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
}

fn default_name() -> String {
    "experiment".into()
}

fn default_fits() -> Vec<FitHypothesis> {
    vec![FitHypothesis::Exponential]
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainConfig {
    pub n: usize,
    #[serde(default = "one")]
    pub j: f64,
    pub w: f64,
    pub u: InteractionValues,
}

/// A single interaction strength or a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InteractionValues {
    One(f64),
    Sweep(Vec<f64>),
}

impl InteractionValues {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Self::One(u) => vec![*u],
            Self::Sweep(us) => us.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionConfig {
    pub channel: Channel,
    pub input: [usize; 2],
    pub output: [usize; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl TransitionConfig {
    pub fn new(channel: Channel, input: [usize; 2], output: [usize; 2]) -> Self {
        Self {
            channel,
            input,
            output,
            label: None,
        }
    }

    pub fn label(&self) -> String {
        self.label.clone().unwrap_or_else(|| {
            format!(
                "{}_{}-{}_{}-{}",
                self.channel, self.input[0], self.input[1], self.output[0], self.output[1]
            )
        })
    }

    /// 0-based input and output pairs.
    pub fn zero_based(&self) -> ((usize, usize), (usize, usize)) {
        (
            (self.input[0] - 1, self.input[1] - 1),
            (self.output[0] - 1, self.output[1] - 1),
        )
    }
}

/// A time window, given in one of three forms:
/// `t_max` (grid `step, 2 step, .., t_max`), `t0` + `span` (grid over
/// `(t0, t0 + span]`), or explicit `t_start` + `count`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default = "default_step")]
    pub step: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub span: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
}

fn default_step() -> f64 {
    DEFAULT_STEP
}

impl Default for WindowConfig {
    fn default() -> Self {
        Self {
            label: None,
            step: DEFAULT_STEP,
            t_max: None,
            t0: None,
            span: None,
            t_start: None,
            count: None,
        }
    }
}

impl WindowConfig {
    pub fn until(t_max: f64, step: f64) -> Self {
        Self {
            label: Some("full".into()),
            step,
            t_max: Some(t_max),
            ..Self::default()
        }
    }

    pub fn from_grid(grid: &TimeGrid) -> Self {
        Self {
            label: Some(grid.label.clone()),
            step: grid.step,
            t_start: Some(grid.t_start),
            count: Some(grid.count),
            ..Self::default()
        }
    }

    pub fn label(&self) -> String {
        self.label.clone().unwrap_or_else(|| "full".into())
    }

    /// The grid before any `scale` is applied.
    pub fn resolve(&self) -> Result<TimeGrid> {
        let label = self.label();
        let mut grid = match (self.t_max, self.span, self.count) {
            (Some(t_max), None, None) if self.t0.is_none() && self.t_start.is_none() => {
                TimeGrid::up_to(t_max, self.step)?
            }
            (None, Some(span), None) if self.t_start.is_none() => {
                TimeGrid::window(self.t0.unwrap_or(0.0), span, self.step, label.clone())?
            }
            (None, None, Some(count)) if self.t0.is_none() => {
                TimeGrid::new(self.t_start.unwrap_or(self.step), self.step, count, label.clone())?
            }
            _ => {
                return Err(Error::InvalidGrid(format!(
                    "window '{label}' must set exactly one of t_max, t0+span, or t_start+count"
                )))
            }
        };
        grid.label = label;
        Ok(grid)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedConfig {
    pub base: u64,
    pub count: usize,
}

impl Default for SeedConfig {
    fn default() -> Self {
        Self { base: 1, count: 1 }
    }
}

impl SeedConfig {
    pub fn seeds(&self) -> Vec<u64> {
        (0..self.count as u64).map(|k| self.base.wrapping_add(k)).collect()
    }
}

/// A model to fit to every realization's series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FitHypothesis {
    Exponential,
    KDist {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        nu: Option<f64>,
    },
    WeibullBound,
    Rician,
    /// Built from the realization's dominant phasors, not from moments.
    CompoundRician,
}

impl FitHypothesis {
    pub fn moment_kind(self) -> Option<FitKind> {
        match self {
            Self::Exponential => Some(FitKind::Exponential),
            Self::KDist { nu } => Some(FitKind::KDist { nu }),
            Self::WeibullBound => Some(FitKind::WeibullBound),
            Self::Rician => Some(FitKind::Rician),
            Self::CompoundRician => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompoundConfig {
    pub n_dominant: usize,
    pub mc_samples: usize,
}

impl Default for CompoundConfig {
    fn default() -> Self {
        Self {
            n_dominant: DEFAULT_N_DOMINANT,
            mc_samples: DEFAULT_MC_SAMPLES,
        }
    }
}

/// Which realizations get a `series` CSV.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesOutput {
    #[default]
    All,
    First,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
}

impl Diagnostic {
    fn error(message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Error,
            message: message.into(),
        }
    }

    fn warning(message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Warning,
            message: message.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{tag}: {}", self.message)
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn u_values(&self) -> Vec<f64> {
        self.chain.u.values()
    }

    pub fn seeds(&self) -> Vec<u64> {
        self.seeds.seeds()
    }

    pub fn chain_spec(&self, u: f64) -> Result<ChainSpec> {
        ChainSpec::new(self.chain.n, self.chain.j, self.chain.w, u)
    }

    /// Resolved grids with `scale` applied.
    pub fn grids(&self) -> Result<Vec<TimeGrid>> {
        self.windows
            .iter()
            .map(|w| {
                w.resolve()
                    .map(|g| if self.scale == 1.0 { g } else { g.scaled(self.scale) })
            })
            .collect()
    }

    /// Every violation, without running anything. Errors block a run,
    /// warnings do not.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        if self.schema_version != SCHEMA_VERSION {
            out.push(Diagnostic::error(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let us = self.u_values();
        if us.is_empty() {
            out.push(Diagnostic::error("chain.u lists no interaction strengths"));
        }
        for &u in &us {
            if let Err(e) = self.chain_spec(u) {
                out.push(Diagnostic::error(format!("chain: {e}")));
            }
        }
        if us.is_empty() {
            if let Err(e) = self.chain_spec(0.0) {
                out.push(Diagnostic::error(format!("chain: {e}")));
            }
        }

        let n = self.chain.n;
        if self.transitions.is_empty() {
            out.push(Diagnostic::error("no transitions configured"));
        }
        let mut labels = Vec::new();
        for t in &self.transitions {
            let label = t.label();
            for site in t.input.iter().chain(&t.output) {
                if *site < 1 || *site > n {
                    out.push(Diagnostic::error(format!("{label}: site {site} outside [1, {n}]")));
                }
            }
            match t.channel {
                Channel::Fermionic if t.input[0] == t.input[1] || t.output[0] == t.output[1] => {
                    out.push(Diagnostic::error(format!(
                        "{label}: fermionic pairs need two distinct sites"
                    )));
                }
                Channel::Single if t.input[0] != t.input[1] || t.output[0] != t.output[1] => {
                    out.push(Diagnostic::error(format!(
                        "{label}: single-particle transitions are written as [m, m] -> [p, p]"
                    )));
                }
                _ => {}
            }
            if labels.contains(&label) {
                out.push(Diagnostic::error(format!("duplicate transition label '{label}'")));
            }
            labels.push(label);
        }

        if self.windows.is_empty() {
            out.push(Diagnostic::error("no time windows configured"));
        }
        if !(self.scale >= 1.0 && self.scale.is_finite()) {
            out.push(Diagnostic::error(format!("scale must be >= 1, got {}", self.scale)));
        }
        let mut window_labels = Vec::new();
        for w in &self.windows {
            match w.resolve() {
                Ok(g) => {
                    out.extend(g.warnings(self.chain.j).into_iter().map(Diagnostic::warning));
                }
                Err(e) => out.push(Diagnostic::error(e.to_string())),
            }
            let label = w.label();
            if window_labels.contains(&label) {
                out.push(Diagnostic::error(format!("duplicate window label '{label}'")));
            }
            window_labels.push(label);
        }

        if self.seeds.count == 0 {
            out.push(Diagnostic::error("seeds.count must be at least 1"));
        }
        let h = &self.histogram;
        if h.bins_per_decade == 0 || h.min_decade >= h.max_decade {
            out.push(Diagnostic::error(
                "histogram needs bins_per_decade > 0 and min_decade < max_decade",
            ));
        }
        for fit in &self.fits {
            if let FitHypothesis::KDist { nu: Some(nu) } = fit {
                if !(*nu > 0.0) {
                    out.push(Diagnostic::error(format!("k_dist fit: nu must be positive, got {nu}")));
                }
            }
        }
        if self.fits.contains(&FitHypothesis::CompoundRician)
            && (self.compound.n_dominant == 0 || self.compound.mc_samples == 0)
        {
            out.push(Diagnostic::error(
                "compound.n_dominant and compound.mc_samples must be positive",
            ));
        }
        out
    }

    /// `Ok` when [`validate`](Self::validate) reports no errors.
    pub fn check(&self) -> Result<Vec<Diagnostic>> {
        let diags = self.validate();
        let errors: Vec<String> = diags
            .iter()
            .filter(|d| d.is_error())
            .map(|d| d.message.clone())
            .collect();
        if errors.is_empty() {
            Ok(diags)
        } else {
            Err(Error::Config(errors.join("; ")))
        }
    }
}

/// Built-in experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Fig2,
    Fig3,
    Fig4,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
        }
    }

    pub fn config(self) -> ExperimentConfig {
        match self {
            Preset::Fig2 => fig2(),
            Preset::Fig3 => fig3(),
            Preset::Fig4 => fig4(),
        }
    }
}

fn base(name: &str, n: usize, u: InteractionValues) -> ExperimentConfig {
    ExperimentConfig {
        schema_version: SCHEMA_VERSION,
        name: name.into(),
        chain: ChainConfig { n, j: 1.0, w: 0.01, u },
        transitions: Vec::new(),
        windows: vec![WindowConfig::until(1e7, DEFAULT_STEP)],
        seeds: SeedConfig::default(),
        histogram: HistogramSettings::default(),
        fits: default_fits(),
        compound: CompoundConfig::default(),
        distinguishable_method: DistinguishableMethod::Blocks,
        series_output: SeriesOutput::All,
        scale: 1.0,
        out_dir: PathBuf::from("out").join(name),
    }
}

/// PDFs of the four channels at `U = 0` and `U = J` on one realization.
pub fn fig2() -> ExperimentConfig {
    let mut c = base("fig2", 40, InteractionValues::Sweep(vec![0.0, 1.0]));
    c.transitions = vec![
        TransitionConfig::new(Channel::Distinguishable, [20, 22], [23, 26]),
        TransitionConfig::new(Channel::Bosonic, [20, 22], [23, 26]),
        TransitionConfig::new(Channel::Fermionic, [20, 22], [23, 26]),
        TransitionConfig::new(Channel::Distinguishable, [20, 20], [22, 22]),
    ];
    c.fits = vec![
        FitHypothesis::Exponential,
        FitHypothesis::KDist { nu: None },
        FitHypothesis::WeibullBound,
    ];
    c
}

/// Windowed contrast against `U`, averaged over 100 realizations.
pub fn fig3() -> ExperimentConfig {
    let us = vec![
        0.0, 0.1, 0.3, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0, 500.0, 1000.0,
    ];
    let mut c = base("fig3", 26, InteractionValues::Sweep(us));
    c.transitions = vec![
        TransitionConfig::new(Channel::Bosonic, [10, 11], [13, 16]),
        TransitionConfig::new(Channel::Bosonic, [10, 10], [11, 11]),
    ];
    c.windows = default_windows().iter().map(WindowConfig::from_grid).collect();
    c.seeds = SeedConfig { base: 1, count: 100 };
    c.series_output = SeriesOutput::First;
    c
}

/// Bound-state transitions at strong coupling with the compound Rician fit.
pub fn fig4() -> ExperimentConfig {
    let mut c = base("fig4", 40, InteractionValues::Sweep(vec![200.0, 500.0]));
    c.transitions = vec![TransitionConfig::new(Channel::Bosonic, [20, 20], [22, 22])];
    c.fits = vec![
        FitHypothesis::Exponential,
        FitHypothesis::Rician,
        FitHypothesis::CompoundRician,
    ];
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_clean() {
        for p in [Preset::Fig2, Preset::Fig3, Preset::Fig4] {
            let diags = p.config().validate();
            assert!(diags.is_empty(), "{}: {diags:?}", p.name());
        }
    }

    #[test]
    fn presets_round_trip_through_toml() {
        for p in [Preset::Fig2, Preset::Fig3, Preset::Fig4] {
            let c = p.config();
            let back = ExperimentConfig::from_toml_str(&c.to_toml_string()).unwrap();
            assert_eq!(back, c);
        }
    }

    #[test]
    fn fermionic_double_occupancy_is_an_error() {
        let mut c = fig2();
        c.transitions
            .push(TransitionConfig::new(Channel::Fermionic, [5, 5], [6, 7]));
        let diags = c.validate();
        assert_eq!(diags.len(), 1);
        assert!(diags[0].is_error());
        assert!(c.check().is_err());
    }

    #[test]
    fn small_step_is_a_warning() {
        let mut c = fig2();
        c.windows = vec![WindowConfig::until(1e3, 1.0)];
        let diags = c.validate();
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].severity, Severity::Warning);
        assert!(c.check().is_ok());
    }

    #[test]
    fn site_bounds_are_one_based() {
        let mut c = fig4();
        c.transitions = vec![TransitionConfig::new(Channel::Bosonic, [0, 40], [40, 41])];
        let msgs: Vec<String> = c.validate().into_iter().map(|d| d.message).collect();
        assert_eq!(msgs.len(), 2, "{msgs:?}");
        assert!(msgs[0].contains("site 0"));
        assert!(msgs[1].contains("site 41"));
    }

    #[test]
    fn window_forms() {
        let w: WindowConfig = toml::from_str("t0 = 1e6\nspan = 1e5\nlabel = \"mid\"").unwrap();
        let g = w.resolve().unwrap();
        assert_eq!((g.t_start, g.count, g.label.as_str()), (1e6 + 100.0, 1000, "mid"));
        let w: WindowConfig = toml::from_str("t_max = 1e4\nstep = 50").unwrap();
        assert_eq!(w.resolve().unwrap().count, 200);
        let w: WindowConfig = toml::from_str("t_max = 1e4\nspan = 10").unwrap();
        assert!(w.resolve().is_err());
    }

    #[test]
    fn minimal_file_gets_defaults() {
        let text = r#"
schema_version = 1
transitions = [{ channel = "bosonic", input = [2, 3], output = [4, 5] }]
windows = [{ t_max = 1e4 }]
[chain]
n = 6
w = 0.1
u = 1.5
"#;
        let c = ExperimentConfig::from_toml_str(text).unwrap();
        assert_eq!(c.u_values(), vec![1.5]);
        assert_eq!(c.seeds(), vec![1]);
        assert_eq!(c.fits, vec![FitHypothesis::Exponential]);
        assert_eq!(c.chain.j, 1.0);
        assert!(c.validate().is_empty());
        assert!(ExperimentConfig::from_toml_str("schema_version = 1\nbogus = 3").is_err());
    }
}
