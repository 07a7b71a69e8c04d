//! The JSON experiment config and its conversion into library inputs.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use serde::Deserialize;

use ergfam::boundary::{Cylinder, WitnessBounds};
use ergfam::corpus::bundled_actions;
use ergfam::engine::{Density, KGroup, SphereFamily, Subgroup};
use ergfam::rational::{self, Q};
use ergfam::{FiniteAction, FreeGroup, GroupMeasure, InstanceKind, Observable, ReducedWord, RelationInstance};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Optional; when present it must name the subcommand being run.
    pub command: Option<String>,
    #[serde(default = "default_rank")]
    pub r: u8,
    #[serde(default = "default_instance")]
    pub instance: InstanceKind,
    /// Instances for `identity`; all three when absent.
    pub instances: Option<Vec<InstanceKind>>,
    pub kappa: Option<GroupMeasure>,
    #[serde(rename = "N", alias = "truncation", default = "default_truncation")]
    pub truncation: usize,
    pub action: Option<PathBuf>,
    pub corpus: Option<CorpusSpec>,
    #[serde(default)]
    pub observable: ObservableSpec,
    #[serde(default = "default_target")]
    pub target: Subgroup,
    #[serde(default)]
    pub family: FamilySource,
    pub density: Option<DensitySpec>,
    /// Order of the cyclic group `K`; trivial when absent or 1.
    #[serde(rename = "K")]
    pub k: Option<usize>,
    pub witness: Option<WitnessSpec>,
    #[serde(default)]
    pub invariance: InvarianceSpec,
    pub cap: Option<u64>,
}

fn default_rank() -> u8 {
    2
}

fn default_instance() -> InstanceKind {
    InstanceKind::Tail
}

fn default_truncation() -> usize {
    4
}

fn default_target() -> Subgroup {
    Subgroup::Even
}

/// Where the measures `ζ_i` come from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilySource {
    /// The push-forward of the configured instance.
    #[default]
    Pushforward,
    /// `δ_e` repeated: the control family.
    Identity,
    Spheres,
    EvenSpheres,
    CesaroSpheres,
}

impl FamilySource {
    pub fn sphere_family(self) -> Option<SphereFamily> {
        match self {
            FamilySource::Spheres => Some(SphereFamily::Spheres),
            FamilySource::EvenSpheres => Some(SphereFamily::EvenSpheres),
            FamilySource::CesaroSpheres => Some(SphereFamily::CesaroSpheres),
            _ => None,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum CorpusSpec {
    /// `"bundled"`.
    Named(String),
    Paths(Vec<PathBuf>),
}

/// Either explicit values, or `scale·(1_point − centering)`.
#[derive(Debug, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum ObservableSpec {
    Values {
        values: Vec<String>,
    },
    Indicator {
        indicator: usize,
        /// Subtract the mean.
        #[serde(default)]
        centered: bool,
        /// Scale so that `‖f‖₁ = 1` before centering.
        #[serde(default)]
        normalized: bool,
    },
}

impl Default for ObservableSpec {
    fn default() -> Self {
        ObservableSpec::Indicator {
            indicator: 0,
            centered: true,
            normalized: false,
        }
    }
}

impl ObservableSpec {
    pub fn build(&self, act: &FiniteAction) -> Result<Observable> {
        match self {
            ObservableSpec::Values { values } => {
                ensure!(
                    values.len() == act.len(),
                    "{} observable values for {} points",
                    values.len(),
                    act.len()
                );
                let values = values
                    .iter()
                    .map(|v| rational::parse(v))
                    .collect::<ergfam::Result<Vec<Q>>>()?;
                Ok(Observable::new(values))
            }
            ObservableSpec::Indicator {
                indicator,
                centered,
                normalized,
            } => {
                ensure!(
                    *indicator < act.len(),
                    "indicator point {indicator} outside {} points",
                    act.len()
                );
                let mut f = Observable::indicator(act.len(), *indicator);
                if *normalized {
                    f = f.scale(&(Q::from_integer(1.into()) / &act.weights()[*indicator]));
                }
                if *centered {
                    let mean = f.mean(act);
                    f = f.shift(&-mean);
                }
                Ok(f)
            }
        }
    }
}

/// `{"depth": d, "values": {"a,b": "p/q", …}}`, keys listing the first `d`
/// forward coordinates separated by commas.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensitySpec {
    pub depth: usize,
    pub values: BTreeMap<String, String>,
}

impl DensitySpec {
    fn build(&self) -> Result<Density> {
        let mut values = BTreeMap::new();
        for (key, v) in &self.values {
            let coords = key
                .split(',')
                .map(|w| w.trim().parse::<ReducedWord>())
                .collect::<ergfam::Result<Vec<_>>>()?;
            ensure!(
                coords.len() == self.depth,
                "density key {key:?} does not have {} coordinates",
                self.depth
            );
            values.insert(coords, rational::parse(v)?);
        }
        Ok(Density::Table {
            depth: self.depth,
            values,
        })
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessSpec {
    #[serde(default = "default_cylinder")]
    pub cylinder: String,
    pub targets: Vec<String>,
    #[serde(default = "default_bounds")]
    pub bounds: WitnessBounds,
}

fn default_cylinder() -> String {
    "a".into()
}

fn default_bounds() -> WitnessBounds {
    WitnessBounds {
        max_word_len: 6,
        max_depth: 6,
    }
}

impl WitnessSpec {
    pub fn cylinder(&self) -> Result<Cylinder> {
        Ok(self.cylinder.parse()?)
    }

    pub fn targets(&self) -> Result<Vec<Q>> {
        Ok(self
            .targets
            .iter()
            .map(|t| rational::parse(t))
            .collect::<ergfam::Result<_>>()?)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvarianceSpec {
    pub max_len: usize,
    pub depth: usize,
    pub t_min: i64,
    pub t_max: i64,
}

impl Default for InvarianceSpec {
    fn default() -> Self {
        InvarianceSpec {
            max_len: 3,
            depth: 5,
            t_min: -2,
            t_max: 2,
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg: ExperimentConfig =
            serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        // relative paths are taken from the config's directory
        let base = path.parent().unwrap_or(Path::new("."));
        if let Some(a) = &cfg.action {
            cfg.action = Some(base.join(a));
        }
        if let Some(CorpusSpec::Paths(ps)) = &mut cfg.corpus {
            for p in ps.iter_mut() {
                *p = base.join(&*p);
            }
        }
        ensure!(cfg.r >= 2, "r must be at least 2");
        ensure!(cfg.truncation >= 1, "N must be at least 1");
        Ok(cfg)
    }

    pub fn check_command(&self, name: &str) -> Result<()> {
        match &self.command {
            Some(c) if c != name => bail!("config is for command {c:?}, not {name:?}"),
            _ => Ok(()),
        }
    }

    pub fn group(&self, cap_flag: Option<u64>) -> Result<FreeGroup> {
        let cap = cap_flag.or(self.cap).unwrap_or(ergfam::DEFAULT_CAP);
        Ok(FreeGroup::with_cap(self.r, cap)?)
    }

    pub fn relation(&self, group: FreeGroup, kind: InstanceKind) -> Result<RelationInstance> {
        Ok(RelationInstance::from_kind(kind, group, self.kappa.clone())?)
    }

    pub fn density(&self) -> Result<Density> {
        self.density.as_ref().map_or(Ok(Density::Uniform), DensitySpec::build)
    }

    pub fn k_group(&self) -> KGroup {
        match self.k {
            None | Some(1) => KGroup::Trivial,
            Some(order) => KGroup::Cyclic { order },
        }
    }

    pub fn load_action(&self) -> Result<FiniteAction> {
        let path = self.action.as_ref().context("config needs an \"action\" file")?;
        read_action(path)
    }

    /// The corpus if configured, otherwise the single action.
    pub fn actions(&self) -> Result<Vec<(String, FiniteAction)>> {
        match &self.corpus {
            None => {
                let path = self
                    .action
                    .as_ref()
                    .context("config needs an \"action\" file or a \"corpus\"")?;
                Ok(vec![(path.display().to_string(), read_action(path)?)])
            }
            Some(CorpusSpec::Named(name)) if name == "bundled" => {
                Ok(bundled_actions().into_iter().map(|(n, a)| (n.to_string(), a)).collect())
            }
            Some(CorpusSpec::Named(other)) => bail!("unknown corpus {other:?}; use \"bundled\" or a list of files"),
            Some(CorpusSpec::Paths(ps)) => ps
                .iter()
                .map(|p| Ok((p.display().to_string(), read_action(p)?)))
                .collect(),
        }
    }
}

fn read_action(path: &Path) -> Result<FiniteAction> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading action {}", path.display()))?;
    FiniteAction::from_json(&text).with_context(|| format!("loading action {}", path.display()))
}
