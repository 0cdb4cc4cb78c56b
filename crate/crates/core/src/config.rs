//! TOML configuration for the batch runner.
//!
//! ```toml
//! seed = 7
//! format = "json"                      # or "text"
//! analyzers = ["all"]                  # condition names, "equicontinuous", "distal", "quotient"
//!
//! [system]
//! kind = "finite-action"               # odometer | substitution | one-dot | finite-action | product
//! group = "F2"                         # Z, Zd (e.g. Z2), Fk, Cn, S3
//! points = 12                          # random action on this many points
//! # permutations = [[1, 0, 2], [0, 2, 1]]
//!
//! [budget]
//! level = 3
//! radius = 256
//! samples = 8
//!
//! [battery]
//! sequences = ["positive", "alternating"]
//! clopen = [{ level = 2, points = [0, 1] }]
//! ```
//!
//! Odometers take `base`; substitutions take either `preset` (`thue-morse`,
//! `fibonacci`) or `rules` as digit strings (`["01", "10"]`); products take a
//! nested `of` table describing the factor.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analyzers::{AnalysisBudget, Condition, SequenceKind};
use crate::cantor::ClopenSet;
use crate::flow::{
    build_finite_action, build_odometer, build_one_dot_subshift, build_substitution_subshift, product,
    random_finite_action, Flow, SharedFlow,
};
use crate::group::Group;
use crate::{Error, Result};

pub const MAX_LEVEL: usize = 16;
pub const MAX_RADIUS: u64 = 1 << 20;
pub const MAX_SAMPLES: usize = 4096;
pub const MAX_POINTS: usize = 4096;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SystemKind {
    Odometer,
    Substitution,
    OneDot,
    FiniteAction,
    Product,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub kind: SystemKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rules: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permutations: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub of: Option<Box<SystemConfig>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetConfig {
    pub level: usize,
    pub radius: u64,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_samples() -> usize {
    8
}

impl Default for BudgetConfig {
    fn default() -> Self {
        BudgetConfig { level: 3, radius: 256, samples: default_samples() }
    }
}

/// A union of level-`level` cylinders around designated base points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClopenSpec {
    pub level: usize,
    pub points: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BatteryConfig {
    #[serde(default = "SequenceKind::defaults")]
    pub sequences: Vec<SequenceKind>,
    #[serde(default)]
    pub clopen: Vec<ClopenSpec>,
}

/// Test fixture: flips the outcome of one condition after it is computed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaultConfig {
    pub flip: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    pub system: SystemConfig,
    #[serde(default)]
    pub budget: BudgetConfig,
    #[serde(default = "default_battery")]
    pub battery: BatteryConfig,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub format: Format,
    #[serde(default = "default_analyzers")]
    pub analyzers: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fault: Option<FaultConfig>,
}

fn default_battery() -> BatteryConfig {
    BatteryConfig { sequences: SequenceKind::defaults(), clopen: Vec::new() }
}

fn default_analyzers() -> Vec<String> {
    vec!["all".into()]
}

const EXTRA_ANALYZERS: [&str; 3] = ["equicontinuous", "distal", "quotient"];

/// `Z`, `Zd`/`Z^d`, `Fk`, `Cn`, `S3`.
pub fn parse_group(s: &str) -> Result<Group> {
    let s = s.trim();
    let bad = || Error::Config(format!("unknown group `{s}`"));
    if s == "Z" {
        return Ok(Group::integers());
    }
    if s == "S3" {
        return Ok(Group::symmetric3());
    }
    let (head, tail) = s.split_at(1.min(s.len()));
    let n: usize = tail.trim_start_matches('^').parse().map_err(|_| bad())?;
    match head {
        "Z" => Group::free_abelian(n),
        "F" => Group::free(n),
        "C" => Group::cyclic(n),
        _ => Err(bad()),
    }
}

fn parse_rules(rules: &[String]) -> Result<Vec<Vec<u8>>> {
    rules
        .iter()
        .map(|r| {
            r.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as u8)
                        .ok_or_else(|| Error::Config(format!("substitution image `{r}` is not a digit string")))
                })
                .collect()
        })
        .collect()
}

pub fn substitution_preset(name: &str) -> Option<Vec<Vec<u8>>> {
    match name {
        "thue-morse" => Some(vec![vec![0, 1], vec![1, 0]]),
        "fibonacci" => Some(vec![vec![0, 1], vec![0]]),
        _ => None,
    }
}

impl SystemConfig {
    /// Builds the flow; random finite actions draw from `seed`.
    pub fn build(&self, seed: u64) -> Result<SharedFlow> {
        let missing = |field: &str| Error::Config(format!("{:?} system needs `{field}`", self.kind));
        Ok(match self.kind {
            SystemKind::Odometer => Arc::new(build_odometer(self.base.ok_or_else(|| missing("base"))?)?),
            SystemKind::Substitution => {
                let (name, rules) = match (&self.preset, &self.rules) {
                    (Some(p), None) => (
                        p.clone(),
                        substitution_preset(p).ok_or_else(|| Error::Config(format!("unknown preset `{p}`")))?,
                    ),
                    (None, Some(r)) => (format!("substitution {}", r.join("/")), parse_rules(r)?),
                    _ => return Err(Error::Config("substitution needs exactly one of `preset`, `rules`".into())),
                };
                Arc::new(build_substitution_subshift(&name, rules)?)
            }
            SystemKind::OneDot => Arc::new(build_one_dot_subshift()),
            SystemKind::FiniteAction => {
                let group = parse_group(self.group.as_deref().ok_or_else(|| missing("group"))?)?;
                match (&self.permutations, self.points) {
                    (Some(perms), _) => Arc::new(build_finite_action(group, perms.clone())?),
                    (None, Some(n)) if (1..=MAX_POINTS).contains(&n) => {
                        let mut rng = ChaCha8Rng::seed_from_u64(seed);
                        Arc::new(random_finite_action(group, n, &mut rng)?)
                    }
                    (None, Some(n)) => return Err(Error::Config(format!("points = {n} outside 1..={MAX_POINTS}"))),
                    (None, None) => return Err(missing("points` or `permutations")),
                }
            }
            SystemKind::Product => {
                let inner = self.of.as_ref().ok_or_else(|| missing("of"))?;
                Arc::new(product(inner.build(seed)?))
            }
        })
    }
}

impl AnalysisConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: AnalysisConfig = toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let b = &self.budget;
        if b.level == 0 || b.level > MAX_LEVEL {
            return Err(Error::Config(format!("budget.level = {} outside 1..={MAX_LEVEL}", b.level)));
        }
        if b.radius == 0 || b.radius > MAX_RADIUS {
            return Err(Error::Config(format!("budget.radius = {} outside 1..={MAX_RADIUS}", b.radius)));
        }
        if b.samples == 0 || b.samples > MAX_SAMPLES {
            return Err(Error::Config(format!("budget.samples = {} outside 1..={MAX_SAMPLES}", b.samples)));
        }
        for name in &self.analyzers {
            if name != "all" && !EXTRA_ANALYZERS.contains(&name.as_str()) && condition_by_name(name).is_none() {
                return Err(Error::Config(format!("unknown analyzer `{name}`")));
            }
        }
        if let Some(f) = &self.fault {
            if condition_by_name(&f.flip).is_none() {
                return Err(Error::Config(format!("fault.flip names no condition: `{}`", f.flip)));
            }
        }
        Ok(())
    }

    pub fn selects(&self, name: &str) -> bool {
        self.analyzers.iter().any(|a| a == "all" || a == name)
    }

    pub fn analysis_budget(&self, sys: &dyn Flow) -> Result<AnalysisBudget> {
        let mut budget = AnalysisBudget::new(self.budget.level, self.budget.radius, self.budget.samples, self.seed);
        budget.sequences = self.battery.sequences.clone();
        let base = sys.base_points();
        for spec in &self.battery.clopen {
            sys.check_level(spec.level)?;
            let mut cells = Vec::new();
            for &i in &spec.points {
                let p = base
                    .get(i)
                    .ok_or_else(|| Error::Config(format!("battery.clopen refers to base point {i} of {}", base.len())))?;
                cells.push(sys.cell_of(p, spec.level)?.key);
            }
            budget.clopens.push(ClopenSet::from_cells(sys, spec.level, cells)?);
        }
        Ok(budget)
    }
}

pub fn condition_by_name(name: &str) -> Option<Condition> {
    Condition::ALL.into_iter().find(|c| c.name() == name)
}

/// A named system with a one-line description.
#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub system: SystemConfig,
}

fn entry(name: &'static str, description: &'static str, kind: SystemKind) -> CatalogEntry {
    CatalogEntry {
        name,
        description,
        system: SystemConfig {
            kind,
            base: None,
            preset: None,
            rules: None,
            group: None,
            points: None,
            permutations: None,
            of: None,
        },
    }
}

/// The built-in systems. Random finite actions are drawn from the run seed.
pub fn catalog() -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    for (name, base, description) in [
        ("odometer-2", 2, "binary odometer: minimal, equicontinuous, level-equivariant"),
        ("odometer-3", 3, "ternary odometer"),
    ] {
        let mut e = entry(name, description, SystemKind::Odometer);
        e.system.base = Some(base);
        out.push(e);
    }
    for (name, description) in [
        ("thue-morse", "Thue-Morse subshift: minimal, not equicontinuous, has asymptotic pairs"),
        ("fibonacci", "Fibonacci subshift: minimal Sturmian system"),
    ] {
        let mut e = entry(name, description, SystemKind::Substitution);
        e.system.preset = Some(name.to_string());
        out.push(e);
    }
    out.push(entry("one-dot", "orbit closure of a single marked site: not pointwise almost periodic", SystemKind::OneDot));
    for (name, group, points, description) in [
        ("finite-f2", "F2", 12, "random F2 action on 12 points"),
        ("finite-z2", "Z2", 16, "random Z2 action on 16 points (commuting generators)"),
        ("finite-z", "Z", 10, "random permutation of 10 points"),
    ] {
        let mut e = entry(name, description, SystemKind::FiniteAction);
        e.system.group = Some(group.to_string());
        e.system.points = Some(points);
        out.push(e);
    }
    let mut e = entry("odometer-2-squared", "binary odometer times itself, diagonal action", SystemKind::Product);
    e.system.of = Some(Box::new(out[0].system.clone()));
    out.push(e);
    out
}
