use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::Result;
use clap::ValueEnum;
use evalrep_core::roots::gcd_condition;
use evalrep_core::{CoreError, Generator, Shape, Sign, WeightVector};
use evalrep_cyclotomic::RootOrder;
use num_integer::Integer;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Rejected configuration; reported with exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn config_error(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    #[default]
    Exact,
    Float,
}

impl BackendKind {
    pub fn name(self) -> &'static str {
        match self {
            BackendKind::Exact => "exact",
            BackendKind::Float => "float",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Finite,
    Affine,
    Nilpotent,
    Kernels,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Finite => "finite",
            Suite::Affine => "affine",
            Suite::Nilpotent => "nilpotent",
            Suite::Kernels => "kernels",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Verify,
    Drinfeld,
    Iso,
    Dump,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Drinfeld => "drinfeld",
            Command::Iso => "iso",
            Command::Dump => "dump",
        }
    }
}

/// `"all"`, `"random:k"`, `"1,1"` or `"1,1;2,0"`, or the weights themselves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LambdaSpec {
    One(Vec<i64>),
    Many(Vec<Vec<i64>>),
    Selector(String),
}

/// `"distinguished"` (`a = 1`, `b = 0`) or a single module with explicit entries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamSpec {
    Named(String),
    Explicit {
        a: Vec<String>,
        b: Vec<String>,
        lambda: Vec<String>,
    },
}

impl Default for ParamSpec {
    fn default() -> Self {
        ParamSpec::Named("distinguished".into())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub n: usize,
    pub l: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<LambdaSpec>,
    pub params: ParamSpec,
    /// Spectral parameters.
    pub a: Vec<String>,
    pub signs: Vec<Sign>,
    pub backend: BackendKind,
    pub tolerance: f64,
    pub seed: u64,
    pub suites: Vec<Suite>,
    pub strict_gcd: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corrupt: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_plus: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_minus: Option<String>,
    pub sweep: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(skip_serializing)]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing)]
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: 2,
            l: 3,
            lambda: None,
            params: ParamSpec::default(),
            a: vec!["1".into()],
            signs: Sign::both().to_vec(),
            backend: BackendKind::Exact,
            tolerance: 1e-9,
            seed: 0,
            suites: Vec::new(),
            strict_gcd: false,
            corrupt: None,
            a_plus: None,
            a_minus: None,
            sweep: false,
            generator: None,
            out: None,
            format: Format::Json,
        }
    }
}

pub fn parse_signs(s: &str) -> Result<Vec<Sign>> {
    match s {
        "both" | "+-" | "+,-" => Ok(Sign::both().to_vec()),
        _ => Ok(vec![s.parse::<Sign>().map_err(|e| config_error(e.to_string()))?]),
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_error(format!("{}: {e}", path.display())))?;
        let parsed = if path.extension().is_some_and(|e| e == "toml") {
            toml::from_str(&text).map_err(|e| e.to_string())
        } else {
            serde_json::from_str(&text).map_err(|e| e.to_string())
        };
        parsed.map_err(|e| config_error(format!("{}: {e}", path.display())))
    }

    pub fn is_distinguished(&self) -> Result<bool> {
        match &self.params {
            ParamSpec::Named(s) if s == "distinguished" => Ok(true),
            ParamSpec::Named(s) => Err(config_error(format!("unknown params {s:?}; use \"distinguished\" or a table of a, b, lambda"))),
            ParamSpec::Explicit { .. } => Ok(false),
        }
    }

    /// Suites to run, in a fixed order; affine only when `n >= 2` unless asked for.
    pub fn selected_suites(&self) -> Vec<Suite> {
        let mut s = if self.suites.is_empty() {
            let mut d = vec![Suite::Finite, Suite::Nilpotent, Suite::Kernels];
            if self.n >= 2 {
                d.push(Suite::Affine);
            }
            d
        } else {
            self.suites.clone()
        };
        s.sort();
        s.dedup();
        s
    }

    pub fn corrupted(&self) -> Result<Option<Generator>> {
        self.corrupt.as_deref().map(|g| self.generator_in_range(g, false)).transpose()
    }

    pub fn dump_generator(&self) -> Result<Generator> {
        let g = self
            .generator
            .as_deref()
            .ok_or_else(|| config_error("dump needs --generator"))?;
        self.generator_in_range(g, true)
    }

    fn generator_in_range(&self, s: &str, affine: bool) -> Result<Generator> {
        let g: Generator = s.parse().map_err(|e: CoreError| config_error(e.to_string()))?;
        let lo = if affine { 0 } else { 1 };
        if !(lo..=self.n).contains(&g.index()) {
            return Err(config_error(format!("generator {g} is out of range for n = {}", self.n)));
        }
        Ok(g)
    }

    /// Checks everything that does not need a backend; returns report notes.
    pub fn validate(&self, cmd: Command) -> Result<Vec<String>> {
        let mut notes = Vec::new();
        RootOrder::new(self.l as i64).map_err(|e| config_error(e.to_string()))?;
        if self.n == 0 {
            return Err(config_error("n must be at least 1"));
        }
        Shape::new(self.n, self.l).map_err(|e| config_error(e.to_string()))?;
        if !gcd_condition(self.n, self.l) {
            let g = (self.n as u64 + 1).gcd(&(self.l as u64));
            if self.strict_gcd {
                return Err(config_error(format!("gcd(l, n+1) = {g} != 1")));
            }
            notes.push(format!("gcd(l, n+1) = {g} != 1; running anyway (--strict-gcd rejects this)"));
        }
        let distinguished = self.is_distinguished()?;
        if let ParamSpec::Explicit { lambda, .. } = &self.params {
            if lambda.len() != self.n {
                return Err(config_error(format!("params.lambda needs {} entries", self.n)));
            }
        }
        let affine = match cmd {
            Command::Drinfeld | Command::Iso => true,
            Command::Verify => self.suites.contains(&Suite::Affine),
            Command::Dump => self.dump_generator()?.index() == 0,
        };
        if affine && self.n < 2 {
            return Err(config_error(CoreError::RankTooSmall(self.n).to_string()));
        }
        if matches!(cmd, Command::Drinfeld | Command::Iso) && !distinguished {
            return Err(config_error(format!("{} runs at the distinguished point only", cmd.name())));
        }
        if self.signs.is_empty() || self.a.is_empty() {
            return Err(config_error("need at least one sign and one spectral parameter"));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(config_error("tolerance must be positive"));
        }
        if self.a_plus.is_some() != self.a_minus.is_some() {
            return Err(config_error("give both a_plus and a_minus or neither"));
        }
        self.corrupted()?;
        if cmd == Command::Verify && self.n < 2 && self.suites.is_empty() {
            notes.push("n = 1: affine suite skipped".into());
        }
        if cmd == Command::Verify && !distinguished && self.selected_suites().contains(&Suite::Kernels) {
            notes.push("kernel checks apply at the distinguished point only; skipped".into());
        }
        if self.backend == BackendKind::Float {
            notes.push(format!(
                "float backend: eps = exp(2 pi i / l), comparisons within {:e}",
                self.tolerance
            ));
        }
        Ok(notes)
    }

    /// The weight grid; defaults to all of `Z_l^n` for `n <= 2` and 20 seeded
    /// weights otherwise.
    pub fn weights(&self) -> Result<Vec<WeightVector>> {
        let (n, l) = (self.n, self.l);
        let default = LambdaSpec::Selector(if n <= 2 { "all".into() } else { "random:20".into() });
        let raw: Vec<Vec<i64>> = match self.lambda.as_ref().unwrap_or(&default) {
            LambdaSpec::One(v) => vec![v.clone()],
            LambdaSpec::Many(vs) => vs.clone(),
            LambdaSpec::Selector(s) if s == "all" => {
                WeightVector::all(n, l).into_iter().map(|w| w.entries().to_vec()).collect()
            }
            LambdaSpec::Selector(s) if s.starts_with("random:") => {
                let k: usize = s["random:".len()..]
                    .parse()
                    .map_err(|_| config_error(format!("bad lambda selector {s:?}")))?;
                return self.random_weights(k);
            }
            LambdaSpec::Selector(s) => s
                .split(';')
                .map(|w| {
                    w.split(',')
                        .map(|x| x.trim().parse::<i64>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|_| config_error(format!("bad lambda {w:?}")))
                })
                .collect::<Result<_>>()?,
        };
        raw.into_iter()
            .map(|v| {
                if v.len() != n || v.iter().any(|&x| x < 0 || x >= l as i64) {
                    Err(config_error(format!("lambda {v:?} is not in Z_{l}^{n}")))
                } else {
                    Ok(WeightVector::new(v))
                }
            })
            .collect()
    }

    fn random_weights(&self, k: usize) -> Result<Vec<WeightVector>> {
        let total = (self.l as usize).pow(self.n as u32);
        if k == 0 || k > total {
            return Err(config_error(format!("random:{k} needs 1 <= k <= {total}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut picks = rand::seq::index::sample(&mut rng, total, k).into_vec();
        picks.sort_unstable();
        let all = WeightVector::all(self.n, self.l);
        Ok(picks.into_iter().map(|p| all[p].clone()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: usize, l: u32) -> RunConfig {
        RunConfig { n, l, ..RunConfig::default() }
    }

    #[test]
    fn selectors() {
        let mut c = cfg(2, 3);
        assert_eq!(c.weights().unwrap().len(), 9);
        c.lambda = Some(LambdaSpec::Selector("1,1;2,0".into()));
        assert_eq!(c.weights().unwrap(), vec![WeightVector::new(vec![1, 1]), WeightVector::new(vec![2, 0])]);
        c.lambda = Some(LambdaSpec::Selector("random:4".into()));
        let first = c.weights().unwrap();
        assert_eq!(first.len(), 4);
        assert_eq!(c.weights().unwrap(), first);
        c.seed = 1;
        assert_ne!(c.weights().unwrap(), first);
        c.lambda = Some(LambdaSpec::One(vec![3, 0]));
        assert!(c.weights().is_err());
        assert_eq!(cfg(3, 3).weights().unwrap().len(), 20);
    }

    #[test]
    fn gates() {
        let mut c = cfg(2, 3);
        assert_eq!(c.validate(Command::Verify).unwrap().len(), 1);
        c.strict_gcd = true;
        assert!(c.validate(Command::Verify).is_err());
        let mut c = cfg(1, 3);
        assert!(c.validate(Command::Iso).is_err());
        assert!(c.validate(Command::Verify).is_ok());
        c.suites = vec![Suite::Affine];
        assert!(c.validate(Command::Verify).is_err());
        assert!(cfg(2, 4).validate(Command::Verify).is_err());
        let mut c = cfg(2, 5);
        c.corrupt = Some("E3".into());
        assert!(c.validate(Command::Verify).is_err());
    }

    #[test]
    fn toml_and_json_agree() {
        let t: RunConfig = toml::from_str("n = 3\nl = 5\nlambda = [1, 2, 0]\na = [\"eps^2\"]\nsigns = [\"+\"]\n").unwrap();
        let j: RunConfig =
            serde_json::from_str(r#"{"n":3,"l":5,"lambda":[1,2,0],"a":["eps^2"],"signs":["+"]}"#).unwrap();
        assert_eq!(serde_json::to_string(&t).unwrap(), serde_json::to_string(&j).unwrap());
        assert!(serde_json::from_str::<RunConfig>(r#"{"n":2,"colour":1}"#).is_err());
    }
}
