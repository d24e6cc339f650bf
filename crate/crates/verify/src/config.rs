//! Suite configuration: a JSON document, optionally overridden by flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use gelfand_cetlin::{AlgebraKind, ProductSpace};
use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::{Deserialize, Serialize};

use crate::catalog::{self, SuiteName};

pub const MAX_N: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindName {
    Unitary,
    So3,
}

/// Tolerance overrides keyed by invariant id.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ToleranceOverrides(pub BTreeMap<String, f64>);

impl<'de> Deserialize<'de> for ToleranceOverrides {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = ToleranceOverrides;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from invariant id to a non-negative tolerance")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Self::Value, A::Error> {
                let mut out = BTreeMap::new();
                while let Some(key) = map.next_key::<String>()? {
                    if catalog::lookup(&key).is_none() {
                        return Err(de::Error::unknown_field(&key, known_ids()));
                    }
                    let value: f64 = map.next_value()?;
                    if !(value.is_finite() && value >= 0.0) {
                        return Err(de::Error::custom(format!(
                            "tolerance `{key}` must be finite and non-negative"
                        )));
                    }
                    out.insert(key, value);
                }
                Ok(ToleranceOverrides(out))
            }
        }
        d.deserialize_map(V)
    }
}

fn known_ids() -> &'static [&'static str] {
    static IDS: OnceLock<Vec<&'static str>> = OnceLock::new();
    IDS.get_or_init(catalog::ids)
}

fn positive_trials<'de, D: Deserializer<'de>>(d: D) -> Result<Option<usize>, D::Error> {
    let v = Option::<usize>::deserialize(d)?;
    if v == Some(0) {
        return Err(de::Error::custom("trials must be at least 1"));
    }
    Ok(v)
}

fn matrix_size<'de, D: Deserializer<'de>>(d: D) -> Result<Option<usize>, D::Error> {
    let v = Option::<usize>::deserialize(d)?;
    if let Some(n) = v {
        check_n(n).map_err(de::Error::custom)?;
    }
    Ok(v)
}

fn positive_step<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
    let v = Option::<f64>::deserialize(d)?;
    if let Some(s) = v {
        if !(s.is_finite() && s > 0.0 && s <= 0.1) {
            return Err(de::Error::custom("rk4_step must lie in (0, 0.1]"));
        }
    }
    Ok(v)
}

fn check_n(n: usize) -> Result<(), String> {
    if (2..=MAX_N).contains(&n) {
        Ok(())
    } else {
        Err(format!("n must be between 2 and {MAX_N}, got {n}"))
    }
}

/// The config file as written; every field is optional.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub suite: Option<SuiteName>,
    pub kind: Option<KindName>,
    #[serde(default, deserialize_with = "matrix_size")]
    pub n: Option<usize>,
    #[serde(default, deserialize_with = "positive_trials")]
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub tolerances: ToleranceOverrides,
    pub spaces: Option<Vec<ProductSpace>>,
    #[serde(default, deserialize_with = "positive_step")]
    pub rk4_step: Option<f64>,
    pub out: Option<PathBuf>,
}

/// Command-line overrides.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub suite: Option<SuiteName>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub n: Option<usize>,
    pub out: Option<PathBuf>,
}

/// Fully resolved configuration, echoed into the report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub suite: SuiteName,
    pub kind: KindName,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub rk4_step: f64,
    /// Effective tolerance of every invariant the suite checks.
    pub tolerances: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spaces: Option<Vec<ProductSpace>>,
}

pub const DEFAULT_TRIALS: usize = 10;
pub const DEFAULT_N: usize = 3;

impl SuiteConfig {
    pub fn new(suite: SuiteName) -> Self {
        Self::resolve(
            ConfigFile::default(),
            Overrides {
                suite: Some(suite),
                ..Overrides::default()
            },
        )
        .expect("defaults are valid")
        .0
    }

    pub fn algebra_kind(&self) -> AlgebraKind {
        match self.kind {
            KindName::So3 => AlgebraKind::So3,
            KindName::Unitary => AlgebraKind::unitary(self.n).expect("validated"),
        }
    }

    pub fn tolerance(&self, id: &str) -> f64 {
        self.tolerances
            .get(id)
            .copied()
            .or_else(|| catalog::lookup(id).map(|i| i.tolerance))
            .unwrap_or(0.0)
    }

    /// Merges a config file with flag overrides; returns the config and the
    /// output path, if any.
    pub fn resolve(file: ConfigFile, flags: Overrides) -> Result<(SuiteConfig, Option<PathBuf>), ConfigError> {
        let suite = flags.suite.or(file.suite).ok_or_else(|| ConfigError::Invalid {
            field: "suite".into(),
            message: "no suite given; pass --suite or set \"suite\" in the config".into(),
        })?;
        let n = flags.n.or(file.n).unwrap_or(DEFAULT_N);
        check_n(n).map_err(|message| ConfigError::Invalid {
            field: "n".into(),
            message,
        })?;
        let trials = flags.trials.or(file.trials).unwrap_or(DEFAULT_TRIALS);
        if trials == 0 {
            return Err(ConfigError::Invalid {
                field: "trials".into(),
                message: "trials must be at least 1".into(),
            });
        }
        if let Some(spaces) = &file.spaces {
            for (i, s) in spaces.iter().enumerate() {
                if let AlgebraKind::Unitary(m) = s.kind() {
                    check_n(m).map_err(|message| ConfigError::Invalid {
                        field: format!("spaces[{i}].n"),
                        message,
                    })?;
                }
            }
            if spaces.is_empty() {
                return Err(ConfigError::Invalid {
                    field: "spaces".into(),
                    message: "spaces must not be empty when given".into(),
                });
            }
        }
        let suites: Vec<SuiteName> = match suite {
            SuiteName::All => SuiteName::CONCRETE.to_vec(),
            s => vec![s],
        };
        let tolerances = catalog::CATALOG
            .iter()
            .filter(|i| suites.contains(&i.suite))
            .map(|i| (i.id.to_string(), file.tolerances.0.get(i.id).copied().unwrap_or(i.tolerance)))
            .collect();
        let config = SuiteConfig {
            suite,
            kind: file.kind.unwrap_or(KindName::Unitary),
            n,
            trials,
            seed: flags.seed.or(file.seed).unwrap_or(0),
            rk4_step: file.rk4_step.unwrap_or(0.01),
            tolerances,
            spaces: file.spaces,
        };
        Ok((config, flags.out.or(file.out)))
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ConfigError {
    #[error("{source_name}:{line}:{column}: field `{field}`: {message}")]
    Parse {
        source_name: String,
        line: usize,
        column: usize,
        field: String,
        message: String,
    },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("field `{field}`: {message}")]
    Invalid { field: String, message: String },
}

/// Parses a config document; `source_name` labels diagnostics.
pub fn parse_config(text: &str, source_name: &str) -> Result<ConfigFile, ConfigError> {
    let diagnostic = |field: String, e: serde_json::Error| ConfigError::Parse {
        source_name: source_name.to_string(),
        line: e.line(),
        column: e.column(),
        field,
        message: strip_position(&e.to_string()),
    };
    let mut de = serde_json::Deserializer::from_str(text);
    let file: ConfigFile = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let field = match e.path().to_string() {
            p if p == "." || p.is_empty() => "<root>".to_string(),
            p => p,
        };
        diagnostic(field, e.into_inner())
    })?;
    de.end().map_err(|e| diagnostic("<root>".into(), e))?;
    Ok(file)
}

// serde_json appends " at line L column C", which the diagnostic already carries
fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

pub fn load_config(path: &Path) -> Result<ConfigFile, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_config(&text, &path.display().to_string())
}
